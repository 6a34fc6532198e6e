//! One-dimensional numerical kernels shared by the geometric modules:
//! golden-section minimization, adaptive Gauss–Kronrod quadrature and the
//! periodic trapezoid rule.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Minimizes a convex (more generally unimodal) function on `[lo, hi]`.
///
/// Returns `(argmin, min)`. Iterates until the bracket is narrower than `tol`
/// or 200 iterations have run.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    // the endpoints of a piecewise-linear objective can beat the interior probes
    let (mut bx, mut bf) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    let mid = 0.5 * (lo + hi);
    let fm = f(mid);
    if fm < bf {
        bx = mid;
        bf = fm;
    }
    (bx, bf)
}

// Gauss–Kronrod 7/15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Result of an adaptive quadrature.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Adaptive Gauss–Kronrod (7/15) integration of `f` over the union of the
/// consecutive intervals given by `breaks` (sorted). Kinks of the integrand
/// should be listed as breakpoints.
pub fn integrate_with_breaks<F: FnMut(f64) -> f64>(mut f: F, breaks: &[f64], abs_tol: f64) -> Quadrature {
    let mut pending: Vec<(f64, f64, f64, f64)> = Vec::new();
    let mut evaluations = 0;
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            let (v, e) = gk15(&mut f, w[0], w[1]);
            evaluations += 15;
            pending.push((w[0], w[1], v, e));
        }
    }
    let total_len = breaks.last().unwrap_or(&0.0) - breaks.first().unwrap_or(&0.0);
    let mut value = 0.0;
    let mut error = 0.0;
    let mut iterations = 0;
    while let Some((a, b, v, e)) = pending.pop() {
        iterations += 1;
        let budget = abs_tol * (b - a) / total_len.max(f64::MIN_POSITIVE);
        if e <= budget.max(1e-15 * v.abs()) || (b - a) < 1e-12 * total_len || iterations > 200_000 {
            value += v;
            error += e;
            continue;
        }
        let m = 0.5 * (a + b);
        let (v1, e1) = gk15(&mut f, a, m);
        let (v2, e2) = gk15(&mut f, m, b);
        evaluations += 30;
        pending.push((a, m, v1, e1));
        pending.push((m, b, v2, e2));
    }
    Quadrature { value, error, evaluations }
}

/// Adaptive integration over `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Quadrature {
    integrate_with_breaks(f, &[a, b], abs_tol)
}

/// Trapezoid rule for a `2π`-periodic integrand with `n` nodes.
pub fn periodic_trapezoid<F: FnMut(f64) -> f64>(mut f: F, n: usize) -> f64 {
    let h = std::f64::consts::TAU / n as f64;
    (0..n).map(|i| f(i as f64 * h)).sum::<f64>() * h
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    theta.rem_euclid(std::f64::consts::TAU)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn golden_finds_kink_minimum() {
        let (x, v) = golden_section(|t| (t - 0.3).abs() + 1.0, -2.0, 2.0, 1e-13);
        assert!((x - 0.3).abs() < 1e-12);
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gauss_kronrod_polynomial_and_trig() {
        let q = integrate(|x| x.powi(5) - 2.0 * x, 0.0, 2.0, 1e-12);
        assert!((q.value - (64.0 / 6.0 - 4.0)).abs() < 1e-12);
        let q = integrate(|x| 1.0 / (x.cos() * (x.sin() + x.cos())), 0.0, PI / 4.0, 1e-13);
        assert!((q.value - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn breakpoints_handle_kinks() {
        let q = integrate_with_breaks(|x: f64| x.abs(), &[-1.0, 0.0, 2.0], 1e-12);
        assert!((q.value - 2.5).abs() < 1e-13);
    }

    #[test]
    fn trapezoid_is_spectral_for_periodic() {
        let v = periodic_trapezoid(|t| 1.0 / (2.0 + t.cos()), 64);
        assert!((v - 2.0 * PI / 3f64.sqrt()).abs() < 1e-13);
    }
}
