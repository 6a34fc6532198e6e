//! Runs every suite at default settings and prints one line per acceptance
//! criterion. Exits nonzero when any row fails.

use std::collections::BTreeMap;
use std::process::ExitCode;

use qfinsler::lab::{run_all, Experiment, ExperimentConfig, Row};

const CRITERIA: [(u32, &str); 13] = [
    (1, "square girth, closed form (1e-8, < 1 s)"),
    (2, "square girth, generic pipeline (1e-2, < 30 s)"),
    (3, "Euclidean girths and volume (2D 1e-6, 3D 1e-2, HT 1%)"),
    (4, "dual girth, random polygon pairs (1e-3)"),
    (5, "dual girth in space, l1.5 vs l3 (2e-2, < 5 min)"),
    (6, "HT duality: curve 1e-8, surface 3x error, Grassmannian 3 sigma"),
    (7, "planar bounds 4 < g < 8 and the Mahler bound"),
    (8, "pointwise phi <= psi, equality cases 1e-6"),
    (9, "flow energy 1e-6, dual-swap trajectory 1e-5"),
    (10, "Grassmannian girth duality (2e-2), HS n=3 value 2 pi"),
    (11, "rank constancy along smoothed flows"),
    (12, "geodesic correspondence and the determinant identity"),
    (13, "girth continuity sandwich"),
];

fn main() -> ExitCode {
    let report = run_all(&ExperimentConfig::new(Experiment::All));
    let mut by_criterion: BTreeMap<u32, Vec<&Row>> = BTreeMap::new();
    for row in &report.rows {
        by_criterion.entry(row.criterion().unwrap_or(0)).or_default().push(row);
    }
    let mut all = true;
    for (c, title) in CRITERIA {
        let rows = by_criterion.get(&c).map(Vec::as_slice).unwrap_or(&[]);
        let pass = !rows.is_empty() && rows.iter().all(|r| r.pass);
        all &= pass;
        let worst = rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
        println!(
            "criterion {c:>2} {} {title} [{} rows, min margin {worst:.3e}]",
            if pass { "PASS" } else { "FAIL" },
            rows.len()
        );
        for r in rows.iter().filter(|r| !r.pass) {
            println!("    {} {}: value {} reference {} margin {:.3e}", r.case_id, r.quantity, r.value, r.reference, r.margin);
        }
    }
    println!("acceptance: {} rows in {:.1} s", report.rows.len(), report.metadata.wall_time_s);
    if all { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
