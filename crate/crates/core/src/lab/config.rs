use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bodies::BodySpec;
use crate::error::{Error, Result};
use crate::grassmann::OperatorNormSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Girth2d,
    Girth3d,
    Htvol,
    Grassmann,
    All,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Self::Girth2d => "girth2d",
            Self::Girth3d => "girth3d",
            Self::Htvol => "htvol",
            Self::Grassmann => "grassmann",
            Self::All => "all",
        }
    }
}

/// A norm on `n×n` matrices as written in a config file.
///
/// ```json
/// {"type": "spectral"}
/// {"type": "blend", "weight": 0.9, "base": {"type": "trace"}}
/// {"type": "op_gauge", "k": {"type": "lp", "p": 1, "dim": 4}, "l": {"type": "lp", "p": 3, "dim": 4}}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum NormSpec {
    HilbertSchmidt,
    Spectral,
    Trace,
    OpGauge { k: BodySpec, l: BodySpec },
    Blend { weight: f64, base: Box<NormSpec> },
}

impl NormSpec {
    pub fn build(&self) -> Result<OperatorNormSpec> {
        match self {
            Self::HilbertSchmidt => Ok(OperatorNormSpec::HilbertSchmidt),
            Self::Spectral => Ok(OperatorNormSpec::Spectral),
            Self::Trace => Ok(OperatorNormSpec::Trace),
            Self::OpGauge { k, l } => OperatorNormSpec::op_gauge(k.build()?, l.build()?),
            Self::Blend { weight, base } => base.build()?.blended(*weight),
        }
    }
}

/// A body pair `(K, L)`: the surface `∂K` normed by `L`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyPair {
    pub id: String,
    pub k: BodySpec,
    pub l: BodySpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Knobs {
    /// Seeded random polygon pairs for the planar duality rows.
    pub random_pairs: usize,
    /// `(m, v)` samples per body pair for the pointwise metric comparison.
    pub phi_psi_samples: usize,
    /// Coarse mesh frequency of the surface volume quadrature.
    pub surface_frequency: usize,
    /// Random ellipsoid pairs in the surface volume duality rows.
    pub ellipsoid_pairs: usize,
    /// Monte Carlo samples for the `G̃(4,k)` volumes.
    pub mc_samples: usize,
    /// Haar starts of the Grassmannian girth search.
    pub grass_starts: usize,
    /// Seeded flows in the rank-constancy rows.
    pub rank_flows: usize,
    /// Random instances for the invariant complement.
    pub complement_instances: usize,
}

impl Default for Knobs {
    fn default() -> Self {
        Self {
            random_pairs: 20,
            phi_psi_samples: 10_000,
            surface_frequency: 8,
            ellipsoid_pairs: 5,
            mc_samples: 2_000_000,
            grass_starts: 12,
            rank_flows: 10,
            complement_instances: 100,
        }
    }
}

impl Knobs {
    fn validate(&self) -> Result<()> {
        let check = |name: &str, v: usize, lo: usize, hi: usize| {
            if v < lo || v > hi {
                Err(Error::Config(format!("{name} = {v} is outside [{lo}, {hi}]")))
            } else {
                Ok(())
            }
        };
        check("random_pairs", self.random_pairs, 1, 1000)?;
        check("phi_psi_samples", self.phi_psi_samples, 10, 1_000_000)?;
        check("surface_frequency", self.surface_frequency, 2, 32)?;
        check("ellipsoid_pairs", self.ellipsoid_pairs, 1, 50)?;
        check("mc_samples", self.mc_samples, 10_000, 100_000_000)?;
        check("grass_starts", self.grass_starts, 1, 200)?;
        check("rank_flows", self.rank_flows, 1, 100)?;
        check("complement_instances", self.complement_instances, 1, 10_000)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub seed: u64,
    /// Extra body pairs; planar pairs join the 2D suite, spatial ones the 3D suite.
    #[serde(default)]
    pub pairs: Vec<BodyPair>,
    /// Extra norms for the Grassmannian girth duality rows.
    #[serde(default)]
    pub norms: Vec<NormSpec>,
    #[serde(default)]
    pub knobs: Knobs,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self { experiment, seed: 0, pairs: Vec::new(), norms: Vec::new(), knobs: Knobs::default(), output: None }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Checks knob ranges and that every body and norm builds.
    pub fn validate(&self) -> Result<()> {
        self.knobs.validate()?;
        let config_err = |what: &str, e: Error| Error::Config(format!("{what}: {e}"));
        for p in &self.pairs {
            let k = p.k.build().map_err(|e| config_err(&p.id, e))?;
            let l = p.l.build().map_err(|e| config_err(&p.id, e))?;
            if k.dim() != l.dim() || !(2..=3).contains(&k.dim()) {
                return Err(Error::Config(format!("{}: bodies must share dimension 2 or 3", p.id)));
            }
        }
        for n in &self.norms {
            n.build().map_err(|e| config_err("norm", e))?;
        }
        Ok(())
    }
}
