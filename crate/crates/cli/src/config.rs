use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use wcop::symbols::RationalSpec;
use wcop::{
    BlaschkeProduct, Complex64, GridParams, MoebiusTransform, Polynomial, RationalSymbol, Selfmap, Space,
    VerdictPolicy, WeightedCompositionOp,
};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Built-in configuration used when `--config` is absent.
pub const DEFAULT_CONFIG: &str = include_str!("../../../configs/default.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub operator: OperatorSpec,
    #[serde(default)]
    pub grid: GridParams,
    #[serde(default)]
    pub verdict: VerdictPolicy,
    /// Values of `n` for cocycle radius estimates.
    #[serde(default = "default_schedule")]
    pub schedule: Vec<u64>,
    /// Truncation sizes `N`.
    #[serde(default = "default_sizes")]
    pub truncation_sizes: Vec<usize>,
    #[serde(default)]
    pub probe: ProbeSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Constant in `|f(z)| ≤ α ‖f‖ log(e / (1 - |z|²))`.
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

fn default_schedule() -> Vec<u64> {
    vec![1, 2, 5, 10, 20, 50, 100]
}

fn default_sizes() -> Vec<usize> {
    vec![16, 32, 64]
}

fn default_alpha() -> f64 {
    wcop::norms::DEFAULT_ALPHA
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSpec {
    /// Ascending `[re, im]` coefficients of numerator and denominator.
    pub weight: RationalSpec,
    pub selfmap: SelfmapSpec,
    pub space: Space,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum SelfmapSpec {
    Rotation { theta: f64 },
    /// `e^{iθ} (z - p) / (1 - conj(p) z)`.
    Moebius { theta: f64, p: Complex64 },
    CanonicalHyperbolic { mu: f64 },
    ParabolicCayley { shift: f64 },
    Blaschke {
        zeros: Vec<Complex64>,
        #[serde(default = "unit")]
        unimodular: Complex64,
    },
}

fn unit() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProbeSpec {
    pub lambda_samples: usize,
    pub extra: Vec<Complex64>,
}

impl Default for ProbeSpec {
    fn default() -> Self {
        ProbeSpec { lambda_samples: 8, extra: Vec::new() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// `|term_200 - μ|` for hyperbolic maps.
    pub dw_hyperbolic: f64,
    /// `|term_400 - 1|` for the parabolic map.
    pub dw_parabolic: f64,
    /// Relative gap of the `n = 100` radius estimate, hyperbolic map.
    pub radius_hyperbolic: f64,
    /// Same for the parabolic map.
    pub radius_parabolic: f64,
    /// Relative gap accepted by `estimate-radius`.
    pub radius: f64,
    pub binomial: f64,
    pub round_trip: f64,
    pub distance_chain: f64,
    pub dirichlet_monomial: f64,
    /// Slack on the annulus bounds of the half-turn root cloud.
    pub root_cloud: f64,
    /// Distance from the half-turn root cloud to `±2`.
    pub root_cloud_hit: f64,
    /// Relative gap between predicted shapes (circle radius, duality).
    pub shape: f64,
    /// `|φ(p) - p|` at reported fixed points.
    pub fixed_point: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            dw_hyperbolic: 1e-2,
            dw_parabolic: 5e-2,
            radius_hyperbolic: 0.02,
            radius_parabolic: 0.05,
            radius: 0.05,
            binomial: 1e-9,
            round_trip: 1e-9,
            distance_chain: 1e-10,
            dirichlet_monomial: 1e-8,
            root_cloud: 1e-9,
            root_cloud_hit: 1e-6,
            shape: 1e-9,
            fixed_point: 1e-9,
        }
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Self::parse(DEFAULT_CONFIG),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
                Self::parse(&text)
            }
        }
    }

    pub fn emit(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// SHA-256 of the compact JSON form, without the output directory: where
    /// a report is written does not change what it contains.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(&ExperimentConfig { out: None, ..self.clone() }).expect("config serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn weight(&self) -> Result<RationalSymbol, CliError> {
        let w = &self.operator.weight;
        Ok(RationalSymbol::new(w.numerator.clone(), w.denominator.clone())?)
    }

    pub fn selfmap(&self) -> Result<Selfmap, CliError> {
        Ok(match &self.operator.selfmap {
            SelfmapSpec::Rotation { theta } => MoebiusTransform::rotation(*theta).into(),
            SelfmapSpec::Moebius { theta, p } => MoebiusTransform::disc_automorphism(*theta, *p)?.into(),
            SelfmapSpec::CanonicalHyperbolic { mu } => MoebiusTransform::canonical_hyperbolic(*mu)?.into(),
            SelfmapSpec::ParabolicCayley { shift } => MoebiusTransform::parabolic_cayley(*shift)?.into(),
            // one zero: the automorphism e^{iθ}(z - a)/(1 - conj(a) z)
            SelfmapSpec::Blaschke { zeros, unimodular } if zeros.len() == 1 => {
                BlaschkeProduct::new(zeros.clone(), *unimodular)?;
                MoebiusTransform::disc_automorphism(unimodular.arg(), zeros[0])?.into()
            }
            SelfmapSpec::Blaschke { zeros, unimodular } => BlaschkeProduct::new(zeros.clone(), *unimodular)?.into(),
        })
    }

    pub fn automorphism(&self) -> Result<MoebiusTransform, CliError> {
        match self.selfmap()? {
            Selfmap::Moebius(m) => Ok(m),
            _ => Err(CliError::Domain("not a disc automorphism: the selfmap is a Blaschke product".into())),
        }
    }

    pub fn operator(&self) -> Result<WeightedCompositionOp, CliError> {
        Ok(WeightedCompositionOp::new(self.weight()?, self.selfmap()?, self.operator.space)?)
    }
}

/// `2 + z` as a weight spec, the running example.
pub fn two_plus_z() -> RationalSpec {
    RationalSpec { numerator: Polynomial::from_real(&[2.0, 1.0]), denominator: Polynomial::one() }
}
