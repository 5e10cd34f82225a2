//! Run configuration: precision, grids and the parameter panels read from TOML.

use std::path::{Path, PathBuf};

use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::harness::{default_z_grid, theorem_for, Experiment, DEFAULT_N_GRID};
use crate::precision::{Param, DEFAULT_DIGITS, MIN_DIGITS};

/// The panel shipped with the crate, used when no config file is given.
pub const DEFAULT_CONFIG: &str = include_str!("../../../configs/default.toml");

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// A family plus the ratios `q` for vector indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PanelEntry {
    #[serde(flatten)]
    pub family: FamilySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<Param>>,
}

impl PanelEntry {
    pub fn ratios(&self) -> Result<Option<Vec<Rational>>> {
        self.q
            .as_ref()
            .map(|q| {
                q.iter()
                    .map(|v| v.as_rational().cloned().ok_or_else(|| Error::Config(format!("ratio {v} is not rational"))))
                    .collect()
            })
            .transpose()
    }

    pub fn experiment(&self) -> Result<Experiment> {
        Ok(Experiment { theorem: theorem_for(&self.family), family: self.family.clone(), q: self.ratios()? })
    }
}

/// Two Laguerre II parameter choices `(q, c)` sharing `alpha`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thm4Pair {
    pub alpha: Param,
    pub q1: Vec<Param>,
    pub c1: Vec<Param>,
    pub q2: Vec<Param>,
    pub c2: Vec<Param>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(default = "default_digits")]
    pub digits: u32,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default = "default_n_grid")]
    pub n_grid: Vec<usize>,
    #[serde(default = "default_z_grid")]
    pub z_grid: Vec<f64>,
    #[serde(default = "default_zero_n_grid")]
    pub zero_n_grid: Vec<usize>,
    /// Inclusive range of zero indices `k`.
    #[serde(default = "default_k_range")]
    pub k_range: [usize; 2],
    /// Seed for the random parameter sets of the series identities.
    #[serde(default)]
    pub seed: u64,
    /// Largest `n` of the exact orthogonality and explicit-formula checks.
    #[serde(default = "default_exact_n")]
    pub exact_n_max: usize,
    /// Mehler-Heine experiments, one theorem per entry.
    #[serde(default)]
    pub mh: Vec<PanelEntry>,
    /// Rational-parameter families for the exact checks.
    #[serde(default)]
    pub exact: Vec<PanelEntry>,
    /// r = 1 Jacobi-Pineiro and Laguerre II (c = 1) instances.
    #[serde(default)]
    pub reduction: Vec<PanelEntry>,
    #[serde(default)]
    pub zero_scaling: Vec<PanelEntry>,
    #[serde(default)]
    pub thm4_pairs: Vec<Thm4Pair>,
    /// Meijer-G `r = 2` parameter pairs compared with K-Bessel.
    #[serde(default)]
    pub meijer_pairs: Vec<[Param; 2]>,
    /// `(alpha, gamma)` pairs for the Angelesco coefficient limits.
    #[serde(default)]
    pub angelesco_d: Vec<[Param; 2]>,
}

fn default_digits() -> u32 {
    DEFAULT_DIGITS
}
fn default_n_grid() -> Vec<usize> {
    DEFAULT_N_GRID.to_vec()
}
fn default_zero_n_grid() -> Vec<usize> {
    vec![16, 32, 64]
}
fn default_k_range() -> [usize; 2] {
    [1, 1]
}
fn default_exact_n() -> usize {
    8
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::parse(DEFAULT_CONFIG).expect("bundled config parses")
    }
}

impl RunConfig {
    pub fn parse(src: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(src).map_err(|e| Error::Config(e.message().replace('\n', " ")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        RunConfig::parse(&src)
    }

    pub fn validate(&self) -> Result<()> {
        if self.digits < MIN_DIGITS {
            return Err(Error::Config(format!("digits = {} is below {MIN_DIGITS}", self.digits)));
        }
        if self.n_grid.is_empty() || self.z_grid.is_empty() || self.zero_n_grid.is_empty() {
            return Err(Error::Config("empty grid".into()));
        }
        for g in [&self.n_grid, &self.zero_n_grid] {
            if g.windows(2).any(|w| w[0] >= w[1]) || g[0] == 0 || *g.last().unwrap() > 128 {
                return Err(Error::Config(format!("grid {g:?} must be increasing within 1..=128")));
            }
        }
        if self.z_grid.iter().any(|z| !z.is_finite()) {
            return Err(Error::Config("non-finite z".into()));
        }
        let [k0, k1] = self.k_range;
        if k0 == 0 || k0 > k1 || k1 > 5 {
            return Err(Error::Config(format!("k range {k0}..={k1} outside 1..=5")));
        }
        if self.mh.is_empty() && self.zero_scaling.is_empty() {
            return Err(Error::Config("empty panel".into()));
        }
        for e in self.mh.iter().chain(&self.exact).chain(&self.reduction).chain(&self.zero_scaling) {
            e.family.validate().map_err(|err| Error::Config(format!("{}: {err}", e.family)))?;
            e.ratios()?;
        }
        for e in &self.exact {
            if !e.family.params_exact() {
                return Err(Error::Config(format!("exact panel entry {} has irrational parameters", e.family)));
            }
        }
        Ok(())
    }
}
