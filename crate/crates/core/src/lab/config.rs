use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ensemble::DeformationQ;
use crate::equilibrium::Potential;
use crate::numerics::SemiInfiniteMap;

/// Configuration problems, reported with exit code 2 by the CLI.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("config file {0} not found")]
    Missing(PathBuf),
    #[error("cannot read config {path}: {source}")]
    Unreadable { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    Syntax(String),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DeformationConfig {
    /// `t = -Q'(0)`, shared by all variants.
    pub t: f64,
    /// Each variant is `Q(x) = -t x + sum_j higher[j] x^{j+2}`.
    pub higher: Vec<Vec<f64>>,
}

impl Default for DeformationConfig {
    fn default() -> Self {
        Self {
            t: 1.0,
            higher: vec![vec![], vec![0.0, -0.1]],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Exponential,
    Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FredholmConfig {
    pub m: usize,
    pub map: MapKind,
    /// Scale `L` of the semi-infinite map.
    pub scale: f64,
    pub s_values: Vec<f64>,
    pub t_values: Vec<f64>,
}

impl Default for FredholmConfig {
    fn default() -> Self {
        Self {
            m: 80,
            map: MapKind::Exponential,
            scale: 8.0,
            s_values: vec![-1.0, 0.0, 1.0],
            t_values: vec![0.125, 1.0, 8.0],
        }
    }
}

impl FredholmConfig {
    pub fn semi_infinite_map(&self) -> SemiInfiniteMap {
        match self.map {
            MapKind::Exponential => SemiInfiniteMap::Exponential { scale: self.scale },
            MapKind::Rational => SemiInfiniteMap::Rational { scale: self.scale },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IdPiiGridConfig {
    pub xi_lo: f64,
    pub xi_hi: f64,
    pub h_xi: f64,
    pub s_min: f64,
    /// Defaults to `12 max(T, 1)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_max: Option<f64>,
    pub ds: f64,
    pub store_every: usize,
    /// Overrides `T` for the `idpii-solve` study.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
}

impl Default for IdPiiGridConfig {
    fn default() -> Self {
        Self {
            xi_lo: -30.0,
            xi_hi: 15.0,
            h_xi: 0.04,
            s_min: -2.0,
            s_max: None,
            ds: 0.005,
            store_every: 4,
            t: None,
        }
    }
}

impl IdPiiGridConfig {
    pub fn solver_config(&self, t: f64) -> crate::idpii::IdPiiConfig {
        let s_max = self.s_max.unwrap_or(12.0 * t.max(1.0));
        crate::idpii::IdPiiConfig {
            t,
            s_min: self.s_min,
            s_max,
            xi_lo: self.xi_lo,
            xi_hi: self.xi_hi,
            h_xi: self.h_xi,
            n_steps: ((s_max - self.s_min) / self.ds).round().max(1.0) as usize,
            store_every: self.store_every,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub workers: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("results"),
            workers: 1,
        }
    }
}

/// Lab configuration. Only `potential` is required.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabConfig {
    /// Ascending coefficients of `V` in the original frame.
    pub potential: Vec<f64>,
    #[serde(default = "default_n_list")]
    pub n_list: Vec<usize>,
    #[serde(default = "default_s_list")]
    pub s_list: Vec<f64>,
    /// Edge parameter for the limiting objects; defaults to `t / c_V`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_param: Option<f64>,
    #[serde(default)]
    pub deformation: DeformationConfig,
    #[serde(default)]
    pub fredholm: FredholmConfig,
    #[serde(default)]
    pub idpii: IdPiiGridConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_n_list() -> Vec<usize> {
    vec![16, 32, 64]
}

fn default_s_list() -> Vec<f64> {
    vec![0.0, 1.0]
}

impl LabConfig {
    /// Defaults around a given potential.
    pub fn with_potential(potential: Vec<f64>) -> Self {
        Self {
            potential,
            n_list: default_n_list(),
            s_list: default_s_list(),
            t_param: None,
            deformation: DeformationConfig::default(),
            fredholm: FredholmConfig::default(),
            idpii: IdPiiGridConfig::default(),
            output: OutputConfig::default(),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serialises to TOML")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        Potential::new(self.potential.clone()).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if self.n_list.is_empty() || self.s_list.is_empty() {
            return bad("n_list and s_list must be nonempty".into());
        }
        if self.n_list.contains(&0) || self.n_list.windows(2).any(|w| w[1] <= w[0]) {
            return bad("n_list must be positive and strictly ascending".into());
        }
        if self.s_list.iter().any(|s| !s.is_finite()) {
            return bad("s_list entries must be finite".into());
        }
        if !(self.deformation.t > 0.0 && self.deformation.t.is_finite()) {
            return bad(format!("t must be positive, got {}", self.deformation.t));
        }
        if self.deformation.higher.is_empty() {
            return bad("at least one deformation variant is required".into());
        }
        for q in self.deformations().into_iter() {
            q.map_err(|e| ConfigError::Invalid(e.to_string()))?;
        }
        if let Some(tp) = self.t_param {
            if !(tp > 0.0 && tp.is_finite()) {
                return bad(format!("t_param must be positive, got {tp}"));
            }
        }
        let f = &self.fredholm;
        if f.m < 4 || !(f.scale > 0.0 && f.scale.is_finite()) {
            return bad("fredholm needs m >= 4 and a positive scale".into());
        }
        if f.s_values.is_empty() || f.t_values.is_empty() || f.t_values.iter().any(|t| !(*t > 0.0)) {
            return bad("fredholm s_values/t_values must be nonempty with positive t".into());
        }
        let g = &self.idpii;
        if !(g.h_xi > 0.0 && g.ds > 0.0 && g.store_every >= 1 && g.xi_lo < g.xi_hi) {
            return bad("idpii grid parameters must be positive with xi_lo < xi_hi".into());
        }
        if let Some(t) = g.t {
            if !(t > 0.0) {
                return bad(format!("idpii.t must be positive, got {t}"));
            }
        }
        if self.output.workers == 0 {
            return bad("workers must be >= 1".into());
        }
        Ok(())
    }

    pub fn potential(&self) -> crate::Result<Potential> {
        Potential::new(self.potential.clone())
    }

    pub fn deformations(&self) -> Vec<crate::Result<DeformationQ>> {
        self.deformation
            .higher
            .iter()
            .map(|h| DeformationQ::from_t(self.deformation.t, h))
            .collect()
    }

    /// SHA-256 over the canonical JSON of everything except the output section.
    pub fn hash(&self) -> String {
        let mut v = serde_json::to_value(self).expect("config serialises to JSON");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("output");
        }
        let text = serde_json::to_string(&v).expect("JSON value serialises");
        let digest = Sha256::digest(text.as_bytes());
        hex::encode(digest)[..16].to_string()
    }
}

pub fn parse_config(path: &Path) -> Result<LabConfig, ConfigError> {
    if !path.exists() {
        return Err(ConfigError::Missing(path.to_path_buf()));
    }
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Unreadable {
        path: path.to_path_buf(),
        source,
    })?;
    LabConfig::from_toml_str(&text)
}
