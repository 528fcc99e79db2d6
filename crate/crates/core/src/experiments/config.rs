//! Experiment configuration, read from TOML.
//!
//! ```toml
//! [problem]
//! k = 1
//! l = 2
//! m = 2            # or r = 0; giving both checks consistency
//!
//! [base]
//! kind = "lower_bound"   # lower_bound | file | empty | complete
//! eps = "1/16"           # lower_bound only
//! # path = "g.edges"     # file only
//!
//! [model]
//! n = [16, 24]
//! p = [0.0, 0.05, 0.1]   # or: scale = [{ c = 1.0, exponent = -1.0 }]
//!
//! [run]
//! trials = 200
//! seed = 42              # integer or decimal string (full u64 range)
//! max_n = 64
//! clique_audit = false
//! timing = false         # record wall-clock times (breaks byte reproducibility)
//!
//! [budget]
//! max_nodes = 5000000
//! max_millis = 600000
//!
//! [bisect]
//! p_lo = 0.0
//! p_hi = 1.0
//! rel_width = 0.1
//! max_iters = 40
//! max_timeout_rate = 0.2
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Deserializer, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gadgets::{parse_ratio, ProblemParams};
use crate::search::{SearchBudget, MAX_SEARCH_VERTICES};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub k: usize,
    pub l: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
}

impl ProblemSection {
    pub fn params(&self) -> Result<ProblemParams> {
        ProblemParams::resolve(self.k, self.l, self.r, self.m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BaseSpec {
    /// The extremal graph `G_α` with `α = k/(k+1) + eps`.
    LowerBound {
        eps: String,
    },
    /// A fixed edge-list file; its vertex count must match every `n`.
    File {
        path: PathBuf,
    },
    Empty,
    Complete,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalePoint {
    pub c: f64,
    pub exponent: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelGrid {
    pub n: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub p: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub scale: Vec<ScalePoint>,
}

impl ModelGrid {
    /// The probabilities probed at size `n`.
    pub fn probabilities(&self, n: usize) -> Vec<f64> {
        if !self.p.is_empty() {
            return self.p.clone();
        }
        self.scale
            .iter()
            .map(|s| (s.c * (n as f64).powf(s.exponent)).clamp(0.0, 1.0))
            .collect()
    }
}

fn de_seed<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<u64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Int(i64),
        Text(String),
    }
    match Raw::deserialize(d)? {
        Raw::Int(i) => u64::try_from(i).map_err(|_| serde::de::Error::custom("seed must be >= 0")),
        Raw::Text(s) => s.trim().parse().map_err(serde::de::Error::custom),
    }
}

fn ser_seed<S: serde::Serializer>(seed: &u64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if i64::try_from(*seed).is_ok() {
        s.serialize_u64(*seed)
    } else {
        s.serialize_str(&seed.to_string())
    }
}

fn default_max_n() -> usize {
    64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub trials: usize,
    #[serde(deserialize_with = "de_seed", serialize_with = "ser_seed")]
    pub seed: u64,
    #[serde(default = "default_max_n")]
    pub max_n: usize,
    #[serde(default)]
    pub clique_audit: bool,
    #[serde(default)]
    pub timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSection {
    pub max_nodes: u64,
    pub max_millis: u64,
}

impl Default for BudgetSection {
    fn default() -> Self {
        let b = SearchBudget::default();
        BudgetSection {
            max_nodes: b.max_nodes,
            max_millis: b.max_millis,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BisectSection {
    pub p_lo: f64,
    pub p_hi: f64,
    pub rel_width: f64,
    pub max_iters: usize,
    pub max_timeout_rate: f64,
}

impl Default for BisectSection {
    fn default() -> Self {
        BisectSection {
            p_lo: 0.0,
            p_hi: 1.0,
            rel_width: 0.1,
            max_iters: 40,
            max_timeout_rate: 0.2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemSection,
    pub base: BaseSpec,
    pub model: ModelGrid,
    pub run: RunSection,
    #[serde(default)]
    pub budget: BudgetSection,
    #[serde(default)]
    pub bisect: BisectSection,
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| config_err(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; a relative `base.path` is resolved against the
    /// directory holding the config.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::from_toml_str(&text)?;
        if let BaseSpec::File { path: p } = &mut cfg.base {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    *p = dir.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| config_err(e.to_string()))
    }

    pub fn params(&self) -> Result<ProblemParams> {
        self.problem.params()
    }

    pub fn budget(&self) -> Result<SearchBudget> {
        SearchBudget::new(
            self.budget.max_nodes,
            self.budget.max_millis,
            self.run.timing,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let params = self.params()?;
        let m = params.m();
        if self.run.trials == 0 {
            return Err(config_err("run.trials must be >= 1"));
        }
        if self.model.n.is_empty() {
            return Err(config_err("model.n must be nonempty"));
        }
        if self.model.p.is_empty() == self.model.scale.is_empty() {
            return Err(config_err(
                "exactly one of model.p and model.scale must be nonempty",
            ));
        }
        if let Some(p) = self.model.p.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(config_err(format!("probability {p} not in [0, 1]")));
        }
        if self
            .model
            .scale
            .iter()
            .any(|s| !(s.c >= 0.0 && s.c.is_finite() && s.exponent.is_finite()))
        {
            return Err(config_err(
                "scale points need finite c >= 0 and a finite exponent",
            ));
        }
        if self.run.max_n > MAX_SEARCH_VERTICES {
            return Err(config_err(format!(
                "run.max_n is capped at {MAX_SEARCH_VERTICES}"
            )));
        }
        for &n in &self.model.n {
            if n < m + 2 {
                return Err(Error::TooFewVertices { n, m });
            }
            if n > self.run.max_n {
                return Err(config_err(format!(
                    "n = {n} exceeds run.max_n = {}",
                    self.run.max_n
                )));
            }
        }
        if let BaseSpec::LowerBound { eps } = &self.base {
            parse_ratio(eps)?;
        }
        self.budget()?;
        let b = &self.bisect;
        if !(0.0 <= b.p_lo && b.p_lo < b.p_hi && b.p_hi <= 1.0) {
            return Err(config_err("bisect needs 0 <= p_lo < p_hi <= 1"));
        }
        // negated so that NaN is rejected too
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        let bad_width = !(b.rel_width > 0.0);
        if bad_width || !(0.0..=1.0).contains(&b.max_timeout_rate) || b.max_iters == 0 {
            return Err(config_err(
                "bisect needs rel_width > 0, max_iters >= 1, max_timeout_rate in [0, 1]",
            ));
        }
        Ok(())
    }

    /// Short hex digest of the canonical config and the crate version.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serialises");
        let mut h = Sha256::new();
        h.update(canonical.as_bytes());
        h.update(b"\0");
        h.update(crate::VERSION.as_bytes());
        hex::encode(&h.finalize()[..8])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
[problem]
k = 1
l = 2
m = 2

[base]
kind = "lower_bound"
eps = "1/16"

[model]
n = [16, 24]
p = [0.0, 0.5]

[run]
trials = 10
seed = "18446744073709551615"
"#;

    #[test]
    fn parses_and_round_trips() {
        let cfg = ExperimentConfig::from_toml_str(SAMPLE).unwrap();
        assert_eq!(cfg.run.seed, u64::MAX);
        assert_eq!(cfg.params().unwrap(), ProblemParams::new(1, 2, 0).unwrap());
        assert_eq!(cfg.bisect, BisectSection::default());
        assert_eq!(cfg.run.max_n, 64);
        let again = ExperimentConfig::from_toml_str(&cfg.to_toml_string().unwrap()).unwrap();
        assert_eq!(again, cfg);
        assert_eq!(again.hash(), cfg.hash());
        assert_eq!(cfg.hash().len(), 16);
    }

    #[test]
    fn rejects_bad_configs() {
        for (from, to) in [
            ("trials = 10", "trials = 0"),
            ("m = 2", "m = 3\nr = 0"),
            ("n = [16, 24]", "n = []"),
            ("n = [16, 24]", "n = [3]"),
            ("n = [16, 24]", "n = [100]"),
            ("p = [0.0, 0.5]", "p = [1.5]"),
            ("p = [0.0, 0.5]", "p = []"),
            ("eps = \"1/16\"", "eps = \"x\""),
            ("trials = 10", "trials = 10\nbogus = 1"),
        ] {
            let text = SAMPLE.replace(from, to);
            assert!(ExperimentConfig::from_toml_str(&text).is_err(), "{to}");
        }
    }

    #[test]
    fn hash_tracks_content() {
        let a = ExperimentConfig::from_toml_str(SAMPLE).unwrap();
        let b =
            ExperimentConfig::from_toml_str(&SAMPLE.replace("trials = 10", "trials = 11")).unwrap();
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn scale_grid() {
        let text = SAMPLE.replace(
            "p = [0.0, 0.5]",
            "scale = [{ c = 2.0, exponent = -1.0 }, { c = 100.0, exponent = 0.0 }]",
        );
        let cfg = ExperimentConfig::from_toml_str(&text).unwrap();
        assert_eq!(cfg.model.probabilities(16), vec![0.125, 1.0]);
    }
}
