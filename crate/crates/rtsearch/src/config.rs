//! Flat key=value run configuration, overridable key-by-key from the
//! command line. Unknown keys are rejected so typos fail loudly.

use std::path::PathBuf;

use crate::cost::Cost;
use crate::error::Error;
use crate::framework::{AccountingMode, AlgoParams, TieBreak};
use crate::gen::GenKind;
use crate::grid::HeuristicKind;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub algo: String,
    pub theta: f64,
    /// Learning quota T in real cost; `None` means unlimited.
    pub quota: Option<f64>,
    pub gamma_bar: f64,
    pub d_max: u64,
    pub k: usize,
    pub tie_seed: Option<u64>,
    pub accounting: AccountingMode,
    pub audit: bool,
    /// Step budget; `None` means the automatic completeness budget.
    pub budget: Option<u64>,
    pub out: Option<PathBuf>,
    pub map: Option<PathBuf>,
    pub problem: Option<PathBuf>,
    pub gen: Option<GenKind>,
    pub size: usize,
    pub seed: u64,
    pub h0: HeuristicKind,
    pub weight_min: u64,
    pub weight_max: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            algo: "lrta".into(),
            theta: 1.0,
            quota: None,
            gamma_bar: 1.0,
            d_max: 1,
            k: 1,
            tie_seed: None,
            accounting: AccountingMode::TotalIncrement,
            audit: true,
            budget: None,
            out: None,
            map: None,
            problem: None,
            gen: None,
            size: 10,
            seed: 0,
            h0: HeuristicKind::Manhattan,
            weight_min: 1,
            weight_max: 1,
        }
    }
}

fn bad(key: &str, value: &str) -> Error {
    Error::Config(format!("bad value '{value}' for key '{key}'"))
}

impl RunConfig {
    /// Applies one `key=value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), Error> {
        match key {
            "algo" => self.algo = value.to_string(),
            "theta" => self.theta = value.parse().map_err(|_| bad(key, value))?,
            "quota" => {
                self.quota = if value == "inf" {
                    None
                } else {
                    Some(value.parse().map_err(|_| bad(key, value))?)
                }
            }
            "gamma_bar" => self.gamma_bar = value.parse().map_err(|_| bad(key, value))?,
            "dmax" => self.d_max = value.parse().map_err(|_| bad(key, value))?,
            "k" => self.k = value.parse().map_err(|_| bad(key, value))?,
            "tie_seed" => self.tie_seed = Some(value.parse().map_err(|_| bad(key, value))?),
            "accounting" => {
                self.accounting = match value {
                    "total" => AccountingMode::TotalIncrement,
                    "axiom" => AccountingMode::AxiomExclusion,
                    _ => return Err(bad(key, value)),
                }
            }
            "audit" => {
                self.audit = match value {
                    "on" => true,
                    "off" => false,
                    _ => return Err(bad(key, value)),
                }
            }
            "budget" => self.budget = Some(value.parse().map_err(|_| bad(key, value))?),
            "out" => self.out = Some(PathBuf::from(value)),
            "map" => self.map = Some(PathBuf::from(value)),
            "problem" => self.problem = Some(PathBuf::from(value)),
            "gen" => self.gen = Some(value.parse()?),
            "size" => self.size = value.parse().map_err(|_| bad(key, value))?,
            "seed" => self.seed = value.parse().map_err(|_| bad(key, value))?,
            "h0" => self.h0 = value.parse()?,
            "weight_min" => self.weight_min = value.parse().map_err(|_| bad(key, value))?,
            "weight_max" => self.weight_max = value.parse().map_err(|_| bad(key, value))?,
            other => return Err(Error::Config(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Parses a config document: one `key=value` per line, `#` comments.
    pub fn apply_text(&mut self, text: &str) -> Result<(), Error> {
        for (idx, raw) in text.lines().enumerate() {
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", idx + 1)))?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    /// Quota in ε-units for a given problem quantum.
    pub fn quota_units(&self, epsilon: f64) -> Result<Cost, Error> {
        match self.quota {
            None => Ok(Cost::Infinity),
            Some(t) => {
                if t < 0.0 {
                    return Err(Error::Config("quota must be non-negative".into()));
                }
                let ratio = t / epsilon;
                let units = ratio.round();
                if (ratio - units).abs() > 1e-6 {
                    return Err(Error::Config(format!(
                        "quota {t} is not a multiple of epsilon {epsilon}"
                    )));
                }
                Ok(Cost::Finite(units as u64))
            }
        }
    }

    /// Algorithm parameters for a problem with the given ε; enforces the
    /// standing assumption θ ≥ γ̄.
    pub fn to_params(&self, epsilon: f64) -> Result<AlgoParams, Error> {
        let mut params = AlgoParams::new(self.theta);
        params.gamma_bar = self.gamma_bar;
        params.gamma = self.gamma_bar.min(1.0);
        params.quota = self.quota_units(epsilon)?;
        params.accounting = self.accounting;
        params.d_max = self.d_max;
        params.segment_len = self.k;
        params.tie_break = match self.tie_seed {
            None => TieBreak::StateOrder,
            Some(seed) => TieBreak::Seeded(seed),
        };
        params.validate()?;
        Ok(params)
    }
}
