//! Run configuration: a simple `key = value` text format with decimal-string
//! big integers. Unknown keys are rejected.

use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub seed: u64,
    pub precision_bits: u32,
    pub digit_cap: usize,
    pub support_cap: usize,
    /// Random instances for the block-sum bound suite, per order.
    pub block_sum_trials: u64,
    /// Random vectors for the thresholded-sum suites, per space.
    pub qg_trials: u64,
    /// Random indicator sets for the sandwich suite.
    pub sandwich_trials: u64,
    /// Random trials for the scanners.
    pub scan_trials: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 1,
            precision_bits: 256,
            digit_cap: 2000,
            support_cap: 12,
            block_sum_trials: 500,
            qg_trials: 200,
            sandwich_trials: 60,
            scan_trials: 50,
        }
    }
}

impl RunConfig {
    pub fn budget(&self) -> crate::budget::Budget {
        crate::budget::Budget::with_digit_cap(self.digit_cap)
    }

    pub fn caps(&self) -> crate::spaces::Caps {
        crate::spaces::Caps {
            support_cap: self.support_cap,
            budget: self.budget(),
        }
    }

    pub fn to_text(&self) -> String {
        format!(
            "seed = {}\nprecision_bits = {}\ndigit_cap = {}\nsupport_cap = {}\n\
             block_sum_trials = {}\nqg_trials = {}\nsandwich_trials = {}\nscan_trials = {}\n",
            self.seed,
            self.precision_bits,
            self.digit_cap,
            self.support_cap,
            self.block_sum_trials,
            self.qg_trials,
            self.sandwich_trials,
            self.scan_trials
        )
    }
}

impl FromStr for RunConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (lineno, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::input(format!("line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            let parse_u64 = |v: &str| -> Result<u64> {
                v.parse()
                    .map_err(|_| Error::input(format!("bad value for {key}")))
            };
            match key {
                "seed" => cfg.seed = parse_u64(value)?,
                "precision_bits" => cfg.precision_bits = parse_u64(value)? as u32,
                "digit_cap" => cfg.digit_cap = parse_u64(value)? as usize,
                "support_cap" => cfg.support_cap = parse_u64(value)? as usize,
                "block_sum_trials" => cfg.block_sum_trials = parse_u64(value)?,
                "qg_trials" => cfg.qg_trials = parse_u64(value)?,
                "sandwich_trials" => cfg.sandwich_trials = parse_u64(value)?,
                "scan_trials" => cfg.scan_trials = parse_u64(value)?,
                other => return Err(Error::input(format!("unknown config key `{other}`"))),
            }
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_rejection() {
        let cfg = RunConfig {
            seed: 9,
            qg_trials: 10,
            ..RunConfig::default()
        };
        let parsed: RunConfig = cfg.to_text().parse().unwrap();
        assert_eq!(parsed, cfg);
        assert!("seed = 1\nbogus = 2\n".parse::<RunConfig>().is_err());
        assert!("seed != 1".parse::<RunConfig>().is_err());
    }
}
