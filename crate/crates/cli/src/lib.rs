//! Support code for the `saturnum` binary: configuration, cap lookup and
//! survey tabulation.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use saturnum::solver::{lower_bound_fullerene, saturation_exact, SaturationResult, SolverConfig, SolverError};
use saturnum::spiral::Isomer;
use saturnum::tube::{cap_5_5, cap_8_0, Cap};
use serde::Serialize;

/// Environment variable naming the config file.
pub const CONFIG_ENV: &str = "SATURNUM_CONFIG";

/// Settings read from a `key = value` file.
///
/// Recognised keys: `budget`, `greedy_seeds`, `jobs`, and `cap.NAME = PATH`
/// to register a cap file under a name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    pub solver: SolverConfig,
    pub jobs: Option<usize>,
    pub caps: BTreeMap<String, PathBuf>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, String> {
        let mut cfg = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| format!("config line {}: expected key = value", i + 1))?;
            let number = || value.parse::<u64>().map_err(|_| format!("config line {}: {key} needs an integer", i + 1));
            match key {
                "budget" => cfg.solver.budget = number()?,
                "greedy_seeds" => cfg.solver.greedy_seeds = number()?,
                "jobs" => cfg.jobs = Some(number()? as usize),
                _ => match key.strip_prefix("cap.") {
                    Some(name) if !name.is_empty() => {
                        cfg.caps.insert(name.to_string(), PathBuf::from(value));
                    }
                    _ => return Err(format!("config line {}: unknown key {key}", i + 1)),
                },
            }
        }
        Ok(cfg)
    }

    /// Reads `path`, or the file named by `SATURNUM_CONFIG`, or returns defaults.
    pub fn load(path: Option<&Path>) -> Result<Config, String> {
        let path = match path {
            Some(p) => p.to_path_buf(),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) => PathBuf::from(p),
                None => return Ok(Config::default()),
            },
        };
        let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        Config::parse(&text)
    }

    /// `builtin:5_5`, `builtin:8_0`, a name from the config, or a file path.
    pub fn resolve_cap(&self, arg: &str) -> Result<Cap, String> {
        match arg {
            "builtin:5_5" => return Ok(cap_5_5()),
            "builtin:8_0" => return Ok(cap_8_0()),
            _ => {}
        }
        let path = self.caps.get(arg).cloned().unwrap_or_else(|| PathBuf::from(arg));
        let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        Cap::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

/// One line of the survey table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurveyRow {
    pub n: usize,
    pub isomer_count: usize,
    /// Smallest saturation number, empty when there are no isomers.
    pub min_s: Option<usize>,
    /// Isomers with `s = ceil(3n/10)`.
    pub count_at_3n_over_10: usize,
    /// Isomers with `s = ceil(n/3 - 2)`.
    pub count_at_n_over_3_minus_2: usize,
    /// Largest `s - n/3` over the isomers.
    pub max_excess_over_n_over_3: Option<f64>,
    /// Some search ran out of budget; the numbers are upper bounds.
    pub partial: bool,
}

pub const CSV_HEADER: &str = "n,isomer_count,min_s,count_at_3n_over_10,count_at_n_over_3_minus_2,max_excess_over_n_over_3,partial";

impl SurveyRow {
    pub fn from_values(n: usize, values: &[usize], partial: bool) -> SurveyRow {
        let at_3n10 = (3 * n).div_ceil(10);
        let at_n3 = lower_bound_fullerene(n);
        SurveyRow {
            n,
            isomer_count: values.len(),
            min_s: values.iter().copied().min(),
            count_at_3n_over_10: values.iter().filter(|&&s| s == at_3n10).count(),
            count_at_n_over_3_minus_2: values.iter().filter(|&&s| s == at_n3).count(),
            max_excess_over_n_over_3: values.iter().map(|&s| s as f64 - n as f64 / 3.0).reduce(f64::max),
            partial,
        }
    }

    pub fn csv(&self) -> String {
        let mut s = format!("{},{},", self.n, self.isomer_count);
        if let Some(m) = self.min_s {
            write!(s, "{m}").unwrap();
        }
        write!(s, ",{},{},", self.count_at_3n_over_10, self.count_at_n_over_3_minus_2).unwrap();
        if let Some(x) = self.max_excess_over_n_over_3 {
            write!(s, "{x:.4}").unwrap();
        }
        write!(s, ",{}", self.partial).unwrap();
        s
    }
}

/// Exact saturation numbers of all isomers, in input order, on the current rayon pool.
pub fn solve_all(isomers: &[Isomer], cfg: &SolverConfig) -> Vec<Result<SaturationResult, SolverError>> {
    isomers.par_iter().map(|iso| saturation_exact(&iso.graph, cfg)).collect()
}

/// Builds the row for `n` from solver results.
pub fn survey_row(n: usize, results: &[Result<SaturationResult, SolverError>]) -> Result<SurveyRow, SolverError> {
    let mut values = Vec::with_capacity(results.len());
    let mut partial = false;
    for r in results {
        let r = r.as_ref().map_err(|e| e.clone())?;
        partial |= !r.proof.optimal;
        values.push(r.s);
    }
    Ok(SurveyRow::from_values(n, &values, partial))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_keys() {
        let c = Config::parse("# solver\nbudget = 5\n greedy_seeds=3\njobs = 2\ncap.zz = /tmp/z.txt # comment\n").unwrap();
        assert_eq!(c.solver.budget, 5);
        assert_eq!(c.solver.greedy_seeds, 3);
        assert_eq!(c.jobs, Some(2));
        assert_eq!(c.caps["zz"], PathBuf::from("/tmp/z.txt"));
        assert!(Config::parse("budget = x").is_err());
        assert!(Config::parse("colour = red").is_err());
        assert!(Config::parse("budget").is_err());
    }

    #[test]
    fn row_counts() {
        let r = SurveyRow::from_values(40, &[12, 13, 13, 14], false);
        assert_eq!((r.min_s, r.count_at_3n_over_10, r.count_at_n_over_3_minus_2), (Some(12), 1, 1));
        assert_eq!(r.csv(), "40,4,12,1,1,0.6667,false");
        assert_eq!(SurveyRow::from_values(22, &[], false).csv(), "22,0,,0,0,,false");
    }
}
