//! Flat `key = value` experiment configuration.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use super::fit::BMode;
use crate::cubature::{fibonacci_number, is_prime, FIBONACCI_MAX_INDEX};
use crate::dyadic::ClassFamily;
use crate::error::{Error, Result};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "MIXDISC_OUTPUT_DIR";

const KEYS: &[&str] = &[
    "name",
    "rule",
    "indices",
    "moduli",
    "generator",
    "dim",
    "family",
    "r",
    "p",
    "radius",
    "metric",
    "truncation",
    "samples",
    "block_cap",
    "seed",
    "fit_b",
    "output_dir",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleFamily {
    Fibonacci,
    Korobov,
    Cbc,
    Random,
}

impl FromStr for RuleFamily {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "fibonacci" => Ok(Self::Fibonacci),
            "korobov" => Ok(Self::Korobov),
            "cbc" => Ok(Self::Cbc),
            "random" => Ok(Self::Random),
            _ => Err(format!("unknown rule `{s}` (fibonacci, korobov, cbc, random)")),
        }
    }
}

impl std::fmt::Display for RuleFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Fibonacci => "fibonacci",
            Self::Korobov => "korobov",
            Self::Cbc => "cbc",
            Self::Random => "random",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// Worst-case integration error over the class.
    WorstCase,
    /// Sampled supremum of the squared-norm discretization error.
    Discretization,
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "worst_case" => Ok(Self::WorstCase),
            "discretization" => Ok(Self::Discretization),
            _ => Err(format!("unknown metric `{s}` (worst_case, discretization)")),
        }
    }
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::WorstCase => "worst_case",
            Self::Discretization => "er_sampled",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub rule: RuleFamily,
    /// Fibonacci indices `n`, or node counts `m` for the other rules.
    pub sizes: Vec<u64>,
    pub generator: Option<Vec<i64>>,
    pub dim: usize,
    pub family: ClassFamily,
    pub r: f64,
    pub p: f64,
    pub radius: f64,
    pub metric: Metric,
    /// Box half-width for truncated sums; `None` selects the closed form.
    pub truncation: Option<usize>,
    pub samples: usize,
    pub block_cap: Option<u32>,
    pub seed: u64,
    pub fit_b: BMode,
    pub output_dir: PathBuf,
}

fn bad(key: &str, reason: impl Into<String>) -> Error {
    Error::Config {
        key: key.to_string(),
        reason: reason.into(),
    }
}

fn parse_value<V: FromStr>(key: &str, raw: &str) -> Result<V>
where
    V::Err: std::fmt::Display,
{
    raw.parse().map_err(|e| bad(key, format!("cannot parse `{raw}`: {e}")))
}

fn parse_list<V: FromStr>(key: &str, raw: &str) -> Result<Vec<V>>
where
    V::Err: std::fmt::Display,
{
    raw.split(',').map(|t| parse_value(key, t.trim())).collect()
}

/// `a..=b`, `a..b` or a comma list.
fn parse_range(key: &str, raw: &str) -> Result<Vec<u64>> {
    if let Some((a, b)) = raw.split_once("..=") {
        let (a, b): (u64, u64) = (parse_value(key, a.trim())?, parse_value(key, b.trim())?);
        return Ok((a..=b).collect());
    }
    if let Some((a, b)) = raw.split_once("..") {
        let (a, b): (u64, u64) = (parse_value(key, a.trim())?, parse_value(key, b.trim())?);
        return Ok((a..b).collect());
    }
    parse_list(key, raw)
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parse {
                    line: i + 1,
                    reason: format!("expected `key = value`, got `{line}`"),
                });
            };
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(bad(key, "unknown key"));
            }
            if raw.insert(key, (i + 1, value.trim())).is_some() {
                return Err(bad(key, "given more than once"));
            }
        }
        let get = |k: &str| raw.get(k).map(|&(_, v)| v);
        let require = |k: &str| get(k).ok_or_else(|| bad(k, "required"));

        let rule: RuleFamily = parse_value("rule", require("rule")?)?;
        let metric: Metric = match get("metric") {
            Some(v) => parse_value("metric", v)?,
            None => Metric::WorstCase,
        };
        let family: ClassFamily = match get("family") {
            Some(v) => parse_value("family", v)?,
            None => match metric {
                Metric::WorstCase => ClassFamily::FourierHull,
                Metric::Discretization => ClassFamily::HoelderH,
            },
        };
        let sizes = match rule {
            RuleFamily::Fibonacci => {
                if get("moduli").is_some() {
                    return Err(bad("moduli", "Fibonacci rules take `indices`"));
                }
                parse_range("indices", require("indices")?)?
            }
            _ => {
                if get("indices").is_some() {
                    return Err(bad("indices", "only Fibonacci rules take indices; use `moduli`"));
                }
                parse_range("moduli", require("moduli")?)?
            }
        };
        let dim: usize = match get("dim") {
            Some(v) => parse_value("dim", v)?,
            None => 2,
        };
        let p = match get("p") {
            Some(v) => parse_value("p", v)?,
            None if family == ClassFamily::FourierHull => f64::INFINITY,
            None => 2.0,
        };
        let fit_b = match get("fit_b") {
            None => BMode::Frozen(dim.saturating_sub(1) as f64),
            Some("free") => BMode::Free,
            Some(v) => BMode::Frozen(parse_value("fit_b", v)?),
        };
        let output_dir = match get("output_dir") {
            Some(v) => PathBuf::from(v),
            None => std::env::var_os(OUTPUT_DIR_ENV)
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from(".")),
        };
        let cfg = Self {
            name: get("name").unwrap_or("experiment").to_string(),
            rule,
            sizes,
            generator: get("generator").map(|v| parse_list("generator", v)).transpose()?,
            dim,
            family,
            r: parse_value("r", require("r")?)?,
            p,
            radius: get("radius").map(|v| parse_value("radius", v)).transpose()?.unwrap_or(1.0),
            metric,
            truncation: get("truncation").map(|v| parse_value("truncation", v)).transpose()?,
            samples: get("samples").map(|v| parse_value("samples", v)).transpose()?.unwrap_or(100),
            block_cap: get("block_cap").map(|v| parse_value("block_cap", v)).transpose()?,
            seed: get("seed").map(|v| parse_value("seed", v)).transpose()?.unwrap_or(0),
            fit_b,
            output_dir,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Checks every downstream precondition before any work starts.
    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(bad("name", "must be a non-empty file stem"));
        }
        if self.sizes.is_empty() {
            let key = if self.rule == RuleFamily::Fibonacci { "indices" } else { "moduli" };
            return Err(bad(key, "empty sweep"));
        }
        if self.dim == 0 {
            return Err(bad("dim", "must be positive"));
        }
        if !(self.r > 0.0) || !self.r.is_finite() {
            return Err(bad("r", "must be positive and finite"));
        }
        if !(self.p >= 1.0) {
            return Err(bad("p", "must lie in [1, inf]"));
        }
        if !(self.radius > 0.0) || !self.radius.is_finite() {
            return Err(bad("radius", "must be positive and finite"));
        }
        if let BMode::Frozen(b) = self.fit_b {
            if !b.is_finite() {
                return Err(bad("fit_b", "must be `free` or a finite number"));
            }
        }
        match self.rule {
            RuleFamily::Fibonacci => {
                if self.dim != 2 {
                    return Err(bad("dim", "Fibonacci rules are two-dimensional"));
                }
                for &n in &self.sizes {
                    if !(2..=FIBONACCI_MAX_INDEX as u64).contains(&n) {
                        return Err(bad("indices", format!("index {n} outside 2..={FIBONACCI_MAX_INDEX}")));
                    }
                }
            }
            RuleFamily::Korobov => {
                let g = self.generator.as_ref().ok_or_else(|| bad("generator", "required for korobov rules"))?;
                if g.len() != self.dim {
                    return Err(bad("generator", format!("has {} components for dim = {}", g.len(), self.dim)));
                }
            }
            RuleFamily::Cbc => {
                if let Some(&m) = self.sizes.iter().find(|&&m| !is_prime(m)) {
                    return Err(bad("moduli", format!("{m} is not prime")));
                }
                if self.class_exponent() <= 1.0 {
                    return Err(bad("r", "generator search needs a convergent dual sum"));
                }
            }
            RuleFamily::Random => {}
        }
        if self.rule != RuleFamily::Korobov && self.generator.is_some() {
            return Err(bad("generator", "only korobov rules take a generator"));
        }
        if self.rule != RuleFamily::Fibonacci && self.sizes.contains(&0) {
            return Err(bad("moduli", "node counts must be positive"));
        }
        let largest = self.node_counts()?.into_iter().max().unwrap_or(0);
        match self.metric {
            Metric::WorstCase => {
                match self.family {
                    ClassFamily::SobolevW if self.p != 2.0 => {
                        return Err(bad("p", "Sobolev worst-case errors need p = 2"))
                    }
                    ClassFamily::HoelderH => {
                        return Err(bad("family", "worst_case needs sobolev or fourier_hull"))
                    }
                    _ => {}
                }
                if self.class_exponent() <= 1.0 {
                    return Err(bad("r", "worst-case sum diverges (need 2r > 1 for sobolev, r > 1 for fourier_hull)"));
                }
                match self.truncation {
                    Some(0) => return Err(bad("truncation", "must be at least 1")),
                    None if self.rule == RuleFamily::Random => {
                        return Err(bad("truncation", "random rules need a truncation box"))
                    }
                    None if largest > 1 << 24 => {
                        return Err(bad("moduli", "closed-form sums support at most 2^24 nodes"))
                    }
                    _ => {}
                }
            }
            Metric::Discretization => {
                if self.family != ClassFamily::HoelderH {
                    return Err(bad("family", "discretization needs the hoelder family"));
                }
                if self.r <= 1.0 / self.p {
                    return Err(bad("r", "sampling needs r > 1/p"));
                }
                if self.truncation.is_some() {
                    return Err(bad("truncation", "not used by discretization runs"));
                }
                if let Some(cap) = self.block_cap {
                    if cap > 10 {
                        return Err(bad("block_cap", "at most 10"));
                    }
                }
            }
        }
        if largest > 1 << 24 && (self.metric == Metric::Discretization || self.truncation.is_some()) {
            return Err(bad("moduli", "too many nodes to materialize"));
        }
        Ok(())
    }

    /// Exponent of the dual weights behind the worst-case sums.
    pub fn class_exponent(&self) -> f64 {
        match self.family {
            ClassFamily::SobolevW => 2.0 * self.r,
            _ => self.r,
        }
    }

    /// Number of nodes of each sweep cell.
    pub fn node_counts(&self) -> Result<Vec<u64>> {
        match self.rule {
            RuleFamily::Fibonacci => self.sizes.iter().map(|&n| fibonacci_number(n as u32)).collect(),
            _ => Ok(self.sizes.clone()),
        }
    }
}
