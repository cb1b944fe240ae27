//! Executes an [`ExperimentConfig`] sweep and writes its CSV table and plot.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Metric, RuleFamily};
use super::fit::{fit_rate, RateFit};
use super::plot::{loglog_svg, Series};
use crate::cubature::{
    cbc_search, fibonacci_number, lattice_error_closed_form, worst_case_error, CubatureRule, Lattice,
};
use crate::discretization::{default_block_cap, estimate_er_batch, sample_seed};
use crate::dyadic::ClassSpec;
use crate::error::Result;

/// One line of the output table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub m: u64,
    pub rule: String,
    pub family: String,
    pub r: f64,
    pub p: f64,
    pub metric: String,
    pub value: f64,
    pub tail: f64,
    pub seed: u64,
}

pub fn write_csv(rows: &[CsvRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>> {
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize().map(|row| row.map_err(Into::into)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub rows: Vec<CsvRow>,
    /// Present when at least four cells have positive errors.
    pub fit: Option<RateFit>,
    pub csv_path: PathBuf,
    pub svg_path: PathBuf,
    pub label: Option<&'static str>,
}

fn lattice_for(cfg: &ExperimentConfig, size: u64) -> Result<Lattice> {
    match cfg.rule {
        RuleFamily::Fibonacci => {
            let n = size as u32;
            Lattice::new(fibonacci_number(n)?, vec![1, fibonacci_number(n - 1)? as i64])
        }
        RuleFamily::Korobov => Lattice::new(size, cfg.generator.clone().expect("validated generator")),
        RuleFamily::Cbc => {
            let found = cbc_search::<f64>(size, cfg.dim, cfg.class_exponent())?;
            Lattice::new(size, found.generator)
        }
        RuleFamily::Random => unreachable!("random rules have no lattice"),
    }
}

fn cell_seed(cfg: &ExperimentConfig, idx: usize) -> u64 {
    match cfg.rule {
        RuleFamily::Random => sample_seed(cfg.seed, idx),
        _ => cfg.seed,
    }
}

fn rule_for(cfg: &ExperimentConfig, idx: usize, size: u64) -> Result<CubatureRule<f64>> {
    match cfg.rule {
        RuleFamily::Random => CubatureRule::uniform_random(size as usize, cfg.dim, cell_seed(cfg, idx)),
        _ => CubatureRule::from_lattice(lattice_for(cfg, size)?),
    }
}

/// Computes every sweep cell; rows follow the order of `cfg.sizes`.
pub fn compute_rows(cfg: &ExperimentConfig) -> Result<Vec<CsvRow>> {
    cfg.validate()?;
    let spec = ClassSpec::new(cfg.family, cfg.r, cfg.p, cfg.radius, 0.0)?;
    let counts = cfg.node_counts()?;
    let row = |idx: usize, value: f64, tail: f64| CsvRow {
        m: counts[idx],
        rule: cfg.rule.to_string(),
        family: cfg.family.to_string(),
        r: cfg.r,
        p: cfg.p,
        metric: cfg.metric.to_string(),
        value,
        tail,
        seed: cell_seed(cfg, idx),
    };
    match cfg.metric {
        Metric::WorstCase => cfg
            .sizes
            .par_iter()
            .enumerate()
            .map(|(idx, &size)| {
                let report = match (cfg.rule, cfg.truncation) {
                    (RuleFamily::Random, k) => {
                        worst_case_error(&rule_for(cfg, idx, size)?, &spec, k.expect("validated truncation"))?
                    }
                    (_, None) => lattice_error_closed_form(&lattice_for(cfg, size)?, &spec)?,
                    (_, Some(k)) => worst_case_error(&rule_for(cfg, idx, size)?, &spec, k)?,
                };
                Ok(row(idx, report.value, report.tail))
            })
            .collect(),
        Metric::Discretization => {
            let rules = cfg
                .sizes
                .iter()
                .enumerate()
                .map(|(idx, &size)| rule_for(cfg, idx, size))
                .collect::<Result<Vec<_>>>()?;
            let cap = cfg.block_cap.unwrap_or_else(|| default_block_cap(cfg.dim));
            let reports = estimate_er_batch(&rules, &spec, cfg.samples, cfg.seed, cap)?;
            Ok(reports
                .iter()
                .enumerate()
                .map(|(idx, rep)| row(idx, rep.supremum, 0.0))
                .collect())
        }
    }
}

/// Fits the rate model to `(m, value)` pairs with positive values.
pub fn fit_rows(rows: &[CsvRow], mode: super::fit::BMode) -> Result<RateFit> {
    let data: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.value > 0.0)
        .map(|r| (r.m as f64, r.value))
        .collect();
    fit_rate(&data, mode)
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let rows = compute_rows(cfg)?;
    let positive = rows.iter().filter(|r| r.value > 0.0 && r.m >= 3).count();
    let fit = if positive >= 4 { Some(fit_rows(&rows, cfg.fit_b)?) } else { None };

    std::fs::create_dir_all(&cfg.output_dir)?;
    let csv_path = cfg.output_dir.join(format!("{}.csv", cfg.name));
    let svg_path = cfg.output_dir.join(format!("{}.svg", cfg.name));
    write_csv(&rows, &csv_path)?;

    let mut series = vec![Series {
        label: format!("{} {}", cfg.rule, cfg.metric),
        points: rows.iter().map(|r| (r.m as f64, r.value)).collect(),
        dashed: false,
    }];
    if let Some(f) = &fit {
        series.push(Series {
            label: format!("fit r = {:.3}", f.r_hat),
            points: rows.iter().map(|r| (r.m as f64, f.predict(r.m as f64))).collect(),
            dashed: true,
        });
    }
    let title = format!("{}: {} r = {}, d = {}", cfg.name, cfg.family, cfg.r, cfg.dim);
    std::fs::write(&svg_path, loglog_svg(&title, "m", "error", &series))?;

    let label = (cfg.metric == Metric::Discretization && cfg.dim >= 3)
        .then_some(crate::discretization::EVIDENCE_ONLY_LABEL);
    Ok(ExperimentOutput {
        rows,
        fit,
        csv_path,
        svg_path,
        label,
    })
}
