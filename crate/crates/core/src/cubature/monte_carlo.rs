//! Monte Carlo integration errors against the Hoeffding tail bound.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::trig::{PointSet, TrigPoly, DEFAULT_OVERSAMPLE};

/// `P(|∫f − (1/m)Σ f(x^j)| >= η) <= 2 exp(−mη²/(8M²))` for `‖f‖_∞ <= M`.
pub fn hoeffding_bound<T: Real>(m: usize, eta: T, sup_bound: T) -> T {
    let m = T::from_usize_lossy(m);
    T::lit(2.0) * (-(m * eta * eta) / (T::lit(8.0) * sup_bound * sup_bound)).exp()
}

#[derive(Debug, Clone, PartialEq)]
pub struct HoeffdingRow<T> {
    pub eta: T,
    pub bound: T,
    /// Fraction of trials with error `>= eta`.
    pub exceed_freq: T,
    /// Standard deviation of a frequency with success probability `min(bound, 1)`.
    pub binomial_sd: T,
}

impl<T: Real> HoeffdingRow<T> {
    /// Whether the observed frequency is within `sigmas` standard deviations of the bound.
    pub fn consistent(&self, sigmas: T) -> bool {
        self.exceed_freq <= self.bound + sigmas * self.binomial_sd
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct McBaseline<T> {
    pub m: usize,
    pub trials: usize,
    /// Absolute error of each trial, in trial order.
    pub errors: Vec<T>,
    pub rows: Vec<HoeffdingRow<T>>,
}

fn trial_error<T: Real>(f: &TrigPoly<T>, integral: T, m: usize, seed: u64, trial: u64) -> Result<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let coords = (0..m * f.dim())
        .map(|_| T::lit(rng.random::<f64>() * std::f64::consts::TAU))
        .collect();
    let values = f.evaluate(&PointSet::new(f.dim(), coords)?)?;
    let mean = values.iter().map(|v| v.re).sum::<T>() / T::from_usize_lossy(m);
    Ok(num_traits::Float::abs(integral - mean))
}

/// Errors of `trials` independent `m`-point uniform rules on a real `f`.
/// Trial `t` draws from stream `t` of the seeded generator.
pub fn mc_baseline<T: Real>(
    f: &TrigPoly<T>,
    m: usize,
    trials: usize,
    etas: &[T],
    sup_bound: T,
    seed: u64,
) -> Result<McBaseline<T>> {
    if m == 0 || trials == 0 {
        return Err(Error::param("trials", "m and trials must be positive"));
    }
    if !f.is_real_valued(T::lit(1e-12)) {
        return Err(Error::NotReal);
    }
    let sizes: Vec<usize> = f.degrees().iter().map(|&n| DEFAULT_OVERSAMPLE * (2 * n + 1)).collect();
    let grid = f.sample(&sizes)?;
    let observed = grid.values().iter().fold(T::zero(), |acc, v| acc.max(v.norm()));
    if observed > sup_bound {
        return Err(Error::Precondition(format!(
            "grid maximum {observed} exceeds the supplied bound {sup_bound}"
        )));
    }
    let integral = f.mean().re;
    let errors = (0..trials as u64)
        .into_par_iter()
        .map(|t| trial_error(f, integral, m, seed, t))
        .collect::<Result<Vec<T>>>()?;
    let n = T::from_usize_lossy(trials);
    let rows = etas
        .iter()
        .map(|&eta| {
            let bound = hoeffding_bound(m, eta, sup_bound);
            let hits = errors.iter().filter(|&&e| e >= eta).count();
            let p = bound.min(T::one());
            HoeffdingRow {
                eta,
                bound,
                exceed_freq: T::from_usize_lossy(hits) / n,
                binomial_sd: (p * (T::one() - p) / n).sqrt(),
            }
        })
        .collect();
    Ok(McBaseline { m, trials, errors, rows })
}
