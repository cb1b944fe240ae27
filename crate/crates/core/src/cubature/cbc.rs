//! Component-by-component search for Korobov generators.

use super::worst_case::DualSumTable;
use super::Lattice;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Trial division; adequate for the moduli a generator search can afford.
pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    if m.is_multiple_of(2) {
        return m == 2;
    }
    let mut p = 3u64;
    while p.saturating_mul(p) <= m {
        if m.is_multiple_of(p) {
            return false;
        }
        p += 2;
    }
    true
}

#[derive(Debug, Clone, PartialEq)]
pub struct CbcResult<T> {
    pub generator: Vec<i64>,
    /// `Σ_{k ∈ L^⊥ \ 0} ∏_j max(1,|k_j|)^{-r}` for the chosen generator.
    pub dual_sum: T,
}

impl<T> CbcResult<T> {
    pub fn lattice(&self, modulus: u64) -> Result<Lattice> {
        Lattice::new(modulus, self.generator.clone())
    }
}

/// Greedy generator: `a_1 = 1`, then each `a_j ∈ 1..m-1` minimizes the dual
/// sum given the earlier components. Ties (relative 1e-12) keep the smallest `a_j`.
pub fn cbc_search<T: Real>(modulus: u64, dim: usize, r: T) -> Result<CbcResult<T>> {
    if dim == 0 {
        return Err(Error::param("dim", "must be positive"));
    }
    if !is_prime(modulus) {
        return Err(Error::param("modulus", format!("{modulus} is not prime")));
    }
    if !(r > T::one()) {
        return Err(Error::Divergent(format!("generator search needs r > 1, got {r}")));
    }
    let table = DualSumTable::new(modulus, r)?;
    let m = modulus as usize;
    let inv_m = T::one() / T::from_u64(modulus).expect("modulus");
    // running[μ] = ∏_{chosen j} Φ(μ a_j mod m)
    let mut running: Vec<T> = table.phi.clone();
    let mut generator = vec![1i64];
    let mut best_total = running.iter().copied().sum::<T>() * inv_m;
    let tie = T::lit(1e-12);
    for _ in 1..dim {
        let mut best: Option<(usize, T)> = None;
        for a in 1..m {
            let total = running
                .iter()
                .enumerate()
                .map(|(mu, &p)| p * table.phi[(mu * a) % m])
                .sum::<T>()
                * inv_m;
            match best {
                Some((_, b)) if !(total < b - tie * b) => {}
                _ => best = Some((a, total)),
            }
        }
        let (a, total) = best.expect("m >= 2 gives at least one candidate");
        for (mu, p) in running.iter_mut().enumerate() {
            *p = *p * table.phi[(mu * a) % m];
        }
        generator.push(a as i64);
        best_total = total;
    }
    Ok(CbcResult {
        generator,
        dual_sum: best_total - T::one(),
    })
}
