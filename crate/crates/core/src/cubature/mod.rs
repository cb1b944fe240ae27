//! Cubature rules on the torus: rank-1 lattice (Korobov and Fibonacci) rules,
//! Monte Carlo point sets and arbitrary weighted rules, together with
//! dual-lattice enumeration and worst-case error computations.

mod cbc;
mod hurwitz;
mod monte_carlo;
mod worst_case;

use std::collections::HashMap;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use cbc::{cbc_search, is_prime, CbcResult};
pub use hurwitz::hurwitz_zeta;
pub use monte_carlo::{hoeffding_bound, mc_baseline, HoeffdingRow, McBaseline};
pub use worst_case::{
    dual_weight_sum, exponential_sums, lattice_error_closed_form, worst_case_error, worst_case_error_closed_form,
    ErrorReport, Exactness,
};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::trig::{PointSet, TrigPoly};

/// Largest Fibonacci index whose number fits comfortably in 64-bit integers.
pub const FIBONACCI_MAX_INDEX: u32 = 90;

/// `b_n` with `b_0 = b_1 = 1`.
pub fn fibonacci_number(n: u32) -> Result<u64> {
    if n > FIBONACCI_MAX_INDEX {
        return Err(Error::Overflow(format!(
            "Fibonacci index {n} exceeds {FIBONACCI_MAX_INDEX}"
        )));
    }
    let (mut prev, mut cur) = (1i64, 1i64);
    for _ in 1..n {
        let next = prev
            .checked_add(cur)
            .ok_or_else(|| Error::Overflow(format!("b_{n} does not fit in i64")))?;
        prev = cur;
        cur = next;
    }
    Ok(cur as u64)
}

/// Rank-1 lattice `{ μ a / m mod 1 : μ = 1..m }` scaled to the torus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    modulus: u64,
    generator: Vec<i64>,
}

impl Lattice {
    pub fn new(modulus: u64, generator: Vec<i64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::param("modulus", "must be at least 1"));
        }
        if modulus > i64::MAX as u64 {
            return Err(Error::Overflow(format!("modulus {modulus} exceeds i64")));
        }
        if generator.is_empty() {
            return Err(Error::param("generator", "needs at least one component"));
        }
        Ok(Self { modulus, generator })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generator(&self) -> &[i64] {
        &self.generator
    }

    pub fn dim(&self) -> usize {
        self.generator.len()
    }

    /// `k·a mod m` in exact arithmetic.
    pub fn residue(&self, k: &[i64]) -> u64 {
        let m = self.modulus as i128;
        k.iter()
            .zip(&self.generator)
            .fold(0i128, |acc, (&kj, &aj)| (acc + (kj as i128 % m) * (aj as i128 % m)).rem_euclid(m)) as u64
    }

    /// Whether `k` lies in the dual lattice `k·a ≡ 0 (mod m)`.
    pub fn is_dual(&self, k: &[i64]) -> bool {
        k.len() == self.dim() && self.residue(k) == 0
    }

    /// Integer node coordinates `μ a_j mod m`.
    pub fn node_residues(&self, mu: u64) -> Vec<u64> {
        let m = self.modulus as i128;
        self.generator
            .iter()
            .map(|&a| ((mu as i128 % m) * (a as i128).rem_euclid(m)).rem_euclid(m) as u64)
            .collect()
    }

    /// Nodes `2π {μ a / m}` for `μ = 1..m`; the last node is the origin.
    pub fn points<T: Real>(&self) -> PointSet<T> {
        let m = T::from_u64(self.modulus).expect("modulus");
        let mut coords = Vec::with_capacity(self.modulus as usize * self.dim());
        for mu in 1..=self.modulus {
            for res in self.node_residues(mu) {
                coords.push(T::TAU() * (T::from_u64(res).expect("residue") / m));
            }
        }
        PointSet::new(self.dim(), coords).expect("lattice point set")
    }

    /// Calls `visit` for every dual vector with `|k_j| <= bound`.
    pub fn for_each_dual(&self, bound: usize, mut visit: impl FnMut(&[i64])) {
        let m = self.modulus as i128;
        let b = bound as i64;
        let d = self.dim();
        let last = self.generator[d - 1] as i128;
        let mut by_residue: HashMap<u64, Vec<i64>> = HashMap::new();
        for k in -b..=b {
            let r = ((k as i128) * last).rem_euclid(m) as u64;
            by_residue.entry(r).or_default().push(k);
        }
        let mut k = vec![-b; d];
        if d == 1 {
            if let Some(list) = by_residue.get(&0) {
                for &kd in list {
                    k[0] = kd;
                    visit(&k);
                }
            }
            return;
        }
        loop {
            let prefix = k[..d - 1]
                .iter()
                .zip(&self.generator)
                .fold(0i128, |acc, (&kj, &aj)| (acc + kj as i128 * aj as i128).rem_euclid(m));
            let need = ((m - prefix) % m) as u64;
            if let Some(list) = by_residue.get(&need) {
                for &kd in list {
                    k[d - 1] = kd;
                    visit(&k);
                }
            }
            // advance the prefix
            let mut j = d - 1;
            loop {
                if j == 0 {
                    return;
                }
                j -= 1;
                if k[j] < b {
                    k[j] += 1;
                    break;
                }
                k[j] = -b;
            }
        }
    }
}

/// Dual-lattice vectors of a lattice rule inside the box `|k_j| <= bound`.
pub fn dual_lattice<T: Real>(rule: &CubatureRule<T>, bound: usize) -> Result<Vec<Vec<i64>>> {
    let lattice = rule
        .lattice()
        .ok_or_else(|| Error::Precondition("rule has no lattice descriptor".into()))?;
    let mut out = Vec::new();
    lattice.for_each_dual(bound, |k| out.push(k.to_vec()));
    Ok(out)
}

/// Weighted point set `Λ(f) = Σ_j λ_j f(ξ^j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CubatureRule<T> {
    points: PointSet<T>,
    weights: Vec<T>,
    equal_weights: bool,
    lattice: Option<Lattice>,
}

impl<T: Real> CubatureRule<T> {
    pub fn new(points: PointSet<T>, weights: Vec<T>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::param("points", "a rule needs at least one node"));
        }
        if weights.len() != points.len() {
            return Err(Error::param(
                "weights",
                format!("{} weights for {} nodes", weights.len(), points.len()),
            ));
        }
        Ok(Self {
            points,
            weights,
            equal_weights: false,
            lattice: None,
        })
    }

    /// Equal weights `1/m`.
    pub fn equal_weight(points: PointSet<T>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::param("points", "a rule needs at least one node"));
        }
        let w = T::one() / T::from_usize_lossy(points.len());
        let weights = vec![w; points.len()];
        Ok(Self {
            points,
            weights,
            equal_weights: true,
            lattice: None,
        })
    }

    pub fn from_lattice(lattice: Lattice) -> Result<Self> {
        if lattice.modulus() > (1 << 26) {
            return Err(Error::param("modulus", "too many nodes to materialize"));
        }
        let mut rule = Self::equal_weight(lattice.points())?;
        rule.lattice = Some(lattice);
        Ok(rule)
    }

    /// Korobov rule `P_m(·, a)`.
    pub fn korobov(modulus: u64, generator: &[i64]) -> Result<Self> {
        Self::from_lattice(Lattice::new(modulus, generator.to_vec())?)
    }

    /// Fibonacci rule `Φ_n`: `b_n` nodes with generator `(1, b_{n-1})`.
    pub fn fibonacci(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::param("n", "Fibonacci rule index must be at least 2"));
        }
        let m = fibonacci_number(n)?;
        let a = fibonacci_number(n - 1)? as i64;
        Self::korobov(m, &[1, a])
    }

    /// `m` independent uniform nodes with equal weights.
    pub fn uniform_random(m: usize, dim: usize, seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::param("dim", "must be positive"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coords = (0..m * dim)
            .map(|_| T::lit(rng.random::<f64>() * std::f64::consts::TAU))
            .collect();
        Self::equal_weight(PointSet::new(dim, coords)?)
    }

    pub fn points(&self) -> &PointSet<T> {
        &self.points
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.dim()
    }

    pub fn is_equal_weight(&self) -> bool {
        self.equal_weights
    }

    pub fn lattice(&self) -> Option<&Lattice> {
        self.lattice.as_ref()
    }

    /// `Σ_j |λ_j|`, which bounds `|G(k)|` for every `k`.
    pub fn weight_l1(&self) -> T {
        self.weights.iter().map(|w| num_traits::Float::abs(*w)).sum()
    }

    /// `Λ(f) = Σ_j λ_j f(ξ^j)`.
    pub fn apply(&self, f: &TrigPoly<T>) -> Result<Complex<T>> {
        let values = f.evaluate(&self.points)?;
        Ok(values
            .iter()
            .zip(&self.weights)
            .map(|(v, &w)| v * w)
            .sum())
    }

    /// `G(k) = Σ_j λ_j e^{ik·ξ^j}`.
    pub fn exponential_sum(&self, k: &[i64]) -> Result<Complex<T>> {
        if k.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: k.len(),
            });
        }
        Ok(self
            .points
            .iter()
            .zip(&self.weights)
            .map(|(x, &w)| {
                let phase = k
                    .iter()
                    .zip(x)
                    .fold(T::zero(), |acc, (&kj, &xj)| acc + T::from_i64(kj).expect("index") * xj);
                Complex::from_polar(w, phase)
            })
            .sum())
    }
}

/// Free-function form of [`CubatureRule::apply`].
pub fn apply_rule<T: Real>(rule: &CubatureRule<T>, f: &TrigPoly<T>) -> Result<Complex<T>> {
    rule.apply(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::TAU;

    #[test]
    fn fibonacci_numbers() {
        let b: Vec<u64> = (0..8).map(|n| fibonacci_number(n).unwrap()).collect();
        assert_eq!(b, vec![1, 1, 2, 3, 5, 8, 13, 21]);
        assert!(fibonacci_number(90).is_ok());
        assert!(matches!(fibonacci_number(91), Err(Error::Overflow(_))));
    }

    #[test]
    fn fibonacci_four_nodes() {
        let rule = CubatureRule::<f64>::fibonacci(4).unwrap();
        assert_eq!(rule.len(), 5);
        let second: Vec<f64> = rule.points().iter().map(|x| x[1] / TAU).collect();
        for (got, want) in second.iter().zip([0.6, 0.2, 0.8, 0.4, 0.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
        let one = TrigPoly::<f64>::constant(2, 1.0);
        assert_abs_diff_eq!(rule.apply(&one).unwrap().re, 1.0, epsilon = 1e-15);
        assert!(CubatureRule::<f64>::fibonacci(1).is_err());
    }

    #[test]
    fn korobov_matches_fibonacci_and_reduces_generators() {
        let fib = CubatureRule::<f64>::fibonacci(4).unwrap();
        let kor = CubatureRule::<f64>::korobov(5, &[1, 3]).unwrap();
        assert_eq!(fib.points(), kor.points());
        let shifted = CubatureRule::<f64>::korobov(5, &[6, -2]).unwrap();
        assert_eq!(kor.points(), shifted.points());
        let last = kor.points().point(4);
        assert_eq!(last, &[0.0, 0.0]);
    }

    #[test]
    fn dual_membership_and_counting() {
        let lat = Lattice::new(5, vec![1, 3]).unwrap();
        assert!(lat.is_dual(&[1, -2]));
        assert!(lat.is_dual(&[0, 0]));
        assert!(!lat.is_dual(&[1, 0]));
        // 15 = 3·5 points per axis: exactly 1/5 of the box is dual
        let mut count = 0usize;
        lat.for_each_dual(7, |k| {
            assert!(lat.is_dual(k));
            count += 1;
        });
        assert_eq!(count * 5, 15 * 15);
        let lat3 = Lattice::new(7, vec![1, 2, 3]).unwrap();
        let mut count = 0usize;
        lat3.for_each_dual(3, |_| count += 1);
        assert_eq!(count * 7, 7 * 7 * 7);
    }

    #[test]
    fn dual_enumeration_matches_brute_force() {
        let lat = Lattice::new(13, vec![1, 5, 8]).unwrap();
        let mut fast = Vec::new();
        lat.for_each_dual(6, |k| fast.push(k.to_vec()));
        let mut brute = Vec::new();
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                for c in -6i64..=6 {
                    if (a + 5 * b + 8 * c).rem_euclid(13) == 0 {
                        brute.push(vec![a, b, c]);
                    }
                }
            }
        }
        fast.sort();
        brute.sort();
        assert_eq!(fast, brute);
    }

    #[test]
    fn exponential_sums_on_lattices() {
        let rule = CubatureRule::<f64>::fibonacci(6).unwrap();
        assert_eq!(rule.len(), 13);
        let e = TrigPoly::<f64>::exponential(&[1, 0]).unwrap();
        assert!(rule.apply(&e).unwrap().norm() < 1e-14);
        let g0 = rule.exponential_sum(&[0, 0]).unwrap();
        assert_abs_diff_eq!(g0.re, 1.0, epsilon = 1e-14);
        // (1, -8)·(1, 8) = -63 ≢ 0, (5, -1)·(1, 8) = -3 ≢ 0, (8, -1)·(1,8) = 0
        assert_abs_diff_eq!(rule.exponential_sum(&[8, -1]).unwrap().re, 1.0, epsilon = 1e-13);
        assert!(rule.exponential_sum(&[5, -1]).unwrap().norm() < 1e-13);
    }

    #[test]
    fn random_rules_are_reproducible() {
        let a = CubatureRule::<f64>::uniform_random(50, 3, 9).unwrap();
        let b = CubatureRule::<f64>::uniform_random(50, 3, 9).unwrap();
        assert_eq!(a, b);
        assert!(a.points().coords().iter().all(|&x| (0.0..TAU).contains(&x)));
        assert_abs_diff_eq!(a.weights().iter().sum::<f64>(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn constant_weighted_sum() {
        let pts = PointSet::from_points(1, &[vec![0.1], vec![2.0], vec![4.0]]).unwrap();
        let rule = CubatureRule::new(pts, vec![0.5, 0.25, 0.5]).unwrap();
        let c = TrigPoly::<f64>::constant(1, 3.0);
        assert_abs_diff_eq!(rule.apply(&c).unwrap().re, 3.75, epsilon = 1e-14);
        assert!(rule.lattice().is_none());
        assert!(dual_lattice(&rule, 4).is_err());
    }
}
