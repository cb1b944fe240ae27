//! Worst-case integration errors of a fixed rule over the Sobolev class
//! `W^r_2` and the Fourier hull class.
//!
//! With `G(k) = Σ_j λ_j e^{ik·ξ^j}` and `w_s(k) = ∏_j max(1,|k_j|)^{-s}`:
//!
//! * `W^r_2 B`: `f = φ ∗ F_r` with `‖φ‖_2 <= B`, so `f̂(k) = φ̂(k) F̂_r(k)` and
//!   by Cauchy–Schwarz the error supremum is
//!   `B (Σ_{k≠0} w_{2r}(k) |G(k)|² + |1 - G(0)|²)^{1/2}`.
//! * Fourier hull `|f̂(k)| <= B w_r(k)`: the supremum is attained coefficientwise,
//!   giving `B (Σ_{k≠0} w_r(k) |G(k)| + |1 - G(0)|)`.
//!
//! For an equal-weight rank-1 lattice `G(k)` is the indicator of the dual
//! lattice, so both reduce to dual sums `Σ_{k ∈ L^⊥ \ 0} w_s(k)`. Those are
//! computed either by enumerating the dual lattice in a box (with an integral
//! tail bound), or in closed form from the periodized weights
//! `Z(c) = Σ_{k ≡ c (mod m)} w_s(k)`, expressed with Hurwitz zeta values, and
//! the character sum `Σ_{k∈L^⊥} w_s(k) = m^{-1} Σ_μ ∏_j Φ(μ a_j mod m)` where
//! `Φ` is the discrete Fourier transform of `Z`.

use num_complex::Complex;
use rustfft::FftPlanner;

use super::hurwitz::hurwitz_zeta;
use super::{CubatureRule, Lattice};
use crate::dyadic::{ClassFamily, ClassSpec};
use crate::error::{Error, Result};
use crate::kernels::box_tail;
use crate::scalar::Real;
use crate::trig::TrigPoly;

/// How an [`ErrorReport`] value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exactness {
    /// Full infinite dual sum; `tail` only covers floating-point rounding.
    ClosedForm,
    /// Dual-lattice sum truncated to a box.
    DualTruncated,
    /// Exponential sums of a general rule truncated to a box.
    GeneralTruncated,
    /// Supremum over sampled functions.
    Empirical,
}

impl std::fmt::Display for Exactness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Exactness::ClosedForm => "closed_form",
            Exactness::DualTruncated => "dual_truncated",
            Exactness::GeneralTruncated => "general_truncated",
            Exactness::Empirical => "empirical",
        })
    }
}

/// Worst-case error with an enclosure: the true value lies in
/// `[value, value + tail]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport<T> {
    pub value: T,
    /// Box half-width `K`, when the sum was truncated.
    pub truncation: Option<usize>,
    pub tail: T,
    pub exactness: Exactness,
}

impl<T: Real> ErrorReport<T> {
    pub fn upper(&self) -> T {
        self.value + self.tail
    }
}

/// Weight exponent `s` of the dual sum and whether the error is its square root.
fn class_exponent<T: Real>(spec: &ClassSpec<T>) -> Result<(T, bool)> {
    match spec.family {
        ClassFamily::SobolevW => {
            if spec.p != T::lit(2.0) {
                return Err(Error::param("p", "Sobolev worst-case errors are computed for p = 2 only"));
            }
            let s = T::lit(2.0) * spec.r;
            if !(s > T::one()) {
                return Err(Error::Divergent(format!("W^r_2 needs 2r > 1, got r = {}", spec.r)));
            }
            Ok((s, true))
        }
        ClassFamily::FourierHull => {
            if !(spec.r > T::one()) {
                return Err(Error::Divergent(format!("Fourier hull needs r > 1, got r = {}", spec.r)));
            }
            Ok((spec.r, false))
        }
        ClassFamily::HoelderH => Err(Error::param(
            "family",
            "no closed worst-case formula for H-classes; use sampled estimates",
        )),
    }
}

fn weight_table<T: Real>(s: T, bound: usize) -> Vec<T> {
    (0..=bound).map(|k| T::from_usize_lossy(k.max(1)).powf(-s)).collect()
}

/// `G(k)` for every `|k_j| <= degrees[j]`, stored as polynomial coefficients.
pub fn exponential_sums<T: Real>(rule: &CubatureRule<T>, degrees: &[usize]) -> Result<TrigPoly<T>> {
    if degrees.len() != rule.dim() {
        return Err(Error::DimensionMismatch {
            expected: rule.dim(),
            found: degrees.len(),
        });
    }
    let mut acc = TrigPoly::<T>::zeros(degrees)?.coeffs().to_vec();
    let mut cur: Vec<Complex<T>> = Vec::with_capacity(acc.len());
    let mut next: Vec<Complex<T>> = Vec::with_capacity(acc.len());
    let (&last, leading) = degrees.split_last().expect("dimension checked above");
    let row = 2 * last + 1;
    let table = |n: usize, xj: T| -> Vec<Complex<T>> {
        (-(n as i64)..=n as i64)
            .map(|k| Complex::from_polar(T::one(), T::from_i64(k).expect("index") * xj))
            .collect()
    };
    for (x, &w) in rule.points().iter().zip(rule.weights()) {
        cur.clear();
        cur.push(Complex::new(w, T::zero()));
        for (&n, &xj) in leading.iter().zip(x) {
            let t = table(n, xj);
            next.clear();
            for &c in &cur {
                next.extend(t.iter().map(|&v| c * v));
            }
            std::mem::swap(&mut cur, &mut next);
        }
        // the last axis goes straight into the accumulator
        let t = table(last, x[x.len() - 1]);
        for (&c, out) in cur.iter().zip(acc.chunks_exact_mut(row)) {
            for (a, &v) in out.iter_mut().zip(&t) {
                *a = *a + c * v;
            }
        }
    }
    TrigPoly::from_parts(degrees, acc)
}

/// Worst-case error of `rule` over the class, truncated to `|k_j| <= bound`.
/// Equal-weight lattice rules use dual-lattice enumeration; other rules use
/// exponential sums over the full box (cost `m · (2K+1)^d`).
pub fn worst_case_error<T: Real>(rule: &CubatureRule<T>, spec: &ClassSpec<T>, bound: usize) -> Result<ErrorReport<T>> {
    let (s, root) = class_exponent(spec)?;
    if bound == 0 {
        return Err(Error::param("truncation", "must be at least 1"));
    }
    let d = rule.dim();
    let w = weight_table(s, bound);
    let (sum, exactness, lambda) = match rule.lattice() {
        Some(lattice) if rule.is_equal_weight() => {
            let mut sum = T::zero();
            lattice.for_each_dual(bound, |k| {
                if k.iter().any(|&v| v != 0) {
                    sum = sum + k.iter().fold(T::one(), |acc, &kj| acc * w[kj.unsigned_abs() as usize]);
                }
            });
            (sum, Exactness::DualTruncated, T::one())
        }
        _ => {
            let g = exponential_sums(rule, &vec![bound; d])?;
            let mut sum = T::zero();
            for (k, gk) in g.iter() {
                let defect = if k.iter().all(|&v| v == 0) {
                    (Complex::new(T::one(), T::zero()) - gk).norm()
                } else {
                    gk.norm()
                };
                let weight = if k.iter().all(|&v| v == 0) {
                    T::one()
                } else {
                    k.iter().fold(T::one(), |acc, &kj| acc * w[kj.unsigned_abs() as usize])
                };
                sum = sum + weight * if root { defect * defect } else { defect };
            }
            (sum, Exactness::GeneralTruncated, rule.weight_l1())
        }
    };
    let mass = box_tail(s, bound, d)?;
    let (value, tail) = if root {
        (sum.sqrt(), lambda * mass.sqrt())
    } else {
        (sum, lambda * mass)
    };
    Ok(ErrorReport {
        value: spec.radius * value,
        truncation: Some(bound),
        tail: spec.radius * tail,
        exactness,
    })
}

/// `Z(c) = Σ_{k ≡ c (mod m)} max(1,|k|)^{-s}` for `c = 0..m`.
fn periodized_weights<T: Real>(m: u64, s: T) -> Result<Vec<T>> {
    let mf = T::from_u64(m).expect("modulus");
    let scale = mf.powf(-s);
    let full = hurwitz_zeta(s, T::one())?;
    (0..m)
        .map(|c| {
            if c == 0 {
                Ok(T::one() + T::lit(2.0) * scale * full)
            } else {
                let q = T::from_u64(c).expect("residue") / mf;
                let q_neg = T::from_u64(m - c).expect("residue") / mf;
                Ok(scale * (hurwitz_zeta(s, q)? + hurwitz_zeta(s, q_neg)?))
            }
        })
        .collect()
}

/// `Φ(ν) = Σ_k max(1,|k|)^{-s} e^{2πi νk/m}` for `ν = 0..m`.
fn character_table<T: Real>(m: u64, s: T) -> Result<Vec<T>> {
    let z = periodized_weights(m, s)?;
    let mut buf: Vec<Complex<T>> = z.iter().map(|&v| Complex::new(v, T::zero())).collect();
    let fft = FftPlanner::new().plan_fft_forward(buf.len());
    fft.process(&mut buf);
    Ok(buf.into_iter().map(|c| c.re).collect())
}

pub(crate) struct DualSumTable<T> {
    pub(crate) phi: Vec<T>,
    pub(crate) modulus: u64,
}

impl<T: Real> DualSumTable<T> {
    pub(crate) fn new(m: u64, s: T) -> Result<Self> {
        if !(s > T::one()) {
            return Err(Error::Divergent(format!("dual sums need exponent > 1, got {s}")));
        }
        if m > (1 << 24) {
            return Err(Error::param("modulus", "closed-form dual sums support m <= 2^24"));
        }
        Ok(Self {
            phi: character_table(m, s)?,
            modulus: m,
        })
    }

    /// `Σ_{k ∈ L^⊥} w_s(k)` including `k = 0`.
    pub(crate) fn full_sum(&self, generator: &[i64]) -> T {
        let m = self.modulus as i128;
        let a: Vec<i128> = generator.iter().map(|&v| (v as i128).rem_euclid(m)).collect();
        let mut total = T::zero();
        for mu in 0..m {
            let prod = a
                .iter()
                .fold(T::one(), |acc, &aj| acc * self.phi[((mu * aj) % m) as usize]);
            total = total + prod;
        }
        total / T::from_u64(self.modulus).expect("modulus")
    }

    /// Rounding allowance for a dual sum in `dim` dimensions.
    pub(crate) fn rounding(&self, dim: usize) -> T {
        let peak = self.phi[0];
        let terms = T::from_u64(self.modulus).expect("modulus").log2() + T::from_usize_lossy(4 * dim + 8);
        T::lit(16.0) * T::epsilon() * peak.powi(dim as i32) * terms
    }
}

/// `Σ_{k ∈ L^⊥} ∏_j max(1,|k_j|)^{-s}` over the whole dual lattice (including
/// the origin), in closed form. Requires `s > 1`.
pub fn dual_weight_sum<T: Real>(lattice: &Lattice, s: T) -> Result<T> {
    Ok(DualSumTable::new(lattice.modulus(), s)?.full_sum(lattice.generator()))
}

/// Untruncated worst-case error of an equal-weight lattice rule.
pub fn worst_case_error_closed_form<T: Real>(rule: &CubatureRule<T>, spec: &ClassSpec<T>) -> Result<ErrorReport<T>> {
    let lattice = match rule.lattice() {
        Some(l) if rule.is_equal_weight() => l,
        _ => {
            return Err(Error::Precondition(
                "closed-form errors need an equal-weight lattice rule".into(),
            ))
        }
    };
    lattice_error_closed_form(lattice, spec)
}

/// As [`worst_case_error_closed_form`], without materializing the nodes.
pub fn lattice_error_closed_form<T: Real>(lattice: &Lattice, spec: &ClassSpec<T>) -> Result<ErrorReport<T>> {
    let (s, root) = class_exponent(spec)?;
    let table = DualSumTable::new(lattice.modulus(), s)?;
    let excess = table.full_sum(lattice.generator()) - T::one();
    let slack = table.rounding(lattice.dim());
    let lo = (excess - slack).max(T::zero());
    let hi = excess + slack;
    let (value, upper) = if root { (lo.sqrt(), hi.sqrt()) } else { (lo, hi) };
    Ok(ErrorReport {
        value: spec.radius * value,
        truncation: None,
        tail: spec.radius * (upper - value),
        exactness: Exactness::ClosedForm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trig::PointSet;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn single_node() -> CubatureRule<f64> {
        CubatureRule::new(PointSet::new(1, vec![0.0]).unwrap(), vec![1.0]).unwrap()
    }

    #[test]
    fn single_node_sobolev_converges_to_pi_over_sqrt3() {
        let spec = ClassSpec::sobolev(1.0).unwrap();
        let limit = PI / 3f64.sqrt();
        let mut prev = 0.0;
        for k in [8, 64, 512, 4096] {
            let rep = worst_case_error(&single_node(), &spec, k).unwrap();
            assert_eq!(rep.exactness, Exactness::GeneralTruncated);
            assert!(rep.value >= prev);
            assert!(rep.value <= limit && limit <= rep.upper(), "{rep:?}");
            prev = rep.value;
        }
        assert_abs_diff_eq!(limit, 1.81380, epsilon = 1e-5);
        // a one-node lattice gives the same number in closed form
        let lat = CubatureRule::<f64>::korobov(1, &[1]).unwrap();
        let exact = worst_case_error_closed_form(&lat, &spec).unwrap();
        assert_abs_diff_eq!(exact.value, limit, epsilon = 1e-12);
    }

    #[test]
    fn exact_rules_have_zero_error_on_their_box() {
        // m equispaced nodes integrate every |k| < m exactly
        let rule = CubatureRule::<f64>::korobov(9, &[1]).unwrap();
        let spec = ClassSpec::fourier_hull(2.0, 1.0).unwrap();
        let rep = worst_case_error(&rule, &spec, 8).unwrap();
        assert_eq!(rep.value, 0.0);
        let general = CubatureRule::new(rule.points().clone(), rule.weights().to_vec()).unwrap();
        let rep = worst_case_error(&general, &spec, 8).unwrap();
        assert!(rep.value < 1e-12);
    }

    #[test]
    fn dual_and_general_paths_agree() {
        let rule = CubatureRule::<f64>::fibonacci(10).unwrap();
        let general = CubatureRule::new(rule.points().clone(), rule.weights().to_vec()).unwrap();
        let spec = ClassSpec::fourier_hull(1.5, 1.0).unwrap();
        let a = worst_case_error(&rule, &spec, 40).unwrap();
        let b = worst_case_error(&general, &spec, 40).unwrap();
        assert_eq!(a.exactness, Exactness::DualTruncated);
        assert!((a.value - b.value).abs() <= a.tail);
        assert!((a.value - b.value).abs() < 1e-10);
        let exact = worst_case_error_closed_form(&rule, &spec).unwrap();
        assert!(a.value <= exact.upper() && exact.value <= a.upper());
    }

    #[test]
    fn truncated_values_increase_towards_closed_form() {
        let rule = CubatureRule::<f64>::korobov(31, &[1, 12]).unwrap();
        for spec in [ClassSpec::sobolev(0.75).unwrap(), ClassSpec::fourier_hull(1.2, 2.0).unwrap()] {
            let exact = worst_case_error_closed_form(&rule, &spec).unwrap();
            let mut prev = 0.0;
            for k in [4, 16, 64, 256] {
                let rep = worst_case_error(&rule, &spec, k).unwrap();
                assert!(rep.value >= prev);
                assert!(rep.value <= exact.upper() + 1e-12);
                assert!(exact.value <= rep.upper() + 1e-12);
                prev = rep.value;
            }
        }
    }

    #[test]
    fn dual_weight_sum_matches_enumeration() {
        let lat = Lattice::new(7, vec![1, 3]).unwrap();
        let s = 3.0;
        let exact: f64 = dual_weight_sum(&lat, s).unwrap();
        let k = 2000;
        let mut sum = 0.0;
        let w = weight_table(s, k);
        lat.for_each_dual(k, |v| sum += w[v[0].unsigned_abs() as usize] * w[v[1].unsigned_abs() as usize]);
        let tail = box_tail(s, k, 2).unwrap();
        assert!(sum <= exact + 1e-12 && exact <= sum + tail + 1e-12, "{sum} {exact} {tail}");
    }

    #[test]
    fn parameter_validation() {
        let rule = CubatureRule::<f64>::fibonacci(5).unwrap();
        let w = ClassSpec::sobolev(0.5).unwrap();
        assert!(matches!(worst_case_error(&rule, &w, 8), Err(Error::Divergent(_))));
        let fh = ClassSpec::fourier_hull(1.0, 1.0).unwrap();
        assert!(matches!(worst_case_error(&rule, &fh, 8), Err(Error::Divergent(_))));
        let h = ClassSpec::hoelder(1.5, 2.0, 1.0).unwrap();
        assert!(worst_case_error(&rule, &h, 8).is_err());
        let w3 = ClassSpec::new(ClassFamily::SobolevW, 1.0, 3.0, 1.0, 0.0).unwrap();
        assert!(worst_case_error(&rule, &w3, 8).is_err());
        let random = CubatureRule::<f64>::uniform_random(5, 2, 0).unwrap();
        let fh = ClassSpec::fourier_hull(1.5, 1.0).unwrap();
        assert!(worst_case_error_closed_form(&random, &fh).is_err());
    }
}
