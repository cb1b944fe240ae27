//! Sampling discretization of the squared `L_2` norm: the defect
//! `‖f‖₂² − Σ_j λ_j f(ξ^j)²`, the lower-bound witness built from `(g±1)/2`,
//! the transfer of integration errors to discretization errors, and sampled
//! estimates of the worst defect over an `H^r_p` ball.

use num_complex::Complex;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cubature::{exponential_sums, CubatureRule, ErrorReport};
use crate::dyadic::{sample_h_ball, ClassFamily, ClassSpec};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::trig::{PointSet, TrigPoly};

const REAL_TOL: f64 = 1e-12;

/// Attached to every report in three or more dimensions.
pub const EVIDENCE_ONLY_LABEL: &str = "evidence only: for d >= 3 it is open whether equal-weight \
and arbitrary-weight discretization errors of H-classes share the same order";

fn require_real<T: Real>(f: &TrigPoly<T>) -> Result<()> {
    if f.is_real_valued(T::lit(REAL_TOL)) {
        Ok(())
    } else {
        Err(Error::NotReal)
    }
}

/// `‖f‖₂² − Σ_j λ_j f(ξ^j)²` with the Parseval norm.
fn signed_defect<T: Real>(f: &TrigPoly<T>, rule: &CubatureRule<T>) -> Result<T> {
    let values = f.evaluate(rule.points())?;
    let quad = values
        .iter()
        .zip(rule.weights())
        .map(|(v, &w)| w * v.re * v.re)
        .sum::<T>();
    Ok(f.l2_norm_sq() - quad)
}

/// `|‖f‖₂² − (1/m) Σ_j f(ξ^j)²|` for real `f`.
pub fn disc_error<T: Real>(f: &TrigPoly<T>, points: &PointSet<T>) -> Result<T> {
    disc_error_weighted(f, &CubatureRule::equal_weight(points.clone())?)
}

/// `|‖f‖₂² − Σ_j λ_j f(ξ^j)²|` for real `f` and arbitrary weights.
pub fn disc_error_weighted<T: Real>(f: &TrigPoly<T>, rule: &CubatureRule<T>) -> Result<T> {
    require_real(f)?;
    Ok(num_traits::Float::abs(signed_defect(f, rule)?))
}

/// Defects of `f± = (g ± 1)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness<T> {
    pub d_plus: T,
    pub d_minus: T,
    /// `∫g − Q(g)`.
    pub integration_error: T,
    /// `max(|D⁺|, |D⁻|)`, never below `|∫g − Q(g)| / 2`.
    pub lower_bound: T,
    /// `|D⁺ − D⁻ − (∫g − Q(g))|`.
    pub residual: T,
}

/// Witness for equal weights.
pub fn er_witness<T: Real>(g: &TrigPoly<T>, points: &PointSet<T>) -> Result<Witness<T>> {
    er_witness_weighted(g, &CubatureRule::equal_weight(points.clone())?)
}

pub fn er_witness_weighted<T: Real>(g: &TrigPoly<T>, rule: &CubatureRule<T>) -> Result<Witness<T>> {
    require_real(g)?;
    let half = T::lit(0.5);
    let plus = g.add_constant(T::one()).scale(half);
    let minus = g.add_constant(-T::one()).scale(half);
    let d_plus = signed_defect(&plus, rule)?;
    let d_minus = signed_defect(&minus, rule)?;
    let quad = rule.apply(g)?.re;
    let integration_error = g.mean().re - quad;
    Ok(witness_from(d_plus, d_minus, integration_error))
}

fn witness_from<T: Real>(d_plus: T, d_minus: T, integration_error: T) -> Witness<T> {
    use num_traits::Float;
    Witness {
        d_plus,
        d_minus,
        integration_error,
        lower_bound: Float::abs(d_plus).max(Float::abs(d_minus)),
        residual: Float::abs(d_plus - d_minus - integration_error),
    }
}

/// `a · (κ.value + κ.tail)`: an upper bound on the discretization error of
/// a class whose squares lie in `a` times the class behind `κ`.
pub fn er_upper_transfer<T: Real>(kappa: &ErrorReport<T>, a: T) -> Result<T> {
    if !(a > T::zero()) || !a.is_finite() {
        return Err(Error::param("a", "quasi-algebra parameter must be positive and finite"));
    }
    Ok(a * kappa.upper())
}

/// Which function produced a report's supremum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeKind {
    Constant,
    Sample(usize),
    PlusTransform(usize),
    MinusTransform(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizationReport<T> {
    pub points: usize,
    pub dim: usize,
    pub spec: ClassSpec<T>,
    pub block_cap: u32,
    pub equal_weights: bool,
    /// `disc_error` of each sampled function, in sample order.
    pub errors: Vec<T>,
    /// Largest defect over the samples and the fixed probes.
    pub supremum: T,
    pub argmax: ProbeKind,
    /// Witness of the worst sampled function; its functions need not lie in the ball.
    pub witness: Option<Witness<T>>,
    /// Filled in by [`DiscretizationReport::with_transfer`].
    pub transfer_upper: Option<T>,
    pub label: Option<&'static str>,
}

impl<T: Real> DiscretizationReport<T> {
    pub fn with_transfer(mut self, kappa: &ErrorReport<T>, a: T) -> Result<Self> {
        self.transfer_upper = Some(er_upper_transfer(kappa, a)?);
        Ok(self)
    }

    /// Upper minus lower estimate, when both are known.
    pub fn gap(&self) -> Option<T> {
        self.transfer_upper.map(|u| u - self.supremum)
    }
}

/// Block cap used by [`estimate_er`]: keeps the squared samples' coefficient
/// boxes at a few tens of thousands of entries.
pub fn default_block_cap(dim: usize) -> u32 {
    match dim {
        0..=2 => 6,
        3 => 4,
        _ => 3,
    }
}

/// Seed of sample `i`; independent of the sample count, so suprema are
/// monotone in `n_samples`.
pub fn sample_seed(seed: u64, i: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    rng.next_u64()
}

/// Sampled estimate of `er_m` over the `H^r_p` ball for equal weights.
pub fn estimate_er<T: Real>(points: &PointSet<T>, spec: &ClassSpec<T>, n_samples: usize, seed: u64) -> Result<DiscretizationReport<T>> {
    let rule = CubatureRule::equal_weight(points.clone())?;
    estimate_er_weighted(&rule, spec, n_samples, seed, default_block_cap(points.dim()))
}

/// Sampled estimate for arbitrary weights and an explicit block cap.
pub fn estimate_er_weighted<T: Real>(
    rule: &CubatureRule<T>,
    spec: &ClassSpec<T>,
    n_samples: usize,
    seed: u64,
    cap: u32,
) -> Result<DiscretizationReport<T>> {
    let mut out = estimate_er_batch(std::slice::from_ref(rule), spec, n_samples, seed, cap)?;
    Ok(out.pop().expect("one report per rule"))
}

/// Evaluates the same sampled functions on several rules of one dimension.
///
/// The defect of `f` is `Σ_k (f²)^(k) (δ_{k,0} − G(k))`, so each rule's
/// exponential sums are computed once on the box of `f²` and every sample
/// costs one product and one inner product per rule.
pub fn estimate_er_batch<T: Real>(
    rules: &[CubatureRule<T>],
    spec: &ClassSpec<T>,
    n_samples: usize,
    seed: u64,
    cap: u32,
) -> Result<Vec<DiscretizationReport<T>>> {
    if spec.family != ClassFamily::HoelderH {
        return Err(Error::param("family", "discretization estimates use H-classes"));
    }
    if !spec.embeds_in_continuous() {
        return Err(Error::param("r", "estimates require r > 1/p"));
    }
    let Some(first) = rules.first() else {
        return Ok(Vec::new());
    };
    let dim = first.dim();
    if let Some(bad) = rules.iter().find(|r| r.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.dim(),
        });
    }
    let degree = if cap == 0 { 0 } else { 1usize << (cap - 1) };
    let square_box = vec![2 * degree; dim];
    // δ_{k,0} − G(k) for each rule
    let defects: Vec<Vec<Complex<T>>> = rules
        .par_iter()
        .map(|rule| {
            let g = exponential_sums(rule, &square_box)?;
            let zero = g.index_of(&vec![0; dim]).expect("origin in box");
            Ok(g
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, &c)| if i == zero { Complex::new(T::one(), T::zero()) - c } else { -c })
                .collect())
        })
        .collect::<Result<_>>()?;

    // per sample: signed defect on each rule
    let per_sample: Vec<(TrigPoly<T>, Vec<T>)> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let f = sample_h_ball(spec, dim, cap, sample_seed(seed, i))?.resized(&vec![degree; dim])?;
            let sq = f.mul(&f)?.resized(&square_box)?;
            let values = defects.iter().map(|d| pair(sq.coeffs(), d)).collect();
            Ok((f, values))
        })
        .collect::<Result<_>>()?;

    rules
        .iter()
        .zip(&defects)
        .enumerate()
        .map(|(ri, (rule, delta))| {
            // equal weights integrate constants exactly; skip the rounding in Σ 1/m
            let constant = if rule.is_equal_weight() {
                T::zero()
            } else {
                num_traits::Float::abs(T::one() - rule.weights().iter().copied().sum::<T>())
            };
            let mut supremum = constant;
            let mut argmax = ProbeKind::Constant;
            let mut worst: Option<usize> = None;
            let mut errors = Vec::with_capacity(n_samples);
            for (i, (_, values)) in per_sample.iter().enumerate() {
                let e = num_traits::Float::abs(values[ri]);
                errors.push(e);
                if worst.is_none_or(|w| e > errors[w]) {
                    worst = Some(i);
                }
                if e > supremum {
                    supremum = e;
                    argmax = ProbeKind::Sample(i);
                }
            }
            let witness = match worst {
                Some(i) => {
                    let g = &per_sample[i].0;
                    let g_hat = g.resized(&square_box)?;
                    let d_sq = per_sample[i].1[ri];
                    let d_g = pair(g_hat.coeffs(), delta);
                    let d_one = delta[delta.len() / 2].re;
                    let quarter = T::lit(0.25);
                    let two = T::lit(2.0);
                    let d_plus = quarter * (d_sq + two * d_g + d_one);
                    let d_minus = quarter * (d_sq - two * d_g + d_one);
                    let w = witness_from(d_plus, d_minus, d_g);
                    if num_traits::Float::abs(d_plus) > supremum {
                        supremum = num_traits::Float::abs(d_plus);
                        argmax = ProbeKind::PlusTransform(i);
                    }
                    if num_traits::Float::abs(d_minus) > supremum {
                        supremum = num_traits::Float::abs(d_minus);
                        argmax = ProbeKind::MinusTransform(i);
                    }
                    Some(w)
                }
                None => None,
            };
            Ok(DiscretizationReport {
                points: rule.len(),
                dim,
                spec: *spec,
                block_cap: cap,
                equal_weights: rule.is_equal_weight(),
                errors,
                supremum,
                argmax,
                witness,
                transfer_upper: None,
                label: (dim >= 3).then_some(EVIDENCE_ONLY_LABEL),
            })
        })
        .collect()
}

/// `Re Σ_k a_k b_k` over matching boxes.
fn pair<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    a.iter().zip(b).map(|(x, y)| (x * y).re).sum()
}
