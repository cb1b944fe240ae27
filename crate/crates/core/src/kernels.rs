//! Dirichlet, Fejér, de la Vallée Poussin, dyadic block and Bernoulli kernels.
//!
//! Univariate coefficient sequences are exposed as functions generic over
//! [`Coefficient`], so the rational identities between kernels can be checked
//! exactly with `Ratio<i64>`. Polynomials are always assembled in coefficient
//! space.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{Coefficient, Real};
use crate::trig::TrigPoly;

/// Kernel family and parameters. Dirichlet, Fejér and de la Vallée Poussin
/// kernels are tensorized over `dim` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelSpec {
    Dirichlet { order: usize, dim: usize },
    Fejer { order: usize, dim: usize },
    ValleePoussin { order: usize, dim: usize },
    Block { index: Vec<u32> },
    Bernoulli { r: f64, truncation: usize, dim: usize },
}

impl KernelSpec {
    pub fn build<T: Real>(&self) -> Result<TrigPoly<T>> {
        match self {
            KernelSpec::Dirichlet { order, dim } => tensor_power(&dirichlet(*order), *dim),
            KernelSpec::Fejer { order, dim } => tensor_power(&fejer(*order)?, *dim),
            KernelSpec::ValleePoussin { order, dim } => tensor_power(&vallee_poussin(*order)?, *dim),
            KernelSpec::Block { index } => block_kernel_nd(index),
            KernelSpec::Bernoulli { r, truncation, dim } => bernoulli(T::lit(*r), *truncation, *dim),
        }
    }
}

/// `D̂_j(k)`: one for `|k| <= j`.
pub fn dirichlet_coeff<C: Coefficient>(order: usize, k: i64) -> C {
    if k.unsigned_abs() as usize <= order {
        C::one()
    } else {
        C::zero()
    }
}

/// `K̂_j(k) = 1 - |k|/j` for `|k| < j`.
pub fn fejer_coeff<C: Coefficient>(order: usize, k: i64) -> C {
    let a = k.unsigned_abs() as i64;
    let j = order as i64;
    if a < j {
        C::ratio(j - a, j)
    } else {
        C::zero()
    }
}

/// `V̂_j(k)`, the average of `D̂_l(k)` over `j <= l <= 2j - 1`.
pub fn vallee_poussin_coeff<C: Coefficient>(order: usize, k: i64) -> C {
    let a = k.unsigned_abs() as i64;
    let j = order as i64;
    // number of l in [j, 2j-1] with l >= |k|
    let count = (2 * j - a.max(j)).max(0);
    C::ratio(count, j)
}

/// `Â_s(k)` for the dyadic block kernel of level `s`.
pub fn block_coeff<C: Coefficient>(level: u32, k: i64) -> C {
    match level {
        0 => {
            if k == 0 {
                C::one()
            } else {
                C::zero()
            }
        }
        1 => {
            if k.abs() == 1 {
                C::one()
            } else {
                C::zero()
            }
        }
        s => {
            let hi = 1usize << (s - 1);
            let lo = 1usize << (s - 2);
            vallee_poussin_coeff::<C>(hi, k) - vallee_poussin_coeff::<C>(lo, k)
        }
    }
}

/// Degree of `A_s`: `2^s - 1` (and 0 for `s = 0`).
pub fn block_degree(level: u32) -> usize {
    (1usize << level) - 1
}

fn univariate<T: Real>(degree: usize, coeff: impl Fn(i64) -> T) -> TrigPoly<T> {
    let mut p = TrigPoly::from_fn(&[degree], |k| Complex::new(coeff(k[0]), T::zero())).expect("univariate box");
    p.symmetrize();
    p
}

pub fn dirichlet<T: Real>(order: usize) -> TrigPoly<T> {
    univariate(order, |k| dirichlet_coeff(order, k))
}

pub fn fejer<T: Real>(order: usize) -> Result<TrigPoly<T>> {
    if order == 0 {
        return Err(Error::param("order", "Fejér kernel order must be positive"));
    }
    Ok(univariate(order - 1, |k| fejer_coeff(order, k)))
}

pub fn vallee_poussin<T: Real>(order: usize) -> Result<TrigPoly<T>> {
    if order == 0 {
        return Err(Error::param("order", "de la Vallée Poussin order must be positive"));
    }
    Ok(univariate(2 * order - 1, |k| vallee_poussin_coeff(order, k)))
}

pub fn block_kernel<T: Real>(level: u32) -> Result<TrigPoly<T>> {
    if level > 24 {
        return Err(Error::param("level", "block level above 24 is not supported"));
    }
    Ok(univariate(block_degree(level), |k| block_coeff(level, k)))
}

/// `A_s(x) = A_{s_1}(x_1)···A_{s_d}(x_d)`.
pub fn block_kernel_nd<T: Real>(index: &[u32]) -> Result<TrigPoly<T>> {
    let factors = index.iter().map(|&s| block_kernel(s)).collect::<Result<Vec<_>>>()?;
    tensor(&factors)
}

/// Tensor product of univariate polynomials.
pub fn tensor<T: Real>(factors: &[TrigPoly<T>]) -> Result<TrigPoly<T>> {
    if factors.is_empty() {
        return Err(Error::param("factors", "need at least one factor"));
    }
    if let Some(bad) = factors.iter().find(|f| f.dim() != 1) {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: bad.dim(),
        });
    }
    let degrees: Vec<usize> = factors.iter().map(|f| f.degrees()[0]).collect();
    let mut out = TrigPoly::from_fn(&degrees, |k| {
        k.iter()
            .zip(factors)
            .fold(Complex::new(T::one(), T::zero()), |acc, (&kj, f)| acc * f.coeff(&[kj]))
    })?;
    if factors.iter().all(|f| f.is_real()) {
        out.symmetrize();
    }
    Ok(out)
}

fn tensor_power<T: Real>(factor: &TrigPoly<T>, dim: usize) -> Result<TrigPoly<T>> {
    if dim == 0 {
        return Err(Error::param("dim", "must be positive"));
    }
    tensor(&vec![factor.clone(); dim])
}

fn check_bernoulli<T: Real>(r: T, truncation: usize, dim: usize) -> Result<()> {
    if !(r > T::zero()) || !r.is_finite() {
        return Err(Error::param("r", "Bernoulli smoothness must be positive"));
    }
    if truncation == 0 {
        return Err(Error::param("truncation", "must be at least 1"));
    }
    if dim == 0 {
        return Err(Error::param("dim", "must be positive"));
    }
    Ok(())
}

/// Univariate Bernoulli coefficient `|k|^{-r} e^{-i sign(k) rπ/2}` (1 at 0).
pub fn bernoulli_coeff<T: Real>(r: T, k: i64) -> Complex<T> {
    if k == 0 {
        return Complex::new(T::one(), T::zero());
    }
    let mag = T::from_i64(k.abs()).expect("index").powf(-r);
    let phase = -T::from_i64(k.signum()).expect("sign") * r * T::FRAC_PI_2();
    Complex::from_polar(mag, phase)
}

/// Truncated multivariate Bernoulli kernel `∏_j F_r(x_j)` on `|k_j| <= K`.
pub fn bernoulli<T: Real>(r: T, truncation: usize, dim: usize) -> Result<TrigPoly<T>> {
    check_bernoulli(r, truncation, dim)?;
    let table: Vec<Complex<T>> = (-(truncation as i64)..=truncation as i64)
        .map(|k| bernoulli_coeff(r, k))
        .collect();
    let factor = {
        let mut p = TrigPoly::from_parts(&[truncation], table)?;
        p.symmetrize();
        p
    };
    tensor_power(&factor, dim)
}

/// `Σ_{k=1}^{K} k^{-s}`.
pub(crate) fn partial_zeta<T: Real>(s: T, terms: usize) -> T {
    // summed from the small end for accuracy
    (1..=terms).rev().map(|k| T::from_usize_lossy(k).powf(-s)).sum()
}

/// Integral bound `2 K^{1-s} / (s - 1)` on `Σ_{|k| > K} |k|^{-s}`.
pub(crate) fn integral_tail<T: Real>(s: T, truncation: usize) -> Result<T> {
    if !(s > T::one()) {
        return Err(Error::Divergent(format!(
            "Σ |k|^(-{s}) diverges (exponent must exceed 1)"
        )));
    }
    let k = T::from_usize_lossy(truncation);
    Ok(T::lit(2.0) * k.powf(T::one() - s) / (s - T::one()))
}

/// Bound on the mass `Σ_{k ∉ box} ∏_j max(1,|k_j|)^{-s}` discarded by the box
/// `|k_j| <= K`, composed from per-coordinate integral tails.
pub(crate) fn box_tail<T: Real>(s: T, truncation: usize, dim: usize) -> Result<T> {
    let tail = integral_tail(s, truncation)?;
    let kept = T::one() + T::lit(2.0) * partial_zeta(s, truncation);
    let d = dim as i32;
    Ok(((kept + tail).powi(d) - kept.powi(d)).max(T::zero()))
}

/// Bound on the ℓ2 norm of the Bernoulli coefficients dropped by truncation.
/// Requires `2r > 1`.
pub fn bernoulli_tail_l2<T: Real>(r: T, truncation: usize, dim: usize) -> Result<T> {
    check_bernoulli(r, truncation, dim)?;
    Ok(box_tail(T::lit(2.0) * r, truncation, dim)?.sqrt())
}

/// Bound on the ℓ1 norm of the dropped coefficients, which also bounds the
/// pointwise truncation error. Requires `r > 1`.
pub fn bernoulli_tail_l1<T: Real>(r: T, truncation: usize, dim: usize) -> Result<T> {
    check_bernoulli(r, truncation, dim)?;
    box_tail(r, truncation, dim)
}
