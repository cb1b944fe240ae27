//! Multivariate trigonometric polynomials on the torus `[0, 2π)^d`.
//!
//! All integrals use the normalized measure `dx / (2π)^d`, so the exponentials
//! `e^{ik·x}` are orthonormal and the `k = 0` coefficient is the mean.

mod fft;
mod grid;
pub mod io;
mod points;

use std::ops::{Add, Neg, Sub};

use num_complex::Complex;
use num_traits::Zero;
use rustfft::FftDirection;

pub use grid::GridFunction;
pub use points::PointSet;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest number of stored coefficients a single polynomial may hold.
pub const MAX_COEFFS: usize = 1 << 26;

/// Default oversampling factor for quadrature-based norms.
pub const DEFAULT_OVERSAMPLE: usize = 8;

/// A trigonometric polynomial `Σ_k c_k e^{ik·x}` with coefficients stored
/// densely on the box `|k_j| <= N_j`.
///
/// The `real` flag records that the coefficients are conjugate symmetric
/// (`c_{-k} = conj(c_k)`), i.e. that the polynomial takes real values.
/// Operations that preserve realness keep the flag and re-symmetrize exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly<T> {
    degrees: Vec<usize>,
    coeffs: Vec<Complex<T>>,
    real: bool,
}

/// A norm value together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norm<T> {
    pub value: T,
    /// `true` for closed-form values (Parseval), `false` for grid quadrature.
    pub exact: bool,
}

fn box_len(degrees: &[usize]) -> Result<usize> {
    if degrees.is_empty() {
        return Err(Error::param("degrees", "dimension must be positive"));
    }
    let len = degrees.iter().try_fold(1usize, |acc, &n| {
        n.checked_mul(2)
            .and_then(|v| v.checked_add(1))
            .and_then(|v| acc.checked_mul(v))
    });
    match len {
        Some(len) if len <= MAX_COEFFS => Ok(len),
        Some(len) => Err(Error::BoxTooLarge(len)),
        None => Err(Error::BoxTooLarge(usize::MAX)),
    }
}

fn zero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

impl<T: Real> TrigPoly<T> {
    pub fn zeros(degrees: &[usize]) -> Result<Self> {
        let len = box_len(degrees)?;
        Ok(Self {
            degrees: degrees.to_vec(),
            coeffs: vec![zero(); len],
            real: true,
        })
    }

    pub fn constant(dim: usize, value: T) -> Self {
        let mut p = Self::zeros(&vec![0; dim.max(1)]).expect("constant box");
        p.coeffs[0] = Complex::new(value, T::zero());
        p
    }

    /// The single exponential `e^{ik·x}`.
    pub fn exponential(k: &[i64]) -> Result<Self> {
        let degrees: Vec<usize> = k.iter().map(|v| v.unsigned_abs() as usize).collect();
        let mut p = Self::zeros(&degrees)?;
        p.set(k, Complex::new(T::one(), T::zero()))?;
        p.real = k.iter().all(|&v| v == 0);
        Ok(p)
    }

    /// Builds a polynomial by evaluating `f` at every multi-index of the box.
    /// The result is not flagged real; use [`TrigPoly::into_real`] for that.
    pub fn from_fn(degrees: &[usize], mut f: impl FnMut(&[i64]) -> Complex<T>) -> Result<Self> {
        let len = box_len(degrees)?;
        let mut coeffs = Vec::with_capacity(len);
        let mut k: Vec<i64> = degrees.iter().map(|&n| -(n as i64)).collect();
        for _ in 0..len {
            coeffs.push(f(&k));
            advance(&mut k, degrees);
        }
        Ok(Self {
            degrees: degrees.to_vec(),
            coeffs,
            real: false,
        })
    }

    pub fn from_parts(degrees: &[usize], coeffs: Vec<Complex<T>>) -> Result<Self> {
        let len = box_len(degrees)?;
        if coeffs.len() != len {
            return Err(Error::param(
                "coeffs",
                format!("expected {len} coefficients, found {}", coeffs.len()),
            ));
        }
        Ok(Self {
            degrees: degrees.to_vec(),
            coeffs,
            real: false,
        })
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Whether the polynomial is flagged real-valued.
    pub fn is_real(&self) -> bool {
        self.real
    }

    /// Flat storage index of `k`, or `None` outside the box.
    pub fn index_of(&self, k: &[i64]) -> Option<usize> {
        if k.len() != self.dim() {
            return None;
        }
        let mut idx = 0usize;
        for (&kj, &n) in k.iter().zip(&self.degrees) {
            if kj.unsigned_abs() as usize > n {
                return None;
            }
            idx = idx * (2 * n + 1) + (kj + n as i64) as usize;
        }
        Some(idx)
    }

    /// Multi-index stored at flat position `idx`.
    pub fn multi_index(&self, idx: usize) -> Vec<i64> {
        let mut k = vec![0i64; self.dim()];
        let mut rest = idx;
        for j in (0..self.dim()).rev() {
            let n = 2 * self.degrees[j] + 1;
            k[j] = (rest % n) as i64 - self.degrees[j] as i64;
            rest /= n;
        }
        k
    }

    /// Coefficient at `k`; zero outside the box.
    pub fn coeff(&self, k: &[i64]) -> Complex<T> {
        self.index_of(k).map_or_else(zero, |i| self.coeffs[i])
    }

    /// Sets one coefficient. Clears the real flag.
    pub fn set(&mut self, k: &[i64], value: Complex<T>) -> Result<()> {
        let idx = self.index_of(k).ok_or_else(|| {
            Error::param("k", format!("{k:?} lies outside the box {:?}", self.degrees))
        })?;
        self.coeffs[idx] = value;
        self.real = false;
        Ok(())
    }

    /// Iterates over `(k, c_k)` for every stored coefficient.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<i64>, Complex<T>)> + '_ {
        let mut k: Vec<i64> = self.degrees.iter().map(|&n| -(n as i64)).collect();
        self.coeffs.iter().map(move |&c| {
            let out = k.clone();
            advance(&mut k, &self.degrees);
            (out, c)
        })
    }

    pub fn max_abs_coeff(&self) -> T {
        self.coeffs.iter().map(|c| c.norm()).fold(T::zero(), T::max)
    }

    /// Largest `|c_k - conj(c_{-k})|` over the box.
    pub fn symmetry_defect(&self) -> T {
        // Box is symmetric, so -k sits at the mirrored flat index.
        let n = self.coeffs.len();
        (0..n)
            .map(|i| (self.coeffs[i] - self.coeffs[n - 1 - i].conj()).norm())
            .fold(T::zero(), T::max)
    }

    pub fn is_conjugate_symmetric(&self, tol: T) -> bool {
        self.symmetry_defect() <= tol
    }

    /// Projects onto the conjugate-symmetric part and sets the real flag.
    pub(crate) fn symmetrize(&mut self) {
        let n = self.coeffs.len();
        let half = T::lit(0.5);
        for i in 0..n.div_ceil(2) {
            let j = n - 1 - i;
            let v = (self.coeffs[i] + self.coeffs[j].conj()) * half;
            self.coeffs[i] = v;
            self.coeffs[j] = v.conj();
        }
        self.real = true;
    }

    /// Checks conjugate symmetry to `tol` (relative to the largest
    /// coefficient), symmetrizes exactly and flags the result real.
    pub fn into_real(mut self, tol: T) -> Result<Self> {
        let scale = self.max_abs_coeff().max(T::one());
        if self.symmetry_defect() > tol * scale {
            return Err(Error::NotReal);
        }
        self.symmetrize();
        Ok(self)
    }

    /// True if flagged real or numerically conjugate symmetric.
    pub fn is_real_valued(&self, tol: T) -> bool {
        self.real || self.symmetry_defect() <= tol * self.max_abs_coeff().max(T::one())
    }

    /// Copy of the polynomial on a different box (truncating or zero-padding).
    pub fn resized(&self, degrees: &[usize]) -> Result<Self> {
        if degrees.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: degrees.len(),
            });
        }
        let mut out = Self::from_fn(degrees, |k| self.coeff(k))?;
        out.real = self.real;
        Ok(out)
    }

    /// Smallest box containing every coefficient with `|c_k| > tol`.
    pub fn support_degrees(&self, tol: T) -> Vec<usize> {
        let mut deg = vec![0usize; self.dim()];
        for (k, c) in self.iter() {
            if c.norm() > tol {
                for (d, kj) in deg.iter_mut().zip(&k) {
                    *d = (*d).max(kj.unsigned_abs() as usize);
                }
            }
        }
        deg
    }

    /// Multiplies every coefficient by `multiplier(k)`; the real flag is kept
    /// only when `keeps_real` is set by the caller.
    pub fn map_coeffs(&self, keeps_real: bool, mut multiplier: impl FnMut(&[i64]) -> Complex<T>) -> Self {
        let mut k: Vec<i64> = self.degrees.iter().map(|&n| -(n as i64)).collect();
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| {
                let v = c * multiplier(&k);
                advance(&mut k, &self.degrees);
                v
            })
            .collect();
        let mut out = Self {
            degrees: self.degrees.clone(),
            coeffs,
            real: false,
        };
        if keeps_real && self.real {
            out.symmetrize();
        }
        out
    }

    pub fn scale(&self, c: T) -> Self {
        Self {
            degrees: self.degrees.clone(),
            coeffs: self.coeffs.iter().map(|&v| v * c).collect(),
            real: self.real,
        }
    }

    pub fn scale_complex(&self, c: Complex<T>) -> Self {
        Self {
            degrees: self.degrees.clone(),
            coeffs: self.coeffs.iter().map(|&v| v * c).collect(),
            real: self.real && c.im == T::zero(),
        }
    }

    pub fn add_constant(&self, c: T) -> Self {
        let mut out = self.clone();
        let mid = out.coeffs.len() / 2;
        out.coeffs[mid].re = out.coeffs[mid].re + c;
        out
    }

    /// The complex conjugate function, `k ↦ conj(c_{-k})`.
    pub fn conj(&self) -> Self {
        Self {
            degrees: self.degrees.clone(),
            coeffs: self.coeffs.iter().rev().map(|c| c.conj()).collect(),
            real: self.real,
        }
    }

    fn combine(&self, other: &Self, sign: T) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let degrees: Vec<usize> = self
            .degrees
            .iter()
            .zip(&other.degrees)
            .map(|(&a, &b)| a.max(b))
            .collect();
        let mut out = if degrees == self.degrees {
            self.clone()
        } else {
            self.resized(&degrees)?
        };
        for (k, c) in other.iter() {
            let idx = out.index_of(&k).expect("k inside union box");
            out.coeffs[idx] = out.coeffs[idx] + c * sign;
        }
        out.real = self.real && other.real;
        Ok(out)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.combine(other, T::one())
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -T::one())
    }

    /// Product `f·g` computed by sampling both factors on an alias-free grid.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let degrees: Vec<usize> = self
            .degrees
            .iter()
            .zip(&other.degrees)
            .map(|(&a, &b)| a + b)
            .collect();
        box_len(&degrees)?;
        let sizes: Vec<usize> = degrees.iter().map(|&n| 2 * n + 1).collect();
        let a = self.sample(&sizes)?;
        let b = other.sample(&sizes)?;
        let values: Vec<Complex<T>> = a.values().iter().zip(b.values()).map(|(x, y)| x * y).collect();
        let mut out = GridFunction::new(sizes, values)?.forward_coeffs(&degrees)?;
        if self.real && other.real {
            out.symmetrize();
        } else {
            out.real = false;
        }
        Ok(out)
    }

    /// Product `f·g` by direct convolution of the coefficient arrays.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let degrees: Vec<usize> = self
            .degrees
            .iter()
            .zip(&other.degrees)
            .map(|(&a, &b)| a + b)
            .collect();
        let mut out = Self::zeros(&degrees)?;
        let rhs: Vec<(Vec<i64>, Complex<T>)> = other.iter().filter(|(_, c)| !c.is_zero()).collect();
        let mut sum = vec![0i64; self.dim()];
        for (k, a) in self.iter() {
            if a.is_zero() {
                continue;
            }
            for (l, b) in &rhs {
                for j in 0..sum.len() {
                    sum[j] = k[j] + l[j];
                }
                let idx = out.index_of(&sum).expect("sum inside product box");
                out.coeffs[idx] = out.coeffs[idx] + a * b;
            }
        }
        out.real = self.real && other.real;
        Ok(out)
    }

    /// The mean `∫ f dμ`, i.e. the zero coefficient.
    pub fn mean(&self) -> Complex<T> {
        self.coeffs[self.coeffs.len() / 2]
    }

    /// `Σ_k |c_k|^2`, which equals `‖f‖_2^2` under the normalized measure.
    pub fn l2_norm_sq(&self) -> T {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `‖f‖_p` for `p ∈ [1, ∞]`. `p = 2` is exact; other exponents use the
    /// uniform grid with `oversample·(2N_j + 1)` nodes per axis.
    pub fn lp_norm(&self, p: T, oversample: usize) -> Result<Norm<T>> {
        if p.is_nan() || p < T::one() {
            return Err(Error::param("p", "exponent must lie in [1, ∞]"));
        }
        if oversample < 2 {
            return Err(Error::param("oversample", "must be at least 2"));
        }
        if p == T::lit(2.0) {
            return Ok(Norm {
                value: self.l2_norm_sq().sqrt(),
                exact: true,
            });
        }
        let sizes: Vec<usize> = self.degrees.iter().map(|&n| oversample * (2 * n + 1)).collect();
        let grid = self.sample(&sizes)?;
        let abs = grid.values().iter().map(|v| v.norm());
        let value = if p.is_infinite() {
            abs.fold(T::zero(), T::max)
        } else {
            let n = T::from_usize_lossy(grid.len());
            (abs.map(|a| a.powf(p)).sum::<T>() / n).powf(p.recip())
        };
        Ok(Norm { value, exact: false })
    }

    /// Samples on the uniform grid of the given sizes (any size is allowed;
    /// sampling itself never aliases).
    pub fn sample(&self, sizes: &[usize]) -> Result<GridFunction<T>> {
        if sizes.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: sizes.len(),
            });
        }
        if sizes.contains(&0) {
            return Err(Error::param("sizes", "every grid size must be at least 1"));
        }
        let total = sizes
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n))
            .filter(|&t| t <= MAX_COEFFS)
            .ok_or(Error::BoxTooLarge(usize::MAX))?;
        let strides = grid::strides(sizes);
        let mut data = vec![zero(); total];
        for (k, c) in self.iter() {
            let pos: usize = k
                .iter()
                .zip(sizes)
                .zip(&strides)
                .map(|((&kj, &n), &s)| kj.rem_euclid(n as i64) as usize * s)
                .sum();
            data[pos] = data[pos] + c;
        }
        fft::transform(&mut data, sizes, FftDirection::Inverse);
        if self.real {
            for v in &mut data {
                v.im = T::zero();
            }
        }
        GridFunction::new(sizes.to_vec(), data)
    }

    /// Per-axis tables `e^{i k x_j}` for `|k| <= N_j`.
    fn tables(&self, x: &[T]) -> Vec<Vec<Complex<T>>> {
        self.degrees
            .iter()
            .zip(x)
            .map(|(&n, &xj)| {
                (-(n as i64)..=n as i64)
                    .map(|k| {
                        let (s, c) = (T::from_i64(k).expect("index") * xj).sin_cos();
                        Complex::new(c, s)
                    })
                    .collect()
            })
            .collect()
    }

    fn contract(&self, tables: &[Vec<Complex<T>>], buf: &mut Vec<Complex<T>>) -> Complex<T> {
        let d = self.dim();
        let last = &tables[d - 1];
        let n_last = last.len();
        buf.clear();
        buf.extend(
            self.coeffs
                .chunks_exact(n_last)
                .map(|row| row.iter().zip(last).map(|(a, b)| a * b).sum::<Complex<T>>()),
        );
        for axis in (0..d - 1).rev() {
            let t = &tables[axis];
            let n = t.len();
            let rows = buf.len() / n;
            for i in 0..rows {
                let mut acc = zero();
                for (j, tj) in t.iter().enumerate() {
                    acc = acc + buf[i * n + j] * tj;
                }
                buf[i] = acc;
            }
            buf.truncate(rows);
        }
        buf[0]
    }

    /// `f(x)` at a single torus point.
    pub fn evaluate_at(&self, x: &[T]) -> Result<Complex<T>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        let mut buf = Vec::new();
        Ok(self.contract(&self.tables(x), &mut buf))
    }

    /// `f` at every point of `points`.
    pub fn evaluate(&self, points: &PointSet<T>) -> Result<Vec<Complex<T>>> {
        if points.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: points.dim(),
            });
        }
        let mut buf = Vec::with_capacity(self.coeffs.len());
        Ok(points
            .iter()
            .map(|x| {
                let v = self.contract(&self.tables(x), &mut buf);
                if self.real {
                    Complex::new(v.re, T::zero())
                } else {
                    v
                }
            })
            .collect())
    }
}

/// Steps a multi-index through the box in row-major order.
fn advance(k: &mut [i64], degrees: &[usize]) {
    for j in (0..k.len()).rev() {
        if k[j] < degrees[j] as i64 {
            k[j] += 1;
            return;
        }
        k[j] = -(degrees[j] as i64);
    }
}

impl<T: Real> Add for &TrigPoly<T> {
    type Output = TrigPoly<T>;

    fn add(self, rhs: Self) -> TrigPoly<T> {
        self.checked_add(rhs).expect("dimension mismatch in TrigPoly addition")
    }
}

impl<T: Real> Sub for &TrigPoly<T> {
    type Output = TrigPoly<T>;

    fn sub(self, rhs: Self) -> TrigPoly<T> {
        self.checked_sub(rhs).expect("dimension mismatch in TrigPoly subtraction")
    }
}

impl<T: Real> Neg for &TrigPoly<T> {
    type Output = TrigPoly<T>;

    fn neg(self) -> TrigPoly<T> {
        self.scale(-T::one())
    }
}
