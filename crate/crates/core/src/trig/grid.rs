use num_complex::Complex;
use rustfft::FftDirection;

use super::{fft, TrigPoly};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Samples on the uniform tensor grid `x_j = 2π i_j / n_j`, `0 <= i_j < n_j`,
/// stored row-major (last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction<T> {
    sizes: Vec<usize>,
    values: Vec<Complex<T>>,
}

impl<T: Real> GridFunction<T> {
    pub fn new(sizes: Vec<usize>, values: Vec<Complex<T>>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::param("sizes", "grid needs at least one axis"));
        }
        if sizes.contains(&0) {
            return Err(Error::param("sizes", "every grid size must be at least 1"));
        }
        let total = sizes
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n))
            .ok_or(Error::BoxTooLarge(usize::MAX))?;
        if total != values.len() {
            return Err(Error::param(
                "values",
                format!("expected {total} samples, found {}", values.len()),
            ));
        }
        Ok(Self { sizes, values })
    }

    pub fn from_fn(sizes: Vec<usize>, mut f: impl FnMut(&[T]) -> Complex<T>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::param("sizes", "every grid size must be at least 1"));
        }
        let total: usize = sizes.iter().product();
        let mut x = vec![T::zero(); sizes.len()];
        let mut values = Vec::with_capacity(total);
        for idx in 0..total {
            grid_point(&sizes, idx, &mut x);
            values.push(f(&x));
        }
        Self::new(sizes, values)
    }

    pub fn from_real_fn(sizes: Vec<usize>, mut f: impl FnMut(&[T]) -> T) -> Result<Self> {
        Self::from_fn(sizes, |x| Complex::new(f(x), T::zero()))
    }

    pub fn dim(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// True when every sample has an exactly zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == T::zero())
    }

    /// Coordinates of the grid node with flat index `idx`.
    pub fn node(&self, idx: usize) -> Vec<T> {
        let mut x = vec![T::zero(); self.sizes.len()];
        grid_point(&self.sizes, idx, &mut x);
        x
    }

    /// Discrete Fourier coefficients on the box `|k_j| <= degrees[j]`,
    /// normalized so the zero coefficient is the sample mean.
    pub fn forward_coeffs(&self, degrees: &[usize]) -> Result<TrigPoly<T>> {
        if degrees.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: degrees.len(),
            });
        }
        for (axis, (&n, &deg)) in self.sizes.iter().zip(degrees).enumerate() {
            if n < 2 * deg + 1 {
                return Err(Error::Aliasing {
                    axis,
                    grid: n,
                    degree: deg,
                    needed: 2 * deg + 1,
                });
            }
        }
        let mut data = self.values.clone();
        fft::transform(&mut data, &self.sizes, FftDirection::Forward);
        let scale = T::one() / T::from_usize_lossy(data.len());
        let strides = strides(&self.sizes);
        let mut poly = TrigPoly::from_fn(degrees, |k| {
            let pos: usize = k
                .iter()
                .zip(&self.sizes)
                .zip(&strides)
                .map(|((&kj, &n), &s)| kj.rem_euclid(n as i64) as usize * s)
                .sum();
            data[pos] * scale
        })?;
        if self.is_real() {
            poly.symmetrize();
        }
        Ok(poly)
    }
}

pub(crate) fn strides(sizes: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; sizes.len()];
    for j in (0..sizes.len().saturating_sub(1)).rev() {
        strides[j] = strides[j + 1] * sizes[j + 1];
    }
    strides
}

fn grid_point<T: Real>(sizes: &[usize], idx: usize, out: &mut [T]) {
    let mut rest = idx;
    for j in (0..sizes.len()).rev() {
        let i = rest % sizes[j];
        rest /= sizes[j];
        out[j] = T::TAU() * T::from_usize_lossy(i) / T::from_usize_lossy(sizes[j]);
    }
}
