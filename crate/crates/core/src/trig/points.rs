use crate::error::{Error, Result};
use crate::scalar::Real;

/// A finite list of points on the torus `[0, 2π)^d`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet<T> {
    dim: usize,
    coords: Vec<T>,
}

impl<T: Real> PointSet<T> {
    pub fn new(dim: usize, coords: Vec<T>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::param("dim", "must be positive"));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::param(
                "coords",
                format!("length {} is not a multiple of dimension {dim}", coords.len()),
            ));
        }
        Ok(Self { dim, coords })
    }

    pub fn from_points(dim: usize, points: &[Vec<T>]) -> Result<Self> {
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
            coords.extend_from_slice(p);
        }
        Self::new(dim, coords)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, j: usize) -> &[T] {
        &self.coords[j * self.dim..(j + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[T]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }
}
