//! Plain-text coefficient files.
//!
//! ```text
//! d N_1 ... N_d
//! k_1 ... k_d re im
//! ...
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Indices that do not
//! appear are zero.

use std::fmt::Write as _;

use num_complex::Complex;

use super::TrigPoly;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Serializes every stored coefficient, one line per multi-index.
pub fn write_coeffs<T: Real>(f: &TrigPoly<T>) -> String {
    let mut out = String::new();
    write!(out, "{}", f.dim()).unwrap();
    for n in f.degrees() {
        write!(out, " {n}").unwrap();
    }
    out.push('\n');
    for (k, c) in f.iter() {
        for kj in &k {
            write!(out, "{kj} ").unwrap();
        }
        // adding zero turns -0 into 0
        writeln!(out, "{:e} {:e}", c.re + T::zero(), c.im + T::zero()).unwrap();
    }
    out
}

pub fn read_coeffs<T: Real>(text: &str) -> Result<TrigPoly<T>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        reason: "missing header".into(),
    })?;
    let fields: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse {
            line: hline,
            reason: format!("header: {e}"),
        })?;
    let (&dim, degrees) = fields.split_first().ok_or(Error::Parse {
        line: hline,
        reason: "empty header".into(),
    })?;
    if dim == 0 || degrees.len() != dim {
        return Err(Error::Parse {
            line: hline,
            reason: format!("header declares d = {dim} but lists {} degrees", degrees.len()),
        });
    }
    let mut f = TrigPoly::zeros(degrees)?;
    let mut coeffs = f.coeffs().to_vec();
    for (line, text) in lines {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() != dim + 2 {
            return Err(Error::Parse {
                line,
                reason: format!("expected {} fields, found {}", dim + 2, tokens.len()),
            });
        }
        let k: Vec<i64> = tokens[..dim]
            .iter()
            .map(|t| t.parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse {
                line,
                reason: format!("index: {e}"),
            })?;
        let parse = |t: &str| {
            t.parse::<f64>().map_err(|e| Error::Parse {
                line,
                reason: format!("value: {e}"),
            })
        };
        let re = T::lit(parse(tokens[dim])?);
        let im = T::lit(parse(tokens[dim + 1])?);
        let idx = f.index_of(&k).ok_or_else(|| Error::Parse {
            line,
            reason: format!("index {k:?} outside the declared box"),
        })?;
        coeffs[idx] = Complex::new(re, im);
    }
    f = TrigPoly::from_parts(degrees, coeffs)?;
    if f.is_conjugate_symmetric(T::zero()) {
        f.symmetrize();
    }
    Ok(f)
}
