//! Least-squares fit of `e ≈ C m^{-r} (log m)^b` in log space.

use crate::error::{Error, Result};

const RIDGE: f64 = 1e-9;
const MIN_POINTS: usize = 4;

/// Whether the log-log exponent `b` is fitted or fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BMode {
    Free,
    Frozen(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateFit {
    pub c_hat: f64,
    pub r_hat: f64,
    pub b_hat: f64,
    pub b_frozen: bool,
    /// Root mean square of the log-space residuals.
    pub residual: f64,
    pub m_min: f64,
    pub m_max: f64,
    pub n_points: usize,
}

impl RateFit {
    pub fn predict(&self, m: f64) -> f64 {
        self.c_hat * m.powf(-self.r_hat) * m.ln().ln().powf(self.b_hat)
    }
}

impl std::fmt::Display for RateFit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "C = {:.6e}, r = {:.6}, b = {:.6}{}, log-residual = {:.3e}, m in [{}, {}] ({} points)",
            self.c_hat,
            self.r_hat,
            self.b_hat,
            if self.b_frozen { " (frozen)" } else { "" },
            self.residual,
            self.m_min,
            self.m_max,
            self.n_points
        )
    }
}

/// Fits `log e = log C − r log m + b log log m`.
///
/// Columns are centered before solving, so scaling every error by `c`
/// only moves `C`. Ridge damping is added only when the normal equations
/// are numerically singular.
pub fn fit_rate(data: &[(f64, f64)], mode: BMode) -> Result<RateFit> {
    if data.len() < MIN_POINTS {
        return Err(Error::param(
            "points",
            format!("need at least {MIN_POINTS} points, got {}", data.len()),
        ));
    }
    for &(m, e) in data {
        if !(m >= 3.0) || !m.is_finite() {
            return Err(Error::param("m", format!("every m must be finite and >= 3, got {m}")));
        }
        if !(e > 0.0) || !e.is_finite() {
            return Err(Error::param("error", format!("errors must be positive and finite, got {e}")));
        }
    }
    let n = data.len() as f64;
    let x: Vec<f64> = data.iter().map(|&(m, _)| -m.ln()).collect();
    let z: Vec<f64> = data.iter().map(|&(m, _)| m.ln().ln()).collect();
    let mut y: Vec<f64> = data.iter().map(|&(_, e)| e.ln()).collect();
    if let BMode::Frozen(b) = mode {
        for (yi, zi) in y.iter_mut().zip(&z) {
            *yi -= b * zi;
        }
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / n;
    let (xm, zm, ym) = (mean(&x), mean(&z), mean(&y));
    let xc: Vec<f64> = x.iter().map(|v| v - xm).collect();
    let zc: Vec<f64> = z.iter().map(|v| v - zm).collect();
    let yc: Vec<f64> = y.iter().map(|v| v - ym).collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();

    let (r, b) = match mode {
        BMode::Frozen(b) => {
            let mut sxx = dot(&xc, &xc);
            if sxx <= f64::EPSILON * n {
                sxx += RIDGE;
            }
            (dot(&xc, &yc) / sxx, b)
        }
        BMode::Free => {
            let (mut sxx, sxz, mut szz) = (dot(&xc, &xc), dot(&xc, &zc), dot(&zc, &zc));
            let (sxy, szy) = (dot(&xc, &yc), dot(&zc, &yc));
            let scale = sxx.max(szz).max(f64::MIN_POSITIVE);
            if sxx * szz - sxz * sxz <= 1e-12 * scale * scale {
                sxx += RIDGE;
                szz += RIDGE;
            }
            let det = sxx * szz - sxz * sxz;
            ((sxy * szz - szy * sxz) / det, (sxx * szy - sxz * sxy) / det)
        }
    };
    let free_b = if matches!(mode, BMode::Free) { b } else { 0.0 };
    let log_c = ym - r * xm - free_b * zm;
    let residual = (y
        .iter()
        .zip(x.iter().zip(&z))
        .map(|(yi, (xi, zi))| {
            let d = yi - (log_c + r * xi + free_b * zi);
            d * d
        })
        .sum::<f64>()
        / n)
        .sqrt();
    let (m_min, m_max) = data
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(m, _)| (lo.min(m), hi.max(m)));
    Ok(RateFit {
        c_hat: log_c.exp(),
        r_hat: r,
        b_hat: b,
        b_frozen: matches!(mode, BMode::Frozen(_)),
        residual,
        m_min,
        m_max,
        n_points: data.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn pure_power_law() {
        let data: Vec<(f64, f64)> = [10.0, 100.0, 1000.0, 10000.0].iter().map(|&m: &f64| (m, m.powf(-0.7))).collect();
        let fit = fit_rate(&data, BMode::Free).unwrap();
        assert_abs_diff_eq!(fit.r_hat, 0.7, epsilon = 1e-9);
        assert_abs_diff_eq!(fit.b_hat, 0.0, epsilon = 1e-9);
        assert!(fit.residual < 1e-10);
    }

    #[test]
    fn recovers_log_factor() {
        let data: Vec<(f64, f64)> = (1..=12)
            .map(|i| 10f64.powf(1.0 + i as f64 / 3.0))
            .map(|m| (m, 3.0 * m.powf(-0.5) * m.ln()))
            .collect();
        let fit = fit_rate(&data, BMode::Free).unwrap();
        assert_abs_diff_eq!(fit.r_hat, 0.5, epsilon = 1e-8);
        assert_abs_diff_eq!(fit.c_hat, 3.0, epsilon = 1e-6);
        // ln(ln m) exponent: (log m)^1 = exp(1 · ln ln m)
        assert_abs_diff_eq!(fit.b_hat, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(fit_rate(&[(10.0, 1.0); 3], BMode::Free).is_err());
        assert!(fit_rate(&[(10.0, 1.0), (20.0, 0.0), (30.0, 1.0), (40.0, 1.0)], BMode::Free).is_err());
        assert!(fit_rate(&[(2.0, 1.0), (20.0, 1.0), (30.0, 1.0), (40.0, 1.0)], BMode::Free).is_err());
    }

    #[test]
    fn degenerate_design_is_damped() {
        let fit = fit_rate(&[(10.0, 0.5); 4], BMode::Free).unwrap();
        assert!(fit.r_hat.is_finite() && fit.b_hat.is_finite());
        assert_abs_diff_eq!(fit.c_hat, 0.5, epsilon = 1e-12);
    }
}
