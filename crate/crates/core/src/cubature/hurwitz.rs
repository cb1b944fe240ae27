use crate::error::{Error, Result};
use crate::scalar::Real;

/// `B_{2j} / (2j)!` for `j = 1..=10`.
const BERNOULLI_OVER_FACTORIAL: [f64; 10] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
    43867.0 / 798.0 / 6402373705728000.0,
    -174611.0 / 330.0 / 2432902008176640000.0,
];

const DIRECT_TERMS: usize = 12;

/// Hurwitz zeta `ζ(s, q) = Σ_{n>=0} (n + q)^{-s}` for `s > 1`, `q > 0`,
/// by Euler–Maclaurin summation.
pub fn hurwitz_zeta<T: Real>(s: T, q: T) -> Result<T> {
    if !(s > T::one()) {
        return Err(Error::Divergent(format!("ζ(s, q) needs s > 1, got {s}")));
    }
    if !(q > T::zero()) {
        return Err(Error::param("q", "must be positive"));
    }
    let mut head = T::zero();
    for n in (0..DIRECT_TERMS).rev() {
        head = head + (T::from_usize_lossy(n) + q).powf(-s);
    }
    let x = T::from_usize_lossy(DIRECT_TERMS) + q;
    let mut tail = x.powf(T::one() - s) / (s - T::one()) + x.powf(-s) * T::lit(0.5);
    // rising factorial s(s+1)...(s+2j-2) times x^{-s-2j+1}
    let mut factor = s * x.powf(-s - T::one());
    let inv_x2 = (x * x).recip();
    for (j, &c) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        tail = tail + T::lit(c) * factor;
        let a = s + T::from_usize_lossy(2 * j + 1);
        let b = s + T::from_usize_lossy(2 * j + 2);
        factor = factor * a * b * inv_x2;
    }
    Ok(head + tail)
}
