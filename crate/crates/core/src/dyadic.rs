//! Dyadic block decomposition `A_s(f) = f ∗ A_s`, the block seminorm of the
//! mixed Hölder–Nikol'skii classes, mixed differences, a boundary sampler for
//! the unit ball of those classes, and the product (quasi-algebra) check.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kernels::{block_coeff, block_degree};
use crate::scalar::Real;
use crate::trig::{TrigPoly, DEFAULT_OVERSAMPLE};

/// Dyadic multi-level `s ∈ ℕ₀^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockIndex(Vec<u32>);

impl BlockIndex {
    pub fn new(levels: Vec<u32>) -> Self {
        Self(levels)
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn levels(&self) -> &[u32] {
        &self.0
    }

    /// `‖s‖₁ = Σ s_j`.
    pub fn l1(&self) -> u32 {
        self.0.iter().sum()
    }

    /// All indices with `s_j <= caps[j]`, in row-major order.
    pub fn all_up_to(caps: &[u32]) -> Vec<BlockIndex> {
        let mut out = vec![Vec::with_capacity(caps.len())];
        for &cap in caps {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=cap).map(move |s| {
                        let mut v = prefix.clone();
                        v.push(s);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(BlockIndex).collect()
    }
}

impl From<Vec<u32>> for BlockIndex {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassFamily {
    /// `W^r_p B`: convolutions `φ ∗ F_r` with `‖φ‖_p <= B`.
    SobolevW,
    /// `H^r_p B`: block seminorm at most `B`.
    HoelderH,
    /// `{f : |f̂(k)| <= B ∏_j max(1,|k_j|)^{-r}}`.
    FourierHull,
}

impl std::str::FromStr for ClassFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sobolev" | "w" | "sobolevw" => Ok(ClassFamily::SobolevW),
            "hoelder" | "holder" | "h" | "hoelderh" => Ok(ClassFamily::HoelderH),
            "fourier_hull" | "fourierhull" | "hull" | "e" => Ok(ClassFamily::FourierHull),
            other => Err(Error::param("family", format!("unknown class family `{other}`"))),
        }
    }
}

impl std::fmt::Display for ClassFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ClassFamily::SobolevW => "sobolev",
            ClassFamily::HoelderH => "hoelder",
            ClassFamily::FourierHull => "fourier_hull",
        })
    }
}

/// Function-class descriptor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassSpec<T> {
    pub family: ClassFamily,
    /// Smoothness `r > 0`.
    pub r: T,
    /// Integrability `p ∈ [1, ∞]`.
    pub p: T,
    /// Radius `B > 0`.
    pub radius: T,
    /// Uniform bound `M >= 0`; zero means unknown.
    pub bound: T,
}

impl<T: Real> ClassSpec<T> {
    pub fn new(family: ClassFamily, r: T, p: T, radius: T, bound: T) -> Result<Self> {
        if !(r > T::zero()) || !r.is_finite() {
            return Err(Error::param("r", "smoothness must be positive and finite"));
        }
        if p.is_nan() || p < T::one() {
            return Err(Error::param("p", "integrability must lie in [1, ∞]"));
        }
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(Error::param("radius", "must be positive and finite"));
        }
        if !(bound >= T::zero()) {
            return Err(Error::param("bound", "must be non-negative"));
        }
        Ok(Self {
            family,
            r,
            p,
            radius,
            bound,
        })
    }

    pub fn sobolev(r: T) -> Result<Self> {
        Self::new(ClassFamily::SobolevW, r, T::lit(2.0), T::one(), T::zero())
    }

    pub fn fourier_hull(r: T, radius: T) -> Result<Self> {
        Self::new(ClassFamily::FourierHull, r, T::infinity(), radius, T::zero())
    }

    pub fn hoelder(r: T, p: T, radius: T) -> Result<Self> {
        Self::new(ClassFamily::HoelderH, r, p, radius, T::zero())
    }

    /// `r > 1/p`: members are continuous and uniformly bounded.
    pub fn embeds_in_continuous(&self) -> bool {
        self.r > self.p.recip()
    }
}

/// Highest block level with a nonzero coefficient inside `|k| <= degree`.
pub fn max_level(degree: usize) -> u32 {
    match degree {
        0 => 0,
        1 => 1,
        n => 2 + (n - 1).ilog2(),
    }
}

fn level_table<T: Real>(level: u32, degree: usize) -> Vec<T> {
    let n = degree as i64;
    (-n..=n).map(|k| block_coeff::<T>(level, k)).collect()
}

/// `A_s(f)`: coefficientwise product with `Â_s`, on the box
/// `min(N_j, 2^{s_j} - 1)`.
pub fn block_project<T: Real>(f: &TrigPoly<T>, s: &BlockIndex) -> Result<TrigPoly<T>> {
    if s.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: s.dim(),
        });
    }
    if s.levels().iter().any(|&l| l > 30) {
        return Err(Error::param("s", "block level above 30 is not supported"));
    }
    let degrees: Vec<usize> = f
        .degrees()
        .iter()
        .zip(s.levels())
        .map(|(&n, &l)| n.min(block_degree(l)))
        .collect();
    let tables: Vec<Vec<T>> = s
        .levels()
        .iter()
        .zip(&degrees)
        .map(|(&l, &n)| level_table(l, n))
        .collect();
    let mut out = TrigPoly::from_fn(&degrees, |k| {
        let w = k
            .iter()
            .zip(&degrees)
            .zip(&tables)
            .fold(T::one(), |acc, ((&kj, &n), t)| acc * t[(kj + n as i64) as usize]);
        f.coeff(k) * w
    })?;
    if f.is_real() {
        out = out.into_real(T::zero())?;
    }
    Ok(out)
}

/// `‖A_s(f)‖_p` for every block that can be nonzero on `f`'s box.
pub fn block_norms<T: Real>(f: &TrigPoly<T>, p: T, oversample: usize) -> Result<Vec<(BlockIndex, T)>> {
    let caps: Vec<u32> = f.degrees().iter().map(|&n| max_level(n)).collect();
    BlockIndex::all_up_to(&caps)
        .into_iter()
        .map(|s| {
            let a = block_project(f, &s)?;
            let norm = a.lp_norm(p, oversample)?.value;
            Ok((s, norm))
        })
        .collect()
}

/// `sup_s 2^{r‖s‖₁} ‖A_s(f)‖_p`; `f` lies in `H^r_p B` iff this is at most `B`.
pub fn h_seminorm<T: Real>(f: &TrigPoly<T>, r: T, p: T) -> Result<T> {
    h_seminorm_with(f, r, p, DEFAULT_OVERSAMPLE)
}

pub fn h_seminorm_with<T: Real>(f: &TrigPoly<T>, r: T, p: T, oversample: usize) -> Result<T> {
    if r.is_nan() || r < T::zero() {
        return Err(Error::param("r", "must be non-negative"));
    }
    let two = T::lit(2.0);
    Ok(block_norms(f, p, oversample)?
        .into_iter()
        .map(|(s, n)| two.powf(r * T::from_u32(s.l1()).expect("level")) * n)
        .fold(T::zero(), T::max))
}

/// Mixed difference `Δ_t^l(e) f`, applied in coefficient space as the
/// multiplier `∏_{j∈e} (e^{i k_j t_j} - 1)^l`.
pub fn mixed_difference<T: Real>(f: &TrigPoly<T>, t: &[T], order: u32, subset: &[usize]) -> Result<TrigPoly<T>> {
    if order == 0 {
        return Err(Error::param("order", "difference order must be at least 1"));
    }
    if t.len() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: t.len(),
        });
    }
    let mut seen = vec![false; f.dim()];
    for &j in subset {
        if j >= f.dim() || seen[j] {
            return Err(Error::param("subset", format!("invalid or repeated coordinate {j}")));
        }
        seen[j] = true;
    }
    let one = Complex::new(T::one(), T::zero());
    Ok(f.map_coeffs(true, |k| {
        subset.iter().fold(one, |acc, &j| {
            let phase = T::from_i64(k[j]).expect("index") * t[j];
            let step = Complex::new(phase.cos() - T::one(), phase.sin());
            acc * step.powu(order)
        })
    }))
}

/// Difference order `[r] + 1` used for the difference characterization.
pub fn default_difference_order<T: Real>(r: T) -> u32 {
    r.floor().to_u32().unwrap_or(0) + 1
}

/// `‖Δ_t^l(e) f‖_p / ∏_{j∈e} |t_j|^r`, the constant in the mixed-difference
/// definition of `H^r_p` realized by `f` at this step.
pub fn difference_ratio<T: Real>(f: &TrigPoly<T>, t: &[T], subset: &[usize], r: T, p: T) -> Result<T> {
    let diff = mixed_difference(f, t, default_difference_order(r), subset)?;
    let norm = diff.lp_norm(p, DEFAULT_OVERSAMPLE)?.value;
    let denom = subset.iter().fold(T::one(), |acc, &j| acc * num_traits::Float::abs(t[j]).powf(r));
    if denom == T::zero() {
        return Err(Error::UndefinedRatio("zero step".into()));
    }
    Ok(norm / denom)
}

/// Frequencies of the sampling template for level `s` in one coordinate:
/// the half-open shell `2^{s-2} < |k| <= 2^{s-1}`.
fn shell(level: u32) -> Vec<i64> {
    match level {
        0 => vec![0],
        1 => vec![-1, 1],
        s => {
            let lo = 1i64 << (s - 2);
            let hi = 1i64 << (s - 1);
            (-hi..=hi).filter(|k| k.abs() > lo).collect()
        }
    }
}

/// Random real member of the `H^r_p` ball of radius `B` with all blocks
/// `‖s‖_∞ <= cap` populated, rescaled so its block seminorm equals `B`.
///
/// Each block carries random signs on the real and imaginary parts of its
/// shell frequencies, is normalized to unit `L_p` norm and weighted by
/// `2^{-r‖s‖₁}`. Deterministic in `seed`.
pub fn sample_h_ball<T: Real>(spec: &ClassSpec<T>, dim: usize, cap: u32, seed: u64) -> Result<TrigPoly<T>> {
    if spec.family != ClassFamily::HoelderH {
        return Err(Error::param("family", "the sampler draws from H-classes only"));
    }
    if !spec.embeds_in_continuous() {
        return Err(Error::param("r", "sampling requires r > 1/p"));
    }
    if dim == 0 {
        return Err(Error::param("dim", "must be positive"));
    }
    if cap > 16 {
        return Err(Error::param("cap", "block cap above 16 is not supported"));
    }
    let degree = if cap == 0 { 0 } else { 1usize << (cap - 1) };
    let mut f = TrigPoly::<T>::zeros(&vec![degree; dim])?;
    let mut coeffs = f.coeffs().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two = T::lit(2.0);
    let sign = |rng: &mut ChaCha8Rng| if rng.random::<bool>() { T::one() } else { -T::one() };
    let amp = T::FRAC_1_SQRT_2();

    for s in BlockIndex::all_up_to(&vec![cap; dim]) {
        let shells: Vec<Vec<i64>> = s.levels().iter().map(|&l| shell(l)).collect();
        let mut block: Vec<(Vec<i64>, Complex<T>)> = Vec::new();
        for k in cartesian(&shells) {
            let neg: Vec<i64> = k.iter().map(|v| -v).collect();
            if k < neg {
                continue;
            }
            let c = if k == neg {
                Complex::new(sign(&mut rng), T::zero())
            } else {
                Complex::new(sign(&mut rng) * amp, sign(&mut rng) * amp)
            };
            if k != neg {
                block.push((neg, c.conj()));
            }
            block.push((k, c));
        }
        let norm = if spec.p == T::lit(2.0) {
            block.iter().map(|(_, c)| c.norm_sqr()).sum::<T>().sqrt()
        } else {
            let degrees: Vec<usize> = shells
                .iter()
                .map(|sh| sh.iter().map(|k| k.unsigned_abs() as usize).max().unwrap_or(0))
                .collect();
            let mut g = TrigPoly::<T>::zeros(&degrees)?;
            for (k, c) in &block {
                g.set(k, *c)?;
            }
            g.into_real(T::zero())?.lp_norm(spec.p, DEFAULT_OVERSAMPLE)?.value
        };
        let weight = two.powf(-spec.r * T::from_u32(s.l1()).expect("level")) / norm;
        for (k, c) in block {
            let idx = f.index_of(&k).expect("template inside box");
            coeffs[idx] = coeffs[idx] + c * weight;
        }
    }
    f = TrigPoly::from_parts(f.degrees(), coeffs)?.into_real(T::zero())?;
    let h = h_seminorm(&f, spec.r, spec.p)?;
    Ok(f.scale(spec.radius / h))
}

fn cartesian(sets: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::with_capacity(sets.len())];
    for set in sets {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                set.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

/// `h(fg) / (h(f) h(g))` for real `f`, `g`.
pub fn quasi_algebra_ratio<T: Real>(f: &TrigPoly<T>, g: &TrigPoly<T>, r: T, p: T) -> Result<T> {
    let tol = T::lit(1e-12);
    if !f.is_real_valued(tol) || !g.is_real_valued(tol) {
        return Err(Error::NotReal);
    }
    let hf = h_seminorm(f, r, p)?;
    let hg = h_seminorm(g, r, p)?;
    let denom = hf * hg;
    if !(denom > T::zero()) {
        return Err(Error::UndefinedRatio("a factor has zero block seminorm".into()));
    }
    Ok(h_seminorm(&f.mul(g)?, r, p)? / denom)
}
