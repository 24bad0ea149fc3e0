//! Canonical idempotent representation.
//!
//! For n >= 2 define at each level j the pair
//!
//! ```text
//!     γ_j  = (1 + i_{j-1} i_j) / 2,      γ'_j = (1 - i_{j-1} i_j) / 2,
//! ```
//!
//! both idempotent, with γ_j γ'_j = 0 and γ_j + γ'_j = 1. Products picking
//! one factor per level, ε = Π_{j=2..n} (γ_j or γ'_j), give 2^(n-1)
//! mutually annihilating idempotents that sum to 1, and every η in M_n
//! splits as η = Σ_p z_p ε_p with z_p complex in i_1. On the component
//! vector (z_0, .., z_{2^(n-1)-1}) multiplication, inversion and modulus
//! all act componentwise.
//!
//! Component index convention: bit j-2 of p selects the level-j factor,
//! 0 for γ_j and 1 for γ'_j, so the most significant bit belongs to level n
//! and p = 0 is Γ_n = γ_2 ⋯ γ_n.
//!
//! The change of representation uses the split η = η_1 + i_n η_2 with
//! η_1, η_2 in M_{n-1}:
//!
//! ```text
//!     η = (η_1 - η_2 i_{n-1}) γ_n + (η_1 + η_2 i_{n-1}) γ'_n,
//! ```
//!
//! recursing on both branches. Each stage is a butterfly over the
//! coefficient vector, so the full transform costs O(n 2^n); it is exact
//! on dyadic inputs since only additions and sign flips occur (the inverse
//! adds exact halvings).

use std::fmt;

use num_complex::Complex64;

use crate::error::{McError, Result};
use crate::standard::{ConjugationMask, Level, Multicomplex, UnitIndexSet, DEFAULT_TOL};

/// Position in the canonical idempotent basis, carrying the bit convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EpsilonIndex {
    level: Level,
    index: usize,
}

impl EpsilonIndex {
    pub fn new(level: Level, index: usize) -> Result<Self> {
        if level.get() < 2 {
            return Err(McError::LevelTooLow(level.get()));
        }
        if index >= level.component_count() {
            return Err(McError::IndexOutOfRange {
                index,
                level: level.get(),
                max: level.component_count(),
            });
        }
        Ok(EpsilonIndex { level, index })
    }

    pub fn level(self) -> Level {
        self.level
    }

    pub fn index(self) -> usize {
        self.index
    }

    /// True when the factor at level j (2 <= j <= n) is γ'_j.
    pub fn takes_prime(self, j: usize) -> bool {
        (self.index >> (j - 2)) & 1 == 1
    }
}

impl fmt::Display for EpsilonIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ε{}", self.index + 1)
    }
}

/// The idempotent (1 + i_{j-1} i_j) / 2 as a level-n number, 2 <= j <= n.
pub fn gamma(level: Level, j: usize) -> Result<Multicomplex> {
    gamma_impl(level, j, 0.5)
}

/// The idempotent (1 - i_{j-1} i_j) / 2 as a level-n number, 2 <= j <= n.
pub fn gamma_prime(level: Level, j: usize) -> Result<Multicomplex> {
    gamma_impl(level, j, -0.5)
}

fn gamma_impl(level: Level, j: usize, second: f64) -> Result<Multicomplex> {
    if level.get() < 2 {
        return Err(McError::LevelTooLow(level.get()));
    }
    if j < 2 || j > level.get() {
        return Err(McError::UnitOutOfRange {
            unit: j,
            level: level.get(),
        });
    }
    let pair = UnitIndexSet::from_units(level, &[j - 1, j])?;
    let mut coeffs = vec![0.0; level.coeff_count()];
    coeffs[0] = 0.5;
    coeffs[pair.bits() as usize] = second;
    Multicomplex::from_coeffs(level, coeffs)
}

/// The canonical idempotent ε_p as the standard-basis product of one γ_j or
/// γ'_j per level. Coefficients come out as exact dyadic rationals.
pub fn epsilon(level: Level, p: usize) -> Result<Multicomplex> {
    let idx = EpsilonIndex::new(level, p)?;
    let mut acc = vec![0.0; level.coeff_count()];
    acc[0] = 1.0;
    for j in 2..=level.get() {
        let pair_mask = (1usize << (j - 2)) | (1usize << (j - 1));
        let second = if idx.takes_prime(j) { -0.5 } else { 0.5 };
        acc = mul_two_term(&acc, pair_mask, second);
    }
    Multicomplex::from_coeffs(level, acc)
}

/// Multiplies by (1/2 + second * i_B), walking only the nonzero terms of
/// the accumulator. Same sign rule as the full product.
fn mul_two_term(acc: &[f64], b: usize, second: f64) -> Vec<f64> {
    let mut out = vec![0.0; acc.len()];
    for (a, &x) in acc.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        out[a] += 0.5 * x;
        let sign = if (a & b).count_ones() & 1 == 1 {
            -second
        } else {
            second
        };
        out[a ^ b] += sign * x;
    }
    out
}

/// Component vector of a level-n number over the canonical idempotent
/// basis; entries are complex in i_1. Requires level >= 2.
#[derive(Debug, Clone, PartialEq)]
pub struct IdempotentRep {
    level: Level,
    comps: Vec<Complex64>,
}

impl IdempotentRep {
    pub fn from_components(level: Level, comps: Vec<Complex64>) -> Result<Self> {
        if level.get() < 2 {
            return Err(McError::LevelTooLow(level.get()));
        }
        if comps.len() != level.component_count() {
            return Err(McError::CoeffLength {
                got: comps.len(),
                expected: level.component_count(),
            });
        }
        if let Some(bad) = comps
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(McError::NonFinite(bad));
        }
        Ok(IdempotentRep { level, comps })
    }

    pub fn zero(level: Level) -> Result<Self> {
        Self::from_components(
            level,
            vec![Complex64::new(0.0, 0.0); level.component_count()],
        )
    }

    pub fn one(level: Level) -> Result<Self> {
        Self::scalar(level, Complex64::new(1.0, 0.0))
    }

    /// Diagonal embedding of a complex scalar: every component equal.
    pub fn scalar(level: Level, z: Complex64) -> Result<Self> {
        if level.get() < 2 {
            return Err(McError::LevelTooLow(level.get()));
        }
        Ok(IdempotentRep {
            level,
            comps: vec![z; level.component_count()],
        })
    }

    /// The component vector of ε_p itself: 1 at p, 0 elsewhere.
    pub fn epsilon_rep(level: Level, p: usize) -> Result<Self> {
        let idx = EpsilonIndex::new(level, p)?;
        let mut comps = vec![Complex64::new(0.0, 0.0); level.component_count()];
        comps[idx.index()] = Complex64::new(1.0, 0.0);
        Ok(IdempotentRep { level, comps })
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn components(&self) -> &[Complex64] {
        &self.comps
    }

    /// The p-th projection, a ring homomorphism onto the complex plane.
    pub fn project(&self, p: usize) -> Result<Complex64> {
        if p >= self.comps.len() {
            return Err(McError::IndexOutOfRange {
                index: p,
                level: self.level.get(),
                max: self.comps.len(),
            });
        }
        Ok(self.comps[p])
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn max_modulus(&self) -> f64 {
        self.comps.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn add_fast(&self, rhs: &Self) -> Result<Self> {
        self.level.check_eq(rhs.level)?;
        Ok(IdempotentRep {
            level: self.level,
            comps: self
                .comps
                .iter()
                .zip(&rhs.comps)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub_fast(&self, rhs: &Self) -> Result<Self> {
        self.level.check_eq(rhs.level)?;
        Ok(IdempotentRep {
            level: self.level,
            comps: self
                .comps
                .iter()
                .zip(&rhs.comps)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Componentwise product, O(2^(n-1)); agrees with the full standard
    /// product because every projection is a ring homomorphism.
    pub fn mul_fast(&self, rhs: &Self) -> Result<Self> {
        self.level.check_eq(rhs.level)?;
        Ok(IdempotentRep {
            level: self.level,
            comps: self
                .comps
                .iter()
                .zip(&rhs.comps)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    pub fn scale(&self, r: f64) -> Self {
        IdempotentRep {
            level: self.level,
            comps: self.comps.iter().map(|z| z * r).collect(),
        }
    }

    pub fn scale_complex(&self, z: Complex64) -> Self {
        IdempotentRep {
            level: self.level,
            comps: self.comps.iter().map(|c| c * z).collect(),
        }
    }

    /// Integer power by repeated squaring; negative exponents invert first.
    pub fn powi(&self, k: i64) -> Result<Self> {
        let mut base = if k < 0 { self.invert()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one(self.level)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_fast(&base)?;
            }
            base = base.mul_fast(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Componentwise complex conjugation; this is the total conjugation of
    /// the ambient algebra and fixes exactly the multiperplex shard.
    pub fn lambda_conjugate(&self) -> Self {
        IdempotentRep {
            level: self.level,
            comps: self.comps.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Arbitrary conjugation, computed by a round trip through the
    /// standard carrier. Conjugations permute the idempotent basis while
    /// conjugating components, so no componentwise shortcut is attempted
    /// here; the round trip is the reference.
    pub fn conjugate(&self, mask: ConjugationMask) -> Result<Self> {
        to_idempotent(&from_idempotent(self).conjugate(mask)?)
    }

    pub fn approx_eq(&self, rhs: &Self, tol: f64) -> Result<bool> {
        self.level.check_eq(rhs.level)?;
        let scale = 1.0_f64.max(self.max_modulus()).max(rhs.max_modulus());
        Ok(self
            .comps
            .iter()
            .zip(&rhs.comps)
            .all(|(a, b)| (a - b).norm() <= tol * scale))
    }

    fn null_threshold(&self, tol: f64) -> f64 {
        tol * (1.0 + self.max_modulus())
    }

    /// Indices of components with modulus at or below the scaled threshold.
    pub fn vanishing_components(&self, tol: f64) -> Vec<usize> {
        let thr = self.null_threshold(tol);
        self.comps
            .iter()
            .enumerate()
            .filter(|(_, z)| z.norm() <= thr)
            .map(|(p, _)| p)
            .collect()
    }

    /// True when some component vanishes; includes zero itself.
    pub fn in_null_cone(&self, tol: f64) -> bool {
        !self.vanishing_components(tol).is_empty()
    }

    /// A nonzero element annihilated by some nonzero element, which happens
    /// exactly when one of its components vanishes.
    pub fn is_zero_divisor(&self, tol: f64) -> bool {
        !self.is_zero() && self.in_null_cone(tol)
    }

    /// Componentwise reciprocal. Defined exactly off the null cone; the
    /// error lists every vanishing component index.
    pub fn invert(&self) -> Result<Self> {
        self.invert_with_tol(DEFAULT_TOL)
    }

    pub fn invert_with_tol(&self, tol: f64) -> Result<Self> {
        let indices = self.vanishing_components(tol);
        if !indices.is_empty() {
            return Err(McError::NullCone { indices });
        }
        Ok(IdempotentRep {
            level: self.level,
            comps: self.comps.iter().map(|z| z.inv()).collect(),
        })
    }

    /// True when every component is real within the scaled tolerance,
    /// placing the value in the multiperplex shard.
    pub fn is_multiperplex(&self, tol: f64) -> bool {
        let thr = self.null_threshold(tol);
        self.comps.iter().all(|z| z.im.abs() <= thr)
    }

    /// Real and imaginary multiperplex parts: r = d1 + i_1 d2 componentwise.
    pub fn split_perplex(&self) -> (Multiperplex, Multiperplex) {
        let re = Multiperplex {
            level: self.level,
            comps: self.comps.iter().map(|z| z.re).collect(),
        };
        let im = Multiperplex {
            level: self.level,
            comps: self.comps.iter().map(|z| z.im).collect(),
        };
        (re, im)
    }

    /// The multiperplex modulus Σ |z_p| ε_p. Never takes a square root of
    /// anything but a componentwise complex modulus, and always lands in
    /// the nonnegative cone.
    pub fn mnorm(&self) -> Multiperplex {
        Multiperplex {
            level: self.level,
            comps: self.comps.iter().map(|z| z.norm()).collect(),
        }
    }
}

/// Standard carrier to component vector, O(n 2^n).
pub fn to_idempotent(a: &Multicomplex) -> Result<IdempotentRep> {
    let n = a.level().get();
    if n < 2 {
        return Err(McError::LevelTooLow(n));
    }
    let mut buf = a.coeffs().to_vec();
    let len = buf.len();
    let mut block = len;
    // Stage for level k (block = 2^k): η = η_1 + i_k η_2 becomes the pair
    // (η_1 - i_{k-1} η_2, η_1 + i_{k-1} η_2), γ-branch first. Multiplying
    // by i_{k-1} inside M_{k-1} rotates each (lo, hi) coefficient pair.
    while block >= 4 {
        let half = block / 2;
        let quarter = block / 4;
        for start in (0..len).step_by(block) {
            for j in 0..quarter {
                let a0 = buf[start + j];
                let b0 = buf[start + j + quarter];
                let c0 = buf[start + half + j];
                let d0 = buf[start + half + j + quarter];
                buf[start + j] = a0 + d0;
                buf[start + j + quarter] = b0 - c0;
                buf[start + half + j] = a0 - d0;
                buf[start + half + j + quarter] = b0 + c0;
            }
        }
        block = half;
    }
    let comps = buf
        .chunks_exact(2)
        .map(|pair| Complex64::new(pair[0], pair[1]))
        .collect();
    Ok(IdempotentRep {
        level: a.level(),
        comps,
    })
}

/// Component vector back to the standard carrier, O(n 2^n). Exact inverse
/// of `to_idempotent` up to floating rounding; exact on dyadics.
pub fn from_idempotent(r: &IdempotentRep) -> Multicomplex {
    let len = r.level.coeff_count();
    let mut buf = vec![0.0; len];
    for (p, z) in r.comps.iter().enumerate() {
        buf[2 * p] = z.re;
        buf[2 * p + 1] = z.im;
    }
    let mut block = 4;
    while block <= len {
        let half = block / 2;
        let quarter = block / 4;
        for start in (0..len).step_by(block) {
            for j in 0..quarter {
                let ap = buf[start + j];
                let bp = buf[start + j + quarter];
                let cp = buf[start + half + j];
                let dp = buf[start + half + j + quarter];
                buf[start + j] = 0.5 * (ap + cp);
                buf[start + j + quarter] = 0.5 * (bp + dp);
                buf[start + half + j] = 0.5 * (dp - bp);
                buf[start + half + j + quarter] = 0.5 * (ap - cp);
            }
        }
        block *= 2;
    }
    Multicomplex::from_coeffs(r.level, buf).expect("transform preserves shape and finiteness")
}

/// All distinct conjugates of Γ_n = γ_2 ⋯ γ_n under the 2^n conjugations.
/// Comparison is exact: the coefficients involved are dyadic rationals and
/// every step is exact in binary floating point. The result is the whole
/// canonical basis, 2^(n-1) elements.
pub fn enumerate_conjugate_orbit(level: Level) -> Result<Vec<IdempotentRep>> {
    let gamma_word = epsilon(level, 0)?;
    let mut orbit: Vec<IdempotentRep> = Vec::new();
    for bits in 0..level.coeff_count() as u32 {
        let conj = gamma_word.conjugate(ConjugationMask::from_bits(bits))?;
        let rep = to_idempotent(&conj)?;
        if !orbit.contains(&rep) {
            orbit.push(rep);
        }
    }
    Ok(orbit)
}

/// Element of the multiperplex shard D_n: all canonical components real.
/// Carries the componentwise partial order.
#[derive(Debug, Clone, PartialEq)]
pub struct Multiperplex {
    level: Level,
    comps: Vec<f64>,
}

impl Multiperplex {
    pub fn from_components(level: Level, comps: Vec<f64>) -> Result<Self> {
        if level.get() < 2 {
            return Err(McError::LevelTooLow(level.get()));
        }
        if comps.len() != level.component_count() {
            return Err(McError::CoeffLength {
                got: comps.len(),
                expected: level.component_count(),
            });
        }
        if let Some(bad) = comps.iter().position(|x| !x.is_finite()) {
            return Err(McError::NonFinite(bad));
        }
        Ok(Multiperplex { level, comps })
    }

    /// Reads a multiperplex value off a component vector, rejecting any
    /// component whose imaginary part exceeds the scaled tolerance.
    pub fn from_rep(r: &IdempotentRep, tol: f64) -> Result<Self> {
        let thr = r.null_threshold(tol);
        for (p, z) in r.comps.iter().enumerate() {
            if z.im.abs() > thr {
                return Err(McError::NotMultiperplex {
                    index: p,
                    imag: z.im,
                });
            }
        }
        Ok(Multiperplex {
            level: r.level,
            comps: r.comps.iter().map(|z| z.re).collect(),
        })
    }

    pub fn to_rep(&self) -> IdempotentRep {
        IdempotentRep {
            level: self.level,
            comps: self.comps.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn components(&self) -> &[f64] {
        &self.comps
    }

    /// The product (componentwise) partial order on D_n.
    pub fn leq(&self, rhs: &Self) -> Result<bool> {
        self.level.check_eq(rhs.level)?;
        Ok(self.comps.iter().zip(&rhs.comps).all(|(a, b)| a <= b))
    }

    /// Membership in the nonnegative cone D_n^+.
    pub fn is_nonnegative(&self) -> bool {
        self.comps.iter().all(|&x| x >= 0.0)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.level.check_eq(rhs.level)?;
        Ok(Multiperplex {
            level: self.level,
            comps: self
                .comps
                .iter()
                .zip(&rhs.comps)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.level.check_eq(rhs.level)?;
        Ok(Multiperplex {
            level: self.level,
            comps: self
                .comps
                .iter()
                .zip(&rhs.comps)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    pub fn approx_eq(&self, rhs: &Self, tol: f64) -> Result<bool> {
        self.to_rep().approx_eq(&rhs.to_rep(), tol)
    }
}
