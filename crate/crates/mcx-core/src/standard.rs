//! Standard representation of multicomplex numbers.
//!
//! A level-n number is a vector of 2^n real coefficients indexed by subsets
//! A of the units {i_1, .., i_n}: bit k-1 of the index says whether i_k is
//! present. The units commute and each squares to -1, so the whole
//! multiplication table reduces to one rule,
//!
//! ```text
//!     i_A * i_B = (-1)^|A ∩ B| * i_{A Δ B},
//! ```
//!
//! with Δ the symmetric difference (xor on masks). Conjugations flip the
//! sign of selected units; composing them is xor on their masks, so the set
//! of all conjugations forms the group (Z_2^n, xor).

use std::fmt;

use crate::error::{McError, Result};

/// Ceiling on the nesting level. 2^16 coefficients is already 512 KiB per
/// value, which is past the point where this dense carrier makes sense.
pub const MAX_LEVEL: usize = 16;

/// Default relative comparison tolerance.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Nesting depth n of M_n, restricted to `1..=MAX_LEVEL`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Level(u8);

impl Level {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_ceiling(n, MAX_LEVEL)
    }

    /// Same as `new` with a caller-chosen ceiling (still capped at `MAX_LEVEL`).
    pub fn with_ceiling(n: usize, max: usize) -> Result<Self> {
        let max = max.min(MAX_LEVEL);
        if n < 1 || n > max {
            return Err(McError::LevelOutOfRange { level: n, max });
        }
        Ok(Level(n as u8))
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }

    /// Length of the standard coefficient vector, 2^n.
    pub fn coeff_count(self) -> usize {
        1 << self.0
    }

    /// Number of canonical idempotent components, 2^(n-1).
    /// Meaningful only for levels >= 2.
    pub fn component_count(self) -> usize {
        1 << (self.0 - 1)
    }

    pub(crate) fn check_eq(self, other: Level) -> Result<()> {
        if self != other {
            return Err(McError::LevelMismatch {
                left: self.get(),
                right: other.get(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Subset of units as a bitmask, bit k-1 standing for i_k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct UnitIndexSet(u32);

impl UnitIndexSet {
    pub const EMPTY: UnitIndexSet = UnitIndexSet(0);

    pub fn from_bits(bits: u32) -> Self {
        UnitIndexSet(bits)
    }

    /// Builds the set {i_k : k in units}; unit numbers are one-based.
    pub fn from_units(level: Level, units: &[usize]) -> Result<Self> {
        let mut bits = 0u32;
        for &k in units {
            if k < 1 || k > level.get() {
                return Err(McError::UnitOutOfRange {
                    unit: k,
                    level: level.get(),
                });
            }
            bits |= 1 << (k - 1);
        }
        Ok(UnitIndexSet(bits))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn grade(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, k: usize) -> bool {
        k >= 1 && (self.0 >> (k - 1)) & 1 == 1
    }

    fn check_level(self, level: Level) -> Result<()> {
        if self.0 as usize >= level.coeff_count() {
            let top = 32 - self.0.leading_zeros() as usize;
            return Err(McError::UnitOutOfRange {
                unit: top,
                level: level.get(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for UnitIndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        for k in 1..=32 {
            if self.contains(k) {
                write!(f, "i{k}")?;
            }
        }
        Ok(())
    }
}

/// A composition of sign-flip conjugations; bit k-1 set means the unit i_k
/// is negated. Composition is xor, every mask is its own inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ConjugationMask(u32);

impl ConjugationMask {
    pub const IDENTITY: ConjugationMask = ConjugationMask(0);

    pub fn from_bits(bits: u32) -> Self {
        ConjugationMask(bits)
    }

    /// Mask negating the listed one-based units. A zero entry is the
    /// identity conjugation and contributes nothing.
    pub fn from_units(level: Level, units: &[usize]) -> Result<Self> {
        let mut bits = 0u32;
        for &k in units {
            if k == 0 {
                continue;
            }
            if k > level.get() {
                return Err(McError::UnitOutOfRange {
                    unit: k,
                    level: level.get(),
                });
            }
            bits |= 1 << (k - 1);
        }
        Ok(ConjugationMask(bits))
    }

    /// The total conjugation negating every unit up to the level.
    pub fn full(level: Level) -> Self {
        ConjugationMask((level.coeff_count() - 1) as u32)
    }

    pub fn compose(self, other: ConjugationMask) -> ConjugationMask {
        ConjugationMask(self.0 ^ other.0)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, k: usize) -> bool {
        k >= 1 && (self.0 >> (k - 1)) & 1 == 1
    }
}

/// Multicomplex number in the standard (real coefficient) carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct Multicomplex {
    level: Level,
    coeffs: Vec<f64>,
}

impl Multicomplex {
    pub fn zero(level: Level) -> Self {
        Multicomplex {
            level,
            coeffs: vec![0.0; level.coeff_count()],
        }
    }

    pub fn one(level: Level) -> Self {
        Self::scalar(level, 1.0)
    }

    pub fn scalar(level: Level, x: f64) -> Self {
        let mut out = Self::zero(level);
        out.coeffs[0] = x;
        out
    }

    /// The basis element i_A.
    pub fn unit(level: Level, units: UnitIndexSet) -> Result<Self> {
        units.check_level(level)?;
        let mut out = Self::zero(level);
        out.coeffs[units.bits() as usize] = 1.0;
        Ok(out)
    }

    /// Coefficient vector in mask order; length must be 2^n and every entry
    /// finite.
    pub fn from_coeffs(level: Level, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != level.coeff_count() {
            return Err(McError::CoeffLength {
                got: coeffs.len(),
                expected: level.coeff_count(),
            });
        }
        if let Some(bad) = coeffs.iter().position(|x| !x.is_finite()) {
            return Err(McError::NonFinite(bad));
        }
        Ok(Multicomplex { level, coeffs })
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, units: UnitIndexSet) -> Result<f64> {
        units.check_level(self.level)?;
        Ok(self.coeffs[units.bits() as usize])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&x| x == 0.0)
    }

    pub fn max_norm(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.level.check_eq(rhs.level)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Multicomplex {
            level: self.level,
            coeffs,
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.level.check_eq(rhs.level)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Multicomplex {
            level: self.level,
            coeffs,
        })
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    pub fn scale(&self, r: f64) -> Self {
        Multicomplex {
            level: self.level,
            coeffs: self.coeffs.iter().map(|x| x * r).collect(),
        }
    }

    /// Full convolution product, the reference implementation every faster
    /// path is checked against. Deliberately the plain double loop, O(4^n).
    pub fn mul_standard(&self, rhs: &Self) -> Result<Self> {
        self.level.check_eq(rhs.level)?;
        let len = self.coeffs.len();
        let mut out = vec![0.0; len];
        for a in 0..len {
            let xa = self.coeffs[a];
            for b in 0..len {
                let sign = if (a & b).count_ones() & 1 == 1 {
                    -1.0
                } else {
                    1.0
                };
                out[a ^ b] += sign * xa * rhs.coeffs[b];
            }
        }
        Ok(Multicomplex {
            level: self.level,
            coeffs: out,
        })
    }

    /// Applies the conjugation: coefficient at A changes sign iff A shares
    /// an odd number of units with the mask.
    pub fn conjugate(&self, mask: ConjugationMask) -> Result<Self> {
        if mask.bits() as usize >= self.level.coeff_count() {
            let top = 32 - mask.bits().leading_zeros() as usize;
            return Err(McError::UnitOutOfRange {
                unit: top,
                level: self.level.get(),
            });
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(a, &x)| {
                if (a as u32 & mask.bits()).count_ones() & 1 == 1 {
                    -x
                } else {
                    x
                }
            })
            .collect();
        Ok(Multicomplex {
            level: self.level,
            coeffs,
        })
    }

    /// The total conjugation, every unit negated at once.
    pub fn lambda(&self) -> Self {
        self.conjugate(ConjugationMask::full(self.level))
            .expect("full mask is always in range")
    }

    /// Relative comparison: max-norm of the difference against
    /// max(1, |a|, |b|) in max-norm.
    pub fn approx_eq(&self, rhs: &Self, tol: f64) -> Result<bool> {
        self.level.check_eq(rhs.level)?;
        let scale = 1.0_f64.max(self.max_norm()).max(rhs.max_norm());
        Ok(self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .all(|(a, b)| (a - b).abs() <= tol * scale))
    }
}
