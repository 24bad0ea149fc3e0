//! Matrices over M_n.
//!
//! Every projection onto a canonical component is a ring homomorphism, so
//! an m x m multicomplex matrix is exactly a family of 2^(n-1) complex
//! slices, one per component, and determinant, inverse and rank are
//! computed slice by slice and reassembled:
//!
//! ```text
//!     det A = Σ_p (det A_p) ε_p,      A^{-1} = Σ_p (A_p)^{-1} ε_p.
//! ```
//!
//! A is singular exactly when some slice determinant vanishes, in which
//! case the determinant is a zero divisor (or zero). Elimination is never
//! run in multicomplex arithmetic here: pivots there can be zero divisors
//! with no usable modulus, while each complex slice pivots cleanly.

use num_complex::Complex64;

use crate::error::{McError, Result};
use crate::idempotent::IdempotentRep;
use crate::standard::Level;

/// Default singularity tolerance for slice determinants; scaled by matrix
/// size and Frobenius norm before use.
pub const DEFAULT_SINGULAR_TOL: f64 = 1e-10;

/// Dense complex matrix, row-major. The slice carrier for everything in
/// this module.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    m: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(m: usize) -> Self {
        ComplexMatrix {
            m,
            data: vec![Complex64::new(0.0, 0.0); m * m],
        }
    }

    pub fn identity(m: usize) -> Self {
        let mut out = Self::zeros(m);
        for i in 0..m {
            out.data[i * m + i] = Complex64::new(1.0, 0.0);
        }
        out
    }

    pub fn from_fn(m: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { m, data }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.m + j]
    }

    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i * self.m + j] = z;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.m != rhs.m {
            return Err(McError::DimensionMismatch {
                left: self.m,
                right: rhs.m,
            });
        }
        let m = self.m;
        let mut out = Self::zeros(m);
        for i in 0..m {
            for k in 0..m {
                let aik = self.data[i * m + k];
                for j in 0..m {
                    out.data[i * m + j] += aik * rhs.data[k * m + j];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.m {
            return Err(McError::DimensionMismatch {
                left: self.m,
                right: v.len(),
            });
        }
        Ok((0..self.m)
            .map(|i| (0..self.m).map(|j| self.data[i * self.m + j] * v[j]).sum())
            .collect())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.m, |i, j| self.get(j, i).conj())
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    pub fn approx_eq(&self, rhs: &Self, tol: f64) -> bool {
        if self.m != rhs.m {
            return false;
        }
        let scale = 1.0_f64.max(self.max_abs()).max(rhs.max_abs());
        self.data
            .iter()
            .zip(&rhs.data)
            .all(|(a, b)| (a - b).norm() <= tol * scale)
    }

    /// LU factorization with partial pivoting by modulus. Returns the
    /// packed factors, the row permutation, and the permutation sign.
    fn lu(&self) -> (Vec<Complex64>, Vec<usize>, f64) {
        let m = self.m;
        let mut a = self.data.clone();
        let mut perm: Vec<usize> = (0..m).collect();
        let mut sign = 1.0;
        for k in 0..m {
            let mut best = k;
            let mut best_mod = a[perm[k] * m + k].norm();
            for r in (k + 1)..m {
                let cand = a[perm[r] * m + k].norm();
                if cand > best_mod {
                    best = r;
                    best_mod = cand;
                }
            }
            if best != k {
                perm.swap(k, best);
                sign = -sign;
            }
            let pivot = a[perm[k] * m + k];
            if pivot.norm() == 0.0 {
                continue;
            }
            for r in (k + 1)..m {
                let factor = a[perm[r] * m + k] / pivot;
                a[perm[r] * m + k] = factor;
                for c in (k + 1)..m {
                    let sub = factor * a[perm[k] * m + c];
                    a[perm[r] * m + c] -= sub;
                }
            }
        }
        (a, perm, sign)
    }

    /// Determinant via LU; the permutation parity carries the sign.
    pub fn det(&self) -> Complex64 {
        if self.m == 0 {
            return Complex64::new(1.0, 0.0);
        }
        let (a, perm, sign) = self.lu();
        let mut det = Complex64::new(sign, 0.0);
        for k in 0..self.m {
            det *= a[perm[k] * self.m + k];
        }
        det
    }

    /// Inverse via LU solves on the identity columns. `None` when a pivot
    /// vanishes exactly; near-singular guards live a level up, where the
    /// determinant is checked against a scaled tolerance.
    pub fn inverse(&self) -> Option<Self> {
        let m = self.m;
        let (a, perm, _) = self.lu();
        for k in 0..m {
            if a[perm[k] * m + k].norm() == 0.0 {
                return None;
            }
        }
        let mut out = Self::zeros(m);
        let mut col = vec![Complex64::new(0.0, 0.0); m];
        for j in 0..m {
            // forward substitution on the permuted identity column
            for i in 0..m {
                let mut x = if perm[i] == j {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                for k in 0..i {
                    x -= a[perm[i] * m + k] * col[k];
                }
                col[i] = x;
            }
            // back substitution
            for i in (0..m).rev() {
                let mut x = col[i];
                for k in (i + 1)..m {
                    x -= a[perm[i] * m + k] * col[k];
                }
                col[i] = x / a[perm[i] * m + i];
            }
            for i in 0..m {
                out.data[i * m + j] = col[i];
            }
        }
        Some(out)
    }

    /// Rank by counting usable pivots against a scaled threshold.
    pub fn rank(&self, tol: f64) -> usize {
        let m = self.m;
        let (a, perm, _) = self.lu();
        let thr = tol * (1.0 + self.frobenius());
        (0..m).filter(|&k| a[perm[k] * m + k].norm() > thr).count()
    }
}

/// Square matrix over M_n, entries in the idempotent carrier, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct McMatrix {
    level: Level,
    m: usize,
    entries: Vec<IdempotentRep>,
}

impl McMatrix {
    pub fn from_entries(level: Level, m: usize, entries: Vec<IdempotentRep>) -> Result<Self> {
        if level.get() < 2 {
            return Err(McError::LevelTooLow(level.get()));
        }
        if entries.len() != m * m {
            return Err(McError::DimensionMismatch {
                left: entries.len(),
                right: m * m,
            });
        }
        for e in &entries {
            level.check_eq(e.level())?;
        }
        Ok(McMatrix { level, m, entries })
    }

    pub fn zeros(level: Level, m: usize) -> Result<Self> {
        let z = IdempotentRep::zero(level)?;
        Self::from_entries(level, m, vec![z; m * m])
    }

    pub fn identity(level: Level, m: usize) -> Result<Self> {
        let mut out = Self::zeros(level, m)?;
        let one = IdempotentRep::one(level)?;
        for i in 0..m {
            out.entries[i * m + i] = one.clone();
        }
        Ok(out)
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> &IdempotentRep {
        &self.entries[i * self.m + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: IdempotentRep) -> Result<()> {
        self.level.check_eq(value.level())?;
        self.entries[i * self.m + j] = value;
        Ok(())
    }

    pub fn entries(&self) -> &[IdempotentRep] {
        &self.entries
    }

    /// The complex slice at component p.
    pub fn project(&self, p: usize) -> Result<ComplexMatrix> {
        if p >= self.level.component_count() {
            return Err(McError::IndexOutOfRange {
                index: p,
                level: self.level.get(),
                max: self.level.component_count(),
            });
        }
        Ok(ComplexMatrix::from_fn(self.m, |i, j| {
            self.get(i, j).components()[p]
        }))
    }

    /// Reassembles a matrix from one complex slice per component.
    pub fn from_slices(level: Level, slices: &[ComplexMatrix]) -> Result<Self> {
        if level.get() < 2 {
            return Err(McError::LevelTooLow(level.get()));
        }
        let count = level.component_count();
        if slices.len() != count {
            return Err(McError::DimensionMismatch {
                left: slices.len(),
                right: count,
            });
        }
        let m = slices[0].dim();
        for s in slices {
            if s.dim() != m {
                return Err(McError::DimensionMismatch {
                    left: s.dim(),
                    right: m,
                });
            }
        }
        let mut entries = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                let comps = slices.iter().map(|s| s.get(i, j)).collect();
                entries.push(IdempotentRep::from_components(level, comps)?);
            }
        }
        Self::from_entries(level, m, entries)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_shape(rhs)?;
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.add_fast(b))
            .collect::<Result<_>>()?;
        Self::from_entries(self.level, self.m, entries)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_shape(rhs)?;
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.sub_fast(b))
            .collect::<Result<_>>()?;
        Self::from_entries(self.level, self.m, entries)
    }

    /// Scales every entry by a multicomplex scalar.
    pub fn scale_by(&self, r: &IdempotentRep) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.mul_fast(r))
            .collect::<Result<_>>()?;
        Self::from_entries(self.level, self.m, entries)
    }

    fn check_shape(&self, rhs: &Self) -> Result<()> {
        self.level.check_eq(rhs.level)?;
        if self.m != rhs.m {
            return Err(McError::DimensionMismatch {
                left: self.m,
                right: rhs.m,
            });
        }
        Ok(())
    }

    /// Matrix product using componentwise entry arithmetic. Entry ops act
    /// per component, so this is identical to multiplying every slice and
    /// reassembling.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        self.check_shape(rhs)?;
        let m = self.m;
        let mut entries = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                let mut acc = IdempotentRep::zero(self.level)?;
                for k in 0..m {
                    acc = acc.add_fast(&self.get(i, k).mul_fast(rhs.get(k, j))?)?;
                }
                entries.push(acc);
            }
        }
        Self::from_entries(self.level, m, entries)
    }

    /// Transpose with the total conjugation on entries; equals the
    /// conjugate transpose of every slice.
    pub fn adjoint(&self) -> Self {
        let mut entries = Vec::with_capacity(self.m * self.m);
        for i in 0..self.m {
            for j in 0..self.m {
                entries.push(self.get(j, i).lambda_conjugate());
            }
        }
        McMatrix {
            level: self.level,
            m: self.m,
            entries,
        }
    }

    /// Determinant assembled from slice determinants.
    pub fn det(&self) -> Result<IdempotentRep> {
        let comps = (0..self.level.component_count())
            .map(|p| Ok(self.project(p)?.det()))
            .collect::<Result<Vec<_>>>()?;
        IdempotentRep::from_components(self.level, comps)
    }

    /// Slice determinants that vanish against the scaled threshold
    /// tol * (1 + |A_p|_F)^m; these are the components blocking inversion.
    pub fn vanishing_det_components(&self, tol: f64) -> Result<Vec<usize>> {
        let m = self.m as i32;
        let mut out = Vec::new();
        for p in 0..self.level.component_count() {
            let slice = self.project(p)?;
            let thr = tol * (1.0 + slice.frobenius()).powi(m);
            if slice.det().norm() <= thr {
                out.push(p);
            }
        }
        Ok(out)
    }

    /// Singular exactly when the determinant lands in the null cone.
    pub fn is_singular(&self, tol: f64) -> Result<bool> {
        Ok(!self.vanishing_det_components(tol)?.is_empty())
    }

    pub fn invert(&self) -> Result<Self> {
        self.invert_with_tol(DEFAULT_SINGULAR_TOL)
    }

    /// Slicewise inverse; fails exactly when `is_singular` at the same
    /// tolerance, naming the vanishing components.
    pub fn invert_with_tol(&self, tol: f64) -> Result<Self> {
        let bad = self.vanishing_det_components(tol)?;
        if !bad.is_empty() {
            return Err(McError::Singular { indices: bad });
        }
        let slices = (0..self.level.component_count())
            .map(|p| {
                self.project(p)?
                    .inverse()
                    .ok_or(McError::Singular { indices: vec![p] })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_slices(self.level, &slices)
    }

    pub fn approx_eq(&self, rhs: &Self, tol: f64) -> Result<bool> {
        self.check_shape(rhs)?;
        for (a, b) in self.entries.iter().zip(&rhs.entries) {
            if !a.approx_eq(b, tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
