//! Free module M_n^m with its canonical scalar product.
//!
//! A ket is an m-tuple of multicomplex numbers. Through the idempotent
//! basis it is a direct sum of 2^(n-1) complex m-vectors (its slices), and
//! the scalar product is assembled from the complex products slice by
//! slice:
//!
//! ```text
//!     (u, v) = Σ_p (u_p, v_p)_C ε_p,
//! ```
//!
//! conjugate-linear in the first argument, Hermitian with respect to the
//! total conjugation, and positive definite against the nonnegative cone:
//! (v, v) is multiperplex with nonnegative components, vanishing at p
//! exactly when slice p of v vanishes. Operators are square matrices; a
//! self-adjoint operator has Hermitian slices, and its spectral
//! decomposition is the slicewise complex one reassembled by eigenvalue
//! rank, giving multiperplex eigenvalues and eigenkets that are never in
//! the null cone.

use num_complex::Complex64;

use crate::error::{McError, Result};
use crate::idempotent::{IdempotentRep, Multiperplex};
use crate::linalg::{ComplexMatrix, McMatrix};
use crate::standard::{Level, DEFAULT_TOL};

/// One complex slice of a ket.
pub type KetSlice = Vec<Complex64>;

/// Element of the free module M_n^m in the idempotent carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    level: Level,
    entries: Vec<IdempotentRep>,
}

impl Ket {
    pub fn from_entries(level: Level, entries: Vec<IdempotentRep>) -> Result<Self> {
        if level.get() < 2 {
            return Err(McError::LevelTooLow(level.get()));
        }
        for e in &entries {
            level.check_eq(e.level())?;
        }
        Ok(Ket { level, entries })
    }

    pub fn zero(level: Level, m: usize) -> Result<Self> {
        let z = IdempotentRep::zero(level)?;
        Self::from_entries(level, vec![z; m])
    }

    /// The working-basis vector e_l.
    pub fn basis_vector(level: Level, m: usize, l: usize) -> Result<Self> {
        if l >= m {
            return Err(McError::IndexOutOfRange {
                index: l,
                level: level.get(),
                max: m,
            });
        }
        let mut out = Self::zero(level, m)?;
        out.entries[l] = IdempotentRep::one(level)?;
        Ok(out)
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[IdempotentRep] {
        &self.entries
    }

    pub fn get(&self, l: usize) -> &IdempotentRep {
        &self.entries[l]
    }

    /// The complex m-vector at component p.
    pub fn project(&self, p: usize) -> Result<KetSlice> {
        if p >= self.level.component_count() {
            return Err(McError::IndexOutOfRange {
                index: p,
                level: self.level.get(),
                max: self.level.component_count(),
            });
        }
        Ok(self.entries.iter().map(|e| e.components()[p]).collect())
    }

    /// Reassembles a ket from one complex vector per component.
    pub fn from_slices(level: Level, slices: &[KetSlice]) -> Result<Self> {
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
        let m = slices[0].len();
        for s in slices {
            if s.len() != m {
                return Err(McError::DimensionMismatch {
                    left: s.len(),
                    right: m,
                });
            }
        }
        let entries = (0..m)
            .map(|l| IdempotentRep::from_components(level, slices.iter().map(|s| s[l]).collect()))
            .collect::<Result<_>>()?;
        Self::from_entries(level, entries)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_shape(rhs)?;
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.add_fast(b))
            .collect::<Result<_>>()?;
        Self::from_entries(self.level, entries)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_shape(rhs)?;
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.sub_fast(b))
            .collect::<Result<_>>()?;
        Self::from_entries(self.level, entries)
    }

    /// Scales by a multicomplex scalar.
    pub fn scale_by(&self, r: &IdempotentRep) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.mul_fast(r))
            .collect::<Result<_>>()?;
        Self::from_entries(self.level, entries)
    }

    fn check_shape(&self, rhs: &Self) -> Result<()> {
        self.level.check_eq(rhs.level)?;
        if self.entries.len() != rhs.entries.len() {
            return Err(McError::DimensionMismatch {
                left: self.entries.len(),
                right: rhs.entries.len(),
            });
        }
        Ok(())
    }

    fn slice_norms(&self) -> Vec<f64> {
        (0..self.level.component_count())
            .map(|p| {
                self.entries
                    .iter()
                    .map(|e| e.components()[p].norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .collect()
    }

    /// Indices of slices with Euclidean norm at or below the scaled
    /// threshold.
    pub fn vanishing_slices(&self, tol: f64) -> Vec<usize> {
        let norms = self.slice_norms();
        let thr = tol * (1.0 + norms.iter().fold(0.0f64, |m, x| m.max(*x)));
        norms
            .iter()
            .enumerate()
            .filter(|(_, s)| **s <= thr)
            .map(|(p, _)| p)
            .collect()
    }

    /// True when some slice vanishes; such kets cannot be normalized and
    /// witness the degeneracy of the scalar product over the ring.
    pub fn is_null_cone(&self, tol: f64) -> bool {
        !self.vanishing_slices(tol).is_empty()
    }

    /// Scalar product, conjugate-linear in `self` and linear in `rhs`.
    pub fn scalar_product(&self, rhs: &Self) -> Result<IdempotentRep> {
        self.check_shape(rhs)?;
        let count = self.level.component_count();
        let comps = (0..count)
            .map(|p| {
                self.entries
                    .iter()
                    .zip(&rhs.entries)
                    .map(|(u, v)| u.components()[p].conj() * v.components()[p])
                    .sum()
            })
            .collect();
        IdempotentRep::from_components(self.level, comps)
    }

    /// The induced complex scalar product, the sum of all slice products.
    pub fn scalar_product_complex(&self, rhs: &Self) -> Result<Complex64> {
        Ok(self.scalar_product(rhs)?.components().iter().sum())
    }

    pub fn normalize(&self) -> Result<Self> {
        self.normalize_with_tol(DEFAULT_TOL)
    }

    /// Scales each slice to unit Euclidean norm, multiplying by
    /// Σ_p a_p^{-1/2} ε_p where a_p are the components of (v, v). Fails on
    /// the null cone, naming the vanishing slices.
    pub fn normalize_with_tol(&self, tol: f64) -> Result<Self> {
        let bad = self.vanishing_slices(tol);
        if !bad.is_empty() {
            return Err(McError::NullCone { indices: bad });
        }
        let factors: Vec<Complex64> = self
            .slice_norms()
            .iter()
            .map(|s| Complex64::new(1.0 / s, 0.0))
            .collect();
        let scale = IdempotentRep::from_components(self.level, factors)?;
        self.scale_by(&scale)
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

/// The vector representing a module functional against the scalar product.
/// The functional is given by its values on the working basis; the
/// representing ket has coordinates f(e_l) under the total conjugation, so
/// that (riesz, φ) = Σ_l f(e_l) φ_l = f(φ).
pub fn riesz_vector(level: Level, f_values: &[IdempotentRep]) -> Result<Ket> {
    let entries = f_values.iter().map(|f| f.lambda_conjugate()).collect();
    Ket::from_entries(level, entries)
}

/// Applies an operator: ordinary matrix action on the entry column.
pub fn apply_operator(a: &McMatrix, v: &Ket) -> Result<Ket> {
    a.level().check_eq(v.level())?;
    if a.dim() != v.dim() {
        return Err(McError::DimensionMismatch {
            left: a.dim(),
            right: v.dim(),
        });
    }
    let entries = (0..a.dim())
        .map(|i| {
            let mut acc = IdempotentRep::zero(a.level())?;
            for j in 0..a.dim() {
                acc = acc.add_fast(&a.get(i, j).mul_fast(v.get(j))?)?;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    Ket::from_entries(a.level(), entries)
}

/// |u><v|: the operator sending χ to u (v, χ).
pub fn outer_product(u: &Ket, v: &Ket) -> Result<McMatrix> {
    u.level().check_eq(v.level())?;
    if u.dim() != v.dim() {
        return Err(McError::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    let m = u.dim();
    let mut entries = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            entries.push(u.get(i).mul_fast(&v.get(j).lambda_conjugate())?);
        }
    }
    McMatrix::from_entries(u.level(), m, entries)
}

fn non_hermitian_slice(a: &McMatrix, tol: f64) -> Result<Option<usize>> {
    for p in 0..a.level().component_count() {
        let s = a.project(p)?;
        let thr = tol * (1.0 + s.max_abs());
        let m = s.dim();
        for i in 0..m {
            for j in 0..=i {
                if (s.get(i, j) - s.get(j, i).conj()).norm() > thr {
                    return Ok(Some(p));
                }
            }
        }
    }
    Ok(None)
}

/// Self-adjoint against the scalar product: every slice Hermitian within
/// the scaled entrywise tolerance.
pub fn is_self_adjoint(a: &McMatrix, tol: f64) -> Result<bool> {
    Ok(non_hermitian_slice(a, tol)?.is_none())
}

const MAX_SWEEPS: usize = 64;

/// Eigensystem of a Hermitian complex matrix by cyclic Jacobi rotations.
///
/// Returns the eigenvalues in ascending order and a unitary matrix whose
/// columns are the matching eigenvectors, each normalized with its first
/// significant entry rotated to be real positive. Equal eigenvalues are
/// ordered by lexicographic comparison of those phase-fixed columns, so
/// the output is deterministic.
pub fn hermitian_eig_slice(h: &ComplexMatrix, tol: f64) -> Result<(Vec<f64>, ComplexMatrix)> {
    let m = h.dim();
    let thr = tol * (1.0 + h.max_abs());
    for i in 0..m {
        for j in 0..=i {
            if (h.get(i, j) - h.get(j, i).conj()).norm() > thr {
                return Err(McError::NotHermitian);
            }
        }
    }
    // exact symmetrization keeps the diagonal real from here on
    let mut a = ComplexMatrix::from_fn(m, |i, j| 0.5 * (h.get(i, j) + h.get(j, i).conj()));
    let mut v = ComplexMatrix::identity(m);
    let scale = 1.0 + a.frobenius();
    let target = f64::EPSILON * scale * m as f64;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut off_sq = 0.0;
        for i in 0..m {
            for j in (i + 1)..m {
                off_sq += a.get(i, j).norm_sqr();
            }
        }
        if off_sq.sqrt() <= target {
            converged = true;
            break;
        }
        for p in 0..m {
            for q in (p + 1)..m {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        // accept anything inside the caller's tolerance before giving up
        let mut off_sq = 0.0;
        for i in 0..m {
            for j in (i + 1)..m {
                off_sq += a.get(i, j).norm_sqr();
            }
        }
        if off_sq.sqrt() > tol.max(f64::EPSILON) * scale {
            return Err(McError::NoConvergence(MAX_SWEEPS));
        }
    }

    let mut pairs: Vec<(f64, Vec<Complex64>)> = (0..m)
        .map(|k| {
            let mut col: Vec<Complex64> = (0..m).map(|i| v.get(i, k)).collect();
            phase_fix(&mut col);
            (a.get(k, k).re, col)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then_with(|| lex_cmp(&x.1, &y.1)));

    let values = pairs.iter().map(|(lam, _)| *lam).collect();
    let vectors = ComplexMatrix::from_fn(m, |i, k| pairs[k].1[i]);
    Ok((values, vectors))
}

/// One Jacobi rotation zeroing the (p, q) entry: a unitary plane rotation
/// with the phase of a_pq folded in, applied as a congruence to `a` and
/// accumulated into `v`.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let m = a.dim();
    let apq = a.get(p, q);
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let u = apq / r;
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // right multiplication by the rotation, columns p and q
    for k in 0..m {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, c * akp - s * u.conj() * akq);
        a.set(k, q, s * u * akp + c * akq);
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, c * vkp - s * u.conj() * vkq);
        v.set(k, q, s * u * vkp + c * vkq);
    }
    // left multiplication by the adjoint rotation, rows p and q
    for k in 0..m {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, c * apk - s * u * aqk);
        a.set(q, k, s * u.conj() * apk + c * aqk);
    }
    // clamp what the rotation made zero by construction
    a.set(p, q, Complex64::new(0.0, 0.0));
    a.set(q, p, Complex64::new(0.0, 0.0));
    let dpp = a.get(p, p);
    let dqq = a.get(q, q);
    a.set(p, p, Complex64::new(dpp.re, 0.0));
    a.set(q, q, Complex64::new(dqq.re, 0.0));
}

/// Rotates the global phase so the first entry of significant modulus is
/// real positive. Columns arrive with unit norm.
fn phase_fix(col: &mut [Complex64]) {
    const SIGNIFICANT: f64 = 1e-9;
    if let Some(lead) = col.iter().find(|z| z.norm() > SIGNIFICANT) {
        let factor = lead.conj() / lead.norm();
        for z in col.iter_mut() {
            *z *= factor;
        }
    }
}

fn lex_cmp(a: &[Complex64], b: &[Complex64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o != std::cmp::Ordering::Equal {
            return o;
        }
    }
    std::cmp::Ordering::Equal
}

/// Spectral decomposition of a self-adjoint operator.
#[derive(Debug, Clone)]
pub struct SpectralResult {
    /// Eigenvalues, multiperplex, paired across slices by ascending rank.
    pub eigenvalues: Vec<Multiperplex>,
    /// Matching eigenkets; every slice is a unit vector, so none of these
    /// is in the null cone.
    pub eigenkets: Vec<Ket>,
    /// Largest entrywise deviation of Σ_l λ_l |ψ_l><ψ_l| from the input.
    pub residual: f64,
}

/// Diagonalizes every slice and reassembles by eigenvalue rank: the l-th
/// eigenvalue collects the l-th smallest slice eigenvalue of every slice,
/// and the l-th eigenket collects the matching slice eigenvectors.
pub fn spectral_decompose(a: &McMatrix, tol: f64) -> Result<SpectralResult> {
    if let Some(slice) = non_hermitian_slice(a, tol)? {
        return Err(McError::NotSelfAdjoint { slice });
    }
    let level = a.level();
    let count = level.component_count();
    let m = a.dim();
    let mut slice_values = Vec::with_capacity(count);
    let mut slice_vectors = Vec::with_capacity(count);
    for p in 0..count {
        let (vals, vecs) = hermitian_eig_slice(&a.project(p)?, tol)?;
        slice_values.push(vals);
        slice_vectors.push(vecs);
    }

    let mut eigenvalues = Vec::with_capacity(m);
    let mut eigenkets = Vec::with_capacity(m);
    for l in 0..m {
        let comps: Vec<f64> = (0..count).map(|p| slice_values[p][l]).collect();
        eigenvalues.push(Multiperplex::from_components(level, comps)?);
        let slices: Vec<KetSlice> = (0..count)
            .map(|p| (0..m).map(|i| slice_vectors[p].get(i, l)).collect())
            .collect();
        eigenkets.push(Ket::from_slices(level, &slices)?);
    }

    let mut residual = 0.0f64;
    for p in 0..count {
        let rebuilt = ComplexMatrix::from_fn(m, |i, j| {
            (0..m)
                .map(|l| {
                    slice_values[p][l]
                        * slice_vectors[p].get(i, l)
                        * slice_vectors[p].get(j, l).conj()
                })
                .sum()
        });
        let original = a.project(p)?;
        for i in 0..m {
            for j in 0..m {
                residual = residual.max((rebuilt.get(i, j) - original.get(i, j)).norm());
            }
        }
    }

    Ok(SpectralResult {
        eigenvalues,
        eigenkets,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::idempotent::{gamma, gamma_prime, to_idempotent};
    use rand::prelude::*;

    fn lv(n: usize) -> Level {
        Level::new(n).unwrap()
    }

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_rep(rng: &mut StdRng, n: usize) -> IdempotentRep {
        let count = lv(n).component_count();
        IdempotentRep::from_components(
            lv(n),
            (0..count)
                .map(|_| z(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)))
                .collect(),
        )
        .unwrap()
    }

    fn random_ket(rng: &mut StdRng, n: usize, m: usize) -> Ket {
        Ket::from_entries(lv(n), (0..m).map(|_| random_rep(rng, n)).collect()).unwrap()
    }

    fn random_self_adjoint(rng: &mut StdRng, n: usize, m: usize) -> McMatrix {
        let count = lv(n).component_count();
        let slices: Vec<ComplexMatrix> = (0..count)
            .map(|_| {
                let raw = ComplexMatrix::from_fn(m, |_, _| {
                    z(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))
                });
                ComplexMatrix::from_fn(m, |i, j| 0.5 * (raw.get(i, j) + raw.get(j, i).conj()))
            })
            .collect();
        McMatrix::from_slices(lv(n), &slices).unwrap()
    }

    #[test]
    fn scalar_product_is_sesquilinear() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0020);
        for _ in 0..50 {
            let u = random_ket(&mut rng, 3, 4);
            let v = random_ket(&mut rng, 3, 4);
            let w = random_ket(&mut rng, 3, 4);
            let alpha = random_rep(&mut rng, 3);
            // linear in the second argument
            let lhs = u
                .scalar_product(&v.scale_by(&alpha).unwrap().add(&w).unwrap())
                .unwrap();
            let rhs = u
                .scalar_product(&v)
                .unwrap()
                .mul_fast(&alpha)
                .unwrap()
                .add_fast(&u.scalar_product(&w).unwrap())
                .unwrap();
            assert!(lhs.approx_eq(&rhs, 1e-10).unwrap());
            // conjugate-linear in the first argument
            let lhs2 = u.scale_by(&alpha).unwrap().scalar_product(&v).unwrap();
            let rhs2 = u
                .scalar_product(&v)
                .unwrap()
                .mul_fast(&alpha.lambda_conjugate())
                .unwrap();
            assert!(lhs2.approx_eq(&rhs2, 1e-10).unwrap());
            // Hermitian against the total conjugation
            let uv = u.scalar_product(&v).unwrap();
            let vu = v.scalar_product(&u).unwrap();
            assert!(uv.approx_eq(&vu.lambda_conjugate(), 1e-12).unwrap());
        }
    }

    #[test]
    fn scalar_product_is_positive_on_the_cone() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0021);
        for _ in 0..50 {
            let v = random_ket(&mut rng, 3, 4);
            let vv = v.scalar_product(&v).unwrap();
            let d = Multiperplex::from_rep(&vv, 1e-12).unwrap();
            assert!(d.is_nonnegative());
        }
    }

    #[test]
    fn orthogonal_idempotent_lines_have_zero_product() {
        let e1 = IdempotentRep::epsilon_rep(lv(2), 0).unwrap();
        let e2 = IdempotentRep::epsilon_rep(lv(2), 1).unwrap();
        let u = Ket::from_entries(lv(2), vec![e1]).unwrap();
        let v = Ket::from_entries(lv(2), vec![e2]).unwrap();
        assert!(u.scalar_product(&v).unwrap().is_zero());
    }

    #[test]
    fn component_basis_gram_matrix_is_the_identity() {
        // {ε_p e_l} under the induced complex product
        let level = lv(3);
        let count = level.component_count();
        let m = 3;
        let mut basis = Vec::new();
        for p in 0..count {
            for l in 0..m {
                let e = Ket::basis_vector(level, m, l)
                    .unwrap()
                    .scale_by(&IdempotentRep::epsilon_rep(level, p).unwrap())
                    .unwrap();
                basis.push(e);
            }
        }
        for (i, u) in basis.iter().enumerate() {
            for (j, v) in basis.iter().enumerate() {
                let g = u.scalar_product_complex(v).unwrap();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g - z(want, 0.0)).norm() < 1e-14, "gram({i},{j})");
            }
        }
    }

    #[test]
    fn null_cone_matches_vanishing_scalar_product_components() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0022);
        for _ in 0..50 {
            let mut v = random_ket(&mut rng, 2, 3);
            if rng.random_bool(0.5) {
                // kill slice 0
                let e2 = IdempotentRep::epsilon_rep(lv(2), 1).unwrap();
                v = v.scale_by(&e2).unwrap();
            }
            let vv = v.scalar_product(&v).unwrap();
            let product_vanishes = vv.in_null_cone(1e-12);
            assert_eq!(v.is_null_cone(1e-12), product_vanishes);
        }
    }

    #[test]
    fn normalization_scales_each_slice() {
        // (3 ε_1 + 4 ε_2) e_1 normalizes to e_1
        let scale = IdempotentRep::from_components(lv(2), vec![z(3.0, 0.0), z(4.0, 0.0)]).unwrap();
        let v = Ket::basis_vector(lv(2), 2, 0)
            .unwrap()
            .scale_by(&scale)
            .unwrap();
        let normalized = v.normalize().unwrap();
        assert!(normalized
            .approx_eq(&Ket::basis_vector(lv(2), 2, 0).unwrap(), 1e-15)
            .unwrap());
        let vv = normalized.scalar_product(&normalized).unwrap();
        assert!(vv
            .approx_eq(&IdempotentRep::one(lv(2)).unwrap(), 1e-14)
            .unwrap());
    }

    #[test]
    fn normalization_fails_on_the_null_cone_with_indices() {
        let e1 = IdempotentRep::epsilon_rep(lv(2), 0).unwrap();
        let v = Ket::basis_vector(lv(2), 2, 0)
            .unwrap()
            .scale_by(&e1)
            .unwrap();
        assert_eq!(
            v.normalize().unwrap_err(),
            McError::NullCone { indices: vec![1] }
        );
    }

    #[test]
    fn riesz_vector_represents_the_functional() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0023);
        let m = 4;
        for _ in 0..50 {
            let f_values: Vec<IdempotentRep> = (0..m).map(|_| random_rep(&mut rng, 3)).collect();
            let psi = riesz_vector(lv(3), &f_values).unwrap();
            let phi = random_ket(&mut rng, 3, m);
            // f(φ) by direct evaluation: Σ_l f(e_l) φ_l
            let mut direct = IdempotentRep::zero(lv(3)).unwrap();
            for l in 0..m {
                direct = direct
                    .add_fast(&f_values[l].mul_fast(phi.get(l)).unwrap())
                    .unwrap();
            }
            let via_product = psi.scalar_product(&phi).unwrap();
            assert!(via_product.approx_eq(&direct, 1e-10).unwrap());
        }
    }

    #[test]
    fn riesz_vector_on_a_basis_functional() {
        let mut f = vec![IdempotentRep::zero(lv(2)).unwrap(); 3];
        f[0] = IdempotentRep::one(lv(2)).unwrap();
        let psi = riesz_vector(lv(2), &f).unwrap();
        assert_eq!(psi, Ket::basis_vector(lv(2), 3, 0).unwrap());
    }

    #[test]
    fn operator_application_annihilates_complementary_components() {
        // diag(ε_1, ε_1) applied to ε_2 (e_1 + e_2)
        let e1 = IdempotentRep::epsilon_rep(lv(2), 0).unwrap();
        let e2 = IdempotentRep::epsilon_rep(lv(2), 1).unwrap();
        let zero = IdempotentRep::zero(lv(2)).unwrap();
        let a = McMatrix::from_entries(lv(2), 2, vec![e1.clone(), zero.clone(), zero, e1]).unwrap();
        let v = Ket::from_entries(lv(2), vec![e2.clone(), e2]).unwrap();
        let av = apply_operator(&a, &v).unwrap();
        assert!(av.entries().iter().all(|e| e.is_zero()));
    }

    #[test]
    fn identical_slice_operators_commute_with_projection() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0024);
        let m = 3;
        let c = ComplexMatrix::from_fn(m, |_, _| {
            z(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))
        });
        let a = McMatrix::from_slices(lv(2), &[c.clone(), c.clone()]).unwrap();
        let v = random_ket(&mut rng, 2, m);
        for p in 0..2 {
            let lhs = apply_operator(&a, &v).unwrap().project(p).unwrap();
            let rhs = c.mul_vec(&v.project(p).unwrap()).unwrap();
            for (x, y) in lhs.iter().zip(&rhs) {
                assert!((x - y).norm() < 1e-12);
            }
            // applying the operator to the embedded projection agrees too
            let embedded =
                Ket::from_slices(lv(2), &[v.project(p).unwrap(), v.project(p).unwrap()]).unwrap();
            let back = apply_operator(&a, &embedded).unwrap().project(p).unwrap();
            for (x, y) in back.iter().zip(&rhs) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn self_adjointness_detection() {
        // constant slices of a Pauli-like matrix are Hermitian
        let zero = IdempotentRep::zero(lv(2)).unwrap();
        let i_scalar = IdempotentRep::scalar(lv(2), z(0.0, 1.0)).unwrap();
        let pauli = McMatrix::from_entries(
            lv(2),
            2,
            vec![zero.clone(), i_scalar.clone(), i_scalar.neg(), zero.clone()],
        )
        .unwrap();
        assert!(is_self_adjoint(&pauli, 1e-12).unwrap());

        let e1 = IdempotentRep::epsilon_rep(lv(2), 0).unwrap();
        let one = IdempotentRep::one(lv(2)).unwrap();
        let skew = McMatrix::from_entries(lv(2), 2, vec![zero.clone(), one, e1, zero]).unwrap();
        assert!(!is_self_adjoint(&skew, 1e-12).unwrap());
        assert!(matches!(
            spectral_decompose(&skew, 1e-12),
            Err(McError::NotSelfAdjoint { .. })
        ));
    }

    #[test]
    fn jacobi_solves_a_known_two_by_two() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let mut h = ComplexMatrix::zeros(2);
        h.set(0, 0, z(2.0, 0.0));
        h.set(0, 1, z(0.0, 1.0));
        h.set(1, 0, z(0.0, -1.0));
        h.set(1, 1, z(2.0, 0.0));
        let (vals, vecs) = hermitian_eig_slice(&h, 1e-12).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-12);
        assert!((vals[1] - 3.0).abs() < 1e-12);
        for k in 0..2 {
            let v: Vec<Complex64> = (0..2).map(|i| vecs.get(i, k)).collect();
            let hv = h.mul_vec(&v).unwrap();
            for i in 0..2 {
                assert!((hv[i] - vals[k] * v[i]).norm() < 1e-12);
            }
            // phase fix leaves the leading entry real positive
            let lead = v.iter().find(|e| e.norm() > 1e-9).unwrap();
            assert!(lead.im.abs() < 1e-12 && lead.re > 0.0);
        }
    }

    #[test]
    fn jacobi_random_hermitian_residuals() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0025);
        for m in 2..=6 {
            for _ in 0..20 {
                let raw = ComplexMatrix::from_fn(m, |_, _| {
                    z(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))
                });
                let h =
                    ComplexMatrix::from_fn(m, |i, j| 0.5 * (raw.get(i, j) + raw.get(j, i).conj()));
                let (vals, vecs) = hermitian_eig_slice(&h, 1e-12).unwrap();
                // ascending
                for k in 1..m {
                    assert!(vals[k - 1] <= vals[k]);
                }
                // residual and orthonormality
                let hnorm = h.frobenius();
                for k in 0..m {
                    let v: Vec<Complex64> = (0..m).map(|i| vecs.get(i, k)).collect();
                    let hv = h.mul_vec(&v).unwrap();
                    let res: f64 = hv
                        .iter()
                        .zip(&v)
                        .map(|(a, b)| (a - vals[k] * b).norm_sqr())
                        .sum::<f64>()
                        .sqrt();
                    assert!(res <= 1e-12 * (1.0 + hnorm), "residual {res} at m={m}");
                }
                let gram = vecs.adjoint().mul(&vecs).unwrap();
                assert!(gram.approx_eq(&ComplexMatrix::identity(m), 1e-12));
            }
        }
    }

    #[test]
    fn jacobi_rejects_non_hermitian_input() {
        let mut h = ComplexMatrix::zeros(2);
        h.set(0, 1, z(1.0, 0.0));
        assert!(matches!(
            hermitian_eig_slice(&h, 1e-12),
            Err(McError::NotHermitian)
        ));
    }

    #[test]
    fn spectral_decomposition_of_the_idempotent_diagonal() {
        // diag(γ_2, γ'_2): eigenvalues 0 and 1, eigenkets swapping the
        // basis lines across components
        let g = to_idempotent(&gamma(lv(2), 2).unwrap()).unwrap();
        let gp = to_idempotent(&gamma_prime(lv(2), 2).unwrap()).unwrap();
        let zero = IdempotentRep::zero(lv(2)).unwrap();
        let a = McMatrix::from_entries(lv(2), 2, vec![g, zero.clone(), zero, gp]).unwrap();
        let spec = spectral_decompose(&a, 1e-12).unwrap();
        assert_eq!(spec.eigenvalues[0].components(), &[0.0, 0.0]);
        assert_eq!(spec.eigenvalues[1].components(), &[1.0, 1.0]);
        let e1 = IdempotentRep::epsilon_rep(lv(2), 0).unwrap();
        let e2 = IdempotentRep::epsilon_rep(lv(2), 1).unwrap();
        // ψ_1 = ε_1 e_2 + ε_2 e_1, ψ_2 = ε_1 e_1 + ε_2 e_2, exactly
        assert_eq!(spec.eigenkets[0].get(0), &e2);
        assert_eq!(spec.eigenkets[0].get(1), &e1);
        assert_eq!(spec.eigenkets[1].get(0), &e1);
        assert_eq!(spec.eigenkets[1].get(1), &e2);
        assert!(spec.residual < 1e-15);
    }

    #[test]
    fn spectral_decomposition_reconstructs_random_operators() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0026);
        for _ in 0..10 {
            let a = random_self_adjoint(&mut rng, 3, 4);
            let spec = spectral_decompose(&a, 1e-12).unwrap();
            assert!(spec.residual <= 1e-9);
            // eigenvalues are real multiperplex by construction; eigenkets
            // stay off the null cone and form an orthonormal family
            for l in 0..4 {
                assert!(!spec.eigenkets[l].is_null_cone(1e-12));
                for k in 0..4 {
                    let g = spec.eigenkets[l]
                        .scalar_product(&spec.eigenkets[k])
                        .unwrap();
                    let want = if l == k {
                        IdempotentRep::one(lv(3)).unwrap()
                    } else {
                        IdempotentRep::zero(lv(3)).unwrap()
                    };
                    assert!(g.approx_eq(&want, 1e-9).unwrap());
                }
            }
            // rebuild through outer products
            let mut rebuilt = McMatrix::zeros(lv(3), 4).unwrap();
            for l in 0..4 {
                let term = outer_product(&spec.eigenkets[l], &spec.eigenkets[l])
                    .unwrap()
                    .scale_by(&spec.eigenvalues[l].to_rep())
                    .unwrap();
                rebuilt = rebuilt.add(&term).unwrap();
            }
            assert!(rebuilt.approx_eq(&a, 1e-9).unwrap());
        }
    }

    #[test]
    fn outer_products_of_an_orthonormal_basis_resolve_the_identity() {
        let level = lv(2);
        let m = 3;
        let mut acc = McMatrix::zeros(level, m).unwrap();
        for l in 0..m {
            let e = Ket::basis_vector(level, m, l).unwrap();
            acc = acc.add(&outer_product(&e, &e).unwrap()).unwrap();
        }
        assert!(acc
            .approx_eq(&McMatrix::identity(level, m).unwrap(), 1e-15)
            .unwrap());
    }

    #[test]
    fn outer_product_action_matches_scalar_product() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0027);
        let u = random_ket(&mut rng, 2, 3);
        let v = random_ket(&mut rng, 2, 3);
        let chi = random_ket(&mut rng, 2, 3);
        let lhs = apply_operator(&outer_product(&u, &v).unwrap(), &chi).unwrap();
        let rhs = u.scale_by(&v.scalar_product(&chi).unwrap()).unwrap();
        assert!(lhs.approx_eq(&rhs, 1e-10).unwrap());
    }

    #[test]
    fn change_of_basis_preserves_null_slices_and_slice_rank() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0028);
        let m = 4;
        let s = loop {
            let cand = {
                let count = lv(2).component_count();
                let entries = (0..m * m)
                    .map(|_| {
                        IdempotentRep::from_components(
                            lv(2),
                            (0..count)
                                .map(|_| {
                                    z(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))
                                })
                                .collect(),
                        )
                        .unwrap()
                    })
                    .collect();
                McMatrix::from_entries(lv(2), m, entries).unwrap()
            };
            if !cand.is_singular(1e-10).unwrap() {
                break cand;
            }
        };
        // slice rank is full for every component
        for p in 0..2 {
            assert_eq!(s.project(p).unwrap().rank(1e-10), m);
        }
        // a ket with a dead slice keeps it dead through the basis change
        let e2 = IdempotentRep::epsilon_rep(lv(2), 1).unwrap();
        let v = random_ket(&mut rng, 2, m).scale_by(&e2).unwrap();
        let sv = apply_operator(&s, &v).unwrap();
        assert!(sv.project(0).unwrap().iter().all(|x| x.norm() < 1e-14));
        assert!(v.is_null_cone(1e-12) && sv.is_null_cone(1e-12));
    }
}
