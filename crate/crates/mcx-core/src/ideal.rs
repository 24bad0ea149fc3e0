//! The lattice of ideals of D_n and M_n.
//!
//! Over the canonical basis every ideal is a direct sum of component lines:
//! pick an index set J and take ⊕_{p in J} R ε_p inside the multiperplex
//! shard, or ⊕_{p in J} C(i_1) ε_p in the full algebra. Each such ideal is
//! principal with generator Σ_{p in J} ε_p, minimal exactly when |J| = 1,
//! and maximal exactly when J omits a single index (the hyperplane of
//! elements annihilated by that ε). Meet and join of ideals are then plain
//! intersection and union of index sets, and switching shard is a flavor
//! toggle that keeps J fixed.

use std::collections::BTreeSet;

use crate::error::{McError, Result};
use crate::idempotent::{epsilon, IdempotentRep, Multiperplex};
use crate::standard::{Level, Multicomplex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IdealFlavor {
    /// Ideal of the real-component shard D_n.
    Multiperplex,
    /// Ideal of the full algebra M_n.
    Multicomplex,
}

impl IdealFlavor {
    pub fn name(self) -> &'static str {
        match self {
            IdealFlavor::Multiperplex => "multiperplex",
            IdealFlavor::Multicomplex => "multicomplex",
        }
    }
}

/// An ideal, described intensionally by the set of component indices it
/// spans. No element enumeration is ever stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealSpec {
    level: Level,
    flavor: IdealFlavor,
    indices: BTreeSet<usize>,
}

impl IdealSpec {
    pub fn new(
        level: Level,
        flavor: IdealFlavor,
        indices: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        if level.get() < 2 {
            return Err(McError::LevelTooLow(level.get()));
        }
        let max = level.component_count();
        let mut set = BTreeSet::new();
        for p in indices {
            if p >= max {
                return Err(McError::IndexOutOfRange {
                    index: p,
                    level: level.get(),
                    max,
                });
            }
            set.insert(p);
        }
        Ok(IdealSpec {
            level,
            flavor,
            indices: set,
        })
    }

    /// The zero ideal.
    pub fn zero(level: Level, flavor: IdealFlavor) -> Result<Self> {
        Self::new(level, flavor, [])
    }

    /// The whole ring as an ideal.
    pub fn full(level: Level, flavor: IdealFlavor) -> Result<Self> {
        let count = level.component_count();
        Self::new(level, flavor, 0..count)
    }

    /// The maximal ideal of elements killed by ε_p: every index except p.
    /// Flavor is multiperplex; complexify for the counterpart in M_n.
    pub fn hyperplane(level: Level, p: usize) -> Result<Self> {
        let count = level.component_count();
        if p >= count {
            return Err(McError::IndexOutOfRange {
                index: p,
                level: level.get(),
                max: count,
            });
        }
        Self::new(
            level,
            IdealFlavor::Multiperplex,
            (0..count).filter(|&q| q != p),
        )
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn flavor(&self) -> IdealFlavor {
        self.flavor
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// The generating idempotent Σ_{p in J} ε_p, assembled from the
    /// standard-basis products; exact dyadic coefficients.
    pub fn generator(&self) -> Result<Multicomplex> {
        let mut acc = Multicomplex::zero(self.level);
        for &p in &self.indices {
            acc = acc.add(&epsilon(self.level, p)?)?;
        }
        Ok(acc)
    }

    /// Membership test: components off J must vanish within the scaled
    /// tolerance. For a multiperplex-flavor ideal the candidate itself must
    /// be multiperplex; a complex component is an error, not a miss.
    pub fn contains(&self, x: &IdempotentRep, tol: f64) -> Result<bool> {
        self.level.check_eq(x.level())?;
        if self.flavor == IdealFlavor::Multiperplex {
            Multiperplex::from_rep(x, tol)?;
        }
        let thr = tol * (1.0 + x.max_modulus());
        Ok(x.components()
            .iter()
            .enumerate()
            .all(|(p, z)| self.indices.contains(&p) || z.norm() <= thr))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        self.level.check_eq(other.level)?;
        if self.flavor != other.flavor {
            return Err(McError::FlavorMismatch {
                left: self.flavor.name(),
                right: other.flavor.name(),
            });
        }
        Ok(())
    }

    /// Intersection of ideals: intersection of index sets.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(IdealSpec {
            level: self.level,
            flavor: self.flavor,
            indices: self.indices.intersection(&other.indices).copied().collect(),
        })
    }

    /// Sum of ideals: union of index sets.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(IdealSpec {
            level: self.level,
            flavor: self.flavor,
            indices: self.indices.union(&other.indices).copied().collect(),
        })
    }

    /// Minimal among nonzero proper ideals: exactly one component line.
    /// The trivial ideals (zero and the whole ring) are excluded.
    pub fn is_minimal(&self) -> bool {
        self.indices.len() == 1 && self.level.component_count() > 1
    }

    /// Maximal among proper ideals: omits exactly one index.
    pub fn is_maximal(&self) -> bool {
        self.indices.len() + 1 == self.level.component_count()
    }

    /// D_n ideal to its complexification I ⊕ i_1 I in M_n, same indices.
    pub fn complexify(&self) -> Result<Self> {
        if self.flavor != IdealFlavor::Multiperplex {
            return Err(McError::FlavorMismatch {
                left: self.flavor.name(),
                right: IdealFlavor::Multiperplex.name(),
            });
        }
        Ok(IdealSpec {
            level: self.level,
            flavor: IdealFlavor::Multicomplex,
            indices: self.indices.clone(),
        })
    }

    /// M_n ideal to its real part in D_n, same indices.
    pub fn realize(&self) -> Result<Self> {
        if self.flavor != IdealFlavor::Multicomplex {
            return Err(McError::FlavorMismatch {
                left: self.flavor.name(),
                right: IdealFlavor::Multicomplex.name(),
            });
        }
        Ok(IdealSpec {
            level: self.level,
            flavor: IdealFlavor::Multiperplex,
            indices: self.indices.clone(),
        })
    }

    /// Canonical coset representative of x modulo this ideal: components on
    /// J are zeroed, the rest kept. x - quotient_rep(x) always lies in the
    /// ideal.
    pub fn quotient_rep(&self, x: &IdempotentRep) -> Result<IdempotentRep> {
        self.level.check_eq(x.level())?;
        let comps = x
            .components()
            .iter()
            .enumerate()
            .map(|(p, z)| {
                if self.indices.contains(&p) {
                    num_complex::Complex64::new(0.0, 0.0)
                } else {
                    *z
                }
            })
            .collect();
        IdempotentRep::from_components(self.level, comps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::idempotent::{gamma, to_idempotent};
    use num_complex::Complex64;
    use rand::prelude::*;

    fn lv(n: usize) -> Level {
        Level::new(n).unwrap()
    }

    fn ideal(n: usize, flavor: IdealFlavor, js: &[usize]) -> IdealSpec {
        IdealSpec::new(lv(n), flavor, js.iter().copied()).unwrap()
    }

    fn random_rep(rng: &mut StdRng, n: usize) -> IdempotentRep {
        let count = lv(n).component_count();
        IdempotentRep::from_components(
            lv(n),
            (0..count)
                .map(|_| Complex64::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn generator_examples() {
        let g = ideal(2, IdealFlavor::Multiperplex, &[0])
            .generator()
            .unwrap();
        assert_eq!(g, gamma(lv(2), 2).unwrap());
        let zero = IdealSpec::zero(lv(2), IdealFlavor::Multiperplex).unwrap();
        assert!(zero.generator().unwrap().is_zero());
        let full = IdealSpec::full(lv(3), IdealFlavor::Multicomplex).unwrap();
        assert_eq!(full.generator().unwrap(), Multicomplex::one(lv(3)));
    }

    #[test]
    fn index_bounds_are_checked() {
        assert!(matches!(
            IdealSpec::new(lv(2), IdealFlavor::Multiperplex, [2]),
            Err(McError::IndexOutOfRange { index: 2, .. })
        ));
        assert!(IdealSpec::new(lv(1), IdealFlavor::Multiperplex, []).is_err());
    }

    #[test]
    fn membership_by_component_support() {
        let i = ideal(2, IdealFlavor::Multicomplex, &[0]);
        let e1 = IdempotentRep::epsilon_rep(lv(2), 0).unwrap();
        let e2 = IdempotentRep::epsilon_rep(lv(2), 1).unwrap();
        assert!(i.contains(&e1, 1e-12).unwrap());
        assert!(!i.contains(&e2, 1e-12).unwrap());
        assert!(i
            .contains(&IdempotentRep::zero(lv(2)).unwrap(), 1e-12)
            .unwrap());
    }

    #[test]
    fn multiperplex_flavor_rejects_complex_candidates() {
        let i = ideal(2, IdealFlavor::Multiperplex, &[0]);
        let complex_member = IdempotentRep::from_components(
            lv(2),
            vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
        )
        .unwrap();
        assert!(matches!(
            i.contains(&complex_member, 1e-12),
            Err(McError::NotMultiperplex { .. })
        ));
        // the complexified ideal accepts it
        assert!(i
            .complexify()
            .unwrap()
            .contains(&complex_member, 1e-12)
            .unwrap());
    }

    #[test]
    fn lattice_laws_exhaustive_level_two() {
        let subsets: Vec<IdealSpec> = (0..4u32)
            .map(|bits| {
                IdealSpec::new(
                    lv(2),
                    IdealFlavor::Multiperplex,
                    (0..2).filter(|p| (bits >> p) & 1 == 1),
                )
                .unwrap()
            })
            .collect();
        for a in &subsets {
            assert_eq!(a.meet(a).unwrap(), *a);
            assert_eq!(a.join(a).unwrap(), *a);
            for b in &subsets {
                assert_eq!(a.meet(b).unwrap(), b.meet(a).unwrap());
                assert_eq!(a.join(b).unwrap(), b.join(a).unwrap());
                assert_eq!(a.join(&a.meet(b).unwrap()).unwrap(), *a);
                assert_eq!(a.meet(&a.join(b).unwrap()).unwrap(), *a);
                for c in &subsets {
                    assert_eq!(
                        a.meet(&b.meet(c).unwrap()).unwrap(),
                        a.meet(b).unwrap().meet(c).unwrap()
                    );
                    assert_eq!(
                        a.join(&b.join(c).unwrap()).unwrap(),
                        a.join(b).unwrap().join(c).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn meet_join_respect_flavor_and_level() {
        let a = ideal(2, IdealFlavor::Multiperplex, &[0]);
        let b = ideal(2, IdealFlavor::Multicomplex, &[1]);
        assert!(matches!(a.meet(&b), Err(McError::FlavorMismatch { .. })));
        let c = ideal(3, IdealFlavor::Multiperplex, &[1]);
        assert!(matches!(a.join(&c), Err(McError::LevelMismatch { .. })));
    }

    #[test]
    fn minimal_and_maximal_classification() {
        assert!(ideal(3, IdealFlavor::Multiperplex, &[2]).is_minimal());
        assert!(!ideal(3, IdealFlavor::Multiperplex, &[1, 2]).is_minimal());
        assert!(ideal(3, IdealFlavor::Multiperplex, &[0, 1, 2]).is_maximal());
        assert!(!ideal(3, IdealFlavor::Multiperplex, &[0, 1]).is_maximal());
        // trivial ideals are excluded on both counts
        let zero = IdealSpec::zero(lv(3), IdealFlavor::Multiperplex).unwrap();
        let full = IdealSpec::full(lv(3), IdealFlavor::Multiperplex).unwrap();
        assert!(!zero.is_minimal() && !zero.is_maximal());
        assert!(!full.is_minimal() && !full.is_maximal());
        // at level 2 a single line is both minimal and maximal
        let h = IdealSpec::hyperplane(lv(2), 0).unwrap();
        assert!(h.is_minimal() && h.is_maximal());
    }

    #[test]
    fn hyperplane_duality() {
        // x lies in ⊕_{p in J} exactly when every hyperplane off J holds it
        let mut rng = StdRng::seed_from_u64(0x5eed_0004);
        for n in 2..=3usize {
            let count = lv(n).component_count();
            for bits in 0..(1u32 << count) {
                let js: Vec<usize> = (0..count).filter(|p| (bits >> p) & 1 == 1).collect();
                let i =
                    IdealSpec::new(lv(n), IdealFlavor::Multicomplex, js.iter().copied()).unwrap();
                for _ in 0..10 {
                    let x = {
                        // random element supported on a random subset
                        let mut r = random_rep(&mut rng, n);
                        let keep = rng.random_range(0..(1u32 << count));
                        let comps = r
                            .components()
                            .iter()
                            .enumerate()
                            .map(|(p, z)| {
                                if (keep >> p) & 1 == 1 {
                                    *z
                                } else {
                                    Complex64::new(0.0, 0.0)
                                }
                            })
                            .collect();
                        r = IdempotentRep::from_components(lv(n), comps).unwrap();
                        r
                    };
                    let direct = i.contains(&x, 1e-12).unwrap();
                    let via_hyperplanes = (0..count).filter(|p| !js.contains(p)).all(|p| {
                        IdealSpec::hyperplane(lv(n), p)
                            .unwrap()
                            .complexify()
                            .unwrap()
                            .contains(&x, 1e-12)
                            .unwrap()
                    });
                    assert_eq!(direct, via_hyperplanes);
                }
            }
        }
    }

    #[test]
    fn flavor_round_trips() {
        let d = ideal(3, IdealFlavor::Multiperplex, &[0, 2]);
        let m = d.complexify().unwrap();
        assert_eq!(m.flavor(), IdealFlavor::Multicomplex);
        assert_eq!(m.realize().unwrap(), d);
        assert!(matches!(d.realize(), Err(McError::FlavorMismatch { .. })));
        assert!(matches!(
            m.complexify(),
            Err(McError::FlavorMismatch { .. })
        ));
    }

    #[test]
    fn absorption_by_the_generator() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0005);
        for n in 2..=3usize {
            let count = lv(n).component_count();
            for bits in 0..(1u32 << count) {
                let i = IdealSpec::new(
                    lv(n),
                    IdealFlavor::Multicomplex,
                    (0..count).filter(|p| (bits >> p) & 1 == 1),
                )
                .unwrap();
                let g = to_idempotent(&i.generator().unwrap()).unwrap();
                for _ in 0..5 {
                    let x = random_rep(&mut rng, n);
                    let gx = g.mul_fast(&x).unwrap();
                    assert!(i.contains(&gx, 1e-12).unwrap());
                }
            }
        }
    }

    #[test]
    fn members_of_proper_ideals_are_zero_divisors_or_zero() {
        let i = ideal(3, IdealFlavor::Multicomplex, &[0, 3]);
        let g = to_idempotent(&i.generator().unwrap()).unwrap();
        let mut rng = StdRng::seed_from_u64(0x5eed_0006);
        for _ in 0..50 {
            let member = g.mul_fast(&random_rep(&mut rng, 3)).unwrap();
            assert!(member.is_zero() || member.is_zero_divisor(1e-12));
        }
    }

    #[test]
    fn members_are_closed_under_total_conjugation() {
        let i = ideal(3, IdealFlavor::Multicomplex, &[1, 2]);
        let g = to_idempotent(&i.generator().unwrap()).unwrap();
        let mut rng = StdRng::seed_from_u64(0x5eed_0007);
        for _ in 0..50 {
            let member = g.mul_fast(&random_rep(&mut rng, 3)).unwrap();
            assert!(i.contains(&member.lambda_conjugate(), 1e-12).unwrap());
        }
    }

    #[test]
    fn quotient_representative_drops_ideal_components() {
        // a ε_1 + b ε_2 modulo the first line leaves b ε_2
        let x = IdempotentRep::from_components(
            lv(2),
            vec![Complex64::new(2.0, 1.0), Complex64::new(-3.0, 0.5)],
        )
        .unwrap();
        let i = ideal(2, IdealFlavor::Multicomplex, &[0]);
        let q = i.quotient_rep(&x).unwrap();
        assert_eq!(q.components()[0], Complex64::new(0.0, 0.0));
        assert_eq!(q.components()[1], Complex64::new(-3.0, 0.5));
        // coset law: x - rep is in the ideal
        let diff = x.sub_fast(&q).unwrap();
        assert!(i.contains(&diff, 1e-12).unwrap());
    }

    #[test]
    fn complexification_splits_membership() {
        // d1 + i_1 d2 lies in complexify(I) exactly when both parts lie in I
        let mut rng = StdRng::seed_from_u64(0x5eed_0008);
        let i = ideal(3, IdealFlavor::Multiperplex, &[0, 2]);
        let ic = i.complexify().unwrap();
        for _ in 0..50 {
            let x = random_rep(&mut rng, 3);
            let (d1, d2) = x.split_perplex();
            let in_parts = i.contains(&d1.to_rep(), 1e-12).unwrap()
                && i.contains(&d2.to_rep(), 1e-12).unwrap();
            assert_eq!(ic.contains(&x, 1e-12).unwrap(), in_parts);
        }
    }
}
