//! JSON interchange documents.
//!
//! A number document is `{"n": level, "rep": "standard"|"idempotent",
//! "coeffs": [...]}` where standard coefficients are reals in unit-subset
//! bitmask order and idempotent coefficients are `[re, im]` pairs in
//! component order. Matrix and ket documents carry `n`, `m`, a `rep`
//! field, and a flat `entries` array of coefficient payloads (row-major
//! for matrices); `rep` may be omitted on input, in which case it is
//! inferred from the payload shape. NaN and infinity are rejected in both
//! directions.

use serde::{Deserialize, Serialize};

use crate::error::{McError, Result};
use crate::hilbert::Ket;
use crate::idempotent::{from_idempotent, to_idempotent, IdempotentRep, Multiperplex};
use crate::linalg::McMatrix;
use crate::standard::{Level, Multicomplex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rep {
    Standard,
    Idempotent,
}

impl Rep {
    pub fn other(self) -> Rep {
        match self {
            Rep::Standard => Rep::Idempotent,
            Rep::Idempotent => Rep::Standard,
        }
    }
}

/// Coefficient payload: plain reals for the standard representation,
/// `[re, im]` pairs for the idempotent one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeffs {
    Real(Vec<f64>),
    Pairs(Vec<[f64; 2]>),
}

impl Coeffs {
    fn rep(&self) -> Rep {
        match self {
            Coeffs::Real(_) => Rep::Standard,
            Coeffs::Pairs(_) => Rep::Idempotent,
        }
    }

    fn len(&self) -> usize {
        match self {
            Coeffs::Real(v) => v.len(),
            Coeffs::Pairs(v) => v.len(),
        }
    }

    fn check_finite(&self) -> Result<()> {
        let bad = match self {
            Coeffs::Real(v) => v.iter().position(|x| !x.is_finite()),
            Coeffs::Pairs(v) => v.iter().position(|[a, b]| !a.is_finite() || !b.is_finite()),
        };
        match bad {
            Some(i) => Err(McError::NonFinite(i)),
            None => Ok(()),
        }
    }

    /// Shape check against a level: standard payloads carry 2^n reals,
    /// idempotent payloads 2^(n-1) pairs.
    fn check_shape(&self, level: Level) -> Result<()> {
        let expected = match self {
            Coeffs::Real(_) => level.coeff_count(),
            Coeffs::Pairs(_) => {
                if level.get() < 2 {
                    return Err(McError::LevelTooLow(level.get()));
                }
                level.component_count()
            }
        };
        if self.len() != expected {
            return Err(McError::CoeffLength {
                got: self.len(),
                expected,
            });
        }
        self.check_finite()
    }

    fn to_rep(&self, level: Level) -> Result<IdempotentRep> {
        self.check_shape(level)?;
        match self {
            Coeffs::Real(v) => to_idempotent(&Multicomplex::from_coeffs(level, v.clone())?),
            Coeffs::Pairs(v) => IdempotentRep::from_components(
                level,
                v.iter()
                    .map(|[a, b]| num_complex::Complex64::new(*a, *b))
                    .collect(),
            ),
        }
    }

    fn from_rep(r: &IdempotentRep, rep: Rep) -> Self {
        match rep {
            Rep::Standard => Coeffs::Real(from_idempotent(r).coeffs().to_vec()),
            Rep::Idempotent => Coeffs::Pairs(r.components().iter().map(|z| [z.re, z.im]).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumberDocument {
    pub n: usize,
    pub rep: Rep,
    pub coeffs: Coeffs,
}

impl NumberDocument {
    pub fn level(&self) -> Result<Level> {
        Level::new(self.n)
    }

    /// Full consistency check: declared rep matches the payload kind, the
    /// length matches the level, everything finite.
    pub fn validate(&self) -> Result<()> {
        let level = self.level()?;
        if self.coeffs.rep() != self.rep {
            return Err(McError::CoeffLength {
                got: self.coeffs.len(),
                expected: match self.rep {
                    Rep::Standard => level.coeff_count(),
                    Rep::Idempotent => level.component_count(),
                },
            });
        }
        self.coeffs.check_shape(level)
    }

    pub fn to_multicomplex(&self) -> Result<Multicomplex> {
        self.validate()?;
        match &self.coeffs {
            Coeffs::Real(v) => Multicomplex::from_coeffs(self.level()?, v.clone()),
            Coeffs::Pairs(_) => Ok(from_idempotent(&self.coeffs.to_rep(self.level()?)?)),
        }
    }

    pub fn to_rep(&self) -> Result<IdempotentRep> {
        self.validate()?;
        self.coeffs.to_rep(self.level()?)
    }

    pub fn from_multicomplex(a: &Multicomplex, rep: Rep) -> Result<Self> {
        let coeffs = match rep {
            Rep::Standard => Coeffs::Real(a.coeffs().to_vec()),
            Rep::Idempotent => Coeffs::from_rep(&to_idempotent(a)?, rep),
        };
        Ok(NumberDocument {
            n: a.level().get(),
            rep,
            coeffs,
        })
    }

    pub fn from_rep(r: &IdempotentRep, rep: Rep) -> Self {
        NumberDocument {
            n: r.level().get(),
            rep,
            coeffs: Coeffs::from_rep(r, rep),
        }
    }

    pub fn from_multiperplex(d: &Multiperplex, rep: Rep) -> Self {
        Self::from_rep(&d.to_rep(), rep)
    }
}

fn infer_rep(declared: Option<Rep>, entries: &[Coeffs]) -> Result<Rep> {
    let payload = entries[0].rep();
    let rep = declared.unwrap_or(payload);
    for e in entries {
        if e.rep() != rep {
            return Err(McError::CoeffLength {
                got: e.len(),
                expected: entries[0].len(),
            });
        }
    }
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub n: usize,
    pub m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rep: Option<Rep>,
    pub entries: Vec<Coeffs>,
}

impl MatrixDocument {
    pub fn to_matrix(&self) -> Result<McMatrix> {
        let level = Level::new(self.n)?;
        if self.m == 0 || self.entries.len() != self.m * self.m {
            return Err(McError::DimensionMismatch {
                left: self.entries.len(),
                right: self.m * self.m,
            });
        }
        infer_rep(self.rep, &self.entries)?;
        let entries = self
            .entries
            .iter()
            .map(|c| c.to_rep(level))
            .collect::<Result<Vec<_>>>()?;
        McMatrix::from_entries(level, self.m, entries)
    }

    pub fn from_matrix(a: &McMatrix, rep: Rep) -> Self {
        MatrixDocument {
            n: a.level().get(),
            m: a.dim(),
            rep: Some(rep),
            entries: a
                .entries()
                .iter()
                .map(|r| Coeffs::from_rep(r, rep))
                .collect(),
        }
    }

    /// The representation the entries arrived in, used to mirror it on
    /// output.
    pub fn effective_rep(&self) -> Result<Rep> {
        if self.entries.is_empty() {
            return Err(McError::DimensionMismatch {
                left: 0,
                right: self.m * self.m,
            });
        }
        infer_rep(self.rep, &self.entries)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KetDocument {
    pub n: usize,
    pub m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rep: Option<Rep>,
    pub entries: Vec<Coeffs>,
}

impl KetDocument {
    pub fn to_ket(&self) -> Result<Ket> {
        let level = Level::new(self.n)?;
        if self.m == 0 || self.entries.len() != self.m {
            return Err(McError::DimensionMismatch {
                left: self.entries.len(),
                right: self.m,
            });
        }
        infer_rep(self.rep, &self.entries)?;
        let entries = self
            .entries
            .iter()
            .map(|c| c.to_rep(level))
            .collect::<Result<Vec<_>>>()?;
        Ket::from_entries(level, entries)
    }

    pub fn from_ket(v: &Ket, rep: Rep) -> Self {
        KetDocument {
            n: v.level().get(),
            m: v.dim(),
            rep: Some(rep),
            entries: v
                .entries()
                .iter()
                .map(|r| Coeffs::from_rep(r, rep))
                .collect(),
        }
    }
}

/// One ideal-lattice query. Component indices are 1-based on this
/// surface. `J2` is the second operand for meet and join; `x` is the
/// element operand for contains and quotient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdealQuery {
    pub op: IdealOp,
    pub n: usize,
    #[serde(rename = "J")]
    pub j: Vec<usize>,
    #[serde(rename = "J2", skip_serializing_if = "Option::is_none")]
    pub j2: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flavor: Option<FlavorName>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<NumberDocument>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IdealOp {
    Generator,
    Contains,
    Meet,
    Join,
    Quotient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlavorName {
    Multiperplex,
    Multicomplex,
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn lv(n: usize) -> Level {
        Level::new(n).unwrap()
    }

    #[test]
    fn standard_document_round_trips_bit_exactly() {
        let a =
            Multicomplex::from_coeffs(lv(3), (0..8).map(|k| k as f64 * 0.25).collect()).unwrap();
        let doc = NumberDocument::from_multicomplex(&a, Rep::Standard).unwrap();
        let text = serde_json::to_string(&doc).unwrap();
        let back: NumberDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_multicomplex().unwrap(), a);
    }

    #[test]
    fn idempotent_document_round_trips_bit_exactly() {
        let r = IdempotentRep::from_components(
            lv(2),
            vec![Complex64::new(0.5, -1.25), Complex64::new(3.0, 0.0)],
        )
        .unwrap();
        let doc = NumberDocument::from_rep(&r, Rep::Idempotent);
        let text = serde_json::to_string(&doc).unwrap();
        let back: NumberDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_rep().unwrap(), r);
    }

    #[test]
    fn rep_conversion_matches_the_transform() {
        // i_2 in the standard rep converts to [-i, i]
        let doc = NumberDocument {
            n: 2,
            rep: Rep::Standard,
            coeffs: Coeffs::Real(vec![0.0, 0.0, 1.0, 0.0]),
        };
        let r = doc.to_rep().unwrap();
        assert_eq!(
            r.components(),
            &[Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0)]
        );
        let back = NumberDocument::from_rep(&r, Rep::Idempotent);
        assert_eq!(back.coeffs, Coeffs::Pairs(vec![[0.0, -1.0], [0.0, 1.0]]));
    }

    #[test]
    fn shape_and_rep_mismatches_are_rejected() {
        let doc = NumberDocument {
            n: 2,
            rep: Rep::Standard,
            coeffs: Coeffs::Real(vec![1.0, 2.0, 3.0]),
        };
        assert!(matches!(doc.validate(), Err(McError::CoeffLength { .. })));
        let doc = NumberDocument {
            n: 2,
            rep: Rep::Standard,
            coeffs: Coeffs::Pairs(vec![[1.0, 0.0], [0.0, 0.0]]),
        };
        assert!(doc.validate().is_err());
        let doc = NumberDocument {
            n: 1,
            rep: Rep::Idempotent,
            coeffs: Coeffs::Pairs(vec![[1.0, 0.0]]),
        };
        assert!(matches!(doc.validate(), Err(McError::LevelTooLow(1))));
    }

    #[test]
    fn non_finite_values_are_rejected() {
        let doc = NumberDocument {
            n: 2,
            rep: Rep::Standard,
            coeffs: Coeffs::Real(vec![1.0, f64::INFINITY, 0.0, 0.0]),
        };
        assert_eq!(doc.validate(), Err(McError::NonFinite(1)));
        // huge literals are rejected by the JSON layer itself
        let text = r#"{"n":2,"rep":"standard","coeffs":[0,1e999,0,0]}"#;
        assert!(serde_json::from_str::<NumberDocument>(text).is_err());
    }

    #[test]
    fn matrix_documents_infer_the_entry_rep() {
        let text = r#"{"n":2,"m":1,"entries":[[[1.0,0.0],[0.0,0.0]]]}"#;
        let doc: MatrixDocument = serde_json::from_str(text).unwrap();
        assert_eq!(doc.effective_rep().unwrap(), Rep::Idempotent);
        let a = doc.to_matrix().unwrap();
        assert_eq!(a.dim(), 1);
        assert_eq!(
            a.get(0, 0).components(),
            &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
        );

        let text = r#"{"n":2,"m":1,"entries":[[0.5,0.0,0.0,0.5]]}"#;
        let doc: MatrixDocument = serde_json::from_str(text).unwrap();
        assert_eq!(doc.effective_rep().unwrap(), Rep::Standard);
        assert!(doc.to_matrix().is_ok());
    }

    #[test]
    fn matrix_shape_errors_are_caught() {
        let text = r#"{"n":2,"m":2,"entries":[[1.0,0.0,0.0,0.0]]}"#;
        let doc: MatrixDocument = serde_json::from_str(text).unwrap();
        assert!(doc.to_matrix().is_err());
        // mixed payload kinds in one document
        let text = r#"{"n":2,"m":1,"entries":[[1.0,0.0,0.0,0.0]],"rep":"idempotent"}"#;
        let doc: MatrixDocument = serde_json::from_str(text).unwrap();
        assert!(doc.to_matrix().is_err());
    }

    #[test]
    fn ket_documents_round_trip() {
        let level = lv(2);
        let v = Ket::from_entries(
            level,
            vec![
                IdempotentRep::from_components(
                    level,
                    vec![Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.0)],
                )
                .unwrap(),
                IdempotentRep::one(level).unwrap(),
            ],
        )
        .unwrap();
        let doc = KetDocument::from_ket(&v, Rep::Idempotent);
        let text = serde_json::to_string(&doc).unwrap();
        let back: KetDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_ket().unwrap(), v);
    }

    #[test]
    fn ideal_queries_deserialize() {
        let text = r#"{"op":"generator","n":2,"J":[1]}"#;
        let q: IdealQuery = serde_json::from_str(text).unwrap();
        assert_eq!(q.op, IdealOp::Generator);
        assert_eq!(q.j, vec![1]);
        assert_eq!(q.flavor, None);

        let text = r#"{"op":"contains","n":2,"J":[1],"flavor":"multiperplex","x":{"n":2,"rep":"idempotent","coeffs":[[0,0],[1,0]]}}"#;
        let q: IdealQuery = serde_json::from_str(text).unwrap();
        assert_eq!(q.op, IdealOp::Contains);
        assert!(q.x.is_some());

        let text = r#"{"op":"meet","n":2,"J":[1],"J2":[1,2]}"#;
        let q: IdealQuery = serde_json::from_str(text).unwrap();
        assert_eq!(q.j2, Some(vec![1, 2]));
    }
}
