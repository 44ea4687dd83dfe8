//! Cohomology reports for Deligne–Lusztig varieties of `GL_n` attached to words.
//!
//! The engine does not touch varieties: every answer is the representation-theoretic
//! formula (induced trivial or induced Steinberg module of `P_I`, `I = supp(w)`),
//! with the induced complex available to check the formula dimension-by-dimension.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::complex::{analyse, Analysis, Ring};
use crate::field::{is_prime, FieldSpec};
use crate::flag::{enumerate_cosets, parabolic_index, steinberg_dim};
use crate::weyl::GeneratorSet;
use crate::word::{reduce_to_coxeter, RewriteTrace, Word};
use crate::{Bounds, Error, Result};

/// Coefficient system of a report.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawCoefficients", into = "RawCoefficients")]
pub enum CoefficientTag {
    /// `F̄_p`-coherent structure sheaf.
    StructureSheaf,
    /// Constant étale sheaf `Z/p^m`.
    ModPrimePower { p: u64, m: u32 },
    /// `Z_p`, as the compatible system of all `Z/p^m`.
    PAdic { p: u64 },
    /// Top exterior power of the cotangent sheaf.
    CanonicalSheaf,
}

#[derive(Serialize, Deserialize)]
struct RawCoefficients {
    kind: String,
    p: Option<u64>,
    m: Option<u32>,
}

impl From<CoefficientTag> for RawCoefficients {
    fn from(c: CoefficientTag) -> Self {
        let (kind, p, m) = match c {
            CoefficientTag::StructureSheaf => ("STRUCTURE_SHEAF", None, None),
            CoefficientTag::ModPrimePower { p, m } => ("MOD_P^M", Some(p), Some(m)),
            CoefficientTag::PAdic { p } => ("Z_P", Some(p), None),
            CoefficientTag::CanonicalSheaf => ("CANONICAL_SHEAF", None, None),
        };
        RawCoefficients {
            kind: kind.into(),
            p,
            m,
        }
    }
}

impl TryFrom<RawCoefficients> for CoefficientTag {
    type Error = Error;

    fn try_from(r: RawCoefficients) -> Result<Self> {
        let need_p = || r.p.ok_or_else(|| Error::Parse(format!("{} needs p", r.kind)));
        match r.kind.as_str() {
            "STRUCTURE_SHEAF" => Ok(CoefficientTag::StructureSheaf),
            "CANONICAL_SHEAF" => Ok(CoefficientTag::CanonicalSheaf),
            "Z_P" => CoefficientTag::p_adic(need_p()?),
            "MOD_P^M" => {
                let m = r.m.ok_or_else(|| Error::Parse("MOD_P^M needs m".into()))?;
                CoefficientTag::mod_prime_power(need_p()?, m)
            }
            other => Err(Error::Parse(format!("unknown coefficient kind {other:?}"))),
        }
    }
}

impl CoefficientTag {
    pub fn mod_prime_power(p: u64, m: u32) -> Result<Self> {
        Ring::mod_prime_power(p, m)?;
        Ok(CoefficientTag::ModPrimePower { p, m })
    }

    pub fn p_adic(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(CoefficientTag::PAdic { p })
    }

    /// `Z/p^m` for `Some(m)`, `Z_p` for `None`.
    pub fn etale(p: u64, m: Option<u32>) -> Result<Self> {
        match m {
            Some(m) => CoefficientTag::mod_prime_power(p, m),
            None => CoefficientTag::p_adic(p),
        }
    }

    pub fn prime(&self) -> Option<u64> {
        match *self {
            CoefficientTag::ModPrimePower { p, .. } | CoefficientTag::PAdic { p } => Some(p),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Variety {
    /// The smooth compactification `X̄(w)`.
    Compactified,
    /// `X(w)` itself, with compactly supported cohomology.
    OpenCompactSupport,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RepKind {
    InducedTrivial,
    InducedSteinberg,
    Zero,
}

/// A `GL_n(F_q)`-module described by shape: kind, inducing parabolic and free rank.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RepDescription {
    pub kind: RepKind,
    pub parabolic: GeneratorSet,
    pub dimension: u64,
}

impl RepDescription {
    pub fn zero() -> Self {
        RepDescription {
            kind: RepKind::Zero,
            parabolic: GeneratorSet::empty(),
            dimension: 0,
        }
    }

    pub fn induced_trivial(parabolic: GeneratorSet, n: usize, q: u64) -> Result<Self> {
        let dimension = to_u64(parabolic_index(n, q, &parabolic)?)?;
        Ok(RepDescription {
            kind: RepKind::InducedTrivial,
            parabolic,
            dimension,
        })
    }

    pub fn induced_steinberg(parabolic: GeneratorSet, n: usize, q: u64) -> Result<Self> {
        let dim = parabolic_index(n, q, &parabolic)? * steinberg_dim(&parabolic, n, q)?;
        Ok(RepDescription {
            kind: RepKind::InducedSteinberg,
            parabolic,
            dimension: to_u64(dim)?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.kind == RepKind::Zero
    }
}

fn to_u64(x: BigUint) -> Result<u64> {
    x.to_u64().ok_or(Error::Overflow)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub variety: Variety,
    pub word: Vec<usize>,
    pub n: usize,
    pub q: u64,
    pub coefficients: CoefficientTag,
    /// Every degree `0..=l(w)`.
    pub entries: BTreeMap<usize, RepDescription>,
    pub cross_checked: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<RewriteTrace>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CohomologyReport {
    fn concentrated(
        variety: Variety,
        w: &Word,
        q: u64,
        coefficients: CoefficientTag,
        degree: usize,
        rep: RepDescription,
    ) -> Self {
        let entries = (0..=w.len())
            .map(|k| {
                if k == degree {
                    (k, rep.clone())
                } else {
                    (k, RepDescription::zero())
                }
            })
            .collect();
        CohomologyReport {
            variety,
            word: w.letters().to_vec(),
            n: w.rank(),
            q,
            coefficients,
            entries,
            cross_checked: false,
            trace: None,
            notes: Vec::new(),
        }
    }

    pub fn nonzero_degrees(&self) -> Vec<usize> {
        self.entries
            .iter()
            .filter(|(_, r)| !r.is_zero())
            .map(|(&k, _)| k)
            .collect()
    }

    /// Degree in which a report of this variety and coefficient kind may be nonzero.
    pub fn expected_degree(&self) -> usize {
        match (self.variety, self.coefficients) {
            (Variety::OpenCompactSupport, _) | (_, CoefficientTag::CanonicalSheaf) => {
                self.word.len()
            }
            _ => 0,
        }
    }

    /// Exactly one nonzero degree, in the expected position, with the expected kind.
    pub fn has_valid_shape(&self) -> bool {
        let expected_kind = match self.variety {
            Variety::OpenCompactSupport => RepKind::InducedSteinberg,
            Variety::Compactified => RepKind::InducedTrivial,
        };
        let degree = self.expected_degree();
        self.nonzero_degrees() == [degree]
            && self.entries[&degree].kind == expected_kind
            && self.entries.keys().copied().eq(0..=self.word.len())
    }

    pub fn top(&self) -> &RepDescription {
        &self.entries[&self.expected_degree()]
    }
}

/// `E_r^{i,j}` for `0 <= i, j <= l(w)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SpectralPage {
    pub page_index: u8,
    /// `rows[j][i] = dim E^{i,j}`.
    pub rows: Vec<Vec<u64>>,
}

impl SpectralPage {
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.rows.get(j).and_then(|r| r.get(i)).copied().unwrap_or(0)
    }

    pub fn nonzero(&self) -> Vec<((usize, usize), u64)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(j, r)| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &d)| d != 0)
                    .map(move |(i, &d)| ((i, j), d))
            })
            .collect()
    }

    /// Rows `j > 0` vanish.
    pub fn higher_rows_vanish(&self) -> bool {
        self.rows.iter().skip(1).all(|r| r.iter().all(|&d| d == 0))
    }

    pub fn is_concentrated_at(&self, i: usize, j: usize) -> bool {
        self.nonzero().iter().all(|&(pos, _)| pos == (i, j))
    }
}

/// Report generator for a fixed `q` and resource bounds.
#[derive(Clone, Debug)]
pub struct Engine {
    field: FieldSpec,
    bounds: Bounds,
}

impl Engine {
    pub fn new(q: u64, bounds: Bounds) -> Result<Self> {
        Ok(Engine {
            field: FieldSpec::from_order(q)?,
            bounds,
        })
    }

    pub fn q(&self) -> u64 {
        self.field.order() as u64
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    fn nonempty(w: &Word) -> Result<()> {
        if w.is_empty() {
            Err(Error::EmptyWord)
        } else {
            Ok(())
        }
    }

    fn check_characteristic(&self, p: u64) -> Result<()> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if !self.q().is_multiple_of(p) {
            return Err(Error::CharacteristicMismatch { p, q: self.q() });
        }
        Ok(())
    }

    /// `H^k(X̄(w), O)`: `ind_{P_I} 1` in degree 0.
    pub fn structure_sheaf(&self, w: &Word) -> Result<CohomologyReport> {
        Self::nonempty(w)?;
        let rep = RepDescription::induced_trivial(w.support(), w.rank(), self.q())?;
        Ok(CohomologyReport::concentrated(
            Variety::Compactified,
            w,
            self.q(),
            CoefficientTag::StructureSheaf,
            0,
            rep,
        ))
    }

    /// `H^k_ét(X̄(w), Z/p^m)` (`m = None` for `Z_p`): `ind_{P_I} 1` in degree 0.
    pub fn etale_constant(&self, w: &Word, p: u64, m: Option<u32>) -> Result<CohomologyReport> {
        Self::nonempty(w)?;
        self.check_characteristic(p)?;
        let coefficients = CoefficientTag::etale(p, m)?;
        let rep = RepDescription::induced_trivial(w.support(), w.rank(), self.q())?;
        let mut report = CohomologyReport::concentrated(
            Variety::Compactified,
            w,
            self.q(),
            coefficients,
            0,
            rep,
        );
        report
            .notes
            .push("sections of the Witt vector sheaf W_m(O) have the same rank; not computed".into());
        Ok(report)
    }

    /// `H^k_{ét,c}(X(w), Z/p^m)`: `ind_{P_I} St_{L_I}` in degree `l(w)`. Words with
    /// repeated letters carry the reduction trace to a distinct-letter word of the
    /// same support.
    pub fn compact_support(&self, w: &Word, p: u64, m: Option<u32>) -> Result<CohomologyReport> {
        Self::nonempty(w)?;
        self.check_characteristic(p)?;
        let coefficients = CoefficientTag::etale(p, m)?;
        let trace = if w.has_distinct_letters() {
            None
        } else {
            Some(reduce_to_coxeter(w, self.bounds.budget)?)
        };
        let rep = RepDescription::induced_steinberg(w.support(), w.rank(), self.q())?;
        let mut report = CohomologyReport::concentrated(
            Variety::OpenCompactSupport,
            w,
            self.q(),
            coefficients,
            w.len(),
            rep,
        );
        report.trace = trace;
        Ok(report)
    }

    /// `H^k(X̄(w), Ω^{l(w)})`: dual to the structure sheaf, in degree `l(w)`.
    pub fn canonical_sheaf(&self, w: &Word) -> Result<CohomologyReport> {
        Self::nonempty(w)?;
        let rep = RepDescription::induced_trivial(w.support(), w.rank(), self.q())?;
        Ok(CohomologyReport::concentrated(
            Variety::Compactified,
            w,
            self.q(),
            CoefficientTag::CanonicalSheaf,
            w.len(),
            rep,
        ))
    }

    /// Number of irreducible components of `X̄(w)`, `[G : P_I]`.
    pub fn irreducible_components(&self, w: &Word) -> Result<BigUint> {
        Self::nonempty(w)?;
        parabolic_index(w.rank(), self.q(), &w.support())
    }

    pub fn analyse(&self, w: &Word) -> Result<Analysis> {
        analyse(w, &self.field, self.bounds.max_cosets)
    }

    /// `E_1` from the closed strata and `E_2` as the homology of its bottom row.
    pub fn spectral_pages(&self, w: &Word, p: u64, m: u32) -> Result<(SpectralPage, SpectralPage)> {
        self.check_characteristic(p)?;
        let analysis = self.analyse(w)?;
        self.spectral_pages_from(&analysis, p, m)
    }

    pub fn spectral_pages_from(
        &self,
        analysis: &Analysis,
        p: u64,
        m: u32,
    ) -> Result<(SpectralPage, SpectralPage)> {
        self.check_characteristic(p)?;
        let w = &analysis.word;
        let len = w.len();
        let mut e1 = vec![vec![0u64; len + 1]; len + 1];
        for (i, column) in (0..=len).map(|i| (i, crate::word::subword_positions(w, len - i))) {
            for u in column {
                let stratum = Word::new(u.letters.clone(), w.rank())?;
                let entries = if stratum.is_empty() {
                    // X̄(e) is the finite set G/B.
                    let point = RepDescription::induced_trivial(GeneratorSet::empty(), w.rank(), self.q())?;
                    vec![(0, point)]
                } else {
                    self.etale_constant(&stratum, p, Some(m))?
                        .entries
                        .into_iter()
                        .collect()
                };
                for (j, rep) in entries {
                    e1[j][i] += rep.dimension;
                }
            }
        }
        let e1 = SpectralPage {
            page_index: 1,
            rows: e1,
        };
        let h = analysis.homology(Ring::mod_prime_power(p, m)?);
        let mut e2 = vec![vec![0u64; len + 1]; len + 1];
        for d in &h.degrees {
            let shape = &d.homology;
            e2[0][d.degree] = shape.free_rank as u64 + shape.torsion.len() as u64;
        }
        Ok((
            e1,
            SpectralPage {
                page_index: 2,
                rows: e2,
            },
        ))
    }

    /// Formula dimension of the compact-support report against the induced complex
    /// of a distinct-letter word with the same support: cokernel rank, exactness
    /// over `Z/p^m` and the `E_2` page must all agree.
    pub fn cross_check(&self, w: &Word, p: u64, m: u32) -> Result<bool> {
        let report = self.compact_support(w, p, Some(m))?;
        let v = match &report.trace {
            Some(t) => t.result.clone(),
            None => w.clone(),
        };
        let analysis = self.analyse(&v)?;
        self.cross_check_with(&report, &analysis, p, m)
    }

    /// Checks a report against independent computations: the induced complex for
    /// compact support, the number of enumerated cosets for the closed varieties.
    pub fn cross_check_report(&self, report: &CohomologyReport) -> Result<bool> {
        let w = Word::new(report.word.clone(), report.n)?;
        match (report.variety, report.coefficients) {
            (Variety::OpenCompactSupport, c) => {
                let p = c
                    .prime()
                    .ok_or_else(|| Error::Parse("compact support needs p-adic coefficients".into()))?;
                let m = match c {
                    CoefficientTag::ModPrimePower { m, .. } => m,
                    _ => 1,
                };
                Ok(self.cross_check(&w, p, m)? && self.compact_support(&w, p, Some(m))?.top() == report.top())
            }
            (Variety::Compactified, _) => {
                let cosets = enumerate_cosets(w.rank(), &self.field, &w.support(), self.bounds.max_cosets)?;
                Ok(report.has_valid_shape() && cosets.len() as u64 == report.top().dimension)
            }
        }
    }

    pub fn cross_check_with(
        &self,
        report: &CohomologyReport,
        analysis: &Analysis,
        p: u64,
        m: u32,
    ) -> Result<bool> {
        let top = report.top().dimension;
        let cokernel = analysis.steinberg_cokernel()?;
        let (e1, e2) = self.spectral_pages_from(analysis, p, m)?;
        let len = analysis.word.len();
        Ok(report.has_valid_shape()
            && cokernel.matches_formula
            && cokernel.dimension as u64 == top
            && analysis.mod_pm_acyclic(p, m)?
            && e1.higher_rows_vanish()
            && e1.rows[0].iter().map(|&d| d as usize).eq(analysis.chain_ranks().iter().copied())
            && e2.is_concentrated_at(len, 0)
            && e2.get(len, 0) == top)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(letters: &[usize], n: usize) -> Word {
        Word::new(letters.to_vec(), n).unwrap()
    }

    fn engine(q: u64) -> Engine {
        Engine::new(q, Bounds::default()).unwrap()
    }

    #[test]
    fn structure_sheaf_examples() {
        let e = engine(2);
        assert_eq!(e.structure_sheaf(&word(&[1, 2], 3)).unwrap().entries[&0].dimension, 1);
        let r = e.structure_sheaf(&word(&[1], 3)).unwrap();
        assert_eq!(r.entries[&0].dimension, 7);
        assert_eq!(r.entries[&1], RepDescription::zero());
        assert!(r.has_valid_shape());
        assert_eq!(e.structure_sheaf(&word(&[1, 2, 1], 3)).unwrap().entries[&0].dimension, 1);
        assert_eq!(e.structure_sheaf(&word(&[1], 2)).unwrap().entries[&0].dimension, 1);
        assert_eq!(e.structure_sheaf(&word(&[], 2)), Err(Error::EmptyWord));
    }

    #[test]
    fn etale_examples() {
        let e = engine(2);
        let r = e.etale_constant(&word(&[1], 2), 2, Some(1)).unwrap();
        assert_eq!(r.entries[&0].dimension, 1);
        // [G : B] = 3 only appears once the support is empty, i.e. never for a
        // nonempty word in rank 2.
        assert_eq!(e.etale_constant(&word(&[], 2), 2, Some(1)), Err(Error::EmptyWord));
        let r = e.etale_constant(&word(&[2], 3), 2, None).unwrap();
        assert_eq!(r.coefficients, CoefficientTag::PAdic { p: 2 });
        assert_eq!(r.entries[&0].dimension, 7);
        assert_eq!(
            e.etale_constant(&word(&[1], 2), 3, Some(1)),
            Err(Error::CharacteristicMismatch { p: 3, q: 2 })
        );
        assert_eq!(e.irreducible_components(&word(&[1], 2)).unwrap(), BigUint::from(1u8));
    }

    #[test]
    fn compact_support_examples() {
        let e = engine(2);
        let r = e.compact_support(&word(&[1], 2), 2, Some(1)).unwrap();
        assert_eq!(r.entries[&1].dimension, 2);
        assert_eq!(r.nonzero_degrees(), vec![1]);
        assert_eq!(e.compact_support(&word(&[1], 3), 2, Some(1)).unwrap().entries[&1].dimension, 14);
        assert_eq!(e.compact_support(&word(&[1, 2], 3), 2, Some(1)).unwrap().entries[&2].dimension, 8);
        let r = e.compact_support(&word(&[1, 2, 1], 3), 2, Some(2)).unwrap();
        assert_eq!(r.nonzero_degrees(), vec![3]);
        assert_eq!(r.entries[&3].dimension, 8);
        assert_eq!(r.trace.as_ref().unwrap().result.letters(), &[2, 1]);
    }

    #[test]
    fn canonical_and_components() {
        let e = engine(2);
        let r = e.canonical_sheaf(&word(&[1], 3)).unwrap();
        assert_eq!(r.nonzero_degrees(), vec![1]);
        assert_eq!(r.entries[&1].dimension, 7);
        assert!(r.has_valid_shape());
        assert_eq!(e.canonical_sheaf(&word(&[1, 2, 3], 4)).unwrap().entries[&3].dimension, 1);
        assert_eq!(e.irreducible_components(&word(&[1], 3)).unwrap(), BigUint::from(7u8));
        assert_eq!(e.irreducible_components(&word(&[2], 4)).unwrap(), BigUint::from(105u8));
    }

    #[test]
    fn spectral_examples() {
        let e = engine(2);
        let (e1, e2) = e.spectral_pages(&word(&[1, 2], 3), 2, 1).unwrap();
        assert_eq!(e1.rows[0], vec![1, 14, 21]);
        assert!(e1.higher_rows_vanish());
        assert_eq!(e2.nonzero(), vec![((2, 0), 8)]);
        let (e1, e2) = e.spectral_pages(&word(&[1], 2), 2, 3).unwrap();
        assert_eq!(e1.rows[0], vec![1, 3]);
        assert_eq!(e2.nonzero(), vec![((1, 0), 2)]);
    }

    #[test]
    fn cross_check_examples() {
        assert!(engine(2).cross_check(&word(&[1, 2], 3), 2, 1).unwrap());
        assert!(engine(3).cross_check(&word(&[1], 2), 3, 2).unwrap());
        assert!(engine(2).cross_check(&word(&[2, 1, 2], 3), 2, 1).unwrap());
        let e = engine(3);
        for r in [
            e.structure_sheaf(&word(&[2], 3)).unwrap(),
            e.canonical_sheaf(&word(&[1], 3)).unwrap(),
            e.compact_support(&word(&[1, 1], 3), 3, None).unwrap(),
        ] {
            assert!(e.cross_check_report(&r).unwrap());
        }
        let mut forged = e.structure_sheaf(&word(&[2], 3)).unwrap();
        forged.entries.get_mut(&0).unwrap().dimension += 1;
        assert!(!e.cross_check_report(&forged).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let e = engine(2);
        for r in [
            e.compact_support(&word(&[1, 2, 1], 3), 2, None).unwrap(),
            e.etale_constant(&word(&[1], 2), 2, Some(3)).unwrap(),
            e.canonical_sheaf(&word(&[2], 3)).unwrap(),
        ] {
            let text = serde_json::to_string(&r).unwrap();
            let back: CohomologyReport = serde_json::from_str(&text).unwrap();
            assert_eq!(back, r);
        }
        let v = serde_json::to_value(e.compact_support(&word(&[1], 2), 2, None).unwrap()).unwrap();
        assert_eq!(v["coefficients"], serde_json::json!({"kind": "Z_P", "p": 2, "m": null}));
        assert_eq!(v["variety"], "OPEN_COMPACT_SUPPORT");
        assert_eq!(v["entries"]["1"]["kind"], "INDUCED_STEINBERG");
        assert!(v.get("trace").is_none());
        let bad = r#"{"kind":"MOD_P^M","p":4,"m":1}"#;
        assert!(serde_json::from_str::<CoefficientTag>(bad).is_err());
    }
}
