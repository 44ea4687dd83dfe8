//! The complex of induced permutation modules attached to a word with distinct
//! letters.
//!
//! For `w = t_1 ... t_r`, degree `i` is the direct sum, over the position subsets `u`
//! of size `r - i`, of the permutation module on `GL_n(F_q)/P_{supp(u)}(F_q)`. The
//! boundary from `u` to `u'` (obtained by deleting the `k`-th letter of `u`) is
//! `(-1)^k` times the inclusion of `P_{supp(u)}`-invariant functions into
//! `P_{supp(u')}`-invariant ones.
//!
//! Matrices act on column vectors: `d_i` has one row per basis element of degree
//! `i + 1` and one column per basis element of degree `i`.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::field::{is_prime, FieldSpec};
use crate::flag::{enumerate_cosets, parabolic_index, steinberg_dim, FlagCoset};
use crate::snf::{elementary_divisors, IntMatrix};
use crate::weyl::GeneratorSet;
use crate::word::{subword_positions, Subword, Word};
use crate::{Error, Result};

/// Coefficient ring of a complex.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Ring {
    #[serde(rename = "Z")]
    Integers,
    #[serde(rename = "Z/p^m")]
    ModPrimePower { p: u64, m: u32 },
}

impl Ring {
    pub fn mod_prime_power(p: u64, m: u32) -> Result<Ring> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::Parse("exponent m must be >= 1".into()));
        }
        Ok(Ring::ModPrimePower { p, m })
    }
}

/// Which position the sign `(-1)^k` of a face map refers to.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum SignConvention {
    /// 1-based position of the deleted letter inside the subword being shortened.
    #[default]
    SubwordPosition,
    /// 0-based position inside the subword; the negative of the default.
    ZeroBased,
    /// 1-based position of the deleted letter inside the full word.
    WordPosition,
}

/// The sorted cosets of one parabolic together with a reverse index.
#[derive(Debug)]
pub struct CosetIndex {
    pub cosets: Vec<FlagCoset>,
    lookup: HashMap<FlagCoset, usize>,
}

impl CosetIndex {
    pub fn position(&self, x: &FlagCoset) -> Option<usize> {
        self.lookup.get(x).copied()
    }

    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }
}

/// Memoised coset enumerations and projection maps for one `(n, q)`.
pub struct CosetCache<'a> {
    n: usize,
    field: &'a FieldSpec,
    bound: usize,
    indices: HashMap<GeneratorSet, CosetIndex>,
    projections: HashMap<(GeneratorSet, GeneratorSet), Vec<usize>>,
}

impl<'a> CosetCache<'a> {
    pub fn new(n: usize, field: &'a FieldSpec, bound: usize) -> Self {
        CosetCache {
            n,
            field,
            bound,
            indices: HashMap::new(),
            projections: HashMap::new(),
        }
    }

    pub fn index(&mut self, parabolic: &GeneratorSet) -> Result<&CosetIndex> {
        if !self.indices.contains_key(parabolic) {
            let cosets = enumerate_cosets(self.n, self.field, parabolic, self.bound)?;
            let lookup = cosets.iter().cloned().enumerate().map(|(k, x)| (x, k)).collect();
            self.indices
                .insert(parabolic.clone(), CosetIndex { cosets, lookup });
        }
        Ok(&self.indices[parabolic])
    }

    /// For each coset of `P_small`, the index of the `P_big`-coset containing it.
    pub fn projection(&mut self, big: &GeneratorSet, small: &GeneratorSet) -> Result<&[usize]> {
        if !small.is_subset(big) {
            return Err(Error::NotSubset {
                small: small.clone().into(),
                big: big.clone().into(),
            });
        }
        let key = (big.clone(), small.clone());
        if !self.projections.contains_key(&key) {
            self.index(big)?;
            self.index(small)?;
            let big_index = &self.indices[big];
            let map = self.indices[small]
                .cosets
                .iter()
                .map(|x| {
                    let y = x.project(big)?;
                    Ok(big_index.position(&y).expect("projection lands on an enumerated coset"))
                })
                .collect::<Result<Vec<_>>>()?;
            self.projections.insert(key.clone(), map);
        }
        Ok(&self.projections[&key])
    }
}

/// 0/1 matrix of the inclusion `ind_{P_big} 1 -> ind_{P_small} 1`: rows are cosets of
/// `P_small`, columns cosets of `P_big`, with a 1 where the small coset lies in the
/// big one.
pub fn inclusion_matrix(
    n: usize,
    field: &FieldSpec,
    big: &GeneratorSet,
    small: &GeneratorSet,
    bound: usize,
) -> Result<IntMatrix> {
    let mut cache = CosetCache::new(n, field, bound);
    let cols = cache.index(big)?.len();
    let map = cache.projection(big, small)?;
    IntMatrix::from_triplets(
        map.len(),
        cols,
        map.iter().enumerate().map(|(r, &c)| (r, c, BigInt::one())),
    )
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TermBlock {
    pub subword: Subword,
    pub parabolic: GeneratorSet,
    pub cosets: usize,
    /// First basis index of this block inside its degree.
    pub offset: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ChainTerm {
    pub degree: usize,
    pub blocks: Vec<TermBlock>,
    pub rank: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainComplex {
    pub word: Word,
    pub q: u32,
    pub ring: Ring,
    pub terms: Vec<ChainTerm>,
    /// `boundaries[i]` maps degree `i` to degree `i + 1`.
    pub boundaries: Vec<IntMatrix>,
}

/// The complex for a nonempty word with distinct letters; `d ∘ d = 0` is checked.
pub fn build_stseq(w: &Word, field: &FieldSpec, bound: usize) -> Result<ChainComplex> {
    let c = build_stseq_with(w, field, bound, SignConvention::SubwordPosition)?;
    if let Some(i) = c.first_nonzero_composite() {
        return Err(Error::NotAComplex(i));
    }
    Ok(c)
}

/// Builds the sequence of modules and maps with the chosen sign rule, without
/// checking that it is a complex.
pub fn build_stseq_with(
    w: &Word,
    field: &FieldSpec,
    bound: usize,
    convention: SignConvention,
) -> Result<ChainComplex> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    if !w.has_distinct_letters() {
        return Err(Error::RepeatedLetters);
    }
    let n = w.rank();
    let len = w.len();
    let mut cache = CosetCache::new(n, field, bound);

    let mut terms = Vec::with_capacity(len + 1);
    for degree in 0..=len {
        let mut offset = 0;
        let mut blocks = Vec::new();
        for subword in subword_positions(w, len - degree) {
            let parabolic = subword.support();
            let cosets = cache.index(&parabolic)?.len();
            blocks.push(TermBlock {
                subword,
                parabolic,
                cosets,
                offset,
            });
            offset += cosets;
        }
        terms.push(ChainTerm {
            degree,
            blocks,
            rank: offset,
        });
    }

    let mut boundaries = Vec::with_capacity(len);
    for degree in 0..len {
        let (source, target) = (&terms[degree], &terms[degree + 1]);
        let target_block: HashMap<&[usize], &TermBlock> = target
            .blocks
            .iter()
            .map(|b| (b.subword.positions.as_slice(), b))
            .collect();
        let mut triplets = Vec::new();
        for block in &source.blocks {
            let positions = &block.subword.positions;
            for k in 0..positions.len() {
                let mut face: Vec<usize> = positions.clone();
                face.remove(k);
                let tb = target_block[face.as_slice()];
                let exponent = match convention {
                    SignConvention::SubwordPosition => k + 1,
                    SignConvention::ZeroBased => k,
                    SignConvention::WordPosition => positions[k],
                };
                let sign = if exponent % 2 == 0 {
                    BigInt::one()
                } else {
                    -BigInt::one()
                };
                let map = cache.projection(&block.parabolic, &tb.parabolic)?;
                for (r, &c) in map.iter().enumerate() {
                    triplets.push((tb.offset + r, block.offset + c, sign.clone()));
                }
            }
        }
        boundaries.push(IntMatrix::from_triplets(target.rank, source.rank, triplets)?);
    }

    Ok(ChainComplex {
        word: w.clone(),
        q: field.order(),
        ring: Ring::Integers,
        terms,
        boundaries,
    })
}

impl ChainComplex {
    pub fn ranks(&self) -> Vec<usize> {
        self.terms.iter().map(|t| t.rank).collect()
    }

    pub fn top_degree(&self) -> usize {
        self.terms.len() - 1
    }

    /// Smallest `i` with `d_{i+1} ∘ d_i != 0` over the tagged ring.
    pub fn first_nonzero_composite(&self) -> Option<usize> {
        (0..self.boundaries.len().saturating_sub(1)).find(|&i| {
            let composite = self.boundaries[i + 1]
                .mul(&self.boundaries[i])
                .expect("consecutive boundaries compose");
            let composite = match self.ring {
                Ring::Integers => composite,
                Ring::ModPrimePower { p, m } => {
                    composite.reduce_mod(&BigInt::from(p).pow(m))
                }
            };
            !composite.is_zero()
        })
    }

    pub fn is_complex(&self) -> bool {
        self.first_nonzero_composite().is_none()
    }

    /// `sum (-1)^i rank C_i`.
    pub fn euler_characteristic(&self) -> i128 {
        self.terms
            .iter()
            .map(|t| if t.degree % 2 == 0 { t.rank as i128 } else { -(t.rank as i128) })
            .sum()
    }

    /// The same complex with entries reduced modulo `p^m`.
    pub fn tensor(&self, ring: Ring) -> ChainComplex {
        let boundaries = match ring {
            Ring::Integers => self.boundaries.clone(),
            Ring::ModPrimePower { p, m } => {
                let modulus = BigInt::from(p).pow(m);
                self.boundaries.iter().map(|d| d.reduce_mod(&modulus)).collect()
            }
        };
        ChainComplex {
            ring,
            boundaries,
            ..self.clone()
        }
    }

    /// Header `degree rank`, one line per degree, then each boundary as
    /// `d <i> <rows> <cols>` followed by 0-based `row col value` triplets.
    pub fn to_text(&self) -> String {
        let mut out = String::from("degree rank\n");
        for t in &self.terms {
            out.push_str(&format!("{} {}\n", t.degree, t.rank));
        }
        for (i, d) in self.boundaries.iter().enumerate() {
            out.push_str(&format!("d {} {} {}\n", i, d.rows(), d.cols()));
            for (r, c, v) in d.triplets() {
                out.push_str(&format!("{r} {c} {v}\n"));
            }
        }
        out
    }

    pub fn to_export(&self) -> Result<ComplexExport> {
        Ok(ComplexExport {
            word: self.word.letters().to_vec(),
            n: self.word.rank(),
            q: self.q,
            ring: self.ring,
            terms: self.terms.clone(),
            boundaries: self
                .boundaries
                .iter()
                .enumerate()
                .map(|(degree, d)| {
                    Ok(BoundaryExport {
                        degree,
                        rows: d.rows(),
                        cols: d.cols(),
                        entries: d
                            .triplets()
                            .map(|(r, c, v)| Ok((r, c, v.to_i64().ok_or(Error::Overflow)?)))
                            .collect::<Result<_>>()?,
                    })
                })
                .collect::<Result<_>>()?,
        })
    }

    pub fn from_export(e: &ComplexExport) -> Result<ChainComplex> {
        let word = Word::new(e.word.clone(), e.n)?;
        let boundaries = e
            .boundaries
            .iter()
            .map(|b| {
                IntMatrix::from_triplets(
                    b.rows,
                    b.cols,
                    b.entries.iter().map(|&(r, c, v)| (r, c, BigInt::from(v))),
                )
            })
            .collect::<Result<_>>()?;
        Ok(ChainComplex {
            word,
            q: e.q,
            ring: e.ring,
            terms: e.terms.clone(),
            boundaries,
        })
    }
}

/// JSON mirror of the text export.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ComplexExport {
    pub word: Vec<usize>,
    pub n: usize,
    pub q: u32,
    pub ring: Ring,
    pub terms: Vec<ChainTerm>,
    pub boundaries: Vec<BoundaryExport>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BoundaryExport {
    pub degree: usize,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, i64)>,
}

mod bigint_strings {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| t.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// `R^free_rank ⊕ R/t_1 ⊕ ...` for the coefficient ring `R`.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct ModuleShape {
    pub free_rank: usize,
    /// Orders of the non-free cyclic summands.
    #[serde(with = "bigint_strings")]
    pub torsion: Vec<BigInt>,
}

impl ModuleShape {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DegreeHomology {
    pub degree: usize,
    pub chain_rank: usize,
    pub homology: ModuleShape,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct HomologyResult {
    pub ring: Ring,
    pub degrees: Vec<DegreeHomology>,
}

impl HomologyResult {
    pub fn at(&self, degree: usize) -> &ModuleShape {
        &self.degrees[degree].homology
    }

    pub fn top(&self) -> &ModuleShape {
        &self.degrees.last().expect("complex has a degree").homology
    }

    /// Homology vanishes in every degree below the top one (so `d_0` is injective
    /// and the complex is exact up to the cokernel of the last map).
    pub fn is_acyclic_below_top(&self) -> bool {
        let top = self.degrees.len() - 1;
        self.degrees[..top].iter().all(|d| d.homology.is_zero())
    }
}

/// Elementary divisors of every boundary, from which homology over `Z` and every
/// `Z/p^m` is read off.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundaryDivisors {
    pub chain_ranks: Vec<usize>,
    pub divisors: Vec<Vec<BigInt>>,
}

impl BoundaryDivisors {
    pub fn of(c: &ChainComplex) -> BoundaryDivisors {
        BoundaryDivisors {
            chain_ranks: c.ranks(),
            divisors: c.boundaries.iter().map(elementary_divisors).collect(),
        }
    }

    fn rank_of(&self, boundary: Option<usize>) -> usize {
        boundary.map_or(0, |i| self.divisors.get(i).map_or(0, Vec::len))
    }

    fn torsion_of(&self, boundary: Option<usize>) -> Vec<BigInt> {
        boundary
            .and_then(|i| self.divisors.get(i))
            .map(|d| d.iter().filter(|x| !x.is_one()).cloned().collect())
            .unwrap_or_default()
    }

    /// Whether every nonzero divisor of `d_0, ..., d_{upto-1}` equals 1.
    pub fn all_unit_below(&self, upto: usize) -> bool {
        self.divisors[..upto.min(self.divisors.len())]
            .iter()
            .all(|d| d.iter().all(BigInt::is_one))
    }

    /// Homology over `Z`, or over `Z/p^m` via universal coefficients:
    /// `H^i(C ⊗ R) = H^i(C) ⊗ R ⊕ Tor(H^{i+1}(C), R)`.
    pub fn homology(&self, ring: Ring) -> HomologyResult {
        let degrees = (0..self.chain_ranks.len())
            .map(|i| {
                let incoming = i.checked_sub(1);
                let free = self.chain_ranks[i] - self.rank_of(Some(i)) - self.rank_of(incoming);
                let torsion = self.torsion_of(incoming);
                let homology = match ring {
                    Ring::Integers => ModuleShape {
                        free_rank: free,
                        torsion,
                    },
                    Ring::ModPrimePower { p, m } => {
                        let outgoing_torsion = self.torsion_of(Some(i));
                        let mut shape = ModuleShape {
                            free_rank: free,
                            torsion: Vec::new(),
                        };
                        for t in torsion.iter().chain(&outgoing_torsion) {
                            let e = p_valuation(t, p).min(m);
                            if e == m {
                                shape.free_rank += 1;
                            } else if e > 0 {
                                shape.torsion.push(BigInt::from(p).pow(e));
                            }
                        }
                        shape.torsion.sort();
                        shape
                    }
                };
                DegreeHomology {
                    degree: i,
                    chain_rank: self.chain_ranks[i],
                    homology,
                }
            })
            .collect();
        HomologyResult { ring, degrees }
    }
}

fn p_valuation(t: &BigInt, p: u64) -> u32 {
    let p = BigInt::from(p);
    let mut t = t.abs();
    let mut v = 0;
    while !t.is_zero() && (&t % &p).is_zero() {
        t /= &p;
        v += 1;
    }
    v
}

/// Homology of `c` over its own ring.
pub fn homology(c: &ChainComplex) -> HomologyResult {
    BoundaryDivisors::of(c).homology(c.ring)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SteinbergCokernel {
    pub dimension: usize,
    pub expected: String,
    pub matches_formula: bool,
}

/// `[G : P_I] * q^{l(w_{0,I})}` for `I = supp(w)`.
pub fn induced_steinberg_dimension(w: &Word, q: u64) -> Result<BigUint> {
    let i = w.support();
    Ok(parabolic_index(w.rank(), q, &i)? * steinberg_dim(&i, w.rank(), q)?)
}

/// Everything the rank and exactness statements need from one complex: its
/// chain ranks and the elementary divisors of its boundaries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Analysis {
    pub word: Word,
    pub q: u32,
    pub divisors: BoundaryDivisors,
}

/// Builds the complex (checking `d ∘ d = 0`) and keeps only its divisors.
pub fn analyse(w: &Word, field: &FieldSpec, bound: usize) -> Result<Analysis> {
    let c = build_stseq(w, field, bound)?;
    Ok(Analysis {
        word: w.clone(),
        q: field.order(),
        divisors: BoundaryDivisors::of(&c),
    })
}

impl Analysis {
    pub fn chain_ranks(&self) -> &[usize] {
        &self.divisors.chain_ranks
    }

    pub fn homology(&self, ring: Ring) -> HomologyResult {
        self.divisors.homology(ring)
    }

    pub fn d0_injective(&self) -> bool {
        self.divisors.divisors[0].len() == self.divisors.chain_ranks[0]
    }

    /// Every nonzero elementary divisor of `d_0, ..., d_{l-2}` equals 1.
    pub fn interior_divisors_unit(&self) -> bool {
        self.divisors.all_unit_below(self.divisors.divisors.len() - 1)
    }

    pub fn steinberg_cokernel(&self) -> Result<SteinbergCokernel> {
        let h = self.homology(Ring::Integers);
        let dimension = h.top().free_rank;
        let expected = induced_steinberg_dimension(&self.word, self.q as u64)?;
        Ok(SteinbergCokernel {
            dimension,
            matches_formula: BigUint::from(dimension) == expected && h.top().torsion.is_empty(),
            expected: expected.to_string(),
        })
    }

    pub fn mod_pm_acyclic(&self, p: u64, m: u32) -> Result<bool> {
        let ring = Ring::mod_prime_power(p, m)?;
        Ok(self.homology(ring).is_acyclic_below_top())
    }
}

/// Free rank of the cokernel of the last boundary, compared with the dimension of
/// the induced Steinberg module.
pub fn steinberg_cokernel(w: &Word, field: &FieldSpec, bound: usize) -> Result<SteinbergCokernel> {
    analyse(w, field, bound)?.steinberg_cokernel()
}

/// Exactness of the complex over `Z/p^m` below the top degree, `d_0` injective
/// included.
pub fn mod_pm_acyclicity(w: &Word, field: &FieldSpec, bound: usize, p: u64, m: u32) -> Result<bool> {
    Ring::mod_prime_power(p, m)?;
    analyse(w, field, bound)?.mod_pm_acyclic(p, m)
}
