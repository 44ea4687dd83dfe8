//! `GL_n(F_q)` coset spaces `GL_n(F_q)/P_I(F_q)` realised as partial flags.
//!
//! `P_I` is the block upper-triangular parabolic whose diagonal blocks are given by
//! the Levi composition of `I`. The coset `g P_I` is determined by the chain of
//! column spans of `g` truncated at the block boundaries; each span is stored as the
//! row space of a matrix in reduced row-echelon form, which is unique.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use crate::field::FieldSpec;
use crate::weyl::{longest_element, GeneratorSet};
use crate::{Error, Result};

/// Dense matrix over `F_q` holding field-element codes row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl FqMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FqMatrix {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch);
        }
        Ok(FqMatrix {
            rows: rows.len(),
            cols,
            entries: rows.concat(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> FqMatrix {
        let mut t = FqMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &FqMatrix, field: &FieldSpec) -> Result<FqMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch);
        }
        let mut out = FqMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = 0;
                for k in 0..self.cols {
                    acc = field.add(acc, field.mul(self.get(r, k), other.get(k, c)));
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    /// Reduced row-echelon form with zero rows removed, and its pivot columns.
    pub fn rref(&self, field: &FieldSpec) -> (FqMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for c in 0..m.cols {
                    m.entries.swap(pr * m.cols + c, row * m.cols + c);
                }
            }
            let inv = field.inv(m.get(row, col)).expect("pivot is nonzero");
            for c in 0..m.cols {
                m.set(row, c, field.mul(m.get(row, c), inv));
            }
            for r in 0..m.rows {
                let f = m.get(r, col);
                if r == row || f == 0 {
                    continue;
                }
                for c in 0..m.cols {
                    let v = field.sub(m.get(r, c), field.mul(f, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        m.entries.truncate(row * m.cols);
        m.rows = row;
        (m, pivots)
    }

    pub fn rank(&self, field: &FieldSpec) -> usize {
        self.rref(field).1.len()
    }

    pub fn is_invertible(&self, field: &FieldSpec) -> bool {
        self.rows == self.cols && self.rank(field) == self.rows
    }

    fn stack(&self, other: &FqMatrix) -> FqMatrix {
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        FqMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        }
    }
}

/// Row-echelon forms of every `k`-dimensional subspace of `F_q^dim`.
fn subspaces(field: &FieldSpec, k: usize, dim: usize) -> Vec<FqMatrix> {
    let q = field.order();
    let mut out = Vec::new();
    for pivots in (0..dim).combinations(k) {
        // free positions: right of the row's pivot, outside pivot columns
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| {
                let pivots = &pivots;
                (p + 1..dim)
                    .filter(move |c| !pivots.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        let total = (q as u64).pow(free.len() as u32);
        for code in 0..total {
            let mut m = FqMatrix::zeros(k, dim);
            for (r, &p) in pivots.iter().enumerate() {
                m.set(r, p, 1);
            }
            let mut c = code;
            for &(r, col) in &free {
                m.set(r, col, (c % q as u64) as u32);
                c /= q as u64;
            }
            out.push(m);
        }
    }
    out
}

/// Block sizes of a Levi subgroup, summing to `n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Composition {
    parts: Vec<usize>,
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.parts.iter().join(","))
    }
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::Parse(format!("invalid composition {parts:?}")));
        }
        Ok(Composition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `d_1, d_1 + d_2, ..., n`.
    pub fn partial_sums(&self) -> Vec<usize> {
        self.parts
            .iter()
            .scan(0, |acc, &d| {
                *acc += d;
                Some(*acc)
            })
            .collect()
    }

    /// The generator set whose Levi composition this is.
    pub fn generator_set(&self) -> GeneratorSet {
        let cuts = self.partial_sums();
        (1..self.total()).filter(|k| !cuts.contains(k)).collect()
    }

    /// `sum n_a (n_a - 1) / 2`, the number of positive roots of the Levi.
    pub fn levi_positive_roots(&self) -> usize {
        self.parts.iter().map(|&a| a * (a - 1) / 2).sum()
    }
}

/// Block sizes of `L_I`: a maximal run `{i, ..., j}` contributes `j - i + 2`,
/// every index outside the runs a block of size 1.
pub fn levi_composition(parabolic: &GeneratorSet, n: usize) -> Result<Composition> {
    parabolic.validate(n)?;
    if n == 0 {
        return Err(Error::InvalidRank(0));
    }
    let mut parts = Vec::new();
    let mut size = 1;
    for k in 1..n {
        if parabolic.contains(k) {
            size += 1;
        } else {
            parts.push(size);
            size = 1;
        }
    }
    parts.push(size);
    Ok(Composition { parts })
}

fn q_factorial_core(k: usize, q: u64) -> BigUint {
    // prod_{i=1..k} (q^i - 1)
    let q = BigUint::from(q);
    (1..=k).fold(BigUint::one(), |acc, i| acc * (Pow::pow(&q, i) - 1u32))
}

/// `|GL_n(F_q)| = q^{n(n-1)/2} prod_{i=1..n} (q^i - 1)`.
pub fn group_order(n: usize, q: u64) -> BigUint {
    Pow::pow(&BigUint::from(q), n * n.saturating_sub(1) / 2) * q_factorial_core(n, q)
}

/// `|GL_n(F_q)/P_I(F_q)|`, the Gaussian multinomial for the Levi composition of `I`.
pub fn parabolic_index(n: usize, q: u64, parabolic: &GeneratorSet) -> Result<BigUint> {
    let comp = levi_composition(parabolic, n)?;
    let denom = comp
        .parts()
        .iter()
        .fold(BigUint::one(), |acc, &a| acc * q_factorial_core(a, q));
    Ok(q_factorial_core(n, q) / denom)
}

/// `q^{l(w_{0,I})}`, the dimension of the Steinberg representation of `L_I(F_q)`.
pub fn steinberg_dim(parabolic: &GeneratorSet, n: usize, q: u64) -> Result<BigUint> {
    let exponent = longest_element(parabolic, n)?.length();
    Ok(Pow::pow(&BigUint::from(q), exponent))
}

/// A coset of `P_I(F_q)` in `GL_n(F_q)` as a canonical partial flag.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct FlagCoset {
    flag_type: Composition,
    /// Row-echelon bases of the nested subspaces, of dimensions `flag_type.partial_sums()`.
    subspaces: Vec<FqMatrix>,
}

impl FlagCoset {
    pub fn flag_type(&self) -> &Composition {
        &self.flag_type
    }

    pub fn subspaces(&self) -> &[FqMatrix] {
        &self.subspaces
    }

    pub fn generator_set(&self) -> GeneratorSet {
        self.flag_type.generator_set()
    }

    /// The coset `g P_I` for an invertible `g`.
    pub fn from_group_element(
        g: &FqMatrix,
        parabolic: &GeneratorSet,
        field: &FieldSpec,
    ) -> Result<FlagCoset> {
        let n = g.rows();
        if !g.is_invertible(field) {
            return Err(Error::DimensionMismatch);
        }
        let flag_type = levi_composition(parabolic, n)?;
        let columns = g.transpose();
        let subspaces = flag_type
            .partial_sums()
            .into_iter()
            .map(|d| {
                let top = FqMatrix {
                    rows: d,
                    cols: n,
                    entries: columns.entries[..d * n].to_vec(),
                };
                top.rref(field).0
            })
            .collect();
        Ok(FlagCoset {
            flag_type,
            subspaces,
        })
    }

    /// Image under `G/P_{I'} -> G/P_I` for `I' ⊆ I`: keeps the subspaces whose
    /// dimensions are cut points of the coarser type.
    pub fn project(&self, coarser: &GeneratorSet) -> Result<FlagCoset> {
        let n = self.flag_type.total();
        let own = self.generator_set();
        if !own.is_subset(coarser) {
            return Err(Error::NotSubset {
                small: own.into(),
                big: coarser.clone().into(),
            });
        }
        let flag_type = levi_composition(coarser, n)?;
        let keep = flag_type.partial_sums();
        let subspaces = self
            .flag_type
            .partial_sums()
            .into_iter()
            .zip(&self.subspaces)
            .filter(|(d, _)| keep.contains(d))
            .map(|(_, s)| s.clone())
            .collect();
        Ok(FlagCoset {
            flag_type,
            subspaces,
        })
    }

    /// `type d_1,...,d_r` followed by one line per subspace: its dimension then its
    /// echelon rows. Rows are digit strings when `q <= 10`, else dot-separated codes.
    pub fn to_text(&self, q: u32) -> String {
        let mut out = format!("type {}\n", self.flag_type);
        let sep = if q <= 10 { "" } else { "." };
        for s in &self.subspaces {
            let rows = (0..s.rows()).map(|r| s.row(r).iter().join(sep)).join(" ");
            out.push_str(&format!("{}: {}\n", s.rows(), rows));
        }
        out
    }

    pub fn from_text(text: &str, q: u32) -> Result<FlagCoset> {
        let bad = |m: &str| Error::Parse(format!("flag: {m}"));
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| bad("empty"))?;
        let parts = header
            .strip_prefix("type ")
            .ok_or_else(|| bad("missing type line"))?
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| bad("bad part")))
            .collect::<Result<Vec<_>>>()?;
        let flag_type = Composition::new(parts)?;
        let n = flag_type.total();
        let mut subspaces = Vec::new();
        for (line, d) in lines.zip(flag_type.partial_sums()) {
            let (dim, rows) = line.split_once(':').ok_or_else(|| bad("missing ':'"))?;
            if dim.trim().parse::<usize>().ok() != Some(d) {
                return Err(bad("dimension mismatch"));
            }
            let rows = rows
                .split_whitespace()
                .map(|r| {
                    let codes: Vec<u32> = if q <= 10 {
                        r.chars()
                            .map(|c| c.to_digit(10).ok_or_else(|| bad("bad digit")))
                            .collect::<Result<_>>()?
                    } else {
                        r.split('.')
                            .map(|c| c.parse().map_err(|_| bad("bad code")))
                            .collect::<Result<_>>()?
                    };
                    if codes.len() != n || codes.iter().any(|&c| c >= q) {
                        return Err(bad("bad row"));
                    }
                    Ok(codes)
                })
                .collect::<Result<Vec<_>>>()?;
            if rows.len() != d {
                return Err(bad("row count"));
            }
            subspaces.push(FqMatrix {
                rows: d,
                cols: n,
                entries: rows.concat(),
            });
        }
        if subspaces.len() != flag_type.parts().len() {
            return Err(bad("subspace count"));
        }
        Ok(FlagCoset {
            flag_type,
            subspaces,
        })
    }
}

/// Every coset of `P_I(F_q)` in `GL_n(F_q)`, sorted, without duplicates.
pub fn enumerate_cosets(
    n: usize,
    field: &FieldSpec,
    parabolic: &GeneratorSet,
    bound: usize,
) -> Result<Vec<FlagCoset>> {
    let count = parabolic_index(n, field.order() as u64, parabolic)?;
    if count > BigUint::from(bound) {
        return Err(Error::CosetBoundExceeded {
            count: count.to_string(),
            bound,
        });
    }
    let flag_type = levi_composition(parabolic, n)?;
    let mut chains: Vec<Vec<FqMatrix>> = vec![Vec::new()];
    let mut prev_dim = 0;
    for d in flag_type.partial_sums() {
        let mut next = Vec::new();
        for chain in chains {
            let base = chain.last();
            let (base_pivots, base_mat) = match base {
                Some(b) => (
                    (0..b.rows())
                        .map(|r| b.row(r).iter().position(|&x| x != 0).expect("echelon row"))
                        .collect::<Vec<_>>(),
                    b.clone(),
                ),
                None => (Vec::new(), FqMatrix::zeros(0, n)),
            };
            let free_cols: Vec<usize> = (0..n).filter(|c| !base_pivots.contains(c)).collect();
            // subspaces of the quotient, lifted along the non-pivot coordinates
            for quotient in subspaces(field, d - prev_dim, n - prev_dim) {
                let mut lifted = FqMatrix::zeros(quotient.rows(), n);
                for r in 0..quotient.rows() {
                    for (k, &c) in free_cols.iter().enumerate() {
                        lifted.set(r, c, quotient.get(r, k));
                    }
                }
                let span = base_mat.stack(&lifted).rref(field).0;
                let mut extended = chain.clone();
                extended.push(span);
                next.push(extended);
            }
        }
        chains = next;
        prev_dim = d;
    }
    let mut cosets: Vec<FlagCoset> = chains
        .into_iter()
        .map(|subspaces| FlagCoset {
            flag_type: flag_type.clone(),
            subspaces,
        })
        .collect();
    cosets.sort();
    debug_assert!(cosets.windows(2).all(|w| w[0] != w[1]));
    Ok(cosets)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> GeneratorSet {
        v.iter().copied().collect()
    }

    #[test]
    fn compositions() {
        assert_eq!(levi_composition(&set(&[1, 2]), 3).unwrap().parts(), &[3]);
        assert_eq!(levi_composition(&set(&[]), 3).unwrap().parts(), &[1, 1, 1]);
        assert_eq!(levi_composition(&set(&[1, 3]), 4).unwrap().parts(), &[2, 2]);
        assert_eq!(levi_composition(&set(&[2]), 4).unwrap().parts(), &[1, 2, 1]);
        for n in 1..=5 {
            for i in GeneratorSet::all_subsets(n) {
                let c = levi_composition(&i, n).unwrap();
                assert_eq!(c.total(), n);
                assert_eq!(c.generator_set(), i);
            }
        }
        assert!(levi_composition(&set(&[3]), 3).is_err());
    }

    #[test]
    fn orders() {
        assert_eq!(group_order(1, 5), BigUint::from(4u32));
        assert_eq!(group_order(2, 2), BigUint::from(6u32));
        assert_eq!(group_order(3, 2), BigUint::from(168u32));
    }

    #[test]
    fn indices() {
        for n in 1..=4 {
            assert_eq!(
                parabolic_index(n, 3, &GeneratorSet::full(n)).unwrap(),
                BigUint::one()
            );
        }
        assert_eq!(parabolic_index(3, 2, &set(&[1])).unwrap(), BigUint::from(7u32));
        assert_eq!(parabolic_index(2, 3, &set(&[])).unwrap(), BigUint::from(4u32));
    }

    #[test]
    fn steinberg_dims() {
        assert_eq!(steinberg_dim(&set(&[]), 4, 3).unwrap(), BigUint::one());
        assert_eq!(steinberg_dim(&set(&[1, 2]), 3, 2).unwrap(), BigUint::from(8u32));
        assert_eq!(steinberg_dim(&set(&[1]), 3, 2).unwrap(), BigUint::from(2u32));
        assert_eq!(steinberg_dim(&set(&[1, 3]), 4, 3).unwrap(), BigUint::from(9u32));
    }

    #[test]
    fn enumeration_examples() {
        let f2 = FieldSpec::from_order(2).unwrap();
        assert_eq!(enumerate_cosets(2, &f2, &set(&[]), 1000).unwrap().len(), 3);
        assert_eq!(enumerate_cosets(3, &f2, &set(&[1, 2]), 1000).unwrap().len(), 1);
        assert_eq!(enumerate_cosets(3, &f2, &set(&[]), 1000).unwrap().len(), 21);
        assert!(matches!(
            enumerate_cosets(3, &f2, &set(&[]), 20),
            Err(Error::CosetBoundExceeded { .. })
        ));
    }

    #[test]
    fn projection_examples() {
        let f2 = FieldSpec::from_order(2).unwrap();
        let full = enumerate_cosets(3, &f2, &set(&[]), 1000).unwrap();
        let top = &enumerate_cosets(3, &f2, &set(&[1, 2]), 1000).unwrap()[0];
        for x in &full {
            assert_eq!(&x.project(&set(&[1, 2])).unwrap(), top);
            assert_eq!(&x.project(&set(&[])).unwrap(), x);
        }
        // e_1 ⊂ <e_1, e_2> ⊂ F_2^3, projected to type (2,1)
        let x = FlagCoset::from_group_element(&FqMatrix::identity(3), &set(&[]), &f2).unwrap();
        let y = x.project(&set(&[1])).unwrap();
        assert_eq!(y.flag_type().parts(), &[2, 1]);
        assert_eq!(y.subspaces()[0], x.subspaces()[1]);
        assert_eq!(y.subspaces()[0].rows(), 2);
        let coarse = y.project(&set(&[1, 2])).unwrap();
        assert_eq!(&coarse, top);
        assert!(matches!(y.project(&set(&[2])), Err(Error::NotSubset { .. })));
    }

    #[test]
    fn group_element_cosets_are_enumerated() {
        let f3 = FieldSpec::from_order(3).unwrap();
        let i = set(&[1]);
        let all = enumerate_cosets(3, &f3, &i, 1000).unwrap();
        let g = FqMatrix::from_rows(vec![vec![0, 1, 2], vec![1, 1, 0], vec![2, 0, 1]]).unwrap();
        assert!(g.is_invertible(&f3));
        let x = FlagCoset::from_group_element(&g, &i, &f3).unwrap();
        assert!(all.binary_search(&x).is_ok());
    }

    #[test]
    fn text_roundtrip() {
        for q in [2u64, 3, 4, 11, 13] {
            let f = FieldSpec::from_order(q).unwrap();
            for x in enumerate_cosets(3, &f, &set(&[2]), 10_000).unwrap() {
                let t = x.to_text(f.order());
                assert_eq!(FlagCoset::from_text(&t, f.order()).unwrap(), x);
            }
        }
        let x = &enumerate_cosets(2, &FieldSpec::from_order(2).unwrap(), &set(&[]), 10).unwrap()[0];
        assert_eq!(x.to_text(2), "type 1,1\n1: 01\n2: 10 01\n");
    }
}
