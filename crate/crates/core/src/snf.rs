//! Arbitrary-precision integer matrices and their Smith normal form.
//!
//! Two routes compute elementary divisors:
//!
//! - [`smith_normal_form`] runs dense Euclidean elimination and also returns the
//!   unimodular transforms, so `M = U * D * V` can be checked by multiplication;
//! - [`elementary_divisors`] is the route used on large boundary matrices. It pivots
//!   on unit entries of a sparse representation (in checked `i64`, redone in
//!   `BigInt` on overflow) and hands whatever is left to the dense algorithm.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use crate::{Error, Result};

/// Sparse integer matrix; each row keeps `(column, value)` pairs sorted by column
/// with no stored zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, BigInt)>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].push((i, BigInt::one()));
        }
        m
    }

    pub fn from_dense<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch);
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data: rows
                .iter()
                .map(|r| {
                    r.iter()
                        .cloned()
                        .map(Into::into)
                        .enumerate()
                        .filter(|(_, v)| !v.is_zero())
                        .collect()
                })
                .collect(),
        })
    }

    /// Builds from `(row, col, value)` triplets; repeated positions are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, BigInt)>,
    ) -> Result<Self> {
        let mut data: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); rows];
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::DimensionMismatch);
            }
            data[r].push((c, v));
        }
        for row in &mut data {
            row.sort_by_key(|(c, _)| *c);
            let mut merged: Vec<(usize, BigInt)> = Vec::with_capacity(row.len());
            for (c, v) in row.drain(..) {
                match merged.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv += v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|(_, v)| !v.is_zero());
            *row = merged;
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn row(&self, r: usize) -> &[(usize, BigInt)] {
        &self.data[r]
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        match self.data[r].binary_search_by_key(&c, |(col, _)| *col) {
            Ok(k) => self.data[r][k].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, c.to_owned(), v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (r, c, v) in self.triplets() {
            out[r][c] = v.clone();
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut data: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); self.cols];
        for (r, c, v) in self.triplets() {
            data[c].push((r, v.clone()));
        }
        IntMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch);
        }
        let mut data = Vec::with_capacity(self.rows);
        let mut acc: Vec<BigInt> = vec![BigInt::zero(); other.cols];
        let mut touched: BTreeSet<usize> = BTreeSet::new();
        for row in &self.data {
            for (k, a) in row {
                for (c, b) in &other.data[*k] {
                    acc[*c] += a * b;
                    touched.insert(*c);
                }
            }
            let mut out = Vec::with_capacity(touched.len());
            for c in std::mem::take(&mut touched) {
                let v = std::mem::take(&mut acc[c]);
                if !v.is_zero() {
                    out.push((c, v));
                }
            }
            data.push(out);
        }
        Ok(IntMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    /// Entrywise reduction into `[0, modulus)`.
    pub fn reduce_mod(&self, modulus: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|(c, v)| (*c, v.mod_floor(modulus)))
                        .filter(|(_, v)| !v.is_zero())
                        .collect()
                })
                .collect(),
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch);
        }
        let n = self.rows;
        let mut a = self.to_dense();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
                return Ok(BigInt::zero());
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(if n == 0 { sign } else { sign * &a[n - 1][n - 1] })
    }
}

/// `M = left * D * right`, with `D` the `rows x cols` diagonal matrix of `divisors`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub divisors: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    pub fn diagonal(&self) -> IntMatrix {
        let rows = self.left.cols();
        let cols = self.right.rows();
        let mut d = IntMatrix::zeros(rows, cols);
        for (i, v) in self.divisors.iter().enumerate() {
            d.data[i].push((i, v.clone()));
        }
        d
    }

    /// Multiplies the factors back together.
    pub fn reconstruct(&self) -> IntMatrix {
        self.left
            .mul(&self.diagonal())
            .and_then(|ld| ld.mul(&self.right))
            .expect("factor shapes agree")
    }
}

struct Dense {
    a: Vec<Vec<BigInt>>,
    // M = u * a * v is maintained throughout.
    u: Option<Vec<Vec<BigInt>>>,
    v: Option<Vec<Vec<BigInt>>>,
}

fn dense_identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

impl Dense {
    fn rows(&self) -> usize {
        self.a.len()
    }

    fn cols(&self) -> usize {
        self.a.first().map_or(0, Vec::len)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            for row in u.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in &mut self.a {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            v.swap(i, j);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -std::mem::take(x);
        }
        if let Some(u) = &mut self.u {
            for row in u.iter_mut() {
                row[i] = -std::mem::take(&mut row[i]);
            }
        }
    }

    /// `row_k, row_i <- [[s, t], [-b', a']] (row_k, row_i)` with `s a' + t b' = 1`.
    fn row_combine(&mut self, k: usize, i: usize, s: &BigInt, t: &BigInt, a1: &BigInt, b1: &BigInt) {
        for j in 0..self.cols() {
            let (x, y) = (&self.a[k][j], &self.a[i][j]);
            let nk = s * x + t * y;
            let ni = a1 * y - b1 * x;
            self.a[k][j] = nk;
            self.a[i][j] = ni;
        }
        if let Some(u) = &mut self.u {
            // u <- u * [[a', -t], [b', s]]
            for row in u.iter_mut() {
                let (x, y) = (&row[k], &row[i]);
                let nk = a1 * x + b1 * y;
                let ni = s * y - t * x;
                row[k] = nk;
                row[i] = ni;
            }
        }
    }

    /// `col_k, col_j <- (s col_k + t col_j, a' col_j - b' col_k)`.
    fn col_combine(&mut self, k: usize, j: usize, s: &BigInt, t: &BigInt, a1: &BigInt, b1: &BigInt) {
        for row in &mut self.a {
            let (x, y) = (&row[k], &row[j]);
            let nk = s * x + t * y;
            let nj = a1 * y - b1 * x;
            row[k] = nk;
            row[j] = nj;
        }
        if let Some(v) = &mut self.v {
            // v <- [[a', b'], [-t, s]] * v
            let cols = v[k].len();
            for c in 0..cols {
                let (x, y) = (&v[k][c], &v[j][c]);
                let nk = a1 * x + b1 * y;
                let nj = s * y - t * x;
                v[k][c] = nk;
                v[j][c] = nj;
            }
        }
    }

    /// Clears column `t` below and row `t` right of the pivot `(t, t)` by division
    /// with remainder, moving the smallest remainder into the pivot each round.
    fn clear_cross(&mut self, t: usize) {
        let one = BigInt::one();
        let zero = BigInt::zero();
        loop {
            let pivot = self.a[t][t].clone();
            for i in t + 1..self.rows() {
                if self.a[i][t].is_zero() {
                    continue;
                }
                let c = -self.a[i][t].div_floor(&pivot);
                self.row_combine(t, i, &one, &zero, &one, &-c);
            }
            for j in t + 1..self.cols() {
                if self.a[t][j].is_zero() {
                    continue;
                }
                let c = -self.a[t][j].div_floor(&pivot);
                self.col_combine(t, j, &one, &zero, &one, &-c);
            }
            let row_min = (t + 1..self.rows())
                .filter(|&i| !self.a[i][t].is_zero())
                .min_by_key(|&i| self.a[i][t].abs());
            let col_min = (t + 1..self.cols())
                .filter(|&j| !self.a[t][j].is_zero())
                .min_by_key(|&j| self.a[t][j].abs());
            match (row_min, col_min) {
                (None, None) => return,
                (Some(i), Some(j)) if self.a[t][j].abs() < self.a[i][t].abs() => {
                    self.swap_cols(t, j)
                }
                (Some(i), _) => self.swap_rows(t, i),
                (None, Some(j)) => self.swap_cols(t, j),
            }
        }
    }

    fn run(mut self) -> (Vec<BigInt>, Option<Vec<Vec<BigInt>>>, Option<Vec<Vec<BigInt>>>) {
        let limit = self.rows().min(self.cols());
        let mut divisors = Vec::new();
        for t in 0..limit {
            // smallest nonzero entry in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..self.rows() {
                for j in t..self.cols() {
                    let x = &self.a[i][j];
                    if !x.is_zero()
                        && best.is_none_or(|(bi, bj)| x.abs() < self.a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                self.clear_cross(t);
                let pivot = self.a[t][t].clone();
                let bad = (t + 1..self.rows())
                    .find(|&i| (t + 1..self.cols()).any(|j| !self.a[i][j].is_multiple_of(&pivot)));
                match bad {
                    Some(i) => {
                        // row_t += row_i brings a non-multiple into the pivot row
                        let one = BigInt::one();
                        let zero = BigInt::zero();
                        self.row_combine(t, i, &one, &one, &one, &zero);
                    }
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
            divisors.push(self.a[t][t].clone());
        }
        (divisors, self.u, self.v)
    }
}

fn to_int_matrix(dense: Vec<Vec<BigInt>>) -> IntMatrix {
    let n = dense.len();
    IntMatrix::from_dense(&dense).unwrap_or_else(|_| IntMatrix::zeros(n, 0))
}

/// Smith normal form with transforms: `divisors` satisfy `d_1 | d_2 | ...`, and
/// `left`, `right` are unimodular with `M = left * D * right`.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let dense = Dense {
        a: m.to_dense(),
        u: Some(dense_identity(m.rows())),
        v: Some(dense_identity(m.cols())),
    };
    let (divisors, u, v) = dense.run();
    SmithForm {
        divisors,
        left: u.map(to_int_matrix).unwrap_or_else(|| IntMatrix::identity(m.rows())),
        right: v.map(to_int_matrix).unwrap_or_else(|| IntMatrix::identity(m.cols())),
    }
}

/// Entry type of the sparse elimination.
trait Entry: Clone + PartialEq + std::fmt::Debug {
    fn nil() -> Self;
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn is_nil(&self) -> bool;
    fn is_unit(&self) -> bool;
    /// `self - f * other`, or `None` on overflow.
    fn sub_mul(&self, f: &Self, other: &Self) -> Option<Self>;
    fn neg_div_unit(&self, unit: &Self) -> Self;
}

impl Entry for i64 {
    fn nil() -> Self {
        0
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i64()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn sub_mul(&self, f: &Self, other: &Self) -> Option<Self> {
        self.checked_sub(f.checked_mul(*other)?)
    }
    fn neg_div_unit(&self, unit: &Self) -> Self {
        // unit is ±1, so division is multiplication
        self * unit
    }
}

impl Entry for BigInt {
    fn nil() -> Self {
        Zero::zero()
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn sub_mul(&self, f: &Self, other: &Self) -> Option<Self> {
        Some(self - f * other)
    }
    fn neg_div_unit(&self, unit: &Self) -> Self {
        self * unit
    }
}

struct Overflow;

/// Eliminates unit pivots; returns the number of unit divisors found and the
/// remaining rows (in the original column space).
fn unit_elimination<T: Entry>(m: &IntMatrix) -> std::result::Result<(usize, Vec<Vec<(usize, T)>>), Overflow> {
    let mut rows: Vec<Vec<(usize, T)>> = Vec::with_capacity(m.rows());
    for r in 0..m.rows() {
        rows.push(
            m.row(r)
                .iter()
                .map(|(c, v)| T::from_big(v).map(|x| (*c, x)).ok_or(Overflow))
                .collect::<std::result::Result<_, _>>()?,
        );
    }
    let mut alive = vec![true; rows.len()];
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols()];
    for (r, row) in rows.iter().enumerate() {
        for (c, _) in row {
            col_rows[*c].insert(r);
        }
    }
    let mut units = 0;
    loop {
        // Markowitz-style choice among unit entries
        let mut best: Option<(usize, usize, usize)> = None;
        for (c, rs) in col_rows.iter().enumerate() {
            if rs.is_empty() {
                continue;
            }
            for &r in rs {
                let row = &rows[r];
                let k = row.binary_search_by_key(&c, |(col, _)| *col).expect("indexed");
                if row[k].1.is_unit() {
                    let cost = (rs.len() - 1) * (row.len() - 1);
                    if best.is_none_or(|(_, _, b)| cost < b) {
                        best = Some((r, c, cost));
                    }
                }
            }
            if best.is_some_and(|(_, _, cost)| cost == 0) {
                break;
            }
        }
        let Some((pr, pc, _)) = best else { break };
        let pivot_row = std::mem::take(&mut rows[pr]);
        alive[pr] = false;
        for (c, _) in &pivot_row {
            col_rows[*c].remove(&pr);
        }
        let k = pivot_row
            .binary_search_by_key(&pc, |(col, _)| *col)
            .expect("pivot present");
        let unit = pivot_row[k].1.clone();
        let targets: Vec<usize> = col_rows[pc].iter().copied().collect();
        for r in targets {
            let row = std::mem::take(&mut rows[r]);
            let kr = row.binary_search_by_key(&pc, |(col, _)| *col).expect("indexed");
            // factor = a_rc / unit
            let factor = row[kr].1.neg_div_unit(&unit);
            let mut merged = Vec::with_capacity(row.len() + pivot_row.len());
            let (mut i, mut j) = (0, 0);
            while i < row.len() || j < pivot_row.len() {
                let ci = row.get(i).map(|(c, _)| *c);
                let cj = pivot_row.get(j).map(|(c, _)| *c);
                match (ci, cj) {
                    (Some(a), Some(b)) if a == b => {
                        let v = row[i].1.sub_mul(&factor, &pivot_row[j].1).ok_or(Overflow)?;
                        if v.is_nil() {
                            col_rows[a].remove(&r);
                        } else {
                            merged.push((a, v));
                        }
                        i += 1;
                        j += 1;
                    }
                    (Some(a), b) if b.is_none_or(|b| a < b) => {
                        merged.push(row[i].clone());
                        i += 1;
                    }
                    (_, Some(b)) => {
                        let v = T::nil()
                            .sub_mul(&factor, &pivot_row[j].1)
                            .ok_or(Overflow)?;
                        if !v.is_nil() {
                            col_rows[b].insert(r);
                            merged.push((b, v));
                        }
                        j += 1;
                    }
                    _ => unreachable!(),
                }
            }
            rows[r] = merged;
        }
        debug_assert!(col_rows[pc].is_empty());
        units += 1;
    }
    let rest = rows
        .into_iter()
        .zip(alive)
        .filter(|(row, a)| *a && !row.is_empty())
        .map(|(row, _)| row)
        .collect();
    Ok((units, rest))
}

fn finish<T: Entry>(cols: usize, units: usize, rest: Vec<Vec<(usize, T)>>) -> Vec<BigInt> {
    let mut divisors = vec![BigInt::one(); units];
    if !rest.is_empty() {
        let used: BTreeSet<usize> = rest.iter().flat_map(|r| r.iter().map(|(c, _)| *c)).collect();
        let index: Vec<usize> = (0..cols).collect();
        let compact: Vec<usize> = index.into_iter().filter(|c| used.contains(c)).collect();
        let a: Vec<Vec<BigInt>> = rest
            .iter()
            .map(|row| {
                let mut dense = vec![BigInt::zero(); compact.len()];
                for (c, v) in row {
                    let k = compact.binary_search(c).expect("column used");
                    dense[k] = v.to_big();
                }
                dense
            })
            .collect();
        let (rest_divisors, _, _) = Dense { a, u: None, v: None }.run();
        divisors.extend(rest_divisors);
    }
    divisors
}

/// Nonzero elementary divisors of `m`, in divisibility order.
pub fn elementary_divisors(m: &IntMatrix) -> Vec<BigInt> {
    match unit_elimination::<i64>(m) {
        Ok((units, rest)) => finish(m.cols(), units, rest),
        Err(Overflow) => {
            let (units, rest) = unit_elimination::<BigInt>(m)
                .unwrap_or_else(|_| unreachable!("BigInt arithmetic cannot overflow"));
            finish(m.cols(), units, rest)
        }
    }
}
