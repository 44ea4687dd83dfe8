//! The symmetric group `S_n` as the Weyl group of `GL_n`.
//!
//! Elements are stored in one-line notation with 1-based values. The simple
//! reflection `s_i` (for `1 <= i < n`) swaps `i` and `i + 1`, and products are
//! composed right to left, so `s_1 s_2` is the permutation `(2, 3, 1)`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Bounds, Error, Result};

/// A permutation of `{1, ..., n}` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct WeylElement {
    images: Vec<usize>,
}

impl TryFrom<Vec<usize>> for WeylElement {
    type Error = Error;

    fn try_from(images: Vec<usize>) -> Result<Self> {
        WeylElement::from_one_line(images)
    }
}

impl From<WeylElement> for Vec<usize> {
    fn from(w: WeylElement) -> Self {
        w.images
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.images.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl WeylElement {
    pub fn identity(n: usize) -> Self {
        WeylElement {
            images: (1..=n).collect(),
        }
    }

    pub fn from_one_line(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::InvalidRank(0));
        }
        let mut seen = vec![false; n];
        for &x in &images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::InvalidPermutation(images));
            }
            seen[x - 1] = true;
        }
        Ok(WeylElement { images })
    }

    /// The simple reflection `s_i` of `S_n`.
    pub fn generator(i: usize, n: usize) -> Result<Self> {
        check_generator(i, n)?;
        Ok(Self::identity(n).right_mul_generator(i))
    }

    /// The product `s_{i_1} s_{i_2} ... s_{i_k}`.
    pub fn from_word(letters: &[usize], n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidRank(0));
        }
        let mut w = Self::identity(n);
        for &i in letters {
            check_generator(i, n)?;
            w = w.right_mul_generator(i);
        }
        Ok(w)
    }

    /// Every permutation of `S_n` in lexicographic order of one-line notation.
    pub fn all(n: usize) -> Vec<WeylElement> {
        use itertools::Itertools;
        (1..=n)
            .permutations(n)
            .map(|images| WeylElement { images })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn one_line(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &x)| x == k + 1)
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &WeylElement) -> Result<WeylElement> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch(self.rank(), other.rank()));
        }
        Ok(WeylElement {
            images: other.images.iter().map(|&x| self.images[x - 1]).collect(),
        })
    }

    pub fn inverse(&self) -> WeylElement {
        let mut images = vec![0; self.rank()];
        for (k, &x) in self.images.iter().enumerate() {
            images[x - 1] = k + 1;
        }
        WeylElement { images }
    }

    /// `s_i * self`: swaps the values `i` and `i + 1`.
    pub fn left_mul_generator(&self, i: usize) -> WeylElement {
        let images = self
            .images
            .iter()
            .map(|&x| match x {
                x if x == i => i + 1,
                x if x == i + 1 => i,
                x => x,
            })
            .collect();
        WeylElement { images }
    }

    /// `self * s_i`: swaps the entries in positions `i` and `i + 1`.
    pub fn right_mul_generator(&self, i: usize) -> WeylElement {
        let mut images = self.images.clone();
        images.swap(i - 1, i);
        WeylElement { images }
    }

    /// `s_i * self * s_i`.
    pub fn conjugate_by(&self, i: usize) -> WeylElement {
        self.left_mul_generator(i).right_mul_generator(i)
    }

    /// Bruhat length, computed as the number of inversions.
    pub fn length(&self) -> usize {
        let w = &self.images;
        let mut count = 0;
        for a in 0..w.len() {
            for b in a + 1..w.len() {
                if w[a] > w[b] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Generators `s_i` with `l(s_i w) < l(w)`.
    pub fn left_descents(&self) -> Vec<usize> {
        let inv = self.inverse();
        (1..self.rank())
            .filter(|&i| inv.images[i - 1] > inv.images[i])
            .collect()
    }

    /// Generators `s_i` with `l(w s_i) < l(w)`.
    pub fn right_descents(&self) -> Vec<usize> {
        (1..self.rank())
            .filter(|&i| self.images[i - 1] > self.images[i])
            .collect()
    }

    /// The lexicographically smallest reduced word.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.length());
        let mut w = self.clone();
        while let Some(&i) = w.left_descents().first() {
            word.push(i);
            w = w.left_mul_generator(i);
        }
        word
    }

    /// All reduced words, in lexicographic order.
    pub fn reduced_words(&self) -> Vec<Vec<usize>> {
        let descents = self.left_descents();
        if descents.is_empty() {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for i in descents {
            for tail in self.left_mul_generator(i).reduced_words() {
                let mut word = Vec::with_capacity(tail.len() + 1);
                word.push(i);
                word.extend(tail);
                out.push(word);
            }
        }
        out
    }

    /// Bruhat order via the tableau criterion: for every `k`, the sorted first `k`
    /// values of `self` are dominated entrywise by those of `other`.
    pub fn bruhat_leq(&self, other: &WeylElement) -> Result<bool> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch(self.rank(), other.rank()));
        }
        let mut a = Vec::with_capacity(self.rank());
        let mut b = Vec::with_capacity(self.rank());
        for k in 0..self.rank() {
            insert_sorted(&mut a, self.images[k]);
            insert_sorted(&mut b, other.images[k]);
            if a.iter().zip(&b).any(|(x, y)| x > y) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `{s in S | s <= w}`. In type A, `s_i <= w` iff `w` does not stabilise `{1..i}`.
    pub fn support(&self) -> GeneratorSet {
        let mut prefix_max = 0;
        let mut indices = Vec::new();
        for i in 1..self.rank() {
            prefix_max = prefix_max.max(self.images[i - 1]);
            if prefix_max > i {
                indices.push(i);
            }
        }
        GeneratorSet { indices }
    }

    /// Whether `self` is a Coxeter element of `W_I`: a product of the generators of
    /// `I`, each used exactly once.
    pub fn is_coxeter(&self, parabolic: &GeneratorSet) -> Result<bool> {
        parabolic.validate(self.rank())?;
        let support = self.support();
        if !support.is_subset(parabolic) {
            return Err(Error::NotInParabolic);
        }
        Ok(self.length() == parabolic.len() && support == *parabolic)
    }

    /// Coxeter element of the standard parabolic generated by its own support.
    pub fn is_parabolic_coxeter(&self) -> bool {
        self.length() == self.support().len()
    }
}

fn insert_sorted(v: &mut Vec<usize>, x: usize) {
    let pos = v.partition_point(|&y| y < x);
    v.insert(pos, x);
}

fn check_generator(i: usize, n: usize) -> Result<()> {
    if i == 0 || i >= n {
        Err(Error::GeneratorOutOfRange { index: i, n })
    } else {
        Ok(())
    }
}

/// A subset `I` of the simple reflections, stored as sorted distinct indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
#[serde(from = "Vec<usize>", into = "Vec<usize>")]
pub struct GeneratorSet {
    indices: Vec<usize>,
}

impl From<Vec<usize>> for GeneratorSet {
    fn from(v: Vec<usize>) -> Self {
        v.into_iter().collect()
    }
}

impl From<GeneratorSet> for Vec<usize> {
    fn from(s: GeneratorSet) -> Self {
        s.indices
    }
}

impl FromIterator<usize> for GeneratorSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let set: BTreeSet<usize> = iter.into_iter().collect();
        GeneratorSet {
            indices: set.into_iter().collect(),
        }
    }
}

impl fmt::Display for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl GeneratorSet {
    pub fn empty() -> Self {
        GeneratorSet::default()
    }

    /// All of `S = {1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        GeneratorSet {
            indices: (1..n).collect(),
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn is_subset(&self, other: &GeneratorSet) -> bool {
        self.indices.iter().all(|&i| other.contains(i))
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match self.indices.iter().find(|&&i| i == 0 || i >= n) {
            Some(&index) => Err(Error::GeneratorOutOfRange { index, n }),
            None => Ok(()),
        }
    }

    /// Every subset of `S_n`'s generators.
    pub fn all_subsets(n: usize) -> Vec<GeneratorSet> {
        let k = n.saturating_sub(1);
        (0u32..1 << k)
            .map(|mask| (1..n).filter(|&i| mask >> (i - 1) & 1 == 1).collect())
            .collect()
    }
}

/// A sequence of conjugations `w_i = s_i w_{i-1} s_i` starting at `start`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ConjugationChain {
    pub start: WeylElement,
    pub steps: Vec<(usize, WeylElement)>,
}

impl ConjugationChain {
    pub fn empty(start: WeylElement) -> Self {
        ConjugationChain {
            start,
            steps: Vec::new(),
        }
    }

    pub fn end(&self) -> &WeylElement {
        self.steps.last().map(|(_, w)| w).unwrap_or(&self.start)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Each step is a genuine conjugation and lengths never increase.
    pub fn is_valid_arrow(&self) -> bool {
        let mut prev = &self.start;
        for (s, w) in &self.steps {
            if prev.conjugate_by(*s) != *w || w.length() > prev.length() {
                return false;
            }
            prev = w;
        }
        true
    }

    pub fn lengths(&self) -> Vec<usize> {
        std::iter::once(self.start.length())
            .chain(self.steps.iter().map(|(_, w)| w.length()))
            .collect()
    }
}

/// Maximal-length element of `W_I`: reverses each Levi block of `I`.
pub fn longest_element(parabolic: &GeneratorSet, n: usize) -> Result<WeylElement> {
    parabolic.validate(n)?;
    if n == 0 {
        return Err(Error::InvalidRank(0));
    }
    let mut images: Vec<usize> = (1..=n).collect();
    let mut start = 0;
    for end in 1..=n {
        if end == n || !parabolic.contains(end) {
            images[start..end].reverse();
            start = end;
        }
    }
    Ok(WeylElement { images })
}

/// Brute-force conjugacy computations in `S_n` for `n` up to a configured bound.
#[derive(Clone, Copy, Debug)]
pub struct ClassExplorer {
    pub max_rank: usize,
}

impl Default for ClassExplorer {
    fn default() -> Self {
        ClassExplorer {
            max_rank: Bounds::default().max_rank,
        }
    }
}

impl ClassExplorer {
    pub fn new(max_rank: usize) -> Self {
        ClassExplorer { max_rank }
    }

    fn check(&self, w: &WeylElement) -> Result<()> {
        if w.rank() > self.max_rank {
            Err(Error::RankBoundExceeded {
                n: w.rank(),
                bound: self.max_rank,
            })
        } else {
            Ok(())
        }
    }

    /// The conjugacy class of `w`, as the closure under conjugation by generators.
    pub fn conjugacy_class(&self, w: &WeylElement) -> Result<BTreeSet<WeylElement>> {
        self.check(w)?;
        let mut class = BTreeSet::new();
        class.insert(w.clone());
        let mut queue = vec![w.clone()];
        while let Some(v) = queue.pop() {
            for s in 1..v.rank() {
                let u = v.conjugate_by(s);
                if class.insert(u.clone()) {
                    queue.push(u);
                }
            }
        }
        Ok(class)
    }

    /// Minimal-length elements of the class of `w`.
    pub fn cmin(&self, w: &WeylElement) -> Result<BTreeSet<WeylElement>> {
        let class = self.conjugacy_class(w)?;
        let min = class.iter().map(WeylElement::length).min().unwrap_or(0);
        Ok(class.into_iter().filter(|v| v.length() == min).collect())
    }

    pub fn min_class_length(&self, w: &WeylElement) -> Result<usize> {
        Ok(self
            .conjugacy_class(w)?
            .iter()
            .map(WeylElement::length)
            .min()
            .unwrap_or(0))
    }

    /// Height: 0 on `C_min`, otherwise one more than the smallest height reachable
    /// by a single conjugation `s w s` dropping the length by two.
    ///
    /// Fails with [`Error::NoLengthDescent`] when `w` is not minimal and no such
    /// conjugation exists (or none leads to an element of defined height).
    pub fn height(&self, w: &WeylElement) -> Result<usize> {
        let heights = self.class_heights(w)?;
        heights[w].ok_or_else(|| Error::NoLengthDescent(w.one_line().to_vec()))
    }

    /// Heights of every element of the class of `w`; `None` where undefined.
    pub fn class_heights(&self, w: &WeylElement) -> Result<HashMap<WeylElement, Option<usize>>> {
        let mut class: Vec<WeylElement> = self.conjugacy_class(w)?.into_iter().collect();
        class.sort_by_key(WeylElement::length);
        let min = class.first().map(WeylElement::length).unwrap_or(0);
        let mut heights: HashMap<WeylElement, Option<usize>> = HashMap::new();
        for v in class {
            let h = if v.length() == min {
                Some(0)
            } else {
                (1..v.rank())
                    .map(|s| v.conjugate_by(s))
                    .filter(|u| u.length() + 2 == v.length())
                    .filter_map(|u| heights.get(&u).copied().flatten())
                    .min()
                    .map(|h| h + 1)
            };
            heights.insert(v, h);
        }
        Ok(heights)
    }

    /// A chain of conjugations by generators with non-increasing lengths from `w`
    /// to an element of `C_min`. Breadth-first, so the chain is as short as possible.
    pub fn gp_reduce(&self, w: &WeylElement) -> Result<(WeylElement, ConjugationChain)> {
        let cmin = self.cmin(w)?;
        let chain = bfs_chain(w, |v| cmin.contains(v), |v, u| u.length() <= v.length())
            .ok_or_else(|| Error::NoPath(w.one_line().to_vec(), Vec::new()))?;
        debug_assert!(cmin.contains(chain.end()));
        Ok((chain.end().clone(), chain))
    }

    /// A length-preserving chain of generator conjugations between two Coxeter
    /// elements of `S_n`.
    pub fn coxeter_shift_path(
        &self,
        from: &WeylElement,
        to: &WeylElement,
    ) -> Result<ConjugationChain> {
        if from.rank() != to.rank() {
            return Err(Error::RankMismatch(from.rank(), to.rank()));
        }
        self.check(from)?;
        let full = GeneratorSet::full(from.rank());
        for w in [from, to] {
            if !w.is_coxeter(&full)? {
                return Err(Error::NotCoxeter(w.one_line().to_vec()));
            }
        }
        bfs_chain(from, |v| v == to, |v, u| u.length() == v.length())
            .ok_or_else(|| Error::NoPath(from.one_line().to_vec(), to.one_line().to_vec()))
    }
}

/// Breadth-first search over generator conjugations, trying generators in
/// increasing order.
fn bfs_chain(
    start: &WeylElement,
    is_target: impl Fn(&WeylElement) -> bool,
    allowed: impl Fn(&WeylElement, &WeylElement) -> bool,
) -> Option<ConjugationChain> {
    let mut parent: HashMap<WeylElement, Option<(usize, WeylElement)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(v) = queue.pop_front() {
        if is_target(&v) {
            let mut steps = Vec::new();
            let mut cur = v;
            while let Some(Some((s, prev))) = parent.get(&cur) {
                steps.push((*s, cur.clone()));
                cur = prev.clone();
            }
            steps.reverse();
            return Some(ConjugationChain {
                start: start.clone(),
                steps,
            });
        }
        for s in 1..v.rank() {
            let u = v.conjugate_by(s);
            if !parent.contains_key(&u) && allowed(&v, &u) {
                parent.insert(u.clone(), Some((s, v.clone())));
                queue.push_back(u);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(letters: &[usize], n: usize) -> WeylElement {
        WeylElement::from_word(letters, n).unwrap()
    }

    #[test]
    fn lengths() {
        assert_eq!(WeylElement::identity(3).length(), 0);
        assert_eq!(w(&[1], 2).length(), 1);
        let w0 = WeylElement::from_one_line(vec![3, 2, 1]).unwrap();
        assert_eq!(w0.length(), 3);
        assert_eq!(w(&[1, 2, 1], 3), w0);
    }

    #[test]
    fn product_convention() {
        assert_eq!(w(&[1, 2], 3).one_line(), &[2, 3, 1]);
        assert_eq!(w(&[1, 2], 3).reduced_word(), vec![1, 2]);
        assert_eq!(w(&[2, 1], 3).reduced_word(), vec![2, 1]);
        let a = w(&[1], 3);
        let b = w(&[2], 3);
        assert_eq!(a.compose(&b).unwrap(), w(&[1, 2], 3));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(WeylElement::from_one_line(vec![1, 1]).is_err());
        assert!(WeylElement::from_one_line(vec![]).is_err());
        assert_eq!(
            WeylElement::from_word(&[3], 3),
            Err(Error::GeneratorOutOfRange { index: 3, n: 3 })
        );
        let a = WeylElement::identity(2);
        let b = WeylElement::identity(3);
        assert_eq!(a.bruhat_leq(&b), Err(Error::RankMismatch(2, 3)));
    }

    #[test]
    fn bruhat_examples() {
        let e = WeylElement::identity(3);
        for v in WeylElement::all(3) {
            assert!(e.bruhat_leq(&v).unwrap());
        }
        assert!(w(&[1], 3).bruhat_leq(&w(&[1, 2, 1], 3)).unwrap());
        assert!(!w(&[1, 2], 3).bruhat_leq(&w(&[2, 1], 3)).unwrap());
    }

    #[test]
    fn supports() {
        assert!(WeylElement::identity(3).support().is_empty());
        assert_eq!(w(&[1, 2, 1], 3).support().indices(), &[1, 2]);
        assert_eq!(w(&[2], 4).support().indices(), &[2]);
    }

    #[test]
    fn coxeter_checks() {
        let full = GeneratorSet::full(3);
        assert!(w(&[1, 2], 3).is_coxeter(&full).unwrap());
        assert!(!w(&[1, 2, 1], 3).is_coxeter(&full).unwrap());
        assert!(WeylElement::identity(3)
            .is_coxeter(&GeneratorSet::empty())
            .unwrap());
        assert_eq!(
            w(&[1, 2], 3).is_coxeter(&GeneratorSet::from(vec![1])),
            Err(Error::NotInParabolic)
        );
    }

    #[test]
    fn classes_and_cmin() {
        let ex = ClassExplorer::default();
        let e = WeylElement::identity(3);
        assert_eq!(ex.conjugacy_class(&e).unwrap().len(), 1);
        let transpositions: BTreeSet<_> = [w(&[1], 3), w(&[2], 3), w(&[1, 2, 1], 3)].into();
        assert_eq!(ex.conjugacy_class(&w(&[1], 3)).unwrap(), transpositions);
        let three_cycles: BTreeSet<_> = [w(&[1, 2], 3), w(&[2, 1], 3)].into();
        assert_eq!(ex.conjugacy_class(&w(&[1, 2], 3)).unwrap(), three_cycles);
        let minimal: BTreeSet<_> = [w(&[1], 3), w(&[2], 3)].into();
        assert_eq!(ex.cmin(&w(&[1], 3)).unwrap(), minimal);
        assert_eq!(ex.cmin(&w(&[1, 2, 1], 3)).unwrap(), minimal);
        assert_eq!(ex.cmin(&e).unwrap(), [e.clone()].into());
    }

    #[test]
    fn rank_bound() {
        let ex = ClassExplorer::new(4);
        let big = WeylElement::identity(5);
        assert_eq!(
            ex.conjugacy_class(&big),
            Err(Error::RankBoundExceeded { n: 5, bound: 4 })
        );
    }

    #[test]
    fn heights() {
        let ex = ClassExplorer::default();
        assert_eq!(ex.height(&w(&[1, 2, 3], 4)).unwrap(), 0);
        assert_eq!(ex.height(&w(&[3, 1, 2], 4)).unwrap(), 0);
        assert_eq!(ex.height(&w(&[1, 2, 1], 3)).unwrap(), 1);
        // s_i w' s_i with w' the Coxeter element of S \ {s_i}
        for i in 1..4 {
            let mut word = vec![i];
            word.extend((1..4).filter(|&j| j != i));
            word.push(i);
            let v = w(&word, 4);
            assert_eq!(v.length(), 4, "{word:?}");
            assert_eq!(ex.height(&v).unwrap(), 1, "{word:?}");
        }
    }

    #[test]
    fn height_undefined_without_descent() {
        // Not minimal in its class, but every s w s keeps the length at 5.
        let v = WeylElement::from_one_line(vec![2, 4, 3, 5, 1]).unwrap();
        let ex = ClassExplorer::default();
        assert_eq!(ex.min_class_length(&v).unwrap(), 3);
        assert!((1..5).all(|s| v.conjugate_by(s).length() == 5));
        assert_eq!(ex.height(&v), Err(Error::NoLengthDescent(vec![2, 4, 3, 5, 1])));
        // The arrow relation still reaches C_min through a length-preserving shift.
        let (end, chain) = ex.gp_reduce(&v).unwrap();
        assert_eq!(end.length(), 3);
        assert!(chain.is_valid_arrow());
    }

    #[test]
    fn gp_reduce_examples() {
        let ex = ClassExplorer::default();
        let (end, chain) = ex.gp_reduce(&w(&[1], 3)).unwrap();
        assert_eq!(end, w(&[1], 3));
        assert!(chain.is_empty());
        let (end, chain) = ex.gp_reduce(&w(&[1, 2, 1], 3)).unwrap();
        assert_eq!(end, w(&[2], 3));
        assert_eq!(chain.steps, vec![(1, w(&[2], 3))]);
        let c = w(&[2, 1, 3], 4);
        let (end, chain) = ex.gp_reduce(&c).unwrap();
        assert_eq!(end, c);
        assert!(chain.is_empty());
    }

    #[test]
    fn coxeter_paths() {
        let ex = ClassExplorer::default();
        let c = w(&[1, 2], 3);
        assert!(ex.coxeter_shift_path(&c, &c).unwrap().is_empty());
        let chain = ex.coxeter_shift_path(&c, &w(&[2, 1], 3)).unwrap();
        assert!(!chain.is_empty());
        assert!(chain.lengths().iter().all(|&l| l == 2));
        let chain = ex
            .coxeter_shift_path(&w(&[1, 2, 3], 4), &w(&[3, 2, 1], 4))
            .unwrap();
        assert_eq!(chain.end(), &w(&[3, 2, 1], 4));
        assert!(chain.lengths().iter().all(|&l| l == 3));
        assert!(matches!(
            ex.coxeter_shift_path(&w(&[1], 3), &c),
            Err(Error::NotCoxeter(_))
        ));
    }

    #[test]
    fn longest_elements() {
        assert!(longest_element(&GeneratorSet::empty(), 3)
            .unwrap()
            .is_identity());
        assert_eq!(
            longest_element(&GeneratorSet::from(vec![1]), 2).unwrap(),
            w(&[1], 2)
        );
        let w0 = longest_element(&GeneratorSet::full(3), 3).unwrap();
        assert_eq!(w0.one_line(), &[3, 2, 1]);
        let i = GeneratorSet::from(vec![1, 3, 4]);
        assert_eq!(longest_element(&i, 5).unwrap().one_line(), &[2, 1, 5, 4, 3]);
    }

    #[test]
    fn longest_is_maximal_in_parabolic() {
        for n in 1..=4 {
            for i in GeneratorSet::all_subsets(n) {
                let w0 = longest_element(&i, n).unwrap();
                let max = WeylElement::all(n)
                    .into_iter()
                    .filter(|v| v.support().is_subset(&i))
                    .map(|v| v.length())
                    .max()
                    .unwrap();
                assert_eq!(w0.length(), max);
            }
        }
    }

    #[test]
    fn serde_roundtrip_validates() {
        let v = w(&[1, 2], 3);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, "[2,3,1]");
        assert_eq!(serde_json::from_str::<WeylElement>(&s).unwrap(), v);
        assert!(serde_json::from_str::<WeylElement>("[1,1]").is_err());
    }
}
