//! Words in the free monoid `F+` on the simple reflections of `S_n`, and the rewrite
//! system used to reduce a word to one with pairwise distinct letters.
//!
//! The moves are
//!
//! - `C`: cyclic shift, moving the first letter to the end;
//! - `K`: swapping an adjacent commuting pair `s t` with `|s - t| >= 2`;
//! - `R`: replacing a braid triple `s t s` with `|s - t| = 1` by `t s t`;
//! - `CONTRACT_LEFT` / `CONTRACT_RIGHT`: for a word `s w' s`, dropping the leading
//!   (resp. trailing) `s`.
//!
//! The first three preserve the cohomology of the compactified variety; contraction
//! preserves the cohomology of the structure sheaf while shortening the word.
//! Positions are 1-based throughout.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::weyl::{GeneratorSet, WeylElement};
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<usize>,
    n: usize,
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letters.iter().join(","))
    }
}

impl Word {
    pub fn new(letters: Vec<usize>, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidRank(0));
        }
        if let Some(&index) = letters.iter().find(|&&s| s == 0 || s >= n) {
            return Err(Error::GeneratorOutOfRange { index, n });
        }
        Ok(Word { letters, n })
    }

    /// Parses a comma-separated list of letters; the empty string is the empty word.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let text = text.trim();
        let letters = if text.is_empty() {
            Vec::new()
        } else {
            text.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad letter {t:?}")))
                })
                .collect::<Result<_>>()?
        };
        Word::new(letters, n)
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// Length in `F+`, i.e. the number of letters.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn support(&self) -> GeneratorSet {
        self.letters.iter().copied().collect()
    }

    pub fn has_distinct_letters(&self) -> bool {
        self.support().len() == self.len()
    }

    /// Image of the word in `S_n`.
    pub fn to_element(&self) -> WeylElement {
        WeylElement::from_word(&self.letters, self.n).expect("letters validated at construction")
    }

    fn with_letters(&self, letters: Vec<usize>) -> Word {
        Word { letters, n: self.n }
    }

    /// Every word of the given length over the generators of `S_n`.
    pub fn all_of_length(n: usize, len: usize) -> Vec<Word> {
        if n < 2 {
            return if len == 0 {
                vec![Word { letters: vec![], n }]
            } else {
                vec![]
            };
        }
        std::iter::repeat_n(1..n, len)
            .multi_cartesian_product()
            .map(|letters| Word { letters, n })
            .collect()
    }

    /// Every nonempty word over `S_n` with pairwise distinct letters.
    pub fn all_distinct_letter_words(n: usize) -> Vec<Word> {
        let gens: Vec<usize> = (1..n).collect();
        (1..n)
            .flat_map(|k| gens.iter().copied().permutations(k).collect::<Vec<_>>())
            .map(|letters| Word { letters, n })
            .collect()
    }
}

/// The `C` move.
pub fn apply_c(w: &Word) -> Result<Word> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut letters = w.letters.clone();
    letters.rotate_left(1);
    Ok(w.with_letters(letters))
}

/// The `K` move at 1-based position `pos`, swapping letters `pos` and `pos + 1`.
pub fn apply_k(w: &Word, pos: usize) -> Result<Word> {
    if pos == 0 || pos + 1 > w.len() {
        return Err(Error::PositionOutOfRange { pos, len: w.len() });
    }
    let (s, t) = (w.letters[pos - 1], w.letters[pos]);
    if s.abs_diff(t) < 2 {
        return Err(Error::NotCommuting(s, t));
    }
    let mut letters = w.letters.clone();
    letters.swap(pos - 1, pos);
    Ok(w.with_letters(letters))
}

/// The `R` move at 1-based position `pos`: `s t s -> t s t`.
pub fn apply_r(w: &Word, pos: usize) -> Result<Word> {
    if pos == 0 || pos + 2 > w.len() {
        return Err(Error::PositionOutOfRange { pos, len: w.len() });
    }
    let (s, t, u) = (w.letters[pos - 1], w.letters[pos], w.letters[pos + 1]);
    if s != u || s.abs_diff(t) != 1 {
        return Err(Error::BraidMismatch(pos));
    }
    let mut letters = w.letters.clone();
    letters[pos - 1] = t;
    letters[pos] = s;
    letters[pos + 1] = t;
    Ok(w.with_letters(letters))
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// For `w = s w' s`, drops the leading `s` (`Left`, giving `w' s`) or the trailing
/// one (`Right`, giving `s w'`).
pub fn contract(w: &Word, side: Side) -> Result<Word> {
    if w.len() < 2 {
        return Err(Error::EndpointsDiffer);
    }
    if w.letters[0] != w.letters[w.len() - 1] {
        return Err(Error::EndpointsDiffer);
    }
    let letters = match side {
        Side::Left => w.letters[1..].to_vec(),
        Side::Right => w.letters[..w.len() - 1].to_vec(),
    };
    Ok(w.with_letters(letters))
}

/// Ordered so that `derive(Ord)` gives the tie-breaking order of the search.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum RewriteKind {
    #[serde(rename = "CONTRACT_LEFT")]
    ContractLeft,
    #[serde(rename = "CONTRACT_RIGHT")]
    ContractRight,
    C,
    K,
    R,
}

impl RewriteKind {
    pub fn name(self) -> &'static str {
        match self {
            RewriteKind::ContractLeft => "CONTRACT_LEFT",
            RewriteKind::ContractRight => "CONTRACT_RIGHT",
            RewriteKind::C => "C",
            RewriteKind::K => "K",
            RewriteKind::R => "R",
        }
    }

    /// Tag recorded with each step naming the rule that justifies it.
    pub fn justification(self) -> &'static str {
        match self {
            RewriteKind::C => "cyclic-shift",
            RewriteKind::K => "commutation",
            // The geometric argument passes through a hat letter for s t s; the
            // rewrite substitutes the braid triple directly.
            RewriteKind::R => "braid-relation-via-hat-letter",
            RewriteKind::ContractLeft => "p1-bundle-drop-leading",
            RewriteKind::ContractRight => "p1-bundle-drop-trailing",
        }
    }

    pub fn preserves_length(self) -> bool {
        matches!(self, RewriteKind::C | RewriteKind::K | RewriteKind::R)
    }
}

impl FromStr for RewriteKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "CONTRACT_LEFT" => RewriteKind::ContractLeft,
            "CONTRACT_RIGHT" => RewriteKind::ContractRight,
            "C" => RewriteKind::C,
            "K" => RewriteKind::K,
            "R" => RewriteKind::R,
            other => return Err(Error::Parse(format!("unknown rewrite kind {other:?}"))),
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RewriteStep {
    pub kind: RewriteKind,
    pub position: usize,
    pub before: Word,
    pub after: Word,
    pub justification: String,
}

impl RewriteStep {
    /// Applies `kind` at `position` to `before`.
    pub fn apply(kind: RewriteKind, position: usize, before: &Word) -> Result<RewriteStep> {
        let after = match kind {
            RewriteKind::C => apply_c(before)?,
            RewriteKind::K => apply_k(before, position)?,
            RewriteKind::R => apply_r(before, position)?,
            RewriteKind::ContractLeft => contract(before, Side::Left)?,
            RewriteKind::ContractRight => contract(before, Side::Right)?,
        };
        Ok(RewriteStep {
            kind,
            position,
            before: before.clone(),
            after,
            justification: kind.justification().to_string(),
        })
    }

    /// Re-derives `after` from `before` and checks the support is unchanged.
    pub fn is_valid(&self) -> bool {
        match RewriteStep::apply(self.kind, self.position, &self.before) {
            Ok(step) => step.after == self.after && self.after.support() == self.before.support(),
            Err(_) => false,
        }
    }

    /// `KIND pos BEFORE -> AFTER # tag`
    pub fn to_line(&self) -> String {
        format!(
            "{} {} {} -> {} # {}",
            self.kind.name(),
            self.position,
            self.before,
            self.after,
            self.justification
        )
    }

    pub fn parse_line(line: &str, n: usize) -> Result<RewriteStep> {
        let bad = || Error::Parse(format!("malformed trace line {line:?}"));
        let (body, tag) = line.split_once(" # ").ok_or_else(bad)?;
        let mut parts = body.split_whitespace();
        let kind: RewriteKind = parts.next().ok_or_else(bad)?.parse()?;
        let position = parts
            .next()
            .ok_or_else(bad)?
            .parse()
            .map_err(|_| bad())?;
        let before = Word::parse(parts.next().ok_or_else(bad)?, n)?;
        if parts.next() != Some("->") {
            return Err(bad());
        }
        let after = Word::parse(parts.next().ok_or_else(bad)?, n)?;
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(RewriteStep {
            kind,
            position,
            before,
            after,
            justification: tag.trim().to_string(),
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RewriteTrace {
    pub start: Word,
    pub steps: Vec<RewriteStep>,
    pub result: Word,
}

impl RewriteTrace {
    /// Steps chain, each step is valid, and `result` is the last `after`.
    pub fn is_consistent(&self) -> bool {
        let mut cur = &self.start;
        for step in &self.steps {
            if &step.before != cur || !step.is_valid() {
                return false;
            }
            cur = &step.after;
        }
        cur == &self.result
    }

    /// One step per line.
    pub fn to_text(&self) -> String {
        self.steps.iter().map(|s| s.to_line() + "\n").collect()
    }

    /// Parses [`RewriteTrace::to_text`] output. The start word is needed because an
    /// empty trace has no lines.
    pub fn from_text(start: Word, text: &str) -> Result<RewriteTrace> {
        let steps = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| RewriteStep::parse_line(l, start.rank()))
            .collect::<Result<Vec<_>>>()?;
        let result = steps.last().map(|s| s.after.clone()).unwrap_or_else(|| start.clone());
        Ok(RewriteTrace {
            start,
            steps,
            result,
        })
    }
}

/// Length-preserving moves applicable to `w`, in tie-breaking order.
fn shape_moves(w: &Word) -> impl Iterator<Item = (RewriteKind, usize)> + '_ {
    let l = w.letters();
    let c = (!l.is_empty()).then_some((RewriteKind::C, 1));
    let k = (1..l.len())
        .filter(move |&p| l[p - 1].abs_diff(l[p]) >= 2)
        .map(|p| (RewriteKind::K, p));
    let r = (1..l.len().saturating_sub(1))
        .filter(move |&p| l[p - 1] == l[p + 1] && l[p - 1].abs_diff(l[p]) == 1)
        .map(|p| (RewriteKind::R, p));
    c.into_iter().chain(k).chain(r)
}

/// Rewrites `w` into a word with distinct letters and the same support.
///
/// Contracts whenever the first and last letters agree; otherwise searches
/// breadth-first through `C`, `K`, `R` moves for such a word. Every word visited by
/// the search and every contraction costs one unit of `budget`.
pub fn reduce_to_coxeter(w: &Word, budget: usize) -> Result<RewriteTrace> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut steps: Vec<RewriteStep> = Vec::new();
    let mut cur = w.clone();
    let mut spent = 0usize;
    let exhausted = |steps: Vec<RewriteStep>, cur: Word| {
        Error::BudgetExhausted(Box::new(RewriteTrace {
            start: w.clone(),
            steps,
            result: cur,
        }))
    };

    while !cur.has_distinct_letters() {
        if contract(&cur, Side::Left).is_ok() {
            if spent >= budget {
                return Err(exhausted(steps, cur));
            }
            spent += 1;
            let step = RewriteStep::apply(RewriteKind::ContractLeft, 1, &cur)?;
            cur = step.after.clone();
            steps.push(step);
            continue;
        }

        let mut parent: HashMap<Word, Option<(Word, RewriteKind, usize)>> = HashMap::new();
        parent.insert(cur.clone(), None);
        let mut queue = VecDeque::from([cur.clone()]);
        let mut found = None;
        'bfs: while let Some(v) = queue.pop_front() {
            for (kind, pos) in shape_moves(&v) {
                let u = RewriteStep::apply(kind, pos, &v)?.after;
                if parent.contains_key(&u) {
                    continue;
                }
                if spent >= budget {
                    return Err(exhausted(steps, cur));
                }
                spent += 1;
                parent.insert(u.clone(), Some((v.clone(), kind, pos)));
                if u.letters[0] == u.letters[u.len() - 1] {
                    found = Some(u);
                    break 'bfs;
                }
                queue.push_back(u);
            }
        }
        // A repeated letter can always be brought to both ends; an empty search
        // space means the input had length < 2, which cannot have repeats.
        let target = found.expect("a word with repeated letters reaches the shape s w' s");
        let mut path = Vec::new();
        let mut node = target.clone();
        while let Some(Some((prev, kind, pos))) = parent.get(&node) {
            path.push((*kind, *pos, prev.clone()));
            node = prev.clone();
        }
        for (kind, pos, prev) in path.into_iter().rev() {
            steps.push(RewriteStep::apply(kind, pos, &prev)?);
        }
        cur = target;
    }

    Ok(RewriteTrace {
        start: w.clone(),
        steps,
        result: cur,
    })
}

/// A choice of positions in a word together with the subword they spell.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Subword {
    /// Sorted 1-based positions into the parent word.
    pub positions: Vec<usize>,
    pub letters: Vec<usize>,
}

impl Subword {
    pub fn support(&self) -> GeneratorSet {
        self.letters.iter().copied().collect()
    }
}

/// All `k`-element position subsets of `w`, in lexicographic order of positions.
pub fn subword_positions(w: &Word, k: usize) -> Vec<Subword> {
    (1..=w.len())
        .combinations(k)
        .map(|positions| Subword {
            letters: positions.iter().map(|&p| w.letters[p - 1]).collect(),
            positions,
        })
        .collect()
}
