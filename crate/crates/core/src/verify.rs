//! End-to-end verification suite: eight exact criteria over exhaustive sweeps.
//!
//! Criteria 1–4 share one sweep of built complexes, computed once per [`Verifier`].

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cohomology::{CohomologyReport, Engine};
use crate::complex::{Analysis, Ring};
use crate::field::FieldSpec;
use crate::flag::{enumerate_cosets, group_order, parabolic_index, FqMatrix};
use crate::weyl::{ClassExplorer, GeneratorSet, WeylElement};
use crate::word::{reduce_to_coxeter, RewriteKind, Word};
use crate::{Bounds, Error, Result};

/// Failures kept per criterion; the count is always exact.
const FAILURE_SAMPLE: usize = 8;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Scale {
    /// Reduced sweeps (`n <= 3` for complexes, `n <= 4` for `S_n`); well under a minute.
    Small,
    /// The sweeps the criteria are stated for.
    FullDesk,
}

impl FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(Scale::Small),
            "full-desk" => Ok(Scale::FullDesk),
            other => Err(Error::Parse(format!(
                "unknown scale {other:?} (expected small or full-desk)"
            ))),
        }
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scale::Small => "small",
            Scale::FullDesk => "full-desk",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub checked: usize,
    pub failure_count: usize,
    /// The first few failures, human-readable.
    pub failures: Vec<String>,
}

impl CriterionResult {
    fn new(id: u8, name: &'static str) -> Self {
        CriterionResult {
            id,
            name,
            checked: 0,
            failure_count: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(describe());
        }
    }

    fn fail(&mut self, message: String) {
        self.failure_count += 1;
        if self.failures.len() < FAILURE_SAMPLE {
            self.failures.push(message);
        }
    }

    fn record<T>(&mut self, r: Result<T>, context: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checked += 1;
                self.fail(format!("{}: {e}", context()));
                None
            }
        }
    }
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "criterion {}: {status} - {} ({} checks, {} failed)",
            self.id, self.name, self.checked, self.failure_count
        )?;
        for failure in &self.failures {
            write!(f, "\n    {failure}")?;
        }
        Ok(())
    }
}

/// One built complex of the sweep.
#[derive(Clone, Debug)]
pub struct SweepCase {
    pub q: u64,
    pub analysis: Analysis,
}

pub struct Verifier {
    scale: Scale,
    bounds: Bounds,
    seed: u64,
    sweep: OnceLock<Vec<Result<SweepCase, (u64, Word, Error)>>>,
}

const FIELDS: [u64; 2] = [2, 3];

pub const CRITERIA: [(u8, &str); 8] = [
    (1, "complex acyclicity"),
    (2, "Steinberg cokernel"),
    (3, "mod p^m acyclicity"),
    (4, "spectral degeneration"),
    (5, "counting cross-validation"),
    (6, "Geck-Pfeiffer suite"),
    (7, "reduction totality"),
    (8, "report shape"),
];

fn name_of(id: u8) -> &'static str {
    CRITERIA[(id - 1) as usize].1
}

/// Number of invertible `n x n` matrices over `F_q`, by enumerating all of them.
pub fn brute_force_group_order(n: usize, field: &FieldSpec) -> u64 {
    let q = field.order() as u64;
    let total = q.pow((n * n) as u32);
    (0..total)
        .filter(|&code| {
            let mut c = code;
            let rows = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            let x = (c % q) as u32;
                            c /= q;
                            x
                        })
                        .collect()
                })
                .collect();
            FqMatrix::from_rows(rows).is_ok_and(|m| m.is_invertible(field))
        })
        .count() as u64
}

impl Verifier {
    pub fn new(scale: Scale, bounds: Bounds, seed: u64) -> Self {
        Verifier {
            scale,
            bounds,
            seed,
            sweep: OnceLock::new(),
        }
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    fn max_complex_rank(&self) -> usize {
        match self.scale {
            Scale::Small => 3,
            Scale::FullDesk => 4,
        }
    }

    fn max_weyl_rank(&self) -> usize {
        match self.scale {
            Scale::Small => 4,
            Scale::FullDesk => 5,
        }
    }

    fn max_word_length(&self) -> usize {
        match self.scale {
            Scale::Small => 4,
            Scale::FullDesk => 6,
        }
    }

    /// Every distinct-letter word for `2 <= n <= max`, over `F_2` and `F_3`.
    pub fn sweep(&self) -> &[Result<SweepCase, (u64, Word, Error)>] {
        self.sweep.get_or_init(|| {
            let mut out = Vec::new();
            for q in FIELDS {
                let engine = match Engine::new(q, self.bounds) {
                    Ok(e) => e,
                    Err(e) => {
                        out.push(Err((q, Word::new(vec![], 2).expect("empty word"), e)));
                        continue;
                    }
                };
                for n in 2..=self.max_complex_rank() {
                    for w in Word::all_distinct_letter_words(n) {
                        out.push(
                            engine
                                .analyse(&w)
                                .map(|analysis| SweepCase { q, analysis })
                                .map_err(|e| (q, w.clone(), e)),
                        );
                    }
                }
            }
            out
        })
    }

    fn for_each_case(&self, r: &mut CriterionResult, mut f: impl FnMut(&mut CriterionResult, &SweepCase)) {
        for case in self.sweep() {
            match case {
                Ok(c) => f(r, c),
                Err((q, w, e)) => r.fail(format!(
                    "q={q} w={:?} n={}: {e}",
                    w.letters(),
                    w.rank()
                )),
            }
        }
    }

    pub fn criterion(&self, id: u8) -> CriterionResult {
        match id {
            1 => self.acyclicity(),
            2 => self.steinberg_cokernel(),
            3 => self.mod_pm(),
            4 => self.spectral(),
            5 => self.counting(),
            6 => self.geck_pfeiffer(),
            7 => self.reduction(),
            8 => self.report_shape(),
            _ => {
                let mut r = CriterionResult::new(id, "unknown");
                r.fail(format!("no criterion {id}"));
                r
            }
        }
    }

    pub fn run_all(&self) -> Vec<CriterionResult> {
        CRITERIA.iter().map(|&(id, _)| self.criterion(id)).collect()
    }

    fn acyclicity(&self) -> CriterionResult {
        let mut r = CriterionResult::new(1, name_of(1));
        self.for_each_case(&mut r, |r, c| {
            let a = &c.analysis;
            let label = || format!("q={} w={:?} n={}", c.q, a.word.letters(), a.word.rank());
            // d ∘ d = 0 is enforced when the complex is built.
            r.check(a.d0_injective(), || format!("{}: d_0 not injective", label()));
            r.check(a.interior_divisors_unit(), || {
                format!("{}: interior elementary divisor != 1", label())
            });
            r.check(a.homology(Ring::Integers).is_acyclic_below_top(), || {
                format!("{}: interior integer homology nonzero", label())
            });
        });
        r
    }

    fn steinberg_cokernel(&self) -> CriterionResult {
        let mut r = CriterionResult::new(2, name_of(2));
        let mut flagship = false;
        self.for_each_case(&mut r, |r, c| {
            let a = &c.analysis;
            let label = || format!("q={} w={:?} n={}", c.q, a.word.letters(), a.word.rank());
            if let Some(s) = r.record(a.steinberg_cokernel(), label) {
                r.check(s.matches_formula, || {
                    format!("{}: cokernel {} vs formula {}", label(), s.dimension, s.expected)
                });
                if c.q == 2 && a.word.rank() == 3 && a.word.letters() == [1, 2] {
                    flagship = true;
                    r.check(a.chain_ranks() == [1, 14, 21] && s.dimension == 8, || {
                        format!("flagship: ranks {:?}, cokernel {}", a.chain_ranks(), s.dimension)
                    });
                }
            }
        });
        r.check(flagship, || "flagship instance missing from the sweep".into());
        r
    }

    fn mod_pm(&self) -> CriterionResult {
        let mut r = CriterionResult::new(3, name_of(3));
        self.for_each_case(&mut r, |r, c| {
            let a = &c.analysis;
            let p = FieldSpec::from_order(c.q).map_or(c.q, |f| f.characteristic() as u64);
            for m in 1..=3 {
                let label = || format!("q={} w={:?} n={} p^m={p}^{m}", c.q, a.word.letters(), a.word.rank());
                if let Some(ok) = r.record(a.mod_pm_acyclic(p, m), label) {
                    r.check(ok, || format!("{}: not acyclic", label()));
                }
            }
        });
        r
    }

    fn spectral(&self) -> CriterionResult {
        let mut r = CriterionResult::new(4, name_of(4));
        let engines: Vec<_> = FIELDS.iter().map(|&q| Engine::new(q, self.bounds)).collect();
        self.for_each_case(&mut r, |r, c| {
            let a = &c.analysis;
            let label = || format!("q={} w={:?} n={}", c.q, a.word.letters(), a.word.rank());
            let engine = match &engines[FIELDS.iter().position(|&q| q == c.q).unwrap_or(0)] {
                Ok(e) => e,
                Err(e) => return r.fail(format!("{}: {e}", label())),
            };
            let p = engine.field().characteristic() as u64;
            let Some(cokernel) = r.record(a.steinberg_cokernel(), label) else {
                return;
            };
            for m in 1..=3 {
                if let Some((e1, e2)) = r.record(engine.spectral_pages_from(a, p, m), label) {
                    let len = a.word.len();
                    r.check(
                        e1.higher_rows_vanish()
                            && e2.is_concentrated_at(len, 0)
                            && e2.get(len, 0) == cokernel.dimension as u64,
                        || format!("{} m={m}: E2 = {:?}", label(), e2.nonzero()),
                    );
                }
            }
        });
        r
    }

    fn counting(&self) -> CriterionResult {
        let mut r = CriterionResult::new(5, name_of(5));
        for q in FIELDS {
            let Some(field) = r.record(FieldSpec::from_order(q), || format!("q={q}")) else {
                continue;
            };
            for n in 1..=self.max_complex_rank() {
                for i in GeneratorSet::all_subsets(n) {
                    let label = || format!("n={n} q={q} I={i}");
                    let (Some(cosets), Some(index)) = (
                        r.record(enumerate_cosets(n, &field, &i, self.bounds.max_cosets), label),
                        r.record(parabolic_index(n, q, &i), label),
                    ) else {
                        continue;
                    };
                    r.check(index == cosets.len().into(), || {
                        format!("{}: {} cosets, multinomial {index}", label(), cosets.len())
                    });
                }
            }
        }
        for (n, q) in [(2, 2), (2, 3), (3, 2)] {
            let Some(field) = r.record(FieldSpec::from_order(q), || format!("q={q}")) else {
                continue;
            };
            let brute = brute_force_group_order(n, &field);
            let formula = group_order(n, q);
            r.check(formula == brute.into(), || {
                format!("|GL_{n}(F_{q})|: formula {formula}, enumeration {brute}")
            });
        }
        r
    }

    fn geck_pfeiffer(&self) -> CriterionResult {
        let mut r = CriterionResult::new(6, name_of(6));
        let explorer = ClassExplorer::new(self.bounds.max_rank);
        for n in 1..=self.max_weyl_rank() {
            for w in WeylElement::all(n) {
                let label = || format!("w={:?}", w.one_line());
                let Some(cmin) = r.record(explorer.cmin(&w), label) else {
                    continue;
                };
                let minimal = cmin.contains(&w);
                let drop = (1..n).any(|s| w.conjugate_by(s).length() + 2 == w.length());
                r.check(minimal != drop, || {
                    format!(
                        "{}: in C_min = {minimal}, single length-2 descent conjugation = {drop}",
                        label()
                    )
                });

                if let Some((end, chain)) = r.record(explorer.gp_reduce(&w), label) {
                    r.check(
                        chain.is_valid_arrow()
                            && cmin.contains(&end)
                            && explorer.min_class_length(&w).ok() == Some(end.length()),
                        || format!("{}: reduction chain does not reach C_min", label()),
                    );
                }

                let height_zero = matches!(explorer.height(&w), Ok(0));
                r.check(height_zero == w.is_parabolic_coxeter(), || {
                    format!(
                        "{}: height 0 = {height_zero}, Coxeter of some W_J = {}",
                        label(),
                        w.is_parabolic_coxeter()
                    )
                });
            }

            let full = GeneratorSet::full(n);
            let coxeter: Vec<_> = WeylElement::all(n)
                .into_iter()
                .filter(|w| w.is_coxeter(&full).unwrap_or(false))
                .collect();
            for a in &coxeter {
                for b in &coxeter {
                    let label = || format!("{:?} -> {:?}", a.one_line(), b.one_line());
                    if let Some(chain) = r.record(explorer.coxeter_shift_path(a, b), label) {
                        r.check(
                            chain.end() == b && chain.lengths().iter().all(|&l| l == n - 1),
                            || format!("{}: path leaves length {}", label(), n - 1),
                        );
                    }
                }
            }
        }
        r
    }

    fn reduction(&self) -> CriterionResult {
        let mut r = CriterionResult::new(7, name_of(7));
        let engines: Vec<_> = FIELDS
            .iter()
            .filter_map(|&q| r.record(Engine::new(q, self.bounds), || format!("q={q}")))
            .collect();
        for n in 2..=4 {
            for len in 1..=self.max_word_length() {
                for w in Word::all_of_length(n, len) {
                    let label = || format!("n={n} w={:?}", w.letters());
                    let Some(trace) = r.record(reduce_to_coxeter(&w, self.bounds.budget), label) else {
                        continue;
                    };
                    let v = &trace.result;
                    r.check(
                        trace.is_consistent()
                            && v.has_distinct_letters()
                            && v.len() == v.support().len()
                            && v.support() == w.support(),
                        || format!("{}: ends at {:?}", label(), v.letters()),
                    );
                    for step in &trace.steps {
                        for engine in &engines {
                            let dims = [&step.before, &step.after].map(|x| {
                                engine.structure_sheaf(x).map(|rep| rep.entries[&0].dimension)
                            });
                            let ok = match (&dims[0], &dims[1]) {
                                (Ok(a), Ok(b)) => a == b,
                                _ => false,
                            };
                            let length_ok = step.kind.preserves_length()
                                || step.after.len() + 1 == step.before.len();
                            r.check(ok && length_ok, || {
                                format!("{}: {} changes H^0 ({dims:?})", label(), step.to_line())
                            });
                        }
                        if matches!(step.kind, RewriteKind::C | RewriteKind::K | RewriteKind::R) {
                            r.check(step.after.len() == step.before.len(), || {
                                format!("{}: {} changes length", label(), step.to_line())
                            });
                        }
                    }
                }
            }
        }
        r
    }

    fn report_words(&self) -> Vec<Word> {
        let mut words = Vec::new();
        for n in 2..=self.max_complex_rank() {
            for len in 1..=3 {
                words.extend(Word::all_of_length(n, len));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for _ in 0..32 {
            let n = rng.gen_range(2..=4);
            let len = rng.gen_range(1..=self.max_word_length());
            let letters = (0..len).map(|_| rng.gen_range(1..n)).collect();
            words.push(Word::new(letters, n).expect("letters drawn in range"));
        }
        words
    }

    fn report_shape(&self) -> CriterionResult {
        let mut r = CriterionResult::new(8, name_of(8));
        let words = self.report_words();
        for q in FIELDS {
            let Some(engine) = r.record(Engine::new(q, self.bounds), || format!("q={q}")) else {
                continue;
            };
            let p = engine.field().characteristic() as u64;
            for w in &words {
                let label = || format!("q={q} n={} w={:?}", w.rank(), w.letters());
                let mut reports: Vec<CohomologyReport> = Vec::new();
                let structure = r.record(engine.structure_sheaf(w), label);
                let canonical = r.record(engine.canonical_sheaf(w), label);
                let exponents = [Some(1), Some(2), Some(3), None];
                let etale: Vec<_> = exponents
                    .iter()
                    .filter_map(|&m| r.record(engine.etale_constant(w, p, m), label))
                    .collect();
                let compact: Vec<_> = exponents
                    .iter()
                    .filter_map(|&m| r.record(engine.compact_support(w, p, m), label))
                    .collect();
                let (Some(structure), Some(canonical)) = (structure, canonical) else {
                    continue;
                };
                r.check(canonical.top().dimension == structure.top().dimension, || {
                    format!("{}: canonical top rank differs from H^0", label())
                });
                if let Some(count) = r.record(engine.irreducible_components(w), label) {
                    r.check(count == structure.top().dimension.into(), || {
                        format!("{}: {count} components vs H^0 rank", label())
                    });
                }
                for family in [&etale, &compact] {
                    r.check(
                        family.len() == exponents.len()
                            && family.windows(2).all(|x| x[0].top() == x[1].top()),
                        || format!("{}: ranks depend on m", label()),
                    );
                }
                r.check(
                    compact.iter().all(|c| c.nonzero_degrees() == [w.len()]),
                    || format!("{}: compact support not in degree l(w)", label()),
                );
                reports.push(structure);
                reports.push(canonical);
                reports.extend(etale);
                reports.extend(compact);
                for report in &reports {
                    r.check(report.has_valid_shape(), || {
                        format!("{}: bad shape {:?}", label(), report.nonzero_degrees())
                    });
                    let round_trip = serde_json::to_string(report)
                        .ok()
                        .and_then(|s| serde_json::from_str::<CohomologyReport>(&s).ok());
                    r.check(round_trip.as_ref() == Some(report), || {
                        format!("{}: JSON round trip changed the report", label())
                    });
                }
            }
        }
        r
    }
}
