//! `dlcoh`: command-line front end to the `dlcoh` crate.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 bound exceeded,
//! 4 reduction budget exhausted.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use dlcoh::cohomology::{CohomologyReport, Engine};
use dlcoh::complex::{build_stseq, homology, HomologyResult, ModuleShape, Ring};
use dlcoh::field::FieldSpec;
use dlcoh::verify::{Scale, Verifier};
use dlcoh::weyl::ClassExplorer;
use dlcoh::word::{reduce_to_coxeter, RewriteTrace, Word};
use dlcoh::{Bounds, Error};

#[derive(Parser)]
#[command(name = "dlcoh", version, about = "Cohomology of Deligne-Lusztig varieties for GL_n, exactly")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output format (default: json for `cohomology`, text otherwise).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Largest n for conjugacy-class enumeration.
    #[arg(long, global = true)]
    max_rank: Option<usize>,
    /// Largest number of cosets that will be enumerated.
    #[arg(long, global = true)]
    max_cosets: Option<usize>,
    /// Step budget of the word reduction search.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

impl Global {
    fn bounds(&self) -> Bounds {
        let d = Bounds::default();
        Bounds {
            max_rank: self.max_rank.unwrap_or(d.max_rank),
            max_cosets: self.max_cosets.unwrap_or(d.max_cosets),
            budget: self.budget.unwrap_or(d.budget),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Coeff {
    Structure,
    Modp,
    Zp,
    Canonical,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VarietyArg {
    /// The smooth compactification.
    Compact,
    /// The open variety, compactly supported cohomology.
    Open,
}

#[derive(Subcommand)]
enum Command {
    /// Length, support, height and minimal-length reduction of a permutation.
    Weyl {
        #[arg(long)]
        n: usize,
        /// Comma-separated generator indices; "" is the identity.
        #[arg(long)]
        word: String,
    },
    /// Rewrite a word to a distinct-letter word of the same support.
    Reduce {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        word: String,
    },
    /// Cohomology report for a word and coefficient system.
    Cohomology {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        word: String,
        #[arg(long, value_enum)]
        coeff: Coeff,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, value_enum, default_value = "compact")]
        variety: VarietyArg,
        /// Check the report against the induced complex / coset enumeration.
        #[arg(long)]
        cross_check: bool,
    },
    /// Export the induced complex of a distinct-letter word.
    Complex {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        word: String,
        /// Append homology (over Z, or Z/p^m with --p and --m).
        #[arg(long)]
        homology: bool,
        #[arg(long, requires = "m")]
        p: Option<u64>,
        #[arg(long, requires = "p")]
        m: Option<u32>,
    },
    /// Run the acceptance criteria.
    Verify {
        #[arg(long)]
        scale: Scale,
    },
}

enum Failure {
    Usage(String),
    Lib(Error),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<(), Failure>;

fn emit(format: Format, text: String, value: &impl Serialize) {
    match format {
        Format::Text => print!("{text}"),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(value).expect("outputs serialize")
        ),
    }
}

/// The JSON spelling of a unit enum value, for text output.
fn tag(x: &impl Serialize) -> String {
    match serde_json::to_value(x) {
        Ok(Value::String(s)) => s,
        Ok(v) => v.to_string(),
        Err(_) => String::new(),
    }
}

fn cmd_weyl(g: &Global, n: usize, word: &str) -> Outcome {
    let w = Word::parse(word, n)?;
    let x = w.to_element();
    let explorer = ClassExplorer::new(g.bounds().max_rank);
    let cmin = explorer.cmin(&x)?;
    let height = match explorer.height(&x) {
        Ok(h) => Some(h),
        Err(Error::NoLengthDescent(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let (end, chain) = explorer.gp_reduce(&x)?;
    let reduced = x.reduced_word();

    let mut text = format!(
        "element: {:?}\nlength: {}\nreduced word: {}\nsupport: {}\ncoxeter of its support: {}\nin C_min: {}\n",
        x.one_line(),
        x.length(),
        join(&reduced),
        x.support(),
        x.is_parabolic_coxeter(),
        cmin.contains(&x),
    );
    match height {
        Some(h) => text.push_str(&format!("height: {h}\n")),
        None => text.push_str("height: undefined (no length-2 descent conjugation)\n"),
    }
    text.push_str(&format!("minimal-length reduction: {:?}", x.one_line()));
    for (s, v) in &chain.steps {
        text.push_str(&format!(" -s{s}-> {:?}", v.one_line()));
    }
    text.push('\n');

    let value = json!({
        "element": x,
        "length": x.length(),
        "reduced_word": reduced,
        "support": x.support(),
        "coxeter": x.is_parabolic_coxeter(),
        "in_cmin": cmin.contains(&x),
        "height": height,
        "gp_reduce": { "end": end, "chain": chain },
    });
    emit(g.format.unwrap_or(Format::Text), text, &value);
    Ok(())
}

fn join(letters: &[usize]) -> String {
    letters.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn trace_output(g: &Global, trace: &RewriteTrace) {
    let text = format!("{}# result: {}\n", trace.to_text(), join(trace.result.letters()));
    emit(g.format.unwrap_or(Format::Text), text, trace);
}

fn cmd_reduce(g: &Global, n: usize, word: &str) -> Outcome {
    let w = Word::parse(word, n)?;
    match reduce_to_coxeter(&w, g.bounds().budget) {
        Ok(trace) => {
            trace_output(g, &trace);
            Ok(())
        }
        Err(Error::BudgetExhausted(partial)) => {
            trace_output(g, &partial);
            Err(Error::BudgetExhausted(partial).into())
        }
        Err(e) => Err(e.into()),
    }
}

fn nonempty_word(word: &str, n: usize) -> Result<Word, Failure> {
    let w = Word::parse(word, n)?;
    if w.is_empty() {
        return Err(Failure::Usage("the empty word is only accepted by `weyl`".into()));
    }
    Ok(w)
}

#[allow(clippy::too_many_arguments)]
fn cmd_cohomology(
    g: &Global,
    n: usize,
    q: u64,
    word: &str,
    coeff: Coeff,
    p: Option<u64>,
    m: Option<u32>,
    variety: VarietyArg,
    cross_check: bool,
) -> Outcome {
    let w = nonempty_word(word, n)?;
    let engine = Engine::new(q, g.bounds())?;
    let need_p = || p.ok_or_else(|| Failure::Usage("--p is required for this coefficient kind".into()));
    let mut report = match (variety, coeff) {
        (VarietyArg::Compact, Coeff::Structure) => engine.structure_sheaf(&w)?,
        (VarietyArg::Compact, Coeff::Canonical) => engine.canonical_sheaf(&w)?,
        (VarietyArg::Compact, Coeff::Modp) => {
            let m = m.ok_or_else(|| Failure::Usage("--m is required for modp".into()))?;
            engine.etale_constant(&w, need_p()?, Some(m))?
        }
        (VarietyArg::Compact, Coeff::Zp) => engine.etale_constant(&w, need_p()?, None)?,
        (VarietyArg::Open, Coeff::Modp) => {
            let m = m.ok_or_else(|| Failure::Usage("--m is required for modp".into()))?;
            engine.compact_support(&w, need_p()?, Some(m))?
        }
        (VarietyArg::Open, Coeff::Zp) => engine.compact_support(&w, need_p()?, None)?,
        (VarietyArg::Open, _) => {
            return Err(Failure::Usage(
                "the open variety takes modp or zp coefficients".into(),
            ))
        }
    };
    if cross_check {
        report.cross_checked = engine.cross_check_report(&report)?;
    }
    let text = report_text(&report);
    emit(g.format.unwrap_or(Format::Json), text, &report);
    if cross_check && !report.cross_checked {
        return Err(Failure::Verification);
    }
    Ok(())
}

fn report_text(r: &CohomologyReport) -> String {
    let mut out = format!(
        "variety: {}\nword: {}\nn: {}\nq: {}\ncoefficients: {}\n",
        tag(&r.variety),
        join(&r.word),
        r.n,
        r.q,
        serde_json::to_string(&r.coefficients).expect("coefficients serialize")
    );
    for (k, rep) in &r.entries {
        out.push_str(&format!(
            "H^{k}: {} parabolic {} dimension {}\n",
            tag(&rep.kind),
            rep.parabolic,
            rep.dimension
        ));
    }
    out.push_str(&format!("cross_checked: {}\n", r.cross_checked));
    if let Some(t) = &r.trace {
        out.push_str(&t.to_text());
    }
    for note in &r.notes {
        out.push_str(&format!("note: {note}\n"));
    }
    out
}

fn shape_text(s: &ModuleShape, ring: Ring) -> String {
    let base = match ring {
        Ring::Integers => "Z".to_string(),
        Ring::ModPrimePower { p, m } => format!("Z/{}", p.pow(m)),
    };
    let mut parts = Vec::new();
    if s.free_rank > 0 {
        parts.push(format!("{base}^{}", s.free_rank));
    }
    parts.extend(s.torsion.iter().map(|t| format!("Z/{t}")));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn homology_text(h: &HomologyResult) -> String {
    let mut out = String::from("homology\n");
    for d in &h.degrees {
        out.push_str(&format!("H^{} {}\n", d.degree, shape_text(&d.homology, h.ring)));
    }
    out.push_str(&format!("cokernel rank {}\n", h.top().free_rank));
    out
}

fn cmd_complex(
    g: &Global,
    n: usize,
    q: u64,
    word: &str,
    with_homology: bool,
    pm: Option<(u64, u32)>,
) -> Outcome {
    let w = nonempty_word(word, n)?;
    let field = FieldSpec::from_order(q)?;
    let mut c = build_stseq(&w, &field, g.bounds().max_cosets)?;
    if let Some((p, m)) = pm {
        c = c.tensor(Ring::mod_prime_power(p, m)?);
    }
    let mut text = c.to_text();
    let mut value = json!({ "complex": c.to_export()? });
    if with_homology {
        let h = homology(&c);
        text.push_str(&homology_text(&h));
        value["homology"] = serde_json::to_value(&h).expect("homology serializes");
    }
    emit(g.format.unwrap_or(Format::Text), text, &value);
    Ok(())
}

fn cmd_verify(g: &Global, scale: Scale) -> Outcome {
    let v = Verifier::new(scale, g.bounds(), g.seed);
    let results = v.run_all();
    let mut text = String::new();
    for r in &results {
        text.push_str(&format!("{r}\n"));
    }
    let all = results.iter().all(|r| r.passed());
    text.push_str(&format!(
        "{}: {}/{} criteria passed at scale {scale}\n",
        if all { "PASS" } else { "FAIL" },
        results.iter().filter(|r| r.passed()).count(),
        results.len()
    ));
    let value = json!({
        "scale": scale.to_string(),
        "passed": all,
        "criteria": results.iter().map(|r| json!({
            "id": r.id,
            "name": r.name,
            "passed": r.passed(),
            "checks": r.checked,
            "failed": r.failure_count,
            "failures": r.failures,
        })).collect::<Vec<_>>(),
    });
    emit(g.format.unwrap_or(Format::Text), text, &value);
    if all {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn run(cli: Cli) -> Outcome {
    let g = &cli.global;
    match cli.command {
        Command::Weyl { n, word } => cmd_weyl(g, n, &word),
        Command::Reduce { n, word } => cmd_reduce(g, n, &word),
        Command::Cohomology {
            n,
            q,
            word,
            coeff,
            p,
            m,
            variety,
            cross_check,
        } => cmd_cohomology(g, n, q, &word, coeff, p, m, variety, cross_check),
        Command::Complex {
            n,
            q,
            word,
            homology,
            p,
            m,
        } => cmd_complex(g, n, q, &word, homology, p.zip(m)),
        Command::Verify { scale } => cmd_verify(g, scale),
    }
}

fn exit_code(f: &Failure) -> u8 {
    match f {
        Failure::Verification => 1,
        Failure::Usage(_) => 2,
        Failure::Lib(Error::BudgetExhausted(_)) => 4,
        Failure::Lib(e) if e.is_bound() => 3,
        Failure::Lib(_) => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::Lib(e) => eprintln!("error: {e}"),
                Failure::Verification => eprintln!("verification failed"),
            }
            ExitCode::from(exit_code(&f))
        }
    }
}
