//! `rankprof`: rank profiles, separator profiles, cycle witnesses and
//! formula synthesis from the command line.
//!
//! Exit codes: 0 success, 1 error or failed verification, 2 partial result
//! (a cap was hit), 3 no cycle witness (aperiodic input to `extract`).

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use rankprof::formula::{synth_dist, synth_exact_word, synth_horizon_classifier, synth_length, Formula};
use rankprof::profiles::{classify, ClassifyOptions, LanguageHandle, Profiler, Separator};
use rankprof::regular::{cycle_witnesses, extract_cycle_witness};
use rankprof::{enumerate_ball, Alphabet, Caps, Word};

#[derive(Parser)]
#[command(name = "rankprof", version, about = "Finite-horizon first-order rank profiles")]
struct Cli {
    /// Step budget for type computations (overrides RANKPROF_BUDGET).
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Plot,
}

#[derive(clap::Args)]
struct Horizon {
    #[arg(long)]
    max_n: usize,
    #[arg(long, default_value_t = 2)]
    min_n: usize,
}

#[derive(clap::Args)]
struct Output {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a language and tabulate its rank profile with bounds.
    Profile {
        /// `regex:<pattern>`, `dfa:<file>` or `builtin:<name>`.
        #[arg(long)]
        lang: String,
        /// Alphabet symbols, e.g. `ab` (default: inferred).
        #[arg(long)]
        alphabet: Option<String>,
        #[command(flatten)]
        horizon: Horizon,
        /// Largest rank tried by the global rank search.
        #[arg(long)]
        q_max: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Print a synthesized sentence with a `; rank=R size=S` trailer.
    Synth {
        #[command(subcommand)]
        kind: SynthKind,
    },
    /// Extract a syntactic cycle witness.
    Extract {
        #[arg(long)]
        lang: String,
        #[arg(long)]
        alphabet: Option<String>,
        /// One witness per element of period at least 2.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Tabulate the separator profile of two disjoint languages.
    Separator {
        #[arg(long)]
        k: String,
        #[arg(long)]
        h: String,
        #[command(flatten)]
        horizon: Horizon,
        #[command(flatten)]
        out: Output,
    },
    /// Check certified bounds, monotonicity and route equality; exits 1 on any violation.
    Verify {
        #[arg(long)]
        lang: String,
        #[arg(long)]
        alphabet: Option<String>,
        #[command(flatten)]
        horizon: Horizon,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SynthKind {
    /// `Dist_d(v0, v1)`.
    Dist {
        #[arg(long)]
        d: usize,
    },
    /// Sentence true exactly on words of length `m`.
    Length {
        #[arg(long)]
        m: usize,
    },
    /// Sentence true exactly on one word.
    ExactWord {
        /// The word; `@eps` for the empty word.
        #[arg(long)]
        word: String,
        #[arg(long)]
        alphabet: Option<String>,
    },
    /// Horizon classifier for `L ∩ Σ^{≤n}`.
    Classifier {
        #[arg(long)]
        lang: String,
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(long)]
        n: usize,
    },
}

const EXIT_PARTIAL: u8 = 2;
const EXIT_NO_WITNESS: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut caps = Caps::from_env();
    if let Some(b) = cli.budget {
        caps.budget = b;
    }
    match run(cli.command, caps) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let capped = e.downcast_ref::<rankprof::Error>().is_some_and(rankprof::Error::is_cap);
            ExitCode::from(if capped { EXIT_PARTIAL } else { 1 })
        }
    }
}

fn alphabet(arg: Option<&str>) -> anyhow::Result<Option<Arc<Alphabet>>> {
    Ok(match arg {
        Some(s) => Some(Arc::new(Alphabet::from_chars(s)?)),
        None => None,
    })
}

fn language(spec: &str, alpha: Option<&str>) -> anyhow::Result<LanguageHandle> {
    LanguageHandle::parse_spec_with(spec, alphabet(alpha)?).with_context(|| format!("reading language {spec:?}"))
}

fn emit(text: &str, output: Option<&PathBuf>) -> anyhow::Result<()> {
    match output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                out.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

fn run(command: Command, caps: Caps) -> anyhow::Result<u8> {
    match command {
        Command::Profile { lang, alphabet: alpha, horizon, q_max, out } => {
            let l = language(&lang, alpha.as_deref())?;
            let opts = ClassifyOptions { min_n: horizon.min_n, max_n: horizon.max_n, q_max, caps };
            let report = classify(&l, &opts)?;
            let text = match out.format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
                Format::Plot => report.to_plot(),
            };
            emit(&text, out.output.as_ref())?;
            eprintln!("classification: {}", report.classification.as_str());
            for v in &report.violations {
                eprintln!("violation: {v}");
            }
            if !report.violations.is_empty() {
                return Ok(1);
            }
            Ok(if report.has_skipped() { EXIT_PARTIAL } else { 0 })
        }
        Command::Synth { kind } => {
            let phi = synth(kind, caps)?;
            println!("{phi}");
            println!("; rank={} size={}", phi.quantifier_rank(), phi.tree_size());
            Ok(0)
        }
        Command::Extract { lang, alphabet: alpha, all, output } => {
            let l = language(&lang, alpha.as_deref())?;
            let monoid = l.monoid()?;
            let witnesses = if all {
                cycle_witnesses(monoid)?
            } else {
                extract_cycle_witness(monoid)?.into_iter().collect()
            };
            if witnesses.is_empty() {
                eprintln!("no cycle witness: the syntactic monoid of {} is aperiodic", l.description());
                return Ok(EXIT_NO_WITNESS);
            }
            let infos: Vec<_> = witnesses.iter().map(rankprof::profiles::WitnessInfo::from).collect();
            let text = if all { serde_json::to_string_pretty(&infos)? } else { serde_json::to_string_pretty(&infos[0])? };
            emit(&text, output.as_ref())?;
            Ok(0)
        }
        Command::Separator { k, h, horizon, out } => separator(&k, &h, &horizon, &out, caps),
        Command::Verify { lang, alphabet: alpha, horizon, format, output } => {
            let l = language(&lang, alpha.as_deref())?;
            verify(&l, &horizon, format, output.as_ref(), caps)
        }
    }
}

fn synth(kind: SynthKind, caps: Caps) -> anyhow::Result<Formula> {
    Ok(match kind {
        SynthKind::Dist { d } => synth_dist(d),
        SynthKind::Length { m } => synth_length(m),
        SynthKind::ExactWord { word, alphabet: alpha } => {
            let alpha = match alphabet(alpha.as_deref())? {
                Some(a) => a,
                None if word == rankprof::words::EPS_TOKEN || word.is_empty() => Arc::new(Alphabet::from_chars("a")?),
                None => {
                    let mut symbols: Vec<char> = word.chars().collect();
                    symbols.sort_unstable();
                    symbols.dedup();
                    Arc::new(Alphabet::new(symbols)?)
                }
            };
            synth_exact_word(&Word::parse(&alpha, &word)?)
        }
        SynthKind::Classifier { lang, alphabet: alpha, n } => {
            let l = language(&lang, alpha.as_deref())?;
            let mut members = Vec::new();
            for w in enumerate_ball(l.alphabet(), n, caps.ball_cap)? {
                if l.contains(&w)? {
                    members.push(w);
                }
            }
            synth_horizon_classifier(&members, n)?
        }
    })
}

fn separator(k: &str, h: &str, horizon: &Horizon, out: &Output, caps: Caps) -> anyhow::Result<u8> {
    let (kl, hl) = (language(k, None)?, language(h, None)?);
    let mut sep = Separator::new(&kl, &hl, caps)?;
    let mut rows = Vec::new();
    let mut skipped = false;
    for n in horizon.min_n..=horizon.max_n {
        match sep.sigma(n) {
            Ok(r) => rows.push(serde_json::json!({
                "n": n,
                "sigma": r.value,
                "upper": rankprof::universal_upper_bound(n.max(1)),
                "witness_k": r.witness.as_ref().map(|p| p.0.to_string()),
                "witness_h": r.witness.as_ref().map(|p| p.1.to_string()),
                "skipped": null,
            })),
            Err(e) if e.is_cap() => {
                skipped = true;
                rows.push(serde_json::json!({
                    "n": n,
                    "sigma": null,
                    "upper": rankprof::universal_upper_bound(n.max(1)),
                    "witness_k": null,
                    "witness_h": null,
                    "skipped": e.to_string(),
                }));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let cell = |v: &serde_json::Value| match v {
        serde_json::Value::Null => String::new(),
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    let text = match out.format {
        Format::Json => serde_json::to_string_pretty(&serde_json::json!({
            "schema": "rankprof.separator/1",
            "k": kl.description(),
            "h": hl.description(),
            "alphabet": sep.alphabet().symbols().iter().map(char::to_string).collect::<Vec<_>>(),
            "globally_disjoint": sep.globally_disjoint(),
            "rows": rows,
        }))?,
        Format::Csv => {
            let mut s = String::from("n,sigma,upper,witness_k,witness_h\n");
            for r in &rows {
                let sigma = if r["sigma"].is_null() { "skipped".to_string() } else { cell(&r["sigma"]) };
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r["n"],
                    sigma,
                    r["upper"],
                    cell(&r["witness_k"]),
                    cell(&r["witness_h"])
                ));
            }
            s
        }
        Format::Plot => {
            let mut s = String::from("n\tsigma\tupper\n");
            for r in &rows {
                let sigma = if r["sigma"].is_null() { "NaN".to_string() } else { cell(&r["sigma"]) };
                s.push_str(&format!("{}\t{}\t{}\n", r["n"], sigma, r["upper"]));
            }
            s
        }
    };
    emit(&text, out.output.as_ref())?;
    if !sep.globally_disjoint() {
        eprintln!("note: the languages intersect beyond the computed horizons");
    }
    Ok(if skipped { EXIT_PARTIAL } else { 0 })
}

fn verify(l: &LanguageHandle, horizon: &Horizon, format: Format, output: Option<&PathBuf>, caps: Caps) -> anyhow::Result<u8> {
    let opts = ClassifyOptions { min_n: horizon.min_n, max_n: horizon.max_n, q_max: None, caps };
    let report = classify(l, &opts)?;
    let mut profiler = Profiler::new(l, caps);
    let mut failures = report.violations.clone();
    let mut rows = Vec::new();
    for row in &report.rows {
        let via_defect = match row.exact {
            Some(exact) => {
                let d = profiler.rho_via_defect(row.n)?;
                if d != exact {
                    failures.push(format!("n = {}: defect route gives {d}, type grouping gives {exact}", row.n));
                }
                Some(d)
            }
            None => None,
        };
        let ok = row.exact.is_some_and(|e| {
            row.lower.is_none_or(|lo| lo <= e) && e <= row.upper && via_defect == Some(e)
        });
        rows.push((row, via_defect, ok));
    }
    let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&serde_json::json!({
            "schema": "rankprof.verify/1",
            "language": l.description(),
            "classification": report.classification.as_str(),
            "rows": rows.iter().map(|(r, d, ok)| serde_json::json!({
                "n": r.n, "exact": r.exact, "via_defect": d, "lower": r.lower, "upper": r.upper,
                "status": if r.exact.is_none() { "skipped" } else if *ok { "ok" } else { "violated" },
            })).collect::<Vec<_>>(),
            "violations": failures,
        }))?,
        Format::Csv | Format::Plot => {
            let mut s = String::from("n,exact,via_defect,lower,upper,status\n");
            for (r, d, ok) in &rows {
                let status = if r.exact.is_none() { "skipped" } else if *ok { "ok" } else { "violated" };
                s.push_str(&format!("{},{},{},{},{},{}\n", r.n, opt(r.exact), opt(*d), opt(r.lower), r.upper, status));
            }
            s
        }
    };
    emit(&text, output)?;
    for f in &failures {
        eprintln!("violation: {f}");
    }
    if !failures.is_empty() {
        bail!("{} certified bound(s) violated", failures.len());
    }
    Ok(if report.has_skipped() { EXIT_PARTIAL } else { 0 })
}
