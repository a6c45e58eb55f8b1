use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use lapint::cache::{cache_load, cache_store, merge_records, now};
use lapint::enumerate::MAX_ENUMERATION_ORDER;
use lapint::graph6::encode_graph6;
use lapint::realizer::{Realizer, Verdict};
use lapint::spectra::integer_spectrum;
use lapint::tables::check_tables;
use lapint::verify::{run_suite, Suite};
use lapint::{ConstructionExpr, Graph, SetDescriptor};

mod input;

use input::Input;

const EXIT_NOT_REALIZABLE: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;

#[derive(Parser)]
#[command(name = "lapint", version, about = "Laplacian integral graphs with one doubled eigenvalue")]
struct Cli {
    /// Realizer cache file.
    #[arg(long, global = true, env = "REALIZER_CACHE")]
    cache: Option<PathBuf>,
    /// Do not read or write the realizer cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Subcommand)]
enum Command {
    /// Exact Laplacian spectrum of a graph6 string, certificate or descriptor.
    Spectrum { input: String },
    /// Decide a descriptor and print a verified certificate when one exists.
    Realize {
        descriptor: String,
        /// Largest order resolved by exhaustive search.
        #[arg(long, default_value_t = 9)]
        budget: usize,
    },
    /// Regenerate the small-order realizer tables and diff them against the golden files.
    Tables,
    /// Run verification suites.
    Verify {
        /// One suite; all suites when omitted.
        #[arg(long)]
        suite: Option<Suite>,
        #[arg(long, default_value_t = 8)]
        max_n: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Spectrum { input } => spectrum(cli, input),
        Command::Realize { descriptor, budget } => realize(cli, descriptor, *budget),
        Command::Tables => tables(),
        Command::Verify { suite, max_n } => verify(cli, *suite, *max_n),
    }
}

fn default_cache_path() -> Option<PathBuf> {
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache/lapint/realizer.tsv"))
}

fn cache_path(cli: &Cli) -> Option<PathBuf> {
    if cli.no_cache {
        None
    } else {
        cli.cache.clone().or_else(default_cache_path)
    }
}

fn spectrum(cli: &Cli, text: &str) -> Result<u8> {
    let (label, graph) = match text.parse::<Input>()? {
        Input::Descriptor(d) => {
            emit(cli, &[&d.to_string(), "descriptor", &d.expand().to_string()]);
            return Ok(0);
        }
        Input::Graph6(g) => (encode_graph6(&g), g),
        Input::Certificate(e) => (e.to_string(), evaluate(&e, &Realizer::default())?),
    };
    match integer_spectrum(&graph) {
        Ok(s) => {
            emit(cli, &[&label, "integral", &s.to_string()]);
            Ok(0)
        }
        Err(e) => {
            emit(cli, &[&label, "not-integral", &e.to_string()]);
            Ok(EXIT_NOT_REALIZABLE)
        }
    }
}

/// Evaluates `e`, resolving oracle leaves by search.
fn evaluate(e: &ConstructionExpr, realizer: &Realizer) -> Result<Graph> {
    e.evaluate_with(&mut |d| realizer.resolve_oracle(d).ok().flatten())
        .with_context(|| format!("cannot evaluate {e}"))
}

fn emit(cli: &Cli, fields: &[&str]) {
    match cli.format {
        Format::Records => println!("{}", fields.join("\t")),
        Format::Text => println!("{}: {}", fields[0], fields[fields.len() - 1]),
    }
}

fn realize(cli: &Cli, text: &str, budget: usize) -> Result<u8> {
    if budget > MAX_ENUMERATION_ORDER {
        bail!("budget {budget} exceeds the largest searchable order {MAX_ENUMERATION_ORDER}");
    }
    let d: SetDescriptor = text.parse().with_context(|| format!("cannot parse descriptor {text:?}"))?;
    let path = cache_path(cli);
    let loaded = match &path {
        Some(p) => cache_load(p).with_context(|| format!("cannot read cache {}", p.display()))?,
        None => Default::default(),
    };
    for q in &loaded.quarantined {
        eprintln!("cache line {} quarantined: {}", q.line, q.reason);
    }
    let realizer = Realizer::new(budget).with_cache(loaded.to_oracle_cache());
    let verdict = realizer.decide(&d);
    if let Some(p) = &path {
        let snapshot = realizer.cache();
        let merged = merge_records(&loaded.records, &snapshot, now());
        if merged != loaded.records || !loaded.quarantined.is_empty() {
            cache_store(p, &merged).with_context(|| format!("cannot write cache {}", p.display()))?;
        }
    }
    print_verdict(cli, &d, &verdict);
    Ok(match verdict {
        Verdict::Realizable(_) => 0,
        Verdict::NotRealizable(_) => EXIT_NOT_REALIZABLE,
        Verdict::Unknown { .. } => EXIT_UNKNOWN,
    })
}

fn print_verdict(cli: &Cli, d: &SetDescriptor, v: &Verdict) {
    match (cli.format, v) {
        (Format::Records, Verdict::Realizable(c)) => {
            println!("{d}\trealizable\t{}\t{}\t{}", c.expr, encode_graph6(&c.graph), c.spectrum)
        }
        (Format::Records, Verdict::NotRealizable(r)) => println!("{d}\tnot-realizable\t{r}"),
        (Format::Records, Verdict::Unknown { tag, searched_to }) => {
            let s = searched_to.map(|b| b.to_string()).unwrap_or_else(|| "-".into());
            println!("{d}\tunknown\t{tag}\t{s}")
        }
        (Format::Text, Verdict::Realizable(c)) => {
            println!("{d}: realizable");
            println!("certificate {}", c.expr);
            println!("graph6 {}", encode_graph6(&c.graph));
            println!("spectrum {}", c.spectrum);
            for a in &c.alternates {
                println!("alternate {a}");
            }
            for n in &c.notes {
                println!("note {n}");
            }
        }
        (Format::Text, v) => println!("{d}: {v}"),
    }
}

fn tables() -> Result<u8> {
    let mut code = 0;
    for t in check_tables()? {
        print!("{}", t.rendered);
        if !t.diff.is_empty() {
            eprintln!("{} differs from its golden file:", t.name);
            for line in &t.diff {
                eprintln!("{line}");
            }
            code = 1;
        }
    }
    Ok(code)
}

fn verify(cli: &Cli, suite: Option<Suite>, max_n: usize) -> Result<u8> {
    if max_n > MAX_ENUMERATION_ORDER {
        bail!("--max-n {max_n} exceeds the largest searchable order {MAX_ENUMERATION_ORDER}");
    }
    let realizer = Realizer::new(max_n);
    let suites = suite.map(|s| vec![s]).unwrap_or_else(|| Suite::ALL.to_vec());
    let mut code = 0;
    for s in suites {
        let report = run_suite(s, max_n, &realizer)?;
        match cli.format {
            Format::Text => print!("{report}"),
            Format::Records => print!("{}", report.to_records()),
        }
        if !report.passed() {
            code = 1;
        }
    }
    Ok(code)
}
