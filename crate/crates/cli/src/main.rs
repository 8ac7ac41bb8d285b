use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

mod commands;

use commands::Options;

/// Exact intersection numbers on compactified spaces of morphisms from
/// curves to smooth projective toric varieties.
#[derive(Parser)]
#[command(name = "toricmor", version)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Validate the fan and report its canonical data.
    Validate(Input),
    /// List the primitive collections of the fan.
    PrimitiveCollections(Input),
    /// Complete the degrees and report ranks and dimensions.
    DegreeData(Input),
    /// Euler characteristic of the toric fibre.
    ChiY(Input),
    /// Push a monomial in the tautological classes down to the Jacobians.
    Pushforward(Input),
    /// Integrate a top-degree monomial over the morphism space.
    Integrate(Input),
    /// Evaluate the vanishing criterion for `ray_subset` and `exponents`.
    CheckVanishing(Input),
    /// Run the invariant suite on the built-in fans.
    Selftest {
        #[arg(long, default_value_t = toricmor::selftest::SEED)]
        seed: u64,
    },
}

#[derive(Args)]
struct Input {
    /// Problem document (JSON); read from standard input when omitted.
    path: Option<PathBuf>,
    /// Localization direction `v1,...,vn` in the basis of the distinguished cone.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    direction: Option<Vec<i64>>,
    /// Include intermediate classes and per-fixed-point terms.
    #[arg(long)]
    verbose: bool,
}

impl Input {
    fn read(&self) -> anyhow::Result<String> {
        match &self.path {
            Some(p) => std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
            None => {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).context("reading standard input")?;
                Ok(s)
            }
        }
    }

    fn options(&self) -> Options {
        Options {
            direction: self.direction.clone(),
            verbose: self.verbose,
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<(serde_json::Value, bool)> {
    let (verb, input) = match &cli.verb {
        Verb::Selftest { seed } => {
            let report = toricmor::selftest::run(*seed);
            let ok = report.passed;
            return Ok((serde_json::to_value(report)?, ok));
        }
        Verb::Validate(i) => ("validate", i),
        Verb::PrimitiveCollections(i) => ("primitive-collections", i),
        Verb::DegreeData(i) => ("degree-data", i),
        Verb::ChiY(i) => ("chi-y", i),
        Verb::Pushforward(i) => ("pushforward", i),
        Verb::Integrate(i) => ("integrate", i),
        Verb::CheckVanishing(i) => ("check-vanishing", i),
    };
    let doc = toricmor::document::ProblemDocument::parse(&input.read()?)?;
    Ok((commands::execute(verb, &doc, &input.options())?, true))
}

/// The error chain, skipping causes already spelled out by their parent.
fn diagnostic(e: &anyhow::Error) -> String {
    let mut out = String::new();
    for cause in e.chain() {
        let text = cause.to_string();
        if !out.contains(&text) {
            if !out.is_empty() {
                out.push_str(": ");
            }
            out.push_str(&text);
        }
    }
    out
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((report, ok)) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable report"));
            if ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: selftest: at least one check failed");
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {}", diagnostic(&e));
            ExitCode::FAILURE
        }
    }
}
