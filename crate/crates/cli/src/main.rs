use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use klein_cli::{registry_json, run, Format, Suite, SuiteConfig};

/// Verify invariant-theory claims for the Klein four group in characteristic 2.
#[derive(Parser, Debug)]
#[command(name = "klein", version)]
struct Args {
    /// Representation selector: Vm:<m>:lambda=<s>[:k=<k>], Omega-:<m>, Omega+:<m> or Vreg.
    #[arg(long)]
    rep: String,
    /// leadterms, identities, hsop, hilbert, noether, sagbi, transfer, lemmas or all.
    #[arg(long, default_value = "all")]
    suite: Suite,
    /// Largest degree examined by the linear-algebra checks.
    #[arg(long, default_value_t = 12)]
    degree_bound: u32,
    /// Lambda for a Vm selector, e.g. `l`, `t`, `0`.
    #[arg(long)]
    lambda: Option<String>,
    /// Sweep limit for divide-by-x.
    #[arg(long, default_value_t = 8)]
    budget: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: Format,
    /// Print the registry of named invariants as JSON and exit.
    #[arg(long)]
    registry: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let threads = std::env::var("KLEIN_THREADS").ok().and_then(|v| v.parse().ok());
    let config = SuiteConfig {
        rep: args.rep,
        suite: args.suite,
        degree_bound: args.degree_bound,
        lambda: args.lambda,
        budget: args.budget,
        out: args.out,
        format: args.format,
        threads,
    };
    if args.registry {
        return match config.representation().and_then(|r| registry_json(&r)) {
            Ok(s) => {
                println!("{s}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("klein: {e}");
                ExitCode::from(2)
            }
        };
    }
    match run(&config) {
        Ok(report) => {
            if config.out.is_none() {
                print!("{}", report.render());
                if config.format == Format::Json {
                    println!();
                }
            }
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("klein: {e}");
            ExitCode::from(2)
        }
    }
}
