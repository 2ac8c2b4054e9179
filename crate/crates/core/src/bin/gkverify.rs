use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gkverify_core::cli::{self, ConfigOverrides, Format, SuiteConfig};

#[derive(Parser)]
#[command(name = "gkverify", version, about = "Exact verification suites for the (g,K)-modules M^±_m of O(p,q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the selected suites over one (p,q,m) or the default sweep.
    Run(RunArgs),
    /// List every named check.
    List,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Truncation degree (default 2m + 12).
    #[arg(long)]
    max_degree: Option<i64>,
    #[arg(long)]
    k_max: Option<usize>,
    #[arg(long)]
    l_max: Option<usize>,
    /// K-type bound for the p-action suite.
    #[arg(long)]
    paction_max: Option<usize>,
    /// Comma-separated: lie, weyl, casimir, module, paction, symsq, garfinkle, all.
    #[arg(long)]
    suite: Option<String>,
    #[arg(long, value_parser = parse_format)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// key=value file mirroring the flags; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: gkverify_core::Error| e.to_string())
}

fn run(args: RunArgs) -> gkverify_core::Result<i32> {
    let file = match &args.config {
        Some(path) => ConfigOverrides::from_file(path)?,
        None => ConfigOverrides::default(),
    };
    let flags = ConfigOverrides {
        p: args.p,
        q: args.q,
        m: args.m,
        max_degree: args.max_degree,
        k_max: args.k_max,
        l_max: args.l_max,
        paction_max: args.paction_max,
        suite: args.suite,
        format: args.format,
        out: args.out,
    };
    let config = SuiteConfig::resolve(flags.over(file))?;
    let report = cli::run_and_write(&config)?;
    if config.out.is_none() {
        print!("{}", report.render());
    } else {
        let s = &report.summary;
        eprintln!("{} checks: {} passed, {} failed, {} errors", s.total, s.passed, s.failed, s.errors);
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::List => {
            for c in cli::list_checks() {
                println!("{:<28} {:<10} {}", c.name, c.suite, c.anchor);
            }
            ExitCode::SUCCESS
        }
        Command::Run(args) => match run(args) {
            Ok(code) => ExitCode::from(code as u8),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
    }
}
