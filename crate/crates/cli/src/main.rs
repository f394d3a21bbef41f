use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use catv_cli::commands::{self, Options, Outcome};
use catv_cli::dsl::Diagnostic;
use catv_cli::workspace::{load, Workspace};
use catv_core::Cap;

/// Check categories with variance, heuristic naturality and ends.
#[derive(Parser)]
#[command(name = "catv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args)]
struct Flags {
    #[arg(long, global = true)]
    variance: Vec<String>,
    #[arg(long, global = true)]
    functor: Vec<String>,
    /// repeat for fubini
    #[arg(long, global = true)]
    span: Vec<String>,
    #[arg(long, global = true)]
    trans: Option<String>,
    #[arg(long, global = true)]
    mor: Option<String>,
    /// check only the generating subgraph of a partition span
    #[arg(long, global = true)]
    generators: bool,
    /// compare with the brute-force end
    #[arg(long, global = true)]
    oracle: bool,
    #[arg(long, global = true)]
    json: bool,
    /// write a DOT digraph to this file
    #[arg(long, global = true, value_name = "FILE")]
    dot: Option<PathBuf>,
    /// size cap for materialized structures (default: $CATV_CAP or 1000000)
    #[arg(long, global = true, value_name = "N")]
    cap: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Elaborate a file and evaluate its assertions
    Check { file: PathBuf },
    /// Both factorizations of a morphism
    Factor { file: PathBuf },
    /// Heuristic naturality of a transformation
    Natural { file: PathBuf },
    /// End of a set-valued functor along a span leg
    End { file: PathBuf },
    /// Coend of a set-valued functor along a span leg
    Coend { file: PathBuf },
    /// Compare the end over a product span with the iterated end
    Fubini { file: PathBuf },
    /// Comma category of a pair of functors over a span
    Comma { file: PathBuf },
    /// Partition of arguments of an expression like "F(x,y,y) -> G(x,x,y)"
    Partition { expr: String },
    /// All variances on a category
    EnumerateVariances { file: PathBuf, category: String },
}

fn cap(flag: Option<usize>) -> Result<Cap, String> {
    if let Some(n) = flag {
        return Ok(Cap(n));
    }
    match std::env::var("CATV_CAP") {
        Ok(s) => s
            .trim()
            .parse()
            .map(Cap)
            .map_err(|_| format!("CATV_CAP must be a number, found '{s}'")),
        Err(_) => Ok(Cap::default()),
    }
}

fn report(file: Option<&Path>, d: &Diagnostic) {
    match file {
        Some(p) if d.loc.line > 0 => eprintln!("{}:{d}", p.display()),
        Some(p) => eprintln!("{}: {}", p.display(), d.message),
        None => eprintln!("error: {}", d.message),
    }
}

fn open(path: &Path, cap: Cap) -> Result<Workspace, Diagnostic> {
    let text =
        std::fs::read_to_string(path).map_err(|e| commands::usage(format!("cannot read: {e}")))?;
    load(&text, cap)
}

fn run(cli: &Cli, cap: Cap) -> Result<Outcome, (Option<&Path>, Diagnostic)> {
    let f = &cli.flags;
    let opts = Options {
        variance: f.variance.clone(),
        functor: f.functor.clone(),
        span: f.span.clone(),
        trans: f.trans.clone(),
        mor: f.mor.clone(),
        generators: f.generators,
        oracle: f.oracle,
        dot: f.dot.is_some(),
    };
    let file = match &cli.command {
        Command::Partition { expr } => return commands::partition(expr).map_err(|d| (None, d)),
        Command::Check { file }
        | Command::Factor { file }
        | Command::Natural { file }
        | Command::End { file }
        | Command::Coend { file }
        | Command::Fubini { file }
        | Command::Comma { file }
        | Command::EnumerateVariances { file, .. } => file.as_path(),
    };
    let with_file = |d| (Some(file), d);
    let ws = open(file, cap).map_err(with_file)?;
    match &cli.command {
        Command::Check { .. } => commands::check(&ws),
        Command::Factor { .. } => commands::factor(&ws, &opts),
        Command::Natural { .. } => commands::natural(&ws, &opts),
        Command::End { .. } => commands::end(&ws, &opts),
        Command::Coend { .. } => commands::coend(&ws, &opts),
        Command::Fubini { .. } => commands::fubini(&ws, &opts),
        Command::Comma { .. } => commands::comma(&ws, &opts),
        Command::EnumerateVariances { category, .. } => commands::enumerate(&ws, category),
        Command::Partition { .. } => unreachable!("handled above"),
    }
    .map_err(with_file)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cap = match cap(cli.flags.cap) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&cli, cap) {
        Ok(out) => {
            if cli.flags.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("serializable")
                );
            } else {
                print!("{}", out.text);
            }
            if let (Some(path), Some(dot)) = (&cli.flags.dot, &out.dot) {
                if let Err(e) = std::fs::write(path, dot) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else if cli.flags.dot.is_some() {
                eprintln!("note: this command has no diagram");
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err((file, d)) => {
            report(file, &d);
            ExitCode::from(2)
        }
    }
}
