use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use graph_qsm_cli::{execute, Beta, Command, RunConfig};

/// Invariants and verification suites for boundary systems of finite graphs.
#[derive(Parser)]
#[command(name = "graph-qsm", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand)]
enum Cmd {
    /// Fingerprint, K-theory, critical exponent and zeta of one graph.
    Invariants { file: PathBuf },
    /// Oracle verdict, fingerprint diff, isomorphism and boundary conjugacy.
    Compare { a: PathBuf, b: PathBuf },
    /// Conformality of the boundary measure and partition masses.
    VerifyConformal { file: PathBuf },
    /// KMS condition on seeded random pairs.
    VerifyKms { file: PathBuf },
    /// Pairwise comparison over enumerated graphs.
    Survey,
    /// Both determinant forms of the reciprocal zeta function.
    Zeta { file: PathBuf },
}

#[derive(Args)]
struct Opts {
    #[arg(long, global = true, default_value_t = 6)]
    depth: usize,
    #[arg(long, global = true, default_value_t = 4)]
    wordlen: usize,
    /// Length bound of the length spectrum.
    #[arg(long = "spectrum", global = true, default_value_t = 5)]
    spectrum_length: usize,
    #[arg(long, global = true, default_value_t = 100)]
    trials: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Inverse temperature, or `auto` for the critical exponent.
    #[arg(long, global = true, default_value = "auto", value_parser = parse_beta)]
    beta: Beta,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 3)]
    max_vertices: usize,
    #[arg(long, global = true, default_value_t = 6)]
    max_edges: usize,
}

fn parse_beta(s: &str) -> Result<Beta, String> {
    s.parse()
        .map_err(|e: graph_qsm_cli::CliError| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (command, inputs) = match cli.command {
        Cmd::Invariants { file } => (Command::Invariants, vec![file]),
        Cmd::Compare { a, b } => (Command::Compare, vec![a, b]),
        Cmd::VerifyConformal { file } => (Command::VerifyConformal, vec![file]),
        Cmd::VerifyKms { file } => (Command::VerifyKms, vec![file]),
        Cmd::Survey => (Command::Survey, vec![]),
        Cmd::Zeta { file } => (Command::Zeta, vec![file]),
    };
    let o = cli.opts;
    let config = RunConfig {
        command,
        inputs,
        depth: o.depth,
        wordlen: o.wordlen,
        spectrum_length: o.spectrum_length,
        trials: o.trials,
        seed: o.seed,
        beta: o.beta,
        out: o.out,
        max_vertices: o.max_vertices,
        max_edges: o.max_edges,
    };
    ExitCode::from(execute(&config) as u8)
}
