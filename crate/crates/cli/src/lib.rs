//! Command dispatch and JSON reports for the `graph-qsm` binary.
//!
//! Every command is a pure function of its [`RunConfig`] and input files, so
//! repeated runs produce byte-identical reports.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use graph_qsm::boundary_measure::{ConformalitySweep, PSMeasure};
use graph_qsm::classify::{
    build_conjugacy, fingerprint, survey, EquivarianceReport, Fingerprint, FingerprintDiff, Pairing,
};
use graph_qsm::covering_tree::CoveringTree;
use graph_qsm::ktheory::{theorem1_oracle, Theorem1Report};
use graph_qsm::multigraph::{isomorphic, Multigraph, MAX_ENUM_EDGES, MAX_ENUM_VERTICES};
use graph_qsm::nonbacktracking::{bass_hashimoto, ihara_zeta_vertex_form, zeta_edge_form, Poly};
use graph_qsm::qsm::{QsmSystem, DEFAULT_WORD_BOUND};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

/// Conformality residual tolerance.
pub const CONFORMAL_TOLERANCE: f64 = 1e-10;
/// Tolerance on the total mass of a partition.
pub const MASS_TOLERANCE: f64 = 1e-12;
/// Partition depths whose masses are checked.
pub const MASS_DEPTH: usize = 8;
/// KMS residual tolerance at the critical exponent.
pub const KMS_TOLERANCE: f64 = 1e-9;
/// Minimum residual expected from the generator pair off the critical exponent.
pub const KMS_SEPARATION: f64 = 1e-3;
/// Offsets from the critical exponent probed by `verify-kms`.
pub const KMS_SHIFTS: [f64; 4] = [-0.5, -0.1, 0.1, 0.5];
/// Largest cylinder depth accepted by the verification commands.
pub const MAX_DEPTH: usize = 8;
/// Largest spectrum length accepted.
pub const MAX_SPECTRUM_LENGTH: usize = graph_qsm::classify::MAX_SPECTRUM_LENGTH;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Invariants,
    Compare,
    VerifyConformal,
    VerifyKms,
    Survey,
    Zeta,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Invariants => "invariants",
            Command::Compare => "compare",
            Command::VerifyConformal => "verify-conformal",
            Command::VerifyKms => "verify-kms",
            Command::Survey => "survey",
            Command::Zeta => "zeta",
        }
    }

    fn arity(self) -> usize {
        match self {
            Command::Survey => 0,
            Command::Compare => 2,
            _ => 1,
        }
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        [
            Command::Invariants,
            Command::Compare,
            Command::VerifyConformal,
            Command::VerifyKms,
            Command::Survey,
            Command::Zeta,
        ]
        .into_iter()
        .find(|c| c.name() == s)
        .ok_or_else(|| CliError::Usage(format!("unknown command `{s}`")))
    }
}

/// Inverse temperature used by `verify-kms`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Beta {
    /// The critical exponent of each input graph.
    #[default]
    Auto,
    Value(f64),
}

impl FromStr for Beta {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        if s == "auto" {
            return Ok(Beta::Auto);
        }
        match s.parse::<f64>() {
            Ok(b) if b.is_finite() => Ok(Beta::Value(b)),
            _ => Err(CliError::Usage(format!("invalid beta `{s}`"))),
        }
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Beta::Auto => f.write_str("auto"),
            Beta::Value(b) => write!(f, "{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub inputs: Vec<PathBuf>,
    pub depth: usize,
    pub wordlen: usize,
    pub spectrum_length: usize,
    pub trials: usize,
    pub seed: u64,
    pub beta: Beta,
    /// Report destination; standard output when absent.
    pub out: Option<PathBuf>,
    pub max_vertices: usize,
    pub max_edges: usize,
}

impl RunConfig {
    pub fn new(command: Command, inputs: Vec<PathBuf>) -> Self {
        RunConfig {
            command,
            inputs,
            depth: 6,
            wordlen: 4,
            spectrum_length: 5,
            trials: 100,
            seed: 0,
            beta: Beta::Auto,
            out: None,
            max_vertices: 3,
            max_edges: 6,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let arity = self.command.arity();
        if self.inputs.len() != arity {
            return Err(CliError::Usage(format!(
                "`{}` takes {arity} input file(s), got {}",
                self.command.name(),
                self.inputs.len()
            )));
        }
        if self.depth == 0 || self.depth > MAX_DEPTH {
            return Err(CliError::Usage(format!("depth must be in 1..={MAX_DEPTH}")));
        }
        if self.wordlen > DEFAULT_WORD_BOUND {
            return Err(CliError::Usage(format!(
                "wordlen must be at most {DEFAULT_WORD_BOUND}"
            )));
        }
        if self.spectrum_length == 0 || self.spectrum_length > MAX_SPECTRUM_LENGTH {
            return Err(CliError::Usage(format!(
                "spectrum length must be in 1..={MAX_SPECTRUM_LENGTH}"
            )));
        }
        if self.max_vertices > MAX_ENUM_VERTICES || self.max_edges > MAX_ENUM_EDGES {
            return Err(CliError::Usage(format!(
                "survey bounds must be at most {MAX_ENUM_VERTICES} vertices and {MAX_ENUM_EDGES} edges"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Graph {
        path: PathBuf,
        source: graph_qsm::Error,
    },
    #[error(transparent)]
    Core(#[from] graph_qsm::Error),
    #[error("writing report: {0}")]
    Write(std::io::Error),
}

/// Result of a run: exit code, JSON report and a one-line summary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub report: Option<String>,
    pub summary: String,
}

pub fn run(config: &RunConfig) -> RunOutcome {
    match dispatch(config) {
        Ok((passed, report, summary)) => RunOutcome {
            exit_code: if passed { 0 } else { 1 },
            report: Some(report),
            summary,
        },
        Err(e) => RunOutcome {
            exit_code: 2,
            report: None,
            summary: format!("error: {e}"),
        },
    }
}

/// Runs, writes the report and the summary, and returns the exit code.
pub fn execute(config: &RunConfig) -> i32 {
    let outcome = run(config);
    eprintln!("{}", outcome.summary);
    if let Some(report) = &outcome.report {
        let written = match &config.out {
            Some(path) => std::fs::write(path, format!("{report}\n")),
            None => writeln!(std::io::stdout().lock(), "{report}"),
        };
        if let Err(e) = written.and_then(|()| std::io::stdout().flush()) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                return outcome.exit_code;
            }
            eprintln!("error: {}", CliError::Write(e));
            return 2;
        }
    }
    outcome.exit_code
}

type Dispatched = (bool, String, String);

fn dispatch(config: &RunConfig) -> Result<Dispatched, CliError> {
    config.validate()?;
    match config.command {
        Command::Invariants => invariants(config),
        Command::Compare => compare(config),
        Command::VerifyConformal => verify_conformal(config),
        Command::VerifyKms => verify_kms(config),
        Command::Survey => run_survey(config),
        Command::Zeta => zeta(config),
    }
}

fn load(path: &Path) -> Result<Multigraph, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let g = Multigraph::parse(&text).map_err(|source| CliError::Graph {
        path: path.to_path_buf(),
        source,
    })?;
    g.require_admissible().map_err(|source| CliError::Graph {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(g)
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

#[derive(Serialize)]
struct InvariantsReport {
    command: &'static str,
    graph: String,
    vertices: usize,
    edges: usize,
    delta: f64,
    fingerprint: Fingerprint,
}

fn invariants(config: &RunConfig) -> Result<Dispatched, CliError> {
    let path = &config.inputs[0];
    let g = load(path)?;
    let fp = fingerprint(&g, config.spectrum_length)?;
    let torsion = if fp.k0.unit_class_order == 1.into() {
        String::new()
    } else {
        format!(" + Z/{}", fp.k0.unit_class_order)
    };
    let summary = format!(
        "{}: g = {}, K0 = Z^{}{torsion}, lambda = {:.12}",
        display(path),
        fp.g.get(),
        fp.k0.group.free_rank,
        fp.lambda
    );
    let report = InvariantsReport {
        command: "invariants",
        graph: display(path),
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        delta: fp.lambda.ln(),
        fingerprint: fp,
    };
    Ok((true, to_json(&report), summary))
}

#[derive(Serialize)]
struct ZetaReport {
    command: &'static str,
    graph: String,
    /// `det(I - uT)`, lowest degree first.
    edge_form: Poly,
    /// `(1 - u²)^{|E|-|V|} det(I - uA + u²(D - I))`.
    vertex_form: Poly,
    agree: bool,
}

fn zeta(config: &RunConfig) -> Result<Dispatched, CliError> {
    let path = &config.inputs[0];
    let g = load(path)?;
    let edge_form = zeta_edge_form(&bass_hashimoto(&g)?);
    let vertex_form = ihara_zeta_vertex_form(&g);
    let agree = edge_form == vertex_form;
    let summary = format!(
        "{}: zeta reciprocal of degree {}, forms {}",
        display(path),
        edge_form.degree().unwrap_or(0),
        if agree { "agree" } else { "DISAGREE" }
    );
    let report = ZetaReport {
        command: "zeta",
        graph: display(path),
        edge_form,
        vertex_form,
        agree,
    };
    Ok((agree, to_json(&report), summary))
}

#[derive(Serialize)]
struct ConjugacySummary {
    pairing: Pairing,
    report: EquivarianceReport,
}

#[derive(Serialize)]
struct CompareReport {
    command: &'static str,
    graph_a: String,
    graph_b: String,
    theorem1: Theorem1Report,
    isomorphic: bool,
    diff: FingerprintDiff,
    fingerprint_a: Fingerprint,
    fingerprint_b: Fingerprint,
    conjugacy: Option<ConjugacySummary>,
}

fn compare(config: &RunConfig) -> Result<Dispatched, CliError> {
    let (pa, pb) = (&config.inputs[0], &config.inputs[1]);
    let (a, b) = (load(pa)?, load(pb)?);
    let theorem1 = theorem1_oracle(&a, &b)?;
    let fa = fingerprint(&a, config.spectrum_length)?;
    let fb = fingerprint(&b, config.spectrum_length)?;
    let iso = isomorphic(&a, &b)?.is_some();
    let conjugacy = if theorem1.verdict {
        let pairing = Pairing::identity(theorem1.g_x);
        let c = build_conjugacy(&a, &b, &pairing, config.depth)?;
        Some(ConjugacySummary {
            pairing,
            report: c.report,
        })
    } else {
        None
    };
    let passed = conjugacy.as_ref().is_none_or(|c| c.report.passed());
    let summary = format!(
        "{} vs {}: theorem1 {}, isomorphic {}, fingerprints {}{}",
        display(pa),
        display(pb),
        theorem1.verdict,
        iso,
        if fa.matches(&fb) { "equal" } else { "differ" },
        match &conjugacy {
            Some(c) => format!(", conjugacy violations {}", c.report.violations),
            None => String::new(),
        }
    );
    let report = CompareReport {
        command: "compare",
        graph_a: display(pa),
        graph_b: display(pb),
        theorem1,
        isomorphic: iso,
        diff: fa.diff(&fb),
        fingerprint_a: fa,
        fingerprint_b: fb,
        conjugacy,
    };
    Ok((passed, to_json(&report), summary))
}

#[derive(Serialize)]
struct MassRecord {
    depth: usize,
    total: f64,
    error: f64,
}

#[derive(Serialize)]
struct ConformalReport {
    command: &'static str,
    graph: String,
    lambda: f64,
    delta: f64,
    wordlen: usize,
    depth: usize,
    tolerance: f64,
    conformality: ConformalitySweep,
    mass_tolerance: f64,
    masses: Vec<MassRecord>,
    passed: bool,
}

fn verify_conformal(config: &RunConfig) -> Result<Dispatched, CliError> {
    let path = &config.inputs[0];
    let g = load(path)?;
    let tree = CoveringTree::new(&g)?;
    let mu = PSMeasure::new(&tree)?;
    let words = tree.words_up_to(config.wordlen);
    let sweep = mu.conformality_sweep(&words, config.depth);
    let masses = (1..=MASS_DEPTH)
        .map(|k| {
            let total = mu.partition_mass(k)?;
            Ok(MassRecord {
                depth: k,
                total,
                error: (total - 1.0).abs(),
            })
        })
        .collect::<Result<Vec<_>, graph_qsm::Error>>()?;
    let passed = sweep.max_residual <= CONFORMAL_TOLERANCE
        && masses.iter().all(|m| m.error <= MASS_TOLERANCE);
    let summary = format!(
        "{}: {} conformality checks, max residual {:.3e}, {}",
        display(path),
        sweep.checked,
        sweep.max_residual,
        if passed { "PASS" } else { "FAIL" }
    );
    let report = ConformalReport {
        command: "verify-conformal",
        graph: display(path),
        lambda: mu.lambda(),
        delta: mu.delta(),
        wordlen: config.wordlen,
        depth: config.depth,
        tolerance: CONFORMAL_TOLERANCE,
        conformality: sweep,
        mass_tolerance: MASS_TOLERANCE,
        masses,
        passed,
    };
    Ok((passed, to_json(&report), summary))
}

#[derive(Serialize)]
struct ShiftRecord {
    beta: f64,
    residual: f64,
    separated: bool,
}

#[derive(Serialize)]
struct KmsReport {
    command: &'static str,
    graph: String,
    delta: f64,
    beta: f64,
    seed: u64,
    trials: usize,
    /// Random elements use words of length at most this.
    element_wordlen: usize,
    tolerance: f64,
    max_residual: f64,
    worst_trial: Option<usize>,
    /// Residual of `(μ_{γ₁}, μ_{γ₁⁻¹})` at `beta`.
    witness_residual: f64,
    separation_threshold: f64,
    /// The same pair at exponents near the critical one.
    separation: Vec<ShiftRecord>,
    passed: bool,
}

fn verify_kms(config: &RunConfig) -> Result<Dispatched, CliError> {
    let path = &config.inputs[0];
    let g = load(path)?;
    let tree = CoveringTree::new(&g)?;
    let sys = QsmSystem::new(PSMeasure::new(&tree)?);
    let delta = sys.delta();
    let beta = match config.beta {
        Beta::Auto => delta,
        Beta::Value(b) => b,
    };
    // Products must stay within the word bound.
    let element_wordlen = config.wordlen / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut max_residual = 0.0f64;
    let mut worst_trial = None;
    for trial in 0..config.trials {
        let a = sys.random_element(&mut rng, element_wordlen, false)?;
        let b = sys.random_element(&mut rng, element_wordlen, false)?;
        let r = sys.kms_residual(&a, &b, beta)?;
        if worst_trial.is_none() || r > max_residual {
            max_residual = r;
            worst_trial = Some(trial);
        }
    }
    let a = sys.group_element(&[1])?;
    let b = sys.group_element(&[-1])?;
    let witness_residual = sys.kms_residual(&a, &b, beta)?;
    let separation = KMS_SHIFTS
        .iter()
        .map(|&s| {
            let residual = sys.kms_residual(&a, &b, delta + s)?;
            Ok(ShiftRecord {
                beta: delta + s,
                residual,
                separated: residual > KMS_SEPARATION,
            })
        })
        .collect::<Result<Vec<_>, graph_qsm::Error>>()?;
    let passed = max_residual <= KMS_TOLERANCE
        && witness_residual <= KMS_TOLERANCE
        && separation.iter().all(|s| s.separated);
    let summary = format!(
        "{}: beta = {beta:.12}, max KMS residual {max_residual:.3e} over {} pairs, {}",
        display(path),
        config.trials,
        if passed { "PASS" } else { "FAIL" }
    );
    let report = KmsReport {
        command: "verify-kms",
        graph: display(path),
        delta,
        beta,
        seed: config.seed,
        trials: config.trials,
        element_wordlen,
        tolerance: KMS_TOLERANCE,
        max_residual,
        worst_trial,
        witness_residual,
        separation_threshold: KMS_SEPARATION,
        separation,
        passed,
    };
    Ok((passed, to_json(&report), summary))
}

#[derive(Serialize)]
struct SurveyEnvelope {
    command: &'static str,
    passed: bool,
    #[serde(flatten)]
    report: graph_qsm::classify::SurveyReport,
}

fn run_survey(config: &RunConfig) -> Result<Dispatched, CliError> {
    let report = survey(
        config.max_vertices,
        config.max_edges,
        config.spectrum_length,
    )?;
    let passed = report.passed();
    let summary = format!(
        "survey({}, {}, {}): {} graphs, {} pairs, {} Betti classes, {} collisions",
        config.max_vertices,
        config.max_edges,
        config.spectrum_length,
        report.graphs.len(),
        report.rows.len(),
        report.betti_classes.len(),
        report.collisions.len()
    );
    let env = SurveyEnvelope {
        command: "survey",
        passed,
        report,
    };
    Ok((passed, to_json(&env), summary))
}


#[cfg(doctest)]
#[doc = include_str!("../../../book/src/command-line.md")]
mod guide {}
