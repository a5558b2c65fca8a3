//! Command line front end shared by the `ncfield` binary and the tests.
//!
//! Every command prints a JSON report (or CSV with `--format csv`) to
//! stdout and a one-line summary to stderr. Exit codes: 0 success, 1 bad
//! input, 2 inconclusive mathematics, 3 evaluation outside the domain.

mod pencil_file;

pub use pencil_file::PencilFile;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::freegroup::dual_check;
use crate::linalg;
use crate::ncpoly::{LinearPencil, NcMatrix};
use crate::ncrank::{ncrank_with, RankConfig, RankResult, ScalingConfig, ScalingStatus, SubstitutionConfig};
use crate::randmat::{
    atiyah_integrality_scan, dykema_pascoe_matrix, dykema_pascoe_model, esd, integrality_corpus,
    rank_convergence, rank_convergence_with, MatrixModel, ModelKind, TolPolicy,
};
use crate::ratexpr::{eval_numeric, infer_n_vars, parse, parse_matrix, parse_poly};
use crate::realization::{domain_check, eval_rep_with, realize, DEFAULT_DOMAIN_FACTOR};
use crate::spectra::{central_eigs_pencil_with, central_eigs_polymatrix_with, SpectraConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_OUT_OF_DOMAIN: i32 = 3;

/// Process exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoConsensus(_)
        | Error::Inconclusive { .. }
        | Error::Disagreement(_)
        | Error::UncertifiedCandidates(_)
        | Error::InvariantViolation(_)
        | Error::Numerical(_) => EXIT_INCONCLUSIVE,
        Error::OutOfDomain { .. } => EXIT_OUT_OF_DOMAIN,
        _ => EXIT_INPUT,
    }
}

#[derive(Parser, Debug)]
#[command(name = "ncfield", version, about = "Inner rank, free field realizations and spectral atoms")]
struct Cli {
    /// Worker threads (overrides NCFIELD_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
struct OutputArgs {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, Serialize)]
struct InputArgs {
    /// Linear pencil in JSON form.
    #[arg(long)]
    pencil: Option<PathBuf>,
    /// Polynomial matrix such as "x1, 0; 0, 0".
    #[arg(long)]
    matrix: Option<String>,
    /// Single polynomial, treated as a 1x1 matrix.
    #[arg(long)]
    expr: Option<String>,
    /// Number of variables (default: largest index mentioned).
    #[arg(long)]
    vars: Option<usize>,
}

#[derive(Args, Debug, Clone, Serialize)]
struct SamplingArgs {
    /// Substitution dimensions, comma separated (default N+1, 2(N+1)).
    #[arg(long, value_delimiter = ',')]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "gue")]
    kind: ModelKind,
    /// Relative singular value threshold factor.
    #[arg(long)]
    tol: Option<f64>,
}

impl SamplingArgs {
    fn rank_config(&self) -> RankConfig {
        let mut tol = TolPolicy::default();
        if let Some(f) = self.tol {
            tol.factor = f;
        }
        RankConfig {
            substitution: SubstitutionConfig {
                dims: self.dims.clone(),
                trials: self.trials,
                seed: self.seed,
                kind: self.kind,
                tol,
            },
            scaling: ScalingConfig {
                seed: self.seed,
                ..ScalingConfig::default()
            },
            skip_scaling: false,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Inner rank of a polynomial matrix, cross-checked by two engines.
    Rank {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Central eigenvalues, atom masses and entropy dimension.
    Atoms {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
        /// Certify every candidate with the cross-validated rank.
        #[arg(long)]
        certify: bool,
        /// Require the entropy dimension (fails if a candidate is unsettled).
        #[arg(long)]
        entropy: bool,
        /// Detect atoms from the spectrum even for linear input.
        #[arg(long)]
        detect: bool,
        /// Block size for spectral detection.
        #[arg(long, default_value_t = 300)]
        d: usize,
    },
    /// Evaluate a rational expression through its realization.
    Eval {
        /// Expression such as "x2*inv(x1*x2)*x1".
        expression: Option<String>,
        #[arg(long)]
        expr: Option<String>,
        #[arg(long)]
        vars: Option<usize>,
        #[arg(long, default_value_t = 50)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "gue")]
        kind: ModelKind,
        /// Multiplier on the invertibility threshold.
        #[arg(long, default_value_t = DEFAULT_DOMAIN_FACTOR)]
        tol: f64,
        /// Include the value matrix of each trial.
        #[arg(long)]
        dump: bool,
    },
    /// Print the linear representation of an expression.
    Realize {
        expression: Option<String>,
        #[arg(long)]
        expr: Option<String>,
        #[arg(long)]
        vars: Option<usize>,
    },
    /// Exact dual-system check on a ball of the free group.
    Dualcheck {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long = "R")]
        radius: usize,
    },
    /// Random matrix scans: integrality of rank/d, or convergence in d.
    Scan {
        #[arg(value_enum)]
        which: ScanKind,
        #[command(flatten)]
        input: InputArgs,
        /// Named matrix: dp (with its Y², YXY, YX²Y model), dp-formal, diag.
        #[arg(long)]
        name: Option<String>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![8, 32, 128])]
        dims: Vec<usize>,
        /// Corpus size for the integrality scan.
        #[arg(long, default_value_t = 12)]
        count: usize,
        #[arg(long, default_value_t = 60)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "gue")]
        kind: ModelKind,
    },
    /// Empirical spectral distribution of an evaluated matrix.
    Esd {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 200)]
        d: usize,
        #[arg(long, default_value_t = 40)]
        bins: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "gue")]
        kind: ModelKind,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum ScanKind {
    Integrality,
    Convergence,
}

/// Report envelope: version and resolved configuration, then the result.
#[derive(Serialize)]
struct Report<C: Serialize, R: Serialize> {
    version: &'static str,
    command: &'static str,
    config: C,
    #[serde(flatten)]
    result: R,
}

struct Rendered {
    json: serde_json::Value,
    csv: Option<String>,
    summary: String,
}

fn render<C: Serialize, R: Serialize>(command: &'static str, config: C, result: R, csv: Option<String>, summary: String) -> Result<Rendered> {
    let json = serde_json::to_value(Report {
        version: env!("CARGO_PKG_VERSION"),
        command,
        config,
        result,
    })?;
    Ok(Rendered { json, csv, summary })
}

fn read_matrix(input: &InputArgs) -> Result<NcMatrix> {
    let given = [input.pencil.is_some(), input.matrix.is_some(), input.expr.is_some()];
    if given.iter().filter(|&&g| g).count() != 1 {
        return Err(Error::InvalidArgument("give exactly one of --pencil, --matrix, --expr".into()));
    }
    if let Some(path) = &input.pencil {
        let p = PencilFile::read(path)?;
        return Ok(p.to_matrix());
    }
    let text = input.matrix.as_deref().or(input.expr.as_deref()).unwrap_or_default();
    let n = input.vars.unwrap_or_else(|| infer_n_vars(text)).max(1);
    if input.matrix.is_some() {
        parse_matrix(text, n)
    } else {
        Ok(NcMatrix::scalar(parse_poly(text, n)?))
    }
}

fn expression_text(positional: Option<String>, flag: Option<String>) -> Result<String> {
    match (positional, flag) {
        (Some(t), None) | (None, Some(t)) => Ok(t),
        _ => Err(Error::InvalidArgument("give the expression once, positionally or with --expr".into())),
    }
}

fn scaling_summary(r: &RankResult) -> &'static str {
    match r.scaling {
        ScalingStatus::Agrees { .. } => "substitution and scaling agree",
        ScalingStatus::Inconclusive { .. } => "scaling inconclusive, substitution only",
        ScalingStatus::Skipped => "scaling skipped",
    }
}

fn cmd_rank(input: &InputArgs, sampling: &SamplingArgs) -> Result<Rendered> {
    let p = read_matrix(input)?;
    let cfg = sampling.rank_config();
    let r = ncrank_with(&p, &cfg)?;
    let mut csv = String::from("d,trial,seed,rank,estimate,gap_ratio,gap_ok\n");
    for e in &r.evidence {
        let _ = writeln!(csv, "{},{},{},{},{},{:e},{}", e.d, e.trial, e.seed, e.rank, e.estimate, e.gap_ratio, e.gap_ok);
    }
    let summary = format!("rho = {} for a {}x{} matrix ({})", r.rho, r.matrix_size.0, r.matrix_size.1, scaling_summary(&r));
    #[derive(Serialize)]
    struct Out {
        full: bool,
        agreement: &'static str,
        #[serde(flatten)]
        r: RankResult,
    }
    render(
        "rank",
        serde_json::json!({ "input": input, "rank": cfg }),
        Out {
            full: r.is_full(),
            agreement: scaling_summary(&r),
            r,
        },
        Some(csv),
        summary,
    )
}

#[allow(clippy::too_many_arguments)]
fn cmd_atoms(input: &InputArgs, sampling: &SamplingArgs, certify: bool, entropy: bool, detect: bool, d: usize) -> Result<Rendered> {
    let p = read_matrix(input)?;
    let cfg = SpectraConfig {
        d,
        seed: sampling.seed,
        kind: sampling.kind,
        certify,
        rank: sampling.rank_config(),
        ..SpectraConfig::default()
    };
    let report = if p.degree() <= 1 && !detect {
        central_eigs_pencil_with(&LinearPencil::from_matrix(&p)?, &cfg)?
    } else {
        central_eigs_polymatrix_with(&p, &cfg)?
    };
    if entropy && report.entropy_dimension.is_none() {
        return Err(Error::UncertifiedCandidates(report.uncertified.len()));
    }
    let mut csv = String::from("lambda,rho,mass,certified\n");
    for a in &report.atoms {
        let _ = writeln!(csv, "{},{},{},{}", a.lambda, a.rho, a.mass, a.certified);
    }
    let mut summary = format!("{} central eigenvalue(s), {} uncertified", report.atoms.len(), report.uncertified.len());
    if let Some(dim) = report.entropy_dimension {
        let _ = write!(summary, ", entropy dimension {dim}");
    }
    render("atoms", serde_json::json!({ "input": input, "spectra": cfg }), report, Some(csv), summary)
}

#[allow(clippy::too_many_arguments)]
fn cmd_eval(text: &str, vars: Option<usize>, d: usize, trials: usize, seed: u64, kind: ModelKind, factor: f64, dump: bool) -> Result<Rendered> {
    let n = vars.unwrap_or_else(|| infer_n_vars(text)).max(1);
    let e = parse(text, n)?;
    let rep = realize(&e, n)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    #[derive(Serialize)]
    struct Trial {
        seed: u64,
        sigma_min: f64,
        sigma_max: f64,
        residual_to_identity: f64,
        /// Relative difference to evaluating the expression tree directly.
        agreement: Option<f64>,
        value: Option<Vec<Vec<(f64, f64)>>>,
    }
    let mut rows = Vec::new();
    for t in 0..trials {
        let s = seed.wrapping_add(t as u64);
        let model = MatrixModel::sample(kind, d, n, s)?;
        let dom = domain_check(&rep, &model, factor)?;
        if !dom.in_domain {
            return Err(Error::OutOfDomain {
                sigma_min: dom.sigma_min,
                threshold: dom.threshold,
            });
        }
        let value = eval_rep_with(&rep, &model, factor)?;
        let residual = linalg::max_abs(&(&value - linalg::identity(d)));
        let agreement = eval_numeric(&e, model.matrices(), d)
            .ok()
            .map(|direct| linalg::max_abs(&(&value - &direct)) / linalg::max_abs(&direct).max(1.0));
        rows.push(Trial {
            seed: s,
            sigma_min: dom.sigma_min,
            sigma_max: dom.sigma_max,
            residual_to_identity: residual,
            agreement,
            value: dump.then(|| (0..d).map(|i| (0..d).map(|j| (value[(i, j)].re, value[(i, j)].im)).collect()).collect()),
        });
    }
    let mut csv = String::from("seed,sigma_min,sigma_max,residual_to_identity,agreement\n");
    for r in &rows {
        let agreement = r.agreement.map(|a| format!("{a:e}")).unwrap_or_default();
        let _ = writeln!(csv, "{},{:e},{:e},{:e},{agreement}", r.seed, r.sigma_min, r.sigma_max, r.residual_to_identity);
    }
    let worst = rows.iter().map(|r| r.residual_to_identity).fold(0.0, f64::max);
    #[derive(Serialize)]
    struct Out {
        expression: String,
        realization_size: usize,
        max_residual_to_identity: f64,
        trials: Vec<Trial>,
    }
    #[derive(Serialize)]
    struct Config {
        vars: usize,
        d: usize,
        trials: usize,
        seed: u64,
        kind: ModelKind,
        domain_factor: f64,
    }
    render(
        "eval",
        Config {
            vars: n,
            d,
            trials,
            seed,
            kind,
            domain_factor: factor,
        },
        Out {
            expression: e.to_string(),
            realization_size: rep.dim(),
            max_residual_to_identity: worst,
            trials: rows,
        },
        Some(csv),
        format!("{trials} trial(s) at d = {d}, realization size {}, max |r(X) - 1| = {worst:.3e}", rep.dim()),
    )
}

fn cmd_realize(text: &str, vars: Option<usize>) -> Result<Rendered> {
    let n = vars.unwrap_or_else(|| infer_n_vars(text)).max(1);
    let e = parse(text, n)?;
    let rep = realize(&e, n)?;
    let summary = format!("realization of size {}", rep.dim());
    #[derive(Serialize)]
    struct Out {
        expression: String,
        representation: crate::realization::LinearRepresentation,
    }
    render(
        "realize",
        serde_json::json!({ "vars": n }),
        Out {
            expression: e.to_string(),
            representation: rep,
        },
        None,
        summary,
    )
}

fn cmd_dualcheck(n: usize, radius: usize) -> Result<Rendered> {
    let r = dual_check(n, radius)?;
    let mut csv = String::from("i,j,defect,pass\n");
    for p in &r.pairs {
        let _ = writeln!(csv, "{},{},{},{}", p.i, p.j, p.defect, p.pass);
    }
    let summary = format!(
        "n = {n}, R = {radius}: {} interior vectors, {} pair(s), all pass: {}",
        r.interior_count,
        r.pairs.len(),
        r.all_pass
    );
    render("dualcheck", serde_json::json!({ "n": n, "R": radius }), r, Some(csv), summary)
}

#[allow(clippy::too_many_arguments)]
fn cmd_scan(which: ScanKind, input: &InputArgs, name: Option<&str>, dims: &[usize], count: usize, d: usize, seed: u64, kind: ModelKind) -> Result<Rendered> {
    #[derive(Serialize)]
    struct Config<'a> {
        which: ScanKind,
        name: Option<&'a str>,
        dims: &'a [usize],
        count: usize,
        d: usize,
        seed: u64,
        kind: ModelKind,
    }
    let config = Config {
        which,
        name,
        dims,
        count,
        d,
        seed,
        kind,
    };
    match which {
        ScanKind::Integrality => {
            let corpus = if input.pencil.is_some() || input.matrix.is_some() || input.expr.is_some() {
                vec![read_matrix(input)?]
            } else {
                integrality_corpus(count, input.vars.unwrap_or(3), seed)
            };
            let r = atiyah_integrality_scan(&corpus, d, seed, kind)?;
            let mut csv = String::from("index,size,rank,rank_over_d,nearest,distance,flagged\n");
            for e in &r.entries {
                let _ = writeln!(csv, "{},{},{},{},{},{},{}", e.index, e.size, e.rank, e.rank_over_d, e.nearest, e.distance, e.flagged);
            }
            let summary = format!("{} matrices at d = {d}, {} flagged", r.entries.len(), r.flagged);
            render("scan", config, r, Some(csv), summary)
        }
        ScanKind::Convergence => {
            let (p, rows) = match name {
                Some("dp") => {
                    let p = dykema_pascoe_matrix();
                    let rows = rank_convergence_with(&p, dims, seed, dykema_pascoe_model)?;
                    (p, rows)
                }
                Some(other) => {
                    let p = match other {
                        "dp-formal" => dykema_pascoe_matrix(),
                        "diag" => parse_matrix("x1, 0; 0, 0", 1)?,
                        _ => return Err(Error::InvalidArgument(format!("unknown matrix name `{other}` (dp, dp-formal, diag)"))),
                    };
                    let rows = rank_convergence(&p, dims, seed, kind)?;
                    (p, rows)
                }
                None => {
                    let p = read_matrix(input)?;
                    let rows = rank_convergence(&p, dims, seed, kind)?;
                    (p, rows)
                }
            };
            let mut csv = String::from("d,rank,rank_over_d,gap_ok\n");
            for r in &rows {
                let _ = writeln!(csv, "{},{},{},{}", r.d, r.rank, r.rank_over_d, r.gap_ok);
            }
            let summary = rows
                .iter()
                .map(|r| format!("d={}: {:.4}", r.d, r.rank_over_d))
                .collect::<Vec<_>>()
                .join(", ");
            #[derive(Serialize)]
            struct Out {
                matrix: String,
                rows: Vec<crate::randmat::ConvergenceRow>,
            }
            render("scan", config, Out { matrix: p.to_string(), rows }, Some(csv), summary)
        }
    }
}

fn cmd_esd(input: &InputArgs, d: usize, bins: usize, seed: u64, kind: ModelKind) -> Result<Rendered> {
    let p = read_matrix(input)?;
    if !p.is_square() {
        return Err(Error::NotSquare {
            rows: p.nrows(),
            cols: p.ncols(),
        });
    }
    let model = MatrixModel::sample(kind, d, p.n_vars(), seed)?;
    let e = esd(&p, &model, bins)?;
    let ks = (e.hermitian && p.nrows() == 1).then(|| e.kolmogorov_to_semicircle());
    let summary = format!(
        "{} eigenvalues ({}){}",
        e.eigenvalues.len(),
        if e.hermitian { "real" } else { "complex" },
        ks.map(|k| format!(", Kolmogorov distance to the semicircle {k:.4}")).unwrap_or_default()
    );
    #[derive(Serialize)]
    struct Out {
        kolmogorov_to_semicircle: Option<f64>,
        #[serde(flatten)]
        esd: crate::randmat::Esd,
    }
    let csv = e.to_csv();
    render(
        "esd",
        serde_json::json!({ "input": input, "d": d, "bins": bins, "seed": seed, "kind": kind }),
        Out {
            kolmogorov_to_semicircle: ks,
            esd: e,
        },
        Some(csv),
        summary,
    )
}

fn dispatch(command: Command) -> Result<Rendered> {
    match command {
        Command::Rank { input, sampling } => cmd_rank(&input, &sampling),
        Command::Atoms {
            input,
            sampling,
            certify,
            entropy,
            detect,
            d,
        } => cmd_atoms(&input, &sampling, certify, entropy, detect, d),
        Command::Eval {
            expression,
            expr,
            vars,
            d,
            trials,
            seed,
            kind,
            tol,
            dump,
        } => cmd_eval(&expression_text(expression, expr)?, vars, d, trials, seed, kind, tol, dump),
        Command::Realize { expression, expr, vars } => cmd_realize(&expression_text(expression, expr)?, vars),
        Command::Dualcheck { n, radius } => cmd_dualcheck(n, radius),
        Command::Scan {
            which,
            input,
            name,
            dims,
            count,
            d,
            seed,
            kind,
        } => cmd_scan(which, &input, name.as_deref(), &dims, count, d, seed, kind),
        Command::Esd {
            input,
            d,
            bins,
            seed,
            kind,
        } => cmd_esd(&input, d, bins, seed, kind),
    }
}

fn configure_threads(flag: Option<usize>) {
    let env = std::env::var("NCFIELD_THREADS").ok().and_then(|v| v.parse::<usize>().ok());
    if let Some(n) = flag.or(env).filter(|&n| n > 0) {
        // the global pool can only be set once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Runs the command line with explicit output streams and returns the
/// exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => EXIT_INPUT,
            };
        }
    };
    configure_threads(cli.threads);
    let output = cli.output.clone();
    let rendered = match dispatch(cli.command) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let body = match (output.format, &rendered.csv) {
        (Format::Csv, Some(csv)) => csv.clone(),
        (Format::Csv, None) => {
            let _ = writeln!(stderr, "error: this command has no tabular output; use --format json");
            return EXIT_INPUT;
        }
        (Format::Json, _) => {
            let mut s = serde_json::to_string_pretty(&rendered.json).unwrap_or_default();
            s.push('\n');
            s
        }
    };
    let written = match &output.out {
        Some(path) => std::fs::write(path, &body),
        None => stdout.write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_INPUT;
    }
    let _ = writeln!(stderr, "{}", rendered.summary);
    EXIT_OK
}

/// Entry point used by the binary.
pub fn main_from_env() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
