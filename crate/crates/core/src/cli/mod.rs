//! Command-line front end: subcommands wrapping the decision procedures,
//! reading and writing the versioned JSON formats in [`format`] and printing
//! a [`report::VerdictReport`].
//!
//! Exit codes: 0 when the checked property holds, 1 when it is decided
//! false, 2 on any input error.

pub mod builtin;
pub mod format;
pub mod report;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::cp::{kraus_assemble, kraus_extract};
use crate::error::{Error, Result};
use crate::evolution::{
    exp_generator, factor_certificates, halving_study, propagate, GeneratorSchedule,
};
use crate::falsify::{property_report, Evidence, SearchBudget};
use crate::filtration::{truncation_study, Filtration};
use crate::gksl::{is_cp_group_generator, is_dcp, norm_bounds_check, trace_condition, TraceClass};
use crate::operator::{eigvalsh, hermitian_part, Operator, Tolerance};
use crate::superop::{is_cp, SuperOperator};

use format::{
    parse_json, sniff_format, to_json, LoadedSuperOp, MatrixPayload, OperatorFile, ScheduleFile, SuperOpFile,
    TrajectoryFile, TrajectorySample, TruncationFile, TruncationRowOut,
};
use report::{Tolerances, VerdictReport, EXIT_INPUT};

/// Largest admissible error of the last truncation row.
pub const FINAL_ROW_TOL: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(name = "gksl-kit", version, about = "Complete-positivity and CP-semigroup toolkit")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Relative tolerance (defaults to the f64 library default).
    #[arg(long, global = true)]
    rtol: Option<f64>,
    /// Absolute tolerance (defaults to the f64 library default).
    #[arg(long, global = true)]
    atol: Option<f64>,
    /// Seed for every randomized search.
    #[arg(long, global = true, env = "GKSL_KIT_SEED", default_value_t = 0)]
    seed: u64,
    /// Also write the report to this path.
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Search {
    /// Random restarts of the falsifier searches.
    #[arg(long, default_value_t = 100)]
    restarts: usize,
    /// Ascent steps per restart.
    #[arg(long, default_value_t = 20)]
    steps: usize,
}

impl Search {
    fn budget(&self) -> SearchBudget {
        SearchBudget {
            restarts: self.restarts,
            steps: self.steps,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide complete positivity and search for positivity counterexamples.
    CheckCp {
        /// Superoperator file or `builtin:<map>`.
        input: String,
        #[command(flatten)]
        search: Search,
    },
    /// Extract a Kraus family from a CP map.
    Kraus {
        input: String,
        /// Write the Kraus family here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether a generator is dCP and classify it.
    CheckGenerator {
        /// Superoperator file or `builtin:<generator>`.
        input: String,
        /// Write the minimal presentation here.
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Also compare presentation norms against a generator norm estimate.
        #[arg(long)]
        norm_bounds: bool,
        #[command(flatten)]
        search: Search,
    },
    /// Write the minimal presentation of a dCP generator.
    MinimalForm {
        input: String,
        #[arg(long)]
        emit: PathBuf,
    },
    /// Propagate a state through a time-dependent generator.
    Evolve {
        /// Schedule file, superoperator file, `builtin:<schedule>` or
        /// `builtin:<generator>` (held constant).
        input: String,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t0: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        t1: f64,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        /// Operator file or `builtin:<state>`; defaults to the maximally mixed state.
        #[arg(long)]
        rho: Option<String>,
        /// Number of sampling intervals on `[t0, t1]`.
        #[arg(long, default_value_t = 10)]
        samples: usize,
        /// Emit a convergence table over this many step halvings.
        #[arg(long, default_value_t = 0)]
        halvings: usize,
        /// Certify every factor generator and its exponential.
        #[arg(long)]
        certificates: bool,
        /// Write the trajectory here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Truncation errors along the standard-basis filtration.
    TruncateStudy {
        input: String,
        /// Comma-separated strictly increasing dimensions.
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Operator file or `builtin:<state>`; defaults to the maximally mixed state.
        #[arg(long)]
        rho: Option<String>,
        /// Write the error table here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Runs the command line in `std::env::args_os` and returns the exit code.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

pub fn run_from<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = execute(&cli).and_then(|report| {
        let text = report.to_json();
        if let Some(path) = &cli.common.json_out {
            write_file(path, &text)?;
        }
        Ok((text, report.exit_code))
    });
    match outcome {
        Ok((text, code)) => {
            print!("{text}");
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))
}

/// Raw input: a file's text or a parsed builtin address.
enum Source {
    File(String),
    Builtin(builtin::Address),
}

fn read_source(report: &mut VerdictReport, name: &str, src: &str) -> Result<Source> {
    if src.starts_with(builtin::PREFIX) {
        report.input(name, "builtin", src.as_bytes());
        return Ok(Source::Builtin(builtin::Address::parse(src)?));
    }
    let text = fs::read_to_string(src).map_err(|e| Error::InvalidArgument(format!("cannot read {src}: {e}")))?;
    report.input(name, "file", text.as_bytes());
    Ok(Source::File(text))
}

fn from_builtin(op: SuperOperator<f64>, presentation: Option<crate::gksl::GkslPresentation<f64>>) -> LoadedSuperOp {
    LoadedSuperOp {
        op,
        repr: "builtin".into(),
        kraus: None,
        presentation,
    }
}

fn load_map(report: &mut VerdictReport, src: &str, tol: &Tolerance<f64>) -> Result<LoadedSuperOp> {
    match read_source(report, "input", src)? {
        Source::Builtin(addr) => Ok(from_builtin(builtin::map(&addr)?, None)),
        Source::File(text) => parse_json::<SuperOpFile>(&text)?.load(tol),
    }
}

fn load_generator(report: &mut VerdictReport, src: &str, tol: &Tolerance<f64>) -> Result<LoadedSuperOp> {
    let loaded = match read_source(report, "input", src)? {
        Source::Builtin(addr) => {
            let (op, p) = builtin::generator(&addr)?;
            from_builtin(op, p)
        }
        Source::File(text) => parse_json::<SuperOpFile>(&text)?.load(tol)?,
    };
    if !loaded.op.is_endo() {
        return Err(Error::DimensionMismatch(format!(
            "generators act on L(H); got {} -> {}",
            loaded.op.dim_in(),
            loaded.op.dim_out()
        )));
    }
    Ok(loaded)
}

/// A schedule and, for time-independent inputs, the constant generator.
fn load_schedule(
    report: &mut VerdictReport,
    src: &str,
    t0: f64,
    t1: f64,
    tol: &Tolerance<f64>,
) -> Result<(GeneratorSchedule<f64>, Option<SuperOperator<f64>>)> {
    let constant = |l: SuperOperator<f64>| -> Result<_> {
        if !l.is_endo() {
            return Err(Error::DimensionMismatch("generators act on L(H)".into()));
        }
        Ok((GeneratorSchedule::constant(l.clone(), t0, t1)?, Some(l)))
    };
    match read_source(report, "input", src)? {
        Source::Builtin(addr) => {
            if builtin::SCHEDULES.contains(&addr.name.as_str()) {
                Ok((builtin::schedule(&addr)?, None))
            } else {
                constant(builtin::generator(&addr)?.0)
            }
        }
        Source::File(text) => match sniff_format(&text).as_deref() {
            Some(format::SCHEDULE_FORMAT) => Ok((parse_json::<ScheduleFile>(&text)?.load(tol)?, None)),
            _ => constant(parse_json::<SuperOpFile>(&text)?.load(tol)?.op),
        },
    }
}

fn load_state(report: &mut VerdictReport, src: Option<&str>, d: usize) -> Result<Operator<f64>> {
    let rho = match src {
        None => {
            report.note("rho defaults to the maximally mixed state");
            Operator::identity(d).scale_real(1.0 / d as f64)
        }
        Some(src) => match read_source(report, "rho", src)? {
            Source::Builtin(addr) => builtin::state(&addr, d)?,
            Source::File(text) => parse_json::<OperatorFile>(&text)?.to_operator()?,
        },
    };
    if rho.dim_in() != d || rho.dim_out() != d {
        return Err(Error::DimensionMismatch(format!(
            "rho is {}x{}, system dimension is {d}",
            rho.dim_out(),
            rho.dim_in()
        )));
    }
    Ok(rho)
}

fn min_eigenvalue(a: &Operator<f64>) -> f64 {
    eigvalsh(&hermitian_part(a.matrix()))[0]
}

fn relative(defect: f64, scale: f64) -> f64 {
    defect / scale.max(1.0)
}

fn execute(cli: &Cli) -> Result<VerdictReport> {
    let c = &cli.common;
    let defaults = Tolerance::<f64>::default();
    let tol = Tolerance::new(c.rtol.unwrap_or(defaults.rtol), c.atol.unwrap_or(defaults.atol))?;
    let tolerances = Tolerances {
        rtol: tol.rtol,
        atol: tol.atol,
    };
    let seed = c.seed;
    match &cli.command {
        Command::CheckCp { input, search } => {
            let mut r = VerdictReport::new("check-cp", seed, tolerances);
            check_cp(&mut r, input, search.budget(), &tol)?;
            Ok(r)
        }
        Command::Kraus { input, out } => {
            let mut r = VerdictReport::new("kraus", seed, tolerances);
            kraus(&mut r, input, out.as_deref(), &tol)?;
            Ok(r)
        }
        Command::CheckGenerator {
            input,
            emit,
            norm_bounds,
            search,
        } => {
            let mut r = VerdictReport::new("check-generator", seed, tolerances);
            let budget = norm_bounds.then(|| search.budget());
            check_generator(&mut r, input, emit.as_deref(), budget, &tol)?;
            Ok(r)
        }
        Command::MinimalForm { input, emit } => {
            let mut r = VerdictReport::new("minimal-form", seed, tolerances);
            check_generator(&mut r, input, Some(emit), None, &tol)?;
            Ok(r)
        }
        Command::Evolve {
            input,
            t0,
            t1,
            eps,
            rho,
            samples,
            halvings,
            certificates,
            out,
        } => {
            let mut r = VerdictReport::new("evolve", seed, tolerances);
            let opts = EvolveOptions {
                t0: *t0,
                t1: *t1,
                eps: *eps,
                samples: *samples,
                halvings: *halvings,
                certificates: *certificates,
            };
            evolve(&mut r, input, rho.as_deref(), &opts, out.as_deref(), &tol)?;
            Ok(r)
        }
        Command::TruncateStudy {
            input,
            dims,
            t,
            rho,
            out,
        } => {
            let mut r = VerdictReport::new("truncate-study", seed, tolerances);
            truncate_study(&mut r, input, dims, *t, rho.as_deref(), out.as_deref(), &tol)?;
            Ok(r)
        }
    }
}

fn check_cp(r: &mut VerdictReport, input: &str, budget: SearchBudget, tol: &Tolerance<f64>) -> Result<()> {
    let loaded = load_map(r, input, tol)?;
    let op = &loaded.op;
    r.label("repr", loaded.repr.clone());
    r.label("dims", format!("{} -> {}", op.dim_in(), op.dim_out()));
    let pr = property_report(op, tol, budget, r.seed);
    let psd = is_cp(op, tol);
    let by_repr = loaded.kraus.is_some();
    let cp = pr.is_cp || by_repr;
    if by_repr {
        r.note("CP by repr: the input is a Kraus family");
    }
    r.claim("completely_positive", cp, pr.is_cp_evidence);
    r.claim("dag_morphism", pr.is_dag_morphism, pr.is_dag_morphism_evidence);
    if cp {
        r.claim("positive", true, Evidence::Exact);
    } else {
        r.claim("positive", pr.monotone_counterexample.is_none(), pr.monotone_evidence);
        if let Some(rho) = &pr.monotone_counterexample {
            r.scalar("positive_witness_output_min_eigenvalue", min_eigenvalue(&op.apply(rho)));
        }
        if let Some((rank, _, value)) = &pr.rank_n_witness {
            r.scalar("rank_n_witness_rank", *rank as f64);
            r.scalar("rank_n_witness_value", *value);
        }
    }
    r.scalar("choi_min_eigenvalue", psd.min_eigenvalue);
    r.scalar("choi_max_eigenvalue", psd.max_eigenvalue);
    r.conclude(cp);
    Ok(())
}

fn kraus(r: &mut VerdictReport, input: &str, out: Option<&Path>, tol: &Tolerance<f64>) -> Result<()> {
    let loaded = load_map(r, input, tol)?;
    let op = &loaded.op;
    r.label("repr", loaded.repr.clone());
    r.scalar("choi_min_eigenvalue", is_cp(op, tol).min_eigenvalue);
    match kraus_extract(op, tol) {
        Ok(ck) => {
            let residual = relative(kraus_assemble(&ck.family).distance(op), op.frobenius_norm());
            r.claim("completely_positive", true, Evidence::Exact);
            r.claim("degenerate_spectrum", ck.degenerate, Evidence::Exact);
            r.scalar("kraus_count", ck.family.len() as f64);
            r.scalar("reconstruction_residual", residual);
            r.table("choi_eigenvalues", &ck.eigenvalues);
            if ck.degenerate {
                r.note("degenerate Choi spectrum: Kraus operators inside an eigenspace are one valid choice");
            }
            if let Some(path) = out {
                write_file(path, &to_json(&SuperOpFile::kraus(&ck.family)))?;
            }
            r.conclude(true);
        }
        Err(Error::NotCp { .. }) => {
            r.claim("completely_positive", false, Evidence::Exact);
            r.note("no Kraus family: the map is not completely positive");
            r.conclude(false);
        }
        Err(e) => return Err(e),
    }
    Ok(())
}

fn check_generator(
    r: &mut VerdictReport,
    input: &str,
    emit: Option<&Path>,
    norm_budget: Option<SearchBudget>,
    tol: &Tolerance<f64>,
) -> Result<()> {
    let loaded = load_generator(r, input, tol)?;
    let l = &loaded.op;
    r.label("repr", loaded.repr.clone());
    r.label("dim", l.dim_in().to_string());
    if let Some(p) = &loaded.presentation {
        r.claim("input_presentation_minimal", p.minimal, Evidence::Exact);
    }
    let v = is_dcp(l, tol)?;
    r.claim("dag_morphism_generator", v.is_dag_morphism_generator, Evidence::Exact);
    r.claim("dcp", v.is_dcp, Evidence::Exact);
    r.scalar("compressed_choi_min_eigenvalue", v.compressed_choi_min_eig);
    let Some(p) = v.extracted else {
        if emit.is_some() {
            r.note("no presentation written: the generator is not dCP");
        }
        r.conclude(false);
        return Ok(());
    };
    r.scalar(
        "round_trip_residual",
        relative(p.generator().distance(l), l.frobenius_norm()),
    );
    let tc = trace_condition(&p, tol);
    let class = serde_json::to_value(tc.class).expect("serializable");
    r.label("trace", class.as_str().unwrap_or_default());
    r.claim("trace_preserving", tc.class == TraceClass::Preserving, Evidence::Exact);
    r.claim("trace_nonincreasing", tc.class != TraceClass::Neither, Evidence::Exact);
    r.scalar("trace_defect_max_eigenvalue", tc.defect_max_eigenvalue);
    let group = is_cp_group_generator(l, tol)?;
    r.claim("group", group.is_group_generator, Evidence::Exact);
    r.scalar("g_norm", p.g.operator_norm());
    r.scalar("h_norm", p.h.operator_norm());
    r.scalar(
        "psi_norm",
        p.psi.adjoint().apply(&Operator::identity(p.dim())).operator_norm(),
    );
    if let Some(budget) = norm_budget {
        let nb = norm_bounds_check(l, &p, tol, budget, r.seed)?;
        r.claim("norm_bounds", nb.holds, nb.evidence);
        r.table("norm_bounds", &nb);
    }
    if let Some(path) = emit {
        write_file(path, &to_json(&SuperOpFile::gksl(&p)))?;
    }
    r.conclude(true);
    Ok(())
}

struct EvolveOptions {
    t0: f64,
    t1: f64,
    eps: f64,
    samples: usize,
    halvings: usize,
    certificates: bool,
}

#[derive(serde::Serialize)]
struct HalvingRowOut {
    eps: f64,
    diff_to_next: f64,
    ratio: Option<f64>,
    slope: Option<f64>,
}

#[derive(serde::Serialize)]
struct CertificateOut {
    t: f64,
    length: f64,
    generator_dcp: bool,
    compressed_choi_min_eigenvalue: f64,
    factor_cp: bool,
    factor_choi_min_eigenvalue: f64,
}

fn evolve(
    r: &mut VerdictReport,
    input: &str,
    rho_src: Option<&str>,
    o: &EvolveOptions,
    out: Option<&Path>,
    tol: &Tolerance<f64>,
) -> Result<()> {
    if !(o.t0.is_finite() && o.t1.is_finite() && o.t0 <= o.t1) {
        return Err(Error::TimeMismatch(format!("need finite t0 <= t1, got {} and {}", o.t0, o.t1)));
    }
    if !(o.eps.is_finite() && o.eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {}", o.eps)));
    }
    if o.samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let (schedule, constant) = load_schedule(r, input, o.t0, o.t1, tol)?;
    let d = schedule.dim();
    let rho0 = load_state(r, rho_src, d)?;
    r.label("dim", d.to_string());
    r.scalar("eps", o.eps);
    r.scalar("t0", o.t0);
    r.scalar("t1", o.t1);

    let mut samples = Vec::with_capacity(o.samples + 1);
    let mut final_map = None;
    for k in 0..=o.samples {
        let t = if k == o.samples {
            o.t1
        } else {
            o.t0 + (o.t1 - o.t0) * k as f64 / o.samples as f64
        };
        let prop = propagate(&schedule, o.t0, t, o.eps)?;
        let rho = prop.map.apply(&rho0);
        samples.push(TrajectorySample {
            t,
            trace: rho.trace().re,
            min_eigenvalue: min_eigenvalue(&rho),
            rho: MatrixPayload::from_operator(&rho),
        });
        final_map = Some(prop.map);
    }
    let final_map = final_map.expect("at least one sample");
    let tr0 = samples[0].trace;
    let trace_drift = samples.iter().map(|s| (s.trace - tr0).abs()).fold(0.0, f64::max);
    let min_eig = samples.iter().map(|s| s.min_eigenvalue).fold(f64::INFINITY, f64::min);
    r.scalar("trace_drift", trace_drift);
    r.scalar("min_eigenvalue_min", min_eig);
    r.scalar("min_eigenvalue_drift", (samples[0].min_eigenvalue - min_eig).max(0.0));
    let states_positive = min_eig >= -tol.scaled(1.0).max(tol.atol);
    r.claim("states_positive", states_positive, Evidence::Exact);
    let cp = is_cp(&final_map, tol);
    r.claim("propagator_cp", cp.psd, Evidence::Exact);
    r.scalar("propagator_choi_min_eigenvalue", cp.min_eigenvalue);
    let mut holds = cp.psd && states_positive;

    if let Some(l) = &constant {
        let semigroup = exp_generator(l, o.t1 - o.t0);
        r.scalar("semigroup_distance", final_map.distance(&semigroup));
    }
    if o.halvings > 0 {
        let (rows, _) = halving_study(&schedule, o.t0, o.t1, o.eps, o.halvings)?;
        let rows: Vec<HalvingRowOut> = rows
            .iter()
            .map(|row| HalvingRowOut {
                eps: row.eps,
                diff_to_next: row.diff_to_next,
                ratio: row.ratio.filter(|x| x.is_finite()),
                slope: row.ratio.map(f64::log2).filter(|x| x.is_finite()),
            })
            .collect();
        if let Some(last) = rows.iter().rev().find_map(|row| row.slope) {
            r.scalar("convergence_slope", last);
        }
        r.table("halvings", &rows);
    }
    if o.certificates {
        let certs: Vec<CertificateOut> = factor_certificates(&schedule, o.t0, o.t1, o.eps, tol)?
            .into_iter()
            .map(|c| CertificateOut {
                t: c.t,
                length: c.length,
                generator_dcp: c.generator_dcp,
                compressed_choi_min_eigenvalue: c.compressed_choi_min_eig,
                factor_cp: c.factor_cp,
                factor_choi_min_eigenvalue: c.factor_choi_min_eig,
            })
            .collect();
        let all = certs.iter().all(|c| c.generator_dcp && c.factor_cp);
        r.claim("factors_certified", all, Evidence::Exact);
        r.table("certificates", &certs);
        holds &= all;
    }
    if let Some(path) = out {
        let file = TrajectoryFile {
            format: format::TRAJECTORY_FORMAT.into(),
            version: format::VERSION.into(),
            eps: o.eps,
            samples,
        };
        write_file(path, &to_json(&file))?;
    }
    r.conclude(holds);
    Ok(())
}

fn truncate_study(
    r: &mut VerdictReport,
    input: &str,
    dims: &[usize],
    t: f64,
    rho_src: Option<&str>,
    out: Option<&Path>,
    tol: &Tolerance<f64>,
) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidArgument(format!("t must be finite and nonnegative, got {t}")));
    }
    let loaded = load_generator(r, input, tol)?;
    let l = &loaded.op;
    let big_d = l.dim_in();
    let mut dims = dims.to_vec();
    if dims.last() != Some(&big_d) && dims.last().is_some_and(|&n| n < big_d) {
        dims.push(big_d);
        r.note(format!("appended the ambient dimension {big_d} to dims"));
    }
    let filtration = Filtration::standard(big_d, dims)?;
    let rho = load_state(r, rho_src, big_d)?;
    r.label("dim", big_d.to_string());
    r.scalar("t", t);
    let rows = match truncation_study(l, &filtration, t, &rho, tol) {
        Ok(rows) => rows,
        Err(Error::NotDcp { min_eigenvalue }) => {
            r.claim("dcp", false, Evidence::Exact);
            r.scalar("compressed_choi_min_eigenvalue", min_eigenvalue);
            r.conclude(false);
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    let rows: Vec<TruncationRowOut> = rows
        .into_iter()
        .map(|row| TruncationRowOut {
            n: row.n,
            error: row.error,
            truncated_cp: row.truncated_cp,
            truncated_choi_min_eigenvalue: row.truncated_choi_min_eig,
        })
        .collect();
    let last = rows.last().expect("nonempty dims").error;
    let all_cp = rows.iter().all(|row| row.truncated_cp);
    let converged = last <= FINAL_ROW_TOL;
    r.claim("dcp", true, Evidence::Exact);
    r.claim("truncations_cp", all_cp, Evidence::Exact);
    r.claim("final_row_converged", converged, Evidence::Exact);
    r.scalar("final_row_error", last);
    r.table("rows", &rows);
    if let Some(path) = out {
        let file = TruncationFile {
            format: format::TRUNCATION_FORMAT.into(),
            version: format::VERSION.into(),
            ambient_dim: big_d,
            t,
            rows,
        };
        write_file(path, &to_json(&file))?;
    }
    r.conclude(all_cp && converged);
    Ok(())
}
