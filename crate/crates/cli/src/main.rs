//! `rhls`: command-line front end for the reversed HLS laboratory.
//!
//! Exit status: 0 when every check passes, 1 when a verification fails,
//! 2 on usage or domain errors. JSON output carries `"schema": "rhls/1"`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use rhls_core::extremal::{
    asymptotic_coeffs, concentration_demo, derive_el_constants, el_residual, fixed_point_minimize, moving_sphere_check,
    snap_lambda, ELPair,
};
use rhls_core::geometry::{lift_function, lift_potential};
use rhls_core::inequalities::random_zonal;
use rhls_core::norms::{layer_cake_power, lp_quasi_norm, power_sum, weak_quasi_norm, StepDistribution};
use rhls_core::operators::{kernel_row_integral, radial_operator, sphere_operator, split_operator, Part};
use rhls_core::report::all_pass;
use rhls_core::special::{kernel_integral, sharp_constant, sphere_area};
use rhls_core::suite::{run_suite, Check};
use rhls_core::{ExponentSet, RadialFn, RhlsError, SampledTable, ZonalFn};

const SCHEMA: &str = "rhls/1";
const THREADS_VAR: &str = "RHLS_THREADS";

#[derive(Parser)]
#[command(
    name = "rhls",
    version,
    about = "Numerical laboratory for the reversed Hardy-Littlewood-Sobolev inequality"
)]
struct Cli {
    /// Print results as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Dims {
    /// Dimension n of R^n (the sphere is S^n).
    #[arg(long)]
    n: usize,
    /// Order alpha of the potential, alpha > n.
    #[arg(long)]
    alpha: f64,
}

impl Dims {
    fn critical(&self) -> Result<ExponentSet, RhlsError> {
        ExponentSet::critical(self.n, self.alpha)
    }

    fn with_p(&self, p: Option<f64>) -> Result<ExponentSet, RhlsError> {
        match p {
            Some(p) => ExponentSet::general(self.n, self.alpha, p),
            None => self.critical(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sharp constant, kernel integral and their quadrature cross-check.
    Constant {
        #[command(flatten)]
        dims: Dims,
    },
    /// Sharp constant over a range of alpha, as CSV (alpha,n_star).
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha_min: f64,
        #[arg(long)]
        alpha_max: f64,
        #[arg(long, default_value_t = 50)]
        steps: usize,
        /// CSV destination; standard output when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Kelvin self-inversion residual of the extremal with d = lambda.
    Kelvin {
        #[command(flatten)]
        dims: Dims,
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 12.0)]
        half_width: f64,
        #[arg(long, default_value_t = 512)]
        steps: usize,
    },
    /// Lift a radial CSV to a zonal CSV on the sphere.
    Lift {
        #[command(flatten)]
        dims: Dims,
        /// Exponent p; the critical value when omitted.
        #[arg(long)]
        p: Option<f64>,
        /// Use the potential weight (exponent n/q) instead of n/p.
        #[arg(long)]
        potential: bool,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Quasi-norm and weak quasi-norm of a sampled table.
    Norm {
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long)]
        input: PathBuf,
    },
    /// Negative-exponent norm by direct sum and by the layer-cake integral.
    Layercake {
        #[arg(long, allow_negative_numbers = true)]
        r: f64,
        #[arg(long)]
        input: PathBuf,
    },
    /// Apply the potential operator to a radial or zonal CSV.
    Apply {
        #[command(flatten)]
        dims: Dims,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        input: PathBuf,
        /// Split radius; requires --part.
        #[arg(long, requires = "part")]
        split: Option<f64>,
        #[arg(long, value_parser = ["near", "far"], requires = "split")]
        part: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the inequality checkers over seeded random inputs.
    Verify {
        #[command(flatten)]
        dims: Dims,
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        #[arg(long, default_value = "all")]
        which: String,
    },
    /// Damped fixed-point iteration towards the minimizer from a noisy start.
    Minimize {
        #[command(flatten)]
        dims: Dims,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        damping: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 500)]
        maxit: usize,
        #[arg(long, default_value_t = 256)]
        nodes: usize,
        /// Spread of the log-normal noise on the constant start.
        #[arg(long, default_value_t = 0.1)]
        sigma: f64,
        /// CSV destination for the (iteration,quotient) trace.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Concentrating extremals: norms, quotients and values at e_1.
    DemoConcentration {
        #[command(flatten)]
        dims: Dims,
        #[arg(long, value_delimiter = ',', default_value = "1,0.1,0.01")]
        eps: Vec<f64>,
        /// CSV destination for the (eps,f_e1,potential_e1) table.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Constants of the Euler-Lagrange pair and its residuals.
    El {
        #[command(flatten)]
        dims: Dims,
        #[arg(long, default_value_t = 1.0)]
        d: f64,
    },
}

/// Errors that end the run with status 2.
#[derive(Debug)]
enum Failure {
    Core(RhlsError),
    Usage(String),
}

impl From<RhlsError> for Failure {
    fn from(e: RhlsError) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Core(RhlsError::Io(e))
    }
}

type Outcome = Result<bool, Failure>;

fn envelope(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("command".into(), json!(command));
    m
}

/// Prints `doc` as JSON, or as `key: value` lines.
fn emit(doc: Map<String, Value>, as_json: bool) -> io::Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    if as_json {
        serde_json::to_writer_pretty(&mut out, &Value::Object(doc))?;
        writeln!(out)?;
    } else {
        for (k, v) in doc {
            if k == "schema" {
                continue;
            }
            match v {
                Value::String(s) => writeln!(out, "{k}: {s}")?,
                other => writeln!(out, "{k}: {other}")?,
            }
        }
    }
    Ok(())
}

fn open_output(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn read_table(path: &Path) -> Result<SampledTable, Failure> {
    let file = File::open(path).map_err(|e| Failure::Usage(format!("--input {}: {e}", path.display())))?;
    Ok(SampledTable::read_csv(file)?)
}

fn constant(dims: Dims, as_json: bool) -> Outcome {
    let e = dims.critical()?;
    let ns = sharp_constant(e.n, e.alpha)?.value;
    let ki = kernel_integral(e.n, e.alpha)?;
    let area = sphere_area(e.n);
    let route = area.powf(-e.alpha / e.n as f64) * kernel_row_integral(e.n, e.alpha);
    let residual = (route - ns).abs() / ns;
    let mut doc = envelope("constant");
    doc.insert("n".into(), json!(e.n));
    doc.insert("alpha".into(), json!(e.alpha));
    doc.insert("n_star".into(), json!(ns));
    doc.insert("kernel_integral".into(), json!(ki));
    doc.insert("sphere_area".into(), json!(area));
    doc.insert("quadrature_route".into(), json!(route));
    doc.insert("cross_check_residual".into(), json!(residual));
    emit(doc, as_json)?;
    Ok(residual <= 1e-8)
}

fn sweep(n: usize, lo: f64, hi: f64, steps: usize, output: &Option<PathBuf>) -> Outcome {
    if steps < 1 {
        return Err(Failure::Usage("--steps must be at least 1".into()));
    }
    if !(lo > n as f64) || !(hi >= lo) {
        return Err(Failure::Usage(format!(
            "--alpha-min/--alpha-max: expected {n} < alpha-min <= alpha-max, got {lo} and {hi}"
        )));
    }
    let mut out = open_output(output)?;
    writeln!(out, "alpha,n_star")?;
    let mut ok = true;
    for k in 0..=steps {
        let a = lo + (hi - lo) * k as f64 / steps as f64;
        let v = sharp_constant(n, a)?.value;
        ok &= v.is_finite() && v > 0.0;
        writeln!(out, "{a:e},{v:e}")?;
    }
    out.flush()?;
    Ok(ok)
}

fn kelvin(dims: Dims, lambda: f64, half_width: f64, steps: usize, as_json: bool) -> Outcome {
    let e = dims.critical()?;
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Failure::Usage(format!(
            "--lambda: expected a positive radius, got {lambda}"
        )));
    }
    let h = half_width / steps.max(1) as f64;
    let d = snap_lambda(lambda, h);
    let s = e.alpha - e.n as f64;
    let u = RadialFn::sample(e.n, half_width, steps, |r| (r * r + d * d).powf(0.5 * s))?;
    let m = moving_sphere_check(&u, lambda, &e)?;
    let mut doc = envelope("kelvin");
    doc.insert("requested_lambda".into(), json!(m.requested_lambda));
    doc.insert("lambda".into(), json!(m.lambda));
    doc.insert("self_inversion_residual".into(), json!(m.max_relative_difference));
    doc.insert("nodes_compared".into(), json!(m.nodes));
    emit(doc, as_json)?;
    Ok(m.max_relative_difference <= 1e-12)
}

fn lift(dims: Dims, p: Option<f64>, potential: bool, input: &Path, output: &Option<PathBuf>) -> Outcome {
    let e = dims.with_p(p)?;
    let f = match read_table(input)? {
        SampledTable::Radial(f) => f,
        SampledTable::Zonal(_) => return Err(Failure::Usage("--input: expected a radial table".into())),
    };
    let big = if potential {
        lift_potential(&f, &e)?
    } else {
        lift_function(&f, &e)?
    };
    let mut out = open_output(output)?;
    big.write_csv(&mut out)?;
    out.flush()?;
    Ok(true)
}

fn norm(p: f64, input: &Path, as_json: bool) -> Outcome {
    if p == 0.0 || !p.is_finite() {
        return Err(Failure::Usage(format!(
            "--p: expected a finite nonzero exponent, got {p}"
        )));
    }
    let t = read_table(input)?;
    let w = t.weights();
    let mut doc = envelope("norm");
    doc.insert("p".into(), json!(p));
    doc.insert("norm".into(), json!(lp_quasi_norm(t.values(), &w, p)?));
    doc.insert("weak_norm".into(), json!(weak_quasi_norm(t.values(), &w, p)?));
    emit(doc, as_json)?;
    Ok(true)
}

fn layercake(r: f64, input: &Path, as_json: bool) -> Outcome {
    if !(r < 0.0) || !r.is_finite() {
        return Err(Failure::Usage(format!(
            "--r: expected a finite negative exponent, got {r}"
        )));
    }
    let t = read_table(input)?;
    let w = t.weights();
    let direct = power_sum(t.values(), &w, r)?;
    let cake = layer_cake_power(&StepDistribution::new(t.values(), &w)?, r)?;
    let residual = if direct.is_infinite() && cake.is_infinite() {
        0.0
    } else {
        (cake - direct).abs() / direct.abs()
    };
    let mut doc = envelope("layercake");
    doc.insert("r".into(), json!(r));
    doc.insert("direct".into(), json!(direct));
    doc.insert("layer_cake".into(), json!(cake));
    doc.insert("residual".into(), json!(residual));
    emit(doc, as_json)?;
    Ok(residual <= 1e-6)
}

fn apply(
    dims: Dims,
    p: Option<f64>,
    input: &Path,
    split: Option<f64>,
    part: &Option<String>,
    output: &Option<PathBuf>,
) -> Outcome {
    let e = dims.with_p(p)?;
    let result = match (read_table(input)?, split) {
        (SampledTable::Radial(f), None) => SampledTable::Radial(radial_operator(&f, &e)?.f),
        (SampledTable::Radial(f), Some(rho)) => {
            let which = if part.as_deref() == Some("near") {
                Part::Near
            } else {
                Part::Far
            };
            SampledTable::Radial(split_operator(&f, rho, which, &e)?)
        }
        (SampledTable::Zonal(f), None) => SampledTable::Zonal(sphere_operator(&f, &e)?),
        (SampledTable::Zonal(_), Some(_)) => {
            return Err(Failure::Usage("--split: only radial inputs can be split".into()))
        }
    };
    let mut out = open_output(output)?;
    result.write_csv(&mut out)?;
    out.flush()?;
    Ok(true)
}

fn verify(dims: Dims, seeds: u64, which: &str) -> Outcome {
    let check: Check = which.parse()?;
    let reports = run_suite(dims.n, dims.alpha, check, seeds)?;
    let pass = all_pass(&reports);
    let mut doc = envelope("verify");
    doc.insert("n".into(), json!(dims.n));
    doc.insert("alpha".into(), json!(dims.alpha));
    doc.insert("which".into(), json!(check.to_string()));
    doc.insert("seeds".into(), json!(seeds));
    doc.insert("all_pass".into(), json!(pass));
    doc.insert("failures".into(), json!(reports.iter().filter(|r| !r.pass).count()));
    doc.insert(
        "reports".into(),
        serde_json::to_value(&reports).map_err(RhlsError::from)?,
    );
    // Reports are always JSON.
    emit(doc, true)?;
    Ok(pass)
}

#[allow(clippy::too_many_arguments)]
fn minimize(
    dims: Dims,
    seed: u64,
    damping: f64,
    tol: f64,
    maxit: usize,
    nodes: usize,
    sigma: f64,
    trace: &Option<PathBuf>,
    as_json: bool,
) -> Outcome {
    let e = dims.critical()?;
    let grid = ZonalFn::constant(e.n, nodes, 1.0)?;
    let noise = random_zonal(&grid, sigma, seed)?;
    let r = fixed_point_minimize(&noise, &e, damping, tol, maxit)?;
    let q = *r.trace.last().unwrap_or(&f64::NAN);
    let max_increase = r.trace.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    if trace.is_some() {
        let mut out = open_output(trace)?;
        writeln!(out, "iteration,quotient")?;
        for (k, v) in r.trace.iter().enumerate() {
            writeln!(out, "{k},{v:e}")?;
        }
        out.flush()?;
    }
    let gap = (q - r.sharp_constant).abs();
    let mut doc = envelope("minimize");
    doc.insert("seed".into(), json!(seed));
    doc.insert("damping".into(), json!(damping));
    doc.insert("iterations".into(), json!(r.iterations));
    doc.insert("converged".into(), json!(r.converged));
    doc.insert("quotient".into(), json!(q));
    doc.insert("n_star".into(), json!(r.sharp_constant));
    doc.insert("gap".into(), json!(gap));
    doc.insert("max_trace_increase".into(), json!(max_increase));
    emit(doc, as_json)?;
    Ok(r.converged && gap <= 1e-3)
}

fn demo_concentration(dims: Dims, eps: &[f64], csv: &Option<PathBuf>, as_json: bool) -> Outcome {
    let e = dims.critical()?;
    let c = concentration_demo(eps, &e)?;
    if csv.is_some() {
        let mut out = open_output(csv)?;
        writeln!(out, "eps,f_e1,potential_e1")?;
        for r in &c.rows {
            writeln!(out, "{:e},{:e},{:e}", r.eps, r.f_at_e1, r.potential_at_e1)?;
        }
        out.flush()?;
    }
    let pass = all_pass(&c.reports);
    let mut doc = envelope("demo-concentration");
    doc.insert("n_star".into(), json!(c.sharp_constant));
    doc.insert("rows".into(), serde_json::to_value(&c.rows).map_err(RhlsError::from)?);
    doc.insert("all_pass".into(), json!(pass));
    if as_json {
        doc.insert(
            "reports".into(),
            serde_json::to_value(&c.reports).map_err(RhlsError::from)?,
        );
    }
    emit(doc, as_json)?;
    Ok(pass)
}

fn el(dims: Dims, d: f64, as_json: bool) -> Outcome {
    let e = dims.critical()?;
    let (c1, c2) = derive_el_constants(d, &e)?;
    let grid = RadialFn::sample(e.n, 24.0, 1024, |_| 0.0)?;
    let pair = ELPair::closed_form(c1, c2, d, &grid, &e)?;
    let res = el_residual(&pair)?;
    let co = asymptotic_coeffs(&pair)?;
    let mut doc = envelope("el");
    doc.insert("d".into(), json!(d));
    doc.insert("c1".into(), json!(c1));
    doc.insert("c2".into(), json!(c2));
    doc.insert("residual_u".into(), json!(res.computed["residual_u"]));
    doc.insert("residual_v".into(), json!(res.computed["residual_v"]));
    doc.insert("a_limit".into(), json!(co.a_limit));
    doc.insert("a_integral".into(), json!(co.a_integral));
    doc.insert("b_limit".into(), json!(co.b_limit));
    doc.insert("b_integral".into(), json!(co.b_integral));
    doc.insert("asymptotic_gap".into(), json!(co.max_relative_gap()));
    doc.insert("two_sided_bound".into(), json!(pair.two_sided_bound()));
    emit(doc, as_json)?;
    Ok(res.pass && co.max_relative_gap() <= 1e-3)
}

fn run(cli: &Cli) -> Outcome {
    let j = cli.json;
    match &cli.command {
        Command::Constant { dims } => constant(*dims, j),
        Command::Sweep {
            n,
            alpha_min,
            alpha_max,
            steps,
            output,
        } => sweep(*n, *alpha_min, *alpha_max, *steps, output),
        Command::Kelvin {
            dims,
            lambda,
            half_width,
            steps,
        } => kelvin(*dims, *lambda, *half_width, *steps, j),
        Command::Lift {
            dims,
            p,
            potential,
            input,
            output,
        } => lift(*dims, *p, *potential, input, output),
        Command::Norm { p, input } => norm(*p, input, j),
        Command::Layercake { r, input } => layercake(*r, input, j),
        Command::Apply {
            dims,
            p,
            input,
            split,
            part,
            output,
        } => apply(*dims, *p, input, *split, part, output),
        Command::Verify { dims, seeds, which } => verify(*dims, *seeds, which),
        Command::Minimize {
            dims,
            seed,
            damping,
            tol,
            maxit,
            nodes,
            sigma,
            trace,
        } => minimize(*dims, *seed, *damping, *tol, *maxit, *nodes, *sigma, trace, j),
        Command::DemoConcentration { dims, eps, csv } => demo_concentration(*dims, eps, csv, j),
        Command::El { dims, d } => el(*dims, *d, j),
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|t| *t > 0)
        .ok_or_else(|| Failure::Usage(format!("{THREADS_VAR}: expected a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(format!("{THREADS_VAR}: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|_| run(&cli)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
