//! Command-line front end: argument parsing, validation and dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{penalty_metric, Algebra, PenaltyMetric, DEFAULT_MU, DIM};
use crate::circuit::{depth_series, kak_decompose};
use crate::complexity::{
    convergence_study, direct_complexity, slope_sweep, stepwise_run, ComplexityReport, SelectRule,
};
use crate::continuum::{asymptotic_scale, continuum_complexity, response_grid};
use crate::error::{Error, Result};
use crate::io::{create_output, write_rows, Format, Header};
use crate::purification::{eop, purify, reduce, LogBase};
use crate::walk::{evolve, probability_distribution};

pub const SEED_ENV: &str = "QWC_SEED";

/// Parse an angle in radians: `0.785`, `pi`, `-pi/2`, `2pi/3`, `3*pi/4`.
pub fn parse_angle(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim().to_ascii_lowercase();
    if let Ok(x) = t.parse::<f64>() {
        return if x.is_finite() {
            Ok(x)
        } else {
            Err(format!("angle must be finite: {s}"))
        };
    }
    let bad = || format!("cannot parse angle '{s}' (use radians or forms like pi/4, 2pi/3)");
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim().parse::<f64>().map_err(|_| bad())?),
        None => (t.as_str(), 1.0),
    };
    if den == 0.0 || !den.is_finite() {
        return Err(bad());
    }
    let coef = num.strip_suffix("pi").ok_or_else(bad)?.trim();
    let coef = coef.strip_suffix('*').unwrap_or(coef).trim();
    let c = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(c * std::f64::consts::PI / den)
}

/// `start:stop:count` (inclusive, evenly spaced) or a comma list of angles.
pub fn parse_theta_grid(s: &str) -> std::result::Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [a, b, n] => {
            let (a, b) = (parse_angle(a)?, parse_angle(b)?);
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| format!("bad point count in '{s}'"))?;
            match n {
                0 => Err("theta grid needs at least one point".into()),
                1 => Ok(vec![a]),
                _ => Ok((0..n)
                    .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
                    .collect()),
            }
        }
        [_] => s.split(',').map(parse_angle).collect(),
        _ => Err(format!("theta grid '{s}' must be start:stop:count or a comma list")),
    }
}

fn parse_sizes(s: &str) -> std::result::Result<Vec<usize>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| format!("bad sample size '{x}'")))
        .collect()
}

/// A parsed list argument held as one value.
#[derive(Clone, Debug, PartialEq)]
pub struct List<T>(pub Vec<T>);

fn theta_list(s: &str) -> std::result::Result<List<f64>, String> {
    parse_theta_grid(s).map(List)
}

fn size_list(s: &str) -> std::result::Result<List<usize>, String> {
    parse_sizes(s).map(List)
}

#[derive(Debug, Parser)]
#[command(name = "qwc", version, about = "Nielsen complexity of quantum-walk purifications")]
pub struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Overwrite an existing output file.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args, Clone)]
pub struct RunArgs {
    #[arg(long, value_parser = parse_angle, default_value = "pi/4")]
    pub theta: f64,
    #[arg(long, default_value_t = 30)]
    pub steps: usize,
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    #[arg(long, default_value_t = DEFAULT_MU)]
    pub mu: f64,
    #[arg(long, default_value_t = 500)]
    pub samples: usize,
    /// Master seed; the QWC_SEED environment variable takes precedence.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = SelectArg::Increment)]
    pub select: SelectArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectArg {
    /// Pick the candidate with the cheapest step-to-step unitary.
    Increment,
    /// Pick the candidate with the cheapest target unitary.
    Direct,
}

impl From<SelectArg> for SelectRule {
    fn from(s: SelectArg) -> Self {
        match s {
            SelectArg::Increment => SelectRule::Increment,
            SelectArg::Direct => SelectRule::Direct,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Direct,
    Stepwise,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Position distribution after the last step.
    Walk {
        #[arg(long, value_parser = parse_angle, default_value = "pi/4")]
        theta: f64,
        #[arg(long, default_value_t = 30)]
        steps: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Entanglement of purification for every step.
    Eop {
        #[arg(long, value_parser = parse_angle, default_value = "pi/4")]
        theta: f64,
        #[arg(long, default_value_t = 30)]
        steps: usize,
        /// Report entropy in bits instead of nats.
        #[arg(long)]
        bits: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Direct or stepwise complexity series.
    Complexity {
        #[arg(long, value_enum, default_value_t = ModeArg::Stepwise)]
        mode: ModeArg,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Stepwise slope as a function of coin angle.
    Slope {
        #[arg(long, value_parser = theta_list, default_value = "0:pi:13")]
        theta_grid: List<f64>,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Spread of the min-over-samples cost against sample size.
    Convergence {
        #[arg(long, value_parser = parse_angle, default_value = "pi/4")]
        theta: f64,
        #[arg(long, default_value_t = 10)]
        step: usize,
        #[arg(long, value_parser = size_list, default_value = "10,50,200,500")]
        sizes: List<usize>,
        #[arg(long, default_value_t = 32)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = DEFAULT_MU)]
        mu: f64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Momentum-cutoff complexity of the continuum limit.
    Continuum {
        #[arg(long, default_value_t = 40.0)]
        cutoff: f64,
        #[arg(long, value_parser = parse_angle, default_value = "pi/4")]
        theta: f64,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Simpson intervals per axis.
        #[arg(long, default_value_t = 512)]
        grid: usize,
        /// Emit the (p1, p2, v10, v15) table on this many intervals per axis
        /// instead of the integral.
        #[arg(long)]
        table: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Gate decomposition and depth of the stepwise unitaries.
    Circuit {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Generators, weights, structure constants and Killing form.
    DumpAlgebra {
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn effective_seed(flag: u64) -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("{SEED_ENV}='{v}' is not a u64"))),
        Err(_) => Ok(flag),
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if theta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter("theta must be finite".into()))
    }
}

fn validated_penalty(k: u32, mu: f64) -> Result<PenaltyMetric> {
    penalty_metric(k, mu)
}

fn validate_run(run: &RunArgs) -> Result<PenaltyMetric> {
    check_theta(run.theta)?;
    if run.steps == 0 {
        return Err(Error::InvalidParameter("--steps must be >= 1".into()));
    }
    if run.samples == 0 {
        return Err(Error::InvalidParameter("--samples must be >= 1".into()));
    }
    validated_penalty(run.k, run.mu)
}

fn run_config(run: &RunArgs, seed: u64) -> Value {
    json!({
        "theta": run.theta,
        "steps": run.steps,
        "k": run.k,
        "mu": run.mu,
        "samples": run.samples,
        "seed": seed,
        "select": run.select,
    })
}

fn emit<T: Serialize>(
    out: &OutputArgs,
    header: &Header,
    rows: &[T],
    extra: Option<Value>,
) -> Result<()> {
    match &out.output {
        Some(path) => {
            let file = create_output(path, out.force)?;
            let mut w = std::io::BufWriter::new(file);
            write_rows(&mut w, out.format, header, rows, extra)?;
            w.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            write_rows(&mut w, out.format, header, rows, extra)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct WalkRow {
    x: i64,
    p: f64,
}

#[derive(Serialize)]
struct EopRow {
    t: usize,
    eop: f64,
}

#[derive(Serialize)]
struct DirectRow {
    t: usize,
    #[serde(rename = "C")]
    c: f64,
}

#[derive(Serialize)]
struct StepwiseRow {
    t: usize,
    #[serde(rename = "C_increment")]
    increment: f64,
    #[serde(rename = "C_cumulative")]
    cumulative: f64,
}

#[derive(Serialize)]
struct StddevRow {
    samples: usize,
    stddev: f64,
}

#[derive(Serialize)]
struct IntegralRow {
    cutoff: f64,
    theta: f64,
    t: f64,
    grid: usize,
    complexity: f64,
    ratio_to_scale: f64,
}

#[derive(Serialize)]
struct StructureRow {
    i: usize,
    j: usize,
    k: usize,
    f: f64,
}

fn report_extra(r: &ComplexityReport) -> Value {
    json!({ "report": r })
}

fn cmd_complexity(mode: ModeArg, run: &RunArgs, out: &OutputArgs) -> Result<()> {
    let p = validate_run(run)?;
    let seed = effective_seed(run.seed)?;
    let mut cfg = run_config(run, seed);
    cfg["mode"] = json!(match mode {
        ModeArg::Direct => "direct",
        ModeArg::Stepwise => "stepwise",
    });
    let header = Header::new("complexity", Some(seed), cfg);
    match mode {
        ModeArg::Direct => {
            let r = direct_complexity(run.theta, run.steps, &p, run.samples, seed)?;
            let rows: Vec<DirectRow> = r.rows.iter().map(|x| DirectRow { t: x.t, c: x.value }).collect();
            emit(out, &header, &rows, Some(report_extra(&r)))
        }
        ModeArg::Stepwise => {
            let (r, _) = stepwise_run(run.theta, run.steps, &p, run.samples, seed, run.select.into())?;
            let rows: Vec<StepwiseRow> = r
                .rows
                .iter()
                .map(|x| StepwiseRow {
                    t: x.t,
                    increment: x.value,
                    cumulative: x.cumulative.unwrap_or(0.0),
                })
                .collect();
            emit(out, &header, &rows, Some(report_extra(&r)))
        }
    }
}

fn dispatch(cmd: &Command) -> Result<()> {
    match cmd {
        Command::Walk { theta, steps, out } => {
            check_theta(*theta)?;
            let states = evolve(*theta, *steps);
            let d = probability_distribution(states.last().expect("t = 0 state"));
            let rows: Vec<WalkRow> = d
                .iter()
                .filter(|(x, _)| (x - *steps as i64).rem_euclid(2) == 0)
                .map(|(x, p)| WalkRow { x, p })
                .collect();
            let header = Header::new("walk", None, json!({"theta": theta, "steps": steps}));
            emit(out, &header, &rows, None)
        }
        Command::Eop {
            theta,
            steps,
            bits,
            out,
        } => {
            check_theta(*theta)?;
            let base = if *bits { LogBase::Two } else { LogBase::Natural };
            let rows: Vec<EopRow> = evolve(*theta, *steps)
                .iter()
                .enumerate()
                .map(|(t, s)| EopRow {
                    t,
                    eop: eop(&purify(&reduce(s)), base),
                })
                .collect();
            let header = Header::new(
                "eop",
                None,
                json!({"theta": theta, "steps": steps, "bits": bits}),
            );
            emit(out, &header, &rows, None)
        }
        Command::Complexity { mode, run, out } => cmd_complexity(*mode, run, out),
        Command::Slope {
            theta_grid,
            run,
            out,
        } => {
            let p = validate_run(run)?;
            if run.steps < 3 {
                return Err(Error::InvalidParameter("slope needs --steps >= 3".into()));
            }
            let theta_grid = &theta_grid.0;
            theta_grid.iter().try_for_each(|t| check_theta(*t))?;
            let seed = effective_seed(run.seed)?;
            let mut cfg = run_config(run, seed);
            cfg["theta_grid"] = json!(theta_grid);
            let rows = slope_sweep(theta_grid, run.steps, &p, run.samples, seed, run.select.into())?;
            emit(out, &Header::new("slope", Some(seed), cfg), &rows, None)
        }
        Command::Convergence {
            theta,
            step,
            sizes,
            trials,
            k,
            mu,
            seed,
            out,
        } => {
            check_theta(*theta)?;
            let p = validated_penalty(*k, *mu)?;
            let seed = effective_seed(*seed)?;
            let sizes = &sizes.0;
            let cfg = json!({
                "theta": theta, "step": step, "sizes": sizes, "trials": trials,
                "k": k, "mu": mu, "seed": seed,
            });
            let table = convergence_study(*theta, *step, sizes, *trials, &p, seed)?;
            let rows: Vec<StddevRow> = table
                .iter()
                .map(|r| StddevRow {
                    samples: r.samples,
                    stddev: r.stddev,
                })
                .collect();
            emit(
                out,
                &Header::new("convergence", Some(seed), cfg),
                &rows,
                Some(json!({ "detail": table })),
            )
        }
        Command::Continuum {
            cutoff,
            theta,
            t,
            grid,
            table,
            out,
        } => {
            check_theta(*theta)?;
            if !(t.is_finite() && *t >= 0.0) {
                return Err(Error::InvalidParameter("--t must be >= 0".into()));
            }
            let cfg = json!({"cutoff": cutoff, "theta": theta, "t": t, "grid": grid, "table": table});
            let header = Header::new("continuum", None, cfg);
            match table {
                Some(n) => {
                    if *n == 0 {
                        return Err(Error::InvalidParameter("--table must be >= 1".into()));
                    }
                    emit(out, &header, &response_grid(*cutoff, *theta, *t, *n), None)
                }
                None => {
                    let c = continuum_complexity(*cutoff, *theta, *t, *grid)?;
                    let row = IntegralRow {
                        cutoff: *cutoff,
                        theta: *theta,
                        t: *t,
                        grid: *grid,
                        complexity: c,
                        ratio_to_scale: c / asymptotic_scale(*cutoff, *t),
                    };
                    emit(out, &header, &[row], None)
                }
            }
        }
        Command::Circuit { run, out } => {
            let p = validate_run(run)?;
            let seed = effective_seed(run.seed)?;
            let (_, seq) = stepwise_run(run.theta, run.steps, &p, run.samples, seed, run.select.into())?;
            let rows = depth_series(&seq)?;
            let circuits = seq
                .factors
                .iter()
                .map(kak_decompose)
                .collect::<Result<Vec<_>>>()?;
            emit(
                out,
                &Header::new("circuit", Some(seed), run_config(run, seed)),
                &rows,
                Some(json!({ "circuits": circuits })),
            )
        }
        Command::DumpAlgebra { out } => {
            let alg = Algebra::shared();
            let mut rows = Vec::new();
            for i in 0..DIM {
                for j in 0..DIM {
                    for k in 0..DIM {
                        let f = alg.f.get(i, j, k);
                        if f != 0.0 {
                            rows.push(StructureRow {
                                i: i + 1,
                                j: j + 1,
                                k: k + 1,
                                f,
                            });
                        }
                    }
                }
            }
            let generators: Vec<Value> = (0..DIM)
                .map(|i| {
                    let t = &alg.basis.t[i];
                    json!({
                        "index": i + 1,
                        "weight": alg.basis.weight[i],
                        "bits": format!("{:04b}", alg.basis.bits[i]),
                        "re": (0..4).map(|r| (0..4).map(|c| t[(r, c)].re).collect::<Vec<_>>()).collect::<Vec<_>>(),
                        "im": (0..4).map(|r| (0..4).map(|c| t[(r, c)].im).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let killing: Vec<Vec<f64>> = (0..DIM)
                .map(|r| (0..DIM).map(|c| alg.killing[(r, c)]).collect())
                .collect();
            emit(
                out,
                &Header::new("dump-algebra", None, json!({})),
                &rows,
                Some(json!({ "generators": generators, "killing": killing })),
            )
        }
    }
}

/// Parse `args`, run the command, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be >= 1");
            return 2;
        }
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    match pool.install(|| dispatch(&cli.command)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
