//! Command-line front end. [`execute`] parses a command line, runs it and
//! returns the exit code together with the JSON report.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use qdiv_core::divergences::{
    delta_tilde, f_theta, fidelity, relative_entropy, relative_entropy_difference, renyi_theta, sandwiched_f,
    sandwiched_renyi, theta_divergence, DivergenceValue,
};
use qdiv_core::harness::counterexample::{conjecture_search, reproduce_paper_counterexample, rotated_scan, Conjecture};
use qdiv_core::harness::ensemble::DimRange;
use qdiv_core::harness::report::{all_pass, Check};
use qdiv_core::harness::scans::{largest_drop, scan, Curve, SCAN_TOL};
use qdiv_core::harness::suites::{run_suite, Suite, SuiteConfig};
use qdiv_core::harness::{Grid, SearchConfig};
use qdiv_core::{Error, ProblemInstance, Tolerances};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qdiv", version, about = "Quantum divergences, recovery maps and inequality checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Slack tolerance for scans and search margins.
    #[arg(long, global = true, default_value_t = SCAN_TOL)]
    pub tol: f64,

    #[command(flatten)]
    pub tolerances: ToleranceArgs,
}

#[derive(Debug, Args)]
pub struct ToleranceArgs {
    #[arg(long = "tol-hermiticity", global = true)]
    pub hermiticity: Option<f64>,
    #[arg(long = "tol-recon", global = true)]
    pub recon: Option<f64>,
    #[arg(long = "tol-support-clip", global = true)]
    pub support_clip: Option<f64>,
    #[arg(long = "tol-trace", global = true)]
    pub trace: Option<f64>,
}

impl ToleranceArgs {
    pub fn resolve(&self) -> Result<Tolerances, Error> {
        let d = Tolerances::default();
        let t = Tolerances {
            hermiticity_tol: self.hermiticity.unwrap_or(d.hermiticity_tol),
            recon_tol: self.recon.unwrap_or(d.recon_tol),
            support_clip: self.support_clip.unwrap_or(d.support_clip),
            trace_tol: self.trace.unwrap_or(d.trace_tol),
        };
        t.validate()?;
        Ok(t)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one quantity on an instance.
    Compute {
        #[arg(long, value_enum)]
        quantity: Quantity,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        t: Option<f64>,
        /// Instance file, or `paper-example`.
        #[arg(long)]
        instance: PathBuf,
    },
    /// Scan a curve for log-convexity or monotonicity.
    Scan {
        #[arg(long)]
        curve: String,
        /// `lo:hi:count`.
        #[arg(long)]
        grid: String,
        #[arg(long)]
        instance: PathBuf,
    },
    /// Run a verification suite over a seeded ensemble.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Inclusive dimension range `a..b`.
        #[arg(long, default_value = "2..4")]
        dims: String,
    },
    /// Reproduce a built-in counterexample.
    Reproduce {
        /// Only `paper-example` is available.
        target: String,
    },
    /// Randomized search for violations of a conjectured inequality.
    Search {
        #[arg(long, default_value = "eq4")]
        conjecture: String,
        #[arg(long, default_value_t = 300)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "2..4")]
        dims: String,
        /// Evaluate the built-in counterexample alongside the random trials.
        #[arg(long)]
        include_paper_instance: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    RelativeEntropy,
    ThetaDivergence,
    Renyi,
    Fidelity,
    FTheta,
    SandwichedF,
    SandwichedRenyi,
    DeltaTilde,
    /// `D(A|B) − D(φ(A)|φ(B))`.
    Red,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: Vec<String>,
    pub tolerances: Tolerances,
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
    pub data: Value,
    pub pass: bool,
    pub wall_time: f64,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// Result of one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub report: Option<Report>,
    /// Diagnostic or help text for standard error / standard output.
    pub message: Option<String>,
}

impl Outcome {
    fn invalid(message: impl Into<String>) -> Self {
        Self { code: EXIT_INVALID, report: None, message: Some(message.into()) }
    }
}

struct Body {
    seed: Option<u64>,
    checks: Vec<Check>,
    data: Value,
}

/// Parses and runs `args` (including the program name). Nothing is printed;
/// writing `--out` files is the only side effect.
pub fn execute<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_PASS };
            return Outcome { code, report: None, message: Some(e.to_string()) };
        }
    };
    let tolerances = match cli.tolerances.resolve() {
        Ok(t) => t,
        Err(e) => return Outcome::invalid(format!("error: {e}")),
    };
    if !(cli.tol.is_finite() && cli.tol >= 0.0) {
        return Outcome::invalid(format!("error: --tol must be finite and >= 0, got {}", cli.tol));
    }
    let start = Instant::now();
    let body = match run(&cli.command, cli.tol, &tolerances) {
        Ok(b) => b,
        Err(e) => return Outcome::invalid(format!("error: {e}")),
    };
    let pass = all_pass(&body.checks);
    let report = Report {
        command: args.iter().skip(1).cloned().collect(),
        tolerances,
        tol: cli.tol,
        seed: body.seed,
        checks: body.checks,
        data: body.data,
        pass,
        wall_time: start.elapsed().as_secs_f64(),
    };
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            return Outcome::invalid(format!("error: cannot write {}: {e}", path.display()));
        }
    }
    Outcome { code: if pass { EXIT_PASS } else { EXIT_VIOLATIONS }, report: Some(report), message: None }
}

fn run(cmd: &Command, tol: f64, tolerances: &Tolerances) -> Result<Body, Error> {
    match cmd {
        Command::Compute { quantity, theta, t, instance } => {
            let inst = ProblemInstance::load(instance, tolerances)?;
            compute(&inst, *quantity, *theta, *t, tolerances)
        }
        Command::Scan { curve, grid, instance } => {
            let curve: Curve = curve.parse()?;
            let grid: Grid = grid.parse()?;
            let inst = ProblemInstance::load(instance, tolerances)?;
            let report = scan(curve, &inst, &grid, tol, tolerances)?;
            let mut check = Check::new(format!("scan/{}", curve.name()), report.slack(), report.slack(), tol);
            if let Some(v) = &report.violation {
                check = check.with_detail(format!(
                    "violation at {} (index {}), slack {:e}{}",
                    v.parameter,
                    v.index,
                    v.slack,
                    if v.expected { ", a known finding" } else { "" }
                ));
            }
            let (drop, from, to) = largest_drop(&report);
            let data = json!({ "instance": inst.label, "scan": report, "largest_drop": { "amount": drop, "from": from, "to": to } });
            Ok(Body { seed: None, checks: vec![check], data })
        }
        Command::Verify { suite, trials, seed, dims } => {
            let suite: Suite = suite.parse()?;
            let dims: DimRange = dims.parse()?;
            let cfg = SuiteConfig { tolerances: *tolerances, ..SuiteConfig::new(*trials, *seed, dims) };
            let report = run_suite(suite, &cfg)?;
            let data = json!({ "suite": report.suite, "trials": report.trials, "dims": report.dims.to_string() });
            Ok(Body { seed: Some(*seed), checks: report.checks, data })
        }
        Command::Reproduce { target } => {
            if target != "paper-example" {
                return Err(Error::Invalid(format!("unknown reproduction target {target:?}")));
            }
            reproduce(tol, tolerances)
        }
        Command::Search { conjecture, trials, seed, dims, include_paper_instance } => {
            let conjecture: Conjecture = conjecture.parse()?;
            let cfg = SearchConfig {
                conjecture,
                tolerance: tol,
                include_paper_instance: *include_paper_instance,
                ..SearchConfig::new(*trials, dims.parse()?, *seed)
            };
            let outcome = conjecture_search(&cfg, tolerances)?;
            let n = outcome.records.len();
            let check = Check::flag("search/eq4", n as f64, -outcome.max_margin, tol, n == 0)
                .with_detail(format!("{n} violations in {} evaluated instances", outcome.evaluated));
            let data = json!({ "config": cfg, "outcome": outcome });
            Ok(Body { seed: Some(*seed), checks: vec![check], data })
        }
    }
}

fn compute(
    inst: &ProblemInstance,
    quantity: Quantity,
    theta: Option<f64>,
    t: Option<f64>,
    tol: &Tolerances,
) -> Result<Body, Error> {
    let need = |name: &str, v: Option<f64>| v.ok_or_else(|| Error::Invalid(format!("--{name} is required for {quantity:?}")));
    let (a, b) = (&inst.a, &inst.b);
    let phi = inst.channel_or_identity();
    let (parameter, value): (Option<f64>, DivergenceValue) = match quantity {
        Quantity::RelativeEntropy => (None, relative_entropy(a, b, tol)?),
        Quantity::ThetaDivergence => {
            let th = need("theta", theta)?;
            (Some(th), DivergenceValue::finite(theta_divergence(a, b, th, tol)?))
        }
        Quantity::Renyi => {
            let th = need("theta", theta)?;
            (Some(th), renyi_theta(a, b, th, tol)?)
        }
        Quantity::Fidelity => (None, DivergenceValue::finite(fidelity(a, b, tol)?)),
        Quantity::FTheta => {
            let th = need("theta", theta)?;
            (Some(th), DivergenceValue::finite(f_theta(a, b, th, tol)?))
        }
        Quantity::SandwichedF => {
            let t = need("t", t)?;
            (Some(t), DivergenceValue::finite(sandwiched_f(a, b, t, tol)?))
        }
        Quantity::SandwichedRenyi => {
            let t = need("t", t)?;
            (Some(t), sandwiched_renyi(a, b, t, tol)?)
        }
        Quantity::DeltaTilde => {
            let t = need("t", t)?;
            (Some(t), delta_tilde(a, b, &phi, t, tol)?)
        }
        Quantity::Red => (None, relative_entropy_difference(a, b, &phi, tol)?),
    };
    let data = json!({
        "instance": inst.label,
        "quantity": quantity,
        "parameter": parameter,
        "result": value,
    });
    Ok(Body { seed: None, checks: Vec::new(), data })
}

fn reproduce(tol: f64, tolerances: &Tolerances) -> Result<Body, Error> {
    let record = reproduce_paper_counterexample(tolerances)?;
    let inst = ProblemInstance::paper_example();
    let rotated = rotated_scan(&inst, &Grid::new(-5.0, 5.0, 1001)?, tol, tolerances)?;
    let check = Check::new("eq4-inequality", record.lhs, record.rhs - record.lhs, tol)
        .with_detail(format!("lhs {:.6} exceeds rhs {:.6} by {:.6}", record.lhs, record.rhs, record.margin));
    let data = json!({
        "rhs": record.rhs,
        "lhs": record.lhs,
        "margin": record.margin,
        "violation": record.violation,
        "record": record,
        "rotated": {
            "argmax_t": rotated.argmax_t,
            "max_fidelity": rotated.max_fidelity,
            "lhs_at_max": rotated.lhs_at_max,
            "witness": rotated.witness,
            "grid": rotated.grid,
        },
    });
    Ok(Body { seed: None, checks: vec![check], data })
}
