//! Ensemble verification suites. Trials run in parallel; per-trial checks
//! are merged by trial index so the report depends only on the seed.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::divergences::{corollary3_terms, relative_entropy, theta_divergence};
use crate::error::{Error, Result};
use crate::harness::classical::{classical_lemma1_oracle, classical_recovery_check, RECOVERY_TOL};
use crate::harness::ensemble::{
    full_rank_state, mixed_instance, pd_instance, random_pd_operator, random_probability, random_stochastic, trial_rng,
    DimRange,
};
use crate::harness::grid::{Grid, DEFAULT_GRID_POINTS};
use crate::harness::inequalities::{inequality_suite, InequalityTolerances};
use crate::harness::limits::{secant_limit_check, LimitQuantity, DEFAULT_H, LIMIT_TOL};
use crate::harness::report::{all_pass, Check};
use crate::harness::scans::{logconvexity_scan, monotonicity_scan, LogConvexCurve, MonotoneCurve, SCAN_TOL};
use crate::harness::theorem6::{theorem6_construction, theta_sweep};
use crate::harness::theorem9::{theorem9_check, G_AGREEMENT_TOL, INEQUALITY_TOL};
use crate::instance::ProblemInstance;
use crate::matcore::{real_matrix, Tolerances};
use crate::quantum::{random_state, DensityMatrix};
use crate::sampling::unit_vector;

pub const ORACLE_TOL: f64 = 1e-12;
pub const COMMUTING_KL: f64 = 0.143841;
pub const COMMUTING_KL_TOL: f64 = 1e-6;
/// Bound `D_θ, S_t ≤ D(A|B)` along the monotonicity grids.
pub const LIMIT_BOUND_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Logconvexity,
    Monotonicity,
    Limits,
    Inequalities,
    Theorem6,
    Theorem9,
    Classical,
    All,
}

impl Suite {
    pub const EACH: [Self; 7] = [
        Self::Logconvexity,
        Self::Monotonicity,
        Self::Limits,
        Self::Inequalities,
        Self::Theorem6,
        Self::Theorem9,
        Self::Classical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Logconvexity => "logconvexity",
            Self::Monotonicity => "monotonicity",
            Self::Limits => "limits",
            Self::Inequalities => "inequalities",
            Self::Theorem6 => "theorem6",
            Self::Theorem9 => "theorem9",
            Self::Classical => "classical",
            Self::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::EACH
            .into_iter()
            .chain([Self::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown suite {s:?}")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub trials: usize,
    pub seed: u64,
    pub dims: DimRange,
    pub grid_points: usize,
    pub h: Vec<f64>,
    pub tolerances: Tolerances,
    pub inequality: InequalityTolerances,
}

impl SuiteConfig {
    pub fn new(trials: usize, seed: u64, dims: DimRange) -> Self {
        Self {
            trials,
            seed,
            dims,
            grid_points: DEFAULT_GRID_POINTS,
            h: DEFAULT_H.to_vec(),
            tolerances: Tolerances::default(),
            inequality: InequalityTolerances::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Invalid("trials must be at least 1".into()));
        }
        if self.grid_points < 3 {
            return Err(Error::Invalid("grids need at least 3 points".into()));
        }
        self.tolerances.validate()
    }

    fn grid(&self, lo: f64, hi: f64) -> Grid {
        Grid::new(lo, hi, self.grid_points).expect("valid bounds")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub trials: usize,
    pub seed: u64,
    pub dims: DimRange,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// Worst case of one named check over all trials.
struct Aggregate {
    name: String,
    tolerance: f64,
    worst: Option<(usize, f64, f64)>,
    failures: usize,
    count: usize,
    first_failure: Option<(usize, String)>,
}

impl Aggregate {
    fn new(check: &Check) -> Self {
        Self {
            name: check.name.clone(),
            tolerance: check.tolerance,
            worst: None,
            failures: 0,
            count: 0,
            first_failure: None,
        }
    }

    fn add(&mut self, trial: usize, c: &Check) {
        self.count += 1;
        if !c.pass {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some((trial, c.detail.clone().unwrap_or_default()));
            }
        }
        if !c.slack.is_nan() && self.worst.is_none_or(|w| c.slack < w.2) {
            self.worst = Some((trial, c.value, c.slack));
        }
    }

    fn finish(self) -> Check {
        let (trial, value, slack) = self.worst.unwrap_or((0, f64::NAN, f64::INFINITY));
        let mut detail = format!("{}/{} trials failed; worst slack at trial {trial}", self.failures, self.count);
        if let Some((t, d)) = self.first_failure {
            if !d.is_empty() {
                detail.push_str(&format!("; first failure at trial {t}: {d}"));
            }
        }
        Check::flag(self.name, value, slack, self.tolerance, self.failures == 0).with_detail(detail)
    }
}

/// Runs `f` on every trial in parallel and aggregates checks by name.
fn aggregate_trials(trials: usize, f: impl Fn(usize) -> Vec<Check> + Sync) -> Vec<Check> {
    let per_trial: Vec<Vec<Check>> = (0..trials).into_par_iter().map(&f).collect();
    let mut aggs: Vec<Aggregate> = Vec::new();
    for (trial, checks) in per_trial.iter().enumerate() {
        for c in checks {
            let idx = match aggs.iter().position(|a| a.name == c.name) {
                Some(i) => i,
                None => {
                    aggs.push(Aggregate::new(c));
                    aggs.len() - 1
                }
            };
            aggs[idx].add(trial, c);
        }
    }
    aggs.into_iter().map(Aggregate::finish).collect()
}

fn scan_check(name: String, r: Result<crate::harness::scans::ScanReport>, tol: f64) -> Check {
    match r {
        Ok(s) => Check::flag(name, s.slack(), s.slack(), tol, s.pass()),
        Err(e) => Check::failed(name, tol, e.to_string()),
    }
}

pub fn logconvexity_trial(cfg: &SuiteConfig, trial: usize) -> Vec<Check> {
    let inst = pd_instance(cfg.seed, trial, cfg.dims);
    [LogConvexCurve::ThetaDivergence, LogConvexCurve::FTheta, LogConvexCurve::SandwichedF, LogConvexCurve::StatePower]
        .into_iter()
        .map(|c| {
            let (lo, hi) = if c == LogConvexCurve::SandwichedF { (0.5, 1.0) } else { (0.0, 1.0) };
            let r = logconvexity_scan(c, &inst, &cfg.grid(lo, hi), SCAN_TOL, &cfg.tolerances);
            scan_check(format!("logconvexity/{}", c.name()), r, SCAN_TOL)
        })
        .collect()
}

pub fn monotonicity_trial(cfg: &SuiteConfig, trial: usize) -> Vec<Check> {
    let inst = pd_instance(cfg.seed, trial, cfg.dims);
    let target = relative_entropy(&inst.a, &inst.b, &cfg.tolerances).map(|d| d.value);
    let mut out = Vec::new();
    for (c, lo) in [(MonotoneCurve::RenyiTheta, 0.0), (MonotoneCurve::SandwichedRenyi, 0.5), (MonotoneCurve::SecantFTheta, 0.0)] {
        let name = format!("monotonicity/{}", c.name());
        let r = monotonicity_scan(c, &inst, &cfg.grid(lo, 0.99), SCAN_TOL, &cfg.tolerances);
        if c != MonotoneCurve::SecantFTheta {
            let bound = format!("bounded-by-relative-entropy/{}", c.name());
            out.push(match (&r, &target) {
                (Ok(s), Ok(d)) => {
                    let excess = s.values.iter().fold(f64::NEG_INFINITY, |m, v| m.max(v - d));
                    Check::new(bound, excess, -excess, LIMIT_BOUND_TOL)
                }
                (Err(e), _) | (_, Err(e)) => Check::failed(bound, LIMIT_BOUND_TOL, e.to_string()),
            });
        }
        out.push(scan_check(name, r, SCAN_TOL));
    }
    out
}

pub fn limit_checks(inst: &ProblemInstance, quantities: &[LimitQuantity], h: &[f64], tolerances: &Tolerances) -> Vec<Check> {
    quantities
        .iter()
        .map(|&q| {
            let name = format!("limits/{}", q.name());
            match secant_limit_check(q, inst, h, LIMIT_TOL, tolerances) {
                Ok(r) => {
                    let mut failed = Vec::new();
                    if !r.increasing {
                        failed.push("not increasing");
                    }
                    if !r.below_target {
                        failed.push("exceeds target");
                    }
                    if !r.converging {
                        failed.push("not converging");
                    }
                    let c = Check::flag(name, r.max_excess, r.slack(), LIMIT_TOL, r.pass());
                    if failed.is_empty() {
                        c
                    } else {
                        c.with_detail(failed.join(", "))
                    }
                }
                Err(e) => Check::failed(name, LIMIT_TOL, e.to_string()),
            }
        })
        .collect()
}

pub fn limits_trial(cfg: &SuiteConfig, trial: usize) -> Vec<Check> {
    let inst = pd_instance(cfg.seed, trial, cfg.dims);
    limit_checks(&inst, &LimitQuantity::ALL, &cfg.h, &cfg.tolerances)
}

pub fn commuting_pair() -> ProblemInstance {
    let t = Tolerances::default();
    ProblemInstance::new(
        "commuting-pair",
        DensityMatrix::new(real_matrix(2, 2, &[0.5, 0.0, 0.0, 0.5]), &t).expect("state"),
        DensityMatrix::new(real_matrix(2, 2, &[0.75, 0.0, 0.0, 0.25]), &t).expect("state"),
        None,
    )
    .expect("same dimensions")
}

/// Limit checks and target value on the commuting pair `diag(1/2,1/2)`, `diag(3/4,1/4)`.
pub fn commuting_limit_checks(h: &[f64], tolerances: &Tolerances) -> Vec<Check> {
    let inst = commuting_pair();
    let mut out: Vec<Check> = limit_checks(
        &inst,
        &[LimitQuantity::RenyiTheta, LimitQuantity::LnFThetaSecant, LimitQuantity::SandwichedRenyi],
        h,
        tolerances,
    )
    .into_iter()
    .map(|c| Check { name: format!("commuting-pair/{}", c.name), ..c })
    .collect();
    out.push(match relative_entropy(&inst.a, &inst.b, tolerances) {
        Ok(d) => {
            let err = (d.value - COMMUTING_KL).abs();
            Check::new("commuting-pair/target", d.value, COMMUTING_KL_TOL - err, 0.0)
        }
        Err(e) => Check::failed("commuting-pair/target", 0.0, e.to_string()),
    });
    out
}

/// The trace-power gap and its Jensen refinement on an independent `(ρ, x)` with `ρ` of random rank.
pub fn corollary3_trial(seed: u64, trial: usize, dims: DimRange, tol: f64, tolerances: &Tolerances) -> Vec<Check> {
    let mut rng = trial_rng(seed, trial);
    let n = dims.sample(&mut rng);
    let rank = rng.random_range(1..=n);
    let rho = random_state(n, rank, rng.random()).expect("rank in range");
    let x = random_pd_operator(&mut rng, n);
    match corollary3_terms(&rho, &x, tolerances) {
        Ok(c) => vec![
            Check::new("corollary3/gap", c.gap(), c.gap(), tol),
            Check::new("corollary3/refines-jensen", c.rhs, c.rhs - c.jensen, tol),
        ],
        Err(e) => vec![
            Check::failed("corollary3/gap", tol, e.to_string()),
            Check::failed("corollary3/refines-jensen", tol, e.to_string()),
        ],
    }
}

pub fn inequalities_trial(cfg: &SuiteConfig, trial: usize) -> Vec<Check> {
    let inst = mixed_instance(cfg.seed, trial, cfg.dims);
    let mut out: Vec<Check> = inequality_suite(&inst, &cfg.inequality, &cfg.tolerances)
        .into_iter()
        .map(|c| Check { name: format!("inequalities/{}", c.name), ..c })
        .collect();
    out.extend(corollary3_trial(cfg.seed, trial, cfg.dims, cfg.inequality.corollary3, &cfg.tolerances));
    out
}

pub fn theorem6_checks(tolerances: &Tolerances) -> Vec<Check> {
    let mut out = Vec::new();
    for th in theta_sweep() {
        let name = format!("theorem6/theta={th:.2}");
        let expect = (th - 0.5).abs() > 1e-9;
        out.push(match theorem6_construction(th, tolerances) {
            Ok(Some(r)) => Check::flag(name, r.lhs, r.margin, 0.0, expect && r.violation),
            Ok(None) => Check::flag(name, f64::NAN, 0.0, 0.0, !expect).with_detail("no record"),
            Err(e) => Check::failed(name, 0.0, e.to_string()),
        });
    }
    out.push(match theorem6_construction(0.75, tolerances) {
        Ok(Some(r)) => {
            let err = (r.lhs - 0.62230).abs().max((r.rhs - 0.59460).abs());
            Check::new("theorem6/three-quarters-values", r.lhs, 1e-4 - err, 0.0)
                .with_detail(format!("unpinched {:.6}, pinched {:.6}", r.lhs, r.rhs))
        }
        _ => Check::failed("theorem6/three-quarters-values", 0.0, "no record at theta = 0.75"),
    });
    out
}

pub fn theorem9_trial(cfg: &SuiteConfig, trial: usize) -> Vec<Check> {
    let mut rng = trial_rng(cfg.seed, trial);
    let n = cfg.dims.sample(&mut rng);
    let b = full_rank_state(&mut rng, n);
    let x = unit_vector(&mut rng, n);
    match theorem9_check(&b, &x, &cfg.grid(0.0, 1.0), &cfg.tolerances) {
        Ok(r) => vec![
            Check::new("theorem9/inequality", r.rhs - r.lhs, r.inequality_slack, INEQUALITY_TOL),
            Check::new("theorem9/g-agreement", r.max_g_discrepancy, -r.max_g_discrepancy, G_AGREEMENT_TOL),
            Check::new("theorem9/g-logconvexity", r.scan.slack(), r.scan.slack(), SCAN_TOL),
        ],
        Err(e) => vec![Check::failed("theorem9/inequality", INEQUALITY_TOL, e.to_string())],
    }
}

/// Oracle equivalence on a simultaneously diagonal pair and a classical
/// recovery instance.
pub fn classical_trial(cfg: &SuiteConfig, trial: usize) -> Vec<Check> {
    let mut rng = trial_rng(cfg.seed, trial);
    let n = cfg.dims.sample(&mut rng);
    let a = random_probability(&mut rng, n);
    let b = random_probability(&mut rng, n);
    let grid = cfg.grid(0.0, 1.0);
    let mut out = Vec::new();
    let weights = vec![1.0 / n as f64; n];
    let x: Vec<f64> = a.iter().map(|v| v * n as f64).collect();
    let y: Vec<f64> = b.iter().map(|v| v * n as f64).collect();
    let da = DensityMatrix::new(diag(&a), &cfg.tolerances);
    let db = DensityMatrix::new(diag(&b), &cfg.tolerances);
    let equivalence = match (classical_lemma1_oracle(&weights, &x, &y, &grid), da, db) {
        (Ok(oracle), Ok(da), Ok(db)) => {
            let mut diff: f64 = 0.0;
            for (&th, &v) in oracle.points.iter().zip(&oracle.values) {
                match theta_divergence(&da, &db, th, &cfg.tolerances) {
                    Ok(q) => diff = diff.max((q - v).abs()),
                    Err(_) => diff = f64::INFINITY,
                }
            }
            out.push(Check::new("classical/lemma1-convexity", oracle.slack(), oracle.slack(), SCAN_TOL));
            Check::new("classical/oracle-equivalence", diff, -diff, ORACLE_TOL)
        }
        (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => Check::failed("classical/oracle-equivalence", ORACLE_TOL, e.to_string()),
    };
    out.push(equivalence);
    let p = random_probability(&mut rng, n);
    let q = random_probability(&mut rng, n);
    let rows = cfg.dims.sample(&mut rng);
    let t = random_stochastic(&mut rng, rows, n);
    out.push(match classical_recovery_check(&p, &q, &t) {
        Ok(r) => Check::new("classical/recovery", r.rhs - r.lhs, r.slack, RECOVERY_TOL),
        Err(e) => Check::failed("classical/recovery", RECOVERY_TOL, e.to_string()),
    });
    out
}

fn diag(d: &[f64]) -> crate::matcore::CMatrix {
    let n = d.len();
    let mut entries = vec![0.0; n * n];
    for (i, v) in d.iter().enumerate() {
        entries[i * n + i] = *v;
    }
    real_matrix(n, n, &entries)
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let checks = match suite {
        Suite::Logconvexity => aggregate_trials(cfg.trials, |i| logconvexity_trial(cfg, i)),
        Suite::Monotonicity => aggregate_trials(cfg.trials, |i| monotonicity_trial(cfg, i)),
        Suite::Limits => {
            let mut c = commuting_limit_checks(&cfg.h, &cfg.tolerances);
            c.extend(aggregate_trials(cfg.trials, |i| limits_trial(cfg, i)));
            c
        }
        Suite::Inequalities => aggregate_trials(cfg.trials, |i| inequalities_trial(cfg, i)),
        Suite::Theorem6 => theorem6_checks(&cfg.tolerances),
        Suite::Theorem9 => aggregate_trials(cfg.trials, |i| theorem9_trial(cfg, i)),
        Suite::Classical => aggregate_trials(cfg.trials, |i| classical_trial(cfg, i)),
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::EACH {
                all.extend(run_suite(s, cfg)?.checks);
            }
            all
        }
    };
    Ok(SuiteReport {
        suite: suite.name().to_string(),
        trials: cfg.trials,
        seed: cfg.seed,
        dims: cfg.dims,
        pass: all_pass(&checks),
        checks,
    })
}
