//! Acceptance run: one pass/fail line per criterion. Exits non-zero if any
//! criterion fails.

use std::time::{Duration, Instant};

use qdiv_cli::{execute, EXIT_VIOLATIONS};
use qdiv_core::harness::ensemble::DimRange;
use qdiv_core::harness::limits::{secant_limit_check, LimitQuantity, LIMIT_TOL};
use qdiv_core::harness::report::{all_pass, Check};
use qdiv_core::harness::suites::{
    commuting_limit_checks, corollary3_trial, limits_trial, run_suite, Suite, SuiteConfig,
};
use qdiv_core::{ProblemInstance, Tolerances};

const SEED: u64 = 20240601;
const AC4_H: [f64; 3] = [1e-1, 1e-2, 1e-3];

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

struct Outcome {
    pass: bool,
    summary: String,
    notes: Vec<String>,
}

fn failures(checks: &[Check]) -> Vec<String> {
    checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{}: slack {:e} ({})", c.name, c.slack, c.detail.clone().unwrap_or_default()))
        .collect()
}

fn suite_outcome(suite: Suite, cfg: &SuiteConfig, budget: Option<Duration>) -> Outcome {
    let start = Instant::now();
    let report = run_suite(suite, cfg).expect("suite runs");
    let elapsed = start.elapsed();
    let in_time = budget.is_none_or(|b| elapsed < b);
    let worst = report.checks.iter().map(|c| c.slack).fold(f64::INFINITY, f64::min);
    let mut notes = failures(&report.checks);
    if !in_time {
        notes.push(format!("runtime {elapsed:.2?} over budget {:?}", budget.unwrap()));
    }
    Outcome {
        pass: report.pass && in_time,
        summary: format!(
            "{} checks over {} trials, worst slack {worst:.3e}, {elapsed:.2?}",
            report.checks.len(),
            report.trials
        ),
        notes,
    }
}

fn dims(lo: usize, hi: usize) -> DimRange {
    DimRange::new(lo, hi).unwrap()
}

fn ac1_reproduction() -> Outcome {
    let start = Instant::now();
    let out = execute(["qdiv", "reproduce", "paper-example"]);
    let elapsed = start.elapsed();
    let report = out.report.expect("report");
    let rhs = report.data["rhs"].as_f64().unwrap();
    let lhs = report.data["lhs"].as_f64().unwrap();
    let violation = report.data["violation"].as_bool().unwrap();
    let pass = (rhs - 1.5191).abs() <= 2e-3
        && (lhs - 1.5349).abs() <= 2e-3
        && violation
        && out.code == EXIT_VIOLATIONS
        && elapsed < Duration::from_secs(1);
    Outcome {
        pass,
        summary: format!("rhs {rhs:.6}, lhs {lhs:.6}, violation {violation}, exit {}, {elapsed:.2?}", out.code),
        notes: Vec::new(),
    }
}

fn ac4_limits() -> Outcome {
    let tol = Tolerances::default();
    let mut checks = commuting_limit_checks(&AC4_H, &tol);
    let cfg = SuiteConfig { h: AC4_H.to_vec(), ..SuiteConfig::new(200, SEED, dims(2, 6)) };
    let mut per_quantity = vec![0usize; 4];
    for trial in 0..cfg.trials {
        for (i, c) in limits_trial(&cfg, trial).into_iter().enumerate() {
            if !c.pass {
                per_quantity[i] += 1;
                checks.push(Check { name: format!("trial {trial} {}", c.name), ..c });
            }
        }
    }
    let paper = ProblemInstance::paper_example();
    let near = secant_limit_check(LimitQuantity::DeltaTilde, &paper, &[1e-3], LIMIT_TOL, &tol).unwrap();
    let near_ok = (near.values[0] - 1.5191).abs() <= 0.01;
    let full = secant_limit_check(LimitQuantity::DeltaTilde, &paper, &AC4_H, LIMIT_TOL, &tol).unwrap();
    let commuting = checks.iter().find(|c| c.name == "commuting-pair/target").unwrap().value;
    let mut notes = failures(&checks);
    notes.push(format!(
        "paper example delta-tilde at h = 1e-1, 1e-2, 1e-3: {:?} against target {:.7}; increasing {}, below target {}",
        full.values, full.target, full.increasing, full.below_target
    ));
    Outcome {
        pass: all_pass(&checks) && near_ok,
        summary: format!(
            "commuting target {commuting:.7}; 200 PD instances, failures per quantity (renyi, lnF secant, sandwiched, delta-tilde) {per_quantity:?}; paper delta-tilde(0.999) = {:.5}",
            near.values[0]
        ),
        notes,
    }
}

fn ac5_theorem6() -> Outcome {
    let cfg = SuiteConfig::new(1, SEED, dims(2, 2));
    let report = run_suite(Suite::Theorem6, &cfg).unwrap();
    let values = report.checks.last().unwrap().detail.clone().unwrap_or_default();
    Outcome {
        pass: report.pass,
        summary: format!("{} thetas checked; theta = 0.75: {values}", report.checks.len() - 1),
        notes: failures(&report.checks),
    }
}

fn ac8_corollary3() -> Outcome {
    let tol = Tolerances::default();
    let checks: Vec<Check> = (0..200).flat_map(|i| corollary3_trial(SEED, i, dims(2, 6), 1e-10, &tol)).collect();
    let worst_gap = checks.iter().filter(|c| c.name == "corollary3/gap").map(|c| c.slack).fold(f64::INFINITY, f64::min);
    let worst_ref = checks
        .iter()
        .filter(|c| c.name == "corollary3/refines-jensen")
        .map(|c| c.slack)
        .fold(f64::INFINITY, f64::min);
    Outcome {
        pass: all_pass(&checks),
        summary: format!("200 instances, min gap {worst_gap:.3e}, min refinement margin {worst_ref:.3e}"),
        notes: failures(&checks),
    }
}

fn ac10_delta_tilde_scan() -> Outcome {
    let out = execute(["qdiv", "scan", "--curve", "delta-tilde", "--grid", "0.5:0.999:500", "--instance", "paper-example"]);
    let report = out.report.expect("report");
    let scan = &report.data["scan"];
    let values: Vec<f64> = scan["values"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    let (first, last) = (values[0], values[values.len() - 1]);
    let violated = scan["monotone"] == serde_json::json!(false);
    Outcome {
        pass: violated && first - last >= 0.01 && out.code == EXIT_VIOLATIONS,
        summary: format!(
            "monotonicity violated {violated}; value(0.5) = {first:.6}, value(0.999) = {last:.6}, drop {:.6}",
            first - last
        ),
        notes: Vec::new(),
    }
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("built-in counterexample reproduction", Box::new(ac1_reproduction)),
        (
            "log-convexity suites",
            Box::new(|| {
                suite_outcome(Suite::Logconvexity, &SuiteConfig::new(200, SEED, dims(2, 6)), Some(Duration::from_secs(60)))
            }),
        ),
        ("monotonicity", Box::new(|| suite_outcome(Suite::Monotonicity, &SuiteConfig::new(200, SEED, dims(2, 6)), None))),
        ("limit checks", Box::new(ac4_limits)),
        ("theorem 6 dichotomy", Box::new(ac5_theorem6)),
        (
            "inequality suites",
            Box::new(|| {
                suite_outcome(Suite::Inequalities, &SuiteConfig::new(500, SEED, dims(2, 4)), Some(Duration::from_secs(120)))
            }),
        ),
        ("theorem 9", Box::new(|| suite_outcome(Suite::Theorem9, &SuiteConfig::new(100, SEED, dims(2, 4)), None))),
        ("corollary 3", Box::new(ac8_corollary3)),
        ("oracle equivalence", Box::new(|| suite_outcome(Suite::Classical, &SuiteConfig::new(1000, SEED, dims(2, 5)), None))),
        ("delta-tilde non-monotonicity", Box::new(ac10_delta_tilde_scan)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!("[{}] {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.summary);
        for n in o.notes.iter().take(10) {
            println!("        {n}");
        }
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
