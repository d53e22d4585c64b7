//! Grid scans for log-convexity (second differences of `ln f`) and
//! monotonicity (forward differences).

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::divergences::{
    f_theta, recoverability_probe, renyi_theta, sandwiched_f, sandwiched_renyi, state_power, theta_divergence,
    DivergenceValue,
};
use crate::error::{Error, Result};
use crate::harness::grid::Grid;
use crate::instance::ProblemInstance;
use crate::matcore::Tolerances;

pub const SCAN_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LogConvexCurve {
    ThetaDivergence,
    FTheta,
    SandwichedF,
    /// The dilation norm whose log-convexity would imply monotonicity of `Δ̃_t`.
    Eq12Probe,
    /// `θ ↦ tr(A B^θ)`.
    StatePower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonotoneCurve {
    RenyiTheta,
    SandwichedRenyi,
    DeltaTilde,
    /// `θ ↦ ln F_θ(A|B) / (θ − 1)`.
    SecantFTheta,
}

/// Either family, for commands that accept any curve name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Curve {
    LogConvex(LogConvexCurve),
    Monotone(MonotoneCurve),
}

impl LogConvexCurve {
    pub const ALL: [Self; 5] = [Self::ThetaDivergence, Self::FTheta, Self::SandwichedF, Self::Eq12Probe, Self::StatePower];

    pub fn name(self) -> &'static str {
        match self {
            Self::ThetaDivergence => "theta-divergence",
            Self::FTheta => "f-theta",
            Self::SandwichedF => "sandwiched-f",
            Self::Eq12Probe => "eq12-probe",
            Self::StatePower => "state-power",
        }
    }

    pub fn domain(self) -> (f64, f64) {
        match self {
            Self::SandwichedF => (0.5, 1.0),
            Self::StatePower => (f64::NEG_INFINITY, f64::INFINITY),
            _ => (0.0, 1.0),
        }
    }

    /// Whether a failed scan is a known finding rather than a defect.
    pub fn violation_expected(self) -> bool {
        matches!(self, Self::Eq12Probe)
    }

    pub fn evaluate(self, inst: &ProblemInstance, x: f64, tol: &Tolerances) -> Result<f64> {
        match self {
            Self::ThetaDivergence => theta_divergence(&inst.a, &inst.b, x, tol),
            Self::FTheta => f_theta(&inst.a, &inst.b, x, tol),
            Self::SandwichedF => sandwiched_f(&inst.a, &inst.b, x, tol),
            Self::Eq12Probe => recoverability_probe(&inst.a, &inst.b, &inst.channel_or_identity(), x, tol),
            Self::StatePower => state_power(&inst.a, inst.b.hermitian(), x, tol),
        }
    }
}

impl MonotoneCurve {
    pub const ALL: [Self; 4] = [Self::RenyiTheta, Self::SandwichedRenyi, Self::DeltaTilde, Self::SecantFTheta];

    pub fn name(self) -> &'static str {
        match self {
            Self::RenyiTheta => "renyi-theta",
            Self::SandwichedRenyi => "sandwiched-renyi",
            Self::DeltaTilde => "delta-tilde",
            Self::SecantFTheta => "secant-f-theta",
        }
    }

    /// Closed-open domain `[lo, 1)`.
    pub fn lower_bound(self) -> f64 {
        match self {
            Self::RenyiTheta | Self::SecantFTheta => 0.0,
            Self::SandwichedRenyi => f64::MIN_POSITIVE,
            Self::DeltaTilde => 0.5,
        }
    }

    pub fn evaluate(self, inst: &ProblemInstance, x: f64, tol: &Tolerances) -> Result<f64> {
        let v = match self {
            Self::RenyiTheta => renyi_theta(&inst.a, &inst.b, x, tol)?,
            Self::SandwichedRenyi => sandwiched_renyi(&inst.a, &inst.b, x, tol)?,
            Self::DeltaTilde => crate::divergences::delta_tilde(&inst.a, &inst.b, &inst.channel_or_identity(), x, tol)?,
            Self::SecantFTheta => {
                let f = f_theta(&inst.a, &inst.b, x, tol)?;
                if f > 0.0 {
                    DivergenceValue::finite(f.ln() / (x - 1.0))
                } else {
                    DivergenceValue::infinite()
                }
            }
        };
        v.get().ok_or_else(|| Error::Domain(format!("{} is infinite", self.name())))
    }
}

impl Curve {
    pub fn name(self) -> &'static str {
        match self {
            Self::LogConvex(c) => c.name(),
            Self::Monotone(c) => c.name(),
        }
    }
}

impl FromStr for Curve {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.replace('_', "-");
        LogConvexCurve::ALL
            .iter()
            .find(|c| c.name() == key)
            .map(|&c| Self::LogConvex(c))
            .or_else(|| MonotoneCurve::ALL.iter().find(|c| c.name() == key).map(|&c| Self::Monotone(c)))
            .ok_or_else(|| Error::Invalid(format!("unknown curve {s:?}")))
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Location of the most negative slack when it exceeds the tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub index: usize,
    pub parameter: f64,
    pub slack: f64,
    /// True for findings that contradict no theorem.
    pub expected: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub curve: String,
    pub grid: Grid,
    pub points: Vec<f64>,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_logconvexity_slack: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_monotonicity_slack: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub logconvex: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monotone: Option<bool>,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<Violation>,
}

impl ScanReport {
    pub fn pass(&self) -> bool {
        self.logconvex.unwrap_or(true) && self.monotone.unwrap_or(true)
    }

    /// The slack of whichever property was scanned.
    pub fn slack(&self) -> f64 {
        self.min_logconvexity_slack.or(self.min_monotonicity_slack).unwrap_or(f64::INFINITY)
    }
}

/// Evaluates `f` at every grid point in parallel, keeping grid order.
pub fn evaluate_on_grid(points: &[f64], f: impl Fn(f64) -> Result<f64> + Sync) -> Result<Vec<f64>> {
    points
        .par_iter()
        .map(|&x| f(x).and_then(|v| if v.is_finite() { Ok(v) } else { Err(Error::NonFinite) }))
        .collect::<Vec<_>>()
        .into_iter()
        .zip(points)
        .map(|(r, &x)| r.map_err(|e| Error::Evaluation { at: x, source: Box::new(e) }))
        .collect()
}

/// `min_i ln f(x_{i−1}) + ln f(x_{i+1}) − 2 ln f(x_i)` and its index.
pub fn min_log_second_difference(points: &[f64], values: &[f64]) -> Result<(f64, usize)> {
    if let Some(i) = values.iter().position(|&v| !(v > 0.0)) {
        return Err(Error::Evaluation {
            at: points[i],
            source: Box::new(Error::Domain(format!("value {} is not positive", values[i]))),
        });
    }
    let logs: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    Ok(min_second_difference(&logs))
}

pub fn min_second_difference(ys: &[f64]) -> (f64, usize) {
    (1..ys.len() - 1)
        .map(|i| (ys[i - 1] + ys[i + 1] - 2.0 * ys[i], i))
        .fold((f64::INFINITY, 0), |acc, x| if x.0 < acc.0 { x } else { acc })
}

pub fn min_forward_difference(ys: &[f64]) -> (f64, usize) {
    (0..ys.len() - 1)
        .map(|i| (ys[i + 1] - ys[i], i + 1))
        .fold((f64::INFINITY, 0), |acc, x| if x.0 < acc.0 { x } else { acc })
}

pub fn logconvexity_scan(
    curve: LogConvexCurve,
    inst: &ProblemInstance,
    grid: &Grid,
    tol: f64,
    tolerances: &Tolerances,
) -> Result<ScanReport> {
    let (lo, hi) = curve.domain();
    if !grid.within(lo, hi) {
        return Err(Error::Domain(format!("grid {grid} outside the {} domain [{lo}, {hi}]", curve.name())));
    }
    let points = grid.points();
    let values = evaluate_on_grid(&points, |x| curve.evaluate(inst, x, tolerances))?;
    logconvexity_report(curve.name(), *grid, points, values, tol, curve.violation_expected())
}

/// Builds a log-convexity report from precomputed values.
pub fn logconvexity_report(
    name: &str,
    grid: Grid,
    points: Vec<f64>,
    values: Vec<f64>,
    tol: f64,
    expected: bool,
) -> Result<ScanReport> {
    let (slack, index) = min_log_second_difference(&points, &values)?;
    let pass = slack >= -tol;
    let violation = (!pass).then(|| Violation { index, parameter: points[index], slack, expected });
    Ok(ScanReport {
        curve: name.to_string(),
        grid,
        points,
        values,
        min_logconvexity_slack: Some(slack),
        min_monotonicity_slack: None,
        logconvex: Some(pass),
        monotone: None,
        tolerance: tol,
        violation,
    })
}

pub fn monotonicity_scan(
    curve: MonotoneCurve,
    inst: &ProblemInstance,
    grid: &Grid,
    tol: f64,
    tolerances: &Tolerances,
) -> Result<ScanReport> {
    if grid.lo < curve.lower_bound() || grid.hi >= 1.0 {
        return Err(Error::Domain(format!(
            "grid {grid} outside the {} domain [{}, 1)",
            curve.name(),
            curve.lower_bound()
        )));
    }
    let points = grid.points();
    let values = evaluate_on_grid(&points, |x| curve.evaluate(inst, x, tolerances))?;
    let (slack, index) = min_forward_difference(&values);
    let pass = slack >= -tol;
    let violation = (!pass).then(|| Violation {
        index,
        parameter: points[index],
        slack,
        expected: curve == MonotoneCurve::DeltaTilde,
    });
    Ok(ScanReport {
        curve: curve.name().to_string(),
        grid: *grid,
        points,
        values,
        min_logconvexity_slack: None,
        min_monotonicity_slack: Some(slack),
        logconvex: None,
        monotone: Some(pass),
        tolerance: tol,
        violation,
    })
}

pub fn scan(curve: Curve, inst: &ProblemInstance, grid: &Grid, tol: f64, tolerances: &Tolerances) -> Result<ScanReport> {
    match curve {
        Curve::LogConvex(c) => logconvexity_scan(c, inst, grid, tol, tolerances),
        Curve::Monotone(c) => monotonicity_scan(c, inst, grid, tol, tolerances),
    }
}

/// Largest drop `max_{i<j} f(x_i) − f(x_j)` along a scan, with its endpoints.
pub fn largest_drop(report: &ScanReport) -> (f64, f64, f64) {
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    let mut peak = (f64::NEG_INFINITY, 0.0);
    for (&x, &v) in report.points.iter().zip(&report.values) {
        if v > peak.0 {
            peak = (v, x);
        }
        if peak.0 - v > best.0 {
            best = (peak.0 - v, peak.1, x);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::real_matrix;
    use crate::quantum::DensityMatrix;

    fn commuting() -> ProblemInstance {
        let t = Tolerances::default();
        ProblemInstance::new(
            "commuting",
            DensityMatrix::new(real_matrix(2, 2, &[0.5, 0.0, 0.0, 0.5]), &t).unwrap(),
            DensityMatrix::new(real_matrix(2, 2, &[0.75, 0.0, 0.0, 0.25]), &t).unwrap(),
            None,
        )
        .unwrap()
    }

    #[test]
    fn equal_pair_is_flat() {
        let p = ProblemInstance::paper_example();
        let inst = ProblemInstance::new("eq", p.b.clone(), p.b.clone(), None).unwrap();
        let g = Grid::new(0.0, 1.0, 101).unwrap();
        let r = logconvexity_scan(LogConvexCurve::ThetaDivergence, &inst, &g, SCAN_TOL, &Tolerances::default()).unwrap();
        assert!(r.pass());
        assert!(r.min_logconvexity_slack.unwrap().abs() < 1e-12);
        let m = monotonicity_scan(MonotoneCurve::RenyiTheta, &inst, &Grid::new(0.0, 0.99, 100).unwrap(), SCAN_TOL, &Tolerances::default())
            .unwrap();
        assert!(m.pass());
        assert!(m.values.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn commuting_theta_divergence_is_log_convex() {
        let g = Grid::new(0.0, 1.0, 101).unwrap();
        let r = logconvexity_scan(LogConvexCurve::ThetaDivergence, &commuting(), &g, SCAN_TOL, &Tolerances::default()).unwrap();
        assert!(r.pass());
        assert!(r.min_logconvexity_slack.unwrap() >= 0.0);
    }

    #[test]
    fn eq12_probe_fails_on_paper_example() {
        let g = Grid::new(0.0, 1.0, 101).unwrap();
        let r = logconvexity_scan(LogConvexCurve::Eq12Probe, &ProblemInstance::paper_example(), &g, SCAN_TOL, &Tolerances::default())
            .unwrap();
        let v = r.violation.expect("log-convexity fails");
        assert!(v.expected);
        assert!(v.slack < -1e-6);
    }

    #[test]
    fn delta_tilde_not_monotone_on_paper_example() {
        let g = Grid::new(0.5, 0.999, 500).unwrap();
        let r = monotonicity_scan(MonotoneCurve::DeltaTilde, &ProblemInstance::paper_example(), &g, SCAN_TOL, &Tolerances::default())
            .unwrap();
        assert!(!r.pass());
        assert!((r.values[0] - 1.5349).abs() < 1e-3);
        assert!((r.values[r.values.len() - 1] - 1.5191).abs() < 1e-3);
        let (drop, from, _) = largest_drop(&r);
        assert!(drop > 0.01);
        assert_eq!(from, 0.5);
    }

    #[test]
    fn domain_and_name_errors() {
        let inst = commuting();
        let t = Tolerances::default();
        let g = Grid::new(0.0, 1.0, 11).unwrap();
        assert!(matches!(logconvexity_scan(LogConvexCurve::SandwichedF, &inst, &g, SCAN_TOL, &t), Err(Error::Domain(_))));
        assert!(matches!(monotonicity_scan(MonotoneCurve::RenyiTheta, &inst, &g, SCAN_TOL, &t), Err(Error::Domain(_))));
        assert!("f_theta".parse::<Curve>().is_ok());
        assert!("nope".parse::<Curve>().is_err());
    }

    #[test]
    fn evaluation_errors_carry_the_grid_point() {
        let pts = [0.0, 0.5, 1.0];
        let err = evaluate_on_grid(&pts, |x| if x > 0.7 { Err(Error::NonFinite) } else { Ok(1.0) }).unwrap_err();
        assert!(matches!(err, Error::Evaluation { at, .. } if at == 1.0));
    }
}
