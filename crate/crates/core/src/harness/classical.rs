//! Scalar oracles for the commuting case.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::grid::Grid;
use crate::harness::scans::{logconvexity_report, ScanReport, SCAN_TOL};

pub const DISTRIBUTION_TOL: f64 = 1e-12;
pub const RECOVERY_TOL: f64 = 1e-9;

fn check_distribution(name: &str, p: &[f64]) -> Result<()> {
    if p.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::Invalid(format!("{name} has negative or non-finite entries")));
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > DISTRIBUTION_TOL {
        return Err(Error::Invalid(format!("{name} sums to {s}")));
    }
    Ok(())
}

/// `ln Σ wᵢ Xᵢ^θ Yᵢ^{1−θ}` on the grid with its convexity report. The scan's
/// values are the sums themselves, so they compare directly with
/// `tr(A^θ B^{1−θ})`.
pub fn classical_lemma1_oracle(weights: &[f64], x: &[f64], y: &[f64], grid: &Grid) -> Result<ScanReport> {
    check_distribution("weights", weights)?;
    if x.len() != weights.len() || y.len() != weights.len() {
        return Err(Error::DimensionMismatch("weights, X and Y must have equal length".into()));
    }
    if x.iter().chain(y).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::Invalid("X and Y must be strictly positive".into()));
    }
    let points = grid.points();
    let values = points.iter().map(|&th| lemma1_sum(weights, x, y, th)).collect();
    logconvexity_report("lemma1-oracle", *grid, points, values, SCAN_TOL, false)
}

pub fn lemma1_sum(weights: &[f64], x: &[f64], y: &[f64], theta: f64) -> f64 {
    weights
        .iter()
        .zip(x.iter().zip(y))
        .map(|(w, (a, b))| w * a.powf(theta) * b.powf(1.0 - theta))
        .sum()
}

/// `Σ pᵢ ln(pᵢ/qᵢ)` with `0 ln 0 = 0`.
pub fn kl(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).filter(|(a, _)| **a > 0.0).map(|(a, b)| a * (a / b).ln()).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalRecoveryRecord {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
}

/// Bayes recovery `R(y)ᵢ = qᵢ Σⱼ Tⱼᵢ yⱼ/(Tq)ⱼ` and the inequality
/// `−2 ln Σᵢ √(pᵢ R(Tp)ᵢ) ≤ KL(p‖q) − KL(Tp‖Tq)`. `T` is column-stochastic.
pub fn classical_recovery_check(p: &[f64], q: &[f64], t: &DMatrix<f64>) -> Result<ClassicalRecoveryRecord> {
    check_distribution("p", p)?;
    check_distribution("q", q)?;
    let n = p.len();
    if q.len() != n || t.ncols() != n {
        return Err(Error::DimensionMismatch(format!("p, q and T columns must have length {n}")));
    }
    if q.iter().any(|&v| v <= 0.0) {
        return Err(Error::Invalid("q must be strictly positive".into()));
    }
    if t.iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(Error::Invalid("T must be entrywise non-negative".into()));
    }
    for j in 0..n {
        let s = t.column(j).sum();
        if (s - 1.0).abs() > DISTRIBUTION_TOL * 10.0 {
            return Err(Error::Invalid(format!("column {j} of T sums to {s}")));
        }
    }
    let pv = nalgebra::DVector::from_column_slice(p);
    let qv = nalgebra::DVector::from_column_slice(q);
    let tp = t * &pv;
    let tq = t * &qv;
    if tq.iter().any(|&v| v <= 0.0) {
        return Err(Error::Invalid("Tq must be strictly positive".into()));
    }
    let ratio = tp.component_div(&tq);
    let recovered = t.transpose() * ratio;
    let affinity: f64 = (0..n).map(|i| (p[i] * q[i] * recovered[i]).max(0.0).sqrt()).sum();
    let lhs = -2.0 * affinity.ln();
    let rhs = kl(p, q) - kl(tp.as_slice(), tq.as_slice());
    let slack = rhs - lhs;
    Ok(ClassicalRecoveryRecord { lhs, rhs, slack, pass: slack >= -RECOVERY_TOL })
}
