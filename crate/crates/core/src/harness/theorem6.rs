//! Witnesses that `F_θ` fails to increase under the diagonal pinching of
//! `M₂` for every `θ ≠ 1/2`.

use crate::error::{Error, Result};
use crate::harness::counterexample::{pinching_sides, CounterexampleRecord, RecordKind};
use crate::instance::ProblemInstance;
use crate::matcore::{real_matrix, CMatrix, Tolerances};
use crate::quantum::{pinching_channel, DensityMatrix};

pub const T_START: f64 = 0.25;
pub const T_FLOOR: f64 = 1e-12;

/// `((1−t)/t)^θ + (t/(1−t))^θ` against `4/(4^{1−θ} − 2)`.
fn small_t_condition(theta: f64, t: f64) -> bool {
    let r = (1.0 - t) / t;
    r.powf(theta) + r.powf(-theta) > 4.0 / (4f64.powf(1.0 - theta) - 2.0)
}

/// Largest `t = 2^{-k}/4 ≥ 10^{-12}` satisfying the small-`t` condition.
pub fn small_t_witness(theta: f64) -> Option<f64> {
    let mut t = T_START;
    while t >= T_FLOOR {
        if small_t_condition(theta, t) {
            return Some(t);
        }
        t /= 2.0;
    }
    None
}

fn diagonal_pinching_instance(label: String, a: &[f64], b: &[f64], tol: &Tolerances) -> Result<ProblemInstance> {
    let a = DensityMatrix::new(real_matrix(2, 2, a), tol)?;
    let b = DensityMatrix::new(real_matrix(2, 2, b), tol)?;
    let phi = pinching_channel(&CMatrix::identity(2, 2), tol)?;
    ProblemInstance::new(label, a, b, Some(phi))
}

/// The 2×2 construction for `θ`, or `None` at `θ = 1/2`. The record's `lhs`
/// is the unpinched value, `rhs` the pinched one.
pub fn theorem6_construction(theta: f64, tol: &Tolerances) -> Result<Option<CounterexampleRecord>> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Domain(format!("theta = {theta} outside (0, 1)")));
    }
    if (theta - 0.5).abs() < 1e-12 {
        return Ok(None);
    }
    let (inst, t, closed_unpinched, closed_pinched) = if theta > 0.5 {
        let inst = diagonal_pinching_instance(format!("theorem6-theta{theta}"), &[0.5, 0.25, 0.25, 0.5], &[1.0, 0.0, 0.0, 0.0], tol)?;
        let unpinched = ((0.75f64.powf(2.0 * theta) + 0.25f64.powf(2.0 * theta)) / 2.0).sqrt();
        (inst, None, unpinched, 2f64.powf(-theta))
    } else {
        let t = small_t_witness(theta).ok_or_else(|| Error::IllPosed(format!("no t >= {T_FLOOR} for theta = {theta}")))?;
        let inst = diagonal_pinching_instance(format!("theorem6-theta{theta}"), &[1.0 - t, 0.0, 0.0, t], &[0.5, 0.5, 0.5, 0.5], tol)?;
        let unpinched = (((1.0 - t).powf(2.0 * theta) + t.powf(2.0 * theta)) / 2.0).sqrt();
        let pinched = (t.powf(theta) + (1.0 - t).powf(theta)) / 2f64.powf(1.0 - theta);
        (inst, Some(t), unpinched, pinched)
    };
    let (lhs, rhs) = pinching_sides(&inst, theta, tol)?;
    let mut record = CounterexampleRecord::new(RecordKind::Theorem6 { theta }, &inst, lhs, rhs, 0.0);
    record.parameters.insert("theta".into(), theta);
    if let Some(t) = t {
        record.parameters.insert("t".into(), t);
    }
    record.parameters.insert("closed_form_unpinched".into(), closed_unpinched);
    record.parameters.insert("closed_form_pinched".into(), closed_pinched);
    Ok(Some(record))
}

/// `0.10, 0.15, …, 0.90`.
pub fn theta_sweep() -> Vec<f64> {
    (2..=18).map(|k| k as f64 * 0.05).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn three_quarters() {
        let r = theorem6_construction(0.75, &tol()).unwrap().unwrap();
        assert!(r.violation);
        assert!((r.lhs - 0.6223017968953363).abs() < 1e-10);
        assert!((r.rhs - 2f64.powf(-0.75)).abs() < 1e-12);
        assert!((r.lhs - r.parameters["closed_form_unpinched"]).abs() < 1e-10);
        assert!(r.is_consistent(&tol()).unwrap());
    }

    #[test]
    fn quarter_uses_small_t() {
        let t = small_t_witness(0.25).unwrap();
        assert!(t <= 0.001 * 2.0);
        let lhs = 999f64.powf(0.25) + (1.0 / 999f64).powf(0.25);
        assert!((lhs - 5.800).abs() < 1e-3);
        assert!(small_t_condition(0.25, 0.001));
        let r = theorem6_construction(0.25, &tol()).unwrap().unwrap();
        assert!(r.violation);
        assert!((r.rhs - r.parameters["closed_form_pinched"]).abs() < 1e-10);
        assert!((r.lhs - r.parameters["closed_form_unpinched"]).abs() < 1e-10);
    }

    #[test]
    fn half_has_no_record() {
        assert!(theorem6_construction(0.5, &tol()).unwrap().is_none());
        assert!(theorem6_construction(1.0, &tol()).is_err());
    }

    #[test]
    fn every_theta_off_half_violates() {
        for th in theta_sweep() {
            match theorem6_construction(th, &tol()).unwrap() {
                Some(r) => assert!(r.violation, "theta {th}"),
                None => assert!((th - 0.5).abs() < 1e-9),
            }
        }
    }
}
