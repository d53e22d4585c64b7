//! Approach of one-parameter families to their relative-entropy limits at
//! parameter `1 − h` as `h ↓ 0`.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::divergences::{relative_entropy, relative_entropy_difference};
use crate::error::{Error, Result};
use crate::harness::scans::MonotoneCurve;
use crate::instance::ProblemInstance;
use crate::matcore::Tolerances;

pub const DEFAULT_H: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];
pub const LIMIT_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitQuantity {
    RenyiTheta,
    LnFThetaSecant,
    SandwichedRenyi,
    DeltaTilde,
}

impl LimitQuantity {
    pub const ALL: [Self; 4] = [Self::RenyiTheta, Self::LnFThetaSecant, Self::SandwichedRenyi, Self::DeltaTilde];

    pub fn name(self) -> &'static str {
        match self {
            Self::RenyiTheta => "renyi-theta",
            Self::LnFThetaSecant => "lnf-theta-secant",
            Self::SandwichedRenyi => "sandwiched-renyi",
            Self::DeltaTilde => "delta-tilde",
        }
    }

    fn curve(self) -> MonotoneCurve {
        match self {
            Self::RenyiTheta => MonotoneCurve::RenyiTheta,
            Self::LnFThetaSecant => MonotoneCurve::SecantFTheta,
            Self::SandwichedRenyi => MonotoneCurve::SandwichedRenyi,
            Self::DeltaTilde => MonotoneCurve::DeltaTilde,
        }
    }

    /// `D(A|B)`, or `D(A|B) − D(φ(A)|φ(B))` for `Δ̃`.
    pub fn target(self, inst: &ProblemInstance, tol: &Tolerances) -> Result<f64> {
        let v = match self {
            Self::DeltaTilde => relative_entropy_difference(&inst.a, &inst.b, &inst.channel_or_identity(), tol)?,
            _ => relative_entropy(&inst.a, &inst.b, tol)?,
        };
        v.get().ok_or_else(|| Error::IllPosed("limit target is infinite".into()))
    }
}

impl FromStr for LimitQuantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.replace('_', "-").to_lowercase();
        Self::ALL
            .into_iter()
            .find(|q| q.name() == key)
            .ok_or_else(|| Error::Invalid(format!("unknown limit quantity {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    pub quantity: String,
    pub target: f64,
    pub h: Vec<f64>,
    pub values: Vec<f64>,
    /// Values increase as `h` decreases.
    pub increasing: bool,
    /// No value exceeds the target by more than the tolerance.
    pub below_target: bool,
    /// `|value − target|` decreases along the sequence.
    pub converging: bool,
    /// Largest `value − target`.
    pub max_excess: f64,
    pub tolerance: f64,
}

impl LimitReport {
    pub fn pass(&self) -> bool {
        self.increasing && self.below_target && self.converging
    }

    /// Minimum slack over the three conditions.
    pub fn slack(&self) -> f64 {
        let inc = self.values.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        let conv = self
            .values
            .windows(2)
            .map(|w| (w[0] - self.target).abs() - (w[1] - self.target).abs())
            .fold(f64::INFINITY, f64::min);
        inc.min(conv).min(-self.max_excess)
    }
}

pub fn secant_limit_check(
    quantity: LimitQuantity,
    inst: &ProblemInstance,
    h: &[f64],
    tol: f64,
    tolerances: &Tolerances,
) -> Result<LimitReport> {
    if h.is_empty() || h.iter().any(|&x| !(x > 0.0 && x < 0.5)) {
        return Err(Error::Domain("h values must lie in (0, 1/2)".into()));
    }
    if h.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Invalid("h sequence must be strictly decreasing".into()));
    }
    let target = quantity.target(inst, tolerances)?;
    let curve = quantity.curve();
    let values = h
        .iter()
        .map(|&x| curve.evaluate(inst, 1.0 - x, tolerances).map_err(|e| Error::Evaluation { at: 1.0 - x, source: Box::new(e) }))
        .collect::<Result<Vec<_>>>()?;
    let increasing = values.windows(2).all(|w| w[1] >= w[0] - tol);
    let max_excess = values.iter().map(|v| v - target).fold(f64::NEG_INFINITY, f64::max);
    let below_target = max_excess <= tol;
    let converging = values.windows(2).all(|w| (w[1] - target).abs() <= (w[0] - target).abs() + tol);
    Ok(LimitReport {
        quantity: quantity.name().to_string(),
        target,
        h: h.to_vec(),
        values,
        increasing,
        below_target,
        converging,
        max_excess,
        tolerance: tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::real_matrix;
    use crate::quantum::DensityMatrix;

    const KL: f64 = 0.1438410362258902;

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
    fn commuting_secant_approaches_kl_from_below() {
        let r = secant_limit_check(LimitQuantity::LnFThetaSecant, &commuting(), &[1e-1, 1e-2, 1e-3], LIMIT_TOL, &Tolerances::default())
            .unwrap();
        assert!((r.target - KL).abs() < 1e-12);
        assert!(r.pass(), "{r:?}");
        assert!((r.values[2] - KL).abs() < 1e-3);
    }

    #[test]
    fn equal_pair_is_zero() {
        let p = ProblemInstance::paper_example();
        let inst = ProblemInstance::new("eq", p.b.clone(), p.b.clone(), None).unwrap();
        for q in LimitQuantity::ALL {
            let r = secant_limit_check(q, &inst, &DEFAULT_H, LIMIT_TOL, &Tolerances::default()).unwrap();
            assert!(r.pass(), "{q:?}");
            assert!(r.values.iter().all(|v| v.abs() < 1e-9));
        }
    }

    #[test]
    fn paper_example_delta_tilde_is_near_target() {
        let r = secant_limit_check(LimitQuantity::DeltaTilde, &ProblemInstance::paper_example(), &[1e-3], LIMIT_TOL, &Tolerances::default())
            .unwrap();
        assert!((r.values[0] - 1.5191).abs() < 0.01);
    }

    #[test]
    fn rejects_bad_sequences() {
        let t = Tolerances::default();
        assert!(secant_limit_check(LimitQuantity::RenyiTheta, &commuting(), &[1e-3, 1e-2], LIMIT_TOL, &t).is_err());
        assert!(secant_limit_check(LimitQuantity::RenyiTheta, &commuting(), &[0.6], LIMIT_TOL, &t).is_err());
        assert!("lnf_theta_secant".parse::<LimitQuantity>().is_ok());
    }
}
