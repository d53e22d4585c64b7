//! The recoverability inequality `−2 ln F(A | R_{φ,B}(φ(A))) ≤ D(A|B) − D(φ(A)|φ(B))`:
//! reproduction of the known violation, randomized search, and rotated-map
//! scans.

use std::collections::BTreeMap;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::divergences::{f_theta, fidelity_with, relative_entropy_difference};
use crate::error::{Error, Result};
use crate::harness::ensemble::{stratified_instance, DimRange, Stratum};
use crate::harness::grid::Grid;
use crate::harness::report::lossless_f64;
use crate::harness::scans::evaluate_on_grid;
use crate::instance::{InstanceJson, ProblemInstance};
use crate::matcore::Tolerances;
use crate::quantum::{KrausChannel, RecoveryMap};

/// Agreement required between a stored margin and its recomputation.
pub const RECOMPUTE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RecordKind {
    /// `lhs = −2 ln F(A|R(φ(A)))`, `rhs = D(A|B) − D(φ(A)|φ(B))`.
    Eq4,
    /// `lhs = F_θ(A|B)`, `rhs = F_θ(φ(A)|φ(B))` for the diagonal pinching.
    Theorem6 { theta: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleRecord {
    #[serde(flatten)]
    pub kind: RecordKind,
    pub instance: InstanceJson,
    #[serde(default)]
    pub parameters: BTreeMap<String, f64>,
    #[serde(with = "lossless_f64")]
    pub lhs: f64,
    #[serde(with = "lossless_f64")]
    pub rhs: f64,
    #[serde(with = "lossless_f64")]
    pub margin: f64,
    pub violation: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trial: Option<usize>,
}

impl CounterexampleRecord {
    pub fn new(kind: RecordKind, inst: &ProblemInstance, lhs: f64, rhs: f64, tol: f64) -> Self {
        let margin = lhs - rhs;
        Self {
            kind,
            instance: inst.to_json(),
            parameters: BTreeMap::new(),
            lhs,
            rhs,
            margin,
            violation: margin > tol,
            seed: None,
            trial: None,
        }
    }

    /// `(lhs, rhs)` evaluated afresh from the stored inputs.
    pub fn recompute(&self, tol: &Tolerances) -> Result<(f64, f64)> {
        let inst = ProblemInstance::from_json(&self.instance, tol)?;
        match self.kind {
            RecordKind::Eq4 => eq4_sides(&inst, tol),
            RecordKind::Theorem6 { theta } => pinching_sides(&inst, theta, tol),
        }
    }

    /// Whether the stored margin matches its recomputation.
    pub fn is_consistent(&self, tol: &Tolerances) -> Result<bool> {
        let (lhs, rhs) = self.recompute(tol)?;
        Ok(((lhs - rhs) - self.margin).abs() <= RECOMPUTE_TOL)
    }
}

/// `(−2 ln F(A|R_{φ,B}(φ(A))), D(A|B) − D(φ(A)|φ(B)))`.
pub fn eq4_sides(inst: &ProblemInstance, tol: &Tolerances) -> Result<(f64, f64)> {
    let phi = inst.channel_or_identity();
    let map = RecoveryMap::new(&phi, &inst.b, tol)?;
    let fa = phi.apply_hermitian(inst.a.hermitian())?;
    let f = fidelity_with(&inst.a, &map.petz(&fa)?, tol)?;
    let lhs = if f > 0.0 { -2.0 * f.ln() } else { f64::INFINITY };
    let rhs = relative_entropy_difference(&inst.a, &inst.b, &phi, tol)?;
    if !rhs.finite {
        return Err(Error::SupportViolation);
    }
    Ok((lhs, rhs.value))
}

/// `(F_θ(A|B), F_θ(φ(A)|φ(B)))`.
pub fn pinching_sides(inst: &ProblemInstance, theta: f64, tol: &Tolerances) -> Result<(f64, f64)> {
    let phi = inst.channel_or_identity();
    let unpinched = f_theta(&inst.a, &inst.b, theta, tol)?;
    let pa = phi.apply_state(&inst.a, tol)?;
    let pb = phi.apply_state(&inst.b, tol)?;
    Ok((unpinched, f_theta(&pa, &pb, theta, tol)?))
}

pub fn eq4_record(inst: &ProblemInstance, margin_tol: f64, tol: &Tolerances) -> Result<CounterexampleRecord> {
    let (lhs, rhs) = eq4_sides(inst, tol)?;
    Ok(CounterexampleRecord::new(RecordKind::Eq4, inst, lhs, rhs, margin_tol))
}

/// The rank-one / pinching instance on which the inequality fails.
pub fn reproduce_paper_counterexample(tol: &Tolerances) -> Result<CounterexampleRecord> {
    eq4_record(&ProblemInstance::paper_example(), 0.0, tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conjecture {
    Eq4,
}

impl FromStr for Conjecture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_lowercase().as_str() {
            "eq4" => Ok(Self::Eq4),
            _ => Err(Error::Invalid(format!("unknown conjecture {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchSpace {
    /// Generic, rank-one and pinching strata in rotation.
    Stratified,
    /// `A = B`, both sides vanish.
    EqualPairs,
    /// Identity channel, recovery is perfect.
    IdentityChannel,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub trials: usize,
    pub dims: DimRange,
    pub seed: u64,
    pub conjecture: Conjecture,
    pub tolerance: f64,
    pub space: SearchSpace,
    pub include_paper_instance: bool,
}

impl SearchConfig {
    pub fn new(trials: usize, dims: DimRange, seed: u64) -> Self {
        Self {
            trials,
            dims,
            seed,
            conjecture: Conjecture::Eq4,
            tolerance: 1e-9,
            space: SearchSpace::Stratified,
            include_paper_instance: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Invalid("trials must be at least 1".into()));
        }
        if !(self.tolerance >= 0.0) {
            return Err(Error::Invalid("search tolerance must be non-negative".into()));
        }
        Ok(())
    }

    pub fn instance(&self, trial: usize) -> ProblemInstance {
        let inst = stratified_instance(self.seed, trial, self.dims, Stratum::for_trial(trial));
        match self.space {
            SearchSpace::Stratified => inst,
            SearchSpace::EqualPairs => {
                ProblemInstance::new(inst.label, inst.b.clone(), inst.b, inst.channel).expect("same dimensions")
            }
            SearchSpace::IdentityChannel => {
                let n = inst.dim();
                ProblemInstance::new(inst.label, inst.a, inst.b, Some(KrausChannel::identity(n))).expect("same dimensions")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub evaluated: usize,
    pub skipped: usize,
    #[serde(with = "lossless_f64")]
    pub max_margin: f64,
    pub records: Vec<CounterexampleRecord>,
}

/// Evaluates the conjecture on every trial and keeps the violations, in
/// trial order.
pub fn conjecture_search(config: &SearchConfig, tol: &Tolerances) -> Result<SearchOutcome> {
    config.validate()?;
    let results: Vec<Option<CounterexampleRecord>> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let inst = config.instance(trial);
            eq4_record(&inst, config.tolerance, tol).ok().map(|mut r| {
                r.seed = Some(config.seed);
                r.trial = Some(trial);
                r
            })
        })
        .collect();
    let mut all: Vec<CounterexampleRecord> = Vec::with_capacity(results.len() + 1);
    if config.include_paper_instance {
        all.push(eq4_record(&ProblemInstance::paper_example(), config.tolerance, tol)?);
    }
    let skipped = results.iter().filter(|r| r.is_none()).count();
    all.extend(results.into_iter().flatten());
    let max_margin = all.iter().map(|r| r.margin).fold(f64::NEG_INFINITY, f64::max);
    Ok(SearchOutcome {
        evaluated: all.len(),
        skipped,
        max_margin,
        records: all.into_iter().filter(|r| r.violation).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotatedScan {
    pub grid: Grid,
    pub points: Vec<f64>,
    pub fidelities: Vec<f64>,
    pub argmax_t: f64,
    pub max_fidelity: f64,
    #[serde(with = "lossless_f64")]
    pub lhs_at_max: f64,
    pub rhs: f64,
    /// Some grid point satisfies `−2 ln F ≤ rhs + tol`.
    pub witness: bool,
    pub tolerance: f64,
}

/// `t ↦ F(A | R^t_{φ,B}(φ(A)))` over the grid.
pub fn rotated_scan(inst: &ProblemInstance, grid: &Grid, margin_tol: f64, tol: &Tolerances) -> Result<RotatedScan> {
    let phi = inst.channel_or_identity();
    let map = RecoveryMap::new(&phi, &inst.b, tol)?;
    let fa = phi.apply_hermitian(inst.a.hermitian())?;
    let rhs = relative_entropy_difference(&inst.a, &inst.b, &phi, tol)?;
    if !rhs.finite {
        return Err(Error::SupportViolation);
    }
    let points = grid.points();
    let fidelities = evaluate_on_grid(&points, |t| fidelity_with(&inst.a, &map.rotated(t, &fa)?, tol))?;
    let (i, &max_fidelity) = fidelities
        .iter()
        .enumerate()
        .fold((0, &f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    let lhs_at_max = if max_fidelity > 0.0 { -2.0 * max_fidelity.ln() } else { f64::INFINITY };
    Ok(RotatedScan {
        grid: *grid,
        argmax_t: points[i],
        points,
        fidelities,
        max_fidelity,
        lhs_at_max,
        rhs: rhs.value,
        witness: lhs_at_max <= rhs.value + margin_tol,
        tolerance: margin_tol,
    })
}
