//! Seeded random instance ensembles. Trial `i` of a run with master seed `s`
//! draws everything from the sub-seed `s + i`, so trials can be evaluated in
//! any order.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::ProblemInstance;
use crate::matcore::{c64, CMatrix, CVector, Hermitian, Tolerances};
use crate::quantum::{pinching_channel, random_channel, random_state, DensityMatrix, KrausChannel};
use crate::sampling::{haar_unitary, rng_from_seed, unit_vector, SeededRng};

/// Inclusive dimension range written `a..b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimRange {
    pub lo: usize,
    pub hi: usize,
}

impl DimRange {
    pub fn new(lo: usize, hi: usize) -> Result<Self> {
        if lo < 2 || lo > hi {
            return Err(Error::Invalid(format!("dimension range {lo}..{hi} must satisfy 2 <= lo <= hi")));
        }
        Ok(Self { lo, hi })
    }

    pub fn sample(&self, rng: &mut SeededRng) -> usize {
        rng.random_range(self.lo..=self.hi)
    }
}

impl FromStr for DimRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("dimension range {s:?} is not a..b"));
        let (a, b) = s.split_once("..").ok_or_else(bad)?;
        let lo = a.trim().parse().map_err(|_| bad())?;
        let hi = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        Self::new(lo, hi)
    }
}

impl fmt::Display for DimRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stratum {
    /// Full-rank `A` and `B`, random channel.
    Generic,
    /// Pure `A`, full-rank `B`, random channel.
    RankOneA,
    /// Pure `A`, full-rank `B`, pinching onto a Haar-random basis.
    Pinching,
}

impl Stratum {
    pub fn for_trial(trial: usize) -> Self {
        match trial % 3 {
            0 => Self::Generic,
            1 => Self::RankOneA,
            _ => Self::Pinching,
        }
    }
}

pub fn trial_rng(seed: u64, trial: usize) -> SeededRng {
    rng_from_seed(sub_seed(seed, trial))
}

pub fn sub_seed(seed: u64, trial: usize) -> u64 {
    seed.wrapping_add(trial as u64)
}

pub fn full_rank_state(rng: &mut SeededRng, n: usize) -> DensityMatrix {
    random_state(n, n, rng.random()).expect("rank within range")
}

pub fn pure_state(rng: &mut SeededRng, n: usize) -> DensityMatrix {
    DensityMatrix::pure(&unit_vector(rng, n), &Tolerances::default()).expect("unit vector")
}

/// Random channel `Mₙ → M_k` with `k ∈ [2, n]` and enough Kraus operators for
/// `φ(B)` to be positive definite whenever `B` is.
pub fn generic_channel(rng: &mut SeededRng, n: usize) -> KrausChannel {
    let k = rng.random_range(2.min(n)..=n);
    let m = 2usize.max(n.div_ceil(k)) + rng.random_range(0..=1);
    random_channel(n, k, m, rng.random()).expect("m * k >= n")
}

pub fn haar_pinching(rng: &mut SeededRng, n: usize) -> KrausChannel {
    pinching_channel(&haar_unitary(rng, n), &Tolerances::default()).expect("unitary columns are orthonormal")
}

/// Positive definite `x` with spectrum in `[e^{-2}, e^{2}]`.
pub fn random_pd_operator(rng: &mut SeededRng, n: usize) -> Hermitian {
    let u = haar_unitary(rng, n);
    let d = CMatrix::from_diagonal(&CVector::from_iterator(n, (0..n).map(|_| c64(rng.random_range(-2.0..2.0f64).exp(), 0.0))));
    Hermitian::hermitize(&u * d * u.adjoint())
}

/// Instance for trial `trial` in the given stratum.
pub fn stratified_instance(seed: u64, trial: usize, dims: DimRange, stratum: Stratum) -> ProblemInstance {
    let mut rng = trial_rng(seed, trial);
    let n = dims.sample(&mut rng);
    let b = full_rank_state(&mut rng, n);
    let (a, channel) = match stratum {
        Stratum::Generic => (full_rank_state(&mut rng, n), generic_channel(&mut rng, n)),
        Stratum::RankOneA => (pure_state(&mut rng, n), generic_channel(&mut rng, n)),
        Stratum::Pinching => (pure_state(&mut rng, n), haar_pinching(&mut rng, n)),
    };
    let label = format!("{stratum:?}-seed{seed}-trial{trial}").to_lowercase();
    ProblemInstance::new(label, a, b, Some(channel)).expect("consistent dimensions")
}

/// Stratum chosen by `trial % 3`.
pub fn mixed_instance(seed: u64, trial: usize, dims: DimRange) -> ProblemInstance {
    stratified_instance(seed, trial, dims, Stratum::for_trial(trial))
}

/// Generic positive definite pair with a random channel.
pub fn pd_instance(seed: u64, trial: usize, dims: DimRange) -> ProblemInstance {
    stratified_instance(seed, trial, dims, Stratum::Generic)
}

pub fn random_probability(rng: &mut SeededRng, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| rng.random_range(1e-3..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// Column-stochastic `rows × cols` matrix with strictly positive entries.
pub fn random_stochastic(rng: &mut SeededRng, rows: usize, cols: usize) -> nalgebra::DMatrix<f64> {
    let mut t = nalgebra::DMatrix::zeros(rows, cols);
    for j in 0..cols {
        let col = random_probability(rng, rows);
        for (i, v) in col.into_iter().enumerate() {
            t[(i, j)] = v;
        }
    }
    t
}
