//! Quantum divergences, fidelities, channels and recovery maps, with a
//! harness that checks the associated inequalities numerically.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod divergences;
pub mod error;
pub mod harness;
pub mod instance;
pub mod matcore;
pub mod quantum;
pub mod sampling;

pub use divergences::{DivergenceValue, GridCurve};
pub use error::{Error, Result};
pub use instance::ProblemInstance;
pub use matcore::{CMatrix, CVector, Hermitian, SpectralDecomposition, Tolerances, C64};
pub use quantum::{DensityMatrix, KrausChannel, RecoveryMap, StinespringDilation};
