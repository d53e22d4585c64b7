//! Fixed-seed fixtures for the benchmarks.

use qdiv_core::harness::ensemble::{pd_instance, DimRange};
use qdiv_core::ProblemInstance;

pub const SEED: u64 = 20240601;

pub fn fixture(dim: usize) -> ProblemInstance {
    pd_instance(SEED, 0, DimRange::new(dim, dim).expect("dim >= 2"))
}
