//! Workloads shared by the benchmarks.

use elab_core::{Schedule, StepSpec};

/// Step counts for single-approximant benchmarks, from the coarse step up to `10^8`.
pub const APPROX_STEPS: [u64; 4] = [10, 10_000, 1_000_000, 100_000_000];

/// Step count for the full march benchmark.
pub const MARCH_STEPS: u64 = 10_000;

pub fn step(n: u64) -> StepSpec {
    StepSpec::new(n).expect("benchmark step counts are positive")
}

pub fn limit_schedule() -> Schedule {
    Schedule::powers_of_ten(1, 8).expect("valid schedule")
}
