//! Shared fixtures for the benchmarks.

use qwtopo::angle::from_pi;
use qwtopo::{CoinState, DisorderSpec, ScatteringSystem, SplitStepProtocol, WalkerState};

/// Clean gapped sample used by the walk benchmarks.
pub fn gapped_system() -> ScatteringSystem {
    ScatteringSystem::clean(from_pi(0.3), from_pi(1.1))
}

/// Bulk protocol over a window that the walker never leaves in `t` steps.
pub fn bulk_protocol(t: usize) -> SplitStepProtocol {
    gapped_system().protocol(t)
}

pub fn start() -> WalkerState {
    WalkerState::localized(0, CoinState::H)
}

/// Disorder of the second case study with `n_configs` configurations.
pub fn case_two(n_configs: usize) -> DisorderSpec {
    DisorderSpec::new(from_pi(0.63), from_pi(1.26), 0.5, 2015).expect("valid spec").with_n_configs(n_configs)
}
