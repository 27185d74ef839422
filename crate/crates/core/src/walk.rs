//! One time step `Û = Ŝ− Ĉ2 Ŝ+ Ĉ1` and its realisation as two symmetric
//! steps `Ũ = Ŝ Ĉ2 Ŝ Ĉ1` on a doubled lattice.
//!
//! On the doubled lattice a split-step site `x` sits at `y = 2x`. The first
//! coin acts on even sites, the second coin on odd sites `y = 2x − 1`, and
//! after each full double step the (all-even) occupied sites are relabelled
//! back with `x = y / 2`.

use crate::coin::{H, V};
use crate::field::CoinField;
use crate::state::WalkerState;
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StepMode {
    #[default]
    SplitStep,
    DoubleStep,
}

/// The two coin fields of a split-step walk and the stepping scheme.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitStepProtocol {
    pub first: CoinField,
    pub second: CoinField,
    pub mode: StepMode,
}

impl SplitStepProtocol {
    pub fn new(first: CoinField, second: CoinField) -> Self {
        SplitStepProtocol { first, second, mode: StepMode::SplitStep }
    }

    pub fn with_mode(mut self, mode: StepMode) -> Self {
        self.mode = mode;
        self
    }

    /// Applies one step using the configured mode.
    pub fn step(&self, state: &mut WalkerState) {
        match self.mode {
            StepMode::SplitStep => split_step(state, self),
            StepMode::DoubleStep => double_step_equivalent(state, self),
        }
    }
}

/// `Ĉ1`, then `Ŝ+`, then `Ĉ2`, then `Ŝ−`.
pub fn split_step(state: &mut WalkerState, protocol: &SplitStepProtocol) {
    state.apply_coin_field(&protocol.first);
    state.apply_shift_plus();
    state.apply_coin_field(&protocol.second);
    state.apply_shift_minus();
    state.set_time(state.time() + 1);
}

/// Same as [`split_step`] with `Ĉ1 = 1` skipped. Callers guarantee the
/// first field is identity.
pub(crate) fn split_step_identity_first(state: &mut WalkerState, second: &CoinField) {
    state.apply_shift_plus();
    state.apply_coin_field(second);
    state.apply_shift_minus();
    state.set_time(state.time() + 1);
}

/// One double step `Ŝ Ĉ2 Ŝ Ĉ1` on the doubled lattice followed by the
/// relabelling `y → y/2`.
pub fn double_step_equivalent(state: &mut WalkerState, protocol: &SplitStepProtocol) {
    let (x_min, x_max) = state.window();
    // one spare site on each side of the doubled window for the two shifts
    let y_min = 2 * x_min - 2;
    let y_max = 2 * x_max + 2;
    let len = (y_max - y_min + 1) as usize;
    let mut lattice = vec![[ZERO; 2]; len];
    for (k, s) in state.spinors().iter().enumerate() {
        let y = 2 * (x_min + k as i64);
        lattice[(y - y_min) as usize] = *s;
    }

    for (k, s) in lattice.iter_mut().enumerate() {
        let y = y_min + k as i64;
        if y.rem_euclid(2) == 0 {
            *s = protocol.first.coin_at(y / 2).apply(*s);
        }
    }
    symmetric_shift(&mut lattice);
    for (k, s) in lattice.iter_mut().enumerate() {
        let y = y_min + k as i64;
        if y.rem_euclid(2) == 1 {
            *s = protocol.second.coin_at((y + 1) / 2).apply(*s);
        }
    }
    symmetric_shift(&mut lattice);

    let mut lo = x_min;
    let mut hi = x_max;
    for (k, s) in lattice.iter().enumerate() {
        let y = y_min + k as i64;
        if s[H] != ZERO || s[V] != ZERO {
            debug_assert!(y.rem_euclid(2) == 0, "odd doubled-lattice site occupied after a full step");
            lo = lo.min(y / 2);
            hi = hi.max(y / 2);
        }
    }
    let amps = (lo..=hi).map(|x| lattice[(2 * x - y_min) as usize]).collect();
    let time = state.time() + 1;
    *state = WalkerState::from_amplitudes(lo, amps);
    state.set_time(time);
}

fn symmetric_shift(lattice: &mut [[C64; 2]]) {
    let n = lattice.len();
    for k in (1..n).rev() {
        lattice[k][H] = lattice[k - 1][H];
    }
    lattice[0][H] = ZERO;
    for k in 0..n - 1 {
        lattice[k][V] = lattice[k + 1][V];
    }
    lattice[n - 1][V] = ZERO;
}

/// Applies `steps` steps and returns every state, the initial one first.
pub fn evolve(initial: &WalkerState, protocol: &SplitStepProtocol, steps: usize) -> Vec<WalkerState> {
    let mut trajectory = Vec::with_capacity(steps + 1);
    trajectory.push(initial.clone());
    let mut state = initial.clone();
    for _ in 0..steps {
        protocol.step(&mut state);
        trajectory.push(state.clone());
    }
    trajectory
}
