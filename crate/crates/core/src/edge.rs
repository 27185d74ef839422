//! Interfaces between two samples with `Ĉ1 = 1` and the localization of a
//! walker launched at the junction.

use crate::angle::from_pi;
use crate::coin::CoinState;
use crate::disorder::{sample_angles, DisorderSpec};
use crate::field::CoinField;
use crate::scattering::SECOND_COIN_OFFSET;
use crate::state::WalkerState;
use crate::stats;
use crate::walk::split_step_identity_first;
use rayon::prelude::*;

/// Positions `[-LOC_RADIUS, LOC_RADIUS]` count as "at the interface".
pub const LOC_RADIUS: i64 = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct InterfaceSystem {
    /// Second-coin angle of the left sample (`x ≤ 0`).
    pub theta_left: f64,
    /// Disorder of the right sample (`x ≥ 1`).
    pub right: DisorderSpec,
    pub config: usize,
    pub input: CoinState,
}

impl InterfaceSystem {
    pub fn new(theta_left: f64, right: DisorderSpec, config: usize) -> Self {
        InterfaceSystem { theta_left, right, config, input: CoinState::H }
    }

    pub fn with_input(mut self, input: CoinState) -> Self {
        self.input = input;
        self
    }

    /// Second-coin field covering every position reachable in `t` steps.
    pub fn second_coin(&self, t: usize) -> CoinField {
        let reach = t as i64 + 2;
        let mut angles = vec![self.theta_left; (reach + SECOND_COIN_OFFSET) as usize];
        angles.extend(sample_angles(&self.right, self.config, reach as usize));
        CoinField::new(-reach, angles)
    }
}

/// Two clean samples in the same phase: `θ_L = 1.68π` on the left and
/// `θ_R = 1.36π` on the right.
pub fn reference_system() -> InterfaceSystem {
    let right = DisorderSpec::new(from_pi(1.36), from_pi(1.36), 0.0, 0).expect("valid");
    InterfaceSystem::new(from_pi(1.68), right, 0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalizationRecord {
    pub config: usize,
    pub p: f64,
    pub t: usize,
    /// Position of the first column of every row.
    pub x_min: i64,
    /// `P_x` after each step `0..=t`; all rows share the same window.
    pub distributions: Vec<Vec<f64>>,
    /// Probability in `[-3, 3]` after the last step.
    pub p_loc: f64,
}

impl LocalizationRecord {
    pub fn x_max(&self) -> i64 {
        self.x_min + self.distributions[0].len() as i64 - 1
    }

    pub fn final_distribution(&self) -> &[f64] {
        self.distributions.last().expect("at least the initial row")
    }

    /// Position with the largest final probability (leftmost on ties).
    pub fn argmax(&self) -> i64 {
        let d = self.final_distribution();
        let mut best = 0;
        for (k, &v) in d.iter().enumerate() {
            if v > d[best] {
                best = k;
            }
        }
        self.x_min + best as i64
    }

    /// `(step, position, intensity)` triples in row-major order.
    pub fn intensity_map(&self) -> impl Iterator<Item = (usize, i64, f64)> + '_ {
        self.distributions
            .iter()
            .enumerate()
            .flat_map(move |(step, row)| row.iter().enumerate().map(move |(k, &v)| (step, self.x_min + k as i64, v)))
    }
}

/// Probability in `[-3, 3]`.
pub fn central_mass(x_min: i64, dist: &[f64]) -> f64 {
    dist.iter().enumerate().filter(|(k, _)| (x_min + *k as i64).abs() <= LOC_RADIUS).map(|(_, v)| v).sum()
}

pub fn run_interface(system: &InterfaceSystem, t: usize) -> LocalizationRecord {
    let field = system.second_coin(t);
    let x_min = -(t as i64) - 1;
    let x_max = t as i64 + 1;
    let snapshot = |s: &WalkerState| (x_min..=x_max).map(|x| s.probability_at(x)).collect::<Vec<f64>>();
    let mut state = WalkerState::localized(0, system.input);
    let mut distributions = Vec::with_capacity(t + 1);
    distributions.push(snapshot(&state));
    for _ in 0..t {
        split_step_identity_first(&mut state, &field);
        distributions.push(snapshot(&state));
    }
    let p_loc = central_mass(x_min, distributions.last().expect("nonempty"));
    LocalizationRecord { config: system.config, p: system.right.p, t, x_min, distributions, p_loc }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalizationSummary {
    pub p: f64,
    pub mean: f64,
    pub std: f64,
    pub records: Vec<LocalizationRecord>,
}

/// Ensemble `P_Loc` per `p`. At `p = 0` and `p = 1` all configurations are
/// identical and a single one is run.
pub fn localization_vs_disorder(
    theta_left: f64,
    spec: &DisorderSpec,
    t: usize,
    p_grid: &[f64],
) -> crate::Result<Vec<LocalizationSummary>> {
    localization_vs_disorder_from(CoinState::H, theta_left, spec, t, p_grid)
}

/// [`localization_vs_disorder`] with the walker launched in coin state `input`.
pub fn localization_vs_disorder_from(
    input: CoinState,
    theta_left: f64,
    spec: &DisorderSpec,
    t: usize,
    p_grid: &[f64],
) -> crate::Result<Vec<LocalizationSummary>> {
    p_grid
        .iter()
        .map(|&p| {
            let right = spec.with_p(p)?;
            let n = if p == 0.0 || p == 1.0 { 1 } else { right.n_configs };
            let records: Vec<LocalizationRecord> = (0..n)
                .into_par_iter()
                .map(|c| run_interface(&InterfaceSystem::new(theta_left, right.clone(), c).with_input(input), t))
                .collect();
            let values: Vec<f64> = records.iter().map(|r| r.p_loc).collect();
            Ok(LocalizationSummary { p, mean: stats::mean(&values), std: stats::std_dev(&values), records })
        })
        .collect()
}

/// `Σ_x |a_x − b_x|` over two distributions on the same window.
pub fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}
