//! Binary coin disorder in the second coin of a lead–sample system.
//!
//! Each sample site independently takes `θ_B` with probability `p` and `θ_A`
//! otherwise. The uniform variate of a site is a pure function of
//! `(seed, config, site)`, so a pattern does not depend on how many sites
//! are generated, and the same variates are reused across `p`.

use crate::error::{Error, Result};
use crate::field::CoinField;
use crate::scattering::{invariants, Gauge, SampleCoins, ScatteringSystem, SECOND_COIN_OFFSET};
use crate::stats;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const DEFAULT_CONFIGS: usize = 50;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisorderSpec {
    pub theta_a: f64,
    pub theta_b: f64,
    pub p: f64,
    /// Number of disordered cells; `None` sizes the sample to the light cone.
    pub sample_len: Option<usize>,
    pub seed: u64,
    pub n_configs: usize,
}

impl DisorderSpec {
    pub fn new(theta_a: f64, theta_b: f64, p: f64, seed: u64) -> Result<Self> {
        let spec = DisorderSpec { theta_a, theta_b, p, sample_len: None, seed, n_configs: DEFAULT_CONFIGS };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_p(&self, p: f64) -> Result<Self> {
        let spec = DisorderSpec { p, ..self.clone() };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_n_configs(mut self, n_configs: usize) -> Self {
        self.n_configs = n_configs;
        self
    }

    pub fn with_sample_len(mut self, len: usize) -> Self {
        self.sample_len = Some(len);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidParameter(format!("p must lie in [0, 1], got {}", self.p)));
        }
        if self.n_configs == 0 {
            return Err(Error::InvalidParameter("n_configs must be positive".into()));
        }
        if self.sample_len == Some(0) {
            return Err(Error::InvalidParameter("sample_len must be positive".into()));
        }
        if !self.theta_a.is_finite() || !self.theta_b.is_finite() {
            return Err(Error::InvalidParameter("coin angles must be finite".into()));
        }
        Ok(())
    }

    /// Cells generated for a `t`-step run.
    pub fn len_for(&self, t: usize) -> usize {
        self.sample_len.unwrap_or(ScatteringSystem::light_cone_len(t))
    }
}

/// Uniform variate in `[0, 1)` for one site.
pub fn site_variate(seed: u64, config: usize, site: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(config as u64);
    rng.set_word_pos(2 * site as u128);
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Second-coin angles of configuration `config`, one per cell.
pub fn sample_angles(spec: &DisorderSpec, config: usize, len: usize) -> Vec<f64> {
    (0..len)
        .map(|site| if site_variate(spec.seed, config, site) < spec.p { spec.theta_b } else { spec.theta_a })
        .collect()
}

/// Second-coin field of configuration `config` for a `t`-step run; the first
/// coin is the identity everywhere.
pub fn sample_pattern(spec: &DisorderSpec, config: usize, t: usize) -> CoinField {
    CoinField::new(SECOND_COIN_OFFSET, sample_angles(spec, config, spec.len_for(t)))
}

/// Scattering system of one configuration.
pub fn configuration(spec: &DisorderSpec, config: usize, t: usize) -> ScatteringSystem {
    ScatteringSystem::new(SampleCoins::Uniform(0.0), SampleCoins::Pattern(sample_angles(spec, config, spec.len_for(t))))
}

/// `½ r(0)` of one configuration in the reference gauge.
pub fn half_r0(spec: &DisorderSpec, config: usize, t: usize) -> f64 {
    let series = configuration(spec, config, t).reflection_amplitudes(t);
    assert!(
        series.values().iter().step_by(2).all(|r| r.norm_sqr() == 0.0),
        "odd reflection amplitude with identity first coin (config {config})"
    );
    invariants(&series, Gauge::reference()).expect("fixed gauge").q0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleResult {
    pub p: f64,
    pub t: usize,
    pub seed: u64,
    /// `½ r(0)` per configuration, in configuration order.
    pub half_r0: Vec<f64>,
    pub mean: f64,
    pub std: f64,
}

impl EnsembleResult {
    fn from_values(spec: &DisorderSpec, t: usize, half_r0: Vec<f64>) -> Self {
        EnsembleResult {
            p: spec.p,
            t,
            seed: spec.seed,
            mean: stats::mean(&half_r0),
            std: stats::std_dev(&half_r0),
            half_r0,
        }
    }

    /// Mean of `sign(½ r(0))`, the signed fraction of configurations above zero.
    pub fn sign_balance(&self) -> f64 {
        let s: Vec<f64> = self.half_r0.iter().map(|v| sign(*v)).collect();
        stats::mean(&s)
    }

    /// Median of `sign(½ r(0))`.
    pub fn median_sign(&self) -> f64 {
        let s: Vec<f64> = self.half_r0.iter().map(|v| sign(*v)).collect();
        stats::median(&s)
    }
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

pub fn ensemble_r0(spec: &DisorderSpec, t: usize) -> Result<EnsembleResult> {
    spec.validate()?;
    if t == 0 {
        return Err(Error::InvalidParameter("t must be at least 1".into()));
    }
    let values: Vec<f64> = (0..spec.n_configs).into_par_iter().map(|c| half_r0(spec, c, t)).collect();
    Ok(EnsembleResult::from_values(spec, t, values))
}

/// Ensembles for every `p` of the grid, sharing seed and configuration count.
pub fn sweep(spec: &DisorderSpec, p_grid: &[f64], t: usize) -> Result<Vec<EnsembleResult>> {
    p_grid.iter().map(|&p| ensemble_r0(&spec.with_p(p)?, t)).collect()
}

/// `{0, 0.1, …, 1}`.
pub fn default_p_grid() -> Vec<f64> {
    (0..=10).map(|k| k as f64 / 10.0).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransitionEstimate {
    pub p_crit: f64,
    /// Change of the sign balance per unit `p` across the bracketing interval.
    pub slope: f64,
    /// `(p, sign balance)` for each grid point actually evaluated.
    pub evaluated: Vec<(f64, f64)>,
}

/// Bisects the p grid for the zero crossing of the configuration-averaged
/// sign of `½ r(0)` and interpolates linearly inside the final bracket.
/// Only the grid points visited by the bisection are simulated.
pub fn transition_locator(
    spec: &DisorderSpec,
    t_large: usize,
    p_grid: &[f64],
    n_configs: usize,
) -> Result<TransitionEstimate> {
    if p_grid.len() < 2 {
        return Err(Error::InvalidParameter("p grid needs at least two points".into()));
    }
    if p_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("p grid must be strictly increasing".into()));
    }
    let base = spec.clone().with_n_configs(n_configs);
    let mut cache: BTreeMap<usize, f64> = BTreeMap::new();
    let mut signal = |k: usize| -> Result<f64> {
        if let Some(v) = cache.get(&k) {
            return Ok(*v);
        }
        let v = ensemble_r0(&base.with_p(p_grid[k])?, t_large)?.sign_balance();
        cache.insert(k, v);
        Ok(v)
    };
    let (mut lo, mut hi) = (0, p_grid.len() - 1);
    let (mut s_lo, mut s_hi) = (signal(lo)?, signal(hi)?);
    if s_lo * s_hi > 0.0 || (s_lo == 0.0 && s_hi == 0.0) {
        return Err(Error::NoCrossing);
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        let s = signal(mid)?;
        if s == 0.0 {
            lo = mid;
            hi = mid;
            s_lo = s;
            s_hi = s;
            break;
        }
        if s * s_lo < 0.0 {
            hi = mid;
            s_hi = s;
        } else {
            lo = mid;
            s_lo = s;
        }
    }
    let (p_lo, p_hi) = (p_grid[lo], p_grid[hi]);
    let (p_crit, slope) = if lo == hi {
        (p_lo, f64::NAN)
    } else {
        let slope = (s_hi - s_lo) / (p_hi - p_lo);
        (p_lo - s_lo / slope, slope)
    };
    let evaluated = cache.into_iter().map(|(k, v)| (p_grid[k], v)).collect();
    Ok(TransitionEstimate { p_crit, slope, evaluated })
}

/// Inverse of the steepest slope of the ensemble mean between neighbouring
/// grid points, i.e. the `p` range a full `−½ → ½` step would take at that
/// slope.
pub fn transition_width(sweep: &[EnsembleResult]) -> f64 {
    let max_slope = sweep.windows(2).map(|w| ((w[1].mean - w[0].mean) / (w[1].p - w[0].p)).abs()).fold(0.0, f64::max);
    1.0 / max_slope
}
