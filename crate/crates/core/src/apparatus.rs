//! Emulation of the optical measurement chain.
//!
//! The emulator perturbs the ideal walk with the systematic errors of the
//! set-up (path loss asymmetry, coin-angle errors of the electro-optic
//! modulator and of the Soleil–Babinet compensator, detector efficiencies),
//! reads out the reflected intensities and the interference signals that fix
//! relative signs, and rebuilds the signed reflection series from them.

use crate::angle::degrees;
use crate::coin::CoinState;
use crate::error::{Error, Result};
use crate::scattering::{invariants, Gauge, ReflectionSeries, ScatteringSystem};
use crate::state::WalkerState;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_4;

/// Index of the H and V detector in [`ApparatusModel::detector_efficiency`].
pub const DETECTOR_H: usize = 0;
pub const DETECTOR_V: usize = 1;

/// Magnitudes below this are treated as exact zeros of the series.
pub const ZERO_MAGNITUDE: f64 = 1e-9;

/// Bounds of the systematic errors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorRanges {
    pub loss_asymmetry: f64,
    pub eom_error: f64,
    pub sbc_error: f64,
}

impl Default for ErrorRanges {
    fn default() -> Self {
        ErrorRanges { loss_asymmetry: 0.03, eom_error: degrees(1.0), sbc_error: degrees(1.0) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApparatusModel {
    /// Efficiencies of the H and V detectors.
    pub detector_efficiency: [f64; 2],
    /// Relative transmission difference between the H and V arms, per shift.
    pub loss_asymmetry: f64,
    /// Angle error of the switched coin, radians.
    pub eom_error: f64,
    /// Angle error of the static coin, radians.
    pub sbc_error: f64,
}

impl Default for ApparatusModel {
    fn default() -> Self {
        Self::ideal()
    }
}

impl ApparatusModel {
    pub fn ideal() -> Self {
        ApparatusModel { detector_efficiency: [1.0, 1.0], loss_asymmetry: 0.0, eom_error: 0.0, sbc_error: 0.0 }
    }

    pub fn validate(&self, ranges: &ErrorRanges) -> Result<()> {
        for (name, eta) in ["H", "V"].iter().zip(self.detector_efficiency) {
            if !(eta > 0.0 && eta <= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} detector efficiency must lie in (0, 1], got {eta}"
                )));
            }
        }
        let checks = [
            ("loss_asymmetry", self.loss_asymmetry, ranges.loss_asymmetry),
            ("eom_error", self.eom_error, ranges.eom_error),
            ("sbc_error", self.sbc_error, ranges.sbc_error),
        ];
        for (name, value, bound) in checks {
            if value.is_nan() || value.abs() > bound * (1.0 + 1e-12) {
                return Err(Error::InvalidParameter(format!("{name} = {value} outside ±{bound}")));
            }
        }
        Ok(())
    }

    /// Realized angle of a coin set to `theta`. Positions where the walk
    /// should act trivially only see the residual of the two errors.
    pub fn realized_angle(&self, theta: f64) -> f64 {
        if theta == 0.0 {
            self.sbc_error - self.eom_error
        } else {
            theta + self.sbc_error + self.eom_error
        }
    }

    fn arm_factors(&self) -> (f64, f64) {
        ((1.0 + 0.5 * self.loss_asymmetry).sqrt(), (1.0 - 0.5 * self.loss_asymmetry).sqrt())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    Same,
    Opposite,
}

impl Relation {
    pub fn of(a: f64, b: f64) -> Relation {
        if a * b >= 0.0 {
            Relation::Same
        } else {
            Relation::Opposite
        }
    }

    pub fn factor(self) -> f64 {
        match self {
            Relation::Same => 1.0,
            Relation::Opposite => -1.0,
        }
    }
}

/// Limits below which an interference read-out does not decide a sign.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignThresholds {
    /// Minimum distance of the mixing angle from a multiple of π/2.
    pub angle_margin: f64,
    /// Minimum `|ΔI|` as a fraction of the detected total `I_H + I_V`.
    pub noise_floor: f64,
}

impl Default for SignThresholds {
    fn default() -> Self {
        SignThresholds { angle_margin: degrees(2.0), noise_floor: 1e-4 }
    }
}

/// Detector read-out of one interference measurement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignMeasurement {
    pub alpha: f64,
    pub i_h: f64,
    pub i_v: f64,
}

impl SignMeasurement {
    pub fn delta_i(&self) -> f64 {
        self.i_h - self.i_v
    }

    pub fn total(&self) -> f64 {
        self.i_h + self.i_v
    }

    pub fn relation(&self, thresholds: &SignThresholds) -> Result<Relation> {
        relative_sign_with(self.delta_i(), self.alpha, self.total(), thresholds)
    }
}

/// Intensities behind the polarizing beam splitter when two real amplitudes
/// are mixed by a coin of angle `alpha`.
pub fn interfere(r1: f64, r2: f64, alpha: f64) -> (f64, f64) {
    let (s, c) = alpha.sin_cos();
    let a = r1 * r1 * s * s + r2 * r2 * c * c;
    let cross = 2.0 * r1 * r2 * s * c;
    (0.5 * (a - cross), 0.5 * (a + cross))
}

/// Sign relation of `r1, r2` for a unit-intensity pulse.
pub fn relative_sign(delta_i: f64, alpha: f64) -> Result<Relation> {
    relative_sign_with(delta_i, alpha, 1.0, &SignThresholds::default())
}

/// `sign(r1 r2) = −sign(ΔI / (sin α cos α))`, provided the angle is clear of
/// the blind spots and `|ΔI|` exceeds the floor scaled by `total`.
pub fn relative_sign_with(delta_i: f64, alpha: f64, total: f64, thresholds: &SignThresholds) -> Result<Relation> {
    let sc = alpha.sin() * alpha.cos();
    let (ds, dc) = thresholds.angle_margin.sin_cos();
    if sc.abs() < ds * dc {
        return Err(Error::AmbiguousSign {
            reason: format!("mixing angle {alpha:.4} rad is within the margin of a multiple of π/2"),
        });
    }
    let floor = thresholds.noise_floor * total;
    if delta_i.abs() < floor || delta_i == 0.0 {
        return Err(Error::AmbiguousSign {
            reason: format!("|ΔI| = {:.3e} is below the noise floor {floor:.1e}", delta_i.abs()),
        });
    }
    if -(delta_i / sc) > 0.0 {
        Ok(Relation::Same)
    } else {
        Ok(Relation::Opposite)
    }
}

/// Rebuilds the signed series `ρ_j` from magnitudes and sign relations.
///
/// `relations[k]` relates `ρ_{k+1}` to the nearest earlier non-zero entry;
/// it is ignored for zero magnitudes and for the first non-zero entry, whose
/// sign comes from `reference` (its relation to a positive reference pulse).
/// A missing relation breaks the chain: every step from there on is
/// reported as undetermined.
pub fn reconstruct_series(
    magnitudes: &[f64],
    relations: &[Option<Relation>],
    reference: Option<Relation>,
) -> Result<Vec<f64>> {
    if relations.len() != magnitudes.len() {
        return Err(Error::InvalidParameter(format!(
            "{} magnitudes but {} relations",
            magnitudes.len(),
            relations.len()
        )));
    }
    let broken = |k: usize| Error::ChainBroken { at: k + 1, undetermined: (k + 1..=magnitudes.len()).collect() };
    let mut out = vec![0.0; magnitudes.len()];
    let mut previous: Option<f64> = None;
    for (k, &m) in magnitudes.iter().enumerate() {
        if m < ZERO_MAGNITUDE {
            continue;
        }
        let relation = match previous {
            None => reference,
            Some(_) => relations[k],
        }
        .ok_or_else(|| broken(k))?;
        let base = previous.unwrap_or(1.0);
        out[k] = m * relation.factor() * base;
        previous = Some(out[k].signum());
    }
    Ok(out)
}

/// How detector counts are turned into intensities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Readout {
    Exact,
    /// Poisson counts with `photons` expected detections per unit intensity.
    Shots {
        photons: f64,
        seed: u64,
    },
}

/// Read-outs of one emulated run.
#[derive(Clone, Debug, PartialEq)]
pub struct EmulatedRun {
    pub t: usize,
    /// Measured `|r_j|`, `j = 1..t`.
    pub magnitudes: Vec<f64>,
    /// `relations[k]` relates `ρ_{k+1}` to the previous non-zero amplitude.
    pub relations: Vec<Option<Relation>>,
    pub reference: Option<Relation>,
    /// Interference read-out behind each relation.
    pub sign_measurements: Vec<Option<SignMeasurement>>,
    /// Signed amplitudes the apparatus actually produced (before read-out).
    pub realized: Vec<f64>,
    /// Detected position distributions after each step `1..=t`.
    pub x_min: i64,
    pub distributions: Vec<Vec<f64>>,
}

impl EmulatedRun {
    pub fn reconstruct(&self) -> Result<ReflectionSeries> {
        let rho = reconstruct_series(&self.magnitudes, &self.relations, self.reference)?;
        Ok(ReflectionSeries::from_imaginary_parts(&rho))
    }

    /// Series of the amplitudes the perturbed apparatus produced.
    pub fn realized_series(&self) -> ReflectionSeries {
        ReflectionSeries::from_imaginary_parts(&self.realized)
    }
}

/// Mixing angle used for every interference measurement.
pub const MIXING_ANGLE: f64 = FRAC_PI_4;

pub fn emulate_measurement(
    system: &ScatteringSystem,
    t: usize,
    model: &ApparatusModel,
    readout: Readout,
) -> Result<EmulatedRun> {
    model.validate(&ErrorRanges::default())?;
    let ideal = system.protocol(t);
    let reach = t as i64 + 2;
    let first = ideal.first.remap(-reach, reach, |a| model.realized_angle(a));
    let second = ideal.second.remap(-reach, reach, |a| model.realized_angle(a));
    let (fh, fv) = model.arm_factors();
    let [eta_h, eta_v] = model.detector_efficiency;

    let mut rng = match readout {
        Readout::Shots { seed, .. } => Some(ChaCha8Rng::seed_from_u64(seed)),
        Readout::Exact => None,
    };
    let mut detect = |intensity: f64| -> f64 {
        match (&mut rng, readout) {
            (Some(rng), Readout::Shots { photons, .. }) if intensity > 0.0 => {
                let n: f64 = Poisson::new(photons * intensity).map(|d| d.sample(rng)).unwrap_or(0.0);
                n / photons
            }
            _ => intensity,
        }
    };

    let x_min = -(t as i64) - 1;
    let mut state = WalkerState::localized(0, CoinState::H);
    let mut realized = Vec::with_capacity(t);
    let mut magnitudes = Vec::with_capacity(t);
    let mut distributions = Vec::with_capacity(t);
    for _ in 0..t {
        state.apply_coin_field(&first);
        state.apply_shift_plus();
        state.scale_components(fh, fv);
        state.apply_coin_field(&second);
        state.apply_shift_minus();
        state.scale_components(fh, fv);

        let mut row = Vec::with_capacity(2 * t + 3);
        let mut reflected = 0.0;
        for x in x_min..=-x_min {
            let h = detect(eta_h * state.amplitude(x, CoinState::H).norm_sqr()) / eta_h;
            let v = detect(eta_v * state.amplitude(x, CoinState::V).norm_sqr()) / eta_v;
            if x == -1 {
                reflected = v;
            }
            row.push(h + v);
        }
        let total = row.iter().sum::<f64>().max(f64::MIN_POSITIVE);
        magnitudes.push((reflected / total).sqrt());
        distributions.push(row.iter().map(|p| p / total).collect());
        realized.push(state.amplitude(-1, CoinState::V).im / state.norm_sqr().sqrt());
    }

    let thresholds = SignThresholds::default();
    let mut relations = vec![None; t];
    let mut sign_measurements = vec![None; t];
    let mut previous: Option<f64> = None;
    let mut reference = None;
    for k in 0..t {
        if realized[k].abs() < ZERO_MAGNITUDE {
            continue;
        }
        match previous {
            None => reference = Some(Relation::of(realized[k], 1.0)),
            Some(prev) => {
                let alpha = MIXING_ANGLE + model.eom_error;
                let (ih, iv) = interfere(prev, realized[k], alpha);
                let m = SignMeasurement {
                    alpha: MIXING_ANGLE,
                    i_h: detect(eta_h * ih) / eta_h,
                    i_v: detect(eta_v * iv) / eta_v,
                };
                relations[k] = m.relation(&thresholds).ok();
                sign_measurements[k] = Some(m);
            }
        }
        previous = Some(realized[k]);
    }

    Ok(EmulatedRun { t, magnitudes, relations, reference, sign_measurements, realized, x_min, distributions })
}

/// One Monte-Carlo parameter set and how well it reproduces the data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McSet {
    pub model: ApparatusModel,
    pub distance: f64,
    pub q0: f64,
    pub q_pi: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct McReport {
    pub sets: Vec<McSet>,
    pub best: usize,
    /// Mean `|Q0_i − Q0_best|` over the population.
    pub error_q0: f64,
    pub error_q_pi: f64,
}

impl McReport {
    pub fn best_set(&self) -> &McSet {
        &self.sets[self.best]
    }
}

/// Options of the Monte-Carlo error-bar estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McOptions {
    pub n_sets: usize,
    /// Number of leading steps compared against the data.
    pub horizon: usize,
    pub seed: u64,
    pub ranges: ErrorRanges,
    /// Detector efficiencies, measured separately and not fitted.
    pub detector_efficiency: [f64; 2],
}

impl Default for McOptions {
    fn default() -> Self {
        McOptions { n_sets: 1000, horizon: 7, seed: 0, ranges: ErrorRanges::default(), detector_efficiency: [1.0, 1.0] }
    }
}

/// L2 distance between two stacks of distributions over the first `horizon` rows.
pub fn distribution_distance(a: &[Vec<f64>], b: &[Vec<f64>], horizon: usize) -> f64 {
    a.iter()
        .zip(b)
        .take(horizon)
        .flat_map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| (x - y) * (x - y)))
        .sum::<f64>()
        .sqrt()
}

/// Draws `n_sets` apparatus models uniformly inside the error ranges, ranks
/// them by how closely they reproduce `observed` and reports the mean
/// deviation of the invariants from the best-fitting model.
///
/// `observed[k]` is the position distribution after step `k + 1` on the
/// window `[-t-1, t+1]`, as in [`EmulatedRun::distributions`].
pub fn monte_carlo_errorbars(
    system: &ScatteringSystem,
    t: usize,
    observed: &[Vec<f64>],
    options: &McOptions,
) -> Result<McReport> {
    if observed.len() < options.horizon || t < options.horizon {
        return Err(Error::InvalidParameter(format!(
            "observed data has {} steps, the fit needs {}",
            observed.len().min(t),
            options.horizon
        )));
    }
    if options.n_sets == 0 {
        return Err(Error::InvalidParameter("n_sets must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let r = options.ranges;
    let models: Vec<ApparatusModel> = (0..options.n_sets)
        .map(|_| ApparatusModel {
            detector_efficiency: options.detector_efficiency,
            loss_asymmetry: rng.random_range(-r.loss_asymmetry..=r.loss_asymmetry),
            eom_error: rng.random_range(-r.eom_error..=r.eom_error),
            sbc_error: rng.random_range(-r.sbc_error..=r.sbc_error),
        })
        .collect();
    let sets: Vec<McSet> = models
        .par_iter()
        .map(|model| {
            let run = emulate_measurement(system, t, model, Readout::Exact)?;
            let q = invariants(&run.realized_series(), Gauge::reference())?;
            Ok(McSet {
                model: *model,
                distance: distribution_distance(&run.distributions, observed, options.horizon),
                q0: q.q0,
                q_pi: q.q_pi,
            })
        })
        .collect::<Result<_>>()?;
    let best = (0..sets.len()).min_by(|&a, &b| sets[a].distance.total_cmp(&sets[b].distance)).expect("n_sets > 0");
    let n = sets.len() as f64;
    let error_q0 = sets.iter().map(|s| (s.q0 - sets[best].q0).abs()).sum::<f64>() / n;
    let error_q_pi = sets.iter().map(|s| (s.q_pi - sets[best].q_pi).abs()).sum::<f64>() / n;
    Ok(McReport { sets, best, error_q0, error_q_pi })
}
