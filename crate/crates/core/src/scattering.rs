//! Lead–sample scattering: reflection amplitudes `r_j = ⟨−1,V| Ûʲ |0,H⟩`,
//! the reflection element `r(ε) = Σ_j e^{ijε} r_j`, and the invariant pair
//! `(Q0, Qπ) = ½ (r(0), r(π))`.
//!
//! The sample occupies cells `n ≥ 0` of the doubled lattice. Its first coin
//! acts at split-step position `n`, its second coin at position
//! `n + SECOND_COIN_OFFSET`; the second coin at `x = 0` therefore belongs to
//! the lead. With this termination the reflection element of a gapped clean
//! sample converges to a unit-modulus number.

use crate::coin::CoinState;
use crate::error::{Error, Result};
use crate::field::CoinField;
use crate::state::WalkerState;
use crate::walk::{split_step, split_step_identity_first, SplitStepProtocol};
use crate::C64;
use rayon::prelude::*;
use std::f64::consts::{PI, TAU};

/// Phase that turns the measured reflection elements real with the sign
/// fixed by the reference pulse.
pub const REFERENCE_GAUGE: C64 = C64::new(0.0, -1.0);

/// Position offset of the second coin relative to the sample cell it belongs to.
pub const SECOND_COIN_OFFSET: i64 = 1;

/// Below this `|r(0)|` the automatic gauge is undefined.
pub const GAUGE_FLOOR: f64 = 1e-6;

/// Coin angles of the sample, per cell `n = 0, 1, ...`.
#[derive(Clone, Debug, PartialEq)]
pub enum SampleCoins {
    Uniform(f64),
    /// Explicit angles; cells beyond the pattern are lead.
    Pattern(Vec<f64>),
}

impl SampleCoins {
    fn angles(&self, len: usize) -> Vec<f64> {
        match self {
            SampleCoins::Uniform(theta) => vec![*theta; len],
            SampleCoins::Pattern(v) => v.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            SampleCoins::Uniform(theta) => crate::angle::reduce(*theta) == 0.0,
            SampleCoins::Pattern(v) => v.iter().all(|&t| crate::angle::reduce(t) == 0.0),
        }
    }

    /// Angle of cell `n` (zero in the lead).
    pub fn angle(&self, n: usize) -> f64 {
        match self {
            SampleCoins::Uniform(theta) => *theta,
            SampleCoins::Pattern(v) => v.get(n).copied().unwrap_or(0.0),
        }
    }
}

/// Identity-coin lead on the left, sample on the right; input `|0,H⟩`,
/// read-out at `(−1, V)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScatteringSystem {
    pub first: SampleCoins,
    pub second: SampleCoins,
}

impl ScatteringSystem {
    pub fn new(first: SampleCoins, second: SampleCoins) -> Self {
        ScatteringSystem { first, second }
    }

    /// Homogeneous sample with `Ĉ1 = R(θ1)`, `Ĉ2 = R(θ2)`.
    pub fn clean(theta1: f64, theta2: f64) -> Self {
        Self::new(SampleCoins::Uniform(theta1), SampleCoins::Uniform(theta2))
    }

    /// Number of sample cells a `t`-step run can probe.
    pub fn light_cone_len(t: usize) -> usize {
        t + 2
    }

    /// Coin fields covering every cell reachable within `t` steps.
    pub fn protocol(&self, t: usize) -> SplitStepProtocol {
        let len = Self::light_cone_len(t);
        SplitStepProtocol::new(
            CoinField::new(0, self.first.angles(len)),
            CoinField::new(SECOND_COIN_OFFSET, self.second.angles(len)),
        )
    }

    /// Reflection amplitudes `r_1..r_t`. Samples with `Ĉ1 = 1` take a fast
    /// path that skips the identity sub-step; the result equals
    /// [`Self::reflection_amplitudes_plain`].
    pub fn reflection_amplitudes(&self, t: usize) -> ReflectionSeries {
        let protocol = self.protocol(t);
        if protocol.first.is_identity() {
            let mut state = WalkerState::localized(0, CoinState::H);
            let values = (0..t)
                .map(|_| {
                    split_step_identity_first(&mut state, &protocol.second);
                    state.amplitude(-1, CoinState::V)
                })
                .collect();
            ReflectionSeries::new(values)
        } else {
            read_out(&protocol, t)
        }
    }

    /// Reflection amplitudes through the full four-factor step.
    pub fn reflection_amplitudes_plain(&self, t: usize) -> ReflectionSeries {
        read_out(&self.protocol(t), t)
    }
}

fn read_out(protocol: &SplitStepProtocol, t: usize) -> ReflectionSeries {
    let mut state = WalkerState::localized(0, CoinState::H);
    let values = (0..t)
        .map(|_| {
            split_step(&mut state, protocol);
            state.amplitude(-1, CoinState::V)
        })
        .collect();
    ReflectionSeries::new(values)
}

/// `r_1..r_t`, stored with `values()[j - 1] = r_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReflectionSeries {
    values: Vec<C64>,
}

impl ReflectionSeries {
    pub fn new(values: Vec<C64>) -> Self {
        ReflectionSeries { values }
    }

    /// Builds `r_j = i ρ_j` from real signed amplitudes.
    pub fn from_imaginary_parts(rho: &[f64]) -> Self {
        Self::new(rho.iter().map(|&r| C64::new(0.0, r)).collect())
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn t(&self) -> usize {
        self.values.len()
    }

    /// `r_j` for 1-based `j`.
    pub fn get(&self, j: usize) -> Option<C64> {
        j.checked_sub(1).and_then(|k| self.values.get(k)).copied()
    }

    /// First `n` amplitudes.
    pub fn truncated(&self, n: usize) -> ReflectionSeries {
        Self::new(self.values[..n.min(self.values.len())].to_vec())
    }

    /// `Σ_j e^{ijε} r_j`.
    pub fn element(&self, epsilon: f64) -> C64 {
        self.values.iter().enumerate().map(|(k, r)| C64::cis((k + 1) as f64 * epsilon) * r).sum()
    }

    /// `r(0)`, the plain sum.
    pub fn sum(&self) -> C64 {
        self.values.iter().sum()
    }

    /// `r(π)`, the alternating sum with exact signs.
    pub fn alternating_sum(&self) -> C64 {
        self.values.iter().enumerate().map(|(k, r)| if k % 2 == 0 { -r } else { *r }).sum()
    }

    /// `Σ_j |r_j|²`.
    pub fn reflected_weight(&self) -> f64 {
        self.values.iter().map(|r| r.norm_sqr()).sum()
    }

    /// `max_j |Re r_j|`.
    pub fn max_real_part(&self) -> f64 {
        self.values.iter().fold(0.0, |m, r| m.max(r.re.abs()))
    }

    /// Imaginary parts `ρ_j` of `r_j = i ρ_j`.
    pub fn imaginary_parts(&self) -> Vec<f64> {
        self.values.iter().map(|r| r.im).collect()
    }

    pub fn scaled(&self, phase: C64) -> ReflectionSeries {
        Self::new(self.values.iter().map(|r| phase * r).collect())
    }
}

/// `Σ_{j=1..t} e^{ijε} r_j`.
pub fn reflection_matrix_element(series: &ReflectionSeries, epsilon: f64) -> C64 {
    series.element(epsilon)
}

/// How the global phase of the reflection elements is fixed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gauge {
    /// Rotate `r(0)` onto the real axis, choosing the sign closest to the
    /// reference convention.
    Auto,
    /// Multiply by the given unit phase.
    Fixed(C64),
}

impl Gauge {
    pub fn reference() -> Self {
        Gauge::Fixed(REFERENCE_GAUGE)
    }
}

/// `(Q0, Qπ)` after gauge fixing, plus the unreflected weight `1 − Σ|r_j|²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InvariantPair {
    pub q0: f64,
    pub q_pi: f64,
    pub residual: f64,
    pub gauge: C64,
}

impl InvariantPair {
    /// True when `Q0` and `Qπ` carry the same sign.
    pub fn same_sign(&self) -> bool {
        self.q0 * self.q_pi > 0.0
    }
}

pub fn invariants(series: &ReflectionSeries, gauge: Gauge) -> Result<InvariantPair> {
    let r0 = series.sum();
    let r_pi = series.alternating_sum();
    let phase = match gauge {
        Gauge::Fixed(g) => g,
        Gauge::Auto => {
            let magnitude = r0.norm();
            if magnitude < GAUGE_FLOOR {
                return Err(Error::DegenerateGauge { magnitude });
            }
            let g = r0.conj() / magnitude;
            if (g * REFERENCE_GAUGE.conj()).re >= 0.0 {
                g
            } else {
                -g
            }
        }
    };
    Ok(InvariantPair {
        q0: 0.5 * (phase * r0).re,
        q_pi: 0.5 * (phase * r_pi).re,
        residual: 1.0 - series.reflected_weight(),
        gauge: phase,
    })
}

/// Coin-angle paths through the `(θ1, θ2)` plane.
#[derive(Clone, Debug, PartialEq)]
pub enum ScanLine {
    /// `θ1 = 2θ2`; the grid holds θ2.
    Theta1Double(Vec<f64>),
    /// `θ2 = 2θ1`; the grid holds θ1.
    Theta2Double(Vec<f64>),
    /// Explicit `(θ1, θ2)` pairs; the scan parameter is the pair index.
    Pairs(Vec<(f64, f64)>),
}

impl ScanLine {
    /// `(parameter, θ1, θ2)` for every grid point, angles reduced mod 2π.
    pub fn points(&self) -> Vec<(f64, f64, f64)> {
        use crate::angle::reduce;
        match self {
            ScanLine::Theta1Double(g) => g.iter().map(|&a| (a, reduce(2.0 * a), reduce(a))).collect(),
            ScanLine::Theta2Double(g) => g.iter().map(|&a| (a, reduce(a), reduce(2.0 * a))).collect(),
            ScanLine::Pairs(p) => p.iter().enumerate().map(|(k, &(a, b))| (k as f64, reduce(a), reduce(b))).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanPoint {
    pub parameter: f64,
    pub theta1: f64,
    pub theta2: f64,
    /// `Err(DegenerateGauge)` marks a flagged, non-fatal point.
    pub invariants: Result<InvariantPair>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanResult {
    pub t: usize,
    pub points: Vec<ScanPoint>,
    /// Parameter values where `Q0·Qπ` changes sign, linearly interpolated.
    pub transitions: Vec<f64>,
}

/// Evaluates the invariants of clean samples along a scan line. Points are
/// independent and run in parallel; output keeps grid order.
pub fn scan_line(line: &ScanLine, t: usize, gauge: Gauge) -> ScanResult {
    let points: Vec<ScanPoint> = line
        .points()
        .into_par_iter()
        .map(|(parameter, theta1, theta2)| {
            let series = ScatteringSystem::clean(theta1, theta2).reflection_amplitudes(t);
            ScanPoint { parameter, theta1, theta2, invariants: invariants(&series, gauge) }
        })
        .collect();
    let transitions = sign_changes(&points);
    ScanResult { t, points, transitions }
}

fn sign_changes(points: &[ScanPoint]) -> Vec<f64> {
    let mut out = Vec::new();
    for w in points.windows(2) {
        let (Ok(a), Ok(b)) = (&w[0].invariants, &w[1].invariants) else { continue };
        let pa = a.q0 * a.q_pi;
        let pb = b.q0 * b.q_pi;
        if pa == 0.0 {
            continue;
        }
        if pa * pb <= 0.0 && pb != 0.0 || (pb == 0.0 && pa != 0.0) {
            let f = pa / (pa - pb);
            out.push(w[0].parameter + f * (w[1].parameter - w[0].parameter));
        }
    }
    out.dedup();
    out
}

/// A zero crossing of a sampled curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crossing {
    pub location: f64,
    /// Slope of the bracketing segment.
    pub slope: f64,
}

impl Crossing {
    /// Parameter range over which a `−½ → ½` step of this slope happens.
    pub fn width(&self) -> f64 {
        1.0 / self.slope.abs()
    }
}

/// First zero crossing of `ys(xs)` with `lo ≤ x ≤ hi`.
pub fn first_crossing(xs: &[f64], ys: &[f64], lo: f64, hi: f64) -> Option<Crossing> {
    xs.windows(2).zip(ys.windows(2)).find_map(|(x, y)| {
        let inside = x[0] >= lo && x[1] <= hi;
        (inside && y[0] * y[1] < 0.0).then(|| {
            let slope = (y[1] - y[0]) / (x[1] - x[0]);
            Crossing { location: x[0] - y[0] / slope, slope }
        })
    })
}

/// Cell label of the phase diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PhaseLabel {
    Phase { q0_positive: bool, q_pi_positive: bool },
    Boundary,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseCell {
    pub theta1: f64,
    pub theta2: f64,
    pub invariants: Result<InvariantPair>,
    pub label: PhaseLabel,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseDiagram {
    pub resolution: usize,
    pub t: usize,
    pub tolerance: f64,
    /// Row-major: `cells[i1 * resolution + i2]` has `θ1 = 2π i1 / n`, `θ2 = 2π i2 / n`.
    pub cells: Vec<PhaseCell>,
}

impl PhaseDiagram {
    pub fn cell(&self, i1: usize, i2: usize) -> &PhaseCell {
        &self.cells[i1 * self.resolution + i2]
    }
}

/// Labels a cell from its invariants at `t` and at `t/2`. A cell is a phase
/// only when both `|Q|` are within `tolerance` of ½ and neither drifted by
/// more than `tolerance` over the second half of the run.
pub fn classify(at_t: &InvariantPair, at_half: &InvariantPair, tolerance: f64) -> PhaseLabel {
    let quantized = at_t.q0.abs() >= 0.5 - tolerance && at_t.q_pi.abs() >= 0.5 - tolerance;
    let settled = (at_t.q0 - at_half.q0).abs() < tolerance && (at_t.q_pi - at_half.q_pi).abs() < tolerance;
    if quantized && settled {
        PhaseLabel::Phase { q0_positive: at_t.q0 > 0.0, q_pi_positive: at_t.q_pi > 0.0 }
    } else {
        PhaseLabel::Boundary
    }
}

/// Sweeps `(θ1, θ2)` over an `n × n` grid on `[0, 2π)²`.
pub fn phase_diagram(resolution: usize, t: usize, tolerance: f64, gauge: Gauge) -> Result<PhaseDiagram> {
    if resolution < 8 {
        return Err(Error::InvalidParameter(format!("phase diagram resolution must be at least 8, got {resolution}")));
    }
    let step = TAU / resolution as f64;
    let cells = (0..resolution * resolution)
        .into_par_iter()
        .map(|k| {
            let theta1 = (k / resolution) as f64 * step;
            let theta2 = (k % resolution) as f64 * step;
            let series = ScatteringSystem::clean(theta1, theta2).reflection_amplitudes(t);
            let full = invariants(&series, gauge);
            let half = invariants(&series.truncated(t / 2), gauge);
            let label = match (&full, &half) {
                (Ok(a), Ok(b)) => classify(a, b, tolerance),
                _ => PhaseLabel::Boundary,
            };
            PhaseCell { theta1, theta2, invariants: full, label }
        })
        .collect();
    Ok(PhaseDiagram { resolution, t, tolerance, cells })
}

/// Angular distance of `(θ1, θ2)` from the nearest gap-closing line
/// `θ1 ± θ2 ≡ 0 (mod π)`.
pub fn gap_closing_distance(theta1: f64, theta2: f64) -> f64 {
    let d = |a: f64| {
        let r = a.rem_euclid(PI);
        r.min(PI - r)
    };
    d(theta1 + theta2).min(d(theta1 - theta2))
}
