//! Walker state: complex amplitudes `a_{x,c}` over a finite window.
//!
//! The window grows on demand when a shift would move non-zero amplitude
//! past its edge, so truncation is never lossy. Positions outside the window
//! have amplitude exactly zero.

use crate::coin::{CoinState, H, V};
use crate::field::CoinField;
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct WalkerState {
    x_min: i64,
    amps: Vec<[C64; 2]>,
    time: u64,
}

impl WalkerState {
    /// `|x, c⟩` on the one-site window `[x, x]`.
    pub fn localized(x: i64, coin: CoinState) -> Self {
        let mut spinor = [ZERO; 2];
        spinor[coin.index()] = C64::new(1.0, 0.0);
        WalkerState { x_min: x, amps: vec![spinor], time: 0 }
    }

    /// Amplitudes for positions `x_min, x_min + 1, ...` as `[H, V]` spinors.
    pub fn from_amplitudes(x_min: i64, amps: Vec<[C64; 2]>) -> Self {
        assert!(!amps.is_empty(), "window must hold at least one site");
        WalkerState { x_min, amps, time: 0 }
    }

    /// Extends the window to cover at least `[x_min, x_max]`.
    pub fn with_window(mut self, x_min: i64, x_max: i64) -> Self {
        self.cover(x_min, x_max);
        self
    }

    pub fn cover(&mut self, x_min: i64, x_max: i64) {
        if x_min < self.x_min {
            let extra = (self.x_min - x_min) as usize;
            self.amps.splice(0..0, std::iter::repeat_n([ZERO; 2], extra));
            self.x_min = x_min;
        }
        let cur_max = self.x_max();
        if x_max > cur_max {
            let extra = (x_max - cur_max) as usize;
            self.amps.extend(std::iter::repeat_n([ZERO; 2], extra));
        }
    }

    pub fn x_min(&self) -> i64 {
        self.x_min
    }

    pub fn x_max(&self) -> i64 {
        self.x_min + self.amps.len() as i64 - 1
    }

    pub fn window(&self) -> (i64, i64) {
        (self.x_min, self.x_max())
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub(crate) fn set_time(&mut self, time: u64) {
        self.time = time;
    }

    pub fn spinors(&self) -> &[[C64; 2]] {
        &self.amps
    }

    pub fn amplitude(&self, x: i64, coin: CoinState) -> C64 {
        let k = x - self.x_min;
        if k < 0 || k as usize >= self.amps.len() {
            ZERO
        } else {
            self.amps[k as usize][coin.index()]
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|s| s[H].norm_sqr() + s[V].norm_sqr()).sum()
    }

    /// `P_x = Σ_c |a_{x,c}|²` for every position in the window.
    pub fn position_probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|s| s[H].norm_sqr() + s[V].norm_sqr()).collect()
    }

    /// Position probability, zero outside the window.
    pub fn probability_at(&self, x: i64) -> f64 {
        self.amplitude(x, CoinState::H).norm_sqr() + self.amplitude(x, CoinState::V).norm_sqr()
    }

    /// Smallest interval holding all non-zero amplitudes.
    pub fn support(&self) -> Option<(i64, i64)> {
        let nz = |s: &[C64; 2]| s[H] != ZERO || s[V] != ZERO;
        let first = self.amps.iter().position(nz)?;
        let last = self.amps.iter().rposition(nz)?;
        Some((self.x_min + first as i64, self.x_min + last as i64))
    }

    /// Largest componentwise difference, comparing over the union of windows.
    pub fn max_distance(&self, other: &WalkerState) -> f64 {
        let lo = self.x_min.min(other.x_min);
        let hi = self.x_max().max(other.x_max());
        let mut d: f64 = 0.0;
        for x in lo..=hi {
            for c in CoinState::ALL {
                d = d.max((self.amplitude(x, c) - other.amplitude(x, c)).norm());
            }
        }
        d
    }

    /// `S+`: H components move `x → x+1`, V stays.
    pub fn apply_shift_plus(&mut self) {
        if self.amps[self.amps.len() - 1][H] != ZERO {
            self.amps.push([ZERO; 2]);
        }
        let n = self.amps.len();
        for k in (1..n).rev() {
            self.amps[k][H] = self.amps[k - 1][H];
        }
        self.amps[0][H] = ZERO;
    }

    /// `S−`: V components move `x → x−1`, H stays.
    pub fn apply_shift_minus(&mut self) {
        if self.amps[0][V] != ZERO {
            self.amps.insert(0, [ZERO; 2]);
            self.x_min -= 1;
        }
        let n = self.amps.len();
        for k in 0..n - 1 {
            self.amps[k][V] = self.amps[k + 1][V];
        }
        self.amps[n - 1][V] = ZERO;
    }

    /// `S`: H moves right and V moves left in the same application.
    pub fn apply_shift_symmetric(&mut self) {
        self.apply_shift_plus();
        self.apply_shift_minus();
    }

    /// Multiplies every spinor by the coin of its position.
    pub fn apply_coin_field(&mut self, field: &CoinField) {
        let x0 = self.x_min;
        for (k, s) in self.amps.iter_mut().enumerate() {
            *s = field.coin_at(x0 + k as i64).apply(*s);
        }
    }

    /// Scales every H amplitude by `h` and every V amplitude by `v`.
    pub fn scale_components(&mut self, h: f64, v: f64) {
        for s in &mut self.amps {
            s[H] *= h;
            s[V] *= v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn shift_plus_moves_h() {
        let mut s = WalkerState::localized(0, CoinState::H);
        s.apply_shift_plus();
        assert_eq!(s.amplitude(1, CoinState::H), c(1.0, 0.0));
        assert_eq!(s.amplitude(0, CoinState::H), ZERO);
    }

    #[test]
    fn shift_minus_leaves_h() {
        let mut s = WalkerState::localized(0, CoinState::H);
        s.apply_shift_minus();
        assert_eq!(s.amplitude(0, CoinState::H), c(1.0, 0.0));
        assert_eq!(s.window(), (0, 0));
    }

    #[test]
    fn symmetric_shift_splits_superposition() {
        let mut s = WalkerState::from_amplitudes(0, vec![[c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]]);
        s.apply_shift_symmetric();
        assert_eq!(s.amplitude(1, CoinState::H), c(FRAC_1_SQRT_2, 0.0));
        assert_eq!(s.amplitude(-1, CoinState::V), c(FRAC_1_SQRT_2, 0.0));
        assert_eq!(s.amplitude(0, CoinState::H), ZERO);
        assert_eq!(s.amplitude(0, CoinState::V), ZERO);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn window_grows_only_when_needed() {
        let mut s = WalkerState::localized(0, CoinState::V).with_window(-3, 3);
        s.apply_shift_minus();
        assert_eq!(s.window(), (-3, 3));
        assert_eq!(s.amplitude(-1, CoinState::V), c(1.0, 0.0));
    }

    #[test]
    fn identity_field_leaves_state_unchanged() {
        let mut s = WalkerState::from_amplitudes(-1, vec![[c(0.6, 0.0), ZERO], [ZERO, c(0.0, 0.8)]]);
        let before = s.clone();
        s.apply_coin_field(&CoinField::lead());
        assert_eq!(s, before);
    }

    #[test]
    fn coin_field_acts_per_site() {
        let mut s = WalkerState::localized(0, CoinState::H);
        s.apply_coin_field(&CoinField::new(0, vec![FRAC_PI_2]));
        assert!(s.amplitude(0, CoinState::H).norm() < 1e-15);
        assert!((s.amplitude(0, CoinState::V) - c(0.0, -1.0)).norm() < 1e-15);

        let mut s = WalkerState::localized(0, CoinState::H);
        s.apply_coin_field(&CoinField::new(0, vec![FRAC_PI_4]));
        assert!((s.amplitude(0, CoinState::H) - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((s.amplitude(0, CoinState::V) - c(0.0, -FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn support_and_cover() {
        let s = WalkerState::localized(2, CoinState::V).with_window(-2, 5);
        assert_eq!(s.window(), (-2, 5));
        assert_eq!(s.support(), Some((2, 2)));
        assert_eq!(s.probability_at(2), 1.0);
        assert_eq!(s.probability_at(9), 0.0);
    }
}
