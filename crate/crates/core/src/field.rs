//! Position-dependent coin fields `Ĉ(θ) = Σ_x |x⟩⟨x| ⊗ R(θ_x)`.

use crate::angle;
use crate::coin::Coin;

/// Coin angles over a contiguous region; every position outside the region
/// is lead and resolves to the identity coin.
#[derive(Clone, Debug, PartialEq)]
pub struct CoinField {
    start: i64,
    angles: Vec<f64>,
    coins: Vec<Coin>,
}

impl CoinField {
    /// A field that is identity everywhere.
    pub fn lead() -> Self {
        CoinField { start: 0, angles: Vec::new(), coins: Vec::new() }
    }

    /// Angles (radians) for positions `start, start + 1, ...`.
    pub fn new(start: i64, angles: Vec<f64>) -> Self {
        let angles: Vec<f64> = angles.into_iter().map(angle::reduce).collect();
        let coins = angles.iter().map(|&t| Coin::rotation(t)).collect();
        CoinField { start, angles, coins }
    }

    pub fn uniform(start: i64, len: usize, theta: f64) -> Self {
        Self::new(start, vec![theta; len])
    }

    /// Inclusive sample region, or `None` for a pure lead.
    pub fn region(&self) -> Option<(i64, i64)> {
        if self.angles.is_empty() {
            None
        } else {
            Some((self.start, self.start + self.angles.len() as i64 - 1))
        }
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    #[inline]
    fn offset(&self, x: i64) -> Option<usize> {
        let k = x - self.start;
        (k >= 0 && (k as usize) < self.angles.len()).then_some(k as usize)
    }

    pub fn angle_at(&self, x: i64) -> f64 {
        self.offset(x).map_or(0.0, |k| self.angles[k])
    }

    #[inline]
    pub fn coin_at(&self, x: i64) -> &Coin {
        match self.offset(x) {
            Some(k) => &self.coins[k],
            None => &Coin::IDENTITY,
        }
    }

    /// True when every position carries the identity coin.
    pub fn is_identity(&self) -> bool {
        self.angles.iter().all(|&t| t == 0.0)
    }

    /// Rebuilds the field over `[x_min, x_max]` with every angle (lead
    /// included) passed through `f`.
    pub fn remap(&self, x_min: i64, x_max: i64, f: impl Fn(f64) -> f64) -> CoinField {
        let angles = (x_min..=x_max).map(|x| f(self.angle_at(x))).collect();
        CoinField::new(x_min, angles)
    }
}
