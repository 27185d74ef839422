//! Coin space: the two polarization basis states and the Pauli-x rotation
//! `R(θ) = exp(-i σx θ)` that acts on them.

use crate::{angle, C64};
use serde::{Deserialize, Serialize};

/// Internal basis state of the walker. `H` moves right under the
/// symmetric shift, `V` moves left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoinState {
    H,
    V,
}

impl CoinState {
    pub const ALL: [CoinState; 2] = [CoinState::H, CoinState::V];

    pub fn index(self) -> usize {
        match self {
            CoinState::H => 0,
            CoinState::V => 1,
        }
    }
}

/// Spinor index of the H component.
pub const H: usize = 0;
/// Spinor index of the V component.
pub const V: usize = 1;

/// A 2×2 complex matrix acting on the `(H, V)ᵀ` spinor of one site.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coin(pub [[C64; 2]; 2]);

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

impl Coin {
    pub const IDENTITY: Coin = Coin([[ONE, ZERO], [ZERO, ONE]]);

    /// `R(θ) = [[cos θ, -i sin θ], [-i sin θ, cos θ]]`, θ reduced mod 2π.
    pub fn rotation(theta: f64) -> Coin {
        let theta = angle::reduce(theta);
        if theta == 0.0 {
            return Coin::IDENTITY;
        }
        let (s, c) = theta.sin_cos();
        let off = C64::new(0.0, -s);
        Coin([[C64::new(c, 0.0), off], [off, C64::new(c, 0.0)]])
    }

    #[inline]
    pub fn apply(&self, spinor: [C64; 2]) -> [C64; 2] {
        let m = &self.0;
        [m[0][0] * spinor[0] + m[0][1] * spinor[1], m[1][0] * spinor[0] + m[1][1] * spinor[1]]
    }

    pub fn adjoint(&self) -> Coin {
        let m = &self.0;
        Coin([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn matmul(&self, other: &Coin) -> Coin {
        let (a, b) = (&self.0, &other.0);
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Coin(out)
    }

    /// Largest entrywise distance to another matrix.
    pub fn max_distance(&self, other: &Coin) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        d
    }
}

/// The coin operator for a rotation angle in radians.
pub fn coin_matrix(theta: f64) -> Coin {
    Coin::rotation(theta)
}
