//! Numerical laboratory for one-dimensional split-step discrete-time quantum
//! walks in lead–sample scattering geometries.
//!
//! The crate is organised bottom-up:
//!
//! * [`coin`], [`field`], [`state`] and [`walk`] hold the exact state-vector
//!   dynamics (coin rotations, asymmetric shifts, the split-step unitary and
//!   its double-step equivalent).
//! * [`scattering`] builds lead–sample systems, reads out reflection
//!   amplitudes and turns them into the invariant pair `(Q0, Qπ)`.
//! * [`disorder`] runs seeded binary-disorder ensembles.
//! * [`edge`] simulates bulk–bulk interfaces and measures edge localization.
//! * [`apparatus`] emulates the optical measurement chain: sign extraction,
//!   loss and angle errors, and Monte-Carlo error bars.
//!
//! Angles are radians throughout; [`angle::from_pi`] converts the
//! "multiples of π" notation used in configuration files.

pub mod angle;
pub mod apparatus;
pub mod coin;
pub mod disorder;
pub mod edge;
mod error;
pub mod field;
pub mod scattering;
pub mod state;
pub mod stats;
pub mod walk;

pub use num_complex::Complex64 as C64;

pub use apparatus::{ApparatusModel, ErrorRanges, Relation, SignMeasurement};
pub use coin::{coin_matrix, Coin, CoinState};
pub use disorder::{DisorderSpec, EnsembleResult};
pub use edge::{InterfaceSystem, LocalizationRecord};
pub use error::{Error, Result};
pub use field::CoinField;
pub use scattering::{Gauge, InvariantPair, ReflectionSeries, ScatteringSystem};
pub use state::WalkerState;
pub use walk::{SplitStepProtocol, StepMode};
