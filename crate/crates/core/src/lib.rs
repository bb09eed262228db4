//! Extraction of two repetitive group-sparse transient trains from a noisy
//! vibration record.
//!
//! The observation is modeled as `y = x1 + x2 + w`, where each `x_i` is a
//! sequence of short transients recurring with a known period and `w` is
//! white Gaussian noise. [`solver::rtea_solve`] recovers both trains at once
//! by minimizing a convex objective with three overlapping-group
//! regularizers, one of which may be non-convex. [`analysis`] then exposes the
//! fault rates through the Hilbert envelope spectrum of each component.
//!
//! ```
//! use rtea::paramselect::{default_config, PeriodSpec, Tuning};
//! use rtea::signalgen::{gen_example1, Example1};
//! use rtea::solver::{rtea_solve, Init};
//!
//! let data = gen_example1(&Example1::with_seed(1)).unwrap();
//! let sel = default_config(
//!     &data.y,
//!     &PeriodSpec::from_samples(32.0, 3, 4),
//!     &PeriodSpec::from_samples(53.0, 3, 4),
//!     &Tuning::default(),
//! )
//! .unwrap();
//! let out = rtea_solve(&data.y, &sel.config, Init::Observation).unwrap();
//! assert_eq!(out.x1.len(), data.y.len());
//! ```

pub mod analysis;
pub mod cli;
pub mod error;
pub mod paramselect;
pub mod penalty;
pub mod regularizer;
pub mod signalgen;
pub mod solver;

pub use error::{Error, Result};
pub use penalty::{PenaltyFamily, PenaltySpec};
pub use regularizer::WeightArray;
pub use solver::{DecompositionResult, Init, SolverConfig};
