//! Linear fading-memory functionals on semi-infinite sequences.
//!
//! Inputs are sequences `z = (…, z_{-1}, z_0)` in `R^d` indexed by `t ≤ 0`.
//! A linear functional `H` with finite-dimensional codomain is described by
//! its convolution kernel `κ_t = H ∘ δ^t`, and its fading-memory behaviour
//! is read off summability properties of `‖κ_t‖`.
//!
//! - [`seqspace`]: finitely supported sequences, shifts, truncations and
//!   weighted `ℓ^p` norms.
//! - [`convrep`]: kernels with certified tails, evaluation, classification,
//!   weighting sequences, kernel extraction and cone certificates.
//! - [`ssm`]: linear state-space realizations, stability, recurrent vs.
//!   convolution evaluation and instability witnesses.
//! - [`rkhs`]: sequence kernels, kernel ridge regression and the
//!   truncated-sample / finite-memory equivalence.
//! - [`duality`]: functionals vs. time-invariant filters on a window.
//! - [`cli`]: the command layer behind the `fadekit` binary.

pub mod cli;
pub mod convrep;
pub mod duality;
pub mod error;
pub mod exponent;
pub mod functional;
pub mod interval;
pub mod rkhs;
pub mod sample;
pub mod seqspace;
pub mod ssm;

pub use error::{Error, Result};
pub use functional::Functional;
pub use interval::Interval;
pub use seqspace::{FiniteSeq, WeightingSeq};
