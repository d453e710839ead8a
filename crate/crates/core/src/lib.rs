//! Vertical profiles of uniform random binary trees.
//!
//! The abscissa of a vertex is its number of right steps minus its number of
//! left steps from the root. The vertical profile `M_i` counts vertices at
//! abscissa `i`; together with its discrete derivative `Δ_i = M_i − M_{i−1}`
//! and its running sum `S_i` it forms the triple `(Δ, M, S)`. This crate
//! provides:
//!
//! - [`tree`]: enumeration, exactly uniform sampling (streaming up to 10^8
//!   vertices), profiles and their rescaling.
//! - [`profile_law`]: the exact number of trees with a given profile and
//!   conditional laws of the triple between two abscissas.
//! - [`companion`]: the negative-binomial Markov chain whose bridges have
//!   the same laws, with killing, sticking and an exact bridge solver.
//! - [`diffusion`]: Euler–Maruyama integration of the limiting diffusion
//!   and a chain-versus-diffusion comparison.
//! - [`series`]: exact power series for branch generating functions and
//!   finite-`n` moment oracles.
//! - [`stats`]: Kolmogorov–Smirnov, chi-square and moment estimates.
//! - [`verify`]: the verification suites behind `ise-lab verify`.

pub mod companion;
pub mod diffusion;
mod error;
pub mod path_law;
pub mod profile_law;
pub mod rng;
pub mod series;
pub mod stats;
pub mod tree;
pub mod verify;

pub use error::{Error, Result};
pub use path_law::{PathLaw, Triple};
