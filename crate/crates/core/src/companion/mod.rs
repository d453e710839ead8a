//! The companion Markov chain of the profile triple.
//!
//! Given `M_i = m ≥ 1`, the next derivative is `Δ_{i+1} = Δ_i + Σ_{k=1}^{m} (g_k − 2)`
//! with independent geometric(1/2) variables `g_k ≥ 1`, and `M`, `S` follow by
//! summation. Conditioned on its values at two abscissas on one side of the
//! root, the triple of a uniform binary tree has the same law as this chain
//! conditioned on the same two values; [`conditional_path_law_dp`] computes
//! the chain side exactly.

mod bridge;
mod chain;
mod kernel;

pub use bridge::{bridge_law, conditional_path_law_dp, CompanionKernel, TransitionWeight};
pub use chain::{
    integer_start, rescaled_chain, run_stuck, step, Freeze, RescaledChainPath, Status, TripleState,
};
pub use kernel::{
    increment_probability, negative_binomial_bits, negative_binomial_inverse_cdf, sample_increment,
    sample_increment_naive, step_pmf, tail_probability, StepPmf, INVERSE_CDF_MAX_M,
};
