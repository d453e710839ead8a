//! Exact formal power series, branch generating functions and finite-n moment oracles.

mod fps;
mod gf;
mod moments;

pub use fps::Fps;
pub use gf::{
    branch_gf, brute_branches, closed_form_near_singularity, external_edge_gf,
    fork_second_moment_gf, integer_coefficient, puiseux_probe, quadratic_fixed_point,
    solve_algebraic, ExternalCase, PuiseuxProbe, SeriesSystem, Substitution, BRUTE_BRANCH_CAP,
    SERIES_ORDER_CAP,
};
pub use moments::{
    bound_pairs, combination_moment, fit_moment_bound, fit_small_gap_constant, increment_moment,
    marked_count, moment_exact, moment_grid, signed_moment_by_marks, signed_moment_by_profiles,
    small_gap_check, write_moment_grid, BoundFit, MarkedCount, MomentRow, SignedMarks,
    SmallGapReport, TreeCensus, MOMENT_N_CAP, MOMENT_P_CAP,
};
