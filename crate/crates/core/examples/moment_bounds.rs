//! Exact fourth moments of profile increments and the small-gap moment approximation.

use std::io;

use ise_lab::series::{
    bound_pairs, fit_moment_bound, fit_small_gap_constant, moment_grid, small_gap_check,
    write_moment_grid,
};

fn main() -> ise_lab::Result<()> {
    let mut rows = Vec::new();
    for n in 8..=11 {
        rows.extend(moment_grid(n, 4, &bound_pairs(n))?);
    }
    if let Some(fit) = fit_moment_bound(&rows) {
        println!(
            "fourth-moment constant {:.5} at n = {}, (a, b) = ({}, {})",
            fit.constant, fit.n, fit.a, fit.b
        );
    }
    write_moment_grid(io::stdout().lock(), &rows[..6])?;

    let reports: Vec<_> = (1..=3)
        .map(|q| small_gap_check(12, 1, 0, q))
        .collect::<Result<_, _>>()?;
    for r in &reports {
        println!(
            "μ = {:.3}: lhs {} rhs {} ratio {:.5}",
            r.mu,
            r.lhs,
            r.rhs,
            r.ratio_f64().unwrap_or(f64::NAN)
        );
    }
    println!(
        "fitted C = {:.5}",
        fit_small_gap_constant(&reports).unwrap_or(f64::NAN)
    );
    Ok(())
}
