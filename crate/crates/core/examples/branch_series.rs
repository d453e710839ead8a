//! Branch generating functions as exact power series, checked against brute force.

use ise_lab::series::{
    brute_branches, fork_second_moment_gf, puiseux_probe, solve_algebraic, Substitution,
};

fn main() -> ise_lab::Result<()> {
    let sys = solve_algebraic(12, Substitution::TreeWeight)?;
    println!("T = {}", sys.trees);
    println!("U = {}", sys.u);
    for i in 0..=3 {
        let h = sys.branch(i);
        let brute: Vec<u64> = (0..=8)
            .map(|k| brute_branches(i, k))
            .collect::<Result<_, _>>()?;
        println!("H_{i} = {h}");
        println!("    brute force {brute:?}");
    }

    let shifted = solve_algebraic(12, Substitution::ShiftedTree)?;
    println!("with y = t(T − 1) instead: H_0 = {}", shifted.branch(0));

    let fork = fork_second_moment_gf(&solve_algebraic(24, Substitution::TreeWeight)?)?;
    println!("fork series = {fork}");

    let probe = puiseux_probe(4e-12, 4e-10, 40)?;
    println!(
        "near t = 1/4: 1 − U ~ (1 − 4t)^{:.4}, B ~ (1 − 4t)^{:.4}",
        probe.one_minus_u_slope, probe.b_slope
    );
    Ok(())
}
