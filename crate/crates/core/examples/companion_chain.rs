//! The negative-binomial chain that drives the profile triple.

use ise_lab::companion::{rescaled_chain, step_pmf, Freeze};
use ise_lab::rng::{rng_for, streams};
use ise_lab::tree::RealTriple;

fn main() -> ise_lab::Result<()> {
    let pmf = step_pmf(3)?;
    println!("increment law for m = 3 (support from {}):", pmf.d_min());
    for (d, p) in pmf.iter().take(8) {
        println!("  P(d = {d:>2}) = {p}");
    }
    println!("  total mass {}", pmf.total_mass());

    let z0 = RealTriple {
        delta: 0.0,
        m: 1.0,
        s: 0.0,
    };
    for n in [256u64, 65_536, 16_777_216] {
        let mut stuck = 0;
        let mut mean_m = 0.0;
        let trials = 2000;
        for i in 0..trials {
            let mut rng = rng_for(42, streams::CHAIN + i);
            let path = rescaled_chain(n, z0, 0.1, 1.0, Freeze::AtCrossing, &mut rng)?;
            stuck += usize::from(path.is_stuck());
            mean_m += path.at(1.0).m / trials as f64;
        }
        println!("n = {n:>9}: stuck by T = 1 in {stuck}/{trials}, mean m(1) = {mean_m:.4}");
    }
    Ok(())
}
