//! Rescaled chain against Euler–Maruyama samples of the limiting diffusion.

use ise_lab::diffusion::{
    compare_chain_to_diffusion, integrate, ComparisonConfig, Coordinate, IntegratorConfig,
    Reference,
};
use ise_lab::rng::{rng_for, streams};
use ise_lab::tree::RealTriple;

fn main() -> ise_lab::Result<()> {
    let z0 = RealTriple {
        delta: 0.0,
        m: 1.0,
        s: 0.0,
    };

    let cfg = IntegratorConfig::new(1e-3, 0.01, 1.0)?;
    let path = integrate(z0, &cfg, &mut rng_for(7, streams::DIFFUSION))?;
    let end = path.terminal();
    println!(
        "one path: (δ, m, s)(1) = ({:.4}, {:.4}, {:.4}), stuck at {:?}",
        end.delta,
        end.m,
        end.s,
        path.stuck_time()
    );

    let cmp = ComparisonConfig {
        z0,
        epsilon: 0.1,
        horizon: 1.0,
        trials: 4000,
        reference_dt: 1.0 / 1024.0,
        freeze: Default::default(),
    };
    let sizes = [1u64 << 8, 1 << 12, 1 << 16];
    let report = compare_chain_to_diffusion(&sizes, &cmp, 3)?;
    println!("KS distance of m(1), chain vs diffusion:");
    for n in sizes {
        let fine = report
            .statistic(n, Reference::Fine, Coordinate::M, 1.0)
            .unwrap_or(f64::NAN);
        let coarse = report
            .statistic(n, Reference::Coarse, Coordinate::M, 1.0)
            .unwrap_or(f64::NAN);
        println!("  n = {n:>6}: fine step {fine:.4}, chain step {coarse:.4}");
    }
    for (n, f) in &report.stuck_fraction {
        println!("  n = {n:>6}: stuck fraction {f:.3}");
    }
    Ok(())
}
