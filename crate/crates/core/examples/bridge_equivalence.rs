//! Conditioned on its values at two abscissas, the profile triple of a uniform
//! tree has the law of the companion chain bridge. Both sides are exact.

use ise_lab::companion::conditional_path_law_dp;
use ise_lab::profile_law::ProfileDistribution;

fn main() -> ise_lab::Result<()> {
    let n = 8;
    let dist = ProfileDistribution::new(n)?;
    let boundaries = dist.positive_boundaries(1);
    let mut agree = 0;
    for bc in &boundaries {
        let trees = dist.conditional_path_law(bc)?;
        let chain = conditional_path_law_dp(bc.k1, bc.k2, bc.z1, bc.z2, n as i64)?;
        agree += usize::from(trees == chain);
    }
    println!(
        "n = {n}: {agree}/{} boundary conditions give identical laws",
        boundaries.len()
    );

    let widest = boundaries
        .iter()
        .max_by_key(|bc| dist.conditional_path_law(bc).map(|l| l.len()).unwrap_or(0))
        .expect("boundaries exist");
    println!("largest bridge: {widest:?}");
    for (path, p) in dist.conditional_path_law(widest)?.iter() {
        let ms: Vec<i64> = path.iter().map(|z| z.m).collect();
        println!("  m = {ms:?} with probability {p}");
    }
    Ok(())
}
