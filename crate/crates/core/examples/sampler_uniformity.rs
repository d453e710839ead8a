//! The cycle-lemma sampler hits every binary tree equally often.

use std::collections::HashMap;

use ise_lab::stats::chi_square_uniform;
use ise_lab::tree::{enumerate_trees, sample_uniform};

fn main() -> ise_lab::Result<()> {
    let n = 4;
    let trees: Vec<String> = enumerate_trees(n)?.map(|t| t.to_string()).collect();
    let index: HashMap<&str, usize> = trees
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_str(), i))
        .collect();
    let mut counts = vec![0u64; trees.len()];
    let draws = 140_000;
    for seed in 0..draws {
        counts[index[sample_uniform(n as u64, seed)?.to_string().as_str()]] += 1;
    }
    for (t, c) in trees.iter().zip(&counts) {
        println!("{t:<14} {c}");
    }
    let r = chi_square_uniform(&counts)?;
    println!(
        "chi-square {:.2} on {} cells, p = {:.4}",
        r.statistic, r.n2, r.p_value
    );
    Ok(())
}
