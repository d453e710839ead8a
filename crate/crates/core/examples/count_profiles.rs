//! Exact profile counts against brute-force enumeration.

use ise_lab::profile_law::{count_profile, ProfileDistribution};
use ise_lab::tree::{enumerate_trees, VerticalProfile};

fn main() -> ise_lab::Result<()> {
    let n = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(6u64);

    let mut seen = std::collections::BTreeMap::<VerticalProfile, u64>::new();
    for tree in enumerate_trees(n as usize)? {
        *seen.entry(VerticalProfile::of_tree(&tree)).or_default() += 1;
    }
    let dist = ProfileDistribution::new(n)?;
    println!(
        "n = {n}: {} trees, {} distinct profiles",
        dist.total(),
        dist.len()
    );

    let mut rows: Vec<_> = seen.iter().collect();
    rows.sort_by(|a, b| b.1.cmp(a.1));
    for (p, &c) in rows.iter().take(8) {
        println!(
            "{:>24}  enumerated {c:>4}  formula {}",
            p.to_string(),
            count_profile(p)?
        );
    }

    for text in ["(1,1;3,1)", "(;1,1,2,1,1)"] {
        let p: VerticalProfile = text.parse()?;
        println!("{text} is the profile of {} trees", count_profile(&p)?);
    }
    Ok(())
}
