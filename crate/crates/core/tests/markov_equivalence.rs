use ise_lab::companion::conditional_path_law_dp;
use ise_lab::profile_law::{BoundaryCondition, ProfileDistribution};
use ise_lab::Triple;

fn check_all(n: u64, lo: i64) -> usize {
    let dist = ProfileDistribution::new(n).unwrap();
    let boundaries = dist.positive_boundaries(lo);
    assert!(!boundaries.is_empty());
    for bc in &boundaries {
        let tree_side = dist.conditional_path_law(bc).unwrap();
        let chain_side = conditional_path_law_dp(bc.k1, bc.k2, bc.z1, bc.z2, n as i64).unwrap();
        assert!(tree_side.is_normalized(), "{bc:?}");
        assert_eq!(tree_side, chain_side, "laws differ for {bc:?}");
    }
    boundaries.len()
}

#[test]
fn bridges_agree_right_of_root() {
    for n in 3..=7 {
        check_all(n, 1);
    }
}

#[test]
fn bridges_agree_at_n8() {
    let count = check_all(8, 1);
    assert!(count > 100, "only {count} boundary conditions");
}

#[test]
fn bridges_agree_left_of_root() {
    // Windows left of the root, with the chain still run from left to right.
    let n = 7;
    let dist = ProfileDistribution::new(n).unwrap();
    for p in dist.iter().map(|(p, _)| p.clone()) {
        if p.ell() > -2 {
            continue;
        }
        let path = p.triple(p.ell(), -1).unwrap();
        let pts = path.points();
        for a in 0..pts.len() {
            for b in a + 1..pts.len() {
                let bc = BoundaryCondition {
                    k1: p.ell() + a as i64,
                    k2: p.ell() + b as i64,
                    z1: pts[a],
                    z2: pts[b],
                };
                let tree_side = dist.conditional_path_law(&bc).unwrap();
                let chain_side =
                    conditional_path_law_dp(bc.k1, bc.k2, bc.z1, bc.z2, n as i64).unwrap();
                assert_eq!(tree_side, chain_side, "laws differ for {bc:?}");
            }
        }
    }
}

#[test]
fn null_boundaries_are_empty_on_both_sides() {
    let dist = ProfileDistribution::new(6).unwrap();
    let bc = BoundaryCondition {
        k1: 1,
        k2: 3,
        z1: Triple::new(0, 1, 5),
        z2: Triple::new(0, 1, 4),
    };
    assert!(dist.conditional_path_law(&bc).unwrap().is_empty());
    assert!(conditional_path_law_dp(1, 3, bc.z1, bc.z2, 6)
        .unwrap()
        .is_empty());
}
