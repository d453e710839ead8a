use num_bigint::BigUint;
use proptest::prelude::*;

use ise_lab::profile_law::count_profile;
use ise_lab::tree::{
    catalan, rescale, sample_uniform, stream_profile, BinaryTree, VerticalProfile,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn streaming_matches_materialized(n in 1u64..3000, seed in any::<u64>()) {
        let tree = sample_uniform(n, seed).unwrap();
        let p = VerticalProfile::of_tree(&tree);
        prop_assert_eq!(&p, &stream_profile(n, seed).unwrap());
        prop_assert_eq!(p.counts().iter().sum::<u64>(), n);
        prop_assert!(p.counts().iter().all(|&c| c > 0));
        prop_assert!(p.ell() <= 0 && p.r() >= 0);
    }

    #[test]
    fn brackets_round_trip(n in 1u64..200, seed in any::<u64>()) {
        let tree = sample_uniform(n, seed).unwrap();
        let again = BinaryTree::from_brackets(&tree.to_string()).unwrap();
        prop_assert_eq!(again.to_string(), tree.to_string());
        prop_assert_eq!(VerticalProfile::of_tree(&tree.mirror()), VerticalProfile::of_tree(&tree).mirror());
    }

    #[test]
    fn sampled_profiles_have_positive_counts(n in 1u64..=30, seed in any::<u64>()) {
        let p = stream_profile(n, seed).unwrap();
        let c = count_profile(&p).unwrap();
        prop_assert!(c >= BigUint::from(1u32));
        prop_assert!(c <= BigUint::from(catalan(n)));
        prop_assert_eq!(count_profile(&p.mirror()).unwrap(), c);
    }

    #[test]
    fn key_and_display_parse_back(n in 1u64..500, seed in any::<u64>()) {
        let p = stream_profile(n, seed).unwrap();
        prop_assert_eq!(&p.key().parse::<VerticalProfile>().unwrap(), &p);
        prop_assert_eq!(&p.to_string().parse::<VerticalProfile>().unwrap(), &p);
    }

    #[test]
    fn rescaled_triple_is_well_formed(n in 1u64..20_000, seed in any::<u64>()) {
        let r = rescale(&stream_profile(n, seed).unwrap());
        let mut last_s = 0.0;
        for (_, z) in r.grid() {
            prop_assert!(z.m >= 0.0 && z.s >= last_s - 1e-15 && z.s <= 1.0 + 1e-12);
            last_s = z.s;
        }
        prop_assert!((r.terminal().s - 1.0).abs() < 1e-12);
    }
}

#[test]
fn large_profile_is_on_the_quarter_power_scale() {
    let r = rescale(&stream_profile(1_000_000, 3).unwrap());
    assert!(r.max_m() < 10.0, "max rescaled m = {}", r.max_m());
}

#[test]
fn streaming_is_deterministic() {
    assert_eq!(
        stream_profile(100_000, 9).unwrap(),
        stream_profile(100_000, 9).unwrap()
    );
    assert_ne!(
        stream_profile(100_000, 9).unwrap(),
        stream_profile(100_000, 10).unwrap()
    );
}
