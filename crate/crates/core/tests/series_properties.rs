use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use ise_lab::profile_law::ProfileDistribution;
use ise_lab::series::{
    combination_moment, solve_algebraic, Fps, SignedMarks, Substitution, TreeCensus,
};

fn series(coeffs: Vec<(i64, i64)>) -> Fps {
    Fps::from_coeffs(
        coeffs
            .into_iter()
            .map(|(p, q)| BigRational::new(p.into(), q.into()))
            .collect(),
    )
}

fn arb_series(len: usize) -> impl Strategy<Value = Fps> {
    prop::collection::vec((-20i64..20, 1i64..6), len).prop_map(series)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplication_is_associative(f in arb_series(10), g in arb_series(10), h in arb_series(10)) {
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &g, &g * &f);
    }

    #[test]
    fn reciprocal_inverts_units(mut f in arb_series(12), c in 1i64..9) {
        let mut coeffs = f.coeffs().to_vec();
        coeffs[0] = BigRational::from_integer(c.into());
        f = Fps::from_coeffs(coeffs);
        prop_assert_eq!(&f * &f.reciprocal().unwrap(), Fps::one(11));
    }

    #[test]
    fn square_root_squares_back(f in arb_series(12)) {
        let mut coeffs = f.coeffs().to_vec();
        coeffs[0] = BigRational::from_integer(BigInt::from(1));
        let f = Fps::from_coeffs(coeffs);
        let half = BigRational::new(1.into(), 2.into());
        let r = f.pow_rational(&half).unwrap();
        prop_assert_eq!(&r * &r, f);
    }

    #[test]
    fn strings_round_trip(f in arb_series(8)) {
        prop_assert_eq!(Fps::from_strings(&f.to_strings()).unwrap(), f);
    }
}

#[test]
fn branches_are_symmetric() {
    let sys = solve_algebraic(40, Substitution::TreeWeight).unwrap();
    for i in 1..6 {
        assert_eq!(sys.branch(i), sys.branch(-i));
        assert!(sys.branch(i).coeff(0) == &BigRational::from_integer(0.into()));
    }
    assert_eq!(sys.branch(0).coeff(0), &BigRational::from_integer(1.into()));
}

#[test]
fn moment_routes_agree_up_to_ten_vertices() {
    for n in 1..=10 {
        let census = TreeCensus::new(n).unwrap();
        let dist = ProfileDistribution::new(n).unwrap();
        for p in 1..=4 {
            for a in -4..=3 {
                for q in 0..=2 {
                    let marks = SignedMarks::increment_difference(a, a + q);
                    combination_moment(&census, &dist, &marks, p).unwrap();
                }
            }
        }
    }
}

#[test]
fn moment_ratio_fixture_at_twelve_vertices() {
    let frozen = [
        0.524_470_347_027_109_2,
        0.305_975_048_725_542_3,
        0.181_859_649_344_841_8,
    ];
    for (q, want) in (1..=3).zip(frozen) {
        let rep = ise_lab::series::small_gap_check(12, 1, 0, q).unwrap();
        let got = rep.ratio_f64().unwrap();
        assert!((got - want).abs() < 1e-12, "b − a = {q}: {got}");
    }
}
