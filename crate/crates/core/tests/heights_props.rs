use std::collections::BTreeSet;

use arithdyn::heights::{normalize, BoundedHeightIter, HeightBound, Point, Space};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use proptest::prelude::*;

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn height_is_projectively_invariant(
        v in prop::collection::vec((-10_000i64..=10_000, 1i64..=500), 2..=5),
        (ln, ld) in (-999i64..=999, 1i64..=999),
    ) {
        prop_assume!(ln != 0 && v.iter().any(|(n, _)| *n != 0));
        let raw: Vec<BigRational> = v.iter().map(|&(n, d)| rational(n, d)).collect();
        let lambda = rational(ln, ld);
        let scaled: Vec<BigRational> = raw.iter().map(|r| r * &lambda).collect();
        let (a, b) = (normalize(&raw).unwrap(), normalize(&scaled).unwrap());
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.height().max_coordinate, b.height().max_coordinate);
    }
}

#[test]
fn affine_line_count_matches_double_loop() {
    for m in 1..=50i64 {
        let mut direct = 0u64;
        for b in 1..=m {
            for a in -m..=m {
                if a.gcd(&b) == 1 {
                    direct += 1;
                }
            }
        }
        let enumerated = BoundedHeightIter::new(1, HeightBound::from_max_coordinate(m as u64), Space::Affine).count();
        assert_eq!(enumerated as u64, direct, "M = {m}");
    }
}

#[test]
fn enumerated_points_are_distinct_and_bounded() {
    for space in [Space::Affine, Space::Projective] {
        let m = 6u64;
        let pts: Vec<Point> = BoundedHeightIter::new(2, HeightBound::from_max_coordinate(m), space).collect();
        let unique: BTreeSet<&Point> = pts.iter().collect();
        assert_eq!(unique.len(), pts.len());
        assert!(pts.iter().all(|p| p.height().max_coordinate <= BigInt::from(m)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn enumeration_is_monotone(b in 0.0f64..2.5, extra in 0.0f64..1.0, dim in 1usize..=2, projective in any::<bool>()) {
        let space = if projective { Space::Projective } else { Space::Affine };
        let small: BTreeSet<Point> = BoundedHeightIter::new(dim, HeightBound::from_log(b), space).collect();
        let large: BTreeSet<Point> = BoundedHeightIter::new(dim, HeightBound::from_log(b + extra), space).collect();
        prop_assert!(small.is_subset(&large));
    }
}
