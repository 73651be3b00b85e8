use empsup::process::{
    boundary_split, eval_q, eval_u, grid_oracle_sup, order_statistics, sup_unweighted,
    sup_weighted, weighted_branches, Sample, Side,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Odd multiples of 2^-53 inside (0,1), for which `1 − x` is exact.
fn dyadic_unit() -> impl Strategy<Value = f64> {
    (0u64..(1 << 52)).prop_map(|k| (2 * k + 1) as f64 * (-53f64).exp2())
}

fn unit() -> impl Strategy<Value = f64> {
    prop_oneof![
        dyadic_unit(),
        (1e-12..1.0f64).prop_filter("open interval", |x| *x < 1.0),
    ]
}

fn sample_strategy(max_n: usize) -> impl Strategy<Value = Sample> {
    proptest::collection::vec(unit(), 1..=max_n).prop_map(|v| Sample::new(v).unwrap())
}

fn side_value(s: &Sample, t: f64, side: Side, weighted: bool) -> f64 {
    if weighted {
        eval_q(s, t, side).unwrap()
    } else {
        eval_u(s, t, side).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn order_stats_sorted_permutation(values in proptest::collection::vec(unit(), 1..60)) {
        let s = order_statistics(&values).unwrap();
        prop_assert_eq!(s.values(), values.as_slice());
        prop_assert!(s.order_stats().windows(2).all(|w| w[0] <= w[1]));
        let mut a = values.clone();
        a.sort_by(f64::total_cmp);
        prop_assert_eq!(s.order_stats(), a.as_slice());
        let resorted = order_statistics(s.order_stats()).unwrap();
        prop_assert_eq!(resorted.order_stats(), s.order_stats());
    }

    #[test]
    fn oracle_equivalence(s in sample_strategy(50), weighted in any::<bool>()) {
        let exact = if weighted { sup_weighted(&s) } else { sup_unweighted(&s) };
        let oracle = grid_oracle_sup(&s, 2_000, weighted).unwrap();
        prop_assert!((exact.value - oracle.value).abs() <= 1e-12 * exact.value);
        prop_assert_eq!(exact.location, oracle.location);
        prop_assert_eq!(exact.index, oracle.index);
        prop_assert_eq!(exact.side, oracle.side);
    }

    #[test]
    fn value_reproduced_at_location(s in sample_strategy(80), weighted in any::<bool>()) {
        let r = if weighted { sup_weighted(&s) } else { sup_unweighted(&s) };
        prop_assert!(r.value > 0.0);
        prop_assert!(r.index >= 1 && r.index <= s.n());
        prop_assert_eq!(s.order_stats()[r.index - 1], r.location);
        prop_assert_eq!(side_value(&s, r.location, r.side, weighted), r.value);
    }

    #[test]
    fn reflection_is_exact(values in proptest::collection::vec(dyadic_unit(), 1..60), weighted in any::<bool>()) {
        let s = Sample::new(values).unwrap();
        let sup = |s: &Sample| if weighted { sup_weighted(s) } else { sup_unweighted(s) };
        let a = sup(&s);
        let b = sup(&s.reflect());
        prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
        prop_assert_eq!(b.location.to_bits(), (1.0 - a.location).to_bits());
    }

    #[test]
    fn boundary_partition(s in sample_strategy(60), alpha in 0.001..0.499f64) {
        let b = boundary_split(&s, alpha).unwrap();
        prop_assert_eq!(b.interior_sup.max(b.boundary_sup), sup_weighted(&s).value);
        prop_assert!(b.interior_sup >= 0.0 && b.boundary_sup >= 0.0);
    }

    #[test]
    fn left_limit_consistency(values in proptest::collection::vec(0.001..0.999f64, 1..40)) {
        let s = Sample::new(values).unwrap();
        let distinct = s.order_stats().windows(2).all(|w| w[0] < w[1]);
        prop_assume!(distinct);
        for i in 1..=s.n() {
            let (_, left) = weighted_branches(&s, i);
            let x = s.order_stats()[i - 1];
            prop_assert_eq!(eval_q(&s, x, Side::LeftLimit).unwrap(), left.abs());
        }
    }
}

#[test]
fn dominance_over_random_probes() {
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    for _ in 0..50 {
        let n = rng.random_range(1..=50);
        let s = Sample::new((0..n).map(|_| rng.random_range(1e-9..1.0 - 1e-9)).collect()).unwrap();
        let v = sup_weighted(&s).value;
        let w = sup_unweighted(&s).value;
        for _ in 0..10_000 {
            let t = rng.random_range(1e-12..1.0 - 1e-12);
            let side = if rng.random::<bool>() {
                Side::LeftLimit
            } else {
                Side::RightValue
            };
            assert!(eval_q(&s, t, side).unwrap() <= v * (1.0 + 1e-12));
            assert!(eval_u(&s, t, side).unwrap() <= w * (1.0 + 1e-12));
        }
    }
}

#[test]
fn unweighted_degenerate_index_never_reported() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..2000 {
        let n = rng.random_range(1..=30);
        let s = Sample::new((0..n).map(|_| rng.random_range(1e-9..1.0 - 1e-9)).collect()).unwrap();
        let r = sup_unweighted(&s);
        assert!(r.index >= 1);
        assert!(r.value > 0.0);
    }
}

#[test]
fn boundary_split_regions_match_oracle_on_grid() {
    // brute-force each region separately on a fine grid
    let s = order_statistics(&[0.1, 0.2]).unwrap();
    let alpha = 0.3;
    let b = boundary_split(&s, alpha).unwrap();
    let mut inner: f64 = 0.0;
    let mut outer: f64 = 0.0;
    let g = 200_000;
    for k in 1..g {
        let t = k as f64 / g as f64;
        let q = eval_q(&s, t, Side::RightValue).unwrap();
        if (alpha..=1.0 - alpha).contains(&t) {
            inner = inner.max(q);
        } else {
            outer = outer.max(q);
        }
    }
    assert!((b.interior_sup - inner).abs() < 1e-4);
    assert!((b.boundary_sup - outer).abs() < 1e-4);
    assert!((b.interior_sup.max(b.boundary_sup) - 2.0 * 2f64.sqrt()).abs() < 1e-12);
}
