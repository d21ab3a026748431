use expochar::vstat::{
    g_fn, h_fn, median_weights, statistic_i_naive, statistic_i_with, statistic_k,
    statistic_k_naive, Convention,
};
use expochar::SortedSample;
use proptest::prelude::*;

/// Continuous draws or small integers (which tie often, including
/// `x_i + x_j == x_k` coincidences).
fn sample(max_n: usize) -> impl Strategy<Value = SortedSample> {
    let continuous = prop::collection::vec(0.0f64..10.0, 1..=max_n);
    let tied = prop::collection::vec((0u8..5).prop_map(f64::from), 1..=max_n);
    prop_oneof![continuous, tied].prop_map(|v| SortedSample::new(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn fast_matches_enumeration(s in sample(10)) {
        for conv in [Convention::Strict, Convention::Weak] {
            let fast = statistic_i_with(&s, conv);
            let naive = statistic_i_naive(&s, conv).unwrap();
            prop_assert!((fast - naive).abs() <= 1e-12, "I {conv}: {fast} vs {naive}");
        }
        let fast = statistic_k(&s).0;
        let naive = statistic_k_naive(&s).unwrap();
        prop_assert!((fast - naive).abs() <= 1e-12, "K: {fast} vs {naive}");
    }

    #[test]
    fn scale_invariance(s in sample(12), e in -8i32..8) {
        let c = 2f64.powi(e);
        let t = s.scaled(c).unwrap();
        for conv in [Convention::Strict, Convention::Weak] {
            prop_assert_eq!(statistic_i_with(&s, conv), statistic_i_with(&t, conv));
        }
        let (k, at) = statistic_k(&s);
        let (k2, at2) = statistic_k(&t);
        prop_assert_eq!(k, k2);
        prop_assert_eq!(at * c, at2);
    }

    #[test]
    fn g_matches_median_weight_sum(s in sample(12), t in 0.0f64..25.0) {
        let n = s.len() as f64;
        let groups = median_weights(&s).group_totals(&s);
        let count: i64 = s
            .values()
            .iter()
            .map(|&x| groups.iter().filter(|&&(v, _)| x + v < t).map(|&(_, w)| w).sum::<i64>())
            .sum();
        let direct = count as f64 / n.powi(4);
        prop_assert!((g_fn(&s, t) - direct).abs() <= 1e-15);
    }

    #[test]
    fn ranges(s in sample(30)) {
        let i = statistic_i_with(&s, Convention::Strict);
        let (k, _) = statistic_k(&s);
        prop_assert!(i.abs() <= 1.0);
        prop_assert!((0.0..=1.0).contains(&k));
        let far = 2.0 * s.values().last().unwrap() + 1.0;
        prop_assert_eq!(h_fn(&s, far) - g_fn(&s, far), 0.0);
    }
}

#[test]
fn integer_data_scaled_by_thousand() {
    let s = SortedSample::new(vec![3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0, 5.0, 3.0]).unwrap();
    let t = s.scaled(1000.0).unwrap();
    assert_eq!(
        statistic_i_with(&s, Convention::Strict),
        statistic_i_with(&t, Convention::Strict)
    );
    assert_eq!(statistic_k(&s).0, statistic_k(&t).0);
}
