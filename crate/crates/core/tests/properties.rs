use proptest::prelude::*;
use unicode_normalization::UnicodeNormalization;

use teachgram::learners::{most_frequent_baseline, split_indices};
use teachgram::reporting::{format_baseline, format_cell};
use teachgram::ruleminer::{chi2_relabel, chi2_sf, Chi2Config, Verdict};
use teachgram::suffixes::{decompose, Segmentation};
use teachgram::vocabulary::entropy_bits;

fn probabilities(k: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..1.0, k).prop_map(|w| {
        let s: f64 = w.iter().sum();
        w.into_iter().map(|x| x / s).collect()
    })
}

proptest! {
    #[test]
    fn decomposition_reassembles(form in "[a-zé\u{0915}-\u{0939}\u{093e}-\u{094c}]{1,10}", lemma in "[a-z\u{0915}-\u{0939}]{1,8}") {
        let nfc: String = form.nfc().collect();
        match decompose(&form, &lemma) {
            Segmentation::Decomposed(d) => {
                prop_assert_eq!(format!("{}{}", d.stem, d.suffix), nfc);
                prop_assert!(!d.stem.is_empty());
                prop_assert!(lemma.nfc().collect::<String>().starts_with(&d.stem));
            }
            Segmentation::Suppletive => {
                prop_assert_ne!(nfc.chars().next(), lemma.nfc().next());
            }
        }
    }

    #[test]
    fn split_is_a_partition(n in 0usize..500, seed in any::<u64>()) {
        let s = split_indices(n, 0.8, 0.1, seed);
        let mut all: Vec<usize> = s.train.iter().chain(&s.dev).chain(&s.test).copied().collect();
        all.sort();
        prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
        prop_assert_eq!(s.clone(), split_indices(n, 0.8, 0.1, seed));
    }

    #[test]
    fn significance_needs_support_and_small_p(
        (counts, expected) in (2usize..6).prop_flat_map(|k| (prop::collection::vec(0usize..60, k), probabilities(k)))
    ) {
        prop_assume!(counts.iter().sum::<usize>() > 0);
        let config = Chi2Config::default();
        let out = chi2_relabel(&counts, &expected, &config, None).unwrap();
        prop_assert!((0.0..=1.0).contains(&out.p_value));
        prop_assert!(out.statistic >= 0.0);
        if out.verdict == Verdict::Significant {
            prop_assert!(out.p_value < config.alpha);
            prop_assert!(counts.iter().sum::<usize>() >= config.min_leaf_support);
        }
    }

    #[test]
    fn sf_is_monotone(df in 1usize..10, a in 0.0f64..50.0, b in 0.0f64..50.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(chi2_sf(lo, df) >= chi2_sf(hi, df) - 1e-12);
    }

    #[test]
    fn entropy_is_bounded(counts in prop::collection::vec(1usize..100, 1..8)) {
        let h = entropy_bits(&counts);
        prop_assert!(h >= 0.0);
        prop_assert!(h <= (counts.len() as f64).log2() + 1e-9);
    }

    #[test]
    fn cells_have_two_decimals(acc in 0.0f64..=1.0, n in 0usize..10_000) {
        let cell = format_cell(acc, n);
        let (value, count) = cell.split_once(' ').unwrap();
        prop_assert_eq!(value.split_once('.').unwrap().1.len(), 2);
        prop_assert_eq!(count, format!("({n})"));
        prop_assert_eq!(format_baseline(acc), value);
    }

    #[test]
    fn baseline_is_a_mode(labels in prop::collection::vec("[abc]", 1..50)) {
        let mode = most_frequent_baseline(&labels).unwrap();
        let count = |l: &str| labels.iter().filter(|x| x.as_str() == l).count();
        prop_assert!(labels.iter().all(|l| count(l) <= count(&mode)));
    }
}
