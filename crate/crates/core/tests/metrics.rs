use cardio_fs_core::metrics::{classification_metrics, confusion, roc_auc, ConfusionMatrix, MetricsError};
use proptest::prelude::*;

fn brute_auc(s: &[f64], y: &[u8]) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (i, &yi) in y.iter().enumerate() {
        for (j, &yj) in y.iter().enumerate() {
            if yi == 1 && yj == 0 {
                den += 1.0;
                num += if s[i] > s[j] {
                    1.0
                } else if s[i] == s[j] {
                    0.5
                } else {
                    0.0
                };
            }
        }
    }
    num / den
}

fn both_classes() -> impl Strategy<Value = (Vec<f64>, Vec<u8>)> {
    (2usize..60).prop_flat_map(|n| {
        (
            prop::collection::vec(prop_oneof![0.0f64..1.0, Just(0.5), Just(0.25)], n),
            prop::collection::vec(0u8..2, n),
        )
    })
    .prop_map(|(s, mut y)| {
        y[0] = 0;
        y[1] = 1;
        (s, y)
    })
}

#[test]
fn single_class_auc_is_undefined() {
    assert_eq!(roc_auc(&[0.2, 0.7], &[0, 0]), Err(MetricsError::SingleClass));
}

proptest! {
    #[test]
    fn auc_matches_pair_count((s, y) in both_classes()) {
        let a = roc_auc(&s, &y).unwrap();
        prop_assert!((a - brute_auc(&s, &y)).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn auc_ignores_monotone_maps((s, y) in both_classes()) {
        let mapped: Vec<f64> = s.iter().map(|v| (3.0 * v).exp() - 2.0).collect();
        prop_assert_eq!(roc_auc(&s, &y).unwrap(), roc_auc(&mapped, &y).unwrap());
    }

    #[test]
    fn reversed_scores_complement((s, y) in both_classes()) {
        let flipped: Vec<f64> = s.iter().map(|v| 1.0 - v).collect();
        let sum = roc_auc(&s, &y).unwrap() + roc_auc(&flipped, &y).unwrap();
        prop_assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn confusion_partitions_rows(t in prop::collection::vec(0u8..2, 1..80), p in prop::collection::vec(0u8..2, 80)) {
        let p = &p[..t.len()];
        let cm = confusion(&t, p).unwrap();
        prop_assert_eq!(cm.total() as usize, t.len());
        let m = classification_metrics(&cm);
        let hits = t.iter().zip(p).filter(|(a, b)| a == b).count();
        prop_assert!((m.accuracy - hits as f64 / t.len() as f64).abs() < 1e-15);
        for v in [m.accuracy, m.precision, m.recall, m.specificity, m.f1] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
        prop_assert!(m.f1 <= m.precision.max(m.recall) + 1e-15);
    }

    #[test]
    fn confusion_adds(a in (0u64..50, 0u64..50, 0u64..50, 0u64..50), b in (0u64..50, 0u64..50, 0u64..50, 0u64..50)) {
        let x = ConfusionMatrix { tp: a.0, fp: a.1, tn: a.2, fn_: a.3 };
        let y = ConfusionMatrix { tp: b.0, fp: b.1, tn: b.2, fn_: b.3 };
        let mut z = x;
        z += y;
        prop_assert_eq!(z, x + y);
        prop_assert_eq!(z.total(), x.total() + y.total());
    }
}
