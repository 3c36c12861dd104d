use cardio_fs_core::cv::{stratified_holdout, stratified_kfold, FoldError};
use proptest::prelude::*;

fn labels() -> impl Strategy<Value = Vec<u8>> {
    (10usize..40, 10usize..40).prop_map(|(neg, pos)| {
        let mut y = vec![0u8; neg];
        y.extend(vec![1u8; pos]);
        y
    })
}

#[test]
fn rejects_bad_arguments() {
    assert_eq!(stratified_kfold(&[0, 1, 0, 1], 1, 0), Err(FoldError::TooFewFolds(1)));
    assert_eq!(stratified_kfold(&[0, 1, 2], 2, 0), Err(FoldError::NonBinaryLabel(2)));
    assert!(matches!(stratified_holdout(&[0, 0, 1, 1], 1.0, 0), Err(FoldError::InvalidFraction(_))));
}

proptest! {
    #[test]
    fn folds_partition_and_stratify(y in labels(), k in 2usize..10, seed in any::<u64>()) {
        let f = stratified_kfold(&y, k, seed).unwrap();
        prop_assert_eq!(f.len(), y.len());
        prop_assert!(f.iter().all(|&v| v < k));
        let mut sizes = vec![0usize; k];
        for class in 0..2u8 {
            let mut c = vec![0usize; k];
            for (&t, &fold) in y.iter().zip(&f) {
                if t == class {
                    c[fold] += 1;
                }
            }
            let (lo, hi) = (c.iter().min().unwrap(), c.iter().max().unwrap());
            prop_assert!(hi - lo <= 1);
            sizes.iter_mut().zip(&c).for_each(|(s, v)| *s += v);
        }
        prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        prop_assert_eq!(&f, &stratified_kfold(&y, k, seed).unwrap());
    }

    #[test]
    fn holdout_respects_fraction(y in labels(), frac in 0.05f64..0.95, seed in any::<u64>()) {
        let t = stratified_holdout(&y, frac, seed).unwrap();
        for class in 0..2u8 {
            let n = y.iter().filter(|&&c| c == class).count();
            let test = t.iter().zip(&y).filter(|(&s, &c)| s && c == class).count();
            let want = ((frac * n as f64).round() as usize).clamp(1, n - 1);
            prop_assert_eq!(test, want);
        }
    }
}
