use crate::boolfn::ClassKind;

/// `2PR / (P + R)` for `positive`; 0 when precision and recall are both 0.
pub fn f1_score(predictions: &[ClassKind], truth: &[ClassKind], positive: ClassKind) -> f64 {
    assert_eq!(predictions.len(), truth.len(), "length mismatch");
    let (mut tp, mut fp, mut fne) = (0usize, 0usize, 0usize);
    for (&p, &t) in predictions.iter().zip(truth) {
        match (p == positive, t == positive) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fne += 1,
            (false, false) => {}
        }
    }
    if tp == 0 {
        return 0.0;
    }
    let precision = tp as f64 / (tp + fp) as f64;
    let recall = tp as f64 / (tp + fne) as f64;
    2.0 * precision * recall / (precision + recall)
}

/// Median of a non-empty sample (mean of the two middle values when even).
pub fn median(values: &[f64]) -> f64 {
    quantile(values, 0.5)
}

/// Linear-interpolation quantile, `q` in `[0, 1]`.
pub fn quantile(values: &[f64], q: f64) -> f64 {
    assert!(!values.is_empty(), "quantile of an empty sample");
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 1.0) * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ClassKind::{OneToOne as A, TwoToOne as B};

    #[test]
    fn f1_examples() {
        assert_eq!(f1_score(&[A, B, A], &[A, B, A], A), 1.0);
        assert_eq!(f1_score(&[B, A], &[A, B], A), 0.0);
        // TP = 2, FP = 1, FN = 1
        let f = f1_score(&[A, A, A, B, B], &[A, A, B, A, B], A);
        assert!((f - 2.0 / 3.0).abs() < 1e-15);
        let g = f1_score(&[B, A, B, A, A], &[B, A, A, B, A], A);
        assert!((f - g).abs() < 1e-15);
    }

    #[test]
    fn quantiles() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(quantile(&[0.0, 10.0], 0.25), 2.5);
    }
}
