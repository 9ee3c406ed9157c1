use nalgebra::DMatrix;
use ndarray::Array2;
use proptest::prelude::*;
use simon_gqml::learn::symmetric_eigen;

proptest! {
    #[test]
    fn jacobi_matches_nalgebra(dim in 1usize..8, entries in prop::collection::vec(-5.0f64..5.0, 64)) {
        let a = Array2::from_shape_fn((dim, dim), |(i, j)| {
            let (r, c) = if i <= j { (i, j) } else { (j, i) };
            entries[r * 8 + c]
        });
        let (values, vectors) = symmetric_eigen(&a).unwrap();
        let oracle = DMatrix::from_fn(dim, dim, |i, j| a[[i, j]]).symmetric_eigen();
        let mut expected: Vec<f64> = oracle.eigenvalues.iter().copied().collect();
        expected.sort_by(|x, y| y.total_cmp(x));
        let scale = a.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0);
        for (got, want) in values.iter().zip(&expected) {
            prop_assert!((got - want).abs() <= 1e-8 * scale, "{got} vs {want}");
        }
        // A v = λ v column by column.
        for k in 0..dim {
            let v = vectors.column(k);
            let r = a.dot(&v) - &v * values[k];
            prop_assert!(r.iter().map(|x| x * x).sum::<f64>().sqrt() <= 1e-8 * scale);
        }
    }
}
