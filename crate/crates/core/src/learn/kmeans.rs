use itertools::Itertools;
use ndarray::{Array2, ArrayView1, ArrayView2};
use rand::Rng;

use crate::error::{Error, Result};

pub const MAX_LLOYD_ITERATIONS: usize = 300;

#[derive(Clone, Debug, PartialEq)]
pub struct KMeansResult {
    pub assignments: Vec<usize>,
    pub centroids: Array2<f64>,
    pub inertia: f64,
    /// Inertia after each assignment step of the winning restart.
    pub trace: Vec<f64>,
    pub iterations: usize,
}

fn sq_dist(a: ArrayView1<f64>, b: ArrayView1<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).powi(2)).sum()
}

fn nearest(x: ArrayView1<f64>, centroids: &Array2<f64>) -> (usize, f64) {
    centroids
        .rows()
        .into_iter()
        .map(|c| sq_dist(x, c))
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, d)| if d < best.1 { (i, d) } else { best })
}

/// k-means++ seeding: the first centre uniformly, each next one with
/// probability proportional to the squared distance to the nearest centre.
fn seed_centroids<R: Rng + ?Sized>(x: ArrayView2<f64>, k: usize, rng: &mut R) -> Array2<f64> {
    let m = x.nrows();
    let mut centroids = Array2::zeros((k, x.ncols()));
    centroids.row_mut(0).assign(&x.row(rng.random_range(0..m)));
    let mut d2: Vec<f64> = x.rows().into_iter().map(|r| sq_dist(r, centroids.row(0))).collect();
    for c in 1..k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut u = rng.random::<f64>() * total;
            let mut idx = m - 1;
            for (i, &d) in d2.iter().enumerate() {
                if u < d {
                    idx = i;
                    break;
                }
                u -= d;
            }
            idx
        } else {
            rng.random_range(0..m)
        };
        centroids.row_mut(c).assign(&x.row(pick));
        for (i, r) in x.rows().into_iter().enumerate() {
            d2[i] = d2[i].min(sq_dist(r, centroids.row(c)));
        }
    }
    centroids
}

fn lloyd(x: ArrayView2<f64>, mut centroids: Array2<f64>) -> KMeansResult {
    let (m, k) = (x.nrows(), centroids.nrows());
    let mut assignments = vec![usize::MAX; m];
    let mut trace = Vec::new();
    let mut iterations = 0;
    loop {
        let mut changed = false;
        let mut inertia = 0.0;
        for (i, r) in x.rows().into_iter().enumerate() {
            let (c, d) = nearest(r, &centroids);
            inertia += d;
            if assignments[i] != c {
                assignments[i] = c;
                changed = true;
            }
        }
        if let Some(&prev) = trace.last() {
            debug_assert!(inertia <= prev * (1.0 + 1e-12) + 1e-12, "inertia rose: {prev} -> {inertia}");
        }
        trace.push(inertia);
        iterations += 1;
        // empty clusters keep their previous centre
        let mut sums = Array2::<f64>::zeros(centroids.raw_dim());
        let mut counts = vec![0usize; k];
        for (i, r) in x.rows().into_iter().enumerate() {
            let mut row = sums.row_mut(assignments[i]);
            row += &r;
            counts[assignments[i]] += 1;
        }
        for (c, &count) in counts.iter().enumerate() {
            if count > 0 {
                let mean = &sums.row(c) / count as f64;
                centroids.row_mut(c).assign(&mean);
            }
        }
        if !changed || iterations >= MAX_LLOYD_ITERATIONS {
            break;
        }
    }
    let inertia = x
        .rows()
        .into_iter()
        .zip(&assignments)
        .map(|(r, &c)| sq_dist(r, centroids.row(c)))
        .sum();
    KMeansResult {
        assignments,
        centroids,
        inertia,
        trace,
        iterations,
    }
}

/// Best of `restarts` k-means++ / Lloyd runs by final inertia.
pub fn kmeans_cluster<R: Rng + ?Sized>(
    x: ArrayView2<f64>,
    k: usize,
    restarts: usize,
    rng: &mut R,
) -> Result<KMeansResult> {
    if k == 0 || x.nrows() < k {
        return Err(Error::InvalidParameter(format!(
            "k-means needs 1 <= k <= rows, got k = {k} with {} rows",
            x.nrows()
        )));
    }
    if restarts == 0 {
        return Err(Error::InvalidParameter("k-means needs at least one restart".into()));
    }
    let mut best: Option<KMeansResult> = None;
    for _ in 0..restarts {
        let run = lloyd(x, seed_centroids(x, k, rng));
        if best.as_ref().is_none_or(|b| run.inertia < b.inertia) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Fraction of points whose cluster matches the truth label under the best
/// one-to-one relabeling of cluster ids.
pub fn best_relabel_agreement(assignments: &[usize], truth: &[usize], k: usize) -> f64 {
    assert_eq!(assignments.len(), truth.len(), "length mismatch");
    if assignments.is_empty() {
        return 1.0;
    }
    let best = (0..k)
        .permutations(k)
        .map(|perm| {
            assignments
                .iter()
                .zip(truth)
                .filter(|(&a, &t)| perm[a] == t)
                .count()
        })
        .max()
        .unwrap_or(0);
    best as f64 / assignments.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn one_dimensional_example_is_optimal() {
        let x = array![[0.0], [0.1], [10.0], [10.1]];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let r = kmeans_cluster(x.view(), 2, 10, &mut rng).unwrap();
        assert_eq!(r.assignments[0], r.assignments[1]);
        assert_eq!(r.assignments[2], r.assignments[3]);
        assert_ne!(r.assignments[0], r.assignments[2]);

        // brute force over all 2-partitions
        let pts = [0.0, 0.1, 10.0, 10.1];
        let cost = |mask: usize| {
            (0..2)
                .map(|c| {
                    let members: Vec<f64> = (0..4).filter(|i| (mask >> i) & 1 == c).map(|i| pts[i]).collect();
                    if members.is_empty() {
                        return 0.0;
                    }
                    let mu = members.iter().sum::<f64>() / members.len() as f64;
                    members.iter().map(|p| (p - mu).powi(2)).sum::<f64>()
                })
                .sum::<f64>()
        };
        let optimum = (0..16).map(cost).fold(f64::INFINITY, f64::min);
        assert!((r.inertia - optimum).abs() < 1e-12);
    }

    #[test]
    fn k_equal_m_has_zero_inertia() {
        let x = array![[0.0, 1.0], [2.0, 3.0], [4.0, 4.0]];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(kmeans_cluster(x.view(), 3, 5, &mut rng).unwrap().inertia, 0.0);
    }

    #[test]
    fn trace_is_non_increasing_and_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = Array2::from_shape_fn((60, 2), |_| rng.random::<f64>());
        let a = kmeans_cluster(x.view(), 3, 4, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        for w in a.trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
        let b = kmeans_cluster(x.view(), 3, 4, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn duplicate_points_are_allowed() {
        let x = array![[1.0], [1.0], [1.0]];
        let r = kmeans_cluster(x.view(), 2, 3, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        assert_eq!(r.inertia, 0.0);
        assert!(kmeans_cluster(x.view(), 4, 3, &mut ChaCha8Rng::seed_from_u64(4)).is_err());
    }

    #[test]
    fn relabel_agreement() {
        assert_eq!(best_relabel_agreement(&[1, 1, 0, 0], &[0, 0, 1, 1], 2), 1.0);
        assert_eq!(best_relabel_agreement(&[0, 1, 0, 0], &[0, 0, 1, 1], 2), 0.75);
    }
}
