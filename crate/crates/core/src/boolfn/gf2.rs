use rand::{Rng, RngCore};

use super::bits::{check_width, mask, BitString};
use crate::error::{Error, Result};

/// Square matrix over GF(2). Row `i` is a bitmask of the columns holding a 1,
/// so `(M x)_i = parity(rows[i] & x)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Gf2Matrix {
    n: usize,
    rows: Vec<u32>,
}

impl Gf2Matrix {
    pub fn from_rows(n: usize, rows: Vec<u32>) -> Result<Self> {
        check_width(n)?;
        if rows.len() != n {
            return Err(Error::InvalidParameter(format!(
                "expected {n} rows, got {}",
                rows.len()
            )));
        }
        if let Some(r) = rows.iter().find(|&&r| r > mask(n)) {
            return Err(Error::InvalidParameter(format!(
                "row {r:#x} does not fit in {n} columns"
            )));
        }
        Ok(Self { n, rows })
    }

    /// Parses MSB-first row strings, e.g. `["10", "10"]`.
    pub fn parse_rows(rows: &[&str]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| BitString::parse(r))
            .collect::<Result<Vec<_>>>()?;
        let n = parsed.len();
        if parsed.iter().any(|b| b.width() != n) {
            return Err(Error::InvalidParameter("matrix must be square".into()));
        }
        Self::from_rows(n, parsed.into_iter().map(BitString::value).collect())
    }

    pub fn identity(n: usize) -> Self {
        check_width(n).expect("width");
        Self {
            n,
            rows: (0..n).map(|i| 1u32 << i).collect(),
        }
    }

    pub fn zero(n: usize) -> Self {
        check_width(n).expect("width");
        Self { n, rows: vec![0; n] }
    }

    /// Uniformly random matrix (every entry an independent fair bit).
    pub fn random(n: usize, rng: &mut (impl RngCore + ?Sized)) -> Self {
        check_width(n).expect("width");
        let m = mask(n);
        Self {
            n,
            rows: (0..n).map(|_| rng.random::<u32>() & m).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> bool {
        (self.rows[i] >> j) & 1 == 1
    }

    #[inline]
    pub fn apply_raw(&self, x: u32) -> u32 {
        self.rows
            .iter()
            .enumerate()
            .fold(0u32, |acc, (i, &row)| acc | (((row & x).count_ones() & 1) << i))
    }

    pub fn apply(&self, x: BitString) -> BitString {
        assert_eq!(x.width(), self.n, "width mismatch");
        BitString::from_raw(self.n, self.apply_raw(x.value()))
    }

    pub fn rank(&self) -> usize {
        self.rank_nullspace().0
    }

    /// Rank and a basis of the kernel `{v : M v = 0}` by Gauss-Jordan
    /// elimination; `rank + basis.len() == n` always.
    pub fn rank_nullspace(&self) -> (usize, Vec<BitString>) {
        let n = self.n;
        let mut rows = self.rows.clone();
        let mut pivots: Vec<usize> = Vec::with_capacity(n);
        let mut r = 0;
        for col in 0..n {
            let bit = 1u32 << col;
            let Some(p) = (r..n).find(|&i| rows[i] & bit != 0) else {
                continue;
            };
            rows.swap(r, p);
            for i in 0..n {
                if i != r && rows[i] & bit != 0 {
                    rows[i] ^= rows[r];
                }
            }
            pivots.push(col);
            r += 1;
        }
        let rank = r;
        let basis = (0..n)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                // set the free variable, then solve each pivot variable from its row
                let mut v = 1u32 << free;
                for (row_idx, &pc) in pivots.iter().enumerate() {
                    if rows[row_idx] & (1 << free) != 0 {
                        v |= 1 << pc;
                    }
                }
                BitString::from_raw(n, v)
            })
            .collect();
        (rank, basis)
    }
}

/// Rank and nullspace basis of `m`.
pub fn gf2_rank_nullspace(m: &Gf2Matrix) -> (usize, Vec<BitString>) {
    m.rank_nullspace()
}

pub fn gf2_apply(m: &Gf2Matrix, x: BitString) -> BitString {
    m.apply(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_kernel(m: &Gf2Matrix) -> Vec<u32> {
        (0..1u32 << m.n()).filter(|&x| m.apply_raw(x) == 0).collect()
    }

    fn span(basis: &[BitString]) -> Vec<u32> {
        let mut out: Vec<u32> = (0..1u32 << basis.len())
            .map(|c| {
                basis
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| c >> i & 1 == 1)
                    .fold(0, |acc, (_, b)| acc ^ b.value())
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    #[test]
    fn identity_has_full_rank() {
        let (rank, basis) = Gf2Matrix::identity(2).rank_nullspace();
        assert_eq!(rank, 2);
        assert!(basis.is_empty());
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let (rank, basis) = Gf2Matrix::zero(2).rank_nullspace();
        assert_eq!(rank, 0);
        assert_eq!(span(&basis), vec![0, 1, 2, 3]);
    }

    #[test]
    fn repeated_row_matrix() {
        let m = Gf2Matrix::parse_rows(&["10", "10"]).unwrap();
        let (rank, basis) = m.rank_nullspace();
        assert_eq!(rank, 1);
        assert_eq!(basis, vec![BitString::parse("01").unwrap()]);
    }

    #[test]
    fn apply_examples() {
        let x = BitString::parse("101").unwrap();
        assert_eq!(Gf2Matrix::identity(3).apply(x), x);
        assert_eq!(Gf2Matrix::zero(3).apply(x), BitString::zero(3));
        let m = Gf2Matrix::parse_rows(&["10", "10"]).unwrap();
        assert_eq!(m.apply(BitString::parse("10").unwrap()).to_string(), "11");
    }

    #[test]
    #[should_panic(expected = "width mismatch")]
    fn apply_width_mismatch_panics() {
        Gf2Matrix::identity(3).apply(BitString::zero(2));
    }

    proptest! {
        #[test]
        fn nullspace_matches_brute_force(n in 1usize..=4, seed in any::<u64>()) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = Gf2Matrix::random(n, &mut rng);
            let (rank, basis) = m.rank_nullspace();
            prop_assert_eq!(rank + basis.len(), n);
            for v in &basis {
                prop_assert_eq!(m.apply_raw(v.value()), 0);
            }
            // independence: the span has exactly 2^k elements
            prop_assert_eq!(span(&basis), brute_kernel(&m));
        }
    }
}
