use crate::boolfn::BitString;

/// Incremental GF(2) row reduction over measured bit strings.
///
/// The basis is kept in reduced row-echelon form keyed by each row's highest
/// set bit, so every pivot bit appears in exactly one row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Solver {
    n: usize,
    basis: Vec<u32>,
}

impl Gf2Solver {
    pub fn new(n: usize) -> Self {
        assert!((1..=crate::boolfn::MAX_WIDTH).contains(&n), "solver width {n}");
        Self {
            n,
            basis: Vec::with_capacity(n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> Vec<BitString> {
        self.basis
            .iter()
            .map(|&r| BitString::new(self.n, r).expect("row fits width"))
            .collect()
    }

    fn pivot(row: u32) -> u32 {
        1 << (31 - row.leading_zeros())
    }

    /// Inserts `z` if it is independent of the current basis. Returns the new
    /// rank.
    pub fn add(&mut self, z: BitString) -> usize {
        assert_eq!(z.width(), self.n, "width mismatch");
        let mut v = z.value();
        for &row in &self.basis {
            if v & Self::pivot(row) != 0 {
                v ^= row;
            }
        }
        if v != 0 {
            let p = Self::pivot(v);
            for row in &mut self.basis {
                if *row & p != 0 {
                    *row ^= v;
                }
            }
            self.basis.push(v);
            self.basis.sort_unstable_by(|a, b| b.cmp(a));
        }
        self.basis.len()
    }

    /// The unique nonzero string orthogonal to a rank `n-1` basis, zero for a
    /// full-rank basis, `None` below rank `n-1`.
    pub fn solve_hidden(&self) -> Option<BitString> {
        let rank = self.rank();
        if rank == self.n {
            return Some(BitString::zero(self.n));
        }
        if rank + 1 != self.n {
            return None;
        }
        let pivots = self.basis.iter().fold(0u32, |acc, &r| acc | Self::pivot(r));
        let free = (0..self.n as u32)
            .map(|b| 1u32 << b)
            .find(|b| pivots & b == 0)
            .expect("one free column at rank n-1");
        let mut s = free;
        for &row in &self.basis {
            if row & free != 0 {
                s |= Self::pivot(row);
            }
        }
        Some(BitString::new(self.n, s).expect("fits width"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bs(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    #[test]
    fn add_examples() {
        let mut s = Gf2Solver::new(3);
        assert_eq!(s.add(bs("000")), 0);
        assert_eq!(s.add(bs("110")), 1);
        assert_eq!(s.add(bs("011")), 2);
        assert_eq!(s.add(bs("011")), 2);
        assert_eq!(s.add(bs("101")), 2);
    }

    #[test]
    fn solve_examples() {
        let mut s = Gf2Solver::new(2);
        assert_eq!(s.solve_hidden(), None);
        s.add(bs("10"));
        assert_eq!(s.solve_hidden(), Some(bs("01")));
        s.add(bs("01"));
        assert_eq!(s.solve_hidden(), Some(bs("00")));
    }

    proptest! {
        #[test]
        fn candidate_is_orthogonal_to_every_input(n in 2usize..=10, raw in proptest::collection::vec(any::<u32>(), 1..20)) {
            let mut solver = Gf2Solver::new(n);
            let inputs: Vec<BitString> = raw.iter().map(|r| BitString::new(n, r & ((1 << n) - 1)).unwrap()).collect();
            for z in &inputs {
                solver.add(*z);
            }
            let basis = solver.basis();
            prop_assert!(basis.iter().all(|b| !b.is_zero()));
            // brute-force rank: size of the span
            let mut span = std::collections::HashSet::from([0u32]);
            for z in &inputs {
                let next: Vec<u32> = span.iter().map(|v| v ^ z.value()).collect();
                span.extend(next);
            }
            prop_assert_eq!(1usize << solver.rank(), span.len());
            if let Some(s) = solver.solve_hidden() {
                if solver.rank() == n - 1 {
                    prop_assert!(!s.is_zero());
                    prop_assert!(inputs.iter().all(|z| !z.dot(s)));
                } else {
                    prop_assert!(s.is_zero());
                }
            } else {
                prop_assert!(solver.rank() < n - 1);
            }
        }
    }
}
