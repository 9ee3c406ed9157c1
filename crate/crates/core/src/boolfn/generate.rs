//! Random oracle generators.
//!
//! The `linear` generator mirrors a CNOT-wired oracle: each function is a
//! uniformly random GF(2) matrix conditioned on its rank (n for 1:1, n-1 for
//! 2:1). The `table` generator draws general permutations and general
//! 2:1 functions with a uniformly random nonzero period.

use std::sync::Arc;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, RngCore};

use super::bits::{check_width, mask};
use super::function::BooleanFunction;
use super::gf2::Gf2Matrix;
use crate::registry::{Named, Registry};

pub trait FunctionGenerator: Named + Send + Sync {
    fn one_to_one(&self, n: usize, rng: &mut dyn RngCore) -> BooleanFunction;
    fn two_to_one(&self, n: usize, rng: &mut dyn RngCore) -> BooleanFunction;
}

fn random_matrix_of_rank(n: usize, rank: usize, rng: &mut dyn RngCore) -> Gf2Matrix {
    check_width(n).expect("generator width");
    loop {
        let m = Gf2Matrix::random(n, rng);
        if m.rank() == rank {
            return m;
        }
    }
}

/// Uniform invertible matrix by rejection; roughly 29% of draws are accepted
/// for large `n`.
pub fn gen_one_to_one(n: usize, rng: &mut dyn RngCore) -> BooleanFunction {
    BooleanFunction::linear(random_matrix_of_rank(n, n, rng))
}

/// Uniform rank `n-1` matrix by rejection. The kernel is one-dimensional, so
/// its nonzero element is the hidden period.
pub fn gen_two_to_one_linear(n: usize, rng: &mut dyn RngCore) -> BooleanFunction {
    BooleanFunction::linear(random_matrix_of_rank(n, n - 1, rng))
}

pub fn gen_permutation_table(n: usize, rng: &mut dyn RngCore) -> BooleanFunction {
    check_width(n).expect("generator width");
    let mut table: Vec<u32> = (0..1u32 << n).collect();
    table.shuffle(rng);
    BooleanFunction::from_table(n, table).expect("valid permutation table")
}

/// General 2:1 table: pick a nonzero period `s`, pair each `x` with `x ^ s`
/// and give every pair its own output drawn without replacement.
pub fn gen_two_to_one_table(n: usize, rng: &mut dyn RngCore) -> BooleanFunction {
    check_width(n).expect("generator width");
    let size = 1usize << n;
    let s = rng.random_range(1..=mask(n));
    let outputs = sample(rng, size, size / 2);
    let mut table = vec![0u32; size];
    let mut next = outputs.iter();
    for x in 0..size as u32 {
        let partner = x ^ s;
        if partner > x {
            let y = next.next().expect("one output per pair") as u32;
            table[x as usize] = y;
            table[partner as usize] = y;
        }
    }
    BooleanFunction::from_table(n, table).expect("valid 2:1 table")
}

#[derive(Debug, Default, Clone, Copy)]
pub struct LinearGenerator;

impl Named for LinearGenerator {
    fn name(&self) -> &'static str {
        "linear"
    }

    fn description(&self) -> &'static str {
        "uniform GF(2) matrices of rank n (1:1) or n-1 (2:1); CNOT-realizable"
    }
}

impl FunctionGenerator for LinearGenerator {
    fn one_to_one(&self, n: usize, rng: &mut dyn RngCore) -> BooleanFunction {
        gen_one_to_one(n, rng)
    }

    fn two_to_one(&self, n: usize, rng: &mut dyn RngCore) -> BooleanFunction {
        gen_two_to_one_linear(n, rng)
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct TableGenerator;

impl Named for TableGenerator {
    fn name(&self) -> &'static str {
        "table"
    }

    fn description(&self) -> &'static str {
        "uniform permutations (1:1) and general period-s pairings (2:1)"
    }
}

impl FunctionGenerator for TableGenerator {
    fn one_to_one(&self, n: usize, rng: &mut dyn RngCore) -> BooleanFunction {
        gen_permutation_table(n, rng)
    }

    fn two_to_one(&self, n: usize, rng: &mut dyn RngCore) -> BooleanFunction {
        gen_two_to_one_table(n, rng)
    }
}

pub fn generators() -> Registry<dyn FunctionGenerator> {
    Registry::<dyn FunctionGenerator>::new("generator")
        .with(Arc::new(LinearGenerator))
        .with(Arc::new(TableGenerator))
}
