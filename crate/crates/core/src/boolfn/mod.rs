//! N-bit Boolean functions, their GF(2) structure and Simon-class ground truth.

mod bits;
mod dataset;
mod function;
mod generate;
mod gf2;

pub use bits::{from_hex, to_hex, BitString, MAX_WIDTH};
pub use dataset::{gen_dataset, Dataset, DatasetEntry, Manifest, ManifestEntry, ReprKind};
pub use function::{
    classify_exact, evaluate, BooleanFunction, ClassKind, FunctionClass, Representation,
};
pub use generate::{
    gen_one_to_one, gen_permutation_table, gen_two_to_one_linear, gen_two_to_one_table,
    generators, FunctionGenerator, LinearGenerator, TableGenerator,
};
pub use gf2::{gf2_apply, gf2_rank_nullspace, Gf2Matrix};
