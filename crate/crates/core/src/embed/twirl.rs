use itertools::Itertools;

use crate::error::{Error, Result};
use crate::qsim::DenseOperator;

/// Widest register whose symmetry group is enumerated (384 elements).
pub const MAX_TWIRL_WIDTH: usize = 4;

/// `y ↦ π(y) ⊕ b`: bit `i` of `y` moves to position `perm[i]`, then the
/// mask `flip` is XORed in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub perm: Vec<usize>,
    pub flip: usize,
}

impl GroupElement {
    pub fn act(&self, y: usize) -> usize {
        permute_bits(y, &self.perm) ^ self.flip
    }

    pub fn permutation(&self) -> Vec<usize> {
        (0..1usize << self.perm.len()).map(|y| self.act(y)).collect()
    }
}

pub fn permute_bits(y: usize, perm: &[usize]) -> usize {
    perm.iter()
        .enumerate()
        .fold(0, |acc, (i, &p)| acc | (((y >> i) & 1) << p))
}

/// All `n! · 2^n` elements of the qubit-permutation and bitflip group.
pub fn symmetry_group(n: usize) -> Result<Vec<GroupElement>> {
    if n == 0 || n > MAX_TWIRL_WIDTH {
        return Err(Error::GroupTooLarge(n));
    }
    Ok((0..n)
        .permutations(n)
        .cartesian_product(0..1usize << n)
        .map(|(perm, flip)| GroupElement { perm, flip })
        .collect())
}

/// `|G|⁻¹ Σ_g U_g A U_g†` over [`symmetry_group`].
pub fn twirl_generator(generator: &DenseOperator, n: usize) -> Result<DenseOperator> {
    let group = symmetry_group(n)?;
    if generator.dim() != 1 << n {
        return Err(Error::InvalidParameter(format!(
            "generator of dimension {} on {n} qubits",
            generator.dim()
        )));
    }
    let mut acc = DenseOperator::zeros(generator.dim())?;
    for g in &group {
        acc = &acc + &generator.conjugate_by_permutation(&g.permutation());
    }
    Ok(acc.scale(1.0 / group.len() as f64))
}
