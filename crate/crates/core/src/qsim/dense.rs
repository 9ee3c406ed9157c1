use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest dimension a dense operator may have (8 qubits).
pub const MAX_DENSE_DIM: usize = 256;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Row-major dense complex matrix acting on `log2(dim)` qubits with the
/// statevector bit convention.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DenseOperator {
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DENSE_DIM {
            return Err(Error::DimensionOverflow(dim));
        }
        Ok(Self {
            dim,
            entries: vec![ZERO; dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut op = Self::zeros(dim)?;
        for i in 0..dim {
            op.entries[i * dim + i] = ONE;
        }
        Ok(op)
    }

    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::InvalidParameter(format!(
                "{} entries for a {dim}x{dim} operator",
                entries.len()
            )));
        }
        let mut op = Self::zeros(dim)?;
        op.entries = entries;
        Ok(op)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let mut op = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            op.entries[i * op.dim + i] = Complex64::new(d, 0.0);
        }
        Ok(op)
    }

    /// Permutation matrix sending basis state `i` to `perm[i]`.
    pub fn from_permutation(perm: &[usize]) -> Result<Self> {
        let dim = perm.len();
        let mut seen = vec![false; dim];
        for &p in perm {
            if p >= dim || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidParameter("not a permutation".into()));
            }
        }
        let mut op = Self::zeros(dim)?;
        for (i, &p) in perm.iter().enumerate() {
            op.entries[p * dim + i] = ONE;
        }
        Ok(op)
    }

    pub fn pauli_x() -> Self {
        Self::from_entries(2, vec![ZERO, ONE, ONE, ZERO]).unwrap()
    }

    pub fn pauli_y() -> Self {
        Self::from_entries(2, vec![ZERO, -I, I, ZERO]).unwrap()
    }

    pub fn pauli_z() -> Self {
        Self::from_entries(2, vec![ONE, ZERO, ZERO, -ONE]).unwrap()
    }

    pub fn hadamard() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::from_entries(2, vec![h, h, h, -h]).unwrap()
    }

    /// Two-qubit SWAP block.
    pub fn swap_block() -> Self {
        Self::from_permutation(&[0, 2, 1, 3]).unwrap()
    }

    /// Single-qubit `gate` on qubit `q` of an `n`-qubit register.
    pub fn on_qubit(gate: &DenseOperator, q: usize, n: usize) -> Result<Self> {
        assert_eq!(gate.dim, 2, "on_qubit takes a single-qubit gate");
        assert!(q < n, "qubit {q} out of range for {n} qubits");
        let id = Self::identity(2)?;
        let factors: Vec<&DenseOperator> = (0..n).map(|k| if k == q { gate } else { &id }).collect();
        dense_kron(&factors)
    }

    /// SWAP of qubits `i` and `j` on an `n`-qubit register.
    pub fn swap(i: usize, j: usize, n: usize) -> Result<Self> {
        assert!(i < n && j < n, "swap qubits out of range");
        let dim = 1usize.checked_shl(n as u32).unwrap_or(0);
        if dim == 0 || dim > MAX_DENSE_DIM {
            return Err(Error::DimensionOverflow(dim));
        }
        let perm: Vec<usize> = (0..dim).map(|y| swap_bits(y, i, j)).collect();
        Self::from_permutation(&perm)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "vector dimension mismatch");
        (0..self.dim)
            .map(|r| {
                self.entries[r * self.dim..(r + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn matmul(&self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        let d = self.dim;
        let mut out = vec![ZERO; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..d {
                    out[i * d + j] += a * rhs.entries[k * d + j];
                }
            }
        }
        DenseOperator { dim: d, entries: out }
    }

    pub fn adjoint(&self) -> DenseOperator {
        let d = self.dim;
        let mut out = vec![ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                out[j * d + i] = self.entries[i * d + j].conj();
            }
        }
        DenseOperator { dim: d, entries: out }
    }

    pub fn scale(&self, s: f64) -> DenseOperator {
        DenseOperator {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.entries[i * self.dim + i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `P A P^T` for the permutation matrix `P` of `perm`, computed by
    /// relabeling indices.
    pub fn conjugate_by_permutation(&self, perm: &[usize]) -> DenseOperator {
        assert_eq!(perm.len(), self.dim, "permutation length mismatch");
        let d = self.dim;
        let mut out = vec![ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                out[perm[i] * d + perm[j]] = self.entries[i * d + j];
            }
        }
        DenseOperator { dim: d, entries: out }
    }

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &DenseOperator) -> f64 {
        assert_eq!(self.dim, other.dim, "operator dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn commutator_norm(&self, other: &DenseOperator) -> f64 {
        (&self.matmul(other) - &other.matmul(self)).frobenius_norm()
    }
}

impl Add for &DenseOperator {
    type Output = DenseOperator;

    fn add(self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        DenseOperator {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &DenseOperator {
    type Output = DenseOperator;

    fn sub(self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        DenseOperator {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &DenseOperator {
    type Output = DenseOperator;

    fn mul(self, rhs: &DenseOperator) -> DenseOperator {
        self.matmul(rhs)
    }
}

pub(crate) fn swap_bits(y: usize, i: usize, j: usize) -> usize {
    let bi = (y >> i) & 1;
    let bj = (y >> j) & 1;
    if bi == bj {
        y
    } else {
        y ^ (1 << i) ^ (1 << j)
    }
}

/// Kronecker product where `factors[0]` acts on the lowest-order qubits, so
/// `dense_kron(&[X, I])` flips qubit 0.
pub fn dense_kron(factors: &[&DenseOperator]) -> Result<DenseOperator> {
    let dim = factors
        .iter()
        .try_fold(1usize, |acc, f| acc.checked_mul(f.dim))
        .filter(|&d| d <= MAX_DENSE_DIM)
        .ok_or_else(|| Error::DimensionOverflow(factors.iter().map(|f| f.dim).product()))?;
    let mut out = DenseOperator::identity(1)?;
    for f in factors {
        // new factor occupies the higher-order index bits
        let (a, b) = (out.dim, f.dim);
        let d = a * b;
        let mut entries = vec![ZERO; d * d];
        for hi_r in 0..b {
            for hi_c in 0..b {
                let fv = f.entries[hi_r * b + hi_c];
                if fv == ZERO {
                    continue;
                }
                for lo_r in 0..a {
                    for lo_c in 0..a {
                        entries[(hi_r * a + lo_r) * d + hi_c * a + lo_c] = fv * out.entries[lo_r * a + lo_c];
                    }
                }
            }
        }
        out = DenseOperator { dim: d, entries };
    }
    debug_assert_eq!(out.dim, dim);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::StateVector;

    #[test]
    fn kron_of_identities() {
        let id = DenseOperator::identity(2).unwrap();
        assert_eq!(dense_kron(&[&id, &id]).unwrap(), DenseOperator::identity(4).unwrap());
    }

    #[test]
    fn first_factor_is_qubit_zero() {
        let x = DenseOperator::pauli_x();
        let id = DenseOperator::identity(2).unwrap();
        let op = dense_kron(&[&x, &id]).unwrap();
        let s = StateVector::zero(2).unwrap().apply_dense(&op);
        // |00> -> |01> printed MSB first, i.e. index 1
        assert_eq!(s.amplitudes()[1], ONE);

        let mut gate = StateVector::zero(2).unwrap();
        gate.pauli_x(0);
        assert_eq!(gate, s);
    }

    #[test]
    fn swap_conjugates_z0_to_z1() {
        let z = DenseOperator::pauli_z();
        let z0 = DenseOperator::on_qubit(&z, 0, 2).unwrap();
        let z1 = DenseOperator::on_qubit(&z, 1, 2).unwrap();
        let s = DenseOperator::swap_block();
        assert_eq!(s.matmul(&z0).matmul(&s.adjoint()), z1);
        assert_eq!(DenseOperator::swap(0, 1, 2).unwrap(), s);
        assert_eq!(z0.conjugate_by_permutation(&[0, 2, 1, 3]), z1);
    }

    #[test]
    fn kron_dimension_cap() {
        let id = DenseOperator::identity(2).unwrap();
        let nine = vec![&id; 9];
        assert!(matches!(dense_kron(&nine), Err(Error::DimensionOverflow(512))));
        assert_eq!(dense_kron(&nine[..8]).unwrap().dim(), 256);
    }

    #[test]
    fn paulis_square_to_identity_and_anticommute() {
        let id = DenseOperator::identity(2).unwrap();
        let (x, y, z) = (DenseOperator::pauli_x(), DenseOperator::pauli_y(), DenseOperator::pauli_z());
        for p in [&x, &y, &z] {
            assert_eq!(p.matmul(p), id);
            assert_eq!(&p.adjoint(), p);
        }
        let iz = z.matmul(&DenseOperator::from_real_diagonal(&[1.0, 1.0]).unwrap());
        let xy = x.matmul(&y);
        for k in 0..4 {
            assert_eq!(xy.entries()[k], iz.entries()[k] * I);
        }
        let h = DenseOperator::hadamard();
        assert!(h.matmul(&z).matmul(&h).max_abs_diff(&x) < 1e-15);
    }

    #[test]
    fn permutation_conjugation_matches_matrix_product() {
        let perm = [2usize, 0, 3, 1];
        let p = DenseOperator::from_permutation(&perm).unwrap();
        let a = DenseOperator::from_entries(
            4,
            (0..16).map(|k| Complex64::new(k as f64, -(k as f64) / 2.0)).collect(),
        )
        .unwrap();
        assert_eq!(p.matmul(&a).matmul(&p.adjoint()), a.conjugate_by_permutation(&perm));
        assert!(DenseOperator::from_permutation(&[0, 0]).is_err());
    }
}
