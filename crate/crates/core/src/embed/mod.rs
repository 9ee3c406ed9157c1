//! The group-averaged embedding `ρ(f)` of a Boolean function.
//!
//! Averaging the preparation of `|f(x)>` over every input `x` gives a density
//! that is diagonal in the computational basis, with entry `|f⁻¹(y)| / 2^n`
//! at `y`. It is stored as that diagonal only. The same diagonal is the
//! reduced state of the output register of the Simon state
//! `2^{-n/2} Σ_x |x>|f(x)>`, which is the circuit route.

mod twirl;

use std::fmt;
use std::sync::Arc;

use crate::boolfn::BooleanFunction;
use crate::error::Result;
use crate::qsim::{swap_bits, DenseOperator, Register, StateVector};
use crate::registry::{Named, Registry};

pub use twirl::{permute_bits, symmetry_group, twirl_generator, GroupElement, MAX_TWIRL_WIDTH};

#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalDensity {
    n: usize,
    probs: Vec<f64>,
}

impl DiagonalDensity {
    pub fn new(n: usize, probs: Vec<f64>) -> Self {
        assert_eq!(probs.len(), 1 << n, "diagonal length must be 2^n");
        Self { n, probs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn trace(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// `Σ_y |p(y) - q(y)| / 2`; equals the trace distance for diagonal states.
    pub fn total_variation(&self, other: &DiagonalDensity) -> f64 {
        total_variation(&self.probs, &other.probs)
    }
}

pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len(), "distribution length mismatch");
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Preimage counting: `probs[y] = |f⁻¹(y)| / 2^n`.
pub fn embed_diagonal(f: &BooleanFunction) -> DiagonalDensity {
    let n = f.n();
    let size = 1usize << n;
    let w = 1.0 / size as f64;
    let mut probs = vec![0.0; size];
    for x in 0..size as u32 {
        probs[f.eval(x) as usize] += w;
    }
    DiagonalDensity { n, probs }
}

/// Simulates `2^{-n/2} Σ_x |x>|f(x)>` on `2n` qubits and traces out the
/// input register.
pub fn embed_via_circuit(f: &BooleanFunction) -> Result<DiagonalDensity> {
    let n = f.n();
    let mut state = StateVector::zero(2 * n)?;
    state.hadamard_layer(0..n);
    state.apply_oracle(f);
    Ok(DiagonalDensity {
        n,
        probs: state.reduced_diagonal(Register::Bottom),
    })
}

/// Bitflip and qubit-permutation generators of the output symmetry group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymmetryOp {
    Bitflip(usize),
    Swap(usize, usize),
}

impl SymmetryOp {
    fn validate(self, n: usize) {
        match self {
            SymmetryOp::Bitflip(i) => assert!(i < n, "bitflip qubit {i} out of range"),
            SymmetryOp::Swap(i, j) => {
                assert!(i < n && j < n, "swap qubits out of range");
                assert_ne!(i, j, "swap needs two distinct qubits");
            }
        }
    }

    /// Image of basis index `y`.
    pub fn act(self, y: usize) -> usize {
        match self {
            SymmetryOp::Bitflip(i) => y ^ (1 << i),
            SymmetryOp::Swap(i, j) => swap_bits(y, i, j),
        }
    }

    pub fn permutation(self, n: usize) -> Vec<usize> {
        self.validate(n);
        (0..1usize << n).map(|y| self.act(y)).collect()
    }

    /// `X_i` or `SWAP_ij` as a dense operator on `n` qubits.
    pub fn dense(self, n: usize) -> Result<DenseOperator> {
        DenseOperator::from_permutation(&self.permutation(n))
    }
}

impl fmt::Display for SymmetryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymmetryOp::Bitflip(i) => write!(f, "X{i}"),
            SymmetryOp::Swap(i, j) => write!(f, "SWAP{i}{j}"),
        }
    }
}

/// Every `X_i` and every `SWAP_ij` with `i < j`.
pub fn symmetry_generators(n: usize) -> Vec<SymmetryOp> {
    let mut ops: Vec<SymmetryOp> = (0..n).map(SymmetryOp::Bitflip).collect();
    for i in 0..n {
        for j in i + 1..n {
            ops.push(SymmetryOp::Swap(i, j));
        }
    }
    ops
}

/// `U ρ U†` for the permutation unitary of `op`.
pub fn apply_symmetry(rho: &DiagonalDensity, op: SymmetryOp) -> DiagonalDensity {
    op.validate(rho.n);
    let mut probs = vec![0.0; rho.probs.len()];
    for (y, &p) in rho.probs.iter().enumerate() {
        probs[op.act(y)] = p;
    }
    DiagonalDensity { n: rho.n, probs }
}

/// A way of computing `ρ(f)`.
pub trait Embedder: Named + Send + Sync {
    fn embed(&self, f: &BooleanFunction) -> Result<DiagonalDensity>;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct DiagonalEmbedder;

impl Named for DiagonalEmbedder {
    fn name(&self) -> &'static str {
        "diagonal"
    }

    fn description(&self) -> &'static str {
        "preimage counting over the truth table"
    }
}

impl Embedder for DiagonalEmbedder {
    fn embed(&self, f: &BooleanFunction) -> Result<DiagonalDensity> {
        Ok(embed_diagonal(f))
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CircuitEmbedder;

impl Named for CircuitEmbedder {
    fn name(&self) -> &'static str {
        "circuit"
    }

    fn description(&self) -> &'static str {
        "2n-qubit statevector simulation, output register marginal"
    }
}

impl Embedder for CircuitEmbedder {
    fn embed(&self, f: &BooleanFunction) -> Result<DiagonalDensity> {
        embed_via_circuit(f)
    }
}

pub fn embedders() -> Registry<dyn Embedder> {
    Registry::<dyn Embedder>::new("embedder")
        .with(Arc::new(DiagonalEmbedder))
        .with(Arc::new(CircuitEmbedder))
}
