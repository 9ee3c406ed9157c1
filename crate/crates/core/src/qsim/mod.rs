//! Exact statevector simulation of the 2N-qubit Simon register.
//!
//! Index convention: qubit `q` is bit `q` of the basis index (qubit 0 least
//! significant). The input register is qubits `0..N`, the output register
//! `N..2N`. Dense operators and bit strings follow the same convention.

mod dense;
mod sampling;
mod state;

pub use dense::{dense_kron, DenseOperator, MAX_DENSE_DIM};
pub(crate) use dense::swap_bits;
pub use sampling::{sample_bitstrings, Sampler};
pub use state::{
    apply_oracle, hadamard_layer, oracle_from_cnots, reduced_diagonal, Cnot, Register,
    StateVector, MAX_QUBITS,
};
