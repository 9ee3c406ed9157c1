use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::dense::DenseOperator;
use crate::boolfn::{BooleanFunction, Representation};
use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 24;

/// Which half of a 2N-qubit Simon register.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Register {
    /// Qubits `0..N`, the oracle input.
    Top,
    /// Qubits `N..2N`, the oracle output.
    Bottom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cnot {
    pub control: usize,
    pub target: usize,
}

/// Dense statevector. Qubit `q` is bit `q` of the amplitude index, so qubit 0
/// is the least significant bit; in a 2N-qubit register the top (input)
/// register occupies the low N bits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(qubits: usize) -> Result<Self> {
        Self::basis(qubits, 0)
    }

    pub fn basis(qubits: usize, index: usize) -> Result<Self> {
        if qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                qubits,
                cap: MAX_QUBITS,
            });
        }
        let dim = 1usize << qubits;
        if index >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for {qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { qubits, amps })
    }

    /// Wraps raw amplitudes; the caller is responsible for normalization.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if !dim.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "amplitude count {dim} is not a power of two"
            )));
        }
        let qubits = dim.trailing_zeros() as usize;
        if qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                qubits,
                cap: MAX_QUBITS,
            });
        }
        Ok(Self { qubits, amps })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    fn check_qubit(&self, q: usize) {
        assert!(q < self.qubits, "qubit {q} out of range for {} qubits", self.qubits);
    }

    pub fn hadamard(&mut self, q: usize) {
        self.check_qubit(q);
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let a = self.amps[i];
                let b = self.amps[i | bit];
                self.amps[i] = (a + b) * FRAC_1_SQRT_2;
                self.amps[i | bit] = (a - b) * FRAC_1_SQRT_2;
            }
        }
    }

    pub fn hadamard_layer(&mut self, qubits: impl IntoIterator<Item = usize>) {
        for q in qubits {
            self.hadamard(q);
        }
    }

    pub fn pauli_x(&mut self, q: usize) {
        self.check_qubit(q);
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                self.amps.swap(i, i | bit);
            }
        }
    }

    pub fn cnot(&mut self, control: usize, target: usize) {
        self.check_qubit(control);
        self.check_qubit(target);
        assert_ne!(control, target, "CNOT control equals target");
        let (c, t) = (1usize << control, 1usize << target);
        for i in 0..self.amps.len() {
            if i & c != 0 && i & t == 0 {
                self.amps.swap(i, i | t);
            }
        }
    }

    pub fn apply_cnots(&mut self, gates: &[Cnot]) {
        for g in gates {
            self.cnot(g.control, g.target);
        }
    }

    /// `|x>|y> -> |x>|y ^ f(x)>` as an index permutation.
    pub fn apply_oracle(&mut self, f: &BooleanFunction) {
        let n = f.n();
        assert_eq!(self.qubits, 2 * n, "oracle width mismatch");
        let table = f.truth_table();
        let low = (1usize << n) - 1;
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (i, &a) in self.amps.iter().enumerate() {
            let x = i & low;
            let y = i >> n;
            out[x | ((y ^ table[x] as usize) << n)] = a;
        }
        self.amps = out;
    }

    pub fn apply_dense(&self, op: &DenseOperator) -> StateVector {
        assert_eq!(op.dim(), self.amps.len(), "operator dimension mismatch");
        StateVector {
            qubits: self.qubits,
            amps: op.apply(&self.amps),
        }
    }

    /// Diagonal of the reduced density operator of one register of a 2N-qubit
    /// state, i.e. the marginal distribution of that register.
    pub fn reduced_diagonal(&self, keep: Register) -> Vec<f64> {
        assert!(self.qubits.is_multiple_of(2), "register split needs an even qubit count");
        let n = self.qubits / 2;
        let low = (1usize << n) - 1;
        let mut diag = vec![0.0; 1 << n];
        for (i, a) in self.amps.iter().enumerate() {
            let k = match keep {
                Register::Top => i & low,
                Register::Bottom => i >> n,
            };
            diag[k] += a.norm_sqr();
        }
        diag
    }
}

/// One CNOT per nonzero matrix entry `M[i][j]`: control top qubit `j`,
/// target bottom qubit `n + i`.
pub fn oracle_from_cnots(f: &BooleanFunction) -> Result<Vec<Cnot>> {
    let Representation::Linear(m) = f.representation() else {
        return Err(Error::NotCnotRealizable);
    };
    let n = m.n();
    let mut gates = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if m.entry(i, j) {
                gates.push(Cnot {
                    control: j,
                    target: n + i,
                });
            }
        }
    }
    gates.sort_by_key(|g| (g.control, g.target));
    Ok(gates)
}

pub fn hadamard_layer(mut state: StateVector, qubits: &[usize]) -> StateVector {
    state.hadamard_layer(qubits.iter().copied());
    state
}

pub fn apply_oracle(mut state: StateVector, f: &BooleanFunction) -> StateVector {
    state.apply_oracle(f);
    state
}

pub fn reduced_diagonal(state: &StateVector, keep: Register) -> Vec<f64> {
    state.reduced_diagonal(keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::{gen_one_to_one, gen_two_to_one_linear, Gf2Matrix};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(qubits: usize, rng: &mut impl Rng) -> StateVector {
        let amps: Vec<Complex64> = (0..1usize << qubits)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        StateVector::from_amplitudes(amps.into_iter().map(|a| a / norm).collect()).unwrap()
    }

    fn max_diff(a: &StateVector, b: &StateVector) -> f64 {
        a.amplitudes()
            .iter()
            .zip(b.amplitudes())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    fn rows1010() -> BooleanFunction {
        BooleanFunction::linear(Gf2Matrix::parse_rows(&["10", "10"]).unwrap())
    }

    #[test]
    fn hadamard_on_zero() {
        let mut s = StateVector::zero(1).unwrap();
        s.hadamard(0);
        assert_abs_diff_eq!(s.amplitudes()[0].re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitudes()[1].re, FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn hadamard_is_an_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = random_state(5, &mut rng);
        let mut t = s.clone();
        t.hadamard_layer(0..5);
        assert_abs_diff_eq!(t.norm_sqr(), 1.0, epsilon = 1e-12);
        t.hadamard_layer(0..5);
        assert!(max_diff(&s, &t) < 1e-12);
    }

    #[test]
    fn hadamard_top_register_is_uniform() {
        let n = 6;
        let mut s = StateVector::zero(2 * n).unwrap();
        s.hadamard_layer(0..n);
        let amp = 2f64.powf(-(n as f64) / 2.0);
        for x in 0..1usize << n {
            assert_abs_diff_eq!(s.amplitudes()[x].re, amp, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = 1e-12);
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn invalid_qubit_panics() {
        StateVector::zero(2).unwrap().hadamard(2);
    }

    #[test]
    fn oracle_on_basis_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = gen_one_to_one(3, &mut rng);
        for x in 0..8usize {
            let mut s = StateVector::basis(6, x).unwrap();
            s.apply_oracle(&f);
            let target = x | ((f.eval(x as u32) as usize) << 3);
            assert_eq!(s.amplitudes()[target].re, 1.0);
        }
    }

    #[test]
    fn oracle_is_an_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let f = gen_two_to_one_linear(4, &mut rng);
            let s = random_state(8, &mut rng);
            let mut t = s.clone();
            t.apply_oracle(&f);
            assert_abs_diff_eq!(t.norm_sqr(), s.norm_sqr(), epsilon = 1e-12);
            t.apply_oracle(&f);
            assert_eq!(max_diff(&s, &t), 0.0);
        }
    }

    #[test]
    fn uniform_input_gives_graph_state() {
        let f = rows1010();
        let mut s = StateVector::zero(4).unwrap();
        s.hadamard_layer(0..2);
        s.apply_oracle(&f);
        for x in 0..4usize {
            let idx = x | ((f.eval(x as u32) as usize) << 2);
            assert_abs_diff_eq!(s.amplitudes()[idx].re, 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn cnot_lists() {
        let id = oracle_from_cnots(&BooleanFunction::identity(2)).unwrap();
        assert_eq!(
            id,
            vec![Cnot { control: 0, target: 2 }, Cnot { control: 1, target: 3 }]
        );
        // column 1 is set in both rows: the same control drives both targets
        let rep = oracle_from_cnots(&rows1010()).unwrap();
        assert_eq!(
            rep,
            vec![Cnot { control: 1, target: 2 }, Cnot { control: 1, target: 3 }]
        );
        let table = BooleanFunction::from_table(1, vec![1, 0]).unwrap();
        assert!(matches!(oracle_from_cnots(&table), Err(Error::NotCnotRealizable)));
    }

    #[test]
    fn cnot_path_equals_permutation_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 1..=4 {
            for _ in 0..4 {
                let f = if rng.random() {
                    gen_one_to_one(n, &mut rng)
                } else {
                    gen_two_to_one_linear(n, &mut rng)
                };
                let s = random_state(2 * n, &mut rng);
                let mut direct = s.clone();
                direct.apply_oracle(&f);
                let mut gates = s.clone();
                gates.apply_cnots(&oracle_from_cnots(&f).unwrap());
                assert_eq!(direct, gates);
            }
        }
    }

    #[test]
    fn reduced_diagonals() {
        // product state |a>|b> with a = 2, b = 1 on n = 2
        let s = StateVector::basis(4, 2 | (1 << 2)).unwrap();
        assert_eq!(s.reduced_diagonal(Register::Bottom), vec![0.0, 1.0, 0.0, 0.0]);
        assert_eq!(s.reduced_diagonal(Register::Top), vec![0.0, 0.0, 1.0, 0.0]);

        let n = 4;
        let simon_bottom = |f: &BooleanFunction| {
            let mut s = StateVector::zero(2 * n).unwrap();
            s.hadamard_layer(0..n);
            s.apply_oracle(f);
            s.reduced_diagonal(Register::Bottom)
        };
        let d = simon_bottom(&BooleanFunction::identity(n));
        for p in &d {
            assert_abs_diff_eq!(*p, 1.0 / 16.0, epsilon = 1e-12);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = gen_two_to_one_linear(n, &mut rng);
        let image: std::collections::HashSet<u32> = f.truth_table().into_iter().collect();
        let d = simon_bottom(&f);
        assert_abs_diff_eq!(d.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        for (y, p) in d.iter().enumerate() {
            let expected = if image.contains(&(y as u32)) { 2.0 / 16.0 } else { 0.0 };
            assert_abs_diff_eq!(*p, expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn qubit_cap() {
        assert!(matches!(
            StateVector::zero(25),
            Err(Error::TooManyQubits { .. })
        ));
    }
}
