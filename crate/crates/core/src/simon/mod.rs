//! Simon's algorithm end to end: the top-register measurement law, GF(2)
//! post-processing, and a classical collision-search baseline.

mod solver;

use std::sync::Arc;

use rand::seq::index::sample;
use rand::{Rng, RngCore};
use serde::Serialize;

pub use solver::Gf2Solver;

use crate::boolfn::{BitString, BooleanFunction, ClassKind, FunctionClass};
use crate::error::{Error, Result};
use crate::qsim::{Register, Sampler, StateVector};
use crate::registry::{Named, Registry};

/// `H^n ⊗ 1 · U_f · H^n ⊗ 1 |0>|0>` on `2n` qubits.
pub fn simon_state(f: &BooleanFunction) -> Result<StateVector> {
    let n = f.n();
    let mut state = StateVector::zero(2 * n)?;
    state.hadamard_layer(0..n);
    state.apply_oracle(f);
    state.hadamard_layer(0..n);
    Ok(state)
}

/// Exact top-register measurement distribution, by statevector simulation.
pub fn simon_distribution(f: &BooleanFunction) -> Result<Vec<f64>> {
    Ok(simon_state(f)?.reduced_diagonal(Register::Top))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplePath {
    /// Uniform over `{z : z·s = 0}` from the known class; no simulation.
    #[default]
    Fast,
    /// Draws from [`simon_distribution`].
    Exact,
}

/// Repeated top-register measurements of one function's Simon circuit.
#[derive(Clone, Debug)]
pub struct SimonSampler {
    n: usize,
    inner: SamplerKind,
}

#[derive(Clone, Debug)]
enum SamplerKind {
    Uniform,
    /// Orthogonal complement of `hidden`; `fix` has `fix·hidden = 1`.
    Orthogonal { hidden: u32, fix: u32 },
    Exact(Sampler),
}

impl SimonSampler {
    pub fn new(f: &BooleanFunction, path: SamplePath) -> Result<Self> {
        let n = f.n();
        let inner = match path {
            SamplePath::Exact => SamplerKind::Exact(Sampler::new(&simon_distribution(f)?)?),
            SamplePath::Fast => {
                let class = f.classify_exact()?;
                match class.kind {
                    ClassKind::OneToOne => SamplerKind::Uniform,
                    ClassKind::TwoToOne => {
                        let hidden = class.hidden.value();
                        SamplerKind::Orthogonal {
                            hidden,
                            fix: hidden & hidden.wrapping_neg(),
                        }
                    }
                }
            }
        };
        Ok(Self { n, inner })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BitString {
        let value = match &self.inner {
            SamplerKind::Uniform => rng.random_range(0..1u32 << self.n),
            SamplerKind::Orthogonal { hidden, fix } => {
                // toggling one bit of s maps the odd coset onto the even one
                let z = rng.random_range(0..1u32 << self.n);
                if (z & hidden).count_ones() % 2 == 1 {
                    z ^ fix
                } else {
                    z
                }
            }
            SamplerKind::Exact(s) => s.sample_index(rng) as u32,
        };
        BitString::new(self.n, value).expect("sample fits width")
    }
}

/// One measurement through the fast path.
pub fn simon_sample<R: Rng + ?Sized>(f: &BooleanFunction, rng: &mut R) -> Result<BitString> {
    Ok(SimonSampler::new(f, SamplePath::Fast)?.sample(rng))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimonRunReport {
    /// `None` when the query budget ran out first.
    pub decided_class: Option<FunctionClass>,
    pub recovered_hidden: Option<BitString>,
    pub quantum_queries: usize,
    pub classical_verification_queries: usize,
    pub rank: usize,
}

impl SimonRunReport {
    pub fn is_conclusive(&self) -> bool {
        self.decided_class.is_some()
    }
}

/// Samples until the solver reaches rank `n-1`, then checks the candidate
/// period with `f(0)` and `f(s)`.
pub fn run_simon<R: Rng + ?Sized>(
    f: &BooleanFunction,
    rng: &mut R,
    max_queries: usize,
) -> Result<SimonRunReport> {
    run_simon_with(f, &SimonSampler::new(f, SamplePath::Fast)?, rng, max_queries)
}

pub fn run_simon_with<R: Rng + ?Sized>(
    f: &BooleanFunction,
    sampler: &SimonSampler,
    rng: &mut R,
    max_queries: usize,
) -> Result<SimonRunReport> {
    let n = f.n();
    if max_queries < n {
        return Err(Error::InvalidParameter(format!(
            "query budget {max_queries} is below n = {n}"
        )));
    }
    let mut solver = Gf2Solver::new(n);
    let mut quantum_queries = 0;
    while solver.rank() + 1 < n && quantum_queries < max_queries {
        solver.add(sampler.sample(rng));
        quantum_queries += 1;
    }
    let Some(candidate) = solver.solve_hidden() else {
        return Ok(SimonRunReport {
            decided_class: None,
            recovered_hidden: None,
            quantum_queries,
            classical_verification_queries: 0,
            rank: solver.rank(),
        });
    };
    let class = if f.eval(0) == f.eval(candidate.value()) {
        FunctionClass::two_to_one(candidate)
    } else {
        FunctionClass::one_to_one(n)
    };
    Ok(SimonRunReport {
        decided_class: Some(class),
        recovered_hidden: Some(class.hidden),
        quantum_queries,
        classical_verification_queries: 2,
        rank: solver.rank(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassicalReport {
    pub decided_class: FunctionClass,
    pub queries: usize,
}

/// Probes distinct uniformly random inputs until two outputs collide, or
/// until `2^(n-1) + 1` probes without a collision prove the function 1:1.
pub fn classical_baseline<R: Rng + ?Sized>(f: &BooleanFunction, rng: &mut R) -> ClassicalReport {
    let n = f.n();
    let size = 1usize << n;
    let limit = (size / 2 + 1).min(size);
    let mut seen = std::collections::HashMap::with_capacity(limit);
    let mut queries = 0;
    for x in sample(rng, size, limit).iter() {
        queries += 1;
        let y = f.eval(x as u32);
        if let Some(prev) = seen.insert(y, x as u32) {
            let hidden = BitString::new(n, prev ^ x as u32).expect("fits width");
            return ClassicalReport {
                decided_class: FunctionClass::two_to_one(hidden),
                queries,
            };
        }
    }
    ClassicalReport {
        decided_class: FunctionClass::one_to_one(n),
        queries,
    }
}

/// Outcome of one decision run, in oracle queries of either kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QueryOutcome {
    pub decided_class: Option<FunctionClass>,
    pub quantum_queries: usize,
    pub classical_queries: usize,
}

impl QueryOutcome {
    pub fn total_queries(&self) -> usize {
        self.quantum_queries + self.classical_queries
    }
}

/// A procedure that decides 1:1 versus 2:1 from oracle access.
pub trait QueryStrategy: Named + Send + Sync {
    fn decide(&self, f: &BooleanFunction, rng: &mut dyn RngCore) -> Result<QueryOutcome>;

    /// Queries the strategy is charged for in the separation table.
    fn counted_queries(&self, outcome: &QueryOutcome) -> usize {
        outcome.total_queries()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct QuantumStrategy {
    pub path: SamplePath,
    /// Budget as a multiple of `n`.
    pub budget_factor: usize,
}

impl Default for QuantumStrategy {
    fn default() -> Self {
        Self {
            path: SamplePath::Fast,
            budget_factor: 20,
        }
    }
}

impl Named for QuantumStrategy {
    fn name(&self) -> &'static str {
        "quantum"
    }

    fn description(&self) -> &'static str {
        "Simon sampling with GF(2) elimination and a two-query confirmation"
    }
}

impl QueryStrategy for QuantumStrategy {
    fn decide(&self, f: &BooleanFunction, rng: &mut dyn RngCore) -> Result<QueryOutcome> {
        let sampler = SimonSampler::new(f, self.path)?;
        let report = run_simon_with(f, &sampler, rng, self.budget_factor * f.n())?;
        Ok(QueryOutcome {
            decided_class: report.decided_class,
            quantum_queries: report.quantum_queries,
            classical_queries: report.classical_verification_queries,
        })
    }

    fn counted_queries(&self, outcome: &QueryOutcome) -> usize {
        outcome.quantum_queries
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ClassicalStrategy;

impl Named for ClassicalStrategy {
    fn name(&self) -> &'static str {
        "classical"
    }

    fn description(&self) -> &'static str {
        "random distinct probes until a collision or exhaustion of half the domain"
    }
}

impl QueryStrategy for ClassicalStrategy {
    fn decide(&self, f: &BooleanFunction, rng: &mut dyn RngCore) -> Result<QueryOutcome> {
        let report = classical_baseline(f, rng);
        Ok(QueryOutcome {
            decided_class: Some(report.decided_class),
            quantum_queries: 0,
            classical_queries: report.queries,
        })
    }
}

pub fn query_strategies() -> Registry<dyn QueryStrategy> {
    Registry::<dyn QueryStrategy>::new("query strategy")
        .with(Arc::new(QuantumStrategy::default()))
        .with(Arc::new(ClassicalStrategy))
}
