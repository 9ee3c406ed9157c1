//! Topology of the functional graph `x → f(x)` on `2^n` vertices.
//!
//! Component counts come in two flavours. `betti0` counts strongly connected
//! components: every directed cycle is one component and every vertex off a
//! cycle is its own. `weak_components` counts connected pieces of the
//! undirected support, and the cyclomatic number `betti1` is taken on that
//! support.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use petgraph::dot::{Config, Dot};
use petgraph::graph::DiGraph;
use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::boolfn::{BitString, BooleanFunction, ClassKind};

pub const MAX_DOT_WIDTH: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionalGraph {
    n: usize,
    successor: Vec<usize>,
}

impl FunctionalGraph {
    pub fn from_successors(n: usize, successor: Vec<usize>) -> Self {
        assert_eq!(successor.len(), 1 << n, "successor array must have 2^n entries");
        assert!(successor.iter().all(|&s| s < 1 << n), "successor out of range");
        Self { n, successor }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.successor.len()
    }

    pub fn successors(&self) -> &[usize] {
        &self.successor
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut indeg = vec![0; self.vertex_count()];
        for &s in &self.successor {
            indeg[s] += 1;
        }
        indeg
    }

    /// Edges of the simple undirected support: `{x, f(x)}` deduplicated, a
    /// self-loop kept once as `(x, x)`.
    pub fn support_edges(&self) -> BTreeSet<(usize, usize)> {
        self.successor
            .iter()
            .enumerate()
            .map(|(x, &y)| (x.min(y), x.max(y)))
            .collect()
    }
}

pub fn build_graph(f: &BooleanFunction) -> FunctionalGraph {
    FunctionalGraph {
        n: f.n(),
        successor: f.truth_table().into_iter().map(|y| y as usize).collect(),
    }
}

/// Degree = in-degree + out-degree; a self-loop contributes 2.
pub fn degree_histogram(g: &FunctionalGraph) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for d in g.in_degrees() {
        *hist.entry(d + 1).or_insert(0) += 1;
    }
    hist
}

/// Vertices on directed cycles, found by repeatedly removing vertices of
/// in-degree zero.
pub fn periodic_points(g: &FunctionalGraph) -> Vec<usize> {
    let mut indeg = g.in_degrees();
    let mut removed = vec![false; g.vertex_count()];
    let mut stack: Vec<usize> = (0..g.vertex_count()).filter(|&v| indeg[v] == 0).collect();
    while let Some(v) = stack.pop() {
        removed[v] = true;
        let s = g.successor[v];
        indeg[s] -= 1;
        if indeg[s] == 0 {
            stack.push(s);
        }
    }
    (0..g.vertex_count()).filter(|&v| !removed[v]).collect()
}

pub fn periodic_point_count(g: &FunctionalGraph) -> usize {
    periodic_points(g).len()
}

/// Every directed cycle, each listed from its smallest vertex.
pub fn cycles(g: &FunctionalGraph) -> Vec<Vec<usize>> {
    let on_cycle: BTreeSet<usize> = periodic_points(g).into_iter().collect();
    let mut seen = vec![false; g.vertex_count()];
    let mut out = Vec::new();
    for &start in &on_cycle {
        if seen[start] {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut v = g.successor[start];
        while v != start {
            seen[v] = true;
            cycle.push(v);
            v = g.successor[v];
        }
        out.push(cycle);
    }
    out
}

/// Connected components of the undirected support.
pub fn weak_component_count(g: &FunctionalGraph) -> usize {
    let mut uf = UnionFind::<usize>::new(g.vertex_count());
    for (x, &y) in g.successor.iter().enumerate() {
        uf.union(x, y);
    }
    let mut labels = uf.into_labeling();
    labels.sort_unstable();
    labels.dedup();
    labels.len()
}

/// Strongly connected components: one per directed cycle plus one per
/// vertex off every cycle.
pub fn strong_component_count(g: &FunctionalGraph) -> usize {
    let periodic = periodic_point_count(g);
    g.vertex_count() - periodic + cycles(g).len()
}

/// `(β₀, β₁)` with `β₀` the strong component count and
/// `β₁ = E_s - V + weak components`.
pub fn betti_numbers(g: &FunctionalGraph) -> (usize, usize) {
    let report = TopologyReport::of(g);
    (report.betti0, report.betti1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopologyReport {
    pub degree_histogram: BTreeMap<usize, usize>,
    pub betti0: usize,
    pub weak_components: usize,
    pub betti1: usize,
    pub support_edges: usize,
    pub periodic_points: usize,
    pub cycle_count: usize,
    pub is_permutation: bool,
}

impl TopologyReport {
    pub fn of(g: &FunctionalGraph) -> Self {
        let v = g.vertex_count();
        let weak = weak_component_count(g);
        let edges = g.support_edges().len();
        let periodic = periodic_point_count(g);
        let cycle_count = cycles(g).len();
        Self {
            degree_histogram: degree_histogram(g),
            betti0: v - periodic + cycle_count,
            weak_components: weak,
            betti1: edges + weak - v,
            support_edges: edges,
            periodic_points: periodic,
            cycle_count,
            is_permutation: periodic == v,
        }
    }

    pub fn degree_histogram_json(&self) -> String {
        serde_json::to_string(&self.degree_histogram).expect("map of integers serializes")
    }
}

pub fn topology_report(f: &BooleanFunction) -> TopologyReport {
    TopologyReport::of(&build_graph(f))
}

/// Graphviz text with one node per vertex, labelled by its bit string.
pub fn export_dot(g: &FunctionalGraph) -> String {
    assert!(g.n <= MAX_DOT_WIDTH, "DOT export is limited to n <= {MAX_DOT_WIDTH}");
    let mut dg = DiGraph::<String, &str>::with_capacity(g.vertex_count(), g.vertex_count());
    let nodes: Vec<_> = (0..g.vertex_count())
        .map(|v| dg.add_node(BitString::new(g.n, v as u32).expect("fits width").to_string()))
        .collect();
    for (x, &y) in g.successor.iter().enumerate() {
        dg.add_edge(nodes[x], nodes[y], "");
    }
    let mut out = String::new();
    write!(out, "{}", Dot::with_config(&dg, &[Config::EdgeNoLabel])).expect("write to string");
    out
}

/// A one-feature decision stump.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Threshold {
    /// Values `<= threshold` are predicted `below`.
    pub threshold: f64,
    pub below: ClassKind,
    pub accuracy: f64,
}

/// Best stump on `values` for two-class `labels`, scanning midpoints
/// between consecutive distinct values.
pub fn best_threshold(values: &[f64], labels: &[ClassKind]) -> Threshold {
    assert_eq!(values.len(), labels.len(), "length mismatch");
    assert!(!values.is_empty(), "no values to threshold");
    let mut distinct: Vec<f64> = values.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    let mut candidates = vec![distinct[0] - 1.0];
    candidates.extend(distinct.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    let mut best = Threshold {
        threshold: candidates[0],
        below: ClassKind::OneToOne,
        accuracy: -1.0,
    };
    for &t in &candidates {
        for below in [ClassKind::OneToOne, ClassKind::TwoToOne] {
            let correct = values
                .iter()
                .zip(labels)
                .filter(|(&v, &l)| (v <= t) == (l == below))
                .count();
            let acc = correct as f64 / values.len() as f64;
            if acc > best.accuracy {
                best = Threshold {
                    threshold: t,
                    below,
                    accuracy: acc,
                };
            }
        }
    }
    best
}
