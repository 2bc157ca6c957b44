//! Potential reconstruction from a finite graph by longest-chain dynamic programming.
//!
//! `u(g) = u(g0) + sup Σ⟨v_i, ξ₁(h_{i+1}) − ξ₁(h_i)⟩` over chains `g0 = h_0 → … → h_k = g`
//! with `(h_i, v_i)` in the graph for `i < k` and each hop inside a horizontal plane.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::Point;
use crate::hconvex::ScalarField;
use crate::monotone::{hcyclic_check, AdmissibilityDigraph, CyclicCertificate, OperatorGraph};
use crate::plane::on_horizontal_plane;
use crate::scalar::Scalar;
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Clone)]
pub struct ChainQuery<S: Scalar> {
    pub graph: OperatorGraph<S>,
    pub base: Point<S>,
    pub base_value: S,
    pub target: Point<S>,
    pub max_hops: usize,
    /// Also require `target ∈ H_{g0}`, so that the chain is a closed H-sequence.
    pub closed: bool,
}

impl<S: Scalar> ChainQuery<S> {
    /// Open chains, `max_hops` equal to the node count.
    pub fn new(graph: OperatorGraph<S>, base: Point<S>, base_value: S, target: Point<S>) -> Self {
        let max_hops = graph.len();
        Self {
            graph,
            base,
            base_value,
            target,
            max_hops,
            closed: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RockafellarOutcome<S> {
    /// The supremum and the hop count of a chain attaining it (0 for the empty chain).
    Value {
        value: S,
        hops: usize,
    },
    Unreachable,
    /// The graph carries a positive cycle, so chain sums are not bounded.
    UnboundedAbove {
        cycle: Vec<usize>,
        weight: f64,
    },
}

impl<S: Scalar> RockafellarOutcome<S> {
    pub fn value(&self) -> Option<S> {
        match self {
            RockafellarOutcome::Value { value, .. } => Some(*value),
            _ => None,
        }
    }
}

/// Best chain sums into every node, reusable across targets.
///
/// `best[k][i]` is the largest sum over chains of `k` node-to-node hops that start at a
/// node located at `g0` and end at node `i`; `−∞` marks "no such chain".
#[derive(Debug, Clone)]
pub struct RockafellarTable<S: Scalar> {
    graph: OperatorGraph<S>,
    base: Point<S>,
    base_value: S,
    max_hops: usize,
    best: Vec<Vec<S>>,
    positive_cycle: Option<(Vec<usize>, f64)>,
}

impl<S: Scalar> RockafellarTable<S> {
    pub fn build(
        graph: &OperatorGraph<S>,
        base: &Point<S>,
        base_value: S,
        max_hops: usize,
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        if max_hops == 0 {
            return Err(Error::InvalidArgument("max_hops must be at least 1".into()));
        }
        let starts = graph.nodes_at(base);
        if starts.is_empty() {
            return Err(Error::BaseNotInGraph);
        }
        let positive_cycle = match hcyclic_check(graph, tol).certificate {
            CyclicCertificate::PositiveCycle { nodes, weight, .. } => Some((nodes, weight)),
            CyclicCertificate::Potentials { .. } => None,
        };
        let digraph = AdmissibilityDigraph::build(graph, tol);
        let n = graph.len();
        let mut layer = vec![S::neg_infinity(); n];
        for &i in &starts {
            layer[i] = S::zero();
        }
        let mut best = vec![layer];
        // A chain of k hops to the target uses k − 1 node-to-node hops.
        for _ in 1..max_hops {
            let prev = best.last().unwrap();
            let mut next = vec![S::neg_infinity(); n];
            for e in &digraph.edges {
                let cand = prev[e.from] + e.weight;
                if cand > next[e.to] {
                    next[e.to] = cand;
                }
            }
            best.push(next);
        }
        Ok(Self {
            graph: graph.clone(),
            base: *base,
            base_value,
            max_hops,
            best,
            positive_cycle,
        })
    }

    pub fn max_hops(&self) -> usize {
        self.max_hops
    }

    pub fn evaluate(&self, target: &Point<S>, closed: bool, tol: &ToleranceConfig) -> RockafellarOutcome<S> {
        if let Some((cycle, weight)) = &self.positive_cycle {
            return RockafellarOutcome::UnboundedAbove {
                cycle: cycle.clone(),
                weight: *weight,
            };
        }
        if closed && !on_horizontal_plane(&self.base, target, tol) {
            return RockafellarOutcome::Unreachable;
        }
        let mut found: Option<(S, usize)> = (*target == self.base).then_some((S::zero(), 0));
        let pairs = self.graph.pairs();
        for (k, layer) in self.best.iter().enumerate() {
            for (i, &acc) in layer.iter().enumerate() {
                if acc == S::neg_infinity() {
                    continue;
                }
                let (g, v) = &pairs[i];
                if !on_horizontal_plane(g, target, tol) {
                    continue;
                }
                let cand = acc + v.dot(&(target.xi1() - g.xi1()));
                if found.is_none_or(|(b, _)| cand > b) {
                    found = Some((cand, k + 1));
                }
            }
        }
        match found {
            Some((sup, hops)) => RockafellarOutcome::Value {
                value: self.base_value + sup,
                hops,
            },
            None => RockafellarOutcome::Unreachable,
        }
    }

    /// `u_R` as a field: `−∞` where unreachable, `+∞` when unbounded.
    pub fn into_field(self, closed: bool, tol: &ToleranceConfig) -> ScalarField<S> {
        let tol = *tol;
        ScalarField::new("rockafellar", move |g| match self.evaluate(g, closed, &tol) {
            RockafellarOutcome::Value { value, .. } => value,
            RockafellarOutcome::Unreachable => S::neg_infinity(),
            RockafellarOutcome::UnboundedAbove { .. } => S::infinity(),
        })
    }
}

pub fn rockafellar_eval<S: Scalar>(q: &ChainQuery<S>, tol: &ToleranceConfig) -> Result<RockafellarOutcome<S>> {
    let table = RockafellarTable::build(&q.graph, &q.base, q.base_value, q.max_hops, tol)?;
    Ok(table.evaluate(&q.target, q.closed, tol))
}
