use crate::error::{Error, Result};
use crate::group::{HVector, Point};
use crate::monotone::OperatorField;
use crate::plane::on_horizontal_plane;
use crate::scalar::Scalar;
use crate::tolerance::ToleranceConfig;

/// A finite graph `{(g_i, v_i)}` of a set-valued map.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorGraph<S> {
    pairs: Vec<(Point<S>, HVector<S>)>,
}

impl<S: Scalar> OperatorGraph<S> {
    /// Rejects empty or non-finite input; exact duplicates are dropped, first occurrence kept.
    pub fn new(pairs: impl IntoIterator<Item = (Point<S>, HVector<S>)>) -> Result<Self> {
        let mut out: Vec<(Point<S>, HVector<S>)> = Vec::new();
        for (g, v) in pairs {
            if !(g.is_finite() && v.is_finite()) {
                return Err(Error::NonFinite {
                    context: "operator graph pair",
                });
            }
            if !out.iter().any(|(h, w)| *h == g && *w == v) {
                out.push((g, v));
            }
        }
        if out.is_empty() {
            return Err(Error::EmptyGraph);
        }
        Ok(Self { pairs: out })
    }

    /// Samples `field` at `points`, taking the centre where the value is a ball.
    pub fn from_field(field: &OperatorField<S>, points: &[Point<S>]) -> Result<Self> {
        Self::new(points.iter().map(|g| (*g, field.evaluate(g).center())))
    }

    pub fn pairs(&self) -> &[(Point<S>, HVector<S>)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Indices of the nodes located exactly at `g`.
    pub fn nodes_at(&self, g: &Point<S>) -> Vec<usize> {
        self.pairs
            .iter()
            .enumerate()
            .filter_map(|(i, (h, _))| (h == g).then_some(i))
            .collect()
    }

    /// `T₀(g) = T(g0 ∘ g)` on graphs: every node moves to `g0⁻¹ ∘ g`.
    pub fn left_translate(&self, g0: &Point<S>) -> Self {
        let inv = g0.inverse();
        Self {
            pairs: self.pairs.iter().map(|(g, v)| (inv.mul(g), *v)).collect(),
        }
    }
}

/// Directed edge `i → j` with weight `⟨v_i, ξ₁(g_j) − ξ₁(g_i)⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge<S> {
    pub from: usize,
    pub to: usize,
    pub weight: S,
    /// Magnitude `|v_i|·|ξ₁(g_j) − ξ₁(g_i)|` used to scale tolerances.
    pub scale: S,
}

/// Nodes of an [`OperatorGraph`] joined whenever `g_j ∈ H_{g_i}`.
///
/// The plane relation is symmetric, so `i → j` is present iff `j → i` is; the two
/// weights differ. A directed cycle's weight is the cyclic sum of a closed H-sequence.
#[derive(Debug, Clone)]
pub struct AdmissibilityDigraph<S> {
    pub nodes: usize,
    pub edges: Vec<Edge<S>>,
}

impl<S: Scalar> AdmissibilityDigraph<S> {
    pub fn build(graph: &OperatorGraph<S>, tol: &ToleranceConfig) -> Self {
        let pairs = graph.pairs();
        let n = pairs.len();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let (gi, vi) = &pairs[i];
                let (gj, vj) = &pairs[j];
                if !on_horizontal_plane(gi, gj, tol) {
                    continue;
                }
                let d = gj.xi1() - gi.xi1();
                let dn = d.norm();
                edges.push(Edge {
                    from: i,
                    to: j,
                    weight: vi.dot(&d),
                    scale: vi.norm() * dn,
                });
                edges.push(Edge {
                    from: j,
                    to: i,
                    weight: -vj.dot(&d),
                    scale: vj.norm() * dn,
                });
            }
        }
        Self { nodes: n, edges }
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.edges.iter().any(|e| e.from == from && e.to == to)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64, t: f64) -> Point<f64> {
        Point::new(x, y, t)
    }

    #[test]
    fn graph_invariants() {
        assert!(matches!(OperatorGraph::<f64>::new(vec![]), Err(Error::EmptyGraph)));
        let g = OperatorGraph::new(vec![
            (p(0.0, 0.0, 0.0), HVector::new(1.0, 0.0)),
            (p(0.0, 0.0, 0.0), HVector::new(1.0, 0.0)),
            (p(0.0, 0.0, 0.0), HVector::new(0.5, 0.0)),
        ])
        .unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.nodes_at(&p(0.0, 0.0, 0.0)), vec![0, 1]);
        assert!(OperatorGraph::new(vec![(p(f64::NAN, 0.0, 0.0), HVector::new(0.0, 0.0))]).is_err());
    }

    #[test]
    fn digraph_edges_are_symmetric_with_distinct_weights() {
        let g = OperatorGraph::new(vec![
            (p(0.0, 0.0, 0.0), HVector::new(0.0, 0.0)),
            (p(1.0, 0.0, 0.0), HVector::new(-1.0, 0.0)),
            (p(0.0, 0.0, 5.0), HVector::new(2.0, 2.0)),
        ])
        .unwrap();
        let d = AdmissibilityDigraph::build(&g, &ToleranceConfig::default());
        assert!(d.has_edge(0, 1) && d.has_edge(1, 0));
        assert!(!d.has_edge(0, 2) && !d.has_edge(2, 0));
        let w01 = d.edges.iter().find(|e| e.from == 0 && e.to == 1).unwrap().weight;
        let w10 = d.edges.iter().find(|e| e.from == 1 && e.to == 0).unwrap().weight;
        assert_eq!((w01, w10), (0.0, 1.0));
        // (1,0,0) ∈ H_{(0,0,5)}? t = 5 + 0 − 0 ≠ 0, so node 2 is isolated.
        assert_eq!(d.edges.len(), 2);
    }
}
