//! `⟨v' − v, ξ₁(g') − ξ₁(g)⟩ ≥ 0` for `g' ∈ H_g`, on finite graphs or sampled fields.

use serde::Serialize;

use crate::group::{HVector, Point};
use crate::hconvex::{ScanConfig, SetDescriptor};
use crate::monotone::{OperatorField, OperatorGraph};
use crate::plane::on_horizontal_plane;
use crate::sampling::{rng_from_seed, sample_disk};
use crate::scalar::Scalar;
use crate::tolerance::ToleranceConfig;

const MAX_WITNESSES: usize = 32;

/// A violating quadruple `(g, v, g', v')` with `g' ∈ H_g`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotoneWitness {
    pub g: [f64; 3],
    pub v: [f64; 2],
    pub g_prime: [f64; 3],
    pub v_prime: [f64; 2],
    pub slack: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonotoneReport {
    pub pass: bool,
    /// No plane-related pairs were available; a vacuous pass.
    pub vacuous: bool,
    pub admissible_pairs: usize,
    pub violations: usize,
    pub min_slack: f64,
    pub witnesses: Vec<MonotoneWitness>,
}

impl MonotoneReport {
    fn new() -> Self {
        Self {
            pass: true,
            vacuous: false,
            admissible_pairs: 0,
            violations: 0,
            min_slack: f64::INFINITY,
            witnesses: Vec::new(),
        }
    }

    fn record<S: Scalar>(&mut self, g: &Point<S>, v: &HVector<S>, g2: &Point<S>, v2: &HVector<S>, slack: S, floor: S) {
        self.admissible_pairs += 1;
        let s = slack.to_f64_lossy();
        self.min_slack = self.min_slack.min(s);
        if slack < floor || !slack.is_finite() {
            self.pass = false;
            self.violations += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(MonotoneWitness {
                    g: g.to_array(),
                    v: v.to_array(),
                    g_prime: g2.to_array(),
                    v_prime: v2.to_array(),
                    slack: s,
                });
            }
        }
    }

    fn finish(mut self) -> Self {
        if self.admissible_pairs == 0 {
            self.vacuous = true;
            self.min_slack = 0.0;
        }
        self
    }
}

fn floor<S: Scalar>(tol: &ToleranceConfig, v: &HVector<S>, v2: &HVector<S>, d: S) -> S {
    -tol.conv::<S>() * (S::one() + (v.norm() + v2.norm()) * d)
}

/// Checks every pair of graph nodes lying on each other's horizontal plane.
pub fn hmonotone_check_graph<S: Scalar>(graph: &OperatorGraph<S>, tol: &ToleranceConfig) -> MonotoneReport {
    let mut report = MonotoneReport::new();
    let pairs = graph.pairs();
    for i in 0..pairs.len() {
        for j in (i + 1)..pairs.len() {
            let (g, v) = &pairs[i];
            let (g2, v2) = &pairs[j];
            if !on_horizontal_plane(g, g2, tol) {
                continue;
            }
            let d = g2.xi1() - g.xi1();
            let slack = (*v2 - *v).dot(&d);
            report.record(g, v, g2, v2, slack, floor(tol, v, v2, d.norm()));
        }
    }
    report.finish()
}

/// Samples `config.samples` pairs `g' = g ∘ exp(w)`, `g` in the region and `w` in the
/// ball, so every pair is plane-related by construction.
///
/// Set-valued values are handled exactly: the least slack over `v ∈ T(g)`,
/// `v' ∈ T(g')` is `⟨c' − c, Δ⟩ − (r + r')|Δ|`.
pub fn hmonotone_check_field<S: Scalar>(
    field: &OperatorField<S>,
    config: &ScanConfig,
    tol: &ToleranceConfig,
) -> MonotoneReport {
    let mut rng = rng_from_seed(tol.seed);
    let mut report = MonotoneReport::new();
    for _ in 0..config.samples {
        let g: Point<S> = config.region.sample_point(&mut rng);
        let w: HVector<S> = sample_disk(&mut rng, config.ball_radius);
        let g2 = g.step(&w);
        let (a, b) = (field.evaluate(&g), field.evaluate(&g2));
        let (v, v2) = worst_case_pair(&a, &b, &w);
        let slack = (v2 - v).dot(&w);
        report.record(&g, &v, &g2, &v2, slack, floor(tol, &v, &v2, w.norm()));
    }
    report.finish()
}

/// The members of `a` and `b` that minimise `⟨v' − v, d⟩`.
pub(crate) fn worst_case_pair<S: Scalar>(
    a: &SetDescriptor<S>,
    b: &SetDescriptor<S>,
    d: &HVector<S>,
) -> (HVector<S>, HVector<S>) {
    let n = d.norm();
    if n == S::zero() {
        return (a.center(), b.center());
    }
    let u = d.scale(n.recip());
    (a.center() + u.scale(a.radius()), b.center() - u.scale(b.radius()))
}
