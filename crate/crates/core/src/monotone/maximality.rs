use serde::Serialize;

use crate::group::{HVector, Point};
use crate::hconvex::SetDescriptor;
use crate::monotone::check::worst_case_pair;
use crate::monotone::OperatorField;
use crate::sampling::{rng_from_seed, sample_disk, sample_log_radius};
use crate::scalar::Scalar;
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MaximalityOutcome {
    /// `g' ∈ H_g`, `v' ∈ T(g')` with `⟨v − v', ξ₁(g) − ξ₁(g')⟩ < 0`: `(g, v)` cannot
    /// be added to the graph of `T` without breaking H-monotonicity.
    CounterWitness {
        g_prime: [f64; 3],
        v_prime: [f64; 2],
        pairing: f64,
    },
    /// No witness within the budget. This says nothing about maximality.
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct MaximalityReport {
    pub outcome: MaximalityOutcome,
    pub samples_used: usize,
}

/// Searches `H_g` for a point that refutes extending `T` by `(g, v)`.
///
/// Offsets alternate between the disk of radius `1 + |ξ₁(g)| + |v|` and log-uniform
/// lengths down to `1e-6` of that, since for continuous `T` witnesses concentrate
/// near `g` when `v` is close to `T(g)`.
pub fn maximality_probe<S: Scalar>(
    field: &OperatorField<S>,
    g: &Point<S>,
    v: &HVector<S>,
    samples: usize,
    tol: &ToleranceConfig,
) -> MaximalityReport {
    let mut rng = rng_from_seed(tol.seed);
    let radius = 1.0 + g.xi1().norm().to_f64_lossy() + v.norm().to_f64_lossy();
    let conv = tol.conv::<S>();
    let given = SetDescriptor::Singleton(*v);
    for i in 0..samples {
        let w: HVector<S> = if i % 2 == 0 {
            sample_disk(&mut rng, radius)
        } else {
            sample_log_radius(&mut rng, 1e-6 * radius, radius)
        };
        let g2 = g.step(&w);
        let (_, v2) = worst_case_pair(&given, &field.evaluate(&g2), &w);
        // ξ₁(g) − ξ₁(g') = −w.
        let pairing = (*v - v2).dot(&-w);
        if pairing < -conv * (S::one() + (v.norm() + v2.norm()) * w.norm()) {
            return MaximalityReport {
                outcome: MaximalityOutcome::CounterWitness {
                    g_prime: g2.to_array(),
                    v_prime: v2.to_array(),
                    pairing: pairing.to_f64_lossy(),
                },
                samples_used: i + 1,
            };
        }
    }
    MaximalityReport {
        outcome: MaximalityOutcome::Inconclusive,
        samples_used: samples,
    }
}
