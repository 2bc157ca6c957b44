use serde::Serialize;

use crate::error::Result;
use crate::group::{HVector, Point};
use crate::monotone::OperatorField;
use crate::scalar::Scalar;
use crate::solvers::minty::{minty_resolve, resolvent_residual, ResolveStatus, ResolventQuery};
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub base: [f64; 3],
    pub lambda: f64,
    pub v: [f64; 2],
    pub sol: [f64; 3],
    /// Recomputed from the returned point, independently of the solver.
    pub residual: f64,
    pub iters: usize,
    pub status: ResolveStatus,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub rows: usize,
    pub failures: usize,
    pub max_residual: f64,
}

/// The origin plus radii `r/3, 2r/3, r` at eight angles: 25 targets inside `B(0, r)`.
pub fn polar_target_grid(radius: f64) -> Vec<[f64; 2]> {
    let mut out = vec![[0.0, 0.0]];
    for k in 1..=3 {
        let r = radius * k as f64 / 3.0;
        for a in 0..8 {
            let th = std::f64::consts::FRAC_PI_4 * a as f64;
            out.push([r * th.cos(), r * th.sin()]);
        }
    }
    out
}

/// Runs [`minty_resolve`] for every `(base, λ, v)`; solver failures become rows.
pub fn surjectivity_sweep<S: Scalar>(
    operator: &OperatorField<S>,
    bases: &[[f64; 3]],
    lambdas: &[f64],
    targets: &[[f64; 2]],
    tol: &ToleranceConfig,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(bases.len() * lambdas.len() * targets.len());
    for b in bases {
        let base = Point::try_new(S::lit(b[0]), S::lit(b[1]), S::lit(b[2]))?;
        for &lambda in lambdas {
            for v in targets {
                let target = HVector::try_new(S::lit(v[0]), S::lit(v[1]))?;
                let q = ResolventQuery {
                    operator: operator.clone(),
                    base,
                    lambda: S::lit(lambda),
                    target,
                };
                let sol = minty_resolve(&q, tol)?;
                rows.push(SweepRow {
                    base: *b,
                    lambda,
                    v: *v,
                    sol: sol.g.to_array(),
                    residual: resolvent_residual(operator, &sol.g, q.lambda, &target).to_f64_lossy(),
                    iters: sol.iterations,
                    status: sol.status,
                });
            }
        }
    }
    Ok(rows)
}

pub fn summarize(rows: &[SweepRow], threshold: f64) -> SweepSummary {
    SweepSummary {
        rows: rows.len(),
        failures: rows
            .iter()
            .filter(|r| !r.status.is_success() || !(r.residual <= threshold))
            .count(),
        max_residual: rows.iter().map(|r| r.residual).fold(0.0, f64::max),
    }
}
