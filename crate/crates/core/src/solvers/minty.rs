//! Solving `v ∈ ξ₁(g) + λT(g)` for `g` on a horizontal plane `H_{g0}`.
//!
//! The plane is parametrised by `w ↦ g0 ∘ exp(w)`, which turns the inclusion into a
//! planar root-finding problem `r(w) = 0` handled by damped Newton from a grid of
//! starts. Set-valued points listed by the operator are tested first by direct
//! membership, since Newton cannot land on them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{HVector, Point};
use crate::monotone::OperatorField;
use crate::plane::on_horizontal_plane;
use crate::scalar::Scalar;
use crate::tolerance::ToleranceConfig;

const GRID: usize = 5;
const MAX_ITERS: usize = 200;
const MAX_BACKTRACKS: usize = 40;
const PATTERN_ITERS: usize = 2_000;

#[derive(Debug, Clone)]
pub struct ResolventQuery<S: Scalar> {
    pub operator: OperatorField<S>,
    pub base: Point<S>,
    pub lambda: S,
    pub target: HVector<S>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResolveStatus {
    Converged,
    /// The target lies in the image set of a set-valued point of the operator.
    SingularPoint,
    NoConvergence,
}

impl ResolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            ResolveStatus::Converged => "converged",
            ResolveStatus::SingularPoint => "singular_point",
            ResolveStatus::NoConvergence => "no_convergence",
        }
    }

    pub fn is_success(&self) -> bool {
        !matches!(self, ResolveStatus::NoConvergence)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StartKind {
    Grid,
    /// Newton restarted from the minimiser of `λu + ½|ξ₁|² − ⟨v, ξ₁⟩` over the plane.
    Potential,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StartTrace {
    pub kind: StartKind,
    pub start: [f64; 2],
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolventSolution<S> {
    pub g: Point<S>,
    /// Offset with `g = g0 ∘ exp(w)`.
    pub w: HVector<S>,
    pub residual: S,
    pub status: ResolveStatus,
    pub iterations: usize,
    pub trace: Vec<StartTrace>,
}

/// `dist(v, ξ₁(g) + λT(g))`, independent of any solver state.
pub fn resolvent_residual<S: Scalar>(operator: &OperatorField<S>, g: &Point<S>, lambda: S, v: &HVector<S>) -> S {
    operator.evaluate(g).affine(&g.xi1(), lambda).distance_to(v)
}

struct Problem<'a, S: Scalar> {
    op: &'a OperatorField<S>,
    base: Point<S>,
    lambda: S,
    v: HVector<S>,
    fd: S,
    conv: S,
}

impl<S: Scalar> Problem<'_, S> {
    /// Residual vector: nearest point of the image set minus `v`.
    fn r(&self, w: &HVector<S>) -> HVector<S> {
        let g = self.base.step(w);
        let image = self.op.evaluate(&g).affine(&g.xi1(), self.lambda);
        image.nearest_to(&self.v) - self.v
    }

    fn converged(&self, res: S) -> bool {
        res <= self.conv * (S::one() + self.v.norm())
    }

    fn jacobian(&self, w: &HVector<S>) -> [[S; 2]; 2] {
        let h = self.fd * (S::one() + w.norm());
        let two_h = h + h;
        let e1 = HVector::new(h, S::zero());
        let e2 = HVector::new(S::zero(), h);
        let c1 = (self.r(&(*w + e1)) - self.r(&(*w - e1))).scale(two_h.recip());
        let c2 = (self.r(&(*w + e2)) - self.r(&(*w - e2))).scale(two_h.recip());
        [[c1.w1, c2.w1], [c1.w2, c2.w2]]
    }

    /// Damped Newton from `w0`; returns the last iterate, its residual and the iteration count.
    fn newton(&self, w0: HVector<S>) -> (HVector<S>, S, usize) {
        let mut w = w0;
        let mut r = self.r(&w);
        let mut res = r.norm();
        for iter in 0..MAX_ITERS {
            if !res.is_finite() || self.converged(res) {
                return (w, res, iter);
            }
            let j = self.jacobian(&w);
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            let step =
                if det.abs() > S::epsilon() * (j[0][0].abs() + j[1][1].abs() + j[0][1].abs() + j[1][0].abs()).powi(2) {
                    HVector::new(
                        -(j[1][1] * r.w1 - j[0][1] * r.w2) / det,
                        -(-j[1][0] * r.w1 + j[0][0] * r.w2) / det,
                    )
                } else {
                    // Steepest descent on ½|r|² when the Jacobian is singular.
                    HVector::new(-(j[0][0] * r.w1 + j[1][0] * r.w2), -(j[0][1] * r.w1 + j[1][1] * r.w2))
                };
            let mut alpha = S::one();
            let mut accepted = false;
            for _ in 0..=MAX_BACKTRACKS {
                let cand = w + step.scale(alpha);
                let rc = self.r(&cand);
                let rn = rc.norm();
                if rn < res {
                    w = cand;
                    r = rc;
                    res = rn;
                    accepted = true;
                    break;
                }
                alpha = alpha * S::lit(0.5);
            }
            if !accepted {
                return (w, res, iter + 1);
            }
        }
        (w, res, MAX_ITERS)
    }
}

/// Solves `v ∈ ξ₁(g) + λT(g)` on `H_{g0}`.
///
/// Starts form a 5×5 grid over `[−R, R]²`, `R = max(2|v|, 2|ξ₁(g0)|, 1)`, tried in
/// order of increasing initial residual. If none converges and the operator carries
/// a potential `u`, Newton is restarted from a pattern-search minimiser of
/// `λu(g) + ½|ξ₁(g)|² − ⟨v, ξ₁(g)⟩` over the plane. Non-convergence is reported in
/// the status with the best iterate found, not as an error.
pub fn minty_resolve<S: Scalar>(q: &ResolventQuery<S>, tol: &ToleranceConfig) -> Result<ResolventSolution<S>> {
    if !(q.lambda > S::zero()) || !q.lambda.is_finite() {
        return Err(Error::NonPositiveLambda(q.lambda.to_f64_lossy()));
    }
    if !(q.base.is_finite() && q.target.is_finite()) {
        return Err(Error::NonFinite {
            context: "resolvent query",
        });
    }
    let p = Problem {
        op: &q.operator,
        base: q.base,
        lambda: q.lambda,
        v: q.target,
        fd: tol.fd::<S>(),
        conv: tol.conv::<S>(),
    };
    let inv = q.base.inverse();

    for s in q.operator.singular_points() {
        if !on_horizontal_plane(&q.base, s, tol) {
            continue;
        }
        let res = resolvent_residual(&q.operator, s, q.lambda, &q.target);
        if p.converged(res) {
            return Ok(ResolventSolution {
                g: *s,
                w: inv.mul(s).xi1(),
                residual: res,
                status: ResolveStatus::SingularPoint,
                iterations: 0,
                trace: Vec::new(),
            });
        }
    }

    let two = S::lit(2.0);
    let radius = (two * q.target.norm()).max(two * q.base.xi1().norm()).max(S::one());
    let mut starts: Vec<(S, HVector<S>)> = (0..GRID * GRID)
        .map(|k| {
            let at = |i: usize| -radius + radius * two * S::lit(i as f64) / S::lit((GRID - 1) as f64);
            let w = HVector::new(at(k % GRID), at(k / GRID));
            (p.r(&w).norm(), w)
        })
        .collect();
    starts.sort_by(|a, b| a.0.to_f64_lossy().total_cmp(&b.0.to_f64_lossy()));

    let mut trace = Vec::new();
    let mut best: Option<(HVector<S>, S, usize)> = None;
    let mut run = |kind, w0: HVector<S>, trace: &mut Vec<StartTrace>| {
        let (w, res, iters) = p.newton(w0);
        let converged = p.converged(res);
        trace.push(StartTrace {
            kind,
            start: w0.to_array(),
            iterations: iters,
            residual: res.to_f64_lossy(),
            converged,
        });
        if best.is_none_or(|(_, b, _)| res < b || !b.is_finite()) {
            best = Some((w, res, iters));
        }
        converged
    };

    let mut converged = false;
    for (_, w0) in &starts {
        if run(StartKind::Grid, *w0, &mut trace) {
            converged = true;
            break;
        }
    }
    if !converged {
        if let Some(u) = q.operator.potential() {
            let objective = |w: &HVector<S>| {
                let g = q.base.step(w);
                let xi = g.xi1();
                q.lambda * u.evaluate(&g) + xi.norm_sqr() * S::lit(0.5) - q.target.dot(&xi)
            };
            let w0 = pattern_search(objective, starts[0].1, radius);
            converged = run(StartKind::Potential, w0, &mut trace);
        }
    }

    let (w, _, iterations) = best.expect("at least one start");
    let g = q.base.step(&w);
    let residual = resolvent_residual(&q.operator, &g, q.lambda, &q.target);
    Ok(ResolventSolution {
        g,
        w,
        residual,
        status: if converged && p.converged(residual) {
            ResolveStatus::Converged
        } else {
            ResolveStatus::NoConvergence
        },
        iterations,
        trace,
    })
}

/// Compass search: poll `±step` along both axes, halve the step on failure.
fn pattern_search<S: Scalar>(f: impl Fn(&HVector<S>) -> S, start: HVector<S>, scale: S) -> HVector<S> {
    let mut x = start;
    let mut fx = f(&x);
    let mut step = scale * S::lit(0.25);
    let floor = scale * S::epsilon();
    let dirs = [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)].map(|(a, b)| HVector::new(S::lit(a), S::lit(b)));
    for _ in 0..PATTERN_ITERS {
        if step <= floor {
            break;
        }
        let mut moved = false;
        for d in &dirs {
            let cand = x + d.scale(step);
            let fc = f(&cand);
            if fc < fx {
                x = cand;
                fx = fc;
                moved = true;
                break;
            }
        }
        if !moved {
            step = step * S::lit(0.5);
        }
    }
    x
}

/// Left-translated solve: `T₀ = T(g0 ∘ ·)` at `e` with target `v − ξ₁(g0)`, mapped back by `g0 ∘ ·`.
pub fn minty_resolve_translated<S: Scalar>(
    q: &ResolventQuery<S>,
    tol: &ToleranceConfig,
) -> Result<ResolventSolution<S>> {
    let t0 = crate::monotone::left_translate_operator(&q.operator, &q.base);
    let inner = ResolventQuery {
        operator: t0,
        base: Point::identity(),
        lambda: q.lambda,
        target: q.target - q.base.xi1(),
    };
    let mut sol = minty_resolve(&inner, tol)?;
    sol.g = q.base.mul(&sol.g);
    sol.residual = resolvent_residual(&q.operator, &sol.g, q.lambda, &q.target);
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hconvex::{build_gauge, build_quadratic, QuadraticSpec};

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn query(op: OperatorField<f64>, base: Point<f64>, lambda: f64, v: HVector<f64>) -> ResolventQuery<f64> {
        ResolventQuery {
            operator: op,
            base,
            lambda,
            target: v,
        }
    }

    #[test]
    fn example_quadratic_closed_form() {
        let u = build_quadratic(QuadraticSpec::new([[3.0, 0.0], [0.0, 4.0]], 1.0).unwrap());
        let op = OperatorField::hgrad_of(&u, &tol());
        let s = minty_resolve(&query(op, Point::identity(), 1.0, HVector::new(1.0, 1.0)), &tol()).unwrap();
        assert_eq!(s.status, ResolveStatus::Converged);
        assert!((s.g.x - 0.125).abs() < 1e-12 && (s.g.y - 0.25).abs() < 1e-12);
        assert!(s.g.t.abs() < 1e-12);
        assert!(s.residual <= 1e-10);
    }

    #[test]
    fn zero_displacement_root() {
        let op = OperatorField::linear([[3.0, 2.0], [-2.0, 4.0]]);
        let g0 = Point::new(0.5, -1.0, 2.0);
        let v = g0.xi1() + op.evaluate_single(&g0).unwrap().scale(2.0);
        let s = minty_resolve(&query(op, g0, 2.0, v), &tol()).unwrap();
        assert_eq!(s.status, ResolveStatus::Converged);
        assert!(s.w.norm() < 1e-9);
    }

    #[test]
    fn gauge_singular_branch_and_example_image() {
        let op = OperatorField::hgrad_of(&build_gauge::<f64>(), &tol());
        let g0 = Point::new(0.0, 5.0 / 3.0, 0.0);
        let s = minty_resolve(&query(op.clone(), g0, 1.0, HVector::new(0.3, -0.4)), &tol()).unwrap();
        assert_eq!(s.status, ResolveStatus::SingularPoint);
        assert_eq!(s.g, Point::identity());

        let v = HVector::new(0.645635, 0.059813);
        let s = minty_resolve(&query(op.clone(), g0, 1.0, v), &tol()).unwrap();
        assert!(s.status.is_success());
        assert!(s.residual <= 1e-6);
        assert!(on_horizontal_plane(&g0, &s.g, &tol()));
    }

    #[test]
    fn gauge_off_origin_plane() {
        let op = OperatorField::hgrad_of(&build_gauge::<f64>(), &tol());
        let g0 = Point::new(1.0, -1.0, 2.0);
        for v in [HVector::new(0.0, 0.0), HVector::new(3.0, 0.0), HVector::new(-1.5, 2.0)] {
            let s = minty_resolve(&query(op.clone(), g0, 0.5, v), &tol()).unwrap();
            assert_eq!(s.status, ResolveStatus::Converged, "{v:?}: {:?}", s.trace);
        }
    }

    #[test]
    fn rejects_non_positive_lambda() {
        let op = OperatorField::linear([[1.0, 0.0], [0.0, 1.0]]);
        for l in [0.0, -1.0, f64::NAN] {
            assert!(matches!(
                minty_resolve(&query(op.clone(), Point::identity(), l, HVector::zero()), &tol()),
                Err(Error::NonPositiveLambda(_))
            ));
        }
    }

    #[test]
    fn translated_solve_agrees() {
        let op = OperatorField::linear([[2.0, 1.0], [-1.0, 1.0]]);
        let q = query(op, Point::new(1.0, 2.0, -3.0), 0.7, HVector::new(-2.0, 0.5));
        let a = minty_resolve(&q, &tol()).unwrap();
        let b = minty_resolve_translated(&q, &tol()).unwrap();
        assert!((a.g.x - b.g.x).abs() < 1e-9 && (a.g.y - b.g.y).abs() < 1e-9 && (a.g.t - b.g.t).abs() < 1e-8);
    }
}
