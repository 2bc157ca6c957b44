//! Pairs of distinct points on one horizontal plane whose resolvent images
//! `ξ₁(g) + λ∂_H f(g)` intersect, i.e. where the horizontal resolvent is multivalued.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{HVector, Point};
use crate::hconvex::{horizontal_gradient_fd, ScalarField, SetDescriptor};
use crate::plane::{on_horizontal_plane, PlaneCoeffs};
use crate::scalar::Scalar;
use crate::tolerance::ToleranceConfig;

/// Square grid `center + (i·spacing, j·spacing)` with `|i·spacing|, |j·spacing| ≤ half_width`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub center: [f64; 2],
    pub half_width: f64,
    pub spacing: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            center: [0.0, 0.0],
            half_width: 1.0,
            spacing: 0.1,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = self.spacing > 0.0
            && self.half_width >= 0.0
            && self.spacing.is_finite()
            && self.half_width.is_finite()
            && self.center.iter().all(|c| c.is_finite());
        if !ok {
            return Err(Error::InvalidArgument(
                "grid needs finite center, half_width >= 0 and spacing > 0".into(),
            ));
        }
        Ok(())
    }

    /// Grid nodes in row-major order (`y` outer, `x` inner).
    pub fn nodes(&self) -> Vec<[f64; 2]> {
        let k = (self.half_width / self.spacing + 1e-9).floor() as i64;
        let mut out = Vec::with_capacity(((2 * k + 1) * (2 * k + 1)) as usize);
        for j in -k..=k {
            for i in -k..=k {
                out.push([
                    self.center[0] + i as f64 * self.spacing,
                    self.center[1] + j as f64 * self.spacing,
                ]);
            }
        }
        out
    }

    /// Length of a cell diagonal.
    pub fn cell_diagonal(&self) -> f64 {
        self.spacing * std::f64::consts::SQRT_2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollisionReport {
    pub plane_base: [f64; 3],
    pub lambda: f64,
    pub g: [f64; 3],
    pub g_prime: [f64; 3],
    /// A point of both image sets (the midpoint of the closest pair).
    pub common_value: [f64; 2],
    pub common_value_norm: f64,
    /// Gap between the two image sets, at most the collision tolerance.
    pub distance: f64,
}

/// `ξ₁(g) + λ∂_H f(g)`, analytic where available, otherwise a finite-difference singleton.
pub fn resolvent_image<S: Scalar>(
    f: &ScalarField<S>,
    g: &Point<S>,
    lambda: S,
    tol: &ToleranceConfig,
) -> Result<SetDescriptor<S>> {
    let d = match f.analytic_subdifferential(g) {
        Some(d) => d,
        None => SetDescriptor::Singleton(horizontal_gradient_fd(f, g, tol)?),
    };
    Ok(d.affine(&g.xi1(), lambda))
}

fn common_point<S: Scalar>(a: &SetDescriptor<S>, b: &SetDescriptor<S>) -> HVector<S> {
    let pa = a.nearest_to(&b.center());
    let pb = b.nearest_to(&pa);
    (pa + pb).scale(S::lit(0.5))
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::NonPositiveLambda(lambda));
    }
    Ok(())
}

fn collide<S: Scalar>(
    base: &Point<S>,
    lambda: f64,
    (g, a): (&Point<S>, &SetDescriptor<S>),
    (h, b): (&Point<S>, &SetDescriptor<S>),
    tol: &ToleranceConfig,
) -> Option<CollisionReport> {
    let d = a.distance_between(b);
    let scale = S::one() + a.center().norm().max(b.center().norm());
    if !(d <= tol.conv::<S>() * scale) {
        return None;
    }
    let v = common_point(a, b);
    Some(CollisionReport {
        plane_base: base.to_array(),
        lambda,
        g: g.to_array(),
        g_prime: h.to_array(),
        common_value: v.to_array(),
        common_value_norm: v.norm().to_f64_lossy(),
        distance: d.to_f64_lossy(),
    })
}

/// Lifts the grid onto `H_{g″}`, adds the operator's singular points lying on that
/// plane, and reports every colliding pair in grid order.
pub fn resolvent_collision_scan<S: Scalar>(
    f: &ScalarField<S>,
    plane_base: &Point<S>,
    lambda: f64,
    grid: &GridSpec,
    tol: &ToleranceConfig,
) -> Result<Vec<CollisionReport>> {
    check_lambda(lambda)?;
    grid.validate()?;
    let plane = PlaneCoeffs::of(plane_base);
    let mut points: Vec<Point<S>> = grid
        .nodes()
        .iter()
        .map(|p| plane.lift(&HVector::new(S::lit(p[0]), S::lit(p[1]))))
        .collect();
    for s in f.singular_points() {
        if on_horizontal_plane(plane_base, s, tol) && !points.iter().any(|p| p.xi1() == s.xi1()) {
            points.push(*s);
        }
    }
    let lam = S::lit(lambda);
    let images = points
        .iter()
        .map(|g| resolvent_image(f, g, lam, tol))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if points[i].xi1() == points[j].xi1() {
                continue;
            }
            if let Some(c) = collide(
                plane_base,
                lambda,
                (&points[i], &images[i]),
                (&points[j], &images[j]),
                tol,
            ) {
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// The plane base `(a, b, 0)` whose horizontal plane contains both `e` and `p`.
///
/// `e ∈ H_{(a,b,0)}` always; `p ∈ H_{(a,b,0)}` iff `2(b·x − a·y) = t`, solved with
/// `(a, b) ∥ (−y, x)`. Requires `(x, y) ≠ 0`.
pub fn plane_base_through_identity<S: Scalar>(p: &Point<S>) -> Option<Point<S>> {
    let rho2 = p.x * p.x + p.y * p.y;
    if rho2 == S::zero() {
        return None;
    }
    let k = p.t / (rho2 + rho2);
    Some(Point::new(-p.y * k, p.x * k, S::zero()))
}

/// For each grid point `(x, y)` with `(x, y) ≠ 0`, tests `p = (x, y, t)` against `e` on
/// the plane through both; this is the family in which gauge collisions with `e` occur.
pub fn identity_collision_family_scan<S: Scalar>(
    f: &ScalarField<S>,
    t: f64,
    lambda: f64,
    grid: &GridSpec,
    tol: &ToleranceConfig,
) -> Result<Vec<CollisionReport>> {
    check_lambda(lambda)?;
    grid.validate()?;
    let lam = S::lit(lambda);
    let e = Point::identity();
    let image_e = resolvent_image(f, &e, lam, tol)?;
    let mut out = Vec::new();
    for node in grid.nodes() {
        let p = Point::new(S::lit(node[0]), S::lit(node[1]), S::lit(t));
        let Some(base) = plane_base_through_identity(&p) else {
            continue;
        };
        let image_p = resolvent_image(f, &p, lam, tol)?;
        if let Some(c) = collide(&base, lambda, (&e, &image_e), (&p, &image_p), tol) {
            out.push(c);
        }
    }
    Ok(out)
}

/// Largest `r` with `|(r, 0, 1)`-type images inside `λB`: the radius `ρ` at which
/// `ρ²(1 + λ²/N² + 2λρ²/N³) = λ²`, `N⁴ = ρ⁴ + t²`, found by bisection on `ρ`.
///
/// The left side is increasing in `ρ`, so the gauge collisions with `e` at height `t`
/// fill exactly the disk of this radius.
pub fn gauge_collision_radius(t: f64, lambda: f64) -> f64 {
    let lhs = |rho: f64| {
        let r2 = rho * rho;
        let n = (r2 * r2 + t * t).powf(0.25);
        r2 * (1.0 + lambda * lambda / (n * n) + 2.0 * lambda * r2 / (n * n * n))
    };
    let (mut lo, mut hi) = (0.0, lambda);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if lhs(mid) <= lambda * lambda {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}
