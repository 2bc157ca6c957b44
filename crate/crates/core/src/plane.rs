//! Horizontal planes `H_{g0} = {t = t0 + 2·y0·x − 2·x0·y}` and their pairwise intersections.

use crate::group::{HVector, Point};
use crate::scalar::Scalar;
use crate::tolerance::ToleranceConfig;

/// Affine description `t = c + a·x + b·y` of the horizontal plane through `base`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneCoeffs<S> {
    pub base: Point<S>,
    pub a: S,
    pub b: S,
    pub c: S,
}

impl<S: Scalar> PlaneCoeffs<S> {
    pub fn of(base: &Point<S>) -> Self {
        let two = S::lit(2.0);
        Self {
            base: *base,
            a: two * base.y,
            b: -two * base.x,
            c: base.t,
        }
    }

    /// Height of the plane above `(x, y)`.
    pub fn t_at(&self, x: S, y: S) -> S {
        self.c + self.a * x + self.b * y
    }

    /// The point of the plane with first-layer coordinates `xi`.
    pub fn lift(&self, xi: &HVector<S>) -> Point<S> {
        Point::new(xi.w1, xi.w2, self.t_at(xi.w1, xi.w2))
    }
}

/// Signed defect of `g` from `H_{g0}`.
///
/// Computed as `(g.t − g0.t) − 2(g0.y·g.x − g0.x·g.y)`, which flips sign exactly
/// under swapping its arguments, so the membership test is symmetric bit-for-bit.
#[inline]
pub fn plane_residual<S: Scalar>(g0: &Point<S>, g: &Point<S>) -> S {
    let two = S::lit(2.0);
    (g.t - g0.t) - two * (g0.y * g.x - g0.x * g.y)
}

/// `g ∈ H_{g0}` within `plane_tol · (1 + |g.t| + |g0.t|)`.
#[inline]
pub fn on_horizontal_plane<S: Scalar>(g0: &Point<S>, g: &Point<S>, tol: &ToleranceConfig) -> bool {
    let slack = tol.plane::<S>() * (S::one() + g.t.abs() + g0.t.abs());
    plane_residual(g0, g).abs() <= slack
}

/// Common points of `H_{g0}` and `H_{g1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlaneIntersection<S> {
    /// The points `origin + s·direction` (in first-layer coordinates) lifted to either plane.
    Line {
        origin: Point<S>,
        direction: HVector<S>,
        plane: PlaneCoeffs<S>,
    },
    Coincident,
    Parallel,
}

impl<S: Scalar> PlaneIntersection<S> {
    /// Point at parameter `s` along the line; `None` for the degenerate variants.
    pub fn point_at(&self, s: S) -> Option<Point<S>> {
        match self {
            PlaneIntersection::Line {
                origin,
                direction,
                plane,
            } => Some(plane.lift(&(origin.xi1() + direction.scale(s)))),
            _ => None,
        }
    }
}

/// Intersects `H_{g0}` and `H_{g1}`.
///
/// Subtracting the two plane equations leaves `−dy·x + dx·y = (t1 − t0)/2` in the
/// `(x, y)` plane with `d = ξ₁(g1) − ξ₁(g0)`; the line runs along `d` through the
/// foot point closest to `ξ₁(g0)`, lifted onto `H_{g0}`.
pub fn plane_intersection_line<S: Scalar>(g0: &Point<S>, g1: &Point<S>) -> PlaneIntersection<S> {
    let d = g1.xi1() - g0.xi1();
    let dd = d.norm_sqr();
    if dd == S::zero() {
        return if g0.t == g1.t {
            PlaneIntersection::Coincident
        } else {
            PlaneIntersection::Parallel
        };
    }
    let half = S::lit(0.5);
    let normal = HVector::new(-d.w2, d.w1);
    let rhs = (g1.t - g0.t) * half;
    let p0 = g0.xi1();
    let offset = (rhs - normal.dot(&p0)) / dd;
    let foot = p0 + normal.scale(offset);
    let plane = PlaneCoeffs::of(g0);
    PlaneIntersection::Line {
        origin: plane.lift(&foot),
        direction: d,
        plane,
    }
}
