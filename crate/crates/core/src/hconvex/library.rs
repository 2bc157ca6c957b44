//! Concrete fields: quadratics `½ξ₁ᵀAξ₁ + c·t`, the gauge `N`, and affine pairings `⟨v, ξ₁⟩`.

use crate::error::{Error, Result};
use crate::group::{HVector, Point};
use crate::hconvex::{ScalarField, SetDescriptor};
use crate::scalar::Scalar;

/// `u(x, y, t) = ½(x, y)·A·(x, y)ᵀ + c·t` with `A` symmetric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticSpec<S> {
    a: [[S; 2]; 2],
    c: S,
}

impl<S: Scalar> QuadraticSpec<S> {
    /// Rejects an `A` whose off-diagonal entries differ.
    pub fn new(a: [[S; 2]; 2], c: S) -> Result<Self> {
        if a[0][1] != a[1][0] {
            return Err(Error::NotSymmetric {
                a12: a[0][1].to_f64_lossy(),
                a21: a[1][0].to_f64_lossy(),
            });
        }
        if !(a.iter().flatten().all(|v| v.is_finite()) && c.is_finite()) {
            return Err(Error::NonFinite {
                context: "quadratic spec",
            });
        }
        Ok(Self { a, c })
    }

    pub fn a(&self) -> [[S; 2]; 2] {
        self.a
    }

    pub fn c(&self) -> S {
        self.c
    }

    pub fn evaluate(&self, g: &Point<S>) -> S {
        let [[a11, a12], [_, a22]] = self.a;
        let half = S::lit(0.5);
        half * (a11 * g.x * g.x + (a12 + a12) * g.x * g.y + a22 * g.y * g.y) + self.c * g.t
    }

    /// `(A11x + A12y + 2cy, A12x + A22y − 2cx)`.
    pub fn hgrad(&self, g: &Point<S>) -> HVector<S> {
        let [[a11, a12], [_, a22]] = self.a;
        let two_c = self.c + self.c;
        HVector::new(a11 * g.x + a12 * g.y + two_c * g.y, a12 * g.x + a22 * g.y - two_c * g.x)
    }

    /// Smallest eigenvalue of `A`; the field is H-convex iff this is non-negative.
    pub fn min_eigenvalue(&self) -> S {
        sym_min_eigenvalue(&self.a)
    }
}

pub(crate) fn sym_min_eigenvalue<S: Scalar>(a: &[[S; 2]; 2]) -> S {
    let half = S::lit(0.5);
    let mean = (a[0][0] + a[1][1]) * half;
    let dev = ((a[0][0] - a[1][1]) * half).hypot(a[0][1]);
    mean - dev
}

pub fn build_quadratic<S: Scalar>(spec: QuadraticSpec<S>) -> ScalarField<S> {
    let label = format!(
        "quadratic(A=[[{}, {}], [{}, {}]], c={})",
        spec.a[0][0], spec.a[0][1], spec.a[1][0], spec.a[1][1], spec.c
    );
    ScalarField::new(label, move |g| spec.evaluate(g)).with_hgrad(move |g| spec.hgrad(g))
}

/// `N(x, y, t) = ((x² + y²)² + t²)^{1/4}`.
#[inline]
pub fn gauge_value<S: Scalar>(g: &Point<S>) -> S {
    // Homogeneous rescaling by m keeps ρ⁴ clear of underflow and overflow.
    let m = g.x.abs().max(g.y.abs()).max(g.t.abs().sqrt());
    if m == S::zero() || !m.is_finite() {
        return m;
    }
    let (x, y, t) = (g.x / m, g.y / m, g.t / m / m);
    m * (x * x + y * y).hypot(t).sqrt()
}

/// `(x(x² + y²) + yt, y(x² + y²) − xt) / N³` for `g ≠ e`.
///
/// Evaluated on `δ_{1/N}(g)`, where `N = 1`; the expression is invariant under dilations,
/// which keeps it accurate arbitrarily close to the origin.
pub fn gauge_hgrad<S: Scalar>(g: &Point<S>) -> Option<HVector<S>> {
    let n = gauge_value(g);
    if n == S::zero() {
        return None;
    }
    let inv = n.recip();
    let (x, y, t) = (g.x * inv, g.y * inv, g.t * inv * inv);
    let rho2 = x * x + y * y;
    Some(HVector::new(x * rho2 + y * t, y * rho2 - x * t))
}

/// `∂_H N(g)`: the gradient off the origin, the closed unit ball at `e`.
pub fn gauge_subdifferential<S: Scalar>(g: &Point<S>) -> SetDescriptor<S> {
    match gauge_hgrad(g) {
        Some(v) => SetDescriptor::Singleton(v),
        None => SetDescriptor::Ball {
            center: HVector::zero(),
            radius: S::one(),
        },
    }
}

pub fn build_gauge<S: Scalar>() -> ScalarField<S> {
    ScalarField::new("gauge", gauge_value)
        .with_subdifferential(gauge_subdifferential, vec![Point::identity()])
        .with_smooth(false)
}

/// `g ↦ ⟨v, ξ₁(g)⟩`, whose H-subdifferential is `{v}` everywhere.
pub fn build_affine_pairing<S: Scalar>(v: HVector<S>) -> ScalarField<S> {
    ScalarField::new(format!("affine(v=[{}, {}])", v.w1, v.w2), move |g| v.dot(&g.xi1())).with_hgrad(move |_| v)
}

/// Relative defect of `|ξ₁(g) + λ∂_H N(g)|² = ρ²(1 + λ²/N² + 2λρ²/N³)` at `g ≠ e`.
pub fn gauge_ex2_identity_residual<S: Scalar>(g: &Point<S>, lambda: S) -> Option<S> {
    let grad = gauge_hgrad(g)?;
    let lhs = (g.xi1() + grad.scale(lambda)).norm_sqr();
    let n = gauge_value(g);
    let rho2 = g.x * g.x + g.y * g.y;
    let two = S::lit(2.0);
    let rhs = rho2 * (S::one() + lambda * lambda / (n * n) + two * lambda * rho2 / (n * n * n));
    let scale = lhs.abs().max(rhs.abs());
    Some(if scale == S::zero() {
        S::zero()
    } else {
        (lhs - rhs).abs() / scale
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_examples() {
        let q = QuadraticSpec::new([[3.0, 0.0], [0.0, 4.0]], 1.0).unwrap();
        let g = Point::new(2.0, -1.0, 0.5);
        assert_eq!(q.evaluate(&g), 1.5 * 4.0 + 2.0 * 1.0 + 0.5);
        assert_eq!(
            q.hgrad(&g),
            HVector::new(3.0 * 2.0 + 2.0 * -1.0, -2.0 * 2.0 + 4.0 * -1.0)
        );

        let zero = build_quadratic(QuadraticSpec::new([[0.0; 2]; 2], 0.0).unwrap());
        assert_eq!(zero.evaluate(&g), 0.0);
        assert_eq!(
            zero.analytic_subdifferential(&g),
            Some(SetDescriptor::Singleton(HVector::zero()))
        );

        let q2 = QuadraticSpec::new([[3.0, -1.0], [-1.0, 4.0]], 0.5).unwrap();
        for (x, y) in [(1.0, 2.0), (-0.5, 0.25), (3.0, -7.0)] {
            let g = Point::new(x, y, 9.0);
            assert_eq!(q2.hgrad(&g), HVector::new(3.0 * x, -2.0 * x + 4.0 * y));
        }
    }

    #[test]
    fn quadratic_rejects_asymmetric_matrix() {
        assert!(matches!(
            QuadraticSpec::new([[3.0, 2.0], [-2.0, 4.0]], 1.0),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn min_eigenvalue_matches_characteristic_polynomial() {
        let q = QuadraticSpec::new([[3.0, -1.0], [-1.0, 4.0]], 0.5).unwrap();
        assert!((q.min_eigenvalue() - (7.0 - 5f64.sqrt()) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn gauge_values() {
        assert_eq!(gauge_value(&Point::new(1.0, 0.0, 0.0)), 1.0);
        assert_eq!(gauge_value(&Point::new(0.0, 0.0, 1.0)), 1.0);
        assert_eq!(gauge_value(&Point::<f64>::identity()), 0.0);
        let n4 = gauge_value(&Point::<f64>::new(0.3, 0.3, 1.0)).powi(4);
        assert!((n4 - 1.0324).abs() < 1e-12);
    }

    #[test]
    fn gauge_gradient_matches_closed_form() {
        // Direct transcription of the formula, without the dilation trick.
        let direct = |x: f64, y: f64, t: f64| {
            let rho2 = x * x + y * y;
            let n = (rho2 * rho2 + t * t).powf(0.25);
            HVector::new((x * rho2 + y * t) / n.powi(3), (y * rho2 - x * t) / n.powi(3))
        };
        for (x, y, t) in [(0.3, 0.3, 1.0), (1.0, -2.0, 0.5), (0.0, 0.0, 3.0), (-4.0, 0.1, -9.0)] {
            let a = gauge_hgrad(&Point::new(x, y, t)).unwrap();
            let b = direct(x, y, t);
            assert!((a - b).norm() < 1e-14, "{a:?} vs {b:?}");
        }
        assert_eq!(gauge_hgrad(&Point::new(0.0, 0.0, 2.0)), Some(HVector::new(0.0, 0.0)));
        let g = gauge_hgrad(&Point::<f64>::new(0.3, 0.3, 1.0)).unwrap();
        assert!((g.w1 - 0.345635).abs() < 1e-6);
        assert!((g.w2 + 0.240187).abs() < 1e-6);
    }

    #[test]
    fn gauge_subdifferential_at_origin_is_unit_ball() {
        assert_eq!(
            gauge_subdifferential(&Point::<f64>::identity()),
            SetDescriptor::Ball {
                center: HVector::zero(),
                radius: 1.0
            }
        );
        let tiny = gauge_hgrad(&Point::<f64>::new(1e-200, 0.0, 0.0)).unwrap();
        assert!(
            (tiny.w1 - 1.0).abs() < 1e-12,
            "{tiny:?} {}",
            gauge_value(&Point::<f64>::new(1e-200, 0.0, 0.0))
        );
    }

    #[test]
    fn affine_pairing() {
        let f = build_affine_pairing(HVector::new(1.0, 2.0));
        assert_eq!(f.evaluate(&Point::new(3.0, 4.0, 5.0)), 11.0);
        let z = build_affine_pairing(HVector::<f64>::zero());
        assert_eq!(z.evaluate(&Point::new(3.0, 4.0, 5.0)), 0.0);
        assert_eq!(
            f.analytic_subdifferential(&Point::new(-1.0, 0.0, 8.0)),
            Some(SetDescriptor::Singleton(HVector::new(1.0, 2.0)))
        );
    }

    #[test]
    fn ex2_identity_at_worked_point() {
        let r = gauge_ex2_identity_residual(&Point::new(0.3, 0.3, 1.0), 1.0).unwrap();
        assert!(r < 1e-14);
        assert!(gauge_ex2_identity_residual(&Point::<f64>::identity(), 1.0).is_none());
    }
}
