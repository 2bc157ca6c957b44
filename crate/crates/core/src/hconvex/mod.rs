//! Scalar fields on the group, horizontal calculus and H-convexity scans.

mod calculus;
mod library;
mod scan;
mod spec;

use std::fmt;
use std::sync::Arc;

use crate::group::{HVector, Point};
use crate::scalar::Scalar;

pub use calculus::{directional_derivative_h, horizontal_gradient, horizontal_gradient_fd};
pub(crate) use library::sym_min_eigenvalue;
pub use library::{
    build_affine_pairing, build_gauge, build_quadratic, gauge_ex2_identity_residual, gauge_hgrad,
    gauge_subdifferential, gauge_value, QuadraticSpec,
};
pub use scan::{
    hconvexity_scan, subgradient_membership, ScanConfig, ScanReport, ScanSemantics, ScanWitness, WitnessKind,
};
pub use spec::FieldSpec;

/// A subset of V₁ that an H-subdifferential can take in this crate: a point or a closed ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SetDescriptor<S> {
    Singleton(HVector<S>),
    Ball { center: HVector<S>, radius: S },
}

impl<S: Scalar> SetDescriptor<S> {
    pub fn center(&self) -> HVector<S> {
        match self {
            SetDescriptor::Singleton(v) => *v,
            SetDescriptor::Ball { center, .. } => *center,
        }
    }

    pub fn radius(&self) -> S {
        match self {
            SetDescriptor::Singleton(_) => S::zero(),
            SetDescriptor::Ball { radius, .. } => *radius,
        }
    }

    pub fn as_singleton(&self) -> Option<HVector<S>> {
        match self {
            SetDescriptor::Singleton(v) => Some(*v),
            SetDescriptor::Ball { .. } => None,
        }
    }

    /// Distance from `v` to the set (zero inside a ball).
    pub fn distance_to(&self, v: &HVector<S>) -> S {
        ((*v - self.center()).norm() - self.radius()).max(S::zero())
    }

    pub fn contains(&self, v: &HVector<S>, tol: S) -> bool {
        self.distance_to(v) <= tol
    }

    /// Gap between two sets; zero when they intersect.
    pub fn distance_between(&self, other: &Self) -> S {
        ((self.center() - other.center()).norm() - self.radius() - other.radius()).max(S::zero())
    }

    /// Minkowski sum.
    pub fn plus(&self, other: &Self) -> Self {
        match (self, other) {
            (SetDescriptor::Singleton(a), SetDescriptor::Singleton(b)) => SetDescriptor::Singleton(*a + *b),
            _ => SetDescriptor::Ball {
                center: self.center() + other.center(),
                radius: self.radius() + other.radius(),
            },
        }
    }

    /// `shift + k·self` for `k >= 0`.
    pub fn affine(&self, shift: &HVector<S>, k: S) -> Self {
        match self {
            SetDescriptor::Singleton(v) => SetDescriptor::Singleton(*shift + v.scale(k)),
            SetDescriptor::Ball { center, radius } => SetDescriptor::Ball {
                center: *shift + center.scale(k),
                radius: *radius * k.abs(),
            },
        }
    }

    /// The point of the set nearest to `v`.
    pub fn nearest_to(&self, v: &HVector<S>) -> HVector<S> {
        match self {
            SetDescriptor::Singleton(c) => *c,
            SetDescriptor::Ball { center, radius } => {
                let d = *v - *center;
                let n = d.norm();
                if n <= *radius {
                    *v
                } else {
                    *center + d.scale(*radius / n)
                }
            }
        }
    }
}

pub type EvalFn<S> = Arc<dyn Fn(&Point<S>) -> S + Send + Sync>;
pub type SubdiffFn<S> = Arc<dyn Fn(&Point<S>) -> SetDescriptor<S> + Send + Sync>;

/// A real-valued function on the group, optionally with its analytic H-subdifferential.
///
/// The analytic part returns a [`SetDescriptor`]; a singleton is the horizontal gradient
/// `∇_H u = (Xu, Yu)`, a ball marks a point where the subdifferential is not a singleton.
#[derive(Clone)]
pub struct ScalarField<S> {
    evaluate: EvalFn<S>,
    subdiff: Option<SubdiffFn<S>>,
    singular_points: Vec<Point<S>>,
    smooth: bool,
    label: String,
}

impl<S: Scalar> fmt::Debug for ScalarField<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("label", &self.label)
            .field("smooth", &self.smooth)
            .field("analytic", &self.subdiff.is_some())
            .finish()
    }
}

impl<S: Scalar> ScalarField<S> {
    pub fn new(label: impl Into<String>, evaluate: impl Fn(&Point<S>) -> S + Send + Sync + 'static) -> Self {
        Self {
            evaluate: Arc::new(evaluate),
            subdiff: None,
            singular_points: Vec::new(),
            smooth: false,
            label: label.into(),
        }
    }

    /// Attaches a single-valued analytic horizontal gradient and marks the field Γ¹.
    pub fn with_hgrad(mut self, hgrad: impl Fn(&Point<S>) -> HVector<S> + Send + Sync + 'static) -> Self {
        self.subdiff = Some(Arc::new(move |g| SetDescriptor::Singleton(hgrad(g))));
        self.smooth = true;
        self
    }

    /// Attaches a possibly set-valued analytic subdifferential; `singular` lists where it is not a singleton.
    pub fn with_subdifferential(
        mut self,
        subdiff: impl Fn(&Point<S>) -> SetDescriptor<S> + Send + Sync + 'static,
        singular: Vec<Point<S>>,
    ) -> Self {
        self.subdiff = Some(Arc::new(subdiff));
        self.singular_points = singular;
        self
    }

    pub fn with_smooth(mut self, smooth: bool) -> Self {
        self.smooth = smooth;
        self
    }

    #[inline]
    pub fn evaluate(&self, g: &Point<S>) -> S {
        (self.evaluate)(g)
    }

    pub fn analytic_subdifferential(&self, g: &Point<S>) -> Option<SetDescriptor<S>> {
        self.subdiff.as_ref().map(|f| f(g))
    }

    pub fn has_analytic_gradient(&self) -> bool {
        self.subdiff.is_some()
    }

    /// Points at which the analytic subdifferential is set-valued.
    pub fn singular_points(&self) -> &[Point<S>] {
        &self.singular_points
    }

    pub fn is_smooth(&self) -> bool {
        self.smooth
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Pointwise sum; subdifferentials add as sets when both summands carry one.
    pub fn sum(terms: &[ScalarField<S>]) -> Self {
        let label = terms.iter().map(|f| f.label.as_str()).collect::<Vec<_>>().join(" + ");
        let evals: Vec<EvalFn<S>> = terms.iter().map(|f| f.evaluate.clone()).collect();
        let mut out = Self::new(label, move |g| evals.iter().fold(S::zero(), |acc, f| acc + f(g)));
        let subs: Option<Vec<SubdiffFn<S>>> = terms.iter().map(|f| f.subdiff.clone()).collect();
        if let Some(subs) = subs {
            let singular = terms.iter().flat_map(|f| f.singular_points.iter().copied()).collect();
            out = out.with_subdifferential(
                move |g| {
                    subs.iter()
                        .fold(SetDescriptor::Singleton(HVector::zero()), |acc, f| acc.plus(&f(g)))
                },
                singular,
            );
        }
        out.smooth = terms.iter().all(|f| f.smooth);
        out
    }

    /// `g ↦ u(g0 ∘ g)`; horizontal derivatives commute with left translation.
    pub fn left_translate(&self, g0: &Point<S>) -> Self {
        let g0 = *g0;
        let inv = g0.inverse();
        let eval = self.evaluate.clone();
        let mut out = Self::new(format!("{}∘L", self.label), move |g| eval(&g0.mul(g)));
        if let Some(sub) = self.subdiff.clone() {
            out.subdiff = Some(Arc::new(move |g| sub(&g0.mul(g))));
        }
        out.singular_points = self.singular_points.iter().map(|p| inv.mul(p)).collect();
        out.smooth = self.smooth;
        out
    }
}
