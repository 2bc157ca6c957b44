use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{HVector, Point};
use crate::hconvex::{horizontal_gradient_fd, ScalarField, SetDescriptor};
use crate::scalar::Scalar;
use crate::tolerance::ToleranceConfig;

type OpFn<S> = Arc<dyn Fn(&Point<S>) -> SetDescriptor<S> + Send + Sync>;

/// An evaluable map `T: ℍ ⇉ V₁`.
///
/// Values are [`SetDescriptor`]s so that the one set-valued point in scope (the gauge
/// origin, and its translates) is represented exactly. `linear` records `Q` when
/// `T(x, y, t) = Q·(x, y)ᵀ`; `potential` records `u` when `T = ∂_H u`.
#[derive(Clone)]
pub struct OperatorField<S> {
    eval: OpFn<S>,
    label: String,
    linear: Option<[[S; 2]; 2]>,
    potential: Option<ScalarField<S>>,
    singular_points: Vec<Point<S>>,
}

impl<S: Scalar> fmt::Debug for OperatorField<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperatorField")
            .field("label", &self.label)
            .field("linear", &self.linear)
            .field("potential", &self.potential.as_ref().map(|p| p.label().to_string()))
            .finish()
    }
}

impl<S: Scalar> OperatorField<S> {
    /// A single-valued field.
    pub fn new(label: impl Into<String>, f: impl Fn(&Point<S>) -> HVector<S> + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(move |g| SetDescriptor::Singleton(f(g))),
            label: label.into(),
            linear: None,
            potential: None,
            singular_points: Vec::new(),
        }
    }

    /// `T(x, y, t) = Q·(x, y)ᵀ`, the lift of a planar linear map.
    pub fn linear(q: [[S; 2]; 2]) -> Self {
        let mut f = Self::new(
            format!("linear(Q=[[{}, {}], [{}, {}]])", q[0][0], q[0][1], q[1][0], q[1][1]),
            move |g| apply(&q, &g.xi1()),
        );
        f.linear = Some(q);
        f
    }

    /// `T = ∂_H u`, from the analytic subdifferential when `u` has one, otherwise
    /// from finite differences at `tol.fd_step`.
    pub fn hgrad_of(u: &ScalarField<S>, tol: &ToleranceConfig) -> Self {
        let eval: OpFn<S> = if u.has_analytic_gradient() {
            let u2 = u.clone();
            Arc::new(move |g| u2.analytic_subdifferential(g).expect("analytic subdifferential"))
        } else {
            let u2 = u.clone();
            let tol = *tol;
            Arc::new(move |g| {
                SetDescriptor::Singleton(
                    horizontal_gradient_fd(&u2, g, &tol).unwrap_or_else(|_| HVector::new(S::nan(), S::nan())),
                )
            })
        };
        Self {
            eval,
            label: format!("hgrad({})", u.label()),
            linear: None,
            potential: Some(u.clone()),
            singular_points: u.singular_points().to_vec(),
        }
    }

    #[inline]
    pub fn evaluate(&self, g: &Point<S>) -> SetDescriptor<S> {
        (self.eval)(g)
    }

    /// The value at `g`, failing where `T(g)` is not a singleton.
    pub fn evaluate_single(&self, g: &Point<S>) -> Result<HVector<S>> {
        self.evaluate(g).as_singleton().ok_or(Error::NotSingleton {
            x: g.x.to_f64_lossy(),
            y: g.y.to_f64_lossy(),
            t: g.t.to_f64_lossy(),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn linear_spec(&self) -> Option<[[S; 2]; 2]> {
        self.linear
    }

    pub fn potential(&self) -> Option<&ScalarField<S>> {
        self.potential.as_ref()
    }

    pub fn singular_points(&self) -> &[Point<S>] {
        &self.singular_points
    }
}

/// `Q·w`.
#[inline]
pub fn apply<S: Scalar>(q: &[[S; 2]; 2], w: &HVector<S>) -> HVector<S> {
    HVector::new(q[0][0] * w.w1 + q[0][1] * w.w2, q[1][0] * w.w1 + q[1][1] * w.w2)
}

/// `T₀(g) = T(g0 ∘ g)`; H-monotonicity is preserved under this translation.
pub fn left_translate_operator<S: Scalar>(field: &OperatorField<S>, g0: &Point<S>) -> OperatorField<S> {
    let g0 = *g0;
    let inner = field.eval.clone();
    let inv = g0.inverse();
    OperatorField {
        eval: Arc::new(move |g| inner(&g0.mul(g))),
        label: format!("translate({})", field.label),
        linear: None,
        potential: field.potential.as_ref().map(|u| u.left_translate(&g0)),
        singular_points: field.singular_points.iter().map(|p| inv.mul(p)).collect(),
    }
}
