//! Criteria for lifted linear maps `T(x, y, t) = Q·(x, y)ᵀ`.

use serde::Serialize;

use crate::hconvex::{sym_min_eigenvalue, QuadraticSpec};
use crate::scalar::Scalar;

/// Classification of the planar map `w ↦ Q·w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LinearCriterion {
    /// `½(Q + Qᵀ)` is positive semidefinite.
    pub euclidean_monotone: bool,
    /// `Q` is symmetric and positive semidefinite.
    pub euclidean_cyclic: bool,
}

pub fn sym<S: Scalar>(q: &[[S; 2]; 2]) -> [[S; 2]; 2] {
    let half = S::lit(0.5);
    let off = (q[0][1] + q[1][0]) * half;
    [[q[0][0], off], [off, q[1][1]]]
}

pub fn linear_monotone_criterion<S: Scalar>(q: &[[S; 2]; 2]) -> LinearCriterion {
    let psd = sym_min_eigenvalue(&sym(q)) >= S::zero();
    LinearCriterion {
        euclidean_monotone: psd,
        euclidean_cyclic: psd && q[0][1] == q[1][0],
    }
}

/// The quadratic `u = ½ξ₁ᵀAξ₁ + c·t` with `∇_H u = Q·ξ₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadraticPotential<S> {
    /// `A` is positive semidefinite, so `u` is H-convex.
    Convex(QuadraticSpec<S>),
    /// The potential exists but `A` has a negative eigenvalue.
    NoConvexPotential(QuadraticSpec<S>),
}

impl<S: Scalar> QuadraticPotential<S> {
    pub fn spec(&self) -> QuadraticSpec<S> {
        match self {
            QuadraticPotential::Convex(s) | QuadraticPotential::NoConvexPotential(s) => *s,
        }
    }

    pub fn is_convex(&self) -> bool {
        matches!(self, QuadraticPotential::Convex(_))
    }
}

/// `A = sym(Q)`, `c = (Q₁₂ − Q₂₁)/4`.
///
/// With `u = ½ξ₁ᵀAξ₁ + ct`, `Xu = (Aξ₁)₁ + 2cy` and `Yu = (Aξ₁)₂ − 2cx`, which
/// matches `Qξ₁` exactly when the antisymmetric part of `Q` is `2c·J`.
pub fn quadratic_potential<S: Scalar>(q: &[[S; 2]; 2]) -> QuadraticPotential<S> {
    let a = sym(q);
    let c = (q[0][1] - q[1][0]) * S::lit(0.25);
    let spec = QuadraticSpec::new(a, c).expect("sym(Q) is symmetric");
    if sym_min_eigenvalue(&a) >= S::zero() {
        QuadraticPotential::Convex(spec)
    } else {
        QuadraticPotential::NoConvexPotential(spec)
    }
}
