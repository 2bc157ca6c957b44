//! Group law of the first Heisenberg group and its first-layer vectors.
//!
//! Points are `(x, y, t)` with product
//! `(x, y, t) ∘ (x', y', t') = (x + x', y + y', t + t' + 2(x'y − xy'))`,
//! identity `e = (0, 0, 0)` and inverse `(−x, −y, −t)`. First-layer vectors
//! `w = (w1, w2)` are identified with the points `(w1, w2, 0)` through the
//! exponential map, so horizontal segments are `λ ↦ g ∘ exp(λw)`.

use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A group element `(x, y, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point<S> {
    pub x: S,
    pub y: S,
    pub t: S,
}

/// A first-layer vector `w1·X + w2·Y`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HVector<S> {
    pub w1: S,
    pub w2: S,
}

impl<S: Scalar> Point<S> {
    #[inline]
    pub const fn new(x: S, y: S, t: S) -> Self {
        Self { x, y, t }
    }

    /// Builds a point, rejecting NaN and infinities.
    pub fn try_new(x: S, y: S, t: S) -> Result<Self> {
        let p = Self { x, y, t };
        if p.is_finite() {
            Ok(p)
        } else {
            Err(Error::NonFinite { context: "point" })
        }
    }

    #[inline]
    pub fn identity() -> Self {
        Self::new(S::zero(), S::zero(), S::zero())
    }

    #[inline]
    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.t.is_finite()
    }

    /// Group product `self ∘ rhs`.
    #[inline]
    pub fn mul(&self, rhs: &Self) -> Self {
        let two = S::lit(2.0);
        Self::new(
            self.x + rhs.x,
            self.y + rhs.y,
            self.t + rhs.t + two * (rhs.x * self.y - self.x * rhs.y),
        )
    }

    #[inline]
    pub fn inverse(&self) -> Self {
        Self::new(-self.x, -self.y, -self.t)
    }

    /// Anisotropic dilation `δ_λ(x, y, t) = (λx, λy, λ²t)`.
    #[inline]
    pub fn dilate(&self, lambda: S) -> Self {
        Self::new(lambda * self.x, lambda * self.y, lambda * lambda * self.t)
    }

    /// First-layer coordinates `ξ₁(g) = (x, y)`.
    #[inline]
    pub fn xi1(&self) -> HVector<S> {
        HVector::new(self.x, self.y)
    }

    /// Splits `g` into `(ξ₁(g), ξ₂(g)) = ((x, y), t)`.
    #[inline]
    pub fn xi_decompose(&self) -> (HVector<S>, S) {
        (self.xi1(), self.t)
    }

    /// `g ∘ exp(λw)`, the point at parameter `λ` on the horizontal segment from `g` along `w`.
    #[inline]
    pub fn horizontal_point(&self, w: &HVector<S>, lambda: S) -> Self {
        self.mul(&exp_h(&w.scale(lambda)))
    }

    /// `g ∘ exp(w)`.
    #[inline]
    pub fn step(&self, w: &HVector<S>) -> Self {
        self.mul(&exp_h(w))
    }

    /// Euclidean norm of `(x, y, t)` as a point of ℝ³.
    #[inline]
    pub fn euclidean_norm(&self) -> S {
        self.x.hypot(self.y).hypot(self.t)
    }

    pub fn max_abs(&self) -> S {
        self.x.abs().max(self.y.abs()).max(self.t.abs())
    }

    pub fn cast<T: Scalar>(&self) -> Point<T> {
        Point::new(
            T::lit(self.x.to_f64_lossy()),
            T::lit(self.y.to_f64_lossy()),
            T::lit(self.t.to_f64_lossy()),
        )
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.x.to_f64_lossy(), self.y.to_f64_lossy(), self.t.to_f64_lossy()]
    }
}

impl<S: Scalar> std::ops::Mul for Point<S> {
    type Output = Point<S>;

    #[inline]
    fn mul(self, rhs: Self) -> Self::Output {
        Point::mul(&self, &rhs)
    }
}

impl<S: Scalar> HVector<S> {
    #[inline]
    pub const fn new(w1: S, w2: S) -> Self {
        Self { w1, w2 }
    }

    pub fn try_new(w1: S, w2: S) -> Result<Self> {
        let v = Self { w1, w2 };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite {
                context: "horizontal vector",
            })
        }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(S::zero(), S::zero())
    }

    #[inline]
    pub fn is_finite(&self) -> bool {
        self.w1.is_finite() && self.w2.is_finite()
    }

    #[inline]
    pub fn dot(&self, other: &Self) -> S {
        self.w1 * other.w1 + self.w2 * other.w2
    }

    #[inline]
    pub fn norm(&self) -> S {
        self.w1.hypot(self.w2)
    }

    #[inline]
    pub fn norm_sqr(&self) -> S {
        self.w1 * self.w1 + self.w2 * self.w2
    }

    #[inline]
    pub fn scale(&self, k: S) -> Self {
        Self::new(k * self.w1, k * self.w2)
    }

    pub fn cast<T: Scalar>(&self) -> HVector<T> {
        HVector::new(T::lit(self.w1.to_f64_lossy()), T::lit(self.w2.to_f64_lossy()))
    }

    pub fn to_array(&self) -> [f64; 2] {
        [self.w1.to_f64_lossy(), self.w2.to_f64_lossy()]
    }
}

impl<S: Scalar> Add for HVector<S> {
    type Output = Self;

    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(self.w1 + rhs.w1, self.w2 + rhs.w2)
    }
}

impl<S: Scalar> Sub for HVector<S> {
    type Output = Self;

    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.w1 - rhs.w1, self.w2 - rhs.w2)
    }
}

impl<S: Scalar> Neg for HVector<S> {
    type Output = Self;

    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.w1, -self.w2)
    }
}

/// Exponential of a first-layer vector: `exp(w1·X + w2·Y) = (w1, w2, 0)`.
#[inline]
pub fn exp_h<S: Scalar>(w: &HVector<S>) -> Point<S> {
    Point::new(w.w1, w.w2, S::zero())
}

#[inline]
pub fn group_mul<S: Scalar>(a: &Point<S>, b: &Point<S>) -> Point<S> {
    a.mul(b)
}

#[inline]
pub fn group_inverse<S: Scalar>(g: &Point<S>) -> Point<S> {
    g.inverse()
}

#[inline]
pub fn dilate<S: Scalar>(lambda: S, g: &Point<S>) -> Point<S> {
    g.dilate(lambda)
}

#[inline]
pub fn xi_decompose<S: Scalar>(g: &Point<S>) -> (HVector<S>, S) {
    g.xi_decompose()
}

#[inline]
pub fn horizontal_point<S: Scalar>(g: &Point<S>, w: &HVector<S>, lambda: S) -> Point<S> {
    g.horizontal_point(w, lambda)
}
