use crate::error::{Error, Result};
use crate::group::{HVector, Point};
use crate::hconvex::{ScalarField, SetDescriptor};
use crate::scalar::Scalar;
use crate::tolerance::ToleranceConfig;

fn step_at<S: Scalar>(g: &Point<S>, tol: &ToleranceConfig) -> S {
    tol.fd::<S>() * (S::one() + g.euclidean_norm())
}

fn finite<S: Scalar>(v: S) -> Result<S> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite {
            context: "field evaluation near g",
        })
    }
}

/// `∇_H f(g) = (Xf, Yf)(g)`.
///
/// Uses the analytic subdifferential when the field has one (and fails with
/// [`Error::NotSingleton`] where it is a ball), otherwise central differences along
/// the horizontal flows; see [`horizontal_gradient_fd`].
pub fn horizontal_gradient<S: Scalar>(f: &ScalarField<S>, g: &Point<S>, tol: &ToleranceConfig) -> Result<HVector<S>> {
    match f.analytic_subdifferential(g) {
        Some(SetDescriptor::Singleton(v)) => Ok(v),
        Some(SetDescriptor::Ball { .. }) => Err(Error::NotSingleton {
            x: g.x.to_f64_lossy(),
            y: g.y.to_f64_lossy(),
            t: g.t.to_f64_lossy(),
        }),
        None => horizontal_gradient_fd(f, g, tol),
    }
}

/// Central differences of `λ ↦ f(g ∘ exp(λe_i))` at `λ = 0`, step `fd_step·(1 + |g|)`.
///
/// Differencing along the flows of X and Y directly needs no estimate of `∂_t f`.
pub fn horizontal_gradient_fd<S: Scalar>(
    f: &ScalarField<S>,
    g: &Point<S>,
    tol: &ToleranceConfig,
) -> Result<HVector<S>> {
    let h = step_at(g, tol);
    let two_h = h + h;
    let e1 = HVector::new(S::one(), S::zero());
    let e2 = HVector::new(S::zero(), S::one());
    let d = |e: &HVector<S>| -> Result<S> {
        let plus = finite(f.evaluate(&g.horizontal_point(e, h)))?;
        let minus = finite(f.evaluate(&g.horizontal_point(e, -h)))?;
        Ok((plus - minus) / two_h)
    };
    Ok(HVector::new(d(&e1)?, d(&e2)?))
}

/// Right derivative `lim_{λ→0⁺} (f(g∘exp(λz)) − f(g))/λ`, Richardson-extrapolated from
/// forward quotients at steps `h` and `h/2`.
pub fn directional_derivative_h<S: Scalar>(
    f: &ScalarField<S>,
    g: &Point<S>,
    z: &HVector<S>,
    tol: &ToleranceConfig,
) -> Result<S> {
    if z.norm() == S::zero() {
        return Ok(S::zero());
    }
    let h = step_at(g, tol);
    let half = h * S::lit(0.5);
    let f0 = finite(f.evaluate(g))?;
    let q = |s: S| -> Result<S> { Ok((finite(f.evaluate(&g.horizontal_point(z, s)))? - f0) / s) };
    let (coarse, fine) = (q(h)?, q(half)?);
    Ok(fine + fine - coarse)
}
