use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{HVector, Point};
use crate::hconvex::ScalarField;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Serialize)]
pub struct RingMinimum {
    pub radius: f64,
    pub min_value: f64,
    pub argmin: [f64; 3],
}

#[derive(Debug, Clone, Serialize)]
pub struct CoercivityReport {
    /// `φ(g0) = u(g0) + ½|ξ₁(g0)|²`.
    pub base_value: f64,
    pub margin: f64,
    pub rings: Vec<RingMinimum>,
    /// The last two ring minima increase.
    pub eventually_increasing: bool,
    /// The outermost ring minimum exceeds `φ(g0) + margin`.
    pub exceeds_margin: bool,
    pub pass: bool,
}

/// Minimises `φ = u + ½|ξ₁|²` over rings `{g0 ∘ exp(R(cos θ, sin θ))}` of `H_{g0}`.
///
/// `angles` equally spaced directions per ring. Radii must be positive and increasing.
pub fn coercivity_probe<S: Scalar>(
    f: &ScalarField<S>,
    g0: &Point<S>,
    radii: &[f64],
    margin: f64,
    angles: usize,
) -> Result<CoercivityReport> {
    if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
        return Err(Error::InvalidArgument("radii must be positive and finite".into()));
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("radii must be increasing".into()));
    }
    if angles == 0 {
        return Err(Error::InvalidArgument("angles must be positive".into()));
    }
    let phi = |g: &Point<S>| f.evaluate(g) + g.xi1().norm_sqr() * S::lit(0.5);
    let base_value = phi(g0).to_f64_lossy();
    let rings: Vec<RingMinimum> = radii
        .iter()
        .map(|&r| {
            let mut best = (f64::INFINITY, [f64::NAN; 3]);
            for k in 0..angles {
                let th = std::f64::consts::TAU * k as f64 / angles as f64;
                let g = g0.step(&HVector::new(S::lit(r * th.cos()), S::lit(r * th.sin())));
                let val = phi(&g).to_f64_lossy();
                if val < best.0 || best.1[0].is_nan() {
                    best = (val, g.to_array());
                }
            }
            RingMinimum {
                radius: r,
                min_value: best.0,
                argmin: best.1,
            }
        })
        .collect();
    let eventually_increasing = match rings.len() {
        1 => true,
        n => rings[n - 1].min_value > rings[n - 2].min_value,
    };
    let exceeds_margin = rings.last().unwrap().min_value > base_value + margin;
    Ok(CoercivityReport {
        base_value,
        margin,
        pass: eventually_increasing && exceeds_margin,
        rings,
        eventually_increasing,
        exceeds_margin,
    })
}
