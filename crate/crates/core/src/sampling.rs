//! Seeded sampling of points, horizontal offsets and closed H-sequences.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{HVector, Point};
use crate::plane::{on_horizontal_plane, plane_intersection_line, PlaneIntersection};
use crate::scalar::Scalar;
use crate::tolerance::ToleranceConfig;

/// Deterministic RNG used by every sampler.
pub type SampleRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Axis-aligned bounding box `[x0, x1] × [y0, y1] × [t0, t1]`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Region {
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub t: [f64; 2],
}

impl Default for Region {
    fn default() -> Self {
        Self::cube(2.0)
    }
}

impl Region {
    /// `[-h, h]³`.
    pub fn cube(h: f64) -> Self {
        Self {
            x: [-h, h],
            y: [-h, h],
            t: [-h, h],
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, [lo, hi]) in [("x", self.x), ("y", self.y), ("t", self.t)] {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::InvalidArgument(format!(
                    "region.{name} must be a finite interval with lo <= hi"
                )));
            }
        }
        Ok(())
    }

    /// Half of the larger horizontal side; a natural radius for horizontal offsets.
    pub fn horizontal_radius(&self) -> f64 {
        0.5 * (self.x[1] - self.x[0]).max(self.y[1] - self.y[0])
    }

    pub fn sample_point<S: Scalar, R: Rng + ?Sized>(&self, rng: &mut R) -> Point<S> {
        Point::new(
            S::lit(uniform(rng, self.x)),
            S::lit(uniform(rng, self.y)),
            S::lit(uniform(rng, self.t)),
        )
    }

    fn sample_xi<S: Scalar, R: Rng + ?Sized>(&self, rng: &mut R) -> HVector<S> {
        HVector::new(S::lit(uniform(rng, self.x)), S::lit(uniform(rng, self.y)))
    }
}

fn uniform<R: Rng + ?Sized>(rng: &mut R, [lo, hi]: [f64; 2]) -> f64 {
    if hi > lo {
        rng.gen_range(lo..=hi)
    } else {
        lo
    }
}

/// Uniform sample from the closed disk of radius `r` in V₁.
pub fn sample_disk<S: Scalar, R: Rng + ?Sized>(rng: &mut R, r: f64) -> HVector<S> {
    let rho = r * rng.gen::<f64>().sqrt();
    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
    HVector::new(S::lit(rho * theta.cos()), S::lit(rho * theta.sin()))
}

/// Random direction with a log-uniform length in `[r_min, r_max]`; covers small offsets densely.
pub fn sample_log_radius<S: Scalar, R: Rng + ?Sized>(rng: &mut R, r_min: f64, r_max: f64) -> HVector<S> {
    let (lo, hi) = (r_min.ln(), r_max.max(r_min).ln());
    let rho = if hi > lo { rng.gen_range(lo..=hi).exp() } else { r_min };
    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
    HVector::new(S::lit(rho * theta.cos()), S::lit(rho * theta.sin()))
}

const MAX_CLOSING_ATTEMPTS: usize = 100;

/// Samples a closed H-sequence `g0, …, gn`: `g_{i+1} ∈ H_{g_i}` and `g_n ∈ H_{g0}`.
///
/// `g0` is drawn from the region; every further point except the last moves
/// horizontally to a uniformly drawn first-layer position inside the region. The
/// last point is drawn from the line `H_{g_{n−1}} ∩ H_{g0}`, so its `t` (and, for
/// short lines, its first-layer position) may leave the box. Parallel closing
/// planes trigger a fresh draw of the whole sequence.
pub fn sample_closed_hsequence<S: Scalar, R: Rng + ?Sized>(
    n: usize,
    region: &Region,
    rng: &mut R,
    tol: &ToleranceConfig,
) -> Result<Vec<Point<S>>> {
    if n == 0 {
        return Err(Error::InvalidArgument("closed H-sequence needs n >= 1".into()));
    }
    region.validate()?;
    for _ in 0..MAX_CLOSING_ATTEMPTS {
        let g0: Point<S> = region.sample_point(rng);
        let mut seq = vec![g0];
        let open_steps = if n == 1 { 1 } else { n - 1 };
        for _ in 0..open_steps {
            let prev = *seq.last().unwrap();
            let target = region.sample_xi::<S, _>(rng);
            seq.push(prev.step(&(target - prev.xi1())));
        }
        if n == 1 {
            return Ok(seq);
        }
        let last = *seq.last().unwrap();
        let closing = match close_hsequence_on_line(&last, &g0, rng) {
            Some(p) => p,
            None => continue,
        };
        seq.push(closing);
        if is_closed_hsequence(&seq, tol) {
            return Ok(seq);
        }
    }
    Err(Error::RegionTooThin {
        attempts: MAX_CLOSING_ATTEMPTS,
    })
}

fn close_hsequence_on_line<S: Scalar, R: Rng + ?Sized>(
    last: &Point<S>,
    first: &Point<S>,
    rng: &mut R,
) -> Option<Point<S>> {
    let d = first.xi1() - last.xi1();
    let scale = S::one() + first.xi1().norm() + last.xi1().norm();
    match plane_intersection_line(last, first) {
        PlaneIntersection::Coincident => {
            // Every point of the common plane closes the sequence; stay put.
            Some(*last)
        }
        PlaneIntersection::Parallel => None,
        PlaneIntersection::Line { .. } if d.norm() <= S::lit(1e-9) * scale => None,
        line @ PlaneIntersection::Line { .. } => line.point_at(S::lit(rng.gen_range(-1.0..=1.0))),
    }
}

/// Checks consecutive plane membership and the closing condition `g_n ∈ H_{g0}`.
pub fn is_closed_hsequence<S: Scalar>(seq: &[Point<S>], tol: &ToleranceConfig) -> bool {
    if seq.len() < 2 {
        return false;
    }
    seq.windows(2).all(|w| on_horizontal_plane(&w[0], &w[1], tol))
        && on_horizontal_plane(&seq[0], seq.last().unwrap(), tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_one_is_a_single_horizontal_step() {
        let tol = ToleranceConfig::default();
        let mut rng = rng_from_seed(7);
        let seq = sample_closed_hsequence::<f64, _>(1, &Region::default(), &mut rng, &tol).unwrap();
        assert_eq!(seq.len(), 2);
        assert!(is_closed_hsequence(&seq, &tol));
    }

    #[test]
    fn n_two_from_identity_closes_on_the_x_axis() {
        let e = Point::<f64>::identity();
        let g1 = Point::new(1.0, 0.0, 0.0);
        let mut rng = rng_from_seed(1);
        let g2 = close_hsequence_on_line(&g1, &e, &mut rng).unwrap();
        assert_eq!(g2.y, 0.0);
        assert_eq!(g2.t, 0.0);
        let tol = ToleranceConfig::default();
        assert!(is_closed_hsequence(&[e, g1, Point::new(2.0, 0.0, 0.0)], &tol));
        assert!(is_closed_hsequence(&[e, g1, g2], &tol));
    }

    #[test]
    fn sampled_sequences_are_closed() {
        let tol = ToleranceConfig::default();
        let mut rng = rng_from_seed(99);
        for n in 1..=8 {
            for _ in 0..25 {
                let seq = sample_closed_hsequence::<f64, _>(n, &Region::cube(5.0), &mut rng, &tol).unwrap();
                assert_eq!(seq.len(), n + 1);
                assert!(is_closed_hsequence(&seq, &tol), "n = {n}: {seq:?}");
            }
        }
    }

    #[test]
    fn degenerate_region_still_closes() {
        let tol = ToleranceConfig::default();
        let region = Region {
            x: [1.0, 1.0],
            y: [2.0, 2.0],
            t: [0.0, 0.0],
        };
        let mut rng = rng_from_seed(3);
        let seq = sample_closed_hsequence::<f64, _>(4, &region, &mut rng, &tol).unwrap();
        assert!(is_closed_hsequence(&seq, &tol));
    }

    #[test]
    fn rejects_n_zero_and_bad_regions() {
        let tol = ToleranceConfig::default();
        let mut rng = rng_from_seed(3);
        assert!(sample_closed_hsequence::<f64, _>(0, &Region::default(), &mut rng, &tol).is_err());
        let bad = Region {
            x: [1.0, 0.0],
            ..Region::default()
        };
        assert!(sample_closed_hsequence::<f64, _>(2, &bad, &mut rng, &tol).is_err());
    }

    #[test]
    fn same_seed_same_sequence() {
        let tol = ToleranceConfig::default();
        let a = sample_closed_hsequence::<f64, _>(5, &Region::default(), &mut rng_from_seed(11), &tol).unwrap();
        let b = sample_closed_hsequence::<f64, _>(5, &Region::default(), &mut rng_from_seed(11), &tol).unwrap();
        assert_eq!(a, b);
    }
}
