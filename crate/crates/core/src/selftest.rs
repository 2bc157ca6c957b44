//! Seeded property suites for the group layer.

use rand::Rng;
use serde::Serialize;

use crate::group::{HVector, Point};
use crate::plane::on_horizontal_plane;
use crate::sampling::{rng_from_seed, Region};
use crate::tolerance::ToleranceConfig;

/// Outcome of one property suite.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub samples: usize,
    pub passed: usize,
    /// Largest observed error, relative where the suite is relative.
    pub max_error: f64,
}

impl SuiteResult {
    pub fn ok(&self) -> bool {
        self.passed == self.samples
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SelfTestReport {
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
}

impl SelfTestReport {
    pub fn pass(&self) -> bool {
        self.suites.iter().all(SuiteResult::ok)
    }
}

/// Relative tolerance of the floating-point suites.
pub const SELFTEST_REL_TOL: f64 = 1e-12;

fn rel_err(a: &Point<f64>, b: &Point<f64>) -> f64 {
    let scale = 1.0 + a.max_abs().max(b.max_abs());
    (a.x - b.x).abs().max((a.y - b.y).abs()).max((a.t - b.t).abs()) / scale
}

/// Runs the six group-law suites on `samples` random draws each, coordinates in `[-10, 10]`.
pub fn group_selftest(samples: usize, seed: u64) -> SelfTestReport {
    let tol = ToleranceConfig::default().with_seed(seed);
    let mut rng = rng_from_seed(seed);
    let region = Region::cube(10.0);
    let mut suites = Vec::with_capacity(6);

    let mut suite = |name, check: &mut dyn FnMut(&mut crate::sampling::SampleRng) -> (bool, f64)| {
        let mut passed = 0;
        let mut max_error = 0.0f64;
        for _ in 0..samples {
            let (ok, err) = check(&mut rng);
            passed += ok as usize;
            max_error = max_error.max(err);
        }
        suites.push(SuiteResult {
            name,
            samples,
            passed,
            max_error,
        });
    };

    suite("associativity", &mut |rng| {
        let (a, b, c): (Point<f64>, Point<f64>, Point<f64>) = (
            region.sample_point(rng),
            region.sample_point(rng),
            region.sample_point(rng),
        );
        let err = rel_err(&a.mul(&b).mul(&c), &a.mul(&b.mul(&c)));
        (err <= SELFTEST_REL_TOL, err)
    });

    suite("identity_inverse", &mut |rng| {
        let g: Point<f64> = region.sample_point(rng);
        let e = Point::identity();
        let ok = e.mul(&g) == g
            && g.mul(&e) == g
            && g.mul(&g.inverse()) == e
            && g.inverse().mul(&g) == e
            && g.inverse().inverse() == g;
        (ok, if ok { 0.0 } else { 1.0 })
    });

    suite("plane_symmetry", &mut |rng| {
        let g: Point<f64> = region.sample_point(rng);
        let w = HVector::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let mut h = g.step(&w);
        if rng.gen_bool(0.5) {
            h.t += rng.gen_range(1e-3..1.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        }
        let ok = on_horizontal_plane(&g, &h, &tol) == on_horizontal_plane(&h, &g, &tol);
        (ok, if ok { 0.0 } else { 1.0 })
    });

    suite("left_invariance", &mut |rng| {
        let g0: Point<f64> = region.sample_point(rng);
        let g: Point<f64> = region.sample_point(rng);
        let w = HVector::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let mut h = g.step(&w);
        if rng.gen_bool(0.5) {
            h.t += rng.gen_range(1e-3..1.0);
        }
        let ok = on_horizontal_plane(&g, &h, &tol) == on_horizontal_plane(&g0.mul(&g), &g0.mul(&h), &tol);
        (ok, if ok { 0.0 } else { 1.0 })
    });

    suite("xi1_homomorphism", &mut |rng| {
        let a: Point<f64> = region.sample_point(rng);
        let b: Point<f64> = region.sample_point(rng);
        let ok = a.mul(&b).xi1() == a.xi1() + b.xi1();
        (ok, if ok { 0.0 } else { 1.0 })
    });

    let mut passed = 0;
    let mut max_error = 0.0f64;
    let scales = [0.1, 1.0, 10.0];
    for s in scales {
        let chain = commutator_chain(s);
        let expected = Point::new(0.0, 0.0, -4.0 * s * s);
        passed += (chain == expected) as usize;
        max_error = max_error.max(rel_err(&chain, &expected));
    }
    suites.push(SuiteResult {
        name: "commutator",
        samples: scales.len(),
        passed,
        max_error,
    });

    SelfTestReport { seed, suites }
}

/// `(s,0,0) ∘ (0,s,0) ∘ (−s,0,0) ∘ (0,−s,0)`, which equals `(0, 0, −4s²)`.
pub fn commutator_chain(s: f64) -> Point<f64> {
    let z = 0.0;
    Point::new(s, z, z)
        .mul(&Point::new(z, s, z))
        .mul(&Point::new(-s, z, z))
        .mul(&Point::new(z, -s, z))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass() {
        let report = group_selftest(2_000, 17);
        assert_eq!(report.suites.len(), 6);
        for s in &report.suites {
            assert!(s.ok(), "{s:?}");
        }
    }

    #[test]
    fn commutator_is_exact() {
        assert_eq!(commutator_chain(1.0), Point::new(0.0, 0.0, -4.0));
        assert_eq!(commutator_chain(10.0), Point::new(0.0, 0.0, -400.0));
    }
}
