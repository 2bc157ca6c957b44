//! Sampling refuters for H-convexity and H-subgradient membership.
//!
//! Both properties are universally quantified, so a scan can only refute them.
//! A passing report means no counterexample was found in the sampled budget.

use rand::Rng;
use serde::Serialize;

use crate::group::{HVector, Point};
use crate::hconvex::ScalarField;
use crate::sampling::{rng_from_seed, sample_disk, sample_log_radius, Region};
use crate::scalar::Scalar;
use crate::tolerance::ToleranceConfig;

/// Witnesses retained per report; the violation count is always complete.
const MAX_WITNESSES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanSemantics {
    /// Pass means no sampled counterexample; it is not a proof.
    Refutation,
    /// Pass is a necessary condition only (sampled `w` cannot cover all of V₁).
    NecessaryCondition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    Violation,
    Undefined,
}

/// One sampled counterexample.
///
/// For convexity scans `g` is the segment start, `direction` is `v` and `lambda` the
/// interior parameter; for membership scans `direction` is the offset `w` and `lambda = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanWitness {
    pub kind: WitnessKind,
    pub g: [f64; 3],
    pub direction: [f64; 2],
    pub lambda: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub pass: bool,
    pub semantics: ScanSemantics,
    pub samples: usize,
    pub violations: usize,
    pub min_slack: f64,
    pub witnesses: Vec<ScanWitness>,
}

impl ScanReport {
    fn new(semantics: ScanSemantics) -> Self {
        Self {
            pass: true,
            semantics,
            samples: 0,
            violations: 0,
            min_slack: f64::INFINITY,
            witnesses: Vec::new(),
        }
    }

    fn record(&mut self, w: Option<ScanWitness>, slack: f64) {
        self.samples += 1;
        if slack.is_finite() {
            self.min_slack = self.min_slack.min(slack);
        }
        if let Some(w) = w {
            self.pass = false;
            self.violations += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w);
            }
        }
    }
}

/// Sampling budget and domain for a scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub samples: usize,
    pub region: Region,
    /// Radius of the V₁ ball from which directions/offsets are drawn.
    pub ball_radius: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            samples: 10_000,
            region: Region::default(),
            ball_radius: 2.0,
        }
    }
}

/// Scans `u(g∘exp(λv)) ≤ u(g) + λ(u(g∘exp v) − u(g))` over random `(g, v, λ)`.
///
/// A sample is a violation when the slack falls below `−conv_tol·(1 + |u(g)|)`;
/// non-finite evaluations are recorded as `undefined` witnesses.
pub fn hconvexity_scan<S: Scalar>(f: &ScalarField<S>, config: &ScanConfig, tol: &ToleranceConfig) -> ScanReport {
    let mut rng = rng_from_seed(tol.seed);
    let mut report = ScanReport::new(ScanSemantics::Refutation);
    let conv = tol.conv::<S>();
    for _ in 0..config.samples.max(1) {
        let g: Point<S> = config.region.sample_point(&mut rng);
        let v: HVector<S> = sample_disk(&mut rng, config.ball_radius);
        let lambda = S::lit(rng.gen_range(0.0..=1.0));
        let u0 = f.evaluate(&g);
        let u1 = f.evaluate(&g.step(&v));
        let ul = f.evaluate(&g.horizontal_point(&v, lambda));
        let slack = u0 + lambda * (u1 - u0) - ul;
        let witness = |kind| ScanWitness {
            kind,
            g: g.to_array(),
            direction: v.to_array(),
            lambda: lambda.to_f64_lossy(),
            slack: slack.to_f64_lossy(),
        };
        let w = if !(u0.is_finite() && u1.is_finite() && ul.is_finite()) {
            Some(witness(WitnessKind::Undefined))
        } else if slack < -conv * (S::one() + u0.abs()) {
            Some(witness(WitnessKind::Violation))
        } else {
            None
        };
        report.record(w, slack.to_f64_lossy());
    }
    report
}

/// Scans `u(g∘exp w) ≥ u(g) + ⟨v, w⟩` over sampled offsets `w`.
///
/// Half of the offsets are uniform in the ball of radius `ball_radius`, half have
/// log-uniform length down to `1e-6·ball_radius` so that small-scale violations
/// near `g` are probed too.
pub fn subgradient_membership<S: Scalar>(
    f: &ScalarField<S>,
    g: &Point<S>,
    v: &HVector<S>,
    samples: usize,
    ball_radius: f64,
    tol: &ToleranceConfig,
) -> ScanReport {
    let mut rng = rng_from_seed(tol.seed);
    let mut report = ScanReport::new(ScanSemantics::NecessaryCondition);
    let conv = tol.conv::<S>();
    let u0 = f.evaluate(g);
    for i in 0..samples.max(1) {
        let w: HVector<S> = if i % 2 == 0 {
            sample_disk(&mut rng, ball_radius)
        } else {
            sample_log_radius(&mut rng, 1e-6 * ball_radius, ball_radius)
        };
        let uw = f.evaluate(&g.step(&w));
        let slack = uw - u0 - v.dot(&w);
        let witness = |kind| ScanWitness {
            kind,
            g: g.to_array(),
            direction: w.to_array(),
            lambda: 1.0,
            slack: slack.to_f64_lossy(),
        };
        let wit = if !(u0.is_finite() && uw.is_finite()) {
            Some(witness(WitnessKind::Undefined))
        } else if slack < -conv * (S::one() + u0.abs()) {
            Some(witness(WitnessKind::Violation))
        } else {
            None
        };
        report.record(wit, slack.to_f64_lossy());
    }
    report
}
