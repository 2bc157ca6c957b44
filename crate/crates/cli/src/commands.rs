//! Dispatch from a resolved [`Scenario`] to the library operations.

use heisconvex_core::hconvex::{build_gauge, gauge_ex2_identity_residual, gauge_value, hconvexity_scan, ScanConfig};
use heisconvex_core::monotone::{
    apply, hcyclic_check, hcyclic_check_sampled, hmonotone_check_field, hmonotone_check_graph,
    linear_monotone_criterion, quadratic_potential, CyclicCertificate, CyclicReport, MonotoneReport, Operator,
    OperatorField, OperatorSpec,
};
use heisconvex_core::sampling::rng_from_seed;
use heisconvex_core::selftest::group_selftest;
use heisconvex_core::solvers::{
    gauge_collision_radius, identity_collision_family_scan, resolvent_collision_scan, summarize, surjectivity_sweep,
    CollisionReport, ResolveStatus, RockafellarOutcome, RockafellarTable, SweepRow,
};
use heisconvex_core::{HVector, Point, ScalarField, ToleranceConfig};
use serde_json::{json, Value};

use crate::report::{Cell, Report, Status, Table};
use crate::scenario::{
    CliError, CollisionParams, CyclicParams, Example1Params, Example2Params, Params, ResolveParams, RockafellarParams,
    Scenario, SelftestParams, Spec, SweepParams,
};

type Outcome = (Status, Value, Table);

fn invalid(e: heisconvex_core::Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn point(p: &[f64; 3]) -> Result<Point<f64>, CliError> {
    Point::try_new(p[0], p[1], p[2]).map_err(invalid)
}

/// Runs the scenario; numerical failures become report rows, never errors.
pub fn execute(scenario: Scenario) -> Result<Report, CliError> {
    let tol = scenario.tolerances;
    let (status, summary, table) = match (&scenario.params, &scenario.spec) {
        (Params::Scan(p), Some(Spec::Field(f))) => check_hconvex(&f.build().map_err(invalid)?, p, &tol),
        (Params::Scan(p), Some(Spec::Operator(op))) => check_monotone(op, p, &tol)?,
        (Params::Cyclic(p), Some(Spec::Operator(op))) => check_cyclic(op, p, &tol)?,
        (Params::Rockafellar(p), Some(Spec::Operator(op))) => rockafellar(op, p, &tol)?,
        (Params::Resolve(p), Some(Spec::Operator(op))) => resolve(op, p, &tol)?,
        (Params::Sweep(p), Some(Spec::Operator(op))) => sweep(op, p, &tol)?,
        (Params::Collisions(p), Some(Spec::Field(f))) => collisions(&f.build().map_err(invalid)?, p, &tol)?,
        (Params::Example1(p), None) => example1(p, &tol)?,
        (Params::Example2(p), None) => example2(p, &tol)?,
        (Params::Selftest(p), None) => selftest(p, &tol),
        _ => {
            return Err(CliError::Usage(format!(
                "spec does not fit `{}`",
                scenario.command.name()
            )))
        }
    };
    Ok(Report {
        scenario,
        status,
        summary,
        table,
    })
}

fn check_hconvex(f: &ScalarField<f64>, p: &ScanConfig, tol: &ToleranceConfig) -> Outcome {
    let r = hconvexity_scan(f, p, tol);
    let mut table = Table::new(&["kind", "g_x", "g_y", "g_t", "dir_1", "dir_2", "lambda", "slack"]);
    for w in &r.witnesses {
        let kind = serde_json::to_value(w.kind).unwrap().as_str().unwrap().to_string();
        table.push(vec![
            kind.into(),
            w.g[0].into(),
            w.g[1].into(),
            w.g[2].into(),
            w.direction[0].into(),
            w.direction[1].into(),
            w.lambda.into(),
            w.slack.into(),
        ]);
    }
    let summary = json!({
        "field": f.label(),
        "pass": r.pass,
        "semantics": r.semantics,
        "samples": r.samples,
        "violations": r.violations,
        "min_slack": r.min_slack,
    });
    (Status::from_pass(r.pass), summary, table)
}

fn monotone_table(r: &MonotoneReport) -> Table {
    let mut table = Table::new(&[
        "g_x", "g_y", "g_t", "v_1", "v_2", "gp_x", "gp_y", "gp_t", "vp_1", "vp_2", "slack",
    ]);
    for w in &r.witnesses {
        let mut row: Vec<Cell> =
            w.g.iter()
                .chain(&w.v)
                .chain(&w.g_prime)
                .chain(&w.v_prime)
                .map(|&x| x.into())
                .collect();
        row.push(w.slack.into());
        table.push(row);
    }
    table
}

fn check_monotone(op: &OperatorSpec, p: &ScanConfig, tol: &ToleranceConfig) -> Result<Outcome, CliError> {
    let r = match op.build::<f64>(tol).map_err(invalid)? {
        Operator::Field(f) => hmonotone_check_field(&f, p, tol),
        Operator::Graph(g) => hmonotone_check_graph(&g, tol),
    };
    let summary = json!({
        "pass": r.pass,
        "vacuous": r.vacuous,
        "admissible_pairs": r.admissible_pairs,
        "violations": r.violations,
        "min_slack": r.min_slack,
    });
    Ok((Status::from_pass(r.pass), summary, monotone_table(&r)))
}

fn certificate_table(r: &CyclicReport) -> Table {
    match &r.certificate {
        CyclicCertificate::Potentials { values } => {
            let mut table = Table::new(&["node", "potential"]);
            for (i, v) in values.iter().enumerate() {
                table.push(vec![i.into(), (*v).into()]);
            }
            table
        }
        CyclicCertificate::PositiveCycle {
            nodes, points, values, ..
        } => {
            let mut table = Table::new(&["position", "node", "g_x", "g_y", "g_t", "v_1", "v_2"]);
            for (k, ((n, g), v)) in nodes.iter().zip(points).zip(values).enumerate() {
                table.push(vec![
                    k.into(),
                    (*n).into(),
                    g[0].into(),
                    g[1].into(),
                    g[2].into(),
                    v[0].into(),
                    v[1].into(),
                ]);
            }
            table
        }
    }
}

fn check_cyclic(op: &OperatorSpec, p: &CyclicParams, tol: &ToleranceConfig) -> Result<Outcome, CliError> {
    match op.build::<f64>(tol).map_err(invalid)? {
        Operator::Graph(g) => {
            let r = hcyclic_check(&g, tol);
            let weight = match &r.certificate {
                CyclicCertificate::PositiveCycle { weight, .. } => Some(*weight),
                CyclicCertificate::Potentials { .. } => None,
            };
            let summary = json!({ "pass": r.pass, "nodes": r.nodes, "edges": r.edges, "cycle_weight": weight });
            Ok((Status::from_pass(r.pass), summary, certificate_table(&r)))
        }
        Operator::Field(f) => {
            let r = hcyclic_check_sampled(&f, p.sequences, p.max_len, &p.region, tol).map_err(invalid)?;
            let table = r
                .first_failure
                .as_ref()
                .map(certificate_table)
                .unwrap_or_else(|| Table::new(&["node", "potential"]));
            let summary = json!({
                "pass": r.pass,
                "sequences": r.sequences,
                "failures": r.failures,
                "max_sequence_violation": r.max_sequence_violation,
            });
            Ok((Status::from_pass(r.pass), summary, table))
        }
    }
}

fn rockafellar(op: &OperatorSpec, p: &RockafellarParams, tol: &ToleranceConfig) -> Result<Outcome, CliError> {
    let Operator::Graph(graph) = op.build::<f64>(tol).map_err(invalid)? else {
        return Err(CliError::Usage("rockafellar needs a `graph` operator".into()));
    };
    let base = match &p.base {
        Some(b) => point(b)?,
        None => graph.pairs()[0].0,
    };
    let targets = match &p.targets {
        Some(ts) => ts.iter().map(point).collect::<Result<Vec<_>, _>>()?,
        None => graph.pairs().iter().map(|(g, _)| *g).collect(),
    };
    let max_hops = p.max_hops.unwrap_or(graph.len());
    let table_dp = RockafellarTable::build(&graph, &base, p.base_value, max_hops, tol).map_err(invalid)?;
    let mut table = Table::new(&["target_x", "target_y", "target_t", "outcome", "value", "hops"]);
    let mut unbounded = None;
    for t in &targets {
        let out = table_dp.evaluate(t, p.closed, tol);
        let (kind, value, hops) = match &out {
            RockafellarOutcome::Value { value, hops } => ("value", *value, *hops),
            RockafellarOutcome::Unreachable => ("unreachable", f64::NEG_INFINITY, 0),
            RockafellarOutcome::UnboundedAbove { .. } => ("unbounded_above", f64::INFINITY, 0),
        };
        if let RockafellarOutcome::UnboundedAbove { cycle, weight } = &out {
            unbounded.get_or_insert_with(|| json!({ "cycle": cycle, "weight": weight }));
        }
        table.push(vec![
            t.x.into(),
            t.y.into(),
            t.t.into(),
            kind.into(),
            value.into(),
            hops.into(),
        ]);
    }
    let summary = json!({
        "base": base.to_array(),
        "max_hops": max_hops,
        "closed": p.closed,
        "targets": targets.len(),
        "positive_cycle": unbounded,
    });
    Ok((Status::from_pass(unbounded.is_none()), summary, table))
}

const SWEEP_COLUMNS: [&str; 12] = [
    "base_x", "base_y", "base_t", "lambda", "v1", "v2", "sol_x", "sol_y", "sol_t", "residual", "iters", "status",
];

fn sweep_table(rows: &[SweepRow]) -> Table {
    let mut table = Table::new(&SWEEP_COLUMNS);
    for r in rows {
        let mut row: Vec<Cell> = r.base.iter().map(|&x| x.into()).collect();
        row.push(r.lambda.into());
        row.extend(r.v.iter().map(|&x| x.into()));
        row.extend(r.sol.iter().map(|&x| x.into()));
        row.push(r.residual.into());
        row.push(r.iters.into());
        row.push(r.status.as_str().into());
        table.push(row);
    }
    table
}

fn run_sweep(
    op: &OperatorSpec,
    bases: &[[f64; 3]],
    lambdas: &[f64],
    targets: &[[f64; 2]],
    threshold: f64,
    tol: &ToleranceConfig,
) -> Result<Outcome, CliError> {
    let field = op.build_field::<f64>(tol).map_err(invalid)?;
    let rows = surjectivity_sweep(&field, bases, lambdas, targets, tol).map_err(invalid)?;
    let s = summarize(&rows, threshold);
    let status = if s.failures == 0 {
        Status::Pass
    } else {
        Status::NonConvergence
    };
    let summary = json!({
        "rows": s.rows,
        "failures": s.failures,
        "max_residual": s.max_residual,
        "threshold": threshold,
        "singular": rows.iter().filter(|r| r.status == ResolveStatus::SingularPoint).count(),
    });
    Ok((status, summary, sweep_table(&rows)))
}

fn resolve(op: &OperatorSpec, p: &ResolveParams, tol: &ToleranceConfig) -> Result<Outcome, CliError> {
    run_sweep(op, &[p.base], &[p.lambda], &[p.target], p.threshold, tol)
}

fn sweep(op: &OperatorSpec, p: &SweepParams, tol: &ToleranceConfig) -> Result<Outcome, CliError> {
    run_sweep(op, &p.bases, &p.lambdas, &p.targets, p.threshold, tol)
}

const COLLISION_COLUMNS: [&str; 16] = [
    "source",
    "plane_x",
    "plane_y",
    "plane_t",
    "lambda",
    "g_x",
    "g_y",
    "g_t",
    "gp_x",
    "gp_y",
    "gp_t",
    "common_1",
    "common_2",
    "common_norm",
    "image_excess",
    "distance",
];

fn push_collision(table: &mut Table, source: &str, c: &CollisionReport) {
    let mut row: Vec<Cell> = vec![source.into()];
    row.extend(c.plane_base.iter().map(|&x| x.into()));
    row.push(c.lambda.into());
    row.extend(c.g.iter().chain(&c.g_prime).chain(&c.common_value).map(|&x| x.into()));
    row.push(c.common_value_norm.into());
    row.push((c.common_value_norm - c.lambda).into());
    row.push(c.distance.into());
    table.push(row);
}

fn collisions(f: &ScalarField<f64>, p: &CollisionParams, tol: &ToleranceConfig) -> Result<Outcome, CliError> {
    let base = point(&p.plane_base)?;
    let mut table = Table::new(&COLLISION_COLUMNS);
    let mut per_lambda = Vec::new();
    for &lambda in &p.lambdas {
        let hits = resolvent_collision_scan(f, &base, lambda, &p.grid, tol).map_err(invalid)?;
        for c in &hits {
            push_collision(&mut table, "plane", c);
        }
        per_lambda.push(json!({ "lambda": lambda, "collisions": hits.len() }));
    }
    let found = !table.rows.is_empty();
    let summary = json!({ "field": f.label(), "collisions": table.rows.len(), "per_lambda": per_lambda });
    Ok((Status::from_pass(!found), summary, table))
}

/// `(e, p)` in either order, where `p` is a non-identity point.
fn partner_of_identity(c: &CollisionReport) -> Option<[f64; 3]> {
    if c.g == [0.0; 3] {
        Some(c.g_prime)
    } else if c.g_prime == [0.0; 3] {
        Some(c.g)
    } else {
        None
    }
}

fn example2(p: &Example2Params, tol: &ToleranceConfig) -> Result<Outcome, CliError> {
    let gauge = build_gauge::<f64>();
    let base = point(&p.plane_base)?;
    let mut table = Table::new(&COLLISION_COLUMNS);
    let mut ok = true;
    let mut worst_excess = f64::NEG_INFINITY;
    let mut families = Vec::new();
    let mut witness = Value::Null;
    for &lambda in &p.lambdas {
        let plane_hits = resolvent_collision_scan(&gauge, &base, lambda, &p.grid, tol).map_err(invalid)?;
        let family_hits =
            identity_collision_family_scan(&gauge, p.family_height, lambda, &p.grid, tol).map_err(invalid)?;
        for c in &plane_hits {
            push_collision(&mut table, "plane", c);
            let pair = partner_of_identity(c);
            if lambda == 1.0
                && pair.is_some_and(|q| (q[0] - 0.3).abs() < 1e-12 && (q[1] - 0.3).abs() < 1e-12 && q[2] == 1.0)
            {
                witness = json!({ "g": c.g, "g_prime": c.g_prime, "common_value": c.common_value, "norm": c.common_value_norm });
            }
        }
        for c in &family_hits {
            push_collision(&mut table, "family", c);
        }
        // Radii at height `family_height`, from both scans, against the published bound.
        let at_height = plane_hits
            .iter()
            .filter_map(partner_of_identity)
            .filter(|q| (q[2] - p.family_height).abs() < 1e-12)
            .chain(family_hits.iter().filter_map(partner_of_identity));
        let max_radius = at_height.map(|q| q[0].hypot(q[1])).fold(0.0, f64::max);
        let bound = lambda / (1.0 + lambda);
        let slack = p.grid.cell_diagonal();
        let within = max_radius <= bound + slack;
        ok &= within;
        for c in plane_hits.iter().chain(&family_hits) {
            worst_excess = worst_excess.max(c.common_value_norm - lambda);
        }
        families.push(json!({
            "lambda": lambda,
            "plane_collisions": plane_hits.len(),
            "family_collisions": family_hits.len(),
            "max_radius": max_radius,
            "exact_radius": gauge_collision_radius(p.family_height, lambda),
            "published_bound": bound,
            "grid_slack": slack,
            "within_bound_plus_slack": within,
        }));
    }
    ok &= !(worst_excess > 1e-9);

    let mut rng = rng_from_seed(tol.seed);
    let region = heisconvex_core::sampling::Region::default();
    let (mut worst_identity, mut n) = (0.0f64, 0usize);
    while n < p.identity_samples && !p.lambdas.is_empty() {
        let g: Point<f64> = region.sample_point(&mut rng);
        if gauge_value(&g) < 0.05 {
            continue;
        }
        let lambda = p.lambdas[n % p.lambdas.len()];
        if let Some(r) = gauge_ex2_identity_residual(&g, lambda) {
            worst_identity = worst_identity.max(r);
        }
        n += 1;
    }
    ok &= worst_identity <= 1e-10;
    let summary = json!({
        "witness": witness,
        "families": families,
        "max_image_excess": worst_excess,
        "identity_samples": n,
        "identity_max_residual": worst_identity,
    });
    Ok((Status::from_pass(ok), summary, table))
}

struct Claim {
    operator: &'static str,
    check: &'static str,
    expected: String,
    measured: String,
    agrees: bool,
    /// Counted towards the run status; the recorded-only rows are not.
    binding: bool,
}

fn example1(p: &Example1Params, tol: &ToleranceConfig) -> Result<Outcome, CliError> {
    let mut claims = Vec::new();
    let mut details = Vec::new();
    for (name, q, published_cyclic) in [
        ("Q1", [[3.0, 2.0], [-2.0, 4.0]], true),
        ("Q2", [[3.0, 0.0], [-2.0, 4.0]], false),
    ] {
        let field = OperatorField::linear(q);
        let crit = linear_monotone_criterion(&q);
        let scan = ScanConfig {
            samples: p.pairs,
            ..ScanConfig::default()
        };
        let mono = hmonotone_check_field(&field, &scan, tol);
        let potential = quadratic_potential(&q);
        let spec = potential.spec();
        let mut rng = rng_from_seed(tol.seed);
        let region = heisconvex_core::sampling::Region::cube(5.0);
        let mut grad_err = 0.0f64;
        for _ in 0..p.gradient_points {
            let g: Point<f64> = region.sample_point(&mut rng);
            let want: HVector<f64> = apply(&q, &g.xi1());
            grad_err = grad_err.max((spec.hgrad(&g) - want).norm() / (1.0 + want.norm()));
        }
        let u = heisconvex_core::hconvex::build_quadratic(spec);
        let convex = hconvexity_scan(
            &u,
            &ScanConfig {
                samples: p.convexity_samples,
                ..ScanConfig::default()
            },
            tol,
        );
        let cyclic = hcyclic_check_sampled(&field, p.cyclic.sequences, p.cyclic.max_len, &p.cyclic.region, tol)
            .map_err(invalid)?;
        let a = spec.a();
        let potential_text = format!("A = {a:?}, c = {}", spec.c());
        let expected_potential = if name == "Q1" {
            (
                "A = [[3.0, 0.0], [0.0, 4.0]], c = 1",
                a == [[3.0, 0.0], [0.0, 4.0]] && spec.c() == 1.0,
            )
        } else {
            (
                "A = [[3.0, -1.0], [-1.0, 4.0]], c = 0.5",
                a == [[3.0, -1.0], [-1.0, 4.0]] && spec.c() == 0.5,
            )
        };
        claims.push(Claim {
            operator: name,
            check: "H-monotone",
            expected: "true".into(),
            measured: format!(
                "{} ({} pairs, min slack {:.3e})",
                mono.pass, mono.admissible_pairs, mono.min_slack
            ),
            agrees: mono.pass && crit.euclidean_monotone,
            binding: true,
        });
        claims.push(Claim {
            operator: name,
            check: "potential",
            expected: expected_potential.0.into(),
            measured: potential_text,
            agrees: expected_potential.1,
            binding: true,
        });
        claims.push(Claim {
            operator: name,
            check: "gradient identity",
            expected: "|grad_H u - Q xi1| <= 1e-10".into(),
            measured: format!("{grad_err:.3e}"),
            agrees: grad_err <= 1e-10,
            binding: true,
        });
        claims.push(Claim {
            operator: name,
            check: "potential H-convex",
            expected: "true".into(),
            measured: format!("{} ({} samples)", convex.pass, convex.samples),
            agrees: convex.pass,
            binding: true,
        });
        claims.push(Claim {
            operator: name,
            check: "H-cyclically monotone",
            expected: published_cyclic.to_string(),
            measured: format!(
                "{} ({}/{} sequences pass)",
                cyclic.pass,
                cyclic.sequences - cyclic.failures,
                cyclic.sequences
            ),
            agrees: cyclic.pass == published_cyclic,
            // The published verdict for Q2 contradicts its own potential; it is reported, not enforced.
            binding: published_cyclic,
        });
        details.push(json!({
            "operator": name,
            "Q": q,
            "criterion": crit,
            "potential_convex": potential.is_convex(),
            "monotone": { "pass": mono.pass, "pairs": mono.admissible_pairs, "min_slack": mono.min_slack },
            "cyclic": { "pass": cyclic.pass, "sequences": cyclic.sequences, "failures": cyclic.failures,
                        "max_sequence_violation": cyclic.max_sequence_violation },
        }));
    }
    let mut table = Table::new(&["operator", "check", "expected", "measured", "agrees", "binding"]);
    for c in &claims {
        table.push(vec![
            c.operator.into(),
            c.check.into(),
            c.expected.clone().into(),
            c.measured.clone().into(),
            c.agrees.into(),
            c.binding.into(),
        ]);
    }
    let ok = claims.iter().all(|c| c.agrees || !c.binding);
    let discrepancies: Vec<_> = claims
        .iter()
        .filter(|c| !c.agrees)
        .map(|c| {
            format!(
                "{} {}: expected {}, measured {}",
                c.operator, c.check, c.expected, c.measured
            )
        })
        .collect();
    Ok((
        Status::from_pass(ok),
        json!({ "operators": details, "discrepancies": discrepancies }),
        table,
    ))
}

fn selftest(p: &SelftestParams, tol: &ToleranceConfig) -> Outcome {
    let r = group_selftest(p.samples, tol.seed);
    let mut table = Table::new(&["suite", "samples", "passed", "max_error"]);
    for s in &r.suites {
        table.push(vec![
            s.name.into(),
            s.samples.into(),
            s.passed.into(),
            s.max_error.into(),
        ]);
    }
    (
        Status::from_pass(r.pass()),
        json!({ "pass": r.pass(), "suites": r.suites.len() }),
        table,
    )
}
