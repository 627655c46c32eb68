use std::time::Instant;

use holonorm::geometry::{classify, halfline_through, DomainSpec};
use holonorm::probe::find_divergence_witness;
use holonorm::sampling::{random_interior_points, rng};
use holonorm::spaces::{bounded_gap_check, chain_bound, halfline_gap_check, membership_verdict, primitive, MembershipStatus, OrderSet};
use holonorm::{estimate_sup, favard_constant, lk_constant, verify_max_form};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, Prepared, Task};
use crate::report::{count_evaluations, decimal, round_floats, Provenance, Report, SummaryRow, Timing};
use crate::CliError;

/// Directions per base point in the recession soundness sweep.
pub const SWEEP_DIRECTIONS: usize = 16;
/// Ray parameters checked for every sampled point and direction.
pub const SWEEP_TS: [f64; 8] = [0.0, 1.0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6];

struct Outcome {
    results: Value,
    pass: bool,
    summary: Vec<(String, String)>,
}

impl Outcome {
    fn new(results: Value, pass: bool) -> Self {
        Self {
            results,
            pass,
            summary: Vec::new(),
        }
    }

    fn row(mut self, label: &str, value: impl ToString) -> Self {
        self.summary.push((label.to_string(), value.to_string()));
        self
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

/// Execute the task named by `config`.
pub fn run(config: ExperimentConfig) -> Result<Report, CliError> {
    let start = Instant::now();
    let prepared = config.prepare()?;
    let task_name = prepared.config.task.name();
    let outcome = dispatch(&prepared).map_err(|source| CliError::Task {
        task: task_name,
        source,
    })?;
    let mut results = outcome.results;
    let evaluations = count_evaluations(&results);
    round_floats(&mut results);
    Ok(Report {
        provenance: Provenance {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed: prepared.config.seed,
            evaluations,
        },
        config: prepared.config,
        results,
        pass: outcome.pass,
        summary: outcome
            .summary
            .into_iter()
            .map(|(label, value)| SummaryRow { label, value })
            .collect(),
        timing: Timing {
            wall_seconds: start.elapsed().as_secs_f64(),
        },
    })
}

fn dispatch(p: &Prepared) -> holonorm::Result<Outcome> {
    let cfg = &p.config.probe;
    let f = || p.function.as_ref().expect("checked by prepare");
    let d = || p.domain.as_ref().expect("checked by prepare");
    Ok(match &p.config.task {
        Task::Favard { n, tol } => {
            let k = favard_constant(*n, *tol)?;
            Outcome::new(
                json!({
                    "n": n,
                    "tol": tol,
                    "constant": k,
                    "lower": k.lower(),
                    "upper": k.upper(),
                    "decimal": decimal(k.value),
                }),
                true,
            )
            .row(&format!("K_{n}"), decimal(k.value))
            .row("tail bound", format!("{:.3e}", k.tail_bound))
        }
        Task::LkTable { n_max, tol } => lk_table(*n_max, *tol)?,
        Task::VerifyLk {
            alpha1,
            order,
            alpha2,
            slack,
        } => {
            let r = verify_max_form(f(), d(), *alpha1, *order, *alpha2, cfg, *slack)?;
            Outcome::new(to_value(&r), r.pass)
                .row("constant", decimal(r.constant.value))
                .row("lhs", decimal(r.lhs))
                .row("rhs", decimal(r.rhs))
        }
        Task::Recession { point, samples } => recession(d(), *point, *samples, p.config.seed)?,
        Task::Probe { order } => {
            let r = estimate_sup(f(), *order, d(), cfg)?;
            Outcome::new(to_value(&r), true)
                .row("sup estimate", decimal(r.sup_estimate))
                .row("verdict", format!("{:?}", r.verdict))
                .row("rounds", r.history.len())
        }
        Task::Witness { order, threshold } => {
            let threshold = threshold.unwrap_or(cfg.divergence_threshold);
            let w = find_divergence_witness(f(), *order, d(), threshold, cfg)?;
            let valid = w.as_ref().is_some_and(|w| w.is_valid_for(d()));
            let last = w.as_ref().and_then(|w| w.moduli.last().copied());
            Outcome::new(json!({ "order": order, "threshold": threshold, "witness": w, "valid": valid }), valid)
                .row("witness", if valid { "found" } else { "none" })
                .row("last modulus", last.map_or("-".into(), decimal))
        }
        Task::Membership { orders: list } => {
            let v = membership_verdict(f(), &orders_of(list)?, d(), cfg)?;
            let mut out = Outcome::new(to_value(&v), true);
            for e in &v.entries {
                let status = match e.status {
                    MembershipStatus::EvidenceMember => "member (evidence)",
                    MembershipStatus::WitnessNonMember => "non-member (witness)",
                };
                out = out.row(&format!("{:?} order {}", e.space, e.order), status);
            }
            out
        }
        Task::ChainBound { order, alpha, z_o } => {
            let z_o = z_o.unwrap_or_else(|| d().interior_point());
            let b = chain_bound(f(), *order, *alpha, d(), z_o, cfg)?;
            Outcome::new(to_value(&b), b.pass)
                .row("lhs", decimal(b.lhs))
                .row("rhs", decimal(b.rhs))
                .row("diameter", decimal(b.diameter))
        }
        Task::Thm42 { orders: list } => {
            let r = halfline_gap_check(f(), &orders_of(list)?, d(), cfg)?;
            let mut out = Outcome::new(to_value(&r), r.pass).row("gaps checked", r.records.len());
            for rec in &r.records {
                out = out.row(
                    &format!("order {} in [{}, {}]", rec.order, rec.alpha1, rec.alpha2),
                    format!("{} <= {}", decimal(rec.lhs), decimal(rec.rhs)),
                );
            }
            out
        }
        Task::Thm47 { orders: list } => {
            let r = bounded_gap_check(f(), &orders_of(list)?, d(), cfg)?;
            let mut out = Outcome::new(to_value(&r), r.pass).row("gaps checked", r.records.len());
            for rec in &r.records {
                out = out.row(
                    &format!("order {} from {}", rec.order, rec.alpha),
                    format!("{} <= {}", decimal(rec.lhs), decimal(rec.rhs)),
                );
            }
            out
        }
        Task::Primitive { base, z } => {
            let base = base.unwrap_or_else(|| d().interior_point());
            let value = primitive(f(), base, *z, d())?;
            Outcome::new(json!({ "base": base, "z": z, "value": value, "modulus": value.norm() }), true)
                .row("value", format!("{} + {}i", decimal(value.re), decimal(value.im)))
        }
    })
}

fn orders_of(list: &[u32]) -> holonorm::Result<OrderSet> {
    OrderSet::new(list.iter().copied())
}

fn lk_table(n_max: u32, tol: f64) -> holonorm::Result<Outcome> {
    let mut favard = Vec::new();
    for n in 0..=n_max {
        let k = favard_constant(n, tol)?;
        favard.push(json!({ "n": n, "constant": k, "decimal": decimal(k.value) }));
    }
    let mut rows = Vec::new();
    let mut in_range = true;
    let ceiling = std::f64::consts::FRAC_PI_2 + 1e-9;
    for n in 2..=n_max {
        for k in 1..n {
            let c = lk_constant(n, k, tol)?;
            in_range &= c.value >= 1.0 && c.value <= ceiling;
            rows.push(json!({ "n": n, "k": k, "constant": c, "decimal": decimal(c.value) }));
        }
    }
    let count = rows.len();
    Ok(Outcome::new(json!({ "favard": favard, "lk": rows, "in_range": in_range }), in_range)
        .row("constants", count)
        .row("all in [1, pi/2]", in_range))
}

fn recession(d: &DomainSpec, point: Option<num_complex::Complex64>, samples: usize, seed: u64) -> holonorm::Result<Outcome> {
    let cone = d.recession_cone()?;
    let class = classify(&cone);
    let directions = cone.sample_directions(SWEEP_DIRECTIONS);
    let mut r = rng(seed);
    let bases = random_interior_points(d, samples, 1e-6, &mut r);
    let mut checked = 0u64;
    let mut violations = Vec::new();
    for p in &bases {
        for h in &directions {
            for t in SWEEP_TS {
                checked += 1;
                if !d.contains(p + h * t) {
                    violations.push(json!({ "base": p, "direction": h, "t": t }));
                }
            }
        }
    }
    let through = match point {
        Some(p) => {
            let (h, overshoot) = halfline_through(d, p)?;
            Some(json!({ "point": p, "direction": h, "overshoot": overshoot }))
        }
        None => None,
    };
    let pass = violations.is_empty();
    let violation_count = violations.len();
    let shown: Vec<String> = directions
        .iter()
        .take(4)
        .map(|h| format!("{} + {}i", decimal(h.re), decimal(h.im)))
        .collect();
    Ok(Outcome::new(
        json!({
            "cone": cone,
            "class": class,
            "width_degrees": cone.width_degrees(),
            "directions": directions,
            "sweep": { "bases": bases.len(), "checked": checked, "violations": violations },
            "halfline": through,
        }),
        pass,
    )
    .row("class", to_value(&class)["class"].as_str().unwrap_or("?"))
    .row("width (deg)", decimal(cone.width_degrees()))
    .row("directions", shown.join(", "))
    .row("ray checks", format!("{checked} ({violation_count} violations)")))
}
