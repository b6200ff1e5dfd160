//! The invariant suite behind `hypaffine verify`.

use std::path::Path;

use hypaffine::bicombing::{Bicombing, BicombingKind};
use hypaffine::espace::{
    check_cocycle_identity, cocycle, norm_e, properness_report, sample_bound_checks,
};
use hypaffine::group::Group;
use hypaffine::kernel::{
    check_structure, cnd_certificate, kernel_cross_validate, replay_two_triangle_bound,
    KernelDefect,
};
use hypaffine::{Kernel, Rational};

use crate::commands::{build_kernel, header, Outcome};
use crate::config::Cli;
use crate::output::Sink;

/// Largest support drawn for the per-vector bound samples.
const SAMPLE_SUPPORT: usize = 6;

struct Check {
    name: &'static str,
    status: &'static str,
    value: String,
    witness: String,
}

impl Check {
    fn new(name: &'static str, pass: bool, value: impl ToString, witness: impl ToString) -> Check {
        Check {
            name,
            status: if pass { "pass" } else { "fail" },
            value: value.to_string(),
            witness: witness.to_string(),
        }
    }

    fn skipped(name: &'static str, reason: &str) -> Check {
        Check {
            name,
            status: "skip",
            value: String::new(),
            witness: reason.to_string(),
        }
    }

    fn failed(&self) -> bool {
        self.status == "fail"
    }
}

fn describe_defect(k: &Kernel, g: &Group, d: &KernelDefect) -> String {
    let w = |i: usize| g.format(k.element(i));
    match d {
        KernelDefect::NonZeroDiagonal { index, value } => format!("K({0},{0})={value}", w(*index)),
        KernelDefect::Asymmetric { i, j } => format!("K({0},{1})!=K({1},{0})", w(*i), w(*j)),
        KernelDefect::Negative { i, j, value } => format!("K({},{})={value}", w(*i), w(*j)),
    }
}

pub(crate) fn run(
    cli: &Cli,
    sink: &Sink,
    group: &Group,
    user: Option<&Path>,
    samples: usize,
) -> Outcome {
    let c = &cli.config;
    let ball = group.ball(c.radius)?;
    let (k, source) = build_kernel(cli, group, &ball, user)?;
    let bicombing = match user {
        Some(_) => None,
        None => {
            let kind = source.parse::<BicombingKind>()?;
            Some(Bicombing::new(group, kind)?)
        }
    };
    let mut checks = Vec::new();

    let defects = check_structure(&k);
    checks.push(Check::new(
        "kernel_structure",
        defects.is_empty(),
        defects.len(),
        defects
            .first()
            .map(|d| describe_defect(&k, group, d))
            .unwrap_or_default(),
    ));

    if k.len() >= 2 {
        let all: Vec<usize> = (0..k.len()).collect();
        let (lambda, v) = cnd_certificate(&k, &all)?;
        let pass = lambda >= -c.tol;
        let witness = if pass {
            String::new()
        } else {
            let mut order: Vec<usize> = (0..v.len()).collect();
            order.sort_by(|&a, &b| v[b].abs().total_cmp(&v[a].abs()));
            order
                .iter()
                .take(4)
                .map(|&i| format!("{}:{:.6}", group.format(k.element(i)), v[i]))
                .collect::<Vec<_>>()
                .join("|")
        };
        checks.push(Check::new("cnd_min_eigenvalue", pass, lambda, witness));
    }

    match &bicombing {
        Some(b) => {
            let gap = kernel_cross_validate(b, &ball)?;
            checks.push(Check::new(
                "feature_cross_validation",
                gap == Rational::from_integer(0),
                gap,
                "",
            ));
        }
        None => checks.push(Check::skipped(
            "feature_cross_validation",
            "user-supplied kernel",
        )),
    }

    let half = ball.sub_ball(c.radius.div_ceil(2));
    let mut worst = 0.0f64;
    let mut witness = String::new();
    for s in &ball.elements()[half.clone()] {
        for t in &ball.elements()[half.clone()] {
            let residual: f64 = check_cocycle_identity(group, s, t)?;
            if residual > worst {
                worst = residual;
                witness = format!("{}|{}", group.format(s), group.format(t));
            }
        }
    }
    checks.push(Check::new("cocycle_identity", worst == 0.0, worst, witness));

    let mut worst = 0.0f64;
    let mut witness = String::new();
    for (i, s) in k.elements().iter().enumerate().skip(1) {
        let want = k.value(i, 0).max(0.0).sqrt() + 2.0;
        let gap = match norm_e(&cocycle(s), &k) {
            Ok(have) => (have - want).abs(),
            Err(_) => f64::INFINITY,
        };
        if gap > worst {
            worst = gap;
            witness = group.format(s);
        }
    }
    checks.push(Check::new(
        "cocycle_norm_formula",
        worst <= c.tol,
        worst,
        witness,
    ));

    let sampled = sample_bound_checks(&k, group, samples, SAMPLE_SUPPORT, c.seed)?;
    let failures: Vec<_> = sampled.iter().filter(|x| !x.check.pass).collect();
    let worst = sampled
        .iter()
        .map(|x| x.check.lhs - x.check.rhs)
        .fold(f64::NEG_INFINITY, f64::max);
    checks.push(Check::new(
        "per_vector_bound",
        failures.is_empty(),
        format!("max(lhs-rhs)={worst}"),
        failures
            .first()
            .map(|x| group.format(&x.s))
            .unwrap_or_default(),
    ));

    match &bicombing {
        Some(b) => {
            let short: Vec<_> = k
                .elements()
                .iter()
                .enumerate()
                .filter(|(i, s)| {
                    k.exact_value(*i, 0).unwrap() < Rational::from_integer(s.len() as i64)
                })
                .map(|(_, s)| group.format(s))
                .collect();
            checks.push(Check::new(
                "chain_length_lower_bound",
                short.is_empty(),
                short.len(),
                short.first().cloned().unwrap_or_default(),
            ));
            let report = properness_report(&k)?;
            checks.push(Check::new(
                "properness_lower_bound",
                report.violations.is_empty(),
                report.violations.len(),
                report
                    .violations
                    .first()
                    .map(|s| group.format(s))
                    .unwrap_or_default(),
            ));
            if b.is_antisymmetric() {
                let mut pairs = 0;
                let mut bad = None;
                for x in &sampled {
                    let support: Vec<usize> =
                        x.v.support().map(|y| k.index_of(y).unwrap()).collect();
                    let replay = replay_two_triangle_bound(b, &k, &x.s, &support)?;
                    pairs += replay.pairs;
                    if let (None, Some((p, q))) = (&bad, replay.violations.first()) {
                        bad = Some(format!(
                            "s={} x={} y={}",
                            group.format(&x.s),
                            group.format(p),
                            group.format(q)
                        ));
                    }
                }
                checks.push(Check::new(
                    "two_triangle_replay",
                    bad.is_none(),
                    format!("{pairs} pairs"),
                    bad.unwrap_or_default(),
                ));
            } else {
                checks.push(Check::skipped(
                    "two_triangle_replay",
                    "bicombing is not antisymmetric",
                ));
            }
            if b.kind() == BicombingKind::TreeGeodesic {
                let m = k.displacement_constant();
                checks.push(Check::new("zero_displacement", m == 0.0, m, ""));
            }
        }
        None => {
            for name in [
                "chain_length_lower_bound",
                "properness_lower_bound",
                "two_triangle_replay",
            ] {
                checks.push(Check::skipped(name, "user-supplied kernel"));
            }
        }
    }

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["check", "status", "value", "witness"])
        .map_err(hypaffine::Error::from)?;
    for ch in &checks {
        w.write_record([ch.name, ch.status, &ch.value, &ch.witness])
            .map_err(hypaffine::Error::from)?;
    }
    let body = w.into_inner().map_err(|e| e.into_error())?;
    let mut h = header(cli, Some(group));
    h.push("kernel", &source)
        .push("elements", k.len())
        .push("displacement_constant", k.displacement_constant())
        .push("samples", samples);
    sink.emit("verify", &h, &body)?;

    let failed: Vec<&Check> = checks.iter().filter(|ch| ch.failed()).collect();
    for ch in &checks {
        eprintln!(
            "{:<26} {:<4} {} {}",
            ch.name, ch.status, ch.value, ch.witness
        );
    }
    Ok(failed.is_empty())
}
