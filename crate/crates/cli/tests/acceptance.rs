//! Acceptance suite. Runs every criterion at its stated tolerance and time
//! budget, prints one line per criterion and exits nonzero if any fails.

use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use hypaffine::actions::{
    orbit_growth_report, orbit_kernel, parse_action, parse_quasitree_kernel,
    validate_quasitree_kernel, GrowthVerdict, SandwichViolation,
};
use hypaffine::bicombing::{empirical_area_constant, Bicombing, BicombingKind, SamplingPolicy};
use hypaffine::espace::{
    check_cocycle_identity, cocycle, norm_e, op_norm_lower_bound, properness_report,
    sample_bound_checks, uniform_bound, OptimizerConfig,
};
use hypaffine::group::{free_reduce, invert_word, CayleyBall, Group, GroupOptions, Presentation};
use hypaffine::kernel::{
    cnd_min_eigenvalue, exact_two_sided_excess, kernel_cross_validate, kernel_from_bicombing,
    replay_two_triangle_bound,
};
use hypaffine::{Kernel, Rational};
use hypaffine_cli::{run_args, EXIT_PASS, EXIT_VIOLATION};

type Outcome = Result<String, String>;

/// Name, time budget in seconds, body.
type Criterion = (&'static str, Option<u64>, fn() -> Outcome);

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .display()
        .to_string()
}

fn surface(index_radius: usize) -> Group {
    let p = Presentation::parse(&fs::read_to_string(data("surface2.txt")).unwrap()).unwrap();
    Group::new(
        p,
        GroupOptions {
            index_radius,
            ..GroupOptions::default()
        },
    )
    .unwrap()
}

fn zero() -> Rational {
    Rational::from_integer(0)
}

/// Distance from the identity read off the BFS sphere an index lies in.
fn sphere_of(ball: &CayleyBall, i: usize) -> usize {
    (0..=ball.radius())
        .find(|&n| ball.sphere(n).contains(&i))
        .unwrap()
}

fn free_group_exactness() -> Outcome {
    let g = Group::free(2);
    let tree = Bicombing::new(&g, BicombingKind::TreeGeodesic).map_err(|e| e.to_string())?;
    let ball = g.ball(5).map_err(|e| e.to_string())?;
    check(ball.len() == 485, || {
        format!("ball(5) has {} elements", ball.len())
    })?;

    let sampled = empirical_area_constant(&tree, &ball, &SamplingPolicy::sampled(5000, 1)).unwrap();
    check(
        sampled.constant == zero() && sampled.triples == 5000 && !sampled.exhaustive,
        || {
            format!(
                "sampled M_emp = {} over {} triples",
                sampled.constant, sampled.triples
            )
        },
    )?;
    let small = g.ball(3).unwrap();
    let full = empirical_area_constant(&tree, &small, &SamplingPolicy::exhaustive()).unwrap();
    check(full.constant == zero() && full.exhaustive, || {
        format!("exhaustive M_emp = {}", full.constant)
    })?;

    let k: Kernel = kernel_from_bicombing(&tree, &ball).unwrap();
    for (i, x) in ball.elements().iter().enumerate() {
        let inv = invert_word(x.letters());
        for (j, y) in ball.elements().iter().enumerate() {
            let mut w = inv.clone();
            w.extend_from_slice(y.letters());
            let d = free_reduce(&w).len() as i64;
            check(
                k.exact_value(i, j) == Some(Rational::from_integer(d)),
                || format!("K({}, {}) != {d}", g.format(x), g.format(y)),
            )?;
        }
    }

    let mut worst = 0.0f64;
    for (i, s) in ball.elements().iter().enumerate().skip(1) {
        let d = sphere_of(&ball, i) as f64;
        worst = worst.max((norm_e(&cocycle(s), &k).unwrap() - (d.sqrt() + 2.0)).abs());
    }
    check(worst <= 1e-9, || format!("norm formula off by {worst}"))?;

    let two = g.ball(2).unwrap();
    for s in two.elements() {
        for t in two.elements() {
            let r: f64 = check_cocycle_identity(&g, s, t).unwrap();
            check(r == 0.0, || {
                format!("cocycle residual {r} at ({}, {})", g.format(s), g.format(t))
            })?;
        }
    }

    let support = two.elements().to_vec();
    let mut best = 0.0f64;
    for s in two.elements() {
        let est = op_norm_lower_bound(&k, &g, s, &support, &OptimizerConfig::default()).unwrap();
        best = best.max(est.best);
    }
    let bound = uniform_bound(k.displacement_constant()).unwrap();
    check(bound == 1.0 && best <= 1.0 + 1e-9, || {
        format!("op-norm lower bound {best} (uniform bound {bound})")
    })?;
    Ok(format!(
        "485 elements, M_emp = 0 (5000 sampled, {} exhaustive), max op-norm bound {best}",
        full.triples
    ))
}

fn cnd_certification() -> Outcome {
    let mut notes = Vec::new();
    let g = Group::free(2);
    let tree = Bicombing::new(&g, BicombingKind::TreeGeodesic).unwrap();
    let ball = g.ball(4).unwrap();
    let k: Kernel = kernel_from_bicombing(&tree, &ball).unwrap();
    let lambda = cnd_min_eigenvalue(&k, &(0..k.len()).collect::<Vec<_>>()).unwrap();
    check(lambda >= -1e-9, || {
        format!("F2 ball(4): min eigenvalue {lambda}")
    })?;
    let gap = kernel_cross_validate(&tree, &ball).unwrap();
    check(gap == zero(), || {
        format!("F2 ball(4): cross-validation gap {gap}")
    })?;
    notes.push(format!("F2 {lambda:.3e}"));

    let s = surface(4);
    let ball = s.ball(2).unwrap();
    for kind in [
        BicombingKind::Shortlex,
        BicombingKind::ShortlexAntisymmetrized,
    ] {
        let b = Bicombing::new(&s, kind).unwrap();
        let k: Kernel = kernel_from_bicombing(&b, &ball).unwrap();
        let lambda = cnd_min_eigenvalue(&k, &(0..k.len()).collect::<Vec<_>>()).unwrap();
        check(lambda >= -1e-9, || {
            format!("surface {kind}: min eigenvalue {lambda}")
        })?;
        let gap = kernel_cross_validate(&b, &ball).unwrap();
        check(gap == zero(), || {
            format!("surface {kind}: cross-validation gap {gap}")
        })?;
        notes.push(format!("surface {kind} {lambda:.3e}"));
    }
    Ok(format!(
        "min eigenvalues: {}; cross-validation gaps 0",
        notes.join(", ")
    ))
}

fn proof_inequality_replay() -> Outcome {
    let g = surface(6);
    let b = Bicombing::new(&g, BicombingKind::ShortlexAntisymmetrized).unwrap();
    let mut notes = Vec::new();
    for radius in [2, 3] {
        let ball = g.ball(radius).unwrap();
        let k: Kernel = kernel_from_bicombing(&b, &ball).unwrap();
        let samples = sample_bound_checks(&k, &g, 200, 6, 42).unwrap();
        let mut pairs = 0;
        let mut max_sum = zero();
        for x in &samples {
            let c = &x.check;
            check(c.lhs <= c.rhs + 1e-9, || {
                format!(
                    "ball({radius}) s = {}: lhs {} > rhs {}",
                    g.format(&x.s),
                    c.lhs,
                    c.rhs
                )
            })?;
            let support: Vec<usize> = x.v.support().map(|y| k.index_of(y).unwrap()).collect();
            let exact = exact_two_sided_excess(&k, &g, &x.s, &support).unwrap();
            check(
                c.excess == *exact.numer() as f64 / *exact.denom() as f64,
                || format!("float excess {} differs from exact {exact}", c.excess),
            )?;
            let replay = replay_two_triangle_bound(&b, &k, &x.s, &support).unwrap();
            check(replay.violations.is_empty(), || {
                let (p, q) = &replay.violations[0];
                format!(
                    "two-triangle bound fails at s = {}, ({}, {})",
                    g.format(&x.s),
                    g.format(p),
                    g.format(q)
                )
            })?;
            pairs += replay.pairs;
            max_sum = max_sum.max(replay.max_area_sum);
        }
        if radius == 2 {
            let area = empirical_area_constant(&b, &ball, &SamplingPolicy::exhaustive()).unwrap();
            let two_m = area.constant * Rational::from_integer(2);
            check(area.exhaustive && max_sum <= two_m, || {
                format!("two-triangle sum {max_sum} exceeds 2 M_emp = {two_m}")
            })?;
            notes.push(format!(
                "ball(2): 200 pairs, {pairs} replayed, area sums <= 2 M_emp = {two_m}"
            ));
        } else {
            let max_excess = samples.iter().map(|x| x.check.excess).fold(0.0, f64::max);
            notes.push(format!(
                "ball(3): 200 pairs, {pairs} replayed, max excess {max_excess}"
            ));
        }
    }
    Ok(notes.join("; "))
}

fn properness_lower_bound() -> Outcome {
    let f2 = Group::free(2);
    let s = surface(6);
    let mut rows = 0;
    for (g, kinds, radius) in [
        (&f2, vec![BicombingKind::TreeGeodesic], 5),
        (
            &s,
            vec![
                BicombingKind::Shortlex,
                BicombingKind::ShortlexAntisymmetrized,
            ],
            3,
        ),
    ] {
        let ball = g.ball(radius).unwrap();
        for kind in kinds {
            let b = Bicombing::new(g, kind).unwrap();
            let e = g.identity();
            for (i, x) in ball.elements().iter().enumerate() {
                let norm = b.combing_chain(&e, x).unwrap().l1_norm();
                let d = sphere_of(&ball, i) as i64;
                check(norm >= Rational::from_integer(d), || {
                    format!("{kind}: ||q[e, {}]|| = {norm} < {d}", g.format(x))
                })?;
            }
            let k: Kernel = kernel_from_bicombing(&b, &ball).unwrap();
            let report = properness_report(&k).unwrap();
            for row in &report.rows {
                let floor = (row.distance as f64).sqrt() + 2.0 - 1e-9;
                check(row.norm_e >= floor, || {
                    format!("{kind}: row {} below bound", g.format(&row.element))
                })?;
            }
            check(report.violations.is_empty(), || {
                format!("{kind}: report flags violations")
            })?;
            rows += report.rows.len();
        }
    }
    Ok(format!("{rows} norm rows above sqrt(d) + 2"))
}

fn tree_action_pipeline() -> Outcome {
    let f2 = Group::free(2);
    let identity = parse_action(
        &fs::read_to_string(data("identity_f2.action")).unwrap(),
        f2.presentation(),
    )
    .map_err(|e| e.to_string())?;
    let k: Kernel = orbit_kernel(&identity, &f2.ball(5).unwrap());
    check(k.displacement_constant() == 0.0, || {
        "identity action M != 0".into()
    })?;
    let report = orbit_growth_report(&k, None).unwrap();
    check(report.spheres.len() == 5, || {
        format!("{} spheres", report.spheres.len())
    })?;
    for sphere in &report.spheres {
        let want = (sphere.radius as f64).sqrt() + 2.0;
        check((sphere.max_norm_e - want).abs() <= 1e-9, || {
            format!(
                "sphere {}: max norm {} != {want}",
                sphere.radius, sphere.max_norm_e
            )
        })?;
    }
    for row in &report.norms.rows {
        check(
            (row.norm_e - ((row.distance as f64).sqrt() + 2.0)).abs() <= 1e-9,
            || format!("identity action norm at {}", f2.format(&row.element)),
        )?;
    }
    check(
        report.verdict == GrowthVerdict::UnboundedOnScannedRange,
        || report.verdict.to_string(),
    )?;

    let p = Presentation::parse(&fs::read_to_string(data("f2xf2.txt")).unwrap()).unwrap();
    let g = Group::new(p, GroupOptions::default()).unwrap();
    let projection = parse_action(
        &fs::read_to_string(data("projection_f2xf2.action")).unwrap(),
        g.presentation(),
    )
    .map_err(|e| e.to_string())?;
    let k: Kernel = orbit_kernel(&projection, &g.ball(4).unwrap());
    let factor = |gens: [usize; 2]| -> Vec<usize> {
        (0..k.len())
            .filter(|&i| {
                k.element(i)
                    .letters()
                    .iter()
                    .all(|l| gens.contains(&l.generator()))
            })
            .collect()
    };
    let second = orbit_growth_report(&k, Some(&factor([2, 3]))).unwrap();
    check(second.norms.rows.iter().all(|r| r.norm_e == 2.0), || {
        "second factor norm != 2".into()
    })?;
    check(
        second.verdict == GrowthVerdict::BoundedOnScannedRange,
        || second.verdict.to_string(),
    )?;
    let first = orbit_growth_report(&k, Some(&factor([0, 1]))).unwrap();
    check(
        first.verdict == GrowthVerdict::UnboundedOnScannedRange,
        || first.verdict.to_string(),
    )?;

    let ball = f2.ball(2).unwrap();
    let mut text = String::from("delta: 0\nx,y,d,K\n");
    let mut bumped = String::from("delta: 0\nx,y,d,K\n");
    let target = (3, 11);
    for i in 0..ball.len() {
        for j in i + 1..ball.len() {
            let d = f2
                .word_distance(ball.element(i), ball.element(j), 4)
                .unwrap() as f64;
            let (x, y) = (f2.format(ball.element(i)), f2.format(ball.element(j)));
            text.push_str(&format!("{x},{y},{d},{d}\n"));
            let k = if (i, j) == target { d + 0.5 } else { d };
            bumped.push_str(&format!("{x},{y},{d},{k}\n"));
        }
    }
    let accepted =
        validate_quasitree_kernel(&parse_quasitree_kernel(&text).unwrap(), Some(&f2)).unwrap();
    check(accepted.pass, || {
        format!("exact tree kernel rejected: {accepted:?}")
    })?;
    let rejected =
        validate_quasitree_kernel(&parse_quasitree_kernel(&bumped).unwrap(), None).unwrap();
    let d = f2
        .word_distance(ball.element(target.0), ball.element(target.1), 4)
        .unwrap() as f64;
    let expected = vec![SandwichViolation {
        x: f2.format(ball.element(target.0)),
        y: f2.format(ball.element(target.1)),
        d,
        k: d + 0.5,
    }];
    check(
        !rejected.pass && rejected.sandwich_violations == expected,
        || {
            format!(
                "perturbed kernel verdict {:?}",
                rejected.sandwich_violations
            )
        },
    )?;
    Ok(format!(
        "identity c = {:.6}, second factor c = {}, first factor c = {:.6}, witness {}|{}",
        report.fitted_c, second.fitted_c, first.fitted_c, expected[0].x, expected[0].y
    ))
}

fn sabotage_sensitivity() -> Outcome {
    let dir = std::env::temp_dir().join(format!("hypaffine-acceptance-{}", std::process::id()));
    let out = dir.display().to_string();
    let f2 = data("f2.txt");
    let base = [
        "hypaffine",
        "--presentation",
        &f2,
        "--radius",
        "4",
        "--out",
        &out,
    ];
    let with = |extra: &[&str]| -> Vec<String> {
        let mut v: Vec<String> = vec![base[0].into()];
        v.extend(extra.iter().map(|s| s.to_string()));
        v.extend(base[1..].iter().map(|s| s.to_string()));
        v
    };
    let code = run_args(with(&["kernel"]));
    check(code == EXIT_PASS, || format!("kernel dump exit {code}"))?;
    let kernel = dir.join("kernel.csv");
    let text = fs::read_to_string(&kernel).unwrap();
    let clean = run_args(with(&["verify", "--kernel", &kernel.display().to_string()]));
    check(clean == EXIT_PASS, || format!("clean kernel exit {clean}"))?;

    let index = 13;
    let needle = format!("\n{index},{index},0\n");
    check(text.contains(&needle), || "diagonal row missing".into())?;
    let corrupted = dir.join("corrupted.csv");
    fs::write(
        &corrupted,
        text.replace(&needle, &format!("\n{index},{index},1\n")),
    )
    .unwrap();
    let code = run_args(with(&[
        "verify",
        "--kernel",
        &corrupted.display().to_string(),
    ]));
    check(code == EXIT_VIOLATION, || {
        format!("corrupted kernel exit {code}")
    })?;
    let report = fs::read_to_string(dir.join("verify.csv")).unwrap();
    let word = Group::free(2).format(Group::free(2).ball(4).unwrap().element(index));
    let line = report
        .lines()
        .find(|l| l.starts_with("kernel_structure,"))
        .unwrap_or_default()
        .to_string();
    let _ = fs::remove_dir_all(&dir);
    check(
        line.contains("fail") && line.contains(&format!("K({word},{word})=1")),
        || format!("no named witness: {line:?}"),
    )?;
    Ok(format!("exit 0 -> 1, witness K({word},{word})=1"))
}

fn main() {
    let criteria: [Criterion; 6] = [
        ("1 free-group exactness", Some(10), free_group_exactness),
        ("2 CND certification", Some(30), cnd_certification),
        (
            "3 proof-inequality replay",
            Some(60),
            proof_inequality_replay,
        ),
        ("4 properness lower bound", None, properness_lower_bound),
        ("5 tree-action pipeline", Some(10), tree_action_pipeline),
        ("6 sabotage sensitivity", None, sabotage_sensitivity),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let over = budget.filter(|&b| elapsed > Duration::from_secs(b));
        let budget_note = budget.map(|b| format!(" < {b} s")).unwrap_or_default();
        let (status, detail) = match (&result, over) {
            (Ok(detail), None) => ("PASS", detail.clone()),
            (Ok(detail), Some(b)) => ("FAIL", format!("over the {b} s budget; {detail}")),
            (Err(why), _) => ("FAIL", why.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "[{status}] criterion {name} ({:.2} s{budget_note}): {detail}",
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} of 6 criteria passed", 6 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
