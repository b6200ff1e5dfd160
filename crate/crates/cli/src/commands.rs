use std::fs;
use std::path::Path;

use hypaffine::actions::{
    orbit_growth_report, orbit_kernel, parse_action, parse_quasitree_kernel,
    validate_quasitree_kernel, TreeActionSpec,
};
use hypaffine::bicombing::{
    empirical_area_constant, quasi_geodesic_constants, Bicombing, BicombingKind, SamplingPolicy,
};
use hypaffine::espace::{
    op_norm_lower_bound, properness_report, uniform_bound, write_norm_csv, write_opnorm_csv,
    OpNormRow, OptimizerConfig,
};
use hypaffine::group::{CayleyBall, Group, GroupOptions, Presentation, ReductionMode};
use hypaffine::kernel::{
    ball_displacement_constant, kernel_from_bicombing, read_kernel_csv, write_kernel_csv,
};
use hypaffine::Kernel;

use crate::config::{Cli, Command, RunConfig};
use crate::output::{Header, Sink, TIMESTAMP_KEY};
use crate::{verify, CliError};

/// Op-norm estimates above the uniform bound by more than this fail.
const OPNORM_SLACK: f64 = 1e-6;

pub(crate) type Outcome = Result<bool, CliError>;

pub(crate) fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn load_presentation(config: &RunConfig) -> Result<Presentation, CliError> {
    let path = config
        .presentation
        .as_ref()
        .ok_or_else(|| CliError::Usage("--presentation is required".into()))?;
    Ok(Presentation::parse(&read(path)?)?)
}

/// `index_radius` is what the command needs for Dehn presentations.
fn load_group(config: &RunConfig, index_radius: usize) -> Result<Group, CliError> {
    let p = load_presentation(config)?;
    let options = GroupOptions {
        cap: config.cap,
        index_radius: config.index_radius.unwrap_or(index_radius.max(1)),
    };
    Ok(Group::new(p, options)?)
}

/// Requested kinds, or the natural default for the presentation.
fn kinds(config: &RunConfig, group: &Group, both_shortlex: bool) -> Vec<BicombingKind> {
    if !config.bicombing.is_empty() {
        return config.bicombing.clone();
    }
    match (group.presentation().mode(), both_shortlex) {
        (ReductionMode::Free, _) => vec![BicombingKind::TreeGeodesic],
        (_, true) => vec![
            BicombingKind::Shortlex,
            BicombingKind::ShortlexAntisymmetrized,
        ],
        (_, false) => vec![BicombingKind::ShortlexAntisymmetrized],
    }
}

pub(crate) fn header(cli: &Cli, group: Option<&Group>) -> Header {
    let c = &cli.config;
    let mut h = Header::default();
    h.push("tool", concat!("hypaffine ", env!("CARGO_PKG_VERSION")))
        .push("command", cli.command.name());
    if let Some(p) = &c.presentation {
        h.push("presentation_file", p.display());
    }
    if let Some(g) = group {
        let p = g.presentation();
        h.push("generators", p.generators().iter().collect::<String>())
            .push("relators", {
                let r: Vec<String> = p.relators().iter().map(|w| p.format_word(w)).collect();
                if r.is_empty() {
                    "(none)".to_string()
                } else {
                    r.join(" ")
                }
            })
            .push("mode", p.mode());
        if let Some(i) = g.index_radius() {
            h.push("index_radius", i);
        }
    }
    h.push("radius", c.radius)
        .push("seed", c.seed)
        .push("tol", c.tol)
        .push("cap", c.cap)
        .push(
            TIMESTAMP_KEY,
            chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        );
    h
}

pub(crate) fn dispatch(cli: &Cli) -> Outcome {
    let sink = Sink::new(cli.config.out.clone())?;
    let r = cli.config.radius;
    match &cli.command {
        Command::Ball => ball(cli, &sink),
        Command::BicombingStats {
            samples,
            exhaustive,
        } => {
            let group = load_group(&cli.config, 2 * r)?;
            bicombing_stats(cli, &sink, &group, *samples, *exhaustive)
        }
        Command::Verify { kernel, samples } => {
            let group = load_group(&cli.config, 2 * r)?;
            verify::run(cli, &sink, &group, kernel.as_deref(), *samples)
        }
        Command::Opnorm {
            subspace_radius,
            scan_radius,
            restarts,
            iterations,
            kernel,
        } => {
            let group = load_group(&cli.config, r)?;
            let optimizer = OptimizerConfig {
                restarts: *restarts,
                iterations: *iterations,
                seed: cli.config.seed,
                ..OptimizerConfig::default()
            };
            opnorm(
                cli,
                &sink,
                &group,
                *subspace_radius,
                *scan_radius,
                &optimizer,
                kernel.as_deref(),
            )
        }
        Command::Norms { kernel } => {
            let group = load_group(&cli.config, r)?;
            norms(cli, &sink, &group, kernel.as_deref())
        }
        Command::Action { action, generators } => {
            let group = load_group(&cli.config, r)?;
            action_growth(cli, &sink, &group, action, generators.as_deref())
        }
        Command::Kernel { action } => {
            let group = load_group(&cli.config, r)?;
            dump_kernel(cli, &sink, &group, action.as_deref())
        }
        Command::Quasitree { input } => quasitree(cli, &sink, input),
    }
}

fn ball(cli: &Cli, sink: &Sink) -> Outcome {
    let group = load_group(&cli.config, cli.config.radius)?;
    let ball = group.ball(cli.config.radius)?;
    let mut body = String::from("sphere,count\n");
    for (n, count) in ball.sphere_sizes().iter().enumerate() {
        body.push_str(&format!("{n},{count}\n"));
    }
    let mut h = header(cli, Some(&group));
    h.push("elements", ball.len());
    sink.emit("ball", &h, body.as_bytes())?;
    eprintln!(
        "ball of radius {}: {} elements",
        cli.config.radius,
        ball.len()
    );
    Ok(true)
}

fn bicombing_stats(
    cli: &Cli,
    sink: &Sink,
    group: &Group,
    samples: usize,
    exhaustive: bool,
) -> Outcome {
    let ball = group.ball(cli.config.radius)?;
    let policy = if exhaustive {
        SamplingPolicy::exhaustive()
    } else {
        SamplingPolicy {
            samples,
            seed: cli.config.seed,
            ..SamplingPolicy::default()
        }
    };
    let mut body = String::from(
        "bicombing,M_emp,M_emp_float,witness,triples,exhaustive,ball_relative,lambda_emp,c_emp,lower_bound_violations\n",
    );
    let mut pass = true;
    for kind in kinds(&cli.config, group, true) {
        let b = Bicombing::new(group, kind)?;
        let area = empirical_area_constant(&b, &ball, &policy)?;
        let qg = quasi_geodesic_constants(&b, &ball)?;
        pass &= qg.lower_bound_violations.is_empty();
        let witness: Vec<String> = area.witness.iter().map(|x| group.format(x)).collect();
        body.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            kind,
            area.constant,
            *area.constant.numer() as f64 / *area.constant.denom() as f64,
            witness.join("|"),
            area.triples,
            area.exhaustive,
            area.ball_relative,
            qg.multiplicative,
            qg.additive,
            qg.lower_bound_violations.len()
        ));
        eprintln!(
            "{kind}: M_emp = {} over {} triples ({}), lambda = {}, c = {}",
            area.constant,
            area.triples,
            if area.exhaustive {
                "exhaustive"
            } else {
                "sampled"
            },
            qg.multiplicative,
            qg.additive
        );
    }
    let mut h = header(cli, Some(group));
    h.push("elements", ball.len());
    sink.emit("bicombing_stats", &h, body.as_bytes())?;
    Ok(pass)
}

/// Bicombing kernel over `ball`, or a user kernel CSV with its empirical
/// displacement constant.
pub(crate) fn build_kernel(
    cli: &Cli,
    group: &Group,
    ball: &CayleyBall,
    user: Option<&Path>,
) -> Result<(Kernel, String), CliError> {
    match user {
        Some(path) => {
            let k: Kernel = read_kernel_csv(read(path)?.as_bytes(), ball.elements().to_vec())?;
            let m = ball_displacement_constant(&k, group)?;
            Ok((
                k.with_displacement_constant(m),
                format!("user:{}", path.display()),
            ))
        }
        None => {
            let kind = kinds(&cli.config, group, false)[0];
            let b = Bicombing::new(group, kind)?;
            Ok((kernel_from_bicombing(&b, ball)?, kind.to_string()))
        }
    }
}

fn opnorm(
    cli: &Cli,
    sink: &Sink,
    group: &Group,
    subspace_radius: usize,
    scan_radius: Option<usize>,
    optimizer: &OptimizerConfig,
    user: Option<&Path>,
) -> Outcome {
    let r = cli.config.radius;
    if subspace_radius == 0 || subspace_radius > r {
        return Err(CliError::Usage(format!(
            "subspace radius must lie in 1..={r} for a ball of radius {r}"
        )));
    }
    let scan = scan_radius.unwrap_or((r - subspace_radius).min(2));
    if scan + subspace_radius > r {
        return Err(CliError::Usage(format!(
            "translations of radius {scan} move the radius-{subspace_radius} subspace out of the radius-{r} ball"
        )));
    }
    let ball = group.ball(r)?;
    let (k, source) = build_kernel(cli, group, &ball, user)?;
    let upper = uniform_bound(k.displacement_constant())?;
    let support = ball.elements()[ball.sub_ball(subspace_radius)].to_vec();
    let mut rows = Vec::new();
    let mut pass = true;
    for s in &ball.elements()[ball.sub_ball(scan)] {
        let estimate = op_norm_lower_bound(&k, group, s, &support, optimizer)?;
        if estimate.best > upper + OPNORM_SLACK {
            pass = false;
            eprintln!(
                "violation: ||pi({})|| >= {} > {}",
                group.format(s),
                estimate.best,
                upper
            );
        }
        rows.push(OpNormRow {
            element: s.clone(),
            estimate,
            theoretical_upper: upper,
        });
    }
    let mut body = Vec::new();
    write_opnorm_csv(&rows, group, &mut body)?;
    let mut h = header(cli, Some(group));
    h.push("kernel", source)
        .push("displacement_constant", k.displacement_constant())
        .push("subspace_radius", subspace_radius)
        .push("scan_radius", scan)
        .push("restarts", optimizer.restarts)
        .push("iterations", optimizer.iterations)
        .push("decay_every", optimizer.decay_every);
    sink.emit("opnorm", &h, &body)?;
    let best = rows
        .iter()
        .map(|r| r.estimate.best)
        .fold(f64::NEG_INFINITY, f64::max);
    eprintln!(
        "largest lower bound {best} against uniform bound {upper} over {} translations",
        rows.len()
    );
    Ok(pass)
}

fn norms(cli: &Cli, sink: &Sink, group: &Group, user: Option<&Path>) -> Outcome {
    let ball = group.ball(cli.config.radius)?;
    let (k, source) = build_kernel(cli, group, &ball, user)?;
    let report = properness_report(&k)?;
    let mut body = Vec::new();
    write_norm_csv(&report, group, &mut body)?;
    let mut h = header(cli, Some(group));
    h.push("kernel", source)
        .push("lower_bound_enforced", report.lower_bound_enforced)
        .push("violations", report.violations.len());
    sink.emit("norms", &h, &body)?;
    for s in &report.violations {
        eprintln!("violation: ||b({})||_E below sqrt(d) + 2", group.format(s));
    }
    eprintln!(
        "{} rows, {} violations",
        report.rows.len(),
        report.violations.len()
    );
    Ok(report.violations.is_empty())
}

fn load_action(group: &Group, path: &Path) -> Result<TreeActionSpec, CliError> {
    Ok(parse_action(&read(path)?, group.presentation())?)
}

fn action_growth(
    cli: &Cli,
    sink: &Sink,
    group: &Group,
    path: &Path,
    generators: Option<&str>,
) -> Outcome {
    let action = load_action(group, path)?;
    let ball = group.ball(cli.config.radius)?;
    let k: Kernel = orbit_kernel(&action, &ball);
    let subset: Option<Vec<usize>> = match generators {
        None => None,
        Some(gens) => {
            let p = group.presentation();
            let allowed: Vec<usize> = gens
                .chars()
                .map(|c| {
                    p.letter(c)
                        .map(|l| l.generator())
                        .ok_or_else(|| CliError::Usage(format!("{c:?} is not a generator")))
                })
                .collect::<Result<_, _>>()?;
            Some(
                (0..k.len())
                    .filter(|&i| {
                        k.element(i)
                            .letters()
                            .iter()
                            .all(|l| allowed.contains(&l.generator()))
                    })
                    .collect(),
            )
        }
    };
    let report = orbit_growth_report(&k, subset.as_deref())?;
    let mut body = String::from("sphere,elements,max_norm_E,fit\n");
    for s in &report.spheres {
        let fit = (report.fitted_c * s.radius as f64).sqrt() + 2.0;
        body.push_str(&format!(
            "{},{},{},{}\n",
            s.radius, s.elements, s.max_norm_e, fit
        ));
    }
    let mut h = header(cli, Some(group));
    h.push("action", action.describe())
        .push("restricted_to", generators.unwrap_or("all"))
        .push("displacement_constant", k.displacement_constant())
        .push("fitted_c", report.fitted_c)
        .push("verdict", report.verdict);
    sink.emit("action", &h, body.as_bytes())?;
    let mut norms = Vec::new();
    write_norm_csv(&report.norms, group, &mut norms)?;
    sink.emit("action_norms", &h, &norms)?;
    eprintln!("fitted c = {}: {}", report.fitted_c, report.verdict);
    Ok(true)
}

fn dump_kernel(cli: &Cli, sink: &Sink, group: &Group, action: Option<&Path>) -> Outcome {
    let ball = group.ball(cli.config.radius)?;
    let (k, source) = match action {
        Some(path) => {
            let a = load_action(group, path)?;
            (orbit_kernel(&a, &ball), a.describe())
        }
        None => build_kernel(cli, group, &ball, None)?,
    };
    let mut body = Vec::new();
    write_kernel_csv(&k, &mut body)?;
    let mut h = header(cli, Some(group));
    h.push("kernel", source)
        .push("provenance", k.provenance())
        .push("displacement_constant", k.displacement_constant())
        .push("elements", k.len());
    sink.emit("kernel", &h, &body)?;
    Ok(true)
}

fn quasitree(cli: &Cli, sink: &Sink, input: &Path) -> Outcome {
    let q = parse_quasitree_kernel(&read(input)?)?;
    let group = match &cli.config.presentation {
        Some(_) => Some(load_group(&cli.config, cli.config.radius)?),
        None => None,
    };
    let verdict = validate_quasitree_kernel(&q, group.as_ref())?;
    let mut body = String::from("check,status,detail\n");
    let status = |ok: bool| if ok { "pass" } else { "fail" };
    let sandwich = match verdict.sandwich_violations.first() {
        None => format!("{} points", q.len()),
        Some(v) => format!("{}|{} d={} K={}", v.x, v.y, v.d, v.k),
    };
    body.push_str(&format!(
        "sandwich,{},{}\n",
        status(verdict.sandwich_violations.is_empty()),
        sandwich
    ));
    let cnd = match &verdict.cnd_witness {
        None => format!("min_eigenvalue={}", verdict.min_eigenvalue),
        Some(v) => {
            let terms: Vec<String> = v.iter().map(|(x, a)| format!("{x}:{a}")).collect();
            format!(
                "min_eigenvalue={} witness={}",
                verdict.min_eigenvalue,
                terms.join("|")
            )
        }
    };
    body.push_str(&format!(
        "cnd,{},{}\n",
        status(verdict.cnd_witness.is_none()),
        cnd
    ));
    match verdict.derived_displacement {
        Some(m) => {
            let detail = match &verdict.displacement_witness {
                None => format!("max_excess={m}"),
                Some((s, x, y)) => format!("max_excess={m} s={s} x={x} y={y}"),
            };
            body.push_str(&format!(
                "displacement,{},{}\n",
                status(verdict.displacement_witness.is_none()),
                detail
            ));
        }
        None => body.push_str(&format!("displacement,declared,delta={}\n", q.delta())),
    }
    let mut h = header(cli, group.as_ref());
    h.push("input", input.display()).push("delta", q.delta());
    sink.emit("quasitree", &h, body.as_bytes())?;
    eprintln!(
        "quasi-tree kernel {}",
        if verdict.pass { "accepted" } else { "rejected" }
    );
    Ok(verdict.pass)
}
