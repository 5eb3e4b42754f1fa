use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};

use dirbreak_core::io::read_sample_file;
use dirbreak_core::measure::{Continuous, Parts};
use dirbreak_core::sampling::sample;
use dirbreak_core::{
    breakdown_report, definability_bounds, finite_sample_breakdown, flip_threshold_circular_mean,
    invariant_set_distance_involution, kuiper, residual_symmetrize, symmetrize, tv, Direction,
    Error, FiniteSubgroup, Functional, MeanDirection, Measure, MetricKind, SearchParams, Space,
};

use crate::error::CliError;
use crate::output::{angle_value, direction, opt, prob, real, Report, Table};
use crate::{Args, Command};

struct Loaded {
    measure: Measure,
    /// Present when the measure is an empirical sample.
    points: Option<Vec<Direction>>,
}

fn load(args: &Args) -> Result<Loaded, CliError> {
    if let Some(path) = &args.input {
        let s = read_sample_file(path, args.degrees)?;
        return Ok(Loaded {
            measure: Measure::empirical(&s.points)?,
            points: Some(s.points),
        });
    }
    let parsed = args
        .dist_spec()?
        .ok_or_else(|| CliError::Input("one of --input or --dist is required".into()))?;
    let law = parsed.measure(args.degrees)?;
    match args.sample {
        Some(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let points = sample(&mut rng, &law, n)?;
            Ok(Loaded {
                measure: Measure::empirical(&points)?,
                points: Some(points),
            })
        }
        None => Ok(Loaded {
            measure: law,
            points: None,
        }),
    }
}

fn group(space: Space, k: u32) -> Result<FiniteSubgroup, CliError> {
    match space {
        Space::Circle => Ok(FiniteSubgroup::cyclic(k)?),
        Space::Sphere if k == 2 => Ok(FiniteSubgroup::antipodal(Space::Sphere)),
        Space::Sphere => Err(CliError::Input(format!(
            "only the antipodal group (k = 2) is available on the sphere, got k = {k}"
        ))),
    }
}

fn space_name(space: Space) -> Value {
    Value::from(match space {
        Space::Circle => "circle",
        Space::Sphere => "sphere",
    })
}

fn seed_hex(seed: u64) -> Value {
    Value::from(format!("{seed:#x}"))
}

fn config(command: Command, args: &Args) -> Map<String, Value> {
    let mut c = Map::new();
    c.insert("command".into(), Value::from(command.name()));
    c.insert(
        "input".into(),
        opt(args
            .input
            .as_ref()
            .map(|p| Value::from(p.display().to_string()))),
    );
    c.insert("dist".into(), opt(args.dist.clone().map(Value::from)));
    c.insert("sample".into(), opt(args.sample.map(Value::from)));
    c.insert("metric".into(), Value::from(args.metric().to_string()));
    c.insert("k".into(), Value::from(args.k));
    c.insert("degrees".into(), Value::from(args.degrees));
    c.insert("seed".into(), seed_hex(args.seed));
    if command == Command::Breakdown {
        c.insert("eps_steps".into(), Value::from(args.eps_steps));
        c.insert("locations".into(), Value::from(args.locations));
    }
    if command == Command::Sweep {
        c.insert(
            "kappas".into(),
            Value::Array(args.kappas.iter().map(|&x| real(x)).collect()),
        );
    }
    c
}

pub fn run(command: Command, args: &Args) -> Result<Report, CliError> {
    let (fields, table) = match command {
        Command::Mean => mean(args)?,
        Command::Breakdown => breakdown(args)?,
        Command::Bounds => bounds(args)?,
        Command::Symmetrize => symmetrized(args)?,
        Command::Fsbp => fsbp(args)?,
        Command::Sweep => sweep(args)?,
    };
    Ok(Report {
        command: command.name(),
        config: config(command, args),
        fields,
        table,
    })
}

type Output = (Map<String, Value>, Option<Table>);

fn mean(args: &Args) -> Result<Output, CliError> {
    let data = load(args)?;
    let space = data.measure.space();
    let estimate = MeanDirection::for_space(space).evaluate(&data.measure);
    let r = data.measure.resultant();
    let mut f = Map::new();
    f.insert("space".into(), space_name(space));
    f.insert(
        "n".into(),
        opt(data.points.as_ref().map(|p| Value::from(p.len()))),
    );
    f.insert("defined".into(), Value::from(estimate.is_defined()));
    f.insert(
        "direction".into(),
        opt(estimate.direction().map(|d| direction(&d, args.degrees))),
    );
    f.insert("resultant_length".into(), prob(r.length));
    Ok((f, None))
}

fn search(args: &Args) -> SearchParams {
    SearchParams {
        eps_steps: args.eps_steps,
        locations: args.locations,
        ..SearchParams::default()
    }
}

fn breakdown(args: &Args) -> Result<Output, CliError> {
    let data = load(args)?;
    let p = &data.measure;
    let t = MeanDirection::for_space(p.space());
    let g = group(p.space(), args.k)?;
    let r = breakdown_report(&t, p, args.metric(), &g, &search(args), args.seed)?;
    let deg = args.degrees;
    let mut f = Map::new();
    f.insert("functional".into(), Value::from(r.functional));
    f.insert("metric".into(), Value::from(r.metric.to_string()));
    f.insert("bias_breakdown".into(), opt(r.bias_breakdown.map(prob)));
    f.insert(
        "contamination_mass".into(),
        opt(r.contamination_mass.map(prob)),
    );
    f.insert(
        "contamination_location".into(),
        opt(r.contamination_location.map(|a| angle_value(a, deg))),
    );
    f.insert("bound_uniform".into(), prob(r.bound_uniform));
    f.insert("bound_symmetrized".into(), prob(r.bound_symmetrized));
    f.insert("bound_group".into(), prob(r.bound_group));
    f.insert("group_order".into(), Value::from(r.group_order));
    f.insert("eps_step".into(), prob(r.eps_step));
    f.insert("location_step".into(), angle_value(r.location_step, deg));
    f.insert("angle_tol".into(), angle_value(r.angle_tol, deg));
    f.insert(
        "definability_exact".into(),
        Value::from(r.definability_exact),
    );
    f.insert("seed".into(), seed_hex(r.seed));
    Ok((f, None))
}

fn bounds(args: &Args) -> Result<Output, CliError> {
    let data = load(args)?;
    let p = &data.measure;
    let t = MeanDirection::for_space(p.space());
    let g = group(p.space(), args.k)?;
    let kind = args.metric();
    let b = definability_bounds(&t, p, kind, &g)?;
    // Under total variation and an involution the distance to the invariant set is exact.
    let invariant = if kind == MetricKind::TotalVariation && g.order() == 2 {
        Some(invariant_set_distance_involution(p, g.generator())?)
    } else {
        None
    };
    let mut f = Map::new();
    f.insert("functional".into(), Value::from(t.name()));
    f.insert("metric".into(), Value::from(kind.to_string()));
    f.insert("bound_uniform".into(), prob(b.bound_uniform));
    f.insert("bound_symmetrized".into(), prob(b.bound_symmetrized));
    f.insert("bound_group".into(), prob(b.bound_group));
    f.insert("group_order".into(), Value::from(g.order()));
    f.insert("invariant_distance".into(), opt(invariant.map(prob)));
    f.insert("definability_exact".into(), Value::from(false));
    Ok((f, None))
}

fn component_rows(label: &str, parts: &Parts, degrees: bool, rows: &mut Vec<Vec<Value>>) {
    for (d, w) in &parts.atoms {
        rows.push(vec![
            Value::from(label),
            Value::from("atom"),
            direction(d, degrees),
            Value::Null,
            Value::Null,
            prob(*w),
        ]);
    }
    for (c, w) in &parts.continuous {
        let (kind, mu, kappa) = match c {
            Continuous::VonMises(vm) => {
                ("von_mises", angle_value(vm.mu(), degrees), real(vm.kappa()))
            }
            Continuous::Uniform(_) => ("uniform", Value::Null, Value::Null),
        };
        rows.push(vec![
            Value::from(label),
            Value::from(kind),
            Value::Null,
            mu,
            kappa,
            prob(*w),
        ]);
    }
}

fn symmetrized(args: &Args) -> Result<Output, CliError> {
    let data = load(args)?;
    let g = group(data.measure.space(), args.k)?;
    let sym = symmetrize(&data.measure, &g)?;
    let residual = residual_symmetrize(&data.measure, &g)?;
    let mut rows = Vec::new();
    component_rows("symmetrized", &sym.parts(), args.degrees, &mut rows);
    component_rows("residual", &residual.parts(), args.degrees, &mut rows);
    let mut f = Map::new();
    f.insert("group_order".into(), Value::from(g.order()));
    let table = Table {
        columns: vec!["measure", "kind", "direction", "mu", "kappa", "weight"],
        rows,
    };
    Ok((f, Some(table)))
}

fn fsbp(args: &Args) -> Result<Output, CliError> {
    let data = load(args)?;
    let points = data.points.ok_or_else(|| {
        CliError::Input("fsbp needs a sample: use --input, or --dist with --sample N".into())
    })?;
    let b = finite_sample_breakdown(&points)?;
    let mut f = Map::new();
    f.insert("n".into(), Value::from(b.n));
    f.insert("replaced".into(), opt(b.replaced.map(Value::from)));
    f.insert("fraction".into(), opt(b.fraction().map(prob)));
    f.insert("exact".into(), Value::from(b.exact));
    Ok((f, None))
}

fn sweep(args: &Args) -> Result<Output, CliError> {
    if args.kappas.is_empty() {
        return Err(CliError::Input("empty kappa grid".into()));
    }
    let u = Measure::uniform(Space::Circle);
    let g = FiniteSubgroup::cyclic(args.k)?;
    let mut rows = Vec::new();
    for &kappa in &args.kappas {
        let p = Measure::von_mises(0.0, kappa)?;
        let flip = match flip_threshold_circular_mean(&p) {
            Ok(f) => Some(f),
            Err(Error::OutsideDomain { .. }) => None,
            Err(e) => return Err(e.into()),
        };
        rows.push(vec![
            real(kappa),
            opt(flip.map(prob)),
            prob(kuiper(&p, &u)?),
            prob(tv(&p, &symmetrize(&p, &g)?)?),
        ]);
    }
    let table = Table {
        columns: vec![
            "kappa",
            "flip_threshold",
            "kuiper_to_uniform",
            "tv_symmetrized_bound",
        ],
        rows,
    };
    Ok((Map::new(), Some(table)))
}
