use std::fs::File;
use std::io::{BufWriter, Write};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use unionscope::ball_union::Branch;
use unionscope::coverage::greedy_max_coverage;
use unionscope::estimator::{approximate_union, EstimatorOptions, Guarantee, UnionEstimate};
use unionscope::instance::Instance;
use unionscope::lattice::count::count_lattice_points;
use unionscope::lattice::sample::{BigBallSampler, FreeBallSampler, SamplerConfig, SmallBallSampler};
use unionscope::lattice::{parse_rational, parse_structured_center, point_element, BallSpec, FreeBall, Lambda};
use unionscope::reference::{ball_union_points, enumerate_ball, exact_greedy_coverage, exact_union, exhaustive_max_coverage};
use unionscope::schedule::{ParameterSchedule, SampleScale, ScheduleInput};
use unionscope::{Error, Result, SeedTree, SCHEMA_VERSION};

use crate::{BenchArgs, CountArgs, CoverageArgs, EstimateArgs, OracleCommand, SampleArgs, ScaleArgs, ScheduleArgs};

fn emit<T: Serialize>(v: &T) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn options(s: &ScaleArgs, record: bool) -> EstimatorOptions {
    EstimatorOptions {
        scale: SampleScale {
            samples: s.sample_scale,
            indices: s.index_scale,
        },
        target: s.target_h1.zip(s.target_f6),
        query_cap: s.query_cap,
        record_requests: record,
    }
}

fn csv_list<T: std::str::FromStr>(s: &str, name: &'static str) -> Result<Vec<T>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Error::InvalidParameter {
                    name,
                    reason: format!("cannot parse `{x}`"),
                })
        })
        .collect()
}

pub fn schedule(a: ScheduleArgs) -> Result<()> {
    let input = ScheduleInput::new(a.m, a.epsilon, a.gamma)
        .c1(a.c1)
        .thickness(a.z_min.unwrap_or(1.0), a.z_max.unwrap_or(a.m as f64));
    let sched = ParameterSchedule::build(input)?;
    let mut v = serde_json::to_value(&sched)?;
    v["round_bound"] = json!(sched.round_bound());
    v["schema"] = json!(SCHEMA_VERSION);
    emit(&v)
}

fn brute_union(inst: &Instance) -> Result<u64> {
    if let Some(sets) = inst.explicit_sets() {
        return exact_union(&sets, None);
    }
    let balls: Vec<_> = inst
        .ball_shapes()?
        .iter()
        .map(|s| (s.center_values(), s.radius_sq()))
        .collect();
    Ok(ball_union_points(&balls, None)?.len() as u64)
}

pub fn estimate(a: EstimateArgs, balls_only: bool) -> Result<()> {
    let inst = Instance::load(&a.instance)?;
    if balls_only {
        inst.ball_shapes()?;
    }
    if a.trials == 0 {
        return Err(Error::InvalidParameter {
            name: "trials",
            reason: "must be at least 1".into(),
        });
    }
    let root = SeedTree::new(a.seed.unwrap_or(inst.seed));
    let loaded = inst.oracle_list(a.alpha, a.beta, &root.child("oracles"))?;
    let list = &loaded.list;
    let sched = ParameterSchedule::build(ScheduleInput::new(list.len(), a.epsilon, a.gamma).c1(a.c1))?;
    let opts = options(&a.scale, a.transcript.is_some());
    let runs: Vec<UnionEstimate> = if a.trials == 1 {
        vec![approximate_union(list, &sched, &root.child("estimate"), &opts)?]
    } else {
        (0..a.trials)
            .into_par_iter()
            .map(|t| approximate_union(list, &sched, &root.child_indexed("trial", t), &opts))
            .collect::<Result<_>>()?
    };
    if let Some(path) = &a.transcript {
        let mut w = BufWriter::new(File::create(path)?);
        for (t, run) in runs.iter().enumerate() {
            for round in &run.transcripts {
                let mut v = serde_json::to_value(round)?;
                v["trial"] = json!(t);
                serde_json::to_writer(&mut w, &v)?;
                writeln!(w)?;
            }
        }
        w.flush()?;
    }
    let interval = Guarantee::new(a.epsilon, a.gamma, &list.bias());
    let mut out = json!({
        "schema": SCHEMA_VERSION,
        "interval": interval,
        "guaranteed": runs[0].guarantee.is_some(),
    });
    if loaded.branches.iter().any(Option::is_some) {
        let branches: Vec<Option<Branch>> = loaded.branches.clone();
        out["branches"] = serde_json::to_value(branches)?;
    }
    if a.trials == 1 {
        out["estimate"] = serde_json::to_value(&runs[0])?;
    } else {
        let values: Vec<f64> = runs.iter().map(|r| r.value).collect();
        out["trials"] = serde_json::to_value(&runs)?;
        out["mean"] = json!(values.iter().sum::<f64>() / values.len() as f64);
    }
    if a.check {
        let exact = brute_union(&inst)?;
        out["exact"] = json!(exact.to_string());
        out["inside"] = json!(runs.iter().filter(|r| interval.contains(r.value, exact as f64)).count());
    }
    emit(&out)
}

fn structured_ball(dim: usize, radius: &str, lambda: &str, l: u64, center: &str) -> Result<BallSpec> {
    let center = parse_structured_center(center)?;
    if center.len() != dim {
        return Err(Error::InvalidParameter {
            name: "center",
            reason: format!("{} coordinates for dim {dim}", center.len()),
        });
    }
    let r = parse_rational(radius)?;
    BallSpec::new(&r * &r, Lambda::parse(lambda)?, l, center)
}

pub fn count_ball(a: CountArgs) -> Result<()> {
    let ball = structured_ball(a.dim, &a.radius, &a.lambda, a.l, &a.center)?;
    let count = count_lattice_points(&ball)?;
    emit(&json!({ "count": count.to_string() }))
}

pub fn sample_ball(a: SampleArgs) -> Result<()> {
    let mut rng = SeedTree::new(a.seed).child("sample-ball").rng();
    let r = parse_rational(&a.radius)?;
    if let Some(fc) = &a.free_center {
        let alpha = a.alpha.ok_or_else(|| Error::InvalidParameter {
            name: "alpha",
            reason: "required with --free-center".into(),
        })?;
        let center = fc.split(',').map(|x| parse_rational(x.trim())).collect::<Result<Vec<_>>>()?;
        if center.len() != a.dim {
            return Err(Error::InvalidParameter {
                name: "free_center",
                reason: format!("{} coordinates for dim {}", center.len(), a.dim),
            });
        }
        let sampler = FreeBallSampler::new(FreeBall::new(center, r)?, alpha)?;
        let points = (0..a.n)
            .map(|_| sampler.sample(&mut rng).map(point_element))
            .collect::<Result<Vec<_>>>()?;
        return emit(&json!({
            "branch": "rejection",
            "alpha_prime": sampler.alpha_prime(),
            "failure_bound": sampler.failure_bound(),
            "stats": sampler.stats(),
            "points": points,
        }));
    }
    let center = a.center.as_deref().ok_or_else(|| Error::InvalidParameter {
        name: "center",
        reason: "give --center or --free-center".into(),
    })?;
    let ball = structured_ball(a.dim, &a.radius, &a.lambda, a.l, center)?;
    if let Some(alpha) = a.alpha {
        if !ball.is_lattice_centered() || !ball.center_values().iter().all(|c| c.is_integer()) {
            return Err(Error::Precondition("the biased sampler needs an integer center".into()));
        }
        let c = ball.center_values().iter().map(|c| c.to_integer()).collect();
        let sampler = BigBallSampler::new(c, ball.radius_sq.clone(), SamplerConfig::new(alpha, a.dim)?)?;
        let draws = (0..a.n).map(|_| sampler.sample(&mut rng)).collect::<Result<Vec<_>>>()?;
        return emit(&json!({
            "branch": "lattice",
            "points": draws.iter().map(|d| point_element(d.point.clone())).collect::<Vec<_>>(),
            "ln_probabilities": draws.iter().map(|d| d.ln_probability).collect::<Vec<_>>(),
        }));
    }
    let sampler = SmallBallSampler::new(ball)?;
    let draws = (0..a.n).map(|_| sampler.sample(&mut rng)).collect::<Result<Vec<_>>>()?;
    emit(&json!({
        "branch": "exact",
        "count": sampler.count().to_string(),
        "points": draws.iter().map(|d| point_element(d.point.clone())).collect::<Vec<_>>(),
        "probabilities": draws.iter().map(|d| d.probability.to_string()).collect::<Vec<_>>(),
    }))
}

pub fn coverage(a: CoverageArgs) -> Result<()> {
    let inst = Instance::load(&a.instance)?;
    let root = SeedTree::new(a.seed.unwrap_or(inst.seed));
    let loaded = inst.oracle_list(a.alpha, a.beta, &root.child("oracles"))?;
    let r = greedy_max_coverage(&loaded.list, a.k, a.xi, a.gamma, &root.child("coverage"), &options(&a.scale, false))?;
    let mut v = serde_json::to_value(&r)?;
    v["schema"] = json!(SCHEMA_VERSION);
    emit(&v)
}

pub fn oracle(o: OracleCommand) -> Result<()> {
    match o {
        OracleCommand::Union { instance } => {
            let inst = Instance::load(instance)?;
            emit(&json!({ "exact": brute_union(&inst)?.to_string() }))
        }
        OracleCommand::Enumerate { center, radius } => {
            let center = center.split(',').map(|x| parse_rational(x.trim())).collect::<Result<Vec<_>>>()?;
            let r = parse_rational(&radius)?;
            let mut out = BufWriter::new(std::io::stdout().lock());
            for p in enumerate_ball(&center, &(&r * &r), None)? {
                serde_json::to_writer(&mut out, &point_element(p))?;
                writeln!(out)?;
            }
            out.flush()?;
            Ok(())
        }
        OracleCommand::Coverage { instance, k } => {
            let inst = Instance::load(instance)?;
            let sets = inst
                .explicit_sets()
                .ok_or_else(|| Error::Instance("coverage reference needs explicit sets".into()))?;
            let (oi, ov) = exhaustive_max_coverage(&sets, k)?;
            let (gi, gv) = exact_greedy_coverage(&sets, k)?;
            emit(&json!({
                "k": k,
                "opt": {"indices": oi, "value": ov.to_string()},
                "greedy": {"indices": gi, "value": gv.to_string()},
            }))
        }
        OracleCommand::Generate {
            m,
            universe,
            max_set,
            clustered,
            seed,
        } => emit(&Instance::synthetic(m, universe, max_set, clustered, seed)?),
    }
}

#[derive(Serialize)]
struct BenchRow {
    m: usize,
    epsilon: f64,
    c1: f64,
    rounds: u64,
    queries: u64,
    wall_ms: f64,
    rel_error: f64,
}

pub fn bench(a: BenchArgs) -> Result<()> {
    let ms: Vec<usize> = csv_list(&a.m, "m")?;
    let eps: Vec<f64> = csv_list(&a.epsilon, "epsilon")?;
    let c1s: Vec<f64> = csv_list(&a.c1, "c1")?;
    let opts = options(&a.scale, false);
    let mut rows = Vec::new();
    for &m in &ms {
        for &e in &eps {
            for &c1 in &c1s {
                let sched = ParameterSchedule::build(ScheduleInput::new(m, e, a.gamma).c1(c1))?;
                for t in 0..a.trials {
                    let seed = a.seed.wrapping_add(t);
                    let inst = Instance::synthetic(m, a.universe, (a.universe / 4).max(1), t % 2 == 1, seed)?;
                    let exact = brute_union(&inst)? as f64;
                    let root = SeedTree::new(seed);
                    let list = inst.oracle_list(0.2, 0.2, &root.child("oracles"))?.list;
                    let start = Instant::now();
                    let r = approximate_union(&list, &sched, &root.child("estimate"), &opts)?;
                    rows.push(BenchRow {
                        m,
                        epsilon: e,
                        c1,
                        rounds: r.rounds,
                        queries: r.membership_queries,
                        wall_ms: start.elapsed().as_secs_f64() * 1e3,
                        rel_error: (r.value - exact).abs() / exact,
                    });
                }
            }
        }
    }
    let sink: Box<dyn Write> = match &a.out {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(std::io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(std::io::Error::other(e)))?;
    }
    w.flush()?;
    Ok(())
}
