//! Browser bindings. Every export takes plain numbers or strings and
//! returns a JSON string, so the page needs no glue beyond `JSON.parse`.

use serde_json::json;
use wasm_bindgen::prelude::*;

use unionscope::estimator::Guarantee;
use unionscope::instance::Instance;
use unionscope::lattice::count::count_lattice_points;
use unionscope::lattice::sample::{FreeBallSampler, SmallBallSampler};
use unionscope::lattice::{parse_rational, parse_structured_center, point_element, BallSpec, FreeBall, Lambda};
use unionscope::reference::{ball_union_points, exact_union};
use unionscope::{approximate_union, EstimatorOptions, ParameterSchedule, SeedTree};
use unionscope::schedule::ScheduleInput;

type Out = Result<String, String>;

fn err(e: unionscope::Error) -> String {
    e.to_string()
}

pub fn count_ball_json(radius: &str, lambda: &str, l: u64, center: &str) -> Out {
    let r = parse_rational(radius).map_err(err)?;
    let center = parse_structured_center(center).map_err(err)?;
    let ball = BallSpec::new(&r * &r, Lambda::parse(lambda).map_err(err)?, l, center).map_err(err)?;
    let count = count_lattice_points(&ball).map_err(err)?;
    Ok(json!({ "count": count.to_string() }).to_string())
}

/// Integer centers are sampled exactly; anything else goes through the
/// rejection sampler with bias target `alpha`.
pub fn sample_disc_json(cx: &str, cy: &str, radius: &str, n: u32, alpha: f64, seed: u64) -> Out {
    let mut rng = SeedTree::new(seed).child("demo").rng();
    let c = [parse_rational(cx).map_err(err)?, parse_rational(cy).map_err(err)?];
    let r = parse_rational(radius).map_err(err)?;
    if c.iter().all(|x| x.is_integer()) {
        let center = format!("{},{}", c[0], c[1]);
        let ball = BallSpec::new(&r * &r, Lambda::parse("0").map_err(err)?, 0, parse_structured_center(&center).map_err(err)?)
            .map_err(err)?;
        let s = SmallBallSampler::new(ball).map_err(err)?;
        let pts = (0..n)
            .map(|_| s.sample(&mut rng).map(|d| point_element(d.point)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        return Ok(json!({"branch": "exact", "count": s.count().to_string(), "points": pts}).to_string());
    }
    let s = FreeBallSampler::new(FreeBall::new(c.to_vec(), r).map_err(err)?, alpha).map_err(err)?;
    let pts = (0..n)
        .map(|_| s.sample(&mut rng).map(point_element))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    Ok(json!({"branch": "rejection", "stats": s.stats(), "alpha_prime": s.alpha_prime(), "points": pts}).to_string())
}

/// Runs the estimator on an instance document at a reduced sample scale and
/// compares against brute force when that is cheap.
pub fn estimate_union_json(instance: &str, epsilon: f64, seed: u64, target_h1: f64) -> Out {
    let inst = Instance::from_json(instance).map_err(err)?;
    let root = SeedTree::new(seed);
    let loaded = inst.oracle_list(0.2, 0.2, &root.child("oracles")).map_err(err)?;
    let gamma = 0.1;
    let sched = ParameterSchedule::build(ScheduleInput::new(loaded.list.len(), epsilon, gamma)).map_err(err)?;
    let opts = EstimatorOptions::targeting(target_h1, target_h1 / 4.0);
    let est = approximate_union(&loaded.list, &sched, &root.child("estimate"), &opts).map_err(err)?;
    let exact = match inst.explicit_sets() {
        Some(sets) => exact_union(&sets, Some(1_000_000)).ok(),
        None => inst.ball_shapes().ok().and_then(|shapes| {
            let balls: Vec<_> = shapes.iter().map(|s| (s.center_values(), s.radius_sq())).collect();
            ball_union_points(&balls, Some(1_000_000)).ok().map(|p| p.len() as u64)
        }),
    };
    Ok(json!({
        "estimate": est,
        "branches": loaded.branches,
        "interval": Guarantee::new(epsilon, gamma, &loaded.list.bias()),
        "exact": exact,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn count_ball(radius: &str, lambda: &str, l: u64, center: &str) -> Result<String, JsValue> {
    count_ball_json(radius, lambda, l, center).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn sample_disc(cx: &str, cy: &str, radius: &str, n: u32, alpha: f64, seed: u64) -> Result<String, JsValue> {
    sample_disc_json(cx, cy, radius, n, alpha, seed).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn estimate_union(instance: &str, epsilon: f64, seed: u64, target_h1: f64) -> Result<String, JsValue> {
    estimate_union_json(instance, epsilon, seed, target_h1).map_err(|e| JsValue::from_str(&e))
}
