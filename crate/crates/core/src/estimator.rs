//! The staged union estimator.
//!
//! A pool `R₁` of `h₁` random choices is drawn in one round. Each later
//! round draws `u_i` random set indices `H_i`, measures `S(x, H_i)` for every
//! pooled sample, and retires the samples whose estimated thickness clears
//! the current threshold, crediting each with `u_i / (S·m) ≈ 1/T(x)`. The
//! threshold drops by `f₁(m)` per stage, so thick elements are settled early
//! with few indices and thin ones late on a subsampled pool.
//!
//! The credited sum approximates `h₁ · |∪A_i| / M`, so the returned value is
//! `sum · M / h₁`.

use std::collections::HashMap;
use std::sync::Arc;

use rand::seq::index;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::element::ElementId;
use crate::error::{Error, Result};
use crate::oracle::{BiasSpec, OracleList};
use crate::rng::{SeedTree, StreamRng};
use crate::rounds::{RoundHarness, RoundRequest, RoundTranscript, DEFAULT_QUERY_CAP};
use crate::schedule::{ParameterSchedule, SampleScale};

/// A distinct pooled element and how many pool positions hold it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedSample {
    pub element: ElementId,
    pub multiplicity: u64,
}

#[derive(Clone, Debug)]
pub struct EstimatorOptions {
    pub scale: SampleScale,
    /// `(h₁, f₆)` targets; when set, the scale is recomputed for each
    /// schedule and `scale` is ignored.
    pub target: Option<(f64, f64)>,
    pub query_cap: u64,
    /// Keep full round requests in the transcript (needed for replay).
    pub record_requests: bool,
}

impl Default for EstimatorOptions {
    fn default() -> Self {
        EstimatorOptions {
            scale: SampleScale::FULL,
            target: None,
            query_cap: DEFAULT_QUERY_CAP,
            record_requests: false,
        }
    }
}

impl EstimatorOptions {
    pub fn scaled(scale: SampleScale) -> Self {
        EstimatorOptions {
            scale,
            ..Self::default()
        }
    }

    pub fn targeting(h1: f64, f6: f64) -> Self {
        EstimatorOptions {
            target: Some((h1, f6)),
            ..Self::default()
        }
    }

    pub fn scale_for(&self, sched: &ParameterSchedule) -> SampleScale {
        match self.target {
            Some((h1, f6)) => SampleScale::targeting(sched, h1, f6),
            None => self.scale,
        }
    }
}

/// Multiplicative interval `[lower·U, upper·U]` promised around the true
/// union size `U`, with probability at least `1 - gamma`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Guarantee {
    pub lower: f64,
    pub upper: f64,
    pub gamma: f64,
}

impl Guarantee {
    pub fn new(epsilon: f64, gamma: f64, bias: &BiasSpec) -> Self {
        Guarantee {
            lower: (1.0 - epsilon) * (1.0 - bias.alpha_l) * (1.0 - bias.beta_l),
            upper: (1.0 + epsilon) * (1.0 + bias.alpha_r) * (1.0 + bias.beta_r),
            gamma,
        }
    }

    pub fn contains(&self, estimate: f64, truth: f64) -> bool {
        estimate >= self.lower * truth && estimate <= self.upper * truth
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageSummary {
    pub stage: u64,
    pub current_thickness: f64,
    pub s: f64,
    pub s_prime: f64,
    pub u: u64,
    pub pool: u64,
    pub distinct: u64,
    pub retired: u64,
    pub threshold: f64,
    pub contribution: f64,
    pub h_next: f64,
    pub a: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnionEstimate {
    pub schema: String,
    pub value: f64,
    pub sum: f64,
    pub total_size: f64,
    pub h1: u64,
    pub stages: u64,
    pub rounds: u64,
    pub round_bound: u64,
    /// True when the pool emptied before the thickness fell below `z_min`.
    pub early_stop: bool,
    pub samples_drawn: u64,
    pub membership_queries: u64,
    pub physical_queries: u64,
    pub scale: SampleScale,
    pub bias: BiasSpec,
    pub guarantee: Option<Guarantee>,
    pub schedule: ParameterSchedule,
    pub stage_log: Vec<StageSummary>,
    #[serde(skip)]
    pub transcripts: Vec<RoundTranscript>,
}

/// Exact thickness `T(x, L)` by one membership query per set.
pub fn thickness(x: &ElementId, list: &OracleList) -> u64 {
    let q = [x.clone()];
    list.oracles()
        .iter()
        .filter(|o| o.contains_batch(&q)[0])
        .count() as u64
}

/// `S(x, H)`: indices in `H` (with multiplicity) whose set contains `x`.
pub fn estimate_s(x: &ElementId, h: &[usize], list: &OracleList) -> u64 {
    let q = [x.clone()];
    h.iter().filter(|&&i| list.oracle(i).contains_batch(&q)[0]).count() as u64
}

/// Counts of `u` uniform draws from `{0..m}`, i.e. a multinomial sample.
pub fn draw_index_counts(u: u64, m: usize, rng: &mut StreamRng) -> Vec<u64> {
    let mut counts = vec![0u64; m];
    if u <= 4 * m as u64 {
        for _ in 0..u {
            counts[rng.gen_range(0..m)] += 1;
        }
        return counts;
    }
    let mut left = u;
    for (i, c) in counts.iter_mut().enumerate() {
        let rest = m - i;
        if rest == 1 {
            *c = left;
            break;
        }
        if left == 0 {
            break;
        }
        let k = Binomial::new(left, 1.0 / rest as f64)
            .expect("valid binomial")
            .sample(rng);
        *c = k;
        left -= k;
    }
    counts
}

fn collapse(pool: &[ElementId]) -> (Vec<WeightedSample>, Vec<usize>) {
    let mut slot: HashMap<&ElementId, usize> = HashMap::with_capacity(pool.len());
    let mut distinct: Vec<WeightedSample> = Vec::new();
    let mut position_slot = Vec::with_capacity(pool.len());
    for x in pool {
        let k = *slot.entry(x).or_insert_with(|| {
            distinct.push(WeightedSample {
                element: x.clone(),
                multiplicity: 0,
            });
            distinct.len() - 1
        });
        distinct[k].multiplicity += 1;
        position_slot.push(k);
    }
    (distinct, position_slot)
}

pub fn approximate_union(
    list: &OracleList,
    sched: &ParameterSchedule,
    seeds: &SeedTree,
    opts: &EstimatorOptions,
) -> Result<UnionEstimate> {
    if list.len() != sched.m {
        return Err(Error::invalid(
            "m",
            format!("schedule built for m = {}, list has {} sets", sched.m, list.len()),
        ));
    }
    let scale = opts.scale_for(sched);
    scale.validate()?;
    let m = sched.m;
    let mf = m as f64;
    let f1 = sched.f1;
    let f6 = scale.f6(sched);
    let h1 = scale.h1(sched);
    if h1 > opts.query_cap {
        return Err(Error::CapExceeded {
            what: format!("initial pool of {h1} random choices"),
            cap: opts.query_cap,
        });
    }
    let round_bound = sched.round_bound();

    let mut server = seeds.child("server").rng();
    let mut harness = RoundHarness::new(list, seeds.child("clients"))
        .with_cap(opts.query_cap)
        .recording(opts.record_requests);

    // Round 1: choose set indices server-side, ask each client for its share.
    let choices: Vec<usize> = (0..h1).map(|_| list.choose_set(&mut server)).collect();
    let mut req = RoundRequest::new(m);
    for &i in &choices {
        req.per_oracle[i].samples += 1;
    }
    let answers = harness.execute(req)?;
    let mut queues: Vec<std::vec::IntoIter<ElementId>> = answers
        .per_oracle
        .into_iter()
        .map(|a| a.samples.into_iter())
        .collect();
    let mut pool: Vec<ElementId> = choices
        .iter()
        .map(|&i| queues[i].next().ok_or_else(|| Error::Internal("client returned too few samples".into())))
        .collect::<Result<_>>()?;
    let samples_drawn = h1;

    let mut ct = sched.z_max;
    let mut s = mf / ct;
    let mut s_prime = 1.0f64;
    let mut sum = 0.0f64;
    let mut stages = 0u64;
    let mut logical = 0u64;
    let mut physical = 0u64;
    let mut early_stop = false;
    let mut stage_log = Vec::new();

    loop {
        if pool.is_empty() {
            early_stop = true;
            break;
        }
        let u = ((s * f6).ceil() as u64).max(1);
        let counts = draw_index_counts(u, m, &mut server);
        let (distinct, position_slot) = collapse(&pool);
        let batch: Arc<[ElementId]> = distinct.iter().map(|w| w.element.clone()).collect();

        let stage_logical = (pool.len() as u64).saturating_mul(u);
        let mut req = RoundRequest::new(m);
        for (i, &c) in counts.iter().enumerate() {
            if c > 0 {
                req.per_oracle[i].queries = batch.clone();
            }
        }
        req.logical_queries = stage_logical;
        physical += req.physical_queries();
        let answers = harness.execute(req)?;
        logical = logical.saturating_add(stage_logical);

        let mut s_val = vec![0u64; distinct.len()];
        for (i, a) in answers.per_oracle.iter().enumerate() {
            if counts[i] == 0 {
                continue;
            }
            for (k, &hit) in a.members.iter().enumerate() {
                if hit {
                    s_val[k] += counts[i];
                }
            }
        }

        let threshold = ct / (2.0 * f1 * mf) * u as f64;
        let uf = u as f64;
        let mut credit = 0.0f64;
        let mut retired = 0u64;
        let mut rest: Vec<ElementId> = Vec::new();
        for (pos, x) in pool.iter().enumerate() {
            let sx = s_val[position_slot[pos]];
            if sx as f64 >= threshold {
                if sx == 0 {
                    return Err(Error::Internal(format!(
                        "S(x, H) = 0 cleared threshold {threshold} at stage {}",
                        stages + 1
                    )));
                }
                credit += uf / (sx as f64 * mf);
                retired += 1;
            } else {
                rest.push(x.clone());
            }
        }
        let contribution = s_prime * credit;
        sum += contribution;

        let stage_ct = ct;
        let stage_s = s;
        let stage_s_prime = s_prime;
        ct /= f1;
        s = mf / ct;
        let h_next = h1 as f64 / s;
        let a = if (rest.len() as f64) < h_next {
            1.0
        } else {
            let k = h_next.ceil() as usize;
            let n = rest.len();
            let picked = index::sample(&mut server, n, k);
            let mut keep: Vec<usize> = picked.into_vec();
            keep.sort_unstable();
            rest = keep.into_iter().map(|p| rest[p].clone()).collect();
            n as f64 / k as f64
        };
        s_prime *= a;
        stages += 1;
        stage_log.push(StageSummary {
            stage: stages,
            current_thickness: stage_ct,
            s: stage_s,
            s_prime: stage_s_prime,
            u,
            pool: pool.len() as u64,
            distinct: distinct.len() as u64,
            retired,
            threshold,
            contribution,
            h_next,
            a,
        });
        pool = rest;
        if stages > round_bound {
            return Err(Error::Internal(format!(
                "stage count {stages} exceeds round bound {round_bound}"
            )));
        }
        if ct < sched.z_min {
            break;
        }
    }

    let rounds = harness.rounds();
    if rounds != stages + 1 {
        return Err(Error::Internal(format!("{rounds} rounds for {stages} stages")));
    }
    let bias = list.bias();
    let value = sum * list.total_size() / h1 as f64;
    Ok(UnionEstimate {
        schema: crate::SCHEMA_VERSION.to_string(),
        value,
        sum,
        total_size: list.total_size(),
        h1,
        stages,
        rounds,
        round_bound,
        early_stop,
        samples_drawn,
        membership_queries: logical,
        physical_queries: physical,
        scale,
        bias,
        guarantee: scale
            .is_full()
            .then(|| Guarantee::new(sched.epsilon, sched.gamma, &bias)),
        schedule: sched.clone(),
        stage_log,
        transcripts: harness.into_transcripts(),
    })
}
