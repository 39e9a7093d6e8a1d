//! Set oracles and oracle lists.
//!
//! An input set `A_i` is never read in full. It is reached only through an
//! approximate size `m_i`, a biased random generator and membership queries.
//! [`ExplicitSet`] is an in-memory realisation whose bias is injected at
//! construction so that its envelope is known exactly.

use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rand_distr::WeightedAliasIndex;
use serde::{Deserialize, Serialize};

use crate::element::ElementId;
use crate::error::{Error, Result};
use crate::rng::{SeedTree, StreamRng};

/// Sample and query counters of one oracle. Never reset implicitly.
#[derive(Debug, Default)]
pub struct Counters {
    samples: AtomicU64,
    queries: AtomicU64,
}

impl Counters {
    pub fn sample_count(&self) -> u64 {
        self.samples.load(Ordering::Relaxed)
    }

    pub fn query_count(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.samples.store(0, Ordering::Relaxed);
        self.queries.store(0, Ordering::Relaxed);
    }

    fn add_samples(&self, n: u64) {
        self.samples.fetch_add(n, Ordering::Relaxed);
    }

    fn add_queries(&self, n: u64) {
        self.queries.fetch_add(n, Ordering::Relaxed);
    }
}

/// Access contract for one input set.
///
/// Implementors provide the raw generator and membership test; callers use
/// [`SetOracle::random_element`] and [`SetOracle::contains_batch`], which
/// also maintain the instrumentation counters.
pub trait SetOracle: Send + Sync {
    /// Reported size `m_i`, fixed for the lifetime of the oracle.
    fn approx_size(&self) -> f64;

    fn draw(&self, rng: &mut StreamRng) -> Result<ElementId>;

    fn member(&self, x: &ElementId) -> bool;

    fn counters(&self) -> &Counters;

    /// Exact `|A_i|` when the oracle knows it (explicit sets do).
    fn exact_size(&self) -> Option<u64> {
        None
    }

    fn random_element(&self, rng: &mut StreamRng) -> Result<ElementId> {
        self.counters().add_samples(1);
        self.draw(rng)
    }

    fn contains_batch(&self, queries: &[ElementId]) -> Vec<bool> {
        self.counters().add_queries(queries.len() as u64);
        queries.iter().map(|q| self.member(q)).collect()
    }
}

/// `((α_L, α_R), (β_L, β_R))` bias declaration of an oracle list.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BiasSpec {
    pub alpha_l: f64,
    pub alpha_r: f64,
    pub beta_l: f64,
    pub beta_r: f64,
}

impl BiasSpec {
    pub const ZERO: BiasSpec = BiasSpec {
        alpha_l: 0.0,
        alpha_r: 0.0,
        beta_l: 0.0,
        beta_r: 0.0,
    };

    pub fn symmetric(alpha: f64, beta: f64) -> Self {
        BiasSpec {
            alpha_l: alpha,
            alpha_r: alpha,
            beta_l: beta,
            beta_r: beta,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("alpha_l", self.alpha_l),
            ("alpha_r", self.alpha_r),
            ("beta_l", self.beta_l),
            ("beta_r", self.beta_r),
        ] {
            if !(0.0..1.0).contains(&v) {
                return Err(Error::invalid(name, format!("{v} is not in [0, 1)")));
            }
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        *self == BiasSpec::ZERO
    }

    /// Component-wise maximum, used when oracles with different bias are
    /// mixed in one list.
    pub fn max(&self, other: &BiasSpec) -> BiasSpec {
        BiasSpec {
            alpha_l: self.alpha_l.max(other.alpha_l),
            alpha_r: self.alpha_r.max(other.alpha_r),
            beta_l: self.beta_l.max(other.beta_l),
            beta_r: self.beta_r.max(other.beta_r),
        }
    }
}

enum Generator {
    Uniform,
    Weighted(WeightedAliasIndex<f64>),
}

/// An explicit finite set with an injected, certified bias envelope.
pub struct ExplicitSet {
    elements: Vec<ElementId>,
    index: HashSet<ElementId>,
    probabilities: Option<Vec<f64>>,
    generator: Generator,
    reported_size: f64,
    counters: Counters,
}

impl std::fmt::Debug for ExplicitSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExplicitSet")
            .field("len", &self.elements.len())
            .field("reported_size", &self.reported_size)
            .finish()
    }
}

impl ExplicitSet {
    /// Unbiased set reporting its exact size.
    pub fn uniform<I: IntoIterator<Item = ElementId>>(elements: I) -> Result<Self> {
        Self::biased(elements, BiasSpec::ZERO, SeedTree::new(0))
    }

    /// Builds an oracle over the distinct `elements` whose reported size is
    /// drawn once from `[(1-β_L)n, (1+β_R)n]` and whose per-element
    /// probabilities lie in `[(1-α_L)/n, (1+α_R)/n]` and sum to one.
    pub fn biased<I: IntoIterator<Item = ElementId>>(
        elements: I,
        bias: BiasSpec,
        seeds: SeedTree,
    ) -> Result<Self> {
        bias.validate()?;
        let mut index = HashSet::new();
        let mut list = Vec::new();
        for e in elements {
            if index.insert(e.clone()) {
                list.push(e);
            }
        }
        if list.is_empty() {
            return Err(Error::EmptySet);
        }
        let n = list.len() as f64;

        let mut size_rng = seeds.child("size").rng();
        let reported_size = if bias.beta_l == 0.0 && bias.beta_r == 0.0 {
            n
        } else {
            size_rng.gen_range((1.0 - bias.beta_l) * n..=(1.0 + bias.beta_r) * n)
        };

        let (generator, probabilities) = if bias.alpha_l == 0.0 && bias.alpha_r == 0.0 {
            (Generator::Uniform, None)
        } else {
            let p = perturbed_probabilities(list.len(), &bias, &mut seeds.child("weights").rng())?;
            let alias = WeightedAliasIndex::new(p.clone())
                .map_err(|e| Error::Internal(format!("alias table: {e}")))?;
            (Generator::Weighted(alias), Some(p))
        };

        Ok(Self {
            elements: list,
            index,
            probabilities,
            generator,
            reported_size,
            counters: Counters::default(),
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ElementId] {
        &self.elements
    }

    /// Exact generator distribution, aligned with [`ExplicitSet::elements`].
    pub fn probabilities(&self) -> Vec<f64> {
        match &self.probabilities {
            Some(p) => p.clone(),
            None => vec![1.0 / self.elements.len() as f64; self.elements.len()],
        }
    }
}

/// Per-element factors in the envelope, recentred so they sum to `n`.
///
/// Raw factors `u_e` are drawn uniformly from `[1-α_L, 1+α_R]`; their
/// deviations from the sample mean are shrunk by the largest common factor
/// that keeps every weight inside the envelope. The result is verified and
/// redrawn if floating-point slop pushed a weight outside.
fn perturbed_probabilities(n: usize, bias: &BiasSpec, rng: &mut StreamRng) -> Result<Vec<f64>> {
    let lo = (1.0 - bias.alpha_l) / n as f64;
    let hi = (1.0 + bias.alpha_r) / n as f64;
    let tol = 1e-12 / n as f64;
    for _ in 0..64 {
        let raw: Vec<f64> = (0..n)
            .map(|_| rng.gen_range(1.0 - bias.alpha_l..=1.0 + bias.alpha_r))
            .collect();
        let mean = raw.iter().sum::<f64>() / n as f64;
        let mut shrink: f64 = 1.0;
        for u in &raw {
            let dev = u - mean;
            if dev > 0.0 {
                shrink = shrink.min(bias.alpha_r / dev);
            } else if dev < 0.0 {
                shrink = shrink.min(bias.alpha_l / -dev);
            }
        }
        let weights: Vec<f64> = raw.iter().map(|u| 1.0 + shrink * (u - mean)).collect();
        let total: f64 = weights.iter().sum();
        let p: Vec<f64> = weights.iter().map(|w| w / total).collect();
        if p.iter().all(|&x| x >= lo - tol && x <= hi + tol) {
            return Ok(p);
        }
    }
    Err(Error::Internal("bias injection left the envelope 64 times".into()))
}

impl SetOracle for ExplicitSet {
    fn approx_size(&self) -> f64 {
        self.reported_size
    }

    fn draw(&self, rng: &mut StreamRng) -> Result<ElementId> {
        let i = match &self.generator {
            Generator::Uniform => rng.gen_range(0..self.elements.len()),
            Generator::Weighted(alias) => alias.sample(rng),
        };
        Ok(self.elements[i].clone())
    }

    fn member(&self, x: &ElementId) -> bool {
        self.index.contains(x)
    }

    fn counters(&self) -> &Counters {
        &self.counters
    }

    fn exact_size(&self) -> Option<u64> {
        Some(self.elements.len() as u64)
    }
}

/// Ordered list of `m ≥ 2` oracles with total reported size `M = Σ m_i`.
#[derive(Clone)]
pub struct OracleList {
    oracles: Vec<Arc<dyn SetOracle>>,
    bias: BiasSpec,
    total: f64,
    chooser: WeightedIndex<f64>,
}

impl std::fmt::Debug for OracleList {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OracleList")
            .field("m", &self.oracles.len())
            .field("total", &self.total)
            .field("bias", &self.bias)
            .finish()
    }
}

impl OracleList {
    pub fn new(oracles: Vec<Arc<dyn SetOracle>>, bias: BiasSpec) -> Result<Self> {
        bias.validate()?;
        if oracles.len() < 2 {
            return Err(Error::invalid(
                "m",
                format!("an oracle list needs at least 2 sets, got {}", oracles.len()),
            ));
        }
        let sizes: Vec<f64> = oracles.iter().map(|o| o.approx_size()).collect();
        if let Some((i, s)) = sizes.iter().enumerate().find(|(_, s)| !(s.is_finite() && **s > 0.0)) {
            return Err(Error::invalid("m_i", format!("set {i} reports size {s}")));
        }
        let total = sizes.iter().sum();
        let chooser = WeightedIndex::new(&sizes)
            .map_err(|e| Error::Internal(format!("set chooser: {e}")))?;
        Ok(Self {
            oracles,
            bias,
            total,
            chooser,
        })
    }

    /// Convenience constructor for explicit sets sharing one bias spec.
    /// Each set derives its own stream from `seeds`.
    pub fn from_explicit<I, S>(sets: I, bias: BiasSpec, seeds: SeedTree) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = ElementId>,
    {
        let oracles = sets
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                ExplicitSet::biased(s, bias, seeds.child_indexed("set", i as u64))
                    .map(|o| Arc::new(o) as Arc<dyn SetOracle>)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(oracles, bias)
    }

    pub fn len(&self) -> usize {
        self.oracles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.oracles.is_empty()
    }

    pub fn total_size(&self) -> f64 {
        self.total
    }

    pub fn bias(&self) -> BiasSpec {
        self.bias
    }

    pub fn oracle(&self, i: usize) -> &Arc<dyn SetOracle> {
        &self.oracles[i]
    }

    pub fn oracles(&self) -> &[Arc<dyn SetOracle>] {
        &self.oracles
    }

    pub fn sizes(&self) -> Vec<f64> {
        self.oracles.iter().map(|o| o.approx_size()).collect()
    }

    /// Sub-list over `indices` (in the given order). Needs at least two.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        Self::new(indices.iter().map(|&i| self.oracles[i].clone()).collect(), self.bias)
    }

    /// Server-side first step of a random choice: index `i` with
    /// probability `m_i / M`.
    pub fn choose_set(&self, rng: &mut StreamRng) -> usize {
        self.chooser.sample(rng)
    }

    pub fn sample_count(&self) -> u64 {
        self.oracles.iter().map(|o| o.counters().sample_count()).sum()
    }

    pub fn query_count(&self) -> u64 {
        self.oracles.iter().map(|o| o.counters().query_count()).sum()
    }
}

/// A random choice of the list: set `i` with probability `m_i/M`, then one
/// element from that set's generator.
pub fn random_choice(list: &OracleList, rng: &mut StreamRng) -> Result<(usize, ElementId)> {
    let i = list.choose_set(rng);
    let x = list.oracle(i).random_element(rng)?;
    Ok((i, x))
}
