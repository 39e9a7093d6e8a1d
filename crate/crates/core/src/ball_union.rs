//! Lattice balls as set oracles, and union estimates over them.
//!
//! A ball's branch is fixed at construction:
//!
//! | branch     | when                                 | `m_i`        | generator            | bias        |
//! |------------|--------------------------------------|--------------|----------------------|-------------|
//! | `Exact`    | `r ≤ 2d^{3/2}/β`, structured center  | exact `C`    | exact sampler        | 0           |
//! | `Lattice`  | above, integer center, `r > 2d³/α`   | `V_d(r)`     | biased partition     | `α`         |
//! | `Rejection`| above, otherwise                     | `V_d(r)`     | rejection from `q`   | `2α/(1−α)`  |

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::element::ElementId;
use crate::error::{Error, Result};
use crate::estimator::{approximate_union, EstimatorOptions, Guarantee, UnionEstimate};
use crate::lattice::count::{ball_volume, hybrid_threshold};
use crate::lattice::sample::{BigBallSampler, FreeBallSampler, SamplerConfig, SmallBallSampler};
use crate::lattice::{point_element, rational_from_f64, BallSpec, FreeBall, Lambda, StructuredCoord};
use crate::oracle::{BiasSpec, Counters, OracleList, SetOracle};
use crate::rng::{SeedTree, StreamRng};
use crate::schedule::{ParameterSchedule, ScheduleInput};

/// A ball given either with a structured center or an arbitrary one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BallShape {
    Structured(BallSpec),
    Free(FreeBall),
}

impl BallShape {
    pub fn dim(&self) -> usize {
        match self {
            BallShape::Structured(b) => b.dim(),
            BallShape::Free(b) => b.dim(),
        }
    }

    pub fn radius_f64(&self) -> f64 {
        match self {
            BallShape::Structured(b) => b.radius_f64(),
            BallShape::Free(b) => b.radius_f64(),
        }
    }

    pub fn radius_sq(&self) -> BigRational {
        match self {
            BallShape::Structured(b) => b.radius_sq.clone(),
            BallShape::Free(b) => b.radius_sq(),
        }
    }

    pub fn center_values(&self) -> Vec<BigRational> {
        match self {
            BallShape::Structured(b) => b.center_values(),
            BallShape::Free(b) => b.center.clone(),
        }
    }

    pub fn contains(&self, p: &[BigInt]) -> bool {
        match self {
            BallShape::Structured(b) => b.contains(p),
            BallShape::Free(b) => b.contains(p),
        }
    }

    fn integer_center(&self) -> Option<Vec<BigInt>> {
        self.center_values()
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    /// The structured form, if one is known exactly.
    fn as_structured(&self) -> Option<BallSpec> {
        match self {
            BallShape::Structured(b) => Some(b.clone()),
            BallShape::Free(b) => {
                let center = self.integer_center()?;
                BallSpec::new(
                    b.radius_sq(),
                    Lambda::zero(),
                    0,
                    center.into_iter().map(|c| StructuredCoord::new(c, 0)).collect(),
                )
                .ok()
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Exact,
    Lattice,
    Rejection,
}

enum Generator {
    Exact(SmallBallSampler),
    Lattice(BigBallSampler),
    Rejection(FreeBallSampler),
}

/// One ball behind the set-oracle contract.
pub struct BallOracle {
    shape: BallShape,
    size: f64,
    exact: Option<u64>,
    branch: Branch,
    bias: BiasSpec,
    generator: Generator,
    counters: Counters,
}

impl std::fmt::Debug for BallOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BallOracle")
            .field("branch", &self.branch)
            .field("size", &self.size)
            .field("bias", &self.bias)
            .finish()
    }
}

impl BallOracle {
    pub fn branch(&self) -> Branch {
        self.branch
    }

    /// Bias actually promised by this oracle.
    pub fn bias(&self) -> BiasSpec {
        self.bias
    }

    pub fn shape(&self) -> &BallShape {
        &self.shape
    }
}

pub fn ball_oracle(shape: BallShape, alpha: f64, beta: f64) -> Result<BallOracle> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::invalid("beta", format!("{beta} is not in (0, 1)")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid("alpha", format!("{alpha} is not in (0, 1)")));
    }
    let d = shape.dim();
    let r = shape.radius_f64();
    let threshold = hybrid_threshold(d, beta);
    if r <= threshold {
        let Some(spec) = shape.as_structured() else {
            return Err(Error::Precondition(format!(
                "ball is neither large (r = {r} ≤ 2d^(3/2)/beta = {threshold}) nor structured; \
                 raise the radius above the threshold or give the center as i + j·lambda"
            )));
        };
        let sampler = SmallBallSampler::new(spec)?;
        let count = sampler
            .count()
            .to_u64()
            .ok_or_else(|| Error::invalid("radius", "exact count does not fit in 64 bits"))?;
        return Ok(BallOracle {
            shape,
            size: count as f64,
            exact: Some(count),
            branch: Branch::Exact,
            bias: BiasSpec::ZERO,
            generator: Generator::Exact(sampler),
            counters: Counters::default(),
        });
    }
    let size = ball_volume(d, r)?;
    let cfg = SamplerConfig::new(alpha, d)?;
    if let Some(center) = shape.integer_center().filter(|_| r > cfg.min_radius()) {
        let sampler = BigBallSampler::new(center, shape.radius_sq(), cfg)?;
        return Ok(BallOracle {
            shape,
            size,
            exact: None,
            branch: Branch::Lattice,
            bias: BiasSpec::symmetric(alpha, beta),
            generator: Generator::Lattice(sampler),
            counters: Counters::default(),
        });
    }
    let free = match &shape {
        BallShape::Free(b) => b.clone(),
        BallShape::Structured(_) => FreeBall::new(shape.center_values(), rational_from_f64(r.next_down())?)?,
    };
    let sampler = FreeBallSampler::new(free, alpha)?;
    let alpha_prime = sampler.alpha_prime();
    if alpha_prime >= 1.0 {
        return Err(Error::Precondition(format!(
            "rejection branch bias 2α/(1−α) = {alpha_prime} is not below 1; use alpha < 1/3"
        )));
    }
    Ok(BallOracle {
        shape,
        size,
        exact: None,
        branch: Branch::Rejection,
        bias: BiasSpec::symmetric(alpha_prime, beta),
        generator: Generator::Rejection(sampler),
        counters: Counters::default(),
    })
}

impl SetOracle for BallOracle {
    fn approx_size(&self) -> f64 {
        self.size
    }

    fn draw(&self, rng: &mut StreamRng) -> Result<ElementId> {
        let p = match &self.generator {
            Generator::Exact(s) => s.sample(rng)?.point,
            Generator::Lattice(s) => s.sample(rng)?.point,
            Generator::Rejection(s) => s.sample(rng)?,
        };
        Ok(point_element(p))
    }

    fn member(&self, x: &ElementId) -> bool {
        x.as_point().is_some_and(|p| self.shape.contains(p))
    }

    fn counters(&self) -> &Counters {
        &self.counters
    }

    fn exact_size(&self) -> Option<u64> {
        self.exact
    }
}

/// Union estimate over balls, with the branch taken for each ball.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BallUnionEstimate {
    #[serde(flatten)]
    pub estimate: UnionEstimate,
    pub branches: Vec<Branch>,
    /// Interval instantiated with the worst bias across the balls.
    pub interval: Guarantee,
}

/// Oracle list over `shapes`; the list bias is the worst case over balls.
pub fn ball_list(shapes: Vec<BallShape>, alpha: f64, beta: f64) -> Result<(OracleList, Vec<Branch>)> {
    let oracles = shapes
        .into_iter()
        .map(|s| ball_oracle(s, alpha, beta))
        .collect::<Result<Vec<_>>>()?;
    let bias = oracles.iter().fold(BiasSpec::ZERO, |b, o| b.max(&o.bias));
    let branches = oracles.iter().map(|o| o.branch).collect();
    let oracles = oracles
        .into_iter()
        .map(|o| Arc::new(o) as Arc<dyn SetOracle>)
        .collect();
    Ok((OracleList::new(oracles, bias)?, branches))
}

pub fn estimate_ball_union(
    shapes: Vec<BallShape>,
    epsilon: f64,
    gamma: f64,
    alpha: f64,
    beta: f64,
    opts: &EstimatorOptions,
    seeds: &SeedTree,
) -> Result<BallUnionEstimate> {
    let (list, branches) = ball_list(shapes, alpha, beta)?;
    let sched = ParameterSchedule::build(ScheduleInput::new(list.len(), epsilon, gamma))?;
    let estimate = approximate_union(&list, &sched, seeds, opts)?;
    Ok(BallUnionEstimate {
        interval: Guarantee::new(epsilon, gamma, &list.bias()),
        estimate,
        branches,
    })
}
