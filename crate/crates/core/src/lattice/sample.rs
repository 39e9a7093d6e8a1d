//! Random lattice points in balls.
//!
//! * [`SmallBallSampler`]: exactly uniform, by descending the counting DP
//!   and inverting a uniform integer below `C(r, p, d)`.
//! * [`BigBallSampler`]: `(1 + α)`-biased for integer centers and large
//!   radii. Each coordinate range is cut into runs whose slice radii agree
//!   within `1 + α/(4d²)`; a run is picked with weight `len · P(r_i, t-1)`
//!   and a coordinate uniformly inside it.
//! * [`FreeBallSampler`]: arbitrary centers, by rejection from the enlarged
//!   ball of radius `r + √d` around the nearest lattice point.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::count::{hybrid_threshold, ln_biguint, HybridCount, LatticeCounter, ResidualRadius};
use super::{floor_sqrt, rational_from_f64, rational_to_f64, round_half_toward_zero, BallSpec, FreeBall};
use crate::error::{Error, Result};
use crate::rng::StreamRng;

/// Descends the DP from `coord` with residual `res`, choosing each slice
/// with probability proportional to its count. Returns the offsets chosen
/// for coordinates `coord..d` and the exact path probability.
fn exact_descend(
    counter: &LatticeCounter,
    coord: usize,
    res: &ResidualRadius,
    rng: &mut StreamRng,
) -> Result<(Vec<i64>, BigRational)> {
    let total = counter.count_from(coord, res)?;
    if total.is_zero() {
        return Err(Error::Precondition("ball contains no lattice points".into()));
    }
    let mut z = rng.gen_biguint_below(&total);
    let mut parent = total;
    let mut prob = BigRational::one();
    let mut res = res.clone();
    let mut offsets = Vec::with_capacity(counter.dim() - coord);
    for k in coord..counter.dim() {
        let (lo, hi) = counter
            .slice_range(k, &res)?
            .ok_or_else(|| Error::Internal("empty slice on a non-empty path".into()))?;
        let j = counter.js()[k];
        let mut chosen = None;
        for y in lo..=hi {
            let child = res.pin(y, j);
            let c = counter.count_from(k + 1, &child)?;
            if z < c {
                chosen = Some((y, child, c));
                break;
            }
            z -= c;
        }
        let (y, child, c) = chosen.ok_or_else(|| Error::Internal("inversion ran past the slice counts".into()))?;
        prob *= BigRational::new(BigInt::from(c.clone()), BigInt::from(parent));
        parent = c;
        offsets.push(y);
        res = child;
    }
    Ok((offsets, prob))
}

/// A drawn point with its exact probability.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactSample {
    pub point: Vec<BigInt>,
    pub probability: BigRational,
}

/// Exactly uniform sampler for a structured-center ball.
#[derive(Debug)]
pub struct SmallBallSampler {
    ball: BallSpec,
    counter: LatticeCounter,
    total: BigUint,
}

impl SmallBallSampler {
    pub fn new(ball: BallSpec) -> Result<Self> {
        ball.validate()?;
        let counter = LatticeCounter::for_ball(&ball);
        let total = counter.count(&ball.radius_sq)?;
        if total.is_zero() {
            return Err(Error::Precondition("ball contains no lattice points".into()));
        }
        Ok(SmallBallSampler { ball, counter, total })
    }

    pub fn count(&self) -> &BigUint {
        &self.total
    }

    pub fn ball(&self) -> &BallSpec {
        &self.ball
    }

    pub fn sample(&self, rng: &mut StreamRng) -> Result<ExactSample> {
        let (offsets, probability) =
            exact_descend(&self.counter, 0, &ResidualRadius::base(self.ball.radius_sq.clone()), rng)?;
        let point = offsets
            .into_iter()
            .zip(&self.ball.center)
            .map(|(y, c)| &c.i + y)
            .collect();
        Ok(ExactSample { point, probability })
    }
}

pub fn sample_small_ball(ball: &BallSpec, rng: &mut StreamRng) -> Result<Vec<BigInt>> {
    Ok(SmallBallSampler::new(ball.clone())?.sample(rng)?.point)
}

/// Consecutive integer runs over which slice residuals `r² − (x − c)²`
/// stay within a factor `ratio²` of each other.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalPartition {
    pub intervals: Vec<(i64, i64)>,
    pub r2: BigRational,
    pub c: i64,
    pub ratio: BigRational,
}

fn residual_at(r2: &BigRational, c: i64, x: i64) -> BigRational {
    let d = BigInt::from(x - c);
    r2 - BigRational::from_integer(&d * &d)
}

fn compatible(r2: &BigRational, c: i64, ratio2: &BigRational, x: i64, y: i64) -> bool {
    let rx = residual_at(r2, c, x);
    let ry = residual_at(r2, c, y);
    rx <= ratio2 * &ry && ry <= ratio2 * &rx
}

/// Greedy maximal runs on one side of `c`, where residuals are monotone.
fn partition_monotone(r2: &BigRational, c: i64, ratio2: &BigRational, lo: i64, hi: i64, out: &mut Vec<(i64, i64)>) {
    let mut a = lo;
    while a <= hi {
        let mut good = a;
        if compatible(r2, c, ratio2, a, hi) {
            good = hi;
        } else {
            let mut bad = hi;
            while bad - good > 1 {
                let mid = good + (bad - good) / 2;
                if compatible(r2, c, ratio2, a, mid) {
                    good = mid;
                } else {
                    bad = mid;
                }
            }
        }
        out.push((a, good));
        a = good + 1;
    }
}

/// Partitions `range` into maximal compatible runs. A range that straddles
/// `c` is split at `c` first so that each side is monotone.
pub fn build_partition(r2: &BigRational, c: i64, ratio: &BigRational, range: (i64, i64)) -> Result<IntervalPartition> {
    let (lo, hi) = range;
    if lo > hi {
        return Err(Error::invalid("range", format!("[{lo}, {hi}] is empty")));
    }
    if *ratio <= BigRational::one() {
        return Err(Error::invalid("ratio", "must exceed 1"));
    }
    let ratio2 = ratio * ratio;
    let mut intervals = Vec::new();
    if lo <= c {
        partition_monotone(r2, c, &ratio2, lo, hi.min(c), &mut intervals);
    }
    if hi > c {
        partition_monotone(r2, c, &ratio2, lo.max(c + 1), hi, &mut intervals);
    }
    Ok(IntervalPartition {
        intervals,
        r2: r2.clone(),
        c,
        ratio: ratio.clone(),
    })
}

impl IntervalPartition {
    /// Checks consecutiveness, endpoint compatibility inside each run, and
    /// that each run could not have been extended (its start is
    /// incompatible with the next run's start) on the same side of `c`.
    pub fn is_valid(&self, range: (i64, i64)) -> bool {
        let ratio2 = &self.ratio * &self.ratio;
        let Some(first) = self.intervals.first() else {
            return false;
        };
        if first.0 != range.0 || self.intervals.last().map(|iv| iv.1) != Some(range.1) {
            return false;
        }
        for w in self.intervals.windows(2) {
            if w[1].0 != w[0].1 + 1 {
                return false;
            }
            let same_side = (w[0].1 <= self.c) == (w[1].0 <= self.c);
            if same_side && compatible(&self.r2, self.c, &ratio2, w[0].0, w[1].0) {
                return false;
            }
        }
        self.intervals
            .iter()
            .all(|&(a, b)| a <= b && compatible(&self.r2, self.c, &ratio2, a, b))
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }
}

/// Bias target and the constants derived from it for a `d`-ball.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub alpha: f64,
    pub d: usize,
    pub eps4: f64,
    pub g: f64,
    pub beta: f64,
    /// `1 + ε₄/g(d)` as an exact rational.
    pub ratio: BigRational,
}

impl SamplerConfig {
    pub fn new(alpha: f64, d: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::invalid("alpha", format!("{alpha} is not in (0, 1)")));
        }
        if d == 0 {
            return Err(Error::invalid("dim", "must be at least 1"));
        }
        let eps4 = alpha / 4.0;
        let g = (d * d) as f64;
        let beta = alpha / (alpha + 16.0 * d as f64 + 16.0);
        let ratio = BigRational::one() + rational_from_f64(eps4 / g)?;
        Ok(SamplerConfig {
            alpha,
            d,
            eps4,
            g,
            beta,
            ratio,
        })
    }

    /// Radius at or below which sub-balls are sampled exactly.
    pub fn exact_threshold(&self) -> f64 {
        hybrid_threshold(self.d, self.beta)
    }

    pub fn min_radius(&self) -> f64 {
        2.0 * (self.d as f64).powi(3) / self.alpha
    }
}

struct Plan {
    intervals: Vec<(i64, i64)>,
    ln_p: Vec<f64>,
    cdf: Vec<f64>,
    ln_total: f64,
}

/// A drawn point with the natural log of its probability.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiasedSample {
    pub point: Vec<BigInt>,
    pub ln_probability: f64,
}

/// `(1 + α)`-biased sampler for an integer-centered ball.
pub struct BigBallSampler {
    cfg: SamplerConfig,
    center: Vec<BigInt>,
    r2: BigRational,
    counter: LatticeCounter,
    plans: Mutex<HashMap<(usize, BigRational), Arc<Plan>>>,
}

impl std::fmt::Debug for BigBallSampler {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BigBallSampler")
            .field("alpha", &self.cfg.alpha)
            .field("center", &self.center)
            .field("r2", &self.r2)
            .finish()
    }
}

impl BigBallSampler {
    pub fn new(center: Vec<BigInt>, r2: BigRational, cfg: SamplerConfig) -> Result<Self> {
        let r = rational_to_f64(&r2).sqrt();
        if !(r > cfg.min_radius()) {
            return Err(Error::Precondition(format!(
                "biased sampler needs r > 2d^3/alpha = {}, got r = {r}",
                cfg.min_radius()
            )));
        }
        Self::new_unchecked(center, r2, cfg)
    }

    /// Skips the radius precondition; the bias bound is then not promised.
    pub fn new_unchecked(center: Vec<BigInt>, r2: BigRational, cfg: SamplerConfig) -> Result<Self> {
        if center.len() != cfg.d {
            return Err(Error::invalid("center", format!("has {} coordinates, config is for d = {}", center.len(), cfg.d)));
        }
        let counter = LatticeCounter::integer_centered(cfg.d);
        Ok(BigBallSampler {
            cfg,
            center,
            r2,
            counter,
            plans: Mutex::new(HashMap::new()),
        })
    }

    pub fn config(&self) -> &SamplerConfig {
        &self.cfg
    }

    fn plan(&self, coord: usize, res: &BigRational) -> Result<Arc<Plan>> {
        let key = (coord, res.clone());
        if let Some(p) = self.plans.lock().expect("plan cache").get(&key) {
            return Ok(p.clone());
        }
        let t = self.cfg.d - coord;
        let f = floor_sqrt(res)
            .and_then(|v| v.to_i64())
            .ok_or_else(|| Error::Internal("residual out of range".into()))?;
        let mut intervals = build_partition(res, 0, &self.cfg.ratio, (-f, 0))?.intervals;
        if f >= 1 {
            intervals.extend(build_partition(res, 0, &self.cfg.ratio, (1, f))?.intervals);
        }
        let mut ln_p = Vec::with_capacity(intervals.len());
        let mut ln_w = Vec::with_capacity(intervals.len());
        for &(a, b) in &intervals {
            let rep = if b <= 0 { b } else { a };
            let child = res - BigRational::from_integer(BigInt::from(rep) * BigInt::from(rep));
            let p = HybridCount::lattice_centered(&self.counter, t - 1, &child, self.cfg.beta, self.cfg.d)?.ln();
            ln_p.push(p);
            ln_w.push(((b - a + 1) as f64).ln() + p);
        }
        let max = ln_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let shifted: Vec<f64> = ln_w.iter().map(|w| (w - max).exp()).collect();
        let sum: f64 = shifted.iter().sum();
        let ln_total = max + sum.ln();
        let mut acc = 0.0;
        let cdf = shifted
            .iter()
            .map(|w| {
                acc += w / sum;
                acc
            })
            .collect();
        let plan = Arc::new(Plan {
            intervals,
            ln_p,
            cdf,
            ln_total,
        });
        self.plans.lock().expect("plan cache").insert(key, plan.clone());
        Ok(plan)
    }

    fn is_exact_tail(&self, coord: usize, res: &BigRational) -> bool {
        coord > 0 && rational_to_f64(res).sqrt() <= self.cfg.exact_threshold()
    }

    pub fn sample(&self, rng: &mut StreamRng) -> Result<BiasedSample> {
        let d = self.cfg.d;
        let mut res = self.r2.clone();
        let mut offsets = Vec::with_capacity(d);
        let mut ln_prob = 0.0;
        let mut coord = 0;
        while coord < d {
            if self.is_exact_tail(coord, &res) {
                let (tail, p) = exact_descend(&self.counter, coord, &ResidualRadius::base(res.clone()), rng)?;
                ln_prob += ln_rational(&p);
                offsets.extend(tail);
                break;
            }
            let plan = self.plan(coord, &res)?;
            let u: f64 = rng.gen();
            let i = plan.cdf.partition_point(|&c| c <= u).min(plan.intervals.len() - 1);
            let (a, b) = plan.intervals[i];
            let z = rng.gen_range(a..=b);
            ln_prob += plan.ln_p[i] - plan.ln_total;
            res -= BigRational::from_integer(BigInt::from(z) * BigInt::from(z));
            offsets.push(z);
            coord += 1;
        }
        let point = offsets.into_iter().zip(&self.center).map(|(z, c)| c + z).collect();
        Ok(BiasedSample {
            point,
            ln_probability: ln_prob,
        })
    }

    /// Natural log of the probability that [`BigBallSampler::sample`]
    /// returns `point`, or `None` for points outside the ball.
    pub fn ln_probability_of(&self, point: &[BigInt]) -> Result<Option<f64>> {
        let d = self.cfg.d;
        if point.len() != d {
            return Ok(None);
        }
        let mut res = self.r2.clone();
        let mut ln_prob = 0.0;
        for coord in 0..d {
            let z = (&point[coord] - &self.center[coord])
                .to_i64()
                .ok_or_else(|| Error::invalid("point", "coordinate out of range"))?;
            if self.is_exact_tail(coord, &res) {
                let rest: Vec<BigInt> = (coord..d).map(|k| &point[k] - &self.center[k]).collect();
                let mut tail = BigRational::zero();
                for y in &rest {
                    tail += BigRational::from_integer(y * y);
                }
                if tail > res {
                    return Ok(None);
                }
                let c = self.counter.count_from(coord, &ResidualRadius::base(res))?;
                return Ok(Some(ln_prob - ln_biguint(&c)));
            }
            let plan = self.plan(coord, &res)?;
            let Some(i) = plan.intervals.iter().position(|&(a, b)| a <= z && z <= b) else {
                return Ok(None);
            };
            ln_prob += plan.ln_p[i] - plan.ln_total;
            res -= BigRational::from_integer(BigInt::from(z) * BigInt::from(z));
        }
        Ok(Some(ln_prob))
    }

    /// All partitions built so far satisfy the partition definition.
    pub fn partitions_valid(&self) -> bool {
        let plans = self.plans.lock().expect("plan cache");
        plans.iter().all(|((_, res), plan)| {
            let f = floor_sqrt(res).and_then(|v| v.to_i64()).unwrap_or(0);
            let left: Vec<_> = plan.intervals.iter().cloned().filter(|iv| iv.1 <= 0).collect();
            let right: Vec<_> = plan.intervals.iter().cloned().filter(|iv| iv.0 >= 1).collect();
            let mk = |ivs: Vec<(i64, i64)>| IntervalPartition {
                intervals: ivs,
                r2: res.clone(),
                c: 0,
                ratio: self.cfg.ratio.clone(),
            };
            mk(left).is_valid((-f, 0)) && (f == 0 || mk(right).is_valid((1, f)))
        })
    }
}

fn ln_rational(p: &BigRational) -> f64 {
    ln_biguint(&p.numer().magnitude().clone()) - ln_biguint(&p.denom().magnitude().clone())
}

pub fn sample_big_ball_lattice_center(
    r: f64,
    q: &[i64],
    cfg: &SamplerConfig,
    rng: &mut StreamRng,
) -> Result<Vec<BigInt>> {
    let r = rational_from_f64(r)?;
    let s = BigBallSampler::new(q.iter().map(|&c| BigInt::from(c)).collect(), &r * &r, cfg.clone())?;
    Ok(s.sample(rng)?.point)
}

/// Coordinate-wise nearest lattice point, rounding halves toward zero.
pub fn nearest_lattice_point(p: &[BigRational]) -> Vec<BigInt> {
    p.iter().map(round_half_toward_zero).collect()
}

/// Default rejection cap, `⌈64 · ln(2 / 10⁻⁹)⌉`.
pub fn default_rejection_cap() -> u64 {
    (64.0 * (2.0f64 / 1e-9).ln()).ceil() as u64
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RejectionStats {
    pub attempts: u64,
    pub accepted: u64,
}

impl RejectionStats {
    pub fn acceptance_rate(&self) -> f64 {
        if self.attempts == 0 {
            return 1.0;
        }
        self.accepted as f64 / self.attempts as f64
    }
}

/// `(1 + α′)`-biased sampler for an arbitrary-center ball, `α′ = 2α/(1−α)`.
#[derive(Debug)]
pub struct FreeBallSampler {
    ball: FreeBall,
    inner: BigBallSampler,
    cap: u64,
    attempts: AtomicU64,
    accepted: AtomicU64,
}

impl FreeBallSampler {
    pub fn new(ball: FreeBall, alpha: f64) -> Result<Self> {
        let cfg = SamplerConfig::new(alpha, ball.dim())?;
        let d = ball.dim() as f64;
        let r = ball.radius_f64();
        let need = 2.0 * d.powf(1.5) / alpha;
        if !(r > need) {
            return Err(Error::Precondition(format!(
                "arbitrary-center sampler needs r > 2d^(3/2)/alpha = {need}, got r = {r}"
            )));
        }
        let q = nearest_lattice_point(&ball.center);
        let outer = rational_from_f64((r + d.sqrt()).next_up())?;
        let inner = BigBallSampler::new_unchecked(q, &outer * &outer, cfg)?;
        Ok(FreeBallSampler {
            ball,
            inner,
            cap: default_rejection_cap(),
            attempts: AtomicU64::new(0),
            accepted: AtomicU64::new(0),
        })
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn ball(&self) -> &FreeBall {
        &self.ball
    }

    pub fn alpha(&self) -> f64 {
        self.inner.cfg.alpha
    }

    pub fn alpha_prime(&self) -> f64 {
        let a = self.alpha();
        2.0 * a / (1.0 - a)
    }

    /// Upper bound on the per-attempt rejection probability,
    /// `α + 2β/(1−β) + d^{3/2}/(r+√d)` with `β = α/(8+α)`.
    pub fn failure_bound(&self) -> f64 {
        let a = self.alpha();
        let b = a / (8.0 + a);
        let d = self.ball.dim() as f64;
        a + 2.0 * b / (1.0 - b) + d.powf(1.5) / (self.ball.radius_f64() + d.sqrt())
    }

    pub fn stats(&self) -> RejectionStats {
        RejectionStats {
            attempts: self.attempts.load(Ordering::Relaxed),
            accepted: self.accepted.load(Ordering::Relaxed),
        }
    }

    pub fn inner(&self) -> &BigBallSampler {
        &self.inner
    }

    pub fn sample(&self, rng: &mut StreamRng) -> Result<Vec<BigInt>> {
        for _ in 0..self.cap {
            self.attempts.fetch_add(1, Ordering::Relaxed);
            let s = self.inner.sample(rng)?;
            if self.ball.contains(&s.point) {
                self.accepted.fetch_add(1, Ordering::Relaxed);
                return Ok(s.point);
            }
        }
        Err(Error::RejectionCap { attempts: self.cap })
    }
}

pub fn sample_big_ball(r: f64, p: &[f64], alpha: f64, rng: &mut StreamRng) -> Result<Vec<BigInt>> {
    FreeBallSampler::new(FreeBall::from_f64(p, r)?, alpha)?.sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::parse_rational;
    use crate::reference::enumerate_ball;
    use crate::rng::SeedTree;
    use std::collections::HashMap;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn pt(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn single_point_ball() {
        let b = BallSpec::lattice(&[0], 0.4).unwrap();
        let s = SmallBallSampler::new(b).unwrap();
        let mut rng = SeedTree::new(1).rng();
        for _ in 0..20 {
            assert_eq!(s.sample(&mut rng).unwrap().point, pt(&[0]));
        }
    }

    #[test]
    fn empty_ball_rejected() {
        let b = BallSpec::new(
            q("1/100"),
            crate::lattice::Lambda::parse("1/2").unwrap(),
            1,
            vec![crate::lattice::StructuredCoord::new(0, 1)],
        )
        .unwrap();
        assert!(SmallBallSampler::new(b).is_err());
    }

    #[test]
    fn small_sampler_uniform_and_exact() {
        let b = BallSpec::lattice(&[0, 0], 1.0).unwrap();
        let s = SmallBallSampler::new(b).unwrap();
        let mut rng = SeedTree::new(2).rng();
        let n = 100_000;
        let mut freq: HashMap<Vec<BigInt>, u64> = HashMap::new();
        let want = BigRational::new(1.into(), 5.into());
        for _ in 0..n {
            let x = s.sample(&mut rng).unwrap();
            assert_eq!(x.probability, want);
            *freq.entry(x.point).or_default() += 1;
        }
        assert_eq!(freq.len(), 5);
        let sd = (0.2 * 0.8 / n as f64).sqrt();
        for (_, c) in freq {
            assert!((c as f64 / n as f64 - 0.2).abs() < 5.0 * sd);
        }
    }

    #[test]
    fn partition_single_run_and_exhaustive_validity() {
        let p = build_partition(&q("25"), 0, &q("1.1"), (3, 3)).unwrap();
        assert_eq!(p.intervals, vec![(3, 3)]);
        let r2 = q("10000");
        let ratio = q("1.1");
        let p = build_partition(&r2, 0, &ratio, (0, 100)).unwrap();
        assert!(p.is_valid((0, 100)));
        let ratio2 = &ratio * &ratio;
        for &(a, b) in &p.intervals {
            for x in a..=b {
                for y in a..=b {
                    assert!(compatible(&r2, 0, &ratio2, x, y));
                }
            }
        }
        for w in p.intervals.windows(2).filter(|w| w[0].1 != 0) {
            assert!(!compatible(&r2, 0, &ratio2, w[0].0, w[1].0));
        }
        let bound = ((10000f64).ln() / (1.21f64).ln()).ceil() as usize + 2;
        assert!(p.len() <= bound, "{} > {bound}", p.len());
    }

    #[test]
    fn one_dimensional_big_ball_is_uniform() {
        let cfg = SamplerConfig::new(0.5, 1).unwrap();
        let s = BigBallSampler::new(pt(&[3]), q("100"), cfg).unwrap();
        for z in -7..=13 {
            let lp = s.ln_probability_of(&pt(&[z])).unwrap().unwrap();
            assert!((lp.exp() - 1.0 / 21.0).abs() < 1e-12);
        }
        assert!(s.ln_probability_of(&pt(&[14])).unwrap().is_none());
    }

    #[test]
    fn big_ball_precondition() {
        let cfg = SamplerConfig::new(0.5, 2).unwrap();
        assert!(BigBallSampler::new(pt(&[0, 0]), q("900"), cfg).is_err());
    }

    #[test]
    fn big_ball_bias_exhaustive_d2() {
        let alpha = 0.5;
        let cfg = SamplerConfig::new(alpha, 2).unwrap();
        let s = BigBallSampler::new(pt(&[0, 0]), q("1600"), cfg).unwrap();
        let pts = enumerate_ball(&[q("0"), q("0")], &q("1600"), None).unwrap();
        let c = pts.len() as f64;
        let mut total = 0.0;
        for p in &pts {
            let pr = s.ln_probability_of(p).unwrap().unwrap().exp();
            assert!(pr * c >= 1.0 - alpha && pr * c <= 1.0 + alpha, "{p:?}: {}", pr * c);
            total += pr;
        }
        assert!((total - 1.0).abs() < 1e-9);
        assert!(s.partitions_valid());
        let mut rng = SeedTree::new(3).rng();
        for _ in 0..200 {
            let x = s.sample(&mut rng).unwrap();
            let lp = s.ln_probability_of(&x.point).unwrap().unwrap();
            assert!((lp - x.ln_probability).abs() < 1e-9);
        }
    }

    #[test]
    fn nearest_point_rule() {
        assert_eq!(nearest_lattice_point(&[q("0.4"), q("-1.6")]), pt(&[0, -2]));
        assert_eq!(nearest_lattice_point(&[q("3"), q("-4")]), pt(&[3, -4]));
        assert_eq!(nearest_lattice_point(&[q("0.5"), q("-0.5")]), pt(&[0, 0]));
    }

    #[test]
    fn free_ball_sampler_stays_inside() {
        let s = FreeBallSampler::new(FreeBall::from_f64(&[0.3, -0.7], 35.0).unwrap(), 0.5).unwrap();
        let mut rng = SeedTree::new(4).rng();
        for _ in 0..500 {
            let p = s.sample(&mut rng).unwrap();
            assert!(s.ball().contains(&p));
        }
        let st = s.stats();
        assert_eq!(st.accepted, 500);
        assert!(1.0 - st.acceptance_rate() <= s.failure_bound());
        assert!((s.alpha_prime() - 2.0).abs() < 1e-12);
        assert!(FreeBallSampler::new(FreeBall::from_f64(&[0.0, 0.0], 5.0).unwrap(), 0.5).is_err());
    }

    #[test]
    fn free_ball_at_lattice_point() {
        let s = FreeBallSampler::new(FreeBall::from_f64(&[2.0, -1.0], 30.0).unwrap(), 0.5).unwrap();
        let mut rng = SeedTree::new(5).rng();
        for _ in 0..100 {
            assert!(s.ball().contains(&s.sample(&mut rng).unwrap()));
        }
    }

    #[test]
    fn rejection_cap_triggers() {
        let s = FreeBallSampler::new(FreeBall::from_f64(&[0.0, 0.0], 30.0).unwrap(), 0.5)
            .unwrap()
            .with_cap(0);
        let mut rng = SeedTree::new(6).rng();
        assert!(matches!(s.sample(&mut rng), Err(Error::RejectionCap { .. })));
        assert_eq!(default_rejection_cap(), 1371);
    }
}
