//! Counting lattice points in balls.
//!
//! [`LatticeCounter`] is the exact DP: fixing coordinate `k` to an integer
//! `t = i_k + y` leaves a `(d-k-1)`-ball whose squared radius is the
//! residual `r² + a₀ + a₁λ + a₂λ²` with `(a₀, a₁, a₂) ← (a₀ − y², a₁ + 2yj_k,
//! a₂ − j_k²)`. The count of a slice depends only on the residual and on the
//! `j`'s of the remaining coordinates, never on their integer parts, so the
//! memo table is keyed by `(dims_remaining, residual)`.

use std::collections::{HashMap, HashSet};
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{rational_to_f64, BallSpec, FreeBall, Lambda};
use crate::error::{Error, Result};

/// Symbolic squared radius `r² + a₀ + a₁λ + a₂λ²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidualRadius {
    pub r2: BigRational,
    pub a0: BigInt,
    pub a1: BigInt,
    pub a2: BigInt,
}

impl ResidualRadius {
    pub fn base(r2: BigRational) -> Self {
        ResidualRadius {
            r2,
            a0: BigInt::zero(),
            a1: BigInt::zero(),
            a2: BigInt::zero(),
        }
    }

    /// Residual after pinning one coordinate at offset `y` from its integer
    /// part, for a coordinate with multiplier `j`.
    pub fn pin(&self, y: i64, j: i64) -> Self {
        let y = BigInt::from(y);
        let j = BigInt::from(j);
        ResidualRadius {
            r2: self.r2.clone(),
            a0: &self.a0 - &y * &y,
            a1: &self.a1 + BigInt::from(2) * &y * &j,
            a2: &self.a2 - &j * &j,
        }
    }

    pub fn value(&self, lambda: &BigRational) -> BigRational {
        &self.r2
            + BigRational::from_integer(self.a0.clone())
            + lambda * &self.a1
            + lambda * lambda * &self.a2
    }

    fn lambda_free(&self) -> bool {
        self.a1.is_zero() && self.a2.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum ResidualKey {
    Value(BigRational),
    Symbolic(ResidualRadius),
}

/// `2^-64`, the certification margin for approximate `λ`.
fn guard_scale() -> BigInt {
    BigInt::one() << 64
}

/// Exact DP counter for balls sharing one `λ` and one `j`-vector.
pub struct LatticeCounter {
    lambda: Lambda,
    js: Vec<i64>,
    memo: bool,
    p: BigInt,
    q: BigInt,
    lambda_f: f64,
    error_f: f64,
    table: Mutex<HashMap<(usize, ResidualKey), BigUint>>,
}

impl std::fmt::Debug for LatticeCounter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LatticeCounter")
            .field("lambda", &self.lambda.label)
            .field("js", &self.js)
            .field("table", &self.table_len())
            .finish()
    }
}

impl LatticeCounter {
    pub fn new(lambda: Lambda, js: Vec<i64>) -> Self {
        let p = lambda.value.numer().clone();
        let q = lambda.value.denom().clone();
        let lambda_f = rational_to_f64(&lambda.value);
        let error_f = lambda.error.as_ref().map(rational_to_f64).unwrap_or(0.0);
        LatticeCounter {
            lambda,
            js,
            memo: true,
            p,
            q,
            lambda_f,
            error_f,
            table: Mutex::new(HashMap::new()),
        }
    }

    /// Counter for integer centers in `d` dimensions.
    pub fn integer_centered(d: usize) -> Self {
        Self::new(Lambda::zero(), vec![0; d])
    }

    pub fn for_ball(ball: &BallSpec) -> Self {
        Self::new(ball.lambda.clone(), ball.js())
    }

    pub fn with_memo(mut self, on: bool) -> Self {
        self.memo = on;
        self
    }

    pub fn dim(&self) -> usize {
        self.js.len()
    }

    pub fn js(&self) -> &[i64] {
        &self.js
    }

    pub fn lambda(&self) -> &Lambda {
        &self.lambda
    }

    pub fn table_len(&self) -> usize {
        self.table.lock().expect("count table").len()
    }

    /// `C(r, p, d)` for squared radius `r2`.
    pub fn count(&self, r2: &BigRational) -> Result<BigUint> {
        self.count_from(0, &ResidualRadius::base(r2.clone()))
    }

    fn key(&self, res: &ResidualRadius) -> ResidualKey {
        if self.lambda.is_exact() || res.lambda_free() {
            ResidualKey::Value(res.value(&self.lambda.value))
        } else {
            ResidualKey::Symbolic(res.clone())
        }
    }

    /// Sign of the residual's value, certified against `λ`'s error bound.
    pub fn sign(&self, res: &ResidualRadius) -> Result<Sign> {
        let big_p = res.r2.numer();
        let big_q = res.r2.denom();
        let q2 = &self.q * &self.q;
        if res.lambda_free() {
            let n = big_p + big_q * &res.a0;
            return Ok(n.sign());
        }
        let inner = &res.a0 * &q2 + &res.a1 * &self.p * &self.q + &res.a2 * &self.p * &self.p;
        let n = big_p * &q2 + big_q * inner;
        if self.lambda.is_exact() {
            return Ok(n.sign());
        }
        let denom = big_q * &q2;
        if n.abs() * guard_scale() <= denom {
            return Err(Error::GuardBand);
        }
        let a1 = res.a1.to_f64().unwrap_or(f64::INFINITY).abs();
        let a2 = res.a2.to_f64().unwrap_or(f64::INFINITY).abs();
        let e = self.error_f;
        let propagated = e * (a1 + a2 * (2.0 * self.lambda_f.abs() + e));
        if !(propagated < 2f64.powi(-65)) {
            return Err(Error::InsufficientPrecision { error: propagated });
        }
        Ok(n.sign())
    }

    fn value_f64(&self, res: &ResidualRadius) -> f64 {
        let l = self.lambda_f;
        let a0 = res.a0.to_f64().unwrap_or(0.0);
        let a1 = res.a1.to_f64().unwrap_or(0.0);
        let a2 = res.a2.to_f64().unwrap_or(0.0);
        rational_to_f64(&res.r2) + a0 + a1 * l + a2 * l * l
    }

    fn inside(&self, coord: usize, res: &ResidualRadius, y: i64) -> Result<bool> {
        Ok(self.sign(&res.pin(y, self.js[coord]))? != Sign::Minus)
    }

    /// Integer offsets `y` (relative to the coordinate's integer part) that
    /// keep the pinned residual non-negative, as an inclusive range.
    pub fn slice_range(&self, coord: usize, res: &ResidualRadius) -> Result<Option<(i64, i64)>> {
        let v = self.value_f64(res);
        if v < -1e-9 * (1.0 + rational_to_f64(&res.r2).abs()) {
            return Ok(None);
        }
        let c = self.js[coord] as f64 * self.lambda_f;
        let w = v.max(0.0).sqrt();
        let guess_lo = (c - w).ceil() as i64;
        let guess_hi = (c + w).floor() as i64;
        let mut lo = guess_lo;
        if self.inside(coord, res, lo)? {
            while self.inside(coord, res, lo - 1)? {
                lo -= 1;
            }
        } else {
            loop {
                lo += 1;
                if lo > guess_hi + 2 {
                    return Ok(None);
                }
                if self.inside(coord, res, lo)? {
                    break;
                }
            }
        }
        let mut hi = guess_hi.max(lo);
        if self.inside(coord, res, hi)? {
            while self.inside(coord, res, hi + 1)? {
                hi += 1;
            }
        } else {
            while !self.inside(coord, res, hi)? {
                hi -= 1;
            }
        }
        Ok(Some((lo, hi)))
    }

    /// Lattice points of the ball left after coordinates `0..coord` were
    /// pinned, given the resulting residual.
    pub fn count_from(&self, coord: usize, res: &ResidualRadius) -> Result<BigUint> {
        let d = self.dim();
        if coord == d {
            return Ok(BigUint::one());
        }
        let key = (d - coord, self.key(res));
        if self.memo {
            if let Some(v) = self.table.lock().expect("count table").get(&key) {
                return Ok(v.clone());
            }
        }
        let total = match self.slice_range(coord, res)? {
            None => BigUint::zero(),
            Some((lo, hi)) if coord + 1 == d => BigUint::from((hi - lo + 1) as u64),
            Some((lo, hi)) => {
                let j = self.js[coord];
                let mut acc = BigUint::zero();
                for y in lo..=hi {
                    acc += self.count_from(coord + 1, &res.pin(y, j))?;
                }
                acc
            }
        };
        if self.memo {
            self.table.lock().expect("count table").insert(key, total.clone());
        }
        Ok(total)
    }
}

/// Exact `C(r, p, d)` for a structured-center ball.
pub fn count_lattice_points(ball: &BallSpec) -> Result<BigUint> {
    ball.validate()?;
    LatticeCounter::for_ball(ball).count(&ball.radius_sq)
}

/// Distinct residual radii reachable by pinning any prefix of coordinates
/// to in-range integers (including the empty prefix).
pub fn residual_set(ball: &BallSpec) -> Result<Vec<ResidualRadius>> {
    let counter = LatticeCounter::for_ball(ball);
    let mut seen: HashSet<ResidualKey> = HashSet::new();
    let mut out = Vec::new();
    let mut frontier = vec![ResidualRadius::base(ball.radius_sq.clone())];
    for coord in 0..=ball.dim() {
        let mut next = Vec::new();
        let mut level_seen: HashSet<ResidualKey> = HashSet::new();
        for res in frontier {
            let key = counter.key(&res);
            if !level_seen.insert(key.clone()) {
                continue;
            }
            if seen.insert(key) {
                out.push(res.clone());
            }
            if coord == ball.dim() {
                continue;
            }
            if let Some((lo, hi)) = counter.slice_range(coord, &res)? {
                for y in lo..=hi {
                    next.push(res.pin(y, counter.js[coord]));
                }
            }
        }
        frontier = next;
    }
    Ok(out)
}

/// `ln V_d(r)` with `V_d(r) = π^{d/2} / Γ(d/2 + 1) · r^d`.
pub fn ln_ball_volume(d: usize, r: f64) -> f64 {
    let h = d as f64 / 2.0;
    h * std::f64::consts::PI.ln() - libm::lgamma(h + 1.0) + d as f64 * r.ln()
}

pub fn ball_volume(d: usize, r: f64) -> Result<f64> {
    if d == 0 {
        return Ok(1.0);
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid("radius", format!("{r} is not a positive finite value")));
    }
    let ln_volume = ln_ball_volume(d, r);
    let v = ln_volume.exp();
    if !v.is_finite() {
        return Err(Error::VolumeOverflow { ln_volume });
    }
    Ok(v)
}

/// Radius above which the volume is within `(1 ± β)` of the count:
/// `2 d^{3/2} / β`.
pub fn hybrid_threshold(d: usize, beta: f64) -> f64 {
    2.0 * (d as f64).powf(1.5) / beta
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("beta", format!("{beta} is not in (0, 1)")))
    }
}

/// `V_d(r)` as a `(1 + β)`-approximation of the count for any center.
pub fn approx_count_large(d: usize, r: f64, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let need = hybrid_threshold(d, beta);
    if !(r > need) {
        return Err(Error::Precondition(format!(
            "volume approximation needs r > 2d^(3/2)/beta = {need}, got r = {r}"
        )));
    }
    ball_volume(d, r)
}

/// Value of the hybrid count `P(r, q, k)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum HybridCount {
    Exact(BigUint),
    Volume(f64),
}

impl HybridCount {
    pub fn is_exact(&self) -> bool {
        matches!(self, HybridCount::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            HybridCount::Exact(c) => c.to_f64().unwrap_or(f64::INFINITY),
            HybridCount::Volume(v) => *v,
        }
    }

    pub fn ln(&self) -> f64 {
        match self {
            HybridCount::Exact(c) => ln_biguint(c),
            HybridCount::Volume(v) => v.ln(),
        }
    }

    /// `P(r, q, k)` for a structured-center ball in `k = dim` dimensions,
    /// with `d = dim` in the threshold.
    pub fn of_ball(ball: &BallSpec, beta: f64) -> Result<Self> {
        check_beta(beta)?;
        let r = ball.radius_f64();
        let d = ball.dim();
        if r <= hybrid_threshold(d, beta) {
            Ok(HybridCount::Exact(count_lattice_points(ball)?))
        } else {
            Ok(HybridCount::Volume(ball_volume(d, r)?))
        }
    }

    /// `P(r, q, k)` for an arbitrary center; the small branch requires an
    /// integer center.
    pub fn of_free_ball(ball: &FreeBall, beta: f64) -> Result<Self> {
        check_beta(beta)?;
        let r = ball.radius_f64();
        let d = ball.dim();
        if r > hybrid_threshold(d, beta) {
            return Ok(HybridCount::Volume(ball_volume(d, r)?));
        }
        if ball.center.iter().all(|c| c.is_integer()) {
            let counter = LatticeCounter::integer_centered(d);
            return Ok(HybridCount::Exact(counter.count(&ball.radius_sq())?));
        }
        Err(Error::Precondition(format!(
            "r = {r} ≤ 2d^(3/2)/beta = {} needs a structured center for exact counting",
            hybrid_threshold(d, beta)
        )))
    }

    /// `P(r, q, k)` for an integer center in `k` of `d_ambient` dimensions.
    /// `k = 0` is the empty product, 1.
    pub fn lattice_centered(
        counter: &LatticeCounter,
        k: usize,
        r2: &BigRational,
        beta: f64,
        d_ambient: usize,
    ) -> Result<Self> {
        if k == 0 {
            return Ok(HybridCount::Exact(BigUint::one()));
        }
        let r = rational_to_f64(r2).sqrt();
        if r <= hybrid_threshold(d_ambient, beta) {
            let from = counter.dim() - k;
            Ok(HybridCount::Exact(counter.count_from(from, &ResidualRadius::base(r2.clone()))?))
        } else {
            Ok(HybridCount::Volume(ball_volume(k, r)?))
        }
    }
}

pub(crate) fn ln_biguint(c: &BigUint) -> f64 {
    if c.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = c.bits();
    if bits < 1000 {
        return c.to_f64().expect("fits").ln();
    }
    let shift = bits - 64;
    let top = (c >> shift).to_f64().expect("fits");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{parse_rational, StructuredCoord};
    use crate::reference::enumerate_ball;
    use proptest::prelude::*;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn brute(ball: &BallSpec) -> u64 {
        enumerate_ball(&ball.center_values(), &ball.radius_sq, None).unwrap().len() as u64
    }

    #[test]
    fn small_fixtures() {
        let b = BallSpec::lattice(&[0], 2.5).unwrap();
        assert_eq!(count_lattice_points(&b).unwrap(), BigUint::from(5u32));
        let b = BallSpec::lattice(&[0, 0], 2.0).unwrap();
        assert_eq!(count_lattice_points(&b).unwrap(), BigUint::from(13u32));
        let b = BallSpec::lattice(&[0, 0, 0], 2.5).unwrap();
        assert_eq!(count_lattice_points(&b).unwrap(), BigUint::from(81u32));
    }

    #[test]
    fn gauss_circle() {
        let want = [5u32, 13, 29, 49, 81, 113, 149, 197, 253, 317];
        for (r, w) in (1..=10).zip(want) {
            let b = BallSpec::lattice(&[0, 0], r as f64).unwrap();
            assert_eq!(count_lattice_points(&b).unwrap(), BigUint::from(w), "r = {r}");
        }
    }

    #[test]
    fn four_squares() {
        let c = LatticeCounter::integer_centered(4);
        for (n, sigma) in [(5u32, 6u32), (15, 24), (21, 32)] {
            let hi = c.count(&BigRational::from_integer(n.into())).unwrap();
            let lo = c.count(&BigRational::from_integer((n - 1).into())).unwrap();
            assert_eq!(hi - lo, BigUint::from(8 * sigma));
        }
    }

    #[test]
    fn structured_center_matches_brute_force() {
        let lambda = Lambda::parse("1/4").unwrap();
        let center = vec![StructuredCoord::new(0, 2), StructuredCoord::new(1, -1), StructuredCoord::new(0, 0)];
        let ball = BallSpec::new(q("2.2") * q("2.2"), lambda, 2, center).unwrap();
        assert_eq!(count_lattice_points(&ball).unwrap(), BigUint::from(brute(&ball)));
    }

    #[test]
    fn irrational_lambda_matches_brute_force() {
        let lambda = Lambda::parse("1/pi").unwrap();
        let center = vec![StructuredCoord::new(3, 1), StructuredCoord::new(-2, -3), StructuredCoord::new(0, 2)];
        let ball = BallSpec::new(q("3.3") * q("3.3"), lambda, 3, center).unwrap();
        assert_eq!(count_lattice_points(&ball).unwrap(), BigUint::from(brute(&ball)));
    }

    #[test]
    fn guard_band_rejects_ambiguous_comparison() {
        // With λ = ~0.5 (error 0.1), the boundary point of radius 0.5 around
        // 0 + 1·λ cannot be certified.
        let lambda = Lambda::parse("~0.5").unwrap();
        let ball = BallSpec::new(q("1/4"), lambda, 1, vec![StructuredCoord::new(0, 1)]).unwrap();
        assert!(matches!(
            count_lattice_points(&ball),
            Err(Error::GuardBand) | Err(Error::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn residual_set_bounds() {
        let lambda = Lambda::parse("1/2").unwrap();
        for d in 1..=3 {
            let center: Vec<_> = (0..d).map(|k| StructuredCoord::new(0, (k % 2) as i64)).collect();
            let ball = BallSpec::new(q("9"), lambda.clone(), 1, center).unwrap();
            let set = residual_set(&ball).unwrap();
            assert!(set.len() <= 40, "d = {d}: {}", set.len());
        }
        let ball = BallSpec::new(q("6.25"), lambda, 1, vec![StructuredCoord::new(0, 1)]).unwrap();
        assert!(residual_set(&ball).unwrap().len() as u64 <= 1 + brute(&ball));
    }

    #[test]
    fn memo_keys_are_residual_members() {
        let lambda = Lambda::parse("1/3").unwrap();
        let center = vec![StructuredCoord::new(0, 1), StructuredCoord::new(0, -1), StructuredCoord::new(0, 2)];
        let ball = BallSpec::new(q("5"), lambda, 2, center).unwrap();
        let counter = LatticeCounter::for_ball(&ball);
        counter.count(&ball.radius_sq).unwrap();
        let members: HashSet<ResidualKey> = residual_set(&ball).unwrap().iter().map(|r| counter.key(r)).collect();
        for (_, key) in counter.table.lock().unwrap().keys() {
            assert!(members.contains(key));
        }
    }

    #[test]
    fn volumes() {
        assert!((ball_volume(2, 1.0).unwrap() - std::f64::consts::PI).abs() < 1e-14);
        let v3 = ball_volume(3, 2.0).unwrap();
        assert!((v3 - 32.0 * std::f64::consts::PI / 3.0).abs() / v3 < 1e-12);
        let v20 = ball_volume(20, 10.0).unwrap();
        let want = 2580689139001406001.3;
        assert!((v20 - want).abs() / want < 1e-10);
        assert!(matches!(ball_volume(400, 1e6), Err(Error::VolumeOverflow { .. })));
    }

    #[test]
    fn volume_approximation_contract() {
        assert!(approx_count_large(2, 11.0, 0.5).is_err());
        for (d, r, c) in [(2usize, 12.0, 441.0), (3, 21.0, 38911.0)] {
            let v = approx_count_large(d, r, 0.5).unwrap();
            assert!((v - c).abs() / c <= 0.5);
        }
    }

    #[test]
    fn hybrid_branches() {
        let counter = LatticeCounter::integer_centered(2);
        assert_eq!(
            HybridCount::lattice_centered(&counter, 0, &q("9"), 0.5, 2).unwrap(),
            HybridCount::Exact(BigUint::one())
        );
        let b = BallSpec::lattice(&[0, 0], 3.0).unwrap();
        assert_eq!(HybridCount::of_ball(&b, 0.5).unwrap(), HybridCount::Exact(29u32.into()));
        let big = BallSpec::lattice(&[0, 0], 20.0).unwrap();
        let v = HybridCount::of_ball(&big, 0.5).unwrap();
        assert_eq!(v, HybridCount::Volume(ball_volume(2, 20.0).unwrap()));
        let free = FreeBall::from_f64(&[0.5, 0.1], 3.0).unwrap();
        assert!(HybridCount::of_free_ball(&free, 0.5).is_err());
    }

    #[test]
    fn memo_soundness() {
        for d in 1..=4 {
            for r in ["1", "2.5", "3.7", "4"] {
                let r2 = q(r) * q(r);
                let lambda = Lambda::parse("1/3").unwrap();
                let js: Vec<i64> = (0..d).map(|k| (k as i64 % 3) - 1).collect();
                let a = LatticeCounter::new(lambda.clone(), js.clone()).count(&r2).unwrap();
                let b = LatticeCounter::new(lambda, js).with_memo(false).count(&r2).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn radius_ratio_growth() {
        let beta = 0.5;
        let delta = 0.05;
        let c = LatticeCounter::integer_centered(2);
        let r0 = hybrid_threshold(2, beta) + 0.3;
        for step in 0..5 {
            let r_lo = r0 + step as f64;
            let r_hi = r_lo * (1.0 + delta);
            let lo = c.count(&(crate::lattice::rational_from_f64(r_lo * r_lo).unwrap())).unwrap();
            let hi = c.count(&(crate::lattice::rational_from_f64(r_hi * r_hi).unwrap())).unwrap();
            assert!(lo <= hi);
            let bound = (1.0 + beta) / (1.0 - beta) * (1.0 + delta).powi(2) * lo.to_f64().unwrap();
            assert!(hi.to_f64().unwrap() <= bound);
        }
    }

    fn arb_ball() -> impl Strategy<Value = BallSpec> {
        (1usize..=3, 1u32..=30, 0usize..3, proptest::collection::vec((-3i64..=3, -2i64..=2), 3))
            .prop_map(|(d, r10, li, coords)| {
                let lambda = Lambda::parse(["0", "1/3", "1/4"][li]).unwrap();
                let center = coords[..d].iter().map(|&(i, j)| StructuredCoord::new(i, j)).collect();
                let r = BigRational::new(r10.into(), 10.into());
                BallSpec::new(&r * &r, lambda, 2, center).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn dp_matches_brute_force(ball in arb_ball()) {
            prop_assert_eq!(count_lattice_points(&ball).unwrap(), BigUint::from(brute(&ball)));
        }

        #[test]
        fn translation_and_permutation_invariance(ball in arb_ball(), shift in -5i64..5, rot in 0usize..3) {
            let base = count_lattice_points(&ball).unwrap();
            let mut moved = ball.clone();
            for c in &mut moved.center {
                c.i += shift;
            }
            prop_assert_eq!(&count_lattice_points(&moved).unwrap(), &base);
            let mut perm = ball.clone();
            let n = perm.center.len();
            perm.center.rotate_left(rot % n);
            prop_assert_eq!(&count_lattice_points(&perm).unwrap(), &base);
        }

        #[test]
        fn monotone_in_radius(ball in arb_ball(), grow in 0u32..20) {
            let mut bigger = ball.clone();
            bigger.radius_sq = &ball.radius_sq + BigRational::new(grow.into(), 7.into());
            prop_assert!(count_lattice_points(&ball).unwrap() <= count_lattice_points(&bigger).unwrap());
        }
    }
}
