//! Lattice points in Euclidean balls.
//!
//! Centers come in two shapes. A structured center has coordinates
//! `x_k = i_k + j_k·λ` with integers `i_k, j_k`, `|j_k| ≤ l`, which is what
//! the exact counting DP needs. A free center is any rational vector; it is
//! served by the volume approximation and the rejection sampler.
//!
//! All geometry is exact rational arithmetic. An irrational `λ` is carried
//! as a rational approximant plus an error bound, and comparisons that the
//! bound cannot certify are refused rather than guessed.

pub mod count;
pub mod sample;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::element::ElementId;
use crate::error::{Error, Result};

pub use count::{
    approx_count_large, ball_volume, count_lattice_points, hybrid_threshold, ln_ball_volume,
    residual_set, HybridCount, LatticeCounter, ResidualRadius,
};
pub use sample::{
    build_partition, nearest_lattice_point, sample_big_ball, sample_big_ball_lattice_center,
    sample_small_ball, BigBallSampler, IntervalPartition, SamplerConfig, SmallBallSampler,
};

/// 1/π to 55 decimal places.
const INV_PI: &str = "0.3183098861837906715377675267450287240689192914809128975";

/// Parses `"u/v"`, an integer, or a decimal with optional exponent into an
/// exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Instance(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("0{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut v = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        v = -v;
    }
    Ok(v)
}

/// Exact rational for the shortest decimal that round-trips `x`.
pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    if !x.is_finite() {
        return Err(Error::invalid("value", format!("{x} is not finite")));
    }
    parse_rational(&format!("{x}"))
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// `⌊√x⌋` for a non-negative rational, `None` when `x < 0`.
pub fn floor_sqrt(x: &BigRational) -> Option<BigInt> {
    if x.is_negative() {
        return None;
    }
    Some(x.floor().to_integer().sqrt())
}

/// The shift parameter of structured centers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lambda {
    pub value: BigRational,
    /// Absolute error bound of `value` when `λ` is only approximated.
    pub error: Option<BigRational>,
    pub label: String,
}

impl Lambda {
    pub fn exact(value: BigRational) -> Self {
        let label = value.to_string();
        Lambda {
            value,
            error: None,
            label,
        }
    }

    pub fn zero() -> Self {
        Lambda::exact(BigRational::zero())
    }

    pub fn is_exact(&self) -> bool {
        self.error.is_none()
    }

    /// Accepts `"u/v"`, decimals, `"1/pi"`, and `"~<decimal>"` for an
    /// approximate value whose error is one unit in its last digit.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if matches!(t.to_ascii_lowercase().as_str(), "1/pi" | "pi^-1" | "inv_pi") {
            let value = parse_rational(INV_PI)?;
            let error = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), 55));
            return Ok(Lambda {
                value,
                error: Some(error),
                label: "1/pi".into(),
            });
        }
        if let Some(rest) = t.strip_prefix('~') {
            let value = parse_rational(rest)?;
            let frac_digits = rest
                .split_once('.')
                .map(|(_, f)| f.chars().take_while(|c| c.is_ascii_digit()).count())
                .unwrap_or(0);
            let error = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), frac_digits));
            return Ok(Lambda {
                value,
                error: Some(error),
                label: t.into(),
            });
        }
        Ok(Lambda {
            value: parse_rational(t)?,
            error: None,
            label: t.into(),
        })
    }
}

impl FromStr for Lambda {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Lambda::parse(s)
    }
}

/// One structured center coordinate `i + j·λ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuredCoord {
    pub i: BigInt,
    pub j: i64,
}

impl StructuredCoord {
    pub fn new(i: impl Into<BigInt>, j: i64) -> Self {
        StructuredCoord { i: i.into(), j }
    }

    pub fn value(&self, lambda: &Lambda) -> BigRational {
        BigRational::from_integer(self.i.clone()) + &lambda.value * BigInt::from(self.j)
    }
}

/// Parses `"i1+j1L,i2-j2L,..."`. The trailing `L` is optional (`"0+0"`)
/// and a bare integer means `j = 0`.
pub fn parse_structured_center(s: &str) -> Result<Vec<StructuredCoord>> {
    let bad = |p: &str| Error::Instance(format!("bad center coordinate {p:?}; expected i+jL"));
    s.split(',')
        .map(|part| {
            let p: String = part.chars().filter(|c| !c.is_whitespace()).collect();
            let (body, has_l) = match p.strip_suffix(['L', 'l']) {
                Some(b) => (b, true),
                None => (p.as_str(), false),
            };
            if body.is_empty() {
                return Err(bad(part));
            }
            let split = body
                .char_indices()
                .skip(1)
                .filter(|&(_, c)| c == '+' || c == '-')
                .map(|(k, _)| k)
                .last();
            let Some(split) = split else {
                if has_l {
                    return Err(bad(part));
                }
                let i: BigInt = body.parse().map_err(|_| bad(part))?;
                return Ok(StructuredCoord::new(i, 0));
            };
            let i: BigInt = body[..split].parse().map_err(|_| bad(part))?;
            let jtxt = &body[split..];
            let j: i64 = match jtxt {
                "+" if has_l => 1,
                "-" if has_l => -1,
                _ => jtxt.trim_start_matches('+').parse().map_err(|_| bad(part))?,
            };
            Ok(StructuredCoord::new(i, j))
        })
        .collect()
}

/// A `d`-ball whose center lies in `D(λ, d, l)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallSpec {
    pub radius_sq: BigRational,
    pub lambda: Lambda,
    pub l: u64,
    pub center: Vec<StructuredCoord>,
}

impl BallSpec {
    pub fn new(radius_sq: BigRational, lambda: Lambda, l: u64, center: Vec<StructuredCoord>) -> Result<Self> {
        let b = BallSpec {
            radius_sq,
            lambda,
            l,
            center,
        };
        b.validate()?;
        Ok(b)
    }

    /// Integer-centered ball of radius `r`.
    pub fn lattice(center: &[i64], r: f64) -> Result<Self> {
        let r = rational_from_f64(r)?;
        Self::new(
            &r * &r,
            Lambda::zero(),
            0,
            center.iter().map(|&c| StructuredCoord::new(c, 0)).collect(),
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.center.is_empty() {
            return Err(Error::invalid("dim", "dimension must be at least 1"));
        }
        if !self.radius_sq.is_positive() {
            return Err(Error::invalid("radius", "must be positive"));
        }
        if let Some(c) = self.center.iter().find(|c| c.j.unsigned_abs() > self.l) {
            return Err(Error::invalid(
                "center",
                format!("|j| = {} exceeds l = {}", c.j.unsigned_abs(), self.l),
            ));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn radius_f64(&self) -> f64 {
        rational_to_f64(&self.radius_sq).sqrt()
    }

    pub fn js(&self) -> Vec<i64> {
        self.center.iter().map(|c| c.j).collect()
    }

    pub fn center_values(&self) -> Vec<BigRational> {
        self.center.iter().map(|c| c.value(&self.lambda)).collect()
    }

    pub fn is_lattice_centered(&self) -> bool {
        self.center.iter().all(|c| c.j == 0)
    }

    /// Membership using the λ approximant; exact for rational λ.
    pub fn contains(&self, point: &[BigInt]) -> bool {
        contains_point(&self.center_values(), &self.radius_sq, point)
    }
}

/// A ball with an arbitrary rational center.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FreeBall {
    pub center: Vec<BigRational>,
    pub radius: BigRational,
}

impl FreeBall {
    pub fn new(center: Vec<BigRational>, radius: BigRational) -> Result<Self> {
        if center.is_empty() {
            return Err(Error::invalid("dim", "dimension must be at least 1"));
        }
        if !radius.is_positive() {
            return Err(Error::invalid("radius", "must be positive"));
        }
        Ok(FreeBall { center, radius })
    }

    pub fn from_f64(center: &[f64], radius: f64) -> Result<Self> {
        Self::new(
            center.iter().map(|&c| rational_from_f64(c)).collect::<Result<_>>()?,
            rational_from_f64(radius)?,
        )
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn radius_sq(&self) -> BigRational {
        &self.radius * &self.radius
    }

    pub fn radius_f64(&self) -> f64 {
        rational_to_f64(&self.radius)
    }

    pub fn contains(&self, point: &[BigInt]) -> bool {
        contains_point(&self.center, &self.radius_sq(), point)
    }
}

/// Exact test `Σ (z_k − x_k)² ≤ r²`.
pub fn contains_point(center: &[BigRational], radius_sq: &BigRational, point: &[BigInt]) -> bool {
    if center.len() != point.len() {
        return false;
    }
    let mut acc = BigRational::zero();
    for (x, z) in center.iter().zip(point) {
        let diff = BigRational::from_integer(z.clone()) - x;
        acc += &diff * &diff;
        if &acc > radius_sq {
            return false;
        }
    }
    true
}

pub fn point_element(point: Vec<BigInt>) -> ElementId {
    ElementId::Point(point)
}

/// Rounds half toward zero: `0.5 → 0`, `−0.5 → 0`, `1.6 → 2`.
pub(crate) fn round_half_toward_zero(x: &BigRational) -> BigInt {
    let fl = x.floor().to_integer();
    let frac = x - BigRational::from_integer(fl.clone());
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if x.is_negative() {
        // the fractional part of |x| is 1 - frac
        if !frac.is_zero() && frac >= half {
            fl + 1
        } else {
            fl
        }
    } else if frac <= half {
        fl
    } else {
        fl + 1
    }
}

impl fmt::Display for StructuredCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.j >= 0 {
            write!(f, "{}+{}L", self.i, self.j)
        } else {
            write!(f, "{}{}L", self.i, self.j)
        }
    }
}
