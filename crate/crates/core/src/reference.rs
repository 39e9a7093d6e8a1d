//! Brute-force answers for checking the estimators, counters and samplers.
//! Nothing here is used on a production path.

use std::collections::HashSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::element::ElementId;
use crate::error::{Error, Result};
use crate::lattice::{contains_point, rational_to_f64};

pub const DEFAULT_CAP: u64 = 10_000_000;

/// `|A_1 ∪ … ∪ A_m|` by hashing.
pub fn exact_union(sets: &[Vec<ElementId>], cap: Option<u64>) -> Result<u64> {
    let cap = cap.unwrap_or(DEFAULT_CAP);
    let total: u64 = sets.iter().map(|s| s.len() as u64).sum();
    if total > cap {
        return Err(Error::CapExceeded {
            what: format!("{total} total elements"),
            cap,
        });
    }
    let seen: HashSet<&ElementId> = sets.iter().flatten().collect();
    Ok(seen.len() as u64)
}

/// Union size of the sets at `indices`.
pub fn union_of(sets: &[Vec<ElementId>], indices: &[usize]) -> u64 {
    let seen: HashSet<&ElementId> = indices.iter().flat_map(|&i| &sets[i]).collect();
    seen.len() as u64
}

/// Inclusion-exclusion over all non-empty subfamilies. Exponential in `m`.
pub fn inclusion_exclusion(sets: &[Vec<ElementId>]) -> i64 {
    let hashed: Vec<HashSet<&ElementId>> = sets.iter().map(|s| s.iter().collect()).collect();
    let mut total = 0i64;
    for mask in 1u64..(1 << sets.len()) {
        let members: Vec<usize> = (0..sets.len()).filter(|i| mask >> i & 1 == 1).collect();
        let first = &hashed[members[0]];
        let n = first
            .iter()
            .filter(|x| members[1..].iter().all(|&j| hashed[j].contains(*x)))
            .count() as i64;
        total += if members.len() % 2 == 1 { n } else { -n };
    }
    total
}

/// Every lattice point of the closed ball, in lexicographic order.
pub fn enumerate_ball(center: &[BigRational], radius_sq: &BigRational, cap: Option<u64>) -> Result<Vec<Vec<BigInt>>> {
    let cap = cap.unwrap_or(DEFAULT_CAP);
    let r = rational_to_f64(radius_sq).max(0.0).sqrt();
    let boxed = (2.0 * r + 2.0).powi(center.len() as i32);
    if boxed > cap as f64 {
        return Err(Error::CapExceeded {
            what: format!("bounding box of about {boxed:.3e} points"),
            cap,
        });
    }
    let ranges: Vec<(i64, i64)> = center
        .iter()
        .map(|c| {
            let c = rational_to_f64(c);
            ((c - r).floor() as i64 - 1, (c + r).ceil() as i64 + 1)
        })
        .collect();
    let mut out = Vec::new();
    let mut cur: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    if ranges.is_empty() {
        return Ok(out);
    }
    loop {
        let p: Vec<BigInt> = cur.iter().map(|&x| BigInt::from(x)).collect();
        if contains_point(center, radius_sq, &p) {
            out.push(p);
        }
        let mut k = cur.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if cur[k] < ranges[k].1 {
                cur[k] += 1;
                break;
            }
            cur[k] = ranges[k].0;
        }
    }
}

/// Lattice points in the union of balls, each given as `(center, r²)`.
pub fn ball_union_points(balls: &[(Vec<BigRational>, BigRational)], cap: Option<u64>) -> Result<HashSet<Vec<BigInt>>> {
    let mut seen = HashSet::new();
    for (c, r2) in balls {
        seen.extend(enumerate_ball(c, r2, cap)?);
    }
    Ok(seen)
}

/// Best `k`-subfamily by exhaustive search, ties to the lexicographically
/// first index set.
pub fn exhaustive_max_coverage(sets: &[Vec<ElementId>], k: usize) -> Result<(Vec<usize>, u64)> {
    if k == 0 || k > sets.len() {
        return Err(Error::invalid("k", format!("{k} is not in [1, {}]", sets.len())));
    }
    let mut best = (Vec::new(), 0u64);
    for combo in (0..sets.len()).combinations(k) {
        let v = union_of(sets, &combo);
        if v > best.1 || best.0.is_empty() {
            best = (combo, v);
        }
    }
    Ok(best)
}

/// Greedy maximum coverage with exact unions, ties to the lowest index.
pub fn exact_greedy_coverage(sets: &[Vec<ElementId>], k: usize) -> Result<(Vec<usize>, u64)> {
    if k == 0 || k > sets.len() {
        return Err(Error::invalid("k", format!("{k} is not in [1, {}]", sets.len())));
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    let mut value = 0;
    for _ in 0..k {
        let mut best: Option<(usize, u64)> = None;
        for j in (0..sets.len()).filter(|j| !chosen.contains(j)) {
            let mut h = chosen.clone();
            h.push(j);
            let v = union_of(sets, &h);
            if best.map_or(true, |(_, b)| v > b) {
                best = Some((j, v));
            }
        }
        let (j, v) = best.expect("k <= m leaves a candidate");
        chosen.push(j);
        value = v;
    }
    Ok((chosen, value))
}

/// `Σ_{d | n} d`.
pub fn sigma(n: u64) -> u64 {
    (1..=n).filter(|d| n % d == 0).sum()
}
