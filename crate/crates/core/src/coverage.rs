//! Greedy maximum coverage with estimated unions, and the ratio arithmetic
//! that turns `1 − (1 − b/k)^k − ξ` into the classical `1 − 1/e`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{approximate_union, EstimatorOptions};
use crate::oracle::OracleList;
use crate::rng::SeedTree;
use crate::schedule::{ParameterSchedule, ScheduleInput};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageResult {
    /// Selected indices in the order they were picked.
    pub indices: Vec<usize>,
    /// Estimated `|∪_{j∈H} A_j|`.
    pub estimate: f64,
    /// Union estimates run, one per candidate per step after the first.
    pub evaluations: u64,
    /// Failure budget given to each evaluation.
    pub gamma_per_evaluation: f64,
}

/// Index of the largest value, lowest index on ties.
pub fn argmax_lowest(values: &[(usize, f64)]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for &(j, v) in values {
        if best.map_or(true, |(_, b)| v > b) {
            best = Some((j, v));
        }
    }
    best.map(|(j, _)| j)
}

/// Greedy selection of `k` sets. Each step adds the candidate with the
/// largest estimated union together with the sets already chosen. Single
/// sets are compared by their reported sizes, so the first step costs no
/// queries. Every evaluation gets its own seed stream and a `γ/(m·k)` share
/// of the failure budget.
pub fn greedy_max_coverage(
    list: &OracleList,
    k: usize,
    xi: f64,
    gamma: f64,
    seeds: &SeedTree,
    opts: &EstimatorOptions,
) -> Result<CoverageResult> {
    let m = list.len();
    if k == 0 || k > m {
        return Err(Error::invalid("k", format!("{k} is not in [1, {m}]")));
    }
    if !(xi > 0.0 && xi < 1.0) {
        return Err(Error::invalid("xi", format!("{xi} is not in (0, 1)")));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::invalid("gamma", format!("{gamma} is not in (0, 1)")));
    }
    let gamma_e = gamma / (m * k) as f64;
    let sizes = list.sizes();
    let first = argmax_lowest(&sizes.iter().cloned().enumerate().collect::<Vec<_>>()).expect("m >= 2");
    let mut chosen = vec![first];
    let mut estimate = sizes[first];
    let mut evaluations = 0;
    let mut schedules: HashMap<usize, ParameterSchedule> = HashMap::new();
    for step in 1..k {
        let size = step + 1;
        if !schedules.contains_key(&size) {
            schedules.insert(size, ParameterSchedule::build(ScheduleInput::new(size, xi, gamma_e))?);
        }
        let sched = &schedules[&size];
        let mut scores = Vec::with_capacity(m - step);
        for j in (0..m).filter(|j| !chosen.contains(j)) {
            let mut h = chosen.clone();
            h.push(j);
            let sub = list.subset(&h)?;
            let s = seeds.child_indexed("step", step as u64).child_indexed("candidate", j as u64);
            let e = approximate_union(&sub, sched, &s, opts)?;
            evaluations += 1;
            scores.push((j, e.value));
        }
        let j = argmax_lowest(&scores).expect("k <= m leaves a candidate");
        estimate = scores.iter().find(|s| s.0 == j).expect("present").1;
        chosen.push(j);
    }
    Ok(CoverageResult {
        indices: chosen,
        estimate,
        evaluations,
        gamma_per_evaluation: gamma_e,
    })
}

/// `η = e^{−1/4}`.
pub fn eta() -> f64 {
    (-0.25f64).exp()
}

/// `(η/e)(b + b/(2k) − 1)`, the largest admissible `ξ`.
pub fn xi_for(k: u64, b: f64) -> f64 {
    let kf = k as f64;
    eta() / std::f64::consts::E * (b + b / (2.0 * kf) - 1.0)
}

/// Upper bound `1/e − (η/e)(b + b/(2k) − 1)` on `(1 − b/k)^k`.
pub fn coverage_ratio_bound(k: u64, b: f64) -> Result<f64> {
    if k < 2 {
        return Err(Error::invalid("k", format!("{k} is below 2")));
    }
    if !(0.0..=1.0).contains(&b) {
        return Err(Error::invalid("b", format!("{b} is not in [0, 1]")));
    }
    Ok(1.0 / std::f64::consts::E - xi_for(k, b))
}

/// Bias level `α = 1/(100k)` used for every oracle parameter.
pub fn alpha_for(k: u64) -> f64 {
    1.0 / (100.0 * k as f64)
}

/// `b = (1−α)²/(1+α)²`.
pub fn b_for(alpha: f64) -> f64 {
    ((1.0 - alpha) / (1.0 + alpha)).powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::ElementId;
    use crate::oracle::BiasSpec;
    use crate::reference::{exact_greedy_coverage, exhaustive_max_coverage, union_of};
    use proptest::prelude::*;

    fn ids(r: std::ops::Range<i64>) -> Vec<ElementId> {
        r.map(ElementId::Id).collect()
    }

    #[test]
    fn ratio_bound_examples() {
        let e = std::f64::consts::E;
        let k2 = coverage_ratio_bound(2, 1.0).unwrap();
        assert!(0.25 <= k2);
        assert!((k2 - (1.0 / e - eta() / e * 0.25)).abs() < 1e-15);
        for k in [10u64, 100, 1000, 100_000] {
            let b = coverage_ratio_bound(k, 1.0).unwrap();
            assert!((1.0 - 1.0 / k as f64).powi(k as i32) <= b);
            assert!((b - (1.0 / e - eta() / e / (2.0 * k as f64))).abs() < 1e-15);
        }
        assert!(coverage_ratio_bound(1, 0.5).is_err());
    }

    #[test]
    fn xi_choice_beats_one_minus_inv_e() {
        for k in 2..=50u64 {
            let b = b_for(alpha_for(k));
            assert!(b + b / (2.0 * k as f64) - 1.0 >= 1.0 / (4.0 * k as f64));
            let xi = xi_for(k, b);
            let ratio = 1.0 - (1.0 - b / k as f64).powi(k as i32) - xi;
            assert!(ratio > 1.0 - 1.0 / std::f64::consts::E, "k = {k}");
        }
    }

    #[test]
    fn k_equals_m_takes_everything() {
        let sets = vec![ids(0..5), ids(3..9), ids(20..22)];
        let list = OracleList::from_explicit(sets, BiasSpec::ZERO, SeedTree::new(0)).unwrap();
        let r = greedy_max_coverage(&list, 3, 0.5, 0.2, &SeedTree::new(1), &EstimatorOptions::targeting(2000.0, 500.0)).unwrap();
        let mut idx = r.indices.clone();
        idx.sort();
        assert_eq!(idx, vec![0, 1, 2]);
        assert_eq!(r.evaluations, 2 + 1);
    }

    #[test]
    fn giant_set_picked_first() {
        let mut sets = vec![ids(1000..1400)];
        sets.extend((0..6).map(|i| ids(i * 10..i * 10 + 5)));
        let list = OracleList::from_explicit(sets, BiasSpec::ZERO, SeedTree::new(0)).unwrap();
        let r = greedy_max_coverage(&list, 1, 0.5, 0.2, &SeedTree::new(1), &EstimatorOptions::default()).unwrap();
        assert_eq!(r.indices, vec![0]);
        assert_eq!(r.estimate, 400.0);
    }

    #[test]
    fn exact_greedy_classical_ratio() {
        let sets = vec![ids(0..6), ids(4..10), ids(8..12), ids(0..3), ids(11..16)];
        for k in 1..=4 {
            let (_, opt) = exhaustive_max_coverage(&sets, k).unwrap();
            let (h, g) = exact_greedy_coverage(&sets, k).unwrap();
            assert_eq!(g, union_of(&sets, &h));
            let bound = 1.0 - (1.0 - 1.0 / k as f64).powi(k as i32);
            assert!(g as f64 >= bound * opt as f64);
        }
    }

    proptest! {
        #[test]
        fn argmax_invariant_under_scaling(
            v in proptest::collection::vec(0u32..50, 1..12),
            c in 0.01f64..100.0,
        ) {
            let a: Vec<(usize, f64)> = v.iter().enumerate().map(|(i, &x)| (i, x as f64)).collect();
            let b: Vec<(usize, f64)> = a.iter().map(|&(i, x)| (i, x * c)).collect();
            prop_assert_eq!(argmax_lowest(&a), argmax_lowest(&b));
        }
    }
}
