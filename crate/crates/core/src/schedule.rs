//! Derived constants and parameter functions of the union estimator.
//!
//! Every quantity the estimator consumes is computed here once from
//! `(m, ε, γ, c₁, z_min, z_max)`. "log" is base 2 clamped below at 1 (so
//! `m = 2` is legal); logarithms of ratios use `ln`, which only rescales
//! constants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inputs of [`ParameterSchedule::build`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleInput {
    pub m: usize,
    pub epsilon: f64,
    pub gamma: f64,
    pub c1: f64,
    pub z_min: f64,
    pub z_max: f64,
}

impl ScheduleInput {
    /// Defaults that are valid for every instance: `c₁ = 0`, `z_min = 1`,
    /// `z_max = m`.
    pub fn new(m: usize, epsilon: f64, gamma: f64) -> Self {
        ScheduleInput {
            m,
            epsilon,
            gamma,
            c1: 0.0,
            z_min: 1.0,
            z_max: m as f64,
        }
    }

    pub fn c1(mut self, c1: f64) -> Self {
        self.c1 = c1;
        self
    }

    pub fn thickness(mut self, z_min: f64, z_max: f64) -> Self {
        self.z_min = z_min;
        self.z_max = z_max;
        self
    }
}

/// Numeric check of `g*(ε₁)^{f₄/f₂} ≤ ε₁/m²` with `g*(x) = e^{-x²/6}`, in
/// log form. As printed, `f₄` divides by `6ε₁²` and the inequality fails
/// for every `m`; the `corrected` variant multiplies instead and holds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentCheck {
    pub ln_lhs: f64,
    pub ln_rhs: f64,
    pub holds: bool,
    pub corrected_ln_lhs: f64,
    pub corrected_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParameterSchedule {
    pub m: usize,
    pub epsilon: f64,
    pub gamma: f64,
    pub c1: f64,
    pub z_min: f64,
    pub z_max: f64,
    pub log_m: f64,
    pub eps0: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub eps3: f64,
    pub delta: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    pub f4: f64,
    pub f5: f64,
    pub f6: f64,
    pub h1: f64,
    pub v_bound: u64,
    pub exponent_check: ExponentCheck,
}

/// Base-2 logarithm clamped below at 1.
pub fn log_clamped(x: f64) -> f64 {
    x.log2().max(1.0)
}

fn check_unit(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("{v} is not in (0, 1)")))
    }
}

impl ParameterSchedule {
    pub fn build(input: ScheduleInput) -> Result<Self> {
        let ScheduleInput {
            m,
            epsilon,
            gamma,
            c1,
            z_min,
            z_max,
        } = input;
        if m < 2 {
            return Err(Error::invalid("m", format!("{m} < 2")));
        }
        check_unit("epsilon", epsilon)?;
        check_unit("gamma", gamma)?;
        if !(c1 >= 0.0 && c1.is_finite()) {
            return Err(Error::invalid("c1", format!("{c1} is not a finite value ≥ 0")));
        }
        let mf = m as f64;
        if !(z_min >= 1.0) {
            return Err(Error::invalid("z_min", format!("{z_min} < 1")));
        }
        if !(z_max >= z_min) {
            return Err(Error::invalid("z_max", format!("{z_max} < z_min = {z_min}")));
        }
        if !(z_max <= mf) {
            return Err(Error::invalid("z_max", format!("{z_max} > m = {m}")));
        }

        let log_m = log_clamped(mf);
        let eps0 = epsilon / 9.0;
        let eps1 = eps0 / (6.0 * log_m);
        let eps2 = eps1 / 4.0;
        let eps3 = eps0 / 3.0;
        let delta = eps2 / 2.0;
        let gamma1 = gamma / 3.0;
        let gamma2 = gamma / (6.0 * log_m);

        let f1 = 8.0 * mf.powf(c1);
        let ln_step = delta.ln_1p();
        let v_bound = (2.0 * (z_max / z_min).ln() / ln_step).ceil() as u64 + 1;
        let f2 = 2.0 * v_bound as f64 / eps3 + 2.0 * (mf / z_min).ln() / (eps3 * ln_step);
        let f3 = f1 * 6.0 * (2.0 / gamma2).ln() / (eps2 * eps2);
        let f4 = f2 * (mf * mf / eps1).log2() / (6.0 * eps1 * eps1) + f3 / (eps2 * f1);
        let f5 = mf * f4 / z_min;
        let h1 = f5.ceil();
        let gamma3 = gamma2 / (2.0 * f5);
        let f6 = f1 * (24.0 / (eps1 * eps1)) * (2.0 / gamma3).ln();

        let ln_rhs = (eps1 / (mf * mf)).ln();
        let ln_lhs = -(eps1 * eps1 / 6.0) * (f4 / f2);
        let corrected_f4 = f2 * (mf * mf / eps1).log2() * 6.0 / (eps1 * eps1) + f3 / (eps2 * f1);
        let corrected_ln_lhs = -(eps1 * eps1 / 6.0) * (corrected_f4 / f2);
        let exponent_check = ExponentCheck {
            ln_lhs,
            ln_rhs,
            holds: ln_lhs <= ln_rhs,
            corrected_ln_lhs,
            corrected_holds: corrected_ln_lhs <= ln_rhs,
        };

        let sched = ParameterSchedule {
            m,
            epsilon,
            gamma,
            c1,
            z_min,
            z_max,
            log_m,
            eps0,
            eps1,
            eps2,
            eps3,
            delta,
            gamma1,
            gamma2,
            gamma3,
            f1,
            f2,
            f3,
            f4,
            f5,
            f6,
            h1,
            v_bound,
            exponent_check,
        };
        for (name, v) in [
            ("f2", f2),
            ("f3", f3),
            ("f4", f4),
            ("f5", f5),
            ("f6", f6),
            ("gamma3", gamma3),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, format!("evaluates to {v}")));
            }
        }
        Ok(sched)
    }

    /// Number of stages after which `currentThickness` drops below
    /// `z_min`, simulated with the same float sequence as the estimator.
    pub fn round_bound(&self) -> u64 {
        let mut ct = self.z_max;
        let mut y = 0;
        loop {
            y += 1;
            ct /= self.f1;
            if ct < self.z_min {
                return y;
            }
        }
    }
}

/// Multipliers that shrink the schedule's sample counts for empirical runs.
///
/// `samples` scales `h₁` (and hence every `h_i`); `indices` scales `f₆`
/// (and hence every `u_i`). Any factor below 1 voids the accuracy guarantee.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleScale {
    pub samples: f64,
    pub indices: f64,
}

impl Default for SampleScale {
    fn default() -> Self {
        SampleScale::FULL
    }
}

impl SampleScale {
    pub const FULL: SampleScale = SampleScale {
        samples: 1.0,
        indices: 1.0,
    };

    pub fn uniform(x: f64) -> Self {
        SampleScale {
            samples: x,
            indices: x,
        }
    }

    /// Scale so that `h₁ ≈ h1_target` and `f₆ ≈ f6_target`; never scales up.
    pub fn targeting(sched: &ParameterSchedule, h1_target: f64, f6_target: f64) -> Self {
        SampleScale {
            samples: (h1_target / sched.h1).min(1.0),
            indices: (f6_target / sched.f6).min(1.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("sample_scale", self.samples), ("index_scale", self.indices)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, format!("{v} is not a positive finite value")));
            }
        }
        Ok(())
    }

    pub fn is_full(&self) -> bool {
        self.samples >= 1.0 && self.indices >= 1.0
    }

    pub fn h1(&self, sched: &ParameterSchedule) -> u64 {
        ((sched.h1 * self.samples).ceil() as u64).max(1)
    }

    pub fn f6(&self, sched: &ParameterSchedule) -> f64 {
        sched.f6 * self.indices
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * b.abs().max(1e-300)
    }

    #[test]
    fn frozen_schedule_m16() {
        let s = ParameterSchedule::build(ScheduleInput::new(16, 0.5, 0.2)).unwrap();
        let want = [
            (s.eps0, 0.05555555555555555),
            (s.eps1, 0.0023148148148148147),
            (s.eps2, 0.0005787037037037037),
            (s.eps3, 0.018518518518518517),
            (s.delta, 0.00028935185185185184),
            (s.gamma1, 0.06666666666666667),
            (s.gamma2, 0.008333333333333333),
            (s.gamma3, 1.45654455649916e-16),
            (s.f1, 8.0),
            (s.f2, 3105156.907970287),
            (s.f3, 785524806.4740678),
            (s.f4, 1787907314641.8838),
            (s.f5, 28606517034270.14),
            (s.h1, 28606517034271.0),
            (s.f6, 1331454151.4411907),
        ];
        for (i, (got, exp)) in want.into_iter().enumerate() {
            assert!((got - exp).abs() <= 1e-9 * exp, "field {i}: {got} vs {exp}");
        }
        assert_eq!(s.v_bound, 19168);
    }

    #[test]
    fn epsilon_chain_m512() {
        let s = ParameterSchedule::build(ScheduleInput::new(512, 0.9, 0.2)).unwrap();
        assert!(close(s.eps0, 0.1));
        assert!(close(s.eps1, 1.0 / 540.0));
        assert!(close(s.eps2, 1.0 / 2160.0));
        assert!(close(s.delta, 1.0 / 4320.0));
    }

    #[test]
    fn gamma2_at_m2() {
        let s = ParameterSchedule::build(ScheduleInput::new(2, 0.5, 0.6)).unwrap();
        assert!(close(s.gamma2, 0.1));
    }

    #[test]
    fn round_bound_examples() {
        let base = ScheduleInput::new(256, 0.5, 0.2);
        let s = ParameterSchedule::build(base.thickness(5.0, 5.0)).unwrap();
        assert_eq!(s.round_bound(), 1);
        let s = ParameterSchedule::build(base.thickness(1.0, 64.0)).unwrap();
        assert_eq!(s.round_bound(), 3);
        let s = ParameterSchedule::build(base.c1(0.25).thickness(1.0, 256.0)).unwrap();
        assert!(close(s.f1, 32.0));
        assert_eq!(s.round_bound(), 2);
    }

    #[test]
    fn printed_exponent_check_fails_corrected_holds() {
        for m in [2, 16, 40, 512] {
            let s = ParameterSchedule::build(ScheduleInput::new(m, 0.5, 0.2)).unwrap();
            assert!(!s.exponent_check.holds);
            assert!(s.exponent_check.corrected_holds);
        }
    }

    #[test]
    fn rejects_out_of_range() {
        let bad = [
            ScheduleInput::new(1, 0.5, 0.2),
            ScheduleInput::new(4, 0.0, 0.2),
            ScheduleInput::new(4, 0.5, 1.0),
            ScheduleInput::new(4, 0.5, 0.2).c1(-1.0),
            ScheduleInput::new(4, 0.5, 0.2).thickness(0.5, 2.0),
            ScheduleInput::new(4, 0.5, 0.2).thickness(3.0, 2.0),
            ScheduleInput::new(4, 0.5, 0.2).thickness(1.0, 5.0),
        ];
        for b in bad {
            let e = ParameterSchedule::build(b).unwrap_err();
            assert!(e.is_validation(), "{e}");
        }
    }

    #[test]
    fn scale_targets() {
        let s = ParameterSchedule::build(ScheduleInput::new(16, 0.5, 0.2)).unwrap();
        let sc = SampleScale::targeting(&s, 1000.0, 50.0);
        assert_eq!(sc.h1(&s), 1000);
        assert!((sc.f6(&s) - 50.0).abs() < 1e-6);
        assert!(!sc.is_full());
        assert!(SampleScale::FULL.is_full());
    }

    proptest! {
        #[test]
        fn positivity_and_monotonicity(
            m in 2usize..5000,
            eps in 0.01f64..0.99,
            gamma in 0.01f64..0.99,
            c1 in 0.0f64..1.0,
            dc in 0.0f64..1.0,
            shrink in 0.1f64..1.0,
        ) {
            let inp = ScheduleInput::new(m, eps, gamma).c1(c1);
            let s = ParameterSchedule::build(inp).unwrap();
            for v in [s.eps0, s.eps1, s.eps2, s.eps3, s.delta, s.gamma1, s.gamma2, s.gamma3,
                      s.f1, s.f2, s.f3, s.f4, s.f6, s.h1] {
                prop_assert!(v.is_finite() && v > 0.0);
            }
            prop_assert!(s.f1 >= 8.0);
            prop_assert!(s.h1 >= 1.0);
            prop_assert!(s.h1 >= s.f3 / (s.eps2 * s.f1) * m as f64 / s.z_min);
            let more = ParameterSchedule::build(inp.c1(c1 + dc)).unwrap();
            prop_assert!(more.round_bound() <= s.round_bound());
            let tighter = ParameterSchedule::build(ScheduleInput { epsilon: eps * shrink, ..inp }).unwrap();
            prop_assert!(tighter.h1 >= s.h1);
        }
    }
}
