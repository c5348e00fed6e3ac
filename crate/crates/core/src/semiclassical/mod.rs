//! Mean-field Langevin dynamics of the field amplitude, atomic polarization
//! and inversion, driven by thermal noise and the periodic signal.

mod integrate;
mod threshold;

use std::ops::{Add, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::model::SystemParams;

pub use integrate::{
    integrate, integrate_ensemble, integrate_into, CsvRecordSink, Record, RecordSink, SdeConfig,
    Trajectory, TRAJECTORY_CSV_HEADER,
};
pub use threshold::{threshold_check, threshold_check_with, SignalClass};

/// Factorized mean-field variables `(alpha, p, D0)`. Also used for their
/// time derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemiclassicalState {
    pub alpha: Complex64,
    pub p: Complex64,
    pub d0: f64,
}

impl SemiclassicalState {
    pub fn ground() -> Self {
        Self {
            alpha: Complex64::new(0.0, 0.0),
            p: Complex64::new(0.0, 0.0),
            d0: -1.0,
        }
    }

    pub fn norm(&self) -> f64 {
        (self.alpha.norm_sqr() + self.p.norm_sqr() + self.d0 * self.d0).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.alpha.is_finite() && self.p.is_finite() && self.d0.is_finite()
    }
}

impl Add for SemiclassicalState {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            alpha: self.alpha + o.alpha,
            p: self.p + o.p,
            d0: self.d0 + o.d0,
        }
    }
}

impl Mul<f64> for SemiclassicalState {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self {
            alpha: self.alpha * s,
            p: self.p * s,
            d0: self.d0 * s,
        }
    }
}

/// Deterministic part of the Langevin equations at time `t`.
#[inline]
pub fn drift(s: &SemiclassicalState, t: f64, p: &SystemParams) -> SemiclassicalState {
    let signal = if p.e2 != 0.0 {
        Complex64::from_polar(p.e2, -p.delta * t)
    } else {
        Complex64::new(0.0, 0.0)
    };
    drift_with_signal(s, signal, p)
}

/// Drift with the signal phasor `E2 exp(-i delta t)` supplied by the caller.
#[inline(always)]
pub(crate) fn drift_with_signal(
    s: &SemiclassicalState,
    signal: Complex64,
    p: &SystemParams,
) -> SemiclassicalState {
    let i = Complex64::i();
    let alpha = -0.5 * p.kappa * s.alpha - i * p.g * s.p + p.e1 + signal;
    let pol = -0.5 * p.gamma * s.p + i * p.g * s.alpha * s.d0;
    // -2ig(alpha p* - alpha* p) = 4g Im(alpha p*)
    let inv = -p.gamma * (s.d0 + 1.0) + 4.0 * p.g * (s.alpha * s.p.conj()).im;
    SemiclassicalState {
        alpha,
        p: pol,
        d0: inv,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::steady_states;

    #[test]
    fn ground_state_is_fixed_without_drive() {
        let p = SystemParams::new(1.0, 10.0, 6.0);
        assert_eq!(drift(&SemiclassicalState::ground(), 0.3, &p).norm(), 0.0);
    }

    #[test]
    fn steady_roots_have_vanishing_drift() {
        let p = SystemParams::new(1.0, 10.0, 6.0);
        for e1 in [0.5, 2.16, 2.24, 2.42, 3.0] {
            let p = p.with_e1(e1);
            for s in steady_states(&p, e1).unwrap() {
                assert!(drift(&s.as_state(), 0.0, &p).norm() < 1e-9, "e1 = {e1}");
            }
        }
    }

    #[test]
    fn empty_cavity_decouples() {
        let p = SystemParams::new(1.0, 10.0, 0.0).with_e1(1.3);
        let s = SemiclassicalState {
            alpha: Complex64::new(0.7, 0.2),
            p: Complex64::new(0.1, -0.4),
            d0: -0.5,
        };
        let d = drift(&s, 0.0, &p);
        assert!((d.alpha - (-0.5 * s.alpha + 1.3)).norm() < 1e-15);
    }

    #[test]
    fn signal_enters_the_field_equation_only() {
        let p = SystemParams::new(1.0, 10.0, 6.0).with_e1(2.0).with_signal(0.1, 0.5);
        let s = SemiclassicalState::ground();
        let t = 1.7;
        let with = drift(&s, t, &p);
        let without = drift(&s, t, &SystemParams { e2: 0.0, ..p });
        let expected = Complex64::from_polar(0.1, -0.5 * t);
        assert!((with.alpha - without.alpha - expected).norm() < 1e-15);
        assert_eq!(with.p, without.p);
        assert_eq!(with.d0, without.d0);
    }
}
