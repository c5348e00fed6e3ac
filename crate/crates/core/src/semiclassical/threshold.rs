use serde::{Deserialize, Serialize};

use super::integrate::{integrate, SdeConfig};
use crate::analysis::{detect_transitions, Thresholds};
use crate::error::{Error, Result};
use crate::model::{steady_states, Stability, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignalClass {
    Subthreshold,
    Suprathreshold,
}

/// Classify a signal by whether it switches the noiseless system between
/// wells, starting from either stable root, within ten signal periods.
pub fn threshold_check(p: &SystemParams, delta: f64, e2: f64) -> Result<SignalClass> {
    threshold_check_with(p, delta, e2, 1e-3, 10.0)
}

pub fn threshold_check_with(
    p: &SystemParams,
    delta: f64,
    e2: f64,
    dt: f64,
    periods: f64,
) -> Result<SignalClass> {
    let params = SystemParams {
        e2,
        delta,
        noise: 0.0,
        ..*p
    };
    params.validate()?;
    let roots = steady_states(&params, params.e1)?;
    if roots.len() != 3 {
        return Err(Error::NotBistable { e1: params.e1 });
    }
    let thresholds = Thresholds::for_params(&params)?;
    // A static signal still gets a window of the same length as a slow one.
    let period = if delta != 0.0 {
        2.0 * std::f64::consts::PI / delta.abs()
    } else {
        1000.0 / params.kappa
    };
    let duration = periods.max(10.0) * period;
    let stride = ((0.05 / dt).round() as usize).max(1);

    for root in roots.iter().filter(|r| r.stability == Stability::Stable) {
        let tr = integrate(&params, root.as_state(), &SdeConfig::new(dt, duration, 0, stride))?;
        let d = detect_transitions(&tr.times(), &tr.amplitude(), thresholds)?;
        if !d.switches.is_empty() {
            return Ok(SignalClass::Suprathreshold);
        }
    }
    Ok(SignalClass::Subthreshold)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_signal_never_switches() {
        let p = SystemParams::new(1.0, 10.0, 6.0).with_e1(2.24);
        assert_eq!(
            threshold_check_with(&p, 0.3, 0.0, 2e-3, 10.0).unwrap(),
            SignalClass::Subthreshold
        );
    }

    #[test]
    fn monostable_is_an_error() {
        let p = SystemParams::new(1.0, 10.0, 6.0).with_e1(1.0);
        assert!(matches!(
            threshold_check(&p, 0.008, 0.1),
            Err(Error::NotBistable { .. })
        ));
    }
}
