use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical rates and drive amplitudes of the driven, damped Jaynes–Cummings
/// system, in units where the cavity decay rate sets the time scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemParams {
    /// Cavity field decay rate.
    pub kappa: f64,
    /// Atomic relaxation rate.
    pub gamma: f64,
    /// Atom–field coupling.
    pub g: f64,
    /// Resonant control drive.
    pub e1: f64,
    /// Weak signal drive.
    pub e2: f64,
    /// Signal detuning from the control drive.
    pub delta: f64,
    /// Thermal noise strength `D` in `<xi(t) xi(t')> = 2 D delta(t - t')`.
    pub noise: f64,
}

impl Default for SystemParams {
    /// Strong-coupling working point with the control drive inside the
    /// bistable window and no signal.
    fn default() -> Self {
        Self {
            kappa: 1.0,
            gamma: 10.0,
            g: 6.0,
            e1: 2.24,
            e2: 0.0,
            delta: 0.0,
            noise: 0.03,
        }
    }
}

impl SystemParams {
    pub fn new(kappa: f64, gamma: f64, g: f64) -> Self {
        Self {
            kappa,
            gamma,
            g,
            e1: 0.0,
            e2: 0.0,
            delta: 0.0,
            noise: 0.0,
        }
    }

    pub fn with_e1(mut self, e1: f64) -> Self {
        self.e1 = e1;
        self
    }

    pub fn with_signal(mut self, e2: f64, delta: f64) -> Self {
        self.e2 = e2;
        self.delta = delta;
        self
    }

    pub fn with_noise(mut self, noise: f64) -> Self {
        self.noise = noise;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let checks: [(&str, f64, bool); 7] = [
            ("kappa", self.kappa, self.kappa > 0.0),
            ("gamma", self.gamma, self.gamma > 0.0),
            ("g", self.g, self.g >= 0.0),
            ("e1", self.e1, self.e1 >= 0.0),
            ("e2", self.e2, self.e2 >= 0.0),
            ("noise", self.noise, self.noise >= 0.0),
            ("delta", self.delta, true),
        ];
        for (name, value, ok) in checks {
            if !value.is_finite() || !ok {
                return Err(Error::InvalidParams(format!("{name} = {value}")));
            }
        }
        Ok(())
    }

    /// Saturation ratio `alpha^2 / n0 = 8 g^2 alpha^2 / gamma^2`, finite even when `g = 0`.
    #[inline]
    pub(crate) fn saturation(&self, alpha2: f64) -> f64 {
        8.0 * self.g * self.g * alpha2 / (self.gamma * self.gamma)
    }
}

/// Cooperation coefficient and saturation photon number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    pub cooperativity: f64,
    pub saturation_photons: f64,
}

pub fn derived_params(p: &SystemParams) -> Result<DerivedParams> {
    p.validate()?;
    if p.g == 0.0 {
        return Err(Error::NoCoupling);
    }
    let g2 = p.g * p.g;
    Ok(DerivedParams {
        cooperativity: 2.0 * g2 / (p.kappa * p.gamma),
        saturation_photons: p.gamma * p.gamma / (8.0 * g2),
    })
}
