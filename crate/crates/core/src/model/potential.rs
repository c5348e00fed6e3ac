//! Effective one-dimensional potential for the real field amplitude.

use serde::{Deserialize, Serialize};

use super::params::SystemParams;
use super::steady::bisect;

/// `U(alpha) = (kappa gamma / 8) alpha^2 - (gamma E1 / 2) alpha
///           + (gamma^2 / 16) ln(1 + 8 g^2 alpha^2 / gamma^2)`.
pub fn potential(p: &SystemParams, alpha: f64) -> f64 {
    let a2 = alpha * alpha;
    p.kappa * p.gamma / 8.0 * a2 - 0.5 * p.gamma * p.e1 * alpha
        + p.gamma * p.gamma / 16.0 * p.saturation(a2).ln_1p()
}

pub fn potential_derivative(p: &SystemParams, alpha: f64) -> f64 {
    0.25 * p.kappa * p.gamma * alpha - 0.5 * p.gamma * p.e1
        + p.g * p.g * alpha / (1.0 + p.saturation(alpha * alpha))
}

pub fn potential_curvature(p: &SystemParams, alpha: f64) -> f64 {
    let s = p.saturation(alpha * alpha);
    0.25 * p.kappa * p.gamma + p.g * p.g * (1.0 - s) / ((1.0 + s) * (1.0 + s))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub alpha: f64,
    pub value: f64,
    pub kind: ExtremumKind,
}

/// Sampling window for [`potential_extrema`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl AlphaGrid {
    /// Window covering every stationary amplitude for the drive in `p`.
    pub fn covering(p: &SystemParams) -> Self {
        Self {
            min: -0.5,
            max: (4.0 * p.e1 / p.kappa).max(1.0) + 0.5,
            points: 4001,
        }
    }

    fn step(&self) -> f64 {
        (self.max - self.min) / (self.points.max(2) - 1) as f64
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.step();
        (0..self.points.max(2)).map(move |i| self.min + i as f64 * h)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialProfile {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub extrema: Vec<Extremum>,
}

impl PotentialProfile {
    pub fn minima(&self) -> impl Iterator<Item = &Extremum> {
        self.extrema.iter().filter(|e| e.kind == ExtremumKind::Min)
    }

    /// Barrier heights seen from each minimum toward the nearest maximum,
    /// in ascending-amplitude order. Empty for a single well.
    pub fn barriers(&self) -> Vec<f64> {
        let Some(top) = self.extrema.iter().find(|e| e.kind == ExtremumKind::Max) else {
            return Vec::new();
        };
        self.minima().map(|m| top.value - m.value).collect()
    }
}

pub fn potential_extrema(p: &SystemParams) -> PotentialProfile {
    potential_extrema_on(p, AlphaGrid::covering(p))
}

/// Extrema located by sign changes of `U'` on the grid, refined by bisection
/// and classified by the sign of `U''`.
pub fn potential_extrema_on(p: &SystemParams, grid: AlphaGrid) -> PotentialProfile {
    let alphas: Vec<f64> = grid.values().collect();
    let values: Vec<f64> = alphas.iter().map(|&a| potential(p, a)).collect();
    let slope = |a: f64| potential_derivative(p, a);

    let mut extrema = Vec::new();
    let mut prev = slope(alphas[0]);
    for w in alphas.windows(2) {
        let s = slope(w[1]);
        if s == 0.0 || (s > 0.0) != (prev > 0.0) && prev != 0.0 {
            let a = if s == 0.0 { w[1] } else { bisect(w[0], w[1], slope) };
            let kind = if potential_curvature(p, a) > 0.0 {
                ExtremumKind::Min
            } else {
                ExtremumKind::Max
            };
            extrema.push(Extremum {
                alpha: a,
                value: potential(p, a),
                kind,
            });
        }
        prev = s;
    }
    PotentialProfile {
        grid: alphas,
        values,
        extrema,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::steady_states;

    fn at(e1: f64) -> SystemParams {
        SystemParams::new(1.0, 10.0, 6.0).with_e1(e1)
    }

    #[test]
    fn single_well_at_origin_when_undriven() {
        let p = at(0.0);
        assert_eq!(potential(&p, 0.0), 0.0);
        assert_eq!(potential_derivative(&p, 0.0), 0.0);
        assert!(potential_curvature(&p, 0.0) > 0.0);
        let prof = potential_extrema(&p);
        assert_eq!(prof.extrema.len(), 1);
        assert_eq!(prof.extrema[0].kind, ExtremumKind::Min);
        assert!(prof.extrema[0].alpha.abs() < 1e-12);
    }

    #[test]
    fn slope_vanishes_at_stationary_amplitudes() {
        for e1 in [0.5, 2.2, 2.24, 2.4, 3.0] {
            for s in steady_states(&at(e1), e1).unwrap() {
                assert!(potential_derivative(&at(e1), s.alpha).abs() < 1e-10, "e1 = {e1}");
            }
        }
    }

    #[test]
    fn asymmetric_double_well() {
        let p = at(2.24);
        let prof = potential_extrema(&p);
        let kinds: Vec<_> = prof.extrema.iter().map(|e| e.kind).collect();
        assert_eq!(kinds, [ExtremumKind::Min, ExtremumKind::Max, ExtremumKind::Min]);
        let barriers = prof.barriers();
        assert!(barriers.iter().all(|&b| b > 0.0));
        // narrow low-amplitude well, wide high-amplitude well
        let low = potential_curvature(&p, prof.extrema[0].alpha);
        let high = potential_curvature(&p, prof.extrema[2].alpha);
        assert!(low > high);
    }

    #[test]
    fn monostable_outside_window() {
        for e1 in [1.5, 2.0, 2.6, 3.5] {
            let prof = potential_extrema(&at(e1));
            assert_eq!(prof.extrema.len(), 1, "e1 = {e1}");
            assert_eq!(prof.extrema[0].kind, ExtremumKind::Min);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let p = at(2.24);
        for a in [0.1, 0.7, 1.3, 2.5, 4.0] {
            let h = 1e-5;
            let fd = (potential(&p, a + h) - potential(&p, a - h)) / (2.0 * h);
            assert!((fd - potential_derivative(&p, a)).abs() < 1e-7);
            let fd2 = (potential_derivative(&p, a + h) - potential_derivative(&p, a - h)) / (2.0 * h);
            assert!((fd2 - potential_curvature(&p, a)).abs() < 1e-6);
        }
    }
}
