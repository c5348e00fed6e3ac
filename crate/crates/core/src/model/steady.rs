//! Mean-field fixed points of the resonant system, their linear stability
//! and the drive window in which three of them coexist.

use nalgebra::Matrix5;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::params::{derived_params, SystemParams};
use crate::error::{Error, Result};
use crate::semiclassical::{drift, SemiclassicalState};

/// Tolerance of the drift residual accepted as a fixed point.
pub const FIXED_POINT_TOLERANCE: f64 = 1e-7;

/// Grid points used to bracket roots of the drive curve.
const ROOT_GRID: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stability {
    Stable,
    Unstable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadyState {
    /// Real intracavity amplitude.
    pub alpha: f64,
    /// Atomic polarization, purely imaginary on resonance.
    pub p: Complex64,
    /// Population inversion.
    pub d0: f64,
    pub stability: Stability,
}

impl SteadyState {
    pub fn as_state(&self) -> SemiclassicalState {
        SemiclassicalState {
            alpha: Complex64::new(self.alpha, 0.0),
            p: self.p,
            d0: self.d0,
        }
    }
}

/// Control drive that holds a real amplitude `alpha` stationary:
/// `(kappa alpha / 2)(2C / (1 + alpha^2/n0) + 1)`.
pub fn drive_for_amplitude(p: &SystemParams, alpha: f64) -> f64 {
    let sat = 1.0 + p.saturation(alpha * alpha);
    0.5 * p.kappa * alpha + 2.0 * p.g * p.g * alpha / (p.gamma * sat)
}

/// d E1 / d alpha along the steady-state curve.
fn drive_slope(p: &SystemParams, alpha: f64) -> f64 {
    let s = p.saturation(alpha * alpha);
    0.5 * p.kappa + 2.0 * p.g * p.g / p.gamma * (1.0 - s) / ((1.0 + s) * (1.0 + s))
}

/// Inversion slaved to a stationary amplitude.
pub fn inversion_for_amplitude(p: &SystemParams, alpha: f64) -> f64 {
    -1.0 / (1.0 + p.saturation(alpha * alpha))
}

/// Bisection for a sign change of `f` on `[lo, hi]`, run to floating-point resolution.
pub(crate) fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let mut flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Real, nonnegative stationary amplitudes for control drive `e1`, sorted
/// ascending. The signal drive and thermal noise are ignored.
fn amplitude_roots(p: &SystemParams, e1: f64) -> Vec<f64> {
    if e1 == 0.0 {
        return vec![0.0];
    }
    let upper = 4.0 * e1 / p.kappa;
    let h = upper / ROOT_GRID as f64;

    // Split [0, upper] into pieces on which the drive curve is monotone, so
    // that nearly coalescing roots close to a fold are never missed.
    let mut breaks = vec![0.0];
    let mut prev = drive_slope(p, 0.0);
    for i in 1..=ROOT_GRID {
        let a = i as f64 * h;
        let s = drive_slope(p, a);
        if (s > 0.0) != (prev > 0.0) {
            breaks.push(bisect(a - h, a, |x| drive_slope(p, x)));
        }
        prev = s;
    }
    breaks.push(upper);

    let residual = |a: f64| drive_for_amplitude(p, a) - e1;
    let mut roots: Vec<f64> = Vec::with_capacity(3);
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (rlo, rhi) = (residual(lo), residual(hi));
        if rlo == 0.0 {
            roots.push(lo);
        } else if (rlo < 0.0) != (rhi < 0.0) && rhi != 0.0 {
            roots.push(bisect(lo, hi, residual));
        }
    }
    roots.sort_by(|a, b| a.total_cmp(b));
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    roots
}

/// All stationary states of the unmodulated system at control drive `e1`,
/// sorted by amplitude and classified by the full linear stability analysis.
pub fn steady_states(p: &SystemParams, e1: f64) -> Result<Vec<SteadyState>> {
    if e1 < 0.0 || !e1.is_finite() {
        return Err(Error::Domain(format!("control drive e1 = {e1} must be >= 0")));
    }
    let params = SystemParams {
        e1,
        e2: 0.0,
        noise: 0.0,
        ..*p
    };
    params.validate()?;
    amplitude_roots(&params, e1)
        .into_iter()
        .map(|alpha| {
            let d0 = inversion_for_amplitude(&params, alpha);
            let mut s = SteadyState {
                alpha,
                p: Complex64::new(0.0, 2.0 * params.g * alpha * d0 / params.gamma),
                d0,
                stability: Stability::Stable,
            };
            let eig = jacobian_eigenvalues(&params, &s)?;
            if eig.iter().any(|l| l.re >= 0.0) {
                s.stability = Stability::Unstable;
            }
            Ok(s)
        })
        .collect()
}

/// Jacobian of the mean-field drift in coordinates
/// `(Re alpha, Im alpha, Re p, Im p, D0)`.
pub fn jacobian(p: &SystemParams, s: &SemiclassicalState) -> Matrix5<f64> {
    let (k2, g2) = (0.5 * p.kappa, 0.5 * p.gamma);
    let g = p.g;
    let (x, y) = (s.alpha.re, s.alpha.im);
    let (u, v) = (s.p.re, s.p.im);
    let d = s.d0;
    #[rustfmt::skip]
    let j = Matrix5::new(
        -k2,        0.0,       0.0,       g,          0.0,
        0.0,        -k2,       -g,        0.0,        0.0,
        0.0,        -g * d,    -g2,       0.0,        -g * y,
        g * d,      0.0,       0.0,       -g2,        g * x,
        -4.0 * g * v, 4.0 * g * u, 4.0 * g * y, -4.0 * g * x, -p.gamma,
    );
    j
}

/// Eigenvalues of the drift Jacobian at a fixed point of the unmodulated,
/// noiseless dynamics with control drive `p.e1`.
pub fn jacobian_eigenvalues(p: &SystemParams, s: &SteadyState) -> Result<Vec<Complex64>> {
    let params = SystemParams {
        e2: 0.0,
        noise: 0.0,
        ..*p
    };
    let state = s.as_state();
    let residual = drift(&state, 0.0, &params).norm();
    let scale = 1.0 + params.e1;
    if !(residual <= FIXED_POINT_TOLERANCE * scale) {
        return Err(Error::NotFixedPoint { residual });
    }
    let eig = jacobian(&params, &state).complex_eigenvalues();
    Ok(eig.iter().copied().collect())
}

/// Midpoint `(alpha_L + alpha_H) / 2` of the two stable branches at `e1`, or
/// `None` outside the bistable region.
pub fn branch_midpoint(p: &SystemParams, e1: f64) -> Result<Option<f64>> {
    let roots = steady_states(p, e1)?;
    Ok((roots.len() == 3).then(|| 0.5 * (roots[0].alpha + roots[2].alpha)))
}

/// Control-drive interval in which three stationary states coexist, or
/// `None` when the cooperation coefficient does not exceed 4 or the window
/// lies outside `e1_range`.
pub fn bistable_region(
    p: &SystemParams,
    e1_range: (f64, f64),
    resolution: f64,
) -> Result<Option<(f64, f64)>> {
    let derived = match derived_params(p) {
        Ok(d) => d,
        Err(Error::NoCoupling) => return Ok(None),
        Err(e) => return Err(e),
    };
    if derived.cooperativity <= 4.0 {
        return Ok(None);
    }
    let (lo, hi) = e1_range;
    if !(lo >= 0.0 && hi > lo && resolution > 0.0) {
        return Err(Error::Domain(format!(
            "invalid range [{lo}, {hi}] or resolution {resolution}"
        )));
    }
    let count = |e1: f64| amplitude_roots(p, e1).len();
    let steps = (((hi - lo) / resolution).ceil() as usize).clamp(64, 4096);
    let h = (hi - lo) / steps as f64;
    let Some(inside) = (0..=steps).map(|i| lo + i as f64 * h).find(|&e| count(e) >= 3) else {
        return Ok(None);
    };

    // Refine each edge by bisection on the root count.
    let refine = |mut outside: f64, mut inside: f64| {
        while (inside - outside).abs() > 0.25 * resolution {
            let mid = 0.5 * (inside + outside);
            if count(mid) >= 3 {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        0.5 * (inside + outside)
    };
    let mut right = inside;
    while right + h <= hi && count(right + h) >= 3 {
        right += h;
    }
    let lower = if inside > lo { refine(inside - h, inside) } else { lo };
    let upper = if right + h <= hi { refine(right + h, right) } else { hi };
    Ok(Some((lower, upper)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strong() -> SystemParams {
        SystemParams::new(1.0, 10.0, 6.0)
    }

    #[test]
    fn undriven_ground_state() {
        let s = steady_states(&strong(), 0.0).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].alpha, 0.0);
        assert_eq!(s[0].d0, -1.0);
        assert_eq!(s[0].p, Complex64::new(0.0, 0.0));
        assert_eq!(s[0].stability, Stability::Stable);
    }

    #[test]
    fn empty_cavity_fixed_point() {
        let p = SystemParams::new(1.0, 10.0, 0.0);
        for e1 in [0.3, 1.0, 2.5] {
            let s = steady_states(&p, e1).unwrap();
            assert_eq!(s.len(), 1);
            assert!((s[0].alpha - 2.0 * e1).abs() < 1e-9);
            assert_eq!(s[0].d0, -1.0);
        }
    }

    #[test]
    fn negative_drive_is_a_domain_error() {
        assert!(matches!(steady_states(&strong(), -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn three_roots_inside_window() {
        let s = steady_states(&strong(), 2.24).unwrap();
        assert_eq!(s.len(), 3);
        let kinds: Vec<_> = s.iter().map(|x| x.stability).collect();
        assert_eq!(kinds, [Stability::Stable, Stability::Unstable, Stability::Stable]);
    }

    #[test]
    fn not_a_fixed_point() {
        let s = SteadyState {
            alpha: 1.0,
            p: Complex64::new(0.0, 0.0),
            d0: -1.0,
            stability: Stability::Stable,
        };
        assert!(matches!(
            jacobian_eigenvalues(&strong().with_e1(2.24), &s),
            Err(Error::NotFixedPoint { .. })
        ));
    }

    #[test]
    fn below_threshold_has_no_window() {
        assert_eq!(bistable_region(&SystemParams::new(1.0, 10.0, 2.0), (0.0, 5.0), 1e-3).unwrap(), None);
        assert_eq!(bistable_region(&SystemParams::new(1.0, 10.0, 0.0), (0.0, 5.0), 1e-3).unwrap(), None);
    }

    #[test]
    fn threshold_cooperativity_is_degenerate() {
        let p = SystemParams::new(1.0, 10.0, 20f64.sqrt());
        match bistable_region(&p, (0.0, 5.0), 1e-3).unwrap() {
            None => {}
            Some((lo, hi)) => assert!(hi - lo < 1e-2),
        }
    }
}
