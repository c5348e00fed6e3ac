//! Cavity Wigner functions from a Fock-basis density matrix.
//!
//! `W(beta) = (2/pi) Tr[D(-beta) rho D(beta) Pi]` expands into
//!
//! `W(beta) = (2/pi) e^{-2|beta|^2} sum_{m<=n} c_{mn} Re[rho_mn (2 beta)^{n-m}] (-1)^m sqrt(m!/n!) L_m^{n-m}(4|beta|^2)`
//!
//! with `c_mm = 1`, `c_mn = 2` otherwise; the normalized Laguerre products are
//! generated by a three-term recurrence.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::dense::CMatrix;
use crate::error::Result;

pub const WIGNER_CSV_HEADER: &str = "re_beta,im_beta,W";

/// Fraction of `sqrt(N)` beyond which the truncated Fock space misrepresents
/// phase space.
pub const SAFE_RADIUS_FRACTION: f64 = 0.8;

/// Rectangular lattice in the `(Re beta, Im beta)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WignerGrid {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub re_points: usize,
    pub im_points: usize,
}

impl WignerGrid {
    pub fn new(re: (f64, f64), im: (f64, f64), re_points: usize, im_points: usize) -> Self {
        Self {
            re_min: re.0,
            re_max: re.1,
            im_min: im.0,
            im_max: im.1,
            re_points: re_points.max(2),
            im_points: im_points.max(2),
        }
    }

    /// Square grid `[-radius, radius]^2` centered on `center`.
    pub fn square(center: Complex64, radius: f64, points: usize) -> Self {
        Self::new(
            (center.re - radius, center.re + radius),
            (center.im - radius, center.im + radius),
            points,
            points,
        )
    }

    pub fn re_step(&self) -> f64 {
        (self.re_max - self.re_min) / (self.re_points - 1) as f64
    }

    pub fn im_step(&self) -> f64 {
        (self.im_max - self.im_min) / (self.im_points - 1) as f64
    }

    pub fn point(&self, ix: usize, iy: usize) -> Complex64 {
        Complex64::new(
            self.re_min + ix as f64 * self.re_step(),
            self.im_min + iy as f64 * self.im_step(),
        )
    }

    /// Largest `|beta|` on the lattice.
    pub fn max_radius(&self) -> f64 {
        let re = self.re_min.abs().max(self.re_max.abs());
        let im = self.im_min.abs().max(self.im_max.abs());
        re.hypot(im)
    }
}

/// A local maximum and its topographic prominence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WignerPeak {
    pub beta: Complex64,
    pub value: f64,
    pub prominence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerField {
    pub grid: WignerGrid,
    /// `values[iy * re_points + ix]`.
    pub values: Vec<f64>,
    pub safe_radius: f64,
    /// Some lattice point lies beyond the truncation-safe radius.
    pub beyond_safe_radius: bool,
}

impl WignerField {
    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.grid.re_points + ix]
    }

    /// Riemann sum of `W` over the lattice.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.re_step() * self.grid.im_step()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Local maxima (8-neighborhood) whose prominence is at least
    /// `fraction` of the global maximum, highest first.
    pub fn peaks(&self, fraction: f64) -> Vec<WignerPeak> {
        let threshold = fraction * self.max();
        let mut peaks: Vec<WignerPeak> = self
            .prominences()
            .into_iter()
            .filter(|&(_, prom)| prom >= threshold)
            .map(|(idx, prominence)| {
                let (ix, iy) = (idx % self.grid.re_points, idx / self.grid.re_points);
                WignerPeak {
                    beta: self.grid.point(ix, iy),
                    value: self.values[idx],
                    prominence,
                }
            })
            .collect();
        peaks.sort_by(|a, b| b.value.total_cmp(&a.value));
        peaks
    }

    /// `(cell index, prominence)` of every local maximum, by flooding cells
    /// from the top: when two basins meet, the lower summit's prominence is
    /// its height above the meeting cell. The global summit's prominence is
    /// its height above the lowest cell.
    fn prominences(&self) -> Vec<(usize, f64)> {
        let (nx, ny) = (self.grid.re_points, self.grid.im_points);
        let v = &self.values;
        let mut order: Vec<usize> = (0..v.len()).collect();
        order.sort_by(|&a, &b| v[b].total_cmp(&v[a]).then(a.cmp(&b)));

        let mut parent: Vec<usize> = (0..v.len()).collect();
        let summit: Vec<usize> = (0..v.len()).collect();
        let mut active = vec![false; v.len()];
        let mut out = Vec::new();

        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }

        for &cell in &order {
            active[cell] = true;
            let (cx, cy) = ((cell % nx) as isize, (cell / nx) as isize);
            for dy in -1..=1 {
                for dx in -1..=1 {
                    let (x, y) = (cx + dx, cy + dy);
                    if (dx, dy) == (0, 0) || x < 0 || y < 0 || x >= nx as isize || y >= ny as isize {
                        continue;
                    }
                    let nb = y as usize * nx + x as usize;
                    if !active[nb] {
                        continue;
                    }
                    let (ra, rb) = (find(&mut parent, cell), find(&mut parent, nb));
                    if ra == rb {
                        continue;
                    }
                    let (sa, sb) = (summit[ra], summit[rb]);
                    // A freshly added cell is its own basin and never a summit
                    // once it touches a higher one.
                    let (keep, lose) = if v[sa] > v[sb] || (v[sa] == v[sb] && sa < sb) {
                        (ra, rb)
                    } else {
                        (rb, ra)
                    };
                    let lost = summit[lose];
                    if lost != cell {
                        out.push((lost, v[lost] - v[cell]));
                    }
                    parent[lose] = keep;
                }
            }
        }
        if let Some(&top) = order.first() {
            let low = v[*order.last().unwrap()];
            out.push((top, v[top] - low));
        }
        out
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{WIGNER_CSV_HEADER}")?;
        for iy in 0..self.grid.im_points {
            for ix in 0..self.grid.re_points {
                let b = self.grid.point(ix, iy);
                writeln!(out, "{:.10e},{:.10e},{:.16e}", b.re, b.im, self.at(ix, iy))?;
            }
        }
        Ok(())
    }
}

/// Wigner function of the cavity density matrix `rho_cav` on `grid`.
pub fn wigner(rho_cav: &CMatrix, grid: &WignerGrid) -> WignerField {
    let n = rho_cav.dim();
    let safe_radius = SAFE_RADIUS_FRACTION * (n as f64).sqrt();
    let mut values = Vec::with_capacity(grid.re_points * grid.im_points);
    let mut ell = vec![0.0; n];
    for iy in 0..grid.im_points {
        for ix in 0..grid.re_points {
            values.push(wigner_at(rho_cav, grid.point(ix, iy), &mut ell));
        }
    }
    WignerField {
        grid: *grid,
        values,
        safe_radius,
        beyond_safe_radius: grid.max_radius() > safe_radius,
    }
}

fn wigner_at(rho: &CMatrix, beta: Complex64, ell: &mut [f64]) -> f64 {
    let n = rho.dim();
    let x = 4.0 * beta.norm_sqr();
    let two_beta = 2.0 * beta;
    // lead = (2 beta)^k / sqrt(k!)
    let mut lead = Complex64::new(1.0, 0.0);
    let mut acc = 0.0;
    for k in 0..n {
        if k > 0 {
            lead = lead * two_beta / (k as f64).sqrt();
        }
        let kf = k as f64;
        // ell[m] = (-1)^m sqrt(m! k! / (m+k)!) L_m^k(x)
        let len = n - k;
        ell[0] = 1.0;
        if len > 1 {
            ell[1] = -(1.0 + kf - x) / (1.0 + kf).sqrt();
        }
        for m in 1..len.saturating_sub(1) {
            let mf = m as f64;
            ell[m + 1] = (-(2.0 * mf + 1.0 + kf - x) * ell[m] - (mf * (mf + kf)).sqrt() * ell[m - 1])
                / ((mf + 1.0) * (mf + 1.0 + kf)).sqrt();
        }
        let weight = if k == 0 { 1.0 } else { 2.0 };
        let mut diag = Complex64::new(0.0, 0.0);
        for m in 0..len {
            diag += rho.get(m, m + k) * ell[m];
        }
        acc += weight * (diag * lead).re;
    }
    2.0 / std::f64::consts::PI * (-2.0 * beta.norm_sqr()).exp() * acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::operators::fock_annihilation;
    use crate::quantum::state::coherent_amplitudes;
    use nalgebra::DMatrix;
    use std::f64::consts::PI;

    fn coherent(beta: Complex64, n: usize) -> CMatrix {
        CMatrix::outer(&coherent_amplitudes(beta, n))
    }

    /// Displaced parity with an explicit matrix exponential on an enlarged space.
    fn brute_force(rho: &CMatrix, beta: Complex64) -> f64 {
        let n = rho.dim();
        let big = n + 40;
        let a = fock_annihilation(big).to_dense();
        let gen = a.adjoint() * beta - &a * beta.conj();
        let d = gen.exp();
        let mut r = DMatrix::<Complex64>::zeros(big, big);
        r.view_mut((0, 0), (n, n)).copy_from(&rho.to_nalgebra());
        let shifted = d.adjoint() * r * &d;
        let parity: f64 = (0..big).map(|k| if k % 2 == 0 { shifted[(k, k)].re } else { -shifted[(k, k)].re }).sum();
        2.0 / PI * parity
    }

    #[test]
    fn vacuum_peak() {
        let field = wigner(&coherent(Complex64::new(0.0, 0.0), 10), &WignerGrid::square(Complex64::new(0.0, 0.0), 3.0, 61));
        assert!((field.at(30, 30) - 2.0 / PI).abs() < 1e-14);
        assert!((field.integral() - 1.0).abs() < 1e-3);
        let peaks = field.peaks(0.05);
        assert_eq!(peaks.len(), 1);
        assert!(peaks[0].beta.norm() < 1e-12);
    }

    #[test]
    fn coherent_peak_sits_at_amplitude() {
        let b0 = Complex64::new(1.5, -0.5);
        let field = wigner(&coherent(b0, 30), &WignerGrid::square(b0, 3.0, 61));
        let peaks = field.peaks(0.05);
        assert_eq!(peaks.len(), 1);
        assert!((peaks[0].beta - b0).norm() < 1e-9);
        assert!((peaks[0].value - 2.0 / PI).abs() < 1e-6);
        assert!((field.integral() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn matches_displaced_parity() {
        // a mixture of a cat-like superposition and a thermal-ish diagonal
        let n = 12;
        let mut v = coherent_amplitudes(Complex64::new(1.2, 0.3), n);
        for (k, c) in coherent_amplitudes(Complex64::new(-0.8, 0.6), n).into_iter().enumerate() {
            v[k] += c * Complex64::new(0.0, 0.7);
        }
        let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let psi: Vec<Complex64> = v.iter().map(|c| c / norm).collect();
        let mut rho = CMatrix::outer(&psi);
        rho.scale(0.7);
        for k in 0..4 {
            let old = rho.get(k, k);
            rho.set(k, k, old + Complex64::new(0.3 * 0.25, 0.0));
        }
        for beta in [
            Complex64::new(0.0, 0.0),
            Complex64::new(0.4, -0.3),
            Complex64::new(-1.1, 0.9),
            Complex64::new(1.7, 0.2),
        ] {
            let mut ell = vec![0.0; n];
            let fast = wigner_at(&rho, beta, &mut ell);
            let slow = brute_force(&rho, beta);
            assert!((fast - slow).abs() < 1e-9, "{beta}: {fast} vs {slow}");
        }
    }

    #[test]
    fn two_separated_coherent_states_give_two_peaks() {
        let n = 60;
        let mut rho = coherent(Complex64::new(0.5, 0.0), n);
        rho.scale(0.6);
        rho.axpy(0.4, &coherent(Complex64::new(3.5, 0.0), n));
        let grid = WignerGrid::new((-1.5, 5.5), (-2.0, 2.0), 141, 81);
        let field = wigner(&rho, &grid);
        let peaks = field.peaks(0.05);
        assert_eq!(peaks.len(), 2, "{peaks:?}");
        assert!((peaks[0].beta.re - 0.5).abs() < 0.06);
        assert!((peaks[1].beta.re - 3.5).abs() < 0.06);
        assert!(!field.beyond_safe_radius);
    }

    #[test]
    fn flags_grid_beyond_truncation() {
        let field = wigner(&coherent(Complex64::new(0.0, 0.0), 4), &WignerGrid::square(Complex64::new(0.0, 0.0), 2.0, 5));
        assert!(field.beyond_safe_radius);
    }
}
