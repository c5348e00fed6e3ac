//! Row-fused evaluation of Lindblad-type updates with operators stored by
//! diagonals.
//!
//! With `A[i][i + d] = v_d[i]`, the products needed by the generator become
//! slice operations on rows of `rho`:
//!
//! * `(A rho)[i][j] = sum_d v_d[i] rho[i + d][j]`
//! * `(rho A^dagger)[i][j] = sum_d conj(v_d[j]) rho[i][j + d]`
//! * `(J rho J^dagger)[i][j] = u[i] conj(u[j]) rho[i + d][j + d]` for a single-diagonal `J`.

use std::ops::Range;

use num_complex::Complex64;

use super::dense::CMatrix;
use super::sparse::SparseMatrix;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Diagonal {
    pub offset: isize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl Diagonal {
    pub fn zeros(n: usize, offset: isize) -> Self {
        Self {
            offset,
            re: vec![0.0; n],
            im: vec![0.0; n],
        }
    }

    pub fn rows(&self, n: usize) -> Range<usize> {
        valid_rows(n, self.offset)
    }
}

/// Rows `i` for which `i + offset` is a valid index.
pub(crate) fn valid_rows(n: usize, offset: isize) -> Range<usize> {
    let lo = (-offset).max(0) as usize;
    let hi = (n as isize - offset.max(0)).max(0) as usize;
    lo.min(n)..hi.min(n)
}

/// Splits a square sparse matrix into its nonzero diagonals.
pub(crate) fn diagonals(m: &SparseMatrix) -> Vec<Diagonal> {
    let n = m.rows();
    let mut out: Vec<Diagonal> = Vec::new();
    for (r, c, v) in m.triplets() {
        let offset = c as isize - r as isize;
        let idx = match out.iter().position(|d| d.offset == offset) {
            Some(i) => i,
            None => {
                out.push(Diagonal::zeros(n, offset));
                out.len() - 1
            }
        };
        out[idx].re[r] += v.re;
        out[idx].im[r] += v.im;
    }
    out.sort_by_key(|d| d.offset);
    out
}

/// A jump operator with a single real diagonal, `u[i] = J[i][i + offset]`.
#[derive(Debug, Clone)]
pub(crate) struct Jump {
    pub offset: isize,
    pub u: Vec<f64>,
}

impl Jump {
    pub fn from_sparse(m: &SparseMatrix) -> Option<Self> {
        let d = diagonals(m);
        match d.as_slice() {
            [only] if only.im.iter().all(|&x| x == 0.0) => Some(Self {
                offset: only.offset,
                u: only.re.clone(),
            }),
            _ => None,
        }
    }
}

/// `out[j0..] += sum_d v_d[i] x[i + d][j0..]`, the columns `j0..n` of row `i` of `G x`.
fn add_left(out: (&mut [f64], &mut [f64]), x: &CMatrix, i: usize, j0: usize, left: &[Diagonal]) {
    let n = x.dim();
    let (ore, oim) = out;
    for d in left {
        let r = i as isize + d.offset;
        if r < 0 || r as usize >= n {
            continue;
        }
        let (sr, si) = (d.re[i], d.im[i]);
        if sr == 0.0 && si == 0.0 {
            continue;
        }
        let (yre, yim) = x.row(r as usize);
        let (yre, yim) = (&yre[j0..n], &yim[j0..n]);
        for k in 0..n - j0 {
            ore[k] += sr * yre[k] - si * yim[k];
            oim[k] += sr * yim[k] + si * yre[k];
        }
    }
}

/// `out[j - j0] += sum_d conj(v_d[j]) x[i][j + d]` for `j` in `j0..n`, the
/// columns `j0..n` of row `i` of `x G^dagger`.
fn add_right(out: (&mut [f64], &mut [f64]), x: &CMatrix, i: usize, j0: usize, right: &[Diagonal]) {
    let n = x.dim();
    let (ore, oim) = out;
    let (xre, xim) = x.row(i);
    for d in right {
        let cols = d.rows(n);
        let (a, b) = (cols.start.max(j0), cols.end);
        if a >= b {
            continue;
        }
        let s = (a as isize + d.offset) as usize;
        let len = b - a;
        let (cr, ci) = (&d.re[a..b], &d.im[a..b]);
        let (yre, yim) = (&xre[s..s + len], &xim[s..s + len]);
        let (o_re, o_im) = (&mut ore[a - j0..a - j0 + len], &mut oim[a - j0..a - j0 + len]);
        for k in 0..len {
            o_re[k] += cr[k] * yre[k] + ci[k] * yim[k];
            o_im[k] += cr[k] * yim[k] - ci[k] * yre[k];
        }
    }
}

/// Columns `i..n` of row `i` of `sum_k w_k J_k x J_k^dagger`, added to `out`.
fn add_jumps(out: (&mut [f64], &mut [f64]), x: &CMatrix, i: usize, jumps: &[(&Jump, f64)]) {
    let n = x.dim();
    let (ore, oim) = out;
    for &(jump, weight) in jumps {
        let r = i as isize + jump.offset;
        if r < 0 || r as usize >= n || jump.u[i] == 0.0 {
            continue;
        }
        let cols = valid_rows(n, jump.offset);
        let (j0, j1) = (cols.start.max(i), cols.end);
        if j0 >= j1 {
            continue;
        }
        let s = (j0 as isize + jump.offset) as usize;
        let len = j1 - j0;
        let wi = weight * jump.u[i];
        let (yre, yim) = x.row(r as usize);
        let (yre, yim) = (&yre[s..s + len], &yim[s..s + len]);
        let u = &jump.u[j0..j1];
        let (o_re, o_im) = (&mut ore[j0 - i..j0 - i + len], &mut oim[j0 - i..j0 - i + len]);
        for k in 0..len {
            let w = wi * u[k];
            o_re[k] += w * yre[k];
            o_im[k] += w * yim[k];
        }
    }
}

/// Mirrors the upper triangle into the lower one and returns the trace.
fn mirror_upper(out: &mut CMatrix) -> f64 {
    let n = out.dim();
    let mut trace = 0.0;
    for i in 0..n {
        let v = out.get(i, i);
        out.set(i, i, Complex64::new(v.re, 0.0));
        trace += v.re;
        for j in i + 1..n {
            let v = out.get(i, j);
            out.set(j, i, v.conj());
        }
    }
    trace
}

fn copy_scaled(out: (&mut [f64], &mut [f64]), x: &CMatrix, i: usize, j0: usize, keep: f64) {
    let (xre, xim) = x.row(i);
    let (ore, oim) = out;
    for (o, v) in ore.iter_mut().zip(&xre[j0..]) {
        *o = keep * v;
    }
    for (o, v) in oim.iter_mut().zip(&xim[j0..]) {
        *o = keep * v;
    }
}

/// `out = keep rho + G rho + rho G^dagger + sum_k w_k J_k rho J_k^dagger` for
/// Hermitian `rho`, evaluated on the upper triangle and mirrored so that the
/// result is exactly Hermitian. Returns the trace of `out`.
pub(crate) fn apply(rho: &CMatrix, out: &mut CMatrix, keep: f64, left: &[Diagonal], jumps: &[(&Jump, f64)]) -> f64 {
    let n = rho.dim();
    for i in 0..n {
        let (ore, oim) = out.row_mut(i);
        let (ore, oim) = (&mut ore[i..n], &mut oim[i..n]);
        copy_scaled((ore, oim), rho, i, i, keep);
        add_left((ore, oim), rho, i, i, left);
        add_right((ore, oim), rho, i, i, left);
        add_jumps((ore, oim), rho, i, jumps);
    }
    mirror_upper(out)
}

/// `out = (1 + G) rho (1 + G)^dagger + sum_k w_k J_k rho J_k^dagger`, using
/// `scratch` for `(1 + G) rho`. Positive semidefinite whenever `rho` is, up to
/// rounding. Returns the trace of `out`.
pub(crate) fn sandwich(
    rho: &CMatrix,
    scratch: &mut CMatrix,
    out: &mut CMatrix,
    left: &[Diagonal],
    jumps: &[(&Jump, f64)],
) -> f64 {
    let n = rho.dim();
    for i in 0..n {
        let (tre, tim) = scratch.row_mut(i);
        copy_scaled((&mut *tre, &mut *tim), rho, i, 0, 1.0);
        add_left((tre, tim), rho, i, 0, left);
    }
    for i in 0..n {
        let (ore, oim) = out.row_mut(i);
        let (ore, oim) = (&mut ore[i..n], &mut oim[i..n]);
        copy_scaled((ore, oim), scratch, i, i, 1.0);
        add_right((ore, oim), scratch, i, i, left);
        add_jumps((ore, oim), rho, i, jumps);
    }
    mirror_upper(out)
}
