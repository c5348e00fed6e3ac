//! Dense complex square matrices stored as separate real and imaginary
//! planes, row-major, so row updates vectorize.

use nalgebra::DMatrix;
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            re: vec![0.0; n * n],
            im: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.re[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Projector `|v><v|`.
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn from_nalgebra(m: &DMatrix<Complex64>) -> Self {
        assert_eq!(m.nrows(), m.ncols());
        Self::from_fn(m.nrows(), |i, j| m[(i, j)])
    }

    pub fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        let k = i * self.n + j;
        Complex64::new(self.re[k], self.im[k])
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        let k = i * self.n + j;
        self.re[k] = v.re;
        self.im[k] = v.im;
    }

    #[inline]
    pub fn row(&self, i: usize) -> (&[f64], &[f64]) {
        let s = i * self.n..(i + 1) * self.n;
        (&self.re[s.clone()], &self.im[s])
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> (&mut [f64], &mut [f64]) {
        let s = i * self.n..(i + 1) * self.n;
        (&mut self.re[s.clone()], &mut self.im[s])
    }

    pub fn planes(&self) -> (&[f64], &[f64]) {
        (&self.re, &self.im)
    }

    pub fn planes_mut(&mut self) -> (&mut [f64], &mut [f64]) {
        (&mut self.re, &mut self.im)
    }

    pub fn fill_zero(&mut self) {
        self.re.fill(0.0);
        self.im.fill(0.0);
    }

    pub fn copy_from(&mut self, other: &Self) {
        self.re.copy_from_slice(&other.re);
        self.im.copy_from_slice(&other.im);
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).conj())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.re
            .iter()
            .zip(&self.im)
            .map(|(a, b)| a * a + b * b)
            .sum::<f64>()
            .sqrt()
    }

    /// `self += s * other` for real `s`.
    pub fn axpy(&mut self, s: f64, other: &Self) {
        for (a, b) in self.re.iter_mut().zip(&other.re) {
            *a += s * b;
        }
        for (a, b) in self.im.iter_mut().zip(&other.im) {
            *a += s * b;
        }
    }

    pub fn scale(&mut self, s: f64) {
        self.re.iter_mut().for_each(|x| *x *= s);
        self.im.iter_mut().for_each(|x| *x *= s);
    }

    /// Largest elementwise distance to the adjoint.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                let d = self.get(i, j) - self.get(j, i).conj();
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// Replace by `(self + self^dagger) / 2`.
    pub fn hermitize(&mut self) {
        let n = self.n;
        for i in 0..n {
            self.im[i * n + i] = 0.0;
            for j in i + 1..n {
                let (a, b) = (i * n + j, j * n + i);
                let re = 0.5 * (self.re[a] + self.re[b]);
                let im = 0.5 * (self.im[a] - self.im[b]);
                self.re[a] = re;
                self.re[b] = re;
                self.im[a] = im;
                self.im[b] = -im;
            }
        }
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let mut m = self.to_nalgebra();
        m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let mut e: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        e.sort_by(f64::total_cmp);
        e
    }

    pub fn is_finite(&self) -> bool {
        self.re.iter().chain(&self.im).all(|x| x.is_finite())
    }
}
