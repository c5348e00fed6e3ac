use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::dense::CMatrix;
use super::operators::{OperatorSet, GROUND};

/// Default bound on the population of the highest retained Fock level.
pub const TRUNCATION_TOLERANCE: f64 = 1e-6;

/// Density operator on qubit ⊗ Fock at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    pub rho: CMatrix,
    pub t: f64,
    fock_dim: usize,
}

/// Numerical health of a density matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hygiene {
    pub trace_error: f64,
    pub hermiticity_error: f64,
    pub min_eigenvalue: f64,
    pub top_fock_population: f64,
}

impl Hygiene {
    /// Trace within 1e-9, Hermitian within 1e-12, eigenvalues above -1e-8
    /// and the top Fock level below `truncation`.
    pub fn is_valid(&self, truncation: f64) -> bool {
        self.trace_error <= 1e-9
            && self.hermiticity_error <= 1e-12
            && self.min_eigenvalue > -1e-8
            && self.top_fock_population < truncation
    }
}

impl QuantumState {
    pub fn new(rho: CMatrix, fock_dim: usize, t: f64) -> Self {
        assert_eq!(rho.dim(), 2 * fock_dim, "density matrix must be 2N x 2N");
        Self { rho, t, fock_dim }
    }

    /// `|g, 0><g, 0|`.
    pub fn ground(ops: &OperatorSet) -> Self {
        let mut rho = CMatrix::zeros(ops.dim());
        let i = ops.index(GROUND, 0);
        rho.set(i, i, Complex64::new(1.0, 0.0));
        Self::new(rho, ops.fock_dim(), 0.0)
    }

    /// Atom in the ground state, field in the coherent state `|beta>`
    /// (renormalized on the truncated space).
    pub fn ground_coherent(ops: &OperatorSet, beta: Complex64) -> Self {
        let n = ops.fock_dim();
        let mut v = vec![Complex64::new(0.0, 0.0); ops.dim()];
        let amp = coherent_amplitudes(beta, n);
        let norm: f64 = amp.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for (k, c) in amp.into_iter().enumerate() {
            v[ops.index(GROUND, k)] = c / norm;
        }
        Self::new(CMatrix::outer(&v), n, 0.0)
    }

    pub fn fock_dim(&self) -> usize {
        self.fock_dim
    }

    pub fn expect(&self, op: &super::sparse::SparseMatrix) -> Complex64 {
        op.expect(&self.rho)
    }

    pub fn top_fock_population(&self) -> f64 {
        top_population(&self.rho, self.fock_dim)
    }

    pub fn hygiene(&self) -> Hygiene {
        let eig = self.rho.hermitian_eigenvalues();
        Hygiene {
            trace_error: (self.rho.trace() - 1.0).norm(),
            hermiticity_error: self.rho.hermiticity_error(),
            min_eigenvalue: eig.first().copied().unwrap_or(0.0),
            top_fock_population: self.top_fock_population(),
        }
    }
}

pub(crate) fn top_population(rho: &CMatrix, fock_dim: usize) -> f64 {
    let top = fock_dim - 1;
    rho.get(top, top).re + rho.get(fock_dim + top, fock_dim + top).re
}

/// `<n|beta>` for `n < len`, without renormalization.
pub fn coherent_amplitudes(beta: Complex64, len: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(len);
    let mut c = Complex64::new((-0.5 * beta.norm_sqr()).exp(), 0.0);
    for k in 0..len {
        out.push(c);
        c = c * beta / ((k + 1) as f64).sqrt();
    }
    out
}

/// Partial trace over the qubit.
pub fn reduce_cavity(rho: &CMatrix, fock_dim: usize) -> CMatrix {
    assert_eq!(rho.dim(), 2 * fock_dim);
    CMatrix::from_fn(fock_dim, |n, m| rho.get(n, m) + rho.get(fock_dim + n, fock_dim + m))
}

/// `<psi| rho |psi>` for a cavity state vector `psi`.
pub fn fidelity_with_pure(rho_cav: &CMatrix, psi: &[Complex64]) -> f64 {
    let n = rho_cav.dim().min(psi.len());
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += psi[i].conj() * rho_cav.get(i, j) * psi[j];
        }
    }
    acc.re
}
