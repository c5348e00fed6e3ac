use num_complex::Complex64;

use super::sparse::SparseMatrix;
use crate::error::{Error, Result};
use crate::model::SystemParams;

/// Qubit basis index of the ground state.
pub const GROUND: usize = 0;
/// Qubit basis index of the excited state.
pub const EXCITED: usize = 1;

/// Field and atom operators on qubit ⊗ Fock, with the qubit as the slow
/// index: basis state `|q, n>` sits at `q * N + n`.
#[derive(Debug, Clone)]
pub struct OperatorSet {
    fock_dim: usize,
    pub a: SparseMatrix,
    pub a_dag: SparseMatrix,
    pub number: SparseMatrix,
    pub sigma_minus: SparseMatrix,
    pub sigma_plus: SparseMatrix,
    pub sigma_z: SparseMatrix,
    pub identity: SparseMatrix,
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Fock-space annihilation operator truncated to `n` levels.
pub fn fock_annihilation(n: usize) -> SparseMatrix {
    SparseMatrix::from_triplets(n, n, (1..n).map(|k| (k - 1, k, re((k as f64).sqrt()))).collect())
}

/// `|g><e|` on the qubit.
pub fn qubit_lowering() -> SparseMatrix {
    SparseMatrix::from_triplets(2, 2, vec![(GROUND, EXCITED, re(1.0))])
}

/// `|e><e| - |g><g|` on the qubit.
pub fn qubit_inversion() -> SparseMatrix {
    SparseMatrix::from_triplets(2, 2, vec![(EXCITED, EXCITED, re(1.0)), (GROUND, GROUND, re(-1.0))])
}

pub fn build_operators(fock_dim: usize) -> Result<OperatorSet> {
    if fock_dim < 2 {
        return Err(Error::InvalidParams(format!("Fock truncation N = {fock_dim} < 2")));
    }
    let id_q = SparseMatrix::identity(2);
    let id_f = SparseMatrix::identity(fock_dim);
    let a = id_q.kron(&fock_annihilation(fock_dim));
    let a_dag = a.adjoint();
    let sigma_minus = qubit_lowering().kron(&id_f);
    let sigma_plus = sigma_minus.adjoint();
    Ok(OperatorSet {
        fock_dim,
        number: a_dag.matmul(&a),
        a,
        a_dag,
        sigma_minus,
        sigma_plus,
        sigma_z: qubit_inversion().kron(&id_f),
        identity: id_q.kron(&id_f),
    })
}

impl OperatorSet {
    pub fn fock_dim(&self) -> usize {
        self.fock_dim
    }

    pub fn dim(&self) -> usize {
        2 * self.fock_dim
    }

    #[inline]
    pub fn index(&self, qubit: usize, photons: usize) -> usize {
        qubit * self.fock_dim + photons
    }

    /// Resonant coupling `g (sigma_+ a + a^dagger sigma_-)`.
    pub fn coupling(&self, g: f64) -> SparseMatrix {
        self.sigma_plus
            .matmul(&self.a)
            .add(&self.a_dag.matmul(&self.sigma_minus))
            .scale(re(g))
    }

    /// Amplitudes `(c, c*)` with `H_drive = c a + c* a^dagger` at time `t`,
    /// i.e. `c = -i (E1 + E2 exp(i delta t))`.
    pub fn drive_coefficient(p: &SystemParams, t: f64) -> Complex64 {
        let c = re(p.e1) + Complex64::from_polar(p.e2, p.delta * t);
        -Complex64::i() * c
    }

    /// `H(t) = g(sigma_+ a + a^dagger sigma_-) - i E1 (a - a^dagger)
    ///        - i E2 (a e^{i delta t} - a^dagger e^{-i delta t})`.
    pub fn hamiltonian(&self, p: &SystemParams, t: f64) -> SparseMatrix {
        let c = Self::drive_coefficient(p, t);
        self.coupling(p.g)
            .add(&self.a.scale(c))
            .add(&self.a_dag.scale(c.conj()))
    }
}

pub fn hamiltonian(ops: &OperatorSet, p: &SystemParams, t: f64) -> SparseMatrix {
    ops.hamiltonian(p, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_level_truncation() {
        let ops = build_operators(2).unwrap();
        let a = fock_annihilation(2).to_dense();
        assert_eq!(a[(0, 1)], re(1.0));
        assert_eq!(a[(0, 0)] + a[(1, 0)] + a[(1, 1)], re(0.0));
        assert_eq!(ops.dim(), 4);
        assert!(build_operators(1).is_err());
    }

    #[test]
    fn pauli_commutator() {
        let ops = build_operators(5).unwrap();
        let (z, m) = (&ops.sigma_z, &ops.sigma_minus);
        let comm = z.matmul(m).sub(&m.matmul(z));
        assert!((comm.to_dense() + m.to_dense() * re(2.0)).norm() < 1e-14);
        assert!((ops.sigma_plus.to_dense() - m.to_dense().adjoint()).norm() == 0.0);
    }

    #[test]
    fn number_operator_diagonal() {
        let n = 6;
        let ops = build_operators(n).unwrap();
        for q in 0..2 {
            for k in 0..n {
                let i = ops.index(q, k);
                assert!((ops.number.get(i, i) - re(k as f64)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn canonical_commutator_below_top_level() {
        let n = 7;
        let ops = build_operators(n).unwrap();
        let comm = ops.a.matmul(&ops.a_dag).sub(&ops.a_dag.matmul(&ops.a)).to_dense();
        for q in 0..2 {
            for k in 0..n {
                let i = ops.index(q, k);
                let want = if k + 1 < n { 1.0 } else { -((n - 1) as f64) };
                assert!((comm[(i, i)] - re(want)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn hamiltonian_is_hermitian() {
        let ops = build_operators(8).unwrap();
        let p = SystemParams::new(1.0, 10.0, 6.0).with_e1(2.5).with_signal(0.3, 0.095);
        for t in [0.0, 0.37, 12.9, 1e4 + 0.1] {
            assert!(ops.hamiltonian(&p, t).hermiticity_error() < 1e-14);
        }
    }

    #[test]
    fn trivial_hamiltonian_and_static_drive() {
        let ops = build_operators(4).unwrap();
        assert_eq!(ops.hamiltonian(&SystemParams::new(1.0, 10.0, 0.0), 1.0).nnz(), 0);
        let p = SystemParams::new(1.0, 10.0, 6.0).with_e1(2.0).with_signal(0.0, 0.4);
        assert_eq!(ops.hamiltonian(&p, 0.0), ops.hamiltonian(&p, 3.3));
    }
}
