use crate::error::{Error, Result};
use crate::linalg::hermitian_eigen;
use crate::states::{pauli_x, pauli_z};
use crate::tol;
use crate::{CMatrix, Eigen};

/// Hermitian observable fixing the coherence basis and the phase-estimation
/// task. Fully degenerate observables are rejected.
#[derive(Clone, Debug)]
pub struct CoherenceGenerator {
    h: CMatrix,
    eigen: Eigen,
}

impl CoherenceGenerator {
    pub fn new(h: CMatrix) -> Result<Self> {
        let eigen = hermitian_eigen(&h)?;
        if eigen.max() - eigen.min() <= tol::HERM {
            return Err(Error::Invalid(
                "coherence generator has a fully degenerate spectrum".into(),
            ));
        }
        Ok(Self {
            h: h.hermitian_part(),
            eigen,
        })
    }

    /// `σ_z`, the default generator.
    pub fn sigma_z() -> Self {
        Self::new(pauli_z()).expect("σ_z is non-degenerate")
    }

    pub fn sigma_x() -> Self {
        Self::new(pauli_x()).expect("σ_x is non-degenerate")
    }

    /// `diag(0, 1, …, d−1)`: number operator on a qudit.
    pub fn number(d: usize) -> Result<Self> {
        let diag: Vec<f64> = (0..d).map(|k| k as f64).collect();
        Self::new(CMatrix::from_diag(&diag))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.h
    }

    pub fn eigen(&self) -> &Eigen {
        &self.eigen
    }

    pub fn dim(&self) -> usize {
        self.h.rows()
    }

    /// `λ_max − λ_min`.
    pub fn spread(&self) -> f64 {
        self.eigen.max() - self.eigen.min()
    }

    /// Groups of eigenvector indices sharing one eigenvalue.
    pub fn eigenspaces(&self) -> Vec<Vec<usize>> {
        let vals = &self.eigen.eigenvalues;
        let scale = 1e-9 * self.spread().max(1.0);
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (k, &l) in vals.iter().enumerate() {
            match groups.last_mut() {
                Some(g) if (l - vals[g[0]]).abs() <= scale => g.push(k),
                _ => groups.push(vec![k]),
            }
        }
        groups
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate() {
        assert!(CoherenceGenerator::new(CMatrix::identity(2)).is_err());
        assert!(CoherenceGenerator::new(CMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn eigenspaces_group_degenerate_levels() {
        let g = CoherenceGenerator::new(CMatrix::from_diag(&[2.0, 0.0, 0.0, -2.0])).unwrap();
        assert_eq!(g.eigenspaces(), vec![vec![0], vec![1, 2], vec![3]]);
        assert_eq!(CoherenceGenerator::sigma_z().eigenspaces().len(), 2);
    }
}
