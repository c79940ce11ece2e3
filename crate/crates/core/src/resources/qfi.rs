use super::CoherenceGenerator;
use crate::error::{Error, Result};
use crate::linalg::hermitian_eigen;
use crate::states::DensityMatrix;
use crate::tol;

fn check_dims(rho: &DensityMatrix, g: &CoherenceGenerator) -> Result<()> {
    if rho.dim() != g.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {} with generator of dimension {}",
            rho.dim(),
            g.dim()
        )));
    }
    Ok(())
}

/// Quantum Fisher information of `ρ` for phase shifts generated by `g`:
/// `2 Σ_ij (λ_i − λ_j)² / (λ_i + λ_j) |⟨ψ_i|H|ψ_j⟩|²`, skipping pairs with
/// `λ_i + λ_j ≤ 1e-12`.
pub fn quantum_fisher_information(rho: &DensityMatrix, g: &CoherenceGenerator) -> Result<f64> {
    check_dims(rho, g)?;
    let eig = hermitian_eigen(rho.matrix())?;
    let lam: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
    let v = &eig.eigenvectors;
    let h_rot = v.adjoint().matmul(g.matrix()).matmul(v);
    let n = lam.len();
    let mut sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let s = lam[i] + lam[j];
            if s <= tol::QFI_PAIR {
                continue;
            }
            let diff = lam[i] - lam[j];
            sum += diff * diff / s * h_rot[(i, j)].norm_sqr();
        }
    }
    // the (i, j) and (j, i) terms are equal
    Ok(4.0 * sum)
}

/// `Tr(ρH²) − Tr(ρH)²`.
pub fn variance(rho: &DensityMatrix, g: &CoherenceGenerator) -> Result<f64> {
    check_dims(rho, g)?;
    let h = g.matrix();
    let mean = rho.matrix().trace_product(h).re;
    let second = rho.matrix().trace_product(&h.matmul(h)).re;
    Ok((second - mean * mean).max(0.0))
}

/// `(λ_max − λ_min)²`, the QFI of the balanced superposition of extreme
/// eigenvectors.
pub fn fq_max(g: &CoherenceGenerator) -> f64 {
    let s = g.spread();
    s * s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, DimList};
    use crate::states::{basis_state, plus_state, single};
    use crate::{CMatrix, Seed};

    #[test]
    fn named_values() {
        let z = CoherenceGenerator::sigma_z();
        let mm = DensityMatrix::maximally_mixed(single(2));
        assert_eq!(quantum_fisher_information(&mm, &z).unwrap(), 0.0);
        assert!((quantum_fisher_information(&plus_state(), &z).unwrap() - 4.0).abs() < 1e-12);
        assert!(
            quantum_fisher_information(&basis_state(2, 0).unwrap(), &z)
                .unwrap()
                .abs()
                < 1e-12
        );
        assert!(quantum_fisher_information(&mm, &CoherenceGenerator::number(3).unwrap()).is_err());
    }

    #[test]
    fn fq_max_values() {
        assert!((fq_max(&CoherenceGenerator::sigma_z()) - 4.0).abs() < 1e-14);
        let two = CoherenceGenerator::new(CMatrix::from_diag(&[2.0, 0.0, 0.0, -2.0])).unwrap();
        assert!((fq_max(&two) - 16.0).abs() < 1e-13);
    }

    #[test]
    fn extreme_superposition_attains_fq_max() {
        let u = crate::states::haar_unitary(3, Seed::new(2, 2)).unwrap();
        let h = u.conjugate(&CMatrix::from_diag(&[-1.0, 0.5, 2.0]));
        let g = CoherenceGenerator::new(h).unwrap();
        let e = g.eigen();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi: Vec<_> = e
            .vector(0)
            .iter()
            .zip(e.vector(2))
            .map(|(a, b)| (a + b) * c(s, 0.0))
            .collect();
        let rho = DensityMatrix::pure(&psi, single(3)).unwrap();
        let q = quantum_fisher_information(&rho, &g).unwrap();
        assert!((q - fq_max(&g)).abs() < 1e-9);
        assert!((q - 9.0).abs() < 1e-9);
        let _ = DimList::new(vec![3]).unwrap();
    }
}
