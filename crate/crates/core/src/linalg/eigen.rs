use super::{c, ComplexMatrix, Real, C};
use crate::error::{Error, Result};
use crate::tol;

/// Spectral decomposition `m = V diag(λ) V†` of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T: Real> {
    /// Ascending.
    pub eigenvalues: Vec<T>,
    /// Columns are the orthonormal eigenvectors, in eigenvalue order.
    pub eigenvectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, k: usize) -> Vec<C<T>> {
        self.eigenvectors.col(k)
    }

    /// Functional calculus `V diag(f(λ)) V†`.
    pub fn map(&self, f: impl Fn(T) -> C<T>) -> ComplexMatrix<T> {
        let n = self.dim();
        let v = &self.eigenvectors;
        let fl: Vec<C<T>> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &w) in fl.iter().enumerate() {
            if w.re == T::zero() && w.im == T::zero() {
                continue;
            }
            for i in 0..n {
                let a = v[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] = out[(i, j)] + a * v[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.map(|l| c(l, T::zero()))
    }

    pub fn min(&self) -> T {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> T {
        self.eigenvalues[self.dim() - 1]
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. The input is symmetrized as `(m + m†)/2` after checking that
/// it is Hermitian within [`tol::HERM`] (relative to its scale).
pub fn hermitian_eigen<T: Real>(m: &ComplexMatrix<T>) -> Result<HermitianEigen<T>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let herm_err = m.hermiticity_error();
    let scale = T::one().max(m.frobenius_norm());
    if herm_err > T::lit(tol::HERM) * scale || herm_err.is_nan() {
        return Err(Error::NotHermitian(herm_err.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(jacobi(m.hermitian_part()))
}

fn jacobi<T: Real>(mut a: ComplexMatrix<T>) -> HermitianEigen<T> {
    let n = a.rows();
    let mut v = ComplexMatrix::identity(n);
    let zero = T::zero();
    let eps = T::epsilon();
    let total = a.frobenius_norm();

    for _sweep in 0..100 {
        let mut off = zero;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off + a[(p, q)].norm_sqr();
            }
        }
        if off == zero || off.sqrt() <= eps * total {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = a[(p, q)];
                let babs = b.norm();
                if babs <= T::min_positive_value() {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // Phase e^{iφ} = b/|b| turns the 2x2 block real symmetric.
                let phase = b / babs;
                let tau = (aqq - app) / (T::lit(2.0) * babs);
                let t = if tau >= zero {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = t * cs;
                // G = diag(1, e^{-iφ}) · [[c, s], [-s, c]]
                let g_pp = c(cs, zero);
                let g_pq = c(sn, zero);
                let g_qp = phase.conj() * (-sn);
                let g_qq = phase.conj() * cs;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * g_pp + akq * g_qp;
                    a[(k, q)] = akp * g_pq + akq * g_qq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * g_pp + vkq * g_qp;
                    v[(k, q)] = vkp * g_pq + vkq * g_qq;
                }
                a[(p, q)] = c(zero, zero);
                a[(q, p)] = c(zero, zero);
                a[(p, p)] = c(a[(p, p)].re, zero);
                a[(q, q)] = c(a[(q, q)].re, zero);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .re
            .partial_cmp(&a[(j, j)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    HermitianEigen {
        eigenvalues,
        eigenvectors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli_x() -> ComplexMatrix<f64> {
        ComplexMatrix::from_vec(2, 2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap()
    }

    #[test]
    fn diagonal_input() {
        let z = ComplexMatrix::from_diag(&[1.0, -1.0]);
        let e = hermitian_eigen(&z).unwrap();
        assert_eq!(e.eigenvalues, vec![-1.0, 1.0]);
    }

    #[test]
    fn maximally_mixed_qubit() {
        let m = ComplexMatrix::<f64>::from_diag(&[0.5, 0.5]);
        let e = hermitian_eigen(&m).unwrap();
        assert!((e.eigenvalues[0] - 0.5).abs() < 1e-15 && (e.eigenvalues[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn pauli_x_eigenvectors_are_minus_and_plus() {
        let e = hermitian_eigen(&pauli_x()).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // |−⟩ and |+⟩ up to global phase
        let minus = e.vector(0);
        let plus = e.vector(1);
        let ov_m = super::super::inner(&[c(s, 0.), c(-s, 0.)], &minus).norm();
        let ov_p = super::super::inner(&[c(s, 0.), c(s, 0.)], &plus).norm();
        assert!((ov_m - 1.0).abs() < 1e-12);
        assert!((ov_p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn complex_entries() {
        // σ_y has eigenvalues ±1
        let y =
            ComplexMatrix::<f64>::from_vec(2, 2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
                .unwrap();
        let e = hermitian_eigen(&y).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!(e.reconstruct().distance(&y) < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_vec(2, 2, vec![c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)])
            .unwrap();
        assert!(matches!(hermitian_eigen(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn single_precision_works() {
        let m =
            ComplexMatrix::<f32>::from_vec(2, 2, vec![c(2., 0.), c(0., 1.), c(0., -1.), c(2., 0.)])
                .unwrap();
        let e = hermitian_eigen(&m).unwrap();
        assert!((e.eigenvalues[0] - 1.0).abs() < 1e-6);
        assert!((e.eigenvalues[1] - 3.0).abs() < 1e-6);
    }
}
