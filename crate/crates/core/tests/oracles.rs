//! Cross-checks against independent closed forms and nalgebra.

use nalgebra::{DMatrix, Matrix3};
use qirc::linalg::{hermitian_eigen, DimList};
use qirc::resources::{fully_entangled_fraction, OptimizerSettings};
use qirc::states::{self, ginibre_mixed, haar_pure, haar_unitary, pauli_x, pauli_y, pauli_z};
use qirc::{CMatrix, Complex64, DensityMatrix, Seed};

/// Two-qubit singlet fraction from the correlation matrix:
/// `(1 + s1 + s2 + sgn(det DT)·s3) / 4` with `D = diag(1, −1, 1)`.
fn two_qubit_fraction(rho: &DensityMatrix) -> f64 {
    let paulis = [pauli_x(), pauli_y(), pauli_z()];
    let t = Matrix3::from_fn(|i, j| {
        let op = qirc::linalg::kron(&paulis[i], &paulis[j]).unwrap();
        rho.matrix().trace_product(&op).re
    });
    let m = Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, -1.0, 1.0)) * t;
    let mut s: Vec<f64> = m
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    let sign = m.determinant().signum();
    (1.0 + s[0] + s[1] + sign * s[2]) / 4.0
}

#[test]
fn singlet_fraction_matches_correlation_matrix_formula() {
    let dims = DimList::new(vec![2, 2]).unwrap();
    let opts = OptimizerSettings::default();
    for k in 0..40u64 {
        let rank = 1 + (k as usize % 4);
        let rho = ginibre_mixed(&dims, rank, Seed::new(99, k)).unwrap();
        let want = two_qubit_fraction(&rho);
        let got = fully_entangled_fraction(&rho, &opts).unwrap().value;
        assert!((got - want).abs() < 1e-7, "trial {k}: {got} vs {want}");
    }
    let werner = states::werner(0.6).unwrap();
    assert!((two_qubit_fraction(&werner) - (3.0 * 0.6 + 1.0) / 4.0).abs() < 1e-12);
}

fn to_nalgebra(m: &CMatrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

#[test]
fn eigenvalues_match_nalgebra() {
    for (k, n) in [1usize, 2, 3, 5, 8, 16, 32].into_iter().enumerate() {
        let d = DimList::new(vec![n]).unwrap();
        let rho = ginibre_mixed(&d, n, Seed::new(5, k as u64)).unwrap();
        let h = rho.matrix()
            + &haar_unitary(n, Seed::new(6, k as u64))
                .unwrap()
                .hermitian_part();
        let ours = hermitian_eigen(&h).unwrap().eigenvalues;
        let mut theirs: Vec<f64> = to_nalgebra(&h)
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        theirs.sort_by(f64::total_cmp);
        for (a, b) in ours.iter().zip(&theirs) {
            assert!((a - b).abs() < 1e-10, "n = {n}: {a} vs {b}");
        }
    }
}

#[test]
fn haar_pure_states_average_to_the_maximally_mixed_state() {
    let dims = DimList::new(vec![2, 2]).unwrap();
    let n = 4000;
    let samples: Vec<DensityMatrix> = (0..n).map(|k| haar_pure(&dims, Seed::new(17, k))).collect();
    // per-entry mean and standard error
    for i in 0..4 {
        for j in 0..4 {
            let xs: Vec<f64> = samples.iter().map(|r| r.matrix()[(i, j)].re).collect();
            let mean = xs.iter().sum::<f64>() / n as f64;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            let se = (var / n as f64).sqrt();
            let want = if i == j { 0.25 } else { 0.0 };
            assert!(
                (mean - want).abs() < 3.0 * se + 1e-12,
                "({i},{j}): {mean} ± {se}"
            );
        }
    }
}

#[test]
fn haar_unitary_first_entry_has_mean_square_one_over_d() {
    for d in [2usize, 3, 5] {
        let n = 3000;
        let xs: Vec<f64> = (0..n)
            .map(|k| haar_unitary(d, Seed::new(23, k)).unwrap()[(0, 0)].norm_sqr())
            .collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        assert!(
            (mean - 1.0 / d as f64).abs() < 3.0 * se,
            "d = {d}: {mean} ± {se}"
        );
    }
}
