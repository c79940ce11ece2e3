//! Density matrices, the named state families, and seeded samplers.

use crate::error::{Error, Result};
use crate::linalg::{self, c, hermitian_eigen, kron, partial_trace, DimList};
use crate::rng::Seed;
use crate::tol;
use crate::{CMatrix, Complex64};
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::FRAC_1_SQRT_2;

/// Positive semidefinite, unit-trace matrix with its subsystem layout.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    dims: DimList,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity; the stored matrix is
    /// the Hermitian part of the input.
    pub fn new(matrix: CMatrix, dims: DimList) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != dims.total() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix with dims {:?}",
                matrix.rows(),
                matrix.cols(),
                dims.as_slice()
            )));
        }
        let herm = matrix.hermiticity_error();
        if herm > tol::HERM {
            return Err(Error::NotHermitian(herm));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol::TRACE || tr.im.abs() > tol::TRACE {
            return Err(Error::InvalidTrace(tr.re));
        }
        let matrix = matrix.hermitian_part();
        let eig = hermitian_eigen(&matrix)?;
        if eig.min() < -tol::PSD {
            return Err(Error::NotPsd(eig.min()));
        }
        Ok(Self { matrix, dims })
    }

    /// Normalizes a PSD matrix by its trace before validating.
    pub fn from_unnormalized(matrix: CMatrix, dims: DimList) -> Result<Self> {
        let tr = matrix.trace().re;
        if !(tr > 0.0) {
            return Err(Error::InvalidTrace(tr));
        }
        Self::new(matrix.scale(1.0 / tr), dims)
    }

    pub(crate) fn from_parts(matrix: CMatrix, dims: DimList) -> Self {
        debug_assert_eq!(matrix.rows(), dims.total());
        Self {
            matrix: matrix.hermitian_part(),
            dims,
        }
    }

    /// `|ψ⟩⟨ψ|` for a normalized `ψ`.
    pub fn pure(psi: &[Complex64], dims: DimList) -> Result<Self> {
        let n = linalg::vec_norm(psi);
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidTrace(n * n));
        }
        Self::new(CMatrix::outer(psi), dims)
    }

    pub fn maximally_mixed(dims: DimList) -> Self {
        let n = dims.total();
        Self::from_parts(CMatrix::identity(n).scale(1.0 / n as f64), dims)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &DimList {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }

    /// Reduced state on the listed subsystems (kept in original order).
    pub fn marginal(&self, keep: &[usize]) -> Result<Self> {
        let mut k = keep.to_vec();
        k.sort_unstable();
        k.dedup();
        let m = partial_trace(&self.matrix, &self.dims, &k)?;
        Ok(Self::from_parts(m, self.dims.select(&k)))
    }

    /// Reorders subsystems: output factor `k` is input factor `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let (m, d) = linalg::permute_subsystems(&self.matrix, &self.dims, perm)?;
        Ok(Self::from_parts(m, d))
    }

    /// `λ·self + (1−λ)·other`.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!(
                "mixing dims {:?} with {:?}",
                self.dims.as_slice(),
                other.dims.as_slice()
            )));
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::OutOfRange(format!("mixing weight {lambda}")));
        }
        let m = &self.matrix.scale(lambda) + &other.matrix.scale(1.0 - lambda);
        Ok(Self::from_parts(m, self.dims.clone()))
    }

    /// `U ρ U†` without revalidation (unitarity is the caller's contract).
    pub(crate) fn conjugated(&self, u: &CMatrix) -> Self {
        Self::from_parts(u.conjugate(&self.matrix), self.dims.clone())
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.matrix)
            .expect("density matrix is Hermitian")
            .eigenvalues
    }
}

/// Uhlmann fidelity between two density matrices of equal dimension.
pub fn uhlmann_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    linalg::uhlmann_fidelity(rho.matrix(), sigma.matrix())
}

fn dims(d: &[usize]) -> DimList {
    DimList::new(d.to_vec()).expect("static dims are valid")
}

fn basis(n: usize, k: usize) -> Vec<Complex64> {
    let mut v = vec![c(0.0, 0.0); n];
    v[k] = c(1.0, 0.0);
    v
}

/// `|Φ⁺⟩ = (|00⟩ + |11⟩)/√2` as a vector on `d⊗d`, normalized.
pub fn max_entangled_vector(d: usize) -> Vec<Complex64> {
    let mut v = vec![c(0.0, 0.0); d * d];
    let amp = 1.0 / (d as f64).sqrt();
    for i in 0..d {
        v[i * d + i] = c(amp, 0.0);
    }
    v
}

/// Maximally entangled two-qudit projector `|Φ⁺_d⟩⟨Φ⁺_d|`.
pub fn max_entangled(d: usize) -> DensityMatrix {
    DensityMatrix::from_parts(CMatrix::outer(&max_entangled_vector(d)), dims(&[d, d]))
}

pub fn bell_pair() -> DensityMatrix {
    max_entangled(2)
}

/// `p |Φ⁺⟩⟨Φ⁺| + (1−p) I/4`.
pub fn werner(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("Werner weight p = {p}")));
    }
    bell_pair().mix(&DensityMatrix::maximally_mixed(dims(&[2, 2])), p)
}

pub fn ghz() -> DensityMatrix {
    let mut v = vec![c(0.0, 0.0); 8];
    v[0] = c(FRAC_1_SQRT_2, 0.0);
    v[7] = c(FRAC_1_SQRT_2, 0.0);
    DensityMatrix::from_parts(CMatrix::outer(&v), dims(&[2, 2, 2]))
}

pub fn w_state() -> DensityMatrix {
    let a = 1.0 / 3f64.sqrt();
    let mut v = vec![c(0.0, 0.0); 8];
    for k in [1, 2, 4] {
        v[k] = c(a, 0.0);
    }
    DensityMatrix::from_parts(CMatrix::outer(&v), dims(&[2, 2, 2]))
}

/// `|+⟩⟨+|` on one qubit.
pub fn plus_state() -> DensityMatrix {
    DensityMatrix::from_parts(
        CMatrix::outer(&[c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]),
        dims(&[2]),
    )
}

/// Computational basis projector `|k⟩⟨k|` on a `d`-level system.
pub fn basis_state(d: usize, k: usize) -> Result<DensityMatrix> {
    if k >= d {
        return Err(Error::OutOfRange(format!(
            "basis index {k} for dimension {d}"
        )));
    }
    Ok(DensityMatrix::from_parts(
        CMatrix::outer(&basis(d, k)),
        dims(&[d]),
    ))
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_fn(2, 2, |i, j| if i != j { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 1) => c(0.0, -1.0),
        (1, 0) => c(0.0, 1.0),
        _ => c(0.0, 0.0),
    })
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_diag(&[1.0, -1.0])
}

/// Thermal state `e^{−βH}/Tr e^{−βH}` of three subsystems with
/// `H = H_A + H_B + H_C + J (Z_A Z_B + Z_A Z_C)`. The coupling needs qubits
/// unless `J = 0`.
pub fn gibbs(
    h_a: &CMatrix,
    h_b: &CMatrix,
    h_c: &CMatrix,
    coupling: f64,
    beta: f64,
) -> Result<DensityMatrix> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::OutOfRange(format!("inverse temperature β = {beta}")));
    }
    if !coupling.is_finite() {
        return Err(Error::OutOfRange(format!("coupling J = {coupling}")));
    }
    for h in [h_a, h_b, h_c] {
        if !h.is_square() {
            return Err(Error::DimensionMismatch(
                "local Hamiltonian not square".into(),
            ));
        }
        let e = h.hermiticity_error();
        if e > tol::HERM {
            return Err(Error::NotHermitian(e));
        }
    }
    let (da, db, dc) = (h_a.rows(), h_b.rows(), h_c.rows());
    let ia = CMatrix::identity(da);
    let ib = CMatrix::identity(db);
    let ic = CMatrix::identity(dc);
    let mut h = &(&kron(&kron(h_a, &ib)?, &ic)? + &kron(&kron(&ia, h_b)?, &ic)?)
        + &kron(&kron(&ia, &ib)?, h_c)?;
    if coupling != 0.0 {
        if (da, db, dc) != (2, 2, 2) {
            return Err(Error::DimensionMismatch(
                "σ_z⊗σ_z coupling requires three qubits".into(),
            ));
        }
        let z = pauli_z();
        let i2 = CMatrix::identity(2);
        let zz_ab = kron(&kron(&z, &z)?, &i2)?;
        let zz_ac = kron(&kron(&z, &i2)?, &z)?;
        h = &h + &(&zz_ab + &zz_ac).scale(coupling);
    }
    let eig = hermitian_eigen(&h)?;
    let shift = eig.min();
    let m = eig.map(|l| c((-beta * (l - shift)).exp(), 0.0));
    DensityMatrix::from_unnormalized(m, dims(&[da, db, dc]))
}

/// `(1/d) Σ_i |i⟩⟨i|_A ⊗ |i⟩⟨i|_C` laid out as `A ⊗ B ⊗ C` with `d_B = 1`.
pub fn classical_correlated(d: usize) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::OutOfRange(format!(
            "classical_correlated needs d ≥ 2, got {d}"
        )));
    }
    let mut diag = vec![0.0; d * d];
    for i in 0..d {
        diag[i * d + i] = 1.0 / d as f64;
    }
    Ok(DensityMatrix::from_parts(
        CMatrix::from_diag(&diag),
        dims(&[d, 1, d]),
    ))
}

/// `a ⊗ b` with concatenated subsystem lists.
pub fn compose_product(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    Ok(DensityMatrix::from_parts(
        kron(a.matrix(), b.matrix())?,
        a.dims().concat(b.dims()),
    ))
}

pub(crate) fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

pub(crate) fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-random isometry `cols → rows`: Gram–Schmidt on the columns of a
/// Ginibre matrix. The positive diagonal of the implied R factor fixes the
/// phases, so the result is Haar distributed.
pub fn haar_isometry(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    assert!(rows >= cols, "isometry needs rows ≥ cols");
    let g = ginibre(rows, cols, rng);
    let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut v = g.col(j);
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for u in &q {
                let proj = linalg::inner(u, &v);
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= proj * ui;
                }
            }
        }
        let n = linalg::vec_norm(&v);
        for vi in v.iter_mut() {
            *vi /= n;
        }
        q.push(v);
    }
    CMatrix::from_fn(rows, cols, |i, j| q[j][i])
}

pub fn haar_unitary(d: usize, seed: Seed) -> Result<CMatrix> {
    if d == 0 {
        return Err(Error::OutOfRange("unitary dimension must be ≥ 1".into()));
    }
    Ok(haar_isometry(d, d, &mut seed.rng()))
}

pub fn haar_pure(dims: &DimList, seed: Seed) -> DensityMatrix {
    let mut rng = seed.rng();
    let mut v: Vec<Complex64> = (0..dims.total())
        .map(|_| complex_gaussian(&mut rng))
        .collect();
    let n = linalg::vec_norm(&v);
    for x in v.iter_mut() {
        *x /= n;
    }
    DensityMatrix::from_parts(CMatrix::outer(&v), dims.clone())
}

/// `G G† / Tr(G G†)` with `G` a `d × rank` Ginibre matrix.
pub fn ginibre_mixed(dims: &DimList, rank: usize, seed: Seed) -> Result<DensityMatrix> {
    let d = dims.total();
    if rank == 0 || rank > d {
        return Err(Error::OutOfRange(format!("rank {rank} for dimension {d}")));
    }
    let g = ginibre(d, rank, &mut seed.rng());
    let m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    Ok(DensityMatrix::from_parts(m.scale(1.0 / tr), dims.clone()))
}

/// Convenience wrapper for a single subsystem of dimension `d`.
pub fn single(d: usize) -> DimList {
    dims(&[d])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        a.distance(b) < tol
    }

    fn revalidate(r: &DensityMatrix) {
        DensityMatrix::new(r.matrix().clone(), r.dims().clone()).expect("valid state");
    }

    #[test]
    fn bell_pair_entries_and_marginal() {
        let b = bell_pair();
        assert!((b.matrix()[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((b.matrix().trace().re - 1.0).abs() < 1e-15);
        let ra = b.marginal(&[0]).unwrap();
        assert!(close(ra.matrix(), &CMatrix::from_diag(&[0.5, 0.5]), 1e-15));
        revalidate(&b);
    }

    #[test]
    fn werner_endpoints_and_overlap() {
        assert!(close(
            werner(1.0).unwrap().matrix(),
            bell_pair().matrix(),
            1e-15
        ));
        assert!(close(
            werner(0.0).unwrap().matrix(),
            &CMatrix::identity(4).scale(0.25),
            1e-15
        ));
        let w = werner(0.5).unwrap();
        let ov = w.matrix().expectation(&max_entangled_vector(2)).re;
        assert!((ov - 5.0 / 8.0).abs() < 1e-15);
        assert!(werner(1.5).is_err());
        assert!(werner(-0.1).is_err());
    }

    #[test]
    fn ghz_and_w_marginals() {
        let g = ghz();
        let ab = g.marginal(&[0, 1]).unwrap();
        // off-diagonal |00⟩⟨11| coherence is gone after tracing C
        assert!(ab.matrix()[(0, 3)].norm() < 1e-15);
        assert!(close(
            ab.matrix(),
            &CMatrix::from_diag(&[0.5, 0., 0., 0.5]),
            1e-15
        ));
        let wa = w_state().marginal(&[0]).unwrap();
        assert!(close(
            wa.matrix(),
            &CMatrix::from_diag(&[2. / 3., 1. / 3.]),
            1e-15
        ));
        for s in [g, w_state()] {
            assert!((s.matrix().trace().re - 1.0).abs() < 1e-14);
            revalidate(&s);
        }
    }

    #[test]
    fn gibbs_limits() {
        let z = pauli_z();
        let zero = CMatrix::zeros(2, 2);
        let g0 = gibbs(&z, &z, &z, 0.7, 0.0).unwrap();
        assert!(close(
            g0.matrix(),
            &CMatrix::identity(8).scale(0.125),
            1e-14
        ));
        let cold = gibbs(&z, &zero, &zero, 0.0, 50.0).unwrap();
        let ra = cold.marginal(&[0]).unwrap();
        assert!(close(ra.matrix(), &CMatrix::from_diag(&[0.0, 1.0]), 1e-12));
        let warm = gibbs(&z, &pauli_x(), &z, 0.3, 1.3).unwrap();
        assert!((warm.matrix().trace().re - 1.0).abs() < 1e-12);
        revalidate(&warm);
        let bad = CMatrix::from_fn(2, 2, |i, j| if i < j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        assert!(matches!(
            gibbs(&bad, &z, &z, 0.0, 1.0),
            Err(Error::NotHermitian(_))
        ));
        assert!(gibbs(&z, &z, &z, 0.0, -1.0).is_err());
    }

    #[test]
    fn classical_correlated_structure() {
        let s = classical_correlated(2).unwrap();
        assert_eq!(s.dims().as_slice(), &[2, 1, 2]);
        assert!(close(
            s.matrix(),
            &CMatrix::from_diag(&[0.5, 0., 0., 0.5]),
            1e-15
        ));
        let s3 = classical_correlated(3).unwrap();
        let ra = s3.marginal(&[0]).unwrap();
        assert!(close(
            ra.matrix(),
            &CMatrix::identity(3).scale(1.0 / 3.0),
            1e-15
        ));
        assert!(classical_correlated(1).is_err());
    }

    #[test]
    fn haar_pure_is_pure_and_deterministic() {
        let d = dims(&[2, 2, 2]);
        let a = haar_pure(&d, Seed::new(3, 9));
        let b = haar_pure(&d, Seed::new(3, 9));
        assert_eq!(a, b);
        assert!((a.purity() - 1.0).abs() < 1e-12);
        revalidate(&a);
    }

    #[test]
    fn ginibre_rank_and_determinism() {
        let d = dims(&[2, 2]);
        let r1 = ginibre_mixed(&d, 1, Seed::new(1, 1)).unwrap();
        assert!((r1.purity() - 1.0).abs() < 1e-12);
        let r3 = ginibre_mixed(&d, 3, Seed::new(1, 2)).unwrap();
        let count = r3.eigenvalues().iter().filter(|&&l| l > tol::PSD).count();
        assert_eq!(count, 3);
        let q = dims(&[2]);
        assert_eq!(
            ginibre_mixed(&q, 2, Seed::new(5, 5)).unwrap(),
            ginibre_mixed(&q, 2, Seed::new(5, 5)).unwrap()
        );
        assert!(ginibre_mixed(&q, 3, Seed::new(5, 5)).is_err());
        assert!(ginibre_mixed(&q, 0, Seed::new(5, 5)).is_err());
        revalidate(&r3);
    }

    #[test]
    fn haar_unitary_properties() {
        let u1 = haar_unitary(1, Seed::new(0, 0)).unwrap();
        assert!((u1[(0, 0)].norm() - 1.0).abs() < 1e-14);
        for d in [2, 3, 8] {
            let u = haar_unitary(d, Seed::new(11, d as u64)).unwrap();
            assert!(u.unitarity_error() < 1e-10);
        }
    }

    #[test]
    fn compose_product_factors() {
        let s = compose_product(&bell_pair(), &DensityMatrix::maximally_mixed(single(2))).unwrap();
        assert_eq!(s.dims().as_slice(), &[2, 2, 2]);
        assert!((s.matrix().trace().re - 1.0).abs() < 1e-15);
        assert!(close(
            s.marginal(&[0, 1]).unwrap().matrix(),
            bell_pair().matrix(),
            1e-15
        ));
        let a = ginibre_mixed(&single(2), 2, Seed::new(2, 0)).unwrap();
        let b = ginibre_mixed(&single(3), 2, Seed::new(2, 1)).unwrap();
        let ab = compose_product(&a, &b).unwrap();
        assert!((ab.purity() - a.purity() * b.purity()).abs() < 1e-14);
    }

    #[test]
    fn validation_rejects_bad_matrices() {
        let d = single(2);
        assert!(matches!(
            DensityMatrix::new(CMatrix::from_diag(&[1.5, -0.5]), d.clone()),
            Err(Error::NotPsd(_))
        ));
        assert!(matches!(
            DensityMatrix::new(CMatrix::from_diag(&[0.5, 0.6]), d.clone()),
            Err(Error::InvalidTrace(_))
        ));
        assert!(DensityMatrix::new(CMatrix::identity(3).scale(1.0 / 3.0), d).is_err());
    }
}
