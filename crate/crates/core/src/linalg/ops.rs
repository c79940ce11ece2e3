use super::{c, hermitian_eigen, ComplexMatrix, Real};
use crate::error::{Error, Result};
use crate::tol;
use serde::{Deserialize, Serialize};

/// Subsystem dimensions, leftmost tensor factor first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DimList(Vec<usize>);

impl DimList {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::DimensionMismatch(format!(
                "subsystem dimensions must be positive and non-empty, got {dims:?}"
            )));
        }
        dims.iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::DimensionMismatch("dimension product overflows".into()))?;
        Ok(Self(dims))
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Dimensions of the listed subsystems, in the given order.
    pub fn select(&self, idx: &[usize]) -> DimList {
        DimList(idx.iter().map(|&i| self.0[i]).collect())
    }

    pub fn concat(&self, other: &DimList) -> DimList {
        DimList(self.0.iter().chain(&other.0).copied().collect())
    }

    /// Row-major strides.
    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.0.len()];
        for k in (0..self.0.len().saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.0[k + 1];
        }
        s
    }

    /// Flat offsets contributed by every joint configuration of the listed
    /// subsystems, enumerated in row-major order over `idx`.
    fn offsets(&self, idx: &[usize]) -> Vec<usize> {
        let strides = self.strides();
        let mut out = vec![0usize];
        for &k in idx {
            let stride = strides[k];
            out = out
                .iter()
                .flat_map(|&o| (0..self.0[k]).map(move |i| o + i * stride))
                .collect();
        }
        out
    }
}

impl std::ops::Index<usize> for DimList {
    type Output = usize;

    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let rows = a
        .rows()
        .checked_mul(b.rows())
        .ok_or_else(|| Error::DimensionMismatch("kron row count overflows".into()))?;
    let cols = a
        .cols()
        .checked_mul(b.cols())
        .ok_or_else(|| Error::DimensionMismatch("kron column count overflows".into()))?;
    let (rb, cb) = (b.rows(), b.cols());
    Ok(ComplexMatrix::from_fn(rows, cols, |r, s| {
        a[(r / rb, s / cb)] * b[(r % rb, s % cb)]
    }))
}

fn check_dims<T: Real>(m: &ComplexMatrix<T>, dims: &DimList) -> Result<()> {
    if !m.is_square() || m.rows() != dims.total() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix does not match subsystem dims {:?}",
            m.rows(),
            m.cols(),
            dims.as_slice()
        )));
    }
    Ok(())
}

/// Traces out every subsystem not listed in `keep`. Kept subsystems stay in
/// their original order regardless of the order of `keep`.
pub fn partial_trace<T: Real>(
    m: &ComplexMatrix<T>,
    dims: &DimList,
    keep: &[usize],
) -> Result<ComplexMatrix<T>> {
    check_dims(m, dims)?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.is_empty() || kept.iter().any(|&k| k >= dims.len()) {
        return Err(Error::DimensionMismatch(format!(
            "invalid kept subsystems {keep:?} for {} subsystems",
            dims.len()
        )));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !kept.contains(k)).collect();
    let ko = dims.offsets(&kept);
    let to = dims.offsets(&traced);
    let n = ko.len();
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        to.iter().fold(c(T::zero(), T::zero()), |acc, &t| {
            acc + m[(ko[i] + t, ko[j] + t)]
        })
    }))
}

/// Reorders tensor factors: output factor `k` is input factor `perm[k]`.
pub fn permute_subsystems<T: Real>(
    m: &ComplexMatrix<T>,
    dims: &DimList,
    perm: &[usize],
) -> Result<(ComplexMatrix<T>, DimList)> {
    check_dims(m, dims)?;
    let mut sorted = perm.to_vec();
    sorted.sort_unstable();
    if sorted != (0..dims.len()).collect::<Vec<_>>() {
        return Err(Error::DimensionMismatch(format!(
            "{perm:?} is not a permutation of {} subsystems",
            dims.len()
        )));
    }
    let off = dims.offsets(perm);
    let n = off.len();
    Ok((
        ComplexMatrix::from_fn(n, n, |i, j| m[(off[i], off[j])]),
        dims.select(perm),
    ))
}

/// Pseudo-power `V diag(f(λ)) V†` with `f(λ) = λ^exponent` on eigenvalues
/// above `support_cutoff` and zero elsewhere.
pub fn psd_power<T: Real>(
    m: &ComplexMatrix<T>,
    exponent: T,
    support_cutoff: T,
) -> Result<ComplexMatrix<T>> {
    let eig = hermitian_eigen(m)?;
    if eig.min() < -T::lit(tol::PSD) {
        return Err(Error::NotPsd(eig.min().to_f64().unwrap_or(f64::NAN)));
    }
    Ok(eig.map(|l| {
        if l > support_cutoff {
            c(l.powf(exponent), T::zero())
        } else {
            c(T::zero(), T::zero())
        }
    }))
}

/// Uhlmann fidelity `(Tr √(√ρ σ √ρ))²`, clamped to `[0, 1]`.
pub fn uhlmann_fidelity<T: Real>(rho: &ComplexMatrix<T>, sigma: &ComplexMatrix<T>) -> Result<T> {
    if rho.rows() != sigma.rows() || !rho.is_square() || !sigma.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "fidelity between {}x{} and {}x{}",
            rho.rows(),
            rho.cols(),
            sigma.rows(),
            sigma.cols()
        )));
    }
    let sqrt_rho = psd_power(rho, T::lit(0.5), T::zero())?;
    let inner = sqrt_rho.matmul(sigma).matmul(&sqrt_rho).hermitian_part();
    let eig = hermitian_eigen(&inner)?;
    // eigenvalues at rounding level are noise from the rank deficiency
    let noise = T::lit(64.0) * T::epsilon() * T::one().max(eig.max());
    let root: T = eig
        .eigenvalues
        .iter()
        .filter(|&&l| l > noise)
        .fold(T::zero(), |acc, &l| acc + l.sqrt());
    Ok((root * root).max(T::zero()).min(T::one()))
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMatrix<f64>;

    fn z() -> M {
        M::from_diag(&[1.0, -1.0])
    }

    fn ket(v: &[f64]) -> M {
        M::outer(&v.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>())
    }

    #[test]
    fn kron_identity() {
        let i4 = kron(&M::identity(2), &M::identity(2)).unwrap();
        assert_eq!(i4, M::identity(4));
    }

    #[test]
    fn kron_basis_projectors() {
        let p = kron(&ket(&[1., 0.]), &ket(&[0., 1.])).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == 1 && j == 1 { 1.0 } else { 0.0 };
                assert_eq!(p[(i, j)], c(want, 0.0));
            }
        }
    }

    #[test]
    fn kron_zz_is_diag() {
        assert_eq!(kron(&z(), &z()).unwrap(), M::from_diag(&[1., -1., -1., 1.]));
    }

    #[test]
    fn partial_trace_of_bell_is_maximally_mixed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = ket(&[s, 0., 0., s]);
        let dims = DimList::new(vec![2, 2]).unwrap();
        let ra = partial_trace(&bell, &dims, &[0]).unwrap();
        assert!(ra.distance(&M::from_diag(&[0.5, 0.5])) < 1e-15);
    }

    #[test]
    fn partial_trace_of_product_and_identity_case() {
        let a = M::from_diag(&[0.3, 0.7]);
        let b = M::from_diag(&[0.1, 0.2, 0.7]);
        let ab = kron(&a, &b).unwrap();
        let dims = DimList::new(vec![2, 3]).unwrap();
        assert!(partial_trace(&ab, &dims, &[0]).unwrap().distance(&a) < 1e-15);
        assert!(partial_trace(&ab, &dims, &[1]).unwrap().distance(&b) < 1e-15);
        assert_eq!(partial_trace(&ab, &dims, &[1, 0]).unwrap(), ab);
    }

    #[test]
    fn partial_trace_rejects_bad_dims() {
        let dims = DimList::new(vec![2, 3]).unwrap();
        assert!(partial_trace(&M::identity(4), &dims, &[0]).is_err());
        assert!(partial_trace(&M::identity(6), &dims, &[]).is_err());
        assert!(partial_trace(&M::identity(6), &dims, &[2]).is_err());
    }

    #[test]
    fn permute_swaps_factors() {
        let a = M::from_diag(&[0.3, 0.7]);
        let b = M::from_diag(&[0.1, 0.2, 0.7]);
        let dims = DimList::new(vec![2, 3]).unwrap();
        let (ba, d) = permute_subsystems(&kron(&a, &b).unwrap(), &dims, &[1, 0]).unwrap();
        assert_eq!(d.as_slice(), &[3, 2]);
        assert!(ba.distance(&kron(&b, &a).unwrap()) < 1e-15);
    }

    #[test]
    fn psd_power_cases() {
        let p = psd_power(&M::identity(3), 0.5, 1e-12).unwrap();
        assert!(p.distance(&M::identity(3)) < 1e-14);
        let q = psd_power(&M::from_diag(&[4.0, 0.0]), -0.5, 1e-12).unwrap();
        assert!(q.distance(&M::from_diag(&[0.5, 0.0])) < 1e-14);
        assert!(matches!(
            psd_power(&M::from_diag(&[1.0, -0.1]), 0.5, 1e-12),
            Err(Error::NotPsd(_))
        ));
    }

    #[test]
    fn fidelity_cases() {
        let zero = ket(&[1., 0.]);
        let one = ket(&[0., 1.]);
        let mixed = M::from_diag(&[0.5, 0.5]);
        assert!((uhlmann_fidelity(&zero, &zero).unwrap() - 1.0).abs() < 1e-12);
        assert!(uhlmann_fidelity(&zero, &one).unwrap().abs() < 1e-12);
        assert!((uhlmann_fidelity(&zero, &mixed).unwrap() - 0.5).abs() < 1e-12);
        assert!(uhlmann_fidelity(&zero, &M::identity(3)).is_err());
    }
}
