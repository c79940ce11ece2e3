use super::CoherenceGenerator;
use crate::error::{Error, Result};
use crate::linalg::hermitian_eigen;
use crate::states::DensityMatrix;
use crate::tol;
use serde::Serialize;

fn shannon(p: impl IntoIterator<Item = f64>) -> f64 {
    p.into_iter()
        .filter(|&x| x > tol::PSD)
        .map(|x| -x * x.ln())
        .sum::<f64>()
        .max(0.0)
}

/// `−Tr ρ ln ρ`; eigenvalues at or below [`tol::PSD`] contribute nothing.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    shannon(rho.eigenvalues())
}

/// `S(A) + S(B) − S(AB)` of a bipartite state.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims().len() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "mutual information needs two subsystems, got {:?}",
            rho.dims().as_slice()
        )));
    }
    let a = rho.marginal(&[0])?;
    let b = rho.marginal(&[1])?;
    let i = von_neumann_entropy(&a) + von_neumann_entropy(&b) - von_neumann_entropy(rho);
    Ok(i.max(0.0))
}

fn diagonal_in(rho: &DensityMatrix, g: &CoherenceGenerator) -> Result<Vec<f64>> {
    if rho.dim() != g.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {} with generator of dimension {}",
            rho.dim(),
            g.dim()
        )));
    }
    let e = g.eigen();
    Ok((0..e.dim())
        .map(|k| rho.matrix().expectation(&e.vector(k)).re)
        .collect())
}

/// Shannon entropy of projective measurement outcomes in the generator
/// eigenbasis.
pub fn measurement_entropy(rho: &DensityMatrix, g: &CoherenceGenerator) -> Result<f64> {
    Ok(shannon(diagonal_in(rho, g)?))
}

/// `Tr ρ (ln ρ − ln σ)`, or `+∞` when the support of `ρ` leaves that of `σ`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "relative entropy between dimensions {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let es = hermitian_eigen(sigma.matrix())?;
    let mut cross = 0.0;
    for (k, &mu) in es.eigenvalues.iter().enumerate() {
        let w = rho.matrix().expectation(&es.vector(k)).re;
        if mu > tol::PSD {
            cross += w * mu.ln();
        } else if w > tol::PSD {
            return Ok(f64::INFINITY);
        }
    }
    Ok((-von_neumann_entropy(rho) - cross).max(0.0))
}

/// Relative entropy of coherence, `S(Δ(ρ)) − S(ρ)` with `Δ` the dephasing
/// in the generator eigenbasis.
pub fn coherence_rel_ent(rho: &DensityMatrix, g: &CoherenceGenerator) -> Result<f64> {
    Ok((measurement_entropy(rho, g)? - von_neumann_entropy(rho)).max(0.0))
}

/// Entropic quantities of a tripartite state, evaluated on `ρ_A` unless noted.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyReport {
    /// `S(ρ_A)`.
    pub s: f64,
    pub h_meas: f64,
    pub i_ab: f64,
    pub i_ac: f64,
    /// `D(ρ_A ‖ reference)` when a reference state is supplied.
    pub d_rel: Option<f64>,
    pub c_coh: f64,
}

pub fn entropy_report(
    rho_abc: &DensityMatrix,
    g: &CoherenceGenerator,
    reference: Option<&DensityMatrix>,
) -> Result<EntropyReport> {
    if rho_abc.dims().len() != 3 {
        return Err(Error::DimensionMismatch(
            "entropy report needs three subsystems".into(),
        ));
    }
    let a = rho_abc.marginal(&[0])?;
    Ok(EntropyReport {
        s: von_neumann_entropy(&a),
        h_meas: measurement_entropy(&a, g)?,
        i_ab: mutual_information(&rho_abc.marginal(&[0, 1])?)?,
        i_ac: mutual_information(&rho_abc.marginal(&[0, 2])?)?,
        d_rel: reference.map(|r| relative_entropy(&a, r)).transpose()?,
        c_coh: coherence_rel_ent(&a, g)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DimList;
    use crate::states::{basis_state, bell_pair, plus_state, single};
    use std::f64::consts::LN_2;

    #[test]
    fn named_values() {
        let ra = bell_pair().marginal(&[0]).unwrap();
        assert!((von_neumann_entropy(&ra) - LN_2).abs() < 1e-14);
        assert!((mutual_information(&bell_pair()).unwrap() - 2.0 * LN_2).abs() < 1e-13);
        let z = CoherenceGenerator::sigma_z();
        assert!((coherence_rel_ent(&plus_state(), &z).unwrap() - LN_2).abs() < 1e-13);
        assert!((measurement_entropy(&plus_state(), &z).unwrap() - LN_2).abs() < 1e-13);
        assert!(coherence_rel_ent(&plus_state(), &CoherenceGenerator::sigma_x()).unwrap() < 1e-12);
    }

    #[test]
    fn relative_entropy_cases() {
        let zero = basis_state(2, 0).unwrap();
        let one = basis_state(2, 1).unwrap();
        let mm = DensityMatrix::maximally_mixed(single(2));
        assert_eq!(relative_entropy(&zero, &one).unwrap(), f64::INFINITY);
        assert!((relative_entropy(&zero, &mm).unwrap() - LN_2).abs() < 1e-13);
        assert!(relative_entropy(&mm, &mm).unwrap().abs() < 1e-13);
        assert!(relative_entropy(&mm, &bell_pair()).is_err());
    }

    #[test]
    fn report_on_bell_spectator() {
        let rho =
            crate::states::compose_product(&bell_pair(), &basis_state(2, 0).unwrap()).unwrap();
        let r = entropy_report(&rho, &CoherenceGenerator::sigma_z(), None).unwrap();
        assert!((r.s - LN_2).abs() < 1e-13);
        assert!((r.i_ab - 2.0 * LN_2).abs() < 1e-13);
        assert!(r.i_ac.abs() < 1e-13);
        assert!(r.d_rel.is_none());
        let _ = DimList::new(vec![2]).unwrap();
    }
}
