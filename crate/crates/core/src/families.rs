//! Named tripartite families addressed by the CLI and the claim checks.

use crate::error::{Error, Result};
use crate::linalg::{c, DimList};
use crate::resources::CoherenceGenerator;
use crate::states::{self, compose_product, max_entangled, DensityMatrix};
use crate::Complex64;

fn mixed(d: usize) -> DensityMatrix {
    DensityMatrix::maximally_mixed(states::single(d))
}

/// `|Φ⁺_d⟩⟨Φ⁺_d|_AB ⊗ σ_C`.
pub fn bell_spectator(d: usize, sigma_c: &DensityMatrix) -> Result<DensityMatrix> {
    compose_product(&max_entangled(d), sigma_c)
}

/// `|Φ⁺_d⟩⟨Φ⁺_d|` on A–C with `σ_B` as spectator, laid out as `A ⊗ B ⊗ C`.
pub fn bell_ac(d: usize, sigma_b: &DensityMatrix) -> Result<DensityMatrix> {
    compose_product(&max_entangled(d), sigma_b)?.permute(&[0, 2, 1])
}

/// Pure state on A with maximal QFI for `g`: `|+⟩` for qubits, otherwise
/// the balanced superposition of the extreme eigenvectors of `g`.
pub fn coherent_vector(g: &CoherenceGenerator) -> Vec<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    if g.dim() == 2 {
        return vec![c(s, 0.0), c(s, 0.0)];
    }
    let e = g.eigen();
    e.vector(0)
        .iter()
        .zip(e.vector(e.dim() - 1))
        .map(|(a, b)| (a + b) * s)
        .collect()
}

/// `|ψ⟩⟨ψ|_A ⊗ σ_BC` with `ψ` from [`coherent_vector`].
pub fn coherent_spectator(
    g: &CoherenceGenerator,
    sigma_bc: &DensityMatrix,
) -> Result<DensityMatrix> {
    let a = DensityMatrix::pure(&coherent_vector(g), states::single(g.dim()))?;
    compose_product(&a, sigma_bc)
}

/// Werner state on A–B with a maximally mixed C.
pub fn werner_spectator(p: f64) -> Result<DensityMatrix> {
    compose_product(&states::werner(p)?, &mixed(2))
}

/// Thermal three-qubit state with local fields `σ_z` and coupling `J`.
pub fn gibbs_family(beta: f64, coupling: f64) -> Result<DensityMatrix> {
    let z = states::pauli_z();
    states::gibbs(&z, &z, &z, coupling, beta)
}

fn parse_num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Invalid(format!("cannot parse {what} from {s:?}")))
}

/// Resolves `bell-spectator`, `bell-ac`, `coherent-spectator`, `ghz`, `w`,
/// `werner:<p>`, `classical:<d>` and `gibbs:<β>:<J>`.
pub fn named_family(name: &str) -> Result<DensityMatrix> {
    let parts: Vec<&str> = name.split(':').collect();
    match parts.as_slice() {
        ["bell-spectator"] => bell_spectator(2, &mixed(2)),
        ["bell-ac"] => DensityMatrix::new(
            max_entangled(2).matrix().clone(),
            DimList::new(vec![2, 1, 2])?,
        ),
        ["coherent-spectator"] => coherent_spectator(
            &CoherenceGenerator::sigma_z(),
            &DensityMatrix::maximally_mixed(DimList::new(vec![2, 2])?),
        ),
        ["ghz"] => Ok(states::ghz()),
        ["w"] => Ok(states::w_state()),
        ["werner", p] => werner_spectator(parse_num(p, "Werner weight")?),
        ["classical", d] => states::classical_correlated(parse_num(d, "dimension")?),
        ["gibbs", beta, j] => gibbs_family(parse_num(beta, "β")?, parse_num(j, "J")?),
        _ => Err(Error::Invalid(format!("unknown family {name:?}"))),
    }
}

/// Product of maximally mixed states with the given dims.
pub fn maximally_mixed(dims: &[usize]) -> Result<DensityMatrix> {
    Ok(DensityMatrix::maximally_mixed(DimList::new(dims.to_vec())?))
}
