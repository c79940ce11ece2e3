use super::qfi::{fq_max, quantum_fisher_information};
use super::singlet::{
    advantage, fully_entangled_fraction, teleportation_fidelity, OptimizerSettings,
};
use super::transfer::induced_transfer_channel;
use super::CoherenceGenerator;
use crate::channels::choi;
use crate::error::{Error, Result};
use crate::states::{uhlmann_fidelity, DensityMatrix};
use crate::tol;
use serde::{Deserialize, Serialize};

/// How `q2` is operationalized.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Q2Mode {
    /// Teleportation-style advantage of the `A → C` channel induced by `ρ_AC`.
    #[default]
    Transfer,
    /// Uhlmann fidelity of the marginals `ρ_A`, `ρ_C`. Diagnostic only.
    UhlmannMarginal,
}

impl std::str::FromStr for Q2Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "transfer" => Ok(Self::Transfer),
            "uhlmann-marginal" => Ok(Self::UhlmannMarginal),
            other => Err(Error::Invalid(format!("unknown q2 mode {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProfileConfig {
    pub generator: CoherenceGenerator,
    pub q2_mode: Q2Mode,
    pub optimizer: OptimizerSettings,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        Self {
            generator: CoherenceGenerator::sigma_z(),
            q2_mode: Q2Mode::Transfer,
            optimizer: OptimizerSettings::default(),
        }
    }
}

/// Raw fidelities behind a profile. Entries are `None` when a coordinate
/// is fixed by convention (trivial partner subsystem).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FidelityBreakdown {
    pub d: usize,
    pub f_max: Option<f64>,
    pub f_tele: Option<f64>,
    /// Singlet fraction of the induced channel's Choi state.
    pub f_max_transfer: Option<f64>,
    pub f_trans: Option<f64>,
    pub f_q: f64,
    pub f_q_max: f64,
    pub q1_raw: Option<f64>,
    pub q2_raw: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResourceProfile {
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    /// `q1² + q2² + q3²`.
    pub norm: f64,
    pub q2_mode: Q2Mode,
    pub breakdown: FidelityBreakdown,
}

impl ResourceProfile {
    pub fn coords(&self) -> [f64; 3] {
        [self.q1, self.q2, self.q3]
    }
}

/// `q1² + q2² + q3²`.
pub fn resource_norm(p: &ResourceProfile) -> f64 {
    norm_of(p.q1, p.q2, p.q3)
}

fn norm_of(q1: f64, q2: f64, q3: f64) -> f64 {
    q1 * q1 + q2 * q2 + q3 * q3
}

/// Result of one fidelity-based coordinate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coordinate {
    pub value: f64,
    pub raw: f64,
    pub f_max: f64,
    pub fidelity: f64,
}

fn from_singlet_fraction(f_max: f64, d: usize) -> Coordinate {
    let fidelity = teleportation_fidelity(f_max, d);
    let raw = advantage(fidelity, d);
    Coordinate {
        value: raw.clamp(0.0, 1.0),
        raw,
        f_max,
        fidelity,
    }
}

/// Teleportation advantage of `ρ_AB`: `clamp((d+1) F_tele − d, 0, 1)`.
pub fn coord_q1(rho_ab: &DensityMatrix, opts: &OptimizerSettings) -> Result<Coordinate> {
    let f = fully_entangled_fraction(rho_ab, opts)?;
    Ok(from_singlet_fraction(f.value, rho_ab.dims()[0]))
}

/// `q2` of `ρ_AC` in the requested mode.
pub fn coord_q2(
    rho_ac: &DensityMatrix,
    mode: Q2Mode,
    opts: &OptimizerSettings,
) -> Result<Coordinate> {
    let dims = rho_ac.dims().as_slice();
    if dims.len() != 2 || dims[0] != dims[1] {
        return Err(Error::DimensionMismatch(format!(
            "q2 needs equal dimensions on A and C, got {dims:?}"
        )));
    }
    match mode {
        Q2Mode::Transfer => {
            let ch = induced_transfer_channel(rho_ac)?;
            let f = fully_entangled_fraction(&choi(&ch).state, opts)?;
            Ok(from_singlet_fraction(f.value, dims[0]))
        }
        Q2Mode::UhlmannMarginal => {
            let f = uhlmann_fidelity(&rho_ac.marginal(&[0])?, &rho_ac.marginal(&[1])?)?;
            Ok(Coordinate {
                value: f.clamp(0.0, 1.0),
                raw: f,
                f_max: f64::NAN,
                fidelity: f,
            })
        }
    }
}

/// `F_Q(ρ_A, H) / F_Q^max`, clipped to `[0, 1]`. Returns `(q3, F_Q, F_Q^max)`.
pub fn coord_q3(rho_a: &DensityMatrix, g: &CoherenceGenerator) -> Result<(f64, f64, f64)> {
    let fq = quantum_fisher_information(rho_a, g)?;
    let max = fq_max(g);
    Ok(((fq / max).clamp(0.0, 1.0), fq, max))
}

/// Resource profile `(q1(ρ_AB), q2(ρ_AC), q3(ρ_A))` of a tripartite state.
///
/// `d_A = d_B = d_C` is required, except that a one-dimensional `B` or `C`
/// pins the corresponding coordinate to zero.
pub fn profile(rho: &DensityMatrix, cfg: &ProfileConfig) -> Result<ResourceProfile> {
    let dims = rho.dims().as_slice();
    if dims.len() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "profile needs three subsystems, got {dims:?}"
        )));
    }
    let (da, db, dc) = (dims[0], dims[1], dims[2]);
    let supported = |x: usize| x == da || x == 1;
    if da < 2 || !supported(db) || !supported(dc) {
        return Err(Error::DimensionMismatch(format!(
            "unsupported dimension pattern {dims:?}: need d_A ≥ 2 and d_B, d_C ∈ {{d_A, 1}}"
        )));
    }
    if cfg.generator.dim() != da {
        return Err(Error::DimensionMismatch(format!(
            "generator of dimension {} for d_A = {da}",
            cfg.generator.dim()
        )));
    }

    let q1 = if db == da && da > 1 {
        Some(coord_q1(&rho.marginal(&[0, 1])?, &cfg.optimizer)?)
    } else {
        None
    };
    let q2 = if dc == da && da > 1 {
        Some(coord_q2(
            &rho.marginal(&[0, 2])?,
            cfg.q2_mode,
            &cfg.optimizer,
        )?)
    } else {
        None
    };
    let (q3, f_q, f_q_max) = coord_q3(&rho.marginal(&[0])?, &cfg.generator)?;

    let v1 = q1.map_or(0.0, |c| c.value);
    let v2 = q2.map_or(0.0, |c| c.value);
    let transfer = cfg.q2_mode == Q2Mode::Transfer;
    let breakdown = FidelityBreakdown {
        d: da,
        f_max: q1.map(|c| c.f_max),
        f_tele: q1.map(|c| c.fidelity),
        f_max_transfer: q2.filter(|_| transfer).map(|c| c.f_max),
        f_trans: q2.map(|c| c.fidelity),
        f_q,
        f_q_max,
        q1_raw: q1.map(|c| c.raw),
        q2_raw: q2.map(|c| c.raw),
    };
    debug_assert!(f_q <= f_q_max * (1.0 + tol::OPT) + tol::OPT);
    Ok(ResourceProfile {
        q1: v1,
        q2: v2,
        q3,
        norm: norm_of(v1, v2, q3),
        q2_mode: cfg.q2_mode,
        breakdown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DimList;
    use crate::states::*;

    fn spectator() -> DensityMatrix {
        DensityMatrix::maximally_mixed(single(2))
    }

    #[test]
    fn q1_named_values() {
        let o = OptimizerSettings::default();
        assert!((coord_q1(&bell_pair(), &o).unwrap().value - 1.0).abs() < 1e-9);
        let w = coord_q1(&werner(1.0 / 3.0).unwrap(), &o).unwrap();
        assert_eq!(w.value, 0.0);
        assert!(w.raw.abs() < 1e-9);
        let prod = compose_product(
            &ginibre_mixed(&single(2), 1, crate::Seed::new(4, 1)).unwrap(),
            &ginibre_mixed(&single(2), 2, crate::Seed::new(4, 2)).unwrap(),
        )
        .unwrap();
        let p = coord_q1(&prod, &o).unwrap();
        assert_eq!(p.value, 0.0);
        assert!(p.raw <= 1e-9);
    }

    #[test]
    fn q2_named_values() {
        let o = OptimizerSettings::default();
        assert!((coord_q2(&bell_pair(), Q2Mode::Transfer, &o).unwrap().value - 1.0).abs() < 1e-9);
        let prod = compose_product(&plus_state(), &spectator()).unwrap();
        let p = coord_q2(&prod, Q2Mode::Transfer, &o).unwrap();
        assert_eq!(p.value, 0.0);
        assert!((p.f_max - 0.25).abs() < 1e-9);
        let cc = classical_correlated(2).unwrap().marginal(&[0, 2]).unwrap();
        let u = coord_q2(&cc, Q2Mode::UhlmannMarginal, &o).unwrap();
        assert!((u.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn q3_named_values() {
        let z = CoherenceGenerator::sigma_z();
        assert!((coord_q3(&plus_state(), &z).unwrap().0 - 1.0).abs() < 1e-12);
        assert_eq!(coord_q3(&spectator(), &z).unwrap().0, 0.0);
        assert!(coord_q3(&basis_state(2, 0).unwrap(), &z).unwrap().0.abs() < 1e-12);
    }

    #[test]
    fn profile_corners() {
        let cfg = ProfileConfig::default();
        let bell = compose_product(&bell_pair(), &spectator()).unwrap();
        let p = profile(&bell, &cfg).unwrap();
        assert!(
            (p.q1 - 1.0).abs() < 1e-9 && p.q2 == 0.0 && p.q3 == 0.0,
            "{p:?}"
        );
        assert!((p.norm - 1.0).abs() < 1e-8);

        let bc = DensityMatrix::maximally_mixed(DimList::new(vec![2, 2]).unwrap());
        let coh = compose_product(&plus_state(), &bc).unwrap();
        let p = profile(&coh, &cfg).unwrap();
        assert!(
            p.q1 == 0.0 && p.q2 == 0.0 && (p.q3 - 1.0).abs() < 1e-12,
            "{p:?}"
        );

        let g = profile(&ghz(), &cfg).unwrap();
        assert_eq!(g.coords(), [0.0, 0.0, 0.0]);
        assert_eq!(g.norm, 0.0);
    }

    #[test]
    fn profile_with_trivial_b() {
        let ac = bell_pair();
        let rho =
            DensityMatrix::new(ac.matrix().clone(), DimList::new(vec![2, 1, 2]).unwrap()).unwrap();
        let p = profile(&rho, &ProfileConfig::default()).unwrap();
        assert_eq!(p.q1, 0.0);
        assert!(p.breakdown.f_max.is_none());
        assert!((p.q2 - 1.0).abs() < 1e-9);
        assert_eq!(p.q3, 0.0);
    }

    #[test]
    fn profile_rejects_bad_dims() {
        let cfg = ProfileConfig::default();
        assert!(profile(&bell_pair(), &cfg).is_err());
        let m = DensityMatrix::maximally_mixed(DimList::new(vec![2, 3, 2]).unwrap());
        assert!(profile(&m, &cfg).is_err());
        let q = DensityMatrix::maximally_mixed(DimList::new(vec![3, 3, 3]).unwrap());
        assert!(profile(&q, &cfg).is_err());
    }

    #[test]
    fn resource_norm_arithmetic() {
        let mut p = profile(&ghz(), &ProfileConfig::default()).unwrap();
        assert_eq!(resource_norm(&p), 0.0);
        p.q1 = 1.0;
        assert_eq!(resource_norm(&p), 1.0);
        p.q1 = 0.6;
        p.q2 = 0.8;
        assert!((resource_norm(&p) - 1.0).abs() < 1e-15);
    }
}
