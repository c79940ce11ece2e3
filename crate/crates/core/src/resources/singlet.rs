use crate::error::{Error, Result};
use crate::optim::{gell_mann, unitary_from_params, NelderMead};
use crate::rng::Seed;
use crate::states::{haar_unitary, max_entangled_vector, DensityMatrix};
use crate::{tol, CMatrix, Complex64};

/// Average fidelity of the best classical (measure-and-prepare) strategy
/// for a qubit.
pub const F_CLASSICAL_QUBIT: f64 = 2.0 / 3.0;
/// Perfect teleportation fidelity.
pub const F_QUANTUM: f64 = 1.0;
/// Optimal universal symmetric `1 → 2` qubit cloner fidelity.
pub const UNIVERSAL_CLONER_QUBIT: f64 = 5.0 / 6.0;

/// Optimal universal symmetric `1 → 2` cloner fidelity in dimension `d`,
/// `(d + 3) / (2(d + 1))`.
pub fn universal_cloner_benchmark(d: usize) -> f64 {
    let d = d as f64;
    (d + 3.0) / (2.0 * (d + 1.0))
}

/// `(d·f + 1)/(d + 1)`.
pub fn teleportation_fidelity(f_max: f64, d: usize) -> f64 {
    let d = d as f64;
    (d * f_max + 1.0) / (d + 1.0)
}

/// Normalized teleportation advantage `(d+1)·F − d`; `3F − 2` for qubits.
pub fn advantage(f_tele: f64, d: usize) -> f64 {
    (d as f64 + 1.0) * f_tele - d as f64
}

/// Settings for the one-sided unitary search behind the fully entangled
/// fraction.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct OptimizerSettings {
    /// Haar-random starting points, in addition to the identity.
    pub restarts: usize,
    /// Objective convergence of each local search.
    pub tol: f64,
    /// Evaluation budget per local search.
    pub max_evals: usize,
    /// Seeds the random starting points.
    pub seed: Seed,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            restarts: 32,
            tol: tol::OPT,
            max_evals: 4000,
            seed: Seed::new(0x51c0_ffee, 0),
        }
    }
}

/// Fully entangled fraction with the unitary that attains it.
#[derive(Clone, Debug)]
pub struct SingletFraction {
    pub value: f64,
    pub maximizer: CMatrix,
    /// `⟨Φ⁺|ρ|Φ⁺⟩` before optimization.
    pub overlap: f64,
}

/// `⟨Φ⁺|(U⊗I) ρ (U⊗I)†|Φ⁺⟩`, evaluated as `v†ρv` with
/// `v = (U†⊗I)|Φ⁺⟩`, i.e. `v[k·d + i] = conj(U[i,k])/√d`.
pub fn singlet_overlap(rho: &CMatrix, u: &CMatrix) -> f64 {
    let d = u.rows();
    let amp = 1.0 / (d as f64).sqrt();
    let mut v = vec![Complex64::new(0.0, 0.0); d * d];
    for k in 0..d {
        for i in 0..d {
            v[k * d + i] = u[(i, k)].conj() * amp;
        }
    }
    rho.expectation(&v).re
}

/// `max_U ⟨Φ⁺|(U⊗I) ρ (U⊗I)†|Φ⁺⟩` over `U ∈ U(d)` by multi-start
/// Nelder–Mead in a local exponential chart around each start.
pub fn fully_entangled_fraction(
    rho: &DensityMatrix,
    opts: &OptimizerSettings,
) -> Result<SingletFraction> {
    let dims = rho.dims().as_slice();
    if dims.len() != 2 || dims[0] != dims[1] {
        return Err(Error::DimensionMismatch(format!(
            "fully entangled fraction needs equal local dims, got {dims:?}"
        )));
    }
    let d = dims[0];
    let m = rho.matrix();
    let basis = gell_mann(d);
    let nm = NelderMead {
        tol: opts.tol,
        max_evals: opts.max_evals,
        ..NelderMead::default()
    };

    let overlap = m.expectation(&max_entangled_vector(d)).re;
    let mut best_u = CMatrix::identity(d);
    let mut best = overlap;

    let starts = std::iter::once(CMatrix::identity(d)).chain(
        (0..opts.restarts).map(|k| haar_unitary(d, opts.seed.child(k as u64)).expect("d ≥ 1")),
    );
    for u0 in starts {
        let min = nm.minimize(
            |x| -singlet_overlap(m, &u0.matmul(&unitary_from_params(&basis, x))),
            &vec![0.0; basis.len()],
        );
        if -min.value > best {
            best = -min.value;
            best_u = u0.matmul(&unitary_from_params(&basis, &min.x));
        }
    }
    Ok(SingletFraction {
        value: best,
        maximizer: best_u,
        overlap,
    })
}
