//! Unitary evolution, symmetry-group sampling and discrete resource
//! trajectories.

use crate::channels::{self, KrausChannel};
use crate::error::{Error, Result};
use crate::linalg::{kron, DimList};
use crate::resources::{profile, CoherenceGenerator, ProfileConfig, ResourceProfile};
use crate::rng::Seed;
use crate::states::{haar_isometry, DensityMatrix};
use crate::{tol, CMatrix};
use serde::Serialize;

/// Unitary on the full system, validated on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryOperator {
    matrix: CMatrix,
    dims: DimList,
}

impl UnitaryOperator {
    pub fn new(matrix: CMatrix, dims: DimList) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != dims.total() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} unitary for dims {:?}",
                matrix.rows(),
                matrix.cols(),
                dims.as_slice()
            )));
        }
        let err = matrix.unitarity_error();
        if !(err <= tol::UNITARY) {
            return Err(Error::NotUnitary(err));
        }
        Ok(Self { matrix, dims })
    }

    pub fn identity(dims: DimList) -> Self {
        Self {
            matrix: CMatrix::identity(dims.total()),
            dims,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &DimList {
        &self.dims
    }

    /// `‖[U, O ⊗ I]‖_F` for a generator `O` on subsystem 0.
    pub fn commutator_residual(&self, g: &CoherenceGenerator) -> Result<f64> {
        let lifted = channels::embed(g.matrix(), &self.dims, 0)?;
        Ok(self.matrix.commutator(&lifted).frobenius_norm())
    }
}

/// `U ρ U†`.
pub fn evolve(rho: &DensityMatrix, u: &UnitaryOperator) -> Result<DensityMatrix> {
    if rho.dims() != u.dims() {
        return Err(Error::DimensionMismatch(format!(
            "unitary dims {:?} on state dims {:?}",
            u.dims().as_slice(),
            rho.dims().as_slice()
        )));
    }
    Ok(rho.conjugated(u.matrix()))
}

/// `u_A ⊗ u_B ⊗ u_C`.
pub fn local_product_unitary(ua: &CMatrix, ub: &CMatrix, uc: &CMatrix) -> Result<UnitaryOperator> {
    for u in [ua, ub, uc] {
        let err = u.unitarity_error();
        if !u.is_square() || !(err <= tol::UNITARY) {
            return Err(Error::NotUnitary(err));
        }
    }
    let dims = DimList::new(vec![ua.rows(), ub.rows(), uc.rows()])?;
    UnitaryOperator::new(kron(&kron(ua, ub)?, uc)?, dims)
}

/// `exp(−iθH)` for a generator `H`; commutes with `H`.
pub fn phase_rotation(g: &CoherenceGenerator, theta: f64) -> CMatrix {
    g.eigen()
        .map(|l| crate::Complex64::from_polar(1.0, -theta * l))
}

/// Haar-random element of the commutant of `O ⊗ I_BC`: block diagonal over
/// the eigenspaces of `O` (on subsystem 0), with an independent Haar
/// unitary on each `eigenspace ⊗ H_BC` block.
pub fn sample_commutant_unitary(
    g: &CoherenceGenerator,
    dims: &DimList,
    seed: Seed,
) -> Result<UnitaryOperator> {
    if dims.len() < 2 || dims[0] != g.dim() {
        return Err(Error::DimensionMismatch(format!(
            "commutant sampling for generator of dimension {} on dims {:?}",
            g.dim(),
            dims.as_slice()
        )));
    }
    let rest: usize = dims.as_slice()[1..].iter().product();
    let n = dims.total();
    let eig = g.eigen();
    let mut u = CMatrix::zeros(n, n);
    for (b, space) in g.eigenspaces().into_iter().enumerate() {
        let m = space.len();
        // isometry W ⊗ I from the block space (m·rest) into the full space
        let w = CMatrix::from_fn(g.dim(), m, |i, k| eig.eigenvectors[(i, space[k])]);
        let lift = kron(&w, &CMatrix::identity(rest))?;
        let block = haar_isometry(m * rest, m * rest, &mut seed.child(b as u64).rng());
        u = &u + &lift.matmul(&block).matmul(&lift.adjoint());
    }
    UnitaryOperator::new(u, dims.clone())
}

/// One step of a schedule.
#[derive(Clone, Debug)]
pub enum Step {
    Unitary {
        label: String,
        op: UnitaryOperator,
    },
    Channel {
        label: String,
        channel: KrausChannel,
        target: usize,
    },
}

impl Step {
    pub fn label(&self) -> &str {
        match self {
            Step::Unitary { label, .. } | Step::Channel { label, .. } => label,
        }
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        match self {
            Step::Unitary { op, .. } => evolve(rho, op),
            Step::Channel {
                channel, target, ..
            } => channels::apply(channel, rho, *target),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub label: String,
    pub profile: ResourceProfile,
}

/// Non-increase flags (within [`tol::TRAJECTORY`]) along a trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MonotoneFlags {
    pub q1: bool,
    pub q2: bool,
    pub q3: bool,
    pub norm: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub steps: Vec<TrajectoryPoint>,
    pub monotone: MonotoneFlags,
}

impl Trajectory {
    pub fn norms(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.profile.norm).collect()
    }

    /// Largest `|𝓘(t) − 𝓘(0)|`.
    pub fn max_norm_drift(&self) -> f64 {
        let n = self.norms();
        n.iter().map(|x| (x - n[0]).abs()).fold(0.0, f64::max)
    }
}

fn non_increasing(xs: impl Iterator<Item = f64>) -> bool {
    let v: Vec<f64> = xs.collect();
    v.windows(2).all(|w| w[1] <= w[0] + tol::TRAJECTORY)
}

/// Profiles `ρ0` and the state after each step of `schedule`.
pub fn trajectory(
    rho0: &DensityMatrix,
    schedule: &[Step],
    cfg: &ProfileConfig,
) -> Result<Trajectory> {
    let mut steps = vec![TrajectoryPoint {
        label: "initial".into(),
        profile: profile(rho0, cfg)?,
    }];
    let mut rho = rho0.clone();
    for step in schedule {
        rho = step.apply(&rho)?;
        steps.push(TrajectoryPoint {
            label: step.label().to_string(),
            profile: profile(&rho, cfg)?,
        });
    }
    let monotone = MonotoneFlags {
        q1: non_increasing(steps.iter().map(|s| s.profile.q1)),
        q2: non_increasing(steps.iter().map(|s| s.profile.q2)),
        q3: non_increasing(steps.iter().map(|s| s.profile.q3)),
        norm: non_increasing(steps.iter().map(|s| s.profile.norm)),
    };
    Ok(Trajectory { steps, monotone })
}
