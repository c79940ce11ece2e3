//! Shared numerical tolerances. Every threshold used by the library and its
//! tests is defined here.

/// Eigenvalues in `(-PSD, 0)` are clipped to zero; anything below is rejected.
pub const PSD: f64 = 1e-10;
/// Maximum entrywise deviation from Hermiticity accepted on input.
pub const HERM: f64 = 1e-10;
/// Relative Frobenius reconstruction error allowed for eigendecompositions.
pub const EIG: f64 = 1e-10;
/// Objective convergence of the unitary optimizer.
pub const OPT: f64 = 1e-9;
/// Unit-trace tolerance for density matrices.
pub const TRACE: f64 = 1e-10;
/// Kraus completeness residual (Frobenius).
pub const CPTP: f64 = 1e-10;
/// Unitarity residual (Frobenius).
pub const UNITARY: f64 = 1e-10;
/// Pairs with `λ_i + λ_j` at or below this are dropped from the QFI sum.
pub const QFI_PAIR: f64 = 1e-12;
/// Slack for monotonicity flags along trajectories.
pub const TRAJECTORY: f64 = 1e-6;
/// Extremal anchors must match their unit vector within this.
pub const EXTREMAL: f64 = 1e-6;
/// Ball-constraint slack: `q1² + q2² + q3² ≤ 1 + BALL`.
pub const BALL: f64 = 1e-6;
/// q3 may not increase by more than this under a channel on A.
pub const MONO_Q3: f64 = 1e-8;
/// q1 may not increase by more than this under a channel on A.
pub const MONO_Q1: f64 = 1e-6;
/// Per-coordinate drift allowed under symmetry-preserving local unitaries.
pub const CONSERVATION: f64 = 1e-6;
/// Slack on the mutual-information bound.
pub const ENTROPIC: f64 = 1e-8;
