//! Operational resource coordinates `(q1, q2, q3)` for finite-dimensional
//! tripartite states, and a seeded harness that checks the inequalities and
//! invariances claimed for them.
//!
//! - `q1`: teleportation advantage of `ρ_AB`, from the fully entangled fraction.
//! - `q2`: quantum transfer capacity of the `A → C` channel induced by `ρ_AC`.
//! - `q3`: phase sensitivity of `ρ_A` under a coherence generator, as a
//!   fraction of the maximum quantum Fisher information.
//!
//! The linear algebra in [`linalg`] is generic over the real scalar; the
//! quantum layers above it work in `f64`.

pub mod channels;
pub mod claims;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod families;
pub mod io;
pub mod linalg;
pub mod optim;
pub mod resources;
pub mod rng;
pub mod states;
pub mod tol;

pub use error::{Error, Result};
pub use rng::Seed;
pub use states::DensityMatrix;

/// Complex scalar used by the quantum layers.
pub type Complex64 = num_complex::Complex<f64>;
/// Double-precision complex matrix.
pub type CMatrix = linalg::ComplexMatrix<f64>;
/// Single-precision complex matrix.
pub type CMatrix32 = linalg::ComplexMatrix<f32>;
/// Double-precision eigendecomposition.
pub type Eigen = linalg::HermitianEigen<f64>;
