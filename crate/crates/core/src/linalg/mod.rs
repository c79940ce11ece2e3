//! Dense complex linear algebra over a generic real scalar.
//!
//! Matrices are stored row-major. For tensor products, subsystem 0 is the
//! leftmost factor, so a basis index `(i_0, …, i_{n-1})` maps to the flat
//! index `Σ i_k · Π_{m>k} d_m`.

mod eigen;
mod matrix;
mod ops;

pub use eigen::{hermitian_eigen, HermitianEigen};
pub use matrix::ComplexMatrix;
pub use ops::{kron, partial_trace, permute_subsystems, psd_power, uhlmann_fidelity, DimList};

use num_complex::Complex;
use num_traits::{Float, FromPrimitive};
use std::fmt::{Debug, Display};

/// Real scalar the linear algebra is generic over (`f32`, `f64`).
pub trait Real: Float + FromPrimitive + Default + Debug + Display + Send + Sync + 'static {
    /// Converts an `f64` literal into this scalar.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex scalar over `T`.
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

/// Inner product `⟨a|b⟩` (conjugate-linear in `a`).
pub fn inner<T: Real>(a: &[C<T>], b: &[C<T>]) -> C<T> {
    a.iter()
        .zip(b)
        .fold(C::new(T::zero(), T::zero()), |acc, (x, y)| {
            acc + x.conj() * y
        })
}

/// Euclidean norm of a complex vector.
pub fn vec_norm<T: Real>(v: &[C<T>]) -> T {
    v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
}
