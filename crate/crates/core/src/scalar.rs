//! Scalar abstraction shared by every numerical module.
//!
//! All spectral math is written against [`Real`], which is implemented for
//! `f32` and `f64`. Thresholds are expressed as `f64` literals and lifted into
//! the working precision with [`lit`]; [`Tolerances`] clamps them from below
//! by a multiple of machine epsilon so that single precision stays usable.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point type usable as the real scalar of a Hamiltonian.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over the working real type.
pub type Cplx<T> = Complex<T>;

/// Converts an `f64` literal into the working precision.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in working precision")
}

#[inline]
pub(crate) fn from_usize<T: Real>(k: usize) -> T {
    T::from_usize(k).expect("index representable in working precision")
}

/// `Σ z_m²` without conjugation (the c-product of a vector with itself).
pub fn c_dot<T: Real>(u: &[Cplx<T>], v: &[Cplx<T>]) -> Cplx<T> {
    u.iter()
        .zip(v)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x * y)
}

/// Hermitian inner product `Σ conj(u_m) v_m`.
pub fn h_dot<T: Real>(u: &[Cplx<T>], v: &[Cplx<T>]) -> Cplx<T> {
    u.iter()
        .zip(v)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y)
}

/// Squared Hermitian norm `Σ |u_m|²`.
pub fn h_norm_sqr<T: Real>(u: &[Cplx<T>]) -> T {
    u.iter().fold(T::zero(), |acc, x| acc + x.norm_sqr())
}

/// Numerical thresholds used across the crate.
///
/// For `f64` every field equals the documented default; for `f32` fields that
/// would sit below rounding noise are raised to a multiple of epsilon.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances<T> {
    /// Relative convergence tolerance for the root iteration.
    pub root: T,
    /// Threshold on `|Σ Φ²|` of a unit vector below which a state is defective.
    pub ep: T,
    /// Stall level (relative) below which a non-shrinking correction counts as converged.
    pub stall: T,
    /// Maximum simultaneous-iteration sweeps.
    pub max_iterations: usize,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        let eps = T::epsilon();
        Self {
            root: lit::<T>(1e-13).max(eps * lit(4.0)),
            ep: lit::<T>(1e-8).max(eps * lit(100.0)),
            stall: lit::<T>(1e-4).max(eps.sqrt()),
            max_iterations: 500,
        }
    }
}
