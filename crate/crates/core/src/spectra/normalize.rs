use num_complex::Complex;
use num_traits::Zero;

use super::SpectralDecomposition;
use crate::scalar::{c_dot, h_dot, h_norm_sqr, Cplx, Real, Tolerances};

#[derive(Clone, Debug, PartialEq)]
pub struct Normalized<T> {
    pub vector: Vec<Cplx<T>>,
    pub c_norm_ok: bool,
}

/// Scales `v` so that `Σ v_m² = 1`.
///
/// The remaining ±1 freedom is fixed by `reference` when given (positive real
/// part of the Hermitian overlap), otherwise by making the largest-magnitude
/// component have positive real part. If `|Σ u_m²| ≤ tol` for the
/// Hermitian-normalized `u`, the state is defective: `u` is returned with
/// `c_norm_ok = false`.
pub fn c_normalize_vector<T: Real>(
    v: &[Cplx<T>],
    reference: Option<&[Cplx<T>]>,
    tol: T,
) -> Normalized<T> {
    let h = h_norm_sqr(v).sqrt();
    if h.is_zero() || !h.is_finite() {
        return Normalized { vector: v.to_vec(), c_norm_ok: false };
    }
    let mut u: Vec<Cplx<T>> = v.iter().map(|z| z.unscale(h)).collect();
    let c = c_dot(&u, &u);
    let ok = c.norm() > tol;
    if ok {
        let root = c.sqrt();
        for z in &mut u {
            *z = *z / root;
        }
    }
    fix_sign(&mut u, reference);
    Normalized { vector: u, c_norm_ok: ok }
}

/// Batch form: vector `k` is matched against state `k` of `previous`.
pub fn c_normalize<T: Real>(
    vectors: &[Vec<Cplx<T>>],
    previous: Option<&SpectralDecomposition<T>>,
) -> Vec<Normalized<T>> {
    let tol = Tolerances::<T>::default().ep;
    vectors
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let reference = previous.and_then(|p| p.states.get(k)).map(|s| s.vector.as_slice());
            c_normalize_vector(v, reference, tol)
        })
        .collect()
}

pub(crate) fn fix_sign<T: Real>(u: &mut [Cplx<T>], reference: Option<&[Cplx<T>]>) {
    if let Some(r) = reference {
        let s = h_dot(r, u).re;
        if s < T::zero() {
            negate(u);
            return;
        }
        if s > T::zero() {
            return;
        }
    }
    let mut best = 0;
    let mut best_abs = T::neg_infinity();
    for (m, z) in u.iter().enumerate() {
        let a = z.norm();
        if a > best_abs {
            best_abs = a;
            best = m;
        }
    }
    if let Some(z) = u.get(best) {
        if z.re < T::zero() || (z.re.is_zero() && z.im < T::zero()) {
            negate(u);
        }
    }
}

fn negate<T: Real>(u: &mut [Cplx<T>]) {
    for z in u {
        *z = -*z;
    }
}

pub(crate) fn unit<T: Real>(n: usize, k: usize) -> Vec<Cplx<T>> {
    let mut v = vec![Complex::zero(); n];
    v[k] = Complex::new(T::one(), T::zero());
    v
}
