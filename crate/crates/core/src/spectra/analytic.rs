use num_complex::Complex;
use num_traits::Zero;

use super::normalize::{c_normalize_vector, unit};
use super::{pair_flagged, residual, standalone_order, EigenState, SpectraError, SpectralDecomposition};
use crate::model::HamiltonianMatrix;
use crate::scalar::{lit, Cplx, Real, Tolerances};

/// `Z = ½·√((ε1 − ε2)² + 4ω²)` on the principal branch; the eigenvalues are
/// `(ε1 + ε2)/2 ± Z`.
pub fn discriminant_z<T: Real>(m: &HamiltonianMatrix<T>) -> Result<Cplx<T>, SpectraError> {
    if m.n() != 2 {
        return Err(SpectraError::NotTwoByTwo(m.n()));
    }
    let d = m.get(0, 0) - m.get(1, 1);
    let w = m.get(0, 1);
    Ok((d * d + w * w * lit::<T>(4.0)).sqrt() * lit::<T>(0.5))
}

/// Closed-form eigenpairs of a 2×2 complex symmetric matrix.
///
/// Eigenvectors come from the complex rotation angle `t` with
/// `cos 2t = (ε1 − ε2)/(2Z)` and `sin 2t = ω/Z`: `(cos t, sin t)` belongs to
/// `ℰ₊` and `(−sin t, cos t)` to `ℰ₋`. Near `Z = 0` the null vector of
/// `M − ℰ` is used instead and defectiveness is decided by the c-norm test.
pub fn eigen_2x2_analytic<T: Real>(
    m: &HamiltonianMatrix<T>,
) -> Result<SpectralDecomposition<T>, SpectraError> {
    let z = discriminant_z(m)?;
    let tol = Tolerances::<T>::default();
    let half = lit::<T>(0.5);
    let (e1, e2, w) = (m.get(0, 0), m.get(1, 1), m.get(0, 1));
    let mean = (e1 + e2) * half;
    let delta = (e1 - e2) * half;
    let plus = mean + z;
    let minus = mean - z;

    let size = delta.norm() + w.norm();
    let (plus, minus) = if w.is_zero() { (e1, e2) } else { (plus, minus) };
    let (v_plus, v_minus) = if w.is_zero() {
        // uncoupled: the unperturbed states themselves
        (unit(2, 0), unit(2, 1))
    } else if z.norm() <= tol.ep * size {
        (null_vector(delta, w, z), null_vector(delta, w, -z))
    } else {
        let cos2t = delta / z;
        let sin2t = w / z;
        let one = Complex::new(T::one(), T::zero());
        let (c, s) = if (one + cos2t).norm() >= (one - cos2t).norm() {
            let c = ((one + cos2t) * half).sqrt();
            (c, sin2t * half / c)
        } else {
            let s = ((one - cos2t) * half).sqrt();
            (sin2t * half / s, s)
        };
        (vec![c, s], vec![-s, c])
    };

    let mut states: Vec<EigenState<T>> = [(plus, v_plus), (minus, v_minus)]
        .into_iter()
        .map(|(lambda, v)| {
            let n = c_normalize_vector(&v, None, tol.ep);
            EigenState {
                eigenvalue: lambda,
                residual: residual(m, lambda, &n.vector),
                vector: n.vector,
                c_norm_ok: n.c_norm_ok,
            }
        })
        .collect();
    states.sort_by(|a, b| standalone_order(&a.eigenvalue, &b.eigenvalue));
    let coalescent_pairs = pair_flagged(&states);
    Ok(SpectralDecomposition { states, coalescent_pairs })
}

/// Null vector of `[[δ − z, ω], [ω, −δ − z]]` from its larger row.
fn null_vector<T: Real>(delta: Cplx<T>, w: Cplx<T>, z: Cplx<T>) -> Vec<Cplx<T>> {
    let r1 = (delta - z, w);
    let r2 = (w, -delta - z);
    let n1 = r1.0.norm_sqr() + r1.1.norm_sqr();
    let n2 = r2.0.norm_sqr() + r2.1.norm_sqr();
    let (p, q) = if n1 >= n2 { r1 } else { r2 };
    if p.is_zero() && q.is_zero() {
        return unit(2, 0);
    }
    vec![q, -p]
}
