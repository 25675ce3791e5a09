//! Eigenpairs of an arbitrary (small) complex symmetric matrix.
//!
//! Eigenvalues are the roots of `p(z) = det(zI − M)`. The polynomial is never
//! expanded: its logarithmic derivative `p'/p = tr((zI − M)⁻¹)` comes from an
//! LU factorization of `zI − M`, which drives an Aberth–Ehrlich simultaneous
//! iteration and a final Newton polish. Eigenvectors follow by inverse
//! iteration with the polished shift.

use num_complex::Complex;
use num_traits::Zero;

use super::normalize::{c_normalize_vector, fix_sign, unit};
use crate::observables::collinearity;
use super::{pair_flagged, residual, standalone_order, EigenState, SpectraError, SpectralDecomposition};
use crate::dense::CMatrix;
use crate::model::HamiltonianMatrix;
use crate::scalar::{c_dot, from_usize, h_norm_sqr, lit, Cplx, Real, Tolerances};

/// Rotation of the initial-guess circle, in radians.
const GUESS_ROTATION: f64 = 0.707_106_781_186_547_5;
const POLISH_STEPS: usize = 3;
const STALL_SWEEPS: usize = 5;
const COALESCENCE_GAP: f64 = 1e-7;
const COALESCENCE_COLLINEARITY: f64 = 0.99;

/// Newton correction `p(z)/p'(z)`; `None` when `z` is an exact root.
fn newton_ratio<T: Real>(m: &CMatrix<T>, z: Cplx<T>, scale: T) -> Option<Cplx<T>> {
    let lu = m.shifted(z).lu();
    // tr((M − z)⁻¹) = −tr((z − M)⁻¹)
    let tr = -lu.trace_of_inverse()?;
    if tr.is_zero() {
        return Some(Complex::new(scale * lit(1e-8), T::zero()));
    }
    Some(tr.inv())
}

/// All `n` eigenvalues, in standalone order.
pub fn eigenvalues_general<T: Real>(
    m: &HamiltonianMatrix<T>,
) -> Result<Vec<Cplx<T>>, SpectraError> {
    if m.n() < 2 {
        return Err(SpectraError::TooSmall(m.n()));
    }
    let mut roots = roots_of(m.dense(), &Tolerances::default())?;
    roots.sort_by(standalone_order);
    Ok(roots)
}

pub(crate) fn roots_of<T: Real>(
    m: &CMatrix<T>,
    tol: &Tolerances<T>,
) -> Result<Vec<Cplx<T>>, SpectraError> {
    let n = m.n();
    let scale = T::one() + m.max_abs();
    let center = m.trace().unscale(from_usize(n));
    let radius = scale;
    let tau = T::TAU();
    let mut z: Vec<Cplx<T>> = (0..n)
        .map(|k| {
            let angle = tau * from_usize(k) / from_usize(n) + lit(GUESS_ROTATION);
            center + Complex::from_polar(radius, angle)
        })
        .collect();

    let mut done = vec![false; n];
    let mut last = vec![T::infinity(); n];
    let mut stalled = vec![0usize; n];
    let mut iterations = 0;
    while done.iter().any(|d| !d) {
        if iterations == tol.max_iterations {
            let pending = (0..n).filter(|&k| !done[k]).fold(T::zero(), |w, k| w.max(last[k]));
            return Err(SpectraError::NoConvergence {
                iterations,
                max_correction: pending.to_f64().unwrap_or(f64::NAN),
            });
        }
        iterations += 1;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let Some(ratio) = newton_ratio(m, z[k], scale) else {
                done[k] = true;
                continue;
            };
            let mut repulsion = Complex::zero();
            for j in 0..n {
                let d = z[k] - z[j];
                if j != k && !d.is_zero() {
                    repulsion = repulsion + d.inv();
                }
            }
            let denom = Complex::new(T::one(), T::zero()) - ratio * repulsion;
            let step = if denom.is_zero() { ratio } else { ratio / denom };
            z[k] = z[k] - step;
            let size = step.norm();
            if size <= tol.root * scale {
                done[k] = true;
            } else if size <= tol.stall * scale && size > lit::<T>(0.9) * last[k] {
                stalled[k] += 1;
                if stalled[k] >= STALL_SWEEPS {
                    done[k] = true;
                }
            } else {
                stalled[k] = 0;
            }
            last[k] = size;
        }
    }

    // Newton polish of isolated roots.
    for k in 0..n {
        let isolated = (0..n)
            .filter(|&j| j != k)
            .all(|j| (z[j] - z[k]).norm() > lit::<T>(1e-6) * scale);
        if !isolated {
            continue;
        }
        let mut previous = T::infinity();
        for _ in 0..POLISH_STEPS {
            let Some(ratio) = newton_ratio(m, z[k], scale) else { break };
            let size = ratio.norm();
            if size >= previous {
                break;
            }
            z[k] = z[k] - ratio;
            previous = size;
            if size <= T::epsilon() * scale {
                break;
            }
        }
    }
    Ok(z)
}

/// Deterministic, mutually independent start vectors (rows of a Hilbert matrix).
fn start_vector<T: Real>(n: usize, k: usize) -> Vec<Cplx<T>> {
    (0..n)
        .map(|m| Complex::new(T::one() / from_usize(1 + m + k), T::zero()))
        .collect()
}

fn h_normalize<T: Real>(v: &mut [Cplx<T>]) {
    let h = h_norm_sqr(v).sqrt();
    if h > T::zero() && h.is_finite() {
        for z in v {
            *z = z.unscale(h);
        }
    }
}

/// Eigenpairs of any `n ≥ 2` matrix, in standalone order.
pub fn eigen_general<T: Real>(
    m: &HamiltonianMatrix<T>,
) -> Result<SpectralDecomposition<T>, SpectraError> {
    if m.n() < 2 {
        return Err(SpectraError::TooSmall(m.n()));
    }
    if m.is_diagonal() {
        return Ok(diagonal_decomposition(m));
    }
    let tol = Tolerances::<T>::default();
    let roots = eigenvalues_general(m)?;
    let n = m.n();
    let scale = m.scale();
    let mut states: Vec<EigenState<T>> = Vec::with_capacity(n);
    for (k, &lambda) in roots.iter().enumerate() {
        let mut lu = m.dense().shifted(lambda).lu();
        lu.regularize(T::epsilon() * scale);
        let mut x = start_vector::<T>(n, k);
        for _ in 0..2 {
            x = lu.solve(&x).expect("regularized factor has no zero pivot");
            h_normalize(&mut x);
        }
        for partner in &states {
            let coincident = (partner.eigenvalue - lambda).norm() <= lit::<T>(1e-10) * scale;
            if coincident && partner.c_norm_ok {
                let overlap = c_dot(&partner.vector, &x);
                for (xi, ui) in x.iter_mut().zip(&partner.vector) {
                    *xi = *xi - overlap * ui;
                }
                h_normalize(&mut x);
            }
        }
        let nv = c_normalize_vector(&x, None, tol.ep);
        states.push(EigenState {
            eigenvalue: lambda,
            residual: residual(m, lambda, &nv.vector),
            vector: nv.vector,
            c_norm_ok: nv.c_norm_ok,
        });
    }
    flag_collinear_pairs(&mut states, scale);
    let coalescent_pairs = pair_flagged(&states);
    Ok(SpectralDecomposition { states, coalescent_pairs })
}

/// Near an EP the computed vectors carry an error of order `ε·scale/gap`,
/// which hides the vanishing c-norm. Nearly coincident pairs with parallel
/// vectors are therefore flagged directly.
fn flag_collinear_pairs<T: Real>(states: &mut [EigenState<T>], scale: T) {
    let n = states.len();
    let mut defective = vec![false; n];
    for i in 0..n {
        for j in i + 1..n {
            let close = (states[i].eigenvalue - states[j].eigenvalue).norm() <= lit::<T>(COALESCENCE_GAP) * scale;
            if close && collinearity(&states[i].vector, &states[j].vector) > lit(COALESCENCE_COLLINEARITY) {
                defective[i] = true;
                defective[j] = true;
            }
        }
    }
    for (state, bad) in states.iter_mut().zip(defective) {
        if bad && state.c_norm_ok {
            h_normalize(&mut state.vector);
            fix_sign(&mut state.vector, None);
            state.c_norm_ok = false;
        }
    }
}

fn diagonal_decomposition<T: Real>(m: &HamiltonianMatrix<T>) -> SpectralDecomposition<T> {
    let n = m.n();
    let mut states: Vec<EigenState<T>> = (0..n)
        .map(|k| EigenState {
            eigenvalue: m.get(k, k),
            vector: unit(n, k),
            c_norm_ok: true,
            residual: T::zero(),
        })
        .collect();
    states.sort_by(|a, b| standalone_order(&a.eigenvalue, &b.eigenvalue));
    SpectralDecomposition { states, coalescent_pairs: Vec::new() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::eigen_2x2_analytic;

    fn c(re: f64, im: f64) -> Cplx<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn diagonal_four_by_four() {
        let d = [c(0.3, -0.1), c(-0.2, 0.0), c(0.9, -0.4), c(0.1, 0.2)];
        let mut e = vec![c(0.0, 0.0); 16];
        for i in 0..4 {
            e[i * 4 + i] = d[i];
        }
        let m = HamiltonianMatrix::from_entries(4, e).unwrap();
        let dec = eigen_general(&m).unwrap();
        let mut expected = d.to_vec();
        expected.sort_by(standalone_order);
        for (s, want) in dec.states.iter().zip(&expected) {
            assert!((s.eigenvalue - want).norm() < 1e-14);
            let big: Vec<f64> = s.vector.iter().map(|z| z.norm()).collect();
            assert_eq!(big.iter().filter(|&&x| (x - 1.0).abs() < 1e-12).count(), 1);
            assert_eq!(big.iter().filter(|&&x| x < 1e-12).count(), 3);
        }
    }

    #[test]
    fn decoupled_third_level_block() {
        let third = 2.0 / 3.0;
        let eps3 = c(0.9, -0.3);
        let mut e = vec![c(0.0, 0.0); 9];
        e[0] = c(third, -0.5);
        e[1] = c(0.0, 0.05);
        e[3] = c(0.0, 0.05);
        e[4] = c(third + 0.03, -0.5);
        e[8] = eps3;
        let m = HamiltonianMatrix::from_entries(3, e).unwrap();
        let block = HamiltonianMatrix::two_by_two(c(third, -0.5), c(third + 0.03, -0.5), c(0.0, 0.05)).unwrap();
        let want = eigen_2x2_analytic(&block).unwrap();
        let got = eigen_general(&m).unwrap();
        // ε3 has the largest energy, so it sorts last
        for k in 0..2 {
            assert!((got.states[k].eigenvalue - want.states[k].eigenvalue).norm() < 1e-10);
        }
        assert!((got.states[2].eigenvalue - eps3).norm() < 1e-14);
    }

    #[test]
    fn exact_ep_embedded_in_three_levels_converges() {
        // 2×2 block exactly at its EP plus a far level
        let mut e = vec![c(0.0, 0.0); 9];
        e[0] = c(0.5, 0.05);
        e[1] = c(0.05, 0.0);
        e[3] = c(0.05, 0.0);
        e[4] = c(0.5, -0.05);
        e[8] = c(1.5, -0.2);
        let m = HamiltonianMatrix::from_entries(3, e).unwrap();
        let dec = eigen_general(&m).unwrap();
        assert!((dec.states[0].eigenvalue - c(0.5, 0.0)).norm() < 1e-6);
        assert!((dec.states[1].eigenvalue - c(0.5, 0.0)).norm() < 1e-6);
        assert_eq!(dec.coalescent_pairs, vec![(0, 1)]);
    }

    #[test]
    fn rejects_one_by_one() {
        let m = HamiltonianMatrix::from_entries(1, vec![c(1.0, 0.0)]).unwrap();
        assert_eq!(eigen_general(&m), Err(SpectraError::TooSmall(1)));
    }

    #[test]
    fn zero_iteration_budget_reports_non_convergence() {
        let m = HamiltonianMatrix::two_by_two(c(0.1, 0.0), c(0.4, -0.2), c(0.3, 0.1)).unwrap();
        let tol = Tolerances { max_iterations: 0, ..Tolerances::default() };
        assert!(matches!(roots_of(m.dense(), &tol), Err(SpectraError::NoConvergence { .. })));
    }

    #[test]
    fn single_precision_general_solver() {
        let m = HamiltonianMatrix::<f32>::two_by_two(
            Complex::new(0.1, 0.0),
            Complex::new(0.4, -0.2),
            Complex::new(0.3, 0.1),
        )
        .unwrap();
        let g = eigen_general(&m).unwrap();
        let a = eigen_2x2_analytic(&m).unwrap();
        for k in 0..2 {
            assert!((g.states[k].eigenvalue - a.states[k].eigenvalue).norm() < 1e-5);
        }
    }
}
