use num_complex::Complex;
use num_traits::Zero;

use super::{EpError, EpKind, EpLocation, EpReport};
use crate::model::HamiltonianSpec;
use crate::observables::ObservableRecord;
use crate::scalar::{lit, Cplx, Real};
use crate::spectra::eigen_2x2_analytic;

/// Roots with `|Im a| ≤ REAL_ROOT_TOL` are exceptional points on the path.
pub const REAL_ROOT_TOL: f64 = 1e-9;
/// Roots with `|Im a|` up to this value are reported as near misses.
pub const NEAR_MISS_TOL: f64 = 1e-2;

/// Coefficients `[c0, c1, c2]` of `4Z²(a) = c0 + c1·a + c2·a²`.
///
/// With `u(a) = ε1(a) − ε2(a) = u0 + u1·a`, `4Z² = u² + 4ω²`.
pub fn coalescence_polynomial<T: Real>(
    spec: &HamiltonianSpec<T>,
) -> Result<[Cplx<T>; 3], EpError> {
    let (u0, u1) = difference_line(spec)?;
    let w = spec.coupling();
    let two = lit::<T>(2.0);
    let four = lit::<T>(4.0);
    Ok([u0 * u0 + w * w * four, u0 * u1 * two, u1 * u1])
}

fn difference_line<T: Real>(spec: &HamiltonianSpec<T>) -> Result<(Cplx<T>, Cplx<T>), EpError> {
    if spec.n() != 2 {
        return Err(EpError::NotTwoLevel(spec.n()));
    }
    let l = spec.levels();
    let u0 = Complex::new(
        l[0].energy.intercept - l[1].energy.intercept,
        l[0].half_width.intercept - l[1].half_width.intercept,
    );
    let u1 = Complex::new(
        l[0].energy.slope - l[1].energy.slope,
        l[0].half_width.slope - l[1].half_width.slope,
    );
    Ok((u0, u1))
}

fn negligible<T: Real>(x: T, scale: T) -> bool {
    x.abs() <= lit::<T>(64.0) * T::epsilon() * scale
}

/// Exact EP conditions of a two-level spec.
///
/// The roots of `4Z²(a)` are `a = (−u0 ± 2iω)/u1`. Real roots are
/// exceptional points; roots slightly off the real axis are near misses
/// reported at their real part. With `ω = 0` coincidences are diabolic and
/// nothing is reported.
pub fn analytic_ep_two_level<T: Real>(spec: &HamiltonianSpec<T>) -> Result<EpReport<T>, EpError> {
    let (u0, u1) = difference_line(spec)?;
    let w = spec.coupling();
    let mut report = EpReport { real_spectrum_windows: real_windows(spec)?, ..EpReport::default() };

    if w.is_zero() {
        report.sort();
        return Ok(report);
    }
    let scale = T::one() + u0.norm() + w.norm();
    if negligible(u1.norm(), scale) {
        let c0 = u0 * u0 + w * w * lit::<T>(4.0);
        report.whole_line_degenerate = negligible(c0.norm(), scale * scale);
        return Ok(report);
    }

    let two_i_w = w * Complex::new(T::zero(), lit(2.0));
    for root in [(-u0 + two_i_w) / u1, (-u0 - two_i_w) / u1] {
        let kind = if root.im.abs() <= lit(REAL_ROOT_TOL) {
            EpKind::ExactRoot
        } else if root.im.abs() <= lit(NEAR_MISS_TOL) {
            EpKind::NearMiss
        } else {
            continue;
        };
        let a_star = root.re;
        let dec = eigen_2x2_analytic(&spec.eval_at(a_star))?;
        let (min_gap, pair) = dec.min_gap();
        let r_at = ObservableRecord::compute(&dec).min_r();
        report.locations.push(EpLocation { a_star, kind, pair, min_gap, r_at, non_unimodal: false });
    }
    report.sort();
    Ok(report)
}

/// Intervals on which both eigenvalues are real.
///
/// Requires `Im(ε1 + ε2) ≡ 0` and `4Z²(a)` real along the whole path; the
/// window is then where that real quadratic is non-negative.
fn real_windows<T: Real>(spec: &HamiltonianSpec<T>) -> Result<Vec<(T, T)>, EpError> {
    let l = spec.levels();
    let [c0, c1, c2] = coalescence_polynomial(spec)?;
    let scale = T::one() + c0.norm() + c1.norm() + c2.norm();
    let sum0 = l[0].half_width.intercept + l[1].half_width.intercept;
    let sum1 = l[0].half_width.slope + l[1].half_width.slope;
    let balanced = negligible(sum0, T::one()) && negligible(sum1, T::one());
    let real_poly = [c0, c1, c2].iter().all(|c| negligible(c.im, scale));
    if !(balanced && real_poly) {
        return Ok(Vec::new());
    }
    let (q0, q1, q2) = (c0.re, c1.re, c2.re);
    let inf = T::infinity();
    let windows = if !negligible(q2, scale) {
        let disc = q1 * q1 - lit::<T>(4.0) * q2 * q0;
        if disc <= T::zero() {
            if q2 > T::zero() {
                vec![(-inf, inf)]
            } else {
                Vec::new()
            }
        } else {
            // numerically stable pair of roots
            let s = disc.sqrt();
            let q = -(q1 + q1.signum() * s) * lit(0.5);
            let (mut r1, mut r2) = if q.is_zero() {
                (-s / (lit::<T>(2.0) * q2), s / (lit::<T>(2.0) * q2))
            } else {
                (q / q2, q0 / q)
            };
            if r1 > r2 {
                std::mem::swap(&mut r1, &mut r2);
            }
            if q2 < T::zero() {
                vec![(r1, r2)]
            } else {
                vec![(-inf, r1), (r2, inf)]
            }
        }
    } else if !negligible(q1, scale) {
        let r = -q0 / q1;
        if q1 > T::zero() {
            vec![(r, inf)]
        } else {
            vec![(-inf, r)]
        }
    } else if q0 >= T::zero() {
        vec![(-inf, inf)]
    } else {
        Vec::new()
    };
    Ok(windows)
}
