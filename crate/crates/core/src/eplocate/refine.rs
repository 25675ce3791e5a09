use num_complex::Complex;
use num_traits::Zero;

use super::{Classification, EpError, EpKind, EpLocation, Verdict, REAL_ROOT_TOL};
use crate::model::HamiltonianSpec;
use crate::observables::{collinearity, ObservableRecord};
use crate::scalar::{lit, Cplx, Real, Tolerances};
use crate::spectra::{decompose, discriminant_z, eigenvalues_general, SpectraError};

/// Gaps below `CLASSIFY_GAP_TOL · scale` count as degeneracies.
pub const CLASSIFY_GAP_TOL: f64 = 1e-6;

const UNIMODAL_SAMPLES: usize = 17;
const GOLDEN_WIDTH: f64 = 1e-12;
const SECANT_STEPS: usize = 60;

/// Smallest pairwise eigenvalue distance at `a`, with the pair in standalone order.
pub fn pair_gap<T: Real>(spec: &HamiltonianSpec<T>, a: T) -> Result<(T, (usize, usize)), EpError> {
    let m = spec.eval_at(a);
    if m.n() == 2 {
        let z = discriminant_z(&m)?;
        return Ok((z.norm() * lit(2.0), (0, 1)));
    }
    let ev = eigenvalues_general(&m)?;
    Ok(min_pair(&ev))
}

fn min_pair<T: Real>(ev: &[Cplx<T>]) -> (T, (usize, usize)) {
    let mut best = (T::infinity(), (0, 1));
    for i in 0..ev.len() {
        for j in i + 1..ev.len() {
            let g = (ev[i] - ev[j]).norm();
            if g < best.0 {
                best = (g, (i, j));
            }
        }
    }
    best
}

/// Squared gap of the closest pair on the complex continuation of the path.
fn squared_gap<T: Real>(spec: &HamiltonianSpec<T>, a: Cplx<T>) -> Result<Cplx<T>, EpError> {
    let m = spec.eval_complex(a);
    if m.n() == 2 {
        let d = m[(0, 0)] - m[(1, 1)];
        let w = m[(0, 1)];
        return Ok(d * d + w * w * lit::<T>(4.0));
    }
    let roots = crate::spectra::roots_of(&m, &Tolerances::default())?;
    let mut best: Option<Cplx<T>> = None;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let d = roots[i] - roots[j];
            if best.is_none_or(|b| d.norm() < b.norm()) {
                best = Some(d);
            }
        }
    }
    let d = best.ok_or(SpectraError::TooSmall(roots.len()))?;
    Ok(d * d)
}

/// Refines a gap minimum inside `bracket`.
///
/// Golden-section search on the real gap narrows the bracket, then a secant
/// iteration on the squared gap `D(a) = (ℰ_i − ℰ_j)²`, continued to complex
/// `a`, finds the nearby root of `D`. Near an EP the gap grows like
/// `√|a − a*|`, so the root of the analytic `D` is far better conditioned than
/// the gap minimum. A real root inside the bracket is an exact EP; otherwise
/// the gap minimum is reported as a near miss.
pub fn refine_ep<T: Real>(
    spec: &HamiltonianSpec<T>,
    bracket: (T, T),
) -> Result<EpLocation<T>, EpError> {
    let (lo, hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(EpError::BadBracket {
            lo: lo.to_f64().unwrap_or(f64::NAN),
            hi: hi.to_f64().unwrap_or(f64::NAN),
        });
    }
    let gap = |a: T| pair_gap(spec, a).map(|g| g.0);

    let step = (hi - lo) / lit(UNIMODAL_SAMPLES as f64 - 1.0);
    let xs: Vec<T> = (0..UNIMODAL_SAMPLES).map(|i| lo + step * lit(i as f64)).collect();
    let fs = xs.iter().map(|&x| gap(x)).collect::<Result<Vec<T>, _>>()?;
    let interior_minima = (1..UNIMODAL_SAMPLES - 1)
        .filter(|&i| fs[i] < fs[i - 1] && fs[i] <= fs[i + 1])
        .count();
    let k = (0..UNIMODAL_SAMPLES)
        .min_by(|&i, &j| fs[i].partial_cmp(&fs[j]).unwrap_or(std::cmp::Ordering::Equal))
        .unwrap_or(0);
    let non_unimodal = interior_minima != 1 || k == 0 || k == UNIMODAL_SAMPLES - 1;

    let mut a = xs[k.saturating_sub(1)];
    let mut b = xs[(k + 1).min(UNIMODAL_SAMPLES - 1)];
    let inv_phi = lit::<T>((5f64.sqrt() - 1.0) / 2.0);
    let mut c = b - (b - a) * inv_phi;
    let mut d = a + (b - a) * inv_phi;
    let (mut fc, mut fd) = (gap(c)?, gap(d)?);
    let width = lit::<T>(GOLDEN_WIDTH);
    while b - a > width {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = gap(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = gap(d)?;
        }
    }
    let mut a_gold = (a + b) * lit(0.5);
    if fs[k] < gap(a_gold)? {
        a_gold = xs[k];
    }

    let (a_star, kind) = match secant_root(spec, a_gold, hi - lo) {
        Some(root) if root.im.abs() <= lit(REAL_ROOT_TOL) && root.re >= lo && root.re <= hi => {
            (root.re, EpKind::ExactRoot)
        }
        _ => (a_gold, EpKind::NearMiss),
    };
    let (min_gap, pair) = pair_gap(spec, a_star)?;
    let r_at = ObservableRecord::compute(&decompose(&spec.eval_at(a_star))?).min_r();
    Ok(EpLocation { a_star, kind, pair, min_gap, r_at, non_unimodal })
}

fn secant_root<T: Real>(spec: &HamiltonianSpec<T>, start: T, span: T) -> Option<Cplx<T>> {
    let mut x0 = Complex::new(start, T::zero());
    let mut x1 = Complex::new(start + span * lit(1e-6), T::zero());
    let mut f0 = squared_gap(spec, x0).ok()?;
    let mut f1 = squared_gap(spec, x1).ok()?;
    let floor = T::epsilon() * lit(4.0) * (T::one() + start.abs());
    for _ in 0..SECANT_STEPS {
        if f1.is_zero() {
            return Some(x1);
        }
        let slope = f1 - f0;
        if slope.is_zero() {
            break;
        }
        let x2 = x1 - f1 * (x1 - x0) / slope;
        if !(x2.re.is_finite() && x2.im.is_finite()) {
            return None;
        }
        let moved = (x2 - x1).norm();
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = squared_gap(spec, x1).ok()?;
        if moved <= floor {
            return Some(x1);
        }
    }
    // accept a stagnated iterate only if it really is a root
    let tol = T::epsilon().sqrt() * spec_scale(spec, x1.re);
    (f1.norm() <= tol * tol).then_some(x1)
}

fn spec_scale<T: Real>(spec: &HamiltonianSpec<T>, a: T) -> T {
    spec.eval_at(a).scale()
}

/// Decides whether `a_star` is an exceptional point, a diabolic crossing or
/// an avoided crossing.
pub fn classify<T: Real>(
    spec: &HamiltonianSpec<T>,
    a_star: T,
) -> Result<Classification<T>, EpError> {
    let m = spec.eval_at(a_star);
    let dec = decompose(&m)?;
    let (gap, pair) = dec.min_gap();
    let col = collinearity(&dec.states[pair.0].vector, &dec.states[pair.1].vector);
    let verdict = if gap >= lit::<T>(CLASSIFY_GAP_TOL) * m.scale() {
        Verdict::Avoided
    } else if col > lit(0.99) {
        Verdict::Exceptional
    } else if col < lit(0.01) {
        Verdict::Diabolic
    } else {
        Verdict::Ambiguous
    };
    Ok(Classification { verdict, gap, collinearity: col, pair })
}
