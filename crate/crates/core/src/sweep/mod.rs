//! Parameter sweeps: grid evaluation, refinement near gap minima, state
//! tracking and EP reporting.

mod track;

pub use track::{track_states, Tracking};

use rayon::prelude::*;
use thiserror::Error;

use crate::eplocate::{analytic_ep_two_level, refine_ep, scan_minima, EpCandidate, EpError, EpLocation, EpReport};
use crate::eplocate::scan_median as median;
use crate::model::{HamiltonianSpec, Preset, SweepAxis};
use crate::observables::ObservableRecord;
use crate::scalar::{from_usize, lit, Cplx, Real};
use crate::spectra::{decompose, fix_sign, SpectraError, SpectralDecomposition};

/// Which spread defines the maximal bifurcation point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bifurcation {
    /// Spread of the widths `Γ_k/2`.
    Width,
    /// Spread of the energies `E_k`.
    Level,
    /// Whichever excess spread reaches the larger maximum.
    Auto,
}

impl Bifurcation {
    pub fn name(self) -> &'static str {
        match self {
            Bifurcation::Width => "width",
            Bifurcation::Level => "level",
            Bifurcation::Auto => "auto",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "width" => Some(Bifurcation::Width),
            "level" => Some(Bifurcation::Level),
            "auto" => Some(Bifurcation::Auto),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RefineConfig<T> {
    pub enable: bool,
    /// Threshold as a multiple of the median eigenvalue motion between rows.
    pub gap_factor: T,
    /// Absolute threshold; overrides `gap_factor` when set.
    pub gap_threshold: Option<T>,
    pub max_extra_points: usize,
    /// Bisection rounds per gap minimum.
    pub rounds: usize,
}

impl<T: Real> Default for RefineConfig<T> {
    fn default() -> Self {
        Self { enable: true, gap_factor: lit(10.0), gap_threshold: None, max_extra_points: 500, rounds: 20 }
    }
}

/// CSV column groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OutputColumns {
    pub energies: bool,
    pub widths: bool,
    pub rigidity: bool,
    pub one_minus_r: bool,
    pub norm_a: bool,
    pub overlaps: bool,
    pub mixing: bool,
    pub flags: bool,
}

impl Default for OutputColumns {
    fn default() -> Self {
        Self {
            energies: true,
            widths: true,
            rigidity: true,
            one_minus_r: true,
            norm_a: true,
            overlaps: true,
            mixing: true,
            flags: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig<T> {
    pub spec: HamiltonianSpec<T>,
    pub axis: SweepAxis<T>,
    pub refine: RefineConfig<T>,
    pub columns: OutputColumns,
    pub bifurcation: Bifurcation,
}

impl<T: Real> SweepConfig<T> {
    pub fn new(spec: HamiltonianSpec<T>, axis: SweepAxis<T>) -> Self {
        Self {
            spec,
            axis,
            refine: RefineConfig::default(),
            columns: OutputColumns::default(),
            bifurcation: Bifurcation::Auto,
        }
    }

    pub fn from_preset(p: &Preset<T>) -> Self {
        Self { bifurcation: p.bifurcation, ..Self::new(p.spec.clone(), p.axis.clone()) }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SweepError {
    #[error("invalid sweep axis: {0}")]
    InvalidAxis(String),
    #[error("{failed} of {total} grid points failed")]
    TooManyFailures { failed: usize, total: usize },
    #[error(transparent)]
    Ep(#[from] EpError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RowFlags {
    /// The solver failed; the row carries no spectrum.
    pub failed: bool,
    /// At least one state is defective.
    pub coalescent: bool,
    /// Tracking from the previous row was ambiguous.
    pub discontinuity: bool,
    /// Inserted by refinement.
    pub refined: bool,
}

impl RowFlags {
    /// Compact text form, e.g. `CDR` or `-`.
    pub fn code(&self) -> String {
        let mut s = String::new();
        for (on, c) in [(self.failed, 'F'), (self.coalescent, 'C'), (self.discontinuity, 'D'), (self.refined, 'R')] {
            if on {
                s.push(c);
            }
        }
        if s.is_empty() {
            s.push('-');
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow<T> {
    pub a: T,
    /// Identity-tracked states; `None` on failed rows.
    pub decomposition: Option<SpectralDecomposition<T>>,
    pub observables: Option<ObservableRecord<T>>,
    /// Smallest pairwise eigenvalue distance (`∞` on failed rows).
    pub gap: T,
    pub gap_pair: (usize, usize),
    pub flags: RowFlags,
}

impl<T: Real> SweepRow<T> {
    pub fn eigenvalues(&self) -> Vec<Cplx<T>> {
        self.decomposition.as_ref().map(|d| d.eigenvalues()).unwrap_or_default()
    }

    pub fn min_r(&self) -> T {
        self.observables.as_ref().map(|o| o.min_r()).unwrap_or(T::infinity())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult<T> {
    pub config: SweepConfig<T>,
    /// Strictly ascending in `a`.
    pub rows: Vec<SweepRow<T>>,
    pub ep_report: EpReport<T>,
    pub candidates: Vec<EpCandidate<T>>,
    pub max_bifurcation_at: Option<T>,
    /// Gap threshold used for bisection refinement.
    pub gap_threshold: T,
    pub extra_points: usize,
}

impl<T: Real> SweepResult<T> {
    pub fn n(&self) -> usize {
        self.config.spec.n()
    }

    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.flags.failed).count()
    }

    /// Row whose `a` is closest to `a`.
    pub fn nearest_row(&self, a: T) -> Option<&SweepRow<T>> {
        self.rows.iter().min_by(|x, y| {
            (x.a - a).abs().partial_cmp(&(y.a - a).abs()).unwrap_or(std::cmp::Ordering::Equal)
        })
    }
}

const MAX_FAILED_FRACTION: f64 = 0.05;
const ZOOM_GAP_FRACTION: f64 = 0.1;
const FLAT_SPREAD: f64 = 1e-10;
const REAL_WINDOW_TOL: f64 = 1e-10;

struct Point<T> {
    a: T,
    dec: Result<SpectralDecomposition<T>, SpectraError>,
    refined: bool,
}

impl<T: Real> Point<T> {
    fn new(spec: &HamiltonianSpec<T>, a: T, refined: bool) -> Self {
        Self { a, dec: decompose(&spec.eval_at(a)), refined }
    }

    fn gap(&self) -> T {
        self.dec.as_ref().map(|d| d.min_gap().0).unwrap_or(T::infinity())
    }
}

fn validate<T: Real>(axis: &SweepAxis<T>) -> Result<(), SweepError> {
    if !(axis.min.is_finite() && axis.max.is_finite()) {
        return Err(SweepError::InvalidAxis("bounds must be finite".into()));
    }
    if axis.min >= axis.max {
        return Err(SweepError::InvalidAxis(format!("min {} must be below max {}", axis.min, axis.max)));
    }
    if axis.points < 3 {
        return Err(SweepError::InvalidAxis(format!("need at least 3 points, got {}", axis.points)));
    }
    Ok(())
}

/// Uniform grid `min + (max − min)·i/(points − 1)`.
pub fn uniform_grid<T: Real>(axis: &SweepAxis<T>) -> Vec<T> {
    let last = from_usize::<T>(axis.points - 1);
    (0..axis.points)
        .map(|i| {
            if i == axis.points - 1 {
                axis.max
            } else {
                axis.min + (axis.max - axis.min) * from_usize(i) / last
            }
        })
        .collect()
}

/// Runs a sweep: evaluates the grid in parallel, refines near gap minima,
/// tracks states sequentially, attaches observables and the EP report.
pub fn run_sweep<T: Real>(config: &SweepConfig<T>) -> Result<SweepResult<T>, SweepError> {
    validate(&config.axis)?;
    let spec = &config.spec;
    let grid = uniform_grid(&config.axis);
    let mut points: Vec<Point<T>> = grid.par_iter().map(|&a| Point::new(spec, a, false)).collect();

    let mut extra = 0;
    let mut threshold = T::zero();
    if config.refine.enable {
        let budget = config.refine.max_extra_points;
        let zoomed = zoom_minima(spec, &points, config.refine.rounds, budget);
        extra += zoomed.len();
        merge(&mut points, zoomed);
        threshold = config
            .refine
            .gap_threshold
            .unwrap_or_else(|| config.refine.gap_factor * median_motion(&points));
        let bisected = bisect_small_gaps(spec, &points, threshold, config.refine.rounds, budget - extra);
        extra += bisected.len();
        merge(&mut points, bisected);
    }

    let total = points.len();
    let failed = points.iter().filter(|p| p.dec.is_err()).count();
    if (failed as f64) > MAX_FAILED_FRACTION * total as f64 {
        return Err(SweepError::TooManyFailures { failed, total });
    }

    let rows = track_rows(points);
    let mut result = SweepResult {
        config: config.clone(),
        rows,
        ep_report: EpReport::default(),
        candidates: Vec::new(),
        max_bifurcation_at: None,
        gap_threshold: threshold,
        extra_points: extra,
    };
    result.candidates = scan_minima(&result);
    result.ep_report = ep_report(&result)?;
    result.max_bifurcation_at = max_width_bifurcation(&result, config.bifurcation);
    Ok(result)
}

fn merge<T: Real>(points: &mut Vec<Point<T>>, extra: Vec<Point<T>>) {
    points.extend(extra);
    points.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap_or(std::cmp::Ordering::Equal));
    points.dedup_by(|x, y| x.a == y.a);
}

/// Repeated bisection around every discrete gap minimum below a tenth of the
/// median gap.
fn zoom_minima<T: Real>(
    spec: &HamiltonianSpec<T>,
    points: &[Point<T>],
    rounds: usize,
    budget: usize,
) -> Vec<Point<T>> {
    let gaps: Vec<T> = points.iter().map(Point::gap).collect();
    let limit = median(&gaps) * lit(ZOOM_GAP_FRACTION);
    let minima: Vec<usize> = (1..points.len().saturating_sub(1))
        .filter(|&i| gaps[i] <= gaps[i - 1] && gaps[i] < gaps[i + 1] && gaps[i] < limit)
        .collect();

    let per_minimum = 2 * rounds;
    let zooms: Vec<Vec<Point<T>>> = minima
        .into_iter()
        .take(budget / per_minimum.max(1))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|i| {
            let mut added = Vec::with_capacity(per_minimum);
            let (mut l, mut m, mut r) = ((points[i - 1].a, gaps[i - 1]), (points[i].a, gaps[i]), (points[i + 1].a, gaps[i + 1]));
            for _ in 0..rounds {
                let left = Point::new(spec, (l.0 + m.0) * lit(0.5), true);
                let right = Point::new(spec, (m.0 + r.0) * lit(0.5), true);
                if left.a <= l.0 || left.a >= m.0 || right.a <= m.0 || right.a >= r.0 {
                    break;
                }
                let lg = (left.a, left.gap());
                let rg = (right.a, right.gap());
                let five = [l, lg, m, rg, r];
                added.push(left);
                added.push(right);
                let k = (1..4)
                    .min_by(|&x, &y| five[x].1.partial_cmp(&five[y].1).unwrap_or(std::cmp::Ordering::Equal))
                    .unwrap_or(2);
                (l, m, r) = (five[k - 1], five[k], five[k + 1]);
            }
            added
        })
        .collect();
    zooms.into_iter().flatten().collect()
}

/// Median over adjacent rows of the largest eigenvalue displacement.
fn median_motion<T: Real>(points: &[Point<T>]) -> T {
    let motions: Vec<T> = points
        .windows(2)
        .filter_map(|w| {
            let (a, b) = (w[0].dec.as_ref().ok()?, w[1].dec.as_ref().ok()?);
            Some(
                a.states
                    .iter()
                    .zip(&b.states)
                    .fold(T::zero(), |m, (x, y)| m.max((x.eigenvalue - y.eigenvalue).norm())),
            )
        })
        .collect();
    median(&motions)
}

/// Midpoint bisection of intervals whose end points both have a gap below
/// `threshold`; each round only revisits intervals created by the last one.
fn bisect_small_gaps<T: Real>(
    spec: &HamiltonianSpec<T>,
    points: &[Point<T>],
    threshold: T,
    rounds: usize,
    budget: usize,
) -> Vec<Point<T>> {
    let mut intervals: Vec<((T, T), (T, T))> = points
        .windows(2)
        .map(|w| ((w[0].a, w[0].gap()), (w[1].a, w[1].gap())))
        .filter(|(l, r)| l.1 < threshold && r.1 < threshold)
        .collect();
    let mut added: Vec<Point<T>> = Vec::new();
    for _ in 0..rounds {
        let room = budget - added.len();
        if intervals.is_empty() || room == 0 {
            break;
        }
        intervals.sort_by(|x, y| {
            let gx = x.0 .1.min(x.1 .1);
            let gy = y.0 .1.min(y.1 .1);
            gx.partial_cmp(&gy).unwrap_or(std::cmp::Ordering::Equal)
        });
        intervals.truncate(room);
        let fresh: Vec<Point<T>> = intervals
            .par_iter()
            .map(|(l, r)| Point::new(spec, (l.0 + r.0) * lit(0.5), true))
            .collect();
        let mut next = Vec::new();
        for ((l, r), p) in intervals.iter().zip(&fresh) {
            if p.a <= l.0 || p.a >= r.0 {
                continue;
            }
            let mid = (p.a, p.gap());
            for (x, y) in [(*l, mid), (mid, *r)] {
                if x.1 < threshold && y.1 < threshold {
                    next.push((x, y));
                }
            }
        }
        added.extend(fresh);
        intervals = next;
    }
    added
}

/// Sequential identity tracking, sign alignment and observables.
fn track_rows<T: Real>(points: Vec<Point<T>>) -> Vec<SweepRow<T>> {
    let mut rows = Vec::with_capacity(points.len());
    let mut prev: Option<SpectralDecomposition<T>> = None;
    for p in points {
        let mut flags = RowFlags { refined: p.refined, ..RowFlags::default() };
        let Ok(dec) = p.dec else {
            flags.failed = true;
            rows.push(SweepRow {
                a: p.a,
                decomposition: None,
                observables: None,
                gap: T::infinity(),
                gap_pair: (0, 1),
                flags,
            });
            continue;
        };
        let tracked = match &prev {
            None => dec,
            Some(before) => {
                let t = track_states(before, &dec);
                flags.discontinuity = t.discontinuity;
                let mut cur = dec.permuted(&t.permutation);
                for (state, old) in cur.states.iter_mut().zip(&before.states) {
                    fix_sign(&mut state.vector, Some(&old.vector));
                }
                cur
            }
        };
        flags.coalescent = tracked.has_coalescence();
        let (gap, gap_pair) = tracked.min_gap();
        let observables = ObservableRecord::compute(&tracked);
        prev = Some(tracked.clone());
        rows.push(SweepRow {
            a: p.a,
            decomposition: Some(tracked),
            observables: Some(observables),
            gap,
            gap_pair,
            flags,
        });
    }
    rows
}

fn ep_report<T: Real>(result: &SweepResult<T>) -> Result<EpReport<T>, EpError> {
    let (lo, hi) = (result.config.axis.min, result.config.axis.max);
    let spec = &result.config.spec;
    let mut report = if spec.n() == 2 {
        analytic_ep_two_level(spec)?
    } else {
        let found: Vec<EpLocation<T>> = result
            .candidates
            .par_iter()
            .map(|c| refine_ep(spec, c.bracket))
            .collect::<Result<_, _>>()?;
        EpReport { locations: found, real_spectrum_windows: numeric_windows(result), whole_line_degenerate: false }
    };
    report.restrict(lo, hi);
    report.sort();
    report.locations.dedup_by(|x, y| {
        x.kind == y.kind && (x.a_star - y.a_star).abs() <= lit::<T>(1e-9) * (T::one() + x.a_star.abs())
    });
    Ok(report)
}

/// Maximal runs of rows whose eigenvalues are all real.
fn numeric_windows<T: Real>(result: &SweepResult<T>) -> Vec<(T, T)> {
    let mut windows = Vec::new();
    let mut run: Option<(T, T, usize)> = None;
    for row in &result.rows {
        let real = row.decomposition.as_ref().is_some_and(|d| {
            d.states.iter().all(|s| s.half_width().abs() <= lit(REAL_WINDOW_TOL))
        });
        run = match (run, real) {
            (None, true) => Some((row.a, row.a, 1)),
            (Some((s, _, k)), true) => Some((s, row.a, k + 1)),
            (Some((s, e, k)), false) => {
                if k > 1 {
                    windows.push((s, e));
                }
                None
            }
            (None, false) => None,
        };
    }
    if let Some((s, e, k)) = run {
        if k > 1 {
            windows.push((s, e));
        }
    }
    windows
}

/// Parameter of the largest splitting of the widths (or energies), measured
/// as the excess over the spread of the unperturbed curves.
///
/// Returns `None` when the splitting never exceeds `1e-10`.
pub fn max_width_bifurcation<T: Real>(result: &SweepResult<T>, kind: Bifurcation) -> Option<T> {
    let spec = &result.config.spec;
    let spread = |v: &[T]| {
        let hi = v.iter().copied().fold(T::neg_infinity(), T::max);
        let lo = v.iter().copied().fold(T::infinity(), T::min);
        hi - lo
    };
    let mut best_width: Option<(T, T)> = None;
    let mut best_level: Option<(T, T)> = None;
    for row in &result.rows {
        let Some(dec) = &row.decomposition else { continue };
        let energies: Vec<T> = dec.states.iter().map(|s| s.energy()).collect();
        let widths: Vec<T> = dec.states.iter().map(|s| s.half_width()).collect();
        let width_excess = spread(&widths) - spread(&spec.half_widths_at(row.a));
        let level_excess = spread(&energies) - spread(&spec.energies_at(row.a));
        if best_width.is_none_or(|(_, v)| width_excess > v) {
            best_width = Some((row.a, width_excess));
        }
        if best_level.is_none_or(|(_, v)| level_excess > v) {
            best_level = Some((row.a, level_excess));
        }
    }
    let chosen = match kind {
        Bifurcation::Width => best_width,
        Bifurcation::Level => best_level,
        Bifurcation::Auto => match (best_width, best_level) {
            (Some(w), Some(l)) => Some(if l.1 > w.1 { l } else { w }),
            (w, l) => w.or(l),
        },
    }?;
    (chosen.1 > lit(FLAT_SPREAD)).then_some(chosen.0)
}
