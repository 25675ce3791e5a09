//! Location and classification of exceptional points along a parameter path.
//!
//! Two-level specs are solved exactly: with affine curves `4Z²(a)` is a
//! complex quadratic in `a` ([`analytic_ep_two_level`]). Larger systems are
//! scanned on a sweep grid ([`scan_minima`]) and each candidate is refined
//! ([`refine_ep`]). Only pairwise (second-order) coalescences are searched for.

mod analytic;
mod refine;
mod scan;

pub use analytic::{analytic_ep_two_level, coalescence_polynomial, REAL_ROOT_TOL, NEAR_MISS_TOL};
pub use refine::{classify, pair_gap, refine_ep, CLASSIFY_GAP_TOL};
pub use scan::{scan_minima, EpCandidate};
pub(crate) use scan::median as scan_median;

use thiserror::Error;

use crate::model::ModelError;
use crate::spectra::SpectraError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EpError {
    #[error("analytic EP conditions need a two-level spec, got {0} states")]
    NotTwoLevel(usize),
    #[error("invalid bracket [{lo}, {hi}]")]
    BadBracket { lo: f64, hi: f64 },
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EpKind {
    /// The coalescence condition has a real root here.
    ExactRoot,
    /// Closest real approach to a coalescence off the real axis.
    NearMiss,
}

impl EpKind {
    pub fn name(self) -> &'static str {
        match self {
            EpKind::ExactRoot => "exact-root",
            EpKind::NearMiss => "near-miss-minimum",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpLocation<T> {
    pub a_star: T,
    pub kind: EpKind,
    /// Standalone-order indices of the coalescing pair at `a_star`.
    pub pair: (usize, usize),
    pub min_gap: T,
    /// Smallest phase rigidity at `a_star` (0 for flagged states).
    pub r_at: T,
    /// Set by [`refine_ep`] when the bracket was not unimodal.
    pub non_unimodal: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpReport<T> {
    /// Sorted ascending in `a_star`.
    pub locations: Vec<EpLocation<T>>,
    /// Parameter intervals where the whole spectrum is real.
    pub real_spectrum_windows: Vec<(T, T)>,
    /// The coalescence condition holds for every parameter value.
    pub whole_line_degenerate: bool,
}

impl<T> Default for EpReport<T> {
    fn default() -> Self {
        Self { locations: Vec::new(), real_spectrum_windows: Vec::new(), whole_line_degenerate: false }
    }
}

impl<T: crate::scalar::Real> EpReport<T> {
    pub(crate) fn sort(&mut self) {
        self.locations
            .sort_by(|x, y| x.a_star.partial_cmp(&y.a_star).unwrap_or(std::cmp::Ordering::Equal));
        self.real_spectrum_windows
            .sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal));
    }

    /// Drops locations outside `[lo, hi]` and clips the windows to it.
    pub fn restrict(&mut self, lo: T, hi: T) {
        self.locations.retain(|l| l.a_star >= lo && l.a_star <= hi);
        self.real_spectrum_windows = self
            .real_spectrum_windows
            .iter()
            .filter_map(|&(a, b)| {
                let (a, b) = (a.max(lo), b.min(hi));
                (a < b).then_some((a, b))
            })
            .collect();
    }

    pub fn exact_roots(&self) -> impl Iterator<Item = &EpLocation<T>> {
        self.locations.iter().filter(|l| l.kind == EpKind::ExactRoot)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Eigenvalues and eigenvectors coalesce.
    Exceptional,
    /// Eigenvalues coincide, eigenvectors stay orthogonal.
    Diabolic,
    /// No degeneracy.
    Avoided,
    /// Small gap with intermediate collinearity.
    Ambiguous,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Exceptional => "exceptional",
            Verdict::Diabolic => "diabolic",
            Verdict::Avoided => "avoided",
            Verdict::Ambiguous => "ambiguous",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Classification<T> {
    pub verdict: Verdict,
    pub gap: T,
    pub collinearity: T,
    pub pair: (usize, usize),
}
