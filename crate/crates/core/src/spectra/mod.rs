//! Eigenvalues and c-normalized right eigenvectors of complex symmetric
//! Hamiltonians.
//!
//! For a complex symmetric `M` the left eigenvector belonging to `Φ_k` is
//! `Φ_kᵀ`, so eigenvectors are normalized with the bilinear c-product
//! `Σ_m Φ_k,m² = 1` instead of the Hermitian norm. At an exceptional point
//! that product vanishes; such states are flagged (`c_norm_ok == false`) and
//! carry a Hermitian-normalized vector instead.
//!
//! Two solvers are provided: a closed form for `n = 2`
//! ([`eigen_2x2_analytic`]) and simultaneous root iteration on the
//! characteristic polynomial for any `n` ([`eigen_general`]).

mod analytic;
mod general;
mod normalize;

pub use analytic::{discriminant_z, eigen_2x2_analytic};
pub use general::{eigen_general, eigenvalues_general};
pub use normalize::{c_normalize, c_normalize_vector, Normalized};

pub(crate) use general::roots_of;
pub(crate) use normalize::fix_sign;

use std::cmp::Ordering;

use thiserror::Error;

use crate::model::HamiltonianMatrix;
use crate::scalar::{c_dot, Cplx, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectraError {
    #[error("operation needs a 2x2 matrix, got {0}x{0}")]
    NotTwoByTwo(usize),
    #[error("matrix must have at least 2 rows, got {0}")]
    TooSmall(usize),
    #[error("root iteration did not converge after {iterations} iterations (largest pending correction {max_correction:e})")]
    NoConvergence { iterations: usize, max_correction: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenState<T> {
    /// `ℰ_k = E_k + i·Γ_k/2`.
    pub eigenvalue: Cplx<T>,
    /// Components in the unperturbed (unit) basis.
    pub vector: Vec<Cplx<T>>,
    pub c_norm_ok: bool,
    /// `max_m |(MΦ − ℰΦ)_m|`.
    pub residual: T,
}

impl<T: Real> EigenState<T> {
    pub fn energy(&self) -> T {
        self.eigenvalue.re
    }

    pub fn half_width(&self) -> T {
        self.eigenvalue.im
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomposition<T> {
    pub states: Vec<EigenState<T>>,
    /// Index pairs of states that coalesce (defective within tolerance).
    pub coalescent_pairs: Vec<(usize, usize)>,
}

impl<T: Real> SpectralDecomposition<T> {
    pub fn n(&self) -> usize {
        self.states.len()
    }

    pub fn eigenvalues(&self) -> Vec<Cplx<T>> {
        self.states.iter().map(|s| s.eigenvalue).collect()
    }

    pub fn has_coalescence(&self) -> bool {
        !self.coalescent_pairs.is_empty()
    }

    pub fn eigenvalue_sum(&self) -> Cplx<T> {
        self.states
            .iter()
            .fold(Cplx::new(T::zero(), T::zero()), |acc, s| acc + s.eigenvalue)
    }

    /// Smallest pairwise eigenvalue distance and the pair attaining it.
    pub fn min_gap(&self) -> (T, (usize, usize)) {
        let mut best = (T::infinity(), (0, 1));
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                let g = (self.states[i].eigenvalue - self.states[j].eigenvalue).norm();
                if g < best.0 {
                    best = (g, (i, j));
                }
            }
        }
        best
    }

    /// Reorders states so that new state `k` is old state `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n());
        let mut position = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            position[old] = new;
        }
        let states = perm.iter().map(|&old| self.states[old].clone()).collect();
        let mut coalescent_pairs: Vec<_> = self
            .coalescent_pairs
            .iter()
            .map(|&(i, j)| {
                let (a, b) = (position[i], position[j]);
                (a.min(b), a.max(b))
            })
            .collect();
        coalescent_pairs.sort_unstable();
        Self { states, coalescent_pairs }
    }

    /// Largest `|Σ_m Φ_i,m Φ_j,m|` over distinct unflagged pairs.
    pub fn c_orthogonality_residual(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                if !(self.states[i].c_norm_ok && self.states[j].c_norm_ok) {
                    continue;
                }
                worst = worst.max(c_dot(&self.states[i].vector, &self.states[j].vector).norm());
            }
        }
        worst
    }
}

/// Analytic path for `n = 2`, general path otherwise.
pub fn decompose<T: Real>(
    m: &HamiltonianMatrix<T>,
) -> Result<SpectralDecomposition<T>, SpectraError> {
    if m.n() == 2 {
        eigen_2x2_analytic(m)
    } else {
        eigen_general(m)
    }
}

/// Standalone order: ascending `Re ℰ`, ties by ascending `Im ℰ`.
pub(crate) fn standalone_order<T: Real>(a: &Cplx<T>, b: &Cplx<T>) -> Ordering {
    a.re
        .partial_cmp(&b.re)
        .unwrap_or(Ordering::Equal)
        .then(a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal))
}

pub(crate) fn residual<T: Real>(m: &HamiltonianMatrix<T>, lambda: Cplx<T>, v: &[Cplx<T>]) -> T {
    m.mul_vec(v)
        .iter()
        .zip(v)
        .fold(T::zero(), |worst, (mv, x)| worst.max((mv - x * lambda).norm()))
}

/// Pairs every flagged state with its nearest flagged partner (or nearest
/// state if it has none).
pub(crate) fn pair_flagged<T: Real>(states: &[EigenState<T>]) -> Vec<(usize, usize)> {
    let flagged: Vec<usize> = (0..states.len()).filter(|&k| !states[k].c_norm_ok).collect();
    let mut pairs = Vec::new();
    for &k in &flagged {
        let pool: Vec<usize> = if flagged.len() > 1 {
            flagged.iter().copied().filter(|&j| j != k).collect()
        } else {
            (0..states.len()).filter(|&j| j != k).collect()
        };
        let partner = pool.into_iter().min_by(|&x, &y| {
            let dx = (states[x].eigenvalue - states[k].eigenvalue).norm();
            let dy = (states[y].eigenvalue - states[k].eigenvalue).norm();
            dx.partial_cmp(&dy).unwrap_or(Ordering::Equal)
        });
        if let Some(j) = partner {
            let p = (k.min(j), k.max(j));
            if !pairs.contains(&p) {
                pairs.push(p);
            }
        }
    }
    pairs.sort_unstable();
    pairs
}
