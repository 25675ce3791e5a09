//! Biorthogonality observables derived from one c-normalized decomposition.
//!
//! * phase rigidity `r_k = ⟨Φ_k*|Φ_k⟩ / ⟨Φ_k|Φ_k⟩ = 1/A_k`
//! * norm `A_k = ⟨Φ_k|Φ_k⟩ ≥ 1`
//! * overlaps `|B_k^l| = |⟨Φ_k|Φ_l⟩|`
//! * mixing `|b_kl| = |Φ_k,l|` (components in the unperturbed basis)
//! * collinearity `|⟨Φ_k|Φ_l⟩|² / (⟨Φ_k|Φ_k⟩⟨Φ_l|Φ_l⟩)`
//!
//! Defective states get `r = 0` and `A = ∞`; their mixing row holds the
//! Hermitian-normalized vector.

use crate::scalar::{h_dot, h_norm_sqr, Cplx, Real};
use crate::spectra::SpectralDecomposition;

#[derive(Clone, Debug, PartialEq)]
pub struct ObservableRecord<T> {
    pub r: Vec<T>,
    pub norm_a: Vec<T>,
    /// `|⟨Φ_k|Φ_l⟩|`; diagonal holds `A_k` (or 1 for flagged states).
    pub b_abs: Vec<Vec<T>>,
    /// `|b_kl|`, state `k` in basis state `l`.
    pub mixing: Vec<Vec<T>>,
    pub collinearity: Vec<Vec<T>>,
    pub flagged: Vec<bool>,
    /// Complex Hermitian overlaps `⟨Φ_k|Φ_l⟩`.
    pub overlaps: Vec<Vec<Cplx<T>>>,
}

impl<T: Real> ObservableRecord<T> {
    pub fn compute(dec: &SpectralDecomposition<T>) -> Self {
        let n = dec.n();
        let vectors: Vec<&[Cplx<T>]> = dec.states.iter().map(|s| s.vector.as_slice()).collect();
        let flagged: Vec<bool> = dec.states.iter().map(|s| !s.c_norm_ok).collect();

        let mut r = Vec::with_capacity(n);
        let mut norm_a = Vec::with_capacity(n);
        for (v, &bad) in vectors.iter().zip(&flagged) {
            if bad {
                r.push(T::zero());
                norm_a.push(T::infinity());
            } else {
                // |Σ Φ²| = 1 bounds the Hermitian norm from below
                let a = h_norm_sqr(v).max(T::one());
                r.push(a.recip());
                norm_a.push(a);
            }
        }

        let overlaps: Vec<Vec<Cplx<T>>> = (0..n)
            .map(|k| (0..n).map(|l| h_dot(vectors[k], vectors[l])).collect())
            .collect();
        let b_abs = overlaps.iter().map(|row| row.iter().map(|z| z.norm()).collect()).collect();
        let self_norm: Vec<T> = (0..n).map(|k| overlaps[k][k].re).collect();
        let collinearity = (0..n)
            .map(|k| {
                (0..n)
                    .map(|l| {
                        let denom = self_norm[k] * self_norm[l];
                        if denom > T::zero() {
                            (overlaps[k][l].norm_sqr() / denom).min(T::one())
                        } else {
                            T::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        let mixing = vectors.iter().map(|v| v.iter().map(|z| z.norm()).collect()).collect();

        Self { r, norm_a, b_abs, mixing, collinearity, flagged, overlaps }
    }

    pub fn n(&self) -> usize {
        self.r.len()
    }

    pub fn min_r(&self) -> T {
        self.r.iter().copied().fold(T::infinity(), T::min)
    }
}

/// `r_k` for every state.
pub fn phase_rigidity<T: Real>(dec: &SpectralDecomposition<T>) -> Vec<T> {
    ObservableRecord::compute(dec).r
}

/// `A_k = 1/r_k`, `∞` for flagged states.
pub fn norm_a<T: Real>(dec: &SpectralDecomposition<T>) -> Vec<T> {
    ObservableRecord::compute(dec).norm_a
}

pub fn overlaps_b<T: Real>(dec: &SpectralDecomposition<T>) -> Vec<Vec<T>> {
    ObservableRecord::compute(dec).b_abs
}

pub fn mixing_coeffs<T: Real>(dec: &SpectralDecomposition<T>) -> Vec<Vec<T>> {
    ObservableRecord::compute(dec).mixing
}

/// Pairwise collinearity in `[0, 1]`; `→ 1` when two states coalesce.
pub fn ep_proximity<T: Real>(dec: &SpectralDecomposition<T>) -> Vec<Vec<T>> {
    ObservableRecord::compute(dec).collinearity
}

/// Collinearity of two arbitrary vectors (phase invariant).
pub fn collinearity<T: Real>(u: &[Cplx<T>], v: &[Cplx<T>]) -> T {
    let denom = h_norm_sqr(u) * h_norm_sqr(v);
    if denom > T::zero() {
        (h_dot(u, v).norm_sqr() / denom).min(T::one())
    } else {
        T::zero()
    }
}
