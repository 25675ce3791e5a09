//! Parameterized Hamiltonian families.
//!
//! A [`HamiltonianSpec`] holds one affine energy curve and one affine
//! half-width curve per unperturbed state plus a constant complex coupling
//! `ω` to the common continuum. Evaluating it at a sweep parameter gives a
//! complex symmetric [`HamiltonianMatrix`] with diagonal `ε_i = e_i + i·γ_i/2`.
//!
//! Widths are carried as half-widths (`γ_i/2`) everywhere. Positive values
//! (gain) are accepted.

mod presets;

pub use presets::{preset, Preset, SweepAxis, PRESET_IDS};

use num_complex::Complex;
use num_traits::Zero;
use thiserror::Error;

use crate::dense::CMatrix;
use crate::scalar::{Cplx, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("a Hamiltonian needs at least 2 states, got {0}")]
    TooFewStates(usize),
    #[error("full 2x2 topology requires exactly 2 states, got {0}")]
    NotTwoLevel(usize),
    #[error("matrix entry ({0},{1}) differs from its transpose partner")]
    NotSymmetric(usize, usize),
    #[error("expected {expected} matrix entries, got {got}")]
    BadShape { expected: usize, got: usize },
    #[error("unknown preset `{id}`; valid presets: {}", valid.join(", "))]
    UnknownPreset { id: String, valid: Vec<&'static str> },
}

/// Affine trajectory `value(a) = intercept + slope·a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamCurve<T> {
    pub intercept: T,
    pub slope: T,
}

impl<T: Real> ParamCurve<T> {
    pub fn new(intercept: T, slope: T) -> Self {
        Self { intercept, slope }
    }

    pub fn constant(value: T) -> Self {
        Self { intercept: value, slope: T::zero() }
    }

    #[inline]
    pub fn value(&self, a: T) -> T {
        self.intercept + self.slope * a
    }

    fn is_finite(&self) -> bool {
        self.intercept.is_finite() && self.slope.is_finite()
    }
}

/// One unperturbed state: energy `e_i(a)` and half-width `γ_i(a)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Level<T> {
    pub energy: ParamCurve<T>,
    pub half_width: ParamCurve<T>,
}

impl<T: Real> Level<T> {
    pub fn new(energy: ParamCurve<T>, half_width: ParamCurve<T>) -> Self {
        Self { energy, half_width }
    }

    /// `ε_i(a) = e_i(a) + i·γ_i(a)/2`.
    #[inline]
    pub fn epsilon(&self, a: T) -> Cplx<T> {
        Complex::new(self.energy.value(a), self.half_width.value(a))
    }

    fn epsilon_complex(&self, a: Cplx<T>) -> Cplx<T> {
        let e = a.scale(self.energy.slope) + self.energy.intercept;
        let h = a.scale(self.half_width.slope) + self.half_width.intercept;
        e + h * Complex::i()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Topology {
    /// Both off-diagonal entries of a 2×2 matrix carry `ω`.
    Full2x2,
    /// State 1 is the doorway: `ω` sits in row/column 1 only.
    Doorway,
}

impl Topology {
    pub fn name(self) -> &'static str {
        match self {
            Topology::Full2x2 => "full-2x2",
            Topology::Doorway => "doorway",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianSpec<T> {
    levels: Vec<Level<T>>,
    coupling: Cplx<T>,
    topology: Topology,
}

fn check_finite<T: Real>(levels: &[Level<T>], omega: Cplx<T>) -> Result<(), ModelError> {
    for (i, l) in levels.iter().enumerate() {
        if !l.energy.is_finite() {
            return Err(ModelError::NonFinite(format!("energy curve of state {}", i + 1)));
        }
        if !l.half_width.is_finite() {
            return Err(ModelError::NonFinite(format!("half-width curve of state {}", i + 1)));
        }
    }
    if !(omega.re.is_finite() && omega.im.is_finite()) {
        return Err(ModelError::NonFinite("coupling omega".into()));
    }
    Ok(())
}

/// Two states coupled through `ω` in both off-diagonal slots.
pub fn build_two_level<T: Real>(
    e1: ParamCurve<T>,
    e2: ParamCurve<T>,
    g1: ParamCurve<T>,
    g2: ParamCurve<T>,
    omega: Cplx<T>,
) -> Result<HamiltonianSpec<T>, ModelError> {
    let levels = vec![Level::new(e1, g1), Level::new(e2, g2)];
    check_finite(&levels, omega)?;
    Ok(HamiltonianSpec { levels, coupling: omega, topology: Topology::Full2x2 })
}

/// `n = levels.len()` states, all coupled to the continuum through state 1.
pub fn build_n_level<T: Real>(
    levels: Vec<Level<T>>,
    omega: Cplx<T>,
) -> Result<HamiltonianSpec<T>, ModelError> {
    if levels.len() < 2 {
        return Err(ModelError::TooFewStates(levels.len()));
    }
    check_finite(&levels, omega)?;
    Ok(HamiltonianSpec { levels, coupling: omega, topology: Topology::Doorway })
}

impl<T: Real> HamiltonianSpec<T> {
    /// Builds a spec for either topology, checking the size constraint.
    pub fn new(
        levels: Vec<Level<T>>,
        omega: Cplx<T>,
        topology: Topology,
    ) -> Result<Self, ModelError> {
        match topology {
            Topology::Full2x2 if levels.len() != 2 => Err(ModelError::NotTwoLevel(levels.len())),
            Topology::Full2x2 => {
                build_two_level(
                    levels[0].energy,
                    levels[1].energy,
                    levels[0].half_width,
                    levels[1].half_width,
                    omega,
                )
            }
            Topology::Doorway => build_n_level(levels, omega),
        }
    }

    pub fn n(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Level<T>] {
        &self.levels
    }

    pub fn coupling(&self) -> Cplx<T> {
        self.coupling
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    /// Same levels with a different coupling.
    pub fn with_coupling(&self, omega: Cplx<T>) -> Result<Self, ModelError> {
        Self::new(self.levels.clone(), omega, self.topology)
    }

    fn coupled(&self, i: usize, j: usize) -> bool {
        i != j && (i == 0 || j == 0)
    }

    /// Substitutes the sweep parameter into every curve.
    pub fn eval_at(&self, a: T) -> HamiltonianMatrix<T> {
        let n = self.n();
        let mut m = CMatrix::zeros(n);
        for (i, level) in self.levels.iter().enumerate() {
            m[(i, i)] = level.epsilon(a);
        }
        for i in 0..n {
            for j in 0..n {
                if self.coupled(i, j) {
                    m[(i, j)] = self.coupling;
                }
            }
        }
        HamiltonianMatrix { m }
    }

    /// Analytic continuation of [`eval_at`](Self::eval_at) to a complex parameter.
    pub(crate) fn eval_complex(&self, a: Cplx<T>) -> CMatrix<T> {
        let n = self.n();
        let mut m = CMatrix::zeros(n);
        for (i, level) in self.levels.iter().enumerate() {
            m[(i, i)] = level.epsilon_complex(a);
        }
        for i in 0..n {
            for j in 0..n {
                if self.coupled(i, j) {
                    m[(i, j)] = self.coupling;
                }
            }
        }
        m
    }

    /// Unperturbed energies `e_i(a)`.
    pub fn energies_at(&self, a: T) -> Vec<T> {
        self.levels.iter().map(|l| l.energy.value(a)).collect()
    }

    /// Unperturbed half-widths `γ_i(a)/2`.
    pub fn half_widths_at(&self, a: T) -> Vec<T> {
        self.levels.iter().map(|l| l.half_width.value(a)).collect()
    }

    /// Rough bound on `|dℰ/da|` away from exceptional points.
    pub fn slope_scale(&self) -> T {
        self.levels
            .iter()
            .fold(T::zero(), |m, l| m.max(l.energy.slope.abs() + l.half_width.slope.abs()))
            + self.coupling.norm()
    }
}

/// Complex symmetric matrix produced by [`HamiltonianSpec::eval_at`] or
/// assembled directly from entries.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianMatrix<T> {
    m: CMatrix<T>,
}

impl<T: Real> HamiltonianMatrix<T> {
    /// Wraps row-major entries after checking finiteness and `M = Mᵀ`.
    pub fn from_entries(n: usize, entries: Vec<Cplx<T>>) -> Result<Self, ModelError> {
        if entries.len() != n * n {
            return Err(ModelError::BadShape { expected: n * n, got: entries.len() });
        }
        if n < 1 {
            return Err(ModelError::TooFewStates(n));
        }
        if entries.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(ModelError::NonFinite("matrix entries".into()));
        }
        let m = CMatrix::from_row_major(n, entries);
        for i in 0..n {
            for j in i + 1..n {
                if m[(i, j)] != m[(j, i)] {
                    return Err(ModelError::NotSymmetric(i, j));
                }
            }
        }
        Ok(Self { m })
    }

    /// 2×2 matrix `[[ε1, ω], [ω, ε2]]`.
    pub fn two_by_two(eps1: Cplx<T>, eps2: Cplx<T>, omega: Cplx<T>) -> Result<Self, ModelError> {
        Self::from_entries(2, vec![eps1, omega, omega, eps2])
    }

    pub fn n(&self) -> usize {
        self.m.n()
    }

    pub fn get(&self, i: usize, j: usize) -> Cplx<T> {
        self.m[(i, j)]
    }

    pub fn diagonal(&self) -> Vec<Cplx<T>> {
        (0..self.n()).map(|i| self.m[(i, i)]).collect()
    }

    pub fn trace(&self) -> Cplx<T> {
        self.m.trace()
    }

    pub fn max_abs(&self) -> T {
        self.m.max_abs()
    }

    /// `1 + max|M_ij|`, the scale all relative thresholds refer to.
    pub fn scale(&self) -> T {
        T::one() + self.max_abs()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..n).all(|j| self.m[(i, j)] == self.m[(j, i)]))
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..n).all(|j| i == j || self.m[(i, j)].is_zero()))
    }

    pub fn mul_vec(&self, v: &[Cplx<T>]) -> Vec<Cplx<T>> {
        self.m.mul_vec(v)
    }

    pub(crate) fn dense(&self) -> &CMatrix<T> {
        &self.m
    }
}
