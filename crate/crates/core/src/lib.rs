//! Spectra, exceptional points and biorthogonality observables of small
//! non-Hermitian Hamiltonians `H = diag(e_i + iγ_i/2) + ω·coupling`.
//!
//! The numerical core is generic over the real scalar ([`Real`], implemented
//! for `f32` and `f64`); the aliases below fix it to `f64`.
//!
//! ```
//! use ep_spectra::{analytic_ep_two_level, preset};
//!
//! let p = preset::<f64>("fig1a-d").unwrap();
//! let report = analytic_ep_two_level(&p.spec).unwrap();
//! let eps: Vec<f64> = report.exact_roots().map(|l| l.a_star).collect();
//! assert!((eps[0] + 0.1).abs() < 1e-12 && (eps[1] - 0.1).abs() < 1e-12);
//! ```

pub mod cli;
pub mod dense;
pub mod eplocate;
pub mod io;
pub mod model;
pub mod observables;
pub mod scalar;
pub mod spectra;
pub mod sweep;

pub use eplocate::{analytic_ep_two_level, classify, refine_ep, scan_minima, EpKind, Verdict};
pub use model::{build_n_level, build_two_level, preset, ParamCurve, Topology, PRESET_IDS};
pub use observables::ObservableRecord;
pub use scalar::{Cplx, Real};
pub use spectra::{decompose, eigen_2x2_analytic, eigen_general};
pub use sweep::{run_sweep, Bifurcation};

pub type Complex64 = Cplx<f64>;
pub type Spec = model::HamiltonianSpec<f64>;
pub type Matrix = model::HamiltonianMatrix<f64>;
pub type Curve = model::ParamCurve<f64>;
pub type Level = model::Level<f64>;
pub type Preset = model::Preset<f64>;
pub type Axis = model::SweepAxis<f64>;
pub type Decomposition = spectra::SpectralDecomposition<f64>;
pub type State = spectra::EigenState<f64>;
pub type Observables = observables::ObservableRecord<f64>;
pub type Report = eplocate::EpReport<f64>;
pub type Location = eplocate::EpLocation<f64>;
pub type Candidate = eplocate::EpCandidate<f64>;
pub type Config = sweep::SweepConfig<f64>;
pub type Sweep = sweep::SweepResult<f64>;
pub type Row = sweep::SweepRow<f64>;
