#![allow(dead_code)]

use ep_spectra::model::HamiltonianMatrix;
use ep_spectra::scalar::{c_dot, h_dot};
use ep_spectra::{Complex64, Decomposition, Matrix, Observables};
use rand::Rng;

/// Complex symmetric matrix with entries uniform in `[-1, 1]²`.
pub fn random_matrix<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let mut e = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in i..n {
            let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            e[i * n + j] = z;
            e[j * n + i] = z;
        }
    }
    HamiltonianMatrix::from_entries(n, e).unwrap()
}

/// Worst-case deviations of one decomposition from the biorthogonality identities.
#[derive(Clone, Copy, Debug, Default)]
pub struct Worst {
    pub c_orthonormality: f64,
    pub trace: f64,
    pub r_times_a: f64,
    pub r_outside_unit: f64,
    pub imaginary_overlap: f64,
    pub mixing_sum: f64,
    pub r_equal: f64,
}

impl Worst {
    pub fn merge(&mut self, o: Worst) {
        self.c_orthonormality = self.c_orthonormality.max(o.c_orthonormality);
        self.trace = self.trace.max(o.trace);
        self.r_times_a = self.r_times_a.max(o.r_times_a);
        self.r_outside_unit = self.r_outside_unit.max(o.r_outside_unit);
        self.imaginary_overlap = self.imaginary_overlap.max(o.imaginary_overlap);
        self.mixing_sum = self.mixing_sum.max(o.mixing_sum);
        self.r_equal = self.r_equal.max(o.r_equal);
    }

    pub fn failures(&self) -> Vec<String> {
        let checks = [
            ("c-orthonormality", self.c_orthonormality, 1e-8),
            ("trace/scale", self.trace, 1e-12),
            ("r*A - 1", self.r_times_a, 1e-12),
            ("r outside [0,1]", self.r_outside_unit, 0.0),
            ("imaginary antisymmetric overlaps", self.imaginary_overlap, 1e-8),
            ("sum |b|^2 - A", self.mixing_sum, 1e-10),
            ("r_1 - r_2", self.r_equal, 1e-10),
        ];
        checks
            .iter()
            .filter(|(_, v, tol)| v.partial_cmp(tol).is_none_or(|o| o.is_gt()))
            .map(|(name, v, tol)| format!("{name}: {v:e} > {tol:e}"))
            .collect()
    }
}

/// Measures every identity on `dec`, the decomposition of `m`.
///
/// The overlap identity `⟨Φ_i|Φ_j⟩ = i·Im⟨Φ_i|Φ_j⟩ = −⟨Φ_j|Φ_i⟩` is a
/// two-level property and is only measured for `n = 2`.
pub fn measure(m: &Matrix, dec: &Decomposition) -> Worst {
    let obs = Observables::compute(dec);
    let n = dec.n();
    let mut w = Worst::default();
    for i in 0..n {
        let si = &dec.states[i];
        if si.c_norm_ok {
            w.c_orthonormality = w.c_orthonormality.max((c_dot(&si.vector, &si.vector) - 1.0).norm());
            w.r_times_a = w.r_times_a.max((obs.r[i] * obs.norm_a[i] - 1.0).abs());
            let sum: f64 = obs.mixing[i].iter().map(|b| b * b).sum();
            w.mixing_sum = w.mixing_sum.max((sum - obs.norm_a[i]).abs());
        }
        let r = obs.r[i];
        w.r_outside_unit = w.r_outside_unit.max((-r).max(r - 1.0).max(0.0));
        if r.is_nan() {
            w.r_outside_unit = f64::INFINITY;
        }
        for j in 0..n {
            let sj = &dec.states[j];
            if i == j || !(si.c_norm_ok && sj.c_norm_ok) {
                continue;
            }
            w.c_orthonormality = w.c_orthonormality.max(c_dot(&si.vector, &sj.vector).norm());
            if n == 2 {
                let o = h_dot(&si.vector, &sj.vector);
                let back = h_dot(&sj.vector, &si.vector);
                w.imaginary_overlap = w.imaginary_overlap.max(o.re.abs()).max((o + back).norm());
            }
        }
    }
    let trace = m.trace();
    w.trace = (dec.eigenvalue_sum() - trace).norm() / m.scale();
    if n == 2 {
        w.r_equal = (obs.r[0] - obs.r[1]).abs();
    }
    w
}
