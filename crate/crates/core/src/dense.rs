//! Minimal dense complex matrix with LU factorization.
//!
//! Matrices here are at most a dozen rows, so everything is row-major `Vec`
//! storage and straightforward loops.

use std::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::Zero;

use crate::scalar::{Cplx, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    n: usize,
    data: Vec<Cplx<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex::zero(); n * n] }
    }

    pub fn from_row_major(n: usize, data: Vec<Cplx<T>>) -> Self {
        assert_eq!(data.len(), n * n, "row-major data must hold n*n entries");
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Cplx<T>] {
        &self.data
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn trace(&self) -> Cplx<T> {
        (0..self.n).fold(Complex::zero(), |acc, i| acc + self[(i, i)])
    }

    pub fn mul_vec(&self, v: &[Cplx<T>]) -> Vec<Cplx<T>> {
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(Complex::zero(), |acc, j| acc + self[(i, j)] * v[j])
            })
            .collect()
    }

    /// `self - z·I`.
    pub fn shifted(&self, z: Cplx<T>) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out[(i, i)] = out[(i, i)] - z;
        }
        out
    }

    pub fn lu(&self) -> Lu<T> {
        Lu::factor(self.clone())
    }
}

impl<T> Index<(usize, usize)> for CMatrix<T> {
    type Output = Cplx<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Cplx<T> {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cplx<T> {
        &mut self.data[i * self.n + j]
    }
}

/// LU factorization with partial pivoting, `P·A = L·U`.
#[derive(Clone, Debug)]
pub struct Lu<T> {
    lu: CMatrix<T>,
    perm: Vec<usize>,
    zero_pivot: bool,
}

impl<T: Real> Lu<T> {
    fn factor(mut a: CMatrix<T>) -> Self {
        let n = a.n;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut zero_pivot = false;
        for k in 0..n {
            let mut p = k;
            let mut best = a[(k, k)].norm();
            for i in k + 1..n {
                let v = a[(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = a[(k, k)];
            if pivot.is_zero() {
                zero_pivot = true;
                continue;
            }
            for i in k + 1..n {
                let f = a[(i, k)] / pivot;
                a[(i, k)] = f;
                for j in k + 1..n {
                    let u = a[(k, j)];
                    a[(i, j)] = a[(i, j)] - f * u;
                }
            }
        }
        Self { lu: a, perm, zero_pivot }
    }

    /// True when some pivot was exactly zero (the matrix is numerically singular).
    pub fn is_singular(&self) -> bool {
        self.zero_pivot
    }

    /// Replaces pivots smaller than `floor` in magnitude by `floor`.
    ///
    /// Used by inverse iteration, where the shift is an eigenvalue and an
    /// exactly singular factor must still produce a (huge) solution.
    pub fn regularize(&mut self, floor: T) {
        let n = self.lu.n;
        for k in 0..n {
            if self.lu[(k, k)].norm() < floor {
                let z = self.lu[(k, k)];
                self.lu[(k, k)] = if z.is_zero() {
                    Complex::new(floor, T::zero())
                } else {
                    z.unscale(z.norm()).scale(floor)
                };
            }
        }
        self.zero_pivot = false;
    }

    /// Solves `A x = b`; `None` if a zero pivot was met.
    pub fn solve(&self, b: &[Cplx<T>]) -> Option<Vec<Cplx<T>>> {
        if self.zero_pivot {
            return None;
        }
        let n = self.lu.n;
        let mut x: Vec<Cplx<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] = x[i] - self.lu[(i, j)] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] = x[i] - self.lu[(i, j)] * x[j];
            }
            x[i] = x[i] / self.lu[(i, i)];
        }
        Some(x)
    }

    /// `tr(A⁻¹)`; `None` if singular.
    pub fn trace_of_inverse(&self) -> Option<Cplx<T>> {
        if self.zero_pivot {
            return None;
        }
        let n = self.lu.n;
        let mut tr = Complex::zero();
        let mut e = vec![Complex::zero(); n];
        for j in 0..n {
            e[j] = Complex::new(T::one(), T::zero());
            let col = self.solve(&e)?;
            tr = tr + col[j];
            e[j] = Complex::zero();
        }
        Some(tr)
    }

    pub fn determinant(&self) -> Cplx<T> {
        let n = self.lu.n;
        let mut det = Complex::new(T::one(), T::zero());
        for k in 0..n {
            det = det * self.lu[(k, k)];
        }
        // permutation parity
        let mut seen = vec![false; n];
        let mut odd = false;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                j = self.perm[j];
                len += 1;
            }
            if len % 2 == 0 {
                odd = !odd;
            }
        }
        if odd {
            -det
        } else {
            det
        }
    }
}
