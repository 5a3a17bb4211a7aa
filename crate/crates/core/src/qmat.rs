//! Small complex-matrix helpers for qubit strategies.
//!
//! All strategies in this crate live in the X-Z plane of the Bloch sphere, so
//! matrices are real in practice, but the representation stays complex
//! Hermitian for generality.

use ndarray::prelude::*;
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64;

pub type CMat = Array2<Complex64>;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn id(n: usize) -> CMat {
    Array2::eye(n).mapv(c)
}

pub fn pauli_x() -> CMat {
    array![[c(0.0), c(1.0)], [c(1.0), c(0.0)]]
}

pub fn pauli_z() -> CMat {
    array![[c(1.0), c(0.0)], [c(0.0), c(-1.0)]]
}

pub fn pauli_y() -> CMat {
    array![
        [Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
        [Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)]
    ]
}

/// `|phi+><phi+|` with `|phi+> = (|00> + |11>)/sqrt(2)`.
pub fn phi_plus() -> CMat {
    let mut m = Array2::zeros((4, 4)).mapv(c);
    for &i in &[0usize, 3usize] {
        for &j in &[0usize, 3usize] {
            m[[i, j]] = c(0.5);
        }
    }
    m
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    let mut out = Array2::zeros((ra * rb, ca * cb)).mapv(c);
    for i in 0..ra {
        for j in 0..ca {
            for k in 0..rb {
                for l in 0..cb {
                    out[[i * rb + k, j * cb + l]] = a[[i, j]] * b[[k, l]];
                }
            }
        }
    }
    out
}

pub fn dagger(m: &CMat) -> CMat {
    m.t().mapv(|z| z.conj())
}

pub fn trace(m: &CMat) -> Complex64 {
    m.diag().sum()
}

/// `Tr[rho op]` as a real number (callers pass Hermitian arguments).
pub fn expectation(rho: &CMat, op: &CMat) -> f64 {
    trace(&rho.dot(op)).re
}

pub fn is_hermitian(m: &CMat, tol: f64) -> bool {
    let d = &dagger(m) - m;
    d.iter().all(|z| z.norm() <= tol)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let (vals, _) = m.eigh(UPLO::Lower).expect("hermitian eigendecomposition");
    vals.to_vec()
}

pub fn min_eigenvalue(m: &CMat) -> f64 {
    hermitian_eigenvalues(m)[0]
}

pub fn is_psd(m: &CMat, tol: f64) -> bool {
    is_hermitian(m, tol) && min_eigenvalue(m) >= -tol
}

/// Conjugates a qubit operator by the Bloch-sphere rotation that maps
/// `Z -> cos(t) Z + sin(t) X` and `X -> cos(t) X - sin(t) Z`.
pub fn rotate_xz(m: &CMat, t: f64) -> CMat {
    let (ch, sh) = ((t / 2.0).cos(), (t / 2.0).sin());
    let u = array![[c(ch), c(-sh)], [c(sh), c(ch)]];
    u.dot(m).dot(&dagger(&u))
}

/// Projectors `(1 + obs)/2, (1 - obs)/2` of a dichotomic observable.
pub fn observable_effects(obs: &CMat) -> (CMat, CMat) {
    let one = id(obs.nrows());
    let plus = (&one + obs).mapv(|z| z * 0.5);
    let minus = (&one - obs).mapv(|z| z * 0.5);
    (plus, minus)
}

pub fn scale(m: &CMat, w: f64) -> CMat {
    m.mapv(|z| z * w)
}
