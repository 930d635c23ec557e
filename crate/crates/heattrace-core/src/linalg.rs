//! Dense helpers for the small subspaces of t0 (rank at most a handful).

use alloc::vec::Vec;
use core::cmp::Ordering;

use nalgebra::{DMatrix, DVector};

use crate::Vec0;

pub fn zeros(n: usize) -> Vec0 {
    DVector::zeros(n)
}

pub fn from_slice(v: &[f64]) -> Vec0 {
    DVector::from_column_slice(v)
}

/// Modified Gram-Schmidt; vectors whose residual norm is below `tol` are dropped.
pub fn orthonormalize(vectors: &[Vec0], dim: usize, tol: f64) -> Vec<Vec0> {
    let mut out: Vec<Vec0> = Vec::new();
    for v in vectors {
        let mut r = v.clone();
        // two passes keep the basis orthogonal to machine precision
        for _ in 0..2 {
            for q in &out {
                let c = q.dot(&r);
                r.axpy(-c, q, 1.0);
            }
        }
        let n = r.norm();
        if n > tol {
            out.push(r / n);
        }
    }
    debug_assert!(out.iter().all(|q| q.len() == dim));
    out
}

/// Orthogonal projector onto the span of an orthonormal basis.
pub fn projector(basis: &[Vec0], dim: usize) -> DMatrix<f64> {
    let mut p = DMatrix::zeros(dim, dim);
    for q in basis {
        p += q * q.transpose();
    }
    p
}

pub fn gram(vectors: &[Vec0]) -> DMatrix<f64> {
    let k = vectors.len();
    DMatrix::from_fn(k, k, |i, j| vectors[i].dot(&vectors[j]))
}

/// The basis of span(vectors) dual to `vectors`: `<v_i, w_j> = delta_ij`.
pub fn dual_basis(vectors: &[Vec0]) -> Option<Vec<Vec0>> {
    if vectors.is_empty() {
        return Some(Vec::new());
    }
    let ginv = gram(vectors).try_inverse()?;
    let k = vectors.len();
    Some(
        (0..k)
            .map(|j| {
                let mut w = zeros(vectors[0].len());
                for i in 0..k {
                    w.axpy(ginv[(i, j)], &vectors[i], 1.0);
                }
                w
            })
            .collect(),
    )
}

/// Coefficients `c` with `x = sum c_i v_i`, assuming x lies in the span of
/// linearly independent `vectors`.
pub fn coefficients(vectors: &[Vec0], x: &Vec0) -> Option<Vec<f64>> {
    if vectors.is_empty() {
        return Some(Vec::new());
    }
    let ginv = gram(vectors).try_inverse()?;
    let rhs = DVector::from_iterator(vectors.len(), vectors.iter().map(|v| v.dot(x)));
    Some((ginv * rhs).iter().copied().collect())
}

/// Coordinates of `x` in an orthonormal basis.
pub fn coords(basis: &[Vec0], x: &Vec0) -> Vec<f64> {
    basis.iter().map(|q| q.dot(x)).collect()
}

/// `sum c_i q_i`.
pub fn combine(basis: &[Vec0], c: &[f64], dim: usize) -> Vec0 {
    let mut y = zeros(dim);
    for (q, &ci) in basis.iter().zip(c) {
        y.axpy(ci, q, 1.0);
    }
    y
}

/// Absolute determinant of `generators` expressed in the orthonormal `basis`
/// of the subspace they span.
pub fn abs_det_in_basis(generators: &[Vec0], basis: &[Vec0]) -> f64 {
    let k = basis.len();
    if k == 0 {
        return 1.0;
    }
    let m = DMatrix::from_fn(k, k, |i, j| basis[i].dot(&generators[j]));
    m.determinant().abs()
}

/// Lexicographic order with a tolerance on each entry.
pub fn cmp_lex(a: &[f64], b: &[f64], tol: f64) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if (x - y).abs() > tol {
            return x.partial_cmp(y).unwrap_or(Ordering::Equal);
        }
    }
    a.len().cmp(&b.len())
}

pub fn approx_eq(a: &Vec0, b: &Vec0, tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b.iter()).all(|(x, y)| (x - y).abs() <= tol)
}
