//! Rank-one catalog data recomputed from explicit matrix models of g = k + p.
//!
//! For a unit generator E of t (norm from B = tr/2), ad(E)^2 acts on k and p
//! with eigenvalues -w^2; the |w| > 0 eigenspaces come in pairs and give the
//! restricted roots with their k and p multiplicities.

use heattrace_core::catalog;
use heattrace_core::rootdata::CartanDatum;
use nalgebra::DMatrix;

type M = DMatrix<f64>;

/// <X, Y> = tr(X^T Y) / scale, chosen so the model's B-norm is recovered.
fn ip(x: &M, y: &M, scale: f64) -> f64 {
    x.dot(y) / scale
}

fn orthonormal(span: Vec<M>, scale: f64) -> Vec<M> {
    let mut out: Vec<M> = Vec::new();
    for mut v in span {
        for b in &out {
            let c = ip(b, &v, scale);
            v -= b * c;
        }
        let n = ip(&v, &v, scale).sqrt();
        if n > 1e-10 {
            out.push(v / n);
        }
    }
    out
}

/// Sorted |w| over an orthonormal basis of an ad(E)-stable subspace.
fn weights(e: &M, basis: &[M], scale: f64) -> Vec<f64> {
    let n = basis.len();
    let ad = DMatrix::from_fn(n, n, |i, j| {
        let br = e * &basis[j] - &basis[j] * e;
        ip(&basis[i], &br, scale)
    });
    let sq = ad.transpose() * &ad;
    let mut w: Vec<f64> = sq.symmetric_eigen().eigenvalues.iter().map(|x| x.max(0.0).sqrt()).collect();
    w.sort_by(|a, b| a.partial_cmp(b).unwrap());
    w
}

/// The same multisets read off a rank-one datum.
fn expected(d: &CartanDatum) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(d.r0, 1);
    let mut p = vec![0.0; d.dim_a];
    let mut k = vec![0.0; d.r0 + d.dim_tg];
    for r in &d.roots {
        let a = r.v[0].abs();
        p.extend(std::iter::repeat_n(a, r.mult_p as usize));
        k.extend(std::iter::repeat_n(a, r.mult_k as usize));
    }
    p.sort_by(|a, b| a.partial_cmp(b).unwrap());
    k.sort_by(|a, b| a.partial_cmp(b).unwrap());
    (p, k)
}

fn assert_close(got: &[f64], want: &[f64], what: &str) {
    assert_eq!(got.len(), want.len(), "{what}: {got:?} vs {want:?}");
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() < 1e-10, "{what}: {got:?} vs {want:?}");
    }
}

fn unit(n: usize, i: usize, j: usize) -> M {
    let mut m = M::zeros(n, n);
    m[(i, j)] = 1.0;
    m
}

fn check(name: &str, e: &M, k: Vec<M>, p: Vec<M>, scale: f64) {
    assert!((ip(e, e, scale) - 1.0).abs() < 1e-12, "E is not a unit vector");
    let d = catalog::builtin(name).unwrap().datum;
    let (kb, pb) = (orthonormal(k, scale), orthonormal(p, scale));
    assert_eq!(pb.len(), d.m(), "{name}: dim p");
    let (wp, wk) = expected(&d);
    assert_close(&weights(e, &pb, scale), &wp, &format!("{name} on p"));
    assert_close(&weights(e, &kb, scale), &wk, &format!("{name} on k"));
}

#[test]
fn sl2r_from_two_by_two_real_matrices() {
    let e = unit(2, 0, 1) - unit(2, 1, 0);
    let k = vec![e.clone()];
    let p = vec![unit(2, 0, 0) - unit(2, 1, 1), unit(2, 0, 1) + unit(2, 1, 0)];
    check("sl2R", &e, k, p, 2.0);
}

#[test]
fn sl3r_from_three_by_three_real_matrices() {
    let e = unit(3, 0, 1) - unit(3, 1, 0);
    let mut k = Vec::new();
    let mut p = vec![unit(3, 0, 0) - unit(3, 1, 1), unit(3, 1, 1) - unit(3, 2, 2)];
    for i in 0..3 {
        for j in i + 1..3 {
            k.push(unit(3, i, j) - unit(3, j, i));
            p.push(unit(3, i, j) + unit(3, j, i));
        }
    }
    check("sl3R", &e, k, p, 2.0);
}

/// Complex 2x2 matrices A + iB as the real 4x4 block [[A, -B], [B, A]].
fn complex(re: [[f64; 2]; 2], im: [[f64; 2]; 2]) -> M {
    M::from_fn(4, 4, |i, j| {
        let (a, b) = (re[i % 2][j % 2], im[i % 2][j % 2]);
        match (i / 2, j / 2) {
            (0, 0) | (1, 1) => a,
            (0, 1) => -b,
            _ => b,
        }
    })
}

#[test]
fn sl2c_as_a_real_lie_algebra() {
    let z = [[0.0; 2]; 2];
    let s1 = [[0.0, 1.0], [1.0, 0.0]];
    let s3 = [[1.0, 0.0], [0.0, -1.0]];
    // sigma_2 = [[0, -i], [i, 0]] has zero real part.
    let s2_im = [[0.0, -1.0], [1.0, 0.0]];
    let s2 = (z, s2_im);
    // Hermitian traceless matrices span p, i times them span k = su(2).
    let p = vec![complex(s1, z), complex(s3, z), complex(s2.0, s2.1)];
    let k = vec![complex(z, s1), complex(z, s3), complex([[0.0, 1.0], [-1.0, 0.0]], z)];
    let e = complex(z, s3);
    // The real embedding doubles traces.
    check("sl2C", &e, k, p, 4.0);
}
