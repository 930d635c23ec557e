#![allow(dead_code)]

use heattrace_core::catalog;
use heattrace_core::chambers::{choose_positive_system, PositiveSystem};
use heattrace_core::linalg;
use heattrace_core::rootdata::{CartanDatum, HighestWeight, RestrictedRoot};
use heattrace_core::Vec0;

/// su(2,1): A2 with a single compact root pair.
pub fn su21() -> CartanDatum {
    let s3 = 3f64.sqrt();
    CartanDatum::from_positive(
        "su21",
        2,
        0,
        0,
        vec![
            RestrictedRoot::new(&[2.0, 0.0], 0, 1),
            RestrictedRoot::new(&[-1.0, s3], 1, 0),
            RestrictedRoot::new(&[1.0, s3], 1, 0),
        ],
    )
}

/// B2 with every root noncompact.
pub fn b2_split() -> CartanDatum {
    CartanDatum::from_positive(
        "b2-split",
        2,
        0,
        0,
        vec![
            RestrictedRoot::new(&[2.0, 0.0], 1, 0),
            RestrictedRoot::new(&[0.0, 2.0], 1, 0),
            RestrictedRoot::new(&[1.0, 1.0], 1, 0),
            RestrictedRoot::new(&[1.0, -1.0], 1, 0),
        ],
    )
}

pub fn data() -> Vec<CartanDatum> {
    let mut v: Vec<CartanDatum> = catalog::all().into_iter().map(|e| e.datum).collect();
    v.push(su21());
    v.push(b2_split());
    v
}

pub fn zero_weight(d: &CartanDatum) -> HighestWeight {
    HighestWeight::new(&vec![0.0; d.r0])
}

pub fn system(d: &CartanDatum) -> PositiveSystem {
    choose_positive_system(d, None, &zero_weight(d)).unwrap()
}

pub fn systems() -> Vec<PositiveSystem> {
    data().iter().map(system).collect()
}

/// Takes the first r0 entries of a long random vector.
pub fn vec_of(raw: &[f64], r0: usize) -> Vec0 {
    linalg::from_slice(&raw[..r0])
}

/// sum c_j omega_j with negative draws clamped to zero, so faces get hit.
pub fn dominant_from(ps: &PositiveSystem, raw: &[f64]) -> Vec0 {
    let mut y = linalg::zeros(ps.datum.r0);
    for (w, &c) in ps.coweights.iter().zip(raw) {
        y.axpy(c.max(0.0), w, 1.0);
    }
    y
}

/// sum c_j alpha_j over the simple roots, negative draws clamped to zero.
pub fn dual_cone_from(ps: &PositiveSystem, raw: &[f64]) -> Vec0 {
    let mut y = linalg::zeros(ps.datum.r0);
    for (&i, &c) in ps.simple_g.iter().zip(raw) {
        y.axpy(c.max(0.0), ps.root(i), 1.0);
    }
    y
}
