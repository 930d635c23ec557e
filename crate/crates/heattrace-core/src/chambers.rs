//! Positive systems, chamber geometry, cone projection, Langlands'
//! combinatorial lemma, Vogan's Lambda map and the W(g) = W(g,k) W(k)
//! factorisation.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::linalg;
use crate::rootdata::{
    check_k_dominant_integral, generic_vector, half_sum, simple_roots_of, validate_datum,
    CartanDatum, HighestWeight, WeylGroup, ROOT_MATCH_TOL,
};
use crate::{Error, Result, Vec0, GROUP_CAP, TAU_ZERO};

#[derive(Debug, Clone, PartialEq)]
pub struct PositiveSystem {
    pub datum: CartanDatum,
    /// `positive[i]` tells whether root `i` lies in R+(g).
    pub positive: Vec<bool>,
    pub pos_g: Vec<usize>,
    pub pos_k: Vec<usize>,
    /// Simple roots of R+(g), in root-index order.
    pub simple_g: Vec<usize>,
    /// `coweights[j]` is dual to `simple_g[j]` inside t0^g.
    pub coweights: Vec<Vec0>,
    pub rho_g: Vec0,
    pub rho_k: Vec0,
    pub c_g: f64,
    /// W(g) generated by the reflections in `simple_g`.
    pub wg: WeylGroup,
    /// W(k) generated by the simple roots of R+(k).
    pub wk: WeylGroup,
    /// Position of each element of `wk` inside `wg`.
    pub wk_in_g: Vec<usize>,
    pub tau: f64,
    /// Human-readable record of every sign that needed a tie-break.
    pub tie_break: Vec<String>,
}

impl PositiveSystem {
    /// Completes a choice of R+(g) (one root from every +- pair).
    pub fn from_positive(
        datum: CartanDatum,
        positive: Vec<bool>,
        tie_break: Vec<String>,
    ) -> Result<Self> {
        let nroots = datum.roots.len();
        for i in 0..nroots {
            let j = datum.find_root(&(-&datum.roots[i].v)).ok_or(Error::NotARoot)?;
            if positive[i] == positive[j] {
                return Err(Error::IncompatibleSystem);
            }
        }
        let pos_g: Vec<usize> = (0..nroots).filter(|&i| positive[i]).collect();
        let pos_k: Vec<usize> = pos_g
            .iter()
            .copied()
            .filter(|&i| datum.roots[i].is_k())
            .collect();
        let simple_g = simple_roots_of(&datum, &pos_g);
        let simple_vecs: Vec<Vec0> = simple_g.iter().map(|&i| datum.roots[i].v.clone()).collect();
        let coweights = linalg::dual_basis(&simple_vecs).ok_or(Error::IncompatibleSystem)?;
        // every positive root must be a nonnegative combination of the simple ones
        for &i in &pos_g {
            let c = linalg::coefficients(&simple_vecs, &datum.roots[i].v)
                .ok_or(Error::IncompatibleSystem)?;
            if c.iter().any(|&x| x < -ROOT_MATCH_TOL) {
                return Err(Error::IncompatibleSystem);
            }
        }
        let rho_g = half_sum(&datum, &pos_g, |r| r.dim());
        let rho_k = half_sum(&datum, &pos_k, |_| 1);
        let c_g = rho_g.norm_squared();
        let wg = WeylGroup::generate(&datum, &simple_g, GROUP_CAP)?;
        let wk = WeylGroup::generate(&datum, &simple_roots_of(&datum, &pos_k), GROUP_CAP)?;
        let wk_in_g = wk
            .iter()
            .map(|e| wg.index_of_perm(&e.perm).ok_or(Error::IncompatibleSystem))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            datum,
            positive,
            pos_g,
            pos_k,
            simple_g,
            coweights,
            rho_g,
            rho_k,
            c_g,
            wg,
            wk,
            wk_in_g,
            tau: TAU_ZERO,
            tie_break,
        })
    }

    pub fn root(&self, i: usize) -> &Vec0 {
        &self.datum.roots[i].v
    }

    pub fn simple_vectors(&self) -> Vec<Vec0> {
        self.simple_g.iter().map(|&i| self.root(i).clone()).collect()
    }

    /// Positive p-roots, each +- pair counted once.
    pub fn pos_p(&self) -> Vec<usize> {
        self.pos_g
            .iter()
            .copied()
            .filter(|&i| self.datum.roots[i].is_p())
            .collect()
    }

    /// pi^k(Y) = prod over R+(k) of <alpha, Y>.
    pub fn pi_k(&self, y: &Vec0) -> f64 {
        self.pos_k.iter().map(|&i| self.root(i).dot(y)).product()
    }

    /// pi^g(Y) = prod over R+(g) of <alpha, Y>^{dim g_alpha}.
    pub fn pi_g(&self, y: &Vec0) -> f64 {
        self.pos_g
            .iter()
            .map(|&i| libm::pow(self.root(i).dot(y), self.datum.roots[i].dim() as f64))
            .product()
    }

    /// Closed dominance test against the simple roots.
    pub fn is_dominant(&self, v: &Vec0) -> bool {
        self.simple_g.iter().all(|&i| self.root(i).dot(v) >= -self.tau)
    }

    /// Sum of the fundamental coweights: an interior point of C+(g).
    pub fn interior_point(&self) -> Vec0 {
        let mut y = linalg::zeros(self.datum.r0);
        for w in &self.coweights {
            y += w;
        }
        y
    }

    /// Every positive system containing R+(k) for which `v` is dominant.
    pub fn alternatives(&self, v: &Vec0) -> Result<Vec<PositiveSystem>> {
        let mut out: Vec<PositiveSystem> = Vec::new();
        for w in self.wg.iter() {
            let mut positive = alloc::vec![false; self.positive.len()];
            for &i in &self.pos_g {
                positive[w.perm[i]] = true;
            }
            if self.pos_k.iter().any(|&i| !positive[i]) {
                continue;
            }
            let simple = simple_roots_of(&self.datum, &(0..positive.len()).filter(|&i| positive[i]).collect::<Vec<_>>());
            if simple.iter().any(|&i| self.root(i).dot(v) < -self.tau) {
                continue;
            }
            if out.iter().any(|p| p.positive == positive) {
                continue;
            }
            out.push(PositiveSystem::from_positive(
                self.datum.clone(),
                positive,
                alloc::vec![String::from("alternative chamber")],
            )?);
        }
        Ok(out)
    }
}

fn signed_key(keys: &[f64], tau: f64) -> Option<(bool, usize)> {
    keys.iter()
        .enumerate()
        .find(|(_, k)| k.abs() > tau)
        .map(|(level, &k)| (k > 0.0, level))
}

/// Chooses R+(g) containing R+(k) with lambda + 2 rho^k dominant, breaking
/// ties deterministically by g1 = rho^k + sum 2^{-i} e_i, then
/// g2 = sum 3^{-i} e_i.
pub fn choose_positive_system(
    datum: &CartanDatum,
    pos_k: Option<&[usize]>,
    lambda: &HighestWeight,
) -> Result<PositiveSystem> {
    validate_datum(datum)?;
    let tau = TAU_ZERO;
    let r0 = datum.r0;
    let kroots = datum.k_roots();
    let mut g2 = DVector::from_fn(r0, |i, _| libm::pow(3.0, -(i as f64 + 1.0)));
    if datum.roots.iter().any(|r| r.v.dot(&g2).abs() <= 1e-6) {
        g2 = generic_vector(datum, &(0..datum.roots.len()).collect::<Vec<_>>());
    }
    let pos_k: Vec<usize> = match pos_k {
        Some(p) => p.to_vec(),
        None => kroots
            .iter()
            .copied()
            .filter(|&i| {
                let a = &datum.roots[i].v;
                signed_key(&[a.dot(&lambda.lambda), a.dot(&g2)], tau)
                    .map(|(s, _)| s)
                    .unwrap_or(false)
            })
            .collect(),
    };
    if pos_k.len() * 2 != kroots.len() {
        return Err(Error::IncompatibleSystem);
    }
    check_k_dominant_integral(datum, &pos_k, &lambda.lambda)?;
    let rho_k = half_sum(datum, &pos_k, |_| 1);
    let v = &lambda.lambda + &rho_k * 2.0;
    let g1 = &rho_k + DVector::from_fn(r0, |i, _| libm::pow(2.0, -(i as f64 + 1.0)));

    let mut positive = alloc::vec![false; datum.roots.len()];
    let mut trace = Vec::new();
    for (i, r) in datum.roots.iter().enumerate() {
        let keys = [r.v.dot(&v), r.v.dot(&g1), r.v.dot(&g2)];
        let (sign, level) = signed_key(&keys, tau).ok_or(Error::IncompatibleSystem)?;
        positive[i] = sign;
        if level > 0 && sign {
            let coords: Vec<String> = r.v.iter().map(|x| format!("{x:.6}")).collect();
            trace.push(format!(
                "root ({}) orthogonal to lambda+2rho_k; made positive by g{}",
                coords.join(", "),
                level
            ));
        }
    }
    if pos_k.iter().any(|&i| !positive[i]) {
        return Err(Error::IncompatibleSystem);
    }
    let ps = PositiveSystem::from_positive(datum.clone(), positive, trace)?;
    if !ps.is_dominant(&v) {
        return Err(Error::IncompatibleSystem);
    }
    Ok(ps)
}

/// Nearest point of C+(g) to `v`, with the active simple roots and the
/// multipliers `c >= 0` such that `v* = v + sum c_i alpha_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeProjection {
    pub vstar: Vec0,
    pub active: Vec<usize>,
    pub multipliers: Vec<f64>,
}

/// Exact projection onto C+(g) by enumerating the faces of the cone.
pub fn cone_project_full(ps: &PositiveSystem, v: &Vec0) -> ConeProjection {
    let s = ps.simple_vectors();
    let k = s.len();
    let scale = 1.0 + v.norm();
    let mut best: Option<(f64, ConeProjection)> = None;
    for mask in 0u32..(1u32 << k) {
        let active: Vec<usize> = (0..k).filter(|&i| mask & (1 << i) != 0).collect();
        let sa: Vec<Vec0> = active.iter().map(|&i| s[i].clone()).collect();
        let c = if sa.is_empty() {
            Vec::new()
        } else {
            let ginv = match linalg::gram(&sa).try_inverse() {
                Some(g) => g,
                None => continue,
            };
            let rhs = DVector::from_iterator(sa.len(), sa.iter().map(|a| a.dot(v)));
            (-(ginv * rhs)).iter().copied().collect::<Vec<f64>>()
        };
        if c.iter().any(|&x| x < -1e-12 * scale) {
            continue;
        }
        let mut y = v.clone();
        for (a, &ci) in sa.iter().zip(&c) {
            y.axpy(ci, a, 1.0);
        }
        if s.iter().any(|a| a.dot(&y) < -1e-12 * scale * a.norm()) {
            continue;
        }
        let dist = (&y - v).norm();
        if best.as_ref().is_none_or(|(d, _)| dist < *d) {
            best = Some((
                dist,
                ConeProjection {
                    vstar: y,
                    active,
                    multipliers: c,
                },
            ));
        }
    }
    best.map(|(_, p)| p).unwrap_or(ConeProjection {
        vstar: v.clone(),
        active: Vec::new(),
        multipliers: Vec::new(),
    })
}

pub fn cone_project(ps: &PositiveSystem, v: &Vec0) -> Vec0 {
    cone_project_full(ps, v).vstar
}

/// A pair Delta1 subset Delta2 of simple roots with the orthogonal splitting
/// t0 = t0^1 + t1^2 + t2^g + t_g it induces.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplePair {
    /// Root indices.
    pub delta1: Vec<usize>,
    pub delta2: Vec<usize>,
    pub t01: Vec<Vec0>,
    pub t12: Vec<Vec0>,
    pub t2g: Vec<Vec0>,
    pub tg: Vec<Vec0>,
    pub p01: DMatrix<f64>,
    pub p12: DMatrix<f64>,
    pub p2g: DMatrix<f64>,
}

impl SimplePair {
    pub fn new(ps: &PositiveSystem, delta1: &[usize], delta2: &[usize]) -> Self {
        let d = &ps.datum;
        let r0 = d.r0;
        let v = |i: usize| d.roots[i].v.clone();
        let mut seq: Vec<Vec0> = delta1.iter().map(|&i| v(i)).collect();
        let n1 = linalg::orthonormalize(&seq, r0, 1e-10).len();
        seq.extend(delta2.iter().filter(|i| !delta1.contains(i)).map(|&i| v(i)));
        let n2 = linalg::orthonormalize(&seq, r0, 1e-10).len();
        seq.extend(ps.simple_g.iter().filter(|i| !delta2.contains(i)).map(|&i| v(i)));
        let ng = linalg::orthonormalize(&seq, r0, 1e-10).len();
        let first_tg = r0 - d.dim_tg;
        seq.extend((first_tg..r0).map(|j| {
            let mut e = linalg::zeros(r0);
            e[j] = 1.0;
            e
        }));
        let q = linalg::orthonormalize(&seq, r0, 1e-10);
        let t01 = q[..n1].to_vec();
        let t12 = q[n1..n2].to_vec();
        let t2g = q[n2..ng].to_vec();
        let tg = q[ng..].to_vec();
        Self {
            delta1: delta1.to_vec(),
            delta2: delta2.to_vec(),
            p01: linalg::projector(&t01, r0),
            p12: linalg::projector(&t12, r0),
            p2g: linalg::projector(&t2g, r0),
            t01,
            t12,
            t2g,
            tg,
        }
    }

    pub fn r01(&self) -> usize {
        self.t01.len()
    }

    pub fn r12(&self) -> usize {
        self.t12.len()
    }

    fn coweight(ps: &PositiveSystem, root: usize) -> &Vec0 {
        let j = ps.simple_g.iter().position(|&i| i == root).expect("simple root");
        &ps.coweights[j]
    }

    /// Generators P01 omega_alpha of the chamber C0^1 inside t0^1.
    pub fn c01_generators(&self, ps: &PositiveSystem) -> Vec<Vec0> {
        self.delta1
            .iter()
            .map(|&i| &self.p01 * Self::coweight(ps, i))
            .collect()
    }

    /// The obtuse basis P12 alpha (alpha in Delta2 \ Delta1).
    pub fn delta12(&self, ps: &PositiveSystem) -> Vec<Vec0> {
        self.delta2
            .iter()
            .filter(|i| !self.delta1.contains(i))
            .map(|&i| &self.p12 * ps.root(i))
            .collect()
    }

    /// The acute basis P12 omega_alpha generating C1^2.
    pub fn c12_generators(&self, ps: &PositiveSystem) -> Vec<Vec0> {
        self.delta2
            .iter()
            .filter(|i| !self.delta1.contains(i))
            .map(|&i| &self.p12 * Self::coweight(ps, i))
            .collect()
    }

    /// Projection onto t0^2 = t0^1 + t1^2.
    pub fn p02(&self) -> DMatrix<f64> {
        &self.p01 + &self.p12
    }

    /// Whether a root lies in span(Delta1) / span(Delta2).
    pub fn in_t01(&self, v: &Vec0) -> bool {
        (&self.p01 * v - v).norm() <= ROOT_MATCH_TOL
    }

    pub fn in_t02(&self, v: &Vec0) -> bool {
        (self.p02() * v - v).norm() <= ROOT_MATCH_TOL
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LanglandsDecomposition {
    pub pair: SimplePair,
    pub v01: Vec0,
    pub v2: Vec0,
    pub vstar: Vec0,
    /// Coefficients of `vstar - v` in the simple roots (in `simple_g` order).
    pub coeffs: Vec<f64>,
}

/// Splits v = v01 + v2 with v2 the projection of v onto C+(g).
pub fn langlands_decompose(ps: &PositiveSystem, v: &Vec0) -> Result<LanglandsDecomposition> {
    let tau = ps.tau;
    let proj = cone_project_full(ps, v);
    let vstar = proj.vstar;
    let diff = &vstar - v;
    let simple = ps.simple_vectors();
    let coeffs = linalg::coefficients(&simple, &diff).ok_or(Error::IncompatibleSystem)?;
    let mut delta1 = Vec::new();
    let mut delta2 = Vec::new();
    for (j, &i) in ps.simple_g.iter().enumerate() {
        let c = coeffs[j];
        if c > tau && c < 10.0 * tau {
            return Err(Error::ToleranceAmbiguity {
                what: "Langlands coefficient",
                value: c,
            });
        }
        if c > tau {
            delta1.push(i);
        }
        let p = vstar.dot(ps.root(i));
        if p.abs() > tau && p.abs() < 10.0 * tau {
            return Err(Error::ToleranceAmbiguity {
                what: "pairing of the projection with a simple root",
                value: p,
            });
        }
        if p.abs() <= tau {
            delta2.push(i);
        }
    }
    if delta1.iter().any(|i| !delta2.contains(i)) {
        return Err(Error::ToleranceAmbiguity {
            what: "Delta1 not contained in Delta2",
            value: 0.0,
        });
    }
    let pair = SimplePair::new(ps, &delta1, &delta2);
    Ok(LanglandsDecomposition {
        pair,
        v01: v - &vstar,
        v2: vstar.clone(),
        vstar,
        coeffs,
    })
}

/// Parabolic bookkeeping attached to a simple pair.
#[derive(Debug, Clone, PartialEq)]
pub struct LeviData {
    pub delta1: Vec<usize>,
    /// R0^1: roots in span(Delta1).
    pub roots_l1: Vec<usize>,
    pub pos_l1: Vec<usize>,
    pub pos_k1: Vec<usize>,
    /// Positive roots in span(Delta2) but not span(Delta1).
    pub pos_12: Vec<usize>,
    /// Positive roots outside span(Delta2).
    pub pos_2: Vec<usize>,
    pub dim_u12: usize,
    pub dim_u2: usize,
    pub dim_m1: usize,
    pub lambda_restricted: Vec0,
    pub rho_k1: Vec0,
    pub rho_m1: Vec0,
    /// max(|rho^{k1} - P01 rho^k|, |rho^{m1} - P01 rho^g|); zero up to rounding.
    pub rho_residual: f64,
}

impl LeviData {
    /// -(dim m1 + dim u1^2)/2.
    pub fn beta1_bar(&self) -> f64 {
        -0.5 * (self.dim_m1 + self.dim_u12) as f64
    }
}

pub fn levi_data(ps: &PositiveSystem, pair: &SimplePair, lambda: &HighestWeight) -> LeviData {
    let d = &ps.datum;
    let roots_l1: Vec<usize> = (0..d.roots.len())
        .filter(|&i| pair.in_t01(&d.roots[i].v))
        .collect();
    let pos_l1: Vec<usize> = ps
        .pos_g
        .iter()
        .copied()
        .filter(|i| roots_l1.contains(i))
        .collect();
    let pos_k1: Vec<usize> = pos_l1
        .iter()
        .copied()
        .filter(|&i| d.roots[i].is_k())
        .collect();
    let (in2, out2): (Vec<usize>, Vec<usize>) = ps
        .pos_g
        .iter()
        .copied()
        .partition(|&i| pair.in_t02(&d.roots[i].v));
    let pos_12: Vec<usize> = in2.into_iter().filter(|i| !roots_l1.contains(i)).collect();
    let dim_u12 = pos_12.iter().map(|&i| d.roots[i].dim()).sum();
    let dim_u2 = out2.iter().map(|&i| d.roots[i].dim()).sum();
    let p1 = roots_l1.iter().filter(|&&i| d.roots[i].is_p()).count();
    let k1 = roots_l1.iter().filter(|&&i| d.roots[i].is_k()).count();
    let dim_m1 = d.dim_a + p1 + pair.r01() + k1;
    let rho_k1 = half_sum(d, &pos_k1, |_| 1);
    let rho_m1 = half_sum(d, &pos_l1, |r| r.dim());
    let rho_residual = (&rho_k1 - &pair.p01 * &ps.rho_k)
        .norm()
        .max((&rho_m1 - &pair.p01 * &ps.rho_g).norm());
    LeviData {
        delta1: pair.delta1.clone(),
        roots_l1,
        pos_l1,
        pos_k1,
        pos_12,
        pos_2: out2,
        dim_u12,
        dim_u2,
        dim_m1,
        lambda_restricted: &pair.p01 * &lambda.lambda,
        rho_k1,
        rho_m1,
        rho_residual,
    }
}

/// The datum of (L^2, K^2) with lambda restricted to t0^2.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiSplitReduction {
    pub datum: CartanDatum,
    pub lambda: HighestWeight,
    /// Rows are the new orthonormal coordinates, t0^2 first, t2^g + t_g last.
    pub basis: DMatrix<f64>,
    /// (m - m^2) - (n - n^2).
    pub defect: i64,
    pub dims_balanced: bool,
}

pub fn reduce_to_quasi_split(
    ps: &PositiveSystem,
    pair: &SimplePair,
    lambda: &HighestWeight,
) -> QuasiSplitReduction {
    let d = &ps.datum;
    let r0 = d.r0;
    let rows: Vec<&Vec0> = pair
        .t01
        .iter()
        .chain(&pair.t12)
        .chain(&pair.t2g)
        .chain(&pair.tg)
        .collect();
    let basis = DMatrix::from_fn(r0, r0, |i, j| rows[i][j]);
    let roots = d
        .roots
        .iter()
        .filter(|r| pair.in_t02(&r.v))
        .map(|r| {
            let mut nr = r.clone();
            nr.v = &basis * &r.v;
            nr
        })
        .collect();
    let sub = CartanDatum {
        name: format!("{}-qs", d.name),
        r0,
        dim_a: d.dim_a,
        dim_tg: d.dim_tg + pair.t2g.len(),
        roots,
    };
    let lambda2 = HighestWeight {
        lambda: &basis * (pair.p02() * &lambda.lambda),
        lambda_a: lambda.lambda_a.clone(),
    };
    let defect = (d.m() as i64 - sub.m() as i64) - (d.n() as i64 - sub.n() as i64);
    QuasiSplitReduction {
        datum: sub,
        lambda: lambda2,
        basis,
        defect,
        dims_balanced: defect == 0,
    }
}

/// Indices of W(g) elements `w` with `w mu` dominant.
pub fn dominating_elements(ps: &PositiveSystem, mu: &Vec0) -> Vec<usize> {
    (0..ps.wg.len())
        .filter(|&i| ps.is_dominant(&ps.wg.get(i).apply(mu)))
        .collect()
}

/// Lambda(mu) computed through the chamber w^{-1} C+(g).
pub fn lambda_map_via(ps: &PositiveSystem, mu: &Vec0, w: usize) -> Result<Vec0> {
    let el = ps.wg.get(w);
    let v = el.apply(mu) - &ps.rho_g;
    let dec = langlands_decompose(ps, &v)?;
    Ok(el.apply_inv(&dec.v2))
}

/// Vogan's Lambda map (mu - rho^g)_2 in a chamber containing mu.
pub fn lambda_map(ps: &PositiveSystem, mu: &Vec0) -> Result<Vec0> {
    let w = dominating_elements(ps, mu)[0];
    lambda_map_via(ps, mu, w)
}

/// Minimal coset representatives W(g,k): w^{-1} C+(g) lies in C+(k).
pub fn wgk_set(ps: &PositiveSystem) -> Vec<usize> {
    (0..ps.wg.len())
        .filter(|&w| {
            let el = ps.wg.get(w);
            ps.coweights.iter().all(|om| {
                let y = el.apply_inv(om);
                ps.pos_k.iter().all(|&b| ps.root(b).dot(&y) >= -ps.tau)
            })
        })
        .collect()
}

/// w = w1 w2 with w1 in W(g,k) (index into `wg`) and w2 in W(k) (index into `wk`).
pub fn decompose_w(ps: &PositiveSystem, w: usize) -> (usize, usize) {
    let el = ps.wg.get(w);
    let y = el.apply_inv(&ps.interior_point());
    let w2 = ps
        .wk
        .iter()
        .position(|k| {
            let z = k.apply(&y);
            ps.pos_k.iter().all(|&b| ps.root(b).dot(&z) > ps.tau)
        })
        .expect("W(k) acts simply transitively on k-chambers");
    let w2_in_g = ps.wk_in_g[w2];
    let w1 = ps.wg.compose(w, ps.wg.inverse(w2_in_g));
    (w1, w2)
}

/// Subgroup of W(g) generated by reflections in the given roots, as a
/// membership mask over `ps.wg`.
pub fn generated_subgroup(ps: &PositiveSystem, roots: &[usize]) -> Result<Vec<bool>> {
    let sub = WeylGroup::generate(&ps.datum, roots, GROUP_CAP)?;
    Ok(ps.wg.iter().map(|e| sub.contains_perm(&e.perm)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn sl2r(lambda: f64) -> (PositiveSystem, HighestWeight) {
        let d = catalog::builtin("sl2R").unwrap().datum;
        let l = HighestWeight::new(&[lambda]);
        (choose_positive_system(&d, None, &l).unwrap(), l)
    }

    #[test]
    fn sl2r_positive_system() {
        for lambda in [0.0, 3.0] {
            let (ps, _) = sl2r(lambda);
            assert_eq!(ps.simple_g.len(), 1);
            assert_eq!(ps.root(ps.simple_g[0])[0], 2.0);
            assert_eq!(ps.rho_g[0], 1.0);
            assert_eq!(ps.c_g, 1.0);
        }
        // lambda = 0 puts lambda + 2 rho_k at 0, so the sign came from g1
        assert_eq!(sl2r(0.0).0.tie_break.len(), 1);
        assert!(sl2r(3.0).0.tie_break.is_empty());
    }

    #[test]
    fn sl3r_simple_root_is_the_short_one() {
        let d = catalog::builtin("sl3R").unwrap().datum;
        for k in 0..4 {
            let ps = choose_positive_system(&d, None, &HighestWeight::new(&[k as f64 / 2.0])).unwrap();
            assert_eq!(ps.pos_g.len(), 2);
            assert_eq!(ps.simple_g.len(), 1);
            // indecomposability oracle: 1 is not a sum of positives, 2 = 1 + 1 is
            assert_eq!(ps.root(ps.simple_g[0])[0], 1.0);
            assert!((ps.rho_g[0] - 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn projection_examples() {
        let (ps, _) = sl2r(0.0);
        assert_eq!(cone_project(&ps, &linalg::from_slice(&[-5.0]))[0], 0.0);
        let d = catalog::builtin("a1xa1-test").unwrap().datum;
        let ps = choose_positive_system(&d, None, &HighestWeight::new(&[0.0, 0.0])).unwrap();
        let p = cone_project(&ps, &linalg::from_slice(&[3.0, -2.0]));
        assert!(linalg::approx_eq(&p, &linalg::from_slice(&[3.0, 0.0]), 1e-15));
    }

    #[test]
    fn sl2r_langlands_cases() {
        // v = lambda - rho^g
        let cases = [(0.0, 1, 1, 0.0), (1.0, 0, 1, 0.0), (3.0, 0, 0, 2.0)];
        for (lambda, n1, n2, v2) in cases {
            let (ps, _) = sl2r(lambda);
            let dec = langlands_decompose(&ps, &linalg::from_slice(&[lambda - 1.0])).unwrap();
            assert_eq!((dec.pair.delta1.len(), dec.pair.delta2.len()), (n1, n2), "lambda={lambda}");
            assert!((dec.v2[0] - v2).abs() < 1e-15);
        }
    }

    #[test]
    fn tolerance_band_is_reported() {
        let (ps, _) = sl2r(3.0);
        let err = langlands_decompose(&ps, &linalg::from_slice(&[3e-9])).unwrap_err();
        assert!(matches!(err, Error::ToleranceAmbiguity { .. }));
    }

    #[test]
    fn levi_counts_for_sl2r() {
        let (ps, l) = sl2r(0.0);
        let a = ps.simple_g[0];
        let full = SimplePair::new(&ps, &[a], &[a]);
        let lv = levi_data(&ps, &full, &l);
        assert_eq!((lv.roots_l1.len(), lv.dim_m1, lv.dim_u2, lv.dim_u12), (2, 3, 0, 0));
        let half = SimplePair::new(&ps, &[], &[a]);
        let lv = levi_data(&ps, &half, &l);
        assert_eq!((lv.dim_m1, lv.dim_u12, lv.dim_u2), (0, 1, 0));
        assert_eq!(lv.beta1_bar(), -0.5);
        let empty = SimplePair::new(&ps, &[], &[]);
        let lv = levi_data(&ps, &empty, &l);
        assert_eq!((lv.dim_m1, lv.dim_u12, lv.dim_u2), (0, 0, 1));
    }

    #[test]
    fn lambda_map_examples() {
        let (ps, _) = sl2r(0.0);
        assert!((lambda_map(&ps, &linalg::from_slice(&[3.0])).unwrap()[0] - 2.0).abs() < 1e-15);
        assert!(lambda_map(&ps, &linalg::from_slice(&[1.0])).unwrap()[0].abs() < 1e-15);
        // mu = -3 lies in the negative chamber; Lambda is computed there
        assert!((lambda_map(&ps, &linalg::from_slice(&[-3.0])).unwrap()[0] + 2.0).abs() < 1e-15);
    }

    #[test]
    fn coset_representatives() {
        let (ps, _) = sl2r(0.0);
        assert_eq!(wgk_set(&ps).len(), 2);
        let d = catalog::builtin("sl3R").unwrap().datum;
        let ps = choose_positive_system(&d, None, &HighestWeight::new(&[0.0])).unwrap();
        let reps = wgk_set(&ps);
        assert_eq!(reps, alloc::vec![ps.wg.identity]);
    }

    #[test]
    fn decompose_identity_and_k_elements() {
        let d = catalog::builtin("b2-test").unwrap().datum;
        let ps = choose_positive_system(&d, None, &HighestWeight::new(&[0.0, 0.0])).unwrap();
        assert_eq!(decompose_w(&ps, ps.wg.identity), (ps.wg.identity, ps.wk.identity));
        for (k, &g) in ps.wk_in_g.iter().enumerate() {
            assert_eq!(decompose_w(&ps, g), (ps.wg.identity, k));
        }
        let reps = wgk_set(&ps);
        assert_eq!(reps.len() * ps.wk.len(), ps.wg.len());
        for w in 0..ps.wg.len() {
            let (w1, w2) = decompose_w(&ps, w);
            assert!(reps.contains(&w1));
            assert_eq!(ps.wg.compose(w1, ps.wk_in_g[w2]), w);
        }
    }

    #[test]
    fn quasi_split_reduction_of_sl2r() {
        let (ps, l) = sl2r(3.0);
        let a = ps.simple_g[0];
        let red = reduce_to_quasi_split(&ps, &SimplePair::new(&ps, &[], &[]), &l);
        assert!(red.datum.roots.is_empty());
        assert_eq!((red.datum.m(), red.datum.n(), red.datum.dim_tg), (0, 1, 1));
        let red = reduce_to_quasi_split(&ps, &SimplePair::new(&ps, &[], &[a]), &l);
        assert_eq!(red.datum.roots.len(), 2);
        assert!(red.dims_balanced);
    }
}
