//! Restricted root data of (g, k), Weyl groups and rho-vectors.
//!
//! Vectors live in a B-orthonormal basis of t0 and covectors are identified
//! with vectors, so every pairing is a plain dot product.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use nalgebra::{DMatrix, DVector};

use crate::chambers::PositiveSystem;
use crate::linalg;
use crate::{Error, Result, GROUP_CAP, TAU_ZERO};

/// A vector (or covector) in t0.
pub type Vec0 = DVector<f64>;

/// Tolerance used to recognise a computed vector as a root.
pub const ROOT_MATCH_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedRoot {
    pub v: Vec0,
    pub mult_p: u8,
    pub mult_k: u8,
}

impl RestrictedRoot {
    pub fn new(coords: &[f64], mult_p: u8, mult_k: u8) -> Self {
        Self {
            v: linalg::from_slice(coords),
            mult_p,
            mult_k,
        }
    }

    /// dim g_alpha.
    pub fn dim(&self) -> usize {
        (self.mult_p + self.mult_k) as usize
    }

    pub fn is_p(&self) -> bool {
        self.mult_p == 1
    }

    pub fn is_k(&self) -> bool {
        self.mult_k == 1
    }

    pub fn negated(&self) -> Self {
        Self {
            v: -&self.v,
            mult_p: self.mult_p,
            mult_k: self.mult_k,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CartanDatum {
    pub name: String,
    pub r0: usize,
    pub dim_a: usize,
    pub dim_tg: usize,
    pub roots: Vec<RestrictedRoot>,
}

impl CartanDatum {
    /// Builds a datum from one root per +- pair; the negatives are inserted.
    pub fn from_positive(
        name: &str,
        r0: usize,
        dim_a: usize,
        dim_tg: usize,
        listed: Vec<RestrictedRoot>,
    ) -> Self {
        let mut roots = Vec::with_capacity(2 * listed.len());
        for r in listed {
            let neg = r.negated();
            roots.push(r);
            roots.push(neg);
        }
        Self {
            name: name.into(),
            r0,
            dim_a,
            dim_tg,
            roots,
        }
    }

    /// dim p = dim a + #{alpha : mult_p = 1}.
    pub fn m(&self) -> usize {
        self.dim_a + self.roots.iter().filter(|r| r.is_p()).count()
    }

    /// dim k = r0 + #{alpha : mult_k = 1}.
    pub fn n(&self) -> usize {
        self.r0 + self.roots.iter().filter(|r| r.is_k()).count()
    }

    /// Dimension of t0^g, the span of the roots.
    pub fn rank_g(&self) -> usize {
        self.r0 - self.dim_tg
    }

    pub fn find_root(&self, v: &Vec0) -> Option<usize> {
        self.roots
            .iter()
            .position(|r| r.v.len() == v.len() && linalg::approx_eq(&r.v, v, ROOT_MATCH_TOL))
    }

    pub fn k_roots(&self) -> Vec<usize> {
        (0..self.roots.len()).filter(|&i| self.roots[i].is_k()).collect()
    }

    /// Permutation of root indices induced by a linear map, if it preserves the set.
    pub fn root_permutation(&self, m: &DMatrix<f64>) -> Option<Vec<usize>> {
        self.roots
            .iter()
            .map(|r| self.find_root(&(m * &r.v)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomCheck {
    pub axiom: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<AxiomCheck>,
    pub m: usize,
    pub n: usize,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| !c.passed)
    }
}

fn pair_ratio(a: &Vec0, b: &Vec0) -> f64 {
    2.0 * a.dot(b) / a.dot(a)
}

fn reflect(a: &Vec0, v: &Vec0) -> Vec0 {
    v - a * pair_ratio(a, v)
}

/// Runs every axiom and records pass/fail; later checks are skipped once the
/// structural ones fail.
pub fn check_datum(datum: &CartanDatum) -> ValidationReport {
    let mut checks = Vec::new();
    let mut push = |axiom: &'static str, failure: Option<String>| {
        checks.push(AxiomCheck {
            axiom,
            passed: failure.is_none(),
            detail: failure.unwrap_or_default(),
        });
    };
    let roots = &datum.roots;

    let structure = (|| {
        if datum.r0 == 0 {
            return Some(String::from("rank must be positive"));
        }
        if datum.dim_tg > datum.r0 {
            return Some(format!("dim_tg {} exceeds rank {}", datum.dim_tg, datum.r0));
        }
        for (i, r) in roots.iter().enumerate() {
            if r.v.len() != datum.r0 {
                return Some(format!("root #{i} has {} coordinates", r.v.len()));
            }
            if r.v.iter().any(|x| !x.is_finite()) {
                return Some(format!("root #{i} is not finite"));
            }
            if r.v.norm() <= TAU_ZERO {
                return Some(format!("root #{i} is zero"));
            }
            if r.mult_p > 1 || r.mult_k > 1 || r.mult_p + r.mult_k == 0 {
                return Some(format!("root #{i} has multiplicities ({}, {})", r.mult_p, r.mult_k));
            }
            for (j, s) in roots.iter().enumerate().take(i) {
                if linalg::approx_eq(&r.v, &s.v, ROOT_MATCH_TOL) {
                    return Some(format!("roots #{j} and #{i} coincide"));
                }
            }
        }
        None
    })();
    let structural_ok = structure.is_none();
    push("structure", structure);
    if !structural_ok {
        return ValidationReport {
            checks,
            m: 0,
            n: 0,
        };
    }

    let mut invariance = None;
    let negation = roots.iter().enumerate().find_map(|(i, r)| {
        let j = match datum.find_root(&(-&r.v)) {
            None => return Some(format!("-(root #{i}) is missing")),
            Some(j) => j,
        };
        if invariance.is_none() && (roots[j].mult_p, roots[j].mult_k) != (r.mult_p, r.mult_k) {
            invariance = Some(format!("roots #{i} and #{j} = -#{i} carry different multiplicities"));
        }
        None
    });
    push("negation closure", negation);

    let mut integrality = None;
    let mut closure = None;
    'outer: for (i, a) in roots.iter().enumerate() {
        for (j, b) in roots.iter().enumerate() {
            let q = pair_ratio(&a.v, &b.v);
            if integrality.is_none() && (q - libm::round(q)).abs() > ROOT_MATCH_TOL {
                integrality = Some(format!("2<a,b>/<a,a> = {q} for pair (#{i}, #{j})"));
            }
            match datum.find_root(&reflect(&a.v, &b.v)) {
                None => {
                    if closure.is_none() {
                        closure = Some(format!("s(#{i}) maps #{j} outside the root set"));
                    }
                }
                Some(k) => {
                    let c = &roots[k];
                    // only dim g_alpha is W(g)-invariant; the p/k split is not
                    if invariance.is_none() && c.dim() != b.dim() {
                        invariance =
                            Some(format!("s(#{i}) maps #{j} to #{k} with a different dim g_alpha"));
                    }
                }
            }
            if integrality.is_some() && closure.is_some() && invariance.is_some() {
                break 'outer;
            }
        }
    }
    push("integrality", integrality);
    push("reflection closure", closure);
    push("multiplicity invariance", invariance);

    let kidx = datum.k_roots();
    let mut k_closure = None;
    for &i in &kidx {
        for &j in &kidx {
            let img = reflect(&roots[i].v, &roots[j].v);
            let ok = datum.find_root(&img).is_some_and(|k| roots[k].is_k());
            if !ok && k_closure.is_none() {
                k_closure = Some(format!("s(#{i}) maps k-root #{j} outside R(k)"));
            }
            if i != j && k_closure.is_none() {
                let ratio = roots[j].v.norm() / roots[i].v.norm();
                let parallel = (roots[i].v.dot(&roots[j].v).abs()
                    - roots[i].v.norm() * roots[j].v.norm())
                .abs()
                    < ROOT_MATCH_TOL;
                if parallel && (ratio - 1.0).abs() > ROOT_MATCH_TOL {
                    k_closure = Some(format!("k-roots #{i} and #{j} are proportional (R(k) must be reduced)"));
                }
            }
        }
    }
    push("k-subsystem closure", k_closure);

    let first_tg = datum.r0 - datum.dim_tg;
    let tg = roots.iter().enumerate().find_map(|(i, r)| {
        r.v.iter()
            .skip(first_tg)
            .any(|x| x.abs() > TAU_ZERO)
            .then(|| format!("root #{i} does not vanish on the last {} coordinates", datum.dim_tg))
    });
    push("t_g convention", tg);

    let span = linalg::orthonormalize(
        &roots.iter().map(|r| r.v.clone()).collect::<Vec<_>>(),
        datum.r0,
        1e-8,
    )
    .len();
    let dims = (span != datum.rank_g())
        .then(|| format!("roots span {span} dimensions, expected r0 - dim_tg = {}", datum.rank_g()));
    push("dimension bookkeeping", dims);

    ValidationReport {
        checks,
        m: datum.m(),
        n: datum.n(),
    }
}

/// Validates the datum, failing with the first violated axiom.
pub fn validate_datum(datum: &CartanDatum) -> Result<ValidationReport> {
    let report = check_datum(datum);
    if let Some(c) = report.first_failure() {
        return Err(Error::DatumInvalid {
            axiom: c.axiom,
            detail: c.detail.clone(),
        });
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeylElement {
    pub matrix: DMatrix<f64>,
    /// Reduced word in the generating reflections, leftmost factor first.
    pub word: Vec<usize>,
    pub sign: i8,
    /// `perm[i]` is the index of `w * root_i`.
    pub perm: Vec<usize>,
}

impl WeylElement {
    pub fn identity(datum: &CartanDatum) -> Self {
        Self {
            matrix: DMatrix::identity(datum.r0, datum.r0),
            word: Vec::new(),
            sign: 1,
            perm: (0..datum.roots.len()).collect(),
        }
    }

    pub fn apply(&self, v: &Vec0) -> Vec0 {
        &self.matrix * v
    }

    /// w^{-1} v (the matrix is orthogonal).
    pub fn apply_inv(&self, v: &Vec0) -> Vec0 {
        self.matrix.tr_mul(v)
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// The reflection s_alpha for a root of the datum.
pub fn reflection(datum: &CartanDatum, alpha: &Vec0) -> Result<WeylElement> {
    datum.find_root(alpha).ok_or(Error::NotARoot)?;
    let a = alpha;
    let mut m = DMatrix::identity(datum.r0, datum.r0);
    m -= (a * a.transpose()) * (2.0 / a.dot(a));
    let perm = datum.root_permutation(&m).ok_or(Error::NotARoot)?;
    // A reduced word is only meaningful relative to a simple system; express
    // the reflection in the standard one of the datum.
    let gens = standard_simple_roots(datum, &(0..datum.roots.len()).collect::<Vec<_>>());
    let word = reduced_word(&m, &gens.iter().map(|&i| datum.roots[i].v.clone()).collect::<Vec<_>>());
    Ok(WeylElement {
        matrix: m,
        word,
        sign: -1,
        perm,
    })
}

fn reflection_matrix(a: &Vec0) -> DMatrix<f64> {
    let n = a.len();
    DMatrix::identity(n, n) - (a * a.transpose()) * (2.0 / a.dot(a))
}

/// A vector pairing nonzero with every root of `subset`.
pub fn generic_vector(datum: &CartanDatum, subset: &[usize]) -> Vec0 {
    let r = datum.r0;
    let candidates: [fn(usize) -> f64; 4] = [
        |i| libm::pow(3.0, -(i as f64 + 1.0)),
        |i| libm::pow(core::f64::consts::PI, -(i as f64 + 1.0)),
        |i| libm::sqrt(i as f64 + 2.0) / (i as f64 + 1.0),
        |i| 1.0 / ((i * i) as f64 + 1.7),
    ];
    for c in candidates {
        let g = DVector::from_fn(r, |i, _| c(i));
        if subset.iter().all(|&i| datum.roots[i].v.dot(&g).abs() > 1e-6) {
            return g;
        }
    }
    DVector::from_fn(r, |i, _| libm::sin(1.0 + 7.13 * i as f64))
}

/// Simple roots of the positive system `{alpha in subset : <alpha, g> > 0}`.
pub fn simple_roots_of(datum: &CartanDatum, positive: &[usize]) -> Vec<usize> {
    positive
        .iter()
        .copied()
        .filter(|&i| {
            let v = &datum.roots[i].v;
            !positive.iter().any(|&a| {
                positive.iter().any(|&b| {
                    linalg::approx_eq(&(&datum.roots[a].v + &datum.roots[b].v), v, ROOT_MATCH_TOL)
                })
            })
        })
        .collect()
}

/// Simple roots of `subset` for the positive system cut out by a generic vector.
pub fn standard_simple_roots(datum: &CartanDatum, subset: &[usize]) -> Vec<usize> {
    let g = generic_vector(datum, subset);
    let positive: Vec<usize> = subset
        .iter()
        .copied()
        .filter(|&i| datum.roots[i].v.dot(&g) > 0.0)
        .collect();
    simple_roots_of(datum, &positive)
}

/// Reduced word of an orthogonal map in the reflections of `simple` by
/// repeatedly stripping right descents.
fn reduced_word(m: &DMatrix<f64>, simple: &[Vec0]) -> Vec<usize> {
    if simple.is_empty() {
        return Vec::new();
    }
    let duals = linalg::dual_basis(simple).unwrap_or_default();
    let mut interior = linalg::zeros(m.nrows());
    for d in &duals {
        interior += d;
    }
    let mut w = m.clone();
    let mut word = Vec::new();
    for _ in 0..4096 {
        // w alpha_i < 0 iff <w alpha_i, interior> < 0
        let descent = simple
            .iter()
            .position(|a| (&w * a).dot(&interior) < -TAU_ZERO);
        match descent {
            Some(i) => {
                w *= reflection_matrix(&simple[i]);
                word.push(i);
            }
            None => break,
        }
    }
    word.reverse();
    word
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    G,
    K,
}

/// A finite reflection group, stored with a deterministic canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylGroup {
    pub elements: Vec<WeylElement>,
    /// Reflecting roots (indices into the datum) used as generators.
    pub generators: Vec<usize>,
    pub identity: usize,
    index: BTreeMap<Vec<usize>, usize>,
}

impl WeylGroup {
    /// Closure of the reflections in `generators` under composition.
    pub fn generate(datum: &CartanDatum, generators: &[usize], cap: usize) -> Result<Self> {
        let gen_mats: Vec<DMatrix<f64>> = generators
            .iter()
            .map(|&i| reflection_matrix(&datum.roots[i].v))
            .collect();
        let gen_perms: Vec<Vec<usize>> = gen_mats
            .iter()
            .map(|m| datum.root_permutation(m).ok_or(Error::NotARoot))
            .collect::<Result<_>>()?;

        let id = WeylElement::identity(datum);
        let mut seen: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        seen.insert(id.perm.clone(), 0);
        let mut elements = vec![id];
        let mut queue = VecDeque::from([0usize]);
        // Breadth-first search: the first word reaching an element is reduced.
        while let Some(cur) = queue.pop_front() {
            let w = elements[cur].clone();
            for (s, (sm, sp)) in gen_mats.iter().zip(&gen_perms).enumerate() {
                let perm: Vec<usize> = w.perm.iter().map(|&j| sp[j]).collect();
                if seen.contains_key(&perm) {
                    continue;
                }
                if elements.len() >= cap {
                    return Err(Error::GroupTooLarge { cap });
                }
                let mut word = Vec::with_capacity(w.word.len() + 1);
                word.push(s);
                word.extend_from_slice(&w.word);
                let sign = if word.len() % 2 == 0 { 1 } else { -1 };
                let el = WeylElement {
                    matrix: sm * &w.matrix,
                    word,
                    sign,
                    perm: perm.clone(),
                };
                seen.insert(perm, elements.len());
                queue.push_back(elements.len());
                elements.push(el);
            }
        }

        elements.sort_by(|a, b| canonical_cmp(&a.matrix, &b.matrix));
        let index: BTreeMap<Vec<usize>, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.perm.clone(), i))
            .collect();
        let identity = elements.iter().position(|e| e.is_identity()).unwrap_or(0);
        Ok(Self {
            elements,
            generators: generators.to_vec(),
            identity,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, i: usize) -> &WeylElement {
        &self.elements[i]
    }

    pub fn iter(&self) -> core::slice::Iter<'_, WeylElement> {
        self.elements.iter()
    }

    pub fn index_of_perm(&self, perm: &[usize]) -> Option<usize> {
        self.index.get(perm).copied()
    }

    pub fn index_of_matrix(&self, datum: &CartanDatum, m: &DMatrix<f64>) -> Option<usize> {
        datum.root_permutation(m).and_then(|p| self.index_of_perm(&p))
    }

    /// Index of `self[a] * self[b]`.
    pub fn compose(&self, a: usize, b: usize) -> usize {
        let (pa, pb) = (&self.elements[a].perm, &self.elements[b].perm);
        let perm: Vec<usize> = pb.iter().map(|&j| pa[j]).collect();
        self.index[&perm]
    }

    pub fn inverse(&self, a: usize) -> usize {
        let p = &self.elements[a].perm;
        let mut inv = vec![0; p.len()];
        for (i, &j) in p.iter().enumerate() {
            inv[j] = i;
        }
        self.index[&inv]
    }

    pub fn contains_perm(&self, perm: &[usize]) -> bool {
        self.index.contains_key(perm)
    }
}

fn canonical_cmp(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Ordering {
    let key = |m: &DMatrix<f64>| -> Vec<f64> {
        let mut v = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                v.push(libm::round(m[(i, j)] * 1e9) / 1e9);
            }
        }
        v
    };
    linalg::cmp_lex(&key(a), &key(b), 0.0)
}

/// W(g) or W(k) generated by the standard simple reflections of the datum.
pub fn weyl_group(datum: &CartanDatum, which: Which) -> Result<WeylGroup> {
    let subset: Vec<usize> = match which {
        Which::G => (0..datum.roots.len()).collect(),
        Which::K => datum.k_roots(),
    };
    let simple = standard_simple_roots(datum, &subset);
    WeylGroup::generate(datum, &simple, GROUP_CAP)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HighestWeight {
    pub lambda: Vec0,
    pub lambda_a: Vec<f64>,
}

impl HighestWeight {
    pub fn new(lambda: &[f64]) -> Self {
        Self {
            lambda: linalg::from_slice(lambda),
            lambda_a: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RhoData {
    pub rho_g: Vec0,
    pub rho_k: Vec0,
    pub c_g: f64,
}

/// Half sum of `roots[i]` over `subset`, weighted by `weight`.
pub(crate) fn half_sum(
    datum: &CartanDatum,
    subset: &[usize],
    weight: impl Fn(&RestrictedRoot) -> usize,
) -> Vec0 {
    let mut s = linalg::zeros(datum.r0);
    for &i in subset {
        let r = &datum.roots[i];
        s.axpy(0.5 * weight(r) as f64, &r.v, 1.0);
    }
    s
}

pub fn rho_data(ps: &PositiveSystem) -> RhoData {
    let d = &ps.datum;
    let rho_g = half_sum(d, &ps.pos_g, |r| r.dim());
    let rho_k = half_sum(d, &ps.pos_k, |_| 1);
    let c_g = rho_g.norm_squared();
    RhoData { rho_g, rho_k, c_g }
}

/// Checks that `lambda` is dominant integral for the simple roots of R+(k).
pub fn check_k_dominant_integral(
    datum: &CartanDatum,
    pos_k: &[usize],
    lambda: &Vec0,
) -> Result<()> {
    if lambda.len() != datum.r0 {
        return Err(Error::InvalidWeight(format!(
            "weight has {} coordinates, rank is {}",
            lambda.len(),
            datum.r0
        )));
    }
    for &i in &simple_roots_of(datum, pos_k) {
        let a = &datum.roots[i].v;
        let q = pair_ratio(a, lambda);
        if q < -ROOT_MATCH_TOL || (q - libm::round(q)).abs() > 1e-6 {
            return Err(Error::InvalidWeight(format!(
                "2<lambda,alpha>/<alpha,alpha> = {q} for a simple k-root"
            )));
        }
    }
    Ok(())
}

/// Weyl dimension formula over R+(k).
pub fn weyl_dimension(ps: &PositiveSystem, lambda: &HighestWeight) -> Result<u64> {
    let d = &ps.datum;
    let shifted = &lambda.lambda + &ps.rho_k;
    let mut prod = 1.0;
    for &i in &ps.pos_k {
        let a = &d.roots[i].v;
        prod *= shifted.dot(a) / ps.rho_k.dot(a);
    }
    let rounded = libm::round(prod);
    let residual = (prod - rounded).abs();
    if residual > 1e-6 * rounded.max(1.0) || rounded < 1.0 {
        return Err(Error::NonIntegralDimension { residual });
    }
    Ok(rounded as u64)
}

/// Weyl character of the K-representation of highest weight `lambda` at
/// `exp(-Y)`, written as an alternating-sum quotient.
pub fn character_value(ps: &PositiveSystem, lambda: &HighestWeight, y: &Vec0) -> Result<f64> {
    if y.iter().all(|x| x.abs() <= TAU_ZERO) {
        return Ok(weyl_dimension(ps, lambda)? as f64);
    }
    let on_wall = ps
        .pos_k
        .iter()
        .any(|&i| ps.datum.roots[i].v.dot(y).abs() <= 1e-7);
    if !on_wall {
        return Ok(character_quotient(ps, lambda, y));
    }
    // Removable singularity: average evaluations on both sides of the wall.
    let h = if ps.pos_k.len() <= 1 { 1e-7 } else { 1e-4 };
    let dir = ps.rho_k.normalize();
    let plus = character_quotient(ps, lambda, &(y + &dir * h));
    let minus = character_quotient(ps, lambda, &(y - &dir * h));
    Ok(0.5 * (plus + minus))
}

fn character_quotient(ps: &PositiveSystem, lambda: &HighestWeight, y: &Vec0) -> f64 {
    let shifted = &lambda.lambda + &ps.rho_k;
    let num: f64 = ps
        .wk
        .iter()
        .map(|w| w.sign as f64 * libm::exp(-shifted.dot(&w.apply(y))))
        .sum();
    let den: f64 = ps
        .pos_k
        .iter()
        .map(|&i| {
            let x = ps.datum.roots[i].v.dot(y);
            -2.0 * libm::sinh(x / 2.0)
        })
        .product();
    num / den
}
