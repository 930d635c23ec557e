//! Closed-form asymptotic constants, their per-chamber refinements, and the
//! checks tying the two together.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use core::f64::consts::PI;

use crate::chambers::{
    generated_subgroup, langlands_decompose, levi_data, LanglandsDecomposition, PositiveSystem,
    SimplePair,
};
use crate::heattrace::{
    integrate_root_integrand, mu_underline, pihat_factors, Domain, Numerics, RootIntegrand,
};
use crate::linalg;
use crate::quadrature::{integrate_cone_mc, splitmix, Cone, ConeIntegrandSpec, Estimate};
use crate::rootdata::HighestWeight;
use crate::{Error, Result, Vec0};

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    /// v = lambda + 2 rho^k - rho^g.
    pub v: Vec0,
    pub decomposition: LanglandsDecomposition,
    pub equal_rank: bool,
    pub regular: bool,
    /// v_2, the projection of v onto C+(g).
    pub mu2: Vec0,
}

impl Classification {
    pub fn pair(&self) -> &SimplePair {
        &self.decomposition.pair
    }
}

pub fn shifted_weight(ps: &PositiveSystem, lambda: &HighestWeight) -> Vec0 {
    &lambda.lambda + &ps.rho_k * 2.0 - &ps.rho_g
}

pub fn classify(ps: &PositiveSystem, lambda: &HighestWeight) -> Result<Classification> {
    let v = shifted_weight(ps, lambda);
    let decomposition = langlands_decompose(ps, &v)?;
    let equal_rank = ps.datum.dim_a == 0;
    let regular = equal_rank
        && decomposition.pair.delta1.is_empty()
        && decomposition.pair.delta2.is_empty();
    Ok(Classification {
        mu2: decomposition.v2.clone(),
        v,
        decomposition,
        equal_rank,
        regular,
    })
}

/// How pairings with a root of multiplicity two enter pi_1^2 and pi_2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// Exponent dim g_alpha.
    #[default]
    Multiplicity,
    /// Exponent one.
    Plain,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticConstants {
    pub alpha01: Estimate,
    pub alpha12: Estimate,
    pub alpha2: f64,
    pub alpha0: Estimate,
    pub alpha0_bar: Estimate,
    pub beta1: f64,
    pub beta1_bar: f64,
    pub gamma2: f64,
    pub gamma2_bar: f64,
    pub convention: Convention,
    /// Some root entering pi_1^2 or pi_2 has dim g_alpha = 2, so the two
    /// conventions can disagree.
    pub convention_sensitive: bool,
}

fn exponent(conv: Convention, dim: usize) -> f64 {
    match conv {
        Convention::Multiplicity => dim as f64,
        Convention::Plain => 1.0,
    }
}

/// Generators of every chamber of the Levi root system inside t0^1.
fn levi_chamber_rays(ps: &PositiveSystem, pair: &SimplePair) -> Result<Vec<Vec0>> {
    let base = pair.c01_generators(ps);
    let w01 = generated_subgroup(ps, &pair.delta1)?;
    let mut rays: Vec<Vec0> = Vec::new();
    for (w, inside) in w01.iter().enumerate() {
        if !inside {
            continue;
        }
        for g in &base {
            let r = ps.wg.get(w).apply(g);
            if !rays.iter().any(|q| linalg::approx_eq(q, &r, 1e-9)) {
                rays.push(r);
            }
        }
    }
    Ok(rays)
}

/// alpha_0^1 as the rank-r01 integral
/// int_{t0^1} pi^{k1}(Y) prod_{R+(p) in R0^1} Ahat(<a,Y>) e^{<P01(lambda + rho^k), Y>} dY/(2 pi)^{r01/2}.
pub fn alpha01_global(
    ps: &PositiveSystem,
    pair: &SimplePair,
    lambda: &HighestWeight,
    num: &Numerics,
) -> Result<Estimate> {
    let r01 = pair.r01();
    if r01 == 0 {
        return Ok(Estimate::exact(1.0));
    }
    let d = &ps.datum;
    let levi = levi_data(ps, pair, lambda);
    let mu01 = &pair.p01 * (&lambda.lambda + &ps.rho_k);
    let pos_p1: Vec<usize> = levi
        .pos_l1
        .iter()
        .copied()
        .filter(|&i| d.roots[i].is_p())
        .collect();
    let mut dmin = f64::INFINITY;
    for g in levi_chamber_rays(ps, pair)? {
        let gh = g.normalize();
        let decay: f64 = pos_p1
            .iter()
            .map(|&i| d.roots[i].mult_p as f64 * ps.root(i).dot(&gh).abs() / 2.0)
            .sum();
        let rate = decay - mu01.dot(&gh);
        if rate <= ps.tau {
            return Err(Error::IntegrabilityViolated(format!(
                "alpha_0^1 exponent decays at rate {rate:e} along a Levi chamber ray"
            )));
        }
        dmin = dmin.min(rate);
    }
    let deg: f64 = levi.pos_k1.iter().map(|&i| d.roots[i].mult_k as f64).sum();
    let radius = (60.0 + 4.0 * deg) / dmin;
    let f = RootIntegrand {
        lin: levi
            .pos_k1
            .iter()
            .map(|&i| (ps.root(i).clone(), d.roots[i].mult_k as f64))
            .collect(),
        ahat: pos_p1
            .iter()
            .map(|&i| (ps.root(i).clone(), d.roots[i].mult_p as f64))
            .collect(),
        exponent: Some(mu01),
        ..Default::default()
    };
    let est = integrate_root_integrand(
        &Domain::whole(pair.t01.clone()),
        &f,
        radius,
        &[linalg::zeros(d.r0)],
        1.0,
        num.tol,
    )?;
    Ok(est.scale_log(1.0, -0.5 * r01 as f64 * libm::log(2.0 * PI)))
}

/// Gaussian integral of prod <f,Y>^e over the cone spanned by `generators`
/// inside the subspace `basis`, normalised by (2 pi)^{dim/2}.
fn gaussian_cone(
    basis: &[Vec0],
    generators: Vec<Vec0>,
    factors: Vec<(Vec0, f64)>,
    seed: u64,
    n: u64,
) -> Result<Estimate> {
    let k = basis.len();
    if k == 0 {
        return Ok(Estimate::exact(1.0));
    }
    let r0 = basis[0].len();
    let spec = ConeIntegrandSpec {
        linear_factors: factors
            .into_iter()
            .map(|(f, e)| {
                // only the component in the subspace is seen by Y
                let p = linalg::combine(basis, &linalg::coords(basis, &f), r0);
                (p, e as u32)
            })
            .collect(),
        td_factors: Vec::new(),
        gaussian_weight: Some(1.0),
        linear_exponent: linalg::zeros(r0),
        normalizer: k as f64 / 2.0,
    };
    let cone = Cone {
        basis: basis.to_vec(),
        generators,
    };
    integrate_cone_mc(&spec, &cone, seed, n)
}

pub fn asymptotic_constants(
    ps: &PositiveSystem,
    lambda: &HighestWeight,
    conv: Convention,
    num: &Numerics,
) -> Result<AsymptoticConstants> {
    let d = &ps.datum;
    let cls = classify(ps, lambda)?;
    let pair = cls.pair();
    let levi = levi_data(ps, pair, lambda);
    let alpha01 = alpha01_global(ps, pair, lambda, num)?;
    let pi12: Vec<(Vec0, f64)> = levi
        .pos_12
        .iter()
        .map(|&i| (ps.root(i).clone(), exponent(conv, d.roots[i].dim())))
        .collect();
    let alpha12 = gaussian_cone(
        &pair.t12,
        pair.c12_generators(ps),
        pi12,
        splitmix(num.seed, 0xa12),
        num.mc_samples,
    )?;
    let alpha2: f64 = levi
        .pos_2
        .iter()
        .map(|&i| libm::pow(ps.root(i).dot(&cls.mu2), exponent(conv, d.roots[i].dim())))
        .product();
    let alpha0 = alpha01.mul(&alpha12).mul(&Estimate::exact(alpha2));
    let m = d.m() as f64;
    let alpha0_bar = alpha0.scale_log(
        1.0,
        -0.5 * m * libm::log(2.0 * PI) - libm::log(ps.pi_k(&ps.rho_k)),
    );
    let beta1 = -0.5 * pair.r01() as f64 + 0.5 * levi.dim_u12 as f64 + levi.dim_u2 as f64;
    let beta1_bar = beta1 - 0.5 * (d.m() + d.n() - d.r0) as f64;
    let gamma2 = 0.5 * cls.mu2.norm_squared();
    let convention_sensitive = levi
        .pos_12
        .iter()
        .chain(&levi.pos_2)
        .any(|&i| d.roots[i].dim() == 2);
    Ok(AsymptoticConstants {
        alpha01,
        alpha12,
        alpha2,
        alpha0,
        alpha0_bar,
        beta1,
        beta1_bar,
        gamma2,
        gamma2_bar: gamma2 - 0.5 * ps.c_g,
        convention: conv,
        convention_sensitive,
    })
}

/// A root pairing `f` with its exponent, as it enters a chamber product.
pub type Factor = (Vec0, f64);

#[derive(Debug, Clone, PartialEq)]
pub struct ChamberConstants {
    /// Index into `ps.wg`.
    pub w: usize,
    pub w1: usize,
    pub w2: usize,
    pub eps_w2: i8,
    pub mu_underline: Vec0,
    pub decomposition: LanglandsDecomposition,
    pub alpha01: Estimate,
    pub alpha12: Estimate,
    pub alpha2: f64,
    pub alpha_w: Estimate,
    pub beta_w: f64,
    pub gamma_w: f64,
    pub a01: Vec<Factor>,
    pub a12: Vec<Factor>,
    pub a2: Vec<Factor>,
    pub b01: Vec<Factor>,
    pub b12: Vec<Factor>,
    pub b2: Vec<Factor>,
    pub dim_u01: usize,
    pub dim_u12: usize,
    pub dim_u2: usize,
}

fn weight(v: &[Factor]) -> usize {
    v.iter().map(|(_, e)| *e as usize).sum()
}

impl ChamberConstants {
    /// The cardinality identities |A| + |B| = dim u, piece by piece.
    pub fn cardinalities_hold(&self) -> bool {
        weight(&self.a01) + weight(&self.b01) == self.dim_u01
            && weight(&self.a12) + weight(&self.b12) == self.dim_u12
            && weight(&self.a2) + weight(&self.b2) == self.dim_u2
    }
}

type Split = (Vec<Factor>, Vec<Factor>, Vec<Factor>);

fn split_factors(pair: &SimplePair, f: Vec<Factor>) -> Split {
    let mut out: Split = (Vec::new(), Vec::new(), Vec::new());
    for x in f {
        if pair.in_t01(&x.0) {
            out.0.push(x);
        } else if pair.in_t02(&x.0) {
            out.1.push(x);
        } else {
            out.2.push(x);
        }
    }
    out
}

/// alpha_0^1(w) = int_{C0^1(w)} prod_{A01} <f,Y> prod_{B01} Td(<f,Y>) e^{<Y, mu01(w)>} dY/(2 pi)^{r01/2}.
fn alpha01_chamber(
    ps: &PositiveSystem,
    dec: &LanglandsDecomposition,
    a01: &[Factor],
    b01: &[Factor],
    num: &Numerics,
) -> Result<Estimate> {
    let pair = &dec.pair;
    let r01 = pair.r01();
    if r01 == 0 {
        return Ok(Estimate::exact(1.0));
    }
    let gens = pair.c01_generators(ps);
    let mut dmin = f64::INFINITY;
    for g in &gens {
        let gh = g.normalize();
        // Td factors are nonnegative on this cone, so only the exponent decays
        let rate = -dec.v01.dot(&gh);
        if rate <= ps.tau {
            return Err(Error::IntegrabilityViolated(format!(
                "alpha_0^1(w) exponent decays at rate {rate:e} along a ray"
            )));
        }
        dmin = dmin.min(rate);
    }
    let deg: f64 = a01.iter().chain(b01).map(|(_, e)| e).sum();
    let radius = (60.0 + 4.0 * deg) / dmin;
    let f = RootIntegrand {
        lin: a01.to_vec(),
        td: b01.to_vec(),
        exponent: Some(dec.v01.clone()),
        ..Default::default()
    };
    let dom = Domain::cone(pair.t01.clone(), gens)?;
    let est = integrate_root_integrand(&dom, &f, radius, &[linalg::zeros(ps.datum.r0)], 1.0, num.tol)?;
    Ok(est.scale_log(1.0, -0.5 * r01 as f64 * libm::log(2.0 * PI)))
}

pub fn chamber_constants(
    ps: &PositiveSystem,
    mu: &Vec0,
    w: usize,
    lambda: &HighestWeight,
    num: &Numerics,
) -> Result<ChamberConstants> {
    let d = &ps.datum;
    let (w1, w2) = crate::chambers::decompose_w(ps, w);
    let mub = mu_underline(ps, mu, w);
    let dec = langlands_decompose(ps, &mub)?;
    let pair = &dec.pair;
    let levi = levi_data(ps, pair, lambda);
    let (lin, td) = pihat_factors(ps, w1);
    let (a01, a12, a2) = split_factors(pair, lin);
    let (b01, b12, b2) = split_factors(pair, td);
    let alpha01 = alpha01_chamber(ps, &dec, &a01, &b01, num)?;
    let pi12: Vec<Factor> = a12.iter().chain(&b12).cloned().collect();
    let alpha12 = gaussian_cone(
        &pair.t12,
        pair.c12_generators(ps),
        pi12,
        splitmix(num.seed, 0x1000 + w as u64),
        num.mc_samples,
    )?;
    let alpha2: f64 = a2
        .iter()
        .chain(&b2)
        .map(|(f, e)| libm::pow(f.dot(&dec.v2), *e))
        .product();
    let alpha_w = alpha01.mul(&alpha12).mul(&Estimate::exact(alpha2));
    let dim_u01: usize = levi.pos_l1.iter().map(|&i| d.roots[i].dim()).sum();
    let beta_w = -0.5 * pair.r01() as f64 + 0.5 * levi.dim_u12 as f64 + levi.dim_u2 as f64;
    Ok(ChamberConstants {
        w,
        w1,
        w2,
        eps_w2: ps.wk.get(w2).sign,
        gamma_w: 0.5 * dec.v2.norm_squared(),
        mu_underline: mub,
        alpha01,
        alpha12,
        alpha2,
        alpha_w,
        beta_w,
        a01,
        a12,
        a2,
        b01,
        b12,
        b2,
        dim_u01,
        dim_u12: levi.dim_u12,
        dim_u2: levi.dim_u2,
        decomposition: dec,
    })
}

pub fn all_chamber_constants(
    ps: &PositiveSystem,
    lambda: &HighestWeight,
    num: &Numerics,
) -> Result<Vec<ChamberConstants>> {
    let mu = &lambda.lambda + &ps.rho_k;
    (0..ps.wg.len())
        .map(|w| chamber_constants(ps, &mu, w, lambda, num))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport {
    /// Membership masks over `ps.wg`.
    pub w02: Vec<bool>,
    pub w01: Vec<bool>,
    /// Elements attaining gamma_2, and those on W0^2 attaining beta_1.
    pub gamma_max: Vec<bool>,
    pub beta_max: Vec<bool>,
    pub sum_w01: Estimate,
    pub alpha0: Estimate,
    /// |sum - alpha0| divided by the combined 3-sigma bound.
    pub sum_deviation: f64,
}

/// Checks the ordering theorems and the sum identity on computed constants.
pub fn verify_theorems(
    ps: &PositiveSystem,
    lambda: &HighestWeight,
    consts: &AsymptoticConstants,
    chambers: &[ChamberConstants],
) -> Result<TheoremReport> {
    let cls = classify(ps, lambda)?;
    let pair = cls.pair();
    let w02 = generated_subgroup(ps, &pair.delta2)?;
    let w01 = generated_subgroup(ps, &pair.delta1)?;
    let gtol = 1e-9 * (1.0 + consts.gamma2);
    let mut gamma_max = Vec::with_capacity(chambers.len());
    let mut beta_max = Vec::with_capacity(chambers.len());
    let mut sum = Estimate::exact(0.0);
    for c in chambers {
        let fail = |detail: String| Error::TheoremViolation {
            theorem: "chamber ordering",
            w: c.w,
            detail,
        };
        if !c.cardinalities_hold() {
            return Err(fail(String::from("|A| + |B| differs from dim u")));
        }
        if c.gamma_w > consts.gamma2 + gtol {
            return Err(fail(format!("gamma_w = {} exceeds gamma_2 = {}", c.gamma_w, consts.gamma2)));
        }
        let top = (c.gamma_w - consts.gamma2).abs() <= gtol;
        if top != w02[c.w] {
            return Err(fail(format!(
                "gamma_w = gamma_2 is {top} but membership in W0^2 is {}",
                w02[c.w]
            )));
        }
        gamma_max.push(top);
        let btop = if w02[c.w] {
            if c.beta_w > consts.beta1 {
                return Err(fail(format!("beta_w = {} exceeds beta_1 = {}", c.beta_w, consts.beta1)));
            }
            let eq = c.beta_w == consts.beta1;
            if eq != w01[c.w] {
                return Err(fail(format!(
                    "beta_w = beta_1 is {eq} but membership in W0^1 is {}",
                    w01[c.w]
                )));
            }
            eq
        } else {
            false
        };
        beta_max.push(btop);
        if !(c.alpha_w.value > 0.0) {
            return Err(fail(String::from("alpha_w is not positive")));
        }
        if w01[c.w] {
            sum = sum.add(&c.alpha_w.scale_log(c.eps_w2 as f64, 0.0));
        }
    }
    let diff = (sum.to_f64() - consts.alpha0.to_f64()).abs();
    let bound = sum.rescaled(0.0).bound() + consts.alpha0.rescaled(0.0).bound()
        + 1e-9 * consts.alpha0.to_f64().abs();
    let sum_deviation = diff / bound;
    if sum_deviation > 1.0 {
        return Err(Error::TheoremViolation {
            theorem: "sum identity",
            w: ps.wg.identity,
            detail: format!(
                "sum over W0^1 = {:.10e}, alpha_0 = {:.10e}, bound {bound:e}",
                sum.to_f64(),
                consts.alpha0.to_f64()
            ),
        });
    }
    Ok(TheoremReport {
        w02,
        w01,
        gamma_max,
        beta_max,
        sum_w01: sum,
        alpha0: consts.alpha0,
        sum_deviation,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    /// -2 gamma2_bar, the bottom of the support of the spectral measure.
    pub bottom: f64,
    pub gap: bool,
    /// Mass of the atom at the bottom (alpha0_bar when beta1_bar = 0).
    pub atom_mass: f64,
    /// Casimir eigenvalue of an irreducible tempered representation
    /// containing the K-type.
    pub tempered_casimir: f64,
}

pub fn classify_spectrum(c: &AsymptoticConstants) -> SpectrumReport {
    let discrete = c.beta1_bar == 0.0;
    SpectrumReport {
        bottom: -2.0 * c.gamma2_bar,
        gap: discrete,
        atom_mass: if discrete { c.alpha0_bar.to_f64() } else { 0.0 },
        tempered_casimir: -2.0 * c.gamma2_bar,
    }
}

/// pi^g(v / 2 pi) / pi^k(rho^k / 2 pi) in the discrete series case.
pub fn formal_degree(ps: &PositiveSystem, lambda: &HighestWeight) -> Result<f64> {
    let cls = classify(ps, lambda)?;
    if !cls.regular {
        return Err(Error::NotDiscreteSeriesCase);
    }
    let s = 1.0 / (2.0 * PI);
    Ok(ps.pi_g(&(&cls.v * s)) / ps.pi_k(&(&ps.rho_k * s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::chambers::choose_positive_system;
    use crate::quadrature::integrate_adaptive;

    fn setup(name: &str, lambda: &[f64]) -> (PositiveSystem, HighestWeight) {
        let d = catalog::builtin(name).unwrap().datum;
        let l = HighestWeight::new(lambda);
        (choose_positive_system(&d, None, &l).unwrap(), l)
    }

    fn num() -> Numerics {
        Numerics {
            mc_samples: 1 << 20,
            ..Numerics::default()
        }
    }

    #[test]
    fn sl2r_classification() {
        let c = classify(&setup("sl2R", &[0.0]).0, &HighestWeight::new(&[0.0])).unwrap();
        assert_eq!((c.pair().delta1.len(), c.pair().delta2.len()), (1, 1));
        let c = classify(&setup("sl2R", &[1.0]).0, &HighestWeight::new(&[1.0])).unwrap();
        assert_eq!((c.pair().delta1.len(), c.pair().delta2.len()), (0, 1));
        let c = classify(&setup("sl2R", &[2.0]).0, &HighestWeight::new(&[2.0])).unwrap();
        assert!(c.regular && c.mu2[0] == 1.0);
    }

    #[test]
    fn sl2r_constants() {
        // y/sinh y has integral pi^2/2 over the line
        let a = 0.5 * PI * PI / libm::sqrt(2.0 * PI) / (2.0 * PI);
        let cases = [
            (0.0, a, -1.5, -0.5),
            (1.0, 1.0 / (libm::sqrt(2.0) * libm::pow(PI, 1.5)), -0.5, -0.5),
            (2.0, 1.0 / PI, 0.0, 0.0),
            (3.0, 2.0 / PI, 0.0, 1.5),
        ];
        for (l, alpha, beta, gamma) in cases {
            let (ps, hw) = setup("sl2R", &[l]);
            let c = asymptotic_constants(&ps, &hw, Convention::Multiplicity, &num()).unwrap();
            let rel = (c.alpha0_bar.to_f64() / alpha - 1.0).abs();
            assert!(rel < 1e-2 && rel < 4.0 * c.alpha0_bar.rel_err() + 1e-9, "lambda={l}");
            assert_eq!(c.beta1_bar, beta);
            assert!((c.gamma2_bar - gamma).abs() < 1e-12);
            let levi = levi_data(&ps, classify(&ps, &hw).unwrap().pair(), &hw);
            assert_eq!(c.beta1_bar, levi.beta1_bar());
        }
    }

    #[test]
    fn alpha01_of_sl3r_against_direct_quadrature() {
        // lambda = 0: v = -1 puts the whole line in t0^1
        let (ps, hw) = setup("sl3R", &[0.0]);
        let pair = classify(&ps, &hw).unwrap().decomposition.pair;
        let est = alpha01_global(&ps, &pair, &hw, &num()).unwrap();
        let ahat = |x: f64| if x == 0.0 { 1.0 } else { (x / 2.0) / libm::sinh(x / 2.0) };
        let direct = integrate_adaptive(
            |y| y[0] * ahat(y[0]) * ahat(2.0 * y[0]) * libm::exp(0.5 * y[0]) / libm::sqrt(2.0 * PI),
            &[-80.0],
            &[80.0],
            1e-12,
        )
        .unwrap();
        assert!((est.to_f64() / direct.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn chamber_examples() {
        let (ps, hw) = setup("sl2R", &[2.0]);
        let mu = &hw.lambda + &ps.rho_k;
        let minus = (0..2).find(|&w| w != ps.wg.identity).unwrap();
        let id = chamber_constants(&ps, &mu, ps.wg.identity, &hw, &num()).unwrap();
        assert_eq!((id.gamma_w, id.beta_w), (0.5, 1.0));
        assert!(id.a01.is_empty() && id.a12.is_empty());
        assert_eq!(id.alpha01.value, 1.0);
        assert_eq!(id.alpha12.value, 1.0);
        let g = asymptotic_constants(&ps, &hw, Convention::Multiplicity, &num()).unwrap();
        assert!((id.alpha_w.to_f64() - g.alpha0.to_f64()).abs() < 1e-12);
        let m = chamber_constants(&ps, &mu, minus, &hw, &num()).unwrap();
        assert_eq!(m.mu_underline[0], -3.0);
        assert_eq!(m.decomposition.pair.delta1.len(), 1);
        assert_eq!(m.gamma_w, 0.0);
        assert!(m.cardinalities_hold() && id.cardinalities_hold());
    }

    #[test]
    fn theorems_on_sl2r() {
        for l in [0.0, 1.0, 2.0] {
            let (ps, hw) = setup("sl2R", &[l]);
            let c = asymptotic_constants(&ps, &hw, Convention::Multiplicity, &num()).unwrap();
            let ch = all_chamber_constants(&ps, &hw, &num()).unwrap();
            let r = verify_theorems(&ps, &hw, &c, &ch).unwrap();
            let n02 = r.w02.iter().filter(|&&b| b).count();
            let n01 = r.w01.iter().filter(|&&b| b).count();
            let expect = match l as i32 {
                0 => (2, 2),
                1 => (2, 1),
                _ => (1, 1),
            };
            assert_eq!((n02, n01), expect, "lambda={l}");
        }
    }

    #[test]
    fn spectrum_and_formal_degree() {
        let (ps, hw) = setup("sl2R", &[2.0]);
        let c = asymptotic_constants(&ps, &hw, Convention::Multiplicity, &num()).unwrap();
        let s = classify_spectrum(&c);
        assert!(s.gap && s.bottom == 0.0 && (s.atom_mass - 1.0 / PI).abs() < 1e-12);
        assert!((formal_degree(&ps, &hw).unwrap() - 1.0 / PI).abs() < 1e-15);
        let (p5, h5) = setup("sl2R", &[5.0]);
        assert!((formal_degree(&p5, &h5).unwrap() - 4.0 / PI).abs() < 1e-15);
        let (p1, h1) = setup("sl2R", &[1.0]);
        assert_eq!(formal_degree(&p1, &h1).unwrap_err(), Error::NotDiscreteSeriesCase);
        let c1 = asymptotic_constants(&p1, &h1, Convention::Multiplicity, &num()).unwrap();
        let s1 = classify_spectrum(&c1);
        assert!(!s1.gap && s1.atom_mass == 0.0);
    }
}
