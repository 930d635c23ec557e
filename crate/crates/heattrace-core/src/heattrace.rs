//! The Weyl-reduced trace integral I_t, its chamber pieces, and the closed
//! forms of the equal-rank regular case.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use core::f64::consts::PI;

use crate::chambers::{
    cone_project, decompose_w, langlands_decompose, PositiveSystem, SimplePair,
};
use crate::linalg;
use crate::quadrature::{
    integrate_adaptive_log, integrate_cone_mc, ln_ahat, ln_td, splitmix, AdaptiveOptions, Cone,
    ConeIntegrandSpec, Estimate, LogValue,
};
use crate::rootdata::{weyl_dimension, HighestWeight};
use crate::{Error, Result, Vec0, T_MAX};

/// Accuracy knobs shared by every numerical routine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Numerics {
    pub tol: f64,
    pub seed: u64,
    pub mc_samples: u64,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            seed: 20_240_601,
            mc_samples: 1 << 21,
        }
    }
}

/// Half-width of the truncation box for a Gaussian of variance t centred
/// near t mu.
pub fn truncation_radius(ps: &PositiveSystem, mu: &Vec0, t: f64) -> f64 {
    t * (mu.norm() + ps.rho_g.norm() + 1.0) + 12.0 * libm::sqrt(t) + 20.0
}

/// Integrand built from root pairings, written on t0:
/// prod <a,Y>^e * prod Td(<b,Y>)^e * prod Ahat(<c,Y>)^e
/// * expm1(sum e ln(Td(<d,Y>)/<d,Y>)) * e^{<mu,Y> - inv_t |Y|^2 / 2}.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RootIntegrand {
    pub lin: Vec<(Vec0, f64)>,
    pub td: Vec<(Vec0, f64)>,
    pub ahat: Vec<(Vec0, f64)>,
    pub td_excess: Vec<(Vec0, f64)>,
    pub exponent: Option<Vec0>,
    pub inv_t: f64,
}

/// A domain of integration inside t0: a subspace with orthonormal basis,
/// optionally cut down to the simplicial cone spanned by `generators`.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    pub basis: Vec<Vec0>,
    pub generators: Option<Vec<Vec0>>,
    duals: Vec<Vec0>,
}

impl Domain {
    pub fn whole(basis: Vec<Vec0>) -> Self {
        Self {
            duals: basis.clone(),
            basis,
            generators: None,
        }
    }

    pub fn cone(basis: Vec<Vec0>, generators: Vec<Vec0>) -> Result<Self> {
        if generators.len() != basis.len() {
            return Err(Error::InvalidArgument("cone must be simplicial".into()));
        }
        let duals = linalg::dual_basis(&generators)
            .ok_or_else(|| Error::InvalidArgument("degenerate cone".into()))?;
        Ok(Self {
            basis,
            generators: Some(generators),
            duals,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The columns `Y = sum y_j e_j` of the coordinate system.
    fn axes(&self) -> &[Vec0] {
        self.generators.as_deref().unwrap_or(&self.basis)
    }

    fn form(&self, f: &Vec0) -> Vec<f64> {
        self.axes().iter().map(|g| g.dot(f)).collect()
    }

    fn ln_jacobian(&self) -> f64 {
        match &self.generators {
            Some(g) => libm::log(linalg::abs_det_in_basis(g, &self.basis)),
            None => 0.0,
        }
    }

    fn coords_of(&self, p: &Vec0) -> Vec<f64> {
        self.duals.iter().map(|d| d.dot(p)).collect()
    }

    fn bounds(&self, radius: f64) -> (Vec<f64>, Vec<f64>) {
        match &self.generators {
            Some(_) => (
                vec![0.0; self.dim()],
                self.duals.iter().map(|d| d.norm() * radius).collect(),
            ),
            None => (vec![-radius; self.dim()], vec![radius; self.dim()]),
        }
    }
}

struct Compiled {
    lin: Vec<(Vec<f64>, f64)>,
    td: Vec<(Vec<f64>, f64)>,
    ahat: Vec<(Vec<f64>, f64)>,
    td_excess: Vec<(Vec<f64>, f64)>,
    exponent: Vec<f64>,
    gram: Vec<f64>,
    inv_t: f64,
}

fn dot(a: &[f64], y: &[f64]) -> f64 {
    a.iter().zip(y).map(|(p, q)| p * q).sum()
}

impl Compiled {
    fn new(dom: &Domain, f: &RootIntegrand) -> Self {
        let conv = |v: &[(Vec0, f64)]| -> Vec<(Vec<f64>, f64)> {
            v.iter().map(|(a, e)| (dom.form(a), *e)).collect()
        };
        let k = dom.dim();
        let ax = dom.axes();
        Self {
            lin: conv(&f.lin),
            td: conv(&f.td),
            ahat: conv(&f.ahat),
            td_excess: conv(&f.td_excess),
            exponent: f.exponent.as_ref().map(|m| dom.form(m)).unwrap_or_else(|| vec![0.0; k]),
            gram: (0..k * k).map(|ij| ax[ij / k].dot(&ax[ij % k])).collect(),
            inv_t: f.inv_t,
        }
    }

    fn eval(&self, y: &[f64]) -> LogValue {
        let mut sign = 1.0;
        let mut la = 0.0;
        for (a, e) in &self.lin {
            let x = dot(a, y);
            if x == 0.0 {
                return (0.0, f64::NEG_INFINITY);
            }
            if x < 0.0 && libm::fmod(*e, 2.0) == 1.0 {
                sign = -sign;
            }
            la += e * libm::log(x.abs());
        }
        for (a, e) in &self.td {
            la += e * ln_td(dot(a, y));
        }
        for (a, e) in &self.ahat {
            la += e * ln_ahat(dot(a, y));
        }
        if !self.td_excess.is_empty() {
            let mut s = 0.0;
            for (a, e) in &self.td_excess {
                let x = dot(a, y);
                if x <= 0.0 {
                    return (0.0, f64::NEG_INFINITY);
                }
                s -= e * libm::log1p(-libm::exp(-x));
            }
            let v = libm::expm1(s);
            if v == 0.0 {
                return (0.0, f64::NEG_INFINITY);
            }
            la += libm::log(v.abs());
            if v < 0.0 {
                sign = -sign;
            }
        }
        la += dot(&self.exponent, y);
        if self.inv_t != 0.0 {
            let k = y.len();
            let mut q = 0.0;
            for i in 0..k {
                for j in 0..k {
                    q += y[i] * self.gram[i * k + j] * y[j];
                }
            }
            la -= 0.5 * self.inv_t * q;
        }
        (sign, la)
    }
}

/// Adaptive integral of a root integrand over a domain truncated at
/// `radius`, with extra cuts around `centers` on the scale `width`.
pub fn integrate_root_integrand(
    dom: &Domain,
    f: &RootIntegrand,
    radius: f64,
    centers: &[Vec0],
    width: f64,
    tol: f64,
) -> Result<Estimate> {
    let c = Compiled::new(dom, f);
    let (lo, hi) = dom.bounds(radius);
    let k = dom.dim();
    let mut opts = AdaptiveOptions::new(tol);
    opts.breakpoints = (0..k)
        .map(|j| {
            let scale = dom.duals[j].norm();
            let mut cuts = Vec::new();
            for s in [0.5, 2.0, 8.0, 32.0] {
                cuts.push(s * scale);
                cuts.push(-s * scale);
            }
            for p in centers {
                let y = dom.coords_of(p)[j];
                for s in [-8.0, -3.0, 0.0, 3.0, 8.0] {
                    cuts.push(y + s * width * scale);
                }
            }
            cuts.sort_by(|a, b| a.total_cmp(b));
            let mut merged: Vec<f64> = Vec::new();
            for x in cuts {
                if merged.last().is_none_or(|&l| x - l > 0.25 * width.min(1.0) * scale) {
                    merged.push(x);
                }
            }
            merged
        })
        .collect();
    let est = integrate_adaptive_log(|y| c.eval(y), &lo, &hi, &opts)?;
    Ok(est.scale_log(1.0, dom.ln_jacobian()))
}

/// Orthonormal bases of t0^g (span of the roots) and of t_g.
pub fn split_tg(ps: &PositiveSystem) -> (Vec<Vec0>, Vec<Vec0>) {
    let pair = SimplePair::new(ps, &[], &[]);
    (pair.t2g, pair.tg)
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t <= T_MAX) {
        return Err(Error::InvalidArgument(format!(
            "t = {t} outside the supported range (0, {T_MAX}]"
        )));
    }
    Ok(())
}

/// `ln` of the Gaussian normaliser (2 pi t)^{-k/2} times the exactly
/// integrated t_g factor e^{t |mu_tg|^2 / 2}.
fn ln_normalizer(k: usize, tg: &[Vec0], mu: &Vec0, t: f64) -> f64 {
    let mtg: f64 = tg.iter().map(|q| { let x = q.dot(mu); x * x }).sum();
    -0.5 * k as f64 * libm::log(2.0 * PI * t) + 0.5 * t * mtg
}

/// I_t(mu) = int_{t0} pi^k(Y) Ahat(ad Y|p) e^{<mu,Y> - |Y|^2/2t} dY/(2 pi t)^{r0/2}.
pub fn i_t(ps: &PositiveSystem, mu: &Vec0, t: f64, num: &Numerics) -> Result<Estimate> {
    check_t(t)?;
    let d = &ps.datum;
    let (basis, tg) = split_tg(ps);
    let f = RootIntegrand {
        lin: ps
            .pos_k
            .iter()
            .map(|&i| (ps.root(i).clone(), d.roots[i].mult_k as f64))
            .collect(),
        ahat: ps
            .pos_p()
            .iter()
            .map(|&i| (ps.root(i).clone(), d.roots[i].mult_p as f64))
            .collect(),
        exponent: Some(mu.clone()),
        inv_t: 1.0 / t,
        ..Default::default()
    };
    let mut centers = vec![mu * t];
    for w in ps.wg.iter() {
        centers.push((mu - w.apply_inv(&ps.rho_g)) * t);
    }
    let k = basis.len();
    let dom = Domain::whole(basis);
    let est = integrate_root_integrand(
        &dom,
        &f,
        truncation_radius(ps, mu, t),
        &centers,
        libm::sqrt(t),
        num.tol,
    )?;
    Ok(est.scale_log(1.0, ln_normalizer(k, &tg, mu, t)))
}

/// mu(w) = w mu + w1 rho^k - rho^g.
pub fn mu_underline(ps: &PositiveSystem, mu: &Vec0, w: usize) -> Vec0 {
    let (w1, _) = decompose_w(ps, w);
    ps.wg.get(w).apply(mu) + ps.wg.get(w1).apply(&ps.rho_k) - &ps.rho_g
}

/// Factors of pihat_0(w1, Y): the pairings with w1 R+(k) and the Td
/// factors of w1 R(p) cut down to R+(g), with multiplicities.
pub fn pihat_factors(ps: &PositiveSystem, w1: usize) -> (Vec<(Vec0, f64)>, Vec<(Vec0, f64)>) {
    let d = &ps.datum;
    let el = ps.wg.get(w1);
    let lin = ps
        .pos_k
        .iter()
        .map(|&i| (el.apply(ps.root(i)), d.roots[i].mult_k as f64))
        .collect();
    let td = (0..d.roots.len())
        .filter(|&i| d.roots[i].is_p() && ps.positive[el.perm[i]])
        .map(|i| (el.apply(ps.root(i)), d.roots[i].mult_p as f64))
        .collect();
    (lin, td)
}

/// I_t(mu, w) = eps_{w2} int_{C+} pihat_0(w1,Y) e^{<mu(w),Y> - |Y|^2/2t} dY/(2 pi t)^{r0/2}.
pub fn i_t_chamber(
    ps: &PositiveSystem,
    mu: &Vec0,
    w: usize,
    t: f64,
    num: &Numerics,
) -> Result<Estimate> {
    check_t(t)?;
    let (w1, w2) = decompose_w(ps, w);
    let eps = ps.wk.get(w2).sign as f64;
    let mub = mu_underline(ps, mu, w);
    let (lin, td) = pihat_factors(ps, w1);
    let (basis, tg) = split_tg(ps);
    let k = basis.len();
    let norm = ln_normalizer(k, &tg, &mub, t);
    let est = if k <= 2 {
        let f = RootIntegrand {
            lin,
            td,
            exponent: Some(mub.clone()),
            inv_t: 1.0 / t,
            ..Default::default()
        };
        let dom = Domain::cone(basis, ps.coweights.clone())?;
        let peak = cone_project(ps, &(&mub * t));
        integrate_root_integrand(
            &dom,
            &f,
            truncation_radius(ps, mu, t),
            &[peak],
            libm::sqrt(t),
            num.tol,
        )?
    } else {
        let pg: Vec0 = linalg::combine(&basis, &linalg::coords(&basis, &mub), d_len(ps));
        let spec = ConeIntegrandSpec {
            linear_factors: lin.into_iter().map(|(a, e)| (a, e as u32)).collect(),
            td_factors: td
                .into_iter()
                .flat_map(|(a, e)| core::iter::repeat_n(a, e as usize))
                .collect(),
            gaussian_weight: Some(1.0 / t),
            linear_exponent: pg,
            normalizer: 0.0,
        };
        let cone = Cone {
            basis,
            generators: ps.coweights.clone(),
        };
        integrate_cone_mc(&spec, &cone, splitmix(num.seed, w as u64), num.mc_samples)?
    };
    Ok(est.scale_log(eps, norm))
}

fn d_len(ps: &PositiveSystem) -> usize {
    ps.datum.r0
}

/// One point of the t-sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceSample {
    pub t: f64,
    pub trace: Estimate,
    pub i_value: Estimate,
    /// (2 pi)^{-m/2} [pi^k(rho^k)]^{-1} t^{-(m+n-r0)/2} e^{-c_g t/2}; may underflow.
    pub prefactor: f64,
    pub ln_prefactor: f64,
}

pub fn ln_prefactor(ps: &PositiveSystem, t: f64) -> f64 {
    let d = &ps.datum;
    let (m, n, r0) = (d.m() as f64, d.n() as f64, d.r0 as f64);
    -0.5 * m * libm::log(2.0 * PI)
        - libm::log(ps.pi_k(&ps.rho_k))
        - 0.5 * (m + n - r0) * libm::log(t)
        - 0.5 * ps.c_g * t
}

/// The G-trace of the heat kernel twisted by the K-type of highest weight lambda.
pub fn trace_g(
    ps: &PositiveSystem,
    lambda: &HighestWeight,
    t: f64,
    num: &Numerics,
) -> Result<TraceSample> {
    let mu = &lambda.lambda + &ps.rho_k;
    let i_value = i_t(ps, &mu, t, num)?;
    let lp = ln_prefactor(ps, t);
    let trace = i_value.scale_log(1.0, lp);
    if !(trace.value > 0.0) {
        return Err(Error::AssumptionViolated(format!(
            "trace at t = {t} is not positive ({:e})",
            trace.to_f64()
        )));
    }
    Ok(TraceSample {
        t,
        trace,
        i_value,
        prefactor: libm::exp(lp),
        ln_prefactor: lp,
    })
}

/// (2 pi t)^{m/2} e^{c_g t/2} Tr / dim E; tends to one as t goes to zero.
pub fn small_t_diagnostic(
    ps: &PositiveSystem,
    lambda: &HighestWeight,
    t: f64,
    num: &Numerics,
) -> Result<f64> {
    if t > 1e-2 {
        return Err(Error::InvalidArgument(format!(
            "short-time diagnostic needs t <= 1e-2, got {t}"
        )));
    }
    let s = trace_g(ps, lambda, t, num)?;
    let dim = weyl_dimension(ps, lambda)? as f64;
    let m = ps.datum.m() as f64;
    Ok(libm::exp(
        0.5 * m * libm::log(2.0 * PI * t) + 0.5 * ps.c_g * t + s.trace.ln_abs() - libm::log(dim),
    ))
}

/// pi_0^g(t mu(1)) e^{t |mu(1)|^2 / 2} without checking the regularity
/// precondition, as `(sign, ln|value|)`.
pub fn harmonic_k_t(ps: &PositiveSystem, mu: &Vec0, t: f64) -> LogValue {
    let mub = mu_underline(ps, mu, ps.wg.identity);
    let p = ps.pi_g(&(&mub * t));
    if p == 0.0 {
        return (0.0, f64::NEG_INFINITY);
    }
    (p.signum(), libm::log(p.abs()) + 0.5 * t * mub.norm_squared())
}

fn check_equal_rank_regular(ps: &PositiveSystem, mu: &Vec0) -> Result<Vec0> {
    if ps.datum.dim_a != 0 {
        return Err(Error::NotEqualRankRegular);
    }
    let mub = mu_underline(ps, mu, ps.wg.identity);
    let dec = langlands_decompose(ps, &mub)?;
    if !dec.pair.delta1.is_empty() || !dec.pair.delta2.is_empty() {
        return Err(Error::NotEqualRankRegular);
    }
    Ok(mub)
}

/// K_t = pi_0^g(t mu(1)) e^{t |mu(1)|^2/2} in the equal-rank regular case.
pub fn k_t_closed(ps: &PositiveSystem, mu: &Vec0, t: f64) -> Result<f64> {
    check_equal_rank_regular(ps, mu)?;
    let (s, l) = harmonic_k_t(ps, mu, t);
    Ok(s * libm::exp(l))
}

/// Quadrature of int_{t0} pi_0^g(Y) e^{<mu(1),Y> - |Y|^2/2t} dY/(2 pi t)^{r0/2}.
pub fn plain_pi_integral(
    ps: &PositiveSystem,
    mu: &Vec0,
    t: f64,
    num: &Numerics,
) -> Result<Estimate> {
    check_t(t)?;
    let mub = mu_underline(ps, mu, ps.wg.identity);
    let (basis, tg) = split_tg(ps);
    let k = basis.len();
    let f = RootIntegrand {
        lin: ps
            .pos_g
            .iter()
            .map(|&i| (ps.root(i).clone(), ps.datum.roots[i].dim() as f64))
            .collect(),
        exponent: Some(mub.clone()),
        inv_t: 1.0 / t,
        ..Default::default()
    };
    let est = integrate_root_integrand(
        &Domain::whole(basis),
        &f,
        truncation_radius(ps, mu, t),
        &[&mub * t],
        libm::sqrt(t),
        num.tol,
    )?;
    Ok(est.scale_log(1.0, ln_normalizer(k, &tg, &mub, t)))
}

/// J_t - K_t with J_t = I_t(mu, 1), computed without cancellation as the
/// chamber excess of pihat_0 over pi_0 minus the mass of pi_0 outside C+.
#[derive(Debug, Clone, PartialEq)]
pub struct Remainder {
    pub t: f64,
    pub ln_k: f64,
    pub inside: Estimate,
    pub outside: Estimate,
    pub total: Estimate,
    /// ln |J_t - K_t| - ln K_t.
    pub ln_ratio: f64,
}

pub fn regular_remainder(
    ps: &PositiveSystem,
    mu: &Vec0,
    t: f64,
    num: &Numerics,
) -> Result<Remainder> {
    check_t(t)?;
    let mub = check_equal_rank_regular(ps, mu)?;
    let d = &ps.datum;
    let (basis, tg) = split_tg(ps);
    let k = basis.len();
    let norm = ln_normalizer(k, &tg, &mub, t);
    let radius = truncation_radius(ps, mu, t);
    let width = libm::sqrt(t);
    let dom = Domain::cone(basis, ps.coweights.clone())?;
    let pi0 = |w: usize| -> Vec<(Vec0, f64)> {
        let el = ps.wg.get(w);
        ps.pos_g
            .iter()
            .map(|&i| (el.apply(ps.root(i)), d.roots[i].dim() as f64))
            .collect()
    };
    let inside_f = RootIntegrand {
        lin: pi0(ps.wg.identity),
        td_excess: ps
            .pos_p()
            .iter()
            .map(|&i| (ps.root(i).clone(), d.roots[i].mult_p as f64))
            .collect(),
        exponent: Some(mub.clone()),
        inv_t: 1.0 / t,
        ..Default::default()
    };
    let inside = integrate_root_integrand(&dom, &inside_f, radius, &[linalg::zeros(d.r0)], 1.0, num.tol)?
        .scale_log(1.0, norm);
    let mut outside = Estimate::exact(0.0);
    for w in 0..ps.wg.len() {
        if w == ps.wg.identity {
            continue;
        }
        let wm = ps.wg.get(w).apply(&mub);
        let f = RootIntegrand {
            lin: pi0(w),
            exponent: Some(wm.clone()),
            inv_t: 1.0 / t,
            ..Default::default()
        };
        let peak = cone_project(ps, &(&wm * t));
        let e = integrate_root_integrand(&dom, &f, radius, &[peak], width, num.tol)?;
        outside = outside.add(&e.scale_log(1.0, norm));
    }
    let total = inside.add(&outside.neg());
    let (_, ln_k) = harmonic_k_t(ps, mu, t);
    Ok(Remainder {
        t,
        ln_k,
        inside,
        outside,
        ln_ratio: total.ln_abs() - ln_k,
        total,
    })
}

/// Least-squares slope of `ln|J_t - K_t| / K_t` against t.
pub fn remainder_slope(
    ps: &PositiveSystem,
    mu: &Vec0,
    ts: &[f64],
    num: &Numerics,
) -> Result<f64> {
    let pts = ts
        .iter()
        .map(|&t| regular_remainder(ps, mu, t, num).map(|r| (t, r.ln_ratio)))
        .collect::<Result<Vec<_>>>()?;
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mt) * (p.0 - mt)).sum();
    Ok(sxy / sxx)
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
        Numerics::default()
    }

    #[test]
    fn sl2r_integrand_against_direct_formula() {
        // int (x/sinh x) e^{-x^2/2} dx / sqrt(2 pi), the textbook SL(2,R) form
        let (ps, _) = setup("sl2R", &[0.0]);
        let direct = integrate_adaptive(
            |x| {
                let s = if x[0] == 0.0 { 1.0 } else { x[0] / libm::sinh(x[0]) };
                s * libm::exp(-x[0] * x[0] / 2.0) / libm::sqrt(2.0 * PI)
            },
            &[-40.0],
            &[40.0],
            1e-12,
        )
        .unwrap();
        let i = i_t(&ps, &linalg::from_slice(&[0.0]), 1.0, &num()).unwrap();
        assert!((i.to_f64() - direct.value).abs() < 1e-10);
    }

    #[test]
    fn sl2r_trace_against_direct_formula() {
        for lambda in [0.0, 1.0, 3.0] {
            let (ps, l) = setup("sl2R", &[lambda]);
            let t = 1.0;
            let direct = integrate_adaptive(
                |x| {
                    let s = if x[0] == 0.0 { 1.0 } else { x[0] / libm::sinh(x[0]) };
                    s * libm::exp(-x[0] * x[0] / (2.0 * t) - lambda * x[0])
                        / libm::sqrt(2.0 * PI * t)
                },
                &[-60.0],
                &[60.0],
                1e-12,
            )
            .unwrap()
            .value
                * libm::exp(-t / 2.0)
                / (2.0 * PI * t);
            let s = trace_g(&ps, &l, t, &num()).unwrap();
            assert!((s.trace.to_f64() / direct - 1.0).abs() < 1e-9, "lambda={lambda}");
            assert!((s.trace.to_f64() - s.prefactor * s.i_value.to_f64()).abs() < 1e-14);
        }
    }

    #[test]
    fn sl2r_reflected_weight_gives_the_same_trace() {
        let (a, la) = setup("sl2R", &[3.0]);
        let (b, lb) = setup("sl2R", &[-3.0]);
        let ta = trace_g(&a, &la, 2.0, &num()).unwrap().trace.to_f64();
        let tb = trace_g(&b, &lb, 2.0, &num()).unwrap().trace.to_f64();
        assert!((ta / tb - 1.0).abs() < 1e-10);
    }

    #[test]
    fn mu_underline_examples() {
        let (ps, _) = setup("sl2R", &[2.0]);
        let mu = linalg::from_slice(&[2.0]);
        let minus = (0..2).find(|&w| w != ps.wg.identity).unwrap();
        assert_eq!(mu_underline(&ps, &mu, ps.wg.identity)[0], 1.0);
        assert_eq!(mu_underline(&ps, &mu, minus)[0], -3.0);
        assert_eq!(mu_underline(&ps, &ps.rho_g.clone(), ps.wg.identity)[0], 0.0);
    }

    #[test]
    fn chambers_add_up_and_carry_their_sign() {
        let (ps, _) = setup("sl2R", &[0.0]);
        let mu = linalg::from_slice(&[0.0]);
        let full = i_t(&ps, &mu, 5.0, &num()).unwrap();
        let mut sum = Estimate::exact(0.0);
        for w in 0..ps.wg.len() {
            let c = i_t_chamber(&ps, &mu, w, 5.0, &num()).unwrap();
            let (_, w2) = decompose_w(&ps, w);
            assert!(c.value * ps.wk.get(w2).sign as f64 > 0.0);
            sum = sum.add(&c);
        }
        let diff = (sum.to_f64() - full.to_f64()).abs();
        assert!(diff <= sum.err_f64() + full.err_f64() + 1e-12 * full.to_f64());
    }

    #[test]
    fn identity_chamber_dominates() {
        let (ps, _) = setup("sl2R", &[2.0]);
        let mu = linalg::from_slice(&[2.0]);
        let minus = (0..2).find(|&w| w != ps.wg.identity).unwrap();
        let ratio = |t: f64| {
            let a = i_t_chamber(&ps, &mu, minus, t, &num()).unwrap();
            let b = i_t_chamber(&ps, &mu, ps.wg.identity, t, &num()).unwrap();
            libm::exp(a.ln_abs() - b.ln_abs())
        };
        let (r20, r80) = (ratio(20.0), ratio(80.0));
        assert!(r80 < r20 && r80 < 1e-10);
    }

    #[test]
    fn k_antisymmetry_on_sl3r() {
        let (ps, _) = setup("sl3R", &[1.0]);
        let mu = linalg::from_slice(&[1.5]);
        let a = i_t(&ps, &mu, 3.0, &num()).unwrap().to_f64();
        let b = i_t(&ps, &(-&mu), 3.0, &num()).unwrap().to_f64();
        assert!((a + b).abs() < 1e-8 * a.abs());
    }

    #[test]
    fn closed_form_equal_rank_regular() {
        let (ps, _) = setup("sl2R", &[2.0]);
        let mu = linalg::from_slice(&[2.0]);
        let k = k_t_closed(&ps, &mu, 10.0).unwrap();
        assert!((k / (20.0 * libm::exp(5.0)) - 1.0).abs() < 1e-14);
        for t in [10.0, 50.0] {
            let q = plain_pi_integral(&ps, &mu, t, &num()).unwrap();
            let (_, lk) = harmonic_k_t(&ps, &mu, t);
            assert!((q.ln_abs() - lk).abs() < 1e-6);
        }
        let (p1, _) = setup("sl2R", &[1.0]);
        assert_eq!(
            k_t_closed(&p1, &linalg::from_slice(&[1.0]), 10.0).unwrap_err(),
            Error::NotEqualRankRegular
        );
        // mu(1) = 0 lies on every wall
        assert_eq!(harmonic_k_t(&p1, &linalg::from_slice(&[1.0]), 10.0).0, 0.0);
        let (s3, _) = setup("sl3R", &[2.0]);
        assert_eq!(
            k_t_closed(&s3, &linalg::from_slice(&[3.0]), 10.0).unwrap_err(),
            Error::NotEqualRankRegular
        );
    }

    #[test]
    fn closed_form_scaling_identity() {
        // K_{4t}/K_t = 4^{deg pi} e^{3 t |mu(1)|^2 / 2}
        let (ps, _) = setup("a2split-test", &[0.0, 0.0]);
        let mu = &ps.rho_g * 2.0;
        let t = 3.0;
        let mub = mu_underline(&ps, &mu, ps.wg.identity);
        let ratio = k_t_closed(&ps, &mu, 4.0 * t).unwrap() / k_t_closed(&ps, &mu, t).unwrap();
        let expect = libm::pow(4.0, 3.0) * libm::exp(1.5 * t * mub.norm_squared());
        assert!((ratio / expect - 1.0).abs() < 1e-12);
    }

    #[test]
    fn remainder_decays_exponentially() {
        let (ps, _) = setup("sl2R", &[2.0]);
        let mu = linalg::from_slice(&[2.0]);
        let slope = remainder_slope(&ps, &mu, &[20.0, 50.0, 100.0, 200.0], &num()).unwrap();
        assert!(slope < -0.05, "slope {slope}");
        // at moderate t the decomposition agrees with a direct subtraction
        let r = regular_remainder(&ps, &mu, 4.0, &num()).unwrap();
        let j = i_t_chamber(&ps, &mu, ps.wg.identity, 4.0, &num()).unwrap().to_f64();
        let k = k_t_closed(&ps, &mu, 4.0).unwrap();
        assert!((r.total.to_f64() - (j - k)).abs() < 1e-8 * k);
    }

    #[test]
    fn short_time_limit_for_every_catalog_entry() {
        for e in catalog::all() {
            let lambda = vec![0.0; e.datum.r0];
            let ps = choose_positive_system(&e.datum, None, &HighestWeight::new(&lambda)).unwrap();
            let v = small_t_diagnostic(&ps, &HighestWeight::new(&lambda), 1e-3, &num()).unwrap();
            assert!((v - 1.0).abs() < 0.01, "{}: {v}", e.datum.name);
        }
        // lambda = 5 sits O(t lambda^2) away from one: compare with the
        // direct Gaussian average of (y/sinh y) e^{lambda y} instead
        let (ps, l) = setup("sl2R", &[5.0]);
        let t = 1e-3;
        let v = small_t_diagnostic(&ps, &l, t, &num()).unwrap();
        let s = libm::sqrt(t);
        let direct = integrate_adaptive(
            |x| {
                let y = x[0] * s;
                let r = if y == 0.0 { 1.0 } else { y / libm::sinh(y) };
                r * libm::exp(5.0 * y - x[0] * x[0] / 2.0) / libm::sqrt(2.0 * PI)
            },
            &[-14.0],
            &[14.0],
            1e-12,
        )
        .unwrap()
        .value;
        assert!((v / direct - 1.0).abs() < 1e-9);
        assert!((v - 1.0126).abs() < 1e-3);
    }
}
