//! The invariant suite behind `heattrace verify`.
//!
//! Every check samples its random inputs from a SplitMix stream keyed by the
//! run seed, so a suite run is reproducible.

use heattrace_core::chambers::{
    cone_project_full, decompose_w, dominating_elements, generated_subgroup, lambda_map_via,
    langlands_decompose, levi_data, wgk_set, PositiveSystem, SimplePair,
};
use heattrace_core::constants::{
    all_chamber_constants, asymptotic_constants, classify, verify_theorems, AsymptoticConstants,
    Convention,
};
use heattrace_core::heattrace::{
    i_t, i_t_chamber, integrate_root_integrand, remainder_slope, small_t_diagnostic, split_tg,
    trace_g, truncation_radius, Domain, Numerics, RootIntegrand,
};
use heattrace_core::novikov::{
    band_weight, casimir_scalar, delta_g, ns_bundle, ns_flat, FlatTwist, NsValue,
};
use heattrace_core::quadrature::{
    fit_asymptotics, integrate_adaptive, integrate_cone_mc, splitmix, Cone, ConeIntegrandSpec,
    Estimate,
};
use heattrace_core::rootdata::{
    character_value, check_datum, reflection, simple_roots_of, weyl_dimension, HighestWeight,
};
use heattrace_core::{linalg, Error, Vec0, TAU_ZERO};
use nalgebra::DMatrix;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub module: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Outcome = Result<String, String>;

/// Uniform draws from a SplitMix stream.
struct Draws {
    seed: u64,
    n: u64,
}

impl Draws {
    fn new(seed: u64, salt: u64) -> Self {
        Self {
            seed: splitmix(seed, salt),
            n: 0,
        }
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.n += 1;
        let u = (splitmix(self.seed, self.n) >> 11) as f64 / (1u64 << 53) as f64;
        lo + (hi - lo) * u
    }

    fn vec(&mut self, r0: usize, lo: f64, hi: f64) -> Vec0 {
        Vec0::from_fn(r0, |_, _| self.uniform(lo, hi))
    }

    /// Coordinates on the coweights, a quarter of them set to zero to hit faces.
    fn dominant(&mut self, ps: &PositiveSystem) -> Vec0 {
        let mut y = Vec0::zeros(ps.datum.r0);
        for w in &ps.coweights {
            let c = self.uniform(-1.0, 3.0).max(0.0);
            y.axpy(c, w, 1.0);
        }
        y
    }

    fn dual_cone(&mut self, ps: &PositiveSystem) -> Vec0 {
        let mut y = Vec0::zeros(ps.datum.r0);
        for &i in &ps.simple_g {
            let c = self.uniform(-0.5, 1.5).max(0.0);
            y.axpy(c, ps.root(i), 1.0);
        }
        y
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn core_err(e: Error) -> String {
    e.to_string()
}

fn in_dual_cone(ps: &PositiveSystem, v: &Vec0, tol: f64) -> bool {
    linalg::coefficients(&ps.simple_vectors(), v)
        .map(|c| c.iter().all(|&x| x >= -tol))
        .unwrap_or(false)
}

fn close(a: &Estimate, b: &Estimate, rel: f64) -> bool {
    let (x, y) = (a.to_f64(), b.to_f64());
    (x - y).abs() <= a.bound() + b.bound() + rel * x.abs().max(y.abs())
}

/// All pairs delta1 within delta2 of simple roots.
fn simple_pairs(ps: &PositiveSystem) -> Vec<SimplePair> {
    let k = ps.simple_g.len();
    let pick = |m: u32| -> Vec<usize> {
        (0..k).filter(|j| m & (1 << j) != 0).map(|j| ps.simple_g[j]).collect()
    };
    let mut out = Vec::new();
    for m2 in 0u32..(1 << k) {
        for m1 in 0u32..(1 << k) {
            if m1 & !m2 == 0 {
                out.push(SimplePair::new(ps, &pick(m1), &pick(m2)));
            }
        }
    }
    out
}

// ---- rootdata ----

fn axioms(ps: &PositiveSystem) -> Outcome {
    let r = check_datum(&ps.datum);
    match r.first_failure() {
        None => Ok(format!("{} axioms, m = {}, n = {}", r.checks.len(), r.m, r.n)),
        Some(c) => Err(format!("{}: {}", c.axiom, c.detail)),
    }
}

fn weyl_closure(ps: &PositiveSystem) -> Outcome {
    let d = &ps.datum;
    for (k, w) in ps.wg.iter().enumerate() {
        for r in &d.roots {
            let j = d
                .find_root(&w.apply(&r.v))
                .ok_or_else(|| format!("element {k} maps a root outside R"))?;
            ensure(d.roots[j].dim() == r.dim(), || {
                format!("element {k} changes dim g_alpha")
            })?;
        }
    }
    Ok(format!("{} elements x {} roots", ps.wg.len(), d.roots.len()))
}

fn signs(ps: &PositiveSystem) -> Outcome {
    let g = &ps.wg;
    for a in 0..g.len() {
        let e = g.get(a);
        ensure((e.matrix.determinant() - e.sign as f64).abs() < 1e-10, || {
            format!("sign of element {a} differs from its determinant")
        })?;
        ensure(e.sign == if e.word.len() % 2 == 0 { 1 } else { -1 }, || {
            format!("sign of element {a} differs from (-1)^length")
        })?;
        for b in 0..g.len() {
            ensure(g.get(g.compose(a, b)).sign == e.sign * g.get(b).sign, || {
                format!("eps is not multiplicative at ({a}, {b})")
            })?;
        }
    }
    for &i in &ps.simple_g {
        let s = reflection(&ps.datum, ps.root(i)).map_err(core_err)?;
        ensure(s.sign == -1, || String::from("a simple reflection has sign +1"))?;
    }
    Ok(format!("{} pairs", g.len() * g.len()))
}

fn rho_k_equivariance(ps: &PositiveSystem) -> Outcome {
    for (k, &g) in ps.wk_in_g.iter().enumerate() {
        let mut rho = Vec0::zeros(ps.datum.r0);
        for &i in &ps.pos_k {
            rho.axpy(0.5, ps.root(ps.wg.get(g).perm[i]), 1.0);
        }
        let expect = ps.wk.get(k).apply(&ps.rho_k);
        ensure(linalg::approx_eq(&rho, &expect, 1e-10), || {
            format!("rho_k of w R+(k) differs from w rho_k for k-element {k}")
        })?;
    }
    Ok(format!("|W(k)| = {}", ps.wk.len()))
}

fn character_invariance(ps: &PositiveSystem, lambda: &HighestWeight, dr: &mut Draws) -> Outcome {
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let y = dr.vec(ps.datum.r0, -1.5, 1.5);
        let base = character_value(ps, lambda, &y).map_err(core_err)?;
        for w in ps.wk.iter() {
            let moved = character_value(ps, lambda, &w.apply(&y)).map_err(core_err)?;
            let rel = (moved - base).abs() / base.abs().max(1.0);
            worst = worst.max(rel);
        }
    }
    ensure(worst <= 1e-10, || format!("relative deviation {worst:e}"))?;
    Ok(format!("max relative deviation {worst:e}"))
}

fn dimension_limit(ps: &PositiveSystem, lambda: &HighestWeight) -> Outcome {
    let dim = weyl_dimension(ps, lambda).map_err(core_err)? as f64;
    let mut ray = ps.rho_k.clone();
    for (j, x) in ray.iter_mut().enumerate() {
        *x += 0.013 / (j + 1) as f64;
    }
    let near = character_value(ps, lambda, &(ray.normalize() * 1e-5)).map_err(core_err)?;
    let rel = (near - dim).abs() / dim;
    ensure(rel <= 1e-6, || format!("dim {dim}, limit {near}"))?;
    Ok(format!("dim E = {dim}, relative gap {rel:e}"))
}

/// |W(g)| from the orbit of a generic vector under root reflections, an
/// independent count of the group generated from simple reflections.
fn group_order(ps: &PositiveSystem) -> Outcome {
    let d = &ps.datum;
    let mut v = Vec0::zeros(d.r0);
    for (j, x) in v.iter_mut().enumerate() {
        *x = 1.0 + 0.37 * (j as f64 + 1.0).sqrt();
    }
    let mut orbit = vec![v];
    let mut frontier = 0;
    while frontier < orbit.len() {
        let x = orbit[frontier].clone();
        frontier += 1;
        for r in &d.roots {
            let a = &r.v;
            let y = &x - a * (2.0 * a.dot(&x) / a.dot(a));
            if !orbit.iter().any(|z| linalg::approx_eq(z, &y, 1e-8)) {
                orbit.push(y);
            }
        }
        if orbit.len() > heattrace_core::GROUP_CAP {
            return Err(String::from("orbit exceeds the group cap"));
        }
    }
    ensure(orbit.len() == ps.wg.len(), || {
        format!("orbit has {} points, group {} elements", orbit.len(), ps.wg.len())
    })?;
    Ok(format!("|W(g)| = {}", ps.wg.len()))
}

// ---- chambers ----

fn projection_monotone(ps: &PositiveSystem, dr: &mut Draws) -> Outcome {
    for _ in 0..50 {
        let u = dr.dominant(ps);
        let v = &u + dr.dual_cone(ps);
        ensure(v.norm() >= u.norm() - 1e-12, || format!("|v| < |u| for u = {u:?}"))?;
        if (v.norm() - u.norm()).abs() <= TAU_ZERO {
            ensure(linalg::approx_eq(&u, &v, 1e-6), || String::from("|v| = |u| with v != u"))?;
        }
        let p = cone_project_full(ps, &dr.vec(ps.datum.r0, -6.0, 6.0));
        ensure(ps.is_dominant(&p.vstar), || String::from("projection is not dominant"))?;
    }
    Ok(String::from("50 samples"))
}

fn pairing_maximality(ps: &PositiveSystem, dr: &mut Draws) -> Outcome {
    let g = &ps.wg;
    let fixes = |x: &Vec0| -> Vec<usize> {
        (0..g.len())
            .filter(|&w| linalg::approx_eq(&g.get(w).apply(x), x, 1e-9))
            .collect()
    };
    let mut equalities = 0;
    for _ in 0..30 {
        let u = dr.dominant(ps);
        let v = dr.dominant(ps);
        let (su, sv) = (fixes(&u), fixes(&v));
        let top = u.dot(&v);
        for w in 0..g.len() {
            let p = u.dot(&g.get(w).apply(&v));
            ensure(p <= top + 1e-12, || format!("<u, w v> > <u, v> for w = {w}"))?;
            if (p - top).abs() <= 1e-9 {
                equalities += 1;
                let split = su.iter().any(|&a| sv.iter().any(|&b| g.compose(a, b) == w));
                ensure(split, || format!("w = {w} attains the maximum without factoring"))?;
            }
        }
    }
    Ok(format!("30 samples, {equalities} equality cases"))
}

fn langlands_monotone(ps: &PositiveSystem, dr: &mut Draws) -> Outcome {
    let mut used = 0;
    for _ in 0..50 {
        let lo = dr.vec(ps.datum.r0, -4.0, 4.0);
        let hi = &lo + dr.dual_cone(ps);
        let (Ok(dl), Ok(dh)) = (langlands_decompose(ps, &lo), langlands_decompose(ps, &hi)) else {
            continue;
        };
        used += 1;
        for dec in [&dl, &dh] {
            let scale = 1.0 + dec.v01.norm() * dec.vstar.norm();
            ensure(dec.v01.dot(&dec.vstar).abs() <= 1e-9 * scale, || {
                String::from("<v - v*, v*> != 0")
            })?;
            ensure(in_dual_cone(ps, &-&dec.v01, 1e-9), || String::from("v* - v outside the dual cone"))?;
        }
        ensure(in_dual_cone(ps, &(&dh.v2 - &dl.v2), 1e-9), || String::from("v2 is not monotone"))?;
        ensure(dh.v2.norm() >= dl.v2.norm() - 1e-12, || String::from("|v2| decreased"))?;
        if (dh.v2.norm() - dl.v2.norm()).abs() <= TAU_ZERO {
            ensure(dh.pair.delta2 == dl.pair.delta2, || String::from("delta2 changed at equal |v2|"))?;
            ensure(dh.pair.delta1.iter().all(|i| dl.pair.delta1.contains(i)), || {
                String::from("delta1 grew at equal |v2|")
            })?;
        }
    }
    Ok(format!("{used} samples outside the tolerance band"))
}

fn dual_bases(ps: &PositiveSystem) -> Outcome {
    let pairs = simple_pairs(ps);
    for pair in &pairs {
        let ob = pair.delta12(ps);
        let ac = pair.c12_generators(ps);
        for i in 0..ob.len() {
            for j in 0..ob.len() {
                let delta = if i == j { 1.0 } else { 0.0 };
                ensure((ob[i].dot(&ac[j]) - delta).abs() < 1e-10, || String::from("bases are not dual"))?;
                if i != j {
                    ensure(ob[i].dot(&ob[j]) <= TAU_ZERO, || String::from("Delta_1^2 is not obtuse"))?;
                    ensure(ac[i].dot(&ac[j]) >= -TAU_ZERO, || String::from("dual basis is not acute"))?;
                }
            }
        }
    }
    Ok(format!("{} simple pairs", pairs.len()))
}

fn volume_map(ps: &PositiveSystem) -> Outcome {
    let r0 = ps.datum.r0;
    let pairs = simple_pairs(ps);
    for pair in &pairs {
        let basis: Vec<Vec0> = pair.t01.iter().chain(&pair.t12).chain(&pair.t2g).cloned().collect();
        let image = |y: &Vec0| -> Vec0 {
            let mut parts = [Vec0::zeros(r0), Vec0::zeros(r0), Vec0::zeros(r0)];
            for (j, &i) in ps.simple_g.iter().enumerate() {
                let slot = if pair.delta1.contains(&i) {
                    0
                } else if pair.delta2.contains(&i) {
                    1
                } else {
                    2
                };
                parts[slot].axpy(ps.root(i).dot(y), &ps.coweights[j], 1.0);
            }
            &pair.p01 * &parts[0] + &pair.p12 * &parts[1] + &parts[2]
        };
        let n = basis.len();
        let m = DMatrix::from_fn(n, n, |i, j| basis[i].dot(&image(&basis[j])));
        let det = m.determinant().abs();
        ensure((det - 1.0).abs() <= 1e-10, || format!("|det| = {det}"))?;
    }
    Ok(format!("{} simple pairs", pairs.len()))
}

fn lambda_independence(ps: &PositiveSystem, dr: &mut Draws) -> Outcome {
    let mut walls = 0;
    for k in 0..30 {
        let dom = dr.dominant(ps);
        let mu = ps.wg.get(k % ps.wg.len()).apply_inv(&dom);
        let ws = dominating_elements(ps, &mu);
        let mut outs = Vec::new();
        for &w in &ws {
            match lambda_map_via(ps, &mu, w) {
                Ok(x) => outs.push(x),
                Err(Error::ToleranceAmbiguity { .. }) => break,
                Err(e) => return Err(core_err(e)),
            }
        }
        if ws.len() > 1 {
            walls += 1;
        }
        for x in outs.iter().skip(1) {
            ensure(linalg::approx_eq(x, &outs[0], TAU_ZERO), || {
                format!("Lambda differs between chambers for mu = {:?}", mu.as_slice())
            })?;
        }
    }
    Ok(format!("30 samples, {walls} on walls"))
}

fn levi_compatibility(ps: &PositiveSystem, lambda: &HighestWeight) -> Outcome {
    let mut tested = 0;
    for pair in simple_pairs(ps).iter().filter(|p| p.delta1 == p.delta2) {
        let levi = levi_data(ps, pair, lambda);
        let in_l1 = generated_subgroup(ps, &pair.delta1).map_err(core_err)?;
        let k1 = simple_roots_of(&ps.datum, &levi.pos_k1);
        let in_k1 = generated_subgroup(ps, &k1).map_err(core_err)?;
        let chamber = pair.c01_generators(ps);
        for w in (0..ps.wg.len()).filter(|&w| in_l1[w]) {
            tested += 1;
            let (w1, w2) = decompose_w(ps, w);
            ensure(in_l1[w1] && in_k1[ps.wk_in_g[w2]], || {
                format!("factors of w = {w} leave the Levi")
            })?;
            let el = ps.wg.get(w1);
            for g in &chamber {
                let y = el.apply_inv(g);
                ensure(levi.pos_k1.iter().all(|&b| ps.root(b).dot(&y) >= -TAU_ZERO), || {
                    format!("w1 = {w1} does not map the Levi chamber into C+(k1)")
                })?;
            }
        }
    }
    let reps = wgk_set(ps);
    ensure(reps.len() * ps.wk.len() == ps.wg.len(), || {
        String::from("|W(g,k)| |W(k)| != |W(g)|")
    })?;
    Ok(format!("{tested} Levi elements, |W(g,k)| = {}", reps.len()))
}

// ---- quadrature ----

fn product_rule(dr: &mut Draws) -> Outcome {
    let a = dr.uniform(0.2, 3.0);
    let b = dr.uniform(0.1, 4.0);
    let tol = 1e-10;
    let f = |x: f64| (-a * x * x).exp() * (b * x).cos();
    let g = |y: f64| (0.3 * y).exp() / (1.0 + y * y);
    let both = integrate_adaptive(|v| f(v[0]) * g(v[1]), &[-3.0, -2.0], &[4.0, 5.0], tol)
        .map_err(core_err)?;
    let fx = integrate_adaptive(|v| f(v[0]), &[-3.0], &[4.0], tol).map_err(core_err)?;
    let gy = integrate_adaptive(|v| g(v[0]), &[-2.0], &[5.0], tol).map_err(core_err)?;
    let prod = fx.to_f64() * gy.to_f64();
    let slack = both.err_f64() + fx.err_f64() * gy.to_f64().abs() + gy.err_f64() * fx.to_f64().abs();
    let diff = (both.to_f64() - prod).abs();
    ensure(diff <= slack + 4.0 * tol * prod.abs(), || format!("difference {diff:e}"))?;
    Ok(format!("difference {diff:e}"))
}

fn mc_seeds(seed: u64) -> Outcome {
    let e = |x: f64, y: f64| linalg::from_slice(&[x, y]);
    let spec = ConeIntegrandSpec {
        linear_factors: vec![(e(1.0, 0.0), 1)],
        td_factors: vec![e(1.0, 1.0)],
        gaussian_weight: Some(1.0),
        linear_exponent: e(-0.4, 0.3),
        normalizer: 1.0,
    };
    let cone = Cone {
        basis: vec![e(1.0, 0.0), e(0.0, 1.0)],
        generators: vec![e(1.0, 0.0), e(1.0, 1.0)],
    };
    let a = integrate_cone_mc(&spec, &cone, splitmix(seed, 1), 1 << 16).map_err(core_err)?;
    let b = integrate_cone_mc(&spec, &cone, splitmix(seed, 2), 1 << 16).map_err(core_err)?;
    let sigma = a.err_f64().hypot(b.err_f64());
    let z = (a.to_f64() - b.to_f64()).abs() / sigma;
    ensure(z <= 4.0, || format!("{z:.2} sigma apart"))?;
    Ok(format!("{z:.2} sigma apart"))
}

fn box_doubling(ps: &PositiveSystem, lambda: &HighestWeight, tol: f64) -> Outcome {
    let d = &ps.datum;
    let mu = &lambda.lambda + &ps.rho_k;
    let t = 5.0;
    let f = RootIntegrand {
        lin: ps.pos_k.iter().map(|&i| (ps.root(i).clone(), 1.0)).collect(),
        ahat: ps
            .pos_p()
            .iter()
            .map(|&i| (ps.root(i).clone(), d.roots[i].mult_p as f64))
            .collect(),
        exponent: Some(mu.clone()),
        inv_t: 1.0 / t,
        ..Default::default()
    };
    let dom = Domain::whole(split_tg(ps).0);
    let r = truncation_radius(ps, &mu, t);
    let c = [&mu * t];
    let a = integrate_root_integrand(&dom, &f, r, &c, t.sqrt(), tol).map_err(core_err)?;
    let b = integrate_root_integrand(&dom, &f, 2.0 * r, &c, t.sqrt(), tol).map_err(core_err)?;
    let diff = (a.to_f64() - b.to_f64()).abs();
    ensure(diff <= tol * a.to_f64().abs() + a.err_f64() + b.err_f64(), || {
        format!("{} vs {}", a.to_f64(), b.to_f64())
    })?;
    Ok(format!("relative change {:e}", diff / a.to_f64().abs()))
}

fn fit_exact(dr: &mut Draws) -> Outcome {
    let (la, beta, gamma) = (dr.uniform(-3.0, 3.0), dr.uniform(-2.0, 1.0), dr.uniform(-1.0, 1.0));
    let pts: Vec<(f64, f64)> = (0..12)
        .map(|i| {
            let t = 40.0 * 10f64.powf(i as f64 / 11.0);
            (t, la + beta * t.ln() + gamma * t)
        })
        .collect();
    let f = fit_asymptotics(&pts, 0).map_err(core_err)?;
    ensure(f.residual_max < 1e-9, || format!("residual {:e}", f.residual_max))?;
    ensure((f.beta - beta).abs() < 1e-8 && (f.gamma - gamma).abs() < 1e-10, || {
        String::from("parameters not recovered")
    })?;
    Ok(format!("residual {:e}", f.residual_max))
}

// ---- heattrace ----

fn positivity(ps: &PositiveSystem, lambda: &HighestWeight, num: &Numerics) -> Outcome {
    for t in [0.1, 1.0, 10.0, 40.0] {
        let s = trace_g(ps, lambda, t, num).map_err(core_err)?;
        ensure(s.trace.value > 0.0, || format!("trace at t = {t} is not positive"))?;
    }
    let mu = &lambda.lambda + &ps.rho_k;
    let t = 1e-3 / (1.0 + mu.norm_squared());
    let r = small_t_diagnostic(ps, lambda, t, num).map_err(core_err)?;
    ensure((0.99..=1.01).contains(&r), || format!("short-time ratio {r} at t = {t:e}"))?;
    Ok(format!("short-time ratio {r:.6} at t = {t:.2e}"))
}

fn antisymmetry(ps: &PositiveSystem, dr: &mut Draws, num: &Numerics) -> Outcome {
    for _ in 0..3 {
        let mu = dr.vec(ps.datum.r0, -2.0, 2.0);
        let t = dr.uniform(0.5, 20.0);
        let base = i_t(ps, &mu, t, num).map_err(core_err)?;
        for w in ps.wk.iter() {
            let moved = i_t(ps, &w.apply(&mu), t, num).map_err(core_err)?;
            ensure(close(&moved, &base.scale_log(w.sign as f64, 0.0), 1e-8), || {
                format!("I_t(w mu) != eps_w I_t(mu) at t = {t}")
            })?;
        }
    }
    Ok(format!("3 samples, |W(k)| = {}", ps.wk.len()))
}

fn additivity(ps: &PositiveSystem, dr: &mut Draws, num: &Numerics) -> Outcome {
    let mut worst: f64 = 0.0;
    for _ in 0..3 {
        let mu = &dr.dominant(ps) + &ps.rho_k;
        let t = dr.uniform(0.5, 20.0);
        let whole = i_t(ps, &mu, t, num).map_err(core_err)?;
        let mut sum = Estimate::exact(0.0);
        for w in 0..ps.wg.len() {
            let part = i_t_chamber(ps, &mu, w, t, num).map_err(core_err)?;
            let (_, w2) = decompose_w(ps, w);
            ensure(ps.wk.get(w2).sign as f64 * part.to_f64() > 0.0, || {
                format!("eps_w2 I_t(mu, w) <= 0 for w = {w} at t = {t}")
            })?;
            sum = sum.add(&part);
        }
        ensure(close(&sum, &whole, num.tol), || {
            format!("sum {} vs I_t {} at t = {t}", sum.to_f64(), whole.to_f64())
        })?;
        worst = worst.max((sum.to_f64() - whole.to_f64()).abs() / whole.to_f64().abs());
    }
    Ok(format!("3 samples, max relative gap {worst:e}"))
}

fn remainder(ps: &PositiveSystem, lambda: &HighestWeight, num: &Numerics) -> Outcome {
    let mu = &lambda.lambda + &ps.rho_k;
    let ts: Vec<f64> = (0..6).map(|i| 20.0 + 36.0 * i as f64).collect();
    let slope = remainder_slope(ps, &mu, &ts, num).map_err(core_err)?;
    ensure(slope < -0.05, || format!("slope {slope}"))?;
    Ok(format!("slope {slope:.4}"))
}

// ---- constants ----

fn constant_shape(
    ps: &PositiveSystem,
    lambda: &HighestWeight,
    c: &AsymptoticConstants,
) -> Outcome {
    let cls = classify(ps, lambda).map_err(core_err)?;
    let levi = levi_data(ps, cls.pair(), lambda);
    let twice = -2.0 * c.beta1_bar;
    ensure(twice >= 0.0 && twice == twice.round(), || format!("beta1_bar = {}", c.beta1_bar))?;
    ensure(c.beta1_bar == levi.beta1_bar(), || {
        format!("beta1_bar = {} but -(dim m1 + dim u12)/2 = {}", c.beta1_bar, levi.beta1_bar())
    })?;
    ensure(c.gamma2 >= 0.0, || format!("gamma2 = {}", c.gamma2))?;
    ensure((c.gamma2 - 0.5 * cls.mu2.norm_squared()).abs() < 1e-12, || String::from("gamma2 != |mu2|^2/2"))?;
    ensure(c.alpha0.value > 0.0 && c.alpha2 > 0.0, || String::from("alpha0 or alpha2 not positive"))?;
    ensure(cls.regular == (c.beta1_bar == 0.0 && cls.equal_rank), || {
        String::from("regular does not match beta1_bar = 0")
    })?;
    if cls.regular {
        ensure(ps.pos_g.iter().all(|&i| ps.root(i).dot(&cls.mu2) > 0.0), || {
            String::from("regular weight is not strictly dominant")
        })?;
    }
    Ok(format!("beta1_bar = {}, gamma2_bar = {}", c.beta1_bar, c.gamma2_bar))
}

fn theorems(
    ps: &PositiveSystem,
    lambda: &HighestWeight,
    c: &AsymptoticConstants,
    num: &Numerics,
) -> Outcome {
    let table = all_chamber_constants(ps, lambda, num).map_err(core_err)?;
    for ch in &table {
        ensure(ch.cardinalities_hold(), || format!("|A| + |B| != dim u at w = {}", ch.w))?;
    }
    let r = verify_theorems(ps, lambda, c, &table).map_err(core_err)?;
    Ok(format!(
        "|W0^2| = {}, |W0^1| = {}, sum deviation {:.3} of bound",
        r.w02.iter().filter(|b| **b).count(),
        r.w01.iter().filter(|b| **b).count(),
        r.sum_deviation
    ))
}

fn chamber_choice(
    ps: &PositiveSystem,
    lambda: &HighestWeight,
    c: &AsymptoticConstants,
    conv: Convention,
    num: &Numerics,
) -> Outcome {
    let v = &lambda.lambda + &ps.rho_k * 2.0;
    let alts = ps.alternatives(&v).map_err(core_err)?;
    for alt in &alts {
        let a = asymptotic_constants(alt, lambda, conv, num).map_err(core_err)?;
        ensure(a.beta1_bar == c.beta1_bar, || String::from("beta1_bar depends on the chamber"))?;
        ensure((a.gamma2_bar - c.gamma2_bar).abs() < 1e-12, || {
            String::from("gamma2_bar depends on the chamber")
        })?;
        ensure(close(&a.alpha0_bar, &c.alpha0_bar, 1e-8), || {
            format!("alpha0_bar {} vs {}", a.alpha0_bar.to_f64(), c.alpha0_bar.to_f64())
        })?;
    }
    Ok(format!("{} admissible positive systems", alts.len()))
}

// ---- novikov ----

fn parity_and_band(ps: &PositiveSystem) -> Outcome {
    let d = &ps.datum;
    let r = ns_flat(d, &FlatTwist::trivial(d)).map_err(core_err)?;
    ensure(delta_g(d) % 2 == d.m() % 2, || String::from("delta and m differ in parity"))?;
    ensure(r.band.0 + r.band.1 == r.m, || String::from("band is not centred at m/2"))?;
    for e in &r.per_degree {
        if let NsValue::Finite(n) = e.ns {
            ensure(n as usize == r.delta_g, || String::from("finite ns differs from delta"))?;
        }
    }
    Ok(format!("delta = {}, band [{}, {}]", r.delta_g, r.band.0, r.band.1))
}

fn band_identity(ps: &PositiveSystem, conv: Convention, num: &Numerics) -> Outcome {
    let d = &ps.datum;
    let twist = FlatTwist::trivial(d);
    let e = HighestWeight::new(band_weight(ps, &twist).as_slice());
    let cls = classify(ps, &e).map_err(core_err)?;
    ensure(cls.pair().delta1.is_empty() && cls.pair().delta2.is_empty(), || {
        String::from("band weight is not regular")
    })?;
    let c = asymptotic_constants(ps, &e, conv, num).map_err(core_err)?;
    let lhs = c.gamma2_bar + 0.5 * casimir_scalar(ps, &twist);
    let a2: f64 = twist.lambda_a.iter().map(|x| x * x).sum();
    ensure((lhs + 0.5 * a2).abs() < 1e-9, || format!("gamma2_bar + C/2 = {lhs}"))?;
    Ok(format!("gamma2_bar + C/2 = {lhs:e}"))
}

fn bundle_consistency(c: &AsymptoticConstants) -> Outcome {
    match ns_bundle(c, 1.0) {
        Ok(b) => {
            for v in [b.invariant, b.relative] {
                if let NsValue::Finite(n) = v {
                    ensure(n as f64 == -2.0 * c.beta1_bar, || {
                        format!("ns = {n} but -2 beta1_bar = {}", -2.0 * c.beta1_bar)
                    })?;
                }
            }
            Ok(format!("invariant {}, relative {}", b.invariant, b.relative))
        }
        Err(Error::AssumptionViolated(s)) => Ok(format!("not applicable: {s}")),
        Err(e) => Err(core_err(e)),
    }
}

/// Runs the whole suite for one datum and K-type.
pub fn run_suite(
    ps: &PositiveSystem,
    lambda: &HighestWeight,
    conv: Convention,
    num: &Numerics,
) -> Vec<Check> {
    let mut out = Vec::new();
    let mut push = |module: &'static str, name: &'static str, r: Outcome| {
        let (passed, detail) = match r {
            Ok(s) => (true, s),
            Err(s) => (false, s),
        };
        out.push(Check {
            module,
            name,
            passed,
            detail,
        });
    };
    let dr = &mut Draws::new(num.seed, 0x5eed);

    push("rootdata", "axioms", axioms(ps));
    push("rootdata", "weyl-closure", weyl_closure(ps));
    push("rootdata", "signs", signs(ps));
    push("rootdata", "rho-k-equivariance", rho_k_equivariance(ps));
    push("rootdata", "character-invariance", character_invariance(ps, lambda, dr));
    push("rootdata", "dimension-limit", dimension_limit(ps, lambda));
    push("rootdata", "group-order", group_order(ps));

    push("chambers", "projection-monotone", projection_monotone(ps, dr));
    push("chambers", "pairing-maximality", pairing_maximality(ps, dr));
    push("chambers", "langlands-monotone", langlands_monotone(ps, dr));
    push("chambers", "dual-bases", dual_bases(ps));
    push("chambers", "volume-map", volume_map(ps));
    push("chambers", "lambda-independence", lambda_independence(ps, dr));
    push("chambers", "levi-compatibility", levi_compatibility(ps, lambda));

    push("quadrature", "product-rule", product_rule(dr));
    push("quadrature", "mc-seeds", mc_seeds(num.seed));
    push("quadrature", "box-doubling", box_doubling(ps, lambda, num.tol));
    push("quadrature", "fit-exact", fit_exact(dr));

    push("heattrace", "positivity", positivity(ps, lambda, num));
    push("heattrace", "k-antisymmetry", antisymmetry(ps, dr, num));
    push("heattrace", "chamber-additivity", additivity(ps, dr, num));
    let regular = classify(ps, lambda).map(|c| c.regular).unwrap_or(false);
    if regular {
        push("heattrace", "regular-remainder", remainder(ps, lambda, num));
    }

    match asymptotic_constants(ps, lambda, conv, num) {
        Ok(c) => {
            push("constants", "shape", constant_shape(ps, lambda, &c));
            if conv == Convention::Multiplicity {
                push("constants", "ordering-and-sum", theorems(ps, lambda, &c, num));
            }
            push("constants", "chamber-choice", chamber_choice(ps, lambda, &c, conv, num));
            push("novikov", "bundle-consistency", bundle_consistency(&c));
        }
        Err(e) => push("constants", "asymptotic-constants", Err(core_err(e))),
    }
    push("novikov", "parity-and-band", parity_and_band(ps));
    push("novikov", "band-identity", band_identity(ps, conv, num));
    out
}
