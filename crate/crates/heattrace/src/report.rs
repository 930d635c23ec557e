//! Serializable reports for every subcommand, and the code that fills them.

use heattrace_core::chambers::{
    levi_data, reduce_to_quasi_split, PositiveSystem,
};
use heattrace_core::constants::{
    asymptotic_constants, classify, classify_spectrum, formal_degree, verify_theorems,
    AsymptoticConstants, ChamberConstants, Convention, Factor,
};
use heattrace_core::heattrace::{Numerics, TraceSample};
use heattrace_core::novikov::{
    casimir_scalar, ns_bundle, ns_flat, FlatTwist, NsCase, NsValue,
};
use heattrace_core::quadrature::{fit_asymptotics, Estimate, EstimateKind};
use heattrace_core::rootdata::HighestWeight;
use heattrace_core::{Error, Result, Vec0};
use serde::Serialize;

use crate::runner::{chamber_table, trace_sweep, TGrid};

fn coords(v: &Vec0) -> Vec<f64> {
    v.iter().copied().collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Num {
    /// May be null when the value leaves the double range; see `ln_abs`.
    pub value: f64,
    pub err: f64,
    pub ln_abs: f64,
    pub kind: &'static str,
    pub n_evals: u64,
}

impl From<&Estimate> for Num {
    fn from(e: &Estimate) -> Self {
        Self {
            value: e.to_f64(),
            err: e.err_f64(),
            ln_abs: e.ln_abs(),
            kind: match e.kind {
                EstimateKind::Exact => "exact",
                EstimateKind::Quadrature => "quadrature",
                EstimateKind::MonteCarlo => "monte-carlo",
            },
            n_evals: e.n_evals,
        }
    }
}

/// Run parameters echoed into every report.
#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub command: String,
    pub group: String,
    pub lambda: Vec<f64>,
    pub lambda_a: Vec<f64>,
    pub seed: u64,
    pub tol: f64,
    pub mc_samples: u64,
    pub convention: &'static str,
    pub positive_roots: Vec<Vec<f64>>,
    pub tie_break: Vec<String>,
}

impl Meta {
    pub fn new(
        command: &str,
        ps: &PositiveSystem,
        lambda: &HighestWeight,
        conv: Convention,
        num: &Numerics,
    ) -> Self {
        Self {
            command: command.into(),
            group: ps.datum.name.clone(),
            lambda: coords(&lambda.lambda),
            lambda_a: lambda.lambda_a.clone(),
            seed: num.seed,
            tol: num.tol,
            mc_samples: num.mc_samples,
            convention: convention_name(conv),
            positive_roots: ps.pos_g.iter().map(|&i| coords(ps.root(i))).collect(),
            tie_break: ps.tie_break.clone(),
        }
    }
}

pub fn convention_name(c: Convention) -> &'static str {
    match c {
        Convention::Multiplicity => "multiplicity",
        Convention::Plain => "plain",
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationBlock {
    pub v: Vec<f64>,
    pub v01: Vec<f64>,
    pub mu2: Vec<f64>,
    pub delta1: Vec<Vec<f64>>,
    pub delta2: Vec<Vec<f64>>,
    pub equal_rank: bool,
    pub regular: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstantsBlock {
    pub alpha01: Num,
    pub alpha12: Num,
    pub alpha2: f64,
    pub alpha0: Num,
    pub alpha0_bar: Num,
    pub beta1: f64,
    pub beta1_bar: f64,
    pub gamma2: f64,
    pub gamma2_bar: f64,
    pub convention_sensitive: bool,
}

impl From<&AsymptoticConstants> for ConstantsBlock {
    fn from(c: &AsymptoticConstants) -> Self {
        Self {
            alpha01: (&c.alpha01).into(),
            alpha12: (&c.alpha12).into(),
            alpha2: c.alpha2,
            alpha0: (&c.alpha0).into(),
            alpha0_bar: (&c.alpha0_bar).into(),
            beta1: c.beta1,
            beta1_bar: c.beta1_bar,
            gamma2: c.gamma2,
            gamma2_bar: c.gamma2_bar,
            convention_sensitive: c.convention_sensitive,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumBlock {
    pub bottom: f64,
    pub gap: bool,
    pub atom_mass: f64,
    pub tempered_casimir: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LeviBlock {
    pub dim_m1: usize,
    pub dim_u12: usize,
    pub dim_u2: usize,
    pub rho_residual: f64,
    /// (m - m^2) - (n - n^2) for the quasi-split reduction.
    pub quasi_split_defect: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub meta: Meta,
    pub classification: ClassificationBlock,
    pub constants: ConstantsBlock,
    pub levi: LeviBlock,
    pub formal_degree: Option<f64>,
    pub spectrum: SpectrumBlock,
}

pub fn analyze(
    ps: &PositiveSystem,
    lambda: &HighestWeight,
    conv: Convention,
    num: &Numerics,
) -> Result<AnalyzeReport> {
    let cls = classify(ps, lambda)?;
    let c = asymptotic_constants(ps, lambda, conv, num)?;
    let pair = cls.pair();
    let levi = levi_data(ps, pair, lambda);
    let qs = reduce_to_quasi_split(ps, pair, lambda);
    let roots = |idx: &[usize]| idx.iter().map(|&i| coords(ps.root(i))).collect();
    let spec = classify_spectrum(&c);
    Ok(AnalyzeReport {
        meta: Meta::new("analyze", ps, lambda, conv, num),
        classification: ClassificationBlock {
            v: coords(&cls.v),
            v01: coords(&cls.decomposition.v01),
            mu2: coords(&cls.mu2),
            delta1: roots(&pair.delta1),
            delta2: roots(&pair.delta2),
            equal_rank: cls.equal_rank,
            regular: cls.regular,
        },
        constants: (&c).into(),
        levi: LeviBlock {
            dim_m1: levi.dim_m1,
            dim_u12: levi.dim_u12,
            dim_u2: levi.dim_u2,
            rho_residual: levi.rho_residual,
            quasi_split_defect: qs.defect,
        },
        formal_degree: match formal_degree(ps, lambda) {
            Ok(x) => Some(x),
            Err(Error::NotDiscreteSeriesCase) => None,
            Err(e) => return Err(e),
        },
        spectrum: SpectrumBlock {
            bottom: spec.bottom,
            gap: spec.gap,
            atom_mass: spec.atom_mass,
            tempered_casimir: spec.tempered_casimir,
        },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceRow {
    pub t: f64,
    pub trace: f64,
    pub trace_err: f64,
    /// alpha0_bar t^beta1_bar e^{gamma2_bar t}.
    pub asymptote: f64,
    pub ratio: f64,
    pub ln_trace: f64,
    pub ln_prefactor: f64,
    pub i_value: Num,
}

fn trace_row(s: &TraceSample, c: &AsymptoticConstants) -> TraceRow {
    let ln_asym = c.alpha0_bar.ln_abs() + c.beta1_bar * s.t.ln() + c.gamma2_bar * s.t;
    let ln_trace = s.trace.ln_abs();
    TraceRow {
        t: s.t,
        trace: s.trace.to_f64(),
        trace_err: s.trace.err_f64(),
        asymptote: ln_asym.exp(),
        ratio: (ln_trace - ln_asym).exp(),
        ln_trace,
        ln_prefactor: s.ln_prefactor,
        i_value: (&s.i_value).into(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceReport {
    pub meta: Meta,
    pub constants: ConstantsBlock,
    pub rows: Vec<TraceRow>,
}

pub fn trace(
    pool: &rayon::ThreadPool,
    ps: &PositiveSystem,
    lambda: &HighestWeight,
    grid: &TGrid,
    conv: Convention,
    num: &Numerics,
) -> Result<TraceReport> {
    let c = asymptotic_constants(ps, lambda, conv, num)?;
    let samples = trace_sweep(pool, ps, lambda, &grid.points(), num)?;
    Ok(TraceReport {
        meta: Meta::new("trace", ps, lambda, conv, num),
        constants: (&c).into(),
        rows: samples.iter().map(|s| trace_row(s, &c)).collect(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Fitted {
    pub alpha: f64,
    pub log_alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub corrections: Vec<f64>,
    pub residual_max: f64,
    pub cond: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Deviations {
    /// fitted alpha / alpha0_bar - 1.
    pub alpha_rel: f64,
    pub beta: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    pub meta: Meta,
    pub fitted: Fitted,
    pub closed_form: ConstantsBlock,
    pub deviations: Deviations,
    pub rows: Vec<TraceRow>,
}

pub fn fit(
    pool: &rayon::ThreadPool,
    ps: &PositiveSystem,
    lambda: &HighestWeight,
    grid: &TGrid,
    corrections: usize,
    conv: Convention,
    num: &Numerics,
) -> Result<FitReport> {
    let c = asymptotic_constants(ps, lambda, conv, num)?;
    let samples = trace_sweep(pool, ps, lambda, &grid.points(), num)?;
    let pts: Vec<(f64, f64)> = samples.iter().map(|s| (s.t, s.trace.ln_abs())).collect();
    let f = fit_asymptotics(&pts, corrections)?;
    Ok(FitReport {
        meta: Meta::new("fit", ps, lambda, conv, num),
        deviations: Deviations {
            alpha_rel: (f.log_alpha - c.alpha0_bar.ln_abs()).exp() - 1.0,
            beta: f.beta - c.beta1_bar,
            gamma: f.gamma - c.gamma2_bar,
        },
        fitted: Fitted {
            alpha: f.alpha(),
            log_alpha: f.log_alpha,
            beta: f.beta,
            gamma: f.gamma,
            corrections: f.corrections.clone(),
            residual_max: f.residual_max,
            cond: f.cond,
        },
        closed_form: (&c).into(),
        rows: samples.iter().map(|s| trace_row(s, &c)).collect(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorRow {
    pub root: Vec<f64>,
    pub exponent: f64,
}

fn factors(f: &[Factor]) -> Vec<FactorRow> {
    f.iter()
        .map(|(v, e)| FactorRow {
            root: coords(v),
            exponent: *e,
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ChamberRow {
    pub w: usize,
    pub word: Vec<usize>,
    pub w1: usize,
    pub w2: usize,
    pub eps_w2: i8,
    pub mu_underline: Vec<f64>,
    pub delta1: Vec<Vec<f64>>,
    pub delta2: Vec<Vec<f64>>,
    pub alpha01: Num,
    pub alpha12: Num,
    pub alpha2: f64,
    pub alpha_w: Num,
    pub beta_w: f64,
    pub gamma_w: f64,
    pub a01: Vec<FactorRow>,
    pub a12: Vec<FactorRow>,
    pub a2: Vec<FactorRow>,
    pub b01: Vec<FactorRow>,
    pub b12: Vec<FactorRow>,
    pub b2: Vec<FactorRow>,
    pub dim_u01: usize,
    pub dim_u12: usize,
    pub dim_u2: usize,
    pub cardinalities_hold: bool,
}

fn chamber_row(ps: &PositiveSystem, c: &ChamberConstants) -> ChamberRow {
    let roots = |idx: &[usize]| idx.iter().map(|&i| coords(ps.root(i))).collect();
    ChamberRow {
        w: c.w,
        word: ps.wg.get(c.w).word.clone(),
        w1: c.w1,
        w2: c.w2,
        eps_w2: c.eps_w2,
        mu_underline: coords(&c.mu_underline),
        delta1: roots(&c.decomposition.pair.delta1),
        delta2: roots(&c.decomposition.pair.delta2),
        alpha01: (&c.alpha01).into(),
        alpha12: (&c.alpha12).into(),
        alpha2: c.alpha2,
        alpha_w: (&c.alpha_w).into(),
        beta_w: c.beta_w,
        gamma_w: c.gamma_w,
        a01: factors(&c.a01),
        a12: factors(&c.a12),
        a2: factors(&c.a2),
        b01: factors(&c.b01),
        b12: factors(&c.b12),
        b2: factors(&c.b2),
        dim_u01: c.dim_u01,
        dim_u12: c.dim_u12,
        dim_u2: c.dim_u2,
        cardinalities_hold: c.cardinalities_hold(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremBlock {
    pub passed: bool,
    pub failure: Option<String>,
    pub w02: Vec<usize>,
    pub w01: Vec<usize>,
    pub gamma_max: Vec<usize>,
    pub beta_max: Vec<usize>,
    pub sum_w01: Option<Num>,
    pub alpha0: Num,
    /// |sum - alpha0| over the combined 3-sigma bound.
    pub sum_deviation: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChambersReport {
    pub meta: Meta,
    pub chambers: Vec<ChamberRow>,
    pub theorems: TheoremBlock,
}

fn mask(m: &[bool]) -> Vec<usize> {
    m.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
}

pub fn chambers(
    pool: &rayon::ThreadPool,
    ps: &PositiveSystem,
    lambda: &HighestWeight,
    conv: Convention,
    num: &Numerics,
) -> Result<ChambersReport> {
    let c = asymptotic_constants(ps, lambda, conv, num)?;
    let table = chamber_table(pool, ps, lambda, num)?;
    let theorems = match verify_theorems(ps, lambda, &c, &table) {
        Ok(r) => TheoremBlock {
            passed: true,
            failure: None,
            w02: mask(&r.w02),
            w01: mask(&r.w01),
            gamma_max: mask(&r.gamma_max),
            beta_max: mask(&r.beta_max),
            sum_w01: Some((&r.sum_w01).into()),
            alpha0: (&r.alpha0).into(),
            sum_deviation: Some(r.sum_deviation),
        },
        Err(e @ Error::TheoremViolation { .. }) => TheoremBlock {
            passed: false,
            failure: Some(e.to_string()),
            w02: Vec::new(),
            w01: Vec::new(),
            gamma_max: Vec::new(),
            beta_max: Vec::new(),
            sum_w01: None,
            alpha0: (&c.alpha0).into(),
            sum_deviation: None,
        },
        Err(e) => return Err(e),
    };
    Ok(ChambersReport {
        meta: Meta::new("chambers", ps, lambda, conv, num),
        chambers: table.iter().map(|c| chamber_row(ps, c)).collect(),
        theorems,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeRow {
    pub degree: usize,
    pub case: &'static str,
    pub ns: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct BundleBlock {
    pub invariant: String,
    pub relative: String,
    pub atom: f64,
    pub gamma2_bar: f64,
    pub beta1_bar: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NovikovReport {
    pub meta: Meta,
    pub delta_g: usize,
    pub m: usize,
    pub band: (usize, usize),
    pub theta_fixed: bool,
    pub casimir: f64,
    pub per_degree: Vec<DegreeRow>,
    /// Bundle invariants of the K-type `meta.lambda`; absent when the
    /// bottom of its spectrum lies above zero on the wrong side.
    pub bundle: Option<BundleBlock>,
    pub bundle_note: Option<String>,
}

fn ns_text(v: NsValue) -> String {
    v.to_string()
}

pub fn novikov(
    ps: &PositiveSystem,
    ktype: &HighestWeight,
    twist: &FlatTwist,
    vol: f64,
    conv: Convention,
    num: &Numerics,
) -> Result<NovikovReport> {
    let r = ns_flat(&ps.datum, twist)?;
    let c = asymptotic_constants(ps, ktype, conv, num)?;
    let (bundle, bundle_note) = match ns_bundle(&c, vol) {
        Ok(b) => (
            Some(BundleBlock {
                invariant: ns_text(b.invariant),
                relative: ns_text(b.relative),
                atom: b.atom,
                gamma2_bar: c.gamma2_bar,
                beta1_bar: c.beta1_bar,
            }),
            None,
        ),
        Err(Error::AssumptionViolated(s)) => (None, Some(s)),
        Err(e) => return Err(e),
    };
    Ok(NovikovReport {
        meta: Meta::new("novikov", ps, ktype, conv, num),
        delta_g: r.delta_g,
        m: r.m,
        band: r.band,
        theta_fixed: twist.theta_fixed,
        casimir: casimir_scalar(ps, twist),
        per_degree: r
            .per_degree
            .iter()
            .map(|e| DegreeRow {
                degree: e.degree,
                case: match e.case {
                    NsCase::A => "A",
                    NsCase::B => "B",
                    NsCase::C => "C",
                },
                ns: ns_text(e.ns),
            })
            .collect(),
        bundle,
        bundle_note,
    })
}
