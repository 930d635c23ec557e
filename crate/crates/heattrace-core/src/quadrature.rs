//! Integration engines: adaptive tensor Gauss-Kronrod on boxes (log-scaled so
//! that integrands near e^800 stay representable), seeded Monte Carlo on
//! simplicial cones, and the least-squares fit of the asymptotic model.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use nalgebra::{DMatrix, DVector};
use rand_chacha::ChaCha20Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::linalg;
use crate::{Error, Result, Vec0, TAU_ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateKind {
    Exact,
    Quadrature,
    MonteCarlo,
}

/// A numerical value `value * e^{log_scale}` with error `err * e^{log_scale}`.
/// For Monte Carlo estimates `err` is one standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub err: f64,
    pub kind: EstimateKind,
    pub n_evals: u64,
    pub log_scale: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            err: 0.0,
            kind: EstimateKind::Exact,
            n_evals: 0,
            log_scale: 0.0,
        }
    }

    /// The value as a plain double (may overflow to infinity).
    pub fn to_f64(&self) -> f64 {
        self.value * libm::exp(self.log_scale)
    }

    pub fn err_f64(&self) -> f64 {
        self.err * libm::exp(self.log_scale)
    }

    pub fn ln_abs(&self) -> f64 {
        libm::log(self.value.abs()) + self.log_scale
    }

    pub fn rel_err(&self) -> f64 {
        if self.value == 0.0 {
            f64::INFINITY
        } else {
            self.err / self.value.abs()
        }
    }

    /// Error bound at the confidence used across the crate: 3 sigma for
    /// Monte Carlo, the quadrature bound otherwise.
    pub fn bound(&self) -> f64 {
        match self.kind {
            EstimateKind::MonteCarlo => 3.0 * self.err,
            _ => self.err,
        }
    }

    fn merge_kind(a: EstimateKind, b: EstimateKind) -> EstimateKind {
        use EstimateKind::*;
        match (a, b) {
            (MonteCarlo, _) | (_, MonteCarlo) => MonteCarlo,
            (Quadrature, _) | (_, Quadrature) => Quadrature,
            _ => Exact,
        }
    }

    /// Re-expresses the estimate relative to `e^{log_scale}`.
    pub fn rescaled(&self, log_scale: f64) -> Self {
        let f = libm::exp(self.log_scale - log_scale);
        Self {
            value: self.value * f,
            err: self.err * f,
            log_scale,
            ..*self
        }
    }

    /// Normalises so that `|value|` is of order one.
    pub fn normalized(&self) -> Self {
        if self.value == 0.0 || !self.value.is_finite() {
            return *self;
        }
        self.rescaled(self.ln_abs())
    }

    pub fn mul(&self, other: &Estimate) -> Self {
        let a = self.normalized();
        let b = other.normalized();
        Self {
            value: a.value * b.value,
            err: a.value.abs() * b.err + b.value.abs() * a.err + a.err * b.err,
            kind: Self::merge_kind(a.kind, b.kind),
            n_evals: a.n_evals + b.n_evals,
            log_scale: a.log_scale + b.log_scale,
        }
    }

    /// Multiplies by `sign * e^{log_factor}`.
    pub fn scale_log(&self, sign: f64, log_factor: f64) -> Self {
        Self {
            value: self.value * sign,
            log_scale: self.log_scale + log_factor,
            ..*self
        }
    }

    pub fn add(&self, other: &Estimate) -> Self {
        let s = self.log_scale.max(other.log_scale);
        let a = self.rescaled(s);
        let b = other.rescaled(s);
        Self {
            value: a.value + b.value,
            err: a.err + b.err,
            kind: Self::merge_kind(a.kind, b.kind),
            n_evals: a.n_evals + b.n_evals,
            log_scale: s,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            value: -self.value,
            ..*self
        }
    }
}

// 15-point Kronrod rule with its embedded 7-point Gauss rule on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Rule {
    nodes: [f64; 15],
    wk: [f64; 15],
    wg: [f64; 15],
}

fn rule() -> Rule {
    let mut nodes = [0.0; 15];
    let mut wk = [0.0; 15];
    let mut wg = [0.0; 15];
    for j in 0..7 {
        nodes[j] = -XGK[j];
        nodes[14 - j] = XGK[j];
        wk[j] = WGK[j];
        wk[14 - j] = WGK[j];
        if j % 2 == 1 {
            wg[j] = WG[j / 2];
            wg[14 - j] = WG[j / 2];
        }
    }
    wk[7] = WGK[7];
    wg[7] = WG[3];
    Rule { nodes, wk, wg }
}

pub const MAX_DIM: usize = 4;

/// Knobs of the adaptive integrator.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveOptions {
    /// Relative tolerance.
    pub tol: f64,
    /// Absolute tolerance in units of `e^{log_scale}`; `None` picks
    /// `tol * 1e-3 * volume`, a floor for integrals that vanish.
    pub abs_tol: Option<f64>,
    pub max_panels: usize,
    /// Extra initial cut points per axis.
    pub breakpoints: Vec<Vec<f64>>,
}

impl AdaptiveOptions {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            abs_tol: None,
            max_panels: 40_000,
            breakpoints: Vec::new(),
        }
    }
}

#[derive(Debug, Clone)]
struct Panel {
    lo: Vec<f64>,
    hi: Vec<f64>,
    value: f64,
    err: f64,
    axis: usize,
}

struct HeapItem(f64, usize);

impl PartialEq for HeapItem {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for HeapItem {}
impl PartialOrd for HeapItem {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for HeapItem {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0
            .partial_cmp(&o.0)
            .unwrap_or(Ordering::Equal)
            // deterministic tie-break: older panel first
            .then(o.1.cmp(&self.1))
    }
}

/// Result of a log-integrand: `(sign, ln|f|)`; a zero value is `(0, -inf)`.
pub type LogValue = (f64, f64);

enum PanelOutcome {
    Done(Panel),
    Overflow(f64),
}

fn eval_panel<F: Fn(&[f64]) -> LogValue>(
    f: &F,
    r: &Rule,
    lo: &[f64],
    hi: &[f64],
    shift: f64,
) -> PanelOutcome {
    let d = lo.len();
    let half: Vec<f64> = (0..d).map(|j| 0.5 * (hi[j] - lo[j])).collect();
    let mid: Vec<f64> = (0..d).map(|j| 0.5 * (hi[j] + lo[j])).collect();
    let npts = 15usize.pow(d as u32);
    let mut kron = 0.0;
    let mut gauss = vec![0.0; d];
    let mut x = vec![0.0; d];
    let mut idx = vec![0usize; d];
    for p in 0..npts {
        let mut q = p;
        for j in 0..d {
            idx[j] = q % 15;
            q /= 15;
            x[j] = mid[j] + half[j] * r.nodes[idx[j]];
        }
        let (sign, la) = f(&x);
        if sign == 0.0 || la == f64::NEG_INFINITY {
            continue;
        }
        if la - shift > 650.0 {
            return PanelOutcome::Overflow(la);
        }
        let v = sign * libm::exp(la - shift);
        let wk: f64 = idx.iter().map(|&i| r.wk[i]).product();
        kron += wk * v;
        for j in 0..d {
            let mut w = r.wg[idx[j]];
            if w == 0.0 {
                continue;
            }
            for (l, &i) in idx.iter().enumerate() {
                if l != j {
                    w *= r.wk[i];
                }
            }
            gauss[j] += w * v;
        }
    }
    let jac: f64 = half.iter().product();
    let mut err = 0.0;
    let mut axis = 0;
    let mut worst = -1.0;
    for (j, g) in gauss.iter().enumerate() {
        let e = (jac * (kron - g)).abs();
        err += e;
        if e > worst {
            worst = e;
            axis = j;
        }
    }
    PanelOutcome::Done(Panel {
        lo: lo.to_vec(),
        hi: hi.to_vec(),
        value: jac * kron,
        err,
        axis,
    })
}

fn initial_cells(lo: &[f64], hi: &[f64], breakpoints: &[Vec<f64>]) -> Vec<(Vec<f64>, Vec<f64>)> {
    let d = lo.len();
    let cuts: Vec<Vec<f64>> = (0..d)
        .map(|j| {
            let mut c = vec![lo[j], hi[j]];
            if let Some(b) = breakpoints.get(j) {
                c.extend(b.iter().copied().filter(|&x| x > lo[j] && x < hi[j]));
            }
            c.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
            let min_gap = 1e-9 * (hi[j] - lo[j]);
            let mut out: Vec<f64> = Vec::with_capacity(c.len());
            for x in c {
                if out.last().is_none_or(|&l| x - l > min_gap) {
                    out.push(x);
                }
            }
            if let Some(last) = out.last_mut() {
                *last = hi[j];
            }
            out
        })
        .collect();
    let mut cells = vec![(Vec::new(), Vec::new())];
    for c in &cuts {
        let mut next = Vec::new();
        for (l, h) in &cells {
            for w in c.windows(2) {
                let mut l2: Vec<f64> = l.clone();
                let mut h2: Vec<f64> = h.clone();
                l2.push(w[0]);
                h2.push(w[1]);
                next.push((l2, h2));
            }
        }
        cells = next;
    }
    cells
}

/// Adaptive integral of `e^{g(x)}` (with sign) over a box, reported as an
/// [`Estimate`] whose `log_scale` absorbs the integrand's magnitude.
pub fn integrate_adaptive_log<F: Fn(&[f64]) -> LogValue>(
    f: F,
    lo: &[f64],
    hi: &[f64],
    opts: &AdaptiveOptions,
) -> Result<Estimate> {
    let d = lo.len();
    if d != hi.len() || d > MAX_DIM {
        return Err(Error::InvalidArgument(alloc::format!(
            "box dimension {d} unsupported (at most {MAX_DIM})"
        )));
    }
    if d == 0 {
        let (s, la) = f(&[]);
        return Ok(Estimate {
            value: s,
            err: 0.0,
            kind: EstimateKind::Quadrature,
            n_evals: 1,
            log_scale: if s == 0.0 { 0.0 } else { la },
        });
    }
    let r = rule();
    let cells = initial_cells(lo, hi, &opts.breakpoints);
    // The shift starts at the largest log-value on the initial nodes and is
    // raised (with a restart) if refinement uncovers a larger one.
    let mut shift = f64::NEG_INFINITY;
    for (l, h) in &cells {
        let mid: Vec<f64> = l.iter().zip(h).map(|(a, b)| 0.5 * (a + b)).collect();
        let (s, la) = f(&mid);
        if s != 0.0 {
            shift = shift.max(la);
        }
        for &corner in &[l, h] {
            let (s, la) = f(corner);
            if s != 0.0 {
                shift = shift.max(la);
            }
        }
    }
    if shift == f64::NEG_INFINITY {
        shift = 0.0;
    }
    let volume: f64 = lo.iter().zip(hi).map(|(a, b)| b - a).product();
    let pts = 15u64.pow(d as u32);
    'restart: loop {
        let mut panels: Vec<Panel> = Vec::with_capacity(cells.len() * 4);
        let mut heap = BinaryHeap::new();
        for (l, h) in &cells {
            match eval_panel(&f, &r, l, h, shift) {
                PanelOutcome::Done(p) => {
                    heap.push(HeapItem(p.err, panels.len()));
                    panels.push(p);
                }
                PanelOutcome::Overflow(m) => {
                    shift = m;
                    continue 'restart;
                }
            }
        }
        let mut n_evals = pts * panels.len() as u64;
        let mut live = panels.len();
        let totals = |panels: &[Panel], heap: &BinaryHeap<HeapItem>| {
            let mut v = 0.0;
            let mut e = 0.0;
            for it in heap.iter() {
                v += panels[it.1].value;
                e += panels[it.1].err;
            }
            (v, e)
        };
        let (mut value, mut err) = totals(&panels, &heap);
        loop {
            let abs_tol = opts.abs_tol.unwrap_or(opts.tol * 1e-3 * volume);
            let target = (opts.tol * value.abs()).max(abs_tol);
            if err <= target {
                // confirm with an exact re-summation
                let (v, e) = totals(&panels, &heap);
                value = v;
                err = e;
                if err <= (opts.tol * value.abs()).max(abs_tol) {
                    return Ok(Estimate {
                        value,
                        err,
                        kind: EstimateKind::Quadrature,
                        n_evals,
                        log_scale: shift,
                    });
                }
            }
            if live >= opts.max_panels {
                let (v, e) = totals(&panels, &heap);
                return Err(Error::MaxSubdivisions {
                    best: Estimate {
                        value: v,
                        err: e,
                        kind: EstimateKind::Quadrature,
                        n_evals,
                        log_scale: shift,
                    },
                });
            }
            let HeapItem(_, idx) = heap.pop().expect("non-empty panel set");
            let p = panels[idx].clone();
            let a = p.axis;
            let m = 0.5 * (p.lo[a] + p.hi[a]);
            let (mut hi1, mut lo2) = (p.hi.clone(), p.lo.clone());
            hi1[a] = m;
            lo2[a] = m;
            value -= p.value;
            err -= p.err;
            for (l, h) in [(&p.lo, &hi1), (&lo2, &p.hi)] {
                match eval_panel(&f, &r, l, h, shift) {
                    PanelOutcome::Done(c) => {
                        value += c.value;
                        err += c.err;
                        heap.push(HeapItem(c.err, panels.len()));
                        panels.push(c);
                    }
                    PanelOutcome::Overflow(mx) => {
                        shift = mx;
                        continue 'restart;
                    }
                }
            }
            n_evals += 2 * pts;
            live += 1;
        }
    }
}

/// Adaptive integral of an ordinary integrand over a box.
pub fn integrate_adaptive<F: Fn(&[f64]) -> f64>(
    f: F,
    lo: &[f64],
    hi: &[f64],
    tol: f64,
) -> Result<Estimate> {
    let mut opts = AdaptiveOptions::new(tol);
    opts.abs_tol = Some(tol * 1e-3 * lo.iter().zip(hi).map(|(a, b)| b - a).product::<f64>());
    let est = integrate_adaptive_log(
        |x| {
            let v = f(x);
            if v == 0.0 {
                (0.0, f64::NEG_INFINITY)
            } else {
                (v.signum(), libm::log(v.abs()))
            }
        },
        lo,
        hi,
        &opts,
    )?;
    Ok(est.rescaled(0.0))
}

/// A simplicial cone (or, with no generators, a whole subspace) inside t0.
#[derive(Debug, Clone, PartialEq)]
pub struct Cone {
    /// Orthonormal basis of the ambient subspace.
    pub basis: Vec<Vec0>,
    /// Extreme rays; either empty or as many as `basis`.
    pub generators: Vec<Vec0>,
}

impl Cone {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn gen_matrix(&self) -> DMatrix<f64> {
        let k = self.dim();
        DMatrix::from_fn(k, k, |i, j| self.basis[i].dot(&self.generators[j]))
    }
}

/// Integrand `prod <f,Y>^e prod Td(<f,Y>) e^{<c,Y> - s|Y|^2/2} / (2 pi)^{normalizer}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeIntegrandSpec {
    pub linear_factors: Vec<(Vec0, u32)>,
    pub td_factors: Vec<Vec0>,
    pub gaussian_weight: Option<f64>,
    pub linear_exponent: Vec0,
    /// Power of 2 pi dividing the integral.
    pub normalizer: f64,
}

/// ln Td(x) = ln(x / (1 - e^{-x})), stable for all x.
pub fn ln_td(x: f64) -> f64 {
    0.5 * x + ln_ahat(x)
}

/// ln Ahat(x) = ln((x/2) / sinh(x/2)).
pub fn ln_ahat(x: f64) -> f64 {
    let a = x.abs();
    if a < 1e-4 {
        -a * a / 24.0
    } else {
        libm::log(a) - 0.5 * a - libm::log1p(-libm::exp(-a))
    }
}

pub fn td(x: f64) -> f64 {
    libm::exp(ln_td(x))
}

/// Sampling plan of [`integrate_cone_mc`]: `n` draws split into fixed-size
/// chunks, chunk `i` using ChaCha20 stream `i` of `seed`.
pub const MC_CHUNK: u64 = 65_536;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct McChunk {
    pub sum: f64,
    pub sumsq: f64,
    pub accepted: u64,
    pub n: u64,
}

/// Proposal derived from the spec and cone; shared by all chunks.
#[derive(Debug, Clone, PartialEq)]
pub struct McPlan {
    gaussian: Option<(f64, Vec<f64>)>,
    rates: Vec<f64>,
    gen_inv: Option<DMatrix<f64>>,
    /// log of the constant multiplying the sample mean.
    log_const: f64,
    pub n: u64,
}

pub fn mc_plan(spec: &ConeIntegrandSpec, cone: &Cone, n: u64) -> Result<McPlan> {
    let k = cone.dim();
    if !cone.generators.is_empty() && cone.generators.len() != k {
        return Err(Error::InvalidArgument("cone must be simplicial".into()));
    }
    let gen_inv = if cone.generators.is_empty() {
        None
    } else {
        Some(
            cone.gen_matrix()
                .try_inverse()
                .ok_or_else(|| Error::InvalidArgument("degenerate cone".into()))?,
        )
    };
    let norm = -spec.normalizer * libm::log(2.0 * core::f64::consts::PI);
    let c: Vec<f64> = linalg::coords(&cone.basis, &spec.linear_exponent);
    if let Some(s) = spec.gaussian_weight {
        if s <= 0.0 {
            return Err(Error::InvalidArgument("gaussian weight must be positive".into()));
        }
        let mean: Vec<f64> = c.iter().map(|x| x / s).collect();
        let c2: f64 = c.iter().map(|x| x * x).sum();
        let log_const = c2 / (2.0 * s) + 0.5 * k as f64 * libm::log(2.0 * core::f64::consts::PI / s) + norm;
        return Ok(McPlan {
            gaussian: Some((s, mean)),
            rates: Vec::new(),
            gen_inv,
            log_const,
            n,
        });
    }
    if cone.generators.is_empty() {
        return Err(Error::IntegrabilityViolated(
            "a full subspace needs a Gaussian weight".into(),
        ));
    }
    let mut rates = Vec::with_capacity(k);
    for g in &cone.generators {
        let decay: f64 = spec
            .td_factors
            .iter()
            .map(|f| (-f.dot(g)).max(0.0))
            .sum();
        let growth = spec.linear_exponent.dot(g) - decay;
        if growth >= -TAU_ZERO {
            return Err(Error::IntegrabilityViolated(alloc::format!(
                "exponent grows at rate {growth:e} along a cone generator"
            )));
        }
        rates.push((-growth).max(TAU_ZERO));
    }
    let det = gen_inv.as_ref().map(|m| 1.0 / m.determinant().abs()).unwrap_or(1.0);
    let log_const = libm::log(det) - rates.iter().map(|r| libm::log(*r)).sum::<f64>() + norm;
    Ok(McPlan {
        gaussian: None,
        rates,
        gen_inv,
        log_const,
        n,
    })
}

fn polynomial_part(spec: &ConeIntegrandSpec, y: &Vec0) -> f64 {
    let mut v = 1.0;
    for (f, e) in &spec.linear_factors {
        v *= libm::pow(f.dot(y), *e as f64);
    }
    let mut lt = 0.0;
    for f in &spec.td_factors {
        lt += ln_td(f.dot(y));
    }
    v * libm::exp(lt)
}

/// Draws chunk `chunk` (of `len` samples) of the plan.
pub fn mc_chunk(
    spec: &ConeIntegrandSpec,
    cone: &Cone,
    plan: &McPlan,
    seed: u64,
    chunk: u64,
    len: u64,
) -> McChunk {
    let k = cone.dim();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let mut out = McChunk::default();
    let mut z = DVector::zeros(k);
    let dim = spec.linear_exponent.len();
    for _ in 0..len {
        out.n += 1;
        let value = match &plan.gaussian {
            Some((s, mean)) => {
                let sd = 1.0 / libm::sqrt(*s);
                for j in 0..k {
                    let e: f64 = StandardNormal.sample(&mut rng);
                    z[j] = mean[j] + sd * e;
                }
                if let Some(inv) = &plan.gen_inv {
                    if (inv * &z).iter().any(|&c| c < 0.0) {
                        continue;
                    }
                }
                let y = linalg::combine(&cone.basis, z.as_slice(), dim);
                polynomial_part(spec, &y)
            }
            None => {
                let mut y = linalg::zeros(dim);
                let mut expo = 0.0;
                for (g, &rate) in cone.generators.iter().zip(&plan.rates) {
                    let e: f64 = Exp1.sample(&mut rng);
                    let t = e / rate;
                    y.axpy(t, g, 1.0);
                    expo += (spec.linear_exponent.dot(g) + rate) * t;
                }
                polynomial_part(spec, &y) * libm::exp(expo)
            }
        };
        out.accepted += 1;
        out.sum += value;
        out.sumsq += value * value;
    }
    out
}

/// Number of chunks and the length of each for `n` samples.
pub fn mc_chunks(n: u64) -> Vec<u64> {
    let full = n / MC_CHUNK;
    let mut v = vec![MC_CHUNK; full as usize];
    if n % MC_CHUNK != 0 {
        v.push(n % MC_CHUNK);
    }
    v
}

/// Combines chunk sums (in chunk order) into an estimate.
pub fn mc_combine(plan: &McPlan, chunks: &[McChunk]) -> Result<Estimate> {
    let mut tot = McChunk::default();
    for c in chunks {
        tot.sum += c.sum;
        tot.sumsq += c.sumsq;
        tot.accepted += c.accepted;
        tot.n += c.n;
    }
    let n = tot.n.max(1) as f64;
    let rate = tot.accepted as f64 / n;
    if rate < 1e-3 {
        return Err(Error::LowAcceptance { rate });
    }
    let mean = tot.sum / n;
    let var = (tot.sumsq / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
    Ok(Estimate {
        value: mean,
        err: libm::sqrt(var / n),
        kind: EstimateKind::MonteCarlo,
        n_evals: tot.n,
        log_scale: plan.log_const,
    }
    .normalized())
}

/// Importance-sampled integral over a cone; reproducible for fixed
/// `(seed, n)` however the chunks are scheduled.
pub fn integrate_cone_mc(spec: &ConeIntegrandSpec, cone: &Cone, seed: u64, n: u64) -> Result<Estimate> {
    if cone.dim() == 0 {
        let y = linalg::zeros(spec.linear_exponent.len());
        let v = polynomial_part(spec, &y);
        return Ok(Estimate::exact(v));
    }
    let plan = mc_plan(spec, cone, n)?;
    let chunks: Vec<McChunk> = mc_chunks(n)
        .iter()
        .enumerate()
        .map(|(i, &len)| mc_chunk(spec, cone, &plan, seed, i as u64, len))
        .collect();
    mc_combine(&plan, &chunks)
}

/// SplitMix64 mixing, used to derive independent seeds.
pub fn splitmix(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Least-squares fit of `ln F(t) = ln a + b ln t + g t + sum_j c_j t^{-j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticFit {
    pub log_alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Coefficients of the inverse-power corrections t^{-1}, t^{-2}, ...
    pub corrections: Vec<f64>,
    pub residual_max: f64,
    /// Condition number of the column-scaled design matrix.
    pub cond: f64,
}

impl AsymptoticFit {
    pub fn alpha(&self) -> f64 {
        libm::exp(self.log_alpha)
    }
}

pub const FIT_COND_MAX: f64 = 1e12;

pub fn fit_asymptotics(samples: &[(f64, f64)], corrections: usize) -> Result<AsymptoticFit> {
    let p = 3 + corrections;
    if samples.len() < p.max(4) {
        return Err(Error::InvalidArgument(alloc::format!(
            "{} samples cannot determine {p} parameters",
            samples.len()
        )));
    }
    if samples.iter().any(|&(t, v)| !(t > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidArgument("samples need t > 0 and finite values".into()));
    }
    let n = samples.len();
    let mut a = DMatrix::from_fn(n, p, |i, j| {
        let t = samples[i].0;
        match j {
            0 => 1.0,
            1 => libm::log(t),
            2 => t,
            _ => libm::pow(t, -((j - 2) as f64)),
        }
    });
    let scales: Vec<f64> = (0..p)
        .map(|j| {
            let s = a.column(j).norm();
            if s > 0.0 {
                s
            } else {
                1.0
            }
        })
        .collect();
    for (j, s) in scales.iter().enumerate() {
        a.column_mut(j).unscale_mut(*s);
    }
    let b = DVector::from_iterator(n, samples.iter().map(|s| s.1));
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if cond > FIT_COND_MAX {
        return Err(Error::IllConditioned { cond });
    }
    let x = svd
        .solve(&b, 0.0)
        .map_err(|_| Error::IllConditioned { cond })?;
    let resid = &a * &x - &b;
    let coef: Vec<f64> = x.iter().zip(&scales).map(|(c, s)| c / s).collect();
    Ok(AsymptoticFit {
        log_alpha: coef[0],
        beta: coef[1],
        gamma: coef[2],
        corrections: coef[3..].to_vec(),
        residual_max: resid.amax(),
        cond,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn linear_integrand() {
        let e = integrate_adaptive(|x| x[0], &[0.0], &[1.0], 1e-12).unwrap();
        assert!((e.value - 0.5).abs() < 1e-14);
        assert!(e.err <= 1e-12);
    }

    #[test]
    fn gaussian_normalisation() {
        let e = integrate_adaptive(
            |x| libm::exp(-x[0] * x[0] / 2.0) / libm::sqrt(2.0 * PI),
            &[-12.0],
            &[12.0],
            1e-12,
        )
        .unwrap();
        assert!((e.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn half_line_moment() {
        let e = integrate_adaptive(
            |x| 2.0 * x[0] * libm::exp(-x[0] * x[0] / 2.0) / libm::sqrt(2.0 * PI),
            &[0.0],
            &[12.0],
            1e-12,
        )
        .unwrap();
        // closed form 2/sqrt(2 pi)
        assert!((e.value - 0.797_884_560_802_865_4).abs() < 1e-12);
    }

    #[test]
    fn product_integrand_in_two_dimensions() {
        let e = integrate_adaptive(
            |x| libm::cos(x[0]) * libm::exp(-x[1]),
            &[0.0, 0.0],
            &[1.0, 2.0],
            1e-11,
        )
        .unwrap();
        let exact = libm::sin(1.0) * (1.0 - libm::exp(-2.0));
        assert!((e.value - exact).abs() < 1e-10);
    }

    #[test]
    fn log_scaled_integrand_beyond_double_range() {
        // int_{-L}^{L} e^{-x^2/2 + 800} dx = sqrt(2 pi) e^800
        let opts = AdaptiveOptions::new(1e-12);
        let e = integrate_adaptive_log(|x| (1.0, 800.0 - x[0] * x[0] / 2.0), &[-40.0], &[40.0], &opts)
            .unwrap();
        let expect = 800.0 + 0.5 * libm::log(2.0 * PI);
        assert!((e.ln_abs() - expect).abs() < 1e-11);
    }

    #[test]
    fn subdivision_budget() {
        let mut opts = AdaptiveOptions::new(1e-15);
        opts.max_panels = 3;
        let err = integrate_adaptive_log(
            |x| (1.0, libm::log(libm::sqrt(x[0].abs()) + 1e-300)),
            &[0.0],
            &[1.0],
            &opts,
        )
        .unwrap_err();
        assert!(matches!(err, Error::MaxSubdivisions { .. }));
    }

    fn unit(k: usize, i: usize) -> Vec0 {
        let mut v = linalg::zeros(k);
        v[i] = 1.0;
        v
    }

    #[test]
    fn half_line_monte_carlo_matches_quadrature() {
        let cone = Cone {
            basis: alloc::vec![unit(1, 0)],
            generators: alloc::vec![unit(1, 0)],
        };
        let spec = ConeIntegrandSpec {
            linear_factors: alloc::vec![(linalg::from_slice(&[2.0]), 1)],
            td_factors: Vec::new(),
            gaussian_weight: Some(1.0),
            linear_exponent: linalg::zeros(1),
            normalizer: 0.5,
        };
        let e = integrate_cone_mc(&spec, &cone, 7, 400_000).unwrap();
        assert!((e.to_f64() - 0.797_884_560_802_865_4).abs() < 4.0 * e.err_f64());
    }

    #[test]
    fn full_space_gaussian_is_one() {
        let cone = Cone {
            basis: alloc::vec![unit(2, 0), unit(2, 1)],
            generators: Vec::new(),
        };
        let spec = ConeIntegrandSpec {
            linear_factors: Vec::new(),
            td_factors: Vec::new(),
            gaussian_weight: Some(1.0),
            linear_exponent: linalg::zeros(2),
            normalizer: 1.0,
        };
        let e = integrate_cone_mc(&spec, &cone, 1, 10_000).unwrap();
        assert!((e.to_f64() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quadrant_separates() {
        let cone = Cone {
            basis: alloc::vec![unit(2, 0), unit(2, 1)],
            generators: alloc::vec![unit(2, 0), unit(2, 1)],
        };
        let spec = ConeIntegrandSpec {
            linear_factors: alloc::vec![(unit(2, 0), 1), (unit(2, 1), 1)],
            td_factors: Vec::new(),
            gaussian_weight: Some(1.0),
            linear_exponent: linalg::zeros(2),
            normalizer: 1.0,
        };
        let e = integrate_cone_mc(&spec, &cone, 3, 1_000_000).unwrap();
        // (1/sqrt(2 pi))^2 per factor: int_0^inf y e^{-y^2/2} = 1
        assert!((e.to_f64() - 1.0 / (2.0 * PI)).abs() < 4.0 * e.err_f64());
    }

    #[test]
    fn exponential_proposal() {
        // int_0^inf y e^{-y} dy = 1
        let cone = Cone {
            basis: alloc::vec![unit(1, 0)],
            generators: alloc::vec![unit(1, 0)],
        };
        let spec = ConeIntegrandSpec {
            linear_factors: alloc::vec![(unit(1, 0), 1)],
            td_factors: Vec::new(),
            gaussian_weight: None,
            linear_exponent: linalg::from_slice(&[-1.0]),
            normalizer: 0.0,
        };
        let e = integrate_cone_mc(&spec, &cone, 5, 200_000).unwrap();
        assert!((e.to_f64() - 1.0).abs() < 4.0 * e.err_f64());
        let mut bad = spec.clone();
        bad.linear_exponent[0] = 0.5;
        assert!(matches!(
            integrate_cone_mc(&bad, &cone, 5, 10).unwrap_err(),
            Error::IntegrabilityViolated(_)
        ));
    }

    #[test]
    fn chunking_is_schedule_independent() {
        let cone = Cone {
            basis: alloc::vec![unit(1, 0)],
            generators: alloc::vec![unit(1, 0)],
        };
        let spec = ConeIntegrandSpec {
            linear_factors: alloc::vec![(unit(1, 0), 2)],
            td_factors: Vec::new(),
            gaussian_weight: Some(1.0),
            linear_exponent: linalg::zeros(1),
            normalizer: 0.0,
        };
        let n = 3 * MC_CHUNK + 17;
        let plan = mc_plan(&spec, &cone, n).unwrap();
        let lens = mc_chunks(n);
        let forward: Vec<McChunk> = lens
            .iter()
            .enumerate()
            .map(|(i, &l)| mc_chunk(&spec, &cone, &plan, 9, i as u64, l))
            .collect();
        let mut backward: Vec<(usize, McChunk)> = lens
            .iter()
            .enumerate()
            .rev()
            .map(|(i, &l)| (i, mc_chunk(&spec, &cone, &plan, 9, i as u64, l)))
            .collect();
        backward.sort_by_key(|(i, _)| *i);
        let backward: Vec<McChunk> = backward.into_iter().map(|(_, c)| c).collect();
        assert_eq!(mc_combine(&plan, &forward).unwrap(), mc_combine(&plan, &backward).unwrap());
        assert_eq!(integrate_cone_mc(&spec, &cone, 9, n).unwrap(), mc_combine(&plan, &forward).unwrap());
    }

    #[test]
    fn fit_recovers_exact_model() {
        let samples: Vec<(f64, f64)> = (0..12)
            .map(|i| {
                let t = 40.0 * libm::pow(10.0, i as f64 / 11.0);
                (t, libm::log(2.0) - 1.5 * libm::log(t) + 0.25 * t)
            })
            .collect();
        let f = fit_asymptotics(&samples, 0).unwrap();
        assert!((f.log_alpha - libm::log(2.0)).abs() < 1e-9);
        assert!((f.beta + 1.5).abs() < 1e-9);
        assert!((f.gamma - 0.25).abs() < 1e-9);
        assert!(f.residual_max < 1e-9);
        let flat: Vec<(f64, f64)> = samples.iter().map(|&(t, _)| (t, 0.7)).collect();
        let f = fit_asymptotics(&flat, 2).unwrap();
        assert!(f.beta.abs() < 1e-9 && f.gamma.abs() < 1e-9);
    }

    #[test]
    fn fit_rejects_degenerate_designs() {
        let same: Vec<(f64, f64)> = (0..6).map(|_| (5.0, 1.0)).collect();
        assert!(matches!(fit_asymptotics(&same, 0), Err(Error::IllConditioned { .. })));
        assert!(fit_asymptotics(&same[..3], 0).is_err());
    }

    #[test]
    fn td_and_ahat_are_consistent() {
        for x in [-30.0, -1.0, -1e-6, 0.0, 1e-6, 0.3, 5.0, 40.0] {
            let direct = if x == 0.0 { 1.0 } else { -x / libm::expm1(-x) };
            assert!((td(x) - direct).abs() < 1e-12 * direct.max(1.0), "x={x}");
            let ahat = libm::exp(ln_ahat(x));
            assert!((ahat - libm::exp(-x / 2.0) * direct).abs() < 1e-12);
        }
    }
}
