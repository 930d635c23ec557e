//! Invariants of compact locally symmetric quotients: delta(G), Casimir
//! scalars of flat twists and Novikov-Shubin type exponents.

use alloc::vec::Vec;

use crate::chambers::PositiveSystem;
use crate::constants::AsymptoticConstants;
use crate::rootdata::CartanDatum;
use crate::{Error, Result, Vec0};

/// delta(G) = rk_C G - rk_C K, which is dim a.
pub fn delta_g(datum: &CartanDatum) -> usize {
    datum.dim_a
}

/// A flat bundle given by the highest weight of a G-representation,
/// split along t0 and a.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatTwist {
    pub lambda_t: Vec0,
    pub lambda_a: Vec<f64>,
    pub theta_fixed: bool,
}

impl FlatTwist {
    pub fn new(lambda_t: Vec0, lambda_a: Vec<f64>) -> Self {
        let theta_fixed = lambda_a.iter().all(|x| *x == 0.0);
        Self {
            lambda_t,
            lambda_a,
            theta_fixed,
        }
    }

    pub fn trivial(datum: &CartanDatum) -> Self {
        Self::new(Vec0::zeros(datum.r0), alloc::vec![0.0; datum.dim_a])
    }
}

/// C^{g,V} = -(|rho^g + lambda_t|^2 + |lambda_a|^2 - |rho^g|^2).
pub fn casimir_scalar(ps: &PositiveSystem, twist: &FlatTwist) -> f64 {
    let a2: f64 = twist.lambda_a.iter().map(|x| x * x).sum();
    -((&ps.rho_g + &twist.lambda_t).norm_squared() + a2 - ps.c_g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NsValue {
    Finite(u32),
    Infinite,
}

impl core::fmt::Display for NsValue {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            NsValue::Finite(n) => write!(f, "{n}"),
            NsValue::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NsBundle {
    /// The invariant proper: sup of beta with Tr_Gamma - vol mu({0}) = O(t^{-beta/2}).
    pub invariant: NsValue,
    /// The same exponent measured after removing e^{gamma2_bar t}, i.e.
    /// relative to the bottom of the spectrum: -2 beta1_bar, or infinity in
    /// the discrete series case.
    pub relative: NsValue,
    /// vol * mu({0}), nonzero only when gamma2_bar = beta1_bar = 0.
    pub atom: f64,
}

const GAMMA_TOL: f64 = 1e-9;

fn minus_two_beta(c: &AsymptoticConstants) -> NsValue {
    if c.beta1_bar == 0.0 {
        NsValue::Infinite
    } else {
        NsValue::Finite((-2.0 * c.beta1_bar) as u32)
    }
}

/// Novikov-Shubin type invariant of the bundle attached to a K-type.
pub fn ns_bundle(c: &AsymptoticConstants, vol: f64) -> Result<NsBundle> {
    if !(vol > 0.0) {
        return Err(Error::InvalidArgument("volume must be positive".into()));
    }
    if c.gamma2_bar > GAMMA_TOL {
        return Err(Error::AssumptionViolated(alloc::format!(
            "gamma2_bar = {} > 0",
            c.gamma2_bar
        )));
    }
    let at_zero = c.gamma2_bar.abs() <= GAMMA_TOL;
    let invariant = if at_zero {
        minus_two_beta(c)
    } else {
        NsValue::Infinite
    };
    Ok(NsBundle {
        invariant,
        relative: minus_two_beta(c),
        atom: if at_zero && c.beta1_bar == 0.0 {
            vol * c.alpha0_bar.to_f64()
        } else {
            0.0
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NsCase {
    /// Positive bottom of the spectrum.
    A,
    /// Atom and spectral gap at zero (delta = 0).
    B,
    /// No gap at zero (delta > 0).
    C,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeEntry {
    pub degree: usize,
    pub case: NsCase,
    pub ns: NsValue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NsReport {
    pub delta_g: usize,
    pub m: usize,
    /// Closed band [(m - delta)/2, (m + delta)/2].
    pub band: (usize, usize),
    pub per_degree: Vec<DegreeEntry>,
}

/// Novikov-Shubin invariants of the Hodge Laplacian twisted by a flat bundle.
pub fn ns_flat(datum: &CartanDatum, twist: &FlatTwist) -> Result<NsReport> {
    let delta = delta_g(datum);
    let m = datum.m();
    if (m + delta) % 2 != 0 {
        return Err(Error::AssumptionViolated(alloc::format!(
            "delta(G) = {delta} and m = {m} have different parity"
        )));
    }
    let band = ((m - delta) / 2, (m + delta) / 2);
    let per_degree = (0..=m)
        .map(|i| {
            let inside = twist.theta_fixed && band.0 <= i && i <= band.1;
            let (case, ns) = match (inside, delta) {
                (false, _) => (NsCase::A, NsValue::Infinite),
                (true, 0) => (NsCase::B, NsValue::Infinite),
                (true, d) => (NsCase::C, NsValue::Finite(d as u32)),
            };
            DegreeEntry { degree: i, case, ns }
        })
        .collect();
    Ok(NsReport {
        delta_g: delta,
        m,
        band,
        per_degree,
    })
}

/// lambda^E = sum of R+(p) (with multiplicity) + lambda_t: the K-type of
/// the twisted middle-degree forms.
pub fn band_weight(ps: &PositiveSystem, twist: &FlatTwist) -> Vec0 {
    let mut v = twist.lambda_t.clone();
    for i in ps.pos_p() {
        v.axpy(ps.datum.roots[i].mult_p as f64, ps.root(i), 1.0);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::chambers::choose_positive_system;
    use crate::constants::{asymptotic_constants, classify, Convention};
    use crate::heattrace::Numerics;
    use crate::linalg;
    use crate::rootdata::HighestWeight;

    fn ps_of(name: &str, lambda: &[f64]) -> (PositiveSystem, HighestWeight) {
        let d = catalog::builtin(name).unwrap().datum;
        let l = HighestWeight::new(lambda);
        (choose_positive_system(&d, None, &l).unwrap(), l)
    }

    #[test]
    fn delta_examples() {
        let d = |n| delta_g(&catalog::builtin(n).unwrap().datum);
        assert_eq!((d("sl2R"), d("sl2C"), d("sl3R")), (0, 1, 1));
        for e in catalog::all() {
            assert_eq!(delta_g(&e.datum) % 2, e.datum.m() % 2, "{}", e.datum.name);
        }
    }

    #[test]
    fn casimir_examples() {
        let (ps, _) = ps_of("sl2R", &[0.0]);
        assert_eq!(casimir_scalar(&ps, &FlatTwist::trivial(&ps.datum)), 0.0);
        let t = FlatTwist::new(linalg::from_slice(&[1.0]), Vec::new());
        assert_eq!(casimir_scalar(&ps, &t), -3.0);
        let (pc, _) = ps_of("sl2C", &[0.0]);
        let base = FlatTwist::new(linalg::from_slice(&[1.0]), alloc::vec![0.0]);
        let shifted = FlatTwist::new(linalg::from_slice(&[1.0]), alloc::vec![0.5]);
        assert!(!shifted.theta_fixed);
        assert!((casimir_scalar(&pc, &base) - casimir_scalar(&pc, &shifted) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn bundle_invariants_of_sl2r() {
        let num = Numerics {
            mc_samples: 1 << 16,
            ..Numerics::default()
        };
        let mut rel = Vec::new();
        let mut inv = Vec::new();
        for l in [0.0, 1.0, 2.0] {
            let (ps, hw) = ps_of("sl2R", &[l]);
            let c = asymptotic_constants(&ps, &hw, Convention::Multiplicity, &num).unwrap();
            let b = ns_bundle(&c, 1.0).unwrap();
            rel.push(b.relative);
            inv.push(b.invariant);
        }
        use NsValue::*;
        assert_eq!(rel, [Finite(3), Finite(1), Infinite]);
        // gamma2_bar = -1/2 below lambda = 2 gives exponential decay
        assert_eq!(inv, [Infinite, Infinite, Infinite]);
        let (ps, hw) = ps_of("sl2R", &[3.0]);
        let c = asymptotic_constants(&ps, &hw, Convention::Multiplicity, &num).unwrap();
        assert!(matches!(ns_bundle(&c, 1.0), Err(Error::AssumptionViolated(_))));
    }

    #[test]
    fn flat_examples() {
        let sl2c = catalog::builtin("sl2C").unwrap().datum;
        let r = ns_flat(&sl2c, &FlatTwist::trivial(&sl2c)).unwrap();
        assert_eq!((r.delta_g, r.band), (1, (1, 2)));
        for e in &r.per_degree {
            let inside = e.degree == 1 || e.degree == 2;
            assert_eq!(e.ns, if inside { NsValue::Finite(1) } else { NsValue::Infinite });
        }
        let sl2r = catalog::builtin("sl2R").unwrap().datum;
        let r = ns_flat(&sl2r, &FlatTwist::trivial(&sl2r)).unwrap();
        assert_eq!(r.band, (1, 1));
        assert_eq!(r.per_degree[1].case, NsCase::B);
        let twisted = FlatTwist::new(linalg::zeros(1), alloc::vec![0.3]);
        let r = ns_flat(&sl2c, &twisted).unwrap();
        assert!(r.per_degree.iter().all(|e| e.case == NsCase::A));
    }

    #[test]
    fn band_weight_is_regular_and_balances_the_casimir() {
        let num = Numerics {
            mc_samples: 1 << 14,
            ..Numerics::default()
        };
        for e in catalog::all() {
            let d = e.datum;
            let (ps0, _) = {
                let l = HighestWeight::new(&alloc::vec![0.0; d.r0]);
                (choose_positive_system(&d, None, &l).unwrap(), l)
            };
            let twist = FlatTwist::trivial(&d);
            let hw = HighestWeight::new(band_weight(&ps0, &twist).as_slice());
            let ps = choose_positive_system(&d, None, &hw).unwrap();
            let cls = classify(&ps, &hw).unwrap();
            assert!(cls.pair().delta1.is_empty() && cls.pair().delta2.is_empty(), "{}", d.name);
            let c = asymptotic_constants(&ps, &hw, Convention::Multiplicity, &num).unwrap();
            let cas = casimir_scalar(&ps, &twist);
            assert!((c.gamma2_bar + cas / 2.0).abs() < 1e-12, "{}", d.name);
        }
    }
}
