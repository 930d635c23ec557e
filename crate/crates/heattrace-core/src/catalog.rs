//! Built-in Cartan data. Every entry uses the metric B = tr/2 on matrices
//! (the one for which sl(2,R) has rho^g = 1); file I/O lives in the std crate.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::rootdata::{validate_datum, CartanDatum, RestrictedRoot};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub datum: CartanDatum,
    pub provenance: &'static str,
    pub oracle: &'static str,
}

pub const NAMES: [&str; 6] = ["sl2R", "sl2C", "sl3R", "a2split-test", "b2-test", "a1xa1-test"];

pub fn builtin(name: &str) -> Result<CatalogEntry> {
    let s3 = libm::sqrt(3.0);
    let r = RestrictedRoot::new;
    let (datum, provenance, oracle) = match name {
        "sl2R" => (
            CartanDatum::from_positive("sl2R", 1, 0, 0, vec![r(&[2.0], 1, 0)]),
            "SL(2,R), K = SO(2)",
            "ad(k) on p = {[[a,b],[b,-a]]} has weights +-2 for the generator of so(2) \
             normalised to unit length under tr/2",
        ),
        "sl2C" => (
            CartanDatum::from_positive("sl2C", 1, 1, 0, vec![r(&[2.0], 1, 1)]),
            "SL(2,C) as a real group, K = SU(2)",
            "t = i*diag(1,-1)/|.|; g_C = sl2 + sl2 gives one restricted pair with a \
             one-dimensional k-part (su(2) root space) and p-part (i*su(2) root space); \
             a = i*t is the complement of the p-roots, so dim a = 1, m = n = 3",
        ),
        "sl3R" => (
            CartanDatum::from_positive(
                "sl3R",
                1,
                1,
                0,
                vec![r(&[1.0], 1, 1), r(&[2.0], 1, 0)],
            ),
            "SL(3,R), K = SO(3)",
            "t = so(2) in the upper-left block with unit generator E; p = sym0(3) splits \
             under ad E into weights 0 (twice: one in a, one in t-centraliser), +-1 \
             (the off-diagonal 13/23 block, also present in k) and +-2 (upper 2x2 \
             traceless block); m = 5, n = 3",
        ),
        "a2split-test" => (
            CartanDatum::from_positive(
                "a2split-test",
                2,
                0,
                0,
                vec![r(&[2.0, 0.0], 1, 0), r(&[-1.0, s3], 1, 0), r(&[1.0, s3], 1, 0)],
            ),
            "synthetic A2 datum with every root in p",
            "root system A2 with squared length 4",
        ),
        "b2-test" => (
            CartanDatum::from_positive(
                "b2-test",
                2,
                0,
                0,
                vec![
                    r(&[2.0, 0.0], 1, 0),
                    r(&[0.0, 2.0], 1, 0),
                    r(&[1.0, 1.0], 1, 0),
                    r(&[1.0, -1.0], 0, 1),
                ],
            ),
            "Sp(4,R), K = U(2)",
            "long roots +-2e_i and +-(e1+e2) are noncompact, +-(e1-e2) is the u(2) root; \
             m = 6, n = 4",
        ),
        "a1xa1-test" => (
            CartanDatum::from_positive(
                "a1xa1-test",
                2,
                0,
                0,
                vec![r(&[2.0, 0.0], 1, 0), r(&[0.0, 2.0], 1, 0)],
            ),
            "SL(2,R) x SL(2,R)",
            "orthogonal sum of two sl2R data; the G-trace is the product of two sl2R traces",
        ),
        other => return Err(Error::UnknownName(String::from(other))),
    };
    validate_datum(&datum)?;
    Ok(CatalogEntry {
        datum,
        provenance,
        oracle,
    })
}

pub fn all() -> Vec<CatalogEntry> {
    NAMES.iter().map(|n| builtin(n).expect("builtin data validate")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_validates() {
        for e in all() {
            assert!(validate_datum(&e.datum).is_ok(), "{}", e.datum.name);
        }
    }

    #[test]
    fn dimensions_match_the_groups() {
        let dims: Vec<(usize, usize)> = all().iter().map(|e| (e.datum.m(), e.datum.n())).collect();
        assert_eq!(dims, vec![(2, 1), (3, 3), (5, 3), (6, 2), (6, 4), (4, 2)]);
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(builtin("e8"), Err(Error::UnknownName(_))));
    }
}
