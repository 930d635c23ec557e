//! Thread-parallel sweeps. Every task is a pure function of its inputs and
//! results are collected in input order, so output does not depend on the
//! number of workers.

use heattrace_core::chambers::PositiveSystem;
use heattrace_core::constants::{chamber_constants, ChamberConstants};
use heattrace_core::heattrace::{trace_g, Numerics, TraceSample};
use heattrace_core::rootdata::HighestWeight;
use heattrace_core::{Result, T_MAX};
use rayon::prelude::*;

pub const THREADS_ENV: &str = "HEATTRACE_THREADS";

/// Worker cap from `HEATTRACE_THREADS`; unset or unparsable means rayon's default.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

pub fn pool(threads: Option<usize>) -> rayon::ThreadPool {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads.or_else(thread_cap) {
        b = b.num_threads(n);
    }
    b.build().expect("thread pool")
}

/// Geometric grid `t_min:t_max:count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub count: usize,
}

impl Default for TGrid {
    fn default() -> Self {
        Self {
            t_min: 40.0,
            t_max: 400.0,
            count: 12,
        }
    }
}

impl std::str::FromStr for TGrid {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts[..] else {
            return Err(format!("expected t_min:t_max:count, got `{s}`"));
        };
        let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
        let grid = TGrid {
            t_min: num(a)?,
            t_max: num(b)?,
            count: n.trim().parse().map_err(|e| format!("`{n}`: {e}"))?,
        };
        grid.check()?;
        Ok(grid)
    }
}

impl TGrid {
    pub fn check(&self) -> std::result::Result<(), String> {
        if !(self.t_min > 0.0) || !(self.t_max >= self.t_min) {
            return Err(format!("need 0 < t_min <= t_max, got {}:{}", self.t_min, self.t_max));
        }
        if self.t_max > T_MAX {
            return Err(format!("t_max = {} exceeds the overflow cap {T_MAX}", self.t_max));
        }
        if self.count == 0 || (self.count == 1 && self.t_max != self.t_min) {
            return Err(format!("count = {} cannot span {}:{}", self.count, self.t_min, self.t_max));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.t_min];
        }
        let ratio = self.t_max / self.t_min;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.t_max
                } else {
                    self.t_min * ratio.powf(i as f64 / (self.count - 1) as f64)
                }
            })
            .collect()
    }
}

pub fn trace_sweep(
    pool: &rayon::ThreadPool,
    ps: &PositiveSystem,
    lambda: &HighestWeight,
    ts: &[f64],
    num: &Numerics,
) -> Result<Vec<TraceSample>> {
    pool.install(|| ts.par_iter().map(|&t| trace_g(ps, lambda, t, num)).collect())
}

pub fn chamber_table(
    pool: &rayon::ThreadPool,
    ps: &PositiveSystem,
    lambda: &HighestWeight,
    num: &Numerics,
) -> Result<Vec<ChamberConstants>> {
    let mu = &lambda.lambda + &ps.rho_k;
    pool.install(|| {
        (0..ps.wg.len())
            .into_par_iter()
            .map(|w| chamber_constants(ps, &mu, w, lambda, num))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g: TGrid = "40:400:12".parse().unwrap();
        assert_eq!(g, TGrid::default());
        let p = g.points();
        assert_eq!((p[0], p[11]), (40.0, 400.0));
        assert!((p[1] / p[0] - p[11] / p[10]).abs() < 1e-12);
        assert!("40:600:12".parse::<TGrid>().is_err());
        assert!("40:400".parse::<TGrid>().is_err());
        assert!("0:400:3".parse::<TGrid>().is_err());
        assert_eq!("5:5:1".parse::<TGrid>().unwrap().points(), vec![5.0]);
    }
}
