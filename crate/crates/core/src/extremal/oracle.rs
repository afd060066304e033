//! Exhaustive grid search used to cross-check the solver.
//!
//! The budget `2√γ` is cut into `resolution` cells of width `h`; every
//! composition of `resolution` into `n` positive parts `(m_1, …, m_n)` with
//! `m_k h ≤ 2` is a candidate `x_k = m_k h`.

use crate::error::{Error, Result};
use crate::extremal::{BoundParams, ExtremalCandidate};
use crate::specfun::{self, EvalPoint};

/// Default cap on the number of compositions visited.
pub const DEFAULT_COMPOSITION_CAP: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    pub composition_cap: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            composition_cap: DEFAULT_COMPOSITION_CAP,
        }
    }
}

/// `C(m, k)`, saturating at `u64::MAX`.
fn binomial(m: u64, k: u64) -> u64 {
    if k > m {
        return 0;
    }
    let k = k.min(m - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (m - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

struct Search<'a> {
    table: &'a [f64],
    best: f64,
    best_parts: Vec<usize>,
    parts: Vec<usize>,
}

impl Search<'_> {
    fn visit(&mut self, slot: usize, remaining: usize, acc: f64) {
        let n = self.parts.len();
        if slot + 1 == n {
            // the last part is forced
            if remaining >= self.table.len() || self.table[remaining] == f64::NEG_INFINITY {
                return;
            }
            let total = acc + self.table[remaining];
            self.parts[slot] = remaining;
            if total > self.best {
                self.best = total;
                self.best_parts.clone_from(&self.parts);
            }
            return;
        }
        // leave at least one cell for each later slot
        let max_here = remaining - (n - slot - 1);
        for m in 1..=max_here.min(self.table.len() - 1) {
            let v = self.table[m];
            if v == f64::NEG_INFINITY {
                break;
            }
            self.parts[slot] = m;
            self.visit(slot + 1, remaining - m, acc + v);
        }
    }
}

/// Grid maximizer of `Σ Ψ_δ(x_k)`; the first maximizer in lexicographic
/// order of the parts wins exact ties.
pub fn oracle_extremal(params: &BoundParams, resolution: usize) -> Result<ExtremalCandidate> {
    oracle_extremal_with(params, resolution, &OracleOptions::default())
}

pub fn oracle_extremal_with(
    params: &BoundParams,
    resolution: usize,
    opts: &OracleOptions,
) -> Result<ExtremalCandidate> {
    let n = params.n;
    if resolution < n {
        return Err(Error::validity(format!(
            "resolution {resolution} cannot split into {n} positive parts"
        )));
    }
    let count = binomial(resolution as u64 - 1, n as u64 - 1);
    if count > opts.composition_cap {
        return Err(Error::Resource(format!(
            "{count} compositions of {resolution} into {n} parts exceed the cap {}",
            opts.composition_cap
        )));
    }
    let h = params.budget() / resolution as f64;
    // table[m] = Ψ_δ(m h), or -inf once m h leaves (0, 2]
    let table: Vec<f64> = (0..=resolution)
        .map(|m| match EvalPoint::new(m as f64 * h) {
            Ok(x) if m > 0 => specfun::psi(params.delta, x),
            _ => f64::NEG_INFINITY,
        })
        .collect();
    let mut search = Search {
        table: &table,
        best: f64::NEG_INFINITY,
        best_parts: vec![0; n],
        parts: vec![0; n],
    };
    search.visit(0, resolution, 0.0);
    if search.best == f64::NEG_INFINITY {
        return Err(Error::Infeasible(format!(
            "no grid point with all coordinates in (0, 2] at resolution {resolution}"
        )));
    }
    Ok(ExtremalCandidate {
        x: search.best_parts.iter().map(|&m| m as f64 * h).collect(),
        objective: search.best,
        converged: true,
    })
}

/// Lipschitz-style gap between the continuous and grid optima:
/// `n · max|Ψ′_δ| · 2√γ / resolution`, the maximum taken over the grid nodes.
pub fn oracle_grid_gap(params: &BoundParams, resolution: usize) -> f64 {
    let h = params.budget() / resolution as f64;
    let max_slope = (1..=resolution)
        .filter_map(|m| EvalPoint::new(m as f64 * h).ok())
        .map(|x| specfun::psi1(params.delta, x).abs())
        .fold(0.0, f64::max);
    params.n as f64 * max_slope * h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::objective;

    fn params(n: usize, gamma: f64, delta: f64) -> BoundParams {
        BoundParams::checked(n, gamma, delta).unwrap()
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(49, 4), 211_876);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(10, 10), 1);
    }

    #[test]
    fn brute_force_small_case() {
        // independent enumeration with plain nested loops
        let p = params(3, 1.0, 0.2);
        let res = 30;
        let h = p.budget() / res as f64;
        let mut best = (f64::NEG_INFINITY, vec![]);
        for a in 1..res {
            for b in 1..(res - a) {
                let c = res - a - b;
                let x = vec![a as f64 * h, b as f64 * h, c as f64 * h];
                let f = objective(p.delta, &x).unwrap();
                if f > best.0 {
                    best = (f, x);
                }
            }
        }
        let got = oracle_extremal(&p, res).unwrap();
        assert!((got.objective - best.0).abs() < 1e-12);
        assert_eq!(got.x, best.1);
    }

    #[test]
    fn within_one_cell_of_equal_split() {
        let p = params(5, 1.0, 0.35);
        let c = oracle_extremal(&p, 50).unwrap();
        let h = p.budget() / 50.0;
        for v in &c.x {
            assert!((v - 0.4).abs() <= h + 1e-12);
        }
    }

    #[test]
    fn two_points_symmetric() {
        let p = params(2, 1.0, 0.0);
        let c = oracle_extremal(&p, 50).unwrap();
        let swapped = vec![c.x[1], c.x[0]];
        assert_eq!(objective(p.delta, &swapped).unwrap(), c.objective);
        assert!((c.x[0] - c.x[1]).abs() < 1e-12, "{:?}", c.x);
    }

    #[test]
    fn cap_enforced() {
        let p = params(6, 1.0, 0.0);
        let opts = OracleOptions { composition_cap: 1000 };
        assert!(matches!(
            oracle_extremal_with(&p, 50, &opts),
            Err(Error::Resource(_))
        ));
        assert!(oracle_extremal(&p, 3).is_err());
    }
}
