//! Multi-start projected ascent on the slice `{Σ x_k = 2√γ, ε ≤ x_k ≤ 2}`.
//!
//! Each ascent step is scaled by the diagonal curvature `|Ψ″_δ(x_k)| + 1` and
//! projected back in the matching metric, which reduces to clipping
//! `y_k − τ/w_k` into the box for a scalar shift `τ` fixed by the budget.
//! Step lengths come from Armijo backtracking.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::extremal::{check_feasible, BoundParams, ExtremalCandidate};
use crate::specfun::{self, Delta, EvalPoint};

/// Lower clip of the box.
pub const EPS: f64 = 1e-9;

/// Common-`Ψ′` tolerance of [`stationarity_check`].
pub const STATIONARITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub max_iters: usize,
    /// Stop once the scaled step falls below this (sup norm).
    pub step_tol: f64,
    pub armijo: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_iters: 5000,
            step_tol: 1e-14,
            armijo: 1e-4,
        }
    }
}

/// Weighted projection onto `{Σ z = budget, lo ≤ z ≤ hi}`:
/// `z_k = clamp(y_k − τ/w_k)` with `τ` found by bisection.
fn project(y: &[f64], w: &[f64], budget: f64, lo: f64, hi: f64) -> Vec<f64> {
    let total = |tau: f64| -> f64 { y.iter().zip(w).map(|(&v, &wk)| (v - tau / wk).clamp(lo, hi)).sum() };
    // total is non-increasing in tau
    let spread = y
        .iter()
        .zip(w)
        .map(|(&v, &wk)| ((v - lo).abs() + (v - hi).abs()) * wk)
        .fold(1.0, f64::max);
    let (mut a, mut b) = (-spread, spread);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if total(m) > budget {
            a = m;
        } else {
            b = m;
        }
    }
    let tau = 0.5 * (a + b);
    let mut z: Vec<f64> = y.iter().zip(w).map(|(&v, &wk)| (v - tau / wk).clamp(lo, hi)).collect();
    repair_sum(&mut z, budget, lo, hi);
    z
}

/// Pushes the last few ulps of budget error onto coordinates with room.
fn repair_sum(z: &mut [f64], budget: f64, lo: f64, hi: f64) {
    for _ in 0..4 {
        let err = budget - z.iter().sum::<f64>();
        if err == 0.0 {
            return;
        }
        let free: Vec<usize> = (0..z.len())
            .filter(|&k| if err > 0.0 { z[k] < hi } else { z[k] > lo })
            .collect();
        if free.is_empty() {
            return;
        }
        let share = err / free.len() as f64;
        for k in free {
            z[k] = (z[k] + share).clamp(lo, hi);
        }
    }
}

/// A uniformly random point of the simplex slice (flat Dirichlet scaled to the
/// budget), projected into the box if needed.
pub fn random_feasible_point<R: Rng + ?Sized>(n: usize, budget: f64, rng: &mut R) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = e.iter().sum();
    let y: Vec<f64> = e.iter().map(|v| budget * v / s).collect();
    if y.iter().all(|&v| (EPS..=specfun::X_MAX).contains(&v)) {
        let mut y = y;
        repair_sum(&mut y, budget, EPS, specfun::X_MAX);
        return y;
    }
    project(&y, &vec![1.0; n], budget, EPS, specfun::X_MAX)
}

fn ascend(
    delta: Delta,
    budget: f64,
    mut x: Vec<f64>,
    opts: &SolverOptions,
) -> Result<ExtremalCandidate> {
    let psi = |v: f64| specfun::psi(delta, EvalPoint(v));
    let mut f: f64 = x.iter().map(|&v| psi(v)).sum();
    let mut t = 1.0;
    for _ in 0..opts.max_iters {
        let g: Vec<f64> = x.iter().map(|&v| specfun::psi1(delta, EvalPoint(v))).collect();
        let w: Vec<f64> = x
            .iter()
            .map(|&v| {
                let c = if v < specfun::X_MAX {
                    specfun::psi2(delta, EvalPoint(v)).map(f64::abs).unwrap_or(0.0)
                } else {
                    0.0
                };
                c + 1.0
            })
            .collect();
        let mut accepted = None;
        for _ in 0..80 {
            let y: Vec<f64> = x.iter().zip(&g).zip(&w).map(|((&xi, &gi), &wi)| xi + t * gi / wi).collect();
            let z = project(&y, &w, budget, EPS, specfun::X_MAX);
            let gain: f64 = z.iter().zip(&x).zip(&g).map(|((&zi, &xi), &gi)| gi * (zi - xi)).sum();
            let fz: f64 = z.iter().map(|&v| psi(v)).sum();
            if fz >= f + opts.armijo * gain {
                accepted = Some((z, fz));
                break;
            }
            t *= 0.5;
        }
        let Some((z, fz)) = accepted else {
            // no ascent along the projected arc: first-order stationary
            return Ok(ExtremalCandidate { x, objective: f, converged: true });
        };
        let step = z.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        x = z;
        f = fz;
        if step <= opts.step_tol {
            return Ok(ExtremalCandidate { x, objective: f, converged: true });
        }
        t = (t * 2.0).min(1e6);
    }
    Ok(ExtremalCandidate { x, objective: f, converged: false })
}

fn sorted(x: &[f64]) -> Vec<f64> {
    let mut s = x.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

/// Larger objective wins; exact ties go to the lexicographically smaller sorted vector.
fn better(a: &ExtremalCandidate, b: &ExtremalCandidate) -> bool {
    match a.objective.total_cmp(&b.objective) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => {
            let (sa, sb) = (sorted(&a.x), sorted(&b.x));
            for (p, q) in sa.iter().zip(&sb) {
                match p.total_cmp(q) {
                    std::cmp::Ordering::Less => return true,
                    std::cmp::Ordering::Greater => return false,
                    std::cmp::Ordering::Equal => {}
                }
            }
            false
        }
    }
}


/// Maximizes `Σ Ψ_δ(x_k)` over the slice from `starts` random feasible points.
///
/// Deterministic for a given seed regardless of the thread count. The
/// returned candidate has `converged = false` if its start ran out of
/// iterations.
pub fn solve_extremal(params: &BoundParams, starts: usize, seed: u64) -> Result<ExtremalCandidate> {
    solve_extremal_with(params, starts, seed, &SolverOptions::default())
}

pub fn solve_extremal_with(
    params: &BoundParams,
    starts: usize,
    seed: u64,
    opts: &SolverOptions,
) -> Result<ExtremalCandidate> {
    if starts == 0 {
        return Err(Error::validity("starts must be at least 1"));
    }
    let budget = params.budget();
    let n = params.n;
    if budget > n as f64 * specfun::X_MAX {
        return Err(Error::constraint(format!(
            "budget 2*sqrt(gamma) = {budget} exceeds 2n = {}",
            2 * n
        )));
    }
    let results: Vec<Result<ExtremalCandidate>> = (0..starts as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            let x = random_feasible_point(n, budget, &mut rng);
            ascend(params.delta, budget, x, opts)
        })
        .collect();
    let mut best: Option<ExtremalCandidate> = None;
    for r in results {
        let c = r?;
        if best.as_ref().is_none_or(|b| better(&c, b)) {
            best = Some(c);
        }
    }
    let best = best.expect("starts >= 1");
    check_feasible(&best.x, budget)?;
    Ok(best)
}

/// True iff every coordinate strictly inside `(0, 2)` has the same `Ψ′_δ`
/// value to within [`STATIONARITY_TOL`].
pub fn stationarity_check(candidate: &ExtremalCandidate, delta: Delta) -> bool {
    let vals: Vec<f64> = candidate
        .x
        .iter()
        .filter(|&&v| v > 0.0 && v < specfun::X_MAX)
        .map(|&v| specfun::psi1(delta, EvalPoint(v)))
        .collect();
    let (lo, hi) = vals
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    vals.is_empty() || hi - lo <= STATIONARITY_TOL
}
