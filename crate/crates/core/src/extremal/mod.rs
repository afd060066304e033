//! Upper bounds for `J_n(γ)` and the constrained maximization behind them.
//!
//! The extremal problem is
//!
//! ```text
//! maximize  Σ Ψ_δ(x_k)   subject to  Σ x_k = 2√γ,  0 < x_k ≤ 2,
//! ```
//!
//! whose unique maximizer (inside the theorem window `n ≥ 5`,
//! `0 < γ ≤ 1.75`, `0 ≤ δ ≤ 0.7`) is the equal split `x_k = 2√γ/n`.

mod bound;
mod case_analysis;
mod oracle;
mod solver;

pub use bound::{per_alpha_bound, per_alpha_bound_ln, theorem_bound, theorem_bound_ln, BoundMode};
pub use case_analysis::{replay_case_analysis, replay_case_analysis_with, CaseAnalysisReport, ChainEntry, PRINTED_TOL};
pub use oracle::{oracle_extremal, oracle_grid_gap, OracleOptions, DEFAULT_COMPOSITION_CAP};
pub use solver::{
    random_feasible_point, solve_extremal, stationarity_check, SolverOptions, STATIONARITY_TOL,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{self, Delta, EvalPoint};

/// Largest `γ` covered by the theorem.
pub const GAMMA_MAX: f64 = 1.75;

/// Smallest `n` covered by the theorem.
pub const N_MIN: usize = 5;

/// Tolerance on `Σ α_k = 2` and `Σ x_k = 2√γ`.
pub const SUM_TOL: f64 = 1e-10;

/// The triple `(n, γ, δ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    pub n: usize,
    pub gamma: f64,
    pub delta: Delta,
}

impl BoundParams {
    /// Checks the structural constraints `n ≥ 2`, `0 < γ ≤ n`.
    /// The theorem window is checked separately by [`BoundParams::check_theorem_window`].
    pub fn new(n: usize, gamma: f64, delta: Delta) -> Result<Self> {
        if n < 2 {
            return Err(Error::validity(format!("n = {n} must be at least 2")));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::validity(format!("gamma = {gamma} must be positive")));
        }
        if gamma > n as f64 {
            return Err(Error::validity(format!(
                "gamma = {gamma} must not exceed n = {n}"
            )));
        }
        Ok(BoundParams { n, gamma, delta })
    }

    /// Convenience constructor with a strictly validated δ.
    pub fn checked(n: usize, gamma: f64, delta: f64) -> Result<Self> {
        Self::new(n, gamma, Delta::new(delta)?)
    }

    /// The budget `2√γ`.
    pub fn budget(&self) -> f64 {
        2.0 * self.gamma.sqrt()
    }

    /// The equal-split coordinate `2√γ/n`.
    pub fn equal_split(&self) -> f64 {
        self.budget() / self.n as f64
    }

    /// Reasons the parameters fall outside the theorem window; empty if inside.
    pub fn window_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.n < N_MIN {
            out.push(format!("n = {} is below {N_MIN}", self.n));
        }
        if !(self.gamma > 0.0 && self.gamma <= GAMMA_MAX) {
            out.push(format!("gamma = {} is outside (0, {GAMMA_MAX}]", self.gamma));
        }
        let d = self.delta.value();
        if !(0.0..=specfun::DELTA_MAX).contains(&d) {
            out.push(format!("delta = {d} is outside [0, {}]", specfun::DELTA_MAX));
        }
        out
    }

    pub fn theorem_valid(&self) -> bool {
        self.window_violations().is_empty()
    }

    pub fn check_theorem_window(&self) -> Result<()> {
        let v = self.window_violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::validity(v.join("; ")))
        }
    }
}

/// A feasible point of the extremal problem together with its objective.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalCandidate {
    pub x: Vec<f64>,
    /// `Σ Ψ_δ(x_k)`, i.e. `ln Π F_δ(x_k)`.
    pub objective: f64,
    /// False when the solver hit its iteration budget.
    pub converged: bool,
}

impl ExtremalCandidate {
    pub fn sigma_max(&self) -> f64 {
        self.x.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn sigma_min(&self) -> f64 {
        self.x.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Checks `0 < x_k ≤ 2` and `Σ x_k = budget`.
    pub fn check_feasible(&self, budget: f64) -> Result<()> {
        check_feasible(&self.x, budget)
    }
}

pub(crate) fn check_feasible(x: &[f64], budget: f64) -> Result<()> {
    if let Some(bad) = x.iter().find(|&&v| !(v > 0.0 && v <= specfun::X_MAX)) {
        return Err(Error::domain(format!("coordinate {bad} outside (0, 2]")));
    }
    let s: f64 = x.iter().sum();
    if (s - budget).abs() > SUM_TOL {
        return Err(Error::constraint(format!(
            "coordinates sum to {s}, expected {budget}"
        )));
    }
    Ok(())
}

/// `Σ Ψ_δ(x_k)`.
pub fn objective(delta: Delta, x: &[f64]) -> Result<f64> {
    x.iter()
        .map(|&v| Ok(specfun::psi(delta, EvalPoint::new(v)?)))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_validation() {
        assert!(BoundParams::checked(1, 0.5, 0.0).is_err());
        assert!(BoundParams::checked(2, 0.0, 0.0).is_err());
        assert!(BoundParams::checked(2, 2.5, 0.0).is_err());
        assert!(BoundParams::checked(5, 1.0, 0.8).is_err());
        let p = BoundParams::checked(4, 1.0, 0.0).unwrap();
        assert!(!p.theorem_valid());
        assert!(p.check_theorem_window().is_err());
        let p = BoundParams::checked(5, 1.8, 0.0).unwrap();
        assert_eq!(p.window_violations().len(), 1);
        assert!(BoundParams::checked(5, 1.75, 0.7).unwrap().theorem_valid());
    }

    #[test]
    fn budget_arithmetic() {
        let p = BoundParams::checked(5, 1.75, 0.0).unwrap();
        assert!((p.budget() - 2.6457513110645906).abs() < 1e-15);
        assert!((p.equal_split() - 0.529_150_262_212_918).abs() < 1e-15);
    }
}
