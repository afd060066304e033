use crate::error::{Error, Result};
use crate::extremal::{BoundParams, SUM_TOL};
use crate::specfun::{self, EvalPoint};

/// Whether the theorem window is enforced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundMode {
    #[default]
    Strict,
    /// Evaluate the formula outside the window; callers report the
    /// violations as warnings.
    Explore,
}

fn check_alphas(params: &BoundParams, alphas: &[f64]) -> Result<()> {
    if alphas.len() != params.n {
        return Err(Error::constraint(format!(
            "expected {} gaps, got {}",
            params.n,
            alphas.len()
        )));
    }
    if let Some(a) = alphas.iter().find(|&&a| !(a > 0.0 && a.is_finite())) {
        return Err(Error::constraint(format!("gap {a} is not positive")));
    }
    let s: f64 = alphas.iter().sum();
    if (s - 2.0).abs() > SUM_TOL {
        return Err(Error::constraint(format!("gaps sum to {s}, expected 2")));
    }
    Ok(())
}

fn prefactor_ln(params: &BoundParams, alphas: &[f64]) -> f64 {
    let d = params.delta.value();
    let n = params.n as f64;
    let sum_ln_alpha: f64 = alphas.iter().map(|a| a.ln()).sum();
    -0.5 * d * n * params.gamma.ln() + d * sum_ln_alpha
}

/// Logarithm of `γ^(−δn/2) · (Π α_k)^δ · F_δ(2√γ/n)^(n/2)`.
pub fn theorem_bound_ln(params: &BoundParams, alphas: &[f64], mode: BoundMode) -> Result<f64> {
    if mode == BoundMode::Strict {
        params.check_theorem_window()?;
    }
    check_alphas(params, alphas)?;
    let x = EvalPoint::new(params.equal_split())?;
    Ok(prefactor_ln(params, alphas) + 0.5 * params.n as f64 * specfun::psi(params.delta, x))
}

/// Upper bound on `J_n(γ)` depending on the gaps only through `Π α_k`.
pub fn theorem_bound(params: &BoundParams, alphas: &[f64]) -> Result<f64> {
    theorem_bound_ln(params, alphas, BoundMode::Strict).map(f64::exp)
}

/// Logarithm of `γ^(−δn/2) · (Π α_k)^δ · [Π F_δ(α_k √γ)]^(1/2)`.
pub fn per_alpha_bound_ln(params: &BoundParams, alphas: &[f64], mode: BoundMode) -> Result<f64> {
    if mode == BoundMode::Strict {
        params.check_theorem_window()?;
    }
    check_alphas(params, alphas)?;
    let root = params.gamma.sqrt();
    let mut sum_psi = 0.0;
    for &a in alphas {
        let x = EvalPoint::new(a * root).map_err(|_| {
            Error::domain(format!(
                "alpha * sqrt(gamma) = {} exceeds 2 for alpha = {a}",
                a * root
            ))
        })?;
        sum_psi += specfun::psi(params.delta, x);
    }
    Ok(prefactor_ln(params, alphas) + 0.5 * sum_psi)
}

/// The per-gap bound; never exceeds [`theorem_bound`] on the same input.
pub fn per_alpha_bound(params: &BoundParams, alphas: &[f64]) -> Result<f64> {
    per_alpha_bound_ln(params, alphas, BoundMode::Strict).map(f64::exp)
}
