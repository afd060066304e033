//! The weight function `F_δ(x)` and the derivatives of its logarithm.
//!
//! ```text
//! F_δ(x) = 2^(x²+6) · x^(x²+2−2δ) · (2−x)^(−(2−x)²/2) · (2+x)^(−(2+x)²/2),   x ∈ (0, 2]
//! Ψ_δ    = ln F_δ
//! Ψ′_δ(x) = 2x ln(2x) + (2−x) ln(2−x) − (2+x) ln(2+x) + (2 − 2δ)/x
//! Ψ″_δ(x) = 2 ln(2x) − ln(2−x) − ln(2+x) − (2 − 2δ)/x²
//! ```
//!
//! Everything is evaluated in log space; `F_δ` is only exponentiated on
//! request. The right endpoint `x = 2` uses the closed-form limits
//! `F_δ(2) = 2^(−2δ)` and `Ψ′_δ(2) = 1 − δ`. `Ψ″_δ` has a logarithmic
//! singularity there and is left undefined.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};

/// Upper end of the admissible exponent window.
pub const DELTA_MAX: f64 = 0.7;

/// Right endpoint of the domain of `F_δ`.
pub const X_MAX: f64 = 2.0;

/// Bisection bracket used by [`find_x0`].
pub const X0_BRACKET: (f64, f64) = (0.01, 1.99);

/// Absolute tolerance of the `x₀` bisection.
pub const X0_TOL: f64 = 1e-12;

/// Exponent δ of the weight function, normally confined to `[0, 0.7]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Delta(f64);

impl Delta {
    pub fn new(value: f64) -> Result<Self> {
        if !(0.0..=DELTA_MAX).contains(&value) {
            return Err(Error::domain(format!(
                "delta = {value} must lie in [0, {DELTA_MAX}]"
            )));
        }
        Ok(Delta(value))
    }

    /// Skips the window check. Only finiteness is required; used for
    /// exploratory plots beyond `δ = 0.7`.
    pub fn unchecked(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::domain(format!("delta = {value} is not finite")));
        }
        Ok(Delta(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// A point of `(0, 2]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EvalPoint(pub(crate) f64);

impl EvalPoint {
    pub fn new(x: f64) -> Result<Self> {
        // written so that NaN is rejected
        if !(x > 0.0 && x <= X_MAX) {
            return Err(Error::domain(format!("x = {x} must lie in (0, 2]")));
        }
        Ok(EvalPoint(x))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    fn is_endpoint(self) -> bool {
        self.0 == X_MAX
    }
}

/// `t² ln t` extended continuously by 0 at `t = 0`.
fn sq_log(t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        t * t * t.ln()
    }
}

/// `t ln t` extended continuously by 0 at `t = 0`.
fn x_log(t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        t * t.ln()
    }
}

/// `Ψ_δ(x) = ln F_δ(x)`.
pub fn psi(delta: Delta, x: EvalPoint) -> f64 {
    let d = delta.0;
    let x = x.0;
    (x * x + 6.0) * LN_2 + (x * x + 2.0 - 2.0 * d) * x.ln()
        - 0.5 * sq_log(2.0 - x)
        - 0.5 * sq_log(2.0 + x)
}

/// `F_δ(x)`. At `x = 2` this is exactly `2^(−2δ)`.
pub fn weight(delta: Delta, x: EvalPoint) -> f64 {
    if x.is_endpoint() {
        return (-2.0 * delta.0).exp2();
    }
    psi(delta, x).exp()
}

/// `Ψ′_δ(x)`; equals `1 − δ` at `x = 2`.
pub fn psi1(delta: Delta, x: EvalPoint) -> f64 {
    let d = delta.0;
    if x.is_endpoint() {
        return 1.0 - d;
    }
    let x = x.0;
    x_log(2.0 * x) + x_log(2.0 - x) - x_log(2.0 + x) + (2.0 - 2.0 * d) / x
}

/// `Ψ″_δ(x)` on the open interval `(0, 2)`.
pub fn psi2(delta: Delta, x: EvalPoint) -> Result<f64> {
    if x.is_endpoint() {
        return Err(Error::domain(
            "second derivative is singular at x = 2 (ln 0)",
        ));
    }
    let d = delta.0;
    let x = x.0;
    Ok(2.0 * (2.0 * x).ln() - (2.0 - x).ln() - (2.0 + x).ln() - (2.0 - 2.0 * d) / (x * x))
}

/// Unique root `x₀(δ)` of `Ψ″_δ` in `(0, 2)`, located by bisection.
///
/// `Ψ″_δ` is strictly increasing, so `sign Ψ″_δ(x) = sign(x − x₀)`.
pub fn find_x0(delta: Delta) -> Result<f64> {
    let g = |x: f64| psi2(delta, EvalPoint(x));
    let (mut lo, mut hi) = X0_BRACKET;
    let (g_lo, g_hi) = (g(lo)?, g(hi)?);
    if !(g_lo < 0.0 && g_hi > 0.0) {
        return Err(Error::Bracket(format!(
            "psi2 has no sign change on ({lo}, {hi}) for delta = {}: values {g_lo}, {g_hi}",
            delta.0
        )));
    }
    while hi - lo > X0_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Which of the functions above to evaluate; used by the CLI and the C ABI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Function {
    F,
    Psi,
    Psi1,
    Psi2,
    X0,
}

impl std::str::FromStr for Function {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "F" | "f" => Ok(Function::F),
            "psi" => Ok(Function::Psi),
            "psi1" => Ok(Function::Psi1),
            "psi2" => Ok(Function::Psi2),
            "x0" => Ok(Function::X0),
            other => Err(Error::domain(format!(
                "unknown function `{other}` (expected F, psi, psi1, psi2, x0)"
            ))),
        }
    }
}

impl Function {
    pub fn name(self) -> &'static str {
        match self {
            Function::F => "F",
            Function::Psi => "psi",
            Function::Psi1 => "psi1",
            Function::Psi2 => "psi2",
            Function::X0 => "x0",
        }
    }

    /// Evaluates with validated inputs. `x` is ignored for [`Function::X0`].
    pub fn eval(self, delta: Delta, x: Option<f64>) -> Result<f64> {
        if self == Function::X0 {
            return find_x0(delta);
        }
        let x = x.ok_or_else(|| Error::domain(format!("{} requires x", self.name())))?;
        let x = EvalPoint::new(x)?;
        match self {
            Function::F => Ok(weight(delta, x)),
            Function::Psi => Ok(psi(delta, x)),
            Function::Psi1 => Ok(psi1(delta, x)),
            Function::Psi2 => psi2(delta, x),
            Function::X0 => unreachable!(),
        }
    }
}

/// `F_δ(x)` with both arguments validated.
pub fn eval_f(delta: f64, x: f64) -> Result<f64> {
    Ok(weight(Delta::new(delta)?, EvalPoint::new(x)?))
}

pub fn eval_psi(delta: f64, x: f64) -> Result<f64> {
    Ok(psi(Delta::new(delta)?, EvalPoint::new(x)?))
}

pub fn eval_psi1(delta: f64, x: f64) -> Result<f64> {
    Ok(psi1(Delta::new(delta)?, EvalPoint::new(x)?))
}

pub fn eval_psi2(delta: f64, x: f64) -> Result<f64> {
    psi2(Delta::new(delta)?, EvalPoint::new(x)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: f64) -> Delta {
        Delta::new(v).unwrap()
    }

    fn p(v: f64) -> EvalPoint {
        EvalPoint::new(v).unwrap()
    }

    #[test]
    fn endpoint_limits() {
        assert_eq!(weight(d(0.0), p(2.0)), 1.0);
        assert_eq!(weight(d(0.7), p(2.0)), 2f64.powf(-1.4));
        assert!((weight(d(0.7), p(2.0)) - 0.378929).abs() < 1e-6);
        assert_eq!(psi(d(0.0), p(2.0)), 0.0);
        assert_eq!(psi1(d(0.0), p(2.0)), 1.0);
        assert!(psi2(d(0.0), p(2.0)).is_err());
    }

    #[test]
    fn weight_converges_to_endpoint_value() {
        for delta in [0.0, 0.35, 0.7] {
            let target = weight(d(delta), p(2.0));
            let mut prev = f64::INFINITY;
            for eps in [1e-4, 1e-6, 1e-8] {
                let err = (weight(d(delta), p(2.0 - eps)) - target).abs();
                assert!(err < prev, "delta={delta} eps={eps}");
                assert!(err < 50.0 * eps, "delta={delta} eps={eps} err={err}");
                prev = err;
            }
        }
    }

    #[test]
    fn psi1_converges_to_endpoint_value() {
        for delta in [0.0, 0.7] {
            let v = psi1(d(delta), p(2.0 - 1e-10));
            assert!((v - (1.0 - delta)).abs() < 1e-8);
        }
    }

    #[test]
    fn log_exp_consistency() {
        let v = weight(d(0.35), p(1.0));
        assert!((v - psi(d(0.35), p(1.0)).exp()).abs() < 1e-12 * v);
    }

    #[test]
    fn domain_errors() {
        assert!(EvalPoint::new(0.0).is_err());
        assert!(EvalPoint::new(-1.0).is_err());
        assert!(EvalPoint::new(2.0 + 1e-12).is_err());
        assert!(EvalPoint::new(f64::NAN).is_err());
        assert!(Delta::new(-1e-9).is_err());
        assert!(Delta::new(0.7000001).is_err());
        assert!(Delta::unchecked(1.5).is_ok());
        assert!(eval_f(0.8, 1.0).is_err());
        assert!(eval_psi(0.1, 2.5).is_err());
    }

    #[test]
    fn psi2_near_zero_is_large_negative() {
        assert!(psi2(d(0.0), p(0.01)).unwrap() < -1.0e4);
    }

    #[test]
    fn psi2_positive_past_switch_point() {
        assert!(psi2(d(0.35), p(1.9)).unwrap() > 0.0);
        // confirm the sign independently from a difference of psi1
        let h = 1e-6;
        let fd = (psi1(d(0.35), p(1.9 + h)) - psi1(d(0.35), p(1.9 - h))) / (2.0 * h);
        assert!(fd > 0.0);
    }

    #[test]
    fn x0_brackets_and_bound() {
        for delta in [0.0, 0.35, 0.7] {
            let x0 = find_x0(d(delta)).unwrap();
            assert!(x0 >= 1.08441, "x0({delta}) = {x0}");
            assert!(psi2(d(delta), p(x0)).unwrap().abs() < 1e-10);
            assert!(psi2(d(delta), p(x0 - 0.01)).unwrap() < 0.0);
            assert!(psi2(d(delta), p(x0 + 0.01)).unwrap() > 0.0);
        }
    }

    #[test]
    fn x0_fails_without_sign_change() {
        // a huge negative delta keeps psi2 negative across the whole bracket
        let err = find_x0(Delta::unchecked(-1.0e6).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Bracket(_)));
    }

    #[test]
    fn function_parsing() {
        assert_eq!("psi1".parse::<Function>().unwrap(), Function::Psi1);
        assert!("psi3".parse::<Function>().is_err());
        assert!(Function::Psi.eval(d(0.1), None).is_err());
        assert!(Function::X0.eval(d(0.1), None).is_ok());
    }
}
