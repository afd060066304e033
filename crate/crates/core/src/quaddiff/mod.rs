//! The quadratic differential
//!
//! ```text
//! Q(w) dw² = −((n² − γ) wⁿ + γ) / (w² (wⁿ − 1)²) dw²
//! ```
//!
//! It has double poles at `0` and at the `n`-th roots of unity, `n` simple
//! zeros on the circle `|w| = (γ/(n² − γ))^{1/n}`, and a zero of order `n − 2`
//! at infinity. Trajectories follow the Jenkins convention: curves along
//! which `Q(w) dw² > 0`.

mod domains;
mod render;
mod trace;

pub use domains::{count_domains, DomainCount, FloodFillOptions};
pub use render::{render_figure, render_scene, trajectories_csv, Scene, SceneOptions};
pub use trace::{
    polyline_residual, trace_trajectory, trajectory_residual, Polyline, Termination, TraceOptions, TrajectoryKind,
    TrajectorySet,
};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Minimum distance from a pole for [`QuadDiff::eval`].
pub const POLE_GUARD: f64 = 1e-12;

const NEWTON_STEPS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadDiff {
    n: usize,
    gamma: f64,
}

/// What sits at `w = ∞` in the coordinate `ζ = 1/w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "order", rename_all = "snake_case")]
pub enum InfinityPoint {
    Zero(u32),
    Regular,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalPoints {
    /// Simple zeros, `ρ e^{i(2k+1)π/n}` for `k = 0, …, n−1`.
    pub zeros: Vec<Complex64>,
    /// `0` followed by the roots of unity `e^{2πik/n}`; all of order 2.
    pub finite_poles: Vec<Complex64>,
    pub pole_order: u32,
    pub infinity: InfinityPoint,
}

impl CriticalPoints {
    pub fn nearest_pole_distance(&self, w: Complex64) -> (usize, f64) {
        nearest(&self.finite_poles, w)
    }

    pub fn nearest_zero_distance(&self, w: Complex64) -> (usize, f64) {
        nearest(&self.zeros, w)
    }
}

fn nearest(pts: &[Complex64], w: Complex64) -> (usize, f64) {
    pts.iter()
        .enumerate()
        .map(|(i, p)| (i, (w - p).norm()))
        .fold((usize::MAX, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a })
}

impl QuadDiff {
    pub fn new(n: usize, gamma: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::validity(format!("n = {n} must be at least 2")));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::validity(format!("gamma = {gamma} must be positive")));
        }
        if gamma >= (n * n) as f64 {
            return Err(Error::validity(format!(
                "gamma = {gamma} must be below n^2 = {}",
                n * n
            )));
        }
        Ok(QuadDiff { n, gamma })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    fn lead(&self) -> f64 {
        (self.n * self.n) as f64 - self.gamma
    }

    /// The numerator `(n² − γ) wⁿ + γ` and its derivative.
    fn numerator(&self, w: Complex64) -> (Complex64, Complex64) {
        let wn1 = w.powu(self.n as u32 - 1);
        (self.lead() * wn1 * w + self.gamma, self.lead() * self.n as f64 * wn1)
    }

    /// Radius of the circle carrying the zeros.
    pub fn zero_radius(&self) -> f64 {
        (self.gamma / self.lead()).powf(1.0 / self.n as f64)
    }

    pub fn numerator_residual(&self, z: Complex64) -> f64 {
        self.numerator(z).0.norm()
    }

    pub fn critical_points(&self) -> CriticalPoints {
        let n = self.n as f64;
        let rho = self.zero_radius();
        let zeros = (0..self.n)
            .map(|k| {
                let mut z = Complex64::from_polar(rho, (2 * k + 1) as f64 * PI / n);
                for _ in 0..NEWTON_STEPS {
                    let (p, dp) = self.numerator(z);
                    if p.norm() == 0.0 {
                        break;
                    }
                    z -= p / dp;
                }
                z
            })
            .collect();
        let mut finite_poles = vec![Complex64::new(0.0, 0.0)];
        finite_poles.extend((0..self.n).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n)));
        // Q ~ −(n² − γ) ζ^{n−2} dζ² near ζ = 1/w = 0
        let infinity = if self.n > 2 {
            InfinityPoint::Zero(self.n as u32 - 2)
        } else {
            InfinityPoint::Regular
        };
        CriticalPoints {
            zeros,
            finite_poles,
            pole_order: 2,
            infinity,
        }
    }

    /// `Q(w)` without the pole guard.
    pub(crate) fn eval_raw(&self, w: Complex64) -> Complex64 {
        let wn = w.powu(self.n as u32);
        let num = self.lead() * wn + self.gamma;
        let d = wn - 1.0;
        -num / (w * w * d * d)
    }

    /// `Q(w)`; fails within [`POLE_GUARD`] of a pole.
    pub fn eval(&self, w: Complex64) -> Result<Complex64> {
        let mut poles = vec![Complex64::new(0.0, 0.0)];
        poles.extend(
            (0..self.n).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / self.n as f64)),
        );
        let (i, dist) = nearest(&poles, w);
        if dist <= POLE_GUARD {
            return Err(Error::PoleProximity {
                re: poles[i].re,
                im: poles[i].im,
                distance: dist,
            });
        }
        Ok(self.eval_raw(w))
    }

    /// The three directions `φ` in which trajectories leave the simple zero
    /// `z`: `arg Q′(z) + 3φ ≡ 0 (mod 2π)`.
    pub fn separatrix_directions(&self, z: Complex64) -> [f64; 3] {
        let (_, dp) = self.numerator(z);
        let d = z.powu(self.n as u32) - 1.0;
        let dq = -dp / (z * z * d * d);
        let base = -dq.arg() / 3.0;
        [base, base + 2.0 * PI / 3.0, base + 4.0 * PI / 3.0]
    }
}
