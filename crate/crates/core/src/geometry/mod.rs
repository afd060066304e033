//! Radial point systems on the unit circle and disk configurations.
//!
//! The inner radius of a disk about its centre is its radius, so on a system
//! of pairwise disjoint disks `B_0 ∋ 0`, `B_k ∋ a_k` the functional
//! `J_n(γ) = r(B_0, 0)^γ · Π r(B_k, a_k)` has the closed form
//! `r_0^γ · Π r_k`. Disks give exact competitors for one-sided checks of
//! the upper bounds.

mod montecarlo;

pub use montecarlo::{montecarlo_verify, MonteCarloReport, WorstCase, MIN_ANGULAR_GAP};

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Closure tolerance for `Σ α_k = 2`.
pub const ALPHA_SUM_TOL: f64 = 1e-12;

/// Relative slack of the disjointness checker (floating-point rounding only).
pub const DISJOINT_TOL: f64 = 1e-12;

/// `n` points `a_k = e^{iθ_k}` with `0 = θ_1 < θ_2 < … < θ_n < 2π` and their
/// normalized gaps `α_k = (θ_{k+1} − θ_k)/π` (cyclically, so `Σ α_k = 2`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialSystem {
    angles: Vec<f64>,
    #[serde(skip)]
    points: Vec<Complex64>,
    alphas: Vec<f64>,
}

impl RadialSystem {
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// Smallest cyclic angular gap in radians.
    pub fn min_gap(&self) -> f64 {
        self.alphas.iter().copied().fold(f64::INFINITY, f64::min) * PI
    }

    /// Half the chord to the nearer of the two neighbours of point `k`.
    fn half_neighbour_chord(&self, k: usize) -> f64 {
        let n = self.len();
        let prev = (k + n - 1) % n;
        let next = (k + 1) % n;
        let a = self.points[k];
        0.5 * (a - self.points[prev]).norm().min((a - self.points[next]).norm())
    }
}

/// Builds a radial system from normalized angles.
pub fn make_radial(angles: &[f64]) -> Result<RadialSystem> {
    let n = angles.len();
    if n < 2 {
        return Err(Error::validity(format!("need at least 2 points, got {n}")));
    }
    if angles.iter().any(|a| !a.is_finite()) {
        return Err(Error::validity("angles must be finite"));
    }
    if angles[0] != 0.0 {
        return Err(Error::validity(format!(
            "first angle must be 0, got {}",
            angles[0]
        )));
    }
    for w in angles.windows(2) {
        if w[1] == w[0] {
            return Err(Error::validity(format!("duplicate angle {}", w[0])));
        }
        if w[1] < w[0] {
            return Err(Error::validity(format!(
                "angles must increase strictly: {} follows {}",
                w[1], w[0]
            )));
        }
    }
    if angles[n - 1] >= TAU {
        return Err(Error::validity(format!(
            "last angle {} must be below 2 pi",
            angles[n - 1]
        )));
    }
    let points = angles.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
    let alphas: Vec<f64> = (0..n)
        .map(|k| {
            let next = if k + 1 < n { angles[k + 1] } else { TAU };
            (next - angles[k]) / PI
        })
        .collect();
    debug_assert!((alphas.iter().sum::<f64>() - 2.0).abs() < ALPHA_SUM_TOL);
    Ok(RadialSystem {
        angles: angles.to_vec(),
        points,
        alphas,
    })
}

/// Reduces arbitrary angles mod 2π, sorts them and rotates so the first is 0.
pub fn normalize_angles(raw: &[f64]) -> Vec<f64> {
    let mut a: Vec<f64> = raw.iter().map(|t| t.rem_euclid(TAU)).collect();
    a.sort_by(f64::total_cmp);
    let first = a.first().copied().unwrap_or(0.0);
    a.iter().map(|t| t - first).collect()
}

/// False for NaN.
fn is_positive(r: f64) -> bool {
    r > 0.0
}

/// Disks `B_0 = D(0, r0)` and `B_k = D(a_k, r_k)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiskConfiguration {
    pub radial: RadialSystem,
    pub r0: f64,
    pub radii: Vec<f64>,
}

impl DiskConfiguration {
    pub fn new(radial: RadialSystem, r0: f64, radii: Vec<f64>) -> Result<Self> {
        let c = DiskConfiguration { radial, r0, radii };
        c.check_disjoint()?;
        Ok(c)
    }

    /// Pairwise check of positivity and disjointness over all `O(n²)` pairs,
    /// independent of how the radii were chosen.
    pub fn check_disjoint(&self) -> Result<()> {
        let n = self.radial.len();
        if self.radii.len() != n {
            return Err(Error::constraint(format!(
                "{} radii for {n} points",
                self.radii.len()
            )));
        }
        if !is_positive(self.r0) || !self.radii.iter().all(|&r| is_positive(r)) {
            return Err(Error::constraint("all radii must be positive"));
        }
        let pts = self.radial.points();
        for k in 0..n {
            // |a_k - 0| = 1
            if self.r0 + self.radii[k] > 1.0 + DISJOINT_TOL {
                return Err(Error::constraint(format!(
                    "B_0 and B_{} overlap: {} + {} > 1",
                    k + 1,
                    self.r0,
                    self.radii[k]
                )));
            }
            for j in (k + 1)..n {
                let dist = (pts[j] - pts[k]).norm();
                let sum = self.radii[j] + self.radii[k];
                if sum > dist * (1.0 + DISJOINT_TOL) {
                    return Err(Error::constraint(format!(
                        "B_{} and B_{} overlap: {sum} > {dist}",
                        k + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Greedy admissible disks: `r0 = r0_fraction`, then
/// `r_k = s_k · min(1 − r0, half chord to each neighbour)` with `s_k = shrink`,
/// or `s_k` drawn from `(shrink/2, shrink]` when a jitter seed is given.
pub fn greedy_disks(
    radial: &RadialSystem,
    r0_fraction: f64,
    shrink: f64,
    jitter_seed: Option<u64>,
) -> Result<DiskConfiguration> {
    if !(r0_fraction > 0.0 && r0_fraction < 1.0) {
        return Err(Error::validity(format!(
            "r0_fraction = {r0_fraction} must lie in (0, 1)"
        )));
    }
    if !(shrink > 0.0 && shrink <= 1.0) {
        return Err(Error::validity(format!("shrink = {shrink} must lie in (0, 1]")));
    }
    // every a_k sits on the unit circle, so the nearest one is at distance 1
    let r0 = r0_fraction;
    let mut rng = jitter_seed.map(|s| crate::rng::stream_rng(s, 0));
    let radii: Vec<f64> = (0..radial.len())
        .map(|k| {
            let s = match rng.as_mut() {
                Some(r) => shrink * (1.0 - 0.5 * r.gen::<f64>()),
                None => shrink,
            };
            s * (1.0 - r0).min(radial.half_neighbour_chord(k))
        })
        .collect();
    if let Some(k) = radii.iter().position(|&r| !is_positive(r)) {
        return Err(Error::Infeasible(format!(
            "disk {} collapsed to radius {}",
            k + 1,
            radii[k]
        )));
    }
    DiskConfiguration::new(radial.clone(), r0, radii)
}

/// `ln J_n(γ) = γ ln r0 + Σ ln r_k`.
pub fn eval_j_ln(config: &DiskConfiguration, gamma: f64) -> Result<f64> {
    let n = config.radial.len() as f64;
    if !(gamma >= 0.0 && gamma <= n) {
        return Err(Error::validity(format!("gamma = {gamma} must lie in [0, n = {n}]")));
    }
    let base = if gamma == 0.0 { 0.0 } else { gamma * config.r0.ln() };
    Ok(base + config.radii.iter().map(|r| r.ln()).sum::<f64>())
}

/// `J_n(γ) = r0^γ · Π r_k`.
pub fn eval_j(config: &DiskConfiguration, gamma: f64) -> Result<f64> {
    eval_j_ln(config, gamma).map(f64::exp)
}
