use std::f64::consts::TAU;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::extremal::{per_alpha_bound_ln, theorem_bound_ln, BoundMode, BoundParams};
use crate::geometry::{eval_j_ln, greedy_disks, make_radial, normalize_angles, DiskConfiguration};
use crate::rng::stream_rng;

/// Trials whose smallest cyclic gap falls below this (radians) are skipped.
pub const MIN_ANGULAR_GAP: f64 = 1e-3;

/// The configuration attaining the largest `J / bound` ratio.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorstCase {
    pub trial: u64,
    pub angles: Vec<f64>,
    pub r0: f64,
    pub radii: Vec<f64>,
    #[serde(rename = "J")]
    pub j: f64,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub n: usize,
    pub gamma: f64,
    pub delta: f64,
    pub seed: u64,
    pub trials: u64,
    pub evaluated: u64,
    /// Trials rejected for an angular gap below [`MIN_ANGULAR_GAP`].
    pub skipped_min_gap: u64,
    /// Trials where disk construction failed.
    pub skipped_infeasible: u64,
    pub theorem_violations: u64,
    pub per_alpha_violations: u64,
    /// Trials where some `α_k √γ > 2`, outside the domain of the per-gap bound.
    pub per_alpha_not_applicable: u64,
    pub max_ratio_theorem: Option<f64>,
    pub max_ratio_per_alpha: Option<f64>,
    pub worst: Option<WorstCase>,
}

impl MonteCarloReport {
    fn empty(params: &BoundParams, seed: u64, trials: u64) -> Self {
        MonteCarloReport {
            n: params.n,
            gamma: params.gamma,
            delta: params.delta.value(),
            seed,
            trials,
            evaluated: 0,
            skipped_min_gap: 0,
            skipped_infeasible: 0,
            theorem_violations: 0,
            per_alpha_violations: 0,
            per_alpha_not_applicable: 0,
            max_ratio_theorem: None,
            max_ratio_per_alpha: None,
            worst: None,
        }
    }

    pub fn violations(&self) -> u64 {
        self.theorem_violations + self.per_alpha_violations
    }

    pub fn skipped(&self) -> u64 {
        self.skipped_min_gap + self.skipped_infeasible
    }
}

enum Outcome {
    MinGap,
    Infeasible,
    Evaluated {
        config: DiskConfiguration,
        j_ln: f64,
        theorem_ln: f64,
        per_alpha_ln: Option<f64>,
    },
}

fn run_trial(params: &BoundParams, seed: u64, trial: u64) -> Result<Outcome> {
    let mut rng = stream_rng(seed, trial);
    let raw: Vec<f64> = (0..params.n).map(|_| rng.gen_range(0.0..TAU)).collect();
    let angles = normalize_angles(&raw);
    let gaps_ok = angles
        .windows(2)
        .map(|w| w[1] - w[0])
        .chain(std::iter::once(TAU - angles[angles.len() - 1]))
        .all(|g| g >= MIN_ANGULAR_GAP);
    if !gaps_ok {
        return Ok(Outcome::MinGap);
    }
    let radial = make_radial(&angles)?;
    let r0_fraction = rng.gen_range(0.02..0.98);
    let shrink = 1.0 - 0.7 * rng.gen::<f64>();
    let jitter = if rng.gen_bool(0.5) { Some(rng.gen::<u64>()) } else { None };
    let config = match greedy_disks(&radial, r0_fraction, shrink, jitter) {
        Ok(c) => c,
        Err(_) => return Ok(Outcome::Infeasible),
    };
    let j_ln = eval_j_ln(&config, params.gamma)?;
    let alphas = config.radial.alphas();
    let theorem_ln = theorem_bound_ln(params, alphas, BoundMode::Strict)?;
    let per_alpha_ln = per_alpha_bound_ln(params, alphas, BoundMode::Strict).ok();
    Ok(Outcome::Evaluated {
        config,
        j_ln,
        theorem_ln,
        per_alpha_ln,
    })
}

/// Samples random radial systems with greedy disks and checks `J_n(γ)`
/// against both upper bounds.
///
/// Trial `i` draws from the stream keyed by `(seed, i)`, so the report does
/// not depend on scheduling. Skipped trials are counted, never dropped.
pub fn montecarlo_verify(params: &BoundParams, trials: u64, seed: u64) -> Result<MonteCarloReport> {
    params.check_theorem_window()?;
    let outcomes: Vec<Result<Outcome>> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(params, seed, t))
        .collect();
    let mut report = MonteCarloReport::empty(params, seed, trials);
    for (trial, outcome) in (0..trials).zip(outcomes) {
        match outcome? {
            Outcome::MinGap => report.skipped_min_gap += 1,
            Outcome::Infeasible => report.skipped_infeasible += 1,
            Outcome::Evaluated {
                config,
                j_ln,
                theorem_ln,
                per_alpha_ln,
            } => {
                report.evaluated += 1;
                let ratio = (j_ln - theorem_ln).exp();
                if j_ln > theorem_ln {
                    report.theorem_violations += 1;
                }
                match per_alpha_ln {
                    Some(b) => {
                        if j_ln > b {
                            report.per_alpha_violations += 1;
                        }
                        let r = (j_ln - b).exp();
                        report.max_ratio_per_alpha =
                            Some(report.max_ratio_per_alpha.map_or(r, |m| m.max(r)));
                    }
                    None => report.per_alpha_not_applicable += 1,
                }
                if report.max_ratio_theorem.is_none_or(|m| ratio > m) {
                    report.max_ratio_theorem = Some(ratio);
                    report.worst = Some(WorstCase {
                        trial,
                        angles: config.radial.angles().to_vec(),
                        r0: config.r0,
                        radii: config.radii.clone(),
                        j: j_ln.exp(),
                        bound: theorem_ln.exp(),
                        ratio,
                    });
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_trials() {
        let p = BoundParams::checked(5, 1.0, 0.0).unwrap();
        let r = montecarlo_verify(&p, 0, 1).unwrap();
        assert_eq!(r.evaluated, 0);
        assert_eq!(r.violations(), 0);
        assert!(r.worst.is_none());
    }

    #[test]
    fn small_run_has_no_violations() {
        let p = BoundParams::checked(6, 1.5, 0.4).unwrap();
        let r = montecarlo_verify(&p, 500, 9).unwrap();
        assert_eq!(r.evaluated + r.skipped(), 500);
        assert_eq!(r.violations(), 0);
        assert!(r.max_ratio_theorem.unwrap() < 1.0);
    }

    #[test]
    fn deterministic() {
        let p = BoundParams::checked(5, 1.0, 0.7).unwrap();
        assert_eq!(
            montecarlo_verify(&p, 200, 3).unwrap(),
            montecarlo_verify(&p, 200, 3).unwrap()
        );
    }

    #[test]
    fn rejects_params_outside_window() {
        let p = BoundParams::checked(4, 1.0, 0.0).unwrap();
        assert!(montecarlo_verify(&p, 10, 0).is_err());
    }
}
