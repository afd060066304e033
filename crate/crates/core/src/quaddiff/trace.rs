//! Trajectory tracing for `Q(w) dw²`.
//!
//! A trajectory is parametrized by arc length and follows the unit field
//! `e^{iθ(w)}` with `θ(w) = −arg Q(w)/2` (mod π). The sign of the square root
//! is fixed at each stage by taking the direction closest to the previous
//! one, so there is no branch cut. Steps are classical RK4 with step-doubling
//! error control; a step is also rejected if its chord violates the
//! trajectory condition by more than [`TraceOptions::residual_tol`].

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaddiff::{CriticalPoints, QuadDiff};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TraceOptions {
    /// Stop once `|w|` exceeds this.
    pub r_max: f64,
    pub arc_length_budget: f64,
    pub max_step: f64,
    pub min_step: f64,
    /// Local error per step (step doubling).
    pub local_tol: f64,
    /// Largest accepted chord residual, in radians of `arg Q + 2 arg dw`.
    pub residual_tol: f64,
    pub pole_stop: f64,
    pub zero_stop: f64,
    pub closure_dist: f64,
    /// Trace orthogonal trajectories (`Q dw² < 0`) instead.
    pub orthogonal: bool,
    pub max_steps: usize,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            r_max: 4.0,
            arc_length_budget: 50.0,
            max_step: 0.05,
            min_step: 1e-12,
            local_tol: 1e-9,
            residual_tol: 2e-4,
            pole_stop: 1e-3,
            zero_stop: 1e-3,
            closure_dist: 1e-4,
            orthogonal: false,
            max_steps: 200_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Termination {
    NearPole { pole: usize },
    NearZero { zero: usize },
    Closed,
    ArcLength,
    Escaped,
    StepUnderflow,
    MaxSteps,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TrajectoryKind {
    /// Arc leaving zero `zero` in its `arm`-th critical direction.
    Separatrix { zero: usize, arm: usize },
    Generic { seed_index: usize },
}

impl TrajectoryKind {
    pub fn is_separatrix(&self) -> bool {
        matches!(self, TrajectoryKind::Separatrix { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polyline {
    pub kind: TrajectoryKind,
    pub seed: Complex64,
    pub branch: u8,
    pub termination: Termination,
    pub arc_length: f64,
    pub points: Vec<Complex64>,
}

/// All traced trajectories of a scene, ordered by seed index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectorySet {
    pub n: usize,
    pub gamma: f64,
    pub orthogonal: bool,
    pub trajectories: Vec<Polyline>,
}

impl TrajectorySet {
    /// Largest chord residual over every emitted segment.
    pub fn max_residual(&self, qd: &QuadDiff) -> f64 {
        self.trajectories
            .iter()
            .map(|p| polyline_residual(qd, &p.points, self.orthogonal))
            .fold(0.0, f64::max)
    }
}

fn wrap(a: f64) -> f64 {
    let r = (a + PI).rem_euclid(2.0 * PI) - PI;
    if r == -PI {
        PI
    } else {
        r
    }
}

/// `|arg Q(m) + 2 arg(b − a) − target|` reduced mod 2π, where `m` is the
/// chord midpoint and the target is `0` (or `π` for orthogonal trajectories).
pub fn trajectory_residual(qd: &QuadDiff, a: Complex64, b: Complex64, orthogonal: bool) -> f64 {
    let target = if orthogonal { PI } else { 0.0 };
    let q = qd.eval_raw(0.5 * (a + b));
    wrap(q.arg() + 2.0 * (b - a).arg() - target).abs()
}

/// Largest [`trajectory_residual`] over the non-degenerate segments.
pub fn polyline_residual(qd: &QuadDiff, points: &[Complex64], orthogonal: bool) -> f64 {
    points
        .windows(2)
        .filter(|w| w[0] != w[1])
        .map(|w| trajectory_residual(qd, w[0], w[1], orthogonal))
        .fold(0.0, f64::max)
}

pub(crate) struct Tracer<'a> {
    pub qd: &'a QuadDiff,
    pub cp: &'a CriticalPoints,
    pub opts: &'a TraceOptions,
}

struct Step {
    w: Complex64,
    dir: Complex64,
}

fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a) * ab.conj()).re / len2;
    (p - (a + ab * t.clamp(0.0, 1.0))).norm()
}

impl Tracer<'_> {
    /// Unit field direction at `w` on the side of `reference`.
    fn direction(&self, w: Complex64, reference: Complex64) -> Option<Complex64> {
        let q = self.qd.eval_raw(w);
        if !(q.re.is_finite() && q.im.is_finite()) || q.norm() == 0.0 {
            return None;
        }
        let target = if self.opts.orthogonal { PI } else { 0.0 };
        let u = Complex64::from_polar(1.0, 0.5 * (target - q.arg()));
        Some(if (u * reference.conj()).re < 0.0 { -u } else { u })
    }

    fn rk4(&self, w: Complex64, d: Complex64, h: f64) -> Option<Step> {
        let k1 = self.direction(w, d)?;
        let k2 = self.direction(w + k1 * (0.5 * h), k1)?;
        let k3 = self.direction(w + k2 * (0.5 * h), k2)?;
        let k4 = self.direction(w + k3 * h, k3)?;
        let w_new = w + (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (h / 6.0);
        let dir = self.direction(w_new, k4)?;
        Some(Step { w: w_new, dir })
    }

    /// Distance to the nearest finite critical point.
    fn critical_distance(&self, w: Complex64) -> f64 {
        self.cp
            .nearest_pole_distance(w)
            .1
            .min(self.cp.nearest_zero_distance(w).1)
    }

    /// One accepted adaptive step; returns the new state and the next step size.
    fn adaptive_step(&self, w: Complex64, d: Complex64, mut h: f64) -> Option<(Step, f64, f64)> {
        loop {
            h = h.min(self.opts.max_step).min(0.25 * self.critical_distance(w));
            if h < self.opts.min_step {
                return None;
            }
            let full = self.rk4(w, d, h);
            let half = self.rk4(w, d, 0.5 * h).and_then(|s| self.rk4(s.w, s.dir, 0.5 * h));
            let (Some(full), Some(half)) = (full, half) else {
                h *= 0.25;
                continue;
            };
            let err = (full.w - half.w).norm();
            let residual = trajectory_residual(self.qd, w, half.w, self.opts.orthogonal);
            if err <= self.opts.local_tol && residual <= self.opts.residual_tol {
                let grow = if err == 0.0 {
                    2.0
                } else {
                    (0.9 * (self.opts.local_tol / err).powf(0.2)).clamp(0.2, 2.0)
                };
                return Some((half, h, h * grow));
            }
            let shrink = if err > self.opts.local_tol {
                (0.9 * (self.opts.local_tol / err).powf(0.2)).clamp(0.1, 0.5)
            } else {
                0.5
            };
            h *= shrink;
        }
    }

    /// Traces from `start` along `d0` until a stop condition fires.
    /// `stop_at_zeros = false` and a custom `until` are used to refine
    /// separatrix seeds next to a zero.
    pub(crate) fn run(
        &self,
        start: Complex64,
        d0: Complex64,
        stop_at_zeros: bool,
        until: Option<&dyn Fn(Complex64) -> bool>,
    ) -> (Vec<Complex64>, Complex64, Termination, f64) {
        let o = self.opts;
        let mut pts = vec![start];
        let (mut w, mut d) = (start, d0);
        let mut h = o.max_step;
        let mut arc = 0.0;
        let mut left_start = false;
        for _ in 0..o.max_steps {
            let Some((step, used, next)) = self.adaptive_step(w, d, h) else {
                return (pts, d, Termination::StepUnderflow, arc);
            };
            let prev = w;
            w = step.w;
            d = step.dir;
            h = next;
            arc += used;
            if left_start
                && segment_distance(start, prev, w) < o.closure_dist
                && (d * d0.conj()).re > 0.0
            {
                pts.push(start);
                return (pts, d, Termination::Closed, arc);
            }
            pts.push(w);
            if !left_start && (w - start).norm() > 10.0 * o.closure_dist {
                left_start = true;
            }
            if let Some(f) = until {
                if f(w) {
                    return (pts, d, Termination::ArcLength, arc);
                }
            }
            let (pi, pd) = self.cp.nearest_pole_distance(w);
            if pd < o.pole_stop {
                return (pts, d, Termination::NearPole { pole: pi }, arc);
            }
            if stop_at_zeros {
                let (zi, zd) = self.cp.nearest_zero_distance(w);
                if zd < o.zero_stop {
                    return (pts, d, Termination::NearZero { zero: zi }, arc);
                }
            }
            if w.norm() > o.r_max {
                return (pts, d, Termination::Escaped, arc);
            }
            if arc >= o.arc_length_budget {
                return (pts, d, Termination::ArcLength, arc);
            }
        }
        (pts, d, Termination::MaxSteps, arc)
    }
}

/// Traces the trajectory through `start`. `branch` (0 or 1) selects which of
/// the two directions `±e^{iθ(start)}` is followed first.
pub fn trace_trajectory(
    qd: &QuadDiff,
    start: Complex64,
    branch: u8,
    opts: &TraceOptions,
) -> Result<Polyline> {
    let q = qd.eval(start)?;
    if q.norm() == 0.0 {
        return Err(Error::domain(format!("start {start} is a zero of Q")));
    }
    let cp = qd.critical_points();
    let tracer = Tracer { qd, cp: &cp, opts };
    let target = if opts.orthogonal { PI } else { 0.0 };
    let theta = 0.5 * (target - q.arg()) + if branch % 2 == 1 { PI } else { 0.0 };
    let d0 = Complex64::from_polar(1.0, theta);
    let (points, _, termination, arc_length) = tracer.run(start, d0, true, None);
    Ok(Polyline {
        kind: TrajectoryKind::Generic { seed_index: 0 },
        seed: start,
        branch: branch % 2,
        termination,
        arc_length,
        points,
    })
}
