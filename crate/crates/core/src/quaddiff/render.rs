//! Scene assembly and SVG/CSV output.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::quaddiff::domains::{count_domains, DomainCount, FloodFillOptions};
use crate::quaddiff::trace::{
    Polyline, Termination, TraceOptions, Tracer, TrajectoryKind, TrajectorySet,
};
use crate::quaddiff::{CriticalPoints, InfinityPoint, QuadDiff};

/// Distance from a zero at which separatrix seeds are placed.
pub const SEPARATRIX_SEED_DIST: f64 = 1e-2;

/// Starting offset of the refinement trace that carries a seed out to
/// [`SEPARATRIX_SEED_DIST`] along the true separatrix.
const SEED_REFINE_START: f64 = 1e-6;

/// Seeding and styling of a figure. Accepted as JSON; missing keys default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SceneOptions {
    pub trace: TraceOptions,
    /// Trace the three arcs leaving each zero.
    pub separatrices: bool,
    /// Seeds per pole, on the segment from the pole to its nearest zero.
    pub pole_seeds: usize,
    /// Extra seeds on a circle about the origin.
    pub ring_seeds: usize,
    pub ring_radius: f64,
    pub flood_fill: FloodFillOptions,
    /// Half-width of the drawn window.
    pub view_radius: f64,
    pub size_px: u32,
    /// Decimals of polyline coordinates.
    pub coordinate_precision: usize,
}

impl Default for SceneOptions {
    fn default() -> Self {
        SceneOptions {
            trace: TraceOptions::default(),
            separatrices: true,
            pole_seeds: 4,
            ring_seeds: 12,
            ring_radius: 1.6,
            flood_fill: FloodFillOptions::default(),
            view_radius: 2.0,
            size_px: 600,
            coordinate_precision: 9,
        }
    }
}

impl SceneOptions {
    /// Markers only, no trajectories.
    pub fn empty() -> Self {
        SceneOptions {
            separatrices: false,
            pole_seeds: 0,
            ring_seeds: 0,
            ..Default::default()
        }
    }
}

/// A traced scene ready for output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scene {
    #[serde(skip)]
    pub qd: QuadDiff,
    pub critical: CriticalPoints,
    pub trajectories: TrajectorySet,
    pub domains: DomainCount,
    pub max_residual: f64,
}

enum Seed {
    Separatrix { zero: usize, arm: usize, z: Complex64, phi: f64 },
    Generic { seed_index: usize, w: Complex64 },
}

fn trace_seed(tracer: &Tracer, seed: &Seed) -> Vec<Polyline> {
    match *seed {
        Seed::Separatrix { zero, arm, z, phi } => {
            // carry the seed from 1e-6 out to 1e-2 along the actual arc
            let start = z + Complex64::from_polar(SEED_REFINE_START, phi);
            let dir = Complex64::from_polar(1.0, phi);
            let until = |w: Complex64| (w - z).norm() >= SEPARATRIX_SEED_DIST;
            let (pts, d, _, _) = tracer.run(start, dir, false, Some(&until));
            let seed_pt = *pts.last().expect("non-empty");
            let (points, _, termination, arc_length) = tracer.run(seed_pt, d, true, None);
            vec![Polyline {
                kind: TrajectoryKind::Separatrix { zero, arm },
                seed: seed_pt,
                branch: 0,
                termination,
                arc_length,
                points,
            }]
        }
        Seed::Generic { seed_index, w } => {
            let q = tracer.qd.eval_raw(w);
            let target = if tracer.opts.orthogonal { PI } else { 0.0 };
            let theta = 0.5 * (target - q.arg());
            let mut out = Vec::new();
            for branch in 0..2u8 {
                let d0 = Complex64::from_polar(1.0, theta + branch as f64 * PI);
                let (points, _, termination, arc_length) = tracer.run(w, d0, true, None);
                out.push(Polyline {
                    kind: TrajectoryKind::Generic { seed_index },
                    seed: w,
                    branch,
                    termination,
                    arc_length,
                    points,
                });
                if termination == Termination::Closed {
                    break;
                }
            }
            out
        }
    }
}

fn seeds(qd: &QuadDiff, cp: &CriticalPoints, opts: &SceneOptions) -> Vec<Seed> {
    let mut out = Vec::new();
    if opts.separatrices {
        for (zero, &z) in cp.zeros.iter().enumerate() {
            for (arm, phi) in qd.separatrix_directions(z).into_iter().enumerate() {
                out.push(Seed::Separatrix { zero, arm, z, phi });
            }
        }
    }
    let mut seed_index = 0;
    for &p in &cp.finite_poles {
        let (zi, _) = cp.nearest_zero_distance(p);
        let target = cp.zeros[zi];
        for k in 1..=opts.pole_seeds {
            let f = k as f64 / (opts.pole_seeds + 1) as f64;
            out.push(Seed::Generic { seed_index, w: p + (target - p) * f });
            seed_index += 1;
        }
    }
    for k in 0..opts.ring_seeds {
        // offset by half a slot so seeds avoid the symmetry rays
        let t = 2.0 * PI * (k as f64 + 0.5) / opts.ring_seeds as f64;
        out.push(Seed::Generic {
            seed_index,
            w: Complex64::from_polar(opts.ring_radius, t),
        });
        seed_index += 1;
    }
    out
}

/// Traces every seed of the scene (in parallel, merged in seed order) and
/// counts the circular domains.
pub fn render_scene(qd: &QuadDiff, opts: &SceneOptions) -> Result<Scene> {
    let cp = qd.critical_points();
    let tracer = Tracer { qd, cp: &cp, opts: &opts.trace };
    let seeds = seeds(qd, &cp, opts);
    let trajectories: Vec<Polyline> = seeds
        .par_iter()
        .map(|s| trace_seed(&tracer, s))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .filter(|p| p.points.len() >= 2)
        .collect();
    let set = TrajectorySet {
        n: qd.n(),
        gamma: qd.gamma(),
        orthogonal: opts.trace.orthogonal,
        trajectories,
    };
    let separatrices: Vec<Vec<Complex64>> = set
        .trajectories
        .iter()
        .filter(|p| p.kind.is_separatrix())
        .map(|p| p.points.clone())
        .collect();
    let domains = count_domains(&separatrices, &cp.zeros, &cp.finite_poles, &opts.flood_fill);
    let max_residual = set.max_residual(qd);
    Ok(Scene {
        qd: *qd,
        critical: cp,
        trajectories: set,
        domains,
        max_residual,
    })
}

/// Renders `qd` with `opts` straight to an SVG document.
pub fn render_figure(qd: &QuadDiff, opts: &SceneOptions) -> Result<String> {
    Ok(render_scene(qd, opts)?.to_svg(opts))
}

#[derive(Serialize)]
struct Summary<'a> {
    n: usize,
    gamma: f64,
    zeros: usize,
    finite_poles: usize,
    infinity: &'a InfinityPoint,
    trajectories: usize,
    domains: usize,
}

impl Scene {
    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::to_value(Summary {
            n: self.qd.n(),
            gamma: self.qd.gamma(),
            zeros: self.critical.zeros.len(),
            finite_poles: self.critical.finite_poles.len(),
            infinity: &self.critical.infinity,
            trajectories: self.trajectories.trajectories.len(),
            domains: self.domains.domains,
        })
        .expect("summary serializes")
    }

    /// SVG 1.1 document. World coordinates are used directly inside a
    /// y-flipped group; the second line is a version comment.
    pub fn to_svg(&self, opts: &SceneOptions) -> String {
        let v = opts.view_radius;
        let prec = opts.coordinate_precision;
        let stroke = 2.0 * v / opts.size_px as f64;
        let mut s = String::new();
        s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(s, "<!-- extremal-decomp {} -->", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{px}\" height=\"{px}\" viewBox=\"{} {} {} {}\">",
            -v,
            -v,
            2.0 * v,
            2.0 * v,
            px = opts.size_px
        );
        let _ = writeln!(
            s,
            "<title>Trajectories of Q(w)dw^2, n = {}, gamma = {}</title>",
            self.qd.n(),
            self.qd.gamma()
        );
        let _ = writeln!(s, "<metadata>{}</metadata>", self.summary_json());
        let _ = writeln!(
            s,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"white\"/>",
            -v,
            -v,
            2.0 * v,
            2.0 * v
        );
        let _ = writeln!(
            s,
            "<g transform=\"scale(1,-1)\" fill=\"none\" stroke-linejoin=\"round\" stroke-linecap=\"round\">"
        );
        let _ = writeln!(
            s,
            "<circle class=\"unit-circle\" cx=\"0\" cy=\"0\" r=\"1\" stroke=\"#999999\" stroke-width=\"{stroke}\" stroke-dasharray=\"{} {}\"/>",
            4.0 * stroke,
            4.0 * stroke
        );
        for (id, p) in self.trajectories.trajectories.iter().enumerate() {
            let (class, color, width) = if p.kind.is_separatrix() {
                ("trajectory separatrix", "#c0392b", 2.0 * stroke)
            } else {
                ("trajectory", "#1f4e79", stroke)
            };
            let _ = write!(
                s,
                "<polyline class=\"{class}\" data-id=\"{id}\" stroke=\"{color}\" stroke-width=\"{width}\" points=\""
            );
            for (i, w) in p.points.iter().enumerate() {
                if i > 0 {
                    s.push(' ');
                }
                let _ = write!(s, "{:.*},{:.*}", prec, w.re, prec, w.im);
            }
            s.push_str("\"/>\n");
        }
        let r = 6.0 * stroke;
        for z in &self.critical.zeros {
            let _ = writeln!(
                s,
                "<circle class=\"zero\" cx=\"{:.*}\" cy=\"{:.*}\" r=\"{r}\" fill=\"#000000\" stroke=\"none\"/>",
                prec, z.re, prec, z.im
            );
        }
        for p in &self.critical.finite_poles {
            let _ = writeln!(
                s,
                "<path class=\"pole\" data-x=\"{:.*}\" data-y=\"{:.*}\" d=\"M{},{} L{},{} M{},{} L{},{}\" stroke=\"#000000\" stroke-width=\"{}\"/>",
                prec,
                p.re,
                prec,
                p.im,
                p.re - r,
                p.im - r,
                p.re + r,
                p.im + r,
                p.re - r,
                p.im + r,
                p.re + r,
                p.im - r,
                1.5 * stroke
            );
        }
        s.push_str("</g>\n");
        let label = match self.critical.infinity {
            InfinityPoint::Zero(k) => format!("w = \u{221e}: zero of order {k}"),
            InfinityPoint::Regular => "w = \u{221e}: regular point".to_string(),
        };
        let _ = writeln!(
            s,
            "<text class=\"infinity\" x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"{}\" fill=\"#333333\">{label}</text>",
            -v + 8.0 * stroke,
            -v + 24.0 * stroke,
            16.0 * stroke
        );
        s.push_str("</svg>\n");
        s
    }
}

/// One row per vertex: `trajectory,re,im`.
pub fn trajectories_csv(set: &TrajectorySet, precision: usize) -> String {
    let mut s = String::from("trajectory,re,im\n");
    for (id, p) in set.trajectories.iter().enumerate() {
        for w in &p.points {
            let _ = writeln!(s, "{id},{:.*},{:.*}", precision, w.re, precision, w.im);
        }
    }
    s
}
