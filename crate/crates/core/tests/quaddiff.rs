use std::f64::consts::PI;

use num_complex::Complex64;

use extremal_decomp::quaddiff::{
    polyline_residual, render_figure, render_scene, trace_trajectory, InfinityPoint, QuadDiff,
    SceneOptions, Termination, TraceOptions,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn set_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let one_way = |x: &[Complex64], y: &[Complex64]| {
        x.iter()
            .map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

#[test]
fn zeros_are_roots_on_the_predicted_circle() {
    for n in [2usize, 3, 5, 8, 12] {
        for gamma in [0.25, 1.0, 1.75, 3.9] {
            let qd = QuadDiff::new(n, gamma).unwrap();
            let cp = qd.critical_points();
            let rho = (gamma / (n as f64 * n as f64 - gamma)).powf(1.0 / n as f64);
            assert_eq!(cp.zeros.len(), n);
            for z in &cp.zeros {
                assert!(qd.numerator_residual(*z) < 1e-10, "n={n} gamma={gamma}");
                assert!((z.norm() - rho).abs() < 1e-12);
            }
            assert_eq!(cp.finite_poles.len(), n + 1);
            assert_eq!(cp.pole_order, 2);
            // numerator degree n, denominator degree 2n + 2
            let expected = if n > 2 { InfinityPoint::Zero(n as u32 - 2) } else { InfinityPoint::Regular };
            assert_eq!(cp.infinity, expected);
        }
    }
}

#[test]
fn every_finite_pole_has_order_two() {
    for (n, gamma) in [(3usize, 1.0), (5, 1.75), (8, 0.5)] {
        let qd = QuadDiff::new(n, gamma).unwrap();
        let dir = Complex64::from_polar(1.0, 0.3);
        for p in qd.critical_points().finite_poles {
            let v: Vec<Complex64> = [1e-3, 1e-4, 1e-5]
                .iter()
                .map(|&r| {
                    let w = p + dir * r;
                    (w - p) * (w - p) * qd.eval(w).unwrap()
                })
                .collect();
            assert!(v[2].norm() > 1e-6, "limit vanishes at {p}");
            for k in 0..2 {
                let ratio = (v[k + 1] / v[k]).norm();
                assert!((ratio - 1.0).abs() < 0.01, "pole {p}: ratio {ratio}");
            }
        }
    }
}

#[test]
fn w_squared_q_tends_to_minus_gamma() {
    for (n, gamma) in [(3usize, 1.0), (5, 1.75), (12, 0.25)] {
        let qd = QuadDiff::new(n, gamma).unwrap();
        for k in 0..8 {
            let w = Complex64::from_polar(1e-5, k as f64 * PI / 4.0 + 0.1);
            let v = w * w * qd.eval(w).unwrap();
            assert!((v + gamma).norm() < 1e-6, "{v}");
        }
    }
}

#[test]
fn three_fold_symmetry_of_critical_points_and_trajectories() {
    let qd = QuadDiff::new(3, 1.0).unwrap();
    let cp = qd.critical_points();
    let rot = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    let rz: Vec<Complex64> = cp.zeros.iter().map(|z| z * rot).collect();
    let rp: Vec<Complex64> = cp.finite_poles.iter().map(|z| z * rot).collect();
    assert!(set_distance(&rz, &cp.zeros) < 1e-10);
    assert!(set_distance(&rp, &cp.finite_poles) < 1e-10);

    // the direction field is defined up to sign, so the rotated seed may
    // start on the other branch
    let opts = TraceOptions::default();
    for seed in [c(-0.25, 0.0), c(0.3, 0.9), c(1.5, 0.2)] {
        let a = trace_trajectory(&qd, seed, 0, &opts).unwrap();
        let dev = (0..2u8)
            .map(|branch| {
                let b = trace_trajectory(&qd, seed * rot, branch, &opts).unwrap();
                if std::mem::discriminant(&a.termination) != std::mem::discriminant(&b.termination)
                    || (a.arc_length - b.arc_length).abs() > 1e-6
                {
                    return f64::INFINITY;
                }
                let m = a.points.len().min(b.points.len());
                (0..m).map(|i| (a.points[i] * rot - b.points[i]).norm()).fold(0.0, f64::max)
            })
            .fold(f64::INFINITY, f64::min);
        assert!(dev < 1e-6, "seed {seed}: deviation {dev}");
    }
}

#[test]
fn conjugate_seeds_give_mirror_images() {
    let qd = QuadDiff::new(3, 1.0).unwrap();
    let opts = TraceOptions::default();
    for seed in [c(0.3, 0.9), c(-0.8, 0.4), c(1.2, -1.1)] {
        let a = trace_trajectory(&qd, seed, 0, &opts).unwrap();
        let b = trace_trajectory(&qd, seed.conj(), 0, &opts).unwrap();
        let m = a.points.len().min(b.points.len());
        let dev = (0..m).map(|i| (a.points[i].conj() - b.points[i]).norm()).fold(0.0, f64::max);
        assert!(dev < 1e-6, "seed {seed}: deviation {dev}");
        assert!((a.arc_length - b.arc_length).abs() < 1e-6);
    }
}

#[test]
fn orbit_around_origin_closes() {
    let qd = QuadDiff::new(3, 1.0).unwrap();
    let p = trace_trajectory(&qd, c(-0.25, 0.0), 0, &TraceOptions::default()).unwrap();
    assert_eq!(p.termination, Termination::Closed);
    assert!(polyline_residual(&qd, &p.points, false) < 1e-3);
}

#[test]
fn traced_polylines_satisfy_residual_bound() {
    for (n, gamma, orthogonal) in [(3usize, 1.0, false), (3, 1.0, true), (5, 1.75, false), (8, 0.5, false)] {
        let qd = QuadDiff::new(n, gamma).unwrap();
        let mut opts = SceneOptions::default();
        opts.trace.orthogonal = orthogonal;
        let s = render_scene(&qd, &opts).unwrap();
        assert!(!s.trajectories.trajectories.is_empty());
        for t in &s.trajectories.trajectories {
            let r = polyline_residual(&qd, &t.points, orthogonal);
            assert!(r < 1e-3, "n={n} orthogonal={orthogonal}: residual {r}");
        }
    }
}

#[test]
fn circular_domain_counts() {
    for n in [3usize, 5, 8] {
        let qd = QuadDiff::new(n, 1.0).unwrap();
        let s = render_scene(&qd, &SceneOptions::default()).unwrap();
        assert_eq!(s.domains.domains, n + 1, "n = {n}");
        assert!(s.domains.poles_separated());
    }
}

#[test]
fn marker_counts_and_empty_scene() {
    let qd = QuadDiff::new(5, 1.0).unwrap();
    let svg = render_figure(&qd, &SceneOptions::default()).unwrap();
    assert_eq!(svg.matches("class=\"zero\"").count(), 5);
    assert_eq!(svg.matches("class=\"pole\"").count(), 6);

    let empty = render_figure(&qd, &SceneOptions::empty()).unwrap();
    assert_eq!(empty.matches("class=\"zero\"").count(), 5);
    assert_eq!(empty.matches("class=\"pole\"").count(), 6);
    assert_eq!(empty.matches("<polyline").count(), 0);
}

#[test]
fn rendering_is_deterministic() {
    let qd = QuadDiff::new(3, 1.0).unwrap();
    let a = render_figure(&qd, &SceneOptions::default()).unwrap();
    let b = render_figure(&qd, &SceneOptions::default()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn critical_starts_and_poles_are_rejected() {
    let qd = QuadDiff::new(3, 1.0).unwrap();
    let opts = TraceOptions::default();
    assert!(trace_trajectory(&qd, c(1.0, 0.0), 0, &opts).is_err());
    assert!(trace_trajectory(&qd, c(-0.5, 0.0), 0, &opts).is_err());
    assert!(QuadDiff::new(1, 0.5).is_err());
    assert!(QuadDiff::new(3, 9.0).is_err());
    assert!(QuadDiff::new(3, 0.0).is_err());
}
