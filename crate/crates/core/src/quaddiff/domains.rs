//! Counting circular domains by flood fill.
//!
//! Separatrices are rasterized as barriers on a square grid; cells outside
//! the disk `|w| < radius` are barriers too, so arcs running off to infinity
//! close their domains. Each separatrix end lying near a zero is joined to
//! it, closing the gap left by seeding and stopping distances. The count is
//! the number of distinct 4-connected components containing a finite pole.

use std::collections::VecDeque;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FloodFillOptions {
    /// Cells per side.
    pub resolution: usize,
    /// Half-width of the raster and radius of the fill disk.
    pub radius: f64,
    /// Polyline ends closer than this to a zero are joined to it.
    pub connect_dist: f64,
}

impl Default for FloodFillOptions {
    fn default() -> Self {
        FloodFillOptions {
            resolution: 800,
            radius: 4.0,
            connect_dist: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DomainCount {
    /// Number of distinct components that contain a pole.
    pub domains: usize,
    /// Component label per pole; `None` if the pole cell is a barrier.
    pub pole_components: Vec<Option<usize>>,
}

impl DomainCount {
    /// True when no two poles share a component.
    pub fn poles_separated(&self) -> bool {
        let labels: Vec<usize> = self.pole_components.iter().flatten().copied().collect();
        let mut uniq = labels.clone();
        uniq.sort_unstable();
        uniq.dedup();
        uniq.len() == labels.len() && labels.len() == self.pole_components.len()
    }
}

struct Raster {
    res: usize,
    radius: f64,
    cell: f64,
    wall: Vec<bool>,
}

impl Raster {
    fn new(res: usize, radius: f64) -> Self {
        let cell = 2.0 * radius / res as f64;
        let mut wall = vec![false; res * res];
        for iy in 0..res {
            for ix in 0..res {
                let c = Complex64::new(
                    -radius + (ix as f64 + 0.5) * cell,
                    -radius + (iy as f64 + 0.5) * cell,
                );
                if c.norm() >= radius - 2.0 * cell {
                    wall[iy * res + ix] = true;
                }
            }
        }
        Raster { res, radius, cell, wall }
    }

    fn index(&self, w: Complex64) -> Option<usize> {
        let fx = ((w.re + self.radius) / self.cell).floor();
        let fy = ((w.im + self.radius) / self.cell).floor();
        if fx < 0.0 || fy < 0.0 || fx >= self.res as f64 || fy >= self.res as f64 {
            return None;
        }
        Some(fy as usize * self.res + fx as usize)
    }

    fn segment(&mut self, a: Complex64, b: Complex64) {
        let len = (b - a).norm();
        let steps = ((len / (0.25 * self.cell)).ceil() as usize).max(1);
        for i in 0..=steps {
            let w = a + (b - a) * (i as f64 / steps as f64);
            if let Some(k) = self.index(w) {
                self.wall[k] = true;
            }
        }
    }
}

/// Counts the circular domains cut out by `separatrices`.
pub fn count_domains(
    separatrices: &[Vec<Complex64>],
    zeros: &[Complex64],
    poles: &[Complex64],
    opts: &FloodFillOptions,
) -> DomainCount {
    let mut r = Raster::new(opts.resolution, opts.radius);
    let near_zero = |w: Complex64| {
        zeros
            .iter()
            .copied()
            .filter(|z| (w - z).norm() < opts.connect_dist)
            .min_by(|a, b| (w - a).norm().total_cmp(&(w - b).norm()))
    };
    for line in separatrices {
        for s in line.windows(2) {
            r.segment(s[0], s[1]);
        }
        for end in [line.first(), line.last()].into_iter().flatten() {
            if let Some(z) = near_zero(*end) {
                r.segment(z, *end);
            }
        }
    }

    let n = r.res;
    let mut label = vec![usize::MAX; n * n];
    let mut next = 0;
    let mut pole_components = Vec::with_capacity(poles.len());
    for &p in poles {
        let Some(start) = r.index(p).filter(|&k| !r.wall[k]) else {
            pole_components.push(None);
            continue;
        };
        if label[start] == usize::MAX {
            let mut queue = VecDeque::from([start]);
            label[start] = next;
            while let Some(k) = queue.pop_front() {
                let (x, y) = (k % n, k / n);
                let mut visit = |j: usize| {
                    if !r.wall[j] && label[j] == usize::MAX {
                        label[j] = next;
                        queue.push_back(j);
                    }
                };
                if x > 0 {
                    visit(k - 1);
                }
                if x + 1 < n {
                    visit(k + 1);
                }
                if y > 0 {
                    visit(k - n);
                }
                if y + 1 < n {
                    visit(k + n);
                }
            }
            next += 1;
        }
        pole_components.push(Some(label[start]));
    }
    let mut uniq: Vec<usize> = pole_components.iter().flatten().copied().collect();
    uniq.sort_unstable();
    uniq.dedup();
    DomainCount {
        domains: uniq.len(),
        pole_components,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn no_barriers_one_domain() {
        let poles = [c(0.0, 0.0), c(1.0, 0.0)];
        let d = count_domains(&[], &[], &poles, &FloodFillOptions::default());
        assert_eq!(d.domains, 1);
        assert!(!d.poles_separated());
    }

    #[test]
    fn wall_across_disk_splits() {
        let poles = [c(-1.0, 0.0), c(1.0, 0.0)];
        let wall = vec![c(0.0, -5.0), c(0.0, 5.0)];
        let d = count_domains(&[wall], &[], &poles, &FloodFillOptions::default());
        assert_eq!(d.domains, 2);
        assert!(d.poles_separated());
    }

    #[test]
    fn gap_closed_by_zero_connector() {
        // vertical wall with a hole near a "zero" at the origin
        let poles = [c(-1.0, 0.0), c(1.0, 0.0)];
        let zeros = [c(0.0, 0.0)];
        let upper = vec![c(0.0, 0.02), c(0.0, 5.0)];
        let lower = vec![c(0.0, -0.02), c(0.0, -5.0)];
        let opts = FloodFillOptions::default();
        let d = count_domains(&[upper.clone(), lower.clone()], &zeros, &poles, &opts);
        assert_eq!(d.domains, 2);
        let d = count_domains(&[upper, lower], &[], &poles, &opts);
        assert_eq!(d.domains, 1);
    }
}
