//! Maximization of real objectives over the disc: a coarse polar grid
//! followed by Nelder-Mead refinement.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::tolerance::TIE;

/// Grid and refinement settings for maximal selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub angles: usize,
    pub radii: usize,
    /// Outer radius of the search grid.
    pub max_radius: f64,
    /// Simplex diameter at which refinement stops.
    pub refine_tol: f64,
    pub max_refine_iters: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { angles: 64, radii: 32, max_radius: 1.0 - 1e-3, refine_tol: 1e-10, max_refine_iters: 4000 }
    }
}

impl SearchConfig {
    /// Radius cap used for kernel-space selections.
    pub fn kernel_space() -> Self {
        SearchConfig { max_radius: 0.95, ..Self::default() }
    }

    pub fn with_max_radius(self, max_radius: f64) -> Self {
        SearchConfig { max_radius, ..self }
    }

    /// Search radius for series of order `M`: truncation and sampling stay
    /// exact to roughly `e^{-32}` when `|a| <= 1 - 16/(M+1)`.
    pub fn radius_for_order(&self, order: usize) -> f64 {
        let resolvable = 1.0 - 16.0 / (order as f64 + 1.0);
        self.max_radius.min(resolvable).max(0.0)
    }

    /// Chebyshev-Lobatto radii on `[0, cap]`, ascending.
    pub(crate) fn radius_nodes(&self, cap: f64) -> Vec<f64> {
        let m = self.radii.max(2);
        (0..m).map(|j| 0.5 * cap * (1.0 - (PI * j as f64 / (m - 1) as f64).cos())).collect()
    }

    /// Grid points in tie-breaking order: radius ascending, then angle
    /// ascending from 0. The centre appears once.
    pub(crate) fn grid_points(&self, cap: f64) -> Vec<Complex64> {
        let mut pts = Vec::with_capacity(self.angles * self.radii + 1);
        for r in self.radius_nodes(cap) {
            if r == 0.0 {
                pts.push(Complex64::new(0.0, 0.0));
                continue;
            }
            for j in 0..self.angles.max(1) {
                pts.push(Complex64::from_polar(r, 2.0 * PI * j as f64 / self.angles.max(1) as f64));
            }
        }
        pts
    }
}

/// Best point found and its objective value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub point: Complex64,
    pub value: f64,
    /// Best value on the coarse grid.
    pub grid_value: f64,
}

fn evaluate_grid<F>(objective: &F, pts: &[Complex64]) -> Vec<f64>
where
    F: Fn(Complex64) -> f64 + Sync,
{
    #[cfg(feature = "rayon")]
    {
        use rayon::prelude::*;
        pts.par_iter().map(|&z| objective(z)).collect()
    }
    #[cfg(not(feature = "rayon"))]
    {
        pts.iter().map(|&z| objective(z)).collect()
    }
}

/// First grid index whose value beats all earlier ones by more than the tie
/// tolerance.
fn best_index(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        let b = values[best];
        if v.is_finite() && (!b.is_finite() || v > b + TIE * b.abs().max(f64::MIN_POSITIVE)) {
            best = i;
        }
    }
    best
}

/// Maximizes `objective` over `|a| <= cap`.
pub fn maximize<F>(objective: &F, search: &SearchConfig, cap: f64) -> Maximum
where
    F: Fn(Complex64) -> f64 + Sync,
{
    let pts = search.grid_points(cap);
    let values = evaluate_grid(objective, &pts);
    let i = best_index(&values);
    let start = pts[i];
    let grid_value = values[i];
    let step = 0.5 * cap / (search.radii.max(2) - 1) as f64;
    let bounded = |z: Complex64| if z.norm() <= cap { objective(z) } else { f64::NEG_INFINITY };
    let (mut point, mut value) = nelder_mead(&bounded, start, step, search.refine_tol, search.max_refine_iters);
    // A restart from the converged point guards against simplex collapse.
    let (p2, v2) = nelder_mead(&bounded, point, step.min(1e-3), search.refine_tol, search.max_refine_iters);
    if v2 > value {
        point = p2;
        value = v2;
    }
    if value.is_nan() || value < grid_value {
        point = start;
        value = grid_value;
    }
    Maximum { point, value, grid_value }
}

/// Two-dimensional Nelder-Mead maximization over the complex plane.
pub(crate) fn nelder_mead<F>(f: &F, start: Complex64, step: f64, tol: f64, max_iters: usize) -> (Complex64, f64)
where
    F: Fn(Complex64) -> f64,
{
    let mut simplex = [
        (start, f(start)),
        (start + Complex64::new(step, 0.0), f64::NAN),
        (start + Complex64::new(0.0, step), f64::NAN),
    ];
    for v in simplex.iter_mut().skip(1) {
        v.1 = f(v.0);
    }
    let sort = |s: &mut [(Complex64, f64); 3]| {
        s.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(core::cmp::Ordering::Equal));
    };
    for _ in 0..max_iters {
        sort(&mut simplex);
        let diameter = (simplex[0].0 - simplex[1].0).norm().max((simplex[0].0 - simplex[2].0).norm());
        if diameter < tol {
            break;
        }
        let centroid = (simplex[0].0 + simplex[1].0) * 0.5;
        let worst = simplex[2];
        let reflect = centroid + (centroid - worst.0);
        let fr = f(reflect);
        if fr > simplex[0].1 {
            let expand = centroid + (centroid - worst.0) * 2.0;
            let fe = f(expand);
            simplex[2] = if fe > fr { (expand, fe) } else { (reflect, fr) };
        } else if fr > simplex[1].1 {
            simplex[2] = (reflect, fr);
        } else {
            let contract = if fr > worst.1 {
                centroid + (reflect - centroid) * 0.5
            } else {
                centroid + (worst.0 - centroid) * 0.5
            };
            let fc = f(contract);
            if fc > worst.1.max(fr) || (fc >= worst.1 && fr <= worst.1) {
                simplex[2] = (contract, fc);
            } else {
                let best = simplex[0].0;
                for v in simplex.iter_mut().skip(1) {
                    v.0 = best + (v.0 - best) * 0.5;
                    v.1 = f(v.0);
                }
            }
        }
    }
    sort(&mut simplex);
    simplex[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_nodes_span_interval() {
        let s = SearchConfig::default();
        let nodes = s.radius_nodes(0.9);
        assert_eq!(nodes.len(), 32);
        assert_eq!(nodes[0], 0.0);
        assert!((nodes[31] - 0.9).abs() < 1e-15);
        assert!(nodes.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn grid_has_single_centre() {
        let s = SearchConfig { angles: 8, radii: 4, ..SearchConfig::default() };
        assert_eq!(s.grid_points(0.5).len(), 1 + 3 * 8);
    }

    #[test]
    fn finds_smooth_peak() {
        let target = Complex64::new(0.31, -0.47);
        let f = |z: Complex64| -(z - target).norm_sqr();
        let m = maximize(&f, &SearchConfig::default(), 0.99);
        assert!((m.point - target).norm() < 1e-8);
        assert!(m.value >= m.grid_value);
    }

    #[test]
    fn respects_cap() {
        let f = |z: Complex64| z.re;
        let m = maximize(&f, &SearchConfig::default(), 0.5);
        assert!(m.point.norm() <= 0.5);
        assert!((m.point.re - 0.5).abs() < 1e-6);
    }

    #[test]
    fn ties_prefer_small_radius_then_small_angle() {
        let f = |_z: Complex64| 1.0;
        let m = maximize(&f, &SearchConfig::default(), 0.9);
        assert_eq!(m.grid_value, 1.0);
        let v = [1.0, 1.0 + 1e-14, 2.0, 2.0];
        assert_eq!(best_index(&v), 2);
    }

    #[test]
    fn refine_tol_controls_precision() {
        let target = Complex64::new(-0.2, 0.6);
        let f = |z: Complex64| 1.0 / (1.0 + (z - target).norm_sqr());
        let (p, _) = nelder_mead(&f, Complex64::new(0.0, 0.0), 0.1, 1e-12, 5000);
        assert!((p - target).norm() < 1e-7);
    }
}
