//! Inner/outer factorization from boundary samples and the unwinding
//! expansions built on it.
//!
//! The outer factor is `exp(u + iHu)` with `u = log|f|`, normalized so that
//! `O(0) > 0`; any unimodular constant therefore lands in the inner factor.

use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::afd::{maximal_selection, sift_with_leakage, szego_coefficient, Component, ComponentKind, Diagnostic, StopRule};
use crate::atoms::{mobius, szego_kernel, DiscParam};
use crate::error::AfdError;
use crate::search::SearchConfig;
use crate::signal::{analyze, synthesize, unit_points, CircularSignal, HardyFunction};
use crate::tolerance::Tolerances;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
/// Oversampling of the factorization grid relative to the native grid.
const FACTOR_OVERSAMPLING: usize = 4;

/// `f = I · O` on the boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    /// Boundary values of the inner factor.
    pub inner: CircularSignal,
    pub outer: HardyFunction,
}

/// Outer factor of the function with boundary values `f_boundary`, as a
/// series of order `N/2 - 1`.
pub fn outer_factor(f_boundary: &CircularSignal) -> Result<HardyFunction, AfdError> {
    outer_factor_with(f_boundary, &Tolerances::default())
}

pub fn outer_factor_with(f_boundary: &CircularSignal, tol: &Tolerances) -> Result<HardyFunction, AfdError> {
    let n = f_boundary.len();
    let moduli: Vec<f64> = f_boundary.samples().iter().map(|v| v.norm()).collect();
    let peak = moduli.iter().copied().fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(AfdError::DegenerateModulus { fraction: 1.0 });
    }
    let floor = tol.log_floor * peak;
    let below = moduli.iter().filter(|&&m| m < floor).count() as f64 / n as f64;
    if below > tol.floor_fraction {
        return Err(AfdError::DegenerateModulus { fraction: below });
    }
    let u: Vec<Complex64> = moduli.iter().map(|&m| Complex64::new(m.max(floor).ln(), 0.0)).collect();
    let u = CircularSignal::new(u)?;
    // u + iHu keeps the mean and doubles positive frequencies.
    let mut spec = analyze(&u);
    for k in 1..(n / 2) as i64 {
        let v = spec.get(k);
        spec.set(k, v * 2.0);
        spec.set(-k, ZERO);
    }
    spec.set(-(n as i64) / 2, ZERO);
    spec.set(0, Complex64::new(spec.get(0).re, 0.0));
    let w = synthesize(&spec);
    let o = w.map(|_, v| v.exp());
    Ok(HardyFunction::from_boundary(&o))
}

/// `I = f / O` on the boundary samples.
pub fn inner_factor(f_boundary: &CircularSignal, outer: &HardyFunction) -> Result<CircularSignal, AfdError> {
    let o = outer.boundary_on(f_boundary.len());
    if o.samples().iter().any(|v| v.norm() == 0.0) {
        return Err(AfdError::DegenerateModulus { fraction: 0.0 });
    }
    Ok(f_boundary.zip_with(&o, |f, o| f / o))
}

pub fn factorize(f_boundary: &CircularSignal) -> Result<Factorization, AfdError> {
    let outer = outer_factor(f_boundary)?;
    let inner = inner_factor(f_boundary, &outer)?;
    Ok(Factorization { inner, outer })
}

impl Factorization {
    /// `max_j ||I(t_j)| - 1|`.
    pub fn unimodularity_error(&self) -> f64 {
        self.inner.samples().iter().map(|v| (v.norm() - 1.0).abs()).fold(0.0, f64::max)
    }

    /// `‖I·O - f‖ / ‖f‖` on the samples of `f`.
    pub fn consistency_error(&self, f_boundary: &CircularSignal) -> f64 {
        let o = self.outer.boundary_on(f_boundary.len());
        let prod = self.inner.zip_with(&o, |i, o| i * o);
        prod.distance(f_boundary) / f_boundary.norm()
    }
}

/// Largest excess `Σ_{k>=n}|d_k|² - Σ_{k>=n}|c_k|²` over all `n`, where `c`
/// and `d` are the coefficients of `f` and of its outer factor.
pub fn front_loading_excess(f: &[Complex64], outer: &[Complex64]) -> f64 {
    let len = f.len().max(outer.len());
    let mut tail_f = 0.0;
    let mut tail_o = 0.0;
    let mut worst = f64::NEG_INFINITY;
    for k in (0..len).rev() {
        tail_f += f.get(k).map_or(0.0, |c| c.norm_sqr());
        tail_o += outer.get(k).map_or(0.0, |c| c.norm_sqr());
        worst = worst.max(tail_o - tail_f);
    }
    worst
}

/// One term of an unwinding expansion: `c_k · Φ_k · B_k`, where `Φ_k` is the
/// product of the extracted inner factors and `B_k` is the TM function of
/// the selected parameters (`B_k ≡ 1` for the pure recursion).
#[derive(Debug, Clone, PartialEq)]
pub struct UnwindingTerm {
    pub c: Complex64,
    /// Selected parameter; `None` for the pure recursion.
    pub a: Option<DiscParam>,
    /// Boundary values of `Π_{l<=k} I_l`.
    pub cumulative_inner: CircularSignal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnwindingDecomposition {
    pub terms: Vec<UnwindingTerm>,
    /// Energy left after `k` terms, starting with the source energy.
    pub residual_energy: Vec<f64>,
    pub source_energy: f64,
    /// Per-step `‖I·O - f_k‖ / ‖f_k‖`.
    pub consistency: Vec<f64>,
    /// Per-step front-loading excess relative to `‖f_k‖²`; non-positive
    /// when the inequality holds.
    pub front_loading: Vec<f64>,
    pub diagnostics: Vec<Diagnostic>,
}

impl UnwindingDecomposition {
    pub fn final_residual(&self) -> f64 {
        *self.residual_energy.last().unwrap_or(&self.source_energy)
    }

    pub fn energy_gap(&self) -> f64 {
        let captured: f64 = self.terms.iter().map(|t| t.c.norm_sqr()).sum();
        (self.source_energy - captured - self.final_residual()).abs() / self.source_energy
    }

    /// Components for the interleaved variant; empty for the pure recursion.
    pub fn components(&self) -> Vec<Component> {
        self.terms
            .iter()
            .filter_map(|t| t.a.map(|a| Component { a, c: t.c, kind: ComponentKind::Unwinding }))
            .collect()
    }

    /// Grid size of the stored boundary values.
    pub fn grid_len(&self) -> Option<usize> {
        self.terms.first().map(|t| t.cumulative_inner.len())
    }

    /// Sum of the terms on the stored grid.
    pub fn reconstruct(&self) -> Option<CircularSignal> {
        let n = self.grid_len()?;
        let points = unit_points(n);
        let mut total = alloc::vec![ZERO; n];
        let mut prefix = alloc::vec![Complex64::new(1.0, 0.0); n];
        for term in &self.terms {
            for (j, v) in total.iter_mut().enumerate() {
                let b = match term.a {
                    Some(a) => {
                        let b = prefix[j] * szego_kernel(a, points[j]);
                        prefix[j] *= mobius(a, points[j]);
                        b
                    }
                    None => Complex64::new(1.0, 0.0),
                };
                *v += term.c * term.cumulative_inner.samples()[j] * b;
            }
        }
        CircularSignal::new(total).ok()
    }
}

/// Factors `f_k` on the oversampled grid and truncates the outer factor
/// back to the order of `f_k`.
struct Step {
    inner: CircularSignal,
    outer: HardyFunction,
    consistency: f64,
    front_loading: f64,
    loss: f64,
}

fn factor_step(f: &HardyFunction) -> Result<Step, AfdError> {
    let n = FACTOR_OVERSAMPLING * f.grid_len();
    let boundary = f.boundary_on(n);
    let full = factorize(&boundary)?;
    let consistency = full.consistency_error(&boundary);
    let mut coeffs = full.outer.into_coeffs();
    let loss: f64 = coeffs[f.order() + 1..].iter().map(|c| c.norm_sqr()).sum();
    coeffs.truncate(f.order() + 1);
    let outer = HardyFunction::new(coeffs);
    let energy = f.energy();
    let front_loading = front_loading_excess(f.coeffs(), outer.coeffs()) / energy;
    Ok(Step { inner: full.inner, outer, consistency, front_loading, loss: loss / energy })
}

struct Runner {
    d: UnwindingDecomposition,
    cumulative: CircularSignal,
    scale: f64,
}

impl Runner {
    fn new(f: &HardyFunction) -> Result<Self, AfdError> {
        let source_energy = f.energy();
        if f.norm() < 1e-12 {
            return Err(AfdError::ZeroResidual);
        }
        let n = FACTOR_OVERSAMPLING * f.grid_len();
        Ok(Runner {
            d: UnwindingDecomposition {
                terms: Vec::new(),
                residual_energy: alloc::vec![source_energy],
                source_energy,
                consistency: Vec::new(),
                front_loading: Vec::new(),
                diagnostics: Vec::new(),
            },
            cumulative: CircularSignal::from_fn(n, |_| Complex64::new(1.0, 0.0))?,
            scale: source_energy,
        })
    }

    fn done(&self, step: usize, stop: &StopRule) -> bool {
        step >= stop.max_terms || self.d.final_residual() < stop.energy_tol * self.scale || self.d.final_residual() == 0.0
    }

    /// Factors `f`; on failure after the first step, records an early stop.
    fn factor(&mut self, step: usize, f: &HardyFunction) -> Result<Option<Step>, AfdError> {
        if f.norm() < 1e-12 {
            self.d.diagnostics.push(Diagnostic::EarlyStop { step, reason: AfdError::ZeroResidual });
            return Ok(None);
        }
        match factor_step(f) {
            Ok(s) => {
                self.d.consistency.push(s.consistency);
                self.d.front_loading.push(s.front_loading);
                if s.loss > 1e-12 {
                    self.d.diagnostics.push(Diagnostic::FactorizationLoss { step, fraction: s.loss });
                }
                if s.front_loading > 1e-9 {
                    self.d.diagnostics.push(Diagnostic::FrontLoading { step, excess: s.front_loading });
                }
                self.cumulative = self.cumulative.zip_with(&s.inner, |a, b| a * b);
                Ok(Some(s))
            }
            Err(e @ AfdError::DegenerateModulus { .. }) if step > 0 => {
                self.d.diagnostics.push(Diagnostic::EarlyStop { step, reason: e });
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }
}

/// Pure unwinding recursion: `f_k = φ_k ψ_k`, `c_k = ψ_k(0)`,
/// `f_{k+1} = ψ_k - ψ_k(0)`, giving `f ≈ Σ c_k φ_1⋯φ_k`.
pub fn uwa_decompose(f: &HardyFunction, stop: &StopRule) -> Result<UnwindingDecomposition, AfdError> {
    let mut run = Runner::new(f)?;
    let mut current = f.clone();
    let mut step = 0;
    while !run.done(step, stop) {
        let Some(s) = run.factor(step, &current)? else { break };
        let psi = s.outer;
        // ψ_k(0) is the mean of its boundary samples, i.e. the constant term.
        let c = psi.coeffs()[0];
        let next = psi.minus_constant(c);
        run.d.terms.push(UnwindingTerm { c, a: None, cumulative_inner: run.cumulative.clone() });
        run.d.residual_energy.push(next.energy());
        current = next;
        step += 1;
    }
    Ok(run.d)
}

/// Unwinding AFD: factor `f_k = I_k O_k`, choose `a_k` by maximal selection
/// on `O_k`, take `c_k = ⟨O_k, e_{a_k}⟩` and sift `O_k`.
pub fn uwafd_decompose(f: &HardyFunction, stop: &StopRule, search: &SearchConfig) -> Result<UnwindingDecomposition, AfdError> {
    let mut run = Runner::new(f)?;
    let mut current = f.clone();
    let mut step = 0;
    while !run.done(step, stop) {
        let Some(s) = run.factor(step, &current)? else { break };
        let outer = s.outer;
        let a = match maximal_selection(&outer, search) {
            Ok(a) => a,
            Err(AfdError::ZeroResidual) => {
                run.d.diagnostics.push(Diagnostic::EarlyStop { step, reason: AfdError::ZeroResidual });
                break;
            }
            Err(e) => return Err(e),
        };
        let c = szego_coefficient(&outer, a);
        let (next, _) = sift_with_leakage(&outer, a);
        run.d.terms.push(UnwindingTerm { c, a: Some(a), cumulative_inner: run.cumulative.clone() });
        run.d.residual_energy.push(next.energy());
        current = next;
        step += 1;
    }
    Ok(run.d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::afd::core_afd_decompose;
    use crate::atoms::blaschke_boundary;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn p(re: f64, im: f64) -> DiscParam {
        DiscParam::from_parts(re, im).unwrap()
    }

    fn boundary(n: usize, f: impl Fn(Complex64) -> Complex64) -> CircularSignal {
        CircularSignal::from_boundary_fn(n, f).unwrap()
    }

    #[test]
    fn constant_is_its_own_outer_factor() {
        let f = boundary(64, |_| c(0.0, -3.0));
        let fac = factorize(&f).unwrap();
        assert!((fac.outer.coeffs()[0] - c(3.0, 0.0)).norm() < 1e-12);
        assert!(fac.inner.samples().iter().all(|v| (v - c(0.0, -1.0)).norm() < 1e-12));
    }

    #[test]
    fn monomial_has_trivial_outer_factor() {
        let f = boundary(64, |z| z.powu(5));
        let fac = factorize(&f).unwrap();
        assert!((fac.outer.coeffs()[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(fac.outer.coeffs()[1..].iter().all(|v| v.norm() < 1e-12));
        for (z, i) in unit_points(64).iter().zip(fac.inner.samples()) {
            assert!((z.powu(5) - i).norm() < 1e-12);
        }
    }

    #[test]
    fn polynomial_without_disc_zeros_is_outer() {
        let f = boundary(256, |z| z + 2.0);
        let fac = factorize(&f).unwrap();
        let o = fac.outer.boundary_on(256);
        let worst = o.samples().iter().zip(f.samples()).map(|(o, f)| (o / f).norm() - 1.0).fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(worst < 1e-6);
        assert!(crate::signal::hardy_check(&o));
        let spread = fac.inner.samples().iter().map(|v| (v - fac.inner.samples()[0]).norm()).fold(0.0, f64::max);
        assert!(spread < 1e-5);
    }

    #[test]
    fn blaschke_times_outer_recovers_inner_part() {
        let params = [p(0.5, 0.0), p(0.5, 0.0)];
        let b = blaschke_boundary(&params, 512).unwrap();
        let f = b.map(|t, v| v * (c(2.0, 0.0) + Complex64::new(t.cos(), t.sin())));
        let fac = factorize(&f).unwrap();
        assert!(fac.unimodularity_error() < 1e-6);
        assert!(fac.consistency_error(&f) < 1e-6);
        assert!(fac.inner.distance(&b) / b.norm() < 1e-6);
    }

    #[test]
    fn degenerate_modulus_is_rejected() {
        let f = boundary(64, |z| if z.re > 0.0 { z } else { c(0.0, 0.0) });
        assert!(matches!(outer_factor(&f), Err(AfdError::DegenerateModulus { .. })));
    }

    #[test]
    fn uwa_on_scaled_monomial_is_one_term() {
        let mut coeffs = alloc::vec![c(0.0, 0.0); 64];
        coeffs[3] = c(0.0, 2.0);
        let f = HardyFunction::new(coeffs);
        let d = uwa_decompose(&f, &StopRule::default()).unwrap();
        assert_eq!(d.terms.len(), 1);
        assert!((d.terms[0].c - c(2.0, 0.0)).norm() < 1e-10);
        assert!(d.final_residual() < 1e-8);
        let expected = boundary(d.grid_len().unwrap(), |z| c(0.0, 1.0) * z.powu(3));
        assert!(d.terms[0].cumulative_inner.distance(&expected) < 1e-10);
    }

    #[test]
    fn uwa_hand_recursion() {
        // z(2+z)/2: φ_1 = z, ψ_1 = 1 + z/2, c_1 = 1, f_2 = z/2, then c_2 = 1/2.
        let mut coeffs = alloc::vec![c(0.0, 0.0); 32];
        coeffs[1] = c(1.0, 0.0);
        coeffs[2] = c(0.5, 0.0);
        let f = HardyFunction::new(coeffs);
        let d = uwa_decompose(&f, &StopRule::default()).unwrap();
        assert!((d.terms[0].c - c(1.0, 0.0)).norm() < 1e-10);
        assert!((d.terms[1].c - c(0.5, 0.0)).norm() < 1e-10);
        assert_eq!(d.terms.len(), 2);
        assert!(d.energy_gap() < 1e-10);
        assert!(d.front_loading.iter().all(|&e| e < 1e-12));
        let back = d.reconstruct().unwrap();
        assert!(back.distance(&f.boundary_on(back.len())) < 1e-9);
    }

    #[test]
    fn uwafd_examples() {
        let a = p(0.3, 0.0);
        let e = HardyFunction::from_fn(127, |z| szego_kernel(a, z));
        let d = uwafd_decompose(&e, &StopRule::default(), &SearchConfig::default()).unwrap();
        assert_eq!(d.terms.len(), 1);
        assert!(d.final_residual() < 1e-6);

        let f = HardyFunction::from_fn(127, |z| z * z * szego_kernel(a, z));
        let d = uwafd_decompose(&f, &StopRule::default(), &SearchConfig::default()).unwrap();
        assert_eq!(d.terms.len(), 1);
        assert!(d.final_residual() < 1e-6);
        let expected = boundary(d.grid_len().unwrap(), |z| z * z);
        assert!(d.terms[0].cumulative_inner.distance(&expected) < 1e-6);
        assert!(d.energy_gap() < 1e-8);
    }

    #[test]
    fn uwafd_compared_with_core_on_singular_like_factor() {
        let f = HardyFunction::from_fn(511, |z| {
            let one = c(1.0, 0.0);
            ((z - one) / (z + one) * 0.5).exp() * (c(2.0, 0.0) + z)
        });
        let stop = StopRule { max_terms: 5, energy_tol: 0.0 };
        let u = uwafd_decompose(&f, &stop, &SearchConfig::default()).unwrap();
        let core = core_afd_decompose(&f, &stop, &SearchConfig::default()).unwrap();
        assert!(u.residual_energy.windows(2).all(|w| w[1] <= w[0]));
        assert!(core.residual_energy.windows(2).all(|w| w[1] <= w[0]));
    }
}
