//! Core AFD: maximal selection, the generalized backward shift (sifting),
//! full decompositions and reconstruction.

use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::atoms::{szego_kernel, tm_values, mobius, DiscParam};
use crate::error::AfdError;
use crate::poafd::{gram_schmidt, KernelSpace};
use crate::search::{maximize, SearchConfig};
use crate::signal::{unit_points, CircularSignal, HardyFunction};
use crate::tolerance::Tolerances;

/// Absolute norm below which a remainder counts as zero.
const ZERO_NORM: f64 = 1e-12;
/// Allowed gap between the three coefficient forms, relative to `‖f‖`.
const COEFFICIENT_MATCH: f64 = 1e-8;

/// Which algorithm produced a component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentKind {
    Core,
    Unwinding,
    Poafd,
}

/// One term `c_k B_k` together with its parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Component {
    pub a: DiscParam,
    pub c: Complex64,
    pub kind: ComponentKind,
}

/// Orthonormal system the coefficients refer to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Basis {
    /// Closed-form TM system of the parameter sequence.
    Takenaka,
    /// Gram-Schmidt of (multiplicity) kernels in a coefficient space.
    Kernel(KernelSpace),
}

/// Non-fatal observations recorded during a run.
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    /// Spectral content outside `0..=M` after re-analysis, relative to `‖f‖²`.
    Leakage { step: usize, fraction: f64 },
    /// `⟨f_k, e_{a_k}⟩`, `⟨f, B_k⟩` and `⟨g_k, B_k⟩` disagree by `gap`.
    CoefficientMismatch { step: usize, gap: f64 },
    /// Energy dropped when truncating an outer factor, relative to `‖f‖²`.
    FactorizationLoss { step: usize, fraction: f64 },
    /// Energy-front-loading tail inequality failed by `excess`.
    FrontLoading { step: usize, excess: f64 },
    /// Run ended before the term budget.
    EarlyStop { step: usize, reason: AfdError },
}

/// Ordered components plus the residual-energy trace.
///
/// `residual_energy[k]` is the energy left after `k` terms, so the trace has
/// one more entry than `components` and starts at `source_energy`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub components: Vec<Component>,
    pub residual_energy: Vec<f64>,
    pub source_energy: f64,
    pub basis: Basis,
    pub diagnostics: Vec<Diagnostic>,
}

impl Decomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn params(&self) -> Vec<DiscParam> {
        self.components.iter().map(|c| c.a).collect()
    }

    pub fn coefficients(&self) -> Vec<Complex64> {
        self.components.iter().map(|c| c.c).collect()
    }

    pub fn final_residual(&self) -> f64 {
        *self.residual_energy.last().unwrap_or(&self.source_energy)
    }

    /// `|‖f‖² - Σ|c_k|² - residual| / ‖f‖²`.
    pub fn energy_gap(&self) -> f64 {
        let captured: f64 = self.components.iter().map(|c| c.c.norm_sqr()).sum();
        let scale = if self.source_energy > 0.0 { self.source_energy } else { 1.0 };
        (self.source_energy - captured - self.final_residual()).abs() / scale
    }
}

/// Stopping rule for greedy decompositions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopRule {
    pub max_terms: usize,
    /// Stop once `residual / source` falls below this.
    pub energy_tol: f64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule { max_terms: 50, energy_tol: 1e-6 }
    }
}

impl StopRule {
    pub fn terms(max_terms: usize) -> Self {
        StopRule { max_terms, ..Self::default() }
    }
}

/// `(1 - |a|²)|f(a)|²`, which equals `|⟨f, e_a⟩|²`.
pub fn objective(f: &HardyFunction, a: DiscParam) -> f64 {
    objective_at(f, a.value())
}

fn objective_at(f: &HardyFunction, a: Complex64) -> f64 {
    (1.0 - a.norm_sqr()) * f.eval(a).norm_sqr()
}

/// `⟨f, e_a⟩ = √(1-|a|²) f(a)`.
pub fn szego_coefficient(f: &HardyFunction, a: DiscParam) -> Complex64 {
    f.eval(a.value()) * (1.0 - a.value().norm_sqr()).sqrt()
}

/// Parameter maximizing [`objective`] over the search disc.
pub fn maximal_selection(f: &HardyFunction, search: &SearchConfig) -> Result<DiscParam, AfdError> {
    if f.norm() < ZERO_NORM {
        return Err(AfdError::ZeroResidual);
    }
    let cap = search.radius_for_order(f.order());
    let best = maximize(&|a| objective_at(f, a), search, cap);
    Ok(DiscParam::clamped(best.point))
}

/// Reduced remainder `(f - ⟨f, e_a⟩ e_a) / ((z - a)/(1 - āz))`, formed on the
/// boundary samples of the native grid and re-analyzed. Returns the first
/// `M + 1` coefficients and the energy found outside them.
pub fn sift_with_leakage(f: &HardyFunction, a: DiscParam) -> (HardyFunction, f64) {
    let c = szego_coefficient(f, a);
    let n = f.grid_len();
    let values = f.circle_values(1.0, n);
    let samples = unit_points(n)
        .into_iter()
        .zip(values)
        .map(|(z, v)| (v - c * szego_kernel(a, z)) / mobius(a, z))
        .collect();
    let s = CircularSignal::new(samples).expect("native grid is valid");
    let (h, negative) = HardyFunction::project(&s);
    let mut coeffs = h.into_coeffs();
    let above: f64 = coeffs[f.order() + 1..].iter().map(|c| c.norm_sqr()).sum();
    coeffs.truncate(f.order() + 1);
    (HardyFunction::new(coeffs), negative + above)
}

/// Reduced remainder at `a`; see [`sift_with_leakage`].
pub fn sift(f: &HardyFunction, a: DiscParam) -> HardyFunction {
    sift_with_leakage(f, a).0
}

/// Checks the three coefficient forms of one step against each other.
struct CoefficientAudit {
    points: Vec<Complex64>,
    source: Vec<Complex64>,
    standard: Vec<Complex64>,
    /// Running Blaschke prefix `Π_{l<k} m_{a_l}` on the grid.
    prefix: Vec<Complex64>,
}

impl CoefficientAudit {
    fn new(f: &HardyFunction) -> Self {
        let n = 2 * f.grid_len();
        let source = f.circle_values(1.0, n);
        CoefficientAudit {
            points: unit_points(n),
            standard: source.clone(),
            source,
            prefix: alloc::vec![Complex64::new(1.0, 0.0); n],
        }
    }

    /// Returns the largest gap between `c`, `⟨f, B_k⟩` and `⟨g_k, B_k⟩`,
    /// then removes `c B_k` from the standard remainder.
    fn step(&mut self, a: DiscParam, c: Complex64) -> f64 {
        let n = self.points.len() as f64;
        let b: Vec<Complex64> = self.points.iter().zip(&self.prefix).map(|(&z, &p)| p * szego_kernel(a, z)).collect();
        let on_source: Complex64 = self.source.iter().zip(&b).map(|(f, b)| f * b.conj()).sum::<Complex64>() / n;
        let on_standard: Complex64 = self.standard.iter().zip(&b).map(|(g, b)| g * b.conj()).sum::<Complex64>() / n;
        for ((g, p), (&z, bv)) in self.standard.iter_mut().zip(self.prefix.iter_mut()).zip(self.points.iter().zip(&b)) {
            *g -= c * bv;
            *p *= mobius(a, z);
        }
        (c - on_source).norm().max((c - on_standard).norm())
    }
}

/// Runs the sifting chain through `params` in order, with or without
/// maximal selection.
fn run_chain(
    f: &HardyFunction,
    mut next: impl FnMut(usize, &HardyFunction) -> Option<Result<DiscParam, AfdError>>,
    stop: &StopRule,
    tol: &Tolerances,
) -> Result<Decomposition, AfdError> {
    let source_energy = f.energy();
    if f.norm() < ZERO_NORM {
        return Err(AfdError::ZeroResidual);
    }
    let scale = f.norm();
    let mut audit = CoefficientAudit::new(f);
    let mut current = f.clone();
    let mut d = Decomposition {
        components: Vec::new(),
        residual_energy: alloc::vec![source_energy],
        source_energy,
        basis: Basis::Takenaka,
        diagnostics: Vec::new(),
    };
    let mut step = 0;
    while step < stop.max_terms {
        if d.final_residual() < stop.energy_tol * source_energy {
            break;
        }
        let a = match next(step, &current) {
            None => break,
            Some(Ok(a)) => a,
            Some(Err(AfdError::ZeroResidual)) => {
                d.diagnostics.push(Diagnostic::EarlyStop { step, reason: AfdError::ZeroResidual });
                break;
            }
            Some(Err(e)) => return Err(e),
        };
        let c = szego_coefficient(&current, a);
        let (remainder, leak) = sift_with_leakage(&current, a);
        if leak > tol.leakage * tol.leakage * source_energy {
            d.diagnostics.push(Diagnostic::Leakage { step, fraction: leak / source_energy });
        }
        let gap = audit.step(a, c);
        if gap > COEFFICIENT_MATCH * scale {
            d.diagnostics.push(Diagnostic::CoefficientMismatch { step, gap });
        }
        d.components.push(Component { a, c, kind: ComponentKind::Core });
        d.residual_energy.push(remainder.energy());
        current = remainder;
        step += 1;
    }
    Ok(d)
}

/// Greedy decomposition `f ≈ Σ c_k B_k` with maximal selection at each step.
pub fn core_afd_decompose(f: &HardyFunction, stop: &StopRule, search: &SearchConfig) -> Result<Decomposition, AfdError> {
    run_chain(f, |_, g| Some(maximal_selection(g, search)), stop, &Tolerances::default())
}

/// Sifting chain with prescribed parameters. With all parameters at the
/// origin the coefficients are the Taylor coefficients of `f`.
pub fn sift_with_params(f: &HardyFunction, params: &[DiscParam]) -> Result<Decomposition, AfdError> {
    let stop = StopRule { max_terms: params.len(), energy_tol: 0.0 };
    run_chain(
        f,
        |k, g| if g.norm() < ZERO_NORM { Some(Err(AfdError::ZeroResidual)) } else { Some(Ok(params[k])) },
        &stop,
        &Tolerances::default(),
    )
}

/// The first `n` parameters of a Core-AFD run, padded with the origin if the
/// run stops early.
pub fn greedy_params(f: &HardyFunction, n: usize, search: &SearchConfig) -> Result<Vec<DiscParam>, AfdError> {
    let d = core_afd_decompose(f, &StopRule { max_terms: n, energy_tol: 0.0 }, search)?;
    let mut params = d.params();
    params.resize(n, DiscParam::ORIGIN);
    Ok(params)
}

/// `Σ c_k B_k` on an `n`-point boundary grid.
pub fn reconstruct(d: &Decomposition, n: usize) -> Result<CircularSignal, AfdError> {
    let params = d.params();
    let coeffs = d.coefficients();
    match d.basis {
        Basis::Takenaka => CircularSignal::from_boundary_fn(n, |z| {
            tm_values(&params, z).iter().zip(&coeffs).map(|(b, c)| b * c).sum()
        }),
        Basis::Kernel(space) => {
            let system = gram_schmidt(&space, &params.iter().copied().collect())?;
            let mut total = alloc::vec![Complex64::new(0.0, 0.0); space.order + 1];
            for (b, c) in system.vectors().iter().zip(&coeffs) {
                for (t, v) in total.iter_mut().zip(b) {
                    *t += c * v;
                }
            }
            let h = HardyFunction::new(total);
            if n <= h.order() {
                return Err(AfdError::InvalidGrid(n));
            }
            CircularSignal::new(h.circle_values(1.0, n))
        }
    }
}
