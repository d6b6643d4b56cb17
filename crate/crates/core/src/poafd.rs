//! Pre-orthogonal AFD in weighted coefficient spaces.
//!
//! A function is a coefficient sequence `f_0..f_M` with inner product
//! `⟨f, g⟩ = Σ w_k f_k conj(g_k)`. The reproducing kernel at `a` has
//! coefficients `ā^k / w_k`, so `⟨f, k_a⟩ = f(a)`. Repeated parameters use
//! the derivative kernels `(∂/∂ā)^{l-1} k_a`.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::afd::{Basis, Component, ComponentKind, Decomposition, Diagnostic, StopRule};
use crate::atoms::{DiscParam, ParamList};
use crate::error::AfdError;
use crate::search::{maximize, SearchConfig};
use crate::signal::horner;
use crate::tolerance::Tolerances;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
/// Below `EXPLICIT_RATIO · K(a, a)` the closed-form denominator of the
/// selection objective is replaced by an explicit orthogonalization.
const EXPLICIT_RATIO: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    /// `w_k = 1`.
    Hardy,
    /// `w_k = 1/(k+1)`.
    Bergman,
}

/// Weighted coefficient space truncated at order `M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpace {
    pub kind: SpaceKind,
    pub order: usize,
}

impl KernelSpace {
    pub fn hardy(order: usize) -> Self {
        KernelSpace { kind: SpaceKind::Hardy, order }
    }

    pub fn bergman(order: usize) -> Self {
        KernelSpace { kind: SpaceKind::Bergman, order }
    }

    pub fn len(&self) -> usize {
        self.order + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weight(&self, k: usize) -> f64 {
        match self.kind {
            SpaceKind::Hardy => 1.0,
            SpaceKind::Bergman => 1.0 / (k as f64 + 1.0),
        }
    }

    pub fn inner(&self, f: &[Complex64], g: &[Complex64]) -> Complex64 {
        f.iter().zip(g).enumerate().map(|(k, (a, b))| a * b.conj() * self.weight(k)).sum()
    }

    pub fn energy(&self, f: &[Complex64]) -> f64 {
        f.iter().enumerate().map(|(k, a)| a.norm_sqr() * self.weight(k)).sum()
    }

    /// `K(a, a) = ‖k_a‖²` of the truncated kernel.
    pub fn kernel_diagonal(&self, a: Complex64) -> f64 {
        let x = a.norm_sqr();
        let m = self.order as i32;
        match self.kind {
            SpaceKind::Hardy => {
                if x == 0.0 {
                    1.0
                } else {
                    (1.0 - x.powi(m + 1)) / (1.0 - x)
                }
            }
            SpaceKind::Bergman => {
                let tail = (m as f64 + 2.0) * x.powi(m + 1) - (m as f64 + 1.0) * x.powi(m + 2);
                (1.0 - tail) / ((1.0 - x) * (1.0 - x))
            }
        }
    }

    /// Coefficients of `(∂/∂ā)^p k_a`: `k!/(k-p)! · ā^{k-p} / w_k`.
    pub fn kernel_coeffs(&self, a: Complex64, p: usize) -> Vec<Complex64> {
        let ab = a.conj();
        let mut out = vec![ZERO; self.len()];
        let mut power = Complex64::new(1.0, 0.0);
        for (k, slot) in out.iter_mut().enumerate().skip(p) {
            let falling: f64 = ((k - p + 1)..=k).map(|j| j as f64).product();
            *slot = power * (falling / self.weight(k));
            power *= ab;
        }
        out
    }
}

/// `(∂/∂ā)^{l-1} k_a` as a coefficient sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicityKernel {
    pub a: DiscParam,
    pub order: usize,
    pub coeffs: Vec<Complex64>,
}

/// Kernel used for the `l`-th occurrence of `a`.
pub fn kernel(space: &KernelSpace, a: DiscParam, l: usize) -> MultiplicityKernel {
    assert!(l >= 1, "multiplicity starts at 1");
    MultiplicityKernel { a, order: l, coeffs: space.kernel_coeffs(a.value(), l - 1) }
}

/// Orthonormal vectors `B_1..B_n` obtained from the multiplicity kernels of
/// `params`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoSystem {
    space: KernelSpace,
    params: ParamList,
    vectors: Vec<Vec<Complex64>>,
    /// `‖v_k‖² / ‖k̃_k‖²` for each step.
    ratios: Vec<f64>,
}

impl OrthoSystem {
    pub fn empty(space: KernelSpace) -> Self {
        OrthoSystem { space, params: ParamList::default(), vectors: Vec::new(), ratios: Vec::new() }
    }

    pub fn space(&self) -> &KernelSpace {
        &self.space
    }

    pub fn params(&self) -> &ParamList {
        &self.params
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Determinant of the Gram matrix of the unit-normalized kernels.
    pub fn normalized_determinant(&self) -> f64 {
        self.ratios.iter().product()
    }

    /// Occurrences of `a` among the current parameters.
    pub fn multiplicity_of(&self, a: DiscParam) -> usize {
        self.params.iter().filter(|b| b.coincides(a)).count()
    }

    /// Residual of `v` after projection onto the system, twice.
    fn orthogonalize(&self, v: &mut [Complex64]) {
        for _ in 0..2 {
            for b in &self.vectors {
                let c = self.space.inner(v, b);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
    }

    /// Candidate `v = k̃_a - P k̃_a` and its ratio `‖v‖²/‖k̃_a‖²`.
    fn candidate(&self, a: DiscParam) -> (Vec<Complex64>, f64) {
        let l = self.multiplicity_of(a) + 1;
        let mut v = kernel(&self.space, a, l).coeffs;
        let base = self.space.energy(&v);
        self.orthogonalize(&mut v);
        let ratio = self.space.energy(&v) / base;
        (v, ratio)
    }

    /// Appends the orthonormalized kernel for `a`.
    pub fn extend(&mut self, a: DiscParam, tol: &Tolerances) -> Result<&[Complex64], AfdError> {
        let (mut v, ratio) = self.candidate(a);
        if ratio.is_nan() || ratio < tol.gram_determinant || ratio == 0.0 {
            return Err(AfdError::DegenerateGram(ratio));
        }
        let norm = self.space.energy(&v).sqrt();
        for x in &mut v {
            *x /= norm;
        }
        self.params.push(a);
        self.vectors.push(v);
        self.ratios.push(ratio);
        Ok(self.vectors.last().expect("just pushed"))
    }

    /// `max_{j,k} |⟨B_j, B_k⟩ - δ_jk|`.
    pub fn gram_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (j, b) in self.vectors.iter().enumerate() {
            for (k, c) in self.vectors.iter().enumerate() {
                let g = self.space.inner(b, c);
                let target = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((g - target).norm());
            }
        }
        worst
    }

    /// `f - Σ ⟨f, B_k⟩ B_k`.
    pub fn residual(&self, f: &[Complex64]) -> Vec<Complex64> {
        let mut g = f.to_vec();
        g.resize(self.space.len(), ZERO);
        self.orthogonalize(&mut g);
        g
    }
}

/// Orthonormalizes the multiplicity kernels of `params` in order.
pub fn gram_schmidt(space: &KernelSpace, params: &ParamList) -> Result<OrthoSystem, AfdError> {
    gram_schmidt_with(space, params, &Tolerances::default())
}

pub fn gram_schmidt_with(space: &KernelSpace, params: &ParamList, tol: &Tolerances) -> Result<OrthoSystem, AfdError> {
    let mut system = OrthoSystem::empty(*space);
    for &a in params.iter() {
        system.extend(a, tol)?;
    }
    Ok(system)
}

/// `|⟨g, B^a⟩|²` for the extension of `system` by `a`, with `g` orthogonal
/// to the system.
fn selection_objective(system: &OrthoSystem, g: &[Complex64], a: Complex64) -> f64 {
    let space = system.space();
    let p = DiscParam::clamped(a);
    if system.multiplicity_of(p) == 0 {
        let k = space.kernel_diagonal(a);
        let known: f64 = system.vectors().iter().map(|b| horner(b, a).norm_sqr()).sum();
        let den = k - known;
        if den >= EXPLICIT_RATIO * k {
            return horner(g, a).norm_sqr() / den;
        }
    }
    let (v, ratio) = system.candidate(p);
    if ratio.is_nan() || ratio <= 0.0 {
        return 0.0;
    }
    space.inner(g, &v).norm_sqr() / space.energy(&v)
}

/// Parameter maximizing `|⟨g, B^a_n⟩|` over `|a| <= search.max_radius`,
/// where `g` is the residual of `f` against `system`.
pub fn poafd_select(space: &KernelSpace, f: &[Complex64], system: &OrthoSystem, search: &SearchConfig) -> Result<DiscParam, AfdError> {
    debug_assert_eq!(space, system.space());
    let g = system.residual(f);
    if space.energy(&g).sqrt() < 1e-12 {
        return Err(AfdError::ZeroResidual);
    }
    let cap = search.radius_for_order(space.order);
    let best = maximize(&|a| selection_objective(system, &g, a), search, cap);
    Ok(DiscParam::clamped(best.point))
}

/// Greedy expansion `f = Σ ⟨f, B_n⟩ B_n` with maximal selection over the
/// extended system at each step.
pub fn poafd_decompose(space: &KernelSpace, f: &[Complex64], stop: &StopRule, search: &SearchConfig) -> Result<Decomposition, AfdError> {
    let tol = Tolerances::default();
    let mut g = f.to_vec();
    g.resize(space.len(), ZERO);
    let source_energy = space.energy(&g);
    if source_energy.sqrt() < 1e-12 {
        return Err(AfdError::ZeroResidual);
    }
    let mut system = OrthoSystem::empty(*space);
    let mut d = Decomposition {
        components: Vec::new(),
        residual_energy: vec![source_energy],
        source_energy,
        basis: Basis::Kernel(*space),
        diagnostics: Vec::new(),
    };
    for step in 0..stop.max_terms {
        if d.final_residual() < stop.energy_tol * source_energy {
            break;
        }
        let a = match poafd_select(space, &g, &system, search) {
            Ok(a) => a,
            Err(AfdError::ZeroResidual) => {
                d.diagnostics.push(Diagnostic::EarlyStop { step, reason: AfdError::ZeroResidual });
                break;
            }
            Err(e) => return Err(e),
        };
        let b = match system.extend(a, &tol) {
            Ok(b) => b,
            Err(e @ AfdError::DegenerateGram(_)) => {
                d.diagnostics.push(Diagnostic::EarlyStop { step, reason: e });
                break;
            }
            Err(e) => return Err(e),
        };
        let c = space.inner(&g, b);
        for (x, y) in g.iter_mut().zip(b) {
            *x -= c * y;
        }
        d.components.push(Component { a, c, kind: ComponentKind::Poafd });
        d.residual_energy.push(space.energy(&g));
    }
    Ok(d)
}

/// Distances `‖B^{b_j}_n - B^{a_n}_n‖` for `b_j = a_n + h_j` along the real
/// direction, where `B^{a_n}_n` uses the multiplicity kernel of `a_n`.
pub fn multiplicity_limit_check(space: &KernelSpace, params: &ParamList, a_n: DiscParam, h_seq: &[f64]) -> Result<Vec<f64>, AfdError> {
    // Nearby points make nearly dependent kernels on purpose; only an exact
    // breakdown is an error here.
    let tol = Tolerances { gram_determinant: 0.0, ..Tolerances::default() };
    let base = gram_schmidt_with(space, params, &tol)?;
    let mut limit_system = base.clone();
    let limit = limit_system.extend(a_n, &tol)?.to_vec();
    h_seq
        .iter()
        .map(|&h| {
            let b = DiscParam::new(a_n.value() + h)?;
            let mut s = base.clone();
            let v = s.extend(b, &tol)?;
            let diff: Vec<Complex64> = v.iter().zip(&limit).map(|(x, y)| x - y).collect();
            Ok(space.energy(&diff).sqrt())
        })
        .collect()
}
