//! Szegő kernels, Möbius factors, Blaschke products and Takenaka-Malmquist
//! (TM) systems, plus mono-component and Bedrosian checks.

use alloc::vec::Vec;
use core::ops::Deref;
use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::AfdError;
use crate::signal::{self, analytic_signal, hilbert_transform, CircularSignal};
use crate::tolerance::{Tolerances, BOUNDARY_MARGIN, COINCIDENCE};

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// A point strictly inside the unit disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscParam(Complex64);

impl DiscParam {
    pub const ORIGIN: DiscParam = DiscParam(Complex64 { re: 0.0, im: 0.0 });

    pub fn new(a: Complex64) -> Result<Self, AfdError> {
        if a.re.is_finite() && a.im.is_finite() && a.norm() <= 1.0 - BOUNDARY_MARGIN {
            Ok(DiscParam(a))
        } else {
            Err(AfdError::OutsideDisc { re: a.re, im: a.im })
        }
    }

    pub fn from_parts(re: f64, im: f64) -> Result<Self, AfdError> {
        Self::new(Complex64::new(re, im))
    }

    /// Radially clamps `a` into the admissible disc.
    pub fn clamped(a: Complex64) -> Self {
        let limit = 1.0 - BOUNDARY_MARGIN;
        let r = a.norm();
        if r > limit {
            DiscParam(a * (limit / r))
        } else {
            DiscParam(a)
        }
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn modulus(self) -> f64 {
        self.0.norm()
    }

    pub fn coincides(self, other: DiscParam) -> bool {
        (self.0 - other.0).norm() < COINCIDENCE
    }
}

impl From<DiscParam> for Complex64 {
    fn from(p: DiscParam) -> Self {
        p.0
    }
}

/// Ordered parameter sequence `a_1, …, a_n`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParamList(Vec<DiscParam>);

impl ParamList {
    pub fn new(params: Vec<DiscParam>) -> Self {
        ParamList(params)
    }

    pub fn from_complex(values: &[Complex64]) -> Result<Self, AfdError> {
        values.iter().map(|&a| DiscParam::new(a)).collect::<Result<Vec<_>, _>>().map(ParamList)
    }

    pub fn push(&mut self, a: DiscParam) {
        self.0.push(a);
    }

    pub fn as_slice(&self) -> &[DiscParam] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<DiscParam> {
        self.0
    }

    /// `l(a_n)`: occurrences of `a_n` among `a_1..a_n`, for every position.
    pub fn multiplicities(&self) -> Vec<usize> {
        (0..self.0.len())
            .map(|n| self.0[..=n].iter().filter(|b| b.coincides(self.0[n])).count())
            .collect()
    }
}

impl Deref for ParamList {
    type Target = [DiscParam];
    fn deref(&self) -> &[DiscParam] {
        &self.0
    }
}

impl FromIterator<DiscParam> for ParamList {
    fn from_iter<I: IntoIterator<Item = DiscParam>>(iter: I) -> Self {
        ParamList(iter.into_iter().collect())
    }
}

/// Normalized Szegő kernel `e_a(z) = √(1-|a|²) / (1 - ā z)`.
pub fn szego_kernel(a: DiscParam, z: Complex64) -> Complex64 {
    let a = a.0;
    Complex64::new((1.0 - a.norm_sqr()).sqrt(), 0.0) / (ONE - a.conj() * z)
}

/// Disc automorphism `(z - a) / (1 - ā z)`.
pub fn mobius(a: DiscParam, z: Complex64) -> Complex64 {
    let a = a.0;
    (z - a) / (ONE - a.conj() * z)
}

/// `B_k(z) = e_{a_k}(z) Π_{l<k} (z - a_l)/(1 - ā_l z)`, with `k` 1-based.
pub fn tm_eval(params: &[DiscParam], k: usize, z: Complex64) -> Complex64 {
    assert!(k >= 1 && k <= params.len(), "TM index {k} out of range 1..={}", params.len());
    params[..k - 1].iter().fold(szego_kernel(params[k - 1], z), |acc, &a| acc * mobius(a, z))
}

/// `B_1(z), …, B_n(z)` in one pass.
pub fn tm_values(params: &[DiscParam], z: Complex64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(params.len());
    let mut prefix = ONE;
    for &a in params {
        out.push(prefix * szego_kernel(a, z));
        prefix *= mobius(a, z);
    }
    out
}

/// Boundary samples of the finite Blaschke product with zeros `params`.
pub fn blaschke_boundary(params: &[DiscParam], n: usize) -> Result<CircularSignal, AfdError> {
    CircularSignal::from_boundary_fn(n, |z| params.iter().fold(ONE, |acc, &a| acc * mobius(a, z)))
}

/// Poisson kernel `(1-|a|²)/|e^{it} - a|²` written through `cos` so that
/// `a = 0` gives exactly 1.
pub fn poisson(a: DiscParam, t: f64) -> f64 {
    let r = a.0.norm();
    let phi = a.0.arg();
    (1.0 - r * r) / (1.0 - 2.0 * r * (t - phi).cos() + r * r)
}

/// Boundary phase derivative of the Blaschke product: `Σ_k P_{a_k}(t)`.
pub fn blaschke_phase_derivative(params: &[DiscParam], t: &[f64]) -> Vec<f64> {
    t.iter().map(|&t| params.iter().map(|&a| poisson(a, t)).sum()).collect()
}

/// Boundary phase derivative of `B_k`: Poisson terms of the Möbius factors
/// plus `(P_{a_k} - 1)/2` from the Szegő factor.
pub fn tm_phase_derivative(params: &[DiscParam], k: usize, t: f64) -> f64 {
    assert!(k >= 1 && k <= params.len());
    let blaschke: f64 = params[..k - 1].iter().map(|&a| poisson(a, t)).sum();
    blaschke + 0.5 * (poisson(params[k - 1], t) - 1.0)
}

/// Outcome of [`monocomp_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct MonoReport {
    /// Minimum of `θ'_r` on the largest radius.
    pub min_phase_derivative: f64,
    /// Fraction of samples with `θ'_r < -1e-6` on the largest radius.
    pub fraction_negative: f64,
    /// `(1/2π) ∫ θ'_r dt` on the largest radius.
    pub mean_phase_derivative: f64,
    pub radii: Vec<f64>,
    /// Minimum of `θ'_r` for every radius.
    pub min_per_radius: Vec<f64>,
    /// Sup-norm change of `θ'_r` between consecutive radii.
    pub successive_change: Vec<f64>,
}

impl MonoReport {
    pub fn is_mono_component(&self) -> bool {
        self.fraction_negative == 0.0
    }
}

/// Radii `1 - 2^{-m}`, `m = 4..=12`.
pub fn default_radii() -> Vec<f64> {
    (4..=12).map(|m| 1.0 - 2f64.powi(-m)).collect()
}

/// Evaluates the analytic phase derivative of a real signal along radii
/// approaching the circle.
pub fn monocomp_check(s: &CircularSignal, radii: &[f64]) -> Result<MonoReport, AfdError> {
    if radii.is_empty() {
        return Err(AfdError::InvalidArgument("no radii supplied"));
    }
    let plus = analytic_signal(s)?;
    let n = s.len();
    let threshold = Tolerances::default().negative_phase;
    let mut min_per_radius = Vec::with_capacity(radii.len());
    let mut successive_change = Vec::new();
    let mut last: Option<Vec<f64>> = None;
    for &r in radii {
        let d = signal::phase_derivative_on(&plus, r, n)?;
        min_per_radius.push(d.iter().copied().fold(f64::INFINITY, f64::min));
        if let Some(prev) = &last {
            successive_change.push(prev.iter().zip(&d).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
        }
        last = Some(d);
    }
    let d = last.unwrap_or_default();
    let negatives = d.iter().filter(|&&v| v < -threshold).count();
    Ok(MonoReport {
        min_phase_derivative: *min_per_radius.last().unwrap_or(&f64::NAN),
        fraction_negative: negatives as f64 / n as f64,
        mean_phase_derivative: d.iter().sum::<f64>() / n as f64,
        radii: radii.to_vec(),
        min_per_radius,
        successive_change,
    })
}

/// `‖H(ρ cos θ) - (ρ sin θ - mean)‖ / ‖ρ‖` with the right side taken modulo
/// its mean, since the transform annihilates constants.
pub fn bedrosian_check(rho: &[f64], theta: &[f64]) -> Result<f64, AfdError> {
    if rho.len() != theta.len() {
        return Err(AfdError::InvalidArgument("rho and theta grids differ"));
    }
    let re = CircularSignal::new(rho.iter().zip(theta).map(|(r, t)| Complex64::new(r * t.cos(), 0.0)).collect())?;
    let im: Vec<f64> = rho.iter().zip(theta).map(|(r, t)| r * t.sin()).collect();
    let mean = im.iter().sum::<f64>() / im.len() as f64;
    let h = hilbert_transform(&re);
    let n = rho.len() as f64;
    let gap = h.samples().iter().zip(&im).map(|(hv, v)| (hv.re - (v - mean)).powi(2)).sum::<f64>() / n;
    let norm = rho.iter().map(|r| r * r).sum::<f64>() / n;
    if norm == 0.0 {
        return Err(AfdError::InvalidArgument("zero amplitude"));
    }
    Ok((gap / norm).sqrt())
}
