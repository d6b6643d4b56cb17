//! Sampled signals on the unit circle, discrete Fourier analysis, the
//! circular Hilbert transform and analytic signals.
//!
//! A [`CircularSignal`] holds values at `t_j = 2πj/N`. A [`HardyFunction`]
//! holds coefficients `c_0..c_M` of `Σ c_k z^k` and evaluates anywhere in the
//! closed disc.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::AfdError;
use crate::fft;
use crate::tolerance::{Tolerances, MODULUS_FLOOR};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Largest radius used for interior evaluation of truncated series.
pub const MAX_INTERIOR_RADIUS: f64 = 1.0 - 1e-6;

/// Uniform grid `2πj/N`, `j = 0..N`.
pub fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect()
}

/// `e^{it_j}` on the uniform grid.
pub fn unit_points(n: usize) -> Vec<Complex64> {
    grid(n).into_iter().map(|t| Complex64::new(t.cos(), t.sin())).collect()
}

fn check_grid(n: usize) -> Result<(), AfdError> {
    if n >= 8 && n.is_power_of_two() {
        Ok(())
    } else {
        Err(AfdError::InvalidGrid(n))
    }
}

/// Uniformly sampled complex values on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct CircularSignal {
    samples: Vec<Complex64>,
}

impl CircularSignal {
    pub fn new(samples: Vec<Complex64>) -> Result<Self, AfdError> {
        check_grid(samples.len())?;
        Ok(CircularSignal { samples })
    }

    pub fn from_real(values: &[f64]) -> Result<Self, AfdError> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Samples `f(t_j)`.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self, AfdError> {
        check_grid(n)?;
        Ok(CircularSignal { samples: grid(n).into_iter().map(f).collect() })
    }

    /// Samples a function of `z = e^{it}`.
    pub fn from_boundary_fn(n: usize, f: impl Fn(Complex64) -> Complex64) -> Result<Self, AfdError> {
        check_grid(n)?;
        Ok(CircularSignal { samples: unit_points(n).into_iter().map(f).collect() })
    }

    pub fn zeros(n: usize) -> Result<Self, AfdError> {
        Self::new(vec![ZERO; n])
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    /// `(1/N) Σ |s_j|²`.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() / self.len() as f64
    }

    pub fn norm(&self) -> f64 {
        self.energy().sqrt()
    }

    pub fn mean(&self) -> Complex64 {
        self.samples.iter().sum::<Complex64>() / self.len() as f64
    }

    /// Discrete inner product `(1/N) Σ s_j conj(o_j)`.
    pub fn inner(&self, other: &CircularSignal) -> Complex64 {
        assert_eq!(self.len(), other.len(), "grid mismatch");
        let acc: Complex64 = self.samples.iter().zip(&other.samples).map(|(a, b)| a * b.conj()).sum();
        acc / self.len() as f64
    }

    /// Largest `|Im s_j|`.
    pub fn max_imag(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, s| m.max(s.im.abs()))
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.re).collect()
    }

    /// Pointwise map over `(t_j, s_j)`.
    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> CircularSignal {
        let n = self.len();
        let samples = self
            .samples
            .iter()
            .enumerate()
            .map(|(j, &s)| f(2.0 * PI * j as f64 / n as f64, s))
            .collect();
        CircularSignal { samples }
    }

    pub fn zip_with(&self, other: &CircularSignal, f: impl Fn(Complex64, Complex64) -> Complex64) -> CircularSignal {
        assert_eq!(self.len(), other.len(), "grid mismatch");
        let samples = self.samples.iter().zip(&other.samples).map(|(&a, &b)| f(a, b)).collect();
        CircularSignal { samples }
    }

    /// `‖self - other‖` under the discrete norm.
    pub fn distance(&self, other: &CircularSignal) -> f64 {
        self.zip_with(other, |a, b| a - b).norm()
    }
}

/// Discrete Fourier coefficients `c_k`, `k = -N/2..N/2-1`, stored in FFT order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn from_fft_order(coeffs: Vec<Complex64>) -> Self {
        Spectrum { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `e^{ikt}`. Panics outside `-N/2..N/2`.
    pub fn get(&self, k: i64) -> Complex64 {
        self.coeffs[self.slot(k)]
    }

    pub fn set(&mut self, k: i64, value: Complex64) {
        let i = self.slot(k);
        self.coeffs[i] = value;
    }

    fn slot(&self, k: i64) -> usize {
        let n = self.coeffs.len() as i64;
        assert!(k >= -n / 2 && k < n / 2, "frequency {k} outside spectrum");
        k.rem_euclid(n) as usize
    }

    pub fn fft_order(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `(k, c_k)` pairs in FFT order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let n = self.coeffs.len();
        self.coeffs.iter().enumerate().map(move |(i, &c)| (fft::bin_frequency(i, n), c))
    }

    /// `Σ |c_k|²`.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Energy in the negative frequencies, the Nyquist bin included.
    pub fn negative_energy(&self) -> f64 {
        self.iter().filter(|(k, _)| *k < 0).map(|(_, c)| c.norm_sqr()).sum()
    }
}

/// `c_k = (1/N) Σ_j s_j e^{-ik t_j}`.
pub fn analyze(s: &CircularSignal) -> Spectrum {
    Spectrum { coeffs: fft::forward_normalized(&s.samples) }
}

/// Inverse of [`analyze`].
pub fn synthesize(spectrum: &Spectrum) -> CircularSignal {
    CircularSignal { samples: fft::inverse_unnormalized(&spectrum.coeffs) }
}

/// Circular Hilbert transform: multiplier `-i sgn(k)` with `sgn(0) = 0`.
///
/// The Nyquist bin `k = -N/2` aliases `±N/2` and is mapped to zero so real
/// input stays real.
pub fn hilbert_transform(s: &CircularSignal) -> CircularSignal {
    let mut spec = analyze(s);
    let n = spec.len();
    for (i, c) in spec.coeffs.iter_mut().enumerate() {
        let k = fft::bin_frequency(i, n);
        *c = if k > 0 {
            Complex64::new(c.im, -c.re)
        } else if k < 0 && k != -(n as i64) / 2 {
            Complex64::new(-c.im, c.re)
        } else {
            ZERO
        };
    }
    synthesize(&spec)
}

/// Analytic signal `s⁺ = ½(s + iHs + c_0)` of a real signal.
///
/// The result carries `c_0`, `c_k` for `1 <= k < N/2` and half of the
/// Nyquist coefficient at `z^{N/2}` (the transform maps that bin to zero), so
/// `s = 2 Re s⁺ - c_0` on the samples.
pub fn analytic_signal(s: &CircularSignal) -> Result<HardyFunction, AfdError> {
    analytic_signal_with(s, &Tolerances::default())
}

pub fn analytic_signal_with(s: &CircularSignal, tol: &Tolerances) -> Result<HardyFunction, AfdError> {
    let scale = s.samples.iter().fold(1.0f64, |m, v| m.max(v.norm()));
    let imag = s.max_imag();
    if imag > tol.real_input * scale {
        return Err(AfdError::NonRealInput(imag));
    }
    let spec = analyze(s);
    let n = s.len();
    let mut coeffs = spec.coeffs[..n / 2].to_vec();
    coeffs.push(spec.coeffs[n / 2] * 0.5);
    Ok(HardyFunction { coeffs })
}

/// True when `‖Hs + i(s - mean s)‖ / ‖s‖ < 1e-8`.
pub fn hardy_check(s: &CircularSignal) -> bool {
    hardy_check_with(s, Tolerances::default().hardy)
}

pub fn hardy_check_with(s: &CircularSignal, threshold: f64) -> bool {
    let norm = s.norm();
    if norm == 0.0 {
        return true;
    }
    let h = hilbert_transform(s);
    let mean = s.mean();
    let i = Complex64::new(0.0, 1.0);
    let gap = h.zip_with(s, |hv, sv| hv + i * (sv - mean)).norm();
    gap / norm < threshold
}

/// A Hardy-space function `Σ_{k=0}^{M} c_k z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct HardyFunction {
    coeffs: Vec<Complex64>,
}

impl HardyFunction {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "empty coefficient sequence");
        HardyFunction { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        HardyFunction { coeffs: vec![ZERO; order + 1] }
    }

    /// Default truncation order `N/2 - 1` for an `N`-point grid.
    pub fn default_order(n: usize) -> usize {
        n / 2 - 1
    }

    /// Keeps frequencies `0..N/2` of `s`; returns the discarded
    /// negative-frequency energy alongside.
    pub fn project(s: &CircularSignal) -> (HardyFunction, f64) {
        let spec = analyze(s);
        let n = s.len();
        let leak = spec.negative_energy();
        (HardyFunction { coeffs: spec.coeffs[..n / 2].to_vec() }, leak)
    }

    pub fn from_boundary(s: &CircularSignal) -> HardyFunction {
        Self::project(s).0
    }

    /// Samples `f` on the grid of size `2(M+1)` and projects.
    pub fn from_fn(order: usize, f: impl Fn(Complex64) -> Complex64) -> HardyFunction {
        let n = Self::grid_for(order);
        let s = CircularSignal { samples: unit_points(n).into_iter().map(f).collect() };
        let mut h = Self::from_boundary(&s);
        h.coeffs.truncate(order + 1);
        h
    }

    fn grid_for(order: usize) -> usize {
        (2 * (order + 1)).next_power_of_two().max(8)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Native grid size: the smallest power of two >= `2(M+1)`.
    pub fn grid_len(&self) -> usize {
        Self::grid_for(self.order())
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.energy().sqrt()
    }

    /// `Σ f_k conj(g_k)` over the shared range.
    pub fn inner(&self, other: &HardyFunction) -> Complex64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b.conj()).sum()
    }

    /// Horner evaluation of the series.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.coeffs, z)
    }

    /// `(f(z), f'(z))`.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = ZERO;
        let mut dp = ZERO;
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// Boundary samples on the native grid.
    pub fn boundary(&self) -> CircularSignal {
        self.boundary_on(self.grid_len())
    }

    /// Boundary samples on an `n`-point grid, `n > M`.
    pub fn boundary_on(&self, n: usize) -> CircularSignal {
        CircularSignal { samples: self.circle_values(1.0, n) }
    }

    /// `f(r e^{it_j})` for `j = 0..n`; exact for `n > M`.
    pub fn circle_values(&self, r: f64, n: usize) -> Vec<Complex64> {
        self.weighted_circle_values(r, n, |_| 1.0)
    }

    fn weighted_circle_values(&self, r: f64, n: usize, weight: impl Fn(usize) -> f64) -> Vec<Complex64> {
        assert!(n > self.order() && n.is_power_of_two(), "grid {n} too small for order {}", self.order());
        let mut buf = vec![ZERO; n];
        let mut rk = 1.0;
        for (k, &c) in self.coeffs.iter().enumerate() {
            buf[k] = c * (rk * weight(k));
            rk *= r;
        }
        fft::fft_in_place(&mut buf, fft::Direction::Inverse);
        buf
    }

    /// `z f'(z)` at `z = r e^{it_j}`.
    fn circle_log_derivative_numerator(&self, r: f64, n: usize) -> Vec<Complex64> {
        self.weighted_circle_values(r, n, |k| k as f64)
    }

    pub fn scale(&self, s: Complex64) -> HardyFunction {
        HardyFunction { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn sub(&self, other: &HardyFunction) -> HardyFunction {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| self.coeffs.get(k).copied().unwrap_or(ZERO) - other.coeffs.get(k).copied().unwrap_or(ZERO))
            .collect();
        HardyFunction { coeffs }
    }

    pub fn add(&self, other: &HardyFunction) -> HardyFunction {
        self.sub(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Subtracts a constant from the series.
    pub fn minus_constant(&self, c: Complex64) -> HardyFunction {
        let mut out = self.clone();
        out.coeffs[0] -= c;
        out
    }
}

pub(crate) fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
}

/// Continuous phase from wrapped values, starting at `raw[0]`.
pub(crate) fn unwrap_phase(raw: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(raw.len());
    let mut offset = 0.0;
    let mut prev = match raw.first() {
        Some(&p) => p,
        None => return out,
    };
    out.push(prev);
    for &p in &raw[1..] {
        let d = p - prev;
        if d > PI {
            offset -= 2.0 * PI;
        } else if d < -PI {
            offset += 2.0 * PI;
        }
        out.push(p + offset);
        prev = p;
    }
    out
}

/// Increments above this between adjacent samples mean the grid does not
/// resolve the phase.
const PHASE_STEP_LIMIT: f64 = 0.5 * PI;

fn check_radius(r: f64) -> Result<(), AfdError> {
    if r > 0.0 && r <= 1.0 {
        Ok(())
    } else {
        Err(AfdError::InvalidArgument("radius must lie in (0, 1]"))
    }
}

/// Amplitude `ρ_r(t_j) = |f(re^{it_j})|` and unwrapped phase `θ_r(t_j)` on
/// the native grid of `f`.
pub fn phase_amplitude(f: &HardyFunction, r: f64) -> Result<(Vec<f64>, Vec<f64>), AfdError> {
    phase_amplitude_on(f, r, f.grid_len())
}

pub fn phase_amplitude_on(f: &HardyFunction, r: f64, n: usize) -> Result<(Vec<f64>, Vec<f64>), AfdError> {
    check_radius(r)?;
    let values = f.circle_values(r, n);
    let min = values.iter().fold(f64::INFINITY, |m, v| m.min(v.norm()));
    if min <= MODULUS_FLOOR {
        return Err(AfdError::NearZeroModulus(min));
    }
    let rho: Vec<f64> = values.iter().map(|v| v.norm()).collect();
    let raw: Vec<f64> = values.iter().map(|v| v.arg()).collect();
    let theta = unwrap_phase(&raw);
    let worst = theta
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .chain(core::iter::once((theta[0] + 2.0 * PI * winding(&theta) - theta[n - 1]).abs()))
        .fold(0.0, f64::max);
    if worst > PHASE_STEP_LIMIT {
        return Err(AfdError::UnresolvedPhase(worst));
    }
    Ok((rho, theta))
}

/// Nearest integer winding implied by an unwrapped phase track.
fn winding(theta: &[f64]) -> f64 {
    let n = theta.len();
    let step = theta[n - 1] - theta[n - 2];
    ((theta[n - 1] + step - theta[0]) / (2.0 * PI)).round()
}

/// Phase derivative `Re{ z f'(z) / f(z) }` at `z = r e^{it_j}`.
pub fn phase_derivative(f: &HardyFunction, r: f64) -> Result<Vec<f64>, AfdError> {
    phase_derivative_on(f, r, f.grid_len())
}

pub fn phase_derivative_on(f: &HardyFunction, r: f64, n: usize) -> Result<Vec<f64>, AfdError> {
    check_radius(r)?;
    let values = f.circle_values(r, n);
    let min = values.iter().fold(f64::INFINITY, |m, v| m.min(v.norm()));
    if min <= MODULUS_FLOOR {
        return Err(AfdError::NearZeroModulus(min));
    }
    let numer = f.circle_log_derivative_numerator(r, n);
    Ok(numer.iter().zip(&values).map(|(zd, v)| (zd / v).re).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real_fn(n: usize, f: impl Fn(f64) -> f64) -> CircularSignal {
        CircularSignal::from_fn(n, |t| c(f(t), 0.0)).unwrap()
    }

    #[test]
    fn rejects_bad_grids() {
        assert_eq!(CircularSignal::zeros(4).unwrap_err(), AfdError::InvalidGrid(4));
        assert_eq!(CircularSignal::zeros(24).unwrap_err(), AfdError::InvalidGrid(24));
        assert!(CircularSignal::zeros(8).is_ok());
    }

    #[test]
    fn analyze_cosine() {
        let s = real_fn(64, |t| (3.0 * t).cos());
        let spec = analyze(&s);
        for (k, v) in spec.iter() {
            let want = if k.abs() == 3 { 0.5 } else { 0.0 };
            assert!((v - c(want, 0.0)).norm() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn analyze_constant() {
        let spec = analyze(&real_fn(64, |_| 1.0));
        assert!((spec.get(0) - c(1.0, 0.0)).norm() < 1e-15);
        assert!(spec.iter().filter(|(k, _)| *k != 0).all(|(_, v)| v.norm() < 1e-15));
    }

    #[test]
    fn parseval_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = CircularSignal::new((0..64).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
            .unwrap();
        // direct summation oracle
        let direct: f64 = s.samples().iter().map(|v| v.re * v.re + v.im * v.im).sum::<f64>() / 64.0;
        assert!((analyze(&s).energy() - direct).abs() < 1e-12 * direct.max(1.0));
        let back = synthesize(&analyze(&s));
        assert!(back.distance(&s) < 1e-12);
    }

    #[test]
    fn hilbert_of_cosine_is_sine() {
        for n in 1..10 {
            let h = hilbert_transform(&real_fn(64, |t| (n as f64 * t).cos()));
            let want = real_fn(64, |t| (n as f64 * t).sin());
            assert!(h.distance(&want) < 1e-13);
        }
    }

    #[test]
    fn hilbert_of_constant_vanishes() {
        assert!(hilbert_transform(&real_fn(32, |_| 2.5)).norm() < 1e-15);
    }

    #[test]
    fn hilbert_twice_removes_mean() {
        let s = real_fn(128, |t| 0.7 + (2.0 * t).sin() - 0.4 * (5.0 * t).cos());
        let hh = hilbert_transform(&hilbert_transform(&s));
        let mean = s.mean();
        let want = s.map(|_, v| -(v - mean));
        assert!(hh.distance(&want) < 1e-13);
    }

    #[test]
    fn analytic_signal_of_cosine() {
        let n = 64;
        let s = real_fn(n, |t| (4.0 * t).cos());
        let plus = analytic_signal(&s).unwrap();
        let b = plus.boundary_on(n);
        let want = CircularSignal::from_fn(n, |t| c(0.5 * (4.0 * t).cos(), 0.5 * (4.0 * t).sin())).unwrap();
        assert!(b.distance(&want) < 1e-14);
        let c0 = plus.coeffs()[0];
        let recovered = b.map(|_, v| c(2.0 * v.re - c0.re, 0.0));
        assert!(recovered.distance(&s) < 1e-14);
    }

    #[test]
    fn analytic_signal_of_one() {
        let plus = analytic_signal(&real_fn(16, |_| 1.0)).unwrap();
        assert!((plus.coeffs()[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(plus.coeffs()[1..].iter().all(|v| v.norm() < 1e-15));
    }

    #[test]
    fn analytic_signal_of_two_tones() {
        let n = 64;
        let plus = analytic_signal(&real_fn(n, |t| t.cos() + (2.0 * t).cos())).unwrap();
        let want = CircularSignal::from_boundary_fn(n, |z| (z + z * z) * 0.5).unwrap();
        assert!(plus.boundary_on(n).distance(&want) < 1e-14);
    }

    #[test]
    fn analytic_signal_rejects_complex() {
        let s = CircularSignal::from_fn(16, |t| c(t.cos(), 1e-3)).unwrap();
        assert!(matches!(analytic_signal(&s), Err(AfdError::NonRealInput(_))));
    }

    #[test]
    fn hardy_check_cases() {
        assert!(hardy_check(&CircularSignal::from_boundary_fn(64, |z| z.powi(5)).unwrap()));
        assert!(!hardy_check(&CircularSignal::from_boundary_fn(64, |z| z.powi(-3)).unwrap()));
        let geo = CircularSignal::from_boundary_fn(256, |z| c(1.0, 0.0) / (c(1.0, 0.0) - z * 0.4)).unwrap();
        assert!(hardy_check(&geo));
    }

    #[test]
    fn phase_amplitude_of_z() {
        let f = HardyFunction::new(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let (rho, theta) = phase_amplitude_on(&f, 0.9, 64).unwrap();
        for (j, (r, th)) in rho.iter().zip(&theta).enumerate() {
            assert!((r - 0.9).abs() < 1e-14);
            assert!((th - 2.0 * PI * j as f64 / 64.0).abs() < 1e-12);
        }
    }

    #[test]
    fn phase_amplitude_of_constant() {
        let k = c(-1.0, 1.0);
        let (rho, theta) = phase_amplitude_on(&HardyFunction::new(vec![k]), 0.5, 16).unwrap();
        assert!(rho.iter().all(|r| (r - k.norm()).abs() < 1e-15));
        assert!(theta.iter().all(|t| (t - k.arg()).abs() < 1e-15));
    }

    #[test]
    fn mobius_phase_winds_once() {
        let a = 0.5;
        let f = HardyFunction::from_fn(511, |z| (z - a) / (c(1.0, 0.0) - z * a));
        let (_, theta) = phase_amplitude_on(&f, 0.99, 1024).unwrap();
        let n = theta.len();
        let total = theta[n - 1] - theta[0] + (theta[n - 1] - theta[n - 2]);
        assert!((total - 2.0 * PI).abs() < 0.05, "total {total}");
    }

    #[test]
    fn phase_amplitude_rejects_zero() {
        let f = HardyFunction::new(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(phase_amplitude_on(&f, 1e-14, 16), Err(AfdError::NearZeroModulus(_))));
        let g = HardyFunction::new(vec![c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(phase_derivative_on(&g, 1.0, 16), Err(AfdError::NearZeroModulus(_))));
    }

    #[test]
    fn phase_amplitude_detects_underresolved_grid() {
        let mut coeffs = vec![c(0.0, 0.0); 8];
        coeffs[3] = c(1.0, 0.0);
        assert!(matches!(phase_amplitude_on(&HardyFunction::new(coeffs), 1.0, 8), Err(AfdError::UnresolvedPhase(_))));
    }

    #[test]
    fn phase_derivative_of_monomial() {
        for n in 0..6 {
            let mut coeffs = vec![c(0.0, 0.0); n + 1];
            coeffs[n] = c(1.0, 0.0);
            let f = HardyFunction::new(coeffs);
            for r in [0.3, 0.8, 1.0] {
                let d = phase_derivative_on(&f, r, 32).unwrap();
                assert!(d.iter().all(|v| (v - n as f64).abs() < 1e-12));
            }
        }
    }

    #[test]
    fn phase_derivative_tends_to_poisson() {
        let a = c(0.3, -0.4);
        let f = HardyFunction::from_fn(1023, |z| (z - a) / (c(1.0, 0.0) - a.conj() * z));
        let n = 2048;
        let pts = unit_points(n);
        let mut prev = f64::INFINITY;
        for m in [4, 6, 8, 10, 12] {
            let r = 1.0 - 2f64.powi(-m);
            let d = phase_derivative_on(&f, r, n).unwrap();
            let err = d
                .iter()
                .zip(&pts)
                .map(|(v, z)| (v - (1.0 - a.norm_sqr()) / (z - a).norm_sqr()).abs())
                .fold(0.0, f64::max);
            assert!(err < prev);
            prev = err;
        }
        assert!(prev < 2e-3, "limit error {prev}");
    }

    #[test]
    fn phase_derivative_is_additive() {
        let f = HardyFunction::new(vec![c(2.0, 0.0), c(0.5, 0.3)]);
        let g = HardyFunction::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(-0.4, 0.1)]);
        let fg = HardyFunction::new(vec![
            c(2.0, 0.0),
            c(0.5, 0.3),
            c(-0.8, 0.2),
            c(0.5, 0.3) * c(-0.4, 0.1),
        ]);
        for r in [0.5, 0.9, 1.0] {
            let a = phase_derivative_on(&f, r, 32).unwrap();
            let b = phase_derivative_on(&g, r, 32).unwrap();
            let ab = phase_derivative_on(&fg, r, 32).unwrap();
            for j in 0..32 {
                assert!((a[j] + b[j] - ab[j]).abs() < 1e-12);
            }
        }
    }
}
