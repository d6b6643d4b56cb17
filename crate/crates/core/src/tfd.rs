//! Dirac-type time-frequency atoms of decompositions and the extra-strong
//! uncertainty bound for real-line signals.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::afd::{Basis, Decomposition};
use crate::atoms::{tm_eval, tm_phase_derivative, DiscParam};
use crate::error::AfdError;
use crate::fft::{self, Direction};
use crate::poafd::gram_schmidt;
use crate::signal::{grid, phase_derivative_on, unit_points, HardyFunction};

/// One emitted triple of `P(t, ω) = Σ_k ρ_k²(t) δ(ω - θ'_k(t))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TfdAtom {
    pub t: f64,
    pub omega: f64,
    pub weight: f64,
}

/// Atoms `(t_j, θ'_k(t_j), |c_k B_k(e^{it_j})|²)` for every component `k`
/// on an `n`-point grid.
///
/// TM components use the closed-form phase derivative of the Möbius and
/// Szegő factors. Kernel-space components are evaluated from their series.
pub fn dirac_tfd(d: &Decomposition, n: usize) -> Result<Vec<Vec<TfdAtom>>, AfdError> {
    if !(n >= 8 && n.is_power_of_two()) {
        return Err(AfdError::InvalidGrid(n));
    }
    let params: Vec<DiscParam> = d.params();
    let t = grid(n);
    match d.basis {
        Basis::Takenaka => {
            let z = unit_points(n);
            Ok(d.components
                .iter()
                .enumerate()
                .map(|(k, comp)| {
                    let w = comp.c.norm_sqr();
                    t.iter()
                        .zip(&z)
                        .map(|(&t, &z)| TfdAtom {
                            t,
                            omega: tm_phase_derivative(&params, k + 1, t),
                            weight: w * tm_eval(&params, k + 1, z).norm_sqr(),
                        })
                        .collect()
                })
                .collect())
        }
        Basis::Kernel(space) => {
            if n <= space.order {
                return Err(AfdError::InvalidGrid(n));
            }
            let system = gram_schmidt(&space, &params.iter().copied().collect())?;
            d.components
                .iter()
                .zip(system.vectors())
                .map(|(comp, b)| {
                    let h = HardyFunction::new(b.clone());
                    let values = h.circle_values(1.0, n);
                    let omega = phase_derivative_on(&h, 1.0, n)?;
                    let w = comp.c.norm_sqr();
                    Ok(t.iter()
                        .zip(omega)
                        .zip(values)
                        .map(|((&t, omega), v)| TfdAtom { t, omega, weight: w * v.norm_sqr() })
                        .collect())
                })
                .collect()
        }
    }
}

/// Real samples on the uniform grid `t_j = start + j·step`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineSignal {
    pub start: f64,
    pub step: f64,
    pub values: Vec<f64>,
}

impl LineSignal {
    pub fn new(start: f64, step: f64, values: Vec<f64>) -> Result<Self, AfdError> {
        if !(values.len() >= 8 && values.len().is_power_of_two()) {
            return Err(AfdError::InvalidGrid(values.len()));
        }
        if !(step > 0.0 && step.is_finite() && start.is_finite()) {
            return Err(AfdError::InvalidArgument("line grid needs a finite positive step"));
        }
        Ok(LineSignal { start, step, values })
    }

    /// `n` samples of `f` on `[-half_width, half_width)`.
    pub fn from_fn(half_width: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self, AfdError> {
        let step = 2.0 * half_width / n as f64;
        let values = (0..n).map(|j| f(-half_width + j as f64 * step)).collect();
        Self::new(-half_width, step, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.start + j as f64 * self.step).collect()
    }

    /// Fraction of energy in the outer 5% of the grid on each side.
    pub fn tail_fraction(&self) -> f64 {
        let n = self.len();
        let edge = (n / 20).max(1);
        let total: f64 = self.values.iter().map(|v| v * v).sum();
        if total == 0.0 {
            return 0.0;
        }
        let tail: f64 = self.values[..edge].iter().chain(&self.values[n - edge..]).map(|v| v * v).sum();
        tail / total
    }
}

/// Moments of a real-line signal and the two lower bounds for
/// `σ_t² σ_ω²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyReport {
    pub sigma_t2: f64,
    pub sigma_w2: f64,
    pub mean_t: f64,
    pub mean_w: f64,
    /// `¼ + (∫|t - ⟨t⟩||φ' - ⟨ω⟩||A|² dt)²`.
    pub extra_bound: f64,
    /// `¼ + (∫(t - ⟨t⟩)(φ' - ⟨ω⟩)|A|² dt)²`.
    pub cohen_bound: f64,
}

impl UncertaintyReport {
    pub fn product(&self) -> f64 {
        self.sigma_t2 * self.sigma_w2
    }

    /// `σ_t²σ_ω² >= extra >= cohen >= ¼`, each up to `slack`.
    pub fn chain_holds(&self, slack: f64) -> bool {
        self.product() >= self.extra_bound - slack
            && self.extra_bound >= self.cohen_bound - slack
            && self.cohen_bound >= 0.25 - slack
    }
}

/// Generous tail-energy limit for [`uncertainty_report`].
const TAIL_LIMIT: f64 = 1e-6;

/// Time and frequency spreads of the analytic signal `A` of `s`, with
/// `φ' = Im(A'/A)` from spectral differentiation. All moments are taken
/// against the normalized density `|A|²`.
pub fn uncertainty_report(s: &LineSignal) -> Result<UncertaintyReport, AfdError> {
    let tail = s.tail_fraction();
    if tail > TAIL_LIMIT {
        return Err(AfdError::TailEnergy(tail));
    }
    let n = s.len();
    let mut spec: Vec<Complex64> = s.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft::fft_in_place(&mut spec, Direction::Forward);
    let omega: Vec<f64> = (0..n).map(|i| 2.0 * PI * fft::bin_frequency(i, n) as f64 / (n as f64 * s.step)).collect();
    for (i, c) in spec.iter_mut().enumerate() {
        let k = fft::bin_frequency(i, n);
        if k > 0 {
            *c *= 2.0;
        } else if k < 0 {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    let spectral_weight: f64 = spec.iter().map(|c| c.norm_sqr()).sum();
    if spectral_weight == 0.0 {
        return Err(AfdError::ZeroResidual);
    }
    let mean_w = spec.iter().zip(&omega).map(|(c, w)| w * c.norm_sqr()).sum::<f64>() / spectral_weight;
    let sigma_w2 = spec.iter().zip(&omega).map(|(c, w)| (w - mean_w).powi(2) * c.norm_sqr()).sum::<f64>() / spectral_weight;

    let mut deriv: Vec<Complex64> = spec.iter().zip(&omega).map(|(c, &w)| c * Complex64::new(0.0, w)).collect();
    let mut a = spec;
    fft::fft_in_place(&mut a, Direction::Inverse);
    fft::fft_in_place(&mut deriv, Direction::Inverse);
    // The common 1/N factor cancels in every normalized moment.
    let density: Vec<f64> = a.iter().map(|v| v.norm_sqr()).collect();
    let weight: f64 = density.iter().sum();
    let t = s.times();
    let mean_t = t.iter().zip(&density).map(|(t, d)| t * d).sum::<f64>() / weight;
    let sigma_t2 = t.iter().zip(&density).map(|(t, d)| (t - mean_t).powi(2) * d).sum::<f64>() / weight;
    // (φ' - ⟨ω⟩)|A|² without dividing by |A|.
    let mut signed = 0.0;
    let mut absolute = 0.0;
    for j in 0..n {
        let flow = (deriv[j] * a[j].conj()).im - mean_w * density[j];
        let dt = t[j] - mean_t;
        signed += dt * flow;
        absolute += dt.abs() * flow.abs();
    }
    let signed = signed / weight;
    let absolute = absolute / weight;
    Ok(UncertaintyReport {
        sigma_t2,
        sigma_w2,
        mean_t,
        mean_w,
        extra_bound: 0.25 + absolute * absolute,
        cohen_bound: 0.25 + signed * signed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::afd::{core_afd_decompose, sift_with_params, Component, ComponentKind, StopRule};
    use crate::atoms::blaschke_phase_derivative;
    use crate::search::SearchConfig;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn single(params: &[DiscParam], c: Complex64) -> Decomposition {
        Decomposition {
            components: params.iter().map(|&a| Component { a, c, kind: ComponentKind::Core }).collect(),
            residual_energy: alloc::vec![1.0; params.len() + 1],
            source_energy: 1.0,
            basis: Basis::Takenaka,
            diagnostics: Vec::new(),
        }
    }

    #[test]
    fn constant_component() {
        let d = single(&[DiscParam::ORIGIN], Complex64::new(0.0, 2.0));
        let atoms = dirac_tfd(&d, 32).unwrap();
        assert!(atoms[0].iter().all(|a| a.omega == 0.0 && (a.weight - 4.0).abs() < 1e-14));
    }

    #[test]
    fn second_origin_component_is_z() {
        let d = single(&[DiscParam::ORIGIN, DiscParam::ORIGIN], Complex64::new(1.0, 0.0));
        let atoms = dirac_tfd(&d, 32).unwrap();
        assert!(atoms[1].iter().all(|a| a.omega == 1.0));
    }

    #[test]
    fn blaschke_part_matches_poisson_sum() {
        let params: Vec<DiscParam> = [(0.5, 0.1), (-0.2, 0.7), (0.0, -0.4)]
            .iter()
            .map(|&(x, y)| DiscParam::from_parts(x, y).unwrap())
            .collect();
        let d = single(&params, Complex64::new(1.0, 0.0));
        let atoms = dirac_tfd(&d, 256).unwrap();
        let t = grid(256);
        let blaschke = blaschke_phase_derivative(&params[..2], &t);
        for (j, atom) in atoms[2].iter().enumerate() {
            let szego = 0.5 * (crate::atoms::poisson(params[2], t[j]) - 1.0);
            assert!((atom.omega - szego - blaschke[j]).abs() < 1e-8);
        }
    }

    #[test]
    fn fourier_case_gives_integer_lines() {
        let f = HardyFunction::new((0..32).map(|k| Complex64::new(1.0 / (k as f64 + 1.0), 0.0)).collect());
        let d = sift_with_params(&f, &[DiscParam::ORIGIN; 6]).unwrap();
        let atoms = dirac_tfd(&d, 64).unwrap();
        for (k, line) in atoms.iter().enumerate() {
            assert!(line.iter().all(|a| a.omega == k as f64));
        }
    }

    #[test]
    fn slice_weights_average_to_captured_energy() {
        let f = HardyFunction::from_fn(255, |z| Complex64::new(1.0, 0.0) / (Complex64::new(1.5, 0.0) - z * z));
        let d = core_afd_decompose(&f, &StopRule::terms(4), &SearchConfig::default()).unwrap();
        let atoms = dirac_tfd(&d, 1024).unwrap();
        let total: f64 = atoms.iter().flatten().map(|a| a.weight).sum::<f64>() / 1024.0;
        let captured: f64 = d.components.iter().map(|c| c.c.norm_sqr()).sum();
        assert!((total - captured).abs() < 1e-8);
    }

    #[test]
    fn modulated_gaussian_is_near_minimal() {
        let s = LineSignal::from_fn(20.0, 2048, |t| (-t * t / 2.0).exp() * (8.0 * t).cos()).unwrap();
        let r = uncertainty_report(&s).unwrap();
        assert!((r.product() / 0.25 - 1.0).abs() < 0.02, "{r:?}");
        assert!(r.extra_bound - 0.25 < 1e-6);
        assert!(r.chain_holds(1e-6));
    }

    #[test]
    fn chirp_separates_the_bounds() {
        let s = LineSignal::from_fn(20.0, 4096, |t| (-t * t / 2.0).exp() * (t * t).cos()).unwrap();
        let r = uncertainty_report(&s).unwrap();
        assert!(r.extra_bound > r.cohen_bound + 1e-3, "{r:?}");
        assert!(r.chain_holds(1e-6));
    }

    #[test]
    fn random_band_limited_signals_obey_the_chain() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let freqs: Vec<(f64, f64, f64)> =
                (0..4).map(|_| (rng.gen_range(0.0..6.0), rng.gen_range(-1.0..1.0), rng.gen_range(0.0..6.3))).collect();
            let width = rng.gen_range(0.8..2.0);
            let s = LineSignal::from_fn(24.0, 2048, |t| {
                let env = (-t * t / (2.0 * width * width)).exp();
                env * freqs.iter().map(|(w, a, ph)| a * (w * t + ph).cos()).sum::<f64>()
            })
            .unwrap();
            let r = uncertainty_report(&s).unwrap();
            assert!(r.chain_holds(1e-6), "{r:?}");
        }
    }

    #[test]
    fn wide_signal_fails_support_check() {
        let s = LineSignal::from_fn(5.0, 256, |t| (-t * t / 50.0).exp()).unwrap();
        assert!(matches!(uncertainty_report(&s), Err(AfdError::TailEnergy(_))));
    }
}
