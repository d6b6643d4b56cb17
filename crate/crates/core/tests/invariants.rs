use afd_core::afd::{greedy_params, szego_coefficient};
use afd_core::atoms::tm_values;
use afd_core::poafd::OrthoSystem;
use afd_core::signal::unit_points;
use afd_core::*;
use proptest::prelude::*;

fn complex_vec(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b)), len)
}

fn disc_point(rmax: f64) -> impl Strategy<Value = DiscParam> {
    (0.0..rmax, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| DiscParam::clamped(Complex64::from_polar(r, t)))
}

fn poly(coeffs: Vec<Complex64>, order: usize) -> HardyFunction {
    let mut c = coeffs;
    c.resize(order + 1, Complex64::new(0.0, 0.0));
    HardyFunction::new(c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn parseval_and_round_trip(samples in complex_vec(64)) {
        let s = CircularSignal::new(samples).unwrap();
        let spec = analyze(&s);
        prop_assert!((spec.energy() - s.energy()).abs() <= 1e-12 * s.energy().max(1e-300));
        prop_assert!(synthesize(&spec).distance(&s) <= 1e-12 * s.norm().max(1e-300));
    }

    #[test]
    fn analytic_signal_inverts(values in proptest::collection::vec(-1.0f64..1.0, 128)) {
        let s = CircularSignal::from_real(&values).unwrap();
        let plus = analytic_signal(&s).unwrap();
        let c0 = plus.coeffs()[0].re;
        let b = plus.boundary_on(128);
        for (v, p) in values.iter().zip(b.samples()) {
            prop_assert!((2.0 * p.re - c0 - v).abs() < 1e-10);
        }
    }

    #[test]
    fn double_hilbert_removes_mean(samples in complex_vec(64)) {
        let s = CircularSignal::new(samples).unwrap();
        let hh = hilbert_transform(&hilbert_transform(&s));
        // Nyquist is annihilated by the multiplier as well.
        let mut spec = analyze(&s);
        spec.set(0, Complex64::new(0.0, 0.0));
        spec.set(-32, Complex64::new(0.0, 0.0));
        let target = synthesize(&spec);
        prop_assert!(hh.zip_with(&target, |a, b| a + b).norm() < 1e-12);
    }

    #[test]
    fn energy_chain_for_any_parameters(coeffs in complex_vec(10), params in proptest::collection::vec(disc_point(0.9), 1..6)) {
        let f = poly(coeffs, 63);
        prop_assume!(f.norm() > 1e-3);
        let d = afd::sift_with_params(&f, &params).unwrap();
        prop_assert!(d.energy_gap() < 1e-8);
        prop_assert!(d.residual_energy.windows(2).all(|w| w[1] <= w[0] + 1e-15 * d.source_energy));
    }

    #[test]
    fn remainder_is_orthogonal_to_used_terms(coeffs in complex_vec(12), params in proptest::collection::vec(disc_point(0.8), 1..5)) {
        let f = poly(coeffs, 127);
        prop_assume!(f.norm() > 1e-3);
        let d = afd::sift_with_params(&f, &params).unwrap();
        let n = 512;
        let recon = reconstruct(&d, n).unwrap();
        let g = f.boundary_on(n).zip_with(&recon, |a, b| a - b);
        let pts = unit_points(n);
        for k in 0..params.len() {
            let ip: Complex64 = g.samples().iter().zip(&pts).map(|(g, &z)| g * tm_values(&params, z)[k].conj()).sum::<Complex64>() / n as f64;
            prop_assert!(ip.norm() < 1e-8 * f.norm());
        }
    }

    #[test]
    fn tm_gram_identity(params in proptest::collection::vec(disc_point(0.9), 1..7), repeat in any::<bool>()) {
        let mut params = params;
        if repeat {
            params.push(params[0]);
        }
        let n = 2048;
        let pts = unit_points(n);
        let values: Vec<Vec<Complex64>> = pts.iter().map(|&z| tm_values(&params, z)).collect();
        for j in 0..params.len() {
            for k in 0..params.len() {
                let g: Complex64 = values.iter().map(|v| v[j] * v[k].conj()).sum::<Complex64>() / n as f64;
                let target = if j == k { 1.0 } else { 0.0 };
                prop_assert!((g - target).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn cyclic_objective_is_order_free(coeffs in complex_vec(8), params in proptest::collection::vec(disc_point(0.85), 2..5)) {
        let f = poly(coeffs, 63);
        let a = n_blaschke_objective(&f, &NTuple::new(params.clone()).unwrap());
        let mut rev = params.clone();
        rev.reverse();
        let b = n_blaschke_objective(&f, &NTuple::new(rev).unwrap());
        prop_assert!((a - b).abs() < 1e-10 * f.energy().max(1.0));
        prop_assert!(a >= 0.0);
    }

    #[test]
    fn kernels_reproduce(coeffs in complex_vec(40), a in disc_point(0.95)) {
        for space in [KernelSpace::hardy(127), KernelSpace::bergman(127)] {
            let f = poly(coeffs.clone(), 127);
            let k = poafd::kernel(&space, a, 1);
            prop_assert!((space.inner(f.coeffs(), &k.coeffs) - f.eval(a.value())).norm() < 1e-8);
        }
    }

    #[test]
    fn uncertainty_bounds_are_ordered(width in 0.7f64..2.0, w1 in 0.0f64..5.0, w2 in 0.0f64..5.0, x in -1.0f64..1.0) {
        let s = LineSignal::from_fn(24.0, 2048, |t| (-t * t / (2.0 * width * width)).exp() * ((w1 * t).cos() + x * (w2 * t * t / 4.0).sin())).unwrap();
        prop_assume!(s.values.iter().any(|v| v.abs() > 1e-3));
        let r = uncertainty_report(&s).unwrap();
        prop_assert!(r.extra_bound >= r.cohen_bound - 1e-9);
        prop_assert!(r.chain_holds(1e-6), "{:?}", r);
    }

    #[test]
    fn outer_polynomials_factor_cleanly(roots in proptest::collection::vec((1.3f64..3.0, 0.0f64..std::f64::consts::TAU), 1..4), m in 0u32..4) {
        let f = CircularSignal::from_boundary_fn(512, |z| {
            roots.iter().fold(z.powu(m), |acc, &(r, t)| acc * (z - Complex64::from_polar(r, t)))
        }).unwrap();
        let fac = factorize(&f).unwrap();
        prop_assert!(fac.unimodularity_error() < 1e-6);
        prop_assert!(fac.consistency_error(&f) < 1e-6);
    }
}

#[test]
fn maximal_selection_dominates_random_probes() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    let f = HardyFunction::from_fn(255, |z| {
        let one = Complex64::new(1.0, 0.0);
        one / (one - z * Complex64::new(0.3, 0.6)) + z * z * 0.4 - one / (Complex64::new(1.4, -0.2) - z)
    });
    let a = maximal_selection(&f, &SearchConfig::default()).unwrap();
    let best = objective(&f, a);
    for _ in 0..1000 {
        let probe = DiscParam::clamped(Complex64::from_polar(rng.gen_range(0.0f64..1.0).sqrt() * 0.99, rng.gen_range(0.0..6.3)));
        assert!(best >= objective(&f, probe) - 1e-10);
    }
    assert!((szego_coefficient(&f, a).norm_sqr() - best).abs() < 1e-12);
}

#[test]
fn poafd_selection_dominates_random_probes() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let space = KernelSpace::bergman(255);
    let mut f = poafd::kernel(&space, DiscParam::from_parts(0.4, 0.3).unwrap(), 1).coeffs;
    let second = poafd::kernel(&space, DiscParam::from_parts(-0.6, 0.1).unwrap(), 1).coeffs;
    for (x, y) in f.iter_mut().zip(&second) {
        *x += y * 0.7;
    }
    let mut system = OrthoSystem::empty(space);
    system.extend(DiscParam::from_parts(0.4, 0.3).unwrap(), &Tolerances::default()).unwrap();
    let g = system.residual(&f);
    let a = poafd_select(&space, &f, &system, &SearchConfig::kernel_space()).unwrap();
    let value = |p: DiscParam| {
        let mut s = system.clone();
        match s.extend(p, &Tolerances::default()) {
            Ok(b) => space.inner(&g, b).norm_sqr(),
            Err(_) => 0.0,
        }
    };
    let best = value(a);
    for _ in 0..1000 {
        let probe = DiscParam::clamped(Complex64::from_polar(rng.gen_range(0.0f64..1.0).sqrt() * 0.95, rng.gen_range(0.0..6.3)));
        assert!(best >= value(probe) - 1e-9 * best);
    }
}

#[test]
fn cyclic_beats_or_ties_greedy() {
    let f = HardyFunction::from_fn(255, |z| {
        let one = Complex64::new(1.0, 0.0);
        one / (one - z * 0.7) + one / (one + z * Complex64::new(0.2, 0.5)) * 0.5
    });
    for n in 1..=3 {
        let search = SearchConfig::default();
        let init = NTuple::new(greedy_params(&f, n, &search).unwrap()).unwrap();
        let greedy = afd::core_afd_decompose(&f, &afd::StopRule { max_terms: n, energy_tol: 0.0 }, &search).unwrap().final_residual();
        let trace = cyclic_afd(&f, &init, &CyclicStop::default(), &search);
        assert!(trace.is_monotone());
        assert!(trace.final_objective() <= greedy + 1e-9 * f.energy());
    }
}
