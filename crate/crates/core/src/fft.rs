//! Radix-2 fast Fourier transform on power-of-two lengths.
//!
//! Forward transform uses the kernel `e^{-2πi jk/N}` and applies no scaling;
//! callers normalize.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// In-place transform. Panics if `buf.len()` is not a power of two.
pub fn fft_in_place(buf: &mut [Complex64], direction: Direction) {
    let n = buf.len();
    assert!(n.is_power_of_two(), "fft length {n} is not a power of two");
    if n <= 1 {
        return;
    }
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            buf.swap(i, j);
        }
    }
    let sign = match direction {
        Direction::Forward => -1.0,
        Direction::Inverse => 1.0,
    };
    // Twiddles for the largest stage; smaller stages stride through them.
    let twiddles: Vec<Complex64> = (0..n / 2)
        .map(|k| {
            let theta = 2.0 * PI * (k as f64) / (n as f64);
            Complex64::new(theta.cos(), sign * theta.sin())
        })
        .collect();
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let w = twiddles[k * stride];
                let u = buf[start + k];
                let v = buf[start + k + half] * w;
                buf[start + k] = u + v;
                buf[start + k + half] = u - v;
            }
        }
        len <<= 1;
    }
}

/// Forward transform scaled by `1/N`: returns discrete Fourier coefficients
/// in FFT order (`0, 1, …, N/2-1, -N/2, …, -1`).
pub fn forward_normalized(samples: &[Complex64]) -> Vec<Complex64> {
    let mut buf = samples.to_vec();
    fft_in_place(&mut buf, Direction::Forward);
    let scale = 1.0 / samples.len() as f64;
    for c in &mut buf {
        *c *= scale;
    }
    buf
}

/// Inverse of [`forward_normalized`]: sums `c_k e^{ikt_j}` without scaling.
pub fn inverse_unnormalized(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut buf = coeffs.to_vec();
    fft_in_place(&mut buf, Direction::Inverse);
    buf
}

/// Signed frequency of FFT bin `idx` for length `n`.
#[inline]
pub fn bin_frequency(idx: usize, n: usize) -> i64 {
    if idx < n / 2 {
        idx as i64
    } else {
        idx as i64 - n as i64
    }
}
