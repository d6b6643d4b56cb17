//! Adaptive Fourier decomposition (AFD) on the unit disc.
//!
//! Signals live on a uniform grid of the unit circle. Hardy-space functions
//! are carried as truncated non-negative-frequency coefficient sequences and
//! decomposed into Takenaka-Malmquist terms whose boundary phases have
//! non-negative derivatives. Variants:
//!
//! - [`afd`]: one-by-one maximal selection with generalized backward shifts.
//! - [`unwinding`]: inner/outer factorization, both the pure recursion and
//!   the factorization interleaved with maximal sifting.
//! - [`cyclic`]: n-best Blaschke-form approximation by cyclic coordinate
//!   optimization of the pole tuple.
//! - [`poafd`]: pre-orthogonal AFD in weighted reproducing-kernel spaces
//!   (Hardy and Bergman instances) with derivative kernels for repeats.
//!
//! [`tfd`] turns decompositions into Dirac-type time-frequency atoms and
//! evaluates the extra-strong uncertainty bound.
//!
//! The crate is `no_std` and needs only `alloc`. The `rayon` feature enables
//! parallel grid evaluation and parallel cyclic restarts.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(feature = "rayon")]
extern crate std;

pub mod afd;
pub mod atoms;
pub mod cyclic;
mod error;
pub mod fft;
pub mod poafd;
pub mod search;
pub mod signal;
pub mod tfd;
pub mod tolerance;
pub mod unwinding;

pub use num_complex::Complex64;

pub use afd::{
    core_afd_decompose, maximal_selection, objective, reconstruct, sift, sift_with_params,
    Component, ComponentKind, Decomposition, Diagnostic, Basis, StopRule,
};
pub use atoms::{
    bedrosian_check, blaschke_phase_derivative, mobius, monocomp_check, szego_kernel, tm_eval,
    DiscParam, MonoReport, ParamList,
};
pub use cyclic::{cmp_check, coordinate_optimize, cyclic_afd, n_blaschke_objective, CyclicStop, CyclicTrace, NTuple};
pub use error::AfdError;
pub use poafd::{
    gram_schmidt, kernel, multiplicity_limit_check, poafd_decompose, poafd_select, KernelSpace,
    MultiplicityKernel, OrthoSystem, SpaceKind,
};
pub use search::SearchConfig;
pub use signal::{
    analytic_signal, analyze, hardy_check, hilbert_transform, phase_amplitude, phase_derivative,
    synthesize, CircularSignal, HardyFunction, Spectrum,
};
pub use tfd::{dirac_tfd, uncertainty_report, LineSignal, TfdAtom, UncertaintyReport};
pub use tolerance::Tolerances;
pub use unwinding::{
    factorize, inner_factor, outer_factor, uwa_decompose, uwafd_decompose, Factorization,
    UnwindingDecomposition, UnwindingTerm,
};
