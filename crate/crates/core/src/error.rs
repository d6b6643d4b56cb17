use thiserror::Error;

/// Failure modes of the decomposition routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AfdError {
    #[error("grid size {0} must be a power of two and at least 8")]
    InvalidGrid(usize),
    #[error("signal has non-negligible imaginary content (max |Im| = {0:e})")]
    NonRealInput(f64),
    #[error("modulus {0:e} too close to zero; phase undefined")]
    NearZeroModulus(f64),
    #[error("phase increment {0:.3} rad between samples exceeds resolution limit")]
    UnresolvedPhase(f64),
    #[error("disc parameter {re} + {im}i must satisfy |a| <= 1 - 1e-9")]
    OutsideDisc { re: f64, im: f64 },
    #[error("residual energy vanished")]
    ZeroResidual,
    #[error("boundary modulus below floor on {fraction:.2} of samples")]
    DegenerateModulus { fraction: f64 },
    #[error("Gram system nearly dependent (normalized determinant {0:e})")]
    DegenerateGram(f64),
    #[error("signal not supported inside the grid (tail energy fraction {0:e})")]
    TailEnergy(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}
