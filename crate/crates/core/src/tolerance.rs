//! Numerical thresholds shared across modules.

/// Two disc parameters closer than this count as the same point.
pub const COINCIDENCE: f64 = 1e-9;
/// Parameters must satisfy `|a| <= 1 - BOUNDARY_MARGIN`.
pub const BOUNDARY_MARGIN: f64 = 1e-9;
/// Below this modulus a phase is considered undefined.
pub const MODULUS_FLOOR: f64 = 1e-12;
/// Energy below which a residual counts as zero (absolute).
pub const ZERO_ENERGY: f64 = 1e-24;
/// Objective values within this relative gap are ties during grid search.
pub const TIE: f64 = 1e-12;

/// Per-operation tolerances. Defaults follow the documented contract of each
/// operation; callers may tighten or relax them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Allowed imaginary content when a real signal is expected.
    pub real_input: f64,
    /// Relative threshold for `hardy_check`.
    pub hardy: f64,
    /// Phase derivative below `-negative_phase` counts as negative.
    pub negative_phase: f64,
    /// Fraction of leaked negative-frequency energy that raises a diagnostic.
    pub leakage: f64,
    /// Log-modulus floor relative to `max |f|` for outer factors.
    pub log_floor: f64,
    /// Maximum fraction of samples allowed below the log floor.
    pub floor_fraction: f64,
    /// Normalized Gram determinant below which kernels are dependent.
    pub gram_determinant: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            real_input: 1e-12,
            hardy: 1e-8,
            negative_phase: 1e-6,
            leakage: 1e-9,
            log_floor: 1e-8,
            floor_fraction: 0.01,
            gram_determinant: 1e-12,
        }
    }
}
