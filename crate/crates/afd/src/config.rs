use afd_core::{KernelSpace, SearchConfig, StopRule};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Core,
    Uwa,
    Uwafd,
    Cyclic,
    Poafd,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Core => "core",
            Algorithm::Uwa => "uwa",
            Algorithm::Uwafd => "uwafd",
            Algorithm::Cyclic => "cyclic",
            Algorithm::Poafd => "poafd",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Hardy,
    Bergman,
}

impl Space {
    pub fn kernel_space(self, order: usize) -> KernelSpace {
        match self {
            Space::Hardy => KernelSpace::hardy(order),
            Space::Bergman => KernelSpace::bergman(order),
        }
    }
}

/// Starting tuple for cyclic runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum InitMode {
    /// First `n` Core-AFD selections.
    Auto,
    /// All parameters at the origin.
    Origin,
    /// Seeded uniform draws from the disc of radius 0.9.
    Random,
}

/// Everything that determines the output of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub grid_len: usize,
    pub search_angles: usize,
    pub search_radii: usize,
    pub refine_tol: f64,
    pub max_terms: usize,
    pub energy_tol: f64,
    pub algorithm: Algorithm,
    pub space: Space,
    /// Tuple size for cyclic runs.
    pub tuple_size: usize,
    pub init: InitMode,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let search = SearchConfig::default();
        let stop = StopRule::default();
        RunConfig {
            grid_len: 1024,
            search_angles: search.angles,
            search_radii: search.radii,
            refine_tol: search.refine_tol,
            max_terms: stop.max_terms,
            energy_tol: stop.energy_tol,
            algorithm: Algorithm::Core,
            space: Space::Hardy,
            tuple_size: 2,
            init: InitMode::Auto,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.grid_len < 8 || !self.grid_len.is_power_of_two() {
            return bad(format!("grid size {} must be a power of two and at least 8", self.grid_len));
        }
        if !(self.refine_tol > 0.0 && self.refine_tol.is_finite()) {
            return bad(format!("refinement tolerance {} must be positive", self.refine_tol));
        }
        if !(self.energy_tol > 0.0 && self.energy_tol.is_finite()) {
            return bad(format!("energy tolerance {} must be positive", self.energy_tol));
        }
        if self.search_angles == 0 || self.search_radii < 2 {
            return bad("search grid needs at least 1 angle and 2 radii".into());
        }
        if self.max_terms == 0 {
            return bad("term budget must be positive".into());
        }
        if self.algorithm == Algorithm::Cyclic && self.tuple_size == 0 {
            return bad("cyclic tuple size must be positive".into());
        }
        Ok(())
    }

    pub fn search(&self) -> SearchConfig {
        let base = match self.algorithm {
            Algorithm::Poafd => SearchConfig::kernel_space(),
            _ => SearchConfig::default(),
        };
        SearchConfig { angles: self.search_angles, radii: self.search_radii, refine_tol: self.refine_tol, ..base }
    }

    pub fn stop(&self) -> StopRule {
        StopRule { max_terms: self.max_terms, energy_tol: self.energy_tol }
    }
}

/// Parses `AxR`, e.g. `64x32`.
pub fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected AxB, got {s:?}"))?;
    let a = a.trim().parse::<usize>().map_err(|e| format!("{a:?}: {e}"))?;
    let b = b.trim().parse::<usize>().map_err(|e| format!("{b:?}: {e}"))?;
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_bad_grids_and_tolerances() {
        for cfg in [
            RunConfig { grid_len: 1000, ..Default::default() },
            RunConfig { grid_len: 4, ..Default::default() },
            RunConfig { energy_tol: 0.0, ..Default::default() },
            RunConfig { refine_tol: -1.0, ..Default::default() },
            RunConfig { refine_tol: f64::NAN, ..Default::default() },
        ] {
            assert!(matches!(cfg.validate(), Err(CliError::Config(_))), "{cfg:?}");
        }
    }

    #[test]
    fn pairs() {
        assert_eq!(parse_pair("64x32"), Ok((64, 32)));
        assert_eq!(parse_pair("8X4"), Ok((8, 4)));
        assert!(parse_pair("64").is_err());
        assert!(parse_pair("ax3").is_err());
    }

    #[test]
    fn poafd_search_keeps_kernel_cap() {
        let cfg = RunConfig { algorithm: Algorithm::Poafd, ..Default::default() };
        assert_eq!(cfg.search().max_radius, 0.95);
    }
}
