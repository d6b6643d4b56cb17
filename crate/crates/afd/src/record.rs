//! Versioned JSON result records.

use std::path::Path;

use afd_core::{Basis, Complex64, Component, ComponentKind, Decomposition, DiscParam};
use serde::{Deserialize, Serialize};

use crate::config::{Algorithm, RunConfig};
use crate::error::CliError;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        ComplexValue { re: z.re, im: z.im }
    }
}

impl From<ComplexValue> for Complex64 {
    fn from(z: ComplexValue) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Core,
    Unwinding,
    Poafd,
}

impl From<ComponentKind> for Kind {
    fn from(k: ComponentKind) -> Self {
        match k {
            ComponentKind::Core => Kind::Core,
            ComponentKind::Unwinding => Kind::Unwinding,
            ComponentKind::Poafd => Kind::Poafd,
        }
    }
}

impl From<Kind> for ComponentKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Core => ComponentKind::Core,
            Kind::Unwinding => ComponentKind::Unwinding,
            Kind::Poafd => ComponentKind::Poafd,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComponentRecord {
    /// `None` for terms of the pure unwinding recursion.
    pub a: Option<ComplexValue>,
    pub c: ComplexValue,
    pub kind: Kind,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub decompose_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub schema: u32,
    pub algorithm: Algorithm,
    pub config: RunConfig,
    /// Order `M` of the decomposed series.
    pub order: usize,
    pub source_energy: f64,
    pub components: Vec<ComponentRecord>,
    /// Energy left after `k` terms; entry 0 is the source energy.
    pub residual_energy: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective_trace: Option<Vec<f64>>,
    #[serde(default)]
    pub diagnostics: Vec<String>,
    pub timings: Timings,
}

impl ResultRecord {
    pub fn from_decomposition(algorithm: Algorithm, config: &RunConfig, order: usize, d: &Decomposition) -> Self {
        ResultRecord {
            schema: SCHEMA,
            algorithm,
            config: config.clone(),
            order,
            source_energy: d.source_energy,
            components: d
                .components
                .iter()
                .map(|c| ComponentRecord { a: Some(c.a.value().into()), c: c.c.into(), kind: c.kind.into() })
                .collect(),
            residual_energy: d.residual_energy.clone(),
            objective_trace: None,
            diagnostics: d.diagnostics.iter().map(|x| format!("{x:?}")).collect(),
            timings: Timings::default(),
        }
    }

    /// Copy with timings zeroed, for determinism comparisons.
    pub fn without_timings(&self) -> Self {
        ResultRecord { timings: Timings::default(), ..self.clone() }
    }

    pub fn final_residual(&self) -> f64 {
        *self.residual_energy.last().unwrap_or(&self.source_energy)
    }

    /// `|‖f‖² - Σ|c_k|² - residual| / ‖f‖²`.
    pub fn energy_gap(&self) -> f64 {
        let captured: f64 = self.components.iter().map(|c| Complex64::from(c.c).norm_sqr()).sum();
        (self.source_energy - captured - self.final_residual()).abs() / self.source_energy
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Parse(msg));
        if self.schema != SCHEMA {
            return bad(format!("unsupported schema {} (expected {SCHEMA})", self.schema));
        }
        if self.residual_energy.len() != self.components.len() + 1 {
            return bad(format!(
                "residual trace has {} entries for {} components",
                self.residual_energy.len(),
                self.components.len()
            ));
        }
        if self.residual_energy.windows(2).any(|w| w[1] > w[0]) {
            return bad("residual trace increases".into());
        }
        if self.residual_energy.first() != Some(&self.source_energy) {
            return bad("residual trace must start at the source energy".into());
        }
        for c in &self.components {
            if let Some(a) = c.a {
                DiscParam::new(a.into())?;
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records hold only finite numbers and strings")
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let r: ResultRecord = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        r.validate()?;
        Ok(r)
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_json() + "\n").map_err(|e| CliError::io(path.display().to_string(), e))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))?;
        Self::from_json(&text)
    }

    /// The decomposition the record describes. Unwinding expansions carry
    /// inner factors that are not stored, so they cannot be rebuilt.
    pub fn to_decomposition(&self) -> Result<Decomposition, CliError> {
        let basis = match self.algorithm {
            Algorithm::Core | Algorithm::Cyclic => Basis::Takenaka,
            Algorithm::Poafd => Basis::Kernel(self.config.space.kernel_space(self.order)),
            Algorithm::Uwa | Algorithm::Uwafd => {
                return Err(CliError::Unsupported(format!(
                    "{} records store no inner factors; time-frequency export needs core, cyclic or poafd",
                    self.algorithm.name()
                )))
            }
        };
        let components = self
            .components
            .iter()
            .map(|c| {
                let a = c.a.ok_or_else(|| CliError::Parse("component without parameter".into()))?;
                Ok(Component { a: DiscParam::new(a.into())?, c: c.c.into(), kind: c.kind.into() })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(Decomposition {
            components,
            residual_energy: self.residual_energy.clone(),
            source_energy: self.source_energy,
            basis,
            diagnostics: Vec::new(),
        })
    }
}
