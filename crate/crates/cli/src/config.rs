use std::path::Path;

use ecsusy_core::shifted_ho::GridSpec;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Operator identities on the guard block: commutators, intertwining, ladder actions.
    pub commutator: f64,
    /// Casimir value and form.
    pub casimir: f64,
    pub biorthonormality: f64,
    /// Float residual of each action-table cell.
    pub table: f64,
    /// Partial sums of the resolution of the identity.
    pub quasi_basis: f64,
    /// Grid pairings computed by trapezoid quadrature.
    pub quadrature: f64,
    /// Finite-difference ladder actions and grid-to-matrix coordinates.
    pub grid_ladder: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            commutator: 1e-10,
            casimir: 1e-11,
            biorthonormality: 1e-10,
            table: 1e-10,
            quasi_basis: 1e-9,
            quadrature: 1e-8,
            grid_ladder: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn uniform(value: f64) -> Self {
        Self {
            commutator: value,
            casimir: value,
            biorthonormality: value,
            table: value,
            quasi_basis: value,
            quadrature: value,
            grid_ladder: value,
        }
    }

    fn entries(&self) -> [(&'static str, f64); 7] {
        [
            ("commutator", self.commutator),
            ("casimir", self.casimir),
            ("biorthonormality", self.biorthonormality),
            ("table", self.table),
            ("quasi_basis", self.quasi_basis),
            ("quadrature", self.quadrature),
            ("grid_ladder", self.grid_ladder),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub half_width: f64,
    pub points: usize,
    /// Largest index of the sampled `phi_n`, `psi_n`.
    pub n_max: usize,
    /// Largest member of the tilted grid families (Fock index `2 m_max + 1`).
    pub m_max: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            half_width: 12.0,
            points: 2001,
            n_max: 10,
            m_max: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Truncation dimension `N`.
    pub dim: usize,
    pub m_max: usize,
    pub alpha: f64,
    pub sigma: f64,
    pub tau: f64,
    /// Seed for every random map and test vector.
    pub seed: u64,
    /// Seeded random deformations checked by the commutator suite.
    pub deformations: usize,
    pub tolerances: Tolerances,
    pub grid: GridConfig,
    /// `None` runs every suite of the command.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suites: Option<Vec<String>>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dim: 64,
            m_max: 14,
            alpha: 0.5,
            sigma: 0.3,
            tau: 0.1,
            seed: 7,
            deformations: 5,
            tolerances: Tolerances::default(),
            grid: GridConfig::default(),
            suites: None,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn grid_spec(&self) -> Result<GridSpec, CliError> {
        Ok(GridSpec::new(self.grid.half_width, self.grid.points)?)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.dim < 4 * self.m_max + 8 {
            return bad(format!(
                "N = {} is too small for m_max = {}: need N >= 4 m_max + 8 = {}",
                self.dim,
                self.m_max,
                4 * self.m_max + 8
            ));
        }
        for (name, value) in self.tolerances.entries() {
            if !(value.is_finite() && value > 0.0) {
                return bad(format!("tolerance {name} must be positive, got {value}"));
            }
        }
        for (name, value) in [
            ("alpha", self.alpha),
            ("sigma", self.sigma),
            ("tau", self.tau),
        ] {
            if !value.is_finite() {
                return bad(format!("{name} must be finite"));
            }
        }
        if self.deformations == 0 {
            return bad("at least one random deformation is required".into());
        }
        if let Some(s) = &self.suites {
            if s.is_empty() {
                return bad("suite selection is empty".into());
            }
        }
        let spec = self.grid_spec()?;
        if self.grid.points < 5 {
            return bad("the grid needs at least five points for the difference stencil".into());
        }
        if self.grid.n_max == 0 {
            return bad("grid n_max must be at least 1".into());
        }
        if !spec.resolves(self.grid.n_max, self.alpha) {
            return bad(format!(
                "grid (L = {}, M = {}) does not resolve n_max = {} at alpha = {}",
                self.grid.half_width, self.grid.points, self.grid.n_max, self.alpha
            ));
        }
        let top = 2 * self.grid.m_max + 1;
        for shift in [self.alpha + self.sigma, self.alpha + self.tau] {
            if !spec.resolves(top, shift) {
                return bad(format!(
                    "grid (L = {}, M = {}) does not resolve the tilted families up to index {top} at shift {shift}",
                    self.grid.half_width, self.grid.points
                ));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn round_trips_through_toml() {
        let mut c = RunConfig {
            suites: Some(vec!["fock".into()]),
            ..RunConfig::default()
        };
        c.tolerances.table = 1e-12;
        assert_eq!(RunConfig::from_toml(&c.to_toml()).unwrap(), c);
    }

    #[test]
    fn partial_files_fill_defaults() {
        let c = RunConfig::from_toml("dim = 80\n[grid]\npoints = 3001\n").unwrap();
        assert_eq!(c.dim, 80);
        assert_eq!(c.grid.points, 3001);
        assert_eq!(c.grid.half_width, 12.0);
        assert_eq!(c.m_max, 14);
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(RunConfig::from_toml("dimension = 3").is_err());
    }

    #[test]
    fn invariants() {
        let small = RunConfig {
            dim: 3,
            m_max: 2,
            ..RunConfig::default()
        };
        let err = small.validate().unwrap_err().to_string();
        assert!(err.contains("4 m_max + 8"), "{err}");

        let mut c = RunConfig::default();
        c.tolerances.casimir = 0.0;
        assert!(c.validate().is_err());

        let c = RunConfig {
            suites: Some(Vec::new()),
            ..RunConfig::default()
        };
        assert!(c.validate().is_err());

        let mut c = RunConfig::default();
        c.grid.points = 101;
        assert!(c.validate().is_err());
    }
}
