use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical constants in simulation units. The defaults are natural units,
/// `c = eps0 = hbar = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalConstants {
    pub c: f64,
    pub eps0: f64,
    pub hbar: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            c: 1.0,
            eps0: 1.0,
            hbar: 1.0,
        }
    }
}

impl PhysicalConstants {
    pub fn new(c: f64, eps0: f64, hbar: f64) -> Result<Self> {
        let consts = Self { c, eps0, hbar };
        consts.validate()?;
        Ok(consts)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("c", self.c), ("eps0", self.eps0), ("hbar", self.hbar)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!(
                    "constant `{name}` must be finite and > 0, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Vacuum permeability, `1 / (eps0 c^2)`.
    pub fn mu0(&self) -> f64 {
        1.0 / (self.eps0 * self.c * self.c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_units_by_default() {
        let k = PhysicalConstants::default();
        assert_eq!((k.c, k.eps0, k.hbar), (1.0, 1.0, 1.0));
        assert_eq!(k.mu0(), 1.0);
    }

    #[test]
    fn rejects_non_positive() {
        assert!(PhysicalConstants::new(0.0, 1.0, 1.0).is_err());
        assert!(PhysicalConstants::new(1.0, -2.0, 1.0).is_err());
        assert!(PhysicalConstants::new(1.0, 1.0, f64::NAN).is_err());
        let k = PhysicalConstants::new(2.0, 0.5, 1.0).unwrap();
        assert!((k.mu0() - 0.5).abs() < 1e-15);
    }
}
