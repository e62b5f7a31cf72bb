use crate::{Error, Result};
use serde::Serialize;

/// Problem parameters: complex dimension `n >= 2` and lower order `rho > 0`.
///
/// The main pipeline (zero isolation, deficiency, `K_n`) additionally
/// requires `rho > 1`; operations that need it call
/// [`ProblemParams::require_rho_above_one`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProblemParams {
    n: u32,
    rho: f64,
}

impl ProblemParams {
    pub fn new(n: u32, rho: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!("n must be >= 2, got {n}")));
        }
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::InvalidParams(format!(
                "rho must be a finite positive real, got {rho}"
            )));
        }
        Ok(Self { n, rho })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn n_usize(&self) -> usize {
        self.n as usize
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Guard for operations only defined for lower order `rho > 1`.
    pub fn require_rho_above_one(&self) -> Result<()> {
        if self.rho > 1.0 {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "operation requires rho > 1, got rho = {}",
                self.rho
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_n_and_bad_rho() {
        assert!(ProblemParams::new(1, 2.0).is_err());
        assert!(ProblemParams::new(2, 0.0).is_err());
        assert!(ProblemParams::new(2, -1.0).is_err());
        assert!(ProblemParams::new(2, f64::NAN).is_err());
        assert!(ProblemParams::new(2, 2.0).is_ok());
    }

    #[test]
    fn rho_guard() {
        let p = ProblemParams::new(2, 0.8).unwrap();
        assert!(p.require_rho_above_one().is_err());
        let p = ProblemParams::new(2, 1.5).unwrap();
        assert!(p.require_rho_above_one().is_ok());
    }
}
