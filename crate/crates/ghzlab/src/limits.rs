use ghzlab_core::lhv::MAX_SEARCH_POINTS;
use ghzlab_core::observables::MAX_AMPLITUDES;

use crate::error::AppError;

pub const MAX_SPACE_VAR: &str = "GHZLAB_MAX_SPACE";

/// Size caps for the LHV search and for state vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_search_points: u128,
    pub max_amplitudes: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_search_points: MAX_SEARCH_POINTS,
            max_amplitudes: MAX_AMPLITUDES,
        }
    }
}

impl Limits {
    /// Applies `cap` to both limits; it can only lower the built-in defaults.
    pub fn capped(cap: u128) -> Self {
        let d = Limits::default();
        Limits {
            max_search_points: d.max_search_points.min(cap),
            max_amplitudes: d.max_amplitudes.min(cap),
        }
    }

    pub fn from_env() -> Result<Self, AppError> {
        match std::env::var(MAX_SPACE_VAR) {
            Ok(raw) => Self::parse(&raw),
            Err(std::env::VarError::NotPresent) => Ok(Limits::default()),
            Err(e) => Err(AppError::Param(format!("{MAX_SPACE_VAR}: {e}"))),
        }
    }

    pub fn parse(raw: &str) -> Result<Self, AppError> {
        let raw = raw.trim().replace('_', "");
        let cap = match raw.parse::<u128>() {
            Ok(v) => v,
            // allow 1e6-style values
            Err(_) => match raw.parse::<f64>() {
                Ok(v) if v.is_finite() && v >= 0.0 && v.fract() == 0.0 => v as u128,
                _ => {
                    return Err(AppError::Param(format!(
                        "{MAX_SPACE_VAR} must be a non-negative integer, got {raw:?}"
                    )))
                }
            },
        };
        Ok(Limits::capped(cap))
    }

    pub fn check_amplitudes(&self, d: usize, n: usize) -> Result<(), AppError> {
        let size = (d as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if size > self.max_amplitudes {
            return Err(AppError::Param(format!(
                "state dimension {d}^{n} exceeds the amplitude cap {}",
                self.max_amplitudes
            )));
        }
        Ok(())
    }
}
