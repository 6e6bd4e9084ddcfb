//! Spacelike-separation audit for the two stations.
//!
//! This is a geometric check, not a simulation: a light-speed message sent at
//! any moment of the answer window arrives too late exactly when the window is
//! shorter than the light travel time between the stations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Geometry {
    pub distance_light_minutes: f64,
    pub answer_window_minutes: f64,
}

impl Default for Geometry {
    fn default() -> Self {
        Self { distance_light_minutes: 30.0, answer_window_minutes: 5.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IsolationAudit {
    pub isolated: bool,
    /// Light travel time minus the answer window, in light-minutes.
    pub margin_light_minutes: f64,
}

pub fn causality_audit(geometry: &Geometry) -> Result<IsolationAudit> {
    let Geometry { distance_light_minutes: distance, answer_window_minutes: window } = *geometry;
    if !(distance > 0.0 && window > 0.0) || !distance.is_finite() || !window.is_finite() {
        return Err(Error::Geometry { distance, window });
    }
    Ok(IsolationAudit { isolated: window < distance, margin_light_minutes: distance - window })
}
