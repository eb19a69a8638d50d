use serde::{Deserialize, Serialize};

/// Geometric and numeric tolerances shared by every operation on a surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Minimum distance between a surface point (or a path) and a branch position.
    pub branch: f64,
    /// Distance below which a point counts as lying on a slit ray.
    pub slit: f64,
    /// Agreement tolerance for distances.
    pub dist: f64,
    /// Relative residual accepted from the polynomial root finder.
    pub root: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            branch: 1e-9,
            slit: 1e-9,
            dist: 1e-9,
            root: 1e-12,
        }
    }
}
