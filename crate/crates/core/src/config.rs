//! Tolerance constants shared by every pipeline.
//!
//! All thresholds live in one record so a single scale knob (`--tol` on the
//! command line) can loosen or tighten them uniformly.

use serde::{Deserialize, Serialize};

/// Unit roundoff for `f64`.
pub const MACHINE_EPS: f64 = f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative threshold below which a singular value is treated as zero
    /// when the rank is not known in advance (diagnostics only).
    pub rank_rel: f64,
    /// A kernel of prescribed dimension is rejected when the smallest
    /// singular value that must be nonzero falls below this relative level.
    pub rank_deficiency_rel: f64,
    /// A kernel of prescribed dimension is rejected when the largest
    /// singular value that must vanish exceeds this relative level.
    pub excess_rank_rel: f64,
    /// Relative size below which a triangular diagonal entry counts as zero.
    pub singular_pivot_rel: f64,
    /// Threshold on `|u^H v|` for unit eigenvectors below which an eigenvalue
    /// is flagged as numerically defective.
    pub eigvec_overlap_min: f64,
}

impl Tolerances {
    /// Multiplies every threshold by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            rank_rel: self.rank_rel * factor,
            rank_deficiency_rel: self.rank_deficiency_rel * factor,
            excess_rank_rel: self.excess_rank_rel * factor,
            singular_pivot_rel: self.singular_pivot_rel * factor,
            eigvec_overlap_min: self.eigvec_overlap_min * factor,
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank_rel: 1e-8,
            rank_deficiency_rel: 100.0 * MACHINE_EPS,
            excess_rank_rel: 1e-6,
            singular_pivot_rel: MACHINE_EPS,
            eigvec_overlap_min: 10.0 * MACHINE_EPS,
        }
    }
}
