//! Baseline tree distances: ordered edit distance, alignment distance,
//! Hausdorff distance of drawn trees and the Frechet distance of curves.

mod alignment;
mod edit;
mod geometry;

use serde::{Deserialize, Serialize};

pub use alignment::{aligned_cost, alignment_distance, AlignedNode, DEFAULT_DEGREE_BOUND};
pub use edit::{edit_distance, script_cost, EditOp};
pub use geometry::{curve_frechet, discrete_frechet, hausdorff_distance, point_segment_distance};

use crate::error::{Error, Result};
use crate::tree::RootedTree;

/// Unit costs of the three edit operations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EditCosts {
    pub relabel: f64,
    pub insert: f64,
    pub delete: f64,
}

impl Default for EditCosts {
    fn default() -> Self {
        EditCosts {
            relabel: 1.0,
            insert: 1.0,
            delete: 1.0,
        }
    }
}

impl EditCosts {
    pub fn new(relabel: f64, insert: f64, delete: f64) -> Result<Self> {
        let c = EditCosts {
            relabel,
            insert,
            delete,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("relabel", self.relabel), ("insert", self.insert), ("delete", self.delete)] {
            if v.is_nan() || v < 0.0 || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} cost must be a finite non-negative number, got {v}")));
            }
        }
        Ok(())
    }

    pub(crate) fn rename(&self, t1: &RootedTree, a: usize, t2: &RootedTree, b: usize) -> f64 {
        if t1.label(a).unwrap_or("") == t2.label(b).unwrap_or("") {
            0.0
        } else {
            self.relabel
        }
    }
}
