//! Distances between rooted trees and merge trees.
//!
//! The crate computes the Frechet-Like distance between trees (a Euclidean
//! variant on trees drawn in the plane and a height variant on merge trees),
//! the interleaving distance between merge trees, and the classic baselines:
//! ordered tree edit distance, tree alignment distance, sampled Hausdorff
//! distance and the discrete Frechet distance of curves. It also builds the
//! partition gadgets that separate small and large Frechet-Like values.

pub mod classic;
pub mod error;
pub mod frechet_like;
pub mod generate;
pub mod hardness;
pub mod interleaving;
pub mod io;
pub mod report;
pub mod tree;

pub use error::{Error, Result};
pub use frechet_like::{Correspondence, FLQuery, TreePair, Variant};
pub use io::{parse_labeled, parse_tree, ParsedTree, TreeFormat};
pub use report::{DistanceReport, Metric};
pub use tree::{augment, EmbeddedTree, MergeTree, NodeId, PointRef, RootedTree};
