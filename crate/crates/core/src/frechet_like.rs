//! Frechet-Like distance between rooted trees.
//!
//! Two walkers descend the trees from the roots; the correspondence records
//! which points are visited together, and the distance is the shortest rope
//! that lets them cover both trees. The Euclidean variant measures ropes in
//! the plane, the merge variant measures height differences.
//!
//! Correspondences are finite sets of pairs of grid vertices (see
//! [`grid_points`]); consecutive matched pairs are understood to match the
//! segments between them.

mod brute;
mod check;
mod decide;
mod grid;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::json;

pub use check::CheckReport;
pub use crate::report::Violation;

use crate::error::{Error, Result};
use crate::report::{DistanceReport, Metric};
use crate::tree::{EmbeddedTree, MergeTree, PointRef};
use decide::{Decider, Pair};
use grid::{Grid, PointKey};

/// Largest number of pairwise different child branches a grid vertex may
/// have before the branch-plan search refuses the input.
pub const MAX_BRANCHES: usize = 8;

/// Default per-tree grid size accepted by [`brute_force_fl`].
pub const BRUTE_FORCE_GRID_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Euclidean,
    Merge,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FLQuery {
    pub variant: Variant,
    pub eps: f64,
    /// Sampling step along edges; only used by the Euclidean variant.
    pub resolution: f64,
    /// Merge variant: shift both roots to height 0. Euclidean variant:
    /// translate the second tree so that the roots coincide.
    pub align_roots: bool,
}

impl FLQuery {
    pub fn merge(eps: f64) -> Self {
        FLQuery {
            variant: Variant::Merge,
            eps,
            resolution: 1.0,
            align_roots: true,
        }
    }

    pub fn euclidean(eps: f64, resolution: f64) -> Self {
        FLQuery {
            variant: Variant::Euclidean,
            eps,
            resolution,
            align_roots: false,
        }
    }

    pub fn with_eps(self, eps: f64) -> Self {
        FLQuery { eps, ..self }
    }

    pub fn with_align_roots(self, align_roots: bool) -> Self {
        FLQuery { align_roots, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.eps.is_nan() || self.eps < 0.0 {
            return Err(Error::InvalidParameter(format!("eps must be non-negative, got {}", self.eps)));
        }
        if !(self.resolution > 0.0 && self.resolution.is_finite()) {
            return Err(Error::InvalidParameter(format!("resolution must be positive, got {}", self.resolution)));
        }
        Ok(())
    }
}

/// The two inputs, which also fix the variant.
#[derive(Debug, Clone, Copy)]
pub enum TreePair<'a> {
    Merge(&'a MergeTree, &'a MergeTree),
    Euclidean(&'a EmbeddedTree, &'a EmbeddedTree),
}

impl TreePair<'_> {
    pub fn variant(&self) -> Variant {
        match self {
            TreePair::Merge(..) => Variant::Merge,
            TreePair::Euclidean(..) => Variant::Euclidean,
        }
    }

}

/// A finite relation between grid points of the two trees; serializes as
/// a list of `[p, q]` pairs.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Correspondence {
    pub pairs: Vec<(PointRef, PointRef)>,
}

impl Correspondence {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub accepted: bool,
    pub witness: Option<Correspondence>,
}

fn prepare(trees: TreePair, q: &FLQuery) -> Result<Pair> {
    q.validate()?;
    if trees.variant() != q.variant {
        return Err(Error::InvalidParameter(format!("query asks for the {:?} variant but the trees do not match it", q.variant)));
    }
    let pair = match trees {
        TreePair::Merge(a, b) => {
            let (a, b) = if q.align_roots {
                (a.shifted(-a.root_height()), b.shifted(-b.root_height()))
            } else {
                (a.clone(), b.clone())
            };
            let mut levels = Grid::critical_heights(&a);
            levels.extend(Grid::critical_heights(&b));
            Pair {
                g1: Grid::merge(&a, &levels),
                g2: Grid::merge(&b, &levels),
                euclidean: false,
            }
        }
        TreePair::Euclidean(a, b) => {
            let b = if q.align_roots {
                let (ra, rb) = (a.position(a.tree().root()), b.position(b.tree().root()));
                b.translated([ra[0] - rb[0], ra[1] - rb[1]])
            } else {
                b.clone()
            };
            Pair {
                g1: Grid::embedded(a, q.resolution),
                g2: Grid::embedded(&b, q.resolution),
                euclidean: true,
            }
        }
    };
    for g in [&pair.g1, &pair.g2] {
        let branches = g.max_distinct_children();
        if branches > MAX_BRANCHES {
            return Err(Error::DegreeExceeded {
                degree: branches,
                bound: MAX_BRANCHES,
            });
        }
    }
    Ok(pair)
}

/// Grid points of both trees on which correspondences live.
pub fn grid_points(trees: TreePair, q: &FLQuery) -> Result<(Vec<PointRef>, Vec<PointRef>)> {
    let p = prepare(trees, q)?;
    Ok((p.g1.point, p.g2.point))
}

fn to_refs(p: &Pair, set: &BTreeSet<(usize, usize)>) -> Correspondence {
    Correspondence {
        pairs: set.iter().map(|&(x, y)| (p.g1.point[x], p.g2.point[y])).collect(),
    }
}

fn lca_closure(p: &Pair, set: &mut BTreeSet<(usize, usize)>) {
    loop {
        let pairs: Vec<_> = set.iter().copied().collect();
        let mut added = false;
        for (i, &(x1, y1)) in pairs.iter().enumerate() {
            for &(x2, y2) in &pairs[i + 1..] {
                added |= set.insert((p.g1.lca(x1, x2), p.g2.lca(y1, y2)));
            }
        }
        if !added {
            return;
        }
    }
}

/// Checks a correspondence against the four conditions and the cost bound.
/// Every point of the relation must be a grid point.
pub fn check_correspondence(trees: TreePair, r: &Correspondence, q: &FLQuery) -> Result<CheckReport> {
    let p = prepare(trees, q)?;
    let (i1, i2) = (p.g1.index(), p.g2.index());
    let mut set = BTreeSet::new();
    for (a, b) in &r.pairs {
        let x = *i1.get(&PointKey::of(a)).ok_or_else(|| Error::GridMismatch(format!("{a:?} is not a grid point of the first tree")))?;
        let y = *i2.get(&PointKey::of(b)).ok_or_else(|| Error::GridMismatch(format!("{b:?} is not a grid point of the second tree")))?;
        set.insert((x, y));
    }
    Ok(check::check_pairs(&p, &set, q.eps))
}

fn decide_pair(p: &Pair, eps: f64, with_witness: bool) -> Decision {
    let mut d = Decider::new(p, eps);
    if !with_witness {
        return Decision {
            accepted: d.accepts(),
            witness: None,
        };
    }
    match d.witness() {
        Some(mut set) => {
            lca_closure(p, &mut set);
            Decision {
                accepted: true,
                witness: Some(to_refs(p, &set)),
            }
        }
        None => Decision {
            accepted: false,
            witness: None,
        },
    }
}

/// Decides whether a correspondence of cost at most `q.eps` exists and
/// returns one when it does.
pub fn decide_fl(trees: TreePair, q: &FLQuery) -> Result<Decision> {
    let p = prepare(trees, q)?;
    Ok(decide_pair(&p, q.eps, true))
}

/// Smallest candidate eps accepted by [`decide_fl`]. Candidates are all
/// pair costs between grid points. `q.eps` is ignored.
pub fn fl_distance(trees: TreePair, q: &FLQuery) -> Result<DistanceReport> {
    let q = q.with_eps(0.0);
    let p = prepare(trees, &q)?;
    let cands = p.candidates();
    // the largest candidate always admits the full product minus leaf
    // issues, so search the whole list and fall back to its end
    let (mut lo, mut hi) = (0usize, cands.len() - 1);
    if !decide_pair(&p, cands[hi], false).accepted {
        return Err(Error::Structure("no correspondence exists at any candidate cost".into()));
    }
    while lo < hi {
        let mid = (lo + hi) / 2;
        if decide_pair(&p, cands[mid], false).accepted {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let value = cands[lo];
    let witness = decide_pair(&p, value, true).witness.expect("accepted value has a witness");
    let metric = match q.variant {
        Variant::Merge => Metric::FlMerge,
        Variant::Euclidean => Metric::FlEuclid,
    };
    Ok(DistanceReport::new(metric, value)
        .with_witness(serde_json::to_value(&witness).expect("correspondence serializes"))
        .with_params(json!({
            "variant": q.variant,
            "resolution": q.resolution,
            "align_roots": q.align_roots,
            "grid": [p.g1.len(), p.g2.len()],
        })))
}

/// Grid cap for [`brute_force_fl`], overridable through `TREEMETRICS_MAX_GRID`.
pub fn brute_force_cap() -> usize {
    std::env::var("TREEMETRICS_MAX_GRID")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(BRUTE_FORCE_GRID_CAP)
}

/// Exact minimum over all subsets of the grid product that satisfy the
/// conditions, found by exhaustive search. `q.eps` is ignored.
pub fn brute_force_fl(trees: TreePair, q: &FLQuery) -> Result<f64> {
    let q = q.with_eps(0.0);
    let p = prepare(trees, &q)?;
    let cap = brute_force_cap();
    let size = p.g1.len().max(p.g2.len());
    if size > cap {
        return Err(Error::GridTooLarge { size, cap });
    }
    p.candidates()
        .into_iter()
        .find(|&eps| brute::satisfiable(&p, eps))
        .ok_or_else(|| Error::Structure("no correspondence exists at any candidate cost".into()))
}
