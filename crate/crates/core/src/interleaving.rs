//! Interleaving distance between merge trees.
//!
//! A δ-good map sends every point of the first tree to a point δ higher in
//! the second tree. Continuity and the height shift force the image of any
//! point to be the ancestor of the image of a leaf below it, so a good map
//! is determined by the images of the leaves. The decision procedure
//! searches those images directly; the conditions reduce to pairwise tests
//! on leaves and a coverage test on the leaves of the second tree.
//!
//! Witnesses and the checkers work on the vertex set of the first tree
//! subdivided at every node height of both trees and at those heights
//! shifted by ±δ.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::report::{DistanceReport, Metric, Violation};
use crate::tree::{augment, MergeTree, NodeId, PointRef, Pos, EPS};

/// A shift between the two trees.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Delta(f64);

impl Delta {
    pub fn new(value: f64) -> Result<Self> {
        if value >= 0.0 && value.is_finite() {
            Ok(Delta(value))
        } else {
            Err(Error::InvalidParameter(format!("delta must be a non-negative number, got {value}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapEntry {
    pub from: PointRef,
    pub to: PointRef,
}

/// A map given by its values on the grid points of the source tree.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MapAssignment {
    pub entries: Vec<MapEntry>,
}

/// How the round-trip conditions of a compatible pair are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reading {
    /// Every round trip lands at the 2δ-ancestor of its start.
    #[default]
    Standard,
    /// Round trips from any two points of equal height agree and land at
    /// the 2δ-ancestor of the first.
    AsPrinted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapCheck {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoodMap {
    pub exists: bool,
    pub witness: Option<MapAssignment>,
}

fn same(t: &MergeTree, a: Pos, b: Pos) -> bool {
    (a.height - b.height).abs() <= EPS && t.pos_ge(a, b) && t.pos_ge(b, a)
}

/// Grid vertices of `source` (subdivided against `other` at `delta`) as
/// positions in the original tree, with the grid's edges as index pairs
/// `(child, parent)`.
struct SourceGrid {
    pos: Vec<Pos>,
    edges: Vec<(usize, usize)>,
    /// A leaf below every vertex, as an index into `pos`.
    leaf_below: Vec<usize>,
}

impl SourceGrid {
    fn new(source: &MergeTree, other: &MergeTree, delta: f64) -> SourceGrid {
        let (aug, _) = augment(source, other, delta);
        let n = source.len();
        let t = aug.tree();
        let original_below = |mut v: NodeId| {
            while v >= n {
                v = t.children(v)[0];
            }
            v
        };
        let pos = (0..aug.len())
            .map(|v| Pos {
                below: original_below(v),
                height: aug.height(v),
            })
            .collect();
        let edges = (0..aug.len()).filter_map(|v| t.parent(v).map(|p| (v, p))).collect();
        let mut leaf_below = vec![0; aug.len()];
        for v in t.postorder() {
            leaf_below[v] = match t.children(v).first() {
                Some(&c) => leaf_below[c],
                None => v,
            };
        }
        SourceGrid { pos, edges, leaf_below }
    }

    fn find(&self, t: &MergeTree, p: Pos) -> Option<usize> {
        self.pos.iter().position(|&q| same(t, p, q))
    }

    /// Index of the grid vertex at `p` or directly below it.
    fn floor(&self, t: &MergeTree, p: Pos) -> usize {
        (0..self.pos.len())
            .filter(|&i| t.pos_ge(p, self.pos[i]))
            .max_by(|&i, &j| self.pos[i].height.total_cmp(&self.pos[j].height))
            .expect("every point lies above some leaf")
    }

    /// Reads an assignment defined on this grid; the images are positions
    /// in `target`.
    fn read(&self, source: &MergeTree, target: &MergeTree, map: &MapAssignment) -> Result<Vec<Pos>> {
        let mut image: Vec<Option<Pos>> = vec![None; self.pos.len()];
        for e in &map.entries {
            let p = source.pos(&e.from)?;
            let i = self
                .find(source, p)
                .ok_or_else(|| Error::GridMismatch(format!("{:?} is not a grid point of the source tree", e.from)))?;
            if image[i].is_some() {
                return Err(Error::GridMismatch(format!("{:?} is assigned twice", e.from)));
            }
            image[i] = Some(target.pos(&e.to)?);
        }
        image
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or_else(|| Error::GridMismatch(format!("grid point {:?} has no image", source.point_ref(self.pos[i])))))
            .collect()
    }

    /// Value of the map at an arbitrary point, continuing the image of the
    /// grid vertex below it upward.
    fn eval(&self, source: &MergeTree, target: &MergeTree, image: &[Pos], p: Pos, delta: f64) -> Result<Pos> {
        let i = self.floor(source, p);
        if image[i].height > p.height + delta {
            // the map already breaks the shift here; that is reported separately
            return Ok(image[i]);
        }
        target.ancestor_at_height(image[i], p.height + delta)
    }
}

/// Grid points of `source` on which maps are given: its vertices after
/// subdividing against `other` at `delta`, parents before children.
pub fn source_grid(source: &MergeTree, other: &MergeTree, delta: Delta) -> Vec<PointRef> {
    let g = SourceGrid::new(source, other, delta.value());
    let (aug, _) = augment(source, other, delta.value());
    aug.tree().preorder().into_iter().map(|v| source.point_ref(g.pos[v])).collect()
}

fn push(v: &mut Vec<Violation>, condition: &str, detail: String) {
    if v.len() < 32 {
        v.push(Violation {
            condition: condition.into(),
            detail,
        });
    }
}

/// Checks the height shift and discrete continuity of a map on a grid.
fn check_shift_and_continuity(
    grid: &SourceGrid,
    source: &MergeTree,
    target: &MergeTree,
    image: &[Pos],
    delta: f64,
    shift_name: &str,
    v: &mut Vec<Violation>,
) {
    for (i, &p) in grid.pos.iter().enumerate() {
        if (image[i].height - (p.height + delta)).abs() > EPS {
            push(
                v,
                shift_name,
                format!("{:?} maps to height {} instead of {}", source.point_ref(p), image[i].height, p.height + delta),
            );
        }
    }
    for &(c, p) in &grid.edges {
        if !target.pos_ge(image[p], image[c]) {
            push(
                v,
                "continuity",
                format!("images of adjacent {:?} and {:?} are not joined by a monotone path", source.point_ref(grid.pos[c]), source.point_ref(grid.pos[p])),
            );
        }
    }
}

/// Lowest point above leaf `w` of `target` covered by the upward closure of
/// the given image points.
fn lowest_covered(target: &MergeTree, images: impl Iterator<Item = Pos>, w: NodeId) -> f64 {
    let wp = target.node_pos(w);
    images
        .map(|a| target.pos_lca(a, wp).height.max(a.height))
        .fold(f64::INFINITY, f64::min)
}

/// Checks the four good-map conditions on the grid points of `t1`.
pub fn check_good_map(t1: &MergeTree, t2: &MergeTree, alpha: &MapAssignment, delta: Delta) -> Result<MapCheck> {
    let d = delta.value();
    let grid = SourceGrid::new(t1, t2, d);
    let image = grid.read(t1, t2, alpha)?;
    let mut v = Vec::new();
    check_shift_and_continuity(&grid, t1, t2, &image, d, "shift", &mut v);
    let lifted: Vec<Pos> = grid
        .pos
        .iter()
        .map(|&p| t1.ancestor_at_height(p, p.height + 2.0 * d))
        .collect::<Result<_>>()?;
    for i in 0..grid.pos.len() {
        for j in 0..grid.pos.len() {
            if i != j && t2.pos_ge(image[i], image[j]) && !t1.pos_ge(lifted[i], lifted[j]) {
                push(
                    &mut v,
                    "ancestor",
                    format!(
                        "image of {:?} lies above image of {:?} but their 2δ-ancestors are not ordered",
                        t1.point_ref(grid.pos[i]),
                        t1.point_ref(grid.pos[j])
                    ),
                );
            }
        }
    }
    for w in t2.tree().leaves() {
        let low = lowest_covered(t2, image.iter().copied(), w);
        if low - t2.height(w) > 2.0 * d + EPS {
            push(
                &mut v,
                "coverage",
                format!("leaf {w} of the second tree is {} below the image", low - t2.height(w)),
            );
        }
    }
    Ok(MapCheck {
        valid: v.is_empty(),
        violations: v,
    })
}

/// Checks that `alpha` (on the grid of `t1`) and `beta` (on the grid of
/// `t2`) are δ-compatible.
pub fn check_compatible_pair(
    t1: &MergeTree,
    t2: &MergeTree,
    alpha: &MapAssignment,
    beta: &MapAssignment,
    delta: Delta,
    reading: Reading,
) -> Result<MapCheck> {
    let d = delta.value();
    let ga = SourceGrid::new(t1, t2, d);
    let gb = SourceGrid::new(t2, t1, d);
    let ia = ga.read(t1, t2, alpha)?;
    let ib = gb.read(t2, t1, beta)?;
    let mut v = Vec::new();
    check_shift_and_continuity(&ga, t1, t2, &ia, d, "alpha-shift", &mut v);
    check_shift_and_continuity(&gb, t2, t1, &ib, d, "beta-shift", &mut v);
    // round trips from each grid vertex
    let mut trip_a = Vec::with_capacity(ga.pos.len());
    for &img in &ia {
        trip_a.push(gb.eval(t2, t1, &ib, img, d)?);
    }
    let mut trip_b = Vec::with_capacity(gb.pos.len());
    for &img in &ib {
        trip_b.push(ga.eval(t1, t2, &ia, img, d)?);
    }
    for (name, tree, grid, trip) in [("alpha-round-trip", t1, &ga, &trip_a), ("beta-round-trip", t2, &gb, &trip_b)] {
        for (i, &p) in grid.pos.iter().enumerate() {
            let target = tree.ancestor_at_height(p, p.height + 2.0 * d)?;
            let ok = match reading {
                Reading::Standard => same(tree, trip[i], target),
                Reading::AsPrinted => (0..grid.pos.len())
                    .filter(|&j| (grid.pos[j].height - p.height).abs() <= EPS)
                    .all(|j| same(tree, trip[j], target)),
            };
            if !ok {
                push(&mut v, name, format!("round trip from {:?} does not reach its 2δ-ancestor", tree.point_ref(p)));
            }
        }
    }
    Ok(MapCheck {
        valid: v.is_empty(),
        violations: v,
    })
}

/// Exhaustive search over the images of the leaves of `t1`.
struct LeafSearch<'a> {
    t1: &'a MergeTree,
    t2: &'a MergeTree,
    delta: f64,
    leaves: Vec<NodeId>,
    /// Height of the lowest common ancestor of two leaves in `t1`.
    meet: Vec<Vec<f64>>,
    candidates: Vec<Vec<Pos>>,
    chosen: Vec<Pos>,
}

impl LeafSearch<'_> {
    fn compatible(&self, i: usize, a: Pos, j: usize, b: Pos) -> bool {
        let m = self.t2.pos_lca(a, b).height;
        let big = self.meet[i][j];
        let (fi, fj) = (self.t1.height(self.leaves[i]), self.t1.height(self.leaves[j]));
        // images of the common ancestor agree
        m <= big + self.delta + EPS
            // the lowest pair of points whose images are ordered has ordered 2δ-ancestors
            && fi.max(fj).max(m - self.delta) + 2.0 * self.delta >= big - EPS
    }

    fn covered(&self) -> bool {
        self.t2
            .tree()
            .leaves()
            .into_iter()
            .all(|w| lowest_covered(self.t2, self.chosen.iter().copied(), w) - self.t2.height(w) <= 2.0 * self.delta + EPS)
    }

    fn search(&mut self, i: usize) -> bool {
        if i == self.leaves.len() {
            return self.covered();
        }
        for k in 0..self.candidates[i].len() {
            let c = self.candidates[i][k];
            if (0..i).all(|j| self.compatible(i, c, j, self.chosen[j])) {
                self.chosen.push(c);
                if self.search(i + 1) {
                    return true;
                }
                self.chosen.pop();
            }
        }
        false
    }
}

/// Decides whether a δ-good map from `t1` to `t2` exists and returns one on
/// the grid points of `t1` when it does.
pub fn good_map_exists(t1: &MergeTree, t2: &MergeTree, delta: Delta) -> Result<GoodMap> {
    let d = delta.value();
    let leaves = t1.tree().leaves();
    let meet = leaves
        .iter()
        .map(|&a| leaves.iter().map(|&b| t1.height(t1.tree().lca_node(a, b))).collect())
        .collect();
    let candidates = leaves.iter().map(|&l| t2.positions_at(t1.height(l) + d)).collect();
    let mut s = LeafSearch {
        t1,
        t2,
        delta: d,
        leaves,
        meet,
        candidates,
        chosen: Vec::new(),
    };
    if !s.search(0) {
        return Ok(GoodMap {
            exists: false,
            witness: None,
        });
    }
    let leaf_image: HashMap<NodeId, Pos> = s.leaves.iter().copied().zip(s.chosen.iter().copied()).collect();
    let grid = SourceGrid::new(t1, t2, d);
    let mut entries = Vec::with_capacity(grid.pos.len());
    for (i, &p) in grid.pos.iter().enumerate() {
        let leaf = grid.pos[grid.leaf_below[i]].below;
        let to = t2.ancestor_at_height(leaf_image[&leaf], p.height + d)?;
        entries.push(MapEntry {
            from: t1.point_ref(p),
            to: t2.point_ref(to),
        });
    }
    Ok(GoodMap {
        exists: true,
        witness: Some(MapAssignment { entries }),
    })
}

/// Heights where the interleaving distance can be attained: differences
/// and half differences of node heights of either tree, ascending.
pub fn candidate_deltas(t1: &MergeTree, t2: &MergeTree) -> Vec<f64> {
    let heights: Vec<f64> = [t1, t2]
        .iter()
        .flat_map(|t| (0..t.len()).filter(|&v| t.is_essential(v)).map(|v| t.height(v)))
        .collect();
    let mut out = vec![0.0];
    for &a in &heights {
        for &b in &heights {
            let g = (a - b).abs();
            out.push(g);
            out.push(g / 2.0);
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() <= EPS);
    out
}

/// Smallest candidate δ admitting a δ-good map; the witness is that map.
pub fn interleaving_distance(t1: &MergeTree, t2: &MergeTree) -> Result<DistanceReport> {
    for delta in candidate_deltas(t1, t2) {
        let g = good_map_exists(t1, t2, Delta::new(delta)?)?;
        if let Some(w) = g.witness {
            return Ok(DistanceReport::new(Metric::Interleaving, delta)
                .with_witness(serde_json::to_value(&w).expect("map serializes"))
                .with_params(json!({ "candidates": "node height differences and their halves" })));
        }
    }
    Err(Error::Structure("no candidate shift admits a good map".into()))
}
