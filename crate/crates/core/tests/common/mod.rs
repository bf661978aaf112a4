//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use treemetrics_core::generate::{random_merge_tree, rng};
use treemetrics_core::interleaving::{source_grid, Delta, MapAssignment, MapEntry};
use treemetrics_core::tree::Pos;
use treemetrics_core::MergeTree;

pub fn pair(seed: u64, leaves: usize) -> (MergeTree, MergeTree) {
    let mut r = rng(seed);
    (random_merge_tree(&mut r, leaves), random_merge_tree(&mut r, leaves))
}

/// Grid points with the index of their grid parent (points come parents first).
pub fn grid_with_parents(t1: &MergeTree, t2: &MergeTree, delta: f64) -> Vec<(Pos, Option<usize>)> {
    let pts: Vec<Pos> = source_grid(t1, t2, Delta::new(delta).unwrap()).iter().map(|p| t1.pos(p).unwrap()).collect();
    (0..pts.len())
        .map(|i| {
            let parent = (0..i)
                .filter(|&j| t1.pos_ge(pts[j], pts[i]) && pts[j].height > pts[i].height)
                .min_by(|&a, &b| pts[a].height.total_cmp(&pts[b].height));
            (pts[i], parent)
        })
        .collect()
}

pub fn to_map(t1: &MergeTree, t2: &MergeTree, grid: &[(Pos, Option<usize>)], images: &[Pos]) -> MapAssignment {
    MapAssignment {
        entries: grid
            .iter()
            .zip(images)
            .map(|(&(p, _), &q)| MapEntry {
                from: t1.point_ref(p),
                to: t2.point_ref(q),
            })
            .collect(),
    }
}

/// Every continuous, height-shifting assignment on the grid.
pub fn all_maps(t1: &MergeTree, t2: &MergeTree, delta: f64, cap: usize) -> Vec<MapAssignment> {
    let grid = grid_with_parents(t1, t2, delta);
    let mut out = Vec::new();
    let mut current: Vec<Pos> = Vec::new();
    fn go(
        i: usize,
        t1: &MergeTree,
        t2: &MergeTree,
        delta: f64,
        grid: &[(Pos, Option<usize>)],
        current: &mut Vec<Pos>,
        out: &mut Vec<MapAssignment>,
        cap: usize,
    ) {
        if out.len() >= cap {
            return;
        }
        if i == grid.len() {
            out.push(to_map(t1, t2, grid, current));
            return;
        }
        let (p, parent) = grid[i];
        for c in t2.positions_at(p.height + delta) {
            if parent.is_none_or(|j| t2.pos_ge(current[j], c)) {
                current.push(c);
                go(i + 1, t1, t2, delta, grid, current, out, cap);
                current.pop();
            }
        }
    }
    go(0, t1, t2, delta, &grid, &mut current, &mut out, cap);
    out
}
