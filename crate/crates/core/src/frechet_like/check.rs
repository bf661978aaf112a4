//! Validation of a correspondence against the four defining conditions,
//! evaluated on grid vertices.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::decide::Pair;
use crate::report::Violation;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub valid: bool,
    pub cost: f64,
    pub violations: Vec<Violation>,
}

/// Stops collecting after this many violations.
const MAX_REPORTED: usize = 32;

/// One pair lies strictly above the other in one tree and strictly below
/// it in the other. Interval coverage presumes matched pairs keep the
/// ancestor order, as a monotone walk does.
pub(crate) fn reversed(p: &Pair, (x1, y1): (usize, usize), (x2, y2): (usize, usize)) -> bool {
    let (g1, g2) = (&p.g1, &p.g2);
    x1 != x2 && y1 != y2 && ((g1.ge(x1, x2) && g2.ge(y2, y1)) || (g1.ge(x2, x1) && g2.ge(y1, y2)))
}

pub(crate) fn check_pairs(p: &Pair, r: &BTreeSet<(usize, usize)>, eps: f64) -> CheckReport {
    let (g1, g2) = (&p.g1, &p.g2);
    let mut v = Vec::new();
    let push = |v: &mut Vec<Violation>, c: &str, d: String| {
        if v.len() < MAX_REPORTED {
            v.push(Violation {
                condition: c.into(),
                detail: d,
            });
        }
    };
    let set: HashSet<(usize, usize)> = r.iter().copied().collect();
    let mut partners1: Vec<Vec<usize>> = vec![Vec::new(); g1.len()];
    let mut partners2: Vec<Vec<usize>> = vec![Vec::new(); g2.len()];
    for &(x, y) in r {
        partners1[x].push(y);
        partners2[y].push(x);
    }
    for x in 0..g1.len() {
        if partners1[x].is_empty() {
            push(&mut v, "totality", format!("first-tree point {:?} is unmatched", g1.point[x]));
        }
    }
    for y in 0..g2.len() {
        if partners2[y].is_empty() {
            push(&mut v, "totality", format!("second-tree point {:?} is unmatched", g2.point[y]));
        }
    }
    let mut cost: f64 = 0.0;
    for &(x, y) in r {
        cost = cost.max(p.cost(x, y));
    }
    if cost > eps + 1e-9 {
        push(&mut v, "cost", format!("largest pair cost {cost} exceeds {eps}"));
    }
    let pairs: Vec<(usize, usize)> = r.iter().copied().collect();
    for (i, &(x1, y1)) in pairs.iter().enumerate() {
        for &(x2, y2) in &pairs[i + 1..] {
            let l = (g1.lca(x1, x2), g2.lca(y1, y2));
            if !set.contains(&l) {
                push(
                    &mut v,
                    "lca",
                    format!("pairs ({:?},{:?}) and ({:?},{:?}) lack their ancestor pair", g1.point[x1], g2.point[y1], g1.point[x2], g2.point[y2]),
                );
            }
            if reversed(p, (x1, y1), (x2, y2)) {
                push(
                    &mut v,
                    "order",
                    format!("pairs ({:?},{:?}) and ({:?},{:?}) are ordered oppositely", g1.point[x1], g2.point[y1], g1.point[x2], g2.point[y2]),
                );
            }
            for ((a1, b1), (a2, b2)) in [((x1, y1), (x2, y2)), ((x2, y2), (x1, y1))] {
                // (a2, b2) above (a1, b1) on both sides
                if !(g1.ge(a2, a1) && g2.ge(b2, b1)) {
                    continue;
                }
                let path1 = g1.path(a1, a2);
                let path2 = g2.path(b1, b2);
                for &x in &path1 {
                    if !partners1[x].iter().any(|&y| g2.ge(b2, y) && g2.ge(y, b1)) {
                        push(&mut v, "interval", format!("{:?} has no partner between {:?} and {:?}", g1.point[x], g2.point[b1], g2.point[b2]));
                    }
                }
                for &y in &path2 {
                    if !partners2[y].iter().any(|&x| g1.ge(a2, x) && g1.ge(x, a1)) {
                        push(&mut v, "interval", format!("{:?} has no partner between {:?} and {:?}", g2.point[y], g1.point[a1], g1.point[a2]));
                    }
                }
            }
        }
    }
    for x in g1.leaves() {
        let ok = partners1[x].iter().any(|&y| g2.is_leaf(y))
            || g1.anchor[x].is_some_and(|a| partners1[x].iter().any(|&y| set.contains(&(a, y))));
        if !ok {
            push(&mut v, "leaf", format!("first-tree leaf {:?} is not covered", g1.point[x]));
        }
    }
    for y in g2.leaves() {
        let ok = partners2[y].iter().any(|&x| g1.is_leaf(x))
            || g2.anchor[y].is_some_and(|a| partners2[y].iter().any(|&x| set.contains(&(x, a))));
        if !ok {
            push(&mut v, "leaf", format!("second-tree leaf {:?} is not covered", g2.point[y]));
        }
    }
    CheckReport {
        valid: v.is_empty(),
        cost,
        violations: v,
    }
}
