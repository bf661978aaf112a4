//! Alignment distance between ordered labeled trees.
//!
//! Blank nodes are inserted into both trees until they have the same shape;
//! the cost is the relabeling cost of the aligned pair plus the cost of the
//! inserted blanks. The recursion works on forests that are contiguous runs
//! of siblings and looks at the rightmost tree of each forest: its root is
//! either paired with the other rightmost root, or paired with a blank that
//! adopts a suffix of the other forest.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::EditCosts;
use crate::error::{Error, Result};
use crate::report::{DistanceReport, Metric};
use crate::tree::{NodeId, RootedTree};

pub const DEFAULT_DEGREE_BOUND: usize = 8;

/// A node of the aligned tree: a pair of nodes, or a node paired with a blank.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignedNode {
    pub left: Option<NodeId>,
    pub right: Option<NodeId>,
    pub children: Vec<AlignedNode>,
}

/// Siblings `start..end` below `parent`; `None` stands for the virtual
/// parent of the root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Forest {
    parent: Option<NodeId>,
    start: usize,
    end: usize,
}

impl Forest {
    fn len(&self) -> usize {
        self.end - self.start
    }
    fn prefix(self, k: usize) -> Forest {
        Forest { end: self.start + k, ..self }
    }
    fn suffix(self, k: usize) -> Forest {
        Forest { start: self.start + k, ..self }
    }
}

#[derive(Debug, Clone, Copy)]
enum Choice {
    Pair,
    DeleteLeft(usize),
    InsertRight(usize),
}

struct Aligner<'a> {
    t1: &'a RootedTree,
    t2: &'a RootedTree,
    costs: EditCosts,
    del_subtree: Vec<f64>,
    ins_subtree: Vec<f64>,
    memo: HashMap<(Forest, Forest), (f64, Choice)>,
}

fn members(t: &RootedTree, f: Forest) -> &[NodeId] {
    match f.parent {
        Some(p) => &t.children(p)[f.start..f.end],
        None => &t.root_slice()[f.start..f.end],
    }
}

fn kids(t: &RootedTree, v: NodeId) -> Forest {
    Forest {
        parent: Some(v),
        start: 0,
        end: t.children(v).len(),
    }
}

fn subtree_sums(t: &RootedTree, cost: f64) -> Vec<f64> {
    let mut s = vec![0.0; t.len()];
    for v in t.postorder() {
        s[v] = cost + t.children(v).iter().map(|&c| s[c]).sum::<f64>();
    }
    s
}

impl Aligner<'_> {
    fn solve(&mut self, f1: Forest, f2: Forest) -> f64 {
        if let Some(&(v, _)) = self.memo.get(&(f1, f2)) {
            return v;
        }
        let result = if f1.len() == 0 {
            (members(self.t2, f2).iter().map(|&v| self.ins_subtree[v]).sum(), Choice::Pair)
        } else if f2.len() == 0 {
            (members(self.t1, f1).iter().map(|&v| self.del_subtree[v]).sum(), Choice::Pair)
        } else {
            let s = *members(self.t1, f1).last().unwrap();
            let t = *members(self.t2, f2).last().unwrap();
            let rest1 = f1.prefix(f1.len() - 1);
            let rest2 = f2.prefix(f2.len() - 1);
            let mut best = (
                self.solve(rest1, rest2) + self.costs.rename(self.t1, s, self.t2, t) + self.solve(kids(self.t1, s), kids(self.t2, t)),
                Choice::Pair,
            );
            for k in 0..=f2.len() {
                let v = self.costs.delete + self.solve(kids(self.t1, s), f2.suffix(k)) + self.solve(rest1, f2.prefix(k));
                if v < best.0 {
                    best = (v, Choice::DeleteLeft(k));
                }
            }
            for k in 0..=f1.len() {
                let v = self.costs.insert + self.solve(f1.suffix(k), kids(self.t2, t)) + self.solve(f1.prefix(k), rest2);
                if v < best.0 {
                    best = (v, Choice::InsertRight(k));
                }
            }
            best
        };
        self.memo.insert((f1, f2), result);
        result.0
    }

    fn blanks_right(&self, t: &RootedTree, f: Forest) -> Vec<AlignedNode> {
        members(t, f)
            .iter()
            .map(|&v| AlignedNode {
                left: None,
                right: Some(v),
                children: self.blanks_right(t, kids(t, v)),
            })
            .collect()
    }

    fn blanks_left(&self, t: &RootedTree, f: Forest) -> Vec<AlignedNode> {
        members(t, f)
            .iter()
            .map(|&v| AlignedNode {
                left: Some(v),
                right: None,
                children: self.blanks_left(t, kids(t, v)),
            })
            .collect()
    }

    fn rebuild(&mut self, f1: Forest, f2: Forest) -> Vec<AlignedNode> {
        if f1.len() == 0 {
            return self.blanks_right(self.t2, f2);
        }
        if f2.len() == 0 {
            return self.blanks_left(self.t1, f1);
        }
        self.solve(f1, f2);
        let choice = self.memo[&(f1, f2)].1;
        let s = *members(self.t1, f1).last().unwrap();
        let t = *members(self.t2, f2).last().unwrap();
        let rest1 = f1.prefix(f1.len() - 1);
        let rest2 = f2.prefix(f2.len() - 1);
        let (mut out, last) = match choice {
            Choice::Pair => (
                self.rebuild(rest1, rest2),
                AlignedNode {
                    left: Some(s),
                    right: Some(t),
                    children: self.rebuild(kids(self.t1, s), kids(self.t2, t)),
                },
            ),
            Choice::DeleteLeft(k) => (
                self.rebuild(rest1, f2.prefix(k)),
                AlignedNode {
                    left: Some(s),
                    right: None,
                    children: self.rebuild(kids(self.t1, s), f2.suffix(k)),
                },
            ),
            Choice::InsertRight(k) => (
                self.rebuild(f1.prefix(k), rest2),
                AlignedNode {
                    left: None,
                    right: Some(t),
                    children: self.rebuild(f1.suffix(k), kids(self.t2, t)),
                },
            ),
        };
        out.push(last);
        out
    }
}

/// Minimum alignment cost of two ordered labeled trees. The witness is the
/// aligned tree as a forest of [`AlignedNode`]s.
pub fn alignment_distance(
    t1: &RootedTree,
    t2: &RootedTree,
    costs: EditCosts,
    degree_bound: usize,
) -> Result<DistanceReport> {
    for t in [t1, t2] {
        let degree = t.max_degree();
        if degree > degree_bound {
            return Err(Error::DegreeExceeded {
                degree,
                bound: degree_bound,
            });
        }
    }
    let mut a = Aligner {
        t1,
        t2,
        costs,
        del_subtree: subtree_sums(t1, costs.delete),
        ins_subtree: subtree_sums(t2, costs.insert),
        memo: HashMap::new(),
    };
    let top = Forest {
        parent: None,
        start: 0,
        end: 1,
    };
    let value = a.solve(top, top);
    let aligned = a.rebuild(top, top);
    Ok(DistanceReport::new(Metric::Alignment, value)
        .with_witness(serde_json::to_value(&aligned).expect("alignment serializes"))
        .with_params(json!({ "costs": costs, "degree_bound": degree_bound })))
}

/// Cost of an aligned forest under the given costs.
pub fn aligned_cost(t1: &RootedTree, t2: &RootedTree, nodes: &[AlignedNode], costs: EditCosts) -> f64 {
    nodes
        .iter()
        .map(|n| {
            let own = match (n.left, n.right) {
                (Some(a), Some(b)) => costs.rename(t1, a, t2, b),
                (Some(_), None) => costs.delete,
                (None, Some(_)) => costs.insert,
                (None, None) => 0.0,
            };
            own + aligned_cost(t1, t2, &n.children, costs)
        })
        .sum()
}
