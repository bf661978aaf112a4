//! Ordered tree edit distance (Zhang and Shasha keyroot dynamic program),
//! with an edit script recovered by backtracking the forest tables.

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::EditCosts;
use crate::report::{DistanceReport, Metric};
use crate::tree::{NodeId, RootedTree};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum EditOp {
    Keep { from: NodeId, to: NodeId },
    Relabel { from: NodeId, to: NodeId },
    Delete { node: NodeId },
    Insert { node: NodeId },
}

/// Postorder view of a tree with 1-based indices, as the keyroot algorithm
/// expects.
struct Indexed {
    nodes: Vec<NodeId>,
    leftmost: Vec<usize>,
    keyroots: Vec<usize>,
}

impl Indexed {
    fn new(t: &RootedTree) -> Self {
        let post = t.postorder();
        let mut index = vec![0; t.len()];
        for (i, &v) in post.iter().enumerate() {
            index[v] = i + 1;
        }
        let mut nodes = vec![usize::MAX];
        let mut leftmost = vec![0];
        for &v in &post {
            let mut l = v;
            while let Some(&c) = t.children(l).first() {
                l = c;
            }
            nodes.push(v);
            leftmost.push(index[l]);
        }
        let n = post.len();
        let mut keyroots = Vec::new();
        let mut seen = vec![false; n + 1];
        for i in (1..=n).rev() {
            if !seen[leftmost[i]] {
                seen[leftmost[i]] = true;
                keyroots.push(i);
            }
        }
        keyroots.sort_unstable();
        Indexed {
            nodes,
            leftmost,
            keyroots,
        }
    }

    fn len(&self) -> usize {
        self.nodes.len() - 1
    }
}

struct Solver<'a> {
    t1: &'a RootedTree,
    t2: &'a RootedTree,
    a: Indexed,
    b: Indexed,
    costs: EditCosts,
    treedist: Vec<Vec<f64>>,
}

impl Solver<'_> {
    fn ren(&self, x: usize, y: usize) -> f64 {
        self.costs.rename(self.t1, self.a.nodes[x], self.t2, self.b.nodes[y])
    }

    /// Forest distance table for the subtrees rooted at `i` and `j`; entry
    /// `[x - l_i + 1][y - l_j + 1]` covers the forests `l_i..=x` and `l_j..=y`.
    fn forest(&mut self, i: usize, j: usize, record: bool) -> Vec<Vec<f64>> {
        let (li, lj) = (self.a.leftmost[i], self.b.leftmost[j]);
        let (w, h) = (i - li + 2, j - lj + 2);
        let mut fd = vec![vec![0.0; h]; w];
        for x in 1..w {
            fd[x][0] = fd[x - 1][0] + self.costs.delete;
        }
        for y in 1..h {
            fd[0][y] = fd[0][y - 1] + self.costs.insert;
        }
        for x in 1..w {
            let xi = li + x - 1;
            for y in 1..h {
                let yj = lj + y - 1;
                let del = fd[x - 1][y] + self.costs.delete;
                let ins = fd[x][y - 1] + self.costs.insert;
                if self.a.leftmost[xi] == li && self.b.leftmost[yj] == lj {
                    let v = del.min(ins).min(fd[x - 1][y - 1] + self.ren(xi, yj));
                    fd[x][y] = v;
                    if record {
                        self.treedist[xi][yj] = v;
                    }
                } else {
                    let px = self.a.leftmost[xi] - li;
                    let py = self.b.leftmost[yj] - lj;
                    fd[x][y] = del.min(ins).min(fd[px][py] + self.treedist[xi][yj]);
                }
            }
        }
        fd
    }

    fn run(&mut self) {
        let (ka, kb) = (self.a.keyroots.clone(), self.b.keyroots.clone());
        for &i in &ka {
            for &j in &kb {
                self.forest(i, j, true);
            }
        }
    }

    fn script(&mut self) -> Vec<EditOp> {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * (1.0 + a.abs());
        let mut ops = Vec::new();
        let mut stack = vec![(self.a.len(), self.b.len())];
        while let Some((i, j)) = stack.pop() {
            let fd = self.forest(i, j, false);
            let (li, lj) = (self.a.leftmost[i], self.b.leftmost[j]);
            let (mut x, mut y) = (i - li + 1, j - lj + 1);
            while x > 0 || y > 0 {
                let xi = li + x - 1;
                let yj = lj + y - 1;
                if x > 0 && close(fd[x][y], fd[x - 1][y] + self.costs.delete) {
                    ops.push(EditOp::Delete { node: self.a.nodes[xi] });
                    x -= 1;
                } else if y > 0 && close(fd[x][y], fd[x][y - 1] + self.costs.insert) {
                    ops.push(EditOp::Insert { node: self.b.nodes[yj] });
                    y -= 1;
                } else if self.a.leftmost[xi] == li && self.b.leftmost[yj] == lj {
                    let (from, to) = (self.a.nodes[xi], self.b.nodes[yj]);
                    if self.ren(xi, yj) == 0.0 && self.t1.label(from) == self.t2.label(to) {
                        ops.push(EditOp::Keep { from, to });
                    } else {
                        ops.push(EditOp::Relabel { from, to });
                    }
                    x -= 1;
                    y -= 1;
                } else {
                    stack.push((xi, yj));
                    x = self.a.leftmost[xi] - li;
                    y = self.b.leftmost[yj] - lj;
                }
            }
        }
        ops.reverse();
        ops
    }
}

/// Minimum total cost of relabel, insert and delete operations turning
/// `t1` into `t2`, treating both as ordered labeled trees. The witness is
/// an edit script listing what happens to every node.
pub fn edit_distance(t1: &RootedTree, t2: &RootedTree, costs: EditCosts) -> DistanceReport {
    let a = Indexed::new(t1);
    let b = Indexed::new(t2);
    let treedist = vec![vec![0.0; b.len() + 1]; a.len() + 1];
    let mut s = Solver {
        t1,
        t2,
        a,
        b,
        costs,
        treedist,
    };
    s.run();
    let value = s.treedist[s.a.len()][s.b.len()];
    let script = s.script();
    DistanceReport::new(Metric::Edit, value)
        .with_witness(serde_json::to_value(&script).expect("script serializes"))
        .with_params(json!({ "costs": costs }))
}

/// Cost of an edit script under the given costs.
pub fn script_cost(script: &[EditOp], costs: EditCosts) -> f64 {
    script
        .iter()
        .map(|op| match op {
            EditOp::Keep { .. } => 0.0,
            EditOp::Relabel { .. } => costs.relabel,
            EditOp::Delete { .. } => costs.delete,
            EditOp::Insert { .. } => costs.insert,
        })
        .sum()
}
