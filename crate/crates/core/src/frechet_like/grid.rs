//! Finite grids on which correspondences are represented.
//!
//! Degree-two vertices are suppressed, so a grid only keeps the root, the
//! leaves and the branching nodes of the input tree. Merge trees are then
//! subdivided at every height carried by such a node in either tree;
//! drawn trees are sampled along each chain at the requested resolution.
//! Every grid vertex remembers the point of the input tree it stands for.

use std::collections::HashMap;

use crate::tree::{dist, EmbeddedTree, MergeTree, NodeId, Point2, PointRef, EPS};

#[derive(Debug, Clone)]
pub(crate) struct Grid {
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    pub height: Vec<f64>,
    pub pos: Vec<Point2>,
    /// Root, leaves and branching nodes.
    pub essential: Vec<bool>,
    /// Nearest strict ancestor that is essential.
    pub anchor: Vec<Option<usize>>,
    pub point: Vec<PointRef>,
    /// Euler-tour interval for constant-time ancestor tests.
    tin: Vec<usize>,
    tout: Vec<usize>,
    /// Vertices with equal class have identical subtrees, so they are
    /// interchangeable in every search.
    pub class: Vec<u32>,
    /// Every leaf below the vertex has its anchor inside the subtree.
    pub anchored_within: Vec<bool>,
    pub root: usize,
}

struct Builder {
    g: Grid,
}

impl Builder {
    fn new() -> Self {
        Builder {
            g: Grid {
                parent: Vec::new(),
                children: Vec::new(),
                height: Vec::new(),
                pos: Vec::new(),
                essential: Vec::new(),
                anchor: Vec::new(),
                point: Vec::new(),
                tin: Vec::new(),
                tout: Vec::new(),
                class: Vec::new(),
                anchored_within: Vec::new(),
                root: 0,
            },
        }
    }

    fn add(&mut self, parent: Option<usize>, height: f64, pos: Point2, point: PointRef, essential: bool) -> usize {
        let g = &mut self.g;
        let id = g.parent.len();
        g.parent.push(parent);
        g.children.push(Vec::new());
        g.height.push(height);
        g.pos.push(pos);
        g.essential.push(essential);
        g.point.push(point);
        if let Some(p) = parent {
            g.children[p].push(id);
        }
        id
    }

    fn finish(mut self) -> Grid {
        let g = &mut self.g;
        let n = g.parent.len();
        g.anchor = vec![None; n];
        g.tin = vec![0; n];
        g.tout = vec![0; n];
        let mut clock = 0;
        let mut stack = vec![(g.root, false)];
        let mut post = Vec::with_capacity(n);
        while let Some((v, done)) = stack.pop() {
            if done {
                g.tout[v] = clock;
                post.push(v);
                continue;
            }
            g.tin[v] = clock;
            clock += 1;
            if let Some(p) = g.parent[v] {
                g.anchor[v] = if g.essential[p] { Some(p) } else { g.anchor[p] };
            }
            stack.push((v, true));
            for &c in g.children[v].iter().rev() {
                stack.push((c, false));
            }
        }
        let mut interner: HashMap<(u64, u64, u64, Vec<u32>), u32> = HashMap::new();
        g.class = vec![0; n];
        g.anchored_within = vec![false; n];
        for &v in &post {
            let mut kids: Vec<u32> = g.children[v].iter().map(|&c| g.class[c]).collect();
            kids.sort_unstable();
            let key = (g.height[v].to_bits(), g.pos[v][0].to_bits(), g.pos[v][1].to_bits(), kids);
            let next = interner.len() as u32;
            g.class[v] = *interner.entry(key).or_insert(next);
            g.anchored_within[v] = if g.children[v].is_empty() {
                false
            } else if g.essential[v] {
                true
            } else {
                g.children[v].iter().all(|&c| g.anchored_within[c])
            };
        }
        self.g
    }
}

/// Walks down from `v` through degree-two nodes; returns the chain of
/// edges passed (child ids, top down) and the essential node reached.
fn chain_from(tree: &crate::tree::RootedTree, first: NodeId) -> (Vec<NodeId>, NodeId) {
    let mut edges = vec![first];
    let mut v = first;
    while tree.children(v).len() == 1 {
        v = tree.children(v)[0];
        edges.push(v);
    }
    (edges, v)
}

impl Grid {
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.children[v].is_empty()
    }

    /// `a` is an ancestor of `d` or equal to it.
    pub fn ge(&self, a: usize, d: usize) -> bool {
        self.tin[a] <= self.tin[d] && self.tout[d] <= self.tout[a]
    }

    pub fn lca(&self, mut a: usize, b: usize) -> usize {
        while !self.ge(a, b) {
            a = self.parent[a].expect("root is an ancestor of everything");
        }
        a
    }

    pub fn subtree(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            out.push(u);
            stack.extend(&self.children[u]);
        }
        out
    }

    /// Vertices on the path from `lo` up to `hi`, both included.
    pub fn path(&self, lo: usize, hi: usize) -> Vec<usize> {
        let mut out = vec![lo];
        let mut v = lo;
        while v != hi {
            v = self.parent[v].expect("hi is an ancestor of lo");
            out.push(v);
        }
        out
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.is_leaf(v)).collect()
    }


    /// Largest number of pairwise non-interchangeable children of a vertex.
    pub fn max_distinct_children(&self) -> usize {
        self.children
            .iter()
            .map(|kids| {
                let mut c: Vec<u32> = kids.iter().map(|&k| self.class[k]).collect();
                c.sort_unstable();
                c.dedup();
                c.len()
            })
            .max()
            .unwrap_or(0)
    }

    /// Heights of the root, leaves and branching nodes.
    pub fn critical_heights(m: &MergeTree) -> Vec<f64> {
        (0..m.len()).filter(|&v| m.is_essential(v)).map(|v| m.height(v)).collect()
    }

    /// Grid of a merge tree subdivided at `levels`.
    pub fn merge(m: &MergeTree, levels: &[f64]) -> Grid {
        let mut levels = levels.to_vec();
        levels.sort_by(|a, b| b.total_cmp(a));
        levels.dedup_by(|a, b| (*a - *b).abs() <= EPS);
        let tree = m.tree();
        let mut b = Builder::new();
        let root = tree.root();
        b.g.root = b.add(None, m.height(root), [0.0, 0.0], PointRef::Node(root), true);
        let mut stack = vec![(root, b.g.root)];
        while let Some((node, gv)) = stack.pop() {
            for &c in tree.children(node) {
                let (edges, bottom) = chain_from(tree, c);
                let (lo, hi) = (m.height(bottom), m.height(node));
                let mut upper = gv;
                for &h in levels.iter().filter(|&&h| h > lo + EPS && h < hi - EPS) {
                    // the original edge (or suppressed node) carrying height h
                    let e = *edges
                        .iter()
                        .find(|&&e| m.height(e) <= h + EPS)
                        .expect("level lies inside the chain");
                    let point = if (m.height(e) - h).abs() <= EPS {
                        PointRef::Node(e)
                    } else {
                        let p = tree.parent(e).unwrap();
                        PointRef::Edge {
                            child: e,
                            t: (h - m.height(e)) / (m.height(p) - m.height(e)),
                        }
                    };
                    upper = b.add(Some(upper), h, [0.0, 0.0], point, false);
                }
                let gb = b.add(Some(upper), lo, [0.0, 0.0], PointRef::Node(bottom), true);
                stack.push((bottom, gb));
            }
        }
        b.finish()
    }

    /// Grid of a drawn tree sampled at spacing at most `resolution` along
    /// every chain between essential nodes.
    pub fn embedded(e: &EmbeddedTree, resolution: f64) -> Grid {
        let tree = e.tree();
        let mut b = Builder::new();
        let root = tree.root();
        b.g.root = b.add(None, 0.0, e.position(root), PointRef::Node(root), true);
        let mut stack = vec![(root, b.g.root)];
        while let Some((node, gv)) = stack.pop() {
            for &c in tree.children(node) {
                let (edges, bottom) = chain_from(tree, c);
                // Samples along the chain as (position, edge child, t), skipping
                // the top endpoint which is already a grid vertex.
                let mut samples: Vec<(Point2, NodeId, f64)> = Vec::new();
                for &edge in &edges {
                    let line = e.edge(edge);
                    let total: f64 = line.windows(2).map(|w| dist(w[0], w[1])).sum();
                    let mut walked = 0.0;
                    for w in line.windows(2) {
                        let len = dist(w[0], w[1]);
                        let steps = ((len / resolution).ceil() as usize).max(1);
                        for s in 1..=steps {
                            let f = s as f64 / steps as f64;
                            let p = [w[0][0] + f * (w[1][0] - w[0][0]), w[0][1] + f * (w[1][1] - w[0][1])];
                            samples.push((p, edge, 1.0 - (walked + f * len) / total));
                        }
                        walked += len;
                    }
                }
                let last = samples.len() - 1;
                let mut upper = gv;
                for (i, &(p, edge, t)) in samples.iter().enumerate() {
                    if i == last {
                        break;
                    }
                    let point = if t <= EPS { PointRef::Node(edge) } else { PointRef::Edge { child: edge, t } };
                    upper = b.add(Some(upper), 0.0, p, point, false);
                }
                let gb = b.add(Some(upper), 0.0, e.position(bottom), PointRef::Node(bottom), true);
                stack.push((bottom, gb));
            }
        }
        b.finish()
    }

    /// Looks up the grid vertex standing for an input point.
    pub fn index(&self) -> HashMap<PointKey, usize> {
        (0..self.len()).map(|v| (PointKey::of(&self.point[v]), v)).collect()
    }
}

/// Hashable form of a point reference, quantized to the shared tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct PointKey(NodeId, i64, u8);

impl PointKey {
    pub fn of(p: &PointRef) -> PointKey {
        match *p {
            PointRef::Node(n) => PointKey(n, 0, 0),
            PointRef::Edge { child, t } => {
                if t <= EPS {
                    PointKey(child, 0, 0)
                } else {
                    PointKey(child, (t * 1e8).round() as i64, 1)
                }
            }
            PointRef::Ray { offset } => PointKey(0, (offset * 1e8).round() as i64, 2),
        }
    }
}
