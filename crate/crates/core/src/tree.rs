//! Tree data model shared by every metric.
//!
//! A [`RootedTree`] carries only structure and optional labels. A
//! [`MergeTree`] adds a height per node that strictly increases towards the
//! root; points inside an edge take linearly interpolated heights. An
//! [`EmbeddedTree`] gives every edge a polyline in the plane.
//!
//! Points of the underlying space `|T|` are addressed with [`PointRef`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type NodeId = usize;

/// Tolerance used when comparing heights and edge parameters.
pub const EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct RootedTree {
    parent: Vec<Option<NodeId>>,
    children: Vec<Vec<NodeId>>,
    labels: Vec<Option<String>>,
    depth: Vec<usize>,
    root: NodeId,
}

impl RootedTree {
    /// A tree consisting of a single root node.
    pub fn singleton(label: Option<String>) -> Self {
        RootedTree {
            parent: vec![None],
            children: vec![Vec::new()],
            labels: vec![label],
            depth: vec![0],
            root: 0,
        }
    }

    /// Appends a new last child below `parent` and returns its id.
    pub fn push_child(&mut self, parent: NodeId, label: Option<String>) -> NodeId {
        assert!(parent < self.len(), "parent {parent} out of range");
        let id = self.len();
        self.parent.push(Some(parent));
        self.children.push(Vec::new());
        self.labels.push(label);
        self.depth.push(self.depth[parent] + 1);
        self.children[parent].push(id);
        id
    }

    /// Builds a tree from explicit parent links and ordered child lists,
    /// checking that they describe a single connected, acyclic tree.
    pub fn from_parts(
        parent: Vec<Option<NodeId>>,
        children: Vec<Vec<NodeId>>,
        labels: Vec<Option<String>>,
    ) -> Result<Self> {
        let n = parent.len();
        if n == 0 {
            return Err(Error::Structure("tree has no nodes".into()));
        }
        if children.len() != n || labels.len() != n {
            return Err(Error::Structure("mismatched node table lengths".into()));
        }
        let roots: Vec<_> = (0..n).filter(|&i| parent[i].is_none()).collect();
        if roots.len() != 1 {
            return Err(Error::Structure(format!(
                "expected exactly one root, found {}",
                roots.len()
            )));
        }
        let root = roots[0];
        for (p, kids) in children.iter().enumerate() {
            let mut seen = std::collections::HashSet::new();
            for &c in kids {
                if c >= n {
                    return Err(Error::Structure(format!("child {c} of {p} out of range")));
                }
                if !seen.insert(c) {
                    return Err(Error::Structure(format!("duplicate child {c} under {p}")));
                }
                if parent[c] != Some(p) {
                    return Err(Error::Structure(format!(
                        "child {c} listed under {p} but its parent is {:?}",
                        parent[c]
                    )));
                }
            }
        }
        for (c, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n || !children[p].contains(&c) {
                    return Err(Error::Structure(format!(
                        "node {c} names parent {p} which does not list it"
                    )));
                }
            }
        }
        let mut depth = vec![usize::MAX; n];
        depth[root] = 0;
        let mut stack = vec![root];
        let mut reached = 0;
        while let Some(v) = stack.pop() {
            reached += 1;
            for &c in &children[v] {
                if depth[c] != usize::MAX {
                    return Err(Error::Structure(format!("cycle through node {c}")));
                }
                depth[c] = depth[v] + 1;
                stack.push(c);
            }
        }
        if reached != n {
            return Err(Error::Structure(format!(
                "{} nodes are not reachable from the root",
                n - reached
            )));
        }
        Ok(RootedTree {
            parent,
            children,
            labels,
            depth,
            root,
        })
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    /// The root as a one-element sibling list.
    pub fn root_slice(&self) -> &[NodeId] {
        std::slice::from_ref(&self.root)
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.parent[v]
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.children[v]
    }

    pub fn label(&self, v: NodeId) -> Option<&str> {
        self.labels[v].as_deref()
    }

    pub fn depth(&self, v: NodeId) -> usize {
        self.depth[v]
    }

    pub fn is_leaf(&self, v: NodeId) -> bool {
        self.children[v].is_empty()
    }

    pub fn leaves(&self) -> Vec<NodeId> {
        self.preorder().into_iter().filter(|&v| self.is_leaf(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.children.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.children[v].iter().rev());
        }
        out
    }

    /// Children before parents, siblings left to right.
    pub fn postorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![(self.root, false)];
        while let Some((v, expanded)) = stack.pop() {
            if expanded {
                out.push(v);
            } else {
                stack.push((v, true));
                for &c in self.children[v].iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    /// `a` is an ancestor of `d` or equal to it.
    pub fn is_ancestor(&self, a: NodeId, mut d: NodeId) -> bool {
        while self.depth[d] > self.depth[a] {
            d = self.parent[d].expect("non-root has a parent");
        }
        a == d
    }

    pub fn lca_node(&self, mut a: NodeId, mut b: NodeId) -> NodeId {
        while self.depth[a] > self.depth[b] {
            a = self.parent[a].unwrap();
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b].unwrap();
        }
        while a != b {
            a = self.parent[a].unwrap();
            b = self.parent[b].unwrap();
        }
        a
    }

    /// Renumbers nodes in preorder, dropping nothing.
    pub fn canonical_order(&self) -> (RootedTree, Vec<NodeId>) {
        let order = self.preorder();
        let mut new_id = vec![0; self.len()];
        for (i, &v) in order.iter().enumerate() {
            new_id[v] = i;
        }
        let mut t = RootedTree::singleton(self.labels[self.root].clone());
        for &v in order.iter().skip(1) {
            let p = new_id[self.parent[v].unwrap()];
            t.push_child(p, self.labels[v].clone());
        }
        (t, new_id)
    }

    /// Canonicalizes a point reference into `(node below, t)`; `t` is in
    /// `[0, 1)` on an edge, and a positive `t` on the root is a ray offset.
    pub fn locate(&self, p: &PointRef) -> Result<(NodeId, f64)> {
        match *p {
            PointRef::Node(n) => {
                self.check_node(n)?;
                Ok((n, 0.0))
            }
            PointRef::Edge { child, t } => {
                self.check_node(child)?;
                if !(0.0..=1.0).contains(&t) {
                    return Err(Error::InvalidPoint(format!("edge parameter {t} outside [0,1]")));
                }
                let Some(parent) = self.parent[child] else {
                    return Err(Error::InvalidPoint(format!("node {child} is the root; it has no edge")));
                };
                if t >= 1.0 - EPS {
                    Ok((parent, 0.0))
                } else if t <= EPS {
                    Ok((child, 0.0))
                } else {
                    Ok((child, t))
                }
            }
            PointRef::Ray { offset } => {
                if offset < 0.0 || !offset.is_finite() {
                    return Err(Error::InvalidPoint(format!("ray offset {offset}")));
                }
                Ok((self.root, if offset <= EPS { 0.0 } else { offset }))
            }
        }
    }

    fn check_node(&self, n: NodeId) -> Result<()> {
        if n < self.len() {
            Ok(())
        } else {
            Err(Error::InvalidPoint(format!("node {n} does not exist")))
        }
    }

    fn point_from(&self, below: NodeId, t: f64) -> PointRef {
        if t <= EPS {
            PointRef::Node(below)
        } else if below == self.root {
            PointRef::Ray { offset: t }
        } else {
            PointRef::Edge { child: below, t }
        }
    }

    fn located_ge(&self, a: (NodeId, f64), b: (NodeId, f64)) -> bool {
        if a.0 == b.0 {
            a.1 >= b.1 - EPS
        } else {
            self.is_ancestor(a.0, b.0)
        }
    }

    /// `x` lies on the path from `y` to the root (inclusive).
    pub fn point_ge(&self, x: &PointRef, y: &PointRef) -> Result<bool> {
        Ok(self.located_ge(self.locate(x)?, self.locate(y)?))
    }

    /// Lowest common ancestor of two points of `|T|`.
    pub fn lca(&self, x: &PointRef, y: &PointRef) -> Result<PointRef> {
        let a = self.locate(x)?;
        let b = self.locate(y)?;
        let (below, t) = if self.located_ge(a, b) {
            a
        } else if self.located_ge(b, a) {
            b
        } else {
            (self.lca_node(a.0, b.0), 0.0)
        };
        Ok(self.point_from(below, t))
    }
}

/// A point of `|T|`: a node, a point inside the edge above `child`
/// (`t` runs from the child at 0 to the parent at 1), or a point on the
/// unbounded ray above the root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointRef {
    Node(NodeId),
    Edge { child: NodeId, t: f64 },
    Ray { offset: f64 },
}

/// Position in a merge tree: the point at `height` on the edge above
/// `below` (or on the root ray when `below` is the root).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pos {
    pub below: NodeId,
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MergeTree {
    tree: RootedTree,
    height: Vec<f64>,
    root_ray: bool,
}

impl MergeTree {
    pub fn new(tree: RootedTree, height: Vec<f64>, root_ray: bool) -> Result<Self> {
        if height.len() != tree.len() {
            return Err(Error::Structure("one height per node required".into()));
        }
        if let Some(v) = height.iter().position(|h| !h.is_finite()) {
            return Err(Error::Structure(format!("node {v} has a non-finite height")));
        }
        for c in 0..tree.len() {
            if let Some(p) = tree.parent(c) {
                if height[c] >= height[p] {
                    return Err(Error::Monotonicity {
                        child: c,
                        parent: p,
                        child_height: height[c],
                        parent_height: height[p],
                    });
                }
            }
        }
        Ok(MergeTree {
            tree,
            height,
            root_ray,
        })
    }

    /// A root-to-leaf path through the given heights, listed top down.
    pub fn path(heights: &[f64]) -> Result<Self> {
        let mut t = RootedTree::singleton(None);
        let mut v = 0;
        for _ in 1..heights.len() {
            v = t.push_child(v, None);
        }
        MergeTree::new(t, heights.to_vec(), true)
    }

    pub fn tree(&self) -> &RootedTree {
        &self.tree
    }

    pub fn height(&self, v: NodeId) -> f64 {
        self.height[v]
    }

    pub fn heights(&self) -> &[f64] {
        &self.height
    }

    pub fn root_ray(&self) -> bool {
        self.root_ray
    }

    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tree.is_empty()
    }

    pub fn root_height(&self) -> f64 {
        self.height[self.tree.root()]
    }

    /// Root and branching nodes; the places where walkers split.
    pub fn is_branching(&self, v: NodeId) -> bool {
        v == self.tree.root() || self.tree.children(v).len() >= 2
    }

    /// Nodes that survive suppression of degree-two vertices.
    pub fn is_essential(&self, v: NodeId) -> bool {
        self.tree.children(v).len() != 1 || v == self.tree.root()
    }

    pub fn shifted(&self, delta: f64) -> MergeTree {
        MergeTree {
            tree: self.tree.clone(),
            height: self.height.iter().map(|h| h + delta).collect(),
            root_ray: self.root_ray,
        }
    }

    /// Multiplies every height by `factor`, which must be positive.
    pub fn scaled(&self, factor: f64) -> MergeTree {
        MergeTree {
            tree: self.tree.clone(),
            height: self.height.iter().map(|h| h * factor).collect(),
            root_ray: self.root_ray,
        }
    }

    pub fn pos(&self, p: &PointRef) -> Result<Pos> {
        let (below, t) = self.tree.locate(p)?;
        let height = match self.tree.parent(below) {
            _ if t == 0.0 => self.height[below],
            Some(par) => self.height[below] + t * (self.height[par] - self.height[below]),
            None => {
                if !self.root_ray {
                    return Err(Error::InvalidPoint("ray point on a tree without root ray".into()));
                }
                self.height[below] + t
            }
        };
        Ok(Pos { below, height })
    }

    pub fn point_ref(&self, p: Pos) -> PointRef {
        let hb = self.height[p.below];
        if (p.height - hb).abs() <= EPS {
            return PointRef::Node(p.below);
        }
        match self.tree.parent(p.below) {
            Some(par) => PointRef::Edge {
                child: p.below,
                t: (p.height - hb) / (self.height[par] - hb),
            },
            None => PointRef::Ray {
                offset: p.height - hb,
            },
        }
    }

    pub fn point_height(&self, p: &PointRef) -> Result<f64> {
        Ok(self.pos(p)?.height)
    }

    pub fn node_pos(&self, v: NodeId) -> Pos {
        Pos {
            below: v,
            height: self.height[v],
        }
    }

    /// `a` lies on the root path of `b`.
    pub fn pos_ge(&self, a: Pos, b: Pos) -> bool {
        if a.height < b.height - EPS {
            return false;
        }
        if a.below == b.below {
            return true;
        }
        self.tree.is_ancestor(a.below, b.below)
    }

    pub fn pos_lca(&self, a: Pos, b: Pos) -> Pos {
        if self.pos_ge(a, b) {
            a
        } else if self.pos_ge(b, a) {
            b
        } else {
            self.node_pos(self.tree.lca_node(a.below, b.below))
        }
    }

    /// The ancestor of `p` at the given height, which must not be below `p`.
    pub fn ancestor_at_height(&self, p: Pos, height: f64) -> Result<Pos> {
        if height < p.height - EPS {
            return Err(Error::InvalidParameter(format!(
                "target height {height} below point height {}",
                p.height
            )));
        }
        let mut v = p.below;
        loop {
            match self.tree.parent(v) {
                Some(par) if self.height[par] <= height + EPS => v = par,
                Some(_) => break,
                None => {
                    if height > self.height[v] + EPS && !self.root_ray {
                        return Err(Error::AboveRoot(height));
                    }
                    break;
                }
            }
        }
        let height = if (height - self.height[v]).abs() <= EPS {
            self.height[v]
        } else {
            height
        };
        Ok(Pos { below: v, height })
    }

    /// The unique ancestor of `x` that is `delta` higher.
    pub fn ancestor_at_offset(&self, x: &PointRef, delta: f64) -> Result<PointRef> {
        if delta.is_nan() || delta < 0.0 {
            return Err(Error::InvalidParameter(format!("negative offset {delta}")));
        }
        let p = self.pos(x)?;
        Ok(self.point_ref(self.ancestor_at_height(p, p.height + delta)?))
    }

    /// Every point of the tree (root ray included) at the given height.
    pub fn positions_at(&self, height: f64) -> Vec<Pos> {
        let mut out = Vec::new();
        for v in 0..self.len() {
            let hv = self.height[v];
            let upper = match self.tree.parent(v) {
                Some(p) => self.height[p],
                None if self.root_ray => f64::INFINITY,
                None => hv + EPS,
            };
            if hv <= height + EPS && height < upper - EPS {
                let height = if (height - hv).abs() <= EPS { hv } else { height };
                out.push(Pos { below: v, height });
            }
        }
        out
    }

    /// Splits every edge at each of `levels` that falls strictly inside it.
    /// New vertices are appended after the existing ids and carry no label.
    pub fn subdivide(&self, levels: &[f64]) -> MergeTree {
        let mut levels: Vec<f64> = levels.iter().copied().filter(|h| h.is_finite()).collect();
        levels.sort_by(|a, b| b.total_cmp(a));
        levels.dedup_by(|a, b| (*a - *b).abs() <= EPS);

        let n = self.len();
        let mut parent: Vec<Option<NodeId>> = (0..n).map(|v| self.tree.parent(v)).collect();
        let mut children: Vec<Vec<NodeId>> = (0..n).map(|v| self.tree.children(v).to_vec()).collect();
        let mut labels: Vec<Option<String>> = (0..n).map(|v| self.tree.label(v).map(String::from)).collect();
        let mut height = self.height.clone();

        for c in 0..n {
            let Some(p) = self.tree.parent(c) else { continue };
            let (lo, hi) = (self.height[c], self.height[p]);
            let cuts: Vec<f64> = levels
                .iter()
                .copied()
                .filter(|&h| h > lo + EPS && h < hi - EPS)
                .collect();
            if cuts.is_empty() {
                continue;
            }
            let mut upper = p;
            let slot = children[p].iter().position(|&x| x == c).unwrap();
            for (i, &h) in cuts.iter().enumerate() {
                let id = parent.len();
                parent.push(Some(upper));
                children.push(Vec::new());
                labels.push(None);
                height.push(h);
                if i == 0 {
                    children[p][slot] = id;
                } else {
                    children[upper].push(id);
                }
                upper = id;
            }
            parent[c] = Some(upper);
            children[upper].push(c);
        }
        let tree = RootedTree::from_parts(parent, children, labels).expect("subdivision keeps a tree");
        MergeTree::new(tree, height, self.root_ray).expect("subdivision keeps monotonicity")
    }
}

/// Subdivides both trees at every node height of either tree and at those
/// heights shifted by `±eps`.
pub fn augment(t1: &MergeTree, t2: &MergeTree, eps: f64) -> (MergeTree, MergeTree) {
    let mut levels = Vec::new();
    for h in t1.heights().iter().chain(t2.heights()) {
        levels.push(*h);
        if eps > 0.0 {
            levels.push(h + eps);
            levels.push(h - eps);
        }
    }
    (t1.subdivide(&levels), t2.subdivide(&levels))
}

pub type Point2 = [f64; 2];

pub fn dist(a: Point2, b: Point2) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

pub fn polyline_length(line: &[Point2]) -> f64 {
    line.windows(2).map(|w| dist(w[0], w[1])).sum()
}

/// Samples a polyline so consecutive samples are at most `resolution`
/// apart; all original vertices are kept.
pub fn sample_polyline(line: &[Point2], resolution: f64) -> Vec<Point2> {
    let mut out = Vec::new();
    if let Some(&first) = line.first() {
        out.push(first);
    }
    for w in line.windows(2) {
        let len = dist(w[0], w[1]);
        let steps = ((len / resolution).ceil() as usize).max(1);
        for s in 1..=steps {
            let f = s as f64 / steps as f64;
            out.push([w[0][0] + f * (w[1][0] - w[0][0]), w[0][1] + f * (w[1][1] - w[0][1])]);
        }
    }
    out
}

/// A rooted tree drawn in the plane. The polyline of a non-root node runs
/// from its parent's position to its own; the root's polyline is its
/// single position.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedTree {
    tree: RootedTree,
    geometry: Vec<Vec<Point2>>,
}

impl EmbeddedTree {
    pub fn new(tree: RootedTree, geometry: Vec<Vec<Point2>>) -> Result<Self> {
        if geometry.len() != tree.len() {
            return Err(Error::Geometry("one polyline per node required".into()));
        }
        let root = tree.root();
        if geometry[root].is_empty() {
            return Err(Error::Geometry("root needs a position".into()));
        }
        for v in 0..tree.len() {
            let line = &geometry[v];
            if line.iter().flatten().any(|c| !c.is_finite()) {
                return Err(Error::Geometry(format!("node {v} has non-finite coordinates")));
            }
            let Some(p) = tree.parent(v) else { continue };
            if line.len() < 2 {
                return Err(Error::Geometry(format!("edge above {v} has fewer than two points")));
            }
            if polyline_length(line) <= EPS {
                return Err(Error::Geometry(format!("edge above {v} has zero length")));
            }
            let start = line[0];
            let anchor = *geometry[p].last().unwrap();
            if dist(start, anchor) > 1e-6 {
                return Err(Error::Geometry(format!(
                    "edge above {v} starts at {start:?} but its parent sits at {anchor:?}"
                )));
            }
        }
        Ok(EmbeddedTree { tree, geometry })
    }

    /// A path tree with a single edge along `line` (root at `line[0]`).
    pub fn from_polyline(line: Vec<Point2>) -> Result<Self> {
        let mut t = RootedTree::singleton(None);
        t.push_child(0, None);
        EmbeddedTree::new(t, vec![vec![line[0]], line])
    }

    pub fn tree(&self) -> &RootedTree {
        &self.tree
    }

    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tree.is_empty()
    }

    pub fn position(&self, v: NodeId) -> Point2 {
        *self.geometry[v].last().unwrap()
    }

    pub fn edge(&self, v: NodeId) -> &[Point2] {
        &self.geometry[v]
    }

    pub fn geometry(&self) -> &[Vec<Point2>] {
        &self.geometry
    }

    pub fn translated(&self, d: Point2) -> EmbeddedTree {
        EmbeddedTree {
            tree: self.tree.clone(),
            geometry: self
                .geometry
                .iter()
                .map(|l| l.iter().map(|p| [p[0] + d[0], p[1] + d[1]]).collect())
                .collect(),
        }
    }

    /// Coordinates of the point at arclength fraction `t` measured from
    /// the child end of the edge above `child`.
    pub fn point_on_edge(&self, child: NodeId, t: f64) -> Point2 {
        let line = &self.geometry[child];
        if line.len() < 2 {
            return line[0];
        }
        let total = polyline_length(line);
        let mut remaining = (1.0 - t) * total;
        for w in line.windows(2) {
            let len = dist(w[0], w[1]);
            if remaining <= len {
                let f = if len > 0.0 { remaining / len } else { 0.0 };
                return [w[0][0] + f * (w[1][0] - w[0][0]), w[0][1] + f * (w[1][1] - w[0][1])];
            }
            remaining -= len;
        }
        *line.last().unwrap()
    }

    pub fn coordinates(&self, p: &PointRef) -> Result<Point2> {
        match self.tree.locate(p)? {
            (v, 0.0) => Ok(self.position(v)),
            (v, _) if v == self.tree.root() => Err(Error::InvalidPoint("embedded trees have no root ray".into())),
            (v, t) => Ok(self.point_on_edge(v, t)),
        }
    }

    /// All segments of all edges.
    pub fn segments(&self) -> Vec<(Point2, Point2)> {
        let mut out = Vec::new();
        for v in 0..self.len() {
            if self.tree.parent(v).is_some() {
                for w in self.geometry[v].windows(2) {
                    out.push((w[0], w[1]));
                }
            }
        }
        out
    }

    /// Sample points covering every edge at spacing at most `resolution`,
    /// plus the root position.
    pub fn samples(&self, resolution: f64) -> Vec<Point2> {
        let mut out = vec![self.position(self.tree.root())];
        for v in 0..self.len() {
            if self.tree.parent(v).is_some() {
                out.extend(sample_polyline(&self.geometry[v], resolution).into_iter().skip(1));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cherry() -> MergeTree {
        // root 0 -> a (-1) -> leaves b (-3), c (-2)
        let mut t = RootedTree::singleton(Some("r".into()));
        let a = t.push_child(0, None);
        t.push_child(a, Some("b".into()));
        t.push_child(a, Some("c".into()));
        MergeTree::new(t, vec![0.0, -1.0, -3.0, -2.0], true).unwrap()
    }

    #[test]
    fn monotonicity_is_enforced() {
        let mut t = RootedTree::singleton(None);
        t.push_child(0, None);
        let err = MergeTree::new(t, vec![0.0, 5.0], true).unwrap_err();
        assert!(matches!(err, Error::Monotonicity { child: 1, parent: 0, .. }));
    }

    #[test]
    fn from_parts_rejects_bad_structure() {
        assert!(RootedTree::from_parts(vec![None, None], vec![vec![], vec![]], vec![None, None]).is_err());
        // 1 and 2 point at each other, 0 is a lone root
        let e = RootedTree::from_parts(
            vec![None, Some(2), Some(1)],
            vec![vec![], vec![2], vec![1]],
            vec![None, None, None],
        );
        assert!(e.is_err());
        let dup = RootedTree::from_parts(vec![None, Some(0)], vec![vec![1, 1], vec![]], vec![None, None]);
        assert!(dup.is_err());
    }

    #[test]
    fn lca_basics() {
        let m = cherry();
        let t = m.tree();
        let b = PointRef::Node(2);
        assert_eq!(t.lca(&b, &b).unwrap(), b);
        assert_eq!(t.lca(&PointRef::Node(2), &PointRef::Node(3)).unwrap(), PointRef::Node(1));
        let mid = PointRef::Edge { child: 2, t: 0.5 };
        assert_eq!(t.lca(&mid, &PointRef::Node(2)).unwrap(), mid);
        assert_eq!(
            t.lca(&PointRef::Ray { offset: 2.0 }, &mid).unwrap(),
            PointRef::Ray { offset: 2.0 }
        );
        assert!(t.lca(&PointRef::Node(9), &b).is_err());
    }

    #[test]
    fn ancestor_offsets() {
        let m = MergeTree::path(&[0.0, -3.0]).unwrap();
        let leaf = PointRef::Node(1);
        assert_eq!(m.ancestor_at_offset(&leaf, 0.0).unwrap(), leaf);
        assert_eq!(m.ancestor_at_offset(&leaf, 3.0).unwrap(), PointRef::Node(0));
        assert_eq!(
            m.ancestor_at_offset(&leaf, 1.5).unwrap(),
            PointRef::Edge { child: 1, t: 0.5 }
        );
        assert_eq!(m.ancestor_at_offset(&leaf, 5.0).unwrap(), PointRef::Ray { offset: 2.0 });

        let mut t = RootedTree::singleton(None);
        t.push_child(0, None);
        let closed = MergeTree::new(t, vec![0.0, -3.0], false).unwrap();
        assert_eq!(closed.ancestor_at_offset(&leaf, 4.0), Err(Error::AboveRoot(1.0)));
    }

    #[test]
    fn subdivision_places_new_vertices() {
        // Single edge from 0 (leaf) up to 10 (root).
        let edge = MergeTree::path(&[10.0, 0.0]).unwrap();
        let other = MergeTree::path(&[7.0, 3.0]).unwrap();
        let (a, _) = augment(&edge, &other, 1.0);
        let mut hs: Vec<f64> = a.heights()[2..].to_vec();
        hs.sort_by(f64::total_cmp);
        assert_eq!(hs, vec![1.0, 2.0, 3.0, 4.0, 6.0, 7.0, 8.0, 9.0]);

        let (same, _) = augment(&edge, &MergeTree::path(&[10.0, 0.0]).unwrap(), 0.0);
        assert_eq!(same.len(), 2);
    }

    #[test]
    fn embedded_geometry_is_validated() {
        let mut t = RootedTree::singleton(None);
        t.push_child(0, None);
        let bad = EmbeddedTree::new(t.clone(), vec![vec![[0.0, 0.0]], vec![[1.0, 0.0], [2.0, 0.0]]]);
        assert!(bad.is_err());
        let zero = EmbeddedTree::new(t.clone(), vec![vec![[0.0, 0.0]], vec![[0.0, 0.0], [0.0, 0.0]]]);
        assert!(zero.is_err());
        let ok = EmbeddedTree::new(t, vec![vec![[0.0, 0.0]], vec![[0.0, 0.0], [0.0, 2.0]]]).unwrap();
        assert_eq!(ok.point_on_edge(1, 0.25), [0.0, 1.5]);
    }
}
