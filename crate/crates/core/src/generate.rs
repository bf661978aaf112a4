//! Seeded random instances and fixed fixtures.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::tree::{EmbeddedTree, MergeTree, Point2, RootedTree};

pub type InstanceRng = ChaCha8Rng;

pub fn rng(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random merge tree with `1..=leaves` leaves, integer heights and the
/// root at height 0. Components merge two at a time, occasionally three.
pub fn random_merge_tree(rng: &mut InstanceRng, leaves: usize) -> MergeTree {
    let n = rng.gen_range(1..=leaves.max(1));
    merge_tree_with_leaves(rng, n)
}

/// Random merge tree with exactly `leaves` leaves (at least one), built
/// the same way as [`random_merge_tree`].
pub fn merge_tree_with_leaves(rng: &mut InstanceRng, leaves: usize) -> MergeTree {
    let n = leaves.max(1);
    let mut parent: Vec<Option<usize>> = Vec::new();
    let mut height: Vec<i64> = Vec::new();
    // (top node, top height) of every component
    let mut tops: Vec<(usize, i64)> = Vec::new();
    for _ in 0..n {
        parent.push(None);
        let h = -rng.gen_range(0..=4);
        height.push(h);
        tops.push((parent.len() - 1, h));
    }
    while tops.len() > 1 {
        tops.shuffle(rng);
        let k = if tops.len() >= 3 && rng.gen_bool(0.2) { 3 } else { 2 };
        let group: Vec<(usize, i64)> = tops.drain(..k).collect();
        let h = group.iter().map(|g| g.1).max().unwrap() + rng.gen_range(1..=2);
        parent.push(None);
        height.push(h);
        let id = parent.len() - 1;
        for (c, _) in group {
            parent[c] = Some(id);
        }
        tops.push((id, h));
    }
    let (mut root, top) = tops[0];
    if n == 1 || rng.gen_bool(0.5) {
        // a trunk above the last merge
        parent.push(None);
        height.push(top + rng.gen_range(1..=2));
        parent[root] = Some(parent.len() - 1);
        root = parent.len() - 1;
    }
    let shift = height[root];
    let mut children = vec![Vec::new(); parent.len()];
    for (v, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            children[*p].push(v);
        }
    }
    let t = RootedTree::from_parts(parent, children, vec![None; height.len()]).expect("generated structure is a tree");
    let (t, ids) = t.canonical_order();
    let mut h = vec![0.0; height.len()];
    for (old, &new) in ids.iter().enumerate() {
        h[new] = (height[old] - shift) as f64;
    }
    MergeTree::new(t, h, true).expect("generated heights increase toward the root")
}

/// Random ordered tree with `nodes` nodes labeled from the first
/// `alphabet` lowercase letters.
pub fn random_labeled_tree(rng: &mut InstanceRng, nodes: usize, alphabet: u8) -> RootedTree {
    let letter = |rng: &mut InstanceRng| Some(((b'a' + rng.gen_range(0..alphabet.max(1))) as char).to_string());
    let mut t = RootedTree::singleton(letter(rng));
    for i in 1..nodes.max(1) {
        let p = rng.gen_range(0..i);
        let l = letter(rng);
        t.push_child(p, l);
    }
    t.canonical_order().0
}

/// Random polyline through `vertices` points with coordinates drawn from
/// `[-span, span]`, as a single-leaf tree rooted at its first point.
pub fn random_path_tree(rng: &mut InstanceRng, vertices: usize, span: f64) -> EmbeddedTree {
    let mut line: Vec<Point2> = Vec::new();
    while line.len() < vertices.max(2) {
        let p = [rng.gen_range(-span..=span), rng.gen_range(-span..=span)];
        if line.last().is_none_or(|q: &Point2| crate::tree::dist(*q, p) > 1e-3) {
            line.push(p);
        }
    }
    EmbeddedTree::from_polyline(line).expect("consecutive points are distinct")
}

/// Random plane tree drawn from a random merge tree: leaves are spread
/// along the x axis with jitter, inner nodes sit above the mean of their
/// children, and heights become y coordinates.
pub fn random_embedded_tree(rng: &mut InstanceRng, leaves: usize) -> EmbeddedTree {
    let m = random_merge_tree(rng, leaves);
    let t = m.tree().clone();
    let mut x = vec![0.0; t.len()];
    let mut next = 0.0;
    for v in t.postorder() {
        if t.is_leaf(v) {
            x[v] = next + rng.gen_range(-0.3..=0.3);
            next += 1.0;
        } else {
            let c = t.children(v);
            x[v] = c.iter().map(|&w| x[w]).sum::<f64>() / c.len() as f64 + rng.gen_range(-0.2..=0.2);
        }
    }
    let at = |v: usize| -> Point2 { [x[v], m.height(v)] };
    let geometry = (0..t.len())
        .map(|v| match t.parent(v) {
            Some(p) => vec![at(p), at(v)],
            None => vec![at(v)],
        })
        .collect();
    EmbeddedTree::new(t, geometry).expect("edges join parent and child positions")
}

/// A comb: a horizontal spine from `(0, 0)` to `(teeth + 1, 0)` with
/// vertical teeth of length `tooth` at `x = i + offset`, rooted at the left
/// end. The mirrored comb is reflected about `x = (teeth + 1) / 2`, so it
/// is rooted at the right end and its teeth sit at `x = i - offset`.
pub fn comb(teeth: usize, tooth: f64, offset: f64, mirrored: bool) -> EmbeddedTree {
    let len = (teeth + 1) as f64;
    let fx = |x: f64| if mirrored { len - x } else { x };
    let mut t = RootedTree::singleton(None);
    let mut geometry: Vec<Vec<Point2>> = vec![vec![[fx(0.0), 0.0]]];
    let mut spine = 0;
    let mut last = 0.0;
    for i in 1..=teeth {
        let x = i as f64 + offset;
        let joint = t.push_child(spine, None);
        geometry.push(vec![[fx(last), 0.0], [fx(x), 0.0]]);
        let tip = t.push_child(joint, None);
        geometry.push(vec![[fx(x), 0.0], [fx(x), tooth]]);
        debug_assert_eq!(tip + 1, geometry.len());
        spine = joint;
        last = x;
    }
    t.push_child(spine, None);
    geometry.push(vec![[fx(last), 0.0], [fx(len), 0.0]]);
    EmbeddedTree::new(t, geometry).expect("comb geometry is connected")
}
