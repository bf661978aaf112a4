//! Memoized search for a correspondence of bounded cost.
//!
//! A state pairs a grid vertex `x` of the first tree with a vertex `y` of
//! the second, together with the child branches of each that are still to
//! be covered. Branches are grouped into a plan: a branch is matched with a
//! branch on the other side (both walkers step down, or one waits), one
//! branch is matched with several (the waiting walker watches them all), or
//! a branch is absorbed entirely by the waiting point. Children with
//! identical subtrees are interchangeable, so branch sets are multisets of
//! subtree classes.
//!
//! The flags record whether the nearest essential ancestor of the current
//! point is already paired with the current point on the other side, which
//! lets a leaf stop at a non-leaf.

use std::collections::{BTreeSet, HashMap};

use super::grid::Grid;

pub(crate) struct Pair {
    pub g1: Grid,
    pub g2: Grid,
    pub euclidean: bool,
}

impl Pair {
    pub fn cost(&self, x: usize, y: usize) -> f64 {
        if self.euclidean {
            crate::tree::dist(self.g1.pos[x], self.g2.pos[y])
        } else {
            (self.g1.height[x] - self.g2.height[y]).abs()
        }
    }

    /// Every distinct pair cost, ascending.
    pub fn candidates(&self) -> Vec<f64> {
        let mut c: Vec<f64> = (0..self.g1.len())
            .flat_map(|x| (0..self.g2.len()).map(move |y| (x, y)))
            .map(|(x, y)| self.cost(x, y))
            .collect();
        c.sort_by(f64::total_cmp);
        c.dedup();
        c
    }

}

/// Multiset of subtree classes as sorted `(class, count)` entries.
type Ms = Vec<(u32, u32)>;

fn ms_of(g: &Grid, kids: &[usize]) -> Ms {
    let mut m: Ms = Vec::new();
    let mut cs: Vec<u32> = kids.iter().map(|&k| g.class[k]).collect();
    cs.sort_unstable();
    for c in cs {
        match m.last_mut() {
            Some((lc, n)) if *lc == c => *n += 1,
            _ => m.push((c, 1)),
        }
    }
    m
}

fn ms_single(c: u32) -> Ms {
    vec![(c, 1)]
}

fn ms_len(m: &Ms) -> u32 {
    m.iter().map(|e| e.1).sum()
}

fn ms_minus(a: &Ms, b: &Ms) -> Ms {
    a.iter()
        .filter_map(|&(c, n)| {
            let k = b.iter().find(|e| e.0 == c).map_or(0, |e| e.1);
            (n > k).then_some((c, n - k))
        })
        .collect()
}

fn ms_plus(a: &Ms, b: &Ms) -> Ms {
    let mut all: Vec<(u32, u32)> = a.iter().chain(b).copied().collect();
    all.sort_unstable();
    let mut m: Ms = Vec::new();
    for (c, n) in all {
        match m.last_mut() {
            Some((lc, k)) if *lc == c => *k += n,
            _ => m.push((c, n)),
        }
    }
    m
}

/// All sub-multisets, including the empty one and `m` itself.
fn sub_multisets(m: &Ms) -> Vec<Ms> {
    let mut out: Vec<Ms> = vec![Vec::new()];
    for &(c, n) in m {
        let mut next = Vec::new();
        for s in &out {
            for k in 0..=n {
                let mut t = s.clone();
                if k > 0 {
                    t.push((c, k));
                }
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// Concrete children matching a multiset, taken from `pool`.
fn take(g: &Grid, pool: &mut Vec<usize>, m: &Ms) -> Vec<usize> {
    let mut out = Vec::new();
    for &(c, n) in m {
        for _ in 0..n {
            let i = pool.iter().position(|&v| g.class[v] == c).expect("multiset drawn from pool");
            out.push(pool.remove(i));
        }
    }
    out
}

/// Which walker a plan lets move while the other waits. Mixing both
/// within one plan would pair `x` with a point below `y` and a point below
/// `x` with `y`, which reverses the order of the two pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Mode {
    Free,
    XMoves,
    YMoves,
}

impl Mode {
    fn allows(self, m: Mode) -> bool {
        self == Mode::Free || self == m
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Key {
    mode: Mode,
    x: usize,
    sx: Ms,
    y: usize,
    sy: Ms,
    fx: bool,
    fy: bool,
}

/// One step of a plan, in the order they are tried.
#[derive(Clone, Debug)]
enum Step {
    AbsorbAllY,
    AbsorbAllX,
    Both { cy: u32 },
    XOnly { cy: u32 },
    YOnly { cy: u32 },
    ManyX { extra: Ms, cy: u32 },
    ManyY { ys: Ms },
    AbsorbX,
}

impl Step {
    fn mode(&self, current: Mode) -> Mode {
        match self {
            Step::Both { .. } => current,
            Step::XOnly { .. } | Step::ManyY { .. } | Step::AbsorbX | Step::AbsorbAllX => Mode::XMoves,
            Step::YOnly { .. } | Step::ManyX { .. } | Step::AbsorbAllY => Mode::YMoves,
        }
    }
}

pub(crate) struct Decider<'a> {
    p: &'a Pair,
    eps: f64,
    memo: HashMap<Key, bool>,
    absorb: HashMap<(bool, usize, usize), bool>,
    span: [Vec<(f64, f64)>; 2],
}

impl<'a> Decider<'a> {
    pub fn new(p: &'a Pair, eps: f64) -> Self {
        Decider {
            p,
            eps: eps + 1e-9,
            memo: HashMap::new(),
            absorb: HashMap::new(),
            span: [height_span(&p.g1), height_span(&p.g2)],
        }
    }

    fn child(g: &Grid, v: usize, c: u32) -> usize {
        *g.children[v].iter().find(|&&k| g.class[k] == c).expect("class occurs among children")
    }

    pub fn accepts(&mut self) -> bool {
        let (g1, g2) = (&self.p.g1, &self.p.g2);
        let (r1, r2) = (g1.root, g2.root);
        self.feasible(r1, ms_of(g1, &g1.children[r1]), r2, ms_of(g2, &g2.children[r2]), false, false)
    }

    fn feasible(&mut self, x: usize, sx: Ms, y: usize, sy: Ms, fx: bool, fy: bool) -> bool {
        if self.p.cost(x, y) > self.eps {
            return false;
        }
        if sx.is_empty() && sy.is_empty() {
            let (l1, l2) = (self.p.g1.is_leaf(x), self.p.g2.is_leaf(y));
            return (!l1 || l2 || fx) && (!l2 || l1 || fy);
        }
        self.plan(x, sx, y, sy, fx, fy, Mode::Free)
    }

    #[allow(clippy::too_many_arguments)]
    fn plan(&mut self, x: usize, sx: Ms, y: usize, sy: Ms, fx: bool, fy: bool, mode: Mode) -> bool {
        let key = Key { mode, x, sx, y, sy, fx, fy };
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let v = self.first_step(x, &key.sx, y, &key.sy, fx, fy, mode).is_some();
        self.memo.insert(key, v);
        v
    }

    /// The first plan step that leads to a feasible completion.
    #[allow(clippy::too_many_arguments)]
    fn first_step(&mut self, x: usize, sx: &Ms, y: usize, sy: &Ms, fx: bool, fy: bool, mode: Mode) -> Option<Step> {
        let (g1, g2) = (&self.p.g1, &self.p.g2);
        if sx.is_empty() && sy.is_empty() {
            return Some(Step::AbsorbAllX);
        }
        if sx.is_empty() {
            let ok = mode.allows(Mode::YMoves) && sy.iter().all(|&(c, _)| self.absorbs(false, x, Self::child(g2, y, c), fy));
            return ok.then_some(Step::AbsorbAllY);
        }
        if sy.is_empty() {
            let ok = mode.allows(Mode::XMoves) && sx.iter().all(|&(c, _)| self.absorbs(true, y, Self::child(g1, x, c), fx));
            return ok.then_some(Step::AbsorbAllX);
        }
        let cx = sx[0].0;
        let xc = Self::child(g1, x, cx);
        let rx1 = ms_minus(sx, &ms_single(cx));
        let (ex, ey) = (g1.essential[x], g2.essential[y]);
        for &(cy, _) in sy {
            let yc = Self::child(g2, y, cy);
            let ry1 = ms_minus(sy, &ms_single(cy));
            let full_x = ms_of(g1, &g1.children[xc]);
            let full_y = ms_of(g2, &g2.children[yc]);
            if self.feasible(xc, full_x.clone(), yc, full_y.clone(), false, false) && self.plan(x, rx1.clone(), y, ry1.clone(), fx, fy, mode) {
                return Some(Step::Both { cy });
            }
            if mode.allows(Mode::XMoves)
                && self.feasible(xc, full_x, y, ms_single(cy), ex || fx, false)
                && self.plan(x, rx1.clone(), y, ry1.clone(), fx, fy, Mode::XMoves)
            {
                return Some(Step::XOnly { cy });
            }
            if mode.allows(Mode::YMoves)
                && self.feasible(x, ms_single(cx), yc, full_y, false, ey || fy)
                && self.plan(x, rx1.clone(), y, ry1, fx, fy, Mode::YMoves)
            {
                return Some(Step::YOnly { cy });
            }
        }
        for extra in sub_multisets(&rx1) {
            if extra.is_empty() || !mode.allows(Mode::YMoves) {
                continue;
            }
            let group = ms_plus(&ms_single(cx), &extra);
            let rest = ms_minus(&rx1, &extra);
            for &(cy, _) in sy {
                let yc = Self::child(g2, y, cy);
                let full_y = ms_of(g2, &g2.children[yc]);
                if self.feasible(x, group.clone(), yc, full_y, false, ey || fy)
                    && self.plan(x, rest.clone(), y, ms_minus(sy, &ms_single(cy)), fx, fy, Mode::YMoves)
                {
                    return Some(Step::ManyX { extra, cy });
                }
            }
        }
        for ys in sub_multisets(sy) {
            if ms_len(&ys) < 2 || !mode.allows(Mode::XMoves) {
                continue;
            }
            let full_x = ms_of(g1, &g1.children[xc]);
            if self.feasible(xc, full_x, y, ys.clone(), ex || fx, false) && self.plan(x, rx1.clone(), y, ms_minus(sy, &ys), fx, fy, Mode::XMoves) {
                return Some(Step::ManyY { ys });
            }
        }
        if mode.allows(Mode::XMoves) && self.absorbs(true, y, xc, fx) && self.plan(x, rx1, y, sy.clone(), fx, fy, Mode::XMoves) {
            return Some(Step::AbsorbX);
        }
        None
    }

    /// Whether the branch below `c` (first tree if `first`) can be paired
    /// entirely with the single point `w` of the other tree.
    fn absorbs(&mut self, first: bool, w: usize, c: usize, flag: bool) -> bool {
        let (g, other) = if first { (&self.p.g1, &self.p.g2) } else { (&self.p.g2, &self.p.g1) };
        let parent = g.parent[c].expect("branch root has a parent");
        let leaves_ok = other.is_leaf(w) || g.essential[parent] || flag || g.anchored_within[c];
        if !leaves_ok {
            return false;
        }
        if let Some(&v) = self.absorb.get(&(first, w, c)) {
            return v;
        }
        let v = if self.p.euclidean {
            let pw = other.pos[w];
            g.subtree(c).iter().all(|&u| crate::tree::dist(g.pos[u], pw) <= self.eps)
        } else {
            let (lo, hi) = self.span[usize::from(!first)][c];
            let h = other.height[w];
            (h - lo).abs() <= self.eps && (h - hi).abs() <= self.eps
        };
        self.absorb.insert((first, w, c), v);
        v
    }

    /// Pairs of a correspondence realizing an accepted search.
    pub fn witness(&mut self) -> Option<BTreeSet<(usize, usize)>> {
        if !self.accepts() {
            return None;
        }
        let (g1, g2) = (&self.p.g1, &self.p.g2);
        let mut out = BTreeSet::new();
        self.emit(g1.root, g1.children[g1.root].clone(), g2.root, g2.children[g2.root].clone(), false, false, &mut out);
        Some(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn emit(&mut self, x: usize, kx: Vec<usize>, y: usize, ky: Vec<usize>, fx: bool, fy: bool, out: &mut BTreeSet<(usize, usize)>) {
        out.insert((x, y));
        self.emit_plan(x, kx, y, ky, fx, fy, Mode::Free, out);
    }

    #[allow(clippy::too_many_arguments)]
    fn emit_plan(&mut self, x: usize, mut kx: Vec<usize>, y: usize, mut ky: Vec<usize>, fx: bool, fy: bool, mode: Mode, out: &mut BTreeSet<(usize, usize)>) {
        let p = self.p;
        let (g1, g2) = (&p.g1, &p.g2);
        let sx = ms_of(g1, &kx);
        let sy = ms_of(g2, &ky);
        let step = self.first_step(x, &sx, y, &sy, fx, fy, mode).expect("replaying a feasible plan");
        let (ex, ey) = (g1.essential[x], g2.essential[y]);
        let next = step.mode(mode);
        match step {
            Step::AbsorbAllY => {
                for c in ky {
                    out.extend(g2.subtree(c).into_iter().map(|v| (x, v)));
                }
                return;
            }
            Step::AbsorbAllX => {
                for c in kx {
                    out.extend(g1.subtree(c).into_iter().map(|u| (u, y)));
                }
                return;
            }
            _ => {}
        }
        let cx = sx[0].0;
        let xc = take(g1, &mut kx, &ms_single(cx))[0];
        match step {
            Step::Both { cy } => {
                let yc = take(g2, &mut ky, &ms_single(cy))[0];
                self.emit(xc, g1.children[xc].clone(), yc, g2.children[yc].clone(), false, false, out);
            }
            Step::XOnly { cy } => {
                let yc = take(g2, &mut ky, &ms_single(cy))[0];
                self.emit(xc, g1.children[xc].clone(), y, vec![yc], ex || fx, false, out);
            }
            Step::YOnly { cy } => {
                let yc = take(g2, &mut ky, &ms_single(cy))[0];
                self.emit(x, vec![xc], yc, g2.children[yc].clone(), false, ey || fy, out);
            }
            Step::ManyX { extra, cy } => {
                let mut group = vec![xc];
                group.extend(take(g1, &mut kx, &extra));
                let yc = take(g2, &mut ky, &ms_single(cy))[0];
                self.emit(x, group, yc, g2.children[yc].clone(), false, ey || fy, out);
            }
            Step::ManyY { ys } => {
                let group = take(g2, &mut ky, &ys);
                self.emit(xc, g1.children[xc].clone(), y, group, ex || fx, false, out);
            }
            Step::AbsorbX => {
                out.extend(g1.subtree(xc).into_iter().map(|u| (u, y)));
            }
            Step::AbsorbAllX | Step::AbsorbAllY => unreachable!(),
        }
        if !kx.is_empty() || !ky.is_empty() {
            self.emit_plan(x, kx, y, ky, fx, fy, next, out);
        }
    }
}

/// Lowest and highest height in every subtree.
fn height_span(g: &Grid) -> Vec<(f64, f64)> {
    let mut span: Vec<(f64, f64)> = g.height.iter().map(|&h| (h, h)).collect();
    let mut order = g.subtree(g.root);
    order.reverse();
    for v in order {
        if let Some(p) = g.parent[v] {
            span[p].0 = span[p].0.min(span[v].0);
            span[p].1 = span[p].1.max(span[v].1);
        }
    }
    span
}
