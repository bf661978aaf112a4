//! Exhaustive search over subsets of the grid product.
//!
//! Every pair with cost at most eps is a boolean variable. The four
//! conditions become constraints of the form "if all of `when` hold then
//! one of the conjunctions in `then` holds", which a small DPLL search with
//! unit propagation decides. The search is independent of the branch-plan
//! search and serves as its oracle.

use std::collections::HashMap;

use super::decide::Pair;

struct Constraint {
    when: Vec<usize>,
    then: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Val {
    Free,
    True,
    False,
}

enum State {
    Satisfied,
    Conflict,
    Open,
}

struct Solver {
    cons: Vec<Constraint>,
    watch: Vec<Vec<usize>>,
    val: Vec<Val>,
}

impl Solver {
    fn state(&self, c: &Constraint) -> (State, Option<(bool, Vec<usize>)>) {
        let mut free_when = Vec::new();
        for &w in &c.when {
            match self.val[w] {
                Val::False => return (State::Satisfied, None),
                Val::Free => free_when.push(w),
                Val::True => {}
            }
        }
        let mut open_terms = Vec::new();
        for (i, t) in c.then.iter().enumerate() {
            if t.iter().any(|&v| self.val[v] == Val::False) {
                continue;
            }
            if t.iter().all(|&v| self.val[v] == Val::True) {
                return (State::Satisfied, None);
            }
            open_terms.push(i);
        }
        match (free_when.len(), open_terms.len()) {
            (0, 0) => (State::Conflict, None),
            (0, 1) => (State::Open, Some((true, c.then[open_terms[0]].clone()))),
            (1, 0) => (State::Open, Some((false, free_when))),
            _ => (State::Open, None),
        }
    }

    /// Applies forced assignments; records every change on `trail`.
    fn propagate(&mut self, mut queue: Vec<usize>, trail: &mut Vec<usize>) -> bool {
        while let Some(var) = queue.pop() {
            for ci in self.watch[var].clone() {
                let (st, forced) = self.state(&self.cons[ci]);
                if let State::Conflict = st {
                    return false;
                }
                if let Some((value, vars)) = forced {
                    for v in vars {
                        let want = if value { Val::True } else { Val::False };
                        match self.val[v] {
                            Val::Free => {
                                self.val[v] = want;
                                trail.push(v);
                                queue.push(v);
                            }
                            x if x != want => return false,
                            _ => {}
                        }
                    }
                }
            }
        }
        true
    }

    fn search(&mut self) -> bool {
        // branch on a free variable of the first unsatisfied constraint
        let mut pick = None;
        for c in &self.cons {
            if let (State::Open, _) = self.state(c) {
                pick = c.when.iter().chain(c.then.iter().flatten()).copied().find(|&v| self.val[v] == Val::Free);
                if pick.is_some() {
                    break;
                }
            }
        }
        let Some(var) = pick else {
            return true;
        };
        for value in [Val::True, Val::False] {
            let mut trail = vec![var];
            self.val[var] = value;
            if self.propagate(vec![var], &mut trail) && self.search() {
                return true;
            }
            for v in trail {
                self.val[v] = Val::Free;
            }
        }
        false
    }
}

/// Whether some subset of admissible pairs satisfies all conditions.
pub(crate) fn satisfiable(p: &Pair, eps: f64) -> bool {
    let (g1, g2) = (&p.g1, &p.g2);
    let eps = eps + 1e-9;
    let mut var: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pairs = Vec::new();
    for x in 0..g1.len() {
        for y in 0..g2.len() {
            if p.cost(x, y) <= eps {
                var.insert((x, y), pairs.len());
                pairs.push((x, y));
            }
        }
    }
    let id = |x: usize, y: usize| var.get(&(x, y)).copied();
    let mut cons = Vec::new();
    for x in 0..g1.len() {
        let then = (0..g2.len()).filter_map(|y| id(x, y)).map(|v| vec![v]).collect();
        cons.push(Constraint { when: vec![], then });
    }
    for y in 0..g2.len() {
        let then = (0..g1.len()).filter_map(|x| id(x, y)).map(|v| vec![v]).collect();
        cons.push(Constraint { when: vec![], then });
    }
    for x in g1.leaves() {
        for (y, v) in (0..g2.len()).filter_map(|y| id(x, y).map(|v| (y, v))) {
            if g2.is_leaf(y) {
                continue;
            }
            // x paired with a non-leaf: need a leaf partner or a shared partner with the anchor
            let mut then: Vec<Vec<usize>> = (0..g2.len()).filter(|&w| g2.is_leaf(w)).filter_map(|w| id(x, w)).map(|w| vec![w]).collect();
            if let Some(a) = g1.anchor[x] {
                then.extend((0..g2.len()).filter_map(|w| Some(vec![id(x, w)?, id(a, w)?])));
            }
            cons.push(Constraint { when: vec![v], then });
        }
    }
    for y in g2.leaves() {
        for (x, v) in (0..g1.len()).filter_map(|x| id(x, y).map(|v| (x, v))) {
            if g1.is_leaf(x) {
                continue;
            }
            let mut then: Vec<Vec<usize>> = (0..g1.len()).filter(|&w| g1.is_leaf(w)).filter_map(|w| id(w, y)).map(|w| vec![w]).collect();
            if let Some(a) = g2.anchor[y] {
                then.extend((0..g1.len()).filter_map(|w| Some(vec![id(w, y)?, id(w, a)?])));
            }
            cons.push(Constraint { when: vec![v], then });
        }
    }
    for (i, &(x1, y1)) in pairs.iter().enumerate() {
        for (j, &(x2, y2)) in pairs.iter().enumerate().skip(i + 1) {
            let when = vec![i, j];
            if super::check::reversed(p, (x1, y1), (x2, y2)) {
                cons.push(Constraint { when, then: vec![] });
                continue;
            }
            let lca = id(g1.lca(x1, x2), g2.lca(y1, y2));
            cons.push(Constraint {
                when: when.clone(),
                then: lca.map(|l| vec![vec![l]]).unwrap_or_default(),
            });
            for ((a1, b1), (a2, b2)) in [((x1, y1), (x2, y2)), ((x2, y2), (x1, y1))] {
                if !(g1.ge(a2, a1) && g2.ge(b2, b1)) {
                    continue;
                }
                let path1 = g1.path(a1, a2);
                let path2 = g2.path(b1, b2);
                for &x in &path1 {
                    let then = path2.iter().filter_map(|&y| id(x, y)).map(|v| vec![v]).collect();
                    cons.push(Constraint { when: when.clone(), then });
                }
                for &y in &path2 {
                    let then = path1.iter().filter_map(|&x| id(x, y)).map(|v| vec![v]).collect();
                    cons.push(Constraint { when: when.clone(), then });
                }
            }
        }
    }
    let mut watch = vec![Vec::new(); pairs.len()];
    for (ci, c) in cons.iter().enumerate() {
        let mut vs: Vec<usize> = c.when.iter().chain(c.then.iter().flatten()).copied().collect();
        vs.sort_unstable();
        vs.dedup();
        for v in vs {
            watch[v].push(ci);
        }
    }
    let mut s = Solver {
        cons,
        watch,
        val: vec![Val::Free; pairs.len()],
    };
    // constraints without a `when` part may already be unit or empty
    let mut trail = Vec::new();
    for ci in 0..s.cons.len() {
        if !s.cons[ci].when.is_empty() {
            continue;
        }
        match s.state(&s.cons[ci]) {
            (State::Conflict, _) => return false,
            (_, Some((true, vars))) => {
                for v in vars {
                    if s.val[v] == Val::Free {
                        s.val[v] = Val::True;
                        trail.push(v);
                        if !s.propagate(vec![v], &mut trail) {
                            return false;
                        }
                    }
                }
            }
            _ => {}
        }
    }
    s.search()
}
