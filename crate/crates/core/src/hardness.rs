//! Equal-sum partition instances and the merge-tree gadgets built from them.
//!
//! Gadget layout, with `H = -B`:
//!
//! * `T1`: root at 0, hub at `H`, one node `u_i` at `H - 2` per element,
//!   and `a_i` leaves under `u_i` at `H - 2 - A`.
//! * `T2`: root at 0, hub at `H + 1`, one node `v_j` at `H - 1` per part,
//!   and `S = ceil(sum / k)` leaves under `v_j` at `H - 2 - A`.
//!
//! Grouping the elements of a partition under their part gives a
//! correspondence of cost 1. Leaves must pair bijectively at any cost
//! below `A - 3`, and spreading the leaves of one `u_i` over two parts puts
//! `(u_i, hub of T2)` into the relation at cost 3.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frechet_like::{fl_distance, FLQuery, TreePair};
use crate::tree::{MergeTree, RootedTree};

/// Largest multiset accepted by [`solve_partition`].
pub const MAX_PARTITION_SIZE: usize = 15;

/// Height range of the hub-level structure of a gadget. `A` and `B` must
/// exceed three times this span.
pub const GADGET_SPAN: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionInstance {
    #[serde(rename = "X")]
    pub values: Vec<u64>,
    pub k: usize,
    /// Require `|X| = 3k`.
    #[serde(default)]
    pub strict: bool,
}

impl PartitionInstance {
    pub fn new(values: Vec<u64>, k: usize, strict: bool) -> Result<Self> {
        let p = PartitionInstance { values, k, strict };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.values.is_empty() {
            return bad("X must not be empty".into());
        }
        if self.values.contains(&0) {
            return bad("elements of X must be positive".into());
        }
        if self.k == 0 {
            return bad("k must be positive".into());
        }
        if self.strict && self.values.len() != 3 * self.k {
            return bad(format!("strict mode needs |X| = 3k, got |X| = {} and k = {}", self.values.len(), self.k));
        }
        if self.values.len() < self.k {
            return bad(format!("|X| = {} is smaller than k = {}", self.values.len(), self.k));
        }
        Ok(())
    }

    pub fn total(&self) -> u64 {
        self.values.iter().sum()
    }

    /// Leaves per part in the gadget: the target sum rounded up.
    pub fn part_size(&self) -> u64 {
        self.total().div_ceil(self.k as u64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionWitness {
    pub parts: Vec<Vec<u64>>,
    pub sums: Vec<u64>,
}

impl PartitionWitness {
    /// Whether the parts cover `p.values` exactly and all sums are equal.
    pub fn is_valid_for(&self, p: &PartitionInstance) -> bool {
        if self.parts.len() != p.k || self.sums.len() != p.k {
            return false;
        }
        let mut used: Vec<u64> = self.parts.iter().flatten().copied().collect();
        let mut all = p.values.clone();
        used.sort_unstable();
        all.sort_unstable();
        let target = p.total() / p.k as u64;
        used == all
            && p.total().is_multiple_of(p.k as u64)
            && self.parts.iter().zip(&self.sums).all(|(part, &s)| part.iter().sum::<u64>() == s && s == target)
    }
}

/// Exhaustive search for a split of `X` into `k` parts of equal sum.
pub fn solve_partition(p: &PartitionInstance) -> Result<Option<PartitionWitness>> {
    p.validate()?;
    if p.values.len() > MAX_PARTITION_SIZE {
        return Err(Error::TooLarge(format!("|X| = {} exceeds {MAX_PARTITION_SIZE}", p.values.len())));
    }
    let k = p.k as u64;
    if !p.total().is_multiple_of(k) {
        return Ok(None);
    }
    let target = p.total() / k;
    let mut values = p.values.clone();
    values.sort_unstable_by(|a, b| b.cmp(a));
    if values[0] > target {
        return Ok(None);
    }
    let mut bins = vec![0u64; p.k];
    let mut assign = vec![0usize; values.len()];

    fn place(i: usize, values: &[u64], target: u64, bins: &mut [u64], assign: &mut [usize]) -> bool {
        if i == values.len() {
            return true;
        }
        for b in 0..bins.len() {
            // bins with equal load are interchangeable
            if bins[..b].contains(&bins[b]) || bins[b] + values[i] > target {
                continue;
            }
            bins[b] += values[i];
            assign[i] = b;
            if place(i + 1, values, target, bins, assign) {
                return true;
            }
            bins[b] -= values[i];
        }
        false
    }

    if !place(0, &values, target, &mut bins, &mut assign) {
        return Ok(None);
    }
    let mut parts = vec![Vec::new(); p.k];
    for (v, b) in values.iter().zip(assign) {
        parts[b].push(*v);
    }
    let sums = parts.iter().map(|q| q.iter().sum()).collect();
    Ok(Some(PartitionWitness { parts, sums }))
}

#[derive(Debug, Clone)]
pub struct GadgetInstance {
    pub instance: PartitionInstance,
    pub a: f64,
    pub b: f64,
    pub t1: MergeTree,
    pub t2: MergeTree,
}

impl GadgetInstance {
    /// The same gadget with every height multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> GadgetInstance {
        GadgetInstance {
            instance: self.instance.clone(),
            a: self.a * factor,
            b: self.b * factor,
            t1: self.t1.scaled(factor),
            t2: self.t2.scaled(factor),
        }
    }
}

/// Default for both `A` and `B`: ten times the element sum.
pub fn default_scale(p: &PartitionInstance) -> f64 {
    10.0 * p.total() as f64
}

fn star_tree(hub: f64, group: f64, leaf: f64, groups: &[u64]) -> Result<MergeTree> {
    let mut t = RootedTree::singleton(None);
    let mut h = vec![0.0];
    let centre = t.push_child(0, None);
    h.push(hub);
    for &size in groups {
        let g = t.push_child(centre, None);
        h.push(group);
        for _ in 0..size {
            t.push_child(g, None);
            h.push(leaf);
        }
    }
    MergeTree::new(t, h, true)
}

pub fn build_gadget(p: &PartitionInstance, a: f64, b: f64) -> Result<GadgetInstance> {
    p.validate()?;
    let floor = 3.0 * GADGET_SPAN;
    if !(a.is_finite() && b.is_finite() && a > floor && b > floor) {
        return Err(Error::InvalidParameter(format!("A and B must exceed {floor}, got A = {a} and B = {b}")));
    }
    let hub = -b;
    let leaf = hub - 2.0 - a;
    let t1 = star_tree(hub, hub - 2.0, leaf, &p.values)?;
    let t2 = star_tree(hub + 1.0, hub - 1.0, leaf, &vec![p.part_size(); p.k])?;
    Ok(GadgetInstance {
        instance: p.clone(),
        a,
        b,
        t1,
        t2,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    #[serde(rename = "X")]
    pub values: Vec<u64>,
    pub k: usize,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub partition: Option<PartitionWitness>,
    pub fl: f64,
    pub gap_respected: bool,
}

/// Solves the partition instance, measures the merge Frechet-Like distance
/// of its gadget and checks that yes-instances give at most 1 and
/// no-instances at least 3.
pub fn verify_gap(p: &PartitionInstance, a: f64, b: f64) -> Result<GapReport> {
    let partition = solve_partition(p)?;
    let g = build_gadget(p, a, b)?;
    let fl = fl_distance(TreePair::Merge(&g.t1, &g.t2), &FLQuery::merge(0.0))?.value;
    let tol = 1e-9;
    let gap_respected = match partition {
        Some(_) => fl <= 1.0 + tol,
        None => fl >= 3.0 - tol,
    };
    Ok(GapReport {
        values: p.values.clone(),
        k: p.k,
        a,
        b,
        partition,
        fl,
        gap_respected,
    })
}

/// All multisets of `1..=n` elements drawn from `1..=max_value`, each
/// paired with every admissible `k`.
pub fn sweep_family(n: usize, max_value: u64, strict: bool) -> Vec<PartitionInstance> {
    fn grow(len: usize, lo: u64, hi: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in lo..=hi {
            cur.push(v);
            grow(len, v, hi, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for len in 1..=n {
        let mut sets = Vec::new();
        grow(len, 1, max_value, &mut Vec::new(), &mut sets);
        for x in sets {
            let ks: Vec<usize> = if strict {
                if len % 3 == 0 { vec![len / 3] } else { vec![] }
            } else {
                (1..=len).collect()
            };
            out.extend(ks.into_iter().map(|k| PartitionInstance {
                values: x.clone(),
                k,
                strict,
            }));
        }
    }
    out
}
