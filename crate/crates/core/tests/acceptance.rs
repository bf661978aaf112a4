//! Acceptance suite: one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use treemetrics_core::classic::{alignment_distance, curve_frechet, edit_distance, hausdorff_distance, EditCosts};
use treemetrics_core::frechet_like::{brute_force_fl, decide_fl, fl_distance, grid_points, FLQuery, TreePair};
use treemetrics_core::generate::{comb, random_embedded_tree, random_labeled_tree, random_path_tree, rng};
use treemetrics_core::hardness::{default_scale, sweep_family, verify_gap};
use treemetrics_core::interleaving::{candidate_deltas, check_compatible_pair, good_map_exists, interleaving_distance, Delta, Reading};
use treemetrics_core::EmbeddedTree;

mod common;
use common::{all_maps, pair};

const TOL: f64 = 1e-9;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gap_reproduction() -> Outcome {
    let mut family = sweep_family(6, 4, true);
    family.extend(sweep_family(6, 4, false));
    let (mut yes, mut no, mut max_yes, mut min_no) = (0, 0, 0.0f64, f64::INFINITY);
    for p in &family {
        let s = default_scale(p);
        let r = verify_gap(p, s, s).map_err(|e| format!("{p:?}: {e}"))?;
        ensure(r.gap_respected, || format!("{p:?} gives {}", r.fl))?;
        ensure(r.fl <= 1.0 + TOL || r.fl >= 3.0 - TOL, || format!("{p:?} falls inside the gap: {}", r.fl))?;
        if r.partition.is_some() {
            yes += 1;
            max_yes = max_yes.max(r.fl);
        } else {
            no += 1;
            min_no = min_no.min(r.fl);
        }
    }
    Ok(format!("{} instances, {yes} yes (max fl {max_yes}), {no} no (min fl {min_no})", family.len()))
}

fn interleaving_below_frechet_like() -> Outcome {
    let q = FLQuery::merge(0.0);
    let count = 500;
    for seed in 0..count {
        let (a, b) = pair(100_000 + seed, 6);
        let di = interleaving_distance(&a, &b).map_err(|e| e.to_string())?.value;
        let fl = fl_distance(TreePair::Merge(&a, &b), &q).map_err(|e| e.to_string())?.value;
        ensure(di <= fl + TOL, || format!("seed {seed}: d_I = {di} > d_FL = {fl}"))?;
    }
    Ok(format!("{count} pairs, no violation"))
}

fn oracle_equivalence() -> Outcome {
    let q = FLQuery::merge(0.0);
    let mut checked = 0;
    let mut seed = 200_000;
    while checked < 200 {
        seed += 1;
        let (a, b) = pair(seed, 4);
        let trees = TreePair::Merge(&a, &b);
        let (g1, g2) = grid_points(trees, &q).map_err(|e| e.to_string())?;
        if g1.len() > 12 || g2.len() > 12 {
            continue;
        }
        let fast = fl_distance(trees, &q).map_err(|e| e.to_string())?.value;
        let slow = brute_force_fl(trees, &q).map_err(|e| e.to_string())?;
        ensure(fast == slow, || format!("seed {seed}: search {fast}, exhaustive {slow}"))?;
        checked += 1;
    }
    Ok(format!("{checked} instances with grids of at most 12 points"))
}

fn interleaving_self_consistency() -> Outcome {
    let cap = 4_000;
    let (mut checked, mut skipped) = (0, 0);
    for seed in 0..300 {
        let (a, b) = pair(300_000 + seed, 4);
        let expected = interleaving_distance(&a, &b).map_err(|e| e.to_string())?.value;
        let mut found = None;
        let mut truncated = false;
        for delta in candidate_deltas(&a, &b) {
            let d = Delta::new(delta).map_err(|e| e.to_string())?;
            let alphas = all_maps(&a, &b, delta, cap);
            let betas = all_maps(&b, &a, delta, cap);
            truncated |= alphas.len() >= cap || betas.len() >= cap;
            let ok = alphas.iter().any(|al| {
                betas
                    .iter()
                    .any(|be| check_compatible_pair(&a, &b, al, be, d, Reading::Standard).is_ok_and(|c| c.valid))
            });
            if ok {
                found = Some(delta);
                break;
            }
        }
        if truncated && found != Some(expected) {
            skipped += 1;
            continue;
        }
        ensure(found == Some(expected), || format!("seed {seed}: compatible pair at {found:?}, good map at {expected}"))?;
        ensure(good_map_exists(&a, &b, Delta::new(expected).unwrap()).is_ok_and(|g| g.exists), || format!("seed {seed}"))?;
        checked += 1;
    }
    ensure(skipped == 0, || format!("{skipped} instances exceeded the enumeration cap"))?;
    Ok(format!("{checked} instances with at most 4 leaves"))
}

fn path_line(t: &EmbeddedTree) -> Vec<[f64; 2]> {
    let mut l = vec![t.position(t.tree().root())];
    let leaf = t.tree().leaves()[0];
    l.extend_from_slice(&t.edge(leaf)[1..]);
    l
}

fn path_tree_reduction() -> Outcome {
    let res = 0.1;
    let count = 100;
    let mut worst = 0.0f64;
    for seed in 0..count {
        let mut r = rng(400_000 + seed);
        let a = random_path_tree(&mut r, 3, 2.0);
        let b = random_path_tree(&mut r, 3, 2.0);
        let fl = fl_distance(TreePair::Euclidean(&a, &b), &FLQuery::euclidean(0.0, res)).map_err(|e| e.to_string())?.value;
        let cf = curve_frechet(&path_line(&a), &path_line(&b), res).map_err(|e| e.to_string())?;
        worst = worst.max((fl - cf).abs());
        ensure((fl - cf).abs() <= res, || format!("seed {seed}: {fl} vs {cf}"))?;
    }
    Ok(format!("{count} pairs, largest gap {worst:.4} at resolution {res}"))
}

fn alignment_dominates_edit() -> Outcome {
    let count = 500;
    let c = EditCosts::default();
    for seed in 0..count {
        let mut r = rng(500_000 + seed);
        let n1 = 1 + (seed as usize) % 8;
        let n2 = 1 + (seed as usize * 5 + 3) % 8;
        let a = random_labeled_tree(&mut r, n1, 3);
        let b = random_labeled_tree(&mut r, n2, 3);
        let e = edit_distance(&a, &b, c).value;
        let al = alignment_distance(&a, &b, c, 8).map_err(|e| e.to_string())?.value;
        ensure(al >= e, || format!("seed {seed}: alignment {al} < edit {e}"))?;
    }
    Ok(format!("{count} pairs"))
}

fn metric_sanity() -> Outcome {
    let count = 200;
    let merge = FLQuery::merge(0.0);
    let euclid = FLQuery::euclidean(0.0, 0.5);
    for seed in 0..count {
        let (a, b) = pair(600_000 + seed, 5);
        let fm = |x, y| fl_distance(TreePair::Merge(x, y), &merge).map(|r| r.value);
        let di = |x, y| interleaving_distance(x, y).map(|r| r.value);
        let e = |e: treemetrics_core::Error| e.to_string();
        ensure(fm(&a, &a).map_err(e)? == 0.0, || format!("fl-merge seed {seed}: d(T,T) != 0"))?;
        ensure(fm(&a, &b).map_err(e)? == fm(&b, &a).map_err(e)?, || format!("fl-merge seed {seed}: asymmetric"))?;
        ensure(di(&a, &a).map_err(e)? == 0.0, || format!("interleaving seed {seed}: d(T,T) != 0"))?;
        ensure(di(&a, &b).map_err(e)? == di(&b, &a).map_err(e)?, || format!("interleaving seed {seed}: asymmetric"))?;

        let mut r = rng(700_000 + seed);
        let (x, y) = (random_embedded_tree(&mut r, 4), random_embedded_tree(&mut r, 4));
        let fe = |s, t| fl_distance(TreePair::Euclidean(s, t), &euclid).map(|r| r.value);
        let h = |s, t| hausdorff_distance(s, t, 0.05).map(|r| r.value);
        ensure(fe(&x, &x).map_err(e)? == 0.0, || format!("fl-euclid seed {seed}: d(T,T) != 0"))?;
        ensure(fe(&x, &y).map_err(e)? == fe(&y, &x).map_err(e)?, || format!("fl-euclid seed {seed}: asymmetric"))?;
        ensure(h(&x, &x).map_err(e)? == 0.0, || format!("hausdorff seed {seed}: d(T,T) != 0"))?;
        ensure(h(&x, &y).map_err(e)? == h(&y, &x).map_err(e)?, || format!("hausdorff seed {seed}: asymmetric"))?;

        // ladders: once accepted, every larger threshold is accepted
        let (mut fl_seen, mut di_seen) = (false, false);
        for step in 0..=16 {
            let t = step as f64 * 0.5;
            let fl_ok = decide_fl(TreePair::Merge(&a, &b), &merge.with_eps(t)).map_err(e)?.accepted;
            let di_ok = good_map_exists(&a, &b, Delta::new(t).unwrap()).map_err(e)?.exists;
            ensure(fl_ok || !fl_seen, || format!("seed {seed}: fl-merge ladder breaks at {t}"))?;
            ensure(di_ok || !di_seen, || format!("seed {seed}: interleaving ladder breaks at {t}"))?;
            fl_seen |= fl_ok;
            di_seen |= di_ok;
        }
    }
    Ok(format!("{count} instances per metric, eps and delta ladders monotone"))
}

fn comb_contrast() -> Outcome {
    let a = comb(4, 2.0, 0.05, false);
    let b = comb(4, 2.0, 0.05, true);
    let h = hausdorff_distance(&a, &b, 0.01).map_err(|e| e.to_string())?.value;
    let fl = fl_distance(TreePair::Euclidean(&a, &b), &FLQuery::euclidean(0.0, 0.5)).map_err(|e| e.to_string())?.value;
    ensure(h <= 0.1 * fl, || format!("hausdorff {h} vs fl-euclid {fl}"))?;
    Ok(format!("hausdorff {h:.3}, fl-euclid {fl:.3}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("gap reproduction", gap_reproduction),
        ("interleaving bounded by merge Frechet-Like", interleaving_below_frechet_like),
        ("search agrees with exhaustive oracle", oracle_equivalence),
        ("interleaving self-consistency", interleaving_self_consistency),
        ("path-tree reduction to curve Frechet", path_tree_reduction),
        ("alignment dominates edit", alignment_dominates_edit),
        ("metric sanity", metric_sanity),
        ("Hausdorff versus Frechet-Like on combs", comb_contrast),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
