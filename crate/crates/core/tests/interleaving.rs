use treemetrics_core::frechet_like::{fl_distance, FLQuery, TreePair};
use treemetrics_core::generate::{rng, InstanceRng};
use treemetrics_core::interleaving::{
    candidate_deltas, check_compatible_pair, check_good_map, good_map_exists, interleaving_distance, Delta, MapAssignment,
    MapEntry, Reading,
};
use treemetrics_core::tree::Pos;
use treemetrics_core::{MergeTree, PointRef};

use rand::Rng;

mod common;
use common::{all_maps, grid_with_parents, pair, to_map};

#[test]
fn decision_matches_exhaustive_map_search() {
    let mut checked = 0;
    for seed in 0..400 {
        let (a, b) = pair(seed, 4);
        for delta in candidate_deltas(&a, &b).into_iter().take(8) {
            let maps = all_maps(&a, &b, delta, 20_000);
            if maps.len() >= 20_000 {
                continue;
            }
            let d = Delta::new(delta).unwrap();
            let oracle = maps.iter().any(|m| check_good_map(&a, &b, m, d).unwrap().valid);
            assert_eq!(good_map_exists(&a, &b, d).unwrap().exists, oracle, "seed {seed} delta {delta}");
            checked += 1;
        }
    }
    assert!(checked >= 500, "{checked}");
}

/// Condition-by-condition evaluation written against the public point API.
fn naive_good(t1: &MergeTree, t2: &MergeTree, grid: &[(Pos, Option<usize>)], img: &[Pos], delta: f64) -> bool {
    let eps = 1e-9;
    let shift = grid.iter().zip(img).all(|(&(p, _), q)| (q.height - p.height - delta).abs() <= eps);
    let continuous = grid.iter().enumerate().all(|(i, &(_, par))| par.is_none_or(|j| t2.pos_ge(img[j], img[i])));
    let lifted: Vec<Pos> = grid.iter().map(|&(p, _)| t1.ancestor_at_height(p, p.height + 2.0 * delta).unwrap()).collect();
    let ordered = (0..grid.len()).all(|i| (0..grid.len()).all(|j| i == j || !t2.pos_ge(img[i], img[j]) || t1.pos_ge(lifted[i], lifted[j])));
    let root = (0..grid.len()).find(|&i| grid[i].1.is_none()).unwrap();
    let covered = |q: Pos| {
        t2.pos_ge(q, img[root])
            || (0..grid.len()).any(|i| grid[i].1.is_some_and(|j| t2.pos_ge(q, img[i]) && t2.pos_ge(img[j], q)))
    };
    let coverage = t2.tree().leaves().into_iter().all(|w| {
        let wp = t2.node_pos(w);
        let mut heights: Vec<f64> = img.iter().map(|q| q.height).chain(t2.heights().iter().copied()).collect();
        heights.retain(|&h| h >= wp.height);
        heights.sort_by(f64::total_cmp);
        let low = heights
            .into_iter()
            .find(|&h| covered(t2.ancestor_at_height(wp, h).unwrap()))
            .unwrap_or(f64::INFINITY);
        low - wp.height <= 2.0 * delta + eps
    });
    shift && continuous && ordered && coverage
}

fn random_images(r: &mut InstanceRng, t2: &MergeTree, grid: &[(Pos, Option<usize>)], delta: f64) -> Option<Vec<Pos>> {
    let mut img: Vec<Pos> = Vec::new();
    for &(p, par) in grid {
        let all = t2.positions_at(p.height + delta);
        let below: Vec<Pos> = all.iter().copied().filter(|&c| par.is_none_or(|j| t2.pos_ge(img[j], c))).collect();
        if all.is_empty() {
            return None;
        }
        let pool = if below.is_empty() || r.gen_bool(0.1) { &all } else { &below };
        img.push(pool[r.gen_range(0..pool.len())]);
    }
    Some(img)
}

#[test]
fn checker_agrees_with_naive_evaluation() {
    let mut r = rng(77);
    let mut seen = [0usize; 2];
    for seed in 0..300 {
        let (a, b) = pair(500 + seed, 5);
        let cands = candidate_deltas(&a, &b);
        let delta = cands[r.gen_range(0..cands.len())];
        let grid = grid_with_parents(&a, &b, delta);
        let Some(img) = random_images(&mut r, &b, &grid, delta) else { continue };
        let map = to_map(&a, &b, &grid, &img);
        let fast = check_good_map(&a, &b, &map, Delta::new(delta).unwrap()).unwrap().valid;
        assert_eq!(fast, naive_good(&a, &b, &grid, &img, delta), "seed {seed} delta {delta}");
        seen[usize::from(fast)] += 1;
    }
    assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
}

#[test]
fn witnesses_are_good_maps() {
    for seed in 0..200 {
        let (a, b) = pair(2000 + seed, 6);
        let r = interleaving_distance(&a, &b).unwrap();
        let w: MapAssignment = serde_json::from_value(r.witness.unwrap()).unwrap();
        let c = check_good_map(&a, &b, &w, Delta::new(r.value).unwrap()).unwrap();
        assert!(c.valid, "seed {seed}: {:?}", c.violations);
    }
}

#[test]
fn compatible_pairs_give_the_same_distance() {
    for seed in 0..40 {
        let (a, b) = pair(3000 + seed, 3);
        let expected = interleaving_distance(&a, &b).unwrap().value;
        let mut found = None;
        for delta in candidate_deltas(&a, &b) {
            let d = Delta::new(delta).unwrap();
            let alphas = all_maps(&a, &b, delta, 2_000);
            let betas = all_maps(&b, &a, delta, 2_000);
            let ok = alphas.iter().any(|al| {
                betas
                    .iter()
                    .any(|be| check_compatible_pair(&a, &b, al, be, d, Reading::Standard).unwrap().valid)
            });
            if ok {
                found = Some(delta);
                break;
            }
        }
        assert_eq!(found, Some(expected), "seed {seed}");
    }
}

#[test]
fn as_printed_reading_is_stricter() {
    // two leaves at equal height under different parents: the printed
    // round-trip condition forces their 2δ-ancestors to coincide
    let t = treemetrics_core::io::parse_newick("((a:-3,b:-3):-1,c:-3):0;").unwrap();
    let d = Delta::new(0.0).unwrap();
    let id = good_map_exists(&t, &t, d).unwrap().witness.unwrap();
    let beta = good_map_exists(&t, &t, d).unwrap().witness.unwrap();
    assert!(check_compatible_pair(&t, &t, &id, &beta, d, Reading::Standard).unwrap().valid);
    assert!(!check_compatible_pair(&t, &t, &id, &beta, d, Reading::AsPrinted).unwrap().valid);
}

#[test]
fn monotone_in_delta_and_symmetric() {
    for seed in 0..150 {
        let (a, b) = pair(4000 + seed, 6);
        let mut seen = false;
        for step in 0..=12 {
            let ok = good_map_exists(&a, &b, Delta::new(step as f64 * 0.5).unwrap()).unwrap().exists;
            assert!(ok || !seen, "seed {seed}");
            seen |= ok;
        }
        assert_eq!(interleaving_distance(&a, &b).unwrap().value, interleaving_distance(&b, &a).unwrap().value, "seed {seed}");
        assert_eq!(interleaving_distance(&a, &a).unwrap().value, 0.0);
    }
}

#[test]
fn dominated_by_merge_frechet_like() {
    let q = FLQuery::merge(0.0);
    for seed in 0..120 {
        let (a, b) = pair(5000 + seed, 6);
        let di = interleaving_distance(&a, &b).unwrap().value;
        let fl = fl_distance(TreePair::Merge(&a, &b), &q).unwrap().value;
        assert!(di <= fl + 1e-9, "seed {seed}: {di} > {fl}");
    }
}

#[test]
fn off_grid_witness_is_rejected() {
    let (a, b) = pair(1, 3);
    let m = MapAssignment {
        entries: vec![MapEntry {
            from: PointRef::Ray { offset: 0.37 },
            to: PointRef::Ray { offset: 0.37 },
        }],
    };
    assert!(check_good_map(&a, &b, &m, Delta::new(0.0).unwrap()).is_err());
}
