use serde_json::json;

use crate::error::{Error, Result};
use crate::report::{DistanceReport, Metric};
use crate::tree::{dist, sample_polyline, EmbeddedTree, Point2};

pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return dist(p, a);
    }
    let t = (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0);
    let d = dist(p, [a[0] + t * dx, a[1] + t * dy]);
    // points sampled on the segment itself land within rounding error of it
    if d <= 1e-12 * (1.0 + len2.sqrt()) {
        0.0
    } else {
        d
    }
}

fn check_resolution(resolution: f64) -> Result<()> {
    if resolution > 0.0 && resolution.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("resolution must be positive, got {resolution}")))
    }
}

fn directed(samples: &[Point2], segments: &[(Point2, Point2)]) -> f64 {
    samples
        .iter()
        .map(|&p| {
            segments
                .iter()
                .map(|&(a, b)| point_segment_distance(p, a, b))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

fn tree_segments(t: &EmbeddedTree) -> Vec<(Point2, Point2)> {
    let mut s = t.segments();
    if s.is_empty() {
        let p = t.position(t.tree().root());
        s.push((p, p));
    }
    s
}

/// Symmetric Hausdorff distance between the point sets of two drawn trees.
/// Points of each tree are sampled at spacing `resolution` and measured
/// against the exact segments of the other, so the reported value is
/// within `resolution / 2` below the exact one.
pub fn hausdorff_distance(t1: &EmbeddedTree, t2: &EmbeddedTree, resolution: f64) -> Result<DistanceReport> {
    check_resolution(resolution)?;
    let forward = directed(&t1.samples(resolution), &tree_segments(t2));
    let backward = directed(&t2.samples(resolution), &tree_segments(t1));
    Ok(DistanceReport::new(Metric::Hausdorff, forward.max(backward)).with_params(json!({
        "resolution": resolution,
        "error_bound": resolution,
    })))
}

/// Discrete Frechet distance between two point sequences.
pub fn discrete_frechet(p: &[Point2], q: &[Point2]) -> f64 {
    if p.is_empty() || q.is_empty() {
        return 0.0;
    }
    let m = q.len();
    let mut prev = vec![f64::INFINITY; m];
    let mut cur = vec![0.0; m];
    for (i, &a) in p.iter().enumerate() {
        for (j, &b) in q.iter().enumerate() {
            let d = dist(a, b);
            let reach = match (i, j) {
                (0, 0) => 0.0,
                (0, _) => cur[j - 1],
                (_, 0) => prev[0],
                _ => prev[j].min(prev[j - 1]).min(cur[j - 1]),
            };
            cur[j] = d.max(reach);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[m - 1]
}

/// Frechet distance of two polylines computed as the discrete Frechet
/// distance of samples spaced at most `resolution` apart along each.
pub fn curve_frechet(p: &[Point2], q: &[Point2], resolution: f64) -> Result<f64> {
    check_resolution(resolution)?;
    if p.is_empty() || q.is_empty() {
        return Err(Error::InvalidParameter("empty polyline".into()));
    }
    Ok(discrete_frechet(&sample_polyline(p, resolution), &sample_polyline(q, resolution)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn segment_tree(a: Point2, b: Point2) -> EmbeddedTree {
        EmbeddedTree::from_polyline(vec![a, b]).unwrap()
    }

    #[test]
    fn hausdorff_identity_and_translation() {
        let t = segment_tree([0.0, 0.0], [1.0, 0.0]);
        assert_eq!(hausdorff_distance(&t, &t, 0.1).unwrap().value, 0.0);
        let u = segment_tree([0.0, 0.3], [1.0, 0.3]);
        let d = hausdorff_distance(&t, &u, 0.1).unwrap().value;
        assert!((d - 0.3).abs() <= 0.1, "{d}");
    }

    #[test]
    fn frechet_parallel_segments() {
        let p = [[0.0, 0.0], [1.0, 0.0]];
        let q = [[0.0, 0.25], [1.0, 0.25]];
        assert_eq!(curve_frechet(&p, &p, 0.1).unwrap(), 0.0);
        assert!((curve_frechet(&p, &q, 0.1).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn frechet_respects_order() {
        // Same point set, opposite direction.
        let p = [[0.0, 0.0], [2.0, 0.0]];
        let q = [[2.0, 0.0], [0.0, 0.0]];
        assert!((curve_frechet(&p, &q, 0.5).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn bad_resolution() {
        let p = [[0.0, 0.0], [1.0, 0.0]];
        assert!(curve_frechet(&p, &p, 0.0).is_err());
    }
}
