use std::collections::VecDeque;

use super::{check_points, euclidean, ClusterResult};
use crate::error::{Error, Result};

fn neighbours(points: &[Vec<f64>], eps: f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut out = vec![Vec::new(); n];
    for i in 0..n {
        out[i].push(i);
        for j in i + 1..n {
            if euclidean(&points[i], &points[j]) <= eps {
                out[i].push(j);
                out[j].push(i);
            }
        }
    }
    out
}

/// Points with at least `min_pts` points (themselves included) within `eps`.
pub fn core_points(points: &[Vec<f64>], eps: f64, min_pts: usize) -> Vec<bool> {
    neighbours(points, eps).iter().map(|nb| nb.len() >= min_pts).collect()
}

/// DBSCAN with Euclidean distance and an inclusive `eps` radius.
///
/// Clusters are opened in index order of their first core point. A border
/// point reachable from several clusters joins the one with the lowest id.
pub fn dbscan(points: &[Vec<f64>], eps: f64, min_pts: usize) -> Result<ClusterResult> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParam(format!("eps must be positive, got {eps}")));
    }
    if min_pts == 0 {
        return Err(Error::InvalidParam("min_pts must be at least 1".into()));
    }
    check_points(points)?;
    let nb = neighbours(points, eps);
    let core: Vec<bool> = nb.iter().map(|v| v.len() >= min_pts).collect();
    let mut labels = vec![None; points.len()];
    let mut next = 0;
    let mut queue = VecDeque::new();
    for seed in 0..points.len() {
        if labels[seed].is_some() || !core[seed] {
            continue;
        }
        labels[seed] = Some(next);
        queue.push_back(seed);
        while let Some(p) = queue.pop_front() {
            for &q in &nb[p] {
                if labels[q].is_none() {
                    labels[q] = Some(next);
                    if core[q] {
                        queue.push_back(q);
                    }
                }
            }
        }
        next += 1;
    }
    Ok(ClusterResult {
        labels,
        modes: None,
        iterations: 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blob(cx: f64, cy: f64) -> Vec<Vec<f64>> {
        vec![
            vec![cx, cy],
            vec![cx + 0.1, cy],
            vec![cx, cy + 0.1],
            vec![cx - 0.1, cy],
            vec![cx, cy - 0.1],
        ]
    }

    #[test]
    fn two_blobs() {
        let mut pts = blob(0.0, 0.0);
        pts.extend(blob(10.0, 0.0));
        let r = dbscan(&pts, 1.0, 5).unwrap();
        assert_eq!(r.cluster_count(), 2);
        assert_eq!(r.noise_count(), 0);
        assert!(r.labels[..5].iter().all(|&l| l == Some(0)));
        assert!(r.labels[5..].iter().all(|&l| l == Some(1)));
    }

    #[test]
    fn sparse_points_are_noise() {
        let pts = vec![vec![0.0], vec![5.0], vec![10.0]];
        let r = dbscan(&pts, 1.0, 2).unwrap();
        assert!(r.labels.iter().all(Option::is_none));
    }

    #[test]
    fn min_pts_one_gives_components() {
        let pts = vec![vec![0.0], vec![0.9], vec![1.8], vec![5.0]];
        let r = dbscan(&pts, 1.0, 1).unwrap();
        assert_eq!(r.labels, vec![Some(0), Some(0), Some(0), Some(1)]);
    }

    #[test]
    fn border_point_joins_lowest_cluster() {
        // Two dense groups on a line with one border point equidistant.
        let pts: Vec<Vec<f64>> = [0.0, 0.1, 0.2, 0.3, 1.25, 2.2, 2.3, 2.4, 2.5]
            .iter()
            .map(|&x| vec![x])
            .collect();
        let r = dbscan(&pts, 1.0, 4).unwrap();
        assert_eq!(r.labels[4], Some(0));
        assert_eq!(r.cluster_count(), 2);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(dbscan(&[vec![0.0]], 0.0, 1).is_err());
        assert!(dbscan(&[vec![0.0]], 1.0, 0).is_err());
        assert!(dbscan(&[vec![f64::NAN]], 1.0, 1).is_err());
    }
}
