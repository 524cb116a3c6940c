use std::cmp::Ordering;

use super::{check_points, compact_labels, euclidean, nearest, ClusterResult};
use crate::error::{Error, Result};

/// Median of all pairwise Euclidean distances.
pub fn estimate_bandwidth(points: &[Vec<f64>]) -> Result<f64> {
    let mut d = Vec::with_capacity(points.len() * points.len().saturating_sub(1) / 2);
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            d.push(euclidean(&points[i], &points[j]));
        }
    }
    if d.iter().all(|&x| x == 0.0) {
        return Err(Error::DegenerateBandwidth);
    }
    d.sort_by(f64::total_cmp);
    let mid = d.len() / 2;
    let median = if d.len() % 2 == 1 {
        d[mid]
    } else {
        0.5 * (d[mid - 1] + d[mid])
    };
    if median > 0.0 {
        Ok(median)
    } else {
        // more than half the pairs coincide; fall back to the smallest gap
        Ok(d.into_iter().find(|&x| x > 0.0).expect("checked above"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanShiftConfig {
    /// Stop once a window moves less than `tolerance * bandwidth`.
    pub tolerance: f64,
    pub max_iter: usize,
    /// Converged centres closer than `merge * bandwidth` collapse.
    pub merge: f64,
}

impl Default for MeanShiftConfig {
    fn default() -> Self {
        MeanShiftConfig {
            tolerance: 1e-4,
            max_iter: 300,
            merge: 0.5,
        }
    }
}

/// One flat-kernel update: the mean of all points within `bandwidth` of
/// `center`, and how many points that was.
pub fn mean_shift_step(points: &[Vec<f64>], center: &[f64], bandwidth: f64) -> (Vec<f64>, usize) {
    let mut sum = vec![0.0; center.len()];
    let mut count = 0;
    for p in points {
        if euclidean(p, center) <= bandwidth {
            for (s, v) in sum.iter_mut().zip(p) {
                *s += v;
            }
            count += 1;
        }
    }
    if count == 0 {
        return (center.to_vec(), 0);
    }
    sum.iter_mut().for_each(|s| *s /= count as f64);
    (sum, count)
}

/// Flat-kernel mean shift seeded from every point.
pub fn mean_shift(points: &[Vec<f64>], bandwidth: f64) -> Result<ClusterResult> {
    mean_shift_with(points, bandwidth, MeanShiftConfig::default())
}

pub fn mean_shift_with(points: &[Vec<f64>], bandwidth: f64, config: MeanShiftConfig) -> Result<ClusterResult> {
    if !(bandwidth > 0.0 && bandwidth.is_finite()) {
        return Err(Error::InvalidParam(format!(
            "bandwidth must be positive, got {bandwidth}"
        )));
    }
    check_points(points)?;
    let stop = config.tolerance * bandwidth;
    let mut converged = Vec::with_capacity(points.len());
    let mut iterations = 0;
    for (seed, p) in points.iter().enumerate() {
        let mut center = p.clone();
        let mut count = 0;
        for it in 1..=config.max_iter {
            let (next, c) = mean_shift_step(points, &center, bandwidth);
            let shift = euclidean(&next, &center);
            center = next;
            count = c;
            iterations = iterations.max(it);
            if shift < stop {
                break;
            }
        }
        converged.push((center, count, seed));
    }
    // densest windows first, seed index breaks ties
    converged.sort_by(|a, b| match b.1.cmp(&a.1) {
        Ordering::Equal => a.2.cmp(&b.2),
        o => o,
    });
    let radius = config.merge * bandwidth;
    let mut modes: Vec<Vec<f64>> = Vec::new();
    for (center, _, _) in converged {
        if modes.iter().all(|m| euclidean(m, &center) > radius) {
            modes.push(center);
        }
    }
    let mut labels: Vec<Option<usize>> = points.iter().map(|p| nearest(p, &modes)).collect();
    let kept = compact_labels(&mut labels);
    let modes = kept.into_iter().map(|k| modes[k].clone()).collect();
    Ok(ClusterResult {
        labels,
        modes: Some(modes),
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_three_distances() {
        let pts = vec![vec![0.0], vec![1.0], vec![3.0]];
        assert_eq!(estimate_bandwidth(&pts).unwrap(), 2.0);
        let pair = vec![vec![0.0, 0.0], vec![3.0, 4.0]];
        assert_eq!(estimate_bandwidth(&pair).unwrap(), 5.0);
        let even = vec![vec![0.0], vec![1.0], vec![3.0], vec![7.0]];
        // 1 2 3 4 6 7
        assert_eq!(estimate_bandwidth(&even).unwrap(), 3.5);
    }

    #[test]
    fn identical_points_have_no_bandwidth() {
        let pts = vec![vec![1.0, 1.0]; 4];
        assert!(matches!(estimate_bandwidth(&pts), Err(Error::DegenerateBandwidth)));
        assert!(estimate_bandwidth(&[vec![1.0]]).is_err());
    }

    #[test]
    fn single_point_is_its_own_mode() {
        let r = mean_shift(&[vec![2.0, -1.0]], 1.0).unwrap();
        assert_eq!(r.modes.unwrap(), vec![vec![2.0, -1.0]]);
        assert_eq!(r.labels, vec![Some(0)]);
    }

    #[test]
    fn tight_blob_converges_to_centroid() {
        let pts = vec![vec![1.0, 1.0], vec![1.2, 1.0], vec![1.0, 1.3], vec![0.9, 0.8]];
        let r = mean_shift(&pts, 2.0).unwrap();
        let modes = r.modes.unwrap();
        assert_eq!(modes.len(), 1);
        assert!((modes[0][0] - 1.025).abs() < 1e-3);
        assert!((modes[0][1] - 1.025).abs() < 1e-3);
    }

    #[test]
    fn separated_blobs_get_two_modes() {
        let pts = vec![
            vec![0.0, 0.0],
            vec![0.5, 0.0],
            vec![0.0, 0.5],
            vec![20.0, 20.0],
            vec![20.5, 20.0],
            vec![20.0, 20.5],
        ];
        let r = mean_shift(&pts, 2.0).unwrap();
        assert_eq!(r.modes.as_ref().unwrap().len(), 2);
        assert_eq!(r.labels[0], r.labels[2]);
        assert_ne!(r.labels[0], r.labels[3]);
    }

    #[test]
    fn bad_bandwidth() {
        assert!(mean_shift(&[vec![0.0]], 0.0).is_err());
    }
}
