//! Density-based clustering of class encodings.

mod bmsc;
mod dbscan;
mod mean_shift;

pub use bmsc::{bmsc, neighborhood, BmscResult, Grid};
pub use dbscan::{core_points, dbscan};
pub use mean_shift::{estimate_bandwidth, mean_shift, mean_shift_step, MeanShiftConfig};

use crate::error::{Error, Result};

/// Cluster id per point (`None` = noise). Ids are contiguous from 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterResult {
    pub labels: Vec<Option<usize>>,
    pub modes: Option<Vec<Vec<f64>>>,
    pub iterations: usize,
}

impl ClusterResult {
    pub fn cluster_count(&self) -> usize {
        self.labels.iter().flatten().max().map_or(0, |m| m + 1)
    }

    pub fn noise_count(&self) -> usize {
        self.labels.iter().filter(|l| l.is_none()).count()
    }
}

#[inline]
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub(crate) fn check_points(points: &[Vec<f64>]) -> Result<()> {
    let dim = points.first().map_or(0, Vec::len);
    for (i, p) in points.iter().enumerate() {
        if p.len() != dim {
            return Err(Error::DimensionMismatch(dim, p.len()));
        }
        if p.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParam(format!("point {i} is not finite")));
        }
    }
    Ok(())
}

/// Index of the closest target, lowest index on ties.
pub(crate) fn nearest(p: &[f64], targets: &[Vec<f64>]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, t) in targets.iter().enumerate() {
        let d = euclidean(p, t);
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((i, d));
        }
    }
    best.map(|(i, _)| i)
}

/// Renumbers labels to `0..k` in order of first appearance of each old id
/// sorted ascending, dropping ids that no point carries.
pub(crate) fn compact_labels(labels: &mut [Option<usize>]) -> Vec<usize> {
    let mut used: Vec<usize> = labels.iter().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();
    for l in labels.iter_mut().flatten() {
        *l = used.binary_search(l).expect("label collected above");
    }
    used
}

/// Adjusted Rand index between two flat labelings of the same points.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len(), "labelings must cover the same points");
    let n = a.len();
    if n < 2 {
        return 1.0;
    }
    let ka = a.iter().max().map_or(0, |m| m + 1);
    let kb = b.iter().max().map_or(0, |m| m + 1);
    let mut table = vec![vec![0u64; kb]; ka];
    for (&x, &y) in a.iter().zip(b) {
        table[x][y] += 1;
    }
    let pairs = |c: u64| (c * c.saturating_sub(1)) as f64 / 2.0;
    let index: f64 = table.iter().flatten().map(|&c| pairs(c)).sum();
    let rows: f64 = table.iter().map(|r| pairs(r.iter().sum())).sum();
    let cols: f64 = (0..kb).map(|j| pairs(table.iter().map(|r| r[j]).sum())).sum();
    let total = pairs(n as u64);
    let expected = rows * cols / total;
    let max = 0.5 * (rows + cols);
    if max == expected {
        return 1.0;
    }
    (index - expected) / (max - expected)
}
