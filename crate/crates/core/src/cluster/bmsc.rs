//! Boosted mean shift clustering.
//!
//! Points are dealt onto a grid of cells. Each round runs mean shift inside
//! every cell to get intermediate modes (iModes), groups the iModes with
//! DBSCAN, then refills every cell from its neighbourhood with the points
//! closest to that cell's iModes. Rounds stop once the DBSCAN cluster count
//! is unchanged three rounds in a row, or at the iteration cap.
//!
//! Each cell is refilled independently, so after the first round a point may
//! sit in several cells or in none. Every point is still labelled at the end
//! through its nearest iMode.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{check_points, compact_labels, dbscan, estimate_bandwidth, euclidean, mean_shift, nearest, ClusterResult};
use crate::error::{Error, Result};
use crate::model::{HyperParams, Neighborhood, Warning};

/// Number of equal consecutive cluster counts that ends the loop.
const STABLE_ROUNDS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    pub rows: usize,
    pub cols: usize,
    /// Point indices per cell, row-major.
    pub cells: Vec<Vec<usize>>,
}

impl Grid {
    /// Deals a seeded shuffle of `0..n` round-robin onto the cells.
    pub fn distribute(n: usize, rows: usize, cols: usize, seed: u64) -> Grid {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let mut cells = vec![Vec::new(); rows * cols];
        for (k, p) in order.into_iter().enumerate() {
            cells[k % (rows * cols)].push(p);
        }
        Grid { rows, cols, cells }
    }

    pub fn neighborhood(&self, cell: usize, structure: Neighborhood) -> Vec<usize> {
        neighborhood(self.rows, self.cols, cell, structure)
    }
}

fn offsets(structure: Neighborhood) -> Vec<(isize, isize)> {
    let axis = |reach: isize| {
        let mut v = vec![(0, 0)];
        for d in 1..=reach {
            v.extend([(-d, 0), (d, 0), (0, -d), (0, d)]);
        }
        v
    };
    match structure {
        Neighborhood::Linear5 => axis(1),
        Neighborhood::Linear9 => axis(2),
        Neighborhood::Compact9 => (-1..=1).flat_map(|r| (-1..=1).map(move |c| (r, c))).collect(),
        Neighborhood::Compact13 => (-2isize..=2)
            .flat_map(|r| (-2isize..=2).map(move |c| (r, c)))
            .filter(|(r, c)| r.abs() + c.abs() <= 2)
            .collect(),
    }
}

/// Cells around `cell` (row-major index) under `structure`, the cell itself
/// included, clipped at the grid border. Sorted by index.
pub fn neighborhood(rows: usize, cols: usize, cell: usize, structure: Neighborhood) -> Vec<usize> {
    let (r, c) = ((cell / cols) as isize, (cell % cols) as isize);
    let mut out: Vec<usize> = offsets(structure)
        .into_iter()
        .map(|(dr, dc)| (r + dr, c + dc))
        .filter(|&(nr, nc)| nr >= 0 && nc >= 0 && nr < rows as isize && nc < cols as isize)
        .map(|(nr, nc)| nr as usize * cols + nc as usize)
        .collect();
    out.sort_unstable();
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct BmscResult {
    pub clusters: ClusterResult,
    /// iModes of the final round.
    pub imodes: Vec<Vec<f64>>,
    /// DBSCAN label of each final iMode.
    pub imode_labels: Vec<Option<usize>>,
    /// Cluster count after each round.
    pub history: Vec<usize>,
    /// True when the loop stopped on the stability rule.
    pub converged: bool,
    pub warnings: Vec<Warning>,
}

pub fn bmsc(points: &[Vec<f64>], params: &HyperParams) -> Result<BmscResult> {
    params.validate()?;
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    check_points(points)?;
    let n_cells = params.grid_rows * params.grid_cols;
    let mut warnings = Vec::new();
    if n_cells > points.len() {
        warnings.push(Warning::SparseGrid {
            cells: n_cells,
            points: points.len(),
        });
    }
    let fallback_bw = params
        .bandwidth
        .or_else(|| estimate_bandwidth(points).ok())
        .unwrap_or(1.0);

    let mut grid = Grid::distribute(points.len(), params.grid_rows, params.grid_cols, params.seed);
    let sizes: Vec<usize> = grid.cells.iter().map(Vec::len).collect();
    let mut history = Vec::new();
    let mut converged = false;

    let (imodes, imode_cells, imode_labels) = loop {
        let mut imodes: Vec<Vec<f64>> = Vec::new();
        let mut imode_cells = Vec::new();
        for (c, members) in grid.cells.iter().enumerate() {
            if members.is_empty() {
                continue;
            }
            let local: Vec<Vec<f64>> = members.iter().map(|&p| points[p].clone()).collect();
            let bw = params
                .bandwidth
                .or_else(|| estimate_bandwidth(&local).ok())
                .unwrap_or(fallback_bw);
            let modes = mean_shift(&local, bw)?.modes.unwrap_or_default();
            imode_cells.extend(std::iter::repeat_n(c, modes.len()));
            imodes.extend(modes);
        }
        let grouped = dbscan(&imodes, params.eps, params.min_pts_imodes)?;
        history.push(grouped.cluster_count());

        let tail = &history[history.len().saturating_sub(STABLE_ROUNDS)..];
        if tail.len() == STABLE_ROUNDS && tail.iter().all(|&k| k == tail[0]) {
            converged = true;
        }
        if converged || history.len() >= params.max_bmsc_iters {
            break (imodes, imode_cells, grouped.labels);
        }
        grid = resample(points, &grid, &sizes, &imodes, &imode_cells, params.neighborhood);
    };
    debug_assert_eq!(imodes.len(), imode_cells.len());

    let mut labels: Vec<Option<usize>> = points
        .iter()
        .map(|p| nearest(p, &imodes).and_then(|m| imode_labels[m]))
        .collect();
    compact_labels(&mut labels);
    let iterations = history.len();
    Ok(BmscResult {
        clusters: ClusterResult {
            labels,
            modes: Some(imodes.clone()),
            iterations,
        },
        imodes,
        imode_labels,
        history,
        converged,
        warnings,
    })
}

/// Refills each cell, keeping its original size, with the points of its
/// neighbourhood that lie closest to the cell's own iModes.
fn resample(
    points: &[Vec<f64>],
    grid: &Grid,
    sizes: &[usize],
    imodes: &[Vec<f64>],
    imode_cells: &[usize],
    structure: Neighborhood,
) -> Grid {
    let cells = (0..grid.cells.len())
        .map(|c| {
            let own: Vec<&Vec<f64>> = imodes
                .iter()
                .zip(imode_cells)
                .filter(|&(_, &cell)| cell == c)
                .map(|(m, _)| m)
                .collect();
            if own.is_empty() {
                return Vec::new();
            }
            let mut pool: Vec<usize> = grid
                .neighborhood(c, structure)
                .into_iter()
                .flat_map(|nb| grid.cells[nb].iter().copied())
                .collect();
            pool.sort_unstable();
            pool.dedup();
            let mut scored: Vec<(f64, usize)> = pool
                .into_iter()
                .map(|p| {
                    let d = own
                        .iter()
                        .map(|m| euclidean(&points[p], m))
                        .fold(f64::INFINITY, f64::min);
                    (d, p)
                })
                .collect();
            scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            scored.truncate(sizes[c]);
            let mut chosen: Vec<usize> = scored.into_iter().map(|(_, p)| p).collect();
            chosen.sort_unstable();
            chosen
        })
        .collect();
    Grid {
        rows: grid.rows,
        cols: grid.cols,
        cells,
    }
}
