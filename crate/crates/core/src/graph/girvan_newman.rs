use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{components, membership, modularity, Communities, SimilarityGraph};
use crate::error::{Error, Result};

/// Which edge is cut at every step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GnMode {
    /// Cut the edge with the smallest similarity weight. Ties go to the
    /// lowest `(a, b)` pair.
    #[default]
    WeakestEdge,
    /// Classical Girvan-Newman: cut the edge with the highest weighted
    /// betweenness, edge length `1 / weight`.
    Betweenness,
}

impl std::str::FromStr for GnMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weakest-edge" | "weakest_edge" => Ok(GnMode::WeakestEdge),
            "betweenness" => Ok(GnMode::Betweenness),
            other => Err(Error::InvalidParam(format!("unknown girvan-newman mode `{other}`"))),
        }
    }
}

/// Partitions recorded each time an edge removal split a component.
#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    pub levels: Vec<Communities>,
    /// Modularity of each level, scored on the full graph.
    pub modularity: Vec<f64>,
    /// Level with the highest modularity (earliest on ties).
    pub best: usize,
}

impl Dendrogram {
    pub fn recommended(&self) -> &Communities {
        &self.levels[self.best]
    }
}

pub fn girvan_newman(g: &SimilarityGraph, mode: GnMode) -> Result<Dendrogram> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let mut alive: Vec<bool> = vec![true; g.edges().len()];
    let live_pairs = |alive: &[bool]| {
        g.edges()
            .iter()
            .zip(alive)
            .filter(|(_, &on)| on)
            .map(|(e, _)| (e.a, e.b))
            .collect::<Vec<_>>()
    };
    let mut levels = vec![components(n, live_pairs(&alive))];

    let literal_order: Vec<usize> = {
        let mut order: Vec<usize> = (0..g.edges().len()).collect();
        order.sort_by(|&x, &y| {
            let (ex, ey) = (g.edges()[x], g.edges()[y]);
            ex.weight.total_cmp(&ey.weight).then((ex.a, ex.b).cmp(&(ey.a, ey.b)))
        });
        order
    };

    for &weakest in &literal_order {
        let cut = match mode {
            GnMode::WeakestEdge => weakest,
            GnMode::Betweenness => {
                let scores = edge_betweenness(g, &alive);
                let max = scores
                    .iter()
                    .zip(&alive)
                    .filter(|(_, &on)| on)
                    .map(|(s, _)| *s)
                    .fold(f64::NEG_INFINITY, f64::max);
                let tol = 1e-9 * max.abs().max(1.0);
                (0..scores.len())
                    .find(|&i| alive[i] && scores[i] >= max - tol)
                    .expect("an edge is alive")
            }
        };
        alive[cut] = false;
        let parts = components(n, live_pairs(&alive));
        if parts.len() != levels.last().map_or(0, Vec::len) {
            levels.push(parts);
        }
    }

    let modularity: Vec<f64> = levels.iter().map(|l| modularity(g, &membership(n, l))).collect();
    let mut best = 0;
    for (i, &q) in modularity.iter().enumerate() {
        if q > modularity[best] {
            best = i;
        }
    }
    Ok(Dendrogram {
        levels,
        modularity,
        best,
    })
}

#[derive(PartialEq)]
struct Visit(f64, usize);

impl Eq for Visit {}

impl Ord for Visit {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

impl PartialOrd for Visit {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Weighted edge betweenness over the live edges (Brandes accumulation,
/// Dijkstra with length `1 / weight`). Dead edges score 0. Shortest paths
/// whose lengths agree to a relative 1e-12 count as equal.
pub fn edge_betweenness(g: &SimilarityGraph, alive: &[bool]) -> Vec<f64> {
    let n = g.node_count();
    let mut adj: Vec<Vec<(usize, f64, usize)>> = vec![Vec::new(); n];
    for (i, e) in g.edges().iter().enumerate() {
        if alive[i] {
            adj[e.a].push((e.b, 1.0 / e.weight, i));
            adj[e.b].push((e.a, 1.0 / e.weight, i));
        }
    }
    let mut score = vec![0.0; g.edges().len()];
    for s in 0..n {
        let mut dist = vec![f64::INFINITY; n];
        let mut sigma = vec![0.0f64; n];
        let mut preds: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        let mut done = vec![false; n];
        let mut order = Vec::with_capacity(n);
        dist[s] = 0.0;
        sigma[s] = 1.0;
        let mut heap = BinaryHeap::new();
        heap.push(Visit(0.0, s));
        while let Some(Visit(d, v)) = heap.pop() {
            if done[v] || d > dist[v] {
                continue;
            }
            done[v] = true;
            order.push(v);
            for &(w, len, edge) in &adj[v] {
                if done[w] {
                    continue;
                }
                let alt = d + len;
                let tol = 1e-12 * alt.max(1.0);
                if alt < dist[w] - tol {
                    dist[w] = alt;
                    sigma[w] = sigma[v];
                    preds[w].clear();
                    preds[w].push((v, edge));
                    heap.push(Visit(alt, w));
                } else if (alt - dist[w]).abs() <= tol {
                    sigma[w] += sigma[v];
                    preds[w].push((v, edge));
                }
            }
        }
        let mut delta = vec![0.0; n];
        for &w in order.iter().rev() {
            for &(v, edge) in &preds[w] {
                let c = sigma[v] / sigma[w] * (1.0 + delta[w]);
                score[edge] += c;
                delta[v] += c;
            }
        }
    }
    // each unordered pair was counted from both ends
    score.iter_mut().for_each(|x| *x /= 2.0);
    score
}

#[cfg(test)]
mod tests {
    use super::super::tests::graph;
    use super::*;

    #[test]
    fn triangle_cuts_weakest_edge_first() {
        let g = graph(3, &[(0, 1, 0.9), (1, 2, 0.9), (0, 2, 0.1)]);
        let d = girvan_newman(&g, GnMode::WeakestEdge).unwrap();
        // cutting 0.1 keeps the path 0-1-2; the next cut (0,1) isolates 0
        assert_eq!(
            d.levels,
            vec![
                vec![vec![0, 1, 2]],
                vec![vec![0], vec![1, 2]],
                vec![vec![0], vec![1], vec![2]],
            ]
        );
    }

    #[test]
    fn single_edge() {
        let g = graph(2, &[(0, 1, 0.4)]);
        for mode in [GnMode::WeakestEdge, GnMode::Betweenness] {
            let d = girvan_newman(&g, mode).unwrap();
            assert_eq!(d.levels, vec![vec![vec![0, 1]], vec![vec![0], vec![1]]]);
        }
    }

    fn two_cliques() -> SimilarityGraph {
        let mut edges = Vec::new();
        for block in [0usize, 4] {
            for a in block..block + 4 {
                for b in a + 1..block + 4 {
                    edges.push((a, b, 0.8));
                }
            }
        }
        edges.push((3, 4, 0.2));
        graph(8, &edges)
    }

    #[test]
    fn bridge_is_first_split_in_both_modes() {
        let g = two_cliques();
        for mode in [GnMode::WeakestEdge, GnMode::Betweenness] {
            let d = girvan_newman(&g, mode).unwrap();
            assert_eq!(d.levels[1], vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]]);
            assert_eq!(d.best, 1);
        }
    }

    #[test]
    fn bridge_has_highest_betweenness() {
        let g = two_cliques();
        let b = edge_betweenness(&g, &vec![true; g.edges().len()]);
        let bridge = g.edges().iter().position(|e| (e.a, e.b) == (3, 4)).unwrap();
        // the bridge carries all 16 cross pairs
        assert!((b[bridge] - 16.0).abs() < 1e-9);
    }

    #[test]
    fn edgeless_graph_has_one_level() {
        let g = graph(3, &[]);
        let d = girvan_newman(&g, GnMode::WeakestEdge).unwrap();
        assert_eq!(d.levels.len(), 1);
        assert_eq!(d.levels[0].len(), 3);
    }
}
