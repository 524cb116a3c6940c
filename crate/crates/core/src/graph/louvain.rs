use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{groups_from_membership, Communities, SimilarityGraph};

/// Gains below this are treated as no improvement.
const MIN_GAIN: f64 = 1e-12;

struct Level {
    adj: Vec<Vec<(usize, f64)>>,
    self_loops: Vec<f64>,
}

impl Level {
    fn degrees(&self) -> Vec<f64> {
        self.adj
            .iter()
            .zip(&self.self_loops)
            .map(|(nb, s)| nb.iter().map(|(_, w)| w).sum::<f64>() + 2.0 * s)
            .collect()
    }

    /// Local moving phase. Returns community per node, renumbered `0..k`.
    fn local_moves(&self, rng: &mut ChaCha8Rng) -> Vec<usize> {
        let n = self.adj.len();
        let k = self.degrees();
        let two_m: f64 = k.iter().sum();
        let mut comm: Vec<usize> = (0..n).collect();
        let mut tot = k.clone();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        loop {
            let mut moved = false;
            for &v in &order {
                let old = comm[v];
                let mut links: BTreeMap<usize, f64> = BTreeMap::new();
                for &(u, w) in &self.adj[v] {
                    *links.entry(comm[u]).or_default() += w;
                }
                tot[old] -= k[v];
                let gain = |c: usize, w_in: f64| w_in - tot[c] * k[v] / two_m;
                let mut best = old;
                let mut best_gain = gain(old, links.get(&old).copied().unwrap_or(0.0));
                for (&c, &w_in) in &links {
                    let g = gain(c, w_in);
                    if g > best_gain + MIN_GAIN {
                        best = c;
                        best_gain = g;
                    }
                }
                tot[best] += k[v];
                if best != old {
                    comm[v] = best;
                    moved = true;
                }
            }
            if !moved {
                break;
            }
        }
        let mut ids = BTreeMap::new();
        for &c in &comm {
            let next = ids.len();
            ids.entry(c).or_insert(next);
        }
        comm.iter().map(|c| ids[c]).collect()
    }

    fn aggregate(&self, comm: &[usize]) -> Level {
        let k = comm.iter().max().map_or(0, |m| m + 1);
        let mut self_loops = vec![0.0; k];
        let mut links: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); k];
        for (v, nb) in self.adj.iter().enumerate() {
            self_loops[comm[v]] += self.self_loops[v];
            for &(u, w) in nb {
                let (cv, cu) = (comm[v], comm[u]);
                if cv == cu {
                    // seen from both ends
                    self_loops[cv] += w / 2.0;
                } else {
                    *links[cv].entry(cu).or_default() += w;
                }
            }
        }
        Level {
            adj: links.into_iter().map(|m| m.into_iter().collect()).collect(),
            self_loops,
        }
    }
}

/// Multi-level Louvain modularity optimisation (resolution 1).
///
/// Node visiting order is a seeded shuffle drawn afresh at every level.
/// Nodes only move on a strictly positive gain, so components never merge.
pub fn louvain(g: &SimilarityGraph, seed: u64) -> Communities {
    let n = g.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut level = Level {
        adj: g.adjacency(),
        self_loops: vec![0.0; n],
    };
    let mut node_of: Vec<usize> = (0..n).collect();
    if g.total_weight() == 0.0 {
        return groups_from_membership(&node_of);
    }
    loop {
        let comm = level.local_moves(&mut rng);
        let count = comm.iter().max().map_or(0, |m| m + 1);
        for x in node_of.iter_mut() {
            *x = comm[*x];
        }
        if count == level.adj.len() {
            break;
        }
        level = level.aggregate(&comm);
    }
    groups_from_membership(&node_of)
}
