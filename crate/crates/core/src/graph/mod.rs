//! Class-similarity graph and community detection.

mod girvan_newman;
mod louvain;

pub use girvan_newman::{edge_betweenness, girvan_newman, Dendrogram, GnMode};
pub use louvain::louvain;

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{CallMatrix, Decomposition, Service, SimilarityMatrix};
use crate::similarity::format_float;

/// Node groups, each sorted, ordered by their smallest node.
pub type Communities = Vec<Vec<usize>>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
}

/// Undirected weighted graph over classes. Edges satisfy `a < b` and are
/// sorted by `(a, b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityGraph {
    names: Vec<String>,
    edges: Vec<Edge>,
}

impl SimilarityGraph {
    pub fn new(names: Vec<String>, mut edges: Vec<Edge>) -> Result<Self> {
        let n = names.len();
        for e in &mut edges {
            if e.a > e.b {
                std::mem::swap(&mut e.a, &mut e.b);
            }
            if e.a == e.b || e.b >= n {
                return Err(Error::InvalidParam(format!("bad edge ({}, {})", e.a, e.b)));
            }
            if !(e.weight > 0.0 && e.weight <= 1.0) {
                return Err(Error::InvalidParam(format!("edge weight {} outside (0, 1]", e.weight)));
            }
        }
        edges.sort_by_key(|e| (e.a, e.b));
        if edges.windows(2).any(|w| (w[0].a, w[0].b) == (w[1].a, w[1].b)) {
            return Err(Error::InvalidParam("parallel edges".into()));
        }
        Ok(SimilarityGraph { names, edges })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn degrees(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.node_count()];
        for e in &self.edges {
            d[e.a] += e.weight;
            d[e.b] += e.weight;
        }
        d
    }

    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.node_count()];
        for e in &self.edges {
            adj[e.a].push((e.b, e.weight));
            adj[e.b].push((e.a, e.weight));
        }
        adj
    }
}

/// Keeps every pair whose similarity is strictly above `threshold`.
pub fn build_graph(names: &[String], cs: &SimilarityMatrix, threshold: f64) -> Result<SimilarityGraph> {
    if names.len() != cs.len() {
        return Err(Error::DimensionMismatch(names.len(), cs.len()));
    }
    if !(threshold >= 0.0) {
        return Err(Error::InvalidParam(format!("threshold must be >= 0, got {threshold}")));
    }
    let mut edges = Vec::new();
    for a in 0..cs.len() {
        for b in a + 1..cs.len() {
            let w = cs.get(a, b);
            if w > threshold {
                edges.push(Edge { a, b, weight: w });
            }
        }
    }
    SimilarityGraph::new(names.to_vec(), edges)
}

/// Puts communities into canonical form.
pub fn canonical(mut groups: Communities) -> Communities {
    groups.retain(|g| !g.is_empty());
    for g in &mut groups {
        g.sort_unstable();
    }
    groups.sort_by_key(|g| g[0]);
    groups
}

pub fn membership(n: usize, groups: &Communities) -> Vec<usize> {
    let mut m = vec![usize::MAX; n];
    for (c, g) in groups.iter().enumerate() {
        for &v in g {
            m[v] = c;
        }
    }
    m
}

pub fn groups_from_membership(labels: &[usize]) -> Communities {
    let mut by: HashMap<usize, Vec<usize>> = HashMap::new();
    for (v, &c) in labels.iter().enumerate() {
        by.entry(c).or_default().push(v);
    }
    canonical(by.into_values().collect())
}

/// Connected components over a subset of edges.
/// Connected components of the graph in canonical order.
pub fn connected_components(g: &SimilarityGraph) -> Communities {
    components(g.node_count(), g.edges().iter().map(|e| (e.a, e.b)))
}

pub(crate) fn components(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Communities {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let labels: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
    groups_from_membership(&labels)
}

/// Weighted Newman modularity at resolution 1. Zero for an edgeless graph.
pub fn modularity(g: &SimilarityGraph, labels: &[usize]) -> f64 {
    let m = g.total_weight();
    if m == 0.0 {
        return 0.0;
    }
    let k = labels.iter().max().map_or(0, |x| x + 1);
    let mut inside = vec![0.0; k];
    let mut total = vec![0.0; k];
    for e in g.edges() {
        total[labels[e.a]] += e.weight;
        total[labels[e.b]] += e.weight;
        if labels[e.a] == labels[e.b] {
            inside[labels[e.a]] += e.weight;
        }
    }
    inside
        .iter()
        .zip(&total)
        .map(|(l, d)| l / m - (d / (2.0 * m)).powi(2))
        .sum()
}

/// Modularity of a decomposition that partitions the graph's classes.
pub fn decomposition_modularity(g: &SimilarityGraph, d: &Decomposition) -> Result<f64> {
    let index: HashMap<&str, usize> = g.names().iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let mut labels = vec![usize::MAX; g.node_count()];
    for (c, s) in d.services.iter().enumerate() {
        for class in &s.classes {
            let &v = index
                .get(class.as_str())
                .ok_or_else(|| Error::UnknownClass(class.clone()))?;
            if labels[v] != usize::MAX {
                return Err(Error::DuplicateClass(class.clone()));
            }
            labels[v] = c;
        }
    }
    if let Some(v) = labels.iter().position(|&l| l == usize::MAX) {
        return Err(Error::InvalidParam(format!(
            "class {} is not assigned to any service",
            g.names()[v]
        )));
    }
    Ok(modularity(g, &labels))
}

/// Names communities `service_<k>` in canonical order.
pub fn communities_to_decomposition(names: &[String], groups: &Communities) -> Result<Decomposition> {
    let services = groups
        .iter()
        .enumerate()
        .map(|(k, g)| Service::new(format!("service_{k}"), g.iter().map(|&v| names[v].clone()).collect()))
        .collect();
    Decomposition::computed(services, Vec::new())
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

const PALETTE_SIZE: usize = 12;

/// DOT rendering of the similarity graph. With `groups`, nodes carry a
/// `group` attribute and one fill colour per community.
pub fn to_dot(g: &SimilarityGraph, groups: Option<&[usize]>) -> String {
    let mut out = String::from("graph classes {\n  node [shape=box, style=filled, colorscheme=set312];\n");
    for (v, name) in g.names().iter().enumerate() {
        match groups {
            Some(labels) => {
                let _ = writeln!(
                    out,
                    "  {} [label={}, group={}, fillcolor={}];",
                    quote(name),
                    quote(name),
                    labels[v],
                    labels[v] % PALETTE_SIZE + 1
                );
            }
            None => {
                let _ = writeln!(out, "  {} [label={}];", quote(name), quote(name));
            }
        }
    }
    for e in g.edges() {
        let _ = writeln!(
            out,
            "  {} -- {} [weight={}];",
            quote(&g.names()[e.a]),
            quote(&g.names()[e.b]),
            format_float(e.weight)
        );
    }
    out.push_str("}\n");
    out
}

/// DOT rendering of the directed call graph, nodes coloured by service.
/// `groups[v]` is `None` for noise classes.
pub fn call_graph_dot(calls: &CallMatrix, groups: &[Option<usize>]) -> String {
    let mut out = String::from("digraph calls {\n  node [shape=box, style=filled, colorscheme=set312];\n");
    for (v, name) in calls.names().iter().enumerate() {
        match groups[v] {
            Some(c) => {
                let _ = writeln!(
                    out,
                    "  {} [label={}, group={}, fillcolor={}];",
                    quote(name),
                    quote(name),
                    c,
                    c % PALETTE_SIZE + 1
                );
            }
            None => {
                let _ = writeln!(
                    out,
                    "  {} [label={}, group=noise, fillcolor=white];",
                    quote(name),
                    quote(name)
                );
            }
        }
    }
    for a in 0..calls.len() {
        for b in 0..calls.len() {
            let c = calls.calls(a, b);
            if c > 0 {
                let _ = writeln!(
                    out,
                    "  {} -> {} [weight={c}];",
                    quote(calls.name(a)),
                    quote(calls.name(b))
                );
            }
        }
    }
    out.push_str("}\n");
    out
}
