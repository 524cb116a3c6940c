//! End-to-end wiring: representation, clustering, scoring.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::cluster::{bmsc, dbscan, estimate_bandwidth, mean_shift, ClusterResult};
use crate::error::{Error, Result};
use crate::graph::{
    build_graph, call_graph_dot, communities_to_decomposition, girvan_newman, louvain, membership, to_dot, GnMode,
};
use crate::metrics::evaluate;
use crate::model::{CallMatrix, Decomposition, Encoding, HyperParams, MetricsReport, TokenCorpus, Warning};
use crate::similarity::{
    codependent_encoding, format_float, naive_encoding, project_similarity, structural_similarity,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Approach {
    Naive,
    Codependent,
    Graph,
}

impl Approach {
    pub fn name(self) -> &'static str {
        match self {
            Approach::Naive => "naive",
            Approach::Codependent => "codependent",
            Approach::Graph => "graph",
        }
    }
}

impl FromStr for Approach {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Approach::Naive),
            "codependent" => Ok(Approach::Codependent),
            "graph" => Ok(Approach::Graph),
            other => Err(Error::InvalidParam(format!("unknown approach `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Dbscan,
    MeanShift,
    Bmsc,
    GirvanNewman,
    Louvain,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Dbscan => "dbscan",
            Algorithm::MeanShift => "meanshift",
            Algorithm::Bmsc => "bmsc",
            Algorithm::GirvanNewman => "girvan-newman",
            Algorithm::Louvain => "louvain",
        }
    }

    pub fn is_graph(self) -> bool {
        matches!(self, Algorithm::GirvanNewman | Algorithm::Louvain)
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dbscan" => Ok(Algorithm::Dbscan),
            "meanshift" | "mean-shift" => Ok(Algorithm::MeanShift),
            "bmsc" => Ok(Algorithm::Bmsc),
            "girvan-newman" | "gn" => Ok(Algorithm::GirvanNewman),
            "louvain" => Ok(Algorithm::Louvain),
            other => Err(Error::InvalidParam(format!("unknown algorithm `{other}`"))),
        }
    }
}

/// Preprocessing applied to point encodings before clustering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scaling {
    /// Raw encodings.
    #[default]
    None,
    /// Each axis mapped onto `[0, 1]`.
    MinMax,
}

impl FromStr for Scaling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Scaling::None),
            "minmax" => Ok(Scaling::MinMax),
            other => Err(Error::InvalidParam(format!("unknown scaling `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub approach: Approach,
    pub algorithm: Algorithm,
    pub params: HyperParams,
    pub threshold: f64,
    pub gn_mode: GnMode,
    pub scaling: Scaling,
}

impl PipelineConfig {
    pub fn new(approach: Approach, algorithm: Algorithm) -> Self {
        PipelineConfig {
            approach,
            algorithm,
            params: HyperParams::default(),
            threshold: 0.0,
            gn_mode: GnMode::default(),
            scaling: Scaling::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let graph_approach = self.approach == Approach::Graph;
        if graph_approach != self.algorithm.is_graph() {
            return Err(Error::Incompatible(format!(
                "approach `{}` cannot be combined with algorithm `{}`",
                self.approach.name(),
                self.algorithm.name()
            )));
        }
        self.params.validate()
    }
}

/// A call matrix and, when available, its token corpus.
#[derive(Debug, Clone)]
pub struct Project {
    pub calls: CallMatrix,
    pub corpus: Option<TokenCorpus>,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub decomposition: Decomposition,
    pub report: MetricsReport,
    /// Community-coloured graph in DOT syntax.
    pub dot: String,
    pub iterations: usize,
    pub warnings: Vec<Warning>,
}

pub fn encode(calls: &CallMatrix, approach: Approach, scaling: Scaling) -> Result<(Encoding, Vec<Warning>)> {
    let (encoding, warnings) = match approach {
        Approach::Naive => (naive_encoding(calls), Vec::new()),
        Approach::Codependent => {
            let (e, report) = codependent_encoding(calls);
            (e, report.warnings)
        }
        Approach::Graph => return Err(Error::Incompatible("the graph approach has no point encoding".into())),
    };
    let encoding = match scaling {
        Scaling::None => encoding,
        Scaling::MinMax => encoding.min_max_scaled(),
    };
    Ok((encoding, warnings))
}

fn cluster_points(points: &[Vec<f64>], config: &PipelineConfig) -> Result<(ClusterResult, Vec<Warning>)> {
    let p = &config.params;
    match config.algorithm {
        Algorithm::Dbscan => Ok((dbscan(points, p.eps, p.min_pts)?, Vec::new())),
        Algorithm::MeanShift => {
            let bw = match p.bandwidth {
                Some(bw) => bw,
                None => estimate_bandwidth(points).unwrap_or(1.0),
            };
            Ok((mean_shift(points, bw)?, Vec::new()))
        }
        Algorithm::Bmsc => {
            let r = bmsc(points, p)?;
            Ok((r.clusters, r.warnings))
        }
        Algorithm::GirvanNewman | Algorithm::Louvain => unreachable!("validated"),
    }
}

pub fn decompose(project: &Project, config: &PipelineConfig) -> Result<Outcome> {
    config.validate()?;
    let calls = &project.calls;
    if calls.is_empty() {
        return Err(Error::NoClasses);
    }
    let (decomposition, dot, iterations, warnings) = if config.approach == Approach::Graph {
        let cs = match &project.corpus {
            Some(corpus) => project_similarity(calls, corpus, config.params.alpha)?,
            None if config.params.alpha == 1.0 => structural_similarity(calls),
            None => {
                return Err(Error::InvalidParam(
                    "the graph approach needs a token file unless alpha is 1".into(),
                ))
            }
        };
        let g = build_graph(calls.names(), &cs, config.threshold)?;
        let (groups, iterations) = match config.algorithm {
            Algorithm::GirvanNewman => {
                let d = girvan_newman(&g, config.gn_mode)?;
                let levels = d.levels.len();
                (d.recommended().clone(), levels)
            }
            _ => (louvain(&g, config.params.seed), 1),
        };
        let labels = membership(calls.len(), &groups);
        let decomposition = communities_to_decomposition(calls.names(), &groups)?;
        (decomposition, to_dot(&g, Some(&labels)), iterations, Vec::new())
    } else {
        let (encoding, mut warnings) = encode(calls, config.approach, config.scaling)?;
        let (result, more) = cluster_points(encoding.points(), config)?;
        warnings.extend(more);
        if result.cluster_count() == 0 {
            return Err(Error::AllNoise);
        }
        let decomposition = Decomposition::from_labels(calls.names(), &result.labels)?;
        let dot = call_graph_dot(calls, &result.labels);
        (decomposition, dot, result.iterations, warnings)
    };
    let report = evaluate(calls, &decomposition)?;
    Ok(Outcome {
        decomposition,
        report,
        dot,
        iterations,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub eps: f64,
    /// Set for `eps <= 0`, which no density clustering accepts.
    pub degenerate: bool,
    pub clusters: usize,
    pub noise: usize,
    pub report: Option<MetricsReport>,
}

/// Evenly spaced values `from, from + step, ...` up to `to` inclusive.
pub fn eps_grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidParam(format!("step must be positive, got {step}")));
    }
    if !(from.is_finite() && to.is_finite()) || to < from {
        return Err(Error::InvalidParam(format!("bad range {from}..{to}")));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize;
    Ok((0..=count)
        .map(|k| ((from + k as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

/// Reruns a point-based decomposition for every eps value.
pub fn sweep(project: &Project, config: &PipelineConfig, eps_values: &[f64]) -> Result<Vec<SweepRow>> {
    if !matches!(config.algorithm, Algorithm::Dbscan | Algorithm::Bmsc) {
        return Err(Error::Incompatible("sweeps need dbscan or bmsc".into()));
    }
    let mut base = config.clone();
    base.params.eps = 1.0;
    base.validate()?;
    let (encoding, _) = encode(&project.calls, config.approach, config.scaling)?;
    eps_values
        .iter()
        .map(|&eps| {
            if eps <= 0.0 {
                return Ok(SweepRow {
                    eps,
                    degenerate: true,
                    clusters: 0,
                    noise: project.calls.len(),
                    report: None,
                });
            }
            let mut run = base.clone();
            run.params.eps = eps;
            let (result, _) = cluster_points(encoding.points(), &run)?;
            let clusters = result.cluster_count();
            let report = if clusters == 0 {
                None
            } else {
                let d = Decomposition::from_labels(project.calls.names(), &result.labels)?;
                Some(evaluate(&project.calls, &d)?)
            };
            Ok(SweepRow {
                eps,
                degenerate: false,
                clusters,
                noise: result.noise_count(),
                report,
            })
        })
        .collect()
}

pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("eps,degenerate,clusters,noise,sm,icp,ifn,ned,dup\n");
    for r in rows {
        let _ = write!(
            out,
            "{},{},{},{}",
            format_float(r.eps),
            r.degenerate,
            r.clusters,
            r.noise
        );
        match &r.report {
            Some(m) => {
                let _ = writeln!(
                    out,
                    ",{},{},{},{},{}",
                    format_float(m.sm),
                    format_float(m.icp),
                    format_float(m.ifn),
                    format_float(m.ned),
                    m.dup
                );
            }
            None => out.push_str(",,,,,\n"),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incompatible_pairs() {
        for (a, g) in [
            (Approach::Naive, Algorithm::Louvain),
            (Approach::Codependent, Algorithm::GirvanNewman),
            (Approach::Graph, Algorithm::Dbscan),
        ] {
            assert!(matches!(
                PipelineConfig::new(a, g).validate(),
                Err(Error::Incompatible(_))
            ));
        }
        PipelineConfig::new(Approach::Graph, Algorithm::Louvain)
            .validate()
            .unwrap();
    }

    #[test]
    fn grid_arithmetic() {
        assert_eq!(eps_grid(0.0, 1.0, 0.25).unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(eps_grid(0.0, 1.0, 0.05).unwrap().len(), 21);
        assert_eq!(eps_grid(0.0, 1.0, 0.05).unwrap()[6], 0.3);
        assert!(eps_grid(0.0, 1.0, 0.0).is_err());
        assert!(eps_grid(0.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn all_noise_is_reported() {
        let names = (0..3).map(|i| format!("C{i}")).collect();
        let calls = CallMatrix::from_rows(names, vec![vec![0, 1, 0], vec![0, 0, 9], vec![0, 0, 0]]).unwrap();
        let project = Project { calls, corpus: None };
        let mut cfg = PipelineConfig::new(Approach::Naive, Algorithm::Dbscan);
        cfg.params.eps = 0.01;
        assert!(matches!(decompose(&project, &cfg), Err(Error::AllNoise)));
    }
}
