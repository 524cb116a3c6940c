use std::fs;
use std::path::{Path, PathBuf};

use log::{info, warn};
use monosplit_core::ingest::{build_corpus, corpus_to_json, load_call_matrix, load_corpus_json, load_token_file};
use monosplit_core::metrics::{evaluate, report_to_json, reports_to_csv};
use monosplit_core::pipeline::{self, decompose, eps_grid, sweep, sweep_to_csv, PipelineConfig, Project};
use monosplit_core::similarity::{
    align_vectors, class_similarity, matrix_to_csv, semantic_similarity, structural_similarity_with, tfidf,
    StructuralMode,
};
use monosplit_core::{graph, validate_project, CallMatrix, Decomposition, Error, HyperParams, Result, TokenCorpus};

use crate::args::{self, Cli, Command, Emit, Format, Input, Kind, RunArgs};

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Preprocess { tokens, out } => preprocess(&tokens, &out),
        Command::Similarity {
            input,
            kind,
            alpha,
            structural,
            out,
        } => similarity(&input, kind, alpha, structural, &out),
        Command::Decompose { input, run, emit } => run_decompose(&input, &run, &emit),
        Command::Evaluate {
            calls,
            decomposition,
            emit,
        } => run_evaluate(&calls, &decomposition, &emit),
        Command::Sweep {
            input,
            run,
            eps_from,
            eps_to,
            eps_step,
            out,
        } => run_sweep(&input, &run, (eps_from, eps_to, eps_step), &out),
    }
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| io_error(&path, e))?;
    info!("wrote {}", path.display());
    Ok(())
}

fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn load_tokens(path: &Path) -> Result<TokenCorpus> {
    if path.extension().is_some_and(|e| e == "json") {
        return load_corpus_json(path);
    }
    let (corpus, warnings) = build_corpus(&load_token_file(path)?)?;
    for w in warnings {
        warn!("{w}");
    }
    Ok(corpus)
}

fn load_project(input: &Input) -> Result<Project> {
    let (calls, warnings) = load_call_matrix(&input.calls)?;
    for w in warnings {
        warn!("{w}");
    }
    let corpus = match &input.tokens {
        Some(path) => {
            let corpus = load_tokens(path)?;
            for w in validate_project(&calls, &corpus)? {
                warn!("{w}");
            }
            Some(corpus)
        }
        None => None,
    };
    Ok(Project { calls, corpus })
}

fn preprocess(tokens: &Path, out: &Path) -> Result<()> {
    let (corpus, warnings) = build_corpus(&load_token_file(tokens)?)?;
    for w in warnings {
        warn!("{w}");
    }
    write(out, "corpus.json", &with_newline(corpus_to_json(&corpus)?))?;
    println!("{} classes, {} distinct stems", corpus.len(), corpus.vocabulary().len());
    Ok(())
}

fn semantic_for(calls: &CallMatrix, corpus: Option<&TokenCorpus>) -> Result<monosplit_core::SimilarityMatrix> {
    let corpus = corpus.ok_or_else(|| Error::InvalidParam("semantic similarity needs --tokens".into()))?;
    let vectors = align_vectors(calls, &tfidf(corpus), corpus.vocabulary().len());
    semantic_similarity(&vectors)
}

fn similarity(input: &Input, kind: Kind, alpha: f64, structural: args::Structural, out: &Path) -> Result<()> {
    let project = load_project(input)?;
    let calls = &project.calls;
    let mode = match structural {
        args::Structural::Symmetric => StructuralMode::SymmetricTotal,
        args::Structural::Directed => StructuralMode::Directed,
    };
    let matrix = match kind {
        Kind::Structural => structural_similarity_with(calls, mode),
        Kind::Semantic => semantic_for(calls, project.corpus.as_ref())?,
        Kind::Blended => {
            let s = structural_similarity_with(calls, mode);
            if alpha == 1.0 && project.corpus.is_none() {
                s
            } else {
                class_similarity(&s, &semantic_for(calls, project.corpus.as_ref())?, alpha)?
            }
        }
    };
    write(out, "similarity.csv", &matrix_to_csv(calls.names(), &matrix))
}

fn config(run: &RunArgs) -> Result<PipelineConfig> {
    let approach = match run.approach {
        args::Approach::Naive => pipeline::Approach::Naive,
        args::Approach::Codependent => pipeline::Approach::Codependent,
        args::Approach::Graph => pipeline::Approach::Graph,
    };
    let algorithm = match run.algorithm {
        args::Algorithm::Dbscan => pipeline::Algorithm::Dbscan,
        args::Algorithm::Meanshift => pipeline::Algorithm::MeanShift,
        args::Algorithm::Bmsc => pipeline::Algorithm::Bmsc,
        args::Algorithm::GirvanNewman => pipeline::Algorithm::GirvanNewman,
        args::Algorithm::Louvain => pipeline::Algorithm::Louvain,
    };
    let mut cfg = PipelineConfig::new(approach, algorithm);
    cfg.params = HyperParams {
        eps: run.eps,
        min_pts: run.min_pts,
        min_pts_imodes: run.min_pts_imodes,
        bandwidth: run.bandwidth,
        grid_rows: run.grid.0,
        grid_cols: run.grid.1,
        neighborhood: run.neighborhood.parse()?,
        alpha: run.alpha,
        seed: run.seed,
        max_bmsc_iters: run.max_iters,
    };
    cfg.threshold = run.threshold;
    cfg.gn_mode = match run.gn_mode {
        args::GnMode::WeakestEdge => graph::GnMode::WeakestEdge,
        args::GnMode::Betweenness => graph::GnMode::Betweenness,
    };
    cfg.scaling = match run.scaling {
        args::Scaling::None => pipeline::Scaling::None,
        args::Scaling::Minmax => pipeline::Scaling::MinMax,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn emit_report(emit: &Emit, label: &str, report: &monosplit_core::MetricsReport) -> Result<()> {
    if emit.format.contains(&Format::Json) {
        write(&emit.out, "metrics.json", &with_newline(report_to_json(report)?))?;
    }
    if emit.format.contains(&Format::Csv) {
        write(&emit.out, "metrics.csv", &reports_to_csv(&[(label, report)]))?;
    }
    Ok(())
}

fn summary(d: &Decomposition, report: &monosplit_core::MetricsReport) {
    println!(
        "{} services, {} noise classes: SM={} ICP={} IFN={} NED={} DUP={}",
        d.len(),
        d.noise.len(),
        report.sm,
        report.icp,
        report.ifn,
        report.ned,
        report.dup
    );
}

fn run_decompose(input: &Input, run: &RunArgs, emit: &Emit) -> Result<()> {
    let cfg = config(run)?;
    let project = load_project(input)?;
    let outcome = decompose(&project, &cfg)?;
    for w in &outcome.warnings {
        warn!("{w}");
    }
    info!("finished after {} iterations", outcome.iterations);
    write(
        &emit.out,
        "decomposition.json",
        &with_newline(outcome.decomposition.to_json()?),
    )?;
    let label = format!("{}+{}", cfg.approach.name(), cfg.algorithm.name());
    emit_report(emit, &label, &outcome.report)?;
    if emit.format.contains(&Format::Dot) {
        write(&emit.out, "graph.dot", &outcome.dot)?;
    }
    summary(&outcome.decomposition, &outcome.report);
    Ok(())
}

fn run_evaluate(calls: &Path, decomposition: &Path, emit: &Emit) -> Result<()> {
    let (matrix, warnings) = load_call_matrix(calls)?;
    for w in warnings {
        warn!("{w}");
    }
    let text = fs::read_to_string(decomposition).map_err(|e| io_error(decomposition, e))?;
    let d = Decomposition::from_json(&text).map_err(|e| Error::Format {
        path: PathBuf::from(decomposition),
        message: e.to_string(),
    })?;
    let report = evaluate(&matrix, &d)?;
    let label = decomposition
        .file_stem()
        .map_or_else(|| "decomposition".to_string(), |s| s.to_string_lossy().into_owned());
    emit_report(emit, &label, &report)?;
    if emit.format.contains(&Format::Dot) {
        warn!("evaluate does not draw graphs; --format dot ignored");
    }
    summary(&d, &report);
    Ok(())
}

fn run_sweep(input: &Input, run: &RunArgs, (from, to, step): (f64, f64, f64), out: &Path) -> Result<()> {
    let grid = eps_grid(from, to, step)?;
    let cfg = config(run)?;
    let project = load_project(input)?;
    let rows = sweep(&project, &cfg, &grid)?;
    write(out, "sweep.csv", &sweep_to_csv(&rows))?;
    println!("{} eps values", rows.len());
    Ok(())
}
