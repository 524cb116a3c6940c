//! Recommends microservice decompositions of a monolith by clustering its
//! classes, and scores any decomposition with SM, ICP, IFN, NED and DUP.
//!
//! The crate is organised along the pipeline:
//!
//! - [`ingest`] reads call matrices and raw token files and runs identifier
//!   preprocessing (camel-case splitting, stopword removal, Porter stemming).
//! - [`similarity`] turns call counts into point encodings and builds the
//!   structural, semantic (TF-IDF cosine) and blended class similarities.
//! - [`cluster`] holds DBSCAN, mean shift and boosted mean shift (BMSC).
//! - [`graph`] builds the similarity graph and runs Girvan-Newman and Louvain.
//! - [`metrics`] scores decompositions.
//! - [`pipeline`] wires the stages together.

pub mod cluster;
pub mod error;
pub mod graph;
pub mod ingest;
pub mod metrics;
pub mod model;
pub mod pipeline;
pub mod similarity;

pub use error::{Error, Result};
pub use model::{
    validate_project, CallMatrix, ClassId, Decomposition, DecompositionSource, Encoding, EncodingScheme, HyperParams,
    MetricsReport, Neighborhood, Service, SimilarityKind, SimilarityMatrix, TfidfVector, TokenCorpus, Warning,
    NOISE_SERVICE,
};
