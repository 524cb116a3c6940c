//! Domain types shared by every stage of the pipeline.
//!
//! Classes are identified by their fully qualified name. The integer index of a
//! class is its position in the call matrix, assigned in file order, and is an
//! internal detail of the numeric kernels.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reserved name under which clustering noise is reported. Never scored.
pub const NOISE_SERVICE: &str = "__noise__";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassId {
    pub index: usize,
    pub name: String,
}

/// Non-fatal findings produced while loading or processing a project.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    SelfCalls { class: String, count: u64 },
    IsolatedClass(String),
    MissingTokens(String),
    UnmatchedTokens(String),
    EmptyDocument(String),
    DegenerateEncoding(String),
    SparseGrid { cells: usize, points: usize },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::SelfCalls { class, count } => {
                write!(f, "ignored {count} self-calls of class {class}")
            }
            Warning::IsolatedClass(c) => write!(f, "isolated class {c}"),
            Warning::MissingTokens(c) => write!(f, "missing token document for class {c}"),
            Warning::UnmatchedTokens(c) => write!(f, "unmatched token document {c}"),
            Warning::EmptyDocument(c) => write!(f, "empty token document for class {c}"),
            Warning::DegenerateEncoding(c) => {
                write!(f, "class {c} has no codependent partner, encoded as [0, 0]")
            }
            Warning::SparseGrid { cells, points } => {
                write!(f, "grid has {cells} cells for {points} points, some cells stay empty")
            }
        }
    }
}

/// Directed class-to-class call counts. `calls(i, j)` is the number of calls
/// from class `i` to class `j`. The diagonal is always zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CallMatrix {
    names: Vec<String>,
    counts: Vec<u64>,
    lookup: HashMap<String, usize>,
}

impl CallMatrix {
    /// Builds a matrix from named rows. Self-calls are dropped and reported.
    pub fn new(names: Vec<String>, rows: Vec<Vec<u64>>) -> Result<(Self, Vec<Warning>)> {
        let n = names.len();
        if rows.len() != n {
            return Err(Error::NonSquare {
                rows: rows.len(),
                columns: n,
            });
        }
        let mut lookup = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::InvalidParam(format!("class {i} has an empty name")));
            }
            if lookup.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateClass(name.clone()));
            }
        }
        let mut counts = Vec::with_capacity(n * n);
        let mut warnings = Vec::new();
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::NonSquare {
                    rows: n,
                    columns: row.len(),
                });
            }
            if row[i] != 0 {
                warnings.push(Warning::SelfCalls {
                    class: names[i].clone(),
                    count: row[i],
                });
            }
            counts.extend(row.into_iter().enumerate().map(|(j, c)| if i == j { 0 } else { c }));
        }
        Ok((CallMatrix { names, counts, lookup }, warnings))
    }

    /// Like [`CallMatrix::new`] but discards warnings.
    pub fn from_rows(names: Vec<String>, rows: Vec<Vec<u64>>) -> Result<Self> {
        Self::new(names, rows).map(|(m, _)| m)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.lookup.get(name).copied()
    }

    pub fn class_id(&self, index: usize) -> ClassId {
        ClassId {
            index,
            name: self.names[index].clone(),
        }
    }

    #[inline]
    pub fn calls(&self, from: usize, to: usize) -> u64 {
        self.counts[from * self.names.len() + to]
    }

    pub fn row(&self, from: usize) -> &[u64] {
        let n = self.names.len();
        &self.counts[from * n..(from + 1) * n]
    }

    /// Column sum: every call received by `class`.
    pub fn call_in(&self, class: usize) -> u64 {
        (0..self.len()).map(|s| self.calls(s, class)).sum()
    }

    /// Row sum: every call issued by `class`.
    pub fn call_out(&self, class: usize) -> u64 {
        self.row(class).iter().sum()
    }

    pub fn total_calls(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Dense row-major copy of the counts.
    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.len()).map(|i| self.row(i).to_vec()).collect()
    }
}

/// Per-class bags of preprocessed word stems.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CorpusFile", into = "CorpusFile")]
pub struct TokenCorpus {
    docs: BTreeMap<String, Vec<String>>,
    vocabulary: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct CorpusFile {
    docs: BTreeMap<String, Vec<String>>,
    vocabulary: Vec<String>,
}

impl TryFrom<CorpusFile> for TokenCorpus {
    type Error = Error;

    fn try_from(file: CorpusFile) -> Result<Self> {
        let corpus = TokenCorpus::from_docs(file.docs);
        if corpus.vocabulary != file.vocabulary {
            return Err(Error::InvalidParam(
                "corpus vocabulary does not match its documents".into(),
            ));
        }
        Ok(corpus)
    }
}

impl From<TokenCorpus> for CorpusFile {
    fn from(c: TokenCorpus) -> Self {
        CorpusFile {
            docs: c.docs,
            vocabulary: c.vocabulary,
        }
    }
}

impl TokenCorpus {
    pub fn from_docs(docs: BTreeMap<String, Vec<String>>) -> Self {
        let vocabulary: BTreeSet<&String> = docs.values().flatten().collect();
        let vocabulary = vocabulary.into_iter().cloned().collect();
        TokenCorpus { docs, vocabulary }
    }

    pub fn docs(&self) -> &BTreeMap<String, Vec<String>> {
        &self.docs
    }

    pub fn doc(&self, class: &str) -> Option<&[String]> {
        self.docs.get(class).map(Vec::as_slice)
    }

    /// Sorted distinct stems across all documents.
    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }
}

/// Dense TF-IDF weights over the corpus vocabulary.
#[derive(Debug, Clone, PartialEq)]
pub struct TfidfVector(pub Vec<f64>);

impl TfidfVector {
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|w| w * w).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimilarityKind {
    Structural,
    Semantic,
    Blended,
}

/// Symmetric matrix with entries in `[0, 1]` and a unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    kind: SimilarityKind,
    n: usize,
    values: Vec<f64>,
}

impl SimilarityMatrix {
    /// Evaluates `f(i, j)` on the strict upper triangle and mirrors it.
    pub fn from_fn(n: usize, kind: SimilarityKind, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            values[i * n + i] = 1.0;
            for j in i + 1..n {
                let v = f(i, j);
                debug_assert!((0.0..=1.0).contains(&v), "similarity {v} out of range");
                values[i * n + j] = v;
                values[j * n + i] = v;
            }
        }
        SimilarityMatrix { kind, n, values }
    }

    pub fn kind(&self) -> SimilarityKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EncodingScheme {
    Naive,
    Codependent,
}

/// One numeric point per class, indexed like the call matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Encoding {
    scheme: EncodingScheme,
    points: Vec<Vec<f64>>,
}

impl Encoding {
    pub fn new(scheme: EncodingScheme, points: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(i) = points.iter().position(|p| p.iter().any(|v| !v.is_finite())) {
            return Err(Error::InvalidParam(format!("encoding of class {i} is not finite")));
        }
        Ok(Encoding { scheme, points })
    }

    pub fn scheme(&self) -> EncodingScheme {
        self.scheme
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Rescales every axis to `[0, 1]`. Constant axes map to 0.
    pub fn min_max_scaled(&self) -> Encoding {
        let dim = self.points.first().map_or(0, Vec::len);
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for p in &self.points {
            for (d, &v) in p.iter().enumerate() {
                lo[d] = lo[d].min(v);
                hi[d] = hi[d].max(v);
            }
        }
        let points = self
            .points
            .iter()
            .map(|p| {
                p.iter()
                    .enumerate()
                    .map(|(d, &v)| {
                        let span = hi[d] - lo[d];
                        if span > 0.0 {
                            (v - lo[d]) / span
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect();
        Encoding {
            scheme: self.scheme,
            points,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecompositionSource {
    Computed,
    #[default]
    External,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Service {
    pub name: String,
    pub classes: Vec<String>,
}

impl Service {
    pub fn new(name: impl Into<String>, classes: Vec<String>) -> Self {
        Service {
            name: name.into(),
            classes,
        }
    }
}

/// Assignment of classes to named services.
///
/// Computed decompositions are exact partitions of the non-noise classes.
/// External ones may list a class under several services.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DecompositionFile")]
pub struct Decomposition {
    pub source: DecompositionSource,
    pub services: Vec<Service>,
    pub noise: Vec<String>,
}

#[derive(Deserialize)]
struct DecompositionFile {
    #[serde(default)]
    source: DecompositionSource,
    services: Vec<Service>,
    #[serde(default)]
    noise: Vec<String>,
}

impl TryFrom<DecompositionFile> for Decomposition {
    type Error = Error;

    fn try_from(file: DecompositionFile) -> Result<Self> {
        let mut noise = file.noise;
        let mut services = Vec::with_capacity(file.services.len());
        for s in file.services {
            if s.name == NOISE_SERVICE {
                noise.extend(s.classes);
            } else {
                services.push(s);
            }
        }
        match file.source {
            DecompositionSource::Computed => Decomposition::computed(services, noise),
            DecompositionSource::External => Decomposition::external(services, noise),
        }
    }
}

impl Decomposition {
    /// A partition: no class may appear twice, noise included.
    pub fn computed(services: Vec<Service>, noise: Vec<String>) -> Result<Self> {
        let d = Decomposition {
            source: DecompositionSource::Computed,
            services,
            noise,
        };
        d.check_services()?;
        let mut seen = BTreeSet::new();
        for class in d.services.iter().flat_map(|s| &s.classes).chain(&d.noise) {
            if !seen.insert(class.as_str()) {
                return Err(Error::DuplicateClass(class.clone()));
            }
        }
        Ok(d)
    }

    /// Duplication across services is allowed; duplicates inside one
    /// service are collapsed.
    pub fn external(mut services: Vec<Service>, noise: Vec<String>) -> Result<Self> {
        for s in &mut services {
            let mut seen = BTreeSet::new();
            s.classes.retain(|c| seen.insert(c.clone()));
        }
        let d = Decomposition {
            source: DecompositionSource::External,
            services,
            noise,
        };
        d.check_services()?;
        Ok(d)
    }

    /// Turns cluster labels (`None` = noise) into services named
    /// `service_<id>`, ordered by cluster id.
    pub fn from_labels(names: &[String], labels: &[Option<usize>]) -> Result<Self> {
        if names.len() != labels.len() {
            return Err(Error::DimensionMismatch(names.len(), labels.len()));
        }
        let mut groups: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        let mut noise = Vec::new();
        for (name, label) in names.iter().zip(labels) {
            match label {
                Some(id) => groups.entry(*id).or_default().push(name.clone()),
                None => noise.push(name.clone()),
            }
        }
        let services = groups
            .into_iter()
            .map(|(id, classes)| Service::new(format!("service_{id}"), classes))
            .collect();
        Decomposition::computed(services, noise)
    }

    fn check_services(&self) -> Result<()> {
        let mut names = BTreeSet::new();
        for s in &self.services {
            if s.name == NOISE_SERVICE {
                return Err(Error::InvalidParam(format!("`{NOISE_SERVICE}` is reserved for noise")));
            }
            if !names.insert(s.name.as_str()) {
                return Err(Error::DuplicateService(s.name.clone()));
            }
            if s.classes.is_empty() {
                return Err(Error::EmptyService(s.name.clone()));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.services.len()
    }

    pub fn is_empty(&self) -> bool {
        self.services.is_empty()
    }

    /// Classes listed under more than one service, each counted once.
    pub fn duplicated_classes(&self) -> BTreeSet<&str> {
        let mut count: BTreeMap<&str, usize> = BTreeMap::new();
        for c in self.services.iter().flat_map(|s| &s.classes) {
            *count.entry(c.as_str()).or_default() += 1;
        }
        count.into_iter().filter(|&(_, k)| k > 1).map(|(c, _)| c).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Neighborhood {
    /// The cell and its four axis neighbours.
    #[serde(rename = "linear5")]
    Linear5,
    /// The cell and the two nearest cells along each axis direction.
    #[serde(rename = "linear9")]
    Linear9,
    /// The surrounding 3x3 block.
    #[serde(rename = "compact9")]
    Compact9,
    /// Every cell within Manhattan distance 2.
    #[serde(rename = "compact13")]
    Compact13,
}

impl std::str::FromStr for Neighborhood {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linear5" | "linear(5)" | "l5" => Ok(Neighborhood::Linear5),
            "linear9" | "linear(9)" | "l9" => Ok(Neighborhood::Linear9),
            "compact9" | "compact(9)" | "c9" => Ok(Neighborhood::Compact9),
            "compact13" | "compact(13)" | "c13" => Ok(Neighborhood::Compact13),
            other => Err(Error::InvalidParam(format!("unknown neighborhood `{other}`"))),
        }
    }
}

/// Clustering and blending parameters. `beta` is always `1 - alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperParams {
    pub eps: f64,
    pub min_pts: usize,
    /// `min_pts` used when grouping intermediate modes inside BMSC.
    pub min_pts_imodes: usize,
    /// Mean-shift bandwidth. `None` estimates it from the data.
    pub bandwidth: Option<f64>,
    pub grid_rows: usize,
    pub grid_cols: usize,
    pub neighborhood: Neighborhood,
    pub alpha: f64,
    pub seed: u64,
    pub max_bmsc_iters: usize,
}

impl Default for HyperParams {
    fn default() -> Self {
        HyperParams {
            eps: 0.65,
            min_pts: 5,
            min_pts_imodes: 1,
            bandwidth: None,
            grid_rows: 3,
            grid_cols: 3,
            neighborhood: Neighborhood::Linear5,
            alpha: 0.5,
            seed: 0,
            max_bmsc_iters: 50,
        }
    }
}

impl HyperParams {
    pub fn beta(&self) -> f64 {
        1.0 - self.alpha
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParam(msg));
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return bad(format!("eps must be positive, got {}", self.eps));
        }
        if self.min_pts < 1 || self.min_pts_imodes < 1 {
            return bad("min_pts must be at least 1".into());
        }
        if let Some(bw) = self.bandwidth {
            if !(bw > 0.0 && bw.is_finite()) {
                return bad(format!("bandwidth must be positive, got {bw}"));
            }
        }
        if self.grid_rows < 1 || self.grid_cols < 1 {
            return bad("grid dimensions must be at least 1x1".into());
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return bad(format!("alpha must lie in [0, 1], got {}", self.alpha));
        }
        if self.max_bmsc_iters < 3 {
            return bad("max_bmsc_iters must be at least 3".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ServiceReport {
    pub name: String,
    pub size: usize,
    pub scoh: f64,
    pub ifn: usize,
    pub extreme: bool,
}

/// Directed calls from one service to another, with their share of all
/// inter-service calls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub from: String,
    pub to: String,
    pub calls: u64,
    pub icp: f64,
}

/// Structural coupling of an unordered service pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingReport {
    pub a: String,
    pub b: String,
    pub calls: u64,
    pub scop: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub sm: f64,
    pub icp: f64,
    pub ifn: f64,
    pub ned: f64,
    pub dup: usize,
    /// Denominator used for the aggregate ICP.
    pub icp_denominator: String,
    pub services: Vec<ServiceReport>,
    pub pairs: Vec<PairReport>,
    pub coupling: Vec<CouplingReport>,
}

/// Cross-checks a call matrix against a token corpus.
pub fn validate_project(calls: &CallMatrix, tokens: &TokenCorpus) -> Result<Vec<Warning>> {
    if calls.is_empty() {
        return Err(Error::NoClasses);
    }
    let matched = calls.names().iter().filter(|n| tokens.doc(n).is_some()).count();
    if matched == 0 && !tokens.is_empty() {
        return Err(Error::DisjointProject);
    }
    let mut warnings = Vec::new();
    for (i, name) in calls.names().iter().enumerate() {
        if calls.call_in(i) == 0 && calls.call_out(i) == 0 {
            warnings.push(Warning::IsolatedClass(name.clone()));
        }
        if tokens.doc(name).is_none() {
            warnings.push(Warning::MissingTokens(name.clone()));
        }
    }
    for class in tokens.docs().keys() {
        if calls.index_of(class).is_none() {
            warnings.push(Warning::UnmatchedTokens(class.clone()));
        }
    }
    Ok(warnings)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    fn corpus(entries: &[(&str, &[&str])]) -> TokenCorpus {
        TokenCorpus::from_docs(entries.iter().map(|(c, w)| (c.to_string(), names(w))).collect())
    }

    #[test]
    fn diagonal_is_zeroed_with_warning() {
        let (m, w) = CallMatrix::new(names(&["A", "B"]), vec![vec![7, 3], vec![1, 0]]).unwrap();
        assert_eq!(m.calls(0, 0), 0);
        assert_eq!(m.calls(0, 1), 3);
        assert_eq!(m.call_in(0), 1);
        assert_eq!(
            w,
            vec![Warning::SelfCalls {
                class: "A".into(),
                count: 7
            }]
        );
    }

    #[test]
    fn rejects_ragged_and_duplicate() {
        assert!(matches!(
            CallMatrix::new(names(&["A", "B"]), vec![vec![0, 1], vec![0]]),
            Err(Error::NonSquare { .. })
        ));
        assert!(matches!(
            CallMatrix::new(names(&["A", "A"]), vec![vec![0, 1], vec![0, 0]]),
            Err(Error::DuplicateClass(_))
        ));
    }

    #[test]
    fn consistent_project_has_no_warnings() {
        let m = CallMatrix::from_rows(
            names(&["A", "B", "C"]),
            vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]],
        )
        .unwrap();
        let t = corpus(&[("A", &["x"]), ("B", &["y"]), ("C", &["z"])]);
        assert!(validate_project(&m, &t).unwrap().is_empty());
    }

    #[test]
    fn isolated_and_unmatched_classes_are_reported() {
        let m = CallMatrix::from_rows(
            names(&["A", "B", "Util"]),
            vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 0]],
        )
        .unwrap();
        let t = corpus(&[("A", &["x"]), ("B", &["y"]), ("Util", &["u"]), ("Ghost", &["g"])]);
        let w = validate_project(&m, &t).unwrap();
        let text: Vec<String> = w.iter().map(ToString::to_string).collect();
        assert_eq!(text, vec!["isolated class Util", "unmatched token document Ghost"]);
    }

    #[test]
    fn disjoint_project_is_fatal() {
        let m = CallMatrix::from_rows(names(&["A"]), vec![vec![0]]).unwrap();
        let t = corpus(&[("B", &["x"])]);
        assert!(matches!(validate_project(&m, &t), Err(Error::DisjointProject)));
    }

    #[test]
    fn computed_decomposition_rejects_duplicates() {
        let err = Decomposition::computed(
            vec![
                Service::new("s0", names(&["A", "B"])),
                Service::new("s1", names(&["B"])),
            ],
            vec![],
        );
        assert!(matches!(err, Err(Error::DuplicateClass(_))));
        let ok = Decomposition::external(
            vec![
                Service::new("s0", names(&["A", "B"])),
                Service::new("s1", names(&["B"])),
            ],
            vec![],
        )
        .unwrap();
        assert_eq!(ok.duplicated_classes().into_iter().collect::<Vec<_>>(), vec!["B"]);
    }

    #[test]
    fn empty_service_rejected() {
        assert!(matches!(
            Decomposition::external(vec![Service::new("s", vec![])], vec![]),
            Err(Error::EmptyService(_))
        ));
    }

    #[test]
    fn noise_service_is_folded_into_noise() {
        let json = r#"{"services":[{"name":"a","classes":["X"]},{"name":"__noise__","classes":["Y"]}]}"#;
        let d = Decomposition::from_json(json).unwrap();
        assert_eq!(d.source, DecompositionSource::External);
        assert_eq!(d.len(), 1);
        assert_eq!(d.noise, names(&["Y"]));
    }

    #[test]
    fn labels_to_services() {
        let d = Decomposition::from_labels(&names(&["A", "B", "C", "D"]), &[Some(1), None, Some(0), Some(1)]).unwrap();
        assert_eq!(d.services[0], Service::new("service_0", names(&["C"])));
        assert_eq!(d.services[1], Service::new("service_1", names(&["A", "D"])));
        assert_eq!(d.noise, names(&["B"]));
    }

    #[test]
    fn hyperparams_defaults_and_beta() {
        let p = HyperParams::default();
        p.validate().unwrap();
        assert_eq!(p.alpha + p.beta(), 1.0);
        let bad = HyperParams {
            alpha: 1.5,
            ..p.clone()
        };
        assert!(bad.validate().is_err());
        let bad = HyperParams { max_bmsc_iters: 2, ..p };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn min_max_scaling() {
        let e = Encoding::new(
            EncodingScheme::Naive,
            vec![vec![0.0, 5.0], vec![10.0, 5.0], vec![5.0, 5.0]],
        )
        .unwrap();
        let s = e.min_max_scaled();
        assert_eq!(s.points(), &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 0.0]]);
        assert!(Encoding::new(EncodingScheme::Naive, vec![vec![f64::NAN]]).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_decomposition() -> impl Strategy<Value = Decomposition> {
            (1usize..12, 1usize..5, any::<u64>()).prop_map(|(n, k, salt)| {
                let names: Vec<String> = (0..n).map(|i| format!("pkg.C{i}")).collect();
                let labels: Vec<Option<usize>> = (0..n)
                    .map(|i| {
                        let h = (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt;
                        let l = (h % (k as u64 + 1)) as usize;
                        (l < k).then_some(l)
                    })
                    .collect();
                Decomposition::from_labels(&names, &labels).unwrap()
            })
        }

        proptest! {
            #[test]
            fn decomposition_json_round_trips(d in arb_decomposition()) {
                let back = Decomposition::from_json(&d.to_json().unwrap()).unwrap();
                prop_assert_eq!(back, d);
            }

            #[test]
            fn column_sums_are_call_in(rows in prop::collection::vec(prop::collection::vec(0u64..9, 6), 6)) {
                let names: Vec<String> = (0..6).map(|i| format!("C{i}")).collect();
                let m = CallMatrix::from_rows(names, rows.clone()).unwrap();
                for j in 0..6 {
                    let expected: u64 = (0..6).filter(|&i| i != j).map(|i| rows[i][j]).sum();
                    prop_assert_eq!(m.call_in(j), expected);
                }
            }
        }
    }
}
