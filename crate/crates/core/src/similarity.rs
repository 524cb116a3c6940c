//! Class representations: point encodings built from call counts, and the
//! structural, semantic and blended similarity matrices.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{
    CallMatrix, Encoding, EncodingScheme, SimilarityKind, SimilarityMatrix, TfidfVector, TokenCorpus, Warning,
};

/// `[call_in, call_out]` for every class.
pub fn naive_encoding(calls: &CallMatrix) -> Encoding {
    let points = (0..calls.len())
        .map(|i| vec![calls.call_in(i) as f64, calls.call_out(i) as f64])
        .collect();
    Encoding::new(EncodingScheme::Naive, points).expect("counts are finite")
}

/// Side report of [`codependent_encoding`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CodependentReport {
    /// Chosen partner class per class, `None` for degenerate classes.
    pub partners: Vec<Option<usize>>,
    pub warnings: Vec<Warning>,
}

/// Encodes each class `A` relative to the class `B` that shares the most
/// callers with it.
///
/// `a` is the volume of calls the shared callers send to `A` and `B`
/// together, `b = call_in(A) / call_in(B)`. Ties on the number of shared
/// callers go to the larger shared-call volume into the candidate, then to
/// the lower index. Classes without callers, or without any candidate
/// sharing a caller, are encoded as `[0, 0]` and reported.
pub fn codependent_encoding(calls: &CallMatrix) -> (Encoding, CodependentReport) {
    let n = calls.len();
    let callers: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).filter(|&s| calls.calls(s, x) > 0).collect())
        .collect();
    let mut points = Vec::with_capacity(n);
    let mut report = CodependentReport::default();
    for a in 0..n {
        let mut best: Option<(usize, u64, usize)> = None;
        if !callers[a].is_empty() {
            for x in (0..n).filter(|&x| x != a) {
                let common = callers[a].iter().filter(|&&s| calls.calls(s, x) > 0).count();
                if common == 0 {
                    continue;
                }
                let volume: u64 = callers[a].iter().map(|&s| calls.calls(s, x)).sum();
                let better = match best {
                    None => true,
                    Some((c, v, _)) => common > c || (common == c && volume > v),
                };
                if better {
                    best = Some((common, volume, x));
                }
            }
        }
        match best {
            Some((_, _, b)) => {
                let a_part: u64 = callers[a]
                    .iter()
                    .filter(|&&s| calls.calls(s, b) > 0)
                    .map(|&s| calls.calls(s, a) + calls.calls(s, b))
                    .sum();
                let in_b = calls.call_in(b);
                let ratio = if in_b == 0 {
                    0.0
                } else {
                    calls.call_in(a) as f64 / in_b as f64
                };
                points.push(vec![a_part as f64, ratio]);
                report.partners.push(Some(b));
            }
            None => {
                points.push(vec![0.0, 0.0]);
                report.partners.push(None);
                report
                    .warnings
                    .push(Warning::DegenerateEncoding(calls.name(a).to_string()));
            }
        }
    }
    let encoding = Encoding::new(EncodingScheme::Codependent, points).expect("finite ratios");
    (encoding, report)
}

/// How `call(c_i, c_j)` is read in the structural similarity formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StructuralMode {
    /// `call(c_i, c_j) = calls[i][j] + calls[j][i]`.
    #[default]
    SymmetricTotal,
    /// `call(c_i, c_j) = calls[i][j]` as printed; the two orientations of a
    /// pair are combined by taking the larger value.
    Directed,
}

fn structural_pair(call: f64, in_i: f64, in_j: f64) -> f64 {
    let v = match (in_i != 0.0, in_j != 0.0) {
        (true, true) => 0.5 * (call / in_j + call / in_i),
        (false, true) => call / in_j,
        (true, false) => call / in_i,
        (false, false) => 0.0,
    };
    v.clamp(0.0, 1.0)
}

pub fn structural_similarity(calls: &CallMatrix) -> SimilarityMatrix {
    structural_similarity_with(calls, StructuralMode::SymmetricTotal)
}

pub fn structural_similarity_with(calls: &CallMatrix, mode: StructuralMode) -> SimilarityMatrix {
    let call_in: Vec<f64> = (0..calls.len()).map(|i| calls.call_in(i) as f64).collect();
    SimilarityMatrix::from_fn(calls.len(), SimilarityKind::Structural, |i, j| {
        let (ij, ji) = (calls.calls(i, j) as f64, calls.calls(j, i) as f64);
        match mode {
            StructuralMode::SymmetricTotal => structural_pair(ij + ji, call_in[i], call_in[j]),
            StructuralMode::Directed => {
                structural_pair(ij, call_in[i], call_in[j]).max(structural_pair(ji, call_in[j], call_in[i]))
            }
        }
    })
}

/// TF-IDF weights per class, L2-normalised.
///
/// `tf` is the raw count, `idf(t) = ln((1 + D) / (1 + df(t))) + 1`.
pub fn tfidf(corpus: &TokenCorpus) -> BTreeMap<String, TfidfVector> {
    let vocab = corpus.vocabulary();
    let position: BTreeMap<&str, usize> = vocab.iter().enumerate().map(|(i, t)| (t.as_str(), i)).collect();
    let n_docs = corpus.len() as f64;
    let mut df = vec![0usize; vocab.len()];
    let mut counts = BTreeMap::new();
    for (class, doc) in corpus.docs() {
        let mut tf = vec![0usize; vocab.len()];
        for term in doc {
            tf[position[term.as_str()]] += 1;
        }
        for (d, &c) in df.iter_mut().zip(&tf) {
            if c > 0 {
                *d += 1;
            }
        }
        counts.insert(class.clone(), tf);
    }
    let idf: Vec<f64> = df
        .iter()
        .map(|&d| ((1.0 + n_docs) / (1.0 + d as f64)).ln() + 1.0)
        .collect();
    counts
        .into_iter()
        .map(|(class, tf)| {
            let mut w: Vec<f64> = tf.iter().zip(&idf).map(|(&c, i)| c as f64 * i).collect();
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                w.iter_mut().for_each(|x| *x /= norm);
            }
            (class, TfidfVector(w))
        })
        .collect()
}

/// Orders TF-IDF vectors like the call matrix. Classes without a document
/// get a zero vector.
pub fn align_vectors(calls: &CallMatrix, vectors: &BTreeMap<String, TfidfVector>, dim: usize) -> Vec<TfidfVector> {
    calls
        .names()
        .iter()
        .map(|n| vectors.get(n).cloned().unwrap_or_else(|| TfidfVector(vec![0.0; dim])))
        .collect()
}

fn cosine(a: &TfidfVector, b: &TfidfVector) -> f64 {
    let (na, nb) = (a.norm(), b.norm());
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    let dot: f64 = a.0.iter().zip(&b.0).map(|(x, y)| x * y).sum();
    (dot / (na * nb)).clamp(0.0, 1.0)
}

/// Cosine similarity matrix. Pairs involving a zero vector score 0.
pub fn semantic_similarity(vectors: &[TfidfVector]) -> Result<SimilarityMatrix> {
    if let Some(first) = vectors.first() {
        if let Some(v) = vectors.iter().find(|v| v.0.len() != first.0.len()) {
            return Err(Error::DimensionMismatch(first.0.len(), v.0.len()));
        }
    }
    Ok(SimilarityMatrix::from_fn(
        vectors.len(),
        SimilarityKind::Semantic,
        |i, j| cosine(&vectors[i], &vectors[j]),
    ))
}

/// `alpha * structural + (1 - alpha) * semantic`.
pub fn class_similarity(
    structural: &SimilarityMatrix,
    semantic: &SimilarityMatrix,
    alpha: f64,
) -> Result<SimilarityMatrix> {
    if structural.len() != semantic.len() {
        return Err(Error::DimensionMismatch(structural.len(), semantic.len()));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParam(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    let beta = 1.0 - alpha;
    Ok(SimilarityMatrix::from_fn(
        structural.len(),
        SimilarityKind::Blended,
        |i, j| (alpha * structural.get(i, j) + beta * semantic.get(i, j)).clamp(0.0, 1.0),
    ))
}

/// Structural, semantic and blended matrices for a whole project.
pub fn project_similarity(calls: &CallMatrix, corpus: &TokenCorpus, alpha: f64) -> Result<SimilarityMatrix> {
    let structural = structural_similarity(calls);
    let vectors = align_vectors(calls, &tfidf(corpus), corpus.vocabulary().len());
    let semantic = semantic_similarity(&vectors)?;
    class_similarity(&structural, &semantic, alpha)
}

/// Writes a matrix as CSV with class-name headers.
pub fn matrix_to_csv(names: &[String], m: &SimilarityMatrix) -> String {
    let mut out = String::new();
    out.push_str("class");
    for n in names {
        out.push(',');
        out.push_str(&csv_field(n));
    }
    out.push('\n');
    for (i, n) in names.iter().enumerate() {
        out.push_str(&csv_field(n));
        for v in m.row(i) {
            out.push(',');
            out.push_str(&format_float(*v));
        }
        out.push('\n');
    }
    out
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Shortest decimal that round-trips to the same `f64`.
pub fn format_float(v: f64) -> String {
    format!("{v:?}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(rows: Vec<Vec<u64>>) -> CallMatrix {
        let names = (0..rows.len()).map(|i| format!("C{i}")).collect();
        CallMatrix::from_rows(names, rows).unwrap()
    }

    #[test]
    fn naive_sums() {
        let e = naive_encoding(&matrix(vec![vec![0, 3], vec![1, 0]]));
        assert_eq!(e.points(), &[vec![1.0, 3.0], vec![3.0, 1.0]]);
        let chain = naive_encoding(&matrix(vec![vec![0, 2, 0], vec![0, 0, 2], vec![0, 0, 0]]));
        assert_eq!(chain.points()[1], vec![2.0, 2.0]);
        let isolated = naive_encoding(&matrix(vec![vec![0, 0], vec![0, 0]]));
        assert_eq!(isolated.points()[0], vec![0.0, 0.0]);
    }

    #[test]
    fn codependent_partner_follows_shared_callers() {
        // A=0, B=1, C=2, D=3, E=4
        let mut rows = vec![vec![0u64; 5]; 5];
        rows[1][0] = 5;
        rows[2][0] = 3;
        rows[3][0] = 1;
        rows[2][1] = 2;
        rows[3][1] = 4;
        rows[3][2] = 1;
        let m = matrix(rows);
        let (e, report) = codependent_encoding(&m);
        assert_eq!(report.partners[0], Some(1));
        // shared callers C, D: (3 + 2) + (1 + 4); call_in(A) = 9, call_in(B) = 6
        assert_eq!(e.points()[0], vec![10.0, 1.5]);
        // D and E are never called
        assert_eq!(e.points()[3], vec![0.0, 0.0]);
        assert_eq!(report.partners[4], None);
    }

    #[test]
    fn codependent_shared_caller() {
        // S=0 calls X=1 and Y=2 twice each
        let m = matrix(vec![vec![0, 2, 2], vec![0, 0, 0], vec![0, 0, 0]]);
        let (e, _) = codependent_encoding(&m);
        assert_eq!(e.points()[1], vec![4.0, 1.0]);
        assert_eq!(e.points()[2], vec![4.0, 1.0]);
        let (single, report) = codependent_encoding(&matrix(vec![vec![0]]));
        assert_eq!(single.points()[0], vec![0.0, 0.0]);
        assert_eq!(report.warnings.len(), 1);
    }

    #[test]
    fn codependent_tie_breaks_on_volume_then_index() {
        // S=0 calls A=1 once, B=2 once, C=3 three times.
        let m = matrix(vec![
            vec![0, 1, 1, 3],
            vec![0, 0, 0, 0],
            vec![0, 0, 0, 0],
            vec![0, 0, 0, 0],
        ]);
        let (_, report) = codependent_encoding(&m);
        assert_eq!(report.partners[1], Some(3));
        assert_eq!(report.partners[3], Some(1));
    }

    #[test]
    fn structural_cases() {
        // A=0 calls B=1 twice, X=2 calls B twice; nobody calls A.
        let m = matrix(vec![vec![0, 2, 0], vec![0, 0, 0], vec![0, 2, 0]]);
        let s = structural_similarity(&m);
        assert_eq!(s.get(0, 1), 0.5);
        assert_eq!(s.get(1, 0), 0.5);
        let mutual = matrix(vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 0]]);
        let s = structural_similarity(&mutual);
        assert_eq!(s.get(0, 1), 1.0);
        assert_eq!(s.get(0, 2), 0.0);
        assert_eq!(s.get(2, 2), 1.0);
    }

    #[test]
    fn directed_mode_uses_one_orientation() {
        let m = matrix(vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 0]]);
        let s = structural_similarity_with(&m, StructuralMode::Directed);
        assert_eq!(s.get(0, 1), 1.0);
        let m = matrix(vec![vec![0, 1, 0], vec![0, 0, 0], vec![0, 3, 0]]);
        let s = structural_similarity_with(&m, StructuralMode::Directed);
        assert_eq!(s.get(0, 1), 0.25);
    }

    #[test]
    fn tfidf_single_axis() {
        let corpus = TokenCorpus::from_docs([("A".to_string(), vec!["x".to_string()])].into());
        assert_eq!(tfidf(&corpus)["A"].0, vec![1.0]);
    }

    #[test]
    fn idf_penalises_ubiquitous_terms() {
        let corpus = TokenCorpus::from_docs(
            [
                ("A".to_string(), vec!["common".to_string(), "rare".to_string()]),
                ("B".to_string(), vec!["common".to_string()]),
            ]
            .into(),
        );
        let v = &tfidf(&corpus)["A"];
        // vocabulary: common, rare
        assert!(v.0[0] < v.0[1]);
    }

    #[test]
    fn cosine_values() {
        let v = |x: &[f64]| TfidfVector(x.to_vec());
        let s = semantic_similarity(&[v(&[1.0, 1.0, 0.0]), v(&[1.0, 0.0, 1.0]), v(&[0.0, 0.0, 0.0])]).unwrap();
        assert!((s.get(0, 1) - 0.5).abs() < 1e-12);
        assert_eq!(s.get(0, 2), 0.0);
        assert_eq!(s.get(2, 2), 1.0);
        let same = semantic_similarity(&[v(&[0.3, 0.4]), v(&[0.3, 0.4])]).unwrap();
        assert!((same.get(0, 1) - 1.0).abs() < 1e-12);
        let orth = semantic_similarity(&[v(&[1.0, 0.0]), v(&[0.0, 2.0])]).unwrap();
        assert_eq!(orth.get(0, 1), 0.0);
        assert!(semantic_similarity(&[v(&[1.0]), v(&[1.0, 0.0])]).is_err());
    }

    #[test]
    fn blend() {
        let a = SimilarityMatrix::from_fn(2, SimilarityKind::Structural, |_, _| 0.4);
        let b = SimilarityMatrix::from_fn(2, SimilarityKind::Semantic, |_, _| 0.6);
        let cs = class_similarity(&a, &b, 0.5).unwrap();
        assert!((cs.get(0, 1) - 0.5).abs() < 1e-12);
        assert_eq!(cs.kind(), SimilarityKind::Blended);
        let only_structure = class_similarity(&a, &b, 1.0).unwrap();
        assert_eq!(only_structure.get(0, 1), a.get(0, 1));
        let c = SimilarityMatrix::from_fn(3, SimilarityKind::Semantic, |_, _| 0.6);
        assert!(matches!(
            class_similarity(&a, &c, 0.5),
            Err(Error::DimensionMismatch(2, 3))
        ));
    }

    #[test]
    fn csv_dump() {
        let names = vec!["A".to_string(), "B,x".to_string()];
        let m = SimilarityMatrix::from_fn(2, SimilarityKind::Structural, |_, _| 0.25);
        assert_eq!(
            matrix_to_csv(&names, &m),
            "class,A,\"B,x\"\nA,1.0,0.25\n\"B,x\",0.25,1.0\n"
        );
    }
}
