use std::fs;
use std::path::PathBuf;

use monosplit_core::ingest::load_call_matrix;
use monosplit_core::metrics::{dup, evaluate, icp, ifn, ned, reports_to_csv, structural_modularity};
use monosplit_core::{CallMatrix, Decomposition, MetricsReport, Service};
use proptest::prelude::*;

const TOL: f64 = 1e-12;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("C{i}")).collect()
}

fn partition(groups: &[Vec<usize>]) -> Decomposition {
    let services = groups
        .iter()
        .enumerate()
        .map(|(i, g)| Service::new(format!("s{i}"), g.iter().map(|c| format!("C{c}")).collect()))
        .collect();
    Decomposition::computed(services, Vec::new()).unwrap()
}

fn external(groups: &[&[&str]]) -> Decomposition {
    let services = groups
        .iter()
        .enumerate()
        .map(|(i, g)| Service::new(format!("s{i}"), g.iter().map(|c| c.to_string()).collect()))
        .collect();
    Decomposition::external(services, Vec::new()).unwrap()
}

#[test]
fn modularity_worked_example() {
    // a <-> b twice, c -> d once, a -> c and b -> d across
    let m = CallMatrix::from_rows(
        names(4),
        vec![vec![0, 1, 1, 0], vec![1, 0, 0, 1], vec![0, 0, 0, 1], vec![0, 0, 0, 0]],
    )
    .unwrap();
    let sm = structural_modularity(&m, &partition(&[vec![0, 1], vec![2, 3]])).unwrap();
    assert_eq!(sm.scoh, vec![0.5, 0.25]);
    assert_eq!(sm.scop[0].3, 0.25);
    assert!((sm.sm - 0.125).abs() < TOL);
}

#[test]
fn modularity_degenerate_cases() {
    let empty = CallMatrix::from_rows(names(3), vec![vec![0; 3]; 3]).unwrap();
    assert_eq!(
        structural_modularity(&empty, &partition(&[vec![0, 1, 2]])).unwrap().sm,
        0.0
    );
    let m = CallMatrix::from_rows(
        names(4),
        vec![vec![0, 2, 0, 0], vec![0, 0, 0, 0], vec![0, 0, 0, 3], vec![0, 0, 0, 0]],
    )
    .unwrap();
    let sm = structural_modularity(&m, &partition(&[vec![0, 1], vec![2, 3]])).unwrap();
    assert!((sm.sm - (0.5 + 0.75) / 2.0).abs() < TOL);
}

#[test]
fn icp_examples() {
    let m = CallMatrix::from_rows(
        names(4),
        vec![vec![0, 2, 0, 0], vec![0, 0, 0, 0], vec![0, 1, 0, 1], vec![0, 0, 0, 0]],
    )
    .unwrap();
    let r = icp(&m, &partition(&[vec![0, 1], vec![2, 3]])).unwrap();
    assert_eq!(r.aggregate, 0.25);
    assert_eq!(r.pairs, vec![(1, 0, 1, 1.0)]);
    assert_eq!(icp(&m, &partition(&[vec![0, 1, 2, 3]])).unwrap().aggregate, 0.0);
    let singles = partition(&[vec![0], vec![1], vec![2], vec![3]]);
    assert_eq!(icp(&m, &singles).unwrap().aggregate, 1.0);
    let silent = CallMatrix::from_rows(names(2), vec![vec![0; 2]; 2]).unwrap();
    assert_eq!(icp(&silent, &partition(&[vec![0], vec![1]])).unwrap().aggregate, 0.0);
}

#[test]
fn ifn_examples() {
    // service {0, 1} and {2, 3}: 0 is called from 2; 2 and 3 are called from 1
    let m = CallMatrix::from_rows(
        names(4),
        vec![vec![0, 1, 0, 0], vec![0, 0, 1, 1], vec![1, 0, 0, 0], vec![0, 0, 0, 0]],
    )
    .unwrap();
    let (mean, per) = ifn(&m, &partition(&[vec![0, 1], vec![2, 3]])).unwrap();
    assert_eq!(per, vec![1, 2]);
    assert_eq!(mean, 1.5);
    let (none, _) = ifn(&m, &partition(&[vec![0, 1, 2, 3]])).unwrap();
    assert_eq!(none, 0.0);
}

#[test]
fn ned_examples() {
    let sized = |sizes: &[usize]| {
        let mut next = 0;
        let groups: Vec<Vec<usize>> = sizes
            .iter()
            .map(|&s| {
                next += s;
                (next - s..next).collect()
            })
            .collect();
        ned(&partition(&groups))
    };
    assert_eq!(sized(&[6, 10]), 0.0);
    assert_eq!(sized(&[2, 30]), 1.0);
    assert!((sized(&[5, 20, 4]) - 1.0 / 3.0).abs() < TOL);
}

#[test]
fn dup_examples() {
    assert_eq!(dup(&partition(&[vec![0], vec![1]])), 0);
    assert_eq!(dup(&external(&[&["X", "A"], &["X"]])), 1);
    assert_eq!(dup(&external(&[&["X", "Y"], &["X", "Y"], &["X"]])), 2);
    assert!(Decomposition::computed(
        vec![Service::new("a", vec!["X".into()]), Service::new("b", vec!["X".into()])],
        Vec::new()
    )
    .is_err());
}

#[test]
fn single_service_report() {
    let (m, _) = load_call_matrix(&fixture("calls.csv")).unwrap();
    let all = Decomposition::computed(vec![Service::new("all", m.names().to_vec())], Vec::new()).unwrap();
    let r = evaluate(&m, &all).unwrap();
    assert_eq!((r.icp, r.ifn, r.dup), (0.0, 0.0, 0));
}

#[test]
fn noise_is_not_scored() {
    let m = CallMatrix::from_rows(names(3), vec![vec![0, 1, 4], vec![1, 0, 0], vec![0, 0, 0]]).unwrap();
    let d = Decomposition::computed(
        vec![Service::new("s", vec!["C0".into(), "C1".into()])],
        vec!["C2".into()],
    )
    .unwrap();
    let r = evaluate(&m, &d).unwrap();
    assert_eq!(r.icp, 0.0);
    assert_eq!(r.ifn, 0.0);
}

#[test]
fn report_round_trips() {
    let (m, _) = load_call_matrix(&fixture("calls.csv")).unwrap();
    let golden: Decomposition =
        serde_json::from_str(&fs::read_to_string(fixture("golden_decomposition.json")).unwrap()).unwrap();
    let r = evaluate(&m, &golden).unwrap();
    let text = serde_json::to_string(&r).unwrap();
    let back: MetricsReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
}

#[test]
fn golden_decomposition_report() {
    let (m, _) = load_call_matrix(&fixture("calls.csv")).unwrap();
    let golden: Decomposition =
        serde_json::from_str(&fs::read_to_string(fixture("golden_decomposition.json")).unwrap()).unwrap();
    let r = evaluate(&m, &golden).unwrap();
    let expected = fs::read_to_string(fixture("golden_metrics.csv")).unwrap();
    assert_eq!(reports_to_csv(&[("golden", &r)]), expected);
}

fn instance(max_n: usize) -> impl Strategy<Value = (Vec<Vec<u64>>, Vec<usize>)> {
    (2..=max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(prop::collection::vec(prop_oneof![2 => Just(0u64), 1 => 1u64..8], n), n),
            prop::collection::vec(0usize..4, n),
        )
    })
}

fn groups_of(labels: &[usize]) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut ids = std::collections::BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        let next = ids.len();
        let g = *ids.entry(l).or_insert(next);
        if g == groups.len() {
            groups.push(Vec::new());
        }
        groups[g].push(i);
    }
    groups
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn scaling_calls_keeps_every_metric((rows, labels) in instance(14), k in 2u64..7) {
        let n = rows.len();
        let d = partition(&groups_of(&labels));
        let a = evaluate(&CallMatrix::from_rows(names(n), rows.clone()).unwrap(), &d).unwrap();
        let scaled: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|c| c * k).collect()).collect();
        let b = evaluate(&CallMatrix::from_rows(names(n), scaled).unwrap(), &d).unwrap();
        prop_assert!((a.icp - b.icp).abs() < TOL);
        prop_assert_eq!(a.ifn, b.ifn);
        prop_assert_eq!(a.ned, b.ned);
        prop_assert_eq!(a.dup, b.dup);
        // SM is linear in the call counts, so it scales by exactly k
        prop_assert!((a.sm * k as f64 - b.sm).abs() < 1e-9);
    }

    #[test]
    fn merging_services_never_raises_icp((rows, labels) in instance(14), pick in any::<prop::sample::Index>()) {
        let m = CallMatrix::from_rows(names(rows.len()), rows).unwrap();
        let groups = groups_of(&labels);
        prop_assume!(groups.len() >= 2);
        let i = pick.index(groups.len() - 1);
        let mut merged = groups.clone();
        let tail = merged.remove(i + 1);
        merged[i].extend(tail);
        let before = icp(&m, &partition(&groups)).unwrap().aggregate;
        let after = icp(&m, &partition(&merged)).unwrap().aggregate;
        prop_assert!(after <= before + TOL);
    }

    #[test]
    fn ned_has_denominator_n(labels in prop::collection::vec(0usize..6, 1..40)) {
        let d = partition(&groups_of(&labels));
        let n = d.len() as f64;
        let v = ned(&d) * n;
        prop_assert!((v - v.round()).abs() < 1e-9);
        prop_assert!((0.0..=1.0).contains(&ned(&d)));
    }
}
