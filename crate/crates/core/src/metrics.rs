//! Decomposition quality scores: structural modularity (SM), inter-call
//! percentage (ICP), interface number (IFN), non-extreme distribution (NED)
//! and duplicated classes (DUP).
//!
//! Noise classes are excluded from every sum and count. A class listed under
//! several services takes part in each of them.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{CallMatrix, CouplingReport, Decomposition, MetricsReport, PairReport, ServiceReport};
use crate::similarity::{csv_field, format_float};

/// Inclusive size range of a non-extreme service.
pub const NON_EXTREME: std::ops::RangeInclusive<usize> = 5..=20;

pub const ICP_DENOMINATOR: &str = "intra+inter";

fn resolve(calls: &CallMatrix, d: &Decomposition) -> Result<Vec<Vec<usize>>> {
    for class in &d.noise {
        calls
            .index_of(class)
            .ok_or_else(|| Error::UnknownClass(class.clone()))?;
    }
    d.services
        .iter()
        .map(|s| {
            if s.classes.is_empty() {
                return Err(Error::EmptyService(s.name.clone()));
            }
            s.classes
                .iter()
                .map(|c| calls.index_of(c).ok_or_else(|| Error::UnknownClass(c.clone())))
                .collect()
        })
        .collect()
}

fn block_calls(calls: &CallMatrix, from: &[usize], to: &[usize]) -> u64 {
    from.iter()
        .flat_map(|&u| to.iter().map(move |&v| calls.calls(u, v)))
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructuralModularity {
    pub sm: f64,
    pub scoh: Vec<f64>,
    /// `(i, j, gamma_ij, scop_ij)` for every pair `i < j`.
    pub scop: Vec<(usize, usize, u64, f64)>,
}

/// Mean cohesion `mu_i / m_i^2` minus mean coupling
/// `gamma_ij / (2 m_i m_j)` over unordered service pairs.
pub fn structural_modularity(calls: &CallMatrix, d: &Decomposition) -> Result<StructuralModularity> {
    let members = resolve(calls, d)?;
    let m = members.len();
    if m == 0 {
        return Err(Error::EmptyInput);
    }
    let scoh: Vec<f64> = members
        .iter()
        .map(|s| block_calls(calls, s, s) as f64 / (s.len() * s.len()) as f64)
        .collect();
    let mut scop = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let gamma = block_calls(calls, &members[i], &members[j]) + block_calls(calls, &members[j], &members[i]);
            let value = gamma as f64 / (2 * members[i].len() * members[j].len()) as f64;
            scop.push((i, j, gamma, value));
        }
    }
    let cohesion = scoh.iter().sum::<f64>() / m as f64;
    let sm = if m == 1 {
        cohesion
    } else {
        let pairs = (m * (m - 1) / 2) as f64;
        cohesion - scop.iter().map(|p| p.3).sum::<f64>() / pairs
    };
    Ok(StructuralModularity { sm, scoh, scop })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Icp {
    /// Inter-service calls over all calls among scored classes.
    pub aggregate: f64,
    /// `(i, j, c_ij, icp_ij)` for every directed pair with calls.
    pub pairs: Vec<(usize, usize, u64, f64)>,
    pub inter: u64,
    pub intra: u64,
}

pub fn icp(calls: &CallMatrix, d: &Decomposition) -> Result<Icp> {
    let members = resolve(calls, d)?;
    let mut inter = 0;
    let mut intra = 0;
    let mut raw = Vec::new();
    for (i, si) in members.iter().enumerate() {
        for (j, sj) in members.iter().enumerate() {
            let c = block_calls(calls, si, sj);
            if i == j {
                intra += c;
            } else if c > 0 {
                inter += c;
                raw.push((i, j, c));
            }
        }
    }
    let pairs = raw
        .into_iter()
        .map(|(i, j, c)| (i, j, c, c as f64 / inter as f64))
        .collect();
    let total = inter + intra;
    let aggregate = if total == 0 { 0.0 } else { inter as f64 / total as f64 };
    Ok(Icp {
        aggregate,
        pairs,
        inter,
        intra,
    })
}

/// Mean number of interface classes per service, and the per-service counts.
/// An interface is a class called from a class of another service.
pub fn ifn(calls: &CallMatrix, d: &Decomposition) -> Result<(f64, Vec<usize>)> {
    let members = resolve(calls, d)?;
    if members.is_empty() {
        return Err(Error::EmptyInput);
    }
    let per: Vec<usize> = members
        .iter()
        .enumerate()
        .map(|(i, si)| {
            si.iter()
                .filter(|&&u| {
                    members
                        .iter()
                        .enumerate()
                        .any(|(j, sj)| j != i && sj.iter().any(|&v| v != u && calls.calls(v, u) > 0))
                })
                .count()
        })
        .collect();
    let mean = per.iter().sum::<usize>() as f64 / per.len() as f64;
    Ok((mean, per))
}

pub fn is_extreme(size: usize) -> bool {
    !NON_EXTREME.contains(&size)
}

/// `1 - non_extreme / N`. An empty decomposition scores 1.
pub fn ned(d: &Decomposition) -> f64 {
    if d.is_empty() {
        return 1.0;
    }
    let ok = d.services.iter().filter(|s| !is_extreme(s.classes.len())).count();
    1.0 - ok as f64 / d.len() as f64
}

/// Number of classes listed under more than one service.
pub fn dup(d: &Decomposition) -> usize {
    d.duplicated_classes().len()
}

pub fn evaluate(calls: &CallMatrix, d: &Decomposition) -> Result<MetricsReport> {
    if d.is_empty() {
        return Err(Error::EmptyInput);
    }
    let sm = structural_modularity(calls, d)?;
    let icp = icp(calls, d)?;
    let (ifn_mean, ifn_per) = ifn(calls, d)?;
    let name = |i: usize| d.services[i].name.clone();
    let services = d
        .services
        .iter()
        .enumerate()
        .map(|(i, s)| ServiceReport {
            name: s.name.clone(),
            size: s.classes.len(),
            scoh: sm.scoh[i],
            ifn: ifn_per[i],
            extreme: is_extreme(s.classes.len()),
        })
        .collect();
    let pairs = icp
        .pairs
        .iter()
        .map(|&(i, j, c, v)| PairReport {
            from: name(i),
            to: name(j),
            calls: c,
            icp: v,
        })
        .collect();
    let coupling = sm
        .scop
        .iter()
        .filter(|p| p.2 > 0)
        .map(|&(i, j, g, v)| CouplingReport {
            a: name(i),
            b: name(j),
            calls: g,
            scop: v,
        })
        .collect();
    Ok(MetricsReport {
        sm: sm.sm,
        icp: icp.aggregate,
        ifn: ifn_mean,
        ned: ned(d),
        dup: dup(d),
        icp_denominator: ICP_DENOMINATOR.to_string(),
        services,
        pairs,
        coupling,
    })
}

pub fn report_to_json(report: &MetricsReport) -> Result<String> {
    Ok(serde_json::to_string_pretty(report)?)
}

/// Metric-by-approach table, one column per labelled report.
pub fn reports_to_csv(columns: &[(&str, &MetricsReport)]) -> String {
    let mut out = String::from("metric");
    for (label, _) in columns {
        out.push(',');
        out.push_str(&csv_field(label));
    }
    out.push('\n');
    let rows: [(&str, fn(&MetricsReport) -> String); 5] = [
        ("SM", |r| format_float(r.sm)),
        ("ICP", |r| format_float(r.icp)),
        ("IFN", |r| format_float(r.ifn)),
        ("NED", |r| format_float(r.ned)),
        ("DUP", |r| r.dup.to_string()),
    ];
    for (metric, value) in rows {
        out.push_str(metric);
        for (_, r) in columns {
            let _ = write!(out, ",{}", value(r));
        }
        out.push('\n');
    }
    out
}
