use std::collections::BTreeMap;

use commprob::bounds::p_r_dihedral;
use commprob::catalog::{build_from_str, Family, GroupExpr};
use commprob::engine::prob;
use commprob::numtheory::prime_power;
use commprob::symplectic::p_r_q;
use commprob::ExactRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::report::{Failure, ResultEntry};

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub spec: String,
    pub order: Option<usize>,
    pub values: Vec<ResultEntry>,
    /// Closed-form values where the family has one.
    pub closed: Vec<ResultEntry>,
    pub agree: Option<bool>,
    pub error: Option<String>,
}

/// `a..b` and `a..=b` (both inclusive), single values, and comma lists.
pub fn parse_range(text: &str) -> Result<Vec<i64>, Failure> {
    let bad = || Failure::input(format!("bad range {text:?}"));
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim) {
        if let Some((a, b)) = part.split_once("..") {
            let b = b.strip_prefix('=').unwrap_or(b);
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    Ok(out)
}

/// One spec string per point of the parameter grid, in lexicographic
/// key order then increasing values. For `heisenberg`, `q` expands to
/// `p` and `m`.
pub fn expand(family: &str, ranges: &BTreeMap<String, Vec<i64>>) -> Result<Vec<String>, Failure> {
    Family::parse(family).map_err(|e| Failure::input(e.to_string()))?;
    let mut points: Vec<Vec<(String, i64)>> = vec![Vec::new()];
    for (k, vals) in ranges {
        points = points
            .into_iter()
            .flat_map(|pt| {
                vals.iter().map(move |&v| {
                    let mut pt = pt.clone();
                    pt.push((k.clone(), v));
                    pt
                })
            })
            .collect();
    }
    Ok(points
        .into_iter()
        .map(|pt| {
            let body: Vec<String> = pt
                .into_iter()
                .flat_map(|(k, v)| match (family, k.as_str()) {
                    ("heisenberg", "q") => match prime_power(v.max(0) as u64) {
                        Some((p, m)) => vec![format!("p={p}"), format!("m={m}")],
                        None => vec![format!("q={v}")],
                    },
                    _ => vec![format!("{k}={v}")],
                })
                .collect();
            let raw = if body.is_empty() {
                family.to_string()
            } else {
                format!("{family}:{}", body.join(","))
            };
            // Canonical key order when the spec parses; bad rows keep their text.
            raw.parse::<GroupExpr>()
                .map(|e| e.to_string())
                .unwrap_or(raw)
        })
        .collect())
}

fn closed_value(family: &str, spec: &str, r: u32) -> Option<ExactRational> {
    let params: BTreeMap<&str, u64> = spec
        .split_once(':')?
        .1
        .split(',')
        .filter_map(|kv| {
            let (k, v) = kv.split_once('=')?;
            Some((k, v.parse().ok()?))
        })
        .collect();
    match family {
        "dihedral" => p_r_dihedral(params.get("n").copied()?, r).ok(),
        "heisenberg" => {
            let q = params
                .get("p")?
                .pow(params.get("m").copied().unwrap_or(1) as u32);
            p_r_q(q, params.get("n").copied()? as u32, r).ok()
        }
        _ => None,
    }
}

fn scan_one(family: &str, spec: &str, rmax: u32) -> ScanRow {
    let mut row = ScanRow {
        spec: spec.to_string(),
        order: None,
        values: Vec::new(),
        closed: Vec::new(),
        agree: None,
        error: None,
    };
    let g = match build_from_str(spec) {
        Ok(g) => g,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    row.order = Some(g.order());
    for r in 2..=rmax {
        row.values
            .push(ResultEntry::new(format!("P_{r}"), prob(&g, r)));
        if let Some(c) = closed_value(family, spec, r) {
            row.closed
                .push(ResultEntry::new(format!("closed P_{r}"), c));
        }
    }
    if !row.closed.is_empty() {
        row.agree = Some(
            row.values
                .iter()
                .zip(&row.closed)
                .all(|(a, b)| a.value == b.value),
        );
    }
    row
}

/// Rows come back in input order whatever the thread schedule.
pub fn scan(family: &str, specs: &[String], rmax: u32) -> Vec<ScanRow> {
    specs
        .par_iter()
        .map(|s| scan_one(family, s, rmax))
        .collect()
}

pub fn to_csv(rows: &[ScanRow], rmax: u32) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["spec".to_string(), "order".to_string()];
    for r in 2..=rmax {
        header.push(format!("P{r}"));
        header.push(format!("P{r}_decimal"));
    }
    let with_closed = rows.iter().any(|r| !r.closed.is_empty());
    if with_closed {
        header.extend((2..=rmax).map(|r| format!("closed_P{r}")));
        header.push("agree".into());
    }
    header.push("error".into());
    w.write_record(&header).expect("in-memory csv");
    for row in rows {
        let mut rec = vec![
            row.spec.clone(),
            row.order.map(|o| o.to_string()).unwrap_or_default(),
        ];
        for i in 0..(rmax as usize - 1) {
            match row.values.get(i) {
                Some(v) => {
                    rec.push(v.value.to_string());
                    rec.push(v.display_decimal.clone());
                }
                None => rec.extend([String::new(), String::new()]),
            }
        }
        if with_closed {
            for i in 0..(rmax as usize - 1) {
                rec.push(
                    row.closed
                        .get(i)
                        .map(|v| v.value.to_string())
                        .unwrap_or_default(),
                );
            }
            rec.push(row.agree.map(|a| a.to_string()).unwrap_or_default());
        }
        rec.push(row.error.clone().unwrap_or_default());
        w.write_record(&rec).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}
