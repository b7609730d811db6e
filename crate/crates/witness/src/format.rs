//! File formats: witness sets as JSON, census tables as CSV.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::slice::Slice;
use crate::witness::{CensusReport, WitnessSet};
use crate::{Error, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SliceDoc {
    seed: u64,
    coefficients: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct WitnessDoc {
    n: usize,
    slice: SliceDoc,
    points: Vec<Vec<[f64; 2]>>,
    tolerance: f64,
}

fn pair(c: &C64) -> [f64; 2] {
    [c.re, c.im]
}

fn complex(p: &[f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

/// `{"n":…, "slice":{"seed":…, "coefficients":[[re,im],…]}, "points":[[[re,im],…],…], "tolerance":…}`
pub fn witness_to_json(ws: &WitnessSet) -> String {
    let doc = WitnessDoc {
        n: ws.n(),
        slice: SliceDoc {
            seed: ws.slice.seed(),
            coefficients: ws.slice.coefficients().iter().map(pair).collect(),
        },
        points: ws.points.iter().map(|p| p.iter().map(pair).collect()).collect(),
        tolerance: ws.tolerance,
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}

/// Parses [`witness_to_json`] output and checks its shape.
pub fn witness_from_json(text: &str) -> Result<WitnessSet, Error> {
    let doc: WitnessDoc = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let coefficients = doc.slice.coefficients.iter().map(complex).collect();
    let slice = Slice::from_coefficients(doc.n, coefficients, doc.slice.seed)?;
    let nv = doc.n * doc.n;
    if doc.points.iter().any(|p| p.len() != nv) {
        return Err(Error::Shape("witness points must have n² coordinates"));
    }
    let points = doc.points.iter().map(|p| p.iter().map(complex).collect()).collect();
    Ok(WitnessSet::orthogonal(slice, points, doc.tolerance))
}

/// `real_count,frequency` rows for every count from 0 to the degree in
/// steps of two, then any other observed count, then `fail,<k>`.
pub fn census_to_csv(report: &CensusReport) -> String {
    let mut counts: Vec<usize> = (0..=report.degree).step_by(2).collect();
    counts.extend(report.histogram.keys().filter(|k| **k % 2 == 1 || **k > report.degree));
    counts.sort_unstable();
    counts.dedup();
    let mut out = String::from("real_count,frequency\n");
    for k in counts {
        writeln!(out, "{k},{}", report.frequency(k)).expect("writing to a string");
    }
    writeln!(out, "fail,{}", report.fails).expect("writing to a string");
    out
}
