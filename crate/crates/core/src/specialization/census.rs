//! Discriminant-bounded counts of the fields produced by specialization.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::{ClassGroupMethod, SpecializationRecord};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridPoint {
    #[serde(rename = "N")]
    pub bound: String,
    pub count: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusField {
    pub d: String,
    pub delta: String,
    pub signature: String,
    /// First point, in enumeration order, producing the field.
    pub x0: String,
    pub rank_n: Option<u32>,
    pub rank_method: Option<ClassGroupMethod>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub n: u64,
    pub lambda: Option<String>,
    pub s: Vec<u64>,
    pub height: u64,
    pub genus: usize,
    pub grid: Vec<GridPoint>,
    /// Least-squares slope of `log count` against `log N` over grid points
    /// with a nonzero count; `None` with fewer than two such points.
    pub fitted_exponent: Option<f64>,
    /// `1 / (4g + 2)`.
    pub benchmark_exponent: f64,
    pub fields: Vec<CensusField>,
    pub records: usize,
    pub passing_records: usize,
    pub unknown_records: usize,
}

/// Distinct fields among the records passing every verdict, counted by
/// `|disc| <= N` for each `N` of the grid. Records with an unknown verdict
/// are left out.
pub fn census(records: &[SpecializationRecord], height: u64, genus: usize, grid: &[u64]) -> CensusReport {
    let mut fields: BTreeMap<BigInt, CensusField> = BTreeMap::new();
    let mut passing = 0;
    for r in records.iter().filter(|r| r.passes()) {
        passing += 1;
        let f = r.field.as_ref().expect("passing records have a field");
        let d: BigInt = f.d.parse().expect("decimal");
        fields.entry(d).or_insert_with(|| CensusField {
            d: f.d.clone(),
            delta: f.discriminant.clone(),
            signature: f.signature.clone(),
            x0: r.x0.clone(),
            rank_n: r.class_group.as_ref().map(|c| c.rank_n),
            rank_method: r.class_group.as_ref().map(|c| c.method),
        });
    }
    let abs: Vec<BigInt> = fields
        .values()
        .map(|f| f.delta.parse::<BigInt>().expect("decimal").abs())
        .collect();
    let mut grid_sorted = grid.to_vec();
    grid_sorted.sort_unstable();
    grid_sorted.dedup();
    let counts: Vec<(u64, usize)> = grid_sorted
        .iter()
        .map(|&nb| (nb, abs.iter().filter(|a| **a <= BigInt::from(nb)).count()))
        .collect();
    let pts: Vec<(f64, f64)> = counts
        .iter()
        .filter(|(nb, c)| *c > 0 && *nb > 1)
        .map(|&(nb, c)| ((nb as f64).ln(), (c as f64).ln()))
        .collect();
    let fitted_exponent = (pts.len() >= 2).then(|| {
        let m = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        sxy / sxx
    });
    let first = records.first();
    CensusReport {
        n: first.map_or(0, |r| r.n),
        lambda: first.and_then(|r| r.lambda.clone()),
        s: first.map(|r| r.config.s.clone()).unwrap_or_default(),
        height,
        genus,
        grid: counts
            .iter()
            .map(|&(nb, c)| GridPoint {
                bound: nb.to_string(),
                count: c.to_string(),
            })
            .collect(),
        fitted_exponent,
        benchmark_exponent: 1.0 / (4 * genus + 2) as f64,
        fields: fields.into_values().collect(),
        records: records.len(),
        passing_records: passing,
        unknown_records: records.iter().filter(|r| r.has_unknown()).count(),
    }
}
