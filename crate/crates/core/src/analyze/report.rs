//! JSON, CSV and plain-text renderings of a [`BookReport`].
//!
//! The JSON document is versioned by `schema_version`; the report fields
//! (`booksize`, `uncovered`, `density_ratio`, `histogram`, `verdicts`, ...)
//! sit at the top level next to the provenance fields.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{BookReport, Scale};
use crate::construct::PipelineSummary;
use crate::lattice::ConstructionParams;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub tool_version: String,
    pub seed: Option<u64>,
    pub params: Option<ConstructionParams>,
    pub pipeline: Option<PipelineSummary>,
    #[serde(flatten)]
    pub report: BookReport,
}

impl ReportDocument {
    pub fn new(report: BookReport) -> Self {
        ReportDocument {
            schema_version: REPORT_SCHEMA_VERSION,
            tool_version: crate::TOOL_VERSION.to_string(),
            seed: None,
            params: None,
            pipeline: None,
            report,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serializable");
        s.push('\n');
        s
    }
}

/// `triangles,edges` rows in ascending triangle count.
pub fn histogram_csv(report: &BookReport) -> String {
    let mut out = String::from("triangles,edges\n");
    for (t, n) in &report.histogram {
        writeln!(out, "{t},{n}").unwrap();
    }
    out
}

pub fn report_text(doc: &ReportDocument) -> String {
    let r = &doc.report;
    let mut out = String::new();
    writeln!(out, "{}", doc.tool_version).unwrap();
    if let Some(p) = &doc.params {
        writeln!(out, "params      r={} d={} mu={:.4}", p.r, p.d, p.mu()).unwrap();
    }
    if let Some(seed) = doc.seed {
        writeln!(out, "seed        {seed}").unwrap();
    }
    let [na, nb, nc] = r.part_sizes;
    writeln!(
        out,
        "parts       A={na} B={nb} C={nc} (N={})",
        r.total_vertices
    )
    .unwrap();
    let e = &r.per_pair_edge_counts;
    writeln!(
        out,
        "edges       AB={} BC={} AC={} (total {})",
        e.ab, e.bc, e.ac, r.total_edges
    )
    .unwrap();
    writeln!(out, "triangles   {}", r.triangles).unwrap();
    match r.booksize_edge {
        Some(edge) => writeln!(out, "booksize    {} (at {edge})", r.booksize).unwrap(),
        None => writeln!(out, "booksize    0").unwrap(),
    }
    if let Some(m) = r.min_count {
        writeln!(out, "min count   {m}").unwrap();
    }
    writeln!(out, "uncovered   {}", r.uncovered).unwrap();
    writeln!(out, "density     {:.6} of N^2/4", r.density_ratio).unwrap();
    writeln!(out, "histogram").unwrap();
    for (t, n) in &r.histogram {
        writeln!(out, "  {t:>8} triangles: {n} edges").unwrap();
    }
    if !r.verdicts.is_empty() {
        writeln!(out, "verdicts").unwrap();
        for v in &r.verdicts {
            let scale = match v.scale {
                Scale::Linear => "",
                Scale::Ln => " (ln)",
            };
            writeln!(
                out,
                "  [{}] {}: {:.6} {} {:.6}{scale}",
                if v.passed { "pass" } else { "FAIL" },
                v.name,
                v.actual,
                v.relation,
                v.bound
            )
            .unwrap();
        }
    }
    out
}
