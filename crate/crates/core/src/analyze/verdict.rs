//! Pass/fail readouts of the asymptotic bounds at concrete parameters.
//!
//! None of these fail a run: at desk-scale parameters several of the bounds
//! are simply not expected to hold. Each verdict carries the actual value
//! and the bound so the gap is visible.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use super::BookReport;
use crate::construct::{coupled_params, PipelineSummary};
use crate::Result;

/// Whether `actual` and `bound` are plain values or natural logarithms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Ln,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub actual: f64,
    /// `<=` or `>=`: the relation `actual` must satisfy against `bound`.
    pub relation: String,
    pub bound: f64,
    pub scale: Scale,
    pub note: String,
}

impl Verdict {
    fn le(name: &str, actual: f64, bound: f64, scale: Scale, note: &str) -> Self {
        Verdict {
            name: name.into(),
            passed: actual <= bound,
            actual,
            relation: "<=".into(),
            bound,
            scale,
            note: note.into(),
        }
    }

    fn ge(name: &str, actual: f64, bound: f64, scale: Scale, note: &str) -> Self {
        Verdict {
            name: name.into(),
            passed: actual >= bound,
            actual,
            relation: ">=".into(),
            bound,
            scale,
            note: note.into(),
        }
    }
}

/// `d ln 15` stays representable as a plain float up to about this `d`.
const LINEAR_POW15_MAX_D: u64 = 60;

/// The six bound checks for a finished pipeline run.
///
/// `report` must describe `summary`'s final graph. Ratios against `n^2`
/// are reported as fractions so that nothing overflows.
pub fn theorem1_verdict(summary: &PipelineSummary, report: &BookReport) -> Vec<Verdict> {
    let params = &summary.params;
    let d = params.d as f64;
    let r = params.r as f64;
    let n = summary.n as f64;
    let n_sq = n * n;

    let mut out = Vec::with_capacity(6);
    out.push(Verdict::le(
        "every_edge_in_triangle",
        report.uncovered as f64,
        0.0,
        Scale::Linear,
        "edges lying in no triangle",
    ));

    let booksize_note = "largest book against 15^d";
    out.push(if params.d <= LINEAR_POW15_MAX_D {
        Verdict::le(
            "booksize_le_15_pow_d",
            report.booksize as f64,
            15f64.powf(d),
            Scale::Linear,
            booksize_note,
        )
    } else {
        let ln_book = (report.booksize.max(1) as f64).ln();
        Verdict::le(
            "booksize_le_15_pow_d",
            ln_book,
            d * 15f64.ln(),
            Scale::Ln,
            booksize_note,
        )
    });

    out.push(Verdict::ge(
        "preconstruction_ab_fraction",
        summary.preconstruction_ab_edges as f64 / n_sq,
        1.0 - 2.0 * (-d / (2.0 * r.powi(4))).exp(),
        Scale::Linear,
        "pre-construction A-B edges / n^2 against 1 - 2exp(-d/(2r^4))",
    ));

    out.push(Verdict::le(
        "uncovered_ab_fraction",
        summary.pruned_edges.ab as f64 / n_sq,
        (-(d / 2.0 - 1.0).exp2()).exp(),
        Scale::Linear,
        "A-B edges lost to sparsification / n^2 against exp(-2^(d/2-1))",
    ));

    out.push(Verdict::le(
        "vertex_count",
        summary.total_vertices as f64 / n,
        2.0 + (-d / 3.0).exp2(),
        Scale::Linear,
        "N / n against 2 + 2^(-d/3)",
    ));

    let total = summary.total_vertices as f64;
    let density_bound = if total > 1.0 {
        1.0 - (-total.ln().powf(1.0 / 6.0)).exp()
    } else {
        0.0
    };
    out.push(Verdict::ge(
        "density",
        report.density_ratio,
        density_bound,
        Scale::Linear,
        "|E| / (N^2/4) against 1 - exp(-(ln N)^(1/6))",
    ));
    out
}

/// Log-space evaluation of the bounds at `d = r^5`, without building
/// anything. `N` is taken as `2n + 2^{-d/2} (r+2)^d`.
pub fn coupled_verdicts(r: u64) -> Result<Vec<Verdict>> {
    let preset = coupled_params(r)?;
    let d = preset.params.d as f64;
    let rf = r as f64;
    let ln_n = preset.ln_n;
    // ln(|C'|) = d ln(r+2) - (d/2) ln 2; ln N = ln(2n + |C'|).
    let ln_c_prime = d * (rf + 2.0).ln() - d / 2.0 * LN_2;
    let ln_2n = LN_2 + ln_n;
    let hi = ln_2n.max(ln_c_prime);
    let ln_total = hi + ((ln_2n - hi).exp() + (ln_c_prime - hi).exp()).ln();

    Ok(vec![
        Verdict::le(
            "coupled_booksize_exponent",
            d * 15f64.ln(),
            14.0 * ln_total / ln_total.ln(),
            Scale::Ln,
            "ln 15^d against ln N^(14/ln ln N)",
        ),
        Verdict::ge(
            "coupled_ab_fraction",
            1.0 - 2.0 * (-d / (2.0 * rf.powi(4))).exp(),
            0.0,
            Scale::Linear,
            "guaranteed A-B edge fraction 1 - 2exp(-d/(2r^4)) is positive",
        ),
        Verdict::ge(
            "coupled_sign_witness_fraction",
            1.0 - 2.0 * (-d / (15.0 * rf * rf)).exp(),
            0.5,
            Scale::Linear,
            "1 - 2exp(-d/(15r^2)) against 1/2, i.e. more than 2^(d-1) witnesses",
        ),
        Verdict::le(
            "coupled_vertex_count",
            ln_total - ln_n,
            (2.0 + (-d / 3.0).exp2()).ln(),
            Scale::Ln,
            "ln(N/n) against ln(2 + 2^(-d/3))",
        ),
        Verdict::ge(
            "coupled_d_ratio",
            preset.d_ratio,
            0.0,
            Scale::Linear,
            "d / (5 ln n / ln ln n); tends to 1",
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyze::book_report;
    use crate::construct::{PairCounts, PipelineSummary};
    use crate::graph::{EdgeRef, TripartiteGraph};
    use crate::lattice::ConstructionParams;

    fn triangle_summary() -> (PipelineSummary, TripartiteGraph) {
        let mut g = TripartiteGraph::empty(1, 1, 1);
        for e in [EdgeRef::ab(0, 0), EdgeRef::bc(0, 0), EdgeRef::ac(0, 0)] {
            g.add_edge(e).unwrap();
        }
        let summary = PipelineSummary {
            params: ConstructionParams::new(1, 1).unwrap(),
            symmetric: true,
            sparsify: None,
            greedy_gains: None,
            blowup: None,
            pruned: true,
            n: 1,
            c_full: 1,
            preconstruction_ab_edges: 1,
            pruned_edges: PairCounts::default(),
            part_sizes: g.sizes(),
            total_vertices: 3,
            edges: PairCounts::of_graph(&g),
        };
        (summary, g)
    }

    #[test]
    fn single_triangle_verdicts() {
        let (summary, g) = triangle_summary();
        let v = theorem1_verdict(&summary, &book_report(&g));
        let names: Vec<_> = v.iter().map(|v| v.name.as_str()).collect();
        assert_eq!(
            names,
            [
                "every_edge_in_triangle",
                "booksize_le_15_pow_d",
                "preconstruction_ab_fraction",
                "uncovered_ab_fraction",
                "vertex_count",
                "density"
            ]
        );
        assert!(v[0].passed && v[1].passed);
        assert_eq!(v[1].bound, 15.0);
    }

    #[test]
    fn large_d_switches_to_log_scale() {
        let (mut summary, g) = triangle_summary();
        summary.params = ConstructionParams::new(2, 200).unwrap();
        let v = theorem1_verdict(&summary, &book_report(&g));
        assert_eq!(v[1].scale, Scale::Ln);
        assert!(v[1].passed);
        assert!((v[1].bound - 200.0 * 15f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn coupled_r2_is_log_space_only() {
        let v = coupled_verdicts(2).unwrap();
        assert_eq!(v.len(), 5);
        let book = &v[0];
        assert_eq!(book.scale, Scale::Ln);
        assert!((book.actual - 32.0 * 15f64.ln()).abs() < 1e-9);
        assert!(book.passed);
        // 2 exp(-32/60) > 1/2, so the sign-witness fraction is not yet above 1/2.
        assert!(!v[2].passed);
        assert!(v
            .iter()
            .all(|x| x.actual.is_finite() && x.bound.is_finite()));
        assert!(coupled_verdicts(3).is_err());
    }
}
