//! Per-edge triangle statistics, exact identity checks and bound verdicts.

mod identity;
mod report;
mod verdict;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construct::PairCounts;
use crate::graph::{and_popcount, EdgeRef, Pair, TripartiteGraph};
use crate::{Error, Result};

pub use identity::{
    epsilon_witness_count, identity_sweep, verify_w_identity_ab, verify_w_identity_ac, EpsilonMode,
    EpsilonOutcome, IdentityCheck, IdentitySweep, WitnessFrame, EXACT_EPSILON_MAX_DIM,
};
pub use report::{histogram_csv, report_text, ReportDocument, REPORT_SCHEMA_VERSION};
pub use verdict::{coupled_verdicts, theorem1_verdict, Scale, Verdict};

/// Number of triangles through `e`: the size of the common neighbourhood of
/// its endpoints in the third part.
pub fn triangles_on_edge(g: &TripartiteGraph, e: EdgeRef) -> Result<u64> {
    if !g.has_edge(e)? {
        return Err(Error::invalid(format!("{e} is not an edge")));
    }
    let (x, y) = g.third_part_rows(e);
    Ok(and_popcount(x, y))
}

/// Triangle count of every edge, grouped by family in row-major order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeTriangleCounts {
    pub ab: Vec<(EdgeRef, u64)>,
    pub bc: Vec<(EdgeRef, u64)>,
    pub ac: Vec<(EdgeRef, u64)>,
}

impl EdgeTriangleCounts {
    pub fn get(&self, pair: Pair) -> &[(EdgeRef, u64)] {
        match pair {
            Pair::AB => &self.ab,
            Pair::BC => &self.bc,
            Pair::AC => &self.ac,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &(EdgeRef, u64)> {
        self.ab.iter().chain(&self.bc).chain(&self.ac)
    }
}

fn family_counts(g: &TripartiteGraph, pair: Pair) -> Vec<(EdgeRef, u64)> {
    let m = g.matrix(pair);
    (0..m.rows())
        .into_par_iter()
        .flat_map_iter(|i| {
            m.iter_row(i).map(move |j| {
                let e = EdgeRef::new(pair, i, j);
                let (x, y) = g.third_part_rows(e);
                (e, and_popcount(x, y))
            })
        })
        .collect()
}

pub fn edge_triangle_counts(g: &TripartiteGraph) -> EdgeTriangleCounts {
    EdgeTriangleCounts {
        ab: family_counts(g, Pair::AB),
        bc: family_counts(g, Pair::BC),
        ac: family_counts(g, Pair::AC),
    }
}

/// Aggregate triangle statistics of a graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BookReport {
    pub part_sizes: [usize; 3],
    pub total_vertices: u64,
    pub per_pair_edge_counts: PairCounts,
    pub total_edges: u64,
    pub triangles: u64,
    /// Largest number of triangles sharing one edge.
    pub booksize: u64,
    /// First edge (in `AB`, `BC`, `AC`, row-major order) attaining the booksize.
    pub booksize_edge: Option<EdgeRef>,
    pub min_count: Option<u64>,
    /// Edges lying in no triangle.
    pub uncovered: u64,
    /// `|E| / (N^2 / 4)`.
    pub density_ratio: f64,
    /// Triangle count per edge -> number of edges with that count.
    #[serde(with = "histogram_keys")]
    pub histogram: BTreeMap<u64, u64>,
    pub verdicts: Vec<Verdict>,
}

// JSON object keys are strings; convert explicitly so the map also
// survives `#[serde(flatten)]`, which hands keys over as strings.
mod histogram_keys {
    use std::collections::BTreeMap;

    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(h: &BTreeMap<u64, u64>, s: S) -> Result<S::Ok, S::Error> {
        // Numeric key order, not lexicographic.
        s.collect_map(h.iter().map(|(k, v)| (k.to_string(), v)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<u64, u64>, D::Error> {
        BTreeMap::<String, u64>::deserialize(d)?
            .into_iter()
            .map(|(k, v)| k.parse().map(|k| (k, v)).map_err(D::Error::custom))
            .collect()
    }
}

pub fn book_report(g: &TripartiteGraph) -> BookReport {
    report_from_counts(g, &edge_triangle_counts(g))
}

pub fn report_from_counts(g: &TripartiteGraph, counts: &EdgeTriangleCounts) -> BookReport {
    let mut histogram = BTreeMap::new();
    let mut booksize = 0;
    let mut booksize_edge = None;
    let mut min_count: Option<u64> = None;
    let mut incidences = 0u64;
    for &(e, t) in counts.iter() {
        *histogram.entry(t).or_insert(0) += 1;
        if booksize_edge.is_none() || t > booksize {
            booksize = t;
            booksize_edge = Some(e);
        }
        min_count = Some(min_count.map_or(t, |m| m.min(t)));
        incidences += t;
    }
    debug_assert_eq!(incidences % 3, 0);
    let total_vertices = g.total_vertices() as u64;
    let total_edges = g.total_edges();
    let density_ratio = if total_vertices == 0 {
        0.0
    } else {
        total_edges as f64 / (total_vertices as f64 * total_vertices as f64 / 4.0)
    };
    BookReport {
        part_sizes: g.sizes(),
        total_vertices,
        per_pair_edge_counts: PairCounts::of_graph(g),
        total_edges,
        triangles: incidences / 3,
        booksize,
        booksize_edge,
        min_count,
        uncovered: histogram.get(&0).copied().unwrap_or(0),
        density_ratio,
        histogram,
        verdicts: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> TripartiteGraph {
        let mut g = TripartiteGraph::empty(1, 1, 1);
        for e in [EdgeRef::ab(0, 0), EdgeRef::bc(0, 0), EdgeRef::ac(0, 0)] {
            g.add_edge(e).unwrap();
        }
        g
    }

    fn complete(na: usize, nb: usize, nc: usize) -> TripartiteGraph {
        let mut g = TripartiteGraph::empty(na, nb, nc);
        for a in 0..na {
            for b in 0..nb {
                g.add_edge(EdgeRef::ab(a, b)).unwrap();
            }
            for c in 0..nc {
                g.add_edge(EdgeRef::ac(a, c)).unwrap();
            }
        }
        for b in 0..nb {
            for c in 0..nc {
                g.add_edge(EdgeRef::bc(b, c)).unwrap();
            }
        }
        g
    }

    #[test]
    fn triangles_on_edge_examples() {
        let t = triangle();
        for e in t.all_edges().collect::<Vec<_>>() {
            assert_eq!(triangles_on_edge(&t, e).unwrap(), 1);
        }
        let k = complete(1, 1, 7);
        assert_eq!(triangles_on_edge(&k, EdgeRef::ab(0, 0)).unwrap(), 7);
        assert_eq!(triangles_on_edge(&k, EdgeRef::ac(0, 3)).unwrap(), 1);
        let mut g = TripartiteGraph::empty(1, 1, 1);
        assert!(triangles_on_edge(&g, EdgeRef::ab(0, 0)).is_err());
        g.add_edge(EdgeRef::ab(0, 0)).unwrap();
        assert_eq!(triangles_on_edge(&g, EdgeRef::ab(0, 0)).unwrap(), 0);
    }

    #[test]
    fn empty_report() {
        let r = book_report(&TripartiteGraph::empty(0, 0, 0));
        assert_eq!((r.uncovered, r.booksize, r.density_ratio), (0, 0, 0.0));
        assert_eq!(r.booksize_edge, None);
        assert_eq!(r.min_count, None);
    }

    #[test]
    fn single_triangle_report() {
        let r = book_report(&triangle());
        assert_eq!(r.booksize, 1);
        assert_eq!(r.uncovered, 0);
        assert_eq!(r.triangles, 1);
        assert!((r.density_ratio - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.histogram, BTreeMap::from([(1, 3)]));
        assert_eq!(r.booksize_edge, Some(EdgeRef::ab(0, 0)));
    }

    #[test]
    fn complete_tripartite_counts() {
        let r = book_report(&complete(2, 3, 4));
        assert_eq!(r.triangles, 24);
        assert_eq!(r.histogram, BTreeMap::from([(2, 12), (3, 8), (4, 6)]));
        assert_eq!(r.booksize, 4);
        assert_eq!(r.min_count, Some(2));
    }
}
