//! Brute-force ground truth for small instances.
//!
//! Nothing here touches the bitset intersection path: triangles are found by
//! a plain triple loop over single-bit adjacency lookups, and geometry is
//! re-derived from coordinates.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeRef, Pair, Part, TripartiteGraph};
use crate::lattice::{in_ab_window, in_c_window, ConstructionParams};
use crate::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TriangleList {
    /// Sorted `(a, b, c)` triples.
    pub triangles: Vec<(usize, usize, usize)>,
    /// Triangles through each edge of the graph (zero entries included).
    pub counts: BTreeMap<EdgeRef, u64>,
}

impl TriangleList {
    pub fn count(&self, e: EdgeRef) -> Option<u64> {
        self.counts.get(&e).copied()
    }
}

pub fn brute_force_triangles(g: &TripartiteGraph, cap: u64) -> Result<TriangleList> {
    let [na, nb, nc] = g.sizes();
    let work = (na as u128) * (nb as u128) * (nc as u128);
    if work > u128::from(cap) {
        return Err(Error::Resource {
            what: "brute-force triangle enumeration",
            size: format!("{na} x {nb} x {nc} iterations"),
            cap,
        });
    }
    let edge = |pair, i, j| {
        g.has_edge(EdgeRef::new(pair, i, j))
            .expect("indices in range")
    };

    let mut counts = BTreeMap::new();
    for pair in Pair::ALL {
        let (x, y) = pair.parts();
        for i in 0..g.part_size(x) {
            for j in 0..g.part_size(y) {
                if edge(pair, i, j) {
                    counts.insert(EdgeRef::new(pair, i, j), 0u64);
                }
            }
        }
    }

    let mut triangles = Vec::new();
    for a in 0..na {
        for b in 0..nb {
            if !edge(Pair::AB, a, b) {
                continue;
            }
            for c in 0..nc {
                if edge(Pair::AC, a, c) && edge(Pair::BC, b, c) {
                    triangles.push((a, b, c));
                    for e in [EdgeRef::ab(a, b), EdgeRef::bc(b, c), EdgeRef::ac(a, c)] {
                        *counts.get_mut(&e).expect("edge was registered") += 1;
                    }
                }
            }
        }
    }
    Ok(TriangleList { triangles, counts })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub edge: EdgeRef,
    /// Whether the graph stores the edge.
    pub stored: bool,
    /// Whether the coordinates put the pair inside its window.
    pub geometric: bool,
}

/// Every vertex pair whose stored adjacency disagrees with its window
/// predicate, in `AB`, `BC`, `AC` row-major order.
pub fn recheck_geometry(
    g: &TripartiteGraph,
    params: &ConstructionParams,
) -> Result<Vec<Discrepancy>> {
    let tables = Part::ALL.map(|p| g.coords(p));
    if tables.iter().any(Option::is_none) {
        return Err(Error::invalid(
            "geometry recheck needs coordinates on all three parts",
        ));
    }
    let dist2 = |x: &[i64], y: &[i64]| -> u64 {
        let mut s = 0u64;
        for k in 0..x.len() {
            let t = (x[k] - y[k]).unsigned_abs();
            s += t * t;
        }
        s
    };
    let mut out = Vec::new();
    for pair in Pair::ALL {
        let (x, y) = pair.parts();
        let (tx, ty) = (tables[x.index()].unwrap(), tables[y.index()].unwrap());
        if tx.dim() != ty.dim() && !tx.is_empty() && !ty.is_empty() {
            return Err(Error::invalid("coordinate tables differ in dimension"));
        }
        for i in 0..tx.len() {
            for j in 0..ty.len() {
                let d2 = dist2(tx.row(i), ty.row(j));
                let geometric = match pair {
                    Pair::AB => in_ab_window(d2, params),
                    Pair::BC | Pair::AC => in_c_window(d2, params),
                };
                let stored = g.has_edge(EdgeRef::new(pair, i, j))?;
                if stored != geometric {
                    out.push(Discrepancy {
                        edge: EdgeRef::new(pair, i, j),
                        stored,
                        geometric,
                    });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::build_preconstruction;
    use crate::Caps;

    #[test]
    fn empty_and_single_triangle() {
        let t = brute_force_triangles(&TripartiteGraph::empty(0, 0, 0), 10).unwrap();
        assert!(t.triangles.is_empty() && t.counts.is_empty());

        let mut g = TripartiteGraph::empty(1, 1, 1);
        for e in [EdgeRef::ab(0, 0), EdgeRef::bc(0, 0), EdgeRef::ac(0, 0)] {
            g.add_edge(e).unwrap();
        }
        let t = brute_force_triangles(&g, 10).unwrap();
        assert_eq!(t.triangles, vec![(0, 0, 0)]);
        assert!(t.counts.values().all(|&c| c == 1));
        assert_eq!(t.counts.len(), 3);
    }

    #[test]
    fn complete_two_two_two() {
        let mut g = TripartiteGraph::empty(2, 2, 2);
        for i in 0..2 {
            for j in 0..2 {
                for pair in Pair::ALL {
                    g.add_edge(EdgeRef::new(pair, i, j)).unwrap();
                }
            }
        }
        let t = brute_force_triangles(&g, 100).unwrap();
        assert_eq!(t.triangles.len(), 8);
        assert_eq!(t.counts.len(), 12);
        assert!(t.counts.values().all(|&c| c == 2));
        let sum: u64 = t.counts.values().sum();
        assert_eq!(sum, 3 * t.triangles.len() as u64);
    }

    #[test]
    fn cap_is_enforced() {
        let err = brute_force_triangles(&TripartiteGraph::empty(10, 10, 10), 999).unwrap_err();
        assert!(matches!(err, Error::Resource { cap: 999, .. }));
    }

    #[test]
    fn recheck_finds_injected_fault() {
        let params = ConstructionParams::new(2, 3).unwrap();
        let mut g = build_preconstruction(&params, false, &Caps::default()).unwrap();
        assert!(recheck_geometry(&g, &params).unwrap().is_empty());

        let missing = g.edges(Pair::AC).nth(5).unwrap();
        g.remove_edges(&[missing]).unwrap();
        let found = recheck_geometry(&g, &params).unwrap();
        assert_eq!(
            found,
            vec![Discrepancy {
                edge: missing,
                stored: false,
                geometric: true
            }]
        );

        assert!(recheck_geometry(&TripartiteGraph::empty(1, 1, 1), &params).is_err());
    }
}
