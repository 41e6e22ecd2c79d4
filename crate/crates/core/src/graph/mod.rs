//! Tripartite graphs with cross-part bitset adjacency.
//!
//! Each of the three cross-part families (`A-B`, `B-C`, `A-C`) is held twice,
//! once per direction, so every vertex has one bitset row per opposite part.
//! The number of triangles through an edge is then the popcount of the AND
//! of two rows over the third part.

mod bits;
pub mod format;

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

pub use bits::{and_popcount, BitMatrix};

use crate::lattice::LatticePoint;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Part {
    A,
    B,
    C,
}

impl Part {
    pub const ALL: [Part; 3] = [Part::A, Part::B, Part::C];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Part::A => "A",
            Part::B => "B",
            Part::C => "C",
        }
    }
}

impl FromStr for Part {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" => Ok(Part::A),
            "B" => Ok(Part::B),
            "C" => Ok(Part::C),
            other => Err(Error::invalid(format!("unknown part `{other}`"))),
        }
    }
}

/// One of the three cross-part edge families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pair {
    AB,
    BC,
    AC,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::AB, Pair::BC, Pair::AC];

    pub fn index(self) -> usize {
        self as usize
    }

    /// The two parts joined by this family, in `(row, column)` order.
    pub fn parts(self) -> (Part, Part) {
        match self {
            Pair::AB => (Part::A, Part::B),
            Pair::BC => (Part::B, Part::C),
            Pair::AC => (Part::A, Part::C),
        }
    }

    /// The part not touched by this family.
    pub fn third(self) -> Part {
        match self {
            Pair::AB => Part::C,
            Pair::BC => Part::A,
            Pair::AC => Part::B,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Pair::AB => "AB",
            Pair::BC => "BC",
            Pair::AC => "AC",
        }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Pair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "AB" => Ok(Pair::AB),
            "BC" => Ok(Pair::BC),
            "AC" => Ok(Pair::AC),
            other => Err(Error::invalid(format!("unknown pair `{other}`"))),
        }
    }
}

/// An edge `(i, j)` of family `pair`, with `i` indexing the first part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeRef {
    pub pair: Pair,
    pub i: usize,
    pub j: usize,
}

impl EdgeRef {
    pub fn new(pair: Pair, i: usize, j: usize) -> Self {
        EdgeRef { pair, i, j }
    }

    pub fn ab(a: usize, b: usize) -> Self {
        EdgeRef::new(Pair::AB, a, b)
    }

    pub fn bc(b: usize, c: usize) -> Self {
        EdgeRef::new(Pair::BC, b, c)
    }

    pub fn ac(a: usize, c: usize) -> Self {
        EdgeRef::new(Pair::AC, a, c)
    }
}

impl fmt::Display for EdgeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.pair, self.i, self.j)
    }
}

/// Flat coordinate table: vertex `i` of a part maps to row `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordTable {
    d: usize,
    data: Vec<i64>,
}

impl CoordTable {
    pub fn new(d: usize, data: Vec<i64>) -> Result<Self> {
        if d == 0 {
            if !data.is_empty() {
                return Err(Error::invalid(
                    "zero-dimensional coordinate table with data",
                ));
            }
        } else if !data.len().is_multiple_of(d) {
            return Err(Error::invalid(format!(
                "coordinate data of length {} is not a multiple of d={d}",
                data.len()
            )));
        }
        Ok(CoordTable { d, data })
    }

    pub fn from_points(d: usize, points: &[LatticePoint]) -> Result<Self> {
        let mut data = Vec::with_capacity(points.len() * d);
        for p in points {
            if p.dim() != d {
                return Err(Error::invalid(format!(
                    "point {p} has dimension {} instead of {d}",
                    p.dim()
                )));
            }
            data.extend_from_slice(p.coords());
        }
        CoordTable::new(d, data)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.data.len().checked_div(self.d).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn point(&self, i: usize) -> LatticePoint {
        LatticePoint::new(self.row(i).to_vec())
    }

    pub(crate) fn raw(&self) -> &[i64] {
        &self.data
    }

    /// Rows `keep[0], keep[1], ...` as a new table.
    pub fn select(&self, keep: &[usize]) -> CoordTable {
        let mut data = Vec::with_capacity(keep.len() * self.d);
        for &i in keep {
            data.extend_from_slice(self.row(i));
        }
        CoordTable { d: self.d, data }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripartiteGraph {
    sizes: [usize; 3],
    /// Indexed by [`Pair::index`]: rows of the first part over the second.
    fwd: [BitMatrix; 3],
    /// Transposes of `fwd`.
    rev: [BitMatrix; 3],
    coords: [Option<CoordTable>; 3],
}

impl TripartiteGraph {
    /// An edgeless graph with the given part sizes and optional coordinates.
    pub fn new(
        n_a: usize,
        n_b: usize,
        n_c: usize,
        coords: [Option<CoordTable>; 3],
    ) -> Result<Self> {
        let sizes = [n_a, n_b, n_c];
        check_coords(&sizes, &coords)?;
        let fwd = Pair::ALL.map(|p| {
            let (x, y) = p.parts();
            BitMatrix::new(sizes[x.index()], sizes[y.index()])
        });
        let rev = Pair::ALL.map(|p| {
            let (x, y) = p.parts();
            BitMatrix::new(sizes[y.index()], sizes[x.index()])
        });
        Ok(TripartiteGraph {
            sizes,
            fwd,
            rev,
            coords,
        })
    }

    pub fn empty(n_a: usize, n_b: usize, n_c: usize) -> Self {
        Self::new(n_a, n_b, n_c, [None, None, None]).expect("no coordinates to validate")
    }

    /// Assembles a graph from forward matrices (`AB`, `BC`, `AC` order); the
    /// reverse direction is derived by transposition.
    pub fn from_forward(fwd: [BitMatrix; 3], coords: [Option<CoordTable>; 3]) -> Result<Self> {
        let sizes = [fwd[0].rows(), fwd[0].cols(), fwd[1].cols()];
        if fwd[1].rows() != sizes[1] || fwd[2].rows() != sizes[0] || fwd[2].cols() != sizes[2] {
            return Err(Error::invalid("inconsistent cross-part matrix shapes"));
        }
        check_coords(&sizes, &coords)?;
        let rev = [fwd[0].transpose(), fwd[1].transpose(), fwd[2].transpose()];
        Ok(TripartiteGraph {
            sizes,
            fwd,
            rev,
            coords,
        })
    }

    /// As [`from_forward`](Self::from_forward) but starting from the reverse
    /// matrices (`BA`, `CB`, `CA`).
    pub(crate) fn from_reverse(
        rev: [BitMatrix; 3],
        coords: [Option<CoordTable>; 3],
    ) -> Result<Self> {
        let fwd = [rev[0].transpose(), rev[1].transpose(), rev[2].transpose()];
        Self::from_forward(fwd, coords)
    }

    pub fn sizes(&self) -> [usize; 3] {
        self.sizes
    }

    pub fn part_size(&self, part: Part) -> usize {
        self.sizes[part.index()]
    }

    pub fn total_vertices(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn coords(&self, part: Part) -> Option<&CoordTable> {
        self.coords[part.index()].as_ref()
    }

    pub fn all_coords(&self) -> &[Option<CoordTable>; 3] {
        &self.coords
    }

    pub fn has_all_coords(&self) -> bool {
        self.coords.iter().all(Option::is_some)
    }

    /// Row-major adjacency for `pair` (first part over second part).
    pub fn matrix(&self, pair: Pair) -> &BitMatrix {
        &self.fwd[pair.index()]
    }

    /// Column-major adjacency for `pair` (second part over first part).
    pub fn matrix_rev(&self, pair: Pair) -> &BitMatrix {
        &self.rev[pair.index()]
    }

    fn check_edge(&self, e: EdgeRef) -> Result<()> {
        let (x, y) = e.pair.parts();
        if e.i >= self.part_size(x) || e.j >= self.part_size(y) {
            return Err(Error::invalid(format!(
                "edge {e} out of range for part sizes {:?}",
                self.sizes
            )));
        }
        Ok(())
    }

    /// Inserts an edge; returns whether it was new.
    pub fn add_edge(&mut self, e: EdgeRef) -> Result<bool> {
        self.check_edge(e)?;
        let k = e.pair.index();
        let added = self.fwd[k].set(e.i, e.j);
        self.rev[k].set(e.j, e.i);
        Ok(added)
    }

    pub fn has_edge(&self, e: EdgeRef) -> Result<bool> {
        self.check_edge(e)?;
        Ok(self.fwd[e.pair.index()].get(e.i, e.j))
    }

    /// Deletes the listed edges; returns how many were actually present.
    /// Nothing is modified if any index is out of range.
    pub fn remove_edges(&mut self, edges: &[EdgeRef]) -> Result<u64> {
        for &e in edges {
            self.check_edge(e)?;
        }
        let mut removed = 0;
        for &e in edges {
            let k = e.pair.index();
            if self.fwd[k].clear(e.i, e.j) {
                self.rev[k].clear(e.j, e.i);
                removed += 1;
            }
        }
        Ok(removed)
    }

    pub fn edge_count(&self, pair: Pair) -> u64 {
        self.fwd[pair.index()].count_ones()
    }

    pub fn total_edges(&self) -> u64 {
        Pair::ALL.iter().map(|&p| self.edge_count(p)).sum()
    }

    /// All edges of one family in row-major order.
    pub fn edges(&self, pair: Pair) -> impl Iterator<Item = EdgeRef> + '_ {
        let m = &self.fwd[pair.index()];
        (0..m.rows()).flat_map(move |i| m.iter_row(i).map(move |j| EdgeRef::new(pair, i, j)))
    }

    /// All edges, `AB` first, then `BC`, then `AC`.
    pub fn all_edges(&self) -> impl Iterator<Item = EdgeRef> + '_ {
        Pair::ALL.into_iter().flat_map(|p| self.edges(p))
    }

    /// The two neighbourhood rows over the third part whose intersection is
    /// the set of vertices completing `e` to a triangle.
    #[inline]
    pub fn third_part_rows(&self, e: EdgeRef) -> (&[u64], &[u64]) {
        match e.pair {
            // a over C, b over C
            Pair::AB => (
                self.fwd[Pair::AC.index()].row(e.i),
                self.fwd[Pair::BC.index()].row(e.j),
            ),
            // b over A, c over A
            Pair::BC => (
                self.rev[Pair::AB.index()].row(e.i),
                self.rev[Pair::AC.index()].row(e.j),
            ),
            // a over B, c over B
            Pair::AC => (
                self.fwd[Pair::AB.index()].row(e.i),
                self.rev[Pair::BC.index()].row(e.j),
            ),
        }
    }

    /// True when every family agrees bit for bit with its stored transpose.
    pub fn is_symmetric(&self) -> bool {
        Pair::ALL.iter().all(|&p| {
            let k = p.index();
            let (f, r) = (&self.fwd[k], &self.rev[k]);
            f.rows() == r.cols()
                && f.cols() == r.rows()
                && (0..f.rows()).all(|i| (0..f.cols()).all(|j| f.get(i, j) == r.get(j, i)))
        })
    }

    /// The subgraph induced by `A`, `B` and the listed `C` vertices.
    ///
    /// `keep` is deduplicated and sorted; kept vertices are re-indexed in
    /// ascending order of their old index.
    pub fn restrict_c(&self, keep: &[usize]) -> Result<Self> {
        let n_c = self.sizes[Part::C.index()];
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&bad) = keep.iter().find(|&&c| c >= n_c) {
            return Err(Error::invalid(format!(
                "C index {bad} out of range ({n_c} vertices)"
            )));
        }
        let select_rows = |m: &BitMatrix| {
            let rows = keep.iter().map(|&c| m.row(c).to_vec()).collect();
            BitMatrix::from_rows(m.cols(), rows)
        };
        let rev = [
            self.rev[Pair::AB.index()].clone(),
            select_rows(&self.rev[Pair::BC.index()]),
            select_rows(&self.rev[Pair::AC.index()]),
        ];
        let coords = [
            self.coords[0].clone(),
            self.coords[1].clone(),
            self.coords[2].as_ref().map(|t| t.select(&keep)),
        ];
        Self::from_reverse(rev, coords)
    }

    /// Renames vertices: old vertex `v` of part `P` becomes `perms[P][v]`.
    pub fn relabel(&self, perms: [&[usize]; 3]) -> Result<Self> {
        for part in Part::ALL {
            let perm = perms[part.index()];
            let n = self.part_size(part);
            let mut seen = vec![false; n];
            if perm.len() != n
                || !perm
                    .iter()
                    .all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
            {
                return Err(Error::invalid(format!(
                    "not a permutation of part {}",
                    part.label()
                )));
            }
        }
        let mut fwd = Pair::ALL.map(|p| {
            let (x, y) = p.parts();
            BitMatrix::new(self.part_size(x), self.part_size(y))
        });
        for p in Pair::ALL {
            let (x, y) = p.parts();
            for e in self.edges(p) {
                fwd[p.index()].set(perms[x.index()][e.i], perms[y.index()][e.j]);
            }
        }
        let coords = Part::ALL.map(|part| {
            self.coords[part.index()].as_ref().map(|t| {
                let perm = perms[part.index()];
                let mut inverse = vec![0; perm.len()];
                for (old, &new) in perm.iter().enumerate() {
                    inverse[new] = old;
                }
                t.select(&inverse)
            })
        });
        Self::from_forward(fwd, coords)
    }
}

fn check_coords(sizes: &[usize; 3], coords: &[Option<CoordTable>; 3]) -> Result<()> {
    for part in Part::ALL {
        if let Some(t) = &coords[part.index()] {
            let n = sizes[part.index()];
            if t.dim() == 0 && n > 0 {
                return Err(Error::invalid(format!(
                    "part {} has zero-dimensional coordinates",
                    part.label()
                )));
            }
            if t.len() != n {
                return Err(Error::invalid(format!(
                    "part {} has {n} vertices but {} coordinate rows",
                    part.label(),
                    t.len()
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeBox;

    fn table(lo: i64, side: u64, d: usize) -> CoordTable {
        let grid = LatticeBox::new(lo, side, d);
        let pts: Vec<_> = (0..grid.len().unwrap()).map(|i| grid.point(i)).collect();
        CoordTable::from_points(d, &pts).unwrap()
    }

    #[test]
    fn construction_shapes() {
        let g = TripartiteGraph::empty(1, 1, 1);
        assert_eq!(g.total_vertices(), 3);
        assert_eq!(g.total_edges(), 0);
        let g = TripartiteGraph::empty(0, 0, 0);
        assert_eq!(g.total_vertices(), 0);

        let coords = [
            Some(table(1, 2, 4)),
            Some(table(1, 2, 4)),
            Some(table(0, 4, 4)),
        ];
        let g = TripartiteGraph::new(16, 16, 256, coords).unwrap();
        assert_eq!(g.sizes(), [16, 16, 256]);
        assert_eq!(g.coords(Part::C).unwrap().row(255), &[3, 3, 3, 3]);
    }

    #[test]
    fn coordinate_length_mismatch_is_rejected() {
        let coords = [Some(table(1, 2, 4)), None, None];
        let err = TripartiteGraph::new(15, 16, 256, coords).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn edge_ops() {
        let mut g = TripartiteGraph::empty(2, 3, 4);
        let e = EdgeRef::bc(2, 3);
        assert!(g.add_edge(e).unwrap());
        assert!(g.has_edge(e).unwrap());
        assert!(!g.add_edge(e).unwrap());
        assert_eq!(g.edge_count(Pair::BC), 1);
        assert!(g.matrix_rev(Pair::BC).get(3, 2));

        g.add_edge(EdgeRef::ab(1, 0)).unwrap();
        let removed = g
            .remove_edges(&[EdgeRef::ab(1, 0), EdgeRef::ab(0, 0), EdgeRef::ab(1, 0)])
            .unwrap();
        assert_eq!(removed, 1);
        assert!(g.is_symmetric());

        assert!(g.add_edge(EdgeRef::ac(2, 0)).is_err());
        assert!(g.has_edge(EdgeRef::ac(0, 4)).is_err());
        assert!(g
            .remove_edges(&[EdgeRef::bc(2, 3), EdgeRef::bc(3, 0)])
            .is_err());
        assert!(g.has_edge(e).unwrap(), "failed removal must not mutate");
    }

    fn sample_graph() -> TripartiteGraph {
        let mut g = TripartiteGraph::empty(2, 2, 3);
        for e in [
            EdgeRef::ab(0, 1),
            EdgeRef::ab(1, 0),
            EdgeRef::bc(1, 0),
            EdgeRef::bc(1, 2),
            EdgeRef::bc(0, 1),
            EdgeRef::ac(0, 0),
            EdgeRef::ac(0, 2),
            EdgeRef::ac(1, 1),
        ] {
            g.add_edge(e).unwrap();
        }
        g
    }

    #[test]
    fn restrict_c_identity_and_empty() {
        let g = sample_graph();
        assert_eq!(g.restrict_c(&[0, 1, 2]).unwrap(), g);
        let h = g.restrict_c(&[]).unwrap();
        assert_eq!(h.sizes(), [2, 2, 0]);
        assert_eq!(h.edge_count(Pair::AB), 2);
        assert_eq!(h.edge_count(Pair::BC) + h.edge_count(Pair::AC), 0);
        assert!(g.restrict_c(&[3]).is_err());
    }

    #[test]
    fn restrict_c_reindexes_in_order() {
        let g = sample_graph();
        let h = g.restrict_c(&[2, 0]).unwrap();
        assert_eq!(h.part_size(Part::C), 2);
        assert!(h.has_edge(EdgeRef::bc(1, 0)).unwrap());
        assert!(h.has_edge(EdgeRef::bc(1, 1)).unwrap());
        assert!(h.has_edge(EdgeRef::ac(0, 1)).unwrap());
        assert_eq!(h.edge_count(Pair::BC), 2);
        assert!(h.is_symmetric());
    }

    #[test]
    fn third_part_rows_select_common_neighbours() {
        let g = sample_graph();
        // Edge a0-b1: a0 sees c0,c2 and b1 sees c0,c2.
        let (x, y) = g.third_part_rows(EdgeRef::ab(0, 1));
        assert_eq!(and_popcount(x, y), 2);
        let (x, y) = g.third_part_rows(EdgeRef::bc(1, 2));
        assert_eq!(and_popcount(x, y), 1);
    }

    #[test]
    fn relabel_validates_permutations() {
        let g = sample_graph();
        assert!(g.relabel([&[0, 0], &[0, 1], &[0, 1, 2]]).is_err());
        let h = g.relabel([&[1, 0], &[0, 1], &[2, 1, 0]]).unwrap();
        assert!(h.has_edge(EdgeRef::ab(1, 1)).unwrap());
        assert!(h.has_edge(EdgeRef::ac(1, 2)).unwrap());
        assert_eq!(h.total_edges(), g.total_edges());
        assert_eq!(h.relabel([&[1, 0], &[0, 1], &[2, 1, 0]]).unwrap(), g);
    }
}
