//! Building the lattice pre-construction and the transformations applied to
//! it: sparsifying `C`, pruning edges that lie in no triangle, and blowing
//! up `A` and `B`.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analyze::edge_triangle_counts;
use crate::graph::{and_popcount, BitMatrix, CoordTable, Pair, Part, TripartiteGraph};
use crate::lattice::{
    in_ab_window, in_c_window, squared_distance_slices, ConstructionParams, LatticeBox,
    LatticePoint,
};
use crate::{Caps, Error, Result};

/// The vertex boxes for `A`/`B` and `C`.
pub fn part_boxes(params: &ConstructionParams, symmetric: bool) -> (LatticeBox, LatticeBox) {
    let d = params.dim();
    let ab = LatticeBox::new(1, params.r, d);
    let c = if symmetric {
        ab
    } else {
        LatticeBox::new(0, params.r + 2, d)
    };
    (ab, c)
}

fn checked_box_len(b: &LatticeBox, what: &'static str, caps: &Caps) -> Result<usize> {
    let too_big = || Error::Resource {
        what,
        size: format!("{}^{}", b.side, b.d),
        cap: caps.max_part_size,
    };
    let n = b.len().ok_or_else(too_big)?;
    if n > caps.max_part_size {
        return Err(too_big());
    }
    Ok(n as usize)
}

fn coord_table(b: &LatticeBox, n: usize) -> CoordTable {
    let mut data = vec![0i64; n * b.d];
    data.par_chunks_mut(b.d.max(1))
        .enumerate()
        .for_each(|(i, row)| b.point_into(i as u64, row));
    CoordTable::new(b.d, data).expect("length is n * d")
}

fn window_matrix(
    rows: &CoordTable,
    cols: &CoordTable,
    keep: impl Fn(u64) -> bool + Sync,
) -> BitMatrix {
    let words = cols.len().div_ceil(64);
    let data: Vec<Vec<u64>> = (0..rows.len())
        .into_par_iter()
        .map(|i| {
            let p = rows.row(i);
            let mut row = vec![0u64; words];
            for j in 0..cols.len() {
                if keep(squared_distance_slices(p, cols.row(j))) {
                    row[j / 64] |= 1 << (j % 64);
                }
            }
            row
        })
        .collect();
    BitMatrix::from_rows(cols.len(), data)
}

/// The tripartite lattice graph with window adjacency.
///
/// `A = B = [r]^d`; `C = {0, ..., r+1}^d`, or `[r]^d` when `symmetric`.
/// `a ~ b` iff `|a-b|^2` lies in the `A`-`B` window, and `a ~ c`, `b ~ c`
/// iff the squared distance lies in the `C` window.
pub fn build_preconstruction(
    params: &ConstructionParams,
    symmetric: bool,
    caps: &Caps,
) -> Result<TripartiteGraph> {
    let (ab_box, c_box) = part_boxes(params, symmetric);
    let n = checked_box_len(&ab_box, "part size r^d", caps)?;
    let n_c = checked_box_len(&c_box, "part size of C", caps)?;
    for (rows, cols) in [(n, n), (n, n_c)] {
        let bits = (rows as u128) * (cols as u128);
        if bits > u128::from(caps.max_matrix_bits) {
            return Err(Error::Resource {
                what: "adjacency bitset",
                size: format!("{rows} x {cols} bits"),
                cap: caps.max_matrix_bits,
            });
        }
    }

    let ab_coords = coord_table(&ab_box, n);
    let c_coords = if symmetric {
        ab_coords.clone()
    } else {
        coord_table(&c_box, n_c)
    };

    let ab = window_matrix(&ab_coords, &ab_coords, |d2| in_ab_window(d2, params));
    let ac = window_matrix(&ab_coords, &c_coords, |d2| in_c_window(d2, params));
    // A and B carry identical coordinates, so the B-C family equals A-C.
    let bc = ac.clone();

    TripartiteGraph::from_forward(
        [ab, bc, ac],
        [Some(ab_coords.clone()), Some(ab_coords), Some(c_coords)],
    )
}

/// Parameters in the coupled regime `d = r^5`, reported in log space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoupledPreset {
    pub params: ConstructionParams,
    /// `ln n` with `n = r^d`.
    pub ln_n: f64,
    /// `5 ln n / ln ln n`, the leading-order prediction for `d`.
    pub predicted_d: f64,
    /// `d / predicted_d`; tends to 1 as `r` grows.
    pub d_ratio: f64,
}

pub fn coupled_params(r: u64) -> Result<CoupledPreset> {
    if r < 2 || !r.is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "coupled preset needs an even r >= 2 (got {r})"
        )));
    }
    let d = r
        .checked_pow(5)
        .ok_or_else(|| Error::invalid(format!("r^5 overflows for r={r}")))?;
    let params = ConstructionParams::new(r, d)?;
    let ln_n = params.ln_n();
    let predicted_d = 5.0 * ln_n / ln_n.ln();
    Ok(CoupledPreset {
        params,
        ln_n,
        predicted_d,
        d_ratio: d as f64 / predicted_d,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SparsifyMode {
    Random,
    Greedy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsifySpec {
    pub mode: SparsifyMode,
    /// `|C'|`; for greedy mode, the pick budget.
    pub target_size: usize,
    /// Used by random mode only.
    pub seed: u64,
}

impl SparsifySpec {
    fn validate(&self, n_c: usize) -> Result<()> {
        if self.target_size == 0 || self.target_size > n_c {
            return Err(Error::invalid(format!(
                "sparsify target {} must lie in 1..={n_c}",
                self.target_size
            )));
        }
        Ok(())
    }
}

/// `max(1, round(2^{-d/2} n_c))`.
pub fn default_target_size(d: u64, n_c: usize) -> usize {
    let scaled = (n_c as f64 * (-(d as f64) / 2.0).exp2()).round() as usize;
    scaled.max(1)
}

/// A uniformly random `target_size`-subset of `C`, sorted ascending.
pub fn sparsify_random(g: &TripartiteGraph, spec: &SparsifySpec) -> Result<Vec<usize>> {
    let n_c = g.part_size(Part::C);
    spec.validate(n_c)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut picked = rand::seq::index::sample(&mut rng, n_c, spec.target_size).into_vec();
    picked.sort_unstable();
    Ok(picked)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedySelection {
    /// Picked `C` vertices in pick order.
    pub selected: Vec<usize>,
    /// Newly covered `A`-`B` edges contributed by each pick.
    pub gains: Vec<u64>,
    /// `A`-`B` edges lying in at least one triangle through a picked vertex.
    pub covered: u64,
    /// `A`-`B` edges lying in at least one triangle of the full graph.
    pub coverable: u64,
}

fn greedy_gain(g: &TripartiteGraph, uncovered: &BitMatrix, c: usize) -> u64 {
    let to_b = g.matrix_rev(Pair::BC).row(c);
    g.matrix_rev(Pair::AC)
        .iter_row(c)
        .map(|a| and_popcount(uncovered.row(a), to_b))
        .sum()
}

/// Picks `C` vertices one at a time, each maximising the number of not yet
/// covered `A`-`B` edges it completes to a triangle (lowest index on ties).
///
/// Stops after `budget` picks or once no candidate adds coverage. Marginal
/// gains only shrink as coverage grows, so candidates are kept in a max-heap
/// of stale gains and re-scored lazily.
pub fn sparsify_greedy(g: &TripartiteGraph, budget: usize) -> Result<GreedySelection> {
    if budget == 0 {
        return Err(Error::invalid("greedy budget must be at least 1"));
    }
    let n_c = g.part_size(Part::C);
    let mut uncovered = g.matrix(Pair::AB).clone();

    let initial: Vec<u64> = (0..n_c)
        .into_par_iter()
        .map(|c| greedy_gain(g, &uncovered, c))
        .collect();
    let mut heap: BinaryHeap<(u64, Reverse<usize>)> = initial
        .iter()
        .enumerate()
        .filter(|&(_, &gain)| gain > 0)
        .map(|(c, &gain)| (gain, Reverse(c)))
        .collect();

    let mut selected = Vec::new();
    let mut gains = Vec::new();
    let mut covered_total = 0u64;
    while selected.len() < budget {
        let Some((_, Reverse(c))) = heap.pop() else {
            break;
        };
        let fresh = greedy_gain(g, &uncovered, c);
        if fresh == 0 {
            continue;
        }
        let key = (fresh, Reverse(c));
        if heap
            .peek()
            .is_some_and(|top| key.cmp(top) == Ordering::Less)
        {
            heap.push(key);
            continue;
        }
        let to_b: Vec<usize> = g.matrix_rev(Pair::BC).iter_row(c).collect();
        for a in g.matrix_rev(Pair::AC).iter_row(c) {
            for &b in &to_b {
                uncovered.clear(a, b);
            }
        }
        selected.push(c);
        gains.push(fresh);
        covered_total += fresh;
    }

    let coverable = g
        .edges(Pair::AB)
        .filter(|&e| {
            let (x, y) = g.third_part_rows(e);
            and_popcount(x, y) > 0
        })
        .count() as u64;
    Ok(GreedySelection {
        selected,
        gains,
        covered: covered_total,
        coverable,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCounts {
    pub ab: u64,
    pub bc: u64,
    pub ac: u64,
}

impl PairCounts {
    pub fn get(&self, pair: Pair) -> u64 {
        match pair {
            Pair::AB => self.ab,
            Pair::BC => self.bc,
            Pair::AC => self.ac,
        }
    }

    pub fn get_mut(&mut self, pair: Pair) -> &mut u64 {
        match pair {
            Pair::AB => &mut self.ab,
            Pair::BC => &mut self.bc,
            Pair::AC => &mut self.ac,
        }
    }

    pub fn total(&self) -> u64 {
        self.ab + self.bc + self.ac
    }

    pub fn of_graph(g: &TripartiteGraph) -> Self {
        PairCounts {
            ab: g.edge_count(Pair::AB),
            bc: g.edge_count(Pair::BC),
            ac: g.edge_count(Pair::AC),
        }
    }
}

/// Deletes every edge, of any family, that lies in no triangle.
///
/// One pass is enough: an edge of a surviving triangle is itself in that
/// triangle, so no deletion can strand another edge.
pub fn prune_uncovered(g: &TripartiteGraph) -> (TripartiteGraph, PairCounts) {
    let counts = edge_triangle_counts(g);
    let mut doomed = Vec::new();
    let mut removed = PairCounts::default();
    for pair in Pair::ALL {
        for &(e, t) in counts.get(pair) {
            if t == 0 {
                doomed.push(e);
                *removed.get_mut(pair) += 1;
            }
        }
    }
    let mut out = g.clone();
    let n = out
        .remove_edges(&doomed)
        .expect("edges come from the graph itself");
    debug_assert_eq!(n, removed.total());
    (out, removed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowUpSpec {
    pub multiplicity: usize,
}

/// Replaces each vertex of `A` and `B` by `m` copies; copy `k` of vertex `v`
/// gets index `v * m + k`. Copies inherit all adjacency of their original
/// and `C` is untouched.
pub fn blow_up(g: &TripartiteGraph, spec: &BlowUpSpec) -> Result<TripartiteGraph> {
    let m = spec.multiplicity;
    if m == 0 {
        return Err(Error::invalid("blow-up multiplicity must be at least 1"));
    }
    let [n_a, n_b, n_c] = g.sizes();
    let (na2, nb2) = (
        n_a.checked_mul(m)
            .ok_or_else(|| Error::invalid("blow-up size overflows"))?,
        n_b.checked_mul(m)
            .ok_or_else(|| Error::invalid("blow-up size overflows"))?,
    );

    let ab_src = g.matrix(Pair::AB);
    let mut ab = BitMatrix::new(na2, nb2);
    for a in 0..n_a {
        for b in ab_src.iter_row(a) {
            for ka in 0..m {
                for kb in 0..m {
                    ab.set(a * m + ka, b * m + kb);
                }
            }
        }
    }
    let repeat_rows = |src: &BitMatrix| {
        let rows = (0..src.rows() * m)
            .map(|i| src.row(i / m).to_vec())
            .collect();
        BitMatrix::from_rows(n_c, rows)
    };
    let bc = repeat_rows(g.matrix(Pair::BC));
    let ac = repeat_rows(g.matrix(Pair::AC));

    let repeat_coords = |part: Part| {
        g.coords(part).map(|t| {
            let idx: Vec<usize> = (0..t.len() * m).map(|i| i / m).collect();
            t.select(&idx)
        })
    };
    TripartiteGraph::from_forward(
        [ab, bc, ac],
        [
            repeat_coords(Part::A),
            repeat_coords(Part::B),
            g.coords(Part::C).cloned(),
        ],
    )
}

/// An integer point near the midpoint of `a` and `b`, built to complete the
/// edge `ab` to a triangle.
///
/// Even coordinate differences keep the exact midpoint. Odd ones round the
/// half-integer up or down, picking each sign so the running cross term
/// `sum x_i delta_i eps_i` (with `delta_i = 1/2`) stays as close to zero as
/// possible; its final magnitude is at most `max |x_i| / 2`. The result is
/// clamped to `{0, ..., r+1}^d`.
pub fn rounded_midpoint_witness(
    a: &LatticePoint,
    b: &LatticePoint,
    params: &ConstructionParams,
) -> Result<LatticePoint> {
    let d = params.dim();
    if a.dim() != d || b.dim() != d {
        return Err(Error::invalid(format!(
            "points must have dimension {d} (got {} and {})",
            a.dim(),
            b.dim()
        )));
    }
    let r = params.r as i64;
    // Twice the cross term, kept integral.
    let mut cross2 = 0i64;
    let coords = a
        .coords()
        .iter()
        .zip(b.coords())
        .map(|(&ai, &bi)| {
            let x = bi - ai;
            let sum = ai + bi;
            let c = if x % 2 == 0 {
                sum / 2
            } else {
                // eps = +1 rounds up; choose the sign that pulls cross2 toward 0.
                let eps = if cross2 * x > 0 { -1 } else { 1 };
                cross2 += x * eps;
                (sum + eps) / 2
            };
            c.clamp(0, r + 1)
        })
        .collect();
    Ok(LatticePoint::new(coords))
}

/// Pipeline stages applied after the pre-construction, in order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub params: ConstructionParams,
    pub symmetric: bool,
    pub sparsify: Option<SparsifySpec>,
    pub prune: bool,
    pub blowup: Option<BlowUpSpec>,
    pub caps: Caps,
}

impl PipelineConfig {
    pub fn new(params: ConstructionParams) -> Self {
        PipelineConfig {
            params,
            symmetric: false,
            sparsify: None,
            prune: false,
            blowup: None,
            caps: Caps::default(),
        }
    }
}

/// Everything about a pipeline run except the graph itself.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineSummary {
    pub params: ConstructionParams,
    pub symmetric: bool,
    pub sparsify: Option<SparsifySpec>,
    pub greedy_gains: Option<Vec<u64>>,
    pub blowup: Option<BlowUpSpec>,
    pub pruned: bool,
    /// `|A| = |B| = r^d` before any blow-up.
    pub n: u64,
    /// `|C|` of the pre-construction.
    pub c_full: u64,
    /// `A`-`B` edges of the pre-construction.
    pub preconstruction_ab_edges: u64,
    pub pruned_edges: PairCounts,
    pub part_sizes: [usize; 3],
    /// Total vertex count `N` of the final graph.
    pub total_vertices: u64,
    pub edges: PairCounts,
}

#[derive(Clone, Debug)]
pub struct PipelineResult {
    pub graph: TripartiteGraph,
    pub summary: PipelineSummary,
}

pub fn run_pipeline(config: &PipelineConfig) -> Result<PipelineResult> {
    let pre = build_preconstruction(&config.params, config.symmetric, &config.caps)?;
    let n = pre.part_size(Part::A) as u64;
    let c_full = pre.part_size(Part::C) as u64;
    let preconstruction_ab_edges = pre.edge_count(Pair::AB);

    let mut greedy_gains = None;
    let mut graph = match &config.sparsify {
        None => pre,
        Some(spec) => {
            let keep = match spec.mode {
                SparsifyMode::Random => sparsify_random(&pre, spec)?,
                SparsifyMode::Greedy => {
                    spec.validate(pre.part_size(Part::C))?;
                    let sel = sparsify_greedy(&pre, spec.target_size)?;
                    greedy_gains = Some(sel.gains);
                    sel.selected
                }
            };
            pre.restrict_c(&keep)?
        }
    };

    let mut pruned_edges = PairCounts::default();
    if config.prune {
        let (g, removed) = prune_uncovered(&graph);
        graph = g;
        pruned_edges = removed;
    }
    if let Some(spec) = &config.blowup {
        graph = blow_up(&graph, spec)?;
    }

    let summary = PipelineSummary {
        params: config.params,
        symmetric: config.symmetric,
        sparsify: config.sparsify,
        greedy_gains,
        blowup: config.blowup,
        pruned: config.prune,
        n,
        c_full,
        preconstruction_ab_edges,
        pruned_edges,
        part_sizes: graph.sizes(),
        total_vertices: graph.total_vertices() as u64,
        edges: PairCounts::of_graph(&graph),
    };
    Ok(PipelineResult { graph, summary })
}
