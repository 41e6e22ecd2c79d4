//! The bundled hard-check suite run by `booksize verify`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analyze::{
    book_report, edge_triangle_counts, epsilon_witness_count, identity_sweep, theorem1_verdict,
    EpsilonMode, Verdict,
};
use crate::construct::{prune_uncovered, PairCounts, PipelineResult};
use crate::graph::{EdgeRef, Pair, Part, TripartiteGraph};
use crate::lattice::ConstructionParams;
use crate::oracle::{brute_force_triangles, recheck_geometry};
use crate::{Caps, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

impl Check {
    fn new(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: if ok {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            detail: detail.into(),
        }
    }

    fn skipped(name: &str, why: &str) -> Self {
        Check {
            name: name.into(),
            status: CheckStatus::Skipped,
            detail: why.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyOutcome {
    pub checks: Vec<Check>,
    /// Informational only; never affect [`VerifyOutcome::passed`].
    pub verdicts: Vec<Verdict>,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub caps: Caps,
    /// How many `A`-`B` edges get the sign-witness implication check.
    pub epsilon_edges: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            caps: Caps::default(),
            epsilon_edges: 100,
            seed: 0,
        }
    }
}

/// Runs every hard check that applies to `g`.
///
/// With `params` and coordinates present, geometry and identity checks run
/// too; `expected_missing` is the number of geometric edges per family that
/// the graph is known to lack (from pruning), defaulting to zero.
pub fn verify_graph(
    g: &TripartiteGraph,
    params: Option<&ConstructionParams>,
    expected_missing: Option<PairCounts>,
    opts: &VerifyOptions,
) -> Result<VerifyOutcome> {
    let mut checks = Vec::new();

    checks.push(Check::new(
        "adjacency_symmetry",
        g.is_symmetric(),
        "forward and reverse bitsets agree",
    ));

    let oracle = brute_force_triangles(g, opts.caps.oracle_iterations)?;
    let counts = edge_triangle_counts(g);
    let mismatches = counts
        .iter()
        .filter(|&&(e, t)| oracle.count(e) != Some(t))
        .count()
        + oracle.counts.len().abs_diff(counts.iter().count());
    checks.push(Check::new(
        "oracle_equivalence",
        mismatches == 0,
        format!(
            "{} edges compared, {mismatches} mismatches",
            oracle.counts.len()
        ),
    ));
    let incidences: u64 = counts.iter().map(|&(_, t)| t).sum();
    checks.push(Check::new(
        "triangle_incidence_sum",
        incidences == 3 * oracle.triangles.len() as u64,
        format!(
            "{incidences} incidences, {} triangles",
            oracle.triangles.len()
        ),
    ));

    let geometric = params.filter(|_| g.has_all_coords());
    match geometric {
        None => {
            let why = "graph has no coordinates or no parameters were given";
            for name in [
                "recheck_geometry",
                "w_identities",
                "w_norm_bound",
                "epsilon_witness_implication",
            ] {
                checks.push(Check::skipped(name, why));
            }
        }
        Some(params) => {
            let found = recheck_geometry(g, params)?;
            let spurious = found.iter().filter(|d| d.stored).count();
            let mut missing = PairCounts::default();
            for d in found.iter().filter(|d| !d.stored) {
                *missing.get_mut(d.edge.pair) += 1;
            }
            let expected = expected_missing.unwrap_or_default();
            let first = found
                .first()
                .map(|d| format!("; first at {}", d.edge))
                .unwrap_or_default();
            checks.push(Check::new(
                "recheck_geometry",
                spurious == 0 && missing == expected,
                format!(
                    "{spurious} stored non-geometric edges, missing AB/BC/AC = {}/{}/{} (expected {}/{}/{}){first}",
                    missing.ab, missing.bc, missing.ac, expected.ab, expected.bc, expected.ac
                ),
            ));

            let sweep = identity_sweep(g, params)?;
            checks.push(Check::new(
                "w_identities",
                sweep.ab_failures == 0 && sweep.ac_failures == 0,
                format!(
                    "{} triangles, {} AB-frame and {} AC-frame failures",
                    sweep.triangles, sweep.ab_failures, sweep.ac_failures
                ),
            ));
            checks.push(Check::new(
                "w_norm_bound",
                sweep.bound_failures == 0,
                format!(
                    "{} windowed triangles, max |w|^2 = {} against 9d = {}",
                    sweep.windowed,
                    sweep.max_w_norm_sq,
                    9 * params.d
                ),
            ));
            checks.push(epsilon_check(g, params, opts)?);
        }
    }

    let (once, _) = prune_uncovered(g);
    let (twice, removed_again) = prune_uncovered(&once);
    checks.push(Check::new(
        "prune_idempotence",
        removed_again.total() == 0 && twice == once,
        format!("second pass removed {} edges", removed_again.total()),
    ));
    let after = brute_force_triangles(&once, opts.caps.oracle_iterations)?;
    let uncovered_after = book_report(&once).uncovered;
    checks.push(Check::new(
        "prune_preserves_triangles",
        after.triangles == oracle.triangles && uncovered_after == 0,
        format!(
            "{} triangles before, {} after, {uncovered_after} uncovered after",
            oracle.triangles.len(),
            after.triangles.len()
        ),
    ));

    Ok(VerifyOutcome {
        checks,
        verdicts: Vec::new(),
    })
}

fn epsilon_check(
    g: &TripartiteGraph,
    params: &ConstructionParams,
    opts: &VerifyOptions,
) -> Result<Check> {
    const NAME: &str = "epsilon_witness_implication";
    let ab: Vec<EdgeRef> = g.edges(Pair::AB).collect();
    if ab.is_empty() || opts.epsilon_edges == 0 {
        return Ok(Check::skipped(NAME, "no A-B edges to test"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let picks =
        rand::seq::index::sample(&mut rng, ab.len(), opts.epsilon_edges.min(ab.len())).into_vec();
    let mode = if params.dim() <= crate::analyze::EXACT_EPSILON_MAX_DIM {
        EpsilonMode::Exact
    } else {
        EpsilonMode::Sampled {
            trials: 4096,
            seed: opts.seed,
        }
    };
    let (ta, tb) = (g.coords(Part::A).unwrap(), g.coords(Part::B).unwrap());
    let mut accepted = 0u64;
    let mut implications = 0u64;
    for &k in &picks {
        let e = ab[k];
        match epsilon_witness_count(&ta.point(e.i), &tb.point(e.j), params, mode) {
            Ok(out) => {
                accepted += out.accepted;
                if out.implication_checked {
                    implications += out.accepted;
                }
            }
            Err(Error::Invariant(msg)) => return Ok(Check::new(NAME, false, msg)),
            Err(other) => return Err(other),
        }
    }
    Ok(Check::new(
        NAME,
        true,
        format!(
            "{} edges, {accepted} accepted sign vectors, {implications} checked against both C windows",
            picks.len()
        ),
    ))
}

/// [`verify_graph`] for a pipeline result, with its bound verdicts attached.
pub fn verify_pipeline(result: &PipelineResult, opts: &VerifyOptions) -> Result<VerifyOutcome> {
    let s = &result.summary;
    let m = s.blowup.map_or(1, |b| b.multiplicity as u64);
    let expected = PairCounts {
        ab: s.pruned_edges.ab * m * m,
        bc: s.pruned_edges.bc * m,
        ac: s.pruned_edges.ac * m,
    };
    let mut out = verify_graph(&result.graph, Some(&s.params), Some(expected), opts)?;
    out.verdicts = theorem1_verdict(s, &book_report(&result.graph));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{run_pipeline, BlowUpSpec, PipelineConfig, SparsifyMode, SparsifySpec};

    #[test]
    fn small_pipeline_passes() {
        let mut cfg = PipelineConfig::new(ConstructionParams::new(2, 3).unwrap());
        cfg.sparsify = Some(SparsifySpec {
            mode: SparsifyMode::Random,
            target_size: 20,
            seed: 4,
        });
        cfg.prune = true;
        cfg.blowup = Some(BlowUpSpec { multiplicity: 2 });
        let res = run_pipeline(&cfg).unwrap();
        let out = verify_pipeline(&res, &VerifyOptions::default()).unwrap();
        assert!(out.passed(), "{:?}", out.failures().collect::<Vec<_>>());
        assert_eq!(out.verdicts.len(), 6);
    }

    #[test]
    fn injected_fault_names_geometry() {
        let params = ConstructionParams::new(2, 2).unwrap();
        let res = run_pipeline(&PipelineConfig::new(params)).unwrap();
        let mut g = res.graph.clone();
        let e = g.edges(Pair::AC).next().unwrap();
        g.remove_edges(&[e]).unwrap();
        let out = verify_graph(&g, Some(&params), None, &VerifyOptions::default()).unwrap();
        assert!(!out.passed());
        let names: Vec<_> = out.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["recheck_geometry"]);
    }

    #[test]
    fn coordinate_free_graph_skips_identities() {
        let mut g = TripartiteGraph::empty(2, 2, 2);
        g.add_edge(EdgeRef::ab(0, 0)).unwrap();
        g.add_edge(EdgeRef::ac(0, 1)).unwrap();
        g.add_edge(EdgeRef::bc(0, 1)).unwrap();
        let out = verify_graph(&g, None, None, &VerifyOptions::default()).unwrap();
        assert!(out.passed());
        assert_eq!(
            out.check("w_identities").unwrap().status,
            CheckStatus::Skipped
        );
        assert_eq!(
            out.check("oracle_equivalence").unwrap().status,
            CheckStatus::Pass
        );
    }
}
