//! Exact algebra behind the triangle-count bounds.
//!
//! For an `A`-`B` edge with `x = b - a`, a third vertex `c` is encoded by
//! `w = 2(c - a) - x`; then `4|c-a|^2 = |x+w|^2`, `4|b-c|^2 = |x-w|^2` and
//! summing gives `4|c-a|^2 + 4|b-c|^2 = 2|b-a|^2 + 2|w|^2`. When all three
//! squared distances sit in their windows this forces `|w|^2 <= 9d`.
//!
//! For an `A`-`C` edge with `y = c - a`, a vertex `b` is encoded by
//! `w = (b - a) - 2y`, giving `|b-a|^2 - 2|b-c|^2 = 2|c-a|^2 - |w|^2`, which
//! again caps `|w|^2` at `9d`.
//!
//! Everything is integer arithmetic; half-integers are avoided by doubling.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{EdgeRef, Pair, Part, TripartiteGraph};
use crate::lattice::{
    in_ab_window, in_c_window, squared_distance, squared_distance_slices, ConstructionParams,
    LatticePoint,
};
use crate::{Error, Result};

fn sub(u: &[i64], v: &[i64]) -> Vec<i64> {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

fn norm_sq(v: &[i64]) -> i128 {
    v.iter().map(|&x| i128::from(x) * i128::from(x)).sum()
}

fn same_dim(points: &[&LatticePoint]) -> Result<usize> {
    let d = points[0].dim();
    if points.iter().any(|p| p.dim() != d) {
        return Err(Error::invalid("points do not share a dimension"));
    }
    Ok(d)
}

/// Displacement vectors of one triangle relative to one of its edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFrame {
    /// `b - a`.
    pub x: Vec<i64>,
    /// `2(c - a) - x` for `A`-`B` frames; `(b - a) - 2y` for `A`-`C` frames.
    pub w: Vec<i64>,
    /// `c - a` for `A`-`C` frames, empty otherwise.
    pub y: Vec<i64>,
    /// `4 sum delta_i^2` for frames built from a sign vector.
    pub delta2_sum_x4: Option<i64>,
    /// `4 sum x_i delta_i eps_i` for frames built from a sign vector.
    pub cross_x4: Option<i64>,
}

impl WitnessFrame {
    pub fn ab(a: &LatticePoint, b: &LatticePoint, c: &LatticePoint) -> Self {
        let x = sub(b.coords(), a.coords());
        let w = sub(c.coords(), a.coords())
            .iter()
            .zip(&x)
            .map(|(ci, xi)| 2 * ci - xi)
            .collect();
        WitnessFrame {
            x,
            w,
            y: Vec::new(),
            delta2_sum_x4: None,
            cross_x4: None,
        }
    }

    pub fn ac(a: &LatticePoint, c: &LatticePoint, b: &LatticePoint) -> Self {
        let x = sub(b.coords(), a.coords());
        let y = sub(c.coords(), a.coords());
        let w = x.iter().zip(&y).map(|(xi, yi)| xi - 2 * yi).collect();
        WitnessFrame {
            x,
            w,
            y,
            delta2_sum_x4: None,
            cross_x4: None,
        }
    }

    /// Frame of the point `c = (a + b)/2 + delta * eps` where `delta_i` is
    /// `1/2` for odd `x_i` and `1` for even `x_i`; `signs[i]` is `eps_i`.
    pub fn from_signs(a: &LatticePoint, b: &LatticePoint, signs: &[i8]) -> (Self, LatticePoint) {
        let x = sub(b.coords(), a.coords());
        let mut cross_x4 = 0i64;
        let mut delta2_sum_x4 = 0i64;
        let c: Vec<i64> = a
            .coords()
            .iter()
            .zip(b.coords())
            .zip(&x)
            .zip(signs)
            .map(|(((&ai, &bi), &xi), &eps)| {
                let two_delta = two_delta(xi);
                delta2_sum_x4 += two_delta * two_delta;
                cross_x4 += 2 * xi * two_delta * i64::from(eps);
                (ai + bi + two_delta * i64::from(eps)) / 2
            })
            .collect();
        let c = LatticePoint::new(c);
        let mut frame = WitnessFrame::ab(a, b, &c);
        frame.delta2_sum_x4 = Some(delta2_sum_x4);
        frame.cross_x4 = Some(cross_x4);
        (frame, c)
    }

    pub fn w_norm_sq(&self) -> i128 {
        norm_sq(&self.w)
    }
}

/// `2 delta_i`: 1 for odd `x_i`, 2 for even.
fn two_delta(x: i64) -> i64 {
    if x % 2 == 0 {
        2
    } else {
        1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub holds: bool,
    pub w_norm_sq: u64,
}

/// Checks `4|c-a|^2 + 4|b-c|^2 = 2|b-a|^2 + 2|w|^2` together with the two
/// per-distance identities it is the sum of.
pub fn verify_w_identity_ab(
    a: &LatticePoint,
    b: &LatticePoint,
    c: &LatticePoint,
) -> Result<IdentityCheck> {
    same_dim(&[a, b, c])?;
    let frame = WitnessFrame::ab(a, b, c);
    let ca = i128::from(squared_distance(c, a)?);
    let bc = i128::from(squared_distance(b, c)?);
    let ba = i128::from(squared_distance(b, a)?);
    let w2 = frame.w_norm_sq();
    let plus: Vec<i64> = frame.x.iter().zip(&frame.w).map(|(x, w)| x + w).collect();
    let minus: Vec<i64> = frame.x.iter().zip(&frame.w).map(|(x, w)| x - w).collect();
    let holds =
        4 * ca == norm_sq(&plus) && 4 * bc == norm_sq(&minus) && 4 * ca + 4 * bc == 2 * ba + 2 * w2;
    Ok(IdentityCheck {
        holds,
        w_norm_sq: w2 as u64,
    })
}

/// Checks `|b-a|^2 - 2|b-c|^2 = 2|c-a|^2 - |w|^2` together with the two
/// expansions it is derived from.
pub fn verify_w_identity_ac(
    a: &LatticePoint,
    c: &LatticePoint,
    b: &LatticePoint,
) -> Result<IdentityCheck> {
    same_dim(&[a, b, c])?;
    let frame = WitnessFrame::ac(a, c, b);
    let ca = i128::from(squared_distance(c, a)?);
    let bc = i128::from(squared_distance(b, c)?);
    let ba = i128::from(squared_distance(b, a)?);
    let w2 = frame.w_norm_sq();
    let yw: i128 = frame
        .y
        .iter()
        .zip(&frame.w)
        .map(|(&y, &w)| i128::from(y) * i128::from(w))
        .sum();
    let holds = bc == ca + w2 + 2 * yw && ba == 4 * ca + w2 + 4 * yw && ba - 2 * bc == 2 * ca - w2;
    Ok(IdentityCheck {
        holds,
        w_norm_sq: w2 as u64,
    })
}

/// Result of checking both identities over every triangle of a graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentitySweep {
    pub triangles: u64,
    pub ab_failures: u64,
    /// Failures of the `A`-`C` frame identity, applied through both the
    /// `A`-`C` and (by symmetry) the `B`-`C` edge of each triangle.
    pub ac_failures: u64,
    /// Triangles whose three squared distances all lie in their windows.
    pub windowed: u64,
    /// Windowed triangles with some frame having `|w|^2 > 9d`.
    pub bound_failures: u64,
    pub max_w_norm_sq: u64,
}

impl IdentitySweep {
    pub fn is_clean(&self) -> bool {
        self.ab_failures == 0 && self.ac_failures == 0 && self.bound_failures == 0
    }
}

/// Runs both identities on every triangle of a coordinate-carrying graph.
pub fn identity_sweep(g: &TripartiteGraph, params: &ConstructionParams) -> Result<IdentitySweep> {
    let (Some(ta), Some(tb), Some(tc)) = (g.coords(Part::A), g.coords(Part::B), g.coords(Part::C))
    else {
        return Err(Error::invalid(
            "identity sweep needs coordinates on all three parts",
        ));
    };
    let nine_d = 9 * params.d;
    let ab_edges: Vec<EdgeRef> = g.edges(Pair::AB).collect();
    let partials: Vec<IdentitySweep> = ab_edges
        .par_iter()
        .map(|&e| {
            let mut s = IdentitySweep::default();
            let (a, b) = (ta.point(e.i), tb.point(e.j));
            let ab_ok = in_ab_window(squared_distance_slices(a.coords(), b.coords()), params);
            let from_a = g.matrix(Pair::AC);
            let from_b = g.matrix(Pair::BC);
            for c_idx in from_a.iter_row(e.i).filter(|&c| from_b.get(e.j, c)) {
                let c = tc.point(c_idx);
                s.triangles += 1;
                let ab = verify_w_identity_ab(&a, &b, &c).expect("dimensions checked");
                let ac = verify_w_identity_ac(&a, &c, &b).expect("dimensions checked");
                let bc = verify_w_identity_ac(&b, &c, &a).expect("dimensions checked");
                s.ab_failures += u64::from(!ab.holds);
                s.ac_failures += u64::from(!ac.holds) + u64::from(!bc.holds);
                let worst = ab.w_norm_sq.max(ac.w_norm_sq).max(bc.w_norm_sq);
                s.max_w_norm_sq = s.max_w_norm_sq.max(worst);
                let windowed = ab_ok
                    && in_c_window(squared_distance_slices(c.coords(), a.coords()), params)
                    && in_c_window(squared_distance_slices(b.coords(), c.coords()), params);
                if windowed {
                    s.windowed += 1;
                    s.bound_failures += u64::from(worst > nine_d);
                }
            }
            s
        })
        .collect();
    Ok(partials
        .into_iter()
        .fold(IdentitySweep::default(), |acc, s| IdentitySweep {
            triangles: acc.triangles + s.triangles,
            ab_failures: acc.ab_failures + s.ab_failures,
            ac_failures: acc.ac_failures + s.ac_failures,
            windowed: acc.windowed + s.windowed,
            bound_failures: acc.bound_failures + s.bound_failures,
            max_w_norm_sq: acc.max_w_norm_sq.max(s.max_w_norm_sq),
        }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EpsilonMode {
    /// All `2^d` sign vectors; `d <= 20`.
    Exact,
    Sampled {
        trials: u64,
        seed: u64,
    },
}

pub const EXACT_EPSILON_MAX_DIM: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonOutcome {
    /// Sign vectors examined (`2^d` in exact mode).
    pub examined: u64,
    /// Those with `|sum x_i delta_i eps_i| <= 3d/4`.
    pub accepted: u64,
    pub fraction: f64,
    /// Whether `|a-b|^2` is in the `A`-`B` window, in which case every
    /// accepted sign vector was checked to land in both `C` windows.
    pub implication_checked: bool,
    /// `(1 - 2 exp(-d / (15 r^2)))` as a fraction of `2^d`.
    pub predicted_fraction: f64,
    /// Whether the accepted fraction reaches `predicted_fraction`.
    pub meets_prediction: bool,
    /// Whether the accepted fraction exceeds 1/2, i.e. count > `2^{d-1}`.
    pub above_half: bool,
}

/// Counts sign vectors `eps` whose point `c = (a+b)/2 + delta * eps`
/// keeps the cross term within `3d/4`.
///
/// When `a`-`b` lies in its window, every accepted `c` must lie in both
/// `C` windows; a counterexample is reported as [`Error::Invariant`].
pub fn epsilon_witness_count(
    a: &LatticePoint,
    b: &LatticePoint,
    params: &ConstructionParams,
    mode: EpsilonMode,
) -> Result<EpsilonOutcome> {
    let d = same_dim(&[a, b])?;
    if d != params.dim() {
        return Err(Error::invalid(format!(
            "points have dimension {d}, params expect {}",
            params.d
        )));
    }
    let x = sub(b.coords(), a.coords());
    // Coefficient of eps_i in 2 * cross.
    let coef: Vec<i64> = x.iter().map(|&xi| xi * two_delta(xi)).collect();
    let three_d = 3 * d as i64;
    let check = in_ab_window(squared_distance(a, b)?, params);

    let accept = |signs: &[i8]| -> Result<bool> {
        let cross2: i64 = coef.iter().zip(signs).map(|(k, &s)| k * i64::from(s)).sum();
        // |cross| <= 3d/4  <=>  2 |cross2| <= 3d
        if 2 * cross2.abs() > three_d {
            return Ok(false);
        }
        if check {
            let (_, c) = WitnessFrame::from_signs(a, b, signs);
            let ca = squared_distance(&c, a)?;
            let bc = squared_distance(b, &c)?;
            if !in_c_window(ca, params) || !in_c_window(bc, params) {
                return Err(Error::Invariant(format!(
                    "sign witness {c} for edge {a}-{b} has |c-a|^2={ca}, |b-c|^2={bc} outside the C window"
                )));
            }
        }
        Ok(true)
    };

    let (examined, accepted) = match mode {
        EpsilonMode::Exact => {
            if d > EXACT_EPSILON_MAX_DIM {
                return Err(Error::Resource {
                    what: "exact sign enumeration",
                    size: format!("2^{d}"),
                    cap: 1 << EXACT_EPSILON_MAX_DIM,
                });
            }
            let total = 1u64 << d;
            let accepted = (0..total)
                .into_par_iter()
                .map(|mask| {
                    let signs: Vec<i8> = (0..d)
                        .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
                        .collect();
                    accept(&signs).map(u64::from)
                })
                .sum::<Result<u64>>()?;
            (total, accepted)
        }
        EpsilonMode::Sampled { trials, seed } => {
            if trials == 0 {
                return Err(Error::invalid("trials must be at least 1"));
            }
            let accepted = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(t);
                    let signs: Vec<i8> = (0..d)
                        .map(|_| if rng.random::<bool>() { 1 } else { -1 })
                        .collect();
                    accept(&signs).map(u64::from)
                })
                .sum::<Result<u64>>()?;
            (trials, accepted)
        }
    };
    let fraction = accepted as f64 / examined as f64;
    let predicted_fraction =
        1.0 - 2.0 * (-(d as f64) / (15.0 * (params.r * params.r) as f64)).exp();
    Ok(EpsilonOutcome {
        examined,
        accepted,
        fraction,
        implication_checked: check,
        predicted_fraction,
        meets_prediction: fraction >= predicted_fraction,
        above_half: 2 * accepted > examined,
    })
}
