//! Exact lattice geometry: squared distances, window predicates, ball
//! volumes, lattice-point counting and concentration bounds.
//!
//! Window predicates never touch floating point. The centre `mu` of the
//! `A`-`B` window is `(r^2 - 1) d / 6` and the `C` windows are centred on
//! `mu / 4`, so both are compared after multiplying through by 6 and 24
//! respectively.

use std::f64::consts::{E, PI};
use std::fmt;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// An integer point of `Z^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    coords: Vec<i64>,
}

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticePoint { coords }
    }

    pub fn origin(d: usize) -> Self {
        LatticePoint { coords: vec![0; d] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.coords
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(coords: Vec<i64>) -> Self {
        LatticePoint { coords }
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Inclusive integer interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn contains(&self, x: i128) -> bool {
        i128::from(self.lo) <= x && x <= i128::from(self.hi)
    }
}

/// Side length, dimension and the scaled adjacency windows.
///
/// `ab_window` bounds `6 * |a-b|^2` and `c_window` bounds `24 * |c-a|^2`
/// (equivalently `24 * |b-c|^2`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub r: u64,
    pub d: u64,
    /// `(r^2 - 1) * d`, six times the window centre.
    pub mu6: i64,
    pub ab_window: Window,
    pub c_window: Window,
    /// Set when `d = r^5`.
    pub coupled: bool,
}

impl ConstructionParams {
    pub fn new(r: u64, d: u64) -> Result<Self> {
        if r == 0 || d == 0 {
            return Err(Error::invalid(format!(
                "r and d must be positive (got r={r}, d={d})"
            )));
        }
        let overflow = || {
            Error::invalid(format!(
                "parameters r={r}, d={d} overflow 64-bit window arithmetic"
            ))
        };
        let r_sq_minus_1 = r.checked_mul(r).ok_or_else(overflow)? - 1;
        let mu6 = i64::try_from(r_sq_minus_1.checked_mul(d).ok_or_else(overflow)?)
            .map_err(|_| overflow())?;
        let d_i = i64::try_from(d).map_err(|_| overflow())?;
        let six_d = d_i.checked_mul(6).ok_or_else(overflow)?;
        let forty_eight_d = d_i.checked_mul(48).ok_or_else(overflow)?;
        let coupled = r.checked_pow(5) == Some(d);
        Ok(ConstructionParams {
            r,
            d,
            mu6,
            ab_window: Window {
                lo: mu6 - six_d,
                hi: mu6.checked_add(six_d).ok_or_else(overflow)?,
            },
            c_window: Window {
                lo: mu6 - forty_eight_d,
                hi: mu6.checked_add(forty_eight_d).ok_or_else(overflow)?,
            },
            coupled,
        })
    }

    /// The window centre `mu = (r^2 - 1) d / 6` as a float, for reporting.
    pub fn mu(&self) -> f64 {
        self.mu6 as f64 / 6.0
    }

    /// `ln n` where `n = r^d = |A| = |B|`.
    pub fn ln_n(&self) -> f64 {
        self.d as f64 * (self.r as f64).ln()
    }

    pub fn dim(&self) -> usize {
        self.d as usize
    }
}

/// The box `{lo, ..., lo + side - 1}^d`, indexed lexicographically with the
/// first coordinate most significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeBox {
    pub lo: i64,
    pub side: u64,
    pub d: usize,
}

impl LatticeBox {
    pub fn new(lo: i64, side: u64, d: usize) -> Self {
        LatticeBox { lo, side, d }
    }

    /// `side^d`, or `None` on overflow.
    pub fn len(&self) -> Option<u64> {
        self.side.checked_pow(u32::try_from(self.d).ok()?)
    }

    pub fn is_empty(&self) -> bool {
        self.side == 0
    }

    /// Writes the point with the given index into `out` (length `d`).
    pub fn point_into(&self, mut index: u64, out: &mut [i64]) {
        debug_assert_eq!(out.len(), self.d);
        for slot in out.iter_mut().rev() {
            *slot = self.lo + (index % self.side) as i64;
            index /= self.side;
        }
    }

    pub fn point(&self, index: u64) -> LatticePoint {
        let mut coords = vec![0; self.d];
        self.point_into(index, &mut coords);
        LatticePoint::new(coords)
    }
}

/// `sum_i (u_i - v_i)^2`.
pub fn squared_distance(u: &LatticePoint, v: &LatticePoint) -> Result<u64> {
    if u.dim() != v.dim() {
        return Err(Error::invalid(format!(
            "dimension mismatch: {} vs {}",
            u.dim(),
            v.dim()
        )));
    }
    Ok(squared_distance_slices(u.coords(), v.coords()))
}

/// Slice form of [`squared_distance`]; callers guarantee equal lengths.
#[inline]
pub fn squared_distance_slices(u: &[i64], v: &[i64]) -> u64 {
    debug_assert_eq!(u.len(), v.len());
    u.iter()
        .zip(v)
        .map(|(&a, &b)| {
            let t = a.abs_diff(b);
            t * t
        })
        .sum()
}

/// True iff `mu - d <= dist2 <= mu + d`.
#[inline]
pub fn in_ab_window(dist2: u64, params: &ConstructionParams) -> bool {
    params.ab_window.contains(6 * i128::from(dist2))
}

/// True iff `mu/4 - 2d <= dist2 <= mu/4 + 2d`.
#[inline]
pub fn in_c_window(dist2: u64, params: &ConstructionParams) -> bool {
    params.c_window.contains(24 * i128::from(dist2))
}

fn require_even(d: u64) -> Result<()> {
    if d == 0 || !d.is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "exact ball volume is defined here for positive even d only (got {d})"
        )));
    }
    Ok(())
}

fn ln_factorial(k: u64) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// `pi^{d/2} radius^d / (d/2)!` for even `d`.
///
/// Overflows to infinity once the value leaves `f64` range (roughly
/// `d > 300` for moderate radii); use [`ln_ball_volume_exact`] there.
pub fn ball_volume_exact(d: u64, radius: f64) -> Result<f64> {
    require_even(d)?;
    let step = PI * radius * radius;
    Ok((1..=d / 2).fold(1.0, |acc, i| acc * step / i as f64))
}

pub fn ln_ball_volume_exact(d: u64, radius: f64) -> Result<f64> {
    require_even(d)?;
    let half = d as f64 / 2.0;
    Ok(half * PI.ln() + d as f64 * radius.ln() - ln_factorial(d / 2))
}

/// `(2 pi e)^{d/2} radius^d / d^{d/2}`, an upper bound on the exact volume.
pub fn ball_volume_upper(d: u64, radius: f64) -> f64 {
    ln_ball_volume_upper(d, radius).exp()
}

pub fn ln_ball_volume_upper(d: u64, radius: f64) -> f64 {
    let df = d as f64;
    df / 2.0 * (2.0 * PI * E).ln() + df * radius.ln() - df / 2.0 * df.ln()
}

/// Counts integer vectors `w in Z^d` with `|w|^2 <= radius_sq`.
///
/// Depth-first over coordinates, pruning on the remaining squared budget;
/// the innermost coordinate is counted in closed form. `node_cap` bounds the
/// number of visited interior nodes.
pub fn count_lattice_points_in_ball(d: usize, radius_sq: u64, node_cap: u64) -> Result<u64> {
    if d == 0 {
        return Err(Error::invalid("dimension must be positive"));
    }
    let mut visited = 0u64;
    count_points(d, radius_sq, &mut visited, node_cap)
}

fn count_points(dims: usize, budget: u64, visited: &mut u64, cap: u64) -> Result<u64> {
    let m = budget.isqrt();
    if dims == 1 {
        return Ok(2 * m + 1);
    }
    let mut total = 0u64;
    for w in 0..=m {
        *visited += 1;
        if *visited > cap {
            return Err(Error::Resource {
                what: "lattice enumeration",
                size: format!("more than {cap} visited nodes"),
                cap,
            });
        }
        let sub = count_points(dims - 1, budget - w * w, visited, cap)?;
        total += if w == 0 { sub } else { 2 * sub };
    }
    Ok(total)
}

/// Two-sided Hoeffding-Azuma tail `2 exp(-t^2 / (2 lip^2 n))` for an
/// `lip`-Lipschitz function of `n` independent coordinates.
pub fn hoeffding_tail(t: f64, lip: f64, n: u64) -> f64 {
    2.0 * (-(t * t) / (2.0 * lip * lip * n as f64)).exp()
}

/// Fraction of `trials` uniform pairs `(U, V)` on `[r]^d` whose squared
/// distance falls outside `mu +- d`.
///
/// Trial `k` draws from a ChaCha stream selected by `k` under key `seed`,
/// so the result does not depend on how trials are split across threads.
pub fn sample_distance_concentration(r: u64, d: u64, trials: u64, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    let params = ConstructionParams::new(r, d)?;
    let outside: u64 = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial);
            let dist2: u64 = (0..d)
                .map(|_| {
                    let u = rng.random_range(1..=r);
                    let v = rng.random_range(1..=r);
                    let t = u.abs_diff(v);
                    t * t
                })
                .sum();
            u64::from(!in_ab_window(dist2, &params))
        })
        .sum();
    Ok(outside as f64 / trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> LatticePoint {
        LatticePoint::new(c.to_vec())
    }

    #[test]
    fn squared_distance_examples() {
        assert_eq!(squared_distance(&p(&[1, 1]), &p(&[2, 3])).unwrap(), 5);
        assert_eq!(
            squared_distance(&p(&[4, -2, 7]), &p(&[4, -2, 7])).unwrap(),
            0
        );
        assert_eq!(
            squared_distance(&p(&[1, 1, 1, 1]), &p(&[2, 2, 2, 2])).unwrap(),
            4
        );
    }

    #[test]
    fn squared_distance_rejects_mismatched_dimensions() {
        let err = squared_distance(&p(&[1, 2]), &p(&[1, 2, 3])).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn params_scaled_windows() {
        let params = ConstructionParams::new(2, 6).unwrap();
        assert_eq!(params.mu6, 18);
        assert_eq!(params.ab_window, Window { lo: -18, hi: 54 });
        assert_eq!(
            params.c_window,
            Window {
                lo: 18 - 288,
                hi: 18 + 288
            }
        );
        assert!(!params.coupled);
        assert!(ConstructionParams::new(2, 32).unwrap().coupled);
        assert!(ConstructionParams::new(0, 3).is_err());
    }

    #[test]
    fn ab_window_examples() {
        let params = ConstructionParams::new(2, 6).unwrap();
        assert!(in_ab_window(3, &params));
        assert!(!in_ab_window(10, &params));
        assert!(in_ab_window(9, &params));
    }

    #[test]
    fn ab_window_covers_all_pairs_in_two_by_two() {
        let params = ConstructionParams::new(2, 2).unwrap();
        let grid = LatticeBox::new(1, 2, 2);
        for i in 0..4 {
            for j in 0..4 {
                let dist2 = squared_distance(&grid.point(i), &grid.point(j)).unwrap();
                assert!(dist2 <= 2);
                assert!(in_ab_window(dist2, &params), "pair {i},{j}");
            }
        }
    }

    #[test]
    fn c_window_examples() {
        let params = ConstructionParams::new(2, 2).unwrap();
        assert!(in_c_window(4, &params));
        assert!(!in_c_window(5, &params));
        // mu = 8 * 3 / 6 = 4 is divisible by 4; the centre is 1.
        let centred = ConstructionParams::new(3, 3).unwrap();
        assert_eq!(centred.mu6 % 24, 0);
        assert!(in_c_window((centred.mu6 / 24) as u64, &centred));
    }

    #[test]
    fn exact_volume_examples() {
        assert!((ball_volume_exact(2, 1.0).unwrap() - PI).abs() < 1e-12);
        assert!((ball_volume_exact(4, 1.0).unwrap() - PI * PI / 2.0).abs() < 1e-12);
        let r = 3.5 * 2f64.sqrt();
        assert!((ball_volume_exact(2, r).unwrap() - 24.5 * PI).abs() < 1e-9);
        assert!((ball_volume_exact(2, r).unwrap() - 76.969).abs() < 1e-3);
        assert!(ball_volume_exact(3, 1.0).is_err());
        assert!(ln_ball_volume_exact(5, 1.0).is_err());
    }

    #[test]
    fn log_and_linear_volumes_agree() {
        for d in (2..=40).step_by(2) {
            for radius in [0.5, 1.0, 3.0] {
                let lin = ball_volume_exact(d, radius).unwrap();
                let ln = ln_ball_volume_exact(d, radius).unwrap();
                assert!((lin.ln() - ln).abs() < 1e-9, "d={d} radius={radius}");
                let up = ball_volume_upper(d, radius);
                assert!((up.ln() - ln_ball_volume_upper(d, radius)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn linear_volume_overflows_where_log_does_not() {
        let d = 2000;
        let radius = 3.5 * (d as f64).sqrt();
        assert!(ball_volume_exact(d, radius).unwrap().is_infinite());
        assert!(ln_ball_volume_exact(d, radius).unwrap().is_finite());
    }

    #[test]
    fn upper_volume_examples() {
        assert!((ball_volume_upper(2, 1.0) - PI * E).abs() < 1e-12);
        assert!((ball_volume_upper(2, 1.0) - 8.5397).abs() < 1e-4);
        let four = (2.0 * PI * E).powi(2) / 16.0;
        assert!((ball_volume_upper(4, 1.0) - four).abs() < 1e-9);
        assert!((four - 18.23).abs() < 0.01);
    }

    #[test]
    fn upper_volume_at_three_and_a_half_root_d_is_below_fifteen_to_the_d() {
        for d in (2..=2000u64).step_by(2) {
            let ln_upper = ln_ball_volume_upper(d, 3.5 * (d as f64).sqrt());
            assert!(ln_upper < d as f64 * 15f64.ln(), "d={d}");
        }
    }

    #[test]
    fn lattice_count_examples() {
        assert_eq!(count_lattice_points_in_ball(1, 4, 1000).unwrap(), 5);
        assert_eq!(count_lattice_points_in_ball(2, 0, 1000).unwrap(), 1);
        let brute = (-4i64..=4)
            .flat_map(|x| (-4i64..=4).map(move |y| x * x + y * y))
            .filter(|&s| s <= 18)
            .count() as u64;
        assert_eq!(brute, 61);
        assert_eq!(count_lattice_points_in_ball(2, 18, 1000).unwrap(), 61);
    }

    #[test]
    fn lattice_count_matches_brute_force_in_three_dims() {
        for radius_sq in 0..30u64 {
            let m = radius_sq.isqrt() as i64;
            let mut brute = 0u64;
            for x in -m..=m {
                for y in -m..=m {
                    for z in -m..=m {
                        if (x * x + y * y + z * z) as u64 <= radius_sq {
                            brute += 1;
                        }
                    }
                }
            }
            assert_eq!(
                count_lattice_points_in_ball(3, radius_sq, 1 << 20).unwrap(),
                brute
            );
        }
    }

    #[test]
    fn lattice_count_respects_node_cap() {
        let err = count_lattice_points_in_ball(8, 72, 100).unwrap_err();
        assert!(matches!(err, Error::Resource { cap: 100, .. }));
    }

    #[test]
    fn hoeffding_examples() {
        assert_eq!(hoeffding_tail(0.0, 3.0, 10), 2.0);
        let (lip, n) = (1.5f64, 8u64);
        let t = (2.0 * lip * lip * n as f64).sqrt();
        assert!((hoeffding_tail(t, lip, n) - 2.0 / E).abs() < 1e-12);
        assert!((2.0 / E - 0.7358).abs() < 1e-4);
        // Lemma-1 instantiation: t = d, lip = r^2, n = d.
        let (r, d) = (3u64, 500u64);
        let expected = 2.0 * (-(d as f64) / (2.0 * (r as f64).powi(4))).exp();
        assert!((hoeffding_tail(d as f64, (r * r) as f64, d) - expected).abs() < 1e-12);
    }

    #[test]
    fn concentration_degenerate_cases() {
        assert_eq!(sample_distance_concentration(1, 7, 50, 3).unwrap(), 0.0);
        assert_eq!(sample_distance_concentration(2, 2, 500, 3).unwrap(), 0.0);
        assert!(sample_distance_concentration(2, 2, 0, 3).is_err());
    }

    #[test]
    fn concentration_is_seed_deterministic() {
        let a = sample_distance_concentration(3, 4, 2000, 11).unwrap();
        let b = sample_distance_concentration(3, 4, 2000, 11).unwrap();
        assert_eq!(a, b);
        assert!(a > 0.0, "small d should leave the window sometimes");
    }

    #[test]
    fn lattice_box_indexing_is_lexicographic() {
        let grid = LatticeBox::new(0, 4, 2);
        assert_eq!(grid.len(), Some(16));
        assert_eq!(grid.point(0).coords(), &[0, 0]);
        assert_eq!(grid.point(1).coords(), &[0, 1]);
        assert_eq!(grid.point(4).coords(), &[1, 0]);
        assert_eq!(grid.point(15).coords(), &[3, 3]);
        assert_eq!(LatticeBox::new(1, 3, 40).len(), Some(3u64.pow(40)));
        assert_eq!(LatticeBox::new(1, 3, 41).len(), None);
    }
}
