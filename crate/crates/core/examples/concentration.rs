//! Distance concentration and the ball volume chain behind the booksize bound.

use booksize::lattice::{
    ball_volume_exact, ball_volume_upper, count_lattice_points_in_ball, hoeffding_tail,
    sample_distance_concentration,
};

fn main() -> booksize::Result<()> {
    let (r, d, trials) = (3, 500, 100_000);
    let observed = sample_distance_concentration(r, d, trials, 42)?;
    // |u-v|^2 changes by at most (r-1)^2 when one coordinate pair moves.
    let lip = ((r - 1) * (r - 1)) as f64;
    println!(
        "r={r} d={d}: outside mu +- d in {observed:.5} of {trials} trials; Hoeffding tail {:.4}",
        hoeffding_tail(d as f64, lip, 2 * d)
    );

    println!(
        "{:>3} {:>10} {:>12} {:>12} {:>12}",
        "d", "points", "exact", "upper", "15^d"
    );
    for d in [2u64, 4, 6] {
        let radius = 3.5 * (d as f64).sqrt();
        let count = count_lattice_points_in_ball(d as usize, 9 * d, 1_000_000_000)?;
        println!(
            "{d:>3} {count:>10} {:>12.2} {:>12.2} {:>12.0}",
            ball_volume_exact(d, radius)?,
            ball_volume_upper(d, radius),
            15f64.powi(d as i32)
        );
    }
    Ok(())
}
