//! The two exact w-vector identities and the sign-witness count for one edge.

use booksize::analyze::{
    epsilon_witness_count, verify_w_identity_ab, verify_w_identity_ac, EpsilonMode,
};
use booksize::construct::rounded_midpoint_witness;
use booksize::lattice::{in_ab_window, squared_distance};
use booksize::{ConstructionParams, LatticePoint};

fn main() -> booksize::Result<()> {
    let params = ConstructionParams::new(3, 8)?;
    let a = LatticePoint::new(vec![1, 2, 3, 1, 2, 3, 1, 2]);
    let b = LatticePoint::new(vec![3, 1, 1, 2, 3, 1, 2, 3]);
    let d2 = squared_distance(&a, &b)?;
    println!(
        "|a-b|^2 = {d2}, in A-B window: {}",
        in_ab_window(d2, &params)
    );

    let c = rounded_midpoint_witness(&a, &b, &params)?;
    let ab = verify_w_identity_ab(&a, &b, &c)?;
    let ac = verify_w_identity_ac(&a, &c, &b)?;
    println!("witness c = {c}");
    println!("A-B frame holds: {}, |w|^2 = {}", ab.holds, ab.w_norm_sq);
    println!("A-C frame holds: {}, |w|^2 = {}", ac.holds, ac.w_norm_sq);

    let eps = epsilon_witness_count(&a, &b, &params, EpsilonMode::Exact)?;
    println!(
        "{} of {} sign vectors accepted ({:.3}); prediction {:.3}",
        eps.accepted, eps.examined, eps.fraction, eps.predicted_fraction
    );
    Ok(())
}
