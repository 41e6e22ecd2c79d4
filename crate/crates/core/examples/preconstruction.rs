//! Build the lattice graph for small `r`, `d` and look at its books.
//!
//! cargo run --example preconstruction -- 2 4

use booksize::analyze::book_report;
use booksize::construct::build_preconstruction;
use booksize::{Caps, ConstructionParams};

fn main() -> booksize::Result<()> {
    let mut args = std::env::args()
        .skip(1)
        .map(|s| s.parse::<u64>().expect("integer argument"));
    let r = args.next().unwrap_or(2);
    let d = args.next().unwrap_or(4);
    let params = ConstructionParams::new(r, d)?;
    let g = build_preconstruction(&params, false, &Caps::default())?;
    let report = book_report(&g);

    println!("r={r} d={d} mu={:.3}", params.mu());
    println!(
        "A-B window on 6|a-b|^2: [{}, {}]",
        params.ab_window.lo, params.ab_window.hi
    );
    println!(
        "C window on 24|a-c|^2:  [{}, {}]",
        params.c_window.lo, params.c_window.hi
    );
    println!("part sizes {:?}, edges {}", g.sizes(), report.total_edges);
    if let Some(edge) = report.booksize_edge {
        println!(
            "booksize {} at {edge}, {} triangles",
            report.booksize, report.triangles
        );
    }
    println!("uncovered edges {}", report.uncovered);
    Ok(())
}
