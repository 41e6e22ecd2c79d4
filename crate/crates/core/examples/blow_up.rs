//! Blowing up A and B keeps A-B books and multiplies the others.

use booksize::analyze::book_report;
use booksize::construct::{blow_up, build_preconstruction, BlowUpSpec};
use booksize::{Caps, ConstructionParams, EdgeRef};

fn main() -> booksize::Result<()> {
    let params = ConstructionParams::new(2, 3)?;
    let g = build_preconstruction(&params, false, &Caps::default())?;
    let m = 3;
    let big = blow_up(&g, &BlowUpSpec { multiplicity: m })?;
    let (before, after) = (book_report(&g), book_report(&big));
    println!("sizes {:?} -> {:?}", g.sizes(), big.sizes());
    println!(
        "edges {:?} -> {:?}",
        before.per_pair_edge_counts, after.per_pair_edge_counts
    );
    println!("booksize {} -> {}", before.booksize, after.booksize);
    println!(
        "density {:.4} -> {:.4}",
        before.density_ratio, after.density_ratio
    );

    let e = g.edges(booksize::Pair::AC).next().expect("an A-C edge");
    let t0 = booksize::analyze::triangles_on_edge(&g, e)?;
    let t1 = booksize::analyze::triangles_on_edge(&big, EdgeRef::ac(e.i * m + 1, e.j))?;
    println!("{e}: {t0} triangles; its copy: {t1}");
    Ok(())
}
