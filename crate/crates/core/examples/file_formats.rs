//! Text and binary graph files, and the JSON report document.

use booksize::analyze::{book_report, ReportDocument};
use booksize::graph::format::{decode, encode, to_text, GraphFormat};
use booksize::{EdgeRef, TripartiteGraph};

fn main() -> booksize::Result<()> {
    let mut g = TripartiteGraph::empty(2, 2, 1);
    for e in [
        EdgeRef::ab(0, 0),
        EdgeRef::ab(1, 1),
        EdgeRef::bc(0, 0),
        EdgeRef::ac(0, 0),
    ] {
        g.add_edge(e)?;
    }
    print!("{}", to_text(&g));
    let bytes = encode(&g, GraphFormat::Binary);
    assert_eq!(decode(&bytes)?, g);
    println!("binary form: {} bytes", bytes.len());
    print!("{}", ReportDocument::new(book_report(&g)).to_json());
    Ok(())
}
