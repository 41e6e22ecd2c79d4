//! Random versus greedy choice of the third part at the same size.
//!
//! cargo run --example sparsify -- 2 6

use booksize::analyze::book_report;
use booksize::construct::{run_pipeline, PipelineConfig, SparsifyMode, SparsifySpec};
use booksize::ConstructionParams;

fn main() -> booksize::Result<()> {
    let mut args = std::env::args()
        .skip(1)
        .map(|s| s.parse::<u64>().expect("integer argument"));
    let r = args.next().unwrap_or(2);
    let d = args.next().unwrap_or(6);
    let params = ConstructionParams::new(r, d)?;
    let full_c = (r + 2).pow(d as u32) as usize;
    let target = booksize::construct::default_target_size(d, full_c);
    println!("|C| = {full_c}, keeping {target}");

    for mode in [SparsifyMode::Random, SparsifyMode::Greedy] {
        let mut cfg = PipelineConfig::new(params);
        cfg.sparsify = Some(SparsifySpec {
            mode,
            target_size: target,
            seed: 1,
        });
        cfg.prune = true;
        let res = run_pipeline(&cfg)?;
        let report = book_report(&res.graph);
        println!(
            "{mode:?}: A-B edges kept {} of {}, booksize {}, density {:.4} of N^2/4",
            report.per_pair_edge_counts.ab,
            res.summary.preconstruction_ab_edges,
            report.booksize,
            report.density_ratio
        );
        if let Some(gains) = &res.summary.greedy_gains {
            let head: Vec<_> = gains.iter().take(8).collect();
            println!("  first marginal gains {head:?}");
        }
    }
    Ok(())
}
