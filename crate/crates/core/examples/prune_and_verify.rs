//! Full pipeline followed by the hard-check suite and the bound verdicts.

use booksize::construct::{run_pipeline, PipelineConfig, SparsifyMode, SparsifySpec};
use booksize::verify::{verify_pipeline, VerifyOptions};
use booksize::ConstructionParams;

fn main() -> booksize::Result<()> {
    let mut cfg = PipelineConfig::new(ConstructionParams::new(2, 4)?);
    cfg.sparsify = Some(SparsifySpec {
        mode: SparsifyMode::Random,
        target_size: 64,
        seed: 3,
    });
    cfg.prune = true;
    let res = run_pipeline(&cfg)?;
    println!("pruned {:?}", res.summary.pruned_edges);

    let outcome = verify_pipeline(&res, &VerifyOptions::default())?;
    for c in &outcome.checks {
        println!("{:?} {}: {}", c.status, c.name, c.detail);
    }
    for v in &outcome.verdicts {
        println!(
            "verdict {} {}: {} {} {}",
            if v.passed { "pass" } else { "fail" },
            v.name,
            v.actual,
            v.relation,
            v.bound
        );
    }
    assert!(outcome.passed());
    Ok(())
}
