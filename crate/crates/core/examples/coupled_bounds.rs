//! The d = r^5 regime, evaluated in log space only.

use booksize::analyze::coupled_verdicts;
use booksize::construct::coupled_params;

fn main() -> booksize::Result<()> {
    for r in [2, 4, 6] {
        let preset = coupled_params(r)?;
        println!(
            "r={r}: d={}, ln n={:.1}, d / (5 ln n / ln ln n) = {:.3}",
            preset.params.d, preset.ln_n, preset.d_ratio
        );
        for v in coupled_verdicts(r)? {
            println!(
                "  [{}] {}: {:.4} {} {:.4}",
                if v.passed { "pass" } else { "fail" },
                v.name,
                v.actual,
                v.relation,
                v.bound
            );
        }
    }
    Ok(())
}
