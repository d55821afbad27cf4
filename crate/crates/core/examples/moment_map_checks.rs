//! Runs every sampled structural check on one representation and prints the
//! report. Pass a builtin name to choose the representation.

use momentlab::builtin::parse_rep;
use momentlab::suite::{run_checks, SampleCounts, SuiteConfig};

fn main() -> momentlab::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "sum(su2:spin=1/2,su2:spin=1)".into());
    let rep = parse_rep(&name)?;
    let cfg = SuiteConfig {
        samples: SampleCounts::uniform(25),
        ..SuiteConfig::default()
    };
    println!("{name} on C^{}", rep.dim());
    for r in run_checks(&rep, &cfg)? {
        println!(
            "{:<28} defect {:.3e} tol {:.0e} {}",
            r.check,
            r.defect,
            r.tolerance,
            if r.pass { "pass" } else { "FAIL" }
        );
    }
    Ok(())
}
