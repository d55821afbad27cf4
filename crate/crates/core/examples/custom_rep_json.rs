//! Builds a torus representation, writes it as JSON, reads it back and
//! evaluates the moment map. A corrupted generator is caught by `verify`.

use momentlab::linalg::C64;
use momentlab::moment::moment;
use momentlab::rep::{torus, RepJson};
use momentlab::UnitaryRep;

fn main() -> momentlab::Result<()> {
    let rep = torus(2, &[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, -2.0]])?;
    let text = serde_json::to_string_pretty(&rep.to_json())?;
    println!("{text}");

    let back = UnitaryRep::from_json_unchecked(serde_json::from_str(&text)?)?;
    let x = back.space().state(vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.5, 0.5)])?;
    println!("mu(x) = {:?}", moment(&back, &x)?.coords().as_slice());

    let mut raw: RepJson = serde_json::from_str(&text)?;
    raw.generators[1].re[0][0] = 1.0;
    let broken = UnitaryRep::from_json_unchecked(raw)?;
    let report = broken.verify();
    println!("corrupted rep passes: {}, offending generators {:?}", report.pass(), report.offending_generators());
    Ok(())
}
