//! Hunting for an interval where a commuting map is linear, by following
//! the steeper half whenever the midpoint defect is nonzero.

use tentlab::probe::{linearity_probe, ProbeOutcome};
use tentlab::SawtoothMap;

pub fn run_example() -> tentlab::Result<()> {
    for k in [3, 5, 11] {
        let out = linearity_probe(&SawtoothMap::new(k)?, (1, 0), 20)?;
        let slopes: Vec<String> = out.trace().iter().map(|s| s.slope.to_string()).collect();
        match out.interval() {
            Some((a, b)) => println!("xi_{k}: linear on ({a}, {b}), slopes {}", slopes.join(" -> ")),
            None => println!("xi_{k}: no interval yet"),
        }
    }

    // too small a budget ends with a trace
    let out = linearity_probe(&SawtoothMap::new(13)?, (1, 0), 2)?;
    if let ProbeOutcome::RefinementTrace { budget, trace } = out {
        println!("xi_13 at budget {budget}: {} steps, still refining", trace.len());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
