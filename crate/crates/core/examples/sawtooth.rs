//! Sawtooth maps `x -> Λ(kx)` commute with the tent map. This example
//! evaluates a few, checks commutation on samples and round trips the
//! classifier.

use tentlab::sample::unit_rationals;
use tentlab::sawtooth::{classify_solution, sawtooth_breakpoints, verify_commutation, Classification};
use tentlab::{PiecewiseLinearMap, Rational, SawtoothMap};

pub fn run_example() -> tentlab::Result<()> {
    let xi3 = SawtoothMap::new(3)?;
    for s in ["0", "1/6", "1/3", "1/2", "1"] {
        let x: Rational = s.parse().unwrap();
        println!("xi_3({s}) = {}", xi3.eval(&x)?);
    }

    let xs = unit_rationals(1, 200, 10_000);
    for k in [1, 2, 5, 17] {
        let rep = verify_commutation(&SawtoothMap::new(k)?, &xs)?;
        println!("k={k:<3} commutes on {} samples: {}", rep.checked, rep.ok);
    }

    // a map that does not commute gets witnesses
    let square = |x: &Rational| x * x;
    let rep = verify_commutation(&square, &xs)?;
    println!("x^2: {} of {} samples fail", rep.witnesses.len(), rep.checked);

    let p = sawtooth_breakpoints(6);
    assert_eq!(classify_solution(&p), Classification::Sawtooth(6));
    let flat = PiecewiseLinearMap::constant(Rational::two_thirds())?;
    println!("constant 2/3 classifies as {}", classify_solution(&flat));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
