//! The tent map acting on binary expansions.
//!
//! If the leading digit is 0 the tent map is a shift; if it is 1 the
//! shifted tail gets complemented.

use tentlab::binary::{rational_to_binary, tent_digits, UnitInterval};
use tentlab::sample::unit_rationals;
use tentlab::tent::tent;
use tentlab::Rational;

pub fn run_example() -> tentlab::Result<()> {
    for s in ["1/3", "2/3", "1/5", "3/8", "7/12"] {
        let x: Rational = s.parse().unwrap();
        let b = rational_to_binary(&x)?;
        let t = tent_digits(&UnitInterval::from_rational(&x)?);
        println!("{s:>5} = {b:<12} tent -> {t} = {}", t.to_rational());
    }

    let xs = unit_rationals(7, 500, 1_000_000);
    for x in &xs {
        let via_digits = tent_digits(&UnitInterval::from_rational(x)?).to_rational();
        assert_eq!(via_digits, tent(x)?);
    }
    println!("digit rule agrees with arithmetic on {} samples", xs.len());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
