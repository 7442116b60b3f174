//! Backward orbits of the tent map's fixed points.
//!
//! ```bash
//! cargo run --example preimages
//! ```

use tentlab::tent::{preimage_set, tent, PreimageKind, PreimageMethod};
use tentlab::Rational;

pub fn run_example() -> tentlab::Result<()> {
    for n in 1..=4 {
        let a = preimage_set(n, PreimageKind::A, PreimageMethod::Iterated)?;
        let b = preimage_set(n, PreimageKind::B, PreimageMethod::Iterated)?;
        let show = |pts: &[Rational]| pts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ");
        println!("n={n}  A: {}", show(&a.points));
        println!("     B: {}", show(&b.points));
    }

    // both construction routes agree
    let slow = preimage_set(10, PreimageKind::F, PreimageMethod::Iterated)?;
    let fast = preimage_set(10, PreimageKind::F, PreimageMethod::ClosedForm)?;
    assert_eq!(slow, fast);
    println!("F_10 has {} points", fast.len());

    // every point of B_n lands on 2/3 after n steps
    let b = preimage_set(6, PreimageKind::B, PreimageMethod::ClosedForm)?;
    for x in &b.points {
        let mut y = x.clone();
        for _ in 0..6 {
            y = tent(&y)?;
        }
        assert_eq!(y, Rational::two_thirds());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
