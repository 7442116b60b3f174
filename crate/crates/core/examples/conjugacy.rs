//! Approximating the conjugacy between the tent map and a skew tent, then
//! looking at how singular it is: graph length creeping up to 2, steep
//! pieces occupying almost no room.

use tentlab::conjugacy::{density_probe, graph_length, slope_measure, Mode, SlopeProfile};
use tentlab::{ConjugacyIterate, Rational};

pub fn run_example() -> tentlab::Result<()> {
    let v: Rational = "1/4".parse().unwrap();

    let h3 = ConjugacyIterate::iterate(v.clone(), 3)?;
    for (x, y) in h3.breakpoints() {
        println!("h_3({x}) = {y}");
    }

    for n in [1, 5, 20, 100, 400] {
        let l = graph_length(n, &v, Mode::Aggregate)?;
        let m = slope_measure(n, &v, &Rational::one(), Mode::Aggregate)?;
        println!(
            "n={n:<4} length {:.12}  |slope|>=1 on measure {:.3e}",
            l.length, m.approx
        );
    }

    let prof = SlopeProfile::new(4, &v)?;
    println!(
        "n=4: {} pieces in {} slope classes",
        prof.piece_count(),
        prof.classes.len()
    );

    let d = density_probe(&v, 12)?;
    println!(
        "preimages of 1 to depth 12: {} points, widest gap {:.4}",
        d.points, d.max_gap_approx
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
