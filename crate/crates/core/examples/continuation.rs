//! Which sawtooth sends a given point of `A_n` to a given point? The answer
//! is a residue class of `k` mod `2^n`, and the smallest representative
//! gives the continuable table.

use tentlab::continuation::{
    audit_continuable, continuable_from_point, enumerate_continuable, is_tent_continuable, solve_k0,
    ContinuationProblem,
};
use tentlab::Rational;

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

pub fn run_example() -> tentlab::Result<()> {
    let p = ContinuationProblem::new(4, q("3/8"), q("1/4"))?;
    let sol = solve_k0(&p);
    println!("alpha=3/8 beta=1/4 n=4: k = ±{} mod {}", sol.k0, sol.modulus);
    let hits: Vec<u64> = (1..=40).filter(|&k| sol.matches(k as u128)).collect();
    println!("  k in 1..40: {hits:?}");

    let t = continuable_from_point(&p)?;
    println!("  table from k*={}: {:?}", sol.smallest_k(), is_tent_continuable(&t)?);

    for e in enumerate_continuable(2)? {
        let row: Vec<String> = e.table.values().values().map(|y| y.to_string()).collect();
        println!("  [{}] from {:?}", row.join(" "), e.sources);
    }

    for n in 2..=6 {
        let a = audit_continuable(n)?;
        println!(
            "n={n}: {} sawtooth restrictions, {} with constants, claimed {}",
            a.sawtooth_restrictions, a.with_constants, a.claimed
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
