//! Finite tables on `A_n` that commute with the tent map: exhaustive
//! search, the word encoding, and the count audit.

use tentlab::commutants::{all_psi_tilde, audit_counts, brute_force_commuting, psi_from_pair, X0Filter};

pub fn run_example() -> tentlab::Result<()> {
    for n in 1..=3 {
        let tables = brute_force_commuting(n, &X0Filter::Any, 2)?;
        println!("n={n}: {} commuting tables", tables.len());
    }

    let tables = brute_force_commuting(2, &X0Filter::Any, 1)?;
    for t in &tables {
        let row: Vec<String> = t.values().iter().map(|(x, y)| format!("{x}->{y}")).collect();
        println!("  {}", row.join("  "));
    }

    let encodings = all_psi_tilde(2)?;
    let valid = encodings.iter().filter(|p| psi_from_pair(p).is_ok()).count();
    println!("n=2: {valid} of {} word encodings give a table", encodings.len());

    let audit = audit_counts(3, 2)?;
    println!(
        "n=3: formula {} recursion {} exhaustive {} agree={}",
        audit.formula,
        audit.recursion_8,
        audit.brute_force.map_or("-".into(), |c| c.to_string()),
        audit.agree
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
