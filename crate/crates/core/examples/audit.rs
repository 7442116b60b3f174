//! Recomputes every checkable claim about the tent map's commutants and
//! prints a verdict per claim.

use tentlab::audit::audit_report;

pub fn run_example() -> tentlab::Result<()> {
    let report = audit_report(3, 0, 2)?;
    for c in &report.claims {
        let n = c.n.map_or(String::new(), |n| format!(" n={n}"));
        println!(
            "{:<20} {}{n}: claimed {}, computed {}",
            format!("{:?}", c.verdict),
            c.id,
            c.claimed,
            c.computed
        );
    }
    let s = &report.summary;
    println!(
        "{} confirmed, {} refuted, {} not desk-checkable",
        s.confirmed, s.refuted, s.not_desk_checkable
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
