//! One report checking every claim about tent-map commutants that the
//! library can test, with the claimed value, the computed value and a
//! verdict side by side.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::commutants::{
    audit_counts, brute_force_commuting, check_psi_tilde, pair_from_psi, psi_from_pair, CommutingTable, CountAudit,
    X0Filter,
};
use crate::conjugacy::{density_probe, graph_length, slope_measure, ConjugacyIterate, Mode};
use crate::continuation::{
    all_problems, audit_continuable, continuable_from_point, enumerate_continuable, sawtooth_matches, solve_k0,
};
use crate::error::Result;
use crate::limits;
use crate::rational::Rational;
use crate::sample::unit_rationals;
use crate::sawtooth::{verify_commutation, SawtoothMap};
use crate::tent::{a_points, preimage_set, PreimageKind, PreimageMethod};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Confirmed,
    RefutedAtThisN,
    NotDeskCheckable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimCheck {
    pub id: String,
    pub statement: String,
    pub n: Option<u32>,
    pub claimed: String,
    pub computed: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub confirmed: usize,
    pub refuted: usize,
    pub not_desk_checkable: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub max_n: u32,
    pub seed: u64,
    pub claims: Vec<ClaimCheck>,
    pub counts: Vec<CountAudit>,
    pub summary: Summary,
}

impl AuditReport {
    pub fn any_refuted(&self) -> bool {
        self.summary.refuted > 0
    }
}

fn check(id: &str, statement: &str, n: Option<u32>, claimed: String, computed: String, ok: bool) -> ClaimCheck {
    ClaimCheck {
        id: id.into(),
        statement: statement.into(),
        n,
        claimed,
        computed,
        verdict: if ok {
            Verdict::Confirmed
        } else {
            Verdict::RefutedAtThisN
        },
    }
}

fn open(id: &str, statement: &str, claimed: &str, computed: String) -> ClaimCheck {
    ClaimCheck {
        id: id.into(),
        statement: statement.into(),
        n: None,
        claimed: claimed.into(),
        computed,
        verdict: Verdict::NotDeskCheckable,
    }
}

/// Brute-force sections run for `n <= 3`; everything else up to `max_n`.
pub fn audit_report(max_n: u32, seed: u64, workers: usize) -> Result<AuditReport> {
    if max_n == 0 {
        return Err(crate::Error::Domain("max_n must be at least 1".into()));
    }
    limits::check(max_n, limits::CONTINUABLE_DEPTH)?;
    let brute_n = max_n.min(limits::bound(limits::BRUTE_FORCE_FULL_DEPTH));
    let mut claims = Vec::new();

    for n in 1..=max_n {
        for kind in [PreimageKind::A, PreimageKind::B, PreimageKind::F] {
            let it = preimage_set(n, kind, PreimageMethod::Iterated)?;
            let cf = preimage_set(n, kind, PreimageMethod::ClosedForm)?;
            let (id, statement) = match kind {
                PreimageKind::A => ("preimages-of-zero", "f^{-n}(0) = {k/2^(n-1) : 0 <= k <= 2^(n-1)}"),
                PreimageKind::B => (
                    "preimages-of-two-thirds",
                    "f^{-n}(2/3) = {(k + 1/3)/2^(n-1), (k + 2/3)/2^(n-1)}",
                ),
                PreimageKind::F => (
                    "preimages-of-fixed-points",
                    "F_n = {(k + κ)/2^(n-1) : κ ∈ {0, 1/3, 2/3}} ∪ {1}",
                ),
            };
            claims.push(check(
                id,
                statement,
                Some(n),
                format!("{} points", kind.expected_len(n)),
                format!("{} points, sets equal: {}", it.len(), it == cf),
                it == cf && it.len() == kind.expected_len(n),
            ));
        }
    }

    let samples = unit_rationals(seed, 200, 1_000_000);
    let max_k = 1u64 << max_n.min(6);
    let failing: Vec<u64> = (1..=max_k)
        .filter(|&k| !verify_commutation(&SawtoothMap::new(k).expect("k >= 1"), &samples).is_ok_and(|r| r.ok))
        .collect();
    claims.push(check(
        "sawtooth-commutes",
        "ξ_(k) ∘ f = f ∘ ξ_(k) for every k >= 1",
        None,
        "commutes".into(),
        format!(
            "k = 1..={max_k} on {} seeded rationals, failures: {failing:?}",
            samples.len()
        ),
        failing.is_empty(),
    ));

    for n in 1..=brute_n {
        let tables = brute_force_commuting(n, &X0Filter::Any, workers)?;
        let mut bad = 0usize;
        let mut roundtrip = 0usize;
        for t in &tables {
            match pair_from_psi(t) {
                Ok(p) if check_psi_tilde(&p).is_empty() => {
                    if psi_from_pair(&p).as_ref() == Ok(t) {
                        roundtrip += 1;
                    }
                }
                _ => bad += 1,
            }
        }
        claims.push(check(
            "encoding-properties",
            "every commuting table has a base bit and word map that preserve length, are prefix consistent and send leading zeros to the base bit",
            Some(n),
            format!("{} tables encodable", tables.len()),
            format!("{roundtrip} encoded and decoded back, {bad} without a valid encoding"),
            bad == 0 && roundtrip == tables.len(),
        ));
    }

    let counts: Vec<CountAudit> = (1..=brute_n).map(|n| audit_counts(n, workers)).collect::<Result<_>>()?;
    for c in &counts {
        let oracle = c.brute_force.clone().expect("within brute-force depth");
        let (enc, tab) = (c.encodings.clone(), c.tables_from_encodings.clone());
        claims.push(check(
            "encoding-bijection",
            "encodings and commuting tables are in one-to-one correspondence",
            Some(c.n),
            format!("{} encodings", enc.as_ref().map_or("?".into(), |e| e.to_string())),
            format!(
                "{oracle} tables; encodings give {} distinct tables, {} address conflicts",
                tab.as_ref().map_or("?".into(), |t| t.to_string()),
                c.address_conflicts.as_ref().map_or("?".into(), |t| t.to_string()),
            ),
            enc.as_ref() == Some(&oracle) && tab.as_ref() == Some(&oracle),
        ));
        claims.push(check(
            "commuting-count-formula",
            "N(n) = 2^(3n-1) (2^n - 1)^(-1) ∏_{k=1}^n (2^k - 1)",
            Some(c.n),
            c.formula.to_string(),
            oracle.to_string(),
            c.formula == oracle,
        ));
        claims.push(check(
            "commuting-count-recursion",
            "N(1) = 4, N(m+1) = 8 (2^m - 1) N(m)",
            Some(c.n),
            c.recursion_8.to_string(),
            oracle.to_string(),
            c.recursion_8 == oracle,
        ));
    }

    for n in 1..=max_n {
        let mut mismatches = 0usize;
        let problems = all_problems(n);
        for p in &problems {
            let sol = solve_k0(p);
            for k in 1..=1u64 << (n + 2) {
                if sawtooth_matches(p, k)? != sol.matches(k as u128) {
                    mismatches += 1;
                }
            }
        }
        claims.push(check(
            "sawtooth-residue-law",
            "ξ_(k)(α) = β iff k ≡ ±k0 (mod 2^n), k0 (2s+1) ≡ p (mod 2^n)",
            Some(n),
            "equivalence holds".into(),
            format!(
                "{} (α, β) pairs, k = 1..={}, mismatches {mismatches}",
                problems.len(),
                1u64 << (n + 2)
            ),
            mismatches == 0,
        ));

        let mut failures = 0usize;
        // the table depends only on k*, so it is built and checked once per k*
        let mut built: BTreeMap<u128, (CommutingTable, bool)> = BTreeMap::new();
        for p in &problems {
            let k = solve_k0(p).smallest_k();
            if let std::collections::btree_map::Entry::Vacant(e) = built.entry(k) {
                let t = continuable_from_point(p)?;
                let ok = t.commutes();
                e.insert((t, ok));
            }
            let (t, ok) = &built[&k];
            if !ok || t.get(&p.alpha) != Some(&p.beta) {
                failures += 1;
            }
        }
        let entries = enumerate_continuable(n)?;
        let mut by_point: BTreeMap<(Rational, Rational), usize> = BTreeMap::new();
        let alphas: BTreeSet<&Rational> = problems.iter().map(|p| &p.alpha).collect();
        for e in entries.iter().filter(|e| e.table.x0().is_zero()) {
            for &alpha in &alphas {
                let y = e.table.get(alpha).expect("alpha in A_n").clone();
                *by_point.entry((alpha.clone(), y)).or_default() += 1;
            }
        }
        let clashes = by_point.values().filter(|&&c| c > 1).count() + problems.len() - by_point.len();
        claims.push(check(
            "continuable-existence-uniqueness",
            "for every newest-level α and every β in A_n there is exactly one continuable A_n-valued table with ψ(α) = β",
            Some(n),
            "one table per (α, β)".into(),
            format!("{failures} failed constructions, {clashes} missing or repeated (α, ψ(α)) pairs"),
            failures == 0 && clashes == 0,
        ));

        let a = audit_continuable(n)?;
        claims.push(check(
            "continuable-count",
            "there are 2^(n-1) continuable maps on A_n",
            Some(n),
            a.claimed.to_string(),
            format!(
                "{} sawtooth restrictions, {} with constants, {} A_n-valued",
                a.sawtooth_restrictions, a.with_constants, a.a_valued
            ),
            a.matches_claim,
        ));
    }

    let v = Rational::frac(1, 4);
    let stab_n = max_n.min(8);
    let top = ConjugacyIterate::iterate(v.clone(), stab_n + 4)?;
    let mut unstable = 0usize;
    for n in 0..=stab_n {
        let h = ConjugacyIterate::iterate(v.clone(), n)?;
        for x in a_points(n + 1) {
            if h.eval(&x)? != top.eval(&x)? {
                unstable += 1;
            }
        }
    }
    claims.push(check(
        "conjugacy-stabilization",
        "h_n(x) = h(x) on the dyadic grid of h_n",
        Some(stab_n),
        "iterates agree on their grid".into(),
        format!(
            "v = 1/4, n <= {stab_n} against h_{}: {unstable} disagreements",
            stab_n + 4
        ),
        unstable == 0,
    ));

    let lengths: Vec<String> = [10u32, 100, 1000]
        .iter()
        .map(|&n| graph_length(n, &v, Mode::Aggregate).map(|g| format!("n={n}: {:.12}", g.length)))
        .collect::<Result<_>>()?;
    claims.push(open(
        "graph-length-two",
        "the graph of the conjugacy h has length 2",
        "2",
        format!("v = 1/4, increasing lower bounds {}", lengths.join(", ")),
    ));
    let measures: Vec<String> = [100u32, 400]
        .iter()
        .map(|&n| slope_measure(n, &v, &Rational::one(), Mode::Aggregate).map(|m| format!("n={n}: {:.3e}", m.approx)))
        .collect::<Result<_>>()?;
    claims.push(open(
        "derivative-zero-ae",
        "the derivative of h vanishes almost everywhere",
        "0 a.e.",
        format!("v = 1/4, measure of pieces with slope >= 1: {}", measures.join(", ")),
    ));
    let gaps: Vec<String> = [4u32, 8, 12]
        .iter()
        .map(|&d| density_probe(&v, d).map(|r| format!("depth {d}: {:.6}", r.max_gap_approx)))
        .collect::<Result<_>>()?;
    claims.push(open(
        "preimages-of-one-dense",
        "the backward trajectory of 1 under the skew tent is dense in [0, 1]",
        "dense",
        format!("v = 1/4, largest gap {}", gaps.join(", ")),
    ));

    let tally = |v: Verdict| claims.iter().filter(|c| c.verdict == v).count();
    let summary = Summary {
        confirmed: tally(Verdict::Confirmed),
        refuted: tally(Verdict::RefutedAtThisN),
        not_desk_checkable: tally(Verdict::NotDeskCheckable),
    };
    Ok(AuditReport {
        max_n,
        seed,
        claims,
        counts,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_report() {
        let r = audit_report(2, 0, 2).unwrap();
        let find = |id: &str, n: u32| r.claims.iter().find(|c| c.id == id && c.n == Some(n)).unwrap();
        assert_eq!(find("commuting-count-formula", 1).verdict, Verdict::Confirmed);
        let two = find("commuting-count-formula", 2);
        assert_eq!(two.verdict, Verdict::RefutedAtThisN);
        assert_eq!((two.claimed.as_str(), two.computed.as_str()), ("32", "7"));
        assert!(r
            .claims
            .iter()
            .any(|c| c.id == "graph-length-two" && c.verdict == Verdict::NotDeskCheckable));
        assert_eq!(find("sawtooth-residue-law", 2).verdict, Verdict::Confirmed);
        assert_eq!(find("continuable-existence-uniqueness", 2).verdict, Verdict::Confirmed);
        assert!(r.any_refuted());
        assert_eq!(r.counts.len(), 2);
    }
}
