//! Tent-continuable tables: finite commuting maps on `A_n` that extend to a
//! continuous map commuting with the tent map on all of `[0, 1]`.
//!
//! For `α = (2s+1)/2^(n-1)` and `β = p/2^(n-1)`, `ξ_(k)(α) = β` exactly when
//! `k ≡ ±k0 (mod 2^n)`, where `k0 (2s+1) ≡ p (mod 2^n)`. The restriction of
//! `ξ_(k)` to `A_n` only depends on the class of `±k mod 2^n`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::commutants::CommutingTable;
use crate::error::{Error, Result};
use crate::limits;
use crate::rational::Rational;
use crate::sawtooth::SawtoothMap;
use crate::tent::a_points;

/// Largest depth the solver supports (`2^n` must fit in a `u128`).
pub const MAX_SOLVER_DEPTH: u32 = 126;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuationProblem {
    pub n: u32,
    pub alpha: Rational,
    pub beta: Rational,
    /// `alpha = (2s+1) / 2^(n-1)`
    pub s: u128,
    /// `beta = p / 2^(n-1)`
    pub p: u128,
}

impl ContinuationProblem {
    /// Requires `alpha ∈ A_n \ A_{n-1}` and `beta ∈ A_n`.
    pub fn new(n: u32, alpha: Rational, beta: Rational) -> Result<Self> {
        if n == 0 || n > MAX_SOLVER_DEPTH {
            return Err(Error::Malformed(format!("depth {n} outside 1..={MAX_SOLVER_DEPTH}")));
        }
        let scale = Rational::from(BigInt::from(1u8) << (n - 1));
        let half = 1u128 << (n - 1);
        let grid = |q: &Rational, what: &str| -> Result<u128> {
            if !q.in_unit_interval() {
                return Err(Error::Malformed(format!("{what} = {q} outside [0, 1]")));
            }
            let scaled = q * &scale;
            if !scaled.is_integer() {
                return Err(Error::Malformed(format!("{what} = {q} is not in A_{n}")));
            }
            Ok(u128::try_from(scaled.numer().clone()).expect("at most 2^(n-1)"))
        };
        let a = grid(&alpha, "alpha")?;
        let p = grid(&beta, "beta")?;
        if a % 2 == 0 {
            return Err(Error::Malformed(format!(
                "alpha = {alpha} lies in A_{}; its numerator over 2^{} must be odd",
                n - 1,
                n - 1
            )));
        }
        debug_assert!(a <= half && p <= half);
        Ok(ContinuationProblem {
            n,
            alpha,
            beta,
            s: (a - 1) / 2,
            p,
        })
    }

    pub fn modulus(&self) -> u128 {
        1u128 << self.n
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuationSolution {
    pub n: u32,
    /// in `[0, 2^n)`
    pub k0: u128,
    pub modulus: u128,
    /// `{k0, -k0} mod 2^n`, one entry when the two coincide
    pub classes: Vec<u128>,
}

impl ContinuationSolution {
    pub fn matches(&self, k: u128) -> bool {
        self.classes.contains(&(k % self.modulus))
    }

    /// Smallest positive `k` in either class; `2^n` when `k0 = 0`.
    pub fn smallest_k(&self) -> u128 {
        if self.k0 == 0 {
            self.modulus
        } else {
            self.k0.min(self.modulus - self.k0)
        }
    }
}

/// Inverse of an odd `a` modulo `2^n` by Newton iteration on the 2-adic
/// integers: `x ← x (2 - a x)` doubles the number of correct bits.
pub fn inverse_mod_pow2(a: u128, n: u32) -> u128 {
    assert!(a % 2 == 1, "only odd numbers are invertible mod 2^n");
    assert!(n <= 127);
    let mask = if n == 127 { u128::MAX >> 1 } else { (1u128 << n) - 1 };
    // a·a ≡ 1 (mod 8) for odd a, so x = a is correct to 3 bits
    let mut x = a;
    let mut bits = 3;
    while bits < 128 {
        x = x.wrapping_mul(2u128.wrapping_sub(a.wrapping_mul(x)));
        bits *= 2;
    }
    x & mask
}

/// `k0 (2s+1) ≡ p (mod 2^n)`.
pub fn solve_k0(prob: &ContinuationProblem) -> ContinuationSolution {
    let m = prob.modulus();
    let unit = 2 * prob.s + 1;
    let inv = inverse_mod_pow2(unit % m, prob.n);
    let k0 = (inv.wrapping_mul(prob.p)) & (m - 1);
    debug_assert_eq!(k0.wrapping_mul(unit) & (m - 1), prob.p % m);
    let neg = (m - k0) % m;
    let mut classes = vec![k0];
    if neg != k0 {
        classes.push(neg);
    }
    classes.sort_unstable();
    ContinuationSolution {
        n: prob.n,
        k0,
        modulus: m,
        classes,
    }
}

/// Direct evaluation `ξ_(k)(α) = β`.
pub fn sawtooth_matches(prob: &ContinuationProblem, k: u64) -> Result<bool> {
    SawtoothMap::new(k)?;
    // kα = k(2s+1)/h with h = 2^(n-1); Λ only sees it mod 2, and 2h divides 2^128
    let h = 1u128 << (prob.n - 1);
    let y = (k as u128).wrapping_mul(2 * prob.s + 1) & (2 * h - 1);
    let value = if y <= h { y } else { 2 * h - y };
    Ok(value == prob.p)
}

/// Restriction of `ξ_(k)` to `A_n`.
pub fn sawtooth_restriction(n: u32, k: u64) -> Result<CommutingTable> {
    let xi = SawtoothMap::new(k)?;
    let values = a_points(n)
        .into_iter()
        .map(|x| {
            let y = xi.eval(&x).expect("A_n lies in [0, 1]");
            (x, y)
        })
        .collect();
    // ξ_k commutes with f and fixes 0, so this is always a valid table
    CommutingTable::new_unchecked(n, values)
}

/// The continuable table with `ψ(α) = β`: the restriction of `ξ_(k*)` for
/// the smallest positive `k*` in the solution classes.
pub fn continuable_from_point(prob: &ContinuationProblem) -> Result<CommutingTable> {
    limits::check(prob.n, limits::PREIMAGE_DEPTH)?;
    let k = solve_k0(prob).smallest_k();
    let k = u64::try_from(k).map_err(|_| Error::Malformed("representative exceeds u64".into()))?;
    sawtooth_restriction(prob.n, k)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value")]
pub enum ContinuationWitness {
    Constant(Rational),
    Sawtooth(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "witness")]
pub enum Continuability {
    Yes(ContinuationWitness),
    No,
}

/// A table is continuable iff it is constant 0 or 2/3 or the restriction of
/// some `ξ_(k)` with `1 <= k <= 2^n`; larger `k` repeat those restrictions.
pub fn is_tent_continuable(t: &CommutingTable) -> Result<Continuability> {
    limits::check(t.n(), limits::CONTINUABLE_DEPTH + 10)?;
    let values = t.values();
    for c in [Rational::zero(), Rational::two_thirds()] {
        if values.values().all(|y| *y == c) {
            return Ok(Continuability::Yes(ContinuationWitness::Constant(c)));
        }
    }
    for k in 1..=1u64 << t.n() {
        let xi = SawtoothMap::new(k)?;
        if values.iter().all(|(x, y)| xi.eval(x).ok().as_ref() == Some(y)) {
            return Ok(Continuability::Yes(ContinuationWitness::Sawtooth(k)));
        }
    }
    Ok(Continuability::No)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuableEntry {
    pub table: CommutingTable,
    /// every source giving this table: sawtooth indices `k <= 2^n` and
    /// constants
    pub sources: Vec<ContinuationWitness>,
}

/// Distinct restrictions to `A_n` of all continuous commuting maps, sorted.
pub fn enumerate_continuable(n: u32) -> Result<Vec<ContinuableEntry>> {
    if n == 0 {
        return Err(Error::Domain("depth must be at least 1".into()));
    }
    limits::check(n, limits::CONTINUABLE_DEPTH)?;
    let mut found: BTreeMap<CommutingTable, Vec<ContinuationWitness>> = BTreeMap::new();
    let mut add = |table: CommutingTable, src: ContinuationWitness| found.entry(table).or_default().push(src);
    for k in 1..=1u64 << n {
        add(sawtooth_restriction(n, k)?, ContinuationWitness::Sawtooth(k));
    }
    for c in [Rational::zero(), Rational::two_thirds()] {
        add(
            CommutingTable::constant(n, c.clone())?,
            ContinuationWitness::Constant(c),
        );
    }
    Ok(found
        .into_iter()
        .map(|(table, sources)| ContinuableEntry { table, sources })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuableAudit {
    pub n: u32,
    /// distinct restrictions of `ξ_(k)`, `k >= 1`
    pub sawtooth_restrictions: u64,
    /// the above together with the two constant maps
    pub with_constants: u64,
    /// tables with values in `A_n` (i.e. excluding constant 2/3)
    pub a_valued: u64,
    /// the claimed count `2^(n-1)`
    pub claimed: u64,
    pub matches_claim: bool,
}

pub fn audit_continuable(n: u32) -> Result<ContinuableAudit> {
    let entries = enumerate_continuable(n)?;
    let sawtooth = entries
        .iter()
        .filter(|e| e.sources.iter().any(|s| matches!(s, ContinuationWitness::Sawtooth(_))))
        .count() as u64;
    let a_valued = entries.iter().filter(|e| e.table.x0().is_zero()).count() as u64;
    let claimed = 1u64 << (n - 1);
    Ok(ContinuableAudit {
        n,
        sawtooth_restrictions: sawtooth,
        with_constants: entries.len() as u64,
        a_valued,
        claimed,
        matches_claim: entries.len() as u64 == claimed || sawtooth == claimed,
    })
}

/// Every valid `(α, β)` pair at depth `n`.
pub fn all_problems(n: u32) -> Vec<ContinuationProblem> {
    let a = a_points(n);
    let scale = Rational::from(BigInt::from(1u8) << (n - 1));
    let newest: Vec<&Rational> = a
        .iter()
        .filter(|x| (*x * &scale).numer() % 2 != BigInt::from(0))
        .collect();
    newest
        .iter()
        .flat_map(|alpha| {
            a.iter()
                .map(|beta| ContinuationProblem::new(n, (*alpha).clone(), beta.clone()).expect("valid by construction"))
        })
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

impl PartialOrd for ContinuationProblem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ContinuationProblem {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n, &self.alpha, &self.beta).cmp(&(other.n, &other.alpha, &other.beta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn prob(n: u32, a: &str, b: &str) -> ContinuationProblem {
        ContinuationProblem::new(n, r(a), r(b)).unwrap()
    }

    #[test]
    fn integer_match_agrees_with_evaluation() {
        for n in 1..=6 {
            for p in all_problems(n) {
                for k in 1..=1u64 << (n + 2) {
                    let direct = SawtoothMap::new(k).unwrap().eval(&p.alpha).unwrap() == p.beta;
                    assert_eq!(sawtooth_matches(&p, k).unwrap(), direct, "{p:?} k={k}");
                }
            }
        }
        let p = ContinuationProblem::new(100, Rational::dyadic(1u32, 99), Rational::dyadic(3u32, 99)).unwrap();
        assert!(sawtooth_matches(&p, 3).unwrap());
        assert!(
            sawtooth_matches(&p, u64::MAX).unwrap()
                == (SawtoothMap::new(u64::MAX).unwrap().eval(&p.alpha).unwrap() == p.beta)
        );
    }

    #[test]
    fn restrictions_validate() {
        for n in 1..=5 {
            for k in 1..=(1u64 << n) + 3 {
                sawtooth_restriction(n, k).unwrap().validate().unwrap();
            }
        }
    }

    fn table(n: u32, pairs: &[(&str, &str)]) -> CommutingTable {
        CommutingTable::new(n, pairs.iter().map(|(x, y)| (r(x), r(y))).collect()).unwrap()
    }

    #[test]
    fn solver_examples() {
        let s = solve_k0(&prob(2, "1/2", "1/2"));
        assert_eq!((s.k0, s.classes.clone()), (1, vec![1, 3]));
        let s = solve_k0(&prob(3, "3/4", "1/4"));
        assert_eq!(s.k0, 3);
        assert_eq!((3 * 3) % 8, 1);
        let s = solve_k0(&prob(2, "1/2", "0"));
        assert_eq!((s.k0, s.classes.clone()), (0, vec![0]));
        assert_eq!(s.smallest_k(), 4);
        // β = 1 is self-paired too
        let s = solve_k0(&prob(3, "1/4", "1"));
        assert_eq!(s.classes, vec![4]);
    }

    #[test]
    fn malformed_problems() {
        assert!(ContinuationProblem::new(2, r("0"), r("1/2")).is_err());
        assert!(ContinuationProblem::new(3, r("1/2"), r("1/2")).is_err());
        assert!(ContinuationProblem::new(2, r("1/2"), r("1/3")).is_err());
        assert!(ContinuationProblem::new(2, r("1/2"), r("5/4")).is_err());
        assert!(ContinuationProblem::new(0, r("1"), r("1")).is_err());
        // depth 1: A_1 \ A_0 = {1}
        assert!(ContinuationProblem::new(1, r("1"), r("0")).is_ok());
    }

    #[test]
    fn inverse_mod_pow2_small() {
        for n in 1..=20u32 {
            let m = 1u128 << n;
            for a in (1..m.min(300)).step_by(2) {
                assert_eq!((a * inverse_mod_pow2(a, n)) % m, 1 % m, "a={a} n={n}");
            }
        }
        assert_eq!(inverse_mod_pow2(3, 8), 171);
    }

    #[test]
    fn matches_examples() {
        assert!(sawtooth_matches(&prob(2, "1/2", "1/2"), 3).unwrap());
        assert!(!sawtooth_matches(&prob(2, "1/2", "1/2"), 2).unwrap());
        assert!(sawtooth_matches(&prob(3, "3/4", "1/4"), 5).unwrap());
    }

    #[test]
    fn continuable_from_point_examples() {
        assert_eq!(
            continuable_from_point(&prob(2, "1/2", "1/2")).unwrap(),
            table(2, &[("0", "0"), ("1/2", "1/2"), ("1", "1")])
        );
        assert_eq!(
            continuable_from_point(&prob(2, "1/2", "0")).unwrap(),
            table(2, &[("0", "0"), ("1/2", "0"), ("1", "0")])
        );
        assert_eq!(
            continuable_from_point(&prob(2, "1/2", "1")).unwrap(),
            table(2, &[("0", "0"), ("1/2", "1"), ("1", "0")])
        );
    }

    #[test]
    fn continuability_examples() {
        let id3 = sawtooth_restriction(3, 1).unwrap();
        assert_eq!(
            is_tent_continuable(&id3).unwrap(),
            Continuability::Yes(ContinuationWitness::Sawtooth(1))
        );
        let c = table(2, &[("0", "2/3"), ("1/2", "2/3"), ("1", "2/3")]);
        assert_eq!(
            is_tent_continuable(&c).unwrap(),
            Continuability::Yes(ContinuationWitness::Constant(r("2/3")))
        );
        // commutes, and is the restriction of the tent map itself
        let t = table(2, &[("0", "0"), ("1/2", "1"), ("1", "0")]);
        assert_eq!(
            is_tent_continuable(&t).unwrap(),
            Continuability::Yes(ContinuationWitness::Sawtooth(2))
        );
        // ψ(1) = 1 forces odd k, so ξ_(k)(1/2) = 1/2; ψ(1/2) = 1 is impossible
        let bad = CommutingTable::new(
            2,
            [("0", "0"), ("1/2", "1"), ("1", "1")]
                .iter()
                .map(|(x, y)| (r(x), r(y)))
                .collect(),
        );
        assert!(bad.is_err(), "does not even commute");
        let no = table(3, &[("0", "0"), ("1/4", "0"), ("1/2", "0"), ("3/4", "1"), ("1", "0")]);
        assert_eq!(is_tent_continuable(&no).unwrap(), Continuability::No);
    }

    #[test]
    fn enumerate_depth_one() {
        let e = enumerate_continuable(1).unwrap();
        let tables: Vec<_> = e.iter().map(|e| e.table.clone()).collect();
        assert_eq!(
            tables,
            vec![
                table(1, &[("0", "0"), ("1", "0")]),
                table(1, &[("0", "0"), ("1", "1")]),
                table(1, &[("0", "2/3"), ("1", "2/3")]),
            ]
        );
        let audit = audit_continuable(1).unwrap();
        assert_eq!(audit.sawtooth_restrictions, 2);
        assert_eq!(audit.with_constants, 3);
        assert_eq!(audit.claimed, 1);
    }

    #[test]
    fn audit_depth_two_reports_both_numbers() {
        let a = audit_continuable(2).unwrap();
        assert_eq!(a.sawtooth_restrictions, 3);
        assert_eq!(a.with_constants, 4);
        assert_eq!(a.claimed, 2);
        assert!(!a.matches_claim);
    }

    #[test]
    fn problem_enumeration_size() {
        for n in 1..=5 {
            let h = 1usize << (n - 1);
            let newest = if n == 1 { 1 } else { h / 2 };
            assert_eq!(all_problems(n).len(), newest * (h + 1), "n={n}");
        }
    }
}
