use num_bigint::BigInt;
use proptest::prelude::*;
use tentlab::binary::{binary_to_rational, rational_to_binary};
use tentlab::conjugacy::{graph_length, Mode};
use tentlab::continuation::{solve_k0, ContinuationProblem};
use tentlab::tent::tent;
use tentlab::{ConjugacyIterate, Rational, SawtoothMap};

fn unit() -> impl Strategy<Value = (i64, i64)> {
    (1i64..5000).prop_flat_map(|q| (0..=q, Just(q)))
}

fn vertex() -> impl Strategy<Value = Rational> {
    (2i64..200)
        .prop_flat_map(|q| (1..q, Just(q)))
        .prop_map(|(p, q)| Rational::frac(p, q))
}

/// `a/b == c/d` and `a/b < c/d` without any reduction.
fn cross(a: i64, b: i64, c: i64, d: i64) -> (bool, bool) {
    let (l, r) = (a as i128 * d as i128, c as i128 * b as i128);
    (l == r, l < r)
}

proptest! {
    #[test]
    fn codec_round_trip((p, q) in unit()) {
        let x = Rational::frac(p, q);
        let b = rational_to_binary(&x).unwrap();
        prop_assert!(b.is_canonical());
        prop_assert!(!b.period().iter().all(|&d| d == 1));
        prop_assert_eq!(binary_to_rational(&b).unwrap(), x.clone());
        prop_assert_eq!(b.to_string().parse::<tentlab::BinaryExpansion>().unwrap(), b);
    }

    #[test]
    fn arithmetic_matches_cross_multiplication(a in -999i64..999, b in 1i64..999, c in -999i64..999, d in 1i64..999) {
        let (x, y) = (Rational::frac(a, b), Rational::frac(c, d));
        let (eq, lt) = cross(a, b, c, d);
        prop_assert_eq!(x == y, eq);
        prop_assert_eq!(x < y, lt);
        let sum = &x + &y;
        prop_assert_eq!(sum.numer() * BigInt::from(b * d), sum.denom() * BigInt::from(a * d + c * b));
        let prod = &x * &y;
        prop_assert_eq!(prod.numer() * BigInt::from(b * d), prod.denom() * BigInt::from(a * c));
    }

    #[test]
    fn sawtooth_commutes(k in 1u64..500, (p, q) in unit()) {
        let x = Rational::frac(p, q);
        let g = SawtoothMap::new(k).unwrap();
        prop_assert_eq!(g.eval(&tent(&x).unwrap()).unwrap(), tent(&g.eval(&x).unwrap()).unwrap());
    }

    #[test]
    fn residue_solution_matches_search(n in 2u32..9, s in 0u64..128, b in 0u64..256) {
        let h = 1u64 << (n - 1);
        let alpha = Rational::frac((2 * (s % (h / 2).max(1)) + 1) as i64, h as i64);
        let beta = Rational::frac((b % (h + 1)) as i64, h as i64);
        if alpha > Rational::one() {
            return Ok(());
        }
        let sol = solve_k0(&ContinuationProblem::new(n, alpha.clone(), beta.clone()).unwrap());
        for k in 1..=4 * (1u64 << n) {
            let hit = SawtoothMap::new(k).unwrap().eval(&alpha).unwrap() == beta;
            prop_assert_eq!(hit, sol.matches(k as u128), "k = {}", k);
        }
    }

    #[test]
    fn iterates_are_increasing(v in vertex(), n in 0u32..9) {
        prop_assert!(ConjugacyIterate::iterate(v, n).unwrap().is_strictly_increasing());
    }

    #[test]
    fn length_is_at_most_two_and_grows(v in vertex(), n in 1u32..60) {
        let a = graph_length(n, &v, Mode::Aggregate).unwrap();
        let b = graph_length(n + 1, &v, Mode::Aggregate).unwrap();
        prop_assert!(a.length <= 2.0 && a.deficit > 0.0);
        if v != Rational::half() {
            prop_assert!(b.ln_deficit < a.ln_deficit);
        }
    }
}
