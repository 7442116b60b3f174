//! The sawtooth family `ξ_(k)(x) = Λ(kx)`, where `Λ` is the period-2
//! triangle wave with `Λ(0) = 0` and `Λ(1) = 1`.
//!
//! Together with the constants `0` and `2/3` these are exactly the
//! continuous maps commuting with the tent map, so this module also hosts
//! the commutation check and the classifier for piecewise linear maps.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits;
use crate::plm::{Evaluator, PiecewiseLinearMap};
use crate::rational::Rational;
use crate::tent::tent_unchecked;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SawtoothMap {
    k: u64,
}

impl SawtoothMap {
    pub fn new(k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("sawtooth index k must be positive".into()));
        }
        Ok(SawtoothMap { k })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        x.ensure_unit("x")?;
        Ok(triangle_wave(&(x * Rational::from(BigInt::from(self.k)))))
    }

    pub fn breakpoints(&self) -> PiecewiseLinearMap {
        sawtooth_breakpoints(self.k)
    }
}

impl Evaluator for SawtoothMap {
    fn eval(&self, x: &Rational) -> Rational {
        triangle_wave(&(x * Rational::from(BigInt::from(self.k))))
    }

    fn eval_dyadic(&self, k: u64, level: u32) -> Rational {
        if level > 64 {
            return Evaluator::eval(self, &Rational::dyadic(k, level));
        }
        let y = self.k as u128 * k as u128;
        let whole = y >> level;
        let fr = y & ((1u128 << level) - 1);
        let num = if whole.is_multiple_of(2) {
            fr
        } else {
            (1u128 << level) - fr
        };
        Rational::dyadic(num, level)
    }
}

/// `Λ(y) = (1 - (-1)^⌊y⌋)/2 + (-1)^⌊y⌋ {y}`.
pub fn triangle_wave(y: &Rational) -> Rational {
    let fl = y.floor();
    let fr = y - Rational::from(fl.clone());
    if fl.is_even() {
        fr
    } else {
        Rational::one() - fr
    }
}

pub fn sawtooth_eval(m: &SawtoothMap, x: &Rational) -> Result<Rational> {
    m.eval(x)
}

/// Breakpoints `(t/k, t mod 2)` for `t = 0..=k`.
pub fn sawtooth_breakpoints(k: u64) -> PiecewiseLinearMap {
    assert!(k >= 1, "sawtooth index must be positive");
    let points = (0..=k)
        .map(|t| (Rational::new(t, k).expect("k > 0"), Rational::from((t % 2) as i64)))
        .collect();
    PiecewiseLinearMap::new(points).expect("sawtooth breakpoints are well formed")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutationWitness {
    pub x: Rational,
    /// `g(f(x))`
    pub g_of_f: Rational,
    /// `f(g(x))`, absent when `g(x)` left `[0, 1]`
    pub f_of_g: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutationReport {
    pub ok: bool,
    pub checked: usize,
    pub witnesses: Vec<CommutationWitness>,
}

/// Checks `g(f(x)) = f(g(x))` exactly at every sample.
pub fn verify_commutation(g: &dyn Evaluator, samples: &[Rational]) -> Result<CommutationReport> {
    let mut witnesses = Vec::new();
    for x in samples {
        x.ensure_unit("sample")?;
        let g_of_f = g.eval(&tent_unchecked(x));
        let gx = g.eval(x);
        let f_of_g = gx.in_unit_interval().then(|| tent_unchecked(&gx));
        if f_of_g.as_ref() != Some(&g_of_f) {
            witnesses.push(CommutationWitness {
                x: x.clone(),
                g_of_f,
                f_of_g,
            });
        }
    }
    Ok(CommutationReport {
        ok: witnesses.is_empty(),
        checked: samples.len(),
        witnesses,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", content = "k")]
pub enum Classification {
    ConstantZero,
    ConstantTwoThirds,
    Sawtooth(u64),
    NotASolution,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::ConstantZero => f.write_str("constant 0"),
            Classification::ConstantTwoThirds => f.write_str("constant 2/3"),
            Classification::Sawtooth(k) => write!(f, "sawtooth k={k}"),
            Classification::NotASolution => f.write_str("not a solution"),
        }
    }
}

/// Decides which continuous commuting map `p` is, by exact comparison of
/// its simplified breakpoints against the candidates.
pub fn classify_solution(p: &PiecewiseLinearMap) -> Classification {
    let p = p.simplified();
    if let Some(c) = p.is_constant() {
        return if c.is_zero() {
            Classification::ConstantZero
        } else if *c == Rational::two_thirds() {
            Classification::ConstantTwoThirds
        } else {
            Classification::NotASolution
        };
    }
    let k = (p.breakpoints().len() - 1) as u64;
    if p == sawtooth_breakpoints(k) {
        Classification::Sawtooth(k)
    } else {
        Classification::NotASolution
    }
}

/// `t_{nk} = 2^n (g((k+1)/2^n) - g(k/2^n))` for `k = 0..2^n`.
pub fn secant_slopes(g: &dyn Evaluator, n: u32) -> Result<Vec<Rational>> {
    limits::check(n, limits::PREIMAGE_DEPTH)?;
    let scale = Rational::from(BigInt::from(1u8) << n);
    let values: Vec<Rational> = (0..=1u64 << n).map(|k| g.eval(&Rational::dyadic(k, n))).collect();
    Ok(values.windows(2).map(|w| (&w[1] - &w[0]) * &scale).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn xi(k: u64) -> SawtoothMap {
        SawtoothMap::new(k).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(xi(1).eval(&r("1/3")).unwrap(), r("1/3"));
        assert_eq!(xi(3).eval(&r("1/3")).unwrap(), r("1"));
        assert_eq!(xi(3).eval(&r("1/2")).unwrap(), r("1/2"));
        assert!(xi(3).eval(&r("2")).is_err());
        assert!(SawtoothMap::new(0).is_err());
    }

    #[test]
    fn value_at_one_alternates() {
        for k in 1..10 {
            let want = if k % 2 == 0 { r("0") } else { r("1") };
            assert_eq!(xi(k).eval(&r("1")).unwrap(), want);
        }
    }

    #[test]
    fn breakpoint_examples() {
        let pts = |k| {
            sawtooth_breakpoints(k)
                .breakpoints()
                .iter()
                .map(|(x, y)| format!("({x},{y})"))
                .collect::<Vec<_>>()
                .join("")
        };
        assert_eq!(pts(1), "(0/1,0/1)(1/1,1/1)");
        assert_eq!(pts(2), "(0/1,0/1)(1/2,1/1)(1/1,0/1)");
        assert_eq!(pts(3), "(0/1,0/1)(1/3,1/1)(2/3,0/1)(1/1,1/1)");
    }

    #[test]
    fn breakpoints_agree_with_eval() {
        for k in 1..=12 {
            let p = sawtooth_breakpoints(k);
            for j in 0..=60 {
                let x = Rational::new(j, 60).unwrap();
                assert_eq!(p.eval(&x).unwrap(), xi(k).eval(&x).unwrap(), "k={k} x={x}");
            }
        }
    }

    #[test]
    fn commutation_examples() {
        let rep = verify_commutation(&xi(3), &[r("1/4")]).unwrap();
        assert!(rep.ok);
        let id = |x: &Rational| x.clone();
        assert!(verify_commutation(&id, &[r("0"), r("1/7"), r("1")]).unwrap().ok);
        let half = |_: &Rational| Rational::half();
        let rep = verify_commutation(&half, &[r("0")]).unwrap();
        assert!(!rep.ok);
        assert_eq!(rep.witnesses[0].x, r("0"));
        assert_eq!(rep.witnesses[0].g_of_f, r("1/2"));
        assert_eq!(rep.witnesses[0].f_of_g, Some(r("1")));
    }

    #[test]
    fn classify_examples() {
        let tent = PiecewiseLinearMap::new(vec![(r("0"), r("0")), (r("1/2"), r("1")), (r("1"), r("0"))]).unwrap();
        assert_eq!(classify_solution(&tent), Classification::Sawtooth(2));
        let c = PiecewiseLinearMap::constant(r("2/3")).unwrap();
        assert_eq!(classify_solution(&c), Classification::ConstantTwoThirds);
        let z = PiecewiseLinearMap::constant(r("0")).unwrap();
        assert_eq!(classify_solution(&z), Classification::ConstantZero);
        let h = PiecewiseLinearMap::constant(r("1/2")).unwrap();
        assert_eq!(classify_solution(&h), Classification::NotASolution);
        // redundant breakpoints do not matter
        let id = PiecewiseLinearMap::new(vec![(r("0"), r("0")), (r("1/5"), r("1/5")), (r("1"), r("1"))]).unwrap();
        assert_eq!(classify_solution(&id), Classification::Sawtooth(1));
    }

    #[test]
    fn secant_slope_examples() {
        assert_eq!(secant_slopes(&xi(1), 1).unwrap(), vec![r("1"), r("1")]);
        assert_eq!(secant_slopes(&xi(2), 1).unwrap(), vec![r("2"), r("-2")]);
        assert_eq!(secant_slopes(&xi(3), 1).unwrap(), vec![r("1"), r("1")]);
    }

    #[test]
    fn classification_json() {
        assert_eq!(
            serde_json::to_string(&Classification::Sawtooth(3)).unwrap(),
            r#"{"tag":"Sawtooth","k":3}"#
        );
        assert_eq!(
            serde_json::to_string(&Classification::ConstantZero).unwrap(),
            r#"{"tag":"ConstantZero"}"#
        );
    }
}
