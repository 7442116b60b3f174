//! Search for an interval of linearity of a map commuting with the tent map.
//!
//! Starting from a dyadic interval `I_{n,k} = (k/2^n, (k+1)/2^n)` with a
//! nonzero secant slope, the probe looks at the midpoint defect
//!
//! ```text
//! (g(k/2^p) + g((k+1)/2^p)) / 2 - g((2k+1)/2^(p+1))
//! ```
//!
//! If it is nonzero it descends into the half whose secant is steeper (the
//! two half-slopes average to the parent slope, so exactly one half is
//! steeper, and it has the parent's sign). If it is zero it scans every
//! sub-interval of `I_{p,k}`, level by level, for a nonzero defect. If none
//! turns up down to the depth budget, `I_{p,k}` is reported as an interval
//! of linearity; that certificate covers the dyadic grid of the budget only.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plm::Evaluator;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub level: u32,
    pub index: u64,
    pub slope: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome")]
pub enum ProbeOutcome {
    /// All midpoint defects inside `I_{level,index}` vanish down to `budget`.
    LinearInterval {
        level: u32,
        index: u64,
        slope: Rational,
        budget: u32,
        trace: Vec<TraceStep>,
    },
    /// The budget ran out while still refining.
    RefinementTrace { budget: u32, trace: Vec<TraceStep> },
}

impl ProbeOutcome {
    pub fn trace(&self) -> &[TraceStep] {
        match self {
            ProbeOutcome::LinearInterval { trace, .. } | ProbeOutcome::RefinementTrace { trace, .. } => trace,
        }
    }

    /// `(left, right)` endpoints of the interval of linearity, if one was found.
    pub fn interval(&self) -> Option<(Rational, Rational)> {
        match self {
            ProbeOutcome::LinearInterval { level, index, .. } => {
                Some((Rational::dyadic(*index, *level), Rational::dyadic(index + 1, *level)))
            }
            ProbeOutcome::RefinementTrace { .. } => None,
        }
    }
}

struct Grid<'a> {
    g: &'a dyn Evaluator,
}

impl Grid<'_> {
    fn at(&self, level: u32, k: u64) -> Rational {
        self.g.eval_dyadic(k, level)
    }

    fn slope(&self, level: u32, k: u64) -> Rational {
        (self.at(level, k + 1) - self.at(level, k)) * Rational::from(BigInt::from(1u8) << level)
    }

    fn defect(&self, level: u32, k: u64) -> Rational {
        (self.at(level, k) + self.at(level, k + 1)) / Rational::from(2) - self.at(level + 1, 2 * k + 1)
    }

    /// First `(level, index)` below `I_{p,k}`, breadth first, whose defect is
    /// nonzero, scanning levels `p..budget`.
    fn first_nonzero_defect(&self, p: u32, k: u64, budget: u32) -> Option<(u32, u64)> {
        let two = Rational::from(2);
        let mut values = vec![self.at(p, k), self.at(p, k + 1)];
        for q in p..budget {
            let base = k << (q - p);
            let mut next = Vec::with_capacity(values.len() * 2 - 1);
            for (i, w) in values.windows(2).enumerate() {
                let s = base + i as u64;
                let mid = self.at(q + 1, 2 * s + 1);
                if &w[0] + &w[1] != &two * &mid {
                    return Some((q, s));
                }
                next.push(w[0].clone());
                next.push(mid);
            }
            next.push(values.last().unwrap().clone());
            values = next;
        }
        None
    }
}

/// Runs the probe from `start = (n, k)` with an absolute depth budget.
pub fn linearity_probe(g: &dyn Evaluator, start: (u32, u64), depth_budget: u32) -> Result<ProbeOutcome> {
    let (n, k) = start;
    if n > 62 || depth_budget > 62 {
        return Err(Error::Probe("levels above 62 are not supported".into()));
    }
    if k >= 1 << n {
        return Err(Error::Probe(format!("interval index {k} out of range at level {n}")));
    }
    let grid = Grid { g };
    let t0 = grid.slope(n, k);
    if t0.is_zero() {
        return Err(Error::Probe(format!("secant slope on I_({n},{k}) is zero")));
    }
    let mut trace = vec![TraceStep {
        level: n,
        index: k,
        slope: t0,
    }];
    loop {
        let cur = trace.last().unwrap().clone();
        if cur.level >= depth_budget {
            return Ok(ProbeOutcome::RefinementTrace {
                budget: depth_budget,
                trace,
            });
        }
        let (p, k) = (cur.level, cur.index);
        if !grid.defect(p, k).is_zero() {
            let left = grid.slope(p + 1, 2 * k);
            let right = grid.slope(p + 1, 2 * k + 1);
            let positive = !cur.slope.is_negative();
            let steeper = |a: &Rational, b: &Rational| if positive { a > b } else { a < b };
            let (index, slope) = if steeper(&left, &cur.slope) && !steeper(&right, &cur.slope) {
                (2 * k, left)
            } else if steeper(&right, &cur.slope) && !steeper(&left, &cur.slope) {
                (2 * k + 1, right)
            } else {
                return Err(Error::Probe(format!(
                    "no unique steeper half of I_({p},{k}): slopes {left} and {right} around {}",
                    cur.slope
                )));
            };
            trace.push(TraceStep {
                level: p + 1,
                index,
                slope,
            });
            continue;
        }
        match grid.first_nonzero_defect(p, k, depth_budget) {
            None => {
                return Ok(ProbeOutcome::LinearInterval {
                    level: p,
                    index: k,
                    slope: cur.slope,
                    budget: depth_budget,
                    trace,
                })
            }
            Some((q, s)) => {
                for level in p + 1..=q {
                    let index = s >> (q - level);
                    trace.push(TraceStep {
                        level,
                        index,
                        slope: grid.slope(level, index),
                    });
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sawtooth::SawtoothMap;

    fn xi(k: u64) -> SawtoothMap {
        SawtoothMap::new(k).unwrap()
    }

    #[test]
    fn identity_is_linear_at_once() {
        let out = linearity_probe(&xi(1), (1, 0), 20).unwrap();
        assert!(matches!(out, ProbeOutcome::LinearInterval { level: 1, index: 0, .. }));
    }

    #[test]
    fn tent_is_linear_on_left_half() {
        let out = linearity_probe(&xi(2), (1, 0), 20).unwrap();
        assert!(matches!(out, ProbeOutcome::LinearInterval { level: 1, index: 0, .. }));
    }

    #[test]
    fn xi3_finds_interval_inside_first_third() {
        let out = linearity_probe(&xi(3), (1, 0), 20).unwrap();
        let (a, b) = out.interval().expect("linear interval");
        assert!(b <= Rational::frac(1, 3), "({a}, {b})");
        assert_eq!((a, b), (Rational::zero(), Rational::frac(1, 4)));
    }

    #[test]
    fn zero_start_slope_is_an_error() {
        let zero = |_: &Rational| Rational::zero();
        assert!(linearity_probe(&zero, (1, 0), 10).is_err());
        // ξ_4 has zero secant on I_(1,0)
        assert!(linearity_probe(&xi(4), (1, 0), 10).is_err());
    }

    #[test]
    fn small_budget_reports_trace() {
        let out = linearity_probe(&xi(13), (1, 0), 2).unwrap();
        assert!(matches!(out, ProbeOutcome::RefinementTrace { budget: 2, .. }));
        assert!(!out.trace().is_empty());
    }
}
