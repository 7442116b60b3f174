//! Piecewise linear self-maps of `[0, 1]` given by their breakpoints.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// An exact map `[0, 1] -> [0, 1]`, evaluated by linear interpolation
/// between consecutive breakpoints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPlm", into = "RawPlm")]
pub struct PiecewiseLinearMap {
    points: Vec<(Rational, Rational)>,
}

#[derive(Serialize, Deserialize)]
struct RawPlm {
    breakpoints: Vec<(Rational, Rational)>,
}

impl TryFrom<RawPlm> for PiecewiseLinearMap {
    type Error = Error;

    fn try_from(raw: RawPlm) -> Result<Self> {
        PiecewiseLinearMap::new(raw.breakpoints)
    }
}

impl From<PiecewiseLinearMap> for RawPlm {
    fn from(p: PiecewiseLinearMap) -> Self {
        RawPlm { breakpoints: p.points }
    }
}

impl PiecewiseLinearMap {
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self> {
        let bad = |m: String| Err(Error::Domain(format!("piecewise linear map: {m}")));
        if points.len() < 2 {
            return bad("needs at least two breakpoints".into());
        }
        if !points[0].0.is_zero() || !points.last().unwrap().0.is_one() {
            return bad("abscissas must start at 0 and end at 1".into());
        }
        if let Some(w) = points.windows(2).find(|w| w[0].0 >= w[1].0) {
            return bad(format!("abscissas not strictly increasing at {}", w[1].0));
        }
        if let Some((_, y)) = points.iter().find(|(_, y)| !y.in_unit_interval()) {
            return bad(format!("ordinate {y} outside [0, 1]"));
        }
        Ok(PiecewiseLinearMap { points })
    }

    /// Interpolant through `(k/2^n, g(k/2^n))`, `0 <= k <= 2^n`.
    pub fn dyadic_interpolant(g: &dyn Evaluator, n: u32) -> Result<Self> {
        let points = (0..=1u64 << n)
            .map(|k| {
                let x = Rational::dyadic(k, n);
                let y = g.eval(&x);
                (x, y)
            })
            .collect();
        Self::new(points)
    }

    pub fn constant(c: Rational) -> Result<Self> {
        Self::new(vec![(Rational::zero(), c.clone()), (Rational::one(), c)])
    }

    pub fn identity() -> Self {
        PiecewiseLinearMap {
            points: vec![(Rational::zero(), Rational::zero()), (Rational::one(), Rational::one())],
        }
    }

    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    /// Exact value at `x`; `x` must lie in `[0, 1]`.
    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        x.ensure_unit("x")?;
        Ok(self.eval_unchecked(x))
    }

    pub fn eval_unchecked(&self, x: &Rational) -> Rational {
        let i = self.points.partition_point(|(px, _)| px <= x);
        if i == 0 {
            return self.points[0].1.clone();
        }
        let (x0, y0) = &self.points[i - 1];
        if x0 == x || i == self.points.len() {
            return y0.clone();
        }
        let (x1, y1) = &self.points[i];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// Slope of each piece, left to right.
    pub fn slopes(&self) -> Vec<Rational> {
        self.points
            .windows(2)
            .map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0))
            .collect()
    }

    /// Drops interior breakpoints where the slope does not change.
    pub fn simplified(&self) -> Self {
        let mut out: Vec<(Rational, Rational)> = vec![self.points[0].clone()];
        for (i, p) in self.points.iter().enumerate().skip(1) {
            if i + 1 < self.points.len() {
                let (x0, y0) = out.last().unwrap();
                let (x1, y1) = &self.points[i + 1];
                let left = (&p.1 - y0) * (x1 - &p.0);
                let right = (y1 - &p.1) * (&p.0 - x0);
                if left == right {
                    continue;
                }
            }
            out.push(p.clone());
        }
        PiecewiseLinearMap { points: out }
    }

    pub fn is_constant(&self) -> Option<&Rational> {
        let y0 = &self.points[0].1;
        self.points.iter().all(|(_, y)| y == y0).then_some(y0)
    }
}

/// An exact self-map of `[0, 1]`, queried only at points of `[0, 1]`.
pub trait Evaluator {
    fn eval(&self, x: &Rational) -> Rational;

    /// `eval(k/2^level)`; override when dyadic inputs have a cheaper path.
    fn eval_dyadic(&self, k: u64, level: u32) -> Rational {
        self.eval(&Rational::dyadic(k, level))
    }
}

impl<F: Fn(&Rational) -> Rational> Evaluator for F {
    fn eval(&self, x: &Rational) -> Rational {
        self(x)
    }
}

impl Evaluator for PiecewiseLinearMap {
    fn eval(&self, x: &Rational) -> Rational {
        self.eval_unchecked(x)
    }
}
