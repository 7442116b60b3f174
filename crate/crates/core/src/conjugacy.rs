//! Piecewise linear approximants `h_n` of the conjugacy `h ∘ f = f_v ∘ h`
//! between the tent map and the skew tent with vertex `v`.
//!
//! `h_0` is the identity and
//!
//! ```text
//! h_{n+1}(x) = v h_n(2x)                 on [0, 1/2]
//! h_{n+1}(x) = 1 - (1-v) h_n(2 - 2x)     on [1/2, 1]
//! ```
//!
//! so `h_n` is linear on each `[j/2^n, (j+1)/2^n]`, with piece heights
//! `v^a (1-v)^(n-a)` occurring `C(n, a)` times. The aggregate diagnostics
//! below run on that multiset instead of the `2^n` breakpoints.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits;
use crate::plm::{Evaluator, PiecewiseLinearMap};
use crate::rational::Rational;
use crate::tent::{MapSystem, SkewTentParams};
use crate::word::BinaryWord;

fn check_v(v: &Rational) -> Result<SkewTentParams> {
    SkewTentParams::new(v.clone())
}

/// `h_n` stored by its ordinates on the grid `j/2^n`.
///
/// With `v = a/b` every ordinate is an integer over `b^n`, so only the
/// numerators are kept and a step needs no gcd.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyIterate {
    v: Rational,
    n: u32,
    scale: BigUint,
    numers: Vec<BigUint>,
}

fn to_biguint(x: &BigInt) -> BigUint {
    x.magnitude().clone()
}

impl ConjugacyIterate {
    pub fn identity(v: Rational) -> Result<Self> {
        check_v(&v)?;
        Ok(ConjugacyIterate {
            v,
            n: 0,
            scale: BigUint::one(),
            numers: vec![BigUint::zero(), BigUint::one()],
        })
    }

    /// `h_n`, built from the identity by `n` steps.
    pub fn iterate(v: Rational, n: u32) -> Result<Self> {
        limits::check(n, limits::CONJUGACY_EXPLICIT_DEPTH)?;
        let mut h = Self::identity(v)?;
        for _ in 0..n {
            h = h.step()?;
        }
        Ok(h)
    }

    pub fn step(&self) -> Result<Self> {
        limits::check(self.n + 1, limits::CONJUGACY_EXPLICIT_DEPTH)?;
        let a = to_biguint(self.v.numer());
        let b = to_biguint(self.v.denom());
        let c = &b - &a;
        let scale = &self.scale * &b;
        let half = self.numers.len() - 1;
        let mut next = vec![BigUint::zero(); 2 * half + 1];
        for (j, y) in self.numers.iter().enumerate() {
            next[j] = &a * y;
            next[2 * half - j] = &scale - &c * y;
        }
        Ok(ConjugacyIterate {
            v: self.v.clone(),
            n: self.n + 1,
            scale,
            numers: next,
        })
    }

    pub fn v(&self) -> &Rational {
        &self.v
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of grid points, `2^n + 1`.
    pub fn len(&self) -> usize {
        self.numers.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `h_n(j/2^n)`.
    pub fn ordinate(&self, j: usize) -> Rational {
        self.frac(&self.numers[j])
    }

    /// `h_n(j/2^n)` for `j = 0..=2^n`.
    pub fn ordinates(&self) -> Vec<Rational> {
        self.numers.iter().map(|y| self.frac(y)).collect()
    }

    /// Common denominator `b^n` and the ordinate numerators over it.
    pub fn raw(&self) -> (&BigUint, &[BigUint]) {
        (&self.scale, &self.numers)
    }

    fn frac(&self, y: &BigUint) -> Rational {
        Rational::new(BigInt::from(y.clone()), BigInt::from(self.scale.clone())).expect("scale > 0")
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = (Rational, Rational)> + '_ {
        let n = self.n;
        self.numers
            .iter()
            .enumerate()
            .map(move |(j, y)| (Rational::dyadic(j as u64, n), self.frac(y)))
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        x.ensure_unit("x")?;
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: &Rational) -> Rational {
        let scaled = x * Rational::from(BigInt::from(1u8) << self.n);
        let j = scaled.floor().to_usize().expect("x in [0, 1]");
        if j + 1 >= self.numers.len() {
            return Rational::one();
        }
        let t = scaled.fract();
        let y0 = self.ordinate(j);
        if t.is_zero() {
            y0
        } else {
            let y1 = self.ordinate(j + 1);
            &y0 + (&y1 - &y0) * t
        }
    }

    pub fn to_plm(&self) -> PiecewiseLinearMap {
        PiecewiseLinearMap::new(self.breakpoints().collect()).expect("iterates are well formed")
    }

    /// Absolute slopes of the `2^n` pieces, left to right.
    pub fn slopes(&self) -> Vec<Rational> {
        let den = BigInt::from(self.scale.clone());
        self.numers
            .windows(2)
            .map(|w| {
                let rise = BigInt::from(&w[1] - &w[0]) << self.n;
                Rational::new(rise, den.clone()).expect("scale > 0")
            })
            .collect()
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.numers.windows(2).all(|w| w[0] < w[1])
    }
}

impl Evaluator for ConjugacyIterate {
    fn eval(&self, x: &Rational) -> Rational {
        self.eval_unchecked(x)
    }
}

#[derive(Serialize)]
struct IterateView<'a> {
    n: u32,
    v: &'a Rational,
    plm: PiecewiseLinearMap,
}

impl Serialize for ConjugacyIterate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IterateView {
            n: self.n,
            v: &self.v,
            plm: self.to_plm(),
        }
        .serialize(s)
    }
}

pub fn h_step(cur: &ConjugacyIterate) -> Result<ConjugacyIterate> {
    cur.step()
}

/// `γ_{i_1}^{-1}(… γ_{i_n}^{-1}(0) …)`, first letter outermost. This is
/// `h` at the tent point with the same nesting.
pub fn conjugate_point(word: &BinaryWord, v: &Rational) -> Result<Rational> {
    let sys = MapSystem::Skew(check_v(v)?);
    Ok(word.bits().iter().rev().fold(Rational::zero(), |y, &b| sys.pull(b, &y)))
}

/// Row `C(n, 0..=n)`.
pub fn binomial_row(n: u32) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for a in 0..n {
        c = c * (n - a) / (a + 1);
        row.push(c.clone());
    }
    row
}

fn ln_big(x: &BigUint) -> f64 {
    let shift = x.bits().saturating_sub(64);
    (x >> shift).to_f64().expect("fits").ln() + shift as f64 * std::f64::consts::LN_2
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlopeClass {
    /// number of left-branch factors
    pub a: u32,
    pub multiplicity: String,
    /// `v^a (1-v)^(n-a)`
    pub height: Rational,
    /// `(2v)^a (2(1-v))^(n-a)`
    pub slope: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlopeProfile {
    pub n: u32,
    pub v: Rational,
    pub classes: Vec<SlopeClass>,
}

impl SlopeProfile {
    pub fn new(n: u32, v: &Rational) -> Result<Self> {
        check_v(v)?;
        limits::check(n, limits::CONJUGACY_AGGREGATE_DEPTH)?;
        let w = Rational::one() - v;
        let two = Rational::from(2);
        let classes = binomial_row(n)
            .into_iter()
            .enumerate()
            .map(|(a, c)| {
                let a = a as u32;
                let height = v.pow(a) * w.pow(n - a);
                let slope = &height * two.pow(n);
                SlopeClass {
                    a,
                    multiplicity: c.to_string(),
                    height,
                    slope,
                }
            })
            .collect();
        Ok(SlopeProfile {
            n,
            v: v.clone(),
            classes,
        })
    }

    fn multiplicities(&self) -> impl Iterator<Item = BigUint> + '_ {
        self.classes.iter().map(|c| c.multiplicity.parse().expect("decimal"))
    }

    pub fn piece_count(&self) -> BigUint {
        self.multiplicities().sum()
    }

    /// `Σ C(n,a) v^a (1-v)^(n-a)`, exactly; always 1.
    pub fn total_height(&self) -> Rational {
        self.classes
            .iter()
            .zip(self.multiplicities())
            .map(|(c, m)| &c.height * Rational::from(BigInt::from(m)))
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Explicit,
    Aggregate,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Explicit => "explicit",
            Mode::Aggregate => "aggregate",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "explicit" => Ok(Mode::Explicit),
            "aggregate" => Ok(Mode::Aggregate),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

/// Length of the graph of `h_n`. The polyline has total horizontal and
/// vertical travel 1 each, so `length = 2 - deficit` with
/// `deficit = Σ dx + dy - sqrt(dx² + dy²)`; the deficit is summed directly
/// so that the bound `length <= 2` survives rounding.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphLength {
    pub n: u32,
    pub v: Rational,
    pub mode: Mode,
    pub length: f64,
    pub deficit: f64,
    /// natural log of the deficit, finite even where the deficit underflows
    pub ln_deficit: f64,
}

/// `dx + dy - sqrt(dx² + dy²)` in logarithms, from `ln dx`, `ln dy`.
fn ln_segment_deficit(ln_dx: f64, ln_dy: f64) -> f64 {
    let (lo, hi) = if ln_dx < ln_dy { (ln_dx, ln_dy) } else { (ln_dy, ln_dx) };
    let t = (lo - hi).exp();
    // 2 lo·hi / (lo + hi + sqrt(lo² + hi²)) = 2 lo / (1 + t + sqrt(1 + t²))
    std::f64::consts::LN_2 + lo - (1.0 + t + (1.0 + t * t).sqrt()).ln()
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

pub fn graph_length(n: u32, v: &Rational, mode: Mode) -> Result<GraphLength> {
    check_v(v)?;
    let ln_deficit = match mode {
        Mode::Explicit => {
            let h = ConjugacyIterate::iterate(v.clone(), n)?;
            let ln_dx = -(n as f64) * std::f64::consts::LN_2;
            let (scale, numers) = h.raw();
            let ln_scale = ln_big(scale);
            let terms: Vec<f64> = numers
                .windows(2)
                .map(|w| ln_segment_deficit(ln_dx, ln_big(&(&w[1] - &w[0])) - ln_scale))
                .collect();
            log_sum_exp(&terms)
        }
        Mode::Aggregate => {
            limits::check(n, limits::CONJUGACY_AGGREGATE_DEPTH)?;
            let ln_dx = -(n as f64) * std::f64::consts::LN_2;
            let ln_v = ln_rational(v);
            let ln_w = ln_rational(&(Rational::one() - v));
            let terms: Vec<f64> = binomial_row(n)
                .iter()
                .enumerate()
                .map(|(a, c)| {
                    let ln_h = a as f64 * ln_v + (n as usize - a) as f64 * ln_w;
                    ln_big(c) + ln_segment_deficit(ln_dx, ln_h)
                })
                .collect();
            log_sum_exp(&terms)
        }
    };
    let deficit = ln_deficit.exp();
    Ok(GraphLength {
        n,
        v: v.clone(),
        mode,
        length: 2.0 - deficit,
        deficit,
        ln_deficit,
    })
}

/// `ln q` for positive `q`, valid far outside the `f64` range.
fn ln_rational(q: &Rational) -> f64 {
    let num = q.numer().magnitude();
    let den = q.denom().magnitude();
    ln_big(num) - ln_big(den)
}

/// Lebesgue measure of the pieces of `h_n` with `|slope| >= threshold`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeMeasure {
    pub n: u32,
    pub v: Rational,
    pub threshold: Rational,
    pub mode: Mode,
    pub measure: Rational,
    pub approx: f64,
}

pub fn slope_measure(n: u32, v: &Rational, threshold: &Rational, mode: Mode) -> Result<SlopeMeasure> {
    check_v(v)?;
    if threshold.is_negative() {
        return Err(Error::Domain(format!("threshold {threshold} must be nonnegative")));
    }
    let measure = match mode {
        Mode::Explicit => {
            let h = ConjugacyIterate::iterate(v.clone(), n)?;
            let steep = h.slopes().iter().filter(|s| s.abs() >= *threshold).count();
            Rational::dyadic(steep as u64, n)
        }
        Mode::Aggregate => {
            limits::check(n, limits::CONJUGACY_AGGREGATE_DEPTH)?;
            let left = Rational::from(2) * v;
            let right = Rational::from(2) * (Rational::one() - v);
            let slope = |a: u32| left.pow(a) * right.pow(n - a);
            let steep = |a: u32| slope(a) >= *threshold;
            // the slope is monotone in a, so the steep classes form a prefix
            // or a suffix of 0..=n
            let increasing = left >= right;
            let cut = partition(n, |a| if increasing { !steep(a) } else { steep(a) });
            let range = if increasing { cut..=n } else { 0..=cut.wrapping_sub(1) };
            let row = binomial_row(n);
            let total: BigUint = if !increasing && cut == 0 {
                BigUint::zero()
            } else {
                range.map(|a| &row[a as usize]).sum()
            };
            Rational::new(BigInt::from(total), BigInt::from(1u8) << n)?
        }
    };
    Ok(SlopeMeasure {
        n,
        v: v.clone(),
        threshold: threshold.clone(),
        mode,
        approx: measure.to_f64(),
        measure,
    })
}

/// First `a` in `0..=n` where `pred` turns false (`n + 1` if never).
fn partition(n: u32, pred: impl Fn(u32) -> bool) -> u32 {
    let (mut lo, mut hi) = (0u32, n + 1);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    pub v: Rational,
    pub depth: u32,
    pub points: usize,
    pub max_gap: Rational,
    pub max_gap_approx: f64,
}

/// Preimages of 1 under the skew tent, all levels up to `depth`, and the
/// largest gap they leave in `[0, 1]`.
pub fn density_points(v: &Rational, depth: u32) -> Result<Vec<Rational>> {
    let sys = MapSystem::Skew(check_v(v)?);
    limits::check(depth, limits::DENSITY_DEPTH)?;
    let mut all = vec![Rational::one()];
    let mut level = vec![Rational::one()];
    for _ in 0..depth {
        let mut next: Vec<Rational> = level.iter().flat_map(|y| [sys.pull(0, y), sys.pull(1, y)]).collect();
        next.sort();
        next.dedup();
        all.extend(next.iter().cloned());
        level = next;
    }
    all.sort();
    all.dedup();
    Ok(all)
}

pub fn density_probe(v: &Rational, depth: u32) -> Result<DensityReport> {
    let pts = density_points(v, depth)?;
    let mut prev = Rational::zero();
    let mut max_gap = Rational::zero();
    for p in pts.iter().chain(std::iter::once(&Rational::one())) {
        let gap = p - &prev;
        if gap > max_gap {
            max_gap = gap;
        }
        prev = p.clone();
    }
    Ok(DensityReport {
        v: v.clone(),
        depth,
        points: pts.len(),
        max_gap_approx: max_gap.to_f64(),
        max_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tent::{address_to_point, skew_tent, tent};

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn step_examples() {
        let h = ConjugacyIterate::iterate(r("1/2"), 3).unwrap();
        assert!(h.breakpoints().all(|(x, y)| x == y));
        let h1 = ConjugacyIterate::iterate(r("1/4"), 1).unwrap();
        assert_eq!(h1.ordinates(), vec![r("0"), r("1/4"), r("1")]);
        let h2 = h1.step().unwrap();
        assert_eq!(h2.eval(&r("1/4")).unwrap(), r("1/16"));
        assert_eq!(h2.eval(&r("1/2")).unwrap(), r("1/4"));
    }

    #[test]
    fn conjugate_point_examples() {
        let v = r("1/3");
        let w = |s: &str| s.parse::<BinaryWord>().unwrap();
        assert_eq!(conjugate_point(&w("1"), &v).unwrap(), r("1"));
        assert_eq!(conjugate_point(&w("01"), &v).unwrap(), v);
        assert_eq!(conjugate_point(&w("001"), &v).unwrap(), r("1/9"));
    }

    #[test]
    fn addresses_and_semiconjugacy() {
        for v in ["1/4", "1/3", "7/10"] {
            let v = r(v);
            let h = ConjugacyIterate::iterate(v.clone(), 8).unwrap();
            let p = SkewTentParams::new(v.clone()).unwrap();
            for w in BinaryWord::all_up_to(8) {
                let x = address_to_point(&w.reversed(), &r("0"), &MapSystem::Tent).unwrap();
                assert_eq!(conjugate_point(&w, &v).unwrap(), h.eval(&x).unwrap(), "w={w}");
            }
            for (x, y) in h.breakpoints().step_by(2) {
                let lhs = skew_tent(&y, &p).unwrap();
                let rhs = h.eval(&tent(&x).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "x={x}");
            }
        }
    }

    #[test]
    fn length_examples() {
        let l0 = graph_length(0, &r("1/4"), Mode::Explicit).unwrap();
        assert!((l0.length - 2f64.sqrt()).abs() < 1e-15);
        let l1 = graph_length(1, &r("1/4"), Mode::Aggregate).unwrap();
        let want = (5f64.sqrt() + 13f64.sqrt()) / 4.0;
        assert!((l1.length - want).abs() < 1e-14, "{}", l1.length);
        let half = graph_length(5, &r("1/2"), Mode::Aggregate).unwrap();
        assert!((half.length - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn modes_agree() {
        for v in ["1/4", "1/3", "7/10"] {
            for n in 0..=10 {
                let a = graph_length(n, &r(v), Mode::Aggregate).unwrap();
                let e = graph_length(n, &r(v), Mode::Explicit).unwrap();
                assert!((a.length - e.length).abs() <= 1e-12 * e.length, "v={v} n={n}");
            }
        }
    }

    #[test]
    fn slope_measure_examples() {
        let m = |n, v, t, mode| slope_measure(n, &r(v), &r(t), mode).unwrap().measure;
        assert_eq!(m(7, "1/2", "1", Mode::Aggregate), r("1"));
        assert_eq!(m(1, "1/4", "1", Mode::Aggregate), r("1/2"));
        // slopes 1/4, 3/4, 3/4, 9/4
        assert_eq!(m(2, "1/4", "1", Mode::Explicit), r("1/4"));
        assert_eq!(m(2, "1/4", "1", Mode::Aggregate), r("1/4"));
        assert_eq!(m(3, "1/4", "0", Mode::Aggregate), r("1"));
        assert_eq!(m(3, "1/4", "1000", Mode::Aggregate), r("0"));
        assert_eq!(m(3, "3/4", "1000", Mode::Aggregate), r("0"));
    }

    #[test]
    fn slope_profile_normalized() {
        let p = SlopeProfile::new(12, &r("7/10")).unwrap();
        assert_eq!(p.total_height(), r("1"));
        assert_eq!(p.piece_count(), BigUint::from(4096u32));
    }

    #[test]
    fn density_examples() {
        let d = density_probe(&r("1/2"), 3).unwrap();
        assert_eq!(d.max_gap, r("1/8"));
        let d = density_probe(&r("1/4"), 1).unwrap();
        assert_eq!(d.points, 2);
        assert_eq!(d.max_gap, r("3/4"));
        let d7 = density_probe(&r("1/4"), 7).unwrap();
        let d8 = density_probe(&r("1/4"), 8).unwrap();
        assert!(d8.max_gap < d7.max_gap);
    }

    #[test]
    fn binomials() {
        let row = binomial_row(5);
        let want: Vec<BigUint> = [1u32, 5, 10, 10, 5, 1].iter().map(|&c| BigUint::from(c)).collect();
        assert_eq!(row, want);
        assert!((ln_big(&(BigUint::one() << 3000u32)) - 3000.0 * std::f64::consts::LN_2).abs() < 1e-9);
    }
}
