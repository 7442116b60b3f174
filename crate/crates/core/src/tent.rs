//! The tent map, skew tent maps, their inverse branches, and the preimage
//! sets `A_n = f^{-n}(0)`, `B_n = f^{-n}(2/3)` and `F_n = A_n ∪ B_n`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits;
use crate::rational::Rational;
use crate::word::BinaryWord;

/// `f(x) = 1 - |2x - 1|`.
pub fn tent(x: &Rational) -> Result<Rational> {
    x.ensure_unit("x")?;
    Ok(tent_unchecked(x))
}

/// Tent map without the domain check, for callers that already hold a point
/// of `[0, 1]`.
pub fn tent_unchecked(x: &Rational) -> Rational {
    let two = Rational::from(2);
    if x < &Rational::half() {
        &two * x
    } else {
        &two - &two * x
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SkewTentParams {
    v: Rational,
}

impl SkewTentParams {
    pub fn new(v: Rational) -> Result<Self> {
        if v.is_negative() || v.is_zero() || v >= Rational::one() {
            return Err(Error::Domain(format!("skew vertex v = {v} must lie in (0, 1)")));
        }
        Ok(SkewTentParams { v })
    }

    pub fn v(&self) -> &Rational {
        &self.v
    }
}

/// `x/v` on `[0, v]`, `(1-x)/(1-v)` on `(v, 1]`.
pub fn skew_tent(x: &Rational, p: &SkewTentParams) -> Result<Rational> {
    x.ensure_unit("x")?;
    let v = p.v();
    Ok(if x <= v {
        x / v
    } else {
        (Rational::one() - x) / (Rational::one() - v)
    })
}

/// Which interval map an address or inverse branch refers to.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MapSystem {
    Tent,
    Skew(SkewTentParams),
}

impl MapSystem {
    pub fn apply(&self, x: &Rational) -> Result<Rational> {
        match self {
            MapSystem::Tent => tent(x),
            MapSystem::Skew(p) => skew_tent(x, p),
        }
    }

    /// Inverse branch without the domain check.
    pub fn pull(&self, bit: u8, y: &Rational) -> Rational {
        match (self, bit) {
            (MapSystem::Tent, 0) => y / Rational::from(2),
            (MapSystem::Tent, _) => Rational::one() - y / Rational::from(2),
            (MapSystem::Skew(p), 0) => p.v() * y,
            (MapSystem::Skew(p), _) => Rational::one() - (Rational::one() - p.v()) * y,
        }
    }
}

/// `φ_i^{-1}(y)` for the tent map (`y/2`, `1 - y/2`) or `γ_i^{-1}(y)` for a
/// skew tent (`v y`, `1 - (1-v) y`).
pub fn inverse_branch(bit: u8, y: &Rational, system: &MapSystem) -> Result<Rational> {
    if bit > 1 {
        return Err(Error::Domain(format!("branch index {bit} is not a bit")));
    }
    y.ensure_unit("y")?;
    Ok(system.pull(bit, y))
}

/// Pulls `base` back along `word`, first letter innermost:
/// `φ_{j_m}^{-1}(… φ_{j_1}^{-1}(base) …)`.
pub fn address_to_point(word: &BinaryWord, base: &Rational, system: &MapSystem) -> Result<Rational> {
    base.ensure_unit("base")?;
    Ok(word.bits().iter().fold(base.clone(), |y, &b| system.pull(b, &y)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PreimageKind {
    A,
    B,
    F,
}

impl PreimageKind {
    /// The targets whose preimages this kind collects.
    pub fn targets(self) -> Vec<Rational> {
        match self {
            PreimageKind::A => vec![Rational::zero()],
            PreimageKind::B => vec![Rational::two_thirds()],
            PreimageKind::F => vec![Rational::zero(), Rational::two_thirds()],
        }
    }

    pub fn expected_len(self, n: u32) -> usize {
        let h = 1usize << (n - 1);
        match self {
            PreimageKind::A => h + 1,
            PreimageKind::B => 2 * h,
            PreimageKind::F => 3 * h + 1,
        }
    }
}

impl fmt::Display for PreimageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PreimageKind::A => "A",
            PreimageKind::B => "B",
            PreimageKind::F => "F",
        })
    }
}

impl FromStr for PreimageKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(PreimageKind::A),
            "B" | "b" => Ok(PreimageKind::B),
            "F" | "f" => Ok(PreimageKind::F),
            _ => Err(Error::Parse(format!("unknown preimage kind {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreimageMethod {
    Iterated,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreimageSet {
    pub n: u32,
    pub kind: PreimageKind,
    pub points: Vec<Rational>,
}

impl PreimageSet {
    pub fn contains(&self, x: &Rational) -> bool {
        self.points.binary_search(x).is_ok()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub fn preimage_set(n: u32, kind: PreimageKind, method: PreimageMethod) -> Result<PreimageSet> {
    if n == 0 {
        return Err(Error::Domain("preimage depth must be at least 1".into()));
    }
    limits::check(n, limits::PREIMAGE_DEPTH)?;
    let points = match method {
        PreimageMethod::Iterated => iterated(n, &kind.targets()),
        PreimageMethod::ClosedForm => closed_form(n, kind),
    };
    debug_assert_eq!(points.len(), kind.expected_len(n));
    Ok(PreimageSet { n, kind, points })
}

/// `A_n` as a sorted vector, `{k / 2^{n-1} : 0 <= k <= 2^{n-1}}`.
pub fn a_points(n: u32) -> Vec<Rational> {
    closed_form(n, PreimageKind::A)
}

pub fn f_points(n: u32) -> Vec<Rational> {
    closed_form(n, PreimageKind::F)
}

fn iterated(n: u32, targets: &[Rational]) -> Vec<Rational> {
    let mut level: BTreeSet<Rational> = targets.iter().cloned().collect();
    for _ in 0..n {
        level = level
            .iter()
            .flat_map(|y| [MapSystem::Tent.pull(0, y), MapSystem::Tent.pull(1, y)])
            .collect();
    }
    level.into_iter().collect()
}

fn closed_form(n: u32, kind: PreimageKind) -> Vec<Rational> {
    let e = n - 1;
    let h: u64 = 1 << e;
    // (k + κ) / 2^{n-1} = (3k + 3κ) / (3 · 2^{n-1})
    let kappas: &[u64] = match kind {
        PreimageKind::A => &[0],
        PreimageKind::B => &[1, 2],
        PreimageKind::F => &[0, 1, 2],
    };
    let denom = 3 * h;
    let mut out: Vec<Rational> = (0..h)
        .flat_map(|k| kappas.iter().map(move |&c| 3 * k + c))
        .map(|num| Rational::new(num, denom).expect("nonzero"))
        .collect();
    if kind != PreimageKind::B {
        out.push(Rational::one());
    }
    out
}
