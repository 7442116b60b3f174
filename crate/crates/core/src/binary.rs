//! Eventually periodic binary expansions of numbers in `[0, 1]`.
//!
//! Canonical form: the period is primitive and never all ones, and the
//! preperiod cannot be shortened by rotating its last digit into the period.
//! Terminating expansions carry the period `[0]`. The value `1` has no
//! expansion in this form; [`UnitInterval::One`] stands in for it.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryExpansion {
    preperiod: Vec<u8>,
    period: Vec<u8>,
}

/// A point of `[0, 1]` in digit form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum UnitInterval {
    Interior(BinaryExpansion),
    One,
}

impl BinaryExpansion {
    /// Validating constructor: rejects anything not already canonical.
    pub fn new(preperiod: Vec<u8>, period: Vec<u8>) -> Result<Self> {
        let b = BinaryExpansion { preperiod, period };
        b.validate()?;
        Ok(b)
    }

    /// Accepts any well-formed digit string, canonical or not: binary digits,
    /// a nonempty period, and a period that is not all ones.
    pub fn from_digits(preperiod: Vec<u8>, period: Vec<u8>) -> Result<Self> {
        let b = BinaryExpansion { preperiod, period };
        b.validate_digits()?;
        Ok(b)
    }

    pub fn zero() -> Self {
        BinaryExpansion {
            preperiod: Vec::new(),
            period: vec![0],
        }
    }

    pub fn preperiod(&self) -> &[u8] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    pub fn is_terminating(&self) -> bool {
        self.period == [0]
    }

    /// Digit `i` (0-based) of the infinite expansion.
    pub fn digit(&self, i: usize) -> u8 {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    fn validate_digits(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidExpansion(format!("{self}: {m}")));
        if self.period.is_empty() {
            return bad("empty period");
        }
        if self.preperiod.iter().any(|&d| d > 1) || self.period.iter().any(|&d| d > 1) {
            return bad("digits must be 0 or 1");
        }
        if self.period.iter().all(|&d| d == 1) {
            return bad("all-ones period");
        }
        Ok(())
    }

    /// Checks the canonical form: well formed, primitive period, minimal
    /// preperiod.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidExpansion(format!("{self}: {m}")));
        self.validate_digits()?;
        if primitive_period_len(&self.period) != self.period.len() {
            return bad("period is not primitive");
        }
        if self.preperiod.last().is_some_and(|d| d == self.period.last().unwrap()) {
            return bad("preperiod is not minimal");
        }
        Ok(())
    }

    pub fn is_canonical(&self) -> bool {
        self.validate().is_ok()
    }

    /// The canonical spelling of the same value.
    pub fn canonical(&self) -> BinaryExpansion {
        match UnitInterval::normalize(self.preperiod.clone(), self.period.clone()) {
            Ok(UnitInterval::Interior(b)) => b,
            _ => unreachable!("a period that is not all ones stays below 1"),
        }
    }

    /// Exact value as a reduced fraction.
    pub fn to_rational(&self) -> Rational {
        let pre = bits_to_uint(&self.preperiod);
        let per = bits_to_uint(&self.period);
        let l = self.period.len();
        let m = self.preperiod.len();
        // value = (pre * (2^l - 1) + per) / (2^m * (2^l - 1))
        let mersenne = (BigUint::one() << l) - BigUint::one();
        let numer = pre * &mersenne + per;
        let denom = mersenne << m;
        reduce(numer, denom)
    }
}

impl UnitInterval {
    /// Builds the canonical form of `0.pre(period)` from arbitrary digits.
    pub fn normalize(mut pre: Vec<u8>, mut period: Vec<u8>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidExpansion("empty period".into()));
        }
        if pre.iter().any(|&d| d > 1) || period.iter().any(|&d| d > 1) {
            return Err(Error::InvalidExpansion("digits must be 0 or 1".into()));
        }
        let p = primitive_period_len(&period);
        period.truncate(p);
        // 0.xa(ya) = 0.x(ay): absorb matching preperiod digits, then rotate once
        let l = period.len();
        let absorbed = pre
            .iter()
            .rev()
            .enumerate()
            .take_while(|(i, &d)| d == period[l - 1 - i % l])
            .count();
        pre.truncate(pre.len() - absorbed);
        period.rotate_right(absorbed % l);
        if period == [1] {
            // 0.x0(1) = 0.x1(0)
            match pre.iter().rposition(|&d| d == 0) {
                None => return Ok(UnitInterval::One),
                Some(i) => {
                    pre.truncate(i + 1);
                    pre[i] = 1;
                    period = vec![0];
                }
            }
        }
        Ok(UnitInterval::Interior(BinaryExpansion { preperiod: pre, period }))
    }

    pub fn from_rational(q: &Rational) -> Result<Self> {
        q.ensure_unit("x")?;
        if q.is_one() {
            Ok(UnitInterval::One)
        } else {
            rational_to_binary(q).map(UnitInterval::Interior)
        }
    }

    pub fn to_rational(&self) -> Rational {
        match self {
            UnitInterval::Interior(b) => b.to_rational(),
            UnitInterval::One => Rational::one(),
        }
    }

    /// Preperiod and period of the expansion, with `1` written as `0.(1)`.
    fn raw_digits(&self) -> (&[u8], &[u8]) {
        match self {
            UnitInterval::Interior(b) => (&b.preperiod, &b.period),
            UnitInterval::One => (&[], &[1]),
        }
    }
}

/// `q` in `[0, 1)` to its canonical expansion.
pub fn rational_to_binary(q: &Rational) -> Result<BinaryExpansion> {
    if q.is_negative() || !(q < &Rational::one()) {
        return Err(Error::Domain(format!("{q} is outside [0, 1)")));
    }
    let numer = q.numer().to_biguint().expect("nonnegative");
    let denom = q.denom().to_biguint().expect("positive");
    let twos = denom.trailing_zeros().unwrap_or(0) as usize;
    let odd = &denom >> twos;

    // The reduced fraction has preperiod exactly `twos` digits and a period
    // equal to the multiplicative order of 2 modulo the odd part.
    let (pre, rem) = long_division(&numer, &denom, twos);
    let period = if odd.is_one() {
        vec![0]
    } else {
        // rem / denom in lowest terms has denominator `odd` after the shift.
        let start = (rem >> twos) % &odd;
        periodic_digits(start, &odd)
    };
    let b = BinaryExpansion { preperiod: pre, period };
    Ok(b)
}

/// Exact value of any well-formed expansion; non-canonical spellings such
/// as `0.0(10)` are accepted.
pub fn binary_to_rational(b: &BinaryExpansion) -> Result<Rational> {
    b.validate_digits()?;
    Ok(b.to_rational())
}

/// Tent map on digits: drop the first digit, complementing the rest when it
/// was a one.
pub fn tent_digits(x: &UnitInterval) -> UnitInterval {
    let (pre, period) = x.raw_digits();
    let (first, mut pre, mut period): (u8, Vec<u8>, Vec<u8>) = if let Some((&d, rest)) = pre.split_first() {
        (d, rest.to_vec(), period.to_vec())
    } else {
        let mut p = period.to_vec();
        p.rotate_left(1);
        (period[0], Vec::new(), p)
    };
    if first == 1 {
        pre.iter_mut().chain(period.iter_mut()).for_each(|d| *d ^= 1);
    }
    UnitInterval::normalize(pre, period).expect("digits stay binary")
}

/// First `count` digits of `numer/denom` and the remainder left over.
fn long_division(numer: &BigUint, denom: &BigUint, count: usize) -> (Vec<u8>, BigUint) {
    let mut r = numer.clone();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        r <<= 1;
        if &r >= denom {
            r -= denom;
            out.push(1);
        } else {
            out.push(0);
        }
    }
    (out, r)
}

/// Digits of `start/odd` until the remainder returns to `start`.
fn periodic_digits(start: BigUint, odd: &BigUint) -> Vec<u8> {
    if let (Some(s), Some(m)) = (start.to_u64(), odd.to_u64()) {
        if m < (1 << 32) {
            return periodic_digits_chunked(s, m);
        }
        if m < (1 << 62) {
            let mut r = s;
            let mut out = Vec::new();
            loop {
                r <<= 1;
                if r >= m {
                    r -= m;
                    out.push(1);
                } else {
                    out.push(0);
                }
                if r == s {
                    return out;
                }
            }
        }
    }
    let mut r = start.clone();
    let mut out = Vec::new();
    loop {
        r <<= 1;
        if &r >= odd {
            r -= odd;
            out.push(1);
        } else {
            out.push(0);
        }
        if r == start {
            return out;
        }
    }
}

/// For `m < 2^32` coprime to `s`: the period is the order of 2 mod `m`, and
/// the digits come out `64 - bits(m)` at a time.
fn periodic_digits_chunked(s: u64, m: u64) -> Vec<u8> {
    let len = order_of_two(m) as usize;
    let c = 64 - (64 - m.leading_zeros());
    let mut out = Vec::with_capacity(len + c as usize);
    let mut r = s;
    if c >= 8 {
        // whole bytes of quotient, expanded through a table
        let c = c / 8 * 8;
        let bytes = (c / 8) as usize;
        let chunks = len.div_ceil(c as usize);
        out.resize(chunks * c as usize, 0);
        for chunk in out.chunks_exact_mut(c as usize) {
            let wide = r << c;
            let q = wide / m;
            r = wide % m;
            for (i, slot) in chunk.chunks_exact_mut(8).enumerate() {
                let byte = (q >> (8 * (bytes - 1 - i))) & 0xff;
                slot.copy_from_slice(&BYTE_DIGITS[byte as usize]);
            }
        }
        out.truncate(len);
        return out;
    }
    while out.len() < len {
        let wide = r << c;
        let q = wide / m;
        r = wide % m;
        out.extend((0..c).rev().map(|i| ((q >> i) & 1) as u8));
    }
    out.truncate(len);
    out
}

/// Each byte's binary digits, most significant first.
static BYTE_DIGITS: [[u8; 8]; 256] = {
    let mut t = [[0u8; 8]; 256];
    let mut b = 0;
    while b < 256 {
        let mut i = 0;
        while i < 8 {
            t[b][i] = ((b >> (7 - i)) & 1) as u8;
            i += 1;
        }
        b += 1;
    }
    t
};

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Multiplicative order of 2 modulo an odd `m > 1`.
fn order_of_two(m: u64) -> u64 {
    let phi: u64 = prime_factors(m).iter().map(|&(p, e)| p.pow(e - 1) * (p - 1)).product();
    let mut ord = phi;
    for (f, _) in prime_factors(phi) {
        while ord.is_multiple_of(f) && pow_mod(2, ord / f, m) == 1 {
            ord /= f;
        }
    }
    ord
}

fn bits_to_uint(bits: &[u8]) -> BigUint {
    // most significant digit first; pack 32 at a time from the low end
    let limbs = bits
        .rchunks(32)
        .map(|c| c.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32))
        .collect();
    BigUint::new(limbs)
}

/// Reduces `numer/denom`. Long periods give operands of tens of thousands
/// of bits whose reduced form is usually tiny, so the convergents of a
/// 126-bit approximation are tried first, each checked exactly; Euclid is
/// the fallback.
fn reduce(numer: BigUint, denom: BigUint) -> Rational {
    if let Some((p, q)) = small_ratio(&numer, &denom) {
        return Rational::from(BigRational::new_raw(BigInt::from(p), BigInt::from(q)));
    }
    let g = euclid_gcd(numer.clone(), denom.clone());
    let n = BigInt::from(numer / &g);
    let d = BigInt::from(denom / &g);
    Rational::from(BigRational::new_raw(n, d))
}

fn small_ratio(numer: &BigUint, denom: &BigUint) -> Option<(u64, u64)> {
    if numer.is_zero() {
        return Some((0, 1));
    }
    if numer > denom || denom.bits() < 128 {
        return None;
    }
    const SHIFT: u32 = 126;
    let mut x = ((numer << SHIFT) / denom).to_u128()?;
    let mut y = 1u128 << SHIFT;
    // candidates are screened modulo a prime before the exact check
    const P: u64 = 0xffff_ffff_ffff_ffc5;
    let (np, dp) = ((numer % P).to_u64()?, (denom % P).to_u64()?);
    let mulp = |a: u64, b: u64| (a as u128 * b as u128 % P as u128) as u64;
    // convergents h/k of x/y
    let (mut h0, mut h1, mut k0, mut k1) = (0u128, 1u128, 1u128, 0u128);
    std::mem::swap(&mut x, &mut y);
    while y != 0 {
        let a = x / y;
        (x, y) = (y, x % y);
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        // x/y started as 2^126/t, so h/k approximates denom/numer
        if h1 > u64::MAX as u128 || k1 > u64::MAX as u128 {
            return None;
        }
        let (h, k) = (h1 as u64, k1 as u64);
        if k != 0 && mulp(np, h % P) == mulp(dp, k % P) && numer * h == denom * k {
            return Some((k, h));
        }
    }
    None
}

fn euclid_gcd(mut a: BigUint, mut b: BigUint) -> BigUint {
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

/// Length of the shortest block whose repetition gives `s`. The periods of
/// `s` that divide its length are closed under gcd, so it suffices to strip
/// prime factors while the shorter rotation still matches.
fn primitive_period_len(s: &[u8]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let mut d = n;
    for (f, _) in prime_factors(n as u64) {
        let f = f as usize;
        while d.is_multiple_of(f) && s[..n - d / f] == s[d / f..] {
            d /= f;
        }
    }
    d
}

fn write_bits(f: &mut fmt::Formatter<'_>, bits: &[u8]) -> fmt::Result {
    for &b in bits {
        f.write_str(if b == 1 { "1" } else { "0" })?;
    }
    Ok(())
}

impl fmt::Display for BinaryExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("0.")?;
        write_bits(f, &self.preperiod)?;
        f.write_str("(")?;
        write_bits(f, &self.period)?;
        f.write_str(")")
    }
}

impl fmt::Debug for BinaryExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for UnitInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitInterval::Interior(b) => b.fmt(f),
            UnitInterval::One => f.write_str("1"),
        }
    }
}

fn parse_bits(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::Parse(format!("bad binary digit {c:?}"))),
        })
        .collect()
}

impl FromStr for BinaryExpansion {
    type Err = Error;

    /// Parses `0.pre(period)`; see [`BinaryExpansion::canonical`] for the
    /// canonical spelling.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed expansion {s:?}, expected 0.pre(period)"));
        let body = s.trim().strip_prefix("0.").ok_or_else(bad)?;
        let (pre, rest) = body.split_once('(').ok_or_else(bad)?;
        let period = rest.strip_suffix(')').ok_or_else(bad)?;
        BinaryExpansion::from_digits(parse_bits(pre)?, parse_bits(period)?)
    }
}

impl Serialize for BinaryExpansion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BinaryExpansion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn b(s: &str) -> BinaryExpansion {
        s.parse().unwrap()
    }

    #[test]
    fn rational_to_binary_examples() {
        assert_eq!(rational_to_binary(&r("2/3")).unwrap(), b("0.(10)"));
        assert_eq!(rational_to_binary(&r("1/3")).unwrap(), b("0.(01)"));
        assert_eq!(rational_to_binary(&r("1/2")).unwrap(), b("0.1(0)"));
        assert_eq!(rational_to_binary(&r("0")).unwrap(), b("0.(0)"));
        assert_eq!(rational_to_binary(&r("5/12")).unwrap(), b("0.01(10)"));
    }

    #[test]
    fn rational_to_binary_rejects_out_of_range() {
        assert!(rational_to_binary(&r("1")).is_err());
        assert!(rational_to_binary(&r("-1/3")).is_err());
        assert!(rational_to_binary(&r("3/2")).is_err());
    }

    #[test]
    fn binary_to_rational_examples() {
        assert_eq!(binary_to_rational(&b("0.0(10)")).unwrap(), r("1/3"));
        assert_eq!(binary_to_rational(&b("0.(0)")).unwrap(), r("0"));
        // 1/2 + (1/2)(1/3) = 2/3, by the geometric series.
        let v = BinaryExpansion {
            preperiod: vec![1],
            period: vec![0, 1],
        };
        assert_eq!(v.to_rational(), r("2/3"));
        assert_eq!(binary_to_rational(&v).unwrap(), r("2/3"));
        // neither spelling is canonical
        assert!(!v.is_canonical());
        assert_eq!(v.canonical(), b("0.(10)"));
        assert_eq!(b("0.0(10)").canonical(), b("0.(01)"));
        assert!(binary_to_rational(&b("0.(0)")).is_ok());
        assert!("0.(11)".parse::<BinaryExpansion>().is_err());
    }

    #[test]
    fn invalid_expansions_rejected() {
        assert!(BinaryExpansion::new(vec![0], vec![1]).is_err());
        assert!(BinaryExpansion::new(vec![], vec![1, 0, 1, 0]).is_err());
        assert!(BinaryExpansion::new(vec![0], vec![1, 0]).is_err());
        assert!(BinaryExpansion::new(vec![], vec![]).is_err());
        assert!(BinaryExpansion::new(vec![2], vec![0]).is_err());
        assert!("0.1(01".parse::<BinaryExpansion>().is_err());
    }

    #[test]
    fn normalize_resolves_trailing_ones() {
        let x = UnitInterval::normalize(vec![0, 1], vec![1, 1]).unwrap();
        assert_eq!(x, UnitInterval::Interior(b("0.1(0)")));
        assert_eq!(UnitInterval::normalize(vec![1, 1], vec![1]).unwrap(), UnitInterval::One);
        let y = UnitInterval::normalize(vec![1, 0, 1, 0], vec![1, 0, 1, 0]).unwrap();
        assert_eq!(y, UnitInterval::Interior(b("0.(10)")));
    }

    #[test]
    fn tent_digit_examples() {
        let t = |s: &str| tent_digits(&UnitInterval::Interior(b(s)));
        assert_eq!(t("0.(10)"), UnitInterval::Interior(b("0.(10)")));
        assert_eq!(t("0.01(0)"), UnitInterval::Interior(b("0.1(0)")));
        assert_eq!(t("0.11(0)"), UnitInterval::Interior(b("0.1(0)")));
        assert_eq!(t("0.1(0)"), UnitInterval::One);
        assert_eq!(
            tent_digits(&UnitInterval::One),
            UnitInterval::Interior(BinaryExpansion::zero())
        );
    }

    #[test]
    fn long_period_round_trip() {
        // ord_999983(2) is large; exercises the Euclid reduction path.
        let q = r("123457/999983");
        let e = rational_to_binary(&q).unwrap();
        assert!(e.period().len() > 1000);
        assert_eq!(binary_to_rational(&e).unwrap(), q);
    }

    #[test]
    fn chunked_digits_match_bitwise() {
        for m in (3u64..400).step_by(2) {
            for s in 1..m.min(40) {
                if num_integer::gcd(s, m) != 1 {
                    continue;
                }
                let mut r = s;
                let mut slow = Vec::new();
                loop {
                    r <<= 1;
                    slow.push(u8::from(r >= m));
                    if r >= m {
                        r -= m;
                    }
                    if r == s {
                        break;
                    }
                }
                assert_eq!(periodic_digits_chunked(s, m), slow, "{s}/{m}");
            }
        }
        assert_eq!(order_of_two(999983), 499991);
    }

    #[test]
    fn display_round_trip() {
        let e = b("0.1(01)");
        assert_eq!(e.to_string(), "0.1(01)");
        assert_eq!(serde_json::to_string(&e).unwrap(), "\"0.1(01)\"");
    }
}
