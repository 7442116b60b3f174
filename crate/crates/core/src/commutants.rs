//! Finite maps `ψ: A_n -> [0, 1]` that commute with the tent map on `A_n`.
//!
//! Such a map is encoded by a base bit `i0` (which fixed point `ψ(0)` is)
//! together with a word map `ψ̃` sending each address of a point of `A_n` to
//! an address of its image. Addresses are not unique (`φ_0^{-1}(1) =
//! φ_1^{-1}(1) = 1/2`), so the encoding is many-to-one and some encodings are
//! inconsistent; [`psi_from_pair`] reports the latter as
//! [`Error::AddressConflict`].
//!
//! The ground truth for "how many commuting maps are there" is the
//! exhaustive search in [`brute_force_commuting`]. [`audit_counts`] puts it
//! next to the closed formula, the recursion and the extension count.

use std::collections::{BTreeMap, BTreeSet};
use std::thread;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits;
use crate::rational::Rational;
use crate::tent::{a_points, address_to_point, f_points, tent_unchecked, MapSystem};
use crate::word::BinaryWord;

/// A map on `A_n` commuting with the tent map.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawTable")]
pub struct CommutingTable {
    n: u32,
    x0: Rational,
    values: BTreeMap<Rational, Rational>,
}

#[derive(Deserialize)]
struct RawTable {
    n: u32,
    #[allow(dead_code)]
    x0: Rational,
    values: BTreeMap<Rational, Rational>,
}

impl TryFrom<RawTable> for CommutingTable {
    type Error = Error;

    fn try_from(raw: RawTable) -> Result<Self> {
        let t = CommutingTable::new(raw.n, raw.values)?;
        if t.x0 != raw.x0 {
            return Err(Error::InvalidTable(format!("x0 {} disagrees with value at 0", raw.x0)));
        }
        Ok(t)
    }
}

impl CommutingTable {
    /// Validates every table invariant: the domain is exactly `A_n`, `ψ(0)`
    /// is a fixed point, `f∘ψ = ψ∘f` on `A_n`, and the values lie in
    /// `f^{-n}(ψ(0))`.
    pub fn new(n: u32, values: BTreeMap<Rational, Rational>) -> Result<Self> {
        let t = Self::new_unchecked(n, values)?;
        t.validate()?;
        Ok(t)
    }

    pub(crate) fn new_unchecked(n: u32, values: BTreeMap<Rational, Rational>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTable("depth must be at least 1".into()));
        }
        let x0 = values
            .get(&Rational::zero())
            .cloned()
            .ok_or_else(|| Error::InvalidTable("no value at 0".into()))?;
        Ok(CommutingTable { n, x0, values })
    }

    /// Constant table on `A_n` (valid only for the fixed points 0 and 2/3).
    pub fn constant(n: u32, c: Rational) -> Result<Self> {
        let values = a_points(n).into_iter().map(|x| (x, c.clone())).collect();
        Self::new(n, values)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn x0(&self) -> &Rational {
        &self.x0
    }

    pub fn values(&self) -> &BTreeMap<Rational, Rational> {
        &self.values
    }

    pub fn get(&self, x: &Rational) -> Option<&Rational> {
        self.values.get(x)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidTable(m));
        let domain: Vec<&Rational> = self.values.keys().collect();
        let a = a_points(self.n);
        if domain.len() != a.len() || domain.iter().zip(&a).any(|(x, y)| *x != y) {
            return bad(format!("domain is not A_{}", self.n));
        }
        if !(self.x0.is_zero() || self.x0 == Rational::two_thirds()) {
            return bad(format!("psi(0) = {} is not a fixed point", self.x0));
        }
        for (x, y) in &self.values {
            if !y.in_unit_interval() {
                return bad(format!("value {y} at {x} outside [0, 1]"));
            }
        }
        let failures = self.commutation_failures();
        if let Some(x) = failures.first() {
            return bad(format!("f(psi({x})) != psi(f({x}))"));
        }
        let target = &self.x0;
        for (x, y) in &self.values {
            let mut z = y.clone();
            for _ in 0..self.n {
                z = tent_unchecked(&z);
            }
            if &z != target {
                return bad(format!("value {y} at {x} is not in f^-{}({target})", self.n));
            }
        }
        Ok(())
    }

    /// Points `x` of `A_n` with `f(ψ(x)) != ψ(f(x))`.
    pub fn commutation_failures(&self) -> Vec<Rational> {
        self.values
            .iter()
            .filter(|(x, y)| {
                let fx = tent_unchecked(x);
                y.in_unit_interval() && self.values.get(&fx) != Some(&tent_unchecked(y))
            })
            .map(|(x, _)| x.clone())
            .collect()
    }

    pub fn commutes(&self) -> bool {
        self.commutation_failures().is_empty()
    }

    /// Restriction to `A_m`, `1 <= m <= n`.
    pub fn restrict(&self, m: u32) -> Result<CommutingTable> {
        if m == 0 || m > self.n {
            return Err(Error::Domain(format!("cannot restrict depth {} to {m}", self.n)));
        }
        let values = a_points(m)
            .into_iter()
            .map(|x| {
                let y = self.values[&x].clone();
                (x, y)
            })
            .collect();
        CommutingTable::new(m, values)
    }
}

/// Base bit and word map of a commuting table.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PsiTilde {
    pub n: u32,
    pub i0: u8,
    pub table: BTreeMap<BinaryWord, BinaryWord>,
}

impl PsiTilde {
    /// `ψ(0)`: 0 for `i0 = 0`, 2/3 for `i0 = 1` (the fixed point of `φ_1^{-1}`).
    pub fn x0(&self) -> Rational {
        if self.i0 == 0 {
            Rational::zero()
        } else {
            Rational::two_thirds()
        }
    }

    /// Builds the word map whose every non-all-zero word `w` extends
    /// `ψ̃(prefix)` by bit `choice(w)`; all-zero words map to `i0` repeated.
    pub fn from_choices(n: u32, i0: u8, mut choice: impl FnMut(&BinaryWord) -> u8) -> PsiTilde {
        let mut table: BTreeMap<BinaryWord, BinaryWord> = BTreeMap::new();
        for w in BinaryWord::all_up_to(n as usize) {
            let bit = if w.bits().iter().all(|&b| b == 0) {
                i0
            } else {
                choice(&w)
            };
            let image = match w.prefix(w.len() - 1) {
                Some(p) => table[&p].push(bit),
                None => BinaryWord::new(vec![bit]).expect("bit"),
            };
            table.insert(w, image);
        }
        PsiTilde { n, i0, table }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PsiProperty {
    /// every word of length `1..=n` has an image
    Coverage,
    /// `|ψ̃(w)| = |w|`
    LengthPreserving,
    /// `ψ̃(w[..m-1])` is a prefix of `ψ̃(w)`
    PrefixConsistent,
    /// leading zeros of `w` map to leading `i0`s
    LeadingZeros,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiViolation {
    pub property: PsiProperty,
    pub word: BinaryWord,
    pub detail: String,
}

pub fn check_psi_tilde(pt: &PsiTilde) -> Vec<PsiViolation> {
    let mut out = Vec::new();
    let mut push = |property, word: &BinaryWord, detail: String| {
        out.push(PsiViolation {
            property,
            word: word.clone(),
            detail,
        })
    };
    if pt.i0 > 1 {
        push(
            PsiProperty::LeadingZeros,
            &BinaryWord::zeros(1),
            format!("base bit {} is not 0 or 1", pt.i0),
        );
    }
    for w in BinaryWord::all_up_to(pt.n as usize) {
        if !pt.table.contains_key(&w) {
            push(PsiProperty::Coverage, &w, "no image".into());
        }
    }
    for (w, img) in &pt.table {
        if w.len() > pt.n as usize {
            push(PsiProperty::Coverage, w, format!("word longer than depth {}", pt.n));
        }
        if img.len() != w.len() {
            push(
                PsiProperty::LengthPreserving,
                w,
                format!("image {img} has length {}", img.len()),
            );
        }
        if let Some(p) = w.prefix(w.len() - 1) {
            if let Some(pimg) = pt.table.get(&p) {
                if !pimg.is_prefix_of(img) {
                    push(
                        PsiProperty::PrefixConsistent,
                        w,
                        format!("image {img} does not extend image {pimg} of {p}"),
                    );
                }
            }
        }
        let lead = w.bits().iter().take_while(|&&b| b == 0).count();
        if img.bits().iter().take(lead).any(|&b| b != pt.i0) {
            push(
                PsiProperty::LeadingZeros,
                w,
                format!("image {img} does not start with {lead} copies of {}", pt.i0),
            );
        }
    }
    out
}

/// Table induced by an encoding: `ψ(addr(w, 0)) = addr(ψ̃(w), x0)` for every
/// word `w` of length `1..=n`, plus `ψ(0) = x0`.
pub fn psi_from_pair(pt: &PsiTilde) -> Result<CommutingTable> {
    let violations = check_psi_tilde(pt);
    if let Some(v) = violations.first() {
        return Err(Error::Malformed(format!(
            "{} violation(s), first at {}: {}",
            violations.len(),
            v.word,
            v.detail
        )));
    }
    let tent = MapSystem::Tent;
    let x0 = pt.x0();
    let zero = Rational::zero();
    let mut values: BTreeMap<Rational, (Rational, Option<BinaryWord>)> = BTreeMap::new();
    values.insert(zero.clone(), (x0.clone(), None));
    for (w, img) in &pt.table {
        let x = address_to_point(w, &zero, &tent)?;
        let y = address_to_point(img, &x0, &tent)?;
        match values.get(&x) {
            Some((prev, _)) if *prev == y => {}
            Some((prev, prev_word)) => {
                return Err(Error::AddressConflict {
                    point: x.to_string(),
                    first: prev_word.as_ref().map_or("()".into(), |w| w.to_string()),
                    second: w.to_string(),
                    first_value: prev.to_string(),
                    second_value: y.to_string(),
                })
            }
            None => {
                values.insert(x, (y, Some(w.clone())));
            }
        }
    }
    let values = values.into_iter().map(|(x, (y, _))| (x, y)).collect();
    CommutingTable::new(pt.n, values)
}

/// Canonical encoding of a table: each word's image extends its prefix's
/// image by the smallest bit that lands on the required value.
pub fn pair_from_psi(t: &CommutingTable) -> Result<PsiTilde> {
    let tent = MapSystem::Tent;
    let zero = Rational::zero();
    let i0 = if t.x0.is_zero() { 0 } else { 1 };
    let x0 = t.x0.clone();
    let mut err = None;
    let pt = PsiTilde::from_choices(t.n, i0, |w| {
        // image of the prefix addresses ψ(f(x)); pick the branch reaching ψ(x)
        let x = address_to_point(w, &zero, &tent).expect("unit base");
        let fx_value = match w.prefix(w.len() - 1) {
            Some(p) => t.values[&address_to_point(&p, &zero, &tent).expect("unit base")].clone(),
            None => x0.clone(),
        };
        let want = &t.values[&x];
        match (0..2u8).find(|&b| tent.pull(b, &fx_value) == *want) {
            Some(b) => b,
            None => {
                err.get_or_insert_with(|| Error::InvalidTable(format!("value {want} at {x} is not a preimage")));
                0
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(pt),
    }
}

/// Every encoding of depth `n` satisfying the three structural properties.
/// There are `2 · 2^(2^(n+1) - n - 2)` of them.
pub fn all_psi_tilde(n: u32) -> Result<Vec<PsiTilde>> {
    limits::check(n, limits::BRUTE_FORCE_FULL_DEPTH)?;
    let free: Vec<BinaryWord> = BinaryWord::all_up_to(n as usize)
        .filter(|w| w.bits().contains(&1))
        .collect();
    let mut out = Vec::new();
    for i0 in 0..2u8 {
        for mask in 0..1u64 << free.len() {
            out.push(PsiTilde::from_choices(n, i0, |w| {
                let i = free.binary_search(w).expect("free word");
                ((mask >> i) & 1) as u8
            }));
        }
    }
    Ok(out)
}

/// Fixed-point filter for [`brute_force_commuting`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum X0Filter {
    Any,
    Only(Rational),
}

impl X0Filter {
    fn admits(&self, x0: &Rational) -> bool {
        match self {
            X0Filter::Any => true,
            X0Filter::Only(v) => v == x0,
        }
    }
}

/// Integer-indexed view of `A_n` and `F_n` with the tent map on both.
struct Indexed {
    a: Vec<Rational>,
    f: Vec<Rational>,
    /// `tent` on `A_n`, as indices into `a`
    fa: Vec<usize>,
    /// `tent` on `F_n`, as indices into `f`
    ff: Vec<usize>,
    /// preimages within `F_n` of each point of `F_n`
    pre: Vec<Vec<usize>>,
}

impl Indexed {
    fn new(n: u32) -> Self {
        let a = a_points(n);
        let f = f_points(n);
        let idx = |set: &[Rational], x: &Rational| set.binary_search(x).expect("closed under tent");
        let fa = a.iter().map(|x| idx(&a, &tent_unchecked(x))).collect();
        let ff: Vec<usize> = f.iter().map(|y| idx(&f, &tent_unchecked(y))).collect();
        let mut pre = vec![Vec::new(); f.len()];
        for (j, &t) in ff.iter().enumerate() {
            pre[t].push(j);
        }
        Indexed { a, f, fa, ff, pre }
    }

    fn to_table(&self, n: u32, assignment: &[usize]) -> CommutingTable {
        let values = self
            .a
            .iter()
            .zip(assignment)
            .map(|(x, &j)| (x.clone(), self.f[j].clone()))
            .collect();
        CommutingTable::new_unchecked(n, values).expect("value at 0")
    }

    fn commutes(&self, asg: &[usize]) -> bool {
        asg.iter().enumerate().all(|(i, &j)| self.ff[j] == asg[self.fa[i]])
    }

    /// Order of `A_n` in which `f(x)` always precedes `x`.
    fn causal_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.a.len()).collect();
        let depth = |i: usize| {
            let x = &self.a[i];
            if x.is_zero() {
                0
            } else {
                x.dyadic_exponent().expect("dyadic") + 1
            }
        };
        order.sort_by_key(|&i| (depth(i), i));
        order
    }
}

fn run_partitioned<T: Send>(workers: usize, parts: usize, job: impl Fn(usize) -> Vec<T> + Sync) -> Vec<T> {
    let workers = workers.max(1).min(parts.max(1));
    let job = &job;
    let mut chunks: Vec<(usize, Vec<T>)> = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| s.spawn(move || (w..parts).step_by(workers).map(|p| (p, job(p))).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    chunks.sort_by_key(|(p, _)| *p);
    chunks.into_iter().flat_map(|(_, v)| v).collect()
}

/// Full product search over `F_n^{A_n}`, filtered by commutation.
fn full_product(ix: &Indexed, workers: usize) -> Vec<Vec<usize>> {
    let d = ix.a.len();
    let c = ix.f.len();
    run_partitioned(workers, c, |first| {
        let mut out = Vec::new();
        let mut asg = vec![0usize; d];
        asg[0] = first;
        loop {
            if ix.commutes(&asg) {
                out.push(asg.clone());
            }
            // odometer over positions 1..d
            let mut i = d - 1;
            loop {
                if i == 0 {
                    return out;
                }
                asg[i] += 1;
                if asg[i] < c {
                    break;
                }
                asg[i] = 0;
                i -= 1;
            }
        }
    })
}

/// Depth-first search with `ψ(x) ∈ f^{-1}(ψ(f(x))) ∩ F_n`.
fn chain_search(ix: &Indexed, workers: usize, mut visit: impl FnMut(&[usize])) {
    let order = ix.causal_order();
    let fixed: Vec<usize> = (0..ix.f.len()).filter(|&j| ix.ff[j] == j).collect();

    fn dfs(ix: &Indexed, order: &[usize], pos: usize, asg: &mut [usize], out: &mut Vec<Vec<usize>>) {
        if pos == order.len() {
            out.push(asg.to_vec());
            return;
        }
        let i = order[pos];
        let target = asg[ix.fa[i]];
        for &j in &ix.pre[target] {
            asg[i] = j;
            dfs(ix, order, pos + 1, asg, out);
        }
    }

    // partition over (ψ(0), ψ(1)), the first two points of the order
    let seeds: Vec<(usize, usize)> = fixed
        .iter()
        .flat_map(|&z| ix.pre[z].iter().map(move |&o| (z, o)))
        .collect();
    let results = run_partitioned(workers, seeds.len(), |s| {
        let (z, o) = seeds[s];
        let mut asg = vec![usize::MAX; ix.a.len()];
        asg[order[0]] = z;
        asg[order[1]] = o;
        let mut out = Vec::new();
        dfs(ix, &order, 2, &mut asg, &mut out);
        out
    });
    for a in &results {
        visit(a);
    }
}

/// Every map `A_n -> F_n` commuting with the tent map, sorted.
///
/// Depth `n <= 3` enumerates the whole product space; larger depths (up to
/// 5) walk the preimage chains. Output is independent of `workers`.
pub fn brute_force_commuting(n: u32, filter: &X0Filter, workers: usize) -> Result<Vec<CommutingTable>> {
    if n == 0 {
        return Err(Error::Domain("depth must be at least 1".into()));
    }
    limits::check(n, limits::BRUTE_FORCE_DEPTH)?;
    let ix = Indexed::new(n);
    let assignments = if n <= limits::BRUTE_FORCE_FULL_DEPTH {
        full_product(&ix, workers)
    } else {
        let mut v = Vec::new();
        chain_search(&ix, workers, |a| v.push(a.to_vec()));
        v
    };
    let mut tables: Vec<CommutingTable> = assignments
        .iter()
        .map(|a| ix.to_table(n, a))
        .filter(|t| filter.admits(&t.x0))
        .collect();
    tables.sort();
    Ok(tables)
}

/// Number of commuting tables without materializing them.
pub fn brute_force_count(n: u32, workers: usize) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain("depth must be at least 1".into()));
    }
    limits::check(n, limits::BRUTE_FORCE_DEPTH)?;
    let ix = Indexed::new(n);
    if n <= limits::BRUTE_FORCE_FULL_DEPTH {
        return Ok(full_product(&ix, workers).len() as u64);
    }
    let mut count = 0u64;
    chain_search(&ix, workers, |_| count += 1);
    Ok(count)
}

/// `2^(3n-1) / (2^n - 1) · ∏_{k=1}^{n} (2^k - 1)`; the division is exact.
pub fn count_formula(n: u32) -> BigUint {
    assert!(n >= 1);
    let product: BigUint = (1..=n).map(|k| (BigUint::one() << k) - 1u32).product();
    let numer = (BigUint::one() << (3 * n - 1)) * product;
    let denom = (BigUint::one() << n) - 1u32;
    debug_assert!((&numer % &denom) == BigUint::from(0u32));
    numer / denom
}

/// `N(1) = 4`, `N(m+1) = 8 (2^m - 1) N(m)`.
pub fn count_recursion(n: u32) -> BigUint {
    assert!(n >= 1);
    (1..n).fold(BigUint::from(4u32), |acc, m| {
        acc * 8u32 * ((BigUint::one() << m) - 1u32)
    })
}

/// Count from extending each level independently: `N(1) = 4` and a factor
/// `2 · 4^(2^m - 1)` from depth `m` to `m + 1`.
pub fn count_extension(n: u32) -> BigUint {
    assert!(n >= 1);
    (1..n).fold(BigUint::from(4u32), |acc, m| {
        acc * 2u32 * (BigUint::one() << (2 * ((1usize << m) - 1)))
    })
}

mod big_number {
    use num_bigint::BigUint;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        let n: serde_json::Number = v.to_string().parse().map_err(serde::ser::Error::custom)?;
        serde::Serialize::serialize(&n, s)
    }

    pub mod opt {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(v) => super::serialize(v, s),
                None => s.serialize_none(),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountAudit {
    pub n: u32,
    #[serde(with = "big_number")]
    pub formula: BigUint,
    #[serde(with = "big_number")]
    pub recursion_8: BigUint,
    #[serde(with = "big_number")]
    pub extension_argument: BigUint,
    /// exhaustive count of commuting tables, when `n` is within reach
    #[serde(with = "big_number::opt")]
    pub brute_force: Option<BigUint>,
    /// structurally valid encodings, enumerated (small `n` only)
    #[serde(with = "big_number::opt")]
    pub encodings: Option<BigUint>,
    /// distinct tables produced by those encodings
    #[serde(with = "big_number::opt")]
    pub tables_from_encodings: Option<BigUint>,
    /// encodings rejected with an address conflict
    #[serde(with = "big_number::opt")]
    pub address_conflicts: Option<BigUint>,
    pub agree: bool,
    pub discrepancies: Vec<String>,
}

pub fn audit_counts(n: u32, workers: usize) -> Result<CountAudit> {
    if n == 0 {
        return Err(Error::Domain("depth must be at least 1".into()));
    }
    limits::check(n, limits::COUNT_AUDIT_DEPTH)?;
    let formula = count_formula(n);
    let recursion_8 = count_recursion(n);
    let extension_argument = count_extension(n);
    let brute_force = if n <= limits::bound(limits::BRUTE_FORCE_DEPTH) {
        Some(BigUint::from(brute_force_count(n, workers)?))
    } else {
        None
    };
    let (encodings, tables_from_encodings, address_conflicts) = if n <= limits::bound(limits::BRUTE_FORCE_FULL_DEPTH) {
        let pairs = all_psi_tilde(n)?;
        let mut tables = BTreeSet::new();
        let mut conflicts = 0u64;
        for p in &pairs {
            match psi_from_pair(p) {
                Ok(t) => {
                    tables.insert(t);
                }
                Err(Error::AddressConflict { .. }) => conflicts += 1,
                Err(e) => return Err(e),
            }
        }
        (
            Some(BigUint::from(pairs.len())),
            Some(BigUint::from(tables.len())),
            Some(BigUint::from(conflicts)),
        )
    } else {
        (None, None, None)
    };

    let mut named: Vec<(&str, &BigUint)> = vec![
        ("formula", &formula),
        ("recursion_8", &recursion_8),
        ("extension_argument", &extension_argument),
    ];
    if let Some(b) = &brute_force {
        named.push(("brute_force", b));
    }
    let discrepancies: Vec<String> = named
        .iter()
        .enumerate()
        .flat_map(|(i, a)| named[i + 1..].iter().map(move |b| (a, b)))
        .filter(|(a, b)| a.1 != b.1)
        .map(|(a, b)| format!("{} {} != {} {}", a.0, a.1, b.0, b.1))
        .collect();
    Ok(CountAudit {
        n,
        formula,
        recursion_8,
        extension_argument,
        brute_force,
        encodings,
        tables_from_encodings,
        address_conflicts,
        agree: discrepancies.is_empty(),
        discrepancies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn w(s: &str) -> BinaryWord {
        s.parse().unwrap()
    }

    fn table(n: u32, pairs: &[(&str, &str)]) -> CommutingTable {
        CommutingTable::new(n, pairs.iter().map(|(x, y)| (r(x), r(y))).collect()).unwrap()
    }

    fn pt(n: u32, i0: u8, pairs: &[(&str, &str)]) -> PsiTilde {
        PsiTilde {
            n,
            i0,
            table: pairs.iter().map(|(a, b)| (w(a), w(b))).collect(),
        }
    }

    #[test]
    fn psi_from_pair_examples() {
        let id = pt(1, 0, &[("0", "0"), ("1", "1")]);
        assert_eq!(psi_from_pair(&id).unwrap(), table(1, &[("0", "0"), ("1", "1")]));

        let p = pt(1, 1, &[("0", "1"), ("1", "0")]);
        assert_eq!(psi_from_pair(&p).unwrap(), table(1, &[("0", "2/3"), ("1", "1/3")]));

        let p = pt(
            2,
            0,
            &[
                ("0", "0"),
                ("1", "1"),
                ("00", "00"),
                ("01", "01"),
                ("10", "10"),
                ("11", "11"),
            ],
        );
        assert_eq!(
            psi_from_pair(&p).unwrap(),
            table(2, &[("0", "0"), ("1/2", "1/2"), ("1", "1")])
        );
    }

    #[test]
    fn psi_from_pair_conflict() {
        // (1,0) and (1,1) both address 1/2 but their images differ
        let p = pt(
            2,
            0,
            &[
                ("0", "0"),
                ("1", "0"),
                ("00", "00"),
                ("01", "01"),
                ("10", "00"),
                ("11", "01"),
            ],
        );
        assert!(check_psi_tilde(&p).is_empty());
        assert!(matches!(psi_from_pair(&p), Err(Error::AddressConflict { .. })));
    }

    #[test]
    fn psi_from_pair_rejects_invalid_encoding() {
        let p = pt(1, 0, &[("0", "1"), ("1", "1")]);
        assert!(matches!(psi_from_pair(&p), Err(Error::Malformed(_))));
    }

    #[test]
    fn pair_from_psi_examples() {
        let id = table(1, &[("0", "0"), ("1", "1")]);
        assert_eq!(pair_from_psi(&id).unwrap(), pt(1, 0, &[("0", "0"), ("1", "1")]));
        let z = table(1, &[("0", "0"), ("1", "0")]);
        assert_eq!(pair_from_psi(&z).unwrap(), pt(1, 0, &[("0", "0"), ("1", "0")]));
        let c = table(1, &[("0", "2/3"), ("1", "2/3")]);
        assert_eq!(pair_from_psi(&c).unwrap(), pt(1, 1, &[("0", "1"), ("1", "1")]));
    }

    #[test]
    fn check_psi_tilde_examples() {
        assert!(check_psi_tilde(&pt(1, 0, &[("0", "0"), ("1", "1")])).is_empty());

        let bad3 = pt(
            2,
            0,
            &[
                ("0", "0"),
                ("1", "1"),
                ("00", "00"),
                ("01", "10"),
                ("10", "10"),
                ("11", "11"),
            ],
        );
        let v = check_psi_tilde(&bad3);
        assert!(v
            .iter()
            .any(|v| v.property == PsiProperty::LeadingZeros && v.word == w("01")));

        let bad2 = pt(
            2,
            0,
            &[
                ("0", "0"),
                ("1", "1"),
                ("00", "00"),
                ("01", "01"),
                ("10", "01"),
                ("11", "11"),
            ],
        );
        let v = check_psi_tilde(&bad2);
        assert!(v
            .iter()
            .any(|v| v.property == PsiProperty::PrefixConsistent && v.word == w("10")));

        let short = pt(2, 0, &[("0", "0"), ("1", "10")]);
        let v = check_psi_tilde(&short);
        assert!(v.iter().any(|v| v.property == PsiProperty::Coverage));
        assert!(v.iter().any(|v| v.property == PsiProperty::LengthPreserving));
    }

    #[test]
    fn brute_force_small_depths() {
        let t1 = brute_force_commuting(1, &X0Filter::Any, 1).unwrap();
        assert_eq!(
            t1,
            vec![
                table(1, &[("0", "0"), ("1", "0")]),
                table(1, &[("0", "0"), ("1", "1")]),
                table(1, &[("0", "2/3"), ("1", "1/3")]),
                table(1, &[("0", "2/3"), ("1", "2/3")]),
            ]
        );
        let t2 = brute_force_commuting(2, &X0Filter::Any, 2).unwrap();
        assert_eq!(t2.len(), 7);
        assert_eq!(t2.iter().filter(|t| t.x0().is_zero()).count(), 3);
        let t2z = brute_force_commuting(2, &X0Filter::Only(r("0")), 1).unwrap();
        assert_eq!(t2z.len(), 3);
    }

    #[test]
    fn chain_search_matches_full_product() {
        for n in 1..=3 {
            let ix = Indexed::new(n);
            let mut full = full_product(&ix, 1);
            let mut chain = Vec::new();
            chain_search(&ix, 3, |a| chain.push(a.to_vec()));
            full.sort();
            chain.sort();
            assert_eq!(full, chain, "n={n}");
        }
    }

    #[test]
    fn formula_values() {
        assert_eq!(count_formula(1), BigUint::from(4u32));
        assert_eq!(count_formula(2), BigUint::from(32u32));
        assert_eq!(count_formula(3), BigUint::from(768u32));
        for n in 1..=10 {
            assert_eq!(count_formula(n), count_recursion(n), "n={n}");
        }
        assert_eq!(count_extension(2), BigUint::from(32u32));
        assert_eq!(count_extension(3), BigUint::from(4096u32));
    }

    #[test]
    fn encoding_enumeration_matches_extension_count() {
        for n in 1..=3 {
            assert_eq!(BigUint::from(all_psi_tilde(n).unwrap().len()), count_extension(n));
        }
    }

    #[test]
    fn table_json_shape() {
        let t = table(1, &[("0", "2/3"), ("1", "1/3")]);
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"n":1,"x0":"2/3","values":{"0/1":"2/3","1/1":"1/3"}}"#);
        assert_eq!(serde_json::from_str::<CommutingTable>(&s).unwrap(), t);
        let bad = r#"{"n":1,"x0":"0/1","values":{"0/1":"0/1","1/1":"1/2"}}"#;
        assert!(serde_json::from_str::<CommutingTable>(bad).is_err());
    }

    #[test]
    fn invalid_tables_rejected() {
        let mk = |n, pairs: &[(&str, &str)]| CommutingTable::new(n, pairs.iter().map(|(x, y)| (r(x), r(y))).collect());
        assert!(mk(1, &[("0", "1/2"), ("1", "1")]).is_err());
        assert!(mk(1, &[("0", "0")]).is_err());
        assert!(mk(2, &[("0", "0"), ("1/2", "0"), ("1", "1")]).is_err());
    }
}
