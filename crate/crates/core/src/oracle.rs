//! Brute-force censuses over small prime fields, used as ground truth for
//! the closed-form counts.
//!
//! "Monic" means graded-lex leading coefficient 1, one representative per
//! nonzero scalar class. The sieves work on dense coefficient vectors over a
//! fixed monomial basis sorted in graded-lex order, encoded as base-`p`
//! integers with the coefficient of basis element `i` as digit `i`. With
//! that encoding the monic polynomials whose leading monomial is basis
//! element `r` are exactly the codes `p^r .. 2 p^r`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::time::Instant;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qalg::{binom_b, divisors};

/// Maximum number of candidate coefficient vectors a census may enumerate.
pub const ENUM_BUDGET: u128 = 1 << 25;
/// Maximum number of factor pairs (or composition pairs) a sieve may form.
pub const SIEVE_BUDGET: u128 = 1 << 26;
/// Maximum `p^n` for the univariate census.
pub const UNIVARIATE_BUDGET: u128 = 1 << 20;

pub fn check_prime(p: u32) -> Result<()> {
    match p {
        2 | 3 | 5 => Ok(()),
        _ => Err(Error::UnsupportedPrime(p)),
    }
}

/// Exponent vector, ordered graded-lexicographically with `x_1 > x_2 > ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in `nu` variables over `F_p`, coefficients in `1..p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqMPoly {
    p: u32,
    nu: u32,
    terms: BTreeMap<Monomial, u32>,
}

impl FqMPoly {
    pub fn zero(p: u32, nu: u32) -> Result<Self> {
        check_prime(p)?;
        Ok(FqMPoly {
            p,
            nu,
            terms: BTreeMap::new(),
        })
    }

    /// Builds from `(exponents, coefficient)` pairs; coefficients are reduced
    /// mod `p` and repeated monomials are summed.
    pub fn from_terms<I>(p: u32, nu: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, i64)>,
    {
        let mut out = Self::zero(p, nu)?;
        for (exps, c) in terms {
            if exps.len() != nu as usize {
                return Err(Error::RingMismatch(nu, exps.len() as u32));
            }
            out.add_term(Monomial(exps), c.rem_euclid(p as i64) as u32);
        }
        Ok(out)
    }

    pub fn constant(p: u32, nu: u32, c: i64) -> Result<Self> {
        Self::from_terms(p, nu, [(vec![0; nu as usize], c)])
    }

    /// The variable `x_{i+1}`.
    pub fn var(p: u32, nu: u32, i: usize) -> Result<Self> {
        if i >= nu as usize {
            return Err(Error::InvalidArgument(format!("variable {i} out of range")));
        }
        let mut e = vec![0; nu as usize];
        e[i] = 1;
        Self::from_terms(p, nu, [(e, 1)])
    }

    fn add_term(&mut self, m: Monomial, c: u32) {
        if c == 0 {
            return;
        }
        let p = self.p;
        let slot = self.terms.entry(m.clone()).or_insert(0);
        *slot = (*slot + c) % p;
        if *slot == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u32)> {
        self.terms.iter().rev().map(|(m, c)| (m, *c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::total_degree)
    }

    pub fn multi_degree(&self) -> Vec<u32> {
        let mut out = vec![0; self.nu as usize];
        for m in self.terms.keys() {
            for (o, e) in out.iter_mut().zip(m.exponents()) {
                *o = (*o).max(*e);
            }
        }
        out
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    /// 0 for the zero polynomial.
    pub fn leading_coeff(&self) -> u32 {
        self.terms.values().next_back().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff() == 1
    }

    pub fn constant_term(&self) -> u32 {
        self.terms
            .get(&Monomial(vec![0; self.nu as usize]))
            .copied()
            .unwrap_or(0)
    }

    fn check_ring(&self, other: &FqMPoly) -> Result<()> {
        if self.p != other.p {
            return Err(Error::RingMismatch(self.p, other.p));
        }
        if self.nu != other.nu {
            return Err(Error::RingMismatch(self.nu, other.nu));
        }
        Ok(())
    }

    pub fn add(&self, other: &FqMPoly) -> Result<FqMPoly> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &FqMPoly) -> Result<FqMPoly> {
        self.check_ring(other)?;
        let mut out = FqMPoly {
            p: self.p,
            nu: self.nu,
            terms: BTreeMap::new(),
        };
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb % self.p);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: i64) -> FqMPoly {
        let c = c.rem_euclid(self.p as i64) as u32;
        let mut out = FqMPoly {
            p: self.p,
            nu: self.nu,
            terms: BTreeMap::new(),
        };
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a * c % self.p);
        }
        out
    }
}

fn var_name(nu: u32, i: usize) -> String {
    if nu <= 3 {
        ["x", "y", "z"][i].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

impl fmt::Display for FqMPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let vars: Vec<String> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| match e {
                    1 => var_name(self.nu, i),
                    _ => format!("{}^{}", var_name(self.nu, i), e),
                })
                .collect();
            match (c, vars.is_empty()) {
                (_, true) => write!(f, "{c}")?,
                (1, false) => write!(f, "{}", vars.join("*"))?,
                _ => write!(f, "{c}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

/// `h(Q)` by Horner's rule, `h` given by ascending coefficients.
pub fn compose(h: &[i64], q: &FqMPoly) -> Result<FqMPoly> {
    if h.len() < 3 {
        return Err(Error::InvalidArgument(
            "outer polynomial must have degree at least 2".into(),
        ));
    }
    let p = q.p as i64;
    if h[h.len() - 1].rem_euclid(p) == 0 {
        return Err(Error::InvalidArgument(
            "outer polynomial has zero leading coefficient".into(),
        ));
    }
    let mut acc = FqMPoly::zero(q.p, q.nu)?;
    for &c in h.iter().rev() {
        acc = acc.mul(q)?.add(&FqMPoly::constant(q.p, q.nu, c)?)?;
    }
    Ok(acc)
}

fn checked_pow(p: u32, e: usize, budget: u128) -> Result<u64> {
    let mut v: u128 = 1;
    for _ in 0..e {
        v = v.saturating_mul(p as u128);
        if v > budget {
            return Err(Error::BudgetExceeded { needed: v, budget });
        }
    }
    Ok(v as u64)
}

fn check_budget(needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(())
}

type Sparse = Vec<(u16, u8)>;

/// Graded-lex sorted monomial basis with a multiplication table.
struct Basis {
    p: u32,
    nu: u32,
    monos: Vec<Monomial>,
    index: HashMap<Monomial, u16>,
    table: Vec<u16>,
}

const OUTSIDE: u16 = u16::MAX;

impl Basis {
    fn from_monos(p: u32, nu: u32, mut monos: Vec<Monomial>) -> Basis {
        monos.sort();
        let index: HashMap<Monomial, u16> = monos
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i as u16))
            .collect();
        let len = monos.len();
        let mut table = vec![OUTSIDE; len * len];
        for i in 0..len {
            for j in 0..len {
                if let Some(k) = index.get(&monos[i].mul(&monos[j])) {
                    table[i * len + j] = *k;
                }
            }
        }
        Basis {
            p,
            nu,
            monos,
            index,
            table,
        }
    }

    /// Monomials of total degree at most `n`.
    fn total(p: u32, nu: u32, n: u32) -> Basis {
        fn rec(left: usize, budget: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if left == 0 {
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in 0..=budget {
                cur.push(e);
                rec(left - 1, budget - e, cur, out);
                cur.pop();
            }
        }
        let mut monos = Vec::new();
        rec(nu as usize, n, &mut Vec::new(), &mut monos);
        Basis::from_monos(p, nu, monos)
    }

    /// Monomials with `e_i <= bounds[i]`.
    fn boxed(p: u32, bounds: &[u32]) -> Basis {
        let mut monos = vec![Monomial(vec![])];
        for &b in bounds {
            monos = monos
                .into_iter()
                .flat_map(|m| {
                    (0..=b).map(move |e| {
                        let mut v = m.0.clone();
                        v.push(e);
                        Monomial(v)
                    })
                })
                .collect();
        }
        Basis::from_monos(p, bounds.len() as u32, monos)
    }

    fn len(&self) -> usize {
        self.monos.len()
    }

    fn decode(&self, mut code: u64) -> Sparse {
        let p = self.p as u64;
        let mut out = Vec::new();
        let mut i = 0u16;
        while code > 0 {
            let d = (code % p) as u8;
            if d != 0 {
                out.push((i, d));
            }
            code /= p;
            i += 1;
        }
        out
    }

    fn encode(&self, dense: &[u8]) -> u64 {
        dense
            .iter()
            .rev()
            .fold(0u64, |acc, d| acc * self.p as u64 + *d as u64)
    }

    fn mul_into(&self, a: &Sparse, b: &Sparse, out: &mut [u8]) -> Result<()> {
        out.iter_mut().for_each(|d| *d = 0);
        let len = self.len();
        let p = self.p as u16;
        for &(i, ca) in a {
            for &(j, cb) in b {
                let k = self.table[i as usize * len + j as usize];
                if k == OUTSIDE {
                    return Err(Error::OracleInconsistency(
                        "product left the monomial basis".into(),
                    ));
                }
                let slot = &mut out[k as usize];
                *slot = ((*slot as u16 + ca as u16 * cb as u16) % p) as u8;
            }
        }
        Ok(())
    }

    fn to_poly(&self, s: &Sparse) -> FqMPoly {
        let mut terms = BTreeMap::new();
        for &(i, c) in s {
            terms.insert(self.monos[i as usize].clone(), c as u32);
        }
        FqMPoly {
            p: self.p,
            nu: self.nu,
            terms,
        }
    }

    fn multi_degree(&self, s: &Sparse) -> Vec<u32> {
        let mut out = vec![0; self.nu as usize];
        for &(i, _) in s {
            for (o, e) in out.iter_mut().zip(self.monos[i as usize].exponents()) {
                *o = (*o).max(*e);
            }
        }
        out
    }
}

/// Codes of the monic polynomials whose leading monomial has basis index in `lo..hi`.
fn monic_codes(p: u32, lo: usize, hi: usize) -> impl Iterator<Item = u64> {
    (lo..hi).flat_map(move |r| {
        let base = (p as u64).pow(r as u32);
        base..2 * base
    })
}

fn monic_count(p: u32, lo: usize, hi: usize) -> u64 {
    (lo..hi).map(|r| (p as u64).pow(r as u32)).sum()
}

struct Bits(Vec<u64>);

impl Bits {
    fn new(n: u64) -> Bits {
        Bits(vec![0; (n as usize).div_ceil(64)])
    }

    fn set(&mut self, i: u64) {
        self.0[(i / 64) as usize] |= 1 << (i % 64);
    }

    fn get(&self, i: u64) -> bool {
        self.0[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    fn count(&self) -> u64 {
        self.0.iter().map(|w| w.count_ones() as u64).sum()
    }
}

fn total_bounds(nu: u32, n: u32) -> Result<(usize, usize)> {
    Ok((
        binom_b(nu, n as i64 - 1)? as usize,
        binom_b(nu, n as i64)? as usize,
    ))
}

/// Every polynomial of total degree exactly `n` with graded-lex leading
/// coefficient 1, in code order.
pub fn enumerate_monic(p: u32, nu: u32, n: u32) -> Result<impl Iterator<Item = FqMPoly>> {
    check_prime(p)?;
    let (lo, hi) = total_bounds(nu, n)?;
    checked_pow(p, hi, ENUM_BUDGET)?;
    let basis = Basis::total(p, nu, n);
    Ok(monic_codes(p, lo, hi).map(move |c| basis.to_poly(&basis.decode(c))))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum DegreeSpec {
    Total(u32),
    Multi(Vec<u32>),
}

impl fmt::Display for DegreeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeSpec::Total(n) => write!(f, "{n}"),
            DegreeSpec::Multi(v) => {
                let parts: Vec<String> = v.iter().map(u32::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CensusKind {
    Irreducible,
    Indecomposable,
}

impl CensusKind {
    fn labels(self) -> (&'static str, &'static str) {
        match self {
            CensusKind::Irreducible => ("irreducible", "reducible"),
            CensusKind::Indecomposable => ("indecomposable", "decomposable"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusReport {
    pub p: u32,
    pub nu: u32,
    pub degree: DegreeSpec,
    pub kind: CensusKind,
    pub population: u64,
    /// Irreducible or indecomposable members of the population.
    pub count: u64,
    pub elapsed_ms: u64,
}

impl CensusReport {
    pub fn complement(&self) -> u64 {
        self.population - self.count
    }
}

impl Serialize for CensusReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (yes, no) = self.kind.labels();
        let mut m = s.serialize_map(Some(7))?;
        m.serialize_entry("p", &self.p)?;
        m.serialize_entry("nu", &self.nu)?;
        m.serialize_entry("degree", &self.degree)?;
        m.serialize_entry("population", &self.population)?;
        m.serialize_entry(yes, &self.count)?;
        m.serialize_entry(no, &self.complement())?;
        m.serialize_entry("elapsed_ms", &self.elapsed_ms)?;
        m.end()
    }
}

/// Distinct products of factor lists, as a bitset over codes.
fn product_sieve(
    basis: &Basis,
    size: u64,
    splits: &[(&[Sparse], &[Sparse], bool)],
    accept: impl Fn(&[u8]) -> bool,
) -> Result<Bits> {
    let mut bits = Bits::new(size);
    let mut buf = vec![0u8; basis.len()];
    for &(left, right, same) in splits {
        for (i, a) in left.iter().enumerate() {
            let start = if same { i } else { 0 };
            for b in &right[start..] {
                basis.mul_into(a, b, &mut buf)?;
                if !accept(&buf) {
                    return Err(Error::OracleInconsistency(
                        "product of monic factors is not monic of the target degree".into(),
                    ));
                }
                bits.set(basis.encode(&buf));
            }
        }
    }
    Ok(bits)
}

fn elapsed_ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

fn irreducible_total(p: u32, nu: u32, n: u32) -> Result<CensusReport> {
    check_prime(p)?;
    if nu == 0 || n == 0 {
        return Err(Error::InvalidArgument("need nu >= 1 and n >= 1".into()));
    }
    let start = Instant::now();
    let (lo, hi) = total_bounds(nu, n)?;
    let size = checked_pow(p, hi, ENUM_BUDGET)?;
    let mut counts = vec![0u128; n as usize];
    for (a, slot) in counts.iter_mut().enumerate().skip(1) {
        let (l, h) = total_bounds(nu, a as u32)?;
        *slot = monic_count(p, l, h) as u128;
    }
    let pairs: u128 = (1..n as usize)
        .map(|a| counts[a] * counts[n as usize - a])
        .sum();
    check_budget(pairs, SIEVE_BUDGET)?;

    let basis = Basis::total(p, nu, n);
    let factors: Vec<Vec<Sparse>> = (0..n)
        .map(|a| {
            if a == 0 {
                return Ok(Vec::new());
            }
            let (l, h) = total_bounds(nu, a)?;
            Ok(monic_codes(p, l, h).map(|c| basis.decode(c)).collect())
        })
        .collect::<Result<_>>()?;
    let splits: Vec<(&[Sparse], &[Sparse], bool)> = (1..=n / 2)
        .map(|a| {
            (
                factors[a as usize].as_slice(),
                factors[(n - a) as usize].as_slice(),
                2 * a == n,
            )
        })
        .collect();
    let bits = product_sieve(&basis, size, &splits, |buf| {
        let top = buf.iter().rposition(|d| *d != 0);
        matches!(top, Some(r) if r >= lo && buf[r] == 1)
    })?;
    let population = monic_count(p, lo, hi);
    Ok(CensusReport {
        p,
        nu,
        degree: DegreeSpec::Total(n),
        kind: CensusKind::Irreducible,
        population,
        count: population - bits.count(),
        elapsed_ms: elapsed_ms(start),
    })
}

/// Irreducible monic polynomials of total degree `n` in `nu` variables over `F_p`.
pub fn census_irreducible_monic(p: u32, nu: u32, n: u32) -> Result<CensusReport> {
    irreducible_total(p, nu, n)
}

/// Irreducible monic univariate polynomials of degree `n` over `F_p`.
pub fn census_irreducible_univariate(p: u32, n: u32) -> Result<CensusReport> {
    check_prime(p)?;
    checked_pow(p, n as usize, UNIVARIATE_BUDGET)?;
    irreducible_total(p, 1, n)
}

/// Monic polynomials of multidegree exactly `bounds`, split by irreducibility.
pub fn census_irreducible_multidegree(p: u32, bounds: &[u32]) -> Result<CensusReport> {
    check_prime(p)?;
    if bounds.is_empty() || bounds.iter().all(|b| *b == 0) {
        return Err(Error::InvalidArgument("multidegree must be nonzero".into()));
    }
    let start = Instant::now();
    let basis = Basis::boxed(p, bounds);
    let size = checked_pow(p, basis.len(), ENUM_BUDGET)?;

    let population = monic_codes(p, 0, basis.len())
        .filter(|c| basis.multi_degree(&basis.decode(*c)) == bounds)
        .count() as u64;

    // monic factors of exact multidegree a, in the coordinates of the big box
    let mut factors: HashMap<Vec<u32>, Vec<Sparse>> = HashMap::new();
    let mut splits_idx = Vec::new();
    for m in &basis.monos {
        let a = m.exponents().to_vec();
        let b: Vec<u32> = bounds.iter().zip(&a).map(|(n, x)| n - x).collect();
        if a.iter().all(|x| *x == 0) || b.iter().all(|x| *x == 0) || a > b {
            continue;
        }
        for part in [&a, &b] {
            if !factors.contains_key(part) {
                let sub = Basis::boxed(p, part);
                let list: Vec<Sparse> = monic_codes(p, 0, sub.len())
                    .map(|c| sub.decode(c))
                    .filter(|s| sub.multi_degree(s) == *part)
                    .map(|s| {
                        s.into_iter()
                            .map(|(i, c)| (basis.index[&sub.monos[i as usize]], c))
                            .collect()
                    })
                    .collect();
                factors.insert(part.clone(), list);
            }
        }
        splits_idx.push((a, b));
    }
    let pairs: u128 = splits_idx
        .iter()
        .map(|(a, b)| factors[a].len() as u128 * factors[b].len() as u128)
        .sum();
    check_budget(pairs, SIEVE_BUDGET)?;
    let splits: Vec<(&[Sparse], &[Sparse], bool)> = splits_idx
        .iter()
        .map(|(a, b)| (factors[a].as_slice(), factors[b].as_slice(), a == b))
        .collect();
    let md = |buf: &[u8]| {
        let s: Sparse = buf
            .iter()
            .enumerate()
            .filter(|(_, d)| **d != 0)
            .map(|(i, d)| (i as u16, *d))
            .collect();
        basis.multi_degree(&s)
    };
    let top_is_one =
        |buf: &[u8]| matches!(buf.iter().rposition(|d| *d != 0), Some(r) if buf[r] == 1);
    // multidegree is additive over a field, so the exact-multidegree
    // filter rejects nothing; it is checked rather than assumed
    let bits = product_sieve(&basis, size, &splits, |buf| {
        top_is_one(buf) && md(buf) == bounds
    })?;
    Ok(CensusReport {
        p,
        nu: bounds.len() as u32,
        degree: DegreeSpec::Multi(bounds.to_vec()),
        kind: CensusKind::Irreducible,
        population,
        count: population - bits.count(),
        elapsed_ms: elapsed_ms(start),
    })
}

/// Generated composition pairs against distinct results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct UniquenessAudit {
    pub pairs: u64,
    pub distinct: u64,
}

impl UniquenessAudit {
    pub fn is_unique(&self) -> bool {
        self.pairs == self.distinct
    }
}

struct CompositionSieve {
    p: u32,
    nu: u32,
    basis: Basis,
    normalized: HashMap<u32, Vec<Sparse>>,
    pairs_total: u128,
}

impl CompositionSieve {
    fn new(p: u32, nu: u32, n: u32) -> Result<Self> {
        check_prime(p)?;
        if nu == 0 || n == 0 {
            return Err(Error::InvalidArgument("need nu >= 1 and n >= 1".into()));
        }
        let (_, hi) = total_bounds(nu, n)?;
        checked_pow(p, hi, ENUM_BUDGET)?;
        Ok(CompositionSieve {
            p,
            nu,
            basis: Basis::total(p, nu, n),
            normalized: HashMap::new(),
            pairs_total: 0,
        })
    }

    /// All `h(Q)` of degree `d` with `Q` normalized indecomposable of degree `e | d, e < d`.
    fn decomposables(&mut self, d: u32) -> Result<(Bits, u64)> {
        let p = self.p;
        let (lo, hi) = total_bounds(self.nu, d)?;
        let mut bits = Bits::new((p as u64).pow(hi as u32));
        let mut pairs = 0u64;
        let len = self.basis.len();
        for e in divisors(d as u64) {
            let e = e as u32;
            if e == d {
                continue;
            }
            let m = (d / e) as usize;
            let qs = self.normalized(e)?;
            let outer = (p as u64 - 1) * (p as u64).pow(m as u32);
            self.pairs_total += qs.len() as u128 * outer as u128;
            check_budget(self.pairs_total, SIEVE_BUDGET)?;
            let mut buf = vec![0u8; len];
            let mut pow_buf = vec![0u8; len];
            for q in &qs {
                // dense powers Q^0 .. Q^m
                let mut powers: Vec<Vec<u8>> = Vec::with_capacity(m + 1);
                let mut one = vec![0u8; len];
                one[0] = 1;
                powers.push(one);
                for k in 1..=m {
                    let prev: Sparse = powers[k - 1]
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| **c != 0)
                        .map(|(i, c)| (i as u16, *c))
                        .collect();
                    self.basis.mul_into(&prev, q, &mut pow_buf)?;
                    powers.push(pow_buf.clone());
                }
                for hcode in 0..outer {
                    // h_0 .. h_{m-1} free, h_m in 1..p
                    let mut c = hcode;
                    buf.iter_mut().for_each(|x| *x = 0);
                    for (k, pw) in powers.iter().enumerate() {
                        let hk = if k < m {
                            let v = c % p as u64;
                            c /= p as u64;
                            v
                        } else {
                            c + 1
                        } as u32;
                        if hk == 0 {
                            continue;
                        }
                        for (x, y) in buf.iter_mut().zip(pw) {
                            *x = ((*x as u32 + hk * *y as u32) % p) as u8;
                        }
                    }
                    match buf.iter().rposition(|x| *x != 0) {
                        Some(r) if r >= lo && r < hi => {}
                        _ => {
                            return Err(Error::OracleInconsistency(
                                "composition has the wrong total degree".into(),
                            ))
                        }
                    }
                    bits.set(self.basis.encode(&buf));
                    pairs += 1;
                }
            }
        }
        Ok((bits, pairs))
    }

    /// Monic, zero constant term, indecomposable, degree `e`.
    fn normalized(&mut self, e: u32) -> Result<Vec<Sparse>> {
        if let Some(v) = self.normalized.get(&e) {
            return Ok(v.clone());
        }
        let p = self.p;
        let (bits, _) = self.decomposables(e)?;
        let (lo, hi) = total_bounds(self.nu, e)?;
        let list: Vec<Sparse> = monic_codes(p, lo, hi)
            .filter(|c| c % p as u64 == 0 && !bits.get(*c))
            .map(|c| self.basis.decode(c))
            .collect();
        let population = (p as u64).pow(hi as u32) - (p as u64).pow(lo as u32);
        let indec = population - bits.count();
        if list.len() as u64 * (p as u64 - 1) * p as u64 != indec {
            return Err(Error::OracleInconsistency(format!(
                "{} normalized inner polynomials of degree {e}, {indec} indecomposables",
                list.len()
            )));
        }
        self.normalized.insert(e, list.clone());
        Ok(list)
    }
}

fn indecomposable_run(p: u32, nu: u32, n: u32) -> Result<(CensusReport, UniquenessAudit)> {
    let start = Instant::now();
    let mut sieve = CompositionSieve::new(p, nu, n)?;
    let (bits, pairs) = sieve.decomposables(n)?;
    let (lo, hi) = total_bounds(nu, n)?;
    let population = (p as u64).pow(hi as u32) - (p as u64).pow(lo as u32);
    let distinct = bits.count();
    let report = CensusReport {
        p,
        nu,
        degree: DegreeSpec::Total(n),
        kind: CensusKind::Indecomposable,
        population,
        count: population - distinct,
        elapsed_ms: elapsed_ms(start),
    };
    Ok((report, UniquenessAudit { pairs, distinct }))
}

/// All polynomials of total degree exactly `n` (any leading coefficient),
/// split by decomposability.
pub fn census_indecomposable(p: u32, nu: u32, n: u32) -> Result<CensusReport> {
    indecomposable_run(p, nu, n).map(|r| r.0)
}

/// Compares the number of normalized pairs `(h, Q)` generated for degree `n`
/// with the number of distinct compositions.
pub fn uniqueness_audit(p: u32, nu: u32, n: u32) -> Result<UniquenessAudit> {
    indecomposable_run(p, nu, n).map(|r| r.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(p: u32, t: &[(&[u32], i64)]) -> FqMPoly {
        FqMPoly::from_terms(
            p,
            t[0].0.len() as u32,
            t.iter().map(|(e, c)| (e.to_vec(), *c)),
        )
        .unwrap()
    }

    #[test]
    fn graded_lex_order() {
        let m = |v: &[u32]| Monomial::new(v.to_vec());
        assert!(m(&[2, 0]) > m(&[1, 1]));
        assert!(m(&[1, 1]) > m(&[0, 2]));
        assert!(m(&[0, 3]) > m(&[2, 0]));
        assert!(m(&[0, 1]) > m(&[0, 0]));
    }

    #[test]
    fn frobenius_and_squares() {
        let x = FqMPoly::var(2, 2, 0).unwrap();
        let y = FqMPoly::var(2, 2, 1).unwrap();
        let s = x.add(&y).unwrap();
        assert_eq!(s.mul(&s).unwrap(), poly(2, &[(&[2, 0], 1), (&[0, 2], 1)]));
        let x1 = x.add(&FqMPoly::constant(2, 2, 1).unwrap()).unwrap();
        assert_eq!(x1.mul(&x1).unwrap(), poly(2, &[(&[2, 0], 1), (&[0, 0], 1)]));
        assert_eq!(x1.mul(&x1).unwrap().to_string(), "x^2 + 1");
    }

    #[test]
    fn ring_mismatch() {
        let a = FqMPoly::var(2, 2, 0).unwrap();
        let b = FqMPoly::var(3, 2, 0).unwrap();
        let c = FqMPoly::var(2, 3, 0).unwrap();
        assert!(matches!(a.mul(&b), Err(Error::RingMismatch(2, 3))));
        assert!(a.add(&c).is_err());
        assert_eq!(FqMPoly::zero(7, 2), Err(Error::UnsupportedPrime(7)));
    }

    #[test]
    fn leading_monomials_multiply() {
        for p in [2u32, 3, 5] {
            let polys: Vec<FqMPoly> = enumerate_monic(p, 2, 1)
                .unwrap()
                .chain(enumerate_monic(p, 2, 2).unwrap().step_by(7))
                .collect();
            for a in &polys {
                for b in polys.iter().step_by(3) {
                    let ab = a.mul(b).unwrap();
                    assert_eq!(
                        ab.leading_monomial().unwrap(),
                        &a.leading_monomial()
                            .unwrap()
                            .mul(b.leading_monomial().unwrap())
                    );
                    assert!(ab.is_monic());
                }
            }
        }
    }

    #[test]
    fn compositions() {
        let xy = poly(2, &[(&[1, 1], 1)]);
        assert_eq!(compose(&[0, 0, 1], &xy).unwrap(), poly(2, &[(&[2, 2], 1)]));
        let p = compose(&[1, 1, 0, 1], &xy).unwrap();
        assert_eq!(p.to_string(), "x^3*y^3 + x*y + 1");
        assert_eq!(p.total_degree(), Some(6));
        assert!(compose(&[0, 1], &xy).is_err());
        assert!(compose(&[1, 1, 2], &xy).is_err());
        let q = poly(3, &[(&[1, 1], 1), (&[0, 1], 2)]);
        let r = compose(&[1, 0, 2, 1], &q).unwrap();
        assert_eq!(r.total_degree(), Some(6));
        assert_eq!(r.multi_degree(), vec![3, 3]);
    }

    #[test]
    fn monic_enumeration_sizes() {
        assert_eq!(enumerate_monic(2, 2, 1).unwrap().count(), 6);
        assert_eq!(enumerate_monic(2, 2, 2).unwrap().count(), 56);
        assert_eq!(enumerate_monic(3, 2, 1).unwrap().count(), 12);
        let strs: Vec<String> = enumerate_monic(2, 2, 1)
            .unwrap()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(strs, ["y", "y + 1", "x", "x + 1", "x + y", "x + y + 1"]);
        for poly in enumerate_monic(3, 2, 2).unwrap() {
            assert!(poly.is_monic());
            assert_eq!(poly.total_degree(), Some(2));
        }
        assert!(matches!(
            enumerate_monic(2, 2, 6),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn small_censuses() {
        assert_eq!(census_irreducible_monic(2, 2, 1).unwrap().count, 6);
        assert_eq!(census_irreducible_univariate(2, 2).unwrap().count, 1);
        assert_eq!(census_irreducible_univariate(2, 3).unwrap().count, 2);
        assert_eq!(census_irreducible_univariate(3, 2).unwrap().count, 3);
        assert_eq!(census_irreducible_multidegree(2, &[1, 0]).unwrap().count, 2);
        let r = census_irreducible_multidegree(2, &[1, 1]).unwrap();
        assert_eq!((r.population, r.count), (10, 6));
        let r = census_indecomposable(2, 2, 2).unwrap();
        assert_eq!((r.population, r.count), (56, 44));
        assert_eq!(census_indecomposable(2, 2, 1).unwrap().count, 6);
        assert!(census_irreducible_univariate(2, 21).is_err());
        assert!(census_irreducible_multidegree(2, &[0, 0]).is_err());
    }

    #[test]
    fn uniqueness_in_degree_four() {
        let a = uniqueness_audit(2, 2, 4).unwrap();
        assert_eq!(a.pairs, 48 + 88);
        assert!(a.is_unique());
    }

    #[test]
    fn report_json() {
        let mut r = census_irreducible_multidegree(2, &[1, 1]).unwrap();
        r.elapsed_ms = 0;
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"p":2,"nu":2,"degree":[1,1],"population":10,"irreducible":6,"reducible":4,"elapsed_ms":0}"#
        );
        let mut r = census_indecomposable(2, 2, 2).unwrap();
        r.elapsed_ms = 0;
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"p":2,"nu":2,"degree":2,"population":56,"indecomposable":44,"decomposable":12,"elapsed_ms":0}"#
        );
    }
}
