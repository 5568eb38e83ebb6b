//! Sparse polynomials in the symbol `q` with exact rational coefficients.
//!
//! Every count computed by this crate is a [`QPoly`]: a finite sum of
//! `c * q^e` with `e` a machine integer and `c` an arbitrary-precision
//! rational. Terms are kept sorted by strictly decreasing exponent with no
//! zero coefficients, so structural equality is polynomial equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Degree of a [`QPoly`]; the zero polynomial has degree `MinusInfinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(u64),
}

impl Degree {
    pub fn finite(self) -> Option<u64> {
        match self {
            Degree::MinusInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::MinusInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    // strictly decreasing exponents, nonzero coefficients
    terms: Vec<(u64, BigRational)>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(0, c)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(c.into()))
    }

    /// `c * q^exp`.
    pub fn monomial(exp: u64, c: BigRational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            QPoly {
                terms: vec![(exp, c)],
            }
        }
    }

    /// `q^exp`.
    pub fn q_pow(exp: u64) -> Self {
        Self::monomial(exp, BigRational::one())
    }

    /// Builds a polynomial from arbitrary `(exponent, coefficient)` pairs,
    /// merging repeated exponents and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (u64, BigRational)>>(terms: I) -> Self {
        let mut v: Vec<(u64, BigRational)> = terms.into_iter().collect();
        v.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(u64, BigRational)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        QPoly { terms: out }
    }

    pub fn from_int_terms(terms: &[(u64, i64)]) -> Self {
        Self::from_terms(
            terms
                .iter()
                .map(|&(e, c)| (e, BigRational::from_integer(c.into()))),
        )
    }

    /// Terms in decreasing exponent order.
    pub fn terms(&self) -> &[(u64, BigRational)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Degree {
        self.terms
            .first()
            .map_or(Degree::MinusInfinity, |(e, _)| Degree::Finite(*e))
    }

    /// Smallest exponent carrying a nonzero coefficient.
    pub fn min_exponent(&self) -> Option<u64> {
        self.terms.last().map(|(e, _)| *e)
    }

    pub fn leading_term(&self) -> Option<&(u64, BigRational)> {
        self.terms.first()
    }

    pub fn coeff(&self, exp: u64) -> BigRational {
        match self.terms.binary_search_by(|(e, _)| exp.cmp(e)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigRational::zero(),
        }
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(0)
    }

    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer())
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &BigRational) -> QPoly {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> QPoly {
        self.scale(&BigRational::from_integer(c.into()))
    }

    /// Multiplication by `q^shift`.
    pub fn checked_shift(&self, shift: u64) -> Result<QPoly> {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                e.checked_add(shift)
                    .map(|e| (e, c.clone()))
                    .ok_or(Error::ExponentOverflow)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(QPoly { terms })
    }

    pub fn checked_mul(&self, other: &QPoly) -> Result<QPoly> {
        if self.is_zero() || other.is_zero() {
            return Ok(QPoly::zero());
        }
        if other.terms.len() == 1 {
            let (e, c) = &other.terms[0];
            return self.checked_shift(*e).map(|p| p.scale(c));
        }
        if self.terms.len() == 1 {
            return other.checked_mul(self);
        }
        let hi = self.terms[0]
            .0
            .checked_add(other.terms[0].0)
            .ok_or(Error::ExponentOverflow)?;
        let lo = self.min_exponent().unwrap() + other.min_exponent().unwrap();
        let pairs = self.terms.len() * other.terms.len();
        if hi - lo <= 8 * pairs as u64 + 1024 {
            let mut acc = Accumulator::new();
            acc.add_product(self, other)?;
            return Ok(acc.finish());
        }
        // wide and sparse: sort the products instead of a dense buffer
        let mut prods = Vec::with_capacity(pairs);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                prods.push((ea + eb, ca * cb));
            }
        }
        Ok(QPoly::from_terms(prods))
    }

    pub fn checked_pow(&self, k: u32) -> Result<QPoly> {
        let mut out = QPoly::one();
        for _ in 0..k {
            out = out.checked_mul(self)?;
        }
        Ok(out)
    }

    /// Keeps only terms with exponent strictly greater than `bound`.
    pub fn terms_above(&self, bound: u64) -> QPoly {
        QPoly {
            terms: self
                .terms
                .iter()
                .take_while(|(e, _)| *e > bound)
                .cloned()
                .collect(),
        }
    }

    /// Exact division by `(q - 1)`.
    ///
    /// The quotient coefficient at `q^k` is the sum of all coefficients of
    /// `self` at exponents above `k`; the remainder is `self(1)`.
    pub fn div_qminus1(&self) -> Result<QPoly> {
        let mut out: Vec<(u64, BigRational)> = Vec::new();
        let mut running = BigRational::zero();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            running += c;
            let next = self.terms.get(i + 1).map(|(ne, _)| *ne);
            if running.is_zero() {
                continue;
            }
            // running sum is the quotient coefficient for k in [next, e-1]
            let lo = match next {
                Some(ne) => ne,
                None => return Err(Error::NotDivisible),
            };
            let mut k = *e;
            while k > lo {
                k -= 1;
                out.push((k, running.clone()));
            }
        }
        if !running.is_zero() {
            return Err(Error::NotDivisible);
        }
        Ok(QPoly { terms: out })
    }

    /// Multiplication by `(q - 1)`.
    pub fn mul_qminus1(&self) -> Result<QPoly> {
        let shifted = self.checked_shift(1)?;
        Ok(&shifted - self)
    }

    /// Exact evaluation at an integer point.
    pub fn eval(&self, q0: &BigInt) -> BigRational {
        if self.is_integral() {
            return BigRational::from_integer(self.eval_integral(q0));
        }
        let mut denom = BigInt::one();
        for (_, c) in &self.terms {
            denom = denom.lcm(c.denom());
        }
        let scaled = self.scale(&BigRational::from_integer(denom.clone()));
        BigRational::new(scaled.eval_integral(q0), denom)
    }

    /// Evaluation at an integer point; `None` unless the value is an integer.
    pub fn eval_integer(&self, q0: &BigInt) -> Option<BigInt> {
        let v = self.eval(q0);
        v.is_integer().then(|| v.to_integer())
    }

    // Horner over the sparse exponent gaps; coefficients must be integral.
    fn eval_integral(&self, q0: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let mut prev: Option<u64> = None;
        for (e, c) in &self.terms {
            if let Some(pe) = prev {
                acc *= pow_big(q0, pe - e);
            }
            acc += c.numer();
            prev = Some(*e);
        }
        if let Some(pe) = prev {
            acc *= pow_big(q0, pe);
        }
        acc
    }

    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            let coeff = if a.is_integer() {
                if a.is_one() && *e != 0 {
                    String::new()
                } else {
                    a.numer().to_string()
                }
            } else {
                format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom())
            };
            s.push_str(&coeff);
            match e {
                0 => {}
                1 => s.push('q'),
                _ => s.push_str(&format!("q^{{{e}}}")),
            }
        }
        s
    }
}

fn pow_big(base: &BigInt, exp: u64) -> BigInt {
    let mut result = BigInt::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    result
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let a = c.abs();
            let unit = a.is_one();
            match (e, unit) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => f.write_str("q")?,
                (1, false) => write!(f, "{a}*q")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{a}*q^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({self})")
    }
}

/// Dense accumulator for sums of products of q-polynomials.
///
/// Stays on integer coefficients while every operand is integral and
/// switches to rationals on the first fractional operand.
pub(crate) struct Accumulator {
    lo: u64,
    int: Vec<BigInt>,
    rat: Option<Vec<BigRational>>,
}

impl Accumulator {
    pub(crate) fn new() -> Self {
        Accumulator {
            lo: 0,
            int: Vec::new(),
            rat: None,
        }
    }

    fn len(&self) -> usize {
        match &self.rat {
            Some(r) => r.len(),
            None => self.int.len(),
        }
    }

    fn reserve_span(&mut self, lo: u64, hi: u64) {
        if self.len() == 0 {
            self.lo = lo;
            let n = (hi - lo + 1) as usize;
            match &mut self.rat {
                Some(r) => r.resize(n, BigRational::zero()),
                None => self.int.resize(n, BigInt::zero()),
            }
            return;
        }
        if lo < self.lo {
            let extra = (self.lo - lo) as usize;
            match &mut self.rat {
                Some(r) => {
                    r.splice(0..0, std::iter::repeat_n(BigRational::zero(), extra));
                }
                None => {
                    self.int
                        .splice(0..0, std::iter::repeat_n(BigInt::zero(), extra));
                }
            }
            self.lo = lo;
        }
        let need = (hi - self.lo + 1) as usize;
        if need > self.len() {
            match &mut self.rat {
                Some(r) => r.resize(need, BigRational::zero()),
                None => self.int.resize(need, BigInt::zero()),
            }
        }
    }

    fn go_rational(&mut self) {
        if self.rat.is_none() {
            let r = std::mem::take(&mut self.int)
                .into_iter()
                .map(BigRational::from_integer)
                .collect();
            self.rat = Some(r);
        }
    }

    pub(crate) fn add(&mut self, p: &QPoly) {
        let (Some(hi), Some(lo)) = (p.degree().finite(), p.min_exponent()) else {
            return;
        };
        if !p.is_integral() {
            self.go_rational();
        }
        self.reserve_span(lo, hi);
        let base = self.lo;
        match &mut self.rat {
            Some(r) => {
                for (e, c) in &p.terms {
                    r[(e - base) as usize] += c;
                }
            }
            None => {
                for (e, c) in &p.terms {
                    self.int[(e - base) as usize] += c.numer();
                }
            }
        }
    }

    pub(crate) fn sub(&mut self, p: &QPoly) {
        self.add(&-p);
    }

    pub(crate) fn add_product(&mut self, a: &QPoly, b: &QPoly) -> Result<()> {
        let (Some(ahi), Some(bhi)) = (a.degree().finite(), b.degree().finite()) else {
            return Ok(());
        };
        let alo = a.min_exponent().unwrap();
        let blo = b.min_exponent().unwrap();
        let hi = ahi.checked_add(bhi).ok_or(Error::ExponentOverflow)?;
        let lo = alo + blo;
        if !(a.is_integral() && b.is_integral()) {
            self.go_rational();
        }
        self.reserve_span(lo, hi);
        let base = self.lo;
        match &mut self.rat {
            Some(r) => {
                for (ea, ca) in &a.terms {
                    for (eb, cb) in &b.terms {
                        r[(ea + eb - base) as usize] += ca * cb;
                    }
                }
            }
            None => {
                let acc = &mut self.int;
                for (ea, ca) in &a.terms {
                    let ca = ca.numer();
                    for (eb, cb) in &b.terms {
                        acc[(ea + eb - base) as usize] += ca * cb.numer();
                    }
                }
            }
        }
        Ok(())
    }

    pub(crate) fn finish(self) -> QPoly {
        let lo = self.lo;
        let terms: Vec<(u64, BigRational)> = match self.rat {
            Some(r) => r
                .into_iter()
                .enumerate()
                .rev()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (lo + i as u64, c))
                .collect(),
            None => self
                .int
                .into_iter()
                .enumerate()
                .rev()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (lo + i as u64, BigRational::from_integer(c)))
                .collect(),
        };
        QPoly { terms }
    }
}

fn merge(a: &QPoly, b: &QPoly, negate_b: bool) -> QPoly {
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    let sign = |c: &BigRational| if negate_b { -c } else { c.clone() };
    while i < a.terms.len() && j < b.terms.len() {
        let (ea, ca) = &a.terms[i];
        let (eb, cb) = &b.terms[j];
        match ea.cmp(eb) {
            Ordering::Greater => {
                out.push((*ea, ca.clone()));
                i += 1;
            }
            Ordering::Less => {
                out.push((*eb, sign(cb)));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b { ca - cb } else { ca + cb };
                if !c.is_zero() {
                    out.push((*ea, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a.terms[i..].iter().cloned());
    out.extend(b.terms[j..].iter().map(|(e, c)| (*e, sign(c))));
    QPoly { terms: out }
}

impl Add<&QPoly> for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        merge(self, rhs, false)
    }
}

impl Sub<&QPoly> for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        merge(self, rhs, true)
    }
}

/// Panics on exponent overflow; use [`QPoly::checked_mul`] to handle it.
impl Mul<&QPoly> for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        self.checked_mul(rhs)
            .expect("q-polynomial exponent overflow")
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<QPoly> for QPoly {
            type Output = QPoly;
            fn $m(self, rhs: QPoly) -> QPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QPoly> for QPoly {
            type Output = QPoly;
            fn $m(self, rhs: &QPoly) -> QPoly {
                (&self).$m(rhs)
            }
        }
        impl $tr<QPoly> for &QPoly {
            type Output = QPoly;
            fn $m(self, rhs: QPoly) -> QPoly {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        -&self
    }
}

impl AddAssign<&QPoly> for QPoly {
    fn add_assign(&mut self, rhs: &QPoly) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&QPoly> for QPoly {
    fn sub_assign(&mut self, rhs: &QPoly) {
        *self = &*self - rhs;
    }
}

impl Zero for QPoly {
    fn zero() -> Self {
        QPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl std::iter::Sum for QPoly {
    fn sum<I: Iterator<Item = QPoly>>(iter: I) -> QPoly {
        QPoly::from_terms(iter.flat_map(|p| p.terms))
    }
}

pub(crate) fn rational_to_string(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => s
            .trim()
            .parse::<BigInt>()
            .ok()
            .map(BigRational::from_integer),
    }
}

/// JSON form: `{"terms":[[exp,"coeff"],...]}`, descending exponents,
/// coefficients as exact decimal strings (`"p/r"` for non-integers).
impl Serialize for QPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            terms: TermList<'a>,
        }
        Wire {
            terms: TermList(&self.terms),
        }
        .serialize(serializer)
    }
}

pub(crate) struct TermList<'a>(pub(crate) &'a [(u64, BigRational)]);

impl Serialize for TermList<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for (e, c) in self.0 {
            seq.serialize_element(&(e, rational_to_string(c)))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for QPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            terms: Vec<(u64, String)>,
        }
        let w = Wire::deserialize(deserializer)?;
        let mut terms = Vec::with_capacity(w.terms.len());
        for (e, s) in w.terms {
            let c = parse_rational(&s)
                .ok_or_else(|| serde::de::Error::custom(format!("bad coefficient {s:?}")))?;
            terms.push((e, c));
        }
        Ok(QPoly::from_terms(terms))
    }
}

/// A count written as `numerator / (q - 1)^den_pow`, the way large counts
/// are usually displayed. The numerator may carry rational coefficients
/// (counts such as `N_1 (N_1 + 1) / 2` are integer-valued without having
/// integer coefficients); it must be divisible by `(q - 1)^den_pow`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QPolyOverQm1 {
    numerator: QPoly,
    den_pow: u32,
}

impl QPolyOverQm1 {
    pub fn new(numerator: QPoly, den_pow: u32) -> Result<Self> {
        let mut check = numerator.clone();
        for _ in 0..den_pow {
            check = check.div_qminus1()?;
        }
        Ok(QPolyOverQm1 { numerator, den_pow })
    }

    /// Exact polynomial with no denominator.
    pub fn from_polynomial(p: QPoly) -> Self {
        QPolyOverQm1 {
            numerator: p,
            den_pow: 0,
        }
    }

    /// Form with numerator `(q - 1) * p`.
    pub fn scaled(p: &QPoly) -> Result<Self> {
        Ok(QPolyOverQm1 {
            numerator: p.mul_qminus1()?,
            den_pow: 1,
        })
    }

    /// Picks the sparser of `p` and `((q - 1) p) / (q - 1)`; ties keep `p`.
    pub fn compact(p: &QPoly) -> Result<Self> {
        let scaled = Self::scaled(p)?;
        if p.num_terms() <= scaled.numerator.num_terms() {
            Ok(Self::from_polynomial(p.clone()))
        } else {
            Ok(scaled)
        }
    }

    pub fn numerator(&self) -> &QPoly {
        &self.numerator
    }

    pub fn den_pow(&self) -> u32 {
        self.den_pow
    }

    /// The represented polynomial.
    pub fn value(&self) -> QPoly {
        let mut v = self.numerator.clone();
        for _ in 0..self.den_pow {
            v = v.div_qminus1().expect("checked at construction");
        }
        v
    }

    /// Numerator of the same value over `(q - 1)^1`.
    pub fn scaled_numerator(&self) -> QPoly {
        match self.den_pow {
            1 => self.numerator.clone(),
            _ => self
                .value()
                .mul_qminus1()
                .expect("exponent overflow rescaling"),
        }
    }

    pub fn eval(&self, q0: &BigInt) -> BigRational {
        let num = self.numerator.eval(q0);
        let den = pow_big(&(q0 - BigInt::one()), self.den_pow as u64);
        num / BigRational::from_integer(den)
    }

    pub fn to_latex(&self) -> String {
        latex_over_qm1(&self.numerator, self.den_pow)
    }
}

impl fmt::Display for QPolyOverQm1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_over_qm1(f, &self.numerator, self.den_pow)
    }
}

impl Serialize for QPolyOverQm1 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        OverQm1Wire {
            terms: TermList(&self.numerator.terms),
            den_pow_qminus1: self.den_pow,
        }
        .serialize(serializer)
    }
}

/// `numerator / (q - 1)^den_pow` kept as a formal quotient, with no
/// divisibility requirement. Used for the leading part of an approximation,
/// which is generally not a polynomial.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormalQuotient {
    pub numerator: QPoly,
    pub den_pow: u32,
}

impl FormalQuotient {
    pub fn to_latex(&self) -> String {
        latex_over_qm1(&self.numerator, self.den_pow)
    }
}

impl fmt::Display for FormalQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_over_qm1(f, &self.numerator, self.den_pow)
    }
}

impl Serialize for FormalQuotient {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        OverQm1Wire {
            terms: TermList(&self.numerator.terms),
            den_pow_qminus1: self.den_pow,
        }
        .serialize(serializer)
    }
}

/// JSON: the QPoly schema plus `"den_pow_qminus1"`.
#[derive(Serialize)]
struct OverQm1Wire<'a> {
    terms: TermList<'a>,
    den_pow_qminus1: u32,
}

fn fmt_over_qm1(f: &mut fmt::Formatter<'_>, num: &QPoly, den_pow: u32) -> fmt::Result {
    match den_pow {
        0 => write!(f, "{num}"),
        1 => write!(f, "(1/(q-1))({num})"),
        k => write!(f, "(1/(q-1)^{k})({num})"),
    }
}

fn latex_over_qm1(num: &QPoly, den_pow: u32) -> String {
    match den_pow {
        0 => num.to_latex(),
        1 => format!("\\frac{{1}}{{q-1}}\\left({}\\right)", num.to_latex()),
        k => format!(
            "\\frac{{1}}{{(q-1)^{{{k}}}}}\\left({}\\right)",
            num.to_latex()
        ),
    }
}

/// Classical Möbius function.
pub fn mobius(n: u64) -> i8 {
    assert!(n >= 1, "mobius is defined for n >= 1");
    let mut m = n;
    let mut sign = 1i8;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors are defined for n >= 1");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Prime factors of `n` counted with multiplicity.
pub fn big_omega(n: u64) -> u32 {
    let mut m = n;
    let mut count = 0;
    let mut p = 2u64;
    while p * p <= m {
        while m % p == 0 {
            m /= p;
            count += 1;
        }
        p += 1;
    }
    if m > 1 {
        count += 1;
    }
    count
}

/// `b_n = binom(nu + n, nu)`, the number of monomials of total degree at
/// most `n` in `nu` variables. `b_{-1} = 0`, which makes the degree-0
/// count `(q^{b_0} - q^{b_{-1}}) / (q - 1)` equal to 1.
pub fn binom_b(nu: u32, n: i64) -> Result<u64> {
    if nu == 0 {
        return Err(Error::InvalidArgument("nu must be at least 1".into()));
    }
    if n < -1 {
        return Err(Error::InvalidArgument(format!("b_n undefined for n = {n}")));
    }
    if n == -1 {
        return Ok(0);
    }
    let n = n as u64;
    // binom(nu + n, min(nu, n)) with exact intermediate division
    let k = (nu as u64).min(n);
    let top = n + nu as u64;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((top - i) as u128)
            .ok_or(Error::ExponentOverflow)?
            / (i as u128 + 1);
    }
    acc.to_u64().ok_or(Error::ExponentOverflow)
}

/// gcd of the nonzero entries; `gcd((n, 0)) = n`, `gcd(0̄) = 0`.
pub fn multi_gcd(index: &[u32]) -> u32 {
    index.iter().fold(0u32, |g, &x| g.gcd(&x))
}
