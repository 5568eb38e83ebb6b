//! Indecomposable polynomials: those not of the form `h(Q)` with `h`
//! univariate of degree at least 2.
//!
//! Counts are over all polynomials of a given total degree, not scalar
//! classes. Writing `Nbar_n = q^{b_n} - q^{b_{n-1}}` and `F(s) = sum q^{n-1} n^{-s}`,
//! the normalized decomposition gives `Nbar = J * F` as Dirichlet series,
//! so `J_n` follows by recurrence over the divisors of `n`, by an explicit
//! sum over divisor chains, or by Dirichlet division.

use std::collections::HashMap;

use crate::counts::Approximant;
use crate::error::{Error, Result};
use crate::qalg::{big_omega, binom_b, divisors, Degree, QPoly};

fn check_args(nu: u32, n: u64) -> Result<()> {
    if nu < 2 {
        return Err(Error::InvalidArgument(format!(
            "indecomposable counts need nu >= 2, got {nu}"
        )));
    }
    if n < 1 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    Ok(())
}

/// `Nbar_n = q^{b_n} - q^{b_{n-1}}`, all polynomials of total degree exactly `n`.
pub fn count_total_degree(nu: u32, n: u64) -> Result<QPoly> {
    check_args(nu, n)?;
    let hi = binom_b(nu, n as i64)?;
    let lo = binom_b(nu, n as i64 - 1)?;
    Ok(QPoly::from_int_terms(&[(hi, 1), (lo, -1)]))
}

/// Memoized `J_n = Nbar_n - sum_{d | n, d < n} q^{n/d - 1} J_d` for fixed `nu`.
#[derive(Debug, Clone)]
pub struct IndecomposableTable {
    nu: u32,
    memo: HashMap<u64, QPoly>,
}

impl IndecomposableTable {
    pub fn new(nu: u32) -> Result<Self> {
        check_args(nu, 1)?;
        Ok(IndecomposableTable {
            nu,
            memo: HashMap::new(),
        })
    }

    pub fn get(&mut self, n: u64) -> Result<QPoly> {
        check_args(self.nu, n)?;
        if let Some(j) = self.memo.get(&n) {
            return Ok(j.clone());
        }
        let mut terms = count_total_degree(self.nu, n)?.terms().to_vec();
        for d in divisors(n) {
            if d == n {
                continue;
            }
            let jd = self.get(d)?.checked_shift(n / d - 1)?;
            terms.extend(jd.terms().iter().map(|(e, c)| (*e, -c)));
        }
        let j = QPoly::from_terms(terms);
        self.memo.insert(n, j.clone());
        Ok(j)
    }
}

/// Indecomposable polynomials of total degree `n` in `nu >= 2` variables.
pub fn count_indecomposable(nu: u32, n: u64) -> Result<QPoly> {
    IndecomposableTable::new(nu)?.get(n)
}

/// `mu(d, n) = sum over chains d = d_1 | d_2 | ... | d_{k+1} = n, strictly
/// increasing, of (-1)^k q^{d_2/d_1 + ... + d_{k+1}/d_k - k}`; `mu(n, n) = 1`.
#[derive(Debug, Clone, Default)]
pub struct DivisorChainMobius {
    memo: HashMap<(u64, u64), QPoly>,
}

impl DivisorChainMobius {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, d: u64, n: u64) -> Result<QPoly> {
        if d == 0 || n == 0 || n % d != 0 {
            return Err(Error::NotADivisor { d, n });
        }
        if d == n {
            return Ok(QPoly::one());
        }
        if let Some(v) = self.memo.get(&(d, n)) {
            return Ok(v.clone());
        }
        // first link d -> e, then any chain from e to n
        let mut terms = Vec::new();
        for k in divisors(n / d) {
            if k == 1 {
                continue;
            }
            let rest = self.get(d * k, n)?.checked_shift(k - 1)?;
            terms.extend(rest.terms().iter().map(|(e, c)| (*e, -c)));
        }
        let v = QPoly::from_terms(terms);
        self.memo.insert((d, n), v.clone());
        Ok(v)
    }
}

/// `mu(d, n)` for one pair.
pub fn gen_mobius(d: u64, n: u64) -> Result<QPoly> {
    DivisorChainMobius::new().get(d, n)
}

/// `J_n = sum_{d | n} mu(d, n) Nbar_d`.
pub fn count_indecomposable_via_mobius(nu: u32, n: u64) -> Result<QPoly> {
    check_args(nu, n)?;
    let mut mu = DivisorChainMobius::new();
    let mut terms = Vec::new();
    for d in divisors(n) {
        let p = mu.get(d, n)?.checked_mul(&count_total_degree(nu, d)?)?;
        terms.extend(p.terms().iter().cloned());
    }
    Ok(QPoly::from_terms(terms))
}

/// Coefficients `a_1..a_M` of `sum a_n n^{-s}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletSeq {
    coeffs: Vec<QPoly>,
}

impl DirichletSeq {
    pub fn new(coeffs: Vec<QPoly>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("length must be positive".into()));
        }
        Ok(DirichletSeq { coeffs })
    }

    pub fn from_fn(len: usize, f: impl FnMut(u64) -> Result<QPoly>) -> Result<Self> {
        Self::new((1..=len as u64).map(f).collect::<Result<Vec<_>>>()?)
    }

    /// `(1, 0, 0, ...)`, the unit for Dirichlet convolution.
    pub fn identity(len: usize) -> Result<Self> {
        Self::from_fn(len, |n| {
            Ok(if n == 1 { QPoly::one() } else { QPoly::zero() })
        })
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `n^{-s}`, 1-based.
    pub fn coeff(&self, n: usize) -> Result<&QPoly> {
        if n == 0 || n > self.len() {
            return Err(Error::IndexOutOfRange {
                index: n,
                len: self.len(),
            });
        }
        Ok(&self.coeffs[n - 1])
    }

    pub fn coeffs(&self) -> &[QPoly] {
        &self.coeffs
    }

    /// `(a * b)_n = sum_{d | n} a_d b_{n/d}`.
    pub fn mul(&self, other: &DirichletSeq) -> Result<DirichletSeq> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        let m = self.len();
        let mut parts: Vec<Vec<(u64, num_rational::BigRational)>> = vec![Vec::new(); m];
        for i in 1..=m {
            if self.coeffs[i - 1].is_zero() {
                continue;
            }
            for j in 1..=m / i {
                let p = self.coeffs[i - 1].checked_mul(&other.coeffs[j - 1])?;
                parts[i * j - 1].extend(p.terms().iter().cloned());
            }
        }
        Ok(DirichletSeq {
            coeffs: parts.into_iter().map(QPoly::from_terms).collect(),
        })
    }

    /// The `c` with `c * divisor = self`, by long division on the index.
    /// `divisor_1` must be a nonzero constant.
    pub fn div(&self, divisor: &DirichletSeq) -> Result<DirichletSeq> {
        if self.len() != divisor.len() {
            return Err(Error::LengthMismatch(self.len(), divisor.len()));
        }
        let lead = &divisor.coeffs[0];
        let unit = match lead.terms() {
            [(0, c)] => c.clone(),
            _ => return Err(Error::NotInvertible),
        };
        let inv = num_traits::Inv::inv(unit);
        let m = self.len();
        let mut out: Vec<QPoly> = Vec::with_capacity(m);
        for n in 1..=m as u64 {
            let mut terms = self.coeffs[n as usize - 1].terms().to_vec();
            for d in divisors(n) {
                if d == n {
                    continue;
                }
                let p = out[d as usize - 1].checked_mul(&divisor.coeffs[(n / d) as usize - 1])?;
                terms.extend(p.terms().iter().map(|(e, c)| (*e, -c)));
            }
            out.push(QPoly::from_terms(terms).scale(&inv));
        }
        Ok(DirichletSeq { coeffs: out })
    }
}

/// `f_n = q^{n-1}`.
pub fn composition_weights(len: usize) -> Result<DirichletSeq> {
    DirichletSeq::from_fn(len, |n| Ok(QPoly::q_pow(n - 1)))
}

/// `Nbar_1 .. Nbar_M`.
pub fn total_degree_sequence(nu: u32, len: usize) -> Result<DirichletSeq> {
    DirichletSeq::from_fn(len, |n| count_total_degree(nu, n))
}

/// `J_1 .. J_M` by the divisor recurrence.
pub fn indecomposable_sequence(nu: u32, len: usize) -> Result<DirichletSeq> {
    let mut table = IndecomposableTable::new(nu)?;
    DirichletSeq::from_fn(len, |n| table.get(n))
}

/// `J_n ~ Nbar_n - q^{l-1} Nbar_{n/l}` with error `O(q^{l+l'-2} Nbar_{n/l'})`,
/// `l < l'` the two smallest divisors of `n` above 1. Requires `n` to have
/// at least three prime factors counted with multiplicity.
pub fn approx_indecomposable(nu: u32, n: u64) -> Result<Approximant> {
    check_args(nu, n)?;
    if big_omega(n) < 3 {
        return Err(Error::HypothesisViolation(format!(
            "{n} has fewer than three prime factors"
        )));
    }
    let divs = divisors(n);
    let (l, l2) = (divs[1], divs[2]);
    let full =
        &count_total_degree(nu, n)? - &count_total_degree(nu, n / l)?.checked_shift(l - 1)?;
    let tail = match count_total_degree(nu, n / l2)?.degree() {
        Degree::Finite(d) => d,
        Degree::MinusInfinity => unreachable!("Nbar_n is never zero"),
    };
    let err = Degree::Finite(l + l2 - 2 + tail);
    Approximant::from_full_main(&full, err, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn qp(t: &[(u64, i64)]) -> QPoly {
        QPoly::from_int_terms(t)
    }

    #[test]
    fn total_degree_counts() {
        assert_eq!(count_total_degree(2, 1).unwrap(), qp(&[(3, 1), (1, -1)]));
        assert_eq!(
            count_total_degree(2, 100).unwrap(),
            qp(&[(5151, 1), (5050, -1)])
        );
        assert_eq!(
            count_total_degree(2, 2)
                .unwrap()
                .eval_integer(&BigInt::from(2)),
            Some(BigInt::from(56))
        );
        assert!(count_total_degree(1, 2).is_err());
        assert!(count_total_degree(2, 0).is_err());
    }

    #[test]
    fn small_indecomposable_counts() {
        assert_eq!(count_indecomposable(2, 1).unwrap(), qp(&[(3, 1), (1, -1)]));
        let j2 = count_indecomposable(2, 2).unwrap();
        assert_eq!(j2, qp(&[(6, 1), (4, -1), (3, -1), (2, 1)]));
        assert_eq!(j2.eval_integer(&BigInt::from(2)), Some(BigInt::from(44)));
    }

    #[test]
    fn chain_mobius_values() {
        for n in [1u64, 7, 12, 100] {
            assert_eq!(gen_mobius(n, n).unwrap(), QPoly::one());
        }
        for p in [2u64, 3, 5, 7, 11] {
            assert_eq!(gen_mobius(1, p).unwrap(), qp(&[(p - 1, -1)]));
        }
        assert_eq!(gen_mobius(1, 4).unwrap(), qp(&[(2, 1), (3, -1)]));
        assert_eq!(gen_mobius(3, 7), Err(Error::NotADivisor { d: 3, n: 7 }));
        assert!(gen_mobius(0, 7).is_err());
    }

    #[test]
    fn chain_mobius_is_scale_invariant() {
        let mut mu = DivisorChainMobius::new();
        for n in 1..=60u64 {
            for d in divisors(n) {
                assert_eq!(
                    mu.get(d, n).unwrap(),
                    mu.get(1, n / d).unwrap(),
                    "d={d} n={n}"
                );
            }
        }
    }

    #[test]
    fn mobius_form_small_cases() {
        let nb = |n| count_total_degree(2, n).unwrap();
        for p in [2u64, 3, 5, 13] {
            let expect = &nb(p) - &nb(1).checked_shift(p - 1).unwrap();
            assert_eq!(count_indecomposable_via_mobius(2, p).unwrap(), expect);
        }
        let expect =
            &(&nb(4) - &nb(2).checked_shift(1).unwrap()) + &(&qp(&[(2, 1), (3, -1)]) * &nb(1));
        assert_eq!(count_indecomposable_via_mobius(2, 4).unwrap(), expect);
        assert_eq!(count_indecomposable(2, 4).unwrap(), expect);
    }

    #[test]
    fn dirichlet_basics() {
        let a = total_degree_sequence(2, 12).unwrap();
        let e = DirichletSeq::identity(12).unwrap();
        assert_eq!(a.mul(&e).unwrap(), a);
        assert_eq!(a.div(&e).unwrap(), a);
        let one = DirichletSeq::new(vec![qp(&[(4, 3)])]).unwrap();
        let unit = DirichletSeq::new(vec![QPoly::one()]).unwrap();
        assert_eq!(one.div(&unit).unwrap(), one);
        let f = composition_weights(12).unwrap();
        let j = indecomposable_sequence(2, 12).unwrap();
        assert_eq!(j.mul(&f).unwrap().coeff(1).unwrap(), a.coeff(1).unwrap());
        assert!(a.mul(&composition_weights(5).unwrap()).is_err());
        let bad = DirichletSeq::new(vec![qp(&[(1, 1)]); 12]).unwrap();
        assert_eq!(a.div(&bad), Err(Error::NotInvertible));
        assert!(DirichletSeq::new(vec![]).is_err());
        assert!(a.coeff(13).is_err());
    }

    #[test]
    fn approximant_shapes() {
        let a = approx_indecomposable(2, 8).unwrap();
        let nb = |n| count_total_degree(2, n).unwrap();
        assert_eq!(
            a.full_main.value(),
            &nb(8) - &nb(4).checked_shift(1).unwrap()
        );
        assert_eq!(a.main.numerator, a.full_main.value());
        assert_eq!(a.error_exponent, Degree::Finite(4 + 6));
        let a12 = approx_indecomposable(3, 12).unwrap();
        // l = 2, l' = 3
        let nb3 = |n| count_total_degree(3, n).unwrap();
        assert_eq!(
            a12.full_main.value(),
            &nb3(12) - &nb3(6).checked_shift(1).unwrap()
        );
        assert_eq!(
            a12.error_exponent,
            Degree::Finite(3 + binom_b(3, 4).unwrap())
        );
        assert!(matches!(
            approx_indecomposable(2, 6),
            Err(Error::HypothesisViolation(_))
        ));
        assert!(approx_indecomposable(2, 27).is_ok());
    }
}
