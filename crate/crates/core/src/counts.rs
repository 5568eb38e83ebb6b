//! Counts of monic and irreducible polynomials by total degree and by
//! multidegree, as exact polynomials in `q`, with first-order approximants.
//!
//! "Monic" in several variables means one representative per class of
//! polynomials up to a nonzero scalar, so every count here is a count of
//! scalar classes and carries the familiar `1/(q - 1)` factor.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::mseries::MSeries;
use crate::qalg::{binom_b, divisors, mobius, Degree, FormalQuotient, QPoly, QPolyOverQm1};
use crate::series::ZSeries;

/// Total degree request: `nu` variables, degree `n`, optional series order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeCountRequest {
    pub nu: u32,
    pub n: u32,
    pub trunc: Option<u32>,
}

impl DegreeCountRequest {
    pub fn new(nu: u32, n: u32, trunc: Option<u32>) -> Result<Self> {
        if nu < 1 || n < 1 {
            return Err(Error::InvalidArgument(format!(
                "need nu >= 1 and n >= 1, got nu = {nu}, n = {n}"
            )));
        }
        if let Some(t) = trunc {
            if t < n {
                return Err(Error::InvalidArgument(format!(
                    "truncation {t} is below the degree {n}"
                )));
            }
        }
        Ok(DegreeCountRequest { nu, n, trunc })
    }

    pub fn series_order(&self) -> u32 {
        self.trunc.unwrap_or(self.n)
    }
}

/// First-order approximation of a count.
///
/// `full_main` is the exact first-order formula; `main` keeps only its terms
/// above the error envelope, which is how such approximations are quoted.
/// `error_exponent` is the q-degree of the envelope for the count itself,
/// not for a `(q - 1)`-scaled numerator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Approximant {
    pub main: FormalQuotient,
    pub full_main: QPolyOverQm1,
    pub error_exponent: Degree,
}

impl Approximant {
    pub(crate) fn from_full_main(
        full: &QPoly,
        error_exponent: Degree,
        scaled: bool,
    ) -> Result<Self> {
        let (full_main, den_pow) = if scaled {
            (QPolyOverQm1::scaled(full)?, 1)
        } else {
            (QPolyOverQm1::from_polynomial(full.clone()), 0)
        };
        // a numerator term q^e stands for degree e - den_pow of the count
        let numerator = match error_exponent {
            Degree::MinusInfinity => full_main.numerator().clone(),
            Degree::Finite(d) => full_main.numerator().terms_above(d + den_pow as u64),
        };
        Ok(Approximant {
            main: FormalQuotient { numerator, den_pow },
            full_main,
            error_exponent,
        })
    }
}

fn check_nu(nu: u32) -> Result<()> {
    if nu == 0 {
        return Err(Error::InvalidArgument("nu must be at least 1".into()));
    }
    Ok(())
}

/// `N_n = (q^{b_n} - q^{b_{n-1}}) / (q - 1)`: scalar classes of degree
/// exactly `n` in `nu` variables. `N_0 = 1`.
pub fn count_monic_total(nu: u32, n: u32) -> Result<QPoly> {
    check_nu(nu)?;
    let hi = binom_b(nu, n as i64)?;
    let lo = binom_b(nu, n as i64 - 1)?;
    Ok(QPoly::from_terms(
        (lo..hi).map(|e| (e, BigRational::from_integer(1.into()))),
    ))
}

/// `N(z) = sum_{n=1}^{T} N_n z^n`.
pub fn monic_total_series(nu: u32, trunc: u32) -> Result<ZSeries> {
    check_nu(nu)?;
    let coeffs = (1..=trunc)
        .map(|n| count_monic_total(nu, n))
        .collect::<Result<Vec<_>>>()?;
    ZSeries::new(coeffs)
}

/// `L(z) = log(1 + N(z))` for `nu` variables, to order `trunc`.
pub fn log_series(nu: u32, trunc: u32) -> Result<ZSeries> {
    if nu < 2 {
        return Err(Error::InvalidArgument(
            "the series path needs nu >= 2; one variable uses the closed form".into(),
        ));
    }
    Ok(monic_total_series(nu, trunc)?.log1p())
}

/// Points at which every count must evaluate to a nonnegative integer.
const CHECK_POINTS: [u64; 4] = [2, 3, 4, 5];

/// Counts are integer-valued polynomials but need not have integer
/// coefficients (`I_2 = N_2 - N_1 (N_1 + 1) / 2`), so the postcondition is
/// checked on values.
pub(crate) fn check_integer_valued(value: &QPoly, what: &str) -> Result<()> {
    for q0 in CHECK_POINTS {
        let v = value.eval(&BigInt::from(q0));
        if !v.is_integer() || v < BigRational::from_integer(0.into()) {
            return Err(Error::IntegralityViolation(format!(
                "{what} at q = {q0} is {v}, not a nonnegative integer"
            )));
        }
    }
    Ok(())
}

/// `I_n` from a precomputed `L = log(1 + N)`.
pub fn irreducible_from_log(log: &ZSeries, n: u32) -> Result<QPolyOverQm1> {
    let value = log.mobius_invert_coeff(n as usize)?;
    check_integer_valued(&value, &format!("I_{n}"))?;
    QPolyOverQm1::compact(&value)
}

/// Irreducible scalar classes of total degree `n` in `nu >= 2` variables.
pub fn count_irreducible_degree(nu: u32, n: u32) -> Result<QPolyOverQm1> {
    let req = DegreeCountRequest::new(nu, n, None)?;
    let log = log_series(req.nu, req.series_order())?;
    irreducible_from_log(&log, n)
}

/// Gauss' count of monic irreducible univariate polynomials of degree `n`.
pub fn count_irreducible_univariate(n: u32) -> Result<QPoly> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Ok(QPoly::from_terms(divisors(n as u64).into_iter().map(|k| {
        (
            n as u64 / k,
            BigRational::new((mobius(k) as i64).into(), (n as i64).into()),
        )
    })))
}

/// `I_n ~ N_n - N_1 N_{n-1}` with error `O(q^{b_{n-2} + b_2 - 2})`.
pub fn approx_irreducible(nu: u32, n: u32) -> Result<Approximant> {
    if nu < 2 {
        return Err(Error::InvalidArgument("approximation needs nu >= 2".into()));
    }
    if n < 3 {
        return Err(Error::HypothesisViolation(format!(
            "approximation needs n >= 3, got {n}"
        )));
    }
    let full = &count_monic_total(nu, n)?
        - &count_monic_total(nu, 1)?.checked_mul(&count_monic_total(nu, n - 1)?)?;
    let err = binom_b(nu, n as i64 - 2)? + binom_b(nu, 2)? - 2;
    Approximant::from_full_main(&full, Degree::Finite(err), true)
}

/// Evaluation helper returning an integer, failing if the value is not one.
pub fn eval_count(p: &QPolyOverQm1, q0: u64) -> Result<BigInt> {
    let v = p.eval(&BigInt::from(q0));
    if v.is_integer() {
        Ok(v.to_integer())
    } else {
        Err(Error::IntegralityViolation(format!(
            "value at q = {q0} is not an integer: {v}"
        )))
    }
}

fn check_multi(index: &[u32]) -> Result<()> {
    if index.len() < 2 {
        return Err(Error::InvalidArgument(
            "multidegree needs at least two variables".into(),
        ));
    }
    if index.iter().all(|&x| x == 0) {
        return Err(Error::InvalidArgument("multidegree must be nonzero".into()));
    }
    Ok(())
}

// inclusion-exclusion over delta in {0,1}^nu; also defined at the zero index
fn monic_multi_unchecked(index: &[u32]) -> Result<QPoly> {
    let nu = index.len();
    let mut terms = Vec::with_capacity(1 << nu);
    for mask in 0u32..(1 << nu) {
        let mut exp: u64 = 1;
        for (i, &n) in index.iter().enumerate() {
            let delta = (mask >> i) & 1;
            exp = exp
                .checked_mul(n as u64 + delta as u64)
                .ok_or(Error::ExponentOverflow)?;
        }
        let sign = if (nu as u32 + mask.count_ones()) % 2 == 0 {
            1
        } else {
            -1
        };
        terms.push((exp, BigRational::from_integer(sign.into())));
    }
    QPoly::from_terms(terms).div_qminus1()
}

/// Scalar classes of multidegree exactly `index` (each `deg_{x_i}` attained).
pub fn count_monic_total_multi(index: &[u32]) -> Result<QPoly> {
    check_multi(index)?;
    monic_multi_unchecked(index)
}

/// `N(z) = sum_{0 < m <= bounds} N_m z^m` over the box.
pub fn monic_multi_series(bounds: &[u32]) -> Result<MSeries> {
    MSeries::from_fn(bounds.to_vec(), monic_multi_unchecked)
}

/// Irreducible scalar classes of multidegree exactly `index`.
pub fn count_irreducible_multi(index: &[u32]) -> Result<QPolyOverQm1> {
    check_multi(index)?;
    let log = monic_multi_series(index)?.log1p();
    let value = log.mobius_invert_mcoeff(index)?;
    check_integer_valued(&value, &format!("I_{index:?}"))?;
    QPolyOverQm1::compact(&value)
}

/// Multidegree sorted descending, the normal form the approximation uses.
pub fn sorted_desc(index: &[u32]) -> Vec<u32> {
    let mut v = index.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// `I_n ~ N_n - N_{e1} N_{n - e1}` with error
/// `O(N_{e2} N_{n - e2}) + O(N_{2 e1} N_{n - 2 e1})`, for `n` sorted
/// descending.
///
/// In the main term the zero index contributes nothing, as in the series
/// `N(z)`; in the error envelope `N_0 = 1`, the formula value. An error
/// product whose shifted index goes negative is absent.
pub fn approx_irreducible_multi(index: &[u32]) -> Result<Approximant> {
    check_multi(index)?;
    let n = sorted_desc(index);
    let nu = n.len();
    let unit = |i: usize, k: u32| {
        let mut e = vec![0u32; nu];
        e[i] = k;
        e
    };
    let minus = |e: &[u32]| -> Option<Vec<u32>> {
        n.iter()
            .zip(e)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
    };
    let mut full = monic_multi_unchecked(&n)?;
    if let Some(rest) = minus(&unit(0, 1)) {
        if rest.iter().any(|&x| x > 0) {
            let prod =
                monic_multi_unchecked(&unit(0, 1))?.checked_mul(&monic_multi_unchecked(&rest)?)?;
            full = &full - &prod;
        }
    }
    let mut err = Degree::MinusInfinity;
    for shift in [unit(1, 1), unit(0, 2)] {
        if let Some(rest) = minus(&shift) {
            let d = monic_multi_unchecked(&shift)?
                .checked_mul(&monic_multi_unchecked(&rest)?)?
                .degree();
            err = err.max(d);
        }
    }
    Approximant::from_full_main(&full, err, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(t: &[(u64, i64)]) -> QPoly {
        QPoly::from_int_terms(t)
    }

    fn at(p: &QPolyOverQm1, q0: u64) -> BigInt {
        eval_count(p, q0).unwrap()
    }

    #[test]
    fn monic_total() {
        assert_eq!(count_monic_total(2, 1).unwrap(), qp(&[(2, 1), (1, 1)]));
        let n2 = count_monic_total(2, 2).unwrap();
        assert_eq!(n2, qp(&[(5, 1), (4, 1), (3, 1)]));
        assert_eq!(
            n2.eval(&BigInt::from(2)),
            BigRational::from_integer(56.into())
        );
        let n100 = count_monic_total(2, 100).unwrap();
        assert_eq!(n100.mul_qminus1().unwrap(), qp(&[(5151, 1), (5050, -1)]));
        assert_eq!(count_monic_total(2, 0).unwrap(), QPoly::one());
    }

    #[test]
    fn irreducible_small_degrees() {
        let i1 = count_irreducible_degree(2, 1).unwrap();
        assert_eq!(i1.den_pow(), 0);
        assert_eq!(i1.value(), qp(&[(2, 1), (1, 1)]));
        assert_eq!(i1.to_string(), "q^2 + q");
        let i2 = count_irreducible_degree(2, 2).unwrap();
        assert_eq!(at(&i2, 2), BigInt::from(35));
        // N_2 - N_1 (N_1 + 1) / 2
        let n1 = count_monic_total(2, 1).unwrap();
        let pairs = (&n1 * &(&n1 + &QPoly::one())).scale(&BigRational::new(1.into(), 2.into()));
        assert_eq!(i2.value(), &count_monic_total(2, 2).unwrap() - &pairs);
        assert!(count_irreducible_degree(1, 3).is_err());
        assert!(count_irreducible_degree(2, 0).is_err());
    }

    #[test]
    fn request_validation() {
        assert!(DegreeCountRequest::new(0, 3, None).is_err());
        assert!(DegreeCountRequest::new(2, 5, Some(4)).is_err());
        assert_eq!(
            DegreeCountRequest::new(2, 5, Some(9))
                .unwrap()
                .series_order(),
            9
        );
    }

    #[test]
    fn gauss_count() {
        assert_eq!(count_irreducible_univariate(1).unwrap(), qp(&[(1, 1)]));
        let i2 = count_irreducible_univariate(2).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(i2, qp(&[(2, 1), (1, -1)]).scale(&half));
        assert_eq!(
            i2.eval(&BigInt::from(2)),
            BigRational::from_integer(1.into())
        );
        let i3 = count_irreducible_univariate(3).unwrap();
        assert_eq!(
            i3.eval(&BigInt::from(2)),
            BigRational::from_integer(2.into())
        );
        assert!(count_irreducible_univariate(0).is_err());
    }

    #[test]
    fn total_degree_approximant() {
        let a = approx_irreducible(2, 3).unwrap();
        assert_eq!(a.error_exponent, Degree::Finite(7));
        let a = approx_irreducible(3, 10).unwrap();
        assert_eq!(a.error_exponent, Degree::Finite(173));
        assert!(matches!(
            approx_irreducible(2, 2),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn multidegree_monic() {
        assert_eq!(count_monic_total_multi(&[0, 1]).unwrap(), qp(&[(1, 1)]));
        assert_eq!(count_monic_total_multi(&[1, 0]).unwrap(), qp(&[(1, 1)]));
        let n11 = count_monic_total_multi(&[1, 1]).unwrap();
        assert_eq!(n11, qp(&[(3, 1), (2, 1), (1, -1)]));
        assert_eq!(
            n11.eval(&BigInt::from(2)),
            BigRational::from_integer(10.into())
        );
        assert!(count_monic_total_multi(&[0, 0]).is_err());
        assert!(count_monic_total_multi(&[3]).is_err());
    }

    #[test]
    fn multidegree_irreducible_small() {
        assert_eq!(count_irreducible_multi(&[1, 0]).unwrap().to_string(), "q");
        assert_eq!(
            at(&count_irreducible_multi(&[1, 0]).unwrap(), 2),
            BigInt::from(2)
        );
        assert_eq!(
            at(&count_irreducible_multi(&[1, 1]).unwrap(), 2),
            BigInt::from(6)
        );
        assert_eq!(
            count_irreducible_multi(&[2, 3]).unwrap(),
            count_irreducible_multi(&[3, 2]).unwrap()
        );
    }

    #[test]
    fn multidegree_approximant_normalizes_order() {
        let a = approx_irreducible_multi(&[3, 2]).unwrap();
        let d1 = (&count_monic_total_multi(&[0, 1]).unwrap()
            * &count_monic_total_multi(&[3, 1]).unwrap())
            .degree();
        let d2 = (&count_monic_total_multi(&[2, 0]).unwrap()
            * &count_monic_total_multi(&[1, 2]).unwrap())
            .degree();
        assert_eq!(a.error_exponent, d1.max(d2));
        assert_eq!(approx_irreducible_multi(&[2, 3]).unwrap(), a);
        let exact = approx_irreducible_multi(&[1, 0]).unwrap();
        assert_eq!(exact.error_exponent, Degree::MinusInfinity);
        assert_eq!(exact.full_main.value(), qp(&[(1, 1)]));
        assert_eq!(exact.main.numerator, qp(&[(2, 1), (1, -1)]));
    }
}
