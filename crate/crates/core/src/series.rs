//! Truncated power series in `z` with [`QPoly`] coefficients and zero
//! constant term, together with the logarithm `log(1 + N(z))` and Möbius
//! inversion over series and over single coefficients.

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qalg::{divisors, mobius, Accumulator, QPoly};

/// `c_1 z + c_2 z^2 + ... + c_T z^T`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "SeriesWire", into = "SeriesWire")]
pub struct ZSeries {
    coeffs: Vec<QPoly>,
}

#[derive(Serialize, Deserialize)]
struct SeriesWire {
    trunc: usize,
    coeffs: Vec<QPoly>,
}

impl TryFrom<SeriesWire> for ZSeries {
    type Error = String;
    fn try_from(w: SeriesWire) -> std::result::Result<Self, String> {
        if w.trunc != w.coeffs.len() || w.trunc == 0 {
            return Err(format!(
                "trunc {} does not match {} coefficients",
                w.trunc,
                w.coeffs.len()
            ));
        }
        Ok(ZSeries { coeffs: w.coeffs })
    }
}

impl From<ZSeries> for SeriesWire {
    fn from(s: ZSeries) -> Self {
        SeriesWire {
            trunc: s.coeffs.len(),
            coeffs: s.coeffs,
        }
    }
}

impl ZSeries {
    /// Series with `coeffs[i]` at `z^(i+1)`; truncation order is the length.
    pub fn new(coeffs: Vec<QPoly>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument(
                "truncation order must be positive".into(),
            ));
        }
        Ok(ZSeries { coeffs })
    }

    /// Series from a coefficient list that includes the constant term at
    /// index 0, which must vanish.
    pub fn from_full_coeffs(mut coeffs: Vec<QPoly>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("empty coefficient list".into()));
        }
        if !coeffs[0].is_zero() {
            return Err(Error::NonZeroConstantTerm);
        }
        coeffs.remove(0);
        Self::new(coeffs)
    }

    pub fn from_fn(trunc: usize, f: impl FnMut(usize) -> QPoly) -> Result<Self> {
        Self::new((1..=trunc).map(f).collect())
    }

    pub fn zero(trunc: usize) -> Result<Self> {
        Self::from_fn(trunc, |_| QPoly::zero())
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[QPoly] {
        &self.coeffs
    }

    /// `[z^m]`, for `1 <= m <= T`.
    pub fn coeff(&self, m: usize) -> Result<&QPoly> {
        if m == 0 || m > self.trunc() {
            return Err(Error::IndexOutOfRange {
                index: m,
                len: self.trunc(),
            });
        }
        Ok(&self.coeffs[m - 1])
    }

    /// Same series cut down to order `trunc`.
    pub fn truncated(&self, trunc: usize) -> Result<Self> {
        if trunc > self.trunc() {
            return Err(Error::IndexOutOfRange {
                index: trunc,
                len: self.trunc(),
            });
        }
        Self::new(self.coeffs[..trunc].to_vec())
    }

    /// `log(1 + self)` to the same order.
    ///
    /// Solves `(1 + N) L' = N'` one coefficient at a time. The recurrence is
    /// run on `M_m = m l_m`, which needs no division:
    /// `M_m = m a_m - sum_{j<m} M_j a_{m-j}`.
    pub fn log1p(&self) -> ZSeries {
        let t = self.trunc();
        let mut scaled: Vec<QPoly> = Vec::with_capacity(t);
        for m in 1..=t {
            let conv = convolve_range(&scaled, &self.coeffs, m);
            let mut acc = Accumulator::new();
            acc.add(&self.coeffs[m - 1].scale_int(m as i64));
            acc.sub(&conv);
            scaled.push(acc.finish());
        }
        let coeffs = scaled
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.scale(&BigRational::new(1.into(), (i as i64 + 1).into())))
            .collect();
        ZSeries { coeffs }
    }

    /// Coefficientwise `(1 + self) * other' - self'` up to `z^(T-1)`; zero
    /// iff `other = log(1 + self)` to order `T`.
    pub fn log_derivative_defect(&self, other: &ZSeries) -> Result<Vec<QPoly>> {
        if self.trunc() != other.trunc() {
            return Err(Error::LengthMismatch(self.trunc(), other.trunc()));
        }
        let t = self.trunc();
        let deriv = |s: &ZSeries| -> Vec<QPoly> {
            // deriv[k] = [z^k] s' = (k+1) c_{k+1}
            (0..t)
                .map(|k| s.coeffs[k].scale_int(k as i64 + 1))
                .collect()
        };
        let dl = deriv(other);
        let dn = deriv(self);
        let mut out = Vec::with_capacity(t);
        for k in 0..t {
            let mut acc = Accumulator::new();
            acc.add(&dl[k]);
            for j in 0..k {
                // [z^k] N * L' = sum_j [z^j]L' * [z^(k-j)]N
                acc.add_product(&dl[j], &self.coeffs[k - j - 1])?;
            }
            acc.sub(&dn[k]);
            out.push(acc.finish());
        }
        Ok(out)
    }

    /// `f(z^k)`, truncated at the same order.
    pub fn substitute_z_pow(&self, k: usize) -> Result<ZSeries> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        let t = self.trunc();
        let mut coeffs = vec![QPoly::zero(); t];
        for m in 1..=t / k {
            coeffs[k * m - 1] = self.coeffs[m - 1].clone();
        }
        Ok(ZSeries { coeffs })
    }

    /// `sum_{k|n} (mu(k)/k) [z^(n/k)] self`.
    pub fn mobius_invert_coeff(&self, n: usize) -> Result<QPoly> {
        if n == 0 || n > self.trunc() {
            return Err(Error::IndexOutOfRange {
                index: n,
                len: self.trunc(),
            });
        }
        let mut acc = Accumulator::new();
        for k in divisors(n as u64) {
            let mu = mobius(k);
            if mu == 0 {
                continue;
            }
            let w = BigRational::new((mu as i64).into(), (k as i64).into());
            acc.add(&self.coeffs[n / k as usize - 1].scale(&w));
        }
        Ok(acc.finish())
    }

    /// Inverse of `f -> sum_{k>=1} f(z^k)`: returns `sum_n mu(n) g(z^n)`.
    pub fn mobius_invert_series(&self) -> ZSeries {
        self.weighted_substitution_sum(|n| {
            BigRational::from_integer((mobius(n as u64) as i64).into())
        })
    }

    /// `sum_n (mu(n)/n) L(z^n)`; applied to `L = log(1 + N)` this is the
    /// series of irreducible counts.
    pub fn log_mobius_series(&self) -> ZSeries {
        self.weighted_substitution_sum(|n| {
            BigRational::new((mobius(n as u64) as i64).into(), (n as i64).into())
        })
    }

    /// `sum_{k>=1} f(z^k)`.
    pub fn multiset_sum(&self) -> ZSeries {
        self.weighted_substitution_sum(|_| BigRational::from_integer(1.into()))
    }

    fn weighted_substitution_sum(&self, weight: impl Fn(usize) -> BigRational) -> ZSeries {
        let t = self.trunc();
        let mut coeffs = Vec::with_capacity(t);
        for m in 1..=t {
            let mut acc = Accumulator::new();
            // [z^m] sum_n w(n) g(z^n) = sum_{n|m} w(n) g_{m/n}
            for n in divisors(m as u64) {
                let w = weight(n as usize);
                if w.is_zero() {
                    continue;
                }
                acc.add(&self.coeffs[m / n as usize - 1].scale(&w));
            }
            coeffs.push(acc.finish());
        }
        ZSeries { coeffs }
    }

    pub fn add(&self, other: &ZSeries) -> Result<ZSeries> {
        if self.trunc() != other.trunc() {
            return Err(Error::LengthMismatch(self.trunc(), other.trunc()));
        }
        Ok(ZSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }
}

/// `sum_{j=1}^{m-1} scaled[j] * a[m-j]` (1-based), split across threads
/// when the work is large enough to pay for it.
fn convolve_range(scaled: &[QPoly], a: &[QPoly], m: usize) -> QPoly {
    const PAR_WORK: usize = 20_000;
    let work: usize = (1..m)
        .map(|j| scaled[j - 1].num_terms() * a[m - j - 1].num_terms())
        .sum();
    let partial = |js: std::ops::Range<usize>| {
        let mut acc = Accumulator::new();
        for j in js {
            acc.add_product(&scaled[j - 1], &a[m - j - 1])
                .expect("q-polynomial exponent overflow");
        }
        acc.finish()
    };
    if work < PAR_WORK || m < 4 {
        return partial(1..m);
    }
    let chunks = rayon::current_num_threads().max(1) * 2;
    let step = (m - 1).div_ceil(chunks).max(1);
    (1..m)
        .step_by(step)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|start| partial(start..(start + step).min(m)))
        .reduce(QPoly::zero, |x, y| &x + &y)
}
