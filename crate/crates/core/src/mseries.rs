//! Multivariate power series in `z_1..z_nu`, truncated to a box
//! `0 <= n_i <= T_i`, with [`QPoly`] coefficients and zero constant term.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qalg::{divisors, mobius, multi_gcd, Accumulator, QPoly};
use crate::series::ZSeries;

/// Largest number of cells a truncation box may hold.
pub const MAX_BOX_CELLS: u64 = 1_000_000;

pub type MultiIndex = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MSeries {
    bounds: Vec<u32>,
    // nonzero coefficients only, lexicographic index order
    coeffs: BTreeMap<MultiIndex, QPoly>,
}

impl MSeries {
    pub fn zero(bounds: Vec<u32>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::InvalidArgument("need at least one variable".into()));
        }
        let cells = bounds
            .iter()
            .try_fold(1u64, |acc, &t| acc.checked_mul(t as u64 + 1))
            .unwrap_or(u64::MAX);
        if cells > MAX_BOX_CELLS {
            return Err(Error::InvalidArgument(format!(
                "truncation box has {cells} cells, limit is {MAX_BOX_CELLS}"
            )));
        }
        Ok(MSeries {
            bounds,
            coeffs: BTreeMap::new(),
        })
    }

    /// Series whose coefficient at every nonzero index in the box is `f(index)`.
    pub fn from_fn(bounds: Vec<u32>, mut f: impl FnMut(&[u32]) -> Result<QPoly>) -> Result<Self> {
        let mut s = Self::zero(bounds)?;
        for idx in box_indices(&s.bounds) {
            if idx.iter().all(|&x| x == 0) {
                continue;
            }
            let c = f(&idx)?;
            s.set(idx, c)?;
        }
        Ok(s)
    }

    /// Embeds a univariate series as `z_1`, other bounds zero.
    pub fn from_univariate(s: &ZSeries, nu: usize) -> Result<Self> {
        let mut bounds = vec![0; nu];
        bounds[0] = s.trunc() as u32;
        let mut out = Self::zero(bounds)?;
        for (i, c) in s.coeffs().iter().enumerate() {
            let mut idx = vec![0; nu];
            idx[0] = i as u32 + 1;
            out.set(idx, c.clone())?;
        }
        Ok(out)
    }

    pub fn nvars(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[u32] {
        &self.bounds
    }

    fn check_index(&self, idx: &[u32]) -> Result<()> {
        if idx.len() != self.bounds.len() || idx.iter().zip(&self.bounds).any(|(i, t)| i > t) {
            return Err(Error::OutOfBounds {
                index: idx.to_vec(),
                bounds: self.bounds.clone(),
            });
        }
        Ok(())
    }

    pub fn set(&mut self, idx: MultiIndex, c: QPoly) -> Result<()> {
        self.check_index(&idx)?;
        if idx.iter().all(|&x| x == 0) {
            if c.is_zero() {
                return Ok(());
            }
            return Err(Error::NonZeroConstantTerm);
        }
        if c.is_zero() {
            self.coeffs.remove(&idx);
        } else {
            self.coeffs.insert(idx, c);
        }
        Ok(())
    }

    /// `[z^idx]`, zero when absent.
    pub fn coeff(&self, idx: &[u32]) -> Result<QPoly> {
        self.check_index(idx)?;
        Ok(self.coeffs.get(idx).cloned().unwrap_or_default())
    }

    /// Nonzero coefficients in lexicographic index order.
    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &QPoly)> {
        self.coeffs.iter()
    }

    /// Variable with the largest bound, smallest index on ties.
    pub fn default_pivot(&self) -> usize {
        pick_pivot(&self.bounds, &(0..self.nvars()).collect::<Vec<_>>())
    }

    pub fn log1p(&self) -> MSeries {
        self.log1p_with_pivot(self.default_pivot())
            .expect("default pivot is in range")
    }

    /// `log(1 + self)` within the box, differentiating in `z_pivot` first.
    ///
    /// Indices with a positive pivot exponent come from
    /// `(1 + N) dL/dz_p = dN/dz_p`; the rest form the same problem on the
    /// remaining variables, solved recursively.
    pub fn log1p_with_pivot(&self, pivot: usize) -> Result<MSeries> {
        if pivot >= self.nvars() {
            return Err(Error::InvalidArgument(format!(
                "pivot {pivot} out of range for {} variables",
                self.nvars()
            )));
        }
        let mut out = MSeries {
            bounds: self.bounds.clone(),
            coeffs: BTreeMap::new(),
        };
        let active: Vec<usize> = (0..self.nvars()).collect();
        self.log_on_support(&active, Some(pivot), &mut out.coeffs);
        Ok(out)
    }

    fn log_on_support(
        &self,
        active: &[usize],
        pivot: Option<usize>,
        out: &mut BTreeMap<MultiIndex, QPoly>,
    ) {
        if active.is_empty() {
            return;
        }
        let p = pivot.unwrap_or_else(|| pick_pivot(&self.bounds, active));
        let rest: Vec<usize> = active.iter().copied().filter(|&v| v != p).collect();
        self.log_on_support(&rest, None, out);

        // box restricted to the active variables, pivot exponent >= 1
        let mut sub_bounds = vec![0u32; self.nvars()];
        for &v in active {
            sub_bounds[v] = self.bounds[v];
        }
        let mut scaled: HashMap<MultiIndex, QPoly> = HashMap::new();
        let mut order: Vec<MultiIndex> = box_indices(&sub_bounds)
            .into_iter()
            .filter(|idx| idx[p] >= 1)
            .collect();
        order.sort_by(|a, b| a[p].cmp(&b[p]).then_with(|| a.cmp(b)));
        let mut done: Vec<MultiIndex> = Vec::new();
        for n in order {
            let np = n[p] as i64;
            let mut acc = Accumulator::new();
            if let Some(a) = self.coeffs.get(&n) {
                acc.add(&a.scale_int(np));
            }
            for j in &done {
                if !j.iter().zip(&n).all(|(a, b)| a <= b) {
                    continue;
                }
                let diff: MultiIndex = n.iter().zip(j).map(|(a, b)| a - b).collect();
                if let Some(a) = self.coeffs.get(&diff) {
                    acc.add_product(&-&scaled[j], a)
                        .expect("q-polynomial exponent overflow");
                }
            }
            let m = acc.finish();
            if !m.is_zero() {
                out.insert(n.clone(), m.scale(&BigRational::new(1.into(), np.into())));
                scaled.insert(n.clone(), m);
                done.push(n);
            }
        }
    }

    /// Coefficientwise `(1 + self) dL/dz_p - dN/dz_p` over the box; zero
    /// iff `log = log(1 + self)` in every cell with positive pivot exponent.
    pub fn pivot_derivative_defect(
        &self,
        log: &MSeries,
        pivot: usize,
    ) -> Result<Vec<(MultiIndex, QPoly)>> {
        if self.bounds != log.bounds {
            return Err(Error::InvalidArgument("bounds differ".into()));
        }
        let mut out = Vec::new();
        for n in box_indices(&self.bounds) {
            if n[pivot] == 0 {
                continue;
            }
            let np = n[pivot] as i64;
            let mut acc = Accumulator::new();
            for (j, l) in &log.coeffs {
                if j[pivot] == 0 || !j.iter().zip(&n).all(|(a, b)| a <= b) {
                    continue;
                }
                let lj = l.scale_int(j[pivot] as i64);
                if *j == n {
                    acc.add(&lj);
                    continue;
                }
                let diff: MultiIndex = n.iter().zip(j).map(|(a, b)| a - b).collect();
                if let Some(a) = self.coeffs.get(&diff) {
                    acc.add_product(&lj, a)?;
                }
            }
            if let Some(a) = self.coeffs.get(&n) {
                acc.sub(&a.scale_int(np));
            }
            out.push((n, acc.finish()));
        }
        Ok(out)
    }

    /// `sum_{k | gcd(idx)} (mu(k)/k) [z^(idx/k)] self`.
    pub fn mobius_invert_mcoeff(&self, idx: &[u32]) -> Result<QPoly> {
        self.check_index(idx)?;
        let g = multi_gcd(idx);
        if g == 0 {
            return Err(Error::InvalidArgument(
                "Möbius inversion needs a nonzero multi-index".into(),
            ));
        }
        let mut acc = Accumulator::new();
        for k in divisors(g as u64) {
            let mu = mobius(k);
            if mu == 0 {
                continue;
            }
            let sub: MultiIndex = idx.iter().map(|&x| x / k as u32).collect();
            if let Some(c) = self.coeffs.get(&sub) {
                acc.add(&c.scale(&BigRational::new((mu as i64).into(), (k as i64).into())));
            }
        }
        Ok(acc.finish())
    }
}

fn pick_pivot(bounds: &[u32], active: &[usize]) -> usize {
    let mut best = active[0];
    for &v in active {
        if bounds[v] > bounds[best] {
            best = v;
        }
    }
    best
}

/// All indices in the box, lexicographic order.
pub fn box_indices(bounds: &[u32]) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; bounds.len()];
    loop {
        out.push(cur.clone());
        let mut i = bounds.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < bounds[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
        }
    }
}

#[derive(Serialize, Deserialize)]
struct MSeriesWire {
    bounds: Vec<u32>,
    coeffs: Vec<(MultiIndex, QPoly)>,
}

/// JSON: `{"bounds":[..],"coeffs":[[[n1..],<QPoly>],...]}`, lexicographic.
impl Serialize for MSeries {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        MSeriesWire {
            bounds: self.bounds.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MSeries {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let w = MSeriesWire::deserialize(deserializer)?;
        let mut s = MSeries::zero(w.bounds).map_err(serde::de::Error::custom)?;
        for (idx, c) in w.coeffs {
            s.set(idx, c).map_err(serde::de::Error::custom)?;
        }
        Ok(s)
    }
}
