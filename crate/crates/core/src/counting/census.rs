use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::CountingError;

/// Sorted `(D, a_D)` pairs; discriminants absent from the list have `a_D = 0`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CensusSeries {
    pairs: Vec<(u64, u64)>,
}

impl CensusSeries {
    /// Pairs must have strictly increasing positive `D`.
    pub fn from_pairs(pairs: Vec<(u64, u64)>) -> Result<Self, CountingError> {
        if let Some(&(d, _)) = pairs.first() {
            if d == 0 {
                return Err(CountingError::InvalidSeries("D must be positive".into()));
            }
        }
        if let Some(w) = pairs.windows(2).find(|w| w[0].0 >= w[1].0) {
            return Err(CountingError::InvalidSeries(format!(
                "D not strictly increasing at {} -> {}",
                w[0].0, w[1].0
            )));
        }
        Ok(Self { pairs })
    }

    /// Counts each occurrence of a discriminant as one field.
    pub fn from_discriminants<I: IntoIterator<Item = u64>>(discs: I) -> Result<Self, CountingError> {
        let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
        for d in discs {
            if d == 0 {
                return Err(CountingError::InvalidSeries("D must be positive".into()));
            }
            *counts.entry(d).or_insert(0) += 1;
        }
        Ok(Self {
            pairs: counts.into_iter().collect(),
        })
    }

    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn max_disc(&self) -> Option<u64> {
        self.pairs.last().map(|p| p.0)
    }

    pub fn get(&self, d: u64) -> u64 {
        self.pairs
            .binary_search_by_key(&d, |p| p.0)
            .map_or(0, |i| self.pairs[i].1)
    }

    fn range(&self, lo_exclusive: u64, hi: u64) -> &[(u64, u64)] {
        let start = self.pairs.partition_point(|p| p.0 <= lo_exclusive);
        let end = self.pairs.partition_point(|p| p.0 <= hi);
        &self.pairs[start..end.max(start)]
    }

    /// `N(X) = Σ_{D <= X} a_D`.
    pub fn count_by_bound(&self, x: u64) -> u64 {
        self.range(0, x).iter().map(|p| p.1).sum()
    }

    /// `Σ_{D <= X} a_D^k`.
    pub fn moment_sum(&self, k: u32, x: u64) -> BigUint {
        power_sum(self.range(0, x), k)
    }

    /// `D ↦ a_D` over the nonzero entries.
    pub fn multiplicities(&self) -> BTreeMap<u64, u64> {
        self.pairs.iter().copied().filter(|p| p.1 > 0).collect()
    }

    /// `m ↦ #{D : a_D = m}` for `m >= 1`.
    pub fn multiplicity_histogram(&self) -> BTreeMap<u64, u64> {
        let mut h = BTreeMap::new();
        for &(_, m) in &self.pairs {
            if m > 0 {
                *h.entry(m).or_insert(0) += 1;
            }
        }
        h
    }

    pub fn max_multiplicity(&self, x: u64) -> u64 {
        self.range(0, x).iter().map(|p| p.1).max().unwrap_or(0)
    }

    /// `D,a_D` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("D,a_D\n");
        for (d, m) in &self.pairs {
            out.push_str(&format!("{d},{m}\n"));
        }
        out
    }
}

fn power_sum(pairs: &[(u64, u64)], k: u32) -> BigUint {
    pairs
        .iter()
        .fold(BigUint::zero(), |acc, &(_, m)| acc + BigUint::from(m).pow(k))
}

/// `Σ_{X < D <= 2X} a_D^k`.
pub fn dyadic_moment(series: &CensusSeries, k: u32, x: u64) -> BigUint {
    power_sum(series.range(x, x.saturating_mul(2)), k)
}

#[derive(Debug, Clone, Serialize)]
pub struct ChebyshevReport {
    #[serde(rename = "X")]
    pub x: u64,
    pub k: u32,
    pub epsilon: f64,
    /// `#{X < D <= 2X : a_D > X^ε}`
    pub exceedances: u64,
    /// `X^{kε} · exceedances`
    pub lhs: f64,
    /// `Σ a_D^k` over the exceeding `D`
    pub rhs: f64,
    pub holds: bool,
}

/// Both sides of `X^{kε} #{a_D > X^ε} <= Σ_{a_D > X^ε} a_D^k` on `(X, 2X]`.
pub fn chebyshev_exceed_check(
    series: &CensusSeries,
    k: u32,
    epsilon: f64,
    x: u64,
) -> Result<ChebyshevReport, CountingError> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(CountingError::Invalid("epsilon must be positive".into()));
    }
    if k == 0 {
        return Err(CountingError::Invalid("k must be at least 1".into()));
    }
    let threshold = (x as f64).powf(epsilon);
    let exceeding: Vec<(u64, u64)> = series
        .range(x, x.saturating_mul(2))
        .iter()
        .copied()
        .filter(|&(_, m)| m as f64 > threshold)
        .collect();
    let exceedances = exceeding.len() as u64;
    let lhs = (x as f64).powf(k as f64 * epsilon) * exceedances as f64;
    let rhs = power_sum(&exceeding, k).to_f64().unwrap_or(f64::INFINITY);
    let holds = lhs <= rhs * (1.0 + 1e-12);
    Ok(ChebyshevReport {
        x,
        k,
        epsilon,
        exceedances,
        lhs,
        rhs,
        holds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitKind {
    /// `log N(X)` against `log X`
    Growth,
    /// `log max_{D <= X} a_D` against `log X`
    MaxMultiplicity,
}

/// Least-squares line through `(log X, log y)` at dyadic `X`.
#[derive(Debug, Clone, Serialize)]
pub struct ExponentFit {
    pub kind: FitKind,
    pub slope: f64,
    pub intercept: f64,
    /// Sum of squared residuals.
    pub residual: f64,
    pub points: usize,
    pub x_min: u64,
    pub x_max: u64,
}

/// Fits over `X = 2^j` with `x_min <= X <= x_max` (default: the largest
/// discriminant), skipping points where the fitted quantity is zero.
pub fn epsilon_fit(
    series: &CensusSeries,
    kind: FitKind,
    x_min: u64,
    x_max: Option<u64>,
) -> Result<ExponentFit, CountingError> {
    let hi = x_max.or(series.max_disc()).unwrap_or(0);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut x = 1u64;
    let mut used = (u64::MAX, 0u64);
    while x <= hi {
        if x >= x_min {
            let y = match kind {
                FitKind::Growth => series.count_by_bound(x),
                FitKind::MaxMultiplicity => series.max_multiplicity(x),
            };
            if y > 0 {
                xs.push((x as f64).ln());
                ys.push((y as f64).ln());
                used = (used.0.min(x), x);
            }
        }
        match x.checked_mul(2) {
            Some(next) => x = next,
            None => break,
        }
    }
    if xs.len() < 3 {
        return Err(CountingError::TooFewPoints(xs.len()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        .max(0.0);
    Ok(ExponentFit {
        kind,
        slope,
        intercept,
        residual,
        points: xs.len(),
        x_min: used.0,
        x_max: used.1,
    })
}
