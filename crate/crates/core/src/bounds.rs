//! Explicit upper bounds for ℓ-ranks and ℓ-torsion of class groups in
//! ℓ-extensions, together with their counting ingredients.
//!
//! Integer bounds are exact (`u64`, overflow is an error). Real bounds are
//! `f64` nudged upward after the final operation so that a reported bound is
//! never below the true value of the formula.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith;

/// The constant in `ω(n) ≤ C log n / log log n`, valid for all `n > 2`.
pub const OMEGA_CONSTANT: f64 = 1.3841;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("impossible discriminant D = 2 (Hilbert ramification theory)")]
    ImpossibleDiscriminant,
    #[error("discriminant must be a positive integer")]
    NonPositiveDiscriminant,
    #[error("omega_upper needs n > 2 (log log n must be positive)")]
    OmegaDomain,
    #[error("integer overflow evaluating {0}")]
    Overflow(&'static str),
    #[error("invalid input: {0}")]
    Invalid(String),
}

type Result<T> = std::result::Result<T, BoundError>;

fn check_prime(ell: u64) -> Result<()> {
    if arith::is_prime(ell) {
        Ok(())
    } else {
        Err(BoundError::NotPrime(ell))
    }
}

/// Rounds a computed real up past accumulated evaluation error.
fn round_up(x: f64) -> f64 {
    let padded = x + x.abs() * (8.0 * f64::EPSILON);
    padded.next_up()
}

/// Ramified places of an extension, split into finite primes and infinite
/// places. Each bound documents which count it uses.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamifiedPlaces {
    pub finite: u64,
    pub infinite: u64,
}

impl RamifiedPlaces {
    pub fn new(finite: u64, infinite: u64) -> Self {
        Self { finite, infinite }
    }

    pub fn finite_only(finite: u64) -> Self {
        Self { finite, infinite: 0 }
    }

    pub fn total(&self) -> u64 {
        self.finite + self.infinite
    }
}

/// `(ℓ, r, e_0 .. e_{r-1})` for a tower of cyclic degree-ℓ steps, with
/// `e_i = max(t_i, 1)` the floored ramified-place count of step `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerRamification {
    pub ell: u64,
    pub e: Vec<u64>,
}

impl TowerRamification {
    pub fn new(ell: u64, e: Vec<u64>) -> Result<Self> {
        check_prime(ell)?;
        if e.is_empty() {
            return Err(BoundError::Invalid("tower length r must be at least 1".into()));
        }
        if e.contains(&0) {
            return Err(BoundError::Invalid("every e_i must be at least 1".into()));
        }
        Ok(Self { ell, e })
    }

    /// Floors raw per-step ramified-place counts at 1.
    pub fn from_counts(ell: u64, t: &[u64]) -> Result<Self> {
        Self::new(ell, t.iter().map(|&x| x.max(1)).collect())
    }

    pub fn r(&self) -> usize {
        self.e.len()
    }

    pub fn n(&self) -> Result<u64> {
        checked_pow(self.ell, self.r() as u64, "ℓ^r")
    }
}

/// Degree `d = [F:Q]`, `rk = rk_ℓ(Cl_F)` and optionally `h_ℓ(F) = #Cl_F[ℓ]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseFieldData {
    pub d: u64,
    pub rk: u64,
    pub h_ell: Option<u64>,
}

impl Default for BaseFieldData {
    /// `F = Q`.
    fn default() -> Self {
        Self {
            d: 1,
            rk: 0,
            h_ell: Some(1),
        }
    }
}

impl BaseFieldData {
    pub fn rationals() -> Self {
        Self::default()
    }

    /// `h_ℓ(F)`, checking `h_ℓ(F) = ℓ^rk` when both are supplied.
    pub fn h_ell(&self, ell: u64) -> Result<u64> {
        let expected = checked_pow(ell, self.rk, "ℓ^rk")?;
        match self.h_ell {
            Some(h) if h != expected => Err(BoundError::Invalid(format!(
                "h_ell = {h} is inconsistent with rk = {} (expected {expected})",
                self.rk
            ))),
            _ => Ok(expected),
        }
    }

    fn validate(&self, ell: u64) -> Result<()> {
        if self.d == 0 {
            return Err(BoundError::Invalid("base degree d must be at least 1".into()));
        }
        self.h_ell(ell).map(|_| ())
    }
}

fn checked_pow(base: u64, exp: u64, what: &'static str) -> Result<u64> {
    u32::try_from(exp)
        .ok()
        .and_then(|e| base.checked_pow(e))
        .ok_or(BoundError::Overflow(what))
}

fn mul(a: u64, b: u64, what: &'static str) -> Result<u64> {
    a.checked_mul(b).ok_or(BoundError::Overflow(what))
}

fn add(a: u64, b: u64, what: &'static str) -> Result<u64> {
    a.checked_add(b).ok_or(BoundError::Overflow(what))
}

/// `rk_ℓ(Cl_E) ≤ ℓ (e - 1 + rk_ℓ(Cl_F))` for cyclic `E/F` of degree ℓ, with
/// `e = max(t, 1)` and `t` counting finite and infinite ramified places.
pub fn rank_bound_cyclic(ell: u64, places: RamifiedPlaces, rk_f: u64) -> Result<u64> {
    check_prime(ell)?;
    let e = places.total().max(1);
    mul(ell, add(e - 1, rk_f, "e - 1 + rk")?, "cyclic rank bound")
}

/// `(ℓ - 1)(e - 1)`, valid when `rk_ℓ(Cl_F) = 0`; `t` as in
/// [`rank_bound_cyclic`].
pub fn rank_bound_cyclic_sharp(ell: u64, places: RamifiedPlaces) -> Result<u64> {
    check_prime(ell)?;
    let e = places.total().max(1);
    mul(ell - 1, e - 1, "sharp cyclic rank bound")
}

/// `Σ_{i<r} ℓ^{r-i} (e_i - 1) + ℓ^r rk_ℓ(Cl_F)`.
pub fn rank_bound_tower(tower: &TowerRamification, rk_f: u64) -> Result<u64> {
    let r = tower.r() as u64;
    let mut total = mul(tower.n()?, rk_f, "n rk")?;
    for (i, &e) in tower.e.iter().enumerate() {
        let w = checked_pow(tower.ell, r - i as u64, "ℓ^(r-i)")?;
        total = add(total, mul(w, e - 1, "tower term")?, "tower rank bound")?;
    }
    Ok(total)
}

/// `r n t + n rk_ℓ(Cl_F)` with `n = ℓ^r` and `t` the number of ramified
/// prime ideals of `F` (finite places only).
pub fn rank_bound_simple(ell: u64, r: u64, places: RamifiedPlaces, rk_f: u64) -> Result<u64> {
    check_prime(ell)?;
    if r == 0 {
        return Err(BoundError::Invalid("r must be at least 1".into()));
    }
    let n = checked_pow(ell, r, "ℓ^r")?;
    let rnt = mul(mul(r, n, "r n")?, places.finite, "r n t")?;
    add(rnt, mul(n, rk_f, "n rk")?, "simple rank bound")
}

/// Number of distinct prime factors; `ω(1) = 0`.
pub fn omega(n: u64) -> Result<u32> {
    if n == 0 {
        return Err(BoundError::Invalid("omega needs n >= 1".into()));
    }
    Ok(arith::omega(n))
}

/// `ω(𝔫) ≤ d ω(n)` for an ideal of absolute norm `n` in a degree-`d` field.
pub fn omega_ideal_bound(omega_abs: u64, d: u64) -> Result<u64> {
    mul(d, omega_abs, "d ω")
}

/// `C d log n / log log n`.
pub fn omega_upper(n: u64, d: u64) -> Result<f64> {
    if n <= 2 {
        return Err(BoundError::OmegaDomain);
    }
    let ln = (n as f64).ln();
    Ok(round_up(OMEGA_CONSTANT * d as f64 * ln / ln.ln()))
}

fn check_disc(disc: u64) -> Result<()> {
    match disc {
        0 => Err(BoundError::NonPositiveDiscriminant),
        2 => Err(BoundError::ImpossibleDiscriminant),
        _ => Ok(()),
    }
}

/// `n rk_ℓ(Cl_F) + n r C d log D / log log D` for an ℓ-group extension of
/// degree `n = ℓ^r` and absolute discriminant `D`; exactly `n rk` at `D = 1`.
pub fn torsion_rank_bound(ell: u64, r: u64, base: &BaseFieldData, disc: u64) -> Result<f64> {
    check_prime(ell)?;
    base.validate(ell)?;
    check_disc(disc)?;
    let n = checked_pow(ell, r, "ℓ^r")?;
    let unramified = mul(n, base.rk, "n rk")? as f64;
    if disc == 1 {
        return Ok(unramified);
    }
    let ln = (disc as f64).ln();
    let tail = n as f64 * r as f64 * OMEGA_CONSTANT * base.d as f64 * ln / ln.ln();
    Ok(round_up(unramified + tail))
}

/// A real bound that may be too large for `f64`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum BoundValue {
    Integer(u64),
    Real(f64),
    /// Natural logarithm of a value beyond `f64` range.
    Log { ln: f64 },
}

impl BoundValue {
    /// Natural logarithm of the value.
    pub fn ln(&self) -> f64 {
        match *self {
            BoundValue::Integer(v) => (v as f64).ln(),
            BoundValue::Real(v) => v.ln(),
            BoundValue::Log { ln } => ln,
        }
    }

    pub fn as_f64(&self) -> f64 {
        match *self {
            BoundValue::Integer(v) => v as f64,
            BoundValue::Real(v) => v,
            BoundValue::Log { ln } => ln.exp(),
        }
    }
}

impl std::fmt::Display for BoundValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundValue::Integer(v) => write!(f, "{v}"),
            BoundValue::Real(v) => write!(f, "{v}"),
            BoundValue::Log { ln } => write!(f, "exp({ln})"),
        }
    }
}

/// `h_ℓ(F)^{ns} · D^{C n d r s log ℓ / log log D}`, an upper bound for
/// `h_{ℓ^s}(E)`; `s = 1` gives the bound for `h_ℓ(E)`.
pub fn torsion_power_bound(
    s: u64,
    ell: u64,
    r: u64,
    base: &BaseFieldData,
    disc: u64,
) -> Result<BoundValue> {
    check_prime(ell)?;
    base.validate(ell)?;
    check_disc(disc)?;
    if s == 0 {
        return Err(BoundError::Invalid("s must be at least 1".into()));
    }
    let n = checked_pow(ell, r, "ℓ^r")?;
    let h = base.h_ell(ell)?;
    let ns = mul(n, s, "n s")?;
    if disc == 1 {
        return Ok(match u32::try_from(ns).ok().and_then(|e| h.checked_pow(e)) {
            Some(v) => BoundValue::Integer(v),
            None => BoundValue::Log {
                ln: round_up(ns as f64 * (h as f64).ln()),
            },
        });
    }
    let ln_d = (disc as f64).ln();
    let exponent =
        OMEGA_CONSTANT * n as f64 * base.d as f64 * r as f64 * s as f64 * (ell as f64).ln()
            / ln_d.ln();
    let ln_value = ns as f64 * (h as f64).ln() + exponent * ln_d;
    let value = round_up(ln_value.exp());
    Ok(if value.is_finite() {
        BoundValue::Real(value)
    } else {
        BoundValue::Log {
            ln: round_up(ln_value),
        }
    })
}

/// `h_ℓ(F)^n · D^{C n d r log ℓ / log log D}`.
pub fn torsion_size_bound(ell: u64, r: u64, base: &BaseFieldData, disc: u64) -> Result<BoundValue> {
    torsion_power_bound(1, ell, r, base, disc)
}

/// `ω(𝔣_0) + 3d + rk_ℓ(Cl_F)` for the ℓ-rank of a ray class group.
pub fn ray_class_rank_bound(omega_f0: u64, d: u64, rk_f: u64) -> Result<u64> {
    add(add(omega_f0, mul(3, d, "3d")?, "ω + 3d")?, rk_f, "ray class rank")
}

/// `h_ℓ(F) · ℓ^{ω(𝔣_0) + 3d + rk}` with `rk = log_ℓ h_ℓ(F)`: the explicit part
/// of the count of cyclic degree-ℓ extensions with a given discriminant.
pub fn cyclic_count_bound(ell: u64, omega_f0: u64, d: u64, h_ell_f: u64) -> Result<u64> {
    check_prime(ell)?;
    let rk = match arith::prime_power(h_ell_f) {
        _ if h_ell_f == 1 => 0,
        Some((p, e)) if p == ell => e as u64,
        _ => {
            return Err(BoundError::Invalid(format!(
                "h_ell = {h_ell_f} is not a power of {ell}"
            )))
        }
    };
    let rank = ray_class_rank_bound(omega_f0, d, rk)?;
    mul(h_ell_f, checked_pow(ell, rank, "ℓ^rank")?, "cyclic count bound")
}

/// `Π_{p^s ∥ D} binom(d + s - 1, d - 1)`: the most ideals of norm `D` a
/// degree-`d` field can have (all primes split).
pub fn ideal_count_bound(d: u64, disc: u64) -> Result<u64> {
    if d == 0 {
        return Err(BoundError::Invalid("d must be at least 1".into()));
    }
    if disc == 0 {
        return Err(BoundError::NonPositiveDiscriminant);
    }
    let mut total: u64 = 1;
    for (_, s) in arith::factorize(disc) {
        let b = arith::binomial(d + s as u64 - 1, d - 1)
            .and_then(|v| u64::try_from(v).ok())
            .ok_or(BoundError::Overflow("binomial"))?;
        total = mul(total, b, "ideal count")?;
    }
    Ok(total)
}

/// `v_𝔭(Disc(E/F)) ≤ [E:F][F:Q]` at a tamely ramified prime.
pub fn tame_disc_valuation_bound(n_e: u64, d_f: u64) -> Result<u64> {
    if n_e == 0 || d_f == 0 {
        return Err(BoundError::Invalid("degrees must be at least 1".into()));
    }
    mul(n_e, d_f, "tame valuation bound")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaTag {
    CyclicRank,
    CyclicRankSharp,
    TowerRank,
    SimpleRank,
    Omega,
    OmegaUpper,
    TorsionRank,
    TorsionSize,
    TorsionPower,
    RayClassRank,
    CyclicCount,
    IdealCount,
    TameValuation,
}

/// One evaluated bound with its inputs echoed back.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub formula: FormulaTag,
    pub inputs: BTreeMap<String, Value>,
    pub value: BoundValue,
    pub notes: Vec<String>,
}

/// A bound to evaluate, in a form convenient for front ends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "formula", rename_all = "kebab-case")]
pub enum BoundRequest {
    CyclicRank { ell: u64, places: RamifiedPlaces, rk_f: u64 },
    CyclicRankSharp { ell: u64, places: RamifiedPlaces },
    TowerRank { tower: TowerRamification, rk_f: u64 },
    SimpleRank { ell: u64, r: u64, places: RamifiedPlaces, rk_f: u64 },
    Omega { n: u64, d: u64 },
    OmegaUpper { n: u64, d: u64 },
    TorsionRank { ell: u64, r: u64, base: BaseFieldData, disc: u64 },
    TorsionSize { ell: u64, r: u64, base: BaseFieldData, disc: u64 },
    TorsionPower { s: u64, ell: u64, r: u64, base: BaseFieldData, disc: u64 },
    RayClassRank { omega_f0: u64, d: u64, rk_f: u64 },
    CyclicCount { ell: u64, omega_f0: u64, d: u64, h_ell_f: u64 },
    IdealCount { d: u64, disc: u64 },
    TameValuation { n_e: u64, d_f: u64 },
}

fn base_inputs(inputs: &mut BTreeMap<String, Value>, base: &BaseFieldData) {
    inputs.insert("d".into(), json!(base.d));
    inputs.insert("rk_f".into(), json!(base.rk));
    if let Some(h) = base.h_ell {
        inputs.insert("h_ell_f".into(), json!(h));
    }
}

impl BoundRequest {
    pub fn evaluate(&self) -> Result<BoundReport> {
        let mut inputs: BTreeMap<String, Value> = BTreeMap::new();
        let mut notes: Vec<String> = Vec::new();
        let mut put = |k: &str, v: Value| {
            inputs.insert(k.to_string(), v);
        };
        let (formula, value) = match self {
            BoundRequest::CyclicRank { ell, places, rk_f } => {
                put("ell", json!(ell));
                put("t_finite", json!(places.finite));
                put("t_infinite", json!(places.infinite));
                put("rk_f", json!(rk_f));
                notes.push("t counts finite and infinite ramified places; e = max(t, 1)".into());
                (
                    FormulaTag::CyclicRank,
                    BoundValue::Integer(rank_bound_cyclic(*ell, *places, *rk_f)?),
                )
            }
            BoundRequest::CyclicRankSharp { ell, places } => {
                put("ell", json!(ell));
                put("t_finite", json!(places.finite));
                put("t_infinite", json!(places.infinite));
                notes.push("valid only when rk_ell(Cl_F) = 0".into());
                notes.push("t counts finite and infinite ramified places; e = max(t, 1)".into());
                (
                    FormulaTag::CyclicRankSharp,
                    BoundValue::Integer(rank_bound_cyclic_sharp(*ell, *places)?),
                )
            }
            BoundRequest::TowerRank { tower, rk_f } => {
                put("ell", json!(tower.ell));
                put("r", json!(tower.r()));
                put("e", json!(tower.e));
                put("rk_f", json!(rk_f));
                (
                    FormulaTag::TowerRank,
                    BoundValue::Integer(rank_bound_tower(tower, *rk_f)?),
                )
            }
            BoundRequest::SimpleRank { ell, r, places, rk_f } => {
                put("ell", json!(ell));
                put("r", json!(r));
                put("t_finite", json!(places.finite));
                put("rk_f", json!(rk_f));
                notes.push("t counts ramified prime ideals of F (finite places only)".into());
                if places.infinite > 0 {
                    notes.push(format!("{} infinite places ignored", places.infinite));
                }
                (
                    FormulaTag::SimpleRank,
                    BoundValue::Integer(rank_bound_simple(*ell, *r, *places, *rk_f)?),
                )
            }
            BoundRequest::Omega { n, d } => {
                put("n", json!(n));
                put("d", json!(d));
                let w = omega(*n)? as u64;
                put("omega", json!(w));
                notes.push("value is d * omega(n), a bound for omega of an ideal of norm n".into());
                (
                    FormulaTag::Omega,
                    BoundValue::Integer(omega_ideal_bound(w, *d)?),
                )
            }
            BoundRequest::OmegaUpper { n, d } => {
                put("n", json!(n));
                put("d", json!(d));
                put("C", json!(OMEGA_CONSTANT));
                notes.push("requires n > 2".into());
                (FormulaTag::OmegaUpper, BoundValue::Real(omega_upper(*n, *d)?))
            }
            BoundRequest::TorsionRank { ell, r, base, disc } => {
                put("ell", json!(ell));
                put("r", json!(r));
                put("D", json!(disc));
                base_inputs(&mut inputs, base);
                notes.push(if *disc == 1 {
                    "D = 1 branch: n rk_ell(Cl_F)".to_string()
                } else {
                    "requires D > 2".to_string()
                });
                (
                    FormulaTag::TorsionRank,
                    BoundValue::Real(torsion_rank_bound(*ell, *r, base, *disc)?),
                )
            }
            BoundRequest::TorsionSize { ell, r, base, disc } => {
                put("ell", json!(ell));
                put("r", json!(r));
                put("D", json!(disc));
                base_inputs(&mut inputs, base);
                notes.push("requires D = 1 or D > 2".into());
                (
                    FormulaTag::TorsionSize,
                    torsion_size_bound(*ell, *r, base, *disc)?,
                )
            }
            BoundRequest::TorsionPower { s, ell, r, base, disc } => {
                put("s", json!(s));
                put("ell", json!(ell));
                put("r", json!(r));
                put("D", json!(disc));
                base_inputs(&mut inputs, base);
                notes.push("bounds h_{ell^s}(E) via h_{ell^s}(E) <= h_ell(E)^s".into());
                (
                    FormulaTag::TorsionPower,
                    torsion_power_bound(*s, *ell, *r, base, *disc)?,
                )
            }
            BoundRequest::RayClassRank { omega_f0, d, rk_f } => {
                put("omega_f0", json!(omega_f0));
                put("d", json!(d));
                put("rk_f", json!(rk_f));
                (
                    FormulaTag::RayClassRank,
                    BoundValue::Integer(ray_class_rank_bound(*omega_f0, *d, *rk_f)?),
                )
            }
            BoundRequest::CyclicCount { ell, omega_f0, d, h_ell_f } => {
                put("ell", json!(ell));
                put("omega_f0", json!(omega_f0));
                put("d", json!(d));
                put("h_ell_f", json!(h_ell_f));
                notes.push("explicit part only; the O_{d,ell} constant is not included".into());
                (
                    FormulaTag::CyclicCount,
                    BoundValue::Integer(cyclic_count_bound(*ell, *omega_f0, *d, *h_ell_f)?),
                )
            }
            BoundRequest::IdealCount { d, disc } => {
                put("d", json!(d));
                put("D", json!(disc));
                (
                    FormulaTag::IdealCount,
                    BoundValue::Integer(ideal_count_bound(*d, *disc)?),
                )
            }
            BoundRequest::TameValuation { n_e, d_f } => {
                put("n_e", json!(n_e));
                put("d_f", json!(d_f));
                notes.push("valid at tamely ramified primes only".into());
                (
                    FormulaTag::TameValuation,
                    BoundValue::Integer(tame_disc_valuation_bound(*n_e, *d_f)?),
                )
            }
        };
        Ok(BoundReport {
            formula,
            inputs,
            value,
            notes,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(n: u64) -> RamifiedPlaces {
        RamifiedPlaces::finite_only(n)
    }

    #[test]
    fn cyclic_examples() {
        assert_eq!(rank_bound_cyclic(2, t(3), 0).unwrap(), 4);
        assert_eq!(rank_bound_cyclic(3, t(0), 2).unwrap(), 6);
        assert_eq!(rank_bound_cyclic(2, t(2), 0).unwrap(), 2);
        assert_eq!(rank_bound_cyclic(4, t(2), 0), Err(BoundError::NotPrime(4)));
        // disc -20: primes 2, 5 and the infinite place
        assert_eq!(rank_bound_cyclic(2, RamifiedPlaces::new(2, 1), 0).unwrap(), 4);
    }

    #[test]
    fn sharp_examples() {
        assert_eq!(rank_bound_cyclic_sharp(2, t(3)).unwrap(), 2);
        assert_eq!(rank_bound_cyclic_sharp(2, t(1)).unwrap(), 0);
        assert_eq!(rank_bound_cyclic_sharp(2, RamifiedPlaces::new(2, 1)).unwrap(), 2);
    }

    #[test]
    fn tower_examples() {
        let tw = TowerRamification::new(2, vec![1, 2]).unwrap();
        assert_eq!(rank_bound_tower(&tw, 0).unwrap(), 2);
        let flat = TowerRamification::new(5, vec![1, 1, 1]).unwrap();
        assert_eq!(rank_bound_tower(&flat, 0).unwrap(), 0);
        let tw = TowerRamification::new(3, vec![2, 4]).unwrap();
        assert_eq!(rank_bound_tower(&tw, 1).unwrap(), 27);
        assert!(TowerRamification::new(2, vec![]).is_err());
        assert!(TowerRamification::new(2, vec![0]).is_err());
        assert_eq!(TowerRamification::from_counts(2, &[0, 3]).unwrap().e, vec![1, 3]);
    }

    #[test]
    fn simple_examples() {
        assert_eq!(rank_bound_simple(2, 2, t(1), 0).unwrap(), 8);
        for tt in 1..20 {
            assert_eq!(rank_bound_simple(2, 1, t(tt), 0).unwrap(), 2 * tt);
            assert!(rank_bound_simple(2, 1, t(tt), 0).unwrap() >= rank_bound_cyclic(2, t(tt), 0).unwrap());
        }
        assert_eq!(rank_bound_simple(3, 2, t(2), 1).unwrap(), 45);
        // e_i <= max(3^i * 2, 1)
        let tw = TowerRamification::new(3, vec![2, 6]).unwrap();
        assert!(rank_bound_tower(&tw, 1).unwrap() <= 45);
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(1).unwrap(), 0);
        assert_eq!(omega(360).unwrap(), 3);
        assert_eq!(omega(510510).unwrap(), 7);
        assert_eq!(omega_ideal_bound(3, 4).unwrap(), 12);
        assert!((omega_upper(1_000_000, 1).unwrap() - 7.2823).abs() < 1e-3);
        assert!((omega_upper(30, 1).unwrap() - 3.846).abs() < 1e-3);
        assert_eq!(omega_upper(2, 1), Err(BoundError::OmegaDomain));
    }

    #[test]
    fn torsion_examples() {
        let q = BaseFieldData::rationals();
        assert_eq!(torsion_rank_bound(2, 1, &q, 1).unwrap(), 0.0);
        let f = BaseFieldData { d: 2, rk: 3, h_ell: None };
        assert_eq!(torsion_rank_bound(2, 2, &f, 1).unwrap(), 12.0);
        assert!((torsion_rank_bound(2, 1, &q, 1_000_000).unwrap() - 14.56).abs() < 0.01);
        assert_eq!(torsion_rank_bound(2, 1, &q, 2), Err(BoundError::ImpossibleDiscriminant));
        assert_eq!(torsion_rank_bound(2, 1, &q, 0), Err(BoundError::NonPositiveDiscriminant));
        let size = torsion_size_bound(2, 1, &q, 1_000_000).unwrap().as_f64();
        assert!((size / 2.42e4 - 1.0).abs() < 0.01, "{size}");
        let f = BaseFieldData { d: 1, rk: 2, h_ell: Some(9) };
        assert_eq!(torsion_size_bound(3, 1, &f, 1).unwrap(), BoundValue::Integer(729));
        let s1 = torsion_power_bound(1, 2, 1, &q, 1_000_000).unwrap().ln();
        let s2 = torsion_power_bound(2, 2, 1, &q, 1_000_000).unwrap().ln();
        assert!((s2 / s1 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn inconsistent_base_field() {
        let f = BaseFieldData { d: 1, rk: 1, h_ell: Some(4) };
        assert!(matches!(torsion_rank_bound(2, 1, &f, 10), Err(BoundError::Invalid(_))));
    }

    #[test]
    fn huge_size_bound_is_reported_as_log() {
        let q = BaseFieldData::rationals();
        let v = torsion_size_bound(7, 6, &q, u64::MAX).unwrap();
        assert!(matches!(v, BoundValue::Log { .. }));
        let rank = torsion_rank_bound(7, 6, &q, u64::MAX).unwrap();
        // h_ell(E) <= ell^rank when h_F = 1
        assert!((v.ln() - rank * 7f64.ln()).abs() / v.ln() < 1e-9);
    }

    #[test]
    fn ray_class_and_counts() {
        assert_eq!(ray_class_rank_bound(0, 1, 0).unwrap(), 3);
        assert_eq!(ray_class_rank_bound(2, 1, 0).unwrap(), 5);
        assert_eq!(cyclic_count_bound(2, 2, 1, 1).unwrap(), 32);
        assert_eq!(cyclic_count_bound(3, 0, 1, 3).unwrap(), 3 * 81);
        assert!(cyclic_count_bound(3, 0, 1, 2).is_err());
    }

    #[test]
    fn ideal_counts() {
        for disc in 1..200 {
            assert_eq!(ideal_count_bound(1, disc).unwrap(), 1);
        }
        assert_eq!(ideal_count_bound(3, 49).unwrap(), 6);
        assert_eq!(ideal_count_bound(2, 12).unwrap(), 6);
    }

    #[test]
    fn tame_examples() {
        assert_eq!(tame_disc_valuation_bound(2, 1).unwrap(), 2);
        assert_eq!(tame_disc_valuation_bound(4, 2).unwrap(), 8);
    }

    #[test]
    fn report_serialization() {
        let rep = BoundRequest::CyclicRank {
            ell: 2,
            places: t(3),
            rk_f: 0,
        }
        .evaluate()
        .unwrap();
        let v = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["formula"], "cyclic-rank");
        assert_eq!(v["value"], 4);
        assert_eq!(v["inputs"]["ell"], 2);
        assert!(v["notes"].is_array());
        let big = BoundRequest::TorsionSize {
            ell: 7,
            r: 6,
            base: BaseFieldData::rationals(),
            disc: u64::MAX,
        }
        .evaluate()
        .unwrap();
        assert!(serde_json::to_value(&big).unwrap()["value"]["ln"].is_number());
    }
}
