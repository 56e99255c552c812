//! The constant `g(1/a) = Π_p (1 + Σ_{a<k<2a} p^{-k/a})` in
//! `#{D <= X : D a-full} ~ g(1/a) X^{1/a}`.
//!
//! Writing the local factor as `f(x) = Π_m (1 - x^m)^{-b_m}` with integer
//! exponents, `g = Π_{m<=M} ζ(m/a)^{b_m} · Π_p h_p` where
//! `h_p = f(x) Π_{m<=M} (1 - x^m)^{b_m} = 1 + O(x^{M+1})`, so the remaining
//! product converges fast and its tail can be bounded explicitly.

use serde::Serialize;

use super::{CountingError, MAX_A};
use crate::arith;

#[derive(Debug, Clone, Serialize)]
pub struct EulerConstant {
    pub a: u32,
    pub value: f64,
    /// Bound on `|value - g(1/a)|`.
    pub error_bound: f64,
    pub primes_up_to: u64,
    pub zeta_factors: usize,
}

fn local_factor(a: u32, x: f64) -> f64 {
    (a + 1..2 * a).map(|k| x.powi(k as i32)).sum::<f64>()
}

/// `Π_{p <= limit} f(p^{-1/a})`, an increasing lower bound for `g(1/a)`.
pub fn euler_partial_product(a: u32, limit: u64) -> Result<f64, CountingError> {
    check_a(a)?;
    let s = 1.0 / a as f64;
    let ln: f64 = arith::primes_up_to(limit)
        .iter()
        .map(|&p| local_factor(a, (p as f64).powf(-s)).ln_1p())
        .sum();
    Ok(ln.exp())
}

fn check_a(a: u32) -> Result<(), CountingError> {
    if (2..=MAX_A).contains(&a) {
        Ok(())
    } else {
        Err(CountingError::ExponentRange(a))
    }
}

/// Power sums `s_j = j [x^j] log f` for `j <= n`, by Newton's identities.
fn log_coefficients(a: u32, n: usize) -> Vec<i128> {
    let coef = |k: usize| -> i128 { i128::from(k > a as usize && k < 2 * a as usize) };
    let mut s = vec![0i128; n + 1];
    for j in 1..=n {
        let mut v = j as i128 * coef(j);
        for i in 1..j {
            v -= coef(i) * s[j - i];
        }
        s[j] = v;
    }
    s
}

struct Decomposition {
    /// `(m, b_m)` with `b_m != 0`, `m <= M`
    factors: Vec<(usize, i128)>,
    /// `[x^j] log h` for `M < j <= J`, index `j`
    residual: Vec<f64>,
    abs_mb_sum: f64,
}

fn decompose(a: u32, m_max: usize, j_max: usize) -> Decomposition {
    let s = log_coefficients(a, j_max);
    let mut mb = vec![0i128; m_max + 1];
    let mut factors = Vec::new();
    for m in 1..=m_max {
        let v: i128 = (1..=m)
            .filter(|d| m % d == 0)
            .map(|d| arith::mobius((m / d) as u64) as i128 * s[d])
            .sum();
        debug_assert_eq!(v % m as i128, 0);
        mb[m] = v;
        if v != 0 {
            factors.push((m, v / m as i128));
        }
    }
    let mut residual = vec![0.0; j_max + 1];
    for (j, r) in residual.iter_mut().enumerate().skip(m_max + 1) {
        let cancelled: i128 = (1..=m_max).filter(|m| j % m == 0).map(|m| mb[m]).sum();
        *r = (s[j] - cancelled) as f64 / j as f64;
    }
    let abs_mb_sum = mb.iter().map(|v| v.unsigned_abs() as f64).sum();
    Decomposition {
        factors,
        residual,
        abs_mb_sum,
    }
}

/// Positive root of `Σ_{a<k<2a} r^k = 1` (rounded down): every complex root
/// of `f` has modulus at least this.
fn root_radius(a: u32) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if local_factor(a, mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// `Σ_{n>P} n^{-σ} <= P^{1-σ}/(σ-1)`.
fn tail_sum(p: f64, sigma: f64) -> f64 {
    p.powf(1.0 - sigma) / (sigma - 1.0)
}

fn evaluate(a: u32, limit: u64) -> EulerConstant {
    let s = 1.0 / a as f64;
    let m_max = 4 * a as usize;
    let j_max = 3 * m_max;
    let dec = decompose(a, m_max, j_max);

    let mut ln_g = 0.0;
    let mut zeta_err = 0.0;
    for &(m, b) in &dec.factors {
        let z = arith::zeta(m as f64 * s);
        ln_g += b as f64 * z.ln();
        zeta_err += (b as f64).abs() * 2e-15 / z;
    }
    let primes = arith::primes_up_to(limit);
    for &p in &primes {
        let x = (p as f64).powf(-s);
        let mut v = local_factor(a, x).ln_1p();
        for &(m, b) in &dec.factors {
            v += b as f64 * (-x.powi(m as i32)).ln_1p();
        }
        ln_g += v;
    }

    // primes above the limit, coefficients M < j <= J known exactly
    let pf = limit as f64;
    let mut tail = 0.0;
    for (j, e) in dec.residual.iter().enumerate().skip(m_max + 1) {
        tail += e.abs() * tail_sum(pf, j as f64 * s);
    }
    // j > J: |s_j| <= (2a-1) r0^{-j} and the cancelled part is at most Σ|m b_m|
    let r0 = root_radius(a);
    let q_root = 1.0 / (r0 * pf.powf(s));
    let q_plain = pf.powf(-s);
    let first = (j_max + 1) as f64;
    let scale = pf / ((first * s - 1.0) * first);
    tail += scale
        * ((2 * a - 1) as f64 * q_root.powf(first) / (1.0 - q_root)
            + dec.abs_mb_sum * q_plain.powf(first) / (1.0 - q_plain));

    let rounding = 1e-15 * (primes.len() as f64).sqrt() * 8.0 + 1e-14;
    let ln_err = tail + zeta_err + rounding;
    let value = ln_g.exp();
    EulerConstant {
        a,
        value,
        error_bound: value * (ln_err.exp() - 1.0),
        primes_up_to: limit,
        zeta_factors: dec.factors.len(),
    }
}

/// `g(1/a)` to within `tolerance` (absolute).
pub fn euler_constant_g(a: u32, tolerance: f64) -> Result<EulerConstant, CountingError> {
    check_a(a)?;
    if !(tolerance > 0.0) {
        return Err(CountingError::Invalid("tolerance must be positive".into()));
    }
    let mut limit = 1_000u64;
    loop {
        let c = evaluate(a, limit);
        if c.error_bound <= tolerance {
            return Ok(c);
        }
        if limit >= 10_000_000 {
            return Err(CountingError::Precision(tolerance));
        }
        limit *= 10;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decomposition_for_squares() {
        // 1 + x^3 = (1 - x^6) / (1 - x^3)
        let d = decompose(2, 8, 24);
        assert_eq!(d.factors, vec![(3, 1), (6, -1)]);
        assert!(d.residual.iter().all(|&e| e == 0.0));
    }

    #[test]
    fn decomposition_reconstructs_local_factor() {
        for a in 2..=6 {
            let m_max = 4 * a as usize;
            let d = decompose(a, m_max, 3 * m_max);
            let x: f64 = 0.3;
            let mut ln = 0.0;
            for &(m, b) in &d.factors {
                ln -= b as f64 * (-x.powi(m as i32)).ln_1p();
            }
            for (j, e) in d.residual.iter().enumerate() {
                ln += e * x.powi(j as i32);
            }
            let want = local_factor(a, x).ln_1p();
            assert!((ln - want).abs() < 1e-12, "a={a}: {ln} vs {want}");
        }
    }

    #[test]
    fn partial_products() {
        let two = euler_partial_product(2, 2).unwrap();
        assert!((two - (1.0 + 2f64.powf(-1.5))).abs() < 1e-15);
        let mut prev = 0.0;
        for limit in [2, 10, 100, 1000, 10000] {
            let v = euler_partial_product(3, limit).unwrap();
            assert!(v > prev);
            prev = v;
        }
        assert!(prev < euler_constant_g(3, 1e-8).unwrap().value);
    }

    #[test]
    fn error_bound_is_met() {
        for a in 2..=MAX_A {
            let c = euler_constant_g(a, 1e-6).unwrap();
            assert!(c.error_bound <= 1e-6, "a={a}: {c:?}");
            assert!(c.value > euler_partial_product(a, 1000).unwrap());
        }
        assert!(euler_constant_g(1, 1e-6).is_err());
    }
}
