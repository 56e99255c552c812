use serde::Serialize;

use super::{euler_constant_g, CountingError};
use crate::arith;

pub const MAX_A: u32 = 10;
pub const MAX_X: u64 = 1_000_000_000_000;

fn check(a: u32, x: u64) -> Result<(), CountingError> {
    if !(2..=MAX_A).contains(&a) {
        return Err(CountingError::ExponentRange(a));
    }
    if x > MAX_X {
        return Err(CountingError::LimitCap { x, cap: MAX_X });
    }
    Ok(())
}

fn candidate_primes(a: u32, x: u64) -> Vec<u64> {
    if x == 0 {
        return Vec::new();
    }
    arith::primes_up_to(arith::iroot(x, a))
}

/// Visits every a-full `D <= x` that is a multiple of `cur` by primes from
/// `primes[from..]`, `cur` itself included.
fn walk(primes: &[u64], from: usize, cur: u64, a: u32, x: u64, visit: &mut dyn FnMut(u64)) {
    visit(cur);
    for (j, &p) in primes.iter().enumerate().skip(from) {
        let pa = p.pow(a);
        if cur > x / pa {
            break;
        }
        let mut v = cur * pa;
        loop {
            walk(primes, j + 1, v, a, x, visit);
            if v > x / p {
                break;
            }
            v *= p;
        }
    }
}

/// All `D <= x` with `p | D ⇒ p^a | D`, increasing, starting at 1.
pub fn afull_enumerate(a: u32, x: u64) -> Result<Vec<u64>, CountingError> {
    check(a, x)?;
    let mut out = Vec::new();
    if x == 0 {
        return Ok(out);
    }
    let primes = candidate_primes(a, x);
    walk(&primes, 0, 1, a, x, &mut |d| out.push(d));
    out.sort_unstable();
    Ok(out)
}

/// `#{D <= x : D a-full}`.
pub fn afull_count(a: u32, x: u64) -> Result<u64, CountingError> {
    check(a, x)?;
    if x == 0 {
        return Ok(0);
    }
    let primes = candidate_primes(a, x);
    let mut n = 0u64;
    walk(&primes, 0, 1, a, x, &mut |_| n += 1);
    Ok(n)
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticReport {
    pub a: u32,
    #[serde(rename = "X")]
    pub x: u64,
    pub count: u64,
    pub constant: f64,
    pub deviation: f64,
}

/// Compares `afull_count(a, x)` with `g(1/a) x^{1/a}`.
pub fn verify_afull_asymptotic(a: u32, x: u64) -> Result<AsymptoticReport, CountingError> {
    let count = afull_count(a, x)?;
    let constant = euler_constant_g(a, 1e-9)?.value;
    let predicted = constant * (x as f64).powf(1.0 / a as f64);
    Ok(AsymptoticReport {
        a,
        x,
        count,
        constant,
        deviation: (count as f64 / predicted - 1.0).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(a: u32, x: u64) -> Vec<u64> {
        (1..=x)
            .filter(|&d| arith::factorize(d).iter().all(|&(_, e)| e >= a))
            .collect()
    }

    #[test]
    fn small_counts() {
        assert_eq!(
            afull_enumerate(2, 100).unwrap(),
            vec![1, 4, 8, 9, 16, 25, 27, 32, 36, 49, 64, 72, 81, 100]
        );
        assert_eq!(afull_count(2, 100).unwrap(), 14);
        assert_eq!(afull_enumerate(3, 100).unwrap(), vec![1, 8, 16, 27, 32, 64, 81]);
        for a in 2..=10 {
            assert_eq!(afull_count(a, 1).unwrap(), 1);
        }
        assert_eq!(afull_count(2, 0).unwrap(), 0);
    }

    #[test]
    fn matches_naive_filter() {
        for a in 2..=4 {
            assert_eq!(afull_enumerate(a, 5000).unwrap(), naive(a, 5000));
        }
    }

    #[test]
    fn argument_checks() {
        assert_eq!(afull_count(1, 10), Err(CountingError::ExponentRange(1)));
        assert_eq!(afull_count(11, 10), Err(CountingError::ExponentRange(11)));
        assert!(matches!(afull_count(2, MAX_X + 1), Err(CountingError::LimitCap { .. })));
    }

    #[test]
    fn handles_cap_without_overflow() {
        let n = afull_count(10, MAX_X).unwrap();
        assert!(n > 1);
        assert_eq!(n as usize, afull_enumerate(10, MAX_X).unwrap().len());
    }

    #[test]
    fn asymptotic_small_x_is_just_reported() {
        let r = verify_afull_asymptotic(2, 100).unwrap();
        assert_eq!(r.count, 14);
        assert!(r.deviation > 0.1);
    }
}
