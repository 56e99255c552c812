//! Integer arithmetic shared by the other modules: sieving, deterministic
//! 64-bit primality, Pollard–Brent factorization, and a real zeta function.

/// All primes `<= limit`, in increasing order.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller–Rabin; the first twelve prime bases are a proven
/// witness set for every `n < 3.3 * 10^24`, so in particular all of `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL_PRIMES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

// Brent's cycle detection with batched gcds. `n` must be odd and composite.
fn pollard_brent(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            // batch overshot; replay one step at a time
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Prime factorization `n = prod p^e`, primes in increasing order.
/// `factorize(1)` is empty; `factorize(0)` is also empty by convention.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    if n <= 1 {
        return out;
    }
    let mut m = n;
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    let mut stack = vec![m];
    let mut large = Vec::new();
    while let Some(x) = stack.pop() {
        if x == 1 {
            continue;
        }
        if is_prime(x) {
            large.push(x);
            continue;
        }
        if let Some(r) = perfect_square_root(x) {
            stack.push(r);
            stack.push(r);
            continue;
        }
        let d = pollard_brent(x);
        stack.push(d);
        stack.push(x / d);
    }
    large.sort_unstable();
    for p in large {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

fn perfect_square_root(x: u64) -> Option<u64> {
    let r = isqrt(x);
    (r * r == x).then_some(r)
}

/// Floor of the square root.
pub fn isqrt(x: u64) -> u64 {
    if x == 0 {
        return 0;
    }
    let mut r = (x as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|s| s > x) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= x) {
        r += 1;
    }
    r
}

/// Floor of the `k`-th root.
pub fn iroot(x: u64, k: u32) -> u64 {
    if k == 1 || x <= 1 {
        return x;
    }
    let mut r = (x as f64).powf(1.0 / k as f64).round() as u64;
    let pow_le = |r: u64| r.checked_pow(k).is_some_and(|v| v <= x);
    while r > 0 && !pow_le(r) {
        r -= 1;
    }
    while pow_le(r + 1) {
        r += 1;
    }
    r
}

/// Number of distinct prime factors; `omega(1) = 0`.
pub fn omega(n: u64) -> u32 {
    factorize(n).len() as u32
}

pub fn is_squarefree(n: u64) -> bool {
    n != 0 && factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Möbius function.
pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// If `n = p^e` for a prime `p` and `e >= 1`, returns `(p, e)`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    match factorize(n).as_slice() {
        [(p, e)] => Some((*p, *e)),
        _ => None,
    }
}

/// Exact binomial coefficient, `None` on `u128` overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

// B_2, B_4, ..., B_24
const BERNOULLI_EVEN: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

/// Riemann zeta at a real argument `s > 1` via Euler–Maclaurin summation.
/// Absolute error is below `1e-15` for `s >= 1.05`.
pub fn zeta(s: f64) -> f64 {
    assert!(s > 1.0, "zeta is only evaluated on s > 1");
    const N: usize = 30;
    let n = N as f64;
    let head: f64 = (1..N).map(|k| (k as f64).powf(-s)).sum();
    let mut tail = n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    // rising factorial s(s+1)...(s+2j-2) / (2j)! * N^{-s-2j+1}
    let mut coef = s / 2.0 * n.powf(-s - 1.0);
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        tail += b * coef;
        let m = 2.0 * (j as f64 + 1.0);
        coef *= (s + m - 1.0) * (s + m) / ((m + 1.0) * (m + 2.0)) / (n * n);
    }
    head + tail
}
