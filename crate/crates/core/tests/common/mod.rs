//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

pub fn is_afull_naive(d: u64, a: u32) -> bool {
    let mut n = d;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if e < a {
                return false;
            }
        }
        p += 1;
    }
    n == 1
}

/// `ζ(s)` from the alternating series with Borwein's acceleration.
pub fn zeta_oracle(s: f64) -> f64 {
    let n = 60usize;
    let mut d = vec![0f64; n + 1];
    let mut term = 1.0 / n as f64;
    let mut acc = term;
    d[0] = n as f64 * acc;
    for i in 1..=n {
        term *= ((n + i - 1) as f64) * 4.0 * ((n - i + 1) as f64)
            / ((2 * i - 1) as f64 * (2 * i) as f64);
        acc += term;
        d[i] = n as f64 * acc;
    }
    let mut eta = 0.0;
    for k in 0..n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        eta += sign * (d[n] - d[k]) / ((k + 1) as f64).powf(s);
    }
    eta /= d[n];
    eta / (1.0 - 2f64.powf(1.0 - s))
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

/// Number of `SL_2(Z)` classes of primitive positive forms of discriminant
/// `d < 0`, by joining forms inside `max(a, |b|, c) <= |d|/4 + 1` along the
/// moves `S: (a,b,c) -> (c,-b,a)` and `T^{±1}: (a,b,c) -> (a, b±2a, a±b+c)`.
/// Every reduction path stays in this box, so components are classes.
pub fn naive_class_number(d: i64) -> usize {
    let bound = -d / 4 + 1;
    let mut forms: Vec<(i64, i64, i64)> = Vec::new();
    for a in 1..=bound {
        for b in -bound..=bound {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c <= bound && gcd(gcd(a, b), c) == 1 {
                forms.push((a, b, c));
            }
        }
    }
    let index: HashMap<(i64, i64, i64), usize> =
        forms.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut parent: Vec<usize> = (0..forms.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, &(a, b, c)) in forms.iter().enumerate() {
        for f in [(c, -b, a), (a, b + 2 * a, a + b + c), (a, b - 2 * a, a - b + c)] {
            if let Some(&j) = index.get(&f) {
                let (x, y) = (find(&mut parent, i), find(&mut parent, j));
                parent[x] = y;
            }
        }
    }
    (0..forms.len()).filter(|&i| find(&mut parent, i) == i).count()
}

/// Kronecker symbol `(d / n)` for `n >= 1`.
pub fn kronecker(d: i64, n: u64) -> i64 {
    let mut result = 1i64;
    let mut n = n;
    let mut twos = 0;
    while n % 2 == 0 {
        n /= 2;
        twos += 1;
    }
    if twos > 0 {
        let r = d.rem_euclid(8);
        let chi2 = match r {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
        if twos % 2 == 1 {
            result *= chi2;
        } else if chi2 == 0 {
            result = 0;
        }
    }
    if n == 1 || result == 0 {
        return result;
    }
    // Jacobi symbol (d mod n / n) for odd n
    let mut a = d.rem_euclid(n as i64) as u64;
    let mut m = n;
    let mut j = 1i64;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if m % 8 == 3 || m % 8 == 5 {
                j = -j;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            j = -j;
        }
        a %= m;
    }
    if m == 1 { result * j } else { 0 }
}

/// `h(D) = -(w / (2|D|)) Σ_{n=1}^{|D|} χ_D(n) n`.
pub fn analytic_class_number(d: i64) -> u64 {
    let n = d.unsigned_abs();
    let w: i64 = match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    };
    let s: i64 = (1..n).map(|k| kronecker(d, k) * k as i64).sum();
    let h = -w * s;
    assert_eq!(h % (2 * n as i64), 0);
    (h / (2 * n as i64)) as u64
}

/// Identity, inverse, closure, commutativity and associativity of a
/// multiplication table over `0..h`. Returns the first failed axiom.
pub fn abelian_axioms(table: &[Vec<usize>], identity: usize) -> Result<(), String> {
    let h = table.len();
    for (i, row) in table.iter().enumerate() {
        if row.len() != h || row.iter().any(|&x| x >= h) {
            return Err(format!("closure at row {i}"));
        }
        if row[identity] != i || table[identity][i] != i {
            return Err(format!("identity at {i}"));
        }
        if !row.contains(&identity) {
            return Err(format!("no inverse for {i}"));
        }
        let mut seen = vec![false; h];
        for &x in row {
            if std::mem::replace(&mut seen[x], true) {
                return Err(format!("row {i} is not a permutation"));
            }
        }
        for j in 0..h {
            if row[j] != table[j][i] {
                return Err(format!("commutativity at ({i}, {j})"));
            }
        }
    }
    for x in 0..h {
        for y in 0..h {
            let xy = table[x][y];
            for z in 0..h {
                if table[xy][z] != table[x][table[y][z]] {
                    return Err(format!("associativity at ({x}, {y}, {z})"));
                }
            }
        }
    }
    Ok(())
}

/// `#{x : x^m = 1}` for each `m` dividing the group order, from a table.
/// For a finite abelian group these counts determine its structure.
pub fn torsion_counts(table: &[Vec<usize>], identity: usize) -> Vec<(usize, usize)> {
    let h = table.len();
    let order_of = |x: usize| {
        let (mut y, mut k) = (x, 1);
        while y != identity {
            y = table[y][x];
            k += 1;
        }
        k
    };
    let orders: Vec<usize> = (0..h).map(order_of).collect();
    (1..=h)
        .filter(|m| h % m == 0)
        .map(|m| (m, orders.iter().filter(|&&o| m % o == 0).count()))
        .collect()
}

/// The same counts for `Z/d_1 × … × Z/d_r`.
pub fn torsion_counts_of(invariants: &[u64]) -> Vec<(usize, usize)> {
    let h: u64 = invariants.iter().product();
    let g = |a: u64, b: u64| -> u64 {
        let (mut a, mut b) = (a, b);
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    (1..=h)
        .filter(|m| h % m == 0)
        .map(|m| (m as usize, invariants.iter().map(|&d| g(m, d)).product::<u64>() as usize))
        .collect()
}
