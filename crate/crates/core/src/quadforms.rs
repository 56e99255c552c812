//! Class groups of imaginary quadratic fields through reduced positive
//! definite binary quadratic forms.

use num_traits::{Euclid, PrimInt, Signed};
use serde::Serialize;
use thiserror::Error;

use crate::arith;
use crate::bounds::{self, RamifiedPlaces};

/// Largest `|D|` accepted by [`class_group`].
pub const MAX_ABS_DISC: i64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("discriminant must be negative, got {0}")]
    NotNegative(i64),
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("|D| = {0} exceeds the cap {MAX_ABS_DISC}")]
    TooLarge(i64),
    #[error("form ({a}, {b}, {c}) is not positive definite")]
    NotPositive { a: i64, b: i64, c: i64 },
    #[error("forms have different discriminants")]
    DiscriminantMismatch,
}

/// `a x^2 + b x y + c y^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        Self { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && !(b < 0 && (b.abs() == a || a == c))
    }

    /// The principal form of discriminant `d < 0`.
    pub fn principal(d: i64) -> Self {
        let b = d.rem_euclid(2);
        Self::new(1, b, (b * b - d) / 4)
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.a, -self.b, self.c)
    }

    /// Reduced form of the same class.
    pub fn reduce(&self) -> Result<Self, FormError> {
        let d = self.discriminant();
        if d >= 0 || self.a <= 0 {
            return Err(FormError::NotPositive {
                a: self.a,
                b: self.b,
                c: self.c,
            });
        }
        Ok(reduce_unchecked(self.a as i128, self.b as i128, d as i128))
    }

    /// A reduced representative of the class product.
    pub fn compose(&self, other: &QuadForm) -> Result<QuadForm, FormError> {
        let d = self.discriminant();
        if d != other.discriminant() {
            return Err(FormError::DiscriminantMismatch);
        }
        Ok(compose_with::<i128>(&self.reduce()?, &other.reduce()?, d))
    }
}

impl std::fmt::Display for QuadForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Reduction of the form `(a, b, (b^2 - d)/4a)`.
fn reduce_unchecked<T: PrimInt + Signed + Euclid>(mut a: T, mut b: T, d: T) -> QuadForm {
    let four = T::from(4).expect("small constant");
    let mut c = (b * b - d) / (four * a);
    loop {
        // normalize b into (-a, a]
        if b <= -a || b > a {
            let two_a = a + a;
            let mut r = b.rem_euclid(&two_a);
            if r > a {
                r = r - two_a;
            }
            b = r;
            c = (b * b - d) / (four * a);
        }
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        break;
    }
    if b < T::zero() && (a == c || -b == a) {
        b = -b;
    }
    let cast = |x: T| x.to_i64().expect("reduced coefficients fit i64");
    QuadForm::new(cast(a), cast(b), cast(c))
}

fn ext_gcd<T: PrimInt + Signed + Euclid>(a: T, b: T) -> (T, T, T) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (T::one(), T::zero());
    let (mut t0, mut t1) = (T::zero(), T::one());
    while r1 != T::zero() {
        let q = r0.div_euclid(&r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < T::zero() {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Dirichlet composition followed by reduction.
fn compose_with<T: PrimInt + Signed + Euclid>(f: &QuadForm, g: &QuadForm, d: i64) -> QuadForm {
    let lift = |x: i64| T::from(x).expect("fits");
    let two = lift(2);
    let (a1, b1) = (lift(f.a), lift(f.b));
    let (a2, b2) = (lift(g.a), lift(g.b));
    let d = lift(d);
    let s = (b1 + b2) / two;
    let (g1, u, v) = ext_gcd(a1, a2);
    let (e, p, q) = ext_gcd(g1, s);
    let (x, y, z) = (p * u, p * v, q);
    let big_a = a1 / e * (a2 / e);
    let num = a1 * b2 * x + a2 * b1 * y + z * ((b1 * b2 + d) / two);
    let big_b = (num / e).rem_euclid(&(two * big_a));
    reduce_unchecked(big_a, big_b, d)
}

/// Composition of reduced forms with `|D| <= MAX_ABS_DISC`, where every
/// intermediate fits in `i64`.
fn compose_small(f: &QuadForm, g: &QuadForm, d: i64) -> QuadForm {
    // leading coefficients of reduced forms are below 2^11 here
    let s = (f.b + g.b) / 2;
    let (g1, u, v) = ext_gcd(f.a as i32, g.a as i32);
    let (e, p, q) = ext_gcd(g1, s as i32);
    let (x, y, z) = ((p * u) as i64, (p * v) as i64, q as i64);
    let e = e as i64;
    let big_a = f.a / e * (g.a / e);
    let num = f.a * g.b * x + g.a * f.b * y + z * ((f.b * g.b + d) / 2);
    let big_b = (num / e).rem_euclid(2 * big_a);
    reduce_unchecked(big_a, big_b, d)
}

pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => arith::is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && arith::is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// Negative fundamental discriminants with `|D| <= limit`, by decreasing `D`.
pub fn negative_fundamental_discriminants(limit: i64) -> Vec<i64> {
    (3..=limit.max(0)).map(|n| -n).filter(|&d| is_fundamental(d)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormClassGroup {
    disc: i64,
    forms: Vec<QuadForm>,
    invariants: Vec<u64>,
}

fn check_disc(d: i64) -> Result<(), FormError> {
    if d >= 0 {
        return Err(FormError::NotNegative(d));
    }
    if -d > MAX_ABS_DISC {
        return Err(FormError::TooLarge(-d));
    }
    if !is_fundamental(d) {
        return Err(FormError::NotFundamental(d));
    }
    Ok(())
}

/// All reduced forms of discriminant `d < 0`, sorted.
pub fn reduced_forms(d: i64) -> Vec<QuadForm> {
    let n = -d;
    let mut out = Vec::new();
    let mut a = 1;
    while 3 * a * a <= n {
        // b has the parity of d and lies in (-a, a]
        let mut b = -a + 1;
        if (b - n).rem_euclid(2) != 0 {
            b += 1;
        }
        while b <= a {
            let num = b * b + n;
            if num % (4 * a) == 0 {
                let f = QuadForm::new(a, b, num / (4 * a));
                if f.is_reduced() {
                    out.push(f);
                }
            }
            b += 2;
        }
        a += 1;
    }
    out.sort_unstable();
    out
}

impl FormClassGroup {
    fn from_forms(disc: i64, mut forms: Vec<QuadForm>) -> Self {
        forms.sort_unstable();
        let invariants = structure(disc, &forms);
        Self {
            disc,
            forms,
            invariants,
        }
    }

    pub fn discriminant(&self) -> i64 {
        self.disc
    }

    pub fn class_number(&self) -> u64 {
        self.forms.len() as u64
    }

    pub fn forms(&self) -> &[QuadForm] {
        &self.forms
    }

    /// Elementary divisors `d_1 | d_2 | …`, all greater than 1.
    pub fn invariants(&self) -> &[u64] {
        &self.invariants
    }

    pub fn identity(&self) -> usize {
        self.index_of(&QuadForm::principal(self.disc)).expect("principal form")
    }

    pub fn index_of(&self, f: &QuadForm) -> Option<usize> {
        self.forms.binary_search(f).ok()
    }

    pub fn compose(&self, i: usize, j: usize) -> usize {
        let f = compose_small(&self.forms[i], &self.forms[j], self.disc);
        self.index_of(&f).expect("composition stays in the class group")
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.index_of(&self.forms[i].inverse().reduce().expect("positive"))
            .expect("inverse is a class")
    }

    /// `h x h` table of class indices.
    pub fn composition_table(&self) -> Vec<Vec<usize>> {
        let h = self.forms.len();
        (0..h).map(|i| (0..h).map(|j| self.compose(i, j)).collect()).collect()
    }

    /// `rk_ℓ` from the elementary divisors.
    pub fn rank(&self, ell: u64) -> u64 {
        self.invariants.iter().filter(|&&d| d % ell == 0).count() as u64
    }

    pub fn two_rank(&self) -> u64 {
        self.rank(2)
    }
}

/// Elementary divisors of the class group spanned by `forms`, found by
/// growing a subgroup one cyclic extension at a time and taking the Smith
/// form of the relations.
fn structure(disc: i64, forms: &[QuadForm]) -> Vec<u64> {
    const UNSEEN: u32 = u32::MAX;
    let h = forms.len();
    let index = |f: &QuadForm| forms.binary_search(f).expect("class representative");
    let identity = index(&QuadForm::principal(disc));
    // element t = g_level^exp * parent, so coordinates unwind along parents
    let mut parent = vec![UNSEEN; h];
    let mut level = vec![0u32; h];
    let mut exponent = vec![0i64; h];
    parent[identity] = identity as u32;
    let mut members = vec![identity];
    let mut relations: Vec<Vec<i64>> = Vec::new();
    let mut next = 0;
    while members.len() < h {
        while parent[next] != UNSEEN {
            next += 1;
        }
        let g = next;
        let rank = relations.len();
        let mut powers = vec![identity, g];
        let mut cur = g;
        while parent[cur] == UNSEEN {
            cur = index(&compose_small(&forms[cur], &forms[g], disc));
            powers.push(cur);
        }
        let m = powers.len() - 1;
        let mut rel = vec![0i64; rank + 1];
        let mut t = cur;
        while t != identity {
            rel[level[t] as usize] -= exponent[t];
            t = parent[t] as usize;
        }
        rel[rank] = m as i64;
        relations.push(rel);
        let base_len = members.len();
        for (i, &pi) in powers.iter().enumerate().take(m).skip(1) {
            for b in 0..base_len {
                let s = members[b];
                let t = index(&compose_small(&forms[pi], &forms[s], disc));
                parent[t] = s as u32;
                level[t] = rank as u32;
                exponent[t] = i as i64;
                members.push(t);
            }
        }
    }
    let n = relations.len();
    let mut mat: Vec<Vec<i128>> = relations
        .into_iter()
        .map(|mut r| {
            r.resize(n, 0);
            r.into_iter().map(i128::from).collect()
        })
        .collect();
    let mut inv: Vec<u64> = smith_diagonal(&mut mat)
        .into_iter()
        .filter(|&d| d > 1)
        .map(|d| d as u64)
        .collect();
    inv.sort_unstable();
    inv
}

/// Diagonal of the Smith normal form of a square integer matrix.
fn smith_diagonal(m: &mut [Vec<i128>]) -> Vec<i128> {
    let n = m.len();
    for t in 0..n {
        loop {
            let mut pivot: Option<(usize, usize, i128)> = None;
            for (i, row) in m.iter().enumerate().skip(t) {
                for (j, &v) in row.iter().enumerate().skip(t) {
                    if v != 0 && pivot.is_none_or(|best| v.abs() < best.2) {
                        pivot = Some((i, j, v.abs()));
                    }
                }
            }
            let Some((pi, pj, _)) = pivot else {
                return (0..n).map(|i| m[i][i].abs()).collect();
            };
            m.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            let p = m[t][t];
            let mut clean = true;
            for i in t + 1..n {
                let q = m[i][t] / p;
                if q != 0 {
                    for j in t..n {
                        m[i][j] -= q * m[t][j];
                    }
                }
                clean &= m[i][t] == 0;
            }
            for j in t + 1..n {
                let q = m[t][j] / p;
                if q != 0 {
                    for row in m.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                clean &= m[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // the pivot must divide the remaining block
            let bad = (t + 1..n).find(|&i| (t + 1..n).any(|j| m[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in t..n {
                        let v = m[i][j];
                        m[t][j] += v;
                    }
                }
                None => break,
            }
        }
    }
    (0..n).map(|i| m[i][i].abs()).collect()
}

pub fn class_group(d: i64) -> Result<FormClassGroup, FormError> {
    check_disc(d)?;
    Ok(FormClassGroup::from_forms(d, reduced_forms(d)))
}

/// Class groups for every negative fundamental `D` with `|D| <= limit`,
/// ordered by `|D|`. Reduced forms are enumerated in blocks of `|D|` and
/// blocks are processed on all available cores.
pub fn class_groups_up_to(limit: i64) -> Result<Vec<FormClassGroup>, FormError> {
    if limit > MAX_ABS_DISC {
        return Err(FormError::TooLarge(limit));
    }
    if limit < 3 {
        return Ok(Vec::new());
    }
    const BLOCK: i64 = 16_384;
    let blocks: Vec<(i64, i64)> = (0..)
        .map(|i| (3 + i * BLOCK, (3 + (i + 1) * BLOCK - 1).min(limit)))
        .take_while(|&(lo, _)| lo <= limit)
        .collect();
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(blocks.len());
    let mut results: Vec<Vec<FormClassGroup>> = vec![Vec::new(); blocks.len()];
    std::thread::scope(|scope| {
        let chunks: Vec<_> = results.chunks_mut(1).zip(&blocks).collect();
        let mut per_thread: Vec<Vec<_>> = (0..threads).map(|_| Vec::new()).collect();
        for (i, item) in chunks.into_iter().enumerate() {
            per_thread[i % threads].push(item);
        }
        for work in per_thread {
            scope.spawn(move || {
                for (slot, &(lo, hi)) in work {
                    slot[0] = block_class_groups(lo, hi);
                }
            });
        }
    });
    Ok(results.into_iter().flatten().collect())
}

fn block_class_groups(lo: i64, hi: i64) -> Vec<FormClassGroup> {
    let width = (hi - lo + 1) as usize;
    let fundamental: Vec<bool> = (lo..=hi).map(|n| is_fundamental(-n)).collect();
    let mut buckets: Vec<Vec<QuadForm>> = vec![Vec::new(); width];
    let mut a = 1i64;
    while 3 * a * a <= hi {
        for b in -a + 1..=a {
            let cmin = ((lo + b * b) + 4 * a - 1).div_euclid(4 * a).max(a);
            let mut c = cmin;
            loop {
                let n = 4 * a * c - b * b;
                if n > hi {
                    break;
                }
                let k = (n - lo) as usize;
                if n >= lo && fundamental[k] && !(b < 0 && a == c) {
                    buckets[k].push(QuadForm::new(a, b, c));
                }
                c += 1;
            }
        }
        a += 1;
    }
    buckets
        .into_iter()
        .enumerate()
        .filter(|(k, _)| fundamental[*k])
        .map(|(k, forms)| FormClassGroup::from_forms(-(lo + k as i64), forms))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct GenusReport {
    #[serde(rename = "D")]
    pub disc: i64,
    pub h: u64,
    pub invariants: Vec<u64>,
    pub two_rank: u64,
    pub omega: u64,
    /// `rk_2 = ω(|D|) - 1`
    pub genus_ok: bool,
    /// `2 (t - 1)` with `t = ω(|D|) + 1`
    pub main0_bound: u64,
    /// `t - 1`
    pub sharp_bound: u64,
    #[serde(skip)]
    pub bounds_ok: bool,
}

impl GenusReport {
    pub fn passed(&self) -> bool {
        self.genus_ok && self.bounds_ok
    }
}

pub fn two_rank(d: i64) -> Result<u64, FormError> {
    Ok(class_group(d)?.two_rank())
}

/// Genus identity and the cyclic rank bounds for `Q(√D)/Q`, counting the
/// ramified infinite place.
pub fn genus_check(d: i64) -> Result<GenusReport, FormError> {
    Ok(genus_report(&class_group(d)?))
}

pub fn genus_report(g: &FormClassGroup) -> GenusReport {
    let d = g.discriminant();
    let omega = arith::omega(d.unsigned_abs()) as u64;
    let places = RamifiedPlaces::new(omega, 1);
    let main0_bound = bounds::rank_bound_cyclic(2, places, 0).expect("2 is prime");
    let sharp_bound = bounds::rank_bound_cyclic_sharp(2, places).expect("2 is prime");
    let two_rank = g.two_rank();
    GenusReport {
        disc: d,
        h: g.class_number(),
        invariants: g.invariants().to_vec(),
        two_rank,
        omega,
        genus_ok: two_rank + 1 == omega,
        main0_bound,
        sharp_bound,
        bounds_ok: two_rank <= main0_bound && two_rank <= sharp_bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fundamental_examples() {
        assert!(is_fundamental(-20));
        assert!(!is_fundamental(-12));
        assert!(is_fundamental(-3));
        assert!(is_fundamental(-4));
        assert!(is_fundamental(-8));
        assert!(is_fundamental(5));
        assert!(!is_fundamental(1));
        assert!(!is_fundamental(-16));
        assert!(!is_fundamental(-7 * 9));
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(QuadForm::new(1, 0, 5).reduce().unwrap(), QuadForm::new(1, 0, 5));
        assert_eq!(QuadForm::new(5, 0, 1).reduce().unwrap(), QuadForm::new(1, 0, 5));
        let f = QuadForm::new(3, 2, 7);
        assert_eq!(f.discriminant(), -80);
        let r = f.reduce().unwrap();
        assert!(r.is_reduced());
        assert_eq!(r.discriminant(), -80);
        assert!((r.a * r.a * 3) as f64 <= 80.0);
        assert_eq!(r.reduce().unwrap(), r);
        assert!(QuadForm::new(1, 3, 1).reduce().is_err());
    }

    #[test]
    fn small_class_groups() {
        let g = class_group(-4).unwrap();
        assert_eq!((g.class_number(), g.invariants()), (1, &[][..]));
        let g = class_group(-20).unwrap();
        assert_eq!(g.forms(), &[QuadForm::new(1, 0, 5), QuadForm::new(2, 2, 3)]);
        assert_eq!(g.invariants(), &[2]);
        let g = class_group(-23).unwrap();
        assert_eq!(
            g.forms(),
            &[QuadForm::new(1, 1, 6), QuadForm::new(2, -1, 3), QuadForm::new(2, 1, 3)]
        );
        assert_eq!(g.invariants(), &[3]);
        // Cl(-420) = (Z/2)^3
        assert_eq!(class_group(-420).unwrap().invariants(), &[2, 2, 2]);
        // Cl(-4·65) = Z/2 x Z/4
        assert_eq!(class_group(-260).unwrap().invariants(), &[2, 4]);
        assert_eq!(class_group(-12), Err(FormError::NotFundamental(-12)));
        assert_eq!(class_group(5), Err(FormError::NotNegative(5)));
    }

    #[test]
    fn genus_examples() {
        let r = genus_check(-20).unwrap();
        assert_eq!((r.omega, r.two_rank, r.sharp_bound, r.main0_bound), (2, 1, 2, 4));
        assert!(r.passed());
        let r = genus_check(-23).unwrap();
        assert_eq!((r.omega, r.two_rank), (1, 0));
        assert!(r.passed());
        assert!(genus_check(-4).unwrap().passed());
    }

    #[test]
    fn batched_matches_single() {
        let batch = class_groups_up_to(3000).unwrap();
        let discs: Vec<i64> = batch.iter().map(|g| g.discriminant()).collect();
        assert_eq!(discs, negative_fundamental_discriminants(3000));
        for g in &batch {
            let single = class_group(g.discriminant()).unwrap();
            assert_eq!(single.forms(), g.forms());
            assert_eq!(single.invariants(), g.invariants());
        }
    }

    #[test]
    fn smith_form() {
        let mut m = vec![vec![2i128, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        assert_eq!(smith_diagonal(&mut m), vec![2, 6, 12]);
        let mut m = vec![vec![2i128, 0], vec![0, 3]];
        assert_eq!(smith_diagonal(&mut m), vec![1, 6]);
    }
}
