//! Subgroup lattices of `P = G^k` for `|G|^k ≤ 2048` by cyclic extension.
//!
//! Elements of `P` are mixed-radix codes `Σ g_i m^i` (`m = |G|`, `g_i` the index
//! of the `i`-th coordinate in the sorted element list of `G`). Every subgroup
//! `V ≠ 1` of a solvable group has a normal subgroup `U` of prime index, so
//! `V = <U, z>` with `z` normalizing `U` and `z^p ∈ U`; extending every stored
//! subgroup in all such ways, layer by layer in the number of prime factors
//! of the order, reaches every subgroup.
//!
//! In the up-to-symmetry mode only one subgroup per orbit of
//! `W = N_{S_n}(G) ≀ S_k` is kept. `W` acts on codes through coordinate
//! permutations and, independently on each coordinate, the automorphisms of
//! `G` induced by its normalizer.

use std::collections::{HashMap, HashSet};

use super::{iso, Caps, PermError, PermGroup};

pub type Bits = Box<[u64]>;

fn bits_new(len: usize) -> Bits {
    vec![0u64; len.div_ceil(64)].into_boxed_slice()
}

#[inline]
fn bit_get(b: &[u64], i: usize) -> bool {
    b[i >> 6] >> (i & 63) & 1 == 1
}

#[inline]
fn bit_set(b: &mut [u64], i: usize) {
    b[i >> 6] |= 1 << (i & 63);
}

fn popcount(b: &[u64]) -> usize {
    b.iter().map(|w| w.count_ones() as usize).sum()
}

#[inline]
fn mix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// A subgroup of `P` as a bitset over codes.
#[derive(Debug, Clone)]
pub struct LatticeSubgroup {
    pub bits: Bits,
    pub order: usize,
    /// Codes generating the subgroup, in the order they were adjoined.
    pub gens: Vec<u16>,
}

impl LatticeSubgroup {
    pub fn contains(&self, code: u16) -> bool {
        bit_get(&self.bits, code as usize)
    }

    pub fn elements(&self) -> Vec<u16> {
        let mut out = Vec::with_capacity(self.order);
        for (w, &word) in self.bits.iter().enumerate() {
            let mut x = word;
            while x != 0 {
                let b = x.trailing_zeros() as usize;
                out.push((w * 64 + b) as u16);
                x &= x - 1;
            }
        }
        out
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LatticeStats {
    /// Stored subgroups per layer (number of prime factors of the order).
    pub per_layer: Vec<usize>,
    /// Extensions `<U, z>` formed, before deduplication.
    pub extensions: usize,
}

impl LatticeStats {
    pub fn total(&self) -> usize {
        self.per_layer.iter().sum()
    }
}

// Coordinate invariants used to bucket and prune in the symmetry mode.
struct Rep {
    sub: LatticeSubgroup,
    coord_sig: Vec<u64>,
    /// projections onto coordinates `0..=t`, as bitsets over `m^(t+1)`
    prefix: Vec<Bits>,
    prefix_len: Vec<usize>,
}

pub struct ProductLattice {
    m: usize,
    k: usize,
    size: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
    digits: Vec<u16>,
    pow_m: Vec<usize>,
    autos: Vec<Vec<u16>>,
    label: Vec<u16>,
}

impl ProductLattice {
    /// Lattice of `G^k` with no symmetry (only the identity automorphism).
    pub fn new(g: &PermGroup, k: usize) -> Result<Self, PermError> {
        let m = g.order()? as usize;
        Self::build(g, k, vec![(0..m as u16).collect()])
    }

    /// Lattice of `G^k` reduced modulo `N_{S_n}(G) ≀ S_k`.
    pub fn with_symmetry(g: &PermGroup, k: usize) -> Result<Self, PermError> {
        check_size(g, k)?;
        let elems = g.elements()?;
        let normalizer = iso::normalizer_in_symmetric(g)?;
        let mut autos: HashSet<Vec<u16>> = HashSet::new();
        for c in normalizer.elements()?.iter() {
            let a: Vec<u16> = elems
                .iter()
                .map(|x| elems.index_of(&x.conjugate_by(c)).expect("normalizes") as u16)
                .collect();
            autos.insert(a);
        }
        let mut autos: Vec<Vec<u16>> = autos.into_iter().collect();
        autos.sort_unstable();
        Self::build(g, k, autos)
    }

    fn build(g: &PermGroup, k: usize, autos: Vec<Vec<u16>>) -> Result<Self, PermError> {
        let size = check_size(g, k)?;
        let elems = g.elements()?;
        let m = elems.len();
        let mut gmul = vec![0u16; m * m];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                gmul[i * m + j] = elems.index_of(&a.then(b)).expect("closed") as u16;
            }
        }
        let pow_m: Vec<usize> = (0..=k).map(|i| m.pow(i as u32)).collect();
        let mut digits = vec![0u16; size * k];
        for c in 0..size {
            for i in 0..k {
                digits[c * k + i] = ((c / pow_m[i]) % m) as u16;
            }
        }
        let mut mul = vec![0u16; size * size];
        for a in 0..size {
            for b in 0..size {
                let mut code = 0usize;
                for i in 0..k {
                    let x = digits[a * k + i] as usize;
                    let y = digits[b * k + i] as usize;
                    code += gmul[x * m + y] as usize * pow_m[i];
                }
                mul[a * size + b] = code as u16;
            }
        }
        let mut inv = vec![0u16; size];
        for a in 0..size {
            for b in 0..size {
                if mul[a * size + b] == 0 {
                    inv[a] = b as u16;
                    break;
                }
            }
        }
        let mut label = vec![u16::MAX; m];
        let mut next = 0u16;
        for x in 0..m {
            if label[x] != u16::MAX {
                continue;
            }
            for a in &autos {
                label[a[x] as usize] = next;
            }
            next += 1;
        }
        Ok(Self {
            m,
            k,
            size,
            mul,
            inv,
            digits,
            pow_m,
            autos,
            label,
        })
    }

    pub fn group_order(&self) -> usize {
        self.m
    }

    pub fn power(&self) -> usize {
        self.k
    }

    /// `|G|^k`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn automorphism_count(&self) -> usize {
        self.autos.len()
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.size + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u16) -> u16 {
        self.inv[a as usize]
    }

    /// Index in `G` of coordinate `i` of `code`.
    #[inline]
    pub fn digit(&self, code: u16, i: usize) -> usize {
        self.digits[code as usize * self.k + i] as usize
    }

    pub fn full(&self) -> LatticeSubgroup {
        let mut bits = bits_new(self.size);
        for c in 0..self.size {
            bit_set(&mut bits, c);
        }
        LatticeSubgroup {
            bits,
            order: self.size,
            gens: Vec::new(),
        }
    }

    /// Subgroup generated by `gens`.
    pub fn generate(&self, gens: &[u16]) -> LatticeSubgroup {
        let mut bits = bits_new(self.size);
        bit_set(&mut bits, 0);
        let mut list = vec![0u16];
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            i += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !bit_get(&bits, y as usize) {
                    bit_set(&mut bits, y as usize);
                    list.push(y);
                }
            }
        }
        LatticeSubgroup {
            order: list.len(),
            bits,
            gens: gens.to_vec(),
        }
    }

    /// Size of the image of `sub` on coordinate `i`.
    pub fn projection_size(&self, sub: &LatticeSubgroup, i: usize) -> usize {
        let mut seen = vec![false; self.m];
        for c in sub.elements() {
            seen[self.digit(c, i)] = true;
        }
        seen.iter().filter(|&&s| s).count()
    }

    pub fn is_surjective(&self, sub: &LatticeSubgroup) -> bool {
        (0..self.k).all(|i| self.projection_size(sub, i) == self.m)
    }

    /// Derived series reaches the trivial group.
    pub fn is_solvable(&self) -> bool {
        let mut current = self.full();
        loop {
            if current.order == 1 {
                return true;
            }
            let elems = current.elements();
            let mut comms: Vec<u16> = Vec::new();
            let mut seen = bits_new(self.size);
            for &x in &elems {
                for &y in &elems {
                    let c = self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y));
                    if !bit_get(&seen, c as usize) {
                        bit_set(&mut seen, c as usize);
                        comms.push(c);
                    }
                }
            }
            let next = self.generate(&comms);
            if next.order == current.order {
                return false;
            }
            current = next;
        }
    }

    fn normalizes(&self, z: u16, sub: &LatticeSubgroup) -> bool {
        let zi = self.inv(z);
        sub.gens
            .iter()
            .all(|&u| sub.contains(self.mul(self.mul(zi, u), z)))
    }

    /// Enumerates subgroups in increasing order of the number of prime
    /// factors of their order. With `symmetric`, one representative per
    /// `W`-class is returned; otherwise every subgroup, failing once more
    /// than `budget` have been stored.
    pub fn enumerate(
        &self,
        symmetric: bool,
        budget: usize,
    ) -> Result<(Vec<LatticeSubgroup>, LatticeStats), PermError> {
        if !self.is_solvable() {
            return Err(PermError::NotSolvable);
        }
        let trivial = self.generate(&[]);
        let mut layers: Vec<Vec<LatticeSubgroup>> = vec![vec![trivial]];
        let mut stats = LatticeStats {
            per_layer: vec![1],
            extensions: 0,
        };
        let mut stored = 1usize;
        loop {
            let current = layers.last().expect("non-empty");
            let mut literal: HashSet<Bits> = HashSet::new();
            let mut reps: Vec<Rep> = Vec::new();
            let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
            let mut next: Vec<LatticeSubgroup> = Vec::new();
            for u in current {
                let u_elems = u.elements();
                let mut covered = u.bits.clone();
                for z in 0..self.size as u16 {
                    if bit_get(&covered, z as usize) || !self.normalizes(z, u) {
                        continue;
                    }
                    let mut w = z;
                    let mut p = 1usize;
                    while !u.contains(w) {
                        w = self.mul(w, z);
                        p += 1;
                    }
                    let mut bits = u.bits.clone();
                    let mut zi = z;
                    for _ in 1..p {
                        for &x in &u_elems {
                            bit_set(&mut bits, self.mul(x, zi) as usize);
                        }
                        zi = self.mul(zi, z);
                    }
                    if !crate::arith::is_prime(p as u64) {
                        continue;
                    }
                    // every z' in V \ U generates V over U since [V:U] is prime
                    for (c, b) in covered.iter_mut().zip(bits.iter()) {
                        *c |= *b;
                    }
                    stats.extensions += 1;
                    let mut gens = u.gens.clone();
                    gens.push(z);
                    let v = LatticeSubgroup {
                        bits,
                        order: u.order * p,
                        gens,
                    };
                    if symmetric {
                        let rep = self.rep_data(v);
                        let key = self.class_key(&rep);
                        let bucket = buckets.entry(key).or_default();
                        if bucket.iter().any(|&r| self.conjugate(&rep, &reps[r])) {
                            continue;
                        }
                        bucket.push(reps.len());
                        reps.push(rep);
                    } else {
                        if literal.contains(&v.bits) {
                            continue;
                        }
                        literal.insert(v.bits.clone());
                        next.push(v);
                        stored += 1;
                        if stored > budget {
                            return Err(PermError::LatticeBudget { cap: budget });
                        }
                    }
                }
            }
            if symmetric {
                next = reps.into_iter().map(|r| r.sub).collect();
                stored += next.len();
                if stored > budget {
                    return Err(PermError::LatticeBudget { cap: budget });
                }
            }
            if next.is_empty() {
                break;
            }
            stats.per_layer.push(next.len());
            layers.push(next);
        }
        Ok((layers.into_iter().flatten().collect(), stats))
    }

    fn rep_data(&self, sub: LatticeSubgroup) -> Rep {
        let elems = sub.elements();
        let profiles: Vec<u64> = elems
            .iter()
            .map(|&c| {
                (0..self.k).fold(0u64, |acc, i| {
                    acc.wrapping_add(mix(self.label[self.digit(c, i)] as u64 + 1))
                })
            })
            .collect();
        let coord_sig = (0..self.k)
            .map(|i| {
                elems.iter().zip(&profiles).fold(0u64, |acc, (&c, &pr)| {
                    acc.wrapping_add(mix(pr ^ mix(self.label[self.digit(c, i)] as u64)))
                })
            })
            .collect();
        let mut prefix = Vec::with_capacity(self.k);
        let mut prefix_len = Vec::with_capacity(self.k);
        for t in 0..self.k {
            let modulus = self.pow_m[t + 1];
            let mut b = bits_new(modulus);
            for &c in &elems {
                bit_set(&mut b, c as usize % modulus);
            }
            prefix_len.push(popcount(&b));
            prefix.push(b);
        }
        Rep {
            sub,
            coord_sig,
            prefix,
            prefix_len,
        }
    }

    fn class_key(&self, rep: &Rep) -> u64 {
        let sum = rep
            .coord_sig
            .iter()
            .fold(0u64, |acc, &s| acc.wrapping_add(mix(s)));
        mix(sum ^ mix(rep.sub.order as u64))
    }

    /// Whether some element of `W` carries `src` onto `tgt`.
    fn conjugate(&self, src: &Rep, tgt: &Rep) -> bool {
        if src.sub.order != tgt.sub.order {
            return false;
        }
        let mut a = src.coord_sig.clone();
        let mut b = tgt.coord_sig.clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return false;
        }
        let elems = src.sub.elements();
        let codes = vec![0usize; elems.len()];
        let mut used = vec![false; self.k];
        self.extend_match(0, src, tgt, &elems, &codes, &mut used)
    }

    fn extend_match(
        &self,
        t: usize,
        src: &Rep,
        tgt: &Rep,
        elems: &[u16],
        codes: &[usize],
        used: &mut [bool],
    ) -> bool {
        if t == self.k {
            return true;
        }
        let weight = self.pow_m[t];
        let target = &tgt.prefix[t];
        let mut next = vec![0usize; codes.len()];
        let mut seen = bits_new(self.pow_m[t + 1]);
        for c in 0..self.k {
            if used[c] || src.coord_sig[c] != tgt.coord_sig[t] {
                continue;
            }
            'auto: for a in &self.autos {
                for w in seen.iter_mut() {
                    *w = 0;
                }
                let mut distinct = 0usize;
                for (j, &e) in elems.iter().enumerate() {
                    let code = codes[j] + a[self.digit(e, c)] as usize * weight;
                    if !bit_get(target, code) {
                        continue 'auto;
                    }
                    if !bit_get(&seen, code) {
                        bit_set(&mut seen, code);
                        distinct += 1;
                    }
                    next[j] = code;
                }
                if distinct != tgt.prefix_len[t] {
                    continue;
                }
                used[c] = true;
                let found = self.extend_match(t + 1, src, tgt, elems, &next, used);
                used[c] = false;
                if found {
                    return true;
                }
            }
        }
        false
    }
}

fn check_size(g: &PermGroup, k: usize) -> Result<usize, PermError> {
    let caps: Caps = g.caps();
    let m = g.order()?;
    let size = (0..k).try_fold(1u64, |acc, _| acc.checked_mul(m));
    match size {
        Some(s) if k >= 1 && s <= caps.max_lattice_order as u64 && s <= u16::MAX as u64 + 1 => {
            Ok(s as usize)
        }
        _ => Err(PermError::LatticeCap {
            order: size.unwrap_or(u64::MAX),
            cap: caps.max_lattice_order,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(g: &PermGroup, k: usize) -> usize {
        ProductLattice::new(g, k).unwrap().enumerate(false, usize::MAX).unwrap().0.len()
    }

    #[test]
    fn elementary_abelian_counts() {
        // subspaces of F_2^k: 2, 5, 16, 67
        let c2 = PermGroup::cyclic(2).unwrap();
        for (k, n) in [(1, 2), (2, 5), (3, 16), (4, 67)] {
            assert_eq!(count(&c2, k), n);
        }
    }

    #[test]
    fn small_group_counts() {
        assert_eq!(count(&PermGroup::symmetric(3).unwrap(), 1), 6);
        assert_eq!(count(&PermGroup::symmetric(4).unwrap(), 1), 30);
        assert_eq!(count(&PermGroup::cyclic(12).unwrap(), 1), 6);
    }

    #[test]
    fn rejects_nonsolvable_and_oversized() {
        let a5 = PermGroup::parse("(1 2 3 4 5), (1 2 3)", None).unwrap();
        assert_eq!(
            ProductLattice::new(&a5, 1).unwrap().enumerate(false, usize::MAX).unwrap_err(),
            PermError::NotSolvable
        );
        let c2 = PermGroup::cyclic(2).unwrap();
        assert!(matches!(ProductLattice::new(&c2, 12), Err(PermError::LatticeCap { .. })));
        assert!(matches!(
            ProductLattice::new(&c2, 5).unwrap().enumerate(false, 100),
            Err(PermError::LatticeBudget { cap: 100 })
        ));
    }

    #[test]
    fn symmetry_classes_of_f2_cubed() {
        // subspaces of F_2^3 up to coordinate permutation
        let c2 = PermGroup::cyclic(2).unwrap();
        let lat = ProductLattice::with_symmetry(&c2, 3).unwrap();
        let (reps, _) = lat.enumerate(true, usize::MAX).unwrap();
        // dimension 0: 1, dimension 1: 3 weights, dimension 2: 3 (duals), dimension 3: 1
        assert_eq!(reps.len(), 8);
    }
}
