use std::collections::HashMap;

use super::group::closure;
use super::{PermError, PermGroup, Permutation};
use crate::arith;

/// `G = G_0 > G_1 > … > G_r = H`, each index equal to `prime`.
#[derive(Debug, Clone)]
pub struct SubgroupChain {
    pub groups: Vec<PermGroup>,
    pub prime: u64,
}

impl SubgroupChain {
    /// Number of steps `r`.
    pub fn length(&self) -> usize {
        self.groups.len() - 1
    }

    /// Orders of `G_0, …, G_r`.
    pub fn orders(&self) -> Result<Vec<u64>, PermError> {
        self.groups.iter().map(PermGroup::order).collect()
    }

    /// Every consecutive pair is a subgroup of index exactly `prime`.
    pub fn is_valid(&self) -> Result<bool, PermError> {
        for w in self.groups.windows(2) {
            if !w[1].is_subgroup_of(&w[0])? || w[0].order()? != w[1].order()? * self.prime {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn power_exponent(order: u64, ell: u64) -> Option<u32> {
    let mut o = order;
    let mut e = 0;
    while o % ell == 0 {
        o /= ell;
        e += 1;
    }
    (o == 1).then_some(e)
}

fn check_ell_group(g: &PermGroup, ell: u64) -> Result<(), PermError> {
    if !arith::is_prime(ell) {
        return Err(PermError::NotPrime(ell));
    }
    let order = g.order()?;
    if power_exponent(order, ell).is_none() {
        return Err(PermError::NotPrimePower { order, prime: ell });
    }
    Ok(())
}

/// `Φ(G)` of an ℓ-group: generated by ℓ-th powers of generators together
/// with the normal closure of commutators of generators.
pub fn frattini_subgroup(g: &PermGroup, ell: u64) -> Result<PermGroup, PermError> {
    check_ell_group(g, ell)?;
    let gens = g.generators();
    let mut seeds: Vec<Permutation> = gens.iter().map(|s| s.pow(ell)).collect();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            seeds.push(a.commutator(b));
        }
    }
    normal_closure(g, seeds)
}

fn normal_closure(g: &PermGroup, seeds: Vec<Permutation>) -> Result<PermGroup, PermError> {
    let caps = g.caps();
    let mut gens: Vec<Permutation> = seeds.into_iter().filter(|p| !p.is_identity()).collect();
    loop {
        let elems: std::collections::HashSet<Permutation> =
            closure(g.degree(), &gens, caps.max_order)?.into_iter().collect();
        let missing: Vec<Permutation> = gens
            .iter()
            .flat_map(|x| g.generators().iter().map(move |s| x.conjugate_by(s)))
            .filter(|y| !elems.contains(y))
            .collect();
        if missing.is_empty() {
            return PermGroup::with_caps(g.degree(), gens, caps);
        }
        gens.extend(missing);
    }
}

/// Coordinates of `G/Φ(G)` as a vector space over `F_ℓ`.
struct FrattiniQuotient {
    ell: u64,
    dim: usize,
    /// element index of `G` -> coordinate vector
    coords: Vec<Vec<u64>>,
}

impl FrattiniQuotient {
    fn new(g: &PermGroup, ell: u64) -> Result<Self, PermError> {
        let phi = frattini_subgroup(g, ell)?;
        let elems = g.elements()?;
        let phi_elems = phi.elements()?;
        // coset of Φ for every element: Φ is normal, so left and right agree
        let mut coset_of = vec![usize::MAX; elems.len()];
        let mut cosets: Vec<usize> = Vec::new(); // representative element index
        for (i, x) in elems.iter().enumerate() {
            if coset_of[i] != usize::MAX {
                continue;
            }
            let id = cosets.len();
            cosets.push(i);
            for f in phi_elems.iter() {
                coset_of[elems.index_of(&f.then(x)).expect("closed")] = id;
            }
        }
        let quotient_order = cosets.len() as u64;
        let dim = power_exponent(quotient_order, ell).expect("ℓ-group quotient") as usize;
        // Build coordinates greedily: basis vectors are the least elements
        // outside the current span, in element order.
        let mut coset_coords: HashMap<usize, Vec<u64>> = HashMap::new();
        coset_coords.insert(coset_of[0], vec![0; dim]);
        let mut span: Vec<(usize, Vec<u64>)> = vec![(0, vec![0; dim])];
        let mut basis_len = 0;
        for (i, x) in elems.iter().enumerate() {
            if basis_len == dim {
                break;
            }
            if coset_coords.contains_key(&coset_of[i]) {
                continue;
            }
            let mut extended = Vec::with_capacity(span.len() * ell as usize);
            let mut power = x.clone();
            for t in 1..ell {
                for (rep, c) in &span {
                    let prod = elems.as_slice()[*rep].then(&power);
                    let j = elems.index_of(&prod).expect("closed");
                    let mut v = c.clone();
                    v[basis_len] = t;
                    coset_coords.entry(coset_of[j]).or_insert_with(|| v.clone());
                    extended.push((j, v));
                }
                power = power.then(x);
            }
            span.extend(extended);
            basis_len += 1;
        }
        debug_assert_eq!(coset_coords.len() as u64, quotient_order);
        let coords = coset_of.iter().map(|c| coset_coords[c].clone()).collect();
        Ok(Self { ell, dim, coords })
    }

    fn eval(&self, f: &[u64], elem: usize) -> u64 {
        f.iter()
            .zip(&self.coords[elem])
            .map(|(a, b)| a * b)
            .sum::<u64>()
            % self.ell
    }

    /// All nonzero functionals, normalized so the first nonzero entry is 1,
    /// in lexicographic order.
    fn normalized_functionals(&self) -> Vec<Vec<u64>> {
        let total = self.ell.pow(self.dim as u32);
        let mut out = Vec::new();
        for code in 1..total {
            let mut f = vec![0u64; self.dim];
            let mut c = code;
            for slot in f.iter_mut().rev() {
                *slot = c % self.ell;
                c /= self.ell;
            }
            if f.iter().find(|&&v| v != 0) == Some(&1) {
                out.push(f);
            }
        }
        out
    }
}

/// Maximal subgroups of `current` containing `h`, as kernels of Frattini
/// functionals, in lexicographic order of the functional.
fn maximal_over(current: &PermGroup, h: &PermGroup, ell: u64) -> Result<Vec<PermGroup>, PermError> {
    let q = FrattiniQuotient::new(current, ell)?;
    let elems = current.elements()?;
    let h_idx: Vec<usize> = h
        .generators()
        .iter()
        .map(|x| elems.index_of(x).ok_or(PermError::NotSubgroup))
        .collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    for f in q.normalized_functionals() {
        if h_idx.iter().all(|&i| q.eval(&f, i) == 0) {
            let kept: Vec<Permutation> = elems
                .iter()
                .enumerate()
                .filter(|(i, _)| q.eval(&f, *i) == 0)
                .map(|(_, p)| p.clone())
                .collect();
            out.push(PermGroup::from_closed_elements(current.degree(), kept, current.caps()));
        }
    }
    Ok(out)
}

/// A chain of index-ℓ steps from `g` down to `h`, choosing at each step the
/// hyperplane of `G_i/Φ(G_i)` cut out by the lexicographically least
/// normalized functional vanishing on the image of `h`.
pub fn subgroup_tower(g: &PermGroup, h: &PermGroup, ell: u64) -> Result<SubgroupChain, PermError> {
    check_ell_group(g, ell)?;
    if !h.is_subgroup_of(g)? {
        return Err(PermError::NotSubgroup);
    }
    let target = h.order()?;
    let mut groups = vec![g.clone()];
    loop {
        let current = groups.last().expect("non-empty");
        if current.order()? == target {
            break;
        }
        let next = maximal_over(current, h, ell)?
            .into_iter()
            .next()
            .expect("a proper subgroup of an ℓ-group lies in a maximal subgroup");
        groups.push(next);
    }
    // replace the last entry by h itself so callers get their own generators
    *groups.last_mut().expect("non-empty") = h.clone();
    Ok(SubgroupChain { groups, prime: ell })
}

/// Every chain obtainable by choosing any maximal subgroup containing `h` at
/// each step. Stops with an error once more than `limit` chains exist.
pub fn all_subgroup_towers(
    g: &PermGroup,
    h: &PermGroup,
    ell: u64,
    limit: usize,
) -> Result<Vec<SubgroupChain>, PermError> {
    check_ell_group(g, ell)?;
    if !h.is_subgroup_of(g)? {
        return Err(PermError::NotSubgroup);
    }
    let target = h.order()?;
    let mut out = Vec::new();
    let mut stack = vec![vec![g.clone()]];
    while let Some(path) = stack.pop() {
        let current = path.last().expect("non-empty");
        if current.order()? == target {
            let mut groups = path;
            *groups.last_mut().expect("non-empty") = h.clone();
            out.push(SubgroupChain { groups, prime: ell });
            if out.len() > limit {
                return Err(PermError::TooManyTowers { limit });
            }
            continue;
        }
        let children = maximal_over(current, h, ell)?;
        for child in children.into_iter().rev() {
            let mut next = path.clone();
            next.push(child);
            stack.push(next);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_four() {
        let g = PermGroup::cyclic(4).unwrap();
        let chain = subgroup_tower(&g, &PermGroup::trivial(4).unwrap(), 2).unwrap();
        assert_eq!(chain.length(), 2);
        assert_eq!(chain.orders().unwrap(), vec![4, 2, 1]);
        assert!(chain.is_valid().unwrap());
    }

    #[test]
    fn klein_four() {
        let g = PermGroup::parse("(1 2)(3 4), (1 3)(2 4)", None).unwrap();
        assert_eq!(frattini_subgroup(&g, 2).unwrap().order().unwrap(), 1);
        let chain = subgroup_tower(&g, &PermGroup::trivial(4).unwrap(), 2).unwrap();
        assert_eq!(chain.length(), 2);
        assert!(chain.is_valid().unwrap());
        let all = all_subgroup_towers(&g, &PermGroup::trivial(4).unwrap(), 2, 100).unwrap();
        assert_eq!(all.len(), 3);
    }

    #[test]
    fn dihedral_point_stabilizer() {
        let d4 = PermGroup::parse("(1 2 3 4), (1 3)", None).unwrap();
        assert_eq!(frattini_subgroup(&d4, 2).unwrap().order().unwrap(), 2);
        let h = d4.stabilizer(0).unwrap();
        let chain = subgroup_tower(&d4, &h, 2).unwrap();
        assert_eq!(chain.orders().unwrap(), vec![8, 4, 2]);
        assert!(chain.is_valid().unwrap());
        assert!(h.is_subgroup_of(&chain.groups[1]).unwrap());
    }

    #[test]
    fn rejects_non_prime_power() {
        let s3 = PermGroup::symmetric(3).unwrap();
        let t = PermGroup::trivial(3).unwrap();
        assert!(matches!(
            subgroup_tower(&s3, &t, 2),
            Err(PermError::NotPrimePower { order: 6, prime: 2 })
        ));
        assert!(matches!(subgroup_tower(&s3, &t, 4), Err(PermError::NotPrime(4))));
    }
}
