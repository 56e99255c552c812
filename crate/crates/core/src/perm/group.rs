use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, OnceLock};

use super::permutation::{split_generators, Permutation};
use super::{Caps, PermError};
use crate::arith;

/// The full element list of a group, sorted lexicographically by image array
/// (so the identity is always at index 0), with a reverse index.
#[derive(Debug)]
pub struct ElementSet {
    list: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
}

impl ElementSet {
    fn from_list(mut list: Vec<Permutation>) -> Self {
        list.sort_unstable();
        let index = list.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        Self { list, index }
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn as_slice(&self) -> &[Permutation] {
        &self.list
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Permutation> {
        self.list.iter()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains_key(p)
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }
}

/// A permutation group given by generators. The element set is enumerated
/// lazily on first use and cached; enumeration fails once the order passes
/// `caps.max_order`.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    caps: Caps,
    elements: OnceLock<Arc<ElementSet>>,
}

impl std::fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PermGroup(degree {}, <", self.degree)?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ">)")
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, PermError> {
        Self::with_caps(degree, generators, Caps::default())
    }

    pub fn with_caps(
        degree: usize,
        generators: Vec<Permutation>,
        caps: Caps,
    ) -> Result<Self, PermError> {
        if degree == 0 {
            return Err(PermError::InvalidPermutation("degree must be positive".into()));
        }
        if degree > caps.max_degree {
            return Err(PermError::DegreeCap {
                degree,
                cap: caps.max_degree,
            });
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let mut gens: Vec<Permutation> = Vec::with_capacity(generators.len());
        for g in generators {
            if !g.is_identity() && !gens.contains(&g) {
                gens.push(g);
            }
        }
        Ok(Self {
            degree,
            generators: gens,
            caps,
            elements: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Result<Self, PermError> {
        Self::new(degree, Vec::new())
    }

    /// The regular cyclic group generated by `(1 2 … n)`.
    pub fn cyclic(n: usize) -> Result<Self, PermError> {
        let images = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        Self::new(n, vec![Permutation::from_images(images)?])
    }

    /// The symmetric group in its natural action.
    pub fn symmetric(n: usize) -> Result<Self, PermError> {
        let mut gens = Vec::new();
        if n > 1 {
            let cycle = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
            gens.push(Permutation::from_images(cycle)?);
            gens.push(Permutation::from_cycles(n, &[vec![0, 1]])?);
        }
        Self::new(n, gens)
    }

    /// Parses a comma-separated generator list in 1-based cycle notation,
    /// e.g. `(1 2 3)(4 5), (1 2)`. The degree defaults to the largest point.
    pub fn parse(text: &str, degree: Option<usize>) -> Result<Self, PermError> {
        let parts = split_generators(text)?;
        let mut cyc = Vec::with_capacity(parts.len());
        let mut max_pt = 1;
        for part in parts {
            let p = Permutation::parse(part, None)?;
            max_pt = max_pt.max(p.degree());
            cyc.push(p);
        }
        let degree = degree.unwrap_or(max_pt);
        if max_pt > degree {
            return Err(PermError::InvalidPermutation(format!(
                "point {max_pt} exceeds degree {degree}"
            )));
        }
        let gens = cyc
            .into_iter()
            .map(|p| {
                let mut images = p.images().to_vec();
                images.extend(images.len() as u32..degree as u32);
                Permutation::from_images(images)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(degree, gens)
    }

    /// Wraps an element list already known to be closed. Generators are
    /// chosen greedily from the sorted list.
    pub(crate) fn from_closed_elements(
        degree: usize,
        elements: Vec<Permutation>,
        caps: Caps,
    ) -> Self {
        let set = ElementSet::from_list(elements);
        let generators = greedy_generators(degree, set.as_slice());
        let group = Self {
            degree,
            generators,
            caps,
            elements: OnceLock::new(),
        };
        let _ = group.elements.set(Arc::new(set));
        group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    pub fn elements(&self) -> Result<&ElementSet, PermError> {
        if let Some(e) = self.elements.get() {
            return Ok(e);
        }
        let list = closure(self.degree, &self.generators, self.caps.max_order)?;
        let _ = self.elements.set(Arc::new(ElementSet::from_list(list)));
        Ok(self.elements.get().expect("just initialised"))
    }

    pub fn order(&self) -> Result<u64, PermError> {
        Ok(self.elements()?.len() as u64)
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool, PermError> {
        if p.degree() != self.degree {
            return Ok(false);
        }
        Ok(self.elements()?.contains(p))
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    /// Orbits on points, each sorted, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for start in 0..self.degree {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut orbit = vec![start];
            let mut i = 0;
            while i < orbit.len() {
                let x = orbit[i];
                i += 1;
                for g in &self.generators {
                    let y = g.image(x);
                    if !seen[y] {
                        seen[y] = true;
                        orbit.push(y);
                    }
                }
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits().len() == 1
    }

    /// `a(G)`: the least `ind(g)` over non-identity elements.
    pub fn min_index(&self) -> Result<usize, PermError> {
        if self.is_trivial() {
            return Err(PermError::TrivialGroup);
        }
        let elems = self.elements()?;
        Ok(elems
            .iter()
            .skip(1)
            .map(Permutation::ind)
            .min()
            .expect("non-trivial group has a non-identity element"))
    }

    /// Subgroup of the elements satisfying `keep`; the predicate must cut out
    /// a subgroup, which is checked.
    pub fn subgroup_where<F>(&self, keep: F) -> Result<PermGroup, PermError>
    where
        F: Fn(&Permutation) -> bool,
    {
        let chosen: Vec<Permutation> = self.elements()?.iter().filter(|p| keep(p)).cloned().collect();
        let sub = Self::from_closed_elements(self.degree, chosen, self.caps);
        let regenerated = closure(self.degree, &sub.generators, self.caps.max_order)?;
        if regenerated.len() != sub.elements()?.len() {
            return Err(PermError::NotSubgroup);
        }
        Ok(sub)
    }

    pub fn stabilizer(&self, point: usize) -> Result<PermGroup, PermError> {
        if point >= self.degree {
            return Err(PermError::InvalidPermutation(format!(
                "point {} exceeds degree {}",
                point + 1,
                self.degree
            )));
        }
        self.subgroup_where(|p| p.image(point) == point)
    }

    /// Subgroup generated by the given elements (which must have the same degree).
    pub fn subgroup_generated(&self, gens: Vec<Permutation>) -> Result<PermGroup, PermError> {
        let sub = Self::with_caps(self.degree, gens, self.caps)?;
        sub.elements()?;
        Ok(sub)
    }

    /// `true` when every element of `self` lies in `other`.
    pub fn is_subgroup_of(&self, other: &PermGroup) -> Result<bool, PermError> {
        if self.degree != other.degree {
            return Ok(false);
        }
        let elems = other.elements()?;
        Ok(self.generators.iter().all(|g| elems.contains(g)))
    }

    /// Equality of element sets.
    pub fn same_elements(&self, other: &PermGroup) -> Result<bool, PermError> {
        Ok(self.degree == other.degree
            && self.order()? == other.order()?
            && self.is_subgroup_of(other)?)
    }

    pub fn is_normal_in(&self, other: &PermGroup) -> Result<bool, PermError> {
        if !self.is_subgroup_of(other)? {
            return Ok(false);
        }
        let elems = self.elements()?;
        for s in other.generators() {
            for g in &self.generators {
                if !elems.contains(&g.conjugate_by(s)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Elements whose order is a power of `ell` (including the identity).
    pub fn ell_elements(&self, ell: u64) -> Result<Vec<Permutation>, PermError> {
        Ok(self
            .elements()?
            .iter()
            .filter(|p| {
                let mut o = p.order();
                while o % ell == 0 {
                    o /= ell;
                }
                o == 1
            })
            .cloned()
            .collect())
    }

    /// Nilpotency via unique Sylow subgroups: for every prime `p` dividing the
    /// order, the `p`-elements must form a set closed under multiplication.
    pub fn is_nilpotent(&self) -> Result<bool, PermError> {
        let order = self.order()?;
        for (p, _) in arith::factorize(order) {
            if !is_closed_set(&self.ell_elements(p)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Conjugacy-class representatives (least element of each class).
    pub fn conjugacy_class_reps(&self) -> Result<Vec<Permutation>, PermError> {
        let elems = self.elements()?;
        let mut class_of = vec![usize::MAX; elems.len()];
        let mut reps = Vec::new();
        for (i, e) in elems.iter().enumerate() {
            if class_of[i] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(e.clone());
            class_of[i] = id;
            let mut queue = VecDeque::from([e.clone()]);
            while let Some(x) = queue.pop_front() {
                for g in &self.generators {
                    let y = x.conjugate_by(g);
                    let j = elems.index_of(&y).expect("closed under conjugation");
                    if class_of[j] == usize::MAX {
                        class_of[j] = id;
                        queue.push_back(y);
                    }
                }
            }
        }
        Ok(reps)
    }

    /// Drops generators that lie in the subgroup generated by the others.
    pub fn with_irredundant_generators(&self) -> Result<PermGroup, PermError> {
        let order = self.order()? as usize;
        let mut gens = self.generators.clone();
        let mut i = 0;
        while i < gens.len() && gens.len() > 1 {
            let mut rest = gens.clone();
            rest.remove(i);
            if closure(self.degree, &rest, self.caps.max_order)?.len() == order {
                gens = rest;
            } else {
                i += 1;
            }
        }
        let g = Self {
            degree: self.degree,
            generators: gens,
            caps: self.caps,
            elements: self.elements.clone(),
        };
        Ok(g)
    }
}

/// Breadth-first closure under right multiplication by generators.
pub(crate) fn closure(
    degree: usize,
    gens: &[Permutation],
    cap: usize,
) -> Result<Vec<Permutation>, PermError> {
    let id = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut list = vec![id];
    let mut i = 0;
    while i < list.len() {
        let x = list[i].clone();
        i += 1;
        for g in gens {
            let y = x.then(g);
            if !seen.contains(&y) {
                if list.len() >= cap {
                    return Err(PermError::OrderCap { cap });
                }
                seen.insert(y.clone());
                list.push(y);
            }
        }
    }
    Ok(list)
}

fn greedy_generators(degree: usize, sorted: &[Permutation]) -> Vec<Permutation> {
    let mut gens: Vec<Permutation> = Vec::new();
    let mut span: HashSet<Permutation> = HashSet::from([Permutation::identity(degree)]);
    for e in sorted {
        if span.contains(e) {
            continue;
        }
        gens.push(e.clone());
        let list = closure(degree, &gens, usize::MAX).expect("uncapped");
        span = list.into_iter().collect();
        if span.len() == sorted.len() {
            break;
        }
    }
    gens
}

/// Whether a finite set of permutations containing the identity is closed
/// under multiplication (hence a group).
pub(crate) fn is_closed_set(set: &[Permutation]) -> bool {
    if set.is_empty() {
        return false;
    }
    let members: HashSet<&Permutation> = set.iter().collect();
    let degree = set[0].degree();
    let gens = greedy_generators_checked(degree, set, &members);
    match gens {
        Some(list) => list == set.len(),
        None => false,
    }
}

// Closure of greedily chosen members, aborting as soon as a product leaves the
// set; returns the closure size otherwise.
fn greedy_generators_checked(
    degree: usize,
    sorted: &[Permutation],
    members: &HashSet<&Permutation>,
) -> Option<usize> {
    let mut gens: Vec<Permutation> = Vec::new();
    let mut span: HashSet<Permutation> = HashSet::from([Permutation::identity(degree)]);
    if !members.contains(&Permutation::identity(degree)) {
        return None;
    }
    for e in sorted {
        if span.contains(e) {
            continue;
        }
        gens.push(e.clone());
        let mut list: Vec<Permutation> = span.iter().cloned().collect();
        let mut i = 0;
        while i < list.len() {
            let x = list[i].clone();
            i += 1;
            for g in &gens {
                let y = x.then(g);
                if !span.contains(&y) {
                    if !members.contains(&y) {
                        return None;
                    }
                    span.insert(y.clone());
                    list.push(y);
                }
            }
        }
    }
    Some(span.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_index_examples() {
        assert_eq!(PermGroup::cyclic(2).unwrap().min_index().unwrap(), 1);
        assert_eq!(PermGroup::symmetric(3).unwrap().min_index().unwrap(), 1);
        assert_eq!(PermGroup::cyclic(4).unwrap().min_index().unwrap(), 2);
        assert!(matches!(
            PermGroup::trivial(3).unwrap().min_index(),
            Err(PermError::TrivialGroup)
        ));
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(PermGroup::trivial(3).unwrap().orbits(), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(PermGroup::symmetric(3).unwrap().orbits(), vec![vec![0, 1, 2]]);
        // diagonal C2 inside C2 x C2 on 4 = 2*2 points
        let diag = PermGroup::parse("(1 4)(2 3)", Some(4)).unwrap();
        assert_eq!(diag.orbits(), vec![vec![0, 3], vec![1, 2]]);
        assert!(!diag.is_transitive());
    }

    #[test]
    fn order_cap_is_enforced() {
        let caps = Caps {
            max_order: 100,
            ..Caps::default()
        };
        let s5 = PermGroup::with_caps(5, PermGroup::symmetric(5).unwrap().generators().to_vec(), caps)
            .unwrap();
        assert!(matches!(s5.order(), Err(PermError::OrderCap { cap: 100 })));
        assert_eq!(PermGroup::symmetric(5).unwrap().order().unwrap(), 120);
    }

    #[test]
    fn degree_cap_is_enforced() {
        let caps = Caps {
            max_degree: 3,
            ..Caps::default()
        };
        assert!(PermGroup::with_caps(4, vec![], caps).is_err());
        let bad = PermGroup::new(3, vec![Permutation::identity(4)]);
        assert!(matches!(bad, Err(PermError::DegreeMismatch { .. })));
    }

    #[test]
    fn nilpotency() {
        assert!(PermGroup::cyclic(12).unwrap().is_nilpotent().unwrap());
        assert!(!PermGroup::symmetric(3).unwrap().is_nilpotent().unwrap());
        let d4 = PermGroup::parse("(1 2 3 4), (1 3)", None).unwrap();
        assert!(d4.is_nilpotent().unwrap());
    }

    #[test]
    fn class_reps_of_s4() {
        let s4 = PermGroup::symmetric(4).unwrap();
        assert_eq!(s4.conjugacy_class_reps().unwrap().len(), 5);
    }

    #[test]
    fn stabilizer_and_subgroups() {
        let s4 = PermGroup::symmetric(4).unwrap();
        let h = s4.stabilizer(0).unwrap();
        assert_eq!(h.order().unwrap(), 6);
        assert!(h.is_subgroup_of(&s4).unwrap());
        assert!(!h.is_normal_in(&s4).unwrap());
        let v4 = s4.subgroup_generated(vec![
            Permutation::parse("(1 2)(3 4)", Some(4)).unwrap(),
            Permutation::parse("(1 3)(2 4)", Some(4)).unwrap(),
        ]);
        assert!(v4.unwrap().is_normal_in(&s4).unwrap());
    }

    #[test]
    fn irredundant_generators() {
        let g = PermGroup::parse("(1 2 3 4), (1 3)(2 4), (1 3)", None).unwrap();
        let r = g.with_irredundant_generators().unwrap();
        assert_eq!(r.generators().len(), 2);
        assert_eq!(r.order().unwrap(), 8);
    }
}
