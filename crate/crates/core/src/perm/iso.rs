use std::collections::HashMap;

use super::{PermError, PermGroup, Permutation};

/// Largest degree the backtracking search accepts.
pub const ISO_MAX_DEGREE: usize = 64;

/// Backtracking search for point bijections `φ` with `φ⁻¹ s φ ∈ dst` for
/// every generator `s` of `src`: images `h_i` of the generators are chosen
/// with matching cycle types (also on pairwise products), then `φ` is
/// propagated along each `src`-orbit from `φ(s_i(x)) = h_i(φ(x))`.
struct Search<'a> {
    n: usize,
    src_gens: Vec<Permutation>,
    dst: &'a [Permutation],
    dst_types: Vec<Vec<usize>>,
    by_type: HashMap<Vec<usize>, Vec<usize>>,
    pair_types: Vec<Vec<Vec<usize>>>,
    /// (representative, [(point, parent, generator)]) per orbit of `src`
    trees: Vec<(usize, Vec<(usize, usize, usize)>)>,
}

impl<'a> Search<'a> {
    fn new(src: &PermGroup, dst: &'a [Permutation]) -> Self {
        let n = src.degree();
        let src_gens = src.generators().to_vec();
        let dst_types: Vec<Vec<usize>> = dst.iter().map(Permutation::cycle_type).collect();
        let mut by_type: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for (i, t) in dst_types.iter().enumerate() {
            by_type.entry(t.clone()).or_default().push(i);
        }
        let pair_types = (0..src_gens.len())
            .map(|i| (0..i).map(|j| src_gens[j].then(&src_gens[i]).cycle_type()).collect())
            .collect();
        let mut seen = vec![false; n];
        let mut trees = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut order = Vec::new();
            let mut queue = vec![start];
            let mut qi = 0;
            while qi < queue.len() {
                let x = queue[qi];
                qi += 1;
                for (gi, s) in src_gens.iter().enumerate() {
                    let y = s.image(x);
                    if !seen[y] {
                        seen[y] = true;
                        order.push((y, x, gi));
                        queue.push(y);
                    }
                }
            }
            trees.push((start, order));
        }
        Self {
            n,
            src_gens,
            dst,
            dst_types,
            by_type,
            pair_types,
            trees,
        }
    }

    /// Calls `visit` for every bijection found; stops when it returns false.
    fn run(&self, first: Option<&[usize]>, visit: &mut dyn FnMut(Permutation) -> bool) {
        let mut chosen = Vec::with_capacity(self.src_gens.len());
        self.choose(0, first, &mut chosen, visit);
    }

    fn choose(
        &self,
        i: usize,
        first: Option<&[usize]>,
        chosen: &mut Vec<usize>,
        visit: &mut dyn FnMut(Permutation) -> bool,
    ) -> bool {
        if i == self.src_gens.len() {
            let hs: Vec<&Permutation> = chosen.iter().map(|&c| &self.dst[c]).collect();
            let mut phi = vec![usize::MAX; self.n];
            let mut used = vec![false; self.n];
            return self.place_orbit(0, &hs, &mut phi, &mut used, visit);
        }
        let want = self.src_gens[i].cycle_type();
        let Some(bucket) = self.by_type.get(&want) else {
            return true;
        };
        let allowed: &[usize] = match (i, first) {
            (0, Some(f)) => f,
            _ => bucket,
        };
        for &c in allowed {
            if self.dst_types[c] != want {
                continue;
            }
            let ok = chosen.iter().enumerate().all(|(j, &cj)| {
                self.dst[cj].then(&self.dst[c]).cycle_type() == self.pair_types[i][j]
            });
            if !ok {
                continue;
            }
            chosen.push(c);
            let go_on = self.choose(i + 1, first, chosen, visit);
            chosen.pop();
            if !go_on {
                return false;
            }
        }
        true
    }

    fn place_orbit(
        &self,
        t: usize,
        hs: &[&Permutation],
        phi: &mut Vec<usize>,
        used: &mut Vec<bool>,
        visit: &mut dyn FnMut(Permutation) -> bool,
    ) -> bool {
        if t == self.trees.len() {
            let images = phi.iter().map(|&y| y as u32).collect();
            return visit(Permutation::from_images_unchecked(images));
        }
        let (rep, ref order) = self.trees[t];
        for y in 0..self.n {
            if used[y] {
                continue;
            }
            let mut assigned = vec![rep];
            phi[rep] = y;
            used[y] = true;
            let mut ok = true;
            for &(x, parent, gi) in order {
                let img = hs[gi].image(phi[parent]);
                if used[img] {
                    ok = false;
                    break;
                }
                phi[x] = img;
                used[img] = true;
                assigned.push(x);
            }
            if ok {
                ok = assigned.iter().all(|&x| {
                    self.src_gens
                        .iter()
                        .zip(hs)
                        .all(|(s, h)| phi[s.image(x)] == h.image(phi[x]))
                });
            }
            if ok && !self.place_orbit(t + 1, hs, phi, used, visit) {
                return false;
            }
            for &x in &assigned {
                used[phi[x]] = false;
                phi[x] = usize::MAX;
            }
        }
        true
    }
}

fn check_degree(g: &PermGroup) -> Result<(), PermError> {
    if g.degree() > ISO_MAX_DEGREE {
        return Err(PermError::DegreeCap {
            degree: g.degree(),
            cap: ISO_MAX_DEGREE,
        });
    }
    Ok(())
}

fn type_histogram(g: &PermGroup) -> Result<HashMap<Vec<usize>, usize>, PermError> {
    let mut h = HashMap::new();
    for p in g.elements()?.iter() {
        *h.entry(p.cycle_type()).or_insert(0) += 1;
    }
    Ok(h)
}

/// A bijection `φ` with `φ⁻¹ G1 φ = G2`, when one exists.
pub fn perm_isomorphism(g1: &PermGroup, g2: &PermGroup) -> Result<Option<Permutation>, PermError> {
    check_degree(g1)?;
    check_degree(g2)?;
    if g1.degree() != g2.degree() || g1.order()? != g2.order()? {
        return Ok(None);
    }
    let mut sizes1: Vec<usize> = g1.orbits().iter().map(Vec::len).collect();
    let mut sizes2: Vec<usize> = g2.orbits().iter().map(Vec::len).collect();
    sizes1.sort_unstable();
    sizes2.sort_unstable();
    if sizes1 != sizes2 || type_histogram(g1)? != type_histogram(g2)? {
        return Ok(None);
    }
    let a = g1.with_irredundant_generators()?;
    let b = g2.with_irredundant_generators()?;
    let swapped = b.generators().len() < a.generators().len();
    let (src, dst) = if swapped { (&b, &a) } else { (&a, &b) };
    if src.is_trivial() {
        return Ok(Some(Permutation::identity(g1.degree())));
    }
    let dst_elems = dst.elements()?.as_slice();
    // conjugating a solution by an element of dst moves h_1 within its class
    let reps: Vec<usize> = dst
        .conjugacy_class_reps()?
        .iter()
        .map(|r| dst.elements().expect("enumerated").index_of(r).expect("member"))
        .collect();
    let search = Search::new(src, dst_elems);
    let mut found = None;
    search.run(Some(&reps), &mut |phi| {
        found = Some(phi);
        false
    });
    Ok(found.map(|phi| if swapped { phi.inverse() } else { phi }))
}

/// Whether some relabeling of points conjugates `g1` onto `g2`.
pub fn is_perm_isomorphic(g1: &PermGroup, g2: &PermGroup) -> Result<bool, PermError> {
    Ok(perm_isomorphism(g1, g2)?.is_some())
}

/// `N_{S_n}(G)`, enumerated as the set of all self-conjugators.
pub fn normalizer_in_symmetric(g: &PermGroup) -> Result<PermGroup, PermError> {
    check_degree(g)?;
    if g.is_trivial() {
        return PermGroup::symmetric(g.degree());
    }
    let src = g.with_irredundant_generators()?;
    let elems = g.elements()?.as_slice();
    let search = Search::new(&src, elems);
    let mut all = Vec::new();
    let cap = g.caps().max_order;
    let mut overflow = false;
    search.run(None, &mut |phi| {
        all.push(phi);
        if all.len() > cap {
            overflow = true;
            return false;
        }
        true
    });
    if overflow {
        return Err(PermError::OrderCap { cap });
    }
    Ok(PermGroup::from_closed_elements(g.degree(), all, g.caps()))
}
