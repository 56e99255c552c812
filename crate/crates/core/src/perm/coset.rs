use super::{PermError, PermGroup, Permutation};

/// Labels every element of `g` by its right coset `H x`; coset 0 is `H`.
/// Returns the label per element index and one representative per coset.
pub(crate) fn right_coset_labels(
    g: &PermGroup,
    h: &PermGroup,
) -> Result<(Vec<usize>, Vec<usize>), PermError> {
    let elems = g.elements()?;
    let sub = h.elements()?;
    let mut label = vec![usize::MAX; elems.len()];
    let mut reps = Vec::new();
    for (i, x) in elems.iter().enumerate() {
        if label[i] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(i);
        for y in sub.iter() {
            let j = elems.index_of(&y.then(x)).ok_or(PermError::NotSubgroup)?;
            label[j] = id;
        }
    }
    Ok((label, reps))
}

/// The action of `g` on the right cosets of `h`, points numbered in order of
/// least coset element; point 0 is `h` itself, so its stabilizer is `h`.
pub fn coset_action(g: &PermGroup, h: &PermGroup) -> Result<PermGroup, PermError> {
    if !h.is_subgroup_of(g)? {
        return Err(PermError::NotSubgroup);
    }
    let index = (g.order()? / h.order()?) as usize;
    if index > g.caps().max_degree {
        return Err(PermError::DegreeCap {
            degree: index,
            cap: g.caps().max_degree,
        });
    }
    let elems = g.elements()?;
    let (label, reps) = right_coset_labels(g, h)?;
    let gens = g
        .generators()
        .iter()
        .map(|s| {
            let images = reps
                .iter()
                .map(|&r| {
                    let j = elems.index_of(&elems.as_slice()[r].then(s)).expect("closed");
                    label[j] as u32
                })
                .collect();
            Permutation::from_images(images)
        })
        .collect::<Result<Vec<_>, _>>()?;
    PermGroup::with_caps(index, gens, g.caps())
}

/// The largest normal subgroup of `g` contained in `h`.
pub fn normal_core(g: &PermGroup, h: &PermGroup) -> Result<PermGroup, PermError> {
    if !h.is_subgroup_of(g)? {
        return Err(PermError::NotSubgroup);
    }
    let elems = g.elements()?;
    let sub = h.elements()?;
    g.subgroup_where(|x| elems.iter().all(|c| sub.contains(&x.conjugate_by(c))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn whole_group_gives_trivial_action() {
        let g = PermGroup::symmetric(3).unwrap();
        let a = coset_action(&g, &g).unwrap();
        assert_eq!(a.degree(), 1);
        assert_eq!(a.order().unwrap(), 1);
    }

    #[test]
    fn trivial_subgroup_gives_regular_action() {
        let g = PermGroup::cyclic(3).unwrap();
        let a = coset_action(&g, &PermGroup::trivial(3).unwrap()).unwrap();
        assert_eq!(a.degree(), 3);
        assert_eq!(a.order().unwrap(), 3);
        assert!(a.is_transitive());
    }

    #[test]
    fn kernel_is_core() {
        let s4 = PermGroup::symmetric(4).unwrap();
        let d4 = s4
            .subgroup_generated(vec![
                Permutation::parse("(1 2 3 4)", None).unwrap(),
                Permutation::parse("(1 3)", Some(4)).unwrap(),
            ])
            .unwrap();
        let act = coset_action(&s4, &d4).unwrap();
        assert_eq!(act.degree(), 3);
        assert_eq!(act.order().unwrap(), 6);
        // S4 -> S3 has kernel V4, the core of D4
        assert_eq!(normal_core(&s4, &d4).unwrap().order().unwrap(), 4);
    }

    #[test]
    fn rejects_non_subgroups() {
        let c3 = PermGroup::cyclic(3).unwrap();
        let t = PermGroup::parse("(1 2)", Some(3)).unwrap();
        assert_eq!(coset_action(&c3, &t).unwrap_err(), PermError::NotSubgroup);
    }
}
