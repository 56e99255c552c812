use super::group::is_closed_set;
use super::{coset_action, PermError, PermGroup, Permutation};
use crate::arith;

/// The ℓ-Sylow subgroup of a nilpotent group: its set of ℓ-power-order
/// elements. Trivial when ℓ does not divide the order.
pub fn sylow_subgroup(g: &PermGroup, ell: u64) -> Result<PermGroup, PermError> {
    if !arith::is_prime(ell) {
        return Err(PermError::NotPrime(ell));
    }
    if !g.is_nilpotent()? {
        return Err(PermError::NotNilpotent);
    }
    sylow_unchecked(g, ell)
}

fn sylow_unchecked(g: &PermGroup, ell: u64) -> Result<PermGroup, PermError> {
    let set = g.ell_elements(ell)?;
    if !is_closed_set(&set) {
        return Err(PermError::NotNilpotent);
    }
    Ok(PermGroup::from_closed_elements(g.degree(), set, g.caps()))
}

/// Splits a transitive nilpotent group into its Sylow factors acting on the
/// cosets of the matching Sylow subgroup of the stabilizer of point 0.
/// Factors are returned in increasing order of the prime; their degrees
/// multiply to the degree of `g`.
pub fn nilpotent_decomposition(g: &PermGroup) -> Result<Vec<(u64, PermGroup)>, PermError> {
    if !g.is_transitive() {
        return Err(PermError::NotTransitive);
    }
    if !g.is_nilpotent()? {
        return Err(PermError::NotNilpotent);
    }
    let h = g.stabilizer(0)?;
    let mut out = Vec::new();
    for (ell, _) in arith::factorize(g.degree() as u64) {
        let syl_g = sylow_unchecked(g, ell)?;
        let syl_h = sylow_unchecked(&h, ell)?;
        out.push((ell, coset_action(&syl_g, &syl_h)?));
    }
    Ok(out)
}

/// The product action of `factors` on tuples of points. A tuple
/// `(x_1, …, x_m)` is numbered `x_1 + n_1 (x_2 + n_2 (x_3 + …))`.
pub fn direct_product_action(factors: &[PermGroup]) -> Result<PermGroup, PermError> {
    let caps = factors.first().map(PermGroup::caps).unwrap_or_default();
    let mut degree: usize = 1;
    for f in factors {
        degree = degree
            .checked_mul(f.degree())
            .filter(|&d| d <= caps.max_degree)
            .ok_or(PermError::DegreeCap {
                degree: usize::MAX,
                cap: caps.max_degree,
            })?;
    }
    if let [single] = factors {
        return Ok(single.clone());
    }
    let mut gens = Vec::new();
    let mut stride = 1usize;
    for f in factors {
        let n = f.degree();
        for s in f.generators() {
            let images = (0..degree)
                .map(|x| {
                    let digit = (x / stride) % n;
                    (x + (s.image(digit) * stride) - digit * stride) as u32
                })
                .collect();
            gens.push(Permutation::from_images(images)?);
        }
        stride *= n;
    }
    PermGroup::with_caps(degree, gens, caps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::is_perm_isomorphic;

    #[test]
    fn sylow_examples() {
        let c6 = PermGroup::cyclic(6).unwrap();
        assert_eq!(sylow_subgroup(&c6, 2).unwrap().order().unwrap(), 2);
        assert_eq!(sylow_subgroup(&c6, 5).unwrap().order().unwrap(), 1);
        let c12 = PermGroup::cyclic(12).unwrap();
        let s = sylow_subgroup(&c12, 2).unwrap();
        assert_eq!(s.order().unwrap(), 4);
        assert!(s.elements().unwrap().iter().any(|p| p.order() == 4));
        assert_eq!(
            sylow_subgroup(&PermGroup::symmetric(3).unwrap(), 3).unwrap_err(),
            PermError::NotNilpotent
        );
    }

    #[test]
    fn decomposition_of_c6_and_c12() {
        let f = nilpotent_decomposition(&PermGroup::cyclic(6).unwrap()).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!((f[0].0, f[0].1.degree(), f[0].1.order().unwrap()), (2, 2, 2));
        assert_eq!((f[1].0, f[1].1.degree(), f[1].1.order().unwrap()), (3, 3, 3));

        let c12 = PermGroup::cyclic(12).unwrap();
        let f = nilpotent_decomposition(&c12).unwrap();
        assert_eq!(f.iter().map(|(l, g)| (*l, g.degree())).collect::<Vec<_>>(), vec![(2, 4), (3, 3)]);
        assert!(is_perm_isomorphic(&f[0].1, &PermGroup::cyclic(4).unwrap()).unwrap());
        let factors: Vec<PermGroup> = f.into_iter().map(|(_, g)| g).collect();
        let prod = direct_product_action(&factors).unwrap();
        assert!(is_perm_isomorphic(&prod, &c12).unwrap());
    }

    #[test]
    fn two_group_is_its_own_factor() {
        let d4 = PermGroup::parse("(1 2 3 4), (1 3)", None).unwrap();
        let f = nilpotent_decomposition(&d4).unwrap();
        assert_eq!(f.len(), 1);
        assert!(is_perm_isomorphic(&f[0].1, &d4).unwrap());
    }

    #[test]
    fn product_actions() {
        let c2 = PermGroup::cyclic(2).unwrap();
        let c3 = PermGroup::cyclic(3).unwrap();
        let p = direct_product_action(&[c2.clone(), c3]).unwrap();
        assert_eq!(p.degree(), 6);
        assert_eq!(p.order().unwrap(), 6);
        assert!(p.is_transitive());
        let single = direct_product_action(std::slice::from_ref(&c2)).unwrap();
        assert!(single.same_elements(&c2).unwrap());
        let v = direct_product_action(&[c2.clone(), c2]).unwrap();
        assert_eq!((v.degree(), v.order().unwrap(), v.min_index().unwrap()), (4, 4, 2));
    }

    #[test]
    fn rejects_bad_inputs() {
        let intrans = PermGroup::parse("(1 2)", Some(3)).unwrap();
        assert_eq!(nilpotent_decomposition(&intrans).unwrap_err(), PermError::NotTransitive);
        let s3 = PermGroup::symmetric(3).unwrap();
        assert_eq!(nilpotent_decomposition(&s3).unwrap_err(), PermError::NotNilpotent);
    }
}
