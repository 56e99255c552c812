use std::fmt;
use std::ops::Mul;

use super::PermError;

/// A permutation of `{0, …, degree-1}` stored as its image array.
///
/// Products compose left to right: `(p * q)(x) = q(p(x))`, the convention of
/// GAP and of the cycle-notation tables this crate ships with.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, PermError> {
        if images.is_empty() {
            return Err(PermError::InvalidPermutation("degree must be positive".into()));
        }
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let slot = seen
                .get_mut(i as usize)
                .ok_or_else(|| PermError::InvalidPermutation(format!("image {i} out of range")))?;
            if *slot {
                return Err(PermError::InvalidPermutation(format!("image {i} repeated")));
            }
            *slot = true;
        }
        Ok(Self { images })
    }

    /// Images must already form a bijection; only checked in debug builds.
    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Self { images }
    }

    /// Builds a permutation from 0-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (pos, &pt) in cycle.iter().enumerate() {
                if pt >= degree {
                    return Err(PermError::InvalidPermutation(format!(
                        "point {} exceeds degree {degree}",
                        pt + 1
                    )));
                }
                if touched[pt] {
                    return Err(PermError::InvalidPermutation(format!(
                        "point {} appears in two cycles",
                        pt + 1
                    )));
                }
                touched[pt] = true;
                images[pt] = cycle[(pos + 1) % cycle.len()] as u32;
            }
        }
        Self::from_images(images)
    }

    /// Parses one generator in 1-based cycle notation, e.g. `(1 2 3)(4 5)`,
    /// `(1,2,3)` or `()`. `degree` defaults to the largest point mentioned.
    pub fn parse(text: &str, degree: Option<usize>) -> Result<Self, PermError> {
        let cycles = parse_cycle_product(text)?;
        let max_pt = cycles.iter().flatten().copied().max().map_or(1, |m| m + 1);
        let degree = degree.unwrap_or(max_pt);
        if max_pt > degree {
            return Err(PermError::InvalidPermutation(format!(
                "point {max_pt} exceeds degree {degree}"
            )));
        }
        Self::from_cycles(degree, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&i| other.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, exp: u64) -> Permutation {
        let mut acc = Permutation::identity(self.degree());
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// `g^-1 * self * g`
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        g.inverse().then(self).then(g)
    }

    /// `self^-1 * other^-1 * self * other`
    pub fn commutator(&self, other: &Permutation) -> Permutation {
        self.inverse().then(&other.inverse()).then(self).then(other)
    }

    /// Disjoint cycles including fixed points, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.image(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.image(x);
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut count = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.image(x);
            }
        }
        count
    }

    /// Sorted cycle lengths (fixed points included).
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable();
        t
    }

    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| lcm(acc, c.len() as u64))
    }

    /// Degree minus the number of cycles; equivalently the sum of
    /// `length - 1` over all cycles.
    pub fn ind(&self) -> usize {
        self.degree() - self.cycle_count()
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        let t = x % y;
        x = y;
        y = t;
    }
    a / x * b
}

impl Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        self.then(rhs)
    }
}

impl fmt::Display for Permutation {
    /// 1-based cycle notation without fixed points; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for cycle in self.cycles().into_iter().filter(|c| c.len() > 1) {
            any = true;
            write!(f, "(")?;
            for (i, p) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}; {}]", self.degree(), self)
    }
}

/// Parses a product of cycles such as `(1 2)(3, 4, 5)` into 0-based cycles.
fn parse_cycle_product(text: &str) -> Result<Vec<Vec<usize>>, PermError> {
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body_start = rest
            .strip_prefix('(')
            .ok_or_else(|| PermError::Parse(format!("expected '(' in {text:?}")))?;
        let close = body_start
            .find(')')
            .ok_or_else(|| PermError::Parse(format!("unbalanced parentheses in {text:?}")))?;
        let body = &body_start[..close];
        let cycle = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|tok| !tok.is_empty())
            .map(|tok| match tok.parse::<usize>() {
                Ok(0) => Err(PermError::Parse("points are 1-based".into())),
                Ok(p) => Ok(p - 1),
                Err(_) => Err(PermError::Parse(format!("bad point {tok:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        rest = body_start[close + 1..].trim_start();
    }
    Ok(cycles)
}

/// Splits a generator list like `(1 2)(3 4), (1 3)` at top-level commas.
pub fn split_generators(text: &str) -> Result<Vec<&str>, PermError> {
    let mut depth = 0i32;
    let mut parts = Vec::new();
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(PermError::Parse(format!("unbalanced parentheses in {text:?}")));
                }
            }
            ',' if depth == 0 => {
                parts.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(PermError::Parse(format!("unbalanced parentheses in {text:?}")));
    }
    parts.push(text[start..].trim());
    if parts.iter().any(|p| p.is_empty()) && parts.len() > 1 {
        return Err(PermError::Parse(format!("empty generator in {text:?}")));
    }
    Ok(parts.into_iter().filter(|p| !p.is_empty()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ind_examples() {
        assert_eq!(Permutation::identity(5).ind(), 0);
        assert_eq!(Permutation::parse("(1 2)", Some(4)).unwrap().ind(), 1);
        assert_eq!(Permutation::parse("(1 2 3 4)", Some(4)).unwrap().ind(), 3);
    }

    #[test]
    fn parse_and_display() {
        let p = Permutation::parse("(1,2,3)(4, 5)", None).unwrap();
        assert_eq!(p.degree(), 5);
        assert_eq!(p.to_string(), "(1 2 3)(4 5)");
        let q = Permutation::parse("  ( 1 2 3 ) ( 4 5 ) ", Some(6)).unwrap();
        assert_eq!(q.degree(), 6);
        assert_eq!(q.to_string(), p.to_string());
        assert_eq!(Permutation::parse("()", Some(3)).unwrap(), Permutation::identity(3));
    }

    #[test]
    fn parse_errors() {
        assert!(Permutation::parse("(1 2", None).is_err());
        assert!(Permutation::parse("(0 1)", None).is_err());
        assert!(Permutation::parse("(1 2)(2 3)", None).is_err());
        assert!(Permutation::parse("(1 5)", Some(4)).is_err());
        assert!(Permutation::parse("1 2", None).is_err());
        assert!(Permutation::from_images(vec![0, 0]).is_err());
    }

    #[test]
    fn split_generator_lists() {
        let parts = split_generators("(1,2,3)(4,5), (1 2)").unwrap();
        assert_eq!(parts, vec!["(1,2,3)(4,5)", "(1 2)"]);
        assert!(split_generators("(1 2,").is_err());
        assert!(split_generators("(1 2),,(3 4)").is_err());
    }

    #[test]
    fn composition_is_left_to_right() {
        let a = Permutation::parse("(1 2)", Some(3)).unwrap();
        let b = Permutation::parse("(2 3)", Some(3)).unwrap();
        // 1 -> 2 -> 3, 3 -> 3 -> 2, 2 -> 1 -> 1
        assert_eq!((&a * &b).to_string(), "(1 3 2)");
        assert_eq!(a.then(&b).inverse(), b.then(&a));
        assert!(a.then(&a).is_identity());
    }

    #[test]
    fn order_and_powers() {
        let p = Permutation::parse("(1 2 3)(4 5)", None).unwrap();
        assert_eq!(p.order(), 6);
        assert!(p.pow(6).is_identity());
        assert!(!p.pow(3).is_identity());
        assert_eq!(p.cycle_type(), vec![2, 3]);
    }
}
