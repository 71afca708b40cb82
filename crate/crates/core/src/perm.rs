//! Permutations of `{0, …, n-1}` stored as image tables.
//!
//! Everything in this crate uses the right-action convention: `apply(p, x)`
//! is written `x^p`, and `p.compose(q)` means "first `p`, then `q`", so that
//! `x^(pq) = (x^p)^q`. Points are 0-based internally; the text and JSON
//! formats in [`crate::io`] are 1-based.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A point index. Degrees are capped far below `u32::MAX`.
pub type Point = u32;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<Point>,
}

/// Disjoint cycles on a fixed degree, 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycles {
    degree: usize,
    cycles: Vec<Vec<usize>>,
}

impl Cycles {
    /// Validates disjointness and range. Cycles of length < 2 are dropped.
    pub fn new(degree: usize, cycles: Vec<Vec<usize>>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::ZeroDegree);
        }
        let mut seen = vec![false; degree];
        for cycle in &cycles {
            for &x in cycle {
                if x >= degree {
                    return Err(Error::PointOutOfRange { point: x, degree });
                }
                if seen[x] {
                    return Err(Error::OverlappingCycles(x));
                }
                seen[x] = true;
            }
        }
        let cycles = cycles.into_iter().filter(|c| c.len() >= 2).collect();
        Ok(Cycles { degree, cycles })
    }

    /// Same as [`Cycles::new`] but with 1-based points.
    pub fn from_one_based(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let shifted = cycles
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&x| {
                        x.checked_sub(1)
                            .ok_or(Error::PointOutOfRange { point: 0, degree })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Cycles::new(degree, shifted)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n as Point).collect(),
        }
    }

    /// Builds a permutation from a 0-based image table, checking bijectivity.
    pub fn from_images(images: Vec<Point>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::ZeroDegree);
        }
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n {
                return Err(Error::PointOutOfRange {
                    point: x,
                    degree: n,
                });
            }
            if seen[x] {
                return Err(Error::NotBijection(x));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// 1-based image table, as used by the JSON formats.
    pub fn from_one_based(images: &[u64]) -> Result<Self> {
        let n = images.len();
        let zero_based = images
            .iter()
            .map(|&x| {
                if x == 0 || x as usize > n {
                    Err(Error::PointOutOfRange {
                        point: x as usize,
                        degree: n,
                    })
                } else {
                    Ok((x - 1) as Point)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_images(zero_based)
    }

    /// Caller guarantees the table is a bijection.
    pub(crate) fn from_images_unchecked(images: Vec<Point>) -> Self {
        debug_assert!(Permutation::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    pub fn from_cycles(c: &Cycles) -> Self {
        let mut images: Vec<Point> = (0..c.degree as Point).collect();
        for cycle in &c.cycles {
            for (i, &x) in cycle.iter().enumerate() {
                images[x] = cycle[(i + 1) % cycle.len()] as Point;
            }
        }
        Permutation { images }
    }

    /// Disjoint 0-based cycles, trusted by the caller.
    pub(crate) fn from_cycles_unchecked(degree: usize, cycles: &[Vec<usize>]) -> Self {
        Permutation::from_cycles(&Cycles {
            degree,
            cycles: cycles.to_vec(),
        })
    }

    /// Parses 1-based cycle notation such as `(1,2)(3,4)`; `()` is the identity.
    pub fn parse_cycles(degree: usize, text: &str) -> Result<Self> {
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let inner_end = rest
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced parenthesis in {text:?}")))?;
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in {text:?}")))?;
            let inner = &open[..inner_end - 1];
            let cycle = inner
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|e| Error::Parse(format!("bad point {s:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            cycles.push(cycle);
            rest = rest[inner_end + 1..].trim_start();
        }
        Ok(Permutation::from_cycles(&Cycles::from_one_based(
            degree, &cycles,
        )?))
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Point] {
        &self.images
    }

    pub fn into_images(self) -> Vec<Point> {
        self.images
    }

    pub fn one_based(&self) -> Vec<u64> {
        self.images.iter().map(|&x| x as u64 + 1).collect()
    }

    /// `x^p`, unchecked beyond slice indexing.
    #[inline]
    pub fn image(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn apply(&self, x: usize) -> Result<usize> {
        self.images
            .get(x)
            .map(|&y| y as usize)
            .ok_or(Error::PointOutOfRange {
                point: x,
                degree: self.degree(),
            })
    }

    /// "First `self`, then `other`".
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.mul_unchecked(other))
    }

    #[inline]
    pub(crate) fn mul_unchecked(&self, other: &Permutation) -> Permutation {
        let images = self
            .images
            .iter()
            .map(|&x| other.images[x as usize])
            .collect();
        Permutation { images }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as Point;
        }
        Permutation { images }
    }

    /// `self^-1 · g · self`, i.e. `g` conjugated by `self` in the right-action sense.
    pub fn conjugate_of(&self, g: &Permutation) -> Permutation {
        // x^(s^-1 g s): relabel g's mapping a -> b as a^s -> b^s
        let mut images = vec![0; self.degree()];
        for (a, &b) in g.images.iter().enumerate() {
            images[self.images[a] as usize] = self.images[b as usize];
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &x)| i == x as usize)
    }

    pub fn smallest_moved_point(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|&(i, &x)| i != x as usize)
            .map(|(i, _)| i)
    }

    pub fn moved_points(&self) -> impl Iterator<Item = usize> + '_ {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &x)| i != x as usize)
            .map(|(i, _)| i)
    }

    /// Disjoint cycles of length at least 2, each starting at its minimal point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.image(start) == start {
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

    fn cycle_lengths(&self) -> Vec<usize> {
        self.cycles().iter().map(Vec::len).collect()
    }

    /// Element order, the lcm of the cycle lengths.
    pub fn order(&self) -> BigUint {
        let mut acc = BigUint::one();
        for len in self.cycle_lengths() {
            let len = BigUint::from(len);
            let g = gcd(&acc, &len);
            acc = acc * len / g;
        }
        acc
    }

    pub fn is_even(&self) -> bool {
        self.cycle_lengths().iter().map(|&l| l - 1).sum::<usize>() % 2 == 0
    }

    /// `self^k` for an arbitrary-precision exponent, computed cycle by cycle.
    pub fn pow(&self, k: &BigUint) -> Permutation {
        let mut images = self.images.clone();
        for cycle in self.cycles() {
            let len = cycle.len();
            let shift = (k % BigUint::from(len)).to_usize().unwrap_or(0);
            for (i, &x) in cycle.iter().enumerate() {
                images[x] = cycle[(i + shift) % len] as Point;
            }
        }
        Permutation { images }
    }

    /// `self` on points `0..n` followed by `other` shifted to `n..n+m`.
    pub fn disjoint_union(&self, other: &Permutation) -> Permutation {
        let n = self.degree() as Point;
        let mut images = self.images.clone();
        images.extend(other.images.iter().map(|&x| x + n));
        Permutation { images }
    }

    /// Restriction to the point range `range`, which must be invariant.
    pub(crate) fn restrict(&self, range: std::ops::Range<usize>) -> Permutation {
        let offset = range.start as Point;
        let images = self.images[range].iter().map(|&x| x - offset).collect();
        Permutation::from_images_unchecked(images)
    }

    /// Transports `self` along the bijection `relabel` (point `x` becomes
    /// `relabel[x]`): the result maps `relabel[x]` to `relabel[x^self]`.
    pub fn relabel(&self, relabel: &[Point]) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (a, &b) in self.images.iter().enumerate() {
            images[relabel[a] as usize] = relabel[b as usize];
        }
        Permutation { images }
    }
}

fn gcd(a: &BigUint, b: &BigUint) -> BigUint {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

impl Mul for &Permutation {
    type Output = Permutation;

    /// Panics on a degree mismatch; use [`Permutation::compose`] for a checked product.
    fn mul(self, rhs: &Permutation) -> Permutation {
        assert_eq!(self.degree(), rhs.degree(), "degree mismatch in product");
        self.mul_unchecked(rhs)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (i, x) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", x + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}

/// Parses either a JSON-style 1-based image array `[2,1,4,3]` or cycle
/// notation, which needs an explicit degree: `5:(1,2)(3,4)`.
impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('[') {
            let images: Vec<u64> = serde_json::from_str(s)?;
            return Permutation::from_one_based(&images);
        }
        let (degree, cycles) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected 'degree:(cycles)' in {s:?}")))?;
        let degree = degree
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("bad degree: {e}")))?;
        Permutation::parse_cycles(degree, cycles)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cyc(n: usize, text: &str) -> Permutation {
        Permutation::parse_cycles(n, text).unwrap()
    }

    #[test]
    fn identity_laws() {
        let id = Permutation::identity(4);
        assert_eq!(id.images(), &[0, 1, 2, 3]);
        let p = cyc(4, "(1,3,2)");
        assert_eq!(id.compose(&p).unwrap(), p);
        assert_eq!(id.inverse(), id);
    }

    #[test]
    fn klein_generator_from_cycles() {
        let a = cyc(4, "(1,2)(3,4)");
        assert_eq!(a.one_based(), vec![2, 1, 4, 3]);
        assert_eq!(a.apply(0).unwrap(), 1);
        assert!(a.compose(&a).unwrap().is_identity());
        assert_eq!(cyc(4, "()"), Permutation::identity(4));
    }

    #[test]
    fn five_cycle_has_order_five() {
        let p = cyc(5, "(1,2,3,4,5)");
        let mut q = Permutation::identity(5);
        for _ in 0..5 {
            q = &q * &p;
        }
        assert!(q.is_identity());
        assert_eq!(p.order(), BigUint::from(5u32));
    }

    #[test]
    fn composition_is_left_factor_first() {
        // 1 -> 2 -> 3, 2 -> 1 -> 1, 3 -> 3 -> 2
        let p = cyc(3, "(1,2)").compose(&cyc(3, "(2,3)")).unwrap();
        assert_eq!(p, cyc(3, "(1,3,2)"));
        let q = cyc(3, "(2,3)").compose(&cyc(3, "(1,2)")).unwrap();
        assert_eq!(q, cyc(3, "(1,2,3)"));
    }

    #[test]
    fn order_is_lcm_of_cycle_lengths() {
        let p = cyc(5, "(1,2)(3,4,5)");
        assert_eq!(p.order(), BigUint::from(6u32));
        let mut q = p.clone();
        let mut k = 1;
        while !q.is_identity() {
            q = &q * &p;
            k += 1;
        }
        assert_eq!(k, 6);
        assert_eq!(Permutation::identity(7).order(), BigUint::one());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            Cycles::from_one_based(4, &[vec![1, 2], vec![2, 3]]),
            Err(Error::OverlappingCycles(1))
        ));
        assert!(matches!(
            Cycles::from_one_based(4, &[vec![1, 5]]),
            Err(Error::PointOutOfRange { .. })
        ));
        assert!(matches!(
            Permutation::from_images(vec![0, 0, 1]),
            Err(Error::NotBijection(0))
        ));
        assert!(matches!(
            Permutation::identity(3).compose(&Permutation::identity(4)),
            Err(Error::DegreeMismatch { .. })
        ));
        assert!(Permutation::identity(3).apply(3).is_err());
    }

    #[test]
    fn conjugation_matches_products() {
        let g = cyc(6, "(1,2,3)(4,5)");
        let s = cyc(6, "(1,6,2)(3,4)");
        let direct = &(&s.inverse() * &g) * &s;
        assert_eq!(s.conjugate_of(&g), direct);
    }

    #[test]
    fn parses_both_formats() {
        let a: Permutation = "[2,1,4,3]".parse().unwrap();
        let b: Permutation = "4:(1,2)(3,4)".parse().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "(1,2)(3,4)");
    }

    fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n as Point).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::from_images(v).unwrap())
    }

    proptest! {
        #[test]
        fn associativity(p in perm_strategy(9), q in perm_strategy(9), r in perm_strategy(9)) {
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        }

        #[test]
        fn inverse_laws(p in perm_strategy(12)) {
            prop_assert!((&p * &p.inverse()).is_identity());
            prop_assert_eq!(p.inverse().inverse(), p);
        }

        #[test]
        fn cycle_text_round_trip(p in perm_strategy(10)) {
            let text = p.to_string();
            let back = Permutation::parse_cycles(10, &text).unwrap();
            prop_assert_eq!(back.to_string(), text);
            prop_assert_eq!(back, p);
        }

        #[test]
        fn pow_matches_repeated_product(p in perm_strategy(8), k in 0u32..30) {
            let mut q = Permutation::identity(8);
            for _ in 0..k { q = &q * &p; }
            prop_assert_eq!(p.pow(&BigUint::from(k)), q);
        }
    }
}
