//! Permutation groups given by generators, backed by a lazily built
//! stabilizer chain.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use crate::chain::StabilizerChain;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::perm::{Permutation, Point};

pub struct PermGroup {
    degree: usize,
    gens: Vec<Permutation>,
    name: Option<String>,
    /// A base of some overgroup, used when the chain is built.
    base_hint: Option<Vec<usize>>,
    order_hint: Option<BigUint>,
    chain: OnceLock<StabilizerChain>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        let chain = OnceLock::new();
        if let Some(c) = self.chain.get() {
            let _ = chain.set(c.clone());
        }
        PermGroup {
            degree: self.degree,
            gens: self.gens.clone(),
            name: self.name.clone(),
            base_hint: self.base_hint.clone(),
            order_hint: self.order_hint.clone(),
            chain,
        }
    }
}

impl std::fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("name", &self.name)
            .field("generators", &self.gens.len())
            .finish()
    }
}

impl PermGroup {
    pub fn new(degree: usize, gens: Vec<Permutation>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::ZeroDegree);
        }
        if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
            return Err(Error::DegreeMismatch {
                left: degree,
                right: g.degree(),
            });
        }
        Ok(PermGroup {
            degree,
            gens,
            name: None,
            base_hint: None,
            order_hint: None,
            chain: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        Self::new(degree, Vec::new()).expect("positive degree")
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// `⟨gens⟩` as a subgroup of `self`; fails if a generator is not in `self`.
    /// The chain reuses this group's base.
    pub fn subgroup(&self, gens: Vec<Permutation>) -> Result<PermGroup> {
        for g in &gens {
            if !self.contains(g)? {
                return Err(Error::NotInGroup);
            }
        }
        Ok(self.subgroup_unchecked(gens))
    }

    pub(crate) fn subgroup_unchecked(&self, gens: Vec<Permutation>) -> PermGroup {
        let mut g = PermGroup::new(self.degree, gens).expect("degrees checked by caller");
        g.base_hint = Some(self.chain().base());
        g
    }

    /// Declares the group order; the chain is then built randomly and
    /// certified by reaching this order.
    pub(crate) fn with_order_hint(mut self, order: BigUint) -> Self {
        self.order_hint = Some(order);
        self
    }

    pub(crate) fn from_chain(
        degree: usize,
        gens: Vec<Permutation>,
        chain: StabilizerChain,
    ) -> Self {
        let g = PermGroup::new(degree, gens).expect("degrees checked by caller");
        let _ = g.chain.set(chain);
        g
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.gens
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn chain(&self) -> &StabilizerChain {
        self.chain.get_or_init(|| self.build_chain())
    }

    fn build_chain(&self) -> StabilizerChain {
        if let Some(order) = &self.order_hint {
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(0x5eed);
            if let Ok(c) =
                StabilizerChain::with_known_order(self.degree, &self.gens, order, &mut rng)
            {
                return c;
            }
        }
        if let Some(base) = &self.base_hint {
            if let Ok(c) = StabilizerChain::with_known_base(self.degree, &self.gens, base) {
                return c;
            }
        }
        StabilizerChain::new(self.degree, &self.gens).expect("plain chain construction cannot fail")
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.iter().all(Permutation::is_identity)
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        self.chain().contains(p)
    }

    /// Orbit of `x` in discovery order.
    pub fn orbit(&self, x: usize) -> Result<Vec<usize>> {
        if x >= self.degree {
            return Err(Error::PointOutOfRange {
                point: x,
                degree: self.degree,
            });
        }
        Ok(orbit_of(self.degree, &self.gens, x))
    }

    pub fn orbits(&self) -> Partition {
        Partition::from_labels(&orbit_labels(self.degree, self.gens.iter()))
    }

    pub fn is_transitive(&self) -> bool {
        orbit_of(self.degree, &self.gens, 0).len() == self.degree
    }

    /// `h ≤ self`.
    pub fn is_subgroup(&self, h: &PermGroup) -> Result<bool> {
        check_degree(self.degree, h.degree)?;
        for g in &h.gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether conjugating `n`'s generators by this group's generators stays in `n`.
    pub fn is_normal(&self, n: &PermGroup) -> Result<bool> {
        check_degree(self.degree, n.degree)?;
        let chain = n.chain();
        for g in &self.gens {
            let g_inv = g.inverse();
            for x in &n.gens {
                if !chain.contains_conjugate(x, g, &g_inv) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Whether the group's generators commute pairwise.
    pub fn is_abelian(&self) -> bool {
        self.gens.iter().enumerate().all(|(i, a)| {
            self.gens[i + 1..]
                .iter()
                .all(|b| a.mul_unchecked(b) == b.mul_unchecked(a))
        })
    }

    /// Smallest normal subgroup containing `seeds`.
    pub fn normal_closure(&self, seeds: &[Permutation]) -> Result<PermGroup> {
        for s in seeds {
            if !self.contains(s)? {
                return Err(Error::NotInGroup);
            }
        }
        self.normal_closure_bounded(seeds, None)
    }

    /// Normal closure that stops early once its order reaches `stop_at`
    /// (the caller then only learns that the closure has at least that order).
    pub(crate) fn normal_closure_bounded(
        &self,
        seeds: &[Permutation],
        stop_at: Option<&BigUint>,
    ) -> Result<PermGroup> {
        let base = self.chain().base();
        let mut gens: Vec<Permutation> =
            seeds.iter().filter(|s| !s.is_identity()).cloned().collect();
        if gens.is_empty() {
            return Ok(self.subgroup_unchecked(Vec::new()));
        }
        let mut chain = StabilizerChain::with_known_base(self.degree, &gens, &base)?;
        let conjugators: Vec<(Permutation, Permutation)> = self
            .gens
            .iter()
            .filter(|g| !g.is_identity())
            .map(|g| (g.clone(), g.inverse()))
            .collect();
        let mut i = 0;
        'outer: while i < gens.len() {
            for (g, g_inv) in &conjugators {
                if !chain.contains_conjugate(&gens[i], g, g_inv) {
                    let c = g.conjugate_of(&gens[i]);
                    chain.add_generator(&c)?;
                    gens.push(c);
                    if let Some(limit) = stop_at {
                        if &chain.order() >= limit {
                            break 'outer;
                        }
                    }
                }
            }
            i += 1;
        }
        let mut out = PermGroup::from_chain(self.degree, gens, chain);
        out.base_hint = Some(base);
        Ok(out)
    }

    /// Product-replacement sample (fresh replacement table, 50 burn-in steps).
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        if self.is_trivial() {
            return Permutation::identity(self.degree);
        }
        ProductReplacement::new(self, rng).next(rng)
    }

    /// Exactly uniform sample from the stabilizer chain.
    pub fn uniform_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        self.chain().random_element(rng)
    }

    /// All elements; intended for small groups and test oracles.
    pub fn elements(&self) -> Vec<Permutation> {
        let mut out = Vec::new();
        self.chain().for_each_element(|g| {
            out.push(g.clone());
            true
        });
        out
    }

    /// The same group, relabelled along a bijection of the points.
    pub fn relabel(&self, relabel: &[Point]) -> PermGroup {
        let gens = self.gens.iter().map(|g| g.relabel(relabel)).collect();
        let mut out = PermGroup::new(self.degree, gens).expect("same degree");
        out.order_hint = self.chain.get().map(|c| c.order());
        out
    }

    /// Mutual containment.
    pub fn same_group(&self, other: &PermGroup) -> Result<bool> {
        Ok(self.order() == other.order() && self.is_subgroup(other)?)
    }
}

fn check_degree(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DegreeMismatch { left: a, right: b });
    }
    Ok(())
}

pub(crate) fn orbit_of(degree: usize, gens: &[Permutation], x: usize) -> Vec<usize> {
    let mut seen = vec![false; degree];
    seen[x] = true;
    let mut orbit = vec![x];
    let mut i = 0;
    while i < orbit.len() {
        let y = orbit[i];
        for g in gens {
            let z = g.image(y);
            if !seen[z] {
                seen[z] = true;
                orbit.push(z);
            }
        }
        i += 1;
    }
    orbit
}

pub(crate) fn orbit_of_refs(degree: usize, gens: &[&Permutation], x: usize) -> Vec<usize> {
    let mut seen = vec![false; degree];
    seen[x] = true;
    let mut orbit = vec![x];
    let mut i = 0;
    while i < orbit.len() {
        for g in gens {
            let z = g.image(orbit[i]);
            if !seen[z] {
                seen[z] = true;
                orbit.push(z);
            }
        }
        i += 1;
    }
    orbit
}

/// Orbit index of every point, orbits numbered by their minimal point.
pub(crate) fn orbit_labels<'a>(
    degree: usize,
    gens: impl Iterator<Item = &'a Permutation> + Clone,
) -> Vec<usize> {
    let gens: Vec<&Permutation> = gens.collect();
    let mut labels = vec![usize::MAX; degree];
    let mut next = 0;
    let mut stack = Vec::new();
    for start in 0..degree {
        if labels[start] != usize::MAX {
            continue;
        }
        labels[start] = next;
        stack.push(start);
        while let Some(y) = stack.pop() {
            for g in &gens {
                let z = g.image(y);
                if labels[z] == usize::MAX {
                    labels[z] = next;
                    stack.push(z);
                }
            }
        }
        next += 1;
    }
    labels
}

/// Product replacement with an accumulator ("rattle"), seeded by the caller's RNG.
pub struct ProductReplacement {
    slots: Vec<Permutation>,
    acc: Permutation,
}

const BURN_IN: usize = 50;

impl ProductReplacement {
    pub fn new<R: Rng + ?Sized>(group: &PermGroup, rng: &mut R) -> Self {
        let gens: Vec<Permutation> = group
            .gens
            .iter()
            .filter(|g| !g.is_identity())
            .cloned()
            .collect();
        if gens.is_empty() {
            return ProductReplacement {
                slots: Vec::new(),
                acc: Permutation::identity(group.degree),
            };
        }
        Self::from_generators(&gens, rng)
    }

    pub(crate) fn from_generators<R: Rng + ?Sized>(gens: &[Permutation], rng: &mut R) -> Self {
        let degree = gens[0].degree();
        let size = gens.len().max(10);
        let slots = (0..size).map(|i| gens[i % gens.len()].clone()).collect();
        let mut pr = ProductReplacement {
            slots,
            acc: Permutation::identity(degree),
        };
        for _ in 0..BURN_IN {
            pr.step(rng);
        }
        pr
    }

    fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let n = self.slots.len();
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let other = if rng.random_bool(0.5) {
            self.slots[j].clone()
        } else {
            self.slots[j].inverse()
        };
        self.slots[i] = if rng.random_bool(0.5) {
            self.slots[i].mul_unchecked(&other)
        } else {
            other.mul_unchecked(&self.slots[i])
        };
        self.acc = self.acc.mul_unchecked(&self.slots[i]);
    }

    pub fn next<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Permutation {
        if self.slots.is_empty() {
            return self.acc.clone();
        }
        self.step(rng);
        self.acc.clone()
    }
}

/// Order of `⟨gens⟩` on `degree` points.
pub fn group_order(degree: usize, gens: &[Permutation]) -> Result<BigUint> {
    if gens.is_empty() {
        return Ok(BigUint::one());
    }
    Ok(StabilizerChain::new(degree, gens)?.order())
}
