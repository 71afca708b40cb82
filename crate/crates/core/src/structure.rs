//! Primitivity, socles and product decompositions.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::Rng;

use crate::error::{Error, Result};
use crate::group::{orbit_labels, PermGroup};
use crate::morphism::{induced_epimorphism, relabeling_morphism, PermutationMorphism, SetMap};
use crate::partition::Partition;
use crate::perm::{Permutation, Point};

/// Random samples allowed while searching for the socle or a factor.
pub const RETRY_BUDGET: usize = 100;
/// Consecutive samples that must agree before a candidate is accepted.
const CONFIRMATIONS: usize = 6;

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> Option<(usize, usize)> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[drop] = keep;
        Some((keep, drop))
    }
}

/// The finest `G`-invariant partition in which `a` and `b` share a block.
pub fn minimal_block(group: &PermGroup, a: usize, b: usize) -> Result<Partition> {
    let n = group.degree();
    for x in [a, b] {
        if x >= n {
            return Err(Error::PointOutOfRange {
                point: x,
                degree: n,
            });
        }
    }
    let mut uf = UnionFind::new(n);
    let mut queue = VecDeque::new();
    if let Some(pair) = uf.union(a, b) {
        queue.push_back(pair);
    }
    while let Some((x, y)) = queue.pop_front() {
        for g in group.generators() {
            if let Some(pair) = uf.union(g.image(x), g.image(y)) {
                queue.push_back(pair);
            }
        }
    }
    let labels: Vec<usize> = (0..n).map(|x| uf.find(x)).collect();
    Ok(Partition::from_labels(&labels))
}

/// A nontrivial block system, if the (transitive) group has one.
pub fn nontrivial_blocks(group: &PermGroup) -> Option<Partition> {
    let n = group.degree();
    if n <= 2 {
        return None;
    }
    let chain = group.chain();
    let alpha = chain.base().first().copied().unwrap_or(0);
    let stabilizer = chain.level_generators(1);
    let labels = orbit_labels(n, stabilizer.into_iter());
    let mut seen = vec![false; n];
    for b in 0..n {
        if b == alpha || seen[labels[b]] {
            continue;
        }
        seen[labels[b]] = true;
        let blocks = minimal_block(group, alpha, b).expect("points in range");
        if blocks.num_blocks() > 1 {
            return Some(blocks);
        }
    }
    None
}

pub fn is_primitive(group: &PermGroup) -> bool {
    group.is_transitive() && nontrivial_blocks(group).is_none()
}

/// Prime divisors of `n`.
fn prime_divisors(n: &BigUint) -> Vec<BigUint> {
    let mut primes = Vec::new();
    let mut rest = n.clone();
    let mut p = BigUint::from(2u32);
    while &p * &p <= rest {
        if (&rest % &p).bits() == 0 {
            primes.push(p.clone());
            while (&rest % &p).bits() == 0 {
                rest /= &p;
            }
        }
        p += 1u32;
    }
    if rest > BigUint::one() {
        primes.push(rest);
    }
    primes
}

/// An element of prime order in `⟨x⟩` (random prime), or `None` for the identity.
fn prime_order_part<R: Rng + ?Sized>(x: &Permutation, rng: &mut R) -> Option<Permutation> {
    let order = x.order();
    if order.is_one() {
        return None;
    }
    let primes = prime_divisors(&order);
    let p = &primes[rng.random_range(0..primes.len())];
    Some(x.pow(&(&order / p)))
}

/// Repeatedly replaces `candidate` by the normal closure in `ambient` of a
/// prime-order element sampled from the candidate, until it stops shrinking.
fn shrink_normal_closure<R: Rng + ?Sized>(
    ambient: &PermGroup,
    start: PermGroup,
    what: &str,
    rng: &mut R,
) -> Result<PermGroup> {
    let mut candidate = start;
    let mut order = candidate.order();
    let mut agreed = 0;
    for _ in 0..RETRY_BUDGET {
        if agreed >= CONFIRMATIONS {
            return Ok(candidate);
        }
        let x = candidate.uniform_element(rng);
        let Some(y) = prime_order_part(&x, rng) else {
            continue;
        };
        let closure = ambient.normal_closure_bounded(&[y], Some(&order))?;
        let closure_order = closure.order();
        if closure_order < order {
            candidate = closure;
            order = closure_order;
            agreed = 0;
        } else {
            agreed += 1;
        }
    }
    if agreed >= CONFIRMATIONS {
        return Ok(candidate);
    }
    Err(Error::RetryBudget(what.into()))
}

/// The socle of a primitive group together with its simple factors.
#[derive(Clone, Debug)]
pub struct SocleData {
    pub socle: PermGroup,
    pub factors: Vec<PermGroup>,
}

impl SocleData {
    pub fn ell(&self) -> usize {
        self.factors.len()
    }

    pub fn factor_order(&self) -> BigUint {
        self.factors[0].order()
    }
}

/// Socle of a primitive group with non-abelian socle, found as the smallest
/// normal closure of prime-order elements.
pub fn socle<R: Rng + ?Sized>(group: &PermGroup, rng: &mut R) -> Result<SocleData> {
    if group.is_trivial() {
        return Err(Error::NotPa("trivial group".into()));
    }
    let mut candidate = shrink_normal_closure(group, group.clone(), "socle search", rng)?;
    for _ in 0..RETRY_BUDGET {
        match split_factors(&candidate, group, rng)? {
            Split::Done(factors) => {
                return Ok(SocleData {
                    socle: candidate,
                    factors,
                })
            }
            Split::Smaller(product) => candidate = product,
            Split::Retry => {}
        }
    }
    Err(Error::RetryBudget("socle factors".into()))
}

/// Factors of a given socle (for user-supplied socle generators).
pub fn simple_factors<R: Rng + ?Sized>(
    socle: &PermGroup,
    group: &PermGroup,
    rng: &mut R,
) -> Result<Vec<PermGroup>> {
    for _ in 0..RETRY_BUDGET {
        match split_factors(socle, group, rng)? {
            Split::Done(factors) => return Ok(factors),
            Split::Smaller(_) => {
                return Err(Error::Inconsistent(
                    "the given subgroup is not a minimal normal subgroup".into(),
                ))
            }
            Split::Retry => {}
        }
    }
    Err(Error::RetryBudget("socle factors".into()))
}

enum Split {
    Done(Vec<PermGroup>),
    /// The conjugates of a factor generate a proper subgroup.
    Smaller(PermGroup),
    Retry,
}

fn split_factors<R: Rng + ?Sized>(
    socle: &PermGroup,
    group: &PermGroup,
    rng: &mut R,
) -> Result<Split> {
    let c = shrink_normal_closure(socle, socle.clone(), "simple factor search", rng)?;
    // a few more samples must reproduce c
    let c_order = c.order();
    for _ in 0..4 {
        let x = c.uniform_element(rng);
        if let Some(y) = prime_order_part(&x, rng) {
            if socle.normal_closure_bounded(&[y], Some(&c_order))?.order() < c_order {
                return Ok(Split::Retry);
            }
        }
    }
    if c.is_abelian() {
        return Err(Error::NotPa("socle is abelian".into()));
    }
    let factors = conjugate_factors(socle, group, c);
    let k = factors.len() as u32;
    let socle_order = socle.order();
    if c_order.pow(k) == socle_order {
        let mut factors = factors;
        factors.sort_by_key(min_moved_point);
        return Ok(Split::Done(factors));
    }
    let gens: Vec<Permutation> = factors
        .iter()
        .flat_map(|f| f.generators().iter().cloned())
        .collect();
    let product = socle.subgroup_unchecked(gens);
    if c_order.pow(k) == product.order() && product.order() < socle_order {
        return Ok(Split::Smaller(product));
    }
    Ok(Split::Retry)
}

fn min_moved_point(f: &PermGroup) -> usize {
    f.generators()
        .iter()
        .filter_map(|g| g.smallest_moved_point())
        .min()
        .unwrap_or(usize::MAX)
}

fn first_nontrivial(f: &PermGroup) -> &Permutation {
    f.generators()
        .iter()
        .find(|g| !g.is_identity())
        .expect("factors are nontrivial")
}

/// Index of the factor containing `x` (factors intersect trivially).
fn factor_containing(factors: &[PermGroup], x: &Permutation) -> Option<usize> {
    factors.iter().position(|f| f.chain().contains_unchecked(x))
}

/// Closes `{c}` under conjugation by the generators of `group`.
fn conjugate_factors(socle: &PermGroup, group: &PermGroup, c: PermGroup) -> Vec<PermGroup> {
    let mut factors = vec![c];
    let mut i = 0;
    while i < factors.len() {
        for g in group.generators() {
            let probe = g.conjugate_of(first_nontrivial(&factors[i]));
            if factor_containing(&factors, &probe).is_none() {
                let gens = factors[i]
                    .generators()
                    .iter()
                    .map(|x| g.conjugate_of(x))
                    .collect();
                factors.push(socle.subgroup_unchecked(gens));
            }
        }
        i += 1;
    }
    factors
}

/// Action of `group`'s generators on the factors: `table[g][i] = j` when
/// `factors[i]^g = factors[j]`.
pub fn factor_action(group: &PermGroup, factors: &[PermGroup]) -> Result<Vec<Vec<usize>>> {
    group
        .generators()
        .iter()
        .map(|g| {
            factors
                .iter()
                .map(|f| {
                    factor_containing(factors, &g.conjugate_of(first_nontrivial(f))).ok_or_else(
                        || {
                            Error::Inconsistent(
                                "factor list is not closed under conjugation".into(),
                            )
                        },
                    )
                })
                .collect()
        })
        .collect()
}

/// The map whose fibers are the orbits of all factors except `i`.
pub fn projection_map(socle: &SocleData, i: usize) -> Result<SetMap> {
    let n = socle.socle.degree();
    let others = socle
        .factors
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .flat_map(|(_, f)| f.generators().iter());
    let orbits = Partition::from_labels(&orbit_labels(n, others));
    let size = orbits.blocks()[0].len();
    if orbits.blocks().iter().any(|b| b.len() != size) {
        return Err(Error::Inconsistent("orbits of unequal size".into()));
    }
    if socle.ell() > 1 && orbits.num_blocks() == 1 {
        return Err(Error::Inconsistent(
            "orbits do not form a proper partition".into(),
        ));
    }
    SetMap::new(
        orbits.num_blocks(),
        (0..n).map(|x| orbits.block_of(x)).collect(),
    )
}

/// The data relating a PA group `G` on `Ω` to `Ĝ ≤ N(T) ≀ S_ℓ` on `Δ^ℓ`.
#[derive(Clone, Debug)]
pub struct ProductDecomposition {
    pub group: PermGroup,
    pub socle: SocleData,
    /// The common image of the factors, on `m` points.
    pub t: PermGroup,
    pub ell: usize,
    pub m: usize,
    /// Homogenized projections `Ω → Δ`.
    pub projections: Vec<SetMap>,
    /// `c : Ω → Δ^ℓ`, a bijection.
    pub relabeling: Permutation,
    /// `g_i ∈ G` with `factor_0^{g_i} = factor_i`.
    pub conjugators: Vec<Permutation>,
    /// `G` relabelled along `c`.
    pub g_hat: PermGroup,
}

impl ProductDecomposition {
    /// The socle onto `T` through projection `i`.
    pub fn projection_morphism(&self, i: usize) -> Result<PermutationMorphism> {
        induced_epimorphism(&self.projections[i], &self.socle.socle)
    }

    /// `G → Ĝ`.
    pub fn relabeling_morphism(&self) -> Result<PermutationMorphism> {
        relabeling_morphism(&self.group, &self.relabeling)
    }

    /// Moves a group on `Δ^ℓ` back to `Ω`.
    pub fn pull_back(&self, g: &PermGroup) -> PermGroup {
        let inv = self.relabeling.inverse();
        g.relabel(inv.images())
    }

    /// Moves a group on `Ω` to `Δ^ℓ`.
    pub fn push_forward(&self, g: &PermGroup) -> PermGroup {
        g.relabel(self.relabeling.images())
    }
}

/// Conjugators from factor 0 to every factor, by breadth-first search in the
/// action on factors.
fn factor_conjugators(group: &PermGroup, factors: &[PermGroup]) -> Result<Vec<Permutation>> {
    let table = factor_action(group, factors)?;
    let mut conj: Vec<Option<Permutation>> = vec![None; factors.len()];
    conj[0] = Some(Permutation::identity(group.degree()));
    let mut queue = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        for (g, row) in group.generators().iter().zip(&table) {
            let j = row[i];
            if conj[j].is_none() {
                conj[j] = Some(conj[i].as_ref().expect("visited") * g);
                queue.push_back(j);
            }
        }
    }
    conj.into_iter()
        .map(|c| {
            c.ok_or_else(|| Error::NotPa("group is not transitive on the socle factors".into()))
        })
        .collect()
}

/// The homogenized product decomposition of `G` with the given socle.
pub fn decompose(group: &PermGroup, socle: SocleData) -> Result<ProductDecomposition> {
    let n = group.degree();
    let ell = socle.ell();
    let raw = (0..ell)
        .map(|i| projection_map(&socle, i))
        .collect::<Result<Vec<_>>>()?;
    let m = raw[0].target_size();
    if raw.iter().any(|p| p.target_size() != m) {
        return Err(Error::NotPa("projections have different sizes".into()));
    }
    let conjugators = factor_conjugators(group, &socle.factors)?;
    let first_fiber_min: Vec<usize> = {
        let mut mins = vec![usize::MAX; m];
        for x in (0..n).rev() {
            mins[raw[0].image(x)] = x;
        }
        mins
    };
    let mut projections = Vec::with_capacity(ell);
    for (p, g) in raw.iter().zip(&conjugators) {
        // beta(δ) = p_i(ω^{g_i}) for ω the least point over δ
        let beta: Vec<usize> = first_fiber_min
            .iter()
            .map(|&w| p.image(g.image(w)))
            .collect();
        let mut beta_inv = vec![usize::MAX; m];
        for (d, &b) in beta.iter().enumerate() {
            if beta_inv[b] != usize::MAX {
                return Err(Error::Inconsistent(
                    "conjugator does not match projections".into(),
                ));
            }
            beta_inv[b] = d;
        }
        projections.push(SetMap::new(
            m,
            p.images().iter().map(|&y| beta_inv[y]).collect(),
        )?);
    }
    let total = (m as u128).checked_pow(ell as u32).unwrap_or(u128::MAX);
    if total != n as u128 {
        return Err(Error::NotPa(format!("degree {n} is not {m}^{ell}")));
    }
    let mut images = vec![0 as Point; n];
    let mut used = vec![false; n];
    for (x, slot) in images.iter_mut().enumerate() {
        let y = projections.iter().fold(0, |acc, p| acc * m + p.image(x));
        if used[y] {
            return Err(Error::NotPa(
                "projections do not identify the points with tuples".into(),
            ));
        }
        used[y] = true;
        *slot = y as Point;
    }
    let relabeling = Permutation::from_images_unchecked(images);
    // T: the first factor seen through the first projection
    let reps: Vec<usize> = first_fiber_min;
    let t_gens: Vec<Permutation> = socle.factors[0]
        .generators()
        .iter()
        .map(|f| {
            Permutation::from_images_unchecked(
                reps.iter()
                    .map(|&w| projections[0].image(f.image(w)) as Point)
                    .collect(),
            )
        })
        .filter(|t| !t.is_identity())
        .collect();
    let t = PermGroup::new(m, t_gens)?.with_order_hint(socle.factor_order());
    let mut g_hat = group.relabel(relabeling.images());
    g_hat = g_hat.with_order_hint(group.order());
    Ok(ProductDecomposition {
        group: group.clone(),
        socle,
        t,
        ell,
        m,
        projections,
        relabeling,
        conjugators,
        g_hat,
    })
}

/// Checks the PA criteria and returns the product decomposition.
pub fn classify_pa<R: Rng + ?Sized>(
    group: &PermGroup,
    rng: &mut R,
) -> Result<ProductDecomposition> {
    check_primitive(group)?;
    let socle_data = socle(group, rng)?;
    classify_with_socle(group, socle_data)
}

/// Like [`classify_pa`], with the socle given by generators.
pub fn classify_pa_with_socle<R: Rng + ?Sized>(
    group: &PermGroup,
    socle_gens: Vec<Permutation>,
    rng: &mut R,
) -> Result<ProductDecomposition> {
    check_primitive(group)?;
    let socle = group.subgroup(socle_gens)?;
    if !group.is_normal(&socle)? {
        return Err(Error::NotNormal);
    }
    let factors = simple_factors(&socle, group, rng)?;
    classify_with_socle(group, SocleData { socle, factors })
}

pub(crate) fn check_primitive(group: &PermGroup) -> Result<()> {
    if !group.is_transitive() {
        return Err(Error::NotPa("not transitive".into()));
    }
    if !is_primitive(group) {
        return Err(Error::NotPa("not primitive".into()));
    }
    Ok(())
}

pub(crate) fn classify_with_socle(
    group: &PermGroup,
    socle: SocleData,
) -> Result<ProductDecomposition> {
    let n = group.degree();
    if socle.socle.order() == BigUint::from(n) {
        let chain = socle.socle.chain();
        if chain
            .orbit_lengths()
            .first()
            .copied()
            .unwrap_or(1)
            .to_u128()
            == socle.socle.order().to_u128()
        {
            return Err(Error::NotPa("socle is regular".into()));
        }
    }
    if socle.ell() < 2 {
        return Err(Error::NotPa(format!("ell = {}", socle.ell())));
    }
    decompose(group, socle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wreath::{
        alt, cyclic, embed_coordinate, imprimitive_wreath, product_action_wreath, sym,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn a5_wr_s2() -> PermGroup {
        product_action_wreath(&alt(5), &sym(2)).unwrap()
    }

    fn random_conjugate(g: &PermGroup, rng: &mut ChaCha8Rng) -> (PermGroup, Permutation) {
        let c = sym(g.degree()).uniform_element(rng);
        (g.relabel(c.images()), c)
    }

    #[test]
    fn primitivity() {
        assert!(is_primitive(&a5_wr_s2()));
        assert!(!is_primitive(&imprimitive_wreath(&alt(5), &sym(2))));
        let blocks = nontrivial_blocks(&imprimitive_wreath(&alt(5), &sym(2))).unwrap();
        assert!(blocks.blocks().iter().all(|b| b.len() == 5));
        for n in 2..8 {
            assert!(is_primitive(&sym(n)));
        }
        assert!(!is_primitive(&cyclic(6)));
        assert!(is_primitive(&cyclic(7)));
        // A5 x A5 without the swap preserves rows and columns
        let base = product_action_wreath(&alt(5), &PermGroup::trivial(2)).unwrap();
        assert!(!is_primitive(&base));
    }

    #[test]
    fn minimal_blocks_of_intransitive_union() {
        let g =
            PermGroup::new(4, vec![Permutation::parse_cycles(4, "(1,2)(3,4)").unwrap()]).unwrap();
        let p = minimal_block(&g, 0, 2).unwrap();
        assert_eq!(p.blocks(), &[vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn socle_of_a5_wreath_s2() {
        let g = a5_wr_s2();
        let s = socle(&g, &mut rng(1)).unwrap();
        assert_eq!(s.socle.order(), BigUint::from(3600u32));
        assert_eq!(s.ell(), 2);
        assert!(g.is_normal(&s.socle).unwrap());
        for f in &s.factors {
            assert_eq!(f.order(), BigUint::from(60u32));
            assert!(s.socle.is_normal(f).unwrap());
        }
        // factors commute elementwise
        for a in s.factors[0].generators() {
            for b in s.factors[1].generators() {
                assert_eq!(a * b, b * a);
            }
        }
    }

    #[test]
    fn socle_of_s5_has_one_factor() {
        let s = socle(&sym(5), &mut rng(2)).unwrap();
        assert_eq!(s.socle.order(), BigUint::from(60u32));
        assert_eq!(s.ell(), 1);
        let err = classify_pa(&sym(5), &mut rng(2)).unwrap_err();
        assert!(
            matches!(err, Error::NotPa(ref r) if r == "ell = 1"),
            "{err}"
        );
    }

    #[test]
    fn socle_of_cyclic_top() {
        let g = product_action_wreath(&alt(5), &cyclic(3)).unwrap();
        let s = socle(&g, &mut rng(3)).unwrap();
        assert_eq!(s.socle.order(), BigUint::from(60u32).pow(3));
        assert_eq!(s.ell(), 3);
    }

    #[test]
    fn socle_minimality_audit() {
        let g = a5_wr_s2();
        let s = socle(&g, &mut rng(4)).unwrap();
        let order = s.socle.order();
        let mut r = rng(5);
        for _ in 0..200 {
            let x = g.uniform_element(&mut r);
            if x.is_identity() {
                continue;
            }
            let closure = g.normal_closure(&[x]).unwrap();
            assert!(closure.order() >= order);
            assert!(closure.is_subgroup(&s.socle).unwrap());
        }
    }

    #[test]
    fn abelian_socle_is_rejected() {
        // AGL(1,5) on 5 points
        let g = PermGroup::new(
            5,
            vec![
                Permutation::parse_cycles(5, "(1,2,3,4,5)").unwrap(),
                Permutation::parse_cycles(5, "(2,3,5,4)").unwrap(),
            ],
        )
        .unwrap();
        let err = classify_pa(&g, &mut rng(6)).unwrap_err();
        assert!(
            matches!(err, Error::NotPa(ref r) if r.contains("abelian")),
            "{err}"
        );
    }

    #[test]
    fn projections_are_rows_and_columns() {
        let g = a5_wr_s2();
        let s = socle(&g, &mut rng(7)).unwrap();
        let p0 = projection_map(&s, 0).unwrap();
        let p1 = projection_map(&s, 1).unwrap();
        // factors sorted by least moved point; the first one moves point 0 along
        // coordinate 0
        for x in 0..25 {
            assert_eq!(p0.image(x), x / 5);
            assert_eq!(p1.image(x), x % 5);
        }
    }

    #[test]
    fn ell_one_projection_is_injective() {
        let s = socle(&sym(6), &mut rng(8)).unwrap();
        let p = projection_map(&s, 0).unwrap();
        assert!(p.is_bijective());
        let d = decompose(&sym(6), s).unwrap();
        assert!(d.relabeling.is_identity());
        assert_eq!(d.t.order(), BigUint::from(360u32));
    }

    fn assert_componentwise(d: &ProductDecomposition) {
        let c = &d.relabeling;
        for (i, f) in d.socle.factors.iter().enumerate() {
            for g in f.generators() {
                let h = g.relabel(c.images());
                for x in 0..h.degree() {
                    let a = crate::wreath::digits(x, d.m, d.ell);
                    let b = crate::wreath::digits(h.image(x), d.m, d.ell);
                    for j in 0..d.ell {
                        if j != i {
                            assert_eq!(a[j], b[j]);
                        }
                    }
                }
                // and the induced action on coordinate i lies in T
                let on_coordinate = Permutation::from_images(
                    (0..d.m)
                        .map(|x| {
                            crate::wreath::digits(
                                h.image(x * d.m.pow((d.ell - 1 - i) as u32)),
                                d.m,
                                d.ell,
                            )[i] as Point
                        })
                        .collect(),
                )
                .unwrap();
                assert!(d.t.contains(&on_coordinate).unwrap());
            }
        }
    }

    #[test]
    fn decomposition_of_conjugated_wreaths() {
        let mut r = rng(9);
        for (base, top) in [
            (alt(5), sym(2)),
            (alt(5), sym(3)),
            (crate::wreath::psl25_on_6(), sym(2)),
        ] {
            let g = product_action_wreath(&base, &top).unwrap();
            let (h, _) = random_conjugate(&g, &mut r);
            let d = classify_pa(&h, &mut r).unwrap();
            assert_eq!(d.ell, top.degree());
            assert_eq!(d.m, base.degree());
            assert_eq!(d.t.order(), BigUint::from(60u32));
            assert_componentwise(&d);
            assert!(d.relabeling_morphism().unwrap().is_iso());
            let prod = crate::morphism::product_morphism(
                &(0..d.ell)
                    .map(|i| d.projection_morphism(i).unwrap())
                    .collect::<Vec<_>>()
                    .iter()
                    .collect::<Vec<_>>(),
            )
            .unwrap();
            assert!(prod.map().is_bijective());
            assert!(prod.commutes());
            assert_eq!(d.socle.socle.order(), d.t.order().pow(d.ell as u32));
        }
    }

    #[test]
    fn swap_is_the_conjugator() {
        let g = a5_wr_s2();
        let d = classify_pa(&g, &mut rng(10)).unwrap();
        let swap = crate::wreath::embed_top(&Permutation::parse_cycles(2, "(1,2)").unwrap(), 5);
        // conjugator maps factor 0 onto factor 1, as the swap does
        let f0 = &d.socle.factors[0];
        let probe = d.conjugators[1].conjugate_of(&f0.generators()[0]);
        assert!(d.socle.factors[1].contains(&probe).unwrap());
        let probe = swap.conjugate_of(&f0.generators()[0]);
        assert!(d.socle.factors[1].contains(&probe).unwrap());
        assert!(d.conjugators[0].is_identity());
        // the unconjugated wreath is already in product layout
        assert!(d.g_hat.same_group(&g).unwrap());
    }

    #[test]
    fn user_supplied_socle() {
        let g = a5_wr_s2();
        let gens = (0..2)
            .flat_map(|j| {
                alt(5)
                    .generators()
                    .iter()
                    .map(move |h| embed_coordinate(h, 2, j))
                    .collect::<Vec<_>>()
            })
            .collect();
        let d = classify_pa_with_socle(&g, gens, &mut rng(11)).unwrap();
        assert_eq!(d.ell, 2);
        assert!(classify_pa_with_socle(&g, vec![Permutation::identity(24)], &mut rng(11)).is_err());
    }

    #[test]
    fn imprimitive_and_intransitive_rejections() {
        let w = imprimitive_wreath(&alt(5), &sym(2));
        assert!(
            matches!(classify_pa(&w, &mut rng(12)), Err(Error::NotPa(r)) if r == "not primitive")
        );
        let a = PermGroup::new(6, vec![Permutation::parse_cycles(6, "(1,2,3)").unwrap()]).unwrap();
        assert!(
            matches!(classify_pa(&a, &mut rng(12)), Err(Error::NotPa(r)) if r == "not transitive")
        );
        let trivial_top = product_action_wreath(&alt(5), &PermGroup::trivial(2)).unwrap();
        assert!(matches!(
            classify_pa(&trivial_top, &mut rng(12)),
            Err(Error::NotPa(_))
        ));
    }

    #[test]
    fn classification_is_conjugation_invariant() {
        let mut r = rng(13);
        for g in [a5_wr_s2(), sym(5), imprimitive_wreath(&alt(5), &sym(2))] {
            let base = classify_pa(&g, &mut r)
                .ok()
                .map(|d| (d.ell, d.m, d.t.order()));
            for _ in 0..3 {
                let (h, _) = random_conjugate(&g, &mut r);
                let conj = classify_pa(&h, &mut r)
                    .ok()
                    .map(|d| (d.ell, d.m, d.t.order()));
                assert_eq!(base, conj);
            }
        }
    }
}
