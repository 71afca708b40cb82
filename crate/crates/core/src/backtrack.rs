//! Normalizer search by backtracking over a stabilizer chain, and an
//! enumeration oracle.

use num_bigint::BigUint;

use crate::chain::StabilizerChain;
use crate::error::{Error, Result};
use crate::group::{orbit_labels, PermGroup};
use crate::perm::Permutation;

/// Default bound on `|M|` for [`brute_force_normalizer`].
pub const ENUMERATION_CAP: u64 = 1_000_000;

/// `x⁻¹gx ∈ G` for every generator `g` of `G`.
pub fn is_normalizing(x: &Permutation, group: &PermGroup) -> Result<bool> {
    if x.degree() != group.degree() {
        return Err(Error::DegreeMismatch {
            left: group.degree(),
            right: x.degree(),
        });
    }
    let chain = group.chain();
    let x_inv = x.inverse();
    Ok(group
        .generators()
        .iter()
        .all(|g| chain.contains_conjugate(g, x, &x_inv)))
}

/// Per-point data that any normalizing element must preserve.
struct PointInvariants {
    orbit: Vec<usize>,
    /// (orbit length, sorted orbit lengths of the point stabilizer) per point.
    key: Vec<(usize, Vec<usize>)>,
}

impl PointInvariants {
    fn new(group: &PermGroup) -> Self {
        let n = group.degree();
        let orbit = orbit_labels(n, group.generators().iter());
        let mut orbit_len = vec![0; n];
        for &o in &orbit {
            orbit_len[o] += 1;
        }
        let mut per_orbit: Vec<Option<Vec<usize>>> = vec![None; n];
        let mut key = Vec::with_capacity(n);
        for p in 0..n {
            let o = orbit[p];
            if per_orbit[o].is_none() {
                per_orbit[o] = Some(suborbit_lengths(group, p));
            }
            key.push((orbit_len[o], per_orbit[o].clone().expect("just set")));
        }
        PointInvariants { orbit, key }
    }
}

fn suborbit_lengths(group: &PermGroup, p: usize) -> Vec<usize> {
    let n = group.degree();
    let chain = StabilizerChain::with_base_prefix(n, group.generators(), &[p])
        .expect("prefix point in range");
    let labels = orbit_labels(n, chain.level_generators(1).into_iter());
    let mut counts = vec![0; n];
    for l in labels {
        counts[l] += 1;
    }
    let mut lengths: Vec<usize> = counts.into_iter().filter(|&c| c > 0).collect();
    lengths.sort_unstable();
    lengths
}

struct Search<'a> {
    m: &'a StabilizerChain,
    group: &'a PermGroup,
    base: Vec<usize>,
    inv: PointInvariants,
    /// Chosen images of the base points so far.
    images: Vec<usize>,
    nodes: u64,
}

impl Search<'_> {
    /// The image of base point `j` may be `p` given the images chosen so far.
    fn admissible(&self, j: usize, p: usize) -> bool {
        let b = self.base[j];
        if self.inv.key[b] != self.inv.key[p] {
            return false;
        }
        let (ob, op) = (self.inv.orbit[b], self.inv.orbit[p]);
        self.images.iter().enumerate().all(|(i, &q)| {
            let same_before = self.inv.orbit[self.base[i]] == ob;
            let same_after = self.inv.orbit[q] == op;
            same_before == same_after
        })
    }

    /// Depth-first search for a normalizing element of the form
    /// `u_{k-1} ⋯ u_{j} · suffix`, given `suffix = u_{j-1} ⋯ u_l`.
    fn dfs(&mut self, j: usize, suffix: &Permutation) -> Result<Option<Permutation>> {
        self.nodes += 1;
        if j == self.base.len() {
            return Ok(is_normalizing(suffix, self.group)?.then(|| suffix.clone()));
        }
        let mut candidates: Vec<(usize, usize)> = self
            .m
            .fundamental_orbit(j)
            .iter()
            .map(|&d| (suffix.image(d as usize), d as usize))
            .collect();
        candidates.sort_unstable();
        for (p, d) in candidates {
            if !self.admissible(j, p) {
                continue;
            }
            let u = self.m.transversal_element(j, d).expect("orbit point");
            let next = u.mul_unchecked(suffix);
            self.images.push(p);
            let found = self.dfs(j + 1, &next)?;
            self.images.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
}

/// Statistics of one backtrack run.
#[derive(Clone, Debug, Default)]
pub struct SearchStats {
    pub nodes: u64,
    pub found: usize,
}

/// `N_M(G)` for `G ≤ M`.
pub fn normalizer_in_group(m: &PermGroup, group: &PermGroup) -> Result<PermGroup> {
    normalizer_with_stats(m, group).map(|(n, _)| n)
}

pub fn normalizer_with_stats(m: &PermGroup, group: &PermGroup) -> Result<(PermGroup, SearchStats)> {
    if m.degree() != group.degree() {
        return Err(Error::DegreeMismatch {
            left: m.degree(),
            right: group.degree(),
        });
    }
    if !m.is_subgroup(group)? {
        return Err(Error::NotInGroup);
    }
    let chain = m.chain();
    let base = chain.base();
    let mut gens: Vec<Permutation> = group
        .generators()
        .iter()
        .filter(|g| !g.is_identity())
        .cloned()
        .collect();
    let mut known = StabilizerChain::with_known_base(m.degree(), &gens, &base)?;
    let mut search = Search {
        m: chain,
        group,
        base: base.clone(),
        inv: PointInvariants::new(group),
        images: Vec::new(),
        nodes: 0,
    };
    let mut stats = SearchStats::default();
    for l in (0..base.len()).rev() {
        let beta = base[l];
        let mut targets: Vec<usize> = chain
            .fundamental_orbit(l)
            .iter()
            .map(|&x| x as usize)
            .collect();
        targets.sort_unstable();
        let mut failed: Vec<usize> = Vec::new();
        for gamma in targets {
            let level_gens = known.level_generators(l);
            let reached = crate::group::orbit_of_refs(m.degree(), &level_gens, beta);
            if reached.contains(&gamma) {
                continue;
            }
            // points in the known group's orbit of a failed point fail too
            if failed
                .iter()
                .any(|&f| crate::group::orbit_of_refs(m.degree(), &level_gens, f).contains(&gamma))
            {
                continue;
            }
            search.images = base[..l].to_vec();
            if !search.admissible(l, gamma) {
                failed.push(gamma);
                continue;
            }
            let u = chain
                .transversal_element(l, gamma)
                .expect("orbit point")
                .clone();
            search.images.push(gamma);
            let found = search.dfs(l + 1, &u)?;
            search.images.clear();
            match found {
                Some(x) => {
                    known.add_generator(&x)?;
                    gens.push(x);
                    stats.found += 1;
                }
                None => failed.push(gamma),
            }
        }
    }
    stats.nodes = search.nodes;
    let mut out = PermGroup::from_chain(m.degree(), gens, known);
    if let Some(name) = m.name() {
        out = out.with_name(format!("N_{name}"));
    }
    Ok((out, stats))
}

/// `N_M(G)` by enumerating `M`; fails if `|M|` exceeds `cap`.
pub fn brute_force_normalizer(m: &PermGroup, group: &PermGroup, cap: u64) -> Result<PermGroup> {
    if m.degree() != group.degree() {
        return Err(Error::DegreeMismatch {
            left: m.degree(),
            right: group.degree(),
        });
    }
    let order = m.order();
    if order > BigUint::from(cap) {
        return Err(Error::OrderCap {
            order: order.to_string(),
            cap,
        });
    }
    let base = m.chain().base();
    let mut known = StabilizerChain::with_known_base(m.degree(), &[], &base)?;
    let mut gens = Vec::new();
    let mut failure = None;
    m.chain().for_each_element(|x| {
        match is_normalizing(x, group) {
            Ok(true) => {
                if !known.contains_unchecked(x) {
                    if let Err(e) = known.add_generator(x) {
                        failure = Some(e);
                        return false;
                    }
                    gens.push(x.clone());
                }
            }
            Ok(false) => {}
            Err(e) => {
                failure = Some(e);
                return false;
            }
        }
        true
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(PermGroup::from_chain(m.degree(), gens, known))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wreath::{alt, embed_coordinate, embed_top, product_action_wreath, psl25_on_6, sym};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cyc(n: usize, text: &str) -> Permutation {
        Permutation::parse_cycles(n, text).unwrap()
    }

    fn order(g: &PermGroup) -> u64 {
        g.order().try_into().unwrap()
    }

    #[test]
    fn normalizing_elements() {
        let a5 = alt(5);
        for g in a5.elements().iter().take(10) {
            assert!(is_normalizing(g, &a5).unwrap());
        }
        assert!(is_normalizing(&cyc(5, "(1,2)"), &a5).unwrap());
        let first = PermGroup::new(
            25,
            alt(5)
                .generators()
                .iter()
                .map(|h| embed_coordinate(h, 2, 0))
                .collect(),
        )
        .unwrap();
        let swap = embed_top(&cyc(2, "(1,2)"), 5);
        assert!(!is_normalizing(&swap, &first).unwrap());
    }

    #[test]
    fn base_case_normalizers() {
        let n = normalizer_in_group(&sym(5), &alt(5)).unwrap();
        assert_eq!(order(&n), 120);
        let oracle = brute_force_normalizer(&sym(5), &alt(5), ENUMERATION_CAP).unwrap();
        assert!(n.same_group(&oracle).unwrap());

        let psl = psl25_on_6();
        let n = normalizer_in_group(&sym(6), &psl).unwrap();
        assert_eq!(order(&n), 120);
        let oracle = brute_force_normalizer(&sym(6), &psl, ENUMERATION_CAP).unwrap();
        assert!(n.same_group(&oracle).unwrap());
    }

    #[test]
    fn self_normalizer_and_trivial() {
        let m = product_action_wreath(&sym(3), &sym(2)).unwrap();
        let n = normalizer_in_group(&m, &m).unwrap();
        assert!(n.same_group(&m).unwrap());
        let t = PermGroup::trivial(4);
        assert_eq!(order(&brute_force_normalizer(&t, &t, 10).unwrap()), 1);
        assert_eq!(order(&normalizer_in_group(&t, &t).unwrap()), 1);
    }

    #[test]
    fn klein_in_s4() {
        let v = PermGroup::new(4, vec![cyc(4, "(1,2)(3,4)"), cyc(4, "(1,3)(2,4)")]).unwrap();
        assert_eq!(
            order(&brute_force_normalizer(&sym(4), &v, ENUMERATION_CAP).unwrap()),
            24
        );
        assert_eq!(order(&normalizer_in_group(&sym(4), &v).unwrap()), 24);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            normalizer_in_group(&alt(5), &sym(5)),
            Err(Error::NotInGroup)
        ));
        assert!(matches!(
            brute_force_normalizer(&sym(10), &alt(10), ENUMERATION_CAP),
            Err(Error::OrderCap { .. })
        ));
    }

    #[test]
    fn a5_wreath_oracle() {
        // the normalizer of A5 ≀ S2 inside S5 ≀ S2: a base element (a, b)
        // normalizes iff a and b have the same parity
        let m = product_action_wreath(&sym(5), &sym(2)).unwrap();
        let g = product_action_wreath(&alt(5), &sym(2)).unwrap();
        let oracle = brute_force_normalizer(&m, &g, ENUMERATION_CAP).unwrap();
        assert_eq!(order(&oracle), 14400);
        let n = normalizer_in_group(&m, &g).unwrap();
        assert!(n.same_group(&oracle).unwrap());
        let both_odd =
            &embed_coordinate(&cyc(5, "(1,2)"), 2, 0) * &embed_coordinate(&cyc(5, "(1,2)"), 2, 1);
        assert!(n.contains(&both_odd).unwrap());
        assert!(!n
            .contains(&embed_coordinate(&cyc(5, "(1,2)"), 2, 0))
            .unwrap());
    }

    fn random_subgroup(ambient: &PermGroup, k: usize, rng: &mut ChaCha8Rng) -> PermGroup {
        let gens = (0..k)
            .map(|_| {
                let x = ambient.uniform_element(rng);
                let e: u32 = rng.random_range(1..4);
                x.pow(&BigUint::from(e))
            })
            .collect();
        PermGroup::new(ambient.degree(), gens).unwrap()
    }

    #[test]
    fn agrees_with_enumeration_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 4..=6 {
            for _ in 0..6 {
                let m = random_subgroup(&sym(n), 2, &mut rng);
                let k = rng.random_range(1..3);
                let g = random_subgroup(&m, k, &mut rng);
                let fast = normalizer_in_group(&m, &g).unwrap();
                let slow = brute_force_normalizer(&m, &g, ENUMERATION_CAP).unwrap();
                assert!(fast.same_group(&slow).unwrap());
                assert!(fast.is_subgroup(&g).unwrap());
                assert!(m.is_subgroup(&fast).unwrap());
                assert!(fast
                    .generators()
                    .iter()
                    .all(|x| is_normalizing(x, &g).unwrap()));
                let (go, no, mo) = (g.order(), fast.order(), m.order());
                assert!((&no % &go).bits() == 0 && (&mo % &no).bits() == 0);
                let again = normalizer_in_group(&m, &fast).unwrap();
                assert!(again.is_subgroup(&fast).unwrap());
            }
        }
    }
}
