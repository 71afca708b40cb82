//! Permutation morphisms: a map of point sets together with a group
//! homomorphism such that `f(ω^g) = f(ω)^φ(g)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::hom::GroupHom;
use crate::partition::Partition;
use crate::perm::{Permutation, Point};

/// A map `{0..n} → {0..m}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SetMap {
    target_size: usize,
    images: Vec<usize>,
}

impl SetMap {
    pub fn new(target_size: usize, images: Vec<usize>) -> Result<Self> {
        if let Some(&x) = images.iter().find(|&&x| x >= target_size) {
            return Err(Error::PointOutOfRange {
                point: x,
                degree: target_size,
            });
        }
        Ok(SetMap {
            target_size,
            images,
        })
    }

    pub fn identity(n: usize) -> Self {
        SetMap {
            target_size: n,
            images: (0..n).collect(),
        }
    }

    pub fn constant(n: usize) -> Self {
        SetMap {
            target_size: 1,
            images: vec![0; n],
        }
    }

    pub fn from_permutation(p: &Permutation) -> Self {
        SetMap {
            target_size: p.degree(),
            images: p.images().iter().map(|&x| x as usize).collect(),
        }
    }

    pub fn source_size(&self) -> usize {
        self.images.len()
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn image(&self, x: usize) -> usize {
        self.images[x]
    }

    fn hit_counts(&self) -> Vec<usize> {
        let mut hits = vec![0; self.target_size];
        for &y in &self.images {
            hits[y] += 1;
        }
        hits
    }

    pub fn is_surjective(&self) -> bool {
        self.hit_counts().iter().all(|&c| c > 0)
    }

    pub fn is_injective(&self) -> bool {
        self.hit_counts().iter().all(|&c| c <= 1)
    }

    pub fn is_bijective(&self) -> bool {
        self.source_size() == self.target_size && self.is_injective()
    }

    /// The nonempty fibers, as a canonical partition of the source.
    pub fn fibers(&self) -> Partition {
        Partition::from_labels(&self.images)
    }

    /// `self` then `other`.
    pub fn then(&self, other: &SetMap) -> Result<SetMap> {
        if self.target_size != other.source_size() {
            return Err(Error::Mismatch(format!(
                "map into {} points followed by map from {} points",
                self.target_size,
                other.source_size()
            )));
        }
        Ok(SetMap {
            target_size: other.target_size,
            images: self.images.iter().map(|&y| other.images[y]).collect(),
        })
    }

    /// The bijection as a permutation.
    pub fn to_permutation(&self) -> Result<Permutation> {
        if !self.is_bijective() {
            return Err(Error::NotIsomorphism);
        }
        Ok(Permutation::from_images_unchecked(
            self.images.iter().map(|&y| y as Point).collect(),
        ))
    }

    /// A representative of every fiber, chosen by `pick`; `None` for empty fibers.
    fn representatives(&self, policy: FiberRep) -> Vec<Option<usize>> {
        let mut reps: Vec<Option<usize>> = vec![None; self.target_size];
        for (x, &y) in self.images.iter().enumerate() {
            reps[y] = match (reps[y], policy) {
                (None, _) => Some(x),
                (Some(r), FiberRep::Min) => Some(r.min(x)),
                (Some(r), FiberRep::Max) => Some(r.max(x)),
            };
        }
        reps
    }
}

/// Which point of a fiber stands for it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiberRep {
    Min,
    Max,
}

/// Whether every generator maps every block onto a block.
pub fn is_invariant(sigma: &Partition, group: &PermGroup) -> Result<bool> {
    if sigma.degree() != group.degree() {
        return Err(Error::DegreeMismatch {
            left: sigma.degree(),
            right: group.degree(),
        });
    }
    for g in group.generators() {
        for block in sigma.blocks() {
            let target = sigma.block_of(g.image(block[0]));
            if sigma.blocks()[target].len() != block.len()
                || block.iter().any(|&x| sigma.block_of(g.image(x)) != target)
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn is_compatible(f: &SetMap, group: &PermGroup) -> Result<bool> {
    if f.source_size() != group.degree() {
        return Err(Error::DegreeMismatch {
            left: f.source_size(),
            right: group.degree(),
        });
    }
    is_invariant(&f.fibers(), group)
}

/// The permutation induced on the fibers of `f` by `g`, checking that each
/// fiber goes into a single fiber.
fn induced_image(f: &SetMap, reps: &[Option<usize>], g: &Permutation) -> Result<Permutation> {
    let m = f.target_size();
    let mut images = vec![0 as Point; m];
    for (y, rep) in reps.iter().enumerate() {
        let rep = rep.ok_or(Error::NotSurjective)?;
        images[y] = f.image(g.image(rep)) as Point;
    }
    for x in 0..f.source_size() {
        if images[f.image(x)] as usize != f.image(g.image(x)) {
            return Err(Error::NotCompatible(format!(
                "fiber of point {} is not mapped into a single fiber",
                x + 1
            )));
        }
    }
    Permutation::from_images(images)
        .map_err(|_| Error::NotCompatible("fibers of different sizes are identified".into()))
}

#[derive(Clone, Debug)]
pub struct PermutationMorphism {
    map: SetMap,
    hom: GroupHom,
    target: PermGroup,
}

impl PermutationMorphism {
    /// Assembles a morphism and checks the commuting square on generators.
    pub fn new(map: SetMap, hom: GroupHom, target: PermGroup) -> Result<Self> {
        if map.source_size() != hom.source().degree() || map.target_size() != hom.target_degree() {
            return Err(Error::Mismatch(
                "domain map and homomorphism disagree on degrees".into(),
            ));
        }
        if target.degree() != hom.target_degree() {
            return Err(Error::DegreeMismatch {
                left: target.degree(),
                right: hom.target_degree(),
            });
        }
        let f = PermutationMorphism { map, hom, target };
        if !f.commutes() {
            return Err(Error::NotCompatible("commuting square fails".into()));
        }
        Ok(f)
    }

    pub fn identity(group: &PermGroup) -> Self {
        PermutationMorphism {
            map: SetMap::identity(group.degree()),
            hom: GroupHom::identity(group),
            target: group.clone(),
        }
    }

    pub fn map(&self) -> &SetMap {
        &self.map
    }

    pub fn hom(&self) -> &GroupHom {
        &self.hom
    }

    pub fn source(&self) -> &PermGroup {
        self.hom.source()
    }

    pub fn target(&self) -> &PermGroup {
        &self.target
    }

    /// Images of the source generators.
    pub fn generator_images(&self) -> &[Permutation] {
        self.hom.images()
    }

    /// `f(ω^g) = f(ω)^φ(g)` for all points and source generators.
    pub fn commutes(&self) -> bool {
        self.source()
            .generators()
            .iter()
            .zip(self.hom.images())
            .all(|(g, h)| {
                (0..self.map.source_size())
                    .all(|x| self.map.image(g.image(x)) == h.image(self.map.image(x)))
            })
    }

    /// `φ(g)`. For a surjective domain map this is read off the map directly.
    pub fn eval(&self, g: &Permutation) -> Result<Permutation> {
        if !self.source().contains(g)? {
            return Err(Error::NotInGroup);
        }
        if self.map.is_surjective() {
            let reps = self.map.representatives(FiberRep::Min);
            let images = reps
                .iter()
                .map(|r| self.map.image(g.image(r.expect("surjective"))) as Point)
                .collect();
            return Ok(Permutation::from_images_unchecked(images));
        }
        self.hom.eval(g)
    }

    pub fn is_mono(&self) -> bool {
        self.map.is_injective() && self.hom.is_injective()
    }

    pub fn is_epi(&self) -> bool {
        self.map.is_surjective() && self.hom.image_group().order() == self.target.order()
    }

    pub fn is_iso(&self) -> bool {
        self.is_mono() && self.is_epi()
    }
}

/// The unique morphism `(f, φ)` with `φ(G)` as target, for `f` surjective
/// and compatible with `G`.
pub fn induced_epimorphism(f: &SetMap, group: &PermGroup) -> Result<PermutationMorphism> {
    induced_epimorphism_with(f, group, FiberRep::Min)
}

pub fn induced_epimorphism_with(
    f: &SetMap,
    group: &PermGroup,
    policy: FiberRep,
) -> Result<PermutationMorphism> {
    if f.source_size() != group.degree() {
        return Err(Error::DegreeMismatch {
            left: f.source_size(),
            right: group.degree(),
        });
    }
    if !f.is_surjective() {
        return Err(Error::NotSurjective);
    }
    let reps = f.representatives(policy);
    let images = group
        .generators()
        .iter()
        .map(|g| induced_image(f, &reps, g))
        .collect::<Result<Vec<_>>>()?;
    let target = PermGroup::new(f.target_size(), images.clone())?;
    let hom = GroupHom::new(group.clone(), f.target_size(), images)?;
    Ok(PermutationMorphism {
        map: f.clone(),
        hom,
        target,
    })
}

fn same_generators(a: &PermGroup, b: &PermGroup) -> bool {
    a.degree() == b.degree() && a.generators() == b.generators()
}

/// `F` followed by `E`.
pub fn compose_morphisms(
    f: &PermutationMorphism,
    e: &PermutationMorphism,
) -> Result<PermutationMorphism> {
    if f.target.degree() != e.source().degree() || !f.target.same_group(e.source())? {
        return Err(Error::Mismatch(
            "target of the first morphism is not the source of the second".into(),
        ));
    }
    let map = f.map.then(&e.map)?;
    let images = f
        .hom
        .images()
        .iter()
        .map(|h| e.eval(h))
        .collect::<Result<Vec<_>>>()?;
    let hom = GroupHom::new(f.source().clone(), e.target.degree(), images)?;
    Ok(PermutationMorphism {
        map,
        hom,
        target: e.target.clone(),
    })
}

/// Component-wise action of `parts[i]` on coordinate `i` of
/// `Δ_1 × … × Δ_k` (mixed radix, last coordinate fastest).
pub fn product_permutation(parts: &[&Permutation]) -> Permutation {
    let radices: Vec<usize> = parts.iter().map(|p| p.degree()).collect();
    let n: usize = radices.iter().product();
    let mut images = Vec::with_capacity(n);
    let mut digits = vec![0usize; parts.len()];
    for _ in 0..n {
        let y = parts
            .iter()
            .zip(&digits)
            .zip(&radices)
            .fold(0, |acc, ((p, &d), &r)| acc * r + p.image(d));
        images.push(y as Point);
        // increment, last digit fastest
        for j in (0..digits.len()).rev() {
            digits[j] += 1;
            if digits[j] < radices[j] {
                break;
            }
            digits[j] = 0;
        }
    }
    Permutation::from_images_unchecked(images)
}

/// The product morphism `G → H_1 × … × H_k`.
pub fn product_morphism(fs: &[&PermutationMorphism]) -> Result<PermutationMorphism> {
    let first = fs
        .first()
        .ok_or_else(|| Error::Mismatch("empty list of morphisms".into()))?;
    if fs.len() == 1 {
        return Ok((*first).clone());
    }
    let source = first.source();
    if let Some(_bad) = fs.iter().find(|f| !same_generators(f.source(), source)) {
        return Err(Error::Mismatch("morphisms have different sources".into()));
    }
    let radices: Vec<usize> = fs.iter().map(|f| f.map.target_size()).collect();
    let size = radices
        .iter()
        .try_fold(1usize, |acc, &r| acc.checked_mul(r))
        .filter(|&s| s <= crate::wreath::DEFAULT_DEGREE_CAP)
        .ok_or(Error::DegreeCap {
            degree: radices.iter().map(|&r| r as u128).product(),
            cap: crate::wreath::DEFAULT_DEGREE_CAP,
        })?;
    let images_map = (0..source.degree())
        .map(|x| {
            fs.iter()
                .fold(0, |acc, f| acc * f.map.target_size() + f.map.image(x))
        })
        .collect();
    let map = SetMap::new(size, images_map)?;
    let images: Vec<Permutation> = (0..source.generators().len())
        .map(|i| {
            let parts: Vec<&Permutation> = fs.iter().map(|f| &f.hom.images()[i]).collect();
            product_permutation(&parts)
        })
        .collect();
    let target_gens: Vec<Permutation> = fs
        .iter()
        .enumerate()
        .flat_map(|(i, f)| {
            let radices = &radices;
            f.target.generators().iter().map(move |t| {
                let ids: Vec<Permutation> =
                    radices.iter().map(|&r| Permutation::identity(r)).collect();
                let parts: Vec<&Permutation> = (0..radices.len())
                    .map(|j| if j == i { t } else { &ids[j] })
                    .collect::<Vec<_>>();
                product_permutation(&parts)
            })
        })
        .collect();
    let target = PermGroup::new(size, target_gens)?;
    let hom = GroupHom::new(source.clone(), size, images)?;
    Ok(PermutationMorphism { map, hom, target })
}

/// The inverse of an isomorphism. The domain map is a bijection, so the
/// inverse homomorphism is conjugation by its inverse.
pub fn invert_iso(f: &PermutationMorphism) -> Result<PermutationMorphism> {
    if !f.is_iso() {
        return Err(Error::NotIsomorphism);
    }
    let inv = f.map.to_permutation()?.inverse();
    let relabel: Vec<Point> = inv.images().to_vec();
    let images = f
        .target
        .generators()
        .iter()
        .map(|h| h.relabel(&relabel))
        .collect();
    let map = SetMap::from_permutation(&inv);
    let hom = GroupHom::new(f.target.clone(), f.source().degree(), images)?;
    Ok(PermutationMorphism {
        map,
        hom,
        target: f.source().clone(),
    })
}

/// The isomorphism `G → G^c` induced by the relabelling `x ↦ c(x)`.
pub fn relabeling_morphism(group: &PermGroup, c: &Permutation) -> Result<PermutationMorphism> {
    if c.degree() != group.degree() {
        return Err(Error::DegreeMismatch {
            left: group.degree(),
            right: c.degree(),
        });
    }
    let target = group.relabel(c.images());
    let hom = GroupHom::new(group.clone(), c.degree(), target.generators().to_vec())?;
    Ok(PermutationMorphism {
        map: SetMap::from_permutation(c),
        hom,
        target,
    })
}
