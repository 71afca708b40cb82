//! Group homomorphisms given by generator images.
//!
//! Instead of recording words, a homomorphism keeps a stabilizer chain of
//! the graph `{g ⊔ φ(g)}`: the source acts on the first points and the image
//! rides along as companion points. Sifting `g ⊔ 1` leaves `1 ⊔ φ(g)⁻¹`.
//! Lifting uses the same trick with the roles swapped.

use std::sync::OnceLock;

use crate::chain::{Companion, StabilizerChain};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

pub struct GroupHom {
    source: PermGroup,
    target_degree: usize,
    images: Vec<Permutation>,
    eval_chain: OnceLock<StabilizerChain>,
    lift_chain: OnceLock<StabilizerChain>,
}

impl Clone for GroupHom {
    fn clone(&self) -> Self {
        GroupHom {
            source: self.source.clone(),
            target_degree: self.target_degree,
            images: self.images.clone(),
            eval_chain: self.eval_chain.clone(),
            lift_chain: self.lift_chain.clone(),
        }
    }
}

impl std::fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupHom")
            .field("source", &self.source)
            .field("target_degree", &self.target_degree)
            .finish()
    }
}

impl GroupHom {
    /// Checks shapes only; well-definedness is checked by [`GroupHom::verify`]
    /// or on first evaluation.
    pub fn new(source: PermGroup, target_degree: usize, images: Vec<Permutation>) -> Result<Self> {
        if images.len() != source.generators().len() {
            return Err(Error::Mismatch(format!(
                "{} generators but {} images",
                source.generators().len(),
                images.len()
            )));
        }
        if let Some(p) = images.iter().find(|p| p.degree() != target_degree) {
            return Err(Error::DegreeMismatch {
                left: target_degree,
                right: p.degree(),
            });
        }
        Ok(GroupHom {
            source,
            target_degree,
            images,
            eval_chain: OnceLock::new(),
            lift_chain: OnceLock::new(),
        })
    }

    /// A homomorphism whose images are checked to define one.
    pub fn checked(
        source: PermGroup,
        target_degree: usize,
        images: Vec<Permutation>,
    ) -> Result<Self> {
        let hom = Self::new(source, target_degree, images)?;
        hom.verify()?;
        Ok(hom)
    }

    pub fn identity(group: &PermGroup) -> Self {
        let images = group.generators().to_vec();
        Self::new(group.clone(), group.degree(), images).expect("shapes agree")
    }

    pub fn source(&self) -> &PermGroup {
        &self.source
    }

    pub fn target_degree(&self) -> usize {
        self.target_degree
    }

    pub fn images(&self) -> &[Permutation] {
        &self.images
    }

    /// Builds the evaluation chain, failing with `NotWellDefined` if the
    /// generator images do not extend to a homomorphism.
    pub fn verify(&self) -> Result<()> {
        self.eval_chain().map(|_| ())
    }

    fn eval_chain(&self) -> Result<&StabilizerChain> {
        if let Some(c) = self.eval_chain.get() {
            return Ok(c);
        }
        let n = self.source.degree();
        let graph: Vec<Permutation> = self
            .source
            .generators()
            .iter()
            .zip(&self.images)
            .map(|(g, h)| g.disjoint_union(h))
            .collect();
        let base = self.source.chain().base();
        let chain = StabilizerChain::with_companion(
            n + self.target_degree,
            n,
            &graph,
            Companion::Determined,
            Some(&base),
        )?;
        Ok(self.eval_chain.get_or_init(|| chain))
    }

    fn lift_chain(&self) -> Result<&StabilizerChain> {
        if let Some(c) = self.lift_chain.get() {
            return Ok(c);
        }
        let m = self.target_degree;
        let graph: Vec<Permutation> = self
            .source
            .generators()
            .iter()
            .zip(&self.images)
            .map(|(g, h)| h.disjoint_union(g))
            .collect();
        let chain = StabilizerChain::with_companion(
            m + self.source.degree(),
            m,
            &graph,
            Companion::Ignored,
            None,
        )?;
        Ok(self.lift_chain.get_or_init(|| chain))
    }

    pub fn eval(&self, g: &Permutation) -> Result<Permutation> {
        let n = self.source.degree();
        if !self.source.contains(g)? {
            return Err(Error::NotInGroup);
        }
        let chain = self.eval_chain()?;
        let padded = g.disjoint_union(&Permutation::identity(self.target_degree));
        let (residue, _) = chain.strip(&padded);
        Ok(residue.restrict(n..n + self.target_degree).inverse())
    }

    /// `φ(source)`, generated by the generator images.
    pub fn image_group(&self) -> PermGroup {
        PermGroup::new(self.target_degree, self.images.clone()).expect("degrees checked")
    }

    /// Some preimage of `y`; fails if `y` is not in the image.
    pub fn lift(&self, y: &Permutation) -> Result<Permutation> {
        if y.degree() != self.target_degree {
            return Err(Error::DegreeMismatch {
                left: self.target_degree,
                right: y.degree(),
            });
        }
        let m = self.target_degree;
        let chain = self.lift_chain()?;
        let padded = y.disjoint_union(&Permutation::identity(self.source.degree()));
        let (residue, _) = chain.strip(&padded);
        if (0..m).any(|x| residue.image(x) != x) {
            return Err(Error::NotInGroup);
        }
        Ok(residue.restrict(m..m + self.source.degree()).inverse())
    }

    /// `φ⁻¹(U)`, given generators of the kernel.
    pub fn preimage(&self, kernel_gens: &[Permutation], u: &PermGroup) -> Result<PermGroup> {
        if u.degree() != self.target_degree {
            return Err(Error::DegreeMismatch {
                left: self.target_degree,
                right: u.degree(),
            });
        }
        let mut gens = kernel_gens.to_vec();
        for y in u.generators() {
            gens.push(self.lift(y)?);
        }
        Ok(self.source.subgroup_unchecked(gens))
    }

    pub fn is_injective(&self) -> bool {
        self.image_group().order() == self.source.order()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wreath::{alt, sym};
    use num_bigint::BigUint;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cyc(n: usize, text: &str) -> Permutation {
        Permutation::parse_cycles(n, text).unwrap()
    }

    fn sign_map() -> GroupHom {
        let s4 = sym(4);
        let images = s4
            .generators()
            .iter()
            .map(|g| {
                if g.is_even() {
                    Permutation::identity(2)
                } else {
                    cyc(2, "(1,2)")
                }
            })
            .collect();
        GroupHom::checked(s4, 2, images).unwrap()
    }

    #[test]
    fn klein_projection() {
        let a = cyc(4, "(1,2)(3,4)");
        let b = cyc(4, "(1,3)(2,4)");
        let v = PermGroup::new(4, vec![a.clone(), b.clone()]).unwrap();
        let pi = GroupHom::checked(v, 2, vec![cyc(2, "(1,2)"), Permutation::identity(2)]).unwrap();
        assert_eq!(pi.eval(&a).unwrap(), cyc(2, "(1,2)"));
        assert!(pi.eval(&b).unwrap().is_identity());
        assert!(pi.eval(&Permutation::identity(4)).unwrap().is_identity());
        assert_eq!(pi.eval(&(&a * &b)).unwrap(), cyc(2, "(1,2)"));
        assert!(matches!(pi.eval(&cyc(4, "(1,2)")), Err(Error::NotInGroup)));
    }

    #[test]
    fn rejects_non_homomorphism() {
        let s3 = sym(3);
        let bad = GroupHom::checked(s3, 3, vec![cyc(3, "(1,2,3)"), cyc(3, "(1,2)")]);
        assert!(matches!(bad, Err(Error::NotWellDefined)));
    }

    #[test]
    fn homomorphism_law_on_random_pairs() {
        // S5 acting on the 10 unordered pairs
        let s5 = sym(5);
        let pairs: Vec<(usize, usize)> = (0..5)
            .flat_map(|i| ((i + 1)..5).map(move |j| (i, j)))
            .collect();
        let index = |a: usize, b: usize| {
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            pairs.iter().position(|&p| p == (a, b)).unwrap() as u32
        };
        let images: Vec<Permutation> = s5
            .generators()
            .iter()
            .map(|g| {
                Permutation::from_images(
                    pairs
                        .iter()
                        .map(|&(a, b)| index(g.image(a), g.image(b)))
                        .collect(),
                )
                .unwrap()
            })
            .collect();
        let phi = GroupHom::checked(s5.clone(), 10, images).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let g = s5.uniform_element(&mut rng);
            let h = s5.uniform_element(&mut rng);
            let lhs = phi.eval(&(&g * &h)).unwrap();
            let rhs = &phi.eval(&g).unwrap() * &phi.eval(&h).unwrap();
            assert_eq!(lhs, rhs);
            // direct check against the action
            for (k, &(a, b)) in pairs.iter().enumerate() {
                assert_eq!(
                    lhs.image(k),
                    index((&g * &h).image(a), (&g * &h).image(b)) as usize
                );
            }
        }
        assert!(phi.is_injective());
    }

    #[test]
    fn preimages_under_sign() {
        let sign = sign_map();
        let a4 = alt(4);
        let full = sign.preimage(a4.generators(), &sym(2)).unwrap();
        assert_eq!(full.order(), BigUint::from(24u32));
        let kernel = sign
            .preimage(a4.generators(), &PermGroup::trivial(2))
            .unwrap();
        assert_eq!(kernel.order(), BigUint::from(12u32));
        let lift = sign.lift(&cyc(2, "(1,2)")).unwrap();
        assert!(!lift.is_even());
    }

    #[test]
    fn lift_outside_image_fails() {
        let s3 = sym(3);
        let images = vec![Permutation::identity(3); 2];
        let trivial = GroupHom::checked(s3, 3, images).unwrap();
        assert!(matches!(
            trivial.lift(&cyc(3, "(1,2)")),
            Err(Error::NotInGroup)
        ));
        assert!(trivial
            .lift(&Permutation::identity(3))
            .unwrap()
            .is_identity());
    }
}
