//! Base and strong generating set with explicit transversals.
//!
//! The chain is built by the incremental deterministic Schreier–Sims
//! procedure: every Schreier generator of every level is sifted through the
//! levels below it exactly once. Sifting is lazy: only the images of base
//! points are tracked while descending, and the full residue is materialised
//! only when it is needed.
//!
//! A chain may carry *companion* points. Elements then live on
//! `0..limit` (the acting part) followed by `limit..degree` (a companion
//! copy of another group's element), and base points are only ever chosen in
//! the acting part. This is how homomorphisms record the image of every
//! transversal element without storing words.

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use crate::error::{Error, Result};
use crate::perm::{Permutation, Point};

const NONE: u32 = u32::MAX;

/// What to do with a residue that is trivial on the acting points but not on
/// the companion points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Companion {
    /// No companion points (`limit == degree`).
    Absent,
    /// The acting part determines the companion; a nontrivial companion
    /// residue means the generator images do not define a homomorphism.
    Determined,
    /// Companion residues are kernel elements and are dropped.
    Ignored,
}

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    gens: Vec<usize>,
    orbit: Vec<Point>,
    position: Vec<u32>,
    reps: Vec<Permutation>,
    inv_reps: Vec<Permutation>,
    bfs_gens: usize,
    tested: Vec<u32>,
}

impl Level {
    fn new(base: usize, limit: usize, degree: usize) -> Self {
        let mut position = vec![NONE; limit];
        position[base] = 0;
        Level {
            base,
            gens: Vec::new(),
            orbit: vec![base as Point],
            position,
            reps: vec![Permutation::identity(degree)],
            inv_reps: vec![Permutation::identity(degree)],
            bfs_gens: 0,
            tested: vec![0],
        }
    }
}

pub(crate) enum Sift {
    Member,
    /// Dropped out at `level` (equal to the number of levels when the
    /// residue fixes every base point).
    Residue {
        level: usize,
        residue: Permutation,
    },
    /// Trivial on the acting points, nontrivial on the companion points.
    Hidden,
}

#[derive(Clone, Debug)]
pub struct StabilizerChain {
    degree: usize,
    limit: usize,
    known_base: bool,
    companion: Companion,
    strong: Vec<Permutation>,
    levels: Vec<Level>,
}

#[inline]
fn image_through(factors: &[&Permutation], mut x: usize) -> usize {
    for f in factors {
        x = f.image(x);
    }
    x
}

fn multiply_out(factors: &[&Permutation]) -> Permutation {
    let mut iter = factors.iter();
    let first = iter.next().expect("at least one factor");
    let mut images: Vec<Point> = first.images().to_vec();
    for f in iter {
        let fi = f.images();
        for x in images.iter_mut() {
            *x = fi[*x as usize];
        }
    }
    Permutation::from_images_unchecked(images)
}

impl StabilizerChain {
    /// Deterministic chain of `⟨gens⟩` on `degree` points.
    pub fn new(degree: usize, gens: &[Permutation]) -> Result<Self> {
        let mut chain = Self::empty(degree, degree, Companion::Absent, None)?;
        chain.seed(gens)?;
        chain.complete()?;
        Ok(chain)
    }

    /// Deterministic chain using `base` as a known base. Every element that
    /// will ever be sifted must lie in a group for which `base` is a base
    /// (for instance a subgroup of a group whose chain produced `base`).
    pub(crate) fn with_known_base(
        degree: usize,
        gens: &[Permutation],
        base: &[usize],
    ) -> Result<Self> {
        let mut chain = Self::empty(degree, degree, Companion::Absent, Some(base))?;
        chain.seed(gens)?;
        chain.complete()?;
        Ok(chain)
    }

    /// Deterministic chain whose base starts with `prefix`.
    pub(crate) fn with_base_prefix(
        degree: usize,
        gens: &[Permutation],
        prefix: &[usize],
    ) -> Result<Self> {
        let mut chain = Self::empty(degree, degree, Companion::Absent, Some(prefix))?;
        chain.known_base = false;
        chain.seed(gens)?;
        chain.complete()?;
        Ok(chain)
    }

    /// Randomised construction that stops once the product of orbit lengths
    /// reaches `order`; since every level only ever holds group elements,
    /// reaching the known order certifies completeness. Falls back to the
    /// deterministic procedure if the random phase stalls.
    pub(crate) fn with_known_order<R: Rng + ?Sized>(
        degree: usize,
        gens: &[Permutation],
        order: &BigUint,
        rng: &mut R,
    ) -> Result<Self> {
        let mut chain = Self::empty(degree, degree, Companion::Absent, None)?;
        chain.seed(gens)?;
        let nontrivial: Vec<Permutation> =
            gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        if nontrivial.is_empty() {
            return Ok(chain);
        }
        let mut pr = crate::group::ProductReplacement::from_generators(&nontrivial, rng);
        let mut stalled = 0;
        while &chain.order() < order && stalled < 200 {
            let x = pr.next(rng);
            match chain.sift_from(vec![&x], 0) {
                Sift::Member | Sift::Hidden => stalled += 1,
                Sift::Residue { level, residue } => {
                    chain.add_strong(residue, 0, level)?;
                    stalled = 0;
                }
            }
        }
        if &chain.order() != order {
            chain.complete()?;
        }
        if &chain.order() != order {
            return Err(Error::Inconsistent(format!(
                "expected group order {order}, chain gives {}",
                chain.order()
            )));
        }
        Ok(chain)
    }

    /// Chain over elements with companion points `limit..degree`, optionally
    /// with a known base for the acting part.
    pub(crate) fn with_companion(
        degree: usize,
        limit: usize,
        gens: &[Permutation],
        companion: Companion,
        base: Option<&[usize]>,
    ) -> Result<Self> {
        let mut chain = Self::empty(degree, limit, companion, base)?;
        chain.seed(gens)?;
        chain.complete()?;
        Ok(chain)
    }

    fn empty(
        degree: usize,
        limit: usize,
        companion: Companion,
        base: Option<&[usize]>,
    ) -> Result<Self> {
        let mut chain = StabilizerChain {
            degree,
            limit,
            known_base: base.is_some(),
            companion,
            strong: Vec::new(),
            levels: Vec::new(),
        };
        if let Some(base) = base {
            for &b in base {
                if b >= limit {
                    return Err(Error::PointOutOfRange {
                        point: b,
                        degree: limit,
                    });
                }
                chain.levels.push(Level::new(b, limit, degree));
            }
        }
        Ok(chain)
    }

    fn seed(&mut self, gens: &[Permutation]) -> Result<()> {
        for g in gens {
            if g.degree() != self.degree {
                return Err(Error::DegreeMismatch {
                    left: self.degree,
                    right: g.degree(),
                });
            }
            self.insert_generator(g.clone())?;
        }
        Ok(())
    }

    /// Adds `g` to every level whose base prefix it fixes, creating a new
    /// base point if it fixes all of them. Does not run Schreier–Sims.
    fn insert_generator(&mut self, g: Permutation) -> Result<bool> {
        let Some(moved) = (0..self.limit).find(|&x| g.image(x) != x) else {
            return match self.companion {
                Companion::Determined if !g.is_identity() => Err(Error::NotWellDefined),
                _ => Ok(false),
            };
        };
        let depth = self
            .levels
            .iter()
            .position(|l| g.image(l.base) != l.base)
            .unwrap_or(self.levels.len());
        if depth == self.levels.len() {
            if self.known_base {
                return Err(Error::Inconsistent(
                    "element fixes a supposedly known base".into(),
                ));
            }
            self.levels.push(Level::new(moved, self.limit, self.degree));
        }
        self.add_strong(g, 0, depth)?;
        Ok(true)
    }

    /// Records `s` as a strong generator on levels `from..=to`, creating
    /// level `to` if it does not exist yet.
    fn add_strong(&mut self, s: Permutation, from: usize, to: usize) -> Result<()> {
        if to == self.levels.len() {
            if self.known_base {
                return Err(Error::Inconsistent(
                    "residue fixes a supposedly known base".into(),
                ));
            }
            let moved = (0..self.limit)
                .find(|&x| s.image(x) != x)
                .ok_or_else(|| Error::Inconsistent("trivial residue added".into()))?;
            self.levels.push(Level::new(moved, self.limit, self.degree));
        }
        let idx = self.strong.len();
        self.strong.push(s);
        for lvl in from..=to {
            self.levels[lvl].gens.push(idx);
            self.extend_orbit(lvl);
        }
        Ok(())
    }

    fn extend_orbit(&mut self, lvl: usize) {
        let strong = &self.strong;
        let level = &mut self.levels[lvl];
        let old_len = level.orbit.len();
        let old_gens = level.bfs_gens;
        let mut idx = 0;
        while idx < level.orbit.len() {
            let start = if idx < old_len { old_gens } else { 0 };
            for gi in start..level.gens.len() {
                let s = &strong[level.gens[gi]];
                let img = s.image(level.orbit[idx] as usize);
                if level.position[img] == NONE {
                    level.position[img] = level.orbit.len() as u32;
                    level.orbit.push(img as Point);
                    let rep = level.reps[idx].mul_unchecked(s);
                    level.inv_reps.push(rep.inverse());
                    level.reps.push(rep);
                    level.tested.push(0);
                }
            }
            idx += 1;
        }
        level.bfs_gens = level.gens.len();
    }

    /// Sifts the product of `factors` through levels `from..`.
    pub(crate) fn sift_from<'a>(&'a self, mut factors: Vec<&'a Permutation>, from: usize) -> Sift {
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let gamma = image_through(&factors, level.base);
            let pos = level.position[gamma];
            if pos == NONE {
                return Sift::Residue {
                    level: i,
                    residue: multiply_out(&factors),
                };
            }
            if pos != 0 {
                factors.push(&level.inv_reps[pos as usize]);
            }
        }
        if self.known_base {
            if self.companion == Companion::Determined
                && (self.limit..self.degree).any(|x| image_through(&factors, x) != x)
            {
                return Sift::Hidden;
            }
            return Sift::Member;
        }
        if (0..self.limit).any(|x| image_through(&factors, x) != x) {
            return Sift::Residue {
                level: self.levels.len(),
                residue: multiply_out(&factors),
            };
        }
        match self.companion {
            Companion::Absent => Sift::Member,
            Companion::Ignored => Sift::Member,
            Companion::Determined => {
                if (self.limit..self.degree).any(|x| image_through(&factors, x) != x) {
                    Sift::Hidden
                } else {
                    Sift::Member
                }
            }
        }
    }

    /// Runs Schreier–Sims until every Schreier generator sifts.
    fn complete(&mut self) -> Result<()> {
        if self.levels.is_empty() {
            return Ok(());
        }
        let mut i = self.levels.len() - 1;
        loop {
            match self.first_failing_schreier_generator(i)? {
                None => {
                    if i == 0 {
                        return Ok(());
                    }
                    i -= 1;
                }
                Some((residue, j)) => {
                    self.add_strong(residue, i + 1, j)?;
                    i = j;
                }
            }
        }
    }

    fn first_failing_schreier_generator(
        &mut self,
        i: usize,
    ) -> Result<Option<(Permutation, usize)>> {
        let mut k = 0;
        while k < self.levels[i].orbit.len() {
            loop {
                let level = &self.levels[i];
                let t = level.tested[k] as usize;
                if t >= level.gens.len() {
                    break;
                }
                let s = &self.strong[level.gens[t]];
                let img = s.image(level.orbit[k] as usize);
                let pk = level.position[img] as usize;
                let outcome = {
                    let factors = vec![&level.reps[k], s, &level.inv_reps[pk]];
                    self.sift_from(factors, i + 1)
                };
                match outcome {
                    Sift::Member => self.levels[i].tested[k] += 1,
                    Sift::Residue { level, residue } => return Ok(Some((residue, level))),
                    Sift::Hidden => match self.companion {
                        Companion::Determined => return Err(Error::NotWellDefined),
                        _ => self.levels[i].tested[k] += 1,
                    },
                }
            }
            k += 1;
        }
        Ok(None)
    }

    /// Adds a generator and restores completeness. Returns `false` if the
    /// element was already in the group.
    pub(crate) fn add_generator(&mut self, g: &Permutation) -> Result<bool> {
        if g.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: g.degree(),
            });
        }
        if self.contains_unchecked(g) {
            return Ok(false);
        }
        self.insert_generator(g.clone())?;
        self.complete()?;
        Ok(true)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    /// Base points whose fundamental orbit is nontrivial.
    pub fn essential_base(&self) -> Vec<usize> {
        self.levels
            .iter()
            .filter(|l| l.orbit.len() > 1)
            .map(|l| l.base)
            .collect()
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn fundamental_orbit(&self, level: usize) -> &[Point] {
        &self.levels[level].orbit
    }

    /// Strong generators fixing the first `level` base points.
    pub fn level_generators(&self, level: usize) -> Vec<&Permutation> {
        match self.levels.get(level) {
            Some(l) => l.gens.iter().map(|&i| &self.strong[i]).collect(),
            None => Vec::new(),
        }
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        &self.strong
    }

    /// Transversal element mapping the level's base point to `point`.
    pub fn transversal_element(&self, level: usize, point: usize) -> Option<&Permutation> {
        let l = &self.levels[level];
        match l.position.get(point) {
            Some(&p) if p != NONE => Some(&l.reps[p as usize]),
            _ => None,
        }
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub(crate) fn contains_unchecked(&self, g: &Permutation) -> bool {
        matches!(self.sift_from(vec![g], 0), Sift::Member)
    }

    pub fn contains(&self, g: &Permutation) -> Result<bool> {
        if g.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: g.degree(),
            });
        }
        Ok(self.contains_unchecked(g))
    }

    /// Membership of `x^-1 g x` without forming the product.
    pub(crate) fn contains_conjugate(
        &self,
        g: &Permutation,
        x: &Permutation,
        x_inv: &Permutation,
    ) -> bool {
        matches!(self.sift_from(vec![x_inv, g, x], 0), Sift::Member)
    }

    /// Full sift of `g`, returning the residue and the number of levels it
    /// passed. For companion chains the residue's companion part carries the
    /// inverse of the recorded image.
    pub(crate) fn strip(&self, g: &Permutation) -> (Permutation, usize) {
        let mut factors = vec![g];
        for (i, level) in self.levels.iter().enumerate() {
            let gamma = image_through(&factors, level.base);
            let pos = level.position[gamma];
            if pos == NONE {
                return (multiply_out(&factors), i);
            }
            factors.push(&level.inv_reps[pos as usize]);
        }
        (multiply_out(&factors), self.levels.len())
    }

    /// Uniformly random element.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut acc: Option<Permutation> = None;
        for level in self.levels.iter().rev() {
            let k = rng.random_range(0..level.orbit.len());
            let rep = &level.reps[k];
            acc = Some(match acc {
                None => rep.clone(),
                Some(a) => a.mul_unchecked(rep),
            });
        }
        acc.unwrap_or_else(|| Permutation::identity(self.degree))
    }

    /// Visits every group element once. The callback returns `false` to stop.
    pub fn for_each_element<F: FnMut(&Permutation) -> bool>(&self, mut f: F) {
        fn walk<F: FnMut(&Permutation) -> bool>(
            chain: &StabilizerChain,
            depth: usize,
            prefix: &Permutation,
            f: &mut F,
        ) -> bool {
            if depth == 0 {
                return f(prefix);
            }
            let level = &chain.levels[depth - 1];
            for rep in &level.reps {
                let next = prefix.mul_unchecked(rep);
                if !walk(chain, depth - 1, &next, f) {
                    return false;
                }
            }
            true
        }
        walk(
            self,
            self.levels.len(),
            &Permutation::identity(self.degree),
            &mut f,
        );
    }

    /// Checks the defining chain properties; used by tests.
    pub fn verify(&self, gens: &[Permutation]) -> bool {
        let gens_ok = gens.iter().all(|g| self.contains_unchecked(g));
        let reps_ok = self.levels.iter().all(|l| {
            l.reps
                .iter()
                .zip(&l.orbit)
                .all(|(r, &pt)| r.image(l.base) == pt as usize && self.contains_unchecked(r))
        });
        gens_ok && reps_ok
    }
}
