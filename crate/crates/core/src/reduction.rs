//! The reduction from `N(T) ≀ S_ℓ` in product action on `m^ℓ` points to
//! `R ≀ S_ℓ` on `r·ℓ` points, and the normalizer pipeline built on it.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigUint;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[cfg(not(target_arch = "wasm32"))]
use std::time::Instant;
#[cfg(target_arch = "wasm32")]
use web_time::Instant;

use crate::backtrack::normalizer_in_group;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::hom::GroupHom;
use crate::perm::{Permutation, Point};
use crate::structure::{self, ProductDecomposition};
use crate::wreath::{embed_coordinate, socle_normalizer, sym};

/// `NT/T` with a fixed transversal and its right-regular action.
#[derive(Debug)]
pub struct OuterQuotient {
    nt: PermGroup,
    t: PermGroup,
    transversal: Vec<Permutation>,
    /// `table[q][a]`: index of the coset `T·t_a·t_q`.
    table: Vec<Vec<usize>>,
    regular: PermGroup,
    cache: RwLock<HashMap<Vec<Point>, usize>>,
}

impl OuterQuotient {
    pub fn new(nt: &PermGroup, t: &PermGroup) -> Result<Self> {
        if !nt.is_subgroup(t)? || !nt.is_normal(t)? {
            return Err(Error::NotNormal);
        }
        // lexicographically least element of every coset, identity first
        let mut elements = nt.elements();
        elements.sort();
        let mut transversal: Vec<Permutation> = Vec::new();
        for x in elements {
            let known = transversal.iter().any(|rep| {
                t.chain()
                    .contains_unchecked(&x.mul_unchecked(&rep.inverse()))
            });
            if !known {
                transversal.push(x);
            }
        }
        debug_assert!(transversal[0].is_identity());
        let mut q = OuterQuotient {
            nt: nt.clone(),
            t: t.clone(),
            transversal,
            table: Vec::new(),
            regular: PermGroup::trivial(1),
            cache: RwLock::new(HashMap::new()),
        };
        let r = q.transversal.len();
        q.table = (0..r)
            .map(|b| {
                (0..r)
                    .map(|a| q.coset_index(&q.transversal[a].mul_unchecked(&q.transversal[b])))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let regular_gens = nt
            .generators()
            .iter()
            .map(|y| q.regular_permutation(q.coset_index(y)?))
            .filter(|p| p.as_ref().map_or(true, |p| !p.is_identity()))
            .collect::<Result<Vec<_>>>()?;
        q.regular = PermGroup::new(r, regular_gens)?.with_order_hint(BigUint::from(r));
        Ok(q)
    }

    pub fn r(&self) -> usize {
        self.transversal.len()
    }

    pub fn transversal(&self) -> &[Permutation] {
        &self.transversal
    }

    /// `R`, the right-regular action of `NT/T`.
    pub fn regular_group(&self) -> &PermGroup {
        &self.regular
    }

    pub fn nt(&self) -> &PermGroup {
        &self.nt
    }

    pub fn t(&self) -> &PermGroup {
        &self.t
    }

    /// `k` with `y ∈ T·t_k`.
    pub fn coset_index(&self, y: &Permutation) -> Result<usize> {
        if let Some(&k) = self.cache.read().expect("cache lock").get(y.images()) {
            return Ok(k);
        }
        let k = self
            .transversal
            .iter()
            .position(|rep| {
                self.t
                    .chain()
                    .contains_unchecked(&y.mul_unchecked(&rep.inverse()))
            })
            .ok_or(Error::NotInGroup)?;
        self.cache
            .write()
            .expect("cache lock")
            .insert(y.images().to_vec(), k);
        Ok(k)
    }

    /// The permutation `a ↦ index(t_a·t_q)` of the `r` cosets.
    pub fn regular_permutation(&self, q: usize) -> Result<Permutation> {
        let images = match self.table.get(q) {
            Some(row) => row.iter().map(|&x| x as Point).collect(),
            None => {
                return Err(Error::PointOutOfRange {
                    point: q,
                    degree: self.r(),
                })
            }
        };
        Ok(Permutation::from_images_unchecked(images))
    }
}

/// `ρ : M → R ≀ S_ℓ` for `M = NT ≀ S_ℓ` in product action.
#[derive(Debug)]
pub struct ReductionHom {
    m: usize,
    ell: usize,
    quotient: OuterQuotient,
    ambient: PermGroup,
    hom: GroupHom,
}

impl ReductionHom {
    pub fn new(ambient: &PermGroup, quotient: OuterQuotient, ell: usize) -> Result<Self> {
        let m = quotient.nt.degree();
        let mut red = ReductionHom {
            m,
            ell,
            quotient,
            ambient: ambient.clone(),
            hom: GroupHom::identity(&PermGroup::trivial(1)),
        };
        let images = ambient
            .generators()
            .iter()
            .map(|x| red.rho(x))
            .collect::<Result<Vec<_>>>()?;
        red.hom = GroupHom::new(ambient.clone(), red.reduced_degree(), images)?;
        Ok(red)
    }

    pub fn quotient(&self) -> &OuterQuotient {
        &self.quotient
    }

    pub fn r(&self) -> usize {
        self.quotient.r()
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn reduced_degree(&self) -> usize {
        self.r() * self.ell
    }

    pub fn ambient(&self) -> &PermGroup {
        &self.ambient
    }

    pub fn hom(&self) -> &GroupHom {
        &self.hom
    }

    /// `(σ, parts)` with `x = (parts_0, …, parts_{ℓ-1})·σ`.
    pub fn decompose_element(&self, x: &Permutation) -> Result<(Permutation, Vec<Permutation>)> {
        decompose_element(x, self.m, self.ell)
    }

    pub fn rho(&self, x: &Permutation) -> Result<Permutation> {
        let (sigma, parts) = self.decompose_element(x)?;
        let r = self.r();
        let mut images = vec![0 as Point; r * self.ell];
        for (j, part) in parts.iter().enumerate() {
            let q = self.quotient.coset_index(part)?;
            let row = &self.quotient.table[q];
            let block = sigma.image(j) * r;
            for a in 0..r {
                images[j * r + a] = (block + row[a]) as Point;
            }
        }
        Ok(Permutation::from_images_unchecked(images))
    }

    /// Generators of `ker ρ = T^ℓ`.
    pub fn kernel_generators(&self) -> Vec<Permutation> {
        (0..self.ell)
            .flat_map(|j| {
                self.quotient
                    .t
                    .generators()
                    .iter()
                    .map(move |t| embed_coordinate(t, self.ell, j))
            })
            .filter(|g| !g.is_identity())
            .collect()
    }

    /// `ρ(M)`.
    pub fn image(&self) -> PermGroup {
        self.hom.image_group()
    }
}

/// Splits `x` on `Δ^ℓ` into a coordinate permutation and one permutation
/// of `Δ` per coordinate.
pub fn decompose_element(
    x: &Permutation,
    m: usize,
    ell: usize,
) -> Result<(Permutation, Vec<Permutation>)> {
    let n = m.pow(ell as u32);
    if x.degree() != n {
        return Err(Error::DegreeMismatch {
            left: n,
            right: x.degree(),
        });
    }
    let stride = |j: usize| m.pow((ell - 1 - j) as u32);
    let digit = |y: usize, j: usize| (y / stride(j)) % m;
    let origin = x.image(0);
    let mut sigma = Vec::with_capacity(ell);
    for j in 0..ell {
        let moved = x.image(stride(j));
        let differing: Vec<usize> = (0..ell)
            .filter(|&k| digit(moved, k) != digit(origin, k))
            .collect();
        if differing.len() != 1 {
            return Err(Error::NotInGroup);
        }
        sigma.push(differing[0] as Point);
    }
    let sigma = Permutation::from_images(sigma).map_err(|_| Error::NotInGroup)?;
    let parts = (0..ell)
        .map(|j| {
            let target = sigma.image(j);
            let images = (0..m)
                .map(|d| digit(x.image(d * stride(j)), target) as Point)
                .collect();
            Permutation::from_images(images).map_err(|_| Error::NotInGroup)
        })
        .collect::<Result<Vec<_>>>()?;
    // reassembly: digit jσ of x(y) is parts_j(digit j of y)
    for y in 0..n {
        let image = x.image(y);
        for j in 0..ell {
            if digit(image, sigma.image(j)) != parts[j].image(digit(y, j)) {
                return Err(Error::NotInGroup);
            }
        }
    }
    Ok((sigma, parts))
}

/// `r·ℓ` against `6·log₂ n`.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct DegreeBound {
    pub r: usize,
    pub ell: usize,
    pub reduced_degree: usize,
    pub bound: f64,
    pub pass: bool,
}

pub fn degree_bound_report(r: usize, ell: usize, n: usize) -> DegreeBound {
    let bound = 6.0 * (n as f64).log2();
    let reduced_degree = r * ell;
    DegreeBound {
        r,
        ell,
        reduced_degree,
        bound,
        pass: reduced_degree as f64 <= bound,
    }
}

/// Wall-clock milliseconds per pipeline phase.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct PhaseTimings {
    pub socle: f64,
    pub decomposition: f64,
    pub m_construction: f64,
    pub reduction: f64,
    pub backtrack: f64,
    pub preimage: f64,
}

impl PhaseTimings {
    pub fn total(&self) -> f64 {
        self.socle
            + self.decomposition
            + self.m_construction
            + self.reduction
            + self.backtrack
            + self.preimage
    }
}

/// Orders of the intermediate groups, as decimal strings.
#[derive(Clone, Debug, Serialize)]
pub struct PipelineOrders {
    pub group: String,
    pub socle: String,
    pub t: String,
    pub nt: String,
    pub m: String,
    pub rho_m: String,
    pub rho_g: String,
    pub u: String,
    pub normalizer: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub degree: usize,
    pub ell: usize,
    pub m: usize,
    pub r: usize,
    pub reduced_degree: usize,
    pub bound: f64,
    pub bound_holds: bool,
    pub orders: PipelineOrders,
    pub timings_ms: PhaseTimings,
}

/// Everything the pipeline computed, for inspection and verification.
#[derive(Debug)]
pub struct PaNormalizer {
    pub normalizer: PermGroup,
    pub decomposition: ProductDecomposition,
    pub nt: PermGroup,
    pub ambient: PermGroup,
    pub reduction: ReductionHom,
    pub rho_g: PermGroup,
    pub u: PermGroup,
    pub n_hat: PermGroup,
    pub report: PipelineReport,
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1000.0
}

/// `N_{Sym Ω}(G)` for a primitive group `G` of type PA.
pub fn normalizer_pa<R: Rng + ?Sized>(group: &PermGroup, rng: &mut R) -> Result<PaNormalizer> {
    normalizer_pa_with(group, None, rng)
}

/// As [`normalizer_pa`], optionally with socle generators supplied.
pub fn normalizer_pa_with<R: Rng + ?Sized>(
    group: &PermGroup,
    socle_gens: Option<Vec<Permutation>>,
    rng: &mut R,
) -> Result<PaNormalizer> {
    let mut timings = PhaseTimings::default();

    let start = Instant::now();
    structure::check_primitive(group)?;
    let socle = match socle_gens {
        Some(gens) => {
            let socle = group.subgroup(gens)?;
            if !group.is_normal(&socle)? {
                return Err(Error::NotNormal);
            }
            let factors = structure::simple_factors(&socle, group, rng)?;
            structure::SocleData { socle, factors }
        }
        None => structure::socle(group, rng)?,
    };
    timings.socle = ms(start);

    let start = Instant::now();
    let d = structure::classify_with_socle(group, socle)?;
    timings.decomposition = ms(start);

    let start = Instant::now();
    let nt = normalizer_in_group(&sym(d.m), &d.t)?;
    let ambient = socle_normalizer(&d.t, &nt, d.ell)?;
    ambient.chain();
    timings.m_construction = ms(start);

    let start = Instant::now();
    let quotient = OuterQuotient::new(&nt, &d.t)?;
    let reduction = ReductionHom::new(&ambient, quotient, d.ell)?;
    let rho_gens = d
        .g_hat
        .generators()
        .iter()
        .map(|x| reduction.rho(x))
        .collect::<Result<Vec<_>>>()?;
    let rho_g = PermGroup::new(reduction.reduced_degree(), rho_gens)?;
    let rho_m = reduction.image();
    timings.reduction = ms(start);

    let start = Instant::now();
    let u = normalizer_in_group(&rho_m, &rho_g)?;
    timings.backtrack = ms(start);

    let start = Instant::now();
    let n_hat = reduction
        .hom()
        .preimage(&reduction.kernel_generators(), &u)?;
    let n_hat_order = n_hat.order();
    let normalizer = d.pull_back(&n_hat);
    timings.preimage = ms(start);

    let bound = degree_bound_report(reduction.r(), d.ell, group.degree());
    let orders = PipelineOrders {
        group: group.order().to_string(),
        socle: d.socle.socle.order().to_string(),
        t: d.t.order().to_string(),
        nt: nt.order().to_string(),
        m: ambient.order().to_string(),
        rho_m: rho_m.order().to_string(),
        rho_g: rho_g.order().to_string(),
        u: u.order().to_string(),
        normalizer: n_hat_order.to_string(),
    };
    let report = PipelineReport {
        degree: group.degree(),
        ell: d.ell,
        m: d.m,
        r: reduction.r(),
        reduced_degree: bound.reduced_degree,
        bound: bound.bound,
        bound_holds: bound.pass,
        orders,
        timings_ms: timings,
    };
    Ok(PaNormalizer {
        normalizer,
        decomposition: d,
        nt,
        ambient,
        reduction,
        rho_g,
        u,
        n_hat,
        report,
    })
}
