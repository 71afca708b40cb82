//! Benchmark cases: product-action wreaths over three base actions,
//! hidden by a random relabelling before the pipeline sees them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::{Permutation, Point};
use crate::reduction::{normalizer_pa, PaNormalizer, PhaseTimings};
use crate::wreath::{alt, cyclic, product_action_wreath, psl25_on_6, sym};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Alt5,
    Psl25,
    Alt7,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Alt5, Family::Psl25, Family::Alt7];

    pub fn base(self) -> PermGroup {
        match self {
            Family::Alt5 => alt(5),
            Family::Psl25 => psl25_on_6(),
            Family::Alt7 => alt(7),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Family::Alt5 => "(A5)",
            Family::Psl25 => "PSL(2,5)",
            Family::Alt7 => "(A7)",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Alt5 => "alt5",
            Family::Psl25 => "psl25",
            Family::Alt7 => "alt7",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alt5" | "alt5-on-5" => Ok(Family::Alt5),
            "psl25" | "psl25-on-6" => Ok(Family::Psl25),
            "alt7" | "alt7-on-7" => Ok(Family::Alt7),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TopGroup {
    Symmetric,
    Cyclic,
}

impl TopGroup {
    pub fn group(self, ell: usize) -> PermGroup {
        match self {
            TopGroup::Symmetric => sym(ell),
            TopGroup::Cyclic => cyclic(ell),
        }
    }
}

impl fmt::Display for TopGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TopGroup::Symmetric => "symmetric",
            TopGroup::Cyclic => "cyclic",
        })
    }
}

impl FromStr for TopGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symmetric" | "sym" => Ok(TopGroup::Symmetric),
            "cyclic" => Ok(TopGroup::Cyclic),
            _ => Err(Error::Parse(format!("unknown top group {s:?}"))),
        }
    }
}

/// A uniformly random permutation of `n` points.
pub fn random_permutation(n: usize, rng: &mut ChaCha8Rng) -> Permutation {
    let mut images: Vec<Point> = (0..n as Point).collect();
    images.shuffle(rng);
    Permutation::from_images(images).expect("a shuffle is a bijection")
}

/// `base ≀ top` in product action, relabelled by a seeded random permutation.
pub fn case_group(family: Family, ell: usize, top: TopGroup, seed: u64) -> Result<PermGroup> {
    let wreath = product_action_wreath(&family.base(), &top.group(ell))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = random_permutation(wreath.degree(), &mut rng);
    Ok(wreath
        .relabel(c.images())
        .with_name(format!("{family}-wr-{top}{ell}")))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchCase {
    pub family: Family,
    pub ell: usize,
    pub top: TopGroup,
    pub degree: usize,
    pub timings_ms: PhaseTimings,
    pub order: String,
    pub socle_order: String,
    pub r: usize,
    pub reduced_degree: usize,
    pub bound: f64,
}

impl BenchCase {
    /// The normalizer order is a multiple of the socle order.
    pub fn is_consistent(&self) -> bool {
        let order: BigUint = self.order.parse().unwrap_or_default();
        let socle: BigUint = self.socle_order.parse().unwrap_or_default();
        socle.bits() > 0
            && (&order % &socle).bits() == 0
            && self.degree == self.family.base().degree().pow(self.ell as u32)
    }
}

pub fn run_case(family: Family, ell: usize, top: TopGroup, seed: u64) -> Result<BenchCase> {
    run_case_detailed(family, ell, top, seed).map(|(case, _, _)| case)
}

/// Like [`run_case`], also returning the input group and the full pipeline result.
pub fn run_case_detailed(
    family: Family,
    ell: usize,
    top: TopGroup,
    seed: u64,
) -> Result<(BenchCase, PermGroup, PaNormalizer)> {
    let group = case_group(family, ell, top, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let res = normalizer_pa(&group, &mut rng)?;
    let report = res.report.clone();
    let case = BenchCase {
        family,
        ell,
        top,
        degree: group.degree(),
        timings_ms: report.timings_ms,
        order: report.orders.normalizer,
        socle_order: report.orders.socle,
        r: report.r,
        reduced_degree: report.reduced_degree,
        bound: report.bound,
    };
    Ok((case, group, res))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees_follow_the_families() {
        for (family, degrees) in [
            (Family::Alt5, [25, 125, 625]),
            (Family::Psl25, [36, 216, 1296]),
            (Family::Alt7, [49, 343, 2401]),
        ] {
            for (ell, degree) in (2..=4).zip(degrees) {
                let g = case_group(family, ell, TopGroup::Symmetric, 1).unwrap();
                assert_eq!(g.degree(), degree);
            }
        }
    }

    #[test]
    fn same_seed_same_group() {
        let a = case_group(Family::Psl25, 2, TopGroup::Cyclic, 9).unwrap();
        let b = case_group(Family::Psl25, 2, TopGroup::Cyclic, 9).unwrap();
        assert_eq!(a.generators(), b.generators());
        let c = case_group(Family::Psl25, 2, TopGroup::Cyclic, 10).unwrap();
        assert_ne!(a.generators(), c.generators());
    }

    #[test]
    fn small_case_runs() {
        let case = run_case(Family::Alt5, 2, TopGroup::Symmetric, 3).unwrap();
        assert_eq!(case.order, "14400");
        assert_eq!(case.reduced_degree, 4);
        assert!(case.is_consistent());
        let again = run_case(Family::Alt5, 2, TopGroup::Symmetric, 3).unwrap();
        assert_eq!(case.order, again.order);
    }

    #[test]
    fn names_parse() {
        assert_eq!("psl25-on-6".parse::<Family>().unwrap(), Family::Psl25);
        assert_eq!("cyclic".parse::<TopGroup>().unwrap(), TopGroup::Cyclic);
        assert!("a6".parse::<Family>().is_err());
    }
}
