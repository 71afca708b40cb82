//! JSON formats. Points are 1-based; orders are decimal strings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::morphism::{PermutationMorphism, SetMap};
use crate::perm::Permutation;

/// A generator is either a 1-based image array or a cycle string.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum GeneratorJson {
    Images(Vec<u64>),
    Cycles(String),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GroupJson {
    pub degree: usize,
    pub generators: Vec<GeneratorJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl GroupJson {
    pub fn from_group(group: &PermGroup) -> Self {
        GroupJson {
            degree: group.degree(),
            generators: group
                .generators()
                .iter()
                .map(|g| GeneratorJson::Images(g.one_based()))
                .collect(),
            name: group.name().map(str::to_owned),
        }
    }

    pub fn to_group(&self) -> Result<PermGroup> {
        let gens = self
            .generators
            .iter()
            .map(|g| match g {
                GeneratorJson::Images(images) => {
                    if images.len() != self.degree {
                        return Err(Error::DegreeMismatch {
                            left: self.degree,
                            right: images.len(),
                        });
                    }
                    Permutation::from_one_based(images)
                }
                GeneratorJson::Cycles(text) => Permutation::parse_cycles(self.degree, text),
            })
            .collect::<Result<Vec<_>>>()?;
        let group = PermGroup::new(self.degree, gens)?;
        Ok(match &self.name {
            Some(name) => group.with_name(name.clone()),
            None => group,
        })
    }
}

pub fn parse_group(text: &str) -> Result<PermGroup> {
    let json: GroupJson = serde_json::from_str(text)?;
    json.to_group()
}

pub fn group_to_json(group: &PermGroup) -> serde_json::Value {
    serde_json::to_value(GroupJson::from_group(group)).expect("plain data")
}

/// 1-based image arrays of a list of permutations.
pub fn permutations_to_json(perms: &[Permutation]) -> serde_json::Value {
    serde_json::Value::Array(
        perms
            .iter()
            .map(|p| serde_json::to_value(p.one_based()).expect("plain data"))
            .collect(),
    )
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SetMapJson {
    pub source_size: usize,
    pub target_size: usize,
    pub images: Vec<usize>,
}

impl SetMapJson {
    pub fn from_map(f: &SetMap) -> Self {
        SetMapJson {
            source_size: f.source_size(),
            target_size: f.target_size(),
            images: f.images().iter().map(|&x| x + 1).collect(),
        }
    }

    pub fn to_map(&self) -> Result<SetMap> {
        if self.images.len() != self.source_size {
            return Err(Error::DegreeMismatch {
                left: self.source_size,
                right: self.images.len(),
            });
        }
        let zero_based = self
            .images
            .iter()
            .map(|&x| {
                x.checked_sub(1).ok_or(Error::PointOutOfRange {
                    point: 0,
                    degree: self.target_size,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        SetMap::new(self.target_size, zero_based)
    }
}

/// A morphism as its domain map plus the image of every source generator.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MorphismJson {
    pub map: SetMapJson,
    pub source: GroupJson,
    pub images: Vec<Vec<u64>>,
}

impl MorphismJson {
    pub fn from_morphism(f: &PermutationMorphism) -> Self {
        MorphismJson {
            map: SetMapJson::from_map(f.map()),
            source: GroupJson::from_group(f.source()),
            images: f.generator_images().iter().map(|p| p.one_based()).collect(),
        }
    }

    /// Rebuilds the morphism; the target is the group generated by the images.
    pub fn to_morphism(&self) -> Result<PermutationMorphism> {
        let map = self.map.to_map()?;
        let source = self.source.to_group()?;
        let images = self
            .images
            .iter()
            .map(|p| Permutation::from_one_based(p))
            .collect::<Result<Vec<_>>>()?;
        let target = PermGroup::new(map.target_size(), images.clone())?;
        let hom = crate::hom::GroupHom::new(source, map.target_size(), images)?;
        PermutationMorphism::new(map, hom, target)
    }
}
