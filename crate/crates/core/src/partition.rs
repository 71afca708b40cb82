use crate::error::{Error, Result};

/// A set partition of `{0, …, n-1}` in canonical form: every block sorted,
/// blocks ordered by their minimal element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl Partition {
    pub fn new(degree: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; degree];
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::Parse("empty block in partition".into()));
            }
            for &x in block {
                if x >= degree {
                    return Err(Error::PointOutOfRange { point: x, degree });
                }
                if seen[x] {
                    return Err(Error::Parse(format!("point {} in two blocks", x + 1)));
                }
                seen[x] = true;
            }
        }
        if let Some(x) = seen.iter().position(|&s| !s) {
            return Err(Error::Parse(format!("point {} not covered", x + 1)));
        }
        Ok(Self::canonical(degree, blocks))
    }

    /// Partition into the classes of a labelling (`labels[x]` is the class of `x`).
    pub fn from_labels(labels: &[usize]) -> Self {
        let classes = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); classes];
        for (x, &l) in labels.iter().enumerate() {
            blocks[l].push(x);
        }
        blocks.retain(|b| !b.is_empty());
        Self::canonical(labels.len(), blocks)
    }

    fn canonical(degree: usize, mut blocks: Vec<Vec<usize>>) -> Self {
        for b in blocks.iter_mut() {
            b.sort_unstable();
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        let mut block_of = vec![0; degree];
        for (i, b) in blocks.iter().enumerate() {
            for &x in b {
                block_of[x] = i;
            }
        }
        Partition { blocks, block_of }
    }

    pub fn singletons(degree: usize) -> Self {
        Self::canonical(degree, (0..degree).map(|x| vec![x]).collect())
    }

    pub fn degree(&self) -> usize {
        self.block_of.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    /// Neither the singleton partition nor the one-block partition.
    pub fn is_nontrivial(&self) -> bool {
        self.blocks.len() > 1 && self.blocks.len() < self.degree()
    }
}
