//! Finite incidence structures: a point count plus blocks given as point sets.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IncidenceError {
    #[error("block {block} contains point {point}, but there are only {points} points")]
    PointOutOfRange {
        block: usize,
        point: usize,
        points: usize,
    },
    #[error("block {block} repeats point {point}")]
    RepeatedPoint { block: usize, point: usize },
}

/// Points `0..point_count` and a list of blocks, each a strictly ascending
/// list of points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IncidenceStructure {
    point_count: usize,
    blocks: Vec<Vec<usize>>,
}

impl IncidenceStructure {
    /// Sorts each block internally; block order is preserved.
    pub fn new(point_count: usize, blocks: Vec<Vec<usize>>) -> Result<Self, IncidenceError> {
        let mut blocks = blocks;
        for (i, block) in blocks.iter_mut().enumerate() {
            block.sort_unstable();
            for w in block.windows(2) {
                if w[0] == w[1] {
                    return Err(IncidenceError::RepeatedPoint {
                        block: i,
                        point: w[0],
                    });
                }
            }
            if let Some(&p) = block.last() {
                if p >= point_count {
                    return Err(IncidenceError::PointOutOfRange {
                        block: i,
                        point: p,
                        points: point_count,
                    });
                }
            }
        }
        Ok(IncidenceStructure {
            point_count,
            blocks,
        })
    }

    pub fn point_count(&self) -> usize {
        self.point_count
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i]
    }

    pub fn into_blocks(self) -> Vec<Vec<usize>> {
        self.blocks
    }

    /// Blocks sorted lexicographically.
    pub fn canonical(&self) -> IncidenceStructure {
        let mut blocks = self.blocks.clone();
        blocks.sort();
        IncidenceStructure {
            point_count: self.point_count,
            blocks,
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.blocks.windows(2).all(|w| w[0] <= w[1])
    }

    /// For each point, the ascending list of blocks through it.
    pub fn point_blocks(&self) -> Vec<Vec<usize>> {
        let mut through = vec![Vec::new(); self.point_count];
        for (i, block) in self.blocks.iter().enumerate() {
            for &p in block {
                through[p].push(i);
            }
        }
        through
    }

    /// Roles of points and blocks exchanged.
    pub fn transpose(&self) -> IncidenceStructure {
        IncidenceStructure {
            point_count: self.blocks.len(),
            blocks: self.point_blocks(),
        }
    }

    /// Row-per-point 0/1 incidence matrix.
    pub fn incidence_matrix(&self) -> Vec<Vec<u8>> {
        let mut m = vec![vec![0u8; self.blocks.len()]; self.point_count];
        for (j, block) in self.blocks.iter().enumerate() {
            for &p in block {
                m[p][j] = 1;
            }
        }
        m
    }
}

/// Size of the intersection of two ascending lists.
pub fn intersection_size(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}
