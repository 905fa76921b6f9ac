//! Rebuilding a projective plane of order sk from a Steiner design and a
//! family of (sk-k+1)s mutually compatible resolutions.
//!
//! The blocks of the design together with the distinct parallel classes of
//! the family become the points of the plane. Each design block, extended by
//! the classes containing it, is a line; so is the set of classes of each
//! resolution.

use serde::Serialize;
use thiserror::Error;

use crate::design::{
    first_incompatible_pair, DesignError, PairKind, ParallelClass, Resolution, SteinerDesign,
};
use crate::incidence::IncidenceStructure;

/// First failed projective plane axiom, with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "violation", rename_all = "kebab-case")]
pub enum PlaneViolation {
    #[error("structure has no lines")]
    NoLines,
    #[error("line {line} has {size} points; a plane needs at least 3 per line")]
    Degenerate { line: usize, size: usize },
    #[error("line {line} has {size} points, expected {expected}")]
    LineSize {
        line: usize,
        size: usize,
        expected: usize,
    },
    #[error("points {a} and {b} lie on {count} common lines")]
    PointPair { a: usize, b: usize, count: usize },
    #[error("lines {a} and {b} meet in {count} points")]
    LinePair { a: usize, b: usize, count: usize },
    #[error("point {point} lies on {degree} lines, expected {expected}")]
    PointDegree {
        point: usize,
        degree: usize,
        expected: usize,
    },
    #[error("{points} points and {lines} lines, expected {expected} of each")]
    Count {
        points: usize,
        lines: usize,
        expected: usize,
    },
}

/// Checks every axiom of a projective plane and returns its order.
pub fn verify_projective_plane(s: &IncidenceStructure) -> Result<usize, PlaneViolation> {
    let lines = s.blocks();
    let first = lines.first().ok_or(PlaneViolation::NoLines)?;
    if first.len() < 3 {
        return Err(PlaneViolation::Degenerate {
            line: 0,
            size: first.len(),
        });
    }
    let n = first.len() - 1;
    if let Some((line, l)) = lines.iter().enumerate().find(|(_, l)| l.len() != n + 1) {
        return Err(PlaneViolation::LineSize {
            line,
            size: l.len(),
            expected: n + 1,
        });
    }

    let v = s.point_count();
    let mut pair_count = vec![0u32; v * v];
    for l in lines {
        for (i, &a) in l.iter().enumerate() {
            for &b in &l[i + 1..] {
                pair_count[a * v + b] += 1;
            }
        }
    }
    for a in 0..v {
        for b in a + 1..v {
            let count = pair_count[a * v + b] as usize;
            if count != 1 {
                return Err(PlaneViolation::PointPair { a, b, count });
            }
        }
    }

    let words = v.div_ceil(64).max(1);
    let bits: Vec<Vec<u64>> = lines
        .iter()
        .map(|l| {
            let mut row = vec![0u64; words];
            for &p in l {
                row[p / 64] |= 1 << (p % 64);
            }
            row
        })
        .collect();
    for a in 0..lines.len() {
        for b in a + 1..lines.len() {
            let count: usize = bits[a]
                .iter()
                .zip(&bits[b])
                .map(|(x, y)| (x & y).count_ones() as usize)
                .sum();
            if count != 1 {
                return Err(PlaneViolation::LinePair { a, b, count });
            }
        }
    }

    let mut degree = vec![0usize; v];
    for l in lines {
        for &p in l {
            degree[p] += 1;
        }
    }
    if let Some((point, &d)) = degree.iter().enumerate().find(|(_, &d)| d != n + 1) {
        return Err(PlaneViolation::PointDegree {
            point,
            degree: d,
            expected: n + 1,
        });
    }
    let expected = n * n + n + 1;
    if v != expected || lines.len() != expected {
        return Err(PlaneViolation::Count {
            points: v,
            lines: lines.len(),
            expected,
        });
    }
    Ok(n)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconstructError {
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error("the family is empty")]
    EmptyFamily,
    #[error("resolution {index} does not fit the design")]
    ForeignResolution { index: usize },
    #[error("resolutions {first} and {second} are {kind:?}, not compatible")]
    NotCompatible {
        first: usize,
        second: usize,
        kind: PairKind,
    },
    #[error("block {block} lies in {degree} classes of the family, above the bound {bound}")]
    DegreeBound {
        block: usize,
        degree: usize,
        bound: usize,
    },
    #[error("the family has {classes} distinct classes, above the bound {bound}")]
    ClassBound { classes: usize, bound: usize },
    #[error("the dual structure needs at least two resolutions, got {0}")]
    FamilyTooSmall(usize),
    #[error("resolutions {a} and {b} share {count} classes")]
    Lambda { a: usize, b: usize, count: usize },
    #[error("block sizes of the dual structure deviate from s: sum of squared deviations is {0}")]
    SizeVariance(usize),
    #[error("counting identity failed: {0}")]
    Counting(&'static str),
    #[error("family has {m} resolutions; reconstruction needs exactly {m_max}")]
    FamilySize { m: usize, m_max: usize },
    #[error("equality condition unmet: {0}")]
    Equality(&'static str),
    #[error("reconstructed structure is not a projective plane: {0}")]
    NotAPlane(PlaneViolation),
    #[error("reconstructed plane has order {found}, expected {expected}")]
    WrongOrder { found: usize, expected: usize },
    #[error("the design points do not cut out the original blocks")]
    DesignMismatch,
}

/// Points are the blocks of the design; blocks are the distinct parallel
/// classes used by the family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureI {
    classes: Vec<ParallelClass>,
    /// Per design block, the number of classes containing it.
    degrees: Vec<usize>,
    /// Per class, the ascending resolutions using it.
    users: Vec<Vec<usize>>,
    /// Per resolution, the indices of its classes in `classes`.
    resolution_classes: Vec<Vec<usize>>,
    n: usize,
}

impl StructureI {
    /// Distinct classes in canonical order.
    pub fn classes(&self) -> &[ParallelClass] {
        &self.classes
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn block_count(&self) -> usize {
        self.classes.len()
    }

    /// Resolutions (by index) that contain class `c`.
    pub fn users(&self, c: usize) -> &[usize] {
        &self.users[c]
    }

    pub fn resolution_classes(&self, r: usize) -> &[usize] {
        &self.resolution_classes[r]
    }

    pub fn family_size(&self) -> usize {
        self.resolution_classes.len()
    }
}

pub fn build_structure_i(
    design: &SteinerDesign,
    family: &[Resolution],
) -> Result<StructureI, ReconstructError> {
    let p = design.params();
    if family.is_empty() {
        return Err(ReconstructError::EmptyFamily);
    }
    for (index, r) in family.iter().enumerate() {
        if r.block_count() != p.b || r.classes().len() != p.r || r.classes()[0].len() != p.n {
            return Err(ReconstructError::ForeignResolution { index });
        }
    }
    if let Some((first, second, kind)) = first_incompatible_pair(family)? {
        return Err(ReconstructError::NotCompatible {
            first,
            second,
            kind,
        });
    }

    let mut classes: Vec<ParallelClass> = family
        .iter()
        .flat_map(|r| r.classes().iter().cloned())
        .collect();
    classes.sort();
    classes.dedup();
    let index_of = |c: &ParallelClass| classes.binary_search(c).expect("class collected above");
    let resolution_classes: Vec<Vec<usize>> = family
        .iter()
        .map(|r| r.classes().iter().map(index_of).collect())
        .collect();
    let mut users = vec![Vec::new(); classes.len()];
    for (ri, cs) in resolution_classes.iter().enumerate() {
        for &c in cs {
            users[c].push(ri);
        }
    }
    let mut degrees = vec![0usize; p.b];
    for c in &classes {
        for &block in c.blocks() {
            degrees[block] += 1;
        }
    }

    let bound = p.q - p.k + 1;
    if let Some((block, &degree)) = degrees.iter().enumerate().find(|(_, &d)| d > bound) {
        return Err(ReconstructError::DegreeBound {
            block,
            degree,
            bound,
        });
    }
    if classes.len() > p.b_i_max {
        return Err(ReconstructError::ClassBound {
            classes: classes.len(),
            bound: p.b_i_max,
        });
    }
    Ok(StructureI {
        classes,
        degrees,
        users,
        resolution_classes,
        n: p.n,
    })
}

/// The double-counting chain behind the bound m <= (sk-k+1)s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CountingChain {
    pub m: usize,
    pub r: usize,
    pub b_i: usize,
    /// Sum of block degrees r_i, and b_I * n.
    pub sum_degrees: usize,
    pub b_i_times_n: usize,
    /// Sum of dual block sizes k_j, and m * r.
    pub sum_sizes: usize,
    pub m_times_r: usize,
    /// Sum of k_j (k_j - 1), and m (m - 1).
    pub sum_pairs: usize,
    pub m_times_m_minus_1: usize,
    /// m r^2 against b_I (m - 1 + r).
    pub cauchy_lhs: usize,
    pub cauchy_rhs: usize,
}

impl CountingChain {
    pub fn compute(design: &SteinerDesign, structure: &StructureI) -> Self {
        let p = design.params();
        let m = structure.family_size();
        let b_i = structure.block_count();
        let sizes = structure.users.iter().map(Vec::len);
        CountingChain {
            m,
            r: p.r,
            b_i,
            sum_degrees: structure.degrees.iter().sum(),
            b_i_times_n: b_i * structure.n,
            sum_sizes: sizes.clone().sum(),
            m_times_r: m * p.r,
            sum_pairs: sizes.map(|k| k * k.saturating_sub(1)).sum(),
            m_times_m_minus_1: m * (m - 1),
            cauchy_lhs: m * p.r * p.r,
            cauchy_rhs: b_i * (m - 1 + p.r),
        }
    }

    pub fn check(&self) -> Result<(), ReconstructError> {
        if self.sum_degrees != self.b_i_times_n {
            return Err(ReconstructError::Counting("sum of r_i != b_I n"));
        }
        if self.sum_sizes != self.m_times_r {
            return Err(ReconstructError::Counting("sum of k_j != m r"));
        }
        if self.sum_pairs != self.m_times_m_minus_1 {
            return Err(ReconstructError::Counting(
                "sum of k_j(k_j - 1) != m(m - 1)",
            ));
        }
        if self.cauchy_lhs > self.cauchy_rhs {
            return Err(ReconstructError::Counting("m r^2 > b_I (m - 1 + r)"));
        }
        Ok(())
    }
}

/// Points are the resolutions of the family; each class of the family is a
/// block holding the resolutions that use it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualDesign {
    point_count: usize,
    blocks: Vec<Vec<usize>>,
    /// Set when the family attains the bound and the blocks form a Steiner design.
    steiner: Option<SteinerDesign>,
}

impl DualDesign {
    pub fn point_count(&self) -> usize {
        self.point_count
    }

    /// Indexed like the classes of the structure it came from.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    pub fn steiner(&self) -> Option<&SteinerDesign> {
        self.steiner.as_ref()
    }
}

pub fn build_dual_design(
    design: &SteinerDesign,
    structure: &StructureI,
) -> Result<DualDesign, ReconstructError> {
    let p = design.params();
    let m = structure.family_size();
    if m < 2 {
        return Err(ReconstructError::FamilyTooSmall(m));
    }
    let mut together = vec![0usize; m * m];
    for users in &structure.users {
        for (i, &a) in users.iter().enumerate() {
            for &b in &users[i + 1..] {
                together[a * m + b] += 1;
            }
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            let count = together[a * m + b];
            if count != 1 {
                return Err(ReconstructError::Lambda { a, b, count });
            }
        }
    }
    CountingChain::compute(design, structure).check()?;

    let steiner = if m == p.m_max {
        let variance: usize = structure
            .users
            .iter()
            .map(|u| u.len().abs_diff(p.s).pow(2))
            .sum();
        if variance != 0 {
            return Err(ReconstructError::SizeVariance(variance));
        }
        let d = SteinerDesign::validate(m, structure.users.clone())?;
        if Some(*d.params()) != p.dual() {
            return Err(ReconstructError::Equality(
                "dual design parameters are not (k, s)",
            ));
        }
        Some(d)
    } else {
        None
    };
    Ok(DualDesign {
        point_count: m,
        blocks: structure.users.clone(),
        steiner,
    })
}

/// Output of [`reconstruct_plane`].
#[derive(Debug, Clone)]
pub struct Reconstruction {
    /// Lines in construction order: one per design block, then one per
    /// resolution. Points `0..v` are design points, `v..v+b_I` classes.
    pub plane: IncidenceStructure,
    pub order: usize,
    pub structure: StructureI,
    /// Absent only in the affine case s = 1, where the family has one member.
    pub dual: Option<DualDesign>,
    pub chain: CountingChain,
}

impl Reconstruction {
    pub fn first_kind_lines(&self) -> &[Vec<usize>] {
        &self.plane.blocks()[..self.plane.block_count() - self.structure.family_size()]
    }

    pub fn second_kind_lines(&self) -> &[Vec<usize>] {
        &self.plane.blocks()[self.plane.block_count() - self.structure.family_size()..]
    }
}

pub fn reconstruct_plane(
    design: &SteinerDesign,
    family: &[Resolution],
) -> Result<Reconstruction, ReconstructError> {
    let p = design.params();
    if family.len() != p.m_max {
        return Err(ReconstructError::FamilySize {
            m: family.len(),
            m_max: p.m_max,
        });
    }
    let structure = build_structure_i(design, family)?;
    if structure.block_count() != p.b_i_max {
        return Err(ReconstructError::Equality("b_I below (sk+1)(sk-k+1)"));
    }
    if structure.degrees.iter().any(|&d| d != p.q - p.k + 1) {
        return Err(ReconstructError::Equality("some r_i below sk-k+1"));
    }
    let chain = CountingChain::compute(design, &structure);
    chain.check()?;
    let dual = if family.len() >= 2 {
        Some(build_dual_design(design, &structure)?)
    } else {
        None
    };

    let v = p.v;
    let mut through = vec![Vec::new(); p.b];
    for (ci, c) in structure.classes.iter().enumerate() {
        for &block in c.blocks() {
            through[block].push(v + ci);
        }
    }
    let mut lines: Vec<Vec<usize>> = design
        .blocks()
        .iter()
        .zip(through)
        .map(|(block, classes)| block.iter().copied().chain(classes).collect())
        .collect();
    lines.extend(
        structure
            .resolution_classes
            .iter()
            .map(|cs| cs.iter().map(|&c| v + c).collect()),
    );
    let plane = IncidenceStructure::new(v + structure.block_count(), lines)
        .expect("labels stay below v + b_I");

    let order = verify_projective_plane(&plane).map_err(ReconstructError::NotAPlane)?;
    if order != p.q {
        return Err(ReconstructError::WrongOrder {
            found: order,
            expected: p.q,
        });
    }
    let mut traces: Vec<Vec<usize>> = plane
        .blocks()
        .iter()
        .map(|l| l.iter().copied().take_while(|&x| x < v).collect::<Vec<_>>())
        .filter(|t| !t.is_empty())
        .collect();
    if traces.iter().any(|t| t.len() != p.k) {
        return Err(ReconstructError::DesignMismatch);
    }
    traces.sort();
    if traces != design.blocks() {
        return Err(ReconstructError::DesignMismatch);
    }
    Ok(Reconstruction {
        plane,
        order,
        structure,
        dual,
        chain,
    })
}
