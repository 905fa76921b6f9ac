//! Steiner 2-(v,k,1) designs with v = (sk-s+1)k, their parallel classes and
//! resolutions, and the resolution families cut out by a maximal arc.

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{exterior_lines, Arc, ProjectivePlane};
use crate::incidence::{IncidenceError, IncidenceStructure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignError {
    #[error("design has no blocks")]
    Empty,
    #[error(transparent)]
    Incidence(#[from] IncidenceError),
    #[error("block {block} has {size} points, expected {expected}")]
    RaggedBlocks {
        block: usize,
        size: usize,
        expected: usize,
    },
    #[error("blocks of size {0} are too small for a 2-design")]
    BlockTooSmall(usize),
    #[error("pair {{{0}, {1}}} is not covered by any block")]
    UncoveredPair(usize, usize),
    #[error("pair {{{0}, {1}}} is covered by more than one block")]
    RepeatedPair(usize, usize),
    #[error("2-({v},{k},1) is outside the family v = (sk-s+1)k: {reason}")]
    Divisibility {
        v: usize,
        k: usize,
        reason: &'static str,
    },
    #[error("block index {block} is out of range ({blocks} blocks)")]
    BlockOutOfRange { block: usize, blocks: usize },
    #[error("parallel class has {size} blocks, expected {expected}")]
    ClassSize { size: usize, expected: usize },
    #[error("blocks {0} and {1} of a parallel class intersect")]
    ClassOverlap(usize, usize),
    #[error("resolution has {count} classes, expected {expected}")]
    ClassCount { count: usize, expected: usize },
    #[error("block {0} appears in more than one class of the resolution")]
    BlockReused(usize),
    #[error("resolutions belong to different designs")]
    ResolutionMismatch,
    #[error("point {0} lies on the arc")]
    PointOnArc(usize),
    #[error("line {0} meets the arc")]
    LineMeetsArc(usize),
    #[error("arc resolutions {first} and {second} are {kind:?}, not compatible")]
    NotCompatible {
        first: usize,
        second: usize,
        kind: PairKind,
    },
    #[error("arc family has {size} resolutions, expected {expected}")]
    FamilySize { size: usize, expected: usize },
}

/// Strongly regular graph parameters (vertices, degree, lambda, mu).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SrgParams {
    pub vertices: usize,
    pub degree: usize,
    pub lambda: usize,
    pub mu: usize,
}

/// Every count derived from the cofactor s and block size k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ArcParams {
    pub s: usize,
    pub k: usize,
    /// Order q = sk of the ambient plane.
    pub q: usize,
    pub v: usize,
    /// Blocks per parallel class, v / k.
    pub n: usize,
    /// Replication number, also the number of classes per resolution.
    pub r: usize,
    pub b: usize,
    /// Largest possible mutually compatible family, (sk-k+1)s.
    pub m_max: usize,
    /// Largest possible number of distinct classes in such a family.
    pub b_i_max: usize,
    pub disjoint_per_block: usize,
    pub srg: SrgParams,
    /// Degree of the complement of the block graph.
    pub complement_degree: usize,
}

impl ArcParams {
    /// Requires s >= 1 and k >= 2.
    pub fn new(s: usize, k: usize) -> Self {
        assert!(s >= 1 && k >= 2, "ArcParams needs s >= 1 and k >= 2");
        let q = s * k;
        let v = (q - s + 1) * k;
        let n = q - s + 1;
        let r = q + 1;
        let b = n * r;
        let degree = q * k;
        let srg = SrgParams {
            vertices: b,
            degree,
            lambda: k * (k + s - 2),
            mu: k * k,
        };
        ArcParams {
            s,
            k,
            q,
            v,
            n,
            r,
            b,
            m_max: (q - k + 1) * s,
            b_i_max: r * (q - k + 1),
            disjoint_per_block: s * (q - k + 1) * (k - 1),
            srg,
            complement_degree: b - 1 - degree,
        }
    }

    /// s = 1: the design is an affine plane of order k.
    pub fn is_affine(&self) -> bool {
        self.s == 1
    }

    /// Parameters of the design on the dual arc (roles of s and k swapped).
    pub fn dual(&self) -> Option<ArcParams> {
        (self.s >= 2).then(|| ArcParams::new(self.k, self.s))
    }
}

/// Same as [`ArcParams::new`].
pub fn parameter_table(s: usize, k: usize) -> ArcParams {
    ArcParams::new(s, k)
}

/// Checks that all blocks have the same size and every pair of points lies in
/// exactly one block. Returns the block size.
pub fn check_pairwise_balance(structure: &IncidenceStructure) -> Result<usize, DesignError> {
    let blocks = structure.blocks();
    let first = blocks.first().ok_or(DesignError::Empty)?;
    let k = first.len();
    if let Some((i, b)) = blocks.iter().enumerate().find(|(_, b)| b.len() != k) {
        return Err(DesignError::RaggedBlocks {
            block: i,
            size: b.len(),
            expected: k,
        });
    }
    if k < 2 {
        return Err(DesignError::BlockTooSmall(k));
    }
    let v = structure.point_count();
    let mut seen = vec![0u8; v * v];
    for block in blocks {
        for (i, &a) in block.iter().enumerate() {
            for &c in &block[i + 1..] {
                let cell = &mut seen[a * v + c];
                if *cell != 0 {
                    return Err(DesignError::RepeatedPair(a, c));
                }
                *cell = 1;
            }
        }
    }
    for a in 0..v {
        for c in a + 1..v {
            if seen[a * v + c] == 0 {
                return Err(DesignError::UncoveredPair(a, c));
            }
        }
    }
    Ok(k)
}

/// A validated Steiner 2-(v,k,1) design with v = (sk-s+1)k. Blocks are kept
/// in canonical order: ascending within a block, blocks lexicographic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteinerDesign {
    structure: IncidenceStructure,
    params: ArcParams,
}

impl SteinerDesign {
    pub fn validate(v: usize, blocks: Vec<Vec<usize>>) -> Result<Self, DesignError> {
        if blocks.is_empty() {
            return Err(DesignError::Empty);
        }
        let structure = IncidenceStructure::new(v, blocks)?.canonical();
        let k = check_pairwise_balance(&structure)?;
        if !v.is_multiple_of(k) {
            return Err(DesignError::Divisibility {
                v,
                k,
                reason: "k does not divide v",
            });
        }
        let n = v / k;
        if n < 2 || !(n - 1).is_multiple_of(k - 1) {
            return Err(DesignError::Divisibility {
                v,
                k,
                reason: "k - 1 does not divide v/k - 1",
            });
        }
        let params = ArcParams::new((n - 1) / (k - 1), k);
        debug_assert_eq!(params.b, structure.block_count());
        Ok(SteinerDesign { structure, params })
    }

    pub fn v(&self) -> usize {
        self.params.v
    }

    pub fn k(&self) -> usize {
        self.params.k
    }

    pub fn b(&self) -> usize {
        self.params.b
    }

    pub fn params(&self) -> &ArcParams {
        &self.params
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        self.structure.blocks()
    }

    pub fn block(&self, i: usize) -> &[usize] {
        self.structure.block(i)
    }

    pub fn incidence(&self) -> &IncidenceStructure {
        &self.structure
    }
}

/// Shorthand for [`SteinerDesign::validate`].
pub fn validate_steiner(v: usize, blocks: Vec<Vec<usize>>) -> Result<SteinerDesign, DesignError> {
    SteinerDesign::validate(v, blocks)
}

/// A set of n pairwise disjoint blocks covering every point, stored as
/// ascending block indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParallelClass(Vec<usize>);

impl ParallelClass {
    /// Checks that the blocks are pairwise disjoint and there are v/k of them.
    pub fn new(design: &SteinerDesign, blocks: Vec<usize>) -> Result<Self, DesignError> {
        let mut blocks = blocks;
        blocks.sort_unstable();
        let p = design.params();
        if blocks.len() != p.n {
            return Err(DesignError::ClassSize {
                size: blocks.len(),
                expected: p.n,
            });
        }
        let mut owner = vec![usize::MAX; p.v];
        for &bi in &blocks {
            if bi >= p.b {
                return Err(DesignError::BlockOutOfRange {
                    block: bi,
                    blocks: p.b,
                });
            }
            for &x in design.block(bi) {
                if owner[x] != usize::MAX {
                    return Err(DesignError::ClassOverlap(owner[x], bi));
                }
                owner[x] = bi;
            }
        }
        // n disjoint k-sets inside v = nk points cover everything
        Ok(ParallelClass(blocks))
    }

    pub fn blocks(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, block: usize) -> bool {
        self.0.binary_search(&block).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A partition of all blocks into r parallel classes, ordered by smallest
/// block index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Resolution {
    classes: Vec<ParallelClass>,
    class_of: Vec<usize>,
}

impl Resolution {
    pub fn new(design: &SteinerDesign, classes: Vec<Vec<usize>>) -> Result<Self, DesignError> {
        let p = design.params();
        if classes.len() != p.r {
            return Err(DesignError::ClassCount {
                count: classes.len(),
                expected: p.r,
            });
        }
        let mut classes = classes
            .into_iter()
            .map(|c| ParallelClass::new(design, c))
            .collect::<Result<Vec<_>, _>>()?;
        classes.sort();
        let mut class_of = vec![usize::MAX; p.b];
        for (ci, class) in classes.iter().enumerate() {
            for &bi in class.blocks() {
                if class_of[bi] != usize::MAX {
                    return Err(DesignError::BlockReused(bi));
                }
                class_of[bi] = ci;
            }
        }
        Ok(Resolution { classes, class_of })
    }

    pub fn classes(&self) -> &[ParallelClass] {
        &self.classes
    }

    /// Index of the class containing `block`.
    pub fn class_of(&self, block: usize) -> usize {
        self.class_of[block]
    }

    pub fn block_count(&self) -> usize {
        self.class_of.len()
    }
}

/// How two resolutions of the same design relate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairKind {
    Identical,
    Orthogonal,
    Compatible,
    Neither,
}

/// Identical when every class agrees; orthogonal when no two classes (one
/// from each side) share two blocks; compatible when exactly one class is
/// common and all other cross pairs share at most one block.
pub fn classify_resolution_pair(a: &Resolution, b: &Resolution) -> Result<PairKind, DesignError> {
    if a.block_count() != b.block_count()
        || a.classes.len() != b.classes.len()
        || a.classes[0].len() != b.classes[0].len()
    {
        return Err(DesignError::ResolutionMismatch);
    }
    let r = a.classes.len();
    let n = a.classes[0].len();
    let mut counts = vec![0usize; r * r];
    for block in 0..a.block_count() {
        counts[a.class_of(block) * r + b.class_of(block)] += 1;
    }
    let shared = counts.iter().filter(|&&c| c == n).count();
    let worst_other = counts
        .iter()
        .copied()
        .filter(|&c| c != n)
        .max()
        .unwrap_or(0);
    Ok(match (shared, worst_other <= 1) {
        (s, _) if s == r => PairKind::Identical,
        (0, true) => PairKind::Orthogonal,
        (1, true) => PairKind::Compatible,
        _ => PairKind::Neither,
    })
}

/// First pair (i < j) of the family that is not compatible, if any.
pub fn first_incompatible_pair(
    family: &[Resolution],
) -> Result<Option<(usize, usize, PairKind)>, DesignError> {
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            let kind = classify_resolution_pair(&family[i], &family[j])?;
            if kind != PairKind::Compatible {
                return Ok(Some((i, j, kind)));
            }
        }
    }
    Ok(None)
}

/// Outcome of counting neighbours in the block graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SrgVerdict {
    pub expected: SrgParams,
    /// Parameters seen by direct counting, when the graph is strongly regular.
    pub observed: Option<SrgParams>,
    pub matches: bool,
}

/// Graph on the blocks, two blocks adjacent when they intersect.
#[derive(Debug, Clone)]
pub struct BlockGraph {
    adjacency: Vec<Vec<u64>>,
    verdict: SrgVerdict,
}

impl BlockGraph {
    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a][b / 64] >> (b % 64) & 1 == 1
    }

    pub fn degree(&self, a: usize) -> usize {
        self.adjacency[a]
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn verdict(&self) -> &SrgVerdict {
        &self.verdict
    }

    pub fn is_coclique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &a)| vertices[i + 1..].iter().all(|&b| !self.adjacent(a, b)))
    }
}

pub fn block_graph(design: &SteinerDesign) -> BlockGraph {
    let b = design.b();
    let words = b.div_ceil(64);
    let mut through = vec![vec![0u64; words]; design.v()];
    for (i, block) in design.blocks().iter().enumerate() {
        for &x in block {
            through[x][i / 64] |= 1 << (i % 64);
        }
    }
    let adjacency: Vec<Vec<u64>> = design
        .blocks()
        .iter()
        .enumerate()
        .map(|(i, block)| {
            let mut row = vec![0u64; words];
            for &x in block {
                for (w, t) in row.iter_mut().zip(&through[x]) {
                    *w |= t;
                }
            }
            row[i / 64] &= !(1 << (i % 64));
            row
        })
        .collect();

    let degree = |a: usize| {
        adjacency[a]
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum::<usize>()
    };
    let deg0 = degree(0);
    let regular = (0..b).all(|a| degree(a) == deg0);
    let (mut lambda, mut mu) = (None, None);
    let mut consistent = regular;
    'outer: for a in 0..b {
        for c in a + 1..b {
            let common: usize = adjacency[a]
                .iter()
                .zip(&adjacency[c])
                .map(|(x, y)| (x & y).count_ones() as usize)
                .sum();
            let adj = adjacency[a][c / 64] >> (c % 64) & 1 == 1;
            let slot = if adj { &mut lambda } else { &mut mu };
            match *slot {
                None => *slot = Some(common),
                Some(seen) if seen != common => {
                    consistent = false;
                    break 'outer;
                }
                Some(_) => {}
            }
        }
    }
    let expected = design.params().srg;
    let observed = consistent.then(|| SrgParams {
        vertices: b,
        degree: deg0,
        // complete or empty graphs leave one of these unconstrained
        lambda: lambda.unwrap_or(0),
        mu: mu.unwrap_or(0),
    });
    let matches = observed == Some(expected);
    BlockGraph {
        adjacency,
        verdict: SrgVerdict {
            expected,
            observed,
            matches,
        },
    }
}

/// The design cut out of a plane by a maximal arc, with the map back to the
/// plane. Design point i is the i-th arc point in ascending order.
#[derive(Debug, Clone)]
pub struct ArcDesign {
    design: SteinerDesign,
    arc: Arc,
    /// Plane point -> design point.
    label: Vec<Option<usize>>,
    /// Design block -> secant line.
    block_lines: Vec<usize>,
    /// Plane line -> design block.
    line_blocks: Vec<Option<usize>>,
}

impl ArcDesign {
    pub fn design(&self) -> &SteinerDesign {
        &self.design
    }

    pub fn arc(&self) -> &Arc {
        &self.arc
    }

    /// Plane point carrying design point `x`.
    pub fn plane_point(&self, x: usize) -> usize {
        self.arc.points()[x]
    }

    pub fn block_line(&self, block: usize) -> usize {
        self.block_lines[block]
    }

    pub fn line_block(&self, line: usize) -> Option<usize> {
        self.line_blocks[line]
    }
}

/// Nonempty intersections of the arc with the lines of the plane.
pub fn restrict_to_arc(plane: &ProjectivePlane, arc: &Arc) -> Result<ArcDesign, DesignError> {
    let mut label = vec![None; plane.point_count()];
    for (i, &p) in arc.points().iter().enumerate() {
        label[p] = Some(i);
    }
    let mut secants: Vec<(Vec<usize>, usize)> = (0..plane.line_count())
        .filter_map(|l| {
            let block: Vec<usize> = plane.line(l).iter().filter_map(|&p| label[p]).collect();
            (!block.is_empty()).then_some((block, l))
        })
        .collect();
    secants.sort();
    let block_lines: Vec<usize> = secants.iter().map(|(_, l)| *l).collect();
    let design = SteinerDesign::validate(arc.len(), secants.into_iter().map(|(b, _)| b).collect())?;
    let mut line_blocks = vec![None; plane.line_count()];
    for (bi, &l) in block_lines.iter().enumerate() {
        line_blocks[l] = Some(bi);
    }
    Ok(ArcDesign {
        design,
        arc: arc.clone(),
        label,
        block_lines,
        line_blocks,
    })
}

/// The secant lines through a point off the arc, as design blocks.
pub fn parallel_class_from_point(
    plane: &ProjectivePlane,
    arc_design: &ArcDesign,
    x: usize,
) -> Result<ParallelClass, DesignError> {
    if arc_design.label[x].is_some() {
        return Err(DesignError::PointOnArc(x));
    }
    let blocks = plane
        .lines_through(x)
        .iter()
        .filter_map(|&l| arc_design.line_blocks[l])
        .collect();
    ParallelClass::new(&arc_design.design, blocks)
}

/// Groups the secant blocks by where their lines cross the exterior line `l`.
pub fn resolution_from_exterior_line(
    plane: &ProjectivePlane,
    arc_design: &ArcDesign,
    l: usize,
) -> Result<Resolution, DesignError> {
    if plane.line(l).iter().any(|&p| arc_design.label[p].is_some()) {
        return Err(DesignError::LineMeetsArc(l));
    }
    let classes = plane
        .line(l)
        .iter()
        .map(|&x| parallel_class_from_point(plane, arc_design, x).map(|c| c.0))
        .collect::<Result<Vec<_>, _>>()?;
    Resolution::new(&arc_design.design, classes)
}

/// One resolution per exterior line, in ascending line order, checked to be
/// pairwise compatible and of size m_max.
pub fn compatible_family_from_arc(
    plane: &ProjectivePlane,
    arc_design: &ArcDesign,
) -> Result<Vec<Resolution>, DesignError> {
    let family = exterior_lines(plane, &arc_design.arc)
        .into_iter()
        .map(|l| resolution_from_exterior_line(plane, arc_design, l))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some((first, second, kind)) = first_incompatible_pair(&family)? {
        return Err(DesignError::NotCompatible {
            first,
            second,
            kind,
        });
    }
    let expected = arc_design.design.params().m_max;
    if family.len() != expected {
        return Err(DesignError::FamilySize {
            size: family.len(),
            expected,
        });
    }
    Ok(family)
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn parameter_tables() {
        let p = parameter_table(2, 4);
        assert_eq!((p.v, p.r, p.b, p.m_max, p.b_i_max), (28, 9, 63, 10, 45));
        assert_eq!(
            p.srg,
            SrgParams {
                vertices: 63,
                degree: 32,
                lambda: 16,
                mu: 16
            }
        );
        let p = parameter_table(1, 3);
        assert_eq!((p.v, p.r, p.b, p.m_max), (9, 4, 12, 1));
        assert!(p.is_affine());
        let p = parameter_table(2, 2);
        assert_eq!((p.v, p.r, p.b, p.m_max), (6, 5, 15, 6));
        assert_eq!(p.disjoint_per_block, 6);
    }

    #[test]
    fn parameter_identities() {
        for s in 1..=8 {
            for k in 2..=8 {
                let p = ArcParams::new(s, k);
                assert_eq!(p.r * (k - 1), p.v - 1);
                assert_eq!(p.b * k, p.v * p.r);
                assert_eq!(p.n - 1, s * (k - 1));
                assert_eq!(p.b - 1 - k * (p.r - 1), p.disjoint_per_block);
                assert_eq!(p.disjoint_per_block, p.m_max / s * s * (k - 1));
                let g = p.srg;
                assert_eq!(
                    g.degree * (g.degree - g.lambda - 1),
                    p.complement_degree * g.mu
                );
                assert_eq!(
                    p.complement_degree,
                    s * s * k * k + 2 * s * k - s * s * k - k * k * s - s
                );
            }
        }
    }

    #[test]
    fn validate_examples() {
        let (_, ad) = arc_setup(3, 2);
        let d = ad.design();
        let p = d.params();
        assert_eq!((p.s, p.n, p.r, p.b, p.m_max), (2, 7, 9, 63, 10));

        let ag = ag23();
        assert_eq!(ag.params().s, 1);
        assert!(ag.params().is_affine());

        let mut blocks = d.blocks().to_vec();
        blocks.pop();
        assert!(matches!(
            SteinerDesign::validate(28, blocks),
            Err(DesignError::UncoveredPair(_, _))
        ));
    }

    #[test]
    fn validate_errors() {
        assert_eq!(SteinerDesign::validate(3, vec![]), Err(DesignError::Empty));
        assert!(matches!(
            SteinerDesign::validate(4, vec![vec![0, 1], vec![0, 1], vec![2, 3]]),
            Err(DesignError::RepeatedPair(0, 1))
        ));
        assert!(matches!(
            SteinerDesign::validate(3, vec![vec![0, 1, 2], vec![0, 1]]),
            Err(DesignError::RaggedBlocks { block: 1, .. })
        ));
        // Fano: 3 does not divide 7
        let fano = vec![
            vec![0, 1, 2],
            vec![0, 3, 4],
            vec![0, 5, 6],
            vec![1, 3, 5],
            vec![1, 4, 6],
            vec![2, 3, 6],
            vec![2, 4, 5],
        ];
        assert!(matches!(
            SteinerDesign::validate(7, fano),
            Err(DesignError::Divisibility { v: 7, k: 3, .. })
        ));
        // single block: s = 0
        assert!(matches!(
            SteinerDesign::validate(3, vec![vec![0, 1, 2]]),
            Err(DesignError::Divisibility { .. })
        ));
    }

    #[test]
    fn block_graphs() {
        let (_, ad) = arc_setup(3, 2);
        let g = block_graph(ad.design());
        assert!(g.verdict().matches);
        assert_eq!(
            g.verdict().observed,
            Some(SrgParams {
                vertices: 63,
                degree: 32,
                lambda: 16,
                mu: 16
            })
        );
        let g = block_graph(&complete(6));
        assert_eq!(
            g.verdict().observed,
            Some(SrgParams {
                vertices: 15,
                degree: 8,
                lambda: 4,
                mu: 4
            })
        );
        let g = block_graph(&ag23());
        assert!((0..12).all(|a| g.degree(a) == 9));
        assert!(g.verdict().matches);
    }

    #[test]
    fn arc_classes_and_resolutions() {
        for (t, i, n, r) in [(3, 2, 7, 9), (2, 1, 3, 5), (4, 3, 15, 17)] {
            let (plane, ad) = arc_setup(t, i);
            let x = (0..plane.point_count())
                .find(|&x| !ad.arc().contains(x))
                .unwrap();
            let class = parallel_class_from_point(&plane, &ad, x).unwrap();
            assert_eq!(class.len(), n);
            let ext = exterior_lines(&plane, ad.arc());
            let res = resolution_from_exterior_line(&plane, &ad, ext[0]).unwrap();
            assert_eq!(res.classes().len(), r);
            assert!(res.classes().iter().all(|c| c.len() == n));
        }
    }

    #[test]
    fn arc_errors() {
        let (plane, ad) = arc_setup(2, 1);
        let on = ad.plane_point(0);
        assert_eq!(
            parallel_class_from_point(&plane, &ad, on),
            Err(DesignError::PointOnArc(on))
        );
        let secant = ad.block_line(0);
        assert_eq!(
            resolution_from_exterior_line(&plane, &ad, secant),
            Err(DesignError::LineMeetsArc(secant))
        );
    }

    #[test]
    fn arc_design_maps_back_to_plane() {
        let (plane, ad) = arc_setup(3, 2);
        for (bi, block) in ad.design().blocks().iter().enumerate() {
            let line = plane.line(ad.block_line(bi));
            assert!(block.iter().all(|&x| line.contains(&ad.plane_point(x))));
            assert_eq!(ad.line_block(ad.block_line(bi)), Some(bi));
        }
    }

    #[test]
    fn arc_families() {
        for (t, i, m) in [(3, 2, 10), (2, 1, 6), (4, 3, 18)] {
            let (plane, ad) = arc_setup(t, i);
            let fam = compatible_family_from_arc(&plane, &ad).unwrap();
            assert_eq!(fam.len(), m);
        }
    }

    #[test]
    fn family_class_multiplicities() {
        for (t, i) in [(2, 1), (3, 1), (3, 2), (4, 2)] {
            let (plane, ad) = arc_setup(t, i);
            let p = *ad.design().params();
            let fam = compatible_family_from_arc(&plane, &ad).unwrap();
            let mut seen: std::collections::HashMap<&ParallelClass, usize> = Default::default();
            for r in &fam {
                for c in r.classes() {
                    *seen.entry(c).or_default() += 1;
                }
            }
            assert_eq!(seen.len(), p.b_i_max);
            assert!(seen.values().all(|&c| c == p.s));
            for block in 0..p.b {
                let through = seen.keys().filter(|c| c.contains(block)).count();
                assert_eq!(through, p.q - p.k + 1);
            }
            let g = block_graph(ad.design());
            assert!(seen.keys().all(|c| g.is_coclique(c.blocks())));
        }
    }

    #[test]
    fn classification() {
        let (plane, ad) = arc_setup(2, 1);
        let fam = compatible_family_from_arc(&plane, &ad).unwrap();
        assert_eq!(
            classify_resolution_pair(&fam[0], &fam[0]).unwrap(),
            PairKind::Identical
        );
        assert_eq!(
            classify_resolution_pair(&fam[0], &fam[1]).unwrap(),
            PairKind::Compatible
        );
        let other = complete(4);
        let r = Resolution::new(&other, vec![vec![0, 5], vec![1, 4], vec![2, 3]]).unwrap();
        assert_eq!(
            classify_resolution_pair(&fam[0], &r),
            Err(DesignError::ResolutionMismatch)
        );
    }

    #[test]
    fn hand_built_k6_resolutions_are_compatible() {
        let d = complete(6);
        let idx = |a: usize, c: usize| d.blocks().iter().position(|b| b == &[a, c]).unwrap();
        let f = |pairs: &[[(usize, usize); 3]]| {
            pairs
                .iter()
                .map(|c| c.iter().map(|&(a, b)| idx(a, b)).collect())
                .collect::<Vec<_>>()
        };
        let r1 = Resolution::new(
            &d,
            f(&[
                [(0, 1), (2, 3), (4, 5)],
                [(0, 2), (1, 4), (3, 5)],
                [(0, 3), (1, 5), (2, 4)],
                [(0, 4), (1, 3), (2, 5)],
                [(0, 5), (1, 2), (3, 4)],
            ]),
        )
        .unwrap();
        let r2 = Resolution::new(
            &d,
            f(&[
                [(0, 1), (2, 3), (4, 5)],
                [(0, 2), (1, 5), (3, 4)],
                [(0, 3), (1, 4), (2, 5)],
                [(0, 4), (1, 2), (3, 5)],
                [(0, 5), (1, 3), (2, 4)],
            ]),
        )
        .unwrap();
        assert_eq!(
            classify_resolution_pair(&r1, &r2).unwrap(),
            PairKind::Compatible
        );
        assert_eq!(
            classify_resolution_pair(&r2, &r1).unwrap(),
            PairKind::Compatible
        );
    }

    #[test]
    fn resolution_validation() {
        let d = complete(4);
        // blocks: 0={0,1} 1={0,2} 2={0,3} 3={1,2} 4={1,3} 5={2,3}
        assert!(matches!(
            Resolution::new(&d, vec![vec![0, 5], vec![1, 4]]),
            Err(DesignError::ClassCount {
                count: 2,
                expected: 3
            })
        ));
        assert!(matches!(
            Resolution::new(&d, vec![vec![0, 1], vec![2, 3], vec![4, 5]]),
            Err(DesignError::ClassOverlap(0, 1))
        ));
        assert!(matches!(
            Resolution::new(&d, vec![vec![0, 5], vec![0, 5], vec![2, 3]]),
            Err(DesignError::BlockReused(0))
        ));
        assert!(matches!(
            ParallelClass::new(&d, vec![0, 9]),
            Err(DesignError::BlockOutOfRange { block: 9, .. })
        ));
    }
}
