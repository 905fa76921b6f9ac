//! Desarguesian projective planes PG(2, 2^t) and maximal arcs inside them.
//!
//! Points and lines are normalized homogeneous triples (first nonzero
//! coordinate equal to 1) listed in lexicographic order, so every index
//! handed out here is reproducible. A point `(x:y:z)` lies on the line
//! `[a:b:c]` when `ax + by + cz = 0`.

use std::collections::HashMap;

use thiserror::Error;

use crate::gf::{Field, GfError};
use crate::incidence::IncidenceStructure;
use crate::reconstruct::{verify_projective_plane, PlaneViolation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("planes are built over binary extension fields only")]
    NotBinary,
    #[error("this operation needs a coordinatized plane")]
    NoCoordinates,
    #[error("not a projective plane: {0}")]
    NotAPlane(PlaneViolation),
    #[error("arc degree {k} is not a proper divisor of the plane order {order}")]
    BadArcDegree { k: usize, order: usize },
    #[error("subgroup exponent {i} must lie in 1..={t}")]
    SubgroupExponent { i: u32, t: u32 },
    #[error("point {point} is outside the plane ({points} points)")]
    PointOutOfRange { point: usize, points: usize },
    #[error("point set is not a maximal arc: {0}")]
    NotMaximal(ArcViolation),
    #[error("arc has {actual} points, expected {expected}")]
    ArcSize { expected: usize, actual: usize },
    #[error("no quadratic x^2 + cx + 1 is irreducible over the field")]
    NoIrreducibleQuadratic,
    #[error("point {0} lies on the arc")]
    PointOnArc(usize),
    #[error("line {0} meets the arc")]
    LineMeetsArc(usize),
}

/// A line meeting a candidate arc in a forbidden number of points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArcViolation {
    pub line: usize,
    pub meets: usize,
    pub k: usize,
}

impl std::fmt::Display for ArcViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "line {} meets the set in {} points (allowed: 0 or {})",
            self.line, self.meets, self.k
        )
    }
}

/// Homogeneous coordinates attached to a plane built over a field.
#[derive(Debug, Clone)]
pub struct Coordinates {
    field: Field,
    points: Vec<[u32; 3]>,
    lines: Vec<[u32; 3]>,
    point_index: HashMap<[u32; 3], usize>,
    line_index: HashMap<[u32; 3], usize>,
}

impl Coordinates {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn point(&self, i: usize) -> [u32; 3] {
        self.points[i]
    }

    pub fn line(&self, i: usize) -> [u32; 3] {
        self.lines[i]
    }

    /// Index of the point with the given (not necessarily normalized) coordinates.
    pub fn point_index(&self, xyz: [u32; 3]) -> Option<usize> {
        normalize(&self.field, xyz).and_then(|n| self.point_index.get(&n).copied())
    }

    pub fn line_index(&self, abc: [u32; 3]) -> Option<usize> {
        normalize(&self.field, abc).and_then(|n| self.line_index.get(&n).copied())
    }

    fn dual(&self) -> Coordinates {
        Coordinates {
            field: self.field.clone(),
            points: self.lines.clone(),
            lines: self.points.clone(),
            point_index: self.line_index.clone(),
            line_index: self.point_index.clone(),
        }
    }
}

/// Scale so that the first nonzero coordinate is 1. `None` for the zero vector.
pub fn normalize(field: &Field, v: [u32; 3]) -> Option<[u32; 3]> {
    let lead = *v.iter().find(|&&c| c != 0)?;
    let s = field.inv(lead).ok()?;
    Some(v.map(|c| field.mul(c, s)))
}

fn canonical_triples(field: &Field) -> Vec<[u32; 3]> {
    let q = field.order();
    let mut out = Vec::with_capacity((q * q + q + 1) as usize);
    out.push([0, 0, 1]);
    for z in 0..q {
        out.push([0, 1, z]);
    }
    for y in 0..q {
        for z in 0..q {
            out.push([1, y, z]);
        }
    }
    out
}

/// A projective plane, stored as its lines over points `0..n^2+n+1`.
#[derive(Debug, Clone)]
pub struct ProjectivePlane {
    order: usize,
    lines: IncidenceStructure,
    point_lines: Vec<Vec<usize>>,
    coords: Option<Coordinates>,
}

impl ProjectivePlane {
    /// PG(2, q) over a binary extension field.
    pub fn build_pg2(field: &Field) -> Result<Self, GeometryError> {
        if !field.is_binary() {
            return Err(GeometryError::NotBinary);
        }
        let triples = canonical_triples(field);
        let dot = |p: &[u32; 3], l: &[u32; 3]| {
            (0..3).fold(0, |acc, i| field.add(acc, field.mul(p[i], l[i])))
        };
        let blocks: Vec<Vec<usize>> = triples
            .iter()
            .map(|l| {
                triples
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| dot(p, l) == 0)
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let lines =
            IncidenceStructure::new(triples.len(), blocks).expect("generated blocks are in range");
        let index: HashMap<[u32; 3], usize> =
            triples.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let point_lines = lines.point_blocks();
        Ok(ProjectivePlane {
            order: field.order() as usize,
            lines,
            point_lines,
            coords: Some(Coordinates {
                field: field.clone(),
                points: triples.clone(),
                lines: triples,
                point_index: index.clone(),
                line_index: index,
            }),
        })
    }

    /// Wraps an abstract incidence structure after checking every plane axiom.
    pub fn from_incidence(lines: IncidenceStructure) -> Result<Self, GeometryError> {
        let order = verify_projective_plane(&lines).map_err(GeometryError::NotAPlane)?;
        let point_lines = lines.point_blocks();
        Ok(ProjectivePlane {
            order,
            lines,
            point_lines,
            coords: None,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn point_count(&self) -> usize {
        self.lines.point_count()
    }

    pub fn line_count(&self) -> usize {
        self.lines.block_count()
    }

    /// Points on line `l`, ascending.
    pub fn line(&self, l: usize) -> &[usize] {
        self.lines.block(l)
    }

    /// Lines through point `p`, ascending.
    pub fn lines_through(&self, p: usize) -> &[usize] {
        &self.point_lines[p]
    }

    pub fn incidence(&self) -> &IncidenceStructure {
        &self.lines
    }

    pub fn coordinates(&self) -> Option<&Coordinates> {
        self.coords.as_ref()
    }

    /// The unique line through two distinct points.
    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        if a == b {
            return None;
        }
        let lb = &self.point_lines[b];
        self.point_lines[a]
            .iter()
            .copied()
            .find(|l| lb.binary_search(l).is_ok())
    }

    /// Points and lines exchanged.
    pub fn dual(&self) -> ProjectivePlane {
        ProjectivePlane {
            order: self.order,
            lines: self.lines.transpose(),
            point_lines: self.lines.blocks().to_vec(),
            coords: self.coords.as_ref().map(Coordinates::dual),
        }
    }

    fn membership(&self, points: &[usize]) -> Result<Vec<bool>, GeometryError> {
        let mut member = vec![false; self.point_count()];
        for &p in points {
            if p >= member.len() {
                return Err(GeometryError::PointOutOfRange {
                    point: p,
                    points: member.len(),
                });
            }
            member[p] = true;
        }
        Ok(member)
    }

    /// Number of points of `set` on each line.
    pub fn line_intersections(&self, set: &[usize]) -> Result<Vec<usize>, GeometryError> {
        let member = self.membership(set)?;
        Ok(self
            .lines
            .blocks()
            .iter()
            .map(|l| l.iter().filter(|&&p| member[p]).count())
            .collect())
    }
}

/// Checks that every line meets `set` in 0 or `k` points. Reports the first
/// offending line otherwise.
pub fn verify_maximal_arc(
    plane: &ProjectivePlane,
    set: &[usize],
    k: usize,
) -> Result<(), GeometryError> {
    let counts = plane.line_intersections(set)?;
    match counts.iter().enumerate().find(|&(_, &c)| c != 0 && c != k) {
        Some((line, &meets)) => Err(GeometryError::NotMaximal(ArcViolation { line, meets, k })),
        None => Ok(()),
    }
}

/// A verified maximal {(sk-s+1)k; k}-arc in a plane of order q = sk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    points: Vec<usize>,
    k: usize,
    s: usize,
}

impl Arc {
    pub fn new(
        plane: &ProjectivePlane,
        points: Vec<usize>,
        k: usize,
    ) -> Result<Self, GeometryError> {
        let q = plane.order();
        if k < 2 || k > q || !q.is_multiple_of(k) {
            return Err(GeometryError::BadArcDegree { k, order: q });
        }
        let mut points = points;
        points.sort_unstable();
        points.dedup();
        verify_maximal_arc(plane, &points, k)?;
        let s = q / k;
        let expected = (s * k - s + 1) * k;
        if points.len() != expected {
            return Err(GeometryError::ArcSize {
                expected,
                actual: points.len(),
            });
        }
        Ok(Arc { points, k, s })
    }

    /// Ascending point indices.
    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: usize) -> bool {
        self.points.binary_search(&p).is_ok()
    }
}

/// The conic {(1:u:u^2)} together with (0:0:1) and its nucleus (0:1:0).
pub fn regular_hyperoval(plane: &ProjectivePlane) -> Result<Arc, GeometryError> {
    let coords = plane.coordinates().ok_or(GeometryError::NoCoordinates)?;
    let f = coords.field();
    let mut points: Vec<usize> = f
        .elements()
        .map(|u| {
            coords
                .point_index([1, u, f.mul(u, u)])
                .expect("valid triple")
        })
        .collect();
    points.push(coords.point_index([0, 0, 1]).expect("valid triple"));
    points.push(coords.point_index([0, 1, 0]).expect("valid triple"));
    Arc::new(plane, points, 2)
}

/// Smallest nonzero `c` such that x^2 + cx + 1 has no root in the field.
pub fn denniston_coefficient(field: &Field) -> Option<u32> {
    (1..field.order()).find(|&c| {
        field
            .elements()
            .all(|x| field.add(field.add(field.mul(x, x), field.mul(c, x)), 1) != 0)
    })
}

/// Denniston maximal arc of degree k = 2^i: the affine points (x:y:1) with
/// x^2 + cxy + y^2 in the additive subgroup spanned by 1, a, ..., a^(i-1),
/// where c is [`denniston_coefficient`].
pub fn denniston_arc(plane: &ProjectivePlane, i: u32) -> Result<Arc, GeometryError> {
    let coords = plane.coordinates().ok_or(GeometryError::NoCoordinates)?;
    let f = coords.field();
    let t = f.order().trailing_zeros();
    if i == 0 || i > t {
        return Err(GeometryError::SubgroupExponent { i, t });
    }
    let c = denniston_coefficient(f).ok_or(GeometryError::NoIrreducibleQuadratic)?;
    // basis labels 1, a, ..., a^(i-1) are the bits below i
    let subgroup_mask = !((1u32 << i) - 1);
    let mut points = Vec::new();
    for x in f.elements() {
        for y in f.elements() {
            let form = f.add(f.add(f.mul(x, x), f.mul(c, f.mul(x, y))), f.mul(y, y));
            if form & subgroup_mask == 0 {
                points.push(coords.point_index([x, y, 1]).expect("valid triple"));
            }
        }
    }
    Arc::new(plane, points, 1usize << i)
}

/// Lines meeting the arc in k points, ascending.
pub fn secant_lines(plane: &ProjectivePlane, arc: &Arc) -> Vec<usize> {
    let counts = plane
        .line_intersections(arc.points())
        .expect("arc points are in range");
    (0..counts.len()).filter(|&l| counts[l] != 0).collect()
}

/// Lines disjoint from the arc, ascending.
pub fn exterior_lines(plane: &ProjectivePlane, arc: &Arc) -> Vec<usize> {
    let counts = plane
        .line_intersections(arc.points())
        .expect("arc points are in range");
    (0..counts.len()).filter(|&l| counts[l] == 0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pg(t: u32) -> ProjectivePlane {
        ProjectivePlane::build_pg2(&Field::binary(t).unwrap()).unwrap()
    }

    fn check_axioms(p: &ProjectivePlane) {
        let q = p.order();
        let n = q * q + q + 1;
        assert_eq!(p.point_count(), n);
        assert_eq!(p.line_count(), n);
        for l in 0..n {
            assert_eq!(p.line(l).len(), q + 1);
            assert_eq!(p.lines_through(l).len(), q + 1);
        }
        for a in 0..n {
            for b in a + 1..n {
                let common = p
                    .lines_through(a)
                    .iter()
                    .filter(|l| p.line(**l).contains(&b))
                    .count();
                assert_eq!(common, 1, "points {a} {b}");
                let meet = p.line(a).iter().filter(|x| p.line(b).contains(x)).count();
                assert_eq!(meet, 1, "lines {a} {b}");
            }
        }
    }

    #[test]
    fn plane_sizes() {
        let fano = pg(1);
        assert_eq!(fano.point_count(), 7);
        assert!(fano.incidence().blocks().iter().all(|l| l.len() == 3));
        assert_eq!(pg(3).point_count(), 73);
        let p4 = pg(2);
        assert_eq!(p4.point_count(), 21);
        assert!((0..21).all(|x| p4.lines_through(x).len() == 5));
    }

    #[test]
    fn planes_satisfy_axioms() {
        for t in 1..=4 {
            check_axioms(&pg(t));
        }
    }

    #[test]
    fn prime_field_rejected() {
        let f = Field::prime(3).unwrap();
        assert!(matches!(
            ProjectivePlane::build_pg2(&f),
            Err(GeometryError::NotBinary)
        ));
    }

    #[test]
    fn canonical_ordering() {
        let p = pg(1);
        let c = p.coordinates().unwrap();
        assert_eq!(c.point(0), [0, 0, 1]);
        assert_eq!(c.point(1), [0, 1, 0]);
        assert_eq!(c.point(6), [1, 1, 1]);
        // line x = 0 holds (0:0:1), (0:1:0), (0:1:1)
        assert_eq!(p.line(c.line_index([1, 0, 0]).unwrap()), &[0, 1, 2]);
    }

    #[test]
    fn dual_is_involution() {
        for t in 1..=3 {
            let p = pg(t);
            let d = p.dual();
            assert_eq!(d.point_count(), p.line_count());
            for l in 0..p.line_count() {
                for &x in p.line(l) {
                    assert!(d.line(x).contains(&l));
                }
            }
            let dd = d.dual();
            assert_eq!(dd.incidence(), p.incidence());
            check_axioms(&d);
        }
    }

    #[test]
    fn hyperovals() {
        assert_eq!(regular_hyperoval(&pg(2)).unwrap().len(), 6);
        assert_eq!(regular_hyperoval(&pg(3)).unwrap().len(), 10);
        let fano = pg(1);
        let h = regular_hyperoval(&fano).unwrap();
        assert_eq!(h.len(), 4);
        let counts = fano.line_intersections(h.points()).unwrap();
        assert!(counts.iter().all(|&c| c == 0 || c == 2));
    }

    #[test]
    fn denniston_sizes() {
        assert_eq!(denniston_arc(&pg(3), 2).unwrap().len(), 28);
        assert_eq!(denniston_arc(&pg(4), 2).unwrap().len(), 52);
        assert_eq!(denniston_arc(&pg(4), 3).unwrap().len(), 120);
        for t in 1..=5 {
            let p = pg(t);
            let h = denniston_arc(&p, 1).unwrap();
            assert_eq!(h.len(), p.order() + 2);
            assert_eq!(h.k(), 2);
        }
        assert!(matches!(
            denniston_arc(&pg(3), 4),
            Err(GeometryError::SubgroupExponent { i: 4, t: 3 })
        ));
    }

    #[test]
    fn full_subgroup_gives_affine_plane() {
        let p = pg(2);
        let a = denniston_arc(&p, 2).unwrap();
        assert_eq!((a.len(), a.s()), (16, 1));
        assert_eq!(exterior_lines(&p, &a).len(), 1);
    }

    #[test]
    fn maximal_arc_checks() {
        let p = pg(2);
        let h = regular_hyperoval(&p).unwrap();
        assert!(verify_maximal_arc(&p, h.points(), 2).is_ok());
        let fewer = &h.points()[1..];
        match verify_maximal_arc(&p, fewer, 2) {
            Err(GeometryError::NotMaximal(v)) => assert_eq!(v.meets, 1),
            other => panic!("unexpected {other:?}"),
        }
        let fano = pg(1);
        let line = fano.line(0).to_vec();
        assert!(matches!(
            verify_maximal_arc(&fano, &line, 3),
            Err(GeometryError::NotMaximal(ArcViolation { meets: 1, .. }))
        ));
        assert!(matches!(
            verify_maximal_arc(&fano, &[9], 3),
            Err(GeometryError::PointOutOfRange { .. })
        ));
    }

    #[test]
    fn exterior_line_counts() {
        let p8 = pg(3);
        assert_eq!(
            exterior_lines(&p8, &denniston_arc(&p8, 2).unwrap()).len(),
            10
        );
        let p4 = pg(2);
        assert_eq!(
            exterior_lines(&p4, &regular_hyperoval(&p4).unwrap()).len(),
            6
        );
        let p16 = pg(4);
        assert_eq!(
            exterior_lines(&p16, &denniston_arc(&p16, 3).unwrap()).len(),
            18
        );
    }

    #[test]
    fn line_classes_around_arcs() {
        for (t, i) in [(2, 1), (3, 1), (3, 2), (4, 2), (4, 3)] {
            let p = pg(t);
            let a = denniston_arc(&p, i).unwrap();
            let (q, k, s) = (p.order(), a.k(), a.s());
            let secants = secant_lines(&p, &a);
            let exterior = exterior_lines(&p, &a);
            assert_eq!(secants.len(), (s * k - s + 1) * (s * k + 1));
            assert_eq!(exterior.len(), (s * k - k + 1) * s);
            assert_eq!(secants.len() + exterior.len(), q * q + q + 1);
            for x in (0..p.point_count()).filter(|&x| !a.contains(x)) {
                let through = p.lines_through(x);
                let sec = through
                    .iter()
                    .filter(|l| secants.binary_search(l).is_ok())
                    .count();
                assert_eq!(sec, s * k - s + 1);
                assert_eq!(through.len() - sec, s);
            }
        }
    }

    #[test]
    fn from_incidence_roundtrip() {
        let p = pg(2);
        let q = ProjectivePlane::from_incidence(p.incidence().clone()).unwrap();
        assert_eq!(q.order(), 4);
        assert!(q.coordinates().is_none());
        assert!(matches!(
            regular_hyperoval(&q),
            Err(GeometryError::NoCoordinates)
        ));
    }
}
