//! Orthogonal 1.5D terrains: validation, vertex classes, wall partners,
//! mirroring, and the flat-end extension used by the solver.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::geometry::{GridPoint, Rational};
use crate::visibility;

/// Largest accepted magnitude of an input coordinate.
pub const COORD_LIMIT: i64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexClass {
    /// Bottom of a wall that descends from the left.
    LeftConvex,
    /// Bottom of a wall that ascends to the right.
    RightConvex,
    /// Top of a wall that ascends to the right.
    LeftReflex,
    /// Top of a wall that descends from the left.
    RightReflex,
}

impl VertexClass {
    pub fn is_convex(self) -> bool {
        matches!(self, VertexClass::LeftConvex | VertexClass::RightConvex)
    }

    pub fn is_reflex(self) -> bool {
        !self.is_convex()
    }

    /// Class of the same vertex after reflecting the terrain through x = 0.
    pub fn mirrored(self) -> VertexClass {
        match self {
            VertexClass::LeftConvex => VertexClass::RightConvex,
            VertexClass::RightConvex => VertexClass::LeftConvex,
            VertexClass::LeftReflex => VertexClass::RightReflex,
            VertexClass::RightReflex => VertexClass::LeftReflex,
        }
    }

    pub fn abbrev(self) -> &'static str {
        match self {
            VertexClass::LeftConvex => "LC",
            VertexClass::RightConvex => "RC",
            VertexClass::LeftReflex => "LR",
            VertexClass::RightReflex => "RR",
        }
    }
}

impl fmt::Display for VertexClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.abbrev())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TerrainError {
    #[error("vertex {index}: x decreases")]
    NotMonotone { index: usize },
    #[error("vertex {index}: edge is neither horizontal nor vertical")]
    NotOrthogonal { index: usize },
    #[error("vertex {index}: two consecutive edges are parallel")]
    ConsecutiveParallelEdges { index: usize },
    #[error("terrain needs at least 2 vertices, got {count}")]
    TooFewVertices { count: usize },
    #[error("vertex {index}: coordinate exceeds {limit} in magnitude")]
    CoordinateOutOfRange { index: usize, limit: i64 },
    #[error("vertex {index}: repeats the previous vertex")]
    DuplicateVertex { index: usize },
    #[error("vertex {index} is {class}, expected a convex vertex")]
    NotConvex { index: usize, class: VertexClass },
    #[error("vertex {index} has no wall partner")]
    NoWallPartner { index: usize },
    #[error("abscissa {x} lies outside the terrain")]
    OutOfRange { x: Rational },
    #[error("no vertex of the original terrain can replace added vertex {index}")]
    NoReplacement { index: usize },
}

impl TerrainError {
    /// Vertex index the error refers to, when it has one.
    pub fn index(&self) -> Option<usize> {
        match *self {
            TerrainError::NotMonotone { index }
            | TerrainError::NotOrthogonal { index }
            | TerrainError::ConsecutiveParallelEdges { index }
            | TerrainError::CoordinateOutOfRange { index, .. }
            | TerrainError::DuplicateVertex { index }
            | TerrainError::NotConvex { index, .. }
            | TerrainError::NoWallPartner { index }
            | TerrainError::NoReplacement { index } => Some(index),
            TerrainError::TooFewVertices { .. } | TerrainError::OutOfRange { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dir {
    East,
    North,
    South,
}

impl Dir {
    fn is_vertical(self) -> bool {
        self != Dir::East
    }

    fn of(a: GridPoint, b: GridPoint) -> Dir {
        if a.y == b.y {
            Dir::East
        } else if b.y > a.y {
            Dir::North
        } else {
            Dir::South
        }
    }
}

fn classify_turn(incoming: Dir, outgoing: Dir) -> VertexClass {
    // Walking east then north (or south then east) turns left.
    let convex = matches!((incoming, outgoing), (Dir::East, Dir::North) | (Dir::South, Dir::East));
    let left = incoming.is_vertical() && !outgoing.is_vertical();
    match (convex, left) {
        (true, true) => VertexClass::LeftConvex,
        (true, false) => VertexClass::RightConvex,
        (false, true) => VertexClass::LeftReflex,
        (false, false) => VertexClass::RightReflex,
    }
}

/// A validated orthogonal terrain. Vertices are stored left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Terrain {
    vertices: Vec<GridPoint>,
    classes: Vec<VertexClass>,
    wall_partner: Vec<Option<usize>>,
}

impl Terrain {
    /// Validate a vertex list with the default coordinate bound.
    pub fn validate(points: &[GridPoint]) -> Result<Terrain, TerrainError> {
        Terrain::validate_with_limit(points, COORD_LIMIT)
    }

    pub fn from_coords(coords: &[(i64, i64)]) -> Result<Terrain, TerrainError> {
        let points: Vec<GridPoint> = coords.iter().map(|&(x, y)| GridPoint::new(x, y)).collect();
        Terrain::validate(&points)
    }

    pub(crate) fn validate_with_limit(points: &[GridPoint], limit: i64) -> Result<Terrain, TerrainError> {
        let n = points.len();
        if n < 2 {
            return Err(TerrainError::TooFewVertices { count: n });
        }
        let mut prev_dir: Option<Dir> = None;
        for (i, p) in points.iter().enumerate() {
            if p.x.abs() > limit || p.y.abs() > limit {
                return Err(TerrainError::CoordinateOutOfRange { index: i, limit });
            }
            if i == 0 {
                continue;
            }
            let a = points[i - 1];
            if a == *p {
                return Err(TerrainError::DuplicateVertex { index: i });
            }
            if p.x < a.x {
                return Err(TerrainError::NotMonotone { index: i });
            }
            if p.x != a.x && p.y != a.y {
                return Err(TerrainError::NotOrthogonal { index: i });
            }
            let dir = Dir::of(a, *p);
            if let Some(prev) = prev_dir {
                if prev.is_vertical() == dir.is_vertical() {
                    return Err(TerrainError::ConsecutiveParallelEdges { index: i });
                }
            }
            prev_dir = Some(dir);
        }
        let classes = classify_points(points);
        let mut wall_partner = vec![None; n];
        for i in 0..n - 1 {
            if points[i].x == points[i + 1].x {
                wall_partner[i] = Some(i + 1);
                wall_partner[i + 1] = Some(i);
            }
        }
        Ok(Terrain { vertices: points.to_vec(), classes, wall_partner })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    #[inline]
    pub fn vertex(&self, i: usize) -> GridPoint {
        self.vertices[i]
    }

    pub fn vertices(&self) -> &[GridPoint] {
        &self.vertices
    }

    #[inline]
    pub fn class(&self, i: usize) -> VertexClass {
        self.classes[i]
    }

    pub fn classes(&self) -> &[VertexClass] {
        &self.classes
    }

    pub fn wall_partner(&self, i: usize) -> Option<usize> {
        self.wall_partner[i]
    }

    pub fn starts_vertical(&self) -> bool {
        self.vertices[0].x == self.vertices[1].x
    }

    pub fn ends_vertical(&self) -> bool {
        let n = self.len();
        self.vertices[n - 2].x == self.vertices[n - 1].x
    }

    pub fn has_vertical_ends(&self) -> bool {
        self.starts_vertical() && self.ends_vertical()
    }

    pub fn indices_of(&self, class: VertexClass) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.classes[i] == class).collect()
    }

    pub fn reflex_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.classes[i].is_reflex()).collect()
    }

    pub fn convex_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.classes[i].is_convex()).collect()
    }

    pub fn x_range(&self) -> (i64, i64) {
        (self.vertices[0].x, self.vertices[self.len() - 1].x)
    }
}

fn classify_points(points: &[GridPoint]) -> Vec<VertexClass> {
    let n = points.len();
    (0..n)
        .map(|i| {
            let incoming = if i == 0 {
                // Dummy horizontal before a vertical start; a flat start reads as
                // the top of an ascending wall.
                if Dir::of(points[0], points[1]).is_vertical() {
                    Dir::East
                } else {
                    Dir::North
                }
            } else {
                Dir::of(points[i - 1], points[i])
            };
            let outgoing = if i == n - 1 {
                if Dir::of(points[n - 2], points[n - 1]).is_vertical() {
                    Dir::East
                } else {
                    Dir::South
                }
            } else {
                Dir::of(points[i], points[i + 1])
            };
            classify_turn(incoming, outgoing)
        })
        .collect()
}

/// Per-vertex class of a validated terrain.
pub fn classify(t: &Terrain) -> Vec<VertexClass> {
    t.classes.clone()
}

/// `U(v)`: the reflex vertex on top of the wall whose bottom is the convex vertex `v`.
pub fn upper_vertex(t: &Terrain, v: usize) -> Result<usize, TerrainError> {
    let class = t.class(v);
    if !class.is_convex() {
        return Err(TerrainError::NotConvex { index: v, class });
    }
    t.wall_partner(v).ok_or(TerrainError::NoWallPartner { index: v })
}

/// Index correspondence between a terrain and its mirror image. It is an involution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MirrorMap {
    n: usize,
}

impl MirrorMap {
    #[inline]
    pub fn map(&self, i: usize) -> usize {
        self.n - 1 - i
    }
}

/// Reflect through x = 0 and reverse the vertex order.
pub fn mirror(t: &Terrain) -> (Terrain, MirrorMap) {
    let vertices: Vec<GridPoint> = t.vertices.iter().rev().map(|p| GridPoint::new(-p.x, p.y)).collect();
    let classes = t.classes.iter().rev().map(|c| c.mirrored()).collect();
    let n = t.len();
    let map = MirrorMap { n };
    let wall_partner = (0..n).map(|i| t.wall_partner[map.map(i)].map(|j| map.map(j))).collect();
    (Terrain { vertices, classes, wall_partner }, map)
}

/// A terrain with short walls added at its flat ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub terrain: Terrain,
    pub scale: i64,
    /// Index in the extended terrain of the vertex added above the leftmost vertex.
    pub added_left: Option<usize>,
    /// Index in the extended terrain of the vertex added above the rightmost vertex.
    pub added_right: Option<usize>,
    original_len: usize,
}

impl Extension {
    pub fn added(&self) -> BTreeSet<usize> {
        self.added_left.into_iter().chain(self.added_right).collect()
    }

    /// Index in the original terrain, or `None` for an added vertex.
    pub fn to_original(&self, ext_index: usize) -> Option<usize> {
        let offset = usize::from(self.added_left.is_some());
        let i = ext_index.checked_sub(offset)?;
        (i < self.original_len).then_some(i)
    }

    pub fn to_extended(&self, index: usize) -> usize {
        index + usize::from(self.added_left.is_some())
    }

    pub fn original_len(&self) -> usize {
        self.original_len
    }
}

/// Give a flat-ended terrain vertical ends by scaling it by
/// `s = 2 * (x_max - x_min + 1)` and raising a unit wall above each flat end,
/// so the wall height is `1/s` of an original unit. Returns `None` when both
/// ends are already vertical.
pub fn extend(t: &Terrain) -> Option<Extension> {
    if t.has_vertical_ends() {
        return None;
    }
    let (x_min, x_max) = t.x_range();
    let scale = 2 * (x_max - x_min + 1);
    let scaled = t.vertices.iter().map(|p| GridPoint::new(p.x * scale, p.y * scale));
    let mut points = Vec::with_capacity(t.len() + 2);
    let mut added_left = None;
    if !t.starts_vertical() {
        let u = t.vertices[0];
        points.push(GridPoint::new(u.x * scale, u.y * scale + 1));
        added_left = Some(0);
    }
    points.extend(scaled);
    let mut added_right = None;
    if !t.ends_vertical() {
        let v = t.vertices[t.len() - 1];
        added_right = Some(points.len());
        points.push(GridPoint::new(v.x * scale, v.y * scale + 1));
    }
    let max_abs = t.vertices.iter().map(|p| p.x.abs().max(p.y.abs())).max().unwrap_or(0);
    let limit = max_abs * scale + 1;
    let terrain = Terrain::validate_with_limit(&points, limit)
        .expect("scaling a valid terrain and adding end walls keeps it valid");
    Some(Extension { terrain, scale, added_left, added_right, original_len: t.len() })
}

/// Map a guard set of the extended terrain back to the original terrain.
///
/// An added vertex in the guard set is swapped for the lowest-indexed original
/// vertex that sees every vertex of the extended terrain that only the added
/// vertex covered. An added guard that covers nothing on its own is dropped.
pub fn retract_guards(
    t: &Terrain,
    ext: &Extension,
    guards_ext: &BTreeSet<usize>,
) -> Result<BTreeSet<usize>, TerrainError> {
    let witnesses: Vec<usize> = (0..ext.terrain.len()).collect();
    let replaced = replace_added_guards(ext, guards_ext, &witnesses)?;
    let out: BTreeSet<usize> = replaced
        .iter()
        .map(|&g| ext.to_original(g).expect("replacements are original vertices"))
        .collect();
    debug_assert!(out.iter().all(|&g| g < t.len()));
    Ok(out)
}

/// Replacement step of [`retract_guards`] over an arbitrary witness set, in
/// extended-terrain indices. Returns the new guard set (still extended indices).
pub(crate) fn replace_added_guards(
    ext: &Extension,
    guards_ext: &BTreeSet<usize>,
    witnesses: &[usize],
) -> Result<BTreeSet<usize>, TerrainError> {
    let te = &ext.terrain;
    let mut guards = guards_ext.clone();
    for added in ext.added() {
        if !guards.contains(&added) {
            continue;
        }
        let others: Vec<usize> = guards.iter().copied().filter(|&g| g != added).collect();
        let unique: Vec<usize> = witnesses
            .iter()
            .copied()
            .filter(|&w| visibility::sees(te, added, w) && !others.iter().any(|&g| visibility::sees(te, g, w)))
            .collect();
        guards.remove(&added);
        if unique.is_empty() {
            continue;
        }
        let replacement = (0..te.len())
            .filter(|i| !ext.added().contains(i))
            .find(|&g| unique.iter().all(|&w| visibility::sees(te, g, w)))
            .ok_or(TerrainError::NoReplacement { index: added })?;
        guards.insert(replacement);
    }
    Ok(guards)
}

/// The closed vertical extent `[y_low, y_high]` of the terrain at abscissa `x`.
pub fn height_range_at(t: &Terrain, x: &Rational) -> Result<(Rational, Rational), TerrainError> {
    let (lo, hi) = height_range_grid(t, x)?;
    Ok((lo.into(), hi.into()))
}

/// Integer form of [`height_range_at`]; terrain heights are always integers.
pub(crate) fn height_range_grid(t: &Terrain, x: &Rational) -> Result<(i64, i64), TerrainError> {
    let (x_min, x_max) = t.x_range();
    if x.cmp_int(x_min) == Ordering::Less || x.cmp_int(x_max) == Ordering::Greater {
        return Err(TerrainError::OutOfRange { x: x.clone() });
    }
    let vs = &t.vertices;
    // First vertex with vx >= x.
    let first = vs.partition_point(|p| x.cmp_int(p.x) == Ordering::Greater);
    if first < vs.len() && x.cmp_int(vs[first].x) == Ordering::Equal {
        let mut lo = vs[first].y;
        let mut hi = lo;
        let mut j = first + 1;
        while j < vs.len() && vs[j].x == vs[first].x {
            lo = lo.min(vs[j].y);
            hi = hi.max(vs[j].y);
            j += 1;
        }
        Ok((lo, hi))
    } else {
        // Strictly inside the horizontal edge ending at `first`.
        let y = vs[first - 1].y;
        Ok((y, y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use VertexClass::*;

    fn e1() -> Terrain {
        Terrain::from_coords(&[(0, 3), (0, 2), (2, 2), (2, 0), (5, 0), (5, 1), (7, 1), (7, 4)]).unwrap()
    }

    fn e2() -> Terrain {
        Terrain::from_coords(&[(0, 1), (2, 1), (2, 0), (4, 0), (4, 2), (6, 2)]).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert_eq!(e1().len(), 8);
        assert_eq!(
            Terrain::from_coords(&[(0, 0), (1, 1)]),
            Err(TerrainError::NotOrthogonal { index: 1 })
        );
        assert_eq!(
            Terrain::from_coords(&[(0, 0), (2, 0), (5, 0)]),
            Err(TerrainError::ConsecutiveParallelEdges { index: 2 })
        );
        assert_eq!(Terrain::from_coords(&[(0, 0)]), Err(TerrainError::TooFewVertices { count: 1 }));
        assert_eq!(
            Terrain::from_coords(&[(0, 0), (0, 0)]),
            Err(TerrainError::DuplicateVertex { index: 1 })
        );
        assert_eq!(
            Terrain::from_coords(&[(0, 0), (0, 1), (-2, 1)]),
            Err(TerrainError::NotMonotone { index: 2 })
        );
        assert_eq!(
            Terrain::from_coords(&[(0, 0), (0, COORD_LIMIT + 1)]),
            Err(TerrainError::CoordinateOutOfRange { index: 1, limit: COORD_LIMIT })
        );
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&e1()), vec![RightReflex, LeftConvex, RightReflex, LeftConvex, RightConvex, LeftReflex, RightConvex, LeftReflex]);
        assert_eq!(classify(&e2()), vec![LeftReflex, RightReflex, LeftConvex, RightConvex, LeftReflex, RightReflex]);
        let wall = Terrain::from_coords(&[(0, 0), (0, 5)]).unwrap();
        assert_eq!(classify(&wall), vec![RightConvex, LeftReflex]);
    }

    #[test]
    fn upper_vertex_examples() {
        let t = e1();
        assert_eq!(upper_vertex(&t, 1), Ok(0));
        assert_eq!(upper_vertex(&t, 4), Ok(5));
        assert_eq!(upper_vertex(&t, 0), Err(TerrainError::NotConvex { index: 0, class: RightReflex }));
    }

    #[test]
    fn mirror_examples() {
        let t = e1();
        let (m, map) = mirror(&t);
        assert_eq!(map.map(2), 5);
        assert_eq!(m.vertex(5), GridPoint::new(-2, 2));
        assert_eq!(m.class(5), LeftReflex);
        assert_eq!(mirror(&m).0, t);
        let wall = Terrain::from_coords(&[(0, 0), (0, 5)]).unwrap();
        let (mw, _) = mirror(&wall);
        assert_eq!(mw.vertices(), &[GridPoint::new(0, 5), GridPoint::new(0, 0)]);
        assert_eq!(classify(&mw), vec![RightReflex, LeftConvex]);
        // reflected list validates to the same classes
        assert_eq!(&mw, &Terrain::validate(mw.vertices()).unwrap());
    }

    #[test]
    fn extend_examples() {
        let ext = extend(&e2()).unwrap();
        assert_eq!(ext.scale, 14);
        assert_eq!(ext.terrain.len(), 8);
        assert_eq!(ext.terrain.vertex(0), GridPoint::new(0, 15));
        assert_eq!(ext.terrain.vertex(1), GridPoint::new(0, 14));
        assert_eq!(ext.terrain.vertex(7), GridPoint::new(84, 29));
        assert_eq!(ext.terrain.vertex(6), GridPoint::new(84, 28));
        assert!(ext.terrain.has_vertical_ends());
        assert_eq!(ext.added().into_iter().collect::<Vec<_>>(), vec![0, 7]);
        assert_eq!(ext.to_original(0), None);
        assert_eq!(ext.to_original(3), Some(2));
        assert!(extend(&e1()).is_none());

        let one_sided = Terrain::from_coords(&[(0, 3), (0, 1), (4, 1)]).unwrap();
        let ext = extend(&one_sided).unwrap();
        assert_eq!(ext.added_left, None);
        assert_eq!(ext.added_right, Some(3));
        assert_eq!(ext.terrain.vertex(3), GridPoint::new(40, 11));
    }

    #[test]
    fn retract_identity_when_nothing_added_is_used() {
        let t = e2();
        let ext = extend(&t).unwrap();
        let guards: BTreeSet<usize> = [2, 5].into_iter().collect();
        let out = retract_guards(&t, &ext, &guards).unwrap();
        assert_eq!(out, [1, 4].into_iter().collect());
    }

    #[test]
    fn retract_replaces_added_vertex() {
        let t = e2();
        let ext = extend(&t).unwrap();
        // v' (index 7) alone covers the right end; pair it with a guard for the rest.
        let te = &ext.terrain;
        let left_guard = (0..te.len())
            .find(|&g| (0..te.len()).filter(|&w| !visibility::sees(te, 7, w)).all(|w| visibility::sees(te, g, w)))
            .unwrap();
        let guards: BTreeSet<usize> = [left_guard, 7].into_iter().collect();
        let out = retract_guards(&t, &ext, &guards).unwrap();
        assert!(out.len() <= guards.len());
        for w in 0..t.len() {
            assert!(out.iter().any(|&g| visibility::sees(&t, g, w)), "vertex {w} uncovered");
        }
    }

    #[test]
    fn height_range_examples() {
        let t = e1();
        let r = |x: i64| height_range_at(&t, &x.into()).unwrap();
        assert_eq!(r(2), (0.into(), 2.into()));
        assert_eq!(r(3), (0.into(), 0.into()));
        assert_eq!(r(7), (1.into(), 4.into()));
        assert_eq!(
            height_range_at(&t, &Rational::new(13, 2).unwrap()).unwrap(),
            (1.into(), 1.into())
        );
        assert!(height_range_at(&t, &8.into()).is_err());
        assert!(height_range_at(&t, &Rational::new(-1, 2).unwrap()).is_err());
    }
}
