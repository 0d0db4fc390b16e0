//! Lattice points, the (Z₂)² parity calculus, and validated lattice polygons.
//!
//! Every predicate here is exact: orientations and intersections are decided
//! with integer cross products widened to `i128`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Sub};

use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("degenerate segment: both endpoints are {0}")]
    DegenerateSegment(LatticePoint),
    #[error("a polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex {0} has a negative coordinate")]
    NegativeCoordinate(LatticePoint),
    #[error("edges meeting at vertex {0} are collinear")]
    CollinearConsecutiveEdges(LatticePoint),
    #[error("boundary is not simple: {0}")]
    NotSimple(String),
}

/// An element of (Z₂)². `(0,0)` is the even parity, the other three are odd.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Parity {
    x: u8,
    y: u8,
}

impl Parity {
    pub const EVEN: Parity = Parity { x: 0, y: 0 };
    pub const ALL: [Parity; 4] =
        [Parity { x: 0, y: 0 }, Parity { x: 0, y: 1 }, Parity { x: 1, y: 0 }, Parity { x: 1, y: 1 }];

    pub const fn new(x: u8, y: u8) -> Self {
        Parity { x: x & 1, y: y & 1 }
    }

    pub const fn x(self) -> u8 {
        self.x
    }

    pub const fn y(self) -> u8 {
        self.y
    }

    pub const fn is_even(self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub const fn is_odd(self) -> bool {
        !self.is_even()
    }

    /// The pairing ⟨(a,b),(c,d)⟩ = ac + bd mod 2.
    pub const fn dot(self, other: Parity) -> u8 {
        (self.x & other.x) ^ (self.y & other.y)
    }

    /// `(a,b) -> (b,a)`. For an odd parity this is the unique nonzero
    /// element orthogonal to it.
    pub const fn swapped(self) -> Parity {
        Parity { x: self.y, y: self.x }
    }

    /// Position in [`Parity::ALL`].
    pub const fn index(self) -> usize {
        (self.x as usize) * 2 + self.y as usize
    }

    pub const fn from_index(i: usize) -> Parity {
        Parity::new((i >> 1) as u8, (i & 1) as u8)
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity { x: self.x ^ rhs.x, y: self.y ^ rhs.y }
    }
}

impl fmt::Debug for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }

    pub fn parity(self) -> Parity {
        Parity::new(self.x.rem_euclid(2) as u8, self.y.rem_euclid(2) as u8)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl Add for LatticePoint {
    type Output = LatticePoint;
    fn add(self, rhs: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for LatticePoint {
    type Output = LatticePoint;
    fn sub(self, rhs: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl From<(i64, i64)> for LatticePoint {
    fn from((x, y): (i64, i64)) -> Self {
        LatticePoint::new(x, y)
    }
}

/// Twice the signed area of the triangle `a, b, c` (positive when counterclockwise).
pub fn orient(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> i128 {
    let (abx, aby) = ((b.x - a.x) as i128, (b.y - a.y) as i128);
    let (acx, acy) = ((c.x - a.x) as i128, (c.y - a.y) as i128);
    abx * acy - aby * acx
}

/// `p` lies on the closed segment `[a, b]`.
pub fn on_segment(a: LatticePoint, b: LatticePoint, p: LatticePoint) -> bool {
    orient(a, b, p) == 0 && p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed segments `[a, b]` and `[c, d]` share at least one point.
pub fn segments_intersect(a: LatticePoint, b: LatticePoint, c: LatticePoint, d: LatticePoint) -> bool {
    let d1 = orient(c, d, a).signum();
    let d2 = orient(c, d, b).signum();
    let d3 = orient(a, b, c).signum();
    let d4 = orient(a, b, d).signum();
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    (d1 == 0 && on_segment(c, d, a))
        || (d2 == 0 && on_segment(c, d, b))
        || (d3 == 0 && on_segment(a, b, c))
        || (d4 == 0 && on_segment(a, b, d))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct LatticeSegment {
    p: LatticePoint,
    q: LatticePoint,
}

impl LatticeSegment {
    pub fn new(p: LatticePoint, q: LatticePoint) -> Result<Self, LatticeError> {
        if p == q {
            return Err(LatticeError::DegenerateSegment(p));
        }
        Ok(LatticeSegment { p, q })
    }

    pub fn start(&self) -> LatticePoint {
        self.p
    }

    pub fn end(&self) -> LatticePoint {
        self.q
    }

    /// Number of primitive segments it contains.
    pub fn integral_length(&self) -> i64 {
        let d = self.q - self.p;
        d.x.abs().gcd(&d.y.abs())
    }

    pub fn is_primitive(&self) -> bool {
        self.integral_length() == 1
    }

    /// The primitive vector pointing from `start` toward `end`.
    pub fn primitive_direction(&self) -> LatticePoint {
        let d = self.q - self.p;
        let n = self.integral_length();
        LatticePoint::new(d.x / n, d.y / n)
    }

    /// All lattice points of the segment, from `start` to `end`.
    pub fn lattice_points(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        let step = self.primitive_direction();
        (0..=self.integral_length()).map(move |k| LatticePoint::new(self.p.x + k * step.x, self.p.y + k * step.y))
    }

    /// Sum of the two parity values taken by the lattice points of the
    /// segment; equal to the parity of the primitive direction, never even.
    pub fn parity(&self) -> Parity {
        self.primitive_direction().parity()
    }
}

/// Where a point sits relative to a polygon.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Location {
    Interior,
    /// On the boundary; the index of one polygon edge containing it.
    Boundary(usize),
    Exterior,
}

/// A maximal boundary arc between consecutive odd-parity vertices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BrokenEdge {
    /// Polygon edge indices, in counterclockwise order.
    pub edges: Vec<usize>,
    /// Common parity of the segments of the broken edge.
    pub segment_parity: Parity,
    /// Sum of the parities of its polygon edges.
    pub broken_parity: Parity,
    pub integral_length: i64,
    /// `(start, end)` odd vertices; `None` when the polygon has no odd vertex
    /// and the broken edge is the whole boundary.
    pub endpoints: Option<(LatticePoint, LatticePoint)>,
}

impl BrokenEdge {
    pub fn is_odd(&self) -> bool {
        self.broken_parity.is_odd()
    }

    /// Lattice points along the broken edge, counterclockwise. For a closed
    /// broken edge the first point is not repeated at the end.
    pub fn lattice_points(&self, polygon: &LatticePolygon) -> Vec<LatticePoint> {
        let mut out = Vec::new();
        for &e in &self.edges {
            let seg = polygon.edge_segment(e);
            out.extend(seg.lattice_points().take(seg.integral_length() as usize));
        }
        if self.endpoints.is_some() {
            let last = *self.edges.last().expect("broken edge has an edge");
            out.push(polygon.vertex((last + 1) % polygon.len()));
        }
        out
    }
}

/// Lattice point counts of a polygon.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LatticeCensus {
    /// All lattice points of the closed polygon.
    pub total: usize,
    /// Integral length of the boundary.
    pub boundary: usize,
    pub interior: usize,
    /// Interior points by parity, indexed by [`Parity::index`].
    pub interior_by_parity: [usize; 4],
    pub broken_edge_lengths: Vec<i64>,
}

impl LatticeCensus {
    pub fn interior_with_parity(&self, p: Parity) -> usize {
        self.interior_by_parity[p.index()]
    }
}

/// A simple lattice polygon in the closed nonnegative quadrant, stored
/// counterclockwise.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LatticePolygon {
    vertices: Vec<LatticePoint>,
    points: Vec<LatticePoint>,
    index: BTreeMap<LatticePoint, usize>,
    broken: Vec<BrokenEdge>,
}

impl LatticePolygon {
    /// Validates the vertex cycle and derives parities, broken edges and
    /// the sorted lattice point list. Clockwise input is reversed.
    pub fn new(vertices: Vec<LatticePoint>) -> Result<Self, LatticeError> {
        let n = vertices.len();
        if n < 3 {
            return Err(LatticeError::TooFewVertices(n));
        }
        if let Some(&v) = vertices.iter().find(|v| v.x < 0 || v.y < 0) {
            return Err(LatticeError::NegativeCoordinate(v));
        }
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(LatticeError::NotSimple(format!("repeated consecutive vertex {}", vertices[i])));
            }
        }
        for i in 0..n {
            let (a, b, c) = (vertices[(i + n - 1) % n], vertices[i], vertices[(i + 1) % n]);
            if orient(a, b, c) == 0 {
                return Err(LatticeError::CollinearConsecutiveEdges(b));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    continue;
                }
                let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                let (c, d) = (vertices[j], vertices[(j + 1) % n]);
                if segments_intersect(a, b, c, d) {
                    return Err(LatticeError::NotSimple(format!("edges {a}-{b} and {c}-{d} intersect")));
                }
            }
        }
        let mut vertices = vertices;
        let twice_area: i128 = (0..n).map(|i| cross(vertices[i], vertices[(i + 1) % n])).sum();
        if twice_area < 0 {
            vertices.reverse();
        }
        let mut polygon = LatticePolygon { vertices, points: Vec::new(), index: BTreeMap::new(), broken: Vec::new() };
        polygon.points = polygon.enumerate_lattice_points();
        polygon.index = polygon.points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        polygon.broken = polygon.decompose_broken_edges();
        Ok(polygon)
    }

    pub fn from_coords(coords: &[(i64, i64)]) -> Result<Self, LatticeError> {
        Self::new(coords.iter().map(|&c| c.into()).collect())
    }

    /// The triangle with vertices (0,0), (d,0), (0,d).
    pub fn standard_triangle(d: i64) -> Self {
        Self::from_coords(&[(0, 0), (d, 0), (0, d)]).expect("standard triangle is valid")
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> LatticePoint {
        self.vertices[i % self.vertices.len()]
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1`.
    pub fn edge_segment(&self, i: usize) -> LatticeSegment {
        LatticeSegment { p: self.vertex(i), q: self.vertex(i + 1) }
    }

    pub fn edge_segment_parity(&self, i: usize) -> Parity {
        self.edge_segment(i).parity()
    }

    /// Sum of the segment parities of the two edges meeting at vertex `i`.
    pub fn vertex_parity(&self, i: usize) -> Parity {
        let n = self.len();
        self.edge_segment_parity((i + n - 1) % n) + self.edge_segment_parity(i)
    }

    /// Sum of the vertex parities at the two ends of edge `i`.
    pub fn edge_parity(&self, i: usize) -> Parity {
        self.vertex_parity(i) + self.vertex_parity((i + 1) % self.len())
    }

    pub fn odd_vertices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.vertex_parity(i).is_odd()).collect()
    }

    /// Twice the (positive) area.
    pub fn twice_area(&self) -> i128 {
        let n = self.len();
        (0..n).map(|i| cross(self.vertices[i], self.vertices[(i + 1) % n])).sum()
    }

    pub fn boundary_length(&self) -> i64 {
        (0..self.len()).map(|i| self.edge_segment(i).integral_length()).sum()
    }

    pub fn locate(&self, p: LatticePoint) -> Location {
        let n = self.len();
        for i in 0..n {
            if on_segment(self.vertex(i), self.vertex(i + 1), p) {
                return Location::Boundary(i);
            }
        }
        // Crossing number with the horizontal ray to the right of p.
        let mut inside = false;
        for i in 0..n {
            let (a, b) = (self.vertex(i), self.vertex(i + 1));
            if (a.y > p.y) != (b.y > p.y) {
                let o = orient(a, b, p);
                if (o > 0) == (b.y > a.y) {
                    inside = !inside;
                }
            }
        }
        if inside {
            Location::Interior
        } else {
            Location::Exterior
        }
    }

    /// All polygon edges containing the point.
    pub fn edges_containing(&self, p: LatticePoint) -> Vec<usize> {
        (0..self.len()).filter(|&i| on_segment(self.vertex(i), self.vertex(i + 1), p)).collect()
    }

    /// The lattice points of the closed polygon, sorted lexicographically.
    pub fn lattice_points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn point_index(&self, p: LatticePoint) -> Option<usize> {
        self.index.get(&p).copied()
    }

    pub fn broken_edges(&self) -> &[BrokenEdge] {
        &self.broken
    }

    /// Index of the broken edge containing polygon edge `e`.
    pub fn broken_edge_of(&self, e: usize) -> usize {
        self.broken.iter().position(|b| b.edges.contains(&e)).expect("every polygon edge lies in a broken edge")
    }

    pub fn census(&self) -> LatticeCensus {
        let mut interior_by_parity = [0; 4];
        let mut boundary = 0;
        for &p in &self.points {
            match self.locate(p) {
                Location::Interior => interior_by_parity[p.parity().index()] += 1,
                Location::Boundary(_) => boundary += 1,
                Location::Exterior => unreachable!("enumerated points lie in the polygon"),
            }
        }
        LatticeCensus {
            total: self.points.len(),
            boundary,
            interior: interior_by_parity.iter().sum(),
            interior_by_parity,
            broken_edge_lengths: self.broken.iter().map(|b| b.integral_length).collect(),
        }
    }

    fn enumerate_lattice_points(&self) -> Vec<LatticePoint> {
        let max_x = self.vertices.iter().map(|v| v.x).max().unwrap_or(0);
        let max_y = self.vertices.iter().map(|v| v.y).max().unwrap_or(0);
        let min_x = self.vertices.iter().map(|v| v.x).min().unwrap_or(0);
        let min_y = self.vertices.iter().map(|v| v.y).min().unwrap_or(0);
        let mut out = Vec::new();
        for x in min_x..=max_x {
            for y in min_y..=max_y {
                let p = LatticePoint::new(x, y);
                if self.locate(p) != Location::Exterior {
                    out.push(p);
                }
            }
        }
        out
    }

    fn decompose_broken_edges(&self) -> Vec<BrokenEdge> {
        let n = self.len();
        let odd = self.odd_vertices();
        let make = |edges: Vec<usize>, endpoints: Option<(LatticePoint, LatticePoint)>| {
            let segment_parity = self.edge_segment_parity(edges[0]);
            debug_assert!(edges.iter().all(|&e| self.edge_segment_parity(e) == segment_parity));
            let broken_parity = edges.iter().fold(Parity::EVEN, |acc, &e| acc + self.edge_parity(e));
            let integral_length = edges.iter().map(|&e| self.edge_segment(e).integral_length()).sum();
            BrokenEdge { edges, segment_parity, broken_parity, integral_length, endpoints }
        };
        if odd.is_empty() {
            return vec![make((0..n).collect(), None)];
        }
        let start = odd.iter().copied().min_by_key(|&i| self.vertices[i]).expect("nonempty");
        let k = odd.iter().position(|&i| i == start).expect("present");
        let ordered: Vec<usize> = odd[k..].iter().chain(&odd[..k]).copied().collect();
        let r = ordered.len();
        (0..r)
            .map(|j| {
                let (from, to) = (ordered[j], ordered[(j + 1) % r]);
                let count = if r == 1 { n } else { (to + n - from) % n };
                let edges = (0..count).map(|s| (from + s) % n).collect();
                make(edges, Some((self.vertices[from], self.vertices[to])))
            })
            .collect()
    }
}

fn cross(a: LatticePoint, b: LatticePoint) -> i128 {
    a.x as i128 * b.y as i128 - a.y as i128 * b.x as i128
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    /// Enumeration oracle: sum of the distinct parities met along the segment.
    fn segment_parity_by_enumeration(p: LatticePoint, q: LatticePoint) -> Parity {
        let (dx, dy) = (q.x - p.x, q.y - p.y);
        let steps = dx.abs().max(dy.abs());
        let mut seen: Vec<Parity> = Vec::new();
        for k in 0..=steps {
            // A point of the segment is integral iff both coordinates are.
            if (k * dx) % steps == 0 && (k * dy) % steps == 0 {
                let par = pt(p.x + k * dx / steps, p.y + k * dy / steps).parity();
                if !seen.contains(&par) {
                    seen.push(par);
                }
            }
        }
        assert_eq!(seen.len(), 2, "a segment meets exactly two parity values");
        seen[0] + seen[1]
    }

    #[test]
    fn point_parity() {
        assert_eq!(pt(3, 4).parity(), Parity::new(1, 0));
        assert_eq!(pt(0, 0).parity(), Parity::EVEN);
    }

    #[test]
    fn segment_parity_examples() {
        let s = LatticeSegment::new(pt(0, 0), pt(2, 1)).unwrap();
        assert_eq!(s.parity(), segment_parity_by_enumeration(pt(0, 0), pt(2, 1)));
        assert_eq!(s.parity(), Parity::new(0, 1));
        let s = LatticeSegment::new(pt(0, 0), pt(2, 0)).unwrap();
        assert_eq!(s.parity(), Parity::new(1, 0));
        assert_eq!(s.integral_length(), 2);
        assert!(matches!(LatticeSegment::new(pt(1, 1), pt(1, 1)), Err(LatticeError::DegenerateSegment(_))));
    }

    #[test]
    fn standard_triangle_parities() {
        let t5 = LatticePolygon::standard_triangle(5);
        let vp: Vec<Parity> = (0..3).map(|i| t5.vertex_parity(i)).collect();
        assert_eq!(vp, vec![Parity::new(1, 1), Parity::new(0, 1), Parity::new(1, 0)]);
        let ep: Vec<Parity> = (0..3).map(|i| t5.edge_segment_parity(i)).collect();
        assert_eq!(ep, vec![Parity::new(1, 0), Parity::new(1, 1), Parity::new(0, 1)]);
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            LatticePolygon::from_coords(&[(0, 0), (2, 0), (4, 0), (0, 3)]),
            Err(LatticeError::CollinearConsecutiveEdges(_))
        ));
        assert!(matches!(
            LatticePolygon::from_coords(&[(0, 0), (-1, 2), (2, 2)]),
            Err(LatticeError::NegativeCoordinate(_))
        ));
        assert!(matches!(LatticePolygon::from_coords(&[(0, 0), (1, 0)]), Err(LatticeError::TooFewVertices(2))));
        assert!(matches!(
            LatticePolygon::from_coords(&[(0, 0), (2, 2), (2, 0), (0, 2)]),
            Err(LatticeError::NotSimple(_))
        ));
        // Backtracking spike: collinear at the tip.
        assert!(LatticePolygon::from_coords(&[(0, 0), (3, 0), (1, 0), (0, 2)]).is_err());
    }

    #[test]
    fn clockwise_input_is_reoriented() {
        let p = LatticePolygon::from_coords(&[(0, 0), (0, 3), (3, 0)]).unwrap();
        assert!(p.twice_area() > 0);
        assert_eq!(p.twice_area(), 9);
    }

    #[test]
    fn broken_edges_of_standard_triangle() {
        for d in 1..6 {
            let t = LatticePolygon::standard_triangle(d);
            let b = t.broken_edges();
            assert_eq!(b.len(), 3);
            let pars: Vec<Parity> = b.iter().map(|e| e.segment_parity).collect();
            assert_eq!(pars, vec![Parity::new(1, 0), Parity::new(1, 1), Parity::new(0, 1)]);
            assert!(b.iter().all(|e| e.integral_length == d && e.is_odd()));
        }
    }

    #[test]
    fn broken_edges_two_and_one() {
        let p = LatticePolygon::from_coords(&[(0, 0), (6, 0), (0, 3)]).unwrap();
        let b = p.broken_edges();
        assert_eq!(b.len(), 2);
        assert_eq!(b[0].segment_parity, Parity::new(1, 0));
        assert_eq!(b[0].edges, vec![0]);
        assert_eq!(b[1].segment_parity, Parity::new(0, 1));
        assert_eq!(b[1].edges, vec![1, 2]);
        assert_eq!(b[0].broken_parity, Parity::EVEN);
        assert_eq!(p.vertex_parity(2), Parity::EVEN);

        let diamond = LatticePolygon::from_coords(&[(1, 0), (2, 1), (1, 2), (0, 1)]).unwrap();
        let b = diamond.broken_edges();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].segment_parity, Parity::new(1, 1));
        assert_eq!(b[0].endpoints, None);
        assert_eq!(b[0].integral_length, 4);
        assert_eq!(b[0].lattice_points(&diamond).len(), 4);
    }

    #[test]
    fn census_examples() {
        let t3 = LatticePolygon::standard_triangle(3).census();
        assert_eq!((t3.total, t3.boundary, t3.interior), (10, 9, 1));
        let t5 = LatticePolygon::standard_triangle(5).census();
        assert_eq!(t5.interior, 6);
        assert_eq!(t5.interior_with_parity(Parity::new(0, 0)), 1);
        assert_eq!(t5.interior_with_parity(Parity::new(1, 1)), 3);
        assert_eq!(t5.interior_with_parity(Parity::new(1, 0)), 1);
        assert_eq!(t5.interior_with_parity(Parity::new(0, 1)), 1);
        assert_eq!(LatticePolygon::standard_triangle(1).census().interior, 0);
    }

    #[test]
    fn broken_edge_points_run_between_odd_vertices() {
        let t = LatticePolygon::standard_triangle(3);
        let pts = t.broken_edges()[1].lattice_points(&t);
        assert_eq!(pts, vec![pt(3, 0), pt(2, 1), pt(1, 2), pt(0, 3)]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn segment_parity_is_odd_and_matches_enumeration(
                px in 0i64..12, py in 0i64..12, qx in 0i64..12, qy in 0i64..12
            ) {
                prop_assume!((px, py) != (qx, qy));
                let s = LatticeSegment::new(pt(px, py), pt(qx, qy)).unwrap();
                prop_assert!(s.parity().is_odd());
                prop_assert_eq!(s.parity(), segment_parity_by_enumeration(pt(px, py), pt(qx, qy)));
            }

            #[test]
            fn polygon_invariants(coords in proptest::collection::vec((0i64..7, 0i64..7), 3..7)) {
                let Ok(p) = LatticePolygon::from_coords(&coords) else { return Ok(()); };
                prop_assert_ne!(p.odd_vertices().len(), 1);
                let census = p.census();
                // Pick: 2A = 2i + L - 2.
                prop_assert_eq!(p.twice_area(), 2 * census.interior as i128 + census.boundary as i128 - 2);
                prop_assert_eq!(census.boundary as i64, p.boundary_length());
                let n = p.len();
                for b in p.broken_edges() {
                    prop_assert!(b.edges.iter().all(|&e| p.edge_segment_parity(e) == b.segment_parity));
                    if let Some((u, v)) = b.endpoints {
                        let iu = p.vertices().iter().position(|&w| w == u).unwrap();
                        let iv = p.vertices().iter().position(|&w| w == v).unwrap();
                        prop_assert_eq!(b.broken_parity, p.vertex_parity(iu) + p.vertex_parity(iv));
                    }
                }
                let covered: usize = p.broken_edges().iter().map(|b| b.edges.len()).sum();
                prop_assert_eq!(covered, n);
            }
        }
    }
}
