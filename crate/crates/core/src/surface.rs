//! The ambient surface S(Π): four reflected copies of a lattice polygon glued
//! along their boundaries, its canonical atlas of charts, and its topology.
//!
//! The surface is purely combinatorial. A point of S(Π) over a lattice point
//! `p` of Π is a class of pairs `(quadrant, p)`; two pairs are identified when
//! `p` lies on a polygon edge of segment parity `(c,d)` and the quadrants differ
//! by the unique nonzero `(a,b)` with ⟨(a,b),(c,d)⟩ = 0.

use std::fmt;
use std::ops::{Add, Mul};

use thiserror::Error;

use crate::dsu::UnionFind;
use crate::lattice::{BrokenEdge, LatticePoint, LatticePolygon, Parity};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("canonical atlas needs at least 3 broken edges, polygon has {0}")]
    DegenerateAtlas(usize),
    #[error("tubular neighbourhoods are defined for at least 2 broken edges, polygon has {0}")]
    NoBrokenEdgeCircle(usize),
    #[error("broken edge index {0} out of range")]
    NoSuchBrokenEdge(usize),
}

/// Label `(a,b)` of the reflection σ_{a,b}: (x,y) ↦ ((-1)^a x, (-1)^b y).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Quadrant(Parity);

impl Quadrant {
    pub const ALL: [Quadrant; 4] =
        [Quadrant(Parity::ALL[0]), Quadrant(Parity::ALL[1]), Quadrant(Parity::ALL[2]), Quadrant(Parity::ALL[3])];
    pub const POSITIVE: Quadrant = Quadrant(Parity::EVEN);

    pub const fn new(a: u8, b: u8) -> Self {
        Quadrant(Parity::new(a, b))
    }

    pub const fn from_parity(p: Parity) -> Self {
        Quadrant(p)
    }

    pub const fn as_parity(self) -> Parity {
        self.0
    }

    pub const fn a(self) -> u8 {
        self.0.x()
    }

    pub const fn b(self) -> u8 {
        self.0.y()
    }

    pub const fn index(self) -> usize {
        self.0.index()
    }

    pub const fn from_index(i: usize) -> Self {
        Quadrant(Parity::from_index(i))
    }

    /// σ_{a,b} applied to a point of the plane.
    pub fn reflect(self, p: LatticePoint) -> LatticePoint {
        let sx = if self.a() == 1 { -1 } else { 1 };
        let sy = if self.b() == 1 { -1 } else { 1 };
        LatticePoint::new(sx * p.x, sy * p.y)
    }
}

impl Add for Quadrant {
    type Output = Quadrant;
    fn add(self, rhs: Quadrant) -> Quadrant {
        Quadrant(self.0 + rhs.0)
    }
}

impl fmt::Debug for Quadrant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q{:?}", self.0)
    }
}

impl fmt::Display for Quadrant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a(), self.b())
    }
}

/// 2×2 matrix over Z₂, row-major.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Mat2(pub [[u8; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1, 0], [0, 1]]);

    /// Matrix whose columns are the given parities.
    pub fn from_columns(c0: Parity, c1: Parity) -> Self {
        Mat2([[c0.x(), c1.x()], [c0.y(), c1.y()]])
    }

    pub fn column(&self, j: usize) -> Parity {
        Parity::new(self.0[0][j], self.0[1][j])
    }

    pub fn determinant(&self) -> u8 {
        (self.0[0][0] & self.0[1][1]) ^ (self.0[0][1] & self.0[1][0])
    }

    pub fn is_invertible(&self) -> bool {
        self.determinant() == 1
    }

    /// Row vector times matrix: `(c,d) · M`.
    pub fn left_apply(&self, v: Parity) -> Parity {
        Parity::new((v.x() & self.0[0][0]) ^ (v.y() & self.0[1][0]), (v.x() & self.0[0][1]) ^ (v.y() & self.0[1][1]))
    }

    pub fn inverse(&self) -> Option<Mat2> {
        // Over Z₂ the adjugate is the inverse when det = 1.
        self.is_invertible().then(|| Mat2([[self.0[1][1], self.0[0][1]], [self.0[1][0], self.0[0][0]]]))
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let mut out = [[0u8; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (self.0[i][0] & rhs.0[0][j]) ^ (self.0[i][1] & rhs.0[1][j]);
            }
        }
        Mat2(out)
    }
}

/// Gluing transformation between consecutive charts.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum GluingMatrix {
    /// `[[0,1],[1,0]]`, across a broken edge of even parity.
    A0,
    /// `[[0,1],[1,1]]`, across a broken edge of odd parity.
    A1,
}

impl GluingMatrix {
    pub fn for_eta(eta: u8) -> Self {
        if eta & 1 == 0 {
            GluingMatrix::A0
        } else {
            GluingMatrix::A1
        }
    }

    pub fn matrix(self) -> Mat2 {
        match self {
            GluingMatrix::A0 => Mat2([[0, 1], [1, 0]]),
            GluingMatrix::A1 => Mat2([[0, 1], [1, 1]]),
        }
    }
}

/// Parity matrix of a chart: columns are the segment parities of its two axes.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ParityMatrix(pub Mat2);

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Chart {
    pub index: usize,
    /// The odd vertex where the two axes meet.
    pub center: LatticePoint,
    /// Broken-edge indices mapped onto the horizontal and vertical axes.
    pub axes: (usize, usize),
    pub parity_matrix: ParityMatrix,
    /// `quadrant_map[q.index()]` is the chart label of surface quadrant `q`.
    pub quadrant_map: [Quadrant; 4],
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Atlas {
    /// Chart `j` is centered at the end of broken edge `j`, with axes `j` and `j+1`.
    pub charts: Vec<Chart>,
    /// η of each broken edge: 1 when its broken parity is odd.
    pub eta: Vec<u8>,
    /// `gluings[j]` carries chart `j-1` to chart `j` (cyclically): M_j = M_{j-1}·A.
    pub gluings: Vec<GluingMatrix>,
}

impl Atlas {
    /// Gluing transformation from chart `i` to chart `j` going forward.
    pub fn transition(&self, i: usize, j: usize) -> Mat2 {
        let r = self.charts.len();
        let steps = (j + r - i) % r;
        (1..=steps).fold(Mat2::IDENTITY, |acc, k| acc * self.gluings[(i + k) % r].matrix())
    }

    /// Product of all consecutive gluing matrices around the cycle.
    pub fn cyclic_product(&self) -> Mat2 {
        let r = self.charts.len();
        (1..=r).fold(Mat2::IDENTITY, |acc, k| acc * self.gluings[k % r].matrix())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Tubular {
    Annulus,
    Moebius,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TopologyClass {
    pub components: u32,
    pub orientable: bool,
    /// Genus of each component when orientable.
    pub genus: Option<u32>,
    /// Number of projective-plane summands when non-orientable.
    pub crosscaps: Option<u32>,
    pub euler_characteristic: i64,
    pub name: String,
}

impl TopologyClass {
    pub fn orientable(components: u32, genus: u32) -> Self {
        let name = match (components, genus) {
            (1, 0) => "sphere".to_string(),
            (2, 0) => "two spheres".to_string(),
            (1, 1) => "torus".to_string(),
            (1, g) => format!("connected sum of {g} tori"),
            (c, g) => format!("{c} copies of a genus-{g} surface"),
        };
        TopologyClass {
            components,
            orientable: true,
            genus: Some(genus),
            crosscaps: None,
            euler_characteristic: components as i64 * (2 - 2 * genus as i64),
            name,
        }
    }

    pub fn non_orientable(crosscaps: u32) -> Self {
        let name = match crosscaps {
            1 => "RP²".to_string(),
            2 => "Klein bottle".to_string(),
            k => format!("connected sum of {k} projective planes"),
        };
        TopologyClass {
            components: 1,
            orientable: false,
            genus: None,
            crosscaps: Some(crosscaps),
            euler_characteristic: 2 - crosscaps as i64,
            name,
        }
    }

    /// Classification of a connected closed surface from χ and orientability.
    pub fn from_euler(chi: i64, orientable: bool) -> Self {
        if orientable {
            Self::orientable(1, ((2 - chi) / 2) as u32)
        } else {
            Self::non_orientable((2 - chi) as u32)
        }
    }
}

impl fmt::Display for TopologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SurfaceVertex {
    /// Index of the underlying lattice point in `polygon.lattice_points()`.
    pub point: usize,
    /// Bit `q.index()` set for each quadrant copy glued into this vertex.
    pub quadrants: u8,
}

impl SurfaceVertex {
    pub fn quadrants(&self) -> impl Iterator<Item = Quadrant> + '_ {
        Quadrant::ALL.into_iter().filter(|q| self.quadrants & (1 << q.index()) != 0)
    }

    /// Smallest quadrant label among the glued copies.
    pub fn first_quadrant(&self) -> Quadrant {
        Quadrant::from_index(self.quadrants.trailing_zeros() as usize)
    }
}

#[derive(Clone, Debug)]
pub struct AmbientSurface {
    polygon: LatticePolygon,
    vertex_of: Vec<[usize; 4]>,
    vertices: Vec<SurfaceVertex>,
    lifts: Vec<Vec<usize>>,
}

impl AmbientSurface {
    pub fn build(polygon: &LatticePolygon) -> Self {
        let points = polygon.lattice_points();
        let mut uf = UnionFind::new(points.len() * 4);
        let node = |p: usize, q: Quadrant| 4 * p + q.index();
        for e in 0..polygon.len() {
            let glue = Self::glue_for_parity(polygon.edge_segment_parity(e));
            for p in polygon.edge_segment(e).lattice_points() {
                let pi = polygon.point_index(p).expect("boundary point is a lattice point of the polygon");
                for q in Quadrant::ALL {
                    uf.union(node(pi, q), node(pi, q + glue));
                }
            }
        }
        let (labels, count) = uf.class_labels();
        let mut vertices = vec![SurfaceVertex { point: 0, quadrants: 0 }; count];
        let mut vertex_of = vec![[0usize; 4]; points.len()];
        for (pi, slots) in vertex_of.iter_mut().enumerate() {
            for q in Quadrant::ALL {
                let v = labels[node(pi, q)];
                slots[q.index()] = v;
                vertices[v].point = pi;
                vertices[v].quadrants |= 1 << q.index();
            }
        }
        let mut surface = AmbientSurface { polygon: polygon.clone(), vertex_of, vertices, lifts: Vec::new() };
        surface.lifts = surface.assemble_lifts();
        surface
    }

    /// Quadrant offset identified across a boundary segment of the given parity.
    pub fn glue_for_parity(segment_parity: Parity) -> Quadrant {
        Quadrant::from_parity(segment_parity.swapped())
    }

    /// Quadrant offset identified across polygon edge `e`.
    pub fn glue_vector(&self, e: usize) -> Quadrant {
        Self::glue_for_parity(self.polygon.edge_segment_parity(e))
    }

    pub fn polygon(&self) -> &LatticePolygon {
        &self.polygon
    }

    pub fn broken_edges(&self) -> &[BrokenEdge] {
        self.polygon.broken_edges()
    }

    /// Number of broken edges.
    pub fn r(&self) -> usize {
        self.broken_edges().len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[SurfaceVertex] {
        &self.vertices
    }

    /// Surface vertex over lattice point `point` in the copy `q`.
    pub fn vertex(&self, q: Quadrant, point: usize) -> usize {
        self.vertex_of[point][q.index()]
    }

    /// Projection μ of a surface vertex to the polygon.
    pub fn project(&self, v: usize) -> LatticePoint {
        self.polygon.lattice_points()[self.vertices[v].point]
    }

    /// Distinct surface vertices over a lattice point, in quadrant order.
    pub fn preimages(&self, point: usize) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::with_capacity(4);
        for v in self.vertex_of[point] {
            if !out.contains(&v) {
                out.push(v);
            }
        }
        out
    }

    /// Quadrant copies whose point over `point` coincides with the one in `q`.
    pub fn identified_quadrants(&self, q: Quadrant, point: usize) -> Vec<Quadrant> {
        self.vertices[self.vertex(q, point)].quadrants().collect()
    }

    /// The circle μ⁻¹(ℓ) of broken edge `i` as a cyclic sequence of surface
    /// vertices. Empty when the polygon has a single broken edge.
    pub fn broken_edge_lift(&self, i: usize) -> &[usize] {
        &self.lifts[i]
    }

    fn assemble_lifts(&self) -> Vec<Vec<usize>> {
        if self.r() < 2 {
            return vec![Vec::new(); self.r()];
        }
        self.broken_edges()
            .iter()
            .map(|b| {
                let pts: Vec<usize> = b
                    .lattice_points(&self.polygon)
                    .into_iter()
                    .map(|p| self.polygon.point_index(p).expect("lattice point"))
                    .collect();
                let glue = Self::glue_for_parity(b.segment_parity);
                let other =
                    Quadrant::ALL.into_iter().find(|&q| q != Quadrant::POSITIVE && q != glue).expect("four quadrants");
                let n = pts.len();
                let mut circle: Vec<usize> = pts.iter().map(|&p| self.vertex(Quadrant::POSITIVE, p)).collect();
                circle.extend(pts[1..n - 1].iter().rev().map(|&p| self.vertex(other, p)));
                circle
            })
            .collect()
    }

    /// The canonical atlas, defined when there are at least three broken edges.
    pub fn canonical_atlas(&self) -> Result<Atlas, SurfaceError> {
        let broken = self.broken_edges();
        let r = broken.len();
        if r < 3 {
            return Err(SurfaceError::DegenerateAtlas(r));
        }
        let eta: Vec<u8> = broken.iter().map(|b| u8::from(b.is_odd())).collect();
        let charts = (0..r)
            .map(|j| {
                let next = (j + 1) % r;
                let m = Mat2::from_columns(broken[j].segment_parity, broken[next].segment_parity);
                let mut quadrant_map = [Quadrant::POSITIVE; 4];
                for q in Quadrant::ALL {
                    quadrant_map[q.index()] = Quadrant::from_parity(m.left_apply(q.as_parity()));
                }
                Chart {
                    index: j,
                    center: broken[j].endpoints.expect("odd vertices exist when r >= 2").1,
                    axes: (j, next),
                    parity_matrix: ParityMatrix(m),
                    quadrant_map,
                }
            })
            .collect();
        let gluings = eta.iter().map(|&e| GluingMatrix::for_eta(e)).collect();
        Ok(Atlas { charts, eta, gluings })
    }

    /// Tubular neighbourhood type of the lift of broken edge `i`.
    pub fn tubular_type(&self, i: usize) -> Result<Tubular, SurfaceError> {
        let r = self.r();
        if r < 2 {
            return Err(SurfaceError::NoBrokenEdgeCircle(r));
        }
        let b = self.broken_edges().get(i).ok_or(SurfaceError::NoSuchBrokenEdge(i))?;
        Ok(if b.is_odd() { Tubular::Moebius } else { Tubular::Annulus })
    }

    pub fn classify_topology(&self) -> TopologyClass {
        let r = self.r() as u32;
        match r {
            0 | 1 => TopologyClass::orientable(2, 0),
            2 => TopologyClass::orientable(1, 0),
            _ => {
                let mut values: Vec<Parity> = self.broken_edges().iter().map(|b| b.segment_parity).collect();
                values.sort();
                values.dedup();
                if values.len() == 2 {
                    TopologyClass::orientable(1, r / 2 - 1)
                } else {
                    TopologyClass::non_orientable(r - 2)
                }
            }
        }
    }

    /// Broken-edge indices whose lifts form a basis of the first homology:
    /// all but the first two.
    pub fn homology_basis(&self) -> Result<Vec<usize>, SurfaceError> {
        let r = self.r();
        if r < 3 {
            return Err(SurfaceError::DegenerateAtlas(r));
        }
        Ok((2..r).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surface(coords: &[(i64, i64)]) -> AmbientSurface {
        AmbientSurface::build(&LatticePolygon::from_coords(coords).unwrap())
    }

    #[test]
    fn boundary_point_identification() {
        let s = AmbientSurface::build(&LatticePolygon::standard_triangle(5));
        let p = s.polygon().point_index(LatticePoint::new(1, 0)).unwrap();
        assert_eq!(s.identified_quadrants(Quadrant::new(0, 0), p), vec![Quadrant::new(0, 0), Quadrant::new(0, 1)]);
        let origin = s.polygon().point_index(LatticePoint::new(0, 0)).unwrap();
        assert_eq!(s.preimages(origin).len(), 1);
        let inner = s.polygon().point_index(LatticePoint::new(1, 1)).unwrap();
        assert_eq!(s.preimages(inner).len(), 4);
    }

    #[test]
    fn preimage_counts() {
        let s = surface(&[(0, 0), (4, 0), (4, 2), (0, 2)]);
        let poly = s.polygon();
        for (i, &p) in poly.lattice_points().iter().enumerate() {
            let expected = match poly.locate(p) {
                crate::lattice::Location::Interior => 4,
                _ if poly.vertices().contains(&p)
                    && poly.vertex_parity(poly.vertices().iter().position(|&v| v == p).unwrap()).is_odd() =>
                {
                    1
                }
                _ => 2,
            };
            assert_eq!(s.preimages(i).len(), expected, "point {p}");
        }
    }

    #[test]
    fn classification_examples() {
        for d in 1..=6 {
            let s = AmbientSurface::build(&LatticePolygon::standard_triangle(d));
            let t = s.classify_topology();
            assert_eq!((t.orientable, t.crosscaps, t.name.as_str()), (false, Some(1), "RP²"));
        }
        for d in 1..=4 {
            assert_eq!(surface(&[(0, 0), (2 * d, 0), (0, d)]).classify_topology().name, "sphere");
        }
        let diamond = surface(&[(1, 0), (2, 1), (1, 2), (0, 1)]).classify_topology();
        assert_eq!((diamond.components, diamond.euler_characteristic), (2, 4));
        let square = surface(&[(0, 0), (2, 0), (2, 2), (0, 2)]).classify_topology();
        assert_eq!((square.name.as_str(), square.genus), ("torus", Some(1)));
    }

    #[test]
    fn atlas_of_standard_triangle() {
        let s = AmbientSurface::build(&LatticePolygon::standard_triangle(4));
        let atlas = s.canonical_atlas().unwrap();
        assert_eq!(atlas.eta, vec![1, 1, 1]);
        assert_eq!(atlas.cyclic_product(), Mat2::IDENTITY);
        let a1 = GluingMatrix::A1.matrix();
        assert_eq!(a1 * a1 * a1, Mat2::IDENTITY);
        for j in 0..3 {
            let prev = &atlas.charts[(j + 2) % 3];
            assert_eq!(prev.parity_matrix.0 * atlas.gluings[j].matrix(), atlas.charts[j].parity_matrix.0);
            assert_eq!(atlas.charts[j].quadrant_map[0], Quadrant::POSITIVE);
        }
        assert!(s.broken_edges().iter().enumerate().all(|(i, _)| s.tubular_type(i) == Ok(Tubular::Moebius)));
        assert_eq!(s.homology_basis().unwrap().len(), 1);
    }

    #[test]
    fn degenerate_atlas_and_annulus() {
        let s = surface(&[(0, 0), (6, 0), (0, 3)]);
        assert_eq!(s.canonical_atlas(), Err(SurfaceError::DegenerateAtlas(2)));
        assert_eq!(s.tubular_type(0), Ok(Tubular::Annulus));
        let diamond = surface(&[(1, 0), (2, 1), (1, 2), (0, 1)]);
        assert_eq!(diamond.tubular_type(0), Err(SurfaceError::NoBrokenEdgeCircle(1)));
        let square = surface(&[(0, 0), (2, 0), (2, 2), (0, 2)]);
        assert_eq!(square.homology_basis().unwrap(), vec![2, 3]);
    }

    #[test]
    fn chart_axes_are_glued_to_the_positive_quadrant() {
        // U^{0,1} is glued to Π across the first axis, U^{1,0} across the second.
        let s = surface(&[(0, 0), (3, 0), (3, 1), (1, 3), (0, 2)]);
        if let Ok(atlas) = s.canonical_atlas() {
            for chart in &atlas.charts {
                let (i, j) = chart.axes;
                let across_i = AmbientSurface::glue_for_parity(s.broken_edges()[i].segment_parity);
                let across_j = AmbientSurface::glue_for_parity(s.broken_edges()[j].segment_parity);
                assert_eq!(chart.quadrant_map[across_i.index()], Quadrant::new(0, 1));
                assert_eq!(chart.quadrant_map[across_j.index()], Quadrant::new(1, 0));
            }
        }
    }

    #[test]
    fn broken_edge_lift_is_a_circle() {
        let s = AmbientSurface::build(&LatticePolygon::standard_triangle(3));
        for i in 0..3 {
            let c = s.broken_edge_lift(i);
            assert_eq!(c.len(), 6);
            let mut sorted = c.to_vec();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), 6);
        }
    }
}
