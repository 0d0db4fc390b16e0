//! Primitive lattice triangulations and their incidence graphs.
//!
//! Validation is exact. Every triangle must have lattice area 1/2 and be
//! oriented counterclockwise after normalization; interior edges must be used
//! by exactly two triangles in opposite directions and every boundary segment
//! by exactly one in the boundary's direction. The boundary of the 2-chain is
//! then ∂Π, so the triangles cover every point of Π exactly once.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::lattice::{orient, LatticePoint, LatticePolygon, Location};
use crate::surface::{AmbientSurface, Quadrant};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriangulationError {
    #[error("triangle {triangle}: vertex index {index} out of range ({count} lattice points)")]
    IndexOutOfRange { triangle: usize, index: usize, count: usize },
    #[error("triangle {0} repeats a vertex")]
    RepeatedVertex(usize),
    #[error("point {0} is not a lattice point of the polygon")]
    PointNotInPolygon(LatticePoint),
    #[error("lattice point {0} is not a vertex of any triangle")]
    MissingLatticeVertex(LatticePoint),
    #[error("triangle {triangle} has doubled area {twice_area}, expected 1")]
    NonPrimitiveTriangle { triangle: usize, twice_area: i128 },
    #[error("triangle {0} leaves the polygon")]
    OutsidePolygon(usize),
    #[error("triangles overlap: {0}")]
    Overlap(String),
    #[error("triangles leave a gap: {0}")]
    Gap(String),
    #[error("interior edge {0}-{1} belongs to a single triangle")]
    DanglingEdge(LatticePoint, LatticePoint),
    #[error("grid triangulation only supports standard triangles and axis-aligned rectangles")]
    UnsupportedShape,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TriEdge {
    /// Lattice point indices, ascending.
    pub ends: [usize; 2],
    /// `(triangle, local index)` of each incident triangle.
    pub triangles: Vec<(usize, usize)>,
    /// Polygon edge containing this edge, if it lies on ∂Π.
    pub boundary: Option<usize>,
}

impl TriEdge {
    pub fn is_boundary(&self) -> bool {
        self.boundary.is_some()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PrimitiveTriangulation {
    polygon: LatticePolygon,
    triangles: Vec<[usize; 3]>,
    edges: Vec<TriEdge>,
    triangle_edges: Vec<[usize; 3]>,
}

impl PrimitiveTriangulation {
    /// Validates triangles given as index triples into `polygon.lattice_points()`.
    pub fn new(polygon: &LatticePolygon, triangles: &[[usize; 3]]) -> Result<Self, TriangulationError> {
        let points = polygon.lattice_points();
        let count = points.len();
        let mut tris = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            if let Some(&index) = tri.iter().find(|&&i| i >= count) {
                return Err(TriangulationError::IndexOutOfRange { triangle: t, index, count });
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(TriangulationError::RepeatedVertex(t));
            }
            let o = orient(points[tri[0]], points[tri[1]], points[tri[2]]);
            if o.abs() != 1 {
                return Err(TriangulationError::NonPrimitiveTriangle { triangle: t, twice_area: o.abs() });
            }
            tris.push(if o > 0 { *tri } else { [tri[0], tri[2], tri[1]] });
        }

        let mut used = vec![false; count];
        for tri in &tris {
            for &v in tri {
                used[v] = true;
            }
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(TriangulationError::MissingLatticeVertex(points[i]));
        }

        for (t, tri) in tris.iter().enumerate() {
            let c = LatticePoint::new(0, 0);
            let (sx, sy) = tri.iter().fold((c.x, c.y), |(x, y), &v| (x + points[v].x, y + points[v].y));
            if !centroid_inside(polygon, sx, sy) {
                return Err(TriangulationError::OutsidePolygon(t));
            }
        }

        // Boundary segments of Π, keyed by sorted endpoints, with their CCW direction.
        let mut boundary_segments: BTreeMap<[usize; 2], (usize, usize, usize)> = BTreeMap::new();
        for e in 0..polygon.len() {
            let pts: Vec<usize> = polygon
                .edge_segment(e)
                .lattice_points()
                .map(|p| polygon.point_index(p).expect("boundary lattice point"))
                .collect();
            for w in pts.windows(2) {
                boundary_segments.insert(sorted(w[0], w[1]), (e, w[0], w[1]));
            }
        }

        let mut edge_map: BTreeMap<[usize; 2], Vec<(usize, usize)>> = BTreeMap::new();
        for (t, tri) in tris.iter().enumerate() {
            for j in 0..3 {
                edge_map.entry(sorted(tri[j], tri[(j + 1) % 3])).or_default().push((t, j));
            }
        }
        let describe = |k: &[usize; 2]| format!("edge {}-{}", points[k[0]], points[k[1]]);
        for (key, users) in &edge_map {
            let dir = |&(t, j): &(usize, usize)| tris[t][j];
            match users.len() {
                1 => match boundary_segments.get(key) {
                    None => return Err(TriangulationError::DanglingEdge(points[key[0]], points[key[1]])),
                    Some(&(_, from, _)) if dir(&users[0]) != from => {
                        return Err(TriangulationError::Overlap(format!("{} is covered from outside", describe(key))))
                    }
                    Some(_) => {}
                },
                2 => {
                    if boundary_segments.contains_key(key) {
                        return Err(TriangulationError::Overlap(format!("boundary {} is used twice", describe(key))));
                    }
                    if dir(&users[0]) == dir(&users[1]) {
                        return Err(TriangulationError::Overlap(format!(
                            "triangles {} and {} lie on the same side of {}",
                            users[0].0,
                            users[1].0,
                            describe(key)
                        )));
                    }
                }
                _ => {
                    return Err(TriangulationError::Overlap(format!(
                        "{} belongs to {} triangles",
                        describe(key),
                        users.len()
                    )))
                }
            }
        }
        if let Some(key) = boundary_segments.keys().find(|k| !edge_map.contains_key(*k)) {
            return Err(TriangulationError::Gap(format!("boundary {} is not covered", describe(key))));
        }
        let area: i128 = tris.len() as i128;
        if area != polygon.twice_area() {
            let msg = format!("doubled area {} vs polygon {}", area, polygon.twice_area());
            return Err(if area > polygon.twice_area() {
                TriangulationError::Overlap(msg)
            } else {
                TriangulationError::Gap(msg)
            });
        }

        let mut edges = Vec::with_capacity(edge_map.len());
        let mut triangle_edges = vec![[0usize; 3]; tris.len()];
        for (key, users) in edge_map {
            let id = edges.len();
            for &(t, j) in &users {
                triangle_edges[t][j] = id;
            }
            let boundary = boundary_segments.get(&key).map(|&(e, _, _)| e);
            edges.push(TriEdge { ends: key, triangles: users, boundary });
        }
        Ok(PrimitiveTriangulation { polygon: polygon.clone(), triangles: tris, edges, triangle_edges })
    }

    /// Validates triangles given by their corner points.
    pub fn from_points(polygon: &LatticePolygon, triangles: &[[LatticePoint; 3]]) -> Result<Self, TriangulationError> {
        let mut idx = Vec::with_capacity(triangles.len());
        for tri in triangles {
            let mut out = [0; 3];
            for (slot, p) in out.iter_mut().zip(tri) {
                *slot = polygon.point_index(*p).ok_or(TriangulationError::PointNotInPolygon(*p))?;
            }
            idx.push(out);
        }
        Self::new(polygon, &idx)
    }

    /// Staircase triangulation of a (translated) standard triangle or an
    /// axis-aligned rectangle: each unit cell is cut along its NW–SE diagonal.
    pub fn grid(polygon: &LatticePolygon) -> Result<Self, TriangulationError> {
        let vs = polygon.vertices();
        let min_x = vs.iter().map(|v| v.x).min().unwrap_or(0);
        let min_y = vs.iter().map(|v| v.y).min().unwrap_or(0);
        let max_x = vs.iter().map(|v| v.x).max().unwrap_or(0);
        let max_y = vs.iter().map(|v| v.y).max().unwrap_or(0);
        let (w, h) = (max_x - min_x, max_y - min_y);
        let mut sorted_vs = vs.to_vec();
        sorted_vs.sort();
        let p = |x: i64, y: i64| LatticePoint::new(min_x + x, min_y + y);
        let mut tris = Vec::new();
        let is_triangle = vs.len() == 3
            && w == h
            && sorted_vs == {
                let mut t = vec![p(0, 0), p(w, 0), p(0, w)];
                t.sort();
                t
            };
        let is_rectangle = vs.len() == 4
            && sorted_vs == {
                let mut r = vec![p(0, 0), p(w, 0), p(w, h), p(0, h)];
                r.sort();
                r
            };
        if !is_triangle && !is_rectangle {
            return Err(TriangulationError::UnsupportedShape);
        }
        for x in 0..w {
            for y in 0..h {
                let lower = [p(x, y), p(x + 1, y), p(x, y + 1)];
                let upper = [p(x + 1, y), p(x + 1, y + 1), p(x, y + 1)];
                if is_rectangle || x + y <= w - 2 {
                    tris.push(lower);
                    tris.push(upper);
                } else if x + y == w - 1 {
                    tris.push(lower);
                }
            }
        }
        Self::from_points(polygon, &tris)
    }

    pub fn polygon(&self) -> &LatticePolygon {
        &self.polygon
    }

    pub fn points(&self) -> &[LatticePoint] {
        self.polygon.lattice_points()
    }

    /// Triangles as counterclockwise lattice point index triples.
    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> &[TriEdge] {
        &self.edges
    }

    /// Edge id of local edge `j` of triangle `t`, joining corners `j` and `j+1`.
    pub fn triangle_edge(&self, t: usize, j: usize) -> usize {
        self.triangle_edges[t][j]
    }

    pub fn triangle_edges(&self, t: usize) -> [usize; 3] {
        self.triangle_edges[t]
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.points().len()
    }

    pub fn boundary_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.is_boundary()).count()
    }

    /// The triangle across edge `e` from triangle `t`, with its local index.
    pub fn neighbour(&self, t: usize, e: usize) -> Option<(usize, usize)> {
        self.edges[e].triangles.iter().copied().find(|&(u, _)| u != t)
    }
}

fn sorted(a: usize, b: usize) -> [usize; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}

/// Whether the point `(sx/3, sy/3)` lies strictly inside the polygon.
fn centroid_inside(polygon: &LatticePolygon, sx: i64, sy: i64) -> bool {
    let scaled: Vec<LatticePoint> = polygon.vertices().iter().map(|v| LatticePoint::new(3 * v.x, 3 * v.y)).collect();
    let scaled = LatticePolygon::new(scaled).expect("scaling preserves validity");
    scaled.locate(LatticePoint::new(sx, sy)) == Location::Interior
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IncidenceNode {
    /// Barycenter of a triangle; `quadrant` is `None` downstairs.
    Barycenter { triangle: usize, quadrant: Option<Quadrant> },
    /// Midpoint of a triangulation edge; `quadrants` is the mask of glued
    /// copies upstairs and 0 downstairs.
    Midpoint { edge: usize, quadrants: u8 },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IncidenceGraph {
    pub nodes: Vec<IncidenceNode>,
    /// `[barycenter, midpoint]` node pairs.
    pub edges: Vec<[usize; 2]>,
    adjacency: Vec<Vec<usize>>,
}

impl IncidenceGraph {
    fn new(nodes: Vec<IncidenceNode>, edges: Vec<[usize; 2]>) -> Self {
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for (i, e) in edges.iter().enumerate() {
            adjacency[e[0]].push(i);
            adjacency[e[1]].push(i);
        }
        IncidenceGraph { nodes, edges, adjacency }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    /// Edge ids incident to a node.
    pub fn incident(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn other_end(&self, edge: usize, node: usize) -> usize {
        let [a, b] = self.edges[edge];
        if a == node {
            b
        } else {
            a
        }
    }

    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.nodes.len()];
        let mut count = 0;
        for start in 0..self.nodes.len() {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(n) = stack.pop() {
                for &e in &self.adjacency[n] {
                    let m = self.other_end(e, n);
                    if !seen[m] {
                        seen[m] = true;
                        stack.push(m);
                    }
                }
            }
        }
        count
    }
}

/// G(Π) and its lift G(S).
///
/// Downstairs ids: barycenter `t` is node `t`, midpoint `e` is node `T + e`,
/// edge `3t + j` joins triangle `t` to its local edge `j`. Upstairs ids:
/// barycenter `(t, q)` is node `4t + q`, the midpoint of surface edge `s` is
/// node `4T + s`, and edge `4(3t + j) + q` lifts downstairs edge `3t + j` to
/// quadrant `q`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IncidenceGraphs {
    pub downstairs: IncidenceGraph,
    pub upstairs: IncidenceGraph,
    surface_edge: Vec<[usize; 4]>,
    surface_edge_count: usize,
    triangle_count: usize,
}

impl IncidenceGraphs {
    pub fn build(surface: &AmbientSurface, tri: &PrimitiveTriangulation) -> Self {
        let t_count = tri.triangle_count();
        let e_count = tri.edge_count();

        let mut nodes: Vec<IncidenceNode> =
            (0..t_count).map(|t| IncidenceNode::Barycenter { triangle: t, quadrant: None }).collect();
        nodes.extend((0..e_count).map(|e| IncidenceNode::Midpoint { edge: e, quadrants: 0 }));
        let mut edges = Vec::with_capacity(3 * t_count);
        for t in 0..t_count {
            for j in 0..3 {
                edges.push([t, t_count + tri.triangle_edge(t, j)]);
            }
        }
        let downstairs = IncidenceGraph::new(nodes, edges);

        let mut surface_edge = vec![[usize::MAX; 4]; e_count];
        let mut mid_nodes: Vec<IncidenceNode> = Vec::new();
        for (e, edge) in tri.edges().iter().enumerate() {
            let glue = edge.boundary.map(|pe| surface.glue_vector(pe));
            for q in Quadrant::ALL {
                if surface_edge[e][q.index()] != usize::MAX {
                    continue;
                }
                let id = mid_nodes.len();
                surface_edge[e][q.index()] = id;
                let mut mask = 1u8 << q.index();
                if let Some(g) = glue {
                    surface_edge[e][(q + g).index()] = id;
                    mask |= 1 << (q + g).index();
                }
                mid_nodes.push(IncidenceNode::Midpoint { edge: e, quadrants: mask });
            }
        }
        let surface_edge_count = mid_nodes.len();
        let mut nodes: Vec<IncidenceNode> = Vec::with_capacity(4 * t_count + surface_edge_count);
        for t in 0..t_count {
            for q in Quadrant::ALL {
                nodes.push(IncidenceNode::Barycenter { triangle: t, quadrant: Some(q) });
            }
        }
        nodes.extend(mid_nodes);
        let mut edges = Vec::with_capacity(12 * t_count);
        for t in 0..t_count {
            for j in 0..3 {
                let e = tri.triangle_edge(t, j);
                for q in Quadrant::ALL {
                    edges.push([4 * t + q.index(), 4 * t_count + surface_edge[e][q.index()]]);
                }
            }
        }
        let upstairs = IncidenceGraph::new(nodes, edges);
        IncidenceGraphs { downstairs, upstairs, surface_edge, surface_edge_count, triangle_count: t_count }
    }

    /// Surface edge (edge of the lifted triangulation) over `e` in copy `q`.
    pub fn surface_edge(&self, e: usize, q: Quadrant) -> usize {
        self.surface_edge[e][q.index()]
    }

    pub fn surface_edge_count(&self) -> usize {
        self.surface_edge_count
    }

    pub fn upstairs_barycenter(&self, t: usize, q: Quadrant) -> usize {
        4 * t + q.index()
    }

    pub fn upstairs_midpoint(&self, surface_edge: usize) -> usize {
        4 * self.triangle_count + surface_edge
    }

    /// Upstairs edge lifting local edge `j` of triangle `t` into copy `q`.
    pub fn upstairs_edge(&self, t: usize, j: usize, q: Quadrant) -> usize {
        4 * (3 * t + j) + q.index()
    }

    /// Downstairs edge under an upstairs edge.
    pub fn project_edge(&self, upstairs_edge: usize) -> usize {
        upstairs_edge / 4
    }

    /// `(triangle, local edge, quadrant)` of an upstairs edge.
    pub fn decode_upstairs_edge(&self, upstairs_edge: usize) -> (usize, usize, Quadrant) {
        let down = upstairs_edge / 4;
        (down / 3, down % 3, Quadrant::from_index(upstairs_edge % 4))
    }

    /// Surface edge whose midpoint is an upstairs node, if it is a midpoint.
    pub fn midpoint_surface_edge(&self, node: usize) -> Option<usize> {
        node.checked_sub(4 * self.triangle_count)
    }
}
