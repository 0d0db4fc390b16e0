//! Sign distributions, T-curve extraction and component classification.
//!
//! A curve is the set of negative edges of the lifted incidence graph G(S).
//! Every barycenter touches 0 or 2 of them and every midpoint 0 or 2, so the
//! negative edges split into disjoint cycles.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg};
use std::sync::Arc;

use thiserror::Error;

use crate::dsu::UnionFind;
use crate::lattice::{LatticeError, LatticePoint, LatticePolygon, Parity};
use crate::surface::{AmbientSurface, Mat2, Quadrant};
use crate::triangulation::{IncidenceGraphs, IncidenceNode, PrimitiveTriangulation, TriangulationError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("no sign given for lattice point {0}")]
    IncompleteDistribution(LatticePoint),
    #[error("sign given for {0}, which is not a lattice point of the polygon")]
    ForeignPoint(LatticePoint),
    #[error("sign distribution belongs to a different polygon")]
    PolygonMismatch,
    #[error("crossing parities need at least three broken edges, found {0}")]
    DegenerateAtlas(usize),
    #[error("degree parity applies to standard triangles only")]
    WrongPolygon,
    #[error("transform maps {0} outside the nonnegative quadrant")]
    LeavesNonnegativeQuadrant(LatticePoint),
    #[error("linear map has determinant {0}, expected ±1")]
    NotUnimodular(i64),
    #[error("oval {0} has lattice points of both signs in its innermost region")]
    InconsistentOvalSign(usize),
    #[error("census mismatch: {0}")]
    CensusMismatch(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `(-1)^bit`.
    pub fn from_bit(bit: u8) -> Sign {
        if bit & 1 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Minus
    }

    pub fn bit(self) -> u8 {
        self as u8
    }
}

impl Mul for Sign {
    type Output = Sign;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_bit(self.bit() ^ rhs.bit())
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// A sign for each lattice point of a polygon, aligned with
/// [`LatticePolygon::lattice_points`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SignDistribution {
    points: Vec<LatticePoint>,
    signs: Vec<Sign>,
}

impl SignDistribution {
    pub fn new(
        polygon: &LatticePolygon,
        entries: impl IntoIterator<Item = (LatticePoint, Sign)>,
    ) -> Result<Self, CurveError> {
        let points = polygon.lattice_points().to_vec();
        let mut signs: Vec<Option<Sign>> = vec![None; points.len()];
        for (p, s) in entries {
            let i = polygon.point_index(p).ok_or(CurveError::ForeignPoint(p))?;
            signs[i] = Some(s);
        }
        let signs = signs
            .into_iter()
            .zip(&points)
            .map(|(s, &p)| s.ok_or(CurveError::IncompleteDistribution(p)))
            .collect::<Result<_, _>>()?;
        Ok(SignDistribution { points, signs })
    }

    pub fn from_fn(polygon: &LatticePolygon, f: impl Fn(LatticePoint) -> Sign) -> Self {
        let points = polygon.lattice_points().to_vec();
        let signs = points.iter().map(|&p| f(p)).collect();
        SignDistribution { points, signs }
    }

    /// Bit `i` of `bits` set means the `i`-th lattice point is negative.
    pub fn from_bits(polygon: &LatticePolygon, bits: u64) -> Self {
        let points = polygon.lattice_points().to_vec();
        let signs = (0..points.len()).map(|i| Sign::from_bit((bits >> i) as u8)).collect();
        SignDistribution { points, signs }
    }

    pub fn uniform(polygon: &LatticePolygon, sign: Sign) -> Self {
        Self::from_fn(polygon, |_| sign)
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn sign_at(&self, p: LatticePoint) -> Option<Sign> {
        self.points.binary_search(&p).ok().map(|i| self.signs[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (LatticePoint, Sign)> + '_ {
        self.points.iter().copied().zip(self.signs.iter().copied())
    }

    pub fn negated(&self) -> Self {
        SignDistribution { points: self.points.clone(), signs: self.signs.iter().map(|&s| -s).collect() }
    }
}

/// Signs of the lattice points of every quadrant copy: the copy of `p` in
/// quadrant `q` carries `(-1)^⟨q, par p⟩ δ(p)`.
///
/// Glued copies of a boundary point may disagree (on the hypotenuse of an
/// odd-degree triangle, for instance); only the edge signs descend to the
/// surface.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtendedSigns {
    signs: Vec<[Sign; 4]>,
}

impl ExtendedSigns {
    pub fn get(&self, q: Quadrant, point: usize) -> Sign {
        self.signs[point][q.index()]
    }

    /// Sign of a surface vertex, if all its glued copies agree.
    pub fn vertex_sign(&self, surface: &AmbientSurface, v: usize) -> Option<Sign> {
        let sv = surface.vertices()[v];
        let first = self.get(sv.first_quadrant(), sv.point);
        let agree = sv.quadrants().all(|q| self.get(q, sv.point) == first);
        agree.then_some(first)
    }
}

pub fn extend_signs(signs: &SignDistribution, surface: &AmbientSurface) -> Result<ExtendedSigns, CurveError> {
    let points = surface.polygon().lattice_points();
    if signs.points() != points {
        return Err(CurveError::PolygonMismatch);
    }
    let ext: Vec<[Sign; 4]> = points
        .iter()
        .zip(signs.signs())
        .map(|(p, &s)| Quadrant::ALL.map(|q| Sign::from_bit(q.as_parity().dot(p.parity())) * s))
        .collect();
    Ok(ExtendedSigns { signs: ext })
}

/// Polygon, triangulation and the derived lifted complex, shared by every
/// curve drawn on them.
#[derive(Clone, Debug)]
pub struct CurveSetting {
    surface: AmbientSurface,
    triangulation: PrimitiveTriangulation,
    graphs: IncidenceGraphs,
    /// Surface vertices at the ends of each surface edge.
    surface_edge_ends: Vec<[usize; 2]>,
    /// Triangulation edge under each surface edge.
    surface_edge_base: Vec<usize>,
    /// Broken edge containing each triangulation edge, if it is on ∂Π.
    boundary_broken: Vec<Option<usize>>,
    /// Node positions in polygon coordinates, scaled by 6.
    node_position: Vec<(i64, i64)>,
}

impl CurveSetting {
    pub fn new(triangulation: PrimitiveTriangulation) -> Arc<Self> {
        let polygon = triangulation.polygon().clone();
        let surface = AmbientSurface::build(&polygon);
        let graphs = IncidenceGraphs::build(&surface, &triangulation);
        let points = triangulation.points();
        let mut surface_edge_ends = vec![[0; 2]; graphs.surface_edge_count()];
        let mut surface_edge_base = vec![0; graphs.surface_edge_count()];
        for (e, edge) in triangulation.edges().iter().enumerate() {
            for q in Quadrant::ALL {
                let s = graphs.surface_edge(e, q);
                surface_edge_ends[s] = edge.ends.map(|p| surface.vertex(q, p));
                surface_edge_base[s] = e;
            }
        }
        let boundary_broken =
            triangulation.edges().iter().map(|e| e.boundary.map(|pe| polygon.broken_edge_of(pe))).collect();
        let node_position = graphs
            .upstairs
            .nodes
            .iter()
            .map(|n| match *n {
                IncidenceNode::Barycenter { triangle, .. } => {
                    let [a, b, c] = triangulation.triangles()[triangle].map(|i| points[i]);
                    (2 * (a.x + b.x + c.x), 2 * (a.y + b.y + c.y))
                }
                IncidenceNode::Midpoint { edge, .. } => {
                    let [a, b] = triangulation.edges()[edge].ends.map(|i| points[i]);
                    (3 * (a.x + b.x), 3 * (a.y + b.y))
                }
            })
            .collect();
        Arc::new(CurveSetting {
            surface,
            triangulation,
            graphs,
            surface_edge_ends,
            surface_edge_base,
            boundary_broken,
            node_position,
        })
    }

    pub fn surface(&self) -> &AmbientSurface {
        &self.surface
    }

    pub fn triangulation(&self) -> &PrimitiveTriangulation {
        &self.triangulation
    }

    pub fn polygon(&self) -> &LatticePolygon {
        self.triangulation.polygon()
    }

    pub fn graphs(&self) -> &IncidenceGraphs {
        &self.graphs
    }

    pub fn surface_edge_ends(&self, s: usize) -> [usize; 2] {
        self.surface_edge_ends[s]
    }

    pub fn surface_edge_base(&self, s: usize) -> usize {
        self.surface_edge_base[s]
    }

    /// Surface edges of the lifted triangle `(t, q)`, in local edge order.
    pub fn lifted_triangle_edges(&self, t: usize, q: Quadrant) -> [usize; 3] {
        self.triangulation.triangle_edges(t).map(|e| self.graphs.surface_edge(e, q))
    }

    /// Position of an upstairs node in polygon coordinates scaled by 6.
    pub fn node_position(&self, node: usize) -> (i64, i64) {
        self.node_position[node]
    }

    /// Quadrant copies an upstairs node belongs to, as a bit mask.
    pub fn node_quadrants(&self, node: usize) -> u8 {
        match self.graphs.upstairs.nodes[node] {
            IncidenceNode::Barycenter { quadrant, .. } => 1 << quadrant.expect("upstairs node").index(),
            IncidenceNode::Midpoint { quadrants, .. } => quadrants,
        }
    }
}

/// Signs of the surface edges: the product of the extended signs of the ends.
pub fn edge_signs(setting: &CurveSetting, ext: &ExtendedSigns) -> Vec<Sign> {
    let tri = setting.triangulation();
    let graphs = setting.graphs();
    let mut out = vec![None; graphs.surface_edge_count()];
    for (e, edge) in tri.edges().iter().enumerate() {
        for q in Quadrant::ALL {
            let s = ext.get(q, edge.ends[0]) * ext.get(q, edge.ends[1]);
            let slot = &mut out[graphs.surface_edge(e, q)];
            assert!(slot.is_none_or(|old| old == s), "glued boundary edges carry different signs");
            *slot = Some(s);
        }
    }
    let out: Vec<Sign> = out.into_iter().map(|s| s.expect("every surface edge is a lift")).collect();
    for t in 0..tri.triangle_count() {
        for q in Quadrant::ALL {
            let neg = setting.lifted_triangle_edges(t, q).iter().filter(|&&s| out[s].is_negative()).count();
            assert!(neg == 0 || neg == 2, "lifted triangle with {neg} negative edges");
        }
    }
    out
}

/// How a curve component sits in the ambient surface.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ComponentClass {
    /// Inside one open quadrant copy; `depth` counts the ovals of the same
    /// quadrant around it.
    OvalInQuadrant {
        quadrant: Quadrant,
        sign: Sign,
        depth: usize,
    },
    /// Touches the boundary; crossing parities with the homology basis circles.
    BoundaryCrossing(Vec<u8>),
    NontrivialOnRP2,
    OvalOnRP2,
}

impl ComponentClass {
    pub fn is_oval(&self) -> bool {
        matches!(self, ComponentClass::OvalInQuadrant { .. } | ComponentClass::OvalOnRP2)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ComponentRecord {
    pub class: ComponentClass,
    /// Quadrant copies visited by the component's barycenters.
    pub quadrants: Vec<Quadrant>,
    /// Crossing parities with the homology basis; empty with fewer than three
    /// broken edges.
    pub crossing: Vec<u8>,
    /// Sign of the oval, when the component is one and its sign is well defined.
    pub sign: Option<Sign>,
    /// Innermost oval surrounding this one, when nesting is known.
    pub parent: Option<usize>,
    pub depth: usize,
    pub children: Vec<usize>,
}

/// Connected pieces of the surface left after cutting along one component.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Sides {
    /// Side label of each surface vertex.
    pub label: Vec<usize>,
    /// Euler characteristic of each side.
    pub euler: Vec<i64>,
}

impl Sides {
    pub fn count(&self) -> usize {
        self.euler.len()
    }

    /// Sides homeomorphic to an open disk.
    pub fn disks(&self) -> Vec<usize> {
        (0..self.count()).filter(|&s| self.euler[s] == 1).collect()
    }
}

/// Boundary-touching component summary used for comparisons.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum BoundaryKind {
    NontrivialOnRP2,
    OvalOnRP2,
    /// Number of broken-edge circles crossed an odd number of times.
    Crossing(usize),
}

/// Quadrant-level summary of a curve.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CurveCensus {
    pub components: usize,
    /// `(sign, depth)` of the ovals inside each quadrant, sorted.
    pub quadrant_ovals: [Vec<(Sign, usize)>; 4],
    pub boundary: Vec<BoundaryKind>,
}

impl CurveCensus {
    pub fn ovals_in(&self, q: Quadrant) -> &[(Sign, usize)] {
        &self.quadrant_ovals[q.index()]
    }
}

#[derive(Clone, Debug)]
pub struct TCurve {
    setting: Arc<CurveSetting>,
    signs: SignDistribution,
    extended: ExtendedSigns,
    surface_edge_signs: Vec<Sign>,
    components: Vec<Vec<usize>>,
    component_of_node: Vec<Option<usize>>,
}

/// Extracts the T-curve of `signs` on a prepared setting.
pub fn extract_curve(setting: &Arc<CurveSetting>, signs: &SignDistribution) -> Result<TCurve, CurveError> {
    let extended = extend_signs(signs, setting.surface())?;
    let surface_edge_signs = edge_signs(setting, &extended);
    let g = &setting.graphs().upstairs;
    let negative: Vec<bool> = g
        .edges
        .iter()
        .map(|&[_, mid]| {
            let s = setting.graphs().midpoint_surface_edge(mid).expect("second end is a midpoint");
            surface_edge_signs[s].is_negative()
        })
        .collect();
    let negative_at =
        |node: usize| -> Vec<usize> { g.incident(node).iter().copied().filter(|&e| negative[e]).collect() };
    for n in 0..g.node_count() {
        let k = negative_at(n).len();
        assert!(k == 0 || k == 2, "node {n} has {k} negative edges");
    }

    let mut seen = vec![false; g.edge_count()];
    let mut component_of_node = vec![None; g.node_count()];
    let mut components = Vec::new();
    for first in 0..g.edge_count() {
        if !negative[first] || seen[first] {
            continue;
        }
        let [a, b] = g.edges[first];
        let next_at = |node: usize, from: usize| negative_at(node).into_iter().find(|&e| e != from).expect("degree 2");
        // Walk towards the smaller neighbouring edge.
        let (mut node, mut edge) = if next_at(a, first) < next_at(b, first) { (b, first) } else { (a, first) };
        let id = components.len();
        let mut cycle = Vec::new();
        loop {
            seen[edge] = true;
            cycle.push(edge);
            component_of_node[node] = Some(id);
            node = g.other_end(edge, node);
            edge = next_at(node, edge);
            if edge == first {
                component_of_node[node] = Some(id);
                break;
            }
        }
        components.push(cycle);
    }
    Ok(TCurve {
        setting: Arc::clone(setting),
        signs: signs.clone(),
        extended,
        surface_edge_signs,
        components,
        component_of_node,
    })
}

/// Convenience wrapper building the setting on the fly.
pub fn extract_curve_on(
    triangulation: &PrimitiveTriangulation,
    signs: &SignDistribution,
) -> Result<TCurve, CurveError> {
    extract_curve(&CurveSetting::new(triangulation.clone()), signs)
}

impl TCurve {
    pub fn setting(&self) -> &Arc<CurveSetting> {
        &self.setting
    }

    pub fn signs(&self) -> &SignDistribution {
        &self.signs
    }

    pub fn extended_signs(&self) -> &ExtendedSigns {
        &self.extended
    }

    pub fn surface_edge_sign(&self, s: usize) -> Sign {
        self.surface_edge_signs[s]
    }

    /// Components as cycles of upstairs edge ids, normalized.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component_of_node(&self, node: usize) -> Option<usize> {
        self.component_of_node[node]
    }

    pub fn is_negative_edge(&self, upstairs_edge: usize) -> bool {
        let mid = self.setting.graphs().upstairs.edges[upstairs_edge][1];
        let s = self.setting.graphs().midpoint_surface_edge(mid).expect("midpoint");
        self.surface_edge_signs[s].is_negative()
    }

    /// All negative upstairs edges.
    pub fn negative_edges(&self) -> BTreeSet<usize> {
        self.components.iter().flatten().copied().collect()
    }

    /// Quadrants whose lift of local edge `j` of triangle `t` is negative.
    pub fn negative_lifts(&self, t: usize, j: usize) -> Vec<Quadrant> {
        let g = self.setting.graphs();
        Quadrant::ALL.into_iter().filter(|&q| self.is_negative_edge(g.upstairs_edge(t, j, q))).collect()
    }

    /// Nodes of a component; `nodes[i]` is where `edges[i]` starts.
    pub fn node_sequence(&self, c: usize) -> Vec<usize> {
        let g = &self.setting.graphs().upstairs;
        let cycle = &self.components[c];
        let n = cycle.len();
        (0..n)
            .map(|i| {
                let [a, b] = g.edges[cycle[i]];
                let [na, nb] = g.edges[cycle[(i + 1) % n]];
                if a == na || a == nb {
                    b
                } else {
                    a
                }
            })
            .collect()
    }

    /// Projection of a component to G(Π) as a cyclic sequence of edge ids.
    pub fn projection(&self, c: usize) -> Vec<usize> {
        self.components[c].iter().map(|&e| self.setting.graphs().project_edge(e)).collect()
    }

    /// Surface edges crossed by a component.
    pub fn crossed_surface_edges(&self, c: usize) -> Vec<usize> {
        let graphs = self.setting.graphs();
        let mut out: Vec<usize> =
            self.node_sequence(c).into_iter().filter_map(|n| graphs.midpoint_surface_edge(n)).collect();
        out.sort_unstable();
        out
    }

    pub fn touches_boundary(&self, c: usize) -> bool {
        let tri = self.setting.triangulation();
        self.crossed_surface_edges(c).into_iter().any(|s| tri.edges()[self.setting.surface_edge_base(s)].is_boundary())
    }

    /// Parity of the crossings with every broken-edge circle.
    pub fn full_crossing_parities(&self, c: usize) -> Vec<u8> {
        let mut out = vec![0u8; self.setting.surface().r().max(1)];
        for s in self.crossed_surface_edges(c) {
            if let Some(j) = self.setting.boundary_broken[self.setting.surface_edge_base(s)] {
                out[j] ^= 1;
            }
        }
        out
    }

    /// Crossing parities with the homology basis circles.
    pub fn crossing_parities(&self, c: usize) -> Result<Vec<u8>, CurveError> {
        let basis = self
            .setting
            .surface()
            .homology_basis()
            .map_err(|_| CurveError::DegenerateAtlas(self.setting.surface().r()))?;
        let full = self.full_crossing_parities(c);
        Ok(basis.into_iter().map(|j| full[j]).collect())
    }

    fn quadrants_of(&self, c: usize) -> Vec<Quadrant> {
        let mut mask = 0u8;
        for n in self.node_sequence(c) {
            if let IncidenceNode::Barycenter { quadrant: Some(q), .. } = self.setting.graphs().upstairs.nodes[n] {
                mask |= 1 << q.index();
            }
        }
        Quadrant::ALL.into_iter().filter(|q| mask & (1 << q.index()) != 0).collect()
    }

    /// Cuts the surface along component `c`.
    pub fn sides(&self, c: usize) -> Sides {
        let setting = &*self.setting;
        let nv = setting.surface().vertex_count();
        let crossed: BTreeSet<usize> = self.crossed_surface_edges(c).into_iter().collect();
        let mut uf = UnionFind::new(nv);
        for s in 0..setting.graphs().surface_edge_count() {
            if !crossed.contains(&s) {
                let [a, b] = setting.surface_edge_ends(s);
                uf.union(a, b);
            }
        }
        let (label, count) = uf.class_labels();
        let mut euler = vec![0i64; count];
        for &l in &label {
            euler[l] += 1;
        }
        for s in 0..setting.graphs().surface_edge_count() {
            if !crossed.contains(&s) {
                euler[label[setting.surface_edge_ends(s)[0]]] -= 1;
            }
        }
        for t in 0..setting.triangulation().triangle_count() {
            for q in Quadrant::ALL {
                let edges = setting.lifted_triangle_edges(t, q);
                if edges.iter().all(|s| !crossed.contains(s)) {
                    euler[label[setting.surface_edge_ends(edges[0])[0]]] += 1;
                }
            }
        }
        Sides { label, euler }
    }

    /// A surface vertex next to component `c`; the whole component lies in
    /// the side of any other component that contains it.
    fn anchor_vertex(&self, c: usize) -> usize {
        let s = self.crossed_surface_edges(c)[0];
        self.setting.surface_edge_ends(s)[0]
    }

    fn polyline(&self, c: usize) -> Vec<(i64, i64)> {
        self.node_sequence(c).into_iter().map(|n| self.setting.node_position(n)).collect()
    }

    /// Classification, nesting and signs of every component.
    pub fn classify_components(&self) -> Result<Vec<ComponentRecord>, CurveError> {
        let n = self.component_count();
        let r = self.setting.surface().r();
        let points = self.setting.triangulation().points();
        let quadrants: Vec<Vec<Quadrant>> = (0..n).map(|c| self.quadrants_of(c)).collect();
        let boundary: Vec<bool> = (0..n).map(|c| self.touches_boundary(c)).collect();
        let crossing: Vec<Vec<u8>> =
            (0..n).map(|c| if r >= 3 { self.crossing_parities(c).expect("r >= 3") } else { Vec::new() }).collect();
        let polylines: Vec<Vec<(i64, i64)>> = (0..n).map(|c| self.polyline(c)).collect();

        // Nesting of ovals inside one quadrant, by point-in-polygon.
        let inner: Vec<usize> = (0..n).filter(|&c| !boundary[c]).collect();
        let inside_planar = |x: usize, y: usize| -> bool {
            x != y && quadrants[x] == quadrants[y] && point_in_polygon(polylines[x][0], &polylines[y])
        };
        let mut planar_depth = vec![0usize; n];
        let mut planar_sign = vec![None; n];
        for &x in &inner {
            planar_depth[x] = inner.iter().filter(|&&y| inside_planar(x, y)).count();
        }
        for &x in &inner {
            let q = quadrants[x][0];
            let children: Vec<usize> = inner.iter().copied().filter(|&y| inside_planar(y, x)).collect();
            let mut sign = None;
            for (i, p) in points.iter().enumerate() {
                let sp = (6 * p.x, 6 * p.y);
                if !point_in_polygon(sp, &polylines[x]) || children.iter().any(|&y| point_in_polygon(sp, &polylines[y]))
                {
                    continue;
                }
                let s = self.extended.get(q, i);
                match sign {
                    None => sign = Some(s),
                    Some(old) if old != s => return Err(CurveError::InconsistentOvalSign(x)),
                    _ => {}
                }
            }
            planar_sign[x] = Some(sign.ok_or(CurveError::InconsistentOvalSign(x))?);
        }

        let mut records: Vec<ComponentRecord> = (0..n)
            .map(|c| {
                let class = if !boundary[c] {
                    ComponentClass::OvalInQuadrant {
                        quadrant: quadrants[c][0],
                        sign: planar_sign[c].expect("computed"),
                        depth: planar_depth[c],
                    }
                } else if r == 3 {
                    if crossing[c][0] == 1 {
                        ComponentClass::NontrivialOnRP2
                    } else {
                        ComponentClass::OvalOnRP2
                    }
                } else {
                    ComponentClass::BoundaryCrossing(crossing[c].clone())
                };
                ComponentRecord {
                    class,
                    quadrants: quadrants[c].clone(),
                    crossing: crossing[c].clone(),
                    sign: planar_sign[c],
                    parent: None,
                    depth: planar_depth[c],
                    children: Vec::new(),
                }
            })
            .collect();

        if r == 3 {
            // On RP² every oval has exactly one disk side; nest through it.
            let ovals: Vec<usize> = (0..n).filter(|&c| records[c].class.is_oval()).collect();
            let disk: Vec<Option<(Sides, usize)>> = (0..n)
                .map(|c| {
                    records[c].class.is_oval().then(|| {
                        let sides = self.sides(c);
                        let d = sides.disks();
                        assert_eq!(d.len(), 1, "oval on RP² bounds exactly one disk");
                        (sides, d[0])
                    })
                })
                .collect();
            let anchors: Vec<usize> = (0..n).map(|c| self.anchor_vertex(c)).collect();
            let inside = |x: usize, y: usize| -> bool {
                x != y && disk[y].as_ref().is_some_and(|(s, d)| s.label[anchors[x]] == *d)
            };
            for &x in &ovals {
                let containers: Vec<usize> = ovals.iter().copied().filter(|&y| inside(x, y)).collect();
                records[x].depth = containers.len();
                records[x].parent =
                    containers.iter().copied().find(|&y| containers.iter().all(|&z| z == y || inside(y, z)));
            }
            for &x in &ovals {
                if let Some(p) = records[x].parent {
                    records[p].children.push(x);
                }
            }
            for &x in &ovals {
                if records[x].sign.is_some() {
                    continue;
                }
                let (sides, d) = disk[x].as_ref().expect("oval");
                let mut sign = None;
                for v in 0..self.setting.surface().vertex_count() {
                    if sides.label[v] != *d {
                        continue;
                    }
                    let nested = records[x].children.iter().any(|&y| {
                        let (s, dy) = disk[y].as_ref().expect("oval");
                        s.label[v] == *dy
                    });
                    if nested {
                        continue;
                    }
                    let s = self.extended.vertex_sign(self.setting.surface(), v);
                    if s.is_none() || sign.is_some_and(|old| Some(old) != s) {
                        // Glued copies disagree: no well-defined sign.
                        sign = None;
                        break;
                    }
                    sign = s;
                }
                records[x].sign = sign;
            }
        } else {
            for &x in &inner {
                let parent = inner.iter().copied().filter(|&y| inside_planar(x, y)).max_by_key(|&y| planar_depth[y]);
                records[x].parent = parent;
                if let Some(p) = parent {
                    records[p].children.push(x);
                }
            }
        }
        Ok(records)
    }

    /// Quadrant-level summary used for equality checks between curves.
    pub fn census(&self) -> Result<CurveCensus, CurveError> {
        let records = self.classify_components()?;
        let mut census = CurveCensus { components: records.len(), ..Default::default() };
        for (c, rec) in records.iter().enumerate() {
            match rec.class {
                ComponentClass::OvalInQuadrant { quadrant, sign, depth } => {
                    census.quadrant_ovals[quadrant.index()].push((sign, depth))
                }
                ComponentClass::NontrivialOnRP2 => census.boundary.push(BoundaryKind::NontrivialOnRP2),
                ComponentClass::OvalOnRP2 => census.boundary.push(BoundaryKind::OvalOnRP2),
                ComponentClass::BoundaryCrossing(_) => {
                    let odd = self.full_crossing_parities(c).iter().filter(|&&b| b == 1).count();
                    census.boundary.push(BoundaryKind::Crossing(odd))
                }
            }
        }
        for q in census.quadrant_ovals.iter_mut() {
            q.sort();
        }
        census.boundary.sort();
        Ok(census)
    }

    /// On S(T_d): checks that a nontrivial component exists exactly when d is odd.
    pub fn degree_parity_check(&self) -> Result<DegreeParityVerdict, CurveError> {
        let polygon = self.setting.polygon();
        let d = polygon.vertices().iter().map(|v| v.x.max(v.y)).max().unwrap_or(0);
        if *polygon != LatticePolygon::standard_triangle(d) {
            return Err(CurveError::WrongPolygon);
        }
        let records = self.classify_components()?;
        let nontrivial: Vec<usize> =
            (0..records.len()).filter(|&c| records[c].class == ComponentClass::NontrivialOnRP2).collect();
        let holds = if self.is_empty() {
            true
        } else if d % 2 == 1 {
            nontrivial.len() == 1
        } else {
            nontrivial.is_empty()
        };
        Ok(DegreeParityVerdict { degree: d, witness: nontrivial.first().copied(), nontrivial: nontrivial.len(), holds })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DegreeParityVerdict {
    pub degree: i64,
    pub witness: Option<usize>,
    pub nontrivial: usize,
    pub holds: bool,
}

/// Even–odd test for a point known not to lie on the polygon.
fn point_in_polygon(p: (i64, i64), poly: &[(i64, i64)]) -> bool {
    let mut inside = false;
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if (a.1 > p.1) != (b.1 > p.1) {
            let lhs = (p.0 - a.0) as i128 * (b.1 - a.1) as i128;
            let rhs = (p.1 - a.1) as i128 * (b.0 - a.0) as i128;
            if (b.1 > a.1 && lhs < rhs) || (b.1 < a.1 && lhs > rhs) {
                inside = !inside;
            }
        }
    }
    inside
}

/// Type `(c, a, b)` of a Harnack distribution; also the group element acting
/// on sign distributions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct HarnackType {
    pub c: u8,
    pub a: u8,
    pub b: u8,
}

impl HarnackType {
    pub const fn new(c: u8, a: u8, b: u8) -> Self {
        HarnackType { c: c & 1, a: a & 1, b: b & 1 }
    }

    pub fn all() -> impl Iterator<Item = HarnackType> {
        (0..8u8).map(|i| HarnackType::new(i >> 2, i >> 1, i))
    }

    pub fn quadrant(self) -> Quadrant {
        Quadrant::new(self.a, self.b)
    }
}

impl Add for HarnackType {
    type Output = HarnackType;
    fn add(self, o: HarnackType) -> HarnackType {
        HarnackType::new(self.c ^ o.c, self.a ^ o.a, self.b ^ o.b)
    }
}

impl fmt::Display for HarnackType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.c, self.a, self.b)
    }
}

/// `δ(p) = (-1)^(c + [par p ≠ 0] + ⟨par p, (a,b)⟩)`.
pub fn harnack_distribution(polygon: &LatticePolygon, h: HarnackType) -> SignDistribution {
    SignDistribution::from_fn(polygon, |p| {
        let par = p.parity();
        Sign::from_bit(h.c ^ par.is_odd() as u8 ^ par.dot(h.quadrant().as_parity()))
    })
}

/// `(θ·δ)(p) = (-1)^(c + ⟨(a,b), par p⟩) δ(p)`.
pub fn theta_action(theta: HarnackType, signs: &SignDistribution) -> SignDistribution {
    let flip = |p: LatticePoint| Sign::from_bit(theta.c ^ theta.quadrant().as_parity().dot(p.parity()));
    SignDistribution { points: signs.points.clone(), signs: signs.iter().map(|(p, s)| flip(p) * s).collect() }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PredictedOuter {
    /// A one-sided or otherwise homologically nontrivial component.
    Nontrivial,
    /// An oval surrounding exactly the predicted ovals of this quadrant.
    Surrounding(Quadrant),
}

/// Expected components of a Harnack curve.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PredictedCensus {
    /// Empty ovals, by quadrant and sign, sorted.
    pub ovals: Vec<(Quadrant, Sign)>,
    pub outer: PredictedOuter,
}

impl PredictedCensus {
    pub fn total(&self) -> usize {
        self.ovals.len() + 1
    }

    pub fn ovals_in(&self, q: Quadrant) -> usize {
        self.ovals.iter().filter(|o| o.0 == q).count()
    }

    /// Compares against an extracted curve.
    pub fn check(&self, curve: &TCurve) -> Result<(), CurveError> {
        let mismatch = |m: String| Err(CurveError::CensusMismatch(m));
        if curve.component_count() != self.total() {
            return mismatch(format!("{} components, expected {}", curve.component_count(), self.total()));
        }
        let records = curve.classify_components()?;
        let n = records.len();
        let mut failures = Vec::new();
        for outer in 0..n {
            let mut found: Vec<(Quadrant, Sign)> = Vec::new();
            let mut ok = true;
            for (c, rec) in records.iter().enumerate() {
                if c == outer {
                    continue;
                }
                match rec.class {
                    ComponentClass::OvalInQuadrant { quadrant, sign, .. } => found.push((quadrant, sign)),
                    _ => ok = false,
                }
            }
            found.sort();
            if !ok || found != self.ovals {
                failures.push(format!("component {outer} as outer: remaining ovals {found:?}"));
                continue;
            }
            // The remaining ovals must be empty.
            let nested = (0..n).any(|c| c != outer && records[c].children.iter().any(|&x| x != outer));
            if nested {
                failures.push(format!("component {outer} as outer: nested inner ovals"));
                continue;
            }
            match self.outer {
                PredictedOuter::Nontrivial => {
                    let nontrivial = match records[outer].class {
                        ComponentClass::NontrivialOnRP2 => true,
                        ComponentClass::BoundaryCrossing(ref v) => v.contains(&1),
                        _ => false,
                    };
                    if nontrivial {
                        return Ok(());
                    }
                    failures.push(format!("component {outer} is not nontrivial: {:?}", records[outer].class));
                }
                PredictedOuter::Surrounding(q) => {
                    let sides = curve.sides(outer);
                    let wanted: Vec<usize> = (0..n)
                        .filter(|&c| c != outer && records[c].quadrants == [q] && !curve.touches_boundary(c))
                        .collect();
                    let matches_side = sides.disks().into_iter().any(|d| {
                        (0..n)
                            .filter(|&c| c != outer)
                            .all(|c| (sides.label[curve.anchor_vertex(c)] == d) == wanted.contains(&c))
                    });
                    if matches_side {
                        return Ok(());
                    }
                    failures.push(format!("component {outer} does not bound a disk around the ovals of {q}"));
                }
            }
        }
        mismatch(failures.join("; "))
    }
}

pub fn predicted_harnack_census(polygon: &LatticePolygon, h: HarnackType) -> PredictedCensus {
    let census = polygon.census();
    let base = h.quadrant();
    let mut ovals = Vec::new();
    for _ in 0..census.interior_with_parity(Parity::EVEN) {
        ovals.push((base, Sign::from_bit(h.c)));
    }
    for par in Parity::ALL.into_iter().filter(|p| p.is_odd()) {
        let q = Quadrant::from_parity(par.swapped()) + base;
        for _ in 0..census.interior_with_parity(par) {
            ovals.push((q, Sign::from_bit(h.c ^ 1)));
        }
    }
    ovals.sort();
    let outer = if polygon.broken_edges().iter().any(|b| b.integral_length % 2 == 1) {
        PredictedOuter::Nontrivial
    } else {
        PredictedOuter::Surrounding(base)
    };
    PredictedCensus { ovals, outer }
}

/// Lattice symmetries acting on polygons, triangulations and signs.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Transform {
    Translate(LatticePoint),
    /// `x ↦ A x` with `A` given row-major.
    Linear([[i64; 2]; 2]),
}

impl Transform {
    pub fn apply(&self, p: LatticePoint) -> LatticePoint {
        match *self {
            Transform::Translate(v) => p + v,
            Transform::Linear(m) => LatticePoint::new(m[0][0] * p.x + m[0][1] * p.y, m[1][0] * p.x + m[1][1] * p.y),
        }
    }

    pub fn reduction(&self) -> Mat2 {
        match *self {
            Transform::Translate(_) => Mat2::IDENTITY,
            Transform::Linear(m) => Mat2(m.map(|row| row.map(|x| x.rem_euclid(2) as u8))),
        }
    }

    /// Quadrant of the image curve corresponding to quadrant `q` of the
    /// original: `q = s · A₂`.
    pub fn quadrant_image(&self, q: Quadrant) -> Quadrant {
        let inv = self.reduction().inverse().expect("unimodular maps are invertible mod 2");
        Quadrant::from_parity(inv.left_apply(q.as_parity()))
    }

    /// Factor picked up by oval signs of quadrant `q` under the transform.
    pub fn sign_factor(&self, q: Quadrant) -> Sign {
        match *self {
            Transform::Translate(v) => Sign::from_bit(q.as_parity().dot(v.parity())),
            Transform::Linear(_) => Sign::Plus,
        }
    }
}

/// Moves a curve's polygon, triangulation and signs by `f` and re-extracts.
pub fn transform_curve(curve: &TCurve, f: Transform) -> Result<TCurve, CurveError> {
    if let Transform::Linear(m) = f {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det.abs() != 1 {
            return Err(CurveError::NotUnimodular(det));
        }
    }
    let setting = curve.setting();
    let polygon = setting.polygon();
    let image: Vec<LatticePoint> = polygon.vertices().iter().map(|&v| f.apply(v)).collect();
    if let Some(&p) = image.iter().find(|p| p.x < 0 || p.y < 0) {
        return Err(CurveError::LeavesNonnegativeQuadrant(p));
    }
    let image_polygon = LatticePolygon::new(image)?;
    let points = setting.triangulation().points();
    let triangles: Vec<[LatticePoint; 3]> =
        setting.triangulation().triangles().iter().map(|t| t.map(|i| f.apply(points[i]))).collect();
    let image_tri = PrimitiveTriangulation::from_points(&image_polygon, &triangles)?;
    let signs = SignDistribution::new(&image_polygon, curve.signs().iter().map(|(p, s)| (f.apply(p), s)))?;
    extract_curve(&CurveSetting::new(image_tri), &signs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_curve(d: i64, h: HarnackType) -> TCurve {
        let p = LatticePolygon::standard_triangle(d);
        let tri = PrimitiveTriangulation::grid(&p).unwrap();
        extract_curve_on(&tri, &harnack_distribution(&p, h)).unwrap()
    }

    #[test]
    fn extension_examples() {
        let t2 = LatticePolygon::standard_triangle(2);
        let s = AmbientSurface::build(&t2);
        let delta = SignDistribution::uniform(&t2, Sign::Plus);
        let ext = extend_signs(&delta, &s).unwrap();
        let i = t2.point_index(LatticePoint::new(1, 1)).unwrap();
        assert_eq!(ext.get(Quadrant::new(1, 0), i), Sign::Minus);
        let even = t2.point_index(LatticePoint::new(2, 0)).unwrap();
        for q in Quadrant::ALL {
            assert_eq!(ext.get(q, even), Sign::Plus);
        }
        let edge = t2.point_index(LatticePoint::new(1, 0)).unwrap();
        assert_eq!(ext.get(Quadrant::new(0, 0), edge), ext.get(Quadrant::new(0, 1), edge));
    }

    #[test]
    fn incomplete_distribution_is_rejected() {
        let t1 = LatticePolygon::standard_triangle(1);
        let err = SignDistribution::new(&t1, [(LatticePoint::new(0, 0), Sign::Plus)]).unwrap_err();
        assert!(matches!(err, CurveError::IncompleteDistribution(_)));
        let err = SignDistribution::new(&t1, [(LatticePoint::new(5, 0), Sign::Plus)]).unwrap_err();
        assert_eq!(err, CurveError::ForeignPoint(LatticePoint::new(5, 0)));
    }

    #[test]
    fn line_is_never_empty() {
        let t1 = LatticePolygon::standard_triangle(1);
        let tri = PrimitiveTriangulation::grid(&t1).unwrap();
        let k = extract_curve_on(&tri, &SignDistribution::uniform(&t1, Sign::Plus)).unwrap();
        assert_eq!(k.component_count(), 1);
        let rec = k.classify_components().unwrap();
        assert_eq!(rec[0].class, ComponentClass::NontrivialOnRP2);
    }

    #[test]
    fn harnack_low_degree_counts() {
        assert_eq!(grid_curve(2, HarnackType::new(1, 0, 0)).component_count(), 1);
        assert_eq!(grid_curve(3, HarnackType::new(1, 0, 0)).component_count(), 2);
    }

    #[test]
    fn conic_is_an_oval() {
        let k = grid_curve(2, HarnackType::new(1, 0, 0));
        assert_eq!(k.crossing_parities(0).unwrap(), vec![0]);
        assert_eq!(k.classify_components().unwrap()[0].class, ComponentClass::OvalOnRP2);
    }

    #[test]
    fn negation_gives_same_curve() {
        let p = LatticePolygon::standard_triangle(3);
        let tri = PrimitiveTriangulation::grid(&p).unwrap();
        let setting = CurveSetting::new(tri);
        for bits in [0u64, 5, 77, 1000] {
            let d = SignDistribution::from_bits(&p, bits);
            let a = extract_curve(&setting, &d).unwrap();
            let b = extract_curve(&setting, &d.negated()).unwrap();
            assert_eq!(a.components(), b.components());
        }
    }

    #[test]
    fn harnack_type_table() {
        let t3 = LatticePolygon::standard_triangle(3);
        let d = harnack_distribution(&t3, HarnackType::new(1, 0, 0));
        for (p, s) in d.iter() {
            assert_eq!(s == Sign::Minus, p.parity().is_even());
        }
        let d0 = harnack_distribution(&t3, HarnackType::new(0, 0, 0));
        assert_eq!(d0, d.negated());
        let moved = theta_action(HarnackType::new(0, 1, 0), &d);
        assert_eq!(moved, harnack_distribution(&t3, HarnackType::new(1, 1, 0)));
    }

    #[test]
    fn predicted_counts() {
        let h = HarnackType::new(1, 0, 0);
        let p5 = predicted_harnack_census(&LatticePolygon::standard_triangle(5), h);
        assert_eq!(p5.total(), 7);
        assert_eq!(p5.outer, PredictedOuter::Nontrivial);
        let per: Vec<usize> =
            [(0, 0), (1, 1), (1, 0), (0, 1)].iter().map(|&(a, b)| p5.ovals_in(Quadrant::new(a, b))).collect();
        assert_eq!(per, vec![1, 3, 1, 1]);
        let p6 = predicted_harnack_census(&LatticePolygon::standard_triangle(6), h);
        assert_eq!(p6.total(), 11);
        assert_eq!(p6.outer, PredictedOuter::Surrounding(Quadrant::POSITIVE));
        assert_eq!(predicted_harnack_census(&LatticePolygon::standard_triangle(2), h).total(), 1);
    }

    #[test]
    fn harnack_curves_match_prediction() {
        for d in 1..=6 {
            for h in HarnackType::all() {
                let k = grid_curve(d, h);
                predicted_harnack_census(k.setting().polygon(), h).check(&k).unwrap();
            }
        }
    }

    #[test]
    fn components_are_normalized() {
        let k = grid_curve(5, HarnackType::new(1, 0, 0));
        let firsts: Vec<usize> = k.components().iter().map(|c| c[0]).collect();
        let mut sorted = firsts.clone();
        sorted.sort();
        assert_eq!(firsts, sorted);
        for c in k.components() {
            assert_eq!(c[0], *c.iter().min().unwrap());
            assert!(c[1] < c[c.len() - 1]);
        }
    }

    #[test]
    fn transforms_reject_bad_maps() {
        let k = grid_curve(2, HarnackType::new(1, 0, 0));
        assert!(matches!(transform_curve(&k, Transform::Linear([[2, 0], [0, 1]])), Err(CurveError::NotUnimodular(2))));
        assert!(matches!(
            transform_curve(&k, Transform::Linear([[-1, 0], [0, 1]])),
            Err(CurveError::LeavesNonnegativeQuadrant(_))
        ));
        let same = transform_curve(&k, Transform::Linear([[1, 0], [0, 1]])).unwrap();
        assert_eq!(same.components(), k.components());
    }

    #[test]
    fn point_in_polygon_square() {
        let sq = [(0, 0), (4, 0), (4, 4), (0, 4)];
        assert!(point_in_polygon((1, 1), &sq));
        assert!(!point_in_polygon((5, 1), &sq));
        assert!(!point_in_polygon((1, -1), &sq));
    }
}
