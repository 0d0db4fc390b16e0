//! T-fillings: the ribbon surface F(K) built from one thick Y per triangle.
//!
//! Thick Y of triangle `t` has three end segments, one per local edge `j`,
//! each parametrized by `x ∈ [-1, 1]`, and three boundary arcs. Arc `(t, i)`
//! runs along G-edges `i` and `i + 1`; its minus end sits on segment `i` at
//! `x = -1` and its plus end on segment `i + 1` at `x = +1`.

use std::fmt;

use thiserror::Error;

use crate::dsu::UnionFind;
use crate::surface::{Quadrant, TopologyClass};
use crate::tcurve::TCurve;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FillingError {
    #[error("the curve is empty")]
    EmptyCurve,
    #[error("lifts of triangulation edge {0} pair the arcs inconsistently")]
    InconsistentArcPairing(usize),
    #[error("boundary cycle {0} does not follow a single curve component")]
    TracingMismatch(usize),
    #[error("the filling is not orientable (type II curve)")]
    NotTypeI,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Twist {
    /// `(B, x) ↦ (B', -x)`: the two thick Ys sit side by side in the plane.
    NoTwist,
    /// `(B, x) ↦ (B', x)`.
    Twist,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Ribbon {
    /// Interior triangulation edge joining `(triangle, local edge)` pairs.
    Interior { edge: usize, sides: [(usize, usize); 2], twist: Twist },
    /// Boundary triangulation edge: its end segment is folded onto itself.
    Fold { edge: usize, triangle: usize, local: usize },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ThickY {
    pub triangle: usize,
    /// Triangulation edges at the three end segments, counterclockwise.
    pub edges: [usize; 3],
    /// Quadrant copy of the triangle carrying each arc.
    pub arc_quadrants: [Quadrant; 3],
}

/// One boundary circle of F(K): arcs `(arc id, forward)` in order, and the
/// curve component it retracts onto.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundaryCycle {
    pub arcs: Vec<(usize, bool)>,
    pub component: usize,
}

#[derive(Clone, Debug)]
pub struct TFilling {
    curve: TCurve,
    thick_ys: Vec<ThickY>,
    ribbons: Vec<Ribbon>,
    /// Partner of each end-segment endpoint `6t + 2j + [x = +1]`.
    partner: Vec<usize>,
    cycles: Vec<BoundaryCycle>,
}

fn endpoint(t: usize, j: usize, plus: bool) -> usize {
    6 * t + 2 * j + plus as usize
}

/// Arc owning an endpoint, and whether that endpoint is the arc's plus end.
fn arc_at(ep: usize) -> (usize, bool) {
    let (t, j, plus) = (ep / 6, (ep % 6) / 2, ep % 2 == 1);
    if plus {
        (3 * t + (j + 2) % 3, true)
    } else {
        (3 * t + j, false)
    }
}

/// Endpoint where an arc leaves, given its traversal direction.
fn exit_of(arc: usize, forward: bool) -> usize {
    let (t, i) = (arc / 3, arc % 3);
    if forward {
        endpoint(t, (i + 1) % 3, true)
    } else {
        endpoint(t, i, false)
    }
}

pub fn build_filling(curve: &TCurve) -> Result<TFilling, FillingError> {
    if curve.is_empty() {
        return Err(FillingError::EmptyCurve);
    }
    let setting = curve.setting();
    let tri = setting.triangulation();
    let t_count = tri.triangle_count();

    let mut thick_ys = Vec::with_capacity(t_count);
    for t in 0..t_count {
        let mut arc_quadrants = [Quadrant::POSITIVE; 3];
        let mut found = [false; 3];
        for q in Quadrant::ALL {
            let neg: Vec<usize> = (0..3)
                .filter(|&j| curve.surface_edge_sign(setting.lifted_triangle_edges(t, q)[j]).is_negative())
                .collect();
            if let [a, b] = neg[..] {
                let i = if (a + 1) % 3 == b { a } else { b };
                arc_quadrants[i] = q;
                found[i] = true;
            }
        }
        assert!(found.iter().all(|&f| f), "every arc of a thick Y lifts to exactly one quadrant");
        thick_ys.push(ThickY { triangle: t, edges: tri.triangle_edges(t), arc_quadrants });
    }

    // Which end of segment `j` of `t` the curve uses in quadrant `q`.
    let uses_plus_end = |t: usize, j: usize, q: Quadrant| -> Option<bool> {
        let y = &thick_ys[t];
        if y.arc_quadrants[j] == q {
            Some(false)
        } else if y.arc_quadrants[(j + 2) % 3] == q {
            Some(true)
        } else {
            None
        }
    };

    let mut partner = vec![usize::MAX; 6 * t_count];
    let mut ribbons = Vec::with_capacity(tri.edge_count());
    for (e, edge) in tri.edges().iter().enumerate() {
        match edge.triangles[..] {
            [(t, j)] => {
                let ends: Vec<bool> =
                    curve.negative_lifts(t, j).into_iter().filter_map(|q| uses_plus_end(t, j, q)).collect();
                if ends.len() != 2 || ends[0] == ends[1] {
                    return Err(FillingError::InconsistentArcPairing(e));
                }
                partner[endpoint(t, j, false)] = endpoint(t, j, true);
                partner[endpoint(t, j, true)] = endpoint(t, j, false);
                ribbons.push(Ribbon::Fold { edge: e, triangle: t, local: j });
            }
            [(t, j), (u, k)] => {
                let mut pairs = Vec::new();
                for q in curve.negative_lifts(t, j) {
                    match (uses_plus_end(t, j, q), uses_plus_end(u, k, q)) {
                        (Some(a), Some(b)) => pairs.push((a, b)),
                        _ => return Err(FillingError::InconsistentArcPairing(e)),
                    }
                }
                let consistent = pairs.len() == 2 && pairs[0].0 != pairs[1].0 && pairs[0].1 != pairs[1].1;
                if !consistent {
                    return Err(FillingError::InconsistentArcPairing(e));
                }
                let twist = if pairs[0].0 == pairs[0].1 { Twist::Twist } else { Twist::NoTwist };
                for plus in [false, true] {
                    let other = match twist {
                        Twist::Twist => plus,
                        Twist::NoTwist => !plus,
                    };
                    partner[endpoint(t, j, plus)] = endpoint(u, k, other);
                    partner[endpoint(u, k, other)] = endpoint(t, j, plus);
                }
                ribbons.push(Ribbon::Interior { edge: e, sides: [(t, j), (u, k)], twist });
            }
            _ => unreachable!("validated triangulations have one or two triangles per edge"),
        }
    }

    let mut filling = TFilling { curve: curve.clone(), thick_ys, ribbons, partner, cycles: Vec::new() };
    filling.cycles = filling.trace()?;
    Ok(filling)
}

impl TFilling {
    pub fn curve(&self) -> &TCurve {
        &self.curve
    }

    pub fn thick_ys(&self) -> &[ThickY] {
        &self.thick_ys
    }

    pub fn ribbons(&self) -> &[Ribbon] {
        &self.ribbons
    }

    /// Partner of endpoint `(t, j, x = ±1)`.
    pub fn partner(&self, t: usize, j: usize, plus: bool) -> (usize, usize, bool) {
        let p = self.partner[endpoint(t, j, plus)];
        (p / 6, (p % 6) / 2, p % 2 == 1)
    }

    pub fn twist_count(&self) -> usize {
        self.ribbons.iter().filter(|r| matches!(r, Ribbon::Interior { twist: Twist::Twist, .. })).count()
    }

    pub fn fold_count(&self) -> usize {
        self.ribbons.iter().filter(|r| matches!(r, Ribbon::Fold { .. })).count()
    }

    /// χ(F), from the ribbon graph: one disk per thick Y, one band per
    /// interior edge; folds keep a disk a disk.
    pub fn euler_characteristic(&self) -> i64 {
        let bands = self.ribbons.len() - self.fold_count();
        let chi = self.thick_ys.len() as i64 - bands as i64;
        let tri = self.curve.setting().triangulation();
        debug_assert_eq!(chi, tri.edge_count() as i64 - 2 * tri.triangle_count() as i64);
        chi
    }

    pub fn boundary_cycles(&self) -> &[BoundaryCycle] {
        &self.cycles
    }

    /// Upstairs node (lifted barycenter) carrying an arc.
    pub fn arc_node(&self, arc: usize) -> usize {
        let (t, i) = (arc / 3, arc % 3);
        self.curve.setting().graphs().upstairs_barycenter(t, self.thick_ys[t].arc_quadrants[i])
    }

    /// Surface edges where an arc enters and leaves, given its direction.
    fn arc_ends(&self, arc: usize, forward: bool) -> (usize, usize) {
        let (t, i) = (arc / 3, arc % 3);
        let q = self.thick_ys[t].arc_quadrants[i];
        let edges = self.curve.setting().lifted_triangle_edges(t, q);
        let (a, b) = (edges[i], edges[(i + 1) % 3]);
        if forward {
            (a, b)
        } else {
            (b, a)
        }
    }

    fn trace(&self) -> Result<Vec<BoundaryCycle>, FillingError> {
        let arcs = 3 * self.thick_ys.len();
        let mut seen = vec![false; arcs];
        let mut cycles = Vec::new();
        for start in 0..arcs {
            if seen[start] {
                continue;
            }
            let index = cycles.len();
            let component =
                self.curve.component_of_node(self.arc_node(start)).ok_or(FillingError::TracingMismatch(index))?;
            let mut path = Vec::new();
            let (mut arc, mut forward) = (start, true);
            loop {
                if seen[arc] {
                    if arc == start {
                        break;
                    }
                    return Err(FillingError::TracingMismatch(index));
                }
                seen[arc] = true;
                path.push((arc, forward));
                if self.curve.component_of_node(self.arc_node(arc)) != Some(component) {
                    return Err(FillingError::TracingMismatch(index));
                }
                let (next, entered_at_plus) = arc_at(self.partner[exit_of(arc, forward)]);
                let (_, out_edge) = self.arc_ends(arc, forward);
                let (in_edge, _) = self.arc_ends(next, !entered_at_plus);
                if out_edge != in_edge {
                    return Err(FillingError::TracingMismatch(index));
                }
                arc = next;
                forward = !entered_at_plus;
            }
            cycles.push(BoundaryCycle { arcs: path, component });
        }
        let mut hit = vec![false; self.curve.component_count()];
        for c in &cycles {
            if std::mem::replace(&mut hit[c.component], true) {
                return Err(FillingError::TracingMismatch(c.component));
            }
        }
        if hit.iter().any(|h| !h) {
            return Err(FillingError::TracingMismatch(cycles.len()));
        }
        cycles.sort_by_key(|c| c.component);
        Ok(cycles)
    }

    /// Orientation bit per thick Y (0 = counterclockwise), when F is orientable.
    pub fn orientation(&self) -> Option<Vec<u8>> {
        let mut uf = UnionFind::new(self.thick_ys.len());
        for r in &self.ribbons {
            if let Ribbon::Interior { sides: [(t, _), (u, _)], twist, .. } = *r {
                let parity = (twist == Twist::Twist) as u8;
                uf.union_with_parity(t, u, parity).ok()?;
            }
        }
        Some((0..self.thick_ys.len()).map(|t| uf.find_with_parity(t).1).collect())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum CurveType {
    TypeI,
    TypeII,
}

impl fmt::Display for CurveType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveType::TypeI => "type I",
            CurveType::TypeII => "type II",
        })
    }
}

/// Σ(K): F(K) with a disk glued along each boundary circle.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CappedSurface {
    pub filling_euler: i64,
    pub boundary_cycles: usize,
    pub euler_characteristic: i64,
    pub connected: bool,
    pub orientable: bool,
    pub genus: Option<u32>,
    pub crosscaps: Option<u32>,
    pub topology: TopologyClass,
}

pub fn classify_filling(f: &TFilling) -> (CappedSurface, CurveType) {
    let chi_f = f.euler_characteristic();
    let d = f.boundary_cycles().len() as i64;
    let chi = chi_f + d;
    let tri = f.curve().setting().triangulation();
    let (v, l) = (tri.vertex_count() as i64, tri.boundary_edge_count() as i64);
    assert_eq!(chi, d + 1 - v + l, "χ(Σ) disagrees with the lattice count");
    let connected = f.curve().setting().graphs().downstairs.component_count() == 1;
    assert!(connected && chi <= 2, "Σ is a connected closed surface");
    let orientable = f.orientation().is_some();
    let topology = TopologyClass::from_euler(chi, orientable);
    let surface = CappedSurface {
        filling_euler: chi_f,
        boundary_cycles: d as usize,
        euler_characteristic: chi,
        connected,
        orientable,
        genus: topology.genus,
        crosscaps: topology.crosscaps,
        topology,
    };
    (surface, if orientable { CurveType::TypeI } else { CurveType::TypeII })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct HarnackVerdict {
    pub components: usize,
    pub interior_points: usize,
    /// D ≤ i + 1.
    pub bound_holds: bool,
    /// D = i + 1.
    pub maximal: bool,
    /// D = (V - L) + 1 - (2 - χ(Σ)).
    pub identity_holds: bool,
}

pub fn harnack_check(curve: &TCurve, f: &TFilling) -> HarnackVerdict {
    let d = curve.component_count();
    let i = curve.setting().polygon().census().interior;
    let tri = curve.setting().triangulation();
    let (v, l) = (tri.vertex_count() as i64, tri.boundary_edge_count() as i64);
    let (surface, _) = classify_filling(f);
    HarnackVerdict {
        components: d,
        interior_points: i,
        bound_holds: d <= i + 1,
        maximal: d == i + 1,
        identity_holds: d as i64 == (v - l) + 1 - (2 - surface.euler_characteristic),
    }
}

/// A type I orientation: every component as a cycle of upstairs nodes in the
/// induced direction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrientedCurve {
    /// Upstairs nodes in traversal order, one cycle per component.
    pub cycles: Vec<Vec<usize>>,
    /// Whether each cycle runs along the normalized component order.
    pub agrees: Vec<bool>,
    pub reversed: bool,
}

/// Orients every component from the thick-Y orientations; `reversed`
/// selects the opposite global choice.
pub fn orient_curve(curve: &TCurve, f: &TFilling, reversed: bool) -> Result<OrientedCurve, FillingError> {
    let bits = f.orientation().ok_or(FillingError::NotTypeI)?;
    let graphs = curve.setting().graphs();
    let mut cycles = Vec::new();
    let mut agrees = Vec::new();
    for (index, cycle) in f.boundary_cycles().iter().enumerate() {
        let (first_arc, first_forward) = cycle.arcs[0];
        // The traced direction agrees with the chosen orientation either on
        // every arc or on none.
        let opposed = first_forward == (bits[first_arc / 3] == 1);
        for &(arc, forward) in &cycle.arcs {
            if (forward == (bits[arc / 3] == 1)) != opposed {
                return Err(FillingError::TracingMismatch(index));
            }
        }
        let flip = opposed != reversed;
        let mut nodes = Vec::with_capacity(2 * cycle.arcs.len());
        for &(arc, forward) in &cycle.arcs {
            let (into, _) = f.arc_ends(arc, forward);
            nodes.push(graphs.upstairs_midpoint(into));
            nodes.push(f.arc_node(arc));
        }
        if flip {
            nodes.reverse();
        }
        let normal = curve.node_sequence(cycle.component);
        let pos = nodes.iter().position(|&n| n == normal[0]).expect("same component");
        nodes.rotate_left(pos);
        agrees.push(nodes.len() < 2 || nodes[1] == normal[1]);
        cycles.push(nodes);
    }
    Ok(OrientedCurve { cycles, agrees, reversed })
}
