//! Random instances and independent oracles for testing `tcurve`.
//!
//! The oracles rebuild everything from the raw data (polygon, triangles,
//! signs) with explicit cell complexes, sharing no code with the library
//! beyond its input types.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use tcurve::lattice::{orient, LatticePoint, LatticePolygon};
use tcurve::{PrimitiveTriangulation, Sign, SignDistribution};

/// A random simple lattice polygon with vertices in `[0, max_coord]²`.
pub fn random_polygon<R: Rng>(rng: &mut R, max_coord: i64, max_vertices: usize) -> LatticePolygon {
    loop {
        let k = rng.gen_range(3..=max_vertices.max(3));
        let mut pts: Vec<LatticePoint> =
            (0..k).map(|_| LatticePoint::new(rng.gen_range(0..=max_coord), rng.gen_range(0..=max_coord))).collect();
        pts.sort();
        pts.dedup();
        if pts.len() < 3 {
            continue;
        }
        // Star-shaped around the (scaled) centroid.
        let n = pts.len() as i64;
        let cx: i64 = pts.iter().map(|p| p.x).sum();
        let cy: i64 = pts.iter().map(|p| p.y).sum();
        pts.sort_by(|a, b| {
            let ang = |p: &LatticePoint| ((n * p.y - cy) as f64).atan2((n * p.x - cx) as f64);
            ang(a).partial_cmp(&ang(b)).expect("finite angles")
        });
        if let Ok(p) = LatticePolygon::new(pts) {
            return p;
        }
    }
}

/// A random primitive triangulation: ear clipping on the boundary lattice
/// points, insertion of the interior points, then `flips` random diagonal flips.
pub fn random_triangulation<R: Rng>(polygon: &LatticePolygon, rng: &mut R, flips: usize) -> PrimitiveTriangulation {
    let mut tris = ear_clip(polygon).expect("simple polygons have ears");
    let boundary: Vec<LatticePoint> = boundary_points(polygon);
    for &p in polygon.lattice_points() {
        if !boundary.contains(&p) {
            insert_point(&mut tris, p);
        }
    }
    for _ in 0..flips {
        random_flip(&mut tris, rng);
    }
    PrimitiveTriangulation::from_points(polygon, &tris).expect("construction yields a primitive triangulation")
}

pub fn random_signs<R: Rng>(rng: &mut R, polygon: &LatticePolygon) -> SignDistribution {
    let entries: Vec<(LatticePoint, Sign)> = polygon
        .lattice_points()
        .iter()
        .map(|&p| (p, if rng.gen_bool(0.5) { Sign::Minus } else { Sign::Plus }))
        .collect();
    SignDistribution::new(polygon, entries).expect("every lattice point has a sign")
}

fn boundary_points(polygon: &LatticePolygon) -> Vec<LatticePoint> {
    let mut out = Vec::new();
    for e in 0..polygon.len() {
        let seg = polygon.edge_segment(e);
        out.extend(seg.lattice_points().take(seg.integral_length() as usize));
    }
    out
}

fn in_closed_triangle(a: LatticePoint, b: LatticePoint, c: LatticePoint, p: LatticePoint) -> bool {
    orient(a, b, p) >= 0 && orient(b, c, p) >= 0 && orient(c, a, p) >= 0
}

fn ear_clip(polygon: &LatticePolygon) -> Option<Vec<[LatticePoint; 3]>> {
    let mut ring = boundary_points(polygon);
    let mut out = Vec::new();
    while ring.len() > 3 {
        let n = ring.len();
        let ear = (0..n).find(|&i| {
            let (a, b, c) = (ring[(i + n - 1) % n], ring[i], ring[(i + 1) % n]);
            orient(a, b, c) > 0 && ring.iter().all(|&p| p == a || p == b || p == c || !in_closed_triangle(a, b, c, p))
        })?;
        out.push([ring[(ear + n - 1) % n], ring[ear], ring[(ear + 1) % n]]);
        ring.remove(ear);
    }
    if orient(ring[0], ring[1], ring[2]) <= 0 {
        return None;
    }
    out.push([ring[0], ring[1], ring[2]]);
    Some(out)
}

fn insert_point(tris: &mut Vec<[LatticePoint; 3]>, p: LatticePoint) {
    let t = tris.iter().position(|&[a, b, c]| in_closed_triangle(a, b, c, p)).expect("point lies in the polygon");
    let [a, b, c] = tris[t];
    let rotations = [[a, b, c], [b, c, a], [c, a, b]];
    let on_edge = rotations.iter().find(|r| orient(r[0], r[1], p) == 0).copied();
    match on_edge {
        None => {
            tris.swap_remove(t);
            tris.extend([[a, b, p], [b, c, p], [c, a, p]]);
        }
        Some([u, v, w]) => {
            tris.swap_remove(t);
            let n = tris
                .iter()
                .position(|tri| (0..3).any(|i| tri[i] == v && tri[(i + 1) % 3] == u))
                .expect("interior point on an interior edge");
            let other = tris.swap_remove(n);
            let x = *other.iter().find(|&&q| q != u && q != v).expect("third corner");
            tris.extend([[u, p, w], [p, v, w], [v, p, x], [p, u, x]]);
        }
    }
}

fn random_flip<R: Rng>(tris: &mut [[LatticePoint; 3]], rng: &mut R) {
    let mut shared: BTreeMap<(LatticePoint, LatticePoint), Vec<usize>> = BTreeMap::new();
    for (t, tri) in tris.iter().enumerate() {
        for i in 0..3 {
            let (u, v) = (tri[i], tri[(i + 1) % 3]);
            shared.entry((u.min(v), u.max(v))).or_default().push(t);
        }
    }
    let interior: Vec<(&(LatticePoint, LatticePoint), &Vec<usize>)> =
        shared.iter().filter(|(_, v)| v.len() == 2).collect();
    let Some((&(a, b), ts)) = interior.choose(rng) else {
        return;
    };
    let third = |t: usize| *tris[t].iter().find(|&&q| q != a && q != b).expect("third corner");
    let (c, d) = (third(ts[0]), third(ts[1]));
    let crosses = orient(c, d, a).signum() * orient(c, d, b).signum() < 0;
    if !crosses {
        return;
    }
    let ccw = |t: [LatticePoint; 3]| if orient(t[0], t[1], t[2]) > 0 { t } else { [t[0], t[2], t[1]] };
    tris[ts[0]] = ccw([a, c, d]);
    tris[ts[1]] = ccw([b, c, d]);
}

/// Topology of S(Π) from its four polygon faces and edge gluings.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SurfaceOracle {
    pub euler: i64,
    pub orientable: bool,
    pub components: usize,
}

/// Quadrants `(a, b)` as indices `2a + b`, glue offsets from the swapped
/// primitive edge direction mod 2.
pub fn surface_oracle(polygon: &LatticePolygon) -> SurfaceOracle {
    let n = polygon.len();
    let glue: Vec<usize> = (0..n)
        .map(|e| {
            let d = polygon.edge_segment(e).primitive_direction();
            let (px, py) = (d.x.rem_euclid(2) as usize, d.y.rem_euclid(2) as usize);
            2 * py + px
        })
        .collect();
    // Vertex copies (q, v): glued across both incident edges.
    let mut parent: Vec<usize> = (0..4 * n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for (e, &g) in glue.iter().enumerate() {
        for q in 0..4 {
            for v in [e, (e + 1) % n] {
                let (x, y) = (find(&mut parent, 4 * v + q), find(&mut parent, 4 * v + (q ^ g)));
                parent[x] = y;
            }
        }
    }
    let vertices = (0..4 * n).filter(|&x| find(&mut parent, x) == x).count() as i64;
    let euler = vertices - 2 * n as i64 + 4;

    // Two-colour the quadrant graph: glued faces need opposite orientations.
    let mut colour = [None::<u8>; 4];
    let mut orientable = true;
    let mut components = 0;
    for start in 0..4 {
        if colour[start].is_some() {
            continue;
        }
        components += 1;
        colour[start] = Some(0);
        let mut stack = vec![start];
        while let Some(q) = stack.pop() {
            for &g in &glue {
                let r = q ^ g;
                let want = 1 - colour[q].expect("coloured");
                match colour[r] {
                    None => {
                        colour[r] = Some(want);
                        stack.push(r);
                    }
                    Some(c) if c != want => orientable = false,
                    _ => {}
                }
            }
        }
    }
    SurfaceOracle { euler, orientable, components }
}

/// χ, boundary circle count and orientability of F(K) from an explicit cell
/// complex: one 9-gon per triangle (three arcs alternating with three end
/// segments, each split at its midpoint), glued along the half segments.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FillingOracle {
    pub euler: i64,
    pub boundary_cycles: usize,
    pub orientable: bool,
}

pub fn filling_oracle(tri: &PrimitiveTriangulation, signs: &SignDistribution) -> FillingOracle {
    let points = tri.points();
    let triangles = tri.triangles();
    let t_count = triangles.len();
    let sign_of = |q: usize, p: LatticePoint| -> i64 {
        let (a, b) = ((q >> 1) as i64, (q & 1) as i64);
        let flip = (a * p.x.rem_euclid(2) + b * p.y.rem_euclid(2)) % 2;
        let base = signs.sign_at(p).expect("total distribution").value();
        if flip == 1 {
            -base
        } else {
            base
        }
    };
    // negative[t][q][j]: local edge j of lifted triangle (t, q) is negative.
    let negative: Vec<[[bool; 3]; 4]> = triangles
        .iter()
        .map(|tri| {
            let mut out = [[false; 3]; 4];
            for (q, row) in out.iter_mut().enumerate() {
                for (j, cell) in row.iter_mut().enumerate() {
                    let (u, v) = (points[tri[j]], points[tri[(j + 1) % 3]]);
                    *cell = sign_of(q, u) * sign_of(q, v) < 0;
                }
            }
            out
        })
        .collect();
    // End of segment j used in quadrant q: -1 if the curve continues to j+1,
    // +1 if it came from j-1.
    let end_used = |t: usize, j: usize, q: usize| -> Option<i8> {
        let n = negative[t][q];
        if !n[j] {
            None
        } else if n[(j + 1) % 3] {
            Some(-1)
        } else {
            Some(1)
        }
    };

    // 9-gon corners of thick Y t, counterclockwise: for segment j the +1 end,
    // the midpoint, the -1 end. Corner id 9t + 3j + {0: +1, 1: mid, 2: -1}.
    let corner = |t: usize, j: usize, x: i8| -> usize {
        9 * t
            + 3 * j
            + match x {
                1 => 0,
                0 => 1,
                _ => 2,
            }
    };
    let mut parent: Vec<usize> = (0..9 * t_count).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let unite = |a: usize, b: usize, parent: &mut Vec<usize>| {
        let (x, y) = (find(parent, a), find(parent, b));
        parent[x] = y;
    };

    // Half-segment identifications (face, segment, half) ↔ (face, segment, half),
    // with the constraint parity on face orientations.
    let mut half_edges = 0i64;
    let mut constraints: Vec<(usize, usize, u8)> = Vec::new();
    let mut edge_users: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for (t, tri) in triangles.iter().enumerate() {
        for j in 0..3 {
            let (u, v) = (tri[j], tri[(j + 1) % 3]);
            edge_users.entry((u.min(v), u.max(v))).or_default().push((t, j));
        }
    }
    for users in edge_users.values() {
        // Map x ↦ s·x from the first side to the second.
        let (t, j, u, k, s) = match users[..] {
            [(t, j)] => (t, j, t, j, -1i8),
            [(t, j), (u, k)] => {
                let mut s = None;
                for q in 0..4 {
                    if let (Some(a), Some(b)) = (end_used(t, j, q), end_used(u, k, q)) {
                        let this = a * b;
                        assert!(s.is_none_or(|old| old == this), "lifts disagree on the gluing");
                        s = Some(this);
                    }
                }
                (t, j, u, k, s.expect("an interior edge has negative lifts"))
            }
            _ => unreachable!("edges have one or two triangles"),
        };
        for x in [1i8, 0, -1] {
            unite(corner(t, j, x), corner(u, k, s * x), &mut parent);
        }
        // Face t traverses its half segments +1 → mid → -1. The half from +1
        // to mid lands on the half between s·1 and 0 of face u, traversed by u
        // in the same direction iff s = +1.
        half_edges += 2;
        if t == u {
            // Fold: the two halves of one segment are glued to each other,
            // traversed in opposite directions; no constraint.
            half_edges -= 1;
        } else {
            constraints.push((t, u, (s == 1) as u8));
        }
    }
    let vertices = (0..9 * t_count).filter(|&x| find(&mut parent, x) == x).count() as i64;
    let arcs = 3 * t_count as i64;
    let euler = vertices - (arcs + half_edges) + t_count as i64;

    // Boundary: arcs join the -1 end of segment i to the +1 end of segment i+1.
    let mut bparent: Vec<usize> = (0..9 * t_count).collect();
    for t in 0..t_count {
        for i in 0..3 {
            let a = find(&mut parent, corner(t, i, -1));
            let b = find(&mut parent, corner(t, (i + 1) % 3, 1));
            let (x, y) = (find(&mut bparent, a), find(&mut bparent, b));
            bparent[x] = y;
        }
    }
    let mut roots: Vec<usize> = (0..t_count)
        .flat_map(|t| (0..3).map(move |i| (t, i)))
        .map(|(t, i)| {
            let a = find(&mut parent, corner(t, i, -1));
            find(&mut bparent, a)
        })
        .collect();
    roots.sort_unstable();
    roots.dedup();

    // Orientation propagation: a glued pair traversed in the same direction
    // forces opposite face orientations.
    let mut orientation: Vec<Option<u8>> = vec![None; t_count];
    let mut adjacency: Vec<Vec<(usize, u8)>> = vec![Vec::new(); t_count];
    for &(t, u, p) in &constraints {
        adjacency[t].push((u, p));
        adjacency[u].push((t, p));
    }
    let mut orientable = true;
    for start in 0..t_count {
        if orientation[start].is_some() {
            continue;
        }
        orientation[start] = Some(0);
        let mut stack = vec![start];
        while let Some(t) = stack.pop() {
            let o = orientation[t].expect("set");
            for &(u, p) in &adjacency[t] {
                let want = o ^ p;
                match orientation[u] {
                    None => {
                        orientation[u] = Some(want);
                        stack.push(u);
                    }
                    Some(w) if w != want => orientable = false,
                    _ => {}
                }
            }
        }
    }
    FillingOracle { euler, boundary_cycles: roots.len(), orientable }
}
