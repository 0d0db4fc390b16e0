//! SVG picture of a T-curve on the four reflected copies of the polygon.
//!
//! All coordinates are integers (node positions are sixths of a lattice unit),
//! so the output bytes depend only on the curve.

use std::collections::BTreeSet;
use std::fmt::Write;

use tcurve::surface::Quadrant;
use tcurve::tcurve::TCurve;
use tcurve::triangulation::IncidenceNode;

/// Pixels per sixth of a lattice unit.
const SCALE: i64 = 8;
const MARGIN: i64 = 24;
const CURVE_COLOURS: [&str; 8] =
    ["#c0392b", "#2471a3", "#1e8449", "#7d3c98", "#b9770e", "#117a65", "#6e2c00", "#2e4053"];

fn reflect(q: Quadrant, (x, y): (i64, i64)) -> (i64, i64) {
    (if q.a() == 1 { -x } else { x }, if q.b() == 1 { -y } else { y })
}

struct Canvas {
    half: i64,
}

impl Canvas {
    /// SVG coordinates of a point given in sixths, y axis pointing up.
    fn at(&self, (x, y): (i64, i64)) -> (i64, i64) {
        (MARGIN + (x + self.half) * SCALE, MARGIN + (self.half - y) * SCALE)
    }
}

pub fn render_svg(k: &TCurve) -> String {
    let setting = k.setting();
    let polygon = setting.polygon();
    let tri = setting.triangulation();
    let points = tri.points();
    let extent = polygon.vertices().iter().map(|v| v.x.max(v.y)).max().unwrap_or(0).max(1);
    let canvas = Canvas { half: 6 * extent + 3 };
    let size = 2 * MARGIN + 2 * canvas.half * SCALE;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(svg, r##"<rect width="{size}" height="{size}" fill="#ffffff"/>"##);
    let (x0, y0) = canvas.at((-canvas.half, 0));
    let (x1, _) = canvas.at((canvas.half, 0));
    let (cx, cy0) = canvas.at((0, canvas.half));
    let (_, cy1) = canvas.at((0, -canvas.half));
    let _ = writeln!(svg, r##"<g stroke="#bbbbbb" stroke-width="1">"##);
    let _ = writeln!(svg, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}"/>"#);
    let _ = writeln!(svg, r#"<line x1="{cx}" y1="{cy0}" x2="{cx}" y2="{cy1}"/>"#);
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(svg, r##"<g stroke="#d5d8dc" stroke-width="1" fill="none">"##);
    for q in Quadrant::ALL {
        for edge in tri.edges() {
            let [a, b] = edge.ends.map(|i| canvas.at(reflect(q, (6 * points[i].x, 6 * points[i].y))));
            let _ = writeln!(svg, r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#, a.0, a.1, b.0, b.1);
        }
    }
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(svg, r##"<g stroke="#566573" stroke-width="2" fill="none">"##);
    for q in Quadrant::ALL {
        let outline: Vec<String> = polygon
            .vertices()
            .iter()
            .map(|v| {
                let (x, y) = canvas.at(reflect(q, (6 * v.x, 6 * v.y)));
                format!("{x},{y}")
            })
            .collect();
        let _ = writeln!(svg, r#"<polygon points="{}"/>"#, outline.join(" "));
    }
    let _ = writeln!(svg, "</g>");

    // Curve components: each edge of a cycle runs from a barycenter to a
    // midpoint inside the barycenter's quadrant copy.
    let graph = &setting.graphs().upstairs;
    for (c, cycle) in k.components().iter().enumerate() {
        let mut d = String::new();
        let mut pen: Option<(i64, i64)> = None;
        let nodes = k.node_sequence(c);
        for (i, &e) in cycle.iter().enumerate() {
            let [bary, _] = graph.edges[e];
            let q = match graph.nodes[bary] {
                IncidenceNode::Barycenter { quadrant, .. } => quadrant.expect("upstairs barycenter"),
                IncidenceNode::Midpoint { .. } => unreachable!("edges start at barycenters"),
            };
            let from = canvas.at(reflect(q, setting.node_position(nodes[i])));
            let to = canvas.at(reflect(q, setting.node_position(nodes[(i + 1) % nodes.len()])));
            if pen != Some(from) {
                let _ = write!(d, "M{},{} ", from.0, from.1);
            }
            let _ = write!(d, "L{},{} ", to.0, to.1);
            pen = Some(to);
        }
        let colour = CURVE_COLOURS[c % CURVE_COLOURS.len()];
        let _ = writeln!(
            svg,
            r#"<path d="{}" stroke="{colour}" stroke-width="4" fill="none" stroke-linejoin="round" stroke-linecap="round"/>"#,
            d.trim_end()
        );
    }

    // Signs of the lattice points; coincident plane positions are labelled once.
    let ext = k.extended_signs();
    let mut labelled = BTreeSet::new();
    let _ = writeln!(svg, r#"<g font-family="monospace" font-size="14" text-anchor="middle">"#);
    for q in Quadrant::ALL {
        for (i, p) in polygon.lattice_points().iter().enumerate() {
            let pos = reflect(q, (6 * p.x, 6 * p.y));
            if !labelled.insert(pos) {
                continue;
            }
            let (x, y) = canvas.at(pos);
            let s = ext.get(q, i);
            let (fill, glyph) = if s.is_negative() { ("#c0392b", "\u{2212}") } else { ("#1f618d", "+") };
            let _ = writeln!(svg, r#"<text x="{x}" y="{}" fill="{fill}">{glyph}</text>"#, y + 5);
        }
    }
    let _ = writeln!(svg, "</g>");
    svg.push_str("</svg>\n");
    svg
}
