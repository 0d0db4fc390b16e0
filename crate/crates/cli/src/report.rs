//! Machine-readable reports. Field order is declaration order, and every
//! list is built in a fixed order, so equal inputs give equal bytes.

use serde::Serialize;
use tcurve::lattice::Parity;
use tcurve::surface::{AmbientSurface, GluingMatrix, Quadrant};
use tcurve::tcurve::{PredictedCensus, PredictedOuter, TCurve};
use tcurve::{
    build_filling, classify_filling, harnack_check, orient_curve, ComponentClass, CurveError, CurveType, FillingError,
    Sign,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ComputeError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Filling(#[from] FillingError),
}

fn pair(p: Parity) -> [u8; 2] {
    [p.x(), p.y()]
}

fn quadrant(q: Quadrant) -> [u8; 2] {
    [q.a(), q.b()]
}

/// A checked law and whether it held.
#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct Invariant {
    pub name: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Invariant {
    pub fn new(name: &str, holds: bool) -> Self {
        Invariant { name: name.to_owned(), holds, detail: None }
    }

    pub fn with_detail(name: &str, holds: bool, detail: String) -> Self {
        Invariant { name: name.to_owned(), holds, detail: Some(detail) }
    }
}

#[derive(Serialize, Clone, Debug)]
pub struct BrokenEdgeReport {
    pub edges: Vec<usize>,
    pub segment_parity: [u8; 2],
    pub broken_parity: [u8; 2],
    pub integral_length: i64,
}

#[derive(Serialize, Clone, Debug)]
pub struct SurfaceReport {
    pub topology: String,
    pub euler_characteristic: i64,
    pub orientable: bool,
    pub components: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub genus: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crosscaps: Option<u32>,
    pub broken_edges: Vec<BrokenEdgeReport>,
    /// Gluing matrix names around the canonical atlas, when it exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atlas: Option<Vec<&'static str>>,
}

pub fn surface_report(surface: &AmbientSurface) -> SurfaceReport {
    let t = surface.classify_topology();
    SurfaceReport {
        topology: t.name,
        euler_characteristic: t.euler_characteristic,
        orientable: t.orientable,
        components: t.components,
        genus: t.genus,
        crosscaps: t.crosscaps,
        broken_edges: surface
            .broken_edges()
            .iter()
            .map(|b| BrokenEdgeReport {
                edges: b.edges.clone(),
                segment_parity: pair(b.segment_parity),
                broken_parity: pair(b.broken_parity),
                integral_length: b.integral_length,
            })
            .collect(),
        atlas: surface.canonical_atlas().ok().map(|a| {
            a.gluings
                .iter()
                .map(|g| match g {
                    GluingMatrix::A0 => "A0",
                    GluingMatrix::A1 => "A1",
                })
                .collect()
        }),
    }
}

#[derive(Serialize, Clone, Debug)]
pub struct ComponentReport {
    /// `oval_in_quadrant`, `boundary_crossing`, `nontrivial_on_rp2` or `oval_on_rp2`.
    pub class: &'static str,
    pub quadrants: Vec<[u8; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign: Option<i64>,
    pub depth: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub crossing: Vec<u8>,
    pub length: usize,
}

#[derive(Serialize, Clone, Debug)]
pub struct QuadrantOvals {
    pub quadrant: [u8; 2],
    pub positive: usize,
    pub negative: usize,
}

#[derive(Serialize, Clone, Debug)]
pub struct DegreeParityReport {
    pub degree: i64,
    pub nontrivial: usize,
    pub holds: bool,
}

#[derive(Serialize, Clone, Debug)]
pub struct CurveReport {
    pub components: usize,
    pub ovals: usize,
    pub nontrivial: usize,
    pub quadrant_ovals: Vec<QuadrantOvals>,
    pub component_list: Vec<ComponentReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_parity: Option<DegreeParityReport>,
}

pub fn curve_report(k: &TCurve) -> Result<CurveReport, ComputeError> {
    let records = k.classify_components()?;
    let census = k.census()?;
    let component_list: Vec<ComponentReport> = records
        .iter()
        .enumerate()
        .map(|(c, r)| ComponentReport {
            class: match r.class {
                ComponentClass::OvalInQuadrant { .. } => "oval_in_quadrant",
                ComponentClass::BoundaryCrossing(_) => "boundary_crossing",
                ComponentClass::NontrivialOnRP2 => "nontrivial_on_rp2",
                ComponentClass::OvalOnRP2 => "oval_on_rp2",
            },
            quadrants: r.quadrants.iter().map(|&q| quadrant(q)).collect(),
            sign: r.sign.map(Sign::value),
            depth: r.depth,
            parent: r.parent,
            children: r.children.clone(),
            crossing: r.crossing.clone(),
            length: k.components()[c].len(),
        })
        .collect();
    let quadrant_ovals = Quadrant::ALL
        .iter()
        .map(|&q| {
            let ovals = census.ovals_in(q);
            let negative = ovals.iter().filter(|o| o.0.is_negative()).count();
            QuadrantOvals { quadrant: quadrant(q), positive: ovals.len() - negative, negative }
        })
        .collect();
    let nontrivial = records
        .iter()
        .filter(|r| match &r.class {
            ComponentClass::NontrivialOnRP2 => true,
            ComponentClass::BoundaryCrossing(v) => v.contains(&1),
            _ => false,
        })
        .count();
    let degree_parity = match k.degree_parity_check() {
        Ok(v) => Some(DegreeParityReport { degree: v.degree, nontrivial: v.nontrivial, holds: v.holds }),
        Err(CurveError::WrongPolygon) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(CurveReport {
        components: records.len(),
        ovals: records.iter().filter(|r| r.class.is_oval()).count(),
        nontrivial,
        quadrant_ovals,
        component_list,
        degree_parity,
    })
}

#[derive(Serialize, Clone, Debug)]
pub struct FillingReport {
    pub filling_euler: i64,
    pub components: usize,
    pub capped_euler: i64,
    pub capped_surface: String,
    pub orientable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub genus: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crosscaps: Option<u32>,
    pub curve_type: String,
    pub twists: usize,
    pub folds: usize,
    pub interior_points: usize,
    pub maximal: bool,
    /// For type I: whether each component agrees with the first orientation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Vec<bool>>,
}

/// Filling summary plus the laws it must satisfy.
pub fn filling_report(k: &TCurve) -> Result<(FillingReport, Vec<Invariant>), ComputeError> {
    let f = build_filling(k)?;
    let (s, ty) = classify_filling(&f);
    let verdict = harnack_check(k, &f);
    let tri = k.setting().triangulation();
    let d = k.component_count() as i64;
    let expected = d + 1 - tri.vertex_count() as i64 + tri.boundary_edge_count() as i64;
    let orientation = match ty {
        CurveType::TypeI => Some(orient_curve(k, &f, false)?.agrees),
        CurveType::TypeII => None,
    };
    let invariants = vec![
        Invariant::with_detail(
            "harnack bound",
            verdict.bound_holds,
            format!("{} components, {} interior points", verdict.components, verdict.interior_points),
        ),
        Invariant::new(
            "capped euler = filling euler + components",
            s.euler_characteristic == f.euler_characteristic() + d,
        ),
        Invariant::with_detail(
            "capped euler = D + 1 - V + L",
            s.euler_characteristic == expected && verdict.identity_holds,
            format!("{} vs {expected}", s.euler_characteristic),
        ),
        Invariant::new(
            "maximal curves are type I spheres",
            !verdict.maximal || (ty == CurveType::TypeI && s.topology.name == "sphere"),
        ),
    ];
    let report = FillingReport {
        filling_euler: f.euler_characteristic(),
        components: k.component_count(),
        capped_euler: s.euler_characteristic,
        capped_surface: s.topology.name.clone(),
        orientable: s.orientable,
        genus: s.genus,
        crosscaps: s.crosscaps,
        curve_type: ty.to_string(),
        twists: f.twist_count(),
        folds: f.fold_count(),
        interior_points: verdict.interior_points,
        maximal: verdict.maximal,
        orientation,
    };
    Ok((report, invariants))
}

#[derive(Serialize, Clone, Debug)]
pub struct HarnackReport {
    pub harnack_type: [u8; 3],
    pub predicted_components: usize,
    pub predicted_ovals: Vec<QuadrantOvals>,
    /// `nontrivial`, or the quadrant whose ovals the outer oval surrounds.
    pub predicted_outer: String,
    pub matches: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<String>,
}

pub fn harnack_report(h: tcurve::HarnackType, predicted: &PredictedCensus, k: &TCurve) -> HarnackReport {
    let check = predicted.check(k);
    HarnackReport {
        harnack_type: [h.c, h.a, h.b],
        predicted_components: predicted.total(),
        predicted_ovals: Quadrant::ALL
            .iter()
            .map(|&q| {
                let of = |s: Sign| predicted.ovals.iter().filter(|o| o.0 == q && o.1 == s).count();
                QuadrantOvals { quadrant: quadrant(q), positive: of(Sign::Plus), negative: of(Sign::Minus) }
            })
            .collect(),
        predicted_outer: match predicted.outer {
            PredictedOuter::Nontrivial => "nontrivial".to_owned(),
            PredictedOuter::Surrounding(q) => format!("surrounding {q}"),
        },
        matches: check.is_ok(),
        mismatch: check.err().map(|e| e.to_string()),
    }
}

#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct ComponentCount {
    pub components: usize,
    pub count: u64,
}

#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct EnumerationReport {
    pub lattice_points: usize,
    pub interior_points: usize,
    pub runs: u64,
    /// Present when the sign vectors were sampled instead of swept.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub max_components: usize,
    pub maximal: u64,
    pub type_i: u64,
    pub type_ii: u64,
    pub distribution: Vec<ComponentCount>,
    /// First few sign vectors breaking a law, one `+`/`-` per sorted lattice point.
    pub violations: Vec<String>,
}

/// Everything a subcommand produced.
#[derive(Serialize, Clone, Debug, Default)]
pub struct Report {
    pub command: String,
    pub polygon: Vec<[i64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surface: Option<SurfaceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve: Option<CurveReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filling: Option<FillingReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub harnack: Option<HarnackReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub enumeration: Option<EnumerationReport>,
    pub invariants: Vec<Invariant>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn all_hold(&self) -> bool {
        self.invariants.iter().all(|i| i.holds)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
