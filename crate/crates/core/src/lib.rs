//! Combinatorial patchworking: ambient surfaces of lattice polygons, T-curves
//! cut out by sign distributions on primitive triangulations, and the
//! T-fillings that cap them off.

mod dsu;
pub mod filling;
pub mod lattice;
pub mod surface;
pub mod tcurve;
pub mod triangulation;

pub use filling::{
    build_filling, classify_filling, harnack_check, orient_curve, CappedSurface, CurveType, FillingError,
    HarnackVerdict, TFilling,
};
pub use lattice::{BrokenEdge, LatticeCensus, LatticeError, LatticePoint, LatticePolygon, LatticeSegment, Parity};
pub use surface::{AmbientSurface, Atlas, Quadrant, SurfaceError, TopologyClass};
pub use tcurve::{
    extract_curve, harnack_distribution, predicted_harnack_census, theta_action, transform_curve, ComponentClass,
    CurveError, CurveSetting, HarnackType, Sign, SignDistribution, TCurve, Transform,
};
pub use triangulation::{IncidenceGraphs, PrimitiveTriangulation, TriangulationError};
