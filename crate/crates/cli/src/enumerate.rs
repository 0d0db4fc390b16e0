//! Sweeps sign vectors over one triangulation, in parallel.

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use tcurve::tcurve::{extract_curve, CurveSetting};
use tcurve::{build_filling, classify_filling, harnack_check, CurveType, PrimitiveTriangulation, SignDistribution};
use thiserror::Error;

use crate::report::{ComponentCount, ComputeError, EnumerationReport};

pub const DEFAULT_CAP: usize = 16;
/// Hard ceiling on the cap: the sweep has 2^cap runs.
pub const MAX_CAP: usize = 30;

#[derive(Debug, Error)]
pub enum EnumerateError {
    #[error("{points} lattice points exceed the enumeration cap of {cap}; raise --cap or pass --seed to sample")]
    CapExceeded { points: usize, cap: usize },
    #[error("cap {0} is above the supported maximum of {MAX_CAP}")]
    CapTooLarge(usize),
    #[error(transparent)]
    Compute(#[from] ComputeError),
}

struct Run {
    components: usize,
    laws_hold: bool,
    maximal: bool,
    type_i: bool,
}

fn run_one(setting: &Arc<CurveSetting>, signs: &SignDistribution) -> Result<Run, ComputeError> {
    let k = extract_curve(setting, signs)?;
    let f = build_filling(&k)?;
    let (s, ty) = classify_filling(&f);
    let verdict = harnack_check(&k, &f);
    let d = k.component_count() as i64;
    let laws_hold =
        verdict.bound_holds && verdict.identity_holds && s.euler_characteristic == f.euler_characteristic() + d;
    Ok(Run { components: k.component_count(), laws_hold, maximal: verdict.maximal, type_i: ty == CurveType::TypeI })
}

/// Runs every sign vector when the lattice point count is within `cap`,
/// otherwise `2^cap` random vectors drawn from `seed`.
pub fn enumerate(
    triangulation: &PrimitiveTriangulation,
    cap: usize,
    seed: Option<u64>,
) -> Result<EnumerationReport, EnumerateError> {
    if cap > MAX_CAP {
        return Err(EnumerateError::CapTooLarge(cap));
    }
    let polygon = triangulation.polygon().clone();
    let points = polygon.lattice_points().len();
    let sampled = points > cap;
    if sampled && seed.is_none() {
        return Err(EnumerateError::CapExceeded { points, cap });
    }
    let runs = 1u64 << cap.min(points);
    // Masks are generated up front so the result does not depend on scheduling.
    let masks: Vec<Vec<bool>> = if sampled {
        let mut rng = StdRng::seed_from_u64(seed.unwrap_or_default());
        (0..runs).map(|_| (0..points).map(|_| rng.gen()).collect()).collect()
    } else {
        (0..runs).map(|bits| (0..points).map(|i| (bits >> i) & 1 == 1).collect()).collect()
    };
    let setting = CurveSetting::new(triangulation.clone());
    let results: Vec<Run> = masks
        .par_iter()
        .map(|mask| {
            let signs = SignDistribution::from_fn(&polygon, |p| {
                let i = polygon.point_index(p).expect("lattice point");
                if mask[i] {
                    tcurve::Sign::Minus
                } else {
                    tcurve::Sign::Plus
                }
            });
            run_one(&setting, &signs)
        })
        .collect::<Result<_, _>>()?;

    let max_components = results.iter().map(|r| r.components).max().unwrap_or(0);
    let mut histogram = vec![0u64; max_components + 1];
    for r in &results {
        histogram[r.components] += 1;
    }
    let violations = results
        .iter()
        .zip(&masks)
        .filter(|(r, _)| !r.laws_hold)
        .take(8)
        .map(|(_, m)| m.iter().map(|&neg| if neg { '-' } else { '+' }).collect())
        .collect();
    let count = |f: fn(&Run) -> bool| results.iter().filter(|r| f(r)).count() as u64;
    Ok(EnumerationReport {
        lattice_points: points,
        interior_points: polygon.census().interior,
        runs,
        seed: if sampled { seed } else { None },
        max_components,
        maximal: count(|r| r.maximal),
        type_i: count(|r| r.type_i),
        type_ii: count(|r| !r.type_i),
        distribution: histogram
            .into_iter()
            .enumerate()
            .filter(|&(_, n)| n > 0)
            .map(|(components, count)| ComponentCount { components, count })
            .collect(),
        violations,
    })
}
