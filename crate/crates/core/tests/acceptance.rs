//! Acceptance run: one line per criterion, nonzero exit on any failure.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tcurve::lattice::{LatticePoint, LatticePolygon};
use tcurve::surface::{AmbientSurface, Mat2, Quadrant};
use tcurve::tcurve::{extract_curve, extract_curve_on, CurveSetting, TCurve};
use tcurve::{
    build_filling, classify_filling, harnack_check, harnack_distribution, predicted_harnack_census, theta_action,
    transform_curve, ComponentClass, CurveType, HarnackType, PrimitiveTriangulation, Sign, SignDistribution, Transform,
};
use tcurve_testkit::{filling_oracle, random_polygon, random_signs, random_triangulation, surface_oracle};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn grid(d: i64) -> (LatticePolygon, PrimitiveTriangulation) {
    let p = LatticePolygon::standard_triangle(d);
    let tri = PrimitiveTriangulation::grid(&p).unwrap();
    (p, tri)
}

fn harnack_curve(d: i64, h: HarnackType) -> TCurve {
    let (p, tri) = grid(d);
    extract_curve_on(&tri, &harnack_distribution(&p, h)).unwrap()
}

fn polygon(coords: &[(i64, i64)]) -> LatticePolygon {
    LatticePolygon::from_coords(coords).unwrap()
}

fn surface_classes() -> Outcome {
    for d in 1..=6 {
        let t = AmbientSurface::build(&LatticePolygon::standard_triangle(d)).classify_topology();
        ensure(!t.orientable && t.crosscaps == Some(1) && t.components == 1, || format!("S(T_{d}) is {}", t.name))?;
    }
    for d in 1..=4 {
        let t = AmbientSurface::build(&polygon(&[(0, 0), (2 * d, 0), (0, d)])).classify_topology();
        ensure(t.orientable && t.components == 1 && t.genus == Some(0), || format!("d={d}: {}", t.name))?;
    }
    let diamond = AmbientSurface::build(&polygon(&[(1, 0), (2, 1), (1, 2), (0, 1)])).classify_topology();
    ensure(diamond.orientable && diamond.components == 2 && diamond.genus == Some(0), || diamond.name.clone())?;
    let square = AmbientSurface::build(&polygon(&[(0, 0), (2, 0), (2, 2), (0, 2)])).classify_topology();
    ensure(square.orientable && square.components == 1 && square.genus == Some(1), || square.name.clone())?;
    Ok("RP² for T1..T6, spheres, two spheres, torus".into())
}

fn atlas_algebra() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2);
    let mut checked = 0;
    let mut odd_histogram = [0usize; 8];
    while checked < 50 {
        let p = random_polygon(&mut rng, 8, 8);
        let s = AmbientSurface::build(&p);
        let r = s.r();
        if r < 3 {
            continue;
        }
        let atlas = s.canonical_atlas().map_err(|e| e.to_string())?;
        for j in 0..r {
            let prev = atlas.charts[(j + r - 1) % r].parity_matrix.0;
            let expected = prev * atlas.gluings[j].matrix();
            ensure(atlas.charts[j].parity_matrix.0 == expected, || {
                format!("chart {j} of {:?} breaks M_j = M_(j-1)·A", p.vertices())
            })?;
        }
        ensure(atlas.cyclic_product() == Mat2::IDENTITY, || format!("cyclic product of {:?}", p.vertices()))?;
        let odd: Vec<usize> = (0..r).filter(|&j| atlas.eta[j] == 1).collect();
        ensure(odd.len() != 1, || format!("single odd broken edge on {:?}", p.vertices()))?;
        let adjacent_pair = odd.len() == 2 && ((odd[0] + 1) % r == odd[1] || (odd[1] + 1) % r == odd[0]);
        ensure(!adjacent_pair, || format!("two consecutive odd broken edges only, on {:?}", p.vertices()))?;
        odd_histogram[odd.len().min(7)] += 1;
        checked += 1;
    }
    Ok(format!("50 polygons with r >= 3, odd broken-edge counts {odd_histogram:?}"))
}

fn degree_five_census() -> Outcome {
    let k = harnack_curve(5, HarnackType::new(1, 0, 0));
    ensure(k.component_count() == 7, || format!("{} components", k.component_count()))?;
    let census = k.census().map_err(|e| e.to_string())?;
    let per_quadrant: Vec<usize> = Quadrant::ALL.iter().map(|&q| census.ovals_in(q).len()).collect();
    let mut counts = per_quadrant.clone();
    counts.sort();
    ensure(counts == [1, 1, 1, 3], || format!("ovals per quadrant {per_quadrant:?}"))?;
    let empty = Quadrant::ALL.iter().flat_map(|&q| census.ovals_in(q)).all(|&(_, depth)| depth == 0);
    ensure(empty, || "nested ovals inside a quadrant".into())?;
    let records = k.classify_components().map_err(|e| e.to_string())?;
    let nontrivial: Vec<usize> =
        (0..records.len()).filter(|&c| records[c].class == ComponentClass::NontrivialOnRP2).collect();
    ensure(nontrivial.len() == 1, || format!("{} nontrivial components", nontrivial.len()))?;
    let crossing = &records[nontrivial[0]].crossing;
    ensure(crossing.contains(&1), || format!("crossing parity {crossing:?}"))?;
    for (c, rec) in records.iter().enumerate() {
        if c != nontrivial[0] {
            ensure(rec.children.is_empty(), || format!("oval {c} is not empty"))?;
        }
    }
    Ok(format!("7 components, ovals per quadrant {per_quadrant:?}, one odd-crossing component"))
}

fn degree_six_census() -> Outcome {
    for h in HarnackType::all() {
        let k = harnack_curve(6, h);
        ensure(k.component_count() == 11, || format!("type {h}: {} components", k.component_count()))?;
        let records = k.classify_components().map_err(|e| e.to_string())?;
        ensure(records.iter().all(|r| r.class.is_oval()), || format!("type {h}: a non-oval component"))?;
        let outermost: Vec<usize> = (0..records.len()).filter(|&c| records[c].parent.is_none()).collect();
        let empty = outermost.iter().filter(|&&c| records[c].children.is_empty()).count();
        let holding: Vec<usize> = outermost.iter().copied().filter(|&c| !records[c].children.is_empty()).collect();
        ensure(empty == 9 && holding.len() == 1, || format!("type {h}: {empty} empty outermost, {holding:?} nests"))?;
        let inner = &records[holding[0]].children;
        ensure(inner.len() == 1 && records[inner[0]].children.is_empty(), || format!("type {h}: inner {inner:?}"))?;
    }
    Ok("all 8 types: 11 components, 9 empty outermost ovals, 1 oval around 1 empty oval".into())
}

fn harnack_bound_exhaustive() -> Outcome {
    let start = Instant::now();
    let mut instances = 0;
    for d in [2, 3] {
        let (p, tri) = grid(d);
        let (v, l) = (tri.vertex_count() as i64, tri.boundary_edge_count() as i64);
        let i = p.census().interior;
        let setting = CurveSetting::new(tri);
        for bits in 0..(1u64 << p.lattice_points().len()) {
            let k = extract_curve(&setting, &SignDistribution::from_bits(&p, bits)).map_err(|e| e.to_string())?;
            let f = build_filling(&k).map_err(|e| e.to_string())?;
            let (s, _) = classify_filling(&f);
            let dd = k.component_count() as i64;
            ensure(dd as usize <= i + 1, || format!("T{d} bits {bits:b}: D = {dd} > i + 1"))?;
            ensure(s.euler_characteristic == f.euler_characteristic() + dd, || format!("T{d} bits {bits:b}"))?;
            ensure(s.euler_characteristic == dd + 1 - v + l, || format!("T{d} bits {bits:b}: χ(Σ) identity"))?;
            instances += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1} s"))?;
    Ok(format!("{instances} sign vectors in {secs:.2} s"))
}

fn filling_arithmetic() -> Outcome {
    let k = harnack_curve(3, HarnackType::new(0, 0, 0));
    let f = build_filling(&k).map_err(|e| e.to_string())?;
    let (s, ty) = classify_filling(&f);
    let verdict = harnack_check(&k, &f);
    ensure(f.euler_characteristic() == 0, || format!("χ(F) = {}", f.euler_characteristic()))?;
    ensure(k.component_count() == 2, || format!("D = {}", k.component_count()))?;
    ensure(s.euler_characteristic == 2 && s.topology.name == "sphere", || s.topology.name.clone())?;
    ensure(ty == CurveType::TypeI && verdict.maximal, || format!("{ty}, maximal = {}", verdict.maximal))?;
    // Doubling F along its boundary gives a closed orientable surface of χ = 2χ(F).
    let doubled = 2 * f.euler_characteristic();
    ensure(doubled == 0 && s.orientable && (2 - doubled) / 2 == 1, || format!("doubled χ = {doubled}"))?;
    Ok("χ(F)=0, D=2, sphere, type I, maximal, double has genus 1".into())
}

fn compare_with_oracle(tri: &PrimitiveTriangulation, signs: &SignDistribution) -> Result<(), String> {
    let k = extract_curve_on(tri, signs).map_err(|e| e.to_string())?;
    let f = build_filling(&k).map_err(|e| e.to_string())?;
    let (s, _) = classify_filling(&f);
    let o = filling_oracle(tri, signs);
    ensure(
        f.euler_characteristic() == o.euler
            && f.boundary_cycles().len() == o.boundary_cycles
            && k.component_count() == o.boundary_cycles
            && s.orientable == o.orientable,
        || format!("filling of {:?} disagrees with the cell complex", tri.polygon().vertices()),
    )?;
    let so = surface_oracle(tri.polygon());
    let class = AmbientSurface::build(tri.polygon()).classify_topology();
    ensure(
        class.euler_characteristic == so.euler
            && class.orientable == so.orientable
            && class.components as usize == so.components,
        || format!("surface of {:?} disagrees with the identification oracle", tri.polygon().vertices()),
    )
}

fn oracle_equivalence() -> Outcome {
    let mut count = 0;
    let named = [(5, HarnackType::new(1, 0, 0)), (3, HarnackType::new(0, 0, 0))];
    let mut instances: Vec<(i64, HarnackType)> = named.to_vec();
    instances.extend(HarnackType::all().map(|h| (6, h)));
    instances.extend(HarnackType::all().map(|h| (4, h)));
    for (d, h) in instances {
        let (p, tri) = grid(d);
        compare_with_oracle(&tri, &harnack_distribution(&p, h))?;
        count += 1;
    }
    for d in [2, 3] {
        let (p, tri) = grid(d);
        for bits in 0..(1u64 << p.lattice_points().len()) {
            compare_with_oracle(&tri, &SignDistribution::from_bits(&p, bits))?;
            count += 1;
        }
    }
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..100 {
        let p = random_polygon(&mut rng, 5, 7);
        let tri = random_triangulation(&p, &mut rng, 30);
        let signs = random_signs(&mut rng, &p);
        compare_with_oracle(&tri, &signs)?;
        count += 1;
    }
    Ok(format!("{count} instances agree with both oracles"))
}

fn degree_parity() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    for d in 2..=5 {
        let (p, tri) = grid(d);
        let setting = CurveSetting::new(tri);
        for _ in 0..200 {
            let k = extract_curve(&setting, &random_signs(&mut rng, &p)).map_err(|e| e.to_string())?;
            ensure(!k.is_empty(), || format!("empty curve on T{d}"))?;
            let v = k.degree_parity_check().map_err(|e| e.to_string())?;
            let expected = usize::from(d % 2 == 1);
            ensure(v.holds && v.nontrivial == expected, || format!("T{d}: {} nontrivial components", v.nontrivial))?;
        }
    }
    Ok("800 curves on T2..T5: a nontrivial component exactly for odd d".into())
}

fn symmetry_laws() -> Outcome {
    let transforms = [
        Transform::Translate(LatticePoint::new(1, 1)),
        Transform::Translate(LatticePoint::new(2, 1)),
        Transform::Linear([[0, 1], [1, 0]]),
        Transform::Linear([[1, 1], [0, 1]]),
        Transform::Linear([[1, 0], [2, 1]]),
    ];
    let mut rng = StdRng::seed_from_u64(9);
    for n in 0..20 {
        let p = if n < 5 {
            LatticePolygon::standard_triangle(rng.gen_range(2..=5))
        } else {
            random_polygon(&mut rng, 4, 6)
        };
        let tri = random_triangulation(&p, &mut rng, 20);
        let k = extract_curve_on(&tri, &random_signs(&mut rng, &p)).map_err(|e| e.to_string())?;
        let before = k.census().map_err(|e| e.to_string())?;
        for f in transforms {
            let image = transform_curve(&k, f).map_err(|e| e.to_string())?;
            let after = image.census().map_err(|e| e.to_string())?;
            ensure(after.components == before.components, || format!("curve {n}, {f:?}: component count"))?;
            ensure(after.boundary == before.boundary, || format!("curve {n}, {f:?}: boundary components"))?;
            for q in Quadrant::ALL {
                let factor = f.sign_factor(q);
                let mut expected: Vec<(Sign, usize)> =
                    before.ovals_in(q).iter().map(|&(s, depth)| (s * factor, depth)).collect();
                expected.sort();
                let target = f.quadrant_image(q);
                ensure(after.ovals_in(target) == expected, || format!("curve {n}, {f:?}: quadrant {q}"))?;
            }
        }
    }
    Ok("20 curves × 5 transforms".into())
}

fn theta_action_law() -> Outcome {
    let (p, tri) = grid(4);
    let setting = CurveSetting::new(tri);
    for h in HarnackType::all() {
        let delta = harnack_distribution(&p, h);
        let k = extract_curve(&setting, &delta).map_err(|e| e.to_string())?;
        predicted_harnack_census(&p, h).check(&k).map_err(|e| format!("type {h}: {e}"))?;
        let base = k.census().map_err(|e| e.to_string())?;
        for theta in HarnackType::all() {
            let moved = theta_action(theta, &delta);
            ensure(moved == harnack_distribution(&p, h + theta), || format!("θ = {theta} on type {h}"))?;
            let image =
                extract_curve(&setting, &moved).map_err(|e| e.to_string())?.census().map_err(|e| e.to_string())?;
            ensure(image.boundary == base.boundary, || format!("θ = {theta} on type {h}: boundary"))?;
            for q in Quadrant::ALL {
                let flip = Sign::from_bit(theta.c);
                let expected: Vec<(Sign, usize)> =
                    base.ovals_in(q + theta.quadrant()).iter().map(|&(s, depth)| (s * flip, depth)).collect();
                let mut expected = expected;
                expected.sort();
                ensure(image.ovals_in(q) == expected, || format!("θ = {theta} on type {h}: quadrant {q}"))?;
            }
        }
    }
    Ok("8 types match the prediction; 64 θ-translates match the reflected censuses".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("surface classification", surface_classes),
        ("atlas algebra", atlas_algebra),
        ("Harnack census, degree 5", degree_five_census),
        ("Harnack census, degree 6", degree_six_census),
        ("Harnack bound, exhaustive", harnack_bound_exhaustive),
        ("filling arithmetic", filling_arithmetic),
        ("oracle equivalence", oracle_equivalence),
        ("degree parity", degree_parity),
        ("symmetry laws", symmetry_laws),
        ("θ-action", theta_action_law),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = match panic::catch_unwind(AssertUnwindSafe(run)) {
            Ok(o) => o,
            Err(e) => Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into())),
        };
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} ({ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} ({ms} ms)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
