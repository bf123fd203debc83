//! The invariant suite behind `orthotripod check`: every module-level
//! property in one place, seeded and deterministic.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::atlas::build_atlas;
use crate::caustic::{compute_caustic, core_membership, double_normal_partition, Membership};
use crate::curve::{Curve, DerivMode, TWO_PI};
use crate::equilibrium::{
    balancing_charges, ceva_residual, force_scale, positive_charge_test, potential,
    sign_pattern_string, tangential_residual, tripods_from_center, ChargeTriple, ForceLaw,
    InteractionMatrix,
};
use crate::geom::Vec2;
use crate::kernel::{double_normals, normal_count, normal_feet};
use crate::{Error, Params};

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CheckReport {
    fn pass(name: &'static str, detail: impl Into<String>) -> Self {
        CheckReport {
            name,
            pass: true,
            detail: detail.into(),
        }
    }
    fn fail(name: &'static str, detail: impl Into<String>) -> Self {
        CheckReport {
            name,
            pass: false,
            detail: detail.into(),
        }
    }
}

fn report(name: &'static str, result: Result<String, String>) -> CheckReport {
    match result {
        Ok(d) => CheckReport::pass(name, d),
        Err(d) => CheckReport::fail(name, d),
    }
}

/// Run the whole suite. `fast` skips the resolution-stability atlas check.
pub fn run_all(seed: u64, fast: bool, params: &Params) -> Vec<CheckReport> {
    let mut out = vec![
        report("frame_orthonormality", frame_orthonormality(seed)),
        report("derivative_mode_agreement", derivative_mode_agreement()),
        report("evolute_envelope", evolute_envelope()),
        report("root_completeness", root_completeness(seed, params)),
        report("normal_count_parity", normal_count_parity(seed, params)),
        report("core_lemma", core_lemma(seed, params)),
        report("double_normals", double_normal_properties(params)),
        report(
            "cusps_at_curvature_extrema",
            cusps_at_curvature_extrema(params),
        ),
        report(
            "core_equals_interior_on_ellipse",
            core_vs_interior(seed, params),
        ),
        report("sign_constancy_per_subregion", sign_constancy(seed, params)),
        report("zero_charge_on_double_normals", zero_charge_on_axes(params)),
        report("equivalence_theorem", equivalence_theorem(seed, params)),
        report("law_independence", law_independence(seed, params)),
        report(
            "projective_consistency",
            projective_consistency(seed, params),
        ),
        report(
            "positive_test_cross_check",
            positive_cross_check(seed, params),
        ),
        report("gradient_oracle", gradient_oracle(seed, params)),
        report("atlas_structure", atlas_structure(params)),
    ];
    if !fast {
        out.push(report(
            "atlas_certificate_stability",
            atlas_stability(params),
        ));
    }
    out
}

fn standard_curves() -> Vec<(&'static str, Curve)> {
    vec![
        ("circle{1}", Curve::circle(1.0).unwrap()),
        ("ellipse{2,1}", Curve::ellipse(2.0, 1.0).unwrap()),
        (
            "parabola{1}",
            Curve::parabola_arc(1.0, (-3.0, 3.0)).unwrap(),
        ),
        (
            "fourier{1,0,0,0.05}",
            Curve::fourier_oval(vec![1.0, 0.0, 0.0, 0.05], vec![]).unwrap(),
        ),
    ]
}

fn ellipse21() -> Curve {
    Curve::ellipse(2.0, 1.0).unwrap()
}

fn frame_orthonormality(seed: u64) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (name, c) in standard_curves() {
        let (lo, hi) = c.domain();
        for _ in 0..1000 {
            let t = rng.gen_range(lo..hi);
            let cp = c.eval(t).map_err(|e| e.to_string())?;
            let checks = [
                (cp.tangent.norm() - 1.0).abs(),
                (cp.normal.norm() - 1.0).abs(),
                cp.tangent.dot(cp.normal).abs(),
                (cp.tangent.cross(cp.normal) - 1.0).abs(),
            ];
            if checks.iter().any(|&v| v > 1e-9) {
                return Err(format!("{name}: frame defect {checks:?} at t={t}"));
            }
        }
    }
    Ok("4 curves x 1000 parameters within 1e-9".into())
}

fn derivative_mode_agreement() -> Result<String, String> {
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for (name, c) in standard_curves() {
        let fd = c
            .clone()
            .with_mode(DerivMode::CentralDiff { h })
            .map_err(|e| e.to_string())?;
        let (lo, _) = c.domain();
        for k in 0..200 {
            let t = lo + c.span() * (k as f64 + 0.31) / 200.0;
            let pa = c.eval(t).map_err(|e| e.to_string())?;
            let pf = fd.eval(t).map_err(|e| e.to_string())?;
            let dt = (pa.tangent - pf.tangent).norm();
            let dk = (pa.kappa - pf.kappa).abs();
            worst = worst.max(dt).max(dk);
            if dt > 1e-6 || dk > 1e-6 {
                return Err(format!(
                    "{name}: tangent diff {dt:.2e}, kappa diff {dk:.2e} at t={t}"
                ));
            }
        }
    }
    Ok(format!(
        "max frame/curvature deviation {worst:.2e} (tol 1e-6)"
    ))
}

fn evolute_envelope() -> Result<String, String> {
    let delta = 1e-4;
    for (name, c) in standard_curves() {
        if !c.is_closed() {
            continue;
        }
        let (lo, _) = c.domain();
        for k in 0..100 {
            let t = lo + c.span() * (k as f64 + 0.17) / 100.0;
            let p0 = c.eval(t).map_err(|e| e.to_string())?;
            let p1 = c.eval(t + delta).map_err(|e| e.to_string())?;
            let x = crate::geom::least_squares_line_point(&[p0.p, p1.p], &[p0.normal, p1.normal])
                .ok_or_else(|| format!("{name}: parallel normals at t={t}"))?;
            let e = c.center_of_curvature(t).map_err(|e| e.to_string())?;
            if (x - e).norm() > 1e-2 * c.diameter() {
                return Err(format!(
                    "{name}: normals at t={t} meet {:.3e} away from the evolute",
                    (x - e).norm()
                ));
            }
        }
    }
    Ok("normal envelope within 1e-2 x diameter of the evolute".into())
}

fn root_completeness(seed: u64, params: &Params) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x01);
    let c = ellipse21();
    let caustic = compute_caustic(&c, 2048, params).map_err(|e| e.to_string())?;
    let mut done = 0;
    while done < 50 {
        let q = Vec2::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
        if caustic.distance(q) < 2e-3 * c.diameter() {
            continue;
        }
        let feet = normal_feet(&c, q, params).map_err(|e| e.to_string())?;
        let dense = 16 * params.scan_samples;
        let mut count = 0;
        let mut prev = f64::NAN;
        for k in 0..=dense {
            let t = TWO_PI * (k as f64 + 0.5) / dense as f64;
            let cp = c.eval(t).map_err(|e| e.to_string())?;
            let g = (q - cp.p).dot(cp.tangent);
            if !prev.is_nan() && prev * g < 0.0 {
                count += 1;
            }
            prev = g;
        }
        if feet.len() != count {
            return Err(format!(
                "probe {q:?}: solver found {} feet, 16x oracle {}",
                feet.len(),
                count
            ));
        }
        done += 1;
    }
    Ok("50 probes agree with the 16x-density sign-change oracle".into())
}

fn normal_count_parity(seed: u64, params: &Params) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x02);
    for (name, c) in [
        ("ellipse{2,1}", ellipse21()),
        (
            "fourier{1,0,0,0.05}",
            Curve::fourier_oval(vec![1.0, 0.0, 0.0, 0.05], vec![]).unwrap(),
        ),
    ] {
        let caustic = compute_caustic(&c, 2048, params).map_err(|e| e.to_string())?;
        let mut done = 0;
        while done < 100 {
            let q = Vec2::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
            if caustic.distance(q) < 2e-3 * c.diameter() {
                continue;
            }
            let n = normal_count(&c, q, params).map_err(|e| e.to_string())?;
            if n % 2 != 0 {
                return Err(format!("{name}: odd normal count {n} at {q:?}"));
            }
            done += 1;
        }
    }
    Ok("n(Q) even on 200 probes off the caustic".into())
}

fn core_lemma(seed: u64, params: &Params) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x03);
    for (name, c) in [
        ("ellipse{2,1}", ellipse21()),
        (
            "fourier{1,0,0,0.05}",
            Curve::fourier_oval(vec![1.0, 0.0, 0.0, 0.05], vec![]).unwrap(),
        ),
    ] {
        let caustic = compute_caustic(&c, 2048, params).map_err(|e| e.to_string())?;
        let mut done = 0;
        while done < 500 {
            let q = Vec2::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
            if caustic.distance(q) < 2e-3 * c.diameter() {
                continue;
            }
            let n = normal_count(&c, q, params).map_err(|e| e.to_string())? as i32;
            let i = caustic.winding_index(q).map_err(|e| e.to_string())?;
            if n != 2 * i + 2 {
                return Err(format!("{name}: n={n}, i={i} at {q:?}"));
            }
            done += 1;
        }
    }
    Ok("n(Q) = 2 i(Q) + 2 on 2 x 500 probes".into())
}

fn double_normal_properties(params: &Params) -> Result<String, String> {
    let c = ellipse21();
    let dn = double_normals(&c, params).map_err(|e| e.to_string())?;
    if dn.len() != 2 {
        return Err(format!(
            "ellipse: expected 2 double normals, got {}",
            dn.len()
        ));
    }
    for d in &dn {
        let ps = c.eval(d.s).map_err(|e| e.to_string())?;
        let pt = c.eval(d.t).map_err(|e| e.to_string())?;
        let chord = ps.p - pt.p;
        // the defining equations hold in both orders (swap symmetry)
        if chord.dot(ps.tangent).abs() > 1e-9 || chord.dot(pt.tangent).abs() > 1e-9 {
            return Err(format!("residual at ({}, {})", d.s, d.t));
        }
    }
    match double_normals(&Curve::circle(1.0).unwrap(), params) {
        Err(Error::ConstantWidthSuspected { .. }) => {}
        other => {
            return Err(format!(
                "circle: expected ConstantWidthSuspected, got {other:?}"
            ))
        }
    }
    let oval = Curve::fourier_oval(vec![1.0, 0.0, 0.03, 0.02], vec![0.015]).unwrap();
    let k = double_normals(&oval, params)
        .map_err(|e| e.to_string())?
        .len();
    if k < 2 {
        return Err(format!("perturbed oval: {k} double normals, expected >= 2"));
    }
    Ok(format!("ellipse axes found; circle flagged; oval has {k}"))
}

fn cusps_at_curvature_extrema(params: &Params) -> Result<String, String> {
    let pairs = [
        ("ellipse{2,1}", ellipse21(), 4usize),
        (
            "fourier{1,0,0,0.05}",
            Curve::fourier_oval(vec![1.0, 0.0, 0.0, 0.05], vec![]).unwrap(),
            6,
        ),
    ];
    for (name, c, expect) in pairs {
        let g = compute_caustic(&c, 2048, params).map_err(|e| e.to_string())?;
        if g.cusps.len() != expect {
            return Err(format!(
                "{name}: {} cusps, expected {expect}",
                g.cusps.len()
            ));
        }
        for &(t, _) in &g.cusps {
            let dk = c.curvature_derivative(t).map_err(|e| e.to_string())?;
            let scale = c
                .curvature_derivative(t + 0.05)
                .map_err(|e| e.to_string())?
                .abs()
                .max(1e-6);
            if dk.abs() > 1e-5 * scale.max(1.0) {
                return Err(format!("{name}: kappa'({t}) = {dk:.3e} at a cusp"));
            }
        }
    }
    Ok("cusp parameters are curvature extrema (4 and 6 cusps)".into())
}

fn core_vs_interior(seed: u64, params: &Params) -> Result<String, String> {
    // for the ellipse the core coincides with the interior region: a point is
    // inside the core iff it has at least 4 normals
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x04);
    let c = ellipse21();
    let caustic = compute_caustic(&c, 2048, params).map_err(|e| e.to_string())?;
    let mut done = 0;
    while done < 300 {
        let q = Vec2::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
        if caustic.distance(q) < 2e-3 * c.diameter() {
            continue;
        }
        let inside = match core_membership(&c, &caustic, q, params) {
            Ok(Membership::Inside) => true,
            Ok(Membership::Outside) => false,
            Ok(Membership::Boundary) => continue,
            Err(e) => return Err(e.to_string()),
        };
        let n = normal_count(&c, q, params).map_err(|e| e.to_string())?;
        if inside != (n >= 4) {
            return Err(format!("membership {inside} but n={n} at {q:?}"));
        }
        done += 1;
    }
    Ok("core membership equals n >= 4 on 300 probes".into())
}

fn sign_constancy(seed: u64, params: &Params) -> Result<String, String> {
    // The multiset of the four tripod sign patterns is constant on each
    // sign region of the ellipse core. Charge signs change only where a
    // charge vanishes, which happens when the orthotricentre crosses a
    // double normal line (one charge through zero) or the curve itself
    // (the centre passes through a foot; two charges flip together), so
    // the regions are the quadrants cut by the ellipse.
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x05);
    let c = ellipse21();
    let part = double_normal_partition(&c, params).map_err(|e| e.to_string())?;
    let caustic = compute_caustic(&c, 2048, params).map_err(|e| e.to_string())?;
    let inside_curve = |q: Vec2| (q.x / 2.0) * (q.x / 2.0) + q.y * q.y < 1.0;
    let mut per_region: std::collections::BTreeMap<(Vec<i8>, bool), Vec<String>> =
        Default::default();
    let mut done = 0;
    while done < 120 {
        let q = Vec2::new(rng.gen_range(-1.4..1.4), rng.gen_range(-2.8..2.8));
        // stay clear of the region walls: caustic, axes, and the curve
        let wall = ((q.x / 2.0) * (q.x / 2.0) + q.y * q.y - 1.0).abs() < 0.02;
        if wall
            || caustic.distance(q) < 5e-3 * c.diameter()
            || !matches!(
                core_membership(&c, &caustic, q, params),
                Ok(Membership::Inside)
            )
            || !part.off_lines(q)
        {
            continue;
        }
        let tripods =
            tripods_from_center(&c, q, ForceLaw::Coulomb, params).map_err(|e| e.to_string())?;
        let mut multiset: Vec<String> = tripods
            .iter()
            .map(|t| sign_pattern_string(t.charges.sign_pattern(params.charge_zero_eps)))
            .collect();
        multiset.sort();
        let key = (part.label(q), inside_curve(q));
        match per_region.get(&key) {
            None => {
                per_region.insert(key, multiset);
            }
            Some(seen) => {
                if *seen != multiset {
                    return Err(format!("pattern multiset changed inside region {key:?}"));
                }
            }
        }
        done += 1;
    }
    if per_region.len() < 4 {
        return Err(format!(
            "sampled {} regions, expected at least 4",
            per_region.len()
        ));
    }
    // paths within one region: patterns stay constant pointwise
    for path in 0..10 {
        let a = 0.15 + 0.07 * (path as f64);
        let from = Vec2::new(0.1 + 0.02 * path as f64, 0.08);
        let to = Vec2::new(0.12, a.min(0.9));
        let steps = 24;
        let mut prev: Option<Vec<String>> = None;
        for s in 0..=steps {
            let q = from + (to - from) * (s as f64 / steps as f64);
            if !part.off_lines(q) {
                continue;
            }
            let tripods =
                tripods_from_center(&c, q, ForceLaw::Coulomb, params).map_err(|e| e.to_string())?;
            let mut pats: Vec<String> = tripods
                .iter()
                .map(|t| sign_pattern_string(t.charges.sign_pattern(params.charge_zero_eps)))
                .collect();
            pats.sort();
            if let Some(p) = &prev {
                if *p != pats {
                    return Err(format!("pattern changed along path {path} at {q:?}"));
                }
            }
            prev = Some(pats);
        }
    }
    Ok(format!(
        "{} sign regions with constant pattern multisets; 10 paths constant",
        per_region.len()
    ))
}

fn zero_charge_on_axes(params: &Params) -> Result<String, String> {
    let c = ellipse21();
    for &q in &[
        Vec2::new(0.3, 0.0),
        Vec2::new(-0.7, 0.0),
        Vec2::new(0.0, 0.5),
        Vec2::new(0.0, -1.5),
    ] {
        let tripods =
            tripods_from_center(&c, q, ForceLaw::Coulomb, params).map_err(|e| e.to_string())?;
        let min = tripods
            .iter()
            .map(|t| t.charges.min_abs())
            .fold(f64::INFINITY, f64::min);
        if min > 1e-6 {
            return Err(format!(
                "no zero charge at axis point {q:?} (min |q| = {min:.2e})"
            ));
        }
    }
    Ok("every axis probe carries a tripod with a zero charge".into())
}

fn random_core_probe(
    rng: &mut ChaCha8Rng,
    c: &Curve,
    caustic: &crate::caustic::CausticGeometry,
    params: &Params,
) -> Vec2 {
    loop {
        let q = Vec2::new(rng.gen_range(-1.45..1.45), rng.gen_range(-2.9..2.9));
        if caustic.distance(q) < 5e-3 * c.diameter() {
            continue;
        }
        if matches!(
            core_membership(c, caustic, q, params),
            Ok(Membership::Inside)
        ) {
            return q;
        }
    }
}

fn equivalence_theorem(seed: u64, params: &Params) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x06);
    let c = ellipse21();
    let caustic = compute_caustic(&c, 2048, params).map_err(|e| e.to_string())?;
    // forward: orthotripods admit balancing charges with zero residual
    let mut collected = 0;
    while collected < 200 {
        let q = random_core_probe(&mut rng, &c, &caustic, params);
        let tripods =
            tripods_from_center(&c, q, ForceLaw::Coulomb, params).map_err(|e| e.to_string())?;
        for tri in tripods {
            let r = tangential_residual(&tri.points, &tri.charges, ForceLaw::Coulomb)
                .map_err(|e| e.to_string())?;
            let scale = force_scale(&tri.points, &tri.charges, ForceLaw::Coulomb);
            let sup = r.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            if sup > 1e-8 * scale {
                return Err(format!(
                    "tripod at {q:?}: residual {sup:.3e} vs scale {scale:.3e}"
                ));
            }
            collected += 1;
        }
    }
    // reverse: random non-orthotripods admit no kernel solution
    let mut rejected = 0;
    while rejected < 200 {
        let ts = [
            rng.gen_range(0.0..TWO_PI),
            rng.gen_range(0.0..TWO_PI),
            rng.gen_range(0.0..TWO_PI),
        ];
        let pts = [
            c.eval(ts[0]).map_err(|e| e.to_string())?,
            c.eval(ts[1]).map_err(|e| e.to_string())?,
            c.eval(ts[2]).map_err(|e| e.to_string())?,
        ];
        let Ok(ceva) = ceva_residual(&pts) else {
            continue;
        };
        if ceva.relative() <= 1e-3 {
            continue;
        }
        match balancing_charges(&pts, ForceLaw::Coulomb, params) {
            Err(Error::NotOrthotripod { .. }) => {}
            other => return Err(format!("non-orthotripod accepted: {other:?}")),
        }
        // no nonzero q solves (a_ij) q = 0: the best unit candidate from any
        // row pair violates some row of the distance-free matrix
        let m = InteractionMatrix::distance_free(&pts)
            .map_err(|e| e.to_string())?
            .entries;
        let norm = |v: [f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let mut best = f64::INFINITY;
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let cr = [
                m[i][1] * m[j][2] - m[i][2] * m[j][1],
                m[i][2] * m[j][0] - m[i][0] * m[j][2],
                m[i][0] * m[j][1] - m[i][1] * m[j][0],
            ];
            let n = norm(cr);
            if n == 0.0 {
                continue;
            }
            let mut worst_row: f64 = 0.0;
            for row in m {
                let v = (row[0] * cr[0] + row[1] * cr[1] + row[2] * cr[2]) / n;
                worst_row = worst_row.max(v.abs() / norm(row));
            }
            best = best.min(worst_row);
        }
        if best < 1e-6 {
            return Err(format!(
                "rank-3 matrix admits near-kernel {best:.3e} at {ts:?}"
            ));
        }
        rejected += 1;
    }
    Ok("200 orthotripods balance below 1e-8; 200 generic triples have no kernel".into())
}

fn law_independence(seed: u64, params: &Params) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x07);
    let c = ellipse21();
    let caustic = compute_caustic(&c, 2048, params).map_err(|e| e.to_string())?;
    let laws = [ForceLaw::Coulomb, ForceLaw::Hooke, ForceLaw::Logarithmic];
    let mut tested = 0;
    let mut value_spread = 0.0_f64;
    while tested < 100 {
        // one orthotripod and one generic triple per iteration
        let q = random_core_probe(&mut rng, &c, &caustic, params);
        let tripods =
            tripods_from_center(&c, q, ForceLaw::Coulomb, params).map_err(|e| e.to_string())?;
        for tri in &tripods {
            let mut charges = Vec::new();
            for law in laws {
                let ch = balancing_charges(&tri.points, law, params)
                    .map_err(|e| format!("law {} rejected an orthotripod: {e}", law.name()))?;
                let r = tangential_residual(&tri.points, &ch, law).map_err(|e| e.to_string())?;
                let scale = force_scale(&tri.points, &ch, law);
                let sup = r.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
                if sup > 1e-8 * scale {
                    return Err(format!("{}: residual {sup:.2e}", law.name()));
                }
                charges.push(ch.q);
            }
            for k in 1..charges.len() {
                let d: f64 = charges[0]
                    .iter()
                    .zip(charges[k].iter())
                    .map(|(a, b)| (a - b).abs())
                    .sum();
                value_spread = value_spread.max(d);
            }
        }
        let ts = [
            rng.gen_range(0.0..TWO_PI),
            rng.gen_range(0.0..TWO_PI),
            rng.gen_range(0.0..TWO_PI),
        ];
        let pts = [
            c.eval(ts[0]).map_err(|e| e.to_string())?,
            c.eval(ts[1]).map_err(|e| e.to_string())?,
            c.eval(ts[2]).map_err(|e| e.to_string())?,
        ];
        if let Ok(ceva) = ceva_residual(&pts) {
            if ceva.relative() > 1e-3 {
                for law in laws {
                    if balancing_charges(&pts, law, params).is_ok() {
                        return Err(format!("{} accepted a generic triple", law.name()));
                    }
                }
            }
        }
        tested += 1;
    }
    if value_spread < 1e-6 {
        return Err("charge values identical across laws; expected them to differ".into());
    }
    Ok(format!(
        "decisions identical across 3 laws; charge values differ (spread {value_spread:.2})"
    ))
}

fn projective_consistency(seed: u64, params: &Params) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x08);
    let c = ellipse21();
    let caustic = compute_caustic(&c, 2048, params).map_err(|e| e.to_string())?;
    let mut tested = 0;
    while tested < 50 {
        let q = random_core_probe(&mut rng, &c, &caustic, params);
        // keep away from the axes so no a_ij vanishes in the denominators
        if q.x.abs() < 0.05 || q.y.abs() < 0.05 {
            continue;
        }
        let tripods =
            tripods_from_center(&c, q, ForceLaw::Coulomb, params).map_err(|e| e.to_string())?;
        for tri in &tripods {
            let a = InteractionMatrix::new(&tri.points, ForceLaw::Coulomb)
                .map_err(|e| e.to_string())?
                .entries;
            let a1 = a[0][2] / a[0][1];
            let a2 = a[1][0] / a[1][2];
            let a3 = a[2][1] / a[2][0];
            if (a1 * a2 * a3 + 1.0).abs() > 1e-9 {
                return Err(format!("A1 A2 A3 = {} at {q:?}", a1 * a2 * a3));
            }
            let q0 = tri.charges.q;
            for form in [
                [a1 * a3, -a1, 1.0],
                [-a3, 1.0, a2 * a3],
                [1.0, a1 * a2, -a2],
            ] {
                let n = ChargeTriple::normalized(form).q;
                let d = q0
                    .iter()
                    .zip(n.iter())
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0_f64, f64::max);
                if d > 1e-9 {
                    return Err(format!("closed form deviates by {d:.2e} at {q:?}"));
                }
            }
        }
        tested += 1;
    }
    Ok("three closed forms agree within 1e-9; A1 A2 A3 = -1".into())
}

fn positive_cross_check(seed: u64, params: &Params) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x09);
    let c = ellipse21();
    let caustic = compute_caustic(&c, 2048, params).map_err(|e| e.to_string())?;
    let part = double_normal_partition(&c, params).map_err(|e| e.to_string())?;
    let mut tested = 0;
    while tested < 200 {
        let q = random_core_probe(&mut rng, &c, &caustic, params);
        if !part.off_lines(q) {
            continue;
        }
        let tripods =
            tripods_from_center(&c, q, ForceLaw::Coulomb, params).map_err(|e| e.to_string())?;
        for tri in &tripods {
            let by_signs = tri.charges.all_positive(params.charge_zero_eps);
            let by_test = positive_charge_test(&tri.points, params).map_err(|e| e.to_string())?;
            if by_signs != by_test {
                return Err(format!(
                    "sign test {by_test} vs charges {by_signs} at {q:?}"
                ));
            }
            tested += 1;
        }
    }
    Ok("positive_charge_test equals all-positive charges on 200 tripods".into())
}

fn gradient_oracle(seed: u64, params: &Params) -> Result<String, String> {
    let _ = params;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0a);
    let c = ellipse21();
    let h = 1e-6;
    let mut worst = 0.0_f64;
    let mut tested = 0;
    while tested < 100 {
        let ts = [
            rng.gen_range(0.0..TWO_PI),
            rng.gen_range(0.0..TWO_PI),
            rng.gen_range(0.0..TWO_PI),
        ];
        // keep points apart so finite differences stay accurate
        let sep_ok = (0..3).all(|i| {
            (0..3).all(|j| {
                i == j || {
                    let d = (ts[i] - ts[j]).rem_euclid(TWO_PI);
                    d.min(TWO_PI - d) > 0.05
                }
            })
        });
        if !sep_ok {
            continue;
        }
        let mut qv = [0.0; 3];
        for q in &mut qv {
            let mag = rng.gen_range(0.1..2.0);
            *q = if rng.gen_bool(0.5) { mag } else { -mag };
        }
        let charges = ChargeTriple { q: qv };
        let eval3 = |ts: [f64; 3]| -> Result<f64, String> {
            let pts = [
                c.eval(ts[0]).map_err(|e| e.to_string())?,
                c.eval(ts[1]).map_err(|e| e.to_string())?,
                c.eval(ts[2]).map_err(|e| e.to_string())?,
            ];
            potential(&pts, &charges).map_err(|e| e.to_string())
        };
        let pts = [
            c.eval(ts[0]).map_err(|e| e.to_string())?,
            c.eval(ts[1]).map_err(|e| e.to_string())?,
            c.eval(ts[2]).map_err(|e| e.to_string())?,
        ];
        let residual =
            tangential_residual(&pts, &charges, ForceLaw::Coulomb).map_err(|e| e.to_string())?;
        for i in 0..3 {
            let mut up = ts;
            up[i] += h;
            let mut dn = ts;
            dn[i] -= h;
            let fd = (eval3(up)? - eval3(dn)?) / (2.0 * h);
            let an = residual[i] * c.speed(ts[i]).map_err(|e| e.to_string())?;
            let denom = an.abs().max(fd.abs()).max(1e-9);
            let rel = (fd - an).abs() / denom;
            worst = worst.max(rel);
            if rel > 1e-6 {
                return Err(format!(
                    "dE/dt[{i}] = {fd:.9e} vs <F,T>|X'| = {an:.9e} (rel {rel:.2e}) at {ts:?}"
                ));
            }
        }
        tested += 1;
    }
    Ok(format!(
        "100 configurations, worst relative error {worst:.2e}"
    ))
}

fn atlas_structure(params: &Params) -> Result<String, String> {
    let c = ellipse21();
    let atlas = build_atlas(&c, 48, params).map_err(|e| e.to_string())?;
    if atlas.vertices.len() != 4 * atlas.grid_vertex_count() {
        return Err("interior grid points must carry exactly 4 sheets".into());
    }
    for arc in &atlas.arcs {
        let (s1, s2) = arc.glued;
        for s in [s1, s2] {
            let k = s.contains(arc.pair.0) as u8 + s.contains(arc.pair.1) as u8;
            if k != 1 {
                return Err(format!(
                    "arc {:?} glues sheet {} containing {k} colliding labels",
                    arc.pair,
                    s.name()
                ));
            }
        }
    }
    let single = atlas.certificate_single_sheet();
    if (
        single.components,
        single.euler_characteristic,
        single.boundary_cycles,
    ) != (1, 1, 1)
    {
        return Err(format!("single sheet is not a disc: {single}"));
    }
    let full = atlas.certificate();
    if (
        full.components,
        full.euler_characteristic,
        full.boundary_cycles,
    ) != (1, 0, 2)
    {
        return Err(format!("full complex: {full}"));
    }
    let pos = atlas.certificate_positive();
    if (
        pos.components,
        pos.euler_characteristic,
        pos.boundary_cycles,
    ) != (1, 0, 2)
    {
        return Err(format!("positive subcomplex: {pos}"));
    }
    if !(pos.faces < full.faces) {
        return Err("positive subcomplex should be a proper face subset".into());
    }
    Ok(format!("res 48: full {full}; positive {pos}"))
}

fn atlas_stability(params: &Params) -> Result<String, String> {
    let c = ellipse21();
    let mut certs = Vec::new();
    for res in [64usize, 128] {
        let atlas = build_atlas(&c, res, params).map_err(|e| e.to_string())?;
        certs.push((res, atlas.certificate(), atlas.certificate_positive()));
    }
    let (_, f64c, p64) = certs[0];
    let (_, f128, p128) = certs[1];
    if (
        f64c.components,
        f64c.euler_characteristic,
        f64c.boundary_cycles,
    ) != (
        f128.components,
        f128.euler_characteristic,
        f128.boundary_cycles,
    ) {
        return Err(format!("full certificate drifts: {f64c} vs {f128}"));
    }
    if (
        p64.components,
        p64.euler_characteristic,
        p64.boundary_cycles,
    ) != (
        p128.components,
        p128.euler_characteristic,
        p128.boundary_cycles,
    ) {
        return Err(format!("positive certificate drifts: {p64} vs {p128}"));
    }
    Ok(format!("res 64 and 128 agree: full {f64c}; positive {p64}"))
}
