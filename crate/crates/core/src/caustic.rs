//! The caustic (evolute) of a convex curve, its cusps, and the core.
//!
//! The caustic is the locus of curvature centres, equivalently the envelope
//! of normals. It divides the plane into domains on which the normal count
//! n(Q) is constant; the core is the union of closed domains with n(Q) >= 4
//! and coincides with the set of orthotricentres. The winding index i(Q) of
//! the oriented caustic satisfies n(Q) = 2 i(Q) + 2, which this module uses
//! as a membership test with the normal count as a cross-check.
//!
//! The evolute polyline inherits its traversal order from the curve
//! parameter; the sign of the winding index is calibrated once per caustic on
//! a probe point with at least four normals, instead of implementing the fold
//! co-orientation machinery.

use crate::curve::Curve;
use crate::geom::{bounding_box, polyline_distance, Vec2};
use crate::kernel::{double_normals, normal_count, winding_number, DoubleNormal};
use crate::{Error, Params, Result};

/// How the winding sign was fixed.
#[derive(Debug, Clone, Copy)]
pub struct WindingCalibration {
    pub probe: Vec2,
    pub normals_at_probe: usize,
    pub raw_winding: i32,
    /// Reported index = sign * raw polyline winding.
    pub sign: i32,
}

/// Sampled evolute with cusps and winding calibration.
#[derive(Debug, Clone)]
pub struct CausticGeometry {
    /// (t, curvature centre) samples in parameter order.
    pub samples: Vec<(f64, Vec2)>,
    /// Cusp parameters and points: simple zeros of kappa'.
    pub cusps: Vec<(f64, Vec2)>,
    pub polyline: Vec<Vec2>,
    /// Point caustic of a circle; the core degenerates to this centre.
    pub degenerate: Option<Vec2>,
    pub calibration: Option<WindingCalibration>,
    geom_eps: f64,
}

impl CausticGeometry {
    /// Calibrated winding index of the caustic around `q`.
    pub fn winding_index(&self, q: Vec2) -> Result<i32> {
        let cal = self
            .calibration
            .ok_or_else(|| Error::CalibrationFailed("degenerate caustic".into()))?;
        let raw = winding_number(&self.polyline, q, self.geom_eps)?;
        Ok(cal.sign * raw)
    }

    pub fn bbox(&self) -> (Vec2, Vec2) {
        bounding_box(&self.polyline).expect("non-empty polyline")
    }

    /// Distance from `q` to the sampled caustic polyline.
    pub fn distance(&self, q: Vec2) -> f64 {
        match self.degenerate {
            Some(c) => c.distance(q),
            None => polyline_distance(&self.polyline, q),
        }
    }
}

/// Sample the evolute and locate the cusps.
///
/// Requires a closed convex curve with nonvanishing curvature. The circle is
/// handled as the degenerate point caustic.
pub fn compute_caustic(
    curve: &Curve,
    n_samples: usize,
    params: &Params,
) -> Result<CausticGeometry> {
    if !curve.is_closed() {
        return Err(Error::UnsupportedCurve(
            "the caustic core is defined for closed curves".into(),
        ));
    }
    if !curve.is_convex() {
        return Err(Error::UnsupportedCurve(
            "caustic computation needs a convex curve with kappa > 0".into(),
        ));
    }
    let n = n_samples.max(64);
    let (lo, _) = curve.domain();
    let span = curve.span();
    let mut samples = Vec::with_capacity(n);
    for k in 0..n {
        let t = lo + span * k as f64 / n as f64;
        samples.push((t, curve.center_of_curvature(t)?));
    }
    let polyline: Vec<Vec2> = samples.iter().map(|(_, p)| *p).collect();

    // degenerate point caustic (circle)
    let centroid = polyline.iter().fold(Vec2::ZERO, |s, p| s + *p) / n as f64;
    let spread = polyline
        .iter()
        .map(|p| p.distance(centroid))
        .fold(0.0_f64, f64::max);
    if spread < params.eps_geom_rel * curve.diameter() {
        return Ok(CausticGeometry {
            samples,
            cusps: vec![],
            polyline,
            degenerate: Some(centroid),
            calibration: None,
            geom_eps: params.eps_geom_rel * curve.diameter(),
        });
    }

    // cusps: sign changes of kappa' on a half-offset grid, refined by bisection
    let mut cusps = Vec::new();
    let ks: Vec<f64> = (0..n)
        .map(|k| {
            curve
                .curvature_derivative(lo + span * (k as f64 + 0.5) / n as f64)
                .expect("regular curve")
        })
        .collect();
    for i in 0..n {
        let j = (i + 1) % n;
        let (mut a, mut b) = (
            lo + span * (i as f64 + 0.5) / n as f64,
            lo + span * (i as f64 + 1.5) / n as f64,
        );
        let (mut ka, kb) = (ks[i], ks[j]);
        if ka == 0.0 {
            cusps.push(a);
            continue;
        }
        if ka * kb < 0.0 {
            for _ in 0..60 {
                let m = 0.5 * (a + b);
                let km = curve.curvature_derivative(m)?;
                if km == 0.0 || b - a < 1e-13 * span {
                    a = m;
                    b = m;
                    break;
                }
                if ka * km < 0.0 {
                    b = m;
                } else {
                    a = m;
                    ka = km;
                }
            }
            cusps.push(curve.wrap(0.5 * (a + b)));
        }
    }
    cusps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let cusps: Vec<(f64, Vec2)> = cusps
        .into_iter()
        .map(|t| Ok((t, curve.center_of_curvature(t)?)))
        .collect::<Result<_>>()?;

    let mut caustic = CausticGeometry {
        samples,
        cusps,
        polyline,
        degenerate: None,
        calibration: None,
        geom_eps: params.eps_geom_rel * curve.diameter(),
    };
    caustic.calibration = Some(calibrate(curve, &caustic, centroid, params)?);
    Ok(caustic)
}

/// Fix the global winding sign on a probe with n >= 4 so that
/// i = (n - 2) / 2 there.
fn calibrate(
    curve: &Curve,
    caustic: &CausticGeometry,
    centroid: Vec2,
    params: &Params,
) -> Result<WindingCalibration> {
    let (blo, bhi) = caustic.bbox();
    let diag = (bhi - blo).norm();
    let mut candidates = vec![centroid];
    for (_, cusp) in &caustic.cusps {
        candidates.push(centroid + (*cusp - centroid) * 0.5);
        candidates.push(centroid + (*cusp - centroid) * 0.25);
    }
    for k in 0..8 {
        let ang = std::f64::consts::TAU * k as f64 / 8.0;
        candidates.push(centroid + Vec2::new(ang.cos(), ang.sin()) * (0.13 * diag));
    }
    for probe in candidates {
        if caustic.distance(probe) < 1e-3 * diag {
            continue;
        }
        let n = match normal_count(curve, probe, params) {
            Ok(n) if n >= 4 => n,
            _ => continue,
        };
        let raw = match winding_number(&caustic.polyline, probe, caustic.geom_eps) {
            Ok(w) if w != 0 => w,
            _ => continue,
        };
        let expect = ((n as i32) - 2) / 2;
        if raw.abs() != expect {
            continue;
        }
        return Ok(WindingCalibration {
            probe,
            normals_at_probe: n,
            raw_winding: raw,
            sign: if raw > 0 { 1 } else { -1 },
        });
    }
    Err(Error::CalibrationFailed(
        "no probe with n >= 4 and matching |winding| found".into(),
    ))
}

/// Membership of a point relative to the caustic core.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Inside,
    Outside,
    Boundary,
}

impl std::fmt::Display for Membership {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Membership::Inside => "inside",
            Membership::Outside => "outside",
            Membership::Boundary => "boundary",
        })
    }
}

/// Core membership of `q`: inside iff the winding index is nonzero,
/// cross-checked against the normal count via n = 2 i + 2. Points on the
/// caustic polyline (or flagged OnCaustic by the count) report `Boundary`;
/// a genuine disagreement between the two routes is an error.
pub fn core_membership(
    curve: &Curve,
    caustic: &CausticGeometry,
    q: Vec2,
    params: &Params,
) -> Result<Membership> {
    if let Some(center) = caustic.degenerate {
        return Ok(
            if center.distance(q) < params.eps_geom_rel * curve.diameter() {
                Membership::Inside
            } else {
                Membership::Outside
            },
        );
    }
    if caustic.distance(q) < params.eps_geom_rel * curve.diameter() {
        return Ok(Membership::Boundary);
    }
    let index = match caustic.winding_index(q) {
        Ok(i) => i,
        Err(Error::OnCurve) => return Ok(Membership::Boundary),
        Err(e) => return Err(e),
    };
    let n = match normal_count(curve, q, params) {
        Ok(n) => n,
        Err(Error::OnCaustic { .. }) => return Ok(Membership::Boundary),
        Err(Error::DegenerateCenter { .. }) => {
            // every normal passes through q: certainly in the core
            return Ok(Membership::Inside);
        }
        Err(e) => return Err(e),
    };
    if n as i32 != 2 * index + 2 {
        return Err(Error::IndexMismatch {
            x: q.x,
            y: q.y,
            n,
            index,
        });
    }
    Ok(if index != 0 {
        Membership::Inside
    } else {
        Membership::Outside
    })
}

/// The double normals of a curve, used as the sign-partition of its core:
/// the charge signs of an orthotripod can only change when its centre
/// crosses one of these lines.
#[derive(Debug, Clone)]
pub struct DoubleNormalPartition {
    pub lines: Vec<DoubleNormal>,
    /// Distances below this count as lying on a line.
    pub line_eps: f64,
}

impl DoubleNormalPartition {
    /// Sign vector of `q` over the double-normal lines; entries in {-1, 0, 1}.
    pub fn label(&self, q: Vec2) -> Vec<i8> {
        self.lines
            .iter()
            .map(|d| d.side(q, self.line_eps))
            .collect()
    }

    /// True when `q` lies on none of the lines.
    pub fn off_lines(&self, q: Vec2) -> bool {
        self.label(q).iter().all(|&s| s != 0)
    }
}

/// Compute the double-normal partition of the core.
pub fn double_normal_partition(curve: &Curve, params: &Params) -> Result<DoubleNormalPartition> {
    let lines = double_normals(curve, params)?;
    Ok(DoubleNormalPartition {
        lines,
        line_eps: params.eps_geom_rel * curve.diameter(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn ellipse21() -> Curve {
        Curve::ellipse(2.0, 1.0).unwrap()
    }

    #[test]
    fn circle_caustic_degenerates_to_the_center() {
        let c = Curve::circle(1.5).unwrap();
        let g = compute_caustic(&c, 512, &Params::default()).unwrap();
        let center = g.degenerate.expect("degenerate");
        assert!(center.norm() < 1e-9);
        assert!(g.cusps.is_empty());
        let p = Params::default();
        assert_eq!(
            core_membership(&c, &g, center, &p).unwrap(),
            Membership::Inside
        );
        assert_eq!(
            core_membership(&c, &g, Vec2::new(0.3, 0.0), &p).unwrap(),
            Membership::Outside
        );
    }

    #[test]
    fn ellipse_caustic_has_four_cusps_at_the_vertices() {
        let c = ellipse21();
        let g = compute_caustic(&c, 2048, &Params::default()).unwrap();
        assert_eq!(g.cusps.len(), 4);
        let expect_t = [0.0, FRAC_PI_2, PI, 1.5 * PI];
        let expect_p = [
            Vec2::new(1.5, 0.0),
            Vec2::new(0.0, -3.0),
            Vec2::new(-1.5, 0.0),
            Vec2::new(0.0, 3.0),
        ];
        for ((t, p), (et, ep)) in g.cusps.iter().zip(expect_t.iter().zip(expect_p)) {
            let dt = (t - et).rem_euclid(TAU);
            assert!(dt < 1e-8 || TAU - dt < 1e-8, "cusp t {t} vs {et}");
            assert!((*p - ep).norm() < 1e-8, "cusp at {p:?} vs {ep:?}");
        }
        // samples equal the curvature centres at their parameters
        for &(t, p) in g.samples.iter().step_by(97) {
            assert!((c.center_of_curvature(t).unwrap() - p).norm() < 1e-12);
        }
    }

    #[test]
    fn perturbed_oval_has_six_cusps() {
        let c = Curve::fourier_oval(vec![1.0, 0.0, 0.0, 0.05], vec![]).unwrap();
        let g = compute_caustic(&c, 2048, &Params::default()).unwrap();
        assert_eq!(g.cusps.len(), 6);
    }

    #[test]
    fn winding_index_values() {
        let c = ellipse21();
        let g = compute_caustic(&c, 2048, &Params::default()).unwrap();
        assert_eq!(g.winding_index(Vec2::ZERO).unwrap(), 1);
        assert_eq!(g.winding_index(Vec2::new(5.0, 0.0)).unwrap(), 0);
        assert_eq!(g.winding_index(Vec2::new(10.0, 10.0)).unwrap(), 0);
    }

    #[test]
    fn core_membership_on_the_ellipse() {
        let c = ellipse21();
        let p = Params::default();
        let g = compute_caustic(&c, 2048, &p).unwrap();
        assert_eq!(
            core_membership(&c, &g, Vec2::ZERO, &p).unwrap(),
            Membership::Inside
        );
        assert_eq!(
            core_membership(&c, &g, Vec2::new(0.1, 0.05), &p).unwrap(),
            Membership::Inside
        );
        assert_eq!(
            core_membership(&c, &g, Vec2::new(5.0, 0.0), &p).unwrap(),
            Membership::Outside
        );
        // a cusp lies on the polyline
        assert_eq!(
            core_membership(&c, &g, Vec2::new(1.5, 0.0), &p).unwrap(),
            Membership::Boundary
        );
        // points of the open fold arc are boundary too
        let q = c.center_of_curvature(0.9).unwrap();
        assert_eq!(
            core_membership(&c, &g, q, &p).unwrap(),
            Membership::Boundary
        );
    }

    #[test]
    fn core_lemma_on_random_probes() {
        // n(Q) = 2 i(Q) + 2 for probes off the caustic
        let c = ellipse21();
        let p = Params::default();
        let g = compute_caustic(&c, 2048, &p).unwrap();
        let mut state = 0x9E3779B97F4A7C15_u64;
        let mut rand01 = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut checked = 0;
        while checked < 200 {
            let q = Vec2::new(rand01() * 8.0 - 4.0, rand01() * 8.0 - 4.0);
            if g.distance(q) < 2e-3 * c.diameter() {
                continue;
            }
            let n = normal_count(&c, q, &p).unwrap();
            let i = g.winding_index(q).unwrap();
            assert_eq!(n as i32, 2 * i + 2, "q = {q:?}");
            checked += 1;
        }
    }

    #[test]
    fn partition_labels_split_the_core_into_quadrants() {
        let c = ellipse21();
        let p = Params::default();
        let part = double_normal_partition(&c, &p).unwrap();
        assert_eq!(part.lines.len(), 2);
        let l1 = part.label(Vec2::new(0.1, 0.05));
        let l2 = part.label(Vec2::new(0.12, 0.06));
        let l3 = part.label(Vec2::new(-0.1, 0.05));
        assert_eq!(l1, l2, "same quadrant, same label");
        assert_ne!(l1, l3, "across the minor axis the label flips");
        // on-axis point gets a zero coordinate
        assert!(part.label(Vec2::new(0.3, 0.0)).contains(&0));
    }

    #[test]
    fn parabola_arc_has_no_core() {
        let c = Curve::parabola_arc(1.0, (-2.0, 2.0)).unwrap();
        assert!(matches!(
            compute_caustic(&c, 512, &Params::default()),
            Err(Error::UnsupportedCurve(_))
        ));
    }
}
