//! Root finding on curves: normal feet from a query point, normal counts,
//! polyline winding numbers, and double normals.
//!
//! The foot equation is g(t) = <Q - X(t), T(t)>. Its roots are the parameters
//! whose normal line passes through Q. Roots are located by a dense scan with
//! sign-change bracketing and refined by bisection; the scan grid is offset by
//! half a step so symmetric configurations do not land roots exactly on
//! samples.

use crate::curve::{Curve, CurvePoint};
use crate::geom::{polyline_distance, Vec2};
use crate::{Error, Params, Result};

/// A parameter whose normal passes through the query point.
#[derive(Debug, Clone)]
pub struct NormalFoot {
    pub t: f64,
    pub foot: CurvePoint,
    pub distance: f64,
}

/// A chord orthogonal to the tangent at both endpoints.
#[derive(Debug, Clone)]
pub struct DoubleNormal {
    pub s: f64,
    pub t: f64,
    pub chord: (Vec2, Vec2),
}

impl DoubleNormal {
    /// Signed side of `q` with respect to the double-normal line; 0 within
    /// `eps` of the line.
    pub fn side(&self, q: Vec2, eps: f64) -> i8 {
        let dir = self.chord.1 - self.chord.0;
        let len = dir.norm();
        if len == 0.0 {
            return 0;
        }
        let d = dir.cross(q - self.chord.0) / len;
        if d > eps {
            1
        } else if d < -eps {
            -1
        } else {
            0
        }
    }
}

#[inline]
fn foot_eq(curve: &Curve, q: Vec2, t: f64) -> f64 {
    let cp = curve.eval(t).expect("regular curve");
    (q - cp.p).dot(cp.tangent)
}

fn circular_distance(a: f64, b: f64, span: f64) -> f64 {
    let d = (a - b).rem_euclid(span);
    d.min(span - d)
}

fn param_distance(curve: &Curve, a: f64, b: f64) -> f64 {
    if curve.is_closed() {
        circular_distance(a, b, curve.span())
    } else {
        (a - b).abs()
    }
}

struct FootScan {
    /// Simple roots found by sign-change bracketing.
    simple: Vec<f64>,
    /// Tangential roots: |g| dips to zero without a sign change (even
    /// multiplicity; the query point lies on the caustic).
    tangent: Vec<f64>,
}

/// All normal feet from `q`, sorted by parameter. Tangential feet (double
/// roots of the foot equation, present when `q` lies on the caustic) are
/// included once.
///
/// Errors with [`Error::DegenerateCenter`] when the foot equation vanishes on
/// the whole scan grid (for example the centre of a circle).
pub fn normal_feet(curve: &Curve, q: Vec2, params: &Params) -> Result<Vec<NormalFoot>> {
    let scan = foot_scan(curve, q, params)?;
    let mut roots = scan.simple;
    roots.extend(scan.tangent);
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(roots
        .into_iter()
        .map(|t| {
            let foot = curve.eval(t).expect("regular curve");
            NormalFoot {
                t,
                foot,
                distance: (q - foot.p).norm(),
            }
        })
        .collect())
}

fn foot_scan(curve: &Curve, q: Vec2, params: &Params) -> Result<FootScan> {
    let (lo, _) = curve.domain();
    let span = curve.span();
    let n = params.scan_samples.max(16);
    let closed = curve.is_closed();
    let step = span / n as f64;
    // half-offset grid so symmetric roots never land exactly on samples
    let ts: Vec<f64> = (0..n).map(|k| lo + (k as f64 + 0.5) * step).collect();
    let gs: Vec<f64> = ts.iter().map(|&t| foot_eq(curve, q, t)).collect();

    let gmax = gs.iter().fold(0.0_f64, |m, g| m.max(g.abs()));
    if gmax < 1e-12 * curve.diameter() {
        return Err(Error::DegenerateCenter { x: q.x, y: q.y });
    }

    let mut roots: Vec<f64> = Vec::new();
    let brackets = if closed { n } else { n - 1 };
    for i in 0..brackets {
        let j = (i + 1) % n;
        let (mut a, mut b) = (ts[i], ts[i] + step);
        let (mut ga, gb) = (gs[i], gs[j]);
        if ga == 0.0 {
            roots.push(a);
            continue;
        }
        if ga * gb < 0.0 {
            // bisection; the bracket guarantees convergence
            for _ in 0..64 {
                let m = 0.5 * (a + b);
                if b - a < 1e-13 * span {
                    break;
                }
                let gm = foot_eq(curve, q, m);
                if gm == 0.0 {
                    a = m;
                    b = m;
                    break;
                }
                if ga * gm < 0.0 {
                    b = m;
                } else {
                    a = m;
                    ga = gm;
                }
            }
            roots.push(curve.wrap(0.5 * (a + b)));
        }
    }
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    // merge near-duplicates (closer than root_merge_rel of the span)
    let merge = params.root_merge_rel * span;
    let mut simple: Vec<f64> = Vec::with_capacity(roots.len());
    for r in roots {
        if simple.iter().all(|&o| param_distance(curve, o, r) > merge) {
            simple.push(r);
        }
    }

    // Tangential roots: grid-local minima of |g| that dip below a loose
    // threshold away from the bracketed roots are refined by minimizing g^2;
    // they count as feet only if |g| reaches (near) zero.
    let mut tangent = Vec::new();
    let loose = 1e-4 * curve.diameter();
    let accept = params.eps_geom_rel * curve.diameter();
    let guard = 2.0 * step;
    for i in 0..n {
        if !closed && (i == 0 || i == n - 1) {
            continue;
        }
        let (prev, next) = ((i + n - 1) % n, (i + 1) % n);
        let a = gs[i].abs();
        if a <= gs[prev].abs()
            && a <= gs[next].abs()
            && a < loose
            && gs[prev] * gs[i] > 0.0
            && gs[i] * gs[next] > 0.0
            && simple
                .iter()
                .all(|&r| param_distance(curve, r, ts[i]) > guard)
        {
            let t = refine_minimum(|t| foot_eq(curve, q, t).abs(), ts[i] - step, ts[i] + step);
            if foot_eq(curve, q, t).abs() < accept
                && tangent.iter().all(|&o| param_distance(curve, o, t) > merge)
            {
                tangent.push(curve.wrap(t));
            }
        }
    }
    Ok(FootScan { simple, tangent })
}

/// Golden-section minimization on a bracket.
fn refine_minimum(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - (b - a) * INV_PHI;
    let mut d = a + (b - a) * INV_PHI;
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * INV_PHI;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * INV_PHI;
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Number of normals from `q`; even for points off the caustic of a closed
/// convex curve.
///
/// Errors with [`Error::OnCaustic`] when the foot equation has a (near)
/// double root, the signature of `q` lying on the caustic.
pub fn normal_count(curve: &Curve, q: Vec2, params: &Params) -> Result<usize> {
    let scan = foot_scan(curve, q, params)?;
    if let Some(&t) = scan.tangent.first() {
        return Err(Error::OnCaustic { t });
    }
    if curve.is_closed() && scan.simple.len() % 2 == 1 {
        // an odd count on a closed curve means a root pair collapsed
        return Err(Error::OnCaustic {
            t: scan.simple.first().copied().unwrap_or(0.0),
        });
    }
    Ok(scan.simple.len())
}

/// Signed winding number of a closed polyline around `q` (positive for
/// counterclockwise loops), via signed crossings of a horizontal ray.
///
/// Errors with [`Error::OnCurve`] when `q` is within `on_curve_eps` of the
/// polyline.
pub fn winding_number(poly: &[Vec2], q: Vec2, on_curve_eps: f64) -> Result<i32> {
    if polyline_distance(poly, q) < on_curve_eps {
        return Err(Error::OnCurve);
    }
    let mut w = 0i32;
    let n = poly.len();
    for i in 0..n {
        let p1 = poly[i];
        let p2 = poly[(i + 1) % n];
        if p1.y <= q.y {
            if p2.y > q.y && (p1 - q).cross(p2 - q) > 0.0 {
                w += 1;
            }
        } else if p2.y <= q.y && (p1 - q).cross(p2 - q) < 0.0 {
            w -= 1;
        }
    }
    Ok(w)
}

/// All double normals of a closed curve: parameter pairs (s, t), s < t, with
/// the chord orthogonal to both tangents.
///
/// Found by a coarse 2-D sign-change scan refined by a damped Newton
/// iteration with finite-difference Jacobian. More refined solutions than
/// `params.double_cap` flags a constant-width curve (circle and friends have
/// a whole family of double normals).
pub fn double_normals(curve: &Curve, params: &Params) -> Result<Vec<DoubleNormal>> {
    if !curve.is_closed() {
        return Err(Error::UnsupportedCurve(
            "double normals are computed for closed curves".into(),
        ));
    }
    let span = curve.span();
    let (lo, _) = curve.domain();
    let m = params.double_scan.max(32);
    let step = span / m as f64;
    let pts: Vec<CurvePoint> = (0..m)
        .map(|k| curve.eval(lo + (k as f64 + 0.5) * step).expect("regular"))
        .collect();

    let f1 = |i: usize, j: usize| (pts[i].p - pts[j].p).dot(pts[i].tangent);
    let min_sep = 0.02 * span;

    let mut sols: Vec<(f64, f64)> = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if circular_distance(pts[i].t, pts[j].t, span) < min_sep {
                continue;
            }
            // cell corners (i,j), (i+1,j), (i,j+1), (i+1,j+1)
            let i1 = (i + 1) % m;
            let j1 = (j + 1) % m;
            let c1 = [f1(i, j), f1(i1, j), f1(i, j1), f1(i1, j1)];
            let c2 = [f1(j, i), f1(j, i1), f1(j1, i), f1(j1, i1)];
            let change = |c: &[f64; 4]| c.iter().any(|&v| v > 0.0) && c.iter().any(|&v| v < 0.0);
            if !(change(&c1) && change(&c2)) {
                continue;
            }
            if let Some((s, t)) = refine_double_normal(
                curve,
                pts[i].t + 0.5 * step,
                pts[j].t + 0.5 * step,
                step,
                params,
            ) {
                if param_distance(curve, s, t) < min_sep {
                    continue;
                }
                let (s, t) = canonical_pair(curve, s, t);
                let dup = sols.iter().any(|&(a, b)| {
                    param_distance(curve, a, s) < 1e-5 * span
                        && param_distance(curve, b, t) < 1e-5 * span
                });
                if !dup {
                    sols.push((s, t));
                    if sols.len() > params.double_cap {
                        return Err(Error::ConstantWidthSuspected {
                            count: sols.len(),
                            cap: params.double_cap,
                        });
                    }
                }
            }
        }
    }
    sols.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(sols
        .into_iter()
        .map(|(s, t)| DoubleNormal {
            s,
            t,
            chord: (curve.position(s), curve.position(t)),
        })
        .collect())
}

fn canonical_pair(curve: &Curve, s: f64, t: f64) -> (f64, f64) {
    let (a, b) = (curve.wrap(s), curve.wrap(t));
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn refine_double_normal(
    curve: &Curve,
    mut s: f64,
    mut t: f64,
    cell: f64,
    _params: &Params,
) -> Option<(f64, f64)> {
    let fview = |s: f64, t: f64| -> Option<(f64, f64)> {
        let ps = curve.eval(s).ok()?;
        let pt = curve.eval(t).ok()?;
        let d = ps.p - pt.p;
        Some((d.dot(ps.tangent), d.dot(pt.tangent)))
    };
    let h = 1e-7 * curve.span();
    let tol = 1e-11 * curve.diameter();
    let max_step = 2.0 * cell;
    for _ in 0..60 {
        let (f1, f2) = fview(s, t)?;
        if f1.abs() < tol && f2.abs() < tol {
            return Some((s, t));
        }
        let (f1s, f2s) = fview(s + h, t)?;
        let (f1t, f2t) = fview(s, t + h)?;
        let j11 = (f1s - f1) / h;
        let j12 = (f1t - f1) / h;
        let j21 = (f2s - f2) / h;
        let j22 = (f2t - f2) / h;
        let det = j11 * j22 - j12 * j21;
        if det.abs() < 1e-300 {
            return None;
        }
        let ds = -(f1 * j22 - f2 * j12) / det;
        let dt = -(j11 * f2 - j21 * f1) / det;
        let norm = ds.hypot(dt);
        let scale = if norm > max_step {
            max_step / norm
        } else {
            1.0
        };
        s += ds * scale;
        t += dt * scale;
    }
    // accept only converged points
    let (f1, f2) = fview(s, t)?;
    if f1.abs() < tol && f2.abs() < tol {
        Some((s, t))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn ellipse21() -> Curve {
        Curve::ellipse(2.0, 1.0).unwrap()
    }

    #[test]
    fn ellipse_center_has_four_axis_feet() {
        let c = ellipse21();
        let feet = normal_feet(&c, Vec2::ZERO, &Params::default()).unwrap();
        assert_eq!(feet.len(), 4);
        let expect = [0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2];
        for (f, e) in feet.iter().zip(expect) {
            assert!(
                circular_distance(f.t, e, crate::curve::TWO_PI) < 1e-10,
                "foot {} vs {}",
                f.t,
                e
            );
            // foot residual: chord orthogonal to tangent
            assert!((Vec2::ZERO - f.foot.p).dot(f.foot.tangent).abs() < 1e-9);
        }
    }

    #[test]
    fn far_point_has_two_feet() {
        let c = ellipse21();
        let feet = normal_feet(&c, Vec2::new(10.0, 10.0), &Params::default()).unwrap();
        assert_eq!(feet.len(), 2);
    }

    #[test]
    fn circle_center_is_degenerate() {
        let c = Curve::circle(1.0).unwrap();
        match normal_feet(&c, Vec2::ZERO, &Params::default()) {
            Err(Error::DegenerateCenter { .. }) => {}
            other => panic!("expected DegenerateCenter, got {other:?}"),
        }
    }

    #[test]
    fn normal_counts_inside_and_outside_the_core() {
        let c = ellipse21();
        let p = Params::default();
        assert_eq!(normal_count(&c, Vec2::new(0.1, 0.05), &p).unwrap(), 4);
        assert_eq!(normal_count(&c, Vec2::new(5.0, 0.0), &p).unwrap(), 2);
        assert_eq!(normal_count(&c, Vec2::ZERO, &p).unwrap(), 4);
    }

    #[test]
    fn point_on_caustic_is_detected() {
        // cusp of the caustic of ellipse{2,1} at (1.5, 0) and a generic fold
        // point both make the foot equation develop a double root
        let c = ellipse21();
        let p = Params::default();
        // a point on the fold arc: centre of curvature at t = 0.8
        let q = c.center_of_curvature(0.8).unwrap();
        match normal_count(&c, q, &p) {
            Err(Error::OnCaustic { .. }) => {}
            other => panic!("expected OnCaustic, got {other:?}"),
        }
    }

    #[test]
    fn root_completeness_against_dense_oracle() {
        // brute-force scan at 16x density counts the same sign changes
        let c = ellipse21();
        let p = Params::default();
        let probes = [
            Vec2::new(0.3, 0.2),
            Vec2::new(-0.7, 0.1),
            Vec2::new(1.2, 2.0),
            Vec2::new(-3.0, -0.5),
            Vec2::new(0.05, -0.4),
        ];
        for q in probes {
            let feet = normal_feet(&c, q, &p).unwrap();
            let dense = 16 * p.scan_samples;
            let mut count = 0;
            let mut prev = f64::NAN;
            for k in 0..=dense {
                let t = crate::curve::TWO_PI * (k as f64 + 0.5) / dense as f64;
                let g = (q - c.position(t)).dot(c.eval(t).unwrap().tangent);
                if !prev.is_nan() && prev * g < 0.0 {
                    count += 1;
                }
                prev = g;
            }
            assert_eq!(feet.len(), count, "probe {q:?}");
        }
    }

    #[test]
    fn winding_of_ccw_square() {
        let square = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ];
        assert_eq!(
            winding_number(&square, Vec2::new(0.5, 0.5), 1e-12).unwrap(),
            1
        );
        assert_eq!(
            winding_number(&square, Vec2::new(2.0, 0.5), 1e-12).unwrap(),
            0
        );
        let rev: Vec<Vec2> = square.iter().rev().copied().collect();
        assert_eq!(
            winding_number(&rev, Vec2::new(0.5, 0.5), 1e-12).unwrap(),
            -1
        );
        assert!(matches!(
            winding_number(&square, Vec2::new(0.5, 0.0), 1e-9),
            Err(Error::OnCurve)
        ));
    }

    #[test]
    fn ellipse_double_normals_are_the_axes() {
        let c = ellipse21();
        let dn = double_normals(&c, &Params::default()).unwrap();
        assert_eq!(dn.len(), 2, "{dn:?}");
        let tp = crate::curve::TWO_PI;
        assert!(circular_distance(dn[0].s, 0.0, tp) < 1e-8);
        assert!(circular_distance(dn[0].t, PI, tp) < 1e-8);
        assert!(circular_distance(dn[1].s, FRAC_PI_2, tp) < 1e-8);
        assert!(circular_distance(dn[1].t, 3.0 * FRAC_PI_2, tp) < 1e-8);
        // chord orthogonal to both tangents (swap symmetry holds trivially)
        for d in &dn {
            let ps = c.eval(d.s).unwrap();
            let pt = c.eval(d.t).unwrap();
            let chord = ps.p - pt.p;
            assert!(chord.dot(ps.tangent).abs() < 1e-9);
            assert!(chord.dot(pt.tangent).abs() < 1e-9);
        }
    }

    #[test]
    fn parabola_arc_feet_need_no_periodic_wrap() {
        // from (0, y0) on the axis of y = x^2: one vertex foot plus a
        // symmetric pair once y0 > 1/(2c)
        let c = Curve::parabola_arc(1.0, (-3.0, 3.0)).unwrap();
        let p = Params::default();
        let feet = normal_feet(&c, Vec2::new(0.0, 1.0), &p).unwrap();
        assert_eq!(feet.len(), 3);
        let expect = 0.5_f64.sqrt();
        assert!((feet[0].t + expect).abs() < 1e-9);
        assert!(feet[1].t.abs() < 1e-9);
        assert!((feet[2].t - expect).abs() < 1e-9);
        let low = normal_feet(&c, Vec2::new(0.0, 0.3), &p).unwrap();
        assert_eq!(low.len(), 1);
    }

    #[test]
    fn circle_flags_constant_width() {
        let c = Curve::circle(1.0).unwrap();
        match double_normals(&c, &Params::default()) {
            Err(Error::ConstantWidthSuspected { .. }) => {}
            other => panic!("expected ConstantWidthSuspected, got {other:?}"),
        }
    }

    #[test]
    fn perturbed_oval_has_at_least_two_double_normals() {
        let c = Curve::fourier_oval(vec![1.0, 0.0, 0.03, 0.02], vec![0.015]).unwrap();
        let dn = double_normals(&c, &Params::default()).unwrap();
        assert!(dn.len() >= 2, "found {}", dn.len());
    }
}
