//! Property tests for the geometric and projective invariants.

use proptest::prelude::*;

use orthotripod::curve::{Curve, TWO_PI};
use orthotripod::equilibrium::{ceva_residual, ChargeTriple};
use orthotripod::geom::Vec2;
use orthotripod::kernel::{normal_feet, winding_number};
use orthotripod::output::fmt_sig;
use orthotripod::Params;

proptest! {
    #[test]
    fn frames_are_orthonormal_on_random_ellipses(
        a in 0.5f64..4.0,
        b in 0.5f64..4.0,
        t in 0.0f64..TWO_PI,
    ) {
        let c = Curve::ellipse(a, b).unwrap();
        let cp = c.eval(t).unwrap();
        prop_assert!((cp.tangent.norm() - 1.0).abs() < 1e-12);
        prop_assert!((cp.normal.norm() - 1.0).abs() < 1e-12);
        prop_assert!(cp.tangent.dot(cp.normal).abs() < 1e-12);
        prop_assert!((cp.tangent.cross(cp.normal) - 1.0).abs() < 1e-12);
        // convex ccw curves curve to the left
        prop_assert!(cp.kappa > 0.0);
    }

    #[test]
    fn closed_curves_are_periodic(
        a in 0.5f64..4.0,
        b in 0.5f64..4.0,
        eps3 in -0.04f64..0.04,
        t in 0.0f64..TWO_PI,
    ) {
        for c in [
            Curve::ellipse(a, b).unwrap(),
            Curve::fourier_oval(vec![1.0, 0.0, 0.0, eps3], vec![]).unwrap(),
        ] {
            let p0 = c.position(t);
            let p1 = c.position(t + TWO_PI);
            prop_assert!((p0 - p1).norm() < 1e-12 * c.diameter());
        }
    }

    #[test]
    fn normal_feet_satisfy_the_foot_equation(
        qx in -4.0f64..4.0,
        qy in -4.0f64..4.0,
    ) {
        let c = Curve::ellipse(2.0, 1.0).unwrap();
        let p = Params::default();
        if let Ok(feet) = normal_feet(&c, Vec2::new(qx, qy), &p) {
            prop_assert!(!feet.is_empty());
            for f in &feet {
                let residual = (Vec2::new(qx, qy) - f.foot.p).dot(f.foot.tangent).abs();
                prop_assert!(residual < 1e-8, "foot residual {residual:.2e} at t={}", f.t);
            }
            // sorted and pairwise distinct
            for w in feet.windows(2) {
                prop_assert!(w[0].t < w[1].t);
            }
        }
    }

    #[test]
    fn charge_normalization_is_projective(
        q1 in -3.0f64..3.0,
        q2 in -3.0f64..3.0,
        q3 in -3.0f64..3.0,
        scale in prop::sample::select(vec![-10.0, -0.3, 0.2, 5.0]),
    ) {
        prop_assume!(q1.abs().max(q2.abs()).max(q3.abs()) > 1e-6);
        let base = ChargeTriple::normalized([q1, q2, q3]).q;
        let scaled = ChargeTriple::normalized([q1 * scale, q2 * scale, q3 * scale]).q;
        for (x, y) in base.iter().zip(scaled.iter()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        // idempotent, and the max-|.| entry is exactly +1
        let twice = ChargeTriple::normalized(base).q;
        for (x, y) in base.iter().zip(twice.iter()) {
            prop_assert!((x - y).abs() < 1e-15);
        }
        let max = base.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        prop_assert!((max - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ceva_residual_is_permutation_invariant(
        t1 in 0.0f64..TWO_PI,
        dt2 in 0.3f64..2.5,
        dt3 in 0.3f64..2.5,
    ) {
        let c = Curve::ellipse(2.0, 1.0).unwrap();
        let ts = [t1, t1 + dt2, t1 + dt2 + dt3];
        let pts = [
            c.eval(ts[0]).unwrap(),
            c.eval(ts[1]).unwrap(),
            c.eval(ts[2]).unwrap(),
        ];
        let base = ceva_residual(&pts).unwrap();
        for perm in [[0usize, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let pp = [pts[perm[0]], pts[perm[1]], pts[perm[2]]];
            let r = ceva_residual(&pp).unwrap();
            prop_assert!(
                (r.relative() - base.relative()).abs() < 1e-9 * (1.0 + base.relative()),
                "relative residual changed under permutation {perm:?}"
            );
        }
    }

    #[test]
    fn winding_of_random_triangles(
        x1 in -5.0f64..5.0, y1 in -5.0f64..5.0,
        x2 in -5.0f64..5.0, y2 in -5.0f64..5.0,
        x3 in -5.0f64..5.0, y3 in -5.0f64..5.0,
    ) {
        let tri = vec![Vec2::new(x1, y1), Vec2::new(x2, y2), Vec2::new(x3, y3)];
        let area2 = (tri[1] - tri[0]).cross(tri[2] - tri[0]);
        prop_assume!(area2.abs() > 1e-3);
        let centroid = (tri[0] + tri[1] + tri[2]) / 3.0;
        let inside = winding_number(&tri, centroid, 1e-12).unwrap();
        prop_assert_eq!(inside, if area2 > 0.0 { 1 } else { -1 });
        let outside = Vec2::new(6.0, 6.0);
        prop_assert_eq!(winding_number(&tri, outside, 1e-12).unwrap(), 0);
    }

    #[test]
    fn sig_formatting_round_trips_to_12_digits(
        mantissa in -1.0f64..1.0,
        exp in -12i32..12,
    ) {
        let x = mantissa * 10f64.powi(exp);
        let s = fmt_sig(x);
        let back: f64 = s.parse().unwrap();
        let tol = 1e-11 * x.abs().max(1e-300);
        prop_assert!((back - x).abs() <= tol, "{x} -> {s} -> {back}");
        // stable: formatting the parsed value reproduces the string
        prop_assert_eq!(fmt_sig(back), s);
    }
}
