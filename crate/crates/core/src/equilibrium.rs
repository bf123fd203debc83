//! Balancing charges for triples of points on a curve.
//!
//! Three charges q at points P_i with unit tangents T_i are at rest when the
//! tangential force components vanish: sum_j q_i q_j <p_i - p_j, T_i> / f(d_ij)
//! = 0 for all i, where f depends on the force law (f = d^3 for Coulomb, so
//! the force magnitude scales as 1/d^2). Nontrivial charges exist exactly when
//! the 3x3 interaction matrix a_ij = <p_i - p_j, T_i> / f(d_ij) has rank <= 2,
//! which is the trigonometric Ceva condition
//!
//! ```text
//! a12 a23 a31 + a13 a21 a32 = 0,
//! ```
//!
//! and geometrically says the three normals are concurrent. The denominators
//! cancel in that product, so the concurrency test is computed with the
//! distance-free entries <p_i - p_j, T_i> and is identical for every central
//! force law; only the charge values depend on the law.

use crate::curve::{Curve, CurvePoint};
use crate::geom::{least_squares_line_point, Vec2};
use crate::kernel::normal_feet;
use crate::{Error, Params, Result};

/// A central force law, identified by the denominator profile f(d) in
/// F_ji = q_i q_j (p_i - p_j) / f(d_ij).
#[derive(Debug, Clone, Copy)]
pub enum ForceLaw {
    /// f(d) = d^3: force magnitude ~ 1/d^2.
    Coulomb,
    /// f(d) = 1: force magnitude ~ d (springs).
    Hooke,
    /// f(d) = d^2: force magnitude ~ 1/d.
    Logarithmic,
    /// Any positive profile f(d).
    Custom(fn(f64) -> f64),
}

impl ForceLaw {
    pub fn denominator(&self, d: f64) -> f64 {
        match self {
            ForceLaw::Coulomb => d * d * d,
            ForceLaw::Hooke => 1.0,
            ForceLaw::Logarithmic => d * d,
            ForceLaw::Custom(f) => f(d),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ForceLaw::Coulomb => "coulomb",
            ForceLaw::Hooke => "hooke",
            ForceLaw::Logarithmic => "logarithmic",
            ForceLaw::Custom(_) => "custom",
        }
    }
}

/// The 3x3 matrix a_ij with zero diagonal.
#[derive(Debug, Clone)]
pub struct InteractionMatrix {
    pub entries: [[f64; 3]; 3],
}

impl InteractionMatrix {
    /// Entries a_ij = <p_i - p_j, T_i> / f(d_ij).
    pub fn new(points: &[CurvePoint; 3], law: ForceLaw) -> Result<InteractionMatrix> {
        Self::build(points, |d| law.denominator(d))
    }

    /// Distance-free entries a_ij = <p_i - p_j, T_i>; same zero set of the
    /// Ceva product as any law.
    pub fn distance_free(points: &[CurvePoint; 3]) -> Result<InteractionMatrix> {
        Self::build(points, |_| 1.0)
    }

    fn build(points: &[CurvePoint; 3], denom: impl Fn(f64) -> f64) -> Result<InteractionMatrix> {
        check_distinct(points)?;
        let mut entries = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let d = points[i].p.distance(points[j].p);
                entries[i][j] = (points[i].p - points[j].p).dot(points[i].tangent) / denom(d);
            }
        }
        Ok(InteractionMatrix { entries })
    }

    fn rows(&self) -> [[f64; 3]; 3] {
        self.entries
    }
}

fn check_distinct(points: &[CurvePoint; 3]) -> Result<()> {
    let scale = points
        .iter()
        .flat_map(|p| [p.p.x.abs(), p.p.y.abs()])
        .fold(1.0_f64, f64::max);
    for i in 0..3 {
        for j in (i + 1)..3 {
            let d = points[i].p.distance(points[j].p);
            if d < 1e-12 * scale {
                return Err(Error::CoincidentPoints { i, j, d });
            }
        }
    }
    Ok(())
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// The Ceva product with its natural magnitude scale.
#[derive(Debug, Clone, Copy)]
pub struct CevaResidual {
    /// a12 a23 a31 + a13 a21 a32 with distance-free entries; this is the
    /// determinant of the zero-diagonal interaction matrix.
    pub value: f64,
    /// Product of the row maxima of |a_ij|, the natural magnitude of a
    /// three-entry product. Individual products can vanish on double
    /// normals, so they make a poor denominator.
    pub scale: f64,
}

impl CevaResidual {
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.value.abs() / self.scale
        } else {
            // every entry vanishes; rank 0 is handled downstream
            0.0
        }
    }
}

/// Law-independent concurrency residual of the three normals.
pub fn ceva_residual(points: &[CurvePoint; 3]) -> Result<CevaResidual> {
    let a = InteractionMatrix::distance_free(points)?.entries;
    let pos = a[0][1] * a[1][2] * a[2][0];
    let neg = a[0][2] * a[1][0] * a[2][1];
    let scale = (0..3)
        .map(|i| {
            (0..3)
                .filter(|&j| j != i)
                .fold(0.0_f64, |m, j| m.max(a[i][j].abs()))
        })
        .product();
    Ok(CevaResidual {
        value: pos + neg,
        scale,
    })
}

/// Result of the two independent concurrency tests.
#[derive(Debug, Clone, Copy)]
pub struct ConcurrencyCheck {
    /// Both tests passed.
    pub is_orthotripod: bool,
    /// Relative Ceva residual below `params.eps_ceva`.
    pub ceva_ok: bool,
    /// Least-squares common point within `params.eps_conc` of all normals.
    pub concurrency_ok: bool,
    pub center: Vec2,
    pub ceva_relative: f64,
    /// Max distance from the centre to the three normal lines, relative to
    /// the largest pairwise point distance.
    pub max_line_distance_rel: f64,
}

/// Test whether the normals at three points are concurrent, returning the
/// least-squares orthotricentre.
///
/// Two independent routes are evaluated: the algebraic Ceva product and the
/// geometric least-squares intersection of the normal lines. The triple is an
/// orthotripod when both agree.
pub fn is_orthotripod(points: &[CurvePoint; 3], params: &Params) -> Result<ConcurrencyCheck> {
    check_distinct(points)?;
    let ceva = ceva_residual(points)?;
    let base = [points[0].p, points[1].p, points[2].p];
    let dirs = [points[0].normal, points[1].normal, points[2].normal];
    let center = least_squares_line_point(&base, &dirs).ok_or(Error::ParallelNormals)?;
    let dscale = (0..3)
        .flat_map(|i| ((i + 1)..3).map(move |j| (i, j)))
        .map(|(i, j)| points[i].p.distance(points[j].p))
        .fold(0.0_f64, f64::max);
    let max_line = (0..3)
        .map(|i| (center - points[i].p).dot(points[i].tangent).abs())
        .fold(0.0_f64, f64::max);
    let ceva_ok = ceva.relative() < params.eps_ceva;
    let concurrency_ok = max_line < params.eps_conc * dscale;
    Ok(ConcurrencyCheck {
        is_orthotripod: ceva_ok && concurrency_ok,
        ceva_ok,
        concurrency_ok,
        center,
        ceva_relative: ceva.relative(),
        max_line_distance_rel: max_line / dscale,
    })
}

/// Projective charge triple \[q1:q2:q3\], normalized so the entry of largest
/// magnitude equals +1.
#[derive(Debug, Clone, Copy)]
pub struct ChargeTriple {
    pub q: [f64; 3],
}

impl ChargeTriple {
    /// Canonicalize: divide by the (signed) entry with the largest absolute
    /// value, so that entry becomes +1.
    pub fn normalized(q: [f64; 3]) -> ChargeTriple {
        let mut k = 0;
        for i in 1..3 {
            if q[i].abs() > q[k].abs() {
                k = i;
            }
        }
        let s = q[k];
        ChargeTriple {
            q: [q[0] / s, q[1] / s, q[2] / s],
        }
    }

    /// Signs with a zero threshold: +1, -1, or 0 per entry.
    pub fn sign_pattern(&self, zero_eps: f64) -> [i8; 3] {
        let mut out = [0i8; 3];
        for (o, &v) in out.iter_mut().zip(self.q.iter()) {
            *o = if v > zero_eps {
                1
            } else if v < -zero_eps {
                -1
            } else {
                0
            };
        }
        out
    }

    pub fn all_positive(&self, zero_eps: f64) -> bool {
        self.sign_pattern(zero_eps) == [1, 1, 1]
    }

    pub fn min_abs(&self) -> f64 {
        self.q.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()))
    }
}

/// Render a sign pattern as `+-0` style text.
pub fn sign_pattern_string(signs: [i8; 3]) -> String {
    signs
        .iter()
        .map(|s| match s {
            1 => '+',
            -1 => '-',
            _ => '0',
        })
        .collect()
}

/// Solve (a_ij) q = 0 for the balancing charges of an orthotripod.
///
/// The kernel vector is the cross product of the two matrix rows with the
/// largest cross norm, which stays well conditioned near double normals where
/// individual entries vanish. Requires the Ceva residual to pass (the triple
/// must be an orthotripod, possibly with parallel normals meeting at
/// infinity, as for collinear points); a matrix of rank <= 1 is reported as
/// [`Error::RankDeficient`].
pub fn balancing_charges(
    points: &[CurvePoint; 3],
    law: ForceLaw,
    params: &Params,
) -> Result<ChargeTriple> {
    let ceva = ceva_residual(points)?;
    if ceva.relative() >= params.eps_ceva {
        return Err(Error::NotOrthotripod {
            residual: ceva.relative(),
        });
    }
    let m = InteractionMatrix::new(points, law)?;
    kernel_vector(&m).map(ChargeTriple::normalized)
}

fn kernel_vector(m: &InteractionMatrix) -> Result<[f64; 3]> {
    let rows = m.rows();
    let mut best: Option<[f64; 3]> = None;
    let mut best_norm = 0.0;
    let mut row_scale = 0.0_f64;
    for i in 0..3 {
        row_scale = row_scale.max(norm3(rows[i]));
        for j in (i + 1)..3 {
            let c = cross3(rows[i], rows[j]);
            let n = norm3(c);
            if n > best_norm {
                best_norm = n;
                best = Some(c);
            }
        }
    }
    match best {
        Some(c) if best_norm > 1e-14 * row_scale * row_scale => Ok(c),
        _ => Err(Error::RankDeficient),
    }
}

/// True when the balancing charges are all positive, decided by the sign
/// structure of the interaction matrix: for each i the two off-diagonal
/// entries of row i must have opposite signs, which geometrically says the
/// normal at P_i enters the triangle interior.
pub fn positive_charge_test(points: &[CurvePoint; 3], params: &Params) -> Result<bool> {
    let ceva = ceva_residual(points)?;
    if ceva.relative() >= params.eps_ceva {
        return Err(Error::NotOrthotripod {
            residual: ceva.relative(),
        });
    }
    let a = InteractionMatrix::distance_free(points)?.entries;
    Ok(a[0][1] * a[0][2] < 0.0 && a[1][0] * a[1][2] < 0.0 && a[2][0] * a[2][1] < 0.0)
}

/// The independent equilibrium oracle: tangential components of the net
/// force at each point, computed straight from the force sum without any of
/// the Ceva machinery.
pub fn tangential_residual(
    points: &[CurvePoint; 3],
    charges: &ChargeTriple,
    law: ForceLaw,
) -> Result<[f64; 3]> {
    check_distinct(points)?;
    let q = charges.q;
    let mut out = [0.0; 3];
    for i in 0..3 {
        let mut force = Vec2::ZERO;
        for j in 0..3 {
            if i == j {
                continue;
            }
            let d = points[i].p.distance(points[j].p);
            force = force + (points[i].p - points[j].p) * (q[i] * q[j] / law.denominator(d));
        }
        out[i] = force.dot(points[i].tangent);
    }
    Ok(out)
}

/// Magnitude scale of the tangential forces, for relative residual checks:
/// per point, the sum of |q_i q_j| d_ij / f(d_ij).
pub fn force_scale(points: &[CurvePoint; 3], charges: &ChargeTriple, law: ForceLaw) -> f64 {
    let q = charges.q;
    let mut scale = 0.0_f64;
    for i in 0..3 {
        let mut s = 0.0;
        for j in 0..3 {
            if i == j {
                continue;
            }
            let d = points[i].p.distance(points[j].p);
            s += (q[i] * q[j]).abs() * d / law.denominator(d);
        }
        scale = scale.max(s);
    }
    scale
}

/// Coulomb potential E_q = -sum_{i<j} q_i q_j / d_ij.
///
/// Its partial derivative along the curve parameter satisfies
/// dE/dt_i = <F_i, T_i> |X'(t_i)|, which the check suite verifies by central
/// differences.
pub fn potential(points: &[CurvePoint; 3], charges: &ChargeTriple) -> Result<f64> {
    check_distinct(points)?;
    let q = charges.q;
    let mut e = 0.0;
    for i in 0..3 {
        for j in (i + 1)..3 {
            e -= q[i] * q[j] / points[i].p.distance(points[j].p);
        }
    }
    Ok(e)
}

/// An unordered triple of curve points with concurrent normals, stored
/// sorted by parameter, with its orthotricentre and Coulomb charges.
#[derive(Debug, Clone)]
pub struct Orthotripod {
    pub points: [CurvePoint; 3],
    pub center: Vec2,
    pub ceva_relative: f64,
    pub max_line_distance_rel: f64,
    pub charges: ChargeTriple,
}

impl Orthotripod {
    pub fn params(&self) -> [f64; 3] {
        [self.points[0].t, self.points[1].t, self.points[2].t]
    }
}

/// Build an orthotripod from three curve points (sorted by parameter
/// internally), verifying concurrency and attaching charges for `law`.
pub fn orthotripod_from_points(
    points: [CurvePoint; 3],
    law: ForceLaw,
    params: &Params,
) -> Result<Orthotripod> {
    let mut pts = points;
    pts.sort_by(|a, b| a.t.partial_cmp(&b.t).unwrap());
    let check = is_orthotripod(&pts, params)?;
    if !check.is_orthotripod {
        return Err(Error::NotOrthotripod {
            residual: check.ceva_relative,
        });
    }
    let charges = balancing_charges(&pts, law, params)?;
    Ok(Orthotripod {
        points: pts,
        center: check.center,
        ceva_relative: check.ceva_relative,
        max_line_distance_rel: check.max_line_distance_rel,
        charges,
    })
}

/// All orthotripods with orthotricentre `q`: every 3-subset of the normal
/// feet from `q`. A core-interior point of an ellipse-like oval has four
/// feet and hence four tripods.
pub fn tripods_from_center(
    curve: &Curve,
    q: Vec2,
    law: ForceLaw,
    params: &Params,
) -> Result<Vec<Orthotripod>> {
    let feet = normal_feet(curve, q, params)?;
    if feet.len() < 3 {
        return Err(Error::NotInCore {
            x: q.x,
            y: q.y,
            n: feet.len(),
        });
    }
    let n = feet.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let pts = [feet[i].foot, feet[j].foot, feet[k].foot];
                out.push(orthotripod_from_points(pts, law, params)?);
            }
        }
    }
    Ok(out)
}
