//! Parametric plane curves with tangent/normal frames and curvature.
//!
//! All built-in closed curves are parametrized counterclockwise so that the
//! frame (T, N) with N = perp(T) is positively oriented and N points inward
//! on convex curves. Formulas never assume arclength parametrization: the
//! tangent is normalized on evaluation and the curvature comes from the
//! standard first/second-derivative formula.

use crate::geom::Vec2;
use crate::{Error, Result};

pub const TWO_PI: f64 = std::f64::consts::TAU;

/// The supported curve families.
#[derive(Debug, Clone)]
pub enum CurveKind {
    Circle {
        r: f64,
    },
    Ellipse {
        a: f64,
        b: f64,
    },
    /// The arc (t, c t^2) for t in the configured range.
    ParabolaArc {
        c: f64,
        t_range: (f64, f64),
    },
    /// Radial graph r(t) = cos\[0\] + sum_k cos\[k\] cos(kt) + sum_k sin\[k-1\] sin(kt).
    FourierOval {
        cos: Vec<f64>,
        sin: Vec<f64>,
    },
    /// Closed curve through the given points, periodic cubic spline,
    /// parametrized uniformly over [0, 2pi).
    Sampled {
        points: Vec<Vec2>,
    },
}

/// How derivatives are obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivMode {
    /// Closed-form derivatives (not available for sampled curves).
    Analytic,
    /// Central differences of the position with the given parameter step.
    CentralDiff { h: f64 },
}

/// A curve point with its cached frame.
///
/// Invariants: |tangent| = |normal| = 1, normal = perp(tangent), so the
/// pair (T, N) is positively oriented.
#[derive(Debug, Clone, Copy)]
pub struct CurvePoint {
    pub t: f64,
    pub p: Vec2,
    pub tangent: Vec2,
    pub normal: Vec2,
    pub kappa: f64,
}

impl CurvePoint {
    /// A synthetic point from a position and a tangent direction, with zero
    /// curvature. Used for configurations that do not come from a curve
    /// (e.g. collinear triples fed straight to the equilibrium solver).
    pub fn from_position_tangent(t: f64, p: Vec2, tangent_dir: Vec2) -> Self {
        let tangent = tangent_dir.normalized();
        CurvePoint {
            t,
            p,
            tangent,
            normal: tangent.perp(),
            kappa: 0.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Curve {
    kind: CurveKind,
    mode: DerivMode,
    t_range: (f64, f64),
    closed: bool,
    spline: Option<PeriodicSpline>,
    diameter: f64,
    convex: bool,
    eps_rel: f64,
}

impl Curve {
    pub fn circle(r: f64) -> Result<Curve> {
        if !r.is_finite() || r <= 0.0 {
            return Err(Error::Config(format!("circle radius must be > 0, got {r}")));
        }
        Curve::build(CurveKind::Circle { r }, DerivMode::Analytic)
    }

    pub fn ellipse(a: f64, b: f64) -> Result<Curve> {
        if !(a.is_finite() && b.is_finite()) || a <= 0.0 || b <= 0.0 {
            return Err(Error::Config(format!(
                "ellipse semi-axes must be > 0, got a={a}, b={b}"
            )));
        }
        Curve::build(CurveKind::Ellipse { a, b }, DerivMode::Analytic)
    }

    pub fn parabola_arc(c: f64, t_range: (f64, f64)) -> Result<Curve> {
        if !c.is_finite() || c == 0.0 || t_range.0 >= t_range.1 {
            return Err(Error::Config(format!(
                "parabola needs c != 0 and an increasing t range, got c={c}, range={t_range:?}"
            )));
        }
        Curve::build(CurveKind::ParabolaArc { c, t_range }, DerivMode::Analytic)
    }

    pub fn fourier_oval(cos: Vec<f64>, sin: Vec<f64>) -> Result<Curve> {
        if cos.is_empty() || cos[0] <= 0.0 {
            return Err(Error::Config(
                "fourier oval needs a positive constant term cos[0]".into(),
            ));
        }
        Curve::build(CurveKind::FourierOval { cos, sin }, DerivMode::Analytic)
    }

    pub fn sampled(points: Vec<Vec2>) -> Result<Curve> {
        if points.len() < 4 {
            return Err(Error::Config(format!(
                "sampled curve needs at least 4 points, got {}",
                points.len()
            )));
        }
        let default_h = 1e-5 * TWO_PI;
        Curve::build(
            CurveKind::Sampled { points },
            DerivMode::CentralDiff { h: default_h },
        )
    }

    /// Override the relative geometric tolerance (default 1e-9 of the
    /// diameter) governing regularity and flat-point checks.
    pub fn with_geom_tolerance(mut self, eps_rel: f64) -> Curve {
        self.eps_rel = eps_rel;
        self
    }

    /// Switch the derivative mode. Sampled curves always use central
    /// differences; requesting `Analytic` for them is an error.
    pub fn with_mode(mut self, mode: DerivMode) -> Result<Curve> {
        if matches!(self.kind, CurveKind::Sampled { .. }) && mode == DerivMode::Analytic {
            return Err(Error::Config(
                "sampled curves have no analytic derivatives".into(),
            ));
        }
        self.mode = mode;
        Ok(self)
    }

    fn build(kind: CurveKind, mode: DerivMode) -> Result<Curve> {
        let (t_range, closed) = match &kind {
            CurveKind::ParabolaArc { t_range, .. } => (*t_range, false),
            _ => ((0.0, TWO_PI), true),
        };
        let spline = match &kind {
            CurveKind::Sampled { points } => Some(PeriodicSpline::fit(points)),
            _ => None,
        };
        let mut curve = Curve {
            kind,
            mode,
            t_range,
            closed,
            spline,
            diameter: 1.0,
            convex: false,
            eps_rel: 1e-9,
        };
        // Diameter estimate and regularity check on a dense grid.
        let n = 1024;
        let span = curve.span();
        let mut lo = curve.position(t_range.0);
        let mut hi = lo;
        for k in 0..=n {
            let t = t_range.0 + span * k as f64 / n as f64;
            let p = curve.position(t);
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        curve.diameter = (hi - lo).norm().max(f64::MIN_POSITIVE);
        let mut convex = curve.closed;
        for k in 0..n {
            let t = t_range.0 + span * (k as f64 + 0.5) / n as f64;
            let cp = curve.eval(t)?; // surfaces NonRegularPoint
            if cp.kappa <= 0.0 {
                convex = false;
            }
        }
        curve.convex = convex;
        Ok(curve)
    }

    pub fn kind(&self) -> &CurveKind {
        &self.kind
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Curvature was strictly positive on the construction grid (closed
    /// curves only).
    pub fn is_convex(&self) -> bool {
        self.convex
    }

    pub fn domain(&self) -> (f64, f64) {
        self.t_range
    }

    pub fn span(&self) -> f64 {
        self.t_range.1 - self.t_range.0
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Wrap a parameter into the domain (periodically for closed curves,
    /// clamped for arcs).
    pub fn wrap(&self, t: f64) -> f64 {
        if self.closed {
            let span = self.span();
            let mut u = (t - self.t_range.0) % span;
            if u < 0.0 {
                u += span;
            }
            self.t_range.0 + u
        } else {
            t.clamp(self.t_range.0, self.t_range.1)
        }
    }

    pub fn position(&self, t: f64) -> Vec2 {
        let t = self.wrap(t);
        match &self.kind {
            CurveKind::Circle { r } => Vec2::new(r * t.cos(), r * t.sin()),
            CurveKind::Ellipse { a, b } => Vec2::new(a * t.cos(), b * t.sin()),
            CurveKind::ParabolaArc { c, .. } => Vec2::new(t, c * t * t),
            CurveKind::FourierOval { cos, sin } => {
                let r = fourier_radius(cos, sin, t).0;
                Vec2::new(r * t.cos(), r * t.sin())
            }
            CurveKind::Sampled { .. } => self.spline.as_ref().unwrap().eval(t),
        }
    }

    fn derivatives(&self, t: f64) -> (Vec2, Vec2) {
        match self.mode {
            DerivMode::Analytic => self.analytic_derivatives(t),
            DerivMode::CentralDiff { h } => {
                let pm = self.position(t - h);
                let pp = self.position(t + h);
                let d1 = (pp - pm) / (2.0 * h);
                // the second difference is roundoff-limited near eps/h^2, so
                // it uses at least the f64-optimal step ~ eps^(1/4)
                let h2 = h.max(f64::EPSILON.powf(0.25) * self.span() / TWO_PI);
                let qm = self.position(t - h2);
                let q0 = self.position(t);
                let qp = self.position(t + h2);
                let d2 = (qp - q0 * 2.0 + qm) / (h2 * h2);
                (d1, d2)
            }
        }
    }

    fn analytic_derivatives(&self, t: f64) -> (Vec2, Vec2) {
        let t = self.wrap(t);
        match &self.kind {
            CurveKind::Circle { r } => (
                Vec2::new(-r * t.sin(), r * t.cos()),
                Vec2::new(-r * t.cos(), -r * t.sin()),
            ),
            CurveKind::Ellipse { a, b } => (
                Vec2::new(-a * t.sin(), b * t.cos()),
                Vec2::new(-a * t.cos(), -b * t.sin()),
            ),
            CurveKind::ParabolaArc { c, .. } => {
                (Vec2::new(1.0, 2.0 * c * t), Vec2::new(0.0, 2.0 * c))
            }
            CurveKind::FourierOval { cos, sin } => {
                let (r, r1, r2) = fourier_radius(cos, sin, t);
                let u = Vec2::new(t.cos(), t.sin());
                let v = u.perp();
                (u * r1 + v * r, u * (r2 - r) + v * (2.0 * r1))
            }
            CurveKind::Sampled { .. } => {
                // always reached through CentralDiff; kept for completeness
                let h = 1e-5 * TWO_PI;
                let pm = self.position(t - h);
                let p0 = self.position(t);
                let pp = self.position(t + h);
                ((pp - pm) / (2.0 * h), (pp - p0 * 2.0 + pm) / (h * h))
            }
        }
    }

    /// Evaluate position, unit frame, and signed curvature at `t`.
    pub fn eval(&self, t: f64) -> Result<CurvePoint> {
        let t = self.wrap(t);
        let p = self.position(t);
        let (d1, d2) = self.derivatives(t);
        let speed = d1.norm();
        if speed < self.eps_rel * self.diameter {
            return Err(Error::NonRegularPoint { t, speed });
        }
        let tangent = d1 / speed;
        let kappa = d1.cross(d2) / (speed * speed * speed);
        Ok(CurvePoint {
            t,
            p,
            tangent,
            normal: tangent.perp(),
            kappa,
        })
    }

    /// Parameter speed |X'(t)|.
    pub fn speed(&self, t: f64) -> Result<f64> {
        let t = self.wrap(t);
        let (d1, _) = self.derivatives(t);
        let speed = d1.norm();
        if speed < self.eps_rel * self.diameter {
            return Err(Error::NonRegularPoint { t, speed });
        }
        Ok(speed)
    }

    /// Centre of curvature p + N / kappa.
    pub fn center_of_curvature(&self, t: f64) -> Result<Vec2> {
        let cp = self.eval(t)?;
        if cp.kappa.abs() * self.diameter < self.eps_rel {
            return Err(Error::FlatPoint {
                t: cp.t,
                kappa: cp.kappa,
            });
        }
        Ok(cp.p + cp.normal / cp.kappa)
    }

    /// d(kappa)/dt; closed forms for circle/ellipse/parabola, central
    /// differences otherwise.
    pub fn curvature_derivative(&self, t: f64) -> Result<f64> {
        if self.mode == DerivMode::Analytic {
            match &self.kind {
                CurveKind::Circle { .. } => return Ok(0.0),
                CurveKind::Ellipse { a, b } => {
                    let t = self.wrap(t);
                    let w = a * a * t.sin().powi(2) + b * b * t.cos().powi(2);
                    return Ok(-1.5 * a * b * (a * a - b * b) * (2.0 * t).sin() * w.powf(-2.5));
                }
                CurveKind::ParabolaArc { c, .. } => {
                    let t = self.wrap(t);
                    let w = 1.0 + 4.0 * c * c * t * t;
                    return Ok(-24.0 * c * c * c * t * w.powf(-2.5));
                }
                _ => {}
            }
        }
        let h = 1e-6 * self.span();
        let kp = self.eval(t + h)?.kappa;
        let km = self.eval(t - h)?.kappa;
        Ok((kp - km) / (2.0 * h))
    }
}

fn fourier_radius(cos: &[f64], sin: &[f64], t: f64) -> (f64, f64, f64) {
    let mut r = cos[0];
    let mut r1 = 0.0;
    let mut r2 = 0.0;
    for (k, &c) in cos.iter().enumerate().skip(1) {
        let kf = k as f64;
        let (s, co) = (kf * t).sin_cos();
        r += c * co;
        r1 -= c * kf * s;
        r2 -= c * kf * kf * co;
    }
    for (i, &b) in sin.iter().enumerate() {
        let kf = (i + 1) as f64;
        let (s, co) = (kf * t).sin_cos();
        r += b * s;
        r1 += b * kf * co;
        r2 -= b * kf * kf * s;
    }
    (r, r1, r2)
}

/// Natural periodic cubic spline through uniformly spaced knots.
#[derive(Debug, Clone)]
struct PeriodicSpline {
    points: Vec<Vec2>,
    second: Vec<Vec2>,
    h: f64,
}

impl PeriodicSpline {
    fn fit(points: &[Vec2]) -> PeriodicSpline {
        let n = points.len();
        let h = TWO_PI / n as f64;
        // Cyclic tridiagonal system  M_{k-1} + 4 M_k + M_{k+1} = rhs_k
        // solved per coordinate via the Sherman-Morrison trick.
        let rhs: Vec<Vec2> = (0..n)
            .map(|k| {
                (points[(k + n - 1) % n] - points[k] * 2.0 + points[(k + 1) % n]) * (6.0 / (h * h))
            })
            .collect();
        let solve = |pick: &dyn Fn(Vec2) -> f64| -> Vec<f64> {
            let d: Vec<f64> = rhs.iter().map(|v| pick(*v)).collect();
            cyclic_tridiagonal(4.0, 1.0, &d)
        };
        let mx = solve(&|v: Vec2| v.x);
        let my = solve(&|v: Vec2| v.y);
        let second = mx
            .into_iter()
            .zip(my)
            .map(|(x, y)| Vec2::new(x, y))
            .collect();
        PeriodicSpline {
            points: points.to_vec(),
            second,
            h,
        }
    }

    fn eval(&self, t: f64) -> Vec2 {
        let n = self.points.len();
        let mut u = t % TWO_PI;
        if u < 0.0 {
            u += TWO_PI;
        }
        let k = ((u / self.h) as usize).min(n - 1);
        let a = u - k as f64 * self.h;
        let b = self.h - a;
        let (p0, p1) = (self.points[k], self.points[(k + 1) % n]);
        let (m0, m1) = (self.second[k], self.second[(k + 1) % n]);
        let h = self.h;
        (p0 * b + p1 * a) / h
            + (m0 * (b * b * b - h * h * b) + m1 * (a * a * a - h * h * a)) / (6.0 * h)
    }
}

/// Solve the cyclic tridiagonal system with constant diagonal `diag` and
/// off-diagonal `off` (wrap-around corners included).
fn cyclic_tridiagonal(diag: f64, off: f64, d: &[f64]) -> Vec<f64> {
    let n = d.len();
    assert!(n >= 3);
    let gamma = -diag;
    // Modified system: first/last diagonal entries absorb the corners.
    let solve_tri = |b0: f64, bn: f64, rhs: &[f64]| -> Vec<f64> {
        let mut c = vec![0.0; n];
        let mut x = vec![0.0; n];
        let mut beta = b0;
        x[0] = rhs[0] / beta;
        for i in 1..n {
            c[i] = off / beta;
            beta = (if i == n - 1 { bn } else { diag }) - off * c[i];
            x[i] = (rhs[i] - off * x[i - 1]) / beta;
        }
        for i in (0..n - 1).rev() {
            let next = x[i + 1];
            x[i] -= c[i + 1] * next;
        }
        x
    };
    let b0 = diag - gamma;
    let bn = diag - off * off / gamma;
    let x = solve_tri(b0, bn, d);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = off;
    let z = solve_tri(b0, bn, &u);
    let factor = (x[0] + off * x[n - 1] / gamma) / (1.0 + z[0] + off * z[n - 1] / gamma);
    (0..n).map(|i| x[i] - factor * z[i]).collect()
}

// ---------------------------------------------------------------------------
// Plain-text configuration
// ---------------------------------------------------------------------------

/// Parse the key=value config format.
///
/// ```text
/// # comment
/// kind = ellipse
/// a = 2
/// b = 1
/// ```
///
/// Keys per kind: `circle`: r; `ellipse`: a, b; `parabola_arc`: c,
/// t_range=lo,hi (default -3,3); `fourier_oval`: cos=c0,c1,... and
/// optionally sin=s1,s2,...; `sampled`: points=x1,y1;x2,y2;...
/// Optional for all kinds: `h = <step>` switches to central differences.
pub fn curve_from_config(text: &str) -> Result<Curve> {
    let mut map = std::collections::BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key=value", lineno + 1)))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    let kind = map
        .remove("kind")
        .ok_or_else(|| Error::Config("missing required key `kind`".into()))?;
    let want = |map: &mut std::collections::BTreeMap<String, String>, key: &str| -> Result<f64> {
        map.remove(key)
            .ok_or_else(|| Error::Config(format!("kind {kind} needs key `{key}`")))?
            .parse::<f64>()
            .map_err(|e| Error::Config(format!("key `{key}`: {e}")))
    };
    let h = match map.remove("h") {
        Some(s) => Some(
            s.parse::<f64>()
                .map_err(|e| Error::Config(format!("key `h`: {e}")))?,
        ),
        None => None,
    };
    let curve = match kind.as_str() {
        "circle" => Curve::circle(want(&mut map, "r")?)?,
        "ellipse" => {
            let a = want(&mut map, "a")?;
            let b = want(&mut map, "b")?;
            Curve::ellipse(a, b)?
        }
        "parabola_arc" => {
            let c = want(&mut map, "c")?;
            let t_range = match map.remove("t_range") {
                Some(s) => parse_pair(&s)?,
                None => (-3.0, 3.0),
            };
            Curve::parabola_arc(c, t_range)?
        }
        "fourier_oval" => {
            let cos = parse_list(
                &map.remove("cos")
                    .ok_or_else(|| Error::Config("fourier_oval needs key `cos`".into()))?,
            )?;
            let sin = match map.remove("sin") {
                Some(s) => parse_list(&s)?,
                None => vec![],
            };
            Curve::fourier_oval(cos, sin)?
        }
        "sampled" => {
            let pts = map
                .remove("points")
                .ok_or_else(|| Error::Config("sampled needs key `points`".into()))?;
            let points = pts
                .split(';')
                .map(|pair| parse_pair(pair).map(|(x, y)| Vec2::new(x, y)))
                .collect::<Result<Vec<_>>>()?;
            Curve::sampled(points)?
        }
        other => return Err(Error::Config(format!("unknown kind `{other}`"))),
    };
    if let Some(key) = map.keys().next() {
        return Err(Error::Config(format!("unknown key `{key}`")));
    }
    match h {
        Some(h) => curve.with_mode(DerivMode::CentralDiff { h }),
        None => Ok(curve),
    }
}

/// Parse the compact CLI form: `circle:1`, `ellipse:2,1`,
/// `parabola:1[,lo,hi]`, `fourier:c0,c1,...[/s1,s2,...]`.
pub fn curve_from_cli_spec(spec: &str) -> Result<Curve> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::Config(format!("expected kind:args, got `{spec}`")))?;
    match kind {
        "circle" => Curve::circle(parse_f64(rest)?),
        "ellipse" => {
            let v = parse_list(rest)?;
            if v.len() != 2 {
                return Err(Error::Config("ellipse takes `a,b`".into()));
            }
            Curve::ellipse(v[0], v[1])
        }
        "parabola" => {
            let v = parse_list(rest)?;
            match v.len() {
                1 => Curve::parabola_arc(v[0], (-3.0, 3.0)),
                3 => Curve::parabola_arc(v[0], (v[1], v[2])),
                _ => Err(Error::Config("parabola takes `c` or `c,lo,hi`".into())),
            }
        }
        "fourier" => {
            let (c, s) = match rest.split_once('/') {
                Some((c, s)) => (parse_list(c)?, parse_list(s)?),
                None => (parse_list(rest)?, vec![]),
            };
            Curve::fourier_oval(c, s)
        }
        other => Err(Error::Config(format!("unknown curve kind `{other}`"))),
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| Error::Config(format!("`{s}`: {e}")))
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(parse_f64).collect()
}

fn parse_pair(s: &str) -> Result<(f64, f64)> {
    let v = parse_list(s)?;
    if v.len() != 2 {
        return Err(Error::Config(format!("expected two numbers, got `{s}`")));
    }
    Ok((v[0], v[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ellipse21() -> Curve {
        Curve::ellipse(2.0, 1.0).unwrap()
    }

    /// Closed-form ellipse curvature, the independent oracle for eval.
    fn ellipse_kappa_oracle(a: f64, b: f64, t: f64) -> f64 {
        a * b / (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).powf(1.5)
    }

    #[test]
    fn circle_point_and_curvature() {
        let c = Curve::circle(2.0).unwrap();
        let cp = c.eval(0.0).unwrap();
        assert!((cp.p - Vec2::new(2.0, 0.0)).norm() < 1e-12);
        assert!((cp.kappa - 0.5).abs() < 1e-12);
        // inward normal for ccw convex curve
        assert!((cp.normal - Vec2::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn ellipse_vertex_curvature_matches_closed_form() {
        let c = ellipse21();
        let cp = c.eval(0.0).unwrap();
        assert!((cp.p - Vec2::new(2.0, 0.0)).norm() < 1e-12);
        assert!((cp.kappa - 2.0).abs() < 1e-12); // a/b^2
        for &t in &[0.3, 1.1, 2.7, 4.0, 5.9] {
            let k = c.eval(t).unwrap().kappa;
            assert!((k - ellipse_kappa_oracle(2.0, 1.0, t)).abs() < 1e-12);
        }
    }

    #[test]
    fn parabola_vertex_curvature() {
        let c = Curve::parabola_arc(1.0, (-3.0, 3.0)).unwrap();
        let cp = c.eval(0.0).unwrap();
        assert!((cp.p - Vec2::ZERO).norm() < 1e-12);
        assert!((cp.kappa - 2.0).abs() < 1e-12); // 2c
    }

    #[test]
    fn circle_center_of_curvature_is_center() {
        let c = Curve::circle(2.0).unwrap();
        for &t in &[0.0, 1.0, 2.5, 4.5] {
            assert!(c.center_of_curvature(t).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn ellipse_evolute_vertices() {
        // classical evolute of the ellipse: ((a^2-b^2)/a cos^3, -(a^2-b^2)/b sin^3)
        let c = ellipse21();
        let e0 = c.center_of_curvature(0.0).unwrap();
        assert!((e0 - Vec2::new(1.5, 0.0)).norm() < 1e-12);
        let e1 = c.center_of_curvature(std::f64::consts::FRAC_PI_2).unwrap();
        assert!((e1 - Vec2::new(0.0, -3.0)).norm() < 1e-12);
    }

    #[test]
    fn curvature_derivative_signs() {
        let c = ellipse21();
        assert!(c.curvature_derivative(0.0).unwrap().abs() < 1e-12);
        // curvature decreases from t=0 toward t=pi/2
        let kq = c.curvature_derivative(std::f64::consts::FRAC_PI_4).unwrap();
        assert!(kq < 0.0);
        let circle = Curve::circle(1.5).unwrap();
        assert_eq!(circle.curvature_derivative(1.0).unwrap(), 0.0);
    }

    #[test]
    fn frame_orthonormal_on_random_parameters() {
        let curves = [
            Curve::circle(1.0).unwrap(),
            ellipse21(),
            Curve::parabola_arc(0.7, (-2.0, 2.0)).unwrap(),
            Curve::fourier_oval(vec![1.0, 0.0, 0.0, 0.05], vec![]).unwrap(),
        ];
        let mut t = 0.123_f64;
        for c in &curves {
            for _ in 0..1000 {
                t = (t * 9301.0 + 49297.0) % 1.0;
                let (lo, hi) = c.domain();
                let cp = c.eval(lo + t * (hi - lo)).unwrap();
                assert!((cp.tangent.norm() - 1.0).abs() < 1e-9);
                assert!((cp.normal.norm() - 1.0).abs() < 1e-9);
                assert!(cp.tangent.dot(cp.normal).abs() < 1e-9);
                assert!((cp.tangent.cross(cp.normal) - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn central_difference_agrees_with_analytic() {
        let h = 1e-5;
        for (analytic, fd) in [
            (
                ellipse21(),
                ellipse21().with_mode(DerivMode::CentralDiff { h }).unwrap(),
            ),
            (
                Curve::fourier_oval(vec![1.0, 0.0, 0.0, 0.05], vec![0.01]).unwrap(),
                Curve::fourier_oval(vec![1.0, 0.0, 0.0, 0.05], vec![0.01])
                    .unwrap()
                    .with_mode(DerivMode::CentralDiff { h })
                    .unwrap(),
            ),
        ] {
            for k in 0..64 {
                let t = TWO_PI * k as f64 / 64.0 + 0.013;
                let pa = analytic.eval(t).unwrap();
                let pf = fd.eval(t).unwrap();
                assert!((pa.tangent - pf.tangent).norm() < 1e-6);
                assert!((pa.kappa - pf.kappa).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn evolute_is_envelope_of_normals() {
        // normals at t and t+delta intersect close to the curvature centre
        let c = ellipse21();
        let delta = 1e-4;
        for k in 0..32 {
            let t = TWO_PI * k as f64 / 32.0 + 0.007;
            let p0 = c.eval(t).unwrap();
            let p1 = c.eval(t + delta).unwrap();
            let x = crate::geom::least_squares_line_point(&[p0.p, p1.p], &[p0.normal, p1.normal])
                .unwrap();
            let e = c.center_of_curvature(t).unwrap();
            assert!(
                (x - e).norm() < 1e-2 * c.diameter(),
                "t={t}: intersection {x:?} vs evolute {e:?}"
            );
        }
    }

    #[test]
    fn sampled_curve_tracks_its_source() {
        let src = ellipse21();
        let pts: Vec<Vec2> = (0..256)
            .map(|k| src.position(TWO_PI * k as f64 / 256.0))
            .collect();
        let c = Curve::sampled(pts).unwrap();
        assert!(c.is_closed());
        for k in 0..40 {
            let t = TWO_PI * k as f64 / 40.0 + 0.004;
            assert!((c.position(t) - src.position(t)).norm() < 1e-6 * src.diameter());
            let cp = c.eval(t).unwrap();
            let sp = src.eval(t).unwrap();
            assert!((cp.tangent - sp.tangent).norm() < 1e-4);
            assert!((cp.kappa - sp.kappa).abs() < 1e-3);
        }
        // periodicity
        assert!((c.position(0.0) - c.position(TWO_PI)).norm() < 1e-12);
    }

    #[test]
    fn nonregular_sampled_curve_is_rejected() {
        let p = Vec2::new(1.0, 0.0);
        let err = Curve::sampled(vec![p; 8]);
        assert!(err.is_err());
    }

    #[test]
    fn flat_point_on_a_nonconvex_oval() {
        // a strong third harmonic drives the curvature through zero; the
        // curvature centre blows up there
        let c = Curve::fourier_oval(vec![1.0, 0.0, 0.0, 0.2], vec![]).unwrap();
        assert!(!c.is_convex());
        let (mut lo, mut hi) = (0.0, 0.0);
        let mut prev = c.eval(0.005).unwrap().kappa;
        for k in 1..2000 {
            let t = TWO_PI * (k as f64 + 0.5) / 2000.0;
            let kap = c.eval(t).unwrap().kappa;
            if prev * kap < 0.0 {
                lo = TWO_PI * (k as f64 - 0.5) / 2000.0;
                hi = t;
                break;
            }
            prev = kap;
        }
        assert!(hi > lo, "no curvature sign change found");
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if c.eval(lo).unwrap().kappa * c.eval(mid).unwrap().kappa <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        match c.center_of_curvature(0.5 * (lo + hi)) {
            Err(Error::FlatPoint { .. }) => {}
            other => panic!("expected FlatPoint, got {other:?}"),
        }
    }

    #[test]
    fn convexity_flags() {
        assert!(ellipse21().is_convex());
        assert!(Curve::circle(1.0).unwrap().is_convex());
        assert!(Curve::fourier_oval(vec![1.0, 0.0, 0.0, 0.05], vec![])
            .unwrap()
            .is_convex());
        // strong third harmonic makes the oval non-convex
        assert!(!Curve::fourier_oval(vec![1.0, 0.0, 0.0, 0.2], vec![])
            .unwrap()
            .is_convex());
        assert!(!Curve::parabola_arc(1.0, (-2.0, 2.0)).unwrap().is_convex());
    }

    #[test]
    fn config_roundtrip() {
        let c = curve_from_config("kind = ellipse\na = 2\nb = 1\n# comment\n").unwrap();
        assert!((c.position(0.0) - Vec2::new(2.0, 0.0)).norm() < 1e-12);
        let c = curve_from_config("kind=fourier_oval\ncos=1,0,0,0.05\nsin=0.01").unwrap();
        assert!(c.is_convex());
        assert!(curve_from_config("kind=ellipse\na=2\n").is_err());
        assert!(curve_from_config("kind=ellipse\na=2\nb=1\nbogus=3").is_err());
        assert!(curve_from_config("a=2").is_err());
    }

    #[test]
    fn cli_spec_parsing() {
        assert!(curve_from_cli_spec("ellipse:2,1").is_ok());
        assert!(curve_from_cli_spec("circle:1").is_ok());
        assert!(curve_from_cli_spec("parabola:1").is_ok());
        assert!(curve_from_cli_spec("parabola:1,-2,2").is_ok());
        assert!(curve_from_cli_spec("fourier:1,0,0,0.05/0.01").is_ok());
        assert!(curve_from_cli_spec("hyperbola:1").is_err());
        assert!(curve_from_cli_spec("ellipse:2").is_err());
    }
}
