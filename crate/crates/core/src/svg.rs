//! Standalone SVG figures: curve + caustic portraits and the unrolled
//! orthotripod cylinder.

use crate::atlas::{AtlasComplex, SheetLabel};
use crate::caustic::CausticGeometry;
use crate::curve::Curve;
use crate::geom::{bounding_box, Vec2};
use crate::kernel::{normal_count, DoubleNormal};
use crate::Params;

fn f(x: f64) -> String {
    format!("{:.4}", x)
}

struct Canvas {
    body: String,
    scale: f64,
    offset: Vec2,
    height: f64,
}

impl Canvas {
    /// World bbox mapped into a width x height canvas, y axis flipped.
    fn new(lo: Vec2, hi: Vec2, width: f64) -> Canvas {
        let w = (hi.x - lo.x).max(1e-12);
        let h = (hi.y - lo.y).max(1e-12);
        let scale = width / w;
        Canvas {
            body: String::new(),
            scale,
            offset: lo,
            height: h * scale,
        }
    }

    fn map(&self, p: Vec2) -> (f64, f64) {
        (
            (p.x - self.offset.x) * self.scale,
            self.height - (p.y - self.offset.y) * self.scale,
        )
    }

    fn polyline(&mut self, pts: &[Vec2], closed: bool, style: &str) {
        let mut d = String::new();
        for (i, &p) in pts.iter().enumerate() {
            let (x, y) = self.map(p);
            d.push_str(if i == 0 { "M" } else { "L" });
            d.push_str(&format!("{} {} ", f(x), f(y)));
        }
        if closed {
            d.push('Z');
        }
        self.body.push_str(&format!(
            "<path d=\"{}\" style=\"{}\"/>\n",
            d.trim_end(),
            style
        ));
    }

    fn segment(&mut self, a: Vec2, b: Vec2, style: &str) {
        let (x1, y1) = self.map(a);
        let (x2, y2) = self.map(b);
        self.body.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" style=\"{}\"/>\n",
            f(x1),
            f(y1),
            f(x2),
            f(y2),
            style
        ));
    }

    fn dot(&mut self, p: Vec2, r: f64, fill: &str) {
        let (x, y) = self.map(p);
        self.body.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\"/>\n",
            f(x),
            f(y),
            f(r),
            fill
        ));
    }

    fn rect(&mut self, lo: Vec2, hi: Vec2, fill: &str, opacity: f64) {
        let (x1, y1) = self.map(Vec2::new(lo.x, hi.y));
        let (x2, y2) = self.map(Vec2::new(hi.x, lo.y));
        self.body.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" fill-opacity=\"{}\"/>\n",
            f(x1),
            f(y1),
            f(x2 - x1),
            f(y2 - y1),
            fill,
            f(opacity)
        ));
    }

    fn finish(self, width: f64) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {} {}\" width=\"{}\" height=\"{}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            f(width),
            f(self.height),
            f(width),
            f(self.height),
            self.body
        )
    }
}

/// Portrait of a curve: the curve (black), its caustic (red), cusps (dots),
/// double normals (dashed), and the core region shaded by the normal count
/// n(Q) sampled on a grid.
pub fn caustic_figure(
    curve: &Curve,
    caustic: &CausticGeometry,
    doubles: &[DoubleNormal],
    shade_grid: usize,
    params: &Params,
) -> String {
    let (lo_c, hi_c) = {
        let pts: Vec<Vec2> = (0..512)
            .map(|k| curve.position(curve.domain().0 + curve.span() * k as f64 / 512.0))
            .collect();
        bounding_box(&pts).unwrap()
    };
    let (lo_e, hi_e) = bounding_box(&caustic.polyline).unwrap_or((lo_c, hi_c));
    let lo = Vec2::new(lo_c.x.min(lo_e.x), lo_c.y.min(lo_e.y));
    let hi = Vec2::new(hi_c.x.max(hi_e.x), hi_c.y.max(hi_e.y));
    let pad = (hi - lo) * 0.05;
    let (lo, hi) = (lo - pad, hi + pad);
    let width = 640.0;
    let mut canvas = Canvas::new(lo, hi, width);

    // core shading by n(Q)
    if shade_grid >= 2 {
        let m = shade_grid;
        let step = Vec2::new((hi.x - lo.x) / m as f64, (hi.y - lo.y) / m as f64);
        for i in 0..m {
            for j in 0..m {
                let cell_lo = lo + Vec2::new(step.x * i as f64, step.y * j as f64);
                let center = cell_lo + step * 0.5;
                let n = match normal_count(curve, center, params) {
                    Ok(n) => n,
                    Err(_) => continue,
                };
                if n >= 4 {
                    let opacity = 0.12 * ((n as f64 - 2.0) / 2.0).min(3.0);
                    canvas.rect(cell_lo, cell_lo + step, "#3a6ea5", opacity);
                }
            }
        }
    }

    let curve_pts: Vec<Vec2> = (0..=720)
        .map(|k| curve.position(curve.domain().0 + curve.span() * k as f64 / 720.0))
        .collect();
    canvas.polyline(
        &curve_pts,
        curve.is_closed(),
        "fill:none;stroke:black;stroke-width:1.6",
    );
    canvas.polyline(
        &caustic.polyline,
        true,
        "fill:none;stroke:#c0392b;stroke-width:1.2",
    );
    for d in doubles {
        canvas.segment(
            d.chord.0,
            d.chord.1,
            "stroke:#555;stroke-width:0.9;stroke-dasharray:6 4",
        );
    }
    for &(_, p) in &caustic.cusps {
        canvas.dot(p, 3.0, "#c0392b");
    }
    canvas.finish(width)
}

/// The unrolled cylinder: the four sheets side by side in gluing order, the
/// positive-charge region shaded, glued panel borders marked red.
pub fn atlas_figure(atlas: &AtlasComplex) -> String {
    // chain the sheets through the glue graph starting from Y123
    let mut order: Vec<SheetLabel> = vec![SheetLabel::ALL[0]];
    while order.len() < 4 {
        let cur = *order.last().unwrap();
        let next = atlas
            .arcs
            .iter()
            .filter_map(|a| {
                let (s1, s2) = a.glued;
                if s1 == cur {
                    Some(s2)
                } else if s2 == cur {
                    Some(s1)
                } else {
                    None
                }
            })
            .find(|s| !order.contains(s));
        match next {
            Some(s) => order.push(s),
            None => break,
        }
    }
    for s in SheetLabel::ALL {
        if !order.contains(&s) {
            order.push(s);
        }
    }

    let (mut lo, mut hi) = (
        Vec2::new(f64::INFINITY, f64::INFINITY),
        Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
    );
    for v in &atlas.vertices {
        lo.x = lo.x.min(v.q.x);
        lo.y = lo.y.min(v.q.y);
        hi.x = hi.x.max(v.q.x);
        hi.y = hi.y.max(v.q.y);
    }
    let panel_w = hi.x - lo.x;
    let gap = panel_w * 0.08;
    let total_lo = lo;
    let total_hi = Vec2::new(lo.x + 4.0 * panel_w + 3.0 * gap, hi.y);
    let width = 1280.0;
    let mut canvas = Canvas::new(total_lo, total_hi, width);

    let cell = {
        // grid pitch from the two smallest distinct coordinates
        let mut xs: Vec<f64> = atlas.vertices.iter().map(|v| v.q.x).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        xs.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        let mut ys: Vec<f64> = atlas.vertices.iter().map(|v| v.q.y).collect();
        ys.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ys.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        Vec2::new(
            if xs.len() > 1 { xs[1] - xs[0] } else { 1.0 },
            if ys.len() > 1 { ys[1] - ys[0] } else { 1.0 },
        )
    };

    for (pi, &sheet) in order.iter().enumerate() {
        let shift = Vec2::new((panel_w + gap) * pi as f64, 0.0);
        for v in atlas.vertices.iter().filter(|v| v.sheet == sheet) {
            let p = v.q + shift;
            let positive = v.signs == [1, 1, 1];
            let (fill, opacity) = if positive {
                ("#2e8b57", 0.75)
            } else {
                ("#b0b0b0", 0.35)
            };
            canvas.rect(p - cell * 0.5, p + cell * 0.5, fill, opacity);
        }
        // panel connector marks
        let x_right = hi.x + shift.x + gap * 0.5;
        canvas.segment(
            Vec2::new(x_right, lo.y),
            Vec2::new(x_right, hi.y),
            "stroke:#c0392b;stroke-width:3;stroke-dasharray:2 3",
        );
    }
    canvas.finish(width)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caustic::compute_caustic;
    use crate::kernel::double_normals;

    #[test]
    fn caustic_figure_is_wellformed() {
        let c = Curve::ellipse(2.0, 1.0).unwrap();
        let p = Params::default();
        let g = compute_caustic(&c, 256, &p).unwrap();
        let d = double_normals(&c, &p).unwrap();
        let svg = caustic_figure(&c, &g, &d, 24, &p);
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert!(svg.contains("stroke:black"));
        assert!(svg.contains("#c0392b"));
        assert!(svg.matches("<circle").count() == 4, "cusp dots");
    }
}
