//! Pinned text formats for machine-readable output.
//!
//! Floats are rendered with 12 significant digits and trailing zeros
//! trimmed, so identical inputs produce byte-identical CSV/JSON.

use crate::atlas::AtlasComplex;
use crate::caustic::CausticGeometry;
use crate::equilibrium::{sign_pattern_string, Orthotripod};
use crate::Params;

/// Format with 12 significant digits, `%g`-style: fixed notation in a sane
/// exponent window, scientific outside it, trailing zeros trimmed.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    let s = if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        format!("{:.*}", decimals, x)
    } else {
        format!("{:.*e}", 11, x)
    };
    trim_zeros(&s)
}

fn trim_zeros(s: &str) -> String {
    if let Some(epos) = s.find(['e', 'E']) {
        let (mant, exp) = s.split_at(epos);
        let mant = trim_zeros(mant);
        format!("{mant}{exp}")
    } else if s.contains('.') {
        let t = s.trim_end_matches('0');
        t.trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Header for orthotripod records.
pub const TRIPOD_CSV_HEADER: &str = "t1,t2,t3,cx,cy,q1,q2,q3,signs,ceva_residual,conc_residual";

/// One orthotripod as a CSV row (fields as in [`TRIPOD_CSV_HEADER`]).
pub fn tripod_csv_row(tri: &Orthotripod, params: &Params) -> String {
    let t = tri.params();
    let q = tri.charges.q;
    let signs = sign_pattern_string(tri.charges.sign_pattern(params.charge_zero_eps));
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        fmt_sig(t[0]),
        fmt_sig(t[1]),
        fmt_sig(t[2]),
        fmt_sig(tri.center.x),
        fmt_sig(tri.center.y),
        fmt_sig(q[0]),
        fmt_sig(q[1]),
        fmt_sig(q[2]),
        signs,
        fmt_sig(tri.ceva_relative),
        fmt_sig(tri.max_line_distance_rel),
    )
}

/// One orthotripod as a JSON object with pinned field order.
pub fn tripod_json(tri: &Orthotripod, params: &Params) -> String {
    let t = tri.params();
    let q = tri.charges.q;
    let signs = sign_pattern_string(tri.charges.sign_pattern(params.charge_zero_eps));
    format!(
        "{{\"t\":[{},{},{}],\"center\":[{},{}],\"charges\":[{},{},{}],\"signs\":\"{}\",\"ceva_residual\":{},\"conc_residual\":{}}}",
        fmt_sig(t[0]),
        fmt_sig(t[1]),
        fmt_sig(t[2]),
        fmt_sig(tri.center.x),
        fmt_sig(tri.center.y),
        fmt_sig(q[0]),
        fmt_sig(q[1]),
        fmt_sig(q[2]),
        signs,
        fmt_sig(tri.ceva_relative),
        fmt_sig(tri.max_line_distance_rel),
    )
}

/// Batch probe record: `qx,qy,n,index`.
pub const PROBE_CSV_HEADER: &str = "qx,qy,n,index";

pub fn probe_csv_row(qx: f64, qy: f64, n: usize, index: i32) -> String {
    format!("{},{},{},{}", fmt_sig(qx), fmt_sig(qy), n, index)
}

/// Caustic samples: `t,cx,cy`.
pub const CAUSTIC_CSV_HEADER: &str = "t,cx,cy";

pub fn caustic_csv(caustic: &CausticGeometry) -> String {
    let mut out = String::from(CAUSTIC_CSV_HEADER);
    out.push('\n');
    for &(t, p) in &caustic.samples {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_sig(t),
            fmt_sig(p.x),
            fmt_sig(p.y)
        ));
    }
    out
}

/// Atlas vertex table: `qx,qy,sheet_label,t1,t2,t3,sign_pattern`.
pub const ATLAS_CSV_HEADER: &str = "qx,qy,sheet_label,t1,t2,t3,sign_pattern";

pub fn atlas_vertices_csv(atlas: &AtlasComplex) -> String {
    let mut out = String::from(ATLAS_CSV_HEADER);
    out.push('\n');
    for v in &atlas.vertices {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt_sig(v.q.x),
            fmt_sig(v.q.y),
            v.sheet.name(),
            fmt_sig(v.tripod[0]),
            fmt_sig(v.tripod[1]),
            fmt_sig(v.tripod[2]),
            sign_pattern_string(v.signs),
        ));
    }
    out
}

/// Atlas edge list: `a,b,kind` with `a`, `b` row indices into the vertex
/// table and kind `sheet` (grid adjacency) or `glue` (fold identification).
pub const ATLAS_EDGES_CSV_HEADER: &str = "a,b,kind";

pub fn atlas_edges_csv(atlas: &AtlasComplex) -> String {
    let mut out = String::from(ATLAS_EDGES_CSV_HEADER);
    out.push('\n');
    for (a, b, kind) in atlas.edge_list() {
        out.push_str(&format!("{a},{b},{kind}\n"));
    }
    out
}
