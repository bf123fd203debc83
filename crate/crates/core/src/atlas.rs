//! The space of orthotripods over the core of an ellipse-like caustic.
//!
//! Over every interior point of the core there are exactly four normal feet,
//! hence four orthotripods (one per 3-subset), giving a 4-sheeted covering.
//! Feet are numbered 1..4 counterclockwise at a seed point and the numbering
//! is transported over a grid by continuity. Sheets are named by the normals
//! they use: Y123, Y234, Y341, Y412.
//!
//! Crossing a fold arc of the caustic, two feet (i, j) merge and annihilate.
//! Of the four sheets, the two whose triples both contain the surviving
//! complement pair (each uses exactly one of the colliding normals) limit
//! to the same triple on the fold, so the atlas glues them there; the two
//! sheets containing both colliding normals degenerate (two of their points
//! merge) and keep a free boundary. The four fold arcs glue the four sheets
//! in a cycle, and the resulting complex is a bounded cylinder, which
//! [`AtlasComplex::certificate`] verifies combinatorially (components, Euler
//! characteristic, boundary cycles). The subcomplex of triples balanced by
//! positive charges is a cylinder as well.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::caustic::compute_caustic;
use crate::curve::Curve;
use crate::equilibrium::{balancing_charges, ChargeTriple, ForceLaw};
use crate::geom::Vec2;
use crate::kernel::normal_feet;
use crate::{Error, Params, Result};

/// One of the four sheets, identified by the normal it does not use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SheetLabel {
    missing: u8,
}

impl SheetLabel {
    pub const ALL: [SheetLabel; 4] = [
        SheetLabel { missing: 4 }, // Y123
        SheetLabel { missing: 1 }, // Y234
        SheetLabel { missing: 2 }, // Y341
        SheetLabel { missing: 3 }, // Y412
    ];

    /// The three normal numbers of the sheet, in cyclic order.
    pub fn normals(&self) -> [u8; 3] {
        let m = self.missing;
        let wrap = |k: u8| if k > 4 { k - 4 } else { k };
        [wrap(m + 1), wrap(m + 2), wrap(m + 3)]
    }

    pub fn contains(&self, k: u8) -> bool {
        k != self.missing
    }

    pub fn name(&self) -> String {
        let n = self.normals();
        format!("Y{}{}{}", n[0], n[1], n[2])
    }
}

impl std::fmt::Display for SheetLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.name())
    }
}

/// Certificate of the full glued complex; see [`AtlasComplex::certificate`]
/// and its `certificate_positive` / `certificate_single_sheet` variants.
pub fn topology_certificate(atlas: &AtlasComplex) -> TopologyCertificate {
    atlas.certificate()
}

/// Sheets glued along a fold arc where normals (i, j) collide: the two
/// sheets using exactly one of i, j (their limit triples coincide).
pub fn glued_sheets(pair: (u8, u8)) -> (SheetLabel, SheetLabel) {
    let mut found = Vec::with_capacity(2);
    for s in SheetLabel::ALL {
        let c = s.contains(pair.0) as u8 + s.contains(pair.1) as u8;
        if c == 1 {
            found.push(s);
        }
    }
    (found[0], found[1])
}

/// A vertex of the atlas: one orthotripod over one grid point.
#[derive(Debug, Clone)]
pub struct AtlasVertex {
    pub grid: (usize, usize),
    pub q: Vec2,
    pub sheet: SheetLabel,
    /// Feet parameters in the sheet's normal order.
    pub tripod: [f64; 3],
    pub charges: ChargeTriple,
    /// Charge signs aligned with `tripod`.
    pub signs: [i8; 3],
}

/// Certificate of the glued complex topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TopologyCertificate {
    pub components: usize,
    pub euler_characteristic: i64,
    pub boundary_cycles: usize,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
}

impl std::fmt::Display for TopologyCertificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "components={} chi={} boundary={}",
            self.components, self.euler_characteristic, self.boundary_cycles
        )
    }
}

type Vid = (usize, usize);
/// Undirected grid edge, endpoints in lexicographic order.
type Eid = (Vid, Vid);

fn edge_id(a: Vid, b: Vid) -> Eid {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone)]
struct GridVertex {
    q: Vec2,
    /// feet[k] = parameter of the normal labeled k+1.
    feet: [f64; 4],
}

/// A fold arc of the core boundary.
#[derive(Debug, Clone)]
pub struct FoldArc {
    /// Colliding normal labels on this arc.
    pub pair: (u8, u8),
    pub glued: (SheetLabel, SheetLabel),
    vertices: Vec<Vid>,
    edges: Vec<Eid>,
}

/// The four-sheeted orthotripod complex over a grid on the core.
#[derive(Debug)]
pub struct AtlasComplex {
    pub resolution: usize,
    grid_vertices: BTreeMap<Vid, GridVertex>,
    cells: BTreeSet<Vid>,
    pub arcs: Vec<FoldArc>,
    /// Flattened per-sheet vertex data, sorted by (grid, sheet).
    pub vertices: Vec<AtlasVertex>,
    vertex_index: BTreeMap<(Vid, SheetLabel), usize>,
}

struct GridGeometry {
    origin: Vec2,
    step: Vec2,
}

impl GridGeometry {
    fn point(&self, v: Vid) -> Vec2 {
        Vec2::new(
            self.origin.x + self.step.x * v.0 as f64,
            self.origin.y + self.step.y * v.1 as f64,
        )
    }
}

fn circ(a: f64, b: f64, span: f64) -> f64 {
    let d = (a - b).rem_euclid(span);
    d.min(span - d)
}

/// Cyclic-shift matching of two sorted foot lists. Returns the shift mapping
/// `new[(i+k) % 4]` to `old[i]`, chosen by the best single-anchor move, or
/// `None` when the decision is ambiguous.
fn match_shift(old: &[f64; 4], new: &[f64; 4], span: f64) -> Option<usize> {
    let mut anchor = [0.0f64; 4];
    for (k, a) in anchor.iter_mut().enumerate() {
        *a = (0..4)
            .map(|i| circ(new[(i + k) % 4], old[i], span))
            .fold(f64::INFINITY, f64::min);
    }
    let mut best = 0;
    for k in 1..4 {
        if anchor[k] < anchor[best] {
            best = k;
        }
    }
    let second = (0..4)
        .filter(|&k| k != best)
        .map(|k| anchor[k])
        .fold(f64::INFINITY, f64::min);
    if anchor[best] < 0.25 * second {
        Some(best)
    } else {
        None
    }
}

fn feet_of(curve: &Curve, q: Vec2, params: &Params) -> Option<[f64; 4]> {
    let feet = normal_feet(curve, q, params).ok()?;
    if feet.len() != 4 {
        return None;
    }
    let mut out = [0.0; 4];
    for (o, f) in out.iter_mut().zip(feet.iter()) {
        *o = f.t;
    }
    Some(out)
}

/// Transport labels from `(q0, feet0-with-labels)` to `q1`, subdividing the
/// segment when a single step is ambiguous. Returns the labels of the sorted
/// feet at `q1`.
fn continue_labels(
    curve: &Curve,
    q0: Vec2,
    feet0: &[f64; 4],
    labels0: &[u8; 4],
    q1: Vec2,
    params: &Params,
) -> Option<[u8; 4]> {
    let span = curve.span();
    'ladder: for substeps in [1usize, 4, 16, 64, 256] {
        let mut feet = *feet0;
        let mut labels = *labels0;
        for s in 1..=substeps {
            let q = q0 + (q1 - q0) * (s as f64 / substeps as f64);
            let new_feet = feet_of(curve, q, params)?;
            match match_shift(&feet, &new_feet, span) {
                Some(k) => {
                    let mut new_labels = [0u8; 4];
                    for i in 0..4 {
                        new_labels[(i + k) % 4] = labels[i];
                    }
                    feet = new_feet;
                    labels = new_labels;
                }
                None => continue 'ladder,
            }
        }
        return Some(labels);
    }
    None
}

/// Build the atlas over an `resolution x resolution` grid spanning the
/// caustic bounding box.
///
/// Requires a closed convex curve whose caustic has exactly 4 cusps and no
/// self-intersections (the ellipse class).
pub fn build_atlas(curve: &Curve, resolution: usize, params: &Params) -> Result<AtlasComplex> {
    build_atlas_with_law(curve, resolution, ForceLaw::Coulomb, params)
}

pub fn build_atlas_with_law(
    curve: &Curve,
    resolution: usize,
    law: ForceLaw,
    params: &Params,
) -> Result<AtlasComplex> {
    let resolution = resolution.max(32);
    let caustic = compute_caustic(curve, 2048, params)?;
    if caustic.degenerate.is_some() {
        return Err(Error::NotFourCusp {
            reason: "the caustic degenerates to a point (circle)".into(),
        });
    }
    if caustic.cusps.len() != 4 {
        return Err(Error::NotFourCusp {
            reason: format!("caustic has {} cusps, need 4", caustic.cusps.len()),
        });
    }
    if polyline_self_intersects(&caustic.polyline) {
        return Err(Error::NotFourCusp {
            reason: "caustic self-intersects".into(),
        });
    }

    let (lo, hi) = caustic.bbox();
    let margin = (hi - lo) * 0.02;
    let origin = lo - margin;
    let extent = hi + margin - origin;
    let n = resolution;
    let geom = GridGeometry {
        origin,
        step: Vec2::new(extent.x / (n - 1) as f64, extent.y / (n - 1) as f64),
    };
    let clip = 0.05 * geom.step.x.min(geom.step.y);

    // interior grid vertices with exactly four well-separated feet
    let mut interior: BTreeMap<Vid, [f64; 4]> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let q = geom.point((i, j));
            if caustic.distance(q) < clip {
                continue;
            }
            match caustic.winding_index(q) {
                Ok(w) if w != 0 => {}
                _ => continue,
            }
            if let Some(feet) = feet_of(curve, q, params) {
                interior.insert((i, j), feet);
            }
        }
    }

    // cells with all 4 corners interior, restricted to the largest
    // edge-connected component, with pinch vertices cleaned up
    let mut cells: BTreeSet<Vid> = BTreeSet::new();
    for &(i, j) in interior.keys() {
        if i + 1 < n
            && j + 1 < n
            && interior.contains_key(&(i + 1, j))
            && interior.contains_key(&(i, j + 1))
            && interior.contains_key(&(i + 1, j + 1))
        {
            cells.insert((i, j));
        }
    }
    loop {
        cells = largest_cell_component(&cells);
        let removed = remove_pinch_cells(&mut cells);
        if !removed {
            break;
        }
    }
    if cells.is_empty() {
        return Err(Error::NotFourCusp {
            reason: "no grid cells inside the core at this resolution".into(),
        });
    }

    // keep only vertices used by cells
    let mut used: BTreeSet<Vid> = BTreeSet::new();
    for &(i, j) in &cells {
        used.extend([(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)]);
    }
    interior.retain(|v, _| used.contains(v));

    // label transport over the vertex graph from a seed near the centroid
    let centroid =
        interior.keys().fold(Vec2::ZERO, |s, &v| s + geom.point(v)) / interior.len() as f64;
    let seed = *interior
        .keys()
        .min_by(|&&a, &&b| {
            let da = geom.point(a).distance(centroid);
            let db = geom.point(b).distance(centroid);
            da.partial_cmp(&db).unwrap()
        })
        .expect("non-empty interior");

    let mut grid_vertices: BTreeMap<Vid, GridVertex> = BTreeMap::new();
    {
        // seed numbering: counterclockwise = ascending parameter
        let feet_sorted = interior[&seed];
        grid_vertices.insert(
            seed,
            GridVertex {
                q: geom.point(seed),
                feet: feet_sorted,
            },
        );
        let mut queue: VecDeque<Vid> = VecDeque::from([seed]);
        let mut labels: BTreeMap<Vid, [u8; 4]> = BTreeMap::new();
        labels.insert(seed, [1, 2, 3, 4]);
        while let Some(v) = queue.pop_front() {
            let v_feet = interior[&v];
            let v_labels = labels[&v];
            let vq = geom.point(v);
            for nb in neighbors(v, n) {
                if !interior.contains_key(&nb) || labels.contains_key(&nb) {
                    continue;
                }
                let nq = geom.point(nb);
                if let Some(nb_labels) = continue_labels(curve, vq, &v_feet, &v_labels, nq, params)
                {
                    labels.insert(nb, nb_labels);
                    let nb_feet = interior[&nb];
                    let mut by_label = [0.0f64; 4];
                    for (idx, &lab) in nb_labels.iter().enumerate() {
                        by_label[(lab - 1) as usize] = nb_feet[idx];
                    }
                    grid_vertices.insert(
                        nb,
                        GridVertex {
                            q: nq,
                            feet: by_label,
                        },
                    );
                    queue.push_back(nb);
                }
            }
        }
        // seed stored sorted-by-t; rewrite in label order (identity here)
        if let Some(g) = grid_vertices.get_mut(&seed) {
            g.feet = feet_sorted;
        }
        if let Some((&v, _)) = interior.iter().find(|(v, _)| !labels.contains_key(v)) {
            let q = geom.point(v);
            return Err(Error::NumberingBreakdown { x: q.x, y: q.y });
        }
    }

    // boundary cycle of the polyomino and its partition into four fold arcs
    let boundary = boundary_cycle(&cells)?;
    let arcs = partition_arcs(&boundary, &grid_vertices, curve.span(), &geom)?;

    // per-sheet vertex data
    let mut vertices = Vec::new();
    let mut vertex_index = BTreeMap::new();
    for (&vid, gv) in &grid_vertices {
        for sheet in SheetLabel::ALL {
            let normals = sheet.normals();
            let mut tripod = [0.0f64; 3];
            let mut pts = Vec::with_capacity(3);
            for (slot, &k) in normals.iter().enumerate() {
                let t = gv.feet[(k - 1) as usize];
                tripod[slot] = t;
                pts.push(curve.eval(t)?);
            }
            let pts: [crate::curve::CurvePoint; 3] = [pts[0], pts[1], pts[2]];
            let charges = balancing_charges(&pts, law, params)?;
            let signs = charges.sign_pattern(params.charge_zero_eps);
            vertex_index.insert((vid, sheet), vertices.len());
            vertices.push(AtlasVertex {
                grid: vid,
                q: gv.q,
                sheet,
                tripod,
                charges,
                signs,
            });
        }
    }

    Ok(AtlasComplex {
        resolution,
        grid_vertices,
        cells,
        arcs,
        vertices,
        vertex_index,
    })
}

fn neighbors(v: Vid, n: usize) -> Vec<Vid> {
    let mut out = Vec::with_capacity(4);
    if v.0 > 0 {
        out.push((v.0 - 1, v.1));
    }
    if v.1 > 0 {
        out.push((v.0, v.1 - 1));
    }
    if v.0 + 1 < n {
        out.push((v.0 + 1, v.1));
    }
    if v.1 + 1 < n {
        out.push((v.0, v.1 + 1));
    }
    out
}

fn largest_cell_component(cells: &BTreeSet<Vid>) -> BTreeSet<Vid> {
    let mut seen: BTreeSet<Vid> = BTreeSet::new();
    let mut best: BTreeSet<Vid> = BTreeSet::new();
    for &start in cells {
        if seen.contains(&start) {
            continue;
        }
        let mut comp = BTreeSet::new();
        let mut queue = VecDeque::from([start]);
        seen.insert(start);
        while let Some(c) = queue.pop_front() {
            comp.insert(c);
            let mut nbs = vec![(c.0 + 1, c.1), (c.0, c.1 + 1)];
            if c.0 > 0 {
                nbs.push((c.0 - 1, c.1));
            }
            if c.1 > 0 {
                nbs.push((c.0, c.1 - 1));
            }
            for nb in nbs {
                if cells.contains(&nb) && !seen.contains(&nb) {
                    seen.insert(nb);
                    queue.push_back(nb);
                }
            }
        }
        if comp.len() > best.len() {
            best = comp;
        }
    }
    best
}

/// Remove cells that meet other cells only at a corner, so that the
/// polyomino boundary is a simple cycle. Returns whether anything changed.
fn remove_pinch_cells(cells: &mut BTreeSet<Vid>) -> bool {
    // a vertex is a pinch when exactly one diagonal pair of its four
    // surrounding cells is present
    let mut verts: BTreeSet<Vid> = BTreeSet::new();
    for &(a, b) in cells.iter() {
        verts.extend([(a + 1, b + 1), (a + 1, b), (a, b + 1), (a, b)]);
    }
    let mut to_remove: BTreeSet<Vid> = BTreeSet::new();
    for &(i, j) in &verts {
        if i == 0 || j == 0 {
            continue;
        }
        let c00 = cells.contains(&(i - 1, j - 1));
        let c10 = cells.contains(&(i, j - 1));
        let c01 = cells.contains(&(i - 1, j));
        let c11 = cells.contains(&(i, j));
        if c00 && c11 && !c10 && !c01 {
            to_remove.insert((i, j));
        } else if c10 && c01 && !c00 && !c11 {
            to_remove.insert((i, j - 1));
        }
    }
    let changed = !to_remove.is_empty();
    for c in to_remove {
        cells.remove(&c);
    }
    changed
}

fn polyline_self_intersects(poly: &[Vec2]) -> bool {
    // decimated O(m^2) segment test with neighbor exclusion
    let stride = (poly.len() / 512).max(1);
    let pts: Vec<Vec2> = poly.iter().step_by(stride).copied().collect();
    let m = pts.len();
    let seg = |i: usize| (pts[i], pts[(i + 1) % m]);
    for i in 0..m {
        for j in (i + 2)..m {
            if i == 0 && j == m - 1 {
                continue;
            }
            let (a, b) = seg(i);
            let (c, d) = seg(j);
            let d1 = (b - a).cross(c - a);
            let d2 = (b - a).cross(d - a);
            let d3 = (d - c).cross(a - c);
            let d4 = (d - c).cross(b - c);
            if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
                return true;
            }
        }
    }
    false
}

/// Directed boundary walk of the polyomino; requires a single cycle.
fn boundary_cycle(cells: &BTreeSet<Vid>) -> Result<Vec<Vid>> {
    // boundary edges: cell edges with exactly one incident cell
    let mut count: BTreeMap<Eid, usize> = BTreeMap::new();
    for &(a, b) in cells {
        let corners = [(a, b), (a + 1, b), (a + 1, b + 1), (a, b + 1)];
        for k in 0..4 {
            *count
                .entry(edge_id(corners[k], corners[(k + 1) % 4]))
                .or_insert(0) += 1;
        }
    }
    let boundary: BTreeSet<Eid> = count
        .iter()
        .filter(|(_, &c)| c == 1)
        .map(|(&e, _)| e)
        .collect();
    let mut adj: BTreeMap<Vid, Vec<Vid>> = BTreeMap::new();
    for &(u, v) in &boundary {
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    for (v, nbs) in &adj {
        if nbs.len() != 2 {
            return Err(Error::NotFourCusp {
                reason: format!("boundary vertex {v:?} has degree {}", nbs.len()),
            });
        }
    }
    let start = *adj.keys().next().expect("non-empty boundary");
    let mut cycle = vec![start];
    let mut prev = start;
    let mut cur = adj[&start][0];
    while cur != start {
        cycle.push(cur);
        let nbs = &adj[&cur];
        let next = if nbs[0] == prev { nbs[1] } else { nbs[0] };
        prev = cur;
        cur = next;
    }
    if cycle.len() != boundary.len() {
        return Err(Error::NotFourCusp {
            reason: "polyomino boundary is not a single cycle".into(),
        });
    }
    Ok(cycle)
}

/// Assign each boundary vertex the colliding pair of its two closest feet
/// and split the cycle into four contiguous fold arcs.
fn partition_arcs(
    cycle: &[Vid],
    grid_vertices: &BTreeMap<Vid, GridVertex>,
    span: f64,
    geom: &GridGeometry,
) -> Result<Vec<FoldArc>> {
    let pair_of = |v: Vid| -> (u8, u8) {
        let feet = grid_vertices[&v].feet; // label order
                                           // order labels by parameter, find the cyclically adjacent pair with
                                           // the smallest gap
        let mut order: Vec<u8> = vec![1, 2, 3, 4];
        order.sort_by(|&a, &b| {
            feet[(a - 1) as usize]
                .partial_cmp(&feet[(b - 1) as usize])
                .unwrap()
        });
        let mut best = (order[0], order[1]);
        let mut best_gap = f64::INFINITY;
        for i in 0..4 {
            let la = order[i];
            let lb = order[(i + 1) % 4];
            let gap = circ(feet[(la - 1) as usize], feet[(lb - 1) as usize], span);
            if gap < best_gap {
                best_gap = gap;
                best = (la.min(lb), la.max(lb));
            }
        }
        best
    };

    let m = cycle.len();
    let mut labels: Vec<(u8, u8)> = cycle.iter().map(|&v| pair_of(v)).collect();
    // smooth isolated mislabels
    for _ in 0..3 {
        let snapshot = labels.clone();
        for i in 0..m {
            let prev = snapshot[(i + m - 1) % m];
            let next = snapshot[(i + 1) % m];
            if prev == next && snapshot[i] != prev {
                labels[i] = prev;
            }
        }
    }
    // contiguous runs
    let mut runs: Vec<((u8, u8), Vec<usize>)> = Vec::new();
    for (i, &lab) in labels.iter().enumerate() {
        match runs.last_mut() {
            Some((l, idxs)) if *l == lab => idxs.push(i),
            _ => runs.push((lab, vec![i])),
        }
    }
    // merge wrap-around run
    if runs.len() > 1 && runs[0].0 == runs.last().unwrap().0 {
        let (_, last_idxs) = runs.pop().unwrap();
        runs[0].1.splice(0..0, last_idxs);
    }
    if runs.len() != 4 {
        let q = geom.point(cycle[runs.get(4).map_or(0, |r| r.1[0])]);
        return Err(Error::NumberingBreakdown { x: q.x, y: q.y });
    }
    let adjacent = |p: (u8, u8)| matches!(p, (1, 2) | (2, 3) | (3, 4) | (1, 4));
    let distinct: BTreeSet<(u8, u8)> = runs.iter().map(|(l, _)| *l).collect();
    if distinct.len() != 4 || !runs.iter().all(|(l, _)| adjacent(*l)) {
        let q = geom.point(cycle[0]);
        return Err(Error::NumberingBreakdown { x: q.x, y: q.y });
    }

    let mut arcs = Vec::with_capacity(4);
    for (ri, (pair, idxs)) in runs.iter().enumerate() {
        // the arc owns its run vertices plus the first vertex of the next
        // run (the shared cusp corner), so consecutive arcs overlap in one
        // vertex
        let next_first = runs[(ri + 1) % 4].1[0];
        let mut verts: Vec<Vid> = idxs.iter().map(|&i| cycle[i]).collect();
        verts.push(cycle[next_first]);
        let edges: Vec<Eid> = verts.windows(2).map(|w| edge_id(w[0], w[1])).collect();
        arcs.push(FoldArc {
            pair: *pair,
            glued: glued_sheets(*pair),
            vertices: verts,
            edges,
        });
    }
    Ok(arcs)
}

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl AtlasComplex {
    pub fn grid_vertex_count(&self) -> usize {
        self.grid_vertices.len()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn vertex(&self, grid: Vid, sheet: SheetLabel) -> Option<&AtlasVertex> {
        self.vertex_index
            .get(&(grid, sheet))
            .map(|&i| &self.vertices[i])
    }

    fn cell_corners(cell: Vid) -> [Vid; 4] {
        let (a, b) = cell;
        [(a, b), (a + 1, b), (a + 1, b + 1), (a, b + 1)]
    }

    /// All-positive sign pattern on every corner of the cell for this sheet.
    fn cell_positive(&self, cell: Vid, sheet: SheetLabel) -> bool {
        Self::cell_corners(cell).iter().all(|&v| {
            self.vertex(v, sheet)
                .map(|av| av.signs == [1, 1, 1])
                .unwrap_or(false)
        })
    }

    /// Certificate of the full glued complex.
    pub fn certificate(&self) -> TopologyCertificate {
        self.certificate_faces(|_, _| true, true)
    }

    /// Certificate of the subcomplex of triples balanced by positive charges.
    pub fn certificate_positive(&self) -> TopologyCertificate {
        self.certificate_faces(|cell, sheet| self.cell_positive(cell, sheet), true)
    }

    /// Certificate of one ungluded sheet (a disc, for machinery validation).
    pub fn certificate_single_sheet(&self) -> TopologyCertificate {
        let first = SheetLabel::ALL[0];
        self.certificate_faces(|_, sheet| sheet == first, false)
    }

    fn certificate_faces(
        &self,
        keep: impl Fn(Vid, SheetLabel) -> bool,
        glue: bool,
    ) -> TopologyCertificate {
        // orbit structure over (sheet, vertex) and (sheet, edge)
        let mut vert_ids: BTreeMap<(SheetLabel, Vid), usize> = BTreeMap::new();
        let mut edge_ids: BTreeMap<(SheetLabel, Eid), usize> = BTreeMap::new();
        let mut faces: Vec<(SheetLabel, Vid)> = Vec::new();
        for sheet in SheetLabel::ALL {
            for &cell in &self.cells {
                if !keep(cell, sheet) {
                    continue;
                }
                faces.push((sheet, cell));
                let corners = Self::cell_corners(cell);
                for k in 0..4 {
                    let v = corners[k];
                    let e = edge_id(corners[k], corners[(k + 1) % 4]);
                    let nv = vert_ids.len();
                    vert_ids.entry((sheet, v)).or_insert(nv);
                    let ne = edge_ids.len();
                    edge_ids.entry((sheet, e)).or_insert(ne);
                }
            }
        }
        let mut vuf = UnionFind::new(vert_ids.len());
        let mut euf = UnionFind::new(edge_ids.len());
        if glue {
            // Identify an arc edge only when both sheets carry a kept face
            // along it, and vertices only as endpoints of identified edges.
            // Restricting to a subcomplex (an open set like the positive
            // region) must not leave behind isolated point identifications.
            for arc in &self.arcs {
                let (s1, s2) = arc.glued;
                for &e in &arc.edges {
                    if let (Some(&a), Some(&b)) = (edge_ids.get(&(s1, e)), edge_ids.get(&(s2, e))) {
                        euf.union(a, b);
                        for v in [e.0, e.1] {
                            if let (Some(&x), Some(&y)) =
                                (vert_ids.get(&(s1, v)), vert_ids.get(&(s2, v)))
                            {
                                vuf.union(x, y);
                            }
                        }
                    }
                }
            }
        }
        // orbit counts
        let vert_orbit: BTreeMap<(SheetLabel, Vid), usize> =
            vert_ids.iter().map(|(&k, &i)| (k, vuf.find(i))).collect();
        let edge_orbit: BTreeMap<(SheetLabel, Eid), usize> =
            edge_ids.iter().map(|(&k, &i)| (k, euf.find(i))).collect();
        let vcount = vert_orbit.values().collect::<BTreeSet<_>>().len();
        let ecount = edge_orbit.values().collect::<BTreeSet<_>>().len();
        let fcount = faces.len();

        // connectivity over vertex orbits through face edges
        let mut cuf = UnionFind::new(vert_ids.len());
        let mut edge_faces: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (fi, &(sheet, cell)) in faces.iter().enumerate() {
            let corners = Self::cell_corners(cell);
            for k in 0..4 {
                let a = vert_orbit[&(sheet, corners[k])];
                let b = vert_orbit[&(sheet, corners[(k + 1) % 4])];
                cuf.union(a, b);
                let e = edge_orbit[&(sheet, edge_id(corners[k], corners[(k + 1) % 4]))];
                edge_faces.entry(e).or_default().push(fi);
            }
        }
        let mut comp_roots = BTreeSet::new();
        for &o in vert_orbit.values() {
            comp_roots.insert(cuf.find(o));
        }
        // deduplicate: several (sheet, v) map to one orbit; roots set already
        // canonical
        let components = comp_roots.len();

        // boundary cycles: fan-pair boundary edges at each vertex orbit
        let boundary_edges: BTreeSet<usize> = edge_faces
            .iter()
            .filter(|(_, fs)| fs.len() == 1)
            .map(|(&e, _)| e)
            .collect();
        let mut buf_ids: BTreeMap<usize, usize> = BTreeMap::new();
        for &e in &boundary_edges {
            let id = buf_ids.len();
            buf_ids.insert(e, id);
        }
        let mut buf = UnionFind::new(buf_ids.len());
        // group local corner data per vertex orbit
        #[derive(Default)]
        struct Corner {
            // (face index, [edge orbit, edge orbit])
            faces: Vec<(usize, [usize; 2])>,
        }
        let mut corners_at: BTreeMap<usize, Corner> = BTreeMap::new();
        for (fi, &(sheet, cell)) in faces.iter().enumerate() {
            let cs = Self::cell_corners(cell);
            for k in 0..4 {
                let v = vert_orbit[&(sheet, cs[k])];
                let e_prev = edge_orbit[&(sheet, edge_id(cs[(k + 3) % 4], cs[k]))];
                let e_next = edge_orbit[&(sheet, edge_id(cs[k], cs[(k + 1) % 4]))];
                corners_at
                    .entry(v)
                    .or_default()
                    .faces
                    .push((fi, [e_prev, e_next]));
            }
        }
        for corner in corners_at.values() {
            // fan components among the faces at this vertex: faces sharing an
            // interior edge are fan-adjacent
            let fl = &corner.faces;
            let mut fan = UnionFind::new(fl.len());
            for i in 0..fl.len() {
                for j in (i + 1)..fl.len() {
                    let shares = fl[i].1.iter().any(|e| fl[j].1.contains(e));
                    if shares {
                        // only a 2-face edge merges fans
                        let common: Vec<usize> = fl[i]
                            .1
                            .iter()
                            .filter(|e| fl[j].1.contains(e))
                            .copied()
                            .collect();
                        if common
                            .iter()
                            .any(|e| edge_faces.get(e).map_or(0, |v| v.len()) == 2)
                        {
                            fan.union(i, j);
                        }
                    }
                }
            }
            // per fan, collect boundary edges and chain them together
            let mut fan_edges: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
            for (i, (_, es)) in fl.iter().enumerate() {
                let root = fan.find(i);
                for &e in es {
                    if boundary_edges.contains(&e) {
                        fan_edges.entry(root).or_default().insert(e);
                    }
                }
            }
            for es in fan_edges.values() {
                let ids: Vec<usize> = es.iter().map(|e| buf_ids[e]).collect();
                for w in ids.windows(2) {
                    buf.union(w[0], w[1]);
                }
            }
        }
        let mut cycle_roots = BTreeSet::new();
        for &id in buf_ids.values() {
            cycle_roots.insert(buf.find(id));
        }

        TopologyCertificate {
            components,
            euler_characteristic: vcount as i64 - ecount as i64 + fcount as i64,
            boundary_cycles: cycle_roots.len(),
            vertices: vcount,
            edges: ecount,
            faces: fcount,
        }
    }

    /// All edges of the complex as pairs of indices into `vertices`:
    /// same-sheet grid adjacency plus the cross-sheet identifications along
    /// the fold arcs.
    pub fn edge_list(&self) -> Vec<(usize, usize, &'static str)> {
        let mut out = Vec::new();
        let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
        for sheet in SheetLabel::ALL {
            for &cell in &self.cells {
                let cs = Self::cell_corners(cell);
                for k in 0..4 {
                    let e = edge_id(cs[k], cs[(k + 1) % 4]);
                    if let (Some(&a), Some(&b)) = (
                        self.vertex_index.get(&(e.0, sheet)),
                        self.vertex_index.get(&(e.1, sheet)),
                    ) {
                        let key = (a.min(b), a.max(b));
                        if seen.insert(key) {
                            out.push((key.0, key.1, "sheet"));
                        }
                    }
                }
            }
        }
        for arc in &self.arcs {
            let (s1, s2) = arc.glued;
            for &v in &arc.vertices {
                if let (Some(&a), Some(&b)) = (
                    self.vertex_index.get(&(v, s1)),
                    self.vertex_index.get(&(v, s2)),
                ) {
                    let key = (a.min(b), a.max(b));
                    if seen.insert(key) {
                        out.push((key.0, key.1, "glue"));
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Vertices whose normalized charges match `target` (also normalized)
    /// within `tol` in all three coordinates.
    pub fn filter_by_charge_ratio(&self, target: [f64; 3], tol: f64) -> Vec<&AtlasVertex> {
        let t = ChargeTriple::normalized(target).q;
        self.vertices
            .iter()
            .filter(|v| {
                v.charges
                    .q
                    .iter()
                    .zip(t.iter())
                    .all(|(a, b)| (a - b).abs() < tol)
            })
            .collect()
    }
}
