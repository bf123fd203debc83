//! Equilibria of point charges constrained to smooth plane curves.
//!
//! Three charges on a curve are at rest exactly when the normals at the three
//! points pass through one common point; such a triple is an *orthotripod* and
//! the common point its *orthotricentre*. Orthotricentres live in the *core*
//! of the curve's caustic (evolute), the region from which at least four
//! normals emanate. This crate computes all the pieces of that picture:
//!
//! * [`curve`]: parametric plane curves with tangent/normal frames and
//!   curvature (circle, ellipse, parabola arc, Fourier ovals, sampled data),
//! * [`kernel`]: normal feet from a query point, winding numbers, and
//!   double normals,
//! * [`caustic`]: the evolute, its cusps, core membership, and the
//!   partition of the core induced by double normals,
//! * [`equilibrium`]: interaction matrices, the trigonometric Ceva
//!   concurrency test, balancing charges for Coulomb/Hooke/logarithmic (or
//!   custom central) force laws, and an independent force-balance oracle,
//! * [`atlas`]: the four-sheeted structure of orthotripods over the core of
//!   an ellipse-like caustic, with topology certificates (components, Euler
//!   characteristic, boundary cycles),
//! * [`svg`] and [`output`]: figure emission and pinned-format records,
//! * [`checks`]: the invariant suite behind `orthotripod check`.

pub mod atlas;
pub mod caustic;
pub mod checks;
pub mod curve;
pub mod equilibrium;
pub mod geom;
pub mod kernel;
pub mod output;
pub mod svg;

pub use atlas::{build_atlas, topology_certificate, AtlasComplex, SheetLabel, TopologyCertificate};
pub use caustic::{compute_caustic, core_membership, CausticGeometry, Membership};
pub use curve::{Curve, CurvePoint, DerivMode};
pub use equilibrium::{
    balancing_charges, ceva_residual, is_orthotripod, positive_charge_test, potential,
    tangential_residual, tripods_from_center, ChargeTriple, ForceLaw, InteractionMatrix,
    Orthotripod,
};
pub use kernel::{double_normals, normal_count, normal_feet, DoubleNormal, NormalFoot};

/// Errors shared across the crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("non-regular point at t = {t}: |X'(t)| = {speed:.3e}")]
    NonRegularPoint { t: f64, speed: f64 },

    #[error("flat point at t = {t}: |kappa| = {kappa:.3e}")]
    FlatPoint { t: f64, kappa: f64 },

    #[error("every curve normal passes through ({x}, {y}); feet are undefined")]
    DegenerateCenter { x: f64, y: f64 },

    #[error("query point lies on the caustic (double root of the foot equation near t = {t})")]
    OnCaustic { t: f64 },

    #[error("query point lies on the polyline within tolerance")]
    OnCurve,

    #[error("{count} double normals exceed the cap of {cap}; constant-width curve suspected")]
    ConstantWidthSuspected { count: usize, cap: usize },

    #[error("points {i} and {j} coincide (distance {d:.3e})")]
    CoincidentPoints { i: usize, j: usize, d: f64 },

    #[error("triple is not an orthotripod (relative Ceva residual {residual:.3e})")]
    NotOrthotripod { residual: f64 },

    #[error("interaction matrix has rank <= 1 (collinear points on a double normal)")]
    RankDeficient,

    #[error("all three normals are parallel; no finite orthotricentre")]
    ParallelNormals,

    #[error("({x}, {y}) has only {n} normal feet; at least 3 are needed for a tripod")]
    NotInCore { x: f64, y: f64, n: usize },

    #[error("atlas needs an ellipse-like caustic: {reason}")]
    NotFourCusp { reason: String },

    #[error("normal numbering continuation failed near ({x}, {y})")]
    NumberingBreakdown { x: f64, y: f64 },

    #[error("winding index {index} and normal count {n} disagree at ({x}, {y})")]
    IndexMismatch {
        x: f64,
        y: f64,
        n: usize,
        index: i32,
    },

    #[error("could not calibrate the caustic winding sign: {0}")]
    CalibrationFailed(String),

    #[error("unsupported curve for this operation: {0}")]
    UnsupportedCurve(String),

    #[error("invalid curve config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Numeric knobs shared by the solvers. Every field has a documented default;
/// the CLI exposes them as flags.
#[derive(Debug, Clone)]
pub struct Params {
    /// Geometric tolerance relative to the curve diameter (frames, regularity,
    /// on-boundary tests).
    pub eps_geom_rel: f64,
    /// Relative tolerance on the Ceva residual for the concurrency test.
    pub eps_ceva: f64,
    /// Relative tolerance on the max line-to-point distance for the
    /// least-squares orthotricentre test.
    pub eps_conc: f64,
    /// Sample count for 1-D root scans (normal feet, cusp detection).
    pub scan_samples: usize,
    /// Grid size per axis for the 2-D double-normal scan.
    pub double_scan: usize,
    /// Refined double normals beyond this cap flag a constant-width curve.
    pub double_cap: usize,
    /// Roots closer than this fraction of the parameter span are merged.
    pub root_merge_rel: f64,
    /// |q| below this (after normalization) counts as a zero charge.
    pub charge_zero_eps: f64,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            eps_geom_rel: 1e-9,
            eps_ceva: 1e-7,
            eps_conc: 1e-7,
            scan_samples: 2048,
            double_scan: 256,
            double_cap: 64,
            root_merge_rel: 1e-6,
            charge_zero_eps: 1e-6,
        }
    }
}
