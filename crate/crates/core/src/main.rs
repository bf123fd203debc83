//! Command-line front end: caustics, normal counting, double normals,
//! balancing charges, the orthotripod atlas, and the invariant check suite.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use orthotripod::atlas::build_atlas_with_law;
use orthotripod::caustic::{compute_caustic, core_membership};
use orthotripod::curve::{curve_from_cli_spec, curve_from_config, Curve};
use orthotripod::equilibrium::{
    orthotripod_from_points, sign_pattern_string, tripods_from_center, ForceLaw,
};
use orthotripod::geom::Vec2;
use orthotripod::kernel::{double_normals, normal_count, normal_feet};
use orthotripod::output::{
    atlas_edges_csv, atlas_vertices_csv, caustic_csv, fmt_sig, probe_csv_row, tripod_csv_row,
    tripod_json, PROBE_CSV_HEADER, TRIPOD_CSV_HEADER,
};
use orthotripod::{checks, svg, Params};

#[derive(Parser)]
#[command(
    name = "orthotripod",
    about = "Equilibria of three point charges on convex plane curves",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CurveArgs {
    /// Inline curve spec: circle:R | ellipse:A,B | parabola:C[,LO,HI] |
    /// fourier:C0,C1,...[/S1,S2,...]
    #[arg(long, value_name = "SPEC", conflicts_with = "config")]
    curve: Option<String>,
    /// Curve config file (key=value lines; see the README for the grammar)
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct ToleranceArgs {
    /// Geometric tolerance relative to the curve diameter
    #[arg(long, value_name = "EPS")]
    eps_geom: Option<f64>,
    /// Relative Ceva-residual tolerance for the concurrency test
    #[arg(long, value_name = "EPS")]
    eps_ceva: Option<f64>,
    /// Relative line-distance tolerance for the orthotricentre test
    #[arg(long, value_name = "EPS")]
    eps_conc: Option<f64>,
    /// Samples for 1-D root scans
    #[arg(long, value_name = "N")]
    samples: Option<usize>,
    /// Grid size per axis for the 2-D double-normal scan
    #[arg(long, value_name = "N")]
    double_scan: Option<usize>,
    /// Double normals beyond this cap flag a constant-width curve
    #[arg(long, value_name = "N")]
    double_cap: Option<usize>,
    /// Merge roots closer than this fraction of the parameter span
    #[arg(long, value_name = "REL")]
    root_merge: Option<f64>,
    /// Normalized charges below this magnitude count as zero
    #[arg(long, value_name = "EPS")]
    charge_zero_eps: Option<f64>,
}

impl ToleranceArgs {
    fn params(&self) -> Params {
        let mut p = Params::default();
        if let Some(v) = self.eps_geom {
            p.eps_geom_rel = v;
        }
        if let Some(v) = self.eps_ceva {
            p.eps_ceva = v;
        }
        if let Some(v) = self.eps_conc {
            p.eps_conc = v;
        }
        if let Some(v) = self.samples {
            p.scan_samples = v;
        }
        if let Some(v) = self.double_scan {
            p.double_scan = v;
        }
        if let Some(v) = self.double_cap {
            p.double_cap = v;
        }
        if let Some(v) = self.root_merge {
            p.root_merge_rel = v;
        }
        if let Some(v) = self.charge_zero_eps {
            p.charge_zero_eps = v;
        }
        p
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LawArg {
    Coulomb,
    Hooke,
    Logarithmic,
}

impl From<LawArg> for ForceLaw {
    fn from(l: LawArg) -> ForceLaw {
        match l {
            LawArg::Coulomb => ForceLaw::Coulomb,
            LawArg::Hooke => ForceLaw::Hooke,
            LawArg::Logarithmic => ForceLaw::Logarithmic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the caustic, locate cusps, and emit CSV/SVG
    Caustic {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        tol: ToleranceArgs,
        /// Evolute sample count
        #[arg(long, default_value_t = 2048)]
        caustic_samples: usize,
        /// Write the figure (curve, caustic, cusps, double normals, core
        /// shading) to this SVG file
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        /// Write `t,cx,cy` samples to this CSV file instead of stdout
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Normal feet, count n(Q), and winding index i(Q) at a point
    Normals {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        tol: ToleranceArgs,
        /// Query point `x,y`
        #[arg(long, value_name = "X,Y", conflicts_with = "batch")]
        at: Option<String>,
        /// Batch mode: read one `x,y` probe per line from this CSV file
        /// (a `qx,qy` header is allowed) and emit `qx,qy,n,index` rows
        #[arg(long, value_name = "PATH")]
        batch: Option<PathBuf>,
    },
    /// Double normals of the curve
    Doubles {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        tol: ToleranceArgs,
    },
    /// Orthotripods and balancing charges at a point or for a parameter triple
    Charges {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        tol: ToleranceArgs,
        /// Orthotricentre `x,y`: emits every tripod over this point
        #[arg(long, value_name = "X,Y", conflicts_with = "params")]
        at: Option<String>,
        /// Parameter triple `t1,t2,t3`
        #[arg(long, value_name = "T1,T2,T3")]
        params: Option<String>,
        #[arg(long, value_enum, default_value_t = LawArg::Coulomb)]
        law: LawArg,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Build the orthotripod atlas and print its topology certificate
    Atlas {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        tol: ToleranceArgs,
        #[arg(long, default_value_t = 64)]
        resolution: usize,
        #[arg(long, value_enum, default_value_t = LawArg::Coulomb)]
        law: LawArg,
        /// Write the vertex table to this CSV file
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
        /// Write the edge list (`a,b,kind`) to this CSV file
        #[arg(long, value_name = "PATH")]
        edges: Option<PathBuf>,
        /// Write the unrolled-cylinder figure to this SVG file
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        /// Keep only vertices whose normalized charges match `q1,q2,q3`
        #[arg(long, value_name = "Q1,Q2,Q3")]
        filter_charges: Option<String>,
        /// Tolerance for --filter-charges
        #[arg(long, default_value_t = 1e-3)]
        filter_tol: f64,
    },
    /// Run the invariant suite; exits nonzero on failure
    Check {
        #[command(flatten)]
        tol: ToleranceArgs,
        /// Seed for randomized probes
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Skip the slow atlas resolution-stability check
        #[arg(long)]
        fast: bool,
    },
}

fn load_curve(args: &CurveArgs) -> Result<Curve, String> {
    match (&args.curve, &args.config) {
        (Some(spec), None) => curve_from_cli_spec(spec).map_err(|e| e.to_string()),
        (None, Some(path)) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            curve_from_config(&text).map_err(|e| e.to_string())
        }
        _ => Err("exactly one of --curve or --config is required".into()),
    }
}

fn parse_point(s: &str) -> Result<Vec2, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected `x,y`, got `{s}`"));
    }
    let x = parts[0].trim().parse::<f64>().map_err(|e| e.to_string())?;
    let y = parts[1].trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok(Vec2::new(x, y))
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three numbers, got `{s}`"));
    }
    let mut out = [0.0; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.trim().parse::<f64>().map_err(|e| e.to_string())?;
    }
    Ok(out)
}

fn write_or_print(path: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run() -> Result<(), (u8, String)> {
    let cli = Cli::parse();
    let config_err = |m: String| (2u8, m);
    match cli.command {
        Command::Caustic {
            curve,
            tol,
            caustic_samples,
            svg: svg_path,
            csv,
        } => {
            let c = load_curve(&curve).map_err(config_err)?;
            let p = tol.params();
            let g = compute_caustic(&c, caustic_samples, &p).map_err(|e| (2, e.to_string()))?;
            if let Some(center) = g.degenerate {
                println!(
                    "degenerate caustic: all curvature centres at ({}, {})",
                    fmt_sig(center.x),
                    fmt_sig(center.y)
                );
            } else {
                for (t, pt) in &g.cusps {
                    println!(
                        "cusp t={} at ({}, {})",
                        fmt_sig(*t),
                        fmt_sig(pt.x),
                        fmt_sig(pt.y)
                    );
                }
            }
            write_or_print(&csv, &caustic_csv(&g)).map_err(config_err)?;
            if let Some(path) = svg_path {
                let doubles = double_normals(&c, &p).unwrap_or_default();
                let fig = svg::caustic_figure(&c, &g, &doubles, 96, &p);
                std::fs::write(&path, fig).map_err(|e| (2, format!("{}: {e}", path.display())))?;
            }
            Ok(())
        }
        Command::Normals {
            curve,
            tol,
            at,
            batch,
        } => {
            let c = load_curve(&curve).map_err(config_err)?;
            let p = tol.params();
            match (at, batch) {
                (Some(at), None) => {
                    let q = parse_point(&at).map_err(config_err)?;
                    let feet = normal_feet(&c, q, &p).map_err(|e| (2, e.to_string()))?;
                    for f in &feet {
                        println!(
                            "foot t={} at ({}, {}) distance {}",
                            fmt_sig(f.t),
                            fmt_sig(f.foot.p.x),
                            fmt_sig(f.foot.p.y),
                            fmt_sig(f.distance)
                        );
                    }
                    let n = normal_count(&c, q, &p).map_err(|e| (2, e.to_string()))?;
                    let index = if c.is_closed() && c.is_convex() {
                        let g = compute_caustic(&c, 2048, &p).map_err(|e| (2, e.to_string()))?;
                        let i = g.winding_index(q).map_err(|e| (2, e.to_string()))?;
                        let membership =
                            core_membership(&c, &g, q, &p).map_err(|e| (2, e.to_string()))?;
                        println!("membership: {membership}");
                        i
                    } else {
                        0
                    };
                    println!("{PROBE_CSV_HEADER}");
                    println!("{}", probe_csv_row(q.x, q.y, n, index));
                }
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| (2, format!("{}: {e}", path.display())))?;
                    let g = compute_caustic(&c, 2048, &p).map_err(|e| (2, e.to_string()))?;
                    println!("{PROBE_CSV_HEADER}");
                    for line in text.lines() {
                        let line = line.trim();
                        if line.is_empty() || line.starts_with("qx") || line.starts_with('#') {
                            continue;
                        }
                        let q = parse_point(line).map_err(config_err)?;
                        let n = normal_count(&c, q, &p).map_err(|e| (2, e.to_string()))?;
                        let i = g.winding_index(q).map_err(|e| (2, e.to_string()))?;
                        println!("{}", probe_csv_row(q.x, q.y, n, i));
                    }
                }
                _ => return Err((2, "exactly one of --at or --batch is required".into())),
            }
            Ok(())
        }
        Command::Doubles { curve, tol } => {
            let c = load_curve(&curve).map_err(config_err)?;
            let p = tol.params();
            let dn = double_normals(&c, &p).map_err(|e| (2, e.to_string()))?;
            println!("s,t,ax,ay,bx,by");
            for d in &dn {
                println!(
                    "{},{},{},{},{},{}",
                    fmt_sig(d.s),
                    fmt_sig(d.t),
                    fmt_sig(d.chord.0.x),
                    fmt_sig(d.chord.0.y),
                    fmt_sig(d.chord.1.x),
                    fmt_sig(d.chord.1.y)
                );
            }
            Ok(())
        }
        Command::Charges {
            curve,
            tol,
            at,
            params: triple,
            law,
            format,
        } => {
            let c = load_curve(&curve).map_err(config_err)?;
            let p = tol.params();
            let law: ForceLaw = law.into();
            let tripods = match (at, triple) {
                (Some(at), None) => {
                    let q = parse_point(&at).map_err(config_err)?;
                    tripods_from_center(&c, q, law, &p).map_err(|e| (2, e.to_string()))?
                }
                (None, Some(ts)) => {
                    let ts = parse_triple(&ts).map_err(config_err)?;
                    let pts = [
                        c.eval(ts[0]).map_err(|e| (2, e.to_string()))?,
                        c.eval(ts[1]).map_err(|e| (2, e.to_string()))?,
                        c.eval(ts[2]).map_err(|e| (2, e.to_string()))?,
                    ];
                    vec![orthotripod_from_points(pts, law, &p).map_err(|e| (2, e.to_string()))?]
                }
                _ => return Err((2, "exactly one of --at or --params is required".into())),
            };
            match format {
                Format::Csv => {
                    println!("{TRIPOD_CSV_HEADER}");
                    for tri in &tripods {
                        println!("{}", tripod_csv_row(tri, &p));
                    }
                }
                Format::Json => {
                    let rows: Vec<String> = tripods.iter().map(|t| tripod_json(t, &p)).collect();
                    println!("[{}]", rows.join(","));
                }
            }
            Ok(())
        }
        Command::Atlas {
            curve,
            tol,
            resolution,
            law,
            csv,
            edges,
            svg: svg_path,
            filter_charges,
            filter_tol,
        } => {
            let c = load_curve(&curve).map_err(config_err)?;
            let p = tol.params();
            let atlas = build_atlas_with_law(&c, resolution, law.into(), &p)
                .map_err(|e| (2, e.to_string()))?;
            let full = atlas.certificate();
            let pos = atlas.certificate_positive();
            println!("{full}");
            println!(
                "positive: components={} chi={} boundary={}",
                pos.components, pos.euler_characteristic, pos.boundary_cycles
            );
            if let Some(spec) = filter_charges {
                let target = parse_triple(&spec).map_err(config_err)?;
                let hits = atlas.filter_by_charge_ratio(target, filter_tol);
                println!(
                    "filter: {} vertices match [{} : {} : {}]",
                    hits.len(),
                    fmt_sig(target[0]),
                    fmt_sig(target[1]),
                    fmt_sig(target[2])
                );
                for v in hits.iter().take(32) {
                    println!(
                        "  {} at ({}, {}) signs {}",
                        v.sheet.name(),
                        fmt_sig(v.q.x),
                        fmt_sig(v.q.y),
                        sign_pattern_string(v.signs)
                    );
                }
            }
            if let Some(path) = csv {
                std::fs::write(&path, atlas_vertices_csv(&atlas))
                    .map_err(|e| (2, format!("{}: {e}", path.display())))?;
            }
            if let Some(path) = edges {
                std::fs::write(&path, atlas_edges_csv(&atlas))
                    .map_err(|e| (2, format!("{}: {e}", path.display())))?;
            }
            if let Some(path) = svg_path {
                std::fs::write(&path, svg::atlas_figure(&atlas))
                    .map_err(|e| (2, format!("{}: {e}", path.display())))?;
            }
            Ok(())
        }
        Command::Check { tol, seed, fast } => {
            let p = tol.params();
            let reports = checks::run_all(seed, fast, &p);
            let mut failed = 0;
            for r in &reports {
                println!(
                    "check {:<34} {} ({})",
                    r.name,
                    if r.pass { "PASS" } else { "FAIL" },
                    r.detail
                );
                if !r.pass {
                    failed += 1;
                }
            }
            if failed > 0 {
                return Err((1, format!("{failed} of {} checks failed", reports.len())));
            }
            println!("all {} checks passed (seed {seed})", reports.len());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
