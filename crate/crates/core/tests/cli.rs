//! End-to-end CLI tests: pinned output formats, determinism, exit codes.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_orthotripod"))
}

fn run(args: &[&str]) -> (String, String, Option<i32>) {
    let out = bin().args(args).output().expect("spawn orthotripod");
    (
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
        out.status.code(),
    )
}

#[test]
fn charges_at_core_point_lists_four_tripods_two_positive() {
    let (stdout, _, code) = run(&["charges", "--curve", "ellipse:2,1", "--at", "0.1,0.05"]);
    assert_eq!(code, Some(0));
    let mut lines = stdout.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t1,t2,t3,cx,cy,q1,q2,q3,signs,ceva_residual,conc_residual"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4, "four orthotripods over a core point");
    let positives = rows
        .iter()
        .filter(|r| r.split(',').nth(8) == Some("+++"))
        .count();
    assert_eq!(positives, 2, "{stdout}");
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["charges", "--curve", "ellipse:2,1", "--at", "0.1,0.05"];
    let (a, _, _) = run(&args);
    let (b, _, _) = run(&args);
    assert_eq!(a, b);
    let json = [
        "charges",
        "--curve",
        "ellipse:2,1",
        "--at",
        "0.1,0.05",
        "--format",
        "json",
    ];
    let (a, _, _) = run(&json);
    let (b, _, _) = run(&json);
    assert_eq!(a, b);
    assert!(a.trim_start().starts_with('['));
    assert!(a.contains("\"signs\":\"+++\""));
}

#[test]
fn normals_outside_the_core() {
    let (stdout, _, code) = run(&["normals", "--curve", "ellipse:2,1", "--at", "5,0"]);
    assert_eq!(code, Some(0));
    assert!(stdout.contains("qx,qy,n,index"), "{stdout}");
    assert!(stdout.contains("5,0,2,0"), "{stdout}");
    assert!(stdout.contains("membership: outside"), "{stdout}");
}

#[test]
fn doubles_reports_the_axes() {
    let (stdout, _, code) = run(&["doubles", "--curve", "ellipse:2,1"]);
    assert_eq!(code, Some(0));
    let rows: Vec<&str> = stdout.lines().skip(1).collect();
    assert_eq!(rows.len(), 2, "{stdout}");
}

#[test]
fn atlas_prints_the_cylinder_certificate() {
    let (stdout, _, code) = run(&["atlas", "--curve", "ellipse:2,1", "--resolution", "64"]);
    assert_eq!(code, Some(0));
    assert!(stdout.contains("components=1 chi=0 boundary=2"), "{stdout}");
    assert!(
        stdout.contains("positive: components=1 chi=0 boundary=2"),
        "{stdout}"
    );
}

#[test]
fn caustic_emits_cusps_and_csv() {
    let dir = std::env::temp_dir().join("orthotripod-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let svg = dir.join("fig.svg");
    let csv = dir.join("caustic.csv");
    let (stdout, _, code) = run(&[
        "caustic",
        "--curve",
        "ellipse:2,1",
        "--svg",
        svg.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, Some(0));
    assert_eq!(stdout.matches("cusp t=").count(), 4, "{stdout}");
    let caustic = std::fs::read_to_string(&csv).unwrap();
    assert!(caustic.starts_with("t,cx,cy\n"));
    assert!(caustic.lines().count() > 2000);
    let figure = std::fs::read_to_string(&svg).unwrap();
    assert!(figure.starts_with("<svg"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn config_errors_exit_2() {
    let (_, stderr, code) = run(&["normals", "--curve", "hyperbola:1", "--at", "0,0"]);
    assert_eq!(code, Some(2));
    assert!(stderr.contains("unknown curve kind"), "{stderr}");
    // degenerate query: circle centre
    let (_, stderr, code) = run(&["normals", "--curve", "circle:1", "--at", "0,0"]);
    assert_eq!(code, Some(2));
    assert!(stderr.contains("feet are undefined"), "{stderr}");
    // missing curve
    let (_, _, code) = run(&["doubles"]);
    assert_eq!(code, Some(2));
}

#[test]
fn charges_for_explicit_parameter_triple() {
    // equilateral triple on the unit circle: unit charges
    let t1 = 0.0;
    let t2 = std::f64::consts::TAU / 3.0;
    let t3 = 2.0 * std::f64::consts::TAU / 3.0;
    let spec = format!("{t1},{t2},{t3}");
    let (stdout, _, code) = run(&["charges", "--curve", "circle:1", "--params", &spec]);
    assert_eq!(code, Some(0));
    let row = stdout.lines().nth(1).unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(&fields[5..8], &["1", "1", "1"], "{row}");
    assert_eq!(fields[8], "+++");
    // a generic triple is rejected as not an orthotripod
    let (_, stderr, code) = run(&[
        "charges",
        "--curve",
        "ellipse:2,1",
        "--params",
        "0.3,1.9,4.1",
    ]);
    assert_eq!(code, Some(2));
    assert!(stderr.contains("not an orthotripod"), "{stderr}");
}

#[test]
fn curve_config_file_roundtrip() {
    let dir = std::env::temp_dir().join("orthotripod-cli-config");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("curve.cfg");
    std::fs::write(&path, "# test oval\nkind = ellipse\na = 2\nb = 1\n").unwrap();
    let (stdout, _, code) = run(&[
        "normals",
        "--config",
        path.to_str().unwrap(),
        "--at",
        "0.1,0.05",
    ]);
    assert_eq!(code, Some(0));
    assert!(stdout.contains("0.1,0.05,4,1"), "{stdout}");
    std::fs::remove_dir_all(&dir).ok();
}
