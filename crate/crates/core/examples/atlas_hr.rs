fn main() {
    let c = orthotripod::curve::Curve::ellipse(2.0, 1.0).unwrap();
    let p = orthotripod::Params::default();
    for res in [160usize, 200] {
        let t0 = std::time::Instant::now();
        let atlas = orthotripod::build_atlas(&c, res, &p).unwrap();
        let full = atlas.certificate();
        let pos = atlas.certificate_positive();
        println!("res {res}: full {full} | positive {pos} ({:?})", t0.elapsed());
    }
}
