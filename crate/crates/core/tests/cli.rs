use std::path::Path;

use cvdmap::cli::run_with;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("cvdmap").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn data_rows(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()).collect()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn optimize_viridis_emits_table() {
    let (code, out, err) = run(&["optimize", "--input", "viridis", "--method", "max-range"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(data_rows(&out).len(), 256);
    assert!(out.contains("# method: max-range"));
    assert!(out.contains("# viewing_conditions:"));
}

#[test]
fn optimize_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.lut"), dir.path().join("b.lut"));
    let (ta, tb) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for (lut, table) in [(&a, &ta), (&b, &tb)] {
        let (code, _, err) = run(&[
            "optimize", "-i", "viridis", "--method", "fit", "--out-lut", p(lut), "--out-table", p(table),
            "--table-scale", "byte",
        ]);
        assert_eq!(code, 0, "{err}");
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(std::fs::read(&a).unwrap().len(), 768);
    assert_eq!(std::fs::read(&ta).unwrap(), std::fs::read(&tb).unwrap());
    let side = std::fs::read_to_string(dir.path().join("a.lut.json")).unwrap();
    assert!(side.contains("fit-original") && side.contains("cvdmap"));
}

#[test]
fn optimize_png_and_size() {
    let dir = tempfile::tempdir().unwrap();
    let png = dir.path().join("ramp.png");
    let (code, _, err) = run(&["optimize", "-i", "viridis", "--size", "64", "--out-png", p(&png)]);
    assert_eq!(code, 0, "{err}");
    let r = cvdmap::io::load_png(&png).unwrap();
    assert_eq!((r.width, r.height), (64, 32));
}

#[test]
fn infeasible_input_names_fallback() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("byb.csv");
    std::fs::write(&table, "0.1,0.1,0.9\n0.95,0.95,0.1\n0.1,0.1,0.9\n").unwrap();
    let (code, _, err) = run(&["optimize", "--input", p(&table), "--method", "max-range", "--size", "64"]);
    assert_ne!(code, 0);
    assert!(err.contains("fit-original"), "{err}");
    let (code, out, _) = run(&["optimize", "--input", p(&table), "--method", "fit", "--size", "64"]);
    assert_eq!(code, 0);
    assert_eq!(data_rows(&out).len(), 64);
}

#[test]
fn gamut_fraction_at_zero() {
    let (code, out, _) = run(&["gamut-fraction", "--severity", "0", "--resolution", "16"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().nth(1).unwrap(), "0,1.0");
}

#[test]
fn gamut_fraction_list() {
    let (code, out, _) = run(&["gamut-fraction", "--cvd-type", "protan", "--severity", "0,50,100", "--resolution", "16"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 4);
}

#[test]
fn list_builtins() {
    let (code, out, _) = run(&["list"]);
    assert_eq!(code, 0);
    for name in ["viridis", "jet", "grayscale-jp", "cividis"] {
        assert!(out.lines().any(|l| l == name));
    }
}

#[test]
fn unknown_map_lists_registry() {
    let (code, _, err) = run(&["optimize", "--input", "parula"]);
    assert_eq!(code, 1);
    assert!(err.contains("viridis") && err.contains("cividis"), "{err}");
}

#[test]
fn flag_errors_show_usage() {
    let (code, _, err) = run(&["optimize", "--input", "viridis", "--method", "spline"]);
    assert_eq!(code, 2);
    assert!(err.contains("Usage") || err.contains("usage"), "{err}");
    let (code, _, _) = run(&["optimize", "--input", "viridis", "--severity", "120"]);
    assert_eq!(code, 1);
}

#[test]
fn testimage_then_cdps() {
    let dir = tempfile::tempdir().unwrap();
    let png = dir.path().join("kovesi.png");
    let csv = dir.path().join("kovesi.csv");
    let (code, _, err) = run(&[
        "testimage", "--width", "256", "--height", "16", "--out", p(&png), "--out-csv", p(&csv),
    ]);
    assert_eq!(code, 0, "{err}");
    let r = cvdmap::io::load_png(&png).unwrap();
    assert_eq!((r.width, r.height), (256, 16));

    let json = dir.path().join("gray.json");
    let (code, out, err) = run(&["cdps", "--image", p(&csv), "--map", "grayscale-jp", "--out-json", p(&json)]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["slope"].as_f64().unwrap() - 1.0).abs() < 0.01);
    assert!(v["r2"].as_f64().unwrap() >= 0.999);
    assert_eq!(v["n_pairs"], 255);
    assert!(json.exists());
}

#[test]
fn cdps_with_path_file() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("img.csv");
    let path = dir.path().join("path.csv");
    let deltas = dir.path().join("deltas.csv");
    assert_eq!(run(&["testimage", "--width", "64", "--height", "8", "--out-csv", p(&csv)]).0, 0);
    std::fs::write(&path, "0,7\n10,7\n20,6\n30,5\n63,0\n").unwrap();
    let (code, _, err) = run(&[
        "cdps", "--image", p(&csv), "--path", p(&path), "--map", "jet", "--out-csv", p(&deltas),
    ]);
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(&deltas).unwrap();
    assert!(text.starts_with("data_delta,perceptual_delta\n"));
    assert_eq!(text.lines().count(), 5);

    std::fs::write(&path, "0,7\n100,7\n").unwrap();
    assert_eq!(run(&["cdps", "--image", p(&csv), "--path", p(&path), "--map", "jet"]).0, 1);
}

#[test]
fn simulate_map_and_png() {
    let (code, out, _) = run(&["simulate", "--input", "viridis", "--table-scale", "byte"]);
    assert_eq!(code, 0);
    assert_eq!(data_rows(&out).len(), 256);

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("src.png");
    let dst = dir.path().join("dst.png");
    assert_eq!(run(&["testimage", "--width", "32", "--height", "4", "--overlay", "jet", "--out", p(&src)]).0, 0);
    let (code, _, err) = run(&["simulate", "--input", p(&src), "--severity", "0", "--out", p(&dst)]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(cvdmap::io::load_png(&src).unwrap(), cvdmap::io::load_png(&dst).unwrap());
}

#[test]
fn viewing_conditions_file() {
    let dir = tempfile::tempdir().unwrap();
    let vc = dir.path().join("vc.json");
    std::fs::write(&vc, r#"{"whitepoint": [95.05, 100.0, 108.9], "L_A": 20.0, "Y_b": 18.0, "surround": "dim"}"#).unwrap();
    let (code, out, err) = run(&["optimize", "-i", "viridis", "--viewing-conditions", p(&vc)]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("\"surround\":\"dim\""));
    std::fs::write(&vc, r#"{"whitepoint": [95.05, -1.0, 108.9], "L_A": 20.0, "Y_b": 18.0}"#).unwrap();
    assert_eq!(run(&["optimize", "-i", "viridis", "--viewing-conditions", p(&vc)]).0, 1);
}
