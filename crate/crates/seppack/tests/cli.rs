use std::path::Path;

use serde_json::Value;
use seppack::cli::run;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn seppack(args: &[&str], stdin: &str) -> Run {
    let mut argv = vec!["seppack"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/codes").join(name).display().to_string()
}

fn json(run: &Run) -> Value {
    serde_json::from_str(&run.stdout).unwrap_or_else(|e| panic!("{e}: {}", run.stdout))
}

#[test]
fn shipped_codes_verify_and_lift() {
    let r = seppack(&["code", "verify", &data("r7_18.txt")], "");
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("18 vectors in R^7"));

    let r = seppack(&["--json", "cert", "lift", &data("r8_29.txt")], "");
    assert_eq!(r.code, 0);
    let report = json(&r);
    assert_eq!(report["pairs"], 29);
    assert_eq!(report["dimension"], 9);

    // Too large an alpha for the code is rejected with the offending pair.
    let r = seppack(&["--json", "code", "verify", "--alpha", "0.3", &data("r7_18.txt")], "");
    assert_eq!(r.code, 1);
    assert!(!json(&r)["violations"].as_array().unwrap().is_empty());
}

#[test]
fn certificate_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let cert = cert.to_str().unwrap();
    let r = seppack(&["cert", "lift", "--k", "2", "--out", cert, &data("r7_18.txt")], "");
    assert_eq!(r.code, 0, "{}", r.stderr);
    let r = seppack(&["--json", "cert", "verify", cert], "");
    assert_eq!(r.code, 0);
    assert_eq!(json(&r)["pairs"], 22);
    let r = seppack(&["--json", "cert", "reduce", cert], "");
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(json(&r)["removed"], 2);

    let r = seppack(&["--json", "cert", "bound", "--d", "6"], "");
    assert_eq!(json(&r)["bound"], 27);
    assert_eq!(seppack(&["cert", "bound", "--d", "8"], "").code, 2);
}

#[test]
fn deletion_search_writes_a_verifiable_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("code.txt");
    let out = out.to_str().unwrap();
    let r = seppack(&["--seed", "3", "code", "search", "--dim", "40", "--out", out], "");
    assert_eq!(r.code, 0);
    let r = seppack(&["code", "verify", "--alpha", "1/3", out], "");
    assert_eq!(r.code, 0, "{}", r.stderr);
}

#[test]
fn ell1_build_piped_into_verify() {
    let built = seppack(&["ell1", "build", "--k", "2"], "");
    assert_eq!(built.code, 0);
    let r = seppack(&["--json", "ell1", "verify", "-"], &built.stdout);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let report = json(&r);
    assert_eq!(report["codewords"], 16);
    assert_eq!(report["min_distance"], 6);
    assert_eq!(report["max_degree"], 12);
    let r = seppack(&["--json", "ell1", "neighbors", "--index", "3", "-"], &built.stdout);
    assert_eq!(json(&r)["neighbors"], 12);

    let r = seppack(&["ell1", "build", "--k", "4"], "");
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("171600"));
}

#[test]
fn planar_pack_verify_and_render() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    let path = path.to_str().unwrap();
    let r = seppack(&["planar", "pack", "--body", "octagon", "--n", "9", "--out", path], "");
    assert_eq!(r.code, 0);
    let r = seppack(&["--json", "planar", "verify", path], "");
    assert_eq!(r.code, 0);
    assert_eq!(json(&r)["contacts"], 12);

    let svg_a = seppack(&["planar", "render", path], "").stdout;
    let svg_b = seppack(&["planar", "render", path], "").stdout;
    assert_eq!(svg_a, svg_b);
    assert_eq!(svg_a.matches("<path").count(), 9);

    let r = seppack(&["--json", "planar", "classify", "--body", "hexagon"], "");
    assert_eq!(json(&r)["class"], "quasi-hexagon");
}

#[test]
fn overlapping_packing_is_rejected_with_the_pair() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"body": {"vertices": [[1, -1], [1, 1], [-1, 1], [-1, -1]]}, "centers": [[0, 0], [2, 0], ["1", "3/2"]]}"#,
    )
    .unwrap();
    let r = seppack(&["--json", "planar", "verify", path.to_str().unwrap()], "");
    assert_eq!(r.code, 1);
    let report = json(&r);
    assert_eq!(report["packing"], false);
    assert_eq!(report["overlap"]["i"], 0);
    assert_eq!(report["overlap"]["j"], 2);
}

#[test]
fn non_separable_packing_names_the_pair() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("shear.json");
    // Two squares touching along a half edge and a third blocking every separating line.
    std::fs::write(
        &path,
        r#"{"body": {"vertices": [[1, -1], [1, 1], [-1, 1], [-1, -1]]}, "centers": [[0, 0], [2, 1], [1, 3]]}"#,
    )
    .unwrap();
    let r = seppack(&["--json", "planar", "verify", path.to_str().unwrap()], "");
    assert_eq!(r.code, 1, "{}", r.stdout);
    assert_eq!(json(&r)["separable"], false);
}

#[test]
fn measure_and_polyomino_commands() {
    let r = seppack(&["--json", "planar", "measure", "--body", "octagon", "--polygon", "0,0;3,1;1,2"], "");
    assert_eq!(r.code, 0);
    assert_eq!(json(&r)["angle_sum"], "1");
    assert_eq!(seppack(&["planar", "measure", "--body", "square"], "").code, 2);

    let r = seppack(&["polyomino", "optimal", "--lattice", "square", "--n", "10"], "");
    assert_eq!(r.code, 0);
    let counted = seppack(&["--json", "polyomino", "count", "-"], &r.stdout);
    assert_eq!(json(&counted)["adjacencies"], 13);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(seppack(&["frobnicate"], "").code, 2);
    assert_eq!(seppack(&["planar", "pack", "--n", "3"], "").code, 2);
    assert_eq!(seppack(&["planar", "pack", "--body", "circle", "--n", "3"], "").code, 2);
    assert_eq!(seppack(&["code", "verify", "--alpha", "1/3", "/nonexistent/file"], "").code, 2);
    assert_eq!(seppack(&["--help"], "").code, 0);
}

#[test]
fn manifest_records_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("run.json");
    let manifest = manifest.to_str().unwrap();
    let code = data("r7_18.txt");
    let r = seppack(&["--manifest", manifest, "code", "verify", &code], "");
    assert_eq!(r.code, 0);
    let recorded: Value = serde_json::from_str(&std::fs::read_to_string(manifest).unwrap()).unwrap();
    assert_eq!(recorded["exit_code"], 0);
    assert_eq!(recorded["parameters"]["alpha"], "1/3");
    assert_eq!(recorded["inputs"][&code].as_str().unwrap().len(), 64);

    let r = seppack(&["replay", manifest], "");
    assert_eq!(r.code, 0, "{}", r.stdout);

    // A manifest whose verdict was tampered with no longer replays.
    let mut tampered = recorded.clone();
    tampered["verdicts"]["count"] = 17.into();
    let path = dir.path().join("tampered.json");
    std::fs::write(&path, serde_json::to_string(&tampered).unwrap()).unwrap();
    assert_eq!(seppack(&["replay", path.to_str().unwrap()], "").code, 1);
}
