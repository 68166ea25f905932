use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const HEADER: &str = "x,y,z,norm_P,abs_lambda_MF,lambda_P,lambda_bar,ub_chain,ub_refined,branch";

fn magalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_magalg")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn analyze(config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["analyze", "--config", s(config), "--out", s(out)];
    args.extend_from_slice(extra);
    magalg(&args)
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

#[test]
fn single_dipole_report() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"magnets":[{"position":[0,0,0]}],"field_points":[[0,0,1]],"si_prefactor":false}"#);
    let out = dir.path().join("r.json");
    let o = analyze(&cfg, &out, &[]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = read_json(&out);
    assert!((num(&r["lambda_bar"]["value"]) - 2.0).abs() <= 1e-6);
    assert_eq!(r["branch"], "PLANE_DOMINANT");
    for key in ["P", "gram", "planes", "lambda_P", "bounds", "candidates"] {
        assert!(!r[key].is_null(), "missing {key}");
    }
    assert_eq!(r["tool"]["name"], "magalg");
    assert_eq!(r["parameters"]["samples"], 20000);
    assert_eq!(r["parameters"]["seed"], 0);
    assert!((num(&r["gram"]["lambda_F"]) - 6.0).abs() < 1e-12);
}

#[test]
fn antipodal_pair_is_degenerate() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"magnets":[{"position":[1,0,0]},{"position":[-1,0,0]}],"field_points":[[0,0,0]]}"#);
    let out = dir.path().join("r.json");
    assert_eq!(code(&analyze(&cfg, &out, &[])), 0);
    let r = read_json(&out);
    assert_eq!(r["branch"], "DEGENERATE");
    assert_eq!(num(&r["lambda_bar"]["value"]), 0.0);
}

#[test]
fn input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r.json");

    let o = analyze(&dir.path().join("absent.json"), &out, &[]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("config not found"));

    let bad = write(&dir, "bad.json", "{\n  \"magnets\": [\n    {\"position\": [0, 0 0]}\n  ]\n}");
    let o = analyze(&bad, &out, &[]);
    assert_eq!(code(&o), 2);
    let e = stderr(&o);
    assert!(e.contains("malformed JSON") && e.contains("line 3") && e.contains("column"), "{e}");

    let no_point = write(&dir, "np.json", r#"{"magnets":[{"position":[0,0,0]}]}"#);
    assert_eq!(code(&analyze(&no_point, &out, &[])), 2);

    let cfg = write(&dir, "c.json", r#"{"magnets":[{"position":[0,0,0]}],"field_points":[[0,0,1]]}"#);
    assert_eq!(code(&analyze(&cfg, &out, &["--samples", "10"])), 2);
    assert_eq!(code(&analyze(&cfg, &out, &["--tol", "0"])), 2);
    assert!(!out.exists());
}

#[test]
fn singular_field_point_exits_3_naming_the_magnet() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"magnets":[{"position":[0,0,0]},{"position":[0,0,1]}],"field_points":[[0,0,1]]}"#);
    let o = analyze(&cfg, &dir.path().join("r.json"), &[]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("magnet 1"), "{}", stderr(&o));
}

fn assert_numbers_close(a: &Value, b: &Value, path: &str) {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => {
            let (x, y) = (x.as_f64().unwrap(), y.as_f64().unwrap());
            assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0), "{path}: {x} vs {y}");
        }
        (Value::Array(x), Value::Array(y)) => {
            assert_eq!(x.len(), y.len(), "{path}");
            for (i, (u, v)) in x.iter().zip(y).enumerate() {
                assert_numbers_close(u, v, &format!("{path}[{i}]"));
            }
        }
        (Value::Object(x), Value::Object(y)) => {
            assert_eq!(x.len(), y.len(), "{path}");
            for (k, u) in x {
                assert_numbers_close(u, &y[k], &format!("{path}.{k}"));
            }
        }
        _ => assert_eq!(a, b, "{path}"),
    }
}

#[test]
fn report_round_trips_through_embedded_config() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.json",
        r#"{"magnets":[{"position":[0.3,-1.2,0.4]},{"position":[-0.9,0.5,-0.2]},{"position":[1.1,0.7,0.9]}],
            "field_points":[[0.05,0.1,-0.07]]}"#,
    );
    let first = dir.path().join("a.json");
    let flags = ["--samples", "3000", "--refine", "40", "--seed", "5"];
    assert_eq!(code(&analyze(&cfg, &first, &flags)), 0);
    let a = read_json(&first);

    let replay = write(&dir, "replay.json", &a["config"].to_string());
    let p = &a["parameters"];
    let (samples, refine, seed) = (p["samples"].to_string(), p["refine"].to_string(), p["seed"].to_string());
    let second = dir.path().join("b.json");
    let o = analyze(&replay, &second, &["--samples", &samples, "--refine", &refine, "--seed", &seed]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_numbers_close(&a, &read_json(&second), "report");
}

#[test]
fn si_flag_records_prefactor_only() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"magnets":[{"position":[0,0,0]}],"field_points":[[0,0,2]]}"#);
    let (plain, si) = (dir.path().join("a.json"), dir.path().join("b.json"));
    assert_eq!(code(&analyze(&cfg, &plain, &[])), 0);
    assert_eq!(code(&analyze(&cfg, &si, &["--si"])), 0);
    let (a, b) = (read_json(&plain), read_json(&si));
    assert_eq!(a["lambda_bar"], b["lambda_bar"]);
    assert_eq!(num(&a["force_prefactor"]), 1.0);
    assert!((num(&b["force_prefactor"]) - 3e-7).abs() < 1e-20);
    assert_eq!(b["config"]["si_prefactor"], true);
}

fn sweep(config: &Path, grid: &str, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["sweep", "--config", s(config), "--grid", grid, "--out", s(out)];
    args.extend_from_slice(extra);
    magalg(&args)
}

fn rows(csv: &Path) -> Vec<Vec<String>> {
    let text = fs::read_to_string(csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(HEADER));
    lines.map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

fn cell(r: &[String], i: usize) -> f64 {
    r[i].parse().unwrap_or_else(|_| panic!("column {i} of {r:?}"))
}

#[test]
fn unit_grid_matches_analyze() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.json",
        r#"{"magnets":[{"position":[1,0,0]},{"position":[-1,0.3,0]},{"position":[0.2,1.1,0]}],"field_points":[[0.1,-0.2,0]]}"#,
    );
    let report = dir.path().join("r.json");
    let csv = dir.path().join("s.csv");
    let flags = ["--samples", "4000", "--refine", "50"];
    assert_eq!(code(&analyze(&cfg, &report, &flags)), 0);
    assert_eq!(code(&sweep(&cfg, "0.1:0.1:1,-0.2:-0.2:1,0:0:1", &csv, &flags)), 0);
    let r = read_json(&report);
    let rows = rows(&csv);
    assert_eq!(rows.len(), 1);
    let row = &rows[0];
    let opt = |v: &Value| v.as_f64();
    let expect = [
        opt(&r["norm_P"]),
        opt(&r["abs_lambda_MF"]),
        opt(&r["lambda_P"]["value"]),
        opt(&r["lambda_bar"]["value"]),
        opt(&r["bounds"]["chain_upper"]),
        opt(&r["bounds"]["refined"]),
    ];
    for (k, e) in expect.into_iter().enumerate() {
        let got = row[3 + k].parse::<f64>().ok();
        assert_eq!(got, e, "column {}", HEADER.split(',').nth(3 + k).unwrap());
    }
    assert_eq!(row[9], r["branch"].as_str().unwrap());
    assert!(!row[5].is_empty(), "planar config has a plane maximum");
}

#[test]
fn pair_sweep_respects_chain_and_order() {
    let dir = TempDir::new().unwrap();
    let gen = magalg(&["gen", "pair", "--sep", "2"]);
    assert_eq!(code(&gen), 0);
    let cfg = write(&dir, "pair.json", &String::from_utf8(gen.stdout).unwrap());
    let csv = dir.path().join("s.csv");
    let flags = ["--samples", "500", "--refine", "20"];
    let o = sweep(&cfg, "-1:1:11,-1:1:11,-1:1:11", &csv, &flags);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows = rows(&csv);
    assert_eq!(rows.len(), 1331);

    let mut singular = 0;
    for (i, r) in rows.iter().enumerate() {
        let (ix, iy, iz) = (i % 11, (i / 11) % 11, i / 121);
        let expect = [ix, iy, iz].map(|k| -1.0 + 2.0 * k as f64 / 10.0);
        for a in 0..3 {
            assert!((cell(r, a) - expect[a]).abs() < 1e-15, "row {i}");
        }
        if r[9] == "singular" {
            singular += 1;
            assert!(r[3..9].iter().all(String::is_empty));
            continue;
        }
        let bar = cell(r, 6);
        let chain = if r[7].is_empty() { 0.0 } else { cell(r, 7) };
        assert!(bar <= chain * (1.0 + 1e-9) + 1e-12, "row {i}: {bar} > {chain}");
    }
    // The grid passes through both magnets at (±1, 0, 0).
    assert_eq!(singular, 2);
    assert!(stderr(&o).contains("singular"));

    let again = dir.path().join("t.csv");
    assert_eq!(code(&sweep(&cfg, "-1:1:11,-1:1:11,-1:1:11", &again, &flags)), 0);
    assert_eq!(fs::read(&csv).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn empty_grid_exits_2() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"magnets":[{"position":[0,0,0]}]}"#);
    let csv = dir.path().join("s.csv");
    assert_eq!(code(&sweep(&cfg, "0:1:0,0:1:2,0:1:2", &csv, &[])), 2);
    assert_eq!(code(&sweep(&cfg, "0:1:2", &csv, &[])), 2);
    assert!(!csv.exists());
}

fn gen_json(args: &[&str]) -> Value {
    let o = magalg(args);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn generators() {
    let pair = gen_json(&["gen", "pair", "--sep", "2"]);
    assert_eq!(pair["magnets"][0]["position"], serde_json::json!([1.0, 0.0, 0.0]));
    assert_eq!(pair["magnets"][1]["position"], serde_json::json!([-1.0, 0.0, 0.0]));

    let lattice = gen_json(&["gen", "lattice", "--k", "1", "--exclude-origin"]);
    assert_eq!(lattice["magnets"].as_array().unwrap().len(), 26);

    let mirror = gen_json(&["gen", "mirror", "--normal", "0,1,0", "--pair", "1,0,0,0.5", "--point", "-1,0,0", "--at", "0,0,0.2"]);
    assert_eq!(mirror["magnets"].as_array().unwrap().len(), 3);
    assert_eq!(mirror["field_points"], serde_json::json!([[0.0, 0.0, 0.2]]));

    assert_eq!(code(&magalg(&["gen", "mirror"])), 2);
    assert_eq!(code(&magalg(&["gen", "pair", "--sep", "-1"])), 2);
    assert_eq!(code(&magalg(&["gen", "lattice", "--k", "0"])), 2);
    assert_eq!(code(&magalg(&["gen", "mirror", "--pair", "1,2,3"])), 2);
}

#[test]
fn generated_mirror_config_has_its_plane() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("m.json");
    let o = magalg(&["gen", "mirror", "--pair", "0.5,0.2,0,0.8", "--pair", "-0.7,0.4,0,0.3", "--at", "0.1,-0.1,0", "--out", s(&cfg)]);
    assert_eq!(code(&o), 0);
    let out = dir.path().join("r.json");
    assert_eq!(code(&analyze(&cfg, &out, &["--samples", "2000"])), 0);
    let r = read_json(&out);
    let normals: Vec<f64> = r["planes"]["list"].as_array().unwrap().iter().map(|p| num(&p["normal"][2]).abs()).collect();
    assert!(normals.iter().any(|&z| (z - 1.0).abs() < 1e-9), "{normals:?}");
}

fn verify(extra: &[&str]) -> Output {
    let mut args = vec!["verify"];
    args.extend_from_slice(extra);
    magalg(&args)
}

#[test]
fn verify_random_planar_configs() {
    let o = verify(&["--trials", "100", "--seed", "3", "--samples", "1000", "--refine", "30"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(r["violations"].as_array().unwrap().is_empty());
    for name in ["basic_inequality", "r_ordering", "plane_chain", "subadditivity", "bound_chain", "decomposition_normal", "trace"] {
        assert_eq!(r["checks"][name]["passed"], true, "{name}");
        assert_eq!(r["checks"][name]["evaluated"], 100, "{name}");
    }

    let again = verify(&["--trials", "100", "--seed", "3", "--samples", "1000", "--refine", "30"]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn verify_a_given_config() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.json",
        r#"{"magnets":[{"position":[0.3,-1.2,0.4]},{"position":[-0.9,0.5,-0.2]}],"field_points":[[0,0,0],[0.2,0.1,0.3]]}"#,
    );
    let out = dir.path().join("v.json");
    let o = verify(&["--trials", "50", "--seed", "1", "--samples", "1000", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = read_json(&out);
    assert_eq!(r["mode"], "config");
    assert_eq!(r["checks"]["trace"]["evaluated"], 2);
}

#[test]
fn verify_rejects_zero_trials() {
    let o = verify(&["--trials", "0", "--seed", "1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("trials"));
}
