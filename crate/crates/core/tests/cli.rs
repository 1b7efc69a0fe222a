use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use hexspan::constructions::expected_lower_bound_stretch;

fn hexspan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hexspan"))
        .args(args)
        .env_remove("HEXSPAN_THREADS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert_eq!(code(o), 0, "stderr: {}", stderr(o));
    let v: Value = serde_json::from_slice(&o.stdout).expect("json output");
    assert_eq!(v["schema"], "hexspan/1");
    v
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

/// Numbers in the attribute `name` of every element of class `class`.
fn attr_numbers(svg: &str, class: &str, name: &str) -> Vec<Vec<f64>> {
    svg.lines()
        .filter(|l| l.contains(&format!(r#"class="{class}""#)))
        .map(|l| {
            let start = l.find(&format!(r#" {name}=""#)).unwrap() + name.len() + 3;
            let end = start + l[start..].find('"').unwrap();
            l[start..end]
                .split([' ', ','])
                .map(|t| t.parse().unwrap())
                .collect()
        })
        .collect()
}

#[test]
fn three_point_file_gives_one_triangle() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "three.txt", "# three sites\n0 0\n1 0.1\n0.4 1\n");
    let v = json(&hexspan(&["triangulate", "--input", &f]));
    assert_eq!(v["result"]["triangles"].as_array().unwrap().len(), 1);
    assert_eq!(v["command"], "triangulate");
}

#[test]
fn family_two_gives_four_triangles() {
    let v = json(&hexspan(&["triangulate", "--family", "k=2"]));
    assert_eq!(v["result"]["triangles"].as_array().unwrap().len(), 4);
}

#[test]
fn vertical_pair_is_refused_without_auto_rotate() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "vertical.txt", "0 0\n0 1\n1 0.3\n");
    let o = hexspan(&["triangulate", "--input", &f]);
    assert_eq!(code(&o), 2);
    let err = stderr(&o);
    assert!(err.contains("TwoOnSideDirection [0, 1]"), "{err}");
    assert!(err.contains("--auto-rotate"));

    let v = json(&hexspan(&["triangulate", "--input", &f, "--auto-rotate"]));
    assert_ne!(v["result"]["rotation"].as_f64().unwrap(), 0.0);
    assert_eq!(v["result"]["general_position"]["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn io_and_usage_errors_exit_one() {
    assert_eq!(code(&hexspan(&["triangulate", "--input", "/nonexistent/points.txt"])), 1);
    assert_eq!(code(&hexspan(&["triangulate"])), 1);
    assert_eq!(code(&hexspan(&["triangulate", "--family", "k=0"])), 1);
    assert_eq!(code(&hexspan(&["stretch", "--family", "k=2", "--format", "svg"])), 1);
    assert_eq!(code(&hexspan(&["frobnicate"])), 1);
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.txt", "0 0\n1 x\n");
    let o = hexspan(&["triangulate", "--input", &f]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn family_stretch_matches_the_closed_form() {
    let v = json(&hexspan(&["stretch", "--family", "k=100"]));
    let got = v["result"]["max_ratio"].as_f64().unwrap();
    let expected = expected_lower_bound_stretch(100);
    assert!((got - expected).abs() <= 1e-9, "{got} vs {expected}");
}

#[test]
fn random_stretch_is_at_most_two() {
    let v = json(&hexspan(&["stretch", "--random", "n=40", "--seed", "7"]));
    let got = v["result"]["max_ratio"].as_f64().unwrap();
    assert!(got <= 2.0 + 1e-6, "{got}");
    assert!(got >= 1.0);
}

#[test]
fn two_points_have_ratio_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "two.txt", "3 4\n5 4.5\n");
    let v = json(&hexspan(&["stretch", "--input", &f, "--all-pairs"]));
    assert_eq!(v["result"]["max_ratio"].as_f64().unwrap(), 1.0);
    assert_eq!(v["result"]["ratios"][0][1].as_f64().unwrap(), 1.0);
}

#[test]
fn all_pairs_dumps_the_ratio_matrix() {
    let v = json(&hexspan(&["stretch", "--random", "n=9", "--seed", "2", "--all-pairs"]));
    let m = v["result"]["ratios"].as_array().unwrap();
    assert_eq!(m.len(), 9);
    let max = m
        .iter()
        .flat_map(|r| r.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()))
        .fold(0.0, f64::max);
    assert_eq!(max, v["result"]["max_ratio"].as_f64().unwrap());
}

#[test]
fn verify_family_passes() {
    let o = hexspan(&["verify", "--family", "k=10"]);
    let v = json(&o);
    assert_eq!(v["result"]["passed"], true);
    assert!(v["result"]["report"]["checks"]["divide_bound"]["checked"].as_u64().unwrap() > 0);
}

#[test]
fn verify_random_seed_range_passes() {
    let o = hexspan(&["verify", "--random", "n=30", "--seed", "1..100"]);
    let v = json(&o);
    assert_eq!(v["result"]["passed"], true, "{}", v["result"]["report"]["messages"]);
    assert_eq!(v["result"]["instances"].as_array().unwrap().len(), 100);
    let checks = &v["result"]["report"]["checks"];
    for name in ["growth_table", "interval_bounds", "critical_points", "terminal_bound", "key_bound_path_free"] {
        assert!(checks[name]["checked"].as_u64().unwrap() > 0, "{name} never ran");
        assert_eq!(checks[name]["failed"].as_u64().unwrap(), 0, "{name}");
    }
}

#[test]
fn verify_splits_a_pair_at_a_point_on_its_segment() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "onseg.txt",
        "0 0\n0.5 0.1\n1 0.2\n0.3 0.8\n0.7 -0.6\n0.9 0.9\n0.1 -0.5\n",
    );
    let v = json(&hexspan(&["verify", "--input", &f, "--pair", "s=0", "t=2"]));
    let r = &v["result"]["report"];
    assert_eq!(r["splits"], 1);
    assert_eq!(r["walks"], 2);
    assert_eq!(v["result"]["passed"], true);

    let o = hexspan(&["walk", "--input", &f, "--pair", "s=0", "t=2"]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("split"), "{}", stderr(&o));
}

#[test]
fn json_is_byte_identical_across_runs_and_threads() {
    let base = ["verify", "--random", "n=16", "--seed", "4"];
    let a = hexspan(&base);
    let b = hexspan(&[&base[..], &["--threads", "1"]].concat());
    let c = Command::new(env!("CARGO_BIN_EXE_hexspan"))
        .args(base)
        .env("HEXSPAN_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let s1 = hexspan(&["stretch", "--random", "n=25", "--seed", "9"]);
    let s2 = hexspan(&["stretch", "--random", "n=25", "--seed", "9", "--threads", "2"]);
    assert_eq!(s1.stdout, s2.stdout);
}

#[test]
fn svg_has_a_polygon_per_triangle_and_witness_in_unit_box_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let raw = [(10.0, 20.0), (14.0, 21.0), (12.5, 26.0), (17.0, 24.5), (11.0, 23.3), (15.2, 28.1)];
    let text: String = raw.iter().map(|(x, y)| format!("{x} {y}\n")).collect();
    let f = write(dir.path(), "pts.txt", &text);
    let v = json(&hexspan(&["triangulate", "--input", &f]));
    let triangles = v["result"]["triangles"].as_array().unwrap().len();
    let scale = v["transform"]["scale"].as_f64().unwrap();
    let (ox, oy) = (
        v["transform"]["offset"]["x"].as_f64().unwrap(),
        v["transform"]["offset"]["y"].as_f64().unwrap(),
    );

    let out = dir.path().join("tri.svg");
    let o = hexspan(&[
        "triangulate",
        "--input",
        &f,
        "--format",
        "svg",
        "--witnesses",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.contains(r#"version="1.1""#));
    assert_eq!(svg.matches("<polygon").count(), 2 * triangles);
    assert_eq!(attr_numbers(&svg, "witness", "points").len(), triangles);

    let unit: Vec<(f64, f64)> = raw.iter().map(|&(x, y)| ((x - ox) * scale, (y - oy) * scale)).collect();
    for (x, y) in &unit {
        assert!((-1e-12..=1.0 + 1e-12).contains(x) && (-1e-12..=1.0 + 1e-12).contains(y));
    }
    let tris = attr_numbers(&svg, "triangle", "points");
    assert_eq!(tris.len(), triangles);
    for (t, jt) in tris.iter().zip(v["result"]["triangles"].as_array().unwrap()) {
        for c in 0..3 {
            let k = jt[c].as_u64().unwrap() as usize;
            assert!((t[2 * c] - unit[k].0).abs() <= 1e-6);
            assert!((t[2 * c + 1] - unit[k].1).abs() <= 1e-6);
        }
    }
}

#[test]
fn walk_and_sweep_svg() {
    let pair = ["--random", "n=12", "--seed", "3", "--pair", "s=1", "t=5"];
    let w = hexspan(&[&["walk", "--format", "svg"], &pair[..]].concat());
    assert_eq!(code(&w), 0);
    let svg = stdout(&w);
    assert_eq!(svg.matches(r#"class="segment""#).count(), 1);
    assert!(svg.contains(r##"fill="#f4d35e""##));

    let s = hexspan(&[&["sweep", "--format", "svg"], &pair[..]].concat());
    assert_eq!(code(&s), 0);
    let svg = stdout(&s);
    for class in ["r", "U", "L", "P"] {
        assert_eq!(attr_numbers(&svg, class, "points").len(), 1, "{class}");
    }

    let v = json(&hexspan(&[&["sweep"], &pair[..]].concat()));
    let traces = v["result"].as_array().unwrap();
    assert!(!traces.is_empty());
    for t in traces {
        let tr = &t["trace"];
        let segs = tr["segments"].as_array().unwrap();
        let last = segs.last().unwrap();
        let (x0, x1) = (last["x0"].as_f64().unwrap(), last["x1"].as_f64().unwrap());
        let p_end = last["p"]["v0"].as_f64().unwrap() + last["p"]["slope"].as_f64().unwrap() * (x1 - x0);
        assert!((p_end - 2.0 * tr["d_pq"].as_f64().unwrap()).abs() <= 1e-9);
    }
}

#[test]
fn lowerbound_and_random_test_pass() {
    let v = json(&hexspan(&["lowerbound"]));
    assert_eq!(v["result"]["passed"], true);
    assert_eq!(v["result"]["rows"].as_array().unwrap().len(), 6);
    for shape in ["hexagon", "triangle", "square"] {
        let v = json(&hexspan(&["random-test", "--random", "n=15", "--seed", "1..5", "--shape", shape]));
        assert_eq!(v["result"]["passed"], true, "{shape}");
    }
}
