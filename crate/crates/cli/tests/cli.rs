use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn maxarc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxarc"))
        .args(args)
        .output()
        .expect("spawn maxarc")
}

fn ok_stdout(args: &[&str]) -> String {
    let out = maxarc(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok_stdout(args)).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Plane, arc, design and arc family files for q with arc degree k.
fn setup(dir: &Path, q: usize, k: usize) -> (PathBuf, PathBuf, PathBuf, PathBuf) {
    let (q, k) = (q.to_string(), k.to_string());
    let plane = write(dir, "plane.txt", &ok_stdout(&["plane", "--q", &q]));
    let arc = write(dir, "arc.txt", &ok_stdout(&["arc", "--q", &q, "--k", &k]));
    let design = write(
        dir,
        "design.txt",
        &ok_stdout(&["restrict", "--plane", s(&plane), "--arc", s(&arc)]),
    );
    let family = write(
        dir,
        "family.txt",
        &ok_stdout(&["resolutions", "--plane", s(&plane), "--arc", s(&arc)]),
    );
    (plane, arc, design, family)
}

#[test]
fn pipeline_t3_summary() {
    let v = json(&["pipeline", "--t", "3"]);
    assert_eq!(v["schema"], 1);
    for (key, want) in [
        ("v", 28),
        ("b", 63),
        ("m", 10),
        ("plane_order", 8),
        ("rank2", 19),
        ("bound", 19),
        ("b_i", 45),
    ] {
        assert_eq!(v[key], want, "{key}");
    }
    assert_eq!(v["verdict"], "at-bound");
    assert_eq!(v["srg"]["matches"], true);
}

#[test]
fn pipeline_rejects_bad_degree() {
    assert_eq!(
        maxarc(&["pipeline", "--t", "3", "--k", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        maxarc(&["pipeline", "--t", "3", "--k", "8"]).status.code(),
        Some(2)
    );
}

#[test]
fn params_table() {
    let text = ok_stdout(&["params", "--s", "2", "--k", "4"]);
    for line in [
        "v 28",
        "b 63",
        "r 9",
        "m_max 10",
        "b_i_max 45",
        "srg_degree 32",
        "complement_degree 30",
    ] {
        assert!(
            text.lines().any(|l| l == line),
            "missing {line:?} in\n{text}"
        );
    }
    let v = json(&["--json", "params", "--s", "2", "--k", "4"]);
    assert_eq!((v["v"].as_u64(), v["schema"].as_u64()), (Some(28), Some(1)));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(maxarc(&["plane", "--q", "6"]).status.code(), Some(2));
    assert_eq!(maxarc(&["plane", "--q", "128"]).status.code(), Some(2));
    assert_eq!(
        maxarc(&["arc", "--q", "8", "--k", "4", "--kind", "hyperoval"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        maxarc(&["params", "--s", "0", "--k", "4"]).status.code(),
        Some(2)
    );
    assert_eq!(maxarc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(maxarc(&["plane"]).status.code(), Some(2));
}

#[test]
fn missing_file_exits_one() {
    let out = maxarc(&["verify-design", "--design", "/nonexistent/design.txt"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn q8_chain_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let (plane, arc, design, family) = setup(dir.path(), 8, 4);
    assert_eq!(fs::read_to_string(&arc).unwrap().lines().count(), 28);
    assert!(fs::read_to_string(&design)
        .unwrap()
        .starts_with("28 63 4\n"));
    assert_eq!(
        ok_stdout(&["exterior", "--plane", s(&plane), "--arc", s(&arc)])
            .lines()
            .count(),
        10
    );

    let p = json(&["--json", "verify-design", "--design", s(&design)]);
    assert_eq!((p["v"].as_u64(), p["r"].as_u64()), (Some(28), Some(9)));

    let mc = json(&[
        "--json",
        "max-compatible",
        "--design",
        s(&design),
        "--resolutions",
        s(&family),
    ]);
    assert_eq!(
        (mc["size"].as_u64(), mc["attains_bound"].as_bool()),
        (Some(10), Some(true))
    );

    let out = dir.path().join("rebuilt.txt");
    let rec = json(&[
        "--json",
        "reconstruct",
        "--design",
        s(&design),
        "--family",
        s(&family),
        "--out",
        s(&out),
    ]);
    assert_eq!(
        (rec["order"].as_u64(), rec["points"].as_u64()),
        (Some(8), Some(73))
    );
    assert_eq!(rec["dual"]["v"], 10);
    let vp = json(&["--json", "verify-plane", "--plane", s(&out)]);
    assert_eq!(
        (vp["ok"].as_bool(), vp["order"].as_u64()),
        (Some(true), Some(8))
    );

    let rank = json(&["rank", "--design", s(&design), "--family", s(&family)]);
    assert_eq!(
        (rank["rank"].as_u64(), rank["verdict"].as_str()),
        (Some(19), Some("at-bound"))
    );
    assert_eq!(rank["embeddability"]["plane_order"], 8);
}

#[test]
fn resolutions_out_dir_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let (plane, arc, design, family) = setup(dir.path(), 4, 2);
    let out_dir = dir.path().join("res");
    ok_stdout(&[
        "resolutions",
        "--plane",
        s(&plane),
        "--arc",
        s(&arc),
        "--out-dir",
        s(&out_dir),
    ]);
    let mut names: Vec<_> = fs::read_dir(&out_dir)
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(names.len(), 6);
    assert_eq!(names[0], "resolution-000.txt");
    let joined: Vec<String> = names
        .iter()
        .map(|n| fs::read_to_string(out_dir.join(n)).unwrap())
        .collect();
    assert_eq!(joined.join("\n"), fs::read_to_string(&family).unwrap());

    let files: Vec<String> = names
        .iter()
        .map(|n| out_dir.join(n).to_str().unwrap().to_owned())
        .collect();
    let mut args = vec![
        "--json",
        "max-compatible",
        "--design",
        s(&design),
        "--resolutions",
    ];
    args.extend(files.iter().map(String::as_str));
    assert_eq!(json(&args)["size"], 6);
}

#[test]
fn search_on_k6() {
    let dir = tempfile::tempdir().unwrap();
    let (_, _, design, _) = setup(dir.path(), 4, 2);
    let classes = json(&["--json", "search-classes", "--design", s(&design)]);
    assert_eq!(
        (classes["count"].as_u64(), classes["exhaustive"].as_bool()),
        (Some(15), Some(true))
    );
    let res = json(&["--json", "search-resolutions", "--design", s(&design)]);
    assert_eq!(res["count"], 6);
    let capped = json(&[
        "--json",
        "search-resolutions",
        "--design",
        s(&design),
        "--max-solutions",
        "2",
    ]);
    assert_eq!(
        (capped["count"].as_u64(), capped["exhaustive"].as_bool()),
        (Some(2), Some(false))
    );

    let all = write(
        dir.path(),
        "all.txt",
        &ok_stdout(&["search-resolutions", "--design", s(&design)]),
    );
    let mc = json(&[
        "--json",
        "max-compatible",
        "--design",
        s(&design),
        "--resolutions",
        s(&all),
    ]);
    assert_eq!(
        (mc["size"].as_u64(), mc["optimal"].as_bool()),
        (Some(6), Some(true))
    );
}

#[test]
fn output_independent_of_threads_and_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (_, _, design, _) = setup(dir.path(), 4, 2);
    let base = ok_stdout(&["search-resolutions", "--design", s(&design)]);
    for threads in ["1", "2", "4"] {
        for branching in [None, Some("--fewest-candidates")] {
            let mut args = vec![
                "--threads",
                threads,
                "search-resolutions",
                "--design",
                s(&design),
            ];
            args.extend(branching);
            assert_eq!(ok_stdout(&args), base, "threads {threads}, {branching:?}");
        }
    }
    assert_eq!(
        ok_stdout(&["pipeline", "--t", "3"]),
        ok_stdout(&["pipeline", "--t", "3"])
    );
    assert_eq!(
        ok_stdout(&["plane", "--q", "16"]),
        ok_stdout(&["plane", "--q", "16"])
    );
}

#[test]
fn mangled_plane_reports_witness() {
    let dir = tempfile::tempdir().unwrap();
    let text = ok_stdout(&["plane", "--q", "4"]);
    // move one incidence: line 0 loses its last point and gains an unused one
    let mut lines: Vec<Vec<usize>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(' ').map(|x| x.parse().unwrap()).collect())
        .collect();
    let spare = (0..21).find(|p| !lines[0].contains(p)).unwrap();
    *lines[0].last_mut().unwrap() = spare;
    let mut bad = String::from("21 21 5\n");
    for l in &lines {
        bad.push_str(
            &l.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" "),
        );
        bad.push('\n');
    }
    let path = write(dir.path(), "bad.txt", &bad);
    let out = maxarc(&["--json", "verify-plane", "--plane", s(&path)]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ok"], false);
    assert!(v["violation"].is_object(), "{v}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a projective plane"));

    let good = write(dir.path(), "good.txt", &text);
    assert!(ok_stdout(&["verify-plane", "--plane", s(&good)]).contains("order 4"));
}

#[test]
fn rank_for_non_design_input() {
    let dir = tempfile::tempdir().unwrap();
    let plane = write(dir.path(), "p.txt", &ok_stdout(&["plane", "--q", "4"]));
    let v = json(&["rank", "--design", s(&plane)]);
    assert_eq!(
        (v["rank"].as_u64(), v["verdict"].as_str()),
        (Some(10), Some("not-applicable"))
    );
    let v = json(&["rank", "--design", s(&plane), "--p", "3"]);
    assert_eq!(v["rank"], 21);
}
