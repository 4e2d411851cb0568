use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use frieze_core::{canonical_family, FriezeGrid, GroundSet};
use tempfile::TempDir;

const SAMPLE_ROWS: [[i64; 8]; 4] = [
    [4, 3, 2, 5, 1, 4, 5, 1],
    [6, 5, 4, 3, 3, 7, 4, 2],
    [9, 8, 1, 8, 3, 4, 7, 1],
    [13, 1, 2, 6, 1, 6, 2, 1],
];

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn frieze(args: &[&str]) -> Output {
    frieze_env(args, &[])
}

fn frieze_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_frieze"));
    cmd.args(args).env_remove("FRIEZE_ORACLE_BUDGET");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
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

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn gen(dir: &TempDir, name: &str, n: usize, steps: usize, seed: u64) -> String {
    let o = frieze(&[
        "gen",
        "--n",
        &n.to_string(),
        "--steps",
        &steps.to_string(),
        "--seed",
        &seed.to_string(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    write(dir, name, &stdout(&o))
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn validate_reports_the_canonical_count() {
    let dir = TempDir::new().unwrap();
    let f = gen(&dir, "f.json", 6, 0, 0);
    let o = frieze(&["validate", &f]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "maximal weakly separated (10 = 3·6−8)");
    for p in ["definition", "cases", "chords"] {
        assert_eq!(code(&frieze(&["validate", &f, "--predicate", p])), 0, "{p}");
    }
    let o = frieze(&["validate", &f, "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["maximal"], true);
    assert_eq!(v["size"], 10);
}

#[test]
fn validate_names_the_crossing_pair() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "x.json",
        r#"{"n": 6, "triangles": [[1,3,5],[2,4,6]]}"#,
    );
    for p in ["definition", "cases", "chords"] {
        let o = frieze(&["validate", &f, "--predicate", p]);
        assert_eq!(code(&o), 1, "{p}");
        assert!(
            stdout(&o).contains("{1,3,5} crosses {2,4,6}"),
            "{}",
            stdout(&o)
        );
    }
    let v = json(&frieze(&["validate", &f, "--format", "json"]));
    assert_eq!(
        v["crossing_pair"],
        serde_json::json!([[1, 3, 5], [2, 4, 6]])
    );
}

#[test]
fn validate_flags_non_maximal_families() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "s.json",
        r#"{"n": 7, "triangles": [[1,2,3],[2,3,4]]}"#,
    );
    let o = frieze(&["validate", &f]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("not maximal"), "{}", stdout(&o));
}

#[test]
fn malformed_inputs_are_usage_errors() {
    let dir = TempDir::new().unwrap();
    let truncated = write(&dir, "t.json", r#"{"n": 6, "triangles": [[1,2"#);
    assert_eq!(code(&frieze(&["validate", &truncated])), 2);
    let unknown = write(&dir, "u.json", r#"{"n": 6, "triangles": [], "colour": 1}"#);
    assert_eq!(code(&frieze(&["validate", &unknown])), 2);
    let unsorted = write(&dir, "o.json", r#"{"n": 6, "triangles": [[3,2,1]]}"#);
    assert_eq!(code(&frieze(&["validate", &unsorted])), 2);
    assert_eq!(code(&frieze(&["validate", "/nonexistent/family.json"])), 2);
    let f = gen(&dir, "f.json", 6, 0, 0);
    assert_eq!(code(&frieze(&["validate", &f, "--predicate", "vibes"])), 2);
    assert_eq!(code(&frieze(&["frieze", &f, "--method", "guess"])), 2);
    assert_eq!(code(&frieze(&["no-such-command"])), 2);
}

#[test]
fn analyze_lists_the_polygon_from_x_plus_one_to_x_minus_one() {
    let dir = TempDir::new().unwrap();
    for (n, seed) in [(7, 1), (8, 2), (9, 3)] {
        let f = gen(&dir, "f.json", n, 25, seed);
        let ground = GroundSet::new(n).unwrap();
        for x in 1..=n {
            let o = frieze(&["analyze", &f, "--x", &x.to_string(), "--format", "json"]);
            assert_eq!(code(&o), 0, "{}", stderr(&o));
            let v = json(&o);
            assert_eq!(v["structure"]["violations"], serde_json::json!([]));
            let tp: Vec<usize> = serde_json::from_value(v["triangulation_points"].clone()).unwrap();
            assert_eq!(tp[0], ground.shift(x, 1));
            assert_eq!(*tp.last().unwrap(), ground.shift(x, -1));
            let text = stdout(&frieze(&["analyze", &f, "--x", &x.to_string()]));
            assert!(text.contains("structure: ok"), "{text}");
        }
    }
}

#[test]
fn analyze_rejects_bad_points_and_families() {
    let dir = TempDir::new().unwrap();
    let f = gen(&dir, "f.json", 8, 5, 1);
    assert_eq!(code(&frieze(&["analyze", &f, "--x", "0"])), 2);
    assert_eq!(code(&frieze(&["analyze", &f, "--x", "9"])), 2);
    let small = write(
        &dir,
        "s.json",
        r#"{"n": 7, "triangles": [[1,2,3],[2,3,4]]}"#,
    );
    assert_eq!(code(&frieze(&["analyze", &small, "--x", "1"])), 1);
}

#[test]
fn frieze_of_the_sample_family_is_the_mirror_image_of_the_sample() {
    let o = frieze(&["frieze", fixture("sample_family.json").to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    let rows: Vec<Vec<i64>> = text
        .lines()
        .skip(3)
        .take(4)
        .map(|l| l.split_whitespace().map(|t| t.parse().unwrap()).collect())
        .collect();
    // Read right to left with a row-dependent offset, the rows are the sample's.
    for (k, row) in SAMPLE_ROWS.iter().enumerate() {
        let mirrored: Vec<i64> = (0..8).map(|i| rows[k][(8 + 3 - k + 8 - i) % 8]).collect();
        assert_eq!(&mirrored[..], &row[..], "row {}", k + 1);
    }
    assert!(text.contains("SL3: yes (48 of 48"), "{text}");
    assert!(text.contains("tame: yes (32 of 32"), "{text}");
    assert!(text.contains("integral: yes"), "{text}");
}

#[test]
fn frieze_methods_agree_and_json_round_trips_through_check() {
    let dir = TempDir::new().unwrap();
    for (n, seed) in [(6, 4), (7, 5), (8, 6)] {
        let f = gen(&dir, "f.json", n, 20, seed);
        let a = frieze(&["frieze", &f, "--format", "json"]);
        let b = frieze(&["frieze", &f, "--format", "json", "--method", "oracle"]);
        assert_eq!(code(&a), 0, "{}", stderr(&a));
        assert_eq!(stdout(&a), stdout(&b));
        assert!(stderr(&a).contains("SL3: yes"), "{}", stderr(&a));
        let v = json(&a);
        assert_eq!(v["schema_version"], 1);
        let g = write(&dir, "g.json", &stdout(&a));
        let o = frieze(&["check-frieze", &g]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
        assert!(stdout(&o).contains("tame: yes"));
        let text = frieze(&["frieze", &f]);
        let r = write(&dir, "r.txt", &stdout(&text));
        assert_eq!(code(&frieze(&["check-frieze", &r])), 0);
    }
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = gen(&dir, "a.json", 9, 30, 77);
    let b = gen(&dir, "b.json", 9, 30, 77);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    for args in [
        vec!["frieze", &a],
        vec!["analyze", &a, "--x", "4", "--format", "json"],
    ] {
        assert_eq!(frieze(&args).stdout, frieze(&args).stdout);
    }
}

#[test]
fn check_frieze_accepts_the_sample_file() {
    let o = frieze(&[
        "check-frieze",
        fixture("sample_frieze.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(
        text.contains("SL3: yes") && text.contains("tame: yes"),
        "{text}"
    );
    let v = json(&frieze(&[
        "check-frieze",
        fixture("sample_frieze.json").to_str().unwrap(),
        "--format",
        "json",
    ]));
    assert_eq!(v["valid"], true);
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn check_frieze_reports_perturbed_coordinates() {
    let dir = TempDir::new().unwrap();
    let text = std::fs::read_to_string(fixture("sample_frieze.json")).unwrap();
    let perturbed = text.replacen("\"7\"", "\"8\"", 1);
    assert_ne!(text, perturbed);
    let f = write(&dir, "p.json", &perturbed);
    let o = frieze(&["check-frieze", &f]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("diamond at diagonal"), "{}", stdout(&o));
    assert!(stderr(&o).contains("row"), "{}", stderr(&o));
}

#[test]
fn check_frieze_rejects_width_zero_and_ragged_files() {
    let dir = TempDir::new().unwrap();
    let w0 = write(&dir, "w0.json", r#"{"n": 4, "rows": []}"#);
    assert_eq!(code(&frieze(&["check-frieze", &w0])), 2);
    let ragged = write(&dir, "r.json", r#"{"n": 6, "rows": [["1","2"],["1"]]}"#);
    assert_eq!(code(&frieze(&["check-frieze", &ragged])), 2);
    let junk = write(&dir, "j.txt", "not a frieze\n");
    assert_eq!(code(&frieze(&["check-frieze", &junk])), 2);
}

#[test]
fn oracle_values() {
    let dir = TempDir::new().unwrap();
    let fam = fixture("sample_family.json");
    let fam = fam.to_str().unwrap();
    let o = frieze(&["oracle", fam, "--triangle", "3,5,8"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "{3,5,8} = 1");

    // v{x-1, x+1, x+2} is Δ^1(x-1), drawn in the top row at position x+1.
    let grid =
        FriezeGrid::from_json(&stdout(&frieze(&["frieze", fam, "--format", "json"]))).unwrap();
    let g = GroundSet::new(8).unwrap();
    for x in 1..=8 {
        let t = format!("{},{},{}", g.shift(x, -1), g.shift(x, 1), g.shift(x, 2));
        let v = json(&frieze(&[
            "oracle",
            fam,
            "--triangle",
            &t,
            "--format",
            "json",
        ]));
        assert_eq!(
            v["value"],
            grid.delta(4, x as isize + 1).to_string(),
            "x={x}"
        );
    }

    assert_eq!(code(&frieze(&["oracle", fam, "--triangle", "1,1,3"])), 2);
    assert_eq!(code(&frieze(&["oracle", fam, "--triangle", "1,2"])), 2);
    assert_eq!(code(&frieze(&["oracle", fam, "--triangle", "1,2,99"])), 2);
    let small = write(&dir, "s.json", r#"{"n": 7, "triangles": [[1,2,3]]}"#);
    assert_eq!(code(&frieze(&["oracle", &small, "--triangle", "1,2,4"])), 1);
}

#[test]
fn oracle_budget_comes_from_the_environment() {
    let fam = fixture("sample_family.json");
    let fam = fam.to_str().unwrap();
    let o = frieze_env(
        &["oracle", fam, "--triangle", "2,5,7"],
        &[("FRIEZE_ORACLE_BUDGET", "0")],
    );
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("budget of 0"), "{}", stderr(&o));
    assert!(
        stderr(&o).contains("FRIEZE_ORACLE_BUDGET"),
        "{}",
        stderr(&o)
    );
    let o = frieze_env(
        &["oracle", fam, "--triangle", "2,5,7"],
        &[("FRIEZE_ORACLE_BUDGET", "lots")],
    );
    assert_eq!(code(&o), 2);
    let o = frieze_env(
        &["oracle", fam, "--triangle", "2,5,7"],
        &[("FRIEZE_ORACLE_BUDGET", "5000")],
    );
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "{2,5,7} = 10");
}

#[test]
fn gen_without_steps_is_the_canonical_family() {
    let o = frieze(&["gen", "--n", "8", "--steps", "0"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        canonical_family(GroundSet::new(8).unwrap()).to_json()
    );
    assert_eq!(code(&frieze(&["gen", "--n", "5"])), 2);
    assert_eq!(code(&frieze(&["gen", "--n", "200"])), 2);
}

#[test]
fn gen_realizes_an_analyzed_star_graph() {
    let dir = TempDir::new().unwrap();
    for (n, seed) in [(7, 8), (8, 9), (10, 10)] {
        let f = gen(&dir, "f.json", n, 30, seed);
        for x in [1, n / 2, n] {
            let sg = dir.path().join("g.json");
            let sg = sg.to_str().unwrap();
            let first = frieze(&["analyze", &f, "--x", &x.to_string(), "--star-graph-out", sg]);
            assert_eq!(code(&first), 0);
            let o = frieze(&["gen", "--star-graph-file", sg]);
            assert_eq!(code(&o), 0, "{}", stderr(&o));
            let realized = write(&dir, "r.json", &stdout(&o));
            assert_eq!(code(&frieze(&["validate", &realized])), 0);
            let again = frieze(&["analyze", &realized, "--x", &x.to_string()]);
            assert_eq!(stdout(&again), stdout(&first));
        }
    }
}

#[test]
fn gen_names_the_violated_condition() {
    let dir = TempDir::new().unwrap();
    // A bare cycle around x = 1 is no triangulation.
    let g = write(
        &dir,
        "g.json",
        r#"{"x": 1, "n": 8, "edges": [[2,3],[3,4],[4,5],[5,6],[6,7],[7,8],[8,2]]}"#,
    );
    let o = frieze(&["gen", "--star-graph-file", &g]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("condition ("), "{}", stderr(&o));
    let bad = write(&dir, "b.json", r#"{"x": 1, "n": 8, "edges": [[2,2]]}"#);
    assert_eq!(code(&frieze(&["gen", "--star-graph-file", &bad])), 2);
}

#[test]
fn mutate_records_and_replays_traces() {
    let dir = TempDir::new().unwrap();
    let f = gen(&dir, "f.json", 8, 10, 3);
    let rec = frieze(&["mutate", &f, "--random", "12", "--seed", "4"]);
    assert_eq!(code(&rec), 0);
    assert_eq!(stdout(&rec).lines().count(), 12);
    let trace = write(&dir, "t.txt", &format!("# recorded\n\n{}", stdout(&rec)));
    let o = frieze(&["mutate", &f, "--replay", &trace]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o), stdout(&rec));
    let v = json(&frieze(&[
        "mutate", &f, "--replay", &trace, "--format", "json",
    ]));
    assert_eq!(v["moves"].as_array().unwrap().len(), 12);
    assert_eq!(v["triangles"].as_array().unwrap().len(), 16);

    let first = stdout(&rec).lines().next().unwrap().to_string();
    let tampered = first.rsplit_once("value=").unwrap().0.to_string() + "value=1000";
    let t = write(&dir, "bad.txt", &tampered);
    assert_eq!(code(&frieze(&["mutate", &f, "--replay", &t])), 1);
    let garbled = write(&dir, "g.txt", "3:(1,2 removed=");
    assert_eq!(code(&frieze(&["mutate", &f, "--replay", &garbled])), 2);
    assert_eq!(code(&frieze(&["mutate", &f])), 2);
}

#[test]
fn generate_validate_analyze_frieze_check_chain() {
    let dir = TempDir::new().unwrap();
    for n in [6, 9, 11] {
        let f = gen(&dir, "f.json", n, 3 * n, n as u64);
        assert_eq!(code(&frieze(&["validate", &f])), 0);
        assert_eq!(code(&frieze(&["analyze", &f, "--x", "2"])), 0);
        let o = frieze(&["frieze", &f, "--format", "json"]);
        assert_eq!(code(&o), 0);
        let g = write(&dir, "g.json", &stdout(&o));
        assert_eq!(code(&frieze(&["check-frieze", &g])), 0);
    }
}
