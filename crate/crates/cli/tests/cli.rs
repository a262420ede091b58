use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

fn coarse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coarse")).args(args).current_dir(data()).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn out_dir() -> tempfile::TempDir {
    tempfile::tempdir().unwrap()
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn loads_a_three_point_space() {
    let o = coarse(&["load", "space", "three.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("3 points, metric axioms hold"));
}

#[test]
fn unknown_label_is_named() {
    let o = coarse(&["load", "map", "unknown_label.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`zz`"), "{}", stderr(&o));
}

#[test]
fn parse_errors_carry_the_position() {
    let o = coarse(&["load", "space", "broken.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
}

#[test]
fn inf_token_parses_and_gluing_joins_components() {
    let dir = out_dir();
    let o = coarse(&["glue", "split.json", "--pair", "a=c", "--out", arg(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let glued: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("glued.json")).unwrap()).unwrap();
    // b - a costs 1 and the glued edge a - c costs 1.
    assert_eq!(glued["dist"][1][2], 2);
    assert_eq!(glued["dist"][0][2], 1);
}

#[test]
fn unglued_components_stay_infinitely_far() {
    let dir = out_dir();
    let o = coarse(&["glue", "split.json", "--out", arg(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("glued.json")).unwrap();
    assert!(text.contains("\"inf\""));
}

#[test]
fn cokernel_reports_the_fibre_defect() {
    let o = coarse(&["cokernel", "fold.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("max |d(i1 y, i2 y') − 2| = 0 over image fibres"), "{}", stdout(&o));
}

#[test]
fn bindings_by_name() {
    let o = coarse(&["--map", "f=fold.json", "cokernel", "f"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = coarse(&["cokernel", "nothing"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no binding or file named `nothing`"));
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records().map(|rec| rec.unwrap().iter().map(str::to_string).collect()).collect()
}

#[test]
fn noncoexact_demo_radius_column() {
    let dir = out_dir();
    let o = coarse(&["demo", "noncoexact", "n_max=10", "t_max=10", "--out", arg(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let path = dir.path().join("filtration.csv");
    let header = fs::read_to_string(&path).unwrap().lines().next().unwrap().to_string();
    assert_eq!(header, "kappa,member_count,covering_radius_from_prev,verdict");
    let rows = csv_rows(&path);
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[0][3], "first");
    // The row at 2κ + 2 holds the radius of Eq_{2κ} inside Eq_{2κ+2}.
    for row in &rows[1..] {
        let k2: f64 = row[0].parse().unwrap();
        let kappa = k2 / 2.0 - 1.0;
        assert_eq!(row[2], format!("{}", 10.0 - kappa), "row {row:?}");
        assert_eq!(row[3], "within_budget");
    }
}

#[test]
fn demo_dumps_replay_through_the_cli() {
    let dir = out_dir();
    let o = coarse(&["demo", "noncoexact", "n_max=3", "t_max=4", "--out", arg(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let f = dir.path().join("f_plus.json");
    let g = dir.path().join("f_minus.json");
    let o = coarse(&["filtration", arg(&f), arg(&g)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let replay = stdout(&o);
    let csv = replay.split("# filtration.csv\n").nth(1).unwrap();
    let original = fs::read_to_string(dir.path().join("filtration.csv")).unwrap();
    assert!(csv.starts_with(&original), "{replay}");
}

#[test]
fn reruns_are_byte_identical() {
    let (a, b) = (out_dir(), out_dir());
    for d in [&a, &b] {
        let o = coarse(&["demo", "random", "points=10", "--seed", "11", "--out", arg(d.path())]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let o = coarse(&["demo", "noncoexact", "n_max=4", "t_max=5", "step=0.5", "--out", arg(d.path())]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let mut names: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() > 5);
    for n in names {
        assert_eq!(fs::read(a.path().join(&n)).unwrap(), fs::read(b.path().join(&n)).unwrap(), "{n:?}");
    }
}

#[test]
fn seeds_change_random_instances() {
    let (a, b) = (out_dir(), out_dir());
    coarse(&["demo", "random", "--seed", "1", "--out", arg(a.path())]);
    coarse(&["demo", "random", "--seed", "2", "--out", arg(b.path())]);
    assert_ne!(fs::read(a.path().join("f.json")).unwrap(), fs::read(b.path().join("f.json")).unwrap());
}

#[test]
fn empty_grid_gives_header_only() {
    let dir = out_dir();
    let o = coarse(&["--kappa-grid", "none", "filtration", "incl.json", "fold.json", "--out", arg(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("filtration.csv")).unwrap();
    assert_eq!(text, "kappa,member_count,covering_radius_from_prev,verdict\n");
}

#[test]
fn filler_on_an_exact_square() {
    let o = coarse(&[
        "filler", "id.json", "incl.json", "id.json", "incl.json", "--phi", "affine:1,0", "--psi", "affine:1,0",
        "--kappa", "0", "--r", "0",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let slacks: Vec<f64> = text
        .lines()
        .filter_map(|l| l.split("(slack ").nth(1))
        .map(|s| s.split(')').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(slacks.len(), 3, "{text}");
    assert!(slacks.iter().all(|&s| s >= 0.0), "{text}");
}

#[test]
fn exit_status_reflects_violations() {
    assert_eq!(coarse(&["certify", "incl.json", "--bound", "affine:1,0"]).status.code(), Some(0));
    let o = coarse(&["certify", "incl.json", "--bound", "affine:0.5,0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL U(1) = 1 > 0.5 at (a, b)"), "{}", stdout(&o));
    assert_eq!(coarse(&["filtration", "incl.json", "fold.json", "--r-max", "0.5"]).status.code(), Some(1));
    assert_eq!(coarse(&["certify", "missing.json"]).status.code(), Some(2));
    assert_eq!(coarse(&["demo", "noncoexact", "bogus=1"]).status.code(), Some(2));
}

#[test]
fn filler_preconditions_are_violations() {
    // Φ = 0.5 t does not upper-control the identity.
    let o = coarse(&["filler", "id.json", "incl.json", "id.json", "incl.json", "--phi", "affine:0.5,0"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stdout(&o).contains("precondition"));
}

#[test]
fn constructions_emit_provenance() {
    let dir = out_dir();
    let o = coarse(&["pushout", "incl.json", "fold.json", "--out", arg(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = csv_rows(&dir.path().join("provenance.csv"));
    assert_eq!(rows.len(), 11);
    assert!(rows.contains(&vec!["1/d".to_string(), "incl.json".to_string(), "d".to_string()]));
    for f in ["pushout.json", "i0.json", "i1.json", "i2.json"] {
        assert!(dir.path().join(f).is_file(), "{f}");
    }
    let o = coarse(&["load", "map", arg(&dir.path().join("i1.json"))]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn image_and_coequalizer() {
    let o = coarse(&["image", "fold.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("image: 3 of 4 target points"));
    let o = coarse(&["coeq", "incl.json", "fold.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = coarse(&["equalise", "incl.json", "fold.json", "--kappa", "0"]);
    assert!(stdout(&o).contains("1 of 3 points"), "{}", stdout(&o));
}
