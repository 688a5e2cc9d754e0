use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sphereloci"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str], out: &Path) -> Output {
    bin().args(args).arg("--out").arg(out).output().unwrap()
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("job.json");
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn trace_writes_outputs_and_manifest() {
    let out = tempfile::tempdir().unwrap();
    let config = fixture("tangent_rectangle.json");
    let o = run(&["trace", "--config", config.to_str().unwrap(), "--resolution", "128"], out.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let svg = std::fs::read_to_string(out.path().join("tangent_rectangle.svg")).unwrap();
    let manifest = std::fs::read_to_string(out.path().join("tangent_rectangle.manifest.txt")).unwrap();
    let polylines: usize = manifest
        .lines()
        .find_map(|l| l.strip_prefix("polylines: "))
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(svg.matches("<path").count(), polylines);
    assert_eq!(svg.matches("class=\"simplex\"").count(), 2);
    assert!(manifest.contains("residual_above_tolerance: 0"));
    assert!(!manifest.contains("elapsed"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("elapsed "));
    let csv = std::fs::read_to_string(out.path().join("tangent_rectangle.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("x,y,residual,cos_sq"));
}

#[test]
fn mesh_reports_euler_characteristic() {
    let out = tempfile::tempdir().unwrap();
    let config = fixture("orthogonal_torus_surface.json");
    let o = run(&["mesh", "--config", config.to_str().unwrap(), "--resolution", "48"], out.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let manifest = std::fs::read_to_string(out.path().join("orthogonal_torus_surface.manifest.txt")).unwrap();
    assert!(manifest.contains("euler_characteristic: 0\n"), "{manifest}");
    let obj = std::fs::read_to_string(out.path().join("orthogonal_torus_surface.obj")).unwrap();
    assert!(obj.lines().any(|l| l.starts_with("f ")));
}

#[test]
fn degenerate_simplex_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"dim": 3, "simplexes": [[[0,0,0],[1,1,1],[2,2,2]], [[0,1,0],[1,0,0],[0,0,1]]],
            "locus": {"kind": "orthogonal"}, "grid": {"box": [[-1,1],[-1,1],[-1,1]], "resolution": 8}}"#,
    );
    let o = run(&["mesh", "--config", config.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("degenerate"));
}

#[test]
fn identical_simplexes_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"dim": 2, "simplexes": [[[0,0],[1,0]], [[1,0],[0,0]]],
            "locus": {"kind": "tangent"}, "grid": {"box": [[-1,1],[-1,1]], "resolution": 8}}"#,
    );
    assert_eq!(run(&["trace", "--config", config.to_str().unwrap()], dir.path()).status.code(), Some(2));
}

#[test]
fn empty_zero_set_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    // the bisector x = 0 never enters this box
    let config = write_config(
        dir.path(),
        r#"{"dim": 2, "simplexes": [[[-1,0],[1,0]], [[0,1],[0,2]]],
            "locus": {"kind": "orthogonal"}, "grid": {"box": [[5,6],[5,6]], "resolution": 16}}"#,
    );
    let o = run(&["trace", "--config", config.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let manifest = std::fs::read_to_string(dir.path().join("job.manifest.txt")).unwrap();
    assert!(manifest.contains("status: empty_zero_set"));
}

#[test]
fn bad_config_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), r#"{"dim": 2, "simplexes": "nope"}"#);
    let o = run(&["trace", "--config", config.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("simplexes"));
    let missing = run(&["trace", "--config", "/nonexistent/job.json"], dir.path());
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn eval_prints_locus_values() {
    let dir = tempfile::tempdir().unwrap();
    let config = fixture("orthogonal_perpendicular_bisector.json");
    let o = run(&["eval", "--config", config.to_str().unwrap(), "--point", "0,0.5"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains('H'), "{text}");
}

#[test]
fn classify_prints_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = fixture("tangent_concyclic.json");
    let o = run(&["classify", "--config", config.to_str().unwrap()], dir.path());
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("concyclic"));
}
