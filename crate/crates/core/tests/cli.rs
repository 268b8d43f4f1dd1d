//! End-to-end tests of the `gkdna` binary: exit codes, artifact files,
//! and reproducibility.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const EXAMPLE_GRID: &str = include_str!("../fixtures/example_grid.txt");
const EXAMPLE_MATRIX: &str = include_str!("../fixtures/example_matrix.txt");
const EXAMPLE_CODE: &str = include_str!("../fixtures/example_code.txt");
const EXAMPLE_GC_SUBSET: &str = include_str!("../fixtures/example_gc_subset.txt");

fn gkdna(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gkdna"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn construct_prints_the_matrix_and_report() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("grid.txt"), EXAMPLE_GRID).unwrap();
    let out = gkdna(&["construct", "--grid", "grid.txt", "--out", "artifacts"], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.starts_with(EXAMPLE_MATRIX), "matrix not reproduced verbatim:\n{text}");
    assert!(text.contains("rank: 4"));
    assert!(text.contains("codewords: 256"));
    assert!(text.contains("min_distance: 4"));
    assert!(text.contains("rv_distance: 4"));
    assert!(text.contains("rc_distance: 4"));
    assert!(text.contains("gcw: 16a^8 + 224a^4b^4 + 16b^8"));

    // Written artifacts re-read through the tool's own parsers.
    let matrix_text = fs::read_to_string(tmp.path().join("artifacts/matrix.txt")).unwrap();
    assert_eq!(matrix_text, EXAMPLE_MATRIX);
    let parsed = gkdna::field::parse_matrix(&matrix_text).unwrap();
    assert_eq!(parsed.len(), 8);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("artifacts/report.json")).unwrap())
            .unwrap();
    assert_eq!(report["rank"], 4);
    assert_eq!(report["convention"], "exclude-coincident-pairs");
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("artifacts/manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["command"], "construct");
    assert!(manifest["artifacts"]["matrix.txt"].is_string());
}

#[test]
fn construct_rejects_odd_k_and_bad_files() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("odd.txt"), "2 3\n0 1 w\n1 w 0\n").unwrap();
    let out = gkdna(&["construct", "--grid", "odd.txt"], tmp.path());
    assert_eq!(out.status.code(), Some(2));

    fs::write(tmp.path().join("junk.txt"), "not a grid\n").unwrap();
    let out = gkdna(&["construct", "--grid", "junk.txt"], tmp.path());
    assert_eq!(out.status.code(), Some(2));

    let out = gkdna(&["construct", "--grid", "missing.txt"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn construct_reports_rank_zero_without_distances() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("zero.txt"), "2 2\n0 0\n0 0\n").unwrap();
    let out = gkdna(&["construct", "--grid", "zero.txt"], tmp.path());
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("rank: 0"));
    assert!(text.contains("distances: none (rank 0)"));
    assert!(!text.contains("min_distance"));
}

#[test]
fn enumeration_cap_comes_from_the_environment() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("grid.txt"), EXAMPLE_GRID).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_gkdna"))
        .args(["construct", "--grid", "grid.txt"])
        .env("GKDNA_ENUM_CAP", "10")
        .current_dir(tmp.path())
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("distances: unverified"), "{text}");
    // An explicit flag wins over the environment.
    let out = Command::new(env!("CARGO_BIN_EXE_gkdna"))
        .args(["construct", "--grid", "grid.txt", "--cap", "256"])
        .env("GKDNA_ENUM_CAP", "10")
        .current_dir(tmp.path())
        .output()
        .expect("binary runs");
    assert!(stdout(&out).contains("min_distance: 4"));
}

#[test]
fn construct_accepts_user_supplied_group_files() {
    let tmp = tempfile::tempdir().unwrap();
    // The dihedral group of order 4 written out as a Cayley table.
    let d4 = gkdna::group::dihedral_listed(2).unwrap();
    fs::write(tmp.path().join("outer.grp"), d4.to_file_string()).unwrap();
    fs::write(tmp.path().join("grid.txt"), EXAMPLE_GRID).unwrap();
    let out = gkdna(
        &[
            "construct",
            "--grid",
            "grid.txt",
            "--outer-group",
            "outer.grp",
            "--outer-subgroup",
            "0,1",
            "--outer-beta",
            "3",
        ],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).starts_with(EXAMPLE_MATRIX));

    // A beta that is not an involution is rejected.
    let c4: Vec<Vec<usize>> = (0..4).map(|i| (0..4).map(|j| (i + j) % 4).collect()).collect();
    let mut text = String::from("4\n");
    for row in &c4 {
        text.push_str(&row.iter().map(usize::to_string).collect::<Vec<_>>().join(" "));
        text.push('\n');
    }
    text.push_str("0\n");
    fs::write(tmp.path().join("c4.grp"), text).unwrap();
    let out = gkdna(
        &[
            "construct",
            "--grid",
            "grid.txt",
            "--outer-group",
            "c4.grp",
            "--outer-subgroup",
            "0,2",
            "--outer-beta",
            "1",
        ],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_exit_codes_follow_the_contract() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("code.txt"), EXAMPLE_CODE).unwrap();
    fs::write(tmp.path().join("subset.txt"), EXAMPLE_GC_SUBSET).unwrap();

    // The full code passes HD and RC at d = 4 under the exclusion convention.
    let out = gkdna(&["verify", "--code", "code.txt", "--d", "4", "--constraints", "hd,rc"], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("result: PASS"));
    assert!(stdout(&out).contains("convention: exclude-coincident-pairs"));

    // The GC subset passes HD, RC, and GC at w = 4.
    let out = gkdna(
        &["verify", "--code", "subset.txt", "--d", "4", "--constraints", "hd,rc,gc", "--w", "4"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    // Unreachable distance fails with a witness pair.
    let out = gkdna(&["verify", "--code", "code.txt", "--d", "9", "--constraints", "hd"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("witness:"));

    // JSON report.
    let out = gkdna(
        &["verify", "--code", "code.txt", "--d", "4", "--constraints", "hd,rc", "--json"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["size"], 256);
    assert_eq!(report["all_pass"], true);

    // Parse failures exit 2.
    fs::write(tmp.path().join("bad.txt"), "ACGU\n").unwrap();
    let out = gkdna(&["verify", "--code", "bad.txt", "--d", "4", "--constraints", "hd"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn search_flags_and_outputs() {
    let tmp = tempfile::tempdir().unwrap();

    // budget = 0 is a usage error.
    let out = gkdna(
        &["search", "--n", "4", "--k", "2", "--d", "4", "--budget", "0", "--seed", "1"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(2));

    // Odd n is a usage error.
    let out = gkdna(
        &["search", "--n", "3", "--k", "2", "--d", "4", "--budget", "10", "--seed", "1"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(2));

    // Without --out the result JSON goes to stdout.
    let out = gkdna(
        &["search", "--n", "4", "--k", "2", "--d", "4", "--seed", "7", "--budget", "50", "--restarts", "2"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let streamed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(streamed["evaluations_used"], 50);

    // A working run writes result JSON, a code dump, and a manifest.
    let args = [
        "search", "--n", "4", "--k", "2", "--d", "4", "--constraints", "hd,rc", "--seed", "7",
        "--budget", "3000", "--restarts", "10", "--out", "run/result.json",
    ];
    let out = gkdna(&args, tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let result: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("run/result.json")).unwrap())
            .unwrap();
    assert_eq!(result["feasible"], true);
    assert_eq!(result["bound"]["convention"], "exclude-coincident-pairs");

    // The dumped code re-verifies through the verify subcommand.
    let code_path = tmp.path().join("run/result.code.txt");
    assert!(code_path.exists());
    let out = gkdna(
        &["verify", "--code", "run/result.code.txt", "--d", "4", "--constraints", "hd,rc"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    // Identical flags reproduce identical bytes.
    let first = fs::read(tmp.path().join("run/result.json")).unwrap();
    let out = gkdna(&args, tmp.path());
    assert_eq!(out.status.code(), Some(0));
    let second = fs::read(tmp.path().join("run/result.json")).unwrap();
    assert_eq!(first, second);

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("run/result.manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["command"], "search");
    assert_eq!(manifest["seed"], 7);
}

#[test]
fn example_writes_artifacts_and_detects_tampering() {
    let tmp = tempfile::tempdir().unwrap();

    let out = gkdna(&["example", "--out", "demo"], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["matrix.txt", "code.txt", "gc_subset.txt", "gcw.txt", "manifest.json"] {
        assert!(tmp.path().join("demo").join(name).exists(), "{name} missing");
    }
    assert_eq!(
        fs::read_to_string(tmp.path().join("demo/gcw.txt")).unwrap().trim(),
        "16a^8 + 224a^4b^4 + 16b^8"
    );

    // Re-running reproduces identical scientific artifacts.
    let before = fs::read(tmp.path().join("demo/code.txt")).unwrap();
    let out = gkdna(&["example", "--out", "demo"], tmp.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(before, fs::read(tmp.path().join("demo/code.txt")).unwrap());

    // Existing artifacts pass the standalone check.
    let out = gkdna(&["example", "--out", "demo", "--verify-only"], tmp.path());
    assert_eq!(out.status.code(), Some(0));

    // Tampering flips the check to failure and names the artifact.
    let mut tampered = String::from_utf8(before).unwrap();
    tampered = tampered.replacen("AAAAAAAA", "AAAAAAAT", 1);
    fs::write(tmp.path().join("demo/code.txt"), tampered).unwrap();
    let out = gkdna(&["example", "--out", "demo", "--verify-only"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("code.txt"));
}
