//! Golden transcripts for the command-line tool.
//!
//! Each case runs the binary and compares the exit code, standard output and
//! standard error with `tests/golden/<name>.golden`. Set `UPDATE_GOLDEN=1` to
//! rewrite the files after an intentional change.

use std::path::{Path, PathBuf};
use std::process::Command;

const CASES: &[(&str, &str)] = &[
    ("enumerate_sym2", "enumerate {data}/sym2.json"),
    (
        "enumerate_machine",
        "enumerate {data}/sym2.json --format machine",
    ),
    (
        "check_element_regular",
        "check-element {data}/full22.json --f 2,3,0,0",
    ),
    (
        "check_element_all",
        "check-element {data}/full22.json --f 2,3,0,0 --property all",
    ),
    (
        "check_element_oracle_only",
        "check-element {data}/full22.json --f 0,1,0,1 --mode oracle",
    ),
    (
        "check_element_not_member",
        "check-element {data}/full22.json --f 0,2,0,0",
    ),
    (
        "check_semigroup_trivial",
        "check-semigroup {data}/singletons3.json --property regular --mode both",
    ),
    (
        "check_semigroup_not_regular",
        "check-semigroup {data}/full22.json --property regular",
    ),
    (
        "check_semigroup_inverse",
        "check-semigroup {data}/sym2.json --property inverse --format machine",
    ),
    (
        "check_semigroup_needs_identity",
        "check-semigroup {data}/no_identity.json --property unit-regular",
    ),
    (
        "greens_l_self",
        "greens {data}/full22.json --rel L --f 2,3,0,0 --g 2,3,0,0",
    ),
    (
        "greens_l_unrelated",
        "greens {data}/full22.json --rel L --f 2,3,0,0 --g 0,0,2,2",
    ),
    (
        "greens_d_machine",
        "greens {data}/full22.json --rel D --f 2,2,0,0 --g 1,1,3,3 --format machine",
    ),
    (
        "greens_j",
        "greens {data}/full22.json --rel J --f 0,0,2,2 --g 1,0,3,2",
    ),
    ("greens_egg_box", "greens {data}/single3.json --egg-box"),
    (
        "greens_missing_g",
        "greens {data}/full22.json --rel L --f 2,3,0,0",
    ),
    ("lift_default", "lift {data}/full22.json --alpha 1,0"),
    (
        "lift_basepoints",
        "lift {data}/full22.json --alpha 1,1 --basepoints 1,3",
    ),
    (
        "lift_bad_basepoint",
        "lift {data}/full22.json --alpha 1,1 --basepoints 2,3",
    ),
    ("verify_max3", "verify --max-n 3 --seed 7"),
    (
        "verify_unknown_suite",
        "verify --max-n 2 --suite no-such-suite",
    ),
    ("verify_bad_max_n", "verify --max-n 0"),
    ("parse_error", "enumerate {data}/malformed.json"),
    ("not_closed", "enumerate {data}/not_closed.json"),
    ("missing_file", "enumerate {data}/absent.json"),
    ("bad_map", "check-element {data}/full22.json --f 2,x,0,0"),
    (
        "bad_mode",
        "check-semigroup {data}/full22.json --mode sometimes",
    ),
];

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

struct Transcript {
    exit: i32,
    stdout: String,
    stderr: String,
}

impl Transcript {
    fn render(&self) -> String {
        format!(
            "exit: {}\n--- stderr\n{}--- stdout\n{}",
            self.exit, self.stderr, self.stdout
        )
    }
}

fn run(args: &str) -> Transcript {
    let data = data_dir();
    let argv: Vec<String> = args
        .split_whitespace()
        .map(|a| a.replace("{data}", data.to_str().unwrap()))
        .collect();
    let out = Command::new(env!("CARGO_BIN_EXE_partsemi"))
        .args(&argv)
        .output()
        .expect("binary runs");
    let scrub = |b: &[u8]| String::from_utf8_lossy(b).replace(data.to_str().unwrap(), "{data}");
    Transcript {
        exit: out.status.code().expect("exit code"),
        stdout: scrub(&out.stdout),
        stderr: scrub(&out.stderr),
    }
}

#[test]
fn golden_transcripts() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut mismatches = Vec::new();
    for (name, args) in CASES {
        let got = format!("$ partsemi {args}\n{}", run(args).render());
        let path = golden_dir().join(format!("{name}.golden"));
        if update {
            std::fs::write(&path, &got).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path)
            .unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
        if want != got {
            mismatches.push(format!("{name}:\n--- want\n{want}\n--- got\n{got}"));
        }
    }
    assert!(mismatches.is_empty(), "{}", mismatches.join("\n"));
}

#[test]
fn exit_code_contract() {
    let expect = [
        ("check_semigroup_trivial", 0),
        ("check_semigroup_not_regular", 1),
        ("greens_l_self", 0),
        ("greens_l_unrelated", 1),
        ("verify_max3", 0),
        ("check_element_not_member", 2),
        ("parse_error", 2),
        ("not_closed", 2),
        ("bad_map", 2),
        ("verify_unknown_suite", 2),
    ];
    for (name, code) in expect {
        let args = CASES.iter().find(|(n, _)| *n == name).unwrap().1;
        assert_eq!(run(args).exit, code, "{name}");
    }
}

#[test]
fn diagnostics_go_to_stderr() {
    let t = run("enumerate {data}/not_closed.json");
    assert!(t.stdout.is_empty());
    assert!(t.stderr.starts_with("error: validation error"));
    assert!(t.stderr.contains("missing"));
    let t = run("enumerate {data}/malformed.json");
    assert!(t.stderr.contains("line 4"));
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.ndjson");
    let t = run(&format!(
        "verify --max-n 2 --format machine --out {}",
        path.display()
    ));
    assert_eq!(t.exit, 0);
    assert!(t.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        for key in ["suite", "instance", "verdict", "millis", "checks"] {
            assert!(v.get(key).is_some(), "{key} missing in {line}");
        }
    }
}

#[test]
fn machine_reports_are_deterministic_apart_from_timing() {
    let strip = |s: String| -> Vec<serde_json::Value> {
        s.lines()
            .map(|l| {
                let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
                v.as_object_mut().unwrap().remove("millis");
                v
            })
            .collect()
    };
    let a = run("verify --max-n 3 --seed 11 --format machine");
    let b = run("verify --max-n 3 --seed 11 --format machine");
    assert_eq!(strip(a.stdout), strip(b.stdout));
}

#[test]
fn in_process_entry_point_matches_the_binary() {
    let data = data_dir();
    let file = data.join("sym2.json");
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = partsemi::cli::run(
        ["partsemi", "enumerate", file.to_str().unwrap()],
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0);
    assert_eq!(
        String::from_utf8(out).unwrap(),
        run("enumerate {data}/sym2.json").stdout
    );
}
