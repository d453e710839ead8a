use std::fs;
use std::process::{Command, Output};

fn ise_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ise-lab"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn single_vertex_profile() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    let o = ise_lab(&[
        "sample-profile",
        "--n",
        "1",
        "--seed",
        "0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(
        text.lines()
            .filter(|l| !l.starts_with('#'))
            .collect::<Vec<_>>(),
        ["i,delta,m,s", "0,1,1,1"]
    );
}

#[test]
fn sampling_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = (0..2)
        .map(|k| dir.path().join(format!("{k}.csv")))
        .collect();
    for p in &paths {
        let o = ise_lab(&[
            "sample-profile",
            "--n",
            "20000",
            "--seed",
            "4",
            "--rescale",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        assert!(stdout(&o).contains("width"));
    }
    let a = fs::read(&paths[0]).unwrap();
    assert_eq!(a, fs::read(&paths[1]).unwrap());
    let last = String::from_utf8(a)
        .unwrap()
        .lines()
        .last()
        .unwrap()
        .to_string();
    let s: f64 = last.split(',').nth(3).unwrap().parse().unwrap();
    assert!((s - 1.0).abs() < 1e-12);
}

#[test]
fn count_and_moments() {
    assert_eq!(
        stdout(&ise_lab(&["count", "--profile", "−2:1:1,1,3,1"])).trim(),
        "3"
    );
    assert_eq!(
        stdout(&ise_lab(&["count", "--profile", "(1,1;3,1)"])).trim(),
        "3"
    );
    assert_eq!(
        stdout(&ise_lab(&[
            "moments",
            "--n",
            "2",
            "--p",
            "2",
            "--increment",
            "1"
        ]))
        .trim(),
        "1/2"
    );
    assert_eq!(
        stdout(&ise_lab(&[
            "moments", "--n", "5", "--p", "3", "--a", "1", "--b", "1"
        ]))
        .trim(),
        "0"
    );
}

#[test]
fn series_dump_is_exact() {
    let o = ise_lab(&["series", "--what", "trees", "--order", "5"]);
    let v: Vec<String> = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v, ["0/1", "1/1", "2/1", "5/1", "14/1", "42/1"]);
}

#[test]
fn verify_writes_a_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.json");
    let o = ise_lab(&[
        "verify",
        "--suite",
        "formula",
        "--level",
        "fast",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["gates"].as_array().unwrap().len(), 2);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(
        ise_lab(&["verify", "--suite", "bogus"]).status.code(),
        Some(2)
    );
    assert_eq!(
        ise_lab(&["sample-profile", "--n", "5", "--out", "x.csv"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ise_lab(&["count", "--profile", "1:2:0,1"]).status.code(),
        Some(2)
    );
}

#[test]
fn diffusion_paths_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let o = ise_lab(&[
            "sde",
            "--m0",
            "1",
            "--epsilon",
            "0.01",
            "--T",
            "1",
            "--dt",
            "0.001",
            "--seed",
            "7",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        fs::read(p).unwrap()
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}
