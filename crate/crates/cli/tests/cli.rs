use std::fs;
use std::process::{Command, Output};

fn gramqfi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gramqfi"))
        .args(args)
        .env_remove("GRAMQFI_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Header and data rows of a CSV produced by the CLI.
fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# gramqfi"));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    (header, rows)
}

fn column(text: &str, name: &str) -> Vec<f64> {
    let (header, rows) = parse_csv(text);
    let k = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[k].parse().unwrap()).collect()
}

fn sweep_column(args: &[&str], name: &str) -> Vec<f64> {
    let out = gramqfi(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    column(&stdout(&out), name)
}

#[test]
fn eval_matches_reference_value() {
    let out = gramqfi(&[
        "eval",
        "--model",
        "cat-params",
        "--c",
        "0.5",
        "--alpha",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let h = column(&stdout(&out), "H_c_c")[0];
    assert!((h - 1.1482552718150076).abs() < 1e-10);
}

#[test]
fn coherent_state_displacement_is_four() {
    let out = gramqfi(&[
        "eval",
        "--model",
        "displacement",
        "--c",
        "0",
        "--alpha",
        "1.3",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let record: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let h = record["h"][0][0].as_f64().unwrap();
    assert!((h - 4.0).abs() < 1e-10);
    assert_eq!(record["model"], "displacement");
}

#[test]
fn exit_codes() {
    let cases: &[(&[&str], i32)] = &[
        (
            &["eval", "--model", "cat-params", "--c", "1", "--alpha", "1"],
            3,
        ),
        (
            &[
                "eval",
                "--model",
                "cat-params",
                "--c",
                "-0.2",
                "--alpha",
                "1",
            ],
            3,
        ),
        (&["eval", "--model", "cat-params", "--c", "0.5"], 2),
        (
            &[
                "eval",
                "--model",
                "cat-params",
                "--c",
                "0.5",
                "--alpha",
                "1",
                "--r",
                "1",
            ],
            2,
        ),
        (
            &["eval", "--model", "nope", "--c", "0.5", "--alpha", "1"],
            2,
        ),
        (
            &["eval", "--model", "cat-params", "--c", "x", "--alpha", "1"],
            2,
        ),
        (
            &[
                "eval",
                "--model",
                "cat-params",
                "--c",
                "0.5",
                "--alpha",
                "1",
                "--weight",
                "1,0",
            ],
            2,
        ),
        (
            &[
                "sweep",
                "--model",
                "cat-lossy",
                "--gammabar",
                "0.1",
                "--sweep",
                "alpha0",
                "--grid",
                "0.1:6:1",
            ],
            2,
        ),
        (
            &[
                "sweep",
                "--model",
                "cat-lossy",
                "--gammabar",
                "0.1",
                "--alpha0",
                "1",
                "--sweep",
                "alpha0",
                "--grid",
                "0.1:6:3",
            ],
            2,
        ),
        (
            &[
                "sweep",
                "--model",
                "cat-lossy",
                "--gammabar",
                "0.1",
                "--sweep",
                "r",
                "--grid",
                "0:1:3",
            ],
            2,
        ),
        (
            &[
                "sweep",
                "--model",
                "cat-lossy",
                "--gammabar",
                "0.1",
                "--sweep",
                "alpha0",
                "--grid",
                "0.1:6:3",
                "--columns",
                "H,bogus",
            ],
            2,
        ),
        (
            &[
                "sweep",
                "--model",
                "cat-lossy",
                "--gammabar",
                "0.1",
                "--sweep",
                "alpha0",
                "--grid",
                "0.1:6:3",
                "--out",
                "/nonexistent-dir/out.csv",
            ],
            5,
        ),
        (&["validate", "--only", "nope"], 2),
    ];
    for (args, code) in cases {
        let out = gramqfi(args);
        assert_eq!(out.status.code(), Some(*code), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?} printed no diagnostic");
    }
}

#[test]
fn sweep_rows_equal_fresh_evaluations() {
    let out = gramqfi(&[
        "sweep",
        "--model",
        "cat-params",
        "--alpha",
        "1.2",
        "--sweep",
        "c",
        "--grid",
        "0:0.9:7",
    ]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(rows.len(), 7);
    for row in rows {
        let c = &row[header.iter().position(|h| h == "c").unwrap()];
        let single = gramqfi(&["eval", "--model", "cat-params", "--c", c, "--alpha", "1.2"]);
        let (single_header, single_rows) = parse_csv(&stdout(&single));
        assert_eq!(single_header, header);
        assert_eq!(single_rows[0], row);
    }
}

#[test]
fn sweep_files_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = ["a.csv", "b.csv"]
        .iter()
        .map(|n| dir.path().join(n))
        .collect();
    for path in &paths {
        let out = gramqfi(&[
            "sweep",
            "--model",
            "cat-lossy",
            "--gammabar",
            "0.3",
            "--sweep",
            "alpha0",
            "--grid",
            "0.1:4:64",
            "--columns",
            "alpha0,nbar0,nbar,H",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let a = fs::read(&paths[0]).unwrap();
    assert_eq!(a, fs::read(&paths[1]).unwrap());
    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    let meta = lines.next().unwrap();
    assert!(meta.contains("model=cat-lossy") && meta.contains("sweep=alpha0"));
    let fixed = meta
        .split(' ')
        .find_map(|f| f.strip_prefix("gammabar="))
        .unwrap();
    assert_eq!(fixed.parse::<f64>().unwrap(), 0.3);
    assert_eq!(lines.next().unwrap(), "alpha0,nbar0,nbar,H");
    assert_eq!(lines.count(), 64);
}

fn argmax(v: &[f64]) -> usize {
    (0..v.len()).fold(0, |best, k| if v[k] > v[best] { k } else { best })
}

#[test]
fn lossy_cat_curves_have_shrinking_interior_maxima() {
    let mut peaks = Vec::new();
    for g in ["0", "0.1", "0.2", "0.3", "0.5"] {
        let args = [
            "sweep",
            "--model",
            "cat-lossy",
            "--gammabar",
            g,
            "--sweep",
            "alpha0",
            "--grid",
            "0.1:6:150",
            "--columns",
            "nbar0,H",
        ];
        let n0 = sweep_column(&args, "nbar0");
        let h = sweep_column(&args, "H");
        if g == "0" {
            assert!(h.windows(2).all(|w| w[1] > w[0]));
            continue;
        }
        let k = argmax(&h);
        assert!(
            k > 0 && k < h.len() - 1,
            "gammabar={g}: no interior maximum"
        );
        peaks.push(n0[k]);
        if g == "0.5" {
            assert!((h[h.len() - 1] / 4.0 - 1.0).abs() < 0.05);
        }
    }
    assert!(peaks.windows(2).all(|w| w[1] < w[0]), "{peaks:?}");
}

#[test]
fn squeezed_curves_saturate_and_cat_curves_fall_to_four() {
    for (g, gamma) in [("0.1", 0.1f64), ("0.5", 0.5)] {
        let limit = 4.0 / (1.0 - (-gamma).exp());
        let h = sweep_column(
            &[
                "sweep",
                "--model",
                "squeezed",
                "--gammabar",
                g,
                "--sweep",
                "r",
                "--grid",
                "0:3:60",
            ],
            "H",
        );
        assert!(h.windows(2).all(|w| w[1] >= w[0]));
        assert!(h.iter().all(|&v| v < limit));
        assert!(h[h.len() - 1] > 0.95 * limit);
        let cat = sweep_column(
            &[
                "sweep",
                "--model",
                "cat-lossy",
                "--gammabar",
                g,
                "--sweep",
                "alpha0",
                "--grid",
                "0.1:8:120",
            ],
            "H",
        );
        let k = argmax(&cat);
        assert!(k > 0 && cat[k] > cat[cat.len() - 1]);
        assert!((cat[cat.len() - 1] / 4.0 - 1.0).abs() < 0.05);
    }
}

#[test]
fn validate_single_check_passes() {
    let out = gramqfi(&["validate", "--only", "weak-commutativity"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("[PASS] weak-commutativity"));
    assert!(text.contains("1/1 checks passed"));
}

#[test]
fn tolerance_below_round_off_fails() {
    let out = gramqfi(&["validate", "--only", "closed-form-halpha", "--tol", "1e-17"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("[FAIL] closed-form-halpha"));
    let env = Command::new(env!("CARGO_BIN_EXE_gramqfi"))
        .args(["validate", "--only", "closed-form-halpha"])
        .env("GRAMQFI_TOL", "1e-17")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(1));
}
