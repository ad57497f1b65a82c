use std::process::{Command, Output};

use xyz_lab::report::{parse_jsonl, round_trips};

fn xyz_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xyz-lab"))
        .args(args)
        .env_remove("XYZ_LAB_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn search_report_round_trips() {
    let o = xyz_lab(&["search", "--H", "100000", "--y", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let records = parse_jsonl(&text).unwrap();
    assert!(records.len() > 100);
    assert!(records
        .windows(2)
        .all(|w| (w[0].z, w[0].x) < (w[1].z, w[1].x)));
    assert!(records.iter().all(|r| r.s <= 7 && r.x + r.y == r.z));
    assert!(round_trips(&text).unwrap());
    // the census summary goes to stderr, never into the report
    assert!(!String::from_utf8_lossy(&o.stderr).is_empty());
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rank.csv");
    let o = xyz_lab(&[
        "rank",
        "--H",
        "10000",
        "--y",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("S,x,y,z,kappa0,qstar\n"));
    assert!(csv.contains("\n5,3,125,128,1.019020,1.472002\n"));
}

#[test]
fn extremal_table_format() {
    let o = xyz_lab(&[
        "rank",
        "--H",
        "2000000",
        "--y",
        "13",
        "--primitive",
        "--format",
        "table",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for row in [
        "1            8            9",
        "3          125          128",
        "91      1771470      1771561",
    ] {
        assert!(text.contains(row), "{text}");
    }
}

#[test]
fn thread_count_from_environment() {
    let bad = Command::new(env!("CARGO_BIN_EXE_xyz-lab"))
        .args(["psi", "--x", "10", "--y", "3"])
        .env("XYZ_LAB_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let good = Command::new(env!("CARGO_BIN_EXE_xyz-lab"))
        .args(["psi", "--x", "100", "--y", "5"])
        .env("XYZ_LAB_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(good.status.code(), Some(0));
    assert!(stdout(&good).contains("= 34"));
}

#[test]
fn numeric_subcommands() {
    let rho = stdout(&xyz_lab(&["rho", "2", "3"]));
    assert!(rho.contains("3.0685281944015763e-1"), "{rho}");
    let saddle = stdout(&xyz_lab(&["saddle", "--x", "1000000", "--y", "100"]));
    assert!(saddle.contains("c = 0.6038566"), "{saddle}");
    let series = stdout(&xyz_lab(&[
        "series", "--c", "0.6", "--c", "0.8", "--y", "100",
    ]));
    let lines: Vec<&str> = series.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].contains("divergent"));
    assert!(lines[2].contains("1.0611527112") && lines[2].contains("0.3416958804"));
}

#[test]
fn usage_errors_and_verification() {
    assert_eq!(xyz_lab(&["saddle", "--x", "100"]).status.code(), Some(1));
    assert_eq!(xyz_lab(&["rho", "-1"]).status.code(), Some(1));
    assert_eq!(xyz_lab(&["series"]).status.code(), Some(1));
    // below every abscissa of convergence each column reports divergence
    let low = xyz_lab(&["series", "--c", "0.2"]);
    assert_eq!(low.status.code(), Some(0));
    assert_eq!(
        stdout(&low)
            .lines()
            .nth(1)
            .unwrap()
            .matches("divergent")
            .count(),
        5
    );
    let v = xyz_lab(&["verify-paper"]);
    assert_eq!(v.status.code(), Some(0));
    let text = stdout(&v);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 40);
    assert!(text.trim_end().ends_with("0 failed"), "{text}");
}
