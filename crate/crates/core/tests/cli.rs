use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use bgrank::cli::cache::{decode_table, encode_table, read_table, Cache};
use bgrank::cli::cache_roundtrip;
use bgrank::error::Error;
use bgrank::qseries::{p_table, StatKind, StatParams};

fn bgrank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bgrank")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn table_pbar_last_row() {
    let o = bgrank(&["--no-cache", "table", "--stat", "pbar", "--j", "0", "--n-max", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("n,value"));
    assert_eq!(out.lines().last(), Some("12,65"));
}

#[test]
fn equidist_small_case_is_exact() {
    let o = bgrank(&["--no-cache", "--format", "json", "equidist", "--j", "0", "--b", "5", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for r in rows {
        let ratio: f64 = r["ratio"].as_str().unwrap().parse().unwrap();
        assert_eq!(ratio, 1.0);
    }
}

#[test]
fn validate_passes() {
    let o = bgrank(&["--no-cache", "validate"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(bgrank(&["table", "--bogus"]).status.code(), Some(2));
    assert_eq!(bgrank(&["turan", "--order", "2", "--range", "9:3"]).status.code(), Some(2));
    assert_eq!(bgrank(&["--no-cache", "table", "--stat", "pbar", "--j", "1", "--n-max", "5"]).status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let o = bgrank(&["--no-cache", "table", "--stat", "p", "--n-max", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(fs::read_to_string(&path).unwrap(), "n,value\n0,1\n1,1\n2,2\n3,3\n4,5\n5,7\n");
}

#[test]
fn cached_and_uncached_output_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["asympt", "--n-list", "100,200", "--b", "3"];
    let cold = bgrank(&[&["--cache-dir", cache][..], &args].concat());
    let warm = bgrank(&[&["--cache-dir", cache][..], &args].concat());
    let off = bgrank(&[&["--no-cache"][..], &args].concat());
    assert_eq!(cold.status.code(), Some(0), "{}", String::from_utf8_lossy(&cold.stderr));
    assert!(fs::read_dir(dir.path()).unwrap().count() > 0);
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(cold.stdout, off.stdout);
}

#[test]
fn cache_roundtrip_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let t = p_table(100);
    assert_eq!(cache_roundtrip(&t, dir.path()).unwrap(), t);
    let entry = read_table(&dir.path().join("p_n100.csv")).unwrap();
    assert_eq!(entry.meta.kind, StatKind::P);
    assert_eq!(entry.meta.n_max, 100);
}

#[test]
fn corrupted_cache_is_rejected_and_replaced() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(Some(dir.path().to_path_buf()));
    let path = cache.store(&p_table(50)).unwrap().unwrap();
    let mut bytes = fs::read(&path).unwrap();
    let last_digit = bytes.iter().rposition(u8::is_ascii_digit).unwrap();
    bytes[last_digit] = if bytes[last_digit] == b'9' { b'8' } else { bytes[last_digit] + 1 };
    fs::write(&path, &bytes).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    assert!(matches!(decode_table(Path::new("x"), &text), Err(Error::ChecksumMismatch(_))));

    let mut computed = false;
    let t = cache
        .get_or_compute(StatKind::P, StatParams::default(), 50, || {
            computed = true;
            Ok(p_table(50))
        })
        .unwrap();
    assert!(computed);
    assert_eq!(t, p_table(50));
    assert_eq!(fs::read_to_string(&path).unwrap(), encode_table(&p_table(50)));
}

#[test]
fn concurrent_readers_see_complete_files() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(Some(dir.path().to_path_buf()));
    let expected = p_table(300);
    std::thread::scope(|s| {
        for _ in 0..8 {
            s.spawn(|| {
                for _ in 0..5 {
                    let t = cache
                        .get_or_compute(StatKind::P, StatParams::default(), 300, || Ok(p_table(300)))
                        .unwrap();
                    assert_eq!(t, expected);
                }
            });
        }
    });
}

#[test]
fn report_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = bgrank(&["--cache-dir", cache.to_str().unwrap(), "report", "--out", out.to_str().unwrap()]);
        assert!(matches!(o.status.code(), Some(0 | 1)));
    }
    let mut names: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.iter().any(|n| n == "summary.csv"));
    for n in names {
        assert_eq!(fs::read(a.join(&n)).unwrap(), fs::read(b.join(&n)).unwrap(), "{n:?}");
    }
}
