//! End-to-end tests of the `sepkit` binary: exact value emission, tagged
//! output, exit codes, cache behavior, and plot-data invariants.

use std::process::{Command, Output};

fn sepkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sepkit"))
        .args(args)
        .env_remove("SEPKIT_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn exact_probability_and_formats() {
    let out = sepkit(&["q", "--k", "0", "--alpha", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "13/323");

    let out = sepkit(&["q", "--k", "0", "--alpha", "2", "--format", "json"]);
    assert_eq!(stdout(&out).trim(), r#"{"exact":"13/323"}"#);
}

#[test]
fn parameter_block() {
    let out = sepkit(&["params", "--k", "1"]);
    let text = stdout(&out);
    assert!(text.contains("α + 11/6, α + 13/6, α + 9/5, α + 11/5, α + 12/5, α + 13/5"));
    assert!(text.contains("α + 27/10"));
}

#[test]
fn rationalize_recovers_exact_value() {
    let out = sepkit(&[
        "rationalize",
        "--value",
        "0.121212121212121212",
        "--digits",
        "18",
        "--max-den",
        "1000000",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "4/33");
}

#[test]
fn exit_codes() {
    // usage error: unknown flag
    let out = sepkit(&["q", "--definitely-not-a-flag"]);
    assert_eq!(out.status.code(), Some(2));
    // usage error: malformed rational
    let out = sepkit(&["q", "--k", "0", "--alpha", "x/y"]);
    assert_eq!(out.status.code(), Some(2));
    // computation error: k outside the exact-route range
    let out = sepkit(&["q", "--k", "99", "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reruns_are_byte_identical_and_cache_hits() {
    let dir = std::env::temp_dir().join(format!("sepkit-cli-test-{}", std::process::id()));
    let args = [
        "estimate", "--k", "0", "--alpha", "1", "--degree", "60", "--format", "json",
    ];
    let mut with_cache: Vec<&str> = args.to_vec();
    let dir_s = dir.to_str().unwrap().to_owned();
    with_cache.extend_from_slice(&["--cache-dir", &dir_s]);
    let first = sepkit(&with_cache);
    assert!(first.status.success());
    let second = sepkit(&with_cache);
    assert_eq!(first.stdout, second.stdout, "cached rerun must be byte-identical");
    // uncached run agrees too
    let fresh = sepkit(&args);
    assert_eq!(first.stdout, fresh.stdout);
    let entries = std::fs::read_dir(&dir).unwrap().count();
    assert_eq!(entries, 1);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn figure_raw_values_start_at_initial_points_and_increase_with_k() {
    let out = sepkit(&["figure", "raw", "--alpha-max", "10"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "alpha,k=-1,k=0,k=1,k=2,k=3,k=4");
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&first[1..], &["1/14", "4/33", "45/286", "1553/8398", "3073/14858", "8348/37145"]);
    // at every alpha the probability increases with k
    for line in text.lines().skip(1) {
        let vals: Vec<f64> = line
            .split(',')
            .skip(1)
            .map(|s| {
                let (n, d) = s.split_once('/').unwrap();
                n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap()
            })
            .collect();
        for w in vals.windows(2) {
            assert!(w[1] > w[0], "ordering violated in line {}", line);
        }
    }
}

#[test]
fn config_file_defaults_with_flag_override() {
    let path = std::env::temp_dir().join(format!("sepkit-cfg-{}.txt", std::process::id()));
    std::fs::write(&path, "format=json\n").unwrap();
    let p = path.to_str().unwrap();
    let out = sepkit(&["q", "--k", "0", "--alpha", "1", "--config", p]);
    assert_eq!(stdout(&out).trim(), r#"{"exact":"4/33"}"#);
    let out = sepkit(&["q", "--k", "0", "--alpha", "1", "--config", p, "--format", "csv"]);
    assert_eq!(stdout(&out).trim(), "4/33");
    std::fs::remove_file(&path).ok();
}
