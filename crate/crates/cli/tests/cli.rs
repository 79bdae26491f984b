use std::process::{Command, Output};

const HAMMING: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tests/data/hamming74.txt");
const CRC120: &str = "crc:128,120,0xD5";

fn grandab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grandab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn decode_single_flip_from_h_file() {
    // 0010000: a single error at position 3 of the all-zero codeword. The dial
    // engine counts every lane it evaluated, 1 + 7.
    let o = grandab(&["decode", "--hfile", HAMMING, "--ab", "3", "--rx", "10"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    for line in ["status=Decoded", "weight=1", "queries=8", "latency_cycles=2", "codeword=00"] {
        assert!(out.lines().any(|l| l == line), "missing {line} in\n{out}");
    }
}

#[test]
fn trace_stops_at_first_hit() {
    let zeros = "0".repeat(32);
    let o = grandab(&["trace", "--code", CRC120, "--rx", &zeros]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 1, "{out}");
    assert!(lines[0].starts_with("cycle=1 phase=weight0"), "{out}");
}

#[test]
fn simulate_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("results.csv");
    let o = grandab(&[
        "simulate",
        "--code",
        CRC120,
        "--snr",
        "11:1:12",
        "--min-errors",
        "1",
        "--max-frames",
        "512",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3, "{csv}");
    assert!(lines[0].starts_with("snr_db,frames,frame_errors"));
    assert!(lines.iter().all(|l| l.split(',').count() == 9));
    assert!(lines[1].starts_with("11,"));
}

#[test]
fn configuration_errors_exit_nonzero() {
    let bad: [&[&str]; 5] = [
        &["simulate", "--code", CRC120, "--ab", "4"],
        &["simulate", "--code", "crc:128,120,0xD4"],
        &["simulate", "--code", CRC120, "--snr", "12:-1:4"],
        &["decode", "--hfile", "/nonexistent/h.txt", "--rx", "0"],
        &["decode", "--rx", "00"],
    ];
    for args in bad {
        let o = grandab(args);
        assert!(!o.status.success(), "{args:?} should fail");
        assert!(!o.stderr.is_empty(), "{args:?} printed no message");
    }
}
