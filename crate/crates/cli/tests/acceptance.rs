//! Acceptance suite: one pass/fail line per criterion.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use sha2::{Digest, Sha256};
use symprod_cli::selftest::{self, CRITERIA};

const LIMIT: Duration = Duration::from_secs(60);

fn hashes(dir: &Path) -> BTreeMap<String, String> {
    std::fs::read_dir(dir)
        .expect("artifact directory")
        .map(|entry| {
            let path = entry.expect("entry").path();
            let digest = Sha256::digest(std::fs::read(&path).expect("artifact"));
            let hex = digest.iter().map(|b| format!("{b:02x}")).collect::<String>();
            (path.file_name().unwrap().to_string_lossy().into_owned(), hex)
        })
        .collect()
}

fn determinism() -> (bool, String) {
    let bin = env!("CARGO_BIN_EXE_symprod");
    let mut runs = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().expect("tempdir");
        let status = Command::new(bin)
            .args(["selftest", "--seed", "0", "--out"])
            .arg(dir.path())
            .output()
            .expect("run selftest");
        runs.push((status.status.code(), hashes(dir.path())));
    }
    let same = runs[0].1 == runs[1].1 && !runs[0].1.is_empty();
    (
        same,
        format!(
            "{} artifacts, exit codes {:?}/{:?}, hashes {}",
            runs[0].1.len(),
            runs[0].0,
            runs[1].0,
            if same { "identical" } else { "differ" }
        ),
    )
}

fn main() {
    let mut failed = 0;
    for id in 1..=CRITERIA {
        let start = Instant::now();
        let o = selftest::check(id, 0);
        let elapsed = start.elapsed();
        let ok = o.passed && elapsed < LIMIT;
        failed += usize::from(!ok);
        println!("{} [{:.1}s]", o.line().replacen(if o.passed { "PASS" } else { "FAIL" }, if ok { "PASS" } else { "FAIL" }, 1), elapsed.as_secs_f64());
    }
    let start = Instant::now();
    let (same, detail) = determinism();
    let elapsed = start.elapsed();
    let ok = same && elapsed < LIMIT;
    failed += usize::from(!ok);
    println!(
        "criterion 10 {:<26} {}  {detail} [{:.1}s]",
        "determinism",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all {} acceptance criteria passed", CRITERIA + 1);
}
