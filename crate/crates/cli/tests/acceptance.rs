//! Runs every acceptance criterion over two primes and two seeds and prints
//! one PASS/FAIL line per criterion. Exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use wahl_cli::acceptance::{self, AcceptanceConfig, CRITERIA};

fn main() -> ExitCode {
    let cfg = AcceptanceConfig::full();
    let primes: Vec<String> = cfg.primes.iter().map(|p| p.modulus().to_string()).collect();
    println!("acceptance: primes {} seeds {:?}", primes.join(", "), cfg.seeds);
    let start = Instant::now();
    let mut failed = Vec::new();
    for id in 1..=CRITERIA {
        let r = acceptance::run(id, &cfg);
        println!("{}", r.line());
        if !r.passed() {
            failed.push(id);
        }
    }
    println!(
        "acceptance: {} passed, {} failed {:?} in {:.1}s",
        CRITERIA - failed.len(),
        failed.len(),
        failed,
        start.elapsed().as_secs_f64()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
