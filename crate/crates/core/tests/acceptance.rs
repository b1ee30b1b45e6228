//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//! `MICROCECH_SEED` overrides the default seed.

use microcech::acceptance::{run, CRITERIA, DEFAULT_SEED};
use std::time::Instant;

fn main() {
    let seed = match std::env::var("MICROCECH_SEED") {
        Ok(s) => {
            let s = s.trim();
            let parsed = match s.strip_prefix("0x") {
                Some(hex) => u64::from_str_radix(hex, 16),
                None => s.parse(),
            };
            parsed.unwrap_or_else(|_| panic!("MICROCECH_SEED must be an integer, got {s:?}"))
        }
        Err(_) => DEFAULT_SEED,
    };
    println!("acceptance seed {seed:#x}");
    let mut failed = 0;
    for (id, _) in CRITERIA {
        let start = Instant::now();
        let r = run(id, seed);
        println!("{} [{:.2}s]", r.line(), start.elapsed().as_secs_f64());
        if !r.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {} failed", CRITERIA.len() - failed, failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
