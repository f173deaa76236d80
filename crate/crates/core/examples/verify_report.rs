//! Consistency checks for one register size, as a table.

use dfsprep::report::run_verify;

fn main() -> dfsprep::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let report = run_verify(n)?;
    for c in &report.checks {
        println!(
            "{:<24} {:<4} {:>10.3e} < {:<8.1e} {}",
            c.name,
            if c.passed { "ok" } else { "FAIL" },
            c.value,
            c.threshold,
            c.detail
        );
    }
    println!("N = {n}: {}", if report.passed { "all checks passed" } else { "some checks failed" });
    Ok(())
}
