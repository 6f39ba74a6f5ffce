use awp_core::selftest;
fn main() {
    let report = selftest::run(false);
    for c in &report.checks {
        println!("{} {:32} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    println!("elapsed: {:.1}s, all passed: {}", report.elapsed_s, report.all_passed());
}
