use std::io::Write;

use galnum::verify::acceptance_suite;

#[test]
fn acceptance() {
    let reports = acceptance_suite(2024);
    // written to the raw handle so the table shows without --nocapture
    let mut out = std::io::stdout().lock();
    writeln!(out).unwrap();
    for r in &reports {
        writeln!(out, "{}", r.summary_line()).unwrap();
        for line in r.detail_lines() {
            writeln!(out, "{line}").unwrap();
        }
    }
    drop(out);
    for r in &reports {
        assert!(r.only_known_gaps(), "{}", r.summary_line());
    }
}
