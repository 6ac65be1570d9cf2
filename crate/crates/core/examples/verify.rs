//! Checks a polynomial for hits and invariance modulo hits.
//!
//! ```bash
//! cargo run --release --example verify -- 4 32 "x1^3*x2^3*x3^13*x4^13 + x1^7*x2^7*x3^9*x4^9"
//! ```

use cohit::parse::parse_polynomial;
use cohit::reducer::build_cohit_basis;
use cohit::report::verify_polynomial;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (k, n, text) = match &args[..] {
        [k, n, text] => (k.parse().expect("k"), n.parse().expect("n"), text.as_str()),
        _ => (4, 14, "x1^3*x2^3*x3^4*x4^4 + x1*x2*x3^6*x4^6"),
    };
    let p = match parse_polynomial(text, k) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(3);
        }
    };
    let cb = build_cohit_basis(k, n);
    let report = verify_polynomial(&cb, &p).expect("polynomial of the right degree");
    print!("{report}");
    println!("all checks pass: {}", report.passed());
}
