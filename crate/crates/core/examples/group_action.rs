//! GL_k(F_2) acting on polynomials by linear substitution.
//!
//! ```bash
//! cargo run --release --example group_action
//! ```

use cohit::group::{enumerate_group, group_order, substitute, transposition, transvection};
use cohit::parse::parse_polynomial;

fn main() {
    let p = parse_polynomial("x1*x2^2*x3^4", 3).unwrap();
    println!("rho_2 . {p} = {}", substitute(&transposition(3, 2).unwrap(), &p).unwrap());
    println!("rho_3 . {p} = {}", substitute(&transvection(3).unwrap(), &p).unwrap());

    for k in 1..=4 {
        let g = enumerate_group(k).unwrap();
        println!("|GL_{k}(F_2)| = {} (formula {})", g.len(), group_order(k));
    }

    // orbit of x1^3 under GL_2
    let q = parse_polynomial("x1^3", 2).unwrap();
    for g in enumerate_group(2).unwrap() {
        println!("  {:?}: {}", g.rows(), substitute(&g, &q).unwrap());
    }
}
