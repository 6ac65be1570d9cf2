//! Admissible basis of (QP_k)_n and reduction of a polynomial onto it.
//!
//! ```bash
//! cargo run --release --example hit_basis -- 3 7
//! ```

use cohit::monomial::{monomial_count, Monomial, Polynomial};
use cohit::reducer::build_cohit_basis_with_stats;
use cohit::steenrod::hit_task_count;

fn main() {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u32>().expect("k and n must be integers"));
    let k = args.next().unwrap_or(3) as usize;
    let n = args.next().unwrap_or(7);

    println!("(QP_{k})_{n}: {} monomials, {} hit generators", monomial_count(k, n), hit_task_count(k, n));
    let (cb, stats) = build_cohit_basis_with_stats(k, n);
    println!("hit matrix rank {}, dim (QP_{k})_{n} = {}", stats.hit_rank, cb.dim());
    for (i, m) in cb.basis().iter().enumerate() {
        println!("  B[{i}] = {m}   weight {}", m.weight());
    }

    // reduce x1^n onto the basis
    let x1n = Monomial::new((0..k).map(|i| if i == 0 { n } else { 0 }));
    let p = Polynomial::from_monomial(x1n);
    let coords = cb.reduce(&p).expect("degree matches");
    println!("[{p}] = [{}]", cb.polynomial_of(&coords));
}
