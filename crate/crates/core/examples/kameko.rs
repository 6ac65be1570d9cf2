//! The Kameko map (QP_k)_n -> (QP_k)_{(n-k)/2} and its section.
//!
//! ```bash
//! cargo run --release --example kameko -- 5 17
//! ```

use cohit::kameko::{kameko_map, target_degree};
use cohit::reducer::build_cohit_basis;

fn main() {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u32>().expect("k and n must be integers"));
    let k = args.next().unwrap_or(4) as usize;
    let n = args.next().unwrap_or(14);

    let m = match target_degree(k, n) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    let source = build_cohit_basis(k, n);
    let target = build_cohit_basis(k, m);
    let map = kameko_map(&source, &target).expect("degrees agree");
    println!("dim (QP_{k})_{n} = {}, dim (QP_{k})_{m} = {}", map.source_dim, map.target_dim);
    println!("rank {}, kernel {}, onto: {}", map.rank, map.kernel_dim(), map.is_epimorphism());

    // psi_lift is a one-sided inverse on monomials
    for u in target.basis().iter().take(3) {
        let lifted = u.psi_lift();
        println!("  {u} -> {lifted} -> {}", lifted.kameko_down().expect("all exponents odd"));
    }
}
