//! GL_k-coinvariants of the primitive homology by Boardman's orbit method.
//!
//! ```bash
//! cargo run --release --example boardman -- 3 31
//! ```

use cohit::boardman::{coinvariant_dim, h_orbits, identify_params, Truncation};

fn main() {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u32>().expect("k and n must be integers"));
    let k = args.next().unwrap_or(3) as usize;
    let n = args.next().unwrap_or(7);

    println!("closed-form parameters: {:?}", identify_params(k, n).expect("k is 2 or 3"));
    println!("all h-orbits: {:?}", h_orbits(k, n).expect("k is 2 or 3"));

    let r = coinvariant_dim(k, n, Truncation::default()).expect("orbit computation");
    for o in &r.orbits {
        println!(
            "  {}: dim W = {}, dim D = {}, coinvariants {}",
            o.params, o.dim_w, o.dim_d, o.coinvariant_dim
        );
    }
    println!("l = {}: dim W = {}, dim D = {}, total {}", r.level, r.dim_w, r.dim_d, r.total);

    let next = coinvariant_dim(k, n, Truncation::Level(r.level + 1)).expect("orbit computation");
    println!("l = {}: total {}", next.level, next.total);
}
