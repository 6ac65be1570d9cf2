//! Sigma_k- and GL_k-invariants of (QP_k)_n through cluster analysis.
//!
//! ```bash
//! cargo run --release --example invariants -- 4 32
//! ```

use cohit::report::{compute_invariants, InvariantOptions};

fn main() {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u32>().expect("k and n must be integers"));
    let k = args.next().unwrap_or(4) as usize;
    let n = args.next().unwrap_or(14);

    let opts = InvariantOptions {
        record_timings: true,
        ..Default::default()
    };
    let run = compute_invariants(k, n, &opts).expect("invariant computation");
    print!("{}", run.report);

    // the objects behind the report are available too
    let graph = &run.analysis.graph;
    println!("weight graph: {} vertices, {} edges", graph.vertices.len(), graph.edges.len());
}
