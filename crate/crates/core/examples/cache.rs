//! Saving and reloading a cohit basis, and what a damaged file looks like.
//!
//! ```bash
//! cargo run --release --example cache -- 4 20
//! ```

use std::time::Instant;

use cohit::cache::{cache_path, load_cache, save_cache};
use cohit::reducer::build_cohit_basis;

fn main() {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u32>().expect("k and n must be integers"));
    let k = args.next().unwrap_or(4) as usize;
    let n = args.next().unwrap_or(20);
    let dir = std::env::temp_dir().join("cohit-cache-example");

    let t = Instant::now();
    let cb = build_cohit_basis(k, n);
    println!("built dim {} in {:?}", cb.dim(), t.elapsed());
    let path = save_cache(&cb, &dir).expect("writable temp dir");
    println!("saved to {} ({} bytes)", path.display(), std::fs::metadata(&path).unwrap().len());

    let t = Instant::now();
    let back = load_cache(k, n, &dir).expect("readable").expect("present");
    println!("loaded in {:?}, identical: {}", t.elapsed(), back == cb);

    let mut bytes = std::fs::read(&path).unwrap();
    let last = bytes.len() - 1;
    bytes[last] ^= 0xff;
    std::fs::write(cache_path(&dir, k, n), bytes).unwrap();
    println!("after flipping a byte: {}", load_cache(k, n, &dir).unwrap_err());
    std::fs::remove_file(path).ok();
}
