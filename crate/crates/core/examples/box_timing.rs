//! Times the divisor sum over V = W = 2^k boxes.
//!
//! Usage: box_timing <k_min> <k_max> [workers]

use std::time::Instant;

use es_core::bilinear::{bilinear_sum, BoxSpec, Method};

fn main() {
    let args: Vec<u32> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let (lo, hi) = (args.first().copied().unwrap_or(8), args.get(1).copied().unwrap_or(12));
    let workers = args.get(2).copied().unwrap_or(1) as usize;
    for k in lo..=hi {
        let b = BoxSpec::with_default_theta(1 << k, 1 << k).expect("box");
        let t = Instant::now();
        let s = bilinear_sum(&b, Method::Sieve, workers).expect("sum");
        let secs = t.elapsed().as_secs_f64();
        println!(
            "k={k} sum={s} ratio={:.6} secs={secs:.2} ns/cell={:.1}",
            s as f64 / b.envelope(),
            secs * 1e9 / b.pairs() as f64
        );
    }
}
