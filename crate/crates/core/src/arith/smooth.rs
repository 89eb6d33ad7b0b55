use serde::{Deserialize, Serialize};

use super::prime::primes_up_to;
use crate::error::{domain, Result};

/// Ψ(x, y): the number of `n <= x` whose prime factors are all `<= y`.
/// `n = 1` is counted.
pub fn smooth_count(x: u64, y: f64) -> u64 {
    if x == 0 {
        return 0;
    }
    let ymax = if y.is_finite() { y.floor().max(1.0) as u64 } else { x };
    let bound = ymax.min(x).min(u32::MAX as u64) as u32;
    let primes = primes_up_to(bound);
    // depth-first generation of smooth products, primes taken in
    // nondecreasing order so each product is produced once
    let mut count = 1u64;
    let mut stack: Vec<(u64, usize)> = vec![(1, 0)];
    while let Some((m, start)) = stack.pop() {
        let cap = x / m;
        for (i, &p) in primes.iter().enumerate().skip(start) {
            let p = p as u64;
            if p > cap {
                break;
            }
            count += 1;
            stack.push((m * p, i));
        }
    }
    count
}

/// Ψ(x, log x · log log x) next to the envelope exp(3 log x / √(log log x)).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma5Check {
    pub x: u64,
    pub y: f64,
    pub psi: u64,
    pub envelope: f64,
    pub ratio: f64,
}

pub fn lemma5_check(x: u64) -> Result<Lemma5Check> {
    if x < 10 {
        return domain(format!("smooth-count envelope needs x >= 10, got {x}"));
    }
    let lx = (x as f64).ln();
    let llx = lx.ln();
    let y = lx * llx;
    let psi = smooth_count(x, y);
    let envelope = (3.0 * lx / llx.sqrt()).exp();
    Ok(Lemma5Check { x, y, psi, envelope, ratio: psi as f64 / envelope })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::greatest_prime_factor_table;

    fn oracle(x: u64, y: f64) -> u64 {
        let g = greatest_prime_factor_table(x as usize);
        (1..=x as usize).filter(|&n| n == 1 || (g[n] as f64) <= y).count() as u64
    }

    #[test]
    fn worked_examples() {
        assert_eq!(smooth_count(10, 10.0), 10);
        assert_eq!(smooth_count(100, 5.0), 34);
        assert_eq!(smooth_count(100, 1.0), 1);
        assert_eq!(smooth_count(100, 0.5), 1);
        assert_eq!(smooth_count(0, 3.0), 0);
    }

    #[test]
    fn matches_gpf_sieve() {
        for &x in &[1u64, 2, 17, 100, 1000, 5000] {
            for &y in &[1.0, 2.0, 2.5, 7.0, 13.3, 50.0, 1e9] {
                assert_eq!(smooth_count(x, y), oracle(x, y), "x={x} y={y}");
            }
        }
    }

    #[test]
    fn monotone_in_y_and_full_at_x() {
        for x in [30u64, 999, 4096] {
            let mut prev = 0;
            for y in 1..=x {
                let c = smooth_count(x, y as f64);
                assert!(c >= prev);
                prev = c;
            }
            assert_eq!(smooth_count(x, x as f64), x);
        }
    }

    #[test]
    fn explicit_envelope_holds_at_desk_scale() {
        for k in 3..=7 {
            let c = lemma5_check(10u64.pow(k)).unwrap();
            assert!(c.psi as f64 <= c.envelope, "{c:?}");
        }
        assert!(lemma5_check(9).is_err());
    }
}
