//! Counting solutions of 4lx² + 1 ≡ 0 (mod n) and 4a²l + 1 ≡ 0 (mod n).
//!
//! For fixed `l` the quadratic count G(n) is multiplicative, equals G(p) on
//! every prime power pᵉ (the roots mod p are simple, so each lifts uniquely),
//! and G(p) ∈ {0, 2} for odd p ∤ l. Hence G(n) <= 2^ω(n) <= d(n).

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, gcd, prime::jacobi, prime::is_prime};
use crate::error::{domain, Error, Result};

/// Largest modulus accepted by the brute-force oracle.
pub const ORACLE_MAX_MODULUS: u64 = 1_000_000;

/// One congruence 4lx² + 1 ≡ 0 (mod n).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceInstance {
    pub l: u64,
    pub n: u64,
}

impl CongruenceInstance {
    pub fn new(l: u64, n: u64) -> Result<Self> {
        if l == 0 || n == 0 {
            return domain(format!("need l >= 1 and n >= 1, got l={l}, n={n}"));
        }
        Ok(CongruenceInstance { l, n })
    }

    /// g(x) = 4lx² + 1 reduced mod n.
    pub fn eval(&self, x: u64) -> u64 {
        let n = self.n as u128;
        let x = x as u128 % n;
        ((4 * (self.l as u128 % n) % n * (x * x % n) + 1) % n) as u64
    }

    pub fn root_count(&self) -> Result<u64> {
        quad_root_count(self.l, self.n)
    }
}

/// Number of residues x mod p with 4lx² + 1 ≡ 0, for prime p.
pub fn quad_root_count_prime(l: u64, p: u64) -> Result<u64> {
    if !is_prime(p) {
        return domain(format!("{p} is not prime"));
    }
    Ok(root_count_at_prime(l, p))
}

fn root_count_at_prime(l: u64, p: u64) -> u64 {
    // 4lx² + 1 is odd, and ≡ 1 when p | l
    if p == 2 || l % p == 0 {
        return 0;
    }
    // x² ≡ −(4l)⁻¹ is solvable iff (−l / p) = 1
    match jacobi(-((l % p) as i64), p) {
        1 => 2,
        _ => 0,
    }
}

/// G(n) for the polynomial 4lx² + 1, via multiplicativity over the prime
/// factorization of n.
pub fn quad_root_count(l: u64, n: u64) -> Result<u64> {
    if n == 0 {
        return domain("modulus must be >= 1");
    }
    let f = factorize(n)?;
    let mut g = 1u64;
    for &(p, _) in f.factors() {
        g *= root_count_at_prime(l, p);
        if g == 0 {
            break;
        }
    }
    Ok(g)
}

/// Brute-force G(n): evaluates 4lx² + 1 for every x in [0, n).
pub fn quad_root_count_oracle(l: u64, n: u64) -> Result<u64> {
    if n == 0 {
        return domain("modulus must be >= 1");
    }
    if n > ORACLE_MAX_MODULUS {
        return Err(Error::Capacity(format!(
            "oracle modulus {n} exceeds {ORACLE_MAX_MODULUS}"
        )));
    }
    let c = 4 * (l % n) % n;
    Ok((0..n).filter(|&x| (c * (x * x % n) + 1) % n == 0).count() as u64)
}

/// Number of l mod n with 4a²l + 1 ≡ 0 (mod n): 1 when gcd(4a², n) = 1,
/// otherwise 0.
pub fn linear_root_count(a: u64, n: u64) -> Result<u64> {
    if n == 0 {
        return domain("modulus must be >= 1");
    }
    let a = a % n;
    let coeff = (4 * (a as u128 * a as u128 % n as u128) % n as u128) as u64;
    Ok((gcd(coeff, n) == 1) as u64)
}
