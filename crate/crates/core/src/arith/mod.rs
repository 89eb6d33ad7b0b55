//! Arithmetic functions on positive integers: factorization, d, φ, Ω, least
//! and greatest prime factor, smooth-number counts and divisor-square sums.

mod factorization;
pub mod prime;
mod sieve;
mod smooth;
mod sums;

pub use factorization::{
    big_omega, divisor_count, euler_phi, factorize, greatest_prime_factor, least_prime_factor,
    Factorization,
};
pub use sieve::{greatest_prime_factor_table, sieve_tables, ArithTables};
pub use smooth::{lemma5_check, smooth_count, Lemma5Check};
pub use sums::{
    d2_over_n_exact, d2_over_n_partial, d2_partial, CompensatedSum, ExactRational,
};

/// Greatest common divisor.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Modular inverse of `a` modulo `m` (`m >= 1`), if it exists.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = ((a % m) as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}
