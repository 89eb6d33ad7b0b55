use serde::{Deserialize, Serialize};

use super::prime::{factor_u64, is_prime};
use crate::error::{domain, Error, Result};

/// Prime-power decomposition `n = Π pᵢ^eᵢ` with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn one() -> Self {
        Factorization { n: 1, factors: Vec::new() }
    }

    /// Builds a factorization from sorted prime powers, checking every
    /// invariant.
    pub fn from_factors(factors: Vec<(u64, u32)>) -> Result<Self> {
        let mut n: u64 = 1;
        let mut prev = 0u64;
        for &(p, e) in &factors {
            if p <= prev {
                return domain(format!("primes must be strictly increasing, got {p} after {prev}"));
            }
            if e == 0 || !is_prime(p) {
                return domain(format!("invalid prime power {p}^{e}"));
            }
            let pe = p
                .checked_pow(e)
                .ok_or_else(|| Error::Capacity(format!("{p}^{e} overflows u64")))?;
            n = n
                .checked_mul(pe)
                .ok_or_else(|| Error::Capacity("product overflows u64".into()))?;
            prev = p;
        }
        Ok(Factorization { n, factors })
    }

    pub(crate) fn from_sorted_unchecked(n: u64, factors: Vec<(u64, u32)>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        Factorization { n, factors }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// d(n) = Π (eᵢ + 1).
    pub fn divisor_count(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    pub fn euler_phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    /// Ω(n): prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    /// ω(n): distinct prime factors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn least_prime(&self) -> Option<u64> {
        self.factors.first().map(|&(p, _)| p)
    }

    pub fn greatest_prime(&self) -> Option<u64> {
        self.factors.last().map(|&(p, _)| p)
    }

    /// The prime powers pᵢ^eᵢ in increasing order of pᵢ.
    pub fn prime_powers(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, e)| p.pow(e))
    }

    /// All divisors, sorted.
    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, e) in &self.factors {
            let len = out.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    out.push(out[i] * pk);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Re-checks the type invariants from scratch.
    pub fn is_valid(&self) -> bool {
        let mut prod: u128 = 1;
        let mut prev = 0;
        for &(p, e) in &self.factors {
            if p <= prev || e == 0 || !is_prime(p) {
                return false;
            }
            prev = p;
            prod *= (p as u128).pow(e);
            if prod > u64::MAX as u128 {
                return false;
            }
        }
        prod == self.n as u128 && (self.n == 1) == self.factors.is_empty()
    }
}

/// Factorizes `n >= 1` by trial division followed by Pollard–Brent rho on
/// any composite cofactor.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return domain("cannot factorize 0");
    }
    Ok(Factorization::from_sorted_unchecked(n, factor_u64(n)))
}

pub fn divisor_count(f: &Factorization) -> u64 {
    f.divisor_count()
}

pub fn euler_phi(f: &Factorization) -> u64 {
    f.euler_phi()
}

pub fn big_omega(f: &Factorization) -> u32 {
    f.big_omega()
}

/// p(n); undefined (domain error) for n < 2.
pub fn least_prime_factor(n: u64) -> Result<u64> {
    if n < 2 {
        return domain(format!("least prime factor undefined for n = {n}"));
    }
    Ok(factorize(n)?.least_prime().expect("n >= 2"))
}

/// P(n); undefined (domain error) for n < 2.
pub fn greatest_prime_factor(n: u64) -> Result<u64> {
    if n < 2 {
        return domain(format!("greatest prime factor undefined for n = {n}"));
    }
    Ok(factorize(n)?.greatest_prime().expect("n >= 2"))
}
