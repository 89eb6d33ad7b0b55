use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::factorization::Factorization;
use super::prime::factor_u64;
use crate::error::{domain, Error, Result};

const MAGIC: &[u8; 8] = b"ESARITH1";

/// Least-prime-factor sieve with divisor counts and (optionally) Euler's φ
/// for every `2 <= n <= limit`. Built once and shared read-only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArithTables {
    limit: u32,
    lpf: Vec<u32>,
    divisor_count: Vec<u32>,
    phi: Option<Vec<u32>>,
    primes: Vec<u32>,
}

/// Convenience wrapper: tables up to `limit` without φ and with the default
/// memory budget.
pub fn sieve_tables(limit: u64) -> Result<ArithTables> {
    ArithTables::build(limit, false, ArithTables::DEFAULT_MEMORY_BUDGET)
}

impl ArithTables {
    pub const DEFAULT_MEMORY_BUDGET: usize = 2 << 30;

    /// Rough bytes per sieved integer, used for the budget check.
    pub fn bytes_per_entry(with_phi: bool) -> usize {
        4 + 4 + 1 + if with_phi { 4 } else { 0 }
    }

    pub fn build(limit: u64, with_phi: bool, memory_budget: usize) -> Result<Self> {
        if limit < 2 {
            return domain(format!("sieve limit must be >= 2, got {limit}"));
        }
        if limit > u32::MAX as u64 - 1 {
            return Err(Error::Capacity(format!("sieve limit {limit} exceeds u32 range")));
        }
        let need = (limit as usize + 1).saturating_mul(Self::bytes_per_entry(with_phi));
        if need > memory_budget {
            return Err(Error::Capacity(format!(
                "sieve up to {limit} needs ~{need} bytes, budget is {memory_budget}"
            )));
        }
        let len = limit as usize + 1;
        let mut lpf = vec![0u32; len];
        let mut dc = vec![0u32; len];
        // exponent of the least prime in n
        let mut lpf_exp = vec![0u8; len];
        let mut phi = with_phi.then(|| vec![0u32; len]);
        let mut primes = Vec::new();
        dc[1] = 1;
        if let Some(phi) = phi.as_mut() {
            phi[1] = 1;
        }
        for i in 2..len {
            if lpf[i] == 0 {
                lpf[i] = i as u32;
                dc[i] = 2;
                lpf_exp[i] = 1;
                if let Some(phi) = phi.as_mut() {
                    phi[i] = i as u32 - 1;
                }
                primes.push(i as u32);
            }
            let li = lpf[i];
            for &p in &primes {
                let m = i * p as usize;
                if p > li || m >= len {
                    break;
                }
                lpf[m] = p;
                if p == li {
                    let e = lpf_exp[i] as u32;
                    lpf_exp[m] = e as u8 + 1;
                    dc[m] = dc[i] / (e + 1) * (e + 2);
                    if let Some(phi) = phi.as_mut() {
                        phi[m] = phi[i] * p;
                    }
                } else {
                    lpf_exp[m] = 1;
                    dc[m] = dc[i] * 2;
                    if let Some(phi) = phi.as_mut() {
                        phi[m] = phi[i] * (p - 1);
                    }
                }
            }
        }
        Ok(ArithTables { limit: limit as u32, lpf, divisor_count: dc, phi, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit as u64
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn has_phi(&self) -> bool {
        self.phi.is_some()
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit as u64 && self.lpf[n as usize] as u64 == n
    }

    /// Least prime factor of `2 <= n <= limit`.
    pub fn least_prime_factor(&self, n: u64) -> u32 {
        assert!(n >= 2 && n <= self.limit as u64, "n = {n} outside sieve range");
        self.lpf[n as usize]
    }

    pub fn divisor_count(&self, n: u64) -> u32 {
        assert!(n >= 1 && n <= self.limit as u64, "n = {n} outside sieve range");
        self.divisor_count[n as usize]
    }

    pub fn divisor_counts(&self) -> &[u32] {
        &self.divisor_count
    }

    pub fn phi(&self, n: u64) -> Option<u32> {
        self.phi.as_ref().map(|t| t[n as usize])
    }

    /// Factorization via the lpf table, falling back to trial division and
    /// rho for `n` beyond the sieve.
    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        if n == 0 {
            return domain("cannot factorize 0");
        }
        if n > self.limit as u64 {
            return Ok(Factorization::from_sorted_unchecked(n, factor_u64(n)));
        }
        Ok(Factorization::from_sorted_unchecked(n, self.factor_small(n as u32)))
    }

    /// Sorted `(prime, exponent)` list for `1 <= n <= limit`.
    pub fn factor_small(&self, mut n: u32) -> Vec<(u64, u32)> {
        let mut out = Vec::with_capacity(8);
        while n > 1 {
            let p = self.lpf[n as usize];
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
        out
    }

    /// Writes the tables to `path` (magic header, limit, φ flag, then
    /// little-endian columns).
    pub fn save(&self, path: &Path) -> Result<()> {
        let io = |e: std::io::Error| Error::Capacity(format!("writing {}: {e}", path.display()));
        let mut w = BufWriter::new(File::create(path).map_err(io)?);
        w.write_all(MAGIC).map_err(io)?;
        w.write_all(&(self.limit as u64).to_le_bytes()).map_err(io)?;
        w.write_all(&[self.phi.is_some() as u8]).map_err(io)?;
        let mut col = |v: &[u32]| -> Result<()> {
            for x in v {
                w.write_all(&x.to_le_bytes()).map_err(io)?;
            }
            Ok(())
        };
        col(&self.lpf)?;
        col(&self.divisor_count)?;
        if let Some(phi) = &self.phi {
            col(phi)?;
        }
        w.flush().map_err(io)
    }

    /// Loads a table written by [`save`](Self::save). Returns `Ok(None)` when
    /// the file is missing, has a foreign header, or records a different
    /// limit.
    pub fn load(path: &Path, expected_limit: u64) -> Result<Option<Self>> {
        let Ok(f) = File::open(path) else {
            return Ok(None);
        };
        let io = |e: std::io::Error| Error::Capacity(format!("reading {}: {e}", path.display()));
        let mut r = BufReader::new(f);
        let mut magic = [0u8; 8];
        if r.read_exact(&mut magic).is_err() || &magic != MAGIC {
            return Ok(None);
        }
        let mut buf8 = [0u8; 8];
        r.read_exact(&mut buf8).map_err(io)?;
        let limit = u64::from_le_bytes(buf8);
        if limit != expected_limit || limit < 2 || limit >= u32::MAX as u64 {
            return Ok(None);
        }
        let mut flag = [0u8; 1];
        r.read_exact(&mut flag).map_err(io)?;
        let len = limit as usize + 1;
        let mut col = || -> Result<Vec<u32>> {
            let mut bytes = vec![0u8; len * 4];
            r.read_exact(&mut bytes).map_err(io)?;
            Ok(bytes.chunks_exact(4).map(|c| u32::from_le_bytes(c.try_into().unwrap())).collect())
        };
        let lpf = col()?;
        let divisor_count = col()?;
        let phi = if flag[0] == 1 { Some(col()?) } else { None };
        let primes = (2..len).filter(|&i| lpf[i] as usize == i).map(|i| i as u32).collect();
        Ok(Some(ArithTables { limit: limit as u32, lpf, divisor_count, phi, primes }))
    }
}

/// P(n) for `0 <= n <= limit` (entries 0 and 1 are 0).
pub fn greatest_prime_factor_table(limit: usize) -> Vec<u32> {
    let mut gpf = vec![0u32; limit + 1];
    for p in 2..=limit {
        if gpf[p] == 0 {
            let mut m = p;
            while m <= limit {
                gpf[m] = p as u32;
                m += p;
            }
        }
    }
    gpf
}
