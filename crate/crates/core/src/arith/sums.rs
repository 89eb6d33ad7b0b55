use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::sieve::ArithTables;
use crate::error::{domain, Result};
use crate::par::{map_chunks, split_range};

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

const CHUNK: u64 = 1 << 16;

fn tables_for(x: u64) -> Result<ArithTables> {
    ArithTables::build(x.max(2), false, ArithTables::DEFAULT_MEMORY_BUDGET)
}

/// Σ_{n<=x} d(n)².
pub fn d2_partial(x: u64, workers: usize) -> Result<u64> {
    if x == 0 {
        return domain("x must be >= 1");
    }
    let t = tables_for(x)?;
    let d = t.divisor_counts();
    let parts = split_range(1, x, CHUNK);
    let sums = map_chunks(parts.len(), workers, |i| {
        let (lo, hi) = parts[i];
        (lo..=hi).map(|n| (d[n as usize] as u64).pow(2)).sum::<u64>()
    })?;
    Ok(sums.into_iter().sum())
}

/// Σ_{n<=x} d(n)²/n in compensated floating point. Chunks are fixed, so the
/// result is identical for every worker count.
pub fn d2_over_n_partial(x: u64, workers: usize) -> Result<f64> {
    if x == 0 {
        return domain("x must be >= 1");
    }
    let t = tables_for(x)?;
    let d = t.divisor_counts();
    let parts = split_range(1, x, CHUNK);
    let partials = map_chunks(parts.len(), workers, |i| {
        let (lo, hi) = parts[i];
        (lo..=hi)
            .map(|n| (d[n as usize] as f64).powi(2) / n as f64)
            .collect::<CompensatedSum>()
    })?;
    let mut total = CompensatedSum::new();
    for p in partials {
        total.add(p.sum);
        total.add(p.comp);
    }
    Ok(total.value())
}

/// An exact nonnegative rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactRational {
    pub num: BigUint,
    pub den: BigUint,
}

impl ExactRational {
    /// Nearest-ish f64 (error well below one ulp of the result's mantissa
    /// is not guaranteed, but the truncation error is below 2^-100 relative).
    pub fn to_f64(&self) -> f64 {
        if self.num.is_zero() {
            return 0.0;
        }
        let shift = 128i64 + self.den.bits() as i64 - self.num.bits() as i64;
        let q = if shift >= 0 {
            (&self.num << shift as usize) / &self.den
        } else {
            &self.num / (&self.den << (-shift) as usize)
        };
        q.to_f64().unwrap_or(f64::INFINITY) * 2f64.powi(-shift as i32)
    }
}

/// Exact Σ_{n<=x} d(n)²/n over the common denominator lcm(1..x); capped at
/// x = 10⁴ because the denominator grows like e^x.
pub fn d2_over_n_exact(x: u64) -> Result<ExactRational> {
    if x == 0 || x > 10_000 {
        return domain(format!("exact mode supports 1 <= x <= 10^4, got {x}"));
    }
    let t = tables_for(x)?;
    let mut den = BigUint::one();
    for &p in t.primes() {
        let p = p as u64;
        let mut pk = p;
        while pk * p <= x {
            pk *= p;
        }
        den *= pk;
    }
    let mut num = BigUint::zero();
    for n in 1..=x {
        let d = t.divisor_count(n) as u64;
        num += (&den / n) * (d * d);
    }
    Ok(ExactRational { num, den })
}
