//! Σ_{n >= Z^(1/2), P(n) <= Z^(1/r)} d²(n)/n against
//! exp(Σ_{p<=Z} 4/p − (r/10) log r).

use serde::{Deserialize, Serialize};

use super::Threshold;
use crate::arith::prime::primes_up_to;
use crate::arith::{greatest_prime_factor_table, ArithTables, CompensatedSum};
use crate::error::{domain, Error, Result};
use crate::report::{SumReport, SumRow};

/// Largest truncation point and prime bound accepted.
pub const MAX_TABLE: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma6Report {
    pub z: f64,
    pub r: u32,
    pub n_max: u64,
    /// the sum restricted to n <= n_max
    pub lhs_truncated: f64,
    /// the full infinite sum, from the Euler product
    /// ∏_{p<=y} (1 + 1/p)/(1 − 1/p)³ minus the terms below Z^(1/2)
    pub lhs_infinite: f64,
    /// lhs_infinite − lhs_truncated
    pub tail: f64,
    pub rhs: f64,
    /// lhs_infinite / rhs
    pub ratio: f64,
}

impl Lemma6Report {
    pub fn to_report(&self) -> SumReport {
        let mut r = SumReport::new(
            "lemma6",
            [("Z", format!("{:?}", self.z)), ("r", self.r.to_string()), ("n_max", self.n_max.to_string())],
        );
        r.push(SumRow::real("lhs_truncated", self.lhs_truncated).with_envelope(self.rhs));
        r.push(SumRow::real("tail", self.tail));
        r.push(SumRow::real("lhs_infinite", self.lhs_infinite).with_envelope(self.rhs));
        r.push(SumRow::real("rhs", self.rhs));
        r
    }
}

pub fn lemma6_sum(z: f64, r: u32, n_max: u64) -> Result<Lemma6Report> {
    if !(z >= 16.0) {
        return domain(format!("Z must be >= 16, got {z}"));
    }
    let zt = Threshold::new(z);
    let r_max = zt.z.ln() / zt.z.ln().ln();
    if r < 1 || r as f64 > r_max {
        return domain(format!("need 1 <= r <= log Z/log log Z = {r_max:.4}, got {r}"));
    }
    if n_max > MAX_TABLE || zt.floor > MAX_TABLE {
        return Err(Error::Capacity(format!("tables above {MAX_TABLE} are not supported")));
    }
    if !zt.at_least_sqrt(n_max) {
        return domain(format!("n_max = {n_max} is below Z^(1/2)"));
    }
    let tables = ArithTables::build(n_max, false, ArithTables::DEFAULT_MEMORY_BUDGET)?;
    let gpf = greatest_prime_factor_table(n_max as usize);
    let smooth = |n: u64| n == 1 || zt.root_at_least(gpf[n as usize] as u64, r);
    let mut below = CompensatedSum::new();
    let mut truncated = CompensatedSum::new();
    for n in 1..=n_max {
        if !smooth(n) {
            continue;
        }
        let d = tables.divisor_count(n) as f64;
        if zt.at_least_sqrt(n) {
            truncated.add(d * d / n as f64);
        } else {
            below.add(d * d / n as f64);
        }
    }
    let primes = primes_up_to(zt.floor as u32);
    let mut log_product = CompensatedSum::new();
    let mut prime_sum = CompensatedSum::new();
    for &p in &primes {
        let pf = p as f64;
        prime_sum.add(4.0 / pf);
        if zt.root_at_least(p as u64, r) {
            let x = 1.0 / pf;
            log_product.add(x.ln_1p() - 3.0 * (-x).ln_1p());
        }
    }
    let lhs_infinite = log_product.value().exp() - below.value();
    let rhs = (prime_sum.value() - r as f64 / 10.0 * (r as f64).ln()).exp();
    Ok(Lemma6Report {
        z: zt.z,
        r,
        n_max,
        lhs_truncated: truncated.value(),
        lhs_infinite,
        tail: lhs_infinite - truncated.value(),
        rhs,
        ratio: lhs_infinite / rhs,
    })
}
