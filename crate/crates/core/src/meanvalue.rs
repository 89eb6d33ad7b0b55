//! Mean values Σ_{p<x} f₁(p), Σ_{p<x} f₂(p), the weighted (a, l) sum that
//! controls Σ f₁(p), and its dyadic summation chain.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::{prime::factor_u64, ArithTables, CompensatedSum};
use crate::erdos_straus::Solver;
use crate::error::{domain, Result};
use crate::par::{map_chunks, split_range};
use crate::report::{SumReport, SumRow};

/// Primes handed to one work item in prime sweeps.
const PRIME_CHUNK: usize = 32;

/// Σ_{p<x} f₁(p) and Σ_{p<x} f₂(p) (ordered counts).
pub fn sum_f1_f2(x: u64, workers: usize) -> Result<(u64, u64)> {
    if x < 3 {
        return domain(format!("x must be >= 3, got {x}"));
    }
    let solver = Solver::new(x - 1)?;
    let primes: Vec<u64> = solver.tables().primes().iter().map(|&p| p as u64).filter(|&p| p < x).collect();
    let n_chunks = primes.len().div_ceil(PRIME_CHUNK);
    let parts = map_chunks(n_chunks, workers, |c| -> Result<(u64, u64)> {
        let mut acc = (0, 0);
        for &p in primes.iter().skip(c * PRIME_CHUNK).take(PRIME_CHUNK) {
            let s = solver.type_split(p)?;
            acc.0 += s.f1;
            acc.1 += s.f2;
        }
        Ok(acc)
    })?;
    parts.into_iter().try_fold((0, 0), |acc, r| {
        let (a, b) = r?;
        Ok((acc.0 + a, acc.1 + b))
    })
}

pub fn sum_f1(x: u64, workers: usize) -> Result<u64> {
    Ok(sum_f1_f2(x, workers)?.0)
}

pub fn sum_f2(x: u64, workers: usize) -> Result<u64> {
    Ok(sum_f1_f2(x, workers)?.1)
}

/// Reference functions the mean values are compared against. All logs are
/// natural.
pub mod envelope {
    pub const X_LOG2: &str = "x_log2";
    pub const X_LOG2_LOGLOG: &str = "x_log2_loglog";
    pub const X_LOG5_LOGLOG2: &str = "x_log5_loglog2";
    pub const X_EXP: &str = "x_exp_logx_over_loglog";

    pub fn x_log2(x: f64) -> f64 {
        x * x.ln().powi(2)
    }
    pub fn x_log2_loglog(x: f64) -> f64 {
        x_log2(x) * x.ln().ln()
    }
    pub fn x_log5_loglog2(x: f64) -> f64 {
        x * x.ln().powi(5) * x.ln().ln().powi(2)
    }
    /// x·exp(c log x / log log x) with the display choice c = 1.
    pub fn x_exp(x: f64) -> f64 {
        x * (x.ln() / x.ln().ln()).exp()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanValueReport {
    pub x: u64,
    pub sum_f1: u64,
    pub sum_f2: u64,
    pub envelopes: BTreeMap<String, f64>,
    /// keyed "f1/<envelope>" or "f2/<envelope>"
    pub ratios: BTreeMap<String, f64>,
}

/// Which sum is compared with which envelope.
pub const RATIO_PAIRS: [(&str, &str); 5] = [
    ("f1", envelope::X_LOG2),
    ("f1", envelope::X_EXP),
    ("f1", envelope::X_LOG5_LOGLOG2),
    ("f2", envelope::X_LOG2),
    ("f2", envelope::X_LOG2_LOGLOG),
];

impl MeanValueReport {
    pub fn from_sums(x: u64, sum_f1: u64, sum_f2: u64) -> Self {
        let xf = x as f64;
        let envelopes: BTreeMap<String, f64> = [
            (envelope::X_LOG2, envelope::x_log2(xf)),
            (envelope::X_LOG2_LOGLOG, envelope::x_log2_loglog(xf)),
            (envelope::X_LOG5_LOGLOG2, envelope::x_log5_loglog2(xf)),
            (envelope::X_EXP, envelope::x_exp(xf)),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        let ratios = RATIO_PAIRS
            .iter()
            .map(|&(which, env)| {
                let s = if which == "f1" { sum_f1 } else { sum_f2 };
                (format!("{which}/{env}"), s as f64 / envelopes[env])
            })
            .collect();
        MeanValueReport { x, sum_f1, sum_f2, envelopes, ratios }
    }

    pub fn ratio(&self, which: &str, env: &str) -> f64 {
        self.ratios[&format!("{which}/{env}")]
    }

    /// Wide CSV: a header row and one data row.
    pub fn to_csv(&self) -> String {
        let mut header = vec!["x".to_string(), "sum_f1".into(), "sum_f2".into()];
        let mut row = vec![self.x.to_string(), self.sum_f1.to_string(), self.sum_f2.to_string()];
        for (k, v) in &self.envelopes {
            header.push(k.clone());
            row.push(format!("{v:?}"));
        }
        for (k, v) in &self.ratios {
            header.push(k.clone());
            row.push(format!("{v:?}"));
        }
        format!("{}\n{}\n", header.join(","), row.join(","))
    }

    /// One row per compared (sum, envelope) pair.
    pub fn to_report(&self) -> SumReport {
        let mut r = SumReport::new("mean", [("x", self.x.to_string())]);
        for &(which, env) in &RATIO_PAIRS {
            let v = if which == "f1" { self.sum_f1 } else { self.sum_f2 };
            r.push(SumRow::int(format!("sum_{which}"), v).key("envelope", env).with_envelope(self.envelopes[env]));
        }
        r
    }
}

pub fn mean_value_report(x: u64, workers: usize) -> Result<MeanValueReport> {
    let (f1, f2) = sum_f1_f2(x, workers)?;
    Ok(MeanValueReport::from_sums(x, f1, f2))
}

/// One dyadic block 2^i < a <= 2^(i+1), 2^j < l <= 2^(j+1); index -1 holds
/// a = 1 (resp. l = 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightBlock {
    pub i: i32,
    pub j: i32,
    /// pairs with a·l <= x inside the block
    pub pairs: u64,
    /// Σ of the exact summands over those pairs
    pub block_sum: f64,
    /// Σ d(4la² + 1) over those pairs
    pub divisor_sum: u64,
    /// 1 / (1 + log₂x − i − j)
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSumReport {
    pub x: u64,
    /// Σ_{al<=x} x·d(4la²+1) / (φ(4al)·log(1 + x/(al))), summed pair by pair
    pub direct_value: f64,
    /// the same sum reassembled from `block_table`
    pub dyadic_value: f64,
    /// x·loglog x·Σ weight·2^-(i+j)·divisor_sum: the block-constant form
    pub block_form_value: f64,
    pub block_table: Vec<WeightBlock>,
}

impl WeightSumReport {
    pub fn relative_discrepancy(&self) -> f64 {
        ((self.dyadic_value - self.direct_value) / self.direct_value).abs()
    }

    pub fn to_report(&self) -> SumReport {
        let mut r = SumReport::new("weightsum", [("x", self.x.to_string())]);
        r.push(SumRow::real("direct", self.direct_value));
        r.push(SumRow::real("dyadic", self.dyadic_value).with_envelope(self.direct_value));
        r.push(SumRow::real("block_form", self.block_form_value).with_envelope(self.direct_value));
        for b in &self.block_table {
            r.push(
                SumRow::real("block", b.block_sum)
                    .key("i", b.i)
                    .key("j", b.j)
                    .key("pairs", b.pairs)
                    .key("divisor_sum", b.divisor_sum)
                    .key("weight", format!("{:?}", b.weight)),
            );
        }
        r
    }
}

fn dyadic_index(v: u64) -> i32 {
    if v == 1 {
        -1
    } else {
        (v - 1).ilog2() as i32
    }
}

/// Evaluates the weighted sum over pairs (a, l) with a·l <= x both directly
/// and through dyadic blocks.
pub fn tao_weight_sum(x: u64, workers: usize) -> Result<WeightSumReport> {
    if x < 16 {
        return domain(format!("x must be >= 16, got {x}"));
    }
    let phi = ArithTables::build(4 * x, true, ArithTables::DEFAULT_MEMORY_BUDGET)?;
    let xf = x as f64;
    // rows a, fixed chunking for reproducibility
    let parts = split_range(1, x, 64);
    type Row = (CompensatedSum, BTreeMap<(i32, i32), (u64, CompensatedSum, u64)>);
    let rows = map_chunks(parts.len(), workers, |c| -> Row {
        let (lo, hi) = parts[c];
        let mut direct = CompensatedSum::new();
        let mut blocks: BTreeMap<(i32, i32), (u64, CompensatedSum, u64)> = BTreeMap::new();
        for a in lo..=hi {
            let i = dyadic_index(a);
            for l in 1..=x / a {
                let n = 4 * l * a * a + 1;
                let d: u64 = factor_u64(n).iter().map(|&(_, e)| e as u64 + 1).product();
                let ph = phi.phi(4 * a * l).expect("phi table") as f64;
                let term = xf * d as f64 / (ph * (1.0 + xf / (a * l) as f64).ln());
                direct.add(term);
                let e = blocks.entry((i, dyadic_index(l))).or_insert((0, CompensatedSum::new(), 0));
                e.0 += 1;
                e.1.add(term);
                e.2 += d;
            }
        }
        (direct, blocks)
    })?;
    let mut direct = CompensatedSum::new();
    let mut merged: BTreeMap<(i32, i32), (u64, CompensatedSum, u64)> = BTreeMap::new();
    for (d, blocks) in rows {
        direct.add(d.value());
        for (k, (cnt, s, dsum)) in blocks {
            let e = merged.entry(k).or_insert((0, CompensatedSum::new(), 0));
            e.0 += cnt;
            e.1.add(s.value());
            e.2 += dsum;
        }
    }
    let log2x = xf.log2();
    let mut dyadic = CompensatedSum::new();
    let mut block_form = CompensatedSum::new();
    let block_table: Vec<WeightBlock> = merged
        .into_iter()
        .map(|((i, j), (pairs, s, dsum))| {
            let weight = 1.0 / (1.0 + log2x - i as f64 - j as f64);
            dyadic.add(s.value());
            block_form.add(weight * 2f64.powi(-(i + j)) * dsum as f64);
            WeightBlock { i, j, pairs, block_sum: s.value(), divisor_sum: dsum, weight }
        })
        .collect();
    Ok(WeightSumReport {
        x,
        direct_value: direct.value(),
        dyadic_value: dyadic.value(),
        block_form_value: xf * xf.ln().ln() * block_form.value(),
        block_table,
    })
}

/// Numerical lines of the closing summation chain, without the common
/// prefactor x·log⁴x·loglog x.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinalChain {
    pub x: u64,
    /// (name, value), each line an upper bound for the one before
    pub lines: Vec<(String, f64)>,
    /// x·log⁴x·loglog x
    pub prefactor: f64,
    /// x·log⁵x·(loglog x)²
    pub theorem_envelope: f64,
}

impl FinalChain {
    /// line[k] / line[k−1] for k >= 1.
    pub fn step_ratios(&self) -> Vec<f64> {
        self.lines.windows(2).map(|w| w[1].1 / w[0].1).collect()
    }

    pub fn is_monotone(&self) -> bool {
        self.lines.windows(2).all(|w| w[1].1 >= w[0].1)
    }

    pub fn to_report(&self) -> SumReport {
        let mut r = SumReport::new("final_chain", [("x", self.x.to_string())]);
        let mut prev: Option<f64> = None;
        for (name, v) in &self.lines {
            let mut row = SumRow::real(name, *v);
            if let Some(p) = prev {
                row = row.with_envelope(p);
            }
            r.push(row);
            prev = Some(*v);
        }
        let last = self.lines.last().map(|l| l.1).unwrap_or(0.0);
        r.push(SumRow::real("prefactor_times_last", self.prefactor * last).with_envelope(self.theorem_envelope));
        r
    }
}

fn sorted_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(f64::total_cmp);
    terms.into_iter().collect::<CompensatedSum>().value()
}

/// Evaluates Σ_i Σ_j 1/(1 + log₂x − i − j), its harmonic-number bound,
/// Σ_i log₂(log₂x − i + 2), and (⌊log₂x⌋ + 1)·log₂(log₂x + 2).
///
/// The third line uses base-2 logarithms: H(m) <= log₂(m + 1) for every
/// m >= 1, whereas the natural-log version is only an upper bound up to a
/// constant. Terms are summed in sorted order so equal multisets of terms
/// give bit-identical totals.
pub fn final_chain(x: u64) -> Result<FinalChain> {
    if x < 16 {
        return domain(format!("x must be >= 16, got {x}"));
    }
    let xf = x as f64;
    let big_l = xf.log2();
    let imax = big_l.floor() as i64;
    let mut double = Vec::new();
    let mut harmonic = Vec::new();
    let mut logs = Vec::new();
    for i in 0..=imax {
        let jmax = (big_l - i as f64).floor() as i64;
        for j in 0..=jmax {
            double.push(1.0 / (1.0 + big_l - i as f64 - j as f64));
        }
        let m = (big_l - i as f64 + 1.0).floor() as i64;
        for h in 1..=m {
            harmonic.push(1.0 / h as f64);
        }
        logs.push((big_l - i as f64 + 2.0).log2());
    }
    let closed = (imax as f64 + 1.0) * (big_l + 2.0).log2();
    let lx = xf.ln();
    Ok(FinalChain {
        x,
        lines: vec![
            ("double_sum".into(), sorted_sum(double)),
            ("harmonic".into(), sorted_sum(harmonic)),
            ("log_majorant".into(), sorted_sum(logs)),
            ("closed_form".into(), closed),
        ],
        prefactor: xf * lx.powi(4) * lx.ln(),
        theorem_envelope: envelope::x_log5_loglog2(xf),
    })
}

/// Σ_{p<x} f₁(p) against the weighted (a, l) sum that bounds it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionComparison {
    pub x: u64,
    pub sum_f1: u64,
    pub weight_sum: f64,
    pub ratio: f64,
}

pub fn reduction_comparison(x: u64, workers: usize) -> Result<ReductionComparison> {
    let f1 = sum_f1(x, workers)?;
    let w = tao_weight_sum(x, workers)?.direct_value;
    Ok(ReductionComparison { x, sum_f1: f1, weight_sum: w, ratio: f1 as f64 / w })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{factorize, gcd};

    #[test]
    fn small_mean_values() {
        // f1(2) = 0, f1(3) = 9, f1(5) = 6
        assert_eq!(sum_f1(6, 1).unwrap(), 15);
        assert_eq!(sum_f2(3, 1).unwrap(), 3);
        assert!(sum_f1(2, 1).is_err());
    }

    #[test]
    fn parallel_sweep_is_exact() {
        let a = sum_f1_f2(3000, 1).unwrap();
        assert_eq!(a, sum_f1_f2(3000, 4).unwrap());
        assert_eq!(a, sum_f1_f2(3000, 8).unwrap());
    }

    #[test]
    fn mean_report_ratios_pair_up() {
        let r = MeanValueReport::from_sums(1000, 12345, 678);
        for (which, env) in RATIO_PAIRS {
            let s = if which == "f1" { 12345.0 } else { 678.0 };
            assert_eq!(r.ratio(which, env), s / r.envelopes[env]);
        }
        let csv = r.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0].split(',').count(), lines[1].split(',').count());
    }

    #[test]
    fn weight_sum_first_term_and_first_block() {
        let r = tao_weight_sum(16, 1).unwrap();
        let first = 16.0 * 2.0 / (2.0 * 17f64.ln());
        let b = r.block_table.iter().find(|b| (b.i, b.j) == (-1, -1)).unwrap();
        assert_eq!(b.pairs, 1);
        assert!((b.block_sum - first).abs() < 1e-12);
        let b00 = r.block_table.iter().find(|b| (b.i, b.j) == (0, 0)).unwrap();
        assert_eq!(b00.pairs, 1);
        // (a, l) = (2, 2): 4·2·4 + 1 = 33, d = 4, φ(16) = 8
        assert!((b00.block_sum - 16.0 * 4.0 / (8.0 * 5f64.ln())).abs() < 1e-12);
        assert_eq!(b00.weight, 1.0 / 5.0);
    }

    #[test]
    fn weight_sum_matches_plain_double_loop() {
        // independent: plain f64 loop with factorize() and a gcd-count φ
        let x = 300u64;
        let mut naive = 0.0;
        for a in 1..=x {
            for l in 1..=x / a {
                let d = factorize(4 * l * a * a + 1).unwrap().divisor_count() as f64;
                let m = 4 * a * l;
                let ph = (1..=m).filter(|&k| gcd(k, m) == 1).count() as f64;
                naive += x as f64 * d / (ph * (1.0 + x as f64 / (a * l) as f64).ln());
            }
        }
        let r = tao_weight_sum(x, 2).unwrap();
        assert!(((r.direct_value - naive) / naive).abs() < 1e-12);
        assert!(r.relative_discrepancy() < 1e-12);
        let pairs: u64 = r.block_table.iter().map(|b| b.pairs).sum();
        assert_eq!(pairs, (1..=x).map(|a| x / a).sum::<u64>());
    }

    #[test]
    fn chain_inner_sum_is_harmonic() {
        let c = final_chain(1 << 10).unwrap();
        // i = 0 contributes H(11) to the harmonic line
        let h11: f64 = (1..=11).map(|h| 1.0 / h as f64).sum();
        assert!(c.lines[1].1 > h11);
        assert_eq!(c.lines[0].1.to_bits(), c.lines[1].1.to_bits());
        assert!(c.is_monotone());
        assert!(c.step_ratios().iter().all(|&r| r >= 1.0));
        assert!(final_chain(15).is_err());
    }

    #[test]
    fn chain_non_power_of_two() {
        for x in [17u64, 100, 1000, 12345, 1 << 20] {
            let c = final_chain(x).unwrap();
            assert!(c.is_monotone(), "x = {x}: {:?}", c.lines);
        }
    }

    #[test]
    fn pinned_totals_at_one_thousand() {
        assert_eq!(sum_f1_f2(1000, 2).unwrap(), (30177, 11694));
        let w = tao_weight_sum(1000, 2).unwrap();
        let pinned = 57782.250242282434631;
        assert!(((w.direct_value - pinned) / pinned).abs() < 1e-12);
    }

    #[test]
    fn pinned_chain_at_two_to_twenty() {
        let c = final_chain(1 << 20).unwrap();
        let pinned = [59.197891504780049672, 59.197891504780049672, 69.929132962322278922, 93.64806399138324238];
        assert_eq!(c.lines.len(), pinned.len());
        for ((name, v), p) in c.lines.iter().zip(pinned) {
            assert!(((v - p) / p).abs() < 1e-13, "{name}: {v} vs {p}");
        }
    }
}
