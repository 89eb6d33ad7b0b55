//! The divisor sum Σ_{V<l<=2V} Σ_{W<a<=2W} d(4la² + 1), its b·c split and
//! the four-way case partition with the quantities each case relies on.

mod lemma6;
mod sieve;

pub use lemma6::{lemma6_sum, Lemma6Report};
pub use sieve::{BoxSieve, Cell};

use serde::{Deserialize, Serialize};

use crate::arith::prime::{factor_u64, primes_up_to};
use crate::arith::{factorize, gcd, CompensatedSum};
use crate::congruence::linear_root_count;
use crate::error::{domain, Error, Result};
use crate::par::map_chunks;
use crate::report::{SumReport, SumRow};

/// Exponent used when displaying the ε-dependent Case II/III envelopes.
pub const DISPLAY_EPSILON: f64 = 0.05;

/// Split exponent of the original argument, Z = W^(1/20).
pub const DEFAULT_THETA: f64 = 1.0 / 20.0;

/// Z with its integer floor; Z is snapped to an integer when it is one up
/// to floating-point noise, so thresholds compare exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub z: f64,
    pub floor: u64,
}

impl Threshold {
    pub fn new(z: f64) -> Self {
        let r = z.round();
        let z = if (z - r).abs() <= 1e-9 * z.abs().max(1.0) { r } else { z };
        Threshold { z, floor: z.floor() as u64 }
    }

    fn is_integral(&self) -> bool {
        self.z == self.floor as f64
    }

    /// m <= Z^(1/2)
    pub fn below_sqrt(&self, m: u64) -> bool {
        (m as u128) * (m as u128) <= self.floor as u128
    }

    /// m >= Z^(1/2)
    pub fn at_least_sqrt(&self, m: u64) -> bool {
        let sq = (m as u128) * (m as u128);
        sq > self.floor as u128 || (sq == self.floor as u128 && self.is_integral())
    }

    /// p <= Z^(1/r)
    pub fn root_at_least(&self, p: u64, r: u32) -> bool {
        let mut acc: u128 = 1;
        for _ in 0..r {
            acc = acc.saturating_mul(p as u128);
            if acc > self.floor as u128 {
                return false;
            }
        }
        true
    }
}

/// Which variable's box sets the split threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplitFrom {
    /// Z = W^theta (the quadratic congruence in a)
    A,
    /// Z = V^theta (the linear congruence in l, used when W < V)
    L,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxSpec {
    pub v: u64,
    pub w: u64,
    pub theta: f64,
    pub split_from: SplitFrom,
    pub z: Threshold,
    /// log X · log log X for the split variable's box size X (0 when X < 3)
    pub t: f64,
}

impl BoxSpec {
    pub fn new(v: u64, w: u64, theta: f64) -> Result<Self> {
        Self::build(v, w, theta, SplitFrom::A)
    }

    pub fn with_default_theta(v: u64, w: u64) -> Result<Self> {
        Self::new(v, w, DEFAULT_THETA)
    }

    /// Box for the W < V branch: thresholds come from V.
    pub fn linear(v: u64, w: u64, theta: f64) -> Result<Self> {
        if w >= v {
            return domain(format!("linear branch needs W < V, got V = {v}, W = {w}"));
        }
        Self::build(v, w, theta, SplitFrom::L)
    }

    fn build(v: u64, w: u64, theta: f64, split_from: SplitFrom) -> Result<Self> {
        if v == 0 || w == 0 {
            return domain("V and W must be positive");
        }
        if !(theta > 0.0 && theta <= 0.5) {
            return domain(format!("theta must lie in (0, 1/2], got {theta}"));
        }
        let fits = (2 * v as u128) * (2 * w as u128) * (2 * w as u128) * 4 < u64::MAX as u128;
        if !fits {
            return Err(Error::Capacity(format!("4·(2V)·(2W)² + 1 exceeds 64 bits for V = {v}, W = {w}")));
        }
        let x = match split_from {
            SplitFrom::A => w,
            SplitFrom::L => v,
        } as f64;
        let t = if x >= 3.0 { x.ln() * x.ln().ln() } else { 0.0 };
        Ok(BoxSpec { v, w, theta, split_from, z: Threshold::new(x.powf(theta)), t })
    }

    pub fn pairs(&self) -> u64 {
        self.v * self.w
    }

    pub fn n_max(&self) -> u64 {
        32 * self.v * self.w * self.w + 1
    }

    /// ⌊log Z / log T⌋, when T > 1 and Z > 1.
    pub fn r0(&self) -> Option<u32> {
        if self.t <= 1.0 || self.z.z <= 1.0 {
            return None;
        }
        let r = (self.z.z.ln() / self.t.ln()).floor();
        (r >= 0.0).then_some(r as u32)
    }

    /// T >= Z^(1/2): Cases III and IV cannot be told apart as intended and
    /// Case IV is empty.
    pub fn is_degenerate(&self) -> bool {
        self.t * self.t >= self.z.z
    }

    pub fn check_nondegenerate(&self) -> Result<()> {
        if self.is_degenerate() {
            return Err(Error::Config(format!(
                "log W·log log W = {:.4} >= Z^(1/2) = {:.4}; need T < Z^(1/2)",
                self.t,
                self.z.z.sqrt()
            )));
        }
        Ok(())
    }

    pub fn check_split(&self) -> Result<()> {
        if self.z.z < 2.0 {
            return domain(format!("Z = {} < 2: no meaningful split", self.z.z));
        }
        Ok(())
    }

    /// V·W·log⁴(2W)
    pub fn envelope(&self) -> f64 {
        (self.v as f64) * (self.w as f64) * (2.0 * self.w as f64).ln().powi(4)
    }

    fn key(&self, row: SumRow) -> SumRow {
        row.key("V", self.v).key("W", self.w).key("theta", format!("{:?}", self.theta))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BcSplit {
    pub n: u64,
    pub b: u64,
    pub c: u64,
    /// None iff c = 1
    pub least_prime_of_c: Option<u64>,
}

impl BcSplit {
    /// Checks b·c = n, coprimality, b <= Z, maximality and the prefix
    /// property against a fresh factorization of n.
    pub fn check_invariants(&self, z: f64) -> bool {
        let z = Threshold::new(z);
        if self.b.checked_mul(self.c) != Some(self.n) || gcd(self.b, self.c) != 1 || self.b > z.floor {
            return false;
        }
        let f = match factorize(self.n) {
            Ok(f) => f,
            Err(_) => return false,
        };
        let mut b = 1u64;
        for (p, e) in f.factors().iter().copied() {
            if b == self.b {
                let pe = p.pow(e);
                let maximal = (b as u128) * (pe as u128) > z.floor as u128;
                return maximal && self.least_prime_of_c == Some(p);
            }
            b *= p.pow(e);
        }
        b == self.b && self.c == 1 && self.least_prime_of_c.is_none()
    }
}

/// Largest prefix of the sorted prime-power factorization of n with product
/// <= Z, and the remainder.
pub fn split_bc(n: u64, z: f64) -> Result<BcSplit> {
    if !(z >= 2.0) {
        return domain(format!("Z must be >= 2, got {z}"));
    }
    let zt = Threshold::new(z);
    let f = factorize(n)?;
    Ok(split_factored(n, f.factors(), zt.floor))
}

fn split_factored(n: u64, factors: &[(u64, u32)], z_floor: u64) -> BcSplit {
    let mut b = 1u64;
    for &(p, e) in factors {
        let pe = p.pow(e);
        if (b as u128) * (pe as u128) > z_floor as u128 {
            return BcSplit { n, b, c: n / b, least_prime_of_c: Some(p) };
        }
        b *= pe;
    }
    BcSplit { n, b, c: n / b, least_prime_of_c: None }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CaseLabel {
    CaseI,
    CaseII,
    CaseIII,
    CaseIV,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 4] = [CaseLabel::CaseI, CaseLabel::CaseII, CaseLabel::CaseIII, CaseLabel::CaseIV];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            CaseLabel::CaseI => "I",
            CaseLabel::CaseII => "II",
            CaseLabel::CaseIII => "III",
            CaseLabel::CaseIV => "IV",
        }
    }
}

/// Applies the case conditions in order: p(c) > Z^(1/2) (or c = 1), then
/// b <= Z^(1/2), then p(c) <= T, else Case IV.
pub fn classify_parts(b: u64, pc: Option<u64>, z: Threshold, t: f64) -> CaseLabel {
    match pc {
        None => CaseLabel::CaseI,
        Some(p) if !z.below_sqrt(p) => CaseLabel::CaseI,
        Some(_) if z.below_sqrt(b) => CaseLabel::CaseII,
        Some(p) if (p as f64) <= t => CaseLabel::CaseIII,
        Some(_) => CaseLabel::CaseIV,
    }
}

/// Total for degenerate boxes too: when T >= Z^(1/2) Case IV is simply
/// empty. Use [`classify_case_strict`] to reject such boxes.
pub fn classify_case(split: &BcSplit, bx: &BoxSpec) -> CaseLabel {
    classify_parts(split.b, split.least_prime_of_c, bx.z, bx.t)
}

pub fn classify_case_strict(split: &BcSplit, bx: &BoxSpec) -> Result<CaseLabel> {
    bx.check_nondegenerate()?;
    Ok(classify_case(split, bx))
}

/// Smallest s with p^s > Z^(1/2).
pub fn s_p(p: u64, z: f64) -> Result<u32> {
    let zt = Threshold::new(z);
    if !zt.below_sqrt(p) {
        return domain(format!("s_p needs p <= Z^(1/2); p = {p}, Z = {z}"));
    }
    if p < 2 {
        return domain(format!("p must be prime, got {p}"));
    }
    let mut s = 1;
    let mut ps = p as u128;
    while ps * ps <= zt.floor as u128 {
        ps *= p as u128;
        s += 1;
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case2Tail {
    pub z: f64,
    /// Σ_{p <= Z^(1/2)} p^(−s_p)
    pub tail: f64,
    /// π(Z^(1/4))·Z^(−1/2) + Σ_{Z^(1/4) < p <= Z^(1/2)} p^(−2)
    pub majorant: f64,
    pub primes: u64,
    /// every term is at most its majorant term (checked in integers)
    pub dominated: bool,
    /// s_p >= 2 and p^(s_p) <= Z for every p
    pub exponents_ok: bool,
}

impl Case2Tail {
    pub fn to_report(&self) -> SumReport {
        let mut r = SumReport::new("case2_tail", [("Z", format!("{:?}", self.z))]);
        r.push(SumRow::real("tail", self.tail).with_envelope(self.majorant));
        r.push(SumRow::real("majorant", self.majorant).with_envelope(self.z.powf(-0.25)));
        r.push(SumRow::int("primes", self.primes));
        r.push(SumRow::int("dominated", self.dominated as u64));
        r.push(SumRow::int("exponents_ok", self.exponents_ok as u64));
        r
    }
}

pub fn case2_tail(z: f64) -> Result<Case2Tail> {
    if !(z >= 4.0) || z > 1e18 {
        return domain(format!("Z must lie in [4, 1e18], got {z}"));
    }
    let zt = Threshold::new(z);
    let sqrt_bound = crate::arith::prime::isqrt(zt.floor);
    let mut tail = CompensatedSum::new();
    let mut small = 0u64;
    let mut large = CompensatedSum::new();
    let mut dominated = true;
    let mut exponents_ok = true;
    let primes = primes_up_to(sqrt_bound as u32);
    for &p in &primes {
        let p = p as u64;
        let s = s_p(p, zt.z)?;
        let ps = (p as u128).pow(s);
        exponents_ok &= s >= 2 && ps <= zt.floor as u128;
        tail.add((p as f64).powi(-(s as i32)));
        if zt.root_at_least(p, 4) {
            small += 1;
            // p^(−s) <= Z^(−1/2)  <=>  p^(2s) >= Z
            dominated &= ps * ps > zt.floor as u128;
        } else {
            large.add((p as f64).powi(-2));
            dominated &= s >= 2;
        }
    }
    Ok(Case2Tail {
        z: zt.z,
        tail: tail.value(),
        majorant: small as f64 / zt.z.sqrt() + large.value(),
        primes: primes.len() as u64,
        dominated,
        exponents_ok,
    })
}

/// Evaluation strategy for box sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Method {
    /// factor every 4la² + 1 individually
    Direct,
    /// row sieve
    #[default]
    Sieve,
}

fn direct_cell(l: u64, a: u64) -> Vec<(u64, u32)> {
    factor_u64(4 * l * a * a + 1)
}

/// Σ d(4la² + 1) over the box.
pub fn bilinear_sum(bx: &BoxSpec, method: Method, workers: usize) -> Result<u64> {
    Ok(box_sweep(bx, method, workers, None)?.total_sum())
}

/// Direct double loop with l outside and a inside (or the reverse).
pub fn bilinear_sum_serial(bx: &BoxSpec, l_outer: bool) -> u64 {
    let d = |l: u64, a: u64| -> u64 { direct_cell(l, a).iter().map(|&(_, e)| e as u64 + 1).product() };
    let mut s = 0;
    if l_outer {
        for l in bx.v + 1..=2 * bx.v {
            for a in bx.w + 1..=2 * bx.w {
                s += d(l, a);
            }
        }
    } else {
        for a in bx.w + 1..=2 * bx.w {
            for l in bx.v + 1..=2 * bx.v {
                s += d(l, a);
            }
        }
    }
    s
}

pub fn bilinear_divisor_sum(bx: &BoxSpec, method: Method, workers: usize) -> Result<SumReport> {
    let total = bilinear_sum(bx, method, workers)?;
    let mut r = SumReport::new(
        "bilinear",
        [("V", bx.v.to_string()), ("W", bx.w.to_string()), ("theta", format!("{:?}", bx.theta))],
    );
    r.push(bx.key(SumRow::int("total", total).with_envelope(bx.envelope())));
    Ok(r)
}

/// Per-case pair counts and divisor sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CaseTotals {
    pub counts: [u64; 4],
    pub sums: [u64; 4],
}

impl CaseTotals {
    fn add(&mut self, label: CaseLabel, d: u64) {
        self.counts[label.index()] += 1;
        self.sums[label.index()] += d;
    }

    fn merge(&mut self, o: &CaseTotals) {
        for i in 0..4 {
            self.counts[i] += o.counts[i];
            self.sums[i] += o.sums[i];
        }
    }

    pub fn total_sum(&self) -> u64 {
        self.sums.iter().sum()
    }

    pub fn total_count(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Visits every cell of the box and accumulates per-case totals; without a
/// threshold every cell lands in Case I. Chunks are fixed tiles of rows, so
/// the result does not depend on `workers`.
fn box_sweep(bx: &BoxSpec, method: Method, workers: usize, z: Option<Threshold>) -> Result<CaseTotals> {
    let t = bx.t;
    let parts: Vec<CaseTotals> = match (method, bx.split_from) {
        (Method::Sieve, _) => {
            let min_bound = z.map(|z| crate::arith::prime::isqrt(z.floor) + 2).unwrap_or(0).max(t.ceil() as u64 + 2);
            let sieve = BoxSieve::new(bx.v, bx.w, min_bound);
            let tiles = sieve.tiles();
            map_chunks(tiles.len(), workers, |i| {
                let (a0, rows) = tiles[i];
                let mut acc = CaseTotals::default();
                sieve.run_tile(a0, rows, z.map(|z| z.floor), |c| {
                    let label = match z {
                        Some(z) => classify_parts(c.b, c.pc, z, t),
                        None => CaseLabel::CaseI,
                    };
                    acc.add(label, c.d);
                });
                acc
            })?
        }
        (Method::Direct, _) => {
            let rows: Vec<u64> = (bx.w + 1..=2 * bx.w).collect();
            let chunk = 16usize;
            map_chunks(rows.len().div_ceil(chunk), workers, |i| {
                let mut acc = CaseTotals::default();
                for &a in rows.iter().skip(i * chunk).take(chunk) {
                    for l in bx.v + 1..=2 * bx.v {
                        let f = direct_cell(l, a);
                        let d = f.iter().map(|&(_, e)| e as u64 + 1).product();
                        let label = match z {
                            Some(z) => {
                                let s = split_factored(4 * l * a * a + 1, &f, z.floor);
                                classify_parts(s.b, s.least_prime_of_c, z, t)
                            }
                            None => CaseLabel::CaseI,
                        };
                        acc.add(label, d);
                    }
                }
                acc
            })?
        }
    };
    let mut out = CaseTotals::default();
    for p in &parts {
        out.merge(p);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseTable {
    pub spec: BoxSpec,
    pub totals: CaseTotals,
    /// Case IV is structurally empty because T >= Z^(1/2)
    pub degenerate: bool,
}

impl CaseTable {
    pub fn total_sum(&self) -> u64 {
        self.totals.total_sum()
    }

    /// Envelope per case: V·W·log⁴(2W) for I and IV, V·W^(1−1/80+ε) for II,
    /// V·W^(1−1/40+3ε) for III.
    pub fn envelope(&self, label: CaseLabel) -> f64 {
        let (v, w) = (self.spec.v as f64, self.spec.w as f64);
        match label {
            CaseLabel::CaseI | CaseLabel::CaseIV => self.spec.envelope(),
            CaseLabel::CaseII => v * w.powf(1.0 - 1.0 / 80.0 + DISPLAY_EPSILON),
            CaseLabel::CaseIII => v * w.powf(1.0 - 1.0 / 40.0 + 3.0 * DISPLAY_EPSILON),
        }
    }

    pub fn to_report(&self) -> SumReport {
        let s = &self.spec;
        let mut r = SumReport::new(
            "cases",
            [
                ("V", s.v.to_string()),
                ("W", s.w.to_string()),
                ("theta", format!("{:?}", s.theta)),
                ("Z", format!("{:?}", s.z.z)),
                ("T", format!("{:?}", s.t)),
                ("degenerate", self.degenerate.to_string()),
            ],
        );
        for label in CaseLabel::ALL {
            let i = label.index();
            r.push(
                s.key(SumRow::int("sum", self.totals.sums[i]).with_envelope(self.envelope(label)))
                    .key("case", label.name())
                    .key("pairs", self.totals.counts[i]),
            );
        }
        r.push(s.key(SumRow::int("total", self.total_sum()).with_envelope(s.envelope())).key("case", "all"));
        r
    }
}

/// Partitions the box by case and sums d(4la² + 1) within each class.
pub fn case_contributions(bx: &BoxSpec, method: Method, workers: usize) -> Result<CaseTable> {
    bx.check_split()?;
    let totals = box_sweep(bx, method, workers, Some(bx.z))?;
    Ok(CaseTable { spec: *bx, totals, degenerate: bx.is_degenerate() })
}

/// The unique r with Z^(1/(r+1)) < p <= Z^(1/r), if p <= Z.
pub fn level_of(p: u64, z: Threshold) -> Option<u32> {
    if !z.root_at_least(p, 1) {
        return None;
    }
    let mut r = 1;
    while z.root_at_least(p, r + 1) {
        r += 1;
    }
    Some(r)
}

/// Ω(c) followed by its successive upper bounds
/// log c/log p(c), 3 log N/log p(c), 3(r+1) log N/log Z and 6r log N/log Z,
/// with N the largest value in the box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaChain {
    pub omega: u32,
    pub r: u32,
    pub bounds: [f64; 4],
}

impl OmegaChain {
    pub fn holds(&self) -> bool {
        let mut prev = self.omega as f64;
        for &b in &self.bounds {
            if b < prev {
                return false;
            }
            prev = b;
        }
        true
    }
}

pub fn omega_chain(split: &BcSplit, bx: &BoxSpec, r: u32) -> Result<OmegaChain> {
    let pc = match split.least_prime_of_c {
        Some(p) => p,
        None => return domain("c = 1 has no least prime"),
    };
    if classify_case(split, bx) != CaseLabel::CaseIV {
        return domain(format!("n = {} is not in Case IV", split.n));
    }
    if level_of(pc, bx.z) != Some(r) {
        return domain(format!("p(c) = {pc} is not in (Z^(1/{}), Z^(1/{r})]", r + 1));
    }
    let r0 = bx.r0().unwrap_or(0);
    if r < 2 || r > r0 {
        return domain(format!("need 2 <= r <= r0 = {r0}, got {r}"));
    }
    let omega = factorize(split.c)?.big_omega();
    let lp = (pc as f64).ln();
    let ln = (bx.n_max() as f64).ln();
    let lz = bx.z.z.ln();
    Ok(OmegaChain {
        omega,
        r,
        bounds: [
            (split.c as f64).ln() / lp,
            3.0 * ln / lp,
            3.0 * (r as f64 + 1.0) * ln / lz,
            6.0 * r as f64 * ln / lz,
        ],
    })
}

/// Ω(c) <= 3 log N / log p(c) for a Case IV split at level r.
pub fn omega_bound_check(split: &BcSplit, bx: &BoxSpec, r: u32) -> Result<bool> {
    let ch = omega_chain(split, bx, r)?;
    Ok(ch.omega as f64 <= ch.bounds[1])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearBranch {
    pub table: CaseTable,
    pub direct_total: u64,
    /// pairs whose b admits exactly one l modulo b
    pub root_count_ok: u64,
    pub root_count_violations: u64,
}

impl LinearBranch {
    pub fn to_report(&self) -> SumReport {
        let mut r = self.table.to_report();
        r.label = "linear_branch".into();
        r.push(SumRow::int("direct_total", self.direct_total));
        r.push(SumRow::int("root_count_ok", self.root_count_ok));
        r.push(SumRow::int("root_count_violations", self.root_count_violations));
        r
    }
}

/// The W < V branch: split threshold from V, and the congruence in l is
/// linear, so each b carries at most one residue class of l.
pub fn linear_branch_sum(bx: &BoxSpec, workers: usize) -> Result<LinearBranch> {
    if bx.split_from != SplitFrom::L {
        return domain("linear branch needs a box built with BoxSpec::linear");
    }
    bx.check_split()?;
    let z = bx.z;
    let t = bx.t;
    let rows: Vec<u64> = (bx.v + 1..=2 * bx.v).collect();
    let chunk = 16usize;
    let parts = map_chunks(rows.len().div_ceil(chunk), workers, |i| -> Result<(CaseTotals, u64, u64)> {
        let mut acc = CaseTotals::default();
        let (mut ok, mut bad) = (0, 0);
        for &l in rows.iter().skip(i * chunk).take(chunk) {
            for a in bx.w + 1..=2 * bx.w {
                let n = 4 * l * a * a + 1;
                let f = factor_u64(n);
                let d = f.iter().map(|&(_, e)| e as u64 + 1).product();
                let s = split_factored(n, &f, z.floor);
                acc.add(classify_parts(s.b, s.least_prime_of_c, z, t), d);
                if linear_root_count(a, s.b)? == 1 {
                    ok += 1;
                } else {
                    bad += 1;
                }
            }
        }
        Ok((acc, ok, bad))
    })?;
    let mut totals = CaseTotals::default();
    let (mut ok, mut bad) = (0, 0);
    for p in parts {
        let (t, o, b) = p?;
        totals.merge(&t);
        ok += o;
        bad += b;
    }
    Ok(LinearBranch {
        table: CaseTable { spec: *bx, totals, degenerate: bx.is_degenerate() },
        direct_total: bilinear_sum(bx, Method::Sieve, workers)?,
        root_count_ok: ok,
        root_count_violations: bad,
    })
}

#[cfg(test)]
mod tests;
