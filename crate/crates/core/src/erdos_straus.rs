//! Solutions of 4/n = 1/n₁ + 1/n₂ + 1/n₃ in positive integers.
//!
//! Solutions are stored canonically (n₁ <= n₂ <= n₃); f(n) counts ordered
//! triples, obtained by weighting each canonical triple with its number of
//! distinct permutations.
//!
//! For each admissible n₁ the remainder 4/n − 1/n₁ = A/B (in lowest terms)
//! is written as 1/x + 1/y, which happens exactly when
//! (Ax − B)(Ay − B) = B². So x ranges over (u + B)/A for divisors u <= B of B²
//! with u ≡ −B (mod A).

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, ArithTables};
use crate::error::{domain, Error, Result};

/// Largest n accepted by the enumerator; beyond it n₃ may overflow `u64`.
pub const MAX_N: u64 = 120_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SolutionTriple {
    pub n1: u64,
    pub n2: u64,
    pub n3: u64,
}

impl SolutionTriple {
    pub fn new(n1: u64, n2: u64, n3: u64) -> Self {
        SolutionTriple { n1, n2, n3 }
    }

    /// Exact test of 1/n₁ + 1/n₂ + 1/n₃ = 4/n.
    pub fn solves(&self, n: u64) -> bool {
        let (a, b, c) = (self.n1 as u128, self.n2 as u128, self.n3 as u128);
        if a == 0 || b == 0 || c == 0 || n == 0 {
            return false;
        }
        // 4abc = n(bc + ac + ab); both sides fit in u128 for u64 inputs
        // only when abc does, so go through checked arithmetic
        let lhs = a.checked_mul(b).and_then(|ab| ab.checked_mul(c)).and_then(|v| v.checked_mul(4));
        let rhs = (b * c)
            .checked_add(a * c)
            .and_then(|s| s.checked_add(a * b))
            .and_then(|s| s.checked_mul(n as u128));
        matches!((lhs, rhs), (Some(l), Some(r)) if l == r)
    }

    pub fn sorted(&self) -> Self {
        let mut v = [self.n1, self.n2, self.n3];
        v.sort_unstable();
        SolutionTriple::new(v[0], v[1], v[2])
    }

    /// Number of distinct orderings: 6, 3 or 1.
    pub fn permutation_count(&self) -> u64 {
        let s = self.sorted();
        match (s.n1 == s.n2, s.n2 == s.n3) {
            (true, true) => 1,
            (false, false) => 6,
            _ => 3,
        }
    }

    pub fn permutations(&self) -> Vec<SolutionTriple> {
        let [a, b, c] = [self.n1, self.n2, self.n3];
        let mut v = vec![
            SolutionTriple::new(a, b, c),
            SolutionTriple::new(a, c, b),
            SolutionTriple::new(b, a, c),
            SolutionTriple::new(b, c, a),
            SolutionTriple::new(c, a, b),
            SolutionTriple::new(c, b, a),
        ];
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// All solutions for a given n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionSet {
    pub n: u64,
    pub canonical: Vec<SolutionTriple>,
    /// f(n): ordered solutions.
    pub ordered_count: u64,
}

impl SolutionSet {
    pub fn unordered_count(&self) -> u64 {
        self.canonical.len() as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolutionType {
    /// exactly one denominator divisible by p
    TypeI,
    /// exactly two denominators divisible by p
    TypeII,
    Other,
}

/// f(p) split by type, all counts ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeSplit {
    pub p: u64,
    pub f1: u64,
    pub f2: u64,
    pub other: u64,
}

impl TypeSplit {
    pub fn total(&self) -> u64 {
        self.f1 + self.f2 + self.other
    }
}

/// Counts how many of the denominators p divides.
pub fn classify(p: u64, s: &SolutionTriple) -> Result<SolutionType> {
    if !s.solves(p) {
        return domain(format!(
            "({}, {}, {}) does not solve 4/{p}",
            s.n1, s.n2, s.n3
        ));
    }
    let k = [s.n1, s.n2, s.n3].iter().filter(|&&v| v % p == 0).count();
    Ok(match k {
        1 => SolutionType::TypeI,
        2 => SolutionType::TypeII,
        _ => SolutionType::Other,
    })
}

/// Enumerator holding a sieve large enough for every n up to its bound.
#[derive(Debug, Clone)]
pub struct Solver {
    tables: ArithTables,
    max_n: u64,
}

/// Scratch buffers reused across n₁ values.
#[derive(Default)]
struct Scratch {
    factors: Vec<(u64, u32)>,
    divisors: Vec<u64>,
}

impl Solver {
    pub fn new(max_n: u64) -> Result<Self> {
        if max_n > MAX_N {
            return Err(Error::Capacity(format!("n up to {max_n} exceeds {MAX_N}")));
        }
        let tables = ArithTables::build(max_n.max(2), false, ArithTables::DEFAULT_MEMORY_BUDGET)?;
        Ok(Solver { tables, max_n })
    }

    pub fn tables(&self) -> &ArithTables {
        &self.tables
    }

    fn check_n(&self, n: u64) -> Result<()> {
        if n == 0 {
            return domain("n must be >= 1");
        }
        if n > self.max_n {
            return Err(Error::Capacity(format!("n = {n} beyond solver bound {}", self.max_n)));
        }
        Ok(())
    }

    pub fn n1_range(n: u64) -> std::ops::RangeInclusive<u64> {
        (n / 4 + 1)..=(3 * n / 4)
    }

    /// Visits every canonical triple with first entry `n1`; stops early
    /// when `visit` returns false. Returns false iff stopped early.
    fn for_each_with_n1<F>(&self, n: u64, n1: u64, scratch: &mut Scratch, visit: &mut F) -> bool
    where
        F: FnMut(SolutionTriple) -> bool,
    {
        let a0 = 4 * n1 - n;
        let b0 = n * n1;
        let g = gcd(a0, b0);
        let a = a0 / g;
        let b = b0 / g;

        // factorization of b = n·n₁/g, exponents doubled for b²
        scratch.factors.clear();
        let fn_ = self.tables.factor_small(n as u32);
        let fn1 = self.tables.factor_small(n1 as u32);
        let (mut i, mut j) = (0, 0);
        while i < fn_.len() || j < fn1.len() {
            let (p, e) = match (fn_.get(i), fn1.get(j)) {
                (Some(&(p, e)), Some(&(q, f))) if p == q => {
                    i += 1;
                    j += 1;
                    (p, e + f)
                }
                (Some(&(p, e)), Some(&(q, _))) if p < q => {
                    i += 1;
                    (p, e)
                }
                (Some(_), Some(&(q, f))) => {
                    j += 1;
                    (q, f)
                }
                (Some(&(p, e)), None) => {
                    i += 1;
                    (p, e)
                }
                (None, Some(&(q, f))) => {
                    j += 1;
                    (q, f)
                }
                (None, None) => unreachable!(),
            };
            let mut e = e;
            let mut gg = g;
            while gg % p == 0 {
                gg /= p;
                e -= 1;
            }
            if e > 0 {
                scratch.factors.push((p, 2 * e));
            }
        }

        // divisors u of b² with u <= b
        let divs = &mut scratch.divisors;
        divs.clear();
        divs.push(1);
        for &(p, e2) in &scratch.factors {
            let len = divs.len();
            for k in 0..len {
                let mut u = divs[k];
                for _ in 0..e2 {
                    u *= p;
                    if u > b {
                        break;
                    }
                    divs.push(u);
                }
            }
        }
        let b2 = b as u128 * b as u128;
        for &u in divs.iter() {
            if (u + b) % a != 0 {
                continue;
            }
            let x = (u + b) / a;
            if x < n1 {
                continue;
            }
            let v = b2 / u as u128;
            let y = (v + b as u128) / a as u128;
            debug_assert!(y <= u64::MAX as u128);
            if !visit(SolutionTriple::new(n1, x, y as u64)) {
                return false;
            }
        }
        true
    }

    pub fn enumerate(&self, n: u64) -> Result<SolutionSet> {
        self.check_n(n)?;
        let mut scratch = Scratch::default();
        let mut canonical = Vec::new();
        for n1 in Self::n1_range(n) {
            self.for_each_with_n1(n, n1, &mut scratch, &mut |t| {
                canonical.push(t);
                true
            });
        }
        canonical.sort_unstable();
        let ordered_count = canonical.iter().map(SolutionTriple::permutation_count).sum();
        Ok(SolutionSet { n, canonical, ordered_count })
    }

    /// f(n) > 0, stopping at the first solution found.
    pub fn has_solution(&self, n: u64) -> Result<bool> {
        self.check_n(n)?;
        let mut scratch = Scratch::default();
        for n1 in Self::n1_range(n) {
            if !self.for_each_with_n1(n, n1, &mut scratch, &mut |_| false) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn type_split(&self, p: u64) -> Result<TypeSplit> {
        self.check_n(p)?;
        if !self.tables.is_prime(p) {
            return domain(format!("{p} is not prime"));
        }
        let mut split = TypeSplit { p, f1: 0, f2: 0, other: 0 };
        let mut scratch = Scratch::default();
        for n1 in Self::n1_range(p) {
            self.for_each_with_n1(p, n1, &mut scratch, &mut |t| {
                let k = (t.n1 % p == 0) as u8 + (t.n2 % p == 0) as u8 + (t.n3 % p == 0) as u8;
                let w = t.permutation_count();
                match k {
                    1 => split.f1 += w,
                    2 => split.f2 += w,
                    _ => split.other += w,
                }
                true
            });
        }
        Ok(split)
    }
}

/// Canonical solutions and f(n) for a single n.
pub fn enumerate_solutions(n: u64) -> Result<SolutionSet> {
    Solver::new(n.max(2))?.enumerate(n)
}

/// f₁(p), f₂(p) and the remainder for a single prime.
pub fn type_split(p: u64) -> Result<TypeSplit> {
    Solver::new(p.max(2))?.type_split(p)
}
