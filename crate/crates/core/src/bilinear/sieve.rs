//! Row sieve for d(4la² + 1) over a box V < l <= 2V, W < a <= 2W.
//!
//! For a fixed row a the values 4a²·l + 1 form an arithmetic progression in
//! l, so every odd prime p not dividing a hits exactly one residue class
//! l ≡ −(4a²)⁻¹ (mod p). All primes up to a bound P with P³ > max n are
//! sieved out; the remaining cofactor is then 1, a prime, a prime square or
//! a product of two primes.

use crate::arith::prime::{icbrt, is_prime_odd_large_batch, is_square, primes_up_to};

/// Rows sharing one batch inversion per prime.
const TILE_ROWS: u64 = 32;

#[derive(Debug, Clone, Copy)]
struct SievePrime {
    p: u64,
    /// ⌊(2⁶⁴ − 1)/p⌋, for Barrett reduction and the divisibility test
    lim: u64,
    /// p⁻¹ mod 2⁶⁴
    pinv: u64,
    inv4: u64,
    /// (V + 1) mod p
    start: u64,
}

impl SievePrime {
    fn new(p: u64, v: u64) -> Self {
        let mut pinv = p;
        for _ in 0..5 {
            pinv = pinv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(pinv)));
        }
        let inv2 = p.div_ceil(2);
        SievePrime { p, lim: u64::MAX / p, pinv, inv4: inv2 * inv2 % p, start: (v + 1) % p }
    }

    #[inline]
    fn mulmod(&self, x: u64, y: u64) -> u64 {
        let t = x * y;
        let q = ((t as u128 * self.lim as u128) >> 64) as u64;
        let mut r = t - q * self.p;
        while r >= self.p {
            r -= self.p;
        }
        r
    }
}

/// a⁻¹ mod p for 0 < a < p < 2³².
fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(p as i64) as u64
}

/// Per-cell outcome handed to the consumer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    pub l: u64,
    pub a: u64,
    pub d: u64,
    /// smooth prefix b <= Z (only with tracking)
    pub b: u64,
    /// least prime of c; `Some(bound + 1)` stands for "larger than the
    /// sieve bound"
    pub pc: Option<u64>,
}

pub struct BoxSieve {
    v: u64,
    w: u64,
    bound: u64,
    primes: Vec<SievePrime>,
}

impl BoxSieve {
    /// Sieve bound: at least the cube root of the largest value (so rough
    /// cofactors have at most two prime factors), at least `min_bound`, and
    /// about V·log V so that fewer cofactors need a primality test.
    pub fn new(v: u64, w: u64, min_bound: u64) -> Self {
        let auto = (v as f64 * (v as f64).ln().max(1.0) * 2.0) as u64;
        Self::with_bound(v, w, auto.max(min_bound))
    }

    /// As [`BoxSieve::new`] with an explicit bound (raised to the cube-root
    /// minimum when smaller).
    pub fn with_bound(v: u64, w: u64, bound: u64) -> Self {
        let n_max = 32 * v * w * w + 1;
        let bound = bound.max(icbrt(n_max) + 1).max(64).min(u32::MAX as u64 / 2);
        let primes = primes_up_to(bound as u32).into_iter().skip(1).map(|p| SievePrime::new(p as u64, v)).collect();
        BoxSieve { v, w, bound, primes }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Row tiles as (first a, row count); depends only on the box.
    pub fn tiles(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        let mut a = self.w + 1;
        while a <= 2 * self.w {
            let r = TILE_ROWS.min(2 * self.w + 1 - a);
            out.push((a, r));
            a += r;
        }
        out
    }

    /// First sieve offset j (l = V + 1 + j) for every (row, prime), or
    /// u32::MAX when p divides a.
    fn row_offsets(&self, a0: u64, rows: usize) -> Vec<u32> {
        let np = self.primes.len();
        let mut offsets = vec![u32::MAX; rows * np];
        let mut prefix = vec![0u64; rows];
        for (pi, sp) in self.primes.iter().enumerate() {
            let p = sp.p;
            let first = a0 % p;
            let mut acc = 1u64;
            let mut am = first;
            for pre in prefix.iter_mut() {
                if am != 0 {
                    acc = sp.mulmod(acc, am);
                }
                *pre = acc;
                am += 1;
                if am == p {
                    am = 0;
                }
            }
            let mut inv = inv_mod(acc, p);
            let mut am = (first + rows as u64 - 1) % p;
            for r in (0..rows).rev() {
                if am != 0 {
                    let before = if r == 0 { 1 } else { prefix[r - 1] };
                    let ia = sp.mulmod(inv, before);
                    inv = sp.mulmod(inv, am);
                    // l ≡ −(4a²)⁻¹ (mod p)
                    let t = sp.mulmod(sp.mulmod(ia, ia), sp.inv4);
                    let mut j = p - t + p - sp.start;
                    while j >= p {
                        j -= p;
                    }
                    offsets[r * np + pi] = j as u32;
                }
                am = if am == 0 { p - 1 } else { am - 1 };
            }
        }
        offsets
    }

    /// Sieves one tile. With `z_floor = Some(z)` the b·c split against ⌊Z⌋
    /// is tracked as well.
    pub fn run_tile<F: FnMut(Cell)>(&self, a0: u64, rows: u64, z_floor: Option<u64>, mut visit: F) {
        let v = self.v as usize;
        let rows_us = rows as usize;
        let np = self.primes.len();
        let offsets = self.row_offsets(a0, rows_us);
        let track = z_floor.is_some();
        let zf = z_floor.unwrap_or(0);
        let mut rem = vec![0u64; v];
        let mut d = vec![1u32; v];
        let (mut bs, mut pcs) = if track { (vec![1u64; v], vec![0u64; v]) } else { (Vec::new(), Vec::new()) };
        let mut factor = vec![0u8; v];
        let mut cand_idx = Vec::new();
        let mut cand = Vec::new();
        let mut verdict = Vec::new();
        let bound_sq = self.bound as u128 * self.bound as u128;
        for r in 0..rows_us {
            let a = a0 + r as u64;
            let step = 4 * a * a;
            let mut x = step * (self.v + 1) + 1;
            for slot in rem.iter_mut() {
                *slot = x;
                x = x.wrapping_add(step);
            }
            d.fill(1);
            if track {
                bs.fill(1);
                pcs.fill(0);
            }
            for (sp, &j0) in self.primes.iter().zip(&offsets[r * np..(r + 1) * np]) {
                if j0 == u32::MAX {
                    continue;
                }
                let p = sp.p;
                let mut j = j0 as usize;
                while j < v {
                    let mut q = rem[j].wrapping_mul(sp.pinv);
                    let mut e = 1u32;
                    let mut pe = p;
                    loop {
                        let q2 = q.wrapping_mul(sp.pinv);
                        if q2 > sp.lim {
                            break;
                        }
                        q = q2;
                        e += 1;
                        pe = pe.saturating_mul(p);
                    }
                    rem[j] = q;
                    d[j] *= e + 1;
                    if track && pcs[j] == 0 {
                        match bs[j].checked_mul(pe) {
                            Some(nb) if nb <= zf => bs[j] = nb,
                            _ => pcs[j] = p,
                        }
                    }
                    j += p as usize;
                }
            }
            cand_idx.clear();
            cand.clear();
            for (j, (&c, f)) in rem.iter().zip(factor.iter_mut()).enumerate() {
                *f = if c == 1 {
                    1
                } else if (c as u128) <= bound_sq {
                    2
                } else if is_square(c) {
                    3
                } else {
                    cand_idx.push(j);
                    cand.push(c);
                    0
                };
            }
            is_prime_odd_large_batch(&cand, &mut verdict);
            for (&j, &prime) in cand_idx.iter().zip(&verdict) {
                factor[j] = if prime { 2 } else { 4 };
            }
            for j in 0..v {
                let (b, pc) = if track {
                    let pc = match pcs[j] {
                        0 if rem[j] > 1 => Some(self.bound + 1),
                        0 => None,
                        p => Some(p),
                    };
                    (bs[j], pc)
                } else {
                    (0, None)
                };
                visit(Cell { l: self.v + 1 + j as u64, a, d: d[j] as u64 * factor[j] as u64, b, pc });
            }
        }
    }

    pub fn w(&self) -> u64 {
        self.w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::prime::factor_u64;

    fn oracle_d(n: u64) -> u64 {
        factor_u64(n).iter().map(|&(_, e)| e as u64 + 1).product()
    }

    #[test]
    fn matches_factorization_on_small_boxes() {
        for (v, w) in [(1, 1), (1, 2), (2, 1), (7, 5), (16, 64), (100, 3), (37, 200)] {
            let s = BoxSieve::new(v, w, 0);
            let mut seen = 0;
            for (a0, rows) in s.tiles() {
                s.run_tile(a0, rows, None, |c| {
                    assert_eq!(c.d, oracle_d(4 * c.l * c.a * c.a + 1), "l={} a={}", c.l, c.a);
                    seen += 1;
                });
            }
            assert_eq!(seen, v * w);
        }
    }

    #[test]
    fn two_prime_cofactors_resolved() {
        // box where the cofactor regularly is a product of two primes
        let s = BoxSieve::new(512, 512, 0);
        assert!(s.bound().pow(3) > 32 * 512 * 512 * 512);
        let (a0, rows) = s.tiles()[0];
        s.run_tile(a0, rows.min(4), None, |c| assert_eq!(c.d, oracle_d(4 * c.l * c.a * c.a + 1)));
    }

    #[test]
    fn tracked_split_matches_direct_split() {
        let s = BoxSieve::new(64, 64, 0);
        for z in [4u64, 8, 30] {
            for (a0, rows) in s.tiles() {
                s.run_tile(a0, rows, Some(z), |c| {
                    let n = 4 * c.l * c.a * c.a + 1;
                    let f = factor_u64(n);
                    let mut b = 1u64;
                    let mut pc = None;
                    for &(p, e) in &f {
                        let pe = p.pow(e);
                        if pc.is_none() && b * pe <= z {
                            b *= pe;
                        } else if pc.is_none() {
                            pc = Some(p);
                        }
                    }
                    assert_eq!(c.b, b);
                    match (c.pc, pc) {
                        (Some(x), Some(y)) if y > s.bound() => assert_eq!(x, s.bound() + 1),
                        (x, y) => assert_eq!(x, y, "n={n}"),
                    }
                });
            }
        }
    }
}
