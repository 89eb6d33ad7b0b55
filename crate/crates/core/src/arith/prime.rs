//! 64-bit primality and factor splitting.
//!
//! Everything here works on odd moduli in Montgomery form. `is_prime` is the
//! Baillie–PSW combination (strong base-2 test followed by a strong Lucas test
//! with Selfridge parameters), which has no counterexample below 2^64.

use std::sync::OnceLock;

/// Montgomery arithmetic modulo an odd `u64`.
#[derive(Debug, Clone, Copy)]
pub struct Montgomery {
    n: u64,
    n_inv: u64,
    r2: u64,
    one: u64,
}

impl Montgomery {
    pub fn new(n: u64) -> Self {
        assert!(n & 1 == 1 && n > 1, "Montgomery modulus must be odd and > 1");
        let mut inv = n;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(n.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % n as u128) as u64;
        let r2 = ((r as u128 * r as u128) % n as u128) as u64;
        Montgomery { n, n_inv: inv, r2, one: r }
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.n
    }

    #[inline]
    pub fn one(&self) -> u64 {
        self.one
    }

    #[inline]
    fn reduce(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.n_inv);
        let mn = m as u128 * self.n as u128;
        let (res, borrow) = ((t >> 64) as u64).overflowing_sub((mn >> 64) as u64);
        res.wrapping_add(self.n & mask(borrow))
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let (s, carry) = a.overflowing_add(b);
        let (t, borrow) = s.overflowing_sub(self.n);
        select(carry | !borrow, t, s)
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        let (d, borrow) = a.overflowing_sub(b);
        d.wrapping_add(self.n & mask(borrow))
    }

    #[inline]
    fn half(&self, x: u64) -> u64 {
        (x >> 1) + (((self.n >> 1) + 1) & mask(x & 1 == 1))
    }

    pub fn to_mont(&self, x: u64) -> u64 {
        self.mul(x % self.n, self.r2)
    }

    pub fn from_mont(&self, x: u64) -> u64 {
        self.reduce(x as u128)
    }

    pub fn pow(&self, base: u64, mut exp: u64) -> u64 {
        let mut acc = self.one;
        let mut b = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }
}

/// All ones when `b`, else zero.
#[inline(always)]
fn mask(b: bool) -> u64 {
    (b as u64).wrapping_neg()
}

#[inline(always)]
fn select(b: bool, x: u64, y: u64) -> u64 {
    let m = mask(b);
    (x & m) | (y & !m)
}

const SMALL_PRIMES: [u64; 18] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61];

/// Strong probable-prime test to base 2 for odd `n > 2`.
pub fn sprp_base2(mont: &Montgomery) -> bool {
    let n = mont.modulus();
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let minus_one = n - mont.one();
    // left-to-right: square, then double when the bit is set
    let mut x = mont.one();
    let top = 63 - d.leading_zeros();
    for bit in (0..=top).rev() {
        x = mont.mul(x, x);
        x = select((d >> bit) & 1 == 1, mont.add(x, x), x);
    }
    if x == mont.one() || x == minus_one {
        return true;
    }
    for _ in 1..s {
        x = mont.mul(x, x);
        if x == minus_one {
            return true;
        }
        if x == mont.one() {
            return false;
        }
    }
    false
}

/// Strong probable-prime test to an arbitrary base.
pub fn sprp(mont: &Montgomery, base: u64) -> bool {
    let n = mont.modulus();
    let a = base % n;
    if a == 0 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let minus_one = n - mont.one();
    let mut x = mont.pow(mont.to_mont(a), d);
    if x == mont.one() || x == minus_one {
        return true;
    }
    for _ in 1..s {
        x = mont.mul(x, x);
        if x == minus_one {
            return true;
        }
        if x == mont.one() {
            return false;
        }
    }
    false
}

/// Jacobi symbol (a / n) for odd positive `n`.
pub fn jacobi(a: i64, n: u64) -> i32 {
    debug_assert!(n & 1 == 1);
    let j = jacobi_unsigned(a.unsigned_abs() % n, n);
    // (−1/n) = 1 iff n ≡ 1 (mod 4)
    if a < 0 && n & 3 == 3 {
        -j
    } else {
        j
    }
}

fn jacobi_unsigned(mut a: u64, mut n: u64) -> i32 {
    let mut result = 1;
    if a >= n {
        a %= n;
    }
    while a != 0 {
        while a & 1 == 0 {
            a >>= 1;
            let r = n & 7;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a & 3 == 3 && n & 3 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Strong Lucas probable-prime test with Selfridge's parameter choice.
/// `n` must be odd, > 2 and not a perfect square.
pub fn strong_lucas(mont: &Montgomery) -> bool {
    let n = mont.modulus();
    let mut d: i64 = 5;
    loop {
        let j = jacobi(d, n);
        if j == -1 {
            break;
        }
        if j == 0 && d.unsigned_abs() != n {
            return false;
        }
        d = if d > 0 { -(d + 2) } else { -d + 2 };
    }
    let q = (1 - d) / 4;
    let to_m = |v: i64| -> u64 {
        let r = (v as i128).rem_euclid(n as i128) as u64;
        mont.to_mont(r)
    };
    let dm = to_m(d);
    let qm = to_m(q);

    let np1 = n as u128 + 1;
    let s = np1.trailing_zeros();
    let k = (np1 >> s) as u64;

    let mut u = mont.one();
    let mut v = mont.one();
    let mut qk = qm;
    let top = 63 - k.leading_zeros();
    for bit in (0..top).rev() {
        u = mont.mul(u, v);
        v = mont.sub(mont.mul(v, v), mont.add(qk, qk));
        qk = mont.mul(qk, qk);
        let set = (k >> bit) & 1 == 1;
        let u_next = mont.half(mont.add(u, v));
        let v_next = mont.half(mont.add(mont.mul(dm, u), v));
        u = select(set, u_next, u);
        v = select(set, v_next, v);
        qk = select(set, mont.mul(qk, qm), qk);
    }
    if u == 0 || v == 0 {
        return true;
    }
    for _ in 1..s {
        v = mont.sub(mont.mul(v, v), mont.add(qk, qk));
        qk = mont.mul(qk, qk);
        if v == 0 {
            return true;
        }
    }
    false
}

pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).map_or(true, |sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

pub fn icbrt(n: u64) -> u64 {
    let mut r = (n as f64).cbrt() as u64;
    let cube = |x: u64| (x as u128).pow(3);
    while r > 0 && cube(r) > n as u128 {
        r -= 1;
    }
    while cube(r + 1) <= n as u128 {
        r += 1;
    }
    r
}

pub fn is_square(n: u64) -> bool {
    let r = isqrt(n);
    r * r == n
}

/// Deterministic primality for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    if n < 67 * 67 {
        return true;
    }
    let mont = Montgomery::new(n);
    is_prime_odd_large(&mont)
}

/// Baillie–PSW core for an odd `n` with no prime factor below 67.
#[inline]
pub fn is_prime_odd_large(mont: &Montgomery) -> bool {
    if !sprp_base2(mont) {
        return false;
    }
    if is_square(mont.modulus()) {
        return false;
    }
    strong_lucas(mont)
}

/// Lanes processed together by [`is_prime_odd_large_batch`]; independent
/// Montgomery chains overlap in the multiplier pipeline.
pub const BATCH_LANES: usize = 4;

/// x·R mod n for small x, by doubling and adding R mod n.
#[inline]
fn small_to_mont(mont: &Montgomery, x: u64) -> u64 {
    let mut acc = 0;
    let top = 64 - x.leading_zeros();
    for bit in (0..top).rev() {
        acc = mont.add(acc, acc);
        if (x >> bit) & 1 == 1 {
            acc = mont.add(acc, mont.one);
        }
    }
    acc
}

/// Montgomery context without R² mod n (not needed by the batch tests).
fn montgomery_lite(n: u64) -> Montgomery {
    let mut inv = n;
    for _ in 0..5 {
        inv = inv.wrapping_mul(2u64.wrapping_sub(n.wrapping_mul(inv)));
    }
    // n odd and > 1, so 2^64 mod n = (2^64 − 1) mod n + 1 < n
    let one = u64::MAX % n + 1;
    Montgomery { n, n_inv: inv, r2: 0, one }
}

/// Pads partial lane groups; any prime above the small-prime range works.
const PAD: u64 = 1_000_000_007;

/// Baillie–PSW for many odd moduli at once, each with no prime factor below
/// 67. Gives the same verdicts as [`is_prime_odd_large`].
pub fn is_prime_odd_large_batch(ns: &[u64], out: &mut Vec<bool>) {
    const L: usize = BATCH_LANES;
    out.clear();
    out.resize(ns.len(), false);
    if ns.iter().any(|&n| n >> 63 != 0) {
        for (o, &n) in out.iter_mut().zip(ns) {
            *o = is_prime_odd_large(&Montgomery::new(n));
        }
        return;
    }
    let mut neg_q = Vec::new();
    let mut general = Vec::new();
    for (chunk_i, chunk) in ns.chunks(L).enumerate() {
        let lane: [u64; L] = std::array::from_fn(|i| chunk.get(i).copied().unwrap_or(PAD));
        let pass = sprp_base2_lanes(&lane);
        for i in 0..chunk.len() {
            let n = lane[i];
            if !pass[i] || is_square(n) {
                continue;
            }
            match selfridge(n) {
                Some(5) => neg_q.push((chunk_i * L + i, 5)),
                Some(d) => general.push((chunk_i * L + i, d)),
                None => {}
            }
        }
    }
    for (group, neg) in [(&neg_q, true), (&general, false)] {
        for g in group.chunks(L) {
            let lane: [(u64, i64); L] = std::array::from_fn(|i| g.get(i).map_or((PAD, 5), |&(idx, d)| (ns[idx], d)));
            let pass = if neg { lucas_lanes::<true>(&lane) } else { lucas_lanes::<false>(&lane) };
            for (i, &(idx, _)) in g.iter().enumerate() {
                out[idx] = pass[i];
            }
        }
    }
}

/// First D in 5, −7, 9, −11, … with (D/n) = −1; None when some D shares a
/// factor with n (so n is composite).
fn selfridge(n: u64) -> Option<i64> {
    let mut d: i64 = 5;
    loop {
        // every candidate D is 1 mod 4, so (D/n) = (n mod |D| / |D|)
        let m = d.unsigned_abs();
        match jacobi_unsigned(n % m, m) {
            -1 => return Some(d),
            0 if d.unsigned_abs() != n => return None,
            _ => d = if d > 0 { -(d + 2) } else { -d + 2 },
        }
    }
}

/// Requires n < 2^63 so doubling a residue cannot overflow.
fn sprp_base2_lanes(ns: &[u64; BATCH_LANES]) -> [bool; BATCH_LANES] {
    const L: usize = BATCH_LANES;
    let m: [Montgomery; L] = std::array::from_fn(|i| montgomery_lite(ns[i]));
    let s: [u32; L] = std::array::from_fn(|i| (ns[i] - 1).trailing_zeros());
    let d: [u64; L] = std::array::from_fn(|i| (ns[i] - 1) >> s[i]);
    let top = d.iter().map(|&x| 63 - x.leading_zeros()).max().unwrap_or(0);
    let mut x: [u64; L] = std::array::from_fn(|i| m[i].one);
    for bit in (0..=top).rev() {
        for i in 0..L {
            let y = m[i].mul(x[i], x[i]);
            let t = y + (y & mask((d[i] >> bit) & 1 == 1));
            let (r, borrow) = t.overflowing_sub(m[i].n);
            x[i] = select(borrow, t, r);
        }
    }
    std::array::from_fn(|i| {
        let mi = &m[i];
        let minus_one = mi.n - mi.one;
        let mut y = x[i];
        if y == mi.one || y == minus_one {
            return true;
        }
        for _ in 1..s[i] {
            y = mi.mul(y, y);
            if y == minus_one {
                return true;
            }
            if y == mi.one {
                return false;
            }
        }
        false
    })
}

/// Strong Lucas test with P = 1, Q = (1 − D)/4 through the V-sequence:
/// U_k ≡ 0 iff 2V_(k+1) ≡ V_k. `NEG_Q` marks lanes with D = 5, Q = −1,
/// where Q^k is ±1 and needs no multiplications.
fn lucas_lanes<const NEG_Q: bool>(lanes: &[(u64, i64); BATCH_LANES]) -> [bool; BATCH_LANES] {
    const L: usize = BATCH_LANES;
    let m: [Montgomery; L] = std::array::from_fn(|i| montgomery_lite(lanes[i].0));
    let qm: [u64; L] = std::array::from_fn(|i| {
        let (n, d) = lanes[i];
        let q = (1 - d) / 4;
        let t = small_to_mont(&m[i], q.unsigned_abs() % n);
        if q < 0 {
            m[i].sub(0, t)
        } else {
            t
        }
    });
    let s: [u32; L] = std::array::from_fn(|i| (lanes[i].0 as u128 + 1).trailing_zeros());
    let k: [u64; L] = std::array::from_fn(|i| ((lanes[i].0 as u128 + 1) >> s[i]) as u64);
    let tops: [u32; L] = std::array::from_fn(|i| 63 - k[i].leading_zeros());
    let top = tops.iter().copied().max().unwrap_or(0);
    // state at index 1: V_1 = 1, V_2 = 1 − 2Q, Q^1 = Q
    let mut vk: [u64; L] = std::array::from_fn(|i| m[i].one);
    let mut vk1: [u64; L] = std::array::from_fn(|i| m[i].sub(m[i].one, m[i].add(qm[i], qm[i])));
    let mut qk = qm;
    for bit in (0..top).rev() {
        for i in 0..L {
            let mi = &m[i];
            let active = bit < tops[i];
            let set = (k[i] >> bit) & 1 == 1;
            let cross = mi.sub(mi.mul(vk[i], vk1[i]), qk[i]);
            let base = select(set, vk1[i], vk[i]);
            let (qk_q, q_next) = if NEG_Q {
                let minus_one = mi.n - mi.one;
                (mi.sub(0, qk[i]), select(set, minus_one, mi.one))
            } else {
                let qk_q = mi.mul(qk[i], qm[i]);
                (qk_q, mi.mul(qk[i], select(set, qk_q, qk[i])))
            };
            let tq = select(set, qk_q, qk[i]);
            let square = mi.sub(mi.mul(base, base), mi.add(tq, tq));
            vk[i] = select(active, select(set, cross, square), vk[i]);
            vk1[i] = select(active, select(set, square, cross), vk1[i]);
            qk[i] = select(active, q_next, qk[i]);
        }
    }
    std::array::from_fn(|i| {
        let mi = &m[i];
        let (mut v, mut q) = (vk[i], qk[i]);
        if mi.add(vk1[i], vk1[i]) == v || v == 0 {
            return true;
        }
        for _ in 1..s[i] {
            v = mi.sub(mi.mul(v, v), mi.add(q, q));
            q = mi.mul(q, q);
            if v == 0 {
                return true;
            }
        }
        false
    })
}

/// Miller–Rabin with the first twelve primes as bases; deterministic below
/// 2^64. Slower than [`is_prime`] and kept as an independent cross-check.
pub fn is_prime_miller_rabin(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mont = Montgomery::new(n);
    BASES.iter().all(|&b| sprp(&mont, b))
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Finds a nontrivial factor of an odd composite `n` (Brent's variant of
/// Pollard's rho).
pub fn pollard_brent(n: u64) -> u64 {
    debug_assert!(n & 1 == 1 && !is_prime(n));
    if is_square(n) {
        return isqrt(n);
    }
    let mont = Montgomery::new(n);
    const BATCH: u64 = 128;
    for c in 1u64.. {
        let cm = mont.to_mont(c);
        let f = |x: u64| mont.add(mont.mul(x, x), cm);
        let mut y = mont.to_mont(2);
        let mut q = mont.one();
        let mut g = 1u64;
        let mut r = 1u64;
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let lim = BATCH.min(r - k);
                for _ in 0..lim {
                    y = f(y);
                    q = mont.mul(q, x.abs_diff(y));
                }
                g = gcd(q, n);
                k += lim;
            }
            r <<= 1;
            if r > 1 << 40 {
                break;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n && g > 1 {
            return g;
        }
    }
    unreachable!()
}

/// Primes below 2^16, built once.
pub fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(1 << 16))
}

/// Plain Eratosthenes sieve returning all primes `<= limit`.
pub fn primes_up_to(limit: u32) -> Vec<u32> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Prime factorization of an arbitrary `u64` as sorted `(prime, exponent)`
/// pairs. `n = 1` gives an empty vector.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    debug_assert!(n >= 1);
    let mut out: Vec<(u64, u32)> = Vec::new();
    for &p in small_primes().iter().take(1024) {
        let p = p as u64;
        if p * p > n {
            break;
        }
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    if n > 1 {
        let mut stack = vec![n];
        let mut big = Vec::new();
        while let Some(m) = stack.pop() {
            if is_prime(m) {
                big.push(m);
            } else {
                let f = pollard_brent(m);
                stack.push(f);
                stack.push(m / f);
            }
        }
        big.sort_unstable();
        for p in big {
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batch_matches_sieve_on_rough_odd_numbers() {
        let limit = 2_000_000u32;
        let primes = primes_up_to(limit);
        let mut is_p = vec![false; limit as usize + 1];
        for &p in &primes {
            is_p[p as usize] = true;
        }
        let rough: Vec<u64> = (67 * 67..=limit as u64)
            .filter(|&n| SMALL_PRIMES.iter().all(|&p| n % p != 0))
            .collect();
        let mut out = Vec::new();
        is_prime_odd_large_batch(&rough, &mut out);
        for (&n, &got) in rough.iter().zip(&out) {
            assert_eq!(got, is_p[n as usize], "n = {n}");
        }
        // strong base-2 pseudoprimes without small factors
        let spsp = [42799u64, 49141, 65281, 88357, 90751];
        is_prime_odd_large_batch(&spsp, &mut out);
        assert!(out.iter().all(|&b| !b));
    }

    #[test]
    fn batch_matches_miller_rabin_on_large_inputs() {
        let mut x: u64 = 0x9e37_79b9_7f4a_7c15;
        let mut ns = Vec::new();
        while ns.len() < 20_000 {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            let bits = 30 + (x % 34) as u32;
            let n = (x >> (64 - bits)) | 1 | (1 << (bits - 1));
            if SMALL_PRIMES.iter().all(|&p| n % p != 0) {
                ns.push(n);
            }
        }
        // products of two primes near the square root and primes squared
        ns.extend([1_000_003u64 * 1_000_033, 4_294_967_291 * 4_294_967_279, 1_000_003 * 1_000_003]);
        for cut in [ns.len(), 7, 1] {
            let part = &ns[..cut];
            let mut out = Vec::new();
            is_prime_odd_large_batch(part, &mut out);
            for (&n, &got) in part.iter().zip(&out) {
                assert_eq!(got, is_prime_miller_rabin(n), "n = {n}");
            }
        }
        let big = [u64::MAX - 58, (1 << 63) + 29, 1_000_000_007];
        let mut out = Vec::new();
        is_prime_odd_large_batch(&big, &mut out);
        assert_eq!(out, big.iter().map(|&n| is_prime_miller_rabin(n)).collect::<Vec<_>>());
    }

    #[test]
    fn bpsw_matches_sieve_below_two_million() {
        let primes = primes_up_to(2_000_000);
        let mut idx = 0;
        for n in 0..=2_000_000u64 {
            let expected = idx < primes.len() && primes[idx] as u64 == n;
            if expected {
                idx += 1;
            }
            assert_eq!(is_prime(n), expected, "n = {n}");
        }
    }

    #[test]
    fn bpsw_agrees_with_miller_rabin_on_large_odds() {
        // windows near 2^32, 2^53 and 2^64
        for start in [(1u64 << 32) - 1001, (1u64 << 53) - 10_001, u64::MAX - 20_001] {
            for n in (start..start + 20_000).step_by(2) {
                assert_eq!(is_prime(n), is_prime_miller_rabin(n), "n = {n}");
            }
        }
    }

    #[test]
    fn known_base2_pseudoprimes_are_rejected() {
        // strong base-2 pseudoprimes
        for n in [2047u64, 3277, 4033, 4681, 8321, 3_215_031_751, 2_152_302_898_747] {
            assert!(!is_prime(n), "{n}");
        }
        // Carmichael numbers
        for n in [561u64, 1105, 1729, 2465, 2821, 6601, 8911] {
            assert!(!is_prime(n));
        }
    }

    #[test]
    fn factor_roundtrip_on_semiprimes() {
        let p = 4_294_967_291u64; // largest prime below 2^32
        let q = 4_294_967_279u64;
        let f = factor_u64(p * q);
        assert_eq!(f, vec![(q, 1), (p, 1)]);
        let f = factor_u64(p * p);
        assert_eq!(f, vec![(p, 2)]);
        assert_eq!(factor_u64(1), vec![]);
        assert_eq!(factor_u64(720720), vec![(2, 4), (3, 2), (5, 1), (7, 1), (11, 1), (13, 1)]);
    }

    #[test]
    fn integer_roots() {
        assert_eq!(isqrt(u64::MAX), u32::MAX as u64);
        assert_eq!(isqrt(99), 9);
        assert_eq!(icbrt(1 << 54), 1 << 18);
        assert_eq!(icbrt((1 << 54) - 1), (1 << 18) - 1);
        assert_eq!(icbrt(u64::MAX), 2_642_245);
        assert!(is_square(1 << 52));
        assert!(!is_square((1 << 52) + 1));
    }

    #[test]
    fn jacobi_small_table() {
        // (a/15) for a = 1..14
        let expected = [1, 1, 0, 1, 0, 0, -1, 1, 0, 0, -1, 0, -1, -1];
        for (a, &e) in (1..15).zip(expected.iter()) {
            assert_eq!(jacobi(a, 15), e, "a = {a}");
        }
        assert_eq!(jacobi(-1, 5), 1);
        assert_eq!(jacobi(-1, 7), -1);
    }
}

