use super::*;
use proptest::prelude::*;

fn bx(v: u64, w: u64, theta: f64) -> BoxSpec {
    BoxSpec::new(v, w, theta).unwrap()
}

#[test]
fn box_sum_examples() {
    assert_eq!(bilinear_sum(&bx(1, 1, 0.5), Method::Direct, 1).unwrap(), 4);
    assert_eq!(bilinear_sum(&bx(1, 2, 0.5), Method::Direct, 1).unwrap(), 6);
    assert_eq!(bilinear_sum(&bx(1, 2, 0.5), Method::Sieve, 1).unwrap(), 6);
    // W = 1, V = 2: d(49) + d(65)
    assert_eq!(bilinear_sum(&BoxSpec::linear(2, 1, 0.5).unwrap(), Method::Sieve, 1).unwrap(), 7);
}

#[test]
fn sieve_matches_direct_on_boxes() {
    for (v, w) in [(3, 5), (40, 17), (64, 64), (5, 300), (300, 5)] {
        let b = bx(v, w, 0.5);
        let direct = bilinear_sum_serial(&b, true);
        assert_eq!(direct, bilinear_sum_serial(&b, false));
        assert_eq!(bilinear_sum(&b, Method::Sieve, 1).unwrap(), direct, "V={v} W={w}");
        assert_eq!(bilinear_sum(&b, Method::Direct, 3).unwrap(), direct);
    }
}

#[test]
fn box_report_carries_envelope() {
    let b = bx(1, 1, 0.5);
    let r = bilinear_divisor_sum(&b, Method::Sieve, 1).unwrap();
    let row = r.row("total").unwrap();
    let env = 2f64.ln().powi(4);
    assert!((row.envelope.unwrap() - env).abs() < 1e-15);
    assert!((row.ratio.unwrap() - 4.0 / env).abs() < 1e-14);
}

#[test]
fn capacity_guard() {
    assert!(matches!(BoxSpec::new(1 << 20, 1 << 20, 0.5), Err(Error::Capacity(_))));
    assert!(BoxSpec::new(0, 1, 0.5).is_err());
    assert!(BoxSpec::new(1, 1, 0.6).is_err());
    assert!(BoxSpec::linear(4, 4, 0.5).is_err());
}

#[test]
fn split_examples() {
    let s = split_bc(145, 100.0).unwrap();
    assert_eq!((s.b, s.c, s.least_prime_of_c), (5, 29, Some(29)));
    let s = split_bc(625, 100.0).unwrap();
    assert_eq!((s.b, s.c, s.least_prime_of_c), (1, 625, Some(5)));
    let s = split_bc(1, 10.0).unwrap();
    assert_eq!((s.b, s.c, s.least_prime_of_c), (1, 1, None));
    assert!(split_bc(10, 1.5).is_err());
    assert!(split_bc(0, 10.0).is_err());
}

#[test]
fn split_invariants_exhaustive_small() {
    for z in [10.0, 100.0, 1000.0] {
        for n in 1..=20_000u64 {
            assert!(split_bc(n, z).unwrap().check_invariants(z), "n={n} Z={z}");
        }
    }
}

#[test]
fn invariant_check_rejects_bad_splits() {
    let bad = BcSplit { n: 145, b: 1, c: 145, least_prime_of_c: Some(5) };
    assert!(!bad.check_invariants(100.0));
    let bad = BcSplit { n: 145, b: 145, c: 1, least_prime_of_c: None };
    assert!(!bad.check_invariants(100.0));
}

#[test]
fn classify_examples() {
    let b = BoxSpec { z: Threshold::new(100.0), t: 3.0, ..bx(1, 1, 0.5) };
    assert_eq!(classify_case(&split_bc(145, 100.0).unwrap(), &b), CaseLabel::CaseI);
    assert_eq!(classify_case(&split_bc(625, 100.0).unwrap(), &b), CaseLabel::CaseII);
    assert_eq!(classify_case(&split_bc(1_000_003, 100.0).unwrap(), &b), CaseLabel::CaseI);
    assert_eq!(classify_case(&split_bc(64, 100.0).unwrap(), &b), CaseLabel::CaseI);
    // 7·3 = 21 > 10: b = 1, p(c) = 3 <= 10 -> II
    assert_eq!(classify_case(&split_bc(7 * 3 * 3 * 3 * 3 * 3, 100.0).unwrap(), &b), CaseLabel::CaseII);
    // b = 2⁴ = 16 > 10, p(c) = 3 <= T = 3 -> III; p(c) = 7 -> IV
    assert_eq!(classify_case(&split_bc(16 * 27, 100.0).unwrap(), &b), CaseLabel::CaseIII);
    assert_eq!(classify_case(&split_bc(16 * 49, 100.0).unwrap(), &b), CaseLabel::CaseIV);
}

#[test]
fn strict_classification_rejects_degenerate_boxes() {
    let b = bx(1 << 10, 1 << 10, 0.25);
    assert!(b.is_degenerate());
    let s = split_bc(145, b.z.z).unwrap();
    assert!(matches!(classify_case_strict(&s, &b), Err(Error::Config(_))));
    let b = bx(1 << 10, 1 << 22, 0.5);
    assert!(!b.is_degenerate());
    assert!(classify_case_strict(&s, &b).is_ok());
}

#[test]
fn box_derived_quantities() {
    let b = bx(1 << 10, 1 << 22, 0.5);
    assert_eq!(b.z.z, 2048.0);
    let t = (4194304f64).ln() * (4194304f64).ln().ln();
    assert!((b.t - t).abs() < 1e-12);
    assert_eq!(b.r0(), Some(2));
    assert_eq!(bx(16, 16, 0.25).z, Threshold { z: 2.0, floor: 2 });
    assert_eq!(bx(2, 2, 0.5).r0(), None);
}

#[test]
fn s_p_examples() {
    assert_eq!(s_p(5, 100.0).unwrap(), 2);
    assert_eq!(s_p(2, (1u64 << 20) as f64).unwrap(), 11);
    assert_eq!(s_p(3, 81.0).unwrap(), 3);
    assert_eq!(s_p(2, 4.0).unwrap(), 2);
    assert!(s_p(11, 100.0).is_err());
}

#[test]
fn case2_tail_examples() {
    let t = case2_tail(16.0).unwrap();
    assert!((t.tail - (1.0 / 8.0 + 1.0 / 9.0)).abs() < 1e-15);
    assert_eq!(t.primes, 2);
    let t = case2_tail(4.0).unwrap();
    assert_eq!(t.tail, 0.25);
    for z in [1e2, 1e4, 1e6] {
        let t = case2_tail(z).unwrap();
        assert!(t.dominated && t.exponents_ok);
        assert!(t.tail <= t.majorant);
    }
}

#[test]
fn s_p_consequences() {
    for k in 2..=8 {
        let z = 10f64.powi(k);
        for p in primes_up_to(10u32.pow(k as u32 / 2)) {
            let p = p as u64;
            if p * p > z as u64 {
                continue;
            }
            let s = s_p(p, z).unwrap();
            assert!(s >= 2);
            assert!((p as u128).pow(s) <= z as u128);
        }
    }
}

#[test]
fn partition_matches_direct_and_sieve() {
    for (v, w, theta) in [(64, 64, 0.5), (32, 256, 0.5), (50, 90, 0.25), (200, 40, 0.5)] {
        let b = bx(v, w, theta);
        let direct = case_contributions(&b, Method::Direct, 1).unwrap();
        let fast = case_contributions(&b, Method::Sieve, 2).unwrap();
        assert_eq!(direct.totals, fast.totals, "V={v} W={w}");
        assert_eq!(direct.totals.total_count(), v * w);
        assert_eq!(direct.total_sum(), bilinear_sum_serial(&b, true));
    }
}

#[test]
fn case_four_occurs_in_wide_boxes() {
    let b = bx(4, 1 << 22, 0.5);
    assert!(!b.is_degenerate());
    // restrict to a few rows through the sieve directly
    let sieve = BoxSieve::new(b.v, b.w, crate::arith::prime::isqrt(b.z.floor) + 2);
    let mut seen = [0u64; 4];
    let (a0, _) = sieve.tiles()[0];
    sieve.run_tile(a0, 512, Some(b.z.floor), |c| {
        let label = classify_parts(c.b, c.pc, b.z, b.t);
        seen[label.index()] += 1;
        let n = 4 * c.l * c.a * c.a + 1;
        let s = split_factored(n, &factor_u64(n), b.z.floor);
        assert_eq!(label, classify_case(&s, &b));
        if label == CaseLabel::CaseIV {
            let r = level_of(s.least_prime_of_c.unwrap(), b.z).unwrap();
            let ch = omega_chain(&s, &b, r).unwrap();
            assert!(ch.holds(), "{ch:?}");
            assert!(omega_bound_check(&s, &b, r).unwrap());
        }
    });
    assert!(seen[3] > 0, "{seen:?}");
}

#[test]
fn omega_preconditions() {
    let b = bx(4, 1 << 22, 0.5);
    let s = split_bc(145, b.z.z).unwrap();
    assert!(omega_chain(&s, &b, 2).is_err());
}

#[test]
fn level_of_examples() {
    let z = Threshold::new(4096.0);
    assert_eq!(level_of(64, z), Some(2));
    assert_eq!(level_of(65, z), Some(1));
    assert_eq!(level_of(16, z), Some(3));
    assert_eq!(level_of(17, z), Some(2));
    assert_eq!(level_of(4097, z), None);
}

#[test]
fn linear_branch_partition() {
    let b = BoxSpec::linear(256, 64, 0.5).unwrap();
    let lb = linear_branch_sum(&b, 2).unwrap();
    assert_eq!(lb.table.total_sum(), lb.direct_total);
    assert_eq!(lb.table.totals.total_count(), 256 * 64);
    assert_eq!(lb.root_count_violations, 0);
    assert!(linear_branch_sum(&bx(4, 4, 0.5), 1).is_err());
}

#[test]
fn lemma6_small_cases() {
    let a = lemma6_sum(1e4, 1, 100_000).unwrap();
    assert!(a.lhs_truncated > 0.0);
    let b = lemma6_sum(1e4, 2, 100_000).unwrap();
    assert!(b.lhs_truncated <= a.lhs_truncated);
    assert!(b.lhs_infinite <= a.lhs_infinite);
    assert!(b.tail >= 0.0 && a.tail >= 0.0);
    assert!(lemma6_sum(1e4, 5, 1000).is_err());
    assert!(lemma6_sum(1e4, 0, 1000).is_err());
    assert!(lemma6_sum(1e4, 1, 50).is_err());
}

#[test]
fn lemma6_matches_brute_force() {
    // Z = 100, r = 2: 10-smooth n >= 10
    let rep = lemma6_sum(100.0, 2, 5000).unwrap();
    let mut s = 0.0;
    for n in 10..=5000u64 {
        let f = factorize(n).unwrap();
        if f.greatest_prime().unwrap() <= 10 {
            let d = f.divisor_count() as f64;
            s += d * d / n as f64;
        }
    }
    assert!((rep.lhs_truncated - s).abs() < 1e-12 * s);
}

proptest! {
    #[test]
    fn split_properties(n in 1u64..u64::MAX / 2, z in 2.0f64..1e12) {
        let s = split_bc(n, z).unwrap();
        prop_assert!(s.check_invariants(z));
    }

    #[test]
    fn labels_partition(b in 1u64..1000, pc in proptest::option::of(2u64..1000), z in 4.0f64..1e6, t in 0.0f64..50.0) {
        let zt = Threshold::new(z);
        let label = classify_parts(b, pc, zt, t);
        let big_p = pc.map_or(true, |p| !zt.below_sqrt(p));
        prop_assert_eq!(label == CaseLabel::CaseI, big_p);
        if label == CaseLabel::CaseIV {
            prop_assert!(!zt.below_sqrt(b) && pc.unwrap() as f64 > t);
        }
    }
}

#[test]
fn lemma6_pinned_values() {
    let rep = lemma6_sum(1e4, 2, 1_000_000).unwrap();
    assert!((rep.lhs_truncated / 1197.8882830908815826 - 1.0).abs() < 1e-12);
    assert!((rep.rhs / 17918.883014789785656 - 1.0).abs() < 1e-10);
    assert!(rep.tail >= 0.0);
}

#[test]
fn pinned_box_totals() {
    let b = BoxSpec::with_default_theta(256, 256).unwrap();
    assert_eq!(bilinear_sum(&b, Method::Sieve, 1).unwrap(), 592_680);
    assert_eq!(bilinear_sum(&b, Method::Direct, 2).unwrap(), 592_680);
    // theta = 1/4 at 2^10: ⌊Z⌋ = 5, so every pair lands in Case I
    let t = case_contributions(&bx(1024, 1024, 0.25), Method::Sieve, 1).unwrap();
    assert_eq!(t.totals.counts, [1 << 20, 0, 0, 0]);
    assert_eq!(t.totals.sums, [11_264_901, 0, 0, 0]);
}
