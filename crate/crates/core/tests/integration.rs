use es_core::arith::{divisor_count, factorize};
use es_core::bilinear::{
    bilinear_divisor_sum, case_contributions, classify_case, linear_branch_sum, split_bc, BoxSpec, CaseLabel, Method,
};
use es_core::erdos_straus::{enumerate_solutions, type_split};
use es_core::meanvalue::{mean_value_report, sum_f1};
use es_core::report::{SumReport, Value};

#[test]
fn case_table_agrees_with_cellwise_classification() {
    let bx = BoxSpec::new(16, 32, 0.5).unwrap();
    let mut counts = [0u64; 4];
    let mut sums = [0u64; 4];
    for l in bx.v + 1..=2 * bx.v {
        for a in bx.w + 1..=2 * bx.w {
            let n = 4 * l * a * a + 1;
            let label = classify_case(&split_bc(n, bx.z.z).unwrap(), &bx);
            counts[label.index()] += 1;
            sums[label.index()] += divisor_count(&factorize(n).unwrap());
        }
    }
    for method in [Method::Direct, Method::Sieve] {
        let t = case_contributions(&bx, method, 2).unwrap();
        assert_eq!(t.totals.counts, counts);
        assert_eq!(t.totals.sums, sums);
    }
    assert!(counts[CaseLabel::CaseI.index()] > 0);
}

#[test]
fn reports_round_trip_through_json_and_csv() {
    let bx = BoxSpec::new(32, 32, 0.5).unwrap();
    let reports = [
        case_contributions(&bx, Method::Sieve, 1).unwrap().to_report(),
        bilinear_divisor_sum(&bx, Method::Sieve, 1).unwrap(),
        mean_value_report(200, 1).unwrap().to_report(),
        linear_branch_sum(&BoxSpec::linear(64, 8, 0.5).unwrap(), 1).unwrap().to_report(),
    ];
    for r in reports {
        assert_eq!(SumReport::from_json(&r.to_json()).unwrap(), r);
        let back = SumReport::from_csv(&r.to_csv()).unwrap();
        assert_eq!(back.rows, r.rows);
        assert_eq!(back.label, r.label);
    }
}

#[test]
fn mean_values_are_sums_of_prime_splits() {
    let x = 200;
    let by_prime: u64 = es_core::arith::prime::primes_up_to(x as u32 - 1).iter().map(|&p| type_split(p as u64).unwrap().f1).sum();
    assert_eq!(sum_f1(x, 3).unwrap(), by_prime);
    let r = mean_value_report(x, 1).unwrap().to_report();
    let row = r.rows.iter().find(|row| row.name == "sum_f1").unwrap();
    assert_eq!(row.value, Value::Int(by_prime));
}

#[test]
fn ordered_count_matches_permutations() {
    for n in 2..200 {
        let s = enumerate_solutions(n).unwrap();
        let perms: usize = s.canonical.iter().map(|t| t.permutations().len()).sum();
        assert_eq!(s.ordered_count, perms as u64);
        assert!(s.canonical.iter().all(|t| t.solves(n)));
    }
}
