//! Parameter description and execution of each subcommand.

use std::collections::BTreeMap;

use es_core::arith::{d2_over_n_partial, d2_partial, lemma5_check, prime::primes_up_to};
use es_core::bilinear::{
    bilinear_divisor_sum, case2_tail, case_contributions, lemma6_sum, linear_branch_sum, BoxSpec, Method,
};
use es_core::congruence::{linear_root_count, quad_root_count, quad_root_count_oracle};
use es_core::erdos_straus::{enumerate_solutions, type_split};
use es_core::meanvalue::{final_chain, mean_value_report, tao_weight_sum};
use es_core::report::{SumReport, SumRow};
use es_core::{Error, Result};

use crate::render::table;
use crate::{Command, LemmaWhich, MethodArg};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Human,
    Json,
    Csv,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Human => "human",
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// All three renderings of one result.
pub struct Output {
    pub human: String,
    pub json: String,
    pub csv: String,
}

impl Output {
    fn from_report(r: &SumReport) -> Self {
        Output { human: table(r), json: r.to_json() + "\n", csv: r.to_csv() }
    }

    pub fn emit(self, f: Format) -> String {
        match f {
            Format::Human => self.human,
            Format::Json => self.json,
            Format::Csv => self.csv,
        }
    }
}

fn config<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

/// Parsed `--params` of the lemma command.
fn lemma_params(which: LemmaWhich, raw: &[String]) -> Result<BTreeMap<String, String>> {
    let allowed: &[&str] = match which {
        LemmaWhich::Four | LemmaWhich::Five => &["x"],
        LemmaWhich::Six => &["z", "r", "nmax"],
        LemmaWhich::Case2Tail => &["z"],
    };
    let mut out = BTreeMap::new();
    for item in raw.iter().filter(|s| !s.is_empty()) {
        let Some((k, v)) = item.split_once('=') else {
            return config(format!("parameter '{item}' is not key=value"));
        };
        let k = k.trim().to_ascii_lowercase();
        if !allowed.contains(&k.as_str()) {
            return config(format!("unknown parameter '{k}'; expected one of {}", allowed.join(", ")));
        }
        out.insert(k, v.trim().to_string());
    }
    let defaults: &[(&str, &str)] = match which {
        LemmaWhich::Four | LemmaWhich::Five => &[("x", "1000")],
        LemmaWhich::Six => &[("z", "10000"), ("r", "2"), ("nmax", "1000000")],
        LemmaWhich::Case2Tail => &[("z", "10000")],
    };
    for (k, v) in defaults {
        out.entry(k.to_string()).or_insert_with(|| v.to_string());
    }
    Ok(out)
}

fn get<T: std::str::FromStr>(p: &BTreeMap<String, String>, k: &str) -> Result<T> {
    p[k].parse().map_err(|_| Error::Config(format!("parameter {k}={} is not a valid number", p[k])))
}

fn method(m: MethodArg) -> Method {
    match m {
        MethodArg::Sieve => Method::Sieve,
        MethodArg::Direct => Method::Direct,
    }
}

/// Computation name and canonical parameters, used for the cache key.
pub fn describe(cmd: &Command) -> Result<(String, BTreeMap<String, String>)> {
    let mut p = BTreeMap::new();
    let mut put = |k: &str, v: String| {
        p.insert(k.to_string(), v);
    };
    let name = match cmd {
        Command::Solve { n } => {
            put("n", n.to_string());
            "solve"
        }
        Command::Split { p } => {
            put("p", p.to_string());
            "split"
        }
        Command::Mean { x } => {
            put("x", x.to_string());
            "mean"
        }
        Command::Weightsum { x, chain } => {
            put("x", x.to_string());
            put("chain", chain.to_string());
            "weightsum"
        }
        Command::Bilinear { v, w, theta, cases, linear, method } => {
            put("V", v.to_string());
            put("W", w.to_string());
            put("theta", format!("{theta:?}"));
            put("cases", cases.to_string());
            put("linear", linear.to_string());
            put("method", format!("{method:?}"));
            "bilinear"
        }
        Command::Lemma { which, params } => {
            let lp = lemma_params(*which, params)?;
            put("which", format!("{which:?}"));
            for (k, v) in lp {
                put(&k, v);
            }
            "lemma"
        }
        Command::Congruence { n, l, a, oracle } => {
            put("n", n.to_string());
            put("l", format!("{l:?}"));
            put("a", format!("{a:?}"));
            put("oracle", oracle.to_string());
            "congruence"
        }
        Command::Primes { limit, list } => {
            put("limit", limit.to_string());
            put("list", list.to_string());
            "primes"
        }
    };
    Ok((name.to_string(), p))
}

pub fn execute(cmd: &Command, workers: usize) -> Result<Output> {
    match cmd {
        Command::Solve { n } => solve(*n),
        Command::Split { p } => split(*p),
        Command::Mean { x } => {
            let m = mean_value_report(*x, workers)?;
            let mut out = Output::from_report(&m.to_report());
            out.json = serde_json::to_string_pretty(&m).expect("report serializes") + "\n";
            out.csv = m.to_csv();
            Ok(out)
        }
        Command::Weightsum { x, chain: false } => {
            let w = tao_weight_sum(*x, workers)?;
            Ok(Output::from_report(&w.to_report()))
        }
        Command::Weightsum { x, chain: true } => {
            let c = final_chain(*x)?;
            if !c.is_monotone() {
                return Err(Error::Invariant(format!("summation chain at x = {x} is not monotone")));
            }
            Ok(Output::from_report(&c.to_report()))
        }
        Command::Bilinear { v, w, theta, cases, linear, method: m } => {
            let r = if *linear {
                let b = linear_branch_sum(&BoxSpec::linear(*v, *w, *theta)?, workers)?;
                if b.table.total_sum() != b.direct_total {
                    return Err(Error::Invariant("case sums do not add up to the direct sum".into()));
                }
                b.to_report()
            } else {
                let bx = BoxSpec::new(*v, *w, *theta)?;
                if *cases {
                    case_contributions(&bx, method(*m), workers)?.to_report()
                } else {
                    bilinear_divisor_sum(&bx, method(*m), workers)?
                }
            };
            Ok(Output::from_report(&r))
        }
        Command::Lemma { which, params } => {
            let p = lemma_params(*which, params)?;
            Ok(Output::from_report(&lemma(*which, &p, workers)?))
        }
        Command::Congruence { n, l, a, oracle } => congruence(*n, *l, *a, *oracle),
        Command::Primes { limit, list } => primes(*limit, *list),
    }
}

fn solve(n: u64) -> Result<Output> {
    let s = enumerate_solutions(n)?;
    let triples: Vec<[u64; 3]> = s.canonical.iter().map(|t| [t.n1, t.n2, t.n3]).collect();
    let json = serde_json::json!({
        "n": s.n,
        "canonical": triples,
        "unordered_count": s.unordered_count(),
        "ordered_count": s.ordered_count,
    });
    let mut human = format!("4/{n}: {} canonical triples, {} ordered solutions\n", s.unordered_count(), s.ordered_count);
    let mut csv = String::from("n1,n2,n3\n");
    for [a, b, c] in &triples {
        human.push_str(&format!("  1/{a} + 1/{b} + 1/{c}\n"));
        csv.push_str(&format!("{a},{b},{c}\n"));
    }
    Ok(Output { human, json: serde_json::to_string_pretty(&json).expect("json") + "\n", csv })
}

fn split(p: u64) -> Result<Output> {
    let t = type_split(p)?;
    let json = serde_json::json!({ "p": t.p, "f1": t.f1, "f2": t.f2, "other": t.other, "total": t.total() });
    Ok(Output {
        human: format!("p = {p}: f1 = {}, f2 = {}, other = {}, f = {}\n", t.f1, t.f2, t.other, t.total()),
        json: serde_json::to_string_pretty(&json).expect("json") + "\n",
        csv: format!("p,f1,f2,other,total\n{},{},{},{},{}\n", t.p, t.f1, t.f2, t.other, t.total()),
    })
}

fn lemma(which: LemmaWhich, p: &BTreeMap<String, String>, workers: usize) -> Result<SumReport> {
    let params = p.iter().map(|(k, v)| (k.clone(), v.clone()));
    match which {
        LemmaWhich::Four => {
            let x: u64 = get(p, "x")?;
            if x < 3 {
                return Err(Error::Domain(format!("x must be >= 3, got {x}")));
            }
            let lx = (x as f64).ln();
            let mut r = SumReport::new("lemma4", params);
            r.push(SumRow::real("d2_over_n", d2_over_n_partial(x, workers)?).with_envelope(lx.powi(4)));
            r.push(SumRow::int("d2", d2_partial(x, workers)?).with_envelope(x as f64 * lx.powi(3)));
            Ok(r)
        }
        LemmaWhich::Five => {
            let c = lemma5_check(get(p, "x")?)?;
            let mut r = SumReport::new("lemma5", params);
            r.push(SumRow::int("psi", c.psi).key("y", format!("{:?}", c.y)).with_envelope(c.envelope));
            Ok(r)
        }
        LemmaWhich::Six => Ok(lemma6_sum(get(p, "z")?, get(p, "r")?, get(p, "nmax")?)?.to_report()),
        LemmaWhich::Case2Tail => {
            let t = case2_tail(get(p, "z")?)?;
            if !t.dominated || !t.exponents_ok {
                return Err(Error::Invariant(format!("case II tail check failed at Z = {}", t.z)));
            }
            Ok(t.to_report())
        }
    }
}

fn congruence(n: u64, l: Option<u64>, a: Option<u64>, oracle: bool) -> Result<Output> {
    let mut r = SumReport::new(
        "congruence",
        [("n", n.to_string()), ("l", format!("{l:?}")), ("a", format!("{a:?}"))],
    );
    if let Some(l) = l {
        let g = quad_root_count(l, n)?;
        r.push(SumRow::int("quad_root_count", g).key("l", l));
        if oracle {
            let o = quad_root_count_oracle(l, n)?;
            if o != g {
                return Err(Error::Invariant(format!("root count {g} differs from brute force {o}")));
            }
            r.push(SumRow::int("quad_root_count_oracle", o).key("l", l));
        }
    }
    if let Some(a) = a {
        r.push(SumRow::int("linear_root_count", linear_root_count(a, n)?).key("a", a));
    }
    if r.rows.is_empty() {
        return config("congruence needs --l or --a");
    }
    Ok(Output::from_report(&r))
}

fn primes(limit: u64, list: bool) -> Result<Output> {
    if limit > u32::MAX as u64 {
        return Err(Error::Capacity(format!("prime limit {limit} exceeds {}", u32::MAX)));
    }
    let ps = primes_up_to(limit as u32);
    let mut r = SumReport::new("primes", [("limit", limit.to_string())]);
    r.push(SumRow::int("count", ps.len() as u64));
    if let Some(&last) = ps.last() {
        r.push(SumRow::int("largest", last as u64));
    }
    if list {
        for (i, &p) in ps.iter().enumerate() {
            r.push(SumRow::int("prime", p as u64).key("index", i + 1));
        }
    }
    Ok(Output::from_report(&r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma_params_fill_defaults_and_reject_unknown_keys() {
        let p = lemma_params(LemmaWhich::Six, &["z=100".into(), "r=1".into()]).unwrap();
        assert_eq!(p["z"], "100");
        assert_eq!(p["nmax"], "1000000");
        assert!(matches!(lemma_params(LemmaWhich::Four, &["q=1".into()]), Err(Error::Config(_))));
        assert!(matches!(lemma_params(LemmaWhich::Four, &["x".into()]), Err(Error::Config(_))));
    }

    #[test]
    fn describe_separates_parameters() {
        let a = describe(&Command::Mean { x: 100 }).unwrap();
        let b = describe(&Command::Mean { x: 101 }).unwrap();
        assert_eq!(a.0, "mean");
        assert_ne!(a.1, b.1);
    }

    #[test]
    fn solve_five_lists_the_canonical_triples() {
        let out = solve(5).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.json).unwrap();
        assert_eq!(v["canonical"], serde_json::json!([[2, 4, 20], [2, 5, 10]]));
        assert_eq!(v["ordered_count"], 12);
        assert_eq!(out.csv, "n1,n2,n3\n2,4,20\n2,5,10\n");
    }

    #[test]
    fn primes_reject_oversized_limits() {
        assert!(matches!(primes(1 << 40, false), Err(Error::Capacity(_))));
        let out = primes(30, true).unwrap();
        assert!(out.csv.contains("count,,10"));
    }
}
