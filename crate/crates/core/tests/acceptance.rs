//! Acceptance suite: one PASS / FAIL / INCOMPLETE line per criterion.
//! Exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zerosum_core::bounds::{best_upper, bound_lemma1};
use zerosum_core::expansion::{campaign, subadditivity_campaign, Hyperplanes};
use zerosum_core::extraction::{check_decomposition, extract_zero_sum_l1};
use zerosum_core::zero_sum::{
    davenport_short, davenport_with_method, max_zero_sum_free_length, short_free_search, zs_direct,
};
use zerosum_core::{enumerate_groups, Error, Group, SearchConfig, Sequence};

const SEED: u64 = 20_240_601;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    Incomplete,
}

struct Outcome {
    status: Status,
    detail: String,
}

fn pass(detail: String) -> Outcome {
    Outcome { status: Status::Pass, detail }
}

fn fail(detail: String) -> Outcome {
    Outcome { status: Status::Fail, detail }
}

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn g(spec: &str) -> Group {
    spec.parse().unwrap()
}

fn within(elapsed: Duration, limit: Duration) -> bool {
    elapsed < limit
}

// ---------- independent oracles ----------

/// Residue vectors of every element, in packed-index order.
fn residues(group: &Group) -> Vec<Vec<u64>> {
    group.elements().map(|e| e.residues().to_vec()).collect()
}

fn add(f: &[u64], x: &[u64], y: &[u64]) -> Vec<u64> {
    x.iter().zip(y).zip(f).map(|((a, b), d)| (a + b) % d).collect()
}

/// Whether some nonempty subsequence of length at most `s` sums to zero,
/// by brute force over index subsets.
fn has_short_zero_sum(group: &Group, items: &[Vec<u64>], s: usize) -> bool {
    let f = group.invariant_factors();
    let zero = vec![0; f.len()];
    fn rec(f: &[u64], items: &[Vec<u64>], from: usize, left: usize, acc: &[u64], zero: &[u64], used: bool) -> bool {
        if used && acc == zero {
            return true;
        }
        if left == 0 {
            return false;
        }
        (from..items.len()).any(|i| rec(f, items, i + 1, left - 1, &add(f, acc, &items[i]), zero, true))
    }
    rec(f, items, 0, s, &zero, &zero, false)
}

/// Sets of subsequence sums, as a plain Vec<bool> DP over residue vectors.
fn zero_sum_free(group: &Group, items: &[Vec<u64>]) -> bool {
    let f = group.invariant_factors();
    let all = residues(group);
    let index = |v: &Vec<u64>| all.iter().position(|w| w == v).unwrap();
    let mut reach = vec![false; all.len()];
    for x in items {
        let mut next = reach.clone();
        next[index(x)] = true;
        for (y, &r) in reach.iter().enumerate() {
            if r {
                next[index(&add(f, &all[y], x))] = true;
            }
        }
        reach = next;
    }
    !reach[0]
}

/// `D(G)` by brute force over multisets of nonzero elements.
fn davenport_brute(group: &Group) -> u64 {
    let all = residues(group);
    let nonzero: Vec<Vec<u64>> = all[1..].to_vec();
    fn longest(group: &Group, pool: &[Vec<u64>], from: usize, cur: &mut Vec<Vec<u64>>) -> usize {
        let mut best = cur.len();
        for i in from..pool.len() {
            cur.push(pool[i].clone());
            if zero_sum_free(group, cur) {
                best = best.max(longest(group, pool, i, cur));
            }
            cur.pop();
        }
        best
    }
    longest(group, &nonzero, 0, &mut Vec::new()) as u64 + 1
}

fn witness_residues(group: &Group, witness: &[usize]) -> Vec<Vec<u64>> {
    witness.iter().map(|&i| group.element_at(i).residues().to_vec()).collect()
}

// ---------- criteria ----------

fn c1() -> Outcome {
    let t = Instant::now();
    let v = davenport_short(&g("2,2,2"), 2, &SearchConfig::default());
    let el = t.elapsed();
    match v {
        Ok(v) => verdict(v == 8 && within(el, Duration::from_secs(1)), format!("D^2(Z_2^3) = {v} in {el:.2?}")),
        Err(e) => fail(e.to_string()),
    }
}

fn c2() -> Vec<Outcome> {
    let group = g("3,3,3");
    let cfg = SearchConfig { length_cap: Some(16), ..SearchConfig::default() };
    let t = Instant::now();
    let lower = match short_free_search(&group, 3, &cfg) {
        Ok(r) => {
            let items = witness_residues(&group, &r.witness);
            let ok = r.length >= 16 && !has_short_zero_sum(&group, &items, 3) && within(t.elapsed(), Duration::from_secs(600));
            verdict(ok, format!("lower: length {} witness, no zero-sum of length <= 3 (checked by brute force), {:.2?}", r.length, t.elapsed()))
        }
        Err(e) => fail(format!("lower: {e}")),
    };
    let t = Instant::now();
    let cfg = SearchConfig { max_nodes: u64::MAX / 2, ..SearchConfig::default() };
    let upper = match davenport_short(&group, 3, &cfg) {
        Ok(v) => verdict(v == 17 && within(t.elapsed(), Duration::from_secs(7200)), format!("upper: D^3(Z_3^3) = {v} exact in {:.2?}", t.elapsed())),
        Err(Error::BudgetExhausted { lower_bound, nodes }) => Outcome {
            status: Status::Incomplete,
            detail: format!("upper: budget exhausted after {nodes} nodes, certified >= {lower_bound}"),
        },
        Err(e) => fail(format!("upper: {e}")),
    };
    vec![lower, upper]
}

fn c3() -> Outcome {
    let group = g("4,4,4");
    let cfg = SearchConfig { length_cap: Some(21), ..SearchConfig::default() };
    let t = Instant::now();
    match short_free_search(&group, 4, &cfg) {
        Ok(r) => {
            let items = witness_residues(&group, &r.witness);
            let ok = r.length >= 21 && !has_short_zero_sum(&group, &items, 4);
            verdict(ok, format!("length {} witness over Z_4^3, no zero-sum of length <= 4 (brute force), {:.2?}; upper direction excluded", r.length, t.elapsed()))
        }
        Err(e) => fail(e.to_string()),
    }
}

fn c4() -> Outcome {
    let cfg = SearchConfig::default();
    let t = Instant::now();
    let mut cases: Vec<(Group, u64)> = (1..=20u64).map(|n| (Group::cyclic(n).unwrap(), n)).collect();
    for n in 2..=64 {
        for group in enumerate_groups(n).unwrap() {
            let f = group.invariant_factors().to_vec();
            if f.len() == 2 {
                cases.push((group, f[0] + f[1] - 1));
            } else if group.is_p_group() && f.len() > 2 {
                let m = 1 + f.iter().map(|d| d - 1).sum::<u64>();
                cases.push((group, m));
            }
        }
    }
    let mut mismatches = Vec::new();
    let mut budget = Vec::new();
    for (group, expected) in &cases {
        match max_zero_sum_free_length(group, &cfg) {
            Ok(r) if r.exact && r.length + 1 == *expected => {}
            Ok(r) => mismatches.push(format!("{group}: search {} vs {expected}", r.length + 1)),
            Err(e) => budget.push(format!("{group}: {e}")),
        }
    }
    let el = t.elapsed();
    let ok = mismatches.is_empty() && budget.is_empty() && within(el, Duration::from_secs(600));
    verdict(
        ok,
        format!(
            "{} groups searched, {} mismatches, {} incomplete, {el:.1?}{}",
            cases.len(),
            mismatches.len(),
            budget.len(),
            mismatches.iter().chain(&budget).map(|m| format!("; {m}")).collect::<String>()
        ),
    )
}

fn c5() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for n in 1..=9 {
        for group in enumerate_groups(n).unwrap() {
            let d = davenport_brute(&group);
            let zs = zs_direct(&group).unwrap();
            count += 1;
            if zs != n + d - 1 {
                bad.push(format!("{group}: ZS {zs}, |G|+D-1 = {}", n + d - 1));
            }
        }
    }
    for n in 1..=6u64 {
        let zs = zs_direct(&Group::cyclic(n).unwrap()).unwrap();
        count += 1;
        if zs != 2 * n - 1 {
            bad.push(format!("Z_{n}: ZS {zs} vs 2n-1 = {}", 2 * n - 1));
        }
    }
    verdict(bad.is_empty(), format!("{count} checks (D by brute force), {} mismatches{}", bad.len(), bad.iter().map(|b| format!("; {b}")).collect::<String>()))
}

fn c6() -> Outcome {
    let cfg = SearchConfig::default();
    let t = Instant::now();
    let mut checks = 0;
    let mut violations = Vec::new();
    let mut failures = Vec::new();
    for n in 1..=48u64 {
        for group in enumerate_groups(n).unwrap() {
            let m = group.exponent();
            let d = match davenport_with_method(&group, &cfg) {
                Ok((d, _)) => d,
                Err(e) => {
                    failures.push(format!("{group}: {e}"));
                    continue;
                }
            };
            for k in 1..=7u64 {
                if n >= k * m {
                    checks += 1;
                    // d <= n/k + k - 1  <=>  k d <= n + k(k-1)
                    if k * d > n + k * (k - 1) {
                        violations.push(format!("{group} k={k} D={d}"));
                    }
                }
            }
        }
    }
    let mut tight = 0;
    let mut not_tight = Vec::new();
    for k in 1..=7u64 {
        for t in 1..=48u64 {
            if k * k * t > 48 {
                break;
            }
            let group = Group::normalize(&[k, k * t].into_iter().filter(|&x| x > 1).collect::<Vec<_>>()).unwrap();
            let d = davenport_with_method(&group, &cfg).unwrap().0;
            tight += 1;
            if d != k * t + k - 1 || k * d != k * k * t + k * (k - 1) {
                not_tight.push(format!("k={k} t={t}"));
            }
        }
    }
    let el = t.elapsed();
    let ok = violations.is_empty() && failures.is_empty() && not_tight.is_empty() && within(el, Duration::from_secs(1800));
    verdict(
        ok,
        format!(
            "{checks} (group, k) checks, {} violations, {} undetermined; equality family {tight} cases, {} not tight; {el:.1?}",
            violations.len(),
            failures.len(),
            not_tight.len()
        ),
    )
}

fn c7() -> Outcome {
    let formula_ok = (1..=100).all(|t| bound_lemma1(3, 1, t, 17, 7).map(|b| b.value) == Ok(3 * t + 8));
    let cfg = SearchConfig::default();
    let mut detail = vec![format!("3t+8 for t<=100: {formula_ok}")];
    let mut sound = true;
    for t in 1..=2u64 {
        let group = Group::normalize(&[3, 3, 3 * t]).unwrap();
        let exact = max_zero_sum_free_length(&group, &cfg).map(|r| r.length + 1);
        let b = bound_lemma1(3, 1, t, 17, 7).unwrap().value;
        match exact {
            Ok(d) => {
                sound &= b >= d;
                detail.push(format!("t={t}: B={b} >= D={d}"));
            }
            Err(e) => {
                sound = false;
                detail.push(format!("t={t}: {e}"));
            }
        }
    }
    verdict(formula_ok && sound, detail.join("; "))
}

fn c8() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut total = 0;
    let mut bad = Vec::new();
    for (s, a, b) in [(2u64, 1u64, 2u64), (2, 1, 3), (2, 2, 2), (3, 1, 2)] {
        let (big_a, d3) = if s == 2 { (8, 4) } else { (17, 7) };
        let group = Group::normalize(&[s, s * a, s * a * b]).unwrap();
        let len = bound_lemma1(s, a, b, big_a, d3).unwrap().value;
        let n = group.order() as usize;
        for _ in 0..200 {
            let seq = Sequence::from_indices(group.clone(), (0..len).map(|_| rng.gen_range(0..n)));
            total += 1;
            match extract_zero_sum_l1(s, a, b, &seq, big_a, d3) {
                Ok((w, dec)) => {
                    // independent check of the witness sum
                    let f = group.invariant_factors();
                    let sum = w.sub.flat_indices().iter().fold(vec![0; 3], |acc, &x| add(f, &acc, group.element_at(x).residues()));
                    if w.sub.is_empty() || sum != vec![0; 3] || !w.sub.is_submultiset_of(&seq) {
                        bad.push(format!("({s},{a},{b}): bad witness"));
                    }
                    if let Err(e) = check_decomposition(&seq, &w, &dec) {
                        bad.push(format!("({s},{a},{b}): {e}"));
                    }
                }
                Err(e) => bad.push(format!("({s},{a},{b}) on {seq}: {e}")),
            }
        }
    }
    let el = t.elapsed();
    verdict(
        bad.is_empty() && within(el, Duration::from_secs(600)),
        format!("{total} sequences at threshold length, {} failures, {el:.2?}{}", bad.len(), bad.iter().take(3).map(|b| format!("; {b}")).collect::<String>()),
    )
}

fn c9() -> Outcome {
    let n_max = 1_000_000u64;
    let mut count = 0u64;
    let mut violations = 0u64;
    let mut first: Option<(u64, u64, f64)> = None;
    for m in 1..=n_max / 31 {
        for q in 31..=n_max / m {
            let n = m * q;
            count += 1;
            let lhs = m as f64 * (1.0 + (q as f64).ln());
            let rhs = n as f64 / 7.0 + 6.0;
            if lhs > rhs {
                violations += 1;
                if first.is_none() {
                    first = Some((n, m, lhs - rhs));
                }
            }
        }
    }
    let example = first.map(|(n, m, gap)| format!("; least m violating: n={n}, m={m}, n/m={}, excess {gap:.4}", n / m)).unwrap_or_default();
    verdict(violations == 0, format!("{count} pairs, {violations} violations{example}"))
}

fn c10() -> Outcome {
    let t = Instant::now();
    let mut lines = Vec::new();
    let mut violations = 0;
    for (p, d) in [(3u64, 2u32), (5, 2), (7, 1)] {
        let s = campaign(p, d, 1000, SEED, Hyperplanes::Affine).unwrap();
        violations += s.violations;
        let ex: String = s
            .examples
            .iter()
            .map(|(i, inst, v)| format!(" [#{i}: |A|={} W={} |Y|={} best L={} < {}]", inst.a.len(), inst.w, inst.y.len(), v.best_l, v.threshold))
            .collect();
        lines.push(format!("({p},{d}): {} hold, {} violate, {} rejected{ex}", s.holds, s.violations, s.rejected_hypothesis));
    }
    let sub = subadditivity_campaign(&[3, 5, 7], &[1, 2], 10_000, SEED).unwrap();
    lines.push(format!("subadditivity: {} checks, {} violations", sub.checks, sub.violations));
    let el = t.elapsed();
    verdict(violations == 0 && sub.violations == 0 && within(el, Duration::from_secs(300)), format!("{}; {el:.2?}", lines.join("; ")))
}

fn c11() -> Outcome {
    let cfg = SearchConfig::default();
    let k = Ratio::from_integer(5);
    let mut entries = 0;
    let mut bad = Vec::new();
    for n in 1..=48 {
        for group in enumerate_groups(n).unwrap() {
            let d = match davenport_with_method(&group, &cfg) {
                Ok((d, _)) => d,
                Err(e) => {
                    bad.push(format!("{group}: {e}"));
                    continue;
                }
            };
            let report = best_upper(&group, k, &cfg);
            for e in report.applicable() {
                entries += 1;
                if e.value < Ratio::from_integer(d as i128) {
                    bad.push(format!("{group}: {} = {} < D = {d}", e.name, e.value));
                }
            }
        }
    }
    verdict(bad.is_empty(), format!("{entries} applicable entries, {} violations{}", bad.len(), bad.iter().take(5).map(|b| format!("; {b}")).collect::<String>()))
}

fn main() {
    let mut results: Vec<(String, Outcome)> = vec![("1".into(), c1())];
    for (i, o) in c2().into_iter().enumerate() {
        results.push((format!("2{}", ["a", "b"][i]), o));
    }
    results.push(("3".into(), c3()));
    results.push(("4".into(), c4()));
    results.push(("5".into(), c5()));
    results.push(("6".into(), c6()));
    results.push(("7".into(), c7()));
    results.push(("8".into(), c8()));
    results.push(("9".into(), c9()));
    results.push(("10".into(), c10()));
    results.push(("11".into(), c11()));

    let mut failed = 0;
    for (id, o) in &results {
        let tag = match o.status {
            Status::Pass => "PASS",
            Status::Fail => {
                failed += 1;
                "FAIL"
            }
            Status::Incomplete => "INCOMPLETE",
        };
        println!("criterion {id:>3}: {tag} {}", o.detail);
    }
    println!("{} criteria, {failed} failed", results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
