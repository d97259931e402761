use std::fmt::Write as _;
use std::time::Instant;

use anyhow::Result;
use serde::Serialize;
use zerosum_core::bounds::{best_upper, short_constant_table, BoundEntry, BoundReport, Rational};
use zerosum_core::expansion::{campaign, Hyperplanes};
use zerosum_core::extraction::{extract_zero_sum_l1, extract_zero_sum_l5, BlockDecomposition};
use zerosum_core::zero_sum::{known_davenport, max_zero_sum_free_length, short_free_search, Method, SearchReport};
use zerosum_core::{enumerate_groups, Error, Group, SearchConfig, Sequence, Witness};

use crate::args::{Cli, Command, Global, KindArg};
use crate::cache::{Cache, CacheRecord, Kind};
use crate::{verify, Output, EXIT_BUDGET, EXIT_OK};

pub fn dispatch(cli: Cli) -> Result<Output> {
    let g = &cli.global;
    match cli.command {
        Command::Compute { group, kind, s } => compute(g, &group, kind, s),
        Command::Bounds { group, k } => bounds(g, &group, k),
        Command::Extract { group, seq, d, big_a, d3 } => extract(&group, &seq, d, big_a, d3, &g.search_config()),
        Command::Expansion { p, d, n, hyperplanes } => expansion(p, d, n, g.seed, hyperplanes.into()),
        Command::Enumerate { n } => enumerate(n),
        Command::Verify { suite } => verify::run(suite, g),
    }
}

fn open_cache(g: &Global) -> Option<Cache> {
    if g.no_cache {
        None
    } else {
        Cache::resolve(g.cache.as_deref())
    }
}

/// A constant, or a certified lower bound when the search ran out of nodes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Computed {
    pub value: u64,
    pub method: Method,
    pub exact: bool,
    pub nodes: u64,
    pub cached: bool,
}

impl Computed {
    fn fresh(value: u64, method: Method, exact: bool, nodes: u64) -> Computed {
        Computed { value, method, exact, nodes, cached: false }
    }

    fn from_search(r: Result<SearchReport, Error>) -> Result<Computed> {
        match r {
            Ok(r) => Ok(Computed::fresh(r.length + 1, Method::Search, r.exact, r.stats.nodes)),
            Err(Error::BudgetExhausted { lower_bound, nodes }) => Ok(Computed::fresh(lower_bound + 1, Method::Search, false, nodes)),
            Err(e) => Err(e.into()),
        }
    }
}

/// Cache read-through and write-back around `compute`.
fn cached(cache: Option<&Cache>, group: &Group, kind: Kind, compute: impl FnOnce() -> Result<Computed>) -> Result<Computed> {
    if let Some(c) = cache {
        match c.lookup(group, kind) {
            Ok((hit, warnings)) => {
                for w in warnings {
                    eprintln!("warning: cache {}: {w}", c.path().display());
                }
                if let Some(r) = hit {
                    return Ok(Computed { value: r.value, method: r.method, exact: true, nodes: 0, cached: true });
                }
            }
            Err(e) => eprintln!("warning: {e:#}"),
        }
    }
    let out = compute()?;
    if let Some(c) = cache {
        if let Err(e) = c.append(&CacheRecord::new(group, kind, out.value, out.method, out.exact)) {
            eprintln!("warning: {e:#}");
        }
    }
    Ok(out)
}

pub fn davenport(cache: Option<&Cache>, group: &Group, cfg: &SearchConfig) -> Result<Computed> {
    cached(cache, group, Kind::D, || match known_davenport(group) {
        Some((d, m)) => Ok(Computed::fresh(d, m, true, 0)),
        None => Computed::from_search(max_zero_sum_free_length(group, cfg)),
    })
}

#[derive(Serialize)]
struct ComputeReport<'a> {
    group: String,
    kind: String,
    #[serde(flatten)]
    result: &'a Computed,
    elapsed_ms: u128,
}

fn compute(g: &Global, group: &Group, kind: KindArg, s: Option<u64>) -> Result<Output> {
    let cache = open_cache(g);
    let cfg = g.search_config();
    let start = Instant::now();
    let (kind, result) = match kind {
        KindArg::D => (Kind::D, davenport(cache.as_ref(), group, &cfg)?),
        KindArg::Ds => {
            let s = s.ok_or_else(|| Error::InvalidArgument("-k Ds needs --s".into()))?;
            let kind = Kind::Ds(s);
            (kind, cached(cache.as_ref(), group, kind, || Computed::from_search(short_free_search(group, s, &cfg)))?)
        }
        KindArg::Zs => {
            let c = cache.as_ref();
            let zs = cached(c, group, Kind::Zs, || {
                let d = davenport(c, group, &cfg)?;
                Ok(Computed { value: group.order() + d.value - 1, method: Method::Gao, ..d })
            })?;
            (Kind::Zs, zs)
        }
    };
    let report = ComputeReport { group: group.to_string(), kind: kind.to_string(), result: &result, elapsed_ms: start.elapsed().as_millis() };
    let label = match kind {
        Kind::Ds(s) => format!("D^{s}"),
        other => other.to_string(),
    };
    let mut text = String::new();
    if result.exact {
        writeln!(text, "{label}({group}) = {}", result.value)?;
    } else {
        writeln!(text, "{label}({group}) >= {} (budget exhausted; certified lower bound)", result.value)?;
        eprintln!("budget exhausted after {} nodes; certified lower bound {}", result.nodes, result.value);
    }
    writeln!(
        text,
        "method: {}{}\nnodes: {}\ntime: {} ms",
        result.method.as_str(),
        if result.cached { " (cached)" } else { "" },
        result.nodes,
        report.elapsed_ms
    )?;
    Output::new(&report, text, if result.exact { EXIT_OK } else { EXIT_BUDGET })
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{r} (~{:.4})", *r.numer() as f64 / *r.denom() as f64)
    }
}

#[derive(Serialize)]
struct Frac {
    num: i128,
    den: i128,
}

fn bounds(g: &Global, group: &Group, k: Rational) -> Result<Output> {
    let cfg = g.search_config();
    let mut report: BoundReport = best_upper(group, k, &cfg);
    let mut code = EXIT_OK;
    let mut search_lower = None;
    if known_davenport(group).is_none() {
        let cache = open_cache(g);
        match davenport(cache.as_ref(), group, &cfg) {
            Ok(c) if c.exact => {
                let note = c.cached.then(|| "from cache".to_string());
                let entry = BoundEntry {
                    name: format!("exact[{}]", c.method.as_str()),
                    value: Rational::from_integer(c.value as i128),
                    applicable: true,
                    provenance: c.method.as_str(),
                    note,
                };
                report.entries.insert(0, entry);
                report.best_upper = report.applicable().map(|e| e.value).min();
            }
            Ok(c) => {
                code = EXIT_BUDGET;
                search_lower = Some(c.value);
                eprintln!("budget exhausted after {} nodes; certified lower bound {}", c.nodes, c.value);
            }
            // beyond the search caps the report simply has no exact entry
            Err(e) if matches!(e.downcast_ref::<Error>(), Some(Error::TooLarge { .. })) => {}
            Err(e) => return Err(e),
        }
    }

    let mut json = serde_json::to_value(&report)?;
    json["k"] = serde_json::to_value(Frac { num: *k.numer(), den: *k.denom() })?;
    json["search_lower_bound"] = serde_json::to_value(search_lower)?;

    let mut text = String::new();
    writeln!(text, "G = {group}   |G| = {}   M(G) = {}   K = {k}", group.order(), report.lower)?;
    let width = report.entries.iter().map(|e| e.name.len()).max().unwrap_or(0);
    for e in &report.entries {
        let value = if e.applicable { fmt_rational(&e.value) } else { "n/a".into() };
        write!(text, "  {:width$}  {value}", e.name)?;
        if let Some(n) = &e.note {
            write!(text, "  [{n}]")?;
        }
        text.push('\n');
    }
    if let Some(l) = search_lower {
        writeln!(text, "exact search incomplete: D(G) >= {l}")?;
    }
    match &report.best_upper {
        Some(b) => writeln!(text, "best upper bound: {}", fmt_rational(b))?,
        None => writeln!(text, "best upper bound: none")?,
    }
    Ok(Output { json, text, code })
}

fn prime_power(n: u64) -> bool {
    n >= 2 && {
        let p = (2..=n).find(|p| n.is_multiple_of(*p)).expect("n >= 2");
        let mut m = n;
        while m.is_multiple_of(p) {
            m /= p;
        }
        m == 1
    }
}

#[derive(Serialize)]
struct ExtractReport<'a> {
    group: String,
    d: u64,
    big_a: u64,
    d3: u64,
    witness: &'a Witness,
    decomposition: &'a BlockDecomposition,
}

fn extract(group: &Group, literal: &str, d: Option<u64>, big_a: Option<u64>, d3: Option<u64>, cfg: &SearchConfig) -> Result<Output> {
    let f = group.invariant_factors();
    if f.len() != 3 {
        return Err(Error::InvalidArgument(format!("extraction needs a rank-3 group, got {group}")).into());
    }
    let seq = Sequence::parse(group, literal)?;
    let d = d.unwrap_or(f[0]);
    if d < 2 || !f[0].is_multiple_of(d) {
        return Err(Error::InvalidArgument(format!("d = {d} must be at least 2 and divide {}", f[0])).into());
    }
    let big_a = big_a
        .or_else(|| short_constant_table(d))
        .ok_or_else(|| Error::InvalidArgument(format!("no known value of D^{d}(Z_{d}^3); pass --big-a")))?;
    let d3 = match d3 {
        Some(v) => v,
        None if prime_power(d) => 3 * d - 2,
        None => return Err(Error::InvalidArgument(format!("D(Z_{d}^3) is not known in closed form; pass --d3")).into()),
    };
    let (a, b, c) = (f[0], f[1] / f[0], f[2] / f[1]);
    let (witness, dec) = if d == a {
        extract_zero_sum_l1(a, b, c, &seq, big_a, d3)?
    } else {
        extract_zero_sum_l5(d, (a, b, c), &seq, big_a, d3, cfg)?
    };
    let report = ExtractReport { group: group.to_string(), d, big_a, d3, witness: &witness, decomposition: &dec };
    let mut text = String::new();
    writeln!(text, "zero-sum subsequence ({} terms): {}", witness.len(), witness.sub)?;
    writeln!(
        text,
        "modulus {}, threshold {}, h = {}, u = {}, {} short blocks; quotient {}",
        dec.modulus, dec.threshold, dec.h, dec.u, dec.short_blocks, dec.quotient
    )?;
    for (i, block) in dec.blocks.iter().enumerate() {
        let mark = if dec.chosen.contains(&i) { "*" } else { " " };
        writeln!(text, " {mark} block {i}: {block}")?;
    }
    Output::new(&report, text, EXIT_OK)
}

fn expansion(p: u64, d: u32, n: u64, seed: u64, kind: Hyperplanes) -> Result<Output> {
    let summary = campaign(p, d, n, seed, kind)?;
    let mut text = String::new();
    let planes = serde_json::to_value(kind)?;
    writeln!(text, "Z_{p}^{d}, {n} instances, seed {seed}, hyperplanes {}", planes.as_str().unwrap_or_default())?;
    writeln!(
        text,
        "holds {}, violations {}, rejected by hypothesis {}",
        summary.holds, summary.violations, summary.rejected_hypothesis
    )?;
    if let Some(s) = summary.min_slack {
        writeln!(text, "min slack {s}")?;
    }
    for (i, inst, v) in &summary.examples {
        writeln!(text, "violation at instance {i}: |A| = {}, |Y| = {}, W = {}, best L = {} < {}", inst.a.len(), inst.y.len(), inst.w, v.best_l, v.threshold)?;
    }
    Output::new(&summary, text, EXIT_OK)
}

#[derive(Serialize)]
struct GroupRow {
    group: String,
    order: u64,
    rank: usize,
    exponent: u64,
    m: u64,
    /// `D(G)` when a classical equality gives it.
    d: Option<u64>,
}

fn enumerate(n: u64) -> Result<Output> {
    let rows: Vec<GroupRow> = enumerate_groups(n)?
        .iter()
        .map(|g| GroupRow {
            group: g.to_string(),
            order: g.order(),
            rank: g.rank(),
            exponent: g.exponent(),
            m: g.m_lower_bound(),
            d: known_davenport(g).map(|(d, _)| d),
        })
        .collect();
    let mut text = String::new();
    for r in &rows {
        let d = r.d.map(|d| d.to_string()).unwrap_or_else(|| "?".into());
        writeln!(text, "{:16} rank {}  exp {:4}  M {:4}  D {d}", r.group, r.rank, r.exponent, r.m)?;
    }
    Output::new(&rows, text, EXIT_OK)
}
