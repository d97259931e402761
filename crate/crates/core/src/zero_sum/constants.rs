//! `D(G)`, `D^s(G)` and `ZS(G)`: known-equality oracles first, exact search
//! otherwise.

use serde::{Deserialize, Serialize};

use super::search::{maximize, FreeState, Problem, SearchReport};
use super::states::{ShortState, Space, SumState};
use super::symmetry::{all_automorphisms, coordinate_automorphisms};
use super::{check_group, SearchConfig};
use crate::bitset::SumSet;
use crate::error::{Error, Result};
use crate::group::{AddTable, Group};

/// Hard cap on the group order accepted by [`zs_direct`].
pub const ZS_DIRECT_CAP: u64 = 9;

/// How a constant was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// `D = d_1 + d_2 - 1` for rank at most 2.
    FormulaRank2,
    /// `D = M(G)` for p-groups.
    #[serde(rename = "formula-pgroup")]
    FormulaPGroup,
    Search,
    /// `ZS = |G| + D - 1`.
    Gao,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::FormulaRank2 => "formula-rank2",
            Method::FormulaPGroup => "formula-pgroup",
            Method::Search => "search",
            Method::Gao => "gao",
        }
    }
}

/// `D(G)` when a classical equality applies: rank at most 2, or a p-group.
pub fn known_davenport(g: &Group) -> Option<(u64, Method)> {
    match g.invariant_factors() {
        [] => Some((1, Method::FormulaRank2)),
        [n] => Some((*n, Method::FormulaRank2)),
        [a, b] => Some((a + b - 1, Method::FormulaRank2)),
        _ if g.is_p_group() => Some((g.m_lower_bound(), Method::FormulaPGroup)),
        _ => None,
    }
}

/// `e_1^(d_1 - 1) ... e_r^(d_r - 1)`: zero-sum free of length `M(G) - 1`.
fn standard_free_sequence(g: &Group) -> Vec<usize> {
    let mut out = Vec::new();
    let mut radix = 1usize;
    for &d in g.invariant_factors() {
        out.extend(std::iter::repeat_n(radix, d as usize - 1));
        radix *= d as usize;
    }
    out
}

/// Largest automorphism group listed explicitly for symmetry pruning.
const AUT_CAP: usize = 200_000;

/// Automorphisms used to prune the search, identity first: all of `Aut(G)`
/// when it is small enough, else the coordinate automorphisms.
fn symmetry_group(g: &Group, cfg: &SearchConfig) -> Vec<Vec<u32>> {
    if !cfg.symmetry_pruning {
        return vec![(0..g.order() as u32).collect()];
    }
    all_automorphisms(g, AUT_CAP).unwrap_or_else(|| coordinate_automorphisms(g))
}

/// Runs the maximization from a root state, after checking that the
/// standard sequence (length `M(G) - 1`) is free and so a valid incumbent.
fn run<S: FreeState<Ctx = Space>>(g: &Group, space: &Space, root: S, cfg: &SearchConfig) -> Result<SearchReport> {
    let incumbent = standard_free_sequence(g);
    let mut check = root.clone();
    for &x in &incumbent {
        check = check
            .child(space, x)
            .ok_or_else(|| Error::InvariantBreach("standard sequence has a forbidden zero sum".into()))?;
    }
    let problem = Problem {
        ctx: space,
        root,
        candidates: (1..space.order()).collect(),
        autos: symmetry_group(g, cfg),
        incumbent,
    };
    maximize(&problem, cfg.max_nodes, cfg.workers, cfg.length_cap)
}

/// Maximum length of a zero-sum free sequence over `g`, i.e. `D(G) - 1`.
///
/// The search starts from the standard free sequence of length `M(G) - 1`
/// and proves or refutes each longer length in turn. A budget error carries
/// the longest free length certified so far.
pub fn max_zero_sum_free_length(g: &Group, cfg: &SearchConfig) -> Result<SearchReport> {
    cfg.validate()?;
    check_group(g, cfg.order_cap)?;
    let space = Space::new(g);
    let n = space.order();
    if n <= 64 {
        run(g, &space, SumState(0u64), cfg)
    } else {
        run(g, &space, SumState(SumSet::new(n)), cfg)
    }
}

/// Turns a budget error on a free length into one on the constant.
fn constant_bound(e: Error) -> Error {
    match e {
        Error::BudgetExhausted { lower_bound, nodes } => Error::BudgetExhausted { lower_bound: lower_bound + 1, nodes },
        other => other,
    }
}

/// `D(G)` and how it was obtained. Rank-2 and p-group equalities are used
/// when they apply; otherwise the exact search runs.
pub fn davenport_with_method(g: &Group, cfg: &SearchConfig) -> Result<(u64, Method)> {
    if let Some(known) = known_davenport(g) {
        return Ok(known);
    }
    let report = max_zero_sum_free_length(g, cfg).map_err(constant_bound)?;
    if !report.exact {
        return Err(Error::BudgetExhausted { lower_bound: report.length + 1, nodes: report.stats.nodes });
    }
    Ok((report.length + 1, Method::Search))
}

pub fn davenport(g: &Group, cfg: &SearchConfig) -> Result<u64> {
    davenport_with_method(g, cfg).map(|(d, _)| d)
}

/// Longest sequence over `g` with no zero-sum subsequence of length at most
/// `s`. Requires `s >= exp(G)`; below that the length is unbounded.
pub fn short_free_search(g: &Group, s: u64, cfg: &SearchConfig) -> Result<SearchReport> {
    cfg.validate()?;
    if s == 0 {
        return Err(Error::InvalidArgument("s must be at least 1".into()));
    }
    if g.is_trivial() {
        return Ok(SearchReport { length: 0, exact: true, witness: vec![], stats: Default::default() });
    }
    if s < g.exponent() {
        return Err(Error::Unbounded { s, exponent: g.exponent() });
    }
    check_group(g, cfg.short_order_cap)?;
    if s > cfg.short_s_cap {
        return Err(Error::InvalidArgument(format!("s = {s} exceeds the configured cap {}", cfg.short_s_cap)));
    }
    // a minimal zero-sum subsequence never exceeds |G| elements
    let s_eff = s.min(g.order()) as usize;
    let space = Space::new(g);
    let n = space.order();
    if n <= 64 {
        run(g, &space, ShortState::<u64>::root(n, s_eff), cfg)
    } else {
        run(g, &space, ShortState::<SumSet>::root(n, s_eff), cfg)
    }
}

/// `D^s(G)`: one more than the longest sequence without a zero-sum
/// subsequence of length at most `s`.
pub fn davenport_short(g: &Group, s: u64, cfg: &SearchConfig) -> Result<u64> {
    let report = short_free_search(g, s, cfg).map_err(constant_bound)?;
    if !report.exact {
        return Err(Error::BudgetExhausted { lower_bound: report.length + 1, nodes: report.stats.nodes });
    }
    Ok(report.length + 1)
}

/// `ZS(G) = |G| + D(G) - 1`.
pub fn zero_sum_constant(g: &Group, cfg: &SearchConfig) -> Result<u64> {
    Ok(g.order() + davenport(g, cfg)? - 1)
}

/// `ZS(G)` straight from the definition: the least `t` such that every
/// length-`t` sequence has a zero-sum subsequence of length exactly `|G|`.
/// Exhaustive over multisets in nondecreasing element order.
pub fn zs_direct(g: &Group) -> Result<u64> {
    let n = g.order();
    if n > ZS_DIRECT_CAP {
        return Err(Error::TooLarge { order: n, cap: ZS_DIRECT_CAP });
    }
    let n = n as usize;
    let table = g.table();
    // reach[k] = sums of sub-multisets with exactly k elements
    let mut reach = vec![0u16; n + 1];
    reach[0] = 1;
    let mut best = 0usize;
    zs_dfs(&table, n, 0, 0, &mut reach, &mut best);
    Ok(best as u64 + 1)
}

fn zs_dfs(table: &AddTable, n: usize, min_elem: usize, len: usize, reach: &mut Vec<u16>, best: &mut usize) {
    *best = (*best).max(len);
    for x in min_elem..n {
        let saved = reach.clone();
        for k in (1..=n).rev() {
            let mut shifted = 0u16;
            let mut bits = reach[k - 1];
            while bits != 0 {
                let y = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                shifted |= 1 << table.add(y, x);
            }
            reach[k] |= shifted;
        }
        if reach[n] & 1 == 0 {
            zs_dfs(table, n, x, len + 1, reach, best);
        }
        *reach = saved;
    }
}
