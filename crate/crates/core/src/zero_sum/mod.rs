//! Subset-sum reachability, zero-sum witnesses, and the exact search for
//! `D(G)`, `D^s(G)` and `ZS(G)`.

mod constants;
mod search;
mod states;
mod symmetry;

pub use constants::{
    davenport, davenport_short, davenport_with_method, known_davenport, max_zero_sum_free_length,
    short_free_search, zero_sum_constant, zs_direct, Method, ZS_DIRECT_CAP,
};
pub use search::{SearchReport, SearchStats};
pub use symmetry::{coordinate_automorphisms, orbit_representatives};

use serde::{Deserialize, Serialize};

use crate::bitset::SumSet;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::sequence::{Sequence, Witness};

/// Knobs for the exact searches.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Node budget shared by all workers of one search.
    pub max_nodes: u64,
    pub symmetry_pruning: bool,
    pub workers: usize,
    /// Stop as soon as a free sequence of this length is found. The result
    /// is then a certified lower bound, not an exact value.
    pub length_cap: Option<u64>,
    /// Largest group order `davenport` will search.
    pub order_cap: u64,
    /// Largest group order `davenport_short` will search.
    pub short_order_cap: u64,
    /// Largest `s` `davenport_short` will search.
    pub short_s_cap: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_nodes: 200_000_000,
            symmetry_pruning: true,
            workers: 1,
            length_cap: None,
            order_cap: 64,
            short_order_cap: 64,
            short_s_cap: 4,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.workers == 0 {
            return Err(Error::InvalidArgument("workers must be at least 1".into()));
        }
        if self.max_nodes == 0 {
            return Err(Error::InvalidArgument("max_nodes must be positive".into()));
        }
        Ok(())
    }
}

/// Sums of all nonempty sub-multisets of `seq`, as a bitset over element
/// indices. Each element `x` of multiplicity `k` is folded in `k` times.
pub fn achievable_sums(seq: &Sequence) -> SumSet {
    let n = seq.group().order() as usize;
    let table = seq.group().table();
    let mut reach = SumSet::new(n);
    let mut next = SumSet::new(n);
    for (x, k) in seq.index_counts() {
        // copies beyond n cannot add anything new
        for _ in 0..k.min(n as u64) {
            reach.extend_into(x, table.row(x), &mut next);
            if next == reach {
                break;
            }
            std::mem::swap(&mut reach, &mut next);
        }
    }
    reach
}

/// Some nonempty zero-sum sub-multiset of `seq`, if any exists. The witness
/// returned has minimum length.
pub fn find_zero_sum(seq: &Sequence) -> Option<Witness> {
    find_short_zero_sum(seq, seq.len().max(1))
}

/// A zero-sum sub-multiset of length at most `s`, if any exists.
///
/// Layered DP over the items in canonical order: `best[i][y]` is the least
/// number of items among the first `i` summing to `y`. Backtracking prefers
/// skipping later items, so the witness is deterministic.
pub fn find_short_zero_sum(seq: &Sequence, s: u64) -> Option<Witness> {
    let group = seq.group();
    let n = group.order() as usize;
    let items = seq.flat_indices();
    if items.is_empty() || s == 0 {
        return None;
    }
    let table = group.table();
    let cap = s.min(items.len() as u64) as u16;
    let inf = cap + 1;
    let mut layers: Vec<Vec<u16>> = Vec::with_capacity(items.len() + 1);
    layers.push(vec![inf; n]);
    for &x in &items {
        let prev = layers.last().unwrap();
        let mut cur = prev.clone();
        for (y, slot) in cur.iter_mut().enumerate() {
            let from = table.add(y, table.neg(x));
            let base = if from == 0 { 0 } else { prev[from] };
            let cand = (base + 1).min(inf);
            if cand < *slot {
                *slot = cand;
            }
        }
        layers.push(cur);
    }
    if layers[items.len()][0] > cap {
        return None;
    }
    let mut chosen = Vec::new();
    let (mut i, mut y) = (items.len(), 0usize);
    let mut need = layers[i][0];
    loop {
        if layers[i - 1][y] == need {
            i -= 1;
            continue;
        }
        let x = items[i - 1];
        chosen.push(x);
        y = table.add(y, table.neg(x));
        need -= 1;
        i -= 1;
        if y == 0 && need == 0 {
            break;
        }
        debug_assert_eq!(layers[i][y], need);
    }
    Some(Witness { sub: Sequence::from_indices(group.clone(), chosen) })
}

/// Whether `seq` has any nonempty zero-sum sub-multiset.
pub fn has_zero_sum(seq: &Sequence) -> bool {
    achievable_sums(seq).contains(0)
}

/// Enumerates sums of all nonempty sub-multisets directly. Exponential;
/// intended as a test oracle.
pub fn naive_sums(seq: &Sequence) -> Vec<usize> {
    let group = seq.group();
    let table = group.table();
    let counts: Vec<(usize, u64)> = seq.index_counts().collect();
    let mut out = std::collections::BTreeSet::new();
    let mut pick = vec![0u64; counts.len()];
    loop {
        // advance mixed-radix counter over multiplicities
        let mut pos = 0;
        while pos < counts.len() && pick[pos] == counts[pos].1 {
            pick[pos] = 0;
            pos += 1;
        }
        if pos == counts.len() {
            break;
        }
        pick[pos] += 1;
        let mut s = 0usize;
        for (&(x, _), &k) in counts.iter().zip(&pick) {
            for _ in 0..k {
                s = table.add(s, x);
            }
        }
        out.insert(s);
    }
    out.into_iter().collect()
}

pub(crate) fn check_group(g: &Group, cap: u64) -> Result<()> {
    if g.order() > cap {
        return Err(Error::TooLarge { order: g.order(), cap });
    }
    Ok(())
}
