//! Decision search for long "free" sequences (no forbidden zero-sum).
//!
//! A state summarizes everything about a partial sequence that matters for
//! its future: the achievable-sum bitset for plain zero-sum freeness, or
//! the per-sum minimum subsequence length for the short variant. Because the
//! state is order-free, states reached through different orderings of the
//! same multiset (or through different multisets with equal summaries)
//! collapse in a transposition table that records, per state, the smallest
//! remaining length proven unreachable.
//!
//! The maximum is found by raising a certified incumbent one step at a
//! time: each step asks whether some free sequence is one element longer.
//!
//! Symmetry: a node carries the automorphisms known to fix its state. Any
//! extension can be moved by one of them so that its next element is the
//! least member of its orbit, so only orbit representatives are branched on.
//! Whether a state extends depends on the state alone, so a failure proven
//! this way is a failure for every path reaching the same state.

use std::cell::RefCell;
use std::hash::Hash;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use dashmap::DashMap;
use rustc_hash::{FxBuildHasher, FxHashMap};
use serde::Serialize;

use crate::error::{Error, Result};

/// Entries kept in a transposition table before it stops growing.
const MEMO_LIMIT: usize = 30_000_000;

pub(crate) trait FreeState: Clone + Hash + Eq + Send + Sync {
    type Ctx: Sync;

    /// The state after appending `x`, or `None` if that creates a forbidden
    /// zero-sum.
    fn child(&self, ctx: &Self::Ctx, x: usize) -> Option<Self>;

    /// False only if no free extension by `need` more elements exists.
    /// Must be sound; need not be exact.
    fn may_extend(&self, ctx: &Self::Ctx, need: u64) -> bool;

    /// Whether the automorphism `perm` maps the state to itself.
    fn fixed_by(&self, perm: &[u32]) -> bool;
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub memo_entries: usize,
}

/// Outcome of a maximum-length search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    /// Longest free sequence found.
    pub length: u64,
    /// False when the search stopped at the configured length cap.
    pub exact: bool,
    /// Element indices of a longest free sequence found.
    pub witness: Vec<usize>,
    pub stats: SearchStats,
}

pub(crate) struct Budget {
    remaining: AtomicU64,
    used: AtomicU64,
    cancelled: AtomicBool,
}

impl Budget {
    pub(crate) fn new(max_nodes: u64) -> Budget {
        Budget {
            remaining: AtomicU64::new(max_nodes),
            used: AtomicU64::new(0),
            cancelled: AtomicBool::new(false),
        }
    }

    fn take(&self) -> bool {
        if self.cancelled.load(Ordering::Relaxed) {
            return false;
        }
        let ok = self
            .remaining
            .fetch_update(Ordering::Relaxed, Ordering::Relaxed, |r| r.checked_sub(1))
            .is_ok();
        if ok {
            self.used.fetch_add(1, Ordering::Relaxed);
        }
        ok
    }

    fn exhausted(&self) -> bool {
        self.remaining.load(Ordering::Relaxed) == 0
    }

    pub(crate) fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }
}

trait FailMemo<S> {
    fn failed(&self, s: &S, need: u64) -> bool;
    fn record(&self, s: &S, need: u64);
    fn len(&self) -> usize;
}

struct LocalMemo<S>(RefCell<FxHashMap<S, u64>>);

impl<S: Hash + Eq + Clone> FailMemo<S> for LocalMemo<S> {
    fn failed(&self, s: &S, need: u64) -> bool {
        self.0.borrow().get(s).is_some_and(|&m| m <= need)
    }

    fn record(&self, s: &S, need: u64) {
        let mut map = self.0.borrow_mut();
        if let Some(m) = map.get_mut(s) {
            *m = (*m).min(need);
        } else if map.len() < MEMO_LIMIT {
            map.insert(s.clone(), need);
        }
    }

    fn len(&self) -> usize {
        self.0.borrow().len()
    }
}

struct SharedMemo<S: Hash + Eq>(DashMap<S, u64, FxBuildHasher>);

impl<S: Hash + Eq + Clone> FailMemo<S> for SharedMemo<S> {
    fn failed(&self, s: &S, need: u64) -> bool {
        self.0.get(s).is_some_and(|m| *m <= need)
    }

    fn record(&self, s: &S, need: u64) {
        if let Some(mut m) = self.0.get_mut(s) {
            *m = (*m).min(need);
        } else if self.0.len() < MEMO_LIMIT {
            self.0.insert(s.clone(), need);
        }
    }

    fn len(&self) -> usize {
        self.0.len()
    }
}

enum Step {
    Found,
    Fail,
    Abort,
}

struct Dfs<'a, S: FreeState, M> {
    ctx: &'a S::Ctx,
    candidates: &'a [usize],
    autos: &'a [Vec<u32>],
    memo: &'a M,
    budget: &'a Budget,
}

impl<S: FreeState, M: FailMemo<S>> Dfs<'_, S, M> {
    /// Children to branch on: one per orbit of `fixing` on the candidates,
    /// each with the automorphisms that also fix the child.
    fn branches(&self, state: &S, fixing: &[u32]) -> Vec<(usize, S, Vec<u32>)> {
        let mut out = Vec::new();
        if fixing.len() <= 1 {
            for &x in self.candidates {
                if let Some(child) = state.child(self.ctx, x) {
                    out.push((x, child, Vec::new()));
                }
            }
            return out;
        }
        let mut seen = vec![false; self.autos[0].len()];
        for &x in self.candidates {
            if seen[x] {
                continue;
            }
            for &a in fixing {
                seen[self.autos[a as usize][x] as usize] = true;
            }
            if let Some(child) = state.child(self.ctx, x) {
                let keep: Vec<u32> =
                    fixing.iter().copied().filter(|&a| child.fixed_by(&self.autos[a as usize])).collect();
                out.push((x, child, keep));
            }
        }
        out
    }

    fn extend(&self, state: &S, need: u64, fixing: &[u32], path: &mut Vec<usize>) -> Step {
        if need == 0 {
            return Step::Found;
        }
        if self.memo.failed(state, need) || !state.may_extend(self.ctx, need) {
            return Step::Fail;
        }
        if !self.budget.take() {
            return Step::Abort;
        }
        if fixing.len() <= 1 {
            // no symmetry left: avoid materializing the child list
            for &x in self.candidates {
                if let Some(child) = state.child(self.ctx, x) {
                    path.push(x);
                    match self.extend(&child, need - 1, &[], path) {
                        Step::Found => return Step::Found,
                        Step::Abort => return Step::Abort,
                        Step::Fail => {}
                    }
                    path.pop();
                }
            }
        } else {
            for (x, child, keep) in self.branches(state, fixing) {
                path.push(x);
                match self.extend(&child, need - 1, &keep, path) {
                    Step::Found => return Step::Found,
                    Step::Abort => return Step::Abort,
                    Step::Fail => {}
                }
                path.pop();
            }
        }
        self.memo.record(state, need);
        Step::Fail
    }
}

pub(crate) struct Problem<'a, S: FreeState> {
    pub ctx: &'a S::Ctx,
    pub root: S,
    /// Elements that may be appended anywhere, ascending.
    pub candidates: Vec<usize>,
    /// Automorphisms fixing the root, identity first; just the identity when
    /// symmetry pruning is off.
    pub autos: Vec<Vec<u32>>,
    /// A certified free sequence to start from.
    pub incumbent: Vec<usize>,
}

/// Raises the incumbent until a longer free sequence provably does not exist
/// (or the length cap is reached, or the budget runs out).
pub(crate) fn maximize<S: FreeState>(
    problem: &Problem<'_, S>,
    max_nodes: u64,
    workers: usize,
    length_cap: Option<u64>,
) -> Result<SearchReport> {
    let budget = Budget::new(max_nodes);
    let mut best = problem.incumbent.clone();
    let all: Vec<u32> = (0..problem.autos.len() as u32).collect();
    if workers <= 1 {
        let memo = LocalMemo(RefCell::new(FxHashMap::default()));
        let dfs = Dfs {
            ctx: problem.ctx,
            candidates: &problem.candidates,
            autos: &problem.autos,
            memo: &memo,
            budget: &budget,
        };
        loop {
            if length_cap.is_some_and(|cap| best.len() as u64 >= cap) {
                return Ok(report(best, false, &budget, memo.len()));
            }
            let need = best.len() as u64 + 1;
            let mut path = Vec::new();
            match dfs.extend(&problem.root, need, &all, &mut path) {
                Step::Found => best = path,
                Step::Fail => return Ok(report(best, true, &budget, memo.len())),
                Step::Abort => {
                    return Err(Error::BudgetExhausted { lower_bound: best.len() as u64, nodes: budget.used() })
                }
            }
        }
    }

    let memo = SharedMemo(DashMap::with_hasher(FxBuildHasher));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
    let dfs = Dfs {
        ctx: problem.ctx,
        candidates: &problem.candidates,
        autos: &problem.autos,
        memo: &memo,
        budget: &budget,
    };
    let roots = dfs.branches(&problem.root, &all);
    loop {
        if length_cap.is_some_and(|cap| best.len() as u64 >= cap) {
            return Ok(report(best, false, &budget, memo.len()));
        }
        let need = best.len() as u64 + 1;
        budget.cancelled.store(false, Ordering::Relaxed);
        let found: parking::Slot = parking::Slot::default();
        pool.install(|| {
            use rayon::prelude::*;
            roots.par_iter().for_each(|(x, child, keep)| {
                let mut path = vec![*x];
                if let Step::Found = dfs.extend(child, need - 1, keep, &mut path) {
                    found.offer(*x, path);
                    budget.cancelled.store(true, Ordering::Relaxed);
                }
            });
        });
        match found.take() {
            Some(path) => best = path,
            None if budget.exhausted() => {
                return Err(Error::BudgetExhausted { lower_bound: best.len() as u64, nodes: budget.used() })
            }
            None => return Ok(report(best, true, &budget, memo.len())),
        }
    }
}

fn report(mut witness: Vec<usize>, exact: bool, budget: &Budget, memo_entries: usize) -> SearchReport {
    witness.sort_unstable();
    SearchReport {
        length: witness.len() as u64,
        exact,
        witness,
        stats: SearchStats { nodes: budget.used(), memo_entries },
    }
}

mod parking {
    use std::sync::Mutex;

    /// Keeps the found path with the smallest first element so parallel
    /// runs report a reproducible witness when several branches succeed.
    #[derive(Default)]
    pub(super) struct Slot(Mutex<Option<(usize, Vec<usize>)>>);

    impl Slot {
        pub(super) fn offer(&self, first: usize, path: Vec<usize>) {
            let mut slot = self.0.lock().unwrap();
            if slot.as_ref().is_none_or(|(f, _)| first < *f) {
                *slot = Some((first, path));
            }
        }

        pub(super) fn take(&self) -> Option<Vec<usize>> {
            self.0.lock().unwrap().take().map(|(_, p)| p)
        }
    }
}
