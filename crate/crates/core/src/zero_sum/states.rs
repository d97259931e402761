//! Search states for free-sequence maximization.
//!
//! Sets of group elements are bitsets over packed indices. For groups of
//! order at most 64 a set is a single `u64` and translating it by `x` is a
//! handful of masked shifts (one pair per nonzero coordinate of `x`); larger
//! groups fall back to table lookups over [`SumSet`].

use std::cell::RefCell;
use std::hash::Hash;

use super::search::FreeState;
use crate::bitset::SumSet;
use crate::group::{AddTable, Group};

thread_local! {
    static CAPS: RefCell<Vec<u64>> = const { RefCell::new(Vec::new()) };
}

/// Everything about the group a state needs to evolve.
pub(crate) struct Space {
    pub table: AddTable,
    /// `multiples[x][j] = j * x` for `0 <= j <= ord(x)`.
    multiples: Vec<Vec<usize>>,
    shifts: Option<Shift64>,
}

impl Space {
    pub fn new(g: &Group) -> Space {
        let table = g.table();
        let n = table.order();
        let multiples = (0..n)
            .map(|x| {
                let mut m = vec![0];
                let mut y = x;
                loop {
                    m.push(y);
                    if y == 0 {
                        break;
                    }
                    y = table.add(y, x);
                }
                m
            })
            .collect();
        let shifts = (n <= 64).then(|| Shift64::new(g));
        Space { table, multiples, shifts }
    }

    pub fn order(&self) -> usize {
        self.table.order()
    }

    /// Caps per inverse pair: `cap(x)` is the most copies of `x` that could be
    /// appended right now. Appending both `x` and `-x` is never allowed, so
    /// each pair keeps only its larger cap. Zero caps are dropped.
    fn pair_caps(&self, cap: impl Fn(&[usize]) -> u64, out: &mut Vec<u64>) {
        out.clear();
        for x in 1..self.order() {
            let y = self.table.neg(x);
            if y < x {
                continue;
            }
            let cx = cap(&self.multiples[x]);
            let c = if y == x { cx } else { cx.max(cap(&self.multiples[y])) };
            if c > 0 {
                out.push(c);
            }
        }
    }
}

/// Whether some extension of `need` elements fits the caps when it must
/// also spend `|T| + |supp(T)| - 1` new nonzero sums out of `free_sums`.
/// Both counts are sound: a zero-sum free `T` appended to a free `S` adds
/// at least `|Σ(T)|` new sums, and `|Σ(T)| >= |T| + |supp(T)| - 1`.
fn extension_fits(caps: &mut [u64], need: u64, free_sums: u64) -> bool {
    caps.sort_unstable_by(|a, b| b.cmp(a));
    let mut total = 0;
    for (u, &c) in caps.iter().enumerate() {
        total += c;
        let by_sums = (free_sums + 1).saturating_sub(u as u64 + 1);
        if total.min(by_sums) >= need {
            return true;
        }
        if by_sums < need {
            return false;
        }
    }
    false
}

/// Precomputed masked shifts translating a `u64` element set by each `x`.
struct Shift64 {
    full: u64,
    /// For each element: `(low, up, down)` per nonzero coordinate. Bits whose
    /// coordinate stays below the modulus move up; the rest wrap down.
    steps: Vec<Vec<(u64, u32, u32)>>,
}

impl Shift64 {
    fn new(g: &Group) -> Shift64 {
        let n = g.order() as usize;
        let factors = g.invariant_factors();
        let mut strides = Vec::with_capacity(factors.len());
        let mut s = 1usize;
        for &d in factors {
            strides.push(s);
            s *= d as usize;
        }
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let steps = (0..n)
            .map(|x| {
                let e = g.element_at(x);
                let mut out = Vec::new();
                for (c, (&u, &d)) in e.residues().iter().zip(factors).enumerate() {
                    if u == 0 {
                        continue;
                    }
                    let mut low = 0u64;
                    for i in 0..n {
                        if ((i / strides[c]) as u64 % d) < d - u {
                            low |= 1 << i;
                        }
                    }
                    out.push((low, (u as usize * strides[c]) as u32, ((d - u) as usize * strides[c]) as u32));
                }
                out
            })
            .collect();
        Shift64 { full, steps }
    }

    #[inline]
    fn translate(&self, mut v: u64, x: usize) -> u64 {
        for &(low, up, down) in &self.steps[x] {
            v = ((v & low) << up) | ((v & !low & self.full) >> down);
        }
        v
    }
}

/// A set of element indices supporting translation.
pub(crate) trait Bits: Clone + Hash + Eq + Send + Sync {
    fn empty(n: usize) -> Self;
    fn contains(&self, i: usize) -> bool;
    fn count(&self) -> usize;
    /// `self ∪ {x} ∪ (other + x)`.
    fn grow(&self, other: &Self, x: usize, space: &Space) -> Self;
    /// Whether the permutation maps the set onto itself.
    fn fixed_by(&self, perm: &[u32]) -> bool;
}

impl Bits for u64 {
    fn empty(_: usize) -> u64 {
        0
    }

    #[inline]
    fn contains(&self, i: usize) -> bool {
        self >> i & 1 == 1
    }

    fn count(&self) -> usize {
        self.count_ones() as usize
    }

    #[inline]
    fn grow(&self, other: &u64, x: usize, space: &Space) -> u64 {
        let shifts = space.shifts.as_ref().expect("u64 states need order <= 64");
        self | 1 << x | shifts.translate(*other, x)
    }

    fn fixed_by(&self, perm: &[u32]) -> bool {
        let mut w = *self;
        while w != 0 {
            let y = w.trailing_zeros() as usize;
            w &= w - 1;
            if self >> perm[y] & 1 == 0 {
                return false;
            }
        }
        true
    }
}

impl Bits for SumSet {
    fn empty(n: usize) -> SumSet {
        SumSet::new(n)
    }

    fn contains(&self, i: usize) -> bool {
        SumSet::contains(self, i)
    }

    fn count(&self) -> usize {
        SumSet::count(self)
    }

    fn grow(&self, other: &SumSet, x: usize, space: &Space) -> SumSet {
        let row = space.table.row(x);
        let mut out = self.clone();
        out.insert(x);
        for y in other.iter() {
            out.insert(row[y] as usize);
        }
        out
    }

    fn fixed_by(&self, perm: &[u32]) -> bool {
        self.iter().all(|y| self.contains(perm[y] as usize))
    }
}

/// Nonempty subsequence sums of a zero-sum free sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct SumState<B>(pub B);

impl<B: Bits> FreeState for SumState<B> {
    type Ctx = Space;

    fn child(&self, space: &Space, x: usize) -> Option<Self> {
        if x == 0 || self.0.contains(space.table.neg(x)) {
            return None;
        }
        Some(SumState(self.0.grow(&self.0, x, space)))
    }

    fn fixed_by(&self, perm: &[u32]) -> bool {
        self.0.fixed_by(perm)
    }

    fn may_extend(&self, space: &Space, need: u64) -> bool {
        // each appended element adds at least one new nonzero sum
        let free_sums = (space.order() - 1 - self.0.count()) as u64;
        if free_sums < need {
            return false;
        }
        CAPS.with_borrow_mut(|caps| {
            space.pair_caps(
                |mult| {
                    // x^m is appendable iff no -j*x (1 <= j <= m) is already a sum
                    let mut m = 0;
                    for &jx in &mult[1..] {
                        let target = space.table.neg(jx);
                        if target == 0 || self.0.contains(target) {
                            break;
                        }
                        m += 1;
                    }
                    m
                },
                caps,
            );
            extension_fits(caps, need, free_sums)
        })
    }
}

/// For a sequence with no zero-sum subsequence of length at most `s`:
/// `levels[k - 1]` holds the sums of nonempty subsequences of length at most
/// `k`, for `k < s`. Longer subsequences never matter for the next step.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct ShortState<B> {
    pub levels: Vec<B>,
}

impl<B: Bits> ShortState<B> {
    pub fn root(n: usize, s: usize) -> Self {
        ShortState { levels: vec![B::empty(n); s.saturating_sub(1)] }
    }

    fn s(&self) -> usize {
        self.levels.len() + 1
    }

    /// Whether `y` is the sum of some nonempty subsequence of length `<= k`.
    fn reaches(&self, k: usize, y: usize) -> bool {
        k > 0 && self.levels[k.min(self.levels.len()) - 1].contains(y)
    }
}

impl<B: Bits> FreeState for ShortState<B> {
    type Ctx = Space;

    fn child(&self, space: &Space, x: usize) -> Option<Self> {
        if x == 0 || self.reaches(self.s() - 1, space.table.neg(x)) {
            return None;
        }
        let mut levels = Vec::with_capacity(self.levels.len());
        for k in 0..self.levels.len() {
            let next = if k == 0 {
                self.levels[0].grow(&B::empty(space.order()), x, space)
            } else {
                self.levels[k].grow(&self.levels[k - 1], x, space)
            };
            levels.push(next);
        }
        Some(ShortState { levels })
    }

    fn fixed_by(&self, perm: &[u32]) -> bool {
        self.levels.iter().all(|l| l.fixed_by(perm))
    }

    fn may_extend(&self, space: &Space, need: u64) -> bool {
        let s = self.s();
        CAPS.with_borrow_mut(|caps| {
            space.pair_caps(
                |mult| {
                    // j copies of x close a short zero-sum with at most s - j others
                    let mut m = 0;
                    for (j, &jx) in mult.iter().enumerate().skip(1) {
                        if jx == 0 || (j < s && self.reaches(s - j, space.table.neg(jx))) {
                            break;
                        }
                        m += 1;
                    }
                    m
                },
                caps,
            );
            caps.iter().sum::<u64>() >= need
        })
    }
}
