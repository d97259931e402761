//! Fixed-length bitsets over packed element indices.

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SumSet {
    words: Vec<u64>,
    len: usize,
}

impl SumSet {
    pub fn new(len: usize) -> SumSet {
        SumSet { words: vec![0; len.div_ceil(64)], len }
    }

    /// Capacity in bits (the group order).
    pub fn universe(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i >> 6] |= 1 << (i & 63);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i >> 6] &= !(1 << (i & 63));
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + tz)
            })
        })
    }

    /// Writes `self ∪ {x} ∪ (self + x)` into `out`, where `row[y] = x + y`.
    pub fn extend_into(&self, x: usize, row: &[u32], out: &mut SumSet) {
        out.words.copy_from_slice(&self.words);
        out.insert(x);
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let y = wi * 64 + w.trailing_zeros() as usize;
                w &= w - 1;
                out.insert(row[y] as usize);
            }
        }
    }

    /// Elements of `self + x` that are not in `self`, counted.
    pub fn translate_outside(&self, row: &[u32]) -> usize {
        self.iter().filter(|&y| !self.contains(row[y] as usize)).count()
    }

    pub fn union_with(&mut self, other: &SumSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }
}
