//! Constructive zero-sum extraction by block peeling.
//!
//! For `G = Z_n1 + Z_n2 + Z_n3` and `d | n1`, reduction mod `d` maps `G`
//! onto `Z_d^3`. A sub-multiset whose image sums to zero has a sum in `dG`,
//! which is isomorphic to the quotient `Q = Z_{n1/d} + Z_{n2/d} + Z_{n3/d}`.
//! Peeling `h >= D(Q)` disjoint such blocks and finding a zero-sum
//! subcollection of their images in `Q` yields a zero-sum in `G`.
//!
//! Block schedule for a sequence of length at least
//! `B = (h - u - 1) d + A`, where `A >= D^d(Z_d^3)` and `u = (A - d) / D(Z_d^3)`:
//! first `max(h - u, 0)` blocks of length at most `d`, then `min(h, u)`
//! blocks of length at most `D(Z_d^3)`. Before each short peel the residual is at least
//! `A`; before each unrestricted peel it is at least `D(Z_d^3)`. When
//! `h <= u` the residual still covers all `h` unrestricted peels because
//! `D(Z_d^3) >= d`.

use serde::Serialize;

use crate::bounds::{bound_lemma1, bound_lemma5, lemma1_h};
use crate::error::{Error, Result};
use crate::group::{AddTable, Element, Group};
use crate::sequence::{Sequence, Witness};
use crate::zero_sum::SearchConfig;

/// Disjoint blocks peeled from a sequence, their images in the quotient, and
/// the blocks whose union is the returned zero-sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockDecomposition {
    /// The reduction modulus (`s` or `d`).
    pub modulus: u64,
    pub h: u64,
    pub u: u64,
    /// Number of leading blocks peeled with the length cap `modulus`.
    pub short_blocks: u64,
    /// The threshold length `B(h)`.
    pub threshold: u64,
    pub blocks: Vec<Sequence>,
    /// Group the block images live in.
    pub quotient: String,
    pub quotient_elements: Vec<Element>,
    /// Ascending block indices.
    pub chosen: Vec<usize>,
}

/// Everything fixed by the group and the modulus.
struct Reduction {
    group: Group,
    d: u64,
    proj_group: Group,
    proj_table: AddTable,
    /// `proj[x]` is the index of `x mod d` in `Z_d^3`.
    proj: Vec<usize>,
    quotient: Group,
}

impl Reduction {
    fn new(group: &Group, d: u64) -> Result<Reduction> {
        let f = group.invariant_factors();
        if f.len() != 3 || f.iter().any(|&n| n % d != 0) {
            return Err(Error::Precondition(format!("{d} must divide every invariant factor of the rank-3 group {group}")));
        }
        let proj_group = Group::normalize(&[d, d, d])?;
        let proj = group
            .elements()
            .map(|e| {
                let r: Vec<u64> = e.residues().iter().map(|&x| x % d).collect();
                proj_group.element(&r).expect("reduced residues").index()
            })
            .collect();
        let q: Vec<u64> = f.iter().map(|&n| n / d).filter(|&n| n > 1).collect();
        let quotient = Group::normalize(&q)?;
        Ok(Reduction { group: group.clone(), d, proj_table: proj_group.table(), proj_group, proj, quotient })
    }

    /// Image in the quotient of a block whose reduction sums to zero.
    fn lift(&self, block: &Sequence) -> Result<Element> {
        let f = self.group.invariant_factors();
        let mut residues = Vec::new();
        for (c, &n) in f.iter().enumerate() {
            let total: u128 = block.iter().map(|(e, k)| e.residues()[c] as u128 * k as u128).sum();
            if !total.is_multiple_of(self.d as u128) {
                return Err(Error::InvariantBreach(format!("block coordinate {c} sum is not divisible by {}", self.d)));
            }
            let m = n / self.d;
            if m > 1 {
                residues.push(((total / self.d as u128) % m as u128) as u64);
            }
        }
        self.quotient.element(&residues)
    }
}

/// Positions (ascending) of the lexicographically least nonempty selection
/// from `values` of at most `cap` items summing to zero under `table`, where
/// selections are compared by their sorted value lists. `values` must be
/// sorted by the order in which ties are broken.
fn least_zero_selection(values: &[usize], table: &AddTable, cap: usize) -> Option<Vec<usize>> {
    let n = table.order();
    let len = values.len();
    const INF: usize = usize::MAX;
    // suffix[i][y]: fewest items from values[i..] summing to y (empty allowed)
    let mut suffix = vec![vec![INF; n]; len + 1];
    suffix[len][0] = 0;
    for i in (0..len).rev() {
        let (head, tail) = suffix.split_at_mut(i + 1);
        let (cur, next) = (&mut head[i], &tail[0]);
        cur.copy_from_slice(next);
        for y in 0..n {
            let rest = next[table.add(y, table.neg(values[i]))];
            if rest != INF && rest + 1 < cur[y] {
                cur[y] = rest + 1;
            }
        }
    }
    let mut chosen = Vec::new();
    let mut partial = 0usize;
    let mut from = 0;
    loop {
        if !chosen.is_empty() && partial == 0 {
            return Some(chosen);
        }
        let budget = cap.checked_sub(chosen.len() + 1)?;
        let pick = (from..len).find(|&i| {
            let after = table.add(partial, values[i]);
            suffix[i + 1][table.neg(after)] <= budget
        })?;
        partial = table.add(partial, values[pick]);
        chosen.push(pick);
        from = pick + 1;
    }
}

fn peel(red: &Reduction, residual: &Sequence, cap: usize) -> Option<Sequence> {
    let items = residual.flat_indices();
    let values: Vec<usize> = items.iter().map(|&x| red.proj[x]).collect();
    let picks = least_zero_selection(&values, &red.proj_table, cap)?;
    Some(Sequence::from_indices(red.group.clone(), picks.into_iter().map(|i| items[i])))
}

/// Shared peeling and recombination. `threshold` is `B(h)`.
fn extract(
    seq: &Sequence,
    red: &Reduction,
    h: u64,
    big_a: u64,
    d_3: u64,
    threshold: u64,
) -> Result<(Witness, BlockDecomposition)> {
    let d = red.d;
    let u = (big_a - d) / d_3;
    if seq.len() < threshold {
        return Err(Error::Precondition(format!("sequence length {} is below the threshold {threshold}", seq.len())));
    }
    let short_blocks = h.saturating_sub(u);
    let mut residual = seq.clone();
    let mut blocks = Vec::with_capacity(h as usize);
    for j in 0..h {
        let short = j < short_blocks;
        // any D(Z_d^3) elements contain a zero-sum mod d, so unrestricted
        // blocks can always be kept that short; the counting needs it
        let (needed, cap) = if short { (big_a, d as usize) } else { (d_3, d_3 as usize) };
        if residual.len() < needed {
            return Err(Error::InvariantBreach(format!(
                "residual length {} before block {} is below {needed}",
                residual.len(),
                j + 1
            )));
        }
        let block = peel(red, &residual, cap).ok_or_else(|| {
            Error::InvariantBreach(format!(
                "no zero-sum mod {d} of length <= {cap} in a residual of length {} (block {})",
                residual.len(),
                j + 1
            ))
        })?;
        residual = residual.difference(&block);
        blocks.push(block);
    }

    let quotient_elements = blocks.iter().map(|b| red.lift(b)).collect::<Result<Vec<_>>>()?;
    let q_table = red.quotient.table();
    let values: Vec<usize> = quotient_elements.iter().map(Element::index).collect();
    let chosen = least_zero_selection(&values, &q_table, values.len()).ok_or_else(|| {
        Error::InvariantBreach(format!("{h} block images in {} have no zero-sum subcollection", red.quotient))
    })?;
    let mut sub = Sequence::new(red.group.clone());
    for &j in &chosen {
        sub = sub.union(&blocks[j]);
    }
    let witness = Witness { sub };
    witness.validate(seq, None)?;
    let dec = BlockDecomposition {
        modulus: d,
        h,
        u,
        short_blocks,
        threshold,
        blocks,
        quotient: red.quotient.to_string(),
        quotient_elements,
        chosen,
    };
    Ok((witness, dec))
}

fn expect_group(seq: &Sequence, moduli: &[u64]) -> Result<()> {
    let g = Group::normalize(moduli)?;
    if seq.group() != &g {
        return Err(Error::Precondition(format!("sequence is over {} but the parameters describe {g}", seq.group())));
    }
    Ok(())
}

/// A zero-sum subsequence of `seq` over `Z_s + Z_sa + Z_sab`, given
/// `A >= D^s(Z_s^3)` and `d_s3 = D(Z_s^3)`. The sequence must be at least as
/// long as [`bound_lemma1`].
pub fn extract_zero_sum_l1(
    s: u64,
    a: u64,
    b: u64,
    seq: &Sequence,
    big_a: u64,
    d_s3: u64,
) -> Result<(Witness, BlockDecomposition)> {
    let bound = bound_lemma1(s, a, b, big_a, d_s3)?;
    expect_group(seq, &[s, s * a, s * a * b])?;
    let red = Reduction::new(seq.group(), s)?;
    extract(seq, &red, lemma1_h(a, b), big_a, d_s3, bound.value)
}

/// A zero-sum subsequence of `seq` over `Z_a + Z_ab + Z_abc` by reduction
/// mod `d | a`, given `A >= D^d(Z_d^3)` and `d_d3 = D(Z_d^3)`. `d = a`
/// is exactly [`extract_zero_sum_l1`] with `(s, a, b) = (d, b, c)`.
#[allow(clippy::too_many_arguments)]
pub fn extract_zero_sum_l5(
    d: u64,
    (a, b, c): (u64, u64, u64),
    seq: &Sequence,
    big_a: u64,
    d_d3: u64,
    cfg: &SearchConfig,
) -> Result<(Witness, BlockDecomposition)> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("d = {d} must be at least 2")));
    }
    if a == d {
        return extract_zero_sum_l1(d, b, c, seq, big_a, d_d3);
    }
    let bound = bound_lemma5(d, (a, b, c), big_a, d_d3, None, cfg)?
        .ok_or_else(|| Error::Precondition("no block count is defined for these parameters".into()))?;
    expect_group(seq, &[a, a * b, a * b * c])?;
    let red = Reduction::new(seq.group(), d)?;
    extract(seq, &red, bound.h, big_a, d_d3, bound.value)
}

/// Checks every structural invariant of a decomposition against its input
/// and witness.
pub fn check_decomposition(seq: &Sequence, witness: &Witness, dec: &BlockDecomposition) -> Result<()> {
    let breach = |m: String| Err(Error::InvariantBreach(m));
    witness.validate(seq, None)?;
    if dec.blocks.len() as u64 != dec.h {
        return breach(format!("{} blocks but h = {}", dec.blocks.len(), dec.h));
    }
    let red = Reduction::new(seq.group(), dec.modulus)?;
    let mut used = Sequence::new(seq.group().clone());
    for (j, block) in dec.blocks.iter().enumerate() {
        if block.is_empty() {
            return breach(format!("block {j} is empty"));
        }
        if (j as u64) < dec.short_blocks && block.len() > dec.modulus {
            return breach(format!("short block {j} has length {}", block.len()));
        }
        let proj_sum = block
            .index_counts()
            .fold(0usize, |acc, (x, k)| (0..k).fold(acc, |acc, _| red.proj_table.add(acc, red.proj[x])));
        if proj_sum != 0 {
            return breach(format!("block {j} sums to {} mod {}", red.proj_group.element_at(proj_sum), dec.modulus));
        }
        if red.lift(block)? != dec.quotient_elements[j] {
            return breach(format!("quotient element {j} does not match its block"));
        }
        used = used.union(block);
    }
    if !used.is_submultiset_of(seq) {
        return breach("blocks are not disjoint sub-multisets of the input".into());
    }
    if dec.chosen.is_empty() || dec.chosen.windows(2).any(|w| w[0] >= w[1]) {
        return breach("chosen block indices must be nonempty and ascending".into());
    }
    let mut sub = Sequence::new(seq.group().clone());
    let mut q_sum = red.quotient.zero();
    for &j in &dec.chosen {
        sub = sub.union(&dec.blocks[j]);
        q_sum = red.quotient.add(&q_sum, &dec.quotient_elements[j])?;
    }
    if !q_sum.is_zero() {
        return breach(format!("chosen images sum to {q_sum}"));
    }
    if sub != witness.sub {
        return breach("witness is not the union of the chosen blocks".into());
    }
    Ok(())
}
