//! Finite abelian groups in invariant-factor form and their elements.
//!
//! A group is always stored as a chain `d_1 | d_2 | ... | d_r` with every
//! `d_i >= 2`. Elements carry their residue tuple together with a packed
//! mixed-radix index (first coordinate least significant), which is what
//! the search code keys its bitsets on.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, partitions};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Group {
    factors: Vec<u64>,
}

impl Group {
    /// Invariant-factor form of `Z_{m_1} + ... + Z_{m_k}`.
    ///
    /// Each modulus is split into prime powers; the largest power of every
    /// prime goes into the top factor, the next largest into the one below,
    /// and so on.
    pub fn normalize(moduli: &[u64]) -> Result<Group> {
        if let Some(&bad) = moduli.iter().find(|&&m| m < 2) {
            return Err(Error::InvalidModulus(bad as i64));
        }
        let mut by_prime: Vec<(u64, Vec<u32>)> = Vec::new();
        for &m in moduli {
            for (p, e) in factorize(m) {
                match by_prime.iter_mut().find(|(q, _)| *q == p) {
                    Some((_, exps)) => exps.push(e),
                    None => by_prime.push((p, vec![e])),
                }
            }
        }
        Ok(Self::from_primary(&by_prime))
    }

    /// Assembles the invariant factors from per-prime exponent lists.
    fn from_primary(by_prime: &[(u64, Vec<u32>)]) -> Group {
        let rank = by_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
        let mut factors = vec![1u64; rank];
        for (p, exps) in by_prime {
            let mut exps = exps.clone();
            exps.sort_unstable_by(|a, b| b.cmp(a));
            for (i, e) in exps.iter().enumerate() {
                factors[rank - 1 - i] *= p.pow(*e);
            }
        }
        Group { factors }
    }

    pub fn trivial() -> Group {
        Group { factors: Vec::new() }
    }

    pub fn cyclic(n: u64) -> Result<Group> {
        if n == 1 {
            return Ok(Group::trivial());
        }
        Group::normalize(&[n])
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// True when the order is a prime power (the trivial group is excluded).
    pub fn is_p_group(&self) -> bool {
        factorize(self.order()).len() == 1
    }

    /// `M(G) = 1 + sum (d_i - 1)`, the universal lower bound for `D(G)`.
    pub fn m_lower_bound(&self) -> u64 {
        1 + self.factors.iter().map(|d| d - 1).sum::<u64>()
    }

    /// Primary decomposition: for every prime, the exponents of its cyclic
    /// summands in nonincreasing order.
    pub fn primary_components(&self) -> Vec<(u64, Vec<u32>)> {
        let mut by_prime: Vec<(u64, Vec<u32>)> = Vec::new();
        for &d in &self.factors {
            for (p, e) in factorize(d) {
                match by_prime.iter_mut().find(|(q, _)| *q == p) {
                    Some((_, exps)) => exps.push(e),
                    None => by_prime.push((p, vec![e])),
                }
            }
        }
        by_prime.sort_unstable_by_key(|(p, _)| *p);
        for (_, exps) in &mut by_prime {
            exps.sort_unstable_by(|a, b| b.cmp(a));
        }
        by_prime
    }

    /// Direct sum with another group, renormalized.
    pub fn direct_sum(&self, other: &Group) -> Group {
        let mut moduli = self.factors.clone();
        moduli.extend_from_slice(&other.factors);
        Group::normalize(&moduli).expect("invariant factors are >= 2")
    }

    pub fn zero(&self) -> Element {
        Element { residues: vec![0; self.rank()], index: 0 }
    }

    /// Builds an element from residues already in `[0, d_i)`.
    pub fn element(&self, residues: &[u64]) -> Result<Element> {
        self.check_arity(residues.len())?;
        for (&r, &d) in residues.iter().zip(&self.factors) {
            if r >= d {
                return Err(Error::ResidueOutOfRange { residue: r as i64, modulus: d });
            }
        }
        Ok(Element { residues: residues.to_vec(), index: self.pack(residues) })
    }

    /// Builds an element from arbitrary integers, reducing each modulo `d_i`.
    pub fn element_reduced(&self, values: &[i64]) -> Result<Element> {
        self.check_arity(values.len())?;
        let residues: Vec<u64> = values
            .iter()
            .zip(&self.factors)
            .map(|(&v, &d)| v.rem_euclid(d as i64) as u64)
            .collect();
        let index = self.pack(&residues);
        Ok(Element { residues, index })
    }

    pub fn element_at(&self, index: usize) -> Element {
        assert!((index as u64) < self.order(), "index {index} out of range");
        let mut rest = index as u64;
        let residues = self
            .factors
            .iter()
            .map(|&d| {
                let r = rest % d;
                rest /= d;
                r
            })
            .collect();
        Element { residues, index }
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order() as usize).map(move |i| self.element_at(i))
    }

    pub fn add(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check_arity(x.residues.len())?;
        self.check_arity(y.residues.len())?;
        let residues: Vec<u64> = x
            .residues
            .iter()
            .zip(&y.residues)
            .zip(&self.factors)
            .map(|((a, b), d)| (a + b) % d)
            .collect();
        let index = self.pack(&residues);
        Ok(Element { residues, index })
    }

    pub fn neg(&self, x: &Element) -> Result<Element> {
        self.scalar_mul(-1, x)
    }

    /// `k * x`; negative `k` is allowed.
    pub fn scalar_mul(&self, k: i64, x: &Element) -> Result<Element> {
        self.check_arity(x.residues.len())?;
        let residues: Vec<u64> = x
            .residues
            .iter()
            .zip(&self.factors)
            .map(|(&r, &d)| {
                let k = k.rem_euclid(d as i64) as u128;
                ((k * r as u128) % d as u128) as u64
            })
            .collect();
        let index = self.pack(&residues);
        Ok(Element { residues, index })
    }

    /// Precomputed addition and negation on packed indices.
    pub fn table(&self) -> AddTable {
        let n = self.order() as usize;
        let mut add = vec![0u32; n * n];
        let mut neg = vec![0u32; n];
        let elems: Vec<Element> = self.elements().collect();
        for x in &elems {
            neg[x.index] = self.pack_iter(
                x.residues.iter().zip(&self.factors).map(|(&r, &d)| (d - r) % d),
            ) as u32;
            for y in &elems[x.index..] {
                let s = self.pack_iter(
                    x.residues
                        .iter()
                        .zip(&y.residues)
                        .zip(&self.factors)
                        .map(|((a, b), d)| (a + b) % d),
                ) as u32;
                add[x.index * n + y.index] = s;
                add[y.index * n + x.index] = s;
            }
        }
        AddTable { n, add, neg }
    }

    fn pack(&self, residues: &[u64]) -> usize {
        self.pack_iter(residues.iter().copied())
    }

    fn pack_iter(&self, residues: impl Iterator<Item = u64>) -> usize {
        let mut index = 0u64;
        let mut radix = 1u64;
        for (r, &d) in residues.zip(&self.factors) {
            index += r * radix;
            radix *= d;
        }
        index as usize
    }

    fn check_arity(&self, got: usize) -> Result<()> {
        if got != self.rank() {
            return Err(Error::Arity { expected: self.rank(), got });
        }
        Ok(())
    }
}

impl TryFrom<Vec<u64>> for Group {
    type Error = Error;

    fn try_from(moduli: Vec<u64>) -> Result<Group> {
        Group::normalize(&moduli)
    }
}

impl From<Group> for Vec<u64> {
    fn from(g: Group) -> Vec<u64> {
        g.factors
    }
}

/// Group spec grammar: comma-separated moduli, whitespace ignored, e.g.
/// `"2, 2, 6"`. The empty string is the trivial group. Parsing normalizes.
impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Group> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Ok(Group::trivial());
        }
        let moduli = compact
            .split(',')
            .map(|tok| {
                let v: i64 = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad modulus {tok:?} in group spec {s:?}")))?;
                if v < 2 {
                    return Err(Error::InvalidModulus(v));
                }
                Ok(v as u64)
            })
            .collect::<Result<Vec<u64>>>()?;
        Group::normalize(&moduli)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// A group element: residues per invariant factor plus the packed index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Element {
    residues: Vec<u64>,
    index: usize,
}

impl Element {
    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn is_zero(&self) -> bool {
        self.index == 0
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.index.cmp(&other.index).then_with(|| self.residues.cmp(&other.residues))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.residues.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Addition and negation tables over packed indices.
#[derive(Clone, Debug)]
pub struct AddTable {
    n: usize,
    add: Vec<u32>,
    neg: Vec<u32>,
}

impl AddTable {
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.n + y] as usize
    }

    #[inline]
    pub fn neg(&self, x: usize) -> usize {
        self.neg[x] as usize
    }

    #[inline]
    pub fn row(&self, x: usize) -> &[u32] {
        &self.add[x * self.n..(x + 1) * self.n]
    }
}

/// All abelian groups of order `n` up to isomorphism, sorted by rank and
/// then lexicographically on the invariant factors.
pub fn enumerate_groups(n: u64) -> Result<Vec<Group>> {
    if n == 0 {
        return Err(Error::InvalidArgument("group order must be at least 1".into()));
    }
    let primes = factorize(n);
    let mut choices: Vec<Vec<(u64, Vec<u32>)>> = vec![Vec::new()];
    for &(p, e) in &primes {
        let mut next = Vec::new();
        for prefix in &choices {
            for part in partitions(e) {
                let mut c = prefix.clone();
                c.push((p, part));
                next.push(c);
            }
        }
        choices = next;
    }
    let mut groups: Vec<Group> = choices.iter().map(|c| Group::from_primary(c)).collect();
    groups.sort_by(|a, b| a.rank().cmp(&b.rank()).then_with(|| a.factors.cmp(&b.factors)));
    Ok(groups)
}
