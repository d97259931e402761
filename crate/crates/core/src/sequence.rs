//! Sequences (multisets) over a group and zero-sum witnesses.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{Element, Group};

/// A finite multiset of elements of `group`, keyed by packed index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequence {
    group: Group,
    counts: BTreeMap<usize, u64>,
    len: u64,
}

impl Sequence {
    pub fn new(group: Group) -> Sequence {
        Sequence { group, counts: BTreeMap::new(), len: 0 }
    }

    pub fn from_elements<'a>(group: Group, elems: impl IntoIterator<Item = &'a Element>) -> Result<Sequence> {
        let mut seq = Sequence::new(group);
        for e in elems {
            seq.push(e, 1)?;
        }
        Ok(seq)
    }

    pub fn from_indices(group: Group, indices: impl IntoIterator<Item = usize>) -> Sequence {
        let n = group.order() as usize;
        let mut seq = Sequence::new(group);
        for i in indices {
            assert!(i < n, "element index {i} out of range");
            seq.push_index(i, 1);
        }
        seq
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, e: &Element, k: u64) -> Result<()> {
        // re-derive from residues so foreign elements are rejected
        let own = self.group.element(e.residues())?;
        self.push_index(own.index(), k);
        Ok(())
    }

    pub(crate) fn push_index(&mut self, index: usize, k: u64) {
        if k > 0 {
            *self.counts.entry(index).or_insert(0) += k;
            self.len += k;
        }
    }

    pub fn multiplicity(&self, e: &Element) -> u64 {
        self.counts.get(&e.index()).copied().unwrap_or(0)
    }

    /// Distinct elements with multiplicities, in canonical (index) order.
    pub fn iter(&self) -> impl Iterator<Item = (Element, u64)> + '_ {
        self.counts.iter().map(|(&i, &k)| (self.group.element_at(i), k))
    }

    pub fn index_counts(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().map(|(&i, &k)| (i, k))
    }

    /// Element indices with repetition, nondecreasing.
    pub fn flat_indices(&self) -> Vec<usize> {
        self.counts
            .iter()
            .flat_map(|(&i, &k)| std::iter::repeat_n(i, k as usize))
            .collect()
    }

    pub fn sum(&self) -> Element {
        let values: Vec<i64> = (0..self.group.rank())
            .map(|c| {
                let d = self.group.invariant_factors()[c] as u128;
                let s: u128 = self
                    .iter()
                    .map(|(e, k)| e.residues()[c] as u128 * k as u128 % d)
                    .sum::<u128>()
                    % d;
                s as i64
            })
            .collect();
        self.group.element_reduced(&values).expect("arity matches")
    }

    pub fn is_submultiset_of(&self, other: &Sequence) -> bool {
        self.group == other.group
            && self.counts.iter().all(|(i, &k)| other.counts.get(i).copied().unwrap_or(0) >= k)
    }

    /// Multiset difference `self - other`; `other` must be contained in `self`.
    pub fn difference(&self, other: &Sequence) -> Sequence {
        assert!(other.is_submultiset_of(self), "difference of non-contained multisets");
        let mut out = Sequence::new(self.group.clone());
        for (&i, &k) in &self.counts {
            out.push_index(i, k - other.counts.get(&i).copied().unwrap_or(0));
        }
        out
    }

    pub fn union(&self, other: &Sequence) -> Sequence {
        let mut out = self.clone();
        for (&i, &k) in &other.counts {
            out.push_index(i, k);
        }
        out
    }

    /// Parses the sequence literal format: semicolon-separated residue tuples,
    /// each optionally suffixed with `*k`, e.g. `"1,0,0*2; 0,1,2"`. Residues are
    /// reduced modulo the invariant factors.
    pub fn parse(group: &Group, literal: &str) -> Result<Sequence> {
        let compact: String = literal.chars().filter(|c| !c.is_whitespace()).collect();
        let mut seq = Sequence::new(group.clone());
        if compact.is_empty() {
            return Ok(seq);
        }
        for item in compact.split(';').filter(|s| !s.is_empty()) {
            let (tuple, mult) = match item.split_once('*') {
                Some((t, m)) => {
                    let k: u64 = m
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad multiplicity {m:?} in {item:?}")))?;
                    (t, k)
                }
                None => (item, 1),
            };
            let values = tuple
                .split(',')
                .map(|v| v.parse::<i64>().map_err(|_| Error::Parse(format!("bad residue {v:?} in {item:?}"))))
                .collect::<Result<Vec<i64>>>()?;
            let e = group.element_reduced(&values)?;
            seq.push_index(e.index(), mult);
        }
        Ok(seq)
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .iter()
            .map(|(e, k)| {
                let tuple: Vec<String> = e.residues().iter().map(u64::to_string).collect();
                if k == 1 {
                    tuple.join(",")
                } else {
                    format!("{}*{}", tuple.join(","), k)
                }
            })
            .collect();
        f.write_str(&parts.join("; "))
    }
}

struct Entries<'a>(&'a Sequence);

impl Serialize for Entries<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.0.counts.len()))?;
        for (e, k) in self.0.iter() {
            seq.serialize_element(&Entry { residues: e.residues(), multiplicity: k })?;
        }
        seq.end()
    }
}

struct Entry<'a> {
    residues: &'a [u64],
    multiplicity: u64,
}

impl Serialize for Entry<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut m = serializer.serialize_map(Some(2))?;
        m.serialize_entry("residues", self.residues)?;
        m.serialize_entry("multiplicity", &self.multiplicity)?;
        m.end()
    }
}

impl Serialize for Sequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Sequence", 4)?;
        s.serialize_field("group", &self.group.to_string())?;
        s.serialize_field("length", &self.len)?;
        s.serialize_field("literal", &self.to_string())?;
        s.serialize_field("elements", &Entries(self))?;
        s.end()
    }
}

/// A nonempty zero-sum sub-multiset of some parent sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub sub: Sequence,
}

impl Witness {
    pub fn len(&self) -> u64 {
        self.sub.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sub.is_empty()
    }

    /// Checks nonemptiness, containment in `parent`, zero sum, and an
    /// optional length cap.
    pub fn validate(&self, parent: &Sequence, max_len: Option<u64>) -> Result<()> {
        if self.sub.is_empty() {
            return Err(Error::InvariantBreach("witness is empty".into()));
        }
        if !self.sub.is_submultiset_of(parent) {
            return Err(Error::InvariantBreach("witness is not contained in its parent".into()));
        }
        if !self.sub.sum().is_zero() {
            return Err(Error::InvariantBreach(format!("witness sums to {}", self.sub.sum())));
        }
        if let Some(cap) = max_len {
            if self.sub.len() > cap {
                return Err(Error::InvariantBreach(format!(
                    "witness length {} exceeds cap {cap}",
                    self.sub.len()
                )));
            }
        }
        Ok(())
    }
}
