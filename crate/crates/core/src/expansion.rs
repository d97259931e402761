//! Translate expansion in `Z_p^d`: the hyperplane spread of a set `A`, the
//! boundary count `L(a) = |(a + Y) \ Y|`, and a randomized check of
//! `max_{a in A} L(a) >= W |Y| / (5p)` at the largest admissible `W`.
//!
//! Points are packed mixed-radix indices, first coordinate least
//! significant.

use num_rational::Ratio;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::is_prime;
use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

/// Largest `p^d` handled.
pub const SPACE_CAP: u64 = 1 << 16;

/// `Z_p^d` with packed points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Space {
    p: u64,
    d: u32,
    n: usize,
}

impl Space {
    pub fn new(p: u64, d: u32) -> Result<Space> {
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!("p = {p} is not prime")));
        }
        if d == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        let n = p.checked_pow(d).filter(|&n| n <= SPACE_CAP).ok_or(Error::TooLarge {
            order: p.saturating_pow(d),
            cap: SPACE_CAP,
        })?;
        Ok(Space { p, d, n: n as usize })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> u32 {
        self.d
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn coords(&self, mut x: usize) -> Vec<u64> {
        let p = self.p as usize;
        (0..self.d)
            .map(|_| {
                let c = x % p;
                x /= p;
                c as u64
            })
            .collect()
    }

    pub fn point(&self, coords: &[u64]) -> Result<usize> {
        if coords.len() != self.d as usize {
            return Err(Error::Arity { expected: self.d as usize, got: coords.len() });
        }
        let mut x = 0usize;
        for &c in coords.iter().rev() {
            if c >= self.p {
                return Err(Error::ResidueOutOfRange { residue: c as i64, modulus: self.p });
            }
            x = x * self.p as usize + c as usize;
        }
        Ok(x)
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        let p = self.p as usize;
        let (mut x, mut y, mut out, mut radix) = (x, y, 0, 1);
        for _ in 0..self.d {
            out += (x % p + y % p) % p * radix;
            x /= p;
            y /= p;
            radix *= p;
        }
        out
    }

    pub fn scale(&self, j: u64, x: usize) -> usize {
        let p = self.p as usize;
        let j = (j % self.p) as usize;
        let (mut x, mut out, mut radix) = (x, 0, 1);
        for _ in 0..self.d {
            out += x % p * j % p * radix;
            x /= p;
            radix *= p;
        }
        out
    }

    fn dot(&self, x: usize, y: usize) -> usize {
        let p = self.p as usize;
        let (mut x, mut y, mut s) = (x, y, 0);
        for _ in 0..self.d {
            s += (x % p) * (y % p);
            x /= p;
            y /= p;
        }
        s % p
    }

    /// Nonzero functionals up to scalar multiples: first nonzero coordinate 1.
    fn directions(&self) -> impl Iterator<Item = usize> + '_ {
        (1..self.n).filter(|&x| self.coords(x).into_iter().find(|&c| c != 0) == Some(1))
    }

    fn membership(&self, set: &[usize]) -> Vec<bool> {
        let mut m = vec![false; self.n];
        for &y in set {
            m[y] = true;
        }
        m
    }
}

/// Which level sets count as hyperplanes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hyperplanes {
    /// `{v : x.v = c}` for every level `c`.
    #[default]
    Affine,
    /// Only `c = 0`.
    ThroughOrigin,
}

/// Most points of `a` on one hyperplane.
pub fn hyperplane_max_count(space: &Space, a: &[usize], kind: Hyperplanes) -> usize {
    let mut best = 0;
    let mut counts = vec![0usize; space.p as usize];
    for x in space.directions() {
        counts.fill(0);
        for &v in a {
            counts[space.dot(x, v)] += 1;
        }
        let m = match kind {
            Hyperplanes::Affine => counts.iter().copied().max().unwrap_or(0),
            Hyperplanes::ThroughOrigin => counts[0],
        };
        best = best.max(m);
    }
    best
}

/// `|A| / (4 max_count)`: the largest `W` with no hyperplane holding more
/// than `|A| / 4W` points of `A`.
pub fn max_w(space: &Space, a: &[usize], kind: Hyperplanes) -> Result<Rational> {
    if a.is_empty() {
        return Err(Error::InvalidArgument("A must be nonempty".into()));
    }
    let m = hyperplane_max_count(space, a, kind);
    Ok(Rational::new(a.len() as i64, 4 * m as i64))
}

/// `|(a + Y) \ Y|`.
pub fn boundary_expansion(space: &Space, y: &[usize], a: usize) -> usize {
    let member = space.membership(y);
    boundary_with(space, y, &member, a)
}

fn boundary_with(space: &Space, y: &[usize], member: &[bool], a: usize) -> usize {
    y.iter().filter(|&&v| !member[space.add(v, a)]).count()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VectorInstance {
    pub p: u64,
    pub d: u32,
    /// Distinct nonzero points.
    pub a: Vec<usize>,
    /// Distinct points.
    pub y: Vec<usize>,
    pub w: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub best_a: Vec<u64>,
    pub best_l: usize,
    /// `W |Y| / (5p)`.
    pub threshold: Rational,
}

fn distinct(set: &[usize], n: usize, what: &str) -> Result<()> {
    let mut seen = vec![false; n];
    for &x in set {
        if x >= n {
            return Err(Error::InvalidArgument(format!("{what} has point index {x} outside the space")));
        }
        if std::mem::replace(&mut seen[x], true) {
            return Err(Error::InvalidArgument(format!("{what} repeats point index {x}")));
        }
    }
    Ok(())
}

/// Evaluates the expansion inequality on one instance. Hypothesis failures
/// (`|Y| > p^d / 2`, or some hyperplane holding more than `|A| / 4W` points
/// of `A`) are `Precondition` errors, distinct from a failing verdict.
pub fn check_expansion(inst: &VectorInstance, kind: Hyperplanes) -> Result<Verdict> {
    let space = Space::new(inst.p, inst.d)?;
    distinct(&inst.a, space.n, "A")?;
    distinct(&inst.y, space.n, "Y")?;
    if inst.a.is_empty() || inst.a.contains(&0) {
        return Err(Error::InvalidArgument("A must be a nonempty set of nonzero points".into()));
    }
    if inst.w <= Rational::from_integer(0) {
        return Err(Error::InvalidArgument(format!("W = {} must be positive", inst.w)));
    }
    if 2 * inst.y.len() > space.n {
        return Err(Error::Precondition(format!("|Y| = {} exceeds p^d / 2", inst.y.len())));
    }
    // max_count <= |A| / 4W  <=>  4 W max_count <= |A|
    let count = hyperplane_max_count(&space, &inst.a, kind);
    if inst.w * Rational::from_integer(4 * count as i64) > Rational::from_integer(inst.a.len() as i64) {
        return Err(Error::Precondition(format!(
            "a hyperplane holds {count} points of A, more than |A|/4W = {}",
            Rational::from_integer(inst.a.len() as i64) / (inst.w * 4)
        )));
    }
    let member = space.membership(&inst.y);
    let (best_l, best_a) = inst
        .a
        .iter()
        .map(|&a| (boundary_with(&space, &inst.y, &member, a), a))
        .max_by(|x, y| x.0.cmp(&y.0).then(y.1.cmp(&x.1)))
        .expect("A is nonempty");
    let threshold = inst.w * Rational::from_integer(inst.y.len() as i64) / Rational::from_integer(5 * inst.p as i64);
    Ok(Verdict {
        holds: Rational::from_integer(best_l as i64) >= threshold,
        best_a: space.coords(best_a),
        best_l,
        threshold,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubadditivityReport {
    pub l_a: usize,
    /// `(j, L(j a))` for each `j` with `L(j a) > j L(a)`.
    pub violations: Vec<(u64, usize)>,
}

/// Checks `L(j a) <= j L(a)` for `1 <= j <= j_max`.
pub fn subadditivity_check(space: &Space, y: &[usize], a: usize, j_max: u64) -> Result<SubadditivityReport> {
    if j_max == 0 {
        return Err(Error::InvalidArgument("j_max must be at least 1".into()));
    }
    let member = space.membership(y);
    let l_a = boundary_with(space, y, &member, a);
    let violations = (1..=j_max)
        .filter_map(|j| {
            let l = boundary_with(space, y, &member, space.scale(j, a));
            (l > j as usize * l_a).then_some((j, l))
        })
        .collect();
    Ok(SubadditivityReport { l_a, violations })
}

fn random_subset(rng: &mut ChaCha8Rng, pool: usize, size: usize, offset: usize) -> Vec<usize> {
    let mut s: Vec<usize> = sample(rng, pool, size).into_iter().map(|i| i + offset).collect();
    s.sort_unstable();
    s
}

/// A random instance at `W = max_w(A)`: `|A|` uniform in `1..p^d`, `A` a
/// uniform subset of the nonzero points of that size; `|Y|` uniform in
/// `0..=p^d/2`, `Y` uniform of that size.
pub fn random_instance(space: &Space, rng: &mut ChaCha8Rng, kind: Hyperplanes) -> VectorInstance {
    let n = space.n;
    let a_len = rng.gen_range(1..n);
    let a = random_subset(rng, n - 1, a_len, 1);
    let y_len = rng.gen_range(0..=n / 2);
    let y = random_subset(rng, n, y_len, 0);
    let w = max_w(space, &a, kind).expect("A is nonempty");
    VectorInstance { p: space.p, d: space.d, a, y, w }
}

/// Seed for instance `i` of a campaign.
fn instance_seed(seed: u64, i: u64) -> u64 {
    seed ^ i.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CampaignSummary {
    pub p: u64,
    pub d: u32,
    pub seed: u64,
    pub instances: u64,
    pub holds: u64,
    pub violations: u64,
    pub rejected_hypothesis: u64,
    /// Least `best_l - threshold` over evaluated instances.
    pub min_slack: Option<Rational>,
    /// The lowest-numbered violating instances, at most five.
    pub examples: Vec<(u64, VectorInstance, Verdict)>,
}

/// Runs `count` independent random instances. Results do not depend on the
/// number of worker threads.
pub fn campaign(p: u64, d: u32, count: u64, seed: u64, kind: Hyperplanes) -> Result<CampaignSummary> {
    let space = Space::new(p, d)?;
    let outcomes: Vec<(u64, VectorInstance, Result<Verdict>)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(instance_seed(seed, i));
            let inst = random_instance(&space, &mut rng, kind);
            let v = check_expansion(&inst, kind);
            (i, inst, v)
        })
        .collect();
    let mut s = CampaignSummary {
        p,
        d,
        seed,
        instances: count,
        holds: 0,
        violations: 0,
        rejected_hypothesis: 0,
        min_slack: None,
        examples: Vec::new(),
    };
    for (i, inst, v) in outcomes {
        match v {
            Ok(v) => {
                let slack = Rational::from_integer(v.best_l as i64) - v.threshold;
                s.min_slack = Some(s.min_slack.map_or(slack, |m| m.min(slack)));
                if v.holds {
                    s.holds += 1;
                } else {
                    s.violations += 1;
                    if s.examples.len() < 5 {
                        s.examples.push((i, inst, v));
                    }
                }
            }
            Err(Error::Precondition(_)) => s.rejected_hypothesis += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(s)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SubadditivitySummary {
    pub checks: u64,
    pub violations: u64,
}

/// `count` random triples `(Y, a, j)` with `p` drawn from `primes` and `d`
/// from `dims`; `j` ranges over `1..p`.
pub fn subadditivity_campaign(primes: &[u64], dims: &[u32], count: u64, seed: u64) -> Result<SubadditivitySummary> {
    let spaces = primes
        .iter()
        .flat_map(|&p| dims.iter().map(move |&d| Space::new(p, d)))
        .collect::<Result<Vec<_>>>()?;
    if spaces.is_empty() {
        return Err(Error::InvalidArgument("no (p, d) pairs given".into()));
    }
    let violations: u64 = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(instance_seed(seed, i));
            let space = &spaces[rng.gen_range(0..spaces.len())];
            let y_len = rng.gen_range(0..=space.n);
            let y = random_subset(&mut rng, space.n, y_len, 0);
            let a = rng.gen_range(0..space.n);
            let j = rng.gen_range(1..space.p);
            let member = space.membership(&y);
            let l_a = boundary_with(space, &y, &member, a);
            let l_ja = boundary_with(space, &y, &member, space.scale(j, a));
            u64::from(l_ja > j as usize * l_a)
        })
        .sum();
    Ok(SubadditivitySummary { checks: count, violations })
}
