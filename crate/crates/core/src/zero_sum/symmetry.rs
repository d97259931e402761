//! Automorphisms used for symmetry pruning: the small group of equal-factor
//! coordinate permutations combined with negation, and the full group
//! `Aut(G)` when it is small enough to list.

use crate::group::Group;

/// Every automorphism in the group generated by equal-factor coordinate
/// swaps and `x -> -x`, as a permutation of packed indices. The identity
/// comes first.
pub fn coordinate_automorphisms(g: &Group) -> Vec<Vec<u32>> {
    let factors = g.invariant_factors();
    let mut perms: Vec<Vec<usize>> = vec![(0..factors.len()).collect()];
    let mut start = 0;
    while start < factors.len() {
        let mut end = start;
        while end < factors.len() && factors[end] == factors[start] {
            end += 1;
        }
        let block_perms = permutations(end - start);
        let mut next = Vec::with_capacity(perms.len() * block_perms.len());
        for p in &perms {
            for bp in &block_perms {
                let mut q = p.clone();
                for (i, &j) in bp.iter().enumerate() {
                    q[start + i] = p[start + j];
                }
                next.push(q);
            }
        }
        perms = next;
        start = end;
    }
    let table = g.table();
    let n = g.order() as usize;
    let mut out = Vec::with_capacity(perms.len() * 2);
    for negate in [false, true] {
        for p in &perms {
            let map: Vec<u32> = (0..n)
                .map(|i| {
                    let x = g.element_at(i);
                    let moved: Vec<u64> = p.iter().map(|&src| x.residues()[src]).collect();
                    let y = g.element(&moved).expect("equal factors keep residues in range");
                    (if negate { table.neg(y.index()) } else { y.index() }) as u32
                })
                .collect();
            out.push(map);
        }
    }
    out.sort();
    out.dedup();
    let identity: Vec<u32> = (0..n as u32).collect();
    let pos = out.iter().position(|m| *m == identity).expect("identity present");
    out.swap(0, pos);
    out
}

/// Smallest index in each orbit of nonzero elements, ascending.
pub fn orbit_representatives(g: &Group, autos: &[Vec<u32>]) -> Vec<usize> {
    let n = g.order() as usize;
    (1..n)
        .filter(|&x| autos.iter().all(|a| a[x] as usize >= x))
        .collect()
}

/// Every automorphism of `g` as a permutation of packed indices, identity
/// first, or `None` if there are more than `cap` of them.
///
/// An automorphism is fixed by the images `g_i` of the basis vectors `e_i`.
/// The images are chosen in turn so that `g_i` has order exactly `d_i` and
/// meets the span of the earlier images only in zero; that makes the
/// induced map injective.
pub fn all_automorphisms(g: &Group, cap: usize) -> Option<Vec<Vec<u32>>> {
    let factors = g.invariant_factors().to_vec();
    let n = g.order() as usize;
    let table = g.table();
    let mut out = Vec::new();
    let mut images = Vec::with_capacity(factors.len());
    let mut span = vec![0usize];
    if !extend_basis(&table, &factors, &mut images, &mut span, &mut out, cap) {
        return None;
    }
    // index i has residues c_j; its image is sum of c_j * g_j
    let perms = out
        .into_iter()
        .map(|imgs: Vec<usize>| {
            (0..n)
                .map(|i| {
                    let e = g.element_at(i);
                    let mut acc = 0usize;
                    for (&c, &gi) in e.residues().iter().zip(&imgs) {
                        for _ in 0..c {
                            acc = table.add(acc, gi);
                        }
                    }
                    acc as u32
                })
                .collect::<Vec<u32>>()
        })
        .collect();
    Some(perms)
}

fn extend_basis(
    table: &crate::group::AddTable,
    factors: &[u64],
    images: &mut Vec<usize>,
    span: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    cap: usize,
) -> bool {
    let i = images.len();
    if i == factors.len() {
        out.push(images.clone());
        return out.len() <= cap;
    }
    let d = factors[i] as usize;
    let n = table.order();
    let mut in_span = vec![false; n];
    for &y in span.iter() {
        in_span[y] = true;
    }
    // the identity map is found first because candidates run in index order
    // and the basis vector e_i is the smallest element meeting the conditions
    let mut candidates: Vec<usize> = (1..n).collect();
    let stride: usize = factors[..i].iter().map(|&f| f as usize).product();
    candidates.retain(|&x| x != stride);
    candidates.insert(0, stride);
    for x in candidates {
        let mut y = x;
        let mut ok = true;
        for _ in 1..d {
            if y == 0 || in_span[y] {
                ok = false;
                break;
            }
            y = table.add(y, x);
        }
        if !ok || y != 0 {
            continue;
        }
        let mut next = Vec::with_capacity(span.len() * d);
        let mut m = 0usize;
        for _ in 0..d {
            next.extend(span.iter().map(|&s| table.add(s, m)));
            m = table.add(m, x);
        }
        let saved = std::mem::replace(span, next);
        images.push(x);
        let keep_going = extend_basis(table, factors, images, span, out, cap);
        images.pop();
        *span = saved;
        if !keep_going {
            return false;
        }
    }
    true
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn automorphism_counts() {
        let g: Group = "3,3,3".parse().unwrap();
        assert_eq!(coordinate_automorphisms(&g).len(), 12);
        let g: Group = "2,2,2".parse().unwrap();
        // negation is trivial in an elementary 2-group
        assert_eq!(coordinate_automorphisms(&g).len(), 6);
        let g: Group = "2,4".parse().unwrap();
        assert_eq!(coordinate_automorphisms(&g).len(), 2);
    }

    #[test]
    fn maps_are_additive_bijections() {
        let g: Group = "3,3,6".parse().unwrap();
        let t = g.table();
        for a in coordinate_automorphisms(&g) {
            let mut seen = a.clone();
            seen.sort();
            assert_eq!(seen, (0..g.order() as u32).collect::<Vec<_>>());
            for x in 0..g.order() as usize {
                for y in 0..g.order() as usize {
                    assert_eq!(a[t.add(x, y)] as usize, t.add(a[x] as usize, a[y] as usize));
                }
            }
        }
    }

    #[test]
    fn full_automorphism_group_orders() {
        let count = |s: &str| all_automorphisms(&s.parse().unwrap(), 1 << 20).map(|a| a.len());
        // |GL(2,2)| = 6, |GL(2,3)| = 48, |GL(3,2)| = 168, |Aut(Z_4)| = 2
        assert_eq!(count("2,2"), Some(6));
        assert_eq!(count("3,3"), Some(48));
        assert_eq!(count("2,2,2"), Some(168));
        assert_eq!(count("4"), Some(2));
        // |Aut(Z_2 + Z_4)| = 8
        assert_eq!(count("2,4"), Some(8));
        assert_eq!(all_automorphisms(&"2,2,2,2,2,2".parse().unwrap(), 1000), None);
    }

    #[test]
    fn full_automorphisms_are_additive_bijections() {
        let g: Group = "2,6".parse().unwrap();
        let t = g.table();
        let autos = all_automorphisms(&g, 10_000).unwrap();
        assert_eq!(autos[0], (0..12).collect::<Vec<u32>>());
        for a in &autos {
            let mut seen = a.clone();
            seen.sort();
            assert_eq!(seen, (0..12).collect::<Vec<u32>>());
            for x in 0..12 {
                for y in 0..12 {
                    assert_eq!(a[t.add(x, y)] as usize, t.add(a[x] as usize, a[y] as usize));
                }
            }
        }
    }

    #[test]
    fn orbit_reps_of_elementary_group() {
        let g: Group = "2,2,2".parse().unwrap();
        let autos = coordinate_automorphisms(&g);
        // orbits by Hamming weight: (1,0,0), (1,1,0), (1,1,1)
        assert_eq!(orbit_representatives(&g, &autos), vec![1, 3, 7]);
    }
}
