//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the library's search, counting or classification code.

#![allow(dead_code)]

use bicayley::cayley::{ConnectionSet, Mode};
use bicayley::digraph::Digraph;
use bicayley::group::{AbelianGroup, IsoType};

/// Non-decreasing lists of cyclic orders (each at least 2) with product at
/// most `max`.
pub fn factor_multisets(max: u64) -> Vec<Vec<u64>> {
    fn go(min: u64, left: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        let mut n = min;
        while n <= left {
            cur.push(n);
            go(n, left / n, cur, out);
            cur.pop();
            n += 1;
        }
    }
    let mut out = Vec::new();
    go(2, max, &mut Vec::new(), &mut out);
    out
}

/// One factor list per isomorphism type of even order at most `max`.
pub fn even_iso_types(max: u64) -> Vec<Vec<u64>> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for f in factor_multisets(max) {
        let t = IsoType::of_factors(&f);
        if t.order().is_multiple_of(2) && seen.insert(t.clone()) {
            out.push(t.0);
        }
    }
    out.sort_by_key(|t| (t.iter().product::<u64>(), t.clone()));
    out
}

/// Subgroups of index 2, found as the kernels of all maps onto `Z/2`
/// given by images of the standard generators.
pub fn index2_kernels(group: &AbelianGroup) -> Vec<Vec<usize>> {
    let k = group.rank();
    let mut out = Vec::new();
    for mask in 1u32..1 << k {
        if (0..k).any(|i| mask >> i & 1 == 1 && group.orders()[i] % 2 == 1) {
            continue;
        }
        let kernel: Vec<usize> = (0..group.size())
            .filter(|&a| (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| group.coord(a, i)).sum::<u64>() % 2 == 0)
            .collect();
        out.push(kernel);
    }
    out
}

/// Every admissible connection set: all subsets of `A∖B` for digraphs, the
/// inverse-closed ones for graphs (filtered from all subsets).
pub fn admissible_sets(group: &AbelianGroup, outside: &[usize], mode: Mode) -> Vec<ConnectionSet> {
    assert!(outside.len() <= 20, "oracle enumerates all subsets");
    (0u64..1 << outside.len())
        .filter_map(|mask| {
            let elems: Vec<usize> = (0..outside.len()).filter(|i| mask >> i & 1 == 1).map(|i| outside[i]).collect();
            if mode == Mode::Undirected && !elems.iter().all(|&a| elems.contains(&group.neg(a))) {
                return None;
            }
            Some(ConnectionSet::from_elements(group, elems).unwrap())
        })
        .collect()
}

/// Number of permutations fixing `v` that preserve every arc.
pub fn brute_stabilizer_order(g: &Digraph, v: usize) -> u64 {
    let n = g.n();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    perm[v] = v;
    used[v] = true;
    fn extend(g: &Digraph, x: usize, perm: &mut Vec<usize>, used: &mut Vec<bool>) -> u64 {
        let n = g.n();
        if x == n {
            return 1;
        }
        if perm[x] != usize::MAX {
            return extend(g, x + 1, perm, used);
        }
        let mut total = 0;
        for y in 0..n {
            if used[y] {
                continue;
            }
            perm[x] = y;
            let ok = (0..n).filter(|&u| perm[u] != usize::MAX).all(|u| {
                g.has_arc(u, x) == g.has_arc(perm[u], y) && g.has_arc(x, u) == g.has_arc(y, perm[u])
            });
            if ok {
                used[y] = true;
                total += extend(g, x + 1, perm, used);
                used[y] = false;
            }
            perm[x] = usize::MAX;
        }
        total
    }
    extend(g, 0, &mut perm, &mut used)
}

/// Arc `(g, h)` iff `g - h ∈ S`, built from coordinates.
pub fn cayley_arcs(group: &AbelianGroup, s: &[usize]) -> Digraph {
    let n = group.size();
    let sub = |x: usize, y: usize| {
        let (a, b) = (group.decode(x), group.decode(y));
        let c: Vec<u64> = a.iter().zip(&b).zip(group.orders()).map(|((p, q), m)| (p + m - q) % m).collect();
        group.encode(&c)
    };
    Digraph::from_arcs(n, (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| s.contains(&sub(x, y))))
}

/// Membership vector of the subgroup generated by `gens`, by closure under
/// addition.
pub fn closure(group: &AbelianGroup, gens: &[usize]) -> Vec<bool> {
    let mut inside = vec![false; group.size()];
    inside[0] = true;
    let mut frontier = vec![0usize];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = group.add(x, g);
            if !inside[y] {
                inside[y] = true;
                frontier.push(y);
            }
        }
    }
    inside
}

pub fn is_automorphism(group: &AbelianGroup, f: &dyn Fn(usize) -> usize) -> bool {
    let n = group.size();
    let mut hit = vec![false; n];
    (0..n).all(|a| !std::mem::replace(&mut hit[f(a)], true))
        && (0..n).all(|a| (0..n).all(|b| f(group.add(a, b)) == group.add(f(a), f(b))))
}

/// Admissible subsets of `A∖B` (as element lists) satisfying `keep`.
pub fn count_sets(
    group: &AbelianGroup,
    outside: &[usize],
    undirected: bool,
    keep: &dyn Fn(&[usize]) -> bool,
) -> u64 {
    let mode = if undirected { Mode::Undirected } else { Mode::Directed };
    admissible_sets(group, outside, mode)
        .iter()
        .filter(|s| {
            let elems: Vec<usize> = s.bits().iter().collect();
            keep(&elems)
        })
        .count() as u64
}

/// Pairs `(C, Z)` with `C` cyclic of order at least 4, `Z` elementary
/// abelian, `C ∩ Z = 0` and `|C||Z| = |A|`, found from all cyclic subgroups
/// and all addition-closed sets of involutions.
pub fn cyclic_elementary_pairs(group: &AbelianGroup) -> Vec<(Vec<usize>, Vec<usize>)> {
    let n = group.size();
    let members = |v: Vec<bool>| (0..n).filter(|&i| v[i]).collect::<Vec<_>>();
    let mut cyclic: Vec<Vec<usize>> = (1..n).map(|a| members(closure(group, &[a]))).filter(|c| c.len() >= 4).collect();
    cyclic.sort();
    cyclic.dedup();
    let inv: Vec<usize> = (1..n).filter(|&a| group.add(a, a) == 0).collect();
    assert!(inv.len() <= 16);
    let mut elementary: Vec<Vec<usize>> = (0u32..1 << inv.len())
        .map(|mask| {
            let gens: Vec<usize> = (0..inv.len()).filter(|i| mask >> i & 1 == 1).map(|i| inv[i]).collect();
            members(closure(group, &gens))
        })
        .collect();
    elementary.sort();
    elementary.dedup();
    let mut out = Vec::new();
    for c in &cyclic {
        for z in &elementary {
            if c.len() * z.len() == n && z.iter().filter(|x| c.contains(x)).count() == 1 {
                out.push((c.clone(), z.clone()));
            }
        }
    }
    out
}

/// Distinct sets `S′ + S″ ⊆ A∖B` with `S′ ∈ {∅, {0}, C, C∖0}` and `S″ ⊆ Z`,
/// summed over the pairs `(C, Z)`.
pub fn triple_count(group: &AbelianGroup, b: &[bool]) -> u64 {
    let mut total = 0;
    for (c, z) in cyclic_elementary_pairs(group) {
        let firsts: [Vec<usize>; 4] = [vec![], vec![0], c.clone(), c[1..].to_vec()];
        let mut seen = std::collections::BTreeSet::new();
        for first in &firsts {
            for mask in 0u64..1 << z.len() {
                let mut s: Vec<usize> = Vec::new();
                for (i, &y) in z.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        s.extend(first.iter().map(|&x| group.add(x, y)));
                    }
                }
                if s.iter().all(|&x| !b[x]) {
                    s.sort();
                    seen.insert(s);
                }
            }
        }
        total += seen.len() as u64;
    }
    total
}
