use std::collections::HashSet;

use crate::bitset::BitSet;
use crate::group::{AbelianGroup, Subgroup};

use super::enumerate_automorphisms_capped;
use crate::error::Result;

/// A homomorphism `A → Z/p`, stored by its values on the standard generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    pub p: u64,
    pub values: Vec<u64>,
}

impl Character {
    pub fn eval(&self, group: &AbelianGroup, a: usize) -> u64 {
        let coords = group.decode(a);
        coords.iter().zip(&self.values).map(|(&c, &v)| c * v).sum::<u64>() % self.p
    }

    pub fn kernel(&self, group: &AbelianGroup) -> Subgroup {
        let n = group.size();
        let bits = BitSet::from_indices(n, (0..n).filter(|&a| self.eval(group, a) == 0));
        Subgroup::from_members(group, bits)
    }
}

/// Nonzero characters onto `Z/p`, one per kernel: values range over factors
/// whose order is divisible by `p`, and the first nonzero value is 1.
/// Listed in lexicographic order of the value tuples.
fn characters(group: &AbelianGroup, p: u64) -> Vec<Character> {
    let slots: Vec<usize> = (0..group.rank()).filter(|&i| group.orders()[i].is_multiple_of(p)).collect();
    let r = slots.len();
    let mut out = Vec::new();
    let total = p.pow(r as u32);
    for code in 1..total {
        // most significant digit ↔ first slot
        let mut digits = vec![0u64; r];
        let mut c = code;
        for d in digits.iter_mut().rev() {
            *d = c % p;
            c /= p;
        }
        if digits.iter().find(|&&d| d != 0) != Some(&1) {
            continue;
        }
        let mut values = vec![0u64; group.rank()];
        for (&slot, &d) in slots.iter().zip(&digits) {
            values[slot] = d;
        }
        out.push(Character { p, values });
    }
    out
}

/// Index-2 subgroups as kernels of the nonzero characters `A → C₂`, in
/// lexicographic order of the characters' values on the even factors.
/// Selecting `index:k` on the command line refers to this order.
pub fn index2_subgroups(group: &AbelianGroup) -> Vec<Subgroup> {
    characters(group, 2).iter().map(|c| c.kernel(group)).collect()
}

pub fn index2_characters(group: &AbelianGroup) -> Vec<Character> {
    characters(group, 2)
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut ps = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            ps.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        ps.push(n);
    }
    ps
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_divisors(n) == vec![n]
}

/// Subgroups of prime index, grouped by prime in increasing order.
pub fn prime_index_subgroups(group: &AbelianGroup) -> Vec<Subgroup> {
    prime_divisors(group.size() as u64)
        .into_iter()
        .flat_map(|p| characters(group, p).into_iter().map(|c| c.kernel(group)))
        .collect()
}

/// Subgroups of prime order, ordered by their least nonzero element.
pub fn prime_order_subgroups(group: &AbelianGroup) -> Vec<Subgroup> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for a in 1..group.size() {
        if !is_prime(group.element_order(a)) {
            continue;
        }
        let h = group.generated_subgroup(&[a]);
        if seen.insert(h.members().clone()) {
            out.push(h);
        }
    }
    out
}

/// Orbits of `Aut(A)` on the index-2 subgroups, as lists of positions in
/// [`index2_subgroups`] order.
pub fn index2_subgroup_orbits(group: &AbelianGroup, cap: usize) -> Result<Vec<Vec<usize>>> {
    let subs = index2_subgroups(group);
    let mut parent: Vec<usize> = (0..subs.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for alpha in enumerate_automorphisms_capped(group, cap)? {
        for (i, b) in subs.iter().enumerate() {
            let img = alpha.map_set(b.members());
            let j = subs.iter().position(|s| *s.members() == img).expect("image of an index-2 subgroup");
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for i in 0..subs.len() {
        let r = find(&mut parent, i);
        match orbits.iter_mut().find(|o| find(&mut parent, o[0]) == r) {
            Some(o) => o.push(i),
            None => orbits.push(vec![i]),
        }
    }
    Ok(orbits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::IsoType;

    fn g(orders: &[u64]) -> AbelianGroup {
        AbelianGroup::new(orders).unwrap()
    }

    /// Oracle: every subset closed under the group law, found by closing all
    /// pairs of generators.
    fn all_subgroups(group: &AbelianGroup) -> HashSet<BitSet> {
        let mut out = HashSet::new();
        let mut frontier = vec![Subgroup::trivial(group)];
        out.insert(frontier[0].members().clone());
        while let Some(h) = frontier.pop() {
            for a in 0..group.size() {
                if h.contains(a) {
                    continue;
                }
                let mut gens = h.generators().to_vec();
                gens.push(a);
                let k = group.generated_subgroup(&gens);
                if out.insert(k.members().clone()) {
                    frontier.push(k);
                }
            }
        }
        out
    }

    #[test]
    fn index2_examples() {
        let c6 = g(&[6]);
        let subs = index2_subgroups(&c6);
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].order(), 3);

        let c42 = g(&[4, 2]);
        let subs = index2_subgroups(&c42);
        let types: Vec<IsoType> = subs.iter().map(|s| s.iso_type(&c42)).collect();
        assert_eq!(types.iter().filter(|t| t.0 == vec![2, 2]).count(), 1);
        assert_eq!(types.iter().filter(|t| t.0 == vec![4]).count(), 2);

        assert_eq!(index2_subgroups(&g(&[2, 2, 2])).len(), 7);
        assert!(index2_subgroups(&g(&[9])).is_empty());
    }

    #[test]
    fn index2_matches_exhaustive_subgroup_scan() {
        for orders in [&[4, 2][..], &[2, 6], &[8], &[2, 2, 2], &[3, 6]] {
            let grp = g(orders);
            let want: HashSet<BitSet> =
                all_subgroups(&grp).into_iter().filter(|s| s.count() * 2 == grp.size()).collect();
            let got: HashSet<BitSet> = index2_subgroups(&grp).iter().map(|s| s.members().clone()).collect();
            assert_eq!(got, want, "{orders:?}");
        }
    }

    #[test]
    fn prime_subgroups() {
        let c6 = g(&[6]);
        let po: Vec<usize> = prime_order_subgroups(&c6).iter().map(|s| s.order()).collect();
        assert_eq!(po, vec![3, 2]);
        let pi: Vec<usize> = prime_index_subgroups(&c6).iter().map(|s| s.index_in(&c6)).collect();
        assert_eq!(pi, vec![2, 3]);
        assert_eq!(prime_order_subgroups(&g(&[4])).len(), 1);
        assert_eq!(prime_order_subgroups(&g(&[2, 2])).len(), 3);
        for orders in [&[4, 2][..], &[2, 6], &[3, 3], &[2, 2, 2]] {
            let grp = g(orders);
            let all = all_subgroups(&grp);
            let n = grp.size();
            let want_po = all.iter().filter(|s| is_prime(s.count() as u64)).count();
            let want_pi = all.iter().filter(|s| is_prime((n / s.count()) as u64)).count();
            assert_eq!(prime_order_subgroups(&grp).len(), want_po);
            assert_eq!(prime_index_subgroups(&grp).len(), want_pi);
            assert!(want_po <= n && want_pi <= n);
        }
    }

    #[test]
    fn index2_orbits_of_exceptional_groups() {
        // C4 x C2^l (l = 1, 2, 3) and C4^2 x C2^l (l = 1): two orbits
        for orders in [&[4, 2][..], &[4, 2, 2], &[4, 2, 2, 2], &[4, 4, 2]] {
            let grp = g(orders);
            assert_eq!(index2_subgroup_orbits(&grp, 1 << 16).unwrap().len(), 2, "{orders:?}");
        }
        // C4^2: every index-2 subgroup is C4 x C2
        let grp = g(&[4, 4]);
        let subs = index2_subgroups(&grp);
        assert!(subs.iter().all(|s| s.iso_type(&grp).0 == vec![2, 4]));
    }
}
