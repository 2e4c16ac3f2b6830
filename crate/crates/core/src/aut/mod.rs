//! Automorphisms of finite abelian groups.
//!
//! `Aut(A)` is enumerated by backtracking over images of the standard
//! generators `e_1, ..., e_k` of the cyclic factors. An image tuple defines a
//! homomorphism iff `n_i·f(e_i) = 0`; it is an automorphism iff the images
//! generate a subgroup of order `∏ n_i`, which is checked factor by factor so
//! that dead branches are cut as early as possible.

mod exceptional;
mod subgroups;

pub use exceptional::{example1_automorphism, example2_automorphism, is_exceptional_pair, ExceptionalFamily};
pub use subgroups::{
    index2_characters, index2_subgroup_orbits, index2_subgroups, is_prime, prime_index_subgroups, prime_order_subgroups, Character,
};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, Subgroup};

/// Default cap on `|A|` for automorphism enumeration.
pub const DEFAULT_AUT_CAP: usize = 1 << 22;
/// Groups up to this size get an exhaustive homomorphism check.
pub const EXHAUSTIVE_CHECK_CAP: usize = 1 << 10;

/// An automorphism of `A` as a permutation of element indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupAutomorphism {
    image: Vec<u32>,
}

impl fmt::Debug for GroupAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupAutomorphism({:?})", self.image)
    }
}

impl GroupAutomorphism {
    pub fn identity(group: &AbelianGroup) -> Self {
        GroupAutomorphism { image: (0..group.size() as u32).collect() }
    }

    /// `ι: a ↦ -a`.
    pub fn inversion(group: &AbelianGroup) -> Self {
        GroupAutomorphism { image: group.neg_table().to_vec() }
    }

    /// The homomorphism sending the i-th standard generator to `images[i]`,
    /// provided it is well defined and bijective.
    pub fn from_basis_images(group: &AbelianGroup, images: &[usize]) -> Result<Self> {
        if images.len() != group.rank() {
            return Err(Error::BadParameter(format!(
                "expected {} generator images, got {}",
                group.rank(),
                images.len()
            )));
        }
        for (i, &x) in images.iter().enumerate() {
            if x >= group.size() {
                return Err(Error::SetOutOfRange(x));
            }
            if group.mul(group.orders()[i], x) != 0 {
                return Err(Error::BadParameter(format!(
                    "image of generator {i} has order not dividing {}",
                    group.orders()[i]
                )));
            }
        }
        let aut = GroupAutomorphism { image: extend_from_basis(group, images) };
        let mut seen = BitSet::new(group.size());
        for &y in &aut.image {
            seen.insert(y as usize);
        }
        if seen.count() != group.size() {
            return Err(Error::BadParameter("generator images do not define a bijection".into()));
        }
        Ok(aut)
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.image[a] as usize
    }

    pub fn image(&self) -> &[u32] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &GroupAutomorphism) -> GroupAutomorphism {
        GroupAutomorphism { image: self.image.iter().map(|&x| other.image[x as usize]).collect() }
    }

    pub fn inverse(&self) -> GroupAutomorphism {
        let mut inv = vec![0u32; self.image.len()];
        for (i, &x) in self.image.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        GroupAutomorphism { image: inv }
    }

    /// Order of the automorphism as a permutation.
    pub fn order(&self) -> u64 {
        let mut cur = self.clone();
        let mut k = 1;
        while !cur.is_identity() {
            cur = cur.then(self);
            k += 1;
        }
        k
    }

    pub fn map_set(&self, s: &BitSet) -> BitSet {
        s.map(&self.image)
    }

    pub fn fixes_set(&self, s: &BitSet) -> bool {
        s.iter().all(|a| s.contains(self.apply(a)))
    }

    /// Bijectivity plus `f(a+b) = f(a)+f(b)`, exhaustively for small groups and
    /// on the standard generators otherwise.
    pub fn verify(&self, group: &AbelianGroup) -> bool {
        let n = group.size();
        if self.image.len() != n {
            return false;
        }
        let mut seen = BitSet::new(n);
        for &y in &self.image {
            seen.insert(y as usize);
        }
        if seen.count() != n {
            return false;
        }
        if n <= EXHAUSTIVE_CHECK_CAP {
            (0..n).all(|a| (0..n).all(|b| self.apply(group.add(a, b)) == group.add(self.apply(a), self.apply(b))))
        } else {
            (0..group.rank()).all(|i| {
                let e = group.basis_element(i);
                (0..n).all(|a| self.apply(group.add(a, e)) == group.add(self.apply(a), self.apply(e)))
            })
        }
    }

    pub fn preserves_orders(&self, group: &AbelianGroup) -> bool {
        (0..group.size()).all(|a| group.element_order(a) == group.element_order(self.apply(a)))
    }
}

fn extend_from_basis(group: &AbelianGroup, images: &[usize]) -> Vec<u32> {
    let n = group.size();
    let k = group.rank();
    let mut image = vec![0u32; n];
    for a in 1..n {
        let i = (0..k).rev().find(|&i| group.coord(a, i) != 0).expect("nonzero element");
        let prev = a - group.basis_element(i);
        image[a] = group.add(image[prev] as usize, images[i]) as u32;
    }
    image
}

/// Stream over `Aut(A)`, each automorphism exactly once.
pub struct AutomorphismIter<'a> {
    group: &'a AbelianGroup,
    candidates: Vec<Vec<usize>>,
    cursor: Vec<usize>,
    // closure[l] = subgroup generated by the images chosen at levels < l
    closure: Vec<(BitSet, Vec<usize>)>,
    done: bool,
}

impl<'a> AutomorphismIter<'a> {
    fn new(group: &'a AbelianGroup) -> Self {
        let candidates: Vec<Vec<usize>> = group
            .orders()
            .iter()
            .map(|&n| (0..group.size()).filter(|&a| group.element_order(a) == n).collect())
            .collect();
        let mut root = BitSet::new(group.size());
        root.insert(0);
        AutomorphismIter {
            group,
            candidates,
            cursor: vec![0],
            closure: vec![(root, vec![0])],
            done: false,
        }
    }

    /// Try to extend level `l` with candidate `c`; returns the new closure if
    /// `<c>` meets the current closure trivially.
    fn extend(&self, l: usize, c: usize) -> Option<(BitSet, Vec<usize>)> {
        let (members, elems) = &self.closure[l];
        let n = self.group.orders()[l];
        let mut shift = c;
        for _ in 1..n {
            if members.contains(shift) {
                return None;
            }
            shift = self.group.add(shift, c);
        }
        let mut m = members.clone();
        let mut out = elems.clone();
        let mut shift = c;
        for _ in 1..n {
            for &h in elems {
                let x = self.group.add(h, shift);
                m.insert(x);
                out.push(x);
            }
            shift = self.group.add(shift, c);
        }
        Some((m, out))
    }
}

impl Iterator for AutomorphismIter<'_> {
    type Item = GroupAutomorphism;

    fn next(&mut self) -> Option<GroupAutomorphism> {
        let k = self.group.rank();
        while !self.done {
            let l = self.cursor.len() - 1;
            let idx = self.cursor[l];
            if idx >= self.candidates[l].len() {
                self.cursor.pop();
                self.closure.pop();
                if self.cursor.is_empty() {
                    self.done = true;
                    return None;
                }
                *self.cursor.last_mut().unwrap() += 1;
                continue;
            }
            let c = self.candidates[l][idx];
            match self.extend(l, c) {
                None => self.cursor[l] += 1,
                Some(next) => {
                    if l + 1 == k {
                        let images: Vec<usize> =
                            self.cursor.iter().enumerate().map(|(i, &j)| self.candidates[i][j]).collect();
                        self.cursor[l] += 1;
                        return Some(GroupAutomorphism { image: extend_from_basis(self.group, &images) });
                    }
                    self.closure.push(next);
                    self.cursor.push(0);
                }
            }
        }
        None
    }
}

/// All automorphisms of `A` as a stream.
pub fn enumerate_automorphisms(group: &AbelianGroup) -> Result<AutomorphismIter<'_>> {
    enumerate_automorphisms_capped(group, DEFAULT_AUT_CAP)
}

/// Refuses groups with more than `cap` automorphisms.
pub fn enumerate_automorphisms_capped(group: &AbelianGroup, cap: usize) -> Result<AutomorphismIter<'_>> {
    let order = aut_order(group);
    if order > BigUint::from(cap) {
        let size = order.to_usize().unwrap_or(usize::MAX);
        return Err(Error::CapExceeded { what: "automorphism enumeration", size, cap });
    }
    Ok(AutomorphismIter::new(group))
}

/// `|Aut(A)|` from the invariant factors, one prime at a time (Hillar and
/// Rhea's formula for abelian p-groups).
pub fn aut_order(group: &AbelianGroup) -> BigUint {
    let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &n in group.orders() {
        let mut n = n;
        let mut p = 2;
        while n > 1 {
            if p * p > n {
                p = n;
            }
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if e > 0 {
                by_prime.entry(p).or_default().push(e);
            }
            p += 1;
        }
    }
    let mut total = BigUint::one();
    for (p, mut es) in by_prime {
        es.sort_unstable();
        let n = es.len();
        let pb = BigUint::from(p);
        let pw = |e: usize| pb.pow(e as u32);
        for k in 0..n {
            let d = (k..n).rev().find(|&l| es[l] == es[k]).unwrap() + 1;
            let c = (0..=k).find(|&l| es[l] == es[k]).unwrap() + 1;
            total *= pw(d) - pw(k);
            total *= pw(es[k] as usize * (n - d));
            total *= pw((es[k] as usize - 1) * (n - c + 1));
        }
    }
    total
}

/// `{α ∈ Aut(A) : α(B) = B}`.
pub fn stabilizing_automorphisms(group: &AbelianGroup, b: &Subgroup) -> Result<Vec<GroupAutomorphism>> {
    stabilizing_automorphisms_capped(group, b, DEFAULT_AUT_CAP)
}

pub fn stabilizing_automorphisms_capped(
    group: &AbelianGroup,
    b: &Subgroup,
    cap: usize,
) -> Result<Vec<GroupAutomorphism>> {
    // an automorphism maps B onto B iff it maps B's generators into B
    Ok(enumerate_automorphisms_capped(group, cap)?
        .filter(|a| b.generators().iter().all(|&g| b.contains(a.apply(g))))
        .collect())
}

/// The pair `T₁ = {a : α(a) = a}`, `T₋₁ = {a : α(a) = -a}`.
#[derive(Debug, Clone)]
pub struct FixInvertDecomposition {
    pub fixed: Subgroup,
    pub inverted: Subgroup,
}

pub fn fix_invert_decomposition(group: &AbelianGroup, alpha: &GroupAutomorphism) -> FixInvertDecomposition {
    let n = group.size();
    let fixed = BitSet::from_indices(n, (0..n).filter(|&a| alpha.apply(a) == a));
    let inverted = BitSet::from_indices(n, (0..n).filter(|&a| alpha.apply(a) == group.neg(a)));
    FixInvertDecomposition {
        fixed: Subgroup::from_members(group, fixed),
        inverted: Subgroup::from_members(group, inverted),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(orders: &[u64]) -> AbelianGroup {
        AbelianGroup::new(orders).unwrap()
    }

    /// Independent oracle: every permutation-valued map determined by basis
    /// images in the whole group, kept iff it is a bijective homomorphism.
    fn brute_aut_count(group: &AbelianGroup) -> usize {
        let n = group.size();
        let k = group.rank();
        let mut count = 0;
        let total = n.pow(k as u32);
        for code in 0..total {
            let mut c = code;
            let images: Vec<usize> = (0..k)
                .map(|_| {
                    let x = c % n;
                    c /= n;
                    x
                })
                .collect();
            let mut map = vec![0usize; n];
            for (a, slot) in map.iter_mut().enumerate() {
                let coords = group.decode(a);
                let mut y = 0;
                for (i, &ci) in coords.iter().enumerate() {
                    y = group.add(y, group.mul(ci, images[i]));
                }
                *slot = y;
            }
            let hom = (0..n).all(|a| (0..n).all(|b| map[group.add(a, b)] == group.add(map[a], map[b])));
            let mut seen = vec![false; n];
            map.iter().for_each(|&y| seen[y] = true);
            if hom && seen.iter().all(|&s| s) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(enumerate_automorphisms(&g(&[6])).unwrap().count(), 2);
        let c2_3 = g(&[2, 2, 2]);
        assert_eq!(brute_aut_count(&c2_3), 168);
        assert_eq!(enumerate_automorphisms(&c2_3).unwrap().count(), 168);
        let c42 = g(&[4, 2]);
        assert_eq!(brute_aut_count(&c42), 8);
        assert_eq!(enumerate_automorphisms(&c42).unwrap().count(), 8);
        for orders in [&[2, 3][..], &[4, 4], &[3, 6], &[2, 4, 2]] {
            let grp = g(orders);
            assert_eq!(enumerate_automorphisms(&grp).unwrap().count(), brute_aut_count(&grp), "{orders:?}");
        }
    }

    #[test]
    fn order_formula_matches_enumeration() {
        for orders in [&[2][..], &[6], &[2, 2, 2, 2], &[4, 2], &[4, 4], &[8, 2, 2], &[3, 6], &[3, 3, 3], &[2, 4, 4], &[9, 3], &[12, 2]] {
            let grp = g(orders);
            let n = enumerate_automorphisms(&grp).unwrap().count();
            assert_eq!(aut_order(&grp), BigUint::from(n), "{orders:?}");
        }
        assert_eq!(aut_order(&g(&[2; 6])), BigUint::from(20_158_709_760u64));
    }

    #[test]
    fn enumerated_automorphisms_are_valid_and_distinct() {
        let grp = g(&[4, 2, 2]);
        let all: Vec<_> = enumerate_automorphisms(&grp).unwrap().collect();
        let distinct: std::collections::HashSet<_> = all.iter().cloned().collect();
        assert_eq!(distinct.len(), all.len());
        assert!(all.iter().all(|a| a.verify(&grp) && a.preserves_orders(&grp)));
    }

    #[test]
    fn cap_is_enforced() {
        let grp = g(&[2; 13]);
        assert!(matches!(enumerate_automorphisms(&grp), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn inversion() {
        let grp = g(&[2, 2, 2]);
        assert!(GroupAutomorphism::inversion(&grp).is_identity());
        let grp = g(&[4, 2]);
        let iota = GroupAutomorphism::inversion(&grp);
        assert_eq!(grp.element(iota.apply(grp.encode(&[1, 1]))).0, vec![3, 1]);
        assert_eq!(GroupAutomorphism::inversion(&g(&[6])).order(), 2);
    }

    #[test]
    fn stabilizers() {
        let grp = g(&[4, 2]);
        let a2 = grp.involution_subgroup();
        assert_eq!(stabilizing_automorphisms(&grp, &a2).unwrap().len(), 8);
        let grp = g(&[6]);
        let b = grp.generated_subgroup(&[2]);
        assert_eq!(stabilizing_automorphisms(&grp, &b).unwrap().len(), 2);
        let grp = g(&[2, 2]);
        let b = grp.generated_subgroup(&[grp.encode(&[1, 0])]);
        assert_eq!(stabilizing_automorphisms(&grp, &b).unwrap().len(), 2);
    }

    #[test]
    fn fix_invert() {
        let grp = g(&[4, 2]);
        let d = fix_invert_decomposition(&grp, &GroupAutomorphism::identity(&grp));
        assert_eq!(d.fixed.order(), 8);
        assert_eq!(d.inverted, grp.involution_subgroup());
        let d = fix_invert_decomposition(&grp, &GroupAutomorphism::inversion(&grp));
        assert_eq!(d.fixed, grp.involution_subgroup());
        assert_eq!(d.inverted.order(), 8);
    }
}
