//! Finite abelian groups given as products of cyclic factors.
//!
//! Elements are dense indices in `[0, |A|)` under a mixed-radix codec; the last
//! factor varies fastest, so index order is lexicographic order on residue
//! tuples and the identity is index 0.

mod parse;
pub mod smith;

use std::fmt;

use num_integer::Integer;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
pub use parse::parse_group_spec;

/// Default cap on the number of group elements.
pub const DEFAULT_GROUP_CAP: usize = 1 << 20;
/// Groups up to this size get a full addition table.
pub const ADD_TABLE_CAP: usize = 1 << 10;

/// An element of `A` as a tuple of residues, one per cyclic factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(pub Vec<u64>);

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Isomorphism type of a finite abelian group, as ascending invariant factors
/// `d_1 | d_2 | ... | d_r` (empty for the trivial group).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsoType(pub Vec<u64>);

impl IsoType {
    pub fn order(&self) -> u128 {
        self.0.iter().map(|&d| d as u128).product()
    }

    /// `C_{n_1} × ... × C_{n_k}` normalised from arbitrary cyclic factors.
    pub fn of_factors(orders: &[u64]) -> IsoType {
        let k = orders.len();
        let rows: Vec<Vec<i128>> = (0..k)
            .map(|i| (0..k).map(|j| if i == j { orders[i] as i128 } else { 0 }).collect())
            .collect();
        IsoType(smith::invariant_factors(&rows, k))
    }

    /// Elementary abelian 2-group of rank `r`.
    pub fn elementary2(r: usize) -> IsoType {
        IsoType(vec![2; r])
    }
}

impl fmt::Display for IsoType {
    /// Descending factors with repetition exponents, e.g. `C4xC2^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "C1");
        }
        let mut parts = Vec::new();
        let mut factors = self.0.clone();
        factors.reverse();
        let mut i = 0;
        while i < factors.len() {
            let mut j = i;
            while j < factors.len() && factors[j] == factors[i] {
                j += 1;
            }
            if j - i == 1 {
                parts.push(format!("C{}", factors[i]));
            } else {
                parts.push(format!("C{}^{}", factors[i], j - i));
            }
            i = j;
        }
        write!(f, "{}", parts.join("x"))
    }
}

/// A finite abelian group `C_{n_1} × ... × C_{n_k}`.
#[derive(Clone)]
pub struct AbelianGroup {
    orders: Vec<u64>,
    strides: Vec<usize>,
    size: usize,
    exponent: u64,
    neg: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

impl fmt::Debug for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbelianGroup({})", self.spec())
    }
}

impl PartialEq for AbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.orders == other.orders
    }
}
impl Eq for AbelianGroup {}

impl AbelianGroup {
    pub fn new(orders: &[u64]) -> Result<Self> {
        Self::with_cap(orders, DEFAULT_GROUP_CAP)
    }

    pub fn with_cap(orders: &[u64], cap: usize) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::EmptyOrders);
        }
        if let Some(&n) = orders.iter().find(|&&n| n < 2) {
            return Err(Error::OrderBelowTwo(n));
        }
        let mut size: u128 = 1;
        for &n in orders {
            size = size.saturating_mul(n as u128);
        }
        if size > cap as u128 {
            return Err(Error::SizeCapExceeded { size, cap });
        }
        let size = size as usize;
        let k = orders.len();
        let mut strides = vec![1usize; k];
        for i in (0..k.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * orders[i + 1] as usize;
        }
        let exponent = orders.iter().fold(1u64, |acc, &n| acc.lcm(&n));
        let mut g = AbelianGroup {
            orders: orders.to_vec(),
            strides,
            size,
            exponent,
            neg: Vec::new(),
            add_table: None,
        };
        g.neg = (0..size).map(|a| g.neg_slow(a) as u32).collect();
        if size <= ADD_TABLE_CAP {
            let mut t = vec![0u32; size * size];
            for a in 0..size {
                for b in 0..size {
                    t[a * size + b] = g.add_slow(a, b) as u32;
                }
            }
            g.add_table = Some(t);
        }
        Ok(g)
    }

    /// `C2^n`.
    pub fn elementary2(n: usize) -> Result<Self> {
        Self::new(&vec![2; n])
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_two_group(&self) -> bool {
        self.size.is_power_of_two()
    }

    /// Spec string in the CLI grammar, e.g. `C4xC2^2`, following the given factor order.
    pub fn spec(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.orders.len() {
            let mut j = i;
            while j < self.orders.len() && self.orders[j] == self.orders[i] {
                j += 1;
            }
            if j - i == 1 {
                parts.push(format!("C{}", self.orders[i]));
            } else {
                parts.push(format!("C{}^{}", self.orders[i], j - i));
            }
            i = j;
        }
        parts.join("x")
    }

    pub fn iso_type(&self) -> IsoType {
        IsoType::of_factors(&self.orders)
    }

    pub fn encode(&self, coords: &[u64]) -> usize {
        debug_assert_eq!(coords.len(), self.rank());
        coords
            .iter()
            .zip(&self.orders)
            .zip(&self.strides)
            .map(|((&c, &n), &s)| (c % n) as usize * s)
            .sum()
    }

    pub fn decode(&self, a: usize) -> Vec<u64> {
        self.orders
            .iter()
            .zip(&self.strides)
            .map(|(&n, &s)| ((a / s) as u64) % n)
            .collect()
    }

    pub fn element(&self, a: usize) -> Element {
        Element(self.decode(a))
    }

    /// Index of an element given by coordinates, validated against the factor orders.
    pub fn index_of(&self, e: &Element) -> Result<usize> {
        if e.0.len() != self.rank() {
            return Err(Error::BadParameter(format!(
                "element {e} has {} coordinates, group has {}",
                e.0.len(),
                self.rank()
            )));
        }
        Ok(self.encode(&e.0))
    }

    #[inline]
    pub fn coord(&self, a: usize, i: usize) -> u64 {
        ((a / self.strides[i]) as u64) % self.orders[i]
    }

    fn add_slow(&self, a: usize, b: usize) -> usize {
        let mut out = 0;
        for i in 0..self.rank() {
            let n = self.orders[i];
            out += (((self.coord(a, i) + self.coord(b, i)) % n) as usize) * self.strides[i];
        }
        out
    }

    fn neg_slow(&self, a: usize) -> usize {
        let mut out = 0;
        for i in 0..self.rank() {
            let n = self.orders[i];
            out += (((n - self.coord(a, i)) % n) as usize) * self.strides[i];
        }
        out
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        match &self.add_table {
            Some(t) => t[a * self.size + b] as usize,
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// `m·a`.
    pub fn mul(&self, m: u64, a: usize) -> usize {
        let mut out = 0;
        for i in 0..self.rank() {
            let n = self.orders[i];
            out += (((self.coord(a, i) * (m % n)) % n) as usize) * self.strides[i];
        }
        out
    }

    /// Inverse table as a permutation of element indices.
    pub fn neg_table(&self) -> &[u32] {
        &self.neg
    }

    /// Standard generator `e_i` of the i-th cyclic factor.
    pub fn basis_element(&self, i: usize) -> usize {
        self.strides[i]
    }

    /// Least `m ≥ 1` with `m·a = 0`.
    pub fn element_order(&self, a: usize) -> u64 {
        (0..self.rank()).fold(1u64, |acc, i| {
            let n = self.orders[i];
            acc.lcm(&(n / n.gcd(&self.coord(a, i))))
        })
    }

    pub fn full_set(&self) -> BitSet {
        BitSet::full(self.size)
    }

    /// `A₂ = {a : 2a = 0}`.
    pub fn involution_subgroup(&self) -> Subgroup {
        let bits = BitSet::from_indices(self.size, (0..self.size).filter(|&a| self.add(a, a) == 0));
        Subgroup::from_members(self, bits)
    }

    /// Smallest subgroup containing `gens`.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Subgroup {
        let mut members = BitSet::new(self.size);
        members.insert(0);
        let mut elems = vec![0usize];
        let mut kept = Vec::new();
        for &g in gens {
            if members.contains(g) {
                continue;
            }
            kept.push(g);
            self.extend_closure(&mut members, &mut elems, g);
        }
        Subgroup { members, generators: kept, order: elems.len() }
    }

    /// Extend the subgroup `members` (listed in `elems`) by `g`: the result is
    /// the union of cosets `k·g + H` for `k = 0, 1, ...` until it cycles back.
    fn extend_closure(&self, members: &mut BitSet, elems: &mut Vec<usize>, g: usize) {
        let base = elems.clone();
        let mut shift = g;
        while !members.contains(shift) {
            for &h in &base {
                let x = self.add(h, shift);
                members.insert(x);
                elems.push(x);
            }
            shift = self.add(shift, g);
        }
    }

    /// True iff `x` is a union of full `H`-cosets.
    pub fn is_union_of_cosets(&self, h: &Subgroup, x: &BitSet) -> bool {
        let hs: Vec<usize> = h.members.iter().collect();
        x.iter().all(|a| hs.iter().all(|&k| x.contains(self.add(a, k))))
    }

    /// `-X`.
    pub fn negate_set(&self, x: &BitSet) -> BitSet {
        x.map(&self.neg)
    }

    pub fn is_inverse_closed(&self, x: &BitSet) -> bool {
        x.iter().all(|a| x.contains(self.neg(a)))
    }

    pub fn format_set(&self, x: &BitSet) -> Vec<Element> {
        x.iter().map(|a| self.element(a)).collect()
    }
}

/// A subgroup held as a membership bitset with a generating set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    members: BitSet,
    generators: Vec<usize>,
    order: usize,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order={}, gens={:?})", self.order, self.generators)
    }
}

impl Subgroup {
    /// Wrap a member set that is already known to be a subgroup; a small
    /// generating set is extracted greedily in index order.
    pub fn from_members(group: &AbelianGroup, members: BitSet) -> Subgroup {
        let mut closure = BitSet::new(group.size());
        closure.insert(0);
        let mut elems = vec![0usize];
        let mut gens = Vec::new();
        for a in members.iter() {
            if !closure.contains(a) {
                gens.push(a);
                group.extend_closure(&mut closure, &mut elems, a);
            }
        }
        debug_assert_eq!(closure, members, "member set is not a subgroup");
        Subgroup { order: members.count(), members, generators: gens }
    }

    pub fn trivial(group: &AbelianGroup) -> Subgroup {
        group.generated_subgroup(&[])
    }

    pub fn whole(group: &AbelianGroup) -> Subgroup {
        Subgroup::from_members(group, group.full_set())
    }

    pub fn members(&self) -> &BitSet {
        &self.members
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.contains(a)
    }

    pub fn index_in(&self, group: &AbelianGroup) -> usize {
        group.size() / self.order
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }

    /// Closure under addition and negation, and presence of the identity,
    /// checked exhaustively.
    pub fn verify_closed(&self, group: &AbelianGroup) -> bool {
        if !self.members.contains(0) {
            return false;
        }
        let elems: Vec<usize> = self.members.iter().collect();
        elems.iter().all(|&a| {
            self.members.contains(group.neg(a))
                && elems.iter().all(|&b| self.members.contains(group.add(a, b)))
        })
    }

    /// Isomorphism type via Smith normal form of the Schreier relation lattice
    /// of the generators.
    pub fn iso_type(&self, group: &AbelianGroup) -> IsoType {
        let m = self.generators.len();
        if m == 0 {
            return IsoType(Vec::new());
        }
        let d = group.exponent() as i128;
        let mut word: Vec<Option<Vec<i128>>> = vec![None; group.size()];
        let mut lattice = smith::ModLattice::new(m, d as u64);
        word[0] = Some(vec![0; m]);
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(h) = queue.pop_front() {
            let wh = word[h].clone().expect("visited");
            for (j, &g) in self.generators.iter().enumerate() {
                let next = group.add(h, g);
                let mut w = wh.clone();
                w[j] = (w[j] + 1) % d;
                match &word[next] {
                    None => {
                        word[next] = Some(w);
                        queue.push_back(next);
                    }
                    Some(wn) => {
                        let rel: Vec<i128> = w.iter().zip(wn).map(|(x, y)| x - y).collect();
                        if rel.iter().any(|&x| x.rem_euclid(d) != 0) {
                            lattice.insert(rel);
                        }
                    }
                }
            }
        }
        IsoType(lattice.invariant_factors())
    }

    /// Describe the subgroup by its generators as element tuples.
    pub fn generator_elements(&self, group: &AbelianGroup) -> Vec<Element> {
        self.generators.iter().map(|&g| group.element(g)).collect()
    }

    /// Generators in the command-line syntax, e.g. `2,0;0,1`; `0` for the
    /// trivial subgroup.
    pub fn spec(&self, group: &AbelianGroup) -> String {
        if self.generators.is_empty() {
            return vec!["0"; group.rank()].join(",");
        }
        self.generators
            .iter()
            .map(|&g| group.decode(g).iter().map(u64::to_string).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join(";")
    }
}
