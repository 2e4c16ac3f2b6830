//! The partition of connection sets `S ⊆ A∖B` into the classes A1–A4 (digraphs)
//! or A1–A5 (graphs), with a witness for membership in each non-final class.
//!
//! Classes overlap; a verdict is the first class that matches in the fixed
//! order A1, A2, A3, A4, and the witness is the first one met in the
//! enumeration order of the underlying candidates. `GOOD` is the final class.

use std::collections::HashSet;

use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::aut::{
    is_exceptional_pair, prime_index_subgroups, prime_order_subgroups, stabilizing_automorphisms_capped,
    GroupAutomorphism,
};
use crate::bitset::BitSet;
use crate::cayley::{build_cayley, ConnectionSet, Mode};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, Subgroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    A1,
    A2,
    A3,
    A4,
    Good,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::A1 => "A1",
            Verdict::A2 => "A2",
            Verdict::A3 => "A3",
            Verdict::A4 => "A4",
            Verdict::Good => "GOOD",
        })
    }
}

/// The first factor `S′` of an A4 product `S = S′ × S″`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SPrime {
    Empty,
    Identity,
    Whole,
    NonIdentity,
}

impl SPrime {
    pub fn members(self, group: &AbelianGroup, c: &Subgroup) -> BitSet {
        let n = group.size();
        match self {
            SPrime::Empty => BitSet::new(n),
            SPrime::Identity => BitSet::from_indices(n, [0]),
            SPrime::Whole => c.members().clone(),
            SPrime::NonIdentity => {
                let mut m = c.members().clone();
                m.remove(0);
                m
            }
        }
    }

    fn name(self) -> &'static str {
        match self {
            SPrime::Empty => "empty",
            SPrime::Identity => "identity",
            SPrime::Whole => "C",
            SPrime::NonIdentity => "C minus identity",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A proper subgroup containing `S`; the one reported is `⟨S⟩`.
    A1 { c: Subgroup },
    A2 { alpha: GroupAutomorphism },
    A3 { h: Subgroup, k: Subgroup },
    A4 { c: Subgroup, z: Subgroup, s_prime: SPrime, s_second: BitSet },
    Good,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub mode: Mode,
    pub verdict: Verdict,
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    pub cayley_index: BigUint,
    /// False only for a `GOOD` set whose index differs from the least possible.
    pub consistent: bool,
}

/// `B` must be a subgroup of index 2 in `A`.
pub fn check_index2(group: &AbelianGroup, b: &Subgroup) -> Result<()> {
    if b.members().len() != group.size() {
        return Err(Error::BadSubgroup("subgroup belongs to a different group".into()));
    }
    if b.order() * 2 != group.size() {
        return Err(Error::BadSubgroup(format!("index {} instead of 2", group.size() / b.order().max(1))));
    }
    Ok(())
}

/// Cyclic `C` of order at least 4 and elementary abelian `Z` with `A = C × Z`,
/// by cyclic subgroups in order of least generator, then complements grown
/// one involution at a time.
pub fn cyclic_by_elementary_decompositions(group: &AbelianGroup) -> Vec<(Subgroup, Subgroup)> {
    let n = group.size();
    let involutions: Vec<usize> = (1..n).filter(|&a| group.add(a, a) == 0).collect();
    let a2_order = involutions.len() + 1;
    let mut cyclic_seen = HashSet::new();
    let mut out = Vec::new();
    for a in 1..n {
        let o = group.element_order(a) as usize;
        if o < 4 || !n.is_multiple_of(o) || !(n / o).is_power_of_two() || n / o > a2_order {
            continue;
        }
        let c = group.generated_subgroup(&[a]);
        if !cyclic_seen.insert(c.members().clone()) {
            continue;
        }
        let target = n / o;
        // complements Z with Z ∩ C = 1, grown layer by layer
        let mut layer: Vec<Subgroup> = vec![Subgroup::trivial(group)];
        let mut seen: HashSet<BitSet> = HashSet::new();
        while layer.first().is_some_and(|z| z.order() < target) {
            let mut next = Vec::new();
            for z in &layer {
                let mut gens = z.generators().to_vec();
                for &t in &involutions {
                    if z.contains(t) {
                        continue;
                    }
                    gens.push(t);
                    let bigger = group.generated_subgroup(&gens);
                    gens.pop();
                    if bigger.members().intersection_count(c.members()) == 1 && seen.insert(bigger.members().clone()) {
                        next.push(bigger);
                    }
                }
            }
            layer = next;
        }
        for z in layer {
            if z.order() == target {
                out.push((c.clone(), z));
            }
        }
    }
    out
}

/// Precomputed candidates for classifying many sets against one `(A, B)`.
pub struct Classifier<'g> {
    group: &'g AbelianGroup,
    b: Subgroup,
    mode: Mode,
    /// Graphs on elementary abelian 2-groups are digraphs classified as such.
    effective: Mode,
    autos: Vec<GroupAutomorphism>,
    hk: Vec<(Subgroup, Subgroup)>,
    cz: Vec<(Subgroup, Subgroup, Vec<(usize, usize)>)>,
}

impl<'g> Classifier<'g> {
    pub fn new(group: &'g AbelianGroup, b: &Subgroup, mode: Mode, caps: &Caps) -> Result<Self> {
        check_index2(group, b)?;
        let exp2 = group.exponent() == 2;
        if mode == Mode::Undirected && !exp2 && is_exceptional_pair(group, b).is_some() {
            return Err(Error::ExceptionalPair);
        }
        let effective = if exp2 { Mode::Directed } else { mode };
        let iota = GroupAutomorphism::inversion(group);
        let autos: Vec<GroupAutomorphism> = stabilizing_automorphisms_capped(group, b, caps.aut)?
            .into_iter()
            .filter(|a| !a.is_identity() && (effective == Mode::Directed || *a != iota))
            .collect();
        let skip_a3 = effective == Mode::Undirected && group.is_two_group();
        let hk = if skip_a3 {
            Vec::new()
        } else {
            let ks = prime_index_subgroups(group);
            prime_order_subgroups(group)
                .into_iter()
                .filter(|h| h.members().is_subset(b.members()))
                .flat_map(|h| {
                    ks.iter()
                        .filter(|k| h.members().is_subset(k.members()))
                        .map(|k| (h.clone(), k.clone()))
                        .collect::<Vec<_>>()
                })
                .collect()
        };
        let cz = if effective == Mode::Undirected {
            cyclic_by_elementary_decompositions(group)
                .into_iter()
                .map(|(c, z)| {
                    let mut split = vec![(0, 0); group.size()];
                    for x in c.members().iter() {
                        for y in z.members().iter() {
                            split[group.add(x, y)] = (x, y);
                        }
                    }
                    (c, z, split)
                })
                .collect()
        } else {
            Vec::new()
        };
        Ok(Classifier { group, b: b.clone(), mode, effective, autos, hk, cz })
    }

    pub fn group(&self) -> &'g AbelianGroup {
        self.group
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.b
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Automorphisms searched for A2.
    pub fn automorphisms(&self) -> &[GroupAutomorphism] {
        &self.autos
    }

    /// `(H, K)` pairs searched for A3.
    pub fn hk_pairs(&self) -> &[(Subgroup, Subgroup)] {
        &self.hk
    }

    /// `(C, Z)` decompositions searched for A4.
    pub fn decompositions(&self) -> impl Iterator<Item = (&Subgroup, &Subgroup)> {
        self.cz.iter().map(|(c, z, _)| (c, z))
    }

    fn admit(&self, s: &ConnectionSet) -> Result<()> {
        if s.bits().len() != self.group.size() {
            return Err(Error::SetOutOfRange(s.bits().len()));
        }
        if !s.avoids(&self.b) {
            return Err(Error::SetNotAvoidingB);
        }
        if self.mode == Mode::Undirected && !s.is_inverse_closed() {
            return Err(Error::NotInverseClosed);
        }
        Ok(())
    }

    fn a1(&self, s: &ConnectionSet) -> Option<Witness> {
        let gens: Vec<usize> = s.bits().iter().collect();
        let c = self.group.generated_subgroup(&gens);
        (c.order() < self.group.size()).then_some(Witness::A1 { c })
    }

    fn a2(&self, s: &ConnectionSet) -> Option<Witness> {
        self.autos.iter().find(|a| a.fixes_set(s.bits())).map(|a| Witness::A2 { alpha: a.clone() })
    }

    fn a3(&self, s: &ConnectionSet) -> Option<Witness> {
        self.hk
            .iter()
            .find(|(h, k)| self.group.is_union_of_cosets(h, &s.bits().difference(k.members())))
            .map(|(h, k)| Witness::A3 { h: h.clone(), k: k.clone() })
    }

    fn a4(&self, s: &ConnectionSet) -> Option<Witness> {
        self.cz.iter().find_map(|(c, z, split)| product_split(self.group, c, z, split, s.bits()))
    }

    fn matches(&self, s: &ConnectionSet, v: Verdict) -> Option<Witness> {
        match v {
            Verdict::A1 => self.a1(s),
            Verdict::A2 => self.a2(s),
            Verdict::A3 => self.a3(s),
            Verdict::A4 if self.effective == Mode::Undirected => self.a4(s),
            Verdict::A4 | Verdict::Good => None,
        }
    }

    pub fn classify(&self, s: &ConnectionSet) -> Result<Classification> {
        self.admit(s)?;
        for v in [Verdict::A1, Verdict::A2, Verdict::A3, Verdict::A4] {
            if let Some(witness) = self.matches(s, v) {
                return Ok(Classification { mode: self.mode, verdict: v, witness });
            }
        }
        Ok(Classification { mode: self.mode, verdict: Verdict::Good, witness: Witness::Good })
    }

    /// Every class containing `S`, each with its first witness; `[GOOD]` when none.
    pub fn classify_all(&self, s: &ConnectionSet) -> Result<Vec<Classification>> {
        self.admit(s)?;
        let mut out: Vec<Classification> = [Verdict::A1, Verdict::A2, Verdict::A3, Verdict::A4]
            .into_iter()
            .filter_map(|v| self.matches(s, v).map(|witness| Classification { mode: self.mode, verdict: v, witness }))
            .collect();
        if out.is_empty() {
            out.push(Classification { mode: self.mode, verdict: Verdict::Good, witness: Witness::Good });
        }
        Ok(out)
    }

    pub fn a4_witness(&self, s: &ConnectionSet) -> Option<Witness> {
        self.a4(s)
    }
}

/// `S = S′ × S″` over the decomposition `A = C × Z`, if it is one.
fn product_split(
    group: &AbelianGroup,
    c: &Subgroup,
    z: &Subgroup,
    split: &[(usize, usize)],
    s: &BitSet,
) -> Option<Witness> {
    let n = group.size();
    let mut first = BitSet::new(n);
    let mut second = BitSet::new(n);
    for a in s.iter() {
        let (x, y) = split[a];
        first.insert(x);
        second.insert(y);
    }
    if first.count() * second.count() != s.count() {
        return None;
    }
    let s_prime = [SPrime::Empty, SPrime::Identity, SPrime::Whole, SPrime::NonIdentity]
        .into_iter()
        .find(|sp| sp.members(group, c) == first)?;
    Some(Witness::A4 { c: c.clone(), z: z.clone(), s_prime, s_second: second })
}

pub fn classify_directed(group: &AbelianGroup, b: &Subgroup, s: &ConnectionSet) -> Result<Classification> {
    Classifier::new(group, b, Mode::Directed, &Caps::default())?.classify(s)
}

pub fn classify_undirected(group: &AbelianGroup, b: &Subgroup, s: &ConnectionSet) -> Result<Classification> {
    Classifier::new(group, b, Mode::Undirected, &Caps::default())?.classify(s)
}

/// Some `(C, Z, S′, S″)` with `A = C × Z` and `S = S′ × S″`.
pub fn a4_witness_search(group: &AbelianGroup, s: &ConnectionSet) -> Result<Option<Witness>> {
    if !s.is_inverse_closed() {
        return Err(Error::NotInverseClosed);
    }
    Ok(cyclic_by_elementary_decompositions(group).into_iter().find_map(|(c, z)| {
        let mut split = vec![(0, 0); group.size()];
        for x in c.members().iter() {
            for y in z.members().iter() {
                split[group.add(x, y)] = (x, y);
            }
        }
        product_split(group, &c, &z, &split, s.bits())
    }))
}

impl Classification {
    /// Re-check the witness from scratch.
    pub fn verify(&self, group: &AbelianGroup, b: &Subgroup, s: &ConnectionSet) -> bool {
        let n = group.size();
        let bits = s.bits();
        match (&self.verdict, &self.witness) {
            (Verdict::A1, Witness::A1 { c }) => c.verify_closed(group) && c.order() < n && bits.is_subset(c.members()),
            (Verdict::A2, Witness::A2 { alpha }) => {
                let iota = GroupAutomorphism::inversion(group);
                let excluded = alpha.is_identity() || (self.mode == Mode::Undirected && group.exponent() > 2 && *alpha == iota);
                alpha.verify(group) && !excluded && alpha.fixes_set(bits) && alpha.fixes_set(b.members())
            }
            (Verdict::A3, Witness::A3 { h, k }) => {
                let (ho, ki) = (h.order() as u64, k.index_in(group) as u64);
                h.verify_closed(group)
                    && k.verify_closed(group)
                    && crate::aut::is_prime(ho)
                    && crate::aut::is_prime(ki)
                    && h.members().is_subset(k.members())
                    && h.members().is_subset(b.members())
                    && group.is_union_of_cosets(h, &bits.difference(k.members()))
            }
            (Verdict::A4, Witness::A4 { c, z, s_prime, s_second }) => {
                let cyclic = c.order() >= 4 && (0..n).any(|a| c.contains(a) && group.element_order(a) as usize == c.order());
                let elementary = z.members().iter().all(|a| group.add(a, a) == 0);
                let direct = c.members().intersection_count(z.members()) == 1 && c.order() * z.order() == n;
                let first = s_prime.members(group, c);
                let mut product = BitSet::new(n);
                for x in first.iter() {
                    for y in s_second.iter() {
                        product.insert(group.add(x, y));
                    }
                }
                c.verify_closed(group)
                    && z.verify_closed(group)
                    && cyclic
                    && elementary
                    && direct
                    && s_second.is_subset(z.members())
                    && product == *bits
            }
            (Verdict::Good, Witness::Good) => true,
            _ => false,
        }
    }

    /// The stabilizer search run on `Cay(A, S)`, compared with the verdict.
    pub fn cross_check(&self, group: &AbelianGroup, s: &ConnectionSet, caps: &Caps) -> Result<CrossCheck> {
        let report = build_cayley(group, s).aut_report(caps)?;
        let target = BigUint::from(self.mode.target_index(group));
        let consistent = self.verdict != Verdict::Good || report.cayley_index == target;
        Ok(CrossCheck { cayley_index: report.cayley_index, consistent })
    }

    pub fn to_json(&self, group: &AbelianGroup, cross: Option<&CrossCheck>) -> Value {
        let sub = |h: &Subgroup| {
            json!({
                "order": h.order(),
                "generators": h.generator_elements(group).iter().map(ToString::to_string).collect::<Vec<_>>(),
            })
        };
        let witness = match &self.witness {
            Witness::A1 { c } => json!({"type": "subgroup", "C": sub(c)}),
            Witness::A2 { alpha } => json!({
                "type": "automorphism",
                "order": alpha.order(),
                "basis_images": (0..group.rank())
                    .map(|i| group.element(alpha.apply(group.basis_element(i))).to_string())
                    .collect::<Vec<_>>(),
            }),
            Witness::A3 { h, k } => json!({"type": "pair", "H": sub(h), "K": sub(k)}),
            Witness::A4 { c, z, s_prime, s_second } => json!({
                "type": "product",
                "C": sub(c),
                "Z": sub(z),
                "S_prime": s_prime.name(),
                "S_second": group.format_set(s_second).iter().map(ToString::to_string).collect::<Vec<_>>(),
            }),
            Witness::Good => Value::Null,
        };
        let mut v = json!({"mode": self.mode, "verdict": self.verdict.to_string(), "witness": witness});
        if let Some(cc) = cross {
            v["cross_check"] = json!({"cayley_index": cc.cayley_index.to_string(), "consistent": cc.consistent});
        }
        v
    }
}
