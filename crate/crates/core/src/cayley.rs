//! Cayley digraphs `Cay(A, S)` on abelian groups and their automorphism reports.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::aut::GroupAutomorphism;
use crate::bitset::BitSet;
use crate::config::Caps;
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, Element, Subgroup};
use crate::search::{canonical_form, vertex_stabilizer, CanonicalForm, SearchLimits};

/// Directed connection sets are arbitrary subsets of `A∖B`; undirected ones
/// must also be inverse-closed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Directed,
    Undirected,
}

impl Mode {
    /// The least index a connection set can have in this mode: 1 for
    /// digraphs, and for graphs 1 or 2 depending on whether inversion is trivial.
    pub fn target_index(self, group: &AbelianGroup) -> u64 {
        match self {
            Mode::Directed => 1,
            Mode::Undirected => graph_index_target(group),
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "directed" | "d" => Ok(Mode::Directed),
            "undirected" | "u" | "graph" => Ok(Mode::Undirected),
            _ => Err(Error::BadParameter(format!("unknown mode {s:?}"))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Directed => "directed",
            Mode::Undirected => "undirected",
        })
    }
}

/// `c = 1` for exponent-2 groups, where inversion is the identity, else 2.
pub fn graph_index_target(group: &AbelianGroup) -> u64 {
    if group.exponent() == 2 {
        1
    } else {
        2
    }
}

/// A connection set `S ⊆ A` as a bitset over element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConnectionSet {
    bits: BitSet,
    inverse_closed: bool,
}

impl ConnectionSet {
    pub fn new(group: &AbelianGroup, bits: BitSet) -> Result<Self> {
        if bits.len() != group.size() {
            return Err(Error::SetOutOfRange(bits.len()));
        }
        let inverse_closed = group.is_inverse_closed(&bits);
        Ok(ConnectionSet { bits, inverse_closed })
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(group: &AbelianGroup, elems: I) -> Result<Self> {
        let mut bits = BitSet::new(group.size());
        for a in elems {
            if a >= group.size() {
                return Err(Error::SetOutOfRange(a));
            }
            bits.insert(a);
        }
        Self::new(group, bits)
    }

    pub fn empty(group: &AbelianGroup) -> Self {
        ConnectionSet { bits: BitSet::new(group.size()), inverse_closed: true }
    }

    /// `A∖B`, the largest admissible set.
    pub fn complement_of(group: &AbelianGroup, b: &Subgroup) -> Self {
        Self::new(group, b.members().complement()).expect("sized to the group")
    }

    pub fn bits(&self) -> &BitSet {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.bits.contains(a)
    }

    pub fn is_inverse_closed(&self) -> bool {
        self.inverse_closed
    }

    /// `S ∩ B = ∅`.
    pub fn avoids(&self, b: &Subgroup) -> bool {
        self.bits.is_disjoint(b.members())
    }

    pub fn elements(&self, group: &AbelianGroup) -> Vec<Element> {
        group.format_set(&self.bits)
    }

    pub fn image(&self, alpha: &GroupAutomorphism) -> ConnectionSet {
        ConnectionSet { bits: alpha.map_set(&self.bits), inverse_closed: self.inverse_closed }
    }
}

/// `|Aut(Γ)_0|`, `|Aut(Γ)|` and the Cayley index, with stabilizer generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutReport {
    pub stabilizer_order: BigUint,
    pub full_order: BigUint,
    pub cayley_index: BigUint,
    pub generators: Vec<Vec<u32>>,
}

/// `Cay(A, S)`: arcs `(g, h)` with `g - h ∈ S`.
#[derive(Clone, Debug)]
pub struct CayleyDigraph<'g> {
    group: &'g AbelianGroup,
    conn: ConnectionSet,
    graph: Digraph,
}

pub fn build_cayley<'g>(group: &'g AbelianGroup, conn: &ConnectionSet) -> CayleyDigraph<'g> {
    let elems: Vec<usize> = conn.bits.iter().collect();
    let n = group.size();
    let graph = Digraph::from_arcs(n, (0..n).flat_map(|g| elems.iter().map(move |&s| (g, group.sub(g, s)))));
    CayleyDigraph { group, conn: conn.clone(), graph }
}

impl<'g> CayleyDigraph<'g> {
    pub fn group(&self) -> &'g AbelianGroup {
        self.group
    }

    pub fn connection_set(&self) -> &ConnectionSet {
        &self.conn
    }

    pub fn digraph(&self) -> &Digraph {
        &self.graph
    }

    pub fn is_graph(&self) -> bool {
        self.conn.inverse_closed
    }

    /// `⟨S⟩ = A`.
    pub fn is_connected(&self) -> bool {
        let gens: Vec<usize> = self.conn.bits.iter().collect();
        self.group.generated_subgroup(&gens).order() == self.group.size()
    }

    /// Every arc joins `B` to `A∖B`.
    pub fn bipartition_respected(&self, b: &Subgroup) -> bool {
        self.conn.avoids(b)
    }

    /// The vertex permutation `g ↦ g + a`.
    pub fn right_translation(&self, a: usize) -> Vec<u32> {
        (0..self.group.size()).map(|g| self.group.add(g, a) as u32).collect()
    }

    fn check_cap(&self, cap: usize, what: &'static str) -> Result<()> {
        let n = self.group.size();
        if n > cap {
            return Err(Error::CapExceeded { what, size: n, cap });
        }
        Ok(())
    }

    pub fn aut_report(&self, caps: &Caps) -> Result<AutReport> {
        self.check_cap(caps.search, "stabilizer search")?;
        let limits = SearchLimits { max_order: None, deadline: caps.deadline() };
        let st = vertex_stabilizer(&self.graph, 0, &limits)?;
        Ok(AutReport {
            full_order: &st.order * self.group.size(),
            cayley_index: st.order.clone(),
            stabilizer_order: st.order,
            generators: st.generators,
        })
    }

    /// The Cayley index if it is at most `bound`, else `None`.
    pub fn index_within(&self, bound: u64, caps: &Caps) -> Result<Option<u64>> {
        self.check_cap(caps.search, "stabilizer search")?;
        let limits = SearchLimits { max_order: Some(BigUint::from(bound)), deadline: caps.deadline() };
        let st = vertex_stabilizer(&self.graph, 0, &limits)?;
        Ok(if st.exceeded { None } else { st.order.to_u64() })
    }

    pub fn canonical_form(&self, caps: &Caps) -> Result<CanonicalForm> {
        self.check_cap(caps.canon, "canonical form")?;
        Ok(canonical_form(&self.graph))
    }
}

/// `|Aut(Cay(A, S)) : A|`.
pub fn cayley_index(group: &AbelianGroup, conn: &ConnectionSet) -> Result<BigUint> {
    Ok(build_cayley(group, conn).aut_report(&Caps::default())?.cayley_index)
}

pub fn is_drr(group: &AbelianGroup, conn: &ConnectionSet) -> Result<bool> {
    Ok(build_cayley(group, conn).index_within(1, &Caps::default())? == Some(1))
}

/// Whether the Cayley graph has the least index a Cayley graph on `A` can have.
pub fn is_minimal_graph_index(group: &AbelianGroup, conn: &ConnectionSet) -> Result<bool> {
    if !conn.is_inverse_closed() {
        return Err(Error::NotInverseClosed);
    }
    let c = graph_index_target(group);
    Ok(build_cayley(group, conn).index_within(c, &Caps::default())? == Some(c))
}
