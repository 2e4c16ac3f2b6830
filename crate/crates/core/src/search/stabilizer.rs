//! Order of the stabilizer of a vertex in the automorphism group of a digraph.
//!
//! One path of the individualization-refinement tree is followed down to a
//! discrete partition. Then, from the deepest level up, every vertex of the
//! level's target cell that is not yet known to share an orbit with the chosen
//! vertex is tested by searching its subtree for a leaf that induces an
//! automorphism. The stabilizer order is the product of the orbit lengths.

use std::time::Instant;

use num_bigint::BigUint;
use num_traits::One;

use crate::digraph::Digraph;
use crate::error::{Error, Result};

use super::orbits::Orbits;
use super::partition::Partition;

#[derive(Clone, Debug, Default)]
pub struct SearchLimits {
    /// Stop once the order is known to exceed this value.
    pub max_order: Option<BigUint>,
    pub deadline: Option<Instant>,
}

impl SearchLimits {
    pub fn exceeding(bound: u64) -> Self {
        SearchLimits { max_order: Some(BigUint::from(bound)), deadline: None }
    }
}

#[derive(Clone, Debug)]
pub struct Stabilizer {
    /// The exact order, or a lower bound above `max_order` when `exceeded`.
    pub order: BigUint,
    /// Generators as vertex permutations, in the order found.
    pub generators: Vec<Vec<u32>>,
    pub exceeded: bool,
}

struct Level {
    part: Partition,
    target: usize,
    cell: Vec<u32>,
    chosen: u32,
    trace: u64,
}

struct Ctx<'a> {
    g: &'a Digraph,
    deadline: Option<Instant>,
    nodes: u64,
}

impl Ctx<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes.is_multiple_of(256) {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    return Err(Error::Timeout);
                }
            }
        }
        Ok(())
    }

    fn descend(&mut self, q: Partition, depth: usize, levels: &[Level], leaf: &[u32]) -> Result<Option<Vec<u32>>> {
        self.tick()?;
        if q.is_discrete() {
            let mut perm = vec![0u32; leaf.len()];
            for (p, &v) in q.elems().iter().enumerate() {
                perm[leaf[p] as usize] = v;
            }
            return Ok(self.g.is_automorphism(&perm).then_some(perm));
        }
        let Some(level) = levels.get(depth) else { return Ok(None) };
        let t = q.target_cell().expect("non-discrete partition has a target");
        if t != level.target || q.cell(t).len() != level.cell.len() {
            return Ok(None);
        }
        for u in q.sorted_cell(t) {
            let mut r = q.clone();
            if r.individualize_refine(self.g, u as usize) != level.trace {
                continue;
            }
            if let Some(perm) = self.descend(r, depth + 1, levels, leaf)? {
                return Ok(Some(perm));
            }
        }
        Ok(None)
    }
}

/// The stabilizer of `v` in `Aut(g)`.
pub fn vertex_stabilizer(g: &Digraph, v: usize, limits: &SearchLimits) -> Result<Stabilizer> {
    let n = g.n();
    let mut part = Partition::unit(n);
    if n > 1 {
        part.individualize(v);
        let starts = part.cell_starts();
        part.refine(g, &starts, 0);
    }
    let mut levels: Vec<Level> = Vec::new();
    while let Some(target) = part.target_cell() {
        let cell = part.sorted_cell(target);
        let chosen = cell[0];
        let before = part.clone();
        let trace = part.individualize_refine(g, chosen as usize);
        levels.push(Level { part: before, target, cell, chosen, trace });
    }
    let leaf = part.elems().to_vec();

    let mut ctx = Ctx { g, deadline: limits.deadline, nodes: 0 };
    let mut orbits = Orbits::new(n);
    let mut generators: Vec<Vec<u32>> = Vec::new();
    let mut order = BigUint::one();
    for i in (0..levels.len()).rev() {
        let level = &levels[i];
        let chosen = level.chosen as usize;
        let mut failed: Vec<usize> = Vec::new();
        for &w in &level.cell {
            let w = w as usize;
            if orbits.same(w, chosen) || failed.iter().any(|&f| orbits.same(w, f)) {
                continue;
            }
            let mut q = level.part.clone();
            let found = if q.individualize_refine(g, w) == level.trace {
                ctx.descend(q, i + 1, &levels, &leaf)?
            } else {
                None
            };
            match found {
                Some(perm) => {
                    orbits.absorb(&perm);
                    generators.push(perm);
                }
                None => failed.push(w),
            }
        }
        let orbit_len = level.cell.iter().filter(|&&w| orbits.same(w as usize, chosen)).count();
        order *= orbit_len;
        if limits.max_order.as_ref().is_some_and(|b| &order > b) {
            return Ok(Stabilizer { order, generators, exceeded: true });
        }
    }
    Ok(Stabilizer { order, generators, exceeded: false })
}

/// Cycle notation, fixed points omitted, `()` for the identity.
pub fn cycle_notation(perm: &[u32]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut s = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] as usize == start {
            continue;
        }
        let mut cyc = vec![start];
        seen[start] = true;
        let mut x = perm[start] as usize;
        while x != start {
            seen[x] = true;
            cyc.push(x);
            x = perm[x] as usize;
        }
        s.push('(');
        s.push_str(&cyc.iter().map(usize::to_string).collect::<Vec<_>>().join(" "));
        s.push(')');
    }
    if s.is_empty() {
        s.push_str("()");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order_of(g: &Digraph, v: usize) -> u64 {
        let st = vertex_stabilizer(g, v, &SearchLimits::default()).unwrap();
        for p in &st.generators {
            assert!(g.is_automorphism(p));
            assert_eq!(p[v] as usize, v);
        }
        st.order.try_into().unwrap()
    }

    /// Oracle: count permutations fixing `v` that preserve every arc, by
    /// backtracking over images with a partial arc check.
    fn brute_stabilizer(g: &Digraph, v: usize) -> u64 {
        fn go(g: &Digraph, perm: &mut [u32], used: &mut [bool], i: usize) -> u64 {
            let n = g.n();
            if i == n {
                return 1;
            }
            let mut total = 0;
            for c in 0..n {
                if used[c] {
                    continue;
                }
                let ok = (0..i).all(|j| {
                    g.has_arc(j, i) == g.has_arc(perm[j] as usize, c) && g.has_arc(i, j) == g.has_arc(c, perm[j] as usize)
                }) && g.has_arc(i, i) == g.has_arc(c, c);
                if !ok {
                    continue;
                }
                used[c] = true;
                perm[i] = c as u32;
                total += go(g, perm, used, i + 1);
                used[c] = false;
            }
            total
        }
        let n = g.n();
        let mut swap: Vec<u32> = (0..n as u32).collect();
        swap.swap(0, v);
        let h = g.relabel(&swap);
        let mut perm = vec![0u32; n];
        let mut used = vec![false; n];
        used[0] = true;
        go(&h, &mut perm, &mut used, 1)
    }

    fn petersen() -> Digraph {
        let mut arcs = Vec::new();
        for i in 0..5 {
            for (a, b) in [(i, (i + 1) % 5), (i, i + 5), (i + 5, (i + 2) % 5 + 5)] {
                arcs.push((a, b));
                arcs.push((b, a));
            }
        }
        Digraph::from_arcs(10, arcs)
    }

    #[test]
    fn known_stabilizers() {
        assert_eq!(order_of(&petersen(), 0), 12);
        let k5 = Digraph::from_arcs(5, (0..5).flat_map(|i| (0..5).filter(move |&j| j != i).map(move |j| (i, j))));
        assert_eq!(order_of(&k5, 2), 24);
        let empty = Digraph::empty(6);
        assert_eq!(order_of(&empty, 0), 120);
        let dcycle = Digraph::from_arcs(7, (0..7).map(|i| (i, (i + 1) % 7)));
        assert_eq!(order_of(&dcycle, 3), 1);
        let cycle = Digraph::from_arcs(8, (0..8).flat_map(|i| [(i, (i + 1) % 8), ((i + 1) % 8, i)]));
        assert_eq!(order_of(&cycle, 0), 2);
    }

    #[test]
    fn matches_brute_force_on_small_digraphs() {
        let mut state = 0x1234_5678u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..60 {
            let n = 3 + (next() % 5) as usize;
            let density = next() % 4;
            let mut arcs = Vec::new();
            for u in 0..n {
                for v in 0..n {
                    if u != v && next() % 4 <= density {
                        arcs.push((u, v));
                    }
                }
            }
            let g = Digraph::from_arcs(n, arcs);
            let v = (next() % n as u64) as usize;
            assert_eq!(order_of(&g, v), brute_stabilizer(&g, v), "{:?}", g.arcs().collect::<Vec<_>>());
        }
    }

    #[test]
    fn bound_stops_early() {
        let empty = Digraph::empty(8);
        let st = vertex_stabilizer(&empty, 0, &SearchLimits::exceeding(1)).unwrap();
        assert!(st.exceeded);
        assert!(st.order > BigUint::from(1u32));
    }

    #[test]
    fn cycles_format() {
        assert_eq!(cycle_notation(&[0, 1, 2]), "()");
        assert_eq!(cycle_notation(&[1, 0, 3, 4, 2]), "(0 1)(2 3 4)");
    }
}
