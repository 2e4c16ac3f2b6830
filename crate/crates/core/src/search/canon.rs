//! Canonical labeling by a full individualization-refinement search.
//!
//! Each leaf is keyed by its sequence of trace hashes followed by the
//! adjacency matrix in leaf order; the least key wins. Subtrees whose trace
//! prefix is already larger than the best are cut, siblings in one orbit of
//! the automorphisms fixing the current path are skipped, and a leaf equal to
//! the best sends the search back to the level where the two paths diverge.

use std::cmp::Ordering;

use crate::digraph::Digraph;

use super::orbits::Orbits;
use super::partition::Partition;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    /// Position → vertex of the canonical leaf.
    pub labeling: Vec<u32>,
    /// `n` as big-endian `u32`, then the relabeled adjacency matrix row-major,
    /// packed eight entries per byte, most significant bit first.
    pub bytes: Vec<u8>,
}

impl CanonicalForm {
    pub fn to_hex(&self) -> String {
        self.bytes.iter().map(|b| format!("{b:02x}")).collect()
    }
}

struct Best {
    traces: Vec<u64>,
    bits: Vec<u64>,
    lab: Vec<u32>,
    path: Vec<u32>,
}

enum Flow {
    Continue,
    Jump(usize),
}

struct Canon<'a> {
    g: &'a Digraph,
    best: Option<Best>,
    gens: Vec<Vec<u32>>,
    path: Vec<u32>,
    traces: Vec<u64>,
}

fn matrix_bits(g: &Digraph, lab: &[u32]) -> Vec<u64> {
    let n = g.n();
    let mut bits = vec![0u64; (n * n).div_ceil(64)];
    for i in 0..n {
        let row = g.out(lab[i] as usize);
        for j in 0..n {
            if row.contains(lab[j] as usize) {
                let k = i * n + j;
                bits[k / 64] |= 1u64 << (63 - k % 64);
            }
        }
    }
    bits
}

impl Canon<'_> {
    fn prefix_cmp(&self) -> Ordering {
        let Some(b) = &self.best else { return Ordering::Less };
        let m = self.traces.len().min(b.traces.len());
        self.traces[..m].cmp(&b.traces[..m]).then(self.traces.len().cmp(&b.traces.len()).min(Ordering::Equal))
    }

    fn orbits_fixing_path(&self) -> Orbits {
        let mut orbits = Orbits::new(self.g.n());
        for p in &self.gens {
            if self.path.iter().all(|&v| p[v as usize] == v) {
                orbits.absorb(p);
            }
        }
        orbits
    }

    fn leaf(&mut self, part: &Partition) -> Flow {
        let lab = part.elems().to_vec();
        let bits = matrix_bits(self.g, &lab);
        let ord = match &self.best {
            None => Ordering::Less,
            Some(b) => self.traces.cmp(&b.traces).then_with(|| bits.cmp(&b.bits)),
        };
        match ord {
            Ordering::Less => {
                self.best = Some(Best { traces: self.traces.clone(), bits, lab, path: self.path.clone() });
                Flow::Continue
            }
            Ordering::Equal => {
                let b = self.best.as_ref().unwrap();
                let mut perm = vec![0u32; lab.len()];
                for (p, &v) in b.lab.iter().enumerate() {
                    perm[v as usize] = lab[p];
                }
                let diverge = self.path.iter().zip(&b.path).position(|(x, y)| x != y).unwrap_or(0);
                self.gens.push(perm);
                Flow::Jump(diverge)
            }
            Ordering::Greater => Flow::Continue,
        }
    }

    fn visit(&mut self, part: &Partition) -> Flow {
        if self.prefix_cmp() == Ordering::Greater {
            return Flow::Continue;
        }
        let Some(t) = part.target_cell() else { return self.leaf(part) };
        let depth = self.path.len();
        let mut explored: Vec<usize> = Vec::new();
        let mut orbits: Option<(usize, Orbits)> = None;
        for w in part.sorted_cell(t) {
            let w = w as usize;
            if !explored.is_empty() {
                if orbits.as_ref().is_none_or(|(k, _)| *k != self.gens.len()) {
                    orbits = Some((self.gens.len(), self.orbits_fixing_path()));
                }
                let o = &mut orbits.as_mut().unwrap().1;
                if explored.iter().any(|&e| o.same(w, e)) {
                    continue;
                }
            }
            let mut child = part.clone();
            let h = child.individualize_refine(self.g, w);
            self.path.push(w as u32);
            self.traces.push(h);
            let flow = self.visit(&child);
            self.path.pop();
            self.traces.pop();
            explored.push(w);
            if let Flow::Jump(level) = flow {
                if level < depth {
                    return flow;
                }
            }
        }
        Flow::Continue
    }
}

pub fn canonical_form(g: &Digraph) -> CanonicalForm {
    let n = g.n();
    let mut root = Partition::unit(n);
    let h = if n > 0 { root.refine(g, &[0], 0) } else { 0 };
    let mut c = Canon { g, best: None, gens: Vec::new(), path: Vec::new(), traces: vec![h] };
    c.visit(&root);
    let best = c.best.expect("search reaches a leaf");
    let mut bytes = (n as u32).to_be_bytes().to_vec();
    let nbytes = (n * n).div_ceil(8);
    bytes.extend(best.bits.iter().flat_map(|w| w.to_be_bytes()).take(nbytes));
    CanonicalForm { labeling: best.lab, bytes }
}

pub fn are_isomorphic(g: &Digraph, h: &Digraph) -> bool {
    g.n() == h.n() && g.arc_count() == h.arc_count() && canonical_form(g).bytes == canonical_form(h).bytes
}

#[cfg(test)]
mod tests {
    use super::*;

    fn relabel_all(g: &Digraph, seed: u64) -> Digraph {
        let n = g.n();
        let mut perm: Vec<u32> = (0..n as u32).collect();
        let mut s = seed | 1;
        for i in (1..n).rev() {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            perm.swap(i, (s % (i as u64 + 1)) as usize);
        }
        g.relabel(&perm)
    }

    /// Oracle: the least adjacency string over all n! labelings.
    fn brute_canon(g: &Digraph) -> Vec<u64> {
        fn perms(k: usize, cur: &mut Vec<u32>, used: &mut [bool], g: &Digraph, best: &mut Option<Vec<u64>>) {
            let n = used.len();
            if k == n {
                let bits = matrix_bits(g, cur);
                if best.as_ref().is_none_or(|b| bits < *b) {
                    *best = Some(bits);
                }
                return;
            }
            for v in 0..n {
                if !used[v] {
                    used[v] = true;
                    cur.push(v as u32);
                    perms(k + 1, cur, used, g, best);
                    cur.pop();
                    used[v] = false;
                }
            }
        }
        let mut best = None;
        perms(0, &mut Vec::new(), &mut vec![false; g.n()], g, &mut best);
        best.unwrap()
    }

    #[test]
    fn isomorphism_classes_agree_with_brute_force() {
        let mut s = 0xDEAD_BEEFu64;
        let mut graphs = Vec::new();
        for _ in 0..40 {
            let n = 4 + (s % 3) as usize;
            let mut arcs = Vec::new();
            for u in 0..n {
                for v in 0..n {
                    s ^= s << 13;
                    s ^= s >> 7;
                    s ^= s << 17;
                    if u != v && s.is_multiple_of(3) {
                        arcs.push((u, v));
                    }
                }
            }
            graphs.push(Digraph::from_arcs(n, arcs));
        }
        for (i, g) in graphs.iter().enumerate() {
            for h in &graphs[i..] {
                let same_brute = g.n() == h.n() && brute_canon(g) == brute_canon(h);
                assert_eq!(are_isomorphic(g, h), same_brute);
            }
        }
    }

    #[test]
    fn relabeling_preserves_form() {
        let cube = Digraph::from_arcs(8, (0..8).flat_map(|i| (0..3).map(move |b| (i, i ^ (1 << b)))));
        let form = canonical_form(&cube);
        for seed in 1..20 {
            assert_eq!(canonical_form(&relabel_all(&cube, seed)).bytes, form.bytes);
        }
        assert_eq!(&form.bytes[..4], &[0, 0, 0, 8]);
        assert_eq!(form.bytes.len(), 4 + 8);
        let relabeled = cube.relabel(&{
            let mut inv = vec![0u32; 8];
            for (p, &v) in form.labeling.iter().enumerate() {
                inv[v as usize] = p as u32;
            }
            inv
        });
        assert_eq!(matrix_bits(&relabeled, &(0..8).collect::<Vec<_>>()), matrix_bits(&cube, &form.labeling));
    }
}
