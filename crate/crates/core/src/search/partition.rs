//! Ordered partitions of the vertex set and equitable refinement.
//!
//! Cells are contiguous ranges of `elems`; a cell is identified by its start
//! position. Refinement splits cells by the number of out- and in-neighbours
//! each vertex has in a splitter cell, and orders the fragments by that count
//! pair, so the result does not depend on vertex names: refining `γ(π)` gives
//! `γ(refine(π))` cell by cell, and the trace hash is identical.

use std::collections::VecDeque;

use crate::bitset::BitSet;
use crate::digraph::Digraph;

#[derive(Clone, Debug)]
pub(crate) struct Partition {
    elems: Vec<u32>,
    pos: Vec<u32>,
    start: Vec<u32>,
    len: Vec<u32>,
    cells: usize,
}

#[inline]
fn mix(h: u64, v: u64) -> u64 {
    (h.rotate_left(7) ^ v).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

impl Partition {
    /// The partition with a single cell.
    pub(crate) fn unit(n: usize) -> Self {
        let mut len = vec![0u32; n];
        if n > 0 {
            len[0] = n as u32;
        }
        Partition {
            elems: (0..n as u32).collect(),
            pos: (0..n as u32).collect(),
            start: vec![0; n],
            len,
            cells: usize::from(n > 0),
        }
    }

    #[inline]
    pub(crate) fn n(&self) -> usize {
        self.elems.len()
    }

    #[inline]
    pub(crate) fn is_discrete(&self) -> bool {
        self.cells == self.n()
    }

    #[cfg(test)]
    pub(crate) fn num_cells(&self) -> usize {
        self.cells
    }

    /// Position → vertex.
    pub(crate) fn elems(&self) -> &[u32] {
        &self.elems
    }

    pub(crate) fn cell(&self, start: usize) -> &[u32] {
        &self.elems[start..start + self.len[start] as usize]
    }

    pub(crate) fn cell_starts(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.cells);
        let mut p = 0;
        while p < self.n() {
            out.push(p);
            p += self.len[p] as usize;
        }
        out
    }

    /// Smallest non-singleton cell, first by position on ties.
    pub(crate) fn target_cell(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        let mut p = 0;
        while p < self.n() {
            let l = self.len[p];
            if l > 1 && best.is_none_or(|b| l < self.len[b]) {
                best = Some(p);
            }
            p += l as usize;
        }
        best
    }

    /// Vertices of a cell sorted by vertex index.
    pub(crate) fn sorted_cell(&self, start: usize) -> Vec<u32> {
        let mut c = self.cell(start).to_vec();
        c.sort_unstable();
        c
    }

    /// Split `v` off to the front of its cell. Returns the start of the new
    /// singleton cell and a trace hash of the event.
    pub(crate) fn individualize(&mut self, v: usize) -> (usize, u64) {
        let p = self.pos[v] as usize;
        let s = self.start[p] as usize;
        let l = self.len[s] as usize;
        debug_assert!(l > 1);
        let first = self.elems[s] as usize;
        self.elems.swap(s, p);
        self.pos[first] = p as u32;
        self.pos[v] = s as u32;
        self.len[s] = 1;
        self.len[s + 1] = (l - 1) as u32;
        for q in s + 1..s + l {
            self.start[q] = (s + 1) as u32;
        }
        self.cells += 1;
        (s, mix(mix(0xC0FFEE, s as u64), l as u64))
    }

    /// Refine to the coarsest equitable partition finer than `self`, using the
    /// given cells as initial splitters. Returns the trace hash.
    pub(crate) fn refine(&mut self, g: &Digraph, splitters: &[usize], seed: u64) -> u64 {
        let n = self.n();
        let mut h = seed;
        let mut queued = vec![false; n];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &s in splitters {
            if !queued[s] {
                queued[s] = true;
                queue.push_back(s);
            }
        }
        let mut wbits = BitSet::new(n);
        let mut keyed: Vec<(u64, u32)> = Vec::new();
        while let Some(ws) = queue.pop_front() {
            if self.is_discrete() {
                break;
            }
            queued[ws] = false;
            wbits.clear();
            for &v in self.cell(ws) {
                wbits.insert(v as usize);
            }
            h = mix(h, ws as u64);
            let mut p = 0;
            while p < n {
                let l = self.len[p] as usize;
                if l == 1 {
                    p += 1;
                    continue;
                }
                keyed.clear();
                for &v in &self.elems[p..p + l] {
                    let v_ = v as usize;
                    let ko = g.out(v_).intersection_count(&wbits) as u64;
                    let ki = g.inn(v_).intersection_count(&wbits) as u64;
                    keyed.push((ko << 32 | ki, v));
                }
                if keyed.iter().all(|k| k.0 == keyed[0].0) {
                    p += l;
                    continue;
                }
                keyed.sort_unstable();
                let was_queued = queued[p];
                let mut frags: Vec<(usize, usize)> = Vec::new();
                let mut i = 0;
                while i < l {
                    let mut j = i;
                    while j < l && keyed[j].0 == keyed[i].0 {
                        j += 1;
                    }
                    frags.push((p + i, j - i));
                    h = mix(mix(mix(h, p as u64), keyed[i].0), (j - i) as u64);
                    i = j;
                }
                for (k, &(_, v)) in keyed.iter().enumerate() {
                    self.elems[p + k] = v;
                    self.pos[v as usize] = (p + k) as u32;
                }
                for &(fs, fl) in &frags {
                    self.len[fs] = fl as u32;
                    for q in fs..fs + fl {
                        self.start[q] = fs as u32;
                    }
                }
                self.cells += frags.len() - 1;
                if was_queued {
                    for &(fs, _) in &frags[1..] {
                        queued[fs] = true;
                        queue.push_back(fs);
                    }
                } else {
                    let largest = frags.iter().enumerate().max_by_key(|(k, f)| (f.1, usize::MAX - k)).unwrap().0;
                    for (k, &(fs, _)) in frags.iter().enumerate() {
                        if k != largest {
                            queued[fs] = true;
                            queue.push_back(fs);
                        }
                    }
                }
                p += l;
            }
        }
        mix(h, self.cells as u64)
    }

    /// Individualize `v` and refine with the new singleton as splitter.
    pub(crate) fn individualize_refine(&mut self, g: &Digraph, v: usize) -> u64 {
        let (s, h) = self.individualize(v);
        self.refine(g, &[s], h)
    }

    /// Check that every cell is equitable with respect to every cell.
    #[cfg(test)]
    pub(crate) fn is_equitable(&self, g: &Digraph) -> bool {
        let starts = self.cell_starts();
        starts.iter().all(|&w| {
            let wb = BitSet::from_indices(self.n(), self.cell(w).iter().map(|&v| v as usize));
            starts.iter().all(|&x| {
                let c = self.cell(x);
                let k0 = (g.out(c[0] as usize).intersection_count(&wb), g.inn(c[0] as usize).intersection_count(&wb));
                c.iter().all(|&v| {
                    (g.out(v as usize).intersection_count(&wb), g.inn(v as usize).intersection_count(&wb)) == k0
                })
            })
        })
    }
}
