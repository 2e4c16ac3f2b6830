use crate::bitset::BitSet;

/// A digraph on vertices `0..n` with out- and in-neighbourhood bitsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    out: Vec<BitSet>,
    inn: Vec<BitSet>,
}

impl Digraph {
    pub fn empty(n: usize) -> Self {
        Digraph { n, out: vec![BitSet::new(n); n], inn: vec![BitSet::new(n); n] }
    }

    pub fn from_arcs<I: IntoIterator<Item = (usize, usize)>>(n: usize, arcs: I) -> Self {
        let mut g = Self::empty(n);
        for (u, v) in arcs {
            g.add_arc(u, v);
        }
        g
    }

    pub fn add_arc(&mut self, u: usize, v: usize) {
        self.out[u].insert(v);
        self.inn[v].insert(u);
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u].contains(v)
    }

    #[inline]
    pub fn out(&self, u: usize) -> &BitSet {
        &self.out[u]
    }

    #[inline]
    pub fn inn(&self, u: usize) -> &BitSet {
        &self.inn[u]
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(BitSet::count).sum()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.out[u].iter().map(move |v| (u, v)))
    }

    /// Symmetric arc relation.
    pub fn is_graph(&self) -> bool {
        self.out == self.inn
    }

    /// The digraph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[u32]) -> Digraph {
        Digraph::from_arcs(self.n, self.arcs().map(|(u, v)| (perm[u] as usize, perm[v] as usize)))
    }

    /// Whether the vertex permutation `perm` maps arcs to arcs.
    pub fn is_automorphism(&self, perm: &[u32]) -> bool {
        (0..self.n).all(|u| {
            let pu = perm[u] as usize;
            self.out[u].count() == self.out[pu].count()
                && self.out[u].iter().all(|v| self.out[pu].contains(perm[v] as usize))
        })
    }

    /// Weakly connected components count is 1.
    pub fn is_weakly_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = BitSet::new(self.n);
        seen.insert(0);
        let mut stack = vec![0];
        while let Some(u) = stack.pop() {
            for v in self.out[u].iter().chain(self.inn[u].iter()) {
                if !seen.contains(v) {
                    seen.insert(v);
                    stack.push(v);
                }
            }
        }
        seen.count() == self.n
    }

    /// One `u v` line per arc, preceded by a `p arc n m` header.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("p arc {} {}\n", self.n, self.arc_count());
        for (u, v) in self.arcs() {
            s.push_str(&format!("a {} {}\n", u + 1, v + 1));
        }
        s
    }

    /// Rows of `0`/`1` characters, row `u` column `v` set iff `(u, v)` is an arc.
    pub fn to_adjacency_text(&self) -> String {
        let mut s = String::with_capacity(self.n * (self.n + 1));
        for u in 0..self.n {
            for v in 0..self.n {
                s.push(if self.has_arc(u, v) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }
}
