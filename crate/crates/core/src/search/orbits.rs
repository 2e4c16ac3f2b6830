/// Union-find over vertices, used to track orbits of the group generated by
/// the automorphisms found so far.
#[derive(Clone, Debug)]
pub(crate) struct Orbits {
    parent: Vec<u32>,
}

impl Orbits {
    pub(crate) fn new(n: usize) -> Self {
        Orbits { parent: (0..n as u32).collect() }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] as usize != r {
            r = self.parent[r] as usize;
        }
        let mut y = x;
        while self.parent[y] as usize != r {
            let next = self.parent[y] as usize;
            self.parent[y] = r as u32;
            y = next;
        }
        r
    }

    pub(crate) fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    pub(crate) fn absorb(&mut self, perm: &[u32]) {
        for (x, &y) in perm.iter().enumerate() {
            let (rx, ry) = (self.find(x), self.find(y as usize));
            if rx != ry {
                self.parent[rx.max(ry)] = rx.min(ry) as u32;
            }
        }
    }
}
