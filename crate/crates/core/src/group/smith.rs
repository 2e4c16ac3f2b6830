//! Smith normal form over the integers for small relation matrices.
//!
//! Used to put a finite abelian group `Z^m / L` into invariant-factor form,
//! either for a group given by its cyclic factors (diagonal relations) or for
//! a subgroup given by generators (Schreier relations, see [`super::Subgroup`]).

use num_integer::Integer;

/// Invariant factors `d_1 | d_2 | ... | d_r`, all `> 1`, of `Z^m / L` where `L`
/// is spanned by `rows`. The lattice must have full rank `m`.
pub fn invariant_factors(rows: &[Vec<i128>], m: usize) -> Vec<u64> {
    let mut a: Vec<Vec<i128>> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    let r = a.len();
    let mut diag = Vec::with_capacity(m);
    let mut t = 0;
    while t < m.min(r) {
        // pivot = smallest nonzero |entry| in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..m {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..r {
                let q = Integer::div_floor(&a[i][t], &p);
                if q != 0 {
                    for j in t..m {
                        a[i][j] -= q * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..m {
                let q = Integer::div_floor(&a[t][j], &p);
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                if a[t][j] != 0 {
                    dirty = true;
                }
            }
            if dirty {
                // a smaller remainder exists in row/column t; move it to the pivot
                let mut best = (t, t);
                for i in t..r {
                    if a[i][t] != 0 && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t..m {
                    if a[t][j] != 0 && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                a.swap(t, best.0);
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
                continue;
            }
            // divisibility of the trailing block by the pivot
            let bad = (t + 1..r).find(|&i| (t + 1..m).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in t..m {
                        let v = a[i][j];
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].unsigned_abs() as u64);
        t += 1;
    }
    assert_eq!(diag.len(), m, "relation lattice is not of full rank");
    let mut out: Vec<u64> = diag.into_iter().filter(|&d| d > 1).collect();
    out.sort_unstable();
    out
}

/// Incrementally maintained lattice `L + d·Z^m`, rows kept reduced modulo `d`.
pub(crate) struct ModLattice {
    m: usize,
    modulus: i128,
    basis: Vec<Option<Vec<i128>>>,
}

impl ModLattice {
    pub(crate) fn new(m: usize, modulus: u64) -> Self {
        ModLattice { m, modulus: modulus as i128, basis: vec![None; m] }
    }

    pub(crate) fn insert(&mut self, mut v: Vec<i128>) {
        let d = self.modulus;
        for c in 0..self.m {
            v.iter_mut().for_each(|x| *x = x.rem_euclid(d));
            if v[c] == 0 {
                continue;
            }
            match self.basis[c].take() {
                None => {
                    self.basis[c] = Some(v);
                    return;
                }
                Some(b) => {
                    let g = b[c].extended_gcd(&v[c]);
                    let (bc, vc) = (b[c] / g.gcd, v[c] / g.gcd);
                    let nb: Vec<i128> =
                        b.iter().zip(&v).map(|(x, y)| (g.x * x + g.y * y).rem_euclid(d)).collect();
                    let nv: Vec<i128> = b.iter().zip(&v).map(|(x, y)| vc * x - bc * y).collect();
                    self.basis[c] = Some(nb);
                    v = nv;
                }
            }
        }
    }

    /// Invariant factors of `Z^m / (L + d·Z^m)`.
    pub(crate) fn invariant_factors(&self) -> Vec<u64> {
        let mut rows: Vec<Vec<i128>> = self.basis.iter().flatten().cloned().collect();
        for j in 0..self.m {
            let mut e = vec![0; self.m];
            e[j] = self.modulus;
            rows.push(e);
        }
        invariant_factors(&rows, self.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(ns: &[i128]) -> Vec<Vec<i128>> {
        (0..ns.len())
            .map(|i| (0..ns.len()).map(|j| if i == j { ns[i] } else { 0 }).collect())
            .collect()
    }

    #[test]
    fn diagonal_groups() {
        assert_eq!(invariant_factors(&diag(&[3, 6]), 2), vec![3, 6]);
        assert_eq!(invariant_factors(&diag(&[6, 4]), 2), vec![2, 12]);
        assert_eq!(invariant_factors(&diag(&[2, 3, 5]), 3), vec![30]);
        assert_eq!(invariant_factors(&diag(&[4, 2, 2]), 3), vec![2, 2, 4]);
    }

    #[test]
    fn dense_relations() {
        // Z^2 / <(2,4),(6,8)>: det = -8, gcd of entries = 2 -> [2, 4]
        let rows = vec![vec![2, 4], vec![6, 8]];
        assert_eq!(invariant_factors(&rows, 2), vec![2, 4]);
    }

    #[test]
    fn mod_lattice_cyclic() {
        // <g> with 4g = 0 inside exponent 8: relation 4*e0
        let mut l = ModLattice::new(1, 8);
        l.insert(vec![4]);
        assert_eq!(l.invariant_factors(), vec![4]);
        let mut l = ModLattice::new(2, 4);
        l.insert(vec![2, 2]);
        l.insert(vec![0, 2]);
        // Z^2/<(2,2),(0,2),(4,0),(0,4)> = Z^2/<(2,0),(0,2)> = C2 x C2
        assert_eq!(l.invariant_factors(), vec![2, 2]);
    }
}
