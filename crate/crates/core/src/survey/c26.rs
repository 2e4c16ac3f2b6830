//! The reduced search for `C2^6` over the hyperplane `x1 + ... + x6 = 0`.
//!
//! Only connection sets with at most 16 elements are considered. Sets that do
//! not generate `A` are bounded below by composing the smaller elementary
//! abelian rows. Generating sets are normalised to contain the standard basis
//! and one of two orbit representatives of the coordinate permutations, which
//! leaves `2 * sum_{k<=9} C(25, k)` candidates.

use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aut::GroupAutomorphism;
use crate::bitset::BitSet;
use crate::cayley::{build_cayley, ConnectionSet};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, Subgroup};

const DIM: usize = 6;
const RESIDUAL: usize = 25;
const MAX_EXTRA: usize = 9;
const SHARD: u64 = 1 << 15;

/// Directed indices of `C2^l` over a hyperplane, for `l = 1..=5`.
const SMALLER_ROWS: [u64; 5] = [1, 2, 6, 24, 72];

fn binom(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// `2 * sum_{k=0}^{9} C(25, k)`.
pub fn c26_candidate_count() -> u64 {
    2 * (0..=MAX_EXTRA).map(|k| binom(RESIDUAL, k)).sum::<u64>()
}

fn weight(group: &AbelianGroup, a: usize) -> usize {
    (0..DIM).filter(|&i| group.coord(a, i) == 1).count()
}

fn vector(group: &AbelianGroup, support: &[usize]) -> usize {
    let mut c = [0u64; DIM];
    for &i in support {
        c[i] = 1;
    }
    group.encode(&c)
}

/// The hyperplane of even-weight vectors.
pub fn even_hyperplane(group: &AbelianGroup) -> Subgroup {
    let members = BitSet::from_indices(group.size(), (0..group.size()).filter(|&a| weight(group, a).is_multiple_of(2)));
    Subgroup::from_members(group, members)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitCheck {
    /// Odd-weight vectors other than the basis.
    pub residual: usize,
    /// Orbit sizes under coordinate permutations, largest first.
    pub orbit_sizes: Vec<usize>,
    /// Weights of the orbits, in the same order.
    pub orbit_weights: Vec<usize>,
    /// `e1+e2+e3` lies in the larger orbit and `e1+...+e5` in the smaller.
    pub representatives_ok: bool,
}

impl OrbitCheck {
    pub fn pass(&self) -> bool {
        self.residual == 26 && self.orbit_sizes == [20, 6] && self.representatives_ok
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Orbits of the coordinate permutations on the odd-weight non-basis vectors.
pub fn c26_orbit_check(group: &AbelianGroup) -> OrbitCheck {
    let perms = permutations(DIM);
    let residual: Vec<usize> = (0..group.size()).filter(|&a| weight(group, a) % 2 == 1 && weight(group, a) > 1).collect();
    let mut seen = BitSet::new(group.size());
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for &a in &residual {
        if seen.contains(a) {
            continue;
        }
        let mut orbit: Vec<usize> = perms
            .iter()
            .map(|p| {
                let support: Vec<usize> = (0..DIM).filter(|&i| group.coord(a, i) == 1).map(|i| p[i]).collect();
                vector(group, &support)
            })
            .collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &x in &orbit {
            seen.insert(x);
        }
        orbits.push(orbit);
    }
    orbits.sort_by_key(|o| std::cmp::Reverse(o.len()));
    let rep3 = vector(group, &[0, 1, 2]);
    let rep5 = vector(group, &[0, 1, 2, 3, 4]);
    let representatives_ok = orbits.len() == 2 && orbits[0].contains(&rep3) && orbits[1].contains(&rep5);
    OrbitCheck {
        residual: residual.len(),
        orbit_sizes: orbits.iter().map(Vec::len).collect(),
        orbit_weights: orbits.iter().map(|o| weight(group, o[0])).collect(),
        representatives_ok,
    }
}

/// Least index forced on a non-generating set: with `<S> = C2^l` the digraph
/// is `2^(6-l)` copies of a component, so its index is at least
/// `k! * c_l^k * 2^(l*k - 6)` with `k = 2^(6-l)`.
pub fn disconnected_lower_bound() -> BigUint {
    (1..=5u32)
        .map(|l| {
            let k = 1u64 << (6 - l);
            let fact: BigUint = (1..=k).map(BigUint::from).product();
            let c = BigUint::from(SMALLER_ROWS[l as usize - 1]).pow(k as u32);
            fact * c * (BigUint::from(1u8) << (l as u64 * k - 6))
        })
        .min()
        .expect("five terms")
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CheckpointRecord {
    pub shard_id: u64,
    pub best_index: Option<u64>,
    pub best_set: Option<Vec<String>>,
    /// Next candidate to examine.
    pub cursor: u64,
    pub best_cursor: Option<u64>,
}

pub type Progress = dyn Fn(&CheckpointRecord, u64) + Send + Sync;

pub struct C26Options {
    pub caps: Caps,
    /// Most candidates examined in this run.
    pub limit: u64,
    /// NDJSON checkpoint, appended after every shard.
    pub checkpoint: Option<PathBuf>,
    /// Continue from the last record of `checkpoint`.
    pub resume: bool,
    pub progress: Option<Box<Progress>>,
}

impl C26Options {
    pub fn full(caps: Caps) -> Self {
        C26Options { limit: caps.budget, caps, checkpoint: None, resume: false, progress: None }
    }
}

#[derive(Clone, Debug)]
pub struct C26Result {
    pub subgroup: Subgroup,
    pub orbit_check: OrbitCheck,
    pub disconnected_bound: BigUint,
    /// `|Sym(6)|`, forced when only the basis is present.
    pub basis_only_bound: u64,
    pub total: u64,
    /// Candidates examined so far, including earlier runs when resumed.
    pub examined: u64,
    pub complete: bool,
    pub best_index: Option<u64>,
    pub best_set: Option<ConnectionSet>,
    pub best_cursor: Option<u64>,
    pub resumed_from: Option<u64>,
}

impl C26Result {
    /// The index of the pair once the search is complete: the best connected
    /// candidate, which must also undercut the other two bounds.
    pub fn min_index(&self) -> Option<u64> {
        let best = self.best_index?;
        (self.complete && BigUint::from(best) <= self.disconnected_bound && best <= self.basis_only_bound).then_some(best)
    }
}

struct Space {
    basis: Vec<usize>,
    reps: [usize; 2],
    residual: [Vec<usize>; 2],
    offsets: Vec<(usize, usize, u64)>,
}

impl Space {
    fn new(group: &AbelianGroup) -> Self {
        let basis: Vec<usize> = (0..DIM).map(|i| group.basis_element(i)).collect();
        let reps = [vector(group, &[0, 1, 2]), vector(group, &[0, 1, 2, 3, 4])];
        let odd: Vec<usize> = (0..group.size()).filter(|&a| weight(group, a) % 2 == 1 && weight(group, a) > 1).collect();
        let residual = reps.map(|r| odd.iter().copied().filter(|&a| a != r).collect::<Vec<_>>());
        let mut offsets = Vec::new();
        let mut start = 0;
        for case in 0..2 {
            for k in 0..=MAX_EXTRA {
                offsets.push((case, k, start));
                start += binom(RESIDUAL, k);
            }
        }
        Space { basis, reps, residual, offsets }
    }

    fn unrank(&self, cursor: u64) -> Vec<usize> {
        let &(case, k, start) = self.offsets.iter().rev().find(|o| o.2 <= cursor).expect("cursor in range");
        let mut r = cursor - start;
        let mut out: Vec<usize> = self.basis.clone();
        out.push(self.reps[case]);
        let mut x = 0;
        for i in 0..k {
            loop {
                let c = binom(RESIDUAL - 1 - x, k - 1 - i);
                if r < c {
                    out.push(self.residual[case][x]);
                    x += 1;
                    break;
                }
                r -= c;
                x += 1;
            }
        }
        out
    }
}

fn read_checkpoint(path: &PathBuf) -> Result<Option<CheckpointRecord>> {
    let file = match std::fs::File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let mut last = None;
    for line in BufReader::new(file).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: CheckpointRecord =
            serde_json::from_str(&line).map_err(|e| Error::Parse { pos: 0, msg: format!("checkpoint: {e}") })?;
        last = Some(rec);
    }
    Ok(last)
}

/// Move a set found over the even hyperplane onto `b`.
pub fn transport_to(group: &AbelianGroup, b: &Subgroup, s: &ConnectionSet) -> Result<ConnectionSet> {
    let u = (0..group.size()).find(|&a| !b.contains(a)).ok_or_else(|| Error::BadSubgroup("B is the whole group".into()))?;
    let mut span = Subgroup::trivial(group);
    let mut images = vec![u];
    for a in b.members().iter() {
        if !span.contains(a) {
            span = group.generated_subgroup(&[span.generators(), &[a][..]].concat());
            images.push(group.add(u, a));
        }
    }
    let alpha = GroupAutomorphism::from_basis_images(group, &images)?;
    Ok(s.image(&alpha))
}

pub fn c26_reduced_search(group: &AbelianGroup, opts: &C26Options) -> Result<C26Result> {
    if !(group.rank() == DIM && group.exponent() == 2) {
        return Err(Error::BadParameter(format!("expected C2^6, got {}", group.iso_type())));
    }
    let caps = &opts.caps;
    let space = Space::new(group);
    let total = c26_candidate_count();
    let make = |cursor: u64| ConnectionSet::from_elements(group, space.unrank(cursor)).expect("vectors of C2^6");

    let mut start = 0;
    let mut best: Option<(u64, u64)> = None;
    let mut resumed_from = None;
    if let (true, Some(path)) = (opts.resume, &opts.checkpoint) {
        if let Some(rec) = read_checkpoint(path)? {
            start = rec.cursor.min(total);
            best = rec.best_index.zip(rec.best_cursor);
            resumed_from = Some(start);
        }
    }
    let mut writer = match &opts.checkpoint {
        Some(p) => Some(OpenOptions::new().create(true).append(true).open(p)?),
        None => None,
    };

    let end = total.min(start.saturating_add(opts.limit));
    let bound = AtomicU64::new(best.map_or(u64::MAX, |b| b.0));
    let mut cursor = start;
    while cursor < end {
        let stop = (cursor / SHARD + 1) * SHARD;
        let stop = stop.min(end);
        let shard_best = (cursor..stop)
            .into_par_iter()
            .map(|c| -> Result<Option<(u64, u64)>> {
                let b = bound.load(Ordering::Relaxed);
                match build_cayley(group, &make(c)).index_within(b, caps)? {
                    Some(idx) => {
                        bound.fetch_min(idx, Ordering::Relaxed);
                        Ok(Some((idx, c)))
                    }
                    None => Ok(None),
                }
            })
            .try_reduce(|| None, |x, y| Ok(x.into_iter().chain(y).min()))?;
        best = best.into_iter().chain(shard_best).min();
        let rec = CheckpointRecord {
            shard_id: cursor / SHARD,
            best_index: best.map(|b| b.0),
            best_set: best.map(|b| make(b.1).elements(group).iter().map(ToString::to_string).collect()),
            cursor: stop,
            best_cursor: best.map(|b| b.1),
        };
        if let Some(w) = writer.as_mut() {
            let line = serde_json::to_string(&rec).map_err(|e| Error::Io(e.to_string()))?;
            writeln!(w, "{line}")?;
            w.flush()?;
        }
        if let Some(p) = &opts.progress {
            p(&rec, total);
        }
        cursor = stop;
    }

    Ok(C26Result {
        subgroup: even_hyperplane(group),
        orbit_check: c26_orbit_check(group),
        disconnected_bound: disconnected_lower_bound(),
        basis_only_bound: 720,
        total,
        examined: cursor,
        complete: cursor == total,
        best_index: best.map(|b| b.0),
        best_set: best.map(|b| make(b.1)),
        best_cursor: best.map(|b| b.1),
        resumed_from,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c26() -> AbelianGroup {
        AbelianGroup::elementary2(6).unwrap()
    }

    #[test]
    fn candidate_count() {
        assert_eq!(c26_candidate_count(), 7_701_512);
    }

    #[test]
    fn orbits_split_twenty_six() {
        let o = c26_orbit_check(&c26());
        assert_eq!(o.orbit_weights, [3, 5]);
        assert!(o.pass(), "{o:?}");
    }

    #[test]
    fn disconnected_bound_value() {
        assert_eq!(disconnected_lower_bound(), BigUint::from(165_888u32));
    }

    #[test]
    fn unranking_is_a_bijection_on_a_block() {
        let g = c26();
        let space = Space::new(&g);
        let start = 1 + 25 + 300;
        let mut seen = std::collections::HashSet::new();
        for c in start..start + binom(25, 3) {
            let s = space.unrank(c);
            assert_eq!(s.len(), 6 + 1 + 3);
            assert!(s.iter().all(|&a| weight(&g, a) % 2 == 1));
            assert!(seen.insert(s));
        }
        assert_eq!(space.unrank(total_case0()).last(), Some(&space.reps[1]));
    }

    fn total_case0() -> u64 {
        c26_candidate_count() / 2
    }

    #[test]
    fn prefix_and_resume_agree() {
        let g = c26();
        let dir = std::env::temp_dir().join(format!("c26-ckpt-{}", std::process::id()));
        let _ = std::fs::remove_file(&dir);
        let caps = Caps::default();
        let mut opts = C26Options { limit: 40, checkpoint: Some(dir.clone()), ..C26Options::full(caps.clone()) };
        let first = c26_reduced_search(&g, &opts).unwrap();
        assert!(!first.complete && first.examined == 40);
        opts.resume = true;
        let second = c26_reduced_search(&g, &opts).unwrap();
        assert_eq!((second.resumed_from, second.examined), (Some(40), 80));
        let straight = c26_reduced_search(&g, &C26Options { limit: 80, ..C26Options::full(caps) }).unwrap();
        assert_eq!((second.best_index, second.best_cursor), (straight.best_index, straight.best_cursor));
        let lines = std::fs::read_to_string(&dir).unwrap().lines().count();
        assert_eq!(lines, 2);
        std::fs::remove_file(&dir).unwrap();
    }

    #[test]
    fn transport_preserves_index() {
        let g = c26();
        let b = &crate::aut::index2_subgroups(&g)[0];
        let s = ConnectionSet::from_elements(&g, Space::new(&g).unrank(3)).unwrap();
        let t = transport_to(&g, b, &s).unwrap();
        assert!(t.avoids(b));
        let caps = Caps::default();
        assert_eq!(
            build_cayley(&g, &s).aut_report(&caps).unwrap().cayley_index,
            build_cayley(&g, &t).aut_report(&caps).unwrap().cayley_index
        );
    }
}
