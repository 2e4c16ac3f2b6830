//! Index surveys over admissible connection sets: exhaustive minimisation,
//! random sampling, the table reproductions, proportion estimates and
//! isomorphism-class counts.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::aut::{aut_order, index2_subgroup_orbits, index2_subgroups};
use crate::cayley::{build_cayley, ConnectionSet, Mode};
use crate::classify::check_index2;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, IsoType, Subgroup};

pub mod c26;

pub use c26::{c26_candidate_count, c26_orbit_check, c26_reduced_search, C26Options, C26Result, OrbitCheck};

/// The sampler's generator, echoed into reports.
pub const RNG_NAME: &str = "ChaCha8Rng";

/// Samples per pair in the random protocol.
pub const DEFAULT_SAMPLES: u64 = 10_000;

/// Admissible connection sets as subsets of a list of blocks: single elements
/// of `A∖B` for digraphs, `{a, -a}` pairs for graphs. A set is encoded by the
/// integer whose bit `i` selects block `i`.
#[derive(Clone, Debug)]
pub struct Admissible {
    blocks: Vec<Vec<usize>>,
}

impl Admissible {
    pub fn new(group: &AbelianGroup, b: &Subgroup, mode: Mode) -> Result<Self> {
        check_index2(group, b)?;
        let outside: Vec<usize> = b.members().complement().iter().collect();
        let blocks = match mode {
            Mode::Directed => outside.iter().map(|&a| vec![a]).collect(),
            Mode::Undirected => {
                let mut seen = vec![false; group.size()];
                let mut out = Vec::new();
                for &a in &outside {
                    if seen[a] {
                        continue;
                    }
                    let na = group.neg(a);
                    seen[a] = true;
                    seen[na] = true;
                    out.push(if na == a { vec![a] } else { vec![a, na] });
                }
                out
            }
        };
        Ok(Admissible { blocks })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Number of admissible sets, `2^blocks`.
    pub fn count(&self) -> u128 {
        1u128.checked_shl(self.blocks.len() as u32).unwrap_or(u128::MAX)
    }

    pub fn set(&self, group: &AbelianGroup, code: u64) -> ConnectionSet {
        let elems = self
            .blocks
            .iter()
            .enumerate()
            .filter(|(i, _)| code >> i & 1 == 1)
            .flat_map(|(_, blk)| blk.iter().copied());
        ConnectionSet::from_elements(group, elems).expect("blocks lie in the group")
    }

    /// One fair bit per block, in block order.
    pub fn sample(&self, group: &AbelianGroup, rng: &mut impl Rng) -> ConnectionSet {
        let elems: Vec<usize> =
            self.blocks.iter().filter(|_| rng.gen::<bool>()).flat_map(|blk| blk.iter().copied()).collect();
        ConnectionSet::from_elements(group, elems).expect("blocks lie in the group")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Method {
    Exhaustive,
    /// Uniform random admissible sets; the minimum found is an upper bound.
    Random { samples: u64, seed: u64 },
    /// The symmetry reduction for elementary abelian groups of order 64.
    Reduced,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Exhaustive => "exhaustive",
            Method::Random { .. } => "random",
            Method::Reduced => "reduced",
        }
    }
}

#[derive(Clone, Debug)]
pub struct IndexSurveyResult {
    pub group: String,
    pub subgroup: String,
    pub mode: Mode,
    pub min_index: u64,
    pub argmin_set: ConnectionSet,
    pub sets_examined: u64,
    pub method: Method,
    /// False when `min_index` is only an upper bound.
    pub exact: bool,
}

impl IndexSurveyResult {
    pub fn to_json(&self, group: &AbelianGroup) -> Value {
        let mut v = json!({
            "group": self.group,
            "subgroup": self.subgroup,
            "mode": self.mode,
            "method": self.method.name(),
            "min_index": self.min_index,
            "exact": self.exact,
            "argmin_set": self.argmin_set.elements(group).iter().map(ToString::to_string).collect::<Vec<_>>(),
            "sets_examined": self.sets_examined,
        });
        if let Method::Random { samples, seed } = self.method {
            v["samples"] = json!(samples);
            v["seed"] = json!(seed);
            v["rng"] = json!(RNG_NAME);
        }
        v
    }
}

/// Least index over `sets`, with ties broken by position; searches are cut
/// off as soon as they exceed the best index found so far.
fn min_over<F>(group: &AbelianGroup, count: u64, make: F, caps: &Caps) -> Result<Option<(u64, u64)>>
where
    F: Fn(u64) -> ConnectionSet + Sync,
{
    use std::sync::atomic::{AtomicU64, Ordering};
    let best = AtomicU64::new(u64::MAX);
    (0..count)
        .into_par_iter()
        .map(|i| -> Result<Option<(u64, u64)>> {
            let s = make(i);
            let bound = best.load(Ordering::Relaxed);
            match build_cayley(group, &s).index_within(bound, caps)? {
                Some(idx) => {
                    best.fetch_min(idx, Ordering::Relaxed);
                    Ok(Some((idx, i)))
                }
                None => Ok(None),
            }
        })
        .try_reduce(|| None, |a, b| Ok(a.into_iter().chain(b).min()))
}

fn budget_check(needed: u128, caps: &Caps) -> Result<()> {
    if needed > caps.budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget: caps.budget as u128 });
    }
    Ok(())
}

/// The (directed) bipartite Cayley index of `(A, B)`: the least Cayley index
/// over admissible connection sets.
pub fn bipartite_index(
    group: &AbelianGroup,
    b: &Subgroup,
    mode: Mode,
    method: &Method,
    caps: &Caps,
) -> Result<IndexSurveyResult> {
    let adm = Admissible::new(group, b, mode)?;
    let (min, arg, examined, exact) = match method {
        Method::Exhaustive => {
            budget_check(adm.count(), caps)?;
            let total = adm.count() as u64;
            let (idx, code) = min_over(group, total, |c| adm.set(group, c), caps)?.expect("at least one set");
            (idx, adm.set(group, code), total, true)
        }
        Method::Random { samples, seed } => {
            budget_check(*samples as u128, caps)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let sets: Vec<ConnectionSet> = (0..*samples).map(|_| adm.sample(group, &mut rng)).collect();
            let found = min_over(group, *samples, |i| sets[i as usize].clone(), caps)?;
            let (idx, i) = found.ok_or_else(|| Error::BadParameter("no samples".into()))?;
            (idx, sets[i as usize].clone(), *samples, false)
        }
        Method::Reduced => {
            let r = c26_reduced_search(group, &C26Options::full(caps.clone()))?;
            if !r.complete {
                return Err(Error::BudgetExceeded { needed: r.total as u128, budget: caps.budget as u128 });
            }
            let min = r.min_index().ok_or_else(|| Error::HypothesisViolated("reduction bounds not undercut".into()))?;
            let s = c26::transport_to(group, b, r.best_set.as_ref().expect("complete search has a best set"))?;
            (min, s, r.examined, true)
        }
    };
    Ok(IndexSurveyResult {
        group: group.spec(),
        subgroup: b.spec(group),
        mode,
        min_index: min,
        argmin_set: arg,
        sets_examined: examined,
        method: method.clone(),
        exact,
    })
}

#[derive(Clone, Debug)]
pub struct GlobalIndex {
    pub min_index: u64,
    /// One survey per `Aut(A)`-class of index-2 subgroups, or per subgroup
    /// when `Aut(A)` is too large to enumerate.
    pub per_subgroup: Vec<IndexSurveyResult>,
}

/// The global (directed) bipartite Cayley index: the minimum over all `B`.
pub fn global_index(group: &AbelianGroup, mode: Mode, caps: &Caps) -> Result<GlobalIndex> {
    if group.size() % 2 == 1 {
        return Err(Error::OddOrder(group.size()));
    }
    let subs = index2_subgroups(group);
    let reps: Vec<usize> = match index2_subgroup_orbits(group, caps.aut) {
        Ok(orbits) => orbits.iter().map(|o| o[0]).collect(),
        Err(Error::CapExceeded { .. }) => (0..subs.len()).collect(),
        Err(e) => return Err(e),
    };
    let per_subgroup = reps
        .into_iter()
        .map(|i| bipartite_index(group, &subs[i], mode, &Method::Exhaustive, caps))
        .collect::<Result<Vec<_>>>()?;
    let min_index = per_subgroup.iter().map(|r| r.min_index).min().expect("even order has an index-2 subgroup");
    Ok(GlobalIndex { min_index, per_subgroup })
}

/// A row of one of the two tables of exceptional pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    /// Cyclic factors of `A` and the isomorphism type of `B`.
    pub a: &'static [u64],
    pub b: &'static [u64],
    /// `None` for the infinite families whose index is open.
    pub paper: Option<u64>,
    pub note: &'static str,
}

const fn row(a: &'static [u64], b: &'static [u64], paper: u64) -> TableRow {
    TableRow { a, b, paper: Some(paper), note: "" }
}

pub const TABLE1: &[TableRow] = &[
    row(&[2, 2], &[2], 2),
    row(&[2, 2, 2], &[2, 2], 6),
    row(&[2, 2, 2, 2], &[2, 2, 2], 24),
    row(&[2, 2, 2, 2, 2], &[2, 2, 2, 2], 72),
    row(&[2, 2, 2, 2, 2, 2], &[2, 2, 2, 2, 2], 4),
    row(&[3, 6], &[3, 3], 2),
    row(&[4, 2, 2, 2], &[2, 2, 2, 2], 4),
    row(&[4, 2, 2], &[2, 2, 2], 4),
    row(&[4, 2, 2], &[4, 2], 2),
    row(&[4, 2], &[2, 2], 2),
];

pub const TABLE2: &[TableRow] = &[
    TableRow { a: &[4, 2, 2, 2, 2], b: &[2, 2, 2, 2, 2], paper: None, note: "C4xC2^l over C2^(l+1), open for l>=4" },
    TableRow { a: &[4, 4, 2, 2], b: &[4, 2, 2, 2], paper: None, note: "C4^2xC2^l over C4xC2^(l+1), open for l>=2" },
    row(&[2, 2, 2], &[2, 2], 6),
    row(&[2, 2, 2, 2], &[2, 2, 2], 24),
    row(&[2, 2, 2, 2, 2], &[2, 2, 2, 2], 72),
    row(&[2, 2, 2, 2, 2, 2], &[2, 2, 2, 2, 2], 4),
    row(&[2, 4], &[4], 6),
    row(&[2, 4], &[2, 2], 16),
    row(&[2, 8], &[2, 4], 16),
    row(&[4, 4], &[4, 2], 24),
    row(&[4, 2, 2], &[2, 2, 2], 768),
    row(&[4, 2, 2], &[4, 2], 24),
    row(&[3, 6], &[3, 3], 8),
    row(&[2, 12], &[2, 6], 4),
    row(&[2, 2, 6], &[2, 6], 4),
    row(&[4, 8], &[4, 4], 4),
    row(&[4, 8], &[2, 8], 4),
    row(&[2, 2, 8], &[2, 2, 4], 12),
    row(&[2, 4, 4], &[4, 4], 12),
    row(&[2, 4, 4], &[2, 2, 4], 128),
    row(&[2, 2, 2, 4], &[2, 2, 2, 2], 786_432),
    row(&[2, 2, 2, 4], &[2, 2, 4], 72),
    row(&[3, 12], &[3, 6], 4),
    row(&[2, 2, 12], &[2, 2, 6], 4),
    row(&[3, 3, 6], &[3, 3, 3], 12),
    row(&[2, 2, 2, 8], &[2, 2, 2, 4], 8),
    row(&[4, 4, 4], &[2, 4, 4], 4),
    row(&[2, 2, 2, 2, 4], &[2, 2, 2, 4], 4),
];

pub fn table(which: u8) -> Result<&'static [TableRow]> {
    match which {
        1 => Ok(TABLE1),
        2 => Ok(TABLE2),
        _ => Err(Error::BadParameter(format!("no table {which}"))),
    }
}

impl TableRow {
    pub fn mode(table: u8) -> Mode {
        if table == 1 {
            Mode::Directed
        } else {
            Mode::Undirected
        }
    }

    /// The first index-2 subgroup, in character order, of the row's type.
    pub fn subgroup(&self, group: &AbelianGroup) -> Result<Subgroup> {
        let want = IsoType::of_factors(self.b);
        index2_subgroups(group)
            .into_iter()
            .find(|s| s.iso_type(group) == want)
            .ok_or_else(|| Error::BadSubgroup(format!("no index-2 subgroup of type {want}")))
    }

    pub fn label(&self) -> (String, String) {
        (IsoType::of_factors(self.a).to_string(), IsoType::of_factors(self.b).to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowStatus {
    Match,
    Mismatch,
    /// Computed, but the paper gives no value.
    Open,
    Skipped(String),
}

impl RowStatus {
    pub fn name(&self) -> &'static str {
        match self {
            RowStatus::Match => "MATCH",
            RowStatus::Mismatch => "MISMATCH",
            RowStatus::Open => "OPEN",
            RowStatus::Skipped(_) => "SKIPPED",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowResult {
    pub a: String,
    pub b: String,
    pub paper: Option<u64>,
    pub computed: Option<u64>,
    pub sets: String,
    pub status: String,
    pub reason: String,
}

/// Reproduce one row exhaustively; over-budget rows, and open rows unless
/// `include_open`, come back skipped.
pub fn verify_row(table_no: u8, row: &TableRow, caps: &Caps, include_open: bool) -> Result<RowResult> {
    let (a, b) = row.label();
    let mut out = RowResult { a, b, paper: row.paper, computed: None, sets: String::new(), status: String::new(), reason: String::new() };
    let group = AbelianGroup::with_cap(row.a, caps.group)?;
    let sub = row.subgroup(&group)?;
    let mode = TableRow::mode(table_no);
    let count = Admissible::new(&group, &sub, mode)?.count();
    out.sets = count.to_string();
    let skip = |mut out: RowResult, why: String| {
        out.status = RowStatus::Skipped(why.clone()).name().into();
        out.reason = why;
        Ok(out)
    };
    if row.paper.is_none() && !include_open {
        return skip(out, format!("open family ({})", row.note));
    }
    if count > caps.budget as u128 {
        return skip(out, format!("{count} admissible sets exceed the budget of {}", caps.budget));
    }
    let r = bipartite_index(&group, &sub, mode, &Method::Exhaustive, caps)?;
    out.computed = Some(r.min_index);
    let status = match row.paper {
        None => RowStatus::Open,
        Some(p) if p == r.min_index => RowStatus::Match,
        Some(_) => RowStatus::Mismatch,
    };
    out.status = status.name().into();
    Ok(out)
}

pub fn verify_table(which: u8, caps: &Caps, include_open: bool) -> Result<Vec<RowResult>> {
    table(which)?.iter().map(|r| verify_row(which, r, caps, include_open)).collect()
}

pub fn write_table_csv<W: std::io::Write>(rows: &[RowResult], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    wr.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProportionEstimate {
    pub samples: u64,
    pub hits: u64,
    pub estimate: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub seed: u64,
    pub rng: &'static str,
    pub target_index: u64,
}

/// Two-sided 95% Wilson score interval.
pub fn wilson_interval(hits: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let nf = n as f64;
    let p = hits as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Fraction of uniform admissible sets whose Cayley index is the least
/// possible. Samples are drawn in order from one seeded stream, then checked
/// in parallel.
pub fn monte_carlo_proportion(
    group: &AbelianGroup,
    b: &Subgroup,
    mode: Mode,
    samples: u64,
    seed: u64,
    caps: &Caps,
) -> Result<ProportionEstimate> {
    let adm = Admissible::new(group, b, mode)?;
    let target = mode.target_index(group);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets: Vec<ConnectionSet> = (0..samples).map(|_| adm.sample(group, &mut rng)).collect();
    let hits = sets
        .par_iter()
        .map(|s| -> Result<u64> { Ok(u64::from(build_cayley(group, s).index_within(target, caps)? == Some(target))) })
        .try_reduce(|| 0, |x, y| Ok(x + y))?;
    let (wilson_low, wilson_high) = wilson_interval(hits, samples);
    Ok(ProportionEstimate {
        samples,
        hits,
        estimate: if samples == 0 { 0.0 } else { hits as f64 / samples as f64 },
        wilson_low,
        wilson_high,
        seed,
        rng: RNG_NAME,
        target_index: target,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoClass {
    pub canonical_hex: String,
    pub sets: u64,
    /// Distinct Cayley indices among the class; a single value when sound.
    pub indices: Vec<BigUint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnlabeledCount {
    pub total_sets: u64,
    pub total_classes: u64,
    /// Classes whose index is the least possible.
    pub min_index_classes: u64,
    pub min_index_sets: u64,
    pub aut_order: u64,
    pub classes: Vec<IsoClass>,
}

impl UnlabeledCount {
    /// Every class carries one index, and there are at least
    /// `total_sets / |Aut(A)|` classes.
    pub fn consistent(&self) -> bool {
        self.classes.iter().all(|c| c.indices.len() == 1)
            && self.total_classes as u128 * self.aut_order as u128 >= self.total_sets as u128
    }
}

/// Isomorphism classes of the admissible Cayley digraphs, by canonical form.
pub fn unlabeled_count(group: &AbelianGroup, b: &Subgroup, mode: Mode, caps: &Caps) -> Result<UnlabeledCount> {
    let adm = Admissible::new(group, b, mode)?;
    budget_check(adm.count(), caps)?;
    if group.size() > caps.canon {
        return Err(Error::CapExceeded { what: "canonical form", size: group.size(), cap: caps.canon });
    }
    let aut_order = aut_order(group).to_u64().unwrap_or(u64::MAX);
    let total = adm.count() as u64;
    let target = BigUint::from(mode.target_index(group));
    let rows: Vec<(Vec<u8>, BigUint)> = (0..total)
        .into_par_iter()
        .map(|code| {
            let cay = build_cayley(group, &adm.set(group, code));
            Ok((cay.canonical_form(caps)?.bytes, cay.aut_report(caps)?.cayley_index))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut classes: BTreeMap<Vec<u8>, (u64, Vec<BigUint>)> = BTreeMap::new();
    for (form, idx) in rows {
        let e = classes.entry(form).or_default();
        e.0 += 1;
        if !e.1.contains(&idx) {
            e.1.push(idx);
        }
    }
    let classes: Vec<IsoClass> = classes
        .into_iter()
        .map(|(form, (sets, mut indices))| {
            indices.sort();
            IsoClass { canonical_hex: form.iter().map(|b| format!("{b:02x}")).collect(), sets, indices }
        })
        .collect();
    let minimal: Vec<&IsoClass> = classes.iter().filter(|c| c.indices == [target.clone()]).collect();
    Ok(UnlabeledCount {
        total_sets: total,
        total_classes: classes.len() as u64,
        min_index_classes: minimal.len() as u64,
        min_index_sets: minimal.iter().map(|c| c.sets).sum(),
        aut_order,
        classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(orders: &[u64]) -> AbelianGroup {
        AbelianGroup::new(orders).unwrap()
    }

    #[test]
    fn small_indices() {
        let caps = Caps::default();
        let v4 = g(&[2, 2]);
        let b = v4.generated_subgroup(&[v4.encode(&[1, 0])]);
        let r = bipartite_index(&v4, &b, Mode::Directed, &Method::Exhaustive, &caps).unwrap();
        assert_eq!((r.min_index, r.sets_examined), (2, 4));
        let a = g(&[2, 4]);
        let b = a.generated_subgroup(&[a.encode(&[0, 1])]);
        let r = bipartite_index(&a, &b, Mode::Undirected, &Method::Exhaustive, &caps).unwrap();
        assert_eq!((r.min_index, r.sets_examined), (6, 8));
        assert_eq!(build_cayley(&a, &r.argmin_set).index_within(6, &caps).unwrap(), Some(6));
    }

    #[test]
    fn global_examples() {
        let caps = Caps::default();
        assert_eq!(global_index(&g(&[2, 2]), Mode::Directed, &caps).unwrap().min_index, 2);
        assert_eq!(global_index(&g(&[6]), Mode::Directed, &caps).unwrap().min_index, 1);
        assert_eq!(global_index(&g(&[3]), Mode::Directed, &caps).unwrap_err(), Error::OddOrder(3));
    }

    #[test]
    fn budget_is_enforced() {
        let caps = Caps { budget: 3, ..Caps::default() };
        let v4 = g(&[2, 2]);
        let b = &index2_subgroups(&v4)[0];
        assert!(matches!(
            bipartite_index(&v4, b, Mode::Directed, &Method::Exhaustive, &caps),
            Err(Error::BudgetExceeded { needed: 4, budget: 3 })
        ));
    }

    #[test]
    fn random_method_is_reproducible_upper_bound() {
        let caps = Caps::default();
        let a = g(&[4, 2]);
        let b = a.involution_subgroup();
        let m = Method::Random { samples: 50, seed: 7 };
        let r1 = bipartite_index(&a, &b, Mode::Directed, &m, &caps).unwrap();
        let r2 = bipartite_index(&a, &b, Mode::Directed, &m, &caps).unwrap();
        assert_eq!((r1.min_index, r1.argmin_set.clone()), (r2.min_index, r2.argmin_set));
        assert!(!r1.exact && r1.min_index >= 2);
    }

    #[test]
    fn wilson_reference_values() {
        let (lo, hi) = wilson_interval(0, 10);
        assert!(lo == 0.0 && (hi - 0.2775).abs() < 1e-4);
        let (lo, hi) = wilson_interval(95, 100);
        assert!((lo - 0.8882).abs() < 1e-4 && (hi - 0.9785).abs() < 1e-4);
    }

    #[test]
    fn unlabeled_small() {
        let caps = Caps::default();
        let v4 = g(&[2, 2]);
        let b = v4.generated_subgroup(&[v4.encode(&[1, 0])]);
        let u = unlabeled_count(&v4, &b, Mode::Directed, &caps).unwrap();
        assert_eq!((u.total_sets, u.total_classes), (4, 3));
        assert!(u.consistent());
    }

    #[test]
    fn tables_pick_matching_subgroups() {
        for (no, rows) in [(1u8, TABLE1), (2, TABLE2)] {
            for r in rows {
                let a = AbelianGroup::new(r.a).unwrap();
                let b = r.subgroup(&a).unwrap();
                assert_eq!(b.order() * 2, a.size(), "table {no} {:?}", r.a);
            }
        }
    }
}
