//! Counting formulas, lemma upper bounds, theorem lower bounds and the numeric
//! thresholds, evaluated exactly.
//!
//! Bounds are kept in log₂ form `r + c·log₂|A|` with `r` rational, and a count
//! `N` is compared with `2^(r + c·log₂ m)` as `N^q ≤ 2^p·m^(c·q)` in big
//! integers. Terms in `(log₂ m)²` are bracketed by `floor(2^k·log₂ m) =
//! bitlen(m^(2^k)) - 1`, refining `k` until the comparison is decided.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::io::Write;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::aut::{
    aut_order, index2_subgroups, is_exceptional_pair, prime_index_subgroups,
    prime_order_subgroups, stabilizing_automorphisms_capped, GroupAutomorphism,
};
use crate::bitset::BitSet;
use crate::cayley::Mode;
use crate::classify::{check_index2, cyclic_by_elementary_decompositions, SPrime};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, Subgroup};

/// Largest number of maximal subgroups handled by inclusion-exclusion.
const MAX_INCLUSION_EXCLUSION: usize = 24;

/// `2^(constant + log_coeff·log₂ m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Log2Bound {
    pub constant: Ratio<i64>,
    pub log_coeff: i64,
    pub m: u64,
}

impl Log2Bound {
    pub fn new(constant: Ratio<i64>, log_coeff: i64, m: u64) -> Self {
        Log2Bound { constant, log_coeff, m }
    }

    pub fn to_f64(&self) -> f64 {
        *self.constant.numer() as f64 / *self.constant.denom() as f64 + self.log_coeff as f64 * (self.m as f64).log2()
    }

    /// `n ≤ 2^self`, exactly.
    pub fn admits(&self, n: &BigUint) -> bool {
        if n.is_zero() {
            return true;
        }
        let (p, q) = (*self.constant.numer(), *self.constant.denom() as u32);
        let mut lhs = n.pow(q);
        let mut rhs = BigUint::one();
        if p >= 0 {
            rhs <<= p as u64;
        } else {
            lhs <<= p.unsigned_abs();
        }
        let mq = BigUint::from(self.m).pow(self.log_coeff.unsigned_abs() as u32 * q);
        if self.log_coeff >= 0 {
            rhs *= mq;
        } else {
            lhs *= mq;
        }
        lhs <= rhs
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Lemma {
    A1Directed,
    AlphaInvariant,
    HkCosets,
    A1Undirected,
    HkUndirected,
    AlphaUndirected,
    Triples,
}

impl Lemma {
    pub const ALL: [Lemma; 7] = [
        Lemma::A1Directed,
        Lemma::AlphaInvariant,
        Lemma::HkCosets,
        Lemma::A1Undirected,
        Lemma::HkUndirected,
        Lemma::AlphaUndirected,
        Lemma::Triples,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Lemma::A1Directed => "A1-directed",
            Lemma::AlphaInvariant => "alpha-invariant",
            Lemma::HkCosets => "HK-cosets",
            Lemma::A1Undirected => "A1-undirected",
            Lemma::HkUndirected => "HK-undirected",
            Lemma::AlphaUndirected => "alpha-undirected",
            Lemma::Triples => "triples",
        }
    }
}

impl std::str::FromStr for Lemma {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Lemma::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::BadParameter(format!("unknown lemma {s:?}")))
    }
}

/// Optional fixed `α` or `(H, K)`; when absent the report maximises over all
/// admissible choices.
#[derive(Clone, Debug, Default)]
pub struct LemmaParams {
    pub alpha: Option<GroupAutomorphism>,
    pub hk: Option<(Subgroup, Subgroup)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub group: String,
    pub subgroup: String,
    #[serde(serialize_with = "ser_opt_big")]
    pub exact: Option<BigUint>,
    pub log2_bound: f64,
    pub holds: bool,
    #[serde(skip)]
    pub bound: Log2Bound,
}

fn ser_opt_big<S: serde::Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_str(&x.to_string()),
        None => s.serialize_str(""),
    }
}

impl BoundReport {
    fn new(name: &str, group: &AbelianGroup, sub: Option<&Subgroup>, exact: Option<BigUint>, bound: Log2Bound) -> Self {
        let holds = exact.as_ref().is_none_or(|n| bound.admits(n));
        BoundReport {
            name: name.to_string(),
            group: group.spec(),
            subgroup: sub.map(|b| b.spec(group)).unwrap_or_default(),
            exact,
            log2_bound: bound.to_f64(),
            holds,
            bound,
        }
    }
}

pub fn write_csv<W: Write>(reports: &[BoundReport], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in reports {
        wr.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    wr.flush()?;
    Ok(())
}

fn pow2(e: u64) -> BigUint {
    BigUint::one() << e
}

fn a2_outside(group: &AbelianGroup, b: &Subgroup) -> usize {
    (0..group.size()).filter(|&a| group.add(a, a) == 0 && !b.contains(a)).count()
}

/// Number of orbits on `domain` of the group generated by `maps`.
fn orbit_count(domain: &BitSet, maps: &[&dyn Fn(usize) -> usize]) -> usize {
    let n = domain.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut count = domain.count();
    for a in domain.iter() {
        for f in maps {
            let (x, y) = (find(&mut parent, a), find(&mut parent, f(a)));
            if x != y {
                parent[x] = y;
                count -= 1;
            }
        }
    }
    count
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InverseClosedCount {
    /// `|A|/4 + |A₂∖B|/2`.
    pub exponent: u64,
    #[serde(serialize_with = "ser_big")]
    pub value: BigUint,
    /// `A₂ ≤ B`, in which case the exponent is `|A|/4`; otherwise `|A|/4 + |A₂|/4`.
    pub a2_in_b: bool,
}

fn ser_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Inverse-closed subsets of `A∖B`, by the closed formula.
pub fn count_inverse_closed(group: &AbelianGroup, b: &Subgroup) -> Result<InverseClosedCount> {
    check_index2(group, b)?;
    let outside = a2_outside(group, b) as u64;
    let exponent = (group.size() as u64 / 2 + outside) / 2;
    Ok(InverseClosedCount { exponent, value: pow2(exponent), a2_in_b: outside == 0 })
}

/// `|{S ⊆ A∖B : ⟨S⟩ < A}|` by inclusion-exclusion over the maximal
/// subgroups, counting inverse-closed sets only when `undirected`.
fn a1_count(group: &AbelianGroup, b: &Subgroup, undirected: bool) -> Option<BigUint> {
    let maximal: Vec<BitSet> =
        prime_index_subgroups(group).into_iter().map(|c| c.members().difference(b.members())).collect();
    if maximal.len() > MAX_INCLUSION_EXCLUSION {
        return None;
    }
    let neg = |a: usize| group.neg(a);
    let free_bits = |x: &BitSet| {
        if undirected {
            orbit_count(x, &[&neg])
        } else {
            x.count()
        }
    };
    let mut plus = BigUint::zero();
    let mut minus = BigUint::zero();
    fn rec(
        i: usize,
        maximal: &[BitSet],
        cur: Option<&BitSet>,
        depth: usize,
        free: &dyn Fn(&BitSet) -> usize,
        plus: &mut BigUint,
        minus: &mut BigUint,
    ) {
        for j in i..maximal.len() {
            let inter = match cur {
                None => maximal[j].clone(),
                Some(c) => c.intersection(&maximal[j]),
            };
            let term = pow2(free(&inter) as u64);
            if depth.is_multiple_of(2) {
                *plus += term;
            } else {
                *minus += term;
            }
            rec(j + 1, maximal, Some(&inter), depth + 1, free, plus, minus);
        }
    }
    rec(0, &maximal, None, 0, &free_bits, &mut plus, &mut minus);
    Some(plus - minus)
}

fn alpha_candidates(group: &AbelianGroup, b: &Subgroup, caps: &Caps, drop_iota: bool) -> Result<Vec<GroupAutomorphism>> {
    let iota = GroupAutomorphism::inversion(group);
    Ok(stabilizing_automorphisms_capped(group, b, caps.aut)?
        .into_iter()
        .filter(|a| !a.is_identity() && !(drop_iota && *a == iota))
        .collect())
}

fn check_alpha(group: &AbelianGroup, b: &Subgroup, alpha: &GroupAutomorphism, undirected: bool) -> Result<()> {
    if alpha.is_identity() {
        return Err(Error::HypothesisViolated("alpha is the identity".into()));
    }
    if undirected && *alpha == GroupAutomorphism::inversion(group) {
        return Err(Error::HypothesisViolated("alpha is the inversion".into()));
    }
    if !alpha.fixes_set(b.members()) {
        return Err(Error::HypothesisViolated("alpha does not fix B".into()));
    }
    Ok(())
}

fn check_hk(group: &AbelianGroup, b: &Subgroup, h: &Subgroup, k: &Subgroup) -> Result<()> {
    let ok = h.order() > 1
        && h.members().is_subset(k.members())
        && k.order() < group.size()
        && h.members().is_subset(b.members());
    if ok {
        Ok(())
    } else {
        Err(Error::HypothesisViolated("need 1 < H ≤ K < A and H ≤ B".into()))
    }
}

fn hk_candidates(group: &AbelianGroup, b: &Subgroup) -> Vec<(Subgroup, Subgroup)> {
    let ks = prime_index_subgroups(group);
    let mut out = Vec::new();
    for h in prime_order_subgroups(group) {
        if !h.members().is_subset(b.members()) {
            continue;
        }
        for k in &ks {
            if h.members().is_subset(k.members()) {
                out.push((h.clone(), k.clone()));
            }
        }
    }
    out
}

/// Exponent of the number of sets `S ⊆ A∖B` with `S∖K` a union of `H`-cosets.
fn hk_free(group: &AbelianGroup, b: &Subgroup, h: &Subgroup, k: &Subgroup, undirected: bool) -> usize {
    let outside = b.members().complement();
    let inside_k = outside.intersection(k.members());
    let beyond_k = outside.difference(k.members());
    let hs: Vec<usize> = h.members().iter().collect();
    let neg = |a: usize| group.neg(a);
    let shifts: Vec<Box<dyn Fn(usize) -> usize + '_>> =
        hs.iter().map(|&x| Box::new(move |a: usize| group.add(a, x)) as Box<dyn Fn(usize) -> usize>).collect();
    let mut maps: Vec<&dyn Fn(usize) -> usize> = shifts.iter().map(|f| f.as_ref()).collect();
    if undirected {
        maps.push(&neg);
        orbit_count(&inside_k, &[&neg]) + orbit_count(&beyond_k, &maps)
    } else {
        inside_k.count() + orbit_count(&beyond_k, &maps)
    }
}

fn alpha_free(group: &AbelianGroup, b: &Subgroup, alpha: &GroupAutomorphism, undirected: bool) -> usize {
    let outside = b.members().complement();
    let f = |a: usize| alpha.apply(a);
    let neg = |a: usize| group.neg(a);
    if undirected {
        orbit_count(&outside, &[&f, &neg])
    } else {
        orbit_count(&outside, &[&f])
    }
}

/// Triples `(C, Z, S)` with `A = C × Z`, `S = S′ × S″ ⊆ A∖B`; distinct `S` per `(C, Z)`.
fn triple_count(group: &AbelianGroup, b: &Subgroup) -> Option<BigUint> {
    let n = group.size();
    let mut total = BigUint::zero();
    for (c, z) in cyclic_by_elementary_decompositions(group) {
        let zs: Vec<usize> = z.members().iter().collect();
        if zs.len() > 24 {
            return None;
        }
        let mut seen: HashSet<BitSet> = HashSet::new();
        for sp in [SPrime::Empty, SPrime::Identity, SPrime::Whole, SPrime::NonIdentity] {
            let first: Vec<usize> = sp.members(group, &c).iter().collect();
            for mask in 0u64..(1 << zs.len()) {
                let mut s = BitSet::new(n);
                for (i, &y) in zs.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        for &x in &first {
                            s.insert(group.add(x, y));
                        }
                    }
                }
                if s.is_disjoint(b.members()) {
                    seen.insert(s);
                }
            }
        }
        total += seen.len();
    }
    Some(total)
}

fn log2_of_pow2(m: u64) -> Option<u64> {
    m.is_power_of_two().then(|| m.trailing_zeros() as u64)
}

/// One lemma's upper bound on `(A, B)`, with the exact count when affordable.
pub fn lemma_bound(
    lemma: Lemma,
    group: &AbelianGroup,
    b: &Subgroup,
    params: &LemmaParams,
    caps: &Caps,
) -> Result<BoundReport> {
    check_index2(group, b)?;
    let m = group.size() as u64;
    let mi = m as i64;
    let half_a2 = Ratio::new(a2_outside(group, b) as i64, 2);
    let small = group.size() <= caps.exact;
    let max_pow2 = |frees: Vec<usize>| frees.into_iter().max().map(|e| pow2(e as u64));
    let (bound, exact) = match lemma {
        Lemma::A1Directed => {
            (Log2Bound::new(Ratio::new(mi, 4), 1, m), if small { a1_count(group, b, false) } else { None })
        }
        Lemma::A1Undirected => (
            Log2Bound::new(Ratio::new(mi, 8) + half_a2, 1, m),
            if small { a1_count(group, b, true) } else { None },
        ),
        Lemma::AlphaInvariant | Lemma::AlphaUndirected => {
            let undirected = lemma == Lemma::AlphaUndirected;
            if undirected {
                if group.exponent() <= 2 {
                    return Err(Error::HypothesisViolated("needs exponent greater than 2".into()));
                }
                if is_exceptional_pair(group, b).is_some() {
                    return Err(Error::HypothesisViolated("(A, B) is an exceptional pair".into()));
                }
            }
            let alphas = match &params.alpha {
                Some(a) => {
                    check_alpha(group, b, a, undirected)?;
                    vec![a.clone()]
                }
                None => alpha_candidates(group, b, caps, undirected)?,
            };
            let bound = if undirected {
                Log2Bound::new(Ratio::new(11 * mi, 48) + half_a2, 0, m)
            } else {
                Log2Bound::new(Ratio::new(3 * mi, 8), 0, m)
            };
            (bound, max_pow2(alphas.iter().map(|a| alpha_free(group, b, a, undirected)).collect()))
        }
        Lemma::HkCosets | Lemma::HkUndirected => {
            let undirected = lemma == Lemma::HkUndirected;
            if undirected && m.is_power_of_two() {
                return Err(Error::HypothesisViolated("|A| is a power of 2".into()));
            }
            let pairs = match &params.hk {
                Some((h, k)) => {
                    check_hk(group, b, h, k)?;
                    vec![(h.clone(), k.clone())]
                }
                None => hk_candidates(group, b),
            };
            let bound = if undirected {
                Log2Bound::new(Ratio::new(11 * mi, 48) + half_a2, 0, m)
            } else {
                Log2Bound::new(Ratio::new(3 * mi, 8), 0, m)
            };
            (bound, max_pow2(pairs.iter().map(|(h, k)| hk_free(group, b, h, k, undirected)).collect()))
        }
        Lemma::Triples => {
            (Log2Bound::new(Ratio::new(mi, 8) - 1, 2, m), if small { triple_count(group, b) } else { None })
        }
    };
    Ok(BoundReport::new(lemma.name(), group, Some(b), exact, bound))
}

/// Every lemma whose hypotheses hold on `(A, B)`.
pub fn all_lemma_bounds(group: &AbelianGroup, b: &Subgroup, caps: &Caps) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for lemma in Lemma::ALL {
        match lemma_bound(lemma, group, b, &LemmaParams::default(), caps) {
            Ok(r) => out.push(r),
            Err(Error::HypothesisViolated(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Sign of `(log₂ m)² - t`; never zero unless `m` is a power of two.
pub fn cmp_log2_squared(m: u64, t: &BigRational) -> Ordering {
    assert!(m >= 1);
    if let Some(e) = log2_of_pow2(m) {
        return BigRational::from_integer(BigInt::from(e * e)).cmp(t);
    }
    let mut x = BigUint::from(m);
    let mut k = 0u32;
    loop {
        x = &x * &x;
        k += 1;
        if k < 6 {
            continue;
        }
        let j = BigInt::from(x.bits() - 1);
        let den = BigInt::one() << k;
        let lo = BigRational::new(j.clone(), den.clone());
        let hi = BigRational::new(j + 1, den);
        if &(&hi * &hi) < t {
            return Ordering::Less;
        }
        if &(&lo * &lo) >= t {
            return Ordering::Greater;
        }
    }
}

/// `⌈(log₂ m)²⌉`.
pub fn ceil_log2_squared(m: u64) -> u64 {
    if let Some(e) = log2_of_pow2(m) {
        return e * e;
    }
    let l = (m as f64).log2();
    let mut r = (l * l).ceil() as u64;
    let int = |v: u64| BigRational::from_integer(BigInt::from(v));
    while cmp_log2_squared(m, &int(r)) == Ordering::Greater {
        r += 1;
    }
    while r > 0 && cmp_log2_squared(m, &int(r - 1)) == Ordering::Less {
        r -= 1;
    }
    r
}

/// `⌈2^(p/q)⌉` for `p/q ≥ 0`.
fn ceil_pow2_ratio(e: &Ratio<i64>) -> BigUint {
    let (p, q) = (*e.numer(), *e.denom());
    assert!(p >= 0 && q > 0);
    if q == 1 {
        return pow2(p as u64);
    }
    let x = pow2(p as u64);
    let r = x.nth_root(q as u32);
    if r.pow(q as u32) == x {
        r
    } else {
        r + 1u32
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowerBound {
    pub mode: Mode,
    #[serde(serialize_with = "ser_bigint")]
    pub value: BigInt,
    /// `⌈(log₂|A|)²⌉`, the rounding used in the subtracted term.
    pub log2_squared_ceil: u64,
}

fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// The theorem's lower bound on the number of connection sets with least
/// index, with every exponent in the subtracted term rounded up.
pub fn theorem_lower_bound(mode: Mode, group: &AbelianGroup, b: &Subgroup) -> Result<LowerBound> {
    check_index2(group, b)?;
    let m = group.size() as u64;
    let mi = m as i64;
    let l2 = ceil_log2_squared(m);
    let (plus, minus) = match mode {
        Mode::Directed => (pow2(m / 2), (BigUint::from(3u32) * ceil_pow2_ratio(&Ratio::new(3 * mi, 8))) << l2),
        Mode::Undirected => {
            let count = count_inverse_closed(group, b)?;
            let e = Ratio::new(11 * mi, 48) + Ratio::new(a2_outside(group, b) as i64, 2);
            (count.value, ceil_pow2_ratio(&e) << (l2 + 2))
        }
    };
    let value = BigInt::from_biguint(Sign::Plus, plus) - BigInt::from_biguint(Sign::Plus, minus);
    Ok(LowerBound { mode, value, log2_squared_ceil: l2 })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub mode: Mode,
    /// The value stated alongside the corollary.
    pub paper: u64,
    /// Least even `n` with the inequality true for every even `m ≥ n`.
    pub computed: u64,
    /// `a·n - 2 - (log₂ n)²` at the computed value.
    pub margin: f64,
}

fn threshold_slope(mode: Mode) -> Ratio<i64> {
    match mode {
        Mode::Directed => Ratio::new(1, 8),
        Mode::Undirected => Ratio::new(1, 48),
    }
}

/// `a·m - 2 > (log₂ m)²`, the inequality behind the corollary's threshold.
pub fn threshold_holds(mode: Mode, m: u64) -> bool {
    let a = threshold_slope(mode);
    let t = Ratio::new(*a.numer() * m as i64 - 2 * *a.denom(), *a.denom());
    if t <= Ratio::zero() {
        return false;
    }
    let tf = *t.numer() as f64 / *t.denom() as f64;
    let l = (m as f64).log2();
    let d = tf - l * l;
    if d.abs() > 1e-6 * tf.max(1.0) {
        return d > 0.0;
    }
    let tb = BigRational::new(BigInt::from(*t.numer()), BigInt::from(*t.denom()));
    cmp_log2_squared(m, &tb) == Ordering::Less
}

pub fn threshold_scan(mode: Mode) -> ThresholdReport {
    let a = threshold_slope(mode);
    let af = *a.numer() as f64 / *a.denom() as f64;
    let paper = match mode {
        Mode::Directed => 744,
        Mode::Undirected => 8214,
    };
    let mut last_fail = 0u64;
    let mut m = 2u64;
    loop {
        if !threshold_holds(mode, m) {
            last_fail = m;
        } else {
            // the slope a - 2·log₂(m)/(m·ln 2) only grows from here on
            let slope = af - 2.0 * (m as f64).log2() / (m as f64 * std::f64::consts::LN_2);
            if slope > 1e-9 {
                break;
            }
        }
        m += 2;
    }
    let computed = last_fail + 2;
    let l = (computed as f64).log2();
    ThresholdReport { mode, paper, computed, margin: af * computed as f64 - 2.0 - l * l }
}

/// `|Aut(A)| ≤ |A|^⌊log₂|A|⌋`, at most `|A|` subgroups of prime order and of
/// prime index, and `|Z∖Y| ≤ |A|/4` for proper `Z` and index-2 `Y`.
pub fn prelim_facts_check(group: &AbelianGroup) -> Result<Vec<BoundReport>> {
    let m = group.size() as u64;
    let floor_log = 63 - m.leading_zeros() as i64;
    let aut_order = aut_order(group);
    let mut out = vec![
        BoundReport::new("aut-order", group, None, Some(aut_order), Log2Bound::new(Ratio::zero(), floor_log, m)),
        BoundReport::new(
            "prime-order-subgroups",
            group,
            None,
            Some(BigUint::from(prime_order_subgroups(group).len())),
            Log2Bound::new(Ratio::zero(), 1, m),
        ),
        BoundReport::new(
            "prime-index-subgroups",
            group,
            None,
            Some(BigUint::from(prime_index_subgroups(group).len())),
            Log2Bound::new(Ratio::zero(), 1, m),
        ),
    ];
    // |Z∖Y| grows with Z, so the maximal subgroups attain the maximum
    let maximal = prime_index_subgroups(group);
    let worst = index2_subgroups(group)
        .iter()
        .flat_map(|y| maximal.iter().map(move |z| z.members().difference(y.members()).count()))
        .max();
    if let Some(w) = worst {
        out.push(BoundReport::new(
            "proper-minus-index2",
            group,
            None,
            Some(BigUint::from(w)),
            Log2Bound::new(Ratio::from_integer(-2), 1, m),
        ));
    }
    Ok(out)
}

impl std::fmt::Display for BoundReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let exact = self.exact.as_ref().map(|x| x.to_string()).unwrap_or_else(|| "-".into());
        write!(f, "{} [{} | {}]: exact {} vs 2^{:.4} -> {}", self.name, self.group, self.subgroup, exact, self.log2_bound, self.holds)
    }
}

/// A lower bound of zero or less says nothing.
pub fn is_vacuous(lb: &LowerBound) -> bool {
    !lb.value.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(orders: &[u64]) -> AbelianGroup {
        AbelianGroup::new(orders).unwrap()
    }

    #[test]
    fn log2_bound_exact_comparison() {
        let b = Log2Bound::new(Ratio::new(9, 4), 0, 6);
        assert!(b.admits(&BigUint::from(4u32)));
        assert!(!b.admits(&BigUint::from(5u32)));
        let b = Log2Bound::new(Ratio::new(3, 2), 1, 6);
        // 2^1.5 · 6 ≈ 16.97
        assert!(b.admits(&BigUint::from(16u32)));
        assert!(!b.admits(&BigUint::from(17u32)));
        let b = Log2Bound::new(Ratio::new(-1, 1), 2, 4);
        assert!(b.admits(&BigUint::from(8u32)) && !b.admits(&BigUint::from(9u32)));
    }

    #[test]
    fn inverse_closed_examples() {
        let a = g(&[4, 2]);
        let c = count_inverse_closed(&a, &a.involution_subgroup()).unwrap();
        assert_eq!((c.value, c.a2_in_b), (BigUint::from(4u32), true));
        let a = g(&[2, 4]);
        let b = a.generated_subgroup(&[a.encode(&[0, 1])]);
        assert_eq!(count_inverse_closed(&a, &b).unwrap().value, BigUint::from(8u32));
        let a = g(&[2, 2, 2, 2]);
        for b in index2_subgroups(&a) {
            assert_eq!(count_inverse_closed(&a, &b).unwrap().value, BigUint::from(256u32));
        }
    }

    #[test]
    fn lemma_examples() {
        let caps = Caps::default();
        let c6 = g(&[6]);
        let b = c6.generated_subgroup(&[2]);
        let iota = GroupAutomorphism::inversion(&c6);
        let r = lemma_bound(Lemma::AlphaInvariant, &c6, &b, &LemmaParams { alpha: Some(iota), hk: None }, &caps)
            .unwrap();
        assert_eq!(r.exact, Some(BigUint::from(4u32)));
        assert!((r.log2_bound - 2.25).abs() < 1e-12 && r.holds);
        let r = lemma_bound(Lemma::A1Directed, &c6, &b, &LemmaParams::default(), &caps).unwrap();
        // ∅ and {3} lie in proper subgroups; {1} and {5} generate A
        assert_eq!(r.exact, Some(BigUint::from(2u32)));
        assert!(r.holds);
        let r = lemma_bound(Lemma::Triples, &c6, &b, &LemmaParams::default(), &caps).unwrap();
        assert_eq!(r.exact, Some(BigUint::one()));
        assert!(matches!(
            lemma_bound(Lemma::HkUndirected, &g(&[4, 2]), &g(&[4, 2]).involution_subgroup(), &LemmaParams::default(), &caps),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn lower_bound_signs() {
        let a = g(&[2, 2, 2]);
        let b = &index2_subgroups(&a)[0];
        assert!(is_vacuous(&theorem_lower_bound(Mode::Directed, &a, b).unwrap()));
        let a = g(&[1024]);
        let b = &index2_subgroups(&a)[0];
        let lb = theorem_lower_bound(Mode::Directed, &a, b).unwrap();
        assert_eq!(lb.log2_squared_ceil, 100);
        let expect = (BigInt::one() << 512) - (BigInt::from(3) << 484);
        assert_eq!(lb.value, expect);
        let c6 = g(&[6]);
        let lb = theorem_lower_bound(Mode::Undirected, &c6, &c6.generated_subgroup(&[2])).unwrap();
        assert!(lb.value.is_negative());
    }

    #[test]
    fn log2_squared_brackets() {
        assert_eq!(ceil_log2_squared(1024), 100);
        assert_eq!(ceil_log2_squared(6), 7);
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        assert_eq!(cmp_log2_squared(744, &r(744 - 16, 8)), Ordering::Less);
        assert_eq!(cmp_log2_squared(742, &r(742 - 16, 8)), Ordering::Greater);
        for m in 3..200u64 {
            let l = (m as f64).log2();
            let ceil = ceil_log2_squared(m);
            assert!((ceil as f64) >= l * l && (ceil as f64) - 1.0 < l * l, "{m}");
        }
    }

    #[test]
    fn threshold_sanity() {
        assert!(!threshold_holds(Mode::Directed, 100));
        assert!(threshold_holds(Mode::Directed, 744));
        assert!(!threshold_holds(Mode::Directed, 742));
        let d = threshold_scan(Mode::Directed);
        assert_eq!((d.paper, d.computed), (744, 744));
        assert!(d.margin > 0.0 && d.margin < 0.01);
        let u = threshold_scan(Mode::Undirected);
        assert_eq!((u.paper, u.computed), (8214, 8214));
    }

    #[test]
    fn prelim_examples() {
        let r = prelim_facts_check(&g(&[2, 2, 2])).unwrap();
        assert_eq!(r[0].exact, Some(BigUint::from(168u32)));
        assert!(r.iter().all(|x| x.holds));
        let r = prelim_facts_check(&g(&[6])).unwrap();
        assert_eq!(r[1].exact, Some(BigUint::from(2u32)));
        let r = prelim_facts_check(&g(&[4, 2])).unwrap();
        assert_eq!(r[3].exact, Some(BigUint::from(2u32)));
    }

    #[test]
    fn csv_columns() {
        let caps = Caps::default();
        let c6 = g(&[6]);
        let reps = all_lemma_bounds(&c6, &c6.generated_subgroup(&[2]), &caps).unwrap();
        let mut buf = Vec::new();
        write_csv(&reps, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("name,group,subgroup,exact,log2_bound,holds\n"));
        assert!(text.contains("alpha-invariant,C6,2,4,2.25,true"));
    }
}
