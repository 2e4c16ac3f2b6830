//! Command-line front end. Each subcommand prints one report: a JSON object
//! `{config, result}`, or the same content flattened to CSV or text.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 budget, cap or
//! time limit reached, 4 a checked claim failed.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::aut::{
    aut_order, enumerate_automorphisms_capped, index2_subgroup_orbits, index2_subgroups, is_exceptional_pair,
    prime_index_subgroups, prime_order_subgroups, stabilizing_automorphisms_capped, ExceptionalFamily,
};
use crate::bounds::{
    all_lemma_bounds, is_vacuous, lemma_bound, prelim_facts_check, theorem_lower_bound, threshold_scan, Lemma,
    LemmaParams,
};
use crate::cayley::{build_cayley, ConnectionSet, Mode};
use crate::classify::{Classifier, Verdict};
use crate::config::{parse_count, Caps, ENV_VARS};
use crate::error::Error;
use crate::group::{parse_group_spec, AbelianGroup, Subgroup};
use crate::search::cycle_notation;
use crate::survey::{
    bipartite_index, c26, c26_candidate_count, c26_reduced_search, global_index, monte_carlo_proportion, table,
    unlabeled_count, verify_row, Admissible, C26Options, Method, RowStatus, TableRow, DEFAULT_SAMPLES,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;
pub const EXIT_FALSIFIED: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "bicayley", version, about = "Bipartite Cayley digraphs on finite abelian groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Global {
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Most connection sets a survey may examine, e.g. `1e6` or `2^24`.
    #[arg(long, global = true)]
    pub budget: Option<String>,
    /// Time limit per stabilizer search.
    #[arg(long, global = true)]
    pub timeout_ms: Option<u64>,
    /// Leave wall-clock times out of reports.
    #[arg(long, global = true)]
    pub no_timing: bool,
    /// No progress lines on standard error.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Pair {
    /// Group as cyclic factors, e.g. `C4xC2^3`.
    #[arg(long)]
    pub group: String,
    /// `index:k` for the k-th index-2 subgroup, or generators such as `2,0;0,1`.
    #[arg(long, default_value = "index:0")]
    pub subgroup: String,
    #[arg(long, default_value = "directed")]
    pub mode: Mode,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubgroupKind {
    Index2,
    PrimeOrder,
    PrimeIndex,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodName {
    Exhaustive,
    Random,
    Reduced,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Invariants of a group.
    GroupInfo {
        #[arg(long)]
        group: String,
    },
    /// Index-2, prime-order or prime-index subgroups.
    Subgroups {
        #[arg(long)]
        group: String,
        #[arg(long, value_enum, default_value = "index2")]
        kind: SubgroupKind,
    },
    /// Automorphism counts, optionally restricted to those fixing B and a set.
    Auts {
        #[arg(long)]
        group: String,
        #[arg(long)]
        subgroup: Option<String>,
        #[arg(long)]
        set: Option<String>,
        /// Print every counted automorphism by its basis images.
        #[arg(long)]
        list: bool,
    },
    /// Automorphism group and Cayley index of one Cayley digraph.
    Index {
        #[arg(long)]
        group: String,
        #[arg(long)]
        subgroup: Option<String>,
        /// Elements separated by `;` (by `,` in cyclic groups), `empty` or `all-minus-B`.
        #[arg(long)]
        set: String,
        #[arg(long, default_value = "directed")]
        mode: Mode,
    },
    /// Place a connection set in the classification, with its witness.
    Classify {
        #[command(flatten)]
        #[serde(flatten)]
        pair: Pair,
        #[arg(long, required_unless_present = "all")]
        set: Option<String>,
        /// Compare the verdict with the stabilizer search.
        #[arg(long)]
        cross_check: bool,
        /// Classify every admissible set.
        #[arg(long)]
        all: bool,
    },
    /// Lemma bounds, the theorem's lower bound, the size threshold or the
    /// preliminary counting facts.
    Bounds {
        #[arg(long, required_unless_present = "threshold")]
        group: Option<String>,
        #[arg(long, default_value = "index:0")]
        subgroup: String,
        #[arg(long, default_value = "directed")]
        mode: Mode,
        #[arg(long)]
        lemma: Option<String>,
        #[arg(long)]
        threshold: bool,
        #[arg(long)]
        prelim: bool,
    },
    /// Recompute one of the two tables of exceptional pairs.
    Table {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
        /// Also compute rows whose value the paper leaves open.
        #[arg(long)]
        include_open: bool,
    },
    /// Least Cayley index over admissible connection sets.
    Survey {
        #[command(flatten)]
        #[serde(flatten)]
        pair: Pair,
        #[arg(long, value_enum, default_value = "exhaustive")]
        method: MethodName,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Minimise over every index-2 subgroup.
        #[arg(long)]
        global: bool,
    },
    /// Proportion of random admissible sets with least index.
    Sample {
        #[command(flatten)]
        #[serde(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Isomorphism classes among the admissible Cayley digraphs.
    Unlabeled {
        #[command(flatten)]
        #[serde(flatten)]
        pair: Pair,
        /// List every class.
        #[arg(long)]
        classes: bool,
    },
    /// The reduced search for C2^6.
    C26 {
        /// Candidates to examine in this run; defaults to the budget.
        #[arg(long)]
        limit: Option<String>,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, requires = "checkpoint")]
        resume: bool,
        /// Only the orbit and candidate-count checks.
        #[arg(long)]
        orbits_only: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::GroupInfo { .. } => "group-info",
            Command::Subgroups { .. } => "subgroups",
            Command::Auts { .. } => "auts",
            Command::Index { .. } => "index",
            Command::Classify { .. } => "classify",
            Command::Bounds { .. } => "bounds",
            Command::Table { .. } => "table",
            Command::Survey { .. } => "survey",
            Command::Sample { .. } => "sample",
            Command::Unlabeled { .. } => "unlabeled",
            Command::C26 { .. } => "c26",
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Command::Table { .. } => Format::Csv,
            _ => Format::Json,
        }
    }
}

/// Element lists: `1,3,5` in a cyclic group, `1,0;0,1` or `(1,0),(0,1)`
/// otherwise. Coordinates may be negative and are reduced.
pub fn parse_elements(group: &AbelianGroup, input: &str) -> crate::Result<Vec<usize>> {
    let err = |pos: usize, msg: String| Error::Parse { pos, msg };
    let mut tokens: Vec<(usize, &str)> = Vec::new();
    if input.contains('(') {
        let mut rest = input;
        let mut base = 0;
        while let Some(open) = rest.find('(') {
            let between = &rest[..open];
            if !between.trim_matches(|c: char| c.is_whitespace() || c == ',' || c == ';').is_empty() {
                return Err(err(base, "text outside parentheses".into()));
            }
            let close = rest[open..].find(')').ok_or_else(|| err(base + open, "unclosed '('".into()))? + open;
            tokens.push((base + open + 1, &rest[open + 1..close]));
            base += close + 1;
            rest = &rest[close + 1..];
        }
        if !rest.trim_matches(|c: char| c.is_whitespace() || c == ',' || c == ';').is_empty() {
            return Err(err(base, "text outside parentheses".into()));
        }
    } else {
        let seps: &[char] = if group.rank() == 1 { &[',', ';'] } else { &[';'] };
        let mut start = 0;
        for (i, c) in input.char_indices() {
            if seps.contains(&c) {
                tokens.push((start, &input[start..i]));
                start = i + 1;
            }
        }
        tokens.push((start, &input[start..]));
    }
    let mut out = Vec::new();
    for (pos, tok) in tokens {
        let mut coords = Vec::new();
        let mut start = 0;
        for part in tok.split(',') {
            let lead = part.len() - part.trim_start().len();
            let t = part.trim();
            let v: i64 = t.parse().map_err(|_| err(pos + start + lead, format!("expected an integer, found {t:?}")))?;
            coords.push(v);
            start += part.len() + 1;
        }
        if coords.len() != group.rank() {
            return Err(err(pos, format!("element has {} coordinates, the group has rank {}", coords.len(), group.rank())));
        }
        let reduced: Vec<u64> =
            coords.iter().zip(group.orders()).map(|(&c, &n)| c.rem_euclid(n as i64) as u64).collect();
        out.push(group.encode(&reduced));
    }
    Ok(out)
}

/// `index:k` (character order) or a generating list.
pub fn parse_subgroup(group: &AbelianGroup, input: &str) -> crate::Result<Subgroup> {
    if let Some(k) = input.trim().strip_prefix("index:") {
        let subs = index2_subgroups(group);
        let k: usize = k.trim().parse().map_err(|_| Error::Parse { pos: 6, msg: "expected an index".into() })?;
        return subs.get(k).cloned().ok_or_else(|| {
            Error::BadSubgroup(format!("index:{k} requested but there are {} index-2 subgroups", subs.len()))
        });
    }
    Ok(group.generated_subgroup(&parse_elements(group, input)?))
}

/// `empty`, `all-minus-B`, or an element list.
pub fn parse_set(group: &AbelianGroup, b: Option<&Subgroup>, input: &str) -> crate::Result<ConnectionSet> {
    let t = input.trim();
    if t.is_empty() || t.eq_ignore_ascii_case("empty") {
        return Ok(ConnectionSet::empty(group));
    }
    if t.eq_ignore_ascii_case("all-minus-b") {
        let b = b.ok_or_else(|| Error::BadParameter("all-minus-B needs --subgroup".into()))?;
        return Ok(ConnectionSet::complement_of(group, b));
    }
    ConnectionSet::from_elements(group, parse_elements(group, input)?)
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SizeCapExceeded { .. } | Error::CapExceeded { .. } | Error::Timeout | Error::BudgetExceeded { .. } => {
                EXIT_LIMIT
            }
            Error::Io(_) => EXIT_IO,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn located<'a>(flag: &'a str, input: &'a str) -> impl Fn(Error) -> Failure + 'a {
    move |e| match e {
        Error::Parse { pos, msg } => Failure {
            code: EXIT_USAGE,
            message: format!("invalid --{flag}: {msg}\n  {input}\n  {}^", " ".repeat(pos.min(input.len()))),
        },
        other => other.into(),
    }
}

struct Report {
    result: Value,
    falsified: bool,
    /// Partial result printed before a limit exit.
    incomplete: Option<String>,
}

impl Report {
    fn ok(result: Value) -> Self {
        Report { result, falsified: false, incomplete: None }
    }
}

struct Ctx<'a> {
    caps: Caps,
    global: &'a Global,
    err: &'a mut (dyn Write + Send),
}

impl Ctx<'_> {
    fn group(&self, spec: &str) -> Result<AbelianGroup, Failure> {
        let orders = parse_group_spec(spec).map_err(located("group", spec))?;
        Ok(AbelianGroup::with_cap(&orders, self.caps.group)?)
    }

    fn progress(&mut self, line: &str) {
        if !self.global.quiet {
            let _ = writeln!(self.err, "{line}");
        }
    }
}

fn subgroup(group: &AbelianGroup, spec: &str) -> Result<Subgroup, Failure> {
    parse_subgroup(group, spec).map_err(located("subgroup", spec))
}

fn set(group: &AbelianGroup, b: Option<&Subgroup>, spec: &str) -> Result<ConnectionSet, Failure> {
    parse_set(group, b, spec).map_err(located("set", spec))
}

fn big(v: &BigUint) -> Value {
    match v.to_u64() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

fn strings<T: ToString>(items: impl IntoIterator<Item = T>) -> Vec<String> {
    items.into_iter().map(|x| x.to_string()).collect()
}

fn family(f: &ExceptionalFamily) -> String {
    match f {
        ExceptionalFamily::C4TimesElementary { ell } => format!("C4xC2^{ell} over C2^{}", ell + 1),
        ExceptionalFamily::C4SquaredTimesElementary { ell } => format!("C4^2xC2^{ell} over C4xC2^{}", ell + 1),
    }
}

fn basis_images(group: &AbelianGroup, alpha: &crate::aut::GroupAutomorphism) -> Vec<String> {
    strings((0..group.rank()).map(|i| group.element(alpha.apply(group.basis_element(i)))))
}

fn dispatch(cmd: &Command, ctx: &mut Ctx) -> Result<Report, Failure> {
    let caps = ctx.caps.clone();
    match cmd {
        Command::GroupInfo { group } => {
            let g = ctx.group(group)?;
            let involutions = (0..g.size()).filter(|&a| g.add(a, a) == 0).count();
            Ok(Report::ok(json!({
                "group": g.spec(),
                "invariant_factors": g.iso_type().0,
                "size": g.size(),
                "rank": g.rank(),
                "exponent": g.exponent(),
                "two_group": g.is_two_group(),
                "elements_of_order_at_most_2": involutions,
                "index2_subgroups": index2_subgroups(&g).len(),
                "aut_order": big(&aut_order(&g)),
            })))
        }
        Command::Subgroups { group, kind } => {
            let g = ctx.group(group)?;
            let row = |k: usize, s: &Subgroup| {
                json!({"k": k, "generators": s.spec(&g), "order": s.order(), "type": s.iso_type(&g).to_string()})
            };
            let rows: Vec<Value> = match kind {
                SubgroupKind::Index2 => {
                    let subs = index2_subgroups(&g);
                    let orbits = index2_subgroup_orbits(&g, caps.aut).ok();
                    subs.iter()
                        .enumerate()
                        .map(|(k, s)| {
                            let mut r = row(k, s);
                            r["exceptional"] = is_exceptional_pair(&g, s).map(|f| family(&f)).into();
                            r["aut_class"] =
                                orbits.as_ref().and_then(|o| o.iter().position(|orb| orb.contains(&k))).into();
                            r
                        })
                        .collect()
                }
                SubgroupKind::PrimeOrder => prime_order_subgroups(&g).iter().enumerate().map(|(k, s)| row(k, s)).collect(),
                SubgroupKind::PrimeIndex => prime_index_subgroups(&g).iter().enumerate().map(|(k, s)| row(k, s)).collect(),
            };
            Ok(Report::ok(json!({"group": g.spec(), "kind": kind, "rows": rows})))
        }
        Command::Auts { group, subgroup: sub, set: s, list } => {
            let g = ctx.group(group)?;
            let b = sub.as_deref().map(|x| subgroup(&g, x)).transpose()?;
            let conn = s.as_deref().map(|x| set(&g, b.as_ref(), x)).transpose()?;
            let mut result = json!({"group": g.spec(), "aut_order": big(&aut_order(&g)), "inversion_trivial": g.exponent() <= 2});
            let mut selected = None;
            if let Some(b) = &b {
                let stab = stabilizing_automorphisms_capped(&g, b, caps.aut)?;
                result["subgroup"] = json!(b.spec(&g));
                result["stabilizing_subgroup"] = json!(stab.len());
                selected = Some(stab);
            }
            if let Some(conn) = &conn {
                let pool = match selected.take() {
                    Some(v) => v,
                    None => enumerate_automorphisms_capped(&g, caps.aut)?.collect(),
                };
                let fixing: Vec<_> = pool.into_iter().filter(|a| a.fixes_set(conn.bits())).collect();
                result["set"] = json!(strings(conn.elements(&g)));
                result["fixing_set"] = json!(fixing.len());
                selected = Some(fixing);
            }
            if *list {
                let all = match selected {
                    Some(v) => v,
                    None => enumerate_automorphisms_capped(&g, caps.aut)?.collect(),
                };
                result["automorphisms"] = json!(all.iter().map(|a| basis_images(&g, a)).collect::<Vec<_>>());
            }
            Ok(Report::ok(result))
        }
        Command::Index { group, subgroup: sub, set: s, mode } => {
            let g = ctx.group(group)?;
            let b = sub.as_deref().map(|x| subgroup(&g, x)).transpose()?;
            let conn = set(&g, b.as_ref(), s)?;
            if let Some(b) = &b {
                if !conn.avoids(b) {
                    return Err(Error::SetNotAvoidingB.into());
                }
            }
            if *mode == Mode::Undirected && !conn.is_inverse_closed() {
                return Err(Error::NotInverseClosed.into());
            }
            let start = Instant::now();
            let cay = build_cayley(&g, &conn);
            let rep = cay.aut_report(&caps)?;
            let target = mode.target_index(&g);
            let mut result = json!({
                "group": g.spec(),
                "subgroup": b.as_ref().map(|b| b.spec(&g)),
                "mode": mode,
                "connection_set": strings(conn.elements(&g)),
                "stabilizer_order": big(&rep.stabilizer_order),
                "cayley_index": big(&rep.cayley_index),
                "aut_order": big(&rep.full_order),
                "is_drr": rep.cayley_index == BigUint::from(1u8),
                "is_graph": cay.is_graph(),
                "connected": cay.is_connected(),
                "target_index": target,
                "least_possible": rep.cayley_index == BigUint::from(target),
                "generators": rep.generators.iter().map(|p| cycle_notation(p)).collect::<Vec<_>>(),
            });
            if !ctx.global.no_timing {
                result["elapsed_ms"] = json!(start.elapsed().as_millis() as u64);
            }
            Ok(Report::ok(result))
        }
        Command::Classify { pair, set: s, cross_check, all } => {
            let g = ctx.group(&pair.group)?;
            let b = subgroup(&g, &pair.subgroup)?;
            let classifier = Classifier::new(&g, &b, pair.mode, &caps)?;
            let head = json!({"group": g.spec(), "subgroup": b.spec(&g)});
            if !*all {
                let conn = set(&g, Some(&b), s.as_deref().unwrap_or(""))?;
                let c = classifier.classify(&conn)?;
                let cc = if *cross_check { Some(c.cross_check(&g, &conn, &caps)?) } else { None };
                let sound = c.verify(&g, &b, &conn) && cc.as_ref().is_none_or(|x| x.consistent);
                let mut v = c.to_json(&g, cc.as_ref());
                v["set"] = json!(strings(conn.elements(&g)));
                let mut result = head;
                result.as_object_mut().unwrap().extend(v.as_object().unwrap().clone());
                return Ok(Report { result, falsified: !sound, incomplete: None });
            }
            let adm = Admissible::new(&g, &b, pair.mode)?;
            if adm.count() > caps.budget as u128 {
                return Err(Error::BudgetExceeded { needed: adm.count(), budget: caps.budget as u128 }.into());
            }
            let mut counts: Vec<(Verdict, u64)> = Vec::new();
            let mut violations = Vec::new();
            for code in 0..adm.count() as u64 {
                let conn = adm.set(&g, code);
                let c = classifier.classify(&conn)?;
                let mut bad = !c.verify(&g, &b, &conn);
                if *cross_check && !bad {
                    bad = !c.cross_check(&g, &conn, &caps)?.consistent;
                }
                if bad {
                    violations.push(strings(conn.elements(&g)));
                }
                match counts.iter_mut().find(|(v, _)| *v == c.verdict) {
                    Some(e) => e.1 += 1,
                    None => counts.push((c.verdict, 1)),
                }
            }
            counts.sort_by_key(|(v, _)| *v);
            let mut result = head;
            result["mode"] = json!(pair.mode);
            result["sets"] = json!(adm.count() as u64);
            result["cross_checked"] = json!(cross_check);
            result["verdicts"] = Value::Object(counts.iter().map(|(v, n)| (v.to_string(), json!(n))).collect());
            result["violations"] = json!(violations);
            Ok(Report { falsified: !violations.is_empty(), result, incomplete: None })
        }
        Command::Bounds { group, subgroup: sub, mode, lemma, threshold, prelim } => {
            if *threshold {
                let rows: Vec<Value> = [Mode::Directed, Mode::Undirected]
                    .into_iter()
                    .map(|m| serde_json::to_value(threshold_scan(m)).expect("plain fields"))
                    .collect();
                return Ok(Report::ok(json!({"rows": rows})));
            }
            let g = ctx.group(group.as_deref().expect("clap requires --group"))?;
            let reports = if *prelim {
                prelim_facts_check(&g)?
            } else {
                let b = subgroup(&g, sub)?;
                match lemma {
                    Some(name) => {
                        let l: Lemma = name.parse()?;
                        vec![lemma_bound(l, &g, &b, &LemmaParams::default(), &caps)?]
                    }
                    None => all_lemma_bounds(&g, &b, &caps)?,
                }
            };
            let falsified = reports.iter().any(|r| !r.holds);
            let mut result = json!({"group": g.spec(), "rows": serde_json::to_value(&reports).expect("plain fields")});
            if !*prelim && lemma.is_none() {
                let b = subgroup(&g, sub)?;
                let lb = theorem_lower_bound(*mode, &g, &b)?;
                result["lower_bound"] = serde_json::to_value(&lb).expect("plain fields");
                result["lower_bound"]["vacuous"] = json!(is_vacuous(&lb));
            }
            Ok(Report { result, falsified, incomplete: None })
        }
        Command::Table { which, include_open } => {
            let rows = table(*which)?;
            let mut out = Vec::new();
            for (i, r) in rows.iter().enumerate() {
                let (a, b) = r.label();
                ctx.progress(&format!("table {which} row {}/{}: {a} over {b}", i + 1, rows.len()));
                out.push(verify_row(*which, r, &caps, *include_open)?);
            }
            let falsified = out.iter().any(|r| r.status == RowStatus::Mismatch.name());
            let mode = TableRow::mode(*which);
            Ok(Report {
                result: json!({"table": which, "mode": mode, "rows": serde_json::to_value(&out).expect("plain fields")}),
                falsified,
                incomplete: None,
            })
        }
        Command::Survey { pair, method, samples, seed, global } => {
            let g = ctx.group(&pair.group)?;
            if *global {
                let r = global_index(&g, pair.mode, &caps)?;
                let per: Vec<Value> = r.per_subgroup.iter().map(|x| x.to_json(&g)).collect();
                return Ok(Report::ok(json!({"group": g.spec(), "mode": pair.mode, "min_index": r.min_index, "per_subgroup": per})));
            }
            let b = subgroup(&g, &pair.subgroup)?;
            let m = match method {
                MethodName::Exhaustive => Method::Exhaustive,
                MethodName::Random => Method::Random { samples: *samples, seed: *seed },
                MethodName::Reduced => Method::Reduced,
            };
            let r = bipartite_index(&g, &b, pair.mode, &m, &caps)?;
            Ok(Report::ok(r.to_json(&g)))
        }
        Command::Sample { pair, samples, seed } => {
            let g = ctx.group(&pair.group)?;
            let b = subgroup(&g, &pair.subgroup)?;
            let est = monte_carlo_proportion(&g, &b, pair.mode, *samples, *seed, &caps)?;
            let mut result = json!({"group": g.spec(), "subgroup": b.spec(&g), "mode": pair.mode});
            result.as_object_mut().unwrap().extend(serde_json::to_value(&est).expect("plain fields").as_object().unwrap().clone());
            Ok(Report::ok(result))
        }
        Command::Unlabeled { pair, classes } => {
            let g = ctx.group(&pair.group)?;
            let b = subgroup(&g, &pair.subgroup)?;
            let u = unlabeled_count(&g, &b, pair.mode, &caps)?;
            let mut result = json!({
                "group": g.spec(),
                "subgroup": b.spec(&g),
                "mode": pair.mode,
                "total_sets": u.total_sets,
                "total_classes": u.total_classes,
                "min_index_classes": u.min_index_classes,
                "min_index_sets": u.min_index_sets,
                "aut_order": u.aut_order,
                "consistent": u.consistent(),
            });
            if *classes {
                result["classes"] = json!(u
                    .classes
                    .iter()
                    .map(|c| json!({"canonical": c.canonical_hex, "sets": c.sets, "indices": strings(&c.indices)}))
                    .collect::<Vec<_>>());
            }
            Ok(Report { falsified: !u.consistent(), result, incomplete: None })
        }
        Command::C26 { limit, checkpoint, resume, orbits_only } => {
            let g = AbelianGroup::elementary2(6)?;
            let orbit = c26::c26_orbit_check(&g);
            let count = c26_candidate_count();
            let mut result = json!({
                "group": g.spec(),
                "subgroup": c26::even_hyperplane(&g).spec(&g),
                "orbit_check": serde_json::to_value(&orbit).expect("plain fields"),
                "orbit_check_pass": orbit.pass(),
                "candidate_count": count,
                "disconnected_bound": big(&c26::disconnected_lower_bound()),
                "basis_only_bound": 720,
            });
            let mut falsified = !orbit.pass() || count != 7_701_512;
            if *orbits_only {
                return Ok(Report { result, falsified, incomplete: None });
            }
            let limit = match limit {
                Some(l) => parse_count(l).map_err(located("limit", l))?,
                None => caps.budget,
            };
            let quiet = ctx.global.quiet;
            let opts = C26Options {
                caps: caps.clone(),
                limit,
                checkpoint: checkpoint.clone(),
                resume: *resume,
                progress: (!quiet).then(|| {
                    Box::new(|rec: &c26::CheckpointRecord, total: u64| {
                        eprintln!("c26: {}/{} best {:?}", rec.cursor, total, rec.best_index);
                    }) as Box<c26::Progress>
                }),
            };
            let r = c26_reduced_search(&g, &opts)?;
            result["examined"] = json!(r.examined);
            result["complete"] = json!(r.complete);
            result["resumed_from"] = json!(r.resumed_from);
            result["best_index"] = json!(r.best_index);
            result["best_set"] = json!(r.best_set.as_ref().map(|s| strings(s.elements(&g))));
            result["min_index"] = json!(r.min_index());
            if r.complete && r.min_index() != Some(4) {
                falsified = true;
            }
            let incomplete = (!r.complete).then(|| format!("examined {} of {} candidates", r.examined, r.total));
            Ok(Report { result, falsified, incomplete })
        }
    }
}

fn config_header(cmd: &Command, global: &Global, caps: &Caps, threads: usize) -> Value {
    let env: Map<String, Value> =
        ENV_VARS.iter().filter_map(|k| std::env::var(k).ok().map(|v| (k.to_string(), json!(v)))).collect();
    json!({
        "tool": "bicayley",
        "version": env!("CARGO_PKG_VERSION"),
        "invocation": serde_json::to_value(cmd).expect("plain fields"),
        "threads": threads,
        "timing": !global.no_timing,
        "caps": serde_json::to_value(caps).expect("plain fields"),
        "env": env,
    })
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(xs) => xs.iter().map(scalar).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(xs) if xs.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), x, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

/// Rows of a result: its `rows` array if present, else the result itself.
fn rows_of(result: &Value) -> Vec<Vec<(String, String)>> {
    let flat = |v: &Value| {
        let mut out = Vec::new();
        flatten("", v, &mut out);
        out
    };
    match result.get("rows").and_then(Value::as_array) {
        Some(rows) => rows.iter().map(flat).collect(),
        None => vec![flat(result)],
    }
}

fn render(format: Format, config: &Value, result: &Value, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Json => {
            let doc = json!({"config": config, "result": result});
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serialisable"))
        }
        Format::Csv => {
            writeln!(out, "# config: {config}")?;
            let rows = rows_of(result);
            let mut w = csv::Writer::from_writer(Vec::new());
            if let Some(first) = rows.first() {
                w.write_record(first.iter().map(|(k, _)| k.as_str()))?;
            }
            for r in &rows {
                w.write_record(r.iter().map(|(_, v)| v.as_str()))?;
            }
            out.write_all(&w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?)
        }
        Format::Text => {
            let mut head = Vec::new();
            flatten("config", config, &mut head);
            for (k, v) in head {
                writeln!(out, "# {k}: {v}")?;
            }
            for (i, r) in rows_of(result).iter().enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                for (k, v) in r {
                    writeln!(out, "{k}: {v}")?;
                }
            }
            Ok(())
        }
    }
}

/// Parse `args` (program name first), run the subcommand and write its
/// report to `out`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let help = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let sink: &mut dyn Write = if help { out } else { err };
            let _ = write!(sink, "{e}");
            return if help { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let fail = |err: &mut dyn Write, f: Failure| {
        let _ = writeln!(err, "error: {}", f.message);
        f.code
    };
    let mut caps = match Caps::from_env() {
        Ok(c) => c,
        Err(e) => return fail(err, e.into()),
    };
    if let Some(b) = &cli.global.budget {
        match parse_count(b) {
            Ok(v) => caps.budget = v,
            Err(e) => return fail(err, located("budget", b)(e)),
        }
    }
    if let Some(t) = cli.global.timeout_ms {
        caps.timeout_ms = Some(t);
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.global.threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => return fail(err, Failure { code: EXIT_USAGE, message: e.to_string() }),
    };
    let config = config_header(&cli.command, &cli.global, &caps, pool.current_num_threads());
    let format = cli.global.format.unwrap_or_else(|| cli.command.default_format());
    let report = {
        let mut ctx = Ctx { caps, global: &cli.global, err: &mut *err };
        pool.install(|| dispatch(&cli.command, &mut ctx))
    };
    match report {
        Err(f) => fail(err, f),
        Ok(rep) => {
            if render(format, &config, &rep.result, out).and_then(|_| out.flush()).is_err() {
                return EXIT_IO;
            }
            if let Some(msg) = rep.incomplete {
                let _ = writeln!(err, "limit reached: {msg}");
                return EXIT_LIMIT;
            }
            if rep.falsified {
                let _ = writeln!(err, "{}: a checked claim failed; see the report", cli.command.name());
                return EXIT_FALSIFIED;
            }
            EXIT_OK
        }
    }
}
