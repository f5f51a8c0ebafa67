//! Fano-deformation rigidity of marked ADE diagrams from a fixed rule base,
//! with a replayable trace and recursive reduction through central fibers.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parabolic::MarkedDiagram;
use crate::root_system::{RootSystem, TypeLetter};

/// Environment variable bounding the shared verdict memo table.
pub const MEMO_ENV: &str = "FLAGRIG_MEMO_SIZE";
const DEFAULT_MEMO: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Rigid,
    NotRigid,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Degeneration {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
}

/// A marked pair and the subset `A` (1-based canonical node numbers) whose
/// fiber settles it; an empty subset records a pair no subset settles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub pair: [usize; 2],
    pub subset: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: String,
    pub citation: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
    pub children: Vec<Verdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub input: String,
    pub canonical_form: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degeneration: Option<Degeneration>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constraints: Vec<String>,
    pub trace: Vec<TraceStep>,
}

impl Verdict {
    pub fn rule(&self) -> &str {
        self.trace.first().map_or("", |s| s.rule.as_str())
    }

    /// Every rule id used anywhere in the trace tree.
    pub fn rules_used(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for s in &self.trace {
            out.insert(s.rule.clone());
            for c in &s.children {
                out.extend(c.rules_used());
            }
        }
        out
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.status, &self.degeneration) {
            (Status::NotRigid, Some(d)) => write!(f, "NotRigid({})", d.name),
            (s, _) => write!(f, "{s:?}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Product,
    Full,
    Pic1,
    A1n,
    A12m,
    A3Deg,
    D4Unk,
    A4Three,
    D5Four,
    Reduce,
    Submax,
    JConn,
    II3,
    Fallback,
}

/// Evaluation order. Reduction precedes the submaximal and structural rules
/// so that reducible diagrams are certified through their fibers.
pub const RULE_ORDER: [Rule; 14] = [
    Rule::Product,
    Rule::Full,
    Rule::Pic1,
    Rule::A1n,
    Rule::A12m,
    Rule::A3Deg,
    Rule::D4Unk,
    Rule::A4Three,
    Rule::D5Four,
    Rule::Reduce,
    Rule::Submax,
    Rule::JConn,
    Rule::II3,
    Rule::Fallback,
];

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::Product => "R-PRODUCT",
            Rule::Full => "R-FULL",
            Rule::Pic1 => "R-PIC1",
            Rule::A1n => "R-A1N",
            Rule::A12m => "R-A12M",
            Rule::A3Deg => "R-A3DEG",
            Rule::D4Unk => "R-D4UNK",
            Rule::A4Three => "R-A4-3",
            Rule::D5Four => "R-D5-4",
            Rule::Reduce => "R-REDUCE",
            Rule::Submax => "R-SUBMAX",
            Rule::JConn => "R-JCONN",
            Rule::II3 => "R-II3",
            Rule::Fallback => "FALLBACK",
        }
    }

    pub fn from_id(s: &str) -> Option<Rule> {
        RULE_ORDER.iter().copied().find(|r| r.id() == s)
    }

    pub fn citation(self) -> &'static str {
        match self {
            Rule::Product => "a Fano deformation of a product is a fibered product of deformations of the factors",
            Rule::Full => "complete flag manifolds G/B of semisimple groups are rigid under Fano deformation",
            Rule::Pic1 => "Picard number one spaces are rigid; the only exception is the line space of the 5-dimensional quadric, which is not of type ADE",
            Rule::A1n => "the point-hyperplane incidence variety F(1,n;C^(n+1)) is rigid under Fano deformation",
            Rule::A12m => "A_m/P with nodes 1, 2 and m marked (m >= 3) is rigid under Fano deformation",
            Rule::A3Deg => "F(1,2;C^4) is not rigid; its unique Fano degeneration is F^d(1,2;C^4)",
            Rule::D4Unk => "for F(1,2;Q^6) the fibers through the central node and one marked end node of any degeneration are F^d(1,2;C^4); existence of a degeneration is open",
            Rule::A4Three => "A4 with three marked nodes is rigid under Fano deformation",
            Rule::D5Four => "D5 with four marked nodes is rigid under Fano deformation",
            Rule::Reduce => "rigid if every pair of marked nodes lies in a marked subset A whose central fiber S^A is rigid",
            Rule::Submax => "Picard number rank-1 spaces are rigid except F(1,2;P^3) and F(1,2;Q^6)",
            Rule::JConn => "rigid when the unmarked nodes form a connected subdiagram avoiding all end nodes with at most one unmarked node pairing nontrivially with the trivalent node",
            Rule::II3 => "rigid when all end nodes are marked, every marked component has at least three nodes or contains an end node, and at most one unmarked node pairs nontrivially with the trivalent node",
            Rule::Fallback => "no rule in the knowledge base settles this diagram",
        }
    }
}

fn step(rule: Rule, witnesses: Vec<Witness>, children: Vec<Verdict>) -> TraceStep {
    TraceStep { rule: rule.id().into(), citation: rule.citation().into(), witnesses, children }
}

fn check_scope(md: &MarkedDiagram) -> Result<()> {
    for c in md.components() {
        if !c.type_letter().is_simply_laced() {
            return Err(Error::ScopeError(format!("{} is not of type A, D or E", c.name())));
        }
    }
    if md.marked().is_empty() {
        return Err(Error::EmptyMarking);
    }
    Ok(())
}

/// Canonical form with unmarked components (points) dropped.
pub fn canonical_form(md: &MarkedDiagram) -> MarkedDiagram {
    let c = md.canonical();
    if c.components().iter().enumerate().all(|(k, _)| !c.local_marks(k).is_empty()) {
        return c;
    }
    let mut comps: Vec<RootSystem> = Vec::new();
    let mut marks = Vec::new();
    let mut off = 0;
    for (k, comp) in c.components().iter().enumerate() {
        let local = c.local_marks(k);
        if local.is_empty() {
            continue;
        }
        marks.extend(local.iter().map(|m| m + off));
        off += comp.rank();
        comps.push(comp.clone());
    }
    MarkedDiagram::new(comps, marks).expect("nonempty marking")
}

/// Central fiber of the contraction attached to `subset`: components of the
/// subdiagram on unmarked nodes together with `subset` that meet `subset`,
/// marked at `subset`.
pub fn fiber_diagram(md: &MarkedDiagram, subset: &BTreeSet<usize>) -> Result<MarkedDiagram> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    for &a in subset {
        if a >= md.total_rank() {
            return Err(Error::UnknownNode(a));
        }
        if !md.is_marked(a) {
            return Err(Error::NotMarked(a));
        }
    }
    let nodes: BTreeSet<usize> = md.unmarked().union(subset).copied().collect();
    let kept: Vec<usize> = md
        .induced_components(&nodes)
        .into_iter()
        .filter(|comp| comp.iter().any(|n| subset.contains(n)))
        .flatten()
        .collect();
    if kept.len() == md.total_rank() {
        return Err(Error::SelfReference);
    }
    Ok(md.induced_diagram(&kept, subset)?.0)
}

struct Shape {
    t: TypeLetter,
    n: usize,
    marks: BTreeSet<usize>,
    ends: BTreeSet<usize>,
    trivalent: Option<usize>,
}

fn shape(c: &MarkedDiagram) -> Shape {
    let comp = &c.components()[0];
    let n = comp.rank();
    let degree = |i: usize| (0..n).filter(|&j| j != i && c.adjacent(i, j)).count();
    Shape {
        t: comp.type_letter(),
        n,
        marks: c.marked().clone(),
        ends: (0..n).filter(|&i| degree(i) <= 1).collect(),
        trivalent: (0..n).find(|&i| degree(i) == 3),
    }
}

fn set(xs: &[usize]) -> BTreeSet<usize> {
    xs.iter().copied().collect()
}

fn trivalent_count_ok(c: &MarkedDiagram, s: &Shape) -> bool {
    match s.trivalent {
        None => true,
        Some(t) => c.unmarked().iter().filter(|&&b| c.cartan(b, t) != 0).count() <= 1,
    }
}

/// Premise of a non-recursive rule on a canonical connected diagram.
fn premise(rule: Rule, c: &MarkedDiagram) -> bool {
    let s = shape(c);
    let k = s.marks.len();
    match rule {
        Rule::Full => k == s.n,
        Rule::Pic1 => k == 1,
        Rule::A1n => s.t == TypeLetter::A && s.n >= 2 && s.marks == set(&[0, s.n - 1]),
        Rule::A12m => {
            s.t == TypeLetter::A
                && s.n >= 3
                && (s.marks == set(&[0, 1, s.n - 1]) || s.marks == set(&[0, s.n - 2, s.n - 1]))
        }
        Rule::A3Deg => s.t == TypeLetter::A && s.n == 3 && (s.marks == set(&[0, 1]) || s.marks == set(&[1, 2])),
        Rule::D4Unk => s.t == TypeLetter::D && s.n == 4 && k == 3 && s.marks.contains(&1),
        Rule::A4Three => s.t == TypeLetter::A && s.n == 4 && k == 3,
        Rule::D5Four => s.t == TypeLetter::D && s.n == 5 && k == 4,
        Rule::Submax => k + 1 == s.n && !premise(Rule::A3Deg, c) && !premise(Rule::D4Unk, c),
        Rule::JConn => {
            let j = c.unmarked();
            !j.is_empty()
                && j.is_disjoint(&s.ends)
                && c.induced_components(&j).len() == 1
                && trivalent_count_ok(c, &s)
        }
        Rule::II3 => {
            s.ends.is_subset(&s.marks)
                && c
                    .induced_components(&s.marks)
                    .iter()
                    .all(|comp| comp.len() >= 3 || comp.iter().any(|x| s.ends.contains(x)))
                && trivalent_count_ok(c, &s)
        }
        Rule::Product | Rule::Reduce | Rule::Fallback => false,
    }
}

/// Every non-recursive rule whose premise holds on the canonical form of a
/// connected diagram, in evaluation order.
pub fn applicable_rules(md: &MarkedDiagram) -> Result<Vec<Rule>> {
    check_scope(md)?;
    let c = canonical_form(md);
    if c.components().len() > 1 {
        return Ok(vec![Rule::Product]);
    }
    Ok(RULE_ORDER.iter().copied().filter(|&r| premise(r, &c)).collect())
}

fn degeneration_for(rule: Rule) -> Option<Degeneration> {
    (rule == Rule::A3Deg).then(|| Degeneration { name: "F^d(1,2;C^4)".into(), model: Some("A3_DEG".into()) })
}

fn constraints_for(rule: Rule) -> Vec<String> {
    if rule == Rule::D4Unk {
        vec![
            "in any Fano degeneration, each fiber through the central node and one marked end node is isomorphic to F^d(1,2;C^4) (model A3_DEG)".into(),
        ]
    } else {
        vec![]
    }
}

fn status_for(rule: Rule) -> Status {
    match rule {
        Rule::A3Deg => Status::NotRigid,
        Rule::D4Unk | Rule::Fallback => Status::Undetermined,
        _ => Status::Rigid,
    }
}

/// Marked subsets containing `pair`, by size then lexicographically.
fn reduce_candidates(marks: &BTreeSet<usize>, a: usize, b: usize) -> Vec<BTreeSet<usize>> {
    let others: Vec<usize> = marks.iter().copied().filter(|&x| x != a && x != b).collect();
    let mut out: Vec<BTreeSet<usize>> = (0u64..1 << others.len())
        .map(|mask| {
            let mut s = set(&[a, b]);
            s.extend(others.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, x)| *x));
            s
        })
        .collect();
    out.sort_by(|x, y| (x.len(), x.iter().collect::<Vec<_>>()).cmp(&(y.len(), y.iter().collect::<Vec<_>>())));
    out
}

fn one_based(s: &BTreeSet<usize>) -> Vec<usize> {
    s.iter().map(|x| x + 1).collect()
}

fn product_status(children: &[Verdict]) -> Status {
    if children.iter().any(|c| c.status == Status::NotRigid) {
        Status::NotRigid
    } else if children.iter().any(|c| c.status == Status::Undetermined) {
        Status::Undetermined
    } else {
        Status::Rigid
    }
}

fn product_degeneration(children: &[Verdict]) -> Option<Degeneration> {
    if product_status(children) != Status::NotRigid {
        return None;
    }
    let parts: Vec<String> = children
        .iter()
        .map(|c| c.degeneration.as_ref().map_or(c.canonical_form.clone(), |d| d.name.clone()))
        .collect();
    Some(Degeneration { name: parts.join(" x "), model: None })
}

pub struct Classifier {
    memo: RwLock<HashMap<String, Verdict>>,
    capacity: usize,
}

impl Classifier {
    pub fn new(capacity: usize) -> Self {
        Classifier { memo: RwLock::new(HashMap::new()), capacity }
    }

    /// Capacity from the environment, falling back to a generous default.
    pub fn from_env() -> Self {
        let cap = std::env::var(MEMO_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_MEMO);
        Classifier::new(cap)
    }

    pub fn memo_len(&self) -> usize {
        self.memo.read().expect("memo lock").len()
    }

    pub fn classify(&self, md: &MarkedDiagram) -> Result<Verdict> {
        check_scope(md)?;
        let c = canonical_form(md);
        let mut v = self.classify_canonical(&c)?;
        v.input = md.to_string();
        Ok(v)
    }

    fn classify_canonical(&self, c: &MarkedDiagram) -> Result<Verdict> {
        let key = c.to_string();
        if let Some(v) = self.memo.read().expect("memo lock").get(&key) {
            return Ok(v.clone());
        }
        let v = self.evaluate(c)?;
        let mut memo = self.memo.write().expect("memo lock");
        if memo.len() < self.capacity {
            memo.entry(key).or_insert_with(|| v.clone());
        }
        Ok(v)
    }

    fn evaluate(&self, c: &MarkedDiagram) -> Result<Verdict> {
        let canonical_form = c.to_string();
        let finish = |rule: Rule, witnesses, children| Verdict {
            input: canonical_form.clone(),
            canonical_form: canonical_form.clone(),
            status: status_for(rule),
            degeneration: degeneration_for(rule),
            constraints: constraints_for(rule),
            trace: vec![step(rule, witnesses, children)],
        };
        if c.components().len() > 1 {
            let children = c.factors().iter().map(|f| self.classify(f)).collect::<Result<Vec<_>>>()?;
            return Ok(Verdict {
                input: canonical_form.clone(),
                canonical_form: canonical_form.clone(),
                status: product_status(&children),
                degeneration: product_degeneration(&children),
                constraints: children.iter().flat_map(|ch| ch.constraints.clone()).collect(),
                trace: vec![step(Rule::Product, vec![], children)],
            });
        }
        for &rule in &RULE_ORDER[1..9] {
            if premise(rule, c) {
                return Ok(finish(rule, vec![], vec![]));
            }
        }
        let failing = match self.reduce(c)? {
            Ok((witnesses, children)) => return Ok(finish(Rule::Reduce, witnesses, children)),
            Err(pair) => pair,
        };
        for rule in [Rule::Submax, Rule::JConn, Rule::II3] {
            if premise(rule, c) {
                return Ok(finish(rule, vec![], vec![]));
            }
        }
        let witnesses = failing.map(|p| vec![Witness { pair: p, subset: vec![] }]).unwrap_or_default();
        Ok(finish(Rule::Fallback, witnesses, vec![]))
    }

    /// On success, one witness and fiber verdict per marked pair. On failure,
    /// the first unsettled pair (none when fewer than two nodes are marked).
    #[allow(clippy::type_complexity)]
    fn reduce(&self, c: &MarkedDiagram) -> Result<std::result::Result<(Vec<Witness>, Vec<Verdict>), Option<[usize; 2]>>> {
        let marks = c.marked().clone();
        if marks.len() < 2 {
            return Ok(Err(None));
        }
        let list: Vec<usize> = marks.iter().copied().collect();
        let mut witnesses = Vec::new();
        let mut children = Vec::new();
        for (i, &a) in list.iter().enumerate() {
            for &b in &list[i + 1..] {
                let mut found = false;
                for subset in reduce_candidates(&marks, a, b) {
                    let fd = match fiber_diagram(c, &subset) {
                        Ok(fd) => fd,
                        Err(Error::SelfReference) => continue,
                        Err(e) => return Err(e),
                    };
                    let v = self.classify(&fd)?;
                    if v.status == Status::Rigid {
                        witnesses.push(Witness { pair: [a + 1, b + 1], subset: one_based(&subset) });
                        children.push(v);
                        found = true;
                        break;
                    }
                }
                if !found {
                    return Ok(Err(Some([a + 1, b + 1])));
                }
            }
        }
        Ok(Ok((witnesses, children)))
    }
}

fn shared() -> &'static Classifier {
    static SHARED: OnceLock<Classifier> = OnceLock::new();
    SHARED.get_or_init(Classifier::from_env)
}

/// Classifies through the process-wide memo table.
pub fn classify(md: &MarkedDiagram) -> Result<Verdict> {
    shared().classify(md)
}

fn violation(msg: String) -> Error {
    Error::InvariantViolation(msg)
}

/// Re-checks every rule application in `v` from its recorded premises and
/// returns the status the trace supports.
pub fn replay(v: &Verdict) -> Result<Status> {
    let md = MarkedDiagram::parse(&v.input)?;
    check_scope(&md)?;
    let c = canonical_form(&md);
    if c.to_string() != v.canonical_form {
        return Err(violation(format!("canonical form of {} is {c}, trace says {}", v.input, v.canonical_form)));
    }
    let [s] = v.trace.as_slice() else {
        return Err(violation(format!("trace of {} must hold exactly one step", v.input)));
    };
    let rule = Rule::from_id(&s.rule).ok_or_else(|| violation(format!("unknown rule {}", s.rule)))?;
    let status = match rule {
        Rule::Product => {
            let factors = c.factors();
            if factors.len() < 2 || factors.len() != s.children.len() {
                return Err(violation(format!("product premise fails for {c}")));
            }
            for (f, ch) in factors.iter().zip(&s.children) {
                if ch.input != f.to_string() {
                    return Err(violation(format!("factor {f} recorded as {}", ch.input)));
                }
                replay(ch)?;
            }
            product_status(&s.children)
        }
        Rule::Reduce => {
            if c.components().len() != 1 {
                return Err(violation(format!("reduction cited for product {c}")));
            }
            let marks: Vec<usize> = c.marked().iter().copied().collect();
            let pairs: Vec<[usize; 2]> = marks
                .iter()
                .enumerate()
                .flat_map(|(i, &a)| marks[i + 1..].iter().map(move |&b| [a + 1, b + 1]))
                .collect();
            let recorded: Vec<[usize; 2]> = s.witnesses.iter().map(|w| w.pair).collect();
            if pairs.is_empty() || pairs != recorded || s.children.len() != pairs.len() {
                return Err(violation(format!("reduction of {c} does not cover every marked pair")));
            }
            for (w, ch) in s.witnesses.iter().zip(&s.children) {
                let subset: BTreeSet<usize> = w.subset.iter().map(|x| x - 1).collect();
                if !(subset.contains(&(w.pair[0] - 1)) && subset.contains(&(w.pair[1] - 1))) {
                    return Err(violation(format!("subset {:?} misses pair {:?}", w.subset, w.pair)));
                }
                let fd = fiber_diagram(&c, &subset)?;
                if fd.to_string() != ch.input || fd.total_rank() >= c.total_rank() {
                    return Err(violation(format!("fiber of {c} at {:?} is {fd}, trace says {}", w.subset, ch.input)));
                }
                if replay(ch)? != Status::Rigid {
                    return Err(violation(format!("fiber {} is not rigid", ch.input)));
                }
            }
            Status::Rigid
        }
        Rule::Fallback => {
            if c.components().len() != 1 || RULE_ORDER[1..].iter().any(|&r| premise(r, &c)) {
                return Err(violation(format!("fallback recorded although a rule applies to {c}")));
            }
            Status::Undetermined
        }
        r => {
            if c.components().len() != 1 || !premise(r, &c) {
                return Err(violation(format!("premise of {} fails for {c}", r.id())));
            }
            status_for(r)
        }
    };
    if status != v.status {
        return Err(violation(format!("trace of {} replays to {status:?}, recorded {:?}", v.input, v.status)));
    }
    Ok(status)
}

/// All ADE diagrams of rank at most `max_rank` (A_n, D_n with n >= 4, E6-E8).
pub fn ade_types(max_rank: usize) -> Vec<(TypeLetter, usize)> {
    let mut out = Vec::new();
    for n in 1..=max_rank {
        out.push((TypeLetter::A, n));
        if n >= 4 {
            out.push((TypeLetter::D, n));
        }
        if (6..=8).contains(&n) {
            out.push((TypeLetter::E, n));
        }
    }
    out
}

/// Every nonempty marking of every ADE diagram up to `max_rank`.
pub fn all_markings(max_rank: usize) -> Vec<MarkedDiagram> {
    let mut out = Vec::new();
    for (t, n) in ade_types(max_rank) {
        for mask in 1u64..1 << n {
            let marks: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let rs = RootSystem::new(t, n).expect("valid type");
            out.push(MarkedDiagram::new(vec![rs], marks).expect("valid marking"));
        }
    }
    out
}
