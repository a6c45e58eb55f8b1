//! Realizability decisions with spectrally verified certificates.
//!
//! [`Realizer::decide`] dispatches on the shape of a descriptor: necessary
//! conditions first (trace parity, index restrictions, mod-4 lists), then
//! construction branches whose sub-targets are decided recursively. Sub-targets
//! the constructions do not cover are resolved by exhaustive search within the
//! budget. Every certificate is evaluated and its spectrum compared exactly
//! before it is returned.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use thiserror::Error;

use crate::cert::{base, complement, empty, join, k1, oracle, union, ConstructionExpr};
use crate::descriptor::{DoubledMissingPair, SetDescriptor, SingleMissing};
use crate::enumerate::{DEFAULT_BUDGET, MAX_ENUMERATION_ORDER};
use crate::error::{DescriptorError, SearchError};
use crate::graph::{Graph, GraphFamily};
use crate::search::{find_realizers, is_prime};
use crate::spectra::{has_spectrum, SpectrumMultiset};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub expr: ConstructionExpr,
    /// The evaluated graph, whose spectrum has been checked.
    pub graph: Graph,
    pub spectrum: SpectrumMultiset,
    /// Other branches that also verified.
    pub alternates: Vec<ConstructionExpr>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reason {
    /// The trace `2|E|` would be odd, or `i + j` and `m` have the wrong
    /// relative parity for `n mod 4`.
    TraceParity,
    /// Orders up to 5 with `m` in `{1, 2}`.
    SmallOrderCensus,
    /// `m = 1` forces `j = n - 1` or `j = n`.
    MOneRequiresPenultimate,
    /// `S{i,n}n^1` needs `n >= 9`.
    MOneLastBelowNine,
    /// `S{i,n}n^m` with `n` prime.
    PrimeOrder,
    /// `S{i,n-1}n^1` outside the mod-4 list.
    MOneList,
    /// `m = 2` with `i > 1` forces `j > n - 3`.
    MTwoRequiresLargeJ,
    /// `S{i,n-2}n^2` outside the mod-4 list.
    MTwoList,
    /// `S{i,n-1}n^2` needs `i = n-3` (`n ≡ 0, 3`) or `i = n-2` (`n ≡ 1, 2`).
    MTwoPenultimateList,
    /// `m = n - 1` forces `i` in `{1, 2}`.
    NMinusOneFirstIndex,
    /// `S{1,j}n^{n-1}` needs `j = 2` (`n ≡ 0, 1`) or `j = 3` (`n ≡ 2, 3`).
    NMinusOneList,
    /// `m = n` forces `i = 1`.
    DoubleOrderRequiresOne,
    /// The descriptor is realizable iff `target` is.
    Reduction { target: SetDescriptor, reason: Box<Reason> },
    /// Every construction of a characterization fails.
    NoBranch(Vec<(SetDescriptor, Reason)>),
    /// No connected graph of this order has the spectrum.
    ExhaustiveSearch { order: usize },
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::TraceParity => f.write_str("trace parity"),
            Reason::SmallOrderCensus => f.write_str("census of orders up to 5"),
            Reason::MOneRequiresPenultimate => f.write_str("m=1 requires j=n-1"),
            Reason::MOneLastBelowNine => f.write_str("S{i,n}n^1 requires n>=9"),
            Reason::PrimeOrder => f.write_str("j=n with n prime"),
            Reason::MOneList => f.write_str("m=1 mod-4 list"),
            Reason::MTwoRequiresLargeJ => f.write_str("m=2 with i>1 requires j>n-3"),
            Reason::MTwoList => f.write_str("m=2, j=n-2 mod-4 list"),
            Reason::MTwoPenultimateList => f.write_str("m=2, j=n-1 requires i=n-3 or i=n-2 by n mod 4"),
            Reason::NMinusOneFirstIndex => f.write_str("m=n-1 requires i in {1,2}"),
            Reason::NMinusOneList => f.write_str("m=n-1, i=1 requires j=2 or j=3 by n mod 4"),
            Reason::DoubleOrderRequiresOne => f.write_str("m=n requires i=1"),
            Reason::Reduction { target, reason } => write!(f, "reduces to {target}: {reason}"),
            Reason::NoBranch(failures) => {
                f.write_str("no construction applies")?;
                for (k, (d, r)) in failures.iter().enumerate() {
                    write!(f, "{} {d}: {r}", if k == 0 { ":" } else { ";" })?;
                }
                Ok(())
            }
            Reason::ExhaustiveSearch { order } => write!(f, "exhaustive search at order {order}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnknownTag {
    /// `S{i,n}n^1`, conjectured empty.
    SinDoubleOne,
    /// `S{1,j}n^2` for `n >= 6`, conjectured empty.
    S1jDoubleTwo,
    /// `S{i,n}n^m` for `m >= 2`, conjectured empty.
    SinDoubleM,
    /// `S{n}n`, conjectured empty.
    Snn,
    /// A shape no implemented characterization covers.
    Uncovered,
    /// Listed as realizable, but every construction branch is unresolved.
    BranchExhausted,
}

impl fmt::Display for UnknownTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnknownTag::SinDoubleOne => "S_i_n_double1",
            UnknownTag::S1jDoubleTwo => "S_1j_double2",
            UnknownTag::SinDoubleM => "S_i_n_doublem",
            UnknownTag::Snn => "S_nn",
            UnknownTag::Uncovered => "uncovered",
            UnknownTag::BranchExhausted => "branch-exhausted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Realizable(Box<Certificate>),
    NotRealizable(Reason),
    /// `searched_to` is the largest order searched, `None` when search is off.
    Unknown { tag: UnknownTag, searched_to: Option<usize> },
}

impl Verdict {
    pub fn is_realizable(&self) -> bool {
        matches!(self, Verdict::Realizable(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::Realizable(c) => Some(c),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Realizable(c) => write!(f, "Realizable {}", c.expr),
            Verdict::NotRealizable(r) => write!(f, "NotRealizable ({r})"),
            Verdict::Unknown { tag, searched_to: Some(b) } => write!(f, "Unknown ({tag}; searched orders <= {b})"),
            Verdict::Unknown { tag, searched_to: None } => write!(f, "Unknown ({tag}; search disabled)"),
        }
    }
}

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error(transparent)]
    Descriptor(#[from] DescriptorError),
    #[error("{0} is not a shape this construction covers")]
    Shape(SetDescriptor),
    #[error("{0}")]
    Refused(Verdict),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleEntry {
    /// A realizer and the certificate it came from (an oracle leaf when it
    /// was found by search).
    Found { graph: Graph, certificate: ConstructionExpr },
    /// Exhaustive search at `order` found nothing.
    Empty { order: usize },
}

/// Resolved search targets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OracleCache {
    entries: BTreeMap<SetDescriptor, OracleEntry>,
}

impl OracleCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, d: &SetDescriptor) -> Option<&OracleEntry> {
        self.entries.get(d)
    }

    pub fn insert(&mut self, d: SetDescriptor, entry: OracleEntry) {
        self.entries.insert(d, entry);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SetDescriptor, &OracleEntry)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// One construction: sub-targets and how to assemble their certificates.
struct Branch {
    label: &'static str,
    subs: Vec<SetDescriptor>,
    build: Box<dyn Fn(&[ConstructionExpr]) -> ConstructionExpr>,
}

fn branch(
    label: &'static str,
    subs: Vec<Result<SetDescriptor, DescriptorError>>,
    build: impl Fn(&[ConstructionExpr]) -> ConstructionExpr + 'static,
) -> Option<Branch> {
    let subs = subs.into_iter().collect::<Result<Vec<_>, _>>().ok()?;
    Some(Branch { label, subs, build: Box::new(build) })
}

#[derive(Default)]
struct Outcome {
    verified: Vec<(ConstructionExpr, Graph)>,
    failures: Vec<(SetDescriptor, Reason)>,
    unresolved: bool,
    notes: Vec<String>,
}

fn single(i: usize, n: usize) -> Result<SetDescriptor, DescriptorError> {
    if i == 0 || n == 0 {
        return Err(DescriptorError::Invalid(format!("S{{{i}}}{n}")));
    }
    SetDescriptor::single(i, n)
}

fn pair(i: usize, j: usize, n: usize, m: usize) -> Result<SetDescriptor, DescriptorError> {
    SetDescriptor::pair(i, j, n, m)
}

fn k2() -> ConstructionExpr {
    base(GraphFamily::Complete(2))
}

fn p3() -> ConstructionExpr {
    base(GraphFamily::Path(3))
}

/// `i` values with `S{i,n-1}n^1` realizable, `n >= 6`.
pub fn m1_listed(i: usize, n: usize) -> bool {
    match n % 4 {
        0 => i % 2 == 0 && (2..=n - 2).contains(&i),
        1 => i % 2 == 0 && (2..=n - 3).contains(&i),
        2 => i % 2 == 1 && (3..=n - 3).contains(&i),
        _ => i % 2 == 1 && (3..=n - 2).contains(&i),
    }
}

/// `i` values with `S{i,n-2}n^2` realizable, `n >= 6`.
pub fn m2_listed(i: usize, n: usize) -> bool {
    match n % 4 {
        0 => i % 2 == 0 && (4..=n - 4).contains(&i),
        1 => i % 2 == 0 && (4..=n - 3).contains(&i),
        2 => i % 2 == 1 && (3..=n - 3).contains(&i),
        _ => i % 2 == 1 && (3..=n - 4).contains(&i),
    }
}

/// The single `i` with `S{i,n-1}n^2` realizable, `n >= 6`.
pub fn m2_penultimate_index(n: usize) -> usize {
    if matches!(n % 4, 0 | 3) {
        n - 3
    } else {
        n - 2
    }
}

/// Realizable `(i, j, m)` with `n <= 5` and `m` in `{1, 2}`.
const CENSUS: [(usize, usize, usize, usize); 4] = [(2, 3, 4, 1), (2, 4, 5, 1), (1, 3, 4, 2), (1, 4, 5, 2)];

pub struct Realizer {
    budget: usize,
    search_fallback: bool,
    oracle: Mutex<OracleCache>,
    memo: Mutex<HashMap<SetDescriptor, Verdict>>,
}

impl Default for Realizer {
    fn default() -> Self {
        Realizer::new(DEFAULT_BUDGET)
    }
}

/// Decides `d` with a fresh realizer.
pub fn decide(d: &SetDescriptor, search_budget: usize) -> Verdict {
    Realizer::new(search_budget).decide(d)
}

impl Realizer {
    pub fn new(budget: usize) -> Self {
        Realizer {
            budget: budget.min(MAX_ENUMERATION_ORDER),
            search_fallback: true,
            oracle: Mutex::new(OracleCache::new()),
            memo: Mutex::new(HashMap::new()),
        }
    }

    /// With search off, nothing is resolved by enumeration: oracle leaves
    /// stay unresolved and conjectural cases stay unknown.
    pub fn with_search_fallback(mut self, on: bool) -> Self {
        self.search_fallback = on;
        self
    }

    pub fn with_cache(self, cache: OracleCache) -> Self {
        *self.oracle.lock().expect("no panics while holding the lock") = cache;
        self
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn cache(&self) -> OracleCache {
        self.oracle.lock().expect("no panics while holding the lock").clone()
    }

    /// Records a verified realizer so later oracle leaves can use it.
    pub fn remember(&self, d: SetDescriptor, cert: &Certificate) {
        let mut cache = self.oracle.lock().expect("no panics while holding the lock");
        if !matches!(cache.get(&d), Some(OracleEntry::Found { .. })) {
            cache.insert(d, OracleEntry::Found { graph: cert.graph.clone(), certificate: cert.expr.clone() });
        }
    }

    pub fn decide(&self, d: &SetDescriptor) -> Verdict {
        if let Some(v) = self.memo.lock().expect("no panics while holding the lock").get(d) {
            return v.clone();
        }
        let v = match d {
            SetDescriptor::Single(s) => self.decide_single(*s),
            SetDescriptor::Pair(p) => self.decide_pair(*p),
        };
        self.memo.lock().expect("no panics while holding the lock").insert(*d, v.clone());
        v
    }

    /// A connected realizer of `d` by exhaustive search, memoized in the
    /// oracle cache. `Ok(None)` means the search proved there is none.
    pub fn resolve_oracle(&self, d: &SetDescriptor) -> Result<Option<Graph>, SearchError> {
        let n = d.order();
        if let Some(entry) = self.oracle.lock().expect("no panics while holding the lock").get(d) {
            match entry {
                OracleEntry::Found { graph, .. } => return Ok(Some(graph.clone())),
                OracleEntry::Empty { order } if *order >= n => return Ok(None),
                OracleEntry::Empty { .. } => {}
            }
        }
        let report = find_realizers(&d.expand(), n, self.budget)?;
        let found = report.found.into_iter().next().map(|f| f.graph);
        let entry = match &found {
            Some(g) => OracleEntry::Found { graph: g.clone(), certificate: oracle(*d) },
            None => OracleEntry::Empty { order: n },
        };
        self.oracle.lock().expect("no panics while holding the lock").insert(*d, entry);
        Ok(found)
    }

    /// Certificate for `S{i,n-1}n^1`.
    pub fn construct_m1(&self, i: usize, n: usize) -> Result<Certificate, ConstructError> {
        let d = pair(i, n.saturating_sub(1), n, 1)?;
        self.certificate_for(d)
    }

    /// Certificate for `S{i,j}n^2`.
    pub fn construct_m2(&self, i: usize, j: usize, n: usize) -> Result<Certificate, ConstructError> {
        let d = pair(i, j, n, 2)?;
        self.certificate_for(d)
    }

    /// Certificate for the recursion targets `S{i}n`, `S{i,j}n^{n-1}` and
    /// `S{i,j}n^n`.
    pub fn construct_part1(&self, d: &SetDescriptor) -> Result<Certificate, ConstructError> {
        match d {
            SetDescriptor::Single(_) => {}
            SetDescriptor::Pair(p) if p.m + 1 >= p.n => {}
            _ => return Err(ConstructError::Shape(*d)),
        }
        self.certificate_for(*d)
    }

    fn certificate_for(&self, d: SetDescriptor) -> Result<Certificate, ConstructError> {
        match self.decide(&d) {
            Verdict::Realizable(c) => Ok(*c),
            v => Err(ConstructError::Refused(v)),
        }
    }

    fn oracle_graph(&self, d: &SetDescriptor) -> Option<Graph> {
        match self.oracle.lock().expect("no panics while holding the lock").get(d) {
            Some(OracleEntry::Found { graph, .. }) => Some(graph.clone()),
            _ => None,
        }
    }

    /// Evaluates `expr` and checks it realizes `d`.
    fn certify(&self, d: &SetDescriptor, expr: &ConstructionExpr) -> Result<Graph, String> {
        if expr.order() != d.order() {
            return Err(format!("order {} instead of {}", expr.order(), d.order()));
        }
        let g = expr.evaluate_with(&mut |s| self.oracle_graph(s)).map_err(|e| e.to_string())?;
        if !g.is_connected() || !has_spectrum(&g, &d.expand()) {
            return Err("spectrum mismatch".into());
        }
        Ok(g)
    }

    fn run(&self, d: &SetDescriptor, branches: impl IntoIterator<Item = Option<Branch>>) -> Outcome {
        let mut out = Outcome::default();
        for b in branches.into_iter().flatten() {
            let mut exprs = Vec::with_capacity(b.subs.len());
            for s in &b.subs {
                match self.decide(s) {
                    Verdict::Realizable(c) => exprs.push(c.expr),
                    Verdict::NotRealizable(r) => {
                        out.failures.push((*s, r));
                        break;
                    }
                    Verdict::Unknown { .. } => {
                        out.unresolved = true;
                        break;
                    }
                }
            }
            if exprs.len() < b.subs.len() {
                continue;
            }
            let expr = (b.build)(&exprs);
            match self.certify(d, &expr) {
                Ok(g) => out.verified.push((expr, g)),
                Err(e) => out.notes.push(format!("{} rejected: {e}", b.label)),
            }
        }
        out
    }

    /// Realizable if a branch verified; otherwise NotRealizable when the
    /// branches form a complete characterization and every one failed.
    fn conclude(&self, d: &SetDescriptor, out: Outcome, characterization: bool) -> Verdict {
        self.conclude_as(d, out, characterization, UnknownTag::BranchExhausted)
    }

    fn conclude_as(&self, d: &SetDescriptor, out: Outcome, characterization: bool, tag: UnknownTag) -> Verdict {
        let mut verified = out.verified.into_iter();
        if let Some((expr, graph)) = verified.next() {
            return Verdict::Realizable(Box::new(Certificate {
                expr,
                graph,
                spectrum: d.expand(),
                alternates: verified.map(|(e, _)| e).collect(),
                notes: out.notes,
            }));
        }
        if characterization && !out.unresolved && out.notes.is_empty() {
            return Verdict::NotRealizable(Reason::NoBranch(out.failures));
        }
        self.unknown(d, tag)
    }

    /// Search within the budget, otherwise an unknown verdict.
    fn unknown(&self, d: &SetDescriptor, tag: UnknownTag) -> Verdict {
        let n = d.order();
        if !self.search_fallback {
            return Verdict::Unknown { tag, searched_to: None };
        }
        match self.resolve_oracle(d) {
            Ok(Some(graph)) => Verdict::Realizable(Box::new(Certificate {
                expr: oracle(*d),
                graph,
                spectrum: d.expand(),
                alternates: Vec::new(),
                notes: vec![format!("found by exhaustive search ({tag})")],
            })),
            Ok(None) => Verdict::NotRealizable(Reason::ExhaustiveSearch { order: n }),
            Err(_) => Verdict::Unknown { tag, searched_to: Some(self.budget) },
        }
    }

    fn reduce(
        &self,
        d: &SetDescriptor,
        target: SetDescriptor,
        build: impl Fn(ConstructionExpr) -> ConstructionExpr + 'static,
        tag: UnknownTag,
    ) -> Verdict {
        match self.decide(&target) {
            Verdict::Realizable(_) => {
                let b = Branch { label: "reduction", subs: vec![target], build: Box::new(move |e| build(e[0].clone())) };
                let out = self.run(d, [Some(b)]);
                self.conclude(d, out, false)
            }
            Verdict::NotRealizable(r) => Verdict::NotRealizable(Reason::Reduction { target, reason: Box::new(r) }),
            Verdict::Unknown { .. } => self.unknown(d, tag),
        }
    }

    fn decide_single(&self, s: SingleMissing) -> Verdict {
        let SingleMissing { i, n } = s;
        let d = SetDescriptor::Single(s);
        if (n * (n + 1) / 2 - i) % 2 == 1 {
            return Verdict::NotRealizable(Reason::TraceParity);
        }
        if n == 1 {
            let out = self.run(&d, [branch("K1", vec![], |_| k1())]);
            return self.conclude(&d, out, false);
        }
        if i == n {
            return self.unknown(&d, UnknownTag::Snn);
        }
        if i == 1 && n >= 5 {
            let out = self.run(
                &d,
                [
                    branch("2K1 v (K1 u G1)", vec![single(n - 4, n - 3)], |e| join(empty(2), union(k1(), e[0].clone()))),
                    branch("K1 v H", vec![single(n - 1, n - 1)], |e| join(k1(), e[0].clone())),
                ],
            );
            return self.conclude(&d, out, n >= 6);
        }
        if n <= self.budget && self.search_fallback {
            return self.unknown(&d, UnknownTag::Uncovered);
        }
        if i == 1 {
            return self.unknown(&d, UnknownTag::Uncovered);
        }
        // complement of a realizer of S{n-i}_{n-1}, joined with K1
        let out = self.run(&d, [branch("C(G') v K1", vec![single(n - i, n - 1)], |e| join(complement(e[0].clone()), k1()))]);
        self.conclude(&d, out, false)
    }

    fn decide_pair(&self, p: DoubledMissingPair) -> Verdict {
        let DoubledMissingPair { i, j, n, m } = p;
        let d = SetDescriptor::Pair(p);
        if !p.parity_check().is_compatible() {
            return Verdict::NotRealizable(Reason::TraceParity);
        }
        if n <= 5 && m <= 2 {
            return self.census(p);
        }
        if j == n && is_prime(n) {
            return Verdict::NotRealizable(Reason::PrimeOrder);
        }
        match m {
            1 => self.decide_m1(p),
            2 => self.decide_m2(p),
            _ if m == n && n >= 5 => self.decide_double_order(p),
            _ if m + 1 == n => self.decide_n_minus_one(p),
            _ => {
                if i >= 2 && j < n {
                    // Ḡ ∨ K1 over a realizer of the pre-dual; an equivalence
                    // because n - i + 1 < n + 1 lies in the pre-dual's set
                    if let Ok(t) = pair(n - j, n - i, n - 1, n - m) {
                        return self.reduce(&d, t, |e| join(complement(e), k1()), UnknownTag::Uncovered);
                    }
                }
                let shift = (i >= 2 && n >= 5).then(|| {
                    branch("(G u K1) v K1", vec![pair(i - 1, j - 1, n - 2, m - 1)], |e| {
                        join(union(e[0].clone(), k1()), k1())
                    })
                });
                let out = self.run(&d, [shift.flatten()]);
                if out.verified.is_empty() {
                    return self.unknown(&d, UnknownTag::Uncovered);
                }
                self.conclude(&d, out, false)
            }
        }
    }

    fn census(&self, p: DoubledMissingPair) -> Verdict {
        let d = SetDescriptor::Pair(p);
        if !CENSUS.contains(&(p.i, p.j, p.n, p.m)) {
            return Verdict::NotRealizable(Reason::SmallOrderCensus);
        }
        let out = match (p.i, p.n, p.m) {
            (1, 4, 2) => self.run(&d, [branch("C4", vec![], |_| base(GraphFamily::Cycle(4)))]),
            (1, 5, 2) => self.run(&d, [branch("K3,2", vec![], |_| base(GraphFamily::CompleteBipartite(3, 2)))]),
            _ => self.run(&d, [transport_branch(p)]),
        };
        self.conclude(&d, out, false)
    }

    fn decide_m1(&self, p: DoubledMissingPair) -> Verdict {
        let DoubledMissingPair { i, j, n, .. } = p;
        let d = SetDescriptor::Pair(p);
        if j == n {
            if n < 9 {
                return Verdict::NotRealizable(Reason::MOneLastBelowNine);
            }
            return self.unknown(&d, UnknownTag::SinDoubleOne);
        }
        if j + 1 < n {
            return Verdict::NotRealizable(Reason::MOneRequiresPenultimate);
        }
        if !m1_listed(i, n) {
            return Verdict::NotRealizable(Reason::MOneList);
        }
        let mut branches = Vec::new();
        if (2..=n - 3).contains(&i) {
            branches.push(branch("K1 v (2K1 u (K1 v H'))", vec![single(n - i - 2, n - 4)], |e| {
                join(k1(), union(empty(2), join(k1(), complement(e[0].clone()))))
            }));
        }
        if i == n - 2 {
            branches.push(branch("K1 v (P3' u (K1 v H'))", vec![single(n.wrapping_sub(6), n - 5)], |e| {
                join(k1(), union(complement(p3()), join(k1(), complement(e[0].clone()))))
            }));
            branches.push(branch("K1 v (2K1 u H')", vec![single(n - 3, n - 3)], |e| {
                join(k1(), union(empty(2), complement(e[0].clone())))
            }));
        }
        branches.push(transport_branch(p));
        let out = self.run(&d, branches);
        self.conclude(&d, out, false)
    }

    fn decide_m2(&self, p: DoubledMissingPair) -> Verdict {
        let DoubledMissingPair { i, j, n, .. } = p;
        let d = SetDescriptor::Pair(p);
        if j == n {
            return self.unknown(&d, UnknownTag::SinDoubleM);
        }
        if i == 1 && j + 1 == n {
            // The complement may also split as K2 plus a component of order n-2.
            let out = self.run(
                &d,
                [
                    branch("K1 v F", vec![pair(n - 2, n - 1, n - 1, 1)], |e| join(k1(), e[0].clone())),
                    branch("2K1 v H", vec![pair(1, 2, n - 2, n - 2)], |e| join(empty(2), complement(e[0].clone()))),
                ],
            );
            return self.conclude_as(&d, out, true, UnknownTag::S1jDoubleTwo);
        }
        if i == 1 {
            return match pair(j - 1, n - 1, n - 1, 1) {
                Ok(t) => self.reduce(&d, t, |e| join(k1(), e), UnknownTag::S1jDoubleTwo),
                Err(_) => self.unknown(&d, UnknownTag::S1jDoubleTwo),
            };
        }
        if j + 3 <= n {
            return Verdict::NotRealizable(Reason::MTwoRequiresLargeJ);
        }
        if j + 2 == n {
            if !m2_listed(i, n) {
                return Verdict::NotRealizable(Reason::MTwoList);
            }
            return match pair(i - 1, n - 3, n - 2, 1) {
                Ok(t) => self.reduce(&d, t, |e| join(k1(), union(k1(), e)), UnknownTag::BranchExhausted),
                Err(_) => self.unknown(&d, UnknownTag::BranchExhausted),
            };
        }
        if i != m2_penultimate_index(n) {
            return Verdict::NotRealizable(Reason::MTwoPenultimateList);
        }
        let branches = if i + 3 == n {
            let inner = |e: &[ConstructionExpr]| join(k1(), union(k2(), join(k1(), union(empty(2), e[0].clone()))));
            vec![
                branch("K1 v (K2 u (K1 v (2K1 u H1))), H1 on n-6", vec![single(1, n.wrapping_sub(6))], inner),
                branch("K1 v (K2 u (K1 v (2K1 u H1))), H1 on n-5", vec![single(1, n - 5)], inner),
                branch("K1 v (K1 u F')", vec![pair(2, n - 2, n - 2, n - 3)], |e| {
                    join(k1(), union(k1(), complement(e[0].clone())))
                }),
            ]
        } else {
            vec![branch("K1 v (P3 u (K1 v H'))", vec![single(n.wrapping_sub(7), n - 5)], |e| {
                join(k1(), union(p3(), join(k1(), complement(e[0].clone()))))
            })]
        };
        let out = self.run(&d, branches);
        self.conclude(&d, out, false)
    }

    fn decide_n_minus_one(&self, p: DoubledMissingPair) -> Verdict {
        let DoubledMissingPair { i, j, n, .. } = p;
        let d = SetDescriptor::Pair(p);
        if i > 2 {
            return Verdict::NotRealizable(Reason::NMinusOneFirstIndex);
        }
        if j == n {
            return self.unknown(&d, UnknownTag::SinDoubleM);
        }
        if i == 2 {
            return match pair(n - j, n - 2, n - 1, 1) {
                Ok(t) => self.reduce(&d, t, |e| join(complement(e), k1()), UnknownTag::BranchExhausted),
                Err(_) => self.unknown(&d, UnknownTag::Uncovered),
            };
        }
        if n < 6 {
            return self.unknown(&d, UnknownTag::Uncovered);
        }
        let wanted = if matches!(n % 4, 0 | 1) { 2 } else { 3 };
        if j != wanted {
            return Verdict::NotRealizable(Reason::NMinusOneList);
        }
        let branches = if j == 2 {
            vec![branch("(K1 u K2) v (K1 u H)", vec![single(n.wrapping_sub(6), n - 4)], |e| {
                join(union(k1(), k2()), union(k1(), e[0].clone()))
            })]
        } else {
            vec![
                branch("2K1 v (K1 u H)", vec![pair(1, n - 4, n - 3, n - 3)], |e| join(empty(2), union(k1(), e[0].clone()))),
                branch("K1 v F", vec![pair(2, n - 1, n - 1, n - 2)], |e| join(k1(), e[0].clone())),
            ]
        };
        let out = self.run(&d, branches);
        self.conclude(&d, out, true)
    }

    fn decide_double_order(&self, p: DoubledMissingPair) -> Verdict {
        let DoubledMissingPair { i, j, n, .. } = p;
        let d = SetDescriptor::Pair(p);
        if i != 1 {
            return Verdict::NotRealizable(Reason::DoubleOrderRequiresOne);
        }
        let branches = if j == 2 {
            vec![
                branch("P3 v (K1 u H)", vec![single(n - 5, n - 4)], |e| join(p3(), union(k1(), e[0].clone()))),
                branch("K2 v H", vec![single(n - 2, n - 2)], |e| join(k2(), e[0].clone())),
            ]
        } else if j + 1 < n {
            vec![branch("K2 v (K1 u H)", vec![single(j - 2, n - 3)], |e| join(k2(), union(k1(), e[0].clone())))]
        } else {
            vec![
                branch("K2 v (K2 u H)", vec![single(2, n - 4)], |e| join(k2(), union(k2(), e[0].clone()))),
                branch("K2 v (K1 u H)", vec![single(n - 3, n - 3)], |e| join(k2(), union(k1(), e[0].clone()))),
            ]
        };
        let out = self.run(&d, branches);
        self.conclude(&d, out, true)
    }
}

/// `(F ∪ 2K1) ∨ K1` with `F` realizing `S{i-1}_{n-3}`.
fn transport_branch(p: DoubledMissingPair) -> Option<Branch> {
    if p.m != 1 || p.j + 1 != p.n || p.i < 2 || p.n < 4 {
        return None;
    }
    branch("(F u 2K1) v K1", vec![single(p.i - 1, p.n - 3)], |e| join(union(e[0].clone(), empty(2)), k1()))
}
