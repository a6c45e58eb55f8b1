//! Named verification suites: each runs bounded exhaustive or seeded random
//! checks and reports one pass/fail line per check.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::descriptor::{DoubledMissingPair, SetDescriptor, SingleMissing};
use crate::enumerate::{enumerate_connected, MAX_ENUMERATION_ORDER};
use crate::error::SearchError;
use crate::graph::Graph;
use crate::cert::{empty, join, k1, union, base};
use crate::graph::GraphFamily;
use crate::realizer::{m1_listed, m2_listed, m2_penultimate_index, Realizer, Verdict};
use crate::search::{integral_catalog, scan_conjecture, verify_structural_props, ConjectureTag};
use crate::spectra::{
    complement_spectrum, has_spectrum, integer_spectrum, join_spectrum, laplacian_char_poly, union_spectrum,
};

pub const RANDOM_PAIRS: usize = 1000;
pub const SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    SpectralCalculus,
    M1Lists,
    M2Lists,
    Conjectures,
    Structural,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::SpectralCalculus, Suite::M1Lists, Suite::M2Lists, Suite::Conjectures, Suite::Structural];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::SpectralCalculus => "spectral-calculus",
            Suite::M1Lists => "m1-lists",
            Suite::M2Lists => "m2-lists",
            Suite::Conjectures => "conjectures",
            Suite::Structural => "structural",
        })
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.to_string() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), pass, detail: detail.into() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub max_n: usize,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Tab-separated: suite, check, PASS or FAIL, detail.
    pub fn to_records(&self) -> String {
        self.checks
            .iter()
            .map(|c| format!("{}\t{}\t{}\t{}\n", self.suite, c.name, if c.pass { "PASS" } else { "FAIL" }, c.detail))
            .collect()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} (max n = {})", self.suite, self.max_n)?;
        for c in &self.checks {
            writeln!(f, "  [{}] {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        Ok(())
    }
}

pub fn run_suite(suite: Suite, max_n: usize, realizer: &Realizer) -> Result<SuiteReport, SearchError> {
    let max_n = max_n.min(MAX_ENUMERATION_ORDER);
    let checks = match suite {
        Suite::SpectralCalculus => spectral_calculus(max_n)?,
        Suite::M1Lists => m1_lists(max_n)?,
        Suite::M2Lists => m2_lists(max_n, realizer)?,
        Suite::Conjectures => conjectures(max_n)?,
        Suite::Structural => structural(max_n, realizer)?,
    };
    Ok(SuiteReport { suite, max_n, checks })
}

fn fmt_pairs(s: &BTreeSet<(usize, usize)>) -> String {
    let items: Vec<String> = s.iter().map(|(i, j)| format!("({i},{j})")).collect();
    format!("{{{}}}", items.join(","))
}

/// Pairs `(i, j)` of every `S{i,j}n^m` with a connected realizer of order `n`.
pub fn searched_pairs(n: usize, m: usize) -> Result<BTreeSet<(usize, usize)>, SearchError> {
    Ok(integral_catalog(n, n)?
        .graphs
        .iter()
        .filter_map(|e| match e.descriptor {
            Some(SetDescriptor::Pair(p)) if p.m == m => Some((p.i, p.j)),
            _ => None,
        })
        .collect())
}

fn k2() -> crate::cert::ConstructionExpr {
    base(GraphFamily::Complete(2))
}

fn random_relabel(g: &Graph, rng: &mut ChaCha8Rng) -> Graph {
    let mut perm: Vec<usize> = (0..g.order()).collect();
    perm.shuffle(rng);
    g.permuted(&perm)
}

/// Integral graphs of order at most `max`: connected catalog members and
/// unions of two of them.
fn integral_pool(max: usize) -> Result<Vec<Graph>, SearchError> {
    let mut connected = Vec::new();
    for n in 1..=max {
        connected.extend(integral_catalog(n, n)?.graphs.iter().map(|e| e.graph.clone()));
    }
    let mut pool = connected.clone();
    for a in &connected {
        for b in &connected {
            if a.order() + b.order() <= max && a.order() <= b.order() {
                pool.push(a.union(b).expect("orders are small"));
            }
        }
    }
    Ok(pool)
}

fn spectral_calculus(max_n: usize) -> Result<Vec<Check>, SearchError> {
    let mut checks = Vec::new();
    let piece = (max_n.saturating_sub(1)).clamp(1, 7);
    let pool = integral_pool(piece)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut failures = Vec::new();
    let mut tried = 0;
    while tried < RANDOM_PAIRS {
        let g = random_relabel(pool.choose(&mut rng).expect("pool is not empty"), &mut rng);
        let h = random_relabel(pool.choose(&mut rng).expect("pool is not empty"), &mut rng);
        if g.order() + h.order() > max_n.max(2) {
            continue;
        }
        tried += 1;
        let (sg, sh) = (integer_spectrum(&g).expect("pool is integral"), integer_spectrum(&h).expect("pool is integral"));
        let j = g.join(&h).expect("orders are small");
        let u = g.union(&h).expect("orders are small");
        let ok = integer_spectrum(&j).ok() == join_spectrum(&sg, &sh).ok()
            && integer_spectrum(&u).ok() == Some(union_spectrum(&sg, &sh))
            && integer_spectrum(&g.complement()).ok() == complement_spectrum(&sg, g.order()).ok();
        if !ok {
            failures.push(format!("{g:?} / {h:?}"));
        }
    }
    checks.push(check(
        format!("join, union and complement spectra on {RANDOM_PAIRS} seeded pairs, order <= {max_n}"),
        failures.is_empty(),
        format!("{} failures{}", failures.len(), failures.first().map(|f| format!(", first {f}")).unwrap_or_default()),
    ));

    let top = max_n.min(7);
    let mut counted = 0;
    let mut join_bad = 0;
    let mut double_bad = 0;
    for n in 1..=top {
        for g in enumerate_connected(n, n)? {
            counted += 1;
            let p = laplacian_char_poly(&g);
            let has_n = p.root_multiplicity(n as i64) > 0;
            if has_n == g.complement().is_connected() {
                join_bad += 1;
            }
            if n >= 2 && p.root_multiplicity(n as i64) == 2 && p.root_multiplicity(1) > 0 {
                double_bad += 1;
            }
        }
    }
    checks.push(check(
        format!("n in spectrum iff the graph is a join, all connected classes n <= {top}"),
        join_bad == 0,
        format!("{counted} classes, {join_bad} exceptions"),
    ));
    checks.push(check(
        format!("double eigenvalue n excludes eigenvalue 1, n <= {top}"),
        double_bad == 0,
        format!("{counted} classes, {double_bad} exceptions"),
    ));
    Ok(checks)
}

fn m1_lists(max_n: usize) -> Result<Vec<Check>, SearchError> {
    let mut checks = Vec::new();
    for n in 4..=max_n {
        let found = searched_pairs(n, 1)?;
        let expected: BTreeSet<(usize, usize)> = if n <= 5 {
            [(2, 3, 4), (2, 4, 5)].into_iter().filter(|t| t.2 == n).map(|(i, j, _)| (i, j)).collect()
        } else {
            (1..n - 1).filter(|&i| m1_listed(i, n)).map(|i| (i, n - 1)).collect()
        };
        checks.push(check(
            format!("n={n}: m=1 realizable pairs match the list"),
            found == expected,
            format!("search {} list {}", fmt_pairs(&found), fmt_pairs(&expected)),
        ));
    }
    Ok(checks)
}

fn m2_lists(max_n: usize, realizer: &Realizer) -> Result<Vec<Check>, SearchError> {
    let mut checks = Vec::new();
    for n in 4..=max_n {
        let found = searched_pairs(n, 2)?;
        if n <= 5 {
            let expected: BTreeSet<_> = [(1, 3, 4), (1, 4, 5)].into_iter().filter(|t| t.2 == n).map(|(i, j, _)| (i, j)).collect();
            checks.push(check(
                format!("n={n}: m=2 realizable pairs match the census"),
                found == expected,
                format!("search {} census {}", fmt_pairs(&found), fmt_pairs(&expected)),
            ));
            continue;
        }
        let with_i_gt_1: BTreeSet<_> = found.iter().copied().filter(|&(i, _)| i > 1).collect();
        let mut expected: BTreeSet<_> = (2..n - 2).filter(|&i| m2_listed(i, n)).map(|i| (i, n - 2)).collect();
        expected.insert((m2_penultimate_index(n), n - 1));
        checks.push(check(
            format!("n={n}: m=2 realizable pairs with i>1 match the lists"),
            with_i_gt_1 == expected,
            format!("search {} list {}", fmt_pairs(&with_i_gt_1), fmt_pairs(&expected)),
        ));
        let first_one: BTreeSet<_> = found.iter().copied().filter(|&(i, _)| i == 1).collect();
        checks.push(check(
            format!("n={n}: S{{1,j}}n^2 has no realizer"),
            first_one.is_empty(),
            format!("search {}", fmt_pairs(&first_one)),
        ));
    }
    for n in (7..=max_n).filter(|n| matches!(n % 4, 0 | 3)) {
        let d = SetDescriptor::Pair(DoubledMissingPair { i: n - 3, j: n - 1, n, m: 2 });
        let with = |order: usize| -> Option<bool> {
            let h1 = SetDescriptor::single(1, order).ok()?;
            let c = realizer.decide(&h1).certificate()?.expr.clone();
            let e = join(k1(), union(k2(), join(k1(), union(empty(2), c))));
            Some(e.evaluate_with(&mut |o| realizer.resolve_oracle(o).ok().flatten()).is_ok_and(|g| g.order() == n && has_spectrum(&g, &d.expand())))
        };
        let (six, five) = (with(n - 6), with(n - 5));
        checks.push(check(
            format!("n={n}: {d} is realized with H1 realizing S_{{1,n-6}}, not S_{{1,n-5}}"),
            six == Some(true) && five != Some(true),
            format!("H1 on n-6: {}; H1 on n-5: {}", outcome(six), outcome(five)),
        ));
    }
    for m in [1, 2] {
        for n in 4..=max_n {
            checks.push(agreement(n, m)?);
        }
    }
    Ok(checks)
}

fn outcome(x: Option<bool>) -> &'static str {
    match x {
        Some(true) => "realizes",
        Some(false) => "does not realize",
        None => "H1 not realizable",
    }
}

/// Construction-only verdicts (no search fallback) against exhaustive search for
/// every descriptor of order `n` with doubled value `m`. Unknown verdicts are
/// counted but are not disagreements.
fn agreement(n: usize, m: usize) -> Result<Check, SearchError> {
    let found = searched_pairs(n, m)?;
    let theory = Realizer::new(n).with_search_fallback(false);
    let (mut unknown, mut wrong) = (0, Vec::new());
    for j in 2..=n {
        for i in 1..j {
            let Ok(d) = SetDescriptor::pair(i, j, n, m) else { continue };
            match (theory.decide(&d), found.contains(&(i, j))) {
                (Verdict::Unknown { .. }, _) => unknown += 1,
                (v, hit) if v.is_realizable() != hit => wrong.push(format!("{d}: {v}")),
                _ => {}
            }
        }
    }
    Ok(check(
        format!("n={n}: construction verdicts for m={m} agree with search"),
        wrong.is_empty(),
        format!("{unknown} unknown, {} disagreements {:?}", wrong.len(), wrong),
    ))
}

fn conjectures(max_n: usize) -> Result<Vec<Check>, SearchError> {
    let mut checks = Vec::new();
    for tag in ConjectureTag::ALL {
        let from = match tag {
            ConjectureTag::SinDoubleOne => 3,
            ConjectureTag::S1jDoubleTwo => 6,
            ConjectureTag::Snn => 2,
        };
        let mut hits = Vec::new();
        let mut exhausted = true;
        for n in from..=max_n {
            let r = scan_conjecture(tag, n, n)?;
            exhausted &= r.exhausted;
            hits.extend(r.found.iter().map(|f| format!("{} at order {n}", crate::graph6::encode_graph6(&f.graph))));
        }
        checks.push(check(
            format!("{tag}: no realizer for {from} <= n <= {max_n}"),
            hits.is_empty() && exhausted,
            if hits.is_empty() { "exhausted, 0 hits".to_string() } else { hits.join(", ") },
        ));
    }
    Ok(checks)
}

fn structural(max_n: usize, realizer: &Realizer) -> Result<Vec<Check>, SearchError> {
    let mut checks = Vec::new();
    let mut pendant_bad = Vec::new();
    let mut parity_bad = Vec::new();
    let mut transport_bad = Vec::new();
    let mut join_bad = Vec::new();
    let mut realizers = 0;
    let k1 = Graph::empty(1).expect("order 1");
    let e2 = Graph::empty(2).expect("order 2");
    for n in 1..=max_n {
        for e in &integral_catalog(n, n)?.graphs {
            let Some(d) = e.descriptor else { continue };
            realizers += 1;
            let props = verify_structural_props(&e.graph, &d);
            let named = |key: &str| props.iter().find(|(k, _)| k.contains(key)).map(|(_, ok)| *ok);
            if named("pendant") == Some(false) {
                pendant_bad.push(d.to_string());
            }
            if named("iff complement") == Some(false) {
                join_bad.push(d.to_string());
            }
            if let SetDescriptor::Pair(p) = d {
                if !p.parity_check().is_compatible() {
                    parity_bad.push(d.to_string());
                }
            }
            if !transports(&e.graph, &d, &k1, &e2) {
                transport_bad.push(d.to_string());
            }
        }
    }
    for n in 3..=max_n {
        for m in 1..=2 {
            for j in 2..=n {
                for i in 1..j {
                    let Ok(d) = SetDescriptor::pair(i, j, n, m) else { continue };
                    if let Some(c) = realizer.decide(&d).certificate() {
                        if !transports(&c.graph, &d, &k1, &e2) {
                            transport_bad.push(format!("certificate of {d}"));
                        }
                    }
                }
            }
        }
    }
    checks.push(check(
        format!("realizers of S{{i,n-1}}n^1 have two pendant vertices, n <= {max_n}"),
        pendant_bad.is_empty(),
        format!("{} exceptions {:?}", pendant_bad.len(), pendant_bad),
    ));
    checks.push(check(
        format!("parity of i+j and m follows n mod 4 for every recognized realizer, n <= {max_n}"),
        parity_bad.is_empty(),
        format!("{realizers} realizers, {} exceptions {:?}", parity_bad.len(), parity_bad),
    ));
    checks.push(check(
        format!("S{{i}}n realizers contain n iff their complement is disconnected, n <= {max_n}"),
        join_bad.is_empty(),
        format!("{} exceptions {:?}", join_bad.len(), join_bad),
    ));
    checks.push(check(
        format!("duality and shift constructions realize the transformed descriptors, n <= {max_n}"),
        transport_bad.is_empty(),
        format!("{} exceptions {:?}", transport_bad.len(), transport_bad),
    ));
    Ok(checks)
}

/// `Ḡ ∨ K1` realizes the dual, `K1 ∨ (K1 ∪ G)` and `(G ∪ 2K1) ∨ K1` realize
/// the shifts.
fn transports(g: &Graph, d: &SetDescriptor, k1: &Graph, e2: &Graph) -> bool {
    match *d {
        SetDescriptor::Pair(p) => {
            let dual = g.complement().join(k1).expect("small order");
            let shift = k1.join(&k1.union(g).expect("small order")).expect("small order");
            has_spectrum(&dual, &p.dual().expand()) && has_spectrum(&shift, &d.shift().expand())
        }
        SetDescriptor::Single(SingleMissing { .. }) => {
            let shift = g.union(e2).and_then(|u| u.join(k1)).expect("small order");
            has_spectrum(&shift, &d.shift().expand())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(s: Suite, n: usize) -> SuiteReport {
        run_suite(s, n, &Realizer::new(n)).unwrap()
    }

    #[test]
    fn only_known_exceptions_up_to_seven() {
        let failing: Vec<String> = Suite::ALL
            .into_iter()
            .flat_map(|s| run(s, 7).checks)
            .filter(|c| !c.pass)
            .map(|c| c.name)
            .collect();
        assert_eq!(
            failing,
            vec![
                "n=6: m=2 realizable pairs with i>1 match the lists".to_string(),
                "realizers of S{i,n-1}n^1 have two pendant vertices, n <= 7".to_string(),
            ]
        );
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
        assert!("spectral".parse::<Suite>().is_err());
    }

    #[test]
    fn records_have_four_fields() {
        let r = run(Suite::Conjectures, 5);
        for line in r.to_records().lines() {
            assert_eq!(line.split('\t').count(), 4);
        }
    }
}
