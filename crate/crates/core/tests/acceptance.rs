//! One pass/fail line per acceptance criterion. Spectra are checked against
//! floating-point eigenvalues from nalgebra and lists are typed in by hand.
//!
//! Criteria listed in `KNOWN_RED` print FAIL without failing the run; any
//! other failure exits nonzero.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::Instant;

use lapint::enumerate::{enumerate_connected, enumerate_connected_with, Strategy};
use lapint::search::{integral_catalog, scan_conjecture, ConjectureTag};
use lapint::spectra::{complement_spectrum, integer_spectrum, join_spectrum, union_spectrum, SpectrumMultiset};
use lapint::tables::{check_tables, GOLDEN_TABLE1, GOLDEN_TABLE2};
use lapint::{ConstructionExpr, Graph, Realizer, SetDescriptor};
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Criterion 3: the order-6 list names S{4,5}6^2, which has no realizer, and
/// S{1,n-1}n^2 is realizable at n = 8, 9.
const KNOWN_RED: &[usize] = &[3];

type Adj = Vec<Vec<bool>>;

fn adj(g: &Graph) -> Adj {
    let n = g.order();
    (0..n).map(|u| (0..n).map(|v| g.has_edge(u, v)).collect()).collect()
}

fn to_graph(a: &Adj) -> Graph {
    let n = a.len();
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| a[u][v]).collect();
    Graph::from_edges(n, &edges).unwrap()
}

fn eigenvalues(a: &Adj) -> Vec<f64> {
    let n = a.len();
    let m = DMatrix::from_fn(n, n, |r, c| {
        if r == c {
            a[r].iter().filter(|&&x| x).count() as f64
        } else if a[r][c] {
            -1.0
        } else {
            0.0
        }
    });
    let mut e: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

fn integral(a: &Adj) -> Option<Vec<usize>> {
    eigenvalues(a)
        .into_iter()
        .map(|x| {
            let r = x.round();
            ((x - r).abs() < 1e-6 && r >= 0.0).then_some(r as usize)
        })
        .collect()
}

fn multiset(v: &[usize]) -> SpectrumMultiset {
    SpectrumMultiset::from_values(v.iter().copied())
}

fn union_adj(a: &Adj, b: &Adj) -> Adj {
    let (p, q) = (a.len(), b.len());
    (0..p + q)
        .map(|u| {
            (0..p + q)
                .map(|v| match (u < p, v < p) {
                    (true, true) => a[u][v],
                    (false, false) => b[u - p][v - p],
                    _ => false,
                })
                .collect()
        })
        .collect()
}

fn complement_adj(a: &Adj) -> Adj {
    let n = a.len();
    (0..n).map(|u| (0..n).map(|v| u != v && !a[u][v]).collect()).collect()
}

fn join_adj(a: &Adj, b: &Adj) -> Adj {
    complement_adj(&union_adj(&complement_adj(a), &complement_adj(b)))
}

fn empty_adj(n: usize) -> Adj {
    vec![vec![false; n]; n]
}

fn connected(a: &Adj) -> bool {
    let n = a.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for v in 0..n {
            if a[u][v] && !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|x| x)
}

fn relabel(a: &Adj, rng: &mut ChaCha8Rng) -> Adj {
    let mut p: Vec<usize> = (0..a.len()).collect();
    p.shuffle(rng);
    (0..a.len()).map(|u| (0..a.len()).map(|v| a[p[u]][p[v]]).collect()).collect()
}

fn expand_pair(i: usize, j: usize, n: usize, m: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..=n).filter(|&x| x != i && x != j).collect();
    v.push(m);
    v.sort_unstable();
    v
}

fn expand_single(i: usize, n: usize) -> Vec<usize> {
    (0..=n).filter(|&x| x != i).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Class {
    Single(usize, usize),
    Pair(usize, usize, usize, usize),
}

/// Shape of a sorted integer spectrum of order `n`.
fn classify(v: &[usize]) -> Option<Class> {
    let n = v.len();
    let mut count = vec![0usize; n + 1];
    for &x in v {
        if x > n {
            return None;
        }
        count[x] += 1;
    }
    let missing: Vec<usize> = (0..=n).filter(|&x| count[x] == 0).collect();
    let doubled: Vec<usize> = (0..=n).filter(|&x| count[x] == 2).collect();
    if count.iter().any(|&c| c > 2) || count[0] != 1 {
        return None;
    }
    match (missing.as_slice(), doubled.as_slice()) {
        ([i], []) => Some(Class::Single(*i, n)),
        ([i, j], [m]) => Some(Class::Pair(*i, *j, n, *m)),
        _ => None,
    }
}

/// Connected graphs of order `n` with integral spectrum, as
/// (adjacency, sorted spectrum).
struct Census {
    by_order: BTreeMap<usize, Vec<(Adj, Vec<usize>)>>,
}

impl Census {
    fn build(max: usize) -> Census {
        let mut by_order = BTreeMap::new();
        for n in 1..=max {
            let rows = enumerate_connected(n, max)
                .unwrap()
                .iter()
                .filter_map(|g| {
                    let a = adj(g);
                    integral(&a).map(|s| (a, s))
                })
                .collect();
            by_order.insert(n, rows);
        }
        Census { by_order }
    }

    fn classes(&self, n: usize) -> impl Iterator<Item = Class> + '_ {
        self.by_order[&n].iter().filter_map(|(_, s)| classify(s))
    }

    fn pairs(&self, n: usize, m: usize) -> BTreeSet<(usize, usize)> {
        self.classes(n)
            .filter_map(|c| match c {
                Class::Pair(i, j, _, mm) if mm == m => Some((i, j)),
                _ => None,
            })
            .collect()
    }
}

fn library_pairs(n: usize, m: usize) -> BTreeSet<(usize, usize)> {
    integral_catalog(n, n)
        .unwrap()
        .graphs
        .iter()
        .filter_map(|e| match e.descriptor {
            Some(SetDescriptor::Pair(p)) if p.m == m => Some((p.i, p.j)),
            _ => None,
        })
        .collect()
}

fn fmt_set(s: &BTreeSet<(usize, usize)>) -> String {
    let v: Vec<String> = s.iter().map(|(i, j)| format!("({i},{j})")).collect();
    format!("{{{}}}", v.join(","))
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn criterion_1() -> Outcome {
    let printed = [
        vec![0, 1, 1, 4],
        vec![0, 1, 1, 3, 5],
        vec![0, 1, 1, 2, 4, 6],
        vec![0, 1, 1, 2, 3, 4, 7],
        vec![0, 1, 1, 2, 4, 5, 7],
        vec![0, 1, 1, 3, 4, 5, 6, 8],
        vec![0, 1, 1, 2, 3, 5, 6, 8],
        vec![0, 1, 1, 2, 3, 4, 5, 8],
        vec![0, 2, 2, 4],
        vec![0, 2, 2, 3, 5],
        vec![0, 1, 2, 2, 5, 6],
        vec![0, 1, 2, 2, 3, 5, 7],
        vec![0, 1, 2, 2, 3, 4, 6, 8],
        vec![0, 1, 2, 2, 3, 5, 7, 8],
    ];
    let start = Instant::now();
    let mut bad = Vec::new();
    let rows: Vec<&str> = GOLDEN_TABLE1.lines().skip(1).chain(GOLDEN_TABLE2.lines().skip(1)).collect();
    for (k, line) in rows.iter().enumerate() {
        let cert: ConstructionExpr = line.split('\t').nth(2).unwrap().parse().unwrap();
        let g = cert.evaluate().unwrap();
        if integral(&adj(&g)).as_ref() != printed.get(k) {
            bad.push(format!("row {} {cert}", k + 1));
        }
    }
    let diffs: usize = check_tables().unwrap().iter().map(|t| t.diff.len()).sum();
    let elapsed = start.elapsed();
    Outcome {
        pass: rows.len() == 14 && bad.is_empty() && diffs == 0 && elapsed.as_secs_f64() < 1.0,
        detail: format!("{} rows, {} spectrum mismatches {bad:?}, {diffs} golden diff lines, {elapsed:.1?}", rows.len(), bad.len()),
    }
}

/// Values of `i` for which `S{i,n-1}n^1` is realizable, `n >= 6`.
fn m1_list(n: usize) -> BTreeSet<(usize, usize)> {
    let is: Vec<usize> = match n % 4 {
        0 => (1..=(n - 2) / 2).map(|k| 2 * k).collect(),
        1 => (1..=(n - 3) / 2).map(|k| 2 * k).collect(),
        2 => (1..=(n - 4) / 2).map(|k| 2 * k + 1).collect(),
        _ => (1..=(n - 3) / 2).map(|k| 2 * k + 1).collect(),
    };
    is.into_iter().map(|i| (i, n - 1)).collect()
}

/// Realizable `S{i,j}n^2` with `i > 1`, `n >= 6`.
fn m2_list(n: usize) -> BTreeSet<(usize, usize)> {
    let is: Vec<usize> = match n % 4 {
        0 => (1..=(n - 6) / 2).map(|k| 2 * k + 2).collect(),
        1 => (1..=(n - 5) / 2).map(|k| 2 * k + 2).collect(),
        2 => (1..=(n - 4) / 2).map(|k| 2 * k + 1).collect(),
        _ => (1..=(n - 5) / 2).map(|k| 2 * k + 1).collect(),
    };
    let mut out: BTreeSet<_> = is.into_iter().map(|i| (i, n - 2)).collect();
    out.insert((if matches!(n % 4, 0 | 3) { n - 3 } else { n - 2 }, n - 1));
    out
}

fn criterion_2(census: &Census) -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for n in 6..=9 {
        let found = census.pairs(n, 1);
        let ok = found == m1_list(n) && library_pairs(n, 1) == found;
        pass &= ok;
        parts.push(format!("n={n} {}{}", fmt_set(&found), if ok { "" } else { " != list" }));
    }
    Outcome { pass, detail: format!("{}, {:.1?}", parts.join("; "), start.elapsed()) }
}

fn criterion_3(census: &Census) -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for n in 6..=9 {
        let found = census.pairs(n, 2);
        let (first, rest): (BTreeSet<_>, BTreeSet<_>) = found.iter().partition(|&&(i, _)| i == 1);
        let expected = m2_list(n);
        let ok = rest == expected && first.is_empty() && library_pairs(n, 2) == found;
        pass &= ok;
        let mut s = format!("n={n} {}", fmt_set(&rest));
        if rest != expected {
            s.push_str(&format!(" list {}", fmt_set(&expected)));
        }
        if !first.is_empty() {
            s.push_str(&format!(" and i=1 realizers {}", fmt_set(&first)));
        }
        parts.push(s);
    }
    Outcome { pass, detail: format!("{}, {:.1?}", parts.join("; "), start.elapsed()) }
}

fn criterion_4(census: &Census) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let pool: Vec<&Adj> = census.by_order.range(1..=8).flat_map(|(_, v)| v.iter().map(|(a, _)| a)).collect();
    let mut pieces: Vec<Adj> = pool.iter().map(|a| (*a).clone()).collect();
    for _ in 0..400 {
        let (a, b) = (pool.choose(&mut rng).unwrap(), pool.choose(&mut rng).unwrap());
        if a.len() + b.len() <= 8 {
            pieces.push(union_adj(a, b));
        }
    }
    let (mut tried, mut failures) = (0, Vec::new());
    while tried < 1000 {
        let g = relabel(pieces.choose(&mut rng).unwrap(), &mut rng);
        let h = relabel(pieces.choose(&mut rng).unwrap(), &mut rng);
        if g.len() + h.len() > 10 {
            continue;
        }
        tried += 1;
        let (sg, sh) = (multiset(&integral(&g).unwrap()), multiset(&integral(&h).unwrap()));
        let checks = [
            ("join", join_adj(&g, &h), join_spectrum(&sg, &sh).ok()),
            ("union", union_adj(&g, &h), Some(union_spectrum(&sg, &sh))),
            ("complement", complement_adj(&g), complement_spectrum(&sg, g.len()).ok()),
        ];
        for (op, composed, predicted) in checks {
            let direct = integer_spectrum(&to_graph(&composed)).ok();
            let oracle = integral(&composed).map(|v| multiset(&v));
            if predicted.is_none() || predicted != direct || predicted != oracle {
                failures.push(op);
            }
        }
    }
    let (mut classes, mut join_bad) = (0, 0);
    for n in 1..=7 {
        for g in enumerate_connected(n, n).unwrap() {
            classes += 1;
            let a = adj(&g);
            let has_n = eigenvalues(&a).iter().any(|&x| (x - n as f64).abs() < 1e-6);
            if n > 1 && has_n == connected(&complement_adj(&a)) {
                join_bad += 1;
            }
        }
    }
    Outcome {
        pass: failures.is_empty() && join_bad == 0,
        detail: format!(
            "{tried} pairs, {} calculus failures; join criterion over {classes} classes, {join_bad} exceptions",
            failures.len()
        ),
    }
}

fn parity_holds(i: usize, j: usize, n: usize, m: usize) -> bool {
    let same = (i + j) % 2 == m % 2;
    if matches!(n % 4, 0 | 3) {
        same
    } else {
        !same
    }
}

fn criterion_5(census: &Census) -> Outcome {
    let (mut seen, mut bad) = (0, Vec::new());
    for n in 1..=8 {
        for c in census.classes(n) {
            if let Class::Pair(i, j, n, m) = c {
                seen += 1;
                if !parity_holds(i, j, n, m) {
                    bad.push(format!("{c:?}"));
                }
            }
        }
    }
    Outcome { pass: seen > 0 && bad.is_empty(), detail: format!("{seen} realizers, {} exceptions {bad:?}", bad.len()) }
}

fn criterion_6(census: &Census) -> Outcome {
    let mut pass = true;
    let mut hits = Vec::new();
    for n in 2..=9 {
        for tag in [ConjectureTag::SinDoubleOne, ConjectureTag::Snn] {
            let r = scan_conjecture(tag, n, 9).unwrap();
            pass &= r.exhausted && r.found.is_empty();
        }
        for c in census.classes(n) {
            match c {
                Class::Pair(_, j, n, 1) if j == n => hits.push(format!("{c:?}")),
                Class::Single(i, n) if i == n => hits.push(format!("{c:?}")),
                _ => {}
            }
        }
    }
    Outcome {
        pass: pass && hits.is_empty(),
        detail: format!("scans exhausted for n <= 9, {} hits {hits:?}", hits.len()),
    }
}

fn criterion_7() -> Outcome {
    let realizer = Realizer::new(9);
    let k1 = empty_adj(1);
    let (mut certified, mut bad) = (0, Vec::new());
    let mut check = |what: String, a: &Adj, want: Vec<usize>| {
        if integral(a).as_ref() != Some(&want) {
            bad.push(what);
        }
    };
    let mut targets = Vec::new();
    for n in 1..=9 {
        for i in 1..=n {
            if let Ok(d) = SetDescriptor::single(i, n) {
                targets.push(d);
            }
        }
        for m in 1..=n {
            for j in 2..=n {
                for i in 1..j {
                    if let Ok(d) = SetDescriptor::pair(i, j, n, m) {
                        targets.push(d);
                    }
                }
            }
        }
    }
    for d in targets {
        let Some(c) = realizer.decide(&d).certificate().cloned() else { continue };
        certified += 1;
        let g = adj(&c.graph);
        match d {
            SetDescriptor::Pair(p) => {
                let (i, j, n, m) = (p.i, p.j, p.n, p.m);
                check(format!("{d}"), &g, expand_pair(i, j, n, m));
                check(format!("dual of {d}"), &join_adj(&complement_adj(&g), &k1), expand_pair(n - j + 1, n - i + 1, n + 1, n + 1 - m));
                check(format!("shift of {d}"), &join_adj(&k1, &union_adj(&k1, &g)), expand_pair(i + 1, j + 1, n + 2, m + 1));
            }
            SetDescriptor::Single(s) => {
                let (i, n) = (s.i, s.n);
                check(format!("{d}"), &g, expand_single(i, n));
                check(format!("shift of {d}"), &join_adj(&union_adj(&g, &empty_adj(2)), &k1), expand_pair(i + 1, n + 2, n + 3, 1));
            }
        }
    }
    Outcome { pass: certified > 0 && bad.is_empty(), detail: format!("{certified} certified descriptors, {} failures {bad:?}", bad.len()) }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

/// Connected isomorphism classes of order `n`, by marking the orbit of every
/// labeled graph under all vertex permutations.
fn brute_force_connected(n: usize) -> usize {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let index = |u: usize, v: usize| pairs.iter().position(|&p| p == (u.min(v), u.max(v))).unwrap();
    let maps: Vec<Vec<usize>> = permutations(n).iter().map(|p| pairs.iter().map(|&(u, v)| index(p[u], p[v])).collect()).collect();
    let total = 1usize << pairs.len();
    let mut seen = vec![false; total];
    let mut count = 0;
    for mask in 0..total {
        if seen[mask] {
            continue;
        }
        for map in &maps {
            let mut image = 0;
            for (e, &t) in map.iter().enumerate() {
                if mask >> e & 1 == 1 {
                    image |= 1 << t;
                }
            }
            seen[image] = true;
        }
        let mut a = empty_adj(n);
        for (e, &(u, v)) in pairs.iter().enumerate() {
            if mask >> e & 1 == 1 {
                a[u][v] = true;
                a[v][u] = true;
            }
        }
        if connected(&a) {
            count += 1;
        }
    }
    count
}

fn criterion_8() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for n in 4..=7 {
        let (oracle, got) = (brute_force_connected(n), enumerate_connected(n, n).unwrap().len());
        pass &= oracle == got;
        parts.push(format!("n={n} {got}/{oracle}"));
    }
    for n in [8, 9] {
        let profile = |s: Strategy| -> BTreeMap<(usize, Vec<usize>), usize> {
            let mut m = BTreeMap::new();
            for g in enumerate_connected_with(s, n, n).unwrap() {
                let mut d = g.degrees();
                d.sort_unstable();
                *m.entry((g.edge_count(), d)).or_insert(0) += 1;
            }
            m
        };
        let (a, b) = (profile(Strategy::Augmentation), profile(Strategy::ExtendAndDedup));
        let (ca, cb): (usize, usize) = (a.values().sum(), b.values().sum());
        pass &= a == b;
        parts.push(format!("n={n} {ca}/{cb}"));
    }
    Outcome { pass, detail: parts.join("; ") }
}

fn main() -> ExitCode {
    let census = Census::build(9);
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("golden tables", Box::new(criterion_1)),
        ("m=1 completeness n=6..9", Box::new(|| criterion_2(&census))),
        ("m=2 completeness n=6..9", Box::new(|| criterion_3(&census))),
        ("spectral calculus", Box::new(|| criterion_4(&census))),
        ("parity n<=8", Box::new(|| criterion_5(&census))),
        ("conjecture scans n<=9", Box::new(|| criterion_6(&census))),
        ("duality and shift transport n<=9", Box::new(criterion_7)),
        ("enumeration calibration", Box::new(criterion_8)),
    ];
    let mut unexpected = false;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let number = k + 1;
        let o = run();
        let known = KNOWN_RED.contains(&number);
        println!("criterion {number} {name}: {} {}{}", if o.pass { "PASS" } else { "FAIL" }, o.detail, if !o.pass && known { " [known]" } else { "" });
        unexpected |= !o.pass && !known;
    }
    if unexpected {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
