//! Exhaustive search over connected graph classes.

use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::canon::canonize;
use crate::descriptor::{recognize, DoubledMissingPair, SetDescriptor, SingleMissing};
use crate::enumerate::{for_each_connected, MAX_ENUMERATION_ORDER};
use crate::error::SearchError;
use crate::graph::Graph;
use crate::graph6::encode_graph6;
use crate::spectra::{has_spectrum, integer_spectrum, SpectrumMultiset};

/// A connected Laplacian integral graph in canonical labeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralGraph {
    pub graph: Graph,
    pub spectrum: SpectrumMultiset,
    pub descriptor: Option<SetDescriptor>,
}

/// Every connected integral graph class of one order.
#[derive(Debug)]
pub struct IntegralCatalog {
    pub order: usize,
    /// Number of connected classes visited.
    pub enumerated: usize,
    /// Sorted by spectrum, then by graph.
    pub graphs: Vec<IntegralGraph>,
}

static CATALOGS: [OnceLock<IntegralCatalog>; MAX_ENUMERATION_ORDER] =
    [const { OnceLock::new() }; MAX_ENUMERATION_ORDER];

/// Builds (once per process) the catalog of order `n`.
pub fn integral_catalog(n: usize, budget: usize) -> Result<&'static IntegralCatalog, SearchError> {
    if n == 0 || n > budget.min(MAX_ENUMERATION_ORDER) {
        return Err(SearchError::BudgetExceeded { order: n, budget });
    }
    if let Some(c) = CATALOGS[n - 1].get() {
        return Ok(c);
    }
    let found = Mutex::new(Vec::new());
    let enumerated = for_each_connected(n, budget, |g| {
        if let Ok(spectrum) = integer_spectrum(g) {
            let descriptor = recognize(&spectrum);
            let graph = canonize(g).graph;
            found.lock().expect("no panics while holding the lock").push(IntegralGraph { graph, spectrum, descriptor });
        }
    })?;
    let mut graphs = found.into_inner().expect("no panics while holding the lock");
    graphs.sort_by(|a, b| (&a.spectrum, &a.graph).cmp(&(&b.spectrum, &b.graph)));
    Ok(CATALOGS[n - 1].get_or_init(|| IntegralCatalog { order: n, enumerated, graphs }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Found {
    pub graph: Graph,
    pub spectrum: SpectrumMultiset,
    pub descriptor: Option<SetDescriptor>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanReport {
    pub order: usize,
    /// Target spectrum or conjecture tag.
    pub target: String,
    pub found: Vec<Found>,
    pub exhausted: bool,
    pub enumerated_count: usize,
}

impl ScanReport {
    /// Header line followed by one tab-separated record per hit:
    /// descriptor, graph6, spectrum, flags.
    pub fn to_records(&self) -> String {
        let mut out = format!(
            "# order={} target={} exhausted={} enumerated={}\n",
            self.order, self.target, self.exhausted, self.enumerated_count
        );
        for f in &self.found {
            let d = f.descriptor.map(|d| d.to_string()).unwrap_or_else(|| "-".into());
            let flags = if f.graph.is_connected() { "connected" } else { "disconnected" };
            out.push_str(&format!("{d}\t{}\t{}\t{flags}\n", encode_graph6(&f.graph), f.spectrum));
        }
        out
    }
}

/// Trace, trace of `L²`, and the `Δ + 1 <= ρ` bound, checked before any
/// polynomial arithmetic.
fn passes_cheap_filters(g: &Graph, target: &SpectrumMultiset) -> bool {
    let edges = g.edge_count();
    if 2 * edges != target.sum() {
        return false;
    }
    let degrees = g.degrees();
    let sq: usize = degrees.iter().map(|d| d * d).sum();
    if sq + 2 * edges != target.sum_of_squares() {
        return false;
    }
    let max_degree = degrees.iter().copied().max().unwrap_or(0);
    if edges > 0 && max_degree + 1 > target.max_value().unwrap_or(0) {
        return false;
    }
    target.multiplicity(0) == 1
}

/// All connected classes of order `n` with spectrum exactly `target`.
pub fn find_realizers(target: &SpectrumMultiset, n: usize, budget: usize) -> Result<ScanReport, SearchError> {
    if target.order() != n {
        return Err(SearchError::TargetSize { size: target.order(), order: n });
    }
    if n == 0 || n > budget.min(MAX_ENUMERATION_ORDER) {
        return Err(SearchError::BudgetExceeded { order: n, budget });
    }
    let (found, enumerated_count) = match CATALOGS[n - 1].get() {
        Some(c) => {
            let found = c
                .graphs
                .iter()
                .filter(|e| &e.spectrum == target)
                .map(|e| Found { graph: e.graph.clone(), spectrum: e.spectrum.clone(), descriptor: e.descriptor })
                .collect();
            (found, c.enumerated)
        }
        None => {
            let hits = Mutex::new(Vec::new());
            let count = for_each_connected(n, budget, |g| {
                if passes_cheap_filters(g, target) && has_spectrum(g, target) {
                    hits.lock().expect("no panics while holding the lock").push(canonize(g).graph);
                }
            })?;
            let mut graphs = hits.into_inner().expect("no panics while holding the lock");
            graphs.sort();
            let descriptor = recognize(target);
            let found = graphs.into_iter().map(|graph| Found { graph, spectrum: target.clone(), descriptor }).collect();
            (found, count)
        }
    };
    Ok(ScanReport { order: n, target: target.to_string(), found, exhausted: true, enumerated_count })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConjectureTag {
    /// `S{i,n}n^1` is never realizable.
    SinDoubleOne,
    /// `S{1,j}n^2` is not realizable for `n >= 6`.
    S1jDoubleTwo,
    /// `S{n}n` is not realizable for `n >= 2`.
    Snn,
}

impl ConjectureTag {
    pub const ALL: [ConjectureTag; 3] = [ConjectureTag::SinDoubleOne, ConjectureTag::S1jDoubleTwo, ConjectureTag::Snn];

    pub fn matches(&self, d: &SetDescriptor) -> bool {
        match (self, d) {
            (ConjectureTag::SinDoubleOne, SetDescriptor::Pair(p)) => p.j == p.n && p.m == 1,
            (ConjectureTag::S1jDoubleTwo, SetDescriptor::Pair(p)) => p.i == 1 && p.m == 2,
            (ConjectureTag::Snn, SetDescriptor::Single(s)) => s.i == s.n,
            _ => false,
        }
    }
}

impl fmt::Display for ConjectureTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConjectureTag::SinDoubleOne => "S_i_n_double1",
            ConjectureTag::S1jDoubleTwo => "S_1j_double2",
            ConjectureTag::Snn => "S_nn",
        })
    }
}

/// Every connected class of order `n` realizing a member of the family.
pub fn scan_conjecture(tag: ConjectureTag, n: usize, budget: usize) -> Result<ScanReport, SearchError> {
    let catalog = integral_catalog(n, budget)?;
    let found = catalog
        .graphs
        .iter()
        .filter(|e| e.descriptor.is_some_and(|d| tag.matches(&d)))
        .map(|e| Found { graph: e.graph.clone(), spectrum: e.spectrum.clone(), descriptor: e.descriptor })
        .collect();
    Ok(ScanReport { order: n, target: tag.to_string(), found, exhausted: true, enumerated_count: catalog.enumerated })
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Structural facts the theory predicts for realizers of `d`. Each entry
/// names the property and whether `g` has it.
pub fn verify_structural_props(g: &Graph, d: &SetDescriptor) -> Vec<(String, bool)> {
    let n = g.order();
    let degrees = g.degrees();
    let min = degrees.iter().copied().min().unwrap_or(0);
    let max = degrees.iter().copied().max().unwrap_or(0);
    let pendant = degrees.iter().filter(|&&x| x == 1).count();
    let mut props = vec![
        ("spectrum matches".to_string(), integer_spectrum(g).as_ref() == Ok(&d.expand())),
        ("connected".to_string(), g.is_connected()),
    ];
    match *d {
        SetDescriptor::Pair(DoubledMissingPair { j, m: 1, .. }) if j + 1 == n => {
            props.push(("at least two pendant vertices".into(), pendant >= 2));
        }
        SetDescriptor::Pair(DoubledMissingPair { j, m: 1, .. }) if j == n => {
            props.push(("order at least 9".into(), n >= 9));
            props.push(("order not prime".into(), !is_prime(n)));
            props.push(("2 <= min degree <= max degree <= n-3".into(), 2 <= min && max + 3 <= n));
        }
        SetDescriptor::Pair(_) => {
            props.push(("2 <= min degree <= max degree <= n-3".into(), 2 <= min && max + 3 <= n));
        }
        SetDescriptor::Single(SingleMissing { .. }) => {
            let complement_disconnected = !g.complement().is_connected();
            props.push(("n in spectrum iff complement disconnected".into(), d.expand().contains(n) == complement_disconnected));
        }
    }
    props
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamily;

    fn spec(s: &str) -> SpectrumMultiset {
        s.parse().unwrap()
    }

    #[test]
    fn realizer_examples() {
        let r = find_realizers(&spec("0,1^2,4"), 4, 9).unwrap();
        assert!(r.exhausted);
        assert_eq!(r.enumerated_count, 6);
        assert_eq!(r.found.len(), 1);
        assert_eq!(r.found[0].graph, canonize(&GraphFamily::Star(4).build().unwrap()).graph);

        let r = find_realizers(&spec("0,2^2,4"), 4, 9).unwrap();
        assert_eq!(r.found.len(), 1);
        assert_eq!(r.found[0].graph, canonize(&GraphFamily::Cycle(4).build().unwrap()).graph);

        assert!(find_realizers(&spec("0,1,2,3"), 4, 9).unwrap().found.is_empty());
        assert!(matches!(find_realizers(&spec("0,1"), 4, 9), Err(SearchError::TargetSize { .. })));
        assert!(matches!(find_realizers(&spec("0^10"), 10, 9), Err(SearchError::BudgetExceeded { .. })));
    }

    #[test]
    fn catalog_and_streaming_agree() {
        for n in 1..=6 {
            let before: Vec<_> = (0..=n)
                .map(|i| SetDescriptor::single(i.max(1), n).unwrap().expand())
                .map(|t| find_realizers(&t, n, 9).unwrap())
                .collect();
            integral_catalog(n, 9).unwrap();
            for (k, r) in before.iter().enumerate() {
                let t = SetDescriptor::single(k.max(1), n).unwrap().expand();
                assert_eq!(&find_realizers(&t, n, 9).unwrap(), r);
            }
        }
    }

    #[test]
    fn catalog_counts() {
        // connected integral classes by order, counted independently
        let expected = [1, 1, 2, 5, 12, 37, 94];
        for n in 1..=7 {
            let c = integral_catalog(n, 9).unwrap();
            assert_eq!(c.graphs.len(), expected[n - 1], "n={n}");
        }
    }

    #[test]
    fn conjecture_scan_examples() {
        let r = scan_conjecture(ConjectureTag::SinDoubleOne, 6, 9).unwrap();
        assert!(r.exhausted && r.found.is_empty());
        assert_eq!(r.enumerated_count, 112);
        assert!(scan_conjecture(ConjectureTag::Snn, 5, 9).unwrap().found.is_empty());
        assert!(scan_conjecture(ConjectureTag::S1jDoubleTwo, 6, 9).unwrap().found.is_empty());
        // order 5 has S{1,4}5^2 = K_{2,3}
        assert_eq!(scan_conjecture(ConjectureTag::S1jDoubleTwo, 5, 9).unwrap().found.len(), 1);
        assert!(scan_conjecture(ConjectureTag::Snn, 5, 9).unwrap().to_records().starts_with("# order=5 target=S_nn"));
    }

    #[test]
    fn structural_examples() {
        let star = GraphFamily::Star(4).build().unwrap();
        let props = verify_structural_props(&star, &"S{2,3}4^1".parse().unwrap());
        assert!(props.iter().all(|(_, ok)| *ok), "{props:?}");
        let c4 = GraphFamily::Cycle(4).build().unwrap();
        let props = verify_structural_props(&c4, &"S{1,3}4^2".parse().unwrap());
        assert!(props[0].1);
        let degree_clause = props.iter().find(|(p, _)| p.contains("max degree")).unwrap();
        assert!(!degree_clause.1);
    }

    #[test]
    fn primes() {
        let p: Vec<usize> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(p, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
