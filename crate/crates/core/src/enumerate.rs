//! Isomorph-free enumeration of graphs by vertex extension.
//!
//! Two independent strategies:
//!
//! * [`Strategy::Augmentation`]: canonical augmentation. Each parent is
//!   extended once per orbit of its automorphism group on vertex subsets, and
//!   a child is kept only when the new vertex is in the orbit of the child's
//!   canonical deletion vertex (maximum degree, smallest canonical label).
//! * [`Strategy::ExtendAndDedup`]: extend every parent by every subset that
//!   makes the new vertex one of maximum degree, then deduplicate by
//!   canonical form.
//!
//! Connectivity is only imposed at the final order.

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::canon::canonize;
use crate::error::SearchError;
use crate::graph::{mask_below, BitIter, Graph};

pub const DEFAULT_BUDGET: usize = 9;
/// Largest order any budget may reach.
pub const MAX_ENUMERATION_ORDER: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Augmentation,
    ExtendAndDedup,
}

fn check_budget(n: usize, budget: usize) -> Result<(), SearchError> {
    let budget = budget.min(MAX_ENUMERATION_ORDER);
    if n == 0 || n > budget {
        Err(SearchError::BudgetExceeded { order: n, budget })
    } else {
        Ok(())
    }
}

/// One representative of every connected graph class of order `n`.
pub fn enumerate_connected(n: usize, budget: usize) -> Result<Vec<Graph>, SearchError> {
    enumerate_connected_with(Strategy::Augmentation, n, budget)
}

pub fn enumerate_connected_with(strategy: Strategy, n: usize, budget: usize) -> Result<Vec<Graph>, SearchError> {
    check_budget(n, budget)?;
    Ok(match strategy {
        Strategy::Augmentation => {
            if n == 1 {
                return Ok(vec![k1()]);
            }
            all_graphs(n - 1)
                .par_iter()
                .flat_map_iter(|p| {
                    let mut out = Vec::new();
                    augment(p, |c| {
                        if c.is_connected() {
                            out.push(c)
                        }
                    });
                    out
                })
                .collect()
        }
        Strategy::ExtendAndDedup => dedup_level(n, true),
    })
}

/// Calls `f` on every connected class of order `n`, in parallel, without
/// materializing the whole order.
pub fn for_each_connected<F>(n: usize, budget: usize, f: F) -> Result<usize, SearchError>
where
    F: Fn(&Graph) + Sync,
{
    check_budget(n, budget)?;
    if n == 1 {
        f(&k1());
        return Ok(1);
    }
    let count = all_graphs(n - 1)
        .par_iter()
        .map(|p| {
            let mut k = 0;
            augment(p, |c| {
                if c.is_connected() {
                    f(&c);
                    k += 1;
                }
            });
            k
        })
        .sum();
    Ok(count)
}

fn k1() -> Graph {
    Graph::empty(1).expect("order 1 is valid")
}

static LEVELS: [OnceLock<Vec<Graph>>; MAX_ENUMERATION_ORDER] = [const { OnceLock::new() }; MAX_ENUMERATION_ORDER];

/// Every graph class of order `n` (connected or not), memoized.
fn all_graphs(n: usize) -> &'static [Graph] {
    LEVELS[n - 1].get_or_init(|| {
        if n == 1 {
            return vec![k1()];
        }
        all_graphs(n - 1)
            .par_iter()
            .flat_map_iter(|p| {
                let mut out = Vec::new();
                augment(p, |c| out.push(c));
                out
            })
            .collect()
    })
}

/// Extends `parent` by one vertex in every way that passes the canonical
/// augmentation test.
fn augment(parent: &Graph, mut emit: impl FnMut(Graph)) {
    let m = parent.order();
    let degrees = parent.degrees();
    let reps = subset_orbit_representatives(m, &canonize(parent).generators);
    for mask in reps {
        let d = mask.count_ones() as usize;
        let child_degree = |v: usize| degrees[v] + ((mask >> v) & 1) as usize;
        let max_old = (0..m).map(child_degree).max().unwrap_or(0);
        if d < max_old {
            continue;
        }
        let child = parent.with_vertex(mask);
        if d > max_old {
            emit(child);
            continue;
        }
        let canon = canonize(&child);
        let deletion = (0..=m)
            .filter(|&v| child.degree(v) == d)
            .min_by_key(|&v| canon.labeling[v])
            .expect("new vertex has maximum degree");
        let orb = canon.orbits();
        if orb[deletion] == orb[m] {
            emit(child);
        }
    }
}

/// The smallest subset in each orbit of the group on subsets of `0..m`.
fn subset_orbit_representatives(m: usize, generators: &[Vec<usize>]) -> Vec<u64> {
    let count = 1usize << m;
    if generators.is_empty() {
        return (0..count as u64).collect();
    }
    let mut seen = vec![false; count];
    let mut reps = Vec::new();
    let mut stack = Vec::new();
    for start in 0..count {
        if seen[start] {
            continue;
        }
        reps.push(start as u64);
        seen[start] = true;
        stack.push(start as u64);
        while let Some(s) = stack.pop() {
            for gen in generators {
                let image = BitIter(s).fold(0u64, |acc, v| acc | 1 << gen[v]) as usize;
                if !seen[image] {
                    seen[image] = true;
                    stack.push(image as u64);
                }
            }
        }
    }
    reps
}

/// Upper triangle of a canonical graph packed column by column.
fn pack(g: &Graph) -> u128 {
    let mut key = 0u128;
    for j in 1..g.order() {
        key = (key << j) | (g.row(j) & mask_below(j)) as u128;
    }
    key
}

fn unpack(n: usize, mut key: u128) -> Graph {
    let mut rows = vec![0u64; n];
    for j in (1..n).rev() {
        let r = (key & ((1u128 << j) - 1)) as u64;
        key >>= j;
        rows[j] |= r;
        for i in BitIter(r) {
            rows[i] |= 1 << j;
        }
    }
    Graph::from_rows_unchecked(rows)
}

fn dedup_level(n: usize, connected: bool) -> Vec<Graph> {
    if n == 1 {
        return vec![k1()];
    }
    let parents = dedup_level(n - 1, false);
    let mut keys: Vec<u128> = parents
        .par_iter()
        .flat_map_iter(|p| {
            let m = p.order();
            let degrees = p.degrees();
            let mut out = Vec::new();
            for mask in 0..1u64 << m {
                let d = mask.count_ones() as usize;
                if (0..m).any(|v| degrees[v] + ((mask >> v) & 1) as usize > d) {
                    continue;
                }
                let child = p.with_vertex(mask);
                if !connected || child.is_connected() {
                    out.push(pack(&canonize(&child).graph));
                }
            }
            out
        })
        .collect();
    keys.par_sort_unstable();
    keys.dedup();
    keys.into_iter().map(|k| unpack(n, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_form;
    use std::collections::HashSet;

    const CONNECTED: [usize; 8] = [1, 1, 2, 6, 21, 112, 853, 11117];
    const ALL: [usize; 8] = [1, 2, 4, 11, 34, 156, 1044, 12346];

    #[test]
    fn small_counts_both_strategies() {
        for n in 1..=7 {
            let a = enumerate_connected_with(Strategy::Augmentation, n, 9).unwrap();
            let b = enumerate_connected_with(Strategy::ExtendAndDedup, n, 9).unwrap();
            assert_eq!(a.len(), CONNECTED[n - 1], "augmentation n={n}");
            assert_eq!(b.len(), CONNECTED[n - 1], "dedup n={n}");
            assert_eq!(all_graphs(n).len(), ALL[n - 1], "all graphs n={n}");
            assert_eq!(dedup_level(n, false).len(), ALL[n - 1]);
            let forms: HashSet<_> = a.iter().map(canonical_form).collect();
            assert_eq!(forms.len(), a.len());
            assert!(a.iter().all(Graph::is_connected));
            let b_forms: HashSet<_> = b.iter().map(canonical_form).collect();
            assert_eq!(forms, b_forms);
        }
    }

    #[test]
    fn visitor_matches_materialized() {
        let count = std::sync::atomic::AtomicUsize::new(0);
        let n = for_each_connected(6, 9, |_| {
            count.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        })
        .unwrap();
        assert_eq!(n, 112);
        assert_eq!(count.into_inner(), 112);
    }

    #[test]
    fn budget_is_enforced() {
        assert_eq!(
            enumerate_connected(10, 9).unwrap_err(),
            SearchError::BudgetExceeded { order: 10, budget: 9 }
        );
        assert!(enumerate_connected(11, 20).is_err());
        assert!(enumerate_connected(0, 9).is_err());
        assert_eq!(enumerate_connected(1, 9).unwrap().len(), 1);
    }

    #[test]
    fn pack_roundtrip() {
        let g = crate::graph::GraphFamily::Cycle(9).build().unwrap();
        assert_eq!(unpack(9, pack(&g)), g);
    }
}
