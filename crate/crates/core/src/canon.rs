//! Canonical labeling by individualization and refinement.
//!
//! Partitions are ordered lists of cells, each cell a vertex bitmask. The
//! search tree individualizes vertices of the first nontrivial cell, prunes
//! children by orbits of automorphisms found so far, and backjumps when a leaf
//! reproduces the first leaf. The canonical graph is the relabeling that is
//! greatest in row order among the leaves visited.

use std::collections::VecDeque;

use crate::graph::{BitIter, Graph};
use crate::graph6::encode_graph6;

/// Permutation-invariant encoding of an isomorphism class: the graph6 bytes
/// of the canonical relabeling.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub bytes: Vec<u8>,
}

#[derive(Debug, Clone)]
pub struct Canon {
    /// `labeling[v]` is the canonical label of vertex `v`.
    pub labeling: Vec<usize>,
    pub graph: Graph,
    /// Generators of the automorphism group, as vertex maps.
    pub generators: Vec<Vec<usize>>,
}

impl Canon {
    pub fn form(&self) -> CanonicalForm {
        CanonicalForm { bytes: encode_graph6(&self.graph).into_bytes() }
    }

    /// Smallest vertex of each vertex's automorphism orbit.
    pub fn orbits(&self) -> Vec<usize> {
        orbits(self.labeling.len(), &self.generators)
    }
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    canonize(g).form()
}

pub fn canonize(g: &Graph) -> Canon {
    let n = g.order();
    let all = crate::graph::mask_below(n);
    let mut cells = vec![all];
    let mut queue = VecDeque::from([all]);
    refine(g, &mut cells, &mut queue);
    let mut s = Search { g, first: None, first_path: Vec::new(), best: None, generators: Vec::new() };
    s.descend(cells, &mut Vec::new());
    let (labeling, graph) = s.best.expect("search reaches at least one leaf");
    Canon { labeling, graph, generators: s.generators }
}

/// Splits cells until every cell is uniform with respect to each splitter.
/// Fragments keep the position of their parent cell, ordered by neighbor
/// count, so the result is invariant under relabeling.
fn refine(g: &Graph, cells: &mut Vec<u64>, queue: &mut VecDeque<u64>) {
    let mut groups: Vec<(u32, u64)> = Vec::new();
    while let Some(w) = queue.pop_front() {
        if cells.len() == g.order() {
            return;
        }
        let mut idx = 0;
        while idx < cells.len() {
            let cell = cells[idx];
            if cell & (cell - 1) == 0 {
                idx += 1;
                continue;
            }
            groups.clear();
            for v in BitIter(cell) {
                let c = (g.row(v) & w).count_ones();
                match groups.iter_mut().find(|(k, _)| *k == c) {
                    Some((_, m)) => *m |= 1 << v,
                    None => groups.push((c, 1 << v)),
                }
            }
            if groups.len() == 1 {
                idx += 1;
                continue;
            }
            groups.sort_unstable_by_key(|&(k, _)| k);
            cells.splice(idx..=idx, groups.iter().map(|&(_, m)| m));
            queue.extend(groups.iter().map(|&(_, m)| m));
            idx += groups.len();
        }
    }
}

fn individualize(g: &Graph, cells: &[u64], target: usize, v: usize) -> Vec<u64> {
    let mut next = Vec::with_capacity(cells.len() + 1);
    next.extend_from_slice(&cells[..target]);
    next.push(1 << v);
    next.push(cells[target] & !(1 << v));
    next.extend_from_slice(&cells[target + 1..]);
    let mut queue = VecDeque::from([1u64 << v]);
    refine(g, &mut next, &mut queue);
    next
}

struct Search<'a> {
    g: &'a Graph,
    first: Option<(Vec<usize>, Graph)>,
    first_path: Vec<usize>,
    best: Option<(Vec<usize>, Graph)>,
    generators: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Returns `Some(level)` to abandon every node deeper than `level`.
    fn descend(&mut self, cells: Vec<u64>, path: &mut Vec<usize>) -> Option<usize> {
        let n = self.g.order();
        if cells.len() == n {
            return self.leaf(&cells, path);
        }
        let target = cells.iter().position(|c| c & (c - 1) != 0).expect("partition is not discrete");
        let level = path.len();
        let mut tried: Vec<usize> = Vec::new();
        for v in BitIter(cells[target]) {
            if !tried.is_empty() && !self.generators.is_empty() {
                let orb = orbits_fixing(n, &self.generators, path);
                if tried.iter().any(|&u| orb[u] == orb[v]) {
                    continue;
                }
            }
            path.push(v);
            let jump = self.descend(individualize(self.g, &cells, target, v), path);
            path.pop();
            if let Some(to) = jump {
                if to < level {
                    return Some(to);
                }
            }
            tried.push(v);
        }
        None
    }

    fn leaf(&mut self, cells: &[u64], path: &[usize]) -> Option<usize> {
        let mut labeling = vec![0; cells.len()];
        for (k, &c) in cells.iter().enumerate() {
            labeling[c.trailing_zeros() as usize] = k;
        }
        let h = self.g.permuted(&labeling);
        let Some((first_labels, first_graph)) = &self.first else {
            self.first = Some((labeling.clone(), h.clone()));
            self.first_path = path.to_vec();
            self.best = Some((labeling, h));
            return None;
        };
        if &h == first_graph {
            self.generators.push(automorphism(first_labels, &labeling));
            let common = path.iter().zip(&self.first_path).take_while(|(a, b)| a == b).count();
            return Some(common);
        }
        let (best_labels, best_graph) = self.best.as_ref().expect("set with first");
        match h.cmp(best_graph) {
            std::cmp::Ordering::Greater => self.best = Some((labeling, h)),
            std::cmp::Ordering::Equal => {
                let gamma = automorphism(best_labels, &labeling);
                self.generators.push(gamma);
            }
            std::cmp::Ordering::Less => {}
        }
        None
    }
}

/// The vertex map `v ↦ w` with `reference[w] = other[v]`.
fn automorphism(reference: &[usize], other: &[usize]) -> Vec<usize> {
    let mut inverse = vec![0; reference.len()];
    for (w, &label) in reference.iter().enumerate() {
        inverse[label] = w;
    }
    other.iter().map(|&label| inverse[label]).collect()
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

/// Orbit representative (smallest member) per vertex under the group
/// generated by `generators`.
pub fn orbits(n: usize, generators: &[Vec<usize>]) -> Vec<usize> {
    orbits_fixing(n, generators, &[])
}

fn orbits_fixing(n: usize, generators: &[Vec<usize>], fixed: &[usize]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    for gen in generators {
        if fixed.iter().any(|&v| gen[v] != v) {
            continue;
        }
        for v in 0..n {
            let (a, b) = (find(&mut parent, v), find(&mut parent, gen[v]));
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi] = lo;
            }
        }
    }
    (0..n).map(|v| find(&mut parent, v)).collect()
}
