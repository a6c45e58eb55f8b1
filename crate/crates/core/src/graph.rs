//! Immutable simple graphs stored as one adjacency bit row per vertex.
//!
//! Binary operations follow a fixed labeling: the left operand keeps
//! vertices `0..n_left`, the right operand is shifted by `n_left`.

use std::fmt;

use crate::error::{GraphError, MAX_ORDER};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    rows: Vec<u64>,
}

fn check_order(n: usize) -> Result<(), GraphError> {
    if n == 0 {
        Err(GraphError::EmptyGraph)
    } else if n > MAX_ORDER {
        Err(GraphError::Capacity { requested: n, max: MAX_ORDER })
    } else {
        Ok(())
    }
}

#[inline]
fn bit(v: usize) -> u64 {
    1u64 << v
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        check_order(n)?;
        Ok(Graph { rows: vec![0; n] })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        check_order(n)?;
        let mut rows = vec![0u64; n];
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(GraphError::InvalidFamily {
                    family: "edge list",
                    reason: format!("edge ({u},{v}) is a loop or out of range for order {n}"),
                });
            }
            rows[u] |= bit(v);
            rows[v] |= bit(u);
        }
        Ok(Graph { rows })
    }

    /// Builds a graph from raw rows. Rows must be symmetric with an empty diagonal.
    pub(crate) fn from_rows_unchecked(rows: Vec<u64>) -> Self {
        debug_assert!(rows.iter().enumerate().all(|(v, r)| r & bit(v) == 0));
        Graph { rows }
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn row(&self, v: usize) -> u64 {
        self.rows[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u] & bit(v) != 0
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.order()).map(|v| self.degree(v)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.order()).flat_map(move |u| {
            let higher = self.rows[u] & !mask_below(u + 1);
            BitIter(higher).map(move |v| (u, v))
        })
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> {
        BitIter(self.rows[v])
    }

    fn full_mask(&self) -> u64 {
        mask_below(self.order())
    }

    pub fn union(&self, other: &Graph) -> Result<Graph, GraphError> {
        let n = self.order();
        check_order(n + other.order())?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().map(|r| r << n));
        Ok(Graph { rows })
    }

    pub fn join(&self, other: &Graph) -> Result<Graph, GraphError> {
        let n = self.order();
        let m = other.order();
        check_order(n + m)?;
        let left = mask_below(n);
        let right = mask_below(n + m) & !left;
        let mut rows: Vec<u64> = self.rows.iter().map(|r| r | right).collect();
        rows.extend(other.rows.iter().map(|r| (r << n) | left));
        Ok(Graph { rows })
    }

    pub fn complement(&self) -> Graph {
        let full = self.full_mask();
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(v, r)| !r & full & !bit(v))
            .collect();
        Graph { rows }
    }

    /// Cartesian product; vertex `(v, u)` is numbered `v * other.order() + u`.
    pub fn cartesian_product(&self, other: &Graph) -> Result<Graph, GraphError> {
        let n = self.order();
        let m = other.order();
        check_order(n * m)?;
        let mut rows = vec![0u64; n * m];
        for v in 0..n {
            for u in 0..m {
                let idx = v * m + u;
                for w in other.neighbors(u) {
                    rows[idx] |= bit(v * m + w);
                }
                for w in self.neighbors(v) {
                    rows[idx] |= bit(w * m + u);
                }
            }
        }
        Ok(Graph { rows })
    }

    /// Vertex sets of the connected components, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut unseen = self.full_mask();
        let mut components = Vec::new();
        while unseen != 0 {
            let start = unseen.trailing_zeros() as usize;
            let mut comp = bit(start);
            let mut frontier = comp;
            while frontier != 0 {
                let mut next = 0;
                for v in BitIter(frontier) {
                    next |= self.rows[v];
                }
                frontier = next & !comp;
                comp |= next;
            }
            unseen &= !comp;
            components.push(BitIter(comp).collect());
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        let mut comp = 1u64;
        let mut frontier = comp;
        while frontier != 0 {
            let mut next = 0;
            for v in BitIter(frontier) {
                next |= self.rows[v];
            }
            frontier = next & !comp;
            comp |= next;
        }
        comp == self.full_mask()
    }

    /// Relabels so that vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let n = self.order();
        let mut rows = vec![0u64; n];
        for v in 0..n {
            let mut r = 0;
            for w in self.neighbors(v) {
                r |= bit(perm[w]);
            }
            rows[perm[v]] = r;
        }
        Graph { rows }
    }

    /// Appends a vertex adjacent to the vertex set `neighbors`.
    pub(crate) fn with_vertex(&self, neighbors: u64) -> Graph {
        let n = self.order();
        let mut rows = self.rows.clone();
        for v in BitIter(neighbors) {
            rows[v] |= bit(n);
        }
        rows.push(neighbors);
        Graph { rows }
    }

    /// Undirected DOT, vertex ids `0..n`, no attributes.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph {\n");
        for v in 0..self.order() {
            out.push_str(&format!("  {v};\n"));
        }
        for (u, v) in self.edges() {
            out.push_str(&format!("  {u} -- {v};\n"));
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<_> = self.edges().collect();
        write!(f, "Graph(n={}, edges={:?})", self.order(), edges)
    }
}

pub(crate) fn mask_below(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates the set bits of a word, lowest first.
#[derive(Clone, Copy)]
pub(crate) struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }
}

/// Named graph families with canonical labeled representatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphFamily {
    Complete(usize),
    Path(usize),
    Cycle(usize),
    CompleteBipartite(usize, usize),
    /// `K_{1,n-1}`, parameterized by its order.
    Star(usize),
    AntiRegular(usize),
    /// `nK_1`.
    Empty(usize),
}

impl GraphFamily {
    pub fn name(&self) -> &'static str {
        match self {
            GraphFamily::Complete(_) => "complete graph",
            GraphFamily::Path(_) => "path",
            GraphFamily::Cycle(_) => "cycle",
            GraphFamily::CompleteBipartite(..) => "complete bipartite graph",
            GraphFamily::Star(_) => "star",
            GraphFamily::AntiRegular(_) => "anti-regular graph",
            GraphFamily::Empty(_) => "empty graph",
        }
    }

    pub fn order(&self) -> usize {
        match *self {
            GraphFamily::Complete(n)
            | GraphFamily::Path(n)
            | GraphFamily::Cycle(n)
            | GraphFamily::Star(n)
            | GraphFamily::AntiRegular(n)
            | GraphFamily::Empty(n) => n,
            GraphFamily::CompleteBipartite(p, q) => p + q,
        }
    }

    fn invalid(&self, reason: impl Into<String>) -> GraphError {
        GraphError::InvalidFamily { family: self.name(), reason: reason.into() }
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        match *self {
            GraphFamily::Cycle(n) if n < 3 => Err(self.invalid(format!("C_n needs n >= 3, got {n}"))),
            GraphFamily::Star(n) if n < 2 => Err(self.invalid(format!("star needs order >= 2, got {n}"))),
            GraphFamily::CompleteBipartite(p, q) if p == 0 || q == 0 => {
                Err(self.invalid(format!("K_{{p,q}} needs p, q >= 1, got ({p},{q})")))
            }
            _ if self.order() == 0 => Err(self.invalid("order must be positive")),
            _ => check_order(self.order()),
        }
    }

    pub fn build(&self) -> Result<Graph, GraphError> {
        self.validate()?;
        match *self {
            GraphFamily::Complete(n) => Ok(Graph::empty(n)?.complement()),
            GraphFamily::Empty(n) => Graph::empty(n),
            GraphFamily::Path(n) => {
                let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
                Graph::from_edges(n, &edges)
            }
            GraphFamily::Cycle(n) => {
                let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
                Graph::from_edges(n, &edges)
            }
            GraphFamily::CompleteBipartite(p, q) => Graph::empty(p)?.join(&Graph::empty(q)?),
            GraphFamily::Star(n) => Graph::empty(1)?.join(&Graph::empty(n - 1)?),
            GraphFamily::AntiRegular(n) => anti_regular(n),
        }
    }
}

/// `A_1 = K_1`, `A_2 = K_2`, `A_n = K_1 ∨ (A_{n-2} ∪ K_1)`.
fn anti_regular(n: usize) -> Result<Graph, GraphError> {
    let k1 = Graph::empty(1)?;
    match n {
        1 => Ok(k1),
        2 => k1.join(&k1),
        _ => k1.join(&anti_regular(n - 2)?.union(&k1)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_degrees(g: &Graph) -> Vec<usize> {
        let mut d = g.degrees();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    #[test]
    fn star_and_cycle_degrees() {
        let star = GraphFamily::CompleteBipartite(1, 3).build().unwrap();
        assert_eq!(star.order(), 4);
        assert_eq!(sorted_degrees(&star), vec![3, 1, 1, 1]);
        assert_eq!(GraphFamily::Star(4).build().unwrap(), star);
        let c4 = GraphFamily::Cycle(4).build().unwrap();
        assert!(c4.degrees().iter().all(|&d| d == 2));
    }

    #[test]
    fn anti_regular_degree_sequences() {
        let a5 = GraphFamily::AntiRegular(5).build().unwrap();
        assert!(a5.is_connected());
        assert_eq!(sorted_degrees(&a5), vec![4, 3, 2, 2, 1]);
        // exactly one repeated degree for every order
        for n in 2..12 {
            let d = sorted_degrees(&GraphFamily::AntiRegular(n).build().unwrap());
            let repeats = d.windows(2).filter(|w| w[0] == w[1]).count();
            assert_eq!(repeats, 1, "A_{n} degrees {d:?}");
        }
    }

    #[test]
    fn invalid_families() {
        assert!(GraphFamily::CompleteBipartite(0, 3).build().is_err());
        assert!(GraphFamily::Cycle(2).build().is_err());
        assert!(GraphFamily::Complete(65).build().is_err());
        assert!(GraphFamily::Empty(0).build().is_err());
    }

    #[test]
    fn union_join_examples() {
        let k1 = GraphFamily::Complete(1).build().unwrap();
        let k2 = GraphFamily::Complete(2).build().unwrap();
        let two_k1 = k1.union(&k1).unwrap();
        assert_eq!((two_k1.order(), two_k1.edge_count()), (2, 0));
        let g = k2.union(&two_k1).unwrap();
        assert_eq!((g.order(), g.edge_count()), (4, 1));
        let p3 = GraphFamily::Path(3).build().unwrap();
        let h = p3.union(&p3.complement()).unwrap();
        assert_eq!((h.order(), h.edge_count()), (6, 3));

        assert_eq!(k1.join(&k1).unwrap(), k2);
        let g2 = g.join(&k1).unwrap();
        assert_eq!((g2.order(), g2.edge_count()), (5, 5));
        let e4 = GraphFamily::Empty(4).build().unwrap();
        let star = e4.join(&k1).unwrap();
        assert_eq!(sorted_degrees(&star), vec![4, 1, 1, 1, 1]);
    }

    #[test]
    fn complement_examples() {
        let k4 = GraphFamily::Complete(4).build().unwrap();
        assert_eq!(k4.complement(), GraphFamily::Empty(4).build().unwrap());
        let p3c = GraphFamily::Path(3).build().unwrap().complement();
        assert_eq!(p3c.edge_count(), 1);
        assert_eq!(p3c.degree(1), 0);
        let c4c = GraphFamily::Cycle(4).build().unwrap().complement();
        assert_eq!(c4c, Graph::from_edges(4, &[(0, 2), (1, 3)]).unwrap());
    }

    #[test]
    fn cartesian_examples() {
        let k2 = GraphFamily::Complete(2).build().unwrap();
        let sq = k2.cartesian_product(&k2).unwrap();
        assert_eq!(sq.edge_count(), 4);
        assert!(sq.degrees().iter().all(|&d| d == 2) && sq.is_connected());
        let p3 = GraphFamily::Path(3).build().unwrap();
        let k1 = GraphFamily::Complete(1).build().unwrap();
        assert_eq!(p3.cartesian_product(&k1).unwrap(), p3);
        let ladder = GraphFamily::Path(2).build().unwrap().cartesian_product(&p3).unwrap();
        assert_eq!((ladder.order(), ladder.edge_count()), (6, 7));
    }

    #[test]
    fn components() {
        let k2 = GraphFamily::Complete(2).build().unwrap();
        let g = k2.union(&GraphFamily::Empty(2).build().unwrap()).unwrap();
        assert_eq!(g.connected_components(), vec![vec![0, 1], vec![2], vec![3]]);
        assert_eq!(GraphFamily::Cycle(4).build().unwrap().connected_components().len(), 1);
        let p3c = GraphFamily::Path(3).build().unwrap().complement();
        assert_eq!(p3c.connected_components().len(), 2);
        assert!(!p3c.is_connected());
    }

    #[test]
    fn capacity_is_enforced() {
        let big = GraphFamily::Empty(40).build().unwrap();
        assert!(matches!(big.union(&big), Err(GraphError::Capacity { requested: 80, .. })));
        assert!(big.join(&GraphFamily::Empty(24).build().unwrap()).is_ok());
    }

    #[test]
    fn dot_output() {
        let dot = GraphFamily::Path(2).build().unwrap().to_dot();
        assert_eq!(dot, "graph {\n  0;\n  1;\n  0 -- 1;\n}\n");
    }
}
