//! Sparse matrices over the (min, +) semiring.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{dist_add, Graph, NodeId, Weight, INF};

/// Square `n x n` matrix over (min, +). Absent entries are infinity.
///
/// Rows are stored sorted by column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalMatrix {
    n: usize,
    rows: Vec<Vec<(NodeId, Weight)>>,
}

impl TropicalMatrix {
    /// All-infinity matrix.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            rows: vec![Vec::new(); n],
        }
    }

    /// Zero diagonal, infinity elsewhere; the unit of the distance product.
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            rows: (0..n).map(|i| vec![(i, 0)]).collect(),
        }
    }

    /// Builds from row lists; entries may be unsorted, duplicates keep the minimum,
    /// infinite values are dropped.
    pub fn from_rows(n: usize, rows: Vec<Vec<(NodeId, Weight)>>) -> Self {
        assert_eq!(rows.len(), n, "row count must equal dimension");
        let rows = rows
            .into_iter()
            .map(|mut row| {
                row.retain(|&(c, w)| {
                    assert!(c < n, "column {c} out of range");
                    w != INF
                });
                row.sort_unstable();
                row.dedup_by_key(|e| e.0);
                row
            })
            .collect();
        Self { n, rows }
    }

    /// Weighted adjacency with zero diagonal (edges in both directions if undirected).
    pub fn adjacency(g: &Graph) -> Self {
        let rows = (0..g.n())
            .map(|u| {
                let mut row: Vec<(NodeId, Weight)> = g.neighbors(u).to_vec();
                row.push((u, 0));
                row
            })
            .collect();
        Self::from_rows(g.n(), rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, r: NodeId) -> &[(NodeId, Weight)] {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[Vec<(NodeId, Weight)>] {
        &self.rows
    }

    pub fn get(&self, r: NodeId, c: NodeId) -> Weight {
        match self.rows[r].binary_search_by_key(&c, |e| e.0) {
            Ok(i) => self.rows[r][i].1,
            Err(_) => INF,
        }
    }

    /// Number of finite entries.
    pub fn nnz(&self) -> u64 {
        self.rows.iter().map(|r| r.len() as u64).sum()
    }

    /// Density `nnz / n` as an exact fraction `(nnz, n)`.
    pub fn density(&self) -> (u64, u64) {
        (self.nnz(), self.n as u64)
    }

    pub fn transpose(&self) -> Self {
        let mut rows = vec![Vec::new(); self.n];
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, w) in row {
                rows[c].push((r, w));
            }
        }
        Self { n: self.n, rows }
    }

    /// Distance product `(self * other)[i][j] = min_k self[i][k] + other[k][j]`.
    pub fn product(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut scratch = vec![INF; n];
        let mut touched: Vec<NodeId> = Vec::new();
        let rows = self
            .rows
            .iter()
            .map(|row| {
                for &(k, a) in row {
                    for &(j, b) in &other.rows[k] {
                        let s = dist_add(a, b);
                        if scratch[j] == INF {
                            touched.push(j);
                        }
                        if s < scratch[j] {
                            scratch[j] = s;
                        }
                    }
                }
                touched.sort_unstable();
                let out = touched
                    .iter()
                    .filter(|&&j| scratch[j] != INF)
                    .map(|&j| (j, scratch[j]))
                    .collect();
                for &j in &touched {
                    scratch[j] = INF;
                }
                touched.clear();
                out
            })
            .collect();
        Self { n, rows }
    }
}

/// `h`-fold distance product of `a` with itself, `h >= 1`.
pub fn minplus_power(a: &TropicalMatrix, h: u32) -> TropicalMatrix {
    assert!(h >= 1, "power must be positive");
    let mut acc = a.clone();
    for _ in 1..h {
        acc = acc.product(a);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    #[test]
    fn identity_is_unit() {
        let id = TropicalMatrix::identity(4);
        assert_eq!(minplus_power(&id, 5), id);
        let m = TropicalMatrix::from_rows(2, vec![vec![(0, 0), (1, 5)], vec![(1, 0)]]);
        assert_eq!(minplus_power(&m, 3).get(0, 1), 5);
        let id2 = TropicalMatrix::identity(2);
        assert_eq!(id2.product(&m), m);
        assert_eq!(m.product(&id2), m);
    }

    #[test]
    fn adjacency_of_path() {
        let g = Graph::undirected(3, [Edge::new(0, 1, 1), Edge::new(1, 2, 1)]).unwrap();
        let a = TropicalMatrix::adjacency(&g);
        assert_eq!(a.get(0, 2), INF);
        assert_eq!(minplus_power(&a, 2).get(0, 2), 2);
        assert_eq!(a.density(), (7, 3));
    }
}
