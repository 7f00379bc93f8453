//! Ground-truth and learned interaction graphs over feature columns.

use crate::{Error, Result};

/// p×p binary graph structure with a hollow diagonal (self-interactions are
/// not allowed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryAdjacency {
    p: usize,
    entries: Vec<u8>,
}

impl BinaryAdjacency {
    pub fn zeros(p: usize) -> Self {
        Self {
            p,
            entries: vec![0; p * p],
        }
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let p = rows.len();
        let mut adj = Self::zeros(p);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != p {
                return Err(Error::InvalidInput(format!(
                    "adjacency row {i} has {} entries, expected {p}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v > 1 {
                    return Err(Error::InvalidInput(format!(
                        "adjacency entry ({i},{j}) = {v} not in {{0,1}}"
                    )));
                }
                if i == j && v != 0 {
                    return Err(Error::InvalidInput(format!(
                        "adjacency diagonal ({i},{i}) must be 0"
                    )));
                }
                adj.entries[i * p + j] = v;
            }
        }
        Ok(adj)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.p + j]
    }

    /// Sets an off-diagonal entry; the diagonal stays 0 by construction.
    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        assert!(i != j, "diagonal entries are fixed at 0");
        assert!(v <= 1);
        self.entries[i * self.p + j] = v;
    }

    pub fn edge_count(&self) -> usize {
        self.entries.iter().filter(|&&v| v == 1).count()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.p)
            .map(|i| self.entries[i * self.p..(i + 1) * self.p].to_vec())
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.p).all(|i| (0..self.p).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Sub-matrix with one node removed (used for graph-level masks that
    /// have no target token).
    pub fn without_node(&self, node: usize) -> BinaryAdjacency {
        assert!(node < self.p);
        let mut out = BinaryAdjacency::zeros(self.p - 1);
        for i in 0..self.p {
            if i == node {
                continue;
            }
            for j in 0..self.p {
                if j == node || i == j {
                    continue;
                }
                let oi = if i < node { i } else { i - 1 };
                let oj = if j < node { j } else { j - 1 };
                out.entries[oi * out.p + oj] = self.get(i, j);
            }
        }
        out
    }
}

/// p×p learned interaction strengths in [0,1] with a hollow diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedAdjacency {
    p: usize,
    entries: Vec<f64>,
}

impl WeightedAdjacency {
    pub fn zeros(p: usize) -> Self {
        Self {
            p,
            entries: vec![0.0; p * p],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let p = rows.len();
        let mut adj = Self::zeros(p);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != p {
                return Err(Error::InvalidInput(format!(
                    "adjacency row {i} has {} entries, expected {p}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&v) || !v.is_finite() {
                    return Err(Error::InvalidInput(format!(
                        "weighted entry ({i},{j}) = {v} not in [0,1]"
                    )));
                }
                if i == j && v != 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "weighted diagonal ({i},{i}) must be 0"
                    )));
                }
                adj.entries[i * p + j] = v;
            }
        }
        Ok(adj)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.p + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(i != j, "diagonal entries are fixed at 0");
        debug_assert!((0.0..=1.0).contains(&v));
        self.entries[i * self.p + j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.p)
            .map(|i| self.entries[i * self.p..(i + 1) * self.p].to_vec())
            .collect()
    }

    /// Off-diagonal entries in row-major order as (i, j, weight).
    pub fn off_diagonal(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.p).flat_map(move |i| {
            (0..self.p)
                .filter(move |&j| j != i)
                .map(move |j| (i, j, self.get(i, j)))
        })
    }
}

/// Undirected view of a (possibly directed) truth graph: an edge in either
/// direction becomes an edge in both.
pub fn symmetrize(a: &BinaryAdjacency) -> BinaryAdjacency {
    let p = a.p();
    let mut out = BinaryAdjacency::zeros(p);
    for i in 0..p {
        for j in 0..p {
            if i != j {
                out.entries[i * p + j] = a.get(i, j).max(a.get(j, i));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn symmetrize_zero_is_zero() {
        let z = BinaryAdjacency::zeros(4);
        assert_eq!(symmetrize(&z), z);
    }

    #[test]
    fn symmetrize_single_edge_goes_both_ways() {
        let mut a = BinaryAdjacency::zeros(3);
        a.set(0, 1, 1);
        let s = symmetrize(&a);
        assert_eq!(s.get(0, 1), 1);
        assert_eq!(s.get(1, 0), 1);
        assert_eq!(s.edge_count(), 2);
    }

    #[test]
    fn diagonal_is_rejected() {
        assert!(BinaryAdjacency::from_rows(&[vec![1, 0], vec![0, 0]]).is_err());
        assert!(WeightedAdjacency::from_rows(&[vec![0.5, 0.0], vec![0.0, 0.0]]).is_err());
    }

    #[test]
    fn without_node_drops_row_and_col() {
        let mut a = BinaryAdjacency::zeros(3);
        a.set(0, 1, 1);
        a.set(1, 2, 1);
        let b = a.without_node(1);
        assert_eq!(b.p(), 2);
        assert_eq!(b.edge_count(), 0);
        let c = a.without_node(2);
        assert_eq!(c.get(0, 1), 1);
        assert_eq!(c.edge_count(), 1);
    }

    proptest! {
        #[test]
        fn symmetrize_idempotent_and_symmetric(seed in 0u64..200) {
            use rand::Rng;
            let mut rng = crate::SeededRng::new(seed);
            let p = 2 + (seed % 6) as usize;
            let mut a = BinaryAdjacency::zeros(p);
            for i in 0..p {
                for j in 0..p {
                    if i != j && rng.gen_bool(0.4) {
                        a.set(i, j, 1);
                    }
                }
            }
            let s = symmetrize(&a);
            prop_assert!(s.is_symmetric());
            prop_assert_eq!(symmetrize(&s), s.clone());
            // Already-symmetric input is a fixed point.
            if a.is_symmetric() {
                prop_assert_eq!(s, a);
            }
        }
    }
}
