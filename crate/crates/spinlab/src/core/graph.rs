//! Weighted graphs: p vertices with a symmetric nonnegative-integer weight
//! matrix, zero diagonal. Doubles as the exponent table of an invariant
//! observable monomial and as the combinatorial input to the Kirchhoff
//! polynomial.

use serde::{Deserialize, Serialize};

use crate::core::multiindex::MultiIndex;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedGraph {
    p: usize,
    /// Upper triangle in lexicographic pair order (0,1),(0,2),...,(p-2,p-1).
    w: Vec<u32>,
}

/// Wire format: 1-based vertices, i < j.
#[derive(Serialize, Deserialize)]
struct GraphJson {
    p: usize,
    edges: Vec<(usize, usize, u32)>,
}

pub fn pair_index(p: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < p);
    // Offset of row i in the upper triangle, then the column.
    i * p - i * (i + 1) / 2 + (j - i - 1)
}

impl WeightedGraph {
    pub fn from_upper(p: usize, upper: &[u32]) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidGraph(format!("need p >= 2 vertices, got {p}")));
        }
        if upper.len() != p * (p - 1) / 2 {
            return Err(Error::InvalidGraph(format!(
                "expected {} weights for p={p}, got {}",
                p * (p - 1) / 2,
                upper.len()
            )));
        }
        Ok(WeightedGraph { p, w: upper.to_vec() })
    }

    pub fn from_edges(p: usize, edges: &[(usize, usize, u32)]) -> Result<Self> {
        let mut g = WeightedGraph::from_upper(p, &vec![0; p * (p - 1) / 2])?;
        for &(i, j, m) in edges {
            if i == 0 || j == 0 || i > p || j > p {
                return Err(Error::InvalidGraph(format!(
                    "edge ({i},{j}) out of range for p={p} (vertices are 1-based)"
                )));
            }
            if i >= j {
                return Err(Error::InvalidGraph(format!("edge ({i},{j}) must have i < j")));
            }
            g.w[pair_index(p, i - 1, j - 1)] += m;
        }
        Ok(g)
    }

    /// Exponent multiindex over the canonical pair observables of p sites.
    pub fn from_multiindex(p: usize, a: &MultiIndex) -> Result<Self> {
        WeightedGraph::from_upper(p, &a.0)
    }

    pub fn to_multiindex(&self) -> MultiIndex {
        MultiIndex(self.w.clone())
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn upper(&self) -> &[u32] {
        &self.w
    }

    pub fn weight(&self, i: usize, j: usize) -> u32 {
        if i == j {
            0
        } else {
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            self.w[pair_index(self.p, a, b)]
        }
    }

    pub fn degree(&self, i: usize) -> u64 {
        (0..self.p).map(|j| self.weight(i, j) as u64).sum()
    }

    pub fn degrees(&self) -> Vec<u64> {
        (0..self.p).map(|i| self.degree(i)).collect()
    }

    pub fn is_even(&self) -> bool {
        (0..self.p).all(|i| self.degree(i) % 2 == 0)
    }

    pub fn first_odd_vertex(&self) -> Option<usize> {
        (0..self.p).find(|&i| self.degree(i) % 2 == 1)
    }

    /// All vertex pairs in canonical order, 0-based.
    pub fn all_pairs(&self) -> Vec<(usize, usize)> {
        let mut v = Vec::with_capacity(self.w.len());
        for i in 0..self.p {
            for j in i + 1..self.p {
                v.push((i, j));
            }
        }
        v
    }

    /// Edges of the support graph in canonical lexicographic order.
    pub fn support_edges(&self) -> Vec<(usize, usize)> {
        self.all_pairs()
            .into_iter()
            .filter(|&(i, j)| self.weight(i, j) > 0)
            .collect()
    }

    /// Connectivity of the support graph.
    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.p];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for u in 0..self.p {
                if !seen[u] && self.weight(v, u) > 0 {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn scaled(&self, lambda: u32) -> WeightedGraph {
        WeightedGraph {
            p: self.p,
            w: self.w.iter().map(|m| m * lambda).collect(),
        }
    }

    pub fn max_weight(&self) -> u32 {
        self.w.iter().copied().max().unwrap_or(0)
    }

    /// Key identifying the graph up to vertex relabeling for small p:
    /// the lexicographically minimal upper triangle over all vertex
    /// permutations. Falls back to the raw triangle for larger graphs.
    pub fn canonical_key(&self) -> Vec<u32> {
        if self.p > 6 {
            return self.w.clone();
        }
        let mut perm: Vec<usize> = (0..self.p).collect();
        let mut best: Option<Vec<u32>> = None;
        permute_all(&mut perm, 0, &mut |perm| {
            let mut cand = Vec::with_capacity(self.w.len());
            for i in 0..self.p {
                for j in i + 1..self.p {
                    cand.push(self.weight(perm[i], perm[j]));
                }
            }
            if best.as_ref().map_or(true, |b| cand < *b) {
                best = Some(cand);
            }
        });
        best.unwrap()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let gj: GraphJson =
            serde_json::from_str(s).map_err(|e| Error::BadInput(format!("graph json: {e}")))?;
        WeightedGraph::from_edges(gj.p, &gj.edges)
    }

    pub fn to_json(&self) -> String {
        let edges: Vec<(usize, usize, u32)> = self
            .all_pairs()
            .into_iter()
            .filter(|&(i, j)| self.weight(i, j) > 0)
            .map(|(i, j)| (i + 1, j + 1, self.weight(i, j)))
            .collect();
        serde_json::to_string(&GraphJson { p: self.p, edges }).expect("graph serializes")
    }
}

fn permute_all(perm: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == perm.len() {
        f(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute_all(perm, k + 1, f);
        perm.swap(k, i);
    }
}
