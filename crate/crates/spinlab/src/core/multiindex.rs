//! Multiindices (exponent vectors) and parity check homomorphisms into
//! (Z/2Z)^L.

use serde::{Deserialize, Serialize};

use crate::core::graph::WeightedGraph;
use crate::{Error, Result};

/// Dense exponent vector a in N^n. The universal index for observables and
/// couplings; n stays small at desk scale so a dense layout wins.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zeros(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn from_slice(v: &[u32]) -> Self {
        MultiIndex(v.to_vec())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// The length |a| = a_1 + ... + a_n.
    pub fn length(&self) -> u64 {
        self.0.iter().map(|&x| x as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        assert_eq!(self.n(), other.n(), "multiindex dimension mismatch");
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scaled(&self, lambda: u32) -> MultiIndex {
        MultiIndex(self.0.iter().map(|a| a * lambda).collect())
    }

    /// Bitmask of the coordinates with odd entry. Requires n <= 64.
    pub fn odd_mask(&self) -> u64 {
        debug_assert!(self.n() <= 64);
        self.0
            .iter()
            .enumerate()
            .fold(0u64, |m, (j, &a)| m | (((a & 1) as u64) << j))
    }
}

/// Group homomorphism rho: Z^n -> (Z/2Z)^L stored as L bit-rows over the n
/// coordinates. A multiindex is even iff it maps to zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityMap {
    n: usize,
    /// Row l has bit j set iff observable j flips parity bit l.
    rows: Vec<u64>,
}

impl ParityMap {
    pub fn new(n: usize, rows: Vec<u64>) -> Result<Self> {
        if n > 64 {
            return Err(Error::SizeLimit(format!("parity maps support n <= 64, got {n}")));
        }
        if rows.len() > 64 {
            return Err(Error::SizeLimit(format!(
                "parity maps support L <= 64, got {}",
                rows.len()
            )));
        }
        Ok(ParityMap { n, rows })
    }

    /// The zero-target homomorphism: everything is even.
    pub fn trivial(n: usize) -> Self {
        ParityMap { n, rows: Vec::new() }
    }

    pub fn l(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// rho(a) as an L-bit word.
    pub fn apply(&self, a: &MultiIndex) -> Result<u64> {
        if a.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "parity map over n={} applied to multiindex of length {}",
                self.n,
                a.n()
            )));
        }
        let odd = a.odd_mask();
        let mut out = 0u64;
        for (l, row) in self.rows.iter().enumerate() {
            out |= (((row & odd).count_ones() as u64) & 1) << l;
        }
        Ok(out)
    }

    pub fn is_even(&self, a: &MultiIndex) -> Result<bool> {
        Ok(self.apply(a)? == 0)
    }

    /// rho(e_j) for the j-th coordinate.
    pub fn column(&self, j: usize) -> u64 {
        let mut out = 0u64;
        for (l, row) in self.rows.iter().enumerate() {
            out |= ((row >> j) & 1) << l;
        }
        out
    }

    /// Finds w in {0,1}^n with rho(w) = target, as a coordinate bitmask,
    /// by Gaussian elimination over GF(2). None if target is outside the
    /// column span.
    pub fn solve_preimage(&self, target: u64) -> Option<u64> {
        // piv[h] holds a column with leading bit h plus the coordinate set
        // producing it.
        let mut piv: Vec<Option<(u64, u64)>> = vec![None; 64];
        for j in 0..self.n {
            let mut col = self.column(j);
            let mut w = 1u64 << j;
            while col != 0 {
                let h = 63 - col.leading_zeros() as usize;
                match piv[h] {
                    Some((b, bw)) => {
                        col ^= b;
                        w ^= bw;
                    }
                    None => {
                        piv[h] = Some((col, w));
                        break;
                    }
                }
            }
        }
        let mut t = target;
        let mut w = 0u64;
        while t != 0 {
            let h = 63 - t.leading_zeros() as usize;
            match piv[h] {
                Some((b, bw)) => {
                    t ^= b;
                    w ^= bw;
                }
                None => return None,
            }
        }
        Some(w)
    }
}

/// Whether `a` is even under `rho`.
pub fn is_even(rho: &ParityMap, a: &MultiIndex) -> Result<bool> {
    rho.is_even(a)
}

/// The O(N)-model parity map on p sites: observable j = (i, i') flips the
/// parity bits of its two endpoints, so a weight collection is even exactly
/// when every vertex degree is even.
pub fn on_parity_map(graph: &WeightedGraph) -> ParityMap {
    let p = graph.p();
    let mut rows = vec![0u64; p];
    for (j, (i, ip)) in graph.all_pairs().into_iter().enumerate() {
        rows[i] |= 1 << j;
        rows[ip] |= 1 << j;
    }
    ParityMap {
        n: p * (p - 1) / 2,
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn trivial_map_is_all_even() {
        let rho = ParityMap::trivial(4);
        assert!(rho.is_even(&MultiIndex::from_slice(&[1, 2, 3, 0])).unwrap());
    }

    #[test]
    fn on_map_matches_degree_parity() {
        // Two sites, one observable: odd exponent is odd, even is even.
        let g = WeightedGraph::from_upper(2, &[1]).unwrap();
        let rho = on_parity_map(&g);
        assert!(!rho.is_even(&MultiIndex::from_slice(&[1])).unwrap());
        assert!(rho.is_even(&MultiIndex::from_slice(&[2])).unwrap());

        // Triangle with all weights 2: every degree 4.
        let g = WeightedGraph::from_upper(3, &[2, 2, 2]).unwrap();
        let rho = on_parity_map(&g);
        assert!(rho.is_even(&MultiIndex::from_slice(&[2, 2, 2])).unwrap());
        // Path weights (1,1): end degrees odd.
        assert!(!rho.is_even(&MultiIndex::from_slice(&[1, 0, 1])).unwrap());
    }

    #[test]
    fn graph_evenness_agrees_with_parity_map() {
        let g = WeightedGraph::from_upper(3, &[2, 2, 2]).unwrap();
        assert!(g.is_even());
        let path = WeightedGraph::from_upper(3, &[1, 0, 1]).unwrap();
        assert!(!path.is_even());
        let single = WeightedGraph::from_upper(2, &[3]).unwrap();
        assert!(!single.is_even());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let rho = ParityMap::new(2, vec![0b11]).unwrap();
        assert!(rho.apply(&MultiIndex::from_slice(&[1, 0, 1])).is_err());
    }

    #[test]
    fn preimage_solver() {
        // rho(e0)=01, rho(e1)=10, rho(e2)=11.
        let rho = ParityMap::new(3, vec![0b101, 0b110]).unwrap();
        for target in 0u64..4 {
            let w = rho.solve_preimage(target).unwrap();
            let a = MultiIndex((0..3).map(|j| ((w >> j) & 1) as u32).collect());
            assert_eq!(rho.apply(&a).unwrap(), target);
        }
    }

    proptest! {
        // Homomorphism law: rho(a+b) = rho(a) xor rho(b).
        #[test]
        fn homomorphism(rows in proptest::collection::vec(0u64..256, 0..5),
                        a in proptest::collection::vec(0u32..7, 8),
                        b in proptest::collection::vec(0u32..7, 8)) {
            let rho = ParityMap::new(8, rows).unwrap();
            let a = MultiIndex(a);
            let b = MultiIndex(b);
            let sum = a.add(&b);
            prop_assert_eq!(
                rho.apply(&sum).unwrap(),
                rho.apply(&a).unwrap() ^ rho.apply(&b).unwrap()
            );
        }
    }
}
