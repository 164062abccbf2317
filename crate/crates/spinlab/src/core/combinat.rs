//! Enumeration utilities: perfect matchings, subsets, set partitions, and
//! the aggregated pairing/permutation count tables used by the moment
//! contraction engine.

use num_bigint::BigInt;
use num_traits::One;

use crate::core::exact::{double_factorial_odd, factorial};
use crate::{Error, Result};

/// Iterator over all perfect matchings of d points, d even, in canonical
/// "match the first unmatched point" order. Each matching is a list of
/// index pairs (i, j) with i < j, sorted by i.
pub struct PerfectMatchings {
    d: usize,
    stack: Vec<(usize, usize)>,
    used: Vec<bool>,
    started: bool,
    done: bool,
}

impl PerfectMatchings {
    fn new(d: usize) -> Self {
        PerfectMatchings {
            d,
            stack: Vec::new(),
            used: vec![false; d],
            started: false,
            done: false,
        }
    }

    fn first_free(&self) -> Option<usize> {
        (0..self.d).find(|&i| !self.used[i])
    }

    // Extends the partial matching greedily with the smallest partners.
    fn descend(&mut self) {
        while let Some(i) = self.first_free() {
            self.used[i] = true;
            let j = (i + 1..self.d).find(|&j| !self.used[j]).expect("even count");
            self.used[j] = true;
            self.stack.push((i, j));
        }
    }

    // Backtracks to the deepest pair whose partner can be advanced.
    fn advance(&mut self) -> bool {
        while let Some((i, j)) = self.stack.pop() {
            self.used[j] = false;
            if let Some(nj) = (j + 1..self.d).find(|&k| !self.used[k]) {
                self.used[nj] = true;
                self.stack.push((i, nj));
                self.descend();
                return true;
            }
            self.used[i] = false;
        }
        false
    }
}

impl Iterator for PerfectMatchings {
    type Item = Vec<(usize, usize)>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            if self.d == 0 {
                self.done = true;
                return Some(Vec::new());
            }
            self.descend();
        } else if !self.advance() {
            self.done = true;
            return None;
        }
        Some(self.stack.clone())
    }
}

/// Streams every perfect matching of the given number of half-edges exactly
/// once; an odd count is a parity failure.
pub fn enumerate_matchings(halfedges: usize) -> Result<PerfectMatchings> {
    if halfedges % 2 != 0 {
        return Err(Error::OddHalfEdges(halfedges));
    }
    Ok(PerfectMatchings::new(halfedges))
}

/// The 2^m subsets of {0,..,m-1} as bitmasks in increasing order.
pub fn subset_stream(m: usize) -> impl Iterator<Item = u64> {
    assert!(m < 64, "subset streams support m < 64");
    0..(1u64 << m)
}

pub fn mask_to_vec(mask: u64, m: usize) -> Vec<usize> {
    (0..m).filter(|&i| mask >> i & 1 == 1).collect()
}

fn tri_index(k: usize, a: usize, b: usize) -> usize {
    debug_assert!(a <= b && b < k);
    a * k - a * (a + 1) / 2 + b
}

/// Symmetric pair-type matrix for a matching of classed half-edges:
/// entry (a,b) counts pairs joining class a to class b, the diagonal counts
/// within-class pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairTypeMatrix {
    pub k: usize,
    /// Upper triangle including the diagonal, row-major.
    pub e: Vec<u32>,
}

impl PairTypeMatrix {
    pub fn get(&self, a: usize, b: usize) -> u32 {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        self.e[tri_index(self.k, a, b)]
    }
}

/// Matchings realizing a given pair-type matrix for class sizes `c`:
///   prod_a c_a! / (prod_a 2^{e_aa} e_aa! * prod_{a<b} e_ab!).
pub fn pair_type_count(c: &[u32], m: &PairTypeMatrix) -> BigInt {
    let k = c.len();
    let mut num = BigInt::one();
    for &ca in c {
        num *= factorial(ca as u64);
    }
    let mut den = BigInt::one();
    for a in 0..k {
        let eaa = m.get(a, a);
        den *= BigInt::from(2u64).pow(eaa) * factorial(eaa as u64);
        for b in a + 1..k {
            den *= factorial(m.get(a, b) as u64);
        }
    }
    num / den
}

/// Enumerates all pair-type matrices consistent with class sizes `c`,
/// with the matching count for each. Counts sum to (d-1)!!, d = sum(c);
/// this is checked against the enumeration oracle in tests.
pub fn pair_type_matrices(c: &[u32]) -> Vec<(PairTypeMatrix, BigInt)> {
    let k = c.len();
    let d: u64 = c.iter().map(|&x| x as u64).sum();
    if d % 2 != 0 {
        return Vec::new();
    }
    let mut matrices = Vec::new();
    let mut e = vec![0u32; k * (k + 1) / 2];
    let mut remaining: Vec<u32> = c.to_vec();
    rec(0, 0, &mut e, &mut remaining, k, &mut matrices);
    return matrices
        .into_iter()
        .map(|m| {
            let count = pair_type_count(c, &m);
            (m, count)
        })
        .collect();

    fn rec(
        a: usize,
        b: usize,
        e: &mut Vec<u32>,
        remaining: &mut Vec<u32>,
        k: usize,
        out: &mut Vec<PairTypeMatrix>,
    ) {
        if a == k {
            out.push(PairTypeMatrix { k, e: e.clone() });
            return;
        }
        if b == k {
            if remaining[a] == 0 {
                rec(a + 1, a + 1, e, remaining, k, out);
            }
            return;
        }
        let cap = if a == b {
            remaining[a] / 2
        } else {
            remaining[a].min(remaining[b])
        };
        for x in 0..=cap {
            let take_a = if a == b { 2 * x } else { x };
            e[tri_index(k, a, b)] = x;
            remaining[a] -= take_a;
            if a != b {
                remaining[b] -= x;
            }
            rec(a, b + 1, e, remaining, k, out);
            remaining[a] += take_a;
            if a != b {
                remaining[b] += x;
            }
        }
        e[tri_index(k, a, b)] = 0;
    }
}

/// Rectangular block-count matrices for bijections between classed rows and
/// classed columns: entry (a,b) counts row-class-a elements mapped into
/// column class b. The number of permutations realizing a matrix is
/// prod rows! * prod cols! / prod e!.
pub fn block_matrices(rows: &[u32], cols: &[u32]) -> Vec<(Vec<u32>, BigInt)> {
    let (nr, nc) = (rows.len(), cols.len());
    let total_r: u64 = rows.iter().map(|&x| x as u64).sum();
    let total_c: u64 = cols.iter().map(|&x| x as u64).sum();
    if total_r != total_c {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut e = vec![0u32; nr * nc];
    let mut col_left: Vec<u32> = cols.to_vec();
    rec(0, 0, rows.first().copied().unwrap_or(0), &mut e, rows, cols, &mut col_left, nc, &mut out);
    return out;

    #[allow(clippy::too_many_arguments)]
    fn rec(
        a: usize,
        b: usize,
        row_left: u32,
        e: &mut Vec<u32>,
        rows: &[u32],
        cols: &[u32],
        col_left: &mut Vec<u32>,
        nc: usize,
        out: &mut Vec<(Vec<u32>, BigInt)>,
    ) {
        if a == rows.len() {
            if col_left.iter().all(|&x| x == 0) {
                let mut count = BigInt::one();
                for &r in rows {
                    count *= factorial(r as u64);
                }
                for &c in cols {
                    count *= factorial(c as u64);
                }
                for &x in e.iter() {
                    count /= factorial(x as u64);
                }
                out.push((e.clone(), count));
            }
            return;
        }
        if b == nc {
            if row_left == 0 {
                let next_left = rows.get(a + 1).copied().unwrap_or(0);
                rec(a + 1, 0, next_left, e, rows, cols, col_left, nc, out);
            }
            return;
        }
        let cap = row_left.min(col_left[b]);
        for x in 0..=cap {
            e[a * nc + b] = x;
            col_left[b] -= x;
            rec(a, b + 1, row_left - x, e, rows, cols, col_left, nc, out);
            col_left[b] += x;
        }
        e[a * nc + b] = 0;
    }
}

/// All set partitions of {0,..,s-1} as block lists.
pub fn set_partitions(s: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    recurse(0, s, &mut blocks, &mut out);
    return out;

    fn recurse(i: usize, s: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == s {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            recurse(i + 1, s, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        recurse(i + 1, s, blocks, out);
        blocks.pop();
    }
}

/// All permutations of 0..d in lexicographic order.
pub fn permutations(d: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..d).collect();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

pub fn matching_count(d: u64) -> BigInt {
    double_factorial_odd(d)
}
