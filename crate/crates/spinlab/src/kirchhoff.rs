//! Kirchhoff polynomial machinery: two independent evaluators (spanning-tree
//! enumeration and the matrix-tree determinant), the symbolic polynomial,
//! Rayleigh difference and log-ultramodularity margins, and the rank-one
//! determinantal representation det(sum x_e A_e) = K(x).
//!
//! Variables live on the support edges of a weighted graph in canonical
//! lexicographic order; all arithmetic is exact.

use num_traits::{One, Signed, Zero};

use crate::core::exact::ExactScalar;
use crate::core::graph::WeightedGraph;
use crate::core::linalg::RatMat;
use crate::core::poly::Poly;
use crate::stabledet::PsdEnsemble;
use crate::{Error, Result};

/// Spanning-tree enumeration is a validation oracle, not the workhorse.
pub const TREE_ENUMERATION_CAP: usize = 1_000_000;
pub const SYMBOLIC_EDGE_CAP: usize = 12;

/// Support edges of `g` in canonical order; the index space for all edge
/// vectors below.
pub fn canonical_edges(g: &WeightedGraph) -> Vec<(usize, usize)> {
    g.support_edges()
}

fn check_x(edges: &[(usize, usize)], x: &[ExactScalar], require_positive: bool) -> Result<()> {
    if x.len() != edges.len() {
        return Err(Error::DimensionMismatch(format!(
            "expected {} edge values, got {}",
            edges.len(),
            x.len()
        )));
    }
    if require_positive && x.iter().any(|v| !v.is_positive()) {
        return Err(Error::NotStrictlyPositive("edge vector"));
    }
    Ok(())
}

/// K(x) = sum over spanning trees of the product of edge values, by direct
/// enumeration of (p-1)-subsets of the support edges.
pub fn kirchhoff_spanning(g: &WeightedGraph, x: &[ExactScalar]) -> Result<ExactScalar> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let edges = canonical_edges(g);
    check_x(&edges, x, true)?;
    let p = g.p();
    let mut total = ExactScalar::zero();
    let mut count = 0usize;
    let mut choice: Vec<usize> = Vec::with_capacity(p - 1);
    enumerate_trees(&edges, p, 0, &mut choice, &mut |tree| {
        count += 1;
        if count > TREE_ENUMERATION_CAP {
            return Err(Error::SizeLimit(format!(
                "more than {TREE_ENUMERATION_CAP} spanning trees; use the matrix-tree evaluator"
            )));
        }
        let mut prod = ExactScalar::one();
        for &e in tree {
            prod *= &x[e];
        }
        total += prod;
        Ok(())
    })?;
    Ok(total)
}

fn enumerate_trees(
    edges: &[(usize, usize)],
    p: usize,
    from: usize,
    choice: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if choice.len() == p - 1 {
        if is_spanning_tree(edges, p, choice) {
            f(choice)?;
        }
        return Ok(());
    }
    let needed = p - 1 - choice.len();
    if edges.len() - from < needed {
        return Ok(());
    }
    for e in from..edges.len() {
        choice.push(e);
        enumerate_trees(edges, p, e + 1, choice, f)?;
        choice.pop();
    }
    Ok(())
}

fn is_spanning_tree(edges: &[(usize, usize)], p: usize, choice: &[usize]) -> bool {
    // Union-find acyclicity over exactly p-1 edges implies spanning.
    let mut parent: Vec<usize> = (0..p).collect();
    fn find(parent: &mut Vec<usize>, mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for &e in choice {
        let (a, b) = edges[e];
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return false;
        }
        parent[ra] = rb;
    }
    true
}

/// Same value as [`kirchhoff_spanning`], via the determinant of the grounded
/// weighted Laplacian (fraction-free exact elimination). Returns 0 for a
/// disconnected support graph.
pub fn kirchhoff_matrix_tree(g: &WeightedGraph, x: &[ExactScalar]) -> Result<ExactScalar> {
    let edges = canonical_edges(g);
    check_x(&edges, x, false)?;
    Ok(grounded_laplacian_det(g.p(), &edges, x))
}

fn grounded_laplacian_det(p: usize, edges: &[(usize, usize)], x: &[ExactScalar]) -> ExactScalar {
    // Laplacian with the row/column of vertex 0 deleted.
    let mut l = RatMat::zeros(p - 1);
    for (e, &(i, j)) in edges.iter().enumerate() {
        let w = &x[e];
        if i > 0 {
            l.rows[i - 1][i - 1] += w;
        }
        if j > 0 {
            l.rows[j - 1][j - 1] += w;
        }
        if i > 0 && j > 0 {
            l.rows[i - 1][j - 1] -= w;
            l.rows[j - 1][i - 1] -= w;
        }
    }
    l.det()
}

/// The multiaffine Kirchhoff polynomial itself: one unit monomial per
/// spanning tree, in canonical edge variables.
pub fn kirchhoff_symbolic(g: &WeightedGraph) -> Result<Poly> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let edges = canonical_edges(g);
    if edges.len() > SYMBOLIC_EDGE_CAP {
        return Err(Error::SizeLimit(format!(
            "symbolic form limited to {SYMBOLIC_EDGE_CAP} edges, graph has {}",
            edges.len()
        )));
    }
    let p = g.p();
    let mut poly = Poly::zero(edges.len());
    let mut choice = Vec::with_capacity(p - 1);
    enumerate_trees(&edges, p, 0, &mut choice, &mut |tree| {
        let mut exp = vec![0u32; edges.len()];
        for &e in tree {
            exp[e] = 1;
        }
        poly.add_term(exp, ExactScalar::one());
        Ok(())
    })?;
    Ok(poly)
}

/// Evaluates K with edge `e` contracted (equivalently dK/dx_e, since K is
/// multiaffine). Contractions merge endpoints; parallel edge values simply
/// add inside the Laplacian.
fn eval_contracted(
    g: &WeightedGraph,
    x: &[ExactScalar],
    contract: &[usize],
) -> ExactScalar {
    let edges = canonical_edges(g);
    let p = g.p();
    // Map vertices through the contractions.
    let mut repr: Vec<usize> = (0..p).collect();
    fn find(repr: &mut Vec<usize>, mut v: usize) -> usize {
        while repr[v] != v {
            repr[v] = repr[repr[v]];
            v = repr[v];
        }
        v
    }
    for &e in contract {
        let (a, b) = edges[e];
        let (ra, rb) = (find(&mut repr, a), find(&mut repr, b));
        if ra != rb {
            repr[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut label = vec![usize::MAX; p];
    let mut next = 0usize;
    for v in 0..p {
        let r = find(&mut repr, v);
        if label[r] == usize::MAX {
            label[r] = next;
            next += 1;
        }
        label[v] = label[r];
    }
    let mut merged: Vec<(usize, usize)> = Vec::new();
    let mut weights: Vec<ExactScalar> = Vec::new();
    for (e, &(i, j)) in edges.iter().enumerate() {
        if contract.contains(&e) {
            continue;
        }
        let (a, b) = (label[i], label[j]);
        if a == b {
            continue; // self-loops never enter spanning trees
        }
        merged.push((a.min(b), a.max(b)));
        weights.push(x[e].clone());
    }
    grounded_laplacian_det(next, &merged, &weights)
}

/// Rayleigh difference dK/dx_e * dK/dx_f - K * d2K/dx_e dx_f at `x`.
/// Nonnegative for every real point; e = f degenerates to (dK/dx_e)^2
/// because K is multiaffine.
pub fn rayleigh_check(g: &WeightedGraph, x: &[ExactScalar], e: usize, f: usize) -> Result<ExactScalar> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let edges = canonical_edges(g);
    check_x(&edges, x, false)?;
    if e >= edges.len() || f >= edges.len() {
        return Err(Error::BadInput(format!(
            "edge index out of range: {} edges",
            edges.len()
        )));
    }
    let de = eval_contracted(g, x, &[e]);
    if e == f {
        return Ok(&de * &de);
    }
    let df = eval_contracted(g, x, &[f]);
    let k = kirchhoff_matrix_tree(g, x)?;
    let def = eval_contracted(g, x, &[e, f]);
    Ok(&de * &df - &k * &def)
}

/// Log-ultramodularity margin K(u+a+b) K(u) - K(u+a) K(u+b); holds iff <= 0.
pub struct UltramodOutcome {
    pub margin: ExactScalar,
    pub holds: bool,
}

pub fn ultramod_check(
    g: &WeightedGraph,
    u: &[ExactScalar],
    a: &[ExactScalar],
    b: &[ExactScalar],
) -> Result<UltramodOutcome> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let edges = canonical_edges(g);
    check_x(&edges, u, true)?;
    check_x(&edges, a, false)?;
    check_x(&edges, b, false)?;
    if a.iter().chain(b).any(|v| v.is_negative()) {
        return Err(Error::BadInput("increments a, b must be nonnegative".into()));
    }
    let add = |p: &[ExactScalar], q: &[ExactScalar]| -> Vec<ExactScalar> {
        p.iter().zip(q).map(|(s, t)| s + t).collect()
    };
    let uab = add(&add(u, a), b);
    let ua = add(u, a);
    let ub = add(u, b);
    let margin = &kirchhoff_matrix_tree(g, &uab)? * &kirchhoff_matrix_tree(g, u)?
        - &kirchhoff_matrix_tree(g, &ua)? * &kirchhoff_matrix_tree(g, &ub)?;
    let holds = !margin.is_positive();
    Ok(UltramodOutcome { margin, holds })
}

/// Rank-one determinantal representation: grounded incidence outer products
/// A_e with det(sum_e x_e A_e) = K(x). Validated on 20 pseudo-random
/// positive rational points against the spanning-tree evaluator before
/// being returned.
pub fn determinantal_rep(g: &WeightedGraph) -> Result<PsdEnsemble> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let edges = canonical_edges(g);
    let q = g.p() - 1;
    let mut mats = Vec::with_capacity(edges.len());
    for &(i, j) in &edges {
        // Incidence vector with vertex 0 grounded.
        let mut w = vec![ExactScalar::zero(); q];
        if i > 0 {
            w[i - 1] = ExactScalar::one();
        }
        if j > 0 {
            w[j - 1] -= ExactScalar::one();
        }
        let mut m = RatMat::zeros(q);
        for r in 0..q {
            for c in 0..q {
                m.rows[r][c] = &w[r] * &w[c];
            }
        }
        mats.push(m);
    }
    let ens = PsdEnsemble::new(mats)?;
    // Deterministic validation points.
    let mut state = 0x243f6a8885a308d3u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for _ in 0..20 {
        let x: Vec<ExactScalar> = (0..edges.len())
            .map(|_| {
                ExactScalar::new(
                    ((next() % 40) + 1).into(),
                    ((next() % 11) + 1).into(),
                )
            })
            .collect();
        let lhs = ens.eval_p(&x)?;
        let rhs = kirchhoff_spanning(g, &x)?;
        if lhs != rhs {
            return Err(Error::InvalidInstance(
                "determinantal representation failed validation".into(),
            ));
        }
    }
    Ok(ens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::exact::{rat, rat_i64};

    fn g(p: usize, upper: &[u32]) -> WeightedGraph {
        WeightedGraph::from_upper(p, upper).unwrap()
    }

    fn ones(k: usize) -> Vec<ExactScalar> {
        vec![ExactScalar::one(); k]
    }

    #[test]
    fn triangle_and_path_and_k4() {
        let tri = g(3, &[1, 1, 1]);
        assert_eq!(kirchhoff_spanning(&tri, &ones(3)).unwrap(), rat_i64(3));
        assert_eq!(kirchhoff_matrix_tree(&tri, &ones(3)).unwrap(), rat_i64(3));

        let path = g(3, &[1, 0, 1]);
        let x = vec![rat_i64(2), rat_i64(3)];
        assert_eq!(kirchhoff_spanning(&path, &x).unwrap(), rat_i64(6));
        assert_eq!(kirchhoff_matrix_tree(&path, &x).unwrap(), rat_i64(6));

        let k4 = g(4, &[1, 1, 1, 1, 1, 1]);
        assert_eq!(kirchhoff_spanning(&k4, &ones(6)).unwrap(), rat_i64(16));
        assert_eq!(kirchhoff_matrix_tree(&k4, &ones(6)).unwrap(), rat_i64(16));
    }

    #[test]
    fn disconnected_handling() {
        let dis = g(4, &[1, 0, 0, 0, 0, 1]);
        assert!(matches!(kirchhoff_spanning(&dis, &ones(2)), Err(Error::Disconnected)));
        assert_eq!(kirchhoff_matrix_tree(&dis, &ones(2)).unwrap(), rat_i64(0));
    }

    #[test]
    fn symbolic_forms() {
        let tri = kirchhoff_symbolic(&g(3, &[1, 1, 1])).unwrap();
        assert_eq!(tri.num_terms(), 3);
        assert!(tri.terms.contains_key(&vec![1, 1, 0]));
        assert!(tri.terms.contains_key(&vec![1, 0, 1]));
        assert!(tri.terms.contains_key(&vec![0, 1, 1]));

        let single = kirchhoff_symbolic(&g(2, &[1])).unwrap();
        assert_eq!(single.num_terms(), 1);
        assert!(single.terms.contains_key(&vec![1]));

        let k4 = kirchhoff_symbolic(&g(4, &[1, 1, 1, 1, 1, 1])).unwrap();
        assert_eq!(k4.num_terms(), 16);
        // Multiaffine: degree <= 1 in every variable.
        for j in 0..6 {
            assert!(k4.degree_in(j) <= 1);
        }
        // Evaluating the symbolic form matches both evaluators.
        let x: Vec<ExactScalar> = (1..=6).map(rat_i64).collect();
        let gk4 = g(4, &[1, 1, 1, 1, 1, 1]);
        assert_eq!(k4.eval(&x), kirchhoff_spanning(&gk4, &x).unwrap());
        assert_eq!(k4.eval(&x), kirchhoff_matrix_tree(&gk4, &x).unwrap());
    }

    #[test]
    fn rayleigh_triangle_and_tree() {
        let tri = g(3, &[1, 1, 1]);
        assert_eq!(rayleigh_check(&tri, &ones(3), 0, 1).unwrap(), rat_i64(1));
        // Trees are log-linear: the mixed difference vanishes.
        let path = g(3, &[1, 0, 1]);
        assert_eq!(rayleigh_check(&path, &ones(2), 0, 1).unwrap(), rat_i64(0));
        // e = f gives the square of the contracted value.
        let v = rayleigh_check(&tri, &ones(3), 2, 2).unwrap();
        assert_eq!(v, rat_i64(4)); // contracting one edge leaves two parallel unit edges
    }

    #[test]
    fn ultramod_triangle_worked_case() {
        let tri = g(3, &[1, 1, 1]);
        let u = ones(3);
        let a = vec![rat_i64(1), rat_i64(0), rat_i64(0)];
        let b = vec![rat_i64(0), rat_i64(1), rat_i64(0)];
        let out = ultramod_check(&tri, &u, &a, &b).unwrap();
        assert_eq!(out.margin, rat_i64(-1)); // 8*3 - 5*5
        assert!(out.holds);
        // b = 0 collapses to exact equality.
        let zero = vec![rat_i64(0); 3];
        let out = ultramod_check(&tri, &u, &a, &zero).unwrap();
        assert_eq!(out.margin, rat_i64(0));
        assert!(out.holds);
    }

    #[test]
    fn determinantal_rep_small_graphs() {
        let single = determinantal_rep(&g(2, &[1])).unwrap();
        assert_eq!(single.q(), 1);
        assert_eq!(single.eval_p(&[rat_i64(5)]).unwrap(), rat_i64(5));

        let tri = determinantal_rep(&g(3, &[1, 1, 1])).unwrap();
        assert_eq!(tri.eval_p(&ones(3)).unwrap(), rat_i64(3));

        let path = determinantal_rep(&g(3, &[1, 0, 1])).unwrap();
        assert_eq!(path.eval_p(&[rat(1, 2), rat(2, 3)]).unwrap(), rat(1, 3));
    }

    #[test]
    fn dual_evaluators_agree_on_random_graphs() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..60 {
            let p = 2 + (next() % 5) as usize;
            let mut upper = vec![0u32; p * (p - 1) / 2];
            // Random spanning tree first, extra edges after.
            for v in 1..p {
                let u = (next() as usize) % v;
                let (a, b) = (u.min(v), u.max(v));
                upper[crate::core::graph::pair_index(p, a, b)] = 1;
            }
            for w in upper.iter_mut() {
                if next() % 3 == 0 {
                    *w = 1;
                }
            }
            let gg = g(p, &upper);
            let e = gg.support_edges().len();
            let x: Vec<ExactScalar> =
                (0..e).map(|_| rat(((next() % 20) + 1) as i64, ((next() % 7) + 1) as i64)).collect();
            let a = kirchhoff_spanning(&gg, &x).unwrap();
            let b = kirchhoff_matrix_tree(&gg, &x).unwrap();
            assert_eq!(a, b, "p={p} upper={upper:?}");
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let tri = g(3, &[1, 1, 1]);
        assert!(kirchhoff_spanning(&tri, &ones(2)).is_err());
        assert!(kirchhoff_spanning(&tri, &[rat_i64(1), rat_i64(0), rat_i64(1)]).is_err());
    }
}
