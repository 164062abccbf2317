//! Vertex-elimination contraction engine for exact sphere moments.
//!
//! A monomial in pair observables is integrated one vertex at a time.
//! Integrating out a vertex of incident multiplicity d replaces its factors
//! by the pairing sum over perfect matchings (real case) or the permutation
//! sum (complex case) of the remaining inner products, divided by the
//! rising product N(N+2)...(N+d-2) resp. N(N+1)...(N+d-1). Matchings and
//! permutations are aggregated by pair-type / block-count matrices; the
//! aggregation is validated against raw enumeration both in unit tests and
//! through the public brute-force entry points.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::core::combinat::{
    block_matrices, enumerate_matchings, pair_type_matrices, permutations,
};
use crate::core::exact::{big_to_rat, rising, rising_even, ExactScalar};
use crate::core::graph::{pair_index, WeightedGraph};
use crate::{Error, Result};

/// Per-edge exponent cap for exact mode; Monte Carlo has no such limit.
pub const EDGE_MULTIPLICITY_CAP: u32 = 16;
/// Guard on the incident multiplicity consumed in one elimination step.
pub const DEGREE_GUARD: u64 = 32;

/// Sparse polynomial over formal pair variables with exact coefficients,
/// plus the set of vertices still to be integrated.
#[derive(Clone, Debug)]
pub struct ContractionState {
    pub p: usize,
    pub remaining: Vec<bool>,
    /// Real case: upper-triangle exponents. Complex case: ordered-pair
    /// exponents (see `opair_index`).
    pub poly: BTreeMap<Vec<u32>, ExactScalar>,
}

/// Index of the ordered pair (a,b), a != b, in a p*(p-1) layout.
pub fn opair_index(p: usize, a: usize, b: usize) -> usize {
    debug_assert!(a != b && a < p && b < p);
    a * (p - 1) + if b < a { b } else { b - 1 }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Contraction {
    /// Aggregated counts (the workhorse).
    Aggregated,
    /// Raw enumeration of matchings / permutations (the oracle).
    Enumerated,
}

// ---------------------------------------------------------------- O(N) ----

pub fn on_initial_state(g: &WeightedGraph) -> ContractionState {
    let p = g.p();
    let mut poly = BTreeMap::new();
    poly.insert(g.upper().to_vec(), ExactScalar::one());
    ContractionState {
        p,
        remaining: vec![true; p],
        poly,
    }
}

fn on_vertex_degree(state: &ContractionState, v: usize) -> u64 {
    let p = state.p;
    state
        .poly
        .keys()
        .map(|mono| {
            (0..p)
                .filter(|&u| u != v && state.remaining[u])
                .map(|u| {
                    let (a, b) = if u < v { (u, v) } else { (v, u) };
                    mono[pair_index(p, a, b)] as u64
                })
                .sum::<u64>()
        })
        .max()
        .unwrap_or(0)
}

/// Integrates out vertex `v` of the real-sphere state.
pub fn on_eliminate(state: &mut ContractionState, v: usize, n: u32, mode: Contraction) -> Result<()> {
    debug_assert!(state.remaining[v]);
    let p = state.p;
    let neighbors: Vec<usize> = (0..p).filter(|&u| u != v && state.remaining[u]).collect();
    let mut next: BTreeMap<Vec<u32>, ExactScalar> = BTreeMap::new();
    for (mono, coef) in std::mem::take(&mut state.poly) {
        let classes: Vec<(usize, u32)> = neighbors
            .iter()
            .filter_map(|&u| {
                let (a, b) = if u < v { (u, v) } else { (v, u) };
                let c = mono[pair_index(p, a, b)];
                (c > 0).then_some((u, c))
            })
            .collect();
        let d: u64 = classes.iter().map(|&(_, c)| c as u64).sum();
        if d % 2 == 1 {
            continue; // sign-flip symmetry annihilates odd degrees
        }
        if d > DEGREE_GUARD {
            return Err(Error::DegreeCap {
                what: "vertex incident multiplicity",
                value: d,
                cap: DEGREE_GUARD,
            });
        }
        let mut rest = mono.clone();
        for &(u, _) in &classes {
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            rest[pair_index(p, a, b)] = 0;
        }
        if d == 0 {
            merge(&mut next, rest, coef);
            continue;
        }
        let denom = big_to_rat(rising_even(n, d / 2));
        let sizes: Vec<u32> = classes.iter().map(|&(_, c)| c).collect();
        match mode {
            Contraction::Aggregated => {
                for (ptm, count) in pair_type_matrices(&sizes) {
                    let mut m2 = rest.clone();
                    for a in 0..classes.len() {
                        for b in a + 1..classes.len() {
                            let e = ptm.get(a, b);
                            if e > 0 {
                                let (x, y) = ordered(classes[a].0, classes[b].0);
                                m2[pair_index(p, x, y)] += e;
                            }
                        }
                    }
                    merge(&mut next, m2, &coef * big_to_rat(count) / &denom);
                }
            }
            Contraction::Enumerated => {
                let labels: Vec<usize> = classes
                    .iter()
                    .enumerate()
                    .flat_map(|(idx, &(_, c))| std::iter::repeat(idx).take(c as usize))
                    .collect();
                for matching in enumerate_matchings(d as usize)? {
                    let mut m2 = rest.clone();
                    for (i, j) in matching {
                        if labels[i] != labels[j] {
                            let (x, y) = ordered(classes[labels[i]].0, classes[labels[j]].0);
                            m2[pair_index(p, x, y)] += 1;
                        }
                    }
                    merge(&mut next, m2, &coef / &denom);
                }
            }
        }
    }
    state.poly = next;
    state.remaining[v] = false;
    Ok(())
}

/// Runs the real-sphere elimination to completion and returns the moment
/// together with the order actually used. `order` overrides the default
/// minimum-current-degree heuristic.
pub fn on_moment_eliminate(
    g: &WeightedGraph,
    n: u32,
    order: Option<&[usize]>,
    mode: Contraction,
) -> Result<(ExactScalar, Vec<usize>)> {
    check_exact_preconditions(g, n)?;
    let mut state = on_initial_state(g);
    let mut used = Vec::new();
    if let Some(ord) = order {
        validate_order(g.p(), ord)?;
        for &v in ord {
            if state.remaining[v] {
                on_eliminate(&mut state, v, n, mode)?;
                used.push(v);
            }
        }
    }
    loop {
        if state.poly.is_empty() {
            return Ok((ExactScalar::zero(), used));
        }
        let active: Vec<usize> = (0..g.p())
            .filter(|&v| state.remaining[v] && on_vertex_degree(&state, v) > 0)
            .collect();
        if active.is_empty() {
            break;
        }
        // Lowest current degree, ties broken by vertex index.
        let v = *active
            .iter()
            .min_by_key(|&&v| (on_vertex_degree(&state, v), v))
            .unwrap();
        on_eliminate(&mut state, v, n, mode)?;
        used.push(v);
    }
    let value = state
        .poly
        .iter()
        .map(|(mono, c)| {
            debug_assert!(mono.iter().all(|&e| e == 0));
            c.clone()
        })
        .sum();
    Ok((value, used))
}

// ----------------------------------------------------------- CP^{N-1} ----

pub fn cpn_initial_state(g: &WeightedGraph) -> ContractionState {
    let p = g.p();
    let mut mono = vec![0u32; p * (p - 1)];
    for (i, j) in g.all_pairs() {
        let m = g.weight(i, j);
        mono[opair_index(p, i, j)] = m;
        mono[opair_index(p, j, i)] = m;
    }
    let mut poly = BTreeMap::new();
    poly.insert(mono, ExactScalar::one());
    ContractionState {
        p,
        remaining: vec![true; p],
        poly,
    }
}

fn cpn_vertex_degree(state: &ContractionState, v: usize) -> u64 {
    let p = state.p;
    state
        .poly
        .keys()
        .map(|mono| {
            (0..p)
                .filter(|&u| u != v && state.remaining[u])
                .map(|u| (mono[opair_index(p, v, u)] + mono[opair_index(p, u, v)]) as u64)
                .sum::<u64>()
        })
        .max()
        .unwrap_or(0)
}

/// Integrates out vertex `v` of the complex-sphere state. Factors with the
/// vertex in first slot are antiholomorphic in it, second slot holomorphic;
/// unbalanced monomials vanish by phase invariance.
pub fn cpn_eliminate(state: &mut ContractionState, v: usize, n: u32, mode: Contraction) -> Result<()> {
    debug_assert!(state.remaining[v]);
    let p = state.p;
    let neighbors: Vec<usize> = (0..p).filter(|&u| u != v && state.remaining[u]).collect();
    let mut next: BTreeMap<Vec<u32>, ExactScalar> = BTreeMap::new();
    for (mono, coef) in std::mem::take(&mut state.poly) {
        // Row classes: factors h_{u,v} (linear in z_v); column classes:
        // factors h_{v,w} (antilinear in z_v).
        let rows: Vec<(usize, u32)> = neighbors
            .iter()
            .filter_map(|&u| {
                let c = mono[opair_index(p, u, v)];
                (c > 0).then_some((u, c))
            })
            .collect();
        let cols: Vec<(usize, u32)> = neighbors
            .iter()
            .filter_map(|&w| {
                let c = mono[opair_index(p, v, w)];
                (c > 0).then_some((w, c))
            })
            .collect();
        let dr: u64 = rows.iter().map(|&(_, c)| c as u64).sum();
        let dc: u64 = cols.iter().map(|&(_, c)| c as u64).sum();
        if dr != dc {
            continue; // phase average kills unbalanced monomials
        }
        let d = dr;
        if d > DEGREE_GUARD {
            return Err(Error::DegreeCap {
                what: "vertex incident multiplicity",
                value: d,
                cap: DEGREE_GUARD,
            });
        }
        let mut rest = mono.clone();
        for &(u, _) in &rows {
            rest[opair_index(p, u, v)] = 0;
        }
        for &(w, _) in &cols {
            rest[opair_index(p, v, w)] = 0;
        }
        if d == 0 {
            merge(&mut next, rest, coef);
            continue;
        }
        let denom = big_to_rat(rising(n, d));
        let row_sizes: Vec<u32> = rows.iter().map(|&(_, c)| c).collect();
        let col_sizes: Vec<u32> = cols.iter().map(|&(_, c)| c).collect();
        match mode {
            Contraction::Aggregated => {
                for (blocks, count) in block_matrices(&row_sizes, &col_sizes) {
                    let mut m2 = rest.clone();
                    for (a, &(u, _)) in rows.iter().enumerate() {
                        for (b, &(w, _)) in cols.iter().enumerate() {
                            let e = blocks[a * cols.len() + b];
                            if e > 0 && u != w {
                                m2[opair_index(p, u, w)] += e;
                            }
                        }
                    }
                    merge(&mut next, m2, &coef * big_to_rat(count) / &denom);
                }
            }
            Contraction::Enumerated => {
                let row_labels: Vec<usize> = rows
                    .iter()
                    .enumerate()
                    .flat_map(|(idx, &(_, c))| std::iter::repeat(idx).take(c as usize))
                    .collect();
                let col_labels: Vec<usize> = cols
                    .iter()
                    .enumerate()
                    .flat_map(|(idx, &(_, c))| std::iter::repeat(idx).take(c as usize))
                    .collect();
                for pi in permutations(d as usize) {
                    let mut m2 = rest.clone();
                    for (x, &px) in pi.iter().enumerate() {
                        let u = rows[row_labels[x]].0;
                        let w = cols[col_labels[px]].0;
                        if u != w {
                            m2[opair_index(p, u, w)] += 1;
                        }
                    }
                    merge(&mut next, m2, &coef / &denom);
                }
            }
        }
    }
    state.poly = next;
    state.remaining[v] = false;
    Ok(())
}

pub fn cpn_moment_eliminate(
    g: &WeightedGraph,
    n: u32,
    order: Option<&[usize]>,
    mode: Contraction,
) -> Result<(ExactScalar, Vec<usize>)> {
    check_exact_preconditions(g, n)?;
    let mut state = cpn_initial_state(g);
    let mut used = Vec::new();
    if let Some(ord) = order {
        validate_order(g.p(), ord)?;
        for &v in ord {
            if state.remaining[v] {
                cpn_eliminate(&mut state, v, n, mode)?;
                used.push(v);
            }
        }
    }
    loop {
        if state.poly.is_empty() {
            return Ok((ExactScalar::zero(), used));
        }
        let active: Vec<usize> = (0..g.p())
            .filter(|&v| state.remaining[v] && cpn_vertex_degree(&state, v) > 0)
            .collect();
        if active.is_empty() {
            break;
        }
        let v = *active
            .iter()
            .min_by_key(|&&v| (cpn_vertex_degree(&state, v), v))
            .unwrap();
        cpn_eliminate(&mut state, v, n, mode)?;
        used.push(v);
    }
    let value = state.poly.values().cloned().sum();
    Ok((value, used))
}

// ------------------------------------------------------------- helpers ----

fn merge(map: &mut BTreeMap<Vec<u32>, ExactScalar>, key: Vec<u32>, val: ExactScalar) {
    if val.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(val);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += val;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn check_exact_preconditions(g: &WeightedGraph, n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::BadInput("N must be a positive integer".into()));
    }
    if g.max_weight() > EDGE_MULTIPLICITY_CAP {
        return Err(Error::DegreeCap {
            what: "edge multiplicity",
            value: g.max_weight() as u64,
            cap: EDGE_MULTIPLICITY_CAP as u64,
        });
    }
    Ok(())
}

fn validate_order(p: usize, order: &[usize]) -> Result<()> {
    let mut seen = vec![false; p];
    for &v in order {
        if v >= p || seen[v] {
            return Err(Error::BadInput(format!("invalid elimination order {order:?}")));
        }
        seen[v] = true;
    }
    Ok(())
}
