//! Exact and Monte Carlo evaluation of zero-coupling invariant correlations:
//! products of powers of sigma_i . sigma_j over real spheres (O(N) model)
//! and of |<z_i, z_j>|^2 over complex spheres (CP^{N-1} model).

pub mod elim;
pub mod mc;

use dashmap::DashMap;
use once_cell::sync::Lazy;
use serde::Serialize;

use crate::core::exact::{decimal_string, format_ratio, rising, rising_even, ExactScalar};
use crate::core::graph::WeightedGraph;
use crate::{Error, Result};

pub use elim::{Contraction, ContractionState};
pub use mc::{cpn_moment_mc, on_moment_mc, McEstimate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Model {
    #[serde(rename = "on")]
    On,
    #[serde(rename = "cpn")]
    Cpn,
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Model::On => write!(f, "on"),
            Model::Cpn => write!(f, "cpn"),
        }
    }
}

/// Exact moment value with its provenance.
#[derive(Clone, Debug)]
pub struct MomentResult {
    pub model: Model,
    pub n: u32,
    pub value: ExactScalar,
    /// Vertex elimination order used when first computed.
    pub order: Vec<usize>,
}

impl MomentResult {
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct J<'a> {
            model: Model,
            #[serde(rename = "N")]
            n: u32,
            value: String,
            float: String,
            order: &'a [usize],
        }
        serde_json::to_string(&J {
            model: self.model,
            n: self.n,
            value: format_ratio(&self.value),
            float: decimal_string(&self.value, 24),
            order: &self.order,
        })
        .expect("moment result serializes")
    }
}

static MEMO: Lazy<DashMap<(Model, u32, usize, Vec<u32>), (ExactScalar, Vec<usize>)>> =
    Lazy::new(DashMap::new);

/// Exact O(N) moment <prod (sigma_i . sigma_j)^{m_ij}>, memoized by
/// (canonical graph form, N). Zero exactly when some vertex degree is odd.
pub fn on_moment(g: &WeightedGraph, n: u32) -> Result<MomentResult> {
    moment(Model::On, g, n)
}

/// Exact CP^{N-1} moment <prod |<z_i, z_j>|^{2 m_ij}>; strictly positive.
pub fn cpn_moment(g: &WeightedGraph, n: u32) -> Result<MomentResult> {
    moment(Model::Cpn, g, n)
}

fn moment(model: Model, g: &WeightedGraph, n: u32) -> Result<MomentResult> {
    let key = (model, n, g.p(), g.canonical_key());
    if let Some(hit) = MEMO.get(&key) {
        let (value, order) = hit.clone();
        return Ok(MomentResult { model, n, value, order });
    }
    let (value, order) = match model {
        Model::On => elim::on_moment_eliminate(g, n, None, Contraction::Aggregated)?,
        Model::Cpn => elim::cpn_moment_eliminate(g, n, None, Contraction::Aggregated)?,
    };
    MEMO.insert(key, (value.clone(), order.clone()));
    Ok(MomentResult { model, n, value, order })
}

/// Exact moment under a caller-chosen elimination order; bypasses the memo.
pub fn on_moment_with_order(g: &WeightedGraph, n: u32, order: &[usize]) -> Result<ExactScalar> {
    Ok(elim::on_moment_eliminate(g, n, Some(order), Contraction::Aggregated)?.0)
}

pub fn cpn_moment_with_order(g: &WeightedGraph, n: u32, order: &[usize]) -> Result<ExactScalar> {
    Ok(elim::cpn_moment_eliminate(g, n, Some(order), Contraction::Aggregated)?.0)
}

/// Brute-force oracle: same integral, but every elimination step expands
/// raw perfect matchings instead of aggregated pair types, and vertices are
/// consumed in reverse index order. Never touches the memo.
pub fn on_moment_bruteforce(g: &WeightedGraph, n: u32) -> Result<ExactScalar> {
    let order: Vec<usize> = (0..g.p()).rev().collect();
    Ok(elim::on_moment_eliminate(g, n, Some(&order), Contraction::Enumerated)?.0)
}

/// Brute-force oracle over raw permutations for the complex model.
pub fn cpn_moment_bruteforce(g: &WeightedGraph, n: u32) -> Result<ExactScalar> {
    let order: Vec<usize> = (0..g.p()).rev().collect();
    Ok(elim::cpn_moment_eliminate(g, n, Some(&order), Contraction::Enumerated)?.0)
}

/// <(sigma_1 . sigma_2)^{2x}> = (2x-1)!! / (N(N+2)...(N+2x-2)) as a running
/// reduced product.
pub fn on_pair_closed_form(x: u64, n: u32) -> Result<ExactScalar> {
    if n == 0 {
        return Err(Error::BadInput("N must be a positive integer".into()));
    }
    let mut acc = ExactScalar::from_integer(1.into());
    for i in 1..=x {
        acc *= ExactScalar::new((2 * i - 1).into(), (n as u64 + 2 * i - 2).into());
    }
    Ok(acc)
}

/// <|<z_1, z_2>|^{2m}> = m! (N-1)! / (N-1+m)!.
pub fn cpn_pair_closed_form(m: u64, n: u32) -> Result<ExactScalar> {
    if n == 0 {
        return Err(Error::BadInput("N must be a positive integer".into()));
    }
    let mut acc = ExactScalar::from_integer(1.into());
    for i in 1..=m {
        acc *= ExactScalar::new(i.into(), (n as u64 - 1 + i).into());
    }
    Ok(acc)
}

/// Single real-sphere component moment E[prod_l sigma_l^{k_l}]: zero unless
/// all k_l are even, else prod (k_l - 1)!! / (N(N+2)...(N+|k|-2)).
/// Classical Dirichlet formula, kept as an extra independent cross-check.
pub fn on_component_moment(k: &[u32], n: u32) -> ExactScalar {
    if k.iter().any(|&x| x % 2 == 1) {
        return ExactScalar::from_integer(0.into());
    }
    let total: u64 = k.iter().map(|&x| x as u64).sum();
    let mut num = num_bigint::BigInt::from(1);
    for &x in k {
        num *= crate::core::exact::double_factorial_odd(x as u64);
    }
    ExactScalar::new(num, rising_even(n, total / 2))
}

/// Complex analogue E[prod_l |z_l|^{2k_l}] = prod k_l! / (N...(N+|k|-1)).
pub fn cpn_component_moment(k: &[u32], n: u32) -> ExactScalar {
    let total: u64 = k.iter().map(|&x| x as u64).sum();
    let mut num = num_bigint::BigInt::from(1);
    for &x in k {
        num *= crate::core::exact::factorial(x as u64);
    }
    ExactScalar::new(num, rising(n, total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::exact::{rat, rat_i64};
    use num_traits::{One, Signed, Zero};

    fn g(p: usize, upper: &[u32]) -> WeightedGraph {
        WeightedGraph::from_upper(p, upper).unwrap()
    }

    #[test]
    fn pair_weight_two_n3_is_one_third() {
        let m = on_moment(&g(2, &[2]), 3).unwrap();
        assert_eq!(m.value, rat(1, 3));
    }

    #[test]
    fn odd_graphs_vanish() {
        for (p, w, n) in [(2, vec![3u32], 3u32), (3, vec![1, 1, 0], 2), (3, vec![2, 1, 0], 5)] {
            let m = on_moment(&g(p, &w), n).unwrap();
            assert!(m.value.is_zero(), "p={p} w={w:?} N={n}");
        }
    }

    #[test]
    fn triangle_all_twos_n3() {
        // (N+8)/(N^2 (N+2)^2) at N=3.
        let m = on_moment(&g(3, &[2, 2, 2]), 3).unwrap();
        assert_eq!(m.value, rat(11, 225));
        for n in 1..=5u32 {
            let m = on_moment(&g(3, &[2, 2, 2]), n).unwrap();
            let nn = n as i64;
            assert_eq!(m.value, rat(nn + 8, nn * nn * (nn + 2) * (nn + 2)), "N={n}");
        }
    }

    #[test]
    fn closed_form_matches_elimination() {
        for n in 1..=6u32 {
            for x in 0..=8u64 {
                let cf = on_pair_closed_form(x, n).unwrap();
                let el = on_moment(&g(2, &[2 * x as u32]), n).unwrap().value;
                assert_eq!(cf, el, "x={x} N={n}");
            }
        }
        assert_eq!(on_pair_closed_form(0, 5).unwrap(), rat_i64(1));
        assert_eq!(on_pair_closed_form(1, 3).unwrap(), rat(1, 3));
        assert_eq!(on_pair_closed_form(3, 2).unwrap(), rat(5, 16));
    }

    #[test]
    fn cpn_pair_and_triangle() {
        assert_eq!(cpn_pair_closed_form(2, 2).unwrap(), rat(1, 3));
        for n in 1..=4u32 {
            for m in 0..=5u64 {
                let cf = cpn_pair_closed_form(m, n).unwrap();
                let el = cpn_moment(&g(2, &[m as u32]), n).unwrap().value;
                assert_eq!(cf, el, "m={m} N={n}");
            }
        }
        // (N+3)/(N^2 (N+1)^2) at N=2.
        assert_eq!(cpn_moment(&g(3, &[1, 1, 1]), 2).unwrap().value, rat(5, 36));
        // Zero exponents integrate to one.
        assert_eq!(cpn_moment(&g(3, &[0, 0, 0]), 3).unwrap().value, rat_i64(1));
        assert_eq!(on_moment(&g(3, &[0, 0, 0]), 3).unwrap().value, rat_i64(1));
    }

    #[test]
    fn cpn_moments_strictly_positive() {
        for n in 1..=3u32 {
            for w in [[1, 0, 0], [1, 1, 0], [2, 1, 1], [3, 2, 1]] {
                let v = cpn_moment(&g(3, &w), n).unwrap().value;
                assert!(v.is_positive(), "w={w:?} N={n}");
            }
        }
    }

    #[test]
    fn aggregated_matches_enumerated_small_battery() {
        for n in 1..=4u32 {
            for w in [
                vec![2u32],
                vec![4],
                vec![6],
                vec![2, 2, 2],
                vec![4, 2, 2],
                vec![2, 0, 2],
                vec![1, 1, 2],
                vec![3, 3, 2],
            ] {
                let p = if w.len() == 1 { 2 } else { 3 };
                let gg = g(p, &w);
                let agg = on_moment(&gg, n).unwrap().value;
                let brute = on_moment_bruteforce(&gg, n).unwrap();
                assert_eq!(agg, brute, "ON w={w:?} N={n}");
            }
            for w in [vec![1u32], vec![2], vec![3], vec![1, 1, 1], vec![2, 1, 1], vec![2, 2, 0]] {
                let p = if w.len() == 1 { 2 } else { 3 };
                let gg = g(p, &w);
                let agg = cpn_moment(&gg, n).unwrap().value;
                let brute = cpn_moment_bruteforce(&gg, n).unwrap();
                assert_eq!(agg, brute, "CP w={w:?} N={n}");
            }
        }
    }

    #[test]
    fn component_expansion_cross_check() {
        // Fully independent route: expand every inner product into vector
        // components and use single-sphere component moments.
        fn on_expand(gr: &WeightedGraph, n: u32) -> ExactScalar {
            let pairs: Vec<(usize, usize)> = gr
                .all_pairs()
                .into_iter()
                .flat_map(|(i, j)| std::iter::repeat((i, j)).take(gr.weight(i, j) as usize))
                .collect();
            let p = gr.p();
            let mut total = ExactScalar::zero();
            let mut comps = vec![0usize; pairs.len()];
            loop {
                let mut expo = vec![vec![0u32; n as usize]; p];
                for (f, &(i, j)) in pairs.iter().enumerate() {
                    expo[i][comps[f]] += 1;
                    expo[j][comps[f]] += 1;
                }
                let mut term = ExactScalar::one();
                for row in &expo {
                    term *= on_component_moment(row, n);
                    if term.is_zero() {
                        break;
                    }
                }
                total += term;
                let mut k = 0;
                loop {
                    if k == comps.len() {
                        return total;
                    }
                    comps[k] += 1;
                    if comps[k] < n as usize {
                        break;
                    }
                    comps[k] = 0;
                    k += 1;
                }
            }
        }
        for n in 1..=3u32 {
            for w in [vec![2u32], vec![4], vec![2, 2, 2], vec![1, 1, 2]] {
                let p = if w.len() == 1 { 2 } else { 3 };
                let gg = g(p, &w);
                assert_eq!(on_moment(&gg, n).unwrap().value, on_expand(&gg, n), "w={w:?} N={n}");
            }
        }
    }

    #[test]
    fn elimination_order_independence() {
        let gg = g(4, &[2, 1, 1, 1, 1, 2]);
        let reference = on_moment(&gg, 3).unwrap().value;
        for order in crate::core::combinat::permutations(4) {
            let v = on_moment_with_order(&gg, 3, &order).unwrap();
            assert_eq!(v, reference, "order {order:?}");
        }
        let gg = g(3, &[2, 1, 1]);
        let reference = cpn_moment(&gg, 2).unwrap().value;
        for order in crate::core::combinat::permutations(3) {
            let v = cpn_moment_with_order(&gg, 2, &order).unwrap();
            assert_eq!(v, reference, "order {order:?}");
        }
    }

    #[test]
    fn values_stay_in_unit_interval_and_match_parity() {
        for n in 1..=3u32 {
            for w in [
                vec![0u32, 0, 0],
                vec![2, 2, 0],
                vec![1, 1, 1],
                vec![2, 2, 2],
                vec![4, 0, 0],
                vec![3, 1, 2],
            ] {
                let gg = g(3, &w);
                let v = on_moment(&gg, n).unwrap().value;
                assert!(!v.is_negative() && v <= ExactScalar::one(), "w={w:?}");
                assert_eq!(v.is_positive(), gg.is_even(), "w={w:?} N={n}");
            }
        }
    }

    #[test]
    fn degree_caps_enforced() {
        assert!(matches!(on_moment(&g(2, &[18]), 3), Err(Error::DegreeCap { .. })));
        // Weight 16 is the edge of exact mode and must work.
        assert!(on_moment(&g(2, &[16]), 3).is_ok());
        assert!(on_moment(&g(2, &[2]), 0).is_err());
    }

    #[test]
    fn moment_json_shape() {
        let m = on_moment(&g(3, &[2, 2, 2]), 3).unwrap();
        let j: serde_json::Value = serde_json::from_str(&m.to_json()).unwrap();
        assert_eq!(j["model"], "on");
        assert_eq!(j["N"], 3);
        assert_eq!(j["value"], "11/225");
        assert!(j["float"].as_str().unwrap().starts_with("0.0488888888"));
    }
}
