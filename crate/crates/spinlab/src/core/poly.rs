//! Sparse multivariate polynomials with exact rational coefficients.
//! Just enough algebra for symbolic Kirchhoff polynomials and the
//! derivative recursions; not a general computer algebra system.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::core::exact::ExactScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub n: usize,
    /// exponent vector -> coefficient; zero coefficients are never stored.
    pub terms: BTreeMap<Vec<u32>, ExactScalar>,
}

impl Poly {
    pub fn zero(n: usize) -> Self {
        Poly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: ExactScalar) -> Self {
        let mut p = Poly::zero(n);
        if !c.is_zero() {
            p.terms.insert(vec![0; n], c);
        }
        p
    }

    pub fn one(n: usize) -> Self {
        Poly::constant(n, ExactScalar::one())
    }

    pub fn var(n: usize, j: usize) -> Self {
        let mut e = vec![0u32; n];
        e[j] = 1;
        let mut p = Poly::zero(n);
        p.terms.insert(e, ExactScalar::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, exp: Vec<u32>, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &ExactScalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.n);
        }
        Poly {
            n: self.n,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn diff(&self, j: usize) -> Poly {
        let mut out = Poly::zero(self.n);
        for (e, c) in &self.terms {
            if e[j] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[j] -= 1;
            out.add_term(ne, c * ExactScalar::from_integer(e[j].into()));
        }
        out
    }

    pub fn eval(&self, x: &[ExactScalar]) -> ExactScalar {
        assert_eq!(x.len(), self.n, "evaluation point dimension mismatch");
        let mut acc = ExactScalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (j, &ej) in e.iter().enumerate() {
                for _ in 0..ej {
                    t *= &x[j];
                }
            }
            acc += t;
        }
        acc
    }

    /// Maximum exponent of variable j across terms.
    pub fn degree_in(&self, j: usize) -> u32 {
        self.terms.keys().map(|e| e[j]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }
}
