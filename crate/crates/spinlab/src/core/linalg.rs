//! Exact linear algebra over rationals: fraction-free determinants,
//! Gauss-Jordan inverses, and LDL^T positive-semidefiniteness certification.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::core::exact::ExactScalar;
use crate::{Error, Result};

/// Dense square rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMat {
    pub q: usize,
    pub rows: Vec<Vec<ExactScalar>>,
}

impl RatMat {
    pub fn zeros(q: usize) -> Self {
        RatMat {
            q,
            rows: vec![vec![ExactScalar::zero(); q]; q],
        }
    }

    pub fn identity(q: usize) -> Self {
        let mut m = RatMat::zeros(q);
        for i in 0..q {
            m.rows[i][i] = ExactScalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<ExactScalar>>) -> Result<Self> {
        let q = rows.len();
        if rows.iter().any(|r| r.len() != q) {
            return Err(Error::DimensionMismatch("matrix rows must be square".into()));
        }
        Ok(RatMat { q, rows })
    }

    pub fn is_symmetric(&self) -> bool {
        for i in 0..self.q {
            for j in i + 1..self.q {
                if self.rows[i][j] != self.rows[j][i] {
                    return false;
                }
            }
        }
        true
    }

    pub fn add(&self, other: &RatMat) -> RatMat {
        let mut out = self.clone();
        for i in 0..self.q {
            for j in 0..self.q {
                out.rows[i][j] += &other.rows[i][j];
            }
        }
        out
    }

    pub fn scale(&self, c: &ExactScalar) -> RatMat {
        let mut out = self.clone();
        for row in &mut out.rows {
            for x in row.iter_mut() {
                *x *= c;
            }
        }
        out
    }

    pub fn matmul(&self, other: &RatMat) -> RatMat {
        let mut out = RatMat::zeros(self.q);
        for i in 0..self.q {
            for k in 0..self.q {
                if self.rows[i][k].is_zero() {
                    continue;
                }
                for j in 0..self.q {
                    let t = &self.rows[i][k] * &other.rows[k][j];
                    out.rows[i][j] += t;
                }
            }
        }
        out
    }

    pub fn trace(&self) -> ExactScalar {
        (0..self.q).map(|i| self.rows[i][i].clone()).sum()
    }

    /// Exact determinant: clears denominators row by row, then runs
    /// fraction-free Bareiss elimination over the integers.
    pub fn det(&self) -> ExactScalar {
        if self.q == 0 {
            return ExactScalar::one();
        }
        let mut scale = BigInt::one();
        let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(self.q);
        for row in &self.rows {
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= &lcm;
            m.push(row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect());
        }
        let d = det_bareiss(m);
        ExactScalar::new(d, scale)
    }

    /// Exact inverse via Gauss-Jordan; None when singular.
    pub fn inverse(&self) -> Option<RatMat> {
        let q = self.q;
        let mut a = self.rows.clone();
        let mut inv = RatMat::identity(q).rows;
        for col in 0..q {
            let pivot = (col..q).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].clone();
            for j in 0..q {
                a[col][j] /= &p;
                inv[col][j] /= &p;
            }
            for r in 0..q {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for j in 0..q {
                        let t = &f * &a[col][j];
                        a[r][j] -= t;
                        let t = &f * &inv[col][j];
                        inv[r][j] -= t;
                    }
                }
            }
        }
        Some(RatMat { q, rows: inv })
    }
}

/// Fraction-free Bareiss determinant of an integer matrix.
pub fn det_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = &t / &prev; // exact division by the Bareiss identity
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Outcome of the exact LDL^T factorization with symmetric pivoting.
#[derive(Clone, Debug)]
pub struct LdltCertificate {
    pub psd: bool,
    pub positive_definite: bool,
    /// Pivots actually taken; for a PSD matrix all are > 0 and their count
    /// is the rank.
    pub pivots: Vec<ExactScalar>,
}

/// Certifies positive semidefiniteness of a symmetric rational matrix by
/// LDL^T with symmetric (diagonal) pivoting. No floating point anywhere.
pub fn ldlt_certify(m: &RatMat) -> Result<LdltCertificate> {
    if !m.is_symmetric() {
        return Err(Error::BadInput("LDL^T certification needs a symmetric matrix".into()));
    }
    let q = m.q;
    let mut a = m.rows.clone();
    let mut active: Vec<usize> = (0..q).collect();
    let mut pivots = Vec::new();
    loop {
        // Largest remaining diagonal entry as pivot.
        let best = active
            .iter()
            .copied()
            .max_by(|&i, &j| a[i][i].cmp(&a[j][j]));
        let Some(kk) = best else { break };
        if a[kk][kk].is_negative() {
            return Ok(LdltCertificate {
                psd: false,
                positive_definite: false,
                pivots,
            });
        }
        if a[kk][kk].is_zero() {
            // All remaining diagonals are zero: PSD iff the whole remaining
            // block vanishes.
            let clean = active
                .iter()
                .all(|&i| active.iter().all(|&j| a[i][j].is_zero()));
            return Ok(LdltCertificate {
                psd: clean,
                positive_definite: clean && pivots.len() == q,
                pivots,
            });
        }
        let p = a[kk][kk].clone();
        active.retain(|&i| i != kk);
        for &i in &active {
            if a[i][kk].is_zero() {
                continue;
            }
            let f = &a[i][kk] / &p;
            for &j in &active {
                let t = &f * &a[kk][j];
                a[i][j] -= t;
            }
        }
        pivots.push(p);
    }
    let rank = pivots.len();
    Ok(LdltCertificate {
        psd: true,
        positive_definite: rank == q,
        pivots,
    })
}
