use num::{BigInt, Integer, One, Signed, Zero};

use super::{ext_gcd, IntMatrix};
use crate::error::{Error, Result};

/// Row-style Hermite normal form `H = U·M` of a nonsingular matrix.
///
/// `H` is upper triangular with positive diagonal and the entries above each
/// pivot reduced into `[0, pivot)`; `U` is unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteForm {
    pub h: IntMatrix,
    pub u: IntMatrix,
}

fn combine_rows(rows: &mut [Vec<BigInt>], r: usize, i: usize, coeffs: [&BigInt; 4]) {
    // (row_r, row_i) <- (a row_r + b row_i, c row_r + d row_i)
    let [a, b, c, d] = coeffs;
    let (new_r, new_i): (Vec<BigInt>, Vec<BigInt>) = rows[r]
        .iter()
        .zip(&rows[i])
        .map(|(x, y)| (a * x + b * y, c * x + d * y))
        .unzip();
    rows[r] = new_r;
    rows[i] = new_i;
}

pub fn hermite_normal_form(m: &IntMatrix) -> Result<HermiteForm> {
    let d = m.dim();
    let mut h: Vec<Vec<BigInt>> = m.rows().to_vec();
    let mut u: Vec<Vec<BigInt>> = IntMatrix::identity(d).rows().to_vec();
    for c in 0..d {
        for i in c + 1..d {
            if h[i][c].is_zero() {
                continue;
            }
            let (g, s, t) = ext_gcd(&h[c][c], &h[i][c]);
            let a = &h[c][c] / &g;
            let b = &h[i][c] / &g;
            let nb = -&b;
            combine_rows(&mut h, c, i, [&s, &t, &nb, &a]);
            combine_rows(&mut u, c, i, [&s, &t, &nb, &a]);
        }
        if h[c][c].is_zero() {
            return Err(Error::SingularMatrix);
        }
        if h[c][c].is_negative() {
            for x in h[c].iter_mut().chain(u[c].iter_mut()) {
                *x = -&*x;
            }
        }
        for i in 0..c {
            let q = h[i][c].div_floor(&h[c][c]);
            if q.is_zero() {
                continue;
            }
            let (hc, uc) = (h[c].clone(), u[c].clone());
            for (x, y) in h[i].iter_mut().zip(&hc) {
                *x -= &q * y;
            }
            for (x, y) in u[i].iter_mut().zip(&uc) {
                *x -= &q * y;
            }
        }
    }
    Ok(HermiteForm {
        h: IntMatrix::new(h)?,
        u: IntMatrix::new(u)?,
    })
}

/// Canonical representatives of `ℤ^d / M·ℤ^d` for a nonsingular `M`.
///
/// The rows of the Hermite form of `Mᵀ` are a triangular basis of the
/// column lattice of `M`; its diagonal bounds the fundamental box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetBox {
    basis: Vec<Vec<BigInt>>,
}

impl CosetBox {
    pub fn new(m: &IntMatrix) -> Result<Self> {
        let hnf = hermite_normal_form(&m.transpose())?;
        Ok(CosetBox {
            basis: hnf.h.rows().to_vec(),
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.dim()).map(|i| self.basis[i][i].clone()).collect()
    }

    pub fn index(&self) -> BigInt {
        self.diagonal().iter().product()
    }

    /// The unique box representative congruent to `v`.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut v = v.to_vec();
        for (i, row) in self.basis.iter().enumerate() {
            let q = v[i].div_floor(&row[i]);
            if !q.is_zero() {
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= &q * y;
                }
            }
        }
        v
    }

    /// Every box point in lexicographic order.
    pub fn enumerate(&self) -> Vec<Vec<BigInt>> {
        let diag = self.diagonal();
        let mut out = vec![Vec::new()];
        for h in &diag {
            let mut next = Vec::new();
            for prefix in &out {
                let mut k = BigInt::zero();
                while &k < h {
                    let mut p = prefix.clone();
                    p.push(k.clone());
                    next.push(p);
                    k += BigInt::one();
                }
            }
            out = next;
        }
        out
    }
}

/// Exactly `|det M|` vectors, one per coset of `M·ℤ^d` in `ℤ^d`.
pub fn coset_representatives(m: &IntMatrix) -> Result<Vec<Vec<BigInt>>> {
    Ok(CosetBox::new(m)?.enumerate())
}
