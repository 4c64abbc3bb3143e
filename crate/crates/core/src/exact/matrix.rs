use std::fmt;

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

use super::{fmt_rational, lcm_all, RationalVector};
use crate::error::{Error, Result};

/// A square integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let d = rows.len();
        if d == 0 {
            return Err(Error::Invalid("matrix must be at least 1x1".into()));
        }
        for r in &rows {
            if r.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: r.len(),
                });
            }
        }
        Ok(IntMatrix { rows })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    /// Parses a JSON array of integer rows such as `[[2,1],[1,1]]`.
    pub fn parse_json(s: &str) -> Result<Self> {
        let rows: Vec<Vec<serde_json::Number>> = serde_json::from_str(s.trim())
            .map_err(|e| Error::Parse(format!("matrix {s:?}: {e}")))?;
        let rows = rows
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|x| {
                        x.to_string()
                            .parse::<BigInt>()
                            .map_err(|_| Error::Parse(format!("non-integer matrix entry {x}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows)
    }

    pub fn identity(d: usize) -> Self {
        let rows = (0..d)
            .map(|i| (0..d).map(|j| BigInt::from((i == j) as i32)).collect())
            .collect();
        IntMatrix { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim();
        let rows = (0..d)
            .map(|i| (0..d).map(|j| self.rows[j][i].clone()).collect())
            .collect();
        IntMatrix { rows }
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let d = self.dim();
        assert_eq!(d, other.dim(), "matrix dimension mismatch");
        let rows = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        (0..d).fold(BigInt::zero(), |acc, k| {
                            acc + &self.rows[i][k] * &other.rows[k][j]
                        })
                    })
                    .collect()
            })
            .collect();
        IntMatrix { rows }
    }

    pub fn pow(&self, n: u32) -> IntMatrix {
        let mut result = IntMatrix::identity(self.dim());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        result
    }

    pub fn sub_identity(&self) -> IntMatrix {
        let mut m = self.clone();
        for i in 0..self.dim() {
            m.rows[i][i] -= 1;
        }
        m
    }

    pub fn apply(&self, v: &RationalVector) -> RationalVector {
        assert_eq!(self.dim(), v.dim(), "matrix/vector dimension mismatch");
        RationalVector::new(
            self.rows
                .iter()
                .map(|r| {
                    r.iter().zip(v.entries()).fold(BigRational::zero(), |acc, (a, x)| {
                        acc + BigRational::from_integer(a.clone()) * x
                    })
                })
                .collect(),
        )
    }

    pub fn apply_int(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.dim(), v.len(), "matrix/vector dimension mismatch");
        self.rows
            .iter()
            .map(|r| r.iter().zip(v).fold(BigInt::zero(), |acc, (a, x)| acc + a * x))
            .collect()
    }

    /// Fraction-free (Bareiss) elimination; exact for any size.
    pub fn det(&self) -> BigInt {
        let d = self.dim();
        let mut m = self.rows.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..d {
            if m[k][k].is_zero() {
                match (k + 1..d).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..d {
                for j in k + 1..d {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[d - 1][d - 1]
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix {
            rows: self.dim(),
            cols: self.dim(),
            data: self
                .rows
                .iter()
                .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
                .collect(),
        }
    }

    pub fn inverse(&self) -> Result<RatMatrix> {
        self.to_rational().inverse()
    }

    /// `det(M) * M^{-1}`, an integer matrix.
    pub fn adjugate(&self) -> Result<IntMatrix> {
        let det = BigRational::from_integer(self.det());
        let inv = self.inverse()?;
        let rows = inv
            .data
            .iter()
            .map(|r| r.iter().map(|x| (x * &det).to_integer()).collect())
            .collect();
        Ok(IntMatrix { rows })
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_i64()).collect())
            .collect()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                let xs: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("[{}]", xs.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// A dense rectangular matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigRational>>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![vec![BigRational::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigRational::one();
        }
        m
    }

    pub fn from_rows(data: Vec<Vec<BigRational>>) -> Result<Self> {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        if let Some(r) = data.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: r.len(),
            });
        }
        Ok(RatMatrix { rows, cols, data })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i][j] = v;
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "matrix dimension mismatch");
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    if !other.data[k][j].is_zero() {
                        out.data[i][j] += &self.data[i][k] * &other.data[k][j];
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i][j] -= &other.data[i][j];
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().flatten().all(Zero::is_zero)
    }

    pub fn apply(&self, v: &RationalVector) -> RationalVector {
        assert_eq!(self.cols, v.dim(), "matrix/vector dimension mismatch");
        RationalVector::new(
            self.data
                .iter()
                .map(|r| {
                    r.iter()
                        .zip(v.entries())
                        .fold(BigRational::zero(), |acc, (a, x)| acc + a * x)
                })
                .collect(),
        )
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.data[i][c].is_zero()) else {
                continue;
            };
            self.data.swap(r, p);
            let inv = self.data[r][c].recip();
            for x in self.data[r].iter_mut() {
                *x *= &inv;
            }
            let pivot_row = self.data[r].clone();
            for i in 0..self.rows {
                if i != r && !self.data[i][c].is_zero() {
                    let f = self.data[i][c].clone();
                    for (x, y) in self.data[i].iter_mut().zip(&pivot_row) {
                        if !y.is_zero() {
                            *x -= &f * y;
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// A basis of `{x : M x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<RationalVector> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![BigRational::zero(); self.cols];
                x[f] = BigRational::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    x[pc] = -m.data[row][f].clone();
                }
                RationalVector::new(x)
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<RatMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = RatMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i][j] = self.data[i][j].clone();
            }
            aug.data[i][n + i] = BigRational::one();
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::SingularMatrix);
        }
        let data = aug.data.into_iter().map(|r| r[n..].to_vec()).collect();
        Ok(RatMatrix {
            rows: n,
            cols: n,
            data,
        })
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .data
            .iter()
            .map(|r| {
                let xs: Vec<String> = r.iter().map(fmt_rational).collect();
                format!("[{}]", xs.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Scales a rational vector to a primitive integer vector whose first
/// nonzero entry is positive.
pub(crate) fn primitive_integer_vector(v: &RationalVector) -> Vec<BigInt> {
    let l = lcm_all(v.entries().iter().map(|x| x.denom()));
    let ints: Vec<BigInt> = v
        .entries()
        .iter()
        .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = ints
        .iter()
        .find(|x| !x.is_zero())
        .map_or(BigInt::one(), |x| x.signum());
    ints.into_iter().map(|x| x * &sign / &g).collect()
}
