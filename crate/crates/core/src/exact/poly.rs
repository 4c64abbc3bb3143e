use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

use super::IntMatrix;

/// Integer polynomial, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly(Vec<BigInt>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.0
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// `x^n p(1/x)`.
    pub fn reversed(&self) -> IntPoly {
        IntPoly::new(self.0.iter().rev().cloned().collect())
    }

    /// Schur–Cohn test: every root lies strictly inside the unit circle.
    pub fn roots_inside_unit_disk(&self) -> bool {
        let mut f: Vec<BigRational> = self
            .0
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        loop {
            let n = f.len() - 1;
            if n == 0 {
                return !f[0].is_zero();
            }
            let (a0, an) = (f[0].clone(), f[n].clone());
            if a0.abs() >= an.abs() {
                return false;
            }
            // (an·f(z) − a0·f*(z)) / z
            f = (1..=n).map(|k| &an * &f[k] - &a0 * &f[n - k]).collect();
            while f.len() > 1 && f.last().is_some_and(Zero::is_zero) {
                f.pop();
            }
        }
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() && self.0.len() > 1 {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coeff = if abs.is_one() && k > 0 {
                String::new()
            } else {
                abs.to_string()
            };
            match k {
                0 => out.push_str(&abs.to_string()),
                1 => out.push_str(&format!("{coeff}x")),
                _ => out.push_str(&format!("{coeff}x^{k}")),
            }
        }
        write!(f, "{out}")
    }
}

/// Characteristic polynomial `det(xI − M)` by Faddeev–LeVerrier.
pub fn char_poly(m: &IntMatrix) -> IntPoly {
    let n = m.dim();
    let a = m.to_rational();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut mk = crate::exact::RatMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = a.mul(&mk);
        for i in 0..n {
            let v = next.get(i, i) + &coeffs[n - k + 1];
            next.set(i, i, v);
        }
        mk = next;
        let amk = a.mul(&mk);
        let tr = (0..n).fold(BigRational::zero(), |acc, i| acc + amk.get(i, i));
        coeffs[n - k] = -tr / BigRational::from_integer(BigInt::from(k));
    }
    IntPoly::new(coeffs.into_iter().map(|c| c.to_integer()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows).unwrap()
    }

    // det(tI − M) by cofactor expansion at integer t.
    fn char_det_oracle(rows: &[Vec<i64>], t: i64) -> i64 {
        fn det(rows: &[Vec<i64>]) -> i64 {
            if rows.len() == 1 {
                return rows[0][0];
            }
            (0..rows.len())
                .map(|c| {
                    let minor: Vec<Vec<i64>> = rows[1..]
                        .iter()
                        .map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &x)| x).collect())
                        .collect();
                    (if c % 2 == 0 { 1 } else { -1 }) * rows[0][c] * det(&minor)
                })
                .sum()
        }
        let shifted: Vec<Vec<i64>> = rows
            .iter()
            .enumerate()
            .map(|(i, r)| r.iter().enumerate().map(|(j, &x)| if i == j { t - x } else { -x }).collect())
            .collect();
        det(&shifted)
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(char_poly(&m(&[&[2]])), IntPoly::from_i64(&[-2, 1]));
        assert_eq!(char_poly(&m(&[&[0, -1], &[1, 0]])), IntPoly::from_i64(&[1, 0, 1]));
        assert_eq!(char_poly(&m(&[&[2, 1], &[1, 1]])), IntPoly::from_i64(&[1, -3, 1]));
        assert_eq!(char_poly(&m(&[&[2, 1], &[1, 1]])).to_string(), "x^2 - 3x + 1");
        assert_eq!(char_poly(&m(&[&[2]])).to_string(), "x - 2");
        assert_eq!(char_poly(&m(&[&[0, -1], &[1, 0]])).to_string(), "x^2 + 1");
    }

    #[test]
    fn char_poly_matches_cofactor_oracle() {
        let cases = [
            vec![vec![2, 1], vec![1, 1]],
            vec![vec![0, 2], vec![1, 0]],
            vec![vec![1, 2, 3], vec![0, -1, 4], vec![5, 1, 2]],
            vec![vec![3, 0, 1, 2], vec![1, 1, 0, 0], vec![0, 2, -2, 1], vec![4, 0, 1, 1]],
        ];
        for rows in &cases {
            let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            let p = char_poly(&m(&refs));
            assert_eq!(p.degree(), rows.len());
            for t in -3..=rows.len() as i64 + 3 {
                assert_eq!(p.eval(&BigInt::from(t)), BigInt::from(char_det_oracle(rows, t)));
            }
        }
    }

    #[test]
    fn schur_cohn() {
        // roots 1/2, 1/3
        assert!(IntPoly::from_i64(&[1, -5, 6]).roots_inside_unit_disk());
        // root 2
        assert!(!IntPoly::from_i64(&[-2, 1]).roots_inside_unit_disk());
        // roots ±i on the circle
        assert!(!IntPoly::from_i64(&[1, 0, 1]).roots_inside_unit_disk());
        // reversed x^2 - 3x + 1 has roots 0.38, 2.6
        assert!(!IntPoly::from_i64(&[1, -3, 1]).reversed().roots_inside_unit_disk());
        // reversed x^2 - 2 = 1 - 2x^2: roots ±1/√2
        assert!(IntPoly::from_i64(&[-2, 0, 1]).reversed().roots_inside_unit_disk());
    }
}
