//! The semidirect product `G_A = B_A ⋊ ℤ` with `B_A = ∪_k A^{-k} ℤ^d` and
//! `ℤ` acting through multiplication by `A`.
//!
//! Multiplication follows `(k, c)(j, b) = (k + j, A^k b + c)` everywhere.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, Signed, Zero};
use rand::Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{IntMatrix, RatMatrix, RationalVector};

pub const DEFAULT_DEPTH_CAP: usize = 64;

#[derive(Clone, Debug)]
pub struct DilationGroup {
    a: IntMatrix,
    a_inv: RatMatrix,
    at: IntMatrix,
    at_adj: IntMatrix,
    det: BigInt,
    depth_cap: usize,
}

impl DilationGroup {
    pub fn new(a: IntMatrix) -> Result<Self> {
        let det = a.det();
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let a_inv = a.inverse()?;
        let at = a.transpose();
        let at_adj = at.adjugate()?;
        Ok(DilationGroup {
            a,
            a_inv,
            at,
            at_adj,
            det,
            depth_cap: DEFAULT_DEPTH_CAP,
        })
    }

    /// One-dimensional group with `A = [a]`.
    pub fn scalar(a: i64) -> Result<Self> {
        Self::new(IntMatrix::from_i64(&[&[a]])?)
    }

    pub fn with_depth_cap(mut self, cap: usize) -> Self {
        self.depth_cap = cap;
        self
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn transpose(&self) -> &IntMatrix {
        &self.at
    }

    pub(crate) fn transpose_adjugate(&self) -> &IntMatrix {
        &self.at_adj
    }

    pub fn inverse_matrix(&self) -> &RatMatrix {
        &self.a_inv
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn abs_det(&self) -> BigInt {
        self.det.abs()
    }

    pub fn depth_cap(&self) -> usize {
        self.depth_cap
    }

    /// `α_j(b) = A^j b`; negative `j` uses the exact inverse.
    pub fn alpha_pow(&self, j: i64, b: &RationalVector) -> Result<RationalVector> {
        b.check_dim(self.dim())?;
        let mut v = b.clone();
        if j >= 0 {
            for _ in 0..j {
                v = self.a.apply(&v);
            }
        } else {
            for _ in 0..j.unsigned_abs() {
                v = self.a_inv.apply(&v);
            }
        }
        Ok(v)
    }

    /// Minimal `k` with `A^k b ∈ ℤ^d`.
    pub fn depth(&self, b: &RationalVector) -> Result<usize> {
        self.decompose(b).map(|(k, _)| k)
    }

    /// Writes `b = A^{-k} m` with `k` minimal and `m` integral.
    pub fn decompose(&self, b: &RationalVector) -> Result<(usize, Vec<BigInt>)> {
        b.check_dim(self.dim())?;
        let mut v = b.clone();
        for k in 0..=self.depth_cap {
            if let Some(m) = v.to_integers() {
                return Ok((k, m));
            }
            v = self.a.apply(&v);
        }
        Err(Error::NotInGroup {
            cap: self.depth_cap,
        })
    }

    pub fn element(&self, j: i64, b: RationalVector) -> Result<GroupElement> {
        let depth = self.depth(&b)?;
        Ok(GroupElement { j, b, depth })
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            j: 0,
            b: RationalVector::zeros(self.dim()),
            depth: 0,
        }
    }

    /// The dilation generator `u = (1, 0)`.
    pub fn dilation(&self) -> GroupElement {
        GroupElement {
            j: 1,
            ..self.identity()
        }
    }

    /// The translation generator `t_i = (0, e_i)`.
    pub fn translation(&self, i: usize) -> GroupElement {
        GroupElement {
            j: 0,
            b: RationalVector::unit(self.dim(), i),
            depth: 0,
        }
    }

    /// `{u} ∪ {t_i}` plus `(0, A^{-K} e_i)` for `1 <= K <= extra_depth`.
    ///
    /// `u` and the `t_i` already generate `G_A`, since
    /// `(-j, 0)(0, m)(j, 0) = (0, A^{-j} m)`.
    pub fn generators(&self, extra_depth: usize) -> Result<Vec<GroupElement>> {
        let mut gens = vec![self.dilation()];
        gens.extend(self.fiber_generators(extra_depth)?);
        Ok(gens)
    }

    /// `(0, A^{-K} e_i)` for `0 <= K <= extra_depth`.
    pub fn fiber_generators(&self, extra_depth: usize) -> Result<Vec<GroupElement>> {
        let mut gens = Vec::new();
        for k in 0..=extra_depth {
            for i in 0..self.dim() {
                let b = self.alpha_pow(-(k as i64), &RationalVector::unit(self.dim(), i))?;
                gens.push(self.element(0, b)?);
            }
        }
        Ok(gens)
    }

    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        let b = &self.alpha_pow(g.j, &h.b)? + &g.b;
        self.element(g.j + h.j, b)
    }

    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement> {
        let b = -&self.alpha_pow(-g.j, &g.b)?;
        self.element(-g.j, b)
    }

    pub fn pow(&self, g: &GroupElement, n: u32) -> Result<GroupElement> {
        let mut acc = self.identity();
        for _ in 0..n {
            acc = self.multiply(&acc, g)?;
        }
        Ok(acc)
    }

    /// A random element `(j, A^{-k} m)` with `|j| <= max_j`, `k <= max_depth`
    /// and entries of `m` in `[-coeff, coeff]`.
    pub fn random_element<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        max_j: i64,
        max_depth: usize,
        coeff: i64,
    ) -> Result<GroupElement> {
        let j = rng.gen_range(-max_j..=max_j);
        let k = rng.gen_range(0..=max_depth) as i64;
        let m: Vec<i64> = (0..self.dim()).map(|_| rng.gen_range(-coeff..=coeff)).collect();
        let b = self.alpha_pow(-k, &RationalVector::from_integers(&m))?;
        self.element(j, b)
    }

    /// Parses `"j,b1,...,bd"` or the JSON form `{"j": .., "b": [..]}`.
    pub fn parse_element(&self, s: &str) -> Result<GroupElement> {
        let s = s.trim();
        if s.starts_with('{') {
            let v: serde_json::Value =
                serde_json::from_str(s).map_err(|e| Error::Parse(format!("group element: {e}")))?;
            let j = v
                .get("j")
                .and_then(|j| j.as_i64())
                .ok_or_else(|| Error::Parse("group element needs integer \"j\"".into()))?;
            let b = v
                .get("b")
                .and_then(|b| b.as_array())
                .ok_or_else(|| Error::Parse("group element needs array \"b\"".into()))?
                .iter()
                .map(|x| match x {
                    serde_json::Value::String(s) => crate::exact::parse_rational(s),
                    serde_json::Value::Number(n) => crate::exact::parse_rational(&n.to_string()),
                    _ => Err(Error::Parse(format!("bad entry {x}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            let b = RationalVector::new(b);
            b.check_dim(self.dim())?;
            return self.element(j, b);
        }
        let (j, rest) = s.split_once(',').unwrap_or((s, ""));
        let j: i64 = j
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("group element {s:?}: bad j")))?;
        let b = if rest.trim().is_empty() {
            RationalVector::zeros(self.dim())
        } else {
            RationalVector::from_str(rest)?
        };
        b.check_dim(self.dim())?;
        self.element(j, b)
    }
}

/// An element `(j, b)` of `G_A`, normalized on construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    j: i64,
    b: RationalVector,
    depth: usize,
}

impl GroupElement {
    pub fn j(&self) -> i64 {
        self.j
    }

    pub fn b(&self) -> &RationalVector {
        &self.b
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn is_identity(&self) -> bool {
        self.j == 0 && self.b.is_zero()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, ({}))", self.j, self.b)
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GroupElement", 2)?;
        st.serialize_field("b", &self.b)?;
        st.serialize_field("j", &self.j)?;
        st.end()
    }
}

/// Checks `u t u^{-1} = t^e` in `G_A` for `d = 1`, with `u = (1, 0)` and
/// `t = (0, 1)`.
pub fn baumslag_solitar_relation(grp: &DilationGroup, exponent: u32) -> Result<bool> {
    if grp.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: grp.dim(),
        });
    }
    let u = grp.dilation();
    let t = grp.translation(0);
    let lhs = grp.multiply(&grp.multiply(&u, &t)?, &grp.inverse(&u)?)?;
    Ok(lhs == grp.pow(&t, exponent)?)
}

/// The Baumslag–Solitar relation with exponent `A` itself.
pub fn baumslag_solitar_check(grp: &DilationGroup) -> Result<bool> {
    let a = grp.matrix().get(0, 0);
    let e = u32::try_from(a).map_err(|_| Error::Invalid(format!("exponent {a} out of range")))?;
    baumslag_solitar_relation(grp, e)
}
