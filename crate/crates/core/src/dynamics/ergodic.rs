use num::{BigInt, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{char_poly, primitive_integer_vector, IntMatrix};

/// A nonzero integer vector with `Aⁿ b = b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicWitness {
    pub n: usize,
    #[serde(serialize_with = "ser_ints")]
    pub b: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErgodicityReport {
    pub ergodic: bool,
    pub witness: Option<PeriodicWitness>,
    /// Every eigenvalue of `A` has modulus greater than 1.
    pub expansive: bool,
    /// Every `n` with `φ(n) <= d` was tested; all of them satisfy `n <= 2d²`.
    pub periods_checked: Vec<usize>,
}

fn ser_ints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(
        v.iter()
            .map(|x| x.to_i64().map_or_else(|| serde_json::Value::String(x.to_string()), serde_json::Value::from)),
    )
}

pub fn euler_phi(n: usize) -> usize {
    let mut n = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

/// The `n` for which a primitive `n`-th root of unity can be an eigenvalue
/// of an integer `d × d` matrix, i.e. `φ(n) <= d`.
///
/// Since `φ(n) >= √(n/2)`, every such `n` is at most `2d²`.
pub fn candidate_periods(d: usize) -> Vec<usize> {
    (1..=2 * d * d).filter(|&n| euler_phi(n) <= d).collect()
}

/// Primitive integer basis of `ker(Aⁿ − I)`; empty when only `b = 0` is fixed.
pub fn periodic_lattice_points(a: &IntMatrix, n: usize) -> Vec<Vec<BigInt>> {
    a.pow(n as u32)
        .sub_identity()
        .to_rational()
        .nullspace()
        .iter()
        .map(primitive_integer_vector)
        .collect()
}

/// Halmos–Rohlin: the dual automorphism is ergodic iff no `b ≠ 0` has
/// `Aⁿ b = b`, i.e. iff no root of unity is an eigenvalue of `A`.
pub fn is_ergodic(a: &IntMatrix) -> Result<ErgodicityReport> {
    let det = a.det();
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let expansive = char_poly(a).reversed().roots_inside_unit_disk();
    let periods = candidate_periods(a.dim());
    let mut witness = None;
    for &n in &periods {
        if a.pow(n as u32).sub_identity().det().is_zero() {
            let b = periodic_lattice_points(a, n).swap_remove(0);
            witness = Some(PeriodicWitness { n, b });
            break;
        }
    }
    Ok(ErgodicityReport {
        ergodic: witness.is_none(),
        witness,
        expansive,
        periods_checked: periods,
    })
}
