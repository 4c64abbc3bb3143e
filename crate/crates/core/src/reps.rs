//! Matrix realizations of `Ind_B^G(χ)`.
//!
//! Canonical convention on `ℓ²(ℤ)`:
//! `U(j,b) δ_k = χ(α_{k-j}(b)) δ_{k-j}`. Equivalently
//! `(U(j,b) ξ)_k = χ(α_k(b)) ξ_{k+j}`; the two formulas describe the same
//! operator, so no relabeling is needed between them.
//!
//! Finite surrogates:
//!
//! * `U_p(j,b) = D_χ(b) P^j` on `ℂ^p` for a character of period `p`;
//! * the cyclic quotient `ℓ²(ℤ/pNℤ)`, an exact representation for finite
//!   orbits;
//! * the zero-padded window `{-M..M}`, exact on interior entries only.

use std::fmt;

use num::{BigInt, BigRational, Complex, One, Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::characters::{Character, FiniteOrbit, SolenoidChar, DEFAULT_ORBIT_BOUND};
use crate::error::{Error, Result};
use crate::exact::{RationalAngle, RationalVector};
use crate::group::{DilationGroup, GroupElement};

/// A matrix with exactly one unit-modulus entry per row and column.
///
/// Column `k` holds `e^{2πi·phases[k]}` in row `sigma[k]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhasedPermMatrix {
    sigma: Vec<usize>,
    phases: Vec<RationalAngle>,
}

impl PhasedPermMatrix {
    pub fn new(sigma: Vec<usize>, phases: Vec<RationalAngle>) -> Result<Self> {
        let n = sigma.len();
        if phases.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: phases.len(),
            });
        }
        let mut seen = vec![false; n];
        for &s in &sigma {
            if s >= n || std::mem::replace(&mut seen[s], true) {
                return Err(Error::Invalid(format!("{sigma:?} is not a permutation")));
            }
        }
        Ok(PhasedPermMatrix { sigma, phases })
    }

    pub fn identity(n: usize) -> Self {
        PhasedPermMatrix {
            sigma: (0..n).collect(),
            phases: vec![RationalAngle::zero(); n],
        }
    }

    pub fn diagonal(phases: Vec<RationalAngle>) -> Self {
        PhasedPermMatrix {
            sigma: (0..phases.len()).collect(),
            phases,
        }
    }

    pub fn size(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn phases(&self) -> &[RationalAngle] {
        &self.phases
    }

    /// The phase at `(row, col)`, `None` for a zero entry.
    pub fn entry(&self, row: usize, col: usize) -> Option<&RationalAngle> {
        (self.sigma[col] == row).then(|| &self.phases[col])
    }

    pub fn mul(&self, other: &PhasedPermMatrix) -> Result<PhasedPermMatrix> {
        if self.size() != other.size() {
            return Err(Error::DimensionMismatch {
                expected: self.size(),
                found: other.size(),
            });
        }
        let (sigma, phases) = (0..other.size())
            .map(|k| {
                let mid = other.sigma[k];
                (self.sigma[mid], &other.phases[k] + &self.phases[mid])
            })
            .unzip();
        Ok(PhasedPermMatrix { sigma, phases })
    }

    /// Inverse, which is also the conjugate transpose.
    pub fn inverse(&self) -> PhasedPermMatrix {
        let n = self.size();
        let mut sigma = vec![0; n];
        let mut phases = vec![RationalAngle::zero(); n];
        for k in 0..n {
            sigma[self.sigma[k]] = k;
            phases[self.sigma[k]] = self.phases[k].conj();
        }
        PhasedPermMatrix { sigma, phases }
    }

    pub fn adjoint(&self) -> PhasedPermMatrix {
        self.inverse()
    }

    pub fn pow(&self, n: i64) -> PhasedPermMatrix {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = PhasedPermMatrix::identity(self.size());
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base).expect("same size");
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.sigma.iter().enumerate().all(|(k, &s)| k == s) && self.phases.iter().all(|p| p.is_zero())
    }

    pub fn is_diagonal(&self) -> bool {
        self.sigma.iter().enumerate().all(|(k, &s)| k == s)
    }

    /// Block diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &PhasedPermMatrix) -> PhasedPermMatrix {
        let n = self.size();
        PhasedPermMatrix {
            sigma: self.sigma.iter().copied().chain(other.sigma.iter().map(|s| s + n)).collect(),
            phases: self.phases.iter().chain(&other.phases).cloned().collect(),
        }
    }

    /// `(row, col, phase)` sorted by row.
    pub fn triples(&self) -> Vec<(usize, usize, RationalAngle)> {
        let mut t: Vec<_> = (0..self.size())
            .map(|k| (self.sigma[k], k, self.phases[k].clone()))
            .collect();
        t.sort_by_key(|e| (e.0, e.1));
        t
    }

    /// Multi-line rendering with `e^{2πi·p/q}` entries.
    pub fn pretty(&self) -> String {
        let n = self.size();
        let cells: Vec<Vec<String>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| match self.entry(r, c) {
                        None => "0".to_string(),
                        Some(p) if p.is_zero() => "1".to_string(),
                        Some(p) => format!("e^{{2πi·{p}}}"),
                    })
                    .collect()
            })
            .collect();
        let width = cells.iter().flatten().map(|s| s.chars().count()).max().unwrap_or(1);
        cells
            .iter()
            .map(|row| {
                let padded: Vec<String> = row
                    .iter()
                    .map(|s| format!("{}{}", " ".repeat(width - s.chars().count()), s))
                    .collect();
                format!("[ {} ]", padded.join("  "))
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl Serialize for PhasedPermMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<(usize, usize, String)> = self
            .triples()
            .into_iter()
            .map(|(r, c, p)| (r, c, p.to_string()))
            .collect();
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("entries", &entries)?;
        m.serialize_entry("size", &self.size())?;
        m.end()
    }
}

impl fmt::Display for PhasedPermMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

/// The cyclic permutation `P` with ones at `(i, i+1 mod p)`, so `P e_k = e_{k-1}`.
pub fn build_p(p: usize) -> Result<PhasedPermMatrix> {
    if p == 0 {
        return Err(Error::Invalid("permutation size must be at least 1".into()));
    }
    Ok(PhasedPermMatrix {
        sigma: (0..p).map(|k| (k + p - 1) % p).collect(),
        phases: vec![RationalAngle::zero(); p],
    })
}

/// `D_χ(b) = diag(χ(α^i(b)))_{i<p}`.
pub fn build_d(chi: &SolenoidChar, b: &RationalVector, p: usize, grp: &DilationGroup) -> Result<PhasedPermMatrix> {
    let rep = FiniteInducedRep::new(&chi.clone().into(), grp)?;
    if rep.period() != p {
        return Err(Error::PeriodMismatch {
            requested: p,
            actual: rep.period(),
        });
    }
    rep.d(b)
}

/// `U_p(j,b) = D_χ(b) P^j`. Characters with infinite orbit are rejected.
pub fn build_up(chi: &Character, g: &GroupElement, grp: &DilationGroup) -> Result<PhasedPermMatrix> {
    FiniteInducedRep::new(chi, grp)?.up(g)
}

/// `U_p(g) U_p(h) = U_p(gh)`.
pub fn check_rep_property(chi: &Character, g: &GroupElement, h: &GroupElement, grp: &DilationGroup) -> Result<bool> {
    FiniteInducedRep::new(chi, grp)?.check_rep_property(g, h)
}

/// `P D_χ(b) = D_χ(α(b)) P`.
pub fn check_covariance(chi: &Character, b: &RationalVector, grp: &DilationGroup) -> Result<bool> {
    FiniteInducedRep::new(chi, grp)?.check_covariance(b)
}

/// The finite-orbit representations attached to one character.
#[derive(Clone, Debug)]
pub struct FiniteInducedRep<'g> {
    orbit: FiniteOrbit<'g>,
}

impl<'g> FiniteInducedRep<'g> {
    pub fn new(chi: &Character, grp: &'g DilationGroup) -> Result<Self> {
        Self::with_bound(chi, grp, DEFAULT_ORBIT_BOUND)
    }

    pub fn with_bound(chi: &Character, grp: &'g DilationGroup, bound: usize) -> Result<Self> {
        Ok(FiniteInducedRep {
            orbit: FiniteOrbit::new(chi, grp, bound)?,
        })
    }

    pub fn orbit(&self) -> &FiniteOrbit<'g> {
        &self.orbit
    }

    pub fn period(&self) -> usize {
        self.orbit.period()
    }

    pub fn group(&self) -> &'g DilationGroup {
        self.orbit.group()
    }

    pub fn p(&self) -> PhasedPermMatrix {
        build_p(self.period()).expect("period is positive")
    }

    pub fn d(&self, b: &RationalVector) -> Result<PhasedPermMatrix> {
        Ok(PhasedPermMatrix::diagonal(self.orbit.phases(0, self.period(), b)?))
    }

    /// `U_p(j,b) e_k = χ(α_{k-j}(b)) e_{k-j mod p}`.
    pub fn up(&self, g: &GroupElement) -> Result<PhasedPermMatrix> {
        self.cyclic(1, g)
    }

    /// The representation on `ℓ²(ℤ/pNℤ)`: `δ_k ↦ χ(α_{k-j}(b)) δ_{k-j}`.
    ///
    /// Well defined because `k ↦ χ(α_k(b))` is `p`-periodic. For `N = 1`
    /// this is exactly `U_p`.
    pub fn cyclic(&self, n: usize, g: &GroupElement) -> Result<PhasedPermMatrix> {
        if n == 0 {
            return Err(Error::Invalid("cyclic multiplicity N must be at least 1".into()));
        }
        let p = self.period();
        let size = (p * n) as i64;
        let band = self.orbit.phases(-g.j(), p, g.b())?;
        let sigma = (0..size).map(|k| (k - g.j()).rem_euclid(size) as usize).collect();
        let phases = (0..size as usize).map(|k| band[k % p].clone()).collect();
        Ok(PhasedPermMatrix { sigma, phases })
    }

    pub fn generators(&self, extra_depth: usize) -> Result<Vec<PhasedPermMatrix>> {
        self.cyclic_generators(1, extra_depth)
    }

    pub fn cyclic_generators(&self, n: usize, extra_depth: usize) -> Result<Vec<PhasedPermMatrix>> {
        self.group()
            .generators(extra_depth)?
            .iter()
            .map(|g| self.cyclic(n, g))
            .collect()
    }

    pub fn check_rep_property(&self, g: &GroupElement, h: &GroupElement) -> Result<bool> {
        let gh = self.group().multiply(g, h)?;
        Ok(self.up(g)?.mul(&self.up(h)?)? == self.up(&gh)?)
    }

    pub fn check_covariance(&self, b: &RationalVector) -> Result<bool> {
        let p = self.p();
        let lhs = p.mul(&self.d(b)?)?;
        let rhs = self.d(&self.group().alpha_pow(1, b)?)?.mul(&p)?;
        Ok(lhs == rhs)
    }
}

/// `cyclic_induced(χ, N)(g)` on `ℓ²(ℤ/pNℤ)`.
pub fn cyclic_induced(chi: &Character, n: usize, g: &GroupElement, grp: &DilationGroup) -> Result<PhasedPermMatrix> {
    FiniteInducedRep::new(chi, grp)?.cyclic(n, g)
}

/// The unitary relabeling `R` with `R · cyclic_induced(χ, 1)(g) = U_p(g) · R`.
///
/// Both are built from the same formula, so `R` is the identity; it is
/// exposed so callers can state the correspondence explicitly.
pub fn cyclic_relabeling(p: usize) -> PhasedPermMatrix {
    PhasedPermMatrix::identity(p)
}

/// A nonzero scalar `c · e^{2πiθ}` with `c ∈ ℚ(i)`, or zero.
///
/// Stored with `θ ∈ [0, 1/4)` (quarter turns folded into `c`), which makes
/// the representation unique: the only roots of unity in `ℚ(i)` are the
/// powers of `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coefficient {
    coef: Complex<BigRational>,
    angle: RationalAngle,
}

fn i_pow(c: Complex<BigRational>, n: u8) -> Complex<BigRational> {
    (0..n % 4).fold(c, |c, _| Complex::new(-c.im, c.re))
}

impl Coefficient {
    pub fn new(coef: Complex<BigRational>, angle: RationalAngle) -> Self {
        if coef.is_zero() {
            return Self::zero();
        }
        let four = angle.value() * BigRational::from_integer(BigInt::from(4));
        let q = four.floor();
        let turns: u8 = q.to_integer().try_into().expect("angle lies in [0,1)");
        let rest = angle.value() - q / BigRational::from_integer(BigInt::from(4));
        Coefficient {
            coef: i_pow(coef, turns),
            angle: RationalAngle::from_rational(&rest),
        }
    }

    pub fn zero() -> Self {
        Coefficient {
            coef: Complex::zero(),
            angle: RationalAngle::zero(),
        }
    }

    pub fn one() -> Self {
        Self::phase(RationalAngle::zero())
    }

    pub fn phase(angle: RationalAngle) -> Self {
        Self::new(Complex::one(), angle)
    }

    pub fn scalar(c: Complex<BigRational>) -> Self {
        Self::new(c, RationalAngle::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coef.is_zero()
    }

    pub fn mul(&self, other: &Coefficient) -> Coefficient {
        Coefficient::new(&self.coef * &other.coef, &self.angle + &other.angle)
    }

    pub fn conj(&self) -> Coefficient {
        Coefficient::new(self.coef.conj(), self.angle.conj())
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.coef;
        let imag = |x: &BigRational| match x.to_string().as_str() {
            "1" => "i".to_string(),
            "-1" => "-i".to_string(),
            s => format!("{s}i"),
        };
        let base = match (c.re.is_zero(), c.im.is_zero()) {
            (_, true) => c.re.to_string(),
            (true, false) => imag(&c.im),
            _ if c.im.is_negative() => format!("({}-{})", c.re, imag(&-&c.im)),
            _ => format!("({}+{})", c.re, imag(&c.im)),
        };
        if self.angle.is_zero() {
            write!(f, "{base}")
        } else {
            write!(f, "{base}·e^{{2πi·{}}}", self.angle)
        }
    }
}

/// An operator on `ℓ²({-M..M})` with at most one nonzero entry per column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowedOperator {
    half_width: usize,
    cols: Vec<Option<(i64, Coefficient)>>,
}

impl WindowedOperator {
    fn from_fn(half_width: usize, f: impl Fn(i64) -> Result<Option<(i64, Coefficient)>>) -> Result<Self> {
        let m = half_width as i64;
        let cols = (-m..=m)
            .map(|k| {
                Ok(f(k)?
                    .filter(|(r, c)| r.abs() <= m && !c.is_zero()))
            })
            .collect::<Result<_>>()?;
        Ok(WindowedOperator { half_width, cols })
    }

    pub fn identity(half_width: usize) -> Self {
        Self::from_fn(half_width, |k| Ok(Some((k, Coefficient::one())))).expect("infallible")
    }

    /// `T_n δ_k = δ_{k-n}`, i.e. `(T_n ξ)_k = ξ_{k+n}`.
    pub fn shift(n: i64, half_width: usize) -> Self {
        Self::from_fn(half_width, |k| Ok(Some((k - n, Coefficient::one())))).expect("infallible")
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    fn idx(&self, k: i64) -> Option<usize> {
        let m = self.half_width as i64;
        (k.abs() <= m).then(|| (k + m) as usize)
    }

    /// The image of `δ_k` as `(row, coefficient)`.
    pub fn column(&self, k: i64) -> Option<&(i64, Coefficient)> {
        self.idx(k).and_then(|i| self.cols[i].as_ref())
    }

    pub fn entry(&self, row: i64, col: i64) -> Coefficient {
        match self.column(col) {
            Some((r, c)) if *r == row => c.clone(),
            _ => Coefficient::zero(),
        }
    }

    /// Product of the truncations; entries near the boundary may differ
    /// from the truncation of the product.
    pub fn mul(&self, other: &WindowedOperator) -> Result<WindowedOperator> {
        if self.half_width != other.half_width {
            return Err(Error::DimensionMismatch {
                expected: self.half_width,
                found: other.half_width,
            });
        }
        Self::from_fn(self.half_width, |k| {
            Ok(other
                .column(k)
                .and_then(|(mid, c1)| self.column(*mid).map(|(r, c2)| (*r, c2.mul(c1)))))
        })
    }

    pub fn adjoint(&self) -> WindowedOperator {
        let m = self.half_width as i64;
        let mut cols = vec![None; self.cols.len()];
        for k in -m..=m {
            if let Some((r, c)) = self.column(k) {
                cols[(r + m) as usize] = Some((k, c.conj()));
            }
        }
        WindowedOperator {
            half_width: self.half_width,
            cols,
        }
    }

    /// Equality on the entries `(r, c)` with `|r|, |c| < M - margin`.
    pub fn agrees_on_interior(&self, other: &WindowedOperator, margin: usize) -> bool {
        let bound = self.half_width as i64 - margin as i64;
        let inner = |op: &WindowedOperator, k: i64| {
            op.column(k).filter(|(r, _)| r.abs() < bound).cloned()
        };
        self.half_width == other.half_width && (-bound + 1..bound).all(|k| inner(self, k) == inner(other, k))
    }

    /// `(row, col, coefficient)` sorted by row.
    pub fn triples(&self) -> Vec<(i64, i64, Coefficient)> {
        let m = self.half_width as i64;
        let mut t: Vec<_> = (-m..=m)
            .filter_map(|k| self.column(k).map(|(r, c)| (*r, k, c.clone())))
            .collect();
        t.sort_by_key(|e| (e.0, e.1));
        t
    }
}

impl Serialize for WindowedOperator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<(i64, i64, String)> = self
            .triples()
            .into_iter()
            .map(|(r, c, v)| (r, c, v.to_string()))
            .collect();
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("entries", &entries)?;
        m.serialize_entry("half_width", &self.half_width)?;
        m.end()
    }
}

/// `(π(ω)ξ)_k = ω_k ξ_k` on the window `{-M..M}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalMultiplier {
    half_width: usize,
    values: Vec<Complex<BigRational>>,
}

impl DiagonalMultiplier {
    pub fn new(half_width: usize, values: Vec<Complex<BigRational>>) -> Result<Self> {
        if values.len() != 2 * half_width + 1 {
            return Err(Error::DimensionMismatch {
                expected: 2 * half_width + 1,
                found: values.len(),
            });
        }
        Ok(DiagonalMultiplier { half_width, values })
    }

    pub fn constant(half_width: usize, c: Complex<BigRational>) -> Self {
        DiagonalMultiplier {
            half_width,
            values: vec![c; 2 * half_width + 1],
        }
    }

    /// The indicator of `{k}`.
    pub fn indicator(half_width: usize, k: i64) -> Self {
        let mut w = Self::constant(half_width, Complex::zero());
        if k.unsigned_abs() as usize <= half_width {
            w.values[(k + half_width as i64) as usize] = Complex::one();
        }
        w
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn value(&self, k: i64) -> Complex<BigRational> {
        let m = self.half_width as i64;
        if k.abs() <= m {
            self.values[(k + m) as usize].clone()
        } else {
            Complex::zero()
        }
    }

    /// Indices with `ω_k ≠ 0`.
    pub fn support(&self) -> Vec<i64> {
        let m = self.half_width as i64;
        (-m..=m).filter(|&k| !self.value(k).is_zero()).collect()
    }

    /// `(T_j ω)_k = ω_{k+j}`, zero where `k + j` leaves the window.
    pub fn shifted(&self, j: i64) -> Self {
        let m = self.half_width as i64;
        DiagonalMultiplier {
            half_width: self.half_width,
            values: (-m..=m).map(|k| self.value(k + j)).collect(),
        }
    }

    pub fn to_operator(&self) -> WindowedOperator {
        WindowedOperator::from_fn(self.half_width, |k| Ok(Some((k, Coefficient::scalar(self.value(k))))))
            .expect("infallible")
    }
}

/// `χ(α_i(b))` for any character.
fn char_phase(chi: &Character, i: i64, b: &RationalVector, grp: &DilationGroup) -> Result<RationalAngle> {
    chi.evaluate(&grp.alpha_pow(i, b)?, grp)
}

/// Truncation of `U(j,b) δ_k = χ(α_{k-j}(b)) δ_{k-j}` to `{-M..M}`.
pub fn windowed_induced(chi: &Character, g: &GroupElement, half_width: usize, grp: &DilationGroup) -> Result<WindowedOperator> {
    let j = g.j();
    if j.unsigned_abs() as usize > half_width {
        return Err(Error::WindowTooSmall {
            half_width,
            needed: j.unsigned_abs() as usize,
        });
    }
    WindowedOperator::from_fn(half_width, |k| {
        if (k - j).unsigned_abs() as usize > half_width {
            return Ok(None);
        }
        let phase = char_phase(chi, k - j, g.b(), grp)?;
        Ok(Some((k - j, Coefficient::phase(phase))))
    })
}

fn require_margin(half_width: usize, margin: usize) -> Result<()> {
    if half_width <= margin {
        return Err(Error::WindowTooSmall {
            half_width,
            needed: margin + 1,
        });
    }
    Ok(())
}

/// `U(g) U(h)` and `U(gh)` agree on interior entries.
pub fn check_windowed_homomorphism(
    chi: &Character,
    g: &GroupElement,
    h: &GroupElement,
    half_width: usize,
    grp: &DilationGroup,
) -> Result<bool> {
    let margin = (g.j().abs() + h.j().abs()) as usize;
    require_margin(half_width, margin)?;
    let lhs = windowed_induced(chi, g, half_width, grp)?.mul(&windowed_induced(chi, h, half_width, grp)?)?;
    let rhs = windowed_induced(chi, &grp.multiply(g, h)?, half_width, grp)?;
    Ok(lhs.agrees_on_interior(&rhs, margin))
}

/// `T_n U^χ(g) = U^{α̂ⁿχ}(g) T_n` on interior entries.
pub fn check_shift_relation(
    chi: &Character,
    n: i64,
    g: &GroupElement,
    half_width: usize,
    grp: &DilationGroup,
) -> Result<bool> {
    let margin = (n.abs() + g.j().abs()) as usize;
    require_margin(half_width, margin)?;
    let t = WindowedOperator::shift(n, half_width);
    let lhs = t.mul(&windowed_induced(chi, g, half_width, grp)?)?;
    let moved = chi.dual_action_pow(n, grp)?;
    let rhs = windowed_induced(&moved, g, half_width, grp)?.mul(&t)?;
    Ok(lhs.agrees_on_interior(&rhs, margin))
}

/// `U(g) π(ω) U(g)* = π(T_j ω)` on interior entries.
///
/// `ω` must vanish within distance `|j|` of the boundary.
pub fn check_imprimitivity_covariance(
    chi: &Character,
    g: &GroupElement,
    omega: &DiagonalMultiplier,
    grp: &DilationGroup,
) -> Result<bool> {
    let m = omega.half_width();
    let margin = g.j().unsigned_abs() as usize;
    require_margin(m, margin)?;
    let bound = (m - margin) as i64;
    if let Some(&k) = omega.support().iter().find(|k| k.abs() >= bound) {
        return Err(Error::BoundaryTouched { index: k });
    }
    let u = windowed_induced(chi, g, m, grp)?;
    let lhs = u.mul(&omega.to_operator())?.mul(&u.adjoint())?;
    let rhs = omega.shifted(g.j()).to_operator();
    Ok(lhs.agrees_on_interior(&rhs, margin))
}

/// Which surrogate a restriction is read from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RestrictionSource {
    /// `U_p`: one copy of each orbit point.
    Finite,
    /// The window `{-M..M}`: the characters `α̂^k χ` at the diagonal slots.
    Window(usize),
}

/// `U|_B = ⊕_k α̂^k χ` as `(character, multiplicity)` in order of first occurrence.
pub fn restriction_decomposition(
    chi: &Character,
    source: RestrictionSource,
    grp: &DilationGroup,
) -> Result<Vec<(Character, usize)>> {
    let chars: Vec<Character> = match source {
        RestrictionSource::Finite => FiniteOrbit::new(chi, grp, DEFAULT_ORBIT_BOUND)?.points().to_vec(),
        RestrictionSource::Window(m) => {
            let m = m as i64;
            (-m..=m).map(|k| chi.dual_action_pow(k, grp)).collect::<Result<_>>()?
        }
    };
    let mut out: Vec<(Character, usize)> = Vec::new();
    for c in chars {
        match out.iter_mut().find(|(x, _)| *x == c) {
            Some((_, n)) => *n += 1,
            None => out.push((c, 1)),
        }
    }
    Ok(out)
}
