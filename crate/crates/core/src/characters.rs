//! Characters of `B_A`, the dual action `α̂χ = χ∘α` and orbits.
//!
//! Two families are supported:
//!
//! * [`SolenoidChar`]: a rational torus point `x` whose denominator is
//!   coprime to `det A`. It extends uniquely to a character of all of
//!   `B_A` through the compatible sequence `x_k = (Aᵀ)^{-k} x mod ℤ^d`,
//!   with `χ(A^{-k} m) = ⟨x_k, m⟩`. Orbits are always finite.
//! * [`RealChar`]: `χ_r(b) = ⟨r, b⟩ mod 1` for a rational `r ∈ ℝ^d`, the
//!   pullback of a character of `ℝ^d`. For expansive `A` the orbit is
//!   infinite unless `r = 0`.

use std::fmt;

use num::{BigInt, BigRational, Integer, One, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{mod_inverse, RationalAngle, RationalVector};
use crate::group::DilationGroup;

pub const DEFAULT_ORBIT_BOUND: usize = 10_000;

/// Points kept from an orbit that exceeded its bound.
pub const UNBOUNDED_PREVIEW: usize = 8;

/// A rational point `x = num / q` of the torus, `0 <= num_i < q`, `q` minimal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SolenoidChar {
    num: Vec<BigInt>,
    q: BigInt,
}

impl SolenoidChar {
    pub fn new(x: &RationalVector, grp: &DilationGroup) -> Result<Self> {
        x.check_dim(grp.dim())?;
        let q = x.common_denominator();
        let num = x
            .entries()
            .iter()
            .map(|e| (e * BigRational::from_integer(q.clone())).to_integer())
            .collect();
        let chi = Self::from_numerators(num, q);
        if !chi.q.gcd(grp.det()).is_one() {
            return Err(Error::NotCoprime {
                q: chi.q,
                det: grp.det().clone(),
            });
        }
        Ok(chi)
    }

    pub fn trivial(d: usize) -> Self {
        SolenoidChar {
            num: vec![BigInt::zero(); d],
            q: BigInt::one(),
        }
    }

    fn from_numerators(num: Vec<BigInt>, q: BigInt) -> Self {
        let num: Vec<BigInt> = num.iter().map(|n| n.mod_floor(&q)).collect();
        let g = num.iter().fold(q.clone(), |acc, n| acc.gcd(n));
        SolenoidChar {
            num: num.into_iter().map(|n| n / &g).collect(),
            q: q / g,
        }
    }

    pub fn dim(&self) -> usize {
        self.num.len()
    }

    /// The torus point with entries in `[0, 1)`.
    pub fn point(&self) -> RationalVector {
        RationalVector::new(
            self.num
                .iter()
                .map(|n| BigRational::new(n.clone(), self.q.clone()))
                .collect(),
        )
    }

    pub fn denominator(&self) -> &BigInt {
        &self.q
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn is_trivial(&self) -> bool {
        self.q.is_one()
    }

    /// `x ↦ Aᵀ x mod ℤ^d`.
    pub fn dual_action(&self, grp: &DilationGroup) -> Self {
        Self::from_numerators(grp.transpose().apply_int(&self.num), self.q.clone())
    }

    /// Solves `Aᵀ y ≡ x mod ℤ^d` using the inverse of `Aᵀ` modulo `q`.
    pub fn dual_action_inverse(&self, grp: &DilationGroup) -> Result<Self> {
        let det_inv = mod_inverse(grp.det(), &self.q).ok_or_else(|| Error::NotCoprime {
            q: self.q.clone(),
            det: grp.det().clone(),
        })?;
        let y: Vec<BigInt> = grp
            .transpose_adjugate()
            .apply_int(&self.num)
            .into_iter()
            .map(|v| v * &det_inv)
            .collect();
        Ok(Self::from_numerators(y, self.q.clone()))
    }

    pub fn dual_action_pow(&self, n: i64, grp: &DilationGroup) -> Result<Self> {
        let mut chi = self.clone();
        for _ in 0..n.unsigned_abs() {
            chi = if n >= 0 {
                chi.dual_action(grp)
            } else {
                chi.dual_action_inverse(grp)?
            };
        }
        Ok(chi)
    }

    /// `χ(b)` for `b = A^{-k} m`: `⟨(Aᵀ)^{-k} x, m⟩ mod 1`.
    pub fn evaluate(&self, b: &RationalVector, grp: &DilationGroup) -> Result<RationalAngle> {
        let (k, m) = grp.decompose(b)?;
        let xk = self.dual_action_pow(-(k as i64), grp)?;
        Ok(xk.pair_integral(&m))
    }

    /// `⟨x, m⟩ mod 1` for integral `m`.
    pub(crate) fn pair_integral(&self, m: &[BigInt]) -> RationalAngle {
        let s = self.num.iter().zip(m).fold(BigInt::zero(), |acc, (a, b)| acc + a * b);
        RationalAngle::from_integer_ratio(&s, &self.q)
    }
}

/// `χ_r(b) = ⟨r, b⟩ mod 1`; `r` is kept exactly, without reduction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RealChar {
    r: RationalVector,
}

impl RealChar {
    pub fn new(r: RationalVector) -> Self {
        RealChar { r }
    }

    pub fn vector(&self) -> &RationalVector {
        &self.r
    }

    pub fn dual_action(&self, grp: &DilationGroup) -> Self {
        RealChar {
            r: grp.transpose().apply(&self.r),
        }
    }

    pub fn dual_action_pow(&self, n: i64, grp: &DilationGroup) -> Result<Self> {
        let at_inv = grp.transpose().inverse()?;
        let mut r = self.r.clone();
        for _ in 0..n.unsigned_abs() {
            r = if n >= 0 {
                grp.transpose().apply(&r)
            } else {
                at_inv.apply(&r)
            };
        }
        Ok(RealChar { r })
    }

    pub fn evaluate(&self, b: &RationalVector, grp: &DilationGroup) -> Result<RationalAngle> {
        self.r.check_dim(grp.dim())?;
        grp.depth(b)?;
        Ok(RationalAngle::from_rational(&self.r.dot(b)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Character {
    Solenoid(SolenoidChar),
    Real(RealChar),
}

impl Character {
    /// Parses `"sol:1/7,3/7"` or `"real:1/3"`.
    pub fn parse(s: &str, grp: &DilationGroup) -> Result<Self> {
        let s = s.trim();
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("character {s:?}: expected sol:... or real:...")))?;
        let v: RationalVector = body.parse()?;
        v.check_dim(grp.dim())?;
        match kind.trim() {
            "sol" => Ok(Character::Solenoid(SolenoidChar::new(&v, grp)?)),
            "real" => Ok(Character::Real(RealChar::new(v))),
            other => Err(Error::Parse(format!("unknown character kind {other:?}"))),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Character::Solenoid(_) => "sol",
            Character::Real(_) => "real",
        }
    }

    /// The stored vector: the reduced torus point or the exact real vector.
    pub fn vector(&self) -> RationalVector {
        match self {
            Character::Solenoid(c) => c.point(),
            Character::Real(c) => c.vector().clone(),
        }
    }

    pub fn dual_action(&self, grp: &DilationGroup) -> Self {
        match self {
            Character::Solenoid(c) => Character::Solenoid(c.dual_action(grp)),
            Character::Real(c) => Character::Real(c.dual_action(grp)),
        }
    }

    pub fn dual_action_pow(&self, n: i64, grp: &DilationGroup) -> Result<Self> {
        Ok(match self {
            Character::Solenoid(c) => Character::Solenoid(c.dual_action_pow(n, grp)?),
            Character::Real(c) => Character::Real(c.dual_action_pow(n, grp)?),
        })
    }

    pub fn evaluate(&self, b: &RationalVector, grp: &DilationGroup) -> Result<RationalAngle> {
        match self {
            Character::Solenoid(c) => c.evaluate(b, grp),
            Character::Real(c) => c.evaluate(b, grp),
        }
    }

    pub fn as_solenoid(&self) -> Option<&SolenoidChar> {
        match self {
            Character::Solenoid(c) => Some(c),
            Character::Real(_) => None,
        }
    }
}

impl From<SolenoidChar> for Character {
    fn from(c: SolenoidChar) -> Self {
        Character::Solenoid(c)
    }
}

impl From<RealChar> for Character {
    fn from(c: RealChar) -> Self {
        Character::Real(c)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind(), self.vector())
    }
}

impl Serialize for Character {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("kind", self.kind())?;
        m.serialize_entry("point", &self.vector())?;
        m.end()
    }
}

/// Equality as functions on `B_A`.
///
/// Solenoid points compare modulo `ℤ^d` (they are stored reduced); real
/// characters compare as exact vectors, which is the right criterion when
/// `A` is expansive.
pub fn chars_equal(a: &Character, b: &Character) -> Result<bool> {
    match (a, b) {
        (Character::Solenoid(x), Character::Solenoid(y)) => Ok(x == y),
        (Character::Real(x), Character::Real(y)) => Ok(x == y),
        _ => Err(Error::KindMismatch(a.kind(), b.kind())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Orbit {
    /// `points[i] = α̂^i χ`, pairwise distinct, `α̂^p χ = χ`.
    Finite { points: Vec<Character> },
    /// No return within `explored` steps; only a prefix is kept.
    Unbounded {
        prefix: Vec<Character>,
        explored: usize,
    },
}

impl Orbit {
    pub fn period(&self) -> Option<usize> {
        match self {
            Orbit::Finite { points } => Some(points.len()),
            Orbit::Unbounded { .. } => None,
        }
    }

    pub fn points(&self) -> &[Character] {
        match self {
            Orbit::Finite { points } => points,
            Orbit::Unbounded { prefix, .. } => prefix,
        }
    }
}

/// Iterates `α̂` until the orbit closes or `bound` steps have been taken.
pub fn orbit(chi: &Character, grp: &DilationGroup, bound: usize) -> Orbit {
    let mut points = vec![chi.clone()];
    let mut cur = chi.dual_action(grp);
    let mut steps = 1;
    while steps <= bound {
        if &cur == chi {
            return Orbit::Finite { points };
        }
        if points.len() < UNBOUNDED_PREVIEW || steps < bound {
            points.push(cur.clone());
        }
        cur = cur.dual_action(grp);
        steps += 1;
    }
    points.truncate(UNBOUNDED_PREVIEW);
    Orbit::Unbounded {
        prefix: points,
        explored: bound,
    }
}

/// A finite orbit `χ, α̂χ, …, α̂^{p-1}χ` with evaluation of `χ(α_i(b))`.
///
/// For solenoid points the phase is `⟨α̂^{i-k} χ, m⟩` with `b = A^{-k} m`, so
/// no inverse dual action is ever computed.
#[derive(Clone, Debug)]
pub struct FiniteOrbit<'g> {
    grp: &'g DilationGroup,
    points: Vec<Character>,
}

impl<'g> FiniteOrbit<'g> {
    pub fn new(chi: &Character, grp: &'g DilationGroup, bound: usize) -> Result<Self> {
        match orbit(chi, grp, bound) {
            Orbit::Finite { points } => Ok(FiniteOrbit { grp, points }),
            Orbit::Unbounded { .. } => Err(Error::InfiniteOrbit { bound }),
        }
    }

    pub fn group(&self) -> &'g DilationGroup {
        self.grp
    }

    pub fn period(&self) -> usize {
        self.points.len()
    }

    pub fn base(&self) -> &Character {
        &self.points[0]
    }

    /// `α̂^i χ` for any integer `i`.
    pub fn point(&self, i: i64) -> &Character {
        &self.points[i.rem_euclid(self.period() as i64) as usize]
    }

    pub fn points(&self) -> &[Character] {
        &self.points
    }

    /// `χ(α_i(b))`.
    pub fn phase(&self, i: i64, b: &RationalVector) -> Result<RationalAngle> {
        Ok(self.phases(i, 1, b)?.remove(0))
    }

    /// `[χ(α_{offset+i}(b)) for i in 0..len]`, decomposing `b` once.
    pub fn phases(&self, offset: i64, len: usize, b: &RationalVector) -> Result<Vec<RationalAngle>> {
        let (k, m) = self.grp.decompose(b)?;
        (0..len as i64)
            .map(|i| match self.point(offset + i - k as i64) {
                Character::Solenoid(c) => Ok(c.pair_integral(&m)),
                Character::Real(_) => self.point(offset + i).evaluate(b, self.grp),
            })
            .collect()
    }
}

/// Multiplicative order of `Aᵀ` in `GL_d(ℤ/qℤ)`; `None` past `bound`.
pub fn transpose_order_mod(grp: &DilationGroup, q: &BigInt, bound: usize) -> Option<usize> {
    let d = grp.dim();
    let reduce = |rows: Vec<Vec<BigInt>>| -> Vec<Vec<BigInt>> {
        rows.into_iter()
            .map(|r| r.into_iter().map(|x| x.mod_floor(q)).collect())
            .collect()
    };
    let at = reduce(grp.transpose().rows().to_vec());
    let id = reduce(crate::exact::IntMatrix::identity(d).rows().to_vec());
    let mut cur = at.clone();
    for n in 1..=bound {
        if cur == id {
            return Some(n);
        }
        cur = reduce(
            (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| (0..d).fold(BigInt::zero(), |acc, k| acc + &cur[i][k] * &at[k][j]))
                        .collect()
                })
                .collect(),
        );
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::IntMatrix;
    use proptest::prelude::*;

    fn dyadic() -> DilationGroup {
        DilationGroup::scalar(2).unwrap()
    }

    fn sol(n: i64, d: i64, grp: &DilationGroup) -> SolenoidChar {
        SolenoidChar::new(&RationalVector::from_fractions(&[(n, d)]), grp).unwrap()
    }

    fn ang(n: i64, d: i64) -> RationalAngle {
        RationalAngle::new(n, d).unwrap()
    }

    fn v(n: i64, d: i64) -> RationalVector {
        RationalVector::from_fractions(&[(n, d)])
    }

    #[test]
    fn dual_action_examples() {
        let g = dyadic();
        assert_eq!(sol(1, 7, &g).dual_action(&g), sol(2, 7, &g));
        assert_eq!(sol(0, 1, &g).dual_action(&g), sol(0, 1, &g));
        let r = RealChar::new(v(1, 3)).dual_action(&g);
        assert_eq!(r.vector(), &v(2, 3));
    }

    #[test]
    fn dual_action_inverse_examples() {
        let g = dyadic();
        assert_eq!(sol(1, 7, &g).dual_action_inverse(&g).unwrap(), sol(4, 7, &g));
        assert_eq!(SolenoidChar::trivial(1).dual_action_inverse(&g).unwrap(), SolenoidChar::trivial(1));
        assert!(matches!(
            SolenoidChar::new(&v(1, 6), &g),
            Err(Error::NotCoprime { .. })
        ));
    }

    #[test]
    fn evaluate_examples() {
        let g = dyadic();
        let chi = sol(1, 7, &g);
        assert_eq!(chi.evaluate(&v(1, 1), &g).unwrap(), ang(1, 7));
        assert_eq!(chi.evaluate(&v(1, 2), &g).unwrap(), ang(4, 7));
        assert_eq!(chi.evaluate(&v(0, 1), &g).unwrap(), RationalAngle::zero());
        assert!(chi.evaluate(&v(1, 3), &g).is_err());
        let r = RealChar::new(v(1, 3));
        assert_eq!(r.evaluate(&v(1, 2), &g).unwrap(), ang(1, 6));
        assert!(r.evaluate(&v(1, 5), &g).is_err());
    }

    #[test]
    fn orbit_examples() {
        let g = dyadic();
        let o = orbit(&sol(1, 7, &g).into(), &g, DEFAULT_ORBIT_BOUND);
        assert_eq!(o.period(), Some(3));
        let pts: Vec<String> = o.points().iter().map(|c| c.to_string()).collect();
        assert_eq!(pts, ["sol:1/7", "sol:2/7", "sol:4/7"]);
        assert_eq!(orbit(&SolenoidChar::trivial(1).into(), &g, 10).period(), Some(1));
        let o = orbit(&RealChar::new(v(1, 3)).into(), &g, 64);
        assert_eq!(o.period(), None);
        assert!(matches!(o, Orbit::Unbounded { explored: 64, .. }));
        assert_eq!(o.points().len(), UNBOUNDED_PREVIEW);
        // period 3 but bound 2
        assert_eq!(orbit(&sol(1, 7, &g).into(), &g, 2).period(), None);
        assert_eq!(orbit(&sol(1, 7, &g).into(), &g, 3).period(), Some(3));
        // real character with a finite orbit
        assert_eq!(orbit(&RealChar::new(v(0, 1)).into(), &g, 5).period(), Some(1));
    }

    #[test]
    fn equality_examples() {
        let g = dyadic();
        let a: Character = sol(1, 7, &g).into();
        let b: Character = sol(8, 7, &g).into();
        assert!(chars_equal(&a, &b).unwrap());
        assert!(!chars_equal(&a, &sol(2, 7, &g).into()).unwrap());
        let r1: Character = RealChar::new(v(1, 3)).into();
        let r2: Character = RealChar::new(v(4, 3)).into();
        assert!(!chars_equal(&r1, &r2).unwrap());
        // they really differ as characters: b = 1/2
        assert_ne!(r1.evaluate(&v(1, 2), &g).unwrap(), r2.evaluate(&v(1, 2), &g).unwrap());
        assert!(matches!(chars_equal(&a, &r1), Err(Error::KindMismatch("sol", "real"))));
    }

    #[test]
    fn parse_characters() {
        let g = DilationGroup::new(IntMatrix::from_i64(&[&[2, 1], &[1, 1]]).unwrap()).unwrap();
        let c = Character::parse("sol:1/7,3/7", &g).unwrap();
        assert_eq!(c.to_string(), "sol:1/7,3/7");
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"{"kind":"sol","point":["1/7","3/7"]}"#
        );
        assert!(Character::parse("sol:1/7", &g).is_err());
        assert!(Character::parse("foo:1/7,1", &g).is_err());
        assert!(Character::parse("1/7,1", &g).is_err());
        let r = Character::parse("real:-5/3,2", &g).unwrap();
        assert_eq!(r.to_string(), "real:-5/3,2");
    }

    #[test]
    fn finite_orbit_phases_agree_with_evaluate() {
        let g = DilationGroup::new(IntMatrix::from_i64(&[&[0, 2], &[1, 0]]).unwrap()).unwrap();
        let chi = SolenoidChar::new(&RationalVector::from_fractions(&[(1, 5), (2, 3)]), &g).unwrap();
        let fo = FiniteOrbit::new(&chi.clone().into(), &g, 1000).unwrap();
        let b = RationalVector::from_fractions(&[(3, 2), (-1, 4)]);
        for i in -4..8 {
            let direct = chi.evaluate(&g.alpha_pow(i, &b).unwrap(), &g).unwrap();
            assert_eq!(fo.phase(i, &b).unwrap(), direct);
        }
    }

    fn arb_group() -> impl Strategy<Value = DilationGroup> {
        prop_oneof![
            Just(DilationGroup::scalar(2).unwrap()),
            Just(DilationGroup::scalar(3).unwrap()),
            Just(DilationGroup::new(IntMatrix::from_i64(&[&[2, 1], &[1, 1]]).unwrap()).unwrap()),
            Just(DilationGroup::new(IntMatrix::from_i64(&[&[0, 2], &[1, 0]]).unwrap()).unwrap()),
        ]
    }

    fn coprime_char(grp: &DilationGroup, q: i64, nums: &[i64]) -> SolenoidChar {
        let mut q = q;
        while !BigInt::from(q).gcd(grp.det()).is_one() {
            q += 1;
        }
        let x: Vec<(i64, i64)> = nums[..grp.dim()].iter().map(|&n| (n, q)).collect();
        SolenoidChar::new(&RationalVector::from_fractions(&x), grp).unwrap()
    }

    fn element(grp: &DilationGroup, k: i64, m: &[i64]) -> RationalVector {
        grp.alpha_pow(-k, &RationalVector::from_integers(&m[..grp.dim()])).unwrap()
    }

    proptest! {
        #[test]
        fn character_is_additive(
            grp in arb_group(), q in 2i64..60, nums in proptest::collection::vec(0i64..60, 2),
            k1 in 0i64..4, m1 in proptest::collection::vec(-20i64..20, 2),
            k2 in 0i64..4, m2 in proptest::collection::vec(-20i64..20, 2),
        ) {
            let chi = coprime_char(&grp, q, &nums);
            let b1 = element(&grp, k1, &m1);
            let b2 = element(&grp, k2, &m2);
            let lhs = chi.evaluate(&(&b1 + &b2), &grp).unwrap();
            let rhs = &chi.evaluate(&b1, &grp).unwrap() + &chi.evaluate(&b2, &grp).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn dual_action_is_precomposition(
            grp in arb_group(), q in 2i64..60, nums in proptest::collection::vec(0i64..60, 2),
            k in 0i64..4, m in proptest::collection::vec(-20i64..20, 2),
        ) {
            let chi = coprime_char(&grp, q, &nums);
            let b = element(&grp, k, &m);
            prop_assert_eq!(
                chi.dual_action(&grp).evaluate(&b, &grp).unwrap(),
                chi.evaluate(&grp.alpha_pow(1, &b).unwrap(), &grp).unwrap()
            );
            prop_assert_eq!(chi.dual_action_inverse(&grp).unwrap().dual_action(&grp), chi.clone());
            prop_assert_eq!(chi.dual_action(&grp).dual_action_inverse(&grp).unwrap(), chi.clone());
            let real = RealChar::new(RationalVector::from_fractions(&[(nums[0], q), (nums[1], q)][..grp.dim()]));
            prop_assert_eq!(
                real.dual_action(&grp).evaluate(&b, &grp).unwrap(),
                real.evaluate(&grp.alpha_pow(1, &b).unwrap(), &grp).unwrap()
            );
        }

        #[test]
        fn orbit_points_distinct_and_period_divides_order(
            grp in arb_group(), q in 2i64..40, nums in proptest::collection::vec(0i64..40, 2),
        ) {
            let chi = coprime_char(&grp, q, &nums);
            let o = orbit(&chi.clone().into(), &grp, DEFAULT_ORBIT_BOUND);
            let p = o.period().unwrap();
            let pts = o.points();
            for i in 0..p {
                for j in i + 1..p {
                    prop_assert_ne!(&pts[i], &pts[j]);
                }
                prop_assert_eq!(&pts[i].dual_action(&grp), &pts[(i + 1) % p]);
            }
            let ord = transpose_order_mod(&grp, chi.denominator(), 100_000).unwrap();
            prop_assert_eq!(ord % p, 0);
            let qd = chi.denominator().pow(grp.dim() as u32);
            prop_assert!(BigInt::from(p) <= qd);
        }
    }
}
