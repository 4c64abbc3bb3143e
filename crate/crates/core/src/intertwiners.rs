//! Intertwiner spaces, commutants, multiplicities and the vanishing of
//! `L_G(U_p^χ, Ind_B^G(χ))`.
//!
//! For phased permutation generators every intertwining equation reads
//! `x_P = e^{2πiθ} x_Q` for two unknown entries of `W`. The solution space is
//! then spanned by the connected components of the relation graph whose
//! accumulated phase around every cycle is zero; [`PhaseSystem`] tracks them
//! with a union-find carrying relative phases.

use std::collections::BTreeMap;

use num::{BigRational, One, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::characters::{chars_equal, orbit, Character, FiniteOrbit, Orbit, DEFAULT_ORBIT_BOUND};
use crate::error::{Error, Result};
use crate::exact::{RatMatrix, RationalAngle, RationalVector};
use crate::group::DilationGroup;
use crate::reps::{restriction_decomposition, FiniteInducedRep, PhasedPermMatrix, RestrictionSource};

/// Linear relations `x_p = e^{2πiθ} x_q` and `x_p = 0` over unknowns `0..n`.
#[derive(Clone, Debug)]
pub struct PhaseSystem {
    parent: Vec<usize>,
    // x_i = e^{2πi·offset[i]} x_{parent[i]}
    offset: Vec<RationalAngle>,
    size: Vec<usize>,
    zero: Vec<bool>,
}

impl PhaseSystem {
    pub fn new(n: usize) -> Self {
        PhaseSystem {
            parent: (0..n).collect(),
            offset: vec![RationalAngle::zero(); n],
            size: vec![1; n],
            zero: vec![false; n],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// `(root, θ)` with `x_i = e^{2πiθ} x_root`.
    pub fn find(&mut self, i: usize) -> (usize, RationalAngle) {
        let mut path = Vec::new();
        let mut cur = i;
        while self.parent[cur] != cur {
            path.push(cur);
            cur = self.parent[cur];
        }
        let root = cur;
        // compress from the node nearest the root outward
        for &node in path.iter().rev() {
            let p = self.parent[node];
            if p != root {
                let up = self.offset[p].clone();
                self.offset[node] = &self.offset[node] + &up;
            }
            self.parent[node] = root;
        }
        (root, if i == root { RationalAngle::zero() } else { self.offset[i].clone() })
    }

    /// Imposes `x_p = e^{2πiθ} x_q`.
    pub fn relate(&mut self, p: usize, q: usize, theta: &RationalAngle) {
        let (rp, ap) = self.find(p);
        let (rq, aq) = self.find(q);
        // x_rp = e^{θ + aq - ap} x_rq
        let rel = &(theta + &aq) - &ap;
        if rp == rq {
            if !rel.is_zero() {
                self.zero[rp] = true;
            }
            return;
        }
        let (child, root, rel) = if self.size[rp] <= self.size[rq] {
            (rp, rq, rel)
        } else {
            (rq, rp, rel.conj())
        };
        self.parent[child] = root;
        self.offset[child] = rel;
        self.size[root] += self.size[child];
        self.zero[root] = self.zero[root] || self.zero[child];
    }

    pub fn force_zero(&mut self, p: usize) {
        let (r, _) = self.find(p);
        self.zero[r] = true;
    }

    /// Components that admit a nonzero solution, each as `(index, θ)` sorted
    /// by index and normalized so the first entry has `θ = 0`.
    pub fn free_components(&mut self) -> Vec<Vec<(usize, RationalAngle)>> {
        let mut groups: BTreeMap<usize, Vec<(usize, RationalAngle)>> = BTreeMap::new();
        for i in 0..self.len() {
            let (r, a) = self.find(i);
            if !self.zero[r] {
                groups.entry(r).or_default().push((i, a));
            }
        }
        let mut comps: Vec<Vec<(usize, RationalAngle)>> = groups
            .into_values()
            .map(|members| {
                let base = members[0].1.clone();
                members.into_iter().map(|(i, a)| (i, &a - &base)).collect()
            })
            .collect();
        comps.sort_by_key(|c| c[0].0);
        comps
    }
}

/// A matrix whose nonzero entries are unit-modulus phases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), RationalAngle>,
}

impl PhaseMatrix {
    pub fn new(rows: usize, cols: usize, entries: BTreeMap<(usize, usize), RationalAngle>) -> Self {
        PhaseMatrix { rows, cols, entries }
    }

    pub fn from_perm(m: &PhasedPermMatrix) -> Self {
        let entries = m.triples().into_iter().map(|(r, c, p)| ((r, c), p)).collect();
        PhaseMatrix::new(m.size(), m.size(), entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), RationalAngle> {
        &self.entries
    }

    /// The phased permutation with the same entries, if the pattern is one.
    pub fn to_perm(&self) -> Option<PhasedPermMatrix> {
        if self.rows != self.cols || self.entries.len() != self.cols {
            return None;
        }
        let mut sigma = vec![usize::MAX; self.cols];
        let mut phases = vec![RationalAngle::zero(); self.cols];
        for ((r, c), p) in &self.entries {
            if sigma[*c] != usize::MAX {
                return None;
            }
            sigma[*c] = *r;
            phases[*c] = p.clone();
        }
        PhasedPermMatrix::new(sigma, phases).ok()
    }

    /// `W U₁(g) = U₂(g) W`; both sides have one term per entry.
    pub fn intertwines(&self, u1: &PhasedPermMatrix, u2: &PhasedPermMatrix) -> bool {
        let inv1 = u1.inverse();
        let lhs: BTreeMap<(usize, usize), RationalAngle> = self
            .entries
            .iter()
            .map(|((a, c), w)| {
                // column c of W is reached from column σ₁⁻¹(c) of U₁
                let b = inv1.sigma()[*c];
                ((*a, b), w + &u1.phases()[b])
            })
            .collect();
        let rhs: BTreeMap<(usize, usize), RationalAngle> = self
            .entries
            .iter()
            .map(|((c, b), w)| ((u2.sigma()[*c], *b), w + &u2.phases()[*c]))
            .collect();
        lhs == rhs
    }

    pub fn triples(&self) -> Vec<(usize, usize, String)> {
        self.entries.iter().map(|((r, c), p)| (*r, *c, p.to_string())).collect()
    }
}

impl Serialize for PhaseMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("cols", &self.cols)?;
        m.serialize_entry("entries", &self.triples())?;
        m.serialize_entry("rows", &self.rows)?;
        m.end()
    }
}

/// A basis of `L(U₁, U₂)`; basis elements have disjoint supports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntertwinerSpace {
    pub dimension: usize,
    pub basis: Vec<PhaseMatrix>,
}

impl IntertwinerSpace {
    /// Whether a phase matrix lies in the span of the basis.
    pub fn contains(&self, w: &PhaseMatrix) -> bool {
        let mut covered = 0;
        for b in &self.basis {
            let ratios: Vec<Option<RationalAngle>> = b
                .entries
                .iter()
                .map(|(idx, p)| w.entries.get(idx).map(|q| q - p))
                .collect();
            match ratios.first() {
                Some(Some(first)) => {
                    if ratios.iter().any(|r| r.as_ref() != Some(first)) {
                        return false;
                    }
                    covered += ratios.len();
                }
                Some(None) if ratios.iter().any(Option::is_some) => return false,
                _ => {}
            }
        }
        covered == w.entries.len()
    }
}

fn check_sizes(rep: &[PhasedPermMatrix]) -> Result<usize> {
    let n = rep.first().map_or(0, PhasedPermMatrix::size);
    for m in rep {
        if m.size() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.size(),
            });
        }
    }
    Ok(n)
}

/// All `W` (`n₂ × n₁`) with `W U₁(g) = U₂(g) W` for every listed generator.
///
/// Both lists must give matrices for the same generators in the same order.
/// Representations given by an empty list are treated as having size zero.
pub fn intertwiner_space(rep1: &[PhasedPermMatrix], rep2: &[PhasedPermMatrix]) -> Result<IntertwinerSpace> {
    if rep1.len() != rep2.len() {
        return Err(Error::GeneratorMismatch(rep1.len(), rep2.len()));
    }
    let (n1, n2) = (check_sizes(rep1)?, check_sizes(rep2)?);
    let mut sys = PhaseSystem::new(n1 * n2);
    let var = |a: usize, b: usize| a * n1 + b;
    for (u1, u2) in rep1.iter().zip(rep2) {
        let inv2 = u2.inverse();
        for a in 0..n2 {
            let c = inv2.sigma()[a];
            for b in 0..n1 {
                // φ₁[b] W[a][σ₁b] = φ₂[c] W[c][b]
                let theta = &u2.phases()[c] - &u1.phases()[b];
                sys.relate(var(a, u1.sigma()[b]), var(c, b), &theta);
            }
        }
    }
    let basis: Vec<PhaseMatrix> = sys
        .free_components()
        .into_iter()
        .map(|comp| {
            let entries = comp.into_iter().map(|(i, p)| ((i / n1, i % n1), p)).collect();
            PhaseMatrix::new(n2, n1, entries)
        })
        .collect();
    for w in &basis {
        if !rep1.iter().zip(rep2).all(|(u1, u2)| w.intertwines(u1, u2)) {
            return Err(Error::Invalid("intertwiner basis failed verification".into()));
        }
    }
    Ok(IntertwinerSpace {
        dimension: basis.len(),
        basis,
    })
}

pub fn commutant(rep: &[PhasedPermMatrix]) -> Result<IntertwinerSpace> {
    intertwiner_space(rep, rep)
}

/// Schur's lemma: irreducible iff the commutant is one-dimensional.
pub fn is_irreducible(rep: &[PhasedPermMatrix]) -> Result<bool> {
    Ok(commutant(rep)?.dimension == 1)
}

/// Dimension of `L(U₁, U₂)` by a dense rank computation over `ℚ`.
///
/// Only real phases (`0` and `1/2`) are accepted; this is an independent
/// check of the combinatorial solver, intended for small sizes.
pub fn dense_intertwiner_dimension(rep1: &[PhasedPermMatrix], rep2: &[PhasedPermMatrix]) -> Result<usize> {
    if rep1.len() != rep2.len() {
        return Err(Error::GeneratorMismatch(rep1.len(), rep2.len()));
    }
    let (n1, n2) = (check_sizes(rep1)?, check_sizes(rep2)?);
    let sign = |p: &RationalAngle| -> Result<BigRational> {
        match p.quarter_turns() {
            Some(0) => Ok(BigRational::one()),
            Some(2) => Ok(-BigRational::one()),
            _ => Err(Error::Invalid(format!("phase {p} is not real"))),
        }
    };
    let unknowns = n1 * n2;
    let mut rows = Vec::new();
    for (u1, u2) in rep1.iter().zip(rep2) {
        for a in 0..n2 {
            for b in 0..n1 {
                let mut row = vec![BigRational::zero(); unknowns];
                // (W U₁)[a][b] = Σ_c W[a][c] U₁[c][b]
                let c = u1.sigma()[b];
                row[a * n1 + c] += sign(&u1.phases()[b])?;
                // (U₂ W)[a][b] = Σ_c U₂[a][c] W[c][b]
                for c in 0..n2 {
                    if let Some(p) = u2.entry(a, c) {
                        row[c * n1 + b] -= sign(p)?;
                    }
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return Ok(unknowns);
    }
    Ok(unknowns - RatMatrix::from_rows(rows)?.rank())
}

/// `#{j | χ₂ = α̂^j χ₁}`, the dimension of `L_G(U^{χ₁}, U^{χ₂})`.
pub fn frobenius_multiplicity(chi1: &Character, chi2: &Character, grp: &DilationGroup) -> Result<usize> {
    let orb = FiniteOrbit::new(chi1, grp, DEFAULT_ORBIT_BOUND)?;
    let mut count = 0;
    for point in orb.points() {
        if chars_equal(chi2, point)? {
            count += 1;
        }
    }
    Ok(count)
}

/// The same count read off the intertwiners between `U_{p₁}^{χ₁}` and `U_{p₂}^{χ₂}`.
pub fn frobenius_by_intertwiners(chi1: &Character, chi2: &Character, grp: &DilationGroup, extra_depth: usize) -> Result<usize> {
    let r1 = FiniteInducedRep::new(chi1, grp)?.generators(extra_depth)?;
    let r2 = FiniteInducedRep::new(chi2, grp)?.generators(extra_depth)?;
    Ok(intertwiner_space(&r1, &r2)?.dimension)
}

/// Multiplicity of `target` in `U_p^χ|_B`.
pub fn multiplicity_in_restriction(target: &Character, chi: &Character, grp: &DilationGroup) -> Result<usize> {
    let mut count = 0;
    for (c, m) in restriction_decomposition(chi, RestrictionSource::Finite, grp)? {
        if chars_equal(target, &c)? {
            count += m;
        }
    }
    Ok(count)
}

/// `dim L_B(χ, U_p^χ|_B)`, which is always 1.
pub fn restriction_multiplicity(chi: &Character, grp: &DilationGroup) -> Result<usize> {
    multiplicity_in_restriction(chi, chi, grp)
}

/// `dim L_B(target, U_p^χ|_B)` from intertwiners on the fiber generators
/// `(0, A^{-K} e_i)`, `K <= extra_depth`.
///
/// Solenoid characters are determined by their values on `ℤ^d`, so
/// `extra_depth = 0` already gives the exact count for them.
pub fn restriction_multiplicity_by_intertwiners(
    target: &Character,
    chi: &Character,
    grp: &DilationGroup,
    extra_depth: usize,
) -> Result<usize> {
    let rep = FiniteInducedRep::new(chi, grp)?;
    let gens = grp.fiber_generators(extra_depth)?;
    let one_dim: Vec<PhasedPermMatrix> = gens
        .iter()
        .map(|g| Ok(PhasedPermMatrix::diagonal(vec![target.evaluate(g.b(), grp)?])))
        .collect::<Result<_>>()?;
    let restricted: Vec<PhasedPermMatrix> = gens.iter().map(|g| rep.up(g)).collect::<Result<_>>()?;
    Ok(intertwiner_space(&one_dim, &restricted)?.dimension)
}

/// Outcome of the finite-window test that no nonzero `W: ℂ^p → ℓ²(ℤ)`
/// intertwines `U_p^χ` with `Ind_B^G(χ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingReport {
    pub period: usize,
    pub half_width: usize,
    /// Nullspace dimension with zero rows at `±M`; expected 0.
    pub dimension: usize,
    /// Nullspace dimension without the boundary rows.
    pub dimension_without_boundary: usize,
    /// Every unbounded solution has `|ξ_s^{(k)}| = |ξ_{s+p}^{(k)}|`.
    pub tail_periodic: bool,
    /// Every unbounded solution is supported on `s ≡ k (mod p)`.
    pub support_congruent: bool,
    pub notes: Vec<String>,
}

fn vanishing_system(
    rep: &FiniteInducedRep<'_>,
    chi: &Character,
    half_width: usize,
    extra_depth: usize,
    boundary: bool,
) -> Result<PhaseSystem> {
    let grp = rep.group();
    let p = rep.period();
    let m = half_width as i64;
    let var = |s: i64, k: usize| ((s + m) as usize) * p + k;
    let mut sys = PhaseSystem::new((2 * half_width + 1) * p);
    for g in grp.generators(extra_depth)? {
        let up = rep.up(&g)?;
        let j = g.j();
        for s in -m..=m {
            let t = s + j;
            if t.abs() > m {
                continue;
            }
            // Ind(g) δ_t = χ(α_{t-j}(b)) δ_{t-j}, so (Ind(g) W)[s][k] = ψ W[t][k]
            let psi = chi.evaluate(&grp.alpha_pow(t - j, g.b())?, grp)?;
            for k in 0..p {
                // (W U_p(g))[s][k] = φ[k] W[s][σk]
                let theta = &psi - &up.phases()[k];
                sys.relate(var(s, up.sigma()[k]), var(t, k), &theta);
            }
        }
    }
    if boundary {
        for k in 0..p {
            sys.force_zero(var(-m, k));
            sys.force_zero(var(m, k));
        }
    }
    Ok(sys)
}

pub fn vanishing_check(chi: &Character, half_width: usize, grp: &DilationGroup) -> Result<VanishingReport> {
    vanishing_check_with_depth(chi, half_width, grp, 0)
}

pub fn vanishing_check_with_depth(
    chi: &Character,
    half_width: usize,
    grp: &DilationGroup,
    extra_depth: usize,
) -> Result<VanishingReport> {
    let rep = FiniteInducedRep::new(chi, grp)?;
    let p = rep.period();
    if half_width < 3 * p {
        return Err(Error::WindowTooSmall {
            half_width,
            needed: 3 * p,
        });
    }
    let m = half_width as i64;
    let dimension = vanishing_system(&rep, chi, half_width, extra_depth, true)?
        .free_components()
        .len();
    let free = vanishing_system(&rep, chi, half_width, extra_depth, false)?.free_components();
    let pos = |i: usize| ((i / p) as i64 - m, i % p);
    let mut tail_periodic = true;
    let mut support_congruent = true;
    for comp in &free {
        let members: BTreeMap<(i64, usize), &RationalAngle> = comp.iter().map(|(i, a)| (pos(*i), a)).collect();
        for &(s, k) in members.keys() {
            support_congruent &= (s - k as i64).rem_euclid(p as i64) == 0;
            if s + (p as i64) <= m {
                tail_periodic &= members.contains_key(&(s + p as i64, k));
            }
        }
    }
    let notes = vec![
        format!(
            "interior equations force W[s][k] = 0 unless s ≡ k (mod {p}) and tie column k at s to s + {p}"
        ),
        format!(
            "so |ξ_s^(k)| = |ξ_(s+{p}t)^(k)| for all t: a nonzero solution cannot decay and is not square-summable"
        ),
        format!(
            "with zero boundary rows at ±{half_width} the nullspace has dimension {dimension}"
        ),
    ];
    Ok(VanishingReport {
        period: p,
        half_width,
        dimension,
        dimension_without_boundary: free.len(),
        tail_periodic,
        support_congruent,
        notes,
    })
}

/// A fiber element `b` with `χ(α_s(b)) ≠ χ(α_k(b))`, `k = s + t`, which forces
/// the `t`-th diagonal of any commuting operator to vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub offset: i64,
    pub s: i64,
    pub k: i64,
    pub b: RationalVector,
    pub phase_s: RationalAngle,
    pub phase_k: RationalAngle,
}

/// Deepest `A^{-K} e_i` tried by the witness search.
pub const OBSTRUCTION_DEPTH: usize = 4;

/// Searches `s = 0, 1, -1, 2, -2, …` (with `s` and `s + t` in the window)
/// and `b ∈ {A^{-K} e_i}` for a pair of distinct phases.
pub fn offdiag_obstruction(chi: &Character, t: i64, half_width: usize, grp: &DilationGroup) -> Result<Option<Obstruction>> {
    if t == 0 {
        return Err(Error::Invalid("offset t must be nonzero".into()));
    }
    let m = half_width as i64;
    let gens = grp.fiber_generators(OBSTRUCTION_DEPTH)?;
    let order = (0..=m).flat_map(|s| if s == 0 { vec![0] } else { vec![s, -s] });
    for s in order {
        let k = s + t;
        if k.abs() > m {
            continue;
        }
        for g in &gens {
            let phase_s = chi.evaluate(&grp.alpha_pow(s, g.b())?, grp)?;
            let phase_k = chi.evaluate(&grp.alpha_pow(k, g.b())?, grp)?;
            if phase_s != phase_k {
                return Ok(Some(Obstruction {
                    offset: t,
                    s,
                    k,
                    b: g.b().clone(),
                    phase_s,
                    phase_k,
                }));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IrreducibilityReport {
    pub half_width: usize,
    pub all_obstructed: bool,
    pub unobstructed: Vec<i64>,
    pub witnesses: Vec<Obstruction>,
}

/// For an infinite orbit, looks for an obstruction at every `0 < |t| <= 2M`.
pub fn windowed_irreducibility_report(chi: &Character, half_width: usize, grp: &DilationGroup) -> Result<IrreducibilityReport> {
    if let Orbit::Finite { points } = orbit(chi, grp, DEFAULT_ORBIT_BOUND) {
        return Err(Error::FiniteOrbit { period: points.len() });
    }
    let reach = 2 * half_width as i64;
    let mut witnesses = Vec::new();
    let mut unobstructed = Vec::new();
    for t in (-reach..=reach).filter(|&t| t != 0) {
        match offdiag_obstruction(chi, t, half_width, grp)? {
            Some(w) => witnesses.push(w),
            None => unobstructed.push(t),
        }
    }
    Ok(IrreducibilityReport {
        half_width,
        all_obstructed: unobstructed.is_empty(),
        unobstructed,
        witnesses,
    })
}

/// Structure of the commutant of `cyclic_induced(χ, N)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicCommutantReport {
    pub period: usize,
    pub copies: usize,
    pub dimension: usize,
    /// The basis is exactly `{T_p^m : 0 <= m < N}`.
    pub shift_powers: bool,
    /// All basis elements commute with each other.
    pub abelian: bool,
}

pub fn cyclic_commutant(chi: &Character, copies: usize, grp: &DilationGroup, extra_depth: usize) -> Result<CyclicCommutantReport> {
    let rep = FiniteInducedRep::new(chi, grp)?;
    let p = rep.period();
    let space = commutant(&rep.cyclic_generators(copies, extra_depth)?)?;
    let perms: Option<Vec<PhasedPermMatrix>> = space.basis.iter().map(PhaseMatrix::to_perm).collect();
    let shift = crate::reps::build_p(p * copies)?.pow(p as i64);
    let (shift_powers, abelian) = match &perms {
        Some(perms) => {
            let mut expected: Vec<PhasedPermMatrix> = (0..copies as i64).map(|m| shift.pow(m)).collect();
            let mut got = perms.clone();
            let key = |m: &PhasedPermMatrix| m.sigma().to_vec();
            expected.sort_by_key(key);
            got.sort_by_key(key);
            let mut abelian = true;
            for a in perms {
                for b in perms {
                    abelian &= a.mul(b)? == b.mul(a)?;
                }
            }
            (got == expected, abelian)
        }
        None => (false, false),
    };
    Ok(CyclicCommutantReport {
        period: p,
        copies,
        dimension: space.dimension,
        shift_powers,
        abelian,
    })
}
