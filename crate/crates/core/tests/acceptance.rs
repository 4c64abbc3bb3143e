//! Acceptance suite: thirteen criteria, one PASS/FAIL line each, all at
//! exact equality.

mod common;

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num::{BigRational, Complex, One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use solenoid_rep::bratteli::build_tower;
use solenoid_rep::characters::{Character, FiniteOrbit, SolenoidChar, DEFAULT_ORBIT_BOUND};
use solenoid_rep::dynamics::{
    dilation_tiling, is_ergodic, is_wavelet_set, periodic_lattice_points, translation_tiling, IntervalUnion,
    PeriodicWitness,
};
use solenoid_rep::exact::{IntMatrix, RatMatrix, RationalVector};
use solenoid_rep::group::{DilationGroup, GroupElement};
use solenoid_rep::intertwiners::{
    commutant, cyclic_commutant, frobenius_by_intertwiners, frobenius_multiplicity, restriction_multiplicity,
    restriction_multiplicity_by_intertwiners, vanishing_check, windowed_irreducibility_report,
};
use solenoid_rep::reps::{check_imprimitivity_covariance, check_shift_relation, DiagonalMultiplier, FiniteInducedRep};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
/// `(A, ergodic, witness (n, b))`
type ErgodicCase = (&'static [&'static [i64]], bool, Option<(usize, &'static [i64])>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))
}

fn dyadic() -> DilationGroup {
    DilationGroup::scalar(2).unwrap()
}

fn sol(k: i64, q: i64, grp: &DilationGroup) -> Character {
    SolenoidChar::new(&RationalVector::from_fractions(&[(k, q)]), grp).unwrap().into()
}

/// One representative `k/q` per orbit, for odd `q` in `3..=101` under `A = [2]`.
fn suite(grp: &DilationGroup) -> Vec<(Character, usize)> {
    let mut out = Vec::new();
    for q in (3..=101i64).step_by(2) {
        let mut seen: HashSet<i64> = HashSet::new();
        for k in 1..q {
            if num::integer::gcd(k, q) != 1 || seen.contains(&k) {
                continue;
            }
            let chi = sol(k, q, grp);
            let orb = FiniteOrbit::new(&chi, grp, DEFAULT_ORBIT_BOUND).unwrap();
            for c in orb.points() {
                let x = &c.vector().entries()[0] * BigRational::from_integer(q.into());
                seen.insert(x.to_integer().try_into().unwrap());
            }
            out.push((chi, orb.period()));
        }
    }
    out
}

fn int_group(rows: &[&[i64]]) -> DilationGroup {
    DilationGroup::new(IntMatrix::from_i64(rows).unwrap()).unwrap()
}

/// `(j, b)` as the affine matrix `[[A^j, b], [0, 1]]`.
fn affine(grp: &DilationGroup, g: &GroupElement) -> RatMatrix {
    let d = grp.dim();
    let aj = if g.j() >= 0 {
        grp.matrix().pow(g.j() as u32).to_rational()
    } else {
        grp.matrix().pow(g.j().unsigned_abs() as u32).inverse().unwrap()
    };
    let mut m = RatMatrix::zeros(d + 1, d + 1);
    for r in 0..d {
        for c in 0..d {
            m.set(r, c, aj.get(r, c).clone());
        }
        m.set(r, d, g.b().entries()[r].clone());
    }
    m.set(d, d, BigRational::one());
    m
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(1);
    let mats: [&[&[i64]]; 4] = [&[&[2]], &[&[3]], &[&[2, 1], &[1, 1]], &[&[0, 2], &[1, 0]]];
    for rows in mats {
        let grp = int_group(rows);
        for _ in 0..1000 {
            let g = grp.random_element(&mut rng, 4, 3, 9).unwrap();
            let h = grp.random_element(&mut rng, 4, 3, 9).unwrap();
            let k = grp.random_element(&mut rng, 4, 3, 9).unwrap();
            let gh = grp.multiply(&g, &h).map_err(|e| format!("closure: {e}"))?;
            ensure(affine(&grp, &gh) == affine(&grp, &g).mul(&affine(&grp, &h)), || {
                format!("A={rows:?}: {g}·{h} = {gh} disagrees with affine composition")
            })?;
            let left = grp.multiply(&gh, &k).unwrap();
            let right = grp.multiply(&g, &grp.multiply(&h, &k).unwrap()).unwrap();
            ensure(left == right, || format!("A={rows:?}: associativity fails at {g}, {h}, {k}"))?;
            ensure(grp.multiply(&g, &grp.inverse(&g).unwrap()).unwrap().is_identity(), || {
                format!("A={rows:?}: {g} has no inverse")
            })?;
        }
    }
    within(start, Duration::from_secs(1))?;
    Ok(format!("4 matrices x 1000 triples in {:?}", start.elapsed()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let grp = dyadic();
    let mut rng = StdRng::seed_from_u64(2);
    let suite = suite(&grp);
    for (chi, _) in &suite {
        let rep = FiniteInducedRep::new(chi, &grp).unwrap();
        for _ in 0..100 {
            let b = grp.random_element(&mut rng, 0, 4, 50).unwrap().b().clone();
            ensure(rep.check_covariance(&b).unwrap(), || format!("{chi}: P D(b) != D(αb) P at b={b}"))?;
        }
    }
    within(start, Duration::from_secs(5))?;
    // p = 3, x = 1/7, b = 1: P D_χ(b) has χ_1, χ_2, χ_0 at (0,1), (1,2), (2,0)
    let rep = FiniteInducedRep::new(&sol(1, 7, &grp), &grp).unwrap();
    let b = RationalVector::from_integers(&[1]);
    let lhs = rep.p().mul(&rep.d(&b).unwrap()).unwrap();
    let chis: Vec<_> = (0..3).map(|k| rep.orbit().phase(k, &b).unwrap()).collect();
    let pattern: Vec<_> = lhs.triples().into_iter().map(|(r, c, p)| (r, c, p.to_string())).collect();
    let expect = vec![
        (0, 1, chis[1].to_string()),
        (1, 2, chis[2].to_string()),
        (2, 0, chis[0].to_string()),
    ];
    ensure(pattern == expect, || format!("p=3 pattern {pattern:?}, expected {expect:?}"))?;
    ensure(chis.iter().map(|c| c.to_string()).collect::<Vec<_>>() == ["1/7", "2/7", "4/7"], || {
        format!("χ_k = {chis:?}")
    })?;
    Ok(format!("{} orbit representatives x 100 b in {:?}; p=3 pattern reproduced", suite.len(), start.elapsed()))
}

fn criterion_3() -> Outcome {
    let grp = dyadic();
    let mut rng = StdRng::seed_from_u64(3);
    let suite = suite(&grp);
    for (chi, _) in &suite {
        let rep = FiniteInducedRep::new(chi, &grp).unwrap();
        for _ in 0..1000 {
            let g = grp.random_element(&mut rng, 6, 3, 20).unwrap();
            let h = grp.random_element(&mut rng, 6, 3, 20).unwrap();
            ensure(rep.check_rep_property(&g, &h).unwrap(), || format!("{chi}: U({g})U({h}) != U(gh)"))?;
        }
    }
    Ok(format!("{} characters x 1000 pairs", suite.len()))
}

fn criterion_4() -> Outcome {
    let grp = dyadic();
    let suite = suite(&grp);
    for (chi, p) in &suite {
        let rep = FiniteInducedRep::new(chi, &grp).unwrap();
        let dim = commutant(&rep.generators(0).unwrap()).unwrap().dimension;
        ensure(dim == 1, || format!("{chi} (p={p}): commutant dimension {dim}"))?;
    }
    Ok(format!("commutant dimension 1 for all {} characters", suite.len()))
}

fn criterion_5() -> Outcome {
    let grp = dyadic();
    let chars = [sol(0, 1, &grp), sol(1, 3, &grp), sol(1, 7, &grp), sol(1, 5, &grp), sol(1, 9, &grp), sol(3, 31, &grp)];
    for chi in &chars {
        for n in 1..=4 {
            let r = cyclic_commutant(chi, n, &grp, 0).unwrap();
            ensure(r.dimension == n && r.shift_powers && r.abelian, || format!("{chi}, N={n}: {r:?}"))?;
        }
    }
    Ok(format!("{} characters, N = 1..4: dimension N, basis T_p^m, abelian", chars.len()))
}

fn criterion_6() -> Outcome {
    let grp = dyadic();
    let suite = suite(&grp);
    let mut rng = StdRng::seed_from_u64(6);
    for _ in 0..50 {
        let (chi, p) = &suite[rng.gen_range(0..suite.len())];
        let other = chi.dual_action_pow(rng.gen_range(0..*p as i64), &grp).unwrap();
        let m = frobenius_multiplicity(chi, &other, &grp).unwrap();
        let w = frobenius_by_intertwiners(chi, &other, &grp, 0).unwrap();
        ensure(m == 1 && w == 1, || format!("same orbit {chi}, {other}: {m} / {w}"))?;
    }
    for _ in 0..50 {
        let i = rng.gen_range(0..suite.len());
        let mut j = rng.gen_range(0..suite.len());
        while j == i {
            j = rng.gen_range(0..suite.len());
        }
        let (a, b) = (&suite[i].0, &suite[j].0);
        let m = frobenius_multiplicity(a, b, &grp).unwrap();
        let w = frobenius_by_intertwiners(a, b, &grp, 0).unwrap();
        ensure(m == 0 && w == 0, || format!("cross orbit {a}, {b}: {m} / {w}"))?;
    }
    for (chi, _) in &suite {
        let m = restriction_multiplicity(chi, &grp).unwrap();
        let w = restriction_multiplicity_by_intertwiners(chi, chi, &grp, 0).unwrap();
        ensure(m == 1 && w == 1, || format!("restriction of {chi}: {m} / {w}"))?;
    }
    Ok(format!("50 same-orbit, 50 cross-orbit pairs; restriction 1 for {} characters", suite.len()))
}

fn criterion_7() -> Outcome {
    let grp = dyadic();
    let cases = [(sol(0, 1, &grp), 1), (sol(1, 3, &grp), 2), (sol(1, 7, &grp), 3), (sol(1, 5, &grp), 4), (sol(1, 9, &grp), 6)];
    for (chi, p) in &cases {
        for m in [3 * p, 4 * p, 6 * p] {
            let r = vanishing_check(chi, m, &grp).unwrap();
            ensure(r.period == *p, || format!("{chi}: period {}", r.period))?;
            ensure(r.dimension == 0, || format!("{chi}, M={m}: dimension {}", r.dimension))?;
            ensure(r.tail_periodic && r.support_congruent, || format!("{chi}, M={m}: certificate {r:?}"))?;
        }
    }
    Ok("dimension 0 for p in {1,2,3,4,6}, M in {3p,4p,6p}".into())
}

fn criterion_8() -> Outcome {
    let grp = dyadic();
    let m = 8usize;
    let chars = [Character::parse("real:1/3", &grp).unwrap(), sol(1, 7, &grp), Character::parse("real:2/7", &grp).unwrap()];
    let mut rng = StdRng::seed_from_u64(8);
    for trial in 0..100 {
        let chi = &chars[trial % chars.len()];
        let n = rng.gen_range(-3..=3);
        let g = grp.random_element(&mut rng, 3, 3, 12).unwrap();
        ensure(check_shift_relation(chi, n, &g, m, &grp).unwrap(), || format!("{chi}: T_{n} fails at {g}"))?;
        let reach = (m - g.j().unsigned_abs() as usize) as i64 - 1;
        let values: Vec<Complex<BigRational>> = (-(m as i64)..=m as i64)
            .map(|k| {
                if k.abs() > reach || rng.gen_bool(0.3) {
                    Complex::zero()
                } else {
                    let q = |rng: &mut StdRng| BigRational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=5).into());
                    Complex::new(q(&mut rng), q(&mut rng))
                }
            })
            .collect();
        let omega = DiagonalMultiplier::new(m, values).unwrap();
        ensure(check_imprimitivity_covariance(chi, &g, &omega, &grp).unwrap(), || {
            format!("{chi}: imprimitivity covariance fails at {g}")
        })?;
    }
    Ok("100 random (n, g, ω) on M = 8".into())
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let grp = dyadic();
    // six levels are the root plus five refinements
    let t = build_tower(&grp, 5).unwrap();
    ensure(t.level_sizes() == [1, 2, 4, 8, 16, 32], || format!("A=[2] sizes {:?}", t.level_sizes()))?;
    for n in 0..t.depth() {
        ensure(t.row_sums(n).iter().all(|&s| s == 2), || format!("row sums at {n}"))?;
        ensure(t.column_sums(n).iter().all(|&s| s == 1), || format!("column sums at {n}"))?;
    }
    ensure(t.composition_consistent(&grp).unwrap(), || "composition".into())?;
    let deeper = build_tower(&grp, 6).unwrap();
    ensure(deeper.level_sizes()[..6] == [1, 2, 4, 8, 16, 32], || "A=[2] deeper prefix".into())?;
    let g3 = DilationGroup::scalar(3).unwrap();
    let t3 = build_tower(&g3, 4).unwrap();
    ensure(t3.level_sizes() == [1, 3, 9, 27, 81], || format!("A=[3] sizes {:?}", t3.level_sizes()))?;
    ensure(t3.composition_consistent(&g3).unwrap(), || "A=[3] composition".into())?;
    within(start, Duration::from_secs(2))?;
    Ok(format!("sizes 1..32 and 1..81, sums and composition exact, {:?}", start.elapsed()))
}

fn criterion_10() -> Outcome {
    let cases: [ErgodicCase; 4] = [
        (&[&[2]], true, None),
        (&[&[1, 1], &[0, 1]], false, Some((1, &[1, 0]))),
        (&[&[0, -1], &[1, 0]], false, Some((4, &[1, 0]))),
        (&[&[2, 1], &[1, 1]], true, None),
    ];
    for (rows, ergodic, witness) in cases {
        let a = IntMatrix::from_i64(rows).unwrap();
        let r = is_ergodic(&a).unwrap();
        ensure(r.ergodic == ergodic, || format!("A={rows:?}: ergodic={}", r.ergodic))?;
        let want = witness.map(|(n, b)| PeriodicWitness {
            n,
            b: b.iter().map(|&x| x.into()).collect(),
        });
        ensure(r.witness == want, || format!("A={rows:?}: witness {:?}", r.witness))?;
        if let Some(w) = &r.witness {
            let b = RationalVector::from_integers(&w.b);
            ensure(a.pow(w.n as u32).apply(&b) == b, || "witness not periodic".into())?;
        }
        let d = a.dim();
        let periodic = (1..=2 * d * d).any(|n| !periodic_lattice_points(&a, n).is_empty());
        ensure(periodic == !r.ergodic, || format!("A={rows:?}: lattice points disagree"))?;
    }
    Ok("four matrices, witnesses exact, cross-validated for n <= 2d²".into())
}

fn criterion_11() -> Outcome {
    let shannon: IntervalUnion = "-1,-1/2;1/2,1".parse().unwrap();
    let v = is_wavelet_set(&shannon, 2).unwrap();
    ensure(v.pass && v.translation.pass && v.dilation.pass, || format!("Shannon set: {v:?}"))?;
    ensure(v.total_length == BigRational::one(), || "Shannon length".into())?;
    let unit: IntervalUnion = "0,1".parse().unwrap();
    ensure(translation_tiling(&unit).pass, || "[0,1) translation".into())?;
    ensure(!dilation_tiling(&unit, 2).unwrap().pass, || "[0,1) dilation".into())?;
    ensure(!is_wavelet_set(&unit, 2).unwrap().pass, || "[0,1) verdict".into())?;
    let short: IntervalUnion = "0,3/4".parse().unwrap();
    ensure(short.total_length() == BigRational::new(3.into(), 4.into()), || "length 3/4".into())?;
    ensure(!translation_tiling(&short).pass, || "[0,3/4) translation".into())?;
    Ok("Shannon set passes both, [0,1) fails dilation only".into())
}

fn criterion_12() -> Outcome {
    let grp = dyadic();
    for r in ["1/3", "1/5", "2/7"] {
        let chi = Character::parse(&format!("real:{r}"), &grp).unwrap();
        let rep = windowed_irreducibility_report(&chi, 8, &grp).unwrap();
        ensure(rep.all_obstructed, || format!("{chi}: unobstructed {:?}", rep.unobstructed))?;
        ensure(rep.witnesses.len() == 32, || format!("{chi}: {} witnesses", rep.witnesses.len()))?;
        for w in &rep.witnesses {
            let ps = chi.evaluate(&grp.alpha_pow(w.s, &w.b).unwrap(), &grp).unwrap();
            let pk = chi.evaluate(&grp.alpha_pow(w.k, &w.b).unwrap(), &grp).unwrap();
            ensure(ps != pk && w.k - w.s == w.offset, || format!("{chi}: bad witness {w:?}"))?;
        }
    }
    Ok("every offset 0 < |t| <= 16 obstructed for r in {1/3, 1/5, 2/7}".into())
}

fn criterion_13() -> Outcome {
    let bad = common::golden_mismatches();
    ensure(bad.is_empty(), || format!("mismatched: {bad:?}"))?;
    Ok(format!("{} golden files match", common::GOLDEN_CASES.len()))
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("group law", criterion_1),
        ("covariance", criterion_2),
        ("representation property", criterion_3),
        ("Schur irreducibility", criterion_4),
        ("cyclic commutant", criterion_5),
        ("Frobenius counts", criterion_6),
        ("vanishing", criterion_7),
        ("shift and imprimitivity", criterion_8),
        ("Bratteli tower", criterion_9),
        ("ergodicity", criterion_10),
        ("wavelet sets", criterion_11),
        ("infinite-orbit obstructions", criterion_12),
        ("CLI golden files", criterion_13),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
