//! Command-line front end. Every command prints one JSON document with
//! sorted keys (DOT for `bratteli --format dot`).
//!
//! Exit codes: 0 success, 1 a requested expectation or check failed,
//! 2 usage, parse or domain error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bratteli::{build_tower_with_cap, DEFAULT_VERTEX_CAP};
use crate::characters::{orbit, Character, Orbit, DEFAULT_ORBIT_BOUND};
use crate::dynamics::{is_ergodic, is_wavelet_set, IntervalUnion};
use crate::error::Error;
use crate::exact::IntMatrix;
use crate::group::{DilationGroup, GroupElement};
use crate::intertwiners::{
    commutant, cyclic_commutant, frobenius_by_intertwiners, frobenius_multiplicity, intertwiner_space,
    multiplicity_in_restriction, vanishing_check, windowed_irreducibility_report,
};
use crate::reps::{
    check_windowed_homomorphism, cyclic_induced, restriction_decomposition, windowed_induced, FiniteInducedRep,
    RestrictionSource,
};

/// Environment variable capping the level count accepted by `bratteli`.
pub const MAX_LEVELS_VAR: &str = "SOLENOID_REP_MAX_LEVELS";

#[derive(Parser, Debug)]
#[command(name = "solenoid-rep", version, about = "Exact induced representations of B_A ⋊ ℤ")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct MatrixArg {
    /// Dilation matrix as JSON rows, e.g. [[2,1],[1,1]]
    #[arg(short = 'A', value_name = "ROWS", allow_hyphen_values = true)]
    a: String,
}

#[derive(Args, Debug)]
struct CharArg {
    /// Character: sol:p/q[,p/q...] or real:p/q[,...]
    #[arg(short = 'x', value_name = "CHAR")]
    x: String,
}

#[derive(Args, Debug)]
struct CharPair {
    #[arg(long = "x1", value_name = "CHAR")]
    x1: String,
    #[arg(long = "x2", value_name = "CHAR")]
    x2: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RepMode {
    Finite,
    Window,
    Cyclic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DiagramFormat {
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Orbit of a character under the dual action
    Orbit {
        #[command(flatten)]
        m: MatrixArg,
        #[command(flatten)]
        x: CharArg,
        #[arg(long, default_value_t = DEFAULT_ORBIT_BOUND)]
        bound: usize,
    },
    /// Matrix of one group element in a finite, windowed or cyclic realization
    Rep {
        #[command(flatten)]
        m: MatrixArg,
        #[command(flatten)]
        x: CharArg,
        /// Group element j,b1,...,bd
        #[arg(short = 'g', value_name = "ELEM", allow_hyphen_values = true)]
        g: String,
        #[arg(long, value_enum, default_value_t = RepMode::Finite)]
        mode: RepMode,
        /// Window half-width (window mode)
        #[arg(short = 'M', default_value_t = 8)]
        half_width: usize,
        /// Number of copies (cyclic mode)
        #[arg(short = 'N', default_value_t = 1)]
        copies: usize,
        /// Verify the representation property on random pairs
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print the matrix as text instead of JSON (finite and cyclic modes)
        #[arg(long)]
        pretty: bool,
    },
    /// Commutant of U_p, or of the N-fold cyclic realization
    Commutant {
        #[command(flatten)]
        m: MatrixArg,
        #[command(flatten)]
        x: CharArg,
        #[arg(short = 'N', long = "copies")]
        copies: Option<usize>,
        #[arg(long, default_value_t = 0)]
        depth: usize,
        #[arg(long)]
        expect_dim: Option<usize>,
    },
    /// Intertwiners between U_p for two characters
    Intertwine {
        #[command(flatten)]
        m: MatrixArg,
        #[command(flatten)]
        x: CharPair,
        #[arg(long, default_value_t = 0)]
        depth: usize,
        #[arg(long)]
        expect_dim: Option<usize>,
    },
    /// Multiplicity of one finite-orbit representation in another
    Frobenius {
        #[command(flatten)]
        m: MatrixArg,
        #[command(flatten)]
        x: CharPair,
        #[arg(long)]
        expect_dim: Option<usize>,
    },
    /// Decomposition of U_p restricted to B_A
    Restriction {
        #[command(flatten)]
        m: MatrixArg,
        #[command(flatten)]
        x: CharArg,
        /// Character whose multiplicity is reported (defaults to the inducing one)
        #[arg(long)]
        target: Option<String>,
        #[arg(long)]
        expect_dim: Option<usize>,
    },
    /// Intertwiners from U_p into the windowed induced representation
    Vanishing {
        #[command(flatten)]
        m: MatrixArg,
        #[command(flatten)]
        x: CharArg,
        #[arg(short = 'M')]
        half_width: usize,
        #[arg(long)]
        expect_dim: Option<usize>,
    },
    /// Off-diagonal obstruction witnesses for an infinite orbit
    Irreducibility {
        #[command(flatten)]
        m: MatrixArg,
        #[command(flatten)]
        x: CharArg,
        #[arg(short = 'M', default_value_t = 8)]
        half_width: usize,
        /// Exit 1 unless every offset is obstructed
        #[arg(long)]
        expect_irreducible: bool,
    },
    /// Bratteli diagram of the abelian quotient tower
    Bratteli {
        #[command(flatten)]
        m: MatrixArg,
        #[arg(short = 'n', long = "levels")]
        levels: usize,
        #[arg(long, value_enum, default_value_t = DiagramFormat::Json)]
        format: DiagramFormat,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: u64,
    },
    /// Ergodicity of the dual automorphism
    Ergodic {
        #[command(flatten)]
        m: MatrixArg,
    },
    /// Translation and dilation tiling of a candidate wavelet set
    Waveletset {
        /// Interval union l,r;l,r;...
        #[arg(short = 'E', value_name = "SET", allow_hyphen_values = true)]
        e: String,
        #[arg(short = 'a', default_value_t = 2)]
        a: u64,
    },
}

enum Failure {
    Usage(String),
    Expectation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// `(exit code, stdout, stderr)`.
pub type Outcome = (i32, String, String);

/// Runs one command, reading the level cap from the environment.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let cap = std::env::var(MAX_LEVELS_VAR).ok();
    run_with_level_cap(args, cap.as_deref())
}

/// As [`run`], with the level cap passed in explicitly.
pub fn run_with_level_cap<I, S>(args: I, max_levels: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    // `-x1` / `-x2` are not single-letter flags, so map them to long form.
    let args: Vec<String> = args
        .into_iter()
        .map(Into::into)
        .map(|a| match a.as_str() {
            "-x1" => "--x1".to_string(),
            "-x2" => "--x2".to_string(),
            _ => a,
        })
        .collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                (2, String::new(), text)
            } else {
                (0, text, String::new())
            };
        }
    };
    let mut out = String::new();
    match dispatch(cli.command, max_levels, &mut out) {
        Ok(()) => (0, out, String::new()),
        Err(Failure::Expectation(msg)) => (1, out, format!("expectation failed: {msg}\n")),
        Err(Failure::Usage(msg)) => (2, out, format!("error: {msg}\n")),
    }
}

fn emit<T: Serialize>(out: &mut String, v: &T) -> Result<(), Failure> {
    // Going through `Value` sorts every object's keys.
    let v = serde_json::to_value(v).map_err(|e| Failure::Usage(e.to_string()))?;
    out.push_str(&serde_json::to_string_pretty(&v).map_err(|e| Failure::Usage(e.to_string()))?);
    out.push('\n');
    Ok(())
}

fn expect_dim(what: &str, actual: usize, expected: Option<usize>) -> Result<(), Failure> {
    match expected {
        Some(k) if k != actual => Err(Failure::Expectation(format!("{what} is {actual}, expected {k}"))),
        _ => Ok(()),
    }
}

fn group(m: &MatrixArg) -> Result<DilationGroup, Failure> {
    Ok(DilationGroup::new(IntMatrix::parse_json(&m.a)?)?)
}

fn character(s: &str, grp: &DilationGroup) -> Result<Character, Failure> {
    Ok(Character::parse(s, grp)?)
}

fn random_pair(grp: &DilationGroup, rng: &mut StdRng, max_j: i64) -> Result<(GroupElement, GroupElement), Failure> {
    Ok((grp.random_element(rng, max_j, 3, 10)?, grp.random_element(rng, max_j, 3, 10)?))
}

fn dispatch(cmd: Command, max_levels: Option<&str>, out: &mut String) -> Result<(), Failure> {
    match cmd {
        Command::Orbit { m, x, bound } => {
            let grp = group(&m)?;
            let chi = character(&x.x, &grp)?;
            let o = orbit(&chi, &grp, bound);
            let points: Vec<String> = o.points().iter().map(|c| c.vector().to_string()).collect();
            let report = match &o {
                Orbit::Finite { .. } => json!({
                    "character": chi.to_string(),
                    "finite": true,
                    "period": o.period(),
                    "points": points,
                }),
                Orbit::Unbounded { explored, .. } => json!({
                    "character": chi.to_string(),
                    "finite": false,
                    "period": "infinite (bound exceeded)",
                    "explored": explored,
                    "prefix": points,
                }),
            };
            emit(out, &report)
        }
        Command::Rep {
            m,
            x,
            g,
            mode,
            half_width,
            copies,
            check,
            trials,
            seed,
            pretty,
        } => {
            let grp = group(&m)?;
            let chi = character(&x.x, &grp)?;
            let g = grp.parse_element(&g)?;
            if pretty && mode == RepMode::Window {
                return Err(Failure::Usage("--pretty is only available for finite and cyclic modes".into()));
            }
            let mut rng = StdRng::seed_from_u64(seed);
            let mut report = json!({ "character": chi.to_string(), "element": g, "mode": format!("{mode:?}").to_lowercase() });
            let mut passed = true;
            match mode {
                RepMode::Finite | RepMode::Cyclic => {
                    let rep = FiniteInducedRep::new(&chi, &grp)?;
                    let n = if mode == RepMode::Cyclic { copies } else { 1 };
                    if n == 0 {
                        return Err(Failure::Usage("-N must be at least 1".into()));
                    }
                    let mat = if mode == RepMode::Cyclic { cyclic_induced(&chi, n, &g, &grp)? } else { rep.up(&g)? };
                    if pretty {
                        out.push_str(&mat.pretty());
                        out.push('\n');
                    }
                    report["period"] = json!(rep.period());
                    report["matrix"] = serde_json::to_value(&mat).map_err(|e| Failure::Usage(e.to_string()))?;
                    if mode == RepMode::Cyclic {
                        report["copies"] = json!(n);
                    }
                    if check {
                        for _ in 0..trials {
                            let (g1, g2) = random_pair(&grp, &mut rng, 5)?;
                            let ok = if mode == RepMode::Cyclic {
                                rep.cyclic(n, &g1)?.mul(&rep.cyclic(n, &g2)?)? == rep.cyclic(n, &grp.multiply(&g1, &g2)?)?
                            } else {
                                rep.check_rep_property(&g1, &g2)?
                            };
                            passed &= ok;
                        }
                    }
                }
                RepMode::Window => {
                    let op = windowed_induced(&chi, &g, half_width, &grp)?;
                    report["matrix"] = serde_json::to_value(&op).map_err(|e| Failure::Usage(e.to_string()))?;
                    if check {
                        // keep |j| + |j'| below the half-width so interiors are nonempty
                        let max_j = (half_width as i64 - 1) / 2;
                        if max_j < 0 {
                            return Err(Failure::Usage("window too small for --check".into()));
                        }
                        for _ in 0..trials {
                            let (g1, g2) = random_pair(&grp, &mut rng, max_j)?;
                            passed &= check_windowed_homomorphism(&chi, &g1, &g2, half_width, &grp)?;
                        }
                    }
                }
            }
            if check {
                report["check"] = json!({ "pairs": trials, "pass": passed, "seed": seed });
            }
            if !pretty {
                emit(out, &report)?;
            }
            if !passed {
                return Err(Failure::Expectation("representation property failed".into()));
            }
            Ok(())
        }
        Command::Commutant {
            m,
            x,
            copies,
            depth,
            expect_dim: want,
        } => {
            let grp = group(&m)?;
            let chi = character(&x.x, &grp)?;
            if let Orbit::Unbounded { .. } = orbit(&chi, &grp, DEFAULT_ORBIT_BOUND) {
                return Err(Failure::Usage(format!(
                    "{chi} has an infinite orbit; use the irreducibility command for windowed evidence"
                )));
            }
            let dim = match copies {
                Some(n) => {
                    let report = cyclic_commutant(&chi, n, &grp, depth)?;
                    emit(out, &report)?;
                    report.dimension
                }
                None => {
                    let rep = FiniteInducedRep::new(&chi, &grp)?;
                    let space = commutant(&rep.generators(depth)?)?;
                    emit(
                        out,
                        &json!({
                            "basis": space.basis,
                            "character": chi.to_string(),
                            "dimension": space.dimension,
                            "irreducible": space.dimension == 1,
                            "period": rep.period(),
                        }),
                    )?;
                    space.dimension
                }
            };
            expect_dim("commutant dimension", dim, want)
        }
        Command::Intertwine {
            m,
            x,
            depth,
            expect_dim: want,
        } => {
            let grp = group(&m)?;
            let (c1, c2) = (character(&x.x1, &grp)?, character(&x.x2, &grp)?);
            let r1 = FiniteInducedRep::new(&c1, &grp)?;
            let r2 = FiniteInducedRep::new(&c2, &grp)?;
            let space = intertwiner_space(&r1.generators(depth)?, &r2.generators(depth)?)?;
            emit(
                out,
                &json!({
                    "basis": space.basis,
                    "dimension": space.dimension,
                    "from": { "character": c1.to_string(), "period": r1.period() },
                    "to": { "character": c2.to_string(), "period": r2.period() },
                }),
            )?;
            expect_dim("intertwiner dimension", space.dimension, want)
        }
        Command::Frobenius { m, x, expect_dim: want } => {
            let grp = group(&m)?;
            let (c1, c2) = (character(&x.x1, &grp)?, character(&x.x2, &grp)?);
            let count = frobenius_multiplicity(&c1, &c2, &grp)?;
            let by_intertwiners = frobenius_by_intertwiners(&c1, &c2, &grp, 0)?;
            emit(
                out,
                &json!({
                    "by_intertwiners": by_intertwiners,
                    "multiplicity": count,
                    "x1": c1.to_string(),
                    "x2": c2.to_string(),
                }),
            )?;
            if count != by_intertwiners {
                return Err(Failure::Expectation(format!(
                    "orbit count {count} disagrees with intertwiner count {by_intertwiners}"
                )));
            }
            expect_dim("multiplicity", count, want)
        }
        Command::Restriction {
            m,
            x,
            target,
            expect_dim: want,
        } => {
            let grp = group(&m)?;
            let chi = character(&x.x, &grp)?;
            let target = match target {
                Some(t) => character(&t, &grp)?,
                None => chi.clone(),
            };
            let count = multiplicity_in_restriction(&target, &chi, &grp)?;
            let parts: Vec<Value> = restriction_decomposition(&chi, RestrictionSource::Finite, &grp)?
                .into_iter()
                .map(|(c, k)| json!({ "character": c.to_string(), "multiplicity": k }))
                .collect();
            emit(
                out,
                &json!({
                    "character": chi.to_string(),
                    "decomposition": parts,
                    "multiplicity": count,
                    "target": target.to_string(),
                }),
            )?;
            expect_dim("multiplicity", count, want)
        }
        Command::Vanishing {
            m,
            x,
            half_width,
            expect_dim: want,
        } => {
            let grp = group(&m)?;
            let chi = character(&x.x, &grp)?;
            let report = vanishing_check(&chi, half_width, &grp)?;
            emit(out, &report)?;
            expect_dim("intertwiner dimension", report.dimension, want)
        }
        Command::Irreducibility {
            m,
            x,
            half_width,
            expect_irreducible,
        } => {
            let grp = group(&m)?;
            let chi = character(&x.x, &grp)?;
            let report = windowed_irreducibility_report(&chi, half_width, &grp)?;
            emit(out, &report)?;
            if expect_irreducible && !report.all_obstructed {
                return Err(Failure::Expectation(format!("unobstructed offsets {:?}", report.unobstructed)));
            }
            Ok(())
        }
        Command::Bratteli { m, levels, format, cap } => {
            if let Some(limit) = max_levels {
                let limit: usize = limit
                    .trim()
                    .parse()
                    .map_err(|_| Failure::Usage(format!("{MAX_LEVELS_VAR}={limit:?} is not a level count")))?;
                if levels > limit {
                    return Err(Failure::Usage(format!("{levels} levels exceeds {MAX_LEVELS_VAR}={limit}")));
                }
            }
            let grp = group(&m)?;
            let diagram = build_tower_with_cap(&grp, levels, cap)?;
            match format {
                DiagramFormat::Json => emit(out, &diagram.to_json()),
                DiagramFormat::Dot => {
                    out.push_str(&diagram.export_dot());
                    Ok(())
                }
            }
        }
        Command::Ergodic { m } => {
            let a = IntMatrix::parse_json(&m.a)?;
            emit(out, &is_ergodic(&a)?)
        }
        Command::Waveletset { e, a } => {
            let set: IntervalUnion = e.parse()?;
            let verdict = is_wavelet_set(&set, a)?;
            let mut v = serde_json::to_value(&verdict).map_err(|e| Failure::Usage(e.to_string()))?;
            v["set"] = json!(set.to_string());
            v["dilation_factor"] = json!(a);
            v["verdict"] = json!(if verdict.pass { "PASS" } else { "FAIL" });
            emit(out, &v)
        }
    }
}
