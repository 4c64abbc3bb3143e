//! Bratteli diagram of the abelian tower `Γ_n = A^{-n}ℤ^d / ℤ^d`.
//!
//! The dual of `Γ_n` is `ℤ^d / (Aᵀ)^n ℤ^d`: the label `x` stands for the
//! character `b ↦ ⟨x, b⟩ mod 1` on `A^{-n}ℤ^d`. A level-`(n+1)` label
//! restricts to the level-`n` label it is congruent to modulo `(Aᵀ)^n`.

use std::collections::HashMap;
use std::fmt::Write as _;

use num::{BigInt, One, ToPrimitive};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{CosetBox, IntMatrix, RationalAngle, RationalVector};
use crate::group::DilationGroup;

pub const DEFAULT_VERTEX_CAP: u64 = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LevelVertex {
    pub level: usize,
    pub label: Vec<BigInt>,
}

impl LevelVertex {
    pub fn label_string(&self) -> String {
        self.label.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
    }
}

fn transpose_pow(grp: &DilationGroup, n: usize) -> IntMatrix {
    grp.transpose().pow(n as u32)
}

/// The `|det A|` labels at level `n + 1` restricting to `v`:
/// `x + (Aᵀ)^n r` for `r` over the cosets of `Aᵀℤ^d`.
pub fn lifts(v: &LevelVertex, grp: &DilationGroup) -> Result<Vec<LevelVertex>> {
    let step = transpose_pow(grp, v.level);
    let next = CosetBox::new(&transpose_pow(grp, v.level + 1))?;
    CosetBox::new(grp.transpose())?
        .enumerate()
        .iter()
        .map(|r| {
            let shifted: Vec<BigInt> = step.apply_int(r).iter().zip(&v.label).map(|(a, b)| a + b).collect();
            Ok(LevelVertex {
                level: v.level + 1,
                label: next.reduce(&shifted),
            })
        })
        .collect()
}

/// Evaluator for the character of a level vertex.
#[derive(Clone, Debug)]
pub struct VertexChar<'g> {
    grp: &'g DilationGroup,
    level: usize,
    label: RationalVector,
}

impl VertexChar<'_> {
    /// `⟨x, b⟩ mod 1` for `b ∈ A^{-n}ℤ^d`.
    pub fn evaluate(&self, b: &RationalVector) -> Result<RationalAngle> {
        b.check_dim(self.grp.dim())?;
        if !self.grp.alpha_pow(self.level as i64, b)?.is_integral() {
            return Err(Error::Invalid(format!("{b} is not in A^-{}Z^d", self.level)));
        }
        Ok(RationalAngle::from_rational(&self.label.dot(b)))
    }
}

pub fn vertex_char<'g>(v: &LevelVertex, grp: &'g DilationGroup) -> VertexChar<'g> {
    VertexChar {
        grp,
        level: v.level,
        label: RationalVector::from_integers(&v.label),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BratteliDiagram {
    levels: Vec<Vec<LevelVertex>>,
    // edges[n]: (index at level n, index at level n+1, multiplicity)
    edges: Vec<Vec<(usize, usize, u32)>>,
}

pub fn build_tower(grp: &DilationGroup, levels: usize) -> Result<BratteliDiagram> {
    build_tower_with_cap(grp, levels, DEFAULT_VERTEX_CAP)
}

/// Levels `0..=levels`; the largest level has `|det A|^levels` vertices,
/// which must not exceed `cap`.
pub fn build_tower_with_cap(grp: &DilationGroup, levels: usize, cap: u64) -> Result<BratteliDiagram> {
    let det = grp.abs_det();
    if det.is_one() {
        return Err(Error::ConstantTower);
    }
    let size = num::pow(det, levels);
    if size > BigInt::from(cap) {
        return Err(Error::CapExceeded { size, cap });
    }
    let mut all: Vec<Vec<LevelVertex>> = Vec::with_capacity(levels + 1);
    let mut edges = Vec::with_capacity(levels);
    for n in 0..=levels {
        all.push(
            CosetBox::new(&transpose_pow(grp, n))?
                .enumerate()
                .into_iter()
                .map(|label| LevelVertex { level: n, label })
                .collect(),
        );
    }
    for n in 0..levels {
        let index: HashMap<&[BigInt], usize> = all[n + 1]
            .iter()
            .enumerate()
            .map(|(i, v)| (v.label.as_slice(), i))
            .collect();
        let mut layer = Vec::new();
        for (vi, v) in all[n].iter().enumerate() {
            for w in lifts(v, grp)? {
                let wi = index[w.label.as_slice()];
                layer.push((vi, wi, 1));
            }
        }
        layer.sort_unstable();
        edges.push(layer);
    }
    Ok(BratteliDiagram { levels: all, edges })
}

impl BratteliDiagram {
    pub fn levels(&self) -> &[Vec<LevelVertex>] {
        &self.levels
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// Number of edge layers.
    pub fn depth(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self, n: usize) -> &[(usize, usize, u32)] {
        &self.edges[n]
    }

    /// `incidence[v][w]` between levels `n` and `n + 1`.
    pub fn incidence(&self, n: usize) -> Vec<Vec<u32>> {
        let mut m = vec![vec![0; self.levels[n + 1].len()]; self.levels[n].len()];
        for &(v, w, k) in &self.edges[n] {
            m[v][w] += k;
        }
        m
    }

    pub fn row_sums(&self, n: usize) -> Vec<u32> {
        let mut s = vec![0; self.levels[n].len()];
        for &(v, _, k) in &self.edges[n] {
            s[v] += k;
        }
        s
    }

    pub fn column_sums(&self, n: usize) -> Vec<u32> {
        let mut s = vec![0; self.levels[n + 1].len()];
        for &(_, w, k) in &self.edges[n] {
            s[w] += k;
        }
        s
    }

    /// `incidence[n] · incidence[n+1]` equals the direct restriction from
    /// level `n + 2` to level `n` for every `n`.
    pub fn composition_consistent(&self, grp: &DilationGroup) -> Result<bool> {
        for n in 0..self.depth().saturating_sub(1) {
            let boxn = CosetBox::new(&transpose_pow(grp, n))?;
            // paths[w] = {u: number of two-step paths u -> v -> w}
            let mut down: Vec<Vec<(usize, u32)>> = vec![Vec::new(); self.levels[n + 1].len()];
            for &(u, v, k) in &self.edges[n] {
                down[v].push((u, k));
            }
            let mut paths: Vec<HashMap<usize, u32>> = vec![HashMap::new(); self.levels[n + 2].len()];
            for &(v, w, k2) in &self.edges[n + 1] {
                for &(u, k1) in &down[v] {
                    *paths[w].entry(u).or_default() += k1 * k2;
                }
            }
            for (wi, w) in self.levels[n + 2].iter().enumerate() {
                let target = boxn.reduce(&w.label);
                let ok = paths[wi].len() == 1
                    && paths[wi].iter().all(|(&u, &c)| c == 1 && self.levels[n][u].label == target);
                if !ok {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> Value {
        let label = |x: &BigInt| x.to_i64().map_or_else(|| json!(x.to_string()), |v| json!(v));
        let levels: Vec<Value> = self
            .levels
            .iter()
            .map(|lv| Value::Array(lv.iter().map(|v| Value::Array(v.label.iter().map(label).collect())).collect()))
            .collect();
        let incidence: Vec<Value> = (0..self.depth()).map(|n| json!(self.incidence(n))).collect();
        json!({ "incidence": incidence, "levels": levels })
    }

    /// DOT digraph with one ranked subgraph per level.
    pub fn export_dot(&self) -> String {
        let id = |n: usize, i: usize| format!("v{n}_{i}");
        let mut out = String::from("digraph bratteli {\n  rankdir=TB;\n  node [shape=circle];\n");
        for (n, lv) in self.levels.iter().enumerate() {
            let _ = writeln!(out, "  subgraph level_{n} {{\n    rank=same;");
            for (i, v) in lv.iter().enumerate() {
                let _ = writeln!(out, "    {} [label=\"{}\"];", id(n, i), v.label_string());
            }
            out.push_str("  }\n");
        }
        for (n, layer) in self.edges.iter().enumerate() {
            for &(v, w, k) in layer {
                for _ in 0..k {
                    let _ = writeln!(out, "  {} -> {};", id(n, v), id(n + 1, w));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// `true` when `v` at level `n` is the restriction of `w` at level `n + 1`.
pub fn restricts_to(w: &LevelVertex, v: &LevelVertex, grp: &DilationGroup) -> Result<bool> {
    if w.level != v.level + 1 {
        return Ok(false);
    }
    let diff: Vec<BigInt> = w.label.iter().zip(&v.label).map(|(a, b)| a - b).collect();
    let inv = transpose_pow(grp, v.level).inverse()?;
    Ok(inv.apply(&RationalVector::from_integers(&diff)).is_integral())
}
