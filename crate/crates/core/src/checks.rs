//! Profile grids and cross-checks shared by the test suites and the CLI.

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use std::ops::RangeInclusive;

use crate::engine::{v_q_printed, ConeRule, Engine, EngineConfig, Lambda, PsiMode, Reduction};
use crate::error::{Error, Result};
use crate::profiles::{Family, MarkingProfile};
use crate::scalars::{int, rat, serde_rational, PolyQ, Rational};

/// Sorted multisets of size `n` drawn from `values`.
pub fn multisets(values: &[Rational], n: usize) -> Vec<Vec<Rational>> {
    fn go(values: &[Rational], start: usize, left: usize, cur: &mut Vec<Rational>, out: &mut Vec<Vec<Rational>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..values.len() {
            cur.push(values[i].clone());
            go(values, i, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(values, 0, n, &mut Vec::new(), &mut out);
    out
}

fn grid(family: Family, values: &[Rational], max_n: usize) -> Vec<MarkingProfile> {
    (3..=max_n)
        .flat_map(|n| multisets(values, n))
        .map(|v| MarkingProfile::from_values(family, &v).expect("grid values are in range"))
        .collect()
}

/// Cone angles in `{0, 1/2, 1, 3/2, 2}`, `3 ≤ n ≤ max_n`.
pub fn conical_grid(max_n: usize) -> Vec<MarkingProfile> {
    let vals = [int(0), rat(1, 2), int(1), rat(3, 2), int(2)];
    grid(Family::Conical, &vals, max_n)
}

/// Boundary lengths in `{0, 1, 2}`, `3 ≤ n ≤ max_n`.
pub fn boundary_grid(max_n: usize) -> Vec<MarkingProfile> {
    grid(Family::Boundary, &[int(0), int(1), int(2)], max_n)
}

pub fn cusp_grid(max_n: usize) -> Vec<MarkingProfile> {
    (3..=max_n)
        .map(|n| MarkingProfile::cusps(Family::Conical, n).expect("n ≥ 3"))
        .collect()
}

/// Random profile of either family with small-denominator values, in the
/// order they were drawn.
pub fn random_profile<R: Rng>(rng: &mut R, max_n: usize) -> MarkingProfile {
    let n = rng.gen_range(3..=max_n);
    let family = if rng.gen_bool(0.5) {
        Family::Conical
    } else {
        Family::Boundary
    };
    let top = match family {
        Family::Conical => 2,
        Family::Boundary => 3,
    };
    let values: Vec<Rational> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.25) {
                return int(0);
            }
            let q = rng.gen_range(1..=6i64);
            rat(rng.gen_range(0..=top * q), q)
        })
        .collect();
    MarkingProfile::from_values(family, &values).expect("values are in range")
}

pub fn random_profiles(count: usize, max_n: usize, seed: u64) -> Vec<MarkingProfile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_profile(&mut rng, max_n)).collect()
}

/// Whether some pair of cone angles sums past `2`, so that a pair
/// correction is strictly positive.
pub fn has_positive_pair(p: &MarkingProfile) -> bool {
    if p.family() != Family::Conical {
        return false;
    }
    let v = p.values();
    (0..v.len()).any(|a| (a + 1..v.len()).any(|b| &v[a] + &v[b] > int(2)))
}

pub fn config_label(c: &EngineConfig) -> String {
    let psi = match c.psi_mode {
        PsiMode::AveragedUnordered => "averaged",
        PsiMode::FixedPair => "fixed-pair",
    };
    let red = match c.reduction {
        Reduction::SymmetryReduced => "reduced",
        Reduction::NaiveLabeled => "naive",
    };
    match c.cone_rule {
        ConeRule::Cusp => format!("{psi}/{red}"),
        ConeRule::MergedNode => format!("{psi}/{red}/merged"),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LabeledValue {
    pub engine: String,
    #[serde(with = "serde_rational")]
    pub value: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct Disagreement {
    pub profile: String,
    pub values: Vec<LabeledValue>,
}

/// Outcome of evaluating the same profiles under several engine configs.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Comparison {
    pub checked: usize,
    pub disagreements: Vec<Disagreement>,
}

impl Comparison {
    pub fn agree(&self) -> bool {
        self.disagreements.is_empty()
    }

    pub fn merge(&mut self, other: Comparison) {
        self.checked += other.checked;
        self.disagreements.extend(other.disagreements);
    }
}

/// Evaluates every profile under every config and records each profile on
/// which the values differ.
pub fn compare(profiles: &[MarkingProfile], configs: &[EngineConfig]) -> Result<Comparison> {
    let engines: Vec<Engine> = configs.iter().cloned().map(Engine::new).collect();
    let mut out = Comparison::default();
    for p in profiles {
        let values = engines
            .iter()
            .map(|e| {
                Ok(LabeledValue {
                    engine: config_label(e.config()),
                    value: e.volume(p)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        out.checked += 1;
        if values.iter().any(|v| v.value != values[0].value) {
            out.disagreements.push(Disagreement {
                profile: p.to_string(),
                values,
            });
        }
    }
    Ok(out)
}

/// Reduced against labeled enumeration, in the given psi mode.
pub fn compare_reductions(profiles: &[MarkingProfile], psi_mode: PsiMode) -> Result<Comparison> {
    compare(
        profiles,
        &[
            EngineConfig::new(psi_mode, Reduction::SymmetryReduced),
            EngineConfig::new(psi_mode, Reduction::NaiveLabeled),
        ],
    )
}

/// Averaged against fixed-pair, under both reductions.
pub fn compare_psi_modes(profiles: &[MarkingProfile]) -> Result<Comparison> {
    compare(profiles, &EngineConfig::all_modes())
}

/// [`compare_psi_modes`] under a given cone rule.
pub fn compare_psi_modes_with(profiles: &[MarkingProfile], rule: ConeRule) -> Result<Comparison> {
    compare(profiles, &EngineConfig::all_modes().map(|c| c.with_cone_rule(rule)))
}

/// Printed and reference one-length volumes side by side.
#[derive(Clone, Debug, Serialize)]
pub struct VqRow {
    pub n: usize,
    pub q: usize,
    pub printed: PolyQ,
    pub reference: PolyQ,
    pub agree: bool,
}

/// Rows for every `q ∈ [0, n]`, `n` in `ns` (printed values need `n ≥ 4`).
pub fn compare_vq(ns: RangeInclusive<usize>, lam: &Lambda) -> Result<Vec<VqRow>> {
    let engine = Engine::default();
    let mut rows = Vec::new();
    for n in ns {
        for q in 0..=n {
            let printed = v_q_printed(n, q, lam)?;
            let reference = engine.v_q_reference(n, q, lam)?;
            let agree = printed == reference;
            rows.push(VqRow { n, q, printed, reference, agree });
        }
    }
    Ok(rows)
}

/// First `(n, q)` in scan order where the two disagree.
pub fn first_vq_disagreement(rows: &[VqRow]) -> Option<(usize, usize)> {
    rows.iter().find(|r| !r.agree).map(|r| (r.n, r.q))
}

/// Coefficients (constant first) of the interpolating polynomial.
pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); xs.len()];
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        let mut basis = vec![Rational::one()];
        let mut denom = Rational::one();
        for (j, xj) in xs.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![Rational::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= b * xj;
            }
            basis = next;
            denom *= xi - xj;
        }
        let w = yi / denom;
        for (o, b) in out.iter_mut().zip(&basis) {
            *o += b * &w;
        }
    }
    out
}

pub fn horner(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Gap between the chamber polynomials on the two sides of the wall
/// `t₀ + t₁ = 2` as `t₁ = 2 − x + δ` moves, the other marks fixed.
#[derive(Clone, Debug)]
pub struct WallGap {
    /// `P₊ − P₋` in powers of `δ`.
    pub coeffs: Vec<Rational>,
}

impl WallGap {
    /// Recovers both one-sided polynomials by exact interpolation at
    /// `δ = ±k·step` and checks each against one extra sample. Errors if a
    /// second wall lies within the sampled range.
    pub fn new(engine: &Engine, x: &Rational, rest: &[Rational], step: &Rational) -> Result<Self> {
        let n = rest.len() + 2;
        let degree = 2 * n.saturating_sub(3);
        let eval = |d: &Rational| -> Result<Rational> {
            let mut t = vec![x.clone(), int(2) - x + d];
            t.extend(rest.iter().cloned());
            engine.v_conical(&MarkingProfile::conical(&t)?)
        };
        let side = |sign: i64| -> Result<Vec<Rational>> {
            let xs: Vec<Rational> = (1..=degree as i64 + 2).map(|k| step * int(sign * k)).collect();
            let ys = xs.iter().map(&eval).collect::<Result<Vec<_>>>()?;
            let poly = interpolate(&xs[..=degree], &ys[..=degree]);
            if horner(&poly, &xs[degree + 1]) != ys[degree + 1] {
                return Err(Error::Domain(format!(
                    "sweep of {x} meets another wall within {}·{step}",
                    degree + 2
                )));
            }
            Ok(poly)
        };
        let plus = side(1)?;
        let minus = side(-1)?;
        Ok(Self {
            coeffs: plus.iter().zip(&minus).map(|(a, b)| a - b).collect(),
        })
    }

    /// `P₊(δ) − P₋(δ)`.
    pub fn at(&self, d: &Rational) -> Rational {
        horner(&self.coeffs, d)
    }

    /// Order of vanishing at the wall.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }
}
