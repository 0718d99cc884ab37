//! Volume recursions.
//!
//! Each `V_n` is expanded over the boundary divisors `Δ_I` of the
//! compactified moduli space: a Weil–Petersson term, a ψ-class term
//! weighted by the squared decorations, and for cone points a correction
//! over pairs `{a, b}` with `t_a + t_b ≥ 2`. Sub-spheres carry the marks of
//! one side of the split plus a cusp at the node.
//!
//! The ψ-class of mark `j` is represented either by the average over all
//! unordered pairs `{k, ℓ}` not containing `j` ([`PsiMode::AveragedUnordered`])
//! or by a single fixed pair ([`PsiMode::FixedPair`]). Subsets are either
//! grouped by value class ([`Reduction::SymmetryReduced`]) or enumerated
//! one by one ([`Reduction::NaiveLabeled`]). The two reductions always
//! agree. The two psi modes agree for boundaries, cusps and cone profiles
//! without a pair `t_a + t_b > 2`; beyond that the fixed-pair value depends
//! on which pair is chosen, so [`PsiMode::AveragedUnordered`] is the default.
//! The shared memo table only stores averaged values.
//!
//! [`ConeRule::MergedNode`] is a derived alternative for cone points: when
//! a pair `{a, b}` with `t_a + t_b ≥ 2` is split off, the node on the other
//! side carries the merged angle `t_a + t_b − 2` instead of a cusp, both in
//! the divisor products and in the pair correction. Under that rule the two
//! psi modes agree on every profile tested and no admissible volume comes
//! out negative. [`ConeRule::Cusp`] is the default.

mod cusp;
mod memo;
mod recursion;
mod vq;

use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profiles::{is_admissible_values, pair_correction, Family, MarkingProfile};
use crate::scalars::{int, PolyQ, Rational};

pub use cusp::{v_cusp, v_cusp_table};
pub use memo::{MemoTable, CACHE_VERSION};
pub use vq::{v_nn_remark, v_q_corrected, v_q_printed, v_q_unconstrained, Lambda};

use recursion::{
    normalize, state_from_marks, LocalCache, MarkRules, Naive, Reduced,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PsiMode {
    /// `PD(ψ_j)` as the `C(n−1,2)⁻¹`-weighted sum over all unordered pairs.
    #[default]
    AveragedUnordered,
    /// `PD(ψ_j)` through one fixed pair `k(j), ℓ(j)`.
    FixedPair,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reduction {
    #[default]
    SymmetryReduced,
    NaiveLabeled,
}

/// Node mark opposite a split-off pair of cone points in `S₂`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConeRule {
    /// A cusp at every node.
    #[default]
    Cusp,
    /// The merged angle `t_a + t_b − 2`. Not part of the standard recursion.
    MergedNode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    pub psi_mode: PsiMode,
    pub reduction: Reduction,
    pub cone_rule: ConeRule,
    /// Sum split contributions on the rayon pool.
    pub parallel: bool,
    /// Largest `n` accepted by the labeled oracle.
    pub naive_limit: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            psi_mode: PsiMode::default(),
            reduction: Reduction::default(),
            cone_rule: ConeRule::default(),
            parallel: false,
            naive_limit: 14,
        }
    }
}

impl EngineConfig {
    pub fn new(psi_mode: PsiMode, reduction: Reduction) -> Self {
        Self {
            psi_mode,
            reduction,
            ..Self::default()
        }
    }

    pub fn with_cone_rule(mut self, rule: ConeRule) -> Self {
        self.cone_rule = rule;
        self
    }

    /// The four psi/reduction combinations.
    pub fn all_modes() -> [EngineConfig; 4] {
        use PsiMode::*;
        use Reduction::*;
        [
            Self::new(AveragedUnordered, SymmetryReduced),
            Self::new(FixedPair, SymmetryReduced),
            Self::new(AveragedUnordered, NaiveLabeled),
            Self::new(FixedPair, NaiveLabeled),
        ]
    }
}

/// Numeric marks: π-unit values with `0` for cusps.
pub(crate) struct NumericRules {
    pub family: Family,
    pub cone_rule: ConeRule,
}

impl MarkRules for NumericRules {
    type Mark = Rational;
    type Value = Rational;

    fn cusp(&self) -> Rational {
        Rational::zero()
    }

    fn psi_weight(&self, v: &Rational) -> Rational {
        let sq = v * v / int(4);
        match self.family {
            Family::Boundary => sq,
            Family::Conical => -sq,
        }
    }

    fn vanishes(&self, state: &[(Rational, usize)]) -> bool {
        self.family == Family::Conical
            && !is_admissible_values(
                state
                    .iter()
                    .flat_map(|(v, c)| std::iter::repeat(v.clone()).take(*c)),
            )
    }

    fn pair_correction(&self, a: &Rational, b: &Rational) -> Option<Rational> {
        match self.family {
            Family::Conical => pair_correction(a, b),
            Family::Boundary => None,
        }
    }

    fn merged(&self, a: &Rational, b: &Rational) -> Option<Rational> {
        if self.family != Family::Conical || self.cone_rule != ConeRule::MergedNode {
            return None;
        }
        let w = a + b - int(2);
        (!w.is_negative()).then_some(w)
    }
}

/// Boundary marks carrying independent symbols `λ_j = L_j²/(4π²)`.
pub(crate) struct SymbolicRules {
    vars: Vec<String>,
}

impl MarkRules for SymbolicRules {
    /// `None` is a cusp, `Some(j)` the boundary with variable `λ_{j+1}`.
    type Mark = Option<usize>;
    type Value = PolyQ;

    fn cusp(&self) -> Option<usize> {
        None
    }

    fn psi_weight(&self, m: &Option<usize>) -> PolyQ {
        match m {
            None => PolyQ::zero(),
            Some(j) => PolyQ::variable(&self.vars, *j),
        }
    }

    fn vanishes(&self, _: &[(Option<usize>, usize)]) -> bool {
        false
    }

    fn pair_correction(&self, _: &Option<usize>, _: &Option<usize>) -> Option<Rational> {
        None
    }
}

/// Volume engine with a shared memo table.
#[derive(Clone, Debug)]
pub struct Engine {
    config: EngineConfig,
    memo: Arc<MemoTable>,
}

impl Default for Engine {
    fn default() -> Self {
        Self::new(EngineConfig::default())
    }
}

impl Engine {
    pub fn new(config: EngineConfig) -> Self {
        Self::with_memo(config, Arc::new(MemoTable::new()))
    }

    pub fn with_memo(config: EngineConfig, memo: Arc<MemoTable>) -> Self {
        Self { config, memo }
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn memo(&self) -> &Arc<MemoTable> {
        &self.memo
    }

    /// `V_n` for a profile of either family.
    pub fn volume(&self, p: &MarkingProfile) -> Result<Rational> {
        let rules = NumericRules {
            family: p.family(),
            cone_rule: self.config.cone_rule,
        };
        let shared = self.config.psi_mode == PsiMode::AveragedUnordered
            && (self.config.cone_rule == ConeRule::Cusp || p.family() == Family::Boundary);
        match self.config.reduction {
            Reduction::NaiveLabeled => {
                if p.len() > self.config.naive_limit {
                    return Err(Error::TooLarge {
                        n: p.len(),
                        limit: self.config.naive_limit,
                    });
                }
                Ok(Naive::new(&rules, self.config.psi_mode).volume(&p.values()))
            }
            Reduction::SymmetryReduced => {
                let state = state_from_marks(&p.values());
                if shared {
                    let cache = memo::FamilyCache {
                        table: &self.memo,
                        family: p.family(),
                    };
                    Ok(self.reduced(&rules, &cache).volume(&state))
                } else {
                    let cache = LocalCache::new();
                    Ok(self.reduced(&rules, &cache).volume(&state))
                }
            }
        }
    }

    /// `V_n(L)` for geodesic boundaries `L_j = s_j·π`.
    pub fn v_boundary(&self, p: &MarkingProfile) -> Result<Rational> {
        if p.family() != Family::Boundary {
            return Err(Error::WrongFamily {
                expected: "boundary",
                found: "conical",
            });
        }
        self.volume(p)
    }

    /// `V_n(iθ)` for cone angles `θ_j = t_j·π`; zero when `n ≥ 4` and the
    /// angles are not admissible, one when `n = 3`.
    pub fn v_conical(&self, p: &MarkingProfile) -> Result<Rational> {
        if p.family() != Family::Conical {
            return Err(Error::WrongFamily {
                expected: "conical",
                found: "boundary",
            });
        }
        self.volume(p)
    }

    /// `V_n(L)` as a polynomial in `λ_j = L_j²/(4π²)`, `j = 1..n`.
    pub fn v_boundary_symbolic(&self, n: usize) -> Result<PolyQ> {
        if n < 3 {
            return Err(Error::Domain(format!("n = {n}: volumes need n ≥ 3")));
        }
        let rules = SymbolicRules {
            vars: PolyQ::lambda_vars(n),
        };
        let marks: Vec<Option<usize>> = (0..n).map(Some).collect();
        let v = match self.config.reduction {
            Reduction::SymmetryReduced => {
                let cache = LocalCache::new();
                Reduced {
                    rules: &rules,
                    cache: &cache,
                    psi_mode: self.config.psi_mode,
                    parallel: self.config.parallel,
                }
                .volume(&state_from_marks(&marks))
            }
            Reduction::NaiveLabeled => {
                self.check_naive(n)?;
                Naive::new(&rules, self.config.psi_mode).volume(&marks)
            }
        };
        Ok(v.with_vars(&rules.vars))
    }

    /// `V^q_n(L) = V_n(L,…,L, 0,…,0)` with `q` boundaries of length `L`,
    /// from the boundary recursion.
    pub fn v_q_reference(&self, n: usize, q: usize, lam: &Lambda) -> Result<PolyQ> {
        if n < 3 {
            return Err(Error::Domain(format!("n = {n}: volumes need n ≥ 3")));
        }
        if q > n {
            return Err(Error::Domain(format!("q = {q} outside [0, {n}]")));
        }
        let rules = vq::OneLengthRules::new(lam);
        let marks: Vec<bool> = (0..n).map(|j| j < q).collect();
        let v = match self.config.reduction {
            Reduction::SymmetryReduced => {
                let cache = LocalCache::new();
                Reduced {
                    rules: &rules,
                    cache: &cache,
                    psi_mode: self.config.psi_mode,
                    parallel: self.config.parallel,
                }
                .volume(&normalize(vec![(true, q), (false, n - q)]))
            }
            Reduction::NaiveLabeled => {
                self.check_naive(n)?;
                Naive::new(&rules, self.config.psi_mode).volume(&marks)
            }
        };
        Ok(lam.finish(v))
    }

    fn reduced<'a, R: MarkRules, C>(&self, rules: &'a R, cache: &'a C) -> Reduced<'a, R, C> {
        Reduced {
            rules,
            cache,
            psi_mode: self.config.psi_mode,
            parallel: self.config.parallel,
        }
    }

    fn check_naive(&self, n: usize) -> Result<()> {
        if n > self.config.naive_limit {
            return Err(Error::TooLarge {
                n,
                limit: self.config.naive_limit,
            });
        }
        Ok(())
    }
}

/// Labeled oracle: enumerates every subset and every `(j, {k, ℓ})`
/// literally. Refuses profiles with more than 14 marks.
pub fn v_naive(p: &MarkingProfile, psi_mode: PsiMode) -> Result<Rational> {
    Engine::new(EngineConfig::new(psi_mode, Reduction::NaiveLabeled)).volume(p)
}
