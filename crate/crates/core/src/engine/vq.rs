//! Volumes with `q` boundaries of a common length `L` and `n − q` cusps.

use std::collections::HashMap;

use super::recursion::{one_half, MarkRules};
use crate::error::{Error, Result};
use crate::scalars::{binomial, int, PolyQ, Rational};

/// The value of `λ = L²/(4π²)`: a free symbol or a fixed rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lambda {
    Symbolic,
    Value(Rational),
}

impl Lambda {
    pub const VAR: &'static str = "λ";

    pub fn vars() -> Vec<String> {
        vec![Self::VAR.to_string()]
    }

    pub fn poly(&self) -> PolyQ {
        match self {
            Lambda::Symbolic => PolyQ::variable(&Self::vars(), 0),
            Lambda::Value(v) => PolyQ::constant(v.clone()),
        }
    }

    /// Puts symbolic results over the `λ` variable list.
    pub(crate) fn finish(&self, p: PolyQ) -> PolyQ {
        match self {
            Lambda::Symbolic => p.with_vars(&Self::vars()),
            Lambda::Value(_) => p,
        }
    }
}

pub(crate) struct OneLengthRules {
    lam: PolyQ,
}

impl OneLengthRules {
    pub fn new(lam: &Lambda) -> Self {
        Self { lam: lam.poly() }
    }
}

impl MarkRules for OneLengthRules {
    /// `true` for a boundary of length `L`, `false` for a cusp.
    type Mark = bool;
    type Value = PolyQ;

    fn cusp(&self) -> bool {
        false
    }

    fn psi_weight(&self, m: &bool) -> PolyQ {
        if *m {
            self.lam.clone()
        } else {
            PolyQ::zero()
        }
    }

    fn vanishes(&self, _: &[(bool, usize)]) -> bool {
        false
    }

    fn pair_correction(&self, _: &bool, _: &bool) -> Option<Rational> {
        None
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Variant {
    Printed,
    Corrected,
    Unconstrained,
}

struct QRecursion {
    variant: Variant,
    lam: PolyQ,
    memo: HashMap<(usize, usize), PolyQ>,
}

impl QRecursion {
    fn new(variant: Variant, lam: &Lambda) -> Self {
        Self {
            variant,
            lam: lam.poly(),
            memo: HashMap::new(),
        }
    }

    /// Factor multiplying `p·λ` in the bracket for a split of size `i + 1`.
    fn psi_factor(&self, n: usize, i: usize) -> Rational {
        match self.variant {
            // (p/2) · L²/(2π²) = p·λ
            Variant::Printed => int(1),
            // p · L²/(2π²) = 2p·λ
            Variant::Unconstrained => int(2),
            // 2 · C(n−i−1, 2) / C(n−1, 2)
            Variant::Corrected => {
                int(2) * binomial((n - i - 1) as u64, 2) / binomial(n as u64 - 1, 2)
            }
        }
    }

    fn get(&mut self, n: usize, q: usize) -> PolyQ {
        if n == 3 {
            return PolyQ::constant(int(1));
        }
        if let Some(v) = self.memo.get(&(n, q)) {
            return v.clone();
        }
        let mut total = PolyQ::zero();
        for i in 1..=n - 3 {
            let c = binomial(n as u64 - 4, i as i64 - 1);
            let base = Rational::new(((i * (n - i - 2)) as i64).into(), ((n - 1) as i64).into());
            let p_lo = (i + 1 + q).saturating_sub(n);
            let p_hi = q.min(i + 1);
            for p in p_lo..=p_hi {
                let mult = binomial(q as u64, p as i64) * binomial((n - q) as u64, (i + 1 - p) as i64);
                let left = self.get(i + 2, p);
                let right = self.get(n - i, q - p);
                let bracket = PolyQ::constant(base.clone())
                    .add(&self.lam.scale(&(int(p as i64) * self.psi_factor(n, i))));
                let term = left.mul(&right).mul(&bracket).scale(&(&c * mult * one_half()));
                total = total.add(&term);
            }
        }
        self.memo.insert((n, q), total.clone());
        total
    }
}

fn check_nq(n: usize, q: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::Domain(format!("n = {n}: volumes need n ≥ 3")));
    }
    if q > n {
        return Err(Error::Domain(format!("q = {q} outside [0, {n}]")));
    }
    Ok(())
}

/// `V^q_n` from the one-length recursion exactly as printed, with bracket
/// `i(n−i−2)/(n−1) + (p/2)·L²/(2π²)` and `V^q_3 = 1`.
///
/// Not equal to [`Engine::v_q_reference`](super::Engine::v_q_reference) in
/// general: at `(n, q) = (4, 1)` it gives `1 + 3λ/2` against `1 + λ`.
pub fn v_q_printed(n: usize, q: usize, lam: &Lambda) -> Result<PolyQ> {
    check_nq(n, q)?;
    Ok(lam.finish(QRecursion::new(Variant::Printed, lam).get(n, q)))
}

/// The one-length recursion with the ψ-term weighted by the fraction
/// `C(n−i−1, 2)/C(n−1, 2)` of pairs `{k, ℓ}` lying outside the split. This
/// is a derived variant (not the printed formula); it agrees with the
/// boundary recursion.
pub fn v_q_corrected(n: usize, q: usize, lam: &Lambda) -> Result<PolyQ> {
    check_nq(n, q)?;
    Ok(lam.finish(QRecursion::new(Variant::Corrected, lam).get(n, q)))
}

/// The one-length recursion with bracket `i(n−i−2)/(n−1) + p·L²/(2π²)`:
/// every `j` in the split counted, with no condition on where its pair
/// `{k(j), ℓ(j)}` lies. Twice the printed ψ-term; a derived variant.
pub fn v_q_unconstrained(n: usize, q: usize, lam: &Lambda) -> Result<PolyQ> {
    check_nq(n, q)?;
    Ok(lam.finish(QRecursion::new(Variant::Unconstrained, lam).get(n, q)))
}

/// The closed `q = n` formula
///
/// ```text
/// V^n_n = ½ Σ_i C(n−4, i−1) C(n, i+1) V^{i+1}_{i+2} V^{n−i−1}_{n−i} (i(n−i−2)/(n−1) + (i+1)·L²/(2π²))
/// ```
///
/// with the sub-volumes taken from [`v_q_printed`]. Its ψ-coefficient is
/// twice that of the printed recursion at `q = n`.
pub fn v_nn_remark(n: usize, lam: &Lambda) -> Result<PolyQ> {
    if n < 4 {
        return Err(Error::Domain(format!("n = {n}: formula needs n ≥ 4")));
    }
    let mut sub = QRecursion::new(Variant::Printed, lam);
    let l = lam.poly();
    let mut total = PolyQ::zero();
    for i in 1..=n - 3 {
        let c = binomial(n as u64 - 4, i as i64 - 1) * binomial(n as u64, i as i64 + 1);
        let base = Rational::new(((i * (n - i - 2)) as i64).into(), ((n - 1) as i64).into());
        let bracket = PolyQ::constant(base).add(&l.scale(&int(2 * (i as i64 + 1))));
        let term = sub
            .get(i + 2, i + 1)
            .mul(&sub.get(n - i, n - i - 1))
            .mul(&bracket)
            .scale(&(c * one_half()));
        total = total.add(&term);
    }
    Ok(lam.finish(total))
}
