//! Truncated generating functions
//!
//! ```text
//! h(x)  = Σ_{n≥3} V_n      x^(n−1) / ((n−1)!(n−3)!)
//! h₁(x) = Σ_{n≥3} V¹_n(L)  x^(n−1) / ((n−1)!(n−3)!)
//! ```
//!
//! and the residual of
//!
//! ```text
//! x h₁″ − h₁′ = h₁″(x h′ − h) + λ (h₁″ h + h₁′ h′),   λ = L²/(4π²).
//! ```

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::engine::{v_cusp, v_q_printed, v_q_unconstrained, Engine, Lambda};
use crate::error::{Error, Result};
use crate::scalars::{factorial, int, Coeff, PolyQ, Rational};

/// Power series known exactly through `x^order`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<C> {
    coeffs: Vec<C>,
}

impl<C: Coeff> TruncatedSeries<C> {
    /// The zero series through `x^order`.
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![C::zero(); order + 1],
        }
    }

    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a series keeps at least x^0");
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &C {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the first nonzero coefficient.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs[..=order.min(self.order())].to_vec())
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self::from_coeffs(
            (0..=order)
                .map(|k| {
                    let mut c = self.coeffs[k].clone();
                    c.add_assign_ref(&other.coeffs[k]);
                    c
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c.scale(r)).collect())
    }

    /// Multiplies every coefficient by a ring element.
    pub fn scale_by(&self, c: &C) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x.mul_ref(c)).collect())
    }

    /// Cauchy product through the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = vec![C::zero(); order + 1];
        for (a, ca) in self.coeffs.iter().enumerate().take(order + 1) {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in other.coeffs.iter().enumerate().take(order + 1 - a) {
                if !cb.is_zero() {
                    out[a + b].add_assign_ref(&ca.mul_ref(cb));
                }
            }
        }
        Self::from_coeffs(out)
    }

    /// Derivative; known through one order less.
    pub fn diff(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self::from_coeffs(
            (1..=self.order())
                .map(|k| self.coeffs[k].scale(&int(k as i64)))
                .collect(),
        )
    }

    /// Multiplication by `x`; known through one order more.
    pub fn xmul(&self) -> Self {
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(C::zero());
        c.extend(self.coeffs.iter().cloned());
        Self::from_coeffs(c)
    }
}

impl TruncatedSeries<Rational> {
    pub fn to_poly(&self) -> TruncatedSeries<PolyQ> {
        TruncatedSeries::from_coeffs(self.coeffs.iter().cloned().map(PolyQ::constant).collect())
    }
}

/// JSON arrays of coefficient strings (rational) or term lists (polynomial).
impl Serialize for TruncatedSeries<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

impl Serialize for TruncatedSeries<PolyQ> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter())
    }
}

/// Which one-boundary volumes feed `h₁`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum H1Source {
    /// The one-length recursion as printed.
    Printed,
    /// The boundary recursion at `(L, 0, …, 0)`.
    Reference,
    /// The one-length recursion with the unconstrained ψ-term.
    Unconstrained,
}

/// `1/((n−1)!(n−3)!)`.
fn gf_weight(n: usize) -> Rational {
    Rational::new(
        BigInt::from(1),
        factorial(n as u64 - 1) * factorial(n as u64 - 3),
    )
}

/// `h` through `x^order`.
pub fn build_h(order: usize) -> Result<TruncatedSeries<Rational>> {
    if order < 2 {
        return Err(Error::Domain(format!("order {order}: h starts at x^2")));
    }
    let mut c = vec![Rational::zero(); order + 1];
    for (k, slot) in c.iter_mut().enumerate().skip(2) {
        let n = k + 1;
        *slot = v_cusp(n)? * gf_weight(n);
    }
    Ok(TruncatedSeries::from_coeffs(c))
}

/// `h₁` through `x^order`, coefficients polynomial in `λ` (constants when
/// `λ` is fixed).
pub fn build_h1(order: usize, source: H1Source, lam: &Lambda) -> Result<TruncatedSeries<PolyQ>> {
    if order < 2 {
        return Err(Error::Domain(format!("order {order}: h₁ starts at x^2")));
    }
    let engine = Engine::default();
    let mut c = vec![PolyQ::zero(); order + 1];
    for (k, slot) in c.iter_mut().enumerate().skip(2) {
        let n = k + 1;
        let v = match source {
            H1Source::Printed => v_q_printed(n, 1, lam)?,
            H1Source::Reference => engine.v_q_reference(n, 1, lam)?,
            H1Source::Unconstrained => v_q_unconstrained(n, 1, lam)?,
        };
        *slot = v.scale(&gf_weight(n));
    }
    Ok(TruncatedSeries::from_coeffs(c))
}

/// `x f₁″ − f₁′ − f₁″(x f′ − f) − λ(f₁″ f + f₁′ f′)` for arbitrary inputs.
pub fn residual_of(
    h: &TruncatedSeries<PolyQ>,
    h1: &TruncatedSeries<PolyQ>,
    lam: &PolyQ,
) -> TruncatedSeries<PolyQ> {
    let d_h = h.diff();
    let d_h1 = h1.diff();
    let dd_h1 = d_h1.diff();
    let lhs = dd_h1.xmul().sub(&d_h1);
    let wp = dd_h1.mul(&d_h.xmul().sub(h));
    let psi = dd_h1.mul(h).add(&d_h1.mul(&d_h)).scale_by(lam);
    lhs.sub(&wp).sub(&psi)
}

/// Residual of the `h₁` equation through `x^order`.
pub fn ode_residual_h1(order: usize, source: H1Source, lam: &Lambda) -> Result<TruncatedSeries<PolyQ>> {
    if order < 4 {
        return Err(Error::Domain(format!("order {order}: residual check needs order ≥ 4")));
    }
    let h = build_h(order + 2)?.to_poly();
    let h1 = build_h1(order + 2, source, lam)?;
    let r = residual_of(&h, &h1, &lam.poly()).truncate(order);
    Ok(TruncatedSeries::from_coeffs(
        r.coeffs.into_iter().map(|c| lam.finish(c)).collect(),
    ))
}

/// Residual of `x h″ − h′ = h″(x h′ − h)` through `x^order`.
pub fn kmz_residual(order: usize) -> Result<TruncatedSeries<Rational>> {
    if order < 1 {
        return Err(Error::Domain("order must be positive".into()));
    }
    let h = build_h(order + 2)?;
    let d = h.diff();
    let dd = d.diff();
    Ok(dd.xmul().sub(&d).sub(&dd.mul(&d.xmul().sub(&h))).truncate(order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    fn ser(c: &[i64]) -> TruncatedSeries<Rational> {
        TruncatedSeries::from_coeffs(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn arithmetic_examples() {
        // d/dx (x²/2) = x
        let half_sq = TruncatedSeries::from_coeffs(vec![int(0), int(0), rat(1, 2)]);
        assert_eq!(half_sq.diff(), ser(&[0, 1]));
        // x · x truncated at order 1
        let x = ser(&[0, 1]);
        assert!(x.mul(&x).is_zero());
        assert_eq!(x.mul(&x).order(), 1);
        // mismatched orders align to the smaller one
        assert_eq!(ser(&[1, 2, 3]).add(&ser(&[1, 1])), ser(&[2, 3]));
    }

    #[test]
    fn x_h_second_derivative_low_orders() {
        // h = x²/2 + x³/6 + 5x⁴/48 + …  ⇒  x h″ = x + x² + 5x³/4 + …
        let h = build_h(8).unwrap();
        let xdd = h.diff().diff().xmul();
        assert_eq!(xdd.coeffs()[..4], [int(0), int(1), int(1), rat(5, 4)]);
    }

    #[test]
    fn h_coefficients() {
        let h = build_h(6).unwrap();
        assert_eq!(h.coeff(0), &int(0));
        assert_eq!(h.coeff(1), &int(0));
        assert_eq!(h.coeff(2), &rat(1, 2));
        assert_eq!(h.coeff(3), &rat(1, 6));
        assert!(build_h(1).is_err());
    }

    #[test]
    fn h1_cubic_coefficient() {
        let lam = Lambda::Symbolic;
        let vars = Lambda::vars();
        let p = build_h1(4, H1Source::Printed, &lam).unwrap();
        let r = build_h1(4, H1Source::Reference, &lam).unwrap();
        let lin = |a: Rational, b: Rational| PolyQ::from_terms(vars.clone(), [(vec![0], a), (vec![1], b)]);
        assert_eq!(p.coeff(3), &lin(rat(1, 6), rat(1, 4)));
        assert_eq!(r.coeff(3), &lin(rat(1, 6), rat(1, 6)));
    }

    #[test]
    fn h1_at_zero_length_is_h() {
        let zero = Lambda::Value(int(0));
        let h = build_h(10).unwrap().to_poly();
        assert_eq!(build_h1(10, H1Source::Printed, &zero).unwrap(), h);
        assert_eq!(build_h1(10, H1Source::Reference, &zero).unwrap(), h);
    }

    #[test]
    fn series_json() {
        let h = build_h(3).unwrap();
        assert_eq!(serde_json::to_string(&h).unwrap(), r#"["0","0","1/2","1/6"]"#);
    }
}
