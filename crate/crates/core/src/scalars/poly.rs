use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{serde_rational, Coeff, Rational};
use crate::error::{Error, Result};

/// Sparse polynomial with rational coefficients.
///
/// Every exponent vector has one entry per variable and zero coefficients
/// are never stored. A polynomial with no variables is a constant and is
/// promoted to any variable list when combined with another polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyQ {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Rational>,
}

/// One term in the JSON form of a polynomial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyTerm {
    pub exponents: Vec<u32>,
    #[serde(with = "serde_rational")]
    pub coeff: Rational,
}

impl PolyQ {
    pub fn zero() -> Self {
        Self {
            vars: Vec::new(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Self {
            vars: Vec::new(),
            terms,
        }
    }

    /// The polynomial `vars[index]`.
    pub fn variable(vars: &[String], index: usize) -> Self {
        assert!(index < vars.len(), "variable index out of range");
        let mut e = vec![0; vars.len()];
        e[index] = 1;
        Self::from_terms(vars.to_vec(), [(e, Rational::one())])
    }

    pub fn from_terms(
        vars: Vec<String>,
        terms: impl IntoIterator<Item = (Vec<u32>, Rational)>,
    ) -> Self {
        let mut out = Self {
            vars,
            terms: BTreeMap::new(),
        };
        for (e, c) in terms {
            assert_eq!(e.len(), out.vars.len(), "exponent vector length");
            out.add_term(e, c);
        }
        out
    }

    /// Variables `λ1..λn`.
    pub fn lambda_vars(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("λ{i}")).collect()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exponents: &[u32]) -> Rational {
        if self.vars.is_empty() {
            if exponents.iter().all(|&e| e == 0) {
                return self.terms.get(&Vec::new()).cloned().unwrap_or_else(Rational::zero);
            }
            return Rational::zero();
        }
        self.terms.get(exponents).cloned().unwrap_or_else(Rational::zero)
    }

    /// Constant term.
    pub fn constant_term(&self) -> Rational {
        self.coeff(&vec![0; self.vars.len()])
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Re-expresses a constant over `vars`; no-op when the variables match.
    pub fn with_vars(&self, vars: &[String]) -> Self {
        if self.vars == vars {
            return self.clone();
        }
        assert!(
            self.vars.is_empty(),
            "cannot move a polynomial in {:?} to {:?}",
            self.vars,
            vars
        );
        Self::from_terms(
            vars.to_vec(),
            self.terms.values().map(|c| (vec![0; vars.len()], c.clone())),
        )
    }

    fn aligned<'a>(&'a self, other: &'a Self) -> (std::borrow::Cow<'a, Self>, std::borrow::Cow<'a, Self>) {
        use std::borrow::Cow;
        if self.vars == other.vars {
            (Cow::Borrowed(self), Cow::Borrowed(other))
        } else if self.vars.is_empty() {
            (Cow::Owned(self.with_vars(&other.vars)), Cow::Borrowed(other))
        } else {
            (Cow::Borrowed(self), Cow::Owned(other.with_vars(&self.vars)))
        }
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let mut out = a.into_owned();
        for (e, c) in &b.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let mut out = Self {
            vars: a.vars.clone(),
            terms: BTreeMap::new(),
        };
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self {
                vars: self.vars.clone(),
                terms: BTreeMap::new(),
            };
        }
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * r)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(Rational::one()), |acc, _| acc.mul(self))
    }

    /// Exact evaluation; every variable must be assigned.
    pub fn eval(&self, assignment: &HashMap<String, Rational>) -> Result<Rational> {
        let values: Vec<&Rational> = self
            .vars
            .iter()
            .map(|v| {
                assignment
                    .get(v)
                    .ok_or_else(|| Error::MissingVariable(v.clone()))
            })
            .collect::<Result<_>>()?;
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in values.iter().zip(e) {
                if k > 0 {
                    term *= num_traits::pow((*x).clone(), k as usize);
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Evaluates with the values given positionally.
    pub fn eval_slice(&self, values: &[Rational]) -> Result<Rational> {
        if values.len() < self.vars.len() {
            return Err(Error::MissingVariable(self.vars[values.len()].clone()));
        }
        let map = self
            .vars
            .iter()
            .cloned()
            .zip(values.iter().cloned())
            .collect();
        self.eval(&map)
    }

    /// True when the polynomial is invariant under every swap of two
    /// variables.
    pub fn is_symmetric(&self) -> bool {
        let n = self.vars.len();
        (0..n).all(|i| {
            (i + 1..n).all(|j| {
                self.terms.iter().all(|(e, c)| {
                    let mut s = e.clone();
                    s.swap(i, j);
                    self.terms.get(&s) == Some(c)
                })
            })
        })
    }

    /// Coefficients of a polynomial in at most one variable, lowest degree
    /// first.
    pub fn univariate_coeffs(&self) -> Vec<Rational> {
        assert!(self.vars.len() <= 1, "not univariate");
        let deg = self.total_degree().unwrap_or(0) as usize;
        let mut out = vec![Rational::zero(); deg + 1];
        for (e, c) in &self.terms {
            let k = e.first().copied().unwrap_or(0) as usize;
            out[k] = c.clone();
        }
        out
    }

    pub fn to_terms(&self) -> Vec<PolyTerm> {
        self.terms
            .iter()
            .map(|(e, c)| PolyTerm {
                exponents: e.clone(),
                coeff: c.clone(),
            })
            .collect()
    }
}

impl Serialize for PolyQ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_terms().serialize(s)
    }
}

impl std::ops::Add for PolyQ {
    type Output = PolyQ;

    fn add(self, other: PolyQ) -> PolyQ {
        PolyQ::add(&self, &other)
    }
}

impl std::ops::Mul for PolyQ {
    type Output = PolyQ;

    fn mul(self, other: PolyQ) -> PolyQ {
        PolyQ::mul(&self, &other)
    }
}

impl Zero for PolyQ {
    fn zero() -> Self {
        PolyQ::zero()
    }

    fn is_zero(&self) -> bool {
        PolyQ::is_zero(self)
    }
}

impl One for PolyQ {
    fn one() -> Self {
        PolyQ::constant(Rational::one())
    }
}

impl Coeff for PolyQ {
    fn from_rational(r: Rational) -> Self {
        PolyQ::constant(r)
    }

    fn add_assign_ref(&mut self, other: &Self) {
        if self.vars == other.vars {
            for (e, c) in &other.terms {
                self.add_term(e.clone(), c.clone());
            }
        } else {
            *self = PolyQ::add(self, other);
        }
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn scale(&self, r: &Rational) -> Self {
        PolyQ::scale(self, r)
    }
}

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // lowest total degree first
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(e, _)| (e.iter().sum::<u32>(), std::cmp::Reverse((*e).clone())));
        for (idx, (e, c)) in terms.into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .zip(&self.vars)
                .filter(|(k, _)| **k > 0)
                .map(|(k, v)| if *k == 1 { v.clone() } else { format!("{v}^{k}") })
                .collect();
            let negative = *c < Rational::zero();
            let mag = if negative { -c.clone() } else { c.clone() };
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { "-" } else { "+" })?;
            }
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{mag}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, rat};
    use proptest::prelude::*;

    fn lam() -> Vec<String> {
        vec!["λ".to_string()]
    }

    #[test]
    fn eval_examples() {
        let l = PolyQ::variable(&lam(), 0);
        let p = PolyQ::constant(int(1)).add(&l);
        let at = |x: Rational| HashMap::from([("λ".to_string(), x)]);
        assert_eq!(p.eval(&at(rat(1, 4))).unwrap(), rat(5, 4));
        assert_eq!(PolyQ::zero().eval(&HashMap::new()).unwrap(), int(0));
        assert_eq!(l.pow(2).eval(&at(rat(2, 3))).unwrap(), rat(4, 9));
    }

    #[test]
    fn missing_variable_is_named() {
        let vars = PolyQ::lambda_vars(2);
        let p = PolyQ::variable(&vars, 1);
        let partial = HashMap::from([("λ1".to_string(), int(1))]);
        assert_eq!(p.eval(&partial), Err(Error::MissingVariable("λ2".into())));
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let l = PolyQ::variable(&lam(), 0);
        let z = l.sub(&l);
        assert!(z.is_zero());
        assert_eq!(z.num_terms(), 0);
        assert_eq!(z.total_degree(), None);
    }

    #[test]
    fn display_and_json() {
        let vars = PolyQ::lambda_vars(2);
        let p = PolyQ::from_terms(
            vars,
            [
                (vec![0, 0], int(1)),
                (vec![1, 0], rat(3, 2)),
                (vec![1, 1], int(-2)),
            ],
        );
        assert_eq!(p.to_string(), "1 + 3/2*λ1 - 2*λ1*λ2");
        let js = serde_json::to_string(&p).unwrap();
        assert_eq!(
            js,
            r#"[{"exponents":[0,0],"coeff":"1"},{"exponents":[1,0],"coeff":"3/2"},{"exponents":[1,1],"coeff":"-2"}]"#
        );
    }

    #[test]
    fn symmetry_detection() {
        let vars = PolyQ::lambda_vars(3);
        let s = (0..3).fold(PolyQ::zero(), |acc, i| acc.add(&PolyQ::variable(&vars, i)));
        assert!(s.is_symmetric());
        assert!(!PolyQ::variable(&vars, 0).is_symmetric());
    }

    fn small_poly() -> impl Strategy<Value = PolyQ> {
        prop::collection::vec(((0u32..3, 0u32..3), (-9i64..9, 1i64..5)), 0..5).prop_map(|ts| {
            PolyQ::from_terms(
                PolyQ::lambda_vars(2),
                ts.into_iter().map(|((a, b), (n, d))| (vec![a, b], rat(n, d))),
            )
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
        }

        #[test]
        fn evaluation_is_a_ring_map(a in small_poly(), b in small_poly(), x in -5i64..5, y in 1i64..4) {
            let pt = [rat(x, y), rat(y, 3)];
            let ea = a.eval_slice(&pt).unwrap();
            let eb = b.eval_slice(&pt).unwrap();
            prop_assert_eq!(a.mul(&b).eval_slice(&pt).unwrap(), &ea * &eb);
            prop_assert_eq!(a.add(&b).eval_slice(&pt).unwrap(), ea + eb);
        }
    }
}
