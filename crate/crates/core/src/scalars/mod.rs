//! Exact scalars: rationals, π-graded values and the coefficient trait
//! shared by the numeric and symbolic engines.

mod poly;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use poly::{PolyQ, PolyTerm};

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p"` or `"p/q"` (optional leading sign on `p`, `q > 0`).
pub fn parse_rational(token: &str) -> Result<Rational> {
    let err = |reason: &str| Error::Parse {
        token: token.to_string(),
        reason: reason.to_string(),
    };
    let s = token.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let is_int = |t: &str, signed: bool| {
        let digits = if signed {
            t.strip_prefix(['-', '+']).unwrap_or(t)
        } else {
            t
        };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !is_int(num, true) {
        return Err(err("expected an integer numerator"));
    }
    let numer: BigInt = num
        .trim_start_matches('+')
        .parse()
        .map_err(|_| err("expected an integer numerator"))?;
    let denom = match den {
        None => BigInt::one(),
        Some(d) => {
            if !is_int(d, false) {
                return Err(err("expected a positive integer denominator"));
            }
            let d: BigInt = d.parse().map_err(|_| err("bad denominator"))?;
            if d.is_zero() {
                return Err(err("zero denominator"));
            }
            d
        }
    };
    Ok(Rational::new(numer, denom))
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod serde_rational {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// `C(n, k)` as an exact integer; zero when `k < 0` or `k > n`.
pub fn binomial_int(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn binomial(n: u64, k: i64) -> Rational {
    Rational::from_integer(binomial_int(n, k))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// The value `coeff · π^pi_exp`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PiGraded {
    #[serde(with = "serde_rational")]
    pub coeff: Rational,
    pub pi_exp: u32,
}

impl PiGraded {
    pub fn new(coeff: Rational, pi_exp: u32) -> Self {
        Self { coeff, pi_exp }
    }

    /// Sum of two values of the same π-degree.
    pub fn checked_add(&self, other: &PiGraded) -> Result<PiGraded> {
        if self.pi_exp != other.pi_exp {
            return Err(Error::Domain(format!(
                "cannot add π^{} and π^{} terms",
                self.pi_exp, other.pi_exp
            )));
        }
        Ok(PiGraded::new(&self.coeff + &other.coeff, self.pi_exp))
    }

    pub fn mul(&self, other: &PiGraded) -> PiGraded {
        PiGraded::new(&self.coeff * &other.coeff, self.pi_exp + other.pi_exp)
    }

    /// `self / other`; the π-degree may go negative, so it is returned
    /// separately as a signed exponent.
    pub fn ratio(&self, other: &PiGraded) -> Result<(Rational, i64)> {
        if other.coeff.is_zero() {
            return Err(Error::Domain("division by a zero volume".into()));
        }
        Ok((
            &self.coeff / &other.coeff,
            self.pi_exp as i64 - other.pi_exp as i64,
        ))
    }

    /// Decimal approximation with `digits` digits after the point, using a
    /// stored 250-digit value of π. Approximate by construction.
    pub fn to_decimal(&self, digits: usize) -> String {
        decimal_string(&(&self.coeff * pi_approx().pow(self.pi_exp as i32)), digits)
    }
}

impl fmt::Display for PiGraded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_exp {
            0 => write!(f, "{}", self.coeff),
            1 => write!(f, "{}·π", self.coeff),
            k => write!(f, "{}·π^{}", self.coeff, k),
        }
    }
}

/// Turns a normalized volume into a Weil–Petersson volume:
/// `(2π²)^(n−3)/(n−3)! · v`.
pub fn to_wp_volume(v: &Rational, n: usize) -> Result<PiGraded> {
    if n < 3 {
        return Err(Error::Domain(format!("n = {n}: volumes need n ≥ 3")));
    }
    let d = (n - 3) as u64;
    let scale = Rational::new(BigInt::from(2).pow(d as u32), factorial(d));
    Ok(PiGraded::new(scale * v, 2 * d as u32))
}

const PI_DIGITS: &str = "3.14159265358979323846264338327950288419716939937510582097494459230781640628620899862803482534211706798214808651328230664709384460955058223172535940812848111745028410270193852110555964462294895493038196442881097566593344612847564823378678316527120190914565";

/// π truncated to 250 decimals.
pub fn pi_approx() -> Rational {
    let (int_part, frac) = PI_DIGITS.split_once('.').expect("pi literal");
    let numer: BigInt = format!("{int_part}{frac}").parse().expect("pi literal");
    Rational::new(numer, BigInt::from(10).pow(frac.len() as u32))
}

/// Rounds toward zero to `digits` decimals.
pub fn decimal_string(r: &Rational, digits: usize) -> String {
    let neg = r.is_negative();
    let a = r.abs();
    let scaled = (a * Rational::from_integer(BigInt::from(10).pow(digits as u32))).to_integer();
    let s = scaled.to_string();
    let s = if s.len() <= digits {
        format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
    } else {
        s
    };
    let (ip, fp) = s.split_at(s.len() - digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{ip}")
    } else {
        format!("{sign}{ip}.{fp}")
    }
}

/// Coefficient ring used by the generic recursion and the series module.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync + Zero + One {
    fn from_rational(r: Rational) -> Self;
    fn add_assign_ref(&mut self, other: &Self);
    fn mul_ref(&self, other: &Self) -> Self;
    fn scale(&self, r: &Rational) -> Self;

    fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    fn sub_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_ref(&other.neg());
        out
    }
}

impl Coeff for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(4, 2), int(6));
        assert_eq!(binomial(3, 5), int(0));
        assert_eq!(binomial(0, 0), int(1));
        assert_eq!(binomial(5, -1), int(0));
    }

    #[test]
    fn pascal_rule_up_to_64() {
        for n in 1..=64u64 {
            for k in 1..n as i64 {
                assert_eq!(
                    binomial_int(n, k),
                    binomial_int(n - 1, k - 1) + binomial_int(n - 1, k),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/2").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("-4/6").unwrap(), rat(-2, 3));
        assert_eq!(parse_rational("+7").unwrap(), int(7));
        assert_eq!(format_rational(&rat(6, 3)), "2");
        assert_eq!(format_rational(&rat(-1, 4)), "-1/4");
        for bad in ["", "1/0", "a", "1/-2", "1.5", "1//2", "/3"] {
            let e = parse_rational(bad).unwrap_err();
            assert!(matches!(e, Error::Parse { ref token, .. } if token == bad), "{bad}");
        }
    }

    #[test]
    fn wp_volume_normalization() {
        assert_eq!(to_wp_volume(&int(1), 3).unwrap(), PiGraded::new(int(1), 0));
        assert_eq!(to_wp_volume(&int(1), 4).unwrap(), PiGraded::new(int(2), 2));
        assert_eq!(to_wp_volume(&int(5), 5).unwrap(), PiGraded::new(int(10), 4));
        assert!(matches!(to_wp_volume(&int(1), 2), Err(Error::Domain(_))));
    }

    #[test]
    fn pigraded_json_shape() {
        let v = PiGraded::new(rat(43, 540), 6);
        let js = serde_json::to_string(&v).unwrap();
        assert_eq!(js, r#"{"coeff":"43/540","pi_exp":6}"#);
        let back: PiGraded = serde_json::from_str(&js).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn pigraded_addition_needs_equal_degree() {
        let a = PiGraded::new(int(1), 2);
        let b = PiGraded::new(int(3), 2);
        assert_eq!(a.checked_add(&b).unwrap(), PiGraded::new(int(4), 2));
        assert!(a.checked_add(&PiGraded::new(int(1), 4)).is_err());
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal_string(&rat(1, 3), 4), "0.3333");
        assert_eq!(decimal_string(&rat(-7, 2), 0), "-3");
        assert_eq!(decimal_string(&rat(1, 100), 3), "0.010");
        assert_eq!(PiGraded::new(int(1), 1).to_decimal(10), "3.1415926535");
        assert_eq!(PiGraded::new(int(1), 2).to_decimal(8), "9.86960440");
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn rational_ring_axioms(a in small_rational(), b in small_rational(), c in small_rational()) {
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            prop_assert!(*(&a * &b).denom() > BigInt::zero());
        }

        #[test]
        fn wp_volume_is_linear(a in small_rational(), b in small_rational(), k in small_rational(), n in 3usize..12) {
            let lhs = to_wp_volume(&(&a * &k + &b), n).unwrap();
            let va = to_wp_volume(&a, n).unwrap();
            let vb = to_wp_volume(&b, n).unwrap();
            prop_assert_eq!(lhs.coeff, va.coeff * &k + vb.coeff);
        }

        #[test]
        fn rational_string_round_trip(a in small_rational()) {
            prop_assert_eq!(parse_rational(&format_rational(&a)).unwrap(), a);
        }
    }
}
