//! Decorations on marked points, admissibility, pair corrections and
//! subset splits.
//!
//! All decoration values are rationals in π-units: a cone point of angle
//! `θ = t·π` carries `t ∈ [0, 2]`, a boundary of length `L = s·π` carries
//! `s ≥ 0`, and a cusp is the common value `0` of both families.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::{format_rational, int, parse_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Conical,
    Boundary,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Conical => "conical",
            Family::Boundary => "boundary",
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conical" => Ok(Family::Conical),
            "boundary" => Ok(Family::Boundary),
            other => Err(Error::Parse {
                token: other.to_string(),
                reason: "family must be `conical` or `boundary`".into(),
            }),
        }
    }
}

/// What sits at a marked point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Decoration {
    Cusp,
    /// Cone angle `t·π`, `0 < t ≤ 2`.
    Cone(Rational),
    /// Boundary length `s·π`, `s > 0`.
    Boundary(Rational),
}

impl Decoration {
    /// A cone point; `t = 0` is a cusp.
    pub fn cone(t: Rational) -> Result<Self> {
        if t.is_negative() || t > int(2) {
            return Err(Error::Domain(format!(
                "cone angle t = {t} (π-units) is outside [0, 2]"
            )));
        }
        Ok(if t.is_zero() {
            Decoration::Cusp
        } else {
            Decoration::Cone(t)
        })
    }

    /// A geodesic boundary; `s = 0` is a cusp.
    pub fn boundary(s: Rational) -> Result<Self> {
        if s.is_negative() {
            return Err(Error::Domain(format!("boundary length s = {s} is negative")));
        }
        Ok(if s.is_zero() {
            Decoration::Cusp
        } else {
            Decoration::Boundary(s)
        })
    }

    /// The π-unit value, `0` for a cusp.
    pub fn value(&self) -> Rational {
        match self {
            Decoration::Cusp => Rational::zero(),
            Decoration::Cone(v) | Decoration::Boundary(v) => v.clone(),
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Decoration::Cusp => "cusp",
            Decoration::Cone(_) => "cone",
            Decoration::Boundary(_) => "boundary",
        }
    }
}

#[derive(Serialize, Deserialize)]
struct DecorationJson {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    t: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    s: Option<String>,
}

impl Serialize for Decoration {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut js = DecorationJson {
            kind: self.kind().to_string(),
            t: None,
            s: None,
        };
        match self {
            Decoration::Cusp => {}
            Decoration::Cone(t) => js.t = Some(format_rational(t)),
            Decoration::Boundary(v) => js.s = Some(format_rational(v)),
        }
        js.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Decoration {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let js = DecorationJson::deserialize(d)?;
        let value = |field: Option<String>, name: &str| -> std::result::Result<Rational, D::Error> {
            let raw = field.ok_or_else(|| D::Error::custom(format!("`{}` mark needs `{name}`", js.kind)))?;
            parse_rational(&raw).map_err(D::Error::custom)
        };
        match js.kind.as_str() {
            "cusp" => Ok(Decoration::Cusp),
            "cone" => Decoration::cone(value(js.t.clone(), "t")?).map_err(D::Error::custom),
            "boundary" => Decoration::boundary(value(js.s.clone(), "s")?).map_err(D::Error::custom),
            other => Err(D::Error::custom(format!("unknown mark kind `{other}`"))),
        }
    }
}

/// Decorations on `n ≥ 3` ordered marks, all of one family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ProfileJson")]
pub struct MarkingProfile {
    family: Family,
    marks: Vec<Decoration>,
}

#[derive(Deserialize)]
struct ProfileJson {
    family: Family,
    marks: Vec<Decoration>,
}

impl TryFrom<ProfileJson> for MarkingProfile {
    type Error = Error;

    fn try_from(js: ProfileJson) -> Result<Self> {
        MarkingProfile::new(js.family, js.marks)
    }
}

impl MarkingProfile {
    pub fn new(family: Family, marks: Vec<Decoration>) -> Result<Self> {
        if marks.len() < 3 {
            return Err(Error::Domain(format!(
                "a profile needs at least 3 marks, got {}",
                marks.len()
            )));
        }
        for m in &marks {
            match (family, m) {
                (_, Decoration::Cusp)
                | (Family::Conical, Decoration::Cone(_))
                | (Family::Boundary, Decoration::Boundary(_)) => {}
                _ => {
                    return Err(Error::Domain(format!(
                        "{} mark in a {} profile: cone and boundary marks cannot be mixed",
                        m.kind(),
                        family.name()
                    )))
                }
            }
        }
        Ok(Self { family, marks })
    }

    /// Conical profile from cone parameters `t_i` (`0` = cusp).
    pub fn conical(ts: &[Rational]) -> Result<Self> {
        let marks = ts.iter().cloned().map(Decoration::cone).collect::<Result<_>>()?;
        Self::new(Family::Conical, marks)
    }

    /// Boundary profile from lengths `s_i` (`0` = cusp).
    pub fn boundary(ss: &[Rational]) -> Result<Self> {
        let marks = ss.iter().cloned().map(Decoration::boundary).collect::<Result<_>>()?;
        Self::new(Family::Boundary, marks)
    }

    /// All-cusp profile tagged with `family`.
    pub fn cusps(family: Family, n: usize) -> Result<Self> {
        Self::new(family, vec![Decoration::Cusp; n])
    }

    pub fn from_values(family: Family, values: &[Rational]) -> Result<Self> {
        match family {
            Family::Conical => Self::conical(values),
            Family::Boundary => Self::boundary(values),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn marks(&self) -> &[Decoration] {
        &self.marks
    }

    pub fn len(&self) -> usize {
        self.marks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.marks.is_empty()
    }

    pub fn values(&self) -> Vec<Rational> {
        self.marks.iter().map(Decoration::value).collect()
    }

    /// Distinct values in increasing order with their multiplicities.
    pub fn classes(&self) -> Vec<(Rational, usize)> {
        value_classes(self.values())
    }

    fn require_conical(&self) -> Result<()> {
        match self.family {
            Family::Conical => Ok(()),
            Family::Boundary => Err(Error::WrongFamily {
                expected: "conical",
                found: "boundary",
            }),
        }
    }

    /// Gauss–Bonnet condition for a hyperbolic cone metric:
    /// `Σ (2 − t_i) > 4`.
    pub fn is_admissible(&self) -> Result<bool> {
        self.require_conical()?;
        Ok(is_admissible_values(self.marks.iter().map(|m| m.value())))
    }

    /// Pairs `{i, j}` (0-based, `i < j`) with `t_i + t_j ≥ 2`, weighted by
    /// `(t_i + t_j − 2)² / 4`.
    pub fn s2_pairs(&self) -> Result<Vec<S2Pair>> {
        self.require_conical()?;
        let vals = self.values();
        let mut out = Vec::new();
        for i in 0..vals.len() {
            for j in i + 1..vals.len() {
                if let Some(weight) = pair_correction(&vals[i], &vals[j]) {
                    out.push(S2Pair { pair: (i, j), weight });
                }
            }
        }
        Ok(out)
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        CanonicalKey::new(self.family, self.values())
    }

    /// Every subset `I` with `|I| = size`, either one per labeled subset or
    /// one per vector of per-class counts.
    pub fn enumerate_splits(&self, size: usize, labeled: bool) -> Result<Vec<Split>> {
        let n = self.len();
        if size < 2 || size + 2 > n {
            return Err(Error::Domain(format!(
                "split size {size} outside [2, {}] for n = {n}",
                n.saturating_sub(2)
            )));
        }
        let classes = self.classes();
        let counts: Vec<usize> = classes.iter().map(|c| c.1).collect();
        let sides = |inside: &[usize]| {
            let mut ins = Vec::new();
            let mut outs = Vec::new();
            for ((v, m), &a) in classes.iter().zip(inside) {
                ins.extend(std::iter::repeat(v.clone()).take(a));
                outs.extend(std::iter::repeat(v.clone()).take(m - a));
            }
            (ins, outs)
        };
        if !labeled {
            return Ok(class_splits(&counts, size)
                .into_iter()
                .map(|(inside_counts, multiplicity)| {
                    let (inside, outside) = sides(&inside_counts);
                    Split {
                        labels: Vec::new(),
                        counts: inside_counts,
                        inside,
                        outside,
                        multiplicity,
                    }
                })
                .collect());
        }
        let vals = self.values();
        let class_of = |v: &Rational| classes.iter().position(|c| &c.0 == v).expect("class");
        let mut out = Vec::new();
        for labels in labeled_subsets(n, size) {
            let mut inside_counts = vec![0; classes.len()];
            for &i in &labels {
                inside_counts[class_of(&vals[i])] += 1;
            }
            let (inside, outside) = sides(&inside_counts);
            out.push(Split {
                labels,
                counts: inside_counts,
                inside,
                outside,
                multiplicity: BigUint::one(),
            });
        }
        Ok(out)
    }
}

impl fmt::Display for MarkingProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values().iter().map(format_rational).collect();
        write!(f, "{}({})", self.family.name(), vals.join(","))
    }
}

/// A weighted pair correction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct S2Pair {
    pub pair: (usize, usize),
    pub weight: Rational,
}

/// A subset `I` of the marks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    /// Mark indices in `I` (labeled mode only).
    pub labels: Vec<usize>,
    /// Number of marks of each value class inside `I`.
    pub counts: Vec<usize>,
    /// Sorted values inside `I`.
    pub inside: Vec<Rational>,
    /// Sorted values outside `I`.
    pub outside: Vec<Rational>,
    /// Number of labeled subsets represented.
    pub multiplicity: BigUint,
}

/// Permutation-invariant identity of a profile: family plus the sorted
/// multiset of values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    pub family: Family,
    pub values: Vec<Rational>,
}

impl CanonicalKey {
    pub fn new(family: Family, mut values: Vec<Rational>) -> Self {
        values.sort();
        Self { family, values }
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(format_rational).collect();
        write!(f, "{}:{}", self.family.name(), vals.join(","))
    }
}

impl FromStr for CanonicalKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (fam, rest) = s.split_once(':').ok_or_else(|| Error::Parse {
            token: s.to_string(),
            reason: "expected `family:v1,v2,...`".into(),
        })?;
        let values = if rest.is_empty() {
            Vec::new()
        } else {
            rest.split(',').map(parse_rational).collect::<Result<_>>()?
        };
        Ok(CanonicalKey::new(fam.parse()?, values))
    }
}

pub fn is_admissible_values(values: impl IntoIterator<Item = Rational>) -> bool {
    let excess: Rational = values.into_iter().map(|t| int(2) - t).sum();
    excess > int(4)
}

/// `(t_a + t_b − 2)² / 4` when `t_a + t_b ≥ 2`, otherwise `None`.
pub fn pair_correction(a: &Rational, b: &Rational) -> Option<Rational> {
    let d = a + b - int(2);
    if d.is_negative() {
        None
    } else {
        Some(&d * &d / int(4))
    }
}

pub fn value_classes(mut values: Vec<Rational>) -> Vec<(Rational, usize)> {
    values.sort();
    let mut out: Vec<(Rational, usize)> = Vec::new();
    for v in values {
        match out.last_mut() {
            Some((last, count)) if *last == v => *count += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

/// All count vectors `a` with `0 ≤ a_r ≤ counts_r` and `Σ a_r = size`,
/// each with multiplicity `Π C(counts_r, a_r)`.
pub fn class_splits(counts: &[usize], size: usize) -> Vec<(Vec<usize>, BigUint)> {
    fn rec(
        counts: &[usize],
        suffix_cap: &[usize],
        r: usize,
        left: usize,
        cur: &mut Vec<usize>,
        mult: BigUint,
        out: &mut Vec<(Vec<usize>, BigUint)>,
    ) {
        if r == counts.len() {
            if left == 0 {
                out.push((cur.clone(), mult));
            }
            return;
        }
        let rest = suffix_cap[r + 1];
        let lo = left.saturating_sub(rest);
        let hi = counts[r].min(left);
        for a in lo..=hi {
            cur.push(a);
            let m = &mult * binomial_u(counts[r], a);
            rec(counts, suffix_cap, r + 1, left - a, cur, m, out);
            cur.pop();
        }
    }
    let mut suffix_cap = vec![0; counts.len() + 1];
    for r in (0..counts.len()).rev() {
        suffix_cap[r] = suffix_cap[r + 1] + counts[r];
    }
    let mut out = Vec::new();
    if size <= suffix_cap[0] {
        rec(counts, &suffix_cap, 0, size, &mut Vec::new(), BigUint::one(), &mut out);
    }
    out
}

fn binomial_u(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Index sets of size `size` drawn from `0..n`, in lexicographic order.
pub fn labeled_subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if size > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        out.push(idx.clone());
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - size + i {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn admissibility_examples() {
        let p = MarkingProfile::conical(&ints(&[0, 0, 0, 0])).unwrap();
        assert!(p.is_admissible().unwrap());
        let p = MarkingProfile::conical(&ints(&[1, 1, 1])).unwrap();
        assert!(!p.is_admissible().unwrap());
        let p = MarkingProfile::conical(&ints(&[1, 1, 1, 1])).unwrap();
        assert!(!p.is_admissible().unwrap());
        let p = MarkingProfile::conical(&ints(&[1, 1, 1, 1, 1])).unwrap();
        assert!(p.is_admissible().unwrap());
    }

    #[test]
    fn boundary_family_rejects_conical_queries() {
        let p = MarkingProfile::boundary(&ints(&[1, 0, 0])).unwrap();
        assert!(matches!(p.is_admissible(), Err(Error::WrongFamily { .. })));
        assert!(matches!(p.s2_pairs(), Err(Error::WrongFamily { .. })));
    }

    #[test]
    fn s2_examples() {
        let p = MarkingProfile::conical(&ints(&[1; 6])).unwrap();
        let pairs = p.s2_pairs().unwrap();
        assert_eq!(pairs.len(), 15);
        assert!(pairs.iter().all(|q| q.weight.is_zero()));

        let p = MarkingProfile::conical(&ints(&[0, 0, 0, 0])).unwrap();
        assert!(p.s2_pairs().unwrap().is_empty());

        // {1,2} carries weight 1/4; the four mixed pairs sit on the wall
        // t_i + t_j = 2 and are members with weight 0
        let p = MarkingProfile::conical(&[rat(3, 2), rat(3, 2), rat(1, 2), rat(1, 2)]).unwrap();
        let pairs = p.s2_pairs().unwrap();
        let weighted: Vec<_> = pairs.iter().filter(|q| !q.weight.is_zero()).collect();
        assert_eq!(
            weighted,
            vec![&S2Pair {
                pair: (0, 1),
                weight: rat(1, 4)
            }]
        );
        let walls: Vec<_> = pairs.iter().filter(|q| q.weight.is_zero()).map(|q| q.pair).collect();
        assert_eq!(walls, vec![(0, 2), (0, 3), (1, 2), (1, 3)]);
    }

    #[test]
    fn construction_rules() {
        assert!(MarkingProfile::conical(&ints(&[0, 0])).is_err());
        assert!(MarkingProfile::conical(&[rat(5, 2), int(0), int(0)]).is_err());
        assert!(MarkingProfile::boundary(&[rat(-1, 2), int(0), int(0)]).is_err());
        assert!(MarkingProfile::conical(&ints(&[2, 0, 0])).is_ok());
        let mixed = vec![
            Decoration::Cone(int(1)),
            Decoration::Boundary(int(1)),
            Decoration::Cusp,
        ];
        assert!(MarkingProfile::new(Family::Conical, mixed.clone()).is_err());
        assert!(MarkingProfile::new(Family::Boundary, mixed).is_err());
    }

    #[test]
    fn canonical_key_examples() {
        let one = || Decoration::cone(int(1)).unwrap();
        let a = MarkingProfile::new(Family::Conical, vec![one(), Decoration::Cusp, one()]).unwrap();
        let b = MarkingProfile::new(Family::Conical, vec![one(), one(), Decoration::Cusp]).unwrap();
        assert_eq!(a.canonical_key(), b.canonical_key());

        let cone = CanonicalKey::new(Family::Conical, vec![int(1), int(0)]);
        let bdry = CanonicalKey::new(Family::Boundary, vec![int(1), int(0)]);
        assert_ne!(cone, bdry);

        let c = MarkingProfile::new(
            Family::Conical,
            vec![Decoration::cone(int(0)).unwrap(), Decoration::Cusp, Decoration::Cusp],
        )
        .unwrap();
        assert_eq!(
            c.canonical_key(),
            MarkingProfile::cusps(Family::Conical, 3).unwrap().canonical_key()
        );
    }

    #[test]
    fn canonical_key_string_round_trip() {
        let k = CanonicalKey::new(Family::Boundary, vec![rat(1, 2), int(0), int(3)]);
        assert_eq!(k.to_string(), "boundary:0,1/2,3");
        assert_eq!(k.to_string().parse::<CanonicalKey>().unwrap(), k);
        assert!("cubic:1".parse::<CanonicalKey>().is_err());
    }

    #[test]
    fn split_examples() {
        let p = MarkingProfile::cusps(Family::Conical, 4).unwrap();
        let s = p.enumerate_splits(2, false).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].multiplicity, BigUint::from(6u32));

        // values (a,a,b,b): brute force over the 6 labeled pairs gives
        // {a,a}: 1, {a,b}: 4, {b,b}: 1
        let p = MarkingProfile::conical(&[rat(1, 2), rat(1, 2), int(1), int(1)]).unwrap();
        let mut got: Vec<(Vec<usize>, u32)> = p
            .enumerate_splits(2, false)
            .unwrap()
            .into_iter()
            .map(|s| (s.counts, s.multiplicity.try_into().unwrap()))
            .collect();
        got.sort();
        assert_eq!(got, vec![(vec![0, 2], 1), (vec![1, 1], 4), (vec![2, 0], 1)]);

        let p = MarkingProfile::boundary(&ints(&[1, 2, 3, 4, 5])).unwrap();
        let s = p.enumerate_splits(2, true).unwrap();
        assert_eq!(s.len(), 10);
        assert!(s.iter().all(|x| x.multiplicity == BigUint::one()));

        assert!(p.enumerate_splits(1, true).is_err());
        assert!(p.enumerate_splits(4, false).is_err());
    }

    #[test]
    fn labeled_subset_counts() {
        for n in 0..9 {
            for k in 0..=n {
                let subs = labeled_subsets(n, k);
                assert_eq!(BigUint::from(subs.len()), binomial_u(n, k));
            }
        }
    }

    #[test]
    fn profile_json() {
        let js = r#"{"family":"conical","marks":[{"kind":"cone","t":"3/2"},{"kind":"cusp"},{"kind":"cone","t":"0"}]}"#;
        let p: MarkingProfile = serde_json::from_str(js).unwrap();
        assert_eq!(p.values(), vec![rat(3, 2), int(0), int(0)]);
        assert_eq!(p.marks()[2], Decoration::Cusp);
        let out = serde_json::to_string(&p).unwrap();
        assert_eq!(
            out,
            r#"{"family":"conical","marks":[{"kind":"cone","t":"3/2"},{"kind":"cusp"},{"kind":"cusp"}]}"#
        );
        let bad = r#"{"family":"boundary","marks":[{"kind":"cone","t":"1"},{"kind":"cusp"},{"kind":"cusp"}]}"#;
        assert!(serde_json::from_str::<MarkingProfile>(bad).is_err());
        let bad = r#"{"family":"conical","marks":[{"kind":"cone","t":"3"},{"kind":"cusp"},{"kind":"cusp"}]}"#;
        assert!(serde_json::from_str::<MarkingProfile>(bad).is_err());
    }
}
