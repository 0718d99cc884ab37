use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;
use wpvol::profiles::{Family, MarkingProfile};
use wpvol::scalars::{binomial_int, int, rat, Rational};

fn values(max_n: usize, top: i64) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((0..=top * 4).prop_map(|k| rat(k, 4)), 3..=max_n)
}

fn shuffled(v: &[Rational], seed: u64) -> Vec<Rational> {
    let mut out = v.to_vec();
    let mut s = seed;
    for i in (1..out.len()).rev() {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        out.swap(i, (s >> 33) as usize % (i + 1));
    }
    out
}

/// A fixed permutation-invariant function of a split, built from
/// per-value weights.
fn split_score(weights: &HashMap<Rational, Rational>, inside: &[Rational], outside: &[Rational]) -> Rational {
    let w = |v: &Rational| weights.get(v).cloned().unwrap_or_else(|| v + int(1));
    let a: Rational = inside.iter().map(w).sum();
    let b: Rational = outside.iter().map(|v| w(v) * w(v)).sum();
    let c: Rational = inside.iter().map(w).product();
    a * b + c
}

proptest! {
    #[test]
    fn multiplicities_count_labeled_subsets(v in values(9, 2)) {
        let p = MarkingProfile::conical(&v).unwrap();
        let n = p.len();
        for size in 2..=n - 2 {
            let reduced = p.enumerate_splits(size, false).unwrap();
            let total: BigUint = reduced.iter().map(|s| s.multiplicity.clone()).sum();
            let expect = binomial_int(n as u64, size as i64);
            prop_assert_eq!(BigInt::from(total), expect.clone());
            prop_assert_eq!(BigInt::from(p.enumerate_splits(size, true).unwrap().len()), expect);
        }
    }

    #[test]
    fn labeled_and_reduced_aggregates_agree(v in values(9, 3), ws in prop::collection::vec(-20i64..20, 13)) {
        let weights: HashMap<Rational, Rational> =
            (0..=12).map(|k| (rat(k, 4), rat(ws[k as usize], 7))).collect();
        let p = MarkingProfile::boundary(&v).unwrap();
        for size in 2..=p.len() - 2 {
            let labeled: Rational = p.enumerate_splits(size, true).unwrap().iter()
                .map(|s| split_score(&weights, &s.inside, &s.outside)).sum();
            let reduced: Rational = p.enumerate_splits(size, false).unwrap().iter()
                .map(|s| Rational::from_integer(s.multiplicity.clone().into()) * split_score(&weights, &s.inside, &s.outside))
                .sum();
            prop_assert_eq!(labeled, reduced);
        }
    }

    #[test]
    fn key_and_admissibility_ignore_order(v in values(9, 2), seed in any::<u64>()) {
        let p = MarkingProfile::conical(&v).unwrap();
        let q = MarkingProfile::conical(&shuffled(&v, seed)).unwrap();
        prop_assert_eq!(p.canonical_key(), q.canonical_key());
        prop_assert_eq!(p.is_admissible().unwrap(), q.is_admissible().unwrap());
        prop_assert_eq!(p.s2_pairs().unwrap().len(), q.s2_pairs().unwrap().len());
    }

    #[test]
    fn profile_json_round_trip(v in values(8, 2), conical in any::<bool>()) {
        let family = if conical { Family::Conical } else { Family::Boundary };
        let p = MarkingProfile::from_values(family, &v).unwrap();
        let back: MarkingProfile = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        prop_assert_eq!(p.canonical_key().to_string().parse::<wpvol::CanonicalKey>().unwrap(), back.canonical_key());
        prop_assert_eq!(back, p);
    }
}

#[test]
fn admissibility_boundary_cases() {
    let four_pi = MarkingProfile::conical(&[int(1), int(1), int(1), int(1)]).unwrap();
    assert!(!four_pi.is_admissible().unwrap());
    let five_pi = MarkingProfile::conical(&vec![int(1); 5]).unwrap();
    assert!(five_pi.is_admissible().unwrap());
    let b = MarkingProfile::boundary(&[int(1), int(0), int(0)]).unwrap();
    assert!(b.is_admissible().is_err());
}

#[test]
fn profile_json_shape() {
    let text = r#"{"family":"conical","marks":[{"kind":"cone","t":"3/2"},{"kind":"cusp"},{"kind":"cone","t":"1"}]}"#;
    let p: MarkingProfile = serde_json::from_str(text).unwrap();
    assert_eq!(p.values(), vec![rat(3, 2), int(0), int(1)]);
    let mixed = r#"{"family":"conical","marks":[{"kind":"boundary","s":"1"},{"kind":"cusp"},{"kind":"cusp"}]}"#;
    assert!(serde_json::from_str::<MarkingProfile>(mixed).is_err());
    let too_wide = r#"{"family":"conical","marks":[{"kind":"cone","t":"5/2"},{"kind":"cusp"},{"kind":"cusp"}]}"#;
    assert!(serde_json::from_str::<MarkingProfile>(too_wide).is_err());
}
