//! Boundary-divisor recursion over value-class states.
//!
//! A state is the multiset of marks on a sphere, stored as sorted
//! `(mark, count)` pairs. Every sub-call appends one cusp to each side of a
//! split, the node of the degenerate curve.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use num_rational::BigRational;
use num_traits::{One, Zero};
use parking_lot::RwLock;
use rayon::prelude::*;

use super::PsiMode;
use crate::profiles::class_splits;
use crate::scalars::{binomial, int, Coeff, Rational};

pub(crate) type ClassState<M> = Vec<(M, usize)>;

/// How marks enter the recursion.
pub(crate) trait MarkRules: Sync {
    type Mark: Clone + Ord + Hash + Eq + Send + Sync + fmt::Debug;
    type Value: Coeff;

    fn cusp(&self) -> Self::Mark;

    /// Coefficient of the ψ-class of a mark in the Weil–Petersson class,
    /// divided by `4π²`: `+L²/4π²` for boundaries, `−θ²/4π²` for cones.
    fn psi_weight(&self, mark: &Self::Mark) -> Self::Value;

    /// Base rule for `n ≥ 4`: volume is zero (inadmissible cone data).
    fn vanishes(&self, state: &[(Self::Mark, usize)]) -> bool;

    /// Pair correction `(t_a + t_b − 2)²/4` when the pair is in `S₂`.
    fn pair_correction(&self, a: &Self::Mark, b: &Self::Mark) -> Option<Rational>;

    /// Mark left at the node when the pair `{a, b}` sits alone on one side
    /// of a split. `None` keeps the cusp.
    fn merged(&self, _a: &Self::Mark, _b: &Self::Mark) -> Option<Self::Mark> {
        None
    }
}

pub(crate) trait StateCache<M, V>: Sync {
    fn lookup(&self, state: &[(M, usize)]) -> Option<V>;
    fn store(&self, state: &[(M, usize)], value: &V);
}

/// Cache private to one computation.
pub(crate) struct LocalCache<M, V>(RwLock<HashMap<ClassState<M>, V>>);

impl<M, V> LocalCache<M, V> {
    pub(crate) fn new() -> Self {
        Self(RwLock::new(HashMap::new()))
    }
}

impl<M, V> StateCache<M, V> for LocalCache<M, V>
where
    M: Clone + Hash + Eq + Send + Sync,
    V: Clone + Send + Sync,
{
    fn lookup(&self, state: &[(M, usize)]) -> Option<V> {
        self.0.read().get(state).cloned()
    }

    fn store(&self, state: &[(M, usize)], value: &V) {
        self.0
            .write()
            .entry(state.to_vec())
            .or_insert_with(|| value.clone());
    }
}

pub(crate) fn normalize<M: Ord>(mut state: Vec<(M, usize)>) -> ClassState<M> {
    state.retain(|(_, c)| *c > 0);
    state.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: ClassState<M> = Vec::with_capacity(state.len());
    for (m, c) in state {
        match out.last_mut() {
            Some((last, count)) if *last == m => *count += c,
            _ => out.push((m, c)),
        }
    }
    out
}

pub(crate) fn state_from_marks<M: Ord + Clone>(marks: &[M]) -> ClassState<M> {
    normalize(marks.iter().map(|m| (m.clone(), 1)).collect())
}

/// Weight of the first (Weil–Petersson class) sum for `|I| = i + 1`:
/// `½ · i(n−i−2)/(n−1) · C(n−4, i−1)`.
pub(crate) fn wp_weight(n: usize, i: usize) -> Rational {
    let (n_, i_) = (n as i64, i as i64);
    BigRational::new((i_ * (n_ - i_ - 2)).into(), (2 * (n_ - 1)).into())
        * binomial(n as u64 - 4, i_ - 1)
}

/// Weight of `Σ_{j∈I} ψ_j` in the averaged form, for `|I| = i + 1`:
/// `C(n−4, i−1) · C(n−i−1, 2) / C(n−1, 2)`, i.e. the number of unordered
/// pairs `{k, ℓ}` outside `I` over the normalization of `PD(ψ_j)`.
pub(crate) fn psi_weight_averaged(n: usize, i: usize) -> Rational {
    binomial(n as u64 - 4, i as i64 - 1) * binomial((n - i - 1) as u64, 2)
        / binomial(n as u64 - 1, 2)
}

pub(crate) struct Reduced<'a, R: MarkRules, C> {
    pub rules: &'a R,
    pub cache: &'a C,
    pub psi_mode: PsiMode,
    pub parallel: bool,
}

const PARALLEL_MIN_MARKS: usize = 9;

impl<'a, R, C> Reduced<'a, R, C>
where
    R: MarkRules,
    C: StateCache<R::Mark, R::Value>,
{
    /// Volume of a normalized state.
    pub fn volume(&self, state: &[(R::Mark, usize)]) -> R::Value {
        let n: usize = state.iter().map(|c| c.1).sum();
        assert!(n >= 3, "recursion reached a sphere with {n} marks");
        if n == 3 {
            return R::Value::one();
        }
        if self.rules.vanishes(state) {
            return R::Value::zero();
        }
        if let Some(v) = self.cache.lookup(state) {
            return v;
        }
        let v = self.compute(state, n);
        self.cache.store(state, &v);
        v
    }

    /// `state` restricted to `inside` counts, plus the node mark.
    fn side(&self, state: &[(R::Mark, usize)], counts: &[usize], node: R::Mark) -> ClassState<R::Mark> {
        let mut s: Vec<(R::Mark, usize)> = state
            .iter()
            .zip(counts)
            .map(|((m, _), &c)| (m.clone(), c))
            .collect();
        s.push((node, 1));
        normalize(s)
    }

    /// Merged node mark when `counts` selects exactly two marks.
    fn merged_pair(&self, state: &[(R::Mark, usize)], counts: &[usize]) -> Option<R::Mark> {
        if counts.iter().sum::<usize>() != 2 {
            return None;
        }
        let mut picked = state
            .iter()
            .zip(counts)
            .flat_map(|((m, _), &c)| std::iter::repeat(m).take(c));
        let a = picked.next()?;
        let b = picked.next()?;
        self.rules.merged(a, b)
    }

    /// `V(I ∪ node) · V(I^c ∪ node)`, with a merged node when one side is a
    /// mergeable pair.
    fn divisor(&self, state: &[(R::Mark, usize)], inside: &[usize], outside: &[usize]) -> R::Value {
        if let Some(m) = self.merged_pair(state, inside) {
            return self.volume(&self.side(state, outside, m));
        }
        if let Some(m) = self.merged_pair(state, outside) {
            return self.volume(&self.side(state, inside, m));
        }
        let left = self.volume(&self.side(state, inside, self.rules.cusp()));
        if left.is_zero() {
            return left;
        }
        let right = self.volume(&self.side(state, outside, self.rules.cusp()));
        left.mul_ref(&right)
    }

    fn compute(&self, state: &[(R::Mark, usize)], n: usize) -> R::Value {
        let counts: Vec<usize> = state.iter().map(|c| c.1).collect();
        let psi: Vec<R::Value> = state.iter().map(|(m, _)| self.rules.psi_weight(m)).collect();

        // (|I|, inside counts, multiplicity, fixed-pair ψ factor)
        let mut work: Vec<(usize, Vec<usize>, Rational, Option<R::Value>)> = Vec::new();
        for size in 2..=n - 2 {
            for (a, mult) in class_splits(&counts, size) {
                work.push((size, a, Rational::from_integer(mult.into()), None));
            }
        }
        if self.psi_mode == PsiMode::FixedPair {
            // One representative j per class; k(j), ℓ(j) are the first two
            // marks other than j in sorted order.
            let flat: Vec<usize> = counts
                .iter()
                .enumerate()
                .flat_map(|(r, &m)| std::iter::repeat(r).take(m))
                .collect();
            for (r, w) in psi.iter().enumerate() {
                if w.is_zero() {
                    continue;
                }
                let j_pos = flat.iter().position(|&x| x == r).expect("class present");
                let mut rest = counts.clone();
                rest[r] -= 1;
                for &x in flat.iter().enumerate().filter(|(p, _)| *p != j_pos).map(|(_, x)| x).take(2) {
                    rest[x] -= 1;
                }
                let factor = w.scale(&int(counts[r] as i64));
                for size in 2..=n - 2 {
                    for (mut a, mult) in class_splits(&rest, size - 1) {
                        a[r] += 1;
                        work.push((size, a, Rational::from_integer(mult.into()), Some(factor.clone())));
                    }
                }
            }
        }

        let term = |(size, a, mult, fixed): &(usize, Vec<usize>, Rational, Option<R::Value>)| {
            let i = size - 1;
            let out_counts: Vec<usize> = counts.iter().zip(a).map(|(m, x)| m - x).collect();
            let d = self.divisor(state, a, &out_counts);
            if d.is_zero() {
                return d;
            }
            let weight = match fixed {
                Some(f) => f.scale(&binomial(n as u64 - 4, i as i64 - 1)),
                None => {
                    let mut w = R::Value::from_rational(wp_weight(n, i));
                    if self.psi_mode == PsiMode::AveragedUnordered {
                        let mut in_psi = R::Value::zero();
                        for (r, &x) in a.iter().enumerate() {
                            if x > 0 && !psi[r].is_zero() {
                                in_psi.add_assign_ref(&psi[r].scale(&int(x as i64)));
                            }
                        }
                        if !in_psi.is_zero() {
                            w.add_assign_ref(&in_psi.scale(&psi_weight_averaged(n, i)));
                        }
                    }
                    w
                }
            };
            d.mul_ref(&weight).scale(mult)
        };

        let mut total = if self.parallel && n >= PARALLEL_MIN_MARKS {
            work.par_iter().map(term).reduce(R::Value::zero, |mut x, y| {
                x.add_assign_ref(&y);
                x
            })
        } else {
            let mut acc = R::Value::zero();
            for w in &work {
                acc.add_assign_ref(&term(w));
            }
            acc
        };

        // pair corrections: I = {a, b} ∈ S₂, sub-sphere carries I^c plus the node
        for r in 0..state.len() {
            for s in r..state.len() {
                let pairs = if r == s {
                    counts[r] * counts[r].saturating_sub(1) / 2
                } else {
                    counts[r] * counts[s]
                };
                if pairs == 0 {
                    continue;
                }
                let Some(w) = self.rules.pair_correction(&state[r].0, &state[s].0) else {
                    continue;
                };
                if w.is_zero() {
                    continue;
                }
                let mut rest = counts.clone();
                rest[r] -= 1;
                rest[s] -= 1;
                let node = self
                    .rules
                    .merged(&state[r].0, &state[s].0)
                    .unwrap_or_else(|| self.rules.cusp());
                let v = self.volume(&self.side(state, &rest, node));
                total.add_assign_ref(&v.scale(&(w * int(pairs as i64))));
            }
        }
        total
    }
}

/// Labeled oracle: every subset `I` and every `(j, {k, ℓ})` enumerated
/// literally, sub-spheres memoized on the exact ordered mark list.
pub(crate) struct Naive<'a, R: MarkRules> {
    pub rules: &'a R,
    pub psi_mode: PsiMode,
    memo: RwLock<HashMap<Vec<R::Mark>, R::Value>>,
}

impl<'a, R: MarkRules> Naive<'a, R> {
    pub fn new(rules: &'a R, psi_mode: PsiMode) -> Self {
        Self {
            rules,
            psi_mode,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn volume(&self, marks: &[R::Mark]) -> R::Value {
        let n = marks.len();
        assert!(n >= 3);
        if n == 3 {
            return R::Value::one();
        }
        if self.rules.vanishes(&state_from_marks(marks)) {
            return R::Value::zero();
        }
        if let Some(v) = self.memo.read().get(marks) {
            return v.clone();
        }
        let v = self.compute(marks);
        self.memo.write().insert(marks.to_vec(), v.clone());
        v
    }

    fn compute(&self, marks: &[R::Mark]) -> R::Value {
        let n = marks.len();
        let full: u64 = (1u64 << n) - 1;
        let pick = |mask: u64, node: R::Mark| -> Vec<R::Mark> {
            let mut v: Vec<R::Mark> = (0..n)
                .filter(|&b| mask >> b & 1 == 1)
                .map(|b| marks[b].clone())
                .collect();
            v.push(node);
            v
        };
        let merged = |mask: u64| -> Option<R::Mark> {
            if mask.count_ones() != 2 {
                return None;
            }
            let a = mask.trailing_zeros() as usize;
            let b = 63 - mask.leading_zeros() as usize;
            self.rules.merged(&marks[a], &marks[b])
        };
        // V(I, node) · V(I^c, node) for every admissible subset size
        let mut products: HashMap<u64, R::Value> = HashMap::new();
        for mask in 1..full {
            let size = mask.count_ones() as usize;
            if size < 2 || size > n - 2 {
                continue;
            }
            let rest = full & !mask;
            let v = if let Some(m) = merged(mask) {
                self.volume(&pick(rest, m))
            } else if let Some(m) = merged(rest) {
                self.volume(&pick(mask, m))
            } else {
                let left = self.volume(&pick(mask, self.rules.cusp()));
                let right = self.volume(&pick(rest, self.rules.cusp()));
                left.mul_ref(&right)
            };
            products.insert(mask, v);
        }
        let c_n1_2 = binomial(n as u64 - 1, 2);

        let mut total = R::Value::zero();
        for (&mask, vv) in &products {
            let i = mask.count_ones() as usize - 1;
            total.add_assign_ref(&vv.scale(&wp_weight(n, i)));
        }

        for j in 0..n {
            let w = self.rules.psi_weight(&marks[j]);
            if w.is_zero() {
                continue;
            }
            let others: Vec<usize> = (0..n).filter(|&x| x != j).collect();
            let pairs: Vec<(usize, usize)> = match self.psi_mode {
                PsiMode::AveragedUnordered => others
                    .iter()
                    .enumerate()
                    .flat_map(|(p, &k)| others[p + 1..].iter().map(move |&l| (k, l)))
                    .collect(),
                PsiMode::FixedPair => vec![(others[0], others[1])],
            };
            for (k, l) in pairs {
                for (&mask, vv) in &products {
                    if mask >> j & 1 == 0 || mask >> k & 1 == 1 || mask >> l & 1 == 1 {
                        continue;
                    }
                    let i = mask.count_ones() as usize - 1;
                    let mut c = binomial(n as u64 - 4, i as i64 - 1);
                    if self.psi_mode == PsiMode::AveragedUnordered {
                        c /= &c_n1_2;
                    }
                    total.add_assign_ref(&vv.mul_ref(&w).scale(&c));
                }
            }
        }

        for a in 0..n {
            for b in a + 1..n {
                let Some(w) = self.rules.pair_correction(&marks[a], &marks[b]) else {
                    continue;
                };
                let rest: u64 = full & !(1 << a) & !(1 << b);
                let node = merged((1 << a) | (1 << b)).unwrap_or_else(|| self.rules.cusp());
                let v = self.volume(&pick(rest, node));
                total.add_assign_ref(&v.scale(&w));
            }
        }
        total
    }
}

pub(crate) fn one_half() -> Rational {
    BigRational::new(One::one(), 2.into())
}
