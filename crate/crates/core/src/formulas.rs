//! Closed forms for cores and first coefficient ideals of ideals
//! generated by monomials of one degree (two and three variables) and of
//! `S_{>=n}` in weighted polynomial rings.

use std::sync::Arc;

use num_integer::Integer;
use thiserror::Error;

use crate::monomials::{weighted_at_least, ExponentVector, MonomialError, MonomialIdeal, RingContext};
use crate::newton::{self, NewtonError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("exponent {exponent} is not divisible by {delta}")]
    NotDivisible { exponent: u64, delta: u64 },
    #[error("formula stated only for mu = 1, delta = 1")]
    MuDeltaHypothesis,
    #[error("formula stated only for gcd(a, b, c) = 1, got {0}")]
    DeltaHypothesis(u64),
    #[error(
        "closed form requires a = 1 after normalization, got a = {0}; for a > 1 the ideal \
         (S_{{>=3n-b-c}})R can be strictly smaller than the core"
    )]
    NeedsAOne(u64),
    #[error("n = {n} is not a multiple of lcm(weights) = {lcm}")]
    NotMultipleOfLcm { n: u64, lcm: u64 },
    #[error(
        "normality hypothesis not established: n/lcm = {s} < d - 1 and the weights are not \
         pairwise coprime; without normality the closed form can fail (weights 30,35,42 with \
         n = 210 have core strictly between S_{{>=524}} and S_{{>=520}})"
    )]
    NormalityNotEstablished { s: u64 },
    #[error("{0} is not divisible by gcd(n, ks) = {1}")]
    DeltaDoesNotDivide(i64, u64),
    #[error("t too small: no decomposition with alpha >= 0")]
    TooSmall,
    #[error("closed forms disagree: {0}")]
    Inconsistent(&'static str),
    #[error(transparent)]
    Monomial(#[from] MonomialError),
    #[error(transparent)]
    Newton(#[from] NewtonError),
}

/// `I = mu (x^n, y^n, x^{n-k_1} y^{k_1}, ...)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dim2Shape {
    pub ring: Arc<RingContext>,
    pub mu: ExponentVector,
    pub n: u64,
    pub ks: Vec<u64>,
    pub delta: u64,
}

/// `I = (x^n, y^n, z^n, x^{n-k} y^k, x^{n-l} z^l, y^{n-m} z^m)`, with the
/// data of its normalization: exponents divided by `delta = gcd(a, b, c)`
/// and variables relabeled so that `a <= b <= c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dim3Shape {
    pub ring: Arc<RingContext>,
    pub n: u64,
    pub ks: Vec<u64>,
    pub ls: Vec<u64>,
    pub ms: Vec<u64>,
    /// Normalized gcds, `a <= b <= c`, pairwise coprime.
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub delta: u64,
    /// Coordinate `i` of the normalized ideal is coordinate `perm[i]` of
    /// the original.
    pub perm: [usize; 3],
}

impl Dim3Shape {
    /// `n / delta`.
    pub fn normalized_n(&self) -> u64 {
        self.n / self.delta
    }

    fn denormalize(&self, ideal: &MonomialIdeal) -> Result<MonomialIdeal, FormulaError> {
        let mut inv = [0usize; 3];
        for (i, p) in self.perm.iter().enumerate() {
            inv[*p] = i;
        }
        Ok(ideal.permute(&inv).substitute_powers(&[self.delta; 3])?.with_ring(&self.ring))
    }
}

fn gcd_all(values: impl IntoIterator<Item = u64>) -> u64 {
    values.into_iter().fold(0, |g, v| g.gcd(&v))
}

fn single_degree(ideal: &MonomialIdeal) -> Option<u64> {
    let deg = ideal.gens().first()?.degree();
    ideal.gens().iter().all(|g| g.degree() == deg).then_some(deg).and_then(|d| u64::try_from(d).ok())
}

pub fn parse_dim2(ideal: &MonomialIdeal) -> Option<Dim2Shape> {
    if ideal.dim() != 2 || ideal.is_zero() {
        return None;
    }
    let mu = ExponentVector::new(
        (0..2).map(|i| ideal.gens().iter().map(|g| g[i]).min().expect("nonzero ideal")).collect(),
    );
    let reduced = MonomialIdeal::minimalize(ideal.ring(), ideal.gens().iter().map(|g| g.saturating_sub(&mu)));
    let n = single_degree(&reduced)?;
    if n == 0 || !reduced.contains(&[n, 0]) || !reduced.contains(&[0, n]) {
        return None;
    }
    let ks: Vec<u64> = reduced.gens().iter().map(|g| g[1]).filter(|k| *k > 0 && *k < n).collect();
    let mut ks = ks;
    ks.sort_unstable();
    let delta = gcd_all(ks.iter().copied().chain([n]));
    Some(Dim2Shape { ring: ideal.ring().clone(), mu, n, ks, delta })
}

pub fn parse_dim3(ideal: &MonomialIdeal) -> Option<Dim3Shape> {
    if ideal.dim() != 3 {
        return None;
    }
    let n = single_degree(ideal)?;
    if n == 0 || (0..3).any(|i| !ideal.contains(&ExponentVector::pure_power(3, i, n))) {
        return None;
    }
    let (mut ks, mut ls, mut ms) = (Vec::new(), Vec::new(), Vec::new());
    for g in ideal.gens() {
        match (g[0] > 0, g[1] > 0, g[2] > 0) {
            (true, true, false) => ks.push(g[1]),
            (true, false, true) => ls.push(g[2]),
            (false, true, true) => ms.push(g[2]),
            (true, true, true) => return None,
            _ => {}
        }
    }
    for v in [&mut ks, &mut ls, &mut ms] {
        v.sort_unstable();
    }
    let raw = [
        gcd_all(ks.iter().chain(&ls).copied().chain([n])),
        gcd_all(ks.iter().chain(&ms).copied().chain([n])),
        gcd_all(ls.iter().chain(&ms).copied().chain([n])),
    ];
    let delta = gcd_all(raw);
    let mut perm = [0usize, 1, 2];
    perm.sort_by_key(|i| (raw[*i], *i));
    let [a, b, c] = perm.map(|i| raw[i] / delta);
    Some(Dim3Shape { ring: ideal.ring().clone(), n, ks, ls, ms, a, b, c, delta, perm })
}

/// Divides every exponent by `delta`.
pub fn gcd_rescale(ideal: &MonomialIdeal, delta: u64) -> Result<MonomialIdeal, FormulaError> {
    assert!(delta >= 1, "delta must be positive");
    let mut raw = Vec::with_capacity(ideal.gens().len());
    for g in ideal.gens() {
        let mut e = Vec::with_capacity(g.len());
        for x in g.iter() {
            if x % delta != 0 {
                return Err(FormulaError::NotDivisible { exponent: *x, delta });
            }
            e.push(x / delta);
        }
        raw.push(e);
    }
    Ok(MonomialIdeal::minimalize(ideal.ring(), raw))
}

/// `core(I) = mu (x^delta, y^delta)^{2n/delta - 1}`.
pub fn core_dim2(shape: &Dim2Shape) -> Result<MonomialIdeal, FormulaError> {
    let base = MonomialIdeal::pure_powers(&shape.ring, &[shape.delta, shape.delta]);
    Ok(base.power(2 * shape.n / shape.delta - 1)?.shift(&shape.mu)?)
}

/// `Ǐ = m^n`, stated for `mu = 1` and `delta = 1` only.
pub fn fci_dim2(shape: &Dim2Shape) -> Result<MonomialIdeal, FormulaError> {
    if shape.mu.iter().any(|e| *e != 0) || shape.delta != 1 {
        return Err(FormulaError::MuDeltaHypothesis);
    }
    Ok(MonomialIdeal::maximal(&shape.ring).power(shape.n)?)
}

fn normalized_ring(shape: &Dim3Shape) -> Result<Arc<RingContext>, FormulaError> {
    Ok(Arc::new(shape.ring.as_ref().clone().with_weights(vec![shape.a, shape.b, shape.c])?))
}

/// `(S_{>=m})R` for `S = k[x^a, y^b, z^c]`, in the normalized coordinates.
fn at_least_extended(ring: &Arc<RingContext>, shape: &Dim3Shape, m: u64) -> Result<MonomialIdeal, FormulaError> {
    Ok(weighted_at_least(ring, m)?.substitute_powers(&[shape.a, shape.b, shape.c])?)
}

/// `(x, y)^k` in three variables.
fn xy_power(ring: &Arc<RingContext>, k: u64) -> MonomialIdeal {
    MonomialIdeal::minimalize(ring, (0..=k).map(|j| vec![j, k - j, 0]))
}

/// `core(I) = (S_{>=3n-b-c})R` when `a = 1`, checked against the explicit
/// forms for `a = b = 1` and `a = b = c = 1`.
pub fn core_dim3(shape: &Dim3Shape) -> Result<MonomialIdeal, FormulaError> {
    if shape.a != 1 {
        return Err(FormulaError::NeedsAOne(shape.a));
    }
    let (b, c) = (shape.b, shape.c);
    let n = shape.normalized_n();
    let ring = normalized_ring(shape)?;
    let core = at_least_extended(&ring, shape, 3 * n - b - c)?;
    if b == 1 {
        let q = 3 * n / c - 1;
        let mut explicit = MonomialIdeal::minimalize(&ring, [vec![0, 0, q * c]]);
        for i in 0..q {
            explicit = explicit.sum(&xy_power(&ring, (q - i) * c - 1).shift(&[0, 0, i * c])?);
        }
        if explicit != core {
            return Err(FormulaError::Inconsistent("(S_{>=3n-b-c})R differs from the a = b = 1 form"));
        }
        if c == 1 && core != MonomialIdeal::maximal(&ring).power(3 * n - 2)? {
            return Err(FormulaError::Inconsistent("(S_{>=3n-2})R differs from m^{3n-2}"));
        }
    }
    shape.denormalize(&core)
}

/// `Ǐ = (S_{>=n})R` when `a = 1` and `gcd(a, b, c) = 1`, checked against
/// `((x,y)^c, z^c)^{n/c}` when `a = b = 1`.
pub fn fci_dim3(shape: &Dim3Shape) -> Result<MonomialIdeal, FormulaError> {
    if shape.delta != 1 {
        return Err(FormulaError::DeltaHypothesis(shape.delta));
    }
    if shape.a != 1 {
        return Err(FormulaError::NeedsAOne(shape.a));
    }
    let ring = normalized_ring(shape)?;
    let l = at_least_extended(&ring, shape, shape.n)?;
    if shape.b == 1 {
        let c = shape.c;
        let base = xy_power(&ring, c).sum(&MonomialIdeal::minimalize(&ring, [vec![0, 0, c]]));
        if base.power(shape.n / c)? != l {
            return Err(FormulaError::Inconsistent("(S_{>=n})R differs from ((x,y)^c, z^c)^{n/c}"));
        }
    }
    shape.denormalize(&l)
}

/// Why the weighted-core formula applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightedHypothesis {
    /// `n = s · lcm` with `s >= d - 1`.
    LargeMultiple,
    /// Three pairwise coprime weights.
    PairwiseCoprime,
    /// `S_{>=n}` has integrally closed powers up to the given bound only.
    UnverifiedNormality(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedCore {
    /// In the subring coordinates `u_i = x_i^{a_i}`.
    pub core: MonomialIdeal,
    pub hypothesis: WeightedHypothesis,
}

/// `core(S_{>=n}) = S_{>=dn - sum a_i + 1}` for `S = k[x_1^{a_1}, ...]`.
/// `normality_bound` allows a bounded normality check as a last resort.
pub fn weighted_core(
    weights: &[u64],
    n: u64,
    normality_bound: Option<u64>,
) -> Result<WeightedCore, FormulaError> {
    let d = weights.len();
    let ring = Arc::new(
        RingContext::standard(d, crate::scalars::FieldSpec::Rational).with_weights(weights.to_vec())?,
    );
    let lcm = weights.iter().fold(1u64, |l, w| l.lcm(w));
    if !n.is_multiple_of(lcm) {
        return Err(FormulaError::NotMultipleOfLcm { n, lcm });
    }
    let s = n / lcm;
    let coprime = weights.iter().enumerate().all(|(i, a)| weights[i + 1..].iter().all(|b| a.gcd(b) == 1));
    let hypothesis = if s + 1 >= d as u64 {
        WeightedHypothesis::LargeMultiple
    } else if d == 3 && coprime {
        WeightedHypothesis::PairwiseCoprime
    } else {
        match normality_bound {
            Some(t) if newton::is_normal_up_to(&weighted_at_least(&ring, n)?, t)? => {
                WeightedHypothesis::UnverifiedNormality(t)
            }
            _ => return Err(FormulaError::NormalityNotEstablished { s }),
        }
    };
    let sum: u64 = weights.iter().sum();
    let target = (d as u64 * n + 1).checked_sub(sum).ok_or(MonomialError::Overflow)?;
    Ok(WeightedCore { core: weighted_at_least(&ring, target)?, hypothesis })
}

/// `t = alpha n + sum beta_i k_i` with `beta_i >= 0` and
/// `sum beta_i < n / delta`; the lexicographically smallest `beta` wins.
pub fn decompose(t: i64, n: u64, ks: &[u64], require_alpha_nonneg: bool) -> Result<(i64, Vec<u64>), FormulaError> {
    assert!(n >= 1, "n must be positive");
    let delta = gcd_all(ks.iter().copied().chain([n]));
    if t.rem_euclid(delta as i64) != 0 {
        return Err(FormulaError::DeltaDoesNotDivide(t, delta));
    }
    let bound = n / delta;
    let mut beta = vec![0u64; ks.len()];
    loop {
        let used: i128 = beta.iter().zip(ks).map(|(b, k)| *b as i128 * *k as i128).sum();
        let rest = t as i128 - used;
        if rest.rem_euclid(n as i128) == 0 {
            let alpha = (rest / n as i128) as i64;
            if alpha >= 0 || !require_alpha_nonneg {
                return Ok((alpha, beta));
            }
        }
        // Next tuple in lexicographic order with sum < bound.
        let mut i = beta.len();
        loop {
            if i == 0 {
                return Err(FormulaError::TooSmall);
            }
            i -= 1;
            beta[i] += 1;
            if beta.iter().sum::<u64>() < bound {
                break;
            }
            beta[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine;
    use crate::monomials::graded_piece;
    use crate::scalars::FieldSpec;
    use proptest::prelude::*;

    fn ring(d: usize) -> Arc<RingContext> {
        Arc::new(RingContext::standard(d, FieldSpec::Rational))
    }

    fn ideal(r: &Arc<RingContext>, gens: &[&[u64]]) -> MonomialIdeal {
        MonomialIdeal::minimalize(r, gens.iter().map(|g| g.to_vec()))
    }

    fn colon_core(i: &MonomialIdeal) -> MonomialIdeal {
        let rd = engine::find_monomial_reduction(i).unwrap().unwrap();
        engine::core_colon(i, &rd, None).unwrap().core
    }

    #[test]
    fn dim2_parsing() {
        let r = ring(2);
        let s = parse_dim2(&ideal(&r, &[&[4, 0], &[2, 2], &[0, 4]])).unwrap();
        assert_eq!((s.mu.to_vec(), s.n, s.ks.clone(), s.delta), (vec![0, 0], 4, vec![2], 2));
        let s = parse_dim2(&ideal(&r, &[&[4, 0], &[1, 3]])).unwrap();
        assert_eq!((s.mu.to_vec(), s.n, s.ks.clone(), s.delta), (vec![1, 0], 3, vec![], 3));
        assert_eq!(parse_dim2(&ideal(&r, &[&[2, 0], &[1, 1], &[0, 3]])), None);
    }

    #[test]
    fn rescaling() {
        let r = ring(2);
        let i = ideal(&r, &[&[4, 0], &[2, 2], &[0, 4]]);
        assert_eq!(gcd_rescale(&i, 2).unwrap(), ideal(&r, &[&[2, 0], &[1, 1], &[0, 2]]));
        assert_eq!(gcd_rescale(&i, 1).unwrap(), i);
        assert_eq!(gcd_rescale(&ideal(&r, &[&[3, 0], &[0, 3]]), 3).unwrap(), MonomialIdeal::maximal(&r));
        assert!(gcd_rescale(&i, 3).is_err());
    }

    #[test]
    fn dim2_cores() {
        let r = ring(2);
        let m = MonomialIdeal::maximal(&r);
        let m2 = m.power(2).unwrap();
        assert_eq!(core_dim2(&parse_dim2(&m2).unwrap()).unwrap(), m.power(3).unwrap());
        let i = ideal(&r, &[&[4, 0], &[2, 2], &[0, 4]]);
        let expected = MonomialIdeal::pure_powers(&r, &[2, 2]).power(3).unwrap();
        assert_eq!(core_dim2(&parse_dim2(&i).unwrap()).unwrap(), expected);
        assert_eq!(colon_core(&i), expected);
        let shifted = ideal(&r, &[&[4, 0], &[1, 3]]);
        assert_eq!(core_dim2(&parse_dim2(&shifted).unwrap()).unwrap(), shifted);
        let base = ideal(&r, &[&[3, 0], &[0, 3]]);
        assert_eq!(colon_core(&base).shift(&[1, 0]).unwrap(), shifted);
    }

    #[test]
    fn dim2_first_coefficient() {
        let r = ring(2);
        let i = ideal(&r, &[&[3, 0], &[2, 1], &[0, 3]]);
        let m3 = MonomialIdeal::maximal(&r).power(3).unwrap();
        assert_eq!(fci_dim2(&parse_dim2(&i).unwrap()).unwrap(), m3);
        assert_eq!(fci_dim2(&parse_dim2(&m3).unwrap()).unwrap(), m3);
        let even = ideal(&r, &[&[4, 0], &[2, 2], &[0, 4]]);
        assert_eq!(fci_dim2(&parse_dim2(&even).unwrap()), Err(FormulaError::MuDeltaHypothesis));
    }

    #[test]
    fn dim3_parsing_and_normalization() {
        let r = ring(3);
        let i = ideal(
            &r,
            &[&[30, 0, 0], &[0, 30, 0], &[0, 0, 30], &[6, 24, 0], &[10, 0, 20], &[0, 15, 15]],
        );
        let s = parse_dim3(&i).unwrap();
        assert_eq!((s.a, s.b, s.c, s.delta), (2, 3, 5, 1));
        assert!(matches!(core_dim3(&s), Err(FormulaError::NeedsAOne(2))));
        assert!(fci_dim3(&s).is_err());
        // Variables relabeled: x carries the largest gcd here.
        let j = ideal(&r, &[&[4, 0, 0], &[0, 4, 0], &[0, 0, 4], &[2, 2, 0], &[2, 0, 2], &[0, 3, 1]]);
        let s = parse_dim3(&j).unwrap();
        assert_eq!((s.a, s.b, s.c), (1, 1, 2));
        assert_eq!(s.perm, [1, 2, 0]);
        assert_eq!(core_dim3(&s).unwrap(), colon_core(&j));
        assert_eq!(parse_dim3(&ideal(&r, &[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2], &[1, 1, 0], &[0, 0, 1]])), None);
    }

    #[test]
    fn dim3_cores() {
        let r = ring(3);
        let m = MonomialIdeal::maximal(&r);
        for n in 1..=2 {
            let mn = m.power(n).unwrap();
            let s = parse_dim3(&mn).unwrap();
            assert_eq!(core_dim3(&s).unwrap(), m.power(3 * n - 2).unwrap());
            assert_eq!(fci_dim3(&s).unwrap(), mn);
        }
        // m^3 has the three-variable generator xyz.
        assert_eq!(parse_dim3(&m.power(3).unwrap()), None);
        let i = ideal(&r, &[&[3, 0, 0], &[0, 3, 0], &[0, 0, 3], &[2, 1, 0], &[2, 0, 1], &[0, 2, 1]]);
        let s = parse_dim3(&i).unwrap();
        assert_eq!((s.a, s.b, s.c), (1, 1, 1));
        assert_eq!(core_dim3(&s).unwrap(), m.power(7).unwrap());
        assert_eq!(colon_core(&i), m.power(7).unwrap());
        // (x^4, y^4, z^4, x^3 y, x^2 z^2, y^2 z^2): a = b = 1, c = 2.
        let i = ideal(&r, &[&[4, 0, 0], &[0, 4, 0], &[0, 0, 4], &[3, 1, 0], &[2, 0, 2], &[0, 2, 2]]);
        let s = parse_dim3(&i).unwrap();
        assert_eq!((s.a, s.b, s.c), (1, 1, 2));
        let core = core_dim3(&s).unwrap();
        assert_eq!(core, colon_core(&i));
        let mut explicit = ideal(&r, &[&[0, 0, 10]]);
        for k in 0..5u64 {
            explicit = explicit.sum(&xy_power(&r, 2 * (5 - k) - 1).shift(&[0, 0, 2 * k]).unwrap());
        }
        assert_eq!(core, explicit);
        let rd = engine::find_monomial_reduction(&i).unwrap().unwrap();
        let fci = fci_dim3(&s).unwrap();
        assert_eq!(engine::first_coefficient_ideal(&i, &rd).unwrap(), fci);
        let xy2 = xy_power(&r, 2).sum(&ideal(&r, &[&[0, 0, 2]]));
        assert_eq!(fci, xy2.power(2).unwrap());
    }

    #[test]
    fn dim3_rescaled() {
        let r = ring(3);
        // delta = 2: the (x^2,y^2,z^2)-version of m^2.
        let i = MonomialIdeal::maximal(&r).power(2).unwrap().substitute_powers(&[2, 2, 2]).unwrap();
        let s = parse_dim3(&i).unwrap();
        assert_eq!((s.a, s.b, s.c, s.delta), (1, 1, 1, 2));
        assert_eq!(core_dim3(&s).unwrap(), colon_core(&i));
        assert_eq!(fci_dim3(&s), Err(FormulaError::DeltaHypothesis(2)));
    }

    #[test]
    fn weighted_cores() {
        let w = weighted_core(&[1, 1, 1], 2, None).unwrap();
        let r = w.core.ring().clone();
        assert_eq!(w.core, MonomialIdeal::maximal(&r).power(4).unwrap());
        let w = weighted_core(&[2, 3, 5], 30, None).unwrap();
        assert_eq!(w.hypothesis, WeightedHypothesis::PairwiseCoprime);
        assert_eq!(w.core, weighted_at_least(w.core.ring(), 81).unwrap());
        assert!(matches!(
            weighted_core(&[30, 35, 42], 210, None),
            Err(FormulaError::NormalityNotEstablished { s: 1 })
        ));
        assert!(matches!(weighted_core(&[2, 3], 5, None), Err(FormulaError::NotMultipleOfLcm { .. })));
        // s = 1 = d - 1 in two variables.
        let w = weighted_core(&[2, 3], 6, None).unwrap();
        assert_eq!(w.hypothesis, WeightedHypothesis::LargeMultiple);
        assert_eq!(w.core, weighted_at_least(w.core.ring(), 12 - 5 + 1).unwrap());
    }

    #[test]
    fn weighted_core_matches_colon() {
        // S_{>=n} in subring coordinates, colon method with the pure powers.
        for (weights, n) in [(vec![2u64, 3], 6u64), (vec![1, 2, 3], 12), (vec![2, 3, 5], 30)] {
            let w = weighted_core(&weights, n, None).unwrap();
            let i = weighted_at_least(w.core.ring(), n).unwrap();
            assert_eq!(colon_core(&i), w.core, "weights {weights:?}");
        }
    }

    #[test]
    fn graded_piece_has_same_core_in_dim3() {
        let r = ring(3);
        let i = ideal(&r, &[&[4, 0, 0], &[0, 4, 0], &[0, 0, 4], &[3, 1, 0], &[2, 0, 2], &[0, 2, 2]]);
        let s = parse_dim3(&i).unwrap();
        let wr = normalized_ring(&s).unwrap();
        let k = s.denormalize(&graded_piece(&wr, s.n).unwrap().substitute_powers(&[s.a, s.b, s.c]).unwrap()).unwrap();
        assert!(i.is_subset_of(&k));
        assert_eq!(colon_core(&k), colon_core(&i));
    }

    #[test]
    fn decompositions() {
        assert_eq!(decompose(0, 5, &[3], false).unwrap(), (0, vec![0]));
        assert_eq!(decompose(7, 5, &[3], false).unwrap(), (-1, vec![4]));
        assert_eq!(decompose(5, 5, &[3], false).unwrap(), (1, vec![0]));
        assert_eq!(decompose(7, 4, &[2], false), Err(FormulaError::DeltaDoesNotDivide(7, 2)));
        assert_eq!(decompose(1, 5, &[3], true), Err(FormulaError::TooSmall));
        assert_eq!(decompose(12, 4, &[], true).unwrap(), (3, vec![]));
    }

    proptest! {
        #[test]
        fn decomposition_identity(n in 1u64..=12, ks in prop::collection::vec(1u64..12, 0..3), t in -60i64..=60,
                                  nonneg in any::<bool>()) {
            let ks: Vec<u64> = ks.into_iter().filter(|k| *k < n).collect();
            let delta = gcd_all(ks.iter().copied().chain([n]));
            let t = t - t.rem_euclid(delta as i64);
            match decompose(t, n, &ks, nonneg) {
                Ok((alpha, beta)) => {
                    let sum: i64 = alpha * n as i64 + beta.iter().zip(&ks).map(|(b, k)| (b * k) as i64).sum::<i64>();
                    prop_assert_eq!(sum, t);
                    prop_assert!(beta.iter().sum::<u64>() < n / delta);
                    prop_assert!(!nonneg || alpha >= 0);
                }
                Err(e) => {
                    prop_assert!(nonneg);
                    prop_assert_eq!(e, FormulaError::TooSmall);
                }
            }
            // Existence without the sign condition.
            prop_assert!(decompose(t, n, &ks, false).is_ok());
        }
    }
}
