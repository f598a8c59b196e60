//! Cores, first coefficient ideals and adjoints of zero-dimensional
//! monomial ideals.
//!
//! Two independent routes to the core are provided: the colon formula
//! `core(I) = (J^{<t+1>}) : I^{dt}` for a pure-power reduction `J`, and the
//! mono route `core(I) = mono(K)` for a general locally minimal reduction
//! `K` built from random coefficients.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::grobner::{mono, GrobnerError, MonomialOrder, PolyIdeal, Polynomial};
use crate::monomials::{ExponentVector, MonomialError, MonomialIdeal};
use crate::newton::{self, NewtonError};

/// Safety cap for the reduction-number search.
pub const REDUCTION_CAP: u64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("not a reduction (or r > {0})")]
    NotAReduction(u64),
    #[error("no monomial reduction: the pure powers do not form a reduction")]
    NoMonomialReduction,
    #[error("genericity failure: enlarge field or re-seed")]
    Genericity,
    #[error("adjoint oracle disagreement")]
    AdjointDisagreement { colon: MonomialIdeal, howald: MonomialIdeal },
    #[error("colon formula not stable between {0} and {1}")]
    Unstable(u64, u64),
    #[error("containment guard violated: {0}")]
    Guard(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("core_mono needs at least 2 seeds")]
    TooFewSeeds,
    #[error(transparent)]
    Monomial(#[from] MonomialError),
    #[error(transparent)]
    Newton(#[from] NewtonError),
    #[error(transparent)]
    Grobner(#[from] GrobnerError),
}

/// A pure-power reduction `J` of `I` together with its reduction number
/// and the linkage powers `x_i^{d n_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionData {
    pub j: MonomialIdeal,
    pub r: u64,
    pub alpha: Vec<ExponentVector>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoreMethod {
    Mono,
    Colon,
}

impl CoreMethod {
    pub fn name(&self) -> &'static str {
        match self {
            CoreMethod::Mono => "mono",
            CoreMethod::Colon => "colon",
        }
    }
}

/// Which hypotheses of the core theorems were checked and found to hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ValidityFlags {
    /// `char = 0` or `char > r`.
    pub char_condition: bool,
    pub equigenerated: bool,
    pub reduction_found: bool,
    /// For the mono route: the first two seeds agreed.
    pub seed_agreement: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreReport {
    pub core: MonomialIdeal,
    pub method: CoreMethod,
    /// `t` for the colon route.
    pub t: Option<u64>,
    /// Seeds whose trials were computed, in order.
    pub seeds: Vec<u64>,
    pub characteristic: u64,
    pub flags: ValidityFlags,
}

impl CoreReport {
    /// Whether the theorem behind the method applies.
    pub fn is_valid(&self) -> bool {
        match self.method {
            CoreMethod::Colon => {
                self.flags.reduction_found && (self.flags.char_condition || self.flags.equigenerated)
            }
            CoreMethod::Mono => true,
        }
    }
}

/// Tries `J = (x_1^{n_1}, ..., x_d^{n_d})`.
pub fn find_monomial_reduction(ideal: &MonomialIdeal) -> Result<Option<ReductionData>, EngineError> {
    let n = ideal.pure_power_exponents()?;
    let j = MonomialIdeal::pure_powers(ideal.ring(), &n);
    let np = newton::NewtonPolyhedron::new(&j)?;
    for g in ideal.gens() {
        let p: Vec<_> = g.iter().map(|c| num_rational::BigRational::from_integer((*c).into())).collect();
        if !np.contains(&p)? {
            return Ok(None);
        }
    }
    let r = reduction_number(&j, ideal)?;
    let d = ideal.dim() as u64;
    let alpha = n
        .iter()
        .enumerate()
        .map(|(i, k)| {
            k.checked_mul(d)
                .map(|e| ExponentVector::pure_power(n.len(), i, e))
                .ok_or(MonomialError::Overflow)
        })
        .collect::<Result<_, _>>()?;
    Ok(Some(ReductionData { j, r, alpha }))
}

/// The least `r <= REDUCTION_CAP` with `I^{r+1} = J I^r`.
pub fn reduction_number(j: &MonomialIdeal, ideal: &MonomialIdeal) -> Result<u64, EngineError> {
    let mut power = MonomialIdeal::unit(ideal.ring());
    for r in 0..=REDUCTION_CAP {
        let next = power.product(ideal)?;
        if next == j.product(&power)? {
            return Ok(r);
        }
        power = next;
    }
    Err(EngineError::NotAReduction(REDUCTION_CAP))
}

/// `(J^{<t+1>}) : (I^{dt} + J^{<t+1>})`.
fn colon_formula(ideal: &MonomialIdeal, j: &MonomialIdeal, t: u64) -> Result<MonomialIdeal, EngineError> {
    let d = ideal.dim() as u64;
    let bracket = j.bracket_power(t + 1)?;
    let power = ideal.power(d * t)?;
    Ok(bracket.colon(&power.sum(&bracket))?)
}

/// The core by the colon formula at `t` (default `r`), re-checked at `t + 1`.
pub fn core_colon(
    ideal: &MonomialIdeal,
    rd: &ReductionData,
    t: Option<u64>,
) -> Result<CoreReport, EngineError> {
    let t = t.unwrap_or(rd.r);
    if t < rd.r {
        return Err(EngineError::InvalidArgument(format!("t = {t} is below the reduction number {}", rd.r)));
    }
    let core = colon_formula(ideal, &rd.j, t)?;
    if colon_formula(ideal, &rd.j, t + 1)? != core {
        return Err(EngineError::Unstable(t, t + 1));
    }
    if !core.is_subset_of(ideal) {
        return Err(EngineError::Guard("core is not contained in the ideal"));
    }
    let characteristic = ideal.ring().field().characteristic();
    Ok(CoreReport {
        core,
        method: CoreMethod::Colon,
        t: Some(t),
        seeds: Vec::new(),
        characteristic,
        flags: ValidityFlags {
            char_condition: characteristic == 0 || characteristic > rd.r,
            equigenerated: ideal.is_equigenerated(),
            reduction_found: true,
            seed_agreement: false,
        },
    })
}

/// `K = (d general combinations of the generators, x_i^{d n_i})`, over a
/// field large enough to sample general coefficients from.
pub fn random_locally_minimal_reduction(ideal: &MonomialIdeal, seed: u64) -> Result<PolyIdeal, EngineError> {
    let n = ideal.pure_power_exponents()?;
    let d = ideal.dim();
    let field = ideal.ring().field().generic_extension();
    let ring = Arc::new(ideal.ring().as_ref().clone().with_field(field.clone()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gens = Vec::with_capacity(2 * d);
    for _ in 0..d {
        let terms: Vec<(ExponentVector, _)> =
            ideal.gens().iter().map(|g| (g.clone(), field.sample_nonzero(&mut rng))).collect();
        gens.push(Polynomial::from_terms(terms, &field, MonomialOrder::DEGREVLEX));
    }
    for (i, k) in n.iter().enumerate() {
        let e = k.checked_mul(d as u64).ok_or(MonomialError::Overflow)?;
        gens.push(Polynomial::monomial(ExponentVector::pure_power(d, i, e), field.one()));
    }
    Ok(PolyIdeal::new(&ring, gens))
}

/// `mono(K)` for the reduction built from one seed.
pub fn core_mono_trial(ideal: &MonomialIdeal, seed: u64) -> Result<MonomialIdeal, EngineError> {
    let k = random_locally_minimal_reduction(ideal, seed)?;
    let d = ideal.dim() as u64;
    let n = ideal.pure_power_exponents()?;
    let alpha: Vec<u64> = n.iter().map(|x| x * d).collect();
    let beta = MonomialIdeal::pure_powers(k.ring(), &alpha);
    Ok(mono(&k, &beta)?.with_ring(ideal.ring()))
}

/// The core by the mono route, accepted once two seeds agree (the first
/// two, or a 2-of-3 majority with the third).
pub fn core_mono(ideal: &MonomialIdeal, seeds: &[u64]) -> Result<CoreReport, EngineError> {
    if seeds.len() < 2 {
        return Err(EngineError::TooFewSeeds);
    }
    let first = core_mono_trial(ideal, seeds[0])?;
    let second = core_mono_trial(ideal, seeds[1])?;
    let (core, used, agreed) = if first == second {
        (first, 2, true)
    } else {
        let third = match seeds.get(2) {
            Some(s) => core_mono_trial(ideal, *s)?,
            None => return Err(EngineError::Genericity),
        };
        if third == first || third == second {
            (third, 3, false)
        } else {
            return Err(EngineError::Genericity);
        }
    };
    if !core.is_subset_of(ideal) {
        return Err(EngineError::Guard("mono output is not contained in the ideal"));
    }
    Ok(CoreReport {
        core,
        method: CoreMethod::Mono,
        t: None,
        seeds: seeds[..used].to_vec(),
        characteristic: ideal.ring().field().characteristic(),
        flags: ValidityFlags {
            char_condition: true,
            equigenerated: ideal.is_equigenerated(),
            reduction_found: false,
            seed_agreement: agreed,
        },
    })
}

fn fci_at(ideal: &MonomialIdeal, j: &MonomialIdeal, s: u64) -> Result<MonomialIdeal, EngineError> {
    Ok(j.colon(&j.power(s)?.colon(&ideal.power(s)?)?)?)
}

/// The first coefficient ideal `J : (J^s : I^s)` at `s = r`, re-checked at
/// `s + 1` and guarded by `I ⊆ Ǐ ⊆ closure(I)`.
pub fn first_coefficient_ideal(ideal: &MonomialIdeal, rd: &ReductionData) -> Result<MonomialIdeal, EngineError> {
    let s = rd.r;
    let out = fci_at(ideal, &rd.j, s)?;
    if fci_at(ideal, &rd.j, s + 1)? != out {
        return Err(EngineError::Unstable(s, s + 1));
    }
    if !ideal.is_subset_of(&out) || !out.is_subset_of(&newton::integral_closure(ideal)?) {
        return Err(EngineError::Guard("first coefficient ideal outside I ⊆ Ǐ ⊆ closure(I)"));
    }
    Ok(out)
}

fn default_adjoint_t(ideal: &MonomialIdeal, rd: &ReductionData, t: Option<u64>) -> Result<u64, EngineError> {
    let low = rd.r.max(ideal.dim() as u64 - 1);
    let t = t.unwrap_or(low);
    if t < low {
        return Err(EngineError::InvalidArgument(format!("t = {t} is below max(r, d - 1) = {low}")));
    }
    Ok(t)
}

/// `adj(I^d) = (J^{<t+1>}) : closure(I^{dt})`, compared against Howald's
/// description.
pub fn adjoint_colon(ideal: &MonomialIdeal, rd: &ReductionData, t: Option<u64>) -> Result<MonomialIdeal, EngineError> {
    let t = default_adjoint_t(ideal, rd, t)?;
    let d = ideal.dim() as u64;
    let colon = rd.j.bracket_power(t + 1)?.colon(&newton::closure_of_power(ideal, d * t)?)?;
    let howald = newton::adjoint(ideal, d)?;
    if colon != howald {
        return Err(EngineError::AdjointDisagreement { colon, howald });
    }
    Ok(colon)
}

/// `closure(I^{dt}) ⊆ I^{dt} + J^{<t+1>}`.
pub fn check_adj_hypothesis(ideal: &MonomialIdeal, rd: &ReductionData, t: u64) -> Result<bool, EngineError> {
    let t = default_adjoint_t(ideal, rd, Some(t))?;
    let d = ideal.dim() as u64;
    let closed = newton::closure_of_power(ideal, d * t)?;
    let target = ideal.power(d * t)?.sum(&rd.j.bracket_power(t + 1)?);
    Ok(closed.is_subset_of(&target))
}

/// `J^{t+i} : I^t = (J^{<t+i>}) : I^{dt + (d-1)(i-1)}`.
pub fn check_colon_lemma(ideal: &MonomialIdeal, rd: &ReductionData, t: u64, i: u64) -> Result<bool, EngineError> {
    if t < rd.r || t + i == 0 {
        return Err(EngineError::InvalidArgument("need t >= r and t + i >= 1".to_string()));
    }
    let d = ideal.dim() as i128;
    let e = d * t as i128 + (d - 1) * (i as i128 - 1);
    if e < 0 {
        return Err(EngineError::InvalidArgument("negative exponent in the colon lemma".to_string()));
    }
    let lhs = rd.j.power(t + i)?.colon(&ideal.power(t)?)?;
    let rhs = rd.j.bracket_power(t + i)?.colon(&ideal.power(e as u64)?)?;
    Ok(lhs == rhs)
}

/// `J^{s+i} : I^s = J^i (J^s : I^s)` for `0 <= i <= i_max`.
pub fn check_comes_out(ideal: &MonomialIdeal, rd: &ReductionData, s: u64, i_max: u64) -> Result<bool, EngineError> {
    if s < rd.r {
        return Err(EngineError::InvalidArgument("need s >= r".to_string()));
    }
    let is = ideal.power(s)?;
    let base = rd.j.power(s)?.colon(&is)?;
    for i in 0..=i_max {
        let lhs = rd.j.power(s + i)?.colon(&is)?;
        if lhs != rd.j.power(i)?.product(&base)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomials::RingContext;
    use crate::scalars::FieldSpec;

    fn ring(d: usize, field: FieldSpec) -> Arc<RingContext> {
        Arc::new(RingContext::standard(d, field))
    }

    fn ideal(r: &Arc<RingContext>, gens: &[&[u64]]) -> MonomialIdeal {
        MonomialIdeal::minimalize(r, gens.iter().map(|g| g.to_vec()))
    }

    fn ex2(field: FieldSpec) -> MonomialIdeal {
        ideal(&ring(2, field), &[&[6, 0], &[5, 3], &[4, 4], &[2, 8], &[0, 9]])
    }

    fn ex2_core(r: &Arc<RingContext>) -> MonomialIdeal {
        ideal(
            r,
            &[&[10, 0], &[9, 1], &[8, 2], &[7, 5], &[6, 6], &[4, 9], &[3, 10], &[2, 11], &[1, 14], &[0, 15]],
        )
    }

    #[test]
    fn ex2_reduction_and_colon_core() {
        let i = ex2(FieldSpec::Rational);
        let rd = find_monomial_reduction(&i).unwrap().unwrap();
        assert_eq!(rd.j, MonomialIdeal::pure_powers(i.ring(), &[6, 9]));
        assert_eq!(rd.r, 2);
        assert_eq!(rd.alpha, vec![ExponentVector::new(vec![12, 0]), ExponentVector::new(vec![0, 18])]);
        let report = core_colon(&i, &rd, None).unwrap();
        assert_eq!(report.core, ex2_core(i.ring()));
        assert!(report.is_valid());
        // J^3 : I^2 form.
        assert_eq!(rd.j.power(3).unwrap().colon(&i.power(2).unwrap()).unwrap(), report.core);
    }

    #[test]
    fn ex2_mono_large_characteristic() {
        let i = ex2(FieldSpec::Prime(65537));
        let report = core_mono(&i, &[1, 2, 3]).unwrap();
        assert_eq!(report.core, ex2_core(i.ring()));
        assert!(report.flags.seed_agreement);
    }

    #[test]
    fn ex2_mono_characteristic_two() {
        let i = ex2(FieldSpec::Prime(2));
        let report = core_mono(&i, &[1, 2, 3]).unwrap();
        let expected = ideal(
            i.ring(),
            &[&[10, 0], &[8, 1], &[7, 5], &[6, 6], &[4, 9], &[3, 10], &[2, 11], &[1, 14], &[0, 15]],
        );
        assert_eq!(report.core, expected);
        let rd = find_monomial_reduction(&i).unwrap().unwrap();
        let colon = core_colon(&i, &rd, None).unwrap();
        assert!(!colon.is_valid());
        assert!(colon.core.is_subset_of(&report.core) && colon.core != report.core);
    }

    #[test]
    fn no_pure_power_reduction() {
        let i = ideal(&ring(2, FieldSpec::Rational), &[&[4, 0], &[0, 4], &[1, 1]]);
        assert_eq!(find_monomial_reduction(&i).unwrap(), None);
    }

    #[test]
    fn reduction_numbers() {
        let r = ring(2, FieldSpec::Rational);
        let i = ideal(&r, &[&[3, 0], &[0, 3]]);
        assert_eq!(reduction_number(&i, &i).unwrap(), 0);
        // Brute force over degree-k monomials of m^n: degree (k+1)n members
        // of m^{(k+1)n} are all divisible by x^n or y^n times a degree kn
        // monomial as soon as k >= 1, so r = 1 for n >= 2.
        let m = MonomialIdeal::maximal(&r);
        for n in 1..=5u64 {
            let mn = m.power(n).unwrap();
            let j = MonomialIdeal::pure_powers(&r, &[n, n]);
            let brute = (0..)
                .find(|k: &u64| {
                    let deg = (k + 1) * n;
                    (0..=deg).all(|a| {
                        let b = deg - a;
                        (a >= n && a - n + b >= k * n) || (b >= n && b - n + a >= k * n)
                    })
                })
                .unwrap();
            assert_eq!(reduction_number(&j, &mn).unwrap(), brute);
            assert_eq!(brute, if n == 1 { 0 } else { 1 });
        }
        let not_reduction = ideal(&r, &[&[4, 0], &[0, 4]]);
        let big = ideal(&r, &[&[4, 0], &[0, 4], &[1, 1]]);
        assert_eq!(reduction_number(&not_reduction, &big), Err(EngineError::NotAReduction(REDUCTION_CAP)));
    }

    #[test]
    fn core_of_maximal_square() {
        let r = ring(2, FieldSpec::Prime(65537));
        let m = MonomialIdeal::maximal(&r);
        let m2 = m.power(2).unwrap();
        let rd = find_monomial_reduction(&m2).unwrap().unwrap();
        let m3 = m.power(3).unwrap();
        assert_eq!(core_colon(&m2, &rd, None).unwrap().core, m3);
        assert_eq!(core_mono(&m2, &[7, 8, 9]).unwrap().core, m3);
    }

    #[test]
    fn ex3_closure_of_pure_powers() {
        let r = ring(3, FieldSpec::Rational);
        let i = newton::integral_closure(&MonomialIdeal::pure_powers(&r, &[3, 4, 5])).unwrap();
        let rd = find_monomial_reduction(&i).unwrap().unwrap();
        assert_eq!(rd.r, 2);
        let core = core_colon(&i, &rd, None).unwrap().core;
        let m = MonomialIdeal::maximal(&r);
        assert_eq!(core, m.product(&i.power(2).unwrap()).unwrap());
        assert!(!newton::is_integrally_closed(&core).unwrap());
        assert_ne!(newton::adjoint(&i, 3).unwrap(), core);
        assert!(!check_adj_hypothesis(&i, &rd, 2).unwrap());
    }

    #[test]
    fn first_coefficient_ideals() {
        let r = ring(2, FieldSpec::Rational);
        let i = ideal(&r, &[&[3, 0], &[2, 1], &[0, 3]]);
        let rd = find_monomial_reduction(&i).unwrap().unwrap();
        let m3 = MonomialIdeal::maximal(&r).power(3).unwrap();
        assert_eq!(first_coefficient_ideal(&i, &rd).unwrap(), m3);
        let rd = find_monomial_reduction(&m3).unwrap().unwrap();
        assert_eq!(first_coefficient_ideal(&m3, &rd).unwrap(), m3);
    }

    #[test]
    fn adjoints_by_colon() {
        let r = ring(2, FieldSpec::Rational);
        let m = MonomialIdeal::maximal(&r);
        for n in 1..=4 {
            let mn = m.power(n).unwrap();
            let rd = find_monomial_reduction(&mn).unwrap().unwrap();
            assert_eq!(adjoint_colon(&mn, &rd, None).unwrap(), m.power(2 * n - 1).unwrap());
            assert!(check_adj_hypothesis(&mn, &rd, rd.r.max(1)).unwrap());
        }
    }

    #[test]
    fn colon_lemma_and_comes_out_on_ex2() {
        let i = ex2(FieldSpec::Rational);
        let rd = find_monomial_reduction(&i).unwrap().unwrap();
        assert!(check_colon_lemma(&i, &rd, 2, 1).unwrap());
        assert!(check_colon_lemma(&i, &rd, 3, 0).unwrap());
        assert!(check_comes_out(&i, &rd, 2, 3).unwrap());
        assert!(check_comes_out(&i, &rd, 2, 0).unwrap());
        assert!(check_colon_lemma(&i, &rd, 1, 1).is_err());
    }

    #[test]
    fn mono_reduction_shape() {
        let i = ex2(FieldSpec::Prime(65537));
        let k = random_locally_minimal_reduction(&i, 5).unwrap();
        assert_eq!(k.gens().len(), 4);
        assert!(k.gens()[2..].iter().all(|g| g.as_monomial().is_some()));
        let again = random_locally_minimal_reduction(&i, 5).unwrap();
        assert_eq!(k.gens(), again.gens());
        let monos: Vec<_> = k.gens()[2..].iter().map(|g| g.as_monomial().unwrap().to_vec()).collect();
        assert!(monos.contains(&vec![12, 0]) && monos.contains(&vec![0, 18]));
    }
}
