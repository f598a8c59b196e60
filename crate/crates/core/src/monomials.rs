//! Monomial ideals and their combinatorial arithmetic.
//!
//! A monomial ideal is stored as its unique minimal generating set, in a
//! fixed canonical order: ascending total degree, ties broken by ascending
//! lexicographic comparison of exponent vectors. Two ideals are equal iff
//! their generator lists are identical.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use thiserror::Error;

use crate::grid::Grid;
use crate::scalars::FieldSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonomialError {
    #[error("colon by zero ideal")]
    ColonByZero,
    #[error("not m-primary")]
    NotMPrimary,
    #[error("exponent overflow")]
    Overflow,
    #[error("ring has no variable weights")]
    MissingWeights,
    #[error("invalid ring: {0}")]
    InvalidRing(String),
}

/// Variable names, coefficient field and optional grading weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingContext {
    names: Vec<String>,
    field: FieldSpec,
    weights: Option<Vec<u64>>,
}

impl RingContext {
    pub fn new(names: Vec<String>, field: FieldSpec) -> Result<RingContext, MonomialError> {
        if names.is_empty() {
            return Err(MonomialError::InvalidRing("a ring needs at least one variable".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(MonomialError::InvalidRing(format!("duplicate variable {n}")));
            }
        }
        Ok(RingContext { names, field, weights: None })
    }

    /// `x, y, z` for `d <= 3`, otherwise `x1, ..., xd`.
    pub fn standard(d: usize, field: FieldSpec) -> RingContext {
        let names = if d <= 3 {
            ["x", "y", "z"][..d].iter().map(|s| s.to_string()).collect()
        } else {
            (1..=d).map(|i| format!("x{i}")).collect()
        };
        RingContext::new(names, field).expect("standard names are distinct")
    }

    pub fn with_weights(mut self, weights: Vec<u64>) -> Result<RingContext, MonomialError> {
        if weights.len() != self.names.len() {
            return Err(MonomialError::InvalidRing(format!(
                "{} weights for {} variables",
                weights.len(),
                self.names.len()
            )));
        }
        if weights.contains(&0) {
            return Err(MonomialError::InvalidRing("weights must be positive".into()));
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn with_field(mut self, field: FieldSpec) -> RingContext {
        self.field = field;
        self
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn weights(&self) -> Option<&[u64]> {
        self.weights.as_deref()
    }

    /// Renders `e` as `x^6*y^3`; the empty product is `1`.
    pub fn format_monomial(&self, e: &[u64]) -> String {
        let parts: Vec<String> = e
            .iter()
            .zip(&self.names)
            .filter(|(k, _)| **k > 0)
            .map(|(k, n)| if *k == 1 { n.clone() } else { format!("{n}^{k}") })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// Exponent of a monomial `x^e`.
///
/// `Ord` is the canonical generator order: total degree first, then
/// lexicographic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentVector(Vec<u64>);

impl ExponentVector {
    pub fn new(e: Vec<u64>) -> ExponentVector {
        ExponentVector(e)
    }

    pub fn zero(d: usize) -> ExponentVector {
        ExponentVector(vec![0; d])
    }

    /// `k * e_i`.
    pub fn pure_power(d: usize, i: usize, k: u64) -> ExponentVector {
        let mut e = vec![0; d];
        e[i] = k;
        ExponentVector(e)
    }

    pub fn degree(&self) -> u128 {
        self.0.iter().map(|c| *c as u128).sum()
    }

    /// Componentwise `self <= other`, i.e. `x^self` divides `x^other`.
    pub fn divides(&self, other: &[u64]) -> bool {
        self.0.iter().zip(other).all(|(a, b)| a <= b)
    }

    pub fn checked_add(&self, other: &[u64]) -> Result<ExponentVector, MonomialError> {
        self.0
            .iter()
            .zip(other)
            .map(|(a, b)| a.checked_add(*b).ok_or(MonomialError::Overflow))
            .collect::<Result<Vec<_>, _>>()
            .map(ExponentVector)
    }

    pub fn checked_scale(&self, t: u64) -> Result<ExponentVector, MonomialError> {
        self.0
            .iter()
            .map(|a| a.checked_mul(t).ok_or(MonomialError::Overflow))
            .collect::<Result<Vec<_>, _>>()
            .map(ExponentVector)
    }

    /// Componentwise maximum (the lcm of the monomials).
    pub fn lcm(&self, other: &[u64]) -> ExponentVector {
        ExponentVector(self.0.iter().zip(other).map(|(a, b)| *a.max(b)).collect())
    }

    /// Componentwise `max(self - other, 0)`: the exponent of `x^self : x^other`.
    pub fn saturating_sub(&self, other: &[u64]) -> ExponentVector {
        ExponentVector(self.0.iter().zip(other).map(|(a, b)| a.saturating_sub(*b)).collect())
    }

    /// The variable index if this is a pure power `x_i^k` with `k >= 1`.
    pub fn pure_power_index(&self) -> Option<usize> {
        let mut nonzero = self.0.iter().enumerate().filter(|(_, c)| **c > 0);
        match (nonzero.next(), nonzero.next()) {
            (Some((i, _)), None) => Some(i),
            _ => None,
        }
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u64> {
        self.0
    }
}

impl Deref for ExponentVector {
    type Target = [u64];

    fn deref(&self) -> &[u64] {
        &self.0
    }
}

impl From<Vec<u64>> for ExponentVector {
    fn from(e: Vec<u64>) -> Self {
        ExponentVector(e)
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A monomial ideal, represented by its minimal generators.
#[derive(Clone, Debug)]
pub struct MonomialIdeal {
    ring: Arc<RingContext>,
    gens: Vec<ExponentVector>,
}

impl PartialEq for MonomialIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.ring.dim() == other.ring.dim() && self.gens == other.gens
    }
}

impl Eq for MonomialIdeal {}

impl MonomialIdeal {
    /// The ideal generated by `raw`, reduced to its minimal generators.
    pub fn minimalize<I>(ring: &Arc<RingContext>, raw: I) -> MonomialIdeal
    where
        I: IntoIterator,
        I::Item: Into<ExponentVector>,
    {
        let d = ring.dim();
        let raw: Vec<ExponentVector> = raw.into_iter().map(Into::into).collect();
        for e in &raw {
            assert_eq!(e.len(), d, "exponent vector length does not match ring dimension");
        }
        MonomialIdeal { ring: ring.clone(), gens: minimal_antichain(raw) }
    }

    pub fn zero(ring: &Arc<RingContext>) -> MonomialIdeal {
        MonomialIdeal { ring: ring.clone(), gens: Vec::new() }
    }

    pub fn unit(ring: &Arc<RingContext>) -> MonomialIdeal {
        MonomialIdeal { ring: ring.clone(), gens: vec![ExponentVector::zero(ring.dim())] }
    }

    /// The homogeneous maximal ideal `(x_1, ..., x_d)`.
    pub fn maximal(ring: &Arc<RingContext>) -> MonomialIdeal {
        MonomialIdeal::pure_powers(ring, &vec![1; ring.dim()])
    }

    /// `(x_1^{n_1}, ..., x_d^{n_d})`.
    pub fn pure_powers(ring: &Arc<RingContext>, exps: &[u64]) -> MonomialIdeal {
        let d = ring.dim();
        assert_eq!(exps.len(), d);
        MonomialIdeal::minimalize(ring, exps.iter().enumerate().map(|(i, k)| ExponentVector::pure_power(d, i, *k)))
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.ring.dim()
    }

    pub fn gens(&self) -> &[ExponentVector] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].iter().all(|c| *c == 0)
    }

    /// Same ideal viewed in another ring of the same dimension.
    pub fn with_ring(&self, ring: &Arc<RingContext>) -> MonomialIdeal {
        assert_eq!(ring.dim(), self.dim());
        MonomialIdeal { ring: ring.clone(), gens: self.gens.clone() }
    }

    fn check_compatible(&self, other: &MonomialIdeal) {
        assert_eq!(self.dim(), other.dim(), "monomial ideals live in rings of different dimension");
    }

    pub fn contains(&self, m: &[u64]) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &MonomialIdeal) -> bool {
        self.check_compatible(other);
        self.gens.iter().all(|g| other.contains(g))
    }

    pub fn sum(&self, other: &MonomialIdeal) -> MonomialIdeal {
        self.check_compatible(other);
        MonomialIdeal::minimalize(&self.ring, self.gens.iter().chain(&other.gens).cloned())
    }

    pub fn product(&self, other: &MonomialIdeal) -> Result<MonomialIdeal, MonomialError> {
        self.check_compatible(other);
        let mut raw = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                raw.push(a.checked_add(b)?);
            }
        }
        Ok(MonomialIdeal::minimalize(&self.ring, raw))
    }

    /// `self^t`, minimalizing after every multiplication; `I^0 = (1)`.
    pub fn power(&self, t: u64) -> Result<MonomialIdeal, MonomialError> {
        let mut acc = MonomialIdeal::unit(&self.ring);
        for _ in 0..t {
            acc = acc.product(self)?;
        }
        Ok(acc)
    }

    /// Multiplies every generator by the monomial `x^mu`.
    pub fn shift(&self, mu: &[u64]) -> Result<MonomialIdeal, MonomialError> {
        let raw = self.gens.iter().map(|g| g.checked_add(mu)).collect::<Result<Vec<_>, _>>()?;
        Ok(MonomialIdeal::minimalize(&self.ring, raw))
    }

    /// `L^<t>`: the ideal of `t`-th powers of the minimal generators.
    pub fn bracket_power(&self, t: u64) -> Result<MonomialIdeal, MonomialError> {
        assert!(t >= 1, "bracket powers are defined for t >= 1");
        let raw = self.gens.iter().map(|g| g.checked_scale(t)).collect::<Result<Vec<_>, _>>()?;
        Ok(MonomialIdeal::minimalize(&self.ring, raw))
    }

    pub fn intersect(&self, other: &MonomialIdeal) -> MonomialIdeal {
        self.check_compatible(other);
        let mut raw = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                raw.push(a.lcm(b));
            }
        }
        MonomialIdeal::minimalize(&self.ring, raw)
    }

    /// `self : other`.
    ///
    /// When `self` is zero-dimensional the quotient is read off a box scan
    /// (see [`MonomialIdeal::colon_artinian`]); otherwise it is the
    /// intersection of the single-generator quotients.
    pub fn colon(&self, other: &MonomialIdeal) -> Result<MonomialIdeal, MonomialError> {
        self.check_compatible(other);
        if other.is_zero() {
            return Err(MonomialError::ColonByZero);
        }
        if let Some(q) = self.colon_artinian(other) {
            return Ok(q);
        }
        self.colon_by_generators(other)
    }

    /// `self : other = ∩_u self : (x^u)`, with `self : (x^u)` generated by
    /// `max(v - u, 0)` over the generators `v` of `self`.
    pub fn colon_by_generators(&self, other: &MonomialIdeal) -> Result<MonomialIdeal, MonomialError> {
        self.check_compatible(other);
        if other.is_zero() {
            return Err(MonomialError::ColonByZero);
        }
        let mut acc: Option<MonomialIdeal> = None;
        for u in &other.gens {
            let q = MonomialIdeal::minimalize(&self.ring, self.gens.iter().map(|v| v.saturating_sub(u)));
            if q.is_unit() {
                continue;
            }
            acc = Some(match acc {
                None => q,
                Some(a) => a.intersect(&q),
            });
        }
        Ok(acc.unwrap_or_else(|| MonomialIdeal::unit(&self.ring)))
    }

    /// Box-scan quotient for zero-dimensional `self`.
    ///
    /// With `N` the pure-power exponents of `self`, every generator of the
    /// quotient lies in `prod [0, N_i]`. A point `m` of the box fails to be
    /// in the quotient iff `m + u` is a standard monomial of `self` for some
    /// generator `u`, iff `m <= s - u` for a maximal standard monomial `s`.
    /// So the complement of the quotient is the down-set generated by the
    /// differences `s - u`, and the quotient's generators are the minimal
    /// points outside it. Returns `None` when `self` is not zero-dimensional
    /// or the box is too large.
    pub fn colon_artinian(&self, other: &MonomialIdeal) -> Option<MonomialIdeal> {
        let n = self.pure_power_exponents().ok()?;
        let grid = Grid::new(&n.iter().map(|k| k + 1).collect::<Vec<_>>())?;
        let d = self.dim();

        // Standard monomials of self: inside [0, N) and not in self.
        let mut in_self = vec![false; grid.len()];
        for g in &self.gens {
            if let Some(idx) = grid.index(g) {
                in_self[idx] = true;
            }
        }
        grid.close_upward(&mut in_self);
        let standard = |p: &[u64], cells: &[bool]| -> bool {
            p.iter().zip(&n).all(|(c, k)| c < k) && !cells[grid.index(p).unwrap()]
        };

        let mut corners = Vec::new();
        for idx in 0..grid.len() {
            let p = grid.point(idx);
            if !standard(&p, &in_self) {
                continue;
            }
            let maximal = (0..d).all(|i| {
                let mut q = p.clone();
                q[i] += 1;
                !standard(&q, &in_self)
            });
            if maximal {
                corners.push(p);
            }
        }

        let mut bad = vec![false; grid.len()];
        for s in &corners {
            for u in &other.gens {
                if u.divides(s) {
                    let diff: Vec<u64> = s.iter().zip(u.iter()).map(|(a, b)| a - b).collect();
                    bad[grid.index(&diff).unwrap()] = true;
                }
            }
        }
        grid.close_downward(&mut bad);
        let good: Vec<bool> = bad.iter().map(|b| !b).collect();
        Some(MonomialIdeal::minimalize(&self.ring, grid.minimal_cells(&good)))
    }

    /// True iff the ideal contains a pure power of every variable.
    pub fn is_zero_dimensional(&self) -> bool {
        self.pure_power_exponents().is_ok()
    }

    /// `n_i`: the smallest power of `x_i` in the ideal.
    pub fn pure_power_exponents(&self) -> Result<Vec<u64>, MonomialError> {
        let d = self.dim();
        let mut n = vec![None; d];
        for g in &self.gens {
            if let Some(i) = g.pure_power_index() {
                n[i] = Some(g[i]);
            } else if g.iter().all(|c| *c == 0) {
                return Ok(vec![0; d]);
            }
        }
        n.into_iter().map(|k| k.ok_or(MonomialError::NotMPrimary)).collect()
    }

    /// True iff all minimal generators have the same degree.
    pub fn is_equigenerated(&self) -> bool {
        self.gens.windows(2).all(|w| w[0].degree() == w[1].degree())
    }

    /// Componentwise maximum over the generators.
    pub fn max_exponents(&self) -> Vec<u64> {
        let mut m = vec![0; self.dim()];
        for g in &self.gens {
            for (a, b) in m.iter_mut().zip(g.iter()) {
                *a = (*a).max(*b);
            }
        }
        m
    }

    /// Substitutes `x_i -> x_i^{w_i}`: maps an ideal written in the
    /// generators `u_i = x_i^{w_i}` of a weighted subring to the ideal it
    /// generates in the ambient ring.
    pub fn substitute_powers(&self, w: &[u64]) -> Result<MonomialIdeal, MonomialError> {
        assert_eq!(w.len(), self.dim());
        let raw = self
            .gens
            .iter()
            .map(|g| {
                g.iter()
                    .zip(w)
                    .map(|(a, b)| a.checked_mul(*b).ok_or(MonomialError::Overflow))
                    .collect::<Result<Vec<u64>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MonomialIdeal::minimalize(&self.ring, raw))
    }

    /// Permutes variables: coordinate `i` of the result is coordinate
    /// `perm[i]` of the input.
    pub fn permute(&self, perm: &[usize]) -> MonomialIdeal {
        assert_eq!(perm.len(), self.dim());
        MonomialIdeal::minimalize(
            &self.ring,
            self.gens.iter().map(|g| perm.iter().map(|j| g[*j]).collect::<Vec<u64>>()),
        )
    }

    /// Generators rendered with the ring's variable names.
    pub fn format_gens(&self) -> Vec<String> {
        self.gens.iter().map(|g| self.ring.format_monomial(g)).collect()
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.format_gens().join(", "))
    }
}

/// `S_{>=n}` of the weighted subring `k[x_1^{a_1}, ..., x_d^{a_d}]`,
/// written in the subring generators `u_i = x_i^{a_i}`: the minimal
/// exponents `e` with `sum a_i e_i >= n`.
pub fn weighted_at_least(ring: &Arc<RingContext>, n: u64) -> Result<MonomialIdeal, MonomialError> {
    let a = ring.weights().ok_or(MonomialError::MissingWeights)?.to_vec();
    let d = a.len();
    // Fix e_1..e_{d-1} inside their pure-power bounds; the last exponent is
    // then forced to its least admissible value.
    let bounds: Vec<u64> = a.iter().map(|w| n.div_ceil(*w)).collect();
    let mut raw = Vec::new();
    let mut e = vec![0u64; d];
    loop {
        let partial: u128 = e[..d - 1].iter().zip(&a).map(|(x, w)| *x as u128 * *w as u128).sum();
        let rest = (n as u128).saturating_sub(partial);
        let last = rest.div_ceil(a[d - 1] as u128);
        e[d - 1] = u64::try_from(last).map_err(|_| MonomialError::Overflow)?;
        raw.push(e.clone());
        // advance the first d-1 coordinates
        let mut i = d - 1;
        loop {
            if i == 0 {
                return Ok(MonomialIdeal::minimalize(ring, raw));
            }
            i -= 1;
            e[i] += 1;
            if e[i] <= bounds[i] {
                break;
            }
            e[i] = 0;
        }
    }
}

/// The ideal generated by the monomials of weighted degree exactly `n`,
/// written in the subring generators `u_i`.
pub fn graded_piece(ring: &Arc<RingContext>, n: u64) -> Result<MonomialIdeal, MonomialError> {
    let a = ring.weights().ok_or(MonomialError::MissingWeights)?.to_vec();
    let mut raw = Vec::new();
    let mut e = vec![0u64; a.len()];
    fn rec(a: &[u64], i: usize, left: u64, e: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i + 1 == a.len() {
            if left.is_multiple_of(a[i]) {
                e[i] = left / a[i];
                out.push(e.clone());
            }
            return;
        }
        for k in 0..=left / a[i] {
            e[i] = k;
            rec(a, i + 1, left - k * a[i], e, out);
        }
        e[i] = 0;
    }
    rec(&a, 0, n, &mut e, &mut raw);
    Ok(MonomialIdeal::minimalize(ring, raw))
}

/// Below this many candidates the quadratic scan is cheaper than a grid.
const GRID_MIN_CANDIDATES: usize = 256;

fn minimal_antichain(mut raw: Vec<ExponentVector>) -> Vec<ExponentVector> {
    raw.sort_unstable();
    raw.dedup();
    if raw.len() >= GRID_MIN_CANDIDATES {
        if let Some(out) = minimal_by_grid(&raw) {
            return out;
        }
    }
    let mut kept: Vec<ExponentVector> = Vec::new();
    for c in raw {
        let deg = c.degree();
        let dominated = kept.iter().take_while(|k| k.degree() < deg).any(|k| k.divides(&c));
        if !dominated {
            kept.push(c);
        }
    }
    kept
}

fn minimal_by_grid(sorted: &[ExponentVector]) -> Option<Vec<ExponentVector>> {
    let d = sorted[0].len();
    let mut dims = vec![0u64; d];
    for e in sorted {
        for (m, c) in dims.iter_mut().zip(e.iter()) {
            *m = (*m).max(c.checked_add(1)?);
        }
    }
    let grid = Grid::new(&dims)?;
    let mut marked = vec![false; grid.len()];
    for e in sorted {
        marked[grid.index(e)?] = true;
    }
    let mut closed = marked.clone();
    grid.close_upward(&mut closed);
    let strides = grid.strides();
    let out = sorted
        .iter()
        .filter(|e| {
            let idx = grid.index(e).unwrap();
            (0..d).all(|i| e[i] == 0 || !closed[idx - strides[i]])
        })
        .cloned()
        .collect();
    Some(out)
}
