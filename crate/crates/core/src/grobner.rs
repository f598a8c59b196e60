//! Polynomials, Gröbner bases and the mono/Mono operations.
//!
//! Polynomials are sparse term lists sorted descending in a
//! [`MonomialOrder`]. The base order is degrevlex; elimination uses a block
//! of auxiliary variables placed before the ring variables.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::grid::Grid;
use crate::monomials::{ExponentVector, MonomialIdeal, RingContext};
use crate::scalars::{FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrobnerError {
    #[error("colon by zero ideal")]
    ColonByZero,
    #[error("linkage sequence not inside ideal")]
    LinkageNotContained,
    #[error("linkage sequence must consist of one pure power per variable")]
    NotPurePowers,
}

/// Degrevlex, optionally preceded by a degrevlex block on the first `aux`
/// coordinates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    aux: usize,
}

impl MonomialOrder {
    pub const DEGREVLEX: MonomialOrder = MonomialOrder { aux: 0 };

    pub fn elimination(aux: usize) -> MonomialOrder {
        MonomialOrder { aux }
    }

    pub fn aux(&self) -> usize {
        self.aux
    }

    pub fn cmp(&self, a: &[u64], b: &[u64]) -> Ordering {
        if self.aux > 0 {
            let c = degrevlex(&a[..self.aux], &b[..self.aux]);
            if c != Ordering::Equal {
                return c;
            }
            return degrevlex(&a[self.aux..], &b[self.aux..]);
        }
        degrevlex(a, b)
    }
}

fn degrevlex(a: &[u64], b: &[u64]) -> Ordering {
    let da: u128 = a.iter().map(|c| *c as u128).sum();
    let db: u128 = b.iter().map(|c| *c as u128).sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

fn add_exp(a: &[u64], b: &[u64]) -> ExponentVector {
    ExponentVector::new(a.iter().zip(b).map(|(x, y)| x.checked_add(*y).expect("exponent overflow")).collect())
}

/// A polynomial as a list of `(exponent, coefficient)` pairs, strictly
/// descending in the order it was built with, coefficients nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: Vec<(ExponentVector, Scalar)>,
}

impl Polynomial {
    pub fn zero() -> Polynomial {
        Polynomial { terms: Vec::new() }
    }

    pub fn monomial(e: impl Into<ExponentVector>, c: Scalar) -> Polynomial {
        Polynomial { terms: vec![(e.into(), c)] }
    }

    /// Collects like terms, drops zeros and sorts under `order`.
    pub fn from_terms<I>(terms: I, field: &FieldSpec, order: MonomialOrder) -> Polynomial
    where
        I: IntoIterator<Item = (ExponentVector, Scalar)>,
    {
        let mut map: BTreeMap<ExponentVector, Scalar> = BTreeMap::new();
        for (e, c) in terms {
            let entry = map.entry(e).or_insert_with(|| field.zero());
            *entry = field.add(entry, &c);
        }
        let mut terms: Vec<_> = map.into_iter().filter(|(_, c)| !field.is_zero(c)).collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Polynomial { terms }
    }

    pub fn terms(&self) -> &[(ExponentVector, Scalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_exponent(&self) -> Option<&ExponentVector> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coefficient(&self) -> Option<&Scalar> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn support(&self) -> impl Iterator<Item = &ExponentVector> {
        self.terms.iter().map(|t| &t.0)
    }

    /// The single exponent of a one-term polynomial.
    pub fn as_monomial(&self) -> Option<&ExponentVector> {
        match self.terms.as_slice() {
            [(e, _)] => Some(e),
            _ => None,
        }
    }

    fn resort(mut self, order: MonomialOrder) -> Polynomial {
        self.terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        self
    }

    pub fn scale(&self, c: &Scalar, field: &FieldSpec) -> Polynomial {
        if field.is_zero(c) {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(e, a)| (e.clone(), field.mul(a, c))).collect() }
    }

    pub fn monic(&self, field: &FieldSpec) -> Polynomial {
        match self.leading_coefficient() {
            None => Polynomial::zero(),
            Some(lc) => self.scale(&field.inv(lc).expect("leading coefficient is nonzero"), field),
        }
    }

    /// `self + c · x^shift · other`.
    pub fn add_scaled(
        &self,
        other: &Polynomial,
        c: &Scalar,
        shift: &[u64],
        field: &FieldSpec,
        order: MonomialOrder,
    ) -> Polynomial {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other.terms.iter().map(|(e, v)| (add_exp(e, shift), field.mul(v, c))).peekable();
        loop {
            let ord = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (Some(x), Some(y)) => order.cmp(&x.0, &y.0),
            };
            match ord {
                Ordering::Greater => out.push(a.next().expect("peeked").clone()),
                Ordering::Less => {
                    let t = b.next().expect("peeked");
                    if !field.is_zero(&t.1) {
                        out.push(t);
                    }
                }
                Ordering::Equal => {
                    let (e, x) = a.next().expect("peeked");
                    let (_, y) = b.next().expect("peeked");
                    let s = field.add(x, &y);
                    if !field.is_zero(&s) {
                        out.push((e.clone(), s));
                    }
                }
            }
        }
        Polynomial { terms: out }
    }

    pub fn add(&self, other: &Polynomial, field: &FieldSpec, order: MonomialOrder) -> Polynomial {
        let zero = vec![0; self.nvars().max(other.nvars())];
        self.add_scaled(other, &field.one(), &zero, field, order)
    }

    pub fn mul(&self, other: &Polynomial, field: &FieldSpec, order: MonomialOrder) -> Polynomial {
        let mut acc = Polynomial::zero();
        for (e, c) in &self.terms {
            acc = acc.add_scaled(other, c, e, field, order);
        }
        acc
    }

    fn nvars(&self) -> usize {
        self.terms.first().map_or(0, |t| t.0.len())
    }

    /// Exact quotient `self / g`, or `None` when `g` does not divide.
    pub fn divide_exact(&self, g: &Polynomial, field: &FieldSpec, order: MonomialOrder) -> Option<Polynomial> {
        let (lg, cg) = g.terms.first()?;
        let inv = field.inv(cg).ok()?;
        let mut r = self.clone();
        let mut q = Vec::new();
        while let Some((lr, cr)) = r.terms.first() {
            if !lg.divides(lr) {
                return None;
            }
            let shift = lr.saturating_sub(lg);
            let c = field.mul(cr, &inv);
            r = r.add_scaled(g, &field.neg(&c), &shift, field, order);
            q.push((shift, c));
        }
        Some(Polynomial { terms: q })
    }

    /// Renders with the ring's variable names, e.g. `x^2 + 3*x*y`.
    pub fn format(&self, ring: &RingContext) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let m = ring.format_monomial(e);
                let c = c.to_string();
                let c = c.strip_suffix("/1").unwrap_or(&c).to_string();
                match (c.as_str(), m.as_str()) {
                    (_, "1") => c,
                    ("1", _) => m,
                    _ => format!("{c}*{m}"),
                }
            })
            .collect();
        parts.join(" + ")
    }
}

fn embed(p: &Polynomial, aux: usize, order: MonomialOrder) -> Polynomial {
    let terms = p
        .terms
        .iter()
        .map(|(e, c)| {
            let mut v = vec![0; aux];
            v.extend_from_slice(e);
            (ExponentVector::new(v), c.clone())
        })
        .collect();
    Polynomial { terms }.resort(order)
}

fn project(p: &Polynomial, aux: usize) -> Polynomial {
    let terms = p.terms.iter().map(|(e, c)| (ExponentVector::new(e[aux..].to_vec()), c.clone())).collect();
    Polynomial { terms }.resort(MonomialOrder::DEGREVLEX)
}

/// Full reduction of `f` modulo `basis` (any list of nonzero polynomials
/// sorted under `order`). Unique when `basis` is a Gröbner basis.
pub fn normal_form(f: &Polynomial, basis: &[Polynomial], field: &FieldSpec, order: MonomialOrder) -> Polynomial {
    let inverses: Vec<Scalar> = basis
        .iter()
        .map(|g| field.inv(g.leading_coefficient().expect("basis element is nonzero")).expect("nonzero"))
        .collect();
    let mut p = f.clone();
    let mut rem = Vec::new();
    while let Some((lp, cp)) = p.terms.first() {
        let hit = basis
            .iter()
            .position(|g| g.leading_exponent().expect("basis element is nonzero").divides(lp));
        match hit {
            Some(k) => {
                let g = &basis[k];
                let shift = lp.saturating_sub(g.leading_exponent().expect("nonzero"));
                let c = field.neg(&field.mul(cp, &inverses[k]));
                p = p.add_scaled(g, &c, &shift, field, order);
            }
            None => {
                rem.push(p.terms.remove(0));
            }
        }
    }
    Polynomial { terms: rem }
}

fn s_polynomial(f: &Polynomial, g: &Polynomial, field: &FieldSpec, order: MonomialOrder) -> Polynomial {
    let lf = f.leading_exponent().expect("nonzero");
    let lg = g.leading_exponent().expect("nonzero");
    let l = lf.lcm(lg);
    let cf = field.inv(f.leading_coefficient().expect("nonzero")).expect("nonzero");
    let cg = field.neg(&field.inv(g.leading_coefficient().expect("nonzero")).expect("nonzero"));
    Polynomial::zero()
        .add_scaled(f, &cf, &l.saturating_sub(lf), field, order)
        .add_scaled(g, &cg, &l.saturating_sub(lg), field, order)
}

/// Reduced Gröbner basis of the ideal generated by `gens` under `order`:
/// monic, pairwise reduced, sorted by leading monomial ascending.
pub fn buchberger(gens: &[Polynomial], field: &FieldSpec, order: MonomialOrder) -> Vec<Polynomial> {
    let mut basis: Vec<Polynomial> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.clone().resort(order).monic(field))
        .collect();
    let mut pending: Vec<(usize, usize)> = Vec::new();
    let mut pending_set: HashSet<(usize, usize)> = HashSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pending.push((i, j));
            pending_set.insert((i, j));
        }
    }
    let lcm_of = |b: &[Polynomial], i: usize, j: usize| {
        b[i].leading_exponent().expect("nonzero").lcm(b[j].leading_exponent().expect("nonzero"))
    };
    while !pending.is_empty() {
        // Normal selection strategy: smallest lcm first.
        let (pos, _) = pending
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                order.cmp(&lcm_of(&basis, a.0, a.1), &lcm_of(&basis, b.0, b.1)).then(a.cmp(b))
            })
            .expect("nonempty");
        let (i, j) = pending.swap_remove(pos);
        pending_set.remove(&(i, j));
        let li = basis[i].leading_exponent().expect("nonzero");
        let lj = basis[j].leading_exponent().expect("nonzero");
        if li.iter().zip(lj.iter()).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        let l = li.lcm(lj);
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].leading_exponent().expect("nonzero").divides(&l)
                && !pending_set.contains(&key(i, k))
                && !pending_set.contains(&key(j, k))
        });
        if chain {
            continue;
        }
        let h = normal_form(&s_polynomial(&basis[i], &basis[j], field, order), &basis, field, order);
        if h.is_zero() {
            continue;
        }
        let n = basis.len();
        basis.push(h.monic(field));
        for k in 0..n {
            pending.push((k, n));
            pending_set.insert((k, n));
        }
    }
    reduce_basis(basis, field, order)
}

fn reduce_basis(basis: Vec<Polynomial>, field: &FieldSpec, order: MonomialOrder) -> Vec<Polynomial> {
    let mut minimal: Vec<Polynomial> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let lg = g.leading_exponent().expect("nonzero");
        let redundant = basis.iter().enumerate().any(|(m, h)| {
            let lh = h.leading_exponent().expect("nonzero");
            m != k && lh.divides(lg) && (lh != lg || m < k)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let g = &minimal[k];
        let lead = Polynomial { terms: vec![g.terms[0].clone()] };
        let tail = Polynomial { terms: g.terms[1..].to_vec() };
        let others: Vec<Polynomial> =
            minimal.iter().enumerate().filter(|(m, _)| *m != k).map(|(_, h)| h.clone()).collect();
        let tail = normal_form(&tail, &others, field, order);
        let zero = vec![0; g.nvars()];
        out.push(lead.add_scaled(&tail, &field.one(), &zero, field, order).monic(field));
    }
    out.sort_by(|a, b| {
        order.cmp(a.leading_exponent().expect("nonzero"), b.leading_exponent().expect("nonzero"))
    });
    out
}

/// True iff every S-polynomial of `basis` reduces to zero.
pub fn is_groebner_basis(basis: &[Polynomial], field: &FieldSpec, order: MonomialOrder) -> bool {
    (0..basis.len()).all(|j| {
        (0..j).all(|i| normal_form(&s_polynomial(&basis[i], &basis[j], field, order), basis, field, order).is_zero())
    })
}

/// An ideal of the polynomial ring, with its degrevlex Gröbner basis
/// computed on first use.
#[derive(Debug, Clone)]
pub struct PolyIdeal {
    ring: Arc<RingContext>,
    gens: Vec<Polynomial>,
    basis: OnceLock<Vec<Polynomial>>,
}

impl PolyIdeal {
    pub fn new(ring: &Arc<RingContext>, gens: Vec<Polynomial>) -> PolyIdeal {
        let d = ring.dim();
        let gens: Vec<Polynomial> = gens
            .into_iter()
            .filter(|g| !g.is_zero())
            .map(|g| {
                assert!(g.terms.iter().all(|t| t.0.len() == d), "polynomial does not match ring dimension");
                g.resort(MonomialOrder::DEGREVLEX)
            })
            .collect();
        PolyIdeal { ring: ring.clone(), gens, basis: OnceLock::new() }
    }

    fn with_basis(ring: &Arc<RingContext>, basis: Vec<Polynomial>) -> PolyIdeal {
        let cell = OnceLock::new();
        cell.set(basis.clone()).expect("fresh cell");
        PolyIdeal { ring: ring.clone(), gens: basis, basis: cell }
    }

    pub fn from_monomial(ideal: &MonomialIdeal) -> PolyIdeal {
        let one = ideal.ring().field().one();
        let gens = ideal.gens().iter().map(|g| Polynomial::monomial(g.clone(), one.clone())).collect();
        PolyIdeal::new(ideal.ring(), gens)
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ring
    }

    pub fn field(&self) -> &FieldSpec {
        self.ring.field()
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn groebner_basis(&self) -> &[Polynomial] {
        self.basis
            .get_or_init(|| buchberger(&self.gens, self.ring.field(), MonomialOrder::DEGREVLEX))
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        ideal_member(f, self)
    }

    pub fn is_subset_of(&self, other: &PolyIdeal) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// The monomial ideal with the same generators, when every generator
    /// is a single term.
    pub fn as_monomial(&self) -> Option<MonomialIdeal> {
        let exps: Option<Vec<ExponentVector>> = self.gens.iter().map(|g| g.as_monomial().cloned()).collect();
        exps.map(|e| MonomialIdeal::minimalize(&self.ring, e))
    }
}

impl PartialEq for PolyIdeal {
    /// Equality of ideals, via reduced Gröbner bases.
    fn eq(&self, other: &PolyIdeal) -> bool {
        self.ring.dim() == other.ring.dim() && self.groebner_basis() == other.groebner_basis()
    }
}

impl fmt::Display for PolyIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.gens.iter().map(|g| g.format(&self.ring)).collect();
        write!(f, "({})", gens.join(", "))
    }
}

pub fn ideal_member(f: &Polynomial, ideal: &PolyIdeal) -> bool {
    let f = f.clone().resort(MonomialOrder::DEGREVLEX);
    normal_form(&f, ideal.groebner_basis(), ideal.field(), MonomialOrder::DEGREVLEX).is_zero()
}

/// `I ∩ J`: eliminate `w` from `w·I + (1 − w)·J`.
pub fn intersect_poly(i: &PolyIdeal, j: &PolyIdeal) -> PolyIdeal {
    let ring = i.ring();
    let field = ring.field();
    if i.is_zero() || j.is_zero() {
        return PolyIdeal::new(ring, Vec::new());
    }
    let order = MonomialOrder::elimination(1);
    let mut w = vec![0; ring.dim() + 1];
    w[0] = 1;
    let mut gens = Vec::new();
    for f in i.gens() {
        gens.push(Polynomial::zero().add_scaled(&embed(f, 1, order), &field.one(), &w, field, order));
    }
    for g in j.gens() {
        let g = embed(g, 1, order);
        gens.push(g.add_scaled(&g, &field.neg(&field.one()), &w, field, order));
    }
    let basis: Vec<Polynomial> = buchberger(&gens, field, order)
        .into_iter()
        .filter(|p| p.support().all(|e| e[0] == 0))
        .map(|p| project(&p, 1))
        .collect();
    PolyIdeal::with_basis(ring, basis)
}

/// `I : J`. Uses linear algebra modulo `I` when `I` is an Artinian monomial
/// ideal, and otherwise intersects `(I ∩ (f)) / f` over the generators `f`.
pub fn colon_poly(i: &PolyIdeal, j: &PolyIdeal) -> Result<PolyIdeal, GrobnerError> {
    if j.is_zero() {
        return Err(GrobnerError::ColonByZero);
    }
    if let Some(m) = i.as_monomial() {
        if m.is_zero_dimensional() {
            return Ok(colon_artinian(&m, j));
        }
    }
    colon_by_intersection(i, j)
}

/// The generic colon route.
pub fn colon_by_intersection(i: &PolyIdeal, j: &PolyIdeal) -> Result<PolyIdeal, GrobnerError> {
    if j.is_zero() {
        return Err(GrobnerError::ColonByZero);
    }
    let ring = i.ring();
    let field = ring.field();
    let order = MonomialOrder::DEGREVLEX;
    let mut acc: Option<PolyIdeal> = None;
    for f in j.gens() {
        if i.contains(f) {
            continue;
        }
        let single = PolyIdeal::new(ring, vec![f.clone()]);
        let quotients: Vec<Polynomial> = intersect_poly(i, &single)
            .gens()
            .iter()
            .map(|g| g.divide_exact(f, field, order).expect("intersection with (f) is divisible by f"))
            .collect();
        let part = PolyIdeal::new(ring, quotients);
        acc = Some(match acc {
            None => part,
            Some(a) => intersect_poly(&a, &part),
        });
    }
    Ok(acc.unwrap_or_else(|| PolyIdeal::new(ring, vec![Polynomial::monomial(vec![0; ring.dim()], field.one())])))
}

/// `M : J` for an Artinian monomial ideal `M`. In `R/M`, which has the
/// standard monomials as a basis, the colon is the common kernel of
/// multiplication by the generators of `J`.
fn colon_artinian(m: &MonomialIdeal, j: &PolyIdeal) -> PolyIdeal {
    let ring = m.ring();
    let field = ring.field();
    let n = m.pure_power_exponents().expect("Artinian");
    if m.is_unit() {
        return PolyIdeal::from_monomial(m);
    }
    let grid = Grid::new(&n).expect("standard monomial box fits in memory");
    let mut column_of = vec![usize::MAX; grid.len()];
    let mut standard: Vec<Vec<u64>> = Vec::new();
    for (idx, col) in column_of.iter_mut().enumerate() {
        let p = grid.point(idx);
        if !m.contains(&p) {
            *col = standard.len();
            standard.push(p);
        }
    }
    // rows[(generator, target)] lists (column, coefficient) with increasing column.
    let mut rows: BTreeMap<(usize, usize), Vec<(usize, Scalar)>> = BTreeMap::new();
    for (col, h) in standard.iter().enumerate() {
        for (k, f) in j.gens().iter().enumerate() {
            for (e, c) in f.terms() {
                let t: Vec<u64> = h.iter().zip(e.iter()).map(|(a, b)| a + b).collect();
                if let Some(idx) = grid.index(&t) {
                    let target = column_of[idx];
                    if target != usize::MAX {
                        rows.entry((k, target)).or_default().push((col, c.clone()));
                    }
                }
            }
        }
    }
    let kernel = sparse_kernel(rows.into_values(), standard.len(), field);
    let one = field.one();
    let mut gens: Vec<Polynomial> =
        m.gens().iter().map(|g| Polynomial::monomial(g.clone(), one.clone())).collect();
    for v in kernel {
        gens.push(Polynomial::from_terms(
            v.into_iter().map(|(col, c)| (ExponentVector::new(standard[col].clone()), c)),
            field,
            MonomialOrder::DEGREVLEX,
        ));
    }
    PolyIdeal::new(ring, gens)
}

type SparseRow = Vec<(usize, Scalar)>;

/// `row + c · other` on sorted sparse rows.
fn row_axpy(row: &SparseRow, c: &Scalar, other: &SparseRow, field: &FieldSpec) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut a, mut b) = (0, 0);
    while a < row.len() || b < other.len() {
        let take = match (row.get(a), other.get(b)) {
            (Some(x), Some(y)) => x.0.cmp(&y.0),
            (Some(_), None) => Ordering::Less,
            _ => Ordering::Greater,
        };
        match take {
            Ordering::Less => {
                out.push(row[a].clone());
                a += 1;
            }
            Ordering::Greater => {
                let v = field.mul(c, &other[b].1);
                if !field.is_zero(&v) {
                    out.push((other[b].0, v));
                }
                b += 1;
            }
            Ordering::Equal => {
                let v = field.add(&row[a].1, &field.mul(c, &other[b].1));
                if !field.is_zero(&v) {
                    out.push((row[a].0, v));
                }
                a += 1;
                b += 1;
            }
        }
    }
    out
}

/// A basis of `{ x : A x = 0 }` for the sparse matrix with the given rows,
/// one vector per non-pivot column (that column's entry is 1).
fn sparse_kernel<I>(rows: I, cols: usize, field: &FieldSpec) -> Vec<SparseRow>
where
    I: IntoIterator<Item = SparseRow>,
{
    // pivots[c]: a row whose first entry is column c with coefficient 1.
    let mut pivots: Vec<Option<SparseRow>> = vec![None; cols];
    for mut row in rows {
        while let Some((c, v)) = row.iter().find(|(c, _)| pivots[*c].is_some()).cloned() {
            let p = pivots[c].as_ref().expect("checked");
            row = row_axpy(&row, &field.neg(&v), p, field);
        }
        if let Some((c, v)) = row.first().cloned() {
            let inv = field.inv(&v).expect("nonzero");
            let row: SparseRow = row.iter().map(|(k, x)| (*k, field.mul(x, &inv))).collect();
            pivots[c] = Some(row);
        }
    }
    // Back substitution to reduced echelon form, highest pivot first.
    for c in (0..cols).rev() {
        let Some(mut row) = pivots[c].take() else { continue };
        loop {
            let hit = row.iter().skip(1).find(|(k, _)| pivots[*k].is_some()).cloned();
            let Some((k, v)) = hit else { break };
            row = row_axpy(&row, &field.neg(&v), pivots[k].as_ref().expect("checked"), field);
        }
        pivots[c] = Some(row);
    }
    let mut kernel = Vec::new();
    for free in (0..cols).filter(|c| pivots[*c].is_none()) {
        let mut v: SparseRow = vec![(free, field.one())];
        for (c, p) in pivots.iter().enumerate() {
            if let Some(p) = p {
                if let Some((_, x)) = p.iter().find(|(k, _)| *k == free) {
                    v.push((c, field.neg(x)));
                }
            }
        }
        v.sort_by_key(|t| t.0);
        kernel.push(v);
    }
    kernel
}

/// `Mono(L)`: the smallest monomial ideal containing `L`, generated by the
/// supports of any generating set.
pub fn mono_hull(l: &PolyIdeal) -> MonomialIdeal {
    MonomialIdeal::minimalize(l.ring(), l.gens().iter().flat_map(|g| g.support().cloned()))
}

/// `mono(L) = (β) : Mono((β) : L)`, the largest monomial ideal inside `L`,
/// for a sequence `β` of pure powers contained in `L`.
pub fn mono(l: &PolyIdeal, beta: &MonomialIdeal) -> Result<MonomialIdeal, GrobnerError> {
    let d = beta.dim();
    let mut seen = vec![false; d];
    for g in beta.gens() {
        match g.pure_power_index() {
            Some(i) if !seen[i] => seen[i] = true,
            _ => return Err(GrobnerError::NotPurePowers),
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(GrobnerError::NotPurePowers);
    }
    let one = l.field().one();
    for g in beta.gens() {
        let literal = l.gens().iter().any(|f| f.as_monomial() == Some(g));
        if !literal && !l.contains(&Polynomial::monomial(g.clone(), one.clone())) {
            return Err(GrobnerError::LinkageNotContained);
        }
    }
    let colon = colon_poly(&PolyIdeal::from_monomial(beta), l)?;
    Ok(beta.colon(&mono_hull(&colon)).expect("Mono of a colon is nonzero"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring(d: usize, field: FieldSpec) -> Arc<RingContext> {
        Arc::new(RingContext::standard(d, field))
    }

    fn poly(field: &FieldSpec, terms: &[(i64, &[u64])]) -> Polynomial {
        Polynomial::from_terms(
            terms.iter().map(|(c, e)| (ExponentVector::new(e.to_vec()), field.from_i64(*c))),
            field,
            MonomialOrder::DEGREVLEX,
        )
    }

    fn mono_ideal(r: &Arc<RingContext>, gens: &[&[u64]]) -> MonomialIdeal {
        MonomialIdeal::minimalize(r, gens.iter().map(|g| g.to_vec()))
    }

    #[test]
    fn orders() {
        let o = MonomialOrder::DEGREVLEX;
        assert_eq!(o.cmp(&[1, 1, 0], &[2, 0, 0]), Ordering::Less);
        assert_eq!(o.cmp(&[1, 0, 1], &[0, 2, 0]), Ordering::Less);
        assert_eq!(o.cmp(&[0, 0, 3], &[1, 0, 0]), Ordering::Greater);
        let e = MonomialOrder::elimination(1);
        assert_eq!(e.cmp(&[1, 0, 0], &[0, 5, 5]), Ordering::Greater);
    }

    #[test]
    fn small_bases() {
        let f = FieldSpec::Rational;
        let x = poly(&f, &[(1, &[1, 0])]);
        assert_eq!(buchberger(std::slice::from_ref(&x), &f, MonomialOrder::DEGREVLEX), vec![x.clone()]);
        let b = buchberger(
            &[poly(&f, &[(1, &[1, 0]), (1, &[0, 1])]), poly(&f, &[(1, &[1, 0]), (-1, &[0, 1])])],
            &f,
            MonomialOrder::DEGREVLEX,
        );
        assert_eq!(b, vec![poly(&f, &[(1, &[0, 1])]), x]);
        // x^2 - y, y^2 - x
        let b = buchberger(
            &[poly(&f, &[(1, &[2, 0]), (-1, &[0, 1])]), poly(&f, &[(1, &[0, 2]), (-1, &[1, 0])])],
            &f,
            MonomialOrder::DEGREVLEX,
        );
        assert_eq!(b.len(), 2);
        let leads: Vec<Vec<u64>> = b.iter().map(|g| g.leading_exponent().unwrap().to_vec()).collect();
        assert_eq!(leads, vec![vec![0, 2], vec![2, 0]]);
        assert!(is_groebner_basis(&b, &f, MonomialOrder::DEGREVLEX));
    }

    #[test]
    fn normal_forms_and_membership() {
        let f = FieldSpec::Rational;
        let r = ring(2, f.clone());
        let x = PolyIdeal::new(&r, vec![poly(&f, &[(1, &[1, 0])])]);
        assert!(x.contains(&poly(&f, &[(1, &[2, 0]), (1, &[1, 1])])));
        let y = poly(&f, &[(1, &[0, 1])]);
        assert_eq!(normal_form(&y, x.groebner_basis(), &f, MonomialOrder::DEGREVLEX), y);
        let sq = PolyIdeal::from_monomial(&mono_ideal(&r, &[&[2, 0], &[0, 2]]));
        assert!(!sq.contains(&poly(&f, &[(1, &[1, 1])])));
    }

    #[test]
    fn intersections() {
        let f = FieldSpec::Rational;
        let r = ring(2, f.clone());
        let x = PolyIdeal::new(&r, vec![poly(&f, &[(1, &[1, 0])])]);
        let y = PolyIdeal::new(&r, vec![poly(&f, &[(1, &[0, 1])])]);
        assert_eq!(intersect_poly(&x, &y).gens(), &[poly(&f, &[(1, &[1, 1])])]);
        let sq = PolyIdeal::from_monomial(&mono_ideal(&r, &[&[2, 0], &[0, 2]]));
        assert!(intersect_poly(&sq, &sq) == sq);
        let xy = PolyIdeal::new(&r, vec![poly(&f, &[(1, &[1, 0]), (1, &[0, 1])])]);
        let expected = PolyIdeal::new(&r, vec![poly(&f, &[(1, &[2, 0]), (1, &[1, 1])])]);
        assert!(intersect_poly(&xy, &x) == expected);
    }

    #[test]
    fn colon_examples() {
        let f = FieldSpec::Rational;
        let r = ring(2, f.clone());
        let sq = PolyIdeal::from_monomial(&mono_ideal(&r, &[&[2, 0], &[0, 2]]));
        let xy = PolyIdeal::new(&r, vec![poly(&f, &[(1, &[1, 0]), (1, &[0, 1])])]);
        let expected =
            PolyIdeal::new(&r, vec![poly(&f, &[(1, &[1, 0]), (-1, &[0, 1])]), poly(&f, &[(1, &[2, 0])])]);
        assert!(colon_poly(&sq, &xy).unwrap() == expected);
        assert!(colon_by_intersection(&sq, &xy).unwrap() == expected);
        let unit = PolyIdeal::new(&r, vec![poly(&f, &[(1, &[0, 0])])]);
        assert!(colon_poly(&sq, &unit).unwrap() == sq);
        assert_eq!(colon_poly(&sq, &PolyIdeal::new(&r, vec![])).unwrap_err(), GrobnerError::ColonByZero);
    }

    #[test]
    fn hull_and_mono() {
        let f = FieldSpec::Rational;
        let r = ring(3, f.clone());
        let l = PolyIdeal::new(&r, vec![poly(&f, &[(1, &[2, 0, 0]), (1, &[0, 1, 1])]), poly(&f, &[(1, &[0, 0, 3])])]);
        assert_eq!(mono_hull(&l), mono_ideal(&r, &[&[2, 0, 0], &[0, 1, 1], &[0, 0, 3]]));

        let r2 = ring(2, f.clone());
        let l = PolyIdeal::new(&r2, vec![poly(&f, &[(1, &[1, 0]), (1, &[0, 1])]), poly(&f, &[(1, &[2, 0])])]);
        let beta = mono_ideal(&r2, &[&[2, 0], &[0, 2]]);
        let m = mono(&l, &beta).unwrap();
        assert_eq!(m, mono_ideal(&r2, &[&[2, 0], &[1, 1], &[0, 2]]));
        let monomial = mono_ideal(&r2, &[&[3, 0], &[1, 1], &[0, 2]]);
        assert_eq!(mono(&PolyIdeal::from_monomial(&monomial), &mono_ideal(&r2, &[&[3, 0], &[0, 2]])).unwrap(), monomial);
        assert_eq!(mono(&l, &mono_ideal(&r2, &[&[1, 0], &[0, 2]])), Err(GrobnerError::LinkageNotContained));
    }

    #[test]
    fn exact_division() {
        let f = FieldSpec::Rational;
        let a = poly(&f, &[(1, &[1, 0]), (1, &[0, 1])]);
        let b = poly(&f, &[(1, &[1, 0]), (-1, &[0, 1])]);
        let p = a.mul(&b, &f, MonomialOrder::DEGREVLEX);
        assert_eq!(p.divide_exact(&a, &f, MonomialOrder::DEGREVLEX), Some(b));
        assert_eq!(a.divide_exact(&poly(&f, &[(1, &[1, 1])]), &f, MonomialOrder::DEGREVLEX), None);
    }

    #[test]
    fn formatting() {
        let f = FieldSpec::Rational;
        let r = ring(2, f.clone());
        let p = poly(&f, &[(3, &[1, 1]), (1, &[2, 0]), (-2, &[0, 0])]);
        assert_eq!(p.format(&r), "x^2 + 3*x*y + -2");
    }

    fn arb_poly(field: FieldSpec, max_deg: u64, max_terms: usize) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((-3i64..=3, prop::collection::vec(0..=max_deg, 2)), 1..=max_terms).prop_map(
            move |terms| {
                Polynomial::from_terms(
                    terms.into_iter().map(|(c, e)| (ExponentVector::new(e), field.from_i64(c))),
                    &field,
                    MonomialOrder::DEGREVLEX,
                )
            },
        )
        .prop_filter("nonzero", |p| !p.is_zero())
    }

    fn arb_ideal(field: FieldSpec) -> impl Strategy<Value = PolyIdeal> {
        let r = ring(2, field.clone());
        prop::collection::vec(arb_poly(field, 3, 3), 1..=3).prop_map(move |g| PolyIdeal::new(&r, g))
    }

    fn arb_artinian(field: FieldSpec) -> impl Strategy<Value = PolyIdeal> {
        let r = ring(2, field);
        (1u64..=4, 1u64..=4, prop::collection::vec(prop::collection::vec(0u64..=3, 2), 0..3)).prop_map(
            move |(a, b, extra)| {
                let mut gens = vec![vec![a, 0], vec![0, b]];
                gens.extend(extra);
                PolyIdeal::from_monomial(&MonomialIdeal::minimalize(&r, gens))
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn normal_form_idempotent(i in arb_ideal(FieldSpec::Prime(101)), f in arb_poly(FieldSpec::Prime(101), 4, 5)) {
            let field = FieldSpec::Prime(101);
            let gb = i.groebner_basis();
            let nf = normal_form(&f, gb, &field, MonomialOrder::DEGREVLEX);
            prop_assert_eq!(normal_form(&nf, gb, &field, MonomialOrder::DEGREVLEX), nf);
            for g in i.gens() {
                prop_assert!(i.contains(g));
            }
            prop_assert!(is_groebner_basis(gb, &field, MonomialOrder::DEGREVLEX));
        }

        #[test]
        fn intersection_contained(i in arb_ideal(FieldSpec::Prime(101)), j in arb_ideal(FieldSpec::Prime(101))) {
            let field = FieldSpec::Prime(101);
            let k = intersect_poly(&i, &j);
            prop_assert!(k.is_subset_of(&i));
            prop_assert!(k.is_subset_of(&j));
            let p = i.gens()[0].mul(&j.gens()[0], &field, MonomialOrder::DEGREVLEX);
            prop_assert!(k.contains(&p));
        }

        #[test]
        fn colon_adjunction(i in arb_ideal(FieldSpec::Prime(101)), j in arb_ideal(FieldSpec::Prime(101)),
                            f in arb_poly(FieldSpec::Prime(101), 3, 3)) {
            let field = FieldSpec::Prime(101);
            let c = colon_poly(&i, &j).unwrap();
            let lhs = c.contains(&f);
            let rhs = j.gens().iter().all(|g| i.contains(&f.mul(g, &field, MonomialOrder::DEGREVLEX)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn colon_routes_agree(m in arb_artinian(FieldSpec::Prime(101)), j in arb_ideal(FieldSpec::Prime(101))) {
            let fast = colon_poly(&m, &j).unwrap();
            let slow = colon_by_intersection(&m, &j).unwrap();
            prop_assert!(fast == slow);
        }

        #[test]
        fn colon_of_monomials_matches(m in arb_artinian(FieldSpec::Rational), n in arb_artinian(FieldSpec::Rational)) {
            let a = m.as_monomial().unwrap();
            let b = n.as_monomial().unwrap();
            let expected = PolyIdeal::from_monomial(&a.colon(&b).unwrap());
            prop_assert!(colon_by_intersection(&m, &n).unwrap() == expected);
            prop_assert!(colon_poly(&m, &n).unwrap() == expected);
        }

        #[test]
        fn mono_sandwich(l in arb_ideal(FieldSpec::Prime(101)), a in 3u64..=5, b in 3u64..=5) {
            let r = l.ring().clone();
            let beta = MonomialIdeal::minimalize(&r, vec![vec![a, 0], vec![0, b]]);
            let mut gens = l.gens().to_vec();
            gens.extend(PolyIdeal::from_monomial(&beta).gens().iter().cloned());
            let l = PolyIdeal::new(&r, gens);
            let inner = mono(&l, &beta).unwrap();
            let hull = PolyIdeal::from_monomial(&mono_hull(&l));
            prop_assert!(PolyIdeal::from_monomial(&inner).is_subset_of(&l));
            prop_assert!(l.is_subset_of(&hull));
            // Every monomial of L in the box lies in mono(L).
            let one = l.field().one();
            for x in 0..a {
                for y in 0..b {
                    let in_l = l.contains(&Polynomial::monomial(vec![x, y], one.clone()));
                    prop_assert_eq!(in_l, inner.contains(&[x, y]));
                }
            }
        }
    }
}
