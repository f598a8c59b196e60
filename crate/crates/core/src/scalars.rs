//! Exact coefficient arithmetic.
//!
//! Three coefficient fields are supported: the rationals, prime fields
//! `F_p` with `p` a machine-word prime, and finite extensions `GF(p^k)`.
//! Extensions exist so that small characteristics (notably 2) can still
//! supply "general" coefficients; a computation in characteristic `p`
//! over `GF(p^k)` sees the same characteristic-dependent behavior as one
//! over an infinite field of characteristic `p`.
//!
//! Field operations live on [`FieldSpec`]; a [`Scalar`] is a plain value
//! that only means something together with the field it came from.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

/// Upper end of the integer range used for general coefficients over `Q`.
pub const RATIONAL_SAMPLE_BOUND: u64 = 1 << 20;

/// The prime used by default for "large characteristic" computations.
pub const DEFAULT_PRIME: u64 = 65537;

/// Prime fields below this size are replaced by an extension when general
/// coefficients are needed.
const SMALL_PRIME_LIMIT: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("not invertible")]
    NotInvertible,
    #[error("characteristic must be 0 or prime, got {0}")]
    NotPrime(u64),
    #[error("extension GF({p}^{degree}) does not fit in 64 bits")]
    ExtensionTooLarge { p: u64, degree: u32 },
}

/// A coefficient value.
///
/// Rationals are kept reduced with a positive denominator (zero is `0/1`);
/// residues are in `[0, p)` for prime fields, or a base-`p` packed
/// coefficient vector for extension fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue(u64),
}

impl Scalar {
    /// Builds `num/den` in lowest terms.
    pub fn canonicalize(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Scalar, ScalarError> {
        let den = den.into();
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Scalar::Rational(BigRational::new(num.into(), den)))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Residue(_) => None,
        }
    }

    pub fn as_residue(&self) -> Option<u64> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::Residue(r) => Some(*r),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Scalar::Residue(r) => write!(f, "{r}"),
        }
    }
}

/// The coefficient field of a ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
    Extension(Arc<ExtensionField>),
}

impl FieldSpec {
    /// The prime field `F_p`; `p` is checked with a deterministic
    /// Miller-Rabin test.
    pub fn prime(p: u64) -> Result<FieldSpec, ScalarError> {
        if is_prime(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(ScalarError::NotPrime(p))
        }
    }

    /// `0` selects the rationals, anything else must be prime.
    pub fn from_characteristic(c: u64) -> Result<FieldSpec, ScalarError> {
        if c == 0 {
            Ok(FieldSpec::Rational)
        } else {
            FieldSpec::prime(c)
        }
    }

    pub fn extension(p: u64, degree: u32) -> Result<FieldSpec, ScalarError> {
        Ok(FieldSpec::Extension(Arc::new(ExtensionField::new(p, degree)?)))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime(p) => *p,
            FieldSpec::Extension(e) => e.p,
        }
    }

    /// A field of the same characteristic large enough to sample general
    /// coefficients from. Small prime fields are replaced by `GF(p^k)` with
    /// `p^k >= 2^20`; everything else is returned unchanged.
    pub fn generic_extension(&self) -> FieldSpec {
        match self {
            FieldSpec::Prime(p) if *p < SMALL_PRIME_LIMIT => {
                let mut degree = 1u32;
                let mut order = *p;
                while order < RATIONAL_SAMPLE_BOUND {
                    order *= p;
                    degree += 1;
                }
                FieldSpec::extension(*p, degree).expect("extension of a small prime fits in 64 bits")
            }
            other => other.clone(),
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rational(BigRational::zero()),
            _ => Scalar::Residue(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rational(BigRational::one()),
            _ => Scalar::Residue(1),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(v.into())),
            FieldSpec::Prime(p) => Scalar::Residue((v as i128).rem_euclid(*p as i128) as u64),
            FieldSpec::Extension(e) => Scalar::Residue(e.embed_prime_residue((v as i128).rem_euclid(e.p as i128) as u64)),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue(r) => *r == 0,
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue(r) => *r == 1,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rational, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
            (FieldSpec::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => Scalar::Residue(add_mod(*x, *y, *p)),
            (FieldSpec::Extension(e), Scalar::Residue(x), Scalar::Residue(y)) => Scalar::Residue(e.add(*x, *y)),
            _ => mismatch(self, a, b),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Rational, Scalar::Rational(x)) => Scalar::Rational(-x),
            (FieldSpec::Prime(p), Scalar::Residue(x)) => Scalar::Residue(if *x == 0 { 0 } else { p - x }),
            (FieldSpec::Extension(e), Scalar::Residue(x)) => Scalar::Residue(e.neg(*x)),
            _ => mismatch(self, a, a),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rational, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x * y),
            (FieldSpec::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => Scalar::Residue(mul_mod(*x, *y, *p)),
            (FieldSpec::Extension(e), Scalar::Residue(x), Scalar::Residue(y)) => Scalar::Residue(e.mul(*x, *y)),
            _ => mismatch(self, a, b),
        }
    }

    /// Multiplicative inverse; zero has none.
    pub fn inv(&self, a: &Scalar) -> Result<Scalar, ScalarError> {
        if self.is_zero(a) {
            return Err(ScalarError::NotInvertible);
        }
        Ok(match (self, a) {
            (FieldSpec::Rational, Scalar::Rational(x)) => Scalar::Rational(x.recip()),
            (FieldSpec::Prime(p), Scalar::Residue(x)) => Scalar::Residue(pow_mod(*x, p - 2, *p)),
            (FieldSpec::Extension(e), Scalar::Residue(x)) => Scalar::Residue(e.inv(*x)),
            _ => mismatch(self, a, a),
        })
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, ScalarError> {
        if self.is_zero(b) {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// A uniformly random nonzero element: an integer in `[1, 2^20]` over
    /// `Q`, a residue in `[1, q-1]` over a finite field of order `q`.
    pub fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        match self {
            FieldSpec::Rational => {
                let v: u64 = rng.random_range(1..=RATIONAL_SAMPLE_BOUND);
                Scalar::Rational(BigRational::from_integer(v.into()))
            }
            FieldSpec::Prime(p) => Scalar::Residue(rng.random_range(1..*p)),
            FieldSpec::Extension(e) => Scalar::Residue(rng.random_range(1..e.order)),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "QQ"),
            FieldSpec::Prime(p) => write!(f, "GF({p})"),
            FieldSpec::Extension(e) => write!(f, "GF({}^{})", e.p, e.degree),
        }
    }
}

#[cold]
fn mismatch(field: &FieldSpec, a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar representation does not match field {field}: {a:?}, {b:?}")
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for w in WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for w in WITNESSES {
        let mut x = pow_mod(w, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `GF(p^k)` as `F_p[t]/(f)` for a monic irreducible `f` of degree `k`.
///
/// Elements are packed as `sum c_i p^i` with `0 <= c_i < p`, so the
/// prime subfield is embedded as the integers `0..p`.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct ExtensionField {
    p: u64,
    degree: u32,
    order: u64,
    /// Coefficients of the modulus, lowest degree first, without the
    /// leading 1.
    modulus: Vec<u64>,
}

impl ExtensionField {
    pub fn new(p: u64, degree: u32) -> Result<ExtensionField, ScalarError> {
        if !is_prime(p) {
            return Err(ScalarError::NotPrime(p));
        }
        let order = p
            .checked_pow(degree)
            .filter(|o| *o < (1u64 << 63))
            .ok_or(ScalarError::ExtensionTooLarge { p, degree })?;
        let modulus = find_irreducible(p, degree as usize);
        Ok(ExtensionField { p, degree, order, modulus })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    fn embed_prime_residue(&self, r: u64) -> u64 {
        r % self.p
    }

    fn unpack(&self, mut v: u64) -> Vec<u64> {
        let mut digits = vec![0; self.degree as usize];
        for d in digits.iter_mut() {
            *d = v % self.p;
            v /= self.p;
        }
        digits
    }

    fn pack(&self, digits: &[u64]) -> u64 {
        digits.iter().rev().fold(0, |acc, d| acc * self.p + d)
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            return a ^ b;
        }
        let (x, y) = (self.unpack(a), self.unpack(b));
        let s: Vec<u64> = x.iter().zip(&y).map(|(u, v)| add_mod(*u, *v, self.p)).collect();
        self.pack(&s)
    }

    fn neg(&self, a: u64) -> u64 {
        if self.p == 2 {
            return a;
        }
        let x: Vec<u64> = self.unpack(a).into_iter().map(|u| (self.p - u) % self.p).collect();
        self.pack(&x)
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            return self.mul_binary(a, b);
        }
        let k = self.degree as usize;
        let (x, y) = (self.unpack(a), self.unpack(b));
        let mut prod = vec![0u64; 2 * k];
        for (i, u) in x.iter().enumerate() {
            if *u == 0 {
                continue;
            }
            for (j, v) in y.iter().enumerate() {
                prod[i + j] = add_mod(prod[i + j], mul_mod(*u, *v, self.p), self.p);
            }
        }
        reduce_digits(&mut prod, &self.modulus, self.p);
        self.pack(&prod[..k])
    }

    fn mul_binary(&self, a: u64, b: u64) -> u64 {
        let k = self.degree;
        let mut acc: u128 = 0;
        let mut b = b as u128;
        let mut a = a as u128;
        while a != 0 {
            if a & 1 == 1 {
                acc ^= b;
            }
            a >>= 1;
            b <<= 1;
        }
        let poly = self.pack(&self.modulus) as u128 | (1u128 << k);
        for bit in (k..2 * k).rev() {
            if acc >> bit & 1 == 1 {
                acc ^= poly << (bit - k);
            }
        }
        acc as u64
    }

    fn inv(&self, a: u64) -> u64 {
        let mut exp = self.order - 2;
        let mut base = a;
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }
}

/// Reduces `digits` (a polynomial over `F_p`, lowest degree first) modulo
/// the monic polynomial `t^k + modulus`.
fn reduce_digits(digits: &mut [u64], modulus: &[u64], p: u64) {
    let k = modulus.len();
    for top in (k..digits.len()).rev() {
        let c = digits[top];
        if c == 0 {
            continue;
        }
        digits[top] = 0;
        for (i, m) in modulus.iter().enumerate() {
            let t = mul_mod(c, *m, p);
            digits[top - k + i] = add_mod(digits[top - k + i], p - t, p) % p;
        }
    }
}

/// Smallest (in packed order) monic irreducible polynomial of the given
/// degree over `F_p`, found with Rabin's test.
fn find_irreducible(p: u64, degree: usize) -> Vec<u64> {
    if degree == 1 {
        return vec![0];
    }
    let mut candidate = vec![0u64; degree];
    loop {
        // Skip polynomials with a zero constant term: divisible by t.
        if candidate[0] != 0 && rabin_irreducible(&candidate, p) {
            return candidate;
        }
        // Increment in base p.
        for c in candidate.iter_mut() {
            *c += 1;
            if *c < p {
                break;
            }
            *c = 0;
        }
    }
}

fn rabin_irreducible(modulus: &[u64], p: u64) -> bool {
    let k = modulus.len();
    let frobenius_iterate = |times: usize| -> Vec<u64> {
        // t^(p^times) mod f
        let mut h = vec![0u64; k];
        h[1] = 1;
        for _ in 0..times {
            h = poly_pow_mod(&h, p, modulus, p);
        }
        h
    };
    let mut t = vec![0u64; k];
    t[1] = 1;
    if frobenius_iterate(k) != t {
        return false;
    }
    for q in prime_factors(k as u64) {
        let mut h = frobenius_iterate(k / q as usize);
        h[1] = (h[1] + p - 1) % p;
        let mut f = modulus.to_vec();
        f.push(1);
        if poly_degree(&poly_gcd(f, h, p)) != Some(0) {
            return false;
        }
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn poly_mul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let k = modulus.len();
    let mut prod = vec![0u64; 2 * k];
    for (i, u) in a.iter().enumerate() {
        if *u == 0 {
            continue;
        }
        for (j, v) in b.iter().enumerate() {
            prod[i + j] = add_mod(prod[i + j], mul_mod(*u, *v, p), p);
        }
    }
    reduce_digits(&mut prod, modulus, p);
    prod.truncate(k);
    prod
}

fn poly_pow_mod(base: &[u64], mut exp: u64, modulus: &[u64], p: u64) -> Vec<u64> {
    let k = modulus.len();
    let mut acc = vec![0u64; k];
    acc[0] = 1;
    let mut b = base.to_vec();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mul_mod(&acc, &b, modulus, p);
        }
        b = poly_mul_mod(&b, &b, modulus, p);
        exp >>= 1;
    }
    acc
}

fn poly_degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|c| *c != 0)
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    while let Some(db) = poly_degree(&b) {
        // a <- a mod b
        let lead_inv = pow_mod(b[db], p - 2, p);
        while let Some(da) = poly_degree(&a) {
            if da < db {
                break;
            }
            let c = mul_mod(a[da], lead_inv, p);
            for i in 0..=db {
                let t = mul_mod(c, b[i], p);
                a[da - db + i] = add_mod(a[da - db + i], p - t, p);
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}
