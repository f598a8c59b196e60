//! Newton polyhedra of monomial ideals.
//!
//! `NP(I) = conv(gens) + R_{>=0}^d`. Membership and interior questions are
//! answered with exact LPs over the generators (the V-description), never
//! with facets.
//!
//! Closure and adjoint scans work line by line along the last coordinate.
//! For a fixed prefix `p'` the admissible last coordinates form a ray
//! `[f(p'), inf)` where `f(p') = min { z : (p', z) in NP }` is a single LP.
//! `NP` is the epigraph of the convex function `f` over `D`, the Newton
//! polyhedron of the projected generators, so the interior of `NP` is
//! `{ (p', z) : p' in int D, z > f(p') }`.

pub mod lp;

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::grid::Grid;
use crate::monomials::{ExponentVector, MonomialError, MonomialIdeal, RingContext};
pub use lp::{lp_solve, Constraint, LinearProgram, LpResult, LpStatus, Relation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NewtonError {
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Monomial(#[from] MonomialError),
    #[error("scan box too large")]
    TooLarge,
}

/// The polyhedron `conv(gens) + orthant` of a zero-dimensional ideal.
#[derive(Debug, Clone)]
pub struct NewtonPolyhedron {
    dim: usize,
    vertices: Vec<Vec<BigRational>>,
}

impl NewtonPolyhedron {
    pub fn new(ideal: &MonomialIdeal) -> Result<NewtonPolyhedron, NewtonError> {
        ideal.pure_power_exponents()?;
        Ok(Self::scaled(ideal.gens(), ideal.dim(), 1))
    }

    /// `t · NP(I)`, which is `NP(I^t)`.
    fn scaled(gens: &[ExponentVector], dim: usize, t: u64) -> NewtonPolyhedron {
        let vertices = gens
            .iter()
            .map(|g| g.iter().map(|c| q(BigInt::from(*c) * t)).collect())
            .collect();
        NewtonPolyhedron { dim, vertices }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check_dim(&self, p: &[BigRational]) -> Result<(), NewtonError> {
        if p.len() != self.dim {
            return Err(NewtonError::DimensionMismatch { expected: self.dim, got: p.len() });
        }
        Ok(())
    }

    pub fn contains(&self, p: &[BigRational]) -> Result<bool, NewtonError> {
        self.check_dim(p)?;
        let lp = self.hull_program(p, false);
        Ok(lp_solve(&lp).status != LpStatus::Infeasible)
    }

    /// `p` in the topological interior of the polyhedron in `R^d`.
    ///
    /// `p` is interior iff `p - eps·1` lies in NP for some `eps > 0`: the
    /// recession cone is the whole orthant, so adding its open interior to
    /// any point of NP lands in the interior, and conversely an interior
    /// point stays in NP after a small shift along `-1`.
    pub fn interior_contains(&self, p: &[BigRational]) -> Result<bool, NewtonError> {
        self.check_dim(p)?;
        Ok(self.max_margin(p).is_positive())
    }

    /// Constraints `sum λ_j v_j (+ eps·1) <= p`, `sum λ_j = 1`.
    fn hull_program(&self, p: &[BigRational], with_eps: bool) -> LinearProgram {
        let m = self.vertices.len();
        let n = m + usize::from(with_eps);
        let mut lp = LinearProgram::new(n);
        for (i, pi) in p.iter().enumerate() {
            let mut row: Vec<BigRational> = self.vertices.iter().map(|v| v[i].clone()).collect();
            if with_eps {
                row.push(BigRational::one());
            }
            lp.add(row, Relation::Le, pi.clone());
        }
        let mut sum = vec![BigRational::one(); m];
        if with_eps {
            sum.push(BigRational::zero());
            lp.free[m] = true;
            lp.objective[m] = BigRational::one();
        }
        lp.add(sum, Relation::Eq, BigRational::one());
        lp
    }

    fn max_margin(&self, p: &[BigRational]) -> BigRational {
        if self.dim == 0 {
            return BigRational::one();
        }
        let r = lp_solve(&self.hull_program(p, true));
        match r.status {
            LpStatus::Optimal => r.optimum.expect("optimal LP has a value"),
            // eps is bounded by min p_i and the system is feasible for eps
            // very negative, so neither case can occur.
            _ => unreachable!("margin LP is feasible and bounded"),
        }
    }

    /// `min { z : (prefix, z) in NP }` for the last coordinate `z`.
    fn last_coordinate_floor(&self, prefix: &[BigRational]) -> Option<BigRational> {
        let d = self.dim;
        let mut lp = LinearProgram::new(self.vertices.len());
        for (i, pi) in prefix.iter().enumerate() {
            lp.add(self.vertices.iter().map(|v| v[i].clone()).collect(), Relation::Le, pi.clone());
        }
        lp.add(vec![BigRational::one(); self.vertices.len()], Relation::Eq, BigRational::one());
        lp.objective = self.vertices.iter().map(|v| -&v[d - 1]).collect();
        let r = lp_solve(&lp);
        match r.status {
            LpStatus::Optimal => Some(-r.optimum.expect("optimal LP has a value")),
            LpStatus::Infeasible => None,
            LpStatus::Unbounded => unreachable!("objective is bounded by the vertices"),
        }
    }

    /// The polyhedron of the generators with the last coordinate dropped.
    fn project(&self) -> NewtonPolyhedron {
        let vertices = self.vertices.iter().map(|v| v[..self.dim - 1].to_vec()).collect();
        NewtonPolyhedron { dim: self.dim - 1, vertices }
    }
}

fn q(v: BigInt) -> BigRational {
    BigRational::from_integer(v)
}

fn q_vec(p: &[u64]) -> Vec<BigRational> {
    p.iter().map(|c| q(BigInt::from(*c))).collect()
}

/// `p ∈ NP(I)`.
pub fn np_member(ideal: &MonomialIdeal, p: &[BigRational]) -> Result<bool, NewtonError> {
    NewtonPolyhedron::new(ideal)?.contains(p)
}

/// `p ∈ NP°(I)`.
pub fn np_interior(ideal: &MonomialIdeal, p: &[BigRational]) -> Result<bool, NewtonError> {
    NewtonPolyhedron::new(ideal)?.interior_contains(p)
}

pub fn integral_closure(ideal: &MonomialIdeal) -> Result<MonomialIdeal, NewtonError> {
    closure_of_power(ideal, 1)
}

/// The integral closure of `I^t`, read off `t · NP(I)`.
pub fn closure_of_power(ideal: &MonomialIdeal, t: u64) -> Result<MonomialIdeal, NewtonError> {
    assert!(t >= 1, "power must be positive");
    scan(ideal, t, false)
}

/// Howald's adjoint of `I^c`: exponents `α` with `α + 1` interior to `c · NP(I)`.
pub fn adjoint(ideal: &MonomialIdeal, c: u64) -> Result<MonomialIdeal, NewtonError> {
    assert!(c >= 1, "power must be positive");
    scan(ideal, c, true)
}

pub fn is_integrally_closed(ideal: &MonomialIdeal) -> Result<bool, NewtonError> {
    Ok(integral_closure(ideal)? == *ideal)
}

/// `I^t` integrally closed for every `1 <= t <= max_t`.
pub fn is_normal_up_to(ideal: &MonomialIdeal, max_t: u64) -> Result<bool, NewtonError> {
    let mut power = ideal.clone();
    for t in 1..=max_t {
        if t > 1 {
            power = power.product(ideal)?;
        }
        if closure_of_power(ideal, t)? != power {
            return Ok(false);
        }
    }
    Ok(true)
}

const NONE: u64 = u64::MAX;

fn scan(ideal: &MonomialIdeal, scale: u64, interior: bool) -> Result<MonomialIdeal, NewtonError> {
    let n = ideal.pure_power_exponents()?;
    let d = ideal.dim();
    let ring: &Arc<RingContext> = ideal.ring();
    if d == 0 {
        return Ok(MonomialIdeal::unit(ring));
    }
    let bounds: Vec<u64> = n
        .iter()
        .map(|k| k.checked_mul(scale).ok_or(MonomialError::Overflow))
        .collect::<Result<_, _>>()?;
    let np = NewtonPolyhedron::scaled(ideal.gens(), d, scale);
    let projected = np.project();
    let dims: Vec<u64> = bounds[..d - 1]
        .iter()
        .map(|b| b.checked_add(1).ok_or(NewtonError::TooLarge))
        .collect::<Result<_, _>>()?;
    let grid = Grid::new(&dims).ok_or(NewtonError::TooLarge)?;
    let strides = grid.strides().to_vec();
    let last_bound = bounds[d - 1];

    // first[idx]: smallest admissible last coordinate over the prefix, or NONE.
    let mut first = vec![NONE; grid.len()];
    let mut gens = Vec::new();
    for idx in 0..grid.len() {
        let prefix = grid.point(idx);
        let mut upper = NONE;
        for (i, c) in prefix.iter().enumerate() {
            if *c > 0 {
                upper = upper.min(first[idx - strides[i]]);
            }
        }
        let t = if upper == 0 {
            0
        } else if interior {
            let shifted: Vec<u64> = prefix.iter().map(|c| c + 1).collect();
            let shifted = q_vec(&shifted);
            if upper == NONE && d > 1 && !projected.max_margin(&shifted).is_positive() {
                NONE
            } else {
                match np.last_coordinate_floor(&shifted) {
                    Some(f) => f.floor().to_integer().to_u64().expect("floor is nonnegative"),
                    None => NONE,
                }
            }
        } else {
            match np.last_coordinate_floor(&q_vec(&prefix)) {
                Some(f) => f.ceil().to_integer().to_u64().expect("ceiling is nonnegative"),
                None => NONE,
            }
        };
        let t = t.min(upper);
        debug_assert!(t == NONE || t <= last_bound);
        first[idx] = t;
        if t != NONE && t < upper {
            let mut g = prefix;
            g.push(t);
            gens.push(ExponentVector::new(g));
        }
    }
    Ok(MonomialIdeal::minimalize(ring, gens))
}

/// `sum a_i / n_i >= 1`, the closure criterion for pure powers.
#[cfg(test)]
fn simplex_member(a: &[u64], n: &[u64]) -> bool {
    use num_integer::Integer;
    let l = n.iter().fold(1u64, |acc, x| acc.lcm(x));
    a.iter().zip(n).map(|(ai, ni)| ai * (l / ni)).sum::<u64>() >= l
}
