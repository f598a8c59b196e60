//! Exact two-phase simplex over the rationals.
//!
//! Dense tableau, Bland's rule for both entering and leaving variables, so
//! the method terminates even on degenerate problems. Problems here are
//! tiny (a handful of rows, a few dozen columns), which is what makes the
//! dense layout and recomputed reduced costs acceptable.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub relation: Relation,
    pub rhs: BigRational,
}

/// Maximize `objective · x` subject to the constraints. Variables are
/// nonnegative unless marked free.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<BigRational>,
    pub constraints: Vec<Constraint>,
    pub free: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpResult {
    pub status: LpStatus,
    /// Objective value at the returned vertex, when optimal.
    pub optimum: Option<BigRational>,
    /// A feasible point attaining the optimum, when optimal.
    pub certificate: Option<Vec<BigRational>>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> LinearProgram {
        LinearProgram {
            objective: vec![BigRational::zero(); num_vars],
            constraints: Vec::new(),
            free: vec![false; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add(&mut self, coeffs: Vec<BigRational>, relation: Relation, rhs: BigRational) {
        assert_eq!(coeffs.len(), self.num_vars());
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    /// True iff `x` satisfies every constraint and sign restriction exactly.
    pub fn is_feasible_point(&self, x: &[BigRational]) -> bool {
        if x.len() != self.num_vars() {
            return false;
        }
        if x.iter().zip(&self.free).any(|(v, f)| !f && v.is_negative()) {
            return false;
        }
        self.constraints.iter().all(|c| {
            let lhs: BigRational = c.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
            match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Eq => lhs == c.rhs,
                Relation::Ge => lhs >= c.rhs,
            }
        })
    }
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        for v in self.rows[r].iter_mut() {
            *v = &*v / &p;
        }
        self.rhs[r] = &self.rhs[r] / &p;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][col].is_zero() {
                continue;
            }
            let f = self.rows[i][col].clone();
            for (v, pv) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        self.basis[r] = col;
    }

    /// Runs simplex iterations maximizing `cost` over the allowed columns.
    /// Returns false if the problem is unbounded.
    fn optimize(&mut self, cost: &[BigRational], allowed: &[bool]) -> bool {
        loop {
            let entering = (0..self.cols).find(|&j| {
                allowed[j] && !self.basis.contains(&j) && self.reduced_cost(cost, j).is_positive()
            });
            let Some(j) = entering else { return true };
            let mut best: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, j),
            }
        }
    }

    fn reduced_cost(&self, cost: &[BigRational], j: usize) -> BigRational {
        let mut rc = cost[j].clone();
        for (i, b) in self.basis.iter().enumerate() {
            if !cost[*b].is_zero() && !self.rows[i][j].is_zero() {
                rc -= &cost[*b] * &self.rows[i][j];
            }
        }
        rc
    }

    fn value(&self, cost: &[BigRational]) -> BigRational {
        self.basis.iter().zip(&self.rhs).map(|(b, v)| &cost[*b] * v).sum()
    }
}

/// Solves `lp` exactly. An optimal certificate is re-verified against the
/// original constraints before it is returned.
pub fn lp_solve(lp: &LinearProgram) -> LpResult {
    let n = lp.num_vars();
    // Column layout: split originals (x+ for every var, x- for free ones),
    // then one slack/surplus per inequality, then artificials.
    let mut orig_cols: Vec<(usize, Option<usize>)> = Vec::with_capacity(n);
    let mut cols = 0;
    for f in &lp.free {
        let pos = cols;
        cols += 1;
        let neg = if *f {
            cols += 1;
            Some(cols - 1)
        } else {
            None
        };
        orig_cols.push((pos, neg));
    }
    let structural = cols;
    let slack_count = lp.constraints.iter().filter(|c| c.relation != Relation::Eq).count();
    let m = lp.constraints.len();
    let total = structural + slack_count + m;

    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut slack = structural;
    for (i, c) in lp.constraints.iter().enumerate() {
        let mut row = vec![BigRational::zero(); total];
        for (k, a) in c.coeffs.iter().enumerate() {
            let (pos, neg) = orig_cols[k];
            row[pos] = a.clone();
            if let Some(neg) = neg {
                row[neg] = -a;
            }
        }
        match c.relation {
            Relation::Le => {
                row[slack] = BigRational::from_integer(1.into());
                slack += 1;
            }
            Relation::Ge => {
                row[slack] = BigRational::from_integer((-1).into());
                slack += 1;
            }
            Relation::Eq => {}
        }
        let mut b = c.rhs.clone();
        if b.is_negative() {
            for v in row.iter_mut() {
                *v = -&*v;
            }
            b = -b;
        }
        let art = structural + slack_count + i;
        row[art] = BigRational::from_integer(1.into());
        rows.push(row);
        rhs.push(b);
        basis.push(art);
    }
    let mut t = Tableau { rows, rhs, basis, cols: total };

    // Phase 1: maximize -(sum of artificials).
    let mut phase1 = vec![BigRational::zero(); total];
    for c in phase1.iter_mut().skip(structural + slack_count) {
        *c = BigRational::from_integer((-1).into());
    }
    let all = vec![true; total];
    t.optimize(&phase1, &all);
    if t.value(&phase1).is_negative() {
        return LpResult { status: LpStatus::Infeasible, optimum: None, certificate: None };
    }
    // Drive remaining (zero-valued) artificials out of the basis.
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= structural + slack_count {
            match (0..structural + slack_count).find(|j| !t.rows[r][*j].is_zero()) {
                Some(j) => t.pivot(r, j),
                None => {
                    t.rows.remove(r);
                    t.rhs.remove(r);
                    t.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }

    // Phase 2.
    let mut cost = vec![BigRational::zero(); total];
    for (k, (pos, neg)) in orig_cols.iter().enumerate() {
        cost[*pos] = lp.objective[k].clone();
        if let Some(neg) = neg {
            cost[*neg] = -&lp.objective[k];
        }
    }
    let allowed: Vec<bool> = (0..total).map(|j| j < structural + slack_count).collect();
    if !t.optimize(&cost, &allowed) {
        return LpResult { status: LpStatus::Unbounded, optimum: None, certificate: None };
    }

    let mut col_value = vec![BigRational::zero(); total];
    for (b, v) in t.basis.iter().zip(&t.rhs) {
        col_value[*b] = v.clone();
    }
    let x: Vec<BigRational> = orig_cols
        .iter()
        .map(|(pos, neg)| match neg {
            Some(neg) => &col_value[*pos] - &col_value[*neg],
            None => col_value[*pos].clone(),
        })
        .collect();
    assert!(lp.is_feasible_point(&x), "simplex certificate violates the constraints");
    let optimum: BigRational = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    LpResult { status: LpStatus::Optimal, optimum: Some(optimum), certificate: Some(x) }
}
