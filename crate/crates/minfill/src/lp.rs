//! Exact rational linear programming.
//!
//! Minimizes a linear objective over `coeffs . x >= rhs` constraints with a
//! per-variable non-negativity mask. Free variables are split as
//! `x = x+ - x-`, then a dense two-phase simplex with Bland's rule (lowest
//! eligible index for both entering and leaving variables) runs entirely in
//! rational arithmetic. Outcomes carry exact witnesses: an optimal point, an
//! unbounded ray, or Farkas multipliers extracted from phase one.

use crate::rational::Rational;
use num::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("constraint {index} has {got} coefficients, expected {expected}")]
    BadConstraint { index: usize, expected: usize, got: usize },
    #[error("objective has {got} coefficients, expected {expected}")]
    BadObjective { expected: usize, got: usize },
    #[error("nonneg mask has {got} entries, expected {expected}")]
    BadMask { expected: usize, got: usize },
    #[error("internal solver error: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpConstraint {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

/// Minimize `objective . x` subject to every constraint `coeffs . x >= rhs`,
/// with `x[i] >= 0` where the mask is true and `x[i]` free otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub constraints: Vec<LpConstraint>,
    pub objective: Vec<Rational>,
    pub nonneg: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    /// Exact optimum and a feasible point attaining it.
    Optimal { value: Rational, point: Vec<Rational> },
    /// Feasible, with a recession direction along which the objective
    /// decreases without bound.
    Unbounded { ray: Vec<Rational> },
    /// One multiplier per constraint: u >= 0, u'A <= 0 on non-negative
    /// variables and = 0 on free ones, while u . rhs > 0.
    Infeasible { certificate: Vec<Rational> },
}

impl LpOutcome {
    pub fn optimal_value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, LpOutcome::Unbounded { .. })
    }
}

impl LinearProgram {
    pub fn validate(&self) -> Result<(), LpError> {
        for (index, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != self.num_vars {
                return Err(LpError::BadConstraint {
                    index,
                    expected: self.num_vars,
                    got: c.coeffs.len(),
                });
            }
        }
        if self.objective.len() != self.num_vars {
            return Err(LpError::BadObjective { expected: self.num_vars, got: self.objective.len() });
        }
        if self.nonneg.len() != self.num_vars {
            return Err(LpError::BadMask { expected: self.num_vars, got: self.nonneg.len() });
        }
        Ok(())
    }

    pub fn evaluate_objective(&self, point: &[Rational]) -> Rational {
        self.objective
            .iter()
            .zip(point)
            .fold(Rational::zero(), |acc, (c, x)| acc + c * x)
    }

    /// True when a point satisfies every constraint and the sign mask.
    pub fn is_feasible(&self, point: &[Rational]) -> bool {
        if point.len() != self.num_vars {
            return false;
        }
        for (i, nonneg) in self.nonneg.iter().enumerate() {
            if *nonneg && point[i].is_negative() {
                return false;
            }
        }
        self.constraints.iter().all(|c| {
            let lhs = c
                .coeffs
                .iter()
                .zip(point)
                .fold(Rational::zero(), |acc, (a, x)| acc + a * x);
            lhs >= c.rhs
        })
    }
}

/// Solve the program exactly.
pub fn solve(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    lp.validate()?;
    let mut tableau = Tableau::build(lp);
    match tableau.phase_one()? {
        PhaseOne::Infeasible(certificate) => {
            validate_certificate(lp, &certificate)?;
            Ok(LpOutcome::Infeasible { certificate })
        }
        PhaseOne::Feasible => match tableau.phase_two()? {
            PhaseTwo::Optimal => {
                let point = tableau.merged_point(lp);
                if !lp.is_feasible(&point) {
                    return Err(LpError::Internal("optimal point infeasible".into()));
                }
                let value = lp.evaluate_objective(&point);
                Ok(LpOutcome::Optimal { value, point })
            }
            PhaseTwo::Unbounded { entering } => {
                let ray = tableau.merged_ray(lp, entering);
                validate_ray(lp, &ray)?;
                Ok(LpOutcome::Unbounded { ray })
            }
        },
    }
}

fn validate_certificate(lp: &LinearProgram, u: &[Rational]) -> Result<(), LpError> {
    if u.iter().any(Signed::is_negative) {
        return Err(LpError::Internal("negative Farkas multiplier".into()));
    }
    for j in 0..lp.num_vars {
        let combo: Rational = lp
            .constraints
            .iter()
            .zip(u)
            .fold(Rational::zero(), |acc, (c, ui)| acc + &c.coeffs[j] * ui);
        let ok = if lp.nonneg[j] { !combo.is_positive() } else { combo.is_zero() };
        if !ok {
            return Err(LpError::Internal(format!("Farkas combination fails at variable {j}")));
        }
    }
    let value: Rational = lp
        .constraints
        .iter()
        .zip(u)
        .fold(Rational::zero(), |acc, (c, ui)| acc + &c.rhs * ui);
    if !value.is_positive() {
        return Err(LpError::Internal("Farkas certificate has non-positive value".into()));
    }
    Ok(())
}

fn validate_ray(lp: &LinearProgram, ray: &[Rational]) -> Result<(), LpError> {
    for (j, nonneg) in lp.nonneg.iter().enumerate() {
        if *nonneg && ray[j].is_negative() {
            return Err(LpError::Internal("ray leaves the positive orthant".into()));
        }
    }
    for (i, c) in lp.constraints.iter().enumerate() {
        let along: Rational = c
            .coeffs
            .iter()
            .zip(ray)
            .fold(Rational::zero(), |acc, (a, d)| acc + a * d);
        if along.is_negative() {
            return Err(LpError::Internal(format!("ray exits constraint {i}")));
        }
    }
    let drop: Rational = lp
        .objective
        .iter()
        .zip(ray)
        .fold(Rational::zero(), |acc, (c, d)| acc + c * d);
    if !drop.is_negative() {
        return Err(LpError::Internal("ray does not improve the objective".into()));
    }
    Ok(())
}

enum PhaseOne {
    Feasible,
    Infeasible(Vec<Rational>),
}

enum PhaseTwo {
    Optimal,
    Unbounded { entering: usize },
}

/// Column layout: split structural variables, then one slack per row, then
/// artificials for rows that started without a basic slack.
struct Tableau {
    /// (original variable, +1 or -1) per structural column.
    split: Vec<(usize, i32)>,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    obj1: Vec<Rational>,
    obj2: Vec<Rational>,
    slack_start: usize,
    art_start: usize,
    num_cols: usize,
    pivots: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let mut split = Vec::new();
        for (j, &nonneg) in lp.nonneg.iter().enumerate() {
            split.push((j, 1));
            if !nonneg {
                split.push((j, -1));
            }
        }
        let d = split.len();
        let m = lp.constraints.len();
        let slack_start = d;
        let art_start = d + m;

        // Rows with negative rhs are negated so every right side is >= 0;
        // their slack column then carries +1 and serves as the initial basis.
        // Other rows get an artificial variable.
        let flipped: Vec<bool> = lp.constraints.iter().map(|c| c.rhs.is_negative()).collect();
        let num_art = flipped.iter().filter(|&&f| !f).count();
        let num_cols = d + m + num_art;

        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut next_art = art_start;
        for (i, c) in lp.constraints.iter().enumerate() {
            let sign = if flipped[i] { -1 } else { 1 };
            let mut row = vec![Rational::zero(); num_cols];
            for (col, &(j, s)) in split.iter().enumerate() {
                let v = &c.coeffs[j] * Rational::from_integer((s * sign).into());
                row[col] = v;
            }
            // Surplus: a.y - s = b, negated to -a.y + s = -b on flipped rows.
            row[slack_start + i] = Rational::from_integer((-sign).into());
            if flipped[i] {
                basis.push(slack_start + i);
            } else {
                row[next_art] = Rational::one();
                basis.push(next_art);
                next_art += 1;
            }
            rows.push(row);
            rhs.push(if flipped[i] { -&c.rhs } else { c.rhs.clone() });
        }

        // Reduced-cost rows. Phase 1 minimizes the artificial sum; basic
        // artificial columns are eliminated up front. Phase 2 costs come from
        // the split objective; the initial basis has zero cost there.
        let mut obj1 = vec![Rational::zero(); num_cols];
        for col in art_start..num_cols {
            obj1[col] = Rational::one();
        }
        for (r, &b) in basis.iter().enumerate() {
            if b >= art_start {
                for col in 0..num_cols {
                    if !rows[r][col].is_zero() {
                        let delta = rows[r][col].clone();
                        obj1[col] -= delta;
                    }
                }
            }
        }
        let mut obj2 = vec![Rational::zero(); num_cols];
        for (col, &(j, s)) in split.iter().enumerate() {
            obj2[col] = &lp.objective[j] * Rational::from_integer(s.into());
        }

        Tableau {
            split,
            rows,
            rhs,
            basis,
            obj1,
            obj2,
            slack_start,
            art_start,
            num_cols,
            pivots: 0,
        }
    }

    fn pivot(&mut self, row: usize, col: usize) -> Result<(), LpError> {
        self.pivots += 1;
        if self.pivots > 1_000_000 {
            return Err(LpError::Internal("pivot limit exceeded".into()));
        }
        let p = self.rows[row][col].clone();
        if p.is_zero() {
            return Err(LpError::Internal("zero pivot".into()));
        }
        if !p.is_one() {
            for c in 0..self.num_cols {
                if !self.rows[row][c].is_zero() {
                    self.rows[row][c] /= &p;
                }
            }
            self.rhs[row] /= &p;
        }
        let pivot_row = self.rows[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for r in 0..self.rows.len() {
            if r == row || self.rows[r][col].is_zero() {
                continue;
            }
            let factor = self.rows[r][col].clone();
            for c in 0..self.num_cols {
                if !pivot_row[c].is_zero() {
                    let delta = &factor * &pivot_row[c];
                    self.rows[r][c] -= delta;
                }
            }
            let delta = &factor * &pivot_rhs;
            self.rhs[r] -= delta;
        }
        for obj in [&mut self.obj1, &mut self.obj2] {
            if !obj[col].is_zero() {
                let factor = obj[col].clone();
                for c in 0..self.num_cols {
                    if !pivot_row[c].is_zero() {
                        let delta = &factor * &pivot_row[c];
                        obj[c] -= delta;
                    }
                }
            }
        }
        self.basis[row] = col;
        Ok(())
    }

    /// Bland entering rule: lowest column index with a negative reduced cost.
    fn entering_phase1(&self) -> Option<usize> {
        (0..self.num_cols).find(|&c| self.obj1[c].is_negative())
    }

    fn entering_phase2(&self) -> Option<usize> {
        (0..self.num_cols.min(self.art_start)).find(|&c| self.obj2[c].is_negative())
    }

    /// Ratio test with Bland tie-breaking: among rows attaining the minimum
    /// ratio, the one whose basic variable has the lowest column index.
    fn leaving(&self, entering: usize) -> Option<usize> {
        let mut best: Option<(Rational, usize)> = None;
        for r in 0..self.rows.len() {
            let a = &self.rows[r][entering];
            if !a.is_positive() {
                continue;
            }
            let ratio = &self.rhs[r] / a;
            match &best {
                None => best = Some((ratio, r)),
                Some((cur, cur_r)) => {
                    if ratio < *cur
                        || (ratio == *cur && self.basis[r] < self.basis[*cur_r])
                    {
                        best = Some((ratio, r));
                    }
                }
            }
        }
        best.map(|(_, r)| r)
    }

    fn phase_one(&mut self) -> Result<PhaseOne, LpError> {
        while let Some(col) = self.entering_phase1() {
            let Some(row) = self.leaving(col) else {
                return Err(LpError::Internal("phase one cannot be unbounded".into()));
            };
            self.pivot(row, col)?;
        }
        let residual: Rational = self
            .basis
            .iter()
            .zip(&self.rhs)
            .filter(|(&b, _)| b >= self.art_start)
            .fold(Rational::zero(), |acc, (_, v)| acc + v);
        if residual.is_positive() {
            // One multiplier per constraint: the reduced cost of its slack.
            let certificate: Vec<Rational> =
                (0..self.rows.len()).map(|i| self.obj1[self.slack_start + i].clone()).collect();
            return Ok(PhaseOne::Infeasible(certificate));
        }

        // Drive leftover artificials (all at value zero) out of the basis;
        // rows with no structural or slack support are redundant.
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] < self.art_start {
                r += 1;
                continue;
            }
            match (0..self.art_start).find(|&c| !self.rows[r][c].is_zero()) {
                Some(c) => {
                    self.pivot(r, c)?;
                    r += 1;
                }
                None => {
                    self.rows.remove(r);
                    self.rhs.remove(r);
                    self.basis.remove(r);
                }
            }
        }
        // Artificial columns are dead from here on.
        for row in &mut self.rows {
            row.truncate(self.art_start);
        }
        self.obj1.truncate(self.art_start);
        self.obj2.truncate(self.art_start);
        self.num_cols = self.art_start;
        Ok(PhaseOne::Feasible)
    }

    fn phase_two(&mut self) -> Result<PhaseTwo, LpError> {
        loop {
            let Some(col) = self.entering_phase2() else {
                return Ok(PhaseTwo::Optimal);
            };
            let Some(row) = self.leaving(col) else {
                return Ok(PhaseTwo::Unbounded { entering: col });
            };
            self.pivot(row, col)?;
        }
    }

    /// Basic solution merged back to the original variables.
    fn merged_point(&self, lp: &LinearProgram) -> Vec<Rational> {
        let mut point = vec![Rational::zero(); lp.num_vars];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < self.slack_start {
                let (j, s) = self.split[b];
                if s > 0 {
                    point[j] += &self.rhs[r];
                } else {
                    point[j] -= &self.rhs[r];
                }
            }
        }
        point
    }

    /// Recession direction for an entering column with no blocking row.
    fn merged_ray(&self, lp: &LinearProgram, entering: usize) -> Vec<Rational> {
        let mut ray = vec![Rational::zero(); lp.num_vars];
        let apply = |ray: &mut Vec<Rational>, col: usize, amount: &Rational| {
            if col < self.slack_start {
                let (j, s) = self.split[col];
                if s > 0 {
                    ray[j] += amount;
                } else {
                    ray[j] -= amount;
                }
            }
        };
        apply(&mut ray, entering, &Rational::one());
        for (r, &b) in self.basis.iter().enumerate() {
            let adjust = -&self.rows[r][entering];
            if !adjust.is_zero() {
                apply(&mut ray, b, &adjust);
            }
        }
        ray
    }
}
