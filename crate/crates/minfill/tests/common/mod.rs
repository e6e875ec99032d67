//! Shared test oracles, independent of the implementation paths they check.
//!
//! - A brute-force LP solver: split free variables, enumerate candidate
//!   vertices as solutions of square subsystems, and detect unboundedness by
//!   enumerating the normalized recession polytope. Exact rationals only.
//! - A brute-force binary-topology enumerator over Prufer sequences,
//!   deduplicated by label-fixing canonical signatures.

#![allow(dead_code)]

use minfill::lp::{LinearProgram, LpConstraint};
use minfill::rational::{rat, Rational};
use minfill::topology::TreeTopology;
use num::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    Optimal(Rational),
    Unbounded,
    Infeasible,
}

/// Solve a small LP by exhaustive vertex enumeration in the split space.
pub fn oracle_solve(lp: &LinearProgram) -> OracleOutcome {
    // Split columns: (variable, sign).
    let mut split: Vec<(usize, i64)> = Vec::new();
    for (j, &nonneg) in lp.nonneg.iter().enumerate() {
        split.push((j, 1));
        if !nonneg {
            split.push((j, -1));
        }
    }
    let d = split.len();
    let objective: Vec<Rational> = split
        .iter()
        .map(|&(j, s)| &lp.objective[j] * rat(s))
        .collect();

    // Constraint rows in split coordinates plus the non-negativity bounds.
    let mut rows: Vec<(Vec<Rational>, Rational)> = lp
        .constraints
        .iter()
        .map(|c| {
            (
                split.iter().map(|&(j, s)| &c.coeffs[j] * rat(s)).collect(),
                c.rhs.clone(),
            )
        })
        .collect();
    for k in 0..d {
        let mut row = vec![Rational::zero(); d];
        row[k] = Rational::one();
        rows.push((row, Rational::zero()));
    }

    let feasible = |y: &[Rational]| {
        rows.iter().all(|(coeffs, rhs)| {
            let lhs: Rational = coeffs.iter().zip(y).map(|(a, v)| a * v).sum();
            lhs >= *rhs
        })
    };

    let mut best: Option<Rational> = None;
    if d == 0 {
        // No variables: feasibility is a constant-sign question.
        return if lp.constraints.iter().all(|c| !c.rhs.is_positive()) {
            OracleOutcome::Optimal(Rational::zero())
        } else {
            OracleOutcome::Infeasible
        };
    }
    for_each_subset(rows.len(), d, |subset| {
        let system: Vec<(&[Rational], &Rational)> =
            subset.iter().map(|&i| (rows[i].0.as_slice(), &rows[i].1)).collect();
        if let Some(y) = solve_square(&system, d) {
            if feasible(&y) {
                let value: Rational = objective.iter().zip(&y).map(|(c, v)| c * v).sum();
                if best.as_ref().map_or(true, |b| value < *b) {
                    best = Some(value);
                }
            }
        }
    });
    let Some(best) = best else {
        // The split polyhedron lives in the positive orthant, so a nonempty
        // feasible set has a vertex; none found means infeasible.
        return OracleOutcome::Infeasible;
    };

    // Recession directions, normalized onto the simplex sum(y) = 1:
    // rows A.d >= 0, d >= 0, plus the two halves of the normalization.
    let mut cone_rows: Vec<(Vec<Rational>, Rational)> = lp
        .constraints
        .iter()
        .map(|c| {
            (
                split.iter().map(|&(j, s)| &c.coeffs[j] * rat(s)).collect(),
                Rational::zero(),
            )
        })
        .collect();
    for k in 0..d {
        let mut row = vec![Rational::zero(); d];
        row[k] = Rational::one();
        cone_rows.push((row, Rational::zero()));
    }
    cone_rows.push((vec![Rational::one(); d], Rational::one()));
    cone_rows.push((vec![-Rational::one(); d], -Rational::one()));
    let cone_feasible = |y: &[Rational]| {
        cone_rows.iter().all(|(coeffs, rhs)| {
            let lhs: Rational = coeffs.iter().zip(y).map(|(a, v)| a * v).sum();
            lhs >= *rhs
        })
    };
    let mut unbounded = false;
    for_each_subset(cone_rows.len(), d, |subset| {
        if unbounded {
            return;
        }
        let system: Vec<(&[Rational], &Rational)> = subset
            .iter()
            .map(|&i| (cone_rows[i].0.as_slice(), &cone_rows[i].1))
            .collect();
        if let Some(dir) = solve_square(&system, d) {
            if cone_feasible(&dir) {
                let drop: Rational = objective.iter().zip(&dir).map(|(c, v)| c * v).sum();
                if drop.is_negative() {
                    unbounded = true;
                }
            }
        }
    });
    if unbounded {
        OracleOutcome::Unbounded
    } else {
        OracleOutcome::Optimal(best)
    }
}

/// Visit every size-k subset of 0..n in lexicographic order.
fn for_each_subset<F: FnMut(&[usize])>(n: usize, k: usize, mut f: F) {
    if k > n {
        return;
    }
    if k == 0 {
        f(&[]);
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k as isize - 1;
        while i >= 0 && idx[i as usize] == i as usize + n - k {
            i -= 1;
        }
        if i < 0 {
            return;
        }
        let i = i as usize;
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Solve a k x k rational system by Gaussian elimination; None if singular.
fn solve_square(system: &[(&[Rational], &Rational)], k: usize) -> Option<Vec<Rational>> {
    let mut a: Vec<Vec<Rational>> = system.iter().map(|(row, _)| row.to_vec()).collect();
    let mut b: Vec<Rational> = system.iter().map(|(_, rhs)| (*rhs).clone()).collect();
    for col in 0..k {
        let pivot = (col..k).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for c in col..k {
            a[col][c] /= &p;
        }
        b[col] /= &p;
        for r in 0..k {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in col..k {
                let delta = &factor * &a[col][c];
                a[r][c] -= delta;
            }
            let delta = &factor * &b[col];
            b[r] -= delta;
        }
    }
    Some(b)
}

/// Deterministic random LP in the acceptance regime: up to 4 variables with
/// a mixed sign mask (at most two free), up to 8 constraints, small integer
/// data.
pub fn random_lp(rng: &mut ChaCha8Rng) -> LinearProgram {
    let num_vars = rng.gen_range(1..=4);
    let num_free = rng.gen_range(0..=2.min(num_vars));
    let mut nonneg = vec![true; num_vars];
    let mut freed = 0;
    while freed < num_free {
        let j = rng.gen_range(0..num_vars);
        if nonneg[j] {
            nonneg[j] = false;
            freed += 1;
        }
    }
    let num_constraints = rng.gen_range(1..=8);
    let constraints = (0..num_constraints)
        .map(|_| LpConstraint {
            coeffs: (0..num_vars).map(|_| rat(rng.gen_range(-5..=5))).collect(),
            rhs: rat(rng.gen_range(-8..=8)),
        })
        .collect();
    let objective = (0..num_vars).map(|_| rat(rng.gen_range(-5..=5))).collect();
    LinearProgram { num_vars, constraints, objective, nonneg }
}

/// All binary topologies on the labels by exhausting Prufer sequences over
/// n + (n-2) vertices, keyed by canonical signature.
pub fn brute_force_binary_signatures(labels: &[String]) -> BTreeSet<String> {
    let n = labels.len();
    assert!(n >= 3, "brute force needs n >= 3");
    let nv = 2 * n - 2;
    let seq_len = nv - 2;
    let mut signatures = BTreeSet::new();
    let mut seq = vec![0usize; seq_len];
    loop {
        if let Some(tree) = tree_from_prufer(labels, &seq) {
            signatures.insert(tree.canonical_signature());
        }
        // Advance the base-nv odometer.
        let mut pos = seq_len;
        loop {
            if pos == 0 {
                return signatures;
            }
            pos -= 1;
            seq[pos] += 1;
            if seq[pos] < nv {
                break;
            }
            seq[pos] = 0;
            if pos == 0 {
                return signatures;
            }
        }
    }
}

/// Decode one Prufer sequence and keep it only if boundary vertices end up
/// with degree 1 and interior vertices with degree 3.
fn tree_from_prufer(labels: &[String], seq: &[usize]) -> Option<TreeTopology> {
    let n = labels.len();
    let nv = 2 * n - 2;
    let mut degree = vec![1usize; nv];
    for &s in seq {
        degree[s] += 1;
    }
    for v in 0..nv {
        let want = if v < n { 1 } else { 3 };
        if degree[v] != want {
            return None;
        }
    }
    let mut remaining = degree.clone();
    let mut used = vec![false; nv];
    let mut edges = Vec::with_capacity(nv - 1);
    for &s in seq {
        let leaf = (0..nv).find(|&v| remaining[v] == 1 && !used[v])?;
        edges.push((leaf, s));
        used[leaf] = true;
        remaining[s] -= 1;
    }
    let rest: Vec<usize> = (0..nv).filter(|&v| !used[v]).collect();
    if rest.len() != 2 {
        return None;
    }
    edges.push((rest[0], rest[1]));
    let vertex_labels: Vec<Vec<String>> = (0..nv)
        .map(|v| if v < n { vec![labels[v].clone()] } else { Vec::new() })
        .collect();
    TreeTopology::new(vertex_labels, edges).ok()
}
