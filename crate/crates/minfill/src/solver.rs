//! Parametric and global minimal filling computation.
//!
//! For one fixed tree type the weight functions forming generalized fillings
//! are cut out by one linear inequality per boundary pair (the path weight
//! must reach the distance), so both the classical and the sign-unrestricted
//! parametric optima are exact LP solves. Global optima take the minimum over
//! all binary tree types; types with a pendant interior vertex are unbounded
//! for the generalized problem and are short-circuited without an LP.

use crate::filling::{FillingError, WeightedFilling};
use crate::lp::{self, LinearProgram, LpConstraint, LpError, LpOutcome};
use crate::metric::{PseudometricSpace, SpaceClass};
use crate::rational::{format_rational, Rational};
use crate::topology::{
    binary_tree_count, enumerate_binary_trees, TopologyError, TreeTopology,
};
use num::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::sync::Mutex;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("topology joins {topology:?} but space has {space:?}")]
    LabelMismatch { topology: Vec<String>, space: Vec<String> },
    #[error("interior vertex `{0}` has degree 1")]
    InteriorLeaf(String),
    #[error("vertex `{0}` carries multiple labels")]
    MultiLabelVertex(String),
    #[error("{got} boundary points exceed the limit {limit} (override with MINFILL_MAX_N)")]
    TooManyPoints { got: usize, limit: usize },
    #[error("space violates the triangle inequality ({x}, {y}, {z}): out of hypothesis")]
    OutOfHypothesis { x: String, y: String, z: String },
    #[error("unexpected LP outcome for {variant:?}: {detail}")]
    UnexpectedOutcome { variant: Variant, detail: String },
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Filling(#[from] FillingError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

/// Which sign regime the weights live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    NonNegative,
    Generalized,
}

/// Outcome of one parametric problem: the LP result plus, when optimal, the
/// witness mapped back onto the edges of the type.
#[derive(Debug, Clone)]
pub struct ParametricResult {
    pub topology: TreeTopology,
    pub variant: Variant,
    pub outcome: LpOutcome,
    pub optimal_filling: Option<WeightedFilling>,
}

impl ParametricResult {
    pub fn optimal_value(&self) -> Option<&Rational> {
        self.outcome.optimal_value()
    }
}

/// Per-type value summary kept for every enumerated topology.
#[derive(Debug, Clone)]
pub struct TopologySummary {
    pub index: usize,
    pub mpf: Rational,
    pub mpf_minus: Rational,
}

/// Global solve: values and argmin witnesses over all binary types.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub space: PseudometricSpace,
    pub classification: SpaceClass,
    pub topology_count: usize,
    pub per_topology: Vec<TopologySummary>,
    pub mf: Rational,
    pub mf_minus: Rational,
    pub argmin_mf: usize,
    pub argmin_mf_minus: usize,
    pub optimal_nonneg: WeightedFilling,
    pub optimal_generalized: WeightedFilling,
    pub theorem_holds: bool,
}

/// Solver configuration; the boundary-size limit guards the (2n-5)!! blowup.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub max_n: usize,
}

pub const DEFAULT_MAX_N: usize = 9;

impl Default for SolverConfig {
    fn default() -> Self {
        Self { max_n: DEFAULT_MAX_N }
    }
}

impl SolverConfig {
    /// Default limit, overridden by the MINFILL_MAX_N environment variable.
    pub fn from_env() -> Self {
        let max_n = std::env::var("MINFILL_MAX_N")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(DEFAULT_MAX_N);
        Self { max_n }
    }
}

/// One variable per edge, one constraint per unordered boundary pair, unit
/// objective; the mask is all-true for the classical variant and all-false
/// for the generalized one.
pub fn build_lp(
    space: &PseudometricSpace,
    tree: &TreeTopology,
    variant: Variant,
) -> Result<LinearProgram, SolverError> {
    check_tree_against_space(space, tree, false)?;
    let n = space.len();
    let num_vars = tree.edge_count();
    let mut constraints = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let u = tree.boundary_vertex(space.label(i)).expect("labels checked");
            let v = tree.boundary_vertex(space.label(j)).expect("labels checked");
            let mut coeffs = vec![Rational::zero(); num_vars];
            for e in tree.path_between(u, v)? {
                coeffs[e] = Rational::from_integer(1.into());
            }
            constraints.push(LpConstraint { coeffs, rhs: space.dist(i, j).clone() });
        }
    }
    Ok(LinearProgram {
        num_vars,
        constraints,
        objective: vec![Rational::from_integer(1.into()); num_vars],
        nonneg: vec![matches!(variant, Variant::NonNegative); num_vars],
    })
}

fn check_tree_against_space(
    space: &PseudometricSpace,
    tree: &TreeTopology,
    allow_interior_leaf: bool,
) -> Result<(), SolverError> {
    for v in 0..tree.vertex_count() {
        if tree.labels_of(v).len() > 1 {
            return Err(SolverError::MultiLabelVertex(tree.vertex_name(v)));
        }
    }
    let mut mine = tree.boundary_labels();
    mine.sort();
    let mut theirs = space.labels().to_vec();
    theirs.sort();
    if mine != theirs {
        return Err(SolverError::LabelMismatch { topology: mine, space: theirs });
    }
    if !allow_interior_leaf {
        if let Some(name) = tree.has_interior_leaf() {
            return Err(SolverError::InteriorLeaf(name));
        }
    }
    Ok(())
}

/// Classical parametric optimum of the fixed type; always attained.
pub fn mpf(space: &PseudometricSpace, tree: &TreeTopology) -> Result<ParametricResult, SolverError> {
    let lp = build_lp(space, tree, Variant::NonNegative)?;
    let outcome = lp::solve(&lp)?;
    finish_parametric(tree, Variant::NonNegative, outcome)
}

/// Generalized parametric optimum. Types with a pendant interior vertex are
/// unbounded: the pendant edge lies on no boundary path, so its weight can
/// sink without limit. That case is reported without invoking the LP.
pub fn mpf_gen(
    space: &PseudometricSpace,
    tree: &TreeTopology,
) -> Result<ParametricResult, SolverError> {
    check_tree_against_space(space, tree, true)?;
    if tree.has_interior_leaf().is_some() {
        let leaf = tree.interior_leaf().expect("just found one");
        let (_, pendant_edge) = tree.neighbors(leaf).next().expect("degree 1");
        let mut ray = vec![Rational::zero(); tree.edge_count()];
        ray[pendant_edge] = -Rational::from_integer(1.into());
        return Ok(ParametricResult {
            topology: tree.clone(),
            variant: Variant::Generalized,
            outcome: LpOutcome::Unbounded { ray },
            optimal_filling: None,
        });
    }
    let lp = build_lp(space, tree, Variant::Generalized)?;
    let outcome = lp::solve(&lp)?;
    finish_parametric(tree, Variant::Generalized, outcome)
}

fn finish_parametric(
    tree: &TreeTopology,
    variant: Variant,
    outcome: LpOutcome,
) -> Result<ParametricResult, SolverError> {
    let optimal_filling = match &outcome {
        LpOutcome::Optimal { point, .. } => {
            Some(WeightedFilling::new(tree.clone(), point.clone())?)
        }
        _ => {
            return Err(SolverError::UnexpectedOutcome {
                variant,
                detail: "parametric filling problems on valid types are feasible and bounded".into(),
            })
        }
    };
    Ok(ParametricResult {
        topology: tree.clone(),
        variant,
        outcome,
        optimal_filling,
    })
}

/// Global solve over all binary types, visiting each parametric pair.
///
/// `visit` runs for every topology (possibly from worker threads); the
/// report itself is deterministic: minima, argmin-by-lowest-index and the
/// per-topology table do not depend on scheduling.
pub fn mf_with<F>(
    space: &PseudometricSpace,
    config: &SolverConfig,
    visit: F,
) -> Result<SolveReport, SolverError>
where
    F: Fn(usize, &ParametricResult, &ParametricResult) + Sync,
{
    let n = space.len();
    if n > config.max_n {
        return Err(SolverError::TooManyPoints { got: n, limit: config.max_n });
    }
    if n == 1 {
        return single_point_report(space);
    }

    let labels = space.labels().to_vec();
    let topologies: Vec<(usize, TreeTopology)> =
        enumerate_binary_trees(&labels)?.enumerate().collect();
    solve_topologies(space, topologies, visit)
}

/// The enumeration-order-independent core: solve the given (index, type)
/// stream and reduce deterministically by value then lowest index.
pub fn solve_topologies<F>(
    space: &PseudometricSpace,
    topologies: Vec<(usize, TreeTopology)>,
    visit: F,
) -> Result<SolveReport, SolverError>
where
    F: Fn(usize, &ParametricResult, &ParametricResult) + Sync,
{
    struct Best {
        value: Rational,
        index: usize,
        filling: WeightedFilling,
    }
    struct Accum {
        summaries: Vec<TopologySummary>,
        best_nonneg: Option<Best>,
        best_gen: Option<Best>,
    }
    let enumerated = topologies.len();
    let accum = Mutex::new(Accum { summaries: Vec::new(), best_nonneg: None, best_gen: None });

    let solve_one = |&(index, ref tree): &(usize, TreeTopology)| -> Result<(), SolverError> {
        let gen = mpf_gen(space, tree)?;
        let nn = match &gen.optimal_filling {
            // A sign-free optimum with no negative edge is already the
            // classical optimum of this type: the classical value is wedged
            // between it and itself.
            Some(f) if !f.has_negative_edge() => ParametricResult {
                topology: tree.clone(),
                variant: Variant::NonNegative,
                outcome: gen.outcome.clone(),
                optimal_filling: gen.optimal_filling.clone(),
            },
            _ => mpf(space, tree)?,
        };
        visit(index, &nn, &gen);
        let (nn_value, nn_filling) = match (&nn.outcome, &nn.optimal_filling) {
            (LpOutcome::Optimal { value, .. }, Some(f)) => (value.clone(), f.clone()),
            _ => unreachable!("finish_parametric guarantees optima"),
        };
        let (gen_value, gen_filling) = match (&gen.outcome, &gen.optimal_filling) {
            (LpOutcome::Optimal { value, .. }, Some(f)) => (value.clone(), f.clone()),
            _ => unreachable!("finish_parametric guarantees optima"),
        };
        let mut acc = accum.lock().expect("accumulator poisoned");
        acc.summaries.push(TopologySummary {
            index,
            mpf: nn_value.clone(),
            mpf_minus: gen_value.clone(),
        });
        let better = |best: &Option<Best>, value: &Rational, index: usize| match best {
            None => true,
            Some(b) => *value < b.value || (*value == b.value && index < b.index),
        };
        if better(&acc.best_nonneg, &nn_value, index) {
            acc.best_nonneg = Some(Best { value: nn_value, index, filling: nn_filling });
        }
        if better(&acc.best_gen, &gen_value, index) {
            acc.best_gen = Some(Best { value: gen_value, index, filling: gen_filling });
        }
        Ok(())
    };

    topologies
        .par_iter()
        .map(solve_one)
        .collect::<Result<Vec<()>, SolverError>>()?;

    let mut acc = accum.into_inner().expect("accumulator poisoned");
    acc.summaries.sort_by_key(|s| s.index);
    let best_nonneg = acc.best_nonneg.expect("at least one topology");
    let best_gen = acc.best_gen.expect("at least one topology");
    let theorem_holds = best_nonneg.value == best_gen.value;
    Ok(SolveReport {
        space: space.clone(),
        classification: space.classify(),
        topology_count: enumerated,
        per_topology: acc.summaries,
        mf: best_nonneg.value,
        mf_minus: best_gen.value,
        argmin_mf: best_nonneg.index,
        argmin_mf_minus: best_gen.index,
        optimal_nonneg: best_nonneg.filling,
        optimal_generalized: best_gen.filling,
        theorem_holds,
    })
}

fn single_point_report(space: &PseudometricSpace) -> Result<SolveReport, SolverError> {
    let tree = TreeTopology::new(vec![vec![space.label(0).to_string()]], vec![])?;
    let empty = WeightedFilling::new(tree, vec![])?;
    Ok(SolveReport {
        space: space.clone(),
        classification: space.classify(),
        topology_count: 1,
        per_topology: vec![TopologySummary {
            index: 0,
            mpf: Rational::zero(),
            mpf_minus: Rational::zero(),
        }],
        mf: Rational::zero(),
        mf_minus: Rational::zero(),
        argmin_mf: 0,
        argmin_mf_minus: 0,
        optimal_nonneg: empty.clone(),
        optimal_generalized: empty,
        theorem_holds: true,
    })
}

/// Global minimal filling weights for both variants.
pub fn mf(space: &PseudometricSpace, config: &SolverConfig) -> Result<SolveReport, SolverError> {
    mf_with(space, config, |_, _, _| {})
}

/// Check the global equality on a space satisfying the triangle inequality.
/// Triangle-violating spaces are out of hypothesis and rejected; inspect the
/// SolveReport directly to study them.
pub fn verify_theorem(
    space: &PseudometricSpace,
    config: &SolverConfig,
) -> Result<bool, SolverError> {
    if let SpaceClass::TriangleViolating(w) = space.classify() {
        return Err(SolverError::OutOfHypothesis { x: w.x, y: w.y, z: w.z });
    }
    Ok(mf(space, config)?.theorem_holds)
}

impl SolveReport {
    /// Report JSON with exact rational strings; the per-topology table is
    /// emitted only on request.
    pub fn to_json(&self, per_topology: bool) -> Value {
        let space_doc = self.space.to_json();
        let mut doc = json!({
            "labels": space_doc["labels"],
            "dist": space_doc["dist"],
            "classification": self.classification.kind().as_str(),
            "topology_count": self.topology_count,
            "mf": format_rational(&self.mf),
            "mf_minus": format_rational(&self.mf_minus),
            "theorem_holds": self.theorem_holds,
            "argmin": {
                "nonnegative": self.argmin_mf,
                "generalized": self.argmin_mf_minus,
            },
            "optimal_nonnegative": self.optimal_nonneg.to_json().expect("solver fillings serialize"),
            "optimal_generalized": self.optimal_generalized.to_json().expect("solver fillings serialize"),
        });
        if per_topology {
            doc["per_topology"] = Value::Array(
                self.per_topology
                    .iter()
                    .map(|s| {
                        json!({
                            "index": s.index,
                            "mpf": format_rational(&s.mpf),
                            "mpf_minus": format_rational(&s.mpf_minus),
                        })
                    })
                    .collect(),
            );
        }
        doc
    }
}

/// Number of topologies the solver enumerates for n points.
pub fn topology_count(n: usize) -> u128 {
    if n <= 1 {
        1
    } else {
        binary_tree_count(n)
    }
}
