//! Weight-preserving removal of negative edges from generalized optima.
//!
//! A negative interior edge XY of weight -2e in a binary generalized filling
//! sits on some exact boundary path (optimality forces one through every
//! edge). Orienting that path as A-X-Y-C and writing B, D for the remaining
//! neighbors of X and Y, the rewiring swaps the B and D subtrees
//! (E' = E minus {XB, YD} plus {XD, YB}) and reweights the five touched
//! edges to (a-e, b-e, c-e, d-e, +2e). The total weight is unchanged, no
//! boundary distance shrinks, and every pair routed through A-X-Y-C or
//! B-X-Y-D strictly lengthens, so the chosen exact path stops being exact
//! and the exact-pair count strictly drops. Iterating therefore terminates
//! with an equal-weight filling free of negative edges.

use crate::filling::{FillingError, WeightedFilling};
use crate::metric::{PseudometricSpace, SpaceClass};
use crate::rational::{format_rational, Rational};
use crate::topology::{TopologyError, TreeTopology};
use num::Signed;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModifyError {
    #[error("edge `{0}` is not negative")]
    NotNegative(String),
    #[error("edge `{0}` touches a boundary vertex")]
    BoundaryIncident(String),
    #[error("topology is not binary")]
    NotBinary,
    #[error("pair ({u}, {v}) is not exact: path weight {dw} vs distance {dist}")]
    PairNotExact { u: String, v: String, dw: String, dist: String },
    #[error("path of pair ({u}, {v}) does not contain edge `{edge}`")]
    PathMissesEdge { u: String, v: String, edge: String },
    #[error("unknown boundary label `{0}`")]
    UnknownLabel(String),
    #[error("space violates the triangle inequality: denegativization needs the hypothesis")]
    OutOfHypothesis,
    #[error("input is not a generalized filling of the space")]
    NotAFilling,
    #[error("no exact path through negative edge `{0}`; the filling is not minimal")]
    NoExactPath(String),
    #[error("internal invariant failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Filling(#[from] FillingError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

/// Record of one rewiring step.
#[derive(Debug, Clone)]
pub struct ModificationStep {
    /// Canonical key of the negative edge XY (same key before and after).
    pub edge: String,
    pub x: String,
    pub y: String,
    /// Neighbor roles: the exact path runs A-X-Y-C; B and D are swapped.
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
    /// Endpoints of the exact path gamma.
    pub gamma: (String, String),
    /// Half the absolute weight of XY.
    pub e: Rational,
    /// The five touched edges before: (key, weight).
    pub before: Vec<(String, Rational)>,
    /// The five touched edges after: (key, weight).
    pub after: Vec<(String, Rational)>,
    pub exact_before: usize,
    pub exact_after: usize,
}

impl ModificationStep {
    pub fn to_json(&self) -> Value {
        let weights = |list: &[(String, Rational)]| {
            Value::Object(
                list.iter()
                    .map(|(k, w)| (k.clone(), Value::String(format_rational(w))))
                    .collect(),
            )
        };
        json!({
            "edge": self.edge,
            "roles": {
                "x": self.x, "y": self.y,
                "a": self.a, "b": self.b, "c": self.c, "d": self.d,
            },
            "gamma": [self.gamma.0, self.gamma.1],
            "e": format_rational(&self.e),
            "before": weights(&self.before),
            "after": weights(&self.after),
            "exact_before": self.exact_before,
            "exact_after": self.exact_after,
        })
    }
}

/// Apply one rewiring at the negative edge `xy` along the exact path between
/// the labels of `pair`. Checks every precondition and verifies the
/// postconditions before returning.
pub fn modify(
    f: &WeightedFilling,
    space: &PseudometricSpace,
    xy: usize,
    pair: (&str, &str),
) -> Result<(WeightedFilling, ModificationStep), ModifyError> {
    let tree = f.topology();
    if !tree.is_binary() {
        return Err(ModifyError::NotBinary);
    }
    if xy >= tree.edge_count() {
        return Err(ModifyError::Topology(TopologyError::EdgeNotInTree(xy)));
    }
    let key = tree.edge_key(xy);
    if !f.weight(xy).is_negative() {
        return Err(ModifyError::NotNegative(key));
    }
    let (ex, ey) = tree.edge_endpoints(xy);
    if tree.is_boundary(ex) || tree.is_boundary(ey) {
        return Err(ModifyError::BoundaryIncident(key));
    }

    let u = tree
        .boundary_vertex(pair.0)
        .ok_or_else(|| ModifyError::UnknownLabel(pair.0.into()))?;
    let v = tree
        .boundary_vertex(pair.1)
        .ok_or_else(|| ModifyError::UnknownLabel(pair.1.into()))?;
    let gamma_vertices = tree.path_vertices(u, v)?;
    let gamma_edges = tree.path_between(u, v)?;
    let dist = space
        .dist_by_label(pair.0, pair.1)
        .ok_or_else(|| ModifyError::UnknownLabel(pair.0.into()))?;
    let gamma_weight = f.path_weight(&gamma_edges);
    if gamma_weight != *dist {
        return Err(ModifyError::PairNotExact {
            u: pair.0.into(),
            v: pair.1.into(),
            dw: format_rational(&gamma_weight),
            dist: format_rational(dist),
        });
    }
    let Some(pos) = gamma_edges.iter().position(|&e| e == xy) else {
        return Err(ModifyError::PathMissesEdge { u: pair.0.into(), v: pair.1.into(), edge: key });
    };

    // Orient XY along gamma: gamma enters X from A and leaves Y toward C.
    let x = gamma_vertices[pos];
    let y = gamma_vertices[pos + 1];
    let a = gamma_vertices[pos - 1];
    let c = gamma_vertices[pos + 2];
    let b = tree
        .neighbors(x)
        .map(|(w, _)| w)
        .find(|&w| w != y && w != a)
        .expect("interior vertices of a binary tree have degree 3");
    let d = tree
        .neighbors(y)
        .map(|(w, _)| w)
        .find(|&w| w != x && w != c)
        .expect("interior vertices of a binary tree have degree 3");

    let find_edge = |p: usize, q: usize| -> usize {
        tree.neighbors(p)
            .find(|&(w, _)| w == q)
            .map(|(_, e)| e)
            .expect("adjacent by construction")
    };
    let xa = find_edge(x, a);
    let xb = find_edge(x, b);
    let yc = find_edge(y, c);
    let yd = find_edge(y, d);

    let e_val = -f.weight(xy) / crate::rational::rat(2);
    debug_assert!(e_val.is_positive());

    // Same edge slots: XB becomes YB and YD becomes XD; weights shift by e.
    let mut edges: Vec<(usize, usize)> = tree.edges().to_vec();
    let replace = |slot: &mut (usize, usize), from: usize, to: usize| {
        if slot.0 == from {
            slot.0 = to;
        } else {
            slot.1 = to;
        }
    };
    replace(&mut edges[xb], x, y);
    replace(&mut edges[yd], y, x);
    let mut weights = f.weights().to_vec();
    weights[xy] = &e_val * crate::rational::rat(2);
    weights[xa] -= &e_val;
    weights[xb] -= &e_val;
    weights[yc] -= &e_val;
    weights[yd] -= &e_val;

    let labels: Vec<Vec<String>> =
        (0..tree.vertex_count()).map(|w| tree.labels_of(w).to_vec()).collect();
    let new_tree = TreeTopology::new(labels, edges)?;
    let result = WeightedFilling::new(new_tree, weights)?;

    // Postconditions: equal weight, still a filling, no distance shrinks,
    // gamma strictly longer, exact count strictly down.
    if result.total_weight() != f.total_weight() {
        return Err(ModifyError::Internal("total weight changed".into()));
    }
    if result.check_generalized(space)?.is_some() {
        return Err(ModifyError::Internal("rewired graph is not a filling".into()));
    }
    let n = space.len();
    for i in 0..n {
        for j in i + 1..n {
            let before = f.dw_labels(space.label(i), space.label(j))?;
            let after = result.dw_labels(space.label(i), space.label(j))?;
            if after < before {
                return Err(ModifyError::Internal(format!(
                    "distance of ({}, {}) decreased",
                    space.label(i),
                    space.label(j)
                )));
            }
        }
    }
    if result.dw_labels(pair.0, pair.1)? <= gamma_weight {
        return Err(ModifyError::Internal("chosen exact path did not lengthen".into()));
    }
    let exact_before = f.exact_path_report(space)?.exact_count();
    let exact_after = result.exact_path_report(space)?.exact_count();
    if exact_after >= exact_before {
        return Err(ModifyError::Internal("exact-pair count did not decrease".into()));
    }

    let step = ModificationStep {
        edge: key,
        x: tree.vertex_name(x),
        y: tree.vertex_name(y),
        a: tree.vertex_name(a),
        b: tree.vertex_name(b),
        c: tree.vertex_name(c),
        d: tree.vertex_name(d),
        gamma: (pair.0.into(), pair.1.into()),
        e: e_val,
        before: [xy, xa, xb, yc, yd]
            .iter()
            .map(|&e| (tree.edge_key(e), f.weight(e).clone()))
            .collect(),
        after: [xy, xa, xb, yc, yd]
            .iter()
            .map(|&e| (result.topology().edge_key(e), result.weight(e).clone()))
            .collect(),
        exact_before,
        exact_after,
    };
    Ok((result, step))
}

/// Drive all negative edges out of a globally minimal binary generalized
/// filling: repeatedly rewire at the canonically first negative edge along
/// the canonically first exact pair through it. The exact-pair counts
/// strictly decrease, so at most the initial count of steps can occur.
pub fn remove_negative_edges(
    f: &WeightedFilling,
    space: &PseudometricSpace,
) -> Result<(WeightedFilling, Vec<ModificationStep>), ModifyError> {
    if !f.topology().is_binary() {
        return Err(ModifyError::NotBinary);
    }
    if matches!(space.classify(), SpaceClass::TriangleViolating(_)) {
        return Err(ModifyError::OutOfHypothesis);
    }
    if f.check_generalized(space)?.is_some() {
        return Err(ModifyError::NotAFilling);
    }

    let mut current = f.clone();
    let mut steps: Vec<ModificationStep> = Vec::new();
    let step_bound = current.exact_path_report(space)?.exact_count();
    loop {
        let tree = current.topology();
        let negative = (0..tree.edge_count())
            .filter(|&e| current.weight(e).is_negative())
            .min_by_key(|&e| tree.edge_key(e));
        let Some(edge) = negative else {
            return Ok((current, steps));
        };
        if steps.len() >= step_bound {
            return Err(ModifyError::Internal(
                "step count exceeded the initial exact-pair count".into(),
            ));
        }
        let key = tree.edge_key(edge);
        let (ex, ey) = tree.edge_endpoints(edge);
        if tree.is_boundary(ex) || tree.is_boundary(ey) {
            return Err(ModifyError::BoundaryIncident(key));
        }
        let pair = first_exact_pair_through(&current, space, edge)?
            .ok_or(ModifyError::NoExactPath(key))?;
        let (next, step) = modify(&current, space, edge, (&pair.0, &pair.1))?;
        if let Some(last) = steps.last() {
            if step.exact_before > last.exact_after {
                return Err(ModifyError::Internal("exact-pair counts are not decreasing".into()));
            }
        }
        steps.push(step);
        current = next;
    }
}

/// First boundary pair in label order whose path is exact and contains the
/// edge.
fn first_exact_pair_through(
    f: &WeightedFilling,
    space: &PseudometricSpace,
    edge: usize,
) -> Result<Option<(String, String)>, ModifyError> {
    let tree = f.topology();
    let n = space.len();
    for i in 0..n {
        for j in i + 1..n {
            let u = tree
                .boundary_vertex(space.label(i))
                .ok_or_else(|| ModifyError::UnknownLabel(space.label(i).into()))?;
            let v = tree
                .boundary_vertex(space.label(j))
                .ok_or_else(|| ModifyError::UnknownLabel(space.label(j).into()))?;
            let path = tree.path_between(u, v)?;
            if !path.contains(&edge) {
                continue;
            }
            if f.path_weight(&path) == *space.dist(i, j) {
                return Ok(Some((space.label(i).to_string(), space.label(j).to_string())));
            }
        }
    }
    Ok(None)
}
