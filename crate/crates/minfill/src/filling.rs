//! Weighted fillings over tree topologies.
//!
//! A filling assigns one rational weight per edge; weights may be negative.
//! The induced distance `dw` between vertices is the weight of the unique
//! simple path. A weighted tree fills a space when every boundary pair
//! satisfies `dist <= dw`; a path between boundary points is exact when
//! equality holds. All comparisons are exact rational equality.

use crate::metric::PseudometricSpace;
use crate::rational::{format_rational, rational_from_json, Rational};
use crate::topology::{BinarySplit, CyclicOrder, TopologyError, TreeTopology};
use num::Zero;
use serde_json::Value;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FillingError {
    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("missing weight for edge `{0}`")]
    MissingWeight(String),
    #[error("unknown edge key `{0}`")]
    UnknownEdgeKey(String),
    #[error("duplicate edge key `{0}`")]
    DuplicateEdgeKey(String),
    #[error("boundary labels of topology {topology:?} do not match space {space:?}")]
    LabelMismatch { topology: Vec<String>, space: Vec<String> },
    #[error("not a generalized filling: pair ({u}, {v}) has dw {dw} < dist {dist}")]
    NotAFilling { u: String, v: String, dw: String, dist: String },
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("malformed filling document: {0}")]
    Malformed(String),
}

/// First boundary pair (in label order) violating the filling condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FillingViolation {
    pub u: String,
    pub v: String,
    pub dw: Rational,
    pub dist: Rational,
}

/// A tree topology with one rational weight per edge, sign-unrestricted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedFilling {
    topology: TreeTopology,
    weights: Vec<Rational>,
}

impl WeightedFilling {
    pub fn new(topology: TreeTopology, weights: Vec<Rational>) -> Result<Self, FillingError> {
        if weights.len() != topology.edge_count() {
            return Err(FillingError::WeightCount {
                expected: topology.edge_count(),
                got: weights.len(),
            });
        }
        Ok(Self { topology, weights })
    }

    /// Build from canonical edge keys (`"a-i0"` etc).
    pub fn from_weight_map(
        topology: TreeTopology,
        map: &BTreeMap<String, Rational>,
    ) -> Result<Self, FillingError> {
        let mut weights = Vec::with_capacity(topology.edge_count());
        for e in 0..topology.edge_count() {
            let key = topology.edge_key(e);
            let w = map
                .get(&key)
                .ok_or_else(|| FillingError::MissingWeight(key.clone()))?;
            weights.push(w.clone());
        }
        if map.len() != topology.edge_count() {
            for key in map.keys() {
                if (0..topology.edge_count()).all(|e| topology.edge_key(e) != *key) {
                    return Err(FillingError::UnknownEdgeKey(key.clone()));
                }
            }
        }
        Ok(Self { topology, weights })
    }

    pub fn topology(&self) -> &TreeTopology {
        &self.topology
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, edge: usize) -> &Rational {
        &self.weights[edge]
    }

    /// Exact sum of all edge weights.
    pub fn total_weight(&self) -> Rational {
        self.weights.iter().fold(Rational::zero(), |acc, w| acc + w)
    }

    /// Induced distance: sum of weights along the unique simple path.
    pub fn dw(&self, u: usize, v: usize) -> Result<Rational, FillingError> {
        let path = self.topology.path_between(u, v)?;
        Ok(self.path_weight(&path))
    }

    pub fn dw_labels(&self, a: &str, b: &str) -> Result<Rational, FillingError> {
        let u = self
            .topology
            .boundary_vertex(a)
            .ok_or_else(|| FillingError::Topology(TopologyError::UnknownVertex(a.into())))?;
        let v = self
            .topology
            .boundary_vertex(b)
            .ok_or_else(|| FillingError::Topology(TopologyError::UnknownVertex(b.into())))?;
        self.dw(u, v)
    }

    pub fn path_weight(&self, path: &[usize]) -> Rational {
        path.iter().fold(Rational::zero(), |acc, &e| acc + &self.weights[e])
    }

    pub fn has_negative_edge(&self) -> bool {
        self.weights.iter().any(|w| *w < Rational::zero())
    }

    fn check_labels(&self, space: &PseudometricSpace) -> Result<(), FillingError> {
        let mut mine = self.topology.boundary_labels();
        mine.sort();
        let mut theirs = space.labels().to_vec();
        theirs.sort();
        if mine != theirs {
            return Err(FillingError::LabelMismatch { topology: mine, space: theirs });
        }
        Ok(())
    }

    /// Generalized filling test: every boundary pair satisfies
    /// `dist(u,v) <= dw(u,v)`. Returns the first violation in label order.
    pub fn check_generalized(
        &self,
        space: &PseudometricSpace,
    ) -> Result<Option<FillingViolation>, FillingError> {
        self.check_labels(space)?;
        let n = space.len();
        for i in 0..n {
            for j in i + 1..n {
                let dw = self.dw_labels(space.label(i), space.label(j))?;
                if dw < *space.dist(i, j) {
                    return Ok(Some(FillingViolation {
                        u: space.label(i).to_string(),
                        v: space.label(j).to_string(),
                        dw,
                        dist: space.dist(i, j).clone(),
                    }));
                }
            }
        }
        Ok(None)
    }

    pub fn is_generalized_filling(&self, space: &PseudometricSpace) -> Result<bool, FillingError> {
        Ok(self.check_generalized(space)?.is_none())
    }

    /// Classical filling test: generalized filling with all weights >= 0.
    pub fn is_nonneg_filling(&self, space: &PseudometricSpace) -> Result<bool, FillingError> {
        Ok(!self.has_negative_edge() && self.is_generalized_filling(space)?)
    }

    /// Exact pairs and which of them traverse each edge.
    pub fn exact_path_report(
        &self,
        space: &PseudometricSpace,
    ) -> Result<ExactPathReport, FillingError> {
        if let Some(v) = self.check_generalized(space)? {
            return Err(FillingError::NotAFilling {
                u: v.u,
                v: v.v,
                dw: format_rational(&v.dw),
                dist: format_rational(&v.dist),
            });
        }
        let n = space.len();
        let mut exact_pairs = Vec::new();
        let mut edge_coverage = vec![Vec::new(); self.topology.edge_count()];
        let mut pair_edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let u = self.topology.boundary_vertex(space.label(i)).expect("labels checked");
                let v = self.topology.boundary_vertex(space.label(j)).expect("labels checked");
                let path = self.topology.path_between(u, v)?;
                if self.path_weight(&path) == *space.dist(i, j) {
                    let idx = exact_pairs.len();
                    exact_pairs.push((space.label(i).to_string(), space.label(j).to_string()));
                    for &e in &path {
                        edge_coverage[e].push(idx);
                    }
                    pair_edges.push(path);
                }
            }
        }
        Ok(ExactPathReport { exact_pairs, edge_coverage, pair_edges })
    }

    /// Exact-path structure checks expected of parametric optima:
    /// uncovered edges (part 1), adjacent pairs without a joint exact path
    /// (part 2, informational for non-global optima), joint coverage at
    /// interior degree-3 vertices (part 3) and majority subsets at interior
    /// vertices (part 4).
    pub fn check_exact_path_structure(
        &self,
        space: &PseudometricSpace,
    ) -> Result<ExactStructureReport, FillingError> {
        let report = self.exact_path_report(space)?;
        let tree = &self.topology;
        let edge_sets: Vec<Vec<usize>> = report
            .pair_edges
            .iter()
            .map(|path| {
                let mut s = path.clone();
                s.sort_unstable();
                s
            })
            .collect();
        let jointly_covered = |e: usize, f: usize| {
            edge_sets
                .iter()
                .any(|s| s.binary_search(&e).is_ok() && s.binary_search(&f).is_ok())
        };

        let uncovered_edges: Vec<usize> = (0..tree.edge_count())
            .filter(|&e| report.edge_coverage[e].is_empty())
            .collect();

        let mut adjacent_pairs_uncovered = Vec::new();
        for v in 0..tree.vertex_count() {
            let incident: Vec<usize> = tree.neighbors(v).map(|(_, e)| e).collect();
            for a in 0..incident.len() {
                for b in a + 1..incident.len() {
                    if !jointly_covered(incident[a], incident[b]) {
                        adjacent_pairs_uncovered.push((incident[a], incident[b]));
                    }
                }
            }
        }

        let mut degree3_pairs_uncovered = Vec::new();
        let mut majority_subsets_uncovered = Vec::new();
        for v in 0..tree.vertex_count() {
            if !tree.is_interior(v) {
                continue;
            }
            let incident: Vec<usize> = tree.neighbors(v).map(|(_, e)| e).collect();
            let d = incident.len();
            if d == 3 {
                for a in 0..d {
                    for b in a + 1..d {
                        if !jointly_covered(incident[a], incident[b]) {
                            degree3_pairs_uncovered.push((v, incident[a], incident[b]));
                        }
                    }
                }
            }
            // Subsets of incident edges with m > deg(v)/2 must contain a
            // jointly covered pair.
            for mask in 1u32..(1 << d) {
                let m = mask.count_ones() as usize;
                if 2 * m <= d {
                    continue;
                }
                let chosen: Vec<usize> = (0..d)
                    .filter(|&k| mask & (1 << k) != 0)
                    .map(|k| incident[k])
                    .collect();
                let mut ok = false;
                'outer: for a in 0..chosen.len() {
                    for b in a + 1..chosen.len() {
                        if jointly_covered(chosen[a], chosen[b]) {
                            ok = true;
                            break 'outer;
                        }
                    }
                }
                if !ok {
                    majority_subsets_uncovered.push((v, chosen));
                }
            }
        }

        Ok(ExactStructureReport {
            uncovered_edges,
            adjacent_pairs_uncovered,
            degree3_pairs_uncovered,
            majority_subsets_uncovered,
        })
    }

    /// Transfer weights through a binary split: merged edges sum, added
    /// edges weigh zero. Total weight and boundary-pair distances are
    /// preserved.
    pub fn transfer_through_split(&self, split: &BinarySplit) -> Result<WeightedFilling, FillingError> {
        if split.edge_map.len() != self.topology.edge_count() {
            return Err(FillingError::WeightCount {
                expected: self.topology.edge_count(),
                got: split.edge_map.len(),
            });
        }
        let mut weights = vec![Rational::zero(); split.tree.edge_count()];
        for (orig, &img) in split.edge_map.iter().enumerate() {
            weights[img] += &self.weights[orig];
        }
        WeightedFilling::new(split.tree.clone(), weights)
    }

    /// Filling JSON: topology block plus a `weights` map keyed by canonical
    /// edge keys.
    pub fn to_json(&self) -> Result<Value, FillingError> {
        let mut doc = self.topology.to_json()?;
        let mut map = serde_json::Map::new();
        for e in 0..self.topology.edge_count() {
            let key = self.topology.edge_key(e);
            if map
                .insert(key.clone(), Value::String(format_rational(&self.weights[e])))
                .is_some()
            {
                return Err(FillingError::DuplicateEdgeKey(key));
            }
        }
        doc["weights"] = Value::Object(map);
        Ok(doc)
    }

    pub fn from_json(doc: &Value) -> Result<Self, FillingError> {
        let topology = TreeTopology::from_json(doc)?;
        let weights_val = doc
            .get("weights")
            .and_then(Value::as_object)
            .ok_or_else(|| FillingError::Malformed("missing object `weights`".into()))?;
        let mut map = BTreeMap::new();
        for (key, value) in weights_val {
            let w = rational_from_json(value)
                .map_err(|e| FillingError::Malformed(format!("weight `{key}`: {e}")))?;
            map.insert(key.clone(), w);
        }
        Self::from_weight_map(topology, &map)
    }
}

/// Boundary pairs realized exactly, plus per-edge coverage by those pairs.
#[derive(Debug, Clone)]
pub struct ExactPathReport {
    pub exact_pairs: Vec<(String, String)>,
    /// For each edge, indices into `exact_pairs` whose path contains it.
    pub edge_coverage: Vec<Vec<usize>>,
    /// For each exact pair, its path as edge ids.
    pub pair_edges: Vec<Vec<usize>>,
}

impl ExactPathReport {
    pub fn exact_count(&self) -> usize {
        self.exact_pairs.len()
    }
}

/// Structured pass/fail report over the exact-path coverage conditions.
#[derive(Debug, Clone)]
pub struct ExactStructureReport {
    pub uncovered_edges: Vec<usize>,
    pub adjacent_pairs_uncovered: Vec<(usize, usize)>,
    pub degree3_pairs_uncovered: Vec<(usize, usize, usize)>,
    pub majority_subsets_uncovered: Vec<(usize, Vec<usize>)>,
}

impl ExactStructureReport {
    /// Conditions guaranteed for parametric optima (parts 1, 3, 4).
    pub fn parametric_parts_hold(&self) -> bool {
        self.uncovered_edges.is_empty()
            && self.degree3_pairs_uncovered.is_empty()
            && self.majority_subsets_uncovered.is_empty()
    }

    /// All four conditions, including the adjacent-pair condition that needs
    /// global minimality.
    pub fn all_parts_hold(&self) -> bool {
        self.parametric_parts_hold() && self.adjacent_pairs_uncovered.is_empty()
    }
}

/// Half the sum of consecutive distances around the cyclic order. Every
/// generalized filling weighs at least this much for planar orders.
pub fn tour_lower_bound(
    space: &PseudometricSpace,
    order: &CyclicOrder,
) -> Result<Rational, FillingError> {
    let mut mine = space.labels().to_vec();
    mine.sort();
    let mut theirs = order.labels().to_vec();
    theirs.sort();
    if mine != theirs {
        return Err(FillingError::LabelMismatch { topology: theirs, space: mine });
    }
    let n = order.len();
    let mut sum = Rational::zero();
    for k in 0..n {
        let a = &order.labels()[k];
        let b = &order.labels()[(k + 1) % n];
        sum += space.dist_by_label(a, b).expect("labels checked");
    }
    Ok(sum / crate::rational::rat(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    /// Four points with dist(a,b) = dist(c,d) = 4 and all cross pairs 3.
    fn gap_space() -> PseudometricSpace {
        PseudometricSpace::new(
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            vec![
                vec![rat(0), rat(4), rat(3), rat(3)],
                vec![rat(4), rat(0), rat(3), rat(3)],
                vec![rat(3), rat(3), rat(0), rat(4)],
                vec![rat(3), rat(3), rat(4), rat(0)],
            ],
        )
        .unwrap()
    }

    /// Edges au, bu, uv, cv, dv with u = i0, v = i1.
    fn gap_type() -> TreeTopology {
        TreeTopology::new(
            vec![
                vec!["a".into()],
                vec!["b".into()],
                vec!["c".into()],
                vec!["d".into()],
                vec![],
                vec![],
            ],
            vec![(0, 4), (1, 4), (4, 5), (2, 5), (3, 5)],
        )
        .unwrap()
    }

    fn filling(leaf: i64, center: i64) -> WeightedFilling {
        // Weight order follows edge creation: au, bu, uv, cv, dv.
        WeightedFilling::new(
            gap_type(),
            vec![rat(leaf), rat(leaf), rat(center), rat(leaf), rat(leaf)],
        )
        .unwrap()
    }

    #[test]
    fn total_weight_examples() {
        assert_eq!(filling(2, -1).total_weight(), rat(7));
        assert_eq!(filling(2, 0).total_weight(), rat(8));
        assert_eq!(filling(0, 0).total_weight(), rat(0));
    }

    #[test]
    fn dw_follows_unique_paths() {
        let f = filling(2, -1);
        assert_eq!(f.dw_labels("a", "c").unwrap(), rat(3));
        assert_eq!(f.dw_labels("a", "b").unwrap(), rat(4));
        assert_eq!(f.dw(4, 4).unwrap(), rat(0));
        assert!(f.dw_labels("a", "zz").is_err());
    }

    #[test]
    fn generalized_filling_checks() {
        let space = gap_space();
        assert!(filling(2, -1).is_generalized_filling(&space).unwrap());
        let violation = filling(2, -2).check_generalized(&space).unwrap().unwrap();
        assert_eq!((violation.u.as_str(), violation.v.as_str()), ("a", "c"));
        assert_eq!(violation.dw, rat(2));
        assert_eq!(violation.dist, rat(3));
    }

    #[test]
    fn zero_filling_of_zero_space() {
        let space = PseudometricSpace::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec![rat(0); 3], vec![rat(0); 3], vec![rat(0); 3]],
        )
        .unwrap();
        let star = TreeTopology::new(
            vec![vec!["a".into()], vec!["b".into()], vec!["c".into()], vec![]],
            vec![(0, 3), (1, 3), (2, 3)],
        )
        .unwrap();
        let f = WeightedFilling::new(star, vec![rat(0); 3]).unwrap();
        assert!(f.is_generalized_filling(&space).unwrap());
        assert!(f.is_nonneg_filling(&space).unwrap());
    }

    #[test]
    fn nonneg_filling_rejects_negative_weights() {
        let space = gap_space();
        assert!(filling(2, 0).is_nonneg_filling(&space).unwrap());
        assert!(!filling(2, -1).is_nonneg_filling(&space).unwrap());
    }

    #[test]
    fn exact_report_on_generalized_optimum() {
        let space = gap_space();
        let report = filling(2, -1).exact_path_report(&space).unwrap();
        // All six boundary pairs are exact and every edge is covered.
        assert_eq!(report.exact_count(), 6);
        assert!(report.edge_coverage.iter().all(|c| !c.is_empty()));
    }

    #[test]
    fn exact_report_on_nonneg_optimum() {
        let space = gap_space();
        let report = filling(2, 0).exact_path_report(&space).unwrap();
        assert_eq!(
            report.exact_pairs,
            vec![("a".to_string(), "b".to_string()), ("c".to_string(), "d".to_string())]
        );
        let f = filling(2, 0);
        for (x, y) in [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")] {
            assert_eq!(f.dw_labels(x, y).unwrap(), rat(4));
        }
    }

    #[test]
    fn exact_report_single_edge() {
        let space = PseudometricSpace::new(
            vec!["A".into(), "B".into()],
            vec![vec![rat(0), rat(5)], vec![rat(5), rat(0)]],
        )
        .unwrap();
        let tree = TreeTopology::new(
            vec![vec!["A".into()], vec!["B".into()]],
            vec![(0, 1)],
        )
        .unwrap();
        let f = WeightedFilling::new(tree, vec![rat(5)]).unwrap();
        let report = f.exact_path_report(&space).unwrap();
        assert_eq!(report.exact_pairs, vec![("A".to_string(), "B".to_string())]);
        assert!(f.check_exact_path_structure(&space).unwrap().all_parts_hold());
    }

    #[test]
    fn exact_report_requires_a_filling() {
        let space = gap_space();
        assert!(matches!(
            filling(2, -2).exact_path_report(&space),
            Err(FillingError::NotAFilling { .. })
        ));
    }

    #[test]
    fn structure_checks_pass_on_optimum_and_fail_on_slack_edge() {
        let space = gap_space();
        let good = filling(2, -1).check_exact_path_structure(&space).unwrap();
        assert!(good.all_parts_hold());

        // Feasible but non-minimal: uv = 1 makes every path through uv slack.
        let bad = filling(2, 1).check_exact_path_structure(&space).unwrap();
        let uv = gap_type().edge_between("i0", "i1").unwrap();
        assert_eq!(bad.uncovered_edges, vec![uv]);
        assert!(!bad.parametric_parts_hold());
    }

    #[test]
    fn tour_lower_bound_examples() {
        let space = gap_space();
        let order = CyclicOrder::new(vec!["a".into(), "b".into(), "c".into(), "d".into()]);
        assert_eq!(tour_lower_bound(&space, &order).unwrap(), rat(7));

        let zero = PseudometricSpace::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec![rat(0); 3], vec![rat(0); 3], vec![rat(0); 3]],
        )
        .unwrap();
        let any = CyclicOrder::new(vec!["a".into(), "b".into(), "c".into()]);
        assert_eq!(tour_lower_bound(&zero, &any).unwrap(), rat(0));

        let violating = PseudometricSpace::new(
            vec!["x".into(), "y".into(), "z".into()],
            vec![
                vec![rat(0), rat(1), rat(5)],
                vec![rat(1), rat(0), rat(2)],
                vec![rat(5), rat(2), rat(0)],
            ],
        )
        .unwrap();
        let order = CyclicOrder::new(vec!["x".into(), "y".into(), "z".into()]);
        assert_eq!(tour_lower_bound(&violating, &order).unwrap(), rat(4));
    }

    #[test]
    fn doubling_identity_on_planar_order() {
        let f = filling(2, -1);
        let order = f.topology().planar_order().unwrap();
        let paths = f.topology().tour_paths(&order).unwrap();
        let total: Rational = paths.iter().map(|p| f.path_weight(p)).sum();
        assert_eq!(total, f.total_weight() * rat(2));
    }

    #[test]
    fn split_transfer_preserves_total_and_distances() {
        let star4 = TreeTopology::new(
            vec![
                vec!["a".into()],
                vec!["b".into()],
                vec!["c".into()],
                vec!["d".into()],
                vec![],
            ],
            vec![(0, 4), (1, 4), (2, 4), (3, 4)],
        )
        .unwrap();
        let f = WeightedFilling::new(
            star4.clone(),
            vec![ratio(5, 2), ratio(3, 2), ratio(3, 2), ratio(5, 2)],
        )
        .unwrap();
        let split = star4.split_to_binary().unwrap();
        let g = f.transfer_through_split(&split).unwrap();
        assert_eq!(g.total_weight(), f.total_weight());
        for (x, y) in [("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")] {
            assert_eq!(g.dw_labels(x, y).unwrap(), f.dw_labels(x, y).unwrap(), "{x}-{y}");
        }
        for &e in &split.added {
            assert_eq!(*g.weight(e), rat(0));
        }
    }

    #[test]
    fn filling_json_roundtrip() {
        let f = filling(2, -1);
        let doc = f.to_json().unwrap();
        assert_eq!(doc["weights"]["i0-i1"], Value::String("-1".into()));
        let back = WeightedFilling::from_json(&doc).unwrap();
        assert_eq!(back.total_weight(), f.total_weight());
        assert_eq!(back.dw_labels("a", "c").unwrap(), f.dw_labels("a", "c").unwrap());
    }

    #[test]
    fn weight_map_errors() {
        let tree = gap_type();
        let mut map = BTreeMap::new();
        map.insert("a-i0".to_string(), rat(1));
        assert!(matches!(
            WeightedFilling::from_weight_map(tree.clone(), &map),
            Err(FillingError::MissingWeight(_))
        ));
        for e in 0..tree.edge_count() {
            map.insert(tree.edge_key(e), rat(1));
        }
        map.insert("zz-zz".into(), rat(1));
        assert!(matches!(
            WeightedFilling::from_weight_map(tree, &map),
            Err(FillingError::UnknownEdgeKey(_))
        ));
    }
}
