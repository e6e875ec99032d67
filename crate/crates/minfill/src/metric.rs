//! Finite pseudometric spaces: construction, classification, JSON I/O and
//! seeded random generation.
//!
//! A space is a list of labelled boundary points with a symmetric rational
//! distance matrix. Zero diagonal and non-negativity are invariants; the
//! triangle inequality is deliberately *not* — it is a queryable property,
//! so triangle-violating inputs are representable.

use crate::rational::{format_rational, rational_from_json, Rational};
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("empty label at position {0}")]
    EmptyLabel(usize),
    #[error("distance matrix must be {expected}x{expected}, row {row} has {got} entries")]
    BadShape { expected: usize, row: usize, got: usize },
    #[error("bad distance at row {row}, column {col}: {reason}")]
    BadEntry { row: usize, col: usize, reason: String },
    #[error("asymmetric matrix at row {row}, column {col}: {a} != {b}")]
    Asymmetric { row: usize, col: usize, a: String, b: String },
    #[error("nonzero diagonal at row {row}: {value}")]
    NonzeroDiagonal { row: usize, value: String },
    #[error("negative distance at row {row}, column {col}: {value}")]
    NegativeDistance { row: usize, col: usize, value: String },
    #[error("need at least {min} points, got {got}")]
    TooFewPoints { min: usize, got: usize },
    #[error("no {request} space on {n} points exists")]
    UnsatisfiableRequest { request: &'static str, n: usize },
}

/// A finite pseudometric space: labelled points plus a symmetric rational
/// distance matrix with zero diagonal and non-negative entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudometricSpace {
    labels: Vec<String>,
    dist: Vec<Vec<Rational>>,
}

/// How a distance matrix sits relative to the metric axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceClass {
    /// Some off-diagonal zero distance or some tight triangle.
    DegeneratePseudometric(DegeneracyWitness),
    /// All off-diagonal distances positive, all triangle inequalities strict.
    NonDegenerateMetric,
    /// Some triple with dist(x,z) > dist(x,y) + dist(y,z).
    TriangleViolating(TriangleWitness),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DegeneracyWitness {
    ZeroDistance { a: String, b: String },
    TriangleEquality { x: String, y: String, z: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleWitness {
    pub x: String,
    pub y: String,
    pub z: String,
}

/// Classification kind, without the witness payload.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceClassKind {
    DegeneratePseudometric,
    NonDegenerateMetric,
    TriangleViolating,
}

impl SpaceClass {
    pub fn kind(&self) -> SpaceClassKind {
        match self {
            SpaceClass::DegeneratePseudometric(_) => SpaceClassKind::DegeneratePseudometric,
            SpaceClass::NonDegenerateMetric => SpaceClassKind::NonDegenerateMetric,
            SpaceClass::TriangleViolating(_) => SpaceClassKind::TriangleViolating,
        }
    }
}

impl SpaceClassKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpaceClassKind::DegeneratePseudometric => "degenerate_pseudometric",
            SpaceClassKind::NonDegenerateMetric => "non_degenerate_metric",
            SpaceClassKind::TriangleViolating => "triangle_violating",
        }
    }
}

impl PseudometricSpace {
    /// Build a space, checking all invariants: distinct non-empty labels,
    /// square symmetric matrix, zero diagonal, no negative entries.
    pub fn new(labels: Vec<String>, dist: Vec<Vec<Rational>>) -> Result<Self, SpaceError> {
        let n = labels.len();
        if n == 0 {
            return Err(SpaceError::TooFewPoints { min: 1, got: 0 });
        }
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(SpaceError::EmptyLabel(i));
            }
            if labels[..i].contains(label) {
                return Err(SpaceError::DuplicateLabel(label.clone()));
            }
        }
        if dist.len() != n {
            return Err(SpaceError::BadShape { expected: n, row: dist.len(), got: dist.len() });
        }
        for (i, row) in dist.iter().enumerate() {
            if row.len() != n {
                return Err(SpaceError::BadShape { expected: n, row: i, got: row.len() });
            }
        }
        for i in 0..n {
            if !dist[i][i].is_zero() {
                return Err(SpaceError::NonzeroDiagonal { row: i, value: format_rational(&dist[i][i]) });
            }
            for j in 0..n {
                if dist[i][j] < Rational::zero() {
                    return Err(SpaceError::NegativeDistance {
                        row: i,
                        col: j,
                        value: format_rational(&dist[i][j]),
                    });
                }
                if dist[i][j] != dist[j][i] {
                    return Err(SpaceError::Asymmetric {
                        row: i,
                        col: j,
                        a: format_rational(&dist[i][j]),
                        b: format_rational(&dist[j][i]),
                    });
                }
            }
        }
        Ok(Self { labels, dist })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn dist(&self, i: usize, j: usize) -> &Rational {
        &self.dist[i][j]
    }

    pub fn dist_by_label(&self, a: &str, b: &str) -> Option<&Rational> {
        Some(self.dist(self.index_of(a)?, self.index_of(b)?))
    }

    /// Total classification of the matrix. Triangle violations win; otherwise
    /// the first zero off-diagonal pair, then the first tight triangle (both
    /// in label order), makes the space degenerate.
    pub fn classify(&self) -> SpaceClass {
        let n = self.len();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if x == y || y == z || x == z {
                        continue;
                    }
                    if self.dist[x][z] > &self.dist[x][y] + &self.dist[y][z] {
                        return SpaceClass::TriangleViolating(TriangleWitness {
                            x: self.labels[x].clone(),
                            y: self.labels[y].clone(),
                            z: self.labels[z].clone(),
                        });
                    }
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if self.dist[a][b].is_zero() {
                    return SpaceClass::DegeneratePseudometric(DegeneracyWitness::ZeroDistance {
                        a: self.labels[a].clone(),
                        b: self.labels[b].clone(),
                    });
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if x == y || y == z || x == z {
                        continue;
                    }
                    if self.dist[x][z] == &self.dist[x][y] + &self.dist[y][z] {
                        return SpaceClass::DegeneratePseudometric(DegeneracyWitness::TriangleEquality {
                            x: self.labels[x].clone(),
                            y: self.labels[y].clone(),
                            z: self.labels[z].clone(),
                        });
                    }
                }
            }
        }
        SpaceClass::NonDegenerateMetric
    }

    /// Parse the JSON instance format:
    /// `{"labels": ["a", ...], "dist": [[0, "3/2", ...], ...]}`.
    /// Entries may be numbers or strings; decimals convert exactly.
    pub fn parse(text: &str) -> Result<Self, SpaceError> {
        let doc: Value =
            serde_json::from_str(text).map_err(|e| SpaceError::Malformed(e.to_string()))?;
        Self::from_json(&doc)
    }

    pub fn from_json(doc: &Value) -> Result<Self, SpaceError> {
        let obj = doc
            .as_object()
            .ok_or_else(|| SpaceError::Malformed("top level must be an object".into()))?;
        let labels_val = obj
            .get("labels")
            .ok_or_else(|| SpaceError::Malformed("missing `labels`".into()))?
            .as_array()
            .ok_or_else(|| SpaceError::Malformed("`labels` must be an array".into()))?;
        let labels: Vec<String> = labels_val
            .iter()
            .map(|v| {
                v.as_str()
                    .map(str::to_owned)
                    .ok_or_else(|| SpaceError::Malformed("labels must be strings".into()))
            })
            .collect::<Result<_, _>>()?;
        let dist_val = obj
            .get("dist")
            .ok_or_else(|| SpaceError::Malformed("missing `dist`".into()))?
            .as_array()
            .ok_or_else(|| SpaceError::Malformed("`dist` must be an array of rows".into()))?;
        let mut dist = Vec::with_capacity(dist_val.len());
        for (i, row_val) in dist_val.iter().enumerate() {
            let row_arr = row_val
                .as_array()
                .ok_or_else(|| SpaceError::Malformed(format!("dist row {i} must be an array")))?;
            let mut row = Vec::with_capacity(row_arr.len());
            for (j, entry) in row_arr.iter().enumerate() {
                let value = rational_from_json(entry).map_err(|e| SpaceError::BadEntry {
                    row: i,
                    col: j,
                    reason: e.to_string(),
                })?;
                row.push(value);
            }
            dist.push(row);
        }
        Self::new(labels, dist)
    }

    /// Serialize to the instance format; distances as exact rational strings.
    pub fn to_json(&self) -> Value {
        json!({
            "labels": self.labels,
            "dist": self
                .dist
                .iter()
                .map(|row| row.iter().map(|d| Value::String(format_rational(d))).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    /// Deterministic seeded generator for the requested classification.
    ///
    /// Metric requests draw integer distances uniformly from [1, 100] and take
    /// the all-pairs shortest-path closure, redrawing until the classification
    /// matches. Closure ties make non-degenerate draws vanishingly rare for
    /// n >= 5, so after ten failed attempts the non-degenerate branch switches
    /// to draws from [51, 100], which are strictly metric outright.
    /// Triangle-violating requests draw raw matrices until a violation exists.
    pub fn random(n: usize, seed: u64, request: SpaceClassKind) -> Result<Self, SpaceError> {
        if n < 2 {
            return Err(SpaceError::TooFewPoints { min: 2, got: n });
        }
        if request == SpaceClassKind::TriangleViolating && n < 3 {
            return Err(SpaceError::UnsatisfiableRequest { request: "triangle-violating", n });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut attempt = 0usize;
        loop {
            let space = match request {
                SpaceClassKind::NonDegenerateMetric => {
                    let lo = if attempt < 10 { 1 } else { 51 };
                    let raw = draw_matrix(&mut rng, n, lo, 100);
                    PseudometricSpace::new(dummy_labels(n), shortest_path_closure(raw))?
                }
                SpaceClassKind::DegeneratePseudometric => {
                    // Zero draws keep zero distances reachable at any n.
                    let raw = draw_matrix(&mut rng, n, 0, 100);
                    PseudometricSpace::new(dummy_labels(n), shortest_path_closure(raw))?
                }
                SpaceClassKind::TriangleViolating => {
                    PseudometricSpace::new(dummy_labels(n), draw_matrix(&mut rng, n, 1, 100))?
                }
            };
            if space.classify().kind() == request {
                return Ok(space);
            }
            attempt += 1;
        }
    }
}

fn dummy_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

fn draw_matrix(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> Vec<Vec<Rational>> {
    let mut dist = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = crate::rational::rat(rng.gen_range(lo..=hi));
            dist[i][j] = d.clone();
            dist[j][i] = d;
        }
    }
    dist
}

/// Floyd–Warshall closure; enforces the triangle inequality while preserving
/// symmetry and the zero diagonal.
pub fn shortest_path_closure(mut dist: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let n = dist.len();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &dist[i][k] + &dist[k][j];
                if via < dist[i][j] {
                    dist[i][j] = via;
                }
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn space_from(labels: &[&str], entries: &[&[i64]]) -> Result<PseudometricSpace, SpaceError> {
        PseudometricSpace::new(
            labels.iter().map(|s| s.to_string()).collect(),
            entries
                .iter()
                .map(|row| row.iter().map(|&v| rat(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn parses_smallest_valid_instance() {
        let s = PseudometricSpace::parse(r#"{"labels": ["A", "B"], "dist": [[0, 1], [1, 0]]}"#)
            .unwrap();
        assert_eq!(s.labels(), ["A", "B"]);
        assert_eq!(*s.dist(0, 1), rat(1));
        assert_eq!(*s.dist(1, 0), rat(1));
    }

    #[test]
    fn parses_triangle_violating_instance() {
        // Violation is allowed at parse time; it only shows up in classify.
        let s = PseudometricSpace::parse(
            r#"{"labels": ["x", "y", "z"], "dist": [[0, 1, 5], [1, 0, 2], [5, 2, 0]]}"#,
        )
        .unwrap();
        assert_eq!(s.len(), 3);
        match s.classify() {
            SpaceClass::TriangleViolating(w) => {
                assert_eq!((w.x.as_str(), w.y.as_str(), w.z.as_str()), ("x", "y", "z"));
            }
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn rejects_negative_distance_with_location() {
        let err = PseudometricSpace::parse(
            r#"{"labels": ["A", "B"], "dist": [[0, -1], [-1, 0]]}"#,
        )
        .unwrap_err();
        assert_eq!(
            err,
            SpaceError::NegativeDistance { row: 0, col: 1, value: "-1".into() }
        );
    }

    #[test]
    fn rejects_asymmetry_diagonal_and_duplicates() {
        let asym = space_from(&["a", "b"], &[&[0, 1], &[2, 0]]).unwrap_err();
        assert!(matches!(asym, SpaceError::Asymmetric { row: 0, col: 1, .. }));
        let diag = space_from(&["a", "b"], &[&[1, 1], &[1, 0]]).unwrap_err();
        assert!(matches!(diag, SpaceError::NonzeroDiagonal { row: 0, .. }));
        let dup = space_from(&["a", "a"], &[&[0, 1], &[1, 0]]).unwrap_err();
        assert_eq!(dup, SpaceError::DuplicateLabel("a".into()));
        let shape = space_from(&["a", "b"], &[&[0, 1, 2], &[1, 0]]).unwrap_err();
        assert!(matches!(shape, SpaceError::BadShape { .. }));
    }

    #[test]
    fn classify_all_zero_is_degenerate() {
        let s = space_from(&["a", "b", "c"], &[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]]).unwrap();
        match s.classify() {
            SpaceClass::DegeneratePseudometric(DegeneracyWitness::ZeroDistance { a, b }) => {
                assert_eq!((a.as_str(), b.as_str()), ("a", "b"));
            }
            other => panic!("expected zero-distance degeneracy, got {other:?}"),
        }
    }

    #[test]
    fn classify_unit_equilateral_is_nondegenerate() {
        let s = space_from(&["a", "b", "c"], &[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]).unwrap();
        assert_eq!(s.classify(), SpaceClass::NonDegenerateMetric);
    }

    #[test]
    fn classify_tight_triangle_is_degenerate() {
        let s = space_from(&["a", "b", "c"], &[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]]).unwrap();
        match s.classify() {
            SpaceClass::DegeneratePseudometric(DegeneracyWitness::TriangleEquality { x, y, z }) => {
                assert_eq!((x.as_str(), y.as_str(), z.as_str()), ("a", "b", "c"));
            }
            other => panic!("expected tight triangle, got {other:?}"),
        }
    }

    #[test]
    fn random_space_matches_request_and_is_reproducible() {
        let a = PseudometricSpace::random(3, 1, SpaceClassKind::NonDegenerateMetric).unwrap();
        assert_eq!(a.classify(), SpaceClass::NonDegenerateMetric);

        let b1 = PseudometricSpace::random(4, 7, SpaceClassKind::NonDegenerateMetric).unwrap();
        let b2 = PseudometricSpace::random(4, 7, SpaceClassKind::NonDegenerateMetric).unwrap();
        assert_eq!(b1, b2);

        let c = PseudometricSpace::random(3, 2, SpaceClassKind::TriangleViolating).unwrap();
        assert!(matches!(c.classify(), SpaceClass::TriangleViolating(_)));

        let d = PseudometricSpace::random(5, 3, SpaceClassKind::DegeneratePseudometric).unwrap();
        assert!(matches!(d.classify(), SpaceClass::DegeneratePseudometric(_)));
    }

    #[test]
    fn random_space_rejects_tiny_n() {
        assert!(matches!(
            PseudometricSpace::random(1, 0, SpaceClassKind::NonDegenerateMetric),
            Err(SpaceError::TooFewPoints { .. })
        ));
    }

    #[test]
    fn closure_never_violates_triangle() {
        for seed in 0..20 {
            for n in 2..=6 {
                let s = PseudometricSpace::random(n, seed, SpaceClassKind::TriangleViolating);
                let s = match s {
                    Ok(s) => s,
                    Err(_) => continue,
                };
                let closed = shortest_path_closure(
                    (0..n).map(|i| (0..n).map(|j| s.dist(i, j).clone()).collect()).collect(),
                );
                let closed_space =
                    PseudometricSpace::new(s.labels().to_vec(), closed).unwrap();
                assert!(
                    !matches!(closed_space.classify(), SpaceClass::TriangleViolating(_)),
                    "closure left a violation for n={n} seed={seed}"
                );
            }
        }
    }

    #[test]
    fn parse_serialize_parse_is_identity() {
        let s = PseudometricSpace::parse(
            r#"{"labels": ["a", "b", "c"], "dist": [[0, 1.5, "7/2"], ["3/2", 0, 2], [3.5, 2, 0]]}"#,
        )
        .unwrap();
        let text = s.to_json().to_string();
        let reparsed = PseudometricSpace::parse(&text).unwrap();
        assert_eq!(s, reparsed);
    }
}
