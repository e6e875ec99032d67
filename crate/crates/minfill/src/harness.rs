//! Verification harness: reference instances, reproduction checks and
//! seeded randomized campaigns.
//!
//! The campaign generates deterministic random spaces, solves each one and
//! asserts the theorem-level and per-topology properties selected in the
//! config. Failures carry the full instance JSON so they re-run standalone.

use crate::denegativize::remove_negative_edges;
use crate::filling::tour_lower_bound;
use crate::metric::{PseudometricSpace, SpaceClassKind};
use crate::rational::{format_rational, rat, Rational};
use crate::solver::{self, SolverConfig, SolverError};
use crate::topology::binary_tree_by_index;
use num::{Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::sync::Mutex;
use std::time::{Duration, Instant};
use thiserror::Error;

pub mod fixtures {
    //! Small reference instances used by the `examples` command and tests.

    use crate::metric::PseudometricSpace;
    use crate::rational::rat;
    use crate::topology::TreeTopology;

    /// Four points with dist(a,b) = dist(c,d) = 4 and all cross pairs 3.
    /// The type pairing (a,b) and (c,d) shows the classical/generalized gap
    /// 8 vs 7; globally both optima are 7.
    pub fn gap_space() -> PseudometricSpace {
        PseudometricSpace::new(
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            vec![
                vec![rat(0), rat(4), rat(3), rat(3)],
                vec![rat(4), rat(0), rat(3), rat(3)],
                vec![rat(3), rat(3), rat(0), rat(4)],
                vec![rat(3), rat(3), rat(4), rat(0)],
            ],
        )
        .expect("fixture is valid")
    }

    /// The fixed type for the gap space: edges au, bu, uv, cv, dv with
    /// interior u = i0, v = i1.
    pub fn gap_type() -> TreeTopology {
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
        .expect("fixture is valid")
    }

    /// Three points with distances 1, 2, 5: the triangle inequality fails,
    /// the classical and generalized optima split to 5 vs 4, and the
    /// generalized optimum carries a negative boundary edge.
    pub fn violating_space() -> PseudometricSpace {
        PseudometricSpace::new(
            vec!["x".into(), "y".into(), "z".into()],
            vec![
                vec![rat(0), rat(1), rat(5)],
                vec![rat(1), rat(0), rat(2)],
                vec![rat(5), rat(2), rat(0)],
            ],
        )
        .expect("fixture is valid")
    }

    /// Two points at distance d.
    pub fn two_point_space(d: i64) -> PseudometricSpace {
        PseudometricSpace::new(
            vec!["A".into(), "B".into()],
            vec![vec![rat(0), rat(d)], vec![rat(d), rat(0)]],
        )
        .expect("fixture is valid")
    }

    /// A two-point tree with a pendant interior vertex; its pendant edge
    /// lies on no boundary path, so the generalized problem is unbounded.
    pub fn pendant_interior_type() -> TreeTopology {
        TreeTopology::new_relaxed(
            vec![vec!["A".into()], vec!["B".into()], vec![]],
            vec![(0, 1), (1, 2)],
        )
        .expect("fixture is valid")
    }
}

/// One line of the `examples` reproduction table.
#[derive(Debug, Clone)]
pub struct ReferenceCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Reproduce the reference results. With `corrupt` set, one embedded
/// distance is deliberately wrong so the failure path can be exercised.
pub fn reference_checks(corrupt: bool) -> Vec<ReferenceCheck> {
    let config = SolverConfig::default();
    let mut out = Vec::new();

    let gap_space = if corrupt {
        PseudometricSpace::new(
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            vec![
                vec![rat(0), rat(5), rat(3), rat(3)],
                vec![rat(5), rat(0), rat(3), rat(3)],
                vec![rat(3), rat(3), rat(0), rat(4)],
                vec![rat(3), rat(3), rat(4), rat(0)],
            ],
        )
        .expect("corrupted fixture is still a valid space")
    } else {
        fixtures::gap_space()
    };

    {
        let tree = fixtures::gap_type();
        let (passed, detail) = match (
            solver::mpf(&gap_space, &tree),
            solver::mpf_gen(&gap_space, &tree),
        ) {
            (Ok(nn), Ok(gen)) => {
                let v1 = nn.optimal_value().cloned();
                let v2 = gen.optimal_value().cloned();
                let ok = v1 == Some(rat(8)) && v2 == Some(rat(7));
                let fmt = |v: &Option<Rational>| {
                    v.as_ref().map_or("-".to_string(), format_rational)
                };
                (ok, format!("mpf={} mpf_minus={} expected 8/7", fmt(&v1), fmt(&v2)))
            }
            (a, b) => (false, format!("solver error: {:?} {:?}", a.err(), b.err())),
        };
        out.push(ReferenceCheck { name: "parametric-gap", passed, detail });
    }

    {
        let (passed, detail) = match solver::mf(&gap_space, &config) {
            Ok(report) => (
                report.mf == rat(7) && report.mf_minus == rat(7) && report.theorem_holds,
                format!(
                    "mf={} mf_minus={} expected 7/7",
                    format_rational(&report.mf),
                    format_rational(&report.mf_minus)
                ),
            ),
            Err(e) => (false, format!("solver error: {e}")),
        };
        out.push(ReferenceCheck { name: "global-equality", passed, detail });
    }

    {
        let space = fixtures::violating_space();
        let (passed, detail) = match solver::mf(&space, &config) {
            Ok(report) => {
                let f = &report.optimal_generalized;
                let has_negative_boundary = (0..f.topology().edge_count()).any(|e| {
                    let (u, v) = f.topology().edge_endpoints(e);
                    f.weight(e).is_negative()
                        && (f.topology().is_boundary(u) || f.topology().is_boundary(v))
                });
                (
                    report.mf == rat(5)
                        && report.mf_minus == rat(4)
                        && !report.theorem_holds
                        && has_negative_boundary,
                    format!(
                        "mf={} mf_minus={} negative_boundary_edge={} expected 5/4/true",
                        format_rational(&report.mf),
                        format_rational(&report.mf_minus),
                        has_negative_boundary
                    ),
                )
            }
            Err(e) => (false, format!("solver error: {e}")),
        };
        out.push(ReferenceCheck { name: "violating-gap", passed, detail });
    }

    {
        let space = fixtures::two_point_space(1);
        let tree = fixtures::pendant_interior_type();
        let (passed, detail) = match solver::mpf_gen(&space, &tree) {
            Ok(result) => (
                result.outcome.is_unbounded(),
                format!("unbounded={} expected true", result.outcome.is_unbounded()),
            ),
            Err(e) => (false, format!("solver error: {e}")),
        };
        out.push(ReferenceCheck { name: "pendant-unbounded", passed, detail });
    }

    out
}

/// Campaign properties, each checkable per instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Check {
    /// Global equality mf = mf_minus on triangle-respecting spaces;
    /// mf_minus <= mf on violating ones.
    Theorem,
    /// Per-topology: generalized optimum weighs at least the planar-tour
    /// bound, and tour path weights sum to exactly twice the total.
    TourBound,
    /// Per-topology exact-path structure of generalized optima.
    Lemma5,
    /// Boundary-incident edges of generalized optima are non-negative,
    /// strictly positive on non-degenerate metrics. Needs the hypothesis.
    Lemma6,
    /// Rewiring every globally minimal generalized optimum to non-negative
    /// weights preserves weight and validity. Needs the hypothesis.
    Denegativize,
    /// mf_minus is positive whenever the planar bounds are.
    Positivity,
}

impl Check {
    pub const ALL: [Check; 6] = [
        Check::Theorem,
        Check::TourBound,
        Check::Lemma5,
        Check::Lemma6,
        Check::Denegativize,
        Check::Positivity,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Check::Theorem => "theorem",
            Check::TourBound => "tour_bound",
            Check::Lemma5 => "lemma5",
            Check::Lemma6 => "lemma6",
            Check::Denegativize => "denegativize",
            Check::Positivity => "positivity",
        }
    }

    pub fn from_name(name: &str) -> Option<Check> {
        Check::ALL.iter().copied().find(|c| c.name() == name)
    }

    /// Lemma6 and denegativization assume the triangle inequality.
    fn applies_to(&self, class: SpaceClassKind) -> bool {
        match self {
            Check::Lemma6 | Check::Denegativize => {
                !matches!(class, SpaceClassKind::TriangleViolating)
            }
            _ => true,
        }
    }
}

#[derive(Debug, Error)]
pub enum CampaignError {
    #[error("sizes must be non-empty")]
    NoSizes,
    #[error("size {size} outside supported range 2..={max}")]
    BadSize { size: usize, max: usize },
    #[error("instances_per_size must be at least 1")]
    NoInstances,
    #[error("no checks selected")]
    NoChecks,
    #[error(transparent)]
    Solver(#[from] SolverError),
}

#[derive(Debug, Clone)]
pub struct CampaignConfig {
    pub sizes: Vec<usize>,
    pub instances_per_size: usize,
    pub seed: u64,
    pub class_request: SpaceClassKind,
    pub checks: Vec<Check>,
    pub max_n: usize,
}

impl CampaignConfig {
    pub fn new(sizes: Vec<usize>, instances_per_size: usize, seed: u64) -> Self {
        Self {
            sizes,
            instances_per_size,
            seed,
            class_request: SpaceClassKind::NonDegenerateMetric,
            checks: Check::ALL.to_vec(),
            max_n: SolverConfig::default().max_n,
        }
    }

    fn validate(&self) -> Result<(), CampaignError> {
        if self.sizes.is_empty() {
            return Err(CampaignError::NoSizes);
        }
        let min = match self.class_request {
            SpaceClassKind::TriangleViolating => 3,
            _ => 2,
        };
        for &size in &self.sizes {
            if size < min || size > self.max_n {
                return Err(CampaignError::BadSize { size, max: self.max_n });
            }
        }
        if self.instances_per_size == 0 {
            return Err(CampaignError::NoInstances);
        }
        if self.checks.is_empty() {
            return Err(CampaignError::NoChecks);
        }
        Ok(())
    }
}

/// One failed assertion, with the instance dump that reproduces it.
#[derive(Debug, Clone)]
pub struct CampaignFailure {
    pub size: usize,
    pub index: usize,
    pub seed: u64,
    pub check: Check,
    pub message: String,
    pub instance: Value,
}

#[derive(Debug, Clone, Default)]
pub struct SizeSummary {
    pub size: usize,
    pub instances: usize,
    pub theorem_equal: usize,
}

#[derive(Debug, Clone)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub instances: usize,
    pub per_size: Vec<SizeSummary>,
    pub checks_run: BTreeMap<&'static str, usize>,
    pub skipped_checks: Vec<&'static str>,
    /// Parametric generalized optima containing a negative edge.
    pub negative_generalized_optima: usize,
    /// Denegativization runs over globally minimal optima, how many had
    /// negative edges, and total rewiring steps.
    pub denegativize_runs: usize,
    pub denegativize_with_negative: usize,
    pub denegativize_steps: usize,
    pub failures: Vec<CampaignFailure>,
    pub elapsed: Duration,
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Deterministic report body; wall-clock time is deliberately excluded.
    pub fn to_json(&self) -> Value {
        json!({
            "config": {
                "sizes": self.config.sizes,
                "count": self.config.instances_per_size,
                "seed": self.config.seed,
                "class": self.config.class_request.as_str(),
                "checks": self.config.checks.iter().map(|c| c.name()).collect::<Vec<_>>(),
            },
            "instances": self.instances,
            "per_size": self.per_size.iter().map(|s| json!({
                "size": s.size,
                "instances": s.instances,
                "theorem_equal": s.theorem_equal,
            })).collect::<Vec<_>>(),
            "checks_run": self.checks_run.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
            "skipped_checks": self.skipped_checks,
            "stats": {
                "negative_generalized_optima": self.negative_generalized_optima,
                "denegativize_runs": self.denegativize_runs,
                "denegativize_with_negative": self.denegativize_with_negative,
                "denegativize_steps": self.denegativize_steps,
            },
            "failure_count": self.failures.len(),
            "failures": self.failures.iter().map(|f| json!({
                "size": f.size,
                "index": f.index,
                "seed": f.seed,
                "check": f.check.name(),
                "message": f.message,
                "instance": f.instance,
            })).collect::<Vec<_>>(),
        })
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Deterministic per-instance seed.
pub fn instance_seed(base: u64, size: usize, index: usize) -> u64 {
    splitmix64(base ^ splitmix64(size as u64) ^ splitmix64((index as u64) << 20))
}

struct InstanceOutcome {
    size: usize,
    index: usize,
    theorem_equal: bool,
    negative_optima: usize,
    denegativize_runs: usize,
    denegativize_with_negative: usize,
    denegativize_steps: usize,
    failures: Vec<CampaignFailure>,
}

/// Run the campaign. Instances execute in parallel on the current rayon
/// pool; the report is assembled in (size, index) order regardless of
/// scheduling.
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignReport, CampaignError> {
    config.validate()?;
    let start = Instant::now();

    let jobs: Vec<(usize, usize)> = config
        .sizes
        .iter()
        .flat_map(|&size| (0..config.instances_per_size).map(move |index| (size, index)))
        .collect();

    let outcomes: Result<Vec<InstanceOutcome>, CampaignError> = jobs
        .par_iter()
        .map(|&(size, index)| run_instance(config, size, index))
        .collect();
    let mut outcomes = outcomes?;
    outcomes.sort_by_key(|o| (o.size, o.index));

    let mut per_size: Vec<SizeSummary> = config
        .sizes
        .iter()
        .map(|&size| SizeSummary { size, ..Default::default() })
        .collect();
    let mut checks_run: BTreeMap<&'static str, usize> = BTreeMap::new();
    let active: Vec<Check> = config
        .checks
        .iter()
        .copied()
        .filter(|c| c.applies_to(config.class_request))
        .collect();
    let skipped: Vec<&'static str> = config
        .checks
        .iter()
        .filter(|c| !c.applies_to(config.class_request))
        .map(|c| c.name())
        .collect();

    let mut failures = Vec::new();
    let mut negative_optima = 0;
    let mut dn_runs = 0;
    let mut dn_with_negative = 0;
    let mut dn_steps = 0;
    for outcome in &mut outcomes {
        let summary = per_size
            .iter_mut()
            .find(|s| s.size == outcome.size)
            .expect("size present");
        summary.instances += 1;
        if outcome.theorem_equal {
            summary.theorem_equal += 1;
        }
        for check in &active {
            *checks_run.entry(check.name()).or_insert(0) += 1;
        }
        negative_optima += outcome.negative_optima;
        dn_runs += outcome.denegativize_runs;
        dn_with_negative += outcome.denegativize_with_negative;
        dn_steps += outcome.denegativize_steps;
        failures.append(&mut outcome.failures);
    }

    Ok(CampaignReport {
        config: config.clone(),
        instances: jobs.len(),
        per_size,
        checks_run,
        skipped_checks: skipped,
        negative_generalized_optima: negative_optima,
        denegativize_runs: dn_runs,
        denegativize_with_negative: dn_with_negative,
        denegativize_steps: dn_steps,
        failures,
        elapsed: start.elapsed(),
    })
}

fn run_instance(
    config: &CampaignConfig,
    size: usize,
    index: usize,
) -> Result<InstanceOutcome, CampaignError> {
    let seed = instance_seed(config.seed, size, index);
    let space = PseudometricSpace::random(size, seed, config.class_request)
        .map_err(|e| CampaignError::Solver(SolverError::Filling(crate::filling::FillingError::Malformed(e.to_string()))))?;
    let instance_doc = space.to_json();
    let enabled = |check: Check| {
        config.checks.contains(&check) && check.applies_to(config.class_request)
    };

    struct VisitState {
        failures: Vec<(usize, Check, String)>,
        negative_optima: usize,
        min_bound: Option<Rational>,
    }
    let state = Mutex::new(VisitState { failures: Vec::new(), negative_optima: 0, min_bound: None });
    let is_nondegenerate = matches!(space.classify().kind(), SpaceClassKind::NonDegenerateMetric);

    let solver_config = SolverConfig { max_n: config.max_n };
    let report = solver::mf_with(&space, &solver_config, |topo_index, _nn, gen| {
        let mut local: Vec<(usize, Check, String)> = Vec::new();
        let filling = gen.optimal_filling.as_ref().expect("valid types are bounded");
        let tree = filling.topology();
        let has_negative = filling.has_negative_edge();

        let mut min_bound_update: Option<Rational> = None;
        if enabled(Check::TourBound) || enabled(Check::Positivity) {
            match tree.planar_order().and_then(|order| {
                let paths = tree.tour_paths(&order)?;
                Ok((order, paths))
            }) {
                Ok((order, paths)) => {
                    match tour_lower_bound(&space, &order) {
                        Ok(bound) => {
                            if enabled(Check::TourBound) {
                                let total = filling.total_weight();
                                if total < bound {
                                    local.push((topo_index, Check::TourBound, format!(
                                        "generalized optimum {} below planar-tour bound {}",
                                        format_rational(&total),
                                        format_rational(&bound)
                                    )));
                                }
                                let doubled: Rational =
                                    paths.iter().map(|p| filling.path_weight(p)).sum();
                                if doubled != total * rat(2) {
                                    local.push((topo_index, Check::TourBound, format!(
                                        "tour paths weigh {} but twice the total is {}",
                                        format_rational(&doubled),
                                        format_rational(&(filling.total_weight() * rat(2)))
                                    )));
                                }
                            }
                            min_bound_update = Some(bound);
                        }
                        Err(e) => local.push((topo_index, Check::TourBound, e.to_string())),
                    }
                }
                Err(e) => local.push((topo_index, Check::TourBound, e.to_string())),
            }
        }

        if enabled(Check::Lemma5) {
            match filling.check_exact_path_structure(&space) {
                Ok(structure) => {
                    if !structure.uncovered_edges.is_empty() {
                        let keys: Vec<String> = structure
                            .uncovered_edges
                            .iter()
                            .map(|&e| tree.edge_key(e))
                            .collect();
                        local.push((topo_index, Check::Lemma5, format!(
                            "edges without an exact path: {keys:?}"
                        )));
                    }
                    if !structure.degree3_pairs_uncovered.is_empty()
                        || !structure.majority_subsets_uncovered.is_empty()
                    {
                        local.push((topo_index, Check::Lemma5, format!(
                            "uncovered incident pairs {:?} / majority subsets {:?}",
                            structure.degree3_pairs_uncovered,
                            structure.majority_subsets_uncovered
                        )));
                    }
                }
                Err(e) => local.push((topo_index, Check::Lemma5, e.to_string())),
            }
        }

        if enabled(Check::Lemma6) {
            for e in 0..tree.edge_count() {
                let (u, v) = tree.edge_endpoints(e);
                if !tree.is_boundary(u) && !tree.is_boundary(v) {
                    continue;
                }
                let w = filling.weight(e);
                if w.is_negative() || (is_nondegenerate && w.is_zero()) {
                    local.push((topo_index, Check::Lemma6, format!(
                        "boundary edge `{}` has weight {}",
                        tree.edge_key(e),
                        format_rational(w)
                    )));
                }
            }
        }

        let mut st = state.lock().expect("visit state poisoned");
        if has_negative {
            st.negative_optima += 1;
        }
        if let Some(bound) = min_bound_update {
            let replace = match &st.min_bound {
                None => true,
                Some(current) => bound < *current,
            };
            if replace {
                st.min_bound = Some(bound);
            }
        }
        st.failures.extend(local);
    })?;

    let state = state.into_inner().expect("visit state poisoned");
    let mut failures: Vec<CampaignFailure> = Vec::new();
    let mut sorted = state.failures;
    sorted.sort_by_key(|(topo, check, _)| (*topo, *check));
    for (topo, check, message) in sorted {
        failures.push(CampaignFailure {
            size,
            index,
            seed,
            check,
            message: format!("topology {topo}: {message}"),
            instance: instance_doc.clone(),
        });
    }

    let theorem_equal = report.mf == report.mf_minus;
    if enabled(Check::Theorem) {
        let violated = match config.class_request {
            SpaceClassKind::TriangleViolating => report.mf_minus > report.mf,
            _ => !theorem_equal,
        };
        if violated {
            failures.push(CampaignFailure {
                size,
                index,
                seed,
                check: Check::Theorem,
                message: format!(
                    "mf={} mf_minus={}",
                    format_rational(&report.mf),
                    format_rational(&report.mf_minus)
                ),
                instance: instance_doc.clone(),
            });
        }
    }

    if enabled(Check::Positivity) {
        let some_positive_distance =
            (0..space.len()).any(|i| (0..space.len()).any(|j| space.dist(i, j).is_positive()));
        let bounds_positive = match config.class_request {
            SpaceClassKind::TriangleViolating => {
                state.min_bound.as_ref().map(|b| b.is_positive()).unwrap_or(false)
            }
            _ => some_positive_distance,
        };
        if bounds_positive && !report.mf_minus.is_positive() {
            failures.push(CampaignFailure {
                size,
                index,
                seed,
                check: Check::Positivity,
                message: format!(
                    "mf_minus={} is not positive",
                    format_rational(&report.mf_minus)
                ),
                instance: instance_doc.clone(),
            });
        }
    }

    let mut dn_runs = 0;
    let mut dn_with_negative = 0;
    let mut dn_steps = 0;
    if enabled(Check::Denegativize) {
        // Every topology whose generalized parametric value ties the global
        // minimum yields a globally minimal filling; denegativize them all.
        for summary in &report.per_topology {
            if summary.mpf_minus != report.mf_minus {
                continue;
            }
            let tree = binary_tree_by_index(space.labels(), summary.index as u128)
                .map_err(SolverError::Topology)?;
            let gen = solver::mpf_gen(&space, &tree)?;
            let filling = gen.optimal_filling.as_ref().expect("bounded");
            dn_runs += 1;
            if filling.has_negative_edge() {
                dn_with_negative += 1;
            }
            match remove_negative_edges(filling, &space) {
                Ok((result, steps)) => {
                    dn_steps += steps.len();
                    let mut problems: Vec<String> = Vec::new();
                    if result.total_weight() != filling.total_weight() {
                        problems.push("total weight changed".into());
                    }
                    match result.is_nonneg_filling(&space) {
                        Ok(true) => {}
                        Ok(false) => problems.push("result is not a non-negative filling".into()),
                        Err(e) => problems.push(e.to_string()),
                    }
                    let mut counts: Vec<usize> =
                        steps.iter().map(|s| s.exact_before).collect();
                    counts.extend(steps.last().map(|s| s.exact_after));
                    if counts.windows(2).any(|w| w[1] >= w[0]) {
                        problems.push(format!("exact-pair counts not strictly decreasing: {counts:?}"));
                    }
                    let n = space.len();
                    if steps.len() > n * (n - 1) / 2 {
                        problems.push(format!("{} steps exceed the pair bound", steps.len()));
                    }
                    for message in problems {
                        failures.push(CampaignFailure {
                            size,
                            index,
                            seed,
                            check: Check::Denegativize,
                            message: format!("topology {}: {message}", summary.index),
                            instance: instance_doc.clone(),
                        });
                    }
                }
                Err(e) => failures.push(CampaignFailure {
                    size,
                    index,
                    seed,
                    check: Check::Denegativize,
                    message: format!("topology {}: {e}", summary.index),
                    instance: instance_doc.clone(),
                }),
            }
        }
    }

    Ok(InstanceOutcome {
        size,
        index,
        theorem_equal,
        negative_optima: state.negative_optima,
        denegativize_runs: dn_runs,
        denegativize_with_negative: dn_with_negative,
        denegativize_steps: dn_steps,
        failures,
    })
}
