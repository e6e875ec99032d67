//! Tree types joining a boundary set.
//!
//! A topology is a tree whose vertices either carry boundary labels or are
//! interior. Solver-facing trees require every degree-1 vertex to be a
//! boundary vertex; a relaxed constructor admits pendant interior vertices so
//! the unboundedness check can be expressed. Binary topologies (interior
//! degree 3, boundary degree 1) are enumerated by leaf insertion: the tree on
//! k+1 leaves arises by subdividing one edge of a tree on k leaves, which
//! yields each topology exactly once and (2n-5)!! in total.

use serde_json::{json, Value};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("need at least {min} boundary labels, got {got}")]
    TooFewLabels { min: usize, got: usize },
    #[error("duplicate boundary label `{0}`")]
    DuplicateLabel(String),
    #[error("graph is not a tree: {0}")]
    NotATree(String),
    #[error("interior vertex `{0}` has degree 1")]
    InteriorLeaf(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("edge {0} is not in the tree")]
    EdgeNotInTree(usize),
    #[error("cyclic order does not match boundary labels: {0}")]
    OrderMismatch(String),
    #[error("vertex `{0}` carries multiple labels; not representable here")]
    MultiLabelVertex(String),
    #[error("malformed topology document: {0}")]
    Malformed(String),
}

/// A tree joining a boundary set. Vertices with an empty label set are
/// interior; quotients may merge several labels onto one vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeTopology {
    vertex_labels: Vec<Vec<String>>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
}

/// A cyclic arrangement of the boundary labels; indices wrap modulo n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicOrder {
    order: Vec<String>,
}

impl CyclicOrder {
    pub fn new(order: Vec<String>) -> Self {
        Self { order }
    }

    pub fn labels(&self) -> &[String] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

impl TreeTopology {
    /// Strict constructor: a connected acyclic graph, distinct labels, and
    /// every degree-1 vertex boundary.
    pub fn new(vertex_labels: Vec<Vec<String>>, edges: Vec<(usize, usize)>) -> Result<Self, TopologyError> {
        let tree = Self::new_relaxed(vertex_labels, edges)?;
        if let Some(v) = tree.interior_leaf() {
            return Err(TopologyError::InteriorLeaf(tree.vertex_name(v)));
        }
        Ok(tree)
    }

    /// Relaxed constructor: still a tree with distinct labels, but pendant
    /// interior vertices are allowed. Exists for the unboundedness check.
    pub fn new_relaxed(
        vertex_labels: Vec<Vec<String>>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, TopologyError> {
        let n = vertex_labels.len();
        if n == 0 {
            return Err(TopologyError::TooFewLabels { min: 1, got: 0 });
        }
        let mut seen: Vec<&str> = Vec::new();
        for labels in &vertex_labels {
            for label in labels {
                if seen.contains(&label.as_str()) {
                    return Err(TopologyError::DuplicateLabel(label.clone()));
                }
                seen.push(label);
            }
        }
        if edges.len() + 1 != n {
            return Err(TopologyError::NotATree(format!(
                "{} vertices but {} edges",
                n,
                edges.len()
            )));
        }
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (id, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(TopologyError::NotATree(format!("edge {id} out of range")));
            }
            if u == v {
                return Err(TopologyError::NotATree(format!("edge {id} is a self-loop")));
            }
            adj[u].push((v, id));
            adj[v].push((u, id));
        }
        // Connectivity: |E| = |V| - 1 plus connected implies acyclic.
        let mut visited = vec![false; n];
        let mut stack = vec![0usize];
        visited[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(w, _) in &adj[v] {
                if !visited[w] {
                    visited[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        if count != n {
            return Err(TopologyError::NotATree("disconnected".into()));
        }
        Ok(Self { vertex_labels, edges, adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn is_interior(&self, v: usize) -> bool {
        self.vertex_labels[v].is_empty()
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        !self.is_interior(v)
    }

    pub fn labels_of(&self, v: usize) -> &[String] {
        &self.vertex_labels[v]
    }

    /// Boundary labels in vertex order (then label order within a vertex).
    pub fn boundary_labels(&self) -> Vec<String> {
        self.vertex_labels.iter().flatten().cloned().collect()
    }

    pub fn boundary_vertex(&self, label: &str) -> Option<usize> {
        self.vertex_labels
            .iter()
            .position(|ls| ls.iter().any(|l| l == label))
    }

    /// Display name: the label for single-label vertices, `i{k}` for the k-th
    /// interior vertex, labels joined by `+` after a quotient merge.
    pub fn vertex_name(&self, v: usize) -> String {
        match self.vertex_labels[v].len() {
            0 => {
                let k = (0..v).filter(|&u| self.is_interior(u)).count();
                format!("i{k}")
            }
            1 => self.vertex_labels[v][0].clone(),
            _ => self.vertex_labels[v].join("+"),
        }
    }

    /// Canonical edge key: endpoint names sorted, joined by `-`.
    pub fn edge_key(&self, e: usize) -> String {
        let (u, v) = self.edges[e];
        let (a, b) = (self.vertex_name(u), self.vertex_name(v));
        if a <= b {
            format!("{a}-{b}")
        } else {
            format!("{b}-{a}")
        }
    }

    pub fn edge_between(&self, a: &str, b: &str) -> Option<usize> {
        let names: Vec<String> = (0..self.vertex_count()).map(|v| self.vertex_name(v)).collect();
        self.edges
            .iter()
            .position(|&(u, v)| (names[u] == a && names[v] == b) || (names[u] == b && names[v] == a))
    }

    pub fn interior_leaf(&self) -> Option<usize> {
        (0..self.vertex_count()).find(|&v| self.is_interior(v) && self.degree(v) == 1)
    }

    /// First interior vertex of degree 1, by name, if any.
    pub fn has_interior_leaf(&self) -> Option<String> {
        self.interior_leaf().map(|v| self.vertex_name(v))
    }

    /// Binary: every interior vertex has degree 3, every boundary vertex has
    /// degree 1 and a single label. Trees without interior vertices qualify.
    pub fn is_binary(&self) -> bool {
        (0..self.vertex_count()).all(|v| {
            if self.is_interior(v) {
                self.degree(v) == 3
            } else {
                self.vertex_labels[v].len() == 1 && self.degree(v) <= 1
            }
        })
    }

    /// Unique simple path from `u` to `v` as edge ids; empty when `u == v`.
    pub fn path_between(&self, u: usize, v: usize) -> Result<Vec<usize>, TopologyError> {
        Ok(self.path_internal(u, v)?.1)
    }

    /// Unique simple path as the vertex sequence from `u` to `v` inclusive.
    pub fn path_vertices(&self, u: usize, v: usize) -> Result<Vec<usize>, TopologyError> {
        Ok(self.path_internal(u, v)?.0)
    }

    fn path_internal(&self, u: usize, v: usize) -> Result<(Vec<usize>, Vec<usize>), TopologyError> {
        let n = self.vertex_count();
        if u >= n {
            return Err(TopologyError::UnknownVertex(format!("#{u}")));
        }
        if v >= n {
            return Err(TopologyError::UnknownVertex(format!("#{v}")));
        }
        if u == v {
            return Ok((vec![u], Vec::new()));
        }
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut stack = vec![u];
        let mut seen = vec![false; n];
        seen[u] = true;
        while let Some(x) = stack.pop() {
            if x == v {
                break;
            }
            for &(w, e) in &self.adj[x] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((x, e));
                    stack.push(w);
                }
            }
        }
        let mut vertices = vec![v];
        let mut path = Vec::new();
        let mut cur = v;
        while cur != u {
            let (p, e) = parent[cur].expect("tree is connected");
            path.push(e);
            vertices.push(p);
            cur = p;
        }
        path.reverse();
        vertices.reverse();
        Ok((vertices, path))
    }

    /// A planar cyclic order: depth-first walk from the first boundary vertex
    /// with first-listed child order, recording boundary labels on first
    /// visit. Every edge then lies in exactly two tour paths.
    pub fn planar_order(&self) -> Result<CyclicOrder, TopologyError> {
        if let Some(v) = self.interior_leaf() {
            return Err(TopologyError::InteriorLeaf(self.vertex_name(v)));
        }
        let start = (0..self.vertex_count())
            .find(|&v| self.is_boundary(v))
            .ok_or_else(|| TopologyError::Malformed("no boundary vertices".into()))?;
        let mut order = Vec::new();
        let mut seen = vec![false; self.vertex_count()];
        self.dfs_collect(start, &mut seen, &mut order);
        Ok(CyclicOrder::new(order))
    }

    fn dfs_collect(&self, v: usize, seen: &mut [bool], order: &mut Vec<String>) {
        seen[v] = true;
        order.extend(self.vertex_labels[v].iter().cloned());
        for &(w, _) in &self.adj[v] {
            if !seen[w] {
                self.dfs_collect(w, seen, order);
            }
        }
    }

    /// The n tour paths of a cyclic order: path k joins order[k] to
    /// order[k+1 mod n], as edge ids.
    pub fn tour_paths(&self, order: &CyclicOrder) -> Result<Vec<Vec<usize>>, TopologyError> {
        let mine = {
            let mut ls = self.boundary_labels();
            ls.sort();
            ls
        };
        let theirs = {
            let mut ls = order.labels().to_vec();
            ls.sort();
            ls
        };
        if mine != theirs {
            return Err(TopologyError::OrderMismatch(format!(
                "tree has {mine:?}, order has {theirs:?}"
            )));
        }
        let n = order.len();
        let mut paths = Vec::with_capacity(n);
        for k in 0..n {
            let a = order.labels()[k].as_str();
            let b = order.labels()[(k + 1) % n].as_str();
            let u = self.boundary_vertex(a).expect("label checked");
            let v = self.boundary_vertex(b).expect("label checked");
            paths.push(self.path_between(u, v)?);
        }
        Ok(paths)
    }

    /// Quotient by an edge subset: vertices become the connected components
    /// of (V, F); labels of merged components are inherited in full.
    pub fn quotient(&self, contracted: &[usize]) -> Result<TreeTopology, TopologyError> {
        for &e in contracted {
            if e >= self.edge_count() {
                return Err(TopologyError::EdgeNotInTree(e));
            }
        }
        let n = self.vertex_count();
        let mut comp: Vec<usize> = (0..n).collect();
        fn find(comp: &mut Vec<usize>, v: usize) -> usize {
            if comp[v] != v {
                let root = find(comp, comp[v]);
                comp[v] = root;
                root
            } else {
                v
            }
        }
        for &e in contracted {
            let (u, v) = self.edges[e];
            let (ru, rv) = (find(&mut comp, u), find(&mut comp, v));
            if ru != rv {
                let (lo, hi) = (ru.min(rv), ru.max(rv));
                comp[hi] = lo;
            }
        }
        // Component ids ordered by their smallest member.
        let mut id_of_root: BTreeMap<usize, usize> = BTreeMap::new();
        for v in 0..n {
            let root = find(&mut comp, v);
            let next = id_of_root.len();
            id_of_root.entry(root).or_insert(next);
        }
        let m = id_of_root.len();
        let mut labels: Vec<Vec<String>> = vec![Vec::new(); m];
        for v in 0..n {
            let root = find(&mut comp, v);
            labels[id_of_root[&root]].extend(self.vertex_labels[v].iter().cloned());
        }
        let contracted_set: Vec<bool> = {
            let mut s = vec![false; self.edge_count()];
            for &e in contracted {
                s[e] = true;
            }
            s
        };
        let mut edges = Vec::new();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if contracted_set[e] {
                continue;
            }
            let (ru, rv) = (find(&mut comp, u), find(&mut comp, v));
            edges.push((id_of_root[&ru], id_of_root[&rv]));
        }
        TreeTopology::new_relaxed(labels, edges)
    }

    /// Split into a binary topology. Interior degree-2 vertices are
    /// suppressed (edges merged), boundary vertices of degree >= 2 sprout a
    /// zero edge to a fresh interior hub, and interior vertices of degree
    /// d > 3 become chains of d-2 degree-3 vertices. The returned mapping
    /// sends each original edge to its image so weights can be transferred
    /// (merged edges sum, added edges weigh zero).
    pub fn split_to_binary(&self) -> Result<BinarySplit, TopologyError> {
        if let Some(v) = self.interior_leaf() {
            return Err(TopologyError::InteriorLeaf(self.vertex_name(v)));
        }
        for v in 0..self.vertex_count() {
            if self.vertex_labels[v].len() > 1 {
                return Err(TopologyError::MultiLabelVertex(self.vertex_name(v)));
            }
        }

        // Working copy: edges carry the set of original edge ids they absorb.
        let mut labels: Vec<Vec<String>> = self.vertex_labels.clone();
        let mut work: Vec<(usize, usize, Vec<usize>)> = self
            .edges
            .iter()
            .enumerate()
            .map(|(id, &(u, v))| (u, v, vec![id]))
            .collect();

        let degree = |work: &[(usize, usize, Vec<usize>)], v: usize| {
            work.iter().filter(|&&(a, b, _)| a == v || b == v).count()
        };

        // Suppress interior degree-2 vertices.
        loop {
            let n = labels.len();
            let target = (0..n).find(|&v| {
                labels[v].is_empty() && degree(&work, v) == 2
            });
            let Some(v) = target else { break };
            let incident: Vec<usize> = work
                .iter()
                .enumerate()
                .filter(|(_, &(a, b, _))| a == v || b == v)
                .map(|(i, _)| i)
                .collect();
            let (i, j) = (incident[0], incident[1]);
            let other = |k: usize| if work[k].0 == v { work[k].1 } else { work[k].0 };
            let (x, y) = (other(i), other(j));
            let mut merged = work[i].2.clone();
            merged.extend(work[j].2.iter().copied());
            work[i] = (x, y, merged);
            work.remove(j);
            // Vertex v stays in the list but becomes isolated; drop it below.
        }
        // Compact away isolated suppressed vertices.
        let used: Vec<bool> = {
            let mut u = vec![false; labels.len()];
            for &(a, b, _) in &work {
                u[a] = true;
                u[b] = true;
            }
            if work.is_empty() {
                // Single-vertex tree: keep vertex 0.
                u.iter_mut().take(1).for_each(|x| *x = true);
            }
            u
        };
        let remap: Vec<usize> = {
            let mut r = vec![usize::MAX; labels.len()];
            let mut next = 0;
            for v in 0..labels.len() {
                if used[v] {
                    r[v] = next;
                    next += 1;
                }
            }
            r
        };
        labels = labels
            .iter()
            .enumerate()
            .filter(|&(v, _)| used[v])
            .map(|(_, ls)| ls.clone())
            .collect();
        for e in &mut work {
            e.0 = remap[e.0];
            e.1 = remap[e.1];
        }

        // Sprout a zero edge at each boundary vertex of degree >= 2: a fresh
        // interior hub absorbs its former neighbors.
        let boundary_count = labels.len();
        for v in 0..boundary_count {
            if labels[v].is_empty() || degree(&work, v) < 2 {
                continue;
            }
            let hub = labels.len();
            labels.push(Vec::new());
            for e in work.iter_mut() {
                if e.0 == v {
                    e.0 = hub;
                }
                if e.1 == v {
                    e.1 = hub;
                }
            }
            work.push((v, hub, Vec::new()));
        }

        // Chain-split interior vertices of degree >= 4.
        let mut v = 0;
        while v < labels.len() {
            if !labels[v].is_empty() || degree(&work, v) <= 3 {
                v += 1;
                continue;
            }
            let incident: Vec<usize> = work
                .iter()
                .enumerate()
                .filter(|(_, &(a, b, _))| a == v || b == v)
                .map(|(i, _)| i)
                .collect();
            let d = incident.len();
            // Chain vertices: v itself plus d-3 fresh ones.
            let mut chain = vec![v];
            for _ in 0..d - 3 {
                chain.push(labels.len());
                labels.push(Vec::new());
            }
            // First chain vertex keeps incident edges 0 and 1; middle ones
            // take one each; the last takes the final two.
            let assign_to = |slot: usize| -> usize {
                if slot <= 1 {
                    chain[0]
                } else if slot >= d - 2 {
                    chain[d - 3]
                } else {
                    chain[slot - 1]
                }
            };
            for (slot, &e) in incident.iter().enumerate() {
                let target = assign_to(slot);
                if work[e].0 == v {
                    work[e].0 = target;
                } else {
                    work[e].1 = target;
                }
            }
            for w in chain.windows(2) {
                work.push((w[0], w[1], Vec::new()));
            }
            v += 1;
        }

        let edge_list: Vec<(usize, usize)> = work.iter().map(|&(a, b, _)| (a, b)).collect();
        let tree = TreeTopology::new(labels, edge_list)?;
        debug_assert!(tree.is_binary(), "split result must be binary");

        let mut edge_map = vec![usize::MAX; self.edge_count()];
        let mut added = Vec::new();
        for (new_id, (_, _, originals)) in work.iter().enumerate() {
            if originals.is_empty() {
                added.push(new_id);
            }
            for &orig in originals {
                edge_map[orig] = new_id;
            }
        }
        debug_assert!(edge_map.iter().all(|&m| m != usize::MAX));
        Ok(BinarySplit { tree, edge_map, added })
    }

    /// Canonical string invariant under boundary-label-fixing isomorphism.
    /// Rooted at the tree center (both rootings for a two-vertex center),
    /// children signatures sorted at each level.
    pub fn canonical_signature(&self) -> String {
        let n = self.vertex_count();
        if n == 1 {
            return format!("({})", self.vertex_labels[0].join(","));
        }
        // Iterated leaf pruning to find the 1- or 2-vertex center.
        let mut degree: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let mut removed = vec![false; n];
        let mut remaining = n;
        let mut frontier: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
        while remaining > 2 {
            let mut next = Vec::new();
            for &v in &frontier {
                if removed[v] {
                    continue;
                }
                removed[v] = true;
                remaining -= 1;
                for &(w, _) in &self.adj[v] {
                    if !removed[w] {
                        degree[w] -= 1;
                        if degree[w] == 1 {
                            next.push(w);
                        }
                    }
                }
            }
            frontier = next;
        }
        let centers: Vec<usize> = (0..n).filter(|&v| !removed[v]).collect();
        match centers.len() {
            1 => self.rooted_signature(centers[0], usize::MAX),
            2 => {
                let a = self.rooted_signature(centers[0], centers[1]);
                let b = self.rooted_signature(centers[1], centers[0]);
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                format!("[{lo}|{hi}]")
            }
            _ => unreachable!("tree center has 1 or 2 vertices"),
        }
    }

    fn rooted_signature(&self, v: usize, parent: usize) -> String {
        let mut children: Vec<String> = self
            .adj[v]
            .iter()
            .filter(|&&(w, _)| w != parent)
            .map(|&(w, _)| self.rooted_signature(w, v))
            .collect();
        children.sort();
        let mut labels = self.vertex_labels[v].clone();
        labels.sort();
        format!("({}{})", labels.join(","), children.concat())
    }

    /// Topology JSON: `{"interior": k, "edges": [["a","i0"], ...]}`.
    /// Only single-label topologies are representable.
    pub fn to_json(&self) -> Result<Value, TopologyError> {
        for v in 0..self.vertex_count() {
            if self.vertex_labels[v].len() > 1 {
                return Err(TopologyError::MultiLabelVertex(self.vertex_name(v)));
            }
        }
        let interior = (0..self.vertex_count()).filter(|&v| self.is_interior(v)).count();
        let edges: Vec<Value> = self
            .edges
            .iter()
            .map(|&(u, v)| json!([self.vertex_name(u), self.vertex_name(v)]))
            .collect();
        Ok(json!({"interior": interior, "edges": edges}))
    }

    pub fn from_json(doc: &Value) -> Result<Self, TopologyError> {
        let obj = doc
            .as_object()
            .ok_or_else(|| TopologyError::Malformed("top level must be an object".into()))?;
        let interior = obj
            .get("interior")
            .and_then(Value::as_u64)
            .ok_or_else(|| TopologyError::Malformed("missing integer `interior`".into()))? as usize;
        let edges_val = obj
            .get("edges")
            .and_then(Value::as_array)
            .ok_or_else(|| TopologyError::Malformed("missing array `edges`".into()))?;
        let interior_names: Vec<String> = (0..interior).map(|k| format!("i{k}")).collect();
        let mut names: Vec<String> = Vec::new();
        let mut pairs = Vec::new();
        for (i, pair) in edges_val.iter().enumerate() {
            let arr = pair
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| TopologyError::Malformed(format!("edge {i} must be a pair")))?;
            let mut ids = [0usize; 2];
            for (slot, v) in arr.iter().enumerate() {
                let name = v
                    .as_str()
                    .ok_or_else(|| TopologyError::Malformed(format!("edge {i} endpoint must be a string")))?;
                let id = match names.iter().position(|n| n == name) {
                    Some(id) => id,
                    None => {
                        names.push(name.to_string());
                        names.len() - 1
                    }
                };
                ids[slot] = id;
            }
            pairs.push((ids[0], ids[1]));
        }
        let labels: Vec<Vec<String>> = names
            .iter()
            .map(|name| {
                if interior_names.contains(name) {
                    Vec::new()
                } else {
                    vec![name.clone()]
                }
            })
            .collect();
        TreeTopology::new_relaxed(labels, pairs)
    }
}

/// Result of `split_to_binary`: the binary tree, a map from original edges
/// to their images, and the zero-weight edges that were added.
#[derive(Debug, Clone)]
pub struct BinarySplit {
    pub tree: TreeTopology,
    pub edge_map: Vec<usize>,
    pub added: Vec<usize>,
}

/// All binary topologies on the boundary set, exactly once up to
/// label-fixing isomorphism, in deterministic leaf-insertion order.
pub fn enumerate_binary_trees(boundary: &[String]) -> Result<BinaryTreeEnum, TopologyError> {
    if boundary.len() < 2 {
        return Err(TopologyError::TooFewLabels { min: 2, got: boundary.len() });
    }
    let mut seen: Vec<&String> = Vec::new();
    for label in boundary {
        if seen.contains(&label) {
            return Err(TopologyError::DuplicateLabel(label.clone()));
        }
        seen.push(label);
    }
    Ok(BinaryTreeEnum {
        boundary: boundary.to_vec(),
        choices: vec![0; boundary.len().saturating_sub(2)],
        done: false,
    })
}

/// Number of binary topologies on n >= 2 labels: (2n-5)!! with the empty
/// product convention for n = 2, 3.
pub fn binary_tree_count(n: usize) -> u128 {
    let mut count: u128 = 1;
    let mut k = 4;
    while k <= n {
        count *= (2 * k - 5) as u128;
        k += 1;
    }
    count
}

/// Build the topology at a given position of the enumeration order without
/// iterating to it.
pub fn binary_tree_by_index(boundary: &[String], index: u128) -> Result<TreeTopology, TopologyError> {
    if boundary.len() < 2 {
        return Err(TopologyError::TooFewLabels { min: 2, got: boundary.len() });
    }
    let n = boundary.len();
    let mut rest = index;
    let mut choices = vec![0usize; n - 2];
    // Mixed-radix decode, last digit fastest: digit k has radix 2k-5 (k >= 4).
    for k in (4..=n).rev() {
        let radix = (2 * k - 5) as u128;
        choices[k - 3] = (rest % radix) as usize;
        rest /= radix;
    }
    if rest != 0 {
        return Err(TopologyError::Malformed(format!("index {index} out of range")));
    }
    Ok(build_by_insertion(boundary, &choices))
}

pub struct BinaryTreeEnum {
    boundary: Vec<String>,
    choices: Vec<usize>,
    done: bool,
}

impl Iterator for BinaryTreeEnum {
    type Item = TreeTopology;

    fn next(&mut self) -> Option<TreeTopology> {
        if self.done {
            return None;
        }
        let tree = build_by_insertion(&self.boundary, &self.choices);
        // Odometer increment, last digit fastest; digit k-3 has radix 2k-5.
        let mut pos = self.choices.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            let radix = 2 * (pos + 3) - 5;
            self.choices[pos] += 1;
            if self.choices[pos] < radix {
                break;
            }
            self.choices[pos] = 0;
        }
        Some(tree)
    }
}

/// Insert leaves one at a time; `choices[k-3]` picks which edge (in creation
/// order) is subdivided to attach boundary vertex k.
fn build_by_insertion(boundary: &[String], choices: &[usize]) -> TreeTopology {
    let n = boundary.len();
    let mut labels: Vec<Vec<String>> = vec![vec![boundary[0].clone()], vec![boundary[1].clone()]];
    let mut edges: Vec<(usize, usize)> = vec![(0, 1)];
    for k in 2..n {
        let edge_id = if k == 2 { 0 } else { choices[k - 2] };
        let (u, v) = edges[edge_id];
        let mid = labels.len();
        labels.push(Vec::new());
        let leaf = labels.len();
        labels.push(vec![boundary[k].clone()]);
        edges[edge_id] = (u, mid);
        edges.push((mid, v));
        edges.push((mid, leaf));
    }
    TreeTopology::new(labels, edges).expect("insertion always builds a valid tree")
}
