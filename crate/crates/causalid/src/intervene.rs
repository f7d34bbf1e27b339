//! Interventions on vertices, edges, and directed paths: recursive
//! substitution into counterfactual expressions, naturalness and consistency
//! checks, induced coarser interventions, and split-graph construction.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{CausalGraph, SplitGraph};
use crate::paths::{self, Path};

/// Cap on distinct counterfactual expression nodes.
pub const EXPR_CAP: usize = 100_000;

/// Value attached to an intervention target: a state of the target's source
/// vertex, or the value the source would attain under no intervention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    State(usize),
    Natural,
}

impl Value {
    pub fn constant(self) -> Option<usize> {
        match self {
            Value::State(s) => Some(s),
            Value::Natural => None,
        }
    }
}

/// A proper set of directed paths, each assigned a value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathIntervention {
    assignments: Vec<(Path, Value)>,
}

impl PathIntervention {
    pub fn new(g: &CausalGraph, mut assignments: Vec<(Path, Value)>) -> Result<PathIntervention> {
        assignments.sort();
        let paths: Vec<Path> = assignments.iter().map(|(p, _)| p.clone()).collect();
        paths::ensure_proper(g, &paths)?;
        for (p, v) in &assignments {
            if let Value::State(s) = v {
                let src = p.source();
                if *s >= g.cardinality(src) {
                    return Err(Error::ValueOutOfRange {
                        vertex: g.name(src).to_string(),
                        value: *s,
                        card: g.cardinality(src),
                    });
                }
            }
        }
        Ok(PathIntervention { assignments })
    }

    pub fn empty() -> PathIntervention {
        PathIntervention { assignments: Vec::new() }
    }

    pub fn assignments(&self) -> &[(Path, Value)] {
        &self.assignments
    }

    pub fn paths(&self) -> Vec<Path> {
        self.assignments.iter().map(|(p, _)| p.clone()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn value_of(&self, path: &Path) -> Option<Value> {
        self.assignments
            .iter()
            .find(|(p, _)| p == path)
            .map(|&(_, v)| v)
    }

    /// Paths assigned constant values.
    pub fn constant_subset(&self) -> PathIntervention {
        PathIntervention {
            assignments: self
                .assignments
                .iter()
                .filter(|(_, v)| matches!(v, Value::State(_)))
                .cloned()
                .collect(),
        }
    }

    /// Paths assigned the natural marker.
    pub fn natural_paths(&self) -> Vec<Path> {
        self.assignments
            .iter()
            .filter(|(_, v)| matches!(v, Value::Natural))
            .map(|(p, _)| p.clone())
            .collect()
    }

    /// Restrict to the given path subset.
    pub fn restrict(&self, keep: &[Path]) -> PathIntervention {
        PathIntervention {
            assignments: self
                .assignments
                .iter()
                .filter(|(p, _)| keep.contains(p))
                .cloned()
                .collect(),
        }
    }

    pub fn render(&self, g: &CausalGraph) -> String {
        self.assignments
            .iter()
            .map(|(p, v)| match v {
                Value::State(s) => format!("{}={}", p.render(g), s),
                Value::Natural => format!("{}=natural", p.render(g)),
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Forced assignment of states to vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeIntervention {
    assignments: Vec<(usize, usize)>,
}

impl NodeIntervention {
    pub fn new(g: &CausalGraph, mut assignments: Vec<(usize, usize)>) -> Result<NodeIntervention> {
        assignments.sort_unstable();
        for w in assignments.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Semantic(format!(
                    "vertex `{}` assigned twice",
                    g.name(w[0].0)
                )));
            }
        }
        for &(v, s) in &assignments {
            if v >= g.n() {
                return Err(Error::UnknownVertex(format!("#{v}")));
            }
            if s >= g.cardinality(v) {
                return Err(Error::ValueOutOfRange {
                    vertex: g.name(v).to_string(),
                    value: s,
                    card: g.cardinality(v),
                });
            }
        }
        Ok(NodeIntervention { assignments })
    }

    pub fn assignments(&self) -> &[(usize, usize)] {
        &self.assignments
    }

    pub fn treated(&self) -> Vec<usize> {
        self.assignments.iter().map(|&(v, _)| v).collect()
    }

    pub fn value_of(&self, v: usize) -> Option<usize> {
        self.assignments
            .iter()
            .find(|&&(u, _)| u == v)
            .map(|&(_, s)| s)
    }

    pub fn render(&self, g: &CausalGraph) -> String {
        self.assignments
            .iter()
            .map(|&(v, s)| format!("{}={}", g.name(v), s))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Forced assignment of states carried along specific directed edges: the
/// child of each listed edge sees the assigned value in place of its parent,
/// possibly conflicting across edges out of the same vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeIntervention {
    assignments: Vec<((usize, usize), usize)>,
}

impl EdgeIntervention {
    pub fn new(
        g: &CausalGraph,
        mut assignments: Vec<((usize, usize), usize)>,
    ) -> Result<EdgeIntervention> {
        assignments.sort_unstable();
        for w in assignments.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Semantic(format!(
                    "edge `{} -> {}` assigned twice",
                    g.name(w[0].0 .0),
                    g.name(w[0].0 .1)
                )));
            }
        }
        for &((a, b), s) in &assignments {
            if !g.has_directed_edge(a, b) {
                return Err(Error::UnknownEdge(
                    g.name(a).to_string(),
                    g.name(b).to_string(),
                ));
            }
            if s >= g.cardinality(a) {
                return Err(Error::ValueOutOfRange {
                    vertex: g.name(a).to_string(),
                    value: s,
                    card: g.cardinality(a),
                });
            }
        }
        Ok(EdgeIntervention { assignments })
    }

    pub fn assignments(&self) -> &[((usize, usize), usize)] {
        &self.assignments
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.assignments.iter().map(|&(e, _)| e).collect()
    }

    pub fn value_of(&self, edge: (usize, usize)) -> Option<usize> {
        self.assignments
            .iter()
            .find(|&&(e, _)| e == edge)
            .map(|&(_, s)| s)
    }

    /// Sources of the intervened edges, deduplicated.
    pub fn sources(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.assignments.iter().map(|&((a, _), _)| a).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn render(&self, g: &CausalGraph) -> String {
        self.assignments
            .iter()
            .map(|&((a, b), s)| format!("{}->{}={}", g.name(a), g.name(b), s))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Any of the three intervention kinds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Intervention {
    Node(NodeIntervention),
    Edge(EdgeIntervention),
    Path(PathIntervention),
}

/// Funnel a valued path set through the terminal edge `(w, y)`, carrying
/// values along with the truncated paths.
pub fn funnel_assignments(
    g: &CausalGraph,
    assignments: &[(Path, Value)],
    edge: (usize, usize),
) -> Result<Vec<(Path, Value)>> {
    let (w, y) = edge;
    if !g.has_directed_edge(w, y) {
        return Err(Error::UnknownEdge(g.name(w).to_string(), g.name(y).to_string()));
    }
    let mut out = Vec::new();
    for (p, v) in assignments {
        let k = p.0.len();
        if k >= 2 && p.0[k - 2] == w && p.0[k - 1] == y {
            if k >= 3 {
                out.push((Path(p.0[..k - 1].to_vec()), *v));
            }
        } else if p.0[..k - 1].contains(&w) {
            // dropped: passes through `w` along a different outgoing edge
        } else {
            out.push((p.clone(), *v));
        }
    }
    out.sort();
    Ok(out)
}

/// A counterfactual expression forest: hash-consed nodes, one root per
/// requested response vertex.
#[derive(Debug, Clone)]
pub struct CfExpr {
    pub nodes: Vec<CfNode>,
    /// (response vertex, node id) pairs, in response-set order.
    pub roots: Vec<(usize, usize)>,
}

/// One expression node: a vertex whose parent slots are each bound to a
/// constant or to a nested expression node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CfNode {
    pub vertex: usize,
    /// (parent vertex, argument), in sorted parent order.
    pub args: Vec<(usize, CfArg)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CfArg {
    Const(usize),
    Expr(usize),
}

impl CfExpr {
    /// Render one root, eliding fully natural subtrees to bare names.
    pub fn render_root(&self, g: &CausalGraph, root: usize) -> String {
        let mut natural = vec![false; self.nodes.len()];
        for (id, node) in self.nodes.iter().enumerate() {
            natural[id] = node.args.iter().all(|&(_, a)| match a {
                CfArg::Const(_) => false,
                CfArg::Expr(e) => natural[e],
            });
        }
        self.render_node(g, root, &natural)
    }

    fn render_node(&self, g: &CausalGraph, id: usize, natural: &[bool]) -> String {
        let node = &self.nodes[id];
        if natural[id] {
            return g.name(node.vertex).to_string();
        }
        let args: Vec<String> = node
            .args
            .iter()
            .map(|&(_, a)| match a {
                CfArg::Const(s) => s.to_string(),
                CfArg::Expr(e) => self.render_node(g, e, natural),
            })
            .collect();
        format!("{}({})", g.name(node.vertex), args.join(","))
    }

    /// Number of distinct nodes.
    pub fn size(&self) -> usize {
        self.nodes.len()
    }
}

struct CfBuilder<'a> {
    g: &'a CausalGraph,
    nodes: Vec<CfNode>,
    intern: HashMap<CfNode, usize>,
    memo: HashMap<(usize, Vec<(Path, Value)>), usize>,
}

impl<'a> CfBuilder<'a> {
    fn expand(&mut self, v: usize, alpha: &[(Path, Value)]) -> Result<usize> {
        let key = (v, alpha.to_vec());
        if let Some(&id) = self.memo.get(&key) {
            return Ok(id);
        }
        let mut args = Vec::new();
        for &w in self.g.parents(v) {
            let direct = alpha
                .iter()
                .find(|(p, _)| p.0.len() == 2 && p.0[0] == w && p.0[1] == v);
            let arg = match direct {
                Some((_, Value::State(s))) => CfArg::Const(*s),
                Some((_, Value::Natural)) => CfArg::Expr(self.expand(w, &[])?),
                None => {
                    let funneled = funnel_assignments(self.g, alpha, (w, v))?;
                    CfArg::Expr(self.expand(w, &funneled)?)
                }
            };
            args.push((w, arg));
        }
        let node = CfNode { vertex: v, args };
        let id = match self.intern.get(&node) {
            Some(&id) => id,
            None => {
                if self.nodes.len() >= EXPR_CAP {
                    return Err(Error::Capacity(format!(
                        "counterfactual expression exceeds {EXPR_CAP} nodes"
                    )));
                }
                let id = self.nodes.len();
                self.nodes.push(node.clone());
                self.intern.insert(node, id);
                id
            }
        };
        self.memo.insert(key, id);
        Ok(id)
    }
}

/// Fully expanded recursive-substitution expressions for the response of
/// each vertex in `y` to the path intervention `iv`.
pub fn defined_response(g: &CausalGraph, y: &[usize], iv: &PathIntervention) -> Result<CfExpr> {
    let mut b = CfBuilder {
        g,
        nodes: Vec::new(),
        intern: HashMap::new(),
        memo: HashMap::new(),
    };
    let mut roots = Vec::new();
    for &v in y {
        let id = b.expand(v, iv.assignments())?;
        roots.push((v, id));
    }
    Ok(CfExpr { nodes: b.nodes, roots })
}

/// Evidence attached to a failed check: the paths and edges that fired it.
#[derive(Debug, Clone)]
pub struct CheckEvidence {
    pub ok: bool,
    pub detail: String,
    pub paths: Vec<Path>,
    pub edges: Vec<(usize, usize)>,
}

impl CheckEvidence {
    fn pass() -> CheckEvidence {
        CheckEvidence {
            ok: true,
            detail: String::new(),
            paths: Vec::new(),
            edges: Vec::new(),
        }
    }
}

/// Check that the natural assignments can be dropped without changing the
/// response of `y`: no path relevant for `y` given the constant-assigned
/// subset that has a prefix in that subset may contain a natural-assigned
/// path as a subpath.
pub fn is_natural_for(
    g: &CausalGraph,
    y: &[usize],
    iv: &PathIntervention,
    cap: usize,
) -> Result<CheckEvidence> {
    let constant = iv.constant_subset();
    let natural = iv.natural_paths();
    if natural.is_empty() {
        return Ok(CheckEvidence::pass());
    }
    let alpha_star = constant.paths();
    let rel = paths::relevant_paths(g, y, &alpha_star, cap)?;
    for beta in &rel {
        if !alpha_star.iter().any(|a| a.is_prefix_of(beta)) {
            continue;
        }
        for nat in &natural {
            if nat.is_subpath_of(beta) {
                return Ok(CheckEvidence {
                    ok: false,
                    detail: format!(
                        "relevant path `{}` has a constant-assigned prefix but contains the natural-assigned path `{}`",
                        beta.render(g),
                        nat.render(g)
                    ),
                    paths: vec![beta.clone(), nat.clone()],
                    edges: Vec::new(),
                });
            }
        }
    }
    Ok(CheckEvidence::pass())
}

/// Drop natural-assigned paths; the caller must have verified naturalness.
pub fn reduce_natural(
    g: &CausalGraph,
    y: &[usize],
    iv: &PathIntervention,
    cap: usize,
) -> Result<PathIntervention> {
    let check = is_natural_for(g, y, iv, cap)?;
    if !check.ok {
        let offending = check
            .paths
            .first()
            .map(|p| p.render(g))
            .unwrap_or_default();
        return Err(Error::NotNatural(offending));
    }
    Ok(iv.constant_subset())
}

/// Check whether a constant-valued path intervention collapses to an edge
/// intervention: every occurrence of an intervened first edge inside a path
/// relevant for `y` must itself start a prefix that is in the intervention,
/// and paths sharing a first edge must carry equal values.
pub fn check_edge_consistency(
    g: &CausalGraph,
    y: &[usize],
    iv: &PathIntervention,
    cap: usize,
) -> Result<CheckEvidence> {
    let alpha = iv.paths();
    let rel = paths::relevant_paths(g, y, &alpha, cap)?;
    let mut first_edges: Vec<(usize, usize)> = alpha.iter().map(|p| p.first_edge()).collect();
    first_edges.sort_unstable();
    first_edges.dedup();
    for &e in &first_edges {
        let e_path = Path(vec![e.0, e.1]);
        for beta in &rel {
            for pos in e_path.occurrences_in(beta) {
                let covered = pos == 0 && alpha.iter().any(|a| a.is_prefix_of(beta));
                if !covered {
                    return Ok(CheckEvidence {
                        ok: false,
                        detail: format!(
                            "edge `{}->{}` occurs in the relevant path `{}` outside any intervened prefix",
                            g.name(e.0),
                            g.name(e.1),
                            beta.render(g)
                        ),
                        paths: vec![beta.clone()],
                        edges: vec![e],
                    });
                }
            }
        }
    }
    // Value consistency: paths sharing a first edge carry equal values.
    for (i, (p, pv)) in iv.assignments().iter().enumerate() {
        for (q, qv) in iv.assignments().iter().skip(i + 1) {
            if p.first_edge() == q.first_edge() && pv != qv {
                let e = p.first_edge();
                return Ok(CheckEvidence {
                    ok: false,
                    detail: format!(
                        "paths `{}` and `{}` share the first edge `{}->{}` but carry different values",
                        p.render(g),
                        q.render(g),
                        g.name(e.0),
                        g.name(e.1)
                    ),
                    paths: vec![p.clone(), q.clone()],
                    edges: vec![e],
                });
            }
        }
    }
    Ok(CheckEvidence::pass())
}

/// Collapse an edge-consistent path intervention to the intervention on its
/// first edges.
pub fn induce_edge_intervention(
    g: &CausalGraph,
    y: &[usize],
    iv: &PathIntervention,
    cap: usize,
) -> Result<EdgeIntervention> {
    let check = check_edge_consistency(g, y, iv, cap)?;
    if !check.ok {
        let edge = check
            .edges
            .first()
            .map(|&(a, b)| format!("{}->{}", g.name(a), g.name(b)))
            .unwrap_or_default();
        return Err(Error::NotEdgeConsistent(edge));
    }
    let mut assignments: Vec<((usize, usize), usize)> = Vec::new();
    for (p, v) in iv.assignments() {
        let s = v
            .constant()
            .expect("edge consistency requires constant values");
        let e = p.first_edge();
        if !assignments.iter().any(|&(f, _)| f == e) {
            assignments.push((e, s));
        }
    }
    EdgeIntervention::new(g, assignments)
}

/// Check whether an edge intervention collapses to a vertex intervention:
/// per source vertex, the first edges of the relevant paths rooted there must
/// be entirely inside or entirely outside the intervened edge set, and edges
/// sharing a source must carry equal values.
pub fn check_node_consistency(
    g: &CausalGraph,
    y: &[usize],
    eta: &EdgeIntervention,
    cap: usize,
) -> Result<CheckEvidence> {
    let as_paths: Vec<Path> = eta.edges().iter().map(|&(a, b)| Path(vec![a, b])).collect();
    let rel = paths::relevant_paths(g, y, &as_paths, cap)?;
    let eta_edges = eta.edges();
    for v in 0..g.n() {
        let mut prefix_edges: Vec<(usize, usize)> = rel
            .iter()
            .filter(|b| b.source() == v)
            .map(|b| b.first_edge())
            .collect();
        prefix_edges.sort_unstable();
        prefix_edges.dedup();
        let inside: Vec<(usize, usize)> = prefix_edges
            .iter()
            .copied()
            .filter(|e| eta_edges.contains(e))
            .collect();
        if !inside.is_empty() && inside.len() != prefix_edges.len() {
            let outside = prefix_edges
                .iter()
                .find(|e| !eta_edges.contains(e))
                .copied()
                .unwrap();
            return Ok(CheckEvidence {
                ok: false,
                detail: format!(
                    "relevant paths out of `{}` start both inside the intervention (`{}->{}`) and outside it (`{}->{}`)",
                    g.name(v),
                    g.name(inside[0].0),
                    g.name(inside[0].1),
                    g.name(outside.0),
                    g.name(outside.1)
                ),
                paths: Vec::new(),
                edges: prefix_edges,
            });
        }
    }
    for (i, &((a, _), s)) in eta.assignments().iter().enumerate() {
        for &((a2, b2), s2) in eta.assignments().iter().skip(i + 1) {
            if a == a2 && s != s2 {
                return Ok(CheckEvidence {
                    ok: false,
                    detail: format!(
                        "edges out of `{}` carry different values ({s} vs {s2})",
                        g.name(a)
                    ),
                    paths: Vec::new(),
                    edges: vec![(a2, b2)],
                });
            }
        }
    }
    Ok(CheckEvidence::pass())
}

/// Collapse a node-consistent edge intervention to the intervention on its
/// source vertices.
pub fn induce_node_intervention(
    g: &CausalGraph,
    y: &[usize],
    eta: &EdgeIntervention,
    cap: usize,
) -> Result<NodeIntervention> {
    let check = check_node_consistency(g, y, eta, cap)?;
    if !check.ok {
        let vertex = check
            .edges
            .first()
            .map(|&(a, _)| g.name(a).to_string())
            .unwrap_or_default();
        return Err(Error::NotNodeConsistent(vertex));
    }
    let mut assignments: Vec<(usize, usize)> = Vec::new();
    for &((a, _), s) in eta.assignments() {
        if !assignments.iter().any(|&(v, _)| v == a) {
            assignments.push((a, s));
        }
    }
    NodeIntervention::new(g, assignments)
}

/// Express a vertex intervention as the equivalent path intervention: every
/// directed path from a treated vertex to the treated-or-response set whose
/// interior avoids that set, assigned its source's value.
pub fn embed_node_as_path(
    g: &CausalGraph,
    nu: &NodeIntervention,
    y: &[usize],
    cap: usize,
) -> Result<PathIntervention> {
    let treated = nu.treated();
    let alpha = crate::targets::alpha_set(g, &treated, y, cap)?;
    let assignments = alpha
        .into_iter()
        .map(|p| {
            let s = nu.value_of(p.source()).unwrap();
            (p, Value::State(s))
        })
        .collect();
    PathIntervention::new(g, assignments)
}

/// Express an edge intervention as the equivalent path intervention: the
/// node embedding of its sources, filtered to paths whose first edge is
/// intervened, each assigned its first edge's value.
pub fn embed_edge_as_path(
    g: &CausalGraph,
    eta: &EdgeIntervention,
    y: &[usize],
    cap: usize,
) -> Result<PathIntervention> {
    let sources = eta.sources();
    let alpha = crate::targets::alpha_set(g, &sources, y, cap)?;
    let assignments = alpha
        .into_iter()
        .filter_map(|p| {
            eta.value_of(p.first_edge())
                .map(|s| (p, Value::State(s)))
        })
        .collect();
    PathIntervention::new(g, assignments)
}

fn split_name(g: &CausalGraph, v: usize, value: usize) -> String {
    format!("{}[{}]", g.name(v), value)
}

/// Per-vertex plan for splitting: values whose fixed copies carry the listed
/// outgoing edges; the random copy keeps the rest.
fn build_split(
    g: &CausalGraph,
    plan: &HashMap<usize, Vec<((usize, usize), usize)>>,
    always_split: &[(usize, usize)],
) -> Result<SplitGraph> {
    // New vertex list: original order; fixed copies directly after their
    // random copy, ordered by value.
    let mut names = Vec::new();
    let mut card = Vec::new();
    let mut fixed = Vec::new();
    let mut origin = Vec::new();
    let mut random_id = vec![usize::MAX; g.n()];
    let mut fixed_id: HashMap<(usize, usize), usize> = HashMap::new();
    for v in 0..g.n() {
        random_id[v] = names.len();
        names.push(g.name(v).to_string());
        card.push(g.cardinality(v));
        fixed.push(None);
        origin.push(v);
        let mut values: Vec<usize> = plan
            .get(&v)
            .map(|edges| edges.iter().map(|&(_, s)| s).collect())
            .unwrap_or_default();
        // A treated vertex with no outgoing edges still gets its fixed copy.
        values.extend(
            always_split
                .iter()
                .filter(|&&(u, _)| u == v)
                .map(|&(_, s)| s),
        );
        values.sort_unstable();
        values.dedup();
        for s in values {
            fixed_id.insert((v, s), names.len());
            names.push(split_name(g, v, s));
            card.push(g.cardinality(v));
            fixed.push(Some(s));
            origin.push(v);
        }
    }
    let mut directed = Vec::new();
    for &(a, b) in g.directed_edges() {
        let target = random_id[b];
        let assigned = plan
            .get(&a)
            .and_then(|edges| edges.iter().find(|&&(e, _)| e == (a, b)).map(|&(_, s)| s));
        let source = match assigned {
            Some(s) => fixed_id[&(a, s)],
            None => random_id[a],
        };
        directed.push((source, target));
    }
    directed.sort_unstable();
    let mut index = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        index.insert(n.clone(), i);
    }
    let graph = CausalGraph::from_parts(names, index, card, directed, Vec::new(), fixed)?;
    Ok(SplitGraph { graph, origin })
}

/// Split each treated vertex into a random copy keeping the incoming edges
/// and a value-labeled fixed copy taking all outgoing edges.
pub fn build_swig(g: &CausalGraph, nu: &NodeIntervention) -> Result<SplitGraph> {
    let mut plan: HashMap<usize, Vec<((usize, usize), usize)>> = HashMap::new();
    for &(v, s) in nu.assignments() {
        let edges = g
            .children(v)
            .iter()
            .map(|&c| ((v, c), s))
            .collect::<Vec<_>>();
        plan.insert(v, edges);
    }
    build_split(g, &plan, nu.assignments())
}

/// Shatter each intervened vertex into one fixed copy per distinct assigned
/// value, carrying exactly its edges, plus a random copy carrying the
/// unassigned outgoing edges and all incoming edges.
pub fn build_shatter(g: &CausalGraph, eta: &EdgeIntervention) -> Result<SplitGraph> {
    let mut plan: HashMap<usize, Vec<((usize, usize), usize)>> = HashMap::new();
    for &((a, b), s) in eta.assignments() {
        plan.entry(a).or_default().push(((a, b), s));
    }
    build_split(g, &plan, &[])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> CausalGraph {
        CausalGraph::dag(
            &["W", "A", "M", "Y"],
            &[("W", "A"), ("W", "M"), ("A", "M"), ("A", "Y"), ("M", "Y")],
        )
        .unwrap()
    }

    fn p(g: &CausalGraph, names: &[&str]) -> Path {
        Path::from_names(g, names).unwrap()
    }

    #[test]
    fn defined_response_single_long_path() {
        let g = triangle();
        let y = g.index_of("Y").unwrap();
        let iv = PathIntervention::new(
            &g,
            vec![(p(&g, &["W", "A", "M", "Y"]), Value::State(0))],
        )
        .unwrap();
        let expr = defined_response(&g, &[y], &iv).unwrap();
        let s = expr.render_root(&g, expr.roots[0].1);
        // Y's parent M is driven through A(0); Y's parent A stays natural;
        // arguments render in parent-index order.
        assert_eq!(s, "Y(A,M(W,A(0)))");
    }

    #[test]
    fn defined_response_indirect_target() {
        let g = triangle();
        let ys = g.indices_of(&["Y", "M", "W"]).unwrap();
        let iv = PathIntervention::new(
            &g,
            vec![
                (p(&g, &["W", "A", "Y"]), Value::State(0)),
                (p(&g, &["M", "Y"]), Value::State(1)),
            ],
        )
        .unwrap();
        let expr = defined_response(&g, &ys, &iv).unwrap();
        assert_eq!(expr.render_root(&g, expr.roots[0].1), "Y(A(0),1)");
        assert_eq!(expr.render_root(&g, expr.roots[1].1), "M");
        assert_eq!(expr.render_root(&g, expr.roots[2].1), "W");
    }

    #[test]
    fn naturalness() {
        let g = CausalGraph::dag(&["A", "B", "C"], &[("A", "B"), ("B", "C")]).unwrap();
        let c = g.index_of("C").unwrap();
        // Constant full path plus a natural tail path: not natural.
        let iv = PathIntervention::new(
            &g,
            vec![
                (p(&g, &["A", "B", "C"]), Value::State(0)),
                (p(&g, &["B", "C"]), Value::Natural),
            ],
        )
        .unwrap();
        let check = is_natural_for(&g, &[c], &iv, 1000).unwrap();
        assert!(!check.ok);
        assert!(reduce_natural(&g, &[c], &iv, 1000).is_err());

        // All constant: trivially natural.
        let iv = PathIntervention::new(&g, vec![(p(&g, &["A", "B", "C"]), Value::State(0))]).unwrap();
        assert!(is_natural_for(&g, &[c], &iv, 1000).unwrap().ok);

        // All natural: reduces to the empty intervention.
        let iv = PathIntervention::new(&g, vec![(p(&g, &["A", "B", "C"]), Value::Natural)]).unwrap();
        let red = reduce_natural(&g, &[c], &iv, 1000).unwrap();
        assert!(red.is_empty());
    }

    #[test]
    fn edge_consistency_examples() {
        let g = triangle();
        let y = g.index_of("Y").unwrap();
        // Both routes out of W covered with equal values: consistent.
        let iv = PathIntervention::new(
            &g,
            vec![
                (p(&g, &["W", "A", "M", "Y"]), Value::State(1)),
                (p(&g, &["W", "A", "Y"]), Value::State(1)),
                (p(&g, &["W", "M", "Y"]), Value::State(1)),
            ],
        )
        .unwrap();
        let check = check_edge_consistency(&g, &[y], &iv, 1000).unwrap();
        assert!(check.ok, "{}", check.detail);
        let eta = induce_edge_intervention(&g, &[y], &iv, 1000).unwrap();
        let w = g.index_of("W").unwrap();
        let a = g.index_of("A").unwrap();
        let m = g.index_of("M").unwrap();
        assert_eq!(eta.assignments(), &[((w, a), 1), ((w, m), 1)]);

        // Different values on a shared first edge: inconsistent.
        let iv = PathIntervention::new(
            &g,
            vec![
                (p(&g, &["W", "A", "M", "Y"]), Value::State(1)),
                (p(&g, &["W", "A", "Y"]), Value::State(0)),
                (p(&g, &["W", "M", "Y"]), Value::State(1)),
            ],
        )
        .unwrap();
        let check = check_edge_consistency(&g, &[y], &iv, 1000).unwrap();
        assert!(!check.ok);
        assert_eq!(check.edges, vec![(w, a)]);

        // A single deep path leaves the sibling route uncovered.
        let iv = PathIntervention::new(
            &g,
            vec![(p(&g, &["W", "A", "M", "Y"]), Value::State(1))],
        )
        .unwrap();
        let check = check_edge_consistency(&g, &[y], &iv, 1000).unwrap();
        assert!(!check.ok);
    }

    #[test]
    fn node_consistency_examples() {
        let g = triangle();
        let y = g.index_of("Y").unwrap();
        let a = g.index_of("A").unwrap();
        let m = g.index_of("M").unwrap();
        let eta = EdgeIntervention::new(&g, vec![((a, m), 1), ((a, y), 1)]).unwrap();
        let check = check_node_consistency(&g, &[y], &eta, 1000).unwrap();
        assert!(check.ok, "{}", check.detail);
        let nu = induce_node_intervention(&g, &[y], &eta, 1000).unwrap();
        assert_eq!(nu.assignments(), &[(a, 1)]);

        // Conflicting values out of A: set-consistent but not collapsible.
        let eta = EdgeIntervention::new(&g, vec![((a, m), 0), ((a, y), 1)]).unwrap();
        let check = check_node_consistency(&g, &[y], &eta, 1000).unwrap();
        assert!(!check.ok);

        // Only one of A's two outgoing routes intervened: not consistent.
        let eta = EdgeIntervention::new(&g, vec![((a, y), 1)]).unwrap();
        let check = check_node_consistency(&g, &[y], &eta, 1000).unwrap();
        assert!(!check.ok);
    }

    #[test]
    fn embeddings() {
        let g = triangle();
        let y = g.index_of("Y").unwrap();
        let m = g.index_of("M").unwrap();
        let a = g.index_of("A").unwrap();
        let nu = NodeIntervention::new(&g, vec![(m, 1)]).unwrap();
        let iv = embed_node_as_path(&g, &nu, &[y], 1000).unwrap();
        assert_eq!(
            iv.assignments(),
            &[(p(&g, &["M", "Y"]), Value::State(1))]
        );

        let eta = EdgeIntervention::new(&g, vec![((a, m), 1)]).unwrap();
        let iv = embed_edge_as_path(&g, &eta, &[y], 1000).unwrap();
        assert_eq!(
            iv.assignments(),
            &[(p(&g, &["A", "M", "Y"]), Value::State(1))]
        );

        let nu = NodeIntervention::new(&g, vec![]).unwrap();
        let iv = embed_node_as_path(&g, &nu, &[y], 1000).unwrap();
        assert!(iv.is_empty());
    }

    #[test]
    fn swig_splits_treated_vertex() {
        let g = triangle();
        let a = g.index_of("A").unwrap();
        let nu = NodeIntervention::new(&g, vec![(a, 1)]).unwrap();
        let sw = build_swig(&g, &nu).unwrap();
        let sg = &sw.graph;
        assert_eq!(sg.n(), 5);
        let ar = sg.index_of("A").unwrap();
        let af = sg.index_of("A[1]").unwrap();
        assert_eq!(sg.fixed_value(af), Some(1));
        assert!(sg.parents(af).is_empty());
        // Random copy keeps incoming edges, fixed copy the outgoing ones.
        let w = sg.index_of("W").unwrap();
        let m = sg.index_of("M").unwrap();
        let ysg = sg.index_of("Y").unwrap();
        assert_eq!(sg.parents(ar), &[w]);
        assert!(sg.children(ar).is_empty());
        let mut cf: Vec<usize> = sg.children(af).to_vec();
        cf.sort_unstable();
        assert_eq!(cf, vec![m, ysg]);
    }

    #[test]
    fn shatter_splits_per_value() {
        let g = triangle();
        let w = g.index_of("W").unwrap();
        let a = g.index_of("A").unwrap();
        let m = g.index_of("M").unwrap();
        let y = g.index_of("Y").unwrap();
        let eta = EdgeIntervention::new(
            &g,
            vec![((w, m), 0), ((w, a), 1), ((a, y), 0)],
        )
        .unwrap();
        let sh = build_shatter(&g, &eta).unwrap();
        let sg = &sh.graph;
        // W gains two fixed copies, A one; 4 + 3 = 7 vertices.
        assert_eq!(sg.n(), 7);
        let w0 = sg.index_of("W[0]").unwrap();
        let w1 = sg.index_of("W[1]").unwrap();
        let a0 = sg.index_of("A[0]").unwrap();
        let ar = sg.index_of("A").unwrap();
        let mr = sg.index_of("M").unwrap();
        let yr = sg.index_of("Y").unwrap();
        assert_eq!(sg.children(w0), &[mr]);
        assert_eq!(sg.children(w1), &[ar]);
        assert_eq!(sg.children(a0), &[yr]);
        // A's random copy keeps the unassigned edge A -> M.
        assert_eq!(sg.children(ar), &[mr]);
        assert!(sg.children(sg.index_of("W").unwrap()).is_empty());
    }

    #[test]
    fn empty_interventions_leave_graph_unchanged() {
        let g = triangle();
        let nu = NodeIntervention::new(&g, vec![]).unwrap();
        let sw = build_swig(&g, &nu).unwrap();
        assert_eq!(sw.graph.n(), g.n());
        assert_eq!(sw.graph.directed_edges(), g.directed_edges());
    }
}
