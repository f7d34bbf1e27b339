//! Identification of path-intervention queries: the consistency-check
//! pipeline, the class-specific graphical formulas, and the hidden-variable
//! district functional.

use crate::error::{Error, Result};
use crate::functional::{Atom, FVar, FreeConst, Functional, Term};
use crate::graph::CausalGraph;
use crate::intervene::{
    self, CheckEvidence, EdgeIntervention, Intervention, NodeIntervention, PathIntervention,
};
use crate::paths;

/// Identification status of a query over all structural models compatible
/// with the graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Identified over the within-world-independence model class (and hence
    /// also over the smaller cross-world class).
    IdentifiedSwm,
    /// Identified only under full cross-world independence.
    IdentifiedMwmOnly,
    /// Not identified even under full cross-world independence.
    NotIdentifiedMwm,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::IdentifiedSwm => "IDENTIFIED_SWM",
            Verdict::IdentifiedMwmOnly => "IDENTIFIED_MWM_ONLY",
            Verdict::NotIdentifiedMwm => "NOT_IDENTIFIED_MWM",
        }
    }
}

/// One pipeline gate together with the evidence it produced.
#[derive(Debug, Clone)]
pub struct Gate {
    pub name: &'static str,
    pub evidence: CheckEvidence,
}

/// Outcome of the identification pipeline.
#[derive(Debug, Clone)]
pub struct IdentificationResult {
    pub verdict: Verdict,
    /// Present exactly when the verdict is an identification.
    pub functional: Option<Functional>,
    /// The intervention the query collapsed to, when one exists.
    pub induced: Option<Intervention>,
    pub gates: Vec<Gate>,
    pub note: Option<String>,
}

const PARAMETRIC_NOTE: &str =
    "not identified nonparametrically; parametric assumptions such as linearity may still identify it";

/// Allocate free-constant symbols: per source vertex, distinct values in the
/// given order receive the lowercased name primed until unique.
struct SymbolPool {
    taken: Vec<String>,
}

impl SymbolPool {
    fn new() -> SymbolPool {
        SymbolPool { taken: Vec::new() }
    }

    fn next(&mut self, base: &str) -> String {
        let mut s = base.to_lowercase();
        while self.taken.contains(&s) {
            s.push('\'');
        }
        self.taken.push(s.clone());
        s
    }
}

/// The identified formula for a vertex intervention as a joint response
/// query: every vertex is factored against its full history, with treated
/// vertices referenced downstream by free constants.
pub fn extended_g_formula(
    g: &CausalGraph,
    y: &[usize],
    nu: &NodeIntervention,
) -> Result<Functional> {
    if !g.is_dag() {
        return Err(Error::NotADag);
    }
    let mut pool = SymbolPool::new();
    let mut frees = Vec::new();
    let mut const_of = vec![None; g.n()];
    for &(v, s) in nu.assignments() {
        const_of[v] = Some(frees.len());
        frees.push(FreeConst {
            symbol: pool.next(g.name(v)),
            var_name: g.name(v).to_string(),
            rank: g.topo_rank(v),
            value: s,
        });
    }
    let vars: Vec<FVar> = (0..g.n())
        .map(|v| FVar {
            name: g.name(v).to_string(),
            states: g.cardinality(v),
            rank: g.topo_rank(v),
            out: y.contains(&v),
        })
        .collect();
    let terms: Vec<Term> = (0..g.n())
        .map(|v| Term {
            children: vec![v],
            given: g
                .predecessors(v)
                .into_iter()
                .map(|w| match const_of[w] {
                    Some(c) => Atom::Const(c),
                    None => Atom::Var(w),
                })
                .collect(),
        })
        .collect();
    let mut f = Functional { vars, frees, terms };
    f.simplify();
    Ok(f)
}

/// The identified formula for an edge intervention: every vertex is factored
/// against its parents, with intervened edges carrying free constants into
/// the child's context, marginalized to the response set.
pub fn edge_g_formula(g: &CausalGraph, y: &[usize], eta: &EdgeIntervention) -> Result<Functional> {
    if !g.is_dag() {
        return Err(Error::NotADag);
    }
    // One symbol per (source, value); per source, values ordered by the
    // most recent sink carrying them.
    let mut pairs: Vec<((usize, usize), usize)> = Vec::new();
    for &((a, b), s) in eta.assignments() {
        match pairs.iter_mut().find(|&&mut ((v, _), val)| v == a && val == s) {
            Some(((_, sink_rank), _)) => *sink_rank = (*sink_rank).max(g.topo_rank(b)),
            None => pairs.push(((a, g.topo_rank(b)), s)),
        }
    }
    pairs.sort_by(|&((v1, r1), _), &((v2, r2), _)| v1.cmp(&v2).then(r2.cmp(&r1)));
    let mut pool = SymbolPool::new();
    let mut frees = Vec::new();
    let mut const_of: Vec<((usize, usize), usize)> = Vec::new();
    for &((v, _), s) in &pairs {
        const_of.push(((v, s), frees.len()));
        frees.push(FreeConst {
            symbol: pool.next(g.name(v)),
            var_name: g.name(v).to_string(),
            rank: g.topo_rank(v),
            value: s,
        });
    }
    let vars: Vec<FVar> = (0..g.n())
        .map(|v| FVar {
            name: g.name(v).to_string(),
            states: g.cardinality(v),
            rank: g.topo_rank(v),
            out: y.contains(&v),
        })
        .collect();
    let terms: Vec<Term> = (0..g.n())
        .map(|v| Term {
            children: vec![v],
            given: g
                .parents(v)
                .iter()
                .map(|&w| match eta.value_of((w, v)) {
                    Some(s) => {
                        let ci = const_of
                            .iter()
                            .find(|&&(key, _)| key == (w, s))
                            .map(|&(_, ci)| ci)
                            .unwrap();
                        Atom::Const(ci)
                    }
                    None => Atom::Var(w),
                })
                .collect(),
        })
        .collect();
    let mut f = Functional { vars, frees, terms };
    f.simplify();
    Ok(f)
}

/// Identify a vertex intervention on a graph with bidirected edges via the
/// district decomposition, when its soundness conditions hold.
///
/// Requires every vertex to be an ancestor of the response set, and every
/// vertex cut off from it by the treatment removal to be treated.
pub fn g_functional_admg(
    g: &CausalGraph,
    y: &[usize],
    treatments: &[(usize, usize)],
) -> Result<Functional> {
    let a_set: Vec<usize> = treatments.iter().map(|&(v, _)| v).collect();
    if y.iter().any(|v| a_set.contains(v)) {
        return Err(Error::Semantic(
            "response set overlaps the treated set".into(),
        ));
    }
    if g.ancestors(y).len() != g.n() {
        return Err(Error::InputRestriction(
            "every vertex must be an ancestor of the response set; restrict the graph first".into(),
        ));
    }
    let keep: Vec<usize> = (0..g.n()).filter(|v| !a_set.contains(v)).collect();
    let gp = g.vertex_subgraph(&keep)?;
    let yp: Vec<usize> = y
        .iter()
        .map(|&v| gp.index_of(g.name(v)))
        .collect::<Result<_>>()?;
    if gp.ancestors(&yp).len() != gp.n() {
        return Err(Error::InputRestriction(
            "a vertex cut off from the response set by the treatment removal is untreated".into(),
        ));
    }
    // Each district of the treatment-removed graph grows to its bidirected
    // block inside the subgraph on its own ancestors.
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for district in gp.districts() {
        let s: Vec<usize> = district
            .iter()
            .map(|&v| g.index_of(gp.name(v)))
            .collect::<Result<_>>()?;
        let anc = g.ancestors(&s);
        let sub = g.vertex_subgraph(&anc)?;
        let mut block: Vec<usize> = Vec::new();
        for &v in &s {
            let sv = sub.index_of(g.name(v))?;
            for u in sub.district_of(sv) {
                let gu = g.index_of(sub.name(u))?;
                if !block.contains(&gu) {
                    block.push(gu);
                }
            }
        }
        block.sort_unstable();
        // Soundness: no untreated-or-treated external parent of the district
        // may sit inside its block.
        for &v in &s {
            for &p in g.parents(v) {
                if !s.contains(&p) && block.contains(&p) {
                    return Err(Error::ConditionsFail(format!(
                        "parent `{}` of the district containing `{}` lies in its bidirected block",
                        g.name(p),
                        g.name(v)
                    )));
                }
            }
        }
        blocks.push(block);
    }
    for (i, b1) in blocks.iter().enumerate() {
        for b2 in &blocks[i + 1..] {
            if b1.iter().any(|v| b2.contains(v)) {
                return Err(Error::ConditionsFail(
                    "bidirected blocks of distinct districts overlap".into(),
                ));
            }
        }
    }
    let block_of = |v: usize| blocks.iter().find(|b| b.contains(&v));
    // Treated vertices outside every block contribute no factor; the rest
    // are factored against their history, with treatments outside the
    // factor's own block held at their constants.
    let mut pool = SymbolPool::new();
    let mut frees = Vec::new();
    let mut const_of = vec![None; g.n()];
    for &(v, s) in treatments {
        const_of[v] = Some(frees.len());
        frees.push(FreeConst {
            symbol: pool.next(g.name(v)),
            var_name: g.name(v).to_string(),
            rank: g.topo_rank(v),
            value: s,
        });
    }
    let factored: Vec<usize> = (0..g.n())
        .filter(|&v| !a_set.contains(&v) || block_of(v).is_some())
        .collect();
    let mut var_of = vec![None; g.n()];
    let mut vars = Vec::new();
    for &v in &factored {
        var_of[v] = Some(vars.len());
        vars.push(FVar {
            name: g.name(v).to_string(),
            states: g.cardinality(v),
            rank: g.topo_rank(v),
            out: y.contains(&v),
        });
    }
    let mut terms = Vec::new();
    for &v in &factored {
        let own_block = block_of(v);
        let given = g
            .predecessors(v)
            .into_iter()
            .map(|w| {
                let treated_outside = a_set.contains(&w)
                    && own_block.map_or(true, |b| !b.contains(&w));
                if treated_outside {
                    Atom::Const(const_of[w].unwrap())
                } else {
                    Atom::Var(var_of[w].unwrap())
                }
            })
            .collect();
        terms.push(Term { children: vec![var_of[v].unwrap()], given });
    }
    let mut f = Functional { vars, frees, terms };
    f.simplify();
    Ok(f)
}

/// The companion acyclic graph of a graph with bidirected edges: each
/// bidirected edge is oriented along the topological order of the directed
/// part, and a vertex treatment becomes the assignment of all originally
/// directed edges out of the treated vertices.
pub fn dag_dagger(
    g: &CausalGraph,
    treatments: &[(usize, usize)],
) -> Result<(CausalGraph, EdgeIntervention)> {
    let vertices: Vec<(&str, usize)> = (0..g.n()).map(|v| (g.name(v), g.cardinality(v))).collect();
    let mut directed: Vec<(usize, usize)> = g.directed_edges().to_vec();
    for &(a, b) in g.bidirected_edges() {
        let e = if g.topo_rank(a) < g.topo_rank(b) { (a, b) } else { (b, a) };
        if !directed.contains(&e) {
            directed.push(e);
        }
    }
    let edge_names: Vec<(&str, &str)> = directed
        .iter()
        .map(|&(a, b)| (g.name(a), g.name(b)))
        .collect();
    let dagger = CausalGraph::build(&vertices, &edge_names, &[])?;
    let mut assignments = Vec::new();
    for &(v, s) in treatments {
        for &(a, b) in g.directed_edges() {
            if a == v {
                let da = dagger.index_of(g.name(a))?;
                let db = dagger.index_of(g.name(b))?;
                assignments.push(((da, db), s));
            }
        }
    }
    let eta = EdgeIntervention::new(&dagger, assignments)?;
    Ok((dagger, eta))
}

/// Run the full identification pipeline on a valued path intervention.
///
/// The gates run in order: liveness reduction, naturality, edge consistency,
/// node consistency.  The first failing gate fixes the verdict; a functional
/// is returned exactly when the query is identified.
pub fn identify(
    g: &CausalGraph,
    y: &[usize],
    alpha: &PathIntervention,
    cap: usize,
) -> Result<IdentificationResult> {
    if !g.is_dag() {
        return Err(Error::NotADag);
    }
    let mut gates = Vec::new();
    // Dead paths never reach the response set and are dropped outright.
    let live = paths::live_subset(g, y, &alpha.paths(), cap)?;
    let alpha_live = alpha.restrict(&live);
    gates.push(Gate {
        name: "liveness",
        evidence: CheckEvidence {
            ok: true,
            detail: format!(
                "{} of {} paths live",
                alpha_live.assignments().len(),
                alpha.assignments().len()
            ),
            paths: live.clone(),
            edges: Vec::new(),
        },
    });
    let natural = intervene::is_natural_for(g, y, &alpha_live, cap)?;
    let natural_ok = natural.ok;
    gates.push(Gate { name: "naturality", evidence: natural });
    if !natural_ok {
        return Ok(IdentificationResult {
            verdict: Verdict::NotIdentifiedMwm,
            functional: None,
            induced: None,
            gates,
            note: Some(PARAMETRIC_NOTE.into()),
        });
    }
    // Natural assignments reduce away; re-check liveness of the remainder.
    let reduced = alpha_live.constant_subset();
    let live2 = paths::live_subset(g, y, &reduced.paths(), cap)?;
    let reduced = reduced.restrict(&live2);
    if reduced.is_empty() {
        // Nothing constrains the response set: the observed marginal.
        let empty = NodeIntervention::new(g, Vec::new())?;
        let f = extended_g_formula(g, y, &empty)?;
        return Ok(IdentificationResult {
            verdict: Verdict::IdentifiedSwm,
            functional: Some(f),
            induced: Some(Intervention::Node(empty)),
            gates,
            note: None,
        });
    }
    let edge = intervene::check_edge_consistency(g, y, &reduced, cap)?;
    let edge_ok = edge.ok;
    gates.push(Gate { name: "edge consistency", evidence: edge });
    if !edge_ok {
        return Ok(IdentificationResult {
            verdict: Verdict::NotIdentifiedMwm,
            functional: None,
            induced: None,
            gates,
            note: Some(PARAMETRIC_NOTE.into()),
        });
    }
    let eta = intervene::induce_edge_intervention(g, y, &reduced, cap)?;
    let node = intervene::check_node_consistency(g, y, &eta, cap)?;
    let node_ok = node.ok;
    gates.push(Gate { name: "node consistency", evidence: node });
    if node_ok {
        let nu = intervene::induce_node_intervention(g, y, &eta, cap)?;
        let f = extended_g_formula(g, y, &nu)?;
        Ok(IdentificationResult {
            verdict: Verdict::IdentifiedSwm,
            functional: Some(f),
            induced: Some(Intervention::Node(nu)),
            gates,
            note: None,
        })
    } else {
        let f = edge_g_formula(g, y, &eta)?;
        Ok(IdentificationResult {
            verdict: Verdict::IdentifiedMwmOnly,
            functional: Some(f),
            induced: Some(Intervention::Edge(eta)),
            gates,
            note: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intervene::Value;
    use crate::paths::Path;

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
    fn total_effect_is_fully_identified() {
        let g = triangle();
        let y = vec![g.index_of("Y").unwrap()];
        let m = g.index_of("M").unwrap();
        let alpha = PathIntervention::new(&g, vec![(p(&g, &["M", "Y"]), Value::State(1))]).unwrap();
        let r = identify(&g, &y, &alpha, 1000).unwrap();
        assert_eq!(r.verdict, Verdict::IdentifiedSwm);
        assert_eq!(
            r.functional.unwrap().render_text(),
            "sum_{a,w} p(Y|m,a,w) p(a,w)"
        );
        match r.induced.unwrap() {
            Intervention::Node(nu) => assert_eq!(nu.assignments(), &[(m, 1)]),
            other => panic!("unexpected induced intervention {other:?}"),
        }
    }

    #[test]
    fn split_treatment_is_edge_identified_only() {
        let g = triangle();
        let y = vec![g.index_of("Y").unwrap()];
        let alpha = PathIntervention::new(
            &g,
            vec![
                (p(&g, &["A", "M"]), Value::State(1)),
                (p(&g, &["A", "Y"]), Value::State(0)),
            ],
        )
        .unwrap();
        let r = identify(&g, &y, &alpha, 1000).unwrap();
        assert_eq!(r.verdict, Verdict::IdentifiedMwmOnly);
        assert_eq!(
            r.functional.unwrap().render_text(),
            "sum_{m,w} p(Y|m,a) p(m|a',w) p(w)"
        );
    }

    #[test]
    fn recanting_edge_is_not_identified() {
        // Holding W -> A -> Y active while W -> A -> M stays natural reuses
        // the edge (W, A) inconsistently.
        let g = triangle();
        let y = vec![g.index_of("Y").unwrap()];
        let alpha = PathIntervention::new(
            &g,
            vec![
                (p(&g, &["W", "A", "Y"]), Value::State(1)),
                (p(&g, &["W", "M"]), Value::State(0)),
            ],
        )
        .unwrap();
        let r = identify(&g, &y, &alpha, 1000).unwrap();
        assert_eq!(r.verdict, Verdict::NotIdentifiedMwm);
        assert!(r.functional.is_none());
        assert!(r.note.is_some());
        assert!(r.gates.iter().any(|gate| !gate.evidence.ok));
    }

    #[test]
    fn empty_intervention_is_observational() {
        let g = triangle();
        let y = vec![g.index_of("Y").unwrap()];
        let alpha = PathIntervention::empty();
        let r = identify(&g, &y, &alpha, 1000).unwrap();
        assert_eq!(r.verdict, Verdict::IdentifiedSwm);
        assert_eq!(r.functional.unwrap().render_text(), "p(Y)");
    }

    #[test]
    fn front_door_district_functional() {
        let g = CausalGraph::build(
            &[("A", 2), ("M", 2), ("Y", 2)],
            &[("A", "M"), ("M", "Y")],
            &[("A", "Y")],
        )
        .unwrap();
        let y = vec![g.index_of("Y").unwrap()];
        let a = g.index_of("A").unwrap();
        let f = g_functional_admg(&g, &y, &[(a, 1)]).unwrap();
        assert_eq!(f.render_text(), "sum_{m,a'} p(Y|m,a') p(m|a) p(a')");
    }

    #[test]
    fn bow_graph_fails_district_conditions() {
        let g = CausalGraph::build(&[("A", 2), ("Y", 2)], &[("A", "Y")], &[("A", "Y")]).unwrap();
        let y = vec![g.index_of("Y").unwrap()];
        let a = g.index_of("A").unwrap();
        match g_functional_admg(&g, &y, &[(a, 1)]) {
            Err(Error::ConditionsFail(_)) => {}
            other => panic!("expected the conditions to fail, got {other:?}"),
        }
    }

    #[test]
    fn back_door_admg_matches_plain_adjustment() {
        let g = CausalGraph::build(
            &[("C", 2), ("A", 2), ("M", 2), ("Y", 2)],
            &[
                ("C", "A"),
                ("C", "M"),
                ("C", "Y"),
                ("A", "M"),
                ("M", "Y"),
                ("A", "Y"),
            ],
            &[],
        )
        .unwrap();
        let y = vec![g.index_of("Y").unwrap()];
        let a = g.index_of("A").unwrap();
        let f = g_functional_admg(&g, &y, &[(a, 1)]).unwrap();
        assert_eq!(f.render_text(), "sum_{c} p(Y|a,c) p(c)");
    }

    #[test]
    fn dagger_graph_orients_bidirected_edges() {
        let g = CausalGraph::build(
            &[("A", 2), ("M", 2), ("Y", 2)],
            &[("A", "M"), ("M", "Y")],
            &[("A", "Y")],
        )
        .unwrap();
        let a = g.index_of("A").unwrap();
        let (dagger, eta) = dag_dagger(&g, &[(a, 0)]).unwrap();
        assert!(dagger.is_dag());
        let da = dagger.index_of("A").unwrap();
        let dm = dagger.index_of("M").unwrap();
        let dy = dagger.index_of("Y").unwrap();
        assert!(dagger.has_directed_edge(da, dy));
        // Only the originally directed edge out of A is assigned.
        assert_eq!(eta.assignments(), &[((da, dm), 0)]);
    }
}
