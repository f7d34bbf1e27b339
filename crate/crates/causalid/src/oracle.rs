//! Exact finite structural models: enumeration of observational,
//! interventional, and counterfactual distributions; model-class checks; and
//! witness model pairs for non-identified queries.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dist::DiscreteJoint;
use crate::error::{Error, Result};
use crate::graph::CausalGraph;
use crate::intervene::{
    defined_response, CfArg, EdgeIntervention, Intervention, NodeIntervention, PathIntervention,
};

/// Cap on the total number of noise assignments enumerated.
pub const NOISE_CAP: usize = 1 << 24;

/// A finite noise variable with an explicit distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct Noise {
    pub name: String,
    pub states: usize,
    pub probs: Vec<f64>,
}

/// The response function of one vertex: a total table over the states of the
/// referenced parents and noises.
#[derive(Debug, Clone, PartialEq)]
pub struct Equation {
    /// Graph parents of the vertex, in the order the table indexes them.
    pub parents: Vec<usize>,
    /// Indices into the model's noise list, in table order after the parents.
    pub noises: Vec<usize>,
    /// Row-major over (parents ++ noises), first listed slowest.
    pub table: Vec<usize>,
}

/// An exact structural model over a DAG: per-vertex response tables driven
/// by finite independent noise variables.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuralModel {
    pub graph: CausalGraph,
    pub noises: Vec<Noise>,
    pub equations: Vec<Equation>,
}

/// Which independence restrictions a model satisfies: full cross-world
/// independence, only within-world independence, or neither.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelClass {
    Mwm,
    SwmOnly,
    Neither,
}

impl StructuralModel {
    pub fn validate(&self) -> Result<()> {
        if !self.graph.is_dag() {
            return Err(Error::NotADag);
        }
        if self.equations.len() != self.graph.n() {
            return Err(Error::BadModel(format!(
                "{} equations for {} vertices",
                self.equations.len(),
                self.graph.n()
            )));
        }
        for noise in &self.noises {
            if noise.states == 0 || noise.probs.len() != noise.states {
                return Err(Error::BadModel(format!(
                    "noise `{}` has a malformed distribution",
                    noise.name
                )));
            }
            if noise.probs.iter().any(|&p| p < 0.0) {
                return Err(Error::BadModel(format!("noise `{}` has negative mass", noise.name)));
            }
            let total: f64 = noise.probs.iter().sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(Error::BadModel(format!(
                    "noise `{}` sums to {total}",
                    noise.name
                )));
            }
        }
        for (v, eq) in self.equations.iter().enumerate() {
            let mut declared = eq.parents.clone();
            declared.sort_unstable();
            if declared != self.graph.parents(v) {
                return Err(Error::BadModel(format!(
                    "equation of `{}` does not reference exactly its graph parents",
                    self.graph.name(v)
                )));
            }
            for &ni in &eq.noises {
                if ni >= self.noises.len() {
                    return Err(Error::BadModel(format!(
                        "equation of `{}` references unknown noise #{ni}",
                        self.graph.name(v)
                    )));
                }
            }
            let rows: usize = eq
                .parents
                .iter()
                .map(|&p| self.graph.cardinality(p))
                .chain(eq.noises.iter().map(|&ni| self.noises[ni].states))
                .product();
            if eq.table.len() != rows {
                return Err(Error::BadModel(format!(
                    "equation of `{}` has {} rows, expected {rows}",
                    self.graph.name(v),
                    eq.table.len()
                )));
            }
            if eq.table.iter().any(|&s| s >= self.graph.cardinality(v)) {
                return Err(Error::BadModel(format!(
                    "equation of `{}` maps outside its state space",
                    self.graph.name(v)
                )));
            }
        }
        Ok(())
    }

    fn noise_space(&self) -> Result<usize> {
        let mut total: usize = 1;
        for noise in &self.noises {
            total = total.saturating_mul(noise.states);
            if total > NOISE_CAP {
                return Err(Error::Capacity(format!(
                    "noise assignment space exceeds {NOISE_CAP}"
                )));
            }
        }
        Ok(total)
    }

    fn decode_noise(&self, mut idx: usize) -> Vec<usize> {
        let mut u = vec![0; self.noises.len()];
        for (i, noise) in self.noises.iter().enumerate().rev() {
            u[i] = idx % noise.states;
            idx /= noise.states;
        }
        u
    }

    fn noise_weight(&self, u: &[usize]) -> f64 {
        self.noises
            .iter()
            .zip(u)
            .map(|(n, &s)| n.probs[s])
            .product()
    }

    /// Apply the response table of `v` to concrete parent values and noises.
    fn respond(&self, v: usize, parent_values: &[usize], u: &[usize]) -> usize {
        let eq = &self.equations[v];
        let mut idx = 0;
        for (&p, &val) in eq.parents.iter().zip(parent_values) {
            idx = idx * self.graph.cardinality(p) + val;
        }
        for &ni in &eq.noises {
            idx = idx * self.noises[ni].states + u[ni];
        }
        eq.table[idx]
    }

    /// All natural values under one noise assignment, in vertex order.
    pub fn natural_values(&self, u: &[usize]) -> Vec<usize> {
        let mut val = vec![usize::MAX; self.graph.n()];
        for &v in self.graph.topological_order() {
            let pv: Vec<usize> = self.equations[v].parents.iter().map(|&p| val[p]).collect();
            val[v] = self.respond(v, &pv, u);
        }
        val
    }

    /// All responses under a forced vertex assignment: parents in the
    /// intervention are replaced by their forced values everywhere.
    fn node_values(&self, nu: &NodeIntervention, u: &[usize]) -> Vec<usize> {
        let mut val = vec![usize::MAX; self.graph.n()];
        for &v in self.graph.topological_order() {
            let pv: Vec<usize> = self.equations[v]
                .parents
                .iter()
                .map(|&p| nu.value_of(p).unwrap_or(val[p]))
                .collect();
            val[v] = self.respond(v, &pv, u);
        }
        val
    }

    /// All responses under a forced edge assignment: each intervened edge
    /// carries its forced value into the child's equation.
    fn edge_values(&self, eta: &EdgeIntervention, u: &[usize]) -> Vec<usize> {
        let mut val = vec![usize::MAX; self.graph.n()];
        for &v in self.graph.topological_order() {
            let pv: Vec<usize> = self.equations[v]
                .parents
                .iter()
                .map(|&p| eta.value_of((p, v)).unwrap_or(val[p]))
                .collect();
            val[v] = self.respond(v, &pv, u);
        }
        val
    }

    /// Exact observed joint distribution over all vertices.
    pub fn observational_joint(&self) -> Result<DiscreteJoint> {
        self.validate()?;
        let queries = vec![(Vec::from_iter(0..self.graph.n()), Intervention::Path(PathIntervention::empty()))];
        self.counterfactual_joint(&queries)
    }

    /// Exact joint distribution of the listed responses, possibly across
    /// different interventions evaluated on the same underlying noise draw.
    ///
    /// Each query contributes one column per listed vertex; columns are
    /// labeled by vertex name, disambiguated with a query index when a name
    /// repeats.
    pub fn counterfactual_joint(
        &self,
        queries: &[(Vec<usize>, Intervention)],
    ) -> Result<DiscreteJoint> {
        self.validate()?;
        let total = self.noise_space()?;
        // Pre-expand path queries once.
        enum Engine {
            Node(NodeIntervention),
            Edge(EdgeIntervention),
            Path(crate::intervene::CfExpr),
        }
        let mut engines = Vec::new();
        for (vars, iv) in queries {
            let engine = match iv {
                Intervention::Node(nu) => Engine::Node(nu.clone()),
                Intervention::Edge(eta) => Engine::Edge(eta.clone()),
                Intervention::Path(piv) => Engine::Path(defined_response(&self.graph, vars, piv)?),
            };
            engines.push(engine);
        }
        // Column labels.
        let mut name_count: HashMap<&str, usize> = HashMap::new();
        for (vars, _) in queries {
            for &v in vars {
                *name_count.entry(self.graph.name(v)).or_insert(0) += 1;
            }
        }
        let mut columns: Vec<(String, usize)> = Vec::new();
        for (qi, (vars, _)) in queries.iter().enumerate() {
            for &v in vars {
                let name = self.graph.name(v);
                let label = if name_count[name] > 1 {
                    format!("{name}#{qi}")
                } else {
                    name.to_string()
                };
                columns.push((label, self.graph.cardinality(v)));
            }
        }
        let size: usize = columns.iter().map(|&(_, s)| s).product();
        let mut table = vec![0.0; size];
        for idx in 0..total {
            let u = self.decode_noise(idx);
            let w = self.noise_weight(&u);
            if w == 0.0 {
                continue;
            }
            let mut states = Vec::with_capacity(columns.len());
            for ((vars, _), engine) in queries.iter().zip(&engines) {
                match engine {
                    Engine::Node(nu) => {
                        let val = self.node_values(nu, &u);
                        states.extend(vars.iter().map(|&v| val[v]));
                    }
                    Engine::Edge(eta) => {
                        let val = self.edge_values(eta, &u);
                        states.extend(vars.iter().map(|&v| val[v]));
                    }
                    Engine::Path(expr) => {
                        let mut val = vec![0usize; expr.nodes.len()];
                        for (id, node) in expr.nodes.iter().enumerate() {
                            let pv: Vec<usize> = node
                                .args
                                .iter()
                                .map(|&(_, a)| match a {
                                    CfArg::Const(s) => s,
                                    CfArg::Expr(e) => val[e],
                                })
                                .collect();
                            val[id] = self.respond(node.vertex, &pv, &u);
                        }
                        states.extend(expr.roots.iter().map(|&(_, id)| val[id]));
                    }
                }
            }
            let mut o = 0;
            for (&(_, card), &s) in columns.iter().zip(&states) {
                o = o * card + s;
            }
            table[o] += w;
        }
        DiscreteJoint::new(columns, table)
    }

    /// Distribution of the responses of `y` to `iv`, optionally jointly with
    /// the natural values of further vertices.
    pub fn response_distribution(
        &self,
        y: &[usize],
        iv: &Intervention,
        joint_with: &[usize],
    ) -> Result<DiscreteJoint> {
        let mut queries = vec![(y.to_vec(), iv.clone())];
        if !joint_with.is_empty() {
            queries.push((
                joint_with.to_vec(),
                Intervention::Path(PathIntervention::empty()),
            ));
        }
        self.counterfactual_joint(&queries)
    }

    /// Classify the model by its counterfactual independence structure.
    pub fn check_model_class(&self) -> Result<ModelClass> {
        self.validate()?;
        // Disjoint per-equation noise sets imply full independence outright.
        let mut used: Vec<Vec<usize>> = self.equations.iter().map(|e| e.noises.clone()).collect();
        for list in &mut used {
            list.sort_unstable();
            list.dedup();
        }
        let mut disjoint = true;
        'outer: for i in 0..used.len() {
            for j in i + 1..used.len() {
                if used[i].iter().any(|n| used[j].contains(n)) {
                    disjoint = false;
                    break 'outer;
                }
            }
        }
        if disjoint {
            return Ok(ModelClass::Mwm);
        }
        let total = self.noise_space()?;
        let n = self.graph.n();
        // Cross-world check: the full per-vertex response tables, viewed as
        // random vectors, must be mutually independent.
        let vector_of = |v: usize, u: &[usize]| -> Vec<usize> {
            let eq = &self.equations[v];
            let mut rows = Vec::new();
            let cards: Vec<usize> = eq.parents.iter().map(|&p| self.graph.cardinality(p)).collect();
            let count: usize = cards.iter().product();
            for mut row in 0..count {
                let mut pv = vec![0; cards.len()];
                for i in (0..cards.len()).rev() {
                    pv[i] = row % cards[i];
                    row /= cards[i];
                }
                rows.push(self.respond(v, &pv, u));
            }
            rows
        };
        let mut joint: HashMap<Vec<Vec<usize>>, f64> = HashMap::new();
        let mut marginals: Vec<HashMap<Vec<usize>, f64>> = vec![HashMap::new(); n];
        for idx in 0..total {
            let u = self.decode_noise(idx);
            let w = self.noise_weight(&u);
            if w == 0.0 {
                continue;
            }
            let tuple: Vec<Vec<usize>> = (0..n).map(|v| vector_of(v, &u)).collect();
            for (v, item) in tuple.iter().enumerate() {
                *marginals[v].entry(item.clone()).or_insert(0.0) += w;
            }
            *joint.entry(tuple).or_insert(0.0) += w;
        }
        let independent = |joint: &HashMap<Vec<Vec<usize>>, f64>,
                           marginals: &[HashMap<Vec<usize>, f64>]|
         -> bool {
            // Compare the joint with the product measure over its support
            // and over all combinations of marginal supports.
            let mut combos: Vec<(Vec<Vec<usize>>, f64)> = vec![(Vec::new(), 1.0)];
            for m in marginals {
                let mut next = Vec::new();
                let mut keys: Vec<_> = m.keys().cloned().collect();
                keys.sort();
                for (prefix, p) in &combos {
                    for k in &keys {
                        let mut t = prefix.clone();
                        t.push(k.clone());
                        next.push((t, p * m[k]));
                    }
                }
                combos = next;
            }
            combos.iter().all(|(tuple, p)| {
                let q = joint.get(tuple).copied().unwrap_or(0.0);
                (p - q).abs() <= 1e-12
            })
        };
        if independent(&joint, &marginals) {
            return Ok(ModelClass::Mwm);
        }
        // Within-world check: for every full state assignment, the one-step
        // responses must be mutually independent.
        let cards: Vec<usize> = (0..n).map(|v| self.graph.cardinality(v)).collect();
        let worlds: usize = cards.iter().product();
        for mut world in 0..worlds {
            let mut state = vec![0; n];
            for v in (0..n).rev() {
                state[v] = world % cards[v];
                world /= cards[v];
            }
            let mut joint: HashMap<Vec<Vec<usize>>, f64> = HashMap::new();
            let mut marginals: Vec<HashMap<Vec<usize>, f64>> = vec![HashMap::new(); n];
            for idx in 0..total {
                let u = self.decode_noise(idx);
                let w = self.noise_weight(&u);
                if w == 0.0 {
                    continue;
                }
                let tuple: Vec<Vec<usize>> = (0..n)
                    .map(|v| {
                        let pv: Vec<usize> = self.equations[v]
                            .parents
                            .iter()
                            .map(|&p| state[p])
                            .collect();
                        vec![self.respond(v, &pv, &u)]
                    })
                    .collect();
                for (v, item) in tuple.iter().enumerate() {
                    *marginals[v].entry(item.clone()).or_insert(0.0) += w;
                }
                *joint.entry(tuple).or_insert(0.0) += w;
            }
            if !independent(&joint, &marginals) {
                return Ok(ModelClass::Neither);
            }
        }
        Ok(ModelClass::SwmOnly)
    }
}

/// How [`random_model`] wires noises to equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseSemantics {
    /// One private noise per vertex: the model satisfies full cross-world
    /// independence by construction.
    Mwm,
    /// Additionally rewires one common-parent vertex pair to read a shared
    /// pair of iid noises through opposite parent-dependent selectors,
    /// which keeps within-world independence but generically breaks the
    /// cross-world restriction.
    Shared,
}

/// A reproducible pseudo-random structural model on `g`.
///
/// Response tables have the shifted-noise form `(f(parents) + noise) mod k`,
/// so every conditional is strictly positive.
pub fn random_model(g: &CausalGraph, seed: u64, semantics: NoiseSemantics) -> Result<StructuralModel> {
    if !g.is_dag() {
        return Err(Error::NotADag);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut noises = Vec::new();
    let mut equations = Vec::new();
    for v in 0..g.n() {
        let k = g.cardinality(v);
        let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.1..1.0)).collect();
        let total: f64 = raw.iter().sum();
        noises.push(Noise {
            name: format!("U{}", g.name(v)),
            states: k,
            probs: raw.into_iter().map(|p| p / total).collect(),
        });
        let parents: Vec<usize> = g.parents(v).to_vec();
        let rows: usize = parents.iter().map(|&p| g.cardinality(p)).product();
        let mut table = Vec::with_capacity(rows * k);
        for _ in 0..rows {
            let shift = rng.gen_range(0..k);
            for u in 0..k {
                table.push((shift + u) % k);
            }
        }
        equations.push(Equation { parents, noises: vec![v], table });
    }
    let mut model = StructuralModel { graph: g.clone(), noises, equations };
    if semantics == NoiseSemantics::Shared {
        // Candidate vertex pairs sharing a parent and matching cardinality.
        let mut candidates = Vec::new();
        for a in 0..g.n() {
            let ch = g.children(a);
            for (i, &b) in ch.iter().enumerate() {
                for &c in &ch[i + 1..] {
                    if g.cardinality(b) == g.cardinality(c) {
                        candidates.push((a, b, c));
                    }
                }
            }
        }
        if let Some(&(a, b, c)) = candidates.first() {
            let k = g.cardinality(b);
            let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.1..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let probs: Vec<f64> = raw.into_iter().map(|p| p / total).collect();
            // Two iid noises; each of the pair reads one of them, switching
            // on the parity of the shared parent's value.
            let n1 = model.noises.len();
            model.noises.push(Noise { name: "Ushared1".into(), states: k, probs: probs.clone() });
            let n2 = model.noises.len();
            model.noises.push(Noise { name: "Ushared2".into(), states: k, probs });
            for (child, flip) in [(b, false), (c, true)] {
                let parents: Vec<usize> = g.parents(child).to_vec();
                let a_pos = parents.iter().position(|&p| p == a).unwrap();
                let cards: Vec<usize> = parents.iter().map(|&p| g.cardinality(p)).collect();
                let rows: usize = cards.iter().product();
                let mut table = Vec::with_capacity(rows * k * k);
                for mut row in 0..rows {
                    let mut pv = vec![0; cards.len()];
                    for i in (0..cards.len()).rev() {
                        pv[i] = row % cards[i];
                        row /= cards[i];
                    }
                    let pick_first = (pv[a_pos] % 2 == 0) ^ flip;
                    for u1 in 0..k {
                        for u2 in 0..k {
                            table.push(if pick_first { u1 } else { u2 });
                        }
                    }
                }
                model.equations[child] = Equation {
                    parents,
                    noises: vec![n1, n2],
                    table,
                };
            }
        }
        let class = model.check_model_class()?;
        if class == ModelClass::Neither {
            return Err(Error::SearchFailed(
                "shared-noise construction lost within-world independence".into(),
            ));
        }
    }
    model.validate()?;
    Ok(model)
}

/// Base shapes for witness model pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessShape {
    /// Two cross-world-independent models on `A -> B` agreeing on the
    /// observed joint but disagreeing on cross-world responses of `B`.
    SingleEdge,
    /// Two within-world-independent models on `A -> B`, `A -> C` agreeing on
    /// the observed joint and every vertex intervention but disagreeing on an
    /// edge intervention splitting `A`'s influence.
    Fork,
}

/// Verified quantities for a witness pair.
#[derive(Debug, Clone)]
pub struct WitnessReport {
    /// Largest entry-wise gap between the observed joints.
    pub observational_gap: f64,
    /// Largest entry-wise gap over all single-vertex interventions.
    pub node_intervention_gap: f64,
    /// Total variation distance between the target responses.
    pub target_tv: f64,
    /// Total variation for the cross-world pair response, where applicable.
    pub cross_world_tv: Option<f64>,
}

/// A verified pair of structural models demonstrating non-identification.
#[derive(Debug, Clone)]
pub struct WitnessPair {
    pub shape: WitnessShape,
    pub model1: StructuralModel,
    pub model2: StructuralModel,
    /// The disagreeing target: response vertices and intervention.
    pub target: (Vec<usize>, Intervention),
    pub report: WitnessReport,
}

fn uniform_noise(name: &str) -> Noise {
    Noise { name: name.into(), states: 2, probs: vec![0.5, 0.5] }
}

fn biased_noise(name: &str) -> Noise {
    Noise { name: name.into(), states: 2, probs: vec![0.75, 0.25] }
}

/// Append a directed chain of `len` exclusive-or vertices after `tail`,
/// sharing the same mechanism in both models.
fn extend_chain(
    names: &mut Vec<String>,
    edges: &mut Vec<(String, String)>,
    tail: &str,
    len: usize,
    label: &str,
) -> String {
    let mut prev = tail.to_string();
    for i in 0..len {
        let name = format!("{label}{i}");
        edges.push((prev.clone(), name.clone()));
        names.push(name.clone());
        prev = name;
    }
    prev
}

fn xor_equation(parent: usize, noise: usize) -> Equation {
    Equation {
        parents: vec![parent],
        noises: vec![noise],
        table: vec![0, 1, 1, 0],
    }
}

/// Construct and exhaustively verify a witness pair; `chain` appends
/// exclusive-or chains of the given lengths after the base sinks and moves
/// the target there.
pub fn witness_pair(shape: WitnessShape, chain: Option<(usize, usize)>) -> Result<WitnessPair> {
    let (mut names, mut edges): (Vec<String>, Vec<(String, String)>) = match shape {
        WitnessShape::SingleEdge => (
            vec!["A".into(), "B".into()],
            vec![("A".into(), "B".into())],
        ),
        WitnessShape::Fork => (
            vec!["A".into(), "B".into(), "C".into()],
            vec![("A".into(), "B".into()), ("A".into(), "C".into())],
        ),
    };
    let (chain_b, chain_c) = chain.unwrap_or((0, 0));
    let sink_b = extend_chain(&mut names, &mut edges, "B", chain_b, "D");
    let sink_c = if shape == WitnessShape::Fork {
        extend_chain(&mut names, &mut edges, "C", chain_c, "E")
    } else {
        String::new()
    };
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let edge_refs: Vec<(&str, &str)> = edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let g = CausalGraph::dag(&name_refs, &edge_refs)?;
    let a = g.index_of("A")?;
    let b = g.index_of("B")?;

    let mut base_noises = vec![uniform_noise("UA"), uniform_noise("UB")];
    if shape == WitnessShape::Fork {
        base_noises.push(uniform_noise("UC"));
    }
    let build = |equations_for: &dyn Fn(usize) -> Equation| -> Result<StructuralModel> {
        let mut noises = base_noises.clone();
        let mut equations: Vec<Option<Equation>> = vec![None; g.n()];
        equations[a] = Some(Equation { parents: vec![], noises: vec![0], table: vec![0, 1] });
        for v in 0..g.n() {
            if equations[v].is_some() {
                continue;
            }
            let name = g.name(v);
            if name == "B" || name == "C" {
                equations[v] = Some(equations_for(v));
            } else {
                // Chain vertex: biased exclusive-or of its single parent.
                let ni = noises.len();
                noises.push(biased_noise(&format!("U{name}")));
                equations[v] = Some(xor_equation(g.parents(v)[0], ni));
            }
        }
        let model = StructuralModel {
            graph: g.clone(),
            noises,
            equations: equations.into_iter().map(Option::unwrap).collect(),
        };
        model.validate()?;
        Ok(model)
    };

    let (model1, model2, target_vars, target_iv) = match shape {
        WitnessShape::SingleEdge => {
            // Model 1 ignores A; model 2 adds A into B.  Same observed joint.
            let m1 = build(&|_| Equation {
                parents: vec![a],
                noises: vec![1],
                table: vec![0, 1, 0, 1],
            })?;
            let m2 = build(&|_| xor_equation(a, 1))?;
            let sink = g.index_of(&sink_b)?;
            let iv = Intervention::Node(NodeIntervention::new(&g, vec![(a, 0)])?);
            (m1, m2, vec![sink], iv)
        }
        WitnessShape::Fork => {
            // Model 1: private exclusive-or noises.  Model 2: shared iid
            // noises read through opposite selectors on A.
            let m1 = build(&|v| xor_equation(a, if g.name(v) == "B" { 1 } else { 2 }))?;
            let m2 = build(&|v| {
                let first = g.name(v) == "B";
                Equation {
                    parents: vec![a],
                    noises: vec![1, 2],
                    // index = parent * 4 + u1 * 2 + u2
                    table: if first {
                        vec![0, 0, 1, 1, 0, 1, 0, 1]
                    } else {
                        vec![0, 1, 0, 1, 0, 0, 1, 1]
                    },
                }
            })?;
            let c = g.index_of("C")?;
            let sb = g.index_of(&sink_b)?;
            let sc = g.index_of(&sink_c)?;
            let iv = Intervention::Edge(EdgeIntervention::new(&g, vec![((a, b), 0), ((a, c), 1)])?);
            (m1, m2, vec![sb, sc], iv)
        }
    };

    // Verify by exhaustive enumeration before returning.
    let observational_gap = model1
        .observational_joint()?
        .max_abs_diff(&model2.observational_joint()?)?;
    let mut node_intervention_gap: f64 = 0.0;
    if shape == WitnessShape::Fork {
        let all: Vec<usize> = (0..g.n()).collect();
        for v in 0..g.n() {
            for s in 0..g.cardinality(v) {
                let iv = Intervention::Node(NodeIntervention::new(&g, vec![(v, s)])?);
                let d1 = model1.response_distribution(&all, &iv, &[])?;
                let d2 = model2.response_distribution(&all, &iv, &[])?;
                node_intervention_gap = node_intervention_gap.max(d1.max_abs_diff(&d2)?);
            }
        }
    }
    let (target_tv, cross_world_tv) = match shape {
        WitnessShape::SingleEdge => {
            // Joint of the sink's response with its natural value.
            let d1 = model1.response_distribution(&target_vars, &target_iv, &target_vars)?;
            let d2 = model2.response_distribution(&target_vars, &target_iv, &target_vars)?;
            let tv = d1.total_variation(&d2)?;
            // Cross-world joint of the responses under both arms.
            let arm = |s: usize| -> Result<Intervention> {
                Ok(Intervention::Node(NodeIntervention::new(&g, vec![(a, s)])?))
            };
            let queries1 = vec![(target_vars.clone(), arm(0)?), (target_vars.clone(), arm(1)?)];
            let x1 = model1.counterfactual_joint(&queries1)?;
            let x2 = model2.counterfactual_joint(&queries1)?;
            (tv, Some(x1.total_variation(&x2)?))
        }
        WitnessShape::Fork => {
            let d1 = model1.response_distribution(&target_vars, &target_iv, &[])?;
            let d2 = model2.response_distribution(&target_vars, &target_iv, &[])?;
            (d1.total_variation(&d2)?, None)
        }
    };
    let report = WitnessReport {
        observational_gap,
        node_intervention_gap,
        target_tv,
        cross_world_tv,
    };
    let base = chain.is_none();
    let threshold = match (shape, base) {
        (WitnessShape::SingleEdge, true) => 0.1,
        (WitnessShape::Fork, true) => 0.05,
        (_, false) => 0.01,
    };
    if observational_gap > 1e-12 {
        return Err(Error::SearchFailed(format!(
            "observed joints differ by {observational_gap}"
        )));
    }
    if node_intervention_gap > 1e-12 {
        return Err(Error::SearchFailed(format!(
            "vertex-intervention responses differ by {node_intervention_gap}"
        )));
    }
    if target_tv < threshold {
        return Err(Error::SearchFailed(format!(
            "target disagreement {target_tv} below threshold {threshold}"
        )));
    }
    if let Some(tv) = cross_world_tv {
        if tv < threshold {
            return Err(Error::SearchFailed(format!(
                "cross-world disagreement {tv} below threshold {threshold}"
            )));
        }
    }
    Ok(WitnessPair { shape, model1, model2, target: (target_vars, target_iv), report })
}
