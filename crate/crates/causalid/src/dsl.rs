//! Text formats: the graph description language, the intervention query
//! language, and JSON mirrors for graphs and structural models.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::CausalGraph;
use crate::intervene::{
    self, EdgeIntervention, Intervention, NodeIntervention, PathIntervention, Value,
};
use crate::oracle::{Equation, Noise, StructuralModel};
use crate::paths::Path;

#[derive(Debug, Clone, PartialEq, Eq)]
enum TokKind {
    Ident,
    Int,
    LBrace,
    RBrace,
    Semi,
    Colon,
    Eq,
    Arrow,
    BiArrow,
}

#[derive(Debug, Clone)]
struct Tok {
    kind: TokKind,
    text: String,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (tline, tcol) = (line, col);
        let advance = |i: &mut usize, line: &mut usize, col: &mut usize| {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        };
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col);
            }
            continue;
        }
        let simple = match c {
            '{' => Some(TokKind::LBrace),
            '}' => Some(TokKind::RBrace),
            ';' => Some(TokKind::Semi),
            ':' => Some(TokKind::Colon),
            '=' => Some(TokKind::Eq),
            _ => None,
        };
        if let Some(kind) = simple {
            toks.push(Tok { kind, text: c.to_string(), line: tline, col: tcol });
            advance(&mut i, &mut line, &mut col);
            continue;
        }
        if c == '-' && i + 1 < chars.len() && chars[i + 1] == '>' {
            toks.push(Tok { kind: TokKind::Arrow, text: "->".into(), line: tline, col: tcol });
            advance(&mut i, &mut line, &mut col);
            advance(&mut i, &mut line, &mut col);
            continue;
        }
        if c == '<' && i + 2 < chars.len() && chars[i + 1] == '-' && chars[i + 2] == '>' {
            toks.push(Tok { kind: TokKind::BiArrow, text: "<->".into(), line: tline, col: tcol });
            for _ in 0..3 {
                advance(&mut i, &mut line, &mut col);
            }
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                advance(&mut i, &mut line, &mut col);
            }
            toks.push(Tok { kind: TokKind::Int, text: s, line: tline, col: tcol });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                advance(&mut i, &mut line, &mut col);
            }
            toks.push(Tok { kind: TokKind::Ident, text: s, line: tline, col: tcol });
            continue;
        }
        return Err(Error::Parse {
            line: tline,
            col: tcol,
            msg: "unexpected character".into(),
            token: c.to_string(),
        });
    }
    Ok(toks)
}

struct Cursor {
    toks: Vec<Tok>,
    pos: usize,
}

impl Cursor {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn error(&self, msg: &str) -> Error {
        match self.peek() {
            Some(t) => Error::Parse {
                line: t.line,
                col: t.col,
                msg: msg.into(),
                token: t.text.clone(),
            },
            None => Error::Parse {
                line: self.toks.last().map_or(1, |t| t.line),
                col: self.toks.last().map_or(1, |t| t.col + t.text.len()),
                msg: msg.into(),
                token: "<end of input>".into(),
            },
        }
    }

    fn expect(&mut self, kind: TokKind, what: &str) -> Result<Tok> {
        match self.peek() {
            Some(t) if t.kind == kind => {
                let t = t.clone();
                self.pos += 1;
                Ok(t)
            }
            _ => Err(self.error(&format!("expected {what}"))),
        }
    }

    fn eat(&mut self, kind: TokKind) -> bool {
        if matches!(self.peek(), Some(t) if t.kind == kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        Ok(self.expect(TokKind::Ident, what)?.text)
    }

    fn int(&mut self, what: &str) -> Result<usize> {
        let t = self.expect(TokKind::Int, what)?;
        t.text.parse().map_err(|_| Error::Parse {
            line: t.line,
            col: t.col,
            msg: format!("{what} out of range"),
            token: t.text,
        })
    }
}

/// Parse the graph description language:
/// `graph name { nodes: W A M Y; card: M=3; W -> A; A <-> Y; }`.
pub fn parse_graph(text: &str) -> Result<CausalGraph> {
    let mut c = Cursor { toks: lex(text)?, pos: 0 };
    let kw = c.ident("`graph`")?;
    if kw != "graph" {
        c.pos -= 1;
        return Err(c.error("expected `graph`"));
    }
    c.ident("graph name")?;
    c.expect(TokKind::LBrace, "`{`")?;
    let mut nodes: Vec<String> = Vec::new();
    let mut cards: BTreeMap<String, usize> = BTreeMap::new();
    let mut directed: Vec<(String, String)> = Vec::new();
    let mut bidirected: Vec<(String, String)> = Vec::new();
    loop {
        if c.eat(TokKind::RBrace) {
            break;
        }
        let head = c.ident("a statement")?;
        match head.as_str() {
            "nodes" => {
                c.expect(TokKind::Colon, "`:`")?;
                while !c.eat(TokKind::Semi) {
                    nodes.push(c.ident("a vertex name")?);
                }
            }
            "card" => {
                c.expect(TokKind::Colon, "`:`")?;
                while !c.eat(TokKind::Semi) {
                    let name = c.ident("a vertex name")?;
                    c.expect(TokKind::Eq, "`=`")?;
                    let k = c.int("a cardinality")?;
                    cards.insert(name, k);
                }
            }
            _ => {
                let bidir = if c.eat(TokKind::Arrow) {
                    false
                } else if c.eat(TokKind::BiArrow) {
                    true
                } else {
                    return Err(c.error("expected `->` or `<->`"));
                };
                let to = c.ident("a vertex name")?;
                if bidir {
                    bidirected.push((head, to));
                } else {
                    directed.push((head, to));
                }
                c.expect(TokKind::Semi, "`;`")?;
            }
        }
    }
    if c.peek().is_some() {
        return Err(c.error("unexpected trailing input"));
    }
    for name in cards.keys() {
        if !nodes.contains(name) {
            return Err(Error::Semantic(format!(
                "cardinality given for undeclared vertex `{name}`"
            )));
        }
    }
    let vertices: Vec<(&str, usize)> = nodes
        .iter()
        .map(|n| (n.as_str(), cards.get(n).copied().unwrap_or(2)))
        .collect();
    let d: Vec<(&str, &str)> = directed.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let b: Vec<(&str, &str)> = bidirected.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    CausalGraph::build(&vertices, &d, &b)
}

/// One statement of the query language.
#[derive(Debug, Clone, PartialEq)]
pub enum QueryStmt {
    Do(String, usize),
    Edge(String, String, usize),
    /// A path with a state value, or natural when `None`.
    Path(Vec<String>, Option<usize>),
    Outcome(Vec<String>),
}

/// A parsed but not yet graph-bound query.
#[derive(Debug, Clone, PartialEq)]
pub struct QuerySpec {
    pub statements: Vec<QueryStmt>,
}

/// A query bound to a graph: a response set and an intervention.
#[derive(Debug, Clone)]
pub struct Query {
    pub outcomes: Vec<usize>,
    pub intervention: Intervention,
}

/// Parse the query language: `do A=1;`, `edge A->Y = 0;`,
/// `path W->A->M->Y = natural;`, `outcome Y;`.
pub fn parse_query(text: &str) -> Result<QuerySpec> {
    let mut c = Cursor { toks: lex(text)?, pos: 0 };
    let mut statements = Vec::new();
    while c.peek().is_some() {
        let head = c.ident("a statement")?;
        match head.as_str() {
            "do" => {
                let v = c.ident("a vertex name")?;
                c.expect(TokKind::Eq, "`=`")?;
                let s = c.int("a state")?;
                c.expect(TokKind::Semi, "`;`")?;
                statements.push(QueryStmt::Do(v, s));
            }
            "edge" => {
                let a = c.ident("a vertex name")?;
                c.expect(TokKind::Arrow, "`->`")?;
                let b = c.ident("a vertex name")?;
                c.expect(TokKind::Eq, "`=`")?;
                let s = c.int("a state")?;
                c.expect(TokKind::Semi, "`;`")?;
                statements.push(QueryStmt::Edge(a, b, s));
            }
            "path" => {
                let mut vs = vec![c.ident("a vertex name")?];
                while c.eat(TokKind::Arrow) {
                    vs.push(c.ident("a vertex name")?);
                }
                let value = if c.eat(TokKind::Eq) {
                    match c.peek() {
                        Some(t) if t.kind == TokKind::Ident && t.text == "natural" => {
                            c.pos += 1;
                            None
                        }
                        _ => Some(c.int("a state or `natural`")?),
                    }
                } else {
                    // A bare path keeps its natural value.
                    None
                };
                c.expect(TokKind::Semi, "`;`")?;
                statements.push(QueryStmt::Path(vs, value));
            }
            "outcome" => {
                let mut vs = Vec::new();
                while !c.eat(TokKind::Semi) {
                    vs.push(c.ident("a vertex name")?);
                }
                statements.push(QueryStmt::Outcome(vs));
            }
            _ => {
                c.pos -= 1;
                return Err(c.error("expected `do`, `edge`, `path`, or `outcome`"));
            }
        }
    }
    Ok(QuerySpec { statements })
}

impl QuerySpec {
    /// Bind the query to a graph.  A query of a single statement kind keeps
    /// that kind; mixed queries are embedded into one path intervention.
    pub fn compile(&self, g: &CausalGraph, cap: usize) -> Result<Query> {
        let mut outcomes: Vec<usize> = Vec::new();
        let mut nodes: Vec<(usize, usize)> = Vec::new();
        let mut edges: Vec<((usize, usize), usize)> = Vec::new();
        let mut paths: Vec<(Path, Value)> = Vec::new();
        for stmt in &self.statements {
            match stmt {
                QueryStmt::Do(v, s) => nodes.push((g.index_of(v)?, *s)),
                QueryStmt::Edge(a, b, s) => {
                    edges.push(((g.index_of(a)?, g.index_of(b)?), *s))
                }
                QueryStmt::Path(vs, value) => {
                    let names: Vec<&str> = vs.iter().map(|s| s.as_str()).collect();
                    let p = Path::from_names(g, &names)?;
                    let v = match value {
                        Some(s) => Value::State(*s),
                        None => Value::Natural,
                    };
                    paths.push((p, v));
                }
                QueryStmt::Outcome(vs) => {
                    for v in vs {
                        let i = g.index_of(v)?;
                        if !outcomes.contains(&i) {
                            outcomes.push(i);
                        }
                    }
                }
            }
        }
        if outcomes.is_empty() {
            return Err(Error::Semantic(
                "query declares no outcome; add an `outcome` statement".into(),
            ));
        }
        let intervention = match (nodes.is_empty(), edges.is_empty(), paths.is_empty()) {
            (false, true, true) => Intervention::Node(NodeIntervention::new(g, nodes)?),
            (true, false, true) => Intervention::Edge(EdgeIntervention::new(g, edges)?),
            _ => {
                let mut assignments = paths;
                if !nodes.is_empty() {
                    let nu = NodeIntervention::new(g, nodes)?;
                    let embedded = intervene::embed_node_as_path(g, &nu, &outcomes, cap)?;
                    assignments.extend(embedded.assignments().iter().cloned());
                }
                if !edges.is_empty() {
                    let eta = EdgeIntervention::new(g, edges)?;
                    let embedded = intervene::embed_edge_as_path(g, &eta, &outcomes, cap)?;
                    assignments.extend(embedded.assignments().iter().cloned());
                }
                Intervention::Path(PathIntervention::new(g, assignments)?)
            }
        };
        Ok(Query { outcomes, intervention })
    }
}

/// Render a path intervention as query-language statements, one per line.
pub fn render_path_query(g: &CausalGraph, y: &[usize], iv: &PathIntervention) -> String {
    let mut out = String::new();
    for (p, v) in iv.assignments() {
        let value = match v {
            Value::State(s) => s.to_string(),
            Value::Natural => "natural".into(),
        };
        out.push_str(&format!("path {} = {};\n", p.render(g), value));
    }
    let names: Vec<&str> = y.iter().map(|&v| g.name(v)).collect();
    out.push_str(&format!("outcome {};\n", names.join(" ")));
    out
}

/// JSON mirror of a graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphSpec {
    pub nodes: Vec<NodeSpec>,
    #[serde(default)]
    pub directed: Vec<(String, String)>,
    #[serde(default)]
    pub bidirected: Vec<(String, String)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NodeSpec {
    pub name: String,
    #[serde(default = "default_card")]
    pub card: usize,
}

fn default_card() -> usize {
    2
}

impl GraphSpec {
    pub fn from_graph(g: &CausalGraph) -> GraphSpec {
        GraphSpec {
            nodes: (0..g.n())
                .map(|v| NodeSpec { name: g.name(v).to_string(), card: g.cardinality(v) })
                .collect(),
            directed: g
                .directed_edges()
                .iter()
                .map(|&(a, b)| (g.name(a).to_string(), g.name(b).to_string()))
                .collect(),
            bidirected: g
                .bidirected_edges()
                .iter()
                .map(|&(a, b)| (g.name(a).to_string(), g.name(b).to_string()))
                .collect(),
        }
    }

    pub fn to_graph(&self) -> Result<CausalGraph> {
        let vertices: Vec<(&str, usize)> = self
            .nodes
            .iter()
            .map(|n| (n.name.as_str(), n.card))
            .collect();
        let d: Vec<(&str, &str)> = self
            .directed
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        let b: Vec<(&str, &str)> = self
            .bidirected
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        CausalGraph::build(&vertices, &d, &b)
    }
}

/// JSON mirror of a structural model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelSpec {
    pub graph: GraphSpec,
    pub noises: Vec<NoiseSpec>,
    pub equations: BTreeMap<String, EquationSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub name: String,
    pub states: usize,
    pub probs: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquationSpec {
    pub parents: Vec<String>,
    pub noises: Vec<String>,
    pub table: Vec<usize>,
}

impl ModelSpec {
    pub fn from_model(m: &StructuralModel) -> ModelSpec {
        let g = &m.graph;
        let mut equations = BTreeMap::new();
        for (v, eq) in m.equations.iter().enumerate() {
            equations.insert(
                g.name(v).to_string(),
                EquationSpec {
                    parents: eq.parents.iter().map(|&p| g.name(p).to_string()).collect(),
                    noises: eq
                        .noises
                        .iter()
                        .map(|&ni| m.noises[ni].name.clone())
                        .collect(),
                    table: eq.table.clone(),
                },
            );
        }
        ModelSpec {
            graph: GraphSpec::from_graph(g),
            noises: m
                .noises
                .iter()
                .map(|n| NoiseSpec {
                    name: n.name.clone(),
                    states: n.states,
                    probs: n.probs.clone(),
                })
                .collect(),
            equations,
        }
    }

    pub fn to_model(&self) -> Result<StructuralModel> {
        let graph = self.graph.to_graph()?;
        let noises: Vec<Noise> = self
            .noises
            .iter()
            .map(|n| Noise { name: n.name.clone(), states: n.states, probs: n.probs.clone() })
            .collect();
        let noise_index = |name: &str| -> Result<usize> {
            noises
                .iter()
                .position(|n| n.name == name)
                .ok_or_else(|| Error::BadModel(format!("unknown noise `{name}`")))
        };
        let mut equations = Vec::with_capacity(graph.n());
        for v in 0..graph.n() {
            let spec = self.equations.get(graph.name(v)).ok_or_else(|| {
                Error::BadModel(format!("no equation for vertex `{}`", graph.name(v)))
            })?;
            equations.push(Equation {
                parents: spec
                    .parents
                    .iter()
                    .map(|p| graph.index_of(p))
                    .collect::<Result<_>>()?,
                noises: spec
                    .noises
                    .iter()
                    .map(|n| noise_index(n))
                    .collect::<Result<_>>()?,
                table: spec.table.clone(),
            });
        }
        let model = StructuralModel { graph, noises, equations };
        model.validate()?;
        Ok(model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let g = parse_graph(
            "graph fig { nodes: W A M Y; card: M=3; W -> A; A -> M; A <-> Y; M -> Y; }",
        )
        .unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.cardinality(g.index_of("M").unwrap()), 3);
        assert_eq!(g.bidirected_edges().len(), 1);
        // JSON mirror round-trips.
        let spec = GraphSpec::from_graph(&g);
        let back = spec.to_graph().unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn parse_errors_carry_location() {
        match parse_graph("graph g { nodes: A B; A => B; }") {
            Err(Error::Parse { line, col, token, .. }) => {
                assert_eq!(line, 1);
                assert!(col > 1);
                assert_eq!(token, ">");
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn query_kinds() {
        let g = parse_graph("graph g { nodes: W A M Y; W -> A; W -> M; A -> M; A -> Y; M -> Y; }")
            .unwrap();
        let q = parse_query("do M=1; outcome Y;").unwrap().compile(&g, 1000).unwrap();
        assert!(matches!(q.intervention, Intervention::Node(_)));
        let q = parse_query("edge A->M = 1; edge A->Y = 0; outcome Y;")
            .unwrap()
            .compile(&g, 1000)
            .unwrap();
        assert!(matches!(q.intervention, Intervention::Edge(_)));
        let q = parse_query("path W->A->M->Y = natural; path W->M = 0; outcome Y;")
            .unwrap()
            .compile(&g, 1000)
            .unwrap();
        match &q.intervention {
            Intervention::Path(iv) => assert_eq!(iv.assignments().len(), 2),
            other => panic!("expected a path intervention, got {other:?}"),
        }
        // Properness violation surfaces as a semantic error.
        let bad = parse_query("path W->A; path W->A->Y = 1; outcome Y;")
            .unwrap()
            .compile(&g, 1000);
        assert!(matches!(bad, Err(Error::NotProper(_, _))));
        // No outcome statement.
        let bad = parse_query("do M=1;").unwrap().compile(&g, 1000);
        assert!(matches!(bad, Err(Error::Semantic(_))));
    }

    #[test]
    fn mixed_query_embeds_to_paths() {
        let g = parse_graph("graph g { nodes: W A M Y; W -> A; W -> M; A -> M; A -> Y; M -> Y; }")
            .unwrap();
        let q = parse_query("do M=1; path W->A->Y = 0; outcome Y;")
            .unwrap()
            .compile(&g, 1000)
            .unwrap();
        match &q.intervention {
            Intervention::Path(iv) => {
                // The vertex treatment contributes its single outgoing path.
                assert_eq!(iv.assignments().len(), 2);
            }
            other => panic!("expected a path intervention, got {other:?}"),
        }
    }

    #[test]
    fn query_render_reparses() {
        let g = parse_graph("graph g { nodes: W A M Y; W -> A; W -> M; A -> M; A -> Y; M -> Y; }")
            .unwrap();
        let text = "path W->A->M->Y = 1;\npath W->A->Y = natural;\noutcome Y;\n";
        let q = parse_query(text).unwrap().compile(&g, 1000).unwrap();
        if let Intervention::Path(iv) = &q.intervention {
            let rendered = render_path_query(&g, &q.outcomes, iv);
            assert_eq!(rendered, text);
        } else {
            panic!("expected a path intervention");
        }
    }

    #[test]
    fn model_spec_round_trip() {
        let g = CausalGraph::dag(&["A", "B"], &[("A", "B")]).unwrap();
        let m = crate::oracle::random_model(&g, 5, crate::oracle::NoiseSemantics::Mwm).unwrap();
        let spec = ModelSpec::from_model(&m);
        let json = serde_json::to_string(&spec).unwrap();
        let back: ModelSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_model().unwrap(), m);
    }
}
