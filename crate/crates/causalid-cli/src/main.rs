//! Command-line surface for the identification library: parse the text
//! formats, dispatch to the library, and emit JSON, text, or LaTeX.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use causalid::dsl::{self, ModelSpec, Query};
use causalid::error::Error;
use causalid::estimation::{self, MediationLaw, Unit};
use causalid::graph::CausalGraph;
use causalid::identify::{self, IdentificationResult, Verdict};
use causalid::intervene::{self, Intervention};
use causalid::oracle::{self, NoiseSemantics, WitnessShape};
use causalid::paths::{self, Path};
use causalid::{DiscreteJoint, Functional};

#[derive(Parser)]
#[command(name = "causalid", version, about = "Causal identification toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Latex,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the output to a file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide identifiability of a query and emit the identifying functional.
    Identify {
        /// Graph description file.
        #[arg(long)]
        graph: PathBuf,
        /// Query file (do/edge/path/outcome statements).
        #[arg(long)]
        query: PathBuf,
        /// Treat the graph as a mixed graph and use the district functional.
        #[arg(long)]
        admg: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Translate a named target into path-intervention statements.
    Translate {
        #[command(subcommand)]
        target: TranslateCmd,
    },
    /// Identify a query and evaluate its functional on a distribution.
    Evaluate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        query: PathBuf,
        /// Joint distribution JSON file.
        #[arg(long)]
        dist: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare the identified functional against exact enumeration on random
    /// structural models.
    OracleCheck {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        query: PathBuf,
        /// Number of random models per semantics.
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Construct and verify a witness model pair for a non-identified shape.
    Witness {
        /// Base shape of the pair.
        #[arg(value_enum)]
        shape: ShapeArg,
        /// Chain extension lengths, e.g. `2,2`.
        #[arg(long)]
        chain: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Build the split graph of a vertex or edge intervention.
    Swig {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        query: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Mediation functionals and the triply robust estimator.
    Estimate {
        /// Joint law JSON over variables C, A, M, Y.
        #[arg(long)]
        dist: PathBuf,
        /// Sending treatment arm.
        #[arg(long)]
        a: usize,
        /// Receiving treatment arm.
        #[arg(long = "a-prime")]
        a_prime: usize,
        /// Optional CSV dataset (header C,A,M,Y) for an empirical estimate.
        #[arg(long)]
        data: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ShapeArg {
    SingleEdge,
    Fork,
}

#[derive(Subcommand)]
enum TranslateCmd {
    /// Effect of treatment on the treated.
    Ett {
        #[arg(long)]
        graph: PathBuf,
        /// Treatment assignment, e.g. `A=1` (repeatable).
        #[arg(long)]
        treat: Vec<String>,
        /// Outcome vertex (repeatable).
        #[arg(long)]
        outcome: Vec<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Path-specific effect with a fixed baseline.
    PseFixed {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        treat: Vec<String>,
        /// Baseline assignment, e.g. `A=0` (repeatable, one per treatment).
        #[arg(long)]
        baseline: Vec<String>,
        #[arg(long)]
        outcome: Vec<String>,
        /// Active path, e.g. `A->M->Y` (repeatable).
        #[arg(long)]
        via: Vec<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Path-specific effect with a natural baseline.
    PseAvg {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        treat: Vec<String>,
        #[arg(long)]
        outcome: Vec<String>,
        #[arg(long)]
        via: Vec<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(output: &OutputArgs, text: String) -> anyhow::Result<()> {
    match &output.out {
        Some(path) => fs::write(path, text + "\n")
            .with_context(|| format!("writing {}", path.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn load_graph(path: &PathBuf) -> anyhow::Result<CausalGraph> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading graph file {}", path.display()))?;
    Ok(dsl::parse_graph(&text)?)
}

fn load_query(path: &PathBuf, g: &CausalGraph) -> anyhow::Result<Query> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading query file {}", path.display()))?;
    Ok(dsl::parse_query(&text)?.compile(g, paths::path_cap())?)
}

fn load_joint(path: &PathBuf) -> anyhow::Result<DiscreteJoint> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading distribution file {}", path.display()))?;
    let joint: DiscreteJoint = serde_json::from_str(&text)?;
    joint.validate()?;
    Ok(joint)
}

fn parse_assignment(s: &str) -> anyhow::Result<(String, usize)> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| anyhow!("expected NAME=VALUE, got `{s}`"))?;
    Ok((name.trim().to_string(), value.trim().parse()?))
}

fn parse_path(g: &CausalGraph, s: &str) -> anyhow::Result<Path> {
    let names: Vec<&str> = s.split("->").map(str::trim).collect();
    Ok(Path::from_names(g, &names)?)
}

/// Express any compiled query intervention as a path intervention.
fn as_path_intervention(
    g: &CausalGraph,
    q: &Query,
) -> anyhow::Result<intervene::PathIntervention> {
    let cap = paths::path_cap();
    Ok(match &q.intervention {
        Intervention::Path(iv) => iv.clone(),
        Intervention::Node(nu) => intervene::embed_node_as_path(g, nu, &q.outcomes, cap)?,
        Intervention::Edge(eta) => intervene::embed_edge_as_path(g, eta, &q.outcomes, cap)?,
    })
}

#[derive(Serialize)]
struct GateReport {
    name: &'static str,
    ok: bool,
    detail: String,
}

#[derive(Serialize)]
struct IdentifyReport {
    verdict: &'static str,
    functional_text: Option<String>,
    functional_latex: Option<String>,
    induced: Option<String>,
    gates: Vec<GateReport>,
    note: Option<String>,
}

fn identify_report(g: &CausalGraph, r: &IdentificationResult) -> IdentifyReport {
    IdentifyReport {
        verdict: r.verdict.as_str(),
        functional_text: r.functional.as_ref().map(Functional::render_text),
        functional_latex: r.functional.as_ref().map(Functional::render_latex),
        induced: r.induced.as_ref().map(|iv| match iv {
            Intervention::Node(nu) => format!("do {}", nu.render(g)),
            Intervention::Edge(eta) => format!("edge {}", eta.render(g)),
            Intervention::Path(piv) => format!("path {}", piv.render(g)),
        }),
        gates: r
            .gates
            .iter()
            .map(|gate| GateReport {
                name: gate.name,
                ok: gate.evidence.ok,
                detail: gate.evidence.detail.clone(),
            })
            .collect(),
        note: r.note.clone(),
    }
}

fn render_identify(output: &OutputArgs, report: &IdentifyReport) -> anyhow::Result<String> {
    Ok(match output.format {
        Format::Json => serde_json::to_string_pretty(report)?,
        Format::Latex => report
            .functional_latex
            .clone()
            .unwrap_or_else(|| report.verdict.to_string()),
        Format::Text => {
            let mut lines = vec![format!("verdict: {}", report.verdict)];
            if let Some(f) = &report.functional_text {
                lines.push(format!("functional: {f}"));
            }
            if let Some(iv) = &report.induced {
                lines.push(format!("induced: {iv}"));
            }
            for gate in &report.gates {
                let status = if gate.ok { "pass" } else { "fail" };
                let detail = if gate.detail.is_empty() {
                    String::new()
                } else {
                    format!(" ({})", gate.detail)
                };
                lines.push(format!("gate {}: {status}{detail}", gate.name));
            }
            if let Some(note) = &report.note {
                lines.push(format!("note: {note}"));
            }
            lines.join("\n")
        }
    })
}

fn run(cmd: Cmd) -> anyhow::Result<ExitCode> {
    match cmd {
        Cmd::Identify { graph, query, admg, output } => {
            let g = load_graph(&graph)?;
            let q = load_query(&query, &g)?;
            if admg {
                return run_identify_admg(&g, &q, &output);
            }
            let alpha = as_path_intervention(&g, &q)?;
            let r = identify::identify(&g, &q.outcomes, &alpha, paths::path_cap())?;
            let report = identify_report(&g, &r);
            emit(&output, render_identify(&output, &report)?)?;
            Ok(if r.verdict == Verdict::NotIdentifiedMwm {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        Cmd::Translate { target } => run_translate(target),
        Cmd::Evaluate { graph, query, dist, output } => {
            let g = load_graph(&graph)?;
            let q = load_query(&query, &g)?;
            let joint = load_joint(&dist)?;
            let alpha = as_path_intervention(&g, &q)?;
            let r = identify::identify(&g, &q.outcomes, &alpha, paths::path_cap())?;
            let report = identify_report(&g, &r);
            match &r.functional {
                Some(f) => {
                    let table = f.evaluate_table(&joint)?;
                    #[derive(Serialize)]
                    struct EvalReport {
                        verdict: &'static str,
                        functional_text: Option<String>,
                        result: DiscreteJoint,
                    }
                    let eval = EvalReport {
                        verdict: report.verdict,
                        functional_text: report.functional_text.clone(),
                        result: table,
                    };
                    let text = match output.format {
                        Format::Json => serde_json::to_string_pretty(&eval)?,
                        _ => {
                            let mut lines = vec![
                                format!("verdict: {}", eval.verdict),
                                format!(
                                    "functional: {}",
                                    eval.functional_text.as_deref().unwrap_or("")
                                ),
                            ];
                            for idx in 0..eval.result.table.len() {
                                let states = eval.result.decode(idx);
                                let pairs: Vec<String> = eval
                                    .result
                                    .variables
                                    .iter()
                                    .zip(&states)
                                    .map(|(v, s)| format!("{}={s}", v.name))
                                    .collect();
                                lines.push(format!(
                                    "p({}) = {:.12}",
                                    pairs.join(","),
                                    eval.result.table[idx]
                                ));
                            }
                            lines.join("\n")
                        }
                    };
                    emit(&output, text)?;
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    emit(&output, render_identify(&output, &report)?)?;
                    Ok(ExitCode::from(1))
                }
            }
        }
        Cmd::OracleCheck { graph, query, seeds, output } => {
            let g = load_graph(&graph)?;
            let q = load_query(&query, &g)?;
            run_oracle_check(&g, &q, seeds, &output)
        }
        Cmd::Witness { shape, chain, output } => {
            let shape = match shape {
                ShapeArg::SingleEdge => WitnessShape::SingleEdge,
                ShapeArg::Fork => WitnessShape::Fork,
            };
            let chain = match &chain {
                Some(s) => {
                    let (a, b) = s
                        .split_once(',')
                        .ok_or_else(|| anyhow!("expected `LEN,LEN`, got `{s}`"))?;
                    Some((a.trim().parse()?, b.trim().parse()?))
                }
                None => None,
            };
            let w = oracle::witness_pair(shape, chain)?;
            #[derive(Serialize)]
            struct WitnessOut {
                shape: &'static str,
                target_outcomes: Vec<String>,
                target_intervention: String,
                observational_gap: f64,
                node_intervention_gap: f64,
                target_tv: f64,
                cross_world_tv: Option<f64>,
                model1: ModelSpec,
                model2: ModelSpec,
            }
            let g = &w.model1.graph;
            let report = WitnessOut {
                shape: match w.shape {
                    WitnessShape::SingleEdge => "single-edge",
                    WitnessShape::Fork => "fork",
                },
                target_outcomes: w.target.0.iter().map(|&v| g.name(v).to_string()).collect(),
                target_intervention: match &w.target.1 {
                    Intervention::Node(nu) => format!("do {}", nu.render(g)),
                    Intervention::Edge(eta) => format!("edge {}", eta.render(g)),
                    Intervention::Path(piv) => format!("path {}", piv.render(g)),
                },
                observational_gap: w.report.observational_gap,
                node_intervention_gap: w.report.node_intervention_gap,
                target_tv: w.report.target_tv,
                cross_world_tv: w.report.cross_world_tv,
                model1: ModelSpec::from_model(&w.model1),
                model2: ModelSpec::from_model(&w.model2),
            };
            emit(&output, serde_json::to_string_pretty(&report)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Swig { graph, query, output } => {
            let g = load_graph(&graph)?;
            let q = load_query(&query, &g)?;
            let split = match &q.intervention {
                Intervention::Node(nu) => intervene::build_swig(&g, nu)?,
                Intervention::Edge(eta) => intervene::build_shatter(&g, eta)?,
                Intervention::Path(_) => {
                    bail!("split graphs are defined for vertex and edge interventions only")
                }
            };
            #[derive(Serialize)]
            struct SwigOut {
                graph: dsl::GraphSpec,
                origin: Vec<String>,
            }
            let report = SwigOut {
                graph: dsl::GraphSpec::from_graph(&split.graph),
                origin: (0..split.graph.n())
                    .map(|v| g.name(split.origin[v]).to_string())
                    .collect(),
            };
            let text = match output.format {
                Format::Json => serde_json::to_string_pretty(&report)?,
                _ => {
                    let sg = &split.graph;
                    let mut lines = vec![format!(
                        "nodes: {}",
                        (0..sg.n()).map(|v| sg.name(v)).collect::<Vec<_>>().join(" ")
                    )];
                    for &(a, b) in sg.directed_edges() {
                        lines.push(format!("{} -> {}", sg.name(a), sg.name(b)));
                    }
                    lines.join("\n")
                }
            };
            emit(&output, text)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Estimate { dist, a, a_prime, data, output } => {
            let joint = load_joint(&dist)?;
            let y_states = joint.variables[joint.var_index("Y")?].states;
            let y_values: Vec<f64> = (0..y_states).map(|s| s as f64).collect();
            let law = MediationLaw::new(joint, ("C", "A", "M", "Y"), y_values.clone())?;
            let comps = law.components();
            let phi = estimation::phi(&law, a, a_prime);
            let phi_same = estimation::phi(&law, a, a);
            let eif_mean = law.expectation(|u| estimation::eif(&law, &comps, a, a_prime, u))?;
            let solved = estimation::robust_solve(&law, &comps, a, a_prime)?;
            let empirical = match &data {
                Some(path) => {
                    let units = read_units(path, &y_values)?;
                    Some(estimation::empirical_estimate(&units, &comps, a, a_prime)?)
                }
                None => None,
            };
            #[derive(Serialize)]
            struct EstimateOut {
                a: usize,
                a_prime: usize,
                phi: f64,
                phi_same_arm: f64,
                eif_mean: f64,
                robust_solution: f64,
                empirical_estimate: Option<f64>,
            }
            let report = EstimateOut {
                a,
                a_prime,
                phi,
                phi_same_arm: phi_same,
                eif_mean,
                robust_solution: solved,
                empirical_estimate: empirical,
            };
            let text = match output.format {
                Format::Json => serde_json::to_string_pretty(&report)?,
                _ => format!(
                    "phi({a},{a_prime}) = {phi:.12}\nphi({a},{a}) = {phi_same:.12}\neif mean = {eif_mean:.3e}\nrobust solution = {solved:.12}{}",
                    report
                        .empirical_estimate
                        .map(|e| format!("\nempirical estimate = {e:.12}"))
                        .unwrap_or_default()
                ),
            };
            emit(&output, text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_identify_admg(g: &CausalGraph, q: &Query, output: &OutputArgs) -> anyhow::Result<ExitCode> {
    let nu = match &q.intervention {
        Intervention::Node(nu) => nu.clone(),
        _ => bail!("the district functional applies to vertex interventions (`do` statements) only"),
    };
    match identify::g_functional_admg(g, &q.outcomes, nu.assignments()) {
        Ok(f) => {
            let report = IdentifyReport {
                verdict: "IDENTIFIED",
                functional_text: Some(f.render_text()),
                functional_latex: Some(f.render_latex()),
                induced: Some(format!("do {}", nu.render(g))),
                gates: vec![GateReport {
                    name: "district conditions",
                    ok: true,
                    detail: String::new(),
                }],
                note: None,
            };
            emit(output, render_identify(output, &report)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Err(Error::ConditionsFail(msg)) => {
            let report = IdentifyReport {
                verdict: "NOT_IDENTIFIED",
                functional_text: None,
                functional_latex: None,
                induced: None,
                gates: vec![GateReport {
                    name: "district conditions",
                    ok: false,
                    detail: msg,
                }],
                note: None,
            };
            emit(output, render_identify(output, &report)?)?;
            Ok(ExitCode::from(1))
        }
        Err(e) => Err(e.into()),
    }
}

fn run_translate(target: TranslateCmd) -> anyhow::Result<ExitCode> {
    let cap = paths::path_cap();
    match target {
        TranslateCmd::Ett { graph, treat, outcome, output } => {
            let g = load_graph(&graph)?;
            let mut treatments = Vec::new();
            for t in &treat {
                let (name, value) = parse_assignment(t)?;
                treatments.push((g.index_of(&name)?, value));
            }
            let outcomes: Vec<usize> = outcome
                .iter()
                .map(|n| g.index_of(n))
                .collect::<Result<_, _>>()?;
            let (iv, response) = causalid::targets::ett_query(&g, &treatments, &outcomes, cap)?;
            emit(&output, dsl::render_path_query(&g, &response, &iv).trim_end().to_string())?;
            Ok(ExitCode::SUCCESS)
        }
        TranslateCmd::PseFixed { graph, treat, baseline, outcome, via, output } => {
            let g = load_graph(&graph)?;
            let mut treatments = Vec::new();
            for t in &treat {
                let (name, active) = parse_assignment(t)?;
                let v = g.index_of(&name)?;
                let base = baseline
                    .iter()
                    .map(|b| parse_assignment(b))
                    .collect::<anyhow::Result<Vec<_>>>()?
                    .into_iter()
                    .find(|(n, _)| *n == name)
                    .ok_or_else(|| anyhow!("no baseline value for treatment `{name}`"))?
                    .1;
                treatments.push((v, active, base));
            }
            let outcomes: Vec<usize> = outcome
                .iter()
                .map(|n| g.index_of(n))
                .collect::<Result<_, _>>()?;
            let beta: Vec<Path> = via
                .iter()
                .map(|s| parse_path(&g, s))
                .collect::<anyhow::Result<_>>()?;
            let iv = causalid::targets::pse_fixed(&g, &treatments, &outcomes, &beta, cap)?;
            emit(&output, dsl::render_path_query(&g, &outcomes, &iv).trim_end().to_string())?;
            Ok(ExitCode::SUCCESS)
        }
        TranslateCmd::PseAvg { graph, treat, outcome, via, output } => {
            let g = load_graph(&graph)?;
            let mut treatments = Vec::new();
            for t in &treat {
                let (name, active) = parse_assignment(t)?;
                treatments.push((g.index_of(&name)?, active));
            }
            let outcomes: Vec<usize> = outcome
                .iter()
                .map(|n| g.index_of(n))
                .collect::<Result<_, _>>()?;
            let beta: Vec<Path> = via
                .iter()
                .map(|s| parse_path(&g, s))
                .collect::<anyhow::Result<_>>()?;
            let iv = causalid::targets::pse_avg(&g, &treatments, &outcomes, &beta, cap)?;
            emit(&output, dsl::render_path_query(&g, &outcomes, &iv).trim_end().to_string())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_oracle_check(
    g: &CausalGraph,
    q: &Query,
    seeds: u64,
    output: &OutputArgs,
) -> anyhow::Result<ExitCode> {
    let alpha = as_path_intervention(g, q)?;
    let r = identify::identify(g, &q.outcomes, &alpha, paths::path_cap())?;
    let report = identify_report(g, &r);
    let functional = match &r.functional {
        Some(f) => f,
        None => {
            emit(output, render_identify(output, &report)?)?;
            return Ok(ExitCode::from(1));
        }
    };
    let out_names: Vec<&str> = functional_outputs(functional);
    let check = |semantics: NoiseSemantics| -> anyhow::Result<f64> {
        let mut max_diff: f64 = 0.0;
        for seed in 0..seeds {
            let m = oracle::random_model(g, seed, semantics)?;
            let joint = m.observational_joint()?;
            let predicted = functional.evaluate_table(&joint)?;
            let actual = m.response_distribution(&q.outcomes, &q.intervention, &[])?;
            let actual = actual.marginal(&out_names)?;
            max_diff = max_diff.max(predicted.max_abs_diff(&actual)?);
        }
        Ok(max_diff)
    };
    let max_mwm = check(NoiseSemantics::Mwm)?;
    let max_shared = if r.verdict == Verdict::IdentifiedSwm {
        Some(check(NoiseSemantics::Shared)?)
    } else {
        None
    };
    #[derive(Serialize)]
    struct OracleOut {
        verdict: &'static str,
        functional_text: Option<String>,
        seeds: u64,
        max_abs_diff_disjoint_noise: f64,
        max_abs_diff_shared_noise: Option<f64>,
        ok: bool,
    }
    let ok = max_mwm <= 1e-9 && max_shared.map_or(true, |d| d <= 1e-9);
    let out = OracleOut {
        verdict: report.verdict,
        functional_text: report.functional_text.clone(),
        seeds,
        max_abs_diff_disjoint_noise: max_mwm,
        max_abs_diff_shared_noise: max_shared,
        ok,
    };
    let text = match output.format {
        Format::Json => serde_json::to_string_pretty(&out)?,
        _ => format!(
            "verdict: {}\nseeds: {}\nmax |formula - oracle| (disjoint noise): {:.3e}{}\nok: {}",
            out.verdict,
            out.seeds,
            out.max_abs_diff_disjoint_noise,
            out.max_abs_diff_shared_noise
                .map(|d| format!("\nmax |formula - oracle| (shared noise): {d:.3e}"))
                .unwrap_or_default(),
            out.ok
        ),
    };
    emit(output, text)?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

/// Output variable names of a functional, in its canonical order.
fn functional_outputs(f: &Functional) -> Vec<&str> {
    f.vars
        .iter()
        .filter(|v| v.out)
        .map(|v| v.name.as_str())
        .collect()
}

fn read_units(path: &PathBuf, y_values: &[f64]) -> anyhow::Result<Vec<Unit>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading dataset {}", path.display()))?;
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| anyhow!("empty dataset"))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols != ["C", "A", "M", "Y"] {
        bail!("dataset header must be `C,A,M,Y`, got `{header}`");
    }
    let mut units = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            bail!("line {}: expected 4 fields, got {}", i + 2, fields.len());
        }
        let y_state: usize = fields[3].parse()?;
        let y = *y_values
            .get(y_state)
            .ok_or_else(|| anyhow!("line {}: outcome state {y_state} out of range", i + 2))?;
        units.push(Unit {
            c: fields[0].parse()?,
            a: fields[1].parse()?,
            m: fields[2].parse()?,
            y,
        });
    }
    Ok(units)
}
