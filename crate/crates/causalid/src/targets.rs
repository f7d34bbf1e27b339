//! Translation of named causal-inference targets into path interventions.

use crate::error::{Error, Result};
use crate::graph::CausalGraph;
use crate::intervene::{PathIntervention, Value};
use crate::paths::{self, Path};

/// All directed paths with a source in `treatments` and a sink in
/// `treatments` or `outcomes`, meeting that union only at their endpoints.
/// The result is always proper: interior vertices avoid all path sources, so
/// no member can extend another.
pub fn alpha_set(
    g: &CausalGraph,
    treatments: &[usize],
    outcomes: &[usize],
    cap: usize,
) -> Result<Vec<Path>> {
    let mut endpoint: Vec<usize> = treatments.iter().chain(outcomes).copied().collect();
    endpoint.sort_unstable();
    endpoint.dedup();
    paths::enumerate_paths(g, treatments, &endpoint, &endpoint, cap)
}

/// A treatment-on-the-treated query: the intervention holding the paths from
/// the treatments into the outcomes at the active values while paths between
/// treatments keep their natural values, together with the joint response
/// set (outcomes plus treatments) the query is about.
pub fn ett_query(
    g: &CausalGraph,
    treatments: &[(usize, usize)],
    outcomes: &[usize],
    cap: usize,
) -> Result<(PathIntervention, Vec<usize>)> {
    let treated: Vec<usize> = treatments.iter().map(|&(v, _)| v).collect();
    let alpha = alpha_set(g, &treated, outcomes, cap)?;
    let mut assignments = Vec::new();
    for p in alpha {
        let value = if treated.contains(&p.sink()) {
            Value::Natural
        } else {
            let s = treatments
                .iter()
                .find(|&&(v, _)| v == p.source())
                .map(|&(_, s)| s)
                .unwrap();
            Value::State(s)
        };
        assignments.push((p, value));
    }
    let iv = PathIntervention::new(g, assignments)?;
    let mut response: Vec<usize> = outcomes.to_vec();
    for &v in &treated {
        if !response.contains(&v) {
            response.push(v);
        }
    }
    Ok((iv, response))
}

/// A path-specific effect with a fixed baseline: the chosen paths carry the
/// active values, every other treatment-rooted path carries the baseline
/// value of its source.
pub fn pse_fixed(
    g: &CausalGraph,
    treatments: &[(usize, usize, usize)], // (vertex, active, baseline)
    outcomes: &[usize],
    beta: &[Path],
    cap: usize,
) -> Result<PathIntervention> {
    pse_build(g, treatments, outcomes, beta, cap, false)
}

/// A path-specific effect with an average (natural) baseline: the chosen
/// paths carry the active values, every other treatment-rooted path keeps
/// its natural value.
pub fn pse_avg(
    g: &CausalGraph,
    treatments: &[(usize, usize)], // (vertex, active)
    outcomes: &[usize],
    beta: &[Path],
    cap: usize,
) -> Result<PathIntervention> {
    let with_baseline: Vec<(usize, usize, usize)> = treatments
        .iter()
        .map(|&(v, a)| (v, a, usize::MAX))
        .collect();
    pse_build(g, &with_baseline, outcomes, beta, cap, true)
}

fn pse_build(
    g: &CausalGraph,
    treatments: &[(usize, usize, usize)],
    outcomes: &[usize],
    beta: &[Path],
    cap: usize,
    natural_baseline: bool,
) -> Result<PathIntervention> {
    let treated: Vec<usize> = treatments.iter().map(|&(v, _, _)| v).collect();
    let alpha = alpha_set(g, &treated, outcomes, cap)?;
    for b in beta {
        if !alpha.contains(b) {
            return Err(Error::Semantic(format!(
                "chosen path `{}` is not a treatment-rooted path of this query",
                b.render(g)
            )));
        }
    }
    let mut assignments = Vec::new();
    for p in alpha {
        let (_, active, baseline) = *treatments
            .iter()
            .find(|&&(v, _, _)| v == p.source())
            .unwrap();
        let value = if beta.contains(&p) {
            Value::State(active)
        } else if natural_baseline {
            Value::Natural
        } else {
            Value::State(baseline)
        };
        assignments.push((p, value));
    }
    PathIntervention::new(g, assignments)
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
    fn alpha_set_examples() {
        let g = triangle();
        let a = g.index_of("A").unwrap();
        let y = g.index_of("Y").unwrap();
        let got = alpha_set(&g, &[a], &[y], 1000).unwrap();
        assert_eq!(got, vec![p(&g, &["A", "M", "Y"]), p(&g, &["A", "Y"])]);

        let w = g.index_of("W").unwrap();
        let m = g.index_of("M").unwrap();
        let got = alpha_set(&g, &[w, m], &[y], 1000).unwrap();
        let mut expect = vec![
            p(&g, &["W", "A", "M"]),
            p(&g, &["W", "M"]),
            p(&g, &["M", "Y"]),
            p(&g, &["W", "A", "Y"]),
        ];
        expect.sort();
        assert_eq!(got, expect);

        // Properness.
        assert!(paths::is_proper(&got));

        // A parentless, childless treatment has no paths.
        let lone = CausalGraph::dag(&["V"], &[]).unwrap();
        assert!(alpha_set(&lone, &[0], &[0], 1000).unwrap().is_empty());
    }

    #[test]
    fn ett_assigns_natural_between_treatments() {
        let g = triangle();
        let w = g.index_of("W").unwrap();
        let m = g.index_of("M").unwrap();
        let y = g.index_of("Y").unwrap();
        let (iv, response) = ett_query(&g, &[(w, 1), (m, 1)], &[y], 1000).unwrap();
        assert_eq!(iv.value_of(&p(&g, &["W", "A", "M"])), Some(Value::Natural));
        assert_eq!(iv.value_of(&p(&g, &["W", "M"])), Some(Value::Natural));
        assert_eq!(iv.value_of(&p(&g, &["M", "Y"])), Some(Value::State(1)));
        assert_eq!(iv.value_of(&p(&g, &["W", "A", "Y"])), Some(Value::State(1)));
        assert_eq!(response, vec![y, w, m]);
    }

    #[test]
    fn pse_assignments() {
        let g = triangle();
        let a = g.index_of("A").unwrap();
        let y = g.index_of("Y").unwrap();
        let beta = vec![p(&g, &["A", "Y"])];
        let iv = pse_fixed(&g, &[(a, 1, 0)], &[y], &beta, 1000).unwrap();
        assert_eq!(iv.value_of(&p(&g, &["A", "Y"])), Some(Value::State(1)));
        assert_eq!(iv.value_of(&p(&g, &["A", "M", "Y"])), Some(Value::State(0)));

        let iv = pse_avg(&g, &[(a, 1)], &[y], &beta, 1000).unwrap();
        assert_eq!(iv.value_of(&p(&g, &["A", "M", "Y"])), Some(Value::Natural));

        // beta must be a treatment-rooted path.
        let bad = vec![p(&g, &["M", "Y"])];
        assert!(pse_fixed(&g, &[(a, 1, 0)], &[y], &bad, 1000).is_err());
    }
}
