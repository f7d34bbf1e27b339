//! Directed-path machinery: enumeration, properness, the funnel operator,
//! relevant paths, and live subsets.

use crate::error::{Error, Result};
use crate::graph::CausalGraph;

/// Default cap on enumerated paths; override with the `CAUSALID_MAX_PATHS`
/// environment variable (read by [`path_cap`]).
pub const DEFAULT_PATH_CAP: usize = 10_000;

/// The active path-enumeration cap.
pub fn path_cap() -> usize {
    std::env::var("CAUSALID_MAX_PATHS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_PATH_CAP)
}

/// A directed path: at least two distinct vertices, consecutive pairs joined
/// by directed edges of the owning graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path(pub Vec<usize>);

impl Path {
    /// Validate the vertex sequence against `g` and build a path.
    pub fn new(g: &CausalGraph, vertices: Vec<usize>) -> Result<Path> {
        let render = |vs: &[usize]| {
            vs.iter()
                .map(|&v| g.name(v).to_string())
                .collect::<Vec<_>>()
                .join("->")
        };
        if vertices.len() < 2 {
            return Err(Error::BadPath(
                render(&vertices),
                "a path needs at least two vertices".into(),
            ));
        }
        for w in vertices.windows(2) {
            if !g.has_directed_edge(w[0], w[1]) {
                return Err(Error::BadPath(
                    render(&vertices),
                    format!("missing edge {} -> {}", g.name(w[0]), g.name(w[1])),
                ));
            }
        }
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != vertices.len() {
            return Err(Error::BadPath(render(&vertices), "repeated vertex".into()));
        }
        Ok(Path(vertices))
    }

    /// Build a path from vertex names.
    pub fn from_names(g: &CausalGraph, names: &[&str]) -> Result<Path> {
        Path::new(g, g.indices_of(names)?)
    }

    pub fn source(&self) -> usize {
        self.0[0]
    }

    pub fn sink(&self) -> usize {
        *self.0.last().unwrap()
    }

    pub fn len_edges(&self) -> usize {
        self.0.len() - 1
    }

    /// First edge of the path.
    pub fn first_edge(&self) -> (usize, usize) {
        (self.0[0], self.0[1])
    }

    /// True iff `self` is a prefix subpath of `other` (shared source,
    /// `other` at least as long, equal on the overlap).
    pub fn is_prefix_of(&self, other: &Path) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    /// True iff `self` is a suffix subpath of `other`.
    pub fn is_suffix_of(&self, other: &Path) -> bool {
        other.0.len() >= self.0.len() && other.0[other.0.len() - self.0.len()..] == self.0[..]
    }

    /// True iff `self` occurs inside `other` as a consecutive subsequence.
    pub fn is_subpath_of(&self, other: &Path) -> bool {
        if self.0.len() > other.0.len() {
            return false;
        }
        other
            .0
            .windows(self.0.len())
            .any(|w| w == self.0.as_slice())
    }

    /// Positions at which `self` starts inside `other`.
    pub fn occurrences_in(&self, other: &Path) -> Vec<usize> {
        if self.0.len() > other.0.len() {
            return Vec::new();
        }
        (0..=other.0.len() - self.0.len())
            .filter(|&i| other.0[i..i + self.0.len()] == self.0[..])
            .collect()
    }

    /// Render as `W->A->Y` using graph names.
    pub fn render(&self, g: &CausalGraph) -> String {
        self.0
            .iter()
            .map(|&v| g.name(v).to_string())
            .collect::<Vec<_>>()
            .join("->")
    }
}

/// True iff no member of `paths` is a prefix subpath of another member.
pub fn is_proper(paths: &[Path]) -> bool {
    for (i, p) in paths.iter().enumerate() {
        for (j, q) in paths.iter().enumerate() {
            if i != j && p.is_prefix_of(q) {
                return false;
            }
        }
    }
    true
}

/// Check properness, reporting the offending pair on failure.
pub fn ensure_proper(g: &CausalGraph, paths: &[Path]) -> Result<()> {
    for (i, p) in paths.iter().enumerate() {
        for (j, q) in paths.iter().enumerate() {
            if i != j && p.is_prefix_of(q) {
                return Err(Error::NotProper(p.render(g), q.render(g)));
            }
        }
    }
    Ok(())
}

/// All directed paths from `sources` to `sinks` whose interior avoids
/// `forbidden_interior`, in lexicographic order on vertex sequences.
pub fn enumerate_paths(
    g: &CausalGraph,
    sources: &[usize],
    sinks: &[usize],
    forbidden_interior: &[usize],
    cap: usize,
) -> Result<Vec<Path>> {
    let n = g.n();
    for &v in sources.iter().chain(sinks).chain(forbidden_interior) {
        if v >= n {
            return Err(Error::UnknownVertex(format!("#{v}")));
        }
    }
    let mut is_sink = vec![false; n];
    for &v in sinks {
        is_sink[v] = true;
    }
    let mut forbidden = vec![false; n];
    for &v in forbidden_interior {
        forbidden[v] = true;
    }
    let mut out = Vec::new();
    let mut stack = Vec::new();
    let mut on_path = vec![false; n];
    let mut srcs: Vec<usize> = sources.to_vec();
    srcs.sort_unstable();
    srcs.dedup();
    for &s in &srcs {
        stack.push(s);
        on_path[s] = true;
        dfs(g, &mut stack, &mut on_path, &is_sink, &forbidden, cap, &mut out)?;
        on_path[s] = false;
        stack.pop();
    }
    out.sort();
    Ok(out)
}

fn dfs(
    g: &CausalGraph,
    stack: &mut Vec<usize>,
    on_path: &mut Vec<bool>,
    is_sink: &[bool],
    forbidden: &[bool],
    cap: usize,
    out: &mut Vec<Path>,
) -> Result<()> {
    let v = *stack.last().unwrap();
    for &c in g.children(v) {
        if on_path[c] {
            continue;
        }
        stack.push(c);
        if is_sink[c] && stack.len() >= 2 {
            if out.len() >= cap {
                return Err(Error::Capacity(format!("more than {cap} paths enumerated")));
            }
            out.push(Path(stack.clone()));
        }
        if !is_sink[c] && !forbidden[c] {
            on_path[c] = true;
            dfs(g, stack, on_path, is_sink, forbidden, cap, out)?;
            on_path[c] = false;
        }
        stack.pop();
    }
    Ok(())
}

/// Redirect a proper path set through the terminal edge `(w, y)`: paths
/// ending in the suffix `(w, y)` are truncated by one vertex (dropped if
/// nothing but the bare source remains), paths passing through `w` without
/// that suffix are removed, and all other paths, including paths ending at
/// `w`, are kept.
pub fn funnel(g: &CausalGraph, paths: &[Path], edge: (usize, usize)) -> Result<Vec<Path>> {
    let (w, y) = edge;
    if !g.has_directed_edge(w, y) {
        return Err(Error::UnknownEdge(g.name(w).to_string(), g.name(y).to_string()));
    }
    let mut out = Vec::new();
    for p in paths {
        let k = p.0.len();
        if k >= 2 && p.0[k - 2] == w && p.0[k - 1] == y {
            if k >= 3 {
                out.push(Path(p.0[..k - 1].to_vec()));
            }
        } else if p.0[..k - 1].contains(&w) {
            // dropped: passes through `w` along a different outgoing edge
        } else {
            out.push(p.clone());
        }
    }
    out.sort();
    Ok(out)
}

/// All directed paths with sink in `y` that contain no member of `alpha` as a
/// subpath except possibly as a prefix.
pub fn relevant_paths(
    g: &CausalGraph,
    y: &[usize],
    alpha: &[Path],
    cap: usize,
) -> Result<Vec<Path>> {
    let all_sources: Vec<usize> = (0..g.n()).collect();
    let candidates = enumerate_paths(g, &all_sources, y, &[], cap)?;
    Ok(candidates
        .into_iter()
        .filter(|beta| {
            alpha.iter().all(|a| {
                a.occurrences_in(beta)
                    .iter()
                    .all(|&pos| pos == 0 && a.is_prefix_of(beta))
            })
        })
        .collect())
}

/// Members of `alpha` that prefix some path relevant for `y` given `alpha`
/// (the paths whose sources can actually move the response).
pub fn live_subset(g: &CausalGraph, y: &[usize], alpha: &[Path], cap: usize) -> Result<Vec<Path>> {
    let rel = relevant_paths(g, y, alpha, cap)?;
    Ok(alpha
        .iter()
        .filter(|a| rel.iter().any(|r| a.is_prefix_of(r)))
        .cloned()
        .collect())
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
    fn enumerate_basic() {
        let g = triangle();
        let a = g.index_of("A").unwrap();
        let y = g.index_of("Y").unwrap();
        let got = enumerate_paths(&g, &[a], &[y], &[], 100).unwrap();
        assert_eq!(got, vec![p(&g, &["A", "M", "Y"]), p(&g, &["A", "Y"])]);

        let chain = CausalGraph::dag(&["A", "B", "C"], &[("A", "B"), ("B", "C")]).unwrap();
        assert!(enumerate_paths(&chain, &[0], &[0], &[], 100).unwrap().is_empty());
        assert!(enumerate_paths(&chain, &[0], &[2], &[1], 100).unwrap().is_empty());
    }

    #[test]
    fn properness() {
        let g = triangle();
        assert!(is_proper(&[p(&g, &["W", "A", "M", "Y"])]));
        assert!(!is_proper(&[p(&g, &["W", "A"]), p(&g, &["W", "A", "Y"])]));
        assert!(is_proper(&[p(&g, &["A", "Y"]), p(&g, &["A", "M"]), p(&g, &["W", "A"])]));
    }

    #[test]
    fn funnel_cases() {
        let g = triangle();
        let m = g.index_of("M").unwrap();
        let y = g.index_of("Y").unwrap();
        let a = g.index_of("A").unwrap();
        let w = g.index_of("W").unwrap();
        let got = funnel(&g, &[p(&g, &["W", "A", "M", "Y"])], (m, y)).unwrap();
        assert_eq!(got, vec![p(&g, &["W", "A", "M"])]);

        // Paths not mentioning the edge source are unchanged.
        let got = funnel(&g, &[p(&g, &["A", "Y"])], (m, y)).unwrap();
        assert_eq!(got, vec![p(&g, &["A", "Y"])]);

        // Passing through the source without the suffix: removed.
        let got = funnel(&g, &[p(&g, &["W", "M", "Y"])], (a, y)).unwrap();
        assert_eq!(got, vec![p(&g, &["W", "M", "Y"])]);
        let got = funnel(&g, &[p(&g, &["W", "A", "M"])], (a, y)).unwrap();
        assert!(got.is_empty());

        // Ending at the source: kept, since it assigns the source's value.
        let got = funnel(&g, &[p(&g, &["W", "A"])], (a, y)).unwrap();
        assert_eq!(got, vec![p(&g, &["W", "A"])]);

        // Truncating a single edge leaves a bare vertex, which is dropped.
        let got = funnel(&g, &[p(&g, &["A", "Y"])], (a, y)).unwrap();
        assert!(got.is_empty());

        let _ = w;
    }

    #[test]
    fn relevant_paths_example() {
        let g = triangle();
        let y = g.index_of("Y").unwrap();
        let alpha = vec![p(&g, &["W", "A", "M", "Y"])];
        let rel = relevant_paths(&g, &[y], &alpha, 1000).unwrap();
        let expect: Vec<Path> = vec![
            p(&g, &["A", "M", "Y"]),
            p(&g, &["A", "Y"]),
            p(&g, &["M", "Y"]),
            p(&g, &["W", "A", "M", "Y"]),
            p(&g, &["W", "A", "Y"]),
            p(&g, &["W", "M", "Y"]),
        ];
        let mut rel_sorted = rel.clone();
        rel_sorted.sort();
        let mut expect_sorted = expect.clone();
        expect_sorted.sort();
        assert_eq!(rel_sorted, expect_sorted);

        // Empty alpha: all directed paths into Y.
        let rel = relevant_paths(&g, &[y], &[], 1000).unwrap();
        assert_eq!(rel.len(), 6);
    }

    #[test]
    fn live_subset_dead_edge() {
        // A -> Y -> Z -> R with A also confounding-style edge into Z is not
        // needed; a plain chain shows deadness: the edge (A,Y) cannot prefix
        // any relevant path once (Z,R) must not occur off-prefix.
        let g = CausalGraph::dag(
            &["A", "Y", "Z", "R"],
            &[("A", "Y"), ("Y", "Z"), ("Z", "R")],
        )
        .unwrap();
        let alpha = vec![p(&g, &["A", "Y"]), p(&g, &["Z", "R"])];
        let r = g.index_of("R").unwrap();
        let live = live_subset(&g, &[r], &alpha, 1000).unwrap();
        assert_eq!(live, vec![p(&g, &["Z", "R"])]);

        // Idempotence.
        let live2 = live_subset(&g, &[r], &live, 1000).unwrap();
        assert_eq!(live, live2);
    }
}
