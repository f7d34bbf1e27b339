//! Causal graphs: DAGs and mixed graphs with directed and bidirected edges,
//! plus the genealogical, separation, and district machinery.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// A causal graph over named vertices with finite state spaces.
///
/// Directed edges must be acyclic.  Bidirected edges (empty for a plain DAG)
/// encode hidden common causes.  Vertices may additionally be tagged as
/// fixed-with-value, which is used by split graphs; ordinary graphs have no
/// fixed vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct CausalGraph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    card: Vec<usize>,
    directed: Vec<(usize, usize)>,
    bidirected: Vec<(usize, usize)>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    spouses: Vec<Vec<usize>>,
    fixed: Vec<Option<usize>>,
    topo: Vec<usize>,
    rank: Vec<usize>,
}

impl CausalGraph {
    /// Build a validated graph from named vertices with explicit cardinalities.
    pub fn build(
        vertices: &[(&str, usize)],
        directed: &[(&str, &str)],
        bidirected: &[(&str, &str)],
    ) -> Result<Self> {
        let mut names = Vec::new();
        let mut index = HashMap::new();
        let mut card = Vec::new();
        for &(name, k) in vertices {
            if index.contains_key(name) {
                return Err(Error::DuplicateVertex(name.to_string()));
            }
            if k < 2 {
                return Err(Error::BadCardinality(name.to_string()));
            }
            index.insert(name.to_string(), names.len());
            names.push(name.to_string());
            card.push(k);
        }
        let look = |name: &str| -> Result<usize> {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::UnknownVertex(name.to_string()))
        };
        let mut dir = Vec::new();
        for &(a, b) in directed {
            let (i, j) = (look(a)?, look(b)?);
            if i == j {
                return Err(Error::SelfLoop(a.to_string()));
            }
            dir.push((i, j));
        }
        dir.sort_unstable();
        dir.dedup();
        let mut bi = Vec::new();
        for &(a, b) in bidirected {
            let (i, j) = (look(a)?, look(b)?);
            if i == j {
                return Err(Error::SelfLoop(a.to_string()));
            }
            bi.push((i.min(j), i.max(j)));
        }
        bi.sort_unstable();
        bi.dedup();
        Self::from_indexed(names, index, card, dir, bi, None)
    }

    /// Build a binary DAG; every vertex gets cardinality 2.
    pub fn dag(vertices: &[&str], edges: &[(&str, &str)]) -> Result<Self> {
        let vs: Vec<(&str, usize)> = vertices.iter().map(|&v| (v, 2)).collect();
        Self::build(&vs, edges, &[])
    }

    /// Assemble a graph from already-indexed parts (used by the split-graph
    /// builders); validates acyclicity like the public constructors.
    pub(crate) fn from_parts(
        names: Vec<String>,
        index: HashMap<String, usize>,
        card: Vec<usize>,
        directed: Vec<(usize, usize)>,
        bidirected: Vec<(usize, usize)>,
        fixed: Vec<Option<usize>>,
    ) -> Result<Self> {
        Self::from_indexed(names, index, card, directed, bidirected, Some(fixed))
    }

    fn from_indexed(
        names: Vec<String>,
        index: HashMap<String, usize>,
        card: Vec<usize>,
        directed: Vec<(usize, usize)>,
        bidirected: Vec<(usize, usize)>,
        fixed: Option<Vec<Option<usize>>>,
    ) -> Result<Self> {
        let n = names.len();
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        for &(i, j) in &directed {
            children[i].push(j);
            parents[j].push(i);
        }
        let mut spouses = vec![Vec::new(); n];
        for &(i, j) in &bidirected {
            spouses[i].push(j);
            spouses[j].push(i);
        }
        for list in parents.iter_mut().chain(children.iter_mut()).chain(spouses.iter_mut()) {
            list.sort_unstable();
        }
        // Kahn's algorithm; ties broken by declaration order for determinism.
        let mut indeg: Vec<usize> = (0..n).map(|v| parents[v].len()).collect();
        let mut topo = Vec::with_capacity(n);
        let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        while let Some(&v) = ready.iter().min() {
            ready.retain(|&u| u != v);
            topo.push(v);
            for &c in &children[v] {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    ready.push(c);
                }
            }
        }
        if topo.len() != n {
            let stuck = (0..n).find(|&v| indeg[v] > 0).unwrap();
            return Err(Error::Cycle(names[stuck].clone()));
        }
        let mut rank = vec![0; n];
        for (r, &v) in topo.iter().enumerate() {
            rank[v] = r;
        }
        let fixed = fixed.unwrap_or_else(|| vec![None; n]);
        Ok(CausalGraph {
            names,
            index,
            card,
            directed,
            bidirected,
            parents,
            children,
            spouses,
            fixed,
            topo,
            rank,
        })
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    /// Resolve a list of vertex names to indices.
    pub fn indices_of(&self, names: &[&str]) -> Result<Vec<usize>> {
        names.iter().map(|&s| self.index_of(s)).collect()
    }

    pub fn cardinality(&self, v: usize) -> usize {
        self.card[v]
    }

    pub fn parents(&self, v: usize) -> &[usize] {
        &self.parents[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn spouses(&self, v: usize) -> &[usize] {
        &self.spouses[v]
    }

    pub fn directed_edges(&self) -> &[(usize, usize)] {
        &self.directed
    }

    pub fn bidirected_edges(&self) -> &[(usize, usize)] {
        &self.bidirected
    }

    pub fn has_directed_edge(&self, a: usize, b: usize) -> bool {
        self.directed.binary_search(&(a, b)).is_ok()
    }

    pub fn is_dag(&self) -> bool {
        self.bidirected.is_empty()
    }

    /// Fixed value tag of a vertex (split graphs only); `None` means random.
    pub fn fixed_value(&self, v: usize) -> Option<usize> {
        self.fixed[v]
    }

    /// Vertices in a topological order of the directed edges.  Deterministic:
    /// among the vertices available at each step the one declared first wins.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// Position of `v` in the topological order.
    pub fn topo_rank(&self, v: usize) -> usize {
        self.rank[v]
    }

    /// Strict predecessors of `v` in the topological order, most recent first.
    pub fn predecessors(&self, v: usize) -> Vec<usize> {
        let r = self.rank[v];
        (0..r).rev().map(|i| self.topo[i]).collect()
    }

    /// Reflexive-transitive closure of `set` under directed parenthood,
    /// returned sorted by vertex index.
    pub fn ancestors(&self, set: &[usize]) -> Vec<usize> {
        self.closure(set, |v| &self.parents[v])
    }

    /// Reflexive-transitive closure of `set` under directed childhood.
    pub fn descendants(&self, set: &[usize]) -> Vec<usize> {
        self.closure(set, |v| &self.children[v])
    }

    fn closure<'a, F>(&'a self, set: &[usize], next: F) -> Vec<usize>
    where
        F: Fn(usize) -> &'a [usize],
    {
        let mut seen = vec![false; self.n()];
        let mut stack: Vec<usize> = set.to_vec();
        for &v in set {
            seen[v] = true;
        }
        while let Some(v) = stack.pop() {
            for &w in next(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        (0..self.n()).filter(|&v| seen[v]).collect()
    }

    /// Partition of the vertices into connected components of the
    /// bidirected-edge skeleton.  Each block is sorted; blocks are ordered by
    /// their smallest member.
    pub fn districts(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut cid = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let mut stack = vec![s];
            comp[s] = cid;
            while let Some(v) = stack.pop() {
                for &w in &self.spouses[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = cid;
                        stack.push(w);
                    }
                }
            }
            cid += 1;
        }
        let mut out = vec![Vec::new(); cid];
        for (v, &c) in comp.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    /// District (bidirected-connected block) containing `v`, sorted.
    pub fn district_of(&self, v: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n()];
        let mut stack = vec![v];
        seen[v] = true;
        while let Some(u) = stack.pop() {
            for &w in &self.spouses[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        (0..self.n()).filter(|&u| seen[u]).collect()
    }

    /// Induced subgraph on `keep` (both edge kinds restricted to kept
    /// endpoints); names and cardinalities preserved, indices remapped in
    /// declaration order.
    pub fn vertex_subgraph(&self, keep: &[usize]) -> Result<CausalGraph> {
        for &v in keep {
            if v >= self.n() {
                return Err(Error::UnknownVertex(format!("#{v}")));
            }
        }
        let mut keep_sorted: Vec<usize> = keep.to_vec();
        keep_sorted.sort_unstable();
        keep_sorted.dedup();
        let mut remap = vec![usize::MAX; self.n()];
        let mut names = Vec::new();
        let mut card = Vec::new();
        let mut fixed = Vec::new();
        let mut index = HashMap::new();
        for (new, &old) in keep_sorted.iter().enumerate() {
            remap[old] = new;
            index.insert(self.names[old].clone(), new);
            names.push(self.names[old].clone());
            card.push(self.card[old]);
            fixed.push(self.fixed[old]);
        }
        let directed = self
            .directed
            .iter()
            .filter(|&&(a, b)| remap[a] != usize::MAX && remap[b] != usize::MAX)
            .map(|&(a, b)| (remap[a], remap[b]))
            .collect();
        let bidirected = self
            .bidirected
            .iter()
            .filter(|&&(a, b)| remap[a] != usize::MAX && remap[b] != usize::MAX)
            .map(|&(a, b)| (remap[a], remap[b]))
            .collect();
        Self::from_indexed(names, index, card, directed, bidirected, Some(fixed))
    }

    /// Subgraph keeping all vertices but only the listed directed edges
    /// (bidirected edges are kept unchanged).
    pub fn edge_subgraph(&self, keep_directed: &[(usize, usize)]) -> Result<CausalGraph> {
        for &(a, b) in keep_directed {
            if !self.has_directed_edge(a, b) {
                return Err(Error::UnknownEdge(
                    self.names.get(a).cloned().unwrap_or_else(|| format!("#{a}")),
                    self.names.get(b).cloned().unwrap_or_else(|| format!("#{b}")),
                ));
            }
        }
        let mut directed: Vec<(usize, usize)> = keep_directed.to_vec();
        directed.sort_unstable();
        directed.dedup();
        Self::from_indexed(
            self.names.clone(),
            self.index.clone(),
            self.card.clone(),
            directed,
            self.bidirected.clone(),
            Some(self.fixed.clone()),
        )
    }

    /// Project a graph with hidden vertices onto `observed`: `V -> W` iff some
    /// directed path from `V` to `W` has all intermediates hidden; `V <-> W`
    /// iff some hidden vertex reaches both through all-hidden directed paths.
    /// Bidirected edges in the input are first canonicalized into fresh
    /// hidden common parents, so mixed graphs project correctly too.
    pub fn latent_project(&self, observed: &[usize]) -> Result<CausalGraph> {
        if !self.is_dag() {
            let mut names = self.names.clone();
            let mut index = self.index.clone();
            let mut card = self.card.clone();
            let mut directed = self.directed.clone();
            for (k, &(a, b)) in self.bidirected.iter().enumerate() {
                let h = names.len();
                let name = format!("__latent_{k}");
                index.insert(name.clone(), h);
                names.push(name);
                card.push(2);
                directed.push((h, a));
                directed.push((h, b));
            }
            directed.sort_unstable();
            let canonical = Self::from_indexed(names, index, card, directed, Vec::new(), None)?;
            return canonical.latent_project(observed);
        }
        let n = self.n();
        let mut is_obs = vec![false; n];
        for &v in observed {
            if v >= n {
                return Err(Error::UnknownVertex(format!("#{v}")));
            }
            is_obs[v] = true;
        }
        // reach[s] = observed vertices reachable from s via directed paths
        // whose intermediate vertices are all hidden.
        let reach = |s: usize| -> Vec<usize> {
            let mut seen = vec![false; n];
            let mut out = vec![false; n];
            let mut stack: Vec<usize> = self.children[s].to_vec();
            while let Some(v) = stack.pop() {
                if seen[v] {
                    continue;
                }
                seen[v] = true;
                if is_obs[v] {
                    out[v] = true;
                } else {
                    stack.extend(self.children[v].iter().copied());
                }
            }
            (0..n).filter(|&v| out[v]).collect()
        };
        let mut directed = Vec::new();
        let mut bidirected = Vec::new();
        for s in 0..n {
            let r = reach(s);
            if is_obs[s] {
                for &t in &r {
                    directed.push((s, t));
                }
            } else {
                for (i, &a) in r.iter().enumerate() {
                    for &b in &r[i + 1..] {
                        bidirected.push((a, b));
                    }
                }
            }
        }
        let mut keep: Vec<usize> = observed.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut remap = vec![usize::MAX; n];
        let mut names = Vec::new();
        let mut card = Vec::new();
        let mut index = HashMap::new();
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new;
            index.insert(self.names[old].clone(), new);
            names.push(self.names[old].clone());
            card.push(self.card[old]);
        }
        let mut directed: Vec<(usize, usize)> = directed
            .into_iter()
            .map(|(a, b)| (remap[a], remap[b]))
            .collect();
        directed.sort_unstable();
        directed.dedup();
        let mut bidirected: Vec<(usize, usize)> = bidirected
            .into_iter()
            .map(|(a, b)| {
                let (x, y) = (remap[a], remap[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        bidirected.sort_unstable();
        bidirected.dedup();
        Self::from_indexed(names, index, card, directed, bidirected, None)
    }

    /// Separation between `x` and `y` given `z`.
    ///
    /// Colliders are open iff they are directed ancestors of `z`; every other
    /// vertex blocks iff it is in `z` or is a fixed vertex.  Fixed vertices
    /// behave as always-conditioned constants: they block as non-colliders
    /// and never open a collider.
    pub fn d_separated(&self, x: &[usize], y: &[usize], z: &[usize]) -> Result<bool> {
        let n = self.n();
        for &v in x.iter().chain(y).chain(z) {
            if v >= n {
                return Err(Error::UnknownVertex(format!("#{v}")));
            }
        }
        let mut in_z = vec![false; n];
        for &v in z {
            in_z[v] = true;
        }
        let mut blocking = in_z.clone();
        for v in 0..n {
            if self.fixed[v].is_some() {
                blocking[v] = true;
            }
        }
        let mut open_collider = vec![false; n];
        for &v in &self.ancestors(z) {
            open_collider[v] = true;
        }
        let mut in_y = vec![false; n];
        for &v in y {
            in_y[v] = true;
        }
        // Incident edges as (neighbor, mark here, mark there); marks: false =
        // tail, true = arrowhead.
        let mut incident: Vec<Vec<(usize, bool, bool)>> = vec![Vec::new(); n];
        for &(a, b) in &self.directed {
            incident[a].push((b, false, true));
            incident[b].push((a, true, false));
        }
        for &(a, b) in &self.bidirected {
            incident[a].push((b, true, true));
            incident[b].push((a, true, true));
        }
        // Reachability over states (vertex, arrived-with-arrowhead?).
        let mut visited = vec![[false; 2]; n];
        let mut stack: Vec<(usize, bool)> = Vec::new();
        for &s in x {
            for &(w, _here, there) in &incident[s] {
                if in_y[w] {
                    return Ok(false);
                }
                if !visited[w][there as usize] {
                    visited[w][there as usize] = true;
                    stack.push((w, there));
                }
            }
        }
        while let Some((v, arrived_head)) = stack.pop() {
            for &(w, here, there) in &incident[v] {
                let collider = arrived_head && here;
                let pass = if collider {
                    open_collider[v]
                } else {
                    !blocking[v]
                };
                if !pass {
                    continue;
                }
                if in_y[w] {
                    return Ok(false);
                }
                if !visited[w][there as usize] {
                    visited[w][there as usize] = true;
                    stack.push((w, there));
                }
            }
        }
        Ok(true)
    }
}

/// A graph whose vertices are split into random and fixed copies of the
/// vertices of an original graph.
#[derive(Debug, Clone)]
pub struct SplitGraph {
    /// The split graph itself; fixed copies carry their value tag and have no
    /// incoming edges.
    pub graph: CausalGraph,
    /// For each split vertex, the index of the original vertex it came from.
    pub origin: Vec<usize>,
}

impl SplitGraph {
    /// Split vertices of `graph` originating from original vertex `v`.
    pub fn copies_of(&self, v: usize) -> Vec<usize> {
        (0..self.graph.n()).filter(|&s| self.origin[s] == v).collect()
    }

    /// The random copy of original vertex `v`.
    pub fn random_copy(&self, v: usize) -> usize {
        (0..self.graph.n())
            .find(|&s| self.origin[s] == v && self.graph.fixed_value(s).is_none())
            .expect("every original vertex has a random copy")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The running four-vertex example: W -> A, W -> M, A -> M, A -> Y, M -> Y.
    pub fn triangle() -> CausalGraph {
        CausalGraph::dag(
            &["W", "A", "M", "Y"],
            &[("W", "A"), ("W", "M"), ("A", "M"), ("A", "Y"), ("M", "Y")],
        )
        .unwrap()
    }

    #[test]
    fn build_rejects_cycles_and_duplicates() {
        assert!(matches!(
            CausalGraph::dag(&["A", "B"], &[("A", "B"), ("B", "A")]),
            Err(Error::Cycle(_))
        ));
        assert!(matches!(
            CausalGraph::dag(&["A", "A"], &[]),
            Err(Error::DuplicateVertex(_))
        ));
        assert!(matches!(
            CausalGraph::dag(&["A"], &[("A", "B")]),
            Err(Error::UnknownVertex(_))
        ));
        assert!(CausalGraph::dag(&["V"], &[]).is_ok());
    }

    #[test]
    fn topological_order_is_deterministic() {
        let g = triangle();
        let order: Vec<&str> = g.topological_order().iter().map(|&v| g.name(v)).collect();
        assert_eq!(order, vec!["W", "A", "M", "Y"]);
        let g = CausalGraph::dag(&["X", "Y", "Z"], &[]).unwrap();
        let order: Vec<&str> = g.topological_order().iter().map(|&v| g.name(v)).collect();
        assert_eq!(order, vec!["X", "Y", "Z"]);
        let g = CausalGraph::dag(&["A", "B", "C"], &[("A", "B"), ("B", "C")]).unwrap();
        let order: Vec<&str> = g.topological_order().iter().map(|&v| g.name(v)).collect();
        assert_eq!(order, vec!["A", "B", "C"]);
    }

    #[test]
    fn ancestors_basic() {
        let g = triangle();
        let y = g.index_of("Y").unwrap();
        assert_eq!(g.ancestors(&[y]), vec![0, 1, 2, 3]);
        assert_eq!(g.ancestors(&[]), Vec::<usize>::new());
        let w = g.index_of("W").unwrap();
        assert_eq!(g.ancestors(&[w]), vec![w]);
    }

    #[test]
    fn districts_partition() {
        let g = CausalGraph::build(
            &[("A", 2), ("M", 2), ("Y", 2)],
            &[("A", "M"), ("M", "Y")],
            &[("A", "Y")],
        )
        .unwrap();
        assert_eq!(g.districts(), vec![vec![0, 2], vec![1]]);
        let g = CausalGraph::build(&[("A", 2), ("B", 2), ("C", 2)], &[], &[("A", "B"), ("B", "C")])
            .unwrap();
        assert_eq!(g.districts(), vec![vec![0, 1, 2]]);
        let g = triangle();
        assert_eq!(g.districts().len(), 4);
    }

    #[test]
    fn latent_projection_hidden_mediator_and_confounder() {
        // H -> A, H -> Y, A -> M -> Y with H hidden.
        let g = CausalGraph::dag(
            &["H", "A", "M", "Y"],
            &[("H", "A"), ("H", "Y"), ("A", "M"), ("M", "Y")],
        )
        .unwrap();
        let obs = g.indices_of(&["A", "M", "Y"]).unwrap();
        let p = g.latent_project(&obs).unwrap();
        let a = p.index_of("A").unwrap();
        let m = p.index_of("M").unwrap();
        let y = p.index_of("Y").unwrap();
        assert_eq!(p.directed_edges(), &[(a, m), (m, y)]);
        assert_eq!(p.bidirected_edges(), &[(a, y)]);

        // Identity projection.
        let g = triangle();
        let all: Vec<usize> = (0..g.n()).collect();
        let p = g.latent_project(&all).unwrap();
        assert_eq!(p.directed_edges(), g.directed_edges());
        assert!(p.bidirected_edges().is_empty());

        // Pure hidden confounder.
        let g = CausalGraph::dag(&["H", "A", "B"], &[("H", "A"), ("H", "B")]).unwrap();
        let p = g.latent_project(&g.indices_of(&["A", "B"]).unwrap()).unwrap();
        assert!(p.directed_edges().is_empty());
        assert_eq!(p.bidirected_edges().len(), 1);
    }

    #[test]
    fn latent_projection_commutes() {
        // Projecting out H1 then H2 equals projecting out both at once, over
        // a family of small hidden DAGs.
        let g = CausalGraph::dag(
            &["H1", "H2", "A", "B", "C"],
            &[("H1", "A"), ("H1", "H2"), ("H2", "B"), ("H2", "C"), ("A", "B"), ("B", "C")],
        )
        .unwrap();
        let minus_h1 = g
            .latent_project(&g.indices_of(&["H2", "A", "B", "C"]).unwrap())
            .unwrap();
        let step = minus_h1
            .latent_project(&minus_h1.indices_of(&["A", "B", "C"]).unwrap())
            .unwrap();
        let both = g.latent_project(&g.indices_of(&["A", "B", "C"]).unwrap()).unwrap();
        assert_eq!(step.directed_edges(), both.directed_edges());
        assert_eq!(step.bidirected_edges(), both.bidirected_edges());
    }

    #[test]
    fn d_separation_basics() {
        let g = CausalGraph::dag(&["A", "B"], &[("A", "B")]).unwrap();
        assert!(!g.d_separated(&[0], &[1], &[]).unwrap());

        let g = CausalGraph::dag(&["A", "C", "B"], &[("A", "C"), ("B", "C")]).unwrap();
        let (a, c, b) = (0, 1, 2);
        assert!(g.d_separated(&[a], &[b], &[]).unwrap());
        assert!(!g.d_separated(&[a], &[b], &[c]).unwrap());

        // Chain blocked by the middle vertex.
        let g = CausalGraph::dag(&["A", "B", "C"], &[("A", "B"), ("B", "C")]).unwrap();
        assert!(!g.d_separated(&[0], &[2], &[]).unwrap());
        assert!(g.d_separated(&[0], &[2], &[1]).unwrap());

        // Collider opened by a descendant in the conditioning set.
        let g = CausalGraph::dag(
            &["A", "C", "B", "D"],
            &[("A", "C"), ("B", "C"), ("C", "D")],
        )
        .unwrap();
        assert!(!g.d_separated(&[0], &[2], &[3]).unwrap());
    }

    #[test]
    fn subgraphs() {
        let g = CausalGraph::build(
            &[("A", 2), ("M", 2), ("Y", 2)],
            &[("A", "M"), ("M", "Y")],
            &[("A", "Y")],
        )
        .unwrap();
        let keep = g.indices_of(&["M", "Y"]).unwrap();
        let sub = g.vertex_subgraph(&keep).unwrap();
        assert_eq!(sub.n(), 2);
        assert!(sub.bidirected_edges().is_empty());
        assert_eq!(sub.districts(), vec![vec![0], vec![1]]);

        let all = g.edge_subgraph(g.directed_edges()).unwrap();
        assert_eq!(all.directed_edges(), g.directed_edges());
        let none = g.edge_subgraph(&[]).unwrap();
        assert!(none.directed_edges().is_empty());
        assert_eq!(none.n(), 3);
    }
}
