//! Symbolic sum-of-products functionals over discrete conditional
//! probability terms: construction, simplification, evaluation, rendering.

use crate::dist::DiscreteJoint;
use crate::error::{Error, Result};

/// A variable of the functional: either summed over or an output dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct FVar {
    pub name: String,
    pub states: usize,
    /// Topological rank of the underlying vertex; drives canonical ordering
    /// (most recent first everywhere).
    pub rank: usize,
    pub out: bool,
}

/// An externally fixed constant, bound to a state of a named variable.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeConst {
    pub symbol: String,
    pub var_name: String,
    pub rank: usize,
    pub value: usize,
}

/// One slot in a conditioning list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Atom {
    Var(usize),
    Const(usize),
}

/// One conditional-probability factor `p(children | given)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub children: Vec<usize>,
    pub given: Vec<Atom>,
}

/// A sum of products of conditional-probability terms: the non-output
/// variables are summed over their states.
#[derive(Debug, Clone, PartialEq)]
pub struct Functional {
    pub vars: Vec<FVar>,
    pub frees: Vec<FreeConst>,
    pub terms: Vec<Term>,
}

impl Functional {
    /// Put variables, term lists, and slot lists into the canonical order:
    /// descending rank (most recent first), constants after the variable of
    /// the same rank.
    pub fn normalize(&mut self) {
        let mut order: Vec<usize> = (0..self.vars.len()).collect();
        order.sort_by(|&a, &b| {
            self.vars[b]
                .rank
                .cmp(&self.vars[a].rank)
                .then_with(|| self.vars[a].name.cmp(&self.vars[b].name))
        });
        let mut remap = vec![0; self.vars.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        self.vars = order.iter().map(|&i| self.vars[i].clone()).collect();
        for t in &mut self.terms {
            for c in &mut t.children {
                *c = remap[*c];
            }
            for a in &mut t.given {
                if let Atom::Var(v) = a {
                    *v = remap[*v];
                }
            }
            t.children.sort_unstable();
            // Slot a constant just before the first variable of lower rank,
            // so conditioning lists interleave by recency.
            let frees = &self.frees;
            let vars = &self.vars;
            t.given.sort_by_key(|a| match *a {
                Atom::Var(v) => (2 * v + 1, String::new()),
                Atom::Const(c) => {
                    let rank = frees[c].rank;
                    let pos = vars
                        .iter()
                        .position(|fv| fv.rank < rank)
                        .unwrap_or(vars.len());
                    (2 * pos, frees[c].symbol.clone())
                }
            });
        }
        self.terms.sort_by_key(|t| t.children.first().copied().unwrap_or(usize::MAX));
    }

    fn is_normalized(&self) -> bool {
        let mut c = self.clone();
        c.normalize();
        c == *self
    }

    fn occurrences(&self, v: usize) -> usize {
        self.terms
            .iter()
            .map(|t| {
                t.children.iter().filter(|&&c| c == v).count()
                    + t.given
                        .iter()
                        .filter(|a| matches!(a, Atom::Var(u) if *u == v))
                        .count()
            })
            .sum()
    }

    fn remove_var(&mut self, v: usize) {
        self.vars.remove(v);
        for t in &mut self.terms {
            for c in &mut t.children {
                if *c > v {
                    *c -= 1;
                }
            }
            for a in &mut t.given {
                if let Atom::Var(u) = a {
                    if *u > v {
                        *u -= 1;
                    }
                }
            }
        }
    }

    /// Repeatedly apply three evaluation-preserving rewrites until none
    /// fires: drop a factor whose summed child appears nowhere else (it sums
    /// to one), merge chained factors with exactly nesting contexts into a
    /// joint factor, and marginalize a summed variable that appears only
    /// inside one joint factor's child list.
    pub fn simplify(&mut self) {
        self.normalize();
        loop {
            if self.rule_drop_unit_factor() || self.rule_chain_merge() || self.rule_marginalize() {
                self.normalize();
                continue;
            }
            break;
        }
    }

    fn rule_drop_unit_factor(&mut self) -> bool {
        for (ti, t) in self.terms.iter().enumerate() {
            if t.children.len() == 1 {
                let v = t.children[0];
                if !self.vars[v].out && self.occurrences(v) == 1 {
                    self.terms.remove(ti);
                    self.remove_var(v);
                    return true;
                }
            }
        }
        false
    }

    fn rule_chain_merge(&mut self) -> bool {
        let key = |atoms: &[Atom]| {
            let mut k: Vec<(usize, usize)> = atoms
                .iter()
                .map(|a| match *a {
                    Atom::Var(v) => (0, v),
                    Atom::Const(c) => (1, c),
                })
                .collect();
            k.sort_unstable();
            k
        };
        for i in 0..self.terms.len() {
            for j in 0..self.terms.len() {
                if i == j {
                    continue;
                }
                // given_j == children_i ++ given_i ?
                let mut ctx: Vec<Atom> = self.terms[i]
                    .children
                    .iter()
                    .map(|&c| Atom::Var(c))
                    .collect();
                ctx.extend_from_slice(&self.terms[i].given);
                if key(&ctx) == key(&self.terms[j].given) {
                    let mut children = self.terms[j].children.clone();
                    children.extend_from_slice(&self.terms[i].children);
                    let given = self.terms[i].given.clone();
                    let (a, b) = (i.min(j), i.max(j));
                    self.terms.remove(b);
                    self.terms.remove(a);
                    self.terms.push(Term { children, given });
                    return true;
                }
            }
        }
        false
    }

    fn rule_marginalize(&mut self) -> bool {
        for ti in 0..self.terms.len() {
            if self.terms[ti].children.len() < 2 {
                continue;
            }
            for ci in 0..self.terms[ti].children.len() {
                let v = self.terms[ti].children[ci];
                if !self.vars[v].out && self.occurrences(v) == 1 {
                    self.terms[ti].children.remove(ci);
                    self.remove_var(v);
                    return true;
                }
            }
        }
        false
    }

    /// Symbols for every variable and constant: constants keep their given
    /// symbols, output variables use their names, summed variables use the
    /// lowercased name primed until unique.
    fn symbols(&self) -> Vec<String> {
        let mut taken: Vec<String> = self.frees.iter().map(|f| f.symbol.clone()).collect();
        let mut out = Vec::new();
        for v in &self.vars {
            let mut s = if v.out {
                v.name.clone()
            } else {
                v.name.to_lowercase()
            };
            while taken.contains(&s) {
                s.push('\'');
            }
            taken.push(s.clone());
            out.push(s);
        }
        out
    }

    /// Deterministic text rendering, e.g. `sum_{m,w} p(y|m,a) p(m|a',w) p(w)`.
    pub fn render_text(&self) -> String {
        self.render(false)
    }

    /// LaTeX rendering, e.g. `\sum_{m,w} p(y \mid m, a) \, p(w)`.
    pub fn render_latex(&self) -> String {
        self.render(true)
    }

    fn render(&self, latex: bool) -> String {
        if !self.is_normalized() {
            let mut c = self.clone();
            c.normalize();
            return c.render(latex);
        }
        let syms = self.symbols();
        let atom = |a: &Atom| match *a {
            Atom::Var(v) => syms[v].clone(),
            Atom::Const(c) => self.frees[c].symbol.clone(),
        };
        let sums: Vec<String> = self
            .vars
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.out)
            .map(|(i, _)| syms[i].clone())
            .collect();
        let mut parts = Vec::new();
        if !sums.is_empty() {
            if latex {
                parts.push(format!("\\sum_{{{}}}", sums.join(",")));
            } else {
                parts.push(format!("sum_{{{}}}", sums.join(",")));
            }
        }
        let term_strings: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let children: Vec<String> = t.children.iter().map(|&c| syms[c].clone()).collect();
                let given: Vec<String> = t.given.iter().map(atom).collect();
                if given.is_empty() {
                    format!("p({})", children.join(","))
                } else if latex {
                    format!("p({} \\mid {})", children.join(","), given.join(","))
                } else {
                    format!("p({}|{})", children.join(","), given.join(","))
                }
            })
            .collect();
        if latex {
            parts.push(term_strings.join(" \\, "));
        } else {
            parts.push(term_strings.join(" "));
        }
        parts.join(" ")
    }

    /// Evaluate at one assignment of the output variables.
    pub fn evaluate(&self, joint: &DiscreteJoint, outs: &[(&str, usize)]) -> Result<f64> {
        let var_cols: Vec<usize> = self
            .vars
            .iter()
            .map(|v| joint.var_index(&v.name))
            .collect::<Result<_>>()?;
        let free_cols: Vec<usize> = self
            .frees
            .iter()
            .map(|f| joint.var_index(&f.var_name))
            .collect::<Result<_>>()?;
        let mut assignment = vec![0usize; self.vars.len()];
        let mut out_fixed = vec![false; self.vars.len()];
        for &(name, state) in outs {
            let i = self
                .vars
                .iter()
                .position(|v| v.out && v.name == name)
                .ok_or_else(|| Error::VariableMismatch(format!("no output variable `{name}`")))?;
            assignment[i] = state;
            out_fixed[i] = true;
        }
        for (i, v) in self.vars.iter().enumerate() {
            if v.out && !out_fixed[i] {
                return Err(Error::VariableMismatch(format!(
                    "output variable `{}` not bound",
                    v.name
                )));
            }
        }
        let sum_vars: Vec<usize> = (0..self.vars.len()).filter(|&i| !self.vars[i].out).collect();
        let mut total = 0.0;
        let mut counter = vec![0usize; sum_vars.len()];
        loop {
            for (k, &i) in sum_vars.iter().enumerate() {
                assignment[i] = counter[k];
            }
            let mut product = 1.0;
            for t in &self.terms {
                let child_event: Vec<(usize, usize)> = t
                    .children
                    .iter()
                    .map(|&c| (var_cols[c], assignment[c]))
                    .collect();
                let given_event: Vec<(usize, usize)> = t
                    .given
                    .iter()
                    .map(|a| match *a {
                        Atom::Var(v) => (var_cols[v], assignment[v]),
                        Atom::Const(c) => (free_cols[c], self.frees[c].value),
                    })
                    .collect();
                product *= joint.conditional(&child_event, &given_event);
                if product == 0.0 {
                    break;
                }
            }
            total += product;
            // Advance the mixed-radix counter.
            let mut k = sum_vars.len();
            loop {
                if k == 0 {
                    return Ok(total);
                }
                k -= 1;
                counter[k] += 1;
                if counter[k] < self.vars[sum_vars[k]].states {
                    break;
                }
                counter[k] = 0;
            }
        }
    }

    /// Evaluate over all output assignments, producing a table over the
    /// output variables in canonical order.
    pub fn evaluate_table(&self, joint: &DiscreteJoint) -> Result<DiscreteJoint> {
        let outs: Vec<(String, usize)> = self
            .vars
            .iter()
            .filter(|v| v.out)
            .map(|v| (v.name.clone(), v.states))
            .collect();
        let size: usize = outs.iter().map(|&(_, s)| s).product();
        let mut table = vec![0.0; size];
        for idx in 0..size {
            let mut rem = idx;
            let mut states = vec![0usize; outs.len()];
            for i in (0..outs.len()).rev() {
                states[i] = rem % outs[i].1;
                rem /= outs[i].1;
            }
            let bound: Vec<(&str, usize)> = outs
                .iter()
                .zip(&states)
                .map(|((n, _), &s)| (n.as_str(), s))
                .collect();
            table[idx] = self.evaluate(joint, &bound)?;
        }
        DiscreteJoint::new(outs, table)
    }
}
