//! Finite joint distributions stored as dense tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A joint distribution over named finite variables, row-major with the
/// first variable slowest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscreteJoint {
    pub variables: Vec<Variable>,
    pub table: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub states: usize,
}

impl DiscreteJoint {
    pub fn new(variables: Vec<(String, usize)>, table: Vec<f64>) -> Result<DiscreteJoint> {
        let variables: Vec<Variable> = variables
            .into_iter()
            .map(|(name, states)| Variable { name, states })
            .collect();
        let want: usize = variables.iter().map(|v| v.states).product();
        if table.len() != want {
            return Err(Error::VariableMismatch(format!(
                "table has {} entries, expected {}",
                table.len(),
                want
            )));
        }
        let joint = DiscreteJoint { variables, table };
        joint.validate()?;
        Ok(joint)
    }

    pub fn validate(&self) -> Result<()> {
        if self.table.iter().any(|&p| p < -1e-12 || !p.is_finite()) {
            return Err(Error::VariableMismatch("negative or non-finite mass".into()));
        }
        let total: f64 = self.table.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::VariableMismatch(format!(
                "table sums to {total}, expected 1"
            )));
        }
        Ok(())
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::VariableMismatch(format!("no variable `{name}`")))
    }

    /// Flat index of a full assignment (one state per variable, in order).
    pub fn offset(&self, assignment: &[usize]) -> usize {
        let mut idx = 0;
        for (v, &s) in self.variables.iter().zip(assignment) {
            debug_assert!(s < v.states);
            idx = idx * v.states + s;
        }
        idx
    }

    /// Decode a flat index into one state per variable.
    pub fn decode(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.variables.len()];
        for (i, v) in self.variables.iter().enumerate().rev() {
            out[i] = idx % v.states;
            idx /= v.states;
        }
        out
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn prob(&self, assignment: &[usize]) -> f64 {
        self.table[self.offset(assignment)]
    }

    /// Marginal over the listed variables, in the listed order.
    pub fn marginal(&self, names: &[&str]) -> Result<DiscreteJoint> {
        let keep: Vec<usize> = names
            .iter()
            .map(|&n| self.var_index(n))
            .collect::<Result<_>>()?;
        let vars: Vec<Variable> = keep.iter().map(|&i| self.variables[i].clone()).collect();
        let size: usize = vars.iter().map(|v| v.states).product();
        let mut table = vec![0.0; size];
        for idx in 0..self.table.len() {
            let full = self.decode(idx);
            let mut o = 0;
            for (k, &i) in keep.iter().enumerate() {
                o = o * vars[k].states + full[i];
            }
            table[o] += self.table[idx];
        }
        Ok(DiscreteJoint { variables: vars, table })
    }

    /// Probability of a partial assignment given by (variable index, state).
    pub fn event_prob(&self, event: &[(usize, usize)]) -> f64 {
        let mut total = 0.0;
        'outer: for idx in 0..self.table.len() {
            let full = self.decode(idx);
            for &(v, s) in event {
                if full[v] != s {
                    continue 'outer;
                }
            }
            total += self.table[idx];
        }
        total
    }

    /// Conditional probability of `child` states given `given`; zero-mass
    /// conditioning contexts yield 0.
    pub fn conditional(&self, child: &[(usize, usize)], given: &[(usize, usize)]) -> f64 {
        let denom = self.event_prob(given);
        if denom <= 0.0 {
            return 0.0;
        }
        let mut joint_event: Vec<(usize, usize)> = child.to_vec();
        joint_event.extend_from_slice(given);
        self.event_prob(&joint_event) / denom
    }

    /// Total variation distance; requires identical variable layouts.
    pub fn total_variation(&self, other: &DiscreteJoint) -> Result<f64> {
        if self.variables.len() != other.variables.len()
            || self
                .variables
                .iter()
                .zip(&other.variables)
                .any(|(a, b)| a.name != b.name || a.states != b.states)
        {
            return Err(Error::VariableMismatch(
                "total variation requires identical variable layouts".into(),
            ));
        }
        Ok(self
            .table
            .iter()
            .zip(&other.table)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            / 2.0)
    }

    /// Largest absolute entry-wise difference.
    pub fn max_abs_diff(&self, other: &DiscreteJoint) -> Result<f64> {
        if self.table.len() != other.table.len() {
            return Err(Error::VariableMismatch("table size mismatch".into()));
        }
        Ok(self
            .table
            .iter()
            .zip(&other.table)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform2x2() -> DiscreteJoint {
        DiscreteJoint::new(
            vec![("A".into(), 2), ("B".into(), 2)],
            vec![0.25; 4],
        )
        .unwrap()
    }

    #[test]
    fn marginal_and_conditional() {
        let j = DiscreteJoint::new(
            vec![("A".into(), 2), ("B".into(), 2)],
            vec![0.1, 0.2, 0.3, 0.4],
        )
        .unwrap();
        let m = j.marginal(&["B"]).unwrap();
        assert!((m.table[0] - 0.4).abs() < 1e-12);
        assert!((m.table[1] - 0.6).abs() < 1e-12);
        let c = j.conditional(&[(1, 1)], &[(0, 1)]);
        assert!((c - 0.4 / 0.7).abs() < 1e-12);
        // Zero-mass context yields 0.
        let z = DiscreteJoint::new(
            vec![("A".into(), 2), ("B".into(), 2)],
            vec![0.5, 0.5, 0.0, 0.0],
        )
        .unwrap();
        assert_eq!(z.conditional(&[(1, 0)], &[(0, 1)]), 0.0);
    }

    #[test]
    fn tv_distance() {
        let a = uniform2x2();
        let b = DiscreteJoint::new(
            vec![("A".into(), 2), ("B".into(), 2)],
            vec![0.5, 0.0, 0.0, 0.5],
        )
        .unwrap();
        assert!((a.total_variation(&b).unwrap() - 0.5).abs() < 1e-12);
    }
}
