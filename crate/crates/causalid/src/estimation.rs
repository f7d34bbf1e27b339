//! Estimation of the cross-arm mediation functional: plug-in evaluation, its
//! efficient influence function, and the triply robust estimator.

use crate::dist::DiscreteJoint;
use crate::error::{Error, Result};

/// A joint law over one covariate, one treatment, one mediator, and one
/// outcome variable, with a numeric coding of the outcome states.
#[derive(Debug, Clone)]
pub struct MediationLaw {
    joint: DiscreteJoint,
    c: usize,
    a: usize,
    m: usize,
    y: usize,
    y_values: Vec<f64>,
}

/// One observed unit: covariate, treatment, and mediator states plus the
/// numeric outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unit {
    pub c: usize,
    pub a: usize,
    pub m: usize,
    pub y: f64,
}

impl MediationLaw {
    pub fn new(
        joint: DiscreteJoint,
        names: (&str, &str, &str, &str),
        y_values: Vec<f64>,
    ) -> Result<MediationLaw> {
        let (cn, an, mn, yn) = names;
        let law = MediationLaw {
            c: joint.var_index(cn)?,
            a: joint.var_index(an)?,
            m: joint.var_index(mn)?,
            y: joint.var_index(yn)?,
            joint,
            y_values,
        };
        if law.y_values.len() != law.states().3 {
            return Err(Error::VariableMismatch(
                "outcome value coding does not match the outcome state count".into(),
            ));
        }
        Ok(law)
    }

    /// State counts of (covariate, treatment, mediator, outcome).
    pub fn states(&self) -> (usize, usize, usize, usize) {
        let s = |i: usize| self.joint.variables[i].states;
        (s(self.c), s(self.a), s(self.m), s(self.y))
    }

    pub fn p_c(&self, c: usize) -> f64 {
        self.joint.event_prob(&[(self.c, c)])
    }

    fn p_unit(&self, u: (usize, usize, usize, usize)) -> f64 {
        self.joint
            .event_prob(&[(self.c, u.0), (self.a, u.1), (self.m, u.2), (self.y, u.3)])
    }

    /// The exact nuisance components of this law.
    pub fn components(&self) -> Components {
        let (nc, na, nm, ny) = self.states();
        let mut outcome = vec![vec![vec![0.0; nm]; na]; nc];
        let mut mediator = vec![vec![vec![0.0; nm]; na]; nc];
        let mut propensity = vec![vec![0.0; na]; nc];
        for c in 0..nc {
            for a in 0..na {
                propensity[c][a] = self
                    .joint
                    .conditional(&[(self.a, a)], &[(self.c, c)]);
                for m in 0..nm {
                    mediator[c][a][m] = self
                        .joint
                        .conditional(&[(self.m, m)], &[(self.a, a), (self.c, c)]);
                    outcome[c][a][m] = (0..ny)
                        .map(|y| {
                            self.y_values[y]
                                * self.joint.conditional(
                                    &[(self.y, y)],
                                    &[(self.c, c), (self.a, a), (self.m, m)],
                                )
                        })
                        .sum();
                }
            }
        }
        Components { outcome, mediator, propensity }
    }

    /// Expectation of a unit statistic under this law.
    pub fn expectation<F>(&self, stat: F) -> Result<f64>
    where
        F: Fn(Unit) -> Result<f64>,
    {
        let (nc, na, nm, ny) = self.states();
        let mut total = 0.0;
        for c in 0..nc {
            for a in 0..na {
                for m in 0..nm {
                    for y in 0..ny {
                        let w = self.p_unit((c, a, m, y));
                        if w == 0.0 {
                            continue;
                        }
                        total += w * stat(Unit { c, a, m, y: self.y_values[y] })?;
                    }
                }
            }
        }
        Ok(total)
    }
}

/// Nuisance components: the outcome regression `E(Y | c, a, m)`, the mediator
/// law `p(m | a, c)`, and the propensity `p(a | c)`, each indexed `[c][a]` or
/// `[c][a][m]`.
#[derive(Debug, Clone)]
pub struct Components {
    pub outcome: Vec<Vec<Vec<f64>>>,
    pub mediator: Vec<Vec<Vec<f64>>>,
    pub propensity: Vec<Vec<f64>>,
}

impl Components {
    fn mediator_states(&self) -> usize {
        self.mediator[0][0].len()
    }

    /// The covariate-conditional cross-arm mean: the outcome regression on
    /// the receiving arm averaged over the mediator law of the sending arm.
    pub fn upsilon(&self, a: usize, a_prime: usize, c: usize) -> f64 {
        (0..self.mediator_states())
            .map(|m| self.outcome[c][a_prime][m] * self.mediator[c][a][m])
            .sum()
    }

    /// The uncentered influence statistic for one unit: the two inverse
    /// probability corrections plus the plug-in term.
    pub fn robust_statistic(&self, a: usize, a_prime: usize, u: Unit) -> Result<f64> {
        let mut total = self.upsilon(a, a_prime, u.c);
        if u.a == a_prime {
            let pi = self.propensity[u.c][a_prime];
            let med = self.mediator[u.c][a_prime][u.m];
            if pi <= 0.0 || med <= 0.0 {
                return Err(Error::PositivityViolation(format!(
                    "propensity {pi} or mediator mass {med} vanishes at covariate state {}",
                    u.c
                )));
            }
            total += self.mediator[u.c][a][u.m] / (pi * med)
                * (u.y - self.outcome[u.c][a_prime][u.m]);
        }
        if u.a == a {
            let pi = self.propensity[u.c][a];
            if pi <= 0.0 {
                return Err(Error::PositivityViolation(format!(
                    "propensity for the sending arm vanishes at covariate state {}",
                    u.c
                )));
            }
            total += (self.outcome[u.c][a_prime][u.m] - self.upsilon(a, a_prime, u.c)) / pi;
        }
        Ok(total)
    }
}

/// The plug-in cross-arm functional under the law's own components.
pub fn phi(law: &MediationLaw, a: usize, a_prime: usize) -> f64 {
    let comps = law.components();
    let (nc, _, _, _) = law.states();
    (0..nc)
        .map(|c| comps.upsilon(a, a_prime, c) * law.p_c(c))
        .sum()
}

/// The efficient influence function at one unit: the robust statistic
/// centered at the plug-in functional of the supplied components.
pub fn eif(
    law: &MediationLaw,
    comps: &Components,
    a: usize,
    a_prime: usize,
    u: Unit,
) -> Result<f64> {
    let (nc, _, _, _) = law.states();
    let center: f64 = (0..nc)
        .map(|c| comps.upsilon(a, a_prime, c) * law.p_c(c))
        .sum();
    Ok(comps.robust_statistic(a, a_prime, u)? - center)
}

/// Expectation of the uncentered influence statistic under the law: equals
/// the true functional whenever at least two of the three supplied components
/// are correct.
pub fn robust_solve(
    law: &MediationLaw,
    comps: &Components,
    a: usize,
    a_prime: usize,
) -> Result<f64> {
    law.expectation(|u| comps.robust_statistic(a, a_prime, u))
}

/// Sample average of the uncentered influence statistic.
pub fn empirical_estimate(
    units: &[Unit],
    comps: &Components,
    a: usize,
    a_prime: usize,
) -> Result<f64> {
    if units.is_empty() {
        return Err(Error::EmptyData);
    }
    let mut total = 0.0;
    for &u in units {
        total += comps.robust_statistic(a, a_prime, u)?;
    }
    Ok(total / units.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_law() -> MediationLaw {
        // Fixed strictly positive joint over binary C, A, M, Y.
        let raw: Vec<f64> = (0..16).map(|i| ((i * 7) % 11 + 3) as f64).collect();
        let total: f64 = raw.iter().sum();
        let joint = DiscreteJoint::new(
            vec![("C".into(), 2), ("A".into(), 2), ("M".into(), 2), ("Y".into(), 2)],
            raw.into_iter().map(|x| x / total).collect(),
        )
        .unwrap();
        MediationLaw::new(joint, ("C", "A", "M", "Y"), vec![0.0, 1.0]).unwrap()
    }

    #[test]
    fn same_arm_phi_is_adjusted_mean() {
        let law = example_law();
        let comps = law.components();
        // phi(a, a) collapses to the covariate-adjusted outcome mean.
        for a in 0..2 {
            let direct: f64 = (0..2)
                .map(|c| {
                    law.p_c(c)
                        * (0..2)
                            .map(|m| comps.outcome[c][a][m] * comps.mediator[c][a][m])
                            .sum::<f64>()
                })
                .sum();
            assert!((phi(&law, a, a) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn eif_has_mean_zero_at_truth() {
        let law = example_law();
        let comps = law.components();
        for (a, ap) in [(0, 1), (1, 0), (0, 0), (1, 1)] {
            let mean = law.expectation(|u| eif(&law, &comps, a, ap, u)).unwrap();
            assert!(mean.abs() < 1e-12, "mean {mean} for arms ({a},{ap})");
        }
    }

    #[test]
    fn triple_robustness() {
        let law = example_law();
        let truth = phi(&law, 0, 1);
        // Perturb exactly one component at a time; the solved value must
        // still hit the truth.
        let perturb_outcome = |c: &mut Components| {
            for plane in &mut c.outcome {
                for row in plane {
                    for v in row {
                        *v = 0.3 * *v + 0.2;
                    }
                }
            }
        };
        let perturb_mediator = |c: &mut Components| {
            for plane in &mut c.mediator {
                for row in plane {
                    row[0] = 0.5 * row[0] + 0.2;
                    row[1] = 1.0 - row[0];
                }
            }
        };
        let perturb_propensity = |c: &mut Components| {
            for row in &mut c.propensity {
                row[0] = 0.5 * row[0] + 0.25;
                row[1] = 1.0 - row[0];
            }
        };
        let cases: Vec<Box<dyn Fn(&mut Components)>> = vec![
            Box::new(perturb_outcome),
            Box::new(perturb_mediator),
            Box::new(perturb_propensity),
        ];
        for (i, case) in cases.iter().enumerate() {
            let mut comps = law.components();
            case(&mut comps);
            let solved = robust_solve(&law, &comps, 0, 1).unwrap();
            assert!(
                (solved - truth).abs() < 1e-12,
                "case {i}: {solved} vs {truth}"
            );
        }
        // Two wrong components break the estimator generically.
        let mut comps = law.components();
        perturb_outcome(&mut comps);
        perturb_mediator(&mut comps);
        let solved = robust_solve(&law, &comps, 0, 1).unwrap();
        assert!((solved - truth).abs() > 1e-6);
    }

    #[test]
    fn empirical_estimate_matches_expectation_on_exhaustive_sample() {
        let law = example_law();
        let comps = law.components();
        // A weighted exhaustive sample reproduces the law expectation; here
        // an unweighted uniform sample over all cells instead matches the
        // expectation under the uniform law.
        let mut units = Vec::new();
        for c in 0..2 {
            for a in 0..2 {
                for m in 0..2 {
                    for y in 0..2 {
                        units.push(Unit { c, a, m, y: y as f64 });
                    }
                }
            }
        }
        let avg = empirical_estimate(&units, &comps, 0, 1).unwrap();
        let manual: f64 = units
            .iter()
            .map(|&u| comps.robust_statistic(0, 1, u).unwrap())
            .sum::<f64>()
            / units.len() as f64;
        assert!((avg - manual).abs() < 1e-12);
        assert!(empirical_estimate(&[], &comps, 0, 1).is_err());
    }

    #[test]
    fn positivity_violation_detected() {
        let mut comps = example_law().components();
        comps.propensity[0][1] = 0.0;
        comps.propensity[0][0] = 1.0;
        let unit = Unit { c: 0, a: 1, m: 0, y: 1.0 };
        match comps.robust_statistic(0, 1, unit) {
            Err(Error::PositivityViolation(_)) => {}
            other => panic!("expected a positivity error, got {other:?}"),
        }
    }
}
