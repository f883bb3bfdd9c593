//! Deciding `system ⇒ t ≥ a·x + b` with checkable certificates.
//!
//! A minimum of `c·x` over `{x : aⱼ·x + kⱼ ≥ 0}` is found through the dual
//! `min Σ kⱼ yⱼ` subject to `Σ yⱼ aⱼ = c`, `y ≥ 0`; its optimal `y` are the
//! multipliers. Witness points come from a primal feasibility problem.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::ratio::Ratio;

use super::linear::{BoundLine, LinExpr, LinIneq, Var};
use super::simplex::{solve, LpResult};
use super::BoundsError;

/// The result of a minimization that is not bounded below, or its value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extent {
    Finite(Ratio),
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Minimum {
    /// `value` is attained at `point`; `multipliers` (one per inequality)
    /// combine the system into `objective − value`.
    Finite { value: Ratio, point: BTreeMap<Var, Ratio>, multipliers: Vec<Ratio> },
    Unbounded,
}

/// A nonnegative combination of the system equal to the line's slack
/// `t − (a·x + b)` minus a nonnegative constant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub line: BoundLine,
    pub system: Vec<LinIneq>,
    pub multipliers: Vec<Ratio>,
    pub slack: Ratio,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Certificate {
    /// Re-checks the certificate using only exact arithmetic on its own data.
    pub fn verify(&self) -> Result<(), String> {
        if self.multipliers.len() != self.system.len() {
            return Err(format!(
                "{} multipliers for {} inequalities",
                self.multipliers.len(),
                self.system.len()
            ));
        }
        if let Some(i) = self.multipliers.iter().position(Ratio::is_negative) {
            return Err(format!("multiplier {i} is negative"));
        }
        if self.slack.is_negative() {
            return Err("slack is negative".into());
        }
        let mut combo = LinExpr::constant(self.slack.clone());
        for (y, ineq) in self.multipliers.iter().zip(&self.system) {
            combo.add_scaled(&ineq.expr, y);
        }
        let target = self.line.slack_expr();
        if combo != target {
            return Err(format!("combination gives `{combo}`, expected `{target}`"));
        }
        Ok(())
    }

    /// Indices and values of the nonzero multipliers.
    pub fn support(&self) -> Vec<(usize, &Ratio)> {
        self.multipliers.iter().enumerate().filter(|(_, y)| !y.is_zero()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Certificate, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// A feasible point of the system at which the line fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    pub line: BoundLine,
    pub point: BTreeMap<Var, Ratio>,
    /// `t − (a·x + b)` at the point; negative.
    pub gap: Ratio,
}

impl Refutation {
    pub fn verify(&self, system: &[LinIneq]) -> Result<(), String> {
        if let Some(bad) = system.iter().find(|i| !i.holds_at(&self.point)) {
            return Err(format!("witness violates `{bad}`"));
        }
        let gap = self.line.slack_expr().eval(&self.point);
        if gap != self.gap {
            return Err(format!("recorded gap {} but found {gap}", self.gap));
        }
        if !gap.is_negative() {
            return Err("witness satisfies the line".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Implied(Certificate),
    Refuted(Refutation),
}

impl Verdict {
    pub fn is_implied(&self) -> bool {
        matches!(self, Verdict::Implied(_))
    }
}

fn variables<'a>(ineqs: impl IntoIterator<Item = &'a LinExpr>) -> Vec<Var> {
    let mut vars = BTreeSet::new();
    for e in ineqs {
        vars.extend(e.coefficients.keys().copied());
    }
    vars.into_iter().collect()
}

/// Any point satisfying every inequality, or `None`.
pub fn feasible_point(system: &[LinIneq]) -> Option<BTreeMap<Var, Ratio>> {
    let vars = variables(system.iter().map(|i| &i.expr));
    let n = vars.len();
    let m = system.len();
    // columns: u (n), w (n), surplus (m); x = u − w
    let mut a = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    for (j, ineq) in system.iter().enumerate() {
        let mut row = vec![Ratio::zero(); 2 * n + m];
        for (idx, v) in vars.iter().enumerate() {
            let c = ineq.coefficient(*v);
            if !c.is_zero() {
                row[n + idx] = -&c;
                row[idx] = c;
            }
        }
        row[2 * n + j] = -Ratio::one();
        a.push(row);
        b.push(-ineq.constant().clone());
    }
    match solve(&a, &b, &vec![Ratio::zero(); 2 * n + m]) {
        LpResult::Optimal { point, .. } => Some(
            vars.iter()
                .enumerate()
                .map(|(idx, v)| (*v, &point[idx] - &point[n + idx]))
                .collect(),
        ),
        _ => None,
    }
}

/// Minimum of `objective` over the system.
pub fn minimize(system: &[LinIneq], objective: &LinExpr) -> Result<Minimum, BoundsError> {
    if system.is_empty() {
        return Err(BoundsError::EmptySystem);
    }
    let vars = variables(system.iter().map(|i| &i.expr).chain(std::iter::once(objective)));
    let a: Vec<Vec<Ratio>> = vars
        .iter()
        .map(|v| system.iter().map(|i| i.coefficient(*v)).collect())
        .collect();
    let b: Vec<Ratio> = vars.iter().map(|v| objective.coefficient(*v)).collect();
    let cost: Vec<Ratio> = system.iter().map(|i| i.constant().clone()).collect();
    match solve(&a, &b, &cost) {
        LpResult::Optimal { value: dual, point: y } => {
            let value = &objective.constant - &dual;
            let mut pinned = system.to_vec();
            pinned.push(LinIneq::new(
                LinExpr::constant(value.clone()) - objective.clone(),
                "objective<=min",
            ));
            let point = feasible_point(&pinned).ok_or(BoundsError::InfeasibleSystem)?;
            Ok(Minimum::Finite { value, point, multipliers: y })
        }
        LpResult::Unbounded => Err(BoundsError::InfeasibleSystem),
        LpResult::Infeasible => match feasible_point(system) {
            Some(_) => Ok(Minimum::Unbounded),
            None => Err(BoundsError::InfeasibleSystem),
        },
    }
}

/// Decides whether `system ∪ extra` implies the line.
pub fn implies(system: &[LinIneq], line: &BoundLine, extra: &[LinIneq]) -> Result<Verdict, BoundsError> {
    let full: Vec<LinIneq> = system.iter().chain(extra).cloned().collect();
    let slack = line.slack_expr();
    match minimize(&full, &slack)? {
        Minimum::Finite { value, point, multipliers } => {
            if value.is_negative() {
                Ok(Verdict::Refuted(Refutation { line: line.clone(), point, gap: value }))
            } else {
                Ok(Verdict::Implied(Certificate { line: line.clone(), system: full, multipliers, slack: value, note: None }))
            }
        }
        Minimum::Unbounded => {
            let mut deep = full;
            deep.push(LinIneq::new(LinExpr::constant(-Ratio::one()) - slack.clone(), "line<=-1"));
            let point = feasible_point(&deep).ok_or(BoundsError::InfeasibleSystem)?;
            let gap = slack.eval(&point);
            Ok(Verdict::Refuted(Refutation { line: line.clone(), point, gap }))
        }
    }
}

/// Minimum of `t` with γ fixed.
pub fn min_t(system: &[LinIneq], gamma: &Ratio) -> Result<Extent, BoundsError> {
    if system.is_empty() {
        return Err(BoundsError::EmptySystem);
    }
    let g = LinExpr::var(Var::G);
    let mut pinned = system.to_vec();
    pinned.push(LinIneq::new(g.clone().plus_const(-gamma.clone()), "gamma>=value"));
    pinned.push(LinIneq::new(LinExpr::constant(gamma.clone()) - g, "gamma<=value"));
    match minimize(&pinned, &LinExpr::var(Var::T))? {
        Minimum::Finite { value, .. } => Ok(Extent::Finite(value)),
        Minimum::Unbounded => Ok(Extent::Unbounded),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::families::{NamedSystem, Family, build_system};
    use crate::bounds::known_lines;
    use crate::ratio::q;

    fn t_ge_zero() -> Vec<LinIneq> {
        vec![LinIneq::new(LinExpr::var(Var::T), "t>=0")]
    }

    #[test]
    fn trivial_validity_has_slack_one() {
        let line = BoundLine::gamma(Ratio::zero(), q(-1, 1));
        match implies(&t_ge_zero(), &line, &[]).unwrap() {
            Verdict::Implied(c) => {
                assert_eq!(c.slack, Ratio::one());
                assert_eq!(c.multipliers, vec![Ratio::one()]);
                c.verify().unwrap();
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn trivial_refutation_at_zero() {
        let line = BoundLine::gamma(Ratio::zero(), Ratio::one());
        match implies(&t_ge_zero(), &line, &[]).unwrap() {
            Verdict::Refuted(r) => {
                assert_eq!(r.point.get(&Var::T), Some(&Ratio::zero()));
                assert_eq!(r.gap, q(-1, 1));
                r.verify(&t_ge_zero()).unwrap();
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unbounded_minimum_gives_a_witness() {
        // γ never appears in {t ≥ 0}, so t ≥ γ fails far out.
        let line = BoundLine::gamma(Ratio::one(), Ratio::zero());
        match implies(&t_ge_zero(), &line, &[]).unwrap() {
            Verdict::Refuted(r) => r.verify(&t_ge_zero()).unwrap(),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_system_is_an_error() {
        let bad = vec![
            LinIneq::new(LinExpr::var(Var::T).plus_const(q(-1, 1)), ""),
            LinIneq::new(LinExpr::var(Var::T).scaled(&q(-1, 1)), ""),
        ];
        let line = BoundLine::gamma(Ratio::zero(), Ratio::zero());
        assert_eq!(implies(&bad, &line, &[]), Err(BoundsError::InfeasibleSystem));
        assert_eq!(min_t(&bad, &Ratio::zero()), Err(BoundsError::InfeasibleSystem));
        assert_eq!(implies(&[], &line, &[]), Err(BoundsError::EmptySystem));
    }

    #[test]
    fn min_t_trivial() {
        assert_eq!(min_t(&t_ge_zero(), &q(7, 3)).unwrap(), Extent::Finite(Ratio::zero()));
    }

    #[test]
    fn known_lines_are_implied_and_verify() {
        for named in known_lines() {
            let verdict = implies(&named.system.build(), &named.line, &[]).unwrap();
            match verdict {
                Verdict::Implied(c) => c.verify().unwrap_or_else(|e| panic!("{}: {e}", named.name)),
                Verdict::Refuted(r) => panic!("{} refuted at {:?}", named.name, r.point),
            }
        }
    }

    #[test]
    fn tight_lines_have_zero_slack() {
        for name in ["gammAB", "cbA", "cbB", "rt", "rt-late"] {
            let named = crate::bounds::known_line(name).unwrap();
            let Verdict::Implied(c) = implies(&named.system.build(), &named.line, &[]).unwrap() else {
                panic!("{name}");
            };
            assert!(c.slack.is_zero(), "{name} slack {}", c.slack);
        }
    }

    #[test]
    fn part_a_tight_at_alg2_cache() {
        let sys = NamedSystem::PartAAB.build();
        assert_eq!(min_t(&sys, &q(23, 16)).unwrap(), Extent::Finite(q(73, 8)));
    }

    #[test]
    fn part_b_point_bound() {
        let sys = NamedSystem::PartB(5).build();
        // 5 − γ = 7/2
        assert_eq!(min_t(&sys, &q(3, 2)).unwrap(), Extent::Finite(q(78, 7)));
    }

    #[test]
    fn roundtrip_midpoint() {
        let sys = NamedSystem::RoundTrip.build();
        assert_eq!(min_t(&sys, &q(5, 2)).unwrap(), Extent::Finite(q(165, 8)));
    }

    #[test]
    fn steeper_roundtrip_line_is_refuted() {
        let sys = NamedSystem::RoundTrip.build();
        let line = BoundLine::gamma(Ratio::from(28), q(-375, 8));
        match implies(&sys, &line, &[]).unwrap() {
            Verdict::Refuted(r) => r.verify(&sys).unwrap(),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn doubled_sum_rtsi_over_constrains() {
        // Reading rtsi with 2Σeᵢ makes the steeper line provable, which the
        // round-trip construction contradicts.
        let mut sys = build_system(&[Family::Rtd0]).unwrap();
        sys.extend(build_system(&(2..=4).map(Family::Rtd1).collect::<Vec<_>>()).unwrap());
        sys.extend(build_system(&(4..=8).map(Family::Rtd2).collect::<Vec<_>>()).unwrap());
        for k in 9..=18u32 {
            let mut lhs = LinExpr::var(Var::G) + LinExpr::var(Var::R).scaled(&Ratio::from(2));
            lhs = lhs.plus_const(q(-1, 1));
            for i in 2..=k {
                lhs.add_term(Var::E(i), &Ratio::from(2));
            }
            sys.push(LinIneq::le(lhs, LinExpr::var(Var::T).scaled(&q(1, 2)), format!("rtsi2({k})")));
        }
        sys.extend(crate::bounds::ordering(18));
        let line = BoundLine::gamma(Ratio::from(28), q(-375, 8));
        assert!(implies(&sys, &line, &[]).unwrap().is_implied());
    }

    #[test]
    fn certificate_json_round_trip() {
        let named = crate::bounds::known_line("gammAB").unwrap();
        let Verdict::Implied(c) = implies(&named.system.build(), &named.line, &[]).unwrap() else {
            panic!();
        };
        let back = Certificate::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        back.verify().unwrap();
    }

    #[test]
    fn tampered_certificate_fails() {
        let named = crate::bounds::known_line("gammC").unwrap();
        let Verdict::Implied(mut c) = implies(&named.system.build(), &named.line, &[]).unwrap() else {
            panic!();
        };
        c.line.b = &c.line.b + Ratio::one();
        assert!(c.verify().is_err());
    }
}
