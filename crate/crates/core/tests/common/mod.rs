//! Strategies and property checks shared by the property and acceptance suites.

#![allow(dead_code)]

use std::collections::BTreeMap;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use circuit_core::bounds::{
    feasible_point, fm_eliminate, fm_feasible, implies, known_lines, min_t, BoundLine, Extent,
    LinExpr, LinIneq, Var, Verdict,
};
use circuit_core::rules::Preset;
use circuit_core::{format_schedule, parse_schedule, simulate, Action, Ratio, RuleSet, Schedule, SimReport};

pub const CASES: u32 = 256;

pub fn ratio(n: i64, d: i64) -> Ratio {
    Ratio::new(n, d)
}

pub fn action() -> impl Strategy<Value = Action> {
    prop_oneof![
        4 => (-60i64..=60, 1i64..=6)
            .prop_filter("nonzero", |(n, _)| *n != 0)
            .prop_map(|(n, d)| Action::Move(ratio(n, d))),
        2 => (1u32..=2).prop_map(Action::Take),
        1 => (1u32..=2).prop_map(Action::Dump),
        1 => Just(Action::Unseal),
        1 => Just(Action::Discard),
        1 => "[a-z][a-z0-9-]{0,6}".prop_map(Action::Mark),
    ]
}

pub fn schedule() -> impl Strategy<Value = Schedule> {
    ((0i64..8), prop::collection::vec(action(), 0..24))
        .prop_map(|(p, actions)| Schedule::new(ratio(p, 8), actions).unwrap())
}

pub fn preset() -> impl Strategy<Value = Preset> {
    prop_oneof![Just(Preset::Free), Just(Preset::Ants), Just(Preset::Dawn)]
}

pub fn vars(n: usize) -> Vec<Var> {
    [Var::T, Var::G, Var::R, Var::E(1), Var::E(2), Var::E(3)][..n].to_vec()
}

pub fn small_ratio() -> impl Strategy<Value = Ratio> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| ratio(n, d))
}

/// `count` random inequalities over `nvars` variables.
pub fn system(nvars: usize, count: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<LinIneq>> {
    prop::collection::vec((prop::collection::vec(small_ratio(), nvars), small_ratio()), count).prop_map(move |rows| {
        rows.into_iter()
            .map(|(coefs, c)| {
                let mut e = LinExpr::constant(c);
                for (v, a) in vars(nvars).into_iter().zip(coefs) {
                    e.add_term(v, &a);
                }
                LinIneq::new(e, "")
            })
            .collect()
    })
}

/// A random point and inequalities that hold there.
pub fn system_with_point(nvars: usize) -> impl Strategy<Value = (Vec<LinIneq>, BTreeMap<Var, Ratio>)> {
    (
        prop::collection::vec(small_ratio(), nvars),
        prop::collection::vec((prop::collection::vec(small_ratio(), nvars), 0i64..4), 1..=6),
    )
        .prop_map(move |(xs, rows)| {
            let point: BTreeMap<Var, Ratio> = vars(nvars).into_iter().zip(xs).collect();
            let system = rows
                .into_iter()
                .map(|(coefs, slack)| {
                    let mut e = LinExpr::zero();
                    for (v, a) in vars(nvars).into_iter().zip(coefs) {
                        e.add_term(v, &a);
                    }
                    let at = e.eval(&point);
                    LinIneq::new(e.plus_const(Ratio::from(slack) - at), "")
                })
                .collect();
            (system, point)
        })
}

pub fn ledger_balances(s: &Schedule, p: Preset) -> Result<(), TestCaseError> {
    let r = simulate(s, &RuleSet::preset(p));
    prop_assert!(r.ledger.balances(), "{:?}", r.ledger);
    prop_assert_eq!(&r.total_time, &(s.total_distance() / Ratio::from(20)));
    Ok(())
}

pub fn marks_follow_distance(s: &Schedule) -> Result<(), TestCaseError> {
    let r = simulate(s, &RuleSet::preset(Preset::Free));
    let mut walked = Ratio::zero();
    let mut expected = BTreeMap::new();
    for a in s.actions() {
        match a {
            Action::Move(d) => walked += d.abs(),
            Action::Mark(l) => {
                expected.insert(l.clone(), &walked / Ratio::from(20));
            }
            _ => {}
        }
    }
    prop_assert_eq!(r.marks, expected);
    Ok(())
}

pub fn mirror_symmetry(s: &Schedule, p: Preset) -> Result<(), TestCaseError> {
    let rules = RuleSet::preset(p);
    let a = simulate(s, &rules);
    let b = simulate(&s.mirrored(), &rules);
    prop_assert_eq!(a.feasible, b.feasible);
    prop_assert_eq!(&a.total_time, &b.total_time);
    prop_assert_eq!(&a.ledger, &b.ledger);
    let kinds = |r: &SimReport| r.violations.iter().map(|v| v.kind).collect::<Vec<_>>();
    prop_assert_eq!(kinds(&a), kinds(&b));
    Ok(())
}

pub fn scale_invariance(s: &Schedule, p: Preset, k: &Ratio) -> Result<(), TestCaseError> {
    let rules = RuleSet::preset(p);
    let mut scaled_rules = rules.clone();
    scaled_rules.circuit_miles = &rules.circuit_miles * k;
    scaled_rules.daily_miles = &rules.daily_miles * k;
    let a = simulate(s, &rules);
    let b = simulate(&s.scaled(k), &scaled_rules);
    prop_assert_eq!(a.feasible, b.feasible);
    prop_assert_eq!(&a.total_time, &b.total_time);
    prop_assert_eq!(&a.ledger, &b.ledger);
    prop_assert_eq!(a.circuit_covered, b.circuit_covered);
    Ok(())
}

pub fn parse_format_round_trip(s: &Schedule) -> Result<(), TestCaseError> {
    let text = format_schedule(s);
    let back = parse_schedule(&text).unwrap();
    prop_assert_eq!(&back, s);
    let noisy: String = text.lines().map(|l| format!("  {}   # note\n\n", l.replace(' ', "\t "))).collect();
    let again = parse_schedule(&noisy).unwrap();
    prop_assert_eq!(format_schedule(&again), text);
    Ok(())
}

pub fn fm_keeps_feasible_points(sys: &[LinIneq], point: &BTreeMap<Var, Ratio>, v: Var) -> Result<(), TestCaseError> {
    for ineq in &fm_eliminate(sys, v) {
        prop_assert!(ineq.coefficient(v).is_zero());
        prop_assert!(ineq.holds_at(point), "{} fails at {:?}", ineq, point);
    }
    Ok(())
}

/// Restricts a six-variable system to its first `nvars` variables.
pub fn restrict(seed: Vec<LinIneq>, nvars: usize) -> Vec<LinIneq> {
    seed.into_iter()
        .map(|i| {
            let mut e = LinExpr::constant(i.expr.constant.clone());
            for (v, c) in &i.expr.coefficients {
                if vars(nvars).contains(v) {
                    e.add_term(*v, c);
                }
            }
            LinIneq::new(e, "")
        })
        .collect()
}

pub fn fm_agrees_with_lp(sys: &[LinIneq]) -> Result<(), TestCaseError> {
    let lp = feasible_point(sys);
    if let Some(p) = &lp {
        prop_assert!(sys.iter().all(|i| i.holds_at(p)));
    }
    prop_assert_eq!(fm_feasible(sys), lp.is_some());
    Ok(())
}

pub fn certificate_soundness(sys: Vec<LinIneq>, point: &BTreeMap<Var, Ratio>, a: Ratio, b: Ratio) -> Result<(), TestCaseError> {
    let mut full = sys;
    full.push(LinIneq::new(LinExpr::var(Var::T).plus_const(-point[&Var::T].clone()), "t>=t0"));
    let line = BoundLine::gamma(a, b);
    match implies(&full, &line, &[]).unwrap() {
        Verdict::Implied(c) => {
            prop_assert!(c.verify().is_ok());
            if let Some((i, _)) = c.support().first().copied() {
                let mut bad = c.clone();
                bad.multipliers[i] = &bad.multipliers[i] + Ratio::one();
                prop_assert!(bad.verify().is_err());
            }
        }
        Verdict::Refuted(r) => prop_assert!(r.verify(&full).is_ok()),
    }
    Ok(())
}

pub fn line_below_envelope(idx: usize, gamma: &Ratio) -> Result<(), TestCaseError> {
    let named = &known_lines()[idx];
    match min_t(&named.system.build(), gamma) {
        Ok(Extent::Finite(t)) => prop_assert!(t >= named.line.eval(gamma), "{} at {}", named.name, gamma),
        Ok(Extent::Unbounded) => prop_assert!(false, "{} unbounded at {}", named.name, gamma),
        Err(_) => {}
    }
    Ok(())
}
