//! Fourier–Motzkin elimination.

use std::collections::HashSet;

use crate::ratio::Ratio;

use super::linear::{LinExpr, LinIneq, Var};

fn canonical(ineq: &LinIneq) -> LinIneq {
    if ineq.expr.is_constant() {
        let c = &ineq.expr.constant;
        let unit = if c.is_zero() {
            Ratio::zero()
        } else if c.is_positive() {
            Ratio::one()
        } else {
            -Ratio::one()
        };
        LinIneq::new(LinExpr::constant(unit), String::new())
    } else {
        LinIneq::new(ineq.normalized().expr, String::new())
    }
}

fn dedupe(ineqs: Vec<LinIneq>) -> Vec<LinIneq> {
    let mut seen = HashSet::new();
    ineqs.into_iter().filter(|i| seen.insert(i.expr.to_string())).collect()
}

/// Projects `var` out of the system.
///
/// Constant inequalities that always hold are dropped unless nothing else
/// remains.
pub fn fm_eliminate(system: &[LinIneq], var: Var) -> Vec<LinIneq> {
    let mut keep = Vec::new();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for ineq in system {
        let c = ineq.coefficient(var);
        if c.is_positive() {
            pos.push((c, ineq));
        } else if c.is_negative() {
            neg.push((c, ineq));
        } else {
            keep.push(canonical(ineq));
        }
    }
    for (cp, p) in &pos {
        for (cn, n) in &neg {
            let mut e = p.expr.scaled(&cn.abs());
            e.add_scaled(&n.expr, cp);
            keep.push(canonical(&LinIneq::new(e, String::new())));
        }
    }
    let out = dedupe(keep);
    if out.iter().any(|i| !i.is_trivially_true()) {
        out.into_iter().filter(|i| !i.is_trivially_true()).collect()
    } else {
        out
    }
}

/// Feasibility by eliminating every variable.
pub fn fm_feasible(system: &[LinIneq]) -> bool {
    let mut current: Vec<LinIneq> = dedupe(system.iter().map(canonical).collect());
    loop {
        if current.iter().any(|i| i.expr.is_constant() && i.expr.constant.is_negative()) {
            return false;
        }
        let mut vars: Vec<Var> = current.iter().flat_map(|i| i.vars()).collect();
        vars.sort();
        vars.dedup();
        let Some(&var) = vars.iter().min_by_key(|v| {
            let p = current.iter().filter(|i| i.coefficient(**v).is_positive()).count();
            let n = current.iter().filter(|i| i.coefficient(**v).is_negative()).count();
            p * n
        }) else {
            return true;
        };
        current = fm_eliminate(&current, var);
    }
}
