//! Exact timeline simulation of a schedule under a rule set.
//!
//! The walker eats continuously: one ration per `daily_miles` walked. When the
//! open ration runs out mid-walk and a sealed box is in hand, that box is
//! unsealed on the spot at no cost. Nights are instantaneous; at every integer
//! clock value strictly inside the walk the ants (when active) take whatever
//! is left of the open ration.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::ratio::{MilePos, Ratio};
use crate::rules::RuleSet;
use crate::schedule::{Action, Schedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// Walking start is not at dawn although the rules require it.
    PhaseNotDawn,
    InvalidRules,
    Starvation,
    EmptyCache,
    NothingToDump,
    NothingToUnseal,
    /// Unsealing a new box while the open one still has food in it.
    OpenRationPresent,
    DiscardForbidden,
    CapacityExceeded,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::PhaseNotDawn => "phase-not-dawn",
            ViolationKind::InvalidRules => "invalid-rules",
            ViolationKind::Starvation => "starvation",
            ViolationKind::EmptyCache => "empty-cache",
            ViolationKind::NothingToDump => "nothing-to-dump",
            ViolationKind::NothingToUnseal => "nothing-to-unseal",
            ViolationKind::OpenRationPresent => "open-ration-present",
            ViolationKind::DiscardForbidden => "discard-forbidden",
            ViolationKind::CapacityExceeded => "capacity-exceeded",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub clock: Ratio,
    pub position: MilePos,
    pub kind: ViolationKind,
    pub detail: String,
}

/// Where every ration withdrawn from the base ended up, in ration-days.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ledger {
    /// Net boxes withdrawn from the base (takes minus dumps at the base).
    pub boxes_taken: i64,
    pub consumed: Ratio,
    pub ants_lost: Ratio,
    pub discarded: Ratio,
    pub left_in_caches: u64,
    pub carried_at_end: Ratio,
}

impl Ledger {
    /// `boxes_taken = consumed + ants_lost + discarded + left_in_caches + carried_at_end`.
    pub fn balances(&self) -> bool {
        let out = &self.consumed
            + &self.ants_lost
            + &self.discarded
            + Ratio::from(self.left_in_caches as i64)
            + &self.carried_at_end;
        Ratio::from(self.boxes_taken) == out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimReport {
    pub feasible: bool,
    /// Days of walking, excluding the start phase.
    pub total_time: Ratio,
    pub circuit_covered: bool,
    pub final_position: MilePos,
    pub violations: Vec<Violation>,
    pub ledger: Ledger,
    /// Elapsed walking time at each mark; a repeated label keeps its last time.
    pub marks: BTreeMap<String, Ratio>,
    /// Sealed boxes left in caches away from the base.
    pub caches: BTreeMap<MilePos, u64>,
}

impl SimReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn ants_lost(&self) -> &Ratio {
        &self.ledger.ants_lost
    }
}

struct Walker<'r> {
    rules: &'r RuleSet,
    phase: Ratio,
    end_clock: Ratio,
    offset: Ratio,
    elapsed: Ratio,
    next_night: Ratio,
    sealed: u64,
    open: Ratio,
    caches: BTreeMap<MilePos, u64>,
    arcs: Vec<(Ratio, Ratio)>,
    ledger: Ledger,
    violations: Vec<Violation>,
    marks: BTreeMap<String, Ratio>,
}

impl<'r> Walker<'r> {
    fn new(rules: &'r RuleSet, schedule: &Schedule) -> Self {
        let phase = schedule.phase().clone();
        let end_clock = &phase + &(schedule.total_distance() / &rules.daily_miles);
        Walker {
            rules,
            next_night: phase.floor() + Ratio::one(),
            phase,
            end_clock,
            offset: Ratio::zero(),
            elapsed: Ratio::zero(),
            sealed: 0,
            open: Ratio::zero(),
            caches: BTreeMap::new(),
            arcs: Vec::new(),
            ledger: Ledger {
                boxes_taken: 0,
                consumed: Ratio::zero(),
                ants_lost: Ratio::zero(),
                discarded: Ratio::zero(),
                left_in_caches: 0,
                carried_at_end: Ratio::zero(),
            },
            violations: Vec::new(),
            marks: BTreeMap::new(),
        }
    }

    fn clock(&self) -> Ratio {
        &self.phase + &self.elapsed
    }

    fn position(&self) -> MilePos {
        MilePos::new(self.offset.clone(), &self.rules.circuit_miles)
    }

    fn violate(&mut self, kind: ViolationKind, detail: String) {
        self.violations.push(Violation { clock: self.clock(), position: self.position(), kind, detail });
    }

    fn load(&self) -> Ratio {
        Ratio::from(self.sealed as i64) + &self.open
    }

    fn check_capacity(&mut self) {
        if self.load() > self.rules.capacity_ration_days {
            let detail = format!(
                "carrying {} sealed + {} open > capacity {}",
                self.sealed, self.open, self.rules.capacity_ration_days
            );
            self.violate(ViolationKind::CapacityExceeded, detail);
        }
    }

    /// Advance along the circuit by `miles` (positive) in direction `dir`.
    fn advance(&mut self, miles: &Ratio, forward: bool, eating: bool) {
        let days = miles / &self.rules.daily_miles;
        if forward {
            self.offset += miles;
        } else {
            self.offset -= miles;
        }
        self.elapsed += &days;
        if eating {
            self.open -= &days;
            self.ledger.consumed += &days;
        }
        let clock = self.clock();
        while self.next_night <= clock {
            if self.next_night == clock && clock < self.end_clock && self.rules.ants_active {
                let lost = std::mem::take(&mut self.open);
                self.ledger.ants_lost += lost;
            }
            self.next_night += Ratio::one();
        }
    }

    fn walk(&mut self, displacement: &Ratio) {
        let start = self.offset.clone();
        let forward = displacement.is_positive();
        let mut left = displacement.abs();
        while left.is_positive() {
            if self.open.is_zero() {
                if self.sealed > 0 {
                    self.sealed -= 1;
                    self.open = Ratio::one();
                } else {
                    let total = displacement.abs();
                    let walked = &total - &left;
                    let detail = format!(
                        "out of food after {walked} of {total} miles; {left} miles walked without rations"
                    );
                    self.violate(ViolationKind::Starvation, detail);
                    self.advance(&left, forward, false);
                    break;
                }
            }
            let mut step = left.clone().min(&self.open * &self.rules.daily_miles);
            if self.rules.ants_active {
                let to_night = (&self.next_night - &self.clock()) * &self.rules.daily_miles;
                step = step.min(to_night);
            }
            self.advance(&step, forward, true);
            left -= &step;
        }
        let end = self.offset.clone();
        self.arcs.push(if start <= end { (start, end) } else { (end, start) });
    }

    fn apply(&mut self, action: &Action) {
        match action {
            Action::Move(d) => self.walk(d),
            Action::Dump(n) => {
                let n = u64::from(*n);
                if self.sealed < n {
                    let detail = format!("dump {n} with only {} sealed in hand", self.sealed);
                    self.violate(ViolationKind::NothingToDump, detail);
                    return;
                }
                self.sealed -= n;
                let pos = self.position();
                if pos.is_base() {
                    self.ledger.boxes_taken -= n as i64;
                } else {
                    *self.caches.entry(pos).or_insert(0) += n;
                }
            }
            Action::Take(n) => {
                let n = u64::from(*n);
                let pos = self.position();
                if pos.is_base() {
                    self.ledger.boxes_taken += n as i64;
                } else {
                    let available = self.caches.get(&pos).copied().unwrap_or(0);
                    if available < n {
                        let detail = format!("take {n} from a cache holding {available}");
                        self.violate(ViolationKind::EmptyCache, detail);
                        return;
                    }
                    if available == n {
                        self.caches.remove(&pos);
                    } else {
                        self.caches.insert(pos, available - n);
                    }
                }
                self.sealed += n;
                self.check_capacity();
            }
            Action::Unseal => {
                if self.sealed == 0 {
                    self.violate(ViolationKind::NothingToUnseal, "no sealed box in hand".into());
                    return;
                }
                if self.open.is_positive() {
                    if !self.rules.allow_discard {
                        let detail = format!("{} of the open ration would be thrown away", self.open);
                        self.violate(ViolationKind::OpenRationPresent, detail);
                        return;
                    }
                    let rest = std::mem::take(&mut self.open);
                    self.ledger.discarded += rest;
                }
                self.sealed -= 1;
                self.open = Ratio::one();
            }
            Action::Discard => {
                if self.open.is_zero() {
                    return;
                }
                if !self.rules.allow_discard {
                    let detail = format!("discarding {} is not allowed", self.open);
                    self.violate(ViolationKind::DiscardForbidden, detail);
                    return;
                }
                let rest = std::mem::take(&mut self.open);
                self.ledger.discarded += rest;
            }
            Action::Mark(label) => {
                self.marks.insert(label.clone(), self.elapsed.clone());
            }
        }
    }

    fn covers_circle(&self) -> bool {
        let c = &self.rules.circuit_miles;
        let mut pieces: Vec<(Ratio, Ratio)> = Vec::new();
        for (a, b) in &self.arcs {
            let len = b - a;
            if &len >= c {
                return true;
            }
            let lo = a.rem_euclid(c);
            let hi = &lo + &len;
            if &hi <= c {
                pieces.push((lo, hi));
            } else {
                pieces.push((lo, c.clone()));
                pieces.push((Ratio::zero(), hi - c));
            }
        }
        pieces.sort();
        let mut reach = Ratio::zero();
        for (lo, hi) in pieces {
            if lo > reach {
                return false;
            }
            reach = reach.max(hi);
        }
        &reach >= c
    }

    fn finish(mut self) -> SimReport {
        self.ledger.left_in_caches = self.caches.values().sum();
        self.ledger.carried_at_end = self.load();
        let final_position = self.position();
        let circuit_covered = final_position.is_base() && self.covers_circle();
        SimReport {
            feasible: self.violations.is_empty(),
            total_time: self.elapsed,
            circuit_covered,
            final_position,
            violations: self.violations,
            ledger: self.ledger,
            marks: self.marks,
            caches: self.caches,
        }
    }
}

/// Runs `schedule` under `rules`. Never fails; problems become violations.
pub fn simulate(schedule: &Schedule, rules: &RuleSet) -> SimReport {
    let mut walker = Walker::new(rules, schedule);
    if let Err(e) = rules.validate() {
        walker.violate(ViolationKind::InvalidRules, e.to_string());
        return walker.finish();
    }
    if rules.require_dawn_start && !schedule.phase().is_zero() {
        let detail = format!("walk starts at phase {} but must start at dawn", schedule.phase());
        walker.violate(ViolationKind::PhaseNotDawn, detail);
    }
    for action in schedule.actions() {
        walker.apply(action);
    }
    walker.finish()
}

/// True iff the schedule is feasible and takes exactly `claimed` days.
pub fn verify_total(schedule: &Schedule, rules: &RuleSet, claimed: &Ratio) -> bool {
    let report = simulate(schedule, rules);
    report.feasible && &report.total_time == claimed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::q;
    use crate::rules::Preset;
    use crate::schedule::{builtin, parse_schedule};

    fn run(text: &str, preset: Preset) -> SimReport {
        simulate(&parse_schedule(text).unwrap(), &RuleSet::preset(preset))
    }

    #[test]
    fn empty_schedule() {
        let r = simulate(&Schedule::empty(), &RuleSet::preset(Preset::Free));
        assert!(r.feasible);
        assert_eq!(r.total_time, Ratio::zero());
        assert!(!r.circuit_covered);
        assert!(r.ledger.balances());
    }

    #[test]
    fn starvation_after_two_rations() {
        let r = run("take 2\nmove 50\nmove 10", Preset::Free);
        assert!(!r.feasible);
        assert_eq!(r.violations.len(), 2);
        let first = &r.violations[0];
        assert_eq!(first.kind, ViolationKind::Starvation);
        assert_eq!(first.clock, Ratio::from(2));
        assert_eq!(first.position.value(), &Ratio::from(40));
        assert_eq!(r.total_time, Ratio::from(3));
        assert_eq!(r.ledger.consumed, Ratio::from(2));
        assert!(r.ledger.balances());
    }

    #[test]
    fn ants_take_the_leftover_at_nightfall() {
        let r = run("phase 1/2\ntake 1\nmove 20\nmove -10", Preset::Ants);
        assert!(!r.feasible);
        assert_eq!(r.ledger.ants_lost, q(1, 2));
        assert_eq!(r.ledger.consumed, q(1, 2));
        assert!(r.ledger.balances());

        let free = run("phase 1/2\ntake 1\nmove 20", Preset::Free);
        assert!(free.feasible);
        assert_eq!(free.ledger.ants_lost, Ratio::zero());
    }

    #[test]
    fn no_ants_when_the_walk_ends_at_nightfall() {
        let r = run("take 1\nmove 10\nmove -10", Preset::Dawn);
        assert!(r.feasible);
        assert_eq!(r.ledger.ants_lost, Ratio::zero());
        let r = run("take 2\nmove 10\nmove -10", Preset::Dawn);
        assert_eq!(r.ledger.carried_at_end, Ratio::one());
    }

    #[test]
    fn capacity_counts_open_fraction() {
        let r = run("take 2\ntake 1", Preset::Free);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].kind, ViolationKind::CapacityExceeded);
        let ok = run("take 2\nmove 10\ndump 1\nmove -10\ntake 1", Preset::Free);
        assert!(ok.feasible, "{:?}", ok.violations);
    }

    #[test]
    fn unseal_and_discard_follow_rules() {
        let r = run("take 2\nmove 10\nunseal\nmove -10", Preset::Dawn);
        assert_eq!(r.violations[0].kind, ViolationKind::OpenRationPresent);
        let r = run("take 2\nmove 10\nunseal\nmove -10", Preset::Free);
        assert!(r.feasible);
        assert_eq!(r.ledger.discarded, q(1, 2));
        assert!(r.ledger.balances());
        let r = run("take 1\nmove 5\ndiscard\nmove -5", Preset::Dawn);
        assert_eq!(r.violations[0].kind, ViolationKind::DiscardForbidden);
        assert_eq!(run("unseal", Preset::Free).violations[0].kind, ViolationKind::NothingToUnseal);
    }

    #[test]
    fn cache_errors() {
        let r = run("take 1\nmove 5\ntake 1\nmove -5", Preset::Free);
        assert_eq!(r.violations[0].kind, ViolationKind::EmptyCache);
        let r = run("dump 1", Preset::Free);
        assert_eq!(r.violations[0].kind, ViolationKind::NothingToDump);
    }

    #[test]
    fn base_dump_returns_boxes() {
        let r = run("take 2\ndump 1\nmove 10\nmove -10", Preset::Free);
        assert!(r.feasible);
        assert_eq!(r.ledger.boxes_taken, 1);
        assert!(r.ledger.balances());
    }

    #[test]
    fn phase_must_be_zero_under_dawn() {
        let r = run("phase 1/2\ntake 1\nmove 10\nmove -10", Preset::Dawn);
        assert_eq!(r.violations[0].kind, ViolationKind::PhaseNotDawn);
    }

    #[test]
    fn coverage_needs_full_circle_and_return() {
        let full = run("take 2\nmove 40", Preset::Free);
        assert!(!full.circuit_covered);
        let mut rules = RuleSet::preset(Preset::Free);
        rules.circuit_miles = Ratio::from(30);
        let r = simulate(&parse_schedule("take 2\nmove 30").unwrap(), &rules);
        assert!(r.circuit_covered && r.feasible);
        let r = simulate(&parse_schedule("take 2\nmove 20\nmove -20\nmove -10\nmove 10").unwrap(), &rules);
        assert!(r.circuit_covered);
        let r = simulate(&parse_schedule("take 2\nmove 19\nmove -19\nmove -10\nmove 10").unwrap(), &rules);
        assert!(!r.circuit_covered);
    }

    #[test]
    fn builtins_are_feasible() {
        let alg1 = simulate(&builtin("alg1").unwrap(), &RuleSet::preset(Preset::Dawn));
        assert!(alg1.feasible, "{:?}", alg1.violations);
        assert_eq!(alg1.total_time, q(47, 2));
        assert!(alg1.circuit_covered);
        assert_eq!(alg1.ledger.ants_lost, Ratio::zero());

        let alg2 = simulate(&builtin("alg2").unwrap(), &RuleSet::preset(Preset::Free));
        assert!(alg2.feasible, "{:?}", alg2.violations);
        assert_eq!(alg2.total_time, q(361, 16));
        assert_eq!(alg2.marks["partA-end"], q(73, 8));
        assert_eq!(alg2.marks["partB-end"], q(73, 8) + Ratio::from(12));

        let alg3 = simulate(&builtin("alg3").unwrap(), &RuleSet::preset(Preset::Dawn));
        assert!(alg3.feasible, "{:?}", alg3.violations);
        assert_eq!(alg3.total_time, q(2693, 116));
        assert_eq!(alg3.ledger.ants_lost, Ratio::zero());
        assert!(alg3.circuit_covered);
    }

    #[test]
    fn verify_total_requires_exact_claim() {
        let alg2 = builtin("alg2").unwrap();
        let free = RuleSet::preset(Preset::Free);
        assert!(verify_total(&alg2, &free, &q(361, 16)));
        assert!(!verify_total(&alg2, &free, &Ratio::from(22)));
        assert!(!verify_total(&alg2, &RuleSet::preset(Preset::Dawn), &q(361, 16)));
        assert!(verify_total(&builtin("alg1").unwrap(), &RuleSet::preset(Preset::Dawn), &q(47, 2)));
    }

    #[test]
    fn report_json_uses_exact_strings() {
        let r = simulate(&builtin("alg2").unwrap(), &RuleSet::preset(Preset::Free));
        let v = r.to_json_value();
        assert_eq!(v["total_time"], "361/16");
        assert_eq!(v["feasible"], true);
        assert_eq!(v["marks"]["partA-end"], "73/8");
        assert!(v["ledger"]["consumed"].is_string());
    }
}
