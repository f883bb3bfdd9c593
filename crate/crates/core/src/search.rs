//! Brute-force search over schedules on a rational grid.
//!
//! Positions and food are counted in ticks of `1/denominator` unit, so a
//! step of one tick takes one tick of time and eats one tick of ration. The
//! search runs breadth-first over time layers; between steps the walker may
//! take, dump or discard. A state is dropped when another state in the same
//! layer, at the same position with the same open ration, carries and caches
//! at least as much while having drawn no more boxes from the base.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{self, Extent, NamedSystem, CIRCUIT_UNITS};
use crate::ratio::Ratio;
use crate::rules::RuleSet;
use crate::schedule::{Action, Schedule};
use crate::simulator::{simulate, SimReport};

/// Environment variable overriding [`DEFAULT_CEILING`].
pub const CEILING_ENV: &str = "CIRCUIT_SEARCH_CEILING";
pub const DEFAULT_CEILING: f64 = 1e15;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Ticks per unit.
    pub denominator: u32,
    pub max_days: Ratio,
    /// Net boxes drawn from the base over the whole schedule.
    pub max_boxes: u32,
    /// Stops at which the inventory changes; `u32::MAX` disables the limit.
    pub max_actions: u32,
    /// Start time within the day; must lie on the grid.
    pub phase: Ratio,
}

impl GridSpec {
    /// A grid allowing half again as many boxes as days walked, plus one.
    pub fn new(denominator: u32, max_days: Ratio) -> Self {
        let days = max_days.ceil().to_i64().unwrap_or(0).max(0) as u32;
        let boxes = days + days.div_ceil(2) + 1;
        GridSpec { denominator, max_days, max_boxes: boxes, max_actions: u32::MAX, phase: Ratio::zero() }
    }

    pub fn with_max_boxes(mut self, n: u32) -> Self {
        self.max_boxes = n;
        self
    }

    pub fn with_max_actions(mut self, n: u32) -> Self {
        self.max_actions = n;
        self
    }

    pub fn with_phase(mut self, phase: Ratio) -> Self {
        self.phase = phase;
        self
    }

    fn validate(&self) -> Result<(), SearchError> {
        if self.denominator == 0 || !self.max_days.is_positive() || self.max_boxes == 0 || self.max_actions == 0 {
            return Err(SearchError::InvalidGrid("denominator, max_days, max_boxes and max_actions must be positive".into()));
        }
        if self.phase.is_negative() || self.phase >= Ratio::one() {
            return Err(SearchError::InvalidGrid("phase must lie in [0, 1)".into()));
        }
        if !(&self.phase * Ratio::from(self.denominator as i64)).is_integer() {
            return Err(SearchError::OffGrid { what: "phase", value: self.phase.clone() });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("{what} {value} is not a multiple of the grid step")]
    OffGrid { what: &'static str, value: Ratio },
    #[error("rules rejected: {0}")]
    InvalidRules(String),
    #[error("search space estimate {estimate:.3e} exceeds the ceiling {ceiling:.3e}")]
    TooLarge { estimate: f64, ceiling: f64 },
    #[error("witness failed re-simulation: {0}")]
    WitnessRejected(String),
    #[error("found time {found} below the certified bound {bound}")]
    BeatsCertifiedBound { found: Ratio, bound: Ratio },
}

/// A witness schedule and what it achieves.
#[derive(Debug, Clone, PartialEq)]
pub struct Found {
    /// Distance (for reach) or round-trip time, in units and days.
    pub value: Ratio,
    pub schedule: Schedule,
    pub report: SimReport,
    /// The certified lower bound it was checked against, when one applies.
    pub bound: Option<Ratio>,
    pub states_explored: u64,
}

/// Upper estimate of the number of states, before dominance.
pub fn estimate(span_ticks: u64, time_ticks: u64, g: &GridSpec, rules: &RuleSet) -> f64 {
    let positions = (span_ticks + 1) as f64;
    let den = g.denominator as f64;
    let cap = rules.capacity_ration_days.to_f64().floor().max(0.0) + 1.0;
    let boxes = g.max_boxes as f64;
    // multisets of at most `boxes` boxes over the non-base positions
    let slots = span_ticks as f64;
    let mut multisets = 1.0f64;
    for i in 1..=g.max_boxes.min(200) {
        multisets *= (slots + i as f64) / i as f64;
    }
    (time_ticks as f64 + 1.0) * positions * (den + 1.0) * cap * (boxes + 1.0) * multisets
}

fn ceiling() -> f64 {
    std::env::var(CEILING_ENV).ok().and_then(|v| v.trim().parse::<f64>().ok()).unwrap_or(DEFAULT_CEILING)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Op {
    Discard,
    Take(u32),
    Dump(u32),
    Step(i8),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct State {
    pos: i64,
    open: i64,
    visited: bool,
    taken: u32,
    actions: u32,
    sealed: u32,
    caches: Vec<(i64, u32)>,
}

impl State {
    fn cache(&self, pos: i64) -> u32 {
        self.caches.binary_search_by_key(&pos, |c| c.0).map(|i| self.caches[i].1).unwrap_or(0)
    }

    fn set_cache(&mut self, pos: i64, n: u32) {
        match self.caches.binary_search_by_key(&pos, |c| c.0) {
            Ok(i) if n == 0 => {
                self.caches.remove(i);
            }
            Ok(i) => self.caches[i].1 = n,
            Err(i) if n > 0 => self.caches.insert(i, (pos, n)),
            Err(_) => {}
        }
    }

    fn inventory(&self) -> u32 {
        self.sealed + self.caches.iter().map(|c| c.1).sum::<u32>()
    }

    fn group(&self) -> (i64, i64, bool) {
        (self.pos, self.open, self.visited)
    }

    fn caches_cover(&self, other: &State) -> bool {
        other.caches.iter().all(|(p, n)| self.cache(*p) >= *n)
    }

    fn dominates(&self, other: &State, track_actions: bool) -> bool {
        if self.taken > other.taken || self.sealed < other.sealed || !self.caches_cover(other) {
            return false;
        }
        !track_actions || self.actions + u32::from(self.sealed > other.sealed) <= other.actions
    }
}

struct Node {
    state: State,
    parent: usize,
    ops: Vec<Op>,
}

struct Problem<'a> {
    rules: &'a RuleSet,
    den: i64,
    phase_ticks: i64,
    cap_ticks: i64,
    cap_boxes: u32,
    hi: i64,
    max_ticks: i64,
    max_boxes: u32,
    max_actions: u32,
    target: Option<i64>,
}

impl Problem<'_> {
    fn track_actions(&self) -> bool {
        self.max_actions != u32::MAX
    }

    /// Instant variants of `s` followed by one step each way.
    fn successors(&self, s: &State, time: i64) -> Vec<(State, Vec<Op>)> {
        let mut out = Vec::new();
        let discards: &[bool] = if self.rules.allow_discard && s.open > 0 { &[false, true] } else { &[false] };
        let at_base = s.pos == 0;
        let here = if at_base { 0 } else { s.cache(s.pos) };
        for &discard in discards {
            let open = if discard { 0 } else { s.open };
            let room = ((self.cap_ticks - open).max(0) / self.den) as u32;
            let most = if at_base { room.min(self.cap_boxes) } else { room.min(s.sealed + here) };
            for sealed in 0..=most {
                let mut v = s.clone();
                v.open = open;
                let mut ops = Vec::new();
                if discard {
                    ops.push(Op::Discard);
                }
                match sealed.cmp(&s.sealed) {
                    Ordering::Greater => ops.push(Op::Take(sealed - s.sealed)),
                    Ordering::Less => ops.push(Op::Dump(s.sealed - sealed)),
                    Ordering::Equal => {}
                }
                if at_base {
                    let taken = v.taken as i64 + sealed as i64 - s.sealed as i64;
                    if taken > self.max_boxes as i64 {
                        continue;
                    }
                    v.taken = taken as u32;
                } else {
                    v.set_cache(s.pos, s.sealed + here - sealed);
                }
                v.sealed = sealed;
                if !ops.is_empty() && self.track_actions() {
                    if v.actions >= self.max_actions {
                        continue;
                    }
                    v.actions += 1;
                }
                for dir in [-1i8, 1] {
                    if let Some(next) = self.step(&v, dir, time) {
                        let mut o = ops.clone();
                        o.push(Op::Step(dir));
                        out.push((next, o));
                    }
                }
            }
        }
        out
    }

    fn step(&self, s: &State, dir: i8, time: i64) -> Option<State> {
        let pos = s.pos + dir as i64;
        if pos < 0 || pos > self.hi {
            return None;
        }
        let mut v = s.clone();
        if v.open == 0 {
            if v.sealed == 0 {
                return None;
            }
            v.sealed -= 1;
            v.open = self.den;
        }
        v.open -= 1;
        v.pos = pos;
        if self.rules.ants_active && (self.phase_ticks + time + 1) % self.den == 0 {
            v.open = 0;
        }
        if Some(pos) == self.target {
            v.visited = true;
        }
        if let Some(target) = self.target {
            let home = if v.visited { pos } else { 2 * target - pos };
            if time + 1 + home > self.max_ticks {
                return None;
            }
        }
        Some(v)
    }

    fn prune(&self, mut cands: Vec<(State, usize, Vec<Op>)>) -> Vec<Node> {
        let track = self.track_actions();
        cands.par_sort_by(|a, b| {
            a.0.group()
                .cmp(&b.0.group())
                .then(a.0.taken.cmp(&b.0.taken))
                .then(a.0.actions.cmp(&b.0.actions))
                .then(b.0.inventory().cmp(&a.0.inventory()))
                .then(a.0.cmp(&b.0))
                .then(a.1.cmp(&b.1))
                .then(a.2.cmp(&b.2))
        });
        cands.dedup_by(|a, b| a.0 == b.0);
        let mut groups: Vec<&[(State, usize, Vec<Op>)]> = Vec::new();
        let mut start = 0;
        for i in 1..=cands.len() {
            if i == cands.len() || cands[i].0.group() != cands[start].0.group() {
                groups.push(&cands[start..i]);
                start = i;
            }
        }
        let kept: Vec<Vec<usize>> = groups
            .par_iter()
            .map(|g| {
                let mut keep: Vec<usize> = Vec::new();
                for (i, c) in g.iter().enumerate() {
                    if !keep.iter().any(|&k| g[k].0.dominates(&c.0, track)) {
                        keep.push(i);
                    }
                }
                keep
            })
            .collect();
        let mut out = Vec::new();
        for (g, keep) in groups.iter().zip(kept) {
            for k in keep {
                let (state, parent, ops) = g[k].clone();
                out.push(Node { state, parent, ops });
            }
        }
        out
    }

    /// Runs layer by layer until `stop` returns a node index or time runs out.
    fn run<F>(&self, mut visit: F) -> (Vec<Vec<Node>>, u64)
    where
        F: FnMut(i64, &[Node]) -> bool,
    {
        let start = State { pos: 0, open: 0, visited: false, taken: 0, actions: 0, sealed: 0, caches: Vec::new() };
        let mut layers = vec![vec![Node { state: start, parent: usize::MAX, ops: Vec::new() }]];
        let mut explored = 1u64;
        let mut time = 0i64;
        loop {
            if visit(time, layers.last().unwrap()) || time >= self.max_ticks {
                break;
            }
            let frontier = layers.last().unwrap();
            let cands: Vec<(State, usize, Vec<Op>)> = frontier
                .par_iter()
                .enumerate()
                .flat_map_iter(|(i, n)| {
                    self.successors(&n.state, time).into_iter().map(move |(s, ops)| (s, i, ops))
                })
                .collect();
            explored += cands.len() as u64;
            let next = self.prune(cands);
            if next.is_empty() {
                break;
            }
            layers.push(next);
            time += 1;
        }
        (layers, explored)
    }

    fn witness(&self, layers: &[Vec<Node>], layer: usize, idx: usize, final_ops: &[Op]) -> Result<Schedule, SearchError> {
        let mut chunks = vec![final_ops.to_vec()];
        let (mut l, mut i) = (layer, idx);
        while l > 0 {
            let n = &layers[l][i];
            chunks.push(n.ops.clone());
            i = n.parent;
            l -= 1;
        }
        chunks.reverse();
        let tick = &self.rules.daily_miles / Ratio::from(self.den);
        let mut actions = Vec::new();
        let mut run: i64 = 0;
        let flush = |run: &mut i64, actions: &mut Vec<Action>| {
            if *run != 0 {
                actions.push(Action::Move(&tick * Ratio::from(*run)));
                *run = 0;
            }
        };
        for op in chunks.into_iter().flatten() {
            match op {
                Op::Step(d) => {
                    if run != 0 && run.signum() != d as i64 {
                        flush(&mut run, &mut actions);
                    }
                    run += d as i64;
                }
                other => {
                    flush(&mut run, &mut actions);
                    actions.push(match other {
                        Op::Discard => Action::Discard,
                        Op::Take(n) => Action::Take(n),
                        Op::Dump(n) => Action::Dump(n),
                        Op::Step(_) => unreachable!(),
                    });
                }
            }
        }
        flush(&mut run, &mut actions);
        let phase = Ratio::from(self.phase_ticks) / Ratio::from(self.den);
        Schedule::new(phase, actions).map_err(|e| SearchError::WitnessRejected(e.to_string()))
    }
}

fn setup<'a>(g: &GridSpec, rules: &'a RuleSet, days: &Ratio, hi: i64, target: Option<i64>) -> Result<Problem<'a>, SearchError> {
    g.validate()?;
    rules.validate().map_err(|e| SearchError::InvalidRules(e.to_string()))?;
    if rules.require_dawn_start && !g.phase.is_zero() {
        return Err(SearchError::InvalidRules("dawn start required but the grid phase is not 0".into()));
    }
    if rules.circuit_units() != Ratio::from(CIRCUIT_UNITS) {
        return Err(SearchError::InvalidRules("the search assumes a circuit of five days' walk".into()));
    }
    let den = g.denominator as i64;
    let cap = rules.capacity_ration_days.floor().to_i64().unwrap_or(0).max(0) as u32;
    let max_ticks = (days * Ratio::from(den)).floor().to_i64().unwrap_or(i64::MAX);
    let hi = hi.min(max_ticks).min(CIRCUIT_UNITS * den - 1);
    let estimate = estimate(hi as u64, max_ticks as u64, g, rules);
    let limit = ceiling();
    if estimate > limit {
        return Err(SearchError::TooLarge { estimate, ceiling: limit });
    }
    Ok(Problem {
        rules,
        den,
        phase_ticks: (&g.phase * Ratio::from(den)).to_i64().unwrap_or(0),
        cap_ticks: (&rules.capacity_ration_days * Ratio::from(den)).floor().to_i64().unwrap_or(0),
        cap_boxes: cap,
        hi,
        max_ticks,
        max_boxes: g.max_boxes,
        max_actions: g.max_actions,
        target,
    })
}

fn certify(schedule: &Schedule, rules: &RuleSet, days: &Ratio) -> Result<SimReport, SearchError> {
    let report = simulate(schedule, rules);
    if !report.feasible {
        let why = report.violations.first().map(|v| format!("{} at {}: {}", v.kind, v.clock, v.detail)).unwrap_or_default();
        return Err(SearchError::WitnessRejected(why));
    }
    if &report.total_time != days {
        return Err(SearchError::WitnessRejected(format!("time {} instead of {days}", report.total_time)));
    }
    Ok(report)
}

/// Lower bound on the time to reach `units` one way, from the part-B system.
pub fn reach_bound(units: &Ratio) -> Option<Ratio> {
    if units < &Ratio::one() || units > &Ratio::from(CIRCUIT_UNITS) {
        return None;
    }
    let gamma = Ratio::from(CIRCUIT_UNITS) - units;
    match bounds::min_t(&NamedSystem::PartB(5).build(), &gamma) {
        Ok(Extent::Finite(t)) => Some(t),
        _ => None,
    }
}

/// Lower bound on a round trip to `gamma`: the round-trip system and `2γ`.
pub fn roundtrip_bound(gamma: &Ratio) -> Ratio {
    let walk = gamma * Ratio::from(2);
    match bounds::min_t(&NamedSystem::RoundTrip.build(), gamma) {
        Ok(Extent::Finite(t)) => t.max(walk),
        _ => walk,
    }
}

/// The farthest point reachable within `budget_days`, in units.
pub fn best_reach(budget_days: &Ratio, g: &GridSpec, rules: &RuleSet) -> Result<Found, SearchError> {
    let den = g.denominator as i64;
    let hi = (budget_days * Ratio::from(den)).floor().to_i64().unwrap_or(i64::MAX);
    let problem = setup(g, rules, budget_days, hi, None)?;
    let mut best: (i64, usize, usize) = (0, 0, 0);
    let (layers, explored) = problem.run(|time, nodes| {
        for (i, n) in nodes.iter().enumerate() {
            if n.state.pos > best.0 {
                best = (n.state.pos, time as usize, i);
            }
        }
        false
    });
    let (pos, layer, idx) = best;
    let schedule = problem.witness(&layers, layer, idx, &[])?;
    let days = Ratio::from(layer as i64) / Ratio::from(den);
    let report = certify(&schedule, rules, &days)?;
    let units = Ratio::from(pos) / Ratio::from(den);
    let bound = reach_bound(&units);
    if let Some(b) = &bound {
        if &days < b {
            return Err(SearchError::BeatsCertifiedBound { found: days, bound: b.clone() });
        }
    }
    Ok(Found { value: units, schedule, report, bound, states_explored: explored })
}

/// The fastest round trip from the base out to `gamma` units and back
/// within `g.max_days`, or `None` when the grid admits none.
pub fn roundtrip_search(gamma: &Ratio, g: &GridSpec, rules: &RuleSet) -> Result<Option<Found>, SearchError> {
    let den = g.denominator as i64;
    let scaled = gamma * Ratio::from(den);
    if !scaled.is_integer() || !gamma.is_positive() || gamma >= &Ratio::from(CIRCUIT_UNITS) {
        return Err(SearchError::OffGrid { what: "gamma", value: gamma.clone() });
    }
    let target = scaled.to_i64().expect("integer");
    let problem = setup(g, rules, &g.max_days, target, Some(target))?;
    let mut hit: Option<(usize, usize)> = None;
    let (layers, explored) = problem.run(|time, nodes| {
        hit = nodes.iter().position(|n| n.state.visited && n.state.pos == 0).map(|i| (time as usize, i));
        hit.is_some()
    });
    let Some((layer, idx)) = hit else {
        return Ok(None);
    };
    let schedule = problem.witness(&layers, layer, idx, &[])?;
    let days = Ratio::from(layer as i64) / Ratio::from(den);
    let report = certify(&schedule, rules, &days)?;
    let bound = roundtrip_bound(gamma);
    if days < bound {
        return Err(SearchError::BeatsCertifiedBound { found: days, bound });
    }
    Ok(Some(Found { value: days, schedule, report, bound: Some(bound), states_explored: explored }))
}

/// Sizes of the kept layers, for diagnostics.
pub fn describe(found: &Found) -> BTreeMap<&'static str, String> {
    let mut m = BTreeMap::new();
    m.insert("value", found.value.to_string());
    m.insert("time", found.report.total_time.to_string());
    m.insert("states", found.states_explored.to_string());
    if let Some(b) = &found.bound {
        m.insert("bound", b.to_string());
    }
    m
}
