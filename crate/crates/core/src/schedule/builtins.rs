//! Box-by-box encodings of the three classic circuit schedules.
//!
//! Each numbered step ends with a `step-N` mark placed at the step's final
//! position. Backward positions (the far side of the mountain, near mile
//! 100) are written as negative offsets from the base, forward positions as
//! plain miles, and the finishing base as mile 100.
//!
//! Boxes are unsealed lazily by the simulator when the open ration runs out,
//! so none of these encodings carries an explicit `unseal`.

use crate::ratio::{q, Ratio};

use super::{Action, Schedule, ScheduleError};

pub struct BuiltinInfo {
    pub name: &'static str,
    pub total_days: (i64, i64),
    pub summary: &'static str,
}

pub const BUILTINS: [BuiltinInfo; 3] = [
    BuiltinInfo {
        name: "alg1",
        total_days: (47, 2),
        summary: "23 1/2-day schedule, caches at 70 and 90, dawn start (DAWN)",
    },
    BuiltinInfo {
        name: "alg2",
        total_days: (361, 16),
        summary: "22 9/16-day schedule, caches at 71 1/4 and 91 1/4, starts 7/8 into the day (FREE)",
    },
    BuiltinInfo {
        name: "alg3",
        total_days: (2693, 116),
        summary: "23 25/116-day schedule, caches at 75 20/29 and 95 20/29, dawn start (DAWN)",
    },
];

pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    BUILTINS.iter().map(|b| b.name)
}

pub fn builtin(name: &str) -> Result<Schedule, ScheduleError> {
    let schedule = match name {
        "alg1" => alg1(),
        "alg2" => alg2(),
        "alg3" => alg3(),
        other => return Err(ScheduleError::UnknownBuiltin(other.to_string())),
    };
    Ok(schedule)
}

struct Walk {
    pos: Ratio,
    step: u32,
    actions: Vec<Action>,
}

impl Walk {
    fn new() -> Self {
        Walk { pos: Ratio::zero(), step: 0, actions: Vec::new() }
    }

    fn to(&mut self, target: Ratio) -> &mut Self {
        let d = &target - &self.pos;
        if !d.is_zero() {
            self.actions.push(Action::Move(d));
        }
        self.pos = target;
        self
    }

    fn take(&mut self, n: u32) -> &mut Self {
        self.actions.push(Action::Take(n));
        self
    }

    fn dump(&mut self, n: u32) -> &mut Self {
        self.actions.push(Action::Dump(n));
        self
    }

    fn discard(&mut self) -> &mut Self {
        self.actions.push(Action::Discard);
        self
    }

    fn mark(&mut self, label: &str) -> &mut Self {
        self.actions.push(Action::Mark(label.to_string()));
        self
    }

    fn end_step(&mut self) -> &mut Self {
        self.step += 1;
        let label = format!("step-{}", self.step);
        self.mark(&label)
    }

    /// Take two boxes here, dump one at `far`, come back to `back`.
    fn carry_one(&mut self, far: Ratio, back: Ratio) -> &mut Self {
        self.take(2).to(far).dump(1).to(back)
    }

    fn finish(self, phase: Ratio) -> Schedule {
        Schedule::new(phase, self.actions).expect("builtin schedules are well formed")
    }
}

/// Backward position on the far side: mile `m` is `m - 100` from the base.
fn far_side(m: Ratio) -> Ratio {
    m - Ratio::from(100)
}

fn miles(n: i64) -> Ratio {
    Ratio::from(n)
}

fn alg1() -> Schedule {
    let mut w = Walk::new();
    let base = miles(0);
    let p90 = far_side(miles(90));
    let p85 = far_side(miles(85));
    let p80 = far_side(miles(80));
    let p70 = far_side(miles(70));

    for _ in 0..5 {
        w.carry_one(p90.clone(), base.clone());
    }
    w.end_step();
    w.take(2).to(p90.clone()).to(p85.clone()).dump(1).to(p90.clone()).end_step();
    w.carry_one(p80.clone(), p90.clone()).end_step();
    w.take(2).to(p80.clone()).dump(1).to(p85.clone()).take(1).to(p80.clone()).dump(1).end_step();
    w.carry_one(p70.clone(), p80.clone()).end_step();
    w.take(1).to(base.clone()).end_step().mark("partA-end");

    // Dump at 5, pad the day out to 20 miles by walking on to 10.
    w.take(2).to(miles(5)).dump(1).to(miles(10)).to(base.clone()).end_step();
    for _ in 0..4 {
        w.carry_one(miles(10), base.clone());
    }
    w.end_step();
    w.take(2).to(miles(10)).dump(1).to(miles(5)).take(1).to(miles(10)).dump(1).end_step();
    for _ in 0..2 {
        w.carry_one(miles(20), miles(10));
    }
    w.end_step();
    w.carry_one(miles(25), miles(20)).end_step();
    w.take(2).to(miles(30)).dump(1).to(miles(25)).take(1).to(miles(30)).dump(1).end_step();
    w.take(2).to(miles(70)).end_step().mark("partB-end");

    w.take(1).to(miles(90)).take(1).to(miles(100)).end_step();
    w.finish(Ratio::zero())
}

fn alg2() -> Schedule {
    let mut w = Walk::new();
    let base = miles(0);
    let p98_3_4 = far_side(q(395, 4));
    let p97_1_2 = far_side(q(195, 2));
    let p93_3_4 = far_side(q(375, 4));
    let p91_1_4 = far_side(q(365, 4));
    let p90 = far_side(miles(90));
    let p86_7_8 = far_side(q(695, 8));
    let p86_1_4 = far_side(q(345, 4));
    let p82_1_2 = far_side(q(165, 2));
    let p80 = far_side(miles(80));
    let p71_1_4 = far_side(q(285, 4));

    w.carry_one(p98_3_4.clone(), base.clone()).end_step();
    // The step-1 box is 7/8 full; it is thrown away (or eaten by ants at nightfall).
    w.discard();
    w.take(2).to(p97_1_2.clone()).dump(1).to(p98_3_4.clone()).take(1);
    w.to(p91_1_4.clone()).dump(1).to(base.clone()).end_step();
    w.take(2).to(p93_3_4.clone()).dump(1).to(p97_1_2.clone()).take(1);
    w.to(p93_3_4.clone()).dump(1).to(base.clone()).end_step();
    for _ in 0..2 {
        w.carry_one(p90.clone(), base.clone());
    }
    w.end_step();
    w.carry_one(p86_7_8.clone(), p93_3_4.clone()).end_step();
    w.take(2).to(p82_1_2.clone()).dump(1).to(p86_7_8.clone()).take(1);
    w.to(p86_1_4.clone()).dump(1).to(p90.clone()).end_step();
    w.take(2).to(p80.clone()).dump(1).to(p86_1_4.clone()).take(1).to(p82_1_2.clone()).end_step();
    // One box in hand plus the one cached here.
    w.take(1).to(p71_1_4.clone()).dump(1).to(p80.clone()).end_step();
    w.take(1).to(base.clone()).end_step().mark("partA-end");

    for _ in 0..5 {
        w.carry_one(miles(10), base.clone());
    }
    w.end_step();
    w.take(2).to(q(25, 2)).dump(1).to(miles(10)).take(1).to(q(25, 2)).dump(1).to(miles(10)).end_step();
    w.carry_one(miles(20), miles(10)).end_step();
    w.take(2).to(q(165, 8)).dump(1).to(miles(20)).take(1).to(q(165, 8)).dump(1).to(q(25, 2)).end_step();
    w.carry_one(q(425, 16), q(165, 8)).end_step();
    w.take(2).to(q(125, 4)).dump(1).to(q(425, 16)).take(1).to(q(125, 4)).end_step();
    w.take(1).to(q(285, 4)).end_step().mark("partB-end");

    w.take(1).to(q(365, 4)).take(1).to(miles(100)).end_step();
    w.finish(q(7, 8))
}

fn alg3() -> Schedule {
    let mut w = Walk::new();
    let base = miles(0);
    let at = |n: i64, d: i64| q(n, d);
    let back = |n: i64, d: i64| far_side(q(n, d));

    let p8_18 = at(250, 29);
    let p99_9 = back(2880, 29);
    let p96_26 = back(2810, 29);
    let p95_25 = back(2780, 29);
    let p90 = far_side(miles(90));
    let p88_28 = back(2580, 29);
    let p82_12 = back(2390, 29);
    let p75_20 = back(2195, 29);
    let p95_20 = back(2775, 29);

    w.carry_one(p8_18.clone(), base.clone()).end_step();
    // The leftover 4/29 of the first box covers both short carries.
    for _ in 0..2 {
        w.take(1).to(p99_9.clone()).dump(1).to(base.clone());
    }
    w.end_step();
    w.take(2).to(p96_26.clone()).dump(1);
    for _ in 0..2 {
        w.to(p99_9.clone()).take(1).to(p95_25.clone()).dump(1);
    }
    w.to(base.clone()).end_step();
    w.carry_one(p90.clone(), base.clone()).end_step();
    w.take(2).to(p88_28.clone()).dump(1).to(p90.clone()).take(1);
    w.to(p88_28.clone()).dump(1).to(p95_25.clone()).end_step();
    w.carry_one(p82_12.clone(), p88_28.clone()).end_step();
    w.carry_one(p75_20.clone(), p82_12.clone()).end_step();
    w.take(1).to(p96_26.clone()).take(1).to(p95_20.clone()).dump(1).to(base.clone()).end_step();
    w.mark("partA-end");

    let p9_9 = at(270, 29);
    let p12_19 = at(715, 58);
    let p19_19 = at(570, 29);
    let p19_24 = at(575, 29);
    let p21_19 = at(2455, 116);
    let p23_18 = at(685, 29);
    let p31_21 = at(920, 29);
    let p35_20 = at(1035, 29);

    w.take(2).to(p9_9.clone()).dump(1).to(p8_18.clone()).take(1);
    w.to(p9_9.clone()).dump(1).to(base.clone()).end_step();
    for _ in 0..5 {
        w.carry_one(miles(10), base.clone());
    }
    w.end_step();
    w.take(2).to(p12_19.clone()).dump(1).to(miles(10)).take(1);
    w.to(p12_19.clone()).dump(1).to(p9_9.clone()).end_step();
    w.carry_one(p19_19.clone(), miles(10)).end_step();
    w.take(2).to(p19_24.clone()).dump(1).to(p19_19.clone()).take(1);
    w.to(p19_24.clone()).dump(1).to(miles(10)).end_step();
    w.carry_one(p21_19.clone(), p12_19.clone()).end_step();
    w.take(2).to(p23_18.clone()).dump(1).to(p21_19.clone()).take(1);
    w.to(p23_18.clone()).dump(1).to(p19_24.clone()).end_step();
    w.carry_one(p31_21.clone(), p23_18.clone()).end_step();
    w.take(2).to(p35_20.clone()).dump(1).to(p31_21.clone()).take(1).to(p35_20.clone()).end_step();
    w.take(1).to(at(2195, 29)).end_step().mark("partB-end");

    w.take(1).to(at(2775, 29)).take(1).to(miles(100)).end_step();
    w.finish(Ratio::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::{format_schedule, parse_schedule};

    fn ends(name: &str) -> Vec<Ratio> {
        builtin(name)
            .unwrap()
            .mark_offsets()
            .into_iter()
            .filter(|(l, _)| l.starts_with("step-"))
            .map(|(_, x)| x)
            .collect()
    }

    /// Turn a stated mile position into the offset used by the encoding:
    /// `side < 0` for the far side of the mountain.
    fn pos(side: i64, n: i64, d: i64) -> Ratio {
        if side < 0 {
            q(n, d) - Ratio::from(100)
        } else {
            q(n, d)
        }
    }

    #[test]
    fn alg1_step_positions() {
        let expected = vec![
            pos(1, 0, 1),
            pos(-1, 90, 1),
            pos(-1, 90, 1),
            pos(-1, 80, 1),
            pos(-1, 80, 1),
            pos(1, 0, 1),
            pos(1, 0, 1),
            pos(1, 0, 1),
            pos(1, 10, 1),
            pos(1, 10, 1),
            pos(1, 20, 1),
            pos(1, 30, 1),
            pos(1, 70, 1),
            pos(1, 100, 1),
        ];
        assert_eq!(ends("alg1"), expected);
    }

    #[test]
    fn alg2_step_positions() {
        let expected = vec![
            pos(1, 0, 1),
            pos(1, 0, 1),
            pos(1, 0, 1),
            pos(1, 0, 1),
            pos(-1, 375, 4),
            pos(-1, 90, 1),
            pos(-1, 165, 2),
            pos(-1, 80, 1),
            pos(1, 0, 1),
            pos(1, 0, 1),
            pos(1, 10, 1),
            pos(1, 10, 1),
            pos(1, 25, 2),
            pos(1, 165, 8),
            pos(1, 125, 4),
            pos(1, 285, 4),
            pos(1, 100, 1),
        ];
        assert_eq!(ends("alg2"), expected);
    }

    #[test]
    fn alg3_step_positions() {
        let expected = vec![
            pos(1, 0, 1),
            pos(1, 0, 1),
            pos(1, 0, 1),
            pos(1, 0, 1),
            pos(-1, 2780, 29),
            pos(-1, 2580, 29),
            pos(-1, 2390, 29),
            pos(1, 0, 1),
            pos(1, 0, 1),
            pos(1, 0, 1),
            pos(1, 270, 29),
            pos(1, 10, 1),
            pos(1, 10, 1),
            pos(1, 715, 58),
            pos(1, 575, 29),
            pos(1, 685, 29),
            pos(1, 1035, 29),
            pos(1, 2195, 29),
            pos(1, 100, 1),
        ];
        assert_eq!(ends("alg3"), expected);
    }

    #[test]
    fn total_distances() {
        let twenty = Ratio::from(20);
        assert_eq!(builtin("alg1").unwrap().total_distance(), q(47, 2) * &twenty);
        assert_eq!(builtin("alg2").unwrap().total_distance(), q(361, 16) * &twenty);
        assert_eq!(builtin("alg3").unwrap().total_distance(), q(2693, 116) * &twenty);
        assert_eq!(builtin("alg1").unwrap().total_distance(), Ratio::from(470));
    }

    #[test]
    fn alg3_opens_with_short_round_trip() {
        let s = builtin("alg3").unwrap();
        assert!(s.phase().is_zero());
        assert_eq!(s.actions()[1], Action::Move(q(250, 29)));
        assert_eq!(s.actions()[3], Action::Move(q(-250, 29)));
        assert_eq!(q(500, 29) / Ratio::from(20), q(25, 29));
    }

    #[test]
    fn builtins_round_trip_through_text() {
        for name in builtin_names() {
            let s = builtin(name).unwrap();
            assert_eq!(parse_schedule(&format_schedule(&s)).unwrap(), s);
        }
    }

    #[test]
    fn unknown_builtin() {
        assert_eq!(builtin("alg4"), Err(ScheduleError::UnknownBuiltin("alg4".into())));
    }
}
