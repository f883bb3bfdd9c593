//! Exact-arithmetic engine for the ration-caching circuit puzzle: schedule
//! simulation and verification, linear lower-bound certificates, and a
//! brute-force search oracle.

pub mod ratio;
pub mod rules;
pub mod schedule;
pub mod simulator;
pub mod bounds;
pub mod search;

pub use ratio::{from_units, to_units, MilePos, ParseRatioError, Ratio};
pub use rules::{Preset, RuleSet};
pub use schedule::{builtin, format_schedule, parse_schedule, Action, Schedule, ScheduleError};
pub use simulator::{simulate, verify_total, SimReport, Violation, ViolationKind};
