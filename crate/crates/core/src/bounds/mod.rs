//! Linear lower bounds on walking time: inequality families, exact LP
//! certificates, Fourier–Motzkin projection, and composition of part bounds.

pub mod certify;
pub mod compose;
pub mod families;
pub mod fm;
pub mod linear;
pub mod simplex;

use thiserror::Error;

use crate::ratio::{q, Ratio};

pub use certify::{
    feasible_point, implies, min_t, minimize, Certificate, Extent, Minimum, Refutation, Verdict,
};
pub use compose::{compose_total, compose_total_in, envelope, roundtrip_pair};
pub use families::{
    build_system, gen_part_a, gen_part_b, gen_roundtrip, ordering, parse_families, Family,
    NamedSystem, MAX_INDEX,
};
pub use fm::{fm_eliminate, fm_feasible};
pub use linear::{Axis, BoundLine, LinExpr, LinIneq, Var, CIRCUIT_UNITS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("the inequality system is empty")]
    EmptySystem,
    #[error("the inequality system has no feasible point")]
    InfeasibleSystem,
    #[error("{family}({k}) is out of range (allowed {min}..={max})")]
    IndexOutOfRange { family: &'static str, k: u32, min: u32, max: u32 },
    #[error("family {0} does not belong to this part")]
    WrongPart(String),
    #[error("bad family list: {0}")]
    BadFamilySpec(String),
    #[error("no bound lines given")]
    EmptyLines,
    #[error("empty interval [{lo}, {hi}]")]
    EmptyInterval { lo: Ratio, hi: Ratio },
}

/// A bound line together with the system it is derived from.
#[derive(Debug, Clone)]
pub struct NamedLine {
    pub name: &'static str,
    pub system: NamedSystem,
    pub line: BoundLine,
    pub note: Option<&'static str>,
}

const UPPER_PRINTED: &str =
    "printed as `t <=` in the original derivation; it is a necessity and is certified as `t >=`";

/// The lower-bound lines for parts A and B and for the round trip.
pub fn known_lines() -> Vec<NamedLine> {
    let g = |a: Ratio, b: Ratio| BoundLine::gamma(a, b);
    let c = |a: Ratio, b: Ratio| BoundLine::complement(a, b);
    vec![
        NamedLine { name: "gammC", system: NamedSystem::PartAC, line: g(q(88, 7), q(-64, 7)), note: None },
        NamedLine { name: "gammAB", system: NamedSystem::PartAAB, line: g(q(14, 1), q(-11, 1)), note: None },
        NamedLine { name: "cbA", system: NamedSystem::PartB(5), line: c(q(96, 7), q(-258, 7)), note: None },
        NamedLine { name: "cbB", system: NamedSystem::PartB(6), line: c(q(16, 1), q(-45, 1)), note: None },
        NamedLine { name: "cbC", system: NamedSystem::PartB(7), line: c(q(96, 5), q(-284, 5)), note: None },
        NamedLine {
            name: "cbC-alt",
            system: NamedSystem::PartB(7),
            line: c(q(134, 7), q(-57, 1)),
            note: Some("the form used in the gamma <= 1 argument; implied but not tight"),
        },
        NamedLine { name: "rt", system: NamedSystem::RoundTrip, line: g(q(27, 1), q(-375, 8)), note: Some(UPPER_PRINTED) },
        NamedLine {
            name: "rt-late",
            system: NamedSystem::RoundTripLate,
            line: g(q(181, 7), q(-44, 1)),
            note: Some(UPPER_PRINTED),
        },
        NamedLine {
            name: "rt-late-swapped",
            system: NamedSystem::RoundTripLateSwapped,
            line: g(q(183, 7), q(-313, 7)),
            note: Some(UPPER_PRINTED),
        },
    ]
}

pub fn known_line(name: &str) -> Option<NamedLine> {
    known_lines().into_iter().find(|l| l.name == name)
}

/// Part-A and part-B lines used by the default composition.
pub fn default_composition_lines() -> (Vec<BoundLine>, Vec<BoundLine>) {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for l in known_lines() {
        match l.system {
            NamedSystem::PartAC | NamedSystem::PartAAB | NamedSystem::PartA => a.push(l.line),
            NamedSystem::PartB(_) => b.push(l.line),
            _ => {}
        }
    }
    (a, b)
}
