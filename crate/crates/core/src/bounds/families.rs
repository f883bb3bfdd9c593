//! Generators for the inequality families over `(t, γ, r, e₁, e₂, …)`.
//!
//! `dᵢ` is never a variable: every generator expands `dᵢ = ½eᵢ + ½eᵢ₊₁ + ½`
//! in place. In the part-A families `e₀` stands for `r`.

use std::fmt;
use std::str::FromStr;

use crate::ratio::{q, Ratio};

use super::linear::{LinExpr, LinIneq, Var};
use super::BoundsError;

/// Largest family index accepted by the generators.
pub const MAX_INDEX: u32 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `γ ≤ ½e₁ + ½r + ½`
    Gamm,
    SiC(u32),
    SiAB(u32),
    Sd(u32),
    Cbd(u32),
    Cbsi(u32),
    Rtd0,
    Rtd1(u32),
    Rtd2(u32),
    Rtsi(u32),
    /// `γ ≥ r + 1`, the hypothesis of the late-unsealing round trip.
    GammaAboveR,
    /// `e₁ + 1 = 5 − γ`, as a pair of inequalities.
    ComplementLink,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Gamm => f.write_str("gamm"),
            Family::SiC(k) => write!(f, "siC({k})"),
            Family::SiAB(k) => write!(f, "siAB({k})"),
            Family::Sd(k) => write!(f, "sd({k})"),
            Family::Cbd(k) => write!(f, "cbd({k})"),
            Family::Cbsi(k) => write!(f, "cbsi({k})"),
            Family::Rtd0 => f.write_str("rtd0"),
            Family::Rtd1(k) => write!(f, "rtd1({k})"),
            Family::Rtd2(k) => write!(f, "rtd2({k})"),
            Family::Rtsi(k) => write!(f, "rtsi({k})"),
            Family::GammaAboveR => f.write_str("gamma>=r+1"),
            Family::ComplementLink => f.write_str("link"),
        }
    }
}

fn half() -> Ratio {
    q(1, 2)
}

fn e(i: u32) -> LinExpr {
    LinExpr::var(Var::E(i))
}

/// `e_i` with `e₀ = r`.
fn e_or_r(i: u32) -> LinExpr {
    if i == 0 {
        LinExpr::var(Var::R)
    } else {
        e(i)
    }
}

fn sum_e(from: u32, to: u32, weight: i64) -> LinExpr {
    let mut out = LinExpr::zero();
    for i in from..=to {
        out.add_term(Var::E(i), &Ratio::from(weight));
    }
    out
}

/// `Σ_{i=from..=to} dᵢ`, with `e₀ = r`.
fn sum_d(from: u32, to: u32) -> LinExpr {
    let mut out = LinExpr::zero();
    for i in from..=to {
        out.add_scaled(&e_or_r(i), &half());
        out.add_scaled(&e_or_r(i + 1), &half());
        out.constant += half();
    }
    out
}

fn var(v: Var) -> LinExpr {
    LinExpr::var(v)
}

fn konst(n: i64) -> LinExpr {
    LinExpr::constant(Ratio::from(n))
}

fn half_t() -> LinExpr {
    var(Var::T).scaled(&half())
}

/// `(e₂ + r + 2)/2`
fn rt_reach() -> LinExpr {
    (e(2) + var(Var::R) + konst(2)).scaled(&half())
}

fn check_index(family: &'static str, k: u32, min: u32) -> Result<(), BoundsError> {
    if k < min || k > MAX_INDEX {
        Err(BoundsError::IndexOutOfRange { family, k, min, max: MAX_INDEX })
    } else {
        Ok(())
    }
}

impl Family {
    pub fn generate(&self) -> Result<Vec<LinIneq>, BoundsError> {
        let label = self.to_string();
        let one = |ineq: LinIneq| Ok(vec![ineq]);
        match *self {
            Family::Gamm => {
                let rhs = (e(1) + var(Var::R) + konst(1)).scaled(&half());
                one(LinIneq::le(var(Var::G), rhs, label))
            }
            Family::SiC(k) => {
                check_index("siC", k, 0)?;
                let lhs = var(Var::G).scaled(&Ratio::from(2)) - konst(1) + var(Var::R) + sum_e(1, k, 1);
                one(LinIneq::le(lhs, half_t(), label))
            }
            Family::SiAB(k) => {
                check_index("siAB", k, 0)?;
                let lhs = var(Var::G).scaled(&Ratio::from(2)) - konst(1)
                    + var(Var::R)
                    + (var(Var::R) - konst(1)).scaled(&half())
                    + sum_e(1, k, 1);
                one(LinIneq::le(lhs, half_t(), label))
            }
            Family::Sd(k) => {
                check_index("sd", k, 0)?;
                let lhs = var(Var::G) + var(Var::R) + sum_e(1, k, 2);
                one(LinIneq::le(lhs, sum_d(0, 2 * k + 1), label))
            }
            Family::Cbd(k) => {
                check_index("cbd", k, 1)?;
                let lhs = e(1) + sum_e(2, k, 2);
                one(LinIneq::le(lhs, sum_d(1, 2 * k - 1), label))
            }
            Family::Cbsi(k) => {
                check_index("cbsi", k, 1)?;
                let lhs = e(1) + sum_e(2, k, 2);
                one(LinIneq::le(lhs, var(Var::T) - konst(1), label))
            }
            Family::Rtd0 => one(LinIneq::le(var(Var::G), rt_reach(), label)),
            Family::Rtd1(k) => {
                check_index("rtd1", k, 2)?;
                let lhs = var(Var::G) + var(Var::R) + sum_e(2, k, 2);
                one(LinIneq::le(lhs, rt_reach() + sum_d(2, 2 * k), label))
            }
            Family::Rtd2(k) => {
                check_index("rtd2", k, 2)?;
                let lhs = var(Var::G) + var(Var::R) + (var(Var::R) - konst(1)) + sum_e(2, k, 2);
                one(LinIneq::le(lhs, rt_reach() + sum_d(2, 2 * k + 1), label))
            }
            Family::Rtsi(k) => {
                check_index("rtsi", k, 2)?;
                let lhs = var(Var::G) + var(Var::R) + (var(Var::R) - konst(1)) + sum_e(2, k, 1);
                one(LinIneq::le(lhs, half_t(), label))
            }
            Family::GammaAboveR => Ok(vec![LinIneq::ge(var(Var::G), var(Var::R) + konst(1), label)]),
            Family::ComplementLink => {
                let lhs = e(1) + konst(1);
                let rhs = konst(5) - var(Var::G);
                Ok(vec![
                    LinIneq::le(lhs.clone(), rhs.clone(), "link(<=)"),
                    LinIneq::ge(lhs, rhs, "link(>=)"),
                ])
            }
        }
    }
}

pub fn gen_part_a(family: Family) -> Result<LinIneq, BoundsError> {
    match family {
        Family::Gamm | Family::SiC(_) | Family::SiAB(_) | Family::Sd(_) => {
            Ok(family.generate()?.remove(0))
        }
        other => Err(BoundsError::WrongPart(other.to_string())),
    }
}

pub fn gen_part_b(family: Family) -> Result<LinIneq, BoundsError> {
    match family {
        Family::Cbd(_) | Family::Cbsi(_) => Ok(family.generate()?.remove(0)),
        other => Err(BoundsError::WrongPart(other.to_string())),
    }
}

pub fn gen_roundtrip(family: Family) -> Result<LinIneq, BoundsError> {
    match family {
        Family::Rtd0 | Family::Rtd1(_) | Family::Rtd2(_) | Family::Rtsi(_) => {
            Ok(family.generate()?.remove(0))
        }
        other => Err(BoundsError::WrongPart(other.to_string())),
    }
}

/// `t, γ, r ≥ 0` and `e₁ ≥ e₂ ≥ … ≥ e_kmax ≥ 0`.
pub fn ordering(kmax: u32) -> Vec<LinIneq> {
    let mut out = vec![
        LinIneq::new(var(Var::T), "t>=0"),
        LinIneq::new(var(Var::G), "gamma>=0"),
        LinIneq::new(var(Var::R), "r>=0"),
    ];
    for i in 1..=kmax {
        out.push(LinIneq::new(e(i), format!("e{i}>=0")));
    }
    for i in 1..kmax {
        out.push(LinIneq::new(e(i) - e(i + 1), format!("e{i}>=e{}", i + 1)));
    }
    out
}

fn max_e_index(ineqs: &[LinIneq]) -> u32 {
    ineqs
        .iter()
        .flat_map(|i| i.vars())
        .filter_map(|v| match v {
            Var::E(i) => Some(i),
            _ => None,
        })
        .max()
        .unwrap_or(1)
}

/// Ordering constraints sized to the families, followed by the families.
pub fn build_system(families: &[Family]) -> Result<Vec<LinIneq>, BoundsError> {
    let mut body = Vec::new();
    for f in families {
        body.extend(f.generate()?);
    }
    let mut system = ordering(max_e_index(&body));
    system.extend(body);
    Ok(system)
}

/// Parses a family list such as `gamm+siC:2..4+sd:0..1`.
///
/// Items are separated by `+` or whitespace; `name:k` or `name:a..b` select
/// indices.
pub fn parse_families(spec: &str) -> Result<Vec<Family>, BoundsError> {
    let bad = |msg: String| BoundsError::BadFamilySpec(msg);
    let mut out = Vec::new();
    for item in spec.split(|c: char| c == '+' || c.is_whitespace()).filter(|s| !s.is_empty()) {
        let (name, range) = match item.split_once(':') {
            Some((n, r)) => (n, Some(r)),
            None => (item, None),
        };
        let indices: Vec<u32> = match range {
            None => vec![],
            Some(r) => {
                let parse = |s: &str| s.trim().parse::<u32>().map_err(|_| bad(format!("bad index in `{item}`")));
                match r.split_once("..") {
                    Some((a, b)) => {
                        let (a, b) = (parse(a)?, parse(b)?);
                        if a > b {
                            return Err(bad(format!("empty range in `{item}`")));
                        }
                        (a..=b).collect()
                    }
                    None => vec![parse(r)?],
                }
            }
        };
        let indexed: Option<fn(u32) -> Family> = match name {
            "siC" => Some(Family::SiC),
            "siAB" => Some(Family::SiAB),
            "sd" => Some(Family::Sd),
            "cbd" => Some(Family::Cbd),
            "cbsi" => Some(Family::Cbsi),
            "rtd1" => Some(Family::Rtd1),
            "rtd2" => Some(Family::Rtd2),
            "rtsi" => Some(Family::Rtsi),
            _ => None,
        };
        match (indexed, range) {
            (Some(ctor), Some(_)) => out.extend(indices.into_iter().map(ctor)),
            (Some(_), None) => return Err(bad(format!("`{name}` needs an index"))),
            (None, None) => out.push(match name {
                "gamm" => Family::Gamm,
                "rtd0" => Family::Rtd0,
                "hyp" | "gamma>=r+1" => Family::GammaAboveR,
                "link" => Family::ComplementLink,
                other => return Err(bad(format!("unknown family `{other}`"))),
            }),
            (None, Some(_)) => return Err(bad(format!("`{name}` takes no index"))),
        }
    }
    if out.is_empty() {
        return Err(bad("no families given".into()));
    }
    Ok(out)
}

/// The systems the bound lines are proved from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedSystem {
    /// gamm, siC k=2..4, sd k=0..1
    PartAC,
    /// gamm, siAB k=2..4, sd k=0..1
    PartAAB,
    /// gamm, siC and siAB k=2..4, sd k=0..1
    PartA,
    /// cbd k=1..n, cbsi k=n+1..2n, e₁ + 1 = 5 − γ
    PartB(u32),
    /// rtd0, rtd1 k=2..4, rtd2 k=4..8, rtsi k=9..18
    RoundTrip,
    /// γ ≥ r+1, rtd0, rtd1 k=2..8, rtsi k=9..17
    RoundTripLate,
    /// as `RoundTripLate` with rtd2 in place of rtd1 for k=7,8
    RoundTripLateSwapped,
}

impl NamedSystem {
    pub fn families(&self) -> Vec<Family> {
        let mut f = Vec::new();
        match *self {
            NamedSystem::PartAC | NamedSystem::PartAAB | NamedSystem::PartA => {
                f.push(Family::Gamm);
                if *self != NamedSystem::PartAAB {
                    f.extend((2..=4).map(Family::SiC));
                }
                if *self != NamedSystem::PartAC {
                    f.extend((2..=4).map(Family::SiAB));
                }
                f.extend((0..=1).map(Family::Sd));
            }
            NamedSystem::PartB(n) => {
                f.extend((1..=n).map(Family::Cbd));
                f.extend((n + 1..=2 * n).map(Family::Cbsi));
                f.push(Family::ComplementLink);
            }
            NamedSystem::RoundTrip => {
                f.push(Family::Rtd0);
                f.extend((2..=4).map(Family::Rtd1));
                f.extend((4..=8).map(Family::Rtd2));
                f.extend((9..=18).map(Family::Rtsi));
            }
            NamedSystem::RoundTripLate | NamedSystem::RoundTripLateSwapped => {
                let swapped = *self == NamedSystem::RoundTripLateSwapped;
                f.push(Family::GammaAboveR);
                f.push(Family::Rtd0);
                for k in 2..=8 {
                    f.push(if swapped && k >= 7 { Family::Rtd2(k) } else { Family::Rtd1(k) });
                }
                f.extend((9..=17).map(Family::Rtsi));
            }
        }
        f
    }

    pub fn build(&self) -> Vec<LinIneq> {
        build_system(&self.families()).expect("named systems use valid indices")
    }
}

impl FromStr for NamedSystem {
    type Err = BoundsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(NamedSystem::PartA),
            "AC" => Ok(NamedSystem::PartAC),
            "AB" => Ok(NamedSystem::PartAAB),
            "B" | "b" => Ok(NamedSystem::PartB(7)),
            "roundtrip" => Ok(NamedSystem::RoundTrip),
            "roundtrip-late" => Ok(NamedSystem::RoundTripLate),
            "roundtrip-late-swapped" => Ok(NamedSystem::RoundTripLateSwapped),
            other => Err(BoundsError::BadFamilySpec(format!(
                "unknown part `{other}` (valid: A, AC, AB, B, roundtrip, roundtrip-late, roundtrip-late-swapped)"
            ))),
        }
    }
}
