use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ratio::Ratio;

/// Circuit length in day-units; part-B lines are written over `5 − γ`.
pub const CIRCUIT_UNITS: i64 = 5;

/// Variables of the bound systems: time, the cache position γ, the pivotal
/// unsealing position r, and the unsealing positions e₁, e₂, ….
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    T,
    G,
    R,
    E(u32),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::T => f.write_str("t"),
            Var::G => f.write_str("gamma"),
            Var::R => f.write_str("r"),
            Var::E(i) => write!(f, "e{i}"),
        }
    }
}

impl FromStr for Var {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "t" => Ok(Var::T),
            "gamma" | "g" => Ok(Var::G),
            "r" => Ok(Var::R),
            _ => s
                .strip_prefix('e')
                .and_then(|i| i.parse::<u32>().ok())
                .filter(|i| *i >= 1)
                .map(Var::E)
                .ok_or_else(|| format!("unknown variable `{s}`")),
        }
    }
}

impl Serialize for Var {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Var {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An affine expression `Σ cᵥ·v + constant`, zero coefficients never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LinExpr {
    pub coefficients: BTreeMap<Var, Ratio>,
    pub constant: Ratio,
}

impl LinExpr {
    pub fn zero() -> Self {
        LinExpr::default()
    }

    pub fn constant(c: Ratio) -> Self {
        LinExpr { coefficients: BTreeMap::new(), constant: c }
    }

    pub fn var(v: Var) -> Self {
        LinExpr::zero().plus(v, Ratio::one())
    }

    pub fn plus(mut self, v: Var, c: Ratio) -> Self {
        self.add_term(v, &c);
        self
    }

    pub fn plus_const(mut self, c: Ratio) -> Self {
        self.constant += c;
        self
    }

    pub fn add_term(&mut self, v: Var, c: &Ratio) {
        if c.is_zero() {
            return;
        }
        let sum = self.coefficients.get(&v).cloned().unwrap_or_else(Ratio::zero) + c;
        if sum.is_zero() {
            self.coefficients.remove(&v);
        } else {
            self.coefficients.insert(v, sum);
        }
    }

    pub fn add_scaled(&mut self, other: &LinExpr, factor: &Ratio) {
        if factor.is_zero() {
            return;
        }
        for (v, c) in &other.coefficients {
            self.add_term(*v, &(c * factor));
        }
        self.constant += &other.constant * factor;
    }

    pub fn scaled(&self, factor: &Ratio) -> LinExpr {
        let mut out = LinExpr::zero();
        out.add_scaled(self, factor);
        out
    }

    pub fn coefficient(&self, v: Var) -> Ratio {
        self.coefficients.get(&v).cloned().unwrap_or_else(Ratio::zero)
    }

    /// Evaluates at a point; variables missing from the point count as 0.
    pub fn eval(&self, point: &BTreeMap<Var, Ratio>) -> Ratio {
        let mut value = self.constant.clone();
        for (v, c) in &self.coefficients {
            if let Some(x) = point.get(v) {
                value += c * x;
            }
        }
        value
    }

    pub fn is_constant(&self) -> bool {
        self.coefficients.is_empty()
    }
}

impl Add for LinExpr {
    type Output = LinExpr;
    fn add(mut self, rhs: LinExpr) -> LinExpr {
        self.add_scaled(&rhs, &Ratio::one());
        self
    }
}

impl Sub for LinExpr {
    type Output = LinExpr;
    fn sub(mut self, rhs: LinExpr) -> LinExpr {
        self.add_scaled(&rhs, &-Ratio::one());
        self
    }
}

impl fmt::Display for LinExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in &self.coefficients {
            let (sign, mag) = if c.is_negative() { ("-", c.abs()) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mag == Ratio::one() {
                write!(f, "{v}")?;
            } else {
                write!(f, "{mag}*{v}")?;
            }
            first = false;
        }
        if first {
            write!(f, "{}", self.constant)
        } else if self.constant.is_negative() {
            write!(f, " - {}", self.constant.abs())
        } else if self.constant.is_positive() {
            write!(f, " + {}", self.constant)
        } else {
            Ok(())
        }
    }
}

/// A linear inequality in normal form `expr ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinIneq {
    #[serde(flatten)]
    pub expr: LinExpr,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub label: String,
}

impl LinIneq {
    pub fn new(expr: LinExpr, label: impl Into<String>) -> Self {
        LinIneq { expr, label: label.into() }
    }

    /// `lhs ≤ rhs`.
    pub fn le(lhs: LinExpr, rhs: LinExpr, label: impl Into<String>) -> Self {
        LinIneq::new(rhs - lhs, label)
    }

    /// `lhs ≥ rhs`.
    pub fn ge(lhs: LinExpr, rhs: LinExpr, label: impl Into<String>) -> Self {
        LinIneq::new(lhs - rhs, label)
    }

    pub fn coefficient(&self, v: Var) -> Ratio {
        self.expr.coefficient(v)
    }

    pub fn constant(&self) -> &Ratio {
        &self.expr.constant
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.expr.coefficients.keys().copied()
    }

    pub fn holds_at(&self, point: &BTreeMap<Var, Ratio>) -> bool {
        !self.expr.eval(point).is_negative()
    }

    /// Same half-space, scaled so the first nonzero coefficient is ±1.
    pub fn normalized(&self) -> LinIneq {
        match self.expr.coefficients.values().next() {
            Some(c) => LinIneq::new(self.expr.scaled(&c.abs().recip()), self.label.clone()),
            None => self.clone(),
        }
    }

    /// True when the expression is a constant `c ≥ 0` with `c ≥ 0`.
    pub fn is_trivially_true(&self) -> bool {
        self.expr.is_constant() && !self.expr.constant.is_negative()
    }
}

impl fmt::Display for LinIneq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} >= 0", self.expr)?;
        if !self.label.is_empty() {
            write!(f, "  [{}]", self.label)?;
        }
        Ok(())
    }
}

/// Which quantity a bound line is written over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    /// `t ≥ a·γ + b`
    Gamma,
    /// `t ≥ a·(5 − γ) + b`
    Complement,
}

/// The claim `t ≥ a·x + b` where `x` is γ or `5 − γ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundLine {
    pub a: Ratio,
    pub b: Ratio,
    pub axis: Axis,
}

impl BoundLine {
    pub fn gamma(a: Ratio, b: Ratio) -> Self {
        BoundLine { a, b, axis: Axis::Gamma }
    }

    pub fn complement(a: Ratio, b: Ratio) -> Self {
        BoundLine { a, b, axis: Axis::Complement }
    }

    /// Value of the right-hand side at `gamma`.
    pub fn eval(&self, gamma: &Ratio) -> Ratio {
        let x = match self.axis {
            Axis::Gamma => gamma.clone(),
            Axis::Complement => Ratio::from(CIRCUIT_UNITS) - gamma,
        };
        &self.a * &x + &self.b
    }

    /// `t − (a·x + b)` as an affine expression in `t` and γ.
    pub fn slack_expr(&self) -> LinExpr {
        let rhs = match self.axis {
            Axis::Gamma => LinExpr::var(Var::G).scaled(&self.a).plus_const(self.b.clone()),
            Axis::Complement => LinExpr::var(Var::G)
                .scaled(&-&self.a)
                .plus_const(&self.a * Ratio::from(CIRCUIT_UNITS) + &self.b),
        };
        LinExpr::var(Var::T) - rhs
    }

    pub fn as_ineq(&self) -> LinIneq {
        LinIneq::new(self.slack_expr(), self.to_string())
    }
}

impl fmt::Display for BoundLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = match self.axis {
            Axis::Gamma => "gamma",
            Axis::Complement => "(5 - gamma)",
        };
        write!(f, "t >= {}*{}", self.a, x)?;
        if self.b.is_negative() {
            write!(f, " - {}", self.b.abs())
        } else {
            write!(f, " + {}", self.b)
        }
    }
}
