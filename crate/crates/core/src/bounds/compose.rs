//! Combining part bounds into a bound on the whole circuit.

use crate::ratio::Ratio;

use super::linear::{Axis, BoundLine, CIRCUIT_UNITS};
use super::BoundsError;

/// `max` of the lines at γ.
pub fn envelope(lines: &[BoundLine], gamma: &Ratio) -> Option<Ratio> {
    lines.iter().map(|l| l.eval(gamma)).max()
}

/// Slope and intercept in γ.
fn in_gamma(line: &BoundLine) -> (Ratio, Ratio) {
    match line.axis {
        Axis::Gamma => (line.a.clone(), line.b.clone()),
        Axis::Complement => (-line.a.clone(), &line.a * Ratio::from(CIRCUIT_UNITS) + &line.b),
    }
}

fn crossings(lines: &[BoundLine], out: &mut Vec<Ratio>) {
    let forms: Vec<_> = lines.iter().map(in_gamma).collect();
    for (i, (a1, b1)) in forms.iter().enumerate() {
        for (a2, b2) in &forms[i + 1..] {
            if a1 != a2 {
                out.push((b2 - b1) / (a1 - a2));
            }
        }
    }
}

/// Minimizes `γ + max A(γ) + max B(γ)` over `[lo, hi]`; ties go to the
/// smallest γ.
pub fn compose_total_in(
    a_lines: &[BoundLine],
    b_lines: &[BoundLine],
    lo: &Ratio,
    hi: &Ratio,
) -> Result<(Ratio, Ratio), BoundsError> {
    if a_lines.is_empty() || b_lines.is_empty() {
        return Err(BoundsError::EmptyLines);
    }
    if lo > hi {
        return Err(BoundsError::EmptyInterval { lo: lo.clone(), hi: hi.clone() });
    }
    let mut candidates = vec![lo.clone(), hi.clone()];
    crossings(a_lines, &mut candidates);
    crossings(b_lines, &mut candidates);
    candidates.retain(|g| g >= lo && g <= hi);
    candidates.sort();
    candidates.dedup();
    let f = |g: &Ratio| g + envelope(a_lines, g).unwrap() + envelope(b_lines, g).unwrap();
    let mut best: Option<(Ratio, Ratio)> = None;
    for g in candidates {
        let v = f(&g);
        if best.as_ref().map_or(true, |(_, bv)| v < *bv) {
            best = Some((g, v));
        }
    }
    Ok(best.expect("interval endpoints are candidates"))
}

/// [`compose_total_in`] over the whole circuit `[0, 5]`.
pub fn compose_total(a_lines: &[BoundLine], b_lines: &[BoundLine]) -> Result<(Ratio, Ratio), BoundsError> {
    compose_total_in(a_lines, b_lines, &Ratio::zero(), &Ratio::from(CIRCUIT_UNITS))
}

/// Two round trips, to γ and to `5 − γ`, each bounded by the same lines.
pub fn roundtrip_pair(lines: &[BoundLine], gamma: &Ratio) -> Option<Ratio> {
    let other = Ratio::from(CIRCUIT_UNITS) - gamma;
    Some(envelope(lines, gamma)? + envelope(lines, &other)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::default_composition_lines;
    use crate::ratio::q;

    fn g(a: Ratio, b: Ratio) -> BoundLine {
        BoundLine::gamma(a, b)
    }

    fn c(a: Ratio, b: Ratio) -> BoundLine {
        BoundLine::complement(a, b)
    }

    #[test]
    fn alg2_optimum() {
        let a = [g(q(14, 1), q(-11, 1))];
        let b = [c(q(96, 7), q(-258, 7)), c(q(16, 1), q(-45, 1))];
        assert_eq!(compose_total(&a, &b).unwrap(), (q(23, 16), q(361, 16)));
    }

    #[test]
    fn default_set_keeps_the_optimum() {
        let (a, b) = default_composition_lines();
        assert_eq!(compose_total(&a, &b).unwrap(), (q(23, 16), q(361, 16)));
    }

    #[test]
    fn flat_lines_pick_zero() {
        let z = Ratio::zero;
        assert_eq!(compose_total(&[g(z(), z())], &[c(z(), z())]).unwrap(), (z(), z()));
    }

    #[test]
    fn restricted_interval() {
        let a = [g(q(88, 7), q(-64, 7))];
        let b = [c(q(134, 7), q(-57, 1))];
        assert_eq!(compose_total_in(&a, &b, &Ratio::zero(), &Ratio::one()).unwrap(), (Ratio::one(), Ratio::from(24)));
    }

    #[test]
    fn doubled_round_trip() {
        let rt = [g(q(27, 1), q(-375, 8))];
        assert_eq!(roundtrip_pair(&rt, &q(5, 2)), Some(q(165, 4)));
    }

    #[test]
    fn errors() {
        assert_eq!(compose_total(&[], &[c(Ratio::one(), Ratio::one())]), Err(BoundsError::EmptyLines));
        let l = [g(Ratio::one(), Ratio::one())];
        assert!(matches!(
            compose_total_in(&l, &l, &Ratio::one(), &Ratio::zero()),
            Err(BoundsError::EmptyInterval { .. })
        ));
    }
}
