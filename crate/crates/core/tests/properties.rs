mod common;

use proptest::prelude::*;

use circuit_core::ratio::q;
use common::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn ledger_identity(s in schedule(), p in preset()) {
        ledger_balances(&s, p)?;
    }

    #[test]
    fn marks_track_distance(s in schedule()) {
        marks_follow_distance(&s)?;
    }

    #[test]
    fn mirrored_walks_match(s in schedule(), p in preset()) {
        mirror_symmetry(&s, p)?;
    }

    #[test]
    fn scaling_units_changes_nothing(s in schedule(), p in preset(), n in 1i64..=7, d in 1i64..=5) {
        scale_invariance(&s, p, &q(n, d))?;
    }

    #[test]
    fn text_round_trip(s in schedule()) {
        parse_format_round_trip(&s)?;
    }

    #[test]
    fn fm_projection_keeps_feasible_points((sys, point) in system_with_point(4), which in 0usize..4) {
        fm_keeps_feasible_points(&sys, &point, vars(4)[which])?;
    }

    #[test]
    fn fm_and_lp_agree_on_feasibility(nvars in 1usize..=6, seed in system(6, 1..=6)) {
        fm_agrees_with_lp(&restrict(seed, nvars))?;
    }

    #[test]
    fn certificates_and_witnesses_check_out((sys, point) in system_with_point(3), a in small_ratio(), b in small_ratio()) {
        certificate_soundness(sys, &point, a, b)?;
    }

    #[test]
    fn known_lines_stay_below_the_envelope(idx in 0usize..9, n in 0i64..=80) {
        line_below_envelope(idx, &q(n, 16))?;
    }
}
