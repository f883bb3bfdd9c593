//! Exact two-phase tableau simplex with Bland's rule.
//!
//! Solves `min c·z` subject to `A z = b`, `z ≥ 0`.

use crate::ratio::Ratio;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpResult {
    Optimal { value: Ratio, point: Vec<Ratio> },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Ratio>>,
    /// Reduced costs; the last entry is minus the objective value.
    z: Vec<Ratio>,
    basis: Vec<usize>,
    rhs: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].recip();
        for x in self.rows[r].iter_mut() {
            *x = &*x * &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        if !self.z[col].is_zero() {
            let f = self.z[col].clone();
            for (x, y) in self.z.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = col;
    }

    /// Runs to optimality over columns `0..allowed`; false when unbounded.
    fn run(&mut self, allowed: usize) -> bool {
        loop {
            let Some(col) = (0..allowed).find(|&j| self.z[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Ratio)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[col].is_positive() {
                    continue;
                }
                let ratio = &row[self.rhs] / &row[col];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, col),
                None => return false,
            }
        }
    }

    fn set_costs(&mut self, cost: &[Ratio]) {
        let mut z: Vec<Ratio> = (0..=self.rhs).map(|j| cost.get(j).cloned().unwrap_or_else(Ratio::zero)).collect();
        z[self.rhs] = Ratio::zero();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = cost.get(b).cloned().unwrap_or_else(Ratio::zero);
            if cb.is_zero() {
                continue;
            }
            for (x, y) in z.iter_mut().zip(row) {
                *x -= &cb * y;
            }
        }
        self.z = z;
    }
}

pub fn solve(a: &[Vec<Ratio>], b: &[Ratio], c: &[Ratio]) -> LpResult {
    let m = a.len();
    let n = c.len();
    let rhs = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (ai, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut row = vec![Ratio::zero(); rhs + 1];
        for (j, x) in ai.iter().enumerate() {
            row[j] = if flip { -x } else { x.clone() };
        }
        row[n + i] = Ratio::one();
        row[rhs] = bi.abs();
        rows.push(row);
    }
    let mut t = Tableau { rows, z: Vec::new(), basis: (n..n + m).collect(), rhs };

    let mut phase1 = vec![Ratio::zero(); rhs];
    for x in &mut phase1[n..] {
        *x = Ratio::one();
    }
    t.set_costs(&phase1);
    t.run(n);
    if t.z[rhs].is_negative() {
        return LpResult::Infeasible;
    }

    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => {
                    t.pivot(i, j);
                    i += 1;
                }
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }

    t.set_costs(c);
    if !t.run(n) {
        return LpResult::Unbounded;
    }
    let mut point = vec![Ratio::zero(); n];
    for (row, &bcol) in t.rows.iter().zip(&t.basis) {
        point[bcol] = row[rhs].clone();
    }
    LpResult::Optimal { value: -t.z[rhs].clone(), point }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::q;

    fn r(n: i64) -> Ratio {
        Ratio::from(n)
    }

    #[test]
    fn small_optimum() {
        // min -x - y  s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
        let a = vec![vec![r(1), r(2), r(1), r(0)], vec![r(3), r(1), r(0), r(1)]];
        let b = vec![r(4), r(6)];
        let c = vec![r(-1), r(-1), r(0), r(0)];
        match solve(&a, &b, &c) {
            LpResult::Optimal { value, point } => {
                assert_eq!(value, q(-14, 5));
                assert_eq!(point[0], q(8, 5));
                assert_eq!(point[1], q(6, 5));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = vec![vec![r(1), r(1)]];
        assert_eq!(solve(&a, &[r(-1)], &[r(0), r(0)]), LpResult::Infeasible);
        let a = vec![vec![r(1), r(-1)]];
        assert_eq!(solve(&a, &[r(1)], &[r(0), r(-1)]), LpResult::Unbounded);
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let a = vec![vec![r(1), r(1)], vec![r(2), r(2)]];
        match solve(&a, &[r(1), r(2)], &[r(1), r(2)]) {
            LpResult::Optimal { value, .. } => assert_eq!(value, r(1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_cycle_example_terminates() {
        // Beale's cycling example in equality form.
        let a = vec![
            vec![q(1, 4), r(-60), q(-1, 25), r(9), r(1), r(0), r(0)],
            vec![q(1, 2), r(-90), q(-1, 50), r(3), r(0), r(1), r(0)],
            vec![r(0), r(0), r(1), r(0), r(0), r(0), r(1)],
        ];
        let b = vec![r(0), r(0), r(1)];
        let c = vec![q(-3, 4), r(150), q(-1, 50), r(6), r(0), r(0), r(0)];
        match solve(&a, &b, &c) {
            LpResult::Optimal { value, .. } => assert_eq!(value, q(-1, 20)),
            other => panic!("{other:?}"),
        }
    }
}
