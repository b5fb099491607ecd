//! Exact simplex over the rationals for `max c·y  s.t.  A y ≤ b, y ≥ 0` with `b ≥ 0`.
//!
//! The slack basis is feasible at the origin, so no phase one is needed.
//! Pivoting uses Bland's rule on a compact (Tucker) tableau, which rules out
//! cycling under degeneracy.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub value: BigRational,
    /// Optimal `y`, one entry per column of `A`.
    pub primal: Vec<BigRational>,
    /// Optimal multipliers `x ≥ 0` for the rows, with `Aᵀx ≥ c` and `b·x = value`.
    pub dual: Vec<BigRational>,
    pub pivots: usize,
}

/// Solves the LP; `a` is row-major with `rows × cols` entries.
pub fn maximize(
    a: &[Vec<BigRational>],
    b: &[BigRational],
    c: &[BigRational],
) -> Result<LpSolution> {
    let rows = a.len();
    let cols = c.len();
    if b.len() != rows || a.iter().any(|r| r.len() != cols) {
        return Err(Error::input("LP dimensions disagree"));
    }
    if b.iter().any(Signed::is_negative) {
        return Err(Error::input("right-hand side must be nonnegative"));
    }
    // tableau: rows 0..rows are constraints, row `rows` is the objective; column `cols` is the rhs.
    // Row i reads  basic_i = t[i][cols] - Σ_j t[i][j]·nonbasic_j,
    // the objective  z = t[rows][cols] - Σ_j t[rows][j]·nonbasic_j.
    let mut t: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            row.iter()
                .cloned()
                .chain(std::iter::once(bi.clone()))
                .collect()
        })
        .collect();
    t.push(
        c.iter()
            .map(|x| -x)
            .chain(std::iter::once(BigRational::zero()))
            .collect(),
    );
    // labels: structural variables are 0..cols, slacks are cols..cols+rows
    let mut basic: Vec<usize> = (cols..cols + rows).collect();
    let mut nonbasic: Vec<usize> = (0..cols).collect();
    let mut pivots = 0;

    loop {
        let entering = (0..cols)
            .filter(|&j| t[rows][j].is_negative())
            .min_by_key(|&j| nonbasic[j]);
        let Some(s) = entering else { break };
        let leaving = (0..rows)
            .filter(|&i| t[i][s].is_positive())
            .map(|i| (&t[i][cols] / &t[i][s], basic[i], i))
            .min_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)));
        let Some((_, _, r)) = leaving else {
            return Err(Error::input("LP is unbounded"));
        };
        pivot(&mut t, r, s);
        std::mem::swap(&mut basic[r], &mut nonbasic[s]);
        pivots += 1;
    }

    let mut primal = vec![BigRational::zero(); cols];
    for (i, &label) in basic.iter().enumerate() {
        if label < cols {
            primal[label] = t[i][cols].clone();
        }
    }
    let mut dual = vec![BigRational::zero(); rows];
    for (j, &label) in nonbasic.iter().enumerate() {
        if label >= cols {
            dual[label - cols] = t[rows][j].clone();
        }
    }
    Ok(LpSolution {
        value: t[rows][cols].clone(),
        primal,
        dual,
        pivots,
    })
}

fn pivot(t: &mut [Vec<BigRational>], r: usize, s: usize) {
    let p = t[r][s].clone();
    let width = t[r].len();
    for (j, x) in t[r].iter_mut().enumerate() {
        if j != s {
            *x = &*x / &p;
        }
    }
    t[r][s] = p.recip();
    let pivot_row = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[s].is_zero() {
            continue;
        }
        let factor = row[s].clone();
        for j in 0..width {
            if j != s {
                row[j] = &row[j] - &factor * &pivot_row[j];
            }
        }
        row[s] = -(&factor * &pivot_row[s]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y  s.t. x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18  → 36 at (2, 6)
        let a = vec![vec![r(1), r(0)], vec![r(0), r(2)], vec![r(3), r(2)]];
        let sol = maximize(&a, &[r(4), r(12), r(18)], &[r(3), r(5)]).unwrap();
        assert_eq!(sol.value, r(36));
        assert_eq!(sol.primal, vec![r(2), r(6)]);
        // dual optimum (0, 3/2, 1)
        assert_eq!(
            sol.dual,
            vec![
                r(0),
                BigRational::new(BigInt::from(3), BigInt::from(2)),
                r(1)
            ]
        );
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Beale-style degenerate vertex at the origin
        let a = vec![vec![r(1), r(-1)], vec![r(-1), r(1)], vec![r(1), r(1)]];
        let sol = maximize(&a, &[r(0), r(0), r(2)], &[r(1), r(1)]).unwrap();
        assert_eq!(sol.value, r(2));
    }

    #[test]
    fn unbounded_and_bad_input() {
        assert!(maximize(&[vec![r(-1)]], &[r(1)], &[r(1)]).is_err());
        assert!(maximize(&[vec![r(1)]], &[r(-1)], &[r(1)]).is_err());
        assert!(maximize(&[vec![r(1), r(2)]], &[r(1)], &[r(1)]).is_err());
    }
}
