//! Game value and optimal strategies via linear programming, an independent
//! support-enumeration oracle for small games, and optimal-dominated tests.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{validate_strategy, GameMatrix, MixedStrategy, Player};
use crate::lp::{solve_lp, LinearProgram, LpStatus, DEFAULT_FEAS_TOL};

/// Largest dimension `oracle_solve` accepts on either side.
pub const ORACLE_MAX_DIM: usize = 5;
/// Slack allowed on pure deviations when accepting an oracle candidate.
pub const ORACLE_DEVIATION_TOL: f64 = 1e-8;
pub const DEFAULT_SOLVE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameSolution {
    pub value: f64,
    pub row_strategy: MixedStrategy,
    pub col_strategy: MixedStrategy,
    pub duality_gap: f64,
    pub tolerance: f64,
}

impl GameSolution {
    /// `min_j (x^T A)_j` for the returned row strategy.
    pub fn row_guarantee(&self, a: &GameMatrix) -> f64 {
        let xa = a.vec_mul(self.row_strategy.weights()).expect("sized at solve time");
        xa.into_iter().fold(f64::INFINITY, f64::min)
    }

    /// `max_i (A y)_i` for the returned column strategy.
    pub fn col_ceiling(&self, a: &GameMatrix) -> f64 {
        let ay = a.mul_vec(self.col_strategy.weights()).expect("sized at solve time");
        ay.into_iter().fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSolution {
    pub value: f64,
    pub row_support: Vec<usize>,
    pub col_support: Vec<usize>,
    pub row_strategy: MixedStrategy,
    pub col_strategy: MixedStrategy,
}

/// Solves `maximize v` s.t. `(x^T B)_j >= v`, `sum x = 1`, `x >= 0` for a matrix whose
/// entries are all at least one, so `v` may be bounded below by zero.
/// Returns the optimal `x` and `v`.
fn max_guarantee(b: &GameMatrix, feas_tol: f64) -> Result<(Vec<f64>, f64)> {
    let m = b.rows();
    let mut obj = vec![0.0; m + 1];
    obj[m] = 1.0;
    let mut lp = LinearProgram::maximize(obj);
    for j in 0..b.cols() {
        // v - sum_i x_i b_ij <= 0
        let mut row: Vec<f64> = (0..m).map(|i| -b.get(i, j)).collect();
        row.push(1.0);
        lp = lp.le(row, 0.0);
    }
    let mut sum = vec![1.0; m];
    sum.push(0.0);
    lp = lp.eq(sum, 1.0);
    let sol = solve_lp(&lp, feas_tol)?;
    match sol.status {
        LpStatus::Optimal => {
            let mut z = sol.point.expect("optimal has a point");
            let v = z.pop().expect("value variable");
            Ok((z, v))
        }
        LpStatus::Infeasible => Err(Error::UnexpectedLpStatus("infeasible")),
        LpStatus::Unbounded => Err(Error::UnexpectedLpStatus("unbounded")),
    }
}

/// Computes `v(A)` with one optimal strategy for each player.
///
/// The matrix is first shifted by `c = 1 - min a_ij` (when the minimum is below one) so the
/// value is at least one. The row LP maximizes the guaranteed payoff; the column strategy
/// comes from the same LP posed for `-(A + cJ)^T` rather than from simplex multipliers.
pub fn solve_game(a: &GameMatrix, tol: f64) -> Result<GameSolution> {
    solve_game_with(a, tol, DEFAULT_FEAS_TOL)
}

/// `solve_game` with an explicit LP feasibility tolerance.
pub fn solve_game_with(a: &GameMatrix, tol: f64, feas_tol: f64) -> Result<GameSolution> {
    let min = a.min_entry();
    let shift = if min < 1.0 { 1.0 - min } else { 0.0 };
    let b = a.shifted(shift);
    let (x, v) = max_guarantee(&b, feas_tol)?;

    // Column player: minimize w s.t. (B y)_i <= w. With C = (1 + max b) J - B^T (entries >= 1),
    // maximizing the guarantee of C yields the same y and w = (1 + max b) - guarantee.
    let bmax = b.entries().iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let top = 1.0 + bmax;
    let c = b.transpose().negated().shifted(top);
    let (y, _) = max_guarantee(&c, feas_tol)?;

    let row_strategy = validate_strategy(Player::Row, &x)?;
    let col_strategy = validate_strategy(Player::Col, &y)?;
    let mut sol = GameSolution {
        value: v - shift,
        row_strategy,
        col_strategy,
        duality_gap: 0.0,
        tolerance: tol,
    };
    let floor = sol.row_guarantee(a);
    let ceiling = sol.col_ceiling(a);
    sol.duality_gap = (ceiling - floor).max(0.0);
    if sol.duality_gap > tol {
        return Err(Error::DualityGap {
            gap: sol.duality_gap,
            tolerance: tol,
        });
    }
    Ok(sol)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Solves the square system `m z = rhs` with partial pivoting; `None` if singular.
fn solve_dense(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    let scale = m
        .iter()
        .flatten()
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(1.0);
    for col in 0..n {
        let p = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[p][col].abs() <= 1e-12 * scale {
            return None;
        }
        m.swap(col, p);
        rhs.swap(col, p);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            if f != 0.0 {
                for c in col..n {
                    m[r][c] -= f * m[col][c];
                }
                rhs[r] -= f * rhs[col];
            }
        }
    }
    let mut z = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| m[r][c] * z[c]).sum();
        z[r] = (rhs[r] - s) / m[r][r];
    }
    Some(z)
}

/// Weights on `support` that equalize the payoff against every opponent index in `against`,
/// plus the common payoff. `entry(s, t)` is the payoff of own strategy `s` vs opponent `t`.
fn equalize(
    support: &[usize],
    against: &[usize],
    entry: impl Fn(usize, usize) -> f64,
) -> Option<(Vec<f64>, f64)> {
    let k = support.len();
    let mut m = Vec::with_capacity(k + 1);
    for &t in against {
        let mut row: Vec<f64> = support.iter().map(|&s| entry(s, t)).collect();
        row.push(-1.0);
        m.push(row);
    }
    let mut last = vec![1.0; k];
    last.push(0.0);
    m.push(last);
    let mut rhs = vec![0.0; k];
    rhs.push(1.0);
    let mut z = solve_dense(m, rhs)?;
    let v = z.pop()?;
    Some((z, v))
}

/// Brute-force equilibrium search over equal-size support pairs, for games up to 5x5.
///
/// Supports are tried by increasing size, then lexicographically by row support and column
/// support; the first pair whose equalizing strategies are nonnegative and admit no pure
/// deviation gaining more than `1e-8` for either player is returned.
pub fn oracle_solve(a: &GameMatrix) -> Result<OracleSolution> {
    let (m, n) = (a.rows(), a.cols());
    if m > ORACLE_MAX_DIM || n > ORACLE_MAX_DIM {
        return Err(Error::OracleSizeLimit { rows: m, cols: n });
    }
    for k in 1..=m.min(n) {
        for rows in combinations(m, k) {
            for cols in combinations(n, k) {
                let Some((xs, v)) = equalize(&rows, &cols, |i, j| a.get(i, j)) else {
                    continue;
                };
                let Some((ys, w)) = equalize(&cols, &rows, |j, i| a.get(i, j)) else {
                    continue;
                };
                if xs.iter().chain(&ys).any(|&p| p < -ORACLE_DEVIATION_TOL) {
                    continue;
                }
                let mut x = vec![0.0; m];
                for (&i, &p) in rows.iter().zip(&xs) {
                    x[i] = p.max(0.0);
                }
                let mut y = vec![0.0; n];
                for (&j, &p) in cols.iter().zip(&ys) {
                    y[j] = p.max(0.0);
                }
                let value = 0.5 * (v + w);
                let xa = a.vec_mul(&x)?;
                let ay = a.mul_vec(&y)?;
                let row_ok = xa.iter().all(|&p| p >= value - ORACLE_DEVIATION_TOL);
                let col_ok = ay.iter().all(|&p| p <= value + ORACLE_DEVIATION_TOL);
                if !(row_ok && col_ok) {
                    continue;
                }
                let row_strategy = validate_strategy(Player::Row, &x)?;
                let col_strategy = validate_strategy(Player::Col, &y)?;
                return Ok(OracleSolution {
                    value,
                    row_support: rows,
                    col_support: cols,
                    row_strategy,
                    col_strategy,
                });
            }
        }
    }
    Err(Error::NoValidSupport)
}

/// Whether `s` earns exactly `v` against every pure reply, i.e. `s^T A = v 1` for the row
/// player or `A s = v 1` for the column player, up to `tol`.
pub fn is_optimal_dominated(a: &GameMatrix, s: &MixedStrategy, v: f64, tol: f64) -> Result<bool> {
    s.check_against(a)?;
    let payoffs = match s.player() {
        Player::Row => a.vec_mul(s.weights())?,
        Player::Col => a.mul_vec(s.weights())?,
    };
    Ok(payoffs.iter().all(|p| (p - v).abs() <= tol))
}

/// Extremes of each column payoff `(x^T A)_j` over the optimal row strategies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnExtremes {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl ColumnExtremes {
    pub fn max_deviation(&self, v: f64) -> f64 {
        self.min
            .iter()
            .chain(&self.max)
            .fold(0.0f64, |acc, p| acc.max((p - v).abs()))
    }
}

/// Relative size of the slack used to describe the optimal-strategy polytope.
const POLYTOPE_SLACK_FRACTION: f64 = 1e-2;

/// Minimizes and maximizes every column payoff over the polytope
/// `{x stochastic : (x^T A)_k >= v - slack for all k}` with `slack = tol / 100`.
pub fn row_optima_column_extremes(a: &GameMatrix, v: f64, tol: f64) -> Result<ColumnExtremes> {
    row_optima_column_extremes_with(a, v, tol, DEFAULT_FEAS_TOL)
}

pub fn row_optima_column_extremes_with(
    a: &GameMatrix,
    v: f64,
    tol: f64,
    feas_tol: f64,
) -> Result<ColumnExtremes> {
    let (m, n) = (a.rows(), a.cols());
    let slack = tol * POLYTOPE_SLACK_FRACTION;
    let mut base = LinearProgram::feasibility(m).eq(vec![1.0; m], 1.0);
    for k in 0..n {
        let col: Vec<f64> = (0..m).map(|i| a.get(i, k)).collect();
        base = base.ge(col, v - slack);
    }
    let mut extremes = ColumnExtremes {
        min: Vec::with_capacity(n),
        max: Vec::with_capacity(n),
    };
    for j in 0..n {
        let col: Vec<f64> = (0..m).map(|i| a.get(i, j)).collect();
        for sign in [1.0, -1.0] {
            let mut lp = base.clone();
            lp.objective = col.iter().map(|c| sign * c).collect();
            let sol = solve_lp(&lp, feas_tol)?;
            let obj = match sol.status {
                LpStatus::Optimal => sol.objective_value.expect("optimal has a value"),
                LpStatus::Infeasible => return Err(Error::UnexpectedLpStatus("infeasible")),
                LpStatus::Unbounded => return Err(Error::UnexpectedLpStatus("unbounded")),
            };
            if sign > 0.0 {
                extremes.max.push(obj);
            } else {
                extremes.min.push(-obj);
            }
        }
    }
    Ok(extremes)
}

/// Decides whether every optimal row strategy of the game with value `v` is optimal-dominated.
pub fn all_row_optima_dominated(a: &GameMatrix, v: f64, tol: f64) -> Result<bool> {
    Ok(row_optima_column_extremes(a, v, tol)?.max_deviation(v) <= tol)
}
