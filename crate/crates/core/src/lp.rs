//! Dense two-phase primal simplex with Bland's anti-cycling rule.
//!
//! Programs are stated as `maximize c^T z` subject to `G z <= h`, `E z = f` and per-variable
//! bounds `l <= z <= u` (either side may be infinite). Internally every variable is rewritten
//! as a nonnegative one (shifted, reflected or split into positive and negative parts), finite
//! ranges become extra `<=` rows, and phase one drives a set of artificial variables to zero.

use crate::error::{Error, Result};

pub const DEFAULT_FEAS_TOL: f64 = 1e-9;
/// Tableau entries at or below this magnitude are never used as pivots.
pub const PIVOT_TOL: f64 = 1e-11;
/// A reduced cost must exceed this to count as improving.
const OPTIMALITY_TOL: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub ineq_lhs: Vec<Vec<f64>>,
    pub ineq_rhs: Vec<f64>,
    pub eq_lhs: Vec<Vec<f64>>,
    pub eq_rhs: Vec<f64>,
    pub lower_bounds: Vec<f64>,
    pub upper_bounds: Vec<f64>,
}

impl LinearProgram {
    /// `maximize c^T z` over `z >= 0` with no other constraints yet.
    pub fn maximize(objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self {
            objective,
            ineq_lhs: Vec::new(),
            ineq_rhs: Vec::new(),
            eq_lhs: Vec::new(),
            eq_rhs: Vec::new(),
            lower_bounds: vec![0.0; n],
            upper_bounds: vec![f64::INFINITY; n],
        }
    }

    /// Pure feasibility problem in `n` nonnegative variables.
    pub fn feasibility(n: usize) -> Self {
        Self::maximize(vec![0.0; n])
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Adds `row . z <= rhs`.
    pub fn le(mut self, row: Vec<f64>, rhs: f64) -> Self {
        self.ineq_lhs.push(row);
        self.ineq_rhs.push(rhs);
        self
    }

    /// Adds `row . z >= rhs` as `-row . z <= -rhs`.
    pub fn ge(self, row: Vec<f64>, rhs: f64) -> Self {
        let neg = row.into_iter().map(|v| -v).collect();
        self.le(neg, -rhs)
    }

    /// Adds `row . z = rhs`.
    pub fn eq(mut self, row: Vec<f64>, rhs: f64) -> Self {
        self.eq_lhs.push(row);
        self.eq_rhs.push(rhs);
        self
    }

    pub fn bounds(mut self, var: usize, lower: f64, upper: f64) -> Self {
        self.lower_bounds[var] = lower;
        self.upper_bounds[var] = upper;
        self
    }

    pub fn free(self, var: usize) -> Self {
        self.bounds(var, f64::NEG_INFINITY, f64::INFINITY)
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        let mismatch = |expected, actual| Error::DimensionMismatch { expected, actual };
        if self.ineq_lhs.len() != self.ineq_rhs.len() {
            return Err(mismatch(self.ineq_lhs.len(), self.ineq_rhs.len()));
        }
        if self.eq_lhs.len() != self.eq_rhs.len() {
            return Err(mismatch(self.eq_lhs.len(), self.eq_rhs.len()));
        }
        if self.lower_bounds.len() != n {
            return Err(mismatch(n, self.lower_bounds.len()));
        }
        if self.upper_bounds.len() != n {
            return Err(mismatch(n, self.upper_bounds.len()));
        }
        for row in self.ineq_lhs.iter().chain(&self.eq_lhs) {
            if row.len() != n {
                return Err(mismatch(n, row.len()));
            }
        }
        let finite = self
            .objective
            .iter()
            .chain(self.ineq_lhs.iter().flatten())
            .chain(&self.ineq_rhs)
            .chain(self.eq_lhs.iter().flatten())
            .chain(&self.eq_rhs)
            .all(|v| v.is_finite());
        let bounds_ok = self
            .lower_bounds
            .iter()
            .zip(&self.upper_bounds)
            .all(|(l, u)| !l.is_nan() && !u.is_nan() && *l != f64::INFINITY && *u != f64::NEG_INFINITY);
        if !finite || !bounds_ok {
            return Err(Error::InvalidMatrix(
                "linear program contains non-finite coefficients or invalid bounds".into(),
            ));
        }
        Ok(())
    }

    /// Largest violation of any constraint or bound at `z`.
    pub fn residual(&self, z: &[f64]) -> f64 {
        let dot = |row: &[f64]| row.iter().zip(z).map(|(a, b)| a * b).sum::<f64>();
        let mut worst = 0.0f64;
        for (row, &h) in self.ineq_lhs.iter().zip(&self.ineq_rhs) {
            worst = worst.max(dot(row) - h);
        }
        for (row, &f) in self.eq_lhs.iter().zip(&self.eq_rhs) {
            worst = worst.max((dot(row) - f).abs());
        }
        for ((&v, &l), &u) in z.iter().zip(&self.lower_bounds).zip(&self.upper_bounds) {
            worst = worst.max(l - v).max(v - u);
        }
        worst
    }

    pub fn objective_at(&self, z: &[f64]) -> f64 {
        self.objective.iter().zip(z).map(|(c, v)| c * v).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Present only when `status` is `Optimal`.
    pub point: Option<Vec<f64>>,
    pub objective_value: Option<f64>,
    pub primal_residual: f64,
}

impl LpSolution {
    fn without_point(status: LpStatus) -> Self {
        Self {
            status,
            point: None,
            objective_value: None,
            primal_residual: 0.0,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// How an original variable is expressed through nonnegative tableau columns.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    /// `z = offset + s`
    Shifted { col: usize, offset: f64 },
    /// `z = offset - s`
    Reflected { col: usize, offset: f64 },
    /// `z = s+ - s-`
    Split { pos: usize, neg: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RowKind {
    Le,
    Eq,
}

struct Tableau {
    /// Constraint rows, each `width + 1` long with the right-hand side last.
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    width: usize,
    iterations: usize,
    limit: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize, cost_row: &mut [f64]) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[c] = 0.0;
                let rhs = &mut row[self.width];
                if *rhs < 0.0 && *rhs > -PIVOT_TOL {
                    *rhs = 0.0;
                }
            }
        }
        let f = cost_row[c];
        if f != 0.0 {
            for (v, pv) in cost_row.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            cost_row[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Reduced costs for `cost` (maximization) plus the current objective in the last slot,
    /// stored negated so that pivoting updates it like a constraint row.
    fn cost_row(&self, cost: &[f64]) -> Vec<f64> {
        let mut d: Vec<f64> = cost.to_vec();
        d.push(0.0);
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = cost[b];
            if cb != 0.0 {
                for (dv, tv) in d.iter_mut().zip(&self.rows[i]) {
                    *dv -= cb * tv;
                }
            }
        }
        d
    }

    /// Runs primal simplex on `cost` with Bland's rule over columns `< allowed`.
    /// Returns `Ok(true)` at optimality and `Ok(false)` on an unbounded ray.
    fn optimize(&mut self, cost: &[f64], allowed: usize) -> Result<bool> {
        let mut d = self.cost_row(cost);
        loop {
            let Some(enter) = (0..allowed).find(|&j| d[j] > OPTIMALITY_TOL) else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][enter];
                if a > PIVOT_TOL {
                    let ratio = self.rhs(i).max(0.0) / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((k, best)) => {
                            if ratio < best || (ratio == best && self.basis[i] < self.basis[k]) {
                                Some((i, ratio))
                            } else {
                                Some((k, best))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Ok(false);
            };
            self.iterations += 1;
            if self.iterations > self.limit {
                return Err(Error::IterationLimit(self.limit));
            }
            self.pivot(r, enter, &mut d);
        }
    }
}

/// Solves `p` with the two-phase simplex method.
///
/// `feas_tol` bounds both the phase-one infeasibility threshold and the residual of any
/// reported optimum; an optimum whose residual exceeds it is reported as an error rather
/// than returned.
pub fn solve_lp(p: &LinearProgram, feas_tol: f64) -> Result<LpSolution> {
    p.validate()?;
    if !(feas_tol > 0.0) {
        return Err(Error::InvalidMatrix(format!(
            "feasibility tolerance must be positive, got {feas_tol}"
        )));
    }
    let n = p.num_vars();

    let mut maps = Vec::with_capacity(n);
    let mut ncols = 0usize;
    let mut range_rows: Vec<(usize, f64)> = Vec::new();
    for j in 0..n {
        let (l, u) = (p.lower_bounds[j], p.upper_bounds[j]);
        if l > u {
            return Ok(LpSolution::without_point(LpStatus::Infeasible));
        }
        let map = if l.is_finite() {
            if u.is_finite() {
                range_rows.push((ncols, u - l));
            }
            VarMap::Shifted { col: ncols, offset: l }
        } else if u.is_finite() {
            VarMap::Reflected { col: ncols, offset: u }
        } else {
            ncols += 1;
            VarMap::Split {
                pos: ncols - 1,
                neg: ncols,
            }
        };
        ncols += 1;
        maps.push(map);
    }

    // Rewrite a row over original variables into one over tableau columns.
    let translate = |row: &[f64], rhs: f64| -> (Vec<f64>, f64) {
        let mut out = vec![0.0; ncols];
        let mut rhs = rhs;
        for (a, map) in row.iter().zip(&maps) {
            match *map {
                VarMap::Shifted { col, offset } => {
                    out[col] += a;
                    rhs -= a * offset;
                }
                VarMap::Reflected { col, offset } => {
                    out[col] -= a;
                    rhs -= a * offset;
                }
                VarMap::Split { pos, neg } => {
                    out[pos] += a;
                    out[neg] -= a;
                }
            }
        }
        (out, rhs)
    };

    let mut constraints: Vec<(Vec<f64>, RowKind, f64)> = Vec::new();
    for (row, &h) in p.ineq_lhs.iter().zip(&p.ineq_rhs) {
        let (r, h) = translate(row, h);
        constraints.push((r, RowKind::Le, h));
    }
    for &(col, width) in &range_rows {
        let mut r = vec![0.0; ncols];
        r[col] = 1.0;
        constraints.push((r, RowKind::Le, width));
    }
    for (row, &f) in p.eq_lhs.iter().zip(&p.eq_rhs) {
        let (r, f) = translate(row, f);
        constraints.push((r, RowKind::Eq, f));
    }

    let nslack = constraints
        .iter()
        .filter(|(_, k, _)| *k == RowKind::Le)
        .count();
    let nart = constraints
        .iter()
        .filter(|(_, k, h)| *k == RowKind::Eq || *h < 0.0)
        .count();
    let slack_start = ncols;
    let art_start = ncols + nslack;
    let width = art_start + nart;

    let mut rows = Vec::with_capacity(constraints.len());
    let mut basis = Vec::with_capacity(constraints.len());
    let (mut next_slack, mut next_art) = (slack_start, art_start);
    for (coeffs, kind, rhs) in constraints {
        let mut row = vec![0.0; width + 1];
        row[..ncols].copy_from_slice(&coeffs);
        if kind == RowKind::Le {
            row[next_slack] = 1.0;
        }
        row[width] = rhs;
        let flip = rhs < 0.0;
        if flip {
            for v in row.iter_mut() {
                *v = -*v;
            }
        }
        if kind == RowKind::Le && !flip {
            basis.push(next_slack);
        } else {
            row[next_art] = 1.0;
            basis.push(next_art);
            next_art += 1;
        }
        if kind == RowKind::Le {
            next_slack += 1;
        }
        rows.push(row);
    }

    let limit = 50 * (width + rows.len()).max(1);
    let mut t = Tableau {
        rows,
        basis,
        width,
        iterations: 0,
        limit,
    };

    if nart > 0 {
        let mut phase1 = vec![0.0; width];
        for c in phase1.iter_mut().skip(art_start) {
            *c = -1.0;
        }
        t.optimize(&phase1, width)?;
        let infeasibility: f64 = t
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| b >= art_start)
            .map(|(i, _)| t.rhs(i))
            .sum();
        if infeasibility > feas_tol {
            return Ok(LpSolution::without_point(LpStatus::Infeasible));
        }
        // Drive zero-level artificials out of the basis; drop rows that are redundant.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= art_start {
                let candidate = (0..art_start)
                    .filter(|&j| t.rows[i][j].abs() > PIVOT_TOL)
                    .max_by(|&a, &b| t.rows[i][a].abs().total_cmp(&t.rows[i][b].abs()));
                match candidate {
                    Some(j) => {
                        let mut scratch = vec![0.0; width + 1];
                        t.pivot(i, j, &mut scratch);
                    }
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    let mut phase2 = vec![0.0; width];
    let (obj_cols, _) = translate(&p.objective, 0.0);
    phase2[..ncols].copy_from_slice(&obj_cols);
    if !t.optimize(&phase2, art_start)? {
        return Ok(LpSolution::without_point(LpStatus::Unbounded));
    }

    let mut cols = vec![0.0; width];
    for (i, &b) in t.basis.iter().enumerate() {
        cols[b] = t.rhs(i).max(0.0);
    }
    let point: Vec<f64> = maps
        .iter()
        .map(|m| match *m {
            VarMap::Shifted { col, offset } => offset + cols[col],
            VarMap::Reflected { col, offset } => offset - cols[col],
            VarMap::Split { pos, neg } => cols[pos] - cols[neg],
        })
        .collect();
    let residual = p.residual(&point);
    if residual > feas_tol {
        return Err(Error::InaccurateSolution {
            residual,
            tolerance: feas_tol,
        });
    }
    Ok(LpSolution {
        status: LpStatus::Optimal,
        objective_value: Some(p.objective_at(&point)),
        point: Some(point),
        primal_residual: residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(p: &LinearProgram) -> LpSolution {
        solve_lp(p, DEFAULT_FEAS_TOL).unwrap()
    }

    #[test]
    fn box_maximum() {
        let p = LinearProgram::maximize(vec![1.0, 1.0])
            .le(vec![1.0, 0.0], 1.0)
            .le(vec![0.0, 1.0], 1.0);
        let s = solve(&p);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective_value.unwrap() - 2.0).abs() < 1e-12);
        let z = s.point.unwrap();
        assert!((z[0] - 1.0).abs() < 1e-12 && (z[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_negative_cap() {
        let p = LinearProgram::maximize(vec![1.0]).le(vec![1.0], -1.0);
        assert_eq!(solve(&p).status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_ray() {
        let p = LinearProgram::maximize(vec![1.0]);
        assert_eq!(solve(&p).status, LpStatus::Unbounded);
    }

    #[test]
    fn equalities_and_free_variables() {
        // maximize -(a) with a free, a = b - 3, b in [1, 2]  =>  a = -2
        let p = LinearProgram::maximize(vec![-1.0, 0.0])
            .free(0)
            .bounds(1, 1.0, 2.0)
            .eq(vec![1.0, -1.0], -3.0);
        let s = solve(&p);
        assert_eq!(s.status, LpStatus::Optimal);
        let z = s.point.unwrap();
        assert!((z[0] + 2.0).abs() < 1e-12, "{z:?}");
        assert!((z[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn upper_bounded_only_variable() {
        // maximize z with z <= 4, lower bound -inf
        let p = LinearProgram::maximize(vec![1.0]).bounds(0, f64::NEG_INFINITY, 4.0);
        let s = solve(&p);
        assert!((s.objective_value.unwrap() - 4.0).abs() < 1e-12);
        let p = LinearProgram::maximize(vec![-1.0]).bounds(0, f64::NEG_INFINITY, 4.0);
        assert_eq!(solve(&p).status, LpStatus::Unbounded);
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        let p = LinearProgram::maximize(vec![1.0, 2.0])
            .eq(vec![1.0, 1.0], 1.0)
            .eq(vec![2.0, 2.0], 2.0);
        let s = solve(&p);
        assert!((s.objective_value.unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn crossed_bounds_infeasible() {
        let p = LinearProgram::maximize(vec![1.0]).bounds(0, 2.0, 1.0);
        assert_eq!(solve(&p).status, LpStatus::Infeasible);
    }

    #[test]
    fn dimension_errors() {
        let p = LinearProgram::maximize(vec![1.0, 1.0]).le(vec![1.0], 1.0);
        assert!(matches!(
            solve_lp(&p, 1e-9),
            Err(Error::DimensionMismatch { .. })
        ));
        let mut p = LinearProgram::maximize(vec![1.0]);
        p.ineq_rhs.push(1.0);
        assert!(solve_lp(&p, 1e-9).is_err());
    }

    #[test]
    fn beale_cycling_example_terminates() {
        // Classic instance on which the largest-coefficient rule cycles.
        let p = LinearProgram::maximize(vec![0.75, -150.0, 0.02, -6.0])
            .le(vec![0.25, -60.0, -0.04, 9.0], 0.0)
            .le(vec![0.5, -90.0, -0.02, 3.0], 0.0)
            .le(vec![0.0, 0.0, 1.0, 0.0], 1.0);
        let s = solve(&p);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective_value.unwrap() - 0.05).abs() < 1e-12);
    }
}
